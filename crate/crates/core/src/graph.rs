//! Enumeration of `Γ_n` and its connected components.
//!
//! Vertices are kept as a sorted dense array of packed indices
//! `(rank(u)·N + rank(v))·N + rank(w)` with `N = n!` and lexicographic ranks.
//! Edges are generated from base triples (length sum one short of a vertex):
//! for every column where all three arguments ascend, the three completions
//! form a triangle, and the triangle is merged into a union-find.

use std::io::{self, Write};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dc::{binom2, SchubertProblem};
use crate::perm::{all_permutations, Grassmannian, Permutation};
use crate::schubert::symmetric_number;

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 6;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("degree {0} is outside the supported range {MIN_DEGREE}..={MAX_DEGREE} (Γ_7 is roughly 343 times larger than Γ_6)")]
    UnsupportedDegree(usize),
    #[error("graph for n = {n} needs about {needed} MiB, over the {budget} MiB budget")]
    MemoryBudget { n: usize, needed: usize, budget: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Memory budget for a graph build, in MiB.
pub const DEFAULT_MEMORY_BUDGET_MIB: usize = 2048;

/// Per-rank tables for `S_n`.
pub struct PermTable {
    n: usize,
    perms: Vec<Permutation>,
    length: Vec<u8>,
    descents: Vec<u32>,
    /// `swap[r * (n-1) + (i-1)]` is the rank of `perm(r)·s_i`.
    swap: Vec<u16>,
    /// Ranks of each length, ascending.
    by_length: Vec<Vec<u16>>,
    /// Index of a rank inside its length class.
    pos_in_length: Vec<u32>,
}

impl PermTable {
    pub fn new(n: usize) -> Self {
        let perms = all_permutations(n);
        let length: Vec<u8> = perms.iter().map(|p| p.length() as u8).collect();
        let descents = perms.iter().map(|p| p.descent_mask()).collect();
        let mut swap = Vec::with_capacity(perms.len() * (n - 1));
        for p in &perms {
            for i in 1..n {
                swap.push(p.right_mult_s(i).unwrap().lex_rank() as u16);
            }
        }
        let mut by_length = vec![Vec::new(); binom2(n) + 1];
        let mut pos_in_length = vec![0u32; perms.len()];
        for (r, &l) in length.iter().enumerate() {
            pos_in_length[r] = by_length[l as usize].len() as u32;
            by_length[l as usize].push(r as u16);
        }
        PermTable { n, perms, length, descents, swap, by_length, pos_in_length }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, r: usize) -> &Permutation {
        &self.perms[r]
    }

    #[inline]
    fn swap(&self, r: usize, col: usize) -> usize {
        self.swap[r * (self.n - 1) + col - 1] as usize
    }

    fn of_length(&self, l: isize) -> &[u16] {
        if l < 0 || l as usize >= self.by_length.len() {
            &[]
        } else {
            &self.by_length[l as usize]
        }
    }
}

/// Packed vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexIndex(pub u32);

/// All vertices of `Γ_n` with O(1) position lookup.
pub struct GraphIndex {
    table: PermTable,
    top: usize,
    vertices: Vec<u32>,
    /// Start of the block for each `(rank(u), rank(v))`.
    offsets: Vec<u32>,
}

impl GraphIndex {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        Self::with_budget(n, DEFAULT_MEMORY_BUDGET_MIB)
    }

    pub fn with_budget(n: usize, budget_mib: usize) -> Result<Self, GraphError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(GraphError::UnsupportedDegree(n));
        }
        let count = poincare_vertex_count(n) as usize;
        // packed id, parent, size and label per vertex
        let needed = (count * 16) >> 20;
        if needed > budget_mib {
            return Err(GraphError::MemoryBudget { n, needed, budget: budget_mib });
        }
        let table = PermTable::new(n);
        let big_n = table.count();
        let top = binom2(n);
        let mut offsets = Vec::with_capacity(big_n * big_n);
        let mut vertices = Vec::with_capacity(count);
        for ru in 0..big_n {
            for rv in 0..big_n {
                offsets.push(vertices.len() as u32);
                let lw = top as isize - table.length[ru] as isize - table.length[rv] as isize;
                let base = ((ru * big_n + rv) * big_n) as u32;
                vertices.extend(table.of_length(lw).iter().map(|&rw| base + rw as u32));
            }
        }
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Ok(GraphIndex { table, top, vertices, offsets })
    }

    pub fn degree(&self) -> usize {
        self.table.n
    }

    pub fn table(&self) -> &PermTable {
        &self.table
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn packed(&self, pos: usize) -> VertexIndex {
        VertexIndex(self.vertices[pos])
    }

    fn ranks(&self, pos: usize) -> (usize, usize, usize) {
        let big_n = self.table.count();
        let k = self.vertices[pos] as usize;
        (k / (big_n * big_n), (k / big_n) % big_n, k % big_n)
    }

    pub fn decode(&self, pos: usize) -> SchubertProblem {
        let (ru, rv, rw) = self.ranks(pos);
        SchubertProblem {
            u: self.table.perm(ru).clone(),
            v: self.table.perm(rv).clone(),
            w: self.table.perm(rw).clone(),
        }
    }

    #[inline]
    fn position_of_ranks(&self, ru: usize, rv: usize, rw: usize) -> usize {
        let big_n = self.table.count();
        (self.offsets[ru * big_n + rv] + self.table.pos_in_length[rw]) as usize
    }

    /// Position of a vertex in the dense array.
    pub fn position(&self, p: &SchubertProblem) -> Option<usize> {
        if p.degree() != self.degree() || !p.is_vertex() {
            return None;
        }
        let pos = self.position_of_ranks(p.u.lex_rank(), p.v.lex_rank(), p.w.lex_rank());
        debug_assert_eq!(self.decode(pos), *p);
        Some(pos)
    }

    pub fn is_trivial(&self, pos: usize) -> bool {
        let (ru, rv, rw) = self.ranks(pos);
        let t = &self.table;
        let all = (1u32 << (t.n - 1)) - 1;
        (t.descents[ru] | t.descents[rv] | t.descents[rw]) != all
    }

    /// Triangles generated by base triples whose first argument has rank
    /// `ru`, as dense positions.
    pub fn triangles_for_first(&self, ru: usize) -> Vec<[u32; 3]> {
        let t = &self.table;
        let n = t.n;
        let all = (1u32 << (n - 1)) - 1;
        let base_sum = self.top as isize - 1;
        let mut out = Vec::new();
        for rv in 0..t.count() {
            let lw = base_sum - t.length[ru] as isize - t.length[rv] as isize;
            let d_uv = t.descents[ru] | t.descents[rv];
            if d_uv == all {
                continue;
            }
            for &rw in t.of_length(lw) {
                let rw = rw as usize;
                let mut free = all & !(d_uv | t.descents[rw]);
                while free != 0 {
                    let col = free.trailing_zeros() as usize + 1;
                    free &= free - 1;
                    out.push([
                        self.position_of_ranks(t.swap(ru, col), rv, rw) as u32,
                        self.position_of_ranks(ru, t.swap(rv, col), rw) as u32,
                        self.position_of_ranks(ru, rv, t.swap(rw, col)) as u32,
                    ]);
                }
            }
        }
        out
    }
}

/// Union-find with path halving and union by size.
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Oracle value annotated on a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentValue {
    Known(i64),
    Unknown,
}

impl Serialize for ComponentValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ComponentValue::Known(v) => s.serialize_i64(*v),
            ComponentValue::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub size: usize,
    pub easy: bool,
    pub has_trivial: bool,
    pub singleton: bool,
    pub grassmannian_problem: bool,
    /// Some vertex has Grassmannian permutations (exactly one descent each)
    /// in both its first and second arguments.
    #[serde(skip)]
    pub grassmannian_permutation: bool,
    /// Some vertex has a Grassmannian permutation in its first or second
    /// argument.
    #[serde(skip)]
    pub grassmannian_either: bool,
    pub value: ComponentValue,
    /// Smallest vertex of the component.
    pub sample: SchubertProblem,
    #[serde(skip)]
    pub sample_position: usize,
}

/// Components of `Γ_n` with per-vertex labels.
pub struct ComponentReport {
    pub n: usize,
    pub vertex_count: usize,
    pub dc_trivial_vertex_count: usize,
    /// Sorted by smallest vertex.
    pub components: Vec<Component>,
    /// Component index per dense vertex position.
    pub labels: Vec<u32>,
    pub index: GraphIndex,
}

/// JSON summary of a [`ComponentReport`]. Components containing a
/// dc-trivial vertex are counted, not listed.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub n: usize,
    pub vertices: usize,
    pub dc_trivial: usize,
    pub component_count: usize,
    pub trivial_components: usize,
    pub trivial_free_components: usize,
    pub trivial_free_vertices: usize,
    pub easy_component_size: usize,
    pub singletons: usize,
    pub components: Vec<Component>,
}

impl ComponentReport {
    pub fn trivial_free(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.has_trivial)
    }

    pub fn easy_component(&self) -> Option<&Component> {
        self.components.iter().find(|c| c.easy)
    }

    pub fn label_of(&self, p: &SchubertProblem) -> Option<u32> {
        self.index.position(p).map(|pos| self.labels[pos])
    }

    pub fn summary(&self) -> ReportSummary {
        let free: Vec<Component> = self.trivial_free().cloned().collect();
        ReportSummary {
            n: self.n,
            vertices: self.vertex_count,
            dc_trivial: self.dc_trivial_vertex_count,
            component_count: self.components.len(),
            trivial_components: self.components.len() - free.len(),
            trivial_free_components: free.len(),
            trivial_free_vertices: free.iter().map(|c| c.size).sum(),
            easy_component_size: self.easy_component().map_or(0, |c| c.size),
            singletons: free.iter().filter(|c| c.singleton).count(),
            components: free,
        }
    }

    /// Little-endian `u32` component labels aligned with the sorted vertex
    /// array.
    pub fn write_labels<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut buf = Vec::with_capacity(self.labels.len() * 4);
        for &l in &self.labels {
            buf.extend_from_slice(&l.to_le_bytes());
        }
        out.write_all(&buf)
    }
}

/// Coefficient of `q^{n(n-1)/2}` in `([n]_q!)^3`: the number of vertices of
/// `Γ_n`, computed without enumerating anything.
pub fn poincare_vertex_count(n: usize) -> u64 {
    // [n]_q! = ∏_{i=1..n} (1 + q + ... + q^{i-1})
    let mut fact = vec![1u64];
    for i in 1..=n {
        let mut next = vec![0u64; fact.len() + i - 1];
        for (d, &c) in fact.iter().enumerate() {
            for k in 0..i {
                next[d + k] += c;
            }
        }
        fact = next;
    }
    let top = binom2(n);
    let mut total = 0u64;
    for (a, &ca) in fact.iter().enumerate() {
        for (b, &cb) in fact.iter().enumerate() {
            if a + b <= top {
                if let Some(&cc) = fact.get(top - a - b) {
                    total += ca * cb * cc;
                }
            }
        }
    }
    total
}

/// Every vertex of `Γ_n`, in packed-index order.
pub fn enumerate_vertices(n: usize) -> Result<(usize, impl Iterator<Item = SchubertProblem>), GraphError> {
    let index = GraphIndex::new(n)?;
    let count = index.vertex_count();
    Ok((count, (0..count).map(move |pos| index.decode(pos))))
}

/// Builds the component report using the global rayon pool.
pub fn build_components(n: usize) -> Result<ComponentReport, GraphError> {
    build_components_with(GraphIndex::new(n)?)
}

/// Builds the component report on a dedicated pool of `threads` workers.
/// The result does not depend on the thread count.
pub fn build_components_threads(n: usize, threads: usize) -> Result<ComponentReport, GraphError> {
    let index = GraphIndex::new(n)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| GraphError::ThreadPool(e.to_string()))?;
    pool.install(|| build_components_with(index))
}

const CHUNK: usize = 32;

#[allow(clippy::needless_range_loop)]
fn build_components_with(index: GraphIndex) -> Result<ComponentReport, GraphError> {
    let n = index.degree();
    let count = index.vertex_count();
    let mut uf = UnionFind::new(count);
    let ranks: Vec<usize> = (0..index.table.count()).collect();
    for chunk in ranks.chunks(CHUNK) {
        let batches: Vec<Vec<[u32; 3]>> = chunk.par_iter().map(|&ru| index.triangles_for_first(ru)).collect();
        for tri in batches.iter().flatten() {
            uf.union(tri[0], tri[1]);
            uf.union(tri[0], tri[2]);
        }
    }

    let easy_pos = index.position(&SchubertProblem::easy(n)).expect("easy vertex exists");
    let mut root_to_comp = vec![u32::MAX; count];
    let mut labels = vec![0u32; count];
    let mut components: Vec<Component> = Vec::new();
    let mut trivial_vertices = 0;
    let t = &index.table;
    for pos in 0..count {
        let root = uf.find(pos as u32) as usize;
        if root_to_comp[root] == u32::MAX {
            root_to_comp[root] = components.len() as u32;
            components.push(Component {
                size: 0,
                easy: false,
                has_trivial: false,
                singleton: false,
                grassmannian_problem: false,
                grassmannian_permutation: false,
                grassmannian_either: false,
                value: ComponentValue::Unknown,
                sample: index.decode(pos),
                sample_position: pos,
            });
        }
        let label = root_to_comp[root];
        labels[pos] = label;
        let c = &mut components[label as usize];
        c.size += 1;
        if pos == easy_pos {
            c.easy = true;
        }
        if index.is_trivial(pos) {
            trivial_vertices += 1;
            c.has_trivial = true;
        }
        let (ru, rv, _) = index.ranks(pos);
        let (du, dv) = (t.descents[ru], t.descents[rv]);
        if du == dv && du.count_ones() == 1 {
            c.grassmannian_problem = true;
        }
        let (gu, gv) = (du.count_ones() == 1, dv.count_ones() == 1);
        c.grassmannian_permutation |= gu && gv;
        c.grassmannian_either |= gu || gv;
    }
    for c in &mut components {
        c.singleton = c.size == 1;
    }
    Ok(ComponentReport { n, vertex_count: count, dc_trivial_vertex_count: trivial_vertices, components, labels, index })
}

/// Outcome of [`classify_component_values`].
#[derive(Debug, Clone, Serialize)]
pub struct ValueCensus {
    pub evaluated: usize,
    pub unknown: usize,
    /// Sampled components with a dc-trivial vertex whose value was not 0.
    pub trivial_violations: Vec<SchubertProblem>,
    pub trivial_sampled: usize,
}

/// Annotates every dc-trivial-free component with the oracle value of its
/// smallest vertex, and spot-checks up to `trivial_budget` components that
/// contain a dc-trivial vertex (which must be 0). At most `free_budget`
/// dc-trivial-free components are evaluated; the rest stay `Unknown`.
pub fn classify_component_values(
    report: &mut ComponentReport,
    free_budget: usize,
    trivial_budget: usize,
) -> ValueCensus {
    let free: Vec<usize> = (0..report.components.len()).filter(|&k| !report.components[k].has_trivial).collect();
    let evaluated: Vec<(usize, i64)> =
        free.par_iter().take(free_budget).map(|&k| (k, oracle(&report.components[k].sample))).collect();
    for &(k, v) in &evaluated {
        report.components[k].value = ComponentValue::Known(v);
    }
    let trivial: Vec<usize> =
        (0..report.components.len()).filter(|&k| report.components[k].has_trivial).take(trivial_budget).collect();
    let checked: Vec<(usize, i64)> = trivial.par_iter().map(|&k| (k, oracle(&report.components[k].sample))).collect();
    let mut violations = Vec::new();
    for &(k, v) in &checked {
        report.components[k].value = ComponentValue::Known(v);
        if v != 0 {
            violations.push(report.components[k].sample.clone());
        }
    }
    ValueCensus {
        evaluated: evaluated.len(),
        unknown: free.len() - evaluated.len(),
        trivial_violations: violations,
        trivial_sampled: checked.len(),
    }
}

fn oracle(p: &SchubertProblem) -> i64 {
    symmetric_number(&p.u, &p.v, &p.w)
        .expect("component samples are vertices")
        .to_i64()
        .expect("symmetric numbers of Γ_n (n ≤ 6) fit in i64")
}

/// Grassmannian counts over dc-trivial-free components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrassmannianCensus {
    /// Components containing a Grassmannian Schubert problem.
    pub problem: usize,
    /// Same, excluding the component of `(id, id, w_0)`.
    pub problem_outside_easy: usize,
    /// Components with a vertex whose first two slots are both Grassmannian.
    pub permutation: usize,
    pub permutation_outside_easy: usize,
    /// Components with a vertex whose first or second slot is Grassmannian,
    /// excluding the easy component.
    pub either_slot_outside_easy: usize,
}

pub fn grassmannian_census(report: &ComponentReport) -> GrassmannianCensus {
    let free: Vec<&Component> = report.trivial_free().collect();
    let count = |f: &dyn Fn(&Component) -> bool, skip_easy: bool| {
        free.iter().filter(|c| !(skip_easy && c.easy) && f(c)).count()
    };
    GrassmannianCensus {
        problem: count(&|c| c.grassmannian_problem, false),
        problem_outside_easy: count(&|c| c.grassmannian_problem, true),
        permutation: count(&|c| c.grassmannian_permutation, false),
        permutation_outside_easy: count(&|c| c.grassmannian_permutation, true),
        either_slot_outside_easy: count(&|c| c.grassmannian_either, true),
    }
}

/// A Grassmannian Schubert problem: `u` and `v` have a single descent each,
/// in the same place.
pub fn is_grassmannian_problem(p: &SchubertProblem) -> bool {
    matches!(
        (p.u.is_grassmannian(), p.v.is_grassmannian()),
        (Grassmannian::At(a), Grassmannian::At(b)) if a == b
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_small() {
        assert_eq!(poincare_vertex_count(1), 1);
        assert_eq!(poincare_vertex_count(2), 3);
        assert_eq!(poincare_vertex_count(3), 35);
        let (count, vs) = enumerate_vertices(2).unwrap();
        assert_eq!(count, 3);
        let vs: Vec<_> = vs.collect();
        assert!(vs.iter().all(|p| p.is_vertex()));
    }

    #[test]
    fn unsupported_degrees() {
        assert!(matches!(GraphIndex::new(7), Err(GraphError::UnsupportedDegree(7))));
        assert!(matches!(GraphIndex::new(1), Err(GraphError::UnsupportedDegree(1))));
        assert!(matches!(GraphIndex::with_budget(6, 16), Err(GraphError::MemoryBudget { n: 6, .. })));
    }

    #[test]
    fn positions_round_trip() {
        let idx = GraphIndex::new(4).unwrap();
        for pos in 0..idx.vertex_count() {
            let p = idx.decode(pos);
            assert_eq!(idx.position(&p), Some(pos));
        }
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(1), uf.find(3));
        uf.union(1, 4);
        assert_eq!(uf.find(0), uf.find(3));
        assert_ne!(uf.find(2), uf.find(0));
    }

    #[test]
    fn gamma_3() {
        let report = build_components(3).unwrap();
        assert_eq!(report.vertex_count, 35);
        assert_eq!(report.vertex_count - report.dc_trivial_vertex_count, 21);
        let free: Vec<_> = report.trivial_free().collect();
        assert_eq!(free.len(), 1);
        assert_eq!(free[0].size, 21);
        assert!(free[0].easy);
        assert!(free[0].grassmannian_problem);
        let total: usize = report.components.iter().map(|c| c.size).sum();
        assert_eq!(total, 35);
    }

    #[test]
    fn labels_dump_layout() {
        let report = build_components(2).unwrap();
        let mut buf = Vec::new();
        report.write_labels(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 * report.vertex_count);
        assert_eq!(u32::from_le_bytes(buf[0..4].try_into().unwrap()), report.labels[0]);
    }
}
