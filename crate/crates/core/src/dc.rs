//! Schubert problems, descent-cycling moves, and search for dc-paths.
//!
//! A move at column `i` takes the unique argument with a descent at `i`
//! (the source) and hands that descent to another argument (the target):
//! both are right-multiplied by `s_i`. Total length is unchanged.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DcError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("length sum {got} is not a Schubert problem of degree {degree} (expected {expected})")]
    InvalidLengthSum { degree: usize, got: usize, expected: usize },
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: DcMove, reason: MoveRejection },
}

/// Which legality clause a move failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveRejection {
    ColumnOutOfRange {
        max: usize,
    },
    ArgumentOutOfRange,
    SameArgument,
    SourceAscends,
    TargetDescends,
    /// Two or three arguments descend in this column.
    MultipleDescents {
        count: usize,
    },
}

impl fmt::Display for MoveRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveRejection::ColumnOutOfRange { max } => write!(f, "column must be in 1..={max}"),
            MoveRejection::ArgumentOutOfRange => write!(f, "arguments are numbered 1..=3"),
            MoveRejection::SameArgument => write!(f, "source and target must differ"),
            MoveRejection::SourceAscends => write!(f, "source argument has no descent in this column"),
            MoveRejection::TargetDescends => write!(f, "target argument already descends in this column"),
            MoveRejection::MultipleDescents { count } => {
                write!(f, "column has {count} descents; cycling needs exactly one")
            }
        }
    }
}

pub(crate) fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An ordered triple of permutations of a common degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchubertProblem {
    pub u: Permutation,
    pub v: Permutation,
    pub w: Permutation,
}

impl SchubertProblem {
    /// Checks the common degree only; see [`SchubertProblem::vertex`].
    pub fn new(u: Permutation, v: Permutation, w: Permutation) -> Result<Self, DcError> {
        crate::perm::check_same_degree(&u, &v)?;
        crate::perm::check_same_degree(&u, &w)?;
        Ok(SchubertProblem { u, v, w })
    }

    /// A vertex of `Γ_n`: lengths summing to `n(n-1)/2`.
    pub fn vertex(u: Permutation, v: Permutation, w: Permutation) -> Result<Self, DcError> {
        let p = Self::new(u, v, w)?;
        p.check_vertex()?;
        Ok(p)
    }

    pub fn parse(u: &str, v: &str, w: &str) -> Result<Self, DcError> {
        Self::new(u.parse()?, v.parse()?, w.parse()?)
    }

    /// `(id, id, w_0)`.
    pub fn easy(n: usize) -> Self {
        SchubertProblem { u: Permutation::identity(n), v: Permutation::identity(n), w: Permutation::long_element(n) }
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    pub fn length_sum(&self) -> usize {
        self.u.length() + self.v.length() + self.w.length()
    }

    pub fn is_vertex(&self) -> bool {
        self.length_sum() == binom2(self.degree())
    }

    pub fn check_vertex(&self) -> Result<(), DcError> {
        let expected = binom2(self.degree());
        let got = self.length_sum();
        if got != expected {
            return Err(DcError::InvalidLengthSum { degree: self.degree(), got, expected });
        }
        Ok(())
    }

    pub fn args(&self) -> [&Permutation; 3] {
        [&self.u, &self.v, &self.w]
    }

    /// Argument by 1-based index.
    pub fn arg(&self, k: usize) -> &Permutation {
        self.args()[k - 1]
    }

    fn arg_mut(&mut self, k: usize) -> &mut Permutation {
        match k {
            1 => &mut self.u,
            2 => &mut self.v,
            _ => &mut self.w,
        }
    }

    /// Arguments (1-based) with a descent at column `i`.
    pub fn descents_at(&self, i: usize) -> Vec<usize> {
        (1..=3).filter(|&k| self.arg(k).has_descent(i)).collect()
    }

    /// First column where all three arguments ascend, if any.
    pub fn trivial_column(&self) -> Option<usize> {
        let all = (1u32 << (self.degree() - 1)) - 1;
        let mask = self.u.descent_mask() | self.v.descent_mask() | self.w.descent_mask();
        let free = all & !mask;
        (free != 0).then(|| free.trailing_zeros() as usize + 1)
    }

    /// dc-trivial: some column has three ascents. Returns the first such
    /// column.
    pub fn is_dc_trivial(&self) -> Result<Option<usize>, DcError> {
        self.check_vertex()?;
        Ok(self.trivial_column())
    }

    /// Every legal move: for each column with exactly one descent, one move to
    /// each of the other two arguments.
    pub fn legal_moves(&self) -> Result<Vec<DcMove>, DcError> {
        self.check_vertex()?;
        Ok(self.moves_unchecked())
    }

    pub(crate) fn moves_unchecked(&self) -> Vec<DcMove> {
        let mut out = Vec::new();
        for col in 1..self.degree() {
            if let [from] = self.descents_at(col)[..] {
                for to in (1..=3).filter(|&t| t != from) {
                    out.push(DcMove { col, from, to });
                }
            }
        }
        out
    }

    /// Applies `m`, reporting which legality clause fails if it is illegal.
    pub fn apply_move(&self, m: DcMove) -> Result<SchubertProblem, DcError> {
        self.check_vertex()?;
        self.check_move(m).map_err(|reason| DcError::IllegalMove { mv: m, reason })?;
        Ok(self.apply_unchecked(m))
    }

    pub fn check_move(&self, m: DcMove) -> Result<(), MoveRejection> {
        let n = self.degree();
        if m.col == 0 || m.col >= n {
            return Err(MoveRejection::ColumnOutOfRange { max: n.saturating_sub(1) });
        }
        if !(1..=3).contains(&m.from) || !(1..=3).contains(&m.to) {
            return Err(MoveRejection::ArgumentOutOfRange);
        }
        if m.from == m.to {
            return Err(MoveRejection::SameArgument);
        }
        let descents = self.descents_at(m.col);
        if descents.len() > 1 {
            return Err(MoveRejection::MultipleDescents { count: descents.len() });
        }
        if !self.arg(m.from).has_descent(m.col) {
            return Err(MoveRejection::SourceAscends);
        }
        if self.arg(m.to).has_descent(m.col) {
            return Err(MoveRejection::TargetDescends);
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&self, m: DcMove) -> SchubertProblem {
        let mut out = self.clone();
        for k in [m.from, m.to] {
            let a = out.arg_mut(k);
            *a = a.right_mult_s(m.col).expect("column checked");
        }
        out
    }

    /// Embeds `Γ_n` into `Γ_{n+1}`: `(u, v, w) ↦ (u·(n+1), v·(n+1), (w+1)·1)`.
    ///
    /// In structure-constant terms this is the standard inclusion
    /// `S_n ⊂ S_{n+1}` applied to `u`, `v` and `w_0 w`, so the symmetric
    /// Schubert number is preserved and `(id, id, w_0)` goes to
    /// `(id, id, w_0)`.
    pub fn stabilize(&self) -> Result<SchubertProblem, DcError> {
        self.check_vertex()?;
        let n = self.degree();
        let mut w: Vec<usize> = self.w.to_vec().into_iter().map(|x| x + 1).collect();
        w.push(1);
        let out = SchubertProblem { u: self.u.extend_to(n + 1), v: self.v.extend_to(n + 1), w: Permutation::new(w)? };
        debug_assert!(out.is_vertex());
        Ok(out)
    }

    /// `false` guarantees the symmetric number vanishes: some argument is not
    /// below the `w_0`-complement of another in Bruhat order. `true` means no
    /// conclusion.
    pub fn bruhat_vanishing_check(&self) -> Result<bool, DcError> {
        self.check_vertex()?;
        let args = self.args();
        for a in 0..3 {
            for b in 0..3 {
                if a != b && !args[a].bruhat_leq(&args[b].w0_complement())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for SchubertProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u, self.v, self.w)
    }
}

impl fmt::Debug for SchubertProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SchubertProblem{self}")
    }
}

/// Cycle the descent at `col` from argument `from` to argument `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DcMove {
    pub col: usize,
    pub from: usize,
    pub to: usize,
}

impl DcMove {
    pub fn new(col: usize, from: usize, to: usize) -> Self {
        DcMove { col, from, to }
    }

    pub fn reverse(self) -> Self {
        DcMove { col: self.col, from: self.to, to: self.from }
    }
}

impl fmt::Display for DcMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "col {}: {}→{}", self.col, self.from, self.to)
    }
}

/// A replayable certificate of dc-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcPath {
    pub start: SchubertProblem,
    pub moves: Vec<DcMove>,
}

impl DcPath {
    pub fn empty(start: SchubertProblem) -> Self {
        DcPath { start, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every intermediate problem, `start` first.
    pub fn replay(&self) -> Result<Vec<SchubertProblem>, DcError> {
        let mut cur = self.start.clone();
        let mut out = vec![cur.clone()];
        for &m in &self.moves {
            cur = cur.apply_move(m)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<SchubertProblem, DcError> {
        Ok(self.replay()?.pop().expect("replay includes start"))
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> Result<DcPath, DcError> {
        Ok(DcPath { start: self.end()?, moves: self.moves.iter().rev().map(|m| m.reverse()).collect() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    /// Reach `(id, id, w_0)`.
    Easy,
    /// Reach any dc-trivial problem.
    Trivial,
}

/// Breadth-first search for a shortest dc-path from `p` to the goal.
/// `None` when the goal is not in the component of `p`.
pub fn dc_path(p: &SchubertProblem, goal: Goal) -> Result<Option<DcPath>, DcError> {
    p.check_vertex()?;
    Ok(match goal {
        Goal::Easy => bidirectional(p, &SchubertProblem::easy(p.degree())),
        Goal::Trivial => search_trivial(p),
    })
}

type Parents = HashMap<SchubertProblem, Option<(SchubertProblem, DcMove)>>;

fn trace_back(parents: &Parents, end: &SchubertProblem) -> Vec<DcMove> {
    let mut moves = Vec::new();
    let mut cur = end;
    while let Some(Some((prev, m))) = parents.get(cur) {
        moves.push(*m);
        cur = prev;
    }
    moves.reverse();
    moves
}

fn search_trivial(start: &SchubertProblem) -> Option<DcPath> {
    let mut parents: Parents = HashMap::new();
    parents.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        if cur.trivial_column().is_some() {
            return Some(DcPath { start: start.clone(), moves: trace_back(&parents, &cur) });
        }
        for m in cur.moves_unchecked() {
            let next = cur.apply_unchecked(m);
            if !parents.contains_key(&next) {
                parents.insert(next.clone(), Some((cur.clone(), m)));
                queue.push_back(next);
            }
        }
    }
    None
}

fn bidirectional(start: &SchubertProblem, goal: &SchubertProblem) -> Option<DcPath> {
    if start == goal {
        return Some(DcPath::empty(start.clone()));
    }
    let mut fwd: Parents = HashMap::from([(start.clone(), None)]);
    let mut bwd: Parents = HashMap::from([(goal.clone(), None)]);
    let mut fwd_layer = vec![start.clone()];
    let mut bwd_layer = vec![goal.clone()];
    while !fwd_layer.is_empty() && !bwd_layer.is_empty() {
        let forward = fwd_layer.len() <= bwd_layer.len();
        let (layer, seen, other) =
            if forward { (&mut fwd_layer, &mut fwd, &bwd) } else { (&mut bwd_layer, &mut bwd, &fwd) };
        let mut next_layer = Vec::new();
        let mut meet = None;
        'expand: for cur in layer.iter() {
            for m in cur.moves_unchecked() {
                let next = cur.apply_unchecked(m);
                if seen.contains_key(&next) {
                    continue;
                }
                seen.insert(next.clone(), Some((cur.clone(), m)));
                if other.contains_key(&next) {
                    meet = Some(next);
                    break 'expand;
                }
                next_layer.push(next);
            }
        }
        if let Some(mid) = meet {
            let mut moves = trace_back(&fwd, &mid);
            // the backward half was discovered from the goal side, so its
            // moves are walked in reverse order and direction
            let back = trace_back(&bwd, &mid);
            moves.extend(back.iter().rev().map(|m| m.reverse()));
            return Some(DcPath { start: start.clone(), moves });
        }
        *layer = next_layer;
    }
    None
}

/// The connected component of `p` in `Γ_n`, in BFS order.
pub fn component(p: &SchubertProblem) -> Result<Vec<SchubertProblem>, DcError> {
    p.check_vertex()?;
    let mut seen = std::collections::HashSet::from([p.clone()]);
    let mut order = vec![p.clone()];
    let mut head = 0;
    while head < order.len() {
        let cur = order[head].clone();
        head += 1;
        for m in cur.moves_unchecked() {
            let next = cur.apply_unchecked(m);
            if seen.insert(next.clone()) {
                order.push(next);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(u: &str, v: &str, w: &str) -> SchubertProblem {
        SchubertProblem::parse(u, v, w).unwrap()
    }

    #[test]
    fn triviality() {
        assert_eq!(sp("3412", "1342", "1234").is_dc_trivial().unwrap(), Some(1));
        assert_eq!(sp("1234", "1234", "4321").is_dc_trivial().unwrap(), None);
        assert_eq!(sp("231645", "231645", "326154").is_dc_trivial().unwrap(), None);
        assert!(matches!(
            sp("4321", "4321", "1234").is_dc_trivial(),
            Err(DcError::InvalidLengthSum { got: 12, expected: 6, .. })
        ));
    }

    #[test]
    fn legal_move_lists() {
        let moves = sp("132", "213", "213").legal_moves().unwrap();
        assert!(moves.contains(&DcMove::new(2, 1, 3)));
        let easy = sp("1234", "1234", "4321").legal_moves().unwrap();
        assert_eq!(easy.len(), 6);
        assert!(easy.iter().all(|m| m.from == 3));
        assert!(sp("214365", "154326", "321654").legal_moves().unwrap().is_empty());
    }

    #[test]
    fn worked_example_moves() {
        let a = sp("132", "213", "213");
        let b = a.apply_move(DcMove::new(2, 1, 3)).unwrap();
        assert_eq!(b, sp("123", "213", "231"));
        let c = b.apply_move(DcMove::new(1, 2, 3)).unwrap();
        assert_eq!(c, sp("123", "123", "321"));
        assert_eq!(c.apply_move(DcMove::new(1, 3, 2)).unwrap(), b);
    }

    #[test]
    fn illegal_moves_say_why() {
        let p = sp("132", "213", "213");
        let reason = |m| match p.apply_move(m) {
            Err(DcError::IllegalMove { reason, .. }) => reason,
            other => panic!("expected rejection, got {other:?}"),
        };
        assert_eq!(reason(DcMove::new(1, 2, 1)), MoveRejection::MultipleDescents { count: 2 });
        assert_eq!(reason(DcMove::new(2, 2, 3)), MoveRejection::SourceAscends);
        assert_eq!(reason(DcMove::new(3, 1, 2)), MoveRejection::ColumnOutOfRange { max: 2 });
        assert_eq!(reason(DcMove::new(2, 1, 1)), MoveRejection::SameArgument);
        assert_eq!(reason(DcMove::new(2, 1, 4)), MoveRejection::ArgumentOutOfRange);
        let q = sp("123", "123", "321");
        assert!(matches!(
            q.apply_move(DcMove::new(1, 1, 3)),
            Err(DcError::IllegalMove { reason: MoveRejection::SourceAscends, .. })
        ));
    }

    #[test]
    fn paths() {
        let p = sp("1324", "3142", "1423");
        let path = dc_path(&p, Goal::Easy).unwrap().unwrap();
        assert!(!path.is_empty());
        assert_eq!(path.end().unwrap(), SchubertProblem::easy(4));

        let q = sp("1324", "2143", "2341");
        let path = dc_path(&q, Goal::Trivial).unwrap().unwrap();
        assert!(path.end().unwrap().trivial_column().is_some());
        assert!(dc_path(&q, Goal::Easy).unwrap().is_none());

        let lone = sp("214365", "154326", "321654");
        assert!(dc_path(&lone, Goal::Easy).unwrap().is_none());
        assert!(dc_path(&lone, Goal::Trivial).unwrap().is_none());
        assert_eq!(component(&lone).unwrap().len(), 1);

        let e = SchubertProblem::easy(3);
        assert!(dc_path(&e, Goal::Easy).unwrap().unwrap().is_empty());
    }

    #[test]
    fn reversed_path_returns() {
        let p = sp("1324", "3142", "1423");
        let path = dc_path(&p, Goal::Easy).unwrap().unwrap();
        let back = path.reversed().unwrap();
        assert_eq!(back.start, SchubertProblem::easy(4));
        assert_eq!(back.end().unwrap(), p);
    }

    #[test]
    fn stabilization() {
        let p = sp("2143", "1243", "3214");
        assert_eq!(p.stabilize().unwrap(), sp("21435", "12435", "43251"));
        assert_eq!(sp("1", "1", "1").stabilize().unwrap(), sp("12", "12", "21"));
        assert_eq!(sp("123", "123", "321").stabilize().unwrap(), SchubertProblem::easy(4));
        // the literal "1(w+1)" reading does not land on a vertex
        assert!(!sp("21435", "12435", "14325").is_vertex());
        assert!(sp("123", "123", "123").stabilize().is_err());
    }

    #[test]
    fn bruhat_vanishing() {
        assert!(sp("1234", "1234", "4321").bruhat_vanishing_check().unwrap());
        assert!(sp("4321", "4321", "1234").bruhat_vanishing_check().is_err());
    }

    #[test]
    fn json_shapes() {
        let p = sp("132", "213", "213");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"u":[1,3,2],"v":[2,1,3],"w":[2,1,3]}"#);
        let m = DcMove::new(2, 1, 3);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"col":2,"from":1,"to":3}"#);
        let back: SchubertProblem = serde_json::from_str(r#"{"u":"132","v":[2,1,3],"w":"213"}"#).unwrap();
        assert_eq!(back, p);
    }
}
