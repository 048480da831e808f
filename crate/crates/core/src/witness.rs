//! Explicit intersection flags for dc-easy problems.
//!
//! Flags are invertible matrices whose first `i` rows span `F_i`. `F` is
//! `w`-close to `G` when `dim(F_i ∩ G_j) ≥ #{k ≤ i : w(k) > n − j}` for all
//! `i, j`. Starting from `F = C` at `(id, id, w_0)`, a dc-path is replayed
//! backwards and each move that hands a descent at column `i` back to some
//! argument recomputes `F_i` from its neighbours.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::dc::{dc_path, DcError, DcPath, Goal, SchubertProblem};
use crate::perm::Permutation;

pub const DEFAULT_PRIME: u64 = 1_048_583;
pub const MAX_ATTEMPTS: u64 = 5;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Dc(#[from] DcError),
    #[error("flags have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("rank table is not that of a permutation: {0}")]
    RankTable(String),
    #[error("path ends at {0}, not at (id, id, w0)")]
    PathEnd(SchubertProblem),
    #[error("{0} is not dc-equivalent to (id, id, w0)")]
    NotEasy(SchubertProblem),
    #[error("degenerate flags at step {step}: {reason}")]
    Degenerate { step: usize, reason: String },
    #[error("no generic configuration after {attempts} seeds starting at {seed}")]
    Exhausted { seed: u64, attempts: u64 },
}

/// Exact field used for flag coordinates.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const NAME: &'static str;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn sample(rng: &mut ChaCha8Rng) -> Self;
    /// A flag row as integers; rows may be rescaled by a nonzero constant.
    fn row_to_json(row: &[Self]) -> Vec<serde_json::Value>;
}

/// Integers modulo [`DEFAULT_PRIME`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    pub fn new(x: i64) -> Self {
        Fp(x.rem_euclid(DEFAULT_PRIME as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    const NAME: &'static str = "F_1048583";

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % DEFAULT_PRIME)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + DEFAULT_PRIME - o.0) % DEFAULT_PRIME)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(self.0 * o.0 % DEFAULT_PRIME)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        let (mut base, mut exp, mut acc) = (self.0, DEFAULT_PRIME - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % DEFAULT_PRIME;
            }
            base = base * base % DEFAULT_PRIME;
            exp >>= 1;
        }
        Fp(acc)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        Fp(rng.gen_range(0..DEFAULT_PRIME))
    }
    fn row_to_json(row: &[Self]) -> Vec<serde_json::Value> {
        row.iter().map(|x| x.0.into()).collect()
    }
}

/// Rationals; random entries are integers in `-1000..=1000`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Q(pub BigRational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Q {
    const NAME: &'static str = "Q";

    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn add(&self, o: &Self) -> Self {
        Q(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Q(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Q(&self.0 * &o.0)
    }
    fn inv(&self) -> Self {
        Q(self.0.recip())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        Q(BigRational::from_integer(BigInt::from(rng.gen_range(-1000i64..=1000))))
    }
    fn row_to_json(row: &[Self]) -> Vec<serde_json::Value> {
        // clear denominators, then divide out the content
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.0.denom()));
        let ints: Vec<BigInt> = row.iter().map(|x| x.0.numer() * (&lcm / x.0.denom())).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        ints.iter()
            .map(|x| {
                let x = if content.is_zero() { x.clone() } else { x / &content };
                x.to_i64().map_or_else(|| x.to_string().into(), Into::into)
            })
            .collect()
    }
}

/// Row-reduces in place; returns the pivot columns. Zero rows are dropped.
#[allow(clippy::needless_range_loop)]
fn rref<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][col].is_zero() {
                let factor = rows[k][col].clone();
                for c in 0..width {
                    let t = rows[r][c].mul(&factor);
                    rows[k][c] = rows[k][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `F^n` in reduced row echelon form, so equal subspaces
/// compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<F> {
    n: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn span(n: usize, rows: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut rows: Vec<Vec<F>> = rows.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == n));
        rref(&mut rows);
        Subspace { n, rows }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        Self::span(n, (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn contains(&self, v: &[F]) -> bool {
        Self::span(self.n, self.rows.iter().cloned().chain([v.to_vec()])).dim() == self.dim()
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(self.n, self.rows.iter().chain(&other.rows).cloned())
    }

    /// Vectors `x` with `r · x = 0` for every basis row `r`.
    pub fn annihilator(&self) -> Self {
        let n = self.n;
        let mut rows = self.rows.clone();
        let pivots = rref(&mut rows);
        let free = (0..n).filter(|c| !pivots.contains(c));
        let basis = free.map(|f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = F::zero().sub(&rows[r][f]);
            }
            v
        });
        Self::span(n, basis.collect::<Vec<_>>())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// `dim(self ∩ other)` by the rank formula.
    pub fn meet_dim(&self, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

/// An invertible matrix; `F_i` is the span of its first `i` rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagMatrix<F> {
    rows: Vec<Vec<F>>,
}

impl<F: Field> FlagMatrix<F> {
    pub fn new(rows: Vec<Vec<F>>) -> Result<Self, WitnessError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(WitnessError::SizeMismatch(n, rows.iter().map(Vec::len).max().unwrap_or(0)));
        }
        if Subspace::span(n, rows.clone()).dim() != n {
            return Err(WitnessError::Singular);
        }
        Ok(FlagMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        FlagMatrix { rows: Subspace::<F>::whole(n).rows }
    }

    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Result<Self, WitnessError> {
        Self::new((0..n).map(|_| (0..n).map(|_| F::sample(rng)).collect()).collect())
    }

    /// Flag through a chain `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_n`.
    pub fn from_chain(chain: &[Subspace<F>]) -> Result<Self, WitnessError> {
        let n = chain.len() - 1;
        let mut rows = Vec::with_capacity(n);
        for i in 1..=n {
            let v = chain[i].basis().iter().find(|v| !chain[i - 1].contains(v)).ok_or(WitnessError::Singular)?;
            rows.push(v.clone());
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn subspace(&self, i: usize) -> Subspace<F> {
        Subspace::span(self.n(), self.rows[..i].iter().cloned())
    }

    pub fn chain(&self) -> Vec<Subspace<F>> {
        (0..=self.n()).map(|i| self.subspace(i)).collect()
    }

    /// Same flag, possibly different matrices.
    pub fn same_flag(&self, other: &Self) -> bool {
        self.n() == other.n() && (1..self.n()).all(|i| self.subspace(i) == other.subspace(i))
    }
}

impl<F: Field> Serialize for FlagMatrix<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = self.rows.iter().map(|r| F::row_to_json(r)).collect();
        serde_json::json!({ "field": F::NAME, "rows": rows }).serialize(s)
    }
}

/// `r(i, j) = dim(F_i ∩ G_j)` for `0 ≤ i, j ≤ n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RankProfile {
    pub n: usize,
    pub r: Vec<Vec<usize>>,
}

impl RankProfile {
    pub fn of_flags<F: Field>(f: &FlagMatrix<F>, g: &FlagMatrix<F>) -> Result<Self, WitnessError> {
        if f.n() != g.n() {
            return Err(WitnessError::SizeMismatch(f.n(), g.n()));
        }
        let (fc, gc) = (f.chain(), g.chain());
        let r = fc.iter().map(|fi| gc.iter().map(|gj| fi.meet_dim(gj)).collect()).collect();
        let profile = RankProfile { n: f.n(), r };
        profile.check()?;
        Ok(profile)
    }

    /// `r_w(i, j) = #{k ≤ i : w(k) > n − j}`.
    pub fn of_permutation(w: &Permutation) -> Self {
        let n = w.degree();
        let r = (0..=n).map(|i| (0..=n).map(|j| (1..=i).filter(|&k| w.at(k) + j > n).count()).collect()).collect();
        RankProfile { n, r }
    }

    pub fn check(&self) -> Result<(), WitnessError> {
        let n = self.n;
        let bad = |msg: String| Err(WitnessError::RankTable(msg));
        for i in 0..=n {
            for j in 0..=n {
                let v = self.r[i][j];
                if v < (i + j).saturating_sub(n) || v > i.min(j) {
                    return bad(format!("r({i},{j}) = {v} out of bounds"));
                }
                if i > 0 && !(self.r[i - 1][j] <= v && v <= self.r[i - 1][j] + 1) {
                    return bad(format!("row step at ({i},{j})"));
                }
                if j > 0 && !(self.r[i][j - 1] <= v && v <= self.r[i][j - 1] + 1) {
                    return bad(format!("column step at ({i},{j})"));
                }
            }
            if self.r[n][i] != i || self.r[i][n] != i {
                return bad(format!("boundary at {i}"));
            }
        }
        Ok(())
    }

    pub fn dominates(&self, other: &Self) -> bool {
        self.r.iter().flatten().zip(other.r.iter().flatten()).all(|(a, b)| a >= b)
    }

    /// The permutation with this rank table.
    pub fn permutation(&self) -> Result<Permutation, WitnessError> {
        let n = self.n;
        let word: Vec<usize> = (1..=n)
            .map(|k| {
                let j = (1..=n).find(|&j| self.r[k][j] - self.r[k - 1][j] == 1).unwrap_or(n + 1);
                n + 1 - j
            })
            .collect();
        let w = Permutation::new(word).map_err(|e| WitnessError::RankTable(e.to_string()))?;
        if RankProfile::of_permutation(&w) != *self {
            return Err(WitnessError::RankTable("not a permutation table".into()));
        }
        Ok(w)
    }
}

pub fn relative_position<F: Field>(f: &FlagMatrix<F>, g: &FlagMatrix<F>) -> Result<Permutation, WitnessError> {
    RankProfile::of_flags(f, g)?.permutation()
}

/// `F` is `w`-close or closer to `G`.
pub fn satisfies_position<F: Field>(f: &FlagMatrix<F>, g: &FlagMatrix<F>, w: &Permutation) -> bool {
    match RankProfile::of_flags(f, g) {
        Ok(r) => r.dominates(&RankProfile::of_permutation(w)),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagTriple<F: Field> {
    /// Seed that produced these flags.
    pub seed: u64,
    pub a: FlagMatrix<F>,
    pub b: FlagMatrix<F>,
    pub c: FlagMatrix<F>,
}

impl<F: Field> FlagTriple<F> {
    pub fn get(&self, arg: usize) -> &FlagMatrix<F> {
        match arg {
            1 => &self.a,
            2 => &self.b,
            _ => &self.c,
        }
    }
}

fn attempt_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Three pairwise generic flags, drawn from `seed` (and fresh seeds if the
/// first draw is not generic).
pub fn random_flags<F: Field>(n: usize, seed: u64) -> Result<FlagTriple<F>, WitnessError> {
    for attempt in 0..MAX_ATTEMPTS {
        if let Some(t) = draw_flags(n, attempt_seed(seed, attempt)) {
            return Ok(t);
        }
    }
    Err(WitnessError::Exhausted { seed, attempts: MAX_ATTEMPTS })
}

fn draw_flags<F: Field>(n: usize, seed: u64) -> Option<FlagTriple<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = FlagMatrix::random(n, &mut rng).ok()?;
    let b = FlagMatrix::random(n, &mut rng).ok()?;
    let c = FlagMatrix::random(n, &mut rng).ok()?;
    let id = Permutation::identity(n);
    for (f, g) in [(&a, &b), (&a, &c), (&b, &c)] {
        if relative_position(f, g).ok()? != id {
            return None;
        }
    }
    Some(FlagTriple { seed, a, b, c })
}

const NAMES: [char; 3] = ['A', 'B', 'C'];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub column: usize,
    /// Flag whose argument receives the descent: `A`, `B` or `C`.
    pub argument: char,
    pub q: usize,
    pub expression: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction<F: Field> {
    pub flag: FlagMatrix<F>,
    pub trace: Vec<TraceStep>,
}

fn atom(e: &str) -> String {
    if e.contains(' ') {
        format!("({e})")
    } else {
        e.to_string()
    }
}

/// Replays `path` backwards from `F = C`, recomputing one subspace per move.
pub fn reconstruct_flag<F: Field>(path: &DcPath, flags: &FlagTriple<F>) -> Result<Reconstruction<F>, WitnessError> {
    let states = path.replay()?;
    let end = states.last().expect("replay includes the start");
    let n = end.degree();
    if *end != SchubertProblem::easy(n) {
        return Err(WitnessError::PathEnd(end.clone()));
    }
    let mut chain = flags.c.chain();
    let mut exprs: Vec<String> = (0..=n)
        .map(|k| match k {
            0 => "0".to_string(),
            k if k == n => "V".to_string(),
            k => format!("C_{k}"),
        })
        .collect();
    let mut trace = Vec::new();
    for (t, mv) in path.moves.iter().enumerate().rev() {
        let step = path.moves.len() - t;
        let i = mv.col;
        let prev = &states[t];
        let x = prev.arg(mv.from);
        let big_x = flags.get(mv.from);
        let target = RankProfile::of_permutation(x);
        let mut survivors: Vec<(usize, Subspace<F>)> = Vec::new();
        for q in 1..=n {
            let xq = big_x.subspace(q);
            let cand = chain[i - 1].sum(&chain[i + 1].intersection(&xq));
            if cand.dim() != i || survivors.iter().any(|(_, s)| *s == cand) {
                continue;
            }
            let row_ok = (1..=n).all(|j| cand.meet_dim(&big_x.subspace(j)) >= target.r[i][j]);
            if row_ok {
                survivors.push((q, cand));
            }
        }
        if survivors.len() != 1 {
            return Err(WitnessError::Degenerate { step, reason: format!("{} candidates for F_{i}", survivors.len()) });
        }
        let (q, space) = survivors.pop().expect("one survivor");
        let name = NAMES[mv.from - 1];
        let meet = if i + 1 == n { format!("{name}_{q}") } else { format!("{name}_{q} ∩ {}", atom(&exprs[i + 1])) };
        exprs[i] = if i == 1 { meet } else { format!("{} ⊕ {}", atom(&meet), atom(&exprs[i - 1])) };
        chain[i] = space;
        trace.push(TraceStep { step, column: i, argument: name, q, expression: exprs[i].clone() });
    }
    let flag = FlagMatrix::from_chain(&chain)?;
    let p = &path.start;
    for (k, w) in [&p.u, &p.v, &p.w].into_iter().enumerate() {
        if !satisfies_position(&flag, flags.get(k + 1), w) {
            return Err(WitnessError::Degenerate {
                step: path.moves.len(),
                reason: format!("final flag is not {w}-close to {}", NAMES[k]),
            });
        }
    }
    Ok(Reconstruction { flag, trace })
}

/// Reconstruction with fresh flags on degeneracy, up to [`MAX_ATTEMPTS`]
/// seeds.
pub fn reconstruct_with_retries<F: Field>(
    path: &DcPath,
    seed: u64,
) -> Result<(FlagTriple<F>, Reconstruction<F>), WitnessError> {
    let n = path.start.degree();
    for attempt in 0..MAX_ATTEMPTS {
        let flags = random_flags::<F>(n, attempt_seed(seed, attempt * MAX_ATTEMPTS))?;
        match reconstruct_flag(path, &flags) {
            Ok(r) => return Ok((flags, r)),
            Err(WitnessError::Degenerate { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(WitnessError::Exhausted { seed, attempts: MAX_ATTEMPTS })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    #[default]
    Prime,
    Rational,
}

/// Serializable outcome of a witness run over a runtime-chosen field.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub problem: SchubertProblem,
    pub field: &'static str,
    pub seed: u64,
    pub path: DcPath,
    pub flags: serde_json::Value,
    pub flag: serde_json::Value,
    pub trace: Vec<TraceStep>,
    /// Position checks of the final flag against `A`, `B`, `C`.
    pub verified: [bool; 3],
}

/// Finds a dc-path to `(id, id, w0)` and reconstructs the witness flag.
pub fn witness(p: &SchubertProblem, seed: u64, field: FieldKind) -> Result<WitnessReport, WitnessError> {
    let path = dc_path(p, Goal::Easy)?.ok_or_else(|| WitnessError::NotEasy(p.clone()))?;
    match field {
        FieldKind::Prime => report::<Fp>(path, seed),
        FieldKind::Rational => report::<Q>(path, seed),
    }
}

fn report<F: Field>(path: DcPath, seed: u64) -> Result<WitnessReport, WitnessError> {
    let (flags, rec) = reconstruct_with_retries::<F>(&path, seed)?;
    let p = path.start.clone();
    let verified = [
        satisfies_position(&rec.flag, &flags.a, &p.u),
        satisfies_position(&rec.flag, &flags.b, &p.v),
        satisfies_position(&rec.flag, &flags.c, &p.w),
    ];
    Ok(WitnessReport {
        problem: p,
        field: F::NAME,
        seed: flags.seed,
        path,
        flags: serde_json::json!({ "A": flags.a, "B": flags.b, "C": flags.c }),
        flag: serde_json::to_value(&rec.flag).expect("matrix serializes"),
        trace: rec.trace,
        verified,
    })
}
