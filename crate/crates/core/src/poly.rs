//! Sparse multivariate polynomials with exact coefficients.
//!
//! `Poly<BigInt>` is an integer polynomial in `x_1, x_2, ...`; nesting it as
//! `Poly<Poly<BigInt>>` gives polynomials in `x` whose coefficients are
//! integer polynomials in a second variable set `y`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact ring elements usable as polynomial coefficients.
pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Flattens to `(y-exponents, integer)` pairs; integers yield one pair
    /// with empty exponents.
    fn flat_terms(&self) -> Vec<(Vec<u8>, BigInt)>;
}

impl Coefficient for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn flat_terms(&self) -> Vec<(Vec<u8>, BigInt)> {
        if Zero::is_zero(self) {
            Vec::new()
        } else {
            vec![(Vec::new(), self.clone())]
        }
    }
}

/// An exponent vector. Trailing zeros are never stored.
///
/// Ordered by total degree, then reverse-lexicographically with the
/// highest-index variable heaviest. Under this order the leading monomial of
/// a Schubert polynomial `S_w` is `x^{code(w)}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u8>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { degree: 0, exps: Vec::new() }
    }

    pub fn new(mut exps: Vec<u8>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { degree, exps }
    }

    /// `x_i` with `i` 1-based.
    pub fn var(i: usize) -> Self {
        let mut exps = vec![0; i];
        exps[i - 1] = 1;
        Monomial::new(exps)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    /// Exponent of `x_i` (1-based).
    pub fn exp(&self, i: usize) -> u8 {
        self.exps.get(i - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) =
            if self.exps.len() >= other.exps.len() { (&self.exps, &other.exps) } else { (&other.exps, &self.exps) };
        let mut exps = long.clone();
        for (e, s) in exps.iter_mut().zip(short.iter()) {
            *e += *s;
        }
        Monomial { degree: self.degree + other.degree, exps }
    }

    fn with_pair(&self, i: usize, a: u8, b: u8) -> Monomial {
        let mut exps = self.exps.clone();
        if exps.len() < i + 1 {
            exps.resize(i + 1, 0);
        }
        exps[i - 1] = a;
        exps[i] = b;
        Monomial::new(exps)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: char) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{var}{}", k + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then(self.exps.len().cmp(&other.exps.len()))
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// A sparse polynomial: monomial → nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

pub type IntPoly = Poly<BigInt>;
pub type DoublePoly = Poly<IntPoly>;

impl<C: Coefficient> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, &c);
        p
    }

    /// `x_i`, 1-based.
    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), C::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one())
    }

    /// Term that is largest in the [`Monomial`] order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree).max()
    }

    /// Highest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.exps.len()).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.neg_ref());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().sub_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.sub_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Self::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), &ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul_ref(c))).filter(|(_, k)| !k.is_zero()).collect(),
        }
    }

    /// Exchanges `x_i` and `x_{i+1}`.
    pub fn swap_vars(&self, i: usize) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.with_pair(i, m.exp(i + 1), m.exp(i)), c.clone())))
    }

    /// `(f - s_i f) / (x_i - x_{i+1})`, computed termwise: for a monomial with
    /// `x_i^p x_{i+1}^q`, `p > q`, the quotient is
    /// `(x_i x_{i+1})^q (x_i^{p-q-1} + x_i^{p-q-2} x_{i+1} + ... + x_{i+1}^{p-q-1})`,
    /// and the negated mirror image when `p < q`.
    pub fn divided_difference(&self, i: usize) -> Self {
        assert!(i >= 1, "divided difference index is 1-based");
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (p, q) = (m.exp(i), m.exp(i + 1));
            if p == q {
                continue;
            }
            let (lo, d) = (p.min(q), p.abs_diff(q));
            let neg;
            let c = if p > q {
                c
            } else {
                neg = c.neg_ref();
                &neg
            };
            for k in 0..d {
                out.add_term(m.with_pair(i, lo + d - 1 - k, lo + k), c);
            }
        }
        out
    }

    /// Terms in conventional reading order: higher degree first, then
    /// lexicographic with `x_1` first.
    pub fn display_terms(&self) -> Vec<(&Monomial, &C)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| b.0.degree.cmp(&a.0.degree).then_with(|| b.0.exps.cmp(&a.0.exps)));
        out
    }

    /// Multiplies every term by `x_1^{e_1} x_2^{e_2} ...`.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }
}

impl<C: Coefficient> Coefficient for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        Poly::add_assign(self, other);
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        Poly::sub_assign(self, other);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg_ref(&self) -> Self {
        Poly::neg(self)
    }
    fn from_i64(v: i64) -> Self {
        Poly::constant(C::from_i64(v))
    }
    fn flat_terms(&self) -> Vec<(Vec<u8>, BigInt)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (inner, k) in c.flat_terms() {
                debug_assert!(inner.is_empty(), "only one level of nesting is flattened");
                out.push((m.exps.clone(), k));
            }
        }
        out
    }
}

impl IntPoly {
    /// Integer polynomial from `(exponents, coefficient)` pairs.
    pub fn from_int_terms(terms: &[(&[u8], i64)]) -> Self {
        Poly::from_terms(terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), BigInt::from(*c))))
    }

    /// The same polynomial with `x_k` renamed to `y_k`, as a constant of
    /// `Poly<IntPoly>`.
    pub fn as_y_constant(&self) -> DoublePoly {
        Poly::constant(self.clone())
    }

    /// Evaluates at integer points (missing variables are 0).
    pub fn eval(&self, point: &[i64]) -> BigInt {
        let mut total = BigInt::from(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.exps.iter().enumerate() {
                let v = BigInt::from(point.get(k).copied().unwrap_or(0));
                t *= num_traits::pow(v, e as usize);
            }
            total += t;
        }
        total
    }
}

impl DoublePoly {
    /// `x_i - y_j`.
    pub fn x_minus_y(i: usize, j: usize) -> Self {
        let mut p = Poly::var(i);
        p.sub_term(Monomial::one(), &Poly::var(j));
        p
    }

    /// Substitutes `x_k := y_k` for every `k`, giving a polynomial in `y`.
    pub fn substitute_x_by_y(&self) -> IntPoly {
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            out.add_assign(&c.mul_monomial(m));
        }
        out
    }

    /// Drops the `y` variables (sets every `y_k = 0`).
    pub fn at_y_zero(&self) -> IntPoly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.constant_term())))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, self.display_terms().into_iter().map(|(m, c)| (None, m, c.clone())))
    }
}

impl fmt::Display for DoublePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = self
            .display_terms()
            .into_iter()
            .flat_map(|(m, c)| c.display_terms().into_iter().map(move |(ym, k)| (Some(ym), m, k.clone())));
        fmt_poly(f, flat)
    }
}

fn fmt_poly<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Option<&'a Monomial>, &'a Monomial, BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (ym, xm, c) in terms {
        let is_one = xm.degree == 0 && ym.is_none_or(|y| y.degree == 0);
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        if is_one || !abs.is_one() {
            write!(f, "{abs}")?;
            if !is_one {
                write!(f, "*")?;
            }
        }
        xm.fmt_with(f, 'x')?;
        if let Some(y) = ym {
            if y.degree > 0 {
                if xm.degree > 0 {
                    write!(f, "*")?;
                }
                y.fmt_with(f, 'y')?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
