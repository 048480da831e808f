//! Single and double Schubert polynomials, divided differences, and the
//! structure-constant oracle built on them.
//!
//! `S_{w_0}` is the staircase `x_1^{n-1} x_2^{n-2} ... x_{n-1}` (single) or
//! `∏_{i+j≤n} (x_i - y_j)` (double); every other `S_w` comes from it by
//! `∂_i S_w = S_{w s_i}` whenever `w` descends at `i`. Polynomials are
//! cached by the permutation with its trailing fixed points removed, which is
//! harmless because Schubert polynomials are stable under `S_n ⊂ S_{n+1}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::dc::binom2;
use crate::perm::{check_same_degree, PermError, Permutation};
use crate::poly::{Coefficient, DoublePoly, IntPoly, Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchubertError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("hypothesis violated at column {column}: {reason}")]
    Hypothesis { column: usize, reason: String },
}

/// Memo table for Schubert polynomials of one mode.
pub struct SchubertCache<C> {
    map: RwLock<HashMap<Permutation, Arc<Poly<C>>>>,
}

impl<C> Default for SchubertCache<C> {
    fn default() -> Self {
        SchubertCache { map: RwLock::new(HashMap::new()) }
    }
}

impl<C: Coefficient> SchubertCache<C> {
    fn get(&self, key: &Permutation) -> Option<Arc<Poly<C>>> {
        self.map.read().unwrap().get(key).cloned()
    }

    fn insert(&self, key: Permutation, value: Arc<Poly<C>>) {
        self.map.write().unwrap().entry(key).or_insert(value);
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ordinary (`Single`) or equivariant (`Double`) Schubert calculus.
pub trait SchubertMode: Send + Sync + 'static {
    type Coeff: Coefficient;
    const NAME: &'static str;

    /// `S_{w_0}` for `S_n`.
    fn top_polynomial(n: usize) -> Poly<Self::Coeff>;

    /// Coefficient of `S_id` in the Schubert expansion of `f`. Since
    /// `S_w(x = y) = 0` for `w ≠ id` (and `S_w(0) = 0` in the single case),
    /// this is `f` evaluated on the diagonal.
    fn identity_coefficient(f: &Poly<Self::Coeff>) -> Self::Coeff;

    fn cache() -> &'static SchubertCache<Self::Coeff>;
}

#[derive(Debug, Clone, Copy)]
pub struct Single;

#[derive(Debug, Clone, Copy)]
pub struct Double;

impl SchubertMode for Single {
    type Coeff = BigInt;
    const NAME: &'static str = "single";

    fn top_polynomial(n: usize) -> IntPoly {
        let exps: Vec<u8> = (1..=n).map(|i| (n - i) as u8).collect();
        IntPoly::term(Monomial::new(exps), BigInt::from(1))
    }

    fn identity_coefficient(f: &IntPoly) -> BigInt {
        f.constant_term()
    }

    fn cache() -> &'static SchubertCache<BigInt> {
        static CACHE: OnceLock<SchubertCache<BigInt>> = OnceLock::new();
        CACHE.get_or_init(SchubertCache::default)
    }
}

impl SchubertMode for Double {
    type Coeff = IntPoly;
    const NAME: &'static str = "double";

    fn top_polynomial(n: usize) -> DoublePoly {
        let mut p = DoublePoly::constant(IntPoly::constant(BigInt::from(1)));
        for i in 1..n {
            for j in 1..=n - i {
                p = p.mul(&DoublePoly::x_minus_y(i, j));
            }
        }
        p
    }

    fn identity_coefficient(f: &DoublePoly) -> IntPoly {
        f.substitute_x_by_y()
    }

    fn cache() -> &'static SchubertCache<IntPoly> {
        static CACHE: OnceLock<SchubertCache<IntPoly>> = OnceLock::new();
        CACHE.get_or_init(SchubertCache::default)
    }
}

/// `∂_i f`.
pub fn divided_difference<C: Coefficient>(i: usize, f: &Poly<C>) -> Poly<C> {
    f.divided_difference(i)
}

/// Reduced word of `w` read so that applying `∂` at each entry, first to
/// last, computes `∂_w`. Entries are the smallest descent at each step.
pub fn descent_word(w: &Permutation) -> Vec<usize> {
    let mut cur = w.clone();
    let mut word = Vec::with_capacity(cur.length());
    while let Some(d) = (1..cur.degree()).find(|&i| cur.has_descent(i)) {
        word.push(d);
        cur = cur.right_mult_s(d).expect("descent position is in range");
    }
    word
}

/// `∂_w f`, applied along [`descent_word`].
pub fn apply_divided_differences<C: Coefficient>(w: &Permutation, f: &Poly<C>) -> Poly<C> {
    let mut out = f.clone();
    for i in descent_word(w) {
        if out.is_zero() {
            break;
        }
        out = out.divided_difference(i);
    }
    out
}

/// The Schubert polynomial `S_w` in the given mode (memoized).
pub fn schubert_polynomial<M: SchubertMode>(w: &Permutation) -> Arc<Poly<M::Coeff>> {
    let cache = M::cache();
    let key = w.trim();
    if let Some(p) = cache.get(&key) {
        return p;
    }
    // Walk up by smallest ascents until something cached (or w_0) is found,
    // then come back down with ∂_i S_{u s_i} = S_u.
    let mut chain = Vec::new();
    let mut cur = key;
    let mut poly = loop {
        if let Some(p) = cache.get(&cur) {
            break p;
        }
        let n = cur.degree();
        match (1..n).find(|&i| !cur.has_descent(i)) {
            None => {
                let top = Arc::new(M::top_polynomial(n));
                cache.insert(cur.clone(), top.clone());
                break top;
            }
            Some(i) => {
                let up = cur.right_mult_s(i).expect("ascent position is in range");
                chain.push((cur, i));
                cur = up;
            }
        }
    };
    while let Some((perm, i)) = chain.pop() {
        poly = Arc::new(poly.divided_difference(i));
        cache.insert(perm, poly.clone());
    }
    poly
}

/// Structure constant `c_{uv}^w`: the `S_id` coefficient of `∂_w(S_u S_v)`.
/// In single mode this is zero unless `l(w) = l(u) + l(v)`.
pub fn structure_constant<M: SchubertMode>(
    u: &Permutation,
    v: &Permutation,
    w: &Permutation,
) -> Result<M::Coeff, SchubertError> {
    check_same_degree(u, v)?;
    check_same_degree(u, w)?;
    let (lu, lv, lw) = (u.length(), v.length(), w.length());
    if lw > lu + lv {
        return Ok(M::Coeff::zero());
    }
    let product = schubert_polynomial::<M>(u).mul(&schubert_polynomial::<M>(v));
    let reduced = apply_divided_differences(w, &product);
    Ok(M::identity_coefficient(&reduced))
}

/// Expansion of a polynomial in the Schubert basis, keyed by trimmed
/// permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertExpansion<C> {
    pub terms: BTreeMap<Permutation, C>,
}

impl<C: Coefficient> SchubertExpansion<C> {
    pub fn coefficient(&self, w: &Permutation) -> C {
        self.terms.get(&w.trim()).cloned().unwrap_or_else(C::zero)
    }
}

/// Greedy expansion: the leading term's exponent vector is read as a Lehmer
/// code, and `coefficient · S_{code^{-1}}` is subtracted until nothing is
/// left. Leading coefficients of Schubert polynomials are 1 in both modes, so
/// no division is needed.
pub fn expand_in_schubert_basis<M: SchubertMode>(f: &Poly<M::Coeff>) -> SchubertExpansion<M::Coeff> {
    let mut rest = f.clone();
    let mut terms = BTreeMap::new();
    let mut last: Option<Monomial> = None;
    while let Some((m, c)) = rest.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        if let Some(prev) = &last {
            assert!(m < *prev, "Schubert elimination failed to decrease the leading term");
        }
        let code: Vec<usize> = m.exponents().iter().map(|&e| e as usize).collect();
        let w = Permutation::from_code(&code).trim();
        rest.sub_assign(&schubert_polynomial::<M>(&w).scale(&c));
        terms.insert(w, c);
        last = Some(m);
    }
    let expansion = SchubertExpansion { terms };
    debug_assert!(resum::<M>(&expansion) == *f, "Schubert expansion does not re-sum");
    expansion
}

/// `Σ coefficient · S_w`.
pub fn resum<M: SchubertMode>(e: &SchubertExpansion<M::Coeff>) -> Poly<M::Coeff> {
    let mut out = Poly::zero();
    for (w, c) in &e.terms {
        out.add_assign(&schubert_polynomial::<M>(w).scale(c));
    }
    out
}

/// Symmetric Schubert number `c_{uvw} = ∫ S_u S_v S_w = c_{uv}^{w_0 w}`.
///
/// The number is symmetric in its arguments, so the two shortest are
/// multiplied and the longest becomes the divided-difference index.
pub fn symmetric_number(u: &Permutation, v: &Permutation, w: &Permutation) -> Result<BigInt, SchubertError> {
    check_same_degree(u, v)?;
    check_same_degree(u, w)?;
    let n = u.degree();
    if u.length() + v.length() + w.length() != binom2(n) {
        return Ok(BigInt::from(0));
    }
    let mut args = [u, v, w];
    args.sort_by_key(|p| p.length());
    structure_constant::<Single>(args[0], args[1], &args[2].w0_complement())
}

/// Outcome of checking one instance of the equivariant descent-cycling
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivariantCheck {
    pub column: usize,
    /// `true` when `v s < v` (the cycling identity), `false` when `v s > v`
    /// (the vanishing identity).
    pub cycling: bool,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip)]
    pub lhs_poly: IntPoly,
    #[serde(skip)]
    pub rhs_poly: IntPoly,
}

/// Checks, as `y`-polynomials, that for `u s > u` and `w s < w`:
/// `c_{uv}^w = 0` if `v s > v`, and `c_{uv}^w = c_{u,vs}^{ws}` if `v s < v`.
pub fn equivariant_dc_check(
    u: &Permutation,
    v: &Permutation,
    w: &Permutation,
    i: usize,
) -> Result<EquivariantCheck, SchubertError> {
    check_same_degree(u, v)?;
    check_same_degree(u, w)?;
    let ws = w.right_mult_s(i)?;
    if u.has_descent(i) {
        return Err(SchubertError::Hypothesis {
            column: i,
            reason: format!("first argument {u} descends (need u s > u)"),
        });
    }
    if !w.has_descent(i) {
        return Err(SchubertError::Hypothesis {
            column: i,
            reason: format!("third argument {w} ascends (need w s < w)"),
        });
    }
    let lhs = structure_constant::<Double>(u, v, w)?;
    let cycling = v.has_descent(i);
    let rhs = if cycling { structure_constant::<Double>(u, &v.right_mult_s(i)?, &ws)? } else { IntPoly::zero() };
    Ok(EquivariantCheck {
        column: i,
        cycling,
        lhs: to_y_string(&lhs),
        rhs: to_y_string(&rhs),
        pass: lhs == rhs,
        lhs_poly: lhs,
        rhs_poly: rhs,
    })
}

/// Renders a `y`-polynomial (stored over `x` variables) with `y` names.
pub fn to_y_string(p: &IntPoly) -> String {
    p.as_y_constant().to_string()
}

/// JSON term of a serialized polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JsonTerm {
    pub x: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u8>>,
    pub c: String,
}

/// `[{x, y?, c}]` with `y` present only for double-mode polynomials.
pub fn poly_to_json<M: SchubertMode>(f: &Poly<M::Coeff>) -> Vec<JsonTerm> {
    let double = M::NAME == "double";
    let mut out = Vec::new();
    for (m, c) in f.display_terms() {
        for (y, k) in c.flat_terms() {
            out.push(JsonTerm { x: m.exponents().to_vec(), y: double.then_some(y), c: k.to_string() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn int(terms: &[(&[u8], i64)]) -> IntPoly {
        IntPoly::from_int_terms(terms)
    }

    #[test]
    fn small_single_polynomials() {
        assert_eq!(*schubert_polynomial::<Single>(&p("21")), int(&[(&[1], 1)]));
        assert_eq!(*schubert_polynomial::<Single>(&p("12")), int(&[(&[], 1)]));
        assert_eq!(*schubert_polynomial::<Single>(&p("132")), int(&[(&[1], 1), (&[0, 1], 1)]));
        // stable under S_3 ⊂ S_4
        assert_eq!(schubert_polynomial::<Single>(&p("1324")), schubert_polynomial::<Single>(&p("132")));
    }

    #[test]
    fn double_top_and_identity() {
        let top = schubert_polynomial::<Double>(&p("21"));
        assert_eq!(*top, DoublePoly::x_minus_y(1, 1));
        assert_eq!(*schubert_polynomial::<Double>(&p("123")), DoublePoly::constant(int(&[(&[], 1)])));
        // S_132(x;y) = x1 + x2 - y1 - y2
        let s132 = schubert_polynomial::<Double>(&p("132"));
        assert_eq!(s132.to_string(), "x1 + x2 - y1 - y2");
        assert_eq!(s132.at_y_zero(), *schubert_polynomial::<Single>(&p("132")));
    }

    #[test]
    fn expansion_examples() {
        let e = expand_in_schubert_basis::<Single>(&int(&[(&[1], 1)]));
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.coefficient(&p("21")), BigInt::from(1));

        let e = expand_in_schubert_basis::<Single>(&int(&[(&[0, 1], 1)]));
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.coefficient(&p("132")), BigInt::from(1));
        assert_eq!(e.coefficient(&p("21")), BigInt::from(-1));

        let s21 = schubert_polynomial::<Single>(&p("213"));
        let e = expand_in_schubert_basis::<Single>(&s21.mul(&s21));
        assert_eq!(e.terms.len(), 1);
        // x_1^2 has code (2, 0, 0), so it is S_312 on the nose
        assert_eq!(e.coefficient(&p("312")), BigInt::from(1));
        assert_eq!(resum::<Single>(&e), s21.mul(&s21));
    }

    #[test]
    fn structure_constant_examples() {
        assert_eq!(structure_constant::<Single>(&p("12"), &p("12"), &p("12")).unwrap(), BigInt::from(1));
        assert_eq!(structure_constant::<Single>(&p("21"), &p("12"), &p("21")).unwrap(), BigInt::from(1));
        assert!(structure_constant::<Single>(&p("12"), &p("123"), &p("12")).is_err());
    }

    #[test]
    fn symmetric_number_examples() {
        assert_eq!(symmetric_number(&p("1324"), &p("2143"), &p("2341")).unwrap(), BigInt::from(0));
        assert_eq!(symmetric_number(&p("1324"), &p("3142"), &p("1423")).unwrap(), BigInt::from(1));
        assert_eq!(symmetric_number(&p("1234"), &p("1234"), &p("4321")).unwrap(), BigInt::from(1));
        // off-grade triples are zero
        assert_eq!(symmetric_number(&p("1234"), &p("1234"), &p("1234")).unwrap(), BigInt::from(0));
    }

    #[test]
    fn identity_coefficient_agrees_with_expansion_on_s3() {
        // Two extraction routes for c_{uv}^w: diagonal evaluation vs. the
        // S_id coefficient of the greedy expansion.
        let perms = all_permutations(3);
        for u in &perms {
            for v in &perms {
                let prod_s = schubert_polynomial::<Single>(u).mul(&schubert_polynomial::<Single>(v));
                let prod_d = schubert_polynomial::<Double>(u).mul(&schubert_polynomial::<Double>(v));
                for w in &perms {
                    let fs = apply_divided_differences(w, &prod_s);
                    let via_expansion = expand_in_schubert_basis::<Single>(&fs).coefficient(&p("1"));
                    assert_eq!(structure_constant::<Single>(u, v, w).unwrap(), via_expansion);
                    let fd = apply_divided_differences(w, &prod_d);
                    let via_expansion = expand_in_schubert_basis::<Double>(&fd).coefficient(&p("1"));
                    assert_eq!(structure_constant::<Double>(u, v, w).unwrap(), via_expansion);
                }
            }
        }
    }

    #[test]
    fn code_monomial_leads() {
        for n in 1..=6 {
            for w in all_permutations(n) {
                let s = schubert_polynomial::<Single>(&w);
                let code: Vec<u8> = w.code().iter().map(|&c| c as u8).collect();
                let (m, c) = s.leading_term().unwrap();
                assert_eq!(*m, Monomial::new(code), "{w}");
                assert_eq!(*c, BigInt::from(1));
            }
        }
        for w in all_permutations(4) {
            let s = schubert_polynomial::<Double>(&w);
            let code: Vec<u8> = w.code().iter().map(|&c| c as u8).collect();
            let (m, c) = s.leading_term().unwrap();
            assert_eq!(*m, Monomial::new(code), "{w}");
            assert_eq!(*c, IntPoly::constant(BigInt::from(1)));
        }
    }

    #[test]
    fn hypothesis_violation_is_an_error() {
        let err = equivariant_dc_check(&p("213"), &p("123"), &p("213"), 1).unwrap_err();
        assert!(matches!(err, SchubertError::Hypothesis { column: 1, .. }));
        let err = equivariant_dc_check(&p("123"), &p("123"), &p("123"), 1).unwrap_err();
        assert!(matches!(err, SchubertError::Hypothesis { .. }));
    }

    #[test]
    fn json_terms() {
        let s = poly_to_json::<Single>(&schubert_polynomial::<Single>(&p("132")));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"[{"x":[1],"c":"1"},{"x":[0,1],"c":"1"}]"#);
        let d = poly_to_json::<Double>(&schubert_polynomial::<Double>(&p("21")));
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"[{"x":[1],"y":[],"c":"1"},{"x":[],"y":[1],"c":"-1"}]"#);
    }
}
