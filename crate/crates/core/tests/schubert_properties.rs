use descent_core::dc::SchubertProblem;
use descent_core::graph::GraphIndex;
use descent_core::perm::{all_permutations, Permutation};
use descent_core::poly::{DoublePoly, IntPoly, Monomial, Poly};
use descent_core::schubert::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every sequence `a` of columns with `w s_{a1} s_{a2} ... = id` and length
/// `l(w)`.
fn descent_sequences(w: &Permutation) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in w.descent_set() {
        for mut rest in descent_sequences(&w.right_mult_s(i).unwrap()) {
            rest.insert(0, i);
            out.push(rest);
        }
    }
    out
}

fn apply_word<C: descent_core::poly::Coefficient>(word: &[usize], f: &Poly<C>) -> Poly<C> {
    word.iter().fold(f.clone(), |g, &i| divided_difference(i, &g))
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((prop::collection::vec(0u8..4, 4), -5i64..=5), 0..7)
        .prop_map(|terms| IntPoly::from_terms(terms.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from(c)))))
}

fn double_poly() -> impl Strategy<Value = DoublePoly> {
    prop::collection::vec((prop::collection::vec(0u8..3, 4), int_poly()), 0..4)
        .prop_map(|terms| DoublePoly::from_terms(terms.into_iter().map(|(e, c)| (Monomial::new(e), c))))
}

fn perms_up_to(n: usize) -> Vec<Permutation> {
    all_permutations(n)
}

#[test]
fn bgg_ascent_kills() {
    for w in perms_up_to(4) {
        for i in 1..=4 {
            if w.has_descent(i) {
                continue;
            }
            assert!(divided_difference(i, &schubert_polynomial::<Single>(&w)).is_zero(), "{w} {i}");
            assert!(divided_difference(i, &schubert_polynomial::<Double>(&w)).is_zero(), "{w} {i}");
        }
    }
}

#[test]
fn bgg_descent_steps_down() {
    for w in perms_up_to(4) {
        for i in w.descent_set() {
            let ws = w.right_mult_s(i).unwrap();
            assert_eq!(divided_difference(i, &schubert_polynomial::<Single>(&w)), *schubert_polynomial::<Single>(&ws));
            assert_eq!(divided_difference(i, &schubert_polynomial::<Double>(&w)), *schubert_polynomial::<Double>(&ws));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_words_agree(f in int_poly(), g in double_poly(), rank in 0usize..24) {
        let w = Permutation::from_lex_rank(4, rank);
        let expected_f = apply_divided_differences(&w, &f);
        let expected_g = apply_divided_differences(&w, &g);
        for word in descent_sequences(&w) {
            prop_assert_eq!(apply_word(&word, &f), expected_f.clone());
            prop_assert_eq!(apply_word(&word, &g), expected_g.clone());
        }
    }

    #[test]
    fn twisted_leibniz(f in int_poly(), g in double_poly(), rank in 0usize..24, i in 1usize..4) {
        let u = Permutation::from_lex_rank(4, rank);
        prop_assume!(!u.has_descent(i));
        let su = schubert_polynomial::<Single>(&u);
        prop_assert_eq!(divided_difference(i, &su.mul(&f)), su.mul(&divided_difference(i, &f)));
        let du = schubert_polynomial::<Double>(&u);
        prop_assert_eq!(divided_difference(i, &du.mul(&g)), du.mul(&divided_difference(i, &g)));
    }
}

#[test]
fn reduced_word_counts() {
    // w_0 in S_4 has 16 reduced words
    assert_eq!(descent_sequences(&Permutation::long_element(4)).len(), 16);
    assert_eq!(descent_sequences(&Permutation::long_element(3)).len(), 2);
}

#[test]
fn poincare_pairing() {
    for n in 1..=4 {
        let top = n * (n - 1) / 2;
        let w0 = Permutation::long_element(n);
        let perms = perms_up_to(n);
        for u in &perms {
            for v in &perms {
                if u.length() + v.length() != top {
                    continue;
                }
                let product = schubert_polynomial::<Single>(u).mul(&schubert_polynomial::<Single>(v));
                let c = expand_in_schubert_basis::<Single>(&product).coefficient(&w0);
                let expected = BigInt::from((*u == v.w0_complement()) as i64);
                assert_eq!(c, expected, "{u} {v}");
                assert_eq!(structure_constant::<Single>(u, v, &w0).unwrap(), expected);
            }
        }
    }
}

fn six_orderings(p: &SchubertProblem) -> Vec<BigInt> {
    let [a, b, c] = p.args();
    [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
        .into_iter()
        .map(|(x, y, z)| structure_constant::<Single>(x, y, &z.w0_complement()).unwrap())
        .collect()
}

fn check_symmetric(p: &SchubertProblem) {
    let values = six_orderings(p);
    assert!(values.iter().all(|v| *v == values[0]), "{p}: {values:?}");
    assert!(values[0] >= BigInt::from(0), "{p}");
    assert_eq!(values[0], symmetric_number(&p.u, &p.v, &p.w).unwrap());
}

#[test]
fn symmetry_exhaustive_small() {
    for n in 2..=4 {
        let idx = GraphIndex::new(n).unwrap();
        for pos in 0..idx.vertex_count() {
            check_symmetric(&idx.decode(pos));
        }
    }
}

#[test]
fn symmetry_sampled_s5() {
    let idx = GraphIndex::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        check_symmetric(&idx.decode(rng.gen_range(0..idx.vertex_count())));
    }
}

#[test]
fn single_structure_constants_nonnegative() {
    let perms = perms_up_to(4);
    for u in &perms {
        for v in &perms {
            let expansion = expand_in_schubert_basis::<Single>(
                &schubert_polynomial::<Single>(u).mul(&schubert_polynomial::<Single>(v)),
            );
            for (w, c) in &expansion.terms {
                assert!(*c > BigInt::from(0), "{u} {v} {w}");
                let m = w.degree().max(4);
                let direct = structure_constant::<Single>(&u.extend_to(m), &v.extend_to(m), &w.extend_to(m)).unwrap();
                assert_eq!(direct, *c, "{u} {v} {w}");
            }
        }
    }
}
