use std::collections::HashMap;

use descent_core::dc::{dc_path, DcMove, Goal, SchubertProblem};
use descent_core::graph::{build_components, poincare_vertex_count, GraphIndex};
use descent_core::schubert::symmetric_number;
use num_bigint::BigInt;
use proptest::prelude::*;

fn number(p: &SchubertProblem) -> BigInt {
    symmetric_number(&p.u, &p.v, &p.w).unwrap()
}

fn numbers(idx: &GraphIndex) -> Vec<BigInt> {
    (0..idx.vertex_count()).map(|pos| number(&idx.decode(pos))).collect()
}

#[test]
fn trivial_vertices_vanish_on_gamma_4() {
    let idx = GraphIndex::new(4).unwrap();
    let values = numbers(&idx);
    let mut trivial = 0;
    for (pos, value) in values.iter().enumerate() {
        let p = idx.decode(pos);
        assert_eq!(p.is_dc_trivial().unwrap().is_some(), idx.is_trivial(pos));
        if idx.is_trivial(pos) {
            trivial += 1;
            assert_eq!(*value, BigInt::from(0), "{p}");
        }
    }
    assert!(trivial > 0);
}

#[test]
fn triangles_are_constant_on_gamma_4() {
    let idx = GraphIndex::new(4).unwrap();
    let values = numbers(&idx);
    let mut edges = 0;
    for ru in 0..idx.table().count() {
        for [a, b, c] in idx.triangles_for_first(ru) {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            assert_eq!(values[a], values[b], "{} {}", idx.decode(a), idx.decode(b));
            assert_eq!(values[a], values[c], "{} {}", idx.decode(a), idx.decode(c));
            edges += 1;
        }
    }
    assert!(edges > 100);
}

#[test]
fn moves_are_triangle_edges() {
    // every legal move of every Γ_4 vertex joins two corners of a generated
    // triangle, and every triangle corner pair is a legal move
    let idx = GraphIndex::new(4).unwrap();
    let mut from_moves = Vec::new();
    for pos in 0..idx.vertex_count() {
        let p = idx.decode(pos);
        for m in p.legal_moves().unwrap() {
            let q = p.apply_move(m).unwrap();
            let pair = (pos.min(idx.position(&q).unwrap()), pos.max(idx.position(&q).unwrap()));
            from_moves.push(pair);
        }
    }
    let mut from_triangles = Vec::new();
    for ru in 0..idx.table().count() {
        for [a, b, c] in idx.triangles_for_first(ru) {
            for (x, y) in [(a, b), (a, c), (b, c)] {
                let (x, y) = (x as usize, y as usize);
                from_triangles.push((x.min(y), x.max(y)));
                from_triangles.push((x.min(y), x.max(y)));
            }
        }
    }
    from_moves.sort_unstable();
    from_triangles.sort_unstable();
    assert_eq!(from_moves, from_triangles);
}

#[test]
fn bruhat_vanishing_implies_zero() {
    for n in 2..=4 {
        let idx = GraphIndex::new(n).unwrap();
        for pos in 0..idx.vertex_count() {
            let p = idx.decode(pos);
            if !p.bruhat_vanishing_check().unwrap() {
                assert_eq!(number(&p), BigInt::from(0), "{p}");
            }
        }
    }
}

#[test]
fn stabilization_preserves_number() {
    for n in 2..=4 {
        let idx = GraphIndex::new(n).unwrap();
        for pos in 0..idx.vertex_count() {
            let p = idx.decode(pos);
            let q = p.stabilize().unwrap();
            assert!(q.is_vertex());
            assert_eq!(number(&p), number(&q), "{p} -> {q}");
            assert_eq!(p.is_dc_trivial().unwrap().is_some(), q.is_dc_trivial().unwrap().is_some());
        }
    }
}

#[test]
fn component_count_formula() {
    for n in 2..=5 {
        let idx = GraphIndex::new(n).unwrap();
        assert_eq!(idx.vertex_count() as u64, poincare_vertex_count(n));
    }
}

/// Applies an argument permutation `σ` (given as images of slots 0,1,2).
fn permute_args(p: &SchubertProblem, sigma: [usize; 3]) -> SchubertProblem {
    let a = p.args();
    SchubertProblem { u: a[sigma[0]].clone(), v: a[sigma[1]].clone(), w: a[sigma[2]].clone() }
}

#[test]
fn components_respect_argument_symmetry() {
    const SIGMAS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for n in 3..=4 {
        let report = build_components(n).unwrap();
        for sigma in SIGMAS {
            let mut image: HashMap<u32, u32> = HashMap::new();
            for pos in 0..report.vertex_count {
                let q = permute_args(&report.index.decode(pos), sigma);
                let target = report.label_of(&q).unwrap();
                let expected = *image.entry(report.labels[pos]).or_insert(target);
                assert_eq!(expected, target, "n={n} σ={sigma:?}");
            }
        }
    }
}

#[test]
fn easy_paths_replay_to_easy() {
    let idx = GraphIndex::new(4).unwrap();
    let easy = SchubertProblem::easy(4);
    let values = numbers(&idx);
    for (pos, value) in values.iter().enumerate() {
        let p = idx.decode(pos);
        match dc_path(&p, Goal::Easy).unwrap() {
            Some(path) => {
                assert_eq!(path.end().unwrap(), easy);
                assert_eq!(*value, BigInt::from(1));
            }
            None => assert_eq!(*value, BigInt::from(0), "{p}"),
        }
    }
}

fn gamma5_vertex() -> impl Strategy<Value = SchubertProblem> {
    let count = poincare_vertex_count(5) as usize;
    (0..count).prop_map(|pos| {
        thread_local! {
            static IDX: GraphIndex = GraphIndex::new(5).unwrap();
        }
        IDX.with(|idx| idx.decode(pos))
    })
}

proptest! {
    #[test]
    fn moves_preserve_vertices_and_reverse(p in gamma5_vertex()) {
        for m in p.legal_moves().unwrap() {
            let q = p.apply_move(m).unwrap();
            prop_assert!(q.is_vertex());
            prop_assert_eq!(q.length_sum(), p.length_sum());
            prop_assert_eq!(q.apply_move(m.reverse()).unwrap(), p.clone());
        }
    }

    #[test]
    fn illegal_moves_are_rejected(p in gamma5_vertex(), col in 1usize..5, from in 1usize..=3, to in 1usize..=3) {
        let m = DcMove::new(col, from, to);
        let legal = p.legal_moves().unwrap().contains(&m);
        prop_assert_eq!(p.apply_move(m).is_ok(), legal);
    }
}
