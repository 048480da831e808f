use descent_core::dc::{dc_path, DcPath, Goal, SchubertProblem};
use descent_core::graph::GraphIndex;
use descent_core::perm::all_permutations;
use descent_core::witness::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Up to `count` dc-easy vertices of `Γ_n`, chosen by seeded sampling.
fn easy_problems(n: usize, count: usize, seed: u64) -> Vec<(SchubertProblem, DcPath)> {
    let idx = GraphIndex::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = idx.decode(rng.gen_range(0..idx.vertex_count()));
        if let Some(path) = dc_path(&p, Goal::Easy).unwrap() {
            out.push((p, path));
        }
    }
    out
}

fn check_positions<F: Field>(p: &SchubertProblem, flags: &FlagTriple<F>, flag: &FlagMatrix<F>) {
    assert!(satisfies_position(flag, &flags.a, &p.u), "{p} vs A");
    assert!(satisfies_position(flag, &flags.b, &p.v), "{p} vs B");
    assert!(satisfies_position(flag, &flags.c, &p.w), "{p} vs C");
}

#[test]
fn seeded_reconstructions_gamma_4_rational() {
    for (k, (p, path)) in easy_problems(4, 60, 40).into_iter().enumerate() {
        let (flags, rec) = reconstruct_with_retries::<Q>(&path, k as u64).unwrap();
        check_positions(&p, &flags, &rec.flag);
        assert_eq!(rec.trace.len(), path.len());
    }
}

#[test]
fn seeded_reconstructions_gamma_5_prime() {
    for (k, (p, path)) in easy_problems(5, 60, 50).into_iter().enumerate() {
        let (flags, rec) = reconstruct_with_retries::<Fp>(&path, 1000 + k as u64).unwrap();
        check_positions(&p, &flags, &rec.flag);
    }
}

#[test]
fn chosen_q_follows_the_new_descent() {
    // the surviving candidate comes from X_q with q = n + 1 - x(i)
    for (k, (_, path)) in easy_problems(4, 30, 41).into_iter().enumerate() {
        let states = path.replay().unwrap();
        let (_, rec) = reconstruct_with_retries::<Fp>(&path, k as u64).unwrap();
        for step in &rec.trace {
            let t = path.len() - step.step;
            let mv = path.moves[t];
            let x = states[t].arg(mv.from);
            assert_eq!(step.q, 4 + 1 - x.at(mv.col), "{}", path.start);
        }
    }
}

/// A legal path to `(id, id, w0)` that starts with a random walk.
fn detour_path(p: &SchubertProblem, rng: &mut ChaCha8Rng) -> DcPath {
    let mut moves = Vec::new();
    let mut state = p.clone();
    for _ in 0..rng.gen_range(1..6) {
        let legal = state.legal_moves().unwrap();
        let Some(&m) = legal.choose(rng) else { break };
        state = state.apply_move(m).unwrap();
        moves.push(m);
    }
    let rest = dc_path(&state, Goal::Easy).unwrap().expect("same component");
    moves.extend(rest.moves);
    DcPath { start: p.clone(), moves }
}

#[test]
fn reconstruction_is_path_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    for (k, (p, path)) in easy_problems(4, 25, 42).into_iter().enumerate() {
        let flags = random_flags::<Q>(4, 500 + k as u64).unwrap();
        let first = reconstruct_flag(&path, &flags).unwrap();
        let other = detour_path(&p, &mut rng);
        let second = reconstruct_flag(&other, &flags).unwrap();
        assert!(first.flag.same_flag(&second.flag), "{p}");
        compared += 1;
    }
    assert!(compared >= 20);
}

#[test]
fn permuted_flags_have_their_position() {
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let perms = all_permutations(n);
    for w in &perms {
        // F_i = span(e_{n+1-w(1)}, ..., e_{n+1-w(i)}) against the standard
        // flag, then both moved by one random invertible matrix
        let m = FlagMatrix::<Q>::random(n, &mut rng).unwrap();
        let times = |rows: Vec<Vec<Q>>| -> FlagMatrix<Q> {
            let prod = rows
                .iter()
                .map(|r| (0..n).map(|c| (0..n).fold(Q::zero(), |acc, k| acc.add(&r[k].mul(&m.rows()[k][c])))).collect())
                .collect();
            FlagMatrix::new(prod).unwrap()
        };
        let unit = |k: usize| (0..n).map(|c| if c == k { Q::one() } else { Q::zero() }).collect::<Vec<_>>();
        let f = times((1..=n).map(|k| unit(n - w.at(k))).collect());
        let g = times((0..n).map(unit).collect());
        assert_eq!(relative_position(&f, &g).unwrap(), *w);
        for v in &perms {
            let dominated = RankProfile::of_permutation(w).dominates(&RankProfile::of_permutation(v));
            assert_eq!(satisfies_position(&f, &g, v), dominated, "{w} {v}");
            assert_eq!(dominated, v.bruhat_leq(w).unwrap());
        }
    }
}
