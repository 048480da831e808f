//! Problems `(π, s_i, σ)` with a simple reflection in the middle.
//!
//! With `κ = w_0 π`, the number is 1 exactly when `σ` is `κ` with one
//! inverted pair at positions `j < k` straightened (a Bruhat cover) and
//! `j ≤ i < k`. [`monk_dc_proof`] produces the descent-cycling path behind
//! that answer.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dc::{binom2, DcError, DcMove, DcPath, SchubertProblem};
use crate::perm::{all_permutations, PermError, Permutation};
use crate::schubert::symmetric_number;

#[derive(Debug, Error)]
pub enum MonkError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("column {i} is out of range for degree {n}")]
    Column { i: usize, n: usize },
    #[error("length sum {got} is not {expected}")]
    LengthSum { got: usize, expected: usize },
    #[error("{sigma} is not covered by w0·{pi}; there is no proof to build")]
    NotACover { pi: Permutation, sigma: Permutation },
    #[error("cross-check supports degrees up to 5, got {0}")]
    Degree(usize),
    /// The explicit reduction broke down. This would contradict the rule
    /// itself, so it is reported rather than hidden.
    #[error("proof construction failed at {state}: {reason}")]
    Construction { state: String, reason: String },
}

impl From<DcError> for MonkError {
    fn from(e: DcError) -> Self {
        MonkError::Construction { state: String::new(), reason: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonkInstance {
    pub pi: Permutation,
    pub i: usize,
    pub sigma: Permutation,
}

impl MonkInstance {
    pub fn new(pi: Permutation, i: usize, sigma: Permutation) -> Result<Self, MonkError> {
        crate::perm::check_same_degree(&pi, &sigma)?;
        let n = pi.degree();
        if i == 0 || i >= n {
            return Err(MonkError::Column { i, n });
        }
        let got = pi.length() + 1 + sigma.length();
        if got != binom2(n) {
            return Err(MonkError::LengthSum { got, expected: binom2(n) });
        }
        Ok(MonkInstance { pi, i, sigma })
    }

    pub fn parse(pi: &str, i: usize, sigma: &str) -> Result<Self, MonkError> {
        Self::new(pi.parse()?, i, sigma.parse()?)
    }

    pub fn degree(&self) -> usize {
        self.pi.degree()
    }

    pub fn problem(&self) -> SchubertProblem {
        SchubertProblem {
            u: self.pi.clone(),
            v: Permutation::simple_reflection(self.degree(), self.i).expect("validated column"),
            w: self.sigma.clone(),
        }
    }

    /// Positions `j < k` (1-based) with `σ = κ` with those two swapped, if
    /// that swap is a cover.
    pub fn cover_positions(&self) -> Option<(usize, usize)> {
        let kappa = self.pi.w0_complement();
        let (a, b) = (kappa.word(), self.sigma.word());
        let diff: Vec<usize> = (0..a.len()).filter(|&t| a[t] != b[t]).collect();
        if diff.len() != 2 {
            return None;
        }
        let (j, k) = (diff[0], diff[1]);
        if a[j] != b[k] || a[k] != b[j] || a[j] < a[k] {
            return None;
        }
        let between = (j + 1..k).any(|t| a[t] > a[k] && a[t] < a[j]);
        (!between).then_some((j + 1, k + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonkValue {
    pub value: u8,
    pub cover: bool,
    pub straddle: bool,
}

pub fn monk_value(inst: &MonkInstance) -> MonkValue {
    match inst.cover_positions() {
        None => MonkValue { value: 0, cover: false, straddle: false },
        Some((j, k)) => {
            let straddle = j <= inst.i && inst.i < k;
            MonkValue { value: straddle as u8, cover: true, straddle }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProofEnd {
    Easy,
    Trivial { column: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct MonkProof {
    pub path: DcPath,
    pub end: ProofEnd,
}

/// Builds the descent-cycling proof for a covering instance: slide the two
/// swapped positions together by moving descents between the first and
/// third arguments, settle the adjacent case, then empty the first argument.
pub fn monk_dc_proof(inst: &MonkInstance) -> Result<MonkProof, MonkError> {
    let (mut j, mut k) = inst
        .cover_positions()
        .ok_or_else(|| MonkError::NotACover { pi: inst.pi.clone(), sigma: inst.sigma.clone() })?;
    let i = inst.i;
    let start = inst.problem();
    let mut state = start.clone();
    let mut moves = Vec::new();
    let mut step = |state: &mut SchubertProblem, mv: DcMove| -> Result<(), MonkError> {
        *state = state
            .apply_move(mv)
            .map_err(|e| MonkError::Construction { state: state.to_string(), reason: e.to_string() })?;
        moves.push(mv);
        Ok(())
    };
    let slide = |state: &SchubertProblem, col: usize| {
        if state.u.has_descent(col) {
            DcMove::new(col, 1, 3)
        } else {
            DcMove::new(col, 3, 1)
        }
    };

    while k > j + 1 && k - 1 != i {
        let mv = slide(&state, k - 1);
        step(&mut state, mv)?;
        k -= 1;
    }
    while k > j + 1 && j != i {
        let mv = slide(&state, j);
        step(&mut state, mv)?;
        j += 1;
    }
    if k != j + 1 {
        return Err(MonkError::Construction {
            state: state.to_string(),
            reason: format!("positions {j} and {k} could not be brought together"),
        });
    }

    let end = if j == i {
        step(&mut state, DcMove::new(i, 2, 3))?;
        while let Some(&c) = state.u.descent_set().first() {
            step(&mut state, DcMove::new(c, 1, 3))?;
        }
        if state != SchubertProblem::easy(inst.degree()) {
            return Err(MonkError::Construction {
                state: state.to_string(),
                reason: "reduction did not reach (id, id, w0)".into(),
            });
        }
        ProofEnd::Easy
    } else {
        if state.trivial_column() != Some(j) {
            return Err(MonkError::Construction {
                state: state.to_string(),
                reason: format!("column {j} is not a three-ascent column"),
            });
        }
        ProofEnd::Trivial { column: j }
    };
    let path = DcPath { start, moves };
    debug_assert_eq!(path.end().ok(), Some(state));
    Ok(MonkProof { path, end })
}

#[derive(Debug, Clone, Serialize)]
pub struct MonkMismatch {
    pub instance: MonkInstance,
    pub rule: u8,
    pub oracle: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonkCrossCheck {
    pub n: usize,
    pub instances: usize,
    pub covers: usize,
    pub ones: usize,
    pub mismatches: Vec<MonkMismatch>,
}

impl MonkCrossCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Every valid instance of degree `n`.
pub fn monk_instances(n: usize) -> Vec<MonkInstance> {
    let perms = all_permutations(n);
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for pi in &perms {
        for sigma in &perms {
            if pi.length() + 1 + sigma.length() != binom2(n) {
                continue;
            }
            for i in 1..n {
                out.push(MonkInstance { pi: pi.clone(), i, sigma: sigma.clone() });
            }
        }
    }
    out
}

/// Compares [`monk_value`] with the oracle on every instance of degree `n`.
pub fn monk_cross_check(n: usize) -> Result<MonkCrossCheck, MonkError> {
    if n > 5 {
        return Err(MonkError::Degree(n));
    }
    let instances = monk_instances(n);
    let results: Vec<(MonkValue, i64)> = instances
        .par_iter()
        .map(|inst| {
            let p = inst.problem();
            let oracle = symmetric_number(&p.u, &p.v, &p.w).expect("instances are vertices").to_i64().expect("small");
            (monk_value(inst), oracle)
        })
        .collect();
    let mismatches = instances
        .iter()
        .zip(&results)
        .filter(|(_, (rule, oracle))| rule.value as i64 != *oracle)
        .map(|(inst, (rule, oracle))| MonkMismatch { instance: inst.clone(), rule: rule.value, oracle: *oracle })
        .collect();
    Ok(MonkCrossCheck {
        n,
        instances: instances.len(),
        covers: results.iter().filter(|(r, _)| r.cover).count(),
        ones: results.iter().filter(|(r, _)| r.value == 1).count(),
        mismatches,
    })
}
