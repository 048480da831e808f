//! Permutations of `{1..n}` in one-line notation, with the descent structure
//! and Bruhat order used throughout the crate.
//!
//! Conventions: `p.right_mult_s(i)` swaps the entries in positions `i, i+1`
//! (so `p·s_i > p` exactly when `p(i) < p(i+1)`), and `p.w0_complement()` is
//! `w_0 ∘ p`, replacing each value `j` by `n + 1 - j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..{degree}: {word:?}")]
    NotBijective { word: Vec<usize>, degree: usize },
    #[error("degree must be between 1 and 255, got {0}")]
    BadDegree(usize),
    #[error("position {position} out of range 1..{max} for degree {degree}")]
    PositionOutOfRange { position: usize, max: usize, degree: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("cannot parse {input:?} at character {position}: {reason}")]
    Parse { input: String, position: usize, reason: String },
}

/// A permutation in one-line notation. Entries are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self, PermError> {
        let n = word.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(PermError::BadDegree(n));
        }
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(PermError::NotBijective { word, degree: n });
            }
            seen[x] = true;
        }
        Ok(Permutation { word: word.into_iter().map(|x| x as u8).collect() })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { word: (1..=n as u8).collect() }
    }

    /// The long element `w_0 = n, n-1, ..., 1`.
    pub fn long_element(n: usize) -> Self {
        Permutation { word: (1..=n as u8).rev().collect() }
    }

    /// The simple transposition `s_i` as a permutation of degree `n`.
    pub fn simple_reflection(n: usize, i: usize) -> Result<Self, PermError> {
        Permutation::identity(n).right_mult_s(i)
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.word.iter().map(|&x| x as usize).collect()
    }

    /// `p(i)` for a 1-based position.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.word;
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn has_descent(&self, i: usize) -> bool {
        i >= 1 && i < self.degree() && self.word[i - 1] > self.word[i]
    }

    /// Descent positions, ascending, 1-based.
    pub fn descent_set(&self) -> Vec<usize> {
        (1..self.degree()).filter(|&i| self.has_descent(i)).collect()
    }

    /// Descent set as a bitmask, bit `i - 1` for a descent at `i`.
    pub fn descent_mask(&self) -> u32 {
        self.word.windows(2).enumerate().filter(|(_, w)| w[0] > w[1]).fold(0, |m, (k, _)| m | (1 << k))
    }

    fn check_position(&self, i: usize) -> Result<(), PermError> {
        let n = self.degree();
        if i == 0 || i >= n {
            return Err(PermError::PositionOutOfRange { position: i, max: n.saturating_sub(1), degree: n });
        }
        Ok(())
    }

    /// `p · s_i`: swaps the entries in positions `i` and `i + 1`.
    pub fn right_mult_s(&self, i: usize) -> Result<Self, PermError> {
        self.check_position(i)?;
        let mut word = self.word.clone();
        word.swap(i - 1, i);
        Ok(Permutation { word })
    }

    /// `w_0 ∘ p`: each value `j` becomes `n + 1 - j`.
    pub fn w0_complement(&self) -> Self {
        let n = self.degree() as u8;
        Permutation { word: self.word.iter().map(|&x| n + 1 - x).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u8; self.degree()];
        for (k, &x) in self.word.iter().enumerate() {
            word[x as usize - 1] = (k + 1) as u8;
        }
        Permutation { word }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, PermError> {
        check_same_degree(self, other)?;
        Ok(Permutation { word: other.word.iter().map(|&x| self.word[x as usize - 1]).collect() })
    }

    /// Bruhat comparison by rank-matrix dominance:
    /// `#{k ≤ i : a(k) ≥ j} ≤ #{k ≤ i : b(k) ≥ j}` for all `i, j`.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool, PermError> {
        check_same_degree(self, other)?;
        Ok(bruhat_leq_words(&self.word, &other.word))
    }

    /// All permutations covered by `self` in Bruhat order.
    pub fn covered_by_list(&self) -> Vec<Permutation> {
        let w = &self.word;
        let n = w.len();
        let mut out = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                if w[j] <= w[k] {
                    continue;
                }
                let (hi, lo) = (w[j], w[k]);
                if w[j + 1..k].iter().any(|&m| m > lo && m < hi) {
                    continue;
                }
                let mut word = w.clone();
                word.swap(j, k);
                out.push(Permutation { word });
            }
        }
        out.sort();
        out
    }

    /// Lehmer code: `code[i] = #{j > i : p(j) < p(i)}`.
    pub fn code(&self) -> Vec<usize> {
        let w = &self.word;
        (0..w.len()).map(|i| w[i + 1..].iter().filter(|&&x| x < w[i]).count()).collect()
    }

    /// Inverse of [`Permutation::code`]. The result has the smallest degree
    /// that can carry the code (and at least `code.len()`).
    pub fn from_code(code: &[usize]) -> Self {
        let mut n = code.len().max(1);
        for (i, &c) in code.iter().enumerate() {
            if c > 0 {
                n = n.max(i + 1 + c);
            }
        }
        let mut available: Vec<u8> = (1..=n as u8).collect();
        let mut word = Vec::with_capacity(n);
        for i in 0..n {
            let c = code.get(i).copied().unwrap_or(0);
            word.push(available.remove(c));
        }
        Permutation { word }
    }

    /// At most one descent. Reports the position when there is exactly one.
    pub fn is_grassmannian(&self) -> Grassmannian {
        let d = self.descent_set();
        match d.len() {
            0 => Grassmannian::NoDescent,
            1 => Grassmannian::At(d[0]),
            _ => Grassmannian::No,
        }
    }

    /// Embeds into `S_m` (m ≥ n) by fixing `n+1..m`.
    pub fn extend_to(&self, m: usize) -> Self {
        let mut word = self.word.clone();
        word.extend(self.degree() as u8 + 1..=m as u8);
        Permutation { word }
    }

    /// Drops trailing fixed points; the identity becomes `1`.
    pub fn trim(&self) -> Self {
        let mut n = self.degree();
        while n > 1 && self.word[n - 1] as usize == n {
            n -= 1;
        }
        Permutation { word: self.word[..n].to_vec() }
    }

    /// Lexicographic rank in `S_n`, `0..n!`.
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.word[i + 1..].iter().filter(|&&x| x < self.word[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: usize) -> Self {
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        Permutation::from_code(&digits).extend_to(n)
    }

    /// Renders as a digit string for `n ≤ 9`, as `[a,b,...]` otherwise.
    pub fn compact(&self) -> String {
        self.to_string()
    }
}

/// Result of [`Permutation::is_grassmannian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grassmannian {
    NoDescent,
    At(usize),
    No,
}

impl Grassmannian {
    pub fn holds(self) -> bool {
        !matches!(self, Grassmannian::No)
    }
}

pub fn check_same_degree(a: &Permutation, b: &Permutation) -> Result<(), PermError> {
    if a.degree() != b.degree() {
        return Err(PermError::DegreeMismatch { left: a.degree(), right: b.degree() });
    }
    Ok(())
}

pub(crate) fn bruhat_leq_words(a: &[u8], b: &[u8]) -> bool {
    let n = a.len();
    // counts[j] = #{k ≤ i : value ≥ j+1}, maintained for both words.
    let mut ca = vec![0i32; n + 1];
    let mut cb = vec![0i32; n + 1];
    for i in 0..n {
        for c in &mut ca[1..=a[i] as usize] {
            *c += 1;
        }
        for c in &mut cb[1..=b[i] as usize] {
            *c += 1;
        }
        if (1..=n).any(|j| ca[j] > cb[j]) {
            return false;
        }
    }
    true
}

/// All permutations of degree `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut word: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation { word: word.clone() });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| word[i] < word[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
        word.swap(i, j);
        word[i + 1..].reverse();
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for &x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts a digit string (`"34152"`) or a bracketed/comma-separated list
    /// (`"[3,4,1,5,2]"`, `"3,4,1,5,2"`).
    fn from_str(s: &str) -> Result<Self, PermError> {
        let input = s.trim();
        let err = |position: usize, reason: &str| PermError::Parse {
            input: s.to_string(),
            position,
            reason: reason.to_string(),
        };
        if input.is_empty() {
            return Err(err(0, "empty input"));
        }
        let word: Vec<usize> = if input.contains(',') || input.starts_with('[') {
            let body = input.trim_start_matches('[').trim_end_matches(']');
            let mut out = Vec::new();
            let mut offset = s.find(body).unwrap_or(0);
            for part in body.split(',') {
                let t = part.trim();
                let v = t.parse::<usize>().map_err(|_| err(offset, "expected an integer"))?;
                out.push(v);
                offset += part.len() + 1;
            }
            out
        } else {
            let start = s.find(input).unwrap_or(0);
            input
                .chars()
                .enumerate()
                .map(|(k, c)| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err(start + k, "expected a digit")))
                .collect::<Result<_, _>>()?
        };
        Permutation::new(word).map_err(|e| match e {
            PermError::NotBijective { word, degree } => {
                let mut seen = vec![false; degree + 1];
                let bad = word
                    .iter()
                    .position(|&x| {
                        let dup = x == 0 || x > degree || seen[x];
                        if !dup {
                            seen[x] = true;
                        }
                        dup
                    })
                    .unwrap_or(0);
                err(bad, &format!("not a permutation of 1..{degree}"))
            }
            other => other,
        })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.word.iter().map(|&x| x as u32))
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(Vec<usize>),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Word(w) => Permutation::new(w).map_err(serde::de::Error::custom),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
