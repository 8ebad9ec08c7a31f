//! Exact computation in dihedral Artin groups `A_m`.
//!
//! Equality is decided through Garside normal forms. The Garside element is
//! the m-letter alternating word `Δ = sts…`; its divisors (the simple
//! elements) are the alternating positive words of length `0..=m`, and every
//! group element has a unique left-weighted form `Δ^p · x₁ ⋯ x_k` with each
//! `x_i` a proper non-trivial simple. Only the induced equality relation is
//! contractual; the acceptance suite cross-validates it against an
//! independent rewriting-closure search.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DihedralError {
    #[error("dihedral coefficient must be at least 3, got {0}")]
    CoefficientTooSmall(u32),
    #[error("word uses generator index {0}, outside the group's pair")]
    LetterOutsidePair(usize),
    #[error("syllable-tuple sweep of size {0} exceeds the desk-scale limit {1}")]
    SweepTooLarge(u64, u64),
}

/// The dihedral Artin group `A_m = ⟨s, t | sts… = tst…⟩` on a chosen pair of
/// ambient generator indices. Coefficient 2 is rejected everywhere: the
/// ambient scope is large-type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralGroup {
    s: usize,
    t: usize,
    m: u32,
}

/// An alternating positive word of length `len` starting with generator
/// `start` (0 = s, 1 = t). Canonical form: `len == 0` or `len == m` force
/// `start == 0`, since the empty word has no start and both alternating
/// words of length `m` equal `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simple {
    start: u8,
    len: u32,
}

/// Left-weighted Garside form: `Δ^delta_power · tail`, the tail being
/// `Δ`-free non-trivial simples. Two elements are equal iff their normal
/// forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DihedralNormalForm {
    pub delta_power: i64,
    pub tail: Vec<Simple>,
}

impl DihedralGroup {
    pub fn new(s: usize, t: usize, m: u32) -> Result<Self, DihedralError> {
        if m < 3 {
            return Err(DihedralError::CoefficientTooSmall(m));
        }
        Ok(DihedralGroup { s, t, m })
    }

    /// Standalone group over a fresh 2-letter alphabet (indices 0, 1).
    pub fn standalone(m: u32) -> Result<Self, DihedralError> {
        DihedralGroup::new(0, 1, m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn generators(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    /// 0 for the s-generator, 1 for the t-generator.
    fn local(&self, gen: usize) -> Result<u8, DihedralError> {
        if gen == self.s {
            Ok(0)
        } else if gen == self.t {
            Ok(1)
        } else {
            Err(DihedralError::LetterOutsidePair(gen))
        }
    }

    fn ambient(&self, local: u8) -> usize {
        if local == 0 {
            self.s
        } else {
            self.t
        }
    }

    /// Letter at position `idx` (0-based) of the alternating word starting
    /// with `start`.
    fn letter_at(start: u8, idx: u32) -> u8 {
        if idx % 2 == 0 {
            start
        } else {
            1 - start
        }
    }

    fn canonical(&self, start: u8, len: u32) -> Simple {
        if len == 0 || len == self.m {
            Simple { start: 0, len }
        } else {
            Simple { start, len }
        }
    }

    fn epsilon(&self) -> Simple {
        self.canonical(0, 0)
    }

    fn delta(&self) -> Simple {
        self.canonical(0, self.m)
    }

    /// Right complement `∂x = x⁻¹Δ`.
    fn right_complement(&self, x: Simple) -> Simple {
        if x.len == self.m {
            return self.epsilon();
        }
        if x.len == 0 {
            return self.delta();
        }
        self.canonical(Self::letter_at(x.start, x.len), self.m - x.len)
    }

    /// Left gcd of two simples in the divisibility lattice of `Δ`.
    fn meet(&self, x: Simple, y: Simple) -> Simple {
        if x.len == 0 || y.len == 0 {
            return self.epsilon();
        }
        if x.len == self.m {
            return y;
        }
        if y.len == self.m {
            return x;
        }
        if x.start == y.start {
            self.canonical(x.start, x.len.min(y.len))
        } else {
            self.epsilon()
        }
    }

    /// Conjugation by `Δ` on simples: the generator swap when `m` is odd,
    /// the identity when `m` is even. An involution either way.
    fn tau(&self, x: Simple) -> Simple {
        if self.m % 2 == 0 || x.len == 0 || x.len == self.m {
            x
        } else {
            self.canonical(1 - x.start, x.len)
        }
    }

    /// Left-weights the pair `(a, b)`: transfers the meet of `∂a` and `b`
    /// onto `a`. Returns the rebalanced pair; `a` then carries the maximal
    /// simple left-divisor of `a·b`.
    fn left_weight(&self, a: Simple, b: Simple) -> (Simple, Simple) {
        let c = self.meet(self.right_complement(a), b);
        if c.len == 0 {
            return (a, b);
        }
        let a2 = if a.len == 0 {
            c
        } else {
            self.canonical(a.start, a.len + c.len)
        };
        let b2 = if c.len == b.len {
            self.epsilon()
        } else {
            self.canonical(Self::letter_at(b.start, c.len), b.len - c.len)
        };
        (a2, b2)
    }

    /// Rewrites `Δ^p · tail` into left-weighted canonical form.
    fn normalize(&self, mut delta_power: i64, mut tail: Vec<Simple>) -> DihedralNormalForm {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < tail.len() {
                let (a, b) = self.left_weight(tail[i], tail[i + 1]);
                if (a, b) != (tail[i], tail[i + 1]) {
                    tail[i] = a;
                    tail[i + 1] = b;
                    changed = true;
                }
                i += 1;
            }
            // Absorb Δ factors to the front and drop identities.
            let mut cleaned: Vec<Simple> = Vec::with_capacity(tail.len());
            for x in tail.drain(..) {
                if x.len == 0 {
                    changed = true;
                } else if x.len == self.m {
                    delta_power += 1;
                    for y in cleaned.iter_mut() {
                        *y = self.tau(*y);
                    }
                    changed = true;
                } else {
                    cleaned.push(x);
                }
            }
            tail = cleaned;
            if !changed {
                break;
            }
        }
        DihedralNormalForm { delta_power, tail }
    }

    fn multiply_simple(&self, nf: DihedralNormalForm, c: Simple) -> DihedralNormalForm {
        if c.len == 0 {
            return nf;
        }
        let mut tail = nf.tail;
        tail.push(c);
        self.normalize(nf.delta_power, tail)
    }

    /// Right-multiplication by `Δ^k`, conjugating the tail past the power.
    fn multiply_delta(&self, nf: DihedralNormalForm, k: i64) -> DihedralNormalForm {
        let tail = if k % 2 != 0 && self.m % 2 != 0 {
            nf.tail.iter().map(|&x| self.tau(x)).collect()
        } else {
            nf.tail
        };
        DihedralNormalForm {
            delta_power: nf.delta_power + k,
            tail,
        }
    }

    /// Garside normal form of an arbitrary word over `{s^±1, t^±1}`.
    pub fn normal_form(&self, w: &Word) -> Result<DihedralNormalForm, DihedralError> {
        let mut nf = DihedralNormalForm::identity();
        for &letter in w.letters() {
            let local = self.local(letter.gen)?;
            if !letter.inv {
                nf = self.multiply_simple(nf, self.canonical(local, 1));
            } else {
                // x⁻¹ = Δ⁻¹ · w with Δ = w·x; the left part is the
                // alternating word of length m-1 that ends just before x.
                let start = if self.m % 2 == 1 { local } else { 1 - local };
                nf = self.multiply_delta(nf, -1);
                nf = self.multiply_simple(nf, self.canonical(start, self.m - 1));
            }
        }
        Ok(nf)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool, DihedralError> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool, DihedralError> {
        Ok(self.normal_form(w)?.is_identity())
    }

    /// `(st)^{m'}` with `m' = lcm(m, 2) / 2`: the generator of the centre.
    pub fn centre_element(&self) -> Word {
        let m_prime = if self.m % 2 == 0 { self.m / 2 } else { self.m };
        Word::alternating(self.s, self.t, 2 * m_prime)
    }

    pub fn m_prime(&self) -> u32 {
        if self.m % 2 == 0 {
            self.m / 2
        } else {
            self.m
        }
    }

    /// The Garside element as a word, `sts…` with `m` letters.
    pub fn delta_word(&self) -> Word {
        Word::alternating(self.s, self.t, self.m)
    }

    /// Recovers a word representing the normal form (for reports).
    pub fn normal_form_word(&self, nf: &DihedralNormalForm) -> Word {
        let mut w = Word::empty();
        let delta = self.delta_word();
        if nf.delta_power >= 0 {
            for _ in 0..nf.delta_power {
                w = w.concat(&delta);
            }
        } else {
            let inv = delta.inverse();
            for _ in 0..(-nf.delta_power) {
                w = w.concat(&inv);
            }
        }
        for &x in &nf.tail {
            w = w.concat(&self.simple_word(x));
        }
        w
    }

    pub fn simple_word(&self, x: Simple) -> Word {
        Word(
            (0..x.len)
                .map(|i| Letter::pos(self.ambient(Self::letter_at(x.start, i))))
                .collect(),
        )
    }

    /// Elements of word length at most `radius`, found by breadth-first
    /// search over normal forms. Returns one geodesic word per element.
    pub fn ball(&self, radius: u32) -> Vec<(DihedralNormalForm, Word)> {
        let mut seen: HashMap<DihedralNormalForm, Word> = HashMap::new();
        let id = DihedralNormalForm::identity();
        seen.insert(id.clone(), Word::empty());
        let mut frontier = vec![(id, Word::empty())];
        let letters = [
            Letter::pos(self.s),
            Letter::neg(self.s),
            Letter::pos(self.t),
            Letter::neg(self.t),
        ];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (nf, word) in &frontier {
                for &l in &letters {
                    let mut w2 = word.clone();
                    w2.0.push(l);
                    let nf2 = self
                        .normal_form(&Word(vec![l]))
                        .map(|lnf| {
                            let mut acc = nf.clone();
                            acc = self.multiply_delta(acc, lnf.delta_power);
                            for &x in &lnf.tail {
                                acc = self.multiply_simple(acc, x);
                            }
                            acc
                        })
                        .expect("letters belong to the pair");
                    if !seen.contains_key(&nf2) {
                        seen.insert(nf2.clone(), w2.clone());
                        next.push((nf2, w2));
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<(DihedralNormalForm, Word)> = seen.into_iter().collect();
        out.sort();
        out
    }

    pub fn display_normal_form(&self, nf: &DihedralNormalForm, names: (&str, &str)) -> String {
        let mut out = String::new();
        if nf.delta_power != 0 {
            let _ = write!(out, "D^{}", nf.delta_power);
        }
        for &x in &nf.tail {
            if !out.is_empty() {
                out.push(' ');
            }
            for i in 0..x.len {
                out.push_str(if Self::letter_at(x.start, i) == 0 {
                    names.0
                } else {
                    names.1
                });
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

impl DihedralNormalForm {
    pub fn identity() -> Self {
        DihedralNormalForm {
            delta_power: 0,
            tail: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.tail.is_empty()
    }
}

/// True iff two dihedral Artin groups are isomorphic: isomorphic dihedral
/// Artin groups always have the same coefficient.
pub fn dihedral_coefficient_invariant(g1: &DihedralGroup, g2: &DihedralGroup) -> bool {
    g1.m == g2.m
}

/// All exponent tuples `(k_1, …, k_{2m})` with `0 < |k_i| <= bound` whose
/// alternating word `t^{k_1} r^{k_2} ⋯ r^{k_{2m}}` is trivial in `A_m`,
/// recomputed by exhaustive normal-form evaluation rather than transcribed
/// from the literature.
pub fn trivial_2m_syllable_tuples(m: u32, bound: i64) -> Result<Vec<Vec<i64>>, DihedralError> {
    let group = DihedralGroup::standalone(m)?;
    let positions = 2 * m as usize;
    let per_slot = 2 * bound as u64;
    let total = per_slot.checked_pow(positions as u32).unwrap_or(u64::MAX);
    const LIMIT: u64 = 10_000_000;
    if total > LIMIT {
        return Err(DihedralError::SweepTooLarge(total, LIMIT));
    }
    let choices: Vec<i64> = (1..=bound).flat_map(|k| [k, -k]).collect();
    let mut out = Vec::new();
    let mut tuple = vec![0i64; positions];
    sweep(&group, &choices, &mut tuple, 0, &mut out);
    out.sort();
    Ok(out)
}

fn sweep(
    group: &DihedralGroup,
    choices: &[i64],
    tuple: &mut Vec<i64>,
    depth: usize,
    out: &mut Vec<Vec<i64>>,
) {
    if depth == tuple.len() {
        // Height is Σk_i; a non-zero height word is never trivial, so skip
        // the normal form when the quick invariant already decides.
        if tuple.iter().sum::<i64>() != 0 {
            return;
        }
        let word = alternating_power_word(group, tuple);
        if group.is_trivial(&word).expect("letters in pair") {
            out.push(tuple.clone());
        }
        return;
    }
    for &k in choices {
        tuple[depth] = k;
        sweep(group, choices, tuple, depth + 1, out);
    }
}

/// `t^{k_1} r^{k_2} t^{k_3} …` over the group's pair `(t, r) = (s, t)`.
pub fn alternating_power_word(group: &DihedralGroup, tuple: &[i64]) -> Word {
    let (s, t) = group.generators();
    let mut w = Word::empty();
    for (i, &k) in tuple.iter().enumerate() {
        let gen = if i % 2 == 0 { s } else { t };
        w = w.concat(&Word::power(gen, k));
    }
    w
}
