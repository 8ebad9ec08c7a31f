//! Free-group word arithmetic over the standard generators, the height
//! homomorphism, and syllable structure.
//!
//! Words are stored as raw letter sequences and reduced on demand; the
//! rewriting search in the oracle module manipulates unreduced intermediates.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::DefiningGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}` at position {1}")]
    UnknownGenerator(String, usize),
    #[error("malformed word syntax at position {0}: {1}")]
    Syntax(usize, String),
    #[error("zero exponent at position {0}")]
    ZeroExponent(usize),
}

/// A signed generator: `gen` indexes into the defining graph's vertex list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }

    /// ShortLex letter rank: positive letters (in generator order) before
    /// all inverse letters.
    pub fn rank(self, rank_count: usize) -> usize {
        if self.inv {
            rank_count + self.gen
        } else {
            self.gen
        }
    }
}

/// A word in the standard generators: the universal carrier for group
/// elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

/// A maximal run of one generator, with its non-zero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syllable {
    pub gen: usize,
    pub exponent: i64,
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(gen: usize) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// `gen^exponent`; the empty word when `exponent == 0`.
    pub fn power(gen: usize, exponent: i64) -> Self {
        let letter = if exponent < 0 {
            Letter::neg(gen)
        } else {
            Letter::pos(gen)
        };
        Word(vec![letter; exponent.unsigned_abs() as usize])
    }

    /// Alternating positive word `x y x y ...` of the given length.
    pub fn alternating(x: usize, y: usize, len: u32) -> Self {
        Word(
            (0..len)
                .map(|i| Letter::pos(if i % 2 == 0 { x } else { y }))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Removes adjacent cancelling pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Sum of letter signs; a homomorphism to the integers.
    pub fn height(&self) -> i64 {
        self.0.iter().map(|l| l.sign()).sum()
    }

    /// Maximal runs of a single generator merged into exponents. Expects a
    /// freely reduced word (a reducible word would yield a zero exponent).
    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out: Vec<Syllable> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some(s) if s.gen == l.gen => s.exponent += l.sign(),
                _ => out.push(Syllable {
                    gen: l.gen,
                    exponent: l.sign(),
                }),
            }
        }
        debug_assert!(out.iter().all(|s| s.exponent != 0));
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters).free_reduce()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `g w g^-1`, freely reduced.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    /// `[u, v] = u v u^-1 v^-1`, freely reduced.
    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other)
            .concat(&self.inverse())
            .concat(&other.inverse())
    }

    pub fn support(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self.0.iter().map(|l| l.gen).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// ShortLex comparison with the given total number of generators:
    /// shorter first, then lexicographic with positive letters ranking
    /// before inverse letters.
    pub fn shortlex_cmp(&self, other: &Word, rank_count: usize) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            let a = self.0.iter().map(|l| l.rank(rank_count));
            let b = other.0.iter().map(|l| l.rank(rank_count));
            a.cmp(b)
        })
    }

    /// Validates that every letter indexes a generator of `graph`.
    pub fn validate(&self, graph: &DefiningGraph) -> bool {
        self.0.iter().all(|l| l.gen < graph.rank())
    }

    /// Parses the CLI word syntax. Letters are separated by whitespace or
    /// `.`; the inverse is marked by `^-1` (general exponents `^k` are
    /// accepted) or by an uppercase variant of a single-letter generator.
    /// `"a b^-1 c"` and `"aB c"` denote the same word.
    pub fn parse(graph: &DefiningGraph, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for (tok_start, token) in tokenize(text) {
            parse_token(graph, token, tok_start, &mut letters)?;
        }
        Ok(Word(letters))
    }

    /// Renders the word using explicit `^-1` / `^k` notation, merging runs.
    pub fn display(&self, graph: &DefiningGraph) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, syl) in self.syllables().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(graph.name(syl.gen));
            if syl.exponent != 1 {
                let _ = write!(out, "^{}", syl.exponent);
            }
        }
        out
    }
}

fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() || c == '.' {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_token(
    graph: &DefiningGraph,
    token: &str,
    pos: usize,
    letters: &mut Vec<Letter>,
) -> Result<(), WordError> {
    // Longest-match a generator name, optionally followed by ^exponent;
    // otherwise fall back to character-by-character parsing where an
    // uppercase letter is the inverse of its lowercase generator.
    let (name_part, exp_part) = match token.find('^') {
        Some(k) => (&token[..k], Some(&token[k + 1..])),
        None => (token, None),
    };
    if let Ok(gen) = graph.index_of(name_part) {
        let exponent: i64 = match exp_part {
            None => 1,
            Some(e) => e
                .parse()
                .map_err(|_| WordError::Syntax(pos, format!("bad exponent `{e}`")))?,
        };
        if exponent == 0 {
            return Err(WordError::ZeroExponent(pos));
        }
        letters.extend_from_slice(&Word::power(gen, exponent).0);
        return Ok(());
    }
    if exp_part.is_some() {
        return Err(WordError::UnknownGenerator(name_part.to_string(), pos));
    }
    for (off, c) in token.char_indices() {
        let lower = c.to_ascii_lowercase().to_string();
        let gen = graph
            .index_of(&lower)
            .map_err(|_| WordError::UnknownGenerator(c.to_string(), pos + off))?;
        letters.push(if c.is_ascii_uppercase() {
            Letter::neg(gen)
        } else {
            Letter::pos(gen)
        });
    }
    Ok(())
}
