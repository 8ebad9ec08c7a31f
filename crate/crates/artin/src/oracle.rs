//! Word problem and bounded subgroup-membership oracle for large-type Artin
//! groups.
//!
//! The rewriting closure uses free reduction together with every balanced
//! form of each braid relation: for each edge `{a,b}` with coefficient `m`,
//! every cyclic rotation `r` of the relator (and of its inverse) splits as
//! `r = p·q` with `|p| = m`, and an occurrence of `p` may be replaced by
//! `q⁻¹`. These moves never increase length after free reduction. The search
//! contract — every non-geodesic word admits a shortening reachable through
//! length-preserving moves — is imported from the large-type rewriting
//! literature and is cross-validated against brute force by the acceptance
//! suite at desk scale.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use thiserror::Error;

use crate::graph::{DefiningGraph, GraphError};
use crate::word::{Letter, Word};

pub const DEFAULT_CLASS_CAP: usize = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("word uses generator index {0} outside the graph")]
    LetterOutsideGraph(usize),
    #[error("rewriting class exceeded the cap of {cap} visited words (query length {query_len})")]
    CapExceeded { cap: usize, query_len: usize },
    #[error("subset {0:?} is not a set of generator indices of the graph")]
    BadSubset(Vec<usize>),
}

/// Membership status for radius-limited tests. `Member` and `NonMember` are
/// exact; `UnknownAtBound` only occurs when the class cap interrupted the
/// sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipStatus {
    Member,
    NonMember,
    UnknownAtBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub bound_used: usize,
}

/// Word problem oracle over a fixed large-type defining graph. Queries are
/// logically pure; the internal canonical-form cache is synchronized, so
/// concurrent use returns results identical to some serial execution.
pub struct Oracle {
    graph: DefiningGraph,
    /// `pattern ->` set of replacement words of the same length.
    moves: HashMap<Vec<Letter>, Vec<Vec<Letter>>>,
    cap: usize,
    canonical_cache: Mutex<HashMap<Word, Word>>,
}

impl Oracle {
    pub fn new(graph: DefiningGraph) -> Result<Self, OracleError> {
        Oracle::with_cap(graph, DEFAULT_CLASS_CAP)
    }

    pub fn with_cap(graph: DefiningGraph, cap: usize) -> Result<Self, OracleError> {
        graph.require_large_type()?;
        let mut moves: HashMap<Vec<Letter>, Vec<Vec<Letter>>> = HashMap::new();
        for ((i, j), m) in graph.edges() {
            let relator: Vec<Letter> = Word::alternating(i, j, m)
                .concat(&Word::alternating(j, i, m).inverse())
                .0;
            for base in [relator.clone(), Word(relator).inverse().0] {
                let n = base.len();
                for rot in 0..n {
                    let rotated: Vec<Letter> =
                        (0..n).map(|k| base[(rot + k) % n]).collect();
                    let pattern = rotated[..m as usize].to_vec();
                    let replacement = Word(rotated[m as usize..].to_vec()).inverse().0;
                    let entry = moves.entry(pattern).or_default();
                    if !entry.contains(&replacement) {
                        entry.push(replacement);
                    }
                }
            }
        }
        for repls in moves.values_mut() {
            repls.sort();
        }
        Ok(Oracle {
            graph,
            moves,
            cap,
            canonical_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_word(&self, w: &Word) -> Result<(), OracleError> {
        match w.letters().iter().find(|l| l.gen >= self.graph.rank()) {
            Some(l) => Err(OracleError::LetterOutsideGraph(l.gen)),
            None => Ok(()),
        }
    }

    /// All freely reduced words reachable from `w` (itself freely reduced)
    /// by one balanced relation move. Lengths never increase.
    pub fn rewrite_successors(&self, w: &Word) -> Vec<Word> {
        let letters = w.letters();
        let mut out = Vec::new();
        let m_lengths: Vec<usize> = {
            let mut ls: Vec<usize> = self.moves.keys().map(|p| p.len()).collect();
            ls.sort_unstable();
            ls.dedup();
            ls
        };
        for &plen in &m_lengths {
            if plen > letters.len() {
                continue;
            }
            for i in 0..=letters.len() - plen {
                if let Some(repls) = self.moves.get(&letters[i..i + plen]) {
                    for repl in repls {
                        let mut next = Vec::with_capacity(letters.len());
                        next.extend_from_slice(&letters[..i]);
                        next.extend_from_slice(repl);
                        next.extend_from_slice(&letters[i + plen..]);
                        let reduced = Word(next).free_reduce();
                        debug_assert!(reduced.len() <= letters.len());
                        out.push(reduced);
                    }
                }
            }
        }
        out
    }

    /// Explores the same-length rewriting class of `start` (freely reduced).
    /// Returns either a strictly shorter equivalent word or, if the class is
    /// exhausted, the full class.
    fn explore_class(&self, start: &Word) -> Result<ClassOutcome, OracleError> {
        let mut visited: HashSet<Word> = HashSet::new();
        let mut queue: VecDeque<Word> = VecDeque::new();
        visited.insert(start.clone());
        queue.push_back(start.clone());
        while let Some(current) = queue.pop_front() {
            for succ in self.rewrite_successors(&current) {
                if succ.len() < start.len() {
                    return Ok(ClassOutcome::Shortened(succ));
                }
                if !visited.contains(&succ) {
                    if visited.len() >= self.cap {
                        return Err(OracleError::CapExceeded {
                            cap: self.cap,
                            query_len: start.len(),
                        });
                    }
                    visited.insert(succ.clone());
                    queue.push_back(succ);
                }
            }
        }
        Ok(ClassOutcome::Exhausted(visited))
    }

    /// The full set of geodesic representatives of `w`'s element.
    pub fn geodesic_class(&self, w: &Word) -> Result<HashSet<Word>, OracleError> {
        self.check_word(w)?;
        let mut current = w.free_reduce();
        loop {
            match self.explore_class(&current)? {
                ClassOutcome::Shortened(shorter) => current = shorter,
                ClassOutcome::Exhausted(class) => return Ok(class),
            }
        }
    }

    /// The ShortLex-least word in the full rewriting class of `w`; generator
    /// order is the graph input order, inverse letters rank after positive
    /// letters. Used as the canonical element key everywhere.
    pub fn shortlex_geodesic(&self, w: &Word) -> Result<Word, OracleError> {
        self.check_word(w)?;
        let reduced = w.free_reduce();
        if let Some(hit) = self.canonical_cache.lock().unwrap().get(&reduced) {
            return Ok(hit.clone());
        }
        let class = self.geodesic_class(&reduced)?;
        let n = self.graph.rank();
        let best = class
            .iter()
            .min_by(|a, b| a.shortlex_cmp(b, n))
            .cloned()
            .unwrap_or_else(Word::empty);
        let mut cache = self.canonical_cache.lock().unwrap();
        cache.insert(reduced, best.clone());
        cache.insert(best.clone(), best.clone());
        Ok(best)
    }

    /// Exact word problem: true iff `w` represents the identity.
    pub fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        self.check_word(w)?;
        let reduced = w.free_reduce();
        if reduced.is_empty() {
            return Ok(true);
        }
        if reduced.height() != 0 {
            return Ok(false);
        }
        Ok(self.shortlex_geodesic(&reduced)?.is_empty())
    }

    /// True iff `u` and `v` represent the same element; decided through
    /// canonical keys, which agrees with `is_trivial(u·v⁻¹)`.
    pub fn are_equal(&self, u: &Word, v: &Word) -> Result<bool, OracleError> {
        if u.height() != v.height() {
            self.check_word(u)?;
            self.check_word(v)?;
            return Ok(false);
        }
        Ok(self.shortlex_geodesic(u)? == self.shortlex_geodesic(v)?)
    }

    /// Membership of `w` in the standard parabolic subgroup generated by
    /// `sub`: member iff some geodesic representative uses only letters of
    /// `sub`.
    pub fn standard_parabolic_membership(
        &self,
        w: &Word,
        sub: &[usize],
    ) -> Result<MembershipVerdict, OracleError> {
        if sub.iter().any(|&g| g >= self.graph.rank()) {
            return Err(OracleError::BadSubset(sub.to_vec()));
        }
        let canonical = match self.shortlex_geodesic(w) {
            Ok(c) => c,
            Err(OracleError::CapExceeded { cap, .. }) => {
                return Ok(MembershipVerdict {
                    status: MembershipStatus::UnknownAtBound,
                    bound_used: cap,
                })
            }
            Err(e) => return Err(e),
        };
        let in_sub = |word: &Word| word.support().iter().all(|g| sub.contains(g));
        if in_sub(&canonical) {
            return Ok(MembershipVerdict {
                status: MembershipStatus::Member,
                bound_used: self.cap,
            });
        }
        // Mixed support: sweep the full geodesic class at that length.
        let class = match self.geodesic_class(&canonical) {
            Ok(c) => c,
            Err(OracleError::CapExceeded { cap, .. }) => {
                return Ok(MembershipVerdict {
                    status: MembershipStatus::UnknownAtBound,
                    bound_used: cap,
                })
            }
            Err(e) => return Err(e),
        };
        let status = if class.iter().any(in_sub) {
            MembershipStatus::Member
        } else {
            MembershipStatus::NonMember
        };
        Ok(MembershipVerdict {
            status,
            bound_used: self.cap,
        })
    }

    /// Convenience wrapper asserting an exact boolean membership answer.
    pub fn in_standard_parabolic(&self, w: &Word, sub: &[usize]) -> Result<bool, OracleError> {
        match self.standard_parabolic_membership(w, sub)?.status {
            MembershipStatus::Member => Ok(true),
            MembershipStatus::NonMember => Ok(false),
            MembershipStatus::UnknownAtBound => Err(OracleError::CapExceeded {
                cap: self.cap,
                query_len: w.len(),
            }),
        }
    }

    /// Canonical key for the coset `g·⟨a⟩`: the ShortLex-least canonical
    /// form among `g·a^k`. The scan covers `|k| ≤ 2·|geo(g)| + 1`, which
    /// always contains the coset's minimal element because `|a^k| ≤ |g| +
    /// |x|` for any coset member `x` no longer than `g`.
    pub fn cyclic_coset_key(&self, g: &Word, a: usize) -> Result<Word, OracleError> {
        let base = self.shortlex_geodesic(g)?;
        let bound = 2 * base.len() as i64 + 1;
        let n = self.graph.rank();
        let mut best = base.clone();
        for dir in [1i64, -1] {
            let mut current = base.clone();
            for _ in 0..bound {
                let step = Word(vec![if dir > 0 {
                    Letter::pos(a)
                } else {
                    Letter::neg(a)
                }]);
                current = self.shortlex_geodesic(&current.concat(&step))?;
                if current.shortlex_cmp(&best, n) == std::cmp::Ordering::Less {
                    best = current.clone();
                }
            }
        }
        Ok(best)
    }

    /// Clears the canonical-form cache (used by long-running CLI sessions).
    pub fn clear_cache(&self) {
        self.canonical_cache.lock().unwrap().clear();
    }
}

enum ClassOutcome {
    Shortened(Word),
    Exhausted(HashSet<Word>),
}
