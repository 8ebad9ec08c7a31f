//! Arrow calculus on principal triangles of `(3,3,3)` complexes.
//!
//! Adjacent fundamental-domain translates `g·K`, `h·K` satisfy `g⁻¹h = s^k`
//! for a generator `s` and `k ≠ 0`; the arrow between them is single for
//! `|k| = 1` (directed along the sign) and double for `|k| ≥ 2`. Around any
//! type-2 vertex, six cyclically adjacent translates form a principal
//! hexagon, and the induced exponent tuple must be trivial in `A_3` — this
//! derived condition is the implementable ground truth for the two legal
//! arrow patterns. The completion solver propagates those constraints over a
//! patch (ball-backed or an abstract flat patch) to fixpoint, with an
//! exhaustive satisfiability backstop.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::deligne::ComplexBall;
use crate::dihedral::{alternating_power_word, DihedralGroup};
use crate::oracle::{Oracle, OracleError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum HexagonError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("graph is not a (3,3,3) triangle")]
    NotEquilateralTriangle,
    #[error("copies {0} and {1} share a side but their quotient is not a generator power")]
    CorruptedRegion(usize, usize),
    #[error("hexagon copies are not cyclically adjacent")]
    NotAHexagon,
    #[error("seed references side {0} which is not in the patch")]
    BadSeed(usize),
}

/// Arrow between two adjacent translates, stored on the ordered pair
/// `(from, to)` with `from < to`; the exponent satisfies
/// `element(from)⁻¹ · element(to) = gen^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrowData {
    pub gen: usize,
    pub exponent: i64,
}

impl ArrowData {
    pub fn is_double(&self) -> bool {
        self.exponent.abs() >= 2
    }
}

/// The full arrow system of a region: exponent data per adjacent copy pair.
#[derive(Debug, Clone)]
pub struct ArrowSystem {
    pub arrows: BTreeMap<(usize, usize), ArrowData>,
}

impl ArrowSystem {
    /// Signed exponent for the traversal `from → to`.
    pub fn exponent(&self, from: usize, to: usize) -> Option<i64> {
        if from < to {
            self.arrows.get(&(from, to)).map(|a| a.exponent)
        } else {
            self.arrows.get(&(to, from)).map(|a| -a.exponent)
        }
    }
}

fn require_333(ball: &ComplexBall) -> Result<(), HexagonError> {
    let g = ball.graph();
    if g.rank() != 3 || g.edges().any(|(_, m)| m != 3) || g.edge_count() != 3 {
        return Err(HexagonError::NotEquilateralTriangle);
    }
    Ok(())
}

/// Labels every shared side between copies of the region (all copies when
/// `region` is `None`). The exponent is recovered from the height
/// homomorphism and verified by the oracle; a mismatch signals a corrupted
/// region.
pub fn derive_arrows(
    ball: &ComplexBall,
    oracle: &Oracle,
    region: Option<&[usize]>,
) -> Result<ArrowSystem, HexagonError> {
    require_333(ball)?;
    let ids: Vec<usize> = match region {
        Some(r) => r.to_vec(),
        None => (0..ball.copies().len()).collect(),
    };
    let mut arrows = BTreeMap::new();
    for (pos, &a) in ids.iter().enumerate() {
        for &b in ids.iter().skip(pos + 1) {
            let Some(gen) = ball.shared_side(a, b) else {
                continue;
            };
            let (lo, hi) = (a.min(b), a.max(b));
            let ga = &ball.copies()[lo].element;
            let gb = &ball.copies()[hi].element;
            let k = gb.height() - ga.height();
            let claim = ga.inverse().concat(gb);
            if k == 0 || !oracle.are_equal(&claim, &Word::power(gen, k))? {
                return Err(HexagonError::CorruptedRegion(a, b));
            }
            arrows.insert((lo, hi), ArrowData { gen, exponent: k });
        }
    }
    Ok(ArrowSystem { arrows })
}

/// Six principal triangles around a common type-2 vertex, cyclically
/// edge-adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalHexagon {
    pub copies: [usize; 6],
    pub centre_v2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HexagonPattern {
    /// All six arrows single, directions consistent with a trivial tuple.
    AllSingleConsistent,
    /// Exactly two double arrows on opposite sides, singles aligned.
    TwoDoubleOpposite,
    /// The induced exponent word is non-trivial: impossible on a genuine
    /// hexagon.
    Invalid,
}

/// Classifies the hexagon by the triviality of its induced alternating
/// exponent word in `A_3`.
pub fn classify_hexagon(
    hexagon: &PrincipalHexagon,
    arrows: &ArrowSystem,
) -> Result<HexagonPattern, HexagonError> {
    let mut exponents = [0i64; 6];
    let mut gens = [usize::MAX; 6];
    for i in 0..6 {
        let from = hexagon.copies[i];
        let to = hexagon.copies[(i + 1) % 6];
        let key = (from.min(to), from.max(to));
        let data = arrows.arrows.get(&key).ok_or(HexagonError::NotAHexagon)?;
        exponents[i] = arrows.exponent(from, to).unwrap();
        gens[i] = data.gen;
    }
    // Gluing generators alternate around a genuine hexagon.
    for i in 0..6 {
        if gens[i] == gens[(i + 1) % 6] {
            return Err(HexagonError::NotAHexagon);
        }
    }
    Ok(classify_exponents(&exponents))
}

/// Pattern of a raw exponent tuple around a hexagon.
pub fn classify_exponents(exponents: &[i64; 6]) -> HexagonPattern {
    let group = DihedralGroup::standalone(3).expect("m = 3");
    let word = alternating_power_word(&group, exponents);
    if !group.is_trivial(&word).expect("two-letter word") {
        return HexagonPattern::Invalid;
    }
    if exponents.iter().all(|k| k.abs() == 1) {
        HexagonPattern::AllSingleConsistent
    } else {
        HexagonPattern::TwoDoubleOpposite
    }
}

/// Enumerates principal hexagons around a type-2 vertex of the ball, up to
/// rotation and reflection. Consecutive gluing generators must alternate
/// around the cycle: without that requirement, chains inside a single
/// stabiliser line would close into spurious 6-cycles.
pub fn harvest_hexagons(
    ball: &ComplexBall,
    v2_id: usize,
) -> Result<Vec<PrincipalHexagon>, HexagonError> {
    require_333(ball)?;
    let around = ball.copies_containing_v2(v2_id);
    let mut adjacent: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (pos, &a) in around.iter().enumerate() {
        for &b in around.iter().skip(pos + 1) {
            if let Some(gen) = ball.shared_side(a, b) {
                adjacent.entry(a).or_default().push((b, gen));
                adjacent.entry(b).or_default().push((a, gen));
            }
        }
    }
    let mut found: BTreeSet<[usize; 6]> = BTreeSet::new();
    let mut path = Vec::with_capacity(6);
    let mut gens = Vec::with_capacity(6);
    for &start in &around {
        path.push(start);
        dfs_cycles(&adjacent, start, &mut path, &mut gens, &mut found);
        path.pop();
    }
    Ok(found
        .into_iter()
        .map(|copies| PrincipalHexagon {
            copies,
            centre_v2: v2_id,
        })
        .collect())
}

fn dfs_cycles(
    adjacent: &HashMap<usize, Vec<(usize, usize)>>,
    start: usize,
    path: &mut Vec<usize>,
    gens: &mut Vec<usize>,
    found: &mut BTreeSet<[usize; 6]>,
) {
    if path.len() == 6 {
        let last = *path.last().unwrap();
        if let Some(&(_, gen)) = adjacent
            .get(&last)
            .and_then(|ns| ns.iter().find(|&&(n, _)| n == start))
        {
            // Closing step must alternate with both its neighbours.
            if gen != gens[4] && gen != gens[0] {
                found.insert(canonical_cycle(path));
            }
        }
        return;
    }
    let current = *path.last().unwrap();
    for &(next, gen) in adjacent.get(&current).into_iter().flatten() {
        if path.contains(&next) {
            continue;
        }
        if gens.last().is_some_and(|&prev| prev == gen) {
            continue;
        }
        path.push(next);
        gens.push(gen);
        dfs_cycles(adjacent, start, path, gens, found);
        gens.pop();
        path.pop();
    }
}

/// Canonical representative of a 6-cycle up to rotation and reflection.
fn canonical_cycle(cycle: &[usize]) -> [usize; 6] {
    let mut best: Option<[usize; 6]> = None;
    for rot in 0..6 {
        for flip in [false, true] {
            let mut candidate = [0usize; 6];
            for (i, slot) in candidate.iter_mut().enumerate() {
                let idx = if flip { (rot + 6 - i) % 6 } else { (rot + i) % 6 };
                *slot = cycle[idx];
            }
            if best.map(|b| candidate < b).unwrap_or(true) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap()
}

// ---------------------------------------------------------------------------
// Arrow completion: constraint propagation over a patch of triangles.
// ---------------------------------------------------------------------------

/// Abstract arrow state of one side, relative to the side's stored
/// orientation `(from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpokeValue {
    SingleForward,
    SingleBackward,
    Double,
}

const ALL_VALUES: [SpokeValue; 3] = [
    SpokeValue::SingleForward,
    SpokeValue::SingleBackward,
    SpokeValue::Double,
];

/// A patch: triangles, their shared sides (with a fixed orientation), and
/// the full hexagons whose six spokes the legality constraint binds.
#[derive(Debug, Clone)]
pub struct ArrowPatch {
    pub side_count: usize,
    /// Per hexagon: the six spokes in cyclic traversal order, each with the
    /// flag telling whether traversal crosses the side along its stored
    /// orientation.
    pub hexagons: Vec<[(usize, bool); 6]>,
}

/// Outcome of constraint completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionOutcome {
    /// Every side forced to a unique arrow.
    Completed(Vec<SpokeValue>),
    /// Propagation reached a consistent fixpoint with remaining freedom;
    /// known arrows were only extended, never revised.
    Extended(Vec<Vec<SpokeValue>>),
    /// Some hexagon excludes both legal patterns.
    Contradiction { hexagon: usize },
}

/// The set of legal spoke patterns of a principal hexagon, projected from
/// the trivial exponent tuples of `A_3`. Recomputed from the dihedral
/// engine; exponent magnitude 2 realises every double-arrow pattern (the
/// projection is verified stable against magnitude 3 in tests).
pub fn legal_spoke_patterns() -> BTreeSet<[SpokeValue; 6]> {
    legal_spoke_patterns_with_bound(2)
}

pub fn legal_spoke_patterns_with_bound(bound: i64) -> BTreeSet<[SpokeValue; 6]> {
    let group = DihedralGroup::standalone(3).expect("m = 3");
    let choices: Vec<i64> = (1..=bound).flat_map(|k| [k, -k]).collect();
    let mut out = BTreeSet::new();
    let mut tuple = [0i64; 6];
    fn rec(
        group: &DihedralGroup,
        choices: &[i64],
        tuple: &mut [i64; 6],
        depth: usize,
        out: &mut BTreeSet<[SpokeValue; 6]>,
    ) {
        if depth == 6 {
            if tuple.iter().sum::<i64>() != 0 {
                return;
            }
            let word = alternating_power_word(group, tuple);
            if group.is_trivial(&word).expect("two letters") {
                let mut pattern = [SpokeValue::Double; 6];
                for (i, &k) in tuple.iter().enumerate() {
                    pattern[i] = match k {
                        1 => SpokeValue::SingleForward,
                        -1 => SpokeValue::SingleBackward,
                        _ => SpokeValue::Double,
                    };
                }
                out.insert(pattern);
            }
            return;
        }
        for &k in choices {
            tuple[depth] = k;
            rec(group, choices, tuple, depth + 1, out);
        }
    }
    rec(&group, &choices, &mut tuple, 0, &mut out);
    out
}

fn oriented(value: SpokeValue, aligned: bool) -> SpokeValue {
    match (value, aligned) {
        (SpokeValue::Double, _) => SpokeValue::Double,
        (v, true) => v,
        (SpokeValue::SingleForward, false) => SpokeValue::SingleBackward,
        (SpokeValue::SingleBackward, false) => SpokeValue::SingleForward,
    }
}

/// Propagates forced arrows hexagon-by-hexagon until fixpoint, starting
/// from seed values; deterministic and monotone (seeds are never revised).
/// If the fixpoint still leaves freedom, an exhaustive satisfiability check
/// backs the verdict: an unsatisfiable patch is reported as a contradiction.
pub fn complete_strip(
    patch: &ArrowPatch,
    seeds: &[(usize, SpokeValue)],
) -> Result<CompletionOutcome, HexagonError> {
    let legal = legal_spoke_patterns();
    let mut domains: Vec<BTreeSet<SpokeValue>> = vec![
        ALL_VALUES.iter().copied().collect();
        patch.side_count
    ];
    for &(side, value) in seeds {
        if side >= patch.side_count {
            return Err(HexagonError::BadSeed(side));
        }
        domains[side] = BTreeSet::from([value]);
    }
    match propagate(patch, &legal, &mut domains) {
        Some(hexagon) => return Ok(CompletionOutcome::Contradiction { hexagon }),
        None => {}
    }
    if domains.iter().all(|d| d.len() == 1) {
        return Ok(CompletionOutcome::Completed(
            domains.iter().map(|d| *d.iter().next().unwrap()).collect(),
        ));
    }
    // Exhaustive backstop: decide whether any full assignment survives.
    let mut conflict = 0usize;
    if !satisfiable(patch, &legal, domains.clone(), &mut conflict) {
        return Ok(CompletionOutcome::Contradiction { hexagon: conflict });
    }
    Ok(CompletionOutcome::Extended(
        domains
            .into_iter()
            .map(|d| d.into_iter().collect())
            .collect(),
    ))
}

/// Generalised arc consistency over hexagon constraints. Returns the index
/// of a hexagon whose constraint became unsatisfiable, if any.
fn propagate(
    patch: &ArrowPatch,
    legal: &BTreeSet<[SpokeValue; 6]>,
    domains: &mut [BTreeSet<SpokeValue>],
) -> Option<usize> {
    loop {
        let mut changed = false;
        for (h_idx, hexagon) in patch.hexagons.iter().enumerate() {
            let mut allowed: [BTreeSet<SpokeValue>; 6] = Default::default();
            let mut any = false;
            for pattern in legal {
                let fits = hexagon.iter().enumerate().all(|(i, &(side, aligned))| {
                    domains[side].contains(&oriented(pattern[i], aligned))
                });
                if fits {
                    any = true;
                    for (i, &(_, aligned)) in hexagon.iter().enumerate() {
                        allowed[i].insert(oriented(pattern[i], aligned));
                    }
                }
            }
            if !any {
                return Some(h_idx);
            }
            for (i, &(side, _)) in hexagon.iter().enumerate() {
                let narrowed: BTreeSet<SpokeValue> = domains[side]
                    .intersection(&allowed[i])
                    .copied()
                    .collect();
                if narrowed.len() < domains[side].len() {
                    domains[side] = narrowed;
                    changed = true;
                }
                if domains[side].is_empty() {
                    return Some(h_idx);
                }
            }
        }
        if !changed {
            return None;
        }
    }
}

fn satisfiable(
    patch: &ArrowPatch,
    legal: &BTreeSet<[SpokeValue; 6]>,
    domains: Vec<BTreeSet<SpokeValue>>,
    conflict: &mut usize,
) -> bool {
    let branch = (0..domains.len())
        .filter(|&s| domains[s].len() > 1)
        .min_by_key(|&s| domains[s].len());
    let Some(side) = branch else {
        return true;
    };
    for value in domains[side].clone() {
        let mut trial = domains.clone();
        trial[side] = BTreeSet::from([value]);
        match propagate(patch, legal, &mut trial) {
            Some(h) => {
                *conflict = h;
                continue;
            }
            None => {
                if satisfiable(patch, legal, trial, conflict) {
                    return true;
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Patch builders.
// ---------------------------------------------------------------------------

/// Builds the patch of a ball region: sides are adjacent copy pairs of the
/// region, hexagons are harvested around every type-2 vertex. Returns the
/// patch together with the side index of each copy pair.
pub fn patch_from_ball(
    ball: &ComplexBall,
    region: Option<&[usize]>,
) -> Result<(ArrowPatch, BTreeMap<(usize, usize), usize>), HexagonError> {
    require_333(ball)?;
    let ids: Vec<usize> = match region {
        Some(r) => r.to_vec(),
        None => (0..ball.copies().len()).collect(),
    };
    let id_set: BTreeSet<usize> = ids.iter().copied().collect();
    let mut side_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pos, &a) in ids.iter().enumerate() {
        for &b in ids.iter().skip(pos + 1) {
            if ball.shared_side(a, b).is_some() {
                let key = (a.min(b), a.max(b));
                let next = side_index.len();
                side_index.entry(key).or_insert(next);
            }
        }
    }
    let mut hexagons = Vec::new();
    for v2_id in 0..ball.v2_vertices().len() {
        for hexagon in harvest_hexagons(ball, v2_id)? {
            if !hexagon.copies.iter().all(|c| id_set.contains(c)) {
                continue;
            }
            let mut spokes = [(0usize, true); 6];
            let mut ok = true;
            for i in 0..6 {
                let from = hexagon.copies[i];
                let to = hexagon.copies[(i + 1) % 6];
                let key = (from.min(to), from.max(to));
                match side_index.get(&key) {
                    Some(&s) => spokes[i] = (s, from < to),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                hexagons.push(spokes);
            }
        }
    }
    Ok((
        ArrowPatch {
            side_count: side_index.len(),
            hexagons,
        },
        side_index,
    ))
}

/// Triangle of the abstract flat patch: `up` triangles span
/// `(x,y),(x+1,y),(x,y+1)`, `down` triangles `(x+1,y),(x,y+1),(x+1,y+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatTriangle {
    pub x: i32,
    pub y: i32,
    pub up: bool,
}

impl FlatTriangle {
    pub fn up(x: i32, y: i32) -> Self {
        FlatTriangle { x, y, up: true }
    }

    pub fn down(x: i32, y: i32) -> Self {
        FlatTriangle { x, y, up: false }
    }

    fn corners(&self) -> [(i32, i32); 3] {
        if self.up {
            [(self.x, self.y), (self.x + 1, self.y), (self.x, self.y + 1)]
        } else {
            [
                (self.x + 1, self.y),
                (self.x, self.y + 1),
                (self.x + 1, self.y + 1),
            ]
        }
    }
}

/// Patch over an explicit set of flat triangles. Sides join triangles
/// sharing two corners. Hexagon constraints are imposed at every lattice
/// vertex whose six surrounding triangles are present — restricted to
/// `allowed_vertices` when given, since a hypothetical flat configuration
/// only realises genuine hexagons at vertices where it is asserted planar
/// (region-interior and side-interior vertices; not at corners, where
/// chosen strips change sheets).
pub fn flat_patch(
    triangles: &[FlatTriangle],
    allowed_vertices: Option<&[(i32, i32)]>,
) -> (ArrowPatch, BTreeMap<(FlatTriangle, FlatTriangle), usize>) {
    let set: BTreeSet<FlatTriangle> = triangles.iter().copied().collect();
    let mut side_index: BTreeMap<(FlatTriangle, FlatTriangle), usize> = BTreeMap::new();
    let tri_vec: Vec<FlatTriangle> = set.iter().copied().collect();
    for (pos, &a) in tri_vec.iter().enumerate() {
        for &b in tri_vec.iter().skip(pos + 1) {
            let shared = a
                .corners()
                .iter()
                .filter(|c| b.corners().contains(c))
                .count();
            if shared == 2 {
                let next = side_index.len();
                side_index.entry((a.min(b), a.max(b))).or_insert(next);
            }
        }
    }
    // Hexagon around vertex (i, j), in cyclic order.
    let around = |i: i32, j: i32| {
        [
            FlatTriangle::up(i, j),
            FlatTriangle::down(i - 1, j),
            FlatTriangle::up(i - 1, j),
            FlatTriangle::down(i - 1, j - 1),
            FlatTriangle::up(i, j - 1),
            FlatTriangle::down(i, j - 1),
        ]
    };
    let vertices: Vec<(i32, i32)> = match allowed_vertices {
        Some(list) => list.to_vec(),
        None => {
            let mut all: BTreeSet<(i32, i32)> = BTreeSet::new();
            for t in &set {
                for c in t.corners() {
                    all.insert(c);
                }
            }
            all.into_iter().collect()
        }
    };
    let mut hexagons = Vec::new();
    for &(i, j) in &vertices {
        let ring = around(i, j);
        if !ring.iter().all(|t| set.contains(t)) {
            continue;
        }
        let mut spokes = [(0usize, true); 6];
        for k in 0..6 {
            let a = ring[k];
            let b = ring[(k + 1) % 6];
            let key = (a.min(b), a.max(b));
            let side = side_index[&key];
            spokes[k] = (side, a <= b);
        }
        hexagons.push(spokes);
    }
    (
        ArrowPatch {
            side_count: side_index.len(),
            hexagons,
        },
        side_index,
    )
}
