//! Bounded-radius construction of the Deligne complex as a coset complex.
//!
//! The complex is the development of the fundamental domain `K_Γ` (the cone
//! over `Γ_bar`): one copy `g·K` per group element, glued along shared
//! simplices. A ball is grown by gallery steps `g → g·a^k` with
//! `0 < |k| ≤ length_bound`, out to the requested gallery radius, with copies
//! and cosets deduplicated through the oracle's exact canonical forms. All
//! truncation bounds are explicit and recorded in the output; audits consume
//! only simplices whose demanded attachments were actually generated.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::dihedral::DihedralGroup;
use crate::graph::{DefiningGraph, GraphError};
use crate::oracle::{Oracle, OracleError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum DeligneError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("radius and length bound must be at least {0}")]
    BadBounds(u32),
    #[error("coset deduplication inconsistency between copies {0} and {1}")]
    DedupInconsistency(usize, usize),
    #[error("region is empty")]
    EmptyRegion,
    #[error("region copy id {0} out of range")]
    BadRegionCopy(usize),
    #[error("gauss-bonnet regions require a rank-3 graph (got rank {0})")]
    RegionRankUnsupported(usize),
    #[error("region is not a disk: {0}")]
    NotADisk(String),
    #[error("region touches a simplex without interior certification: copy {0}")]
    RegionNotCertified(usize),
}

/// Explicit truncation policy of a ball build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct BallConfig {
    /// Gallery distance from the base fundamental domain.
    pub radius: u32,
    /// Word-length truncation of the local groups along gallery steps.
    pub length_bound: u32,
}

/// Exact base-triangle angles, stored as rational multiples of π.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoussongAngles {
    pub at_v2: Rational64,
    pub at_v1: Rational64,
    pub at_v0: Rational64,
}

impl MoussongAngles {
    pub fn for_coefficient(m: u32) -> Self {
        let m = m as i64;
        let at_v2 = Rational64::new(1, 2 * m);
        let at_v1 = Rational64::new(1, 2);
        let at_v0 = at_v1 - at_v2;
        MoussongAngles { at_v2, at_v1, at_v0 }
    }

    /// The three angles of a base triangle always sum to π.
    pub fn sum(&self) -> Rational64 {
        self.at_v2 + self.at_v1 + self.at_v0
    }
}

/// Side lengths of a base triangle under the Moussong metric, normalised so
/// that the edge from the apex to the type-1 vertex has length 1; recovered
/// by the law of sines from the three angles.
#[derive(Debug, Clone, Copy)]
pub struct MoussongEdgeLengths {
    pub angles: MoussongAngles,
    /// |v0 v1| (the normalisation).
    pub v0_v1: f64,
    /// |v1 v2|.
    pub v1_v2: f64,
    /// |v0 v2|.
    pub v0_v2: f64,
}

pub fn moussong_edge_lengths(m: u32) -> MoussongEdgeLengths {
    let angles = MoussongAngles::for_coefficient(m);
    let rad = |r: Rational64| std::f64::consts::PI * (*r.numer() as f64) / (*r.denom() as f64);
    let (a2, a1, a0) = (rad(angles.at_v2), rad(angles.at_v1), rad(angles.at_v0));
    // Each side faces the opposite vertex's angle.
    MoussongEdgeLengths {
        angles,
        v0_v1: 1.0,
        v1_v2: a0.sin() / a2.sin(),
        v0_v2: a1.sin() / a2.sin(),
    }
}

/// One translate `g·K` of the fundamental domain.
#[derive(Debug, Clone)]
pub struct CopyData {
    /// Canonical (ShortLex-geodesic) word for `g`.
    pub element: Word,
    /// Gallery depth at first discovery.
    pub depth: u32,
}

/// Type-1 vertex: the coset `g·⟨a⟩`.
#[derive(Debug, Clone)]
pub struct V1Data {
    pub gen: usize,
    /// Canonical coset key (ShortLex-least coset element).
    pub rep: Word,
    pub interior: bool,
}

/// Type-2 vertex: the coset `g·A_ab`.
#[derive(Debug, Clone)]
pub struct V2Data {
    /// Pair as `(i, j)` with `i < j`.
    pub pair: (usize, usize),
    /// Deterministic per-ball representative (element of the coset).
    pub rep: Word,
    pub interior: bool,
}

/// A base triangle `g·T_ab`: `pair` is ordered, the type-1 vertex belongs to
/// the first generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub copy: usize,
    pub pair: (usize, usize),
    pub v1: usize,
    pub v2: usize,
}

/// Finite simplicial ball of the Deligne complex. Type-0 vertices are in
/// bijection with copies (their local group is trivial), so they share ids.
pub struct ComplexBall {
    graph: DefiningGraph,
    config: BallConfig,
    copies: Vec<CopyData>,
    copy_index: HashMap<Word, usize>,
    v1: Vec<V1Data>,
    v2: Vec<V2Data>,
    /// `copy_v1[c][a]` = v1 id of `g·⟨a⟩`.
    copy_v1: Vec<Vec<usize>>,
    /// `copy_v2[c][e]` = v2 id for the e-th edge of the graph.
    copy_v2: Vec<Vec<usize>>,
    triangles: Vec<Triangle>,
}

impl ComplexBall {
    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn config(&self) -> BallConfig {
        self.config
    }

    pub fn copies(&self) -> &[CopyData] {
        &self.copies
    }

    pub fn v1_vertices(&self) -> &[V1Data] {
        &self.v1
    }

    pub fn v2_vertices(&self) -> &[V2Data] {
        &self.v2
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn copy_id_of(&self, element: &Word, oracle: &Oracle) -> Result<Option<usize>, OracleError> {
        let key = oracle.shortlex_geodesic(element)?;
        Ok(self.copy_index.get(&key).copied())
    }

    pub fn v1_id(&self, copy: usize, gen: usize) -> usize {
        self.copy_v1[copy][gen]
    }

    pub fn v2_id(&self, copy: usize, edge_idx: usize) -> usize {
        self.copy_v2[copy][edge_idx]
    }

    /// Edge index in graph edge order for a vertex pair, if spherical.
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.graph.edges().position(|(e, _)| e == key)
    }

    pub fn copies_containing_v2(&self, v2_id: usize) -> Vec<usize> {
        (0..self.copies.len())
            .filter(|&c| self.copy_v2[c].contains(&v2_id))
            .collect()
    }

    pub fn copies_containing_v1(&self, v1_id: usize) -> Vec<usize> {
        (0..self.copies.len())
            .filter(|&c| self.copy_v1[c].contains(&v1_id))
            .collect()
    }

    /// Generator along which two copies are glued, if they share a side
    /// (equivalently a type-1 vertex).
    pub fn shared_side(&self, c1: usize, c2: usize) -> Option<usize> {
        (0..self.graph.rank()).find(|&a| self.copy_v1[c1][a] == self.copy_v1[c2][a])
    }
}

/// `K_Γ` itself: the radius-0 ball with identity coset representatives.
pub fn fundamental_domain(graph: &DefiningGraph, oracle: &Oracle) -> Result<ComplexBall, DeligneError> {
    build_ball(
        graph,
        oracle,
        BallConfig {
            radius: 0,
            length_bound: 1,
        },
    )
}

/// Expands (rebuilds) a ball to the given bounds; the result equals the
/// serial expansion regardless of the ball passed in, which only fixes the
/// graph.
pub fn expand_ball(
    ball: &ComplexBall,
    oracle: &Oracle,
    radius: u32,
    length_bound: u32,
) -> Result<ComplexBall, DeligneError> {
    if radius < 1 || length_bound < 1 {
        return Err(DeligneError::BadBounds(1));
    }
    build_ball(
        &ball.graph().clone(),
        oracle,
        BallConfig {
            radius,
            length_bound,
        },
    )
}

pub fn build_ball(
    graph: &DefiningGraph,
    oracle: &Oracle,
    config: BallConfig,
) -> Result<ComplexBall, DeligneError> {
    graph.require_large_type()?;
    if graph.rank() < 3 {
        return Err(DeligneError::Graph(GraphError::RankTooSmall(graph.rank())));
    }
    if !graph.is_connected() {
        return Err(DeligneError::Graph(GraphError::Disconnected));
    }
    assert_eq!(graph, oracle.graph(), "oracle must match the ball's graph");

    let edge_list: Vec<((usize, usize), u32)> = graph.edges().collect();
    let mut ball = ComplexBall {
        graph: graph.clone(),
        config,
        copies: Vec::new(),
        copy_index: HashMap::new(),
        v1: Vec::new(),
        v2: Vec::new(),
        copy_v1: Vec::new(),
        copy_v2: Vec::new(),
        triangles: Vec::new(),
    };

    // Base copy.
    attach_copy(&mut ball, oracle, Word::empty(), 0, None)?;

    // Gallery BFS. Steps are ordered deterministically: generators in input
    // order, exponents +1, -1, +2, -2, …
    let mut frontier: VecDeque<usize> = VecDeque::new();
    frontier.push_back(0);
    while let Some(copy) = frontier.pop_front() {
        let depth = ball.copies[copy].depth;
        if depth >= config.radius {
            continue;
        }
        for a in 0..graph.rank() {
            for mag in 1..=config.length_bound as i64 {
                for k in [mag, -mag] {
                    let target = ball.copies[copy].element.concat(&Word::power(a, k));
                    let key = oracle.shortlex_geodesic(&target)?;
                    if ball.copy_index.contains_key(&key) {
                        continue;
                    }
                    let new_id = attach_copy(&mut ball, oracle, key, depth + 1, Some((copy, a)))?;
                    frontier.push_back(new_id);
                }
            }
        }
    }

    // Triangles: one per copy per ordered spherical pair.
    for c in 0..ball.copies.len() {
        for (e_idx, &((i, j), _m)) in edge_list.iter().enumerate() {
            let v2 = ball.copy_v2[c][e_idx];
            for (x, _y) in [(i, j), (j, i)] {
                ball.triangles.push(Triangle {
                    copy: c,
                    pair: if x == i { (i, j) } else { (j, i) },
                    v1: ball.copy_v1[c][x],
                    v2,
                });
            }
        }
    }

    mark_interior(&mut ball, oracle)?;
    Ok(ball)
}

/// Attaches the copy with canonical element `key`, deduplicating its
/// vertices. When the copy arises as a gallery step `parent·a^k`, every
/// vertex whose tag contains `a` is inherited from the parent; remaining
/// cosets are matched against existing classes by exact membership tests.
fn attach_copy(
    ball: &mut ComplexBall,
    oracle: &Oracle,
    key: Word,
    depth: u32,
    via: Option<(usize, usize)>,
) -> Result<usize, DeligneError> {
    let graph = ball.graph.clone();
    let id = ball.copies.len();
    ball.copy_index.insert(key.clone(), id);
    ball.copies.push(CopyData {
        element: key.clone(),
        depth,
    });

    // Type-1 vertices.
    let mut v1_row = Vec::with_capacity(graph.rank());
    for a in 0..graph.rank() {
        if let Some((parent, step_gen)) = via {
            if step_gen == a {
                v1_row.push(ball.copy_v1[parent][a]);
                continue;
            }
        }
        let coset_key = oracle.cyclic_coset_key(&key, a)?;
        let existing = ball
            .v1
            .iter()
            .position(|v| v.gen == a && v.rep == coset_key);
        let v1_id = match existing {
            Some(found) => found,
            None => {
                ball.v1.push(V1Data {
                    gen: a,
                    rep: coset_key,
                    interior: false,
                });
                ball.v1.len() - 1
            }
        };
        v1_row.push(v1_id);
    }
    ball.copy_v1.push(v1_row);

    // Type-2 vertices.
    let edge_list: Vec<((usize, usize), u32)> = graph.edges().collect();
    let mut v2_row = Vec::with_capacity(edge_list.len());
    for &((i, j), _m) in &edge_list {
        if let Some((parent, step_gen)) = via {
            if step_gen == i || step_gen == j {
                let e_idx = v2_row.len();
                v2_row.push(ball.copy_v2[parent][e_idx]);
                continue;
            }
        }
        let sub = [i, j];
        let mut assigned = None;
        for (v2_id, v) in ball.v2.iter().enumerate() {
            if v.pair != (i, j) {
                continue;
            }
            let diff = v.rep.inverse().concat(&key);
            if oracle.in_standard_parabolic(&diff, &sub)? {
                assigned = Some(v2_id);
                break;
            }
        }
        let v2_id = match assigned {
            Some(found) => found,
            None => {
                ball.v2.push(V2Data {
                    pair: (i, j),
                    rep: key.clone(),
                    interior: false,
                });
                ball.v2.len() - 1
            }
        };
        v2_row.push(v2_id);
    }
    ball.copy_v2.push(v2_row);
    Ok(id)
}

/// Interior certification, relative to the declared truncation: a type-1
/// vertex is interior when some anchor copy has all translates by `a^k`,
/// `|k| ≤ length_bound`, present; a type-2 vertex likewise for the full
/// dihedral ball of radius `length_bound`. Type-0 stars live inside a single
/// copy and are always complete.
fn mark_interior(ball: &mut ComplexBall, oracle: &Oracle) -> Result<(), DeligneError> {
    let lb = ball.config.length_bound;
    let n_copies = ball.copies.len();

    let mut v1_anchor_sets: Vec<Vec<usize>> = vec![Vec::new(); ball.v1.len()];
    for c in 0..n_copies {
        for a in 0..ball.graph.rank() {
            v1_anchor_sets[ball.copy_v1[c][a]].push(c);
        }
    }
    for (v1_id, anchors) in v1_anchor_sets.iter().enumerate() {
        let gen = ball.v1[v1_id].gen;
        let mut interior = false;
        'anchors: for &c in anchors {
            for k in 1..=lb as i64 {
                for signed in [k, -k] {
                    let elt = ball.copies[c].element.concat(&Word::power(gen, signed));
                    let key = oracle.shortlex_geodesic(&elt)?;
                    if !ball.copy_index.contains_key(&key) {
                        continue 'anchors;
                    }
                }
            }
            interior = true;
            break;
        }
        ball.v1[v1_id].interior = interior;
    }

    let edge_list: Vec<((usize, usize), u32)> = ball.graph.edges().collect();
    let mut v2_anchor_sets: Vec<Vec<usize>> = vec![Vec::new(); ball.v2.len()];
    for c in 0..n_copies {
        for (e_idx, _) in edge_list.iter().enumerate() {
            v2_anchor_sets[ball.copy_v2[c][e_idx]].push(c);
        }
    }
    for (v2_id, anchors) in v2_anchor_sets.iter().enumerate() {
        let (i, j) = ball.v2[v2_id].pair;
        let m = ball.graph.coeff(i, j).expect("spherical pair");
        let local_ball = DihedralGroup::new(i, j, m)
            .expect("large-type coefficient")
            .ball(lb);
        let mut interior = false;
        'anchors2: for &c in anchors {
            for (_, u) in &local_ball {
                let elt = ball.copies[c].element.concat(u);
                let key = oracle.shortlex_geodesic(&elt)?;
                if !ball.copy_index.contains_key(&key) {
                    continue 'anchors2;
                }
            }
            interior = true;
            break;
        }
        ball.v2[v2_id].interior = interior;
    }
    Ok(())
}

impl ComplexBall {
    /// Re-verifies coset deduplication: representatives of distinct classes
    /// must not be related by the tag subgroup, and every copy must sit in
    /// the class of its assigned representative.
    pub fn verify_dedup(&self, oracle: &Oracle) -> Result<(), DeligneError> {
        // Distinctness per pair.
        for (idx_a, va) in self.v2.iter().enumerate() {
            for (idx_b, vb) in self.v2.iter().enumerate().skip(idx_a + 1) {
                if va.pair != vb.pair {
                    continue;
                }
                let sub = [va.pair.0, va.pair.1];
                let diff = va.rep.inverse().concat(&vb.rep);
                if oracle.in_standard_parabolic(&diff, &sub)? {
                    return Err(DeligneError::DedupInconsistency(idx_a, idx_b));
                }
            }
        }
        // Membership of each copy in its assigned classes.
        for c in 0..self.copies.len() {
            for (e_idx, ((i, j), _)) in self.graph.edges().enumerate() {
                let v2 = &self.v2[self.copy_v2[c][e_idx]];
                let diff = v2.rep.inverse().concat(&self.copies[c].element);
                if !oracle.in_standard_parabolic(&diff, &[i, j])? {
                    return Err(DeligneError::DedupInconsistency(c, self.copy_v2[c][e_idx]));
                }
            }
            for (a, &v1_id) in self.copy_v1[c].iter().enumerate() {
                let v1 = &self.v1[v1_id];
                assert_eq!(v1.gen, a);
                let diff = v1.rep.inverse().concat(&self.copies[c].element);
                if !oracle.in_standard_parabolic(&diff, &[a])? {
                    return Err(DeligneError::DedupInconsistency(c, v1_id));
                }
            }
        }
        Ok(())
    }
}

/// The essential 1-skeleton: the bipartite graph of type-1/type-2 vertices
/// and the edges between them; it equals the union of the `g·Γ_bar`
/// translates present in the ball.
#[derive(Debug, Clone)]
pub struct EssentialSkeleton {
    pub v1_count: usize,
    pub v2_count: usize,
    /// `(v1 id, v2 id)`, sorted and deduplicated.
    pub edges: Vec<(usize, usize)>,
}

/// Node of the essential skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkelNode {
    V1(usize),
    V2(usize),
}

impl ComplexBall {
    pub fn essential_skeleton(&self) -> EssentialSkeleton {
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for c in 0..self.copies.len() {
            for (e_idx, ((i, j), _)) in self.graph.edges().enumerate() {
                let v2 = self.copy_v2[c][e_idx];
                edges.insert((self.copy_v1[c][i], v2));
                edges.insert((self.copy_v1[c][j], v2));
            }
        }
        EssentialSkeleton {
            v1_count: self.v1.len(),
            v2_count: self.v2.len(),
            edges: edges.into_iter().collect(),
        }
    }
}

impl EssentialSkeleton {
    pub fn neighbors_of_v1(&self, v1: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(a, _)| a == v1)
            .map(|&(_, b)| b)
            .collect()
    }

    pub fn neighbors_of_v2(&self, v2: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, b)| b == v2)
            .map(|&(a, _)| a)
            .collect()
    }

    /// Combinatorial distance between two nodes, `None` if disconnected
    /// within the ball.
    pub fn distance(&self, from: SkelNode, to: SkelNode) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut adj: HashMap<SkelNode, Vec<SkelNode>> = HashMap::new();
        for &(a, b) in &self.edges {
            adj.entry(SkelNode::V1(a)).or_default().push(SkelNode::V2(b));
            adj.entry(SkelNode::V2(b)).or_default().push(SkelNode::V1(a));
        }
        let mut dist: HashMap<SkelNode, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(from, 0);
        queue.push_back(from);
        while let Some(node) = queue.pop_front() {
            let d = dist[&node];
            for &next in adj.get(&node).into_iter().flatten() {
                if !dist.contains_key(&next) {
                    if next == to {
                        return Some(d + 1);
                    }
                    dist.insert(next, d + 1);
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Per-face and per-vertex exact curvature data for a disk region, in
/// rational multiples of π.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    /// `(copy id, curvature)` per polygon.
    pub faces: Vec<(usize, RationalPi)>,
    /// `(v2 id, interior?, curvature)` per type-2 vertex of the region.
    pub vertices: Vec<(usize, bool, RationalPi)>,
    pub total: RationalPi,
}

/// A rational multiple of π, serialised as `numerator/denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalPi {
    pub num: i64,
    pub den: i64,
}

impl From<Rational64> for RationalPi {
    fn from(r: Rational64) -> Self {
        RationalPi {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl RationalPi {
    pub fn as_rational(&self) -> Rational64 {
        Rational64::new(self.num, self.den)
    }
}

/// Combinatorial Gauss-Bonnet audit over a region given as a set of copy
/// ids of a rank-3 ball. Each copy is one polygon (its coarse structure
/// forgets the type-0 data); corners are the type-2 vertices, the corner
/// angle being π/m. Checks the region is a certified disk, then returns the
/// exact curvature bookkeeping; the grand total must equal 2π.
pub fn gauss_bonnet_audit(
    ball: &ComplexBall,
    region: &[usize],
) -> Result<CurvatureReport, DeligneError> {
    if region.is_empty() {
        return Err(DeligneError::EmptyRegion);
    }
    if ball.graph.rank() != 3 {
        return Err(DeligneError::RegionRankUnsupported(ball.graph.rank()));
    }
    let mut copies: Vec<usize> = region.to_vec();
    copies.sort_unstable();
    copies.dedup();
    for &c in &copies {
        if c >= ball.copies.len() {
            return Err(DeligneError::BadRegionCopy(c));
        }
    }
    // Interior certification: every corner the curvature formula consumes
    // must carry the interior mark (type-1 side midpoints are flat and are
    // not consulted).
    for &c in &copies {
        let certified = ball.copy_v2[c].iter().all(|&v| ball.v2[v].interior);
        if !certified {
            return Err(DeligneError::RegionNotCertified(c));
        }
    }

    let copy_set: HashSet<usize> = copies.iter().copied().collect();
    // Sides are identified with type-1 vertices; manifold condition: a side
    // is shared by at most two region polygons.
    let mut side_count: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in &copies {
        for a in 0..3 {
            side_count.entry(ball.copy_v1[c][a]).or_default().push(c);
        }
    }
    if let Some((side, owners)) = side_count.iter().find(|(_, owners)| owners.len() > 2) {
        return Err(DeligneError::NotADisk(format!(
            "side at type-1 vertex {side} belongs to {} polygons",
            owners.len()
        )));
    }

    // Connectivity over shared sides.
    {
        let mut seen: HashSet<usize> = HashSet::new();
        let mut stack = vec![copies[0]];
        seen.insert(copies[0]);
        while let Some(c) = stack.pop() {
            for owners in side_count.values() {
                if owners.contains(&c) {
                    for &other in owners {
                        if copy_set.contains(&other) && !seen.contains(&other) {
                            seen.insert(other);
                            stack.push(other);
                        }
                    }
                }
            }
        }
        if seen.len() != copies.len() {
            return Err(DeligneError::NotADisk("region is disconnected".into()));
        }
    }

    // Corner incidences per type-2 vertex.
    let mut corner_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in &copies {
        for e_idx in 0..3 {
            corner_map.entry(ball.copy_v2[c][e_idx]).or_default().push(c);
        }
    }

    // Euler characteristic of the coarse complex: V - E + F = 1 for a disk.
    let v = corner_map.len() as i64;
    let e = side_count.len() as i64;
    let f = copies.len() as i64;
    if v - e + f != 1 {
        return Err(DeligneError::NotADisk(format!(
            "euler characteristic V-E+F = {v}-{e}+{f} = {}",
            v - e + f
        )));
    }

    // Link condition and interior/boundary classification per vertex: the
    // polygons around a vertex, glued along its two incident sides per
    // polygon, must form one path (boundary) or one cycle (interior).
    let mut vertex_class: BTreeMap<usize, bool> = BTreeMap::new();
    for (&v2_id, polys) in &corner_map {
        let mut degree_in_link: HashMap<usize, usize> = HashMap::new();
        let mut link_edges = 0usize;
        for (idx_a, &ca) in polys.iter().enumerate() {
            for &cb in polys.iter().skip(idx_a + 1) {
                if let Some(gen) = ball.shared_side(ca, cb) {
                    // The shared side must be incident to this vertex.
                    let (i, j) = ball.v2[v2_id].pair;
                    if gen == i || gen == j {
                        *degree_in_link.entry(ca).or_default() += 1;
                        *degree_in_link.entry(cb).or_default() += 1;
                        link_edges += 1;
                    }
                }
            }
        }
        if degree_in_link.values().any(|&d| d > 2) {
            return Err(DeligneError::NotADisk(format!(
                "branching link at type-2 vertex {v2_id}"
            )));
        }
        let interior = link_edges == polys.len() && polys.len() >= 2;
        if !interior && link_edges + 1 != polys.len() {
            return Err(DeligneError::NotADisk(format!(
                "disconnected link at type-2 vertex {v2_id}"
            )));
        }
        vertex_class.insert(v2_id, interior);
    }

    // Exact curvature bookkeeping in units of π.
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    let mut faces = Vec::new();
    let mut total = Rational64::from_integer(0);
    for &c in &copies {
        let mut curv = two;
        for e_idx in 0..3 {
            let ((i, j), m) = ball.graph.edges().nth(e_idx).expect("rank-3 edge");
            let _ = (i, j);
            let angle = Rational64::new(1, m as i64);
            curv -= one - angle;
        }
        total += curv;
        faces.push((c, RationalPi::from(curv)));
    }
    let mut vertices = Vec::new();
    for (&v2_id, polys) in &corner_map {
        let (i, j) = ball.v2[v2_id].pair;
        let m = ball.graph.coeff(i, j).expect("spherical pair") as i64;
        let angle_sum = Rational64::new(polys.len() as i64, m);
        let interior = vertex_class[&v2_id];
        let curv = if interior { two - angle_sum } else { one - angle_sum };
        total += curv;
        vertices.push((v2_id, interior, RationalPi::from(curv)));
    }

    Ok(CurvatureReport {
        faces,
        vertices,
        total: RationalPi::from(total),
    })
}

/// Serialisable ball snapshot with deterministic ordering. The defining
/// graph and build configuration are embedded so the ball can be rebuilt
/// deterministically from its own export.
#[derive(Serialize, serde::Deserialize)]
pub struct BallHeader {
    pub config: BallConfig,
    pub graph_vertices: Vec<String>,
    pub graph_edges: Vec<(String, String, u32)>,
}

#[derive(Serialize)]
pub struct BallExport {
    #[serde(flatten)]
    pub header: BallHeader,
    pub copies: Vec<CopyExport>,
    pub vertices: Vec<VertexExport>,
    pub edges: Vec<EdgeExport>,
    pub triangle_count: usize,
}

#[derive(Serialize)]
pub struct CopyExport {
    pub id: usize,
    pub element: String,
    pub depth: u32,
}

#[derive(Serialize)]
pub struct VertexExport {
    pub rep: String,
    pub tag: Vec<String>,
    #[serde(rename = "type")]
    pub vertex_type: u8,
    pub interior: bool,
}

#[derive(Serialize)]
pub struct EdgeExport {
    pub v1_rep: String,
    pub v2_rep: String,
    pub v1_gen: String,
    pub v2_pair: Vec<String>,
}

impl ComplexBall {
    pub fn export(&self) -> BallExport {
        let name = |i: usize| self.graph.name(i).to_string();
        let mut vertices = Vec::new();
        for c in &self.copies {
            vertices.push(VertexExport {
                rep: c.element.display(&self.graph),
                tag: Vec::new(),
                vertex_type: 0,
                interior: true,
            });
        }
        for v in &self.v1 {
            vertices.push(VertexExport {
                rep: v.rep.display(&self.graph),
                tag: vec![name(v.gen)],
                vertex_type: 1,
                interior: v.interior,
            });
        }
        for v in &self.v2 {
            vertices.push(VertexExport {
                rep: v.rep.display(&self.graph),
                tag: vec![name(v.pair.0), name(v.pair.1)],
                vertex_type: 2,
                interior: v.interior,
            });
        }
        vertices.sort_by(|a, b| {
            a.vertex_type
                .cmp(&b.vertex_type)
                .then_with(|| a.rep.cmp(&b.rep))
                .then_with(|| a.tag.cmp(&b.tag))
        });
        let skel = self.essential_skeleton();
        let mut edges: Vec<EdgeExport> = skel
            .edges
            .iter()
            .map(|&(v1, v2)| EdgeExport {
                v1_rep: self.v1[v1].rep.display(&self.graph),
                v2_rep: self.v2[v2].rep.display(&self.graph),
                v1_gen: name(self.v1[v1].gen),
                v2_pair: vec![name(self.v2[v2].pair.0), name(self.v2[v2].pair.1)],
            })
            .collect();
        edges.sort_by(|a, b| {
            (&a.v1_rep, &a.v1_gen, &b.v2_rep)
                .cmp(&(&b.v1_rep, &b.v1_gen, &a.v2_rep))
                .then_with(|| a.v2_rep.cmp(&b.v2_rep))
        });
        BallExport {
            header: BallHeader {
                config: self.config,
                graph_vertices: self.graph.vertex_names().to_vec(),
                graph_edges: self
                    .graph
                    .edges()
                    .map(|((i, j), m)| (name(i), name(j), m))
                    .collect(),
            },
            copies: self
                .copies
                .iter()
                .enumerate()
                .map(|(id, c)| CopyExport {
                    id,
                    element: c.element.display(&self.graph),
                    depth: c.depth,
                })
                .collect(),
            vertices,
            edges,
            triangle_count: self.triangles.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DefiningGraph;

    fn setup(labels: (u32, u32, u32), radius: u32, lb: u32) -> (Oracle, ComplexBall) {
        let graph = DefiningGraph::triangle(labels);
        let oracle = Oracle::new(graph.clone()).unwrap();
        let ball = build_ball(&graph, &oracle, BallConfig { radius, length_bound: lb }).unwrap();
        (oracle, ball)
    }

    #[test]
    fn moussong_angles_sum_to_pi() {
        for m in [3u32, 4, 5, 6, 17] {
            assert_eq!(
                MoussongAngles::for_coefficient(m).sum(),
                Rational64::from_integer(1)
            );
        }
        let a = MoussongAngles::for_coefficient(3);
        assert_eq!(a.at_v2, Rational64::new(1, 6));
        assert_eq!(a.at_v1, Rational64::new(1, 2));
        assert_eq!(a.at_v0, Rational64::new(1, 3));
    }

    #[test]
    fn moussong_lengths_by_law_of_sines() {
        let l = moussong_edge_lengths(3);
        assert!((l.v1_v2 - 3f64.sqrt()).abs() < 1e-12);
        assert!((l.v0_v2 - 2.0).abs() < 1e-12);
        // Large m: the angle at the type-2 vertex goes to zero, the
        // opposite side length blows up.
        let big = moussong_edge_lengths(500);
        assert!(big.angles.at_v2 < Rational64::new(1, 900));
        assert!(big.v0_v2 > 100.0);
    }

    #[test]
    fn fundamental_domain_counts() {
        let graph = DefiningGraph::triangle((3, 4, 5));
        let oracle = Oracle::new(graph.clone()).unwrap();
        let k = fundamental_domain(&graph, &oracle).unwrap();
        assert_eq!(k.copies().len(), 1);
        assert_eq!(k.v1_vertices().len(), 3);
        assert_eq!(k.v2_vertices().len(), 3);
        assert_eq!(k.triangles().len(), 6);

        // Path a-b-c: no v_ac.
        let path = DefiningGraph::new(vec!["a", "b", "c"], vec![("a", "b", 3), ("b", "c", 3)])
            .unwrap();
        let oracle = Oracle::new(path.clone()).unwrap();
        let k = fundamental_domain(&path, &oracle).unwrap();
        assert_eq!(k.v2_vertices().len(), 2);
        assert_eq!(k.triangles().len(), 4);
    }

    #[test]
    fn rank_too_small_rejected() {
        let edge = DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 3)]).unwrap();
        let oracle = Oracle::new(edge.clone()).unwrap();
        assert!(fundamental_domain(&edge, &oracle).is_err());
    }

    #[test]
    fn disconnected_rejected() {
        let g = DefiningGraph::new(
            vec!["a", "b", "c", "d"],
            vec![("a", "b", 3), ("c", "d", 3)],
        )
        .unwrap();
        let oracle = Oracle::new(g.clone()).unwrap();
        assert!(matches!(
            fundamental_domain(&g, &oracle),
            Err(DeligneError::Graph(GraphError::Disconnected))
        ));
    }

    #[test]
    fn local_group_ball_glues_around_v2() {
        // At radius = length_bound = 2, every element of the dihedral ball
        // of radius 2 appears as a copy sharing the base v_ab.
        let (oracle, ball) = setup((3, 3, 3), 2, 2);
        let e_ab = ball.edge_index(0, 1).unwrap();
        let base_v2 = ball.v2_id(0, e_ab);
        let dg = DihedralGroup::new(0, 1, 3).unwrap();
        for (_, u) in dg.ball(2) {
            let id = ball.copy_id_of(&u, &oracle).unwrap();
            let id = id.expect("dihedral ball element missing from gallery ball");
            assert_eq!(ball.v2_id(id, e_ab), base_v2, "copy {:?}", u);
        }
    }

    #[test]
    fn six_triangles_around_every_type0_vertex() {
        let (_, ball) = setup((3, 3, 3), 2, 1);
        for c in 0..ball.copies().len() {
            let count = ball.triangles().iter().filter(|t| t.copy == c).count();
            assert_eq!(count, 6);
        }
    }

    #[test]
    fn essential_star_of_v1_is_npod() {
        let (_, ball) = setup((3, 4, 5), 2, 2);
        let skel = ball.essential_skeleton();
        for (v1_id, v1) in ball.v1_vertices().iter().enumerate() {
            let star = skel.neighbors_of_v1(v1_id);
            let mut distinct = star.clone();
            distinct.sort_unstable();
            distinct.dedup();
            assert_eq!(distinct.len(), ball.graph().degree(v1.gen));
        }
    }

    #[test]
    fn skeleton_is_bipartite_by_construction() {
        let (_, ball) = setup((3, 3, 4), 2, 2);
        let skel = ball.essential_skeleton();
        for &(v1, v2) in &skel.edges {
            assert!(v1 < skel.v1_count);
            assert!(v2 < skel.v2_count);
        }
    }

    #[test]
    fn dedup_verification_passes() {
        let (oracle, ball) = setup((3, 3, 3), 2, 2);
        ball.verify_dedup(&oracle).unwrap();
        let (oracle, ball) = setup((3, 4, 5), 2, 2);
        ball.verify_dedup(&oracle).unwrap();
    }

    #[test]
    fn hexagon_region_is_flat_disk() {
        // Six principal triangles around the base v_ab in the (3,3,3)
        // complex: copies 1, a, ab, aba, ba, b.
        let (oracle, ball) = setup((3, 3, 3), 3, 1);
        let graph = ball.graph().clone();
        let ids: Vec<usize> = ["", "a", "a b", "a b a", "b a", "b"]
            .iter()
            .map(|text| {
                let w = if text.is_empty() {
                    Word::empty()
                } else {
                    Word::parse(&graph, text).unwrap()
                };
                ball.copy_id_of(&w, &oracle).unwrap().expect("copy present")
            })
            .collect();
        let report = gauss_bonnet_audit(&ball, &ids).unwrap();
        assert_eq!(report.total.as_rational(), Rational64::from_integer(2));
        // All six faces are flat.
        for (_, curv) in &report.faces {
            assert_eq!(curv.as_rational(), Rational64::from_integer(0));
        }
        // Exactly one interior vertex (the centre), with zero curvature.
        let interior: Vec<_> = report.vertices.iter().filter(|(_, int, _)| *int).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].2.as_rational(), Rational64::from_integer(0));
    }

    #[test]
    fn single_copy_audit_total_two_pi() {
        let (_, ball) = setup((3, 4, 5), 2, 2);
        let report = gauss_bonnet_audit(&ball, &[0]).unwrap();
        assert_eq!(report.total.as_rational(), Rational64::from_integer(2));
        // curv(f) = 2π - Σ(π - π/m) = -13π/60 for labels (3,4,5).
        assert_eq!(report.faces[0].1.as_rational(), Rational64::new(-13, 60));
    }

    #[test]
    fn single_copy_all_three_corners_flat() {
        let (_, ball) = setup((3, 3, 3), 1, 1);
        let report = gauss_bonnet_audit(&ball, &[0]).unwrap();
        assert_eq!(report.faces[0].1.as_rational(), Rational64::from_integer(0));
    }

    #[test]
    fn non_disk_region_rejected() {
        let (oracle, ball) = setup((3, 3, 3), 3, 1);
        // Base copy plus a translate sharing only a vertex: not a disk.
        let far = Word::parse(ball.graph(), "a b a").unwrap();
        let far_id = ball.copy_id_of(&far, &oracle).unwrap().unwrap();
        assert!(matches!(
            gauss_bonnet_audit(&ball, &[0, far_id]),
            Err(DeligneError::NotADisk(_))
        ));
    }

    #[test]
    fn uncertified_region_rejected() {
        // At radius 1 the outer corners of a neighbouring copy are not
        // saturated, so regions touching them are refused.
        let (oracle, ball) = setup((3, 3, 3), 1, 1);
        let a = Word::parse(ball.graph(), "a").unwrap();
        let a_id = ball.copy_id_of(&a, &oracle).unwrap().unwrap();
        assert!(matches!(
            gauss_bonnet_audit(&ball, &[0, a_id]),
            Err(DeligneError::RegionNotCertified(_))
        ));
    }

    #[test]
    fn export_is_deterministic() {
        let (_, b1) = setup((3, 3, 4), 2, 1);
        let (_, b2) = setup((3, 3, 4), 2, 1);
        let j1 = serde_json::to_string(&b1.export()).unwrap();
        let j2 = serde_json::to_string(&b2.export()).unwrap();
        assert_eq!(j1, j2);
    }
}
