//! Algebraic reconstruction of the Deligne complex from subgroup data.
//!
//! Type-2 handles are classical maximal dihedral subgroups (cosets of
//! spherical standard parabolics). Pairs of handles carry the adjacency
//! property when a third handle meets both nontrivially while the triple
//! intersection is trivial; maximal pairwise-adjacent families with a common
//! nontrivial intersection are the type-1 nodes; coning off every subgraph
//! isomorphic to the barycentric subdivision of the defining graph yields
//! the full complex. Everything here is computed from membership tests
//! alone, then compared against the geometric ball it is meant to
//! reconstruct.
//!
//! All sweeps are bounded by the ball; each node records how many handles
//! its maximality was checked against.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::deligne::ComplexBall;
use crate::graph::{BarGraph, BarNode, DefiningGraph, GraphError, GraphIso};
use crate::oracle::{Oracle, OracleError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("handles {0} and {1} must be distinct")]
    HandlesNotDistinct(usize, usize),
    #[error("handles {0} and {1} contain two distinct type-1 parabolics: dedup bug")]
    NonUniqueIntersection(usize, usize),
    #[error("image of {0} falls outside the target ball (truncation)")]
    Truncated(String),
}

/// A classical maximal dihedral subgroup visible in the ball: the local
/// group of a type-2 vertex.
#[derive(Debug, Clone)]
pub struct Type2Handle {
    pub v2_id: usize,
    pub pair: (usize, usize),
    /// Coset representative: the handle subgroup is `rep·A_pair·rep⁻¹`.
    pub rep: Word,
    pub certified: bool,
}

/// A type-1 parabolic subgroup witnessed in the ball, `⟨word⟩` with
/// `word = f·gen·f⁻¹` in canonical form.
#[derive(Debug, Clone)]
pub struct ParabolicWitness {
    pub gen: usize,
    pub word: Word,
}

/// Handles, parabolic witnesses, and the exact membership matrix between
/// them. All adjacency decisions reduce to lookups in the matrix.
pub struct SubgroupData {
    pub handles: Vec<Type2Handle>,
    pub parabolics: Vec<ParabolicWitness>,
    /// `membership[p][h]` = parabolic `p` is contained in handle `h`.
    pub membership: Vec<Vec<bool>>,
}

pub fn subgroup_data(ball: &ComplexBall, oracle: &Oracle) -> Result<SubgroupData, ReconstructError> {
    ball.graph().require_large_type()?;
    ball.graph().require_free_of_infinity()?;
    let handles: Vec<Type2Handle> = ball
        .v2_vertices()
        .iter()
        .enumerate()
        .map(|(v2_id, v)| Type2Handle {
            v2_id,
            pair: v.pair,
            rep: v.rep.clone(),
            certified: v.interior,
        })
        .collect();

    // Distinct type-1 parabolics among the ball's type-1 vertices: the
    // canonical form of f·gen·f⁻¹ is a complete invariant (both candidates
    // have height 1).
    let mut parabolics: Vec<ParabolicWitness> = Vec::new();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    for v1 in ball.v1_vertices() {
        let word = oracle.shortlex_geodesic(&Word::gen(v1.gen).conjugate_by(&v1.rep))?;
        if seen.insert(word.clone()) {
            parabolics.push(ParabolicWitness { gen: v1.gen, word });
        }
    }

    let mut membership = vec![vec![false; handles.len()]; parabolics.len()];
    for (p_idx, p) in parabolics.iter().enumerate() {
        for (h_idx, h) in handles.iter().enumerate() {
            let conj = p.word.conjugate_by(&h.rep.inverse());
            membership[p_idx][h_idx] =
                oracle.in_standard_parabolic(&conj, &[h.pair.0, h.pair.1])?;
        }
    }
    Ok(SubgroupData {
        handles,
        parabolics,
        membership,
    })
}

/// Outcome of one adjacency-property decision, with the sweep size the
/// verdict is bounded by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyVerdict {
    pub holds: bool,
    /// `(third handle, parabolic of the pair intersection)` when it holds.
    pub witness: Option<(usize, usize)>,
    pub swept: usize,
}

impl SubgroupData {
    /// The unique type-1 parabolic contained in both handles, if any.
    pub fn pair_intersection(&self, i: usize, j: usize) -> Result<Option<usize>, ReconstructError> {
        if i == j {
            return Err(ReconstructError::HandlesNotDistinct(i, j));
        }
        let mut found = None;
        for p in 0..self.parabolics.len() {
            if self.membership[p][i] && self.membership[p][j] {
                if found.is_some() {
                    return Err(ReconstructError::NonUniqueIntersection(i, j));
                }
                found = Some(p);
            }
        }
        Ok(found)
    }

    /// The adjacency property for a pair of distinct handles: some third
    /// ball-represented handle meets both nontrivially while the triple
    /// intersection is trivial.
    pub fn adjacency_property(&self, i: usize, j: usize) -> Result<AdjacencyVerdict, ReconstructError> {
        if i == j {
            return Err(ReconstructError::HandlesNotDistinct(i, j));
        }
        let swept = self.handles.len();
        let Some(p_ij) = self.pair_intersection(i, j)? else {
            return Ok(AdjacencyVerdict {
                holds: false,
                witness: None,
                swept,
            });
        };
        for h3 in 0..self.handles.len() {
            if h3 == i || h3 == j {
                continue;
            }
            let meets_i = self.pair_intersection(i, h3)?.is_some();
            let meets_j = self.pair_intersection(j, h3)?.is_some();
            // Triple intersection trivial: the pair's parabolic escapes h3
            // (powers cannot sneak in: parabolic closures of powers agree).
            if meets_i && meets_j && !self.membership[p_ij][h3] {
                return Ok(AdjacencyVerdict {
                    holds: true,
                    witness: Some((h3, p_ij)),
                    swept,
                });
            }
        }
        Ok(AdjacencyVerdict {
            holds: false,
            witness: None,
            swept,
        })
    }
}

/// A type-1 node: a maximal family of pairwise-adjacent handles with common
/// nontrivial intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type1Node {
    pub handles: BTreeSet<usize>,
    pub common_parabolic: usize,
    /// Number of handles the maximality sweep was exhausted against.
    pub sweep_size: usize,
}

/// The reconstructed essential 1-skeleton: bipartite graph on handles and
/// nodes, an edge joining a handle to every node containing it.
pub struct D1Graph {
    pub data: SubgroupData,
    pub nodes: Vec<Type1Node>,
    pub edges: Vec<(usize, usize)>,
}

pub fn build_d1(ball: &ComplexBall, oracle: &Oracle) -> Result<D1Graph, ReconstructError> {
    let data = subgroup_data(ball, oracle)?;
    let n = data.handles.len();
    // Adjacency relation, computed once.
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let verdict = data.adjacency_property(i, j)?;
            adjacent[i][j] = verdict.holds;
            adjacent[j][i] = verdict.holds;
        }
    }
    // Candidate families: per parabolic, the handles containing it; within
    // that family list every maximal pairwise-adjacent subset.
    let mut raw_nodes: Vec<Type1Node> = Vec::new();
    for p in 0..data.parabolics.len() {
        let family: Vec<usize> = (0..n).filter(|&h| data.membership[p][h]).collect();
        if family.is_empty() {
            continue;
        }
        for clique in maximal_cliques(&family, &adjacent) {
            let node = Type1Node {
                handles: clique.into_iter().collect(),
                common_parabolic: p,
                sweep_size: n,
            };
            if !raw_nodes.iter().any(|existing| existing.handles == node.handles) {
                raw_nodes.push(node);
            }
        }
    }
    // Global maximality: drop families that another handle can extend while
    // keeping pairwise adjacency and a common parabolic.
    let mut nodes = Vec::new();
    'candidates: for node in raw_nodes {
        for h in 0..n {
            if node.handles.contains(&h) {
                continue;
            }
            let adj_all = node.handles.iter().all(|&m| adjacent[m][h]);
            if !adj_all {
                continue;
            }
            let common = (0..data.parabolics.len()).any(|q| {
                data.membership[q][h] && node.handles.iter().all(|&m| data.membership[q][m])
            });
            if common {
                continue 'candidates;
            }
        }
        nodes.push(node);
    }
    nodes.sort_by(|a, b| a.handles.cmp(&b.handles));
    let mut edges = Vec::new();
    for (node_idx, node) in nodes.iter().enumerate() {
        for &h in &node.handles {
            edges.push((h, node_idx));
        }
    }
    Ok(D1Graph { data, nodes, edges })
}

fn maximal_cliques(family: &[usize], adjacent: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = family.to_vec();
    let x = Vec::new();
    bron_kerbosch(&mut r, p, x, adjacent, &mut out);
    out
}

fn bron_kerbosch(
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    adjacent: &[Vec<bool>],
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
        }
        return;
    }
    let mut p_work = p;
    while let Some(v) = p_work.first().copied() {
        let p_next: Vec<usize> = p_work
            .iter()
            .copied()
            .filter(|&u| adjacent[v][u])
            .collect();
        let x_next: Vec<usize> = x.iter().copied().filter(|&u| adjacent[v][u]).collect();
        r.push(v);
        bron_kerbosch(r, p_next, x_next, adjacent, out);
        r.pop();
        p_work.retain(|&u| u != v);
        x.push(v);
    }
}

/// Report of the graph-isomorphism check between the reconstructed graph
/// and the geometric essential skeleton over the certified region.
#[derive(Debug, Clone)]
pub struct F1Report {
    pub certified_v1: usize,
    pub certified_v2: usize,
    pub matched_nodes: usize,
    pub matched_edges: usize,
    pub holds: bool,
}

/// Certified region: interior type-2 vertices, and interior type-1 vertices
/// whose whole skeleton star consists of interior type-2 vertices.
pub fn certified_region(ball: &ComplexBall) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let skel = ball.essential_skeleton();
    let v2_ok: BTreeSet<usize> = (0..ball.v2_vertices().len())
        .filter(|&v| ball.v2_vertices()[v].interior)
        .collect();
    let v1_ok: BTreeSet<usize> = (0..ball.v1_vertices().len())
        .filter(|&v| {
            ball.v1_vertices()[v].interior
                && skel.neighbors_of_v1(v).iter().all(|n| v2_ok.contains(n))
        })
        .collect();
    (v1_ok, v2_ok)
}

/// Verifies that the reconstructed graph restricted to the certified region
/// is isomorphic (naturally, handle ↦ its vertex, node ↦ the vertex its
/// handle star surrounds) to the essential skeleton there — type-preserving
/// and edge-preserving, with the correspondence bijective.
pub fn verify_f1(ball: &ComplexBall, d1: &D1Graph) -> Result<F1Report, ReconstructError> {
    let skel = ball.essential_skeleton();
    let (v1_ok, v2_ok) = certified_region(ball);
    let mut matched_nodes = 0usize;
    let mut matched_edges = 0usize;
    let mut holds = true;

    // Every certified type-1 vertex must correspond to exactly one node
    // whose handle set is its star.
    let mut node_of_v1: HashMap<usize, usize> = HashMap::new();
    for &x in &v1_ok {
        let star: BTreeSet<usize> = skel
            .neighbors_of_v1(x)
            .into_iter()
            .map(|v2| {
                d1.data
                    .handles
                    .iter()
                    .position(|h| h.v2_id == v2)
                    .expect("handle per ball vertex")
            })
            .collect();
        let matches: Vec<usize> = d1
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, node)| node.handles == star)
            .map(|(idx, _)| idx)
            .collect();
        if matches.len() == 1 {
            matched_nodes += 1;
            node_of_v1.insert(x, matches[0]);
        } else {
            holds = false;
        }
    }
    // Injectivity of the correspondence.
    {
        let mut images: Vec<usize> = node_of_v1.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != node_of_v1.len() {
            holds = false;
        }
    }
    // Edges match: (v1, v2) certified skeleton edges against reconstructed
    // (handle, node) incidences.
    for &(v1, v2) in &skel.edges {
        if !(v1_ok.contains(&v1) && v2_ok.contains(&v2)) {
            continue;
        }
        let Some(&node_idx) = node_of_v1.get(&v1) else {
            holds = false;
            continue;
        };
        let handle_idx = d1
            .data
            .handles
            .iter()
            .position(|h| h.v2_id == v2)
            .expect("handle per ball vertex");
        if d1.edges.contains(&(handle_idx, node_idx)) {
            matched_edges += 1;
        } else {
            holds = false;
        }
    }
    Ok(F1Report {
        certified_v1: v1_ok.len(),
        certified_v2: v2_ok.len(),
        matched_nodes,
        matched_edges,
        holds,
    })
}

/// A subgraph of the reconstructed graph isomorphic to the barycentric
/// subdivision of the defining graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicSubgraph {
    /// Handle index per type-2 pattern node (edge of Γ, in edge order).
    pub handles: Vec<usize>,
    /// Node index per type-1 pattern node (vertex of Γ, in vertex order).
    pub nodes: Vec<usize>,
    /// D1 edges realising the pattern edges.
    pub edges: Vec<(usize, usize)>,
}

/// All subgraphs of the reconstructed graph isomorphic to `Γ_bar`, by
/// backtracking anchored on a 6-cycle of the pattern. Results are sorted
/// and deduplicated by vertex image.
pub fn characteristic_subgraphs(d1: &D1Graph, graph: &DefiningGraph) -> Vec<CharacteristicSubgraph> {
    let bar = graph.barycentric_subdivision();
    let rank = graph.rank();
    let order = pattern_order(&bar, rank);
    let bar_adj = bar.adjacency();

    // Handle adjacency lookup.
    let mut node_handles: Vec<&BTreeSet<usize>> = Vec::new();
    for node in &d1.nodes {
        node_handles.push(&node.handles);
    }

    let mut assignment: Vec<Option<usize>> = vec![None; bar.node_count()];
    let mut used_handles: HashSet64 = HashSet64::default();
    let mut used_nodes: HashSet64 = HashSet64::default();
    let mut found: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();

    fn extend(
        pos: usize,
        order: &[usize],
        bar: &BarGraph,
        bar_adj: &[Vec<usize>],
        d1: &D1Graph,
        node_handles: &[&BTreeSet<usize>],
        assignment: &mut Vec<Option<usize>>,
        used_handles: &mut HashSet64,
        used_nodes: &mut HashSet64,
        found: &mut BTreeSet<(Vec<usize>, Vec<usize>)>,
    ) {
        if pos == order.len() {
            let rank = assignment.iter().filter(|a| a.is_some()).count();
            let _ = rank;
            let mut handles = Vec::new();
            let mut nodes = Vec::new();
            for (idx, node) in bar.nodes.iter().enumerate() {
                match node {
                    BarNode::Vertex(_) => nodes.push(assignment[idx].unwrap()),
                    BarNode::Edge(_, _) => handles.push(assignment[idx].unwrap()),
                }
            }
            found.insert((handles, nodes));
            return;
        }
        let pattern_idx = order[pos];
        let is_type1 = matches!(bar.nodes[pattern_idx], BarNode::Vertex(_));
        let candidates: Vec<usize> = if is_type1 {
            (0..d1.nodes.len()).collect()
        } else {
            (0..d1.data.handles.len()).collect()
        };
        'cands: for cand in candidates {
            if is_type1 {
                if used_nodes.contains(cand) {
                    continue;
                }
            } else if used_handles.contains(cand) {
                continue;
            }
            // Adjacency with already-assigned pattern neighbours.
            for &nb in &bar_adj[pattern_idx] {
                if let Some(assigned) = assignment[nb] {
                    let (h, nd) = if is_type1 {
                        (assigned, cand)
                    } else {
                        (cand, assigned)
                    };
                    if !node_handles[nd].contains(&h) {
                        continue 'cands;
                    }
                }
            }
            assignment[pattern_idx] = Some(cand);
            if is_type1 {
                used_nodes.insert(cand);
            } else {
                used_handles.insert(cand);
            }
            extend(
                pos + 1,
                order,
                bar,
                bar_adj,
                d1,
                node_handles,
                assignment,
                used_handles,
                used_nodes,
                found,
            );
            assignment[pattern_idx] = None;
            if is_type1 {
                used_nodes.remove(cand);
            } else {
                used_handles.remove(cand);
            }
        }
    }

    extend(
        0,
        &order,
        &bar,
        &bar_adj,
        d1,
        &node_handles,
        &mut assignment,
        &mut used_handles,
        &mut used_nodes,
        &mut found,
    );

    found
        .into_iter()
        .map(|(handles, nodes)| {
            let mut edges = Vec::new();
            for (idx, node) in bar.nodes.iter().enumerate() {
                if let BarNode::Edge(a, b) = node {
                    let h = handles[idx - rank];
                    for &v in &[*a, *b] {
                        edges.push((h, nodes[v]));
                    }
                }
            }
            edges.sort_unstable();
            CharacteristicSubgraph {
                handles,
                nodes,
                edges,
            }
        })
        .collect()
}

/// Pattern traversal order: a 6-cycle of `Γ_bar` first (the barycentric
/// subdivision of some 3-cycle of Γ), then the rest by BFS.
fn pattern_order(bar: &BarGraph, rank: usize) -> Vec<usize> {
    let adj = bar.adjacency();
    let mut order: Vec<usize> = Vec::new();
    // First 3-cycle of the defining graph: vertices 0,1,2 exist and are
    // mutually joined for complete graphs; fall back to plain BFS if not.
    let mut six_cycle = Vec::new();
    'outer: for i in 0..rank {
        for j in i + 1..rank {
            for k in j + 1..rank {
                let find_edge = |a: usize, b: usize| {
                    bar.nodes.iter().position(|n| match n {
                        BarNode::Edge(x, y) => {
                            (*x == a && *y == b) || (*x == b && *y == a)
                        }
                        _ => false,
                    })
                };
                if let (Some(eij), Some(eik), Some(ejk)) =
                    (find_edge(i, j), find_edge(i, k), find_edge(j, k))
                {
                    six_cycle = vec![i, eij, j, ejk, k, eik];
                    break 'outer;
                }
            }
        }
    }
    for idx in six_cycle {
        if !order.contains(&idx) {
            order.push(idx);
        }
    }
    // BFS over the rest.
    let mut queue: VecDequeU = order.clone().into();
    while let Some(v) = queue.pop_front() {
        for &nb in &adj[v] {
            if !order.contains(&nb) {
                order.push(nb);
                queue.push_back(nb);
            }
        }
    }
    for idx in 0..bar.node_count() {
        if !order.contains(&idx) {
            order.push(idx);
        }
    }
    order
}

type VecDequeU = std::collections::VecDeque<usize>;

/// Small integer set used by the backtracking search.
#[derive(Default)]
struct HashSet64(BTreeSet<usize>);

impl HashSet64 {
    fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }
    fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }
    fn remove(&mut self, v: usize) {
        self.0.remove(&v);
    }
}

/// The algebraic complex: the reconstructed graph plus one cone apex per
/// characteristic subgraph, each cone triangulated by one 2-simplex per
/// subgraph edge.
pub struct AlgebraicComplex {
    pub d1: D1Graph,
    pub subgraphs: Vec<CharacteristicSubgraph>,
    /// `(handle, node, apex)` triples.
    pub simplices: Vec<(usize, usize, usize)>,
}

pub fn build_algebraic_complex(
    d1: D1Graph,
    subgraphs: Vec<CharacteristicSubgraph>,
) -> AlgebraicComplex {
    let mut simplices = Vec::new();
    for (apex, sg) in subgraphs.iter().enumerate() {
        for &(h, nd) in &sg.edges {
            simplices.push((h, nd, apex));
        }
    }
    AlgebraicComplex {
        d1,
        subgraphs,
        simplices,
    }
}

/// Report of the simplex-level comparison between the algebraic complex and
/// the geometric ball over the certified region.
#[derive(Debug, Clone)]
pub struct FReport {
    pub certified_copies: usize,
    pub matched_subgraphs: usize,
    pub matched_simplices: usize,
    pub expected_simplices: usize,
    pub holds: bool,
}

/// Verifies the combinatorial isomorphism on the certified region: every
/// fully certified copy's boundary subgraph appears among the
/// characteristic subgraphs, and the cone simplices biject with the copy's
/// base triangles.
pub fn verify_f(
    ball: &ComplexBall,
    complex: &AlgebraicComplex,
) -> Result<FReport, ReconstructError> {
    let (v1_ok, v2_ok) = certified_region(ball);
    let skel = ball.essential_skeleton();
    let d1 = &complex.d1;
    // Correspondence v1 -> node (as in verify_f1).
    let mut node_of_v1: HashMap<usize, usize> = HashMap::new();
    for &x in &v1_ok {
        let star: BTreeSet<usize> = skel
            .neighbors_of_v1(x)
            .into_iter()
            .map(|v2| {
                d1.data
                    .handles
                    .iter()
                    .position(|h| h.v2_id == v2)
                    .expect("handle per vertex")
            })
            .collect();
        if let Some(node_idx) = d1.nodes.iter().position(|n| n.handles == star) {
            node_of_v1.insert(x, node_idx);
        }
    }
    let handle_of_v2 = |v2: usize| d1.data.handles.iter().position(|h| h.v2_id == v2);

    let mut certified_copies = 0usize;
    let mut matched_subgraphs = 0usize;
    let mut matched_simplices = 0usize;
    let mut expected_simplices = 0usize;
    let mut holds = true;
    let rank = ball.graph().rank();
    for c in 0..ball.copies().len() {
        let v1s: Vec<usize> = (0..rank).map(|a| ball.v1_id(c, a)).collect();
        let v2s: Vec<usize> = (0..ball.graph().edge_count())
            .map(|e| ball.v2_id(c, e))
            .collect();
        if !(v1s.iter().all(|v| v1_ok.contains(v)) && v2s.iter().all(|v| v2_ok.contains(v))) {
            continue;
        }
        certified_copies += 1;
        // The copy's boundary subgraph, in pattern order.
        let copy_nodes: Vec<usize> = match v1s.iter().map(|&x| node_of_v1.get(&x).copied()).collect::<Option<Vec<_>>>() {
            Some(ns) => ns,
            None => {
                holds = false;
                continue;
            }
        };
        let copy_handles: Vec<usize> = match v2s
            .iter()
            .map(|&v| handle_of_v2(v))
            .collect::<Option<Vec<_>>>()
        {
            Some(hs) => hs,
            None => {
                holds = false;
                continue;
            }
        };
        let apex = complex.subgraphs.iter().position(|sg| {
            sg.nodes == copy_nodes && sg.handles == copy_handles
        });
        let Some(apex) = apex else {
            holds = false;
            continue;
        };
        matched_subgraphs += 1;
        // Base triangles of the copy against cone simplices of the apex.
        for (e_idx, ((i, j), _)) in ball.graph().edges().enumerate() {
            for x in [i, j] {
                expected_simplices += 1;
                let simplex = (
                    copy_handles[e_idx],
                    copy_nodes[x],
                    apex,
                );
                if complex.simplices.contains(&simplex) {
                    matched_simplices += 1;
                } else {
                    holds = false;
                }
            }
        }
    }
    if matched_simplices != expected_simplices {
        holds = false;
    }
    Ok(FReport {
        certified_copies,
        matched_subgraphs,
        matched_simplices,
        expected_simplices,
        holds,
    })
}

/// A certified isomorphism candidate in standard form: graph isomorphism,
/// optional global inversion, then an inner twist by `conjugator` (a word
/// in the target group).
#[derive(Debug, Clone)]
pub struct InducedMapSpec {
    pub iso: GraphIso,
    pub inversion: bool,
    pub conjugator: Word,
}

impl InducedMapSpec {
    pub fn identity(rank: usize) -> Self {
        InducedMapSpec {
            iso: GraphIso::identity(rank),
            inversion: false,
            conjugator: Word::empty(),
        }
    }

    /// Image of a source word.
    pub fn apply(&self, w: &Word) -> Word {
        let mut mapped = Word(
            w.letters()
                .iter()
                .map(|l| crate::word::Letter {
                    gen: self.iso.apply(l.gen),
                    inv: l.inv != self.inversion,
                })
                .collect(),
        );
        mapped = mapped.conjugate_by(&self.conjugator);
        mapped
    }
}

/// Result of transporting the source complex into the target complex.
#[derive(Debug, Clone)]
pub struct InducedMapReport {
    pub mapped_handles: usize,
    pub truncated_handles: Vec<String>,
    pub mapped_nodes: usize,
    pub truncated_nodes: usize,
    pub mapped_apices: usize,
    pub truncated_apices: usize,
    pub edges_preserved: bool,
    pub simplices_preserved: bool,
}

/// Maps every handle `H ↦ φ(H)`, every node pointwise, and every apex via
/// its image subgraph, verifying simplicial compatibility on the overlap.
/// Ball-boundary truncations are reported, never silently dropped.
pub fn induced_map(
    spec: &InducedMapSpec,
    source_ball: &ComplexBall,
    source: &AlgebraicComplex,
    target_ball: &ComplexBall,
    target: &AlgebraicComplex,
    target_oracle: &Oracle,
) -> Result<InducedMapReport, ReconstructError> {
    let src = &source.d1.data;
    let tgt = &target.d1.data;
    let mut handle_image: Vec<Option<usize>> = Vec::with_capacity(src.handles.len());
    let mut truncated_handles = Vec::new();
    for h in &src.handles {
        let image_pair = {
            let (a, b) = h.pair;
            let (x, y) = (spec.iso.apply(a), spec.iso.apply(b));
            (x.min(y), x.max(y))
        };
        let image_rep = spec.apply(&h.rep);
        let mut found = None;
        for (t_idx, t) in tgt.handles.iter().enumerate() {
            if t.pair != image_pair {
                continue;
            }
            let diff = t.rep.inverse().concat(&image_rep);
            if target_oracle.in_standard_parabolic(&diff, &[image_pair.0, image_pair.1])? {
                found = Some(t_idx);
                break;
            }
        }
        if found.is_none() {
            truncated_handles.push(h.rep.display(source_ball.graph()));
        }
        handle_image.push(found);
    }
    let mapped_handles = handle_image.iter().filter(|x| x.is_some()).count();

    let mut node_image: Vec<Option<usize>> = Vec::new();
    let mut truncated_nodes = 0usize;
    for node in &source.d1.nodes {
        let images: Option<BTreeSet<usize>> = node
            .handles
            .iter()
            .map(|&h| handle_image[h])
            .collect();
        let found = images.and_then(|set| {
            target.d1.nodes.iter().position(|t| t.handles == set)
        });
        if found.is_none() {
            truncated_nodes += 1;
        }
        node_image.push(found);
    }
    let mapped_nodes = node_image.iter().filter(|x| x.is_some()).count();

    let mut apex_image: Vec<Option<usize>> = Vec::new();
    let mut truncated_apices = 0usize;
    for sg in &source.subgraphs {
        let hs: Option<Vec<usize>> = sg.handles.iter().map(|&h| handle_image[h]).collect();
        let ns: Option<Vec<usize>> = sg.nodes.iter().map(|&n| node_image[n]).collect();
        let found = match (hs, ns) {
            (Some(hs), Some(ns)) => {
                let hset: BTreeSet<usize> = hs.iter().copied().collect();
                let nset: BTreeSet<usize> = ns.iter().copied().collect();
                target.subgraphs.iter().position(|t| {
                    t.handles.iter().copied().collect::<BTreeSet<_>>() == hset
                        && t.nodes.iter().copied().collect::<BTreeSet<_>>() == nset
                })
            }
            _ => None,
        };
        if found.is_none() {
            truncated_apices += 1;
        }
        apex_image.push(found);
    }
    let mapped_apices = apex_image.iter().filter(|x| x.is_some()).count();

    let mut edges_preserved = true;
    for &(h, nd) in &source.d1.edges {
        if let (Some(h2), Some(n2)) = (handle_image[h], node_image[nd]) {
            if !target.d1.edges.contains(&(h2, n2)) {
                edges_preserved = false;
            }
        }
    }
    let mut simplices_preserved = true;
    for &(h, nd, ap) in &source.simplices {
        if let (Some(h2), Some(n2), Some(a2)) =
            (handle_image[h], node_image[nd], apex_image[ap])
        {
            if !target.simplices.contains(&(h2, n2, a2)) {
                simplices_preserved = false;
            }
        }
    }
    let _ = target_ball;
    Ok(InducedMapReport {
        mapped_handles,
        truncated_handles,
        mapped_nodes,
        truncated_nodes,
        mapped_apices,
        truncated_apices,
        edges_preserved,
        simplices_preserved,
    })
}
