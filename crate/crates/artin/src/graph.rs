//! Defining graphs `Γ`, their predicates, labelled-graph isomorphism and
//! automorphism groups, and the barycentric subdivision `Γ_bar`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex name `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("loop edge on `{0}`")]
    LoopEdge(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("coefficient {m} on edge {a}-{b} is below 2")]
    CoefficientTooSmall { a: String, b: String, m: u32 },
    #[error("graph is not of large type (edge {a}-{b} has coefficient {m})")]
    NotLargeType { a: String, b: String, m: u32 },
    #[error("graph is not free-of-infinity (pair {0}-{1} has no coefficient)")]
    NotFreeOfInfinity(String, String),
    #[error("operation requires rank >= 3, graph has rank {0}")]
    RankTooSmall(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed graph file: {0}")]
    Malformed(String),
}

/// A finite labelled simplicial graph: vertices are generator names, an edge
/// `{a,b}` carries an integer coefficient `m_ab >= 2`. A missing pair means
/// `m_ab = infinity`; no sentinel value is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    vertices: Vec<String>,
    /// Symmetric coefficient map, keyed by `(i, j)` with `i < j`.
    coeffs: BTreeMap<(usize, usize), u32>,
}

/// Serialized form: `{"vertices": ["a","b"], "edges": [["a","b",3]]}`.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<(String, String, u32)>,
}

impl DefiningGraph {
    /// Builds a graph from named vertices and labelled edges. The vertex
    /// order is fixed once here and reused everywhere (ShortLex, canonical
    /// forms).
    pub fn new<S: Into<String>>(
        vertices: Vec<S>,
        edges: Vec<(&str, &str, u32)>,
    ) -> Result<Self, GraphError> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut g = DefiningGraph {
            vertices,
            coeffs: BTreeMap::new(),
        };
        for (a, b, m) in edges {
            let i = g.index_of(a)?;
            let j = g.index_of(b)?;
            if i == j {
                return Err(GraphError::LoopEdge(a.to_string()));
            }
            if m < 2 {
                return Err(GraphError::CoefficientTooSmall {
                    a: a.to_string(),
                    b: b.to_string(),
                    m,
                });
            }
            let key = (i.min(j), i.max(j));
            if g.coeffs.insert(key, m).is_some() {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
        }
        Ok(g)
    }

    /// Complete graph on `names` where every pair gets the same label.
    pub fn complete(names: &[&str], m: u32) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                edges.push((names[i], names[j], m));
            }
        }
        DefiningGraph::new(names.to_vec(), edges)
    }

    /// Triangle graph on `a, b, c` with the given labels for `ab, ac, bc`.
    pub fn triangle(labels: (u32, u32, u32)) -> Self {
        DefiningGraph::new(
            vec!["a", "b", "c"],
            vec![
                ("a", "b", labels.0),
                ("a", "c", labels.1),
                ("b", "c", labels.2),
            ],
        )
        .expect("triangle labels >= 2")
    }

    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let edges: Vec<(&str, &str, u32)> = file
            .edges
            .iter()
            .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
            .collect();
        DefiningGraph::new(file.vertices.clone(), edges)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .coeffs
                .iter()
                .map(|(&(i, j), &m)| (self.vertices[i].clone(), self.vertices[j].clone(), m))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization")
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Coefficient of the pair, `None` meaning `m = infinity` (no edge).
    pub fn coeff(&self, i: usize, j: usize) -> Option<u32> {
        if i == j {
            return None;
        }
        self.coeffs.get(&(i.min(j), i.max(j))).copied()
    }

    /// Edges as `((i, j), m)` with `i < j`, in vertex order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.coeffs.iter().map(|(&e, &m)| (e, m))
    }

    pub fn edge_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&j| self.coeff(i, j).is_some())
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    pub fn is_connected(&self) -> bool {
        if self.rank() == 0 {
            return true;
        }
        let mut seen = vec![false; self.rank()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True iff every present coefficient is at least 3 (`∞` allowed).
    pub fn is_large_type(&self) -> bool {
        self.coeffs.values().all(|&m| m >= 3)
    }

    /// True iff the graph is complete: every pair carries a finite
    /// coefficient.
    pub fn is_free_of_infinity(&self) -> bool {
        self.coeffs.len() == self.rank() * (self.rank().saturating_sub(1)) / 2
    }

    /// True iff no 3-clique has all three coefficients equal to 3.
    /// Requires a large-type graph.
    pub fn is_hyperbolic_type(&self) -> Result<bool, GraphError> {
        self.require_large_type()?;
        Ok(self.all_three_triples().is_empty())
    }

    /// All triples `(i, j, k)` with `i < j < k` whose three coefficients are
    /// all equal to 3.
    pub fn all_three_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.coeff(i, j) == Some(3)
                        && self.coeff(i, k) == Some(3)
                        && self.coeff(j, k) == Some(3)
                    {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    pub fn require_large_type(&self) -> Result<(), GraphError> {
        for (&(i, j), &m) in &self.coeffs {
            if m < 3 {
                return Err(GraphError::NotLargeType {
                    a: self.vertices[i].clone(),
                    b: self.vertices[j].clone(),
                    m,
                });
            }
        }
        Ok(())
    }

    pub fn require_free_of_infinity(&self) -> Result<(), GraphError> {
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if self.coeff(i, j).is_none() {
                    return Err(GraphError::NotFreeOfInfinity(
                        self.vertices[i].clone(),
                        self.vertices[j].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Sorted multiset of incident labels, with `None` (infinity) last; used
    /// as a vertex invariant for isomorphism pruning.
    fn label_profile(&self, i: usize) -> Vec<u32> {
        let mut labels: Vec<u32> = (0..self.rank())
            .filter(|&j| j != i)
            .filter_map(|j| self.coeff(i, j))
            .collect();
        labels.sort_unstable();
        labels
    }

    /// Backtracking search for label-preserving isomorphisms `self -> other`.
    /// With `all = false` stops at the first witness.
    fn isomorphism_search(&self, other: &DefiningGraph, all: bool) -> Vec<GraphIso> {
        let n = self.rank();
        let mut found = Vec::new();
        if n != other.rank() || self.coeffs.len() != other.coeffs.len() {
            return found;
        }
        // Vertex invariant refinement: degree plus sorted incident-label
        // multiset must match.
        let my_profiles: Vec<_> = (0..n).map(|i| self.label_profile(i)).collect();
        let their_profiles: Vec<_> = (0..n).map(|i| other.label_profile(i)).collect();
        {
            let mut a = my_profiles.clone();
            let mut b = their_profiles.clone();
            a.sort();
            b.sort();
            if a != b {
                return found;
            }
        }
        let mut mapping = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            g1: &DefiningGraph,
            g2: &DefiningGraph,
            p1: &[Vec<u32>],
            p2: &[Vec<u32>],
            mapping: &mut Vec<usize>,
            used: &mut Vec<bool>,
            depth: usize,
            all: bool,
            found: &mut Vec<GraphIso>,
        ) -> bool {
            let n = g1.rank();
            if depth == n {
                found.push(GraphIso {
                    mapping: mapping.clone(),
                });
                return !all;
            }
            for cand in 0..n {
                if used[cand] || p1[depth] != p2[cand] {
                    continue;
                }
                if (0..depth).any(|prev| g1.coeff(depth, prev) != g2.coeff(cand, mapping[prev])) {
                    continue;
                }
                mapping[depth] = cand;
                used[cand] = true;
                let stop = extend(g1, g2, p1, p2, mapping, used, depth + 1, all, found);
                mapping[depth] = usize::MAX;
                used[cand] = false;
                if stop {
                    return true;
                }
            }
            false
        }
        extend(
            self,
            other,
            &my_profiles,
            &their_profiles,
            &mut mapping,
            &mut used,
            0,
            all,
            &mut found,
        );
        found
    }

    /// Returns a label-preserving isomorphism witness onto `other` if one
    /// exists.
    pub fn labelled_isomorphism(&self, other: &DefiningGraph) -> Option<GraphIso> {
        self.isomorphism_search(other, false).into_iter().next()
    }

    /// Complete list of label-preserving automorphisms; the identity comes
    /// first, the rest follow in lexicographic order of their mapping.
    pub fn automorphisms(&self) -> Vec<GraphIso> {
        let mut auts = self.isomorphism_search(self, true);
        auts.sort_by(|a, b| a.mapping.cmp(&b.mapping));
        debug_assert!(auts.first().map(GraphIso::is_identity).unwrap_or(true));
        auts
    }

    /// Barycentric subdivision `Γ_bar`: one type-1 node per vertex, one
    /// type-2 node per edge, with `v_a -- v_ab` whenever `a` is an endpoint
    /// of `ab`.
    pub fn barycentric_subdivision(&self) -> BarGraph {
        let mut nodes = Vec::new();
        for i in 0..self.rank() {
            nodes.push(BarNode::Vertex(i));
        }
        let edge_list: Vec<(usize, usize)> = self.coeffs.keys().copied().collect();
        for &(i, j) in &edge_list {
            nodes.push(BarNode::Edge(i, j));
        }
        let mut edges = Vec::new();
        for (e_idx, &(i, j)) in edge_list.iter().enumerate() {
            let edge_node = self.rank() + e_idx;
            edges.push((i, edge_node));
            edges.push((j, edge_node));
        }
        BarGraph { nodes, edges }
    }
}

impl fmt::Display for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ[{}; ", self.vertices.join(","))?;
        let mut first = true;
        for (&(i, j), &m) in &self.coeffs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}-{}:{}", self.vertices[i], self.vertices[j], m)?;
        }
        write!(f, "]")
    }
}

/// A label-preserving graph isomorphism, stored as the image of each vertex
/// index of the source graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphIso {
    pub mapping: Vec<usize>,
}

impl GraphIso {
    pub fn identity(rank: usize) -> Self {
        GraphIso {
            mapping: (0..rank).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// `self` after `other`: `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &GraphIso) -> GraphIso {
        GraphIso {
            mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        let mut mapping = vec![0; self.mapping.len()];
        for (i, &v) in self.mapping.iter().enumerate() {
            mapping[v] = i;
        }
        GraphIso { mapping }
    }

    /// Checks that the map preserves adjacency and labels between `g1` and
    /// `g2` (infinity included, by absence).
    pub fn is_valid(&self, g1: &DefiningGraph, g2: &DefiningGraph) -> bool {
        if self.mapping.len() != g1.rank() || g1.rank() != g2.rank() {
            return false;
        }
        let mut seen = vec![false; self.mapping.len()];
        for &v in &self.mapping {
            if v >= seen.len() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        for i in 0..g1.rank() {
            for j in i + 1..g1.rank() {
                if g1.coeff(i, j) != g2.coeff(self.mapping[i], self.mapping[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Node of a barycentric subdivision: `Vertex(a)` has type 1, `Edge(a, b)`
/// has type 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BarNode {
    Vertex(usize),
    Edge(usize, usize),
}

impl BarNode {
    pub fn vertex_type(&self) -> u8 {
        match self {
            BarNode::Vertex(_) => 1,
            BarNode::Edge(_, _) => 2,
        }
    }
}

/// Abstract bipartite graph produced by [`DefiningGraph::barycentric_subdivision`].
#[derive(Debug, Clone)]
pub struct BarGraph {
    pub nodes: Vec<BarNode>,
    /// Edges as index pairs into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

impl BarGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == idx || b == idx)
            .count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t345() -> DefiningGraph {
        DefiningGraph::triangle((3, 4, 5))
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert!(matches!(
            DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 1)]),
            Err(GraphError::CoefficientTooSmall { .. })
        ));
        assert!(matches!(
            DefiningGraph::new(vec!["a", "b"], vec![("a", "a", 3)]),
            Err(GraphError::LoopEdge(_))
        ));
        assert!(matches!(
            DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 3), ("b", "a", 4)]),
            Err(GraphError::DuplicateEdge(_, _))
        ));
        assert!(matches!(
            DefiningGraph::new(vec!["a", "a"], vec![]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            DefiningGraph::new(vec!["a"], vec![("a", "x", 3)]),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = t345();
        let back = DefiningGraph::parse_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn large_type_predicate() {
        assert!(DefiningGraph::triangle((3, 3, 3)).is_large_type());
        assert!(!DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 2)])
            .unwrap()
            .is_large_type());
        // An infinity label does not violate largeness.
        let g = DefiningGraph::new(vec!["a", "b", "c"], vec![("a", "b", 3), ("a", "c", 4)])
            .unwrap();
        assert!(g.is_large_type());
    }

    #[test]
    fn free_of_infinity_predicate() {
        assert!(t345().is_free_of_infinity());
        let path = DefiningGraph::new(vec!["a", "b", "c"], vec![("a", "b", 3), ("b", "c", 3)])
            .unwrap();
        assert!(!path.is_free_of_infinity());
        let single = DefiningGraph::new(vec!["a"], Vec::<(&str, &str, u32)>::new()).unwrap();
        assert!(single.is_free_of_infinity());
    }

    #[test]
    fn hyperbolic_type_predicate() {
        assert!(!DefiningGraph::triangle((3, 3, 3))
            .is_hyperbolic_type()
            .unwrap());
        assert!(DefiningGraph::triangle((3, 3, 4))
            .is_hyperbolic_type()
            .unwrap());
        // No triangle at all.
        let two_edges = DefiningGraph::new(
            vec!["a", "b", "c", "d"],
            vec![("a", "b", 3), ("c", "d", 3)],
        )
        .unwrap();
        assert!(two_edges.is_hyperbolic_type().unwrap());
        // Rejects non-large-type input.
        let bad = DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 2)]).unwrap();
        assert!(bad.is_hyperbolic_type().is_err());
    }

    #[test]
    fn isomorphism_witnesses() {
        let g1 = t345();
        let g2 = DefiningGraph::new(
            vec!["x", "y", "z"],
            vec![("x", "y", 4), ("x", "z", 5), ("y", "z", 3)],
        )
        .unwrap();
        let iso = g1.labelled_isomorphism(&g2).expect("relabelled copy");
        assert!(iso.is_valid(&g1, &g2));

        let g3 = DefiningGraph::triangle((3, 3, 4));
        let g4 = DefiningGraph::triangle((3, 4, 4));
        assert!(g3.labelled_isomorphism(&g4).is_none());

        let id = g1.labelled_isomorphism(&g1).unwrap();
        assert!(id.is_valid(&g1, &g1));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(DefiningGraph::triangle((3, 3, 3)).automorphisms().len(), 6);
        assert_eq!(t345().automorphisms().len(), 1);
        // Brute-force expectation for (3,3,4): swapping the endpoints of the
        // 3-3 "path" through the odd vertex. Checked against all 6
        // permutations below.
        let g = DefiningGraph::triangle((3, 3, 4));
        let auts = g.automorphisms();
        assert_eq!(auts.len(), brute_force_aut_count(&g));
        assert_eq!(auts.len(), 2);
    }

    fn brute_force_aut_count(g: &DefiningGraph) -> usize {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        permutations(g.rank())
            .into_iter()
            .filter(|p| GraphIso { mapping: p.clone() }.is_valid(g, g))
            .count()
    }

    #[test]
    fn automorphisms_form_group() {
        for g in [
            DefiningGraph::triangle((3, 3, 3)),
            DefiningGraph::triangle((3, 3, 4)),
            DefiningGraph::complete(&["a", "b", "c", "d"], 3).unwrap(),
        ] {
            let auts = g.automorphisms();
            assert!(auts[0].is_identity());
            for x in &auts {
                assert!(auts.contains(&x.inverse()));
                for y in &auts {
                    assert!(auts.contains(&x.compose(y)));
                }
            }
        }
    }

    #[test]
    fn complete_equal_label_automorphisms_are_symmetric_group() {
        let g = DefiningGraph::complete(&["a", "b", "c", "d"], 3).unwrap();
        assert_eq!(g.automorphisms().len(), 24);
    }

    #[test]
    fn barycentric_subdivision_shapes() {
        // Single edge ab -> path v_a - v_ab - v_b.
        let edge = DefiningGraph::new(vec!["a", "b"], vec![("a", "b", 3)]).unwrap();
        let bar = edge.barycentric_subdivision();
        assert_eq!(bar.node_count(), 3);
        assert_eq!(bar.edges.len(), 2);
        assert_eq!(bar.degree(2), 2);

        // Triangle -> 6-cycle.
        let bar = DefiningGraph::triangle((3, 3, 3)).barycentric_subdivision();
        assert_eq!(bar.node_count(), 6);
        assert_eq!(bar.edges.len(), 6);
        assert!((0..6).all(|i| bar.degree(i) == 2));

        // n-clique -> bipartite with n + n(n-1)/2 vertices.
        let k4 = DefiningGraph::complete(&["a", "b", "c", "d"], 3).unwrap();
        let bar = k4.barycentric_subdivision();
        assert_eq!(bar.node_count(), 4 + 6);
        assert_eq!(bar.edges.len(), 12);
        for (idx, node) in bar.nodes.iter().enumerate() {
            match node {
                BarNode::Vertex(_) => assert_eq!(bar.degree(idx), 3),
                BarNode::Edge(_, _) => assert_eq!(bar.degree(idx), 2),
            }
        }
    }

    #[test]
    fn isomorphism_is_symmetric() {
        let g1 = DefiningGraph::triangle((3, 3, 4));
        let g2 = DefiningGraph::new(
            vec!["p", "q", "r"],
            vec![("p", "q", 4), ("p", "r", 3), ("q", "r", 3)],
        )
        .unwrap();
        assert!(g1.labelled_isomorphism(&g2).is_some());
        assert!(g2.labelled_isomorphism(&g1).is_some());
    }
}
