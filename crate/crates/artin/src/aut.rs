//! Isomorphism decision, standard automorphisms, the height-preservation
//! dichotomy, and the outer automorphism group.
//!
//! For large-type free-of-infinity Artin groups, two groups are isomorphic
//! exactly when their defining graphs are isomorphic as labelled graphs, and
//! the outer automorphism group is `Aut(Γ) × Z/2`, the second factor
//! generated by the global inversion `ι : s ↦ s⁻¹`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DefiningGraph, GraphError, GraphIso};
use crate::oracle::{Oracle, OracleError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum AutError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("out of theorem scope: {0}")]
    OutOfScope(String),
    #[error("map does not preserve the relation on edge {0}-{1}")]
    RelationBroken(String, String),
    #[error("generator image for `{0}` has height {1}, not ±1; map is not of the certified form")]
    BadImageHeight(String, i64),
    #[error("mixed image heights contradict the height dichotomy: map is invalid")]
    MixedHeights,
    #[error("image count {0} does not match source rank {1}")]
    WrongImageCount(usize, usize),
}

/// A homomorphism candidate given by generator images.
#[derive(Debug, Clone)]
pub struct ArtinMap {
    pub source: DefiningGraph,
    pub target: DefiningGraph,
    /// Image of each source generator, indexed by source vertex order.
    pub images: Vec<Word>,
}

impl ArtinMap {
    pub fn new(
        source: DefiningGraph,
        target: DefiningGraph,
        images: Vec<Word>,
    ) -> Result<Self, AutError> {
        if images.len() != source.rank() {
            return Err(AutError::WrongImageCount(images.len(), source.rank()));
        }
        Ok(ArtinMap {
            source,
            target,
            images,
        })
    }

    /// The identity map.
    pub fn identity(graph: &DefiningGraph) -> Self {
        ArtinMap {
            source: graph.clone(),
            target: graph.clone(),
            images: (0..graph.rank()).map(Word::gen).collect(),
        }
    }

    /// The map induced by a label-preserving graph isomorphism.
    pub fn graph_induced(
        source: &DefiningGraph,
        target: &DefiningGraph,
        iso: &GraphIso,
    ) -> Self {
        ArtinMap {
            source: source.clone(),
            target: target.clone(),
            images: (0..source.rank()).map(|i| Word::gen(iso.apply(i))).collect(),
        }
    }

    /// The global inversion `ι(s) = s⁻¹`.
    pub fn inversion(graph: &DefiningGraph) -> Self {
        ArtinMap {
            source: graph.clone(),
            target: graph.clone(),
            images: (0..graph.rank()).map(|i| Word::power(i, -1)).collect(),
        }
    }

    /// The inner automorphism `x ↦ g x g⁻¹`.
    pub fn conjugation(graph: &DefiningGraph, g: &Word) -> Self {
        ArtinMap {
            source: graph.clone(),
            target: graph.clone(),
            images: (0..graph.rank())
                .map(|i| Word::gen(i).conjugate_by(g))
                .collect(),
        }
    }

    /// Applies the map to a word by substitution.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            let image = &self.images[l.gen];
            out = out.concat(&if l.inv { image.inverse() } else { image.clone() });
        }
        out
    }

    /// `self ∘ other` (apply `other` first). Graphs must be compatible.
    pub fn compose(&self, other: &ArtinMap) -> ArtinMap {
        ArtinMap {
            source: other.source.clone(),
            target: self.target.clone(),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    /// Verifies that every defining relation of the source maps to a
    /// relation of the target group.
    pub fn validate_relations(&self, target_oracle: &Oracle) -> Result<(), AutError> {
        for ((i, j), m) in self.source.edges() {
            let lhs = self.apply(&Word::alternating(i, j, m));
            let rhs = self.apply(&Word::alternating(j, i, m));
            if !target_oracle.are_equal(&lhs, &rhs)? {
                return Err(AutError::RelationBroken(
                    self.source.name(i).to_string(),
                    self.source.name(j).to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Requires the rigidity theorem's hypothesis class.
fn require_scope(graph: &DefiningGraph) -> Result<(), AutError> {
    if !graph.is_large_type() {
        return Err(AutError::OutOfScope(
            "graph is not large-type".to_string(),
        ));
    }
    if !graph.is_free_of_infinity() {
        return Err(AutError::OutOfScope(
            "graph has an infinity label (pair with no coefficient)".to_string(),
        ));
    }
    Ok(())
}

/// Isomorphism decision for large-type free-of-infinity Artin groups: the
/// groups are isomorphic iff the labelled graphs are, and a graph witness
/// is returned. Graphs outside the hypothesis class are rejected with a
/// scope error, never answered.
pub fn decide_isomorphic(
    g1: &DefiningGraph,
    g2: &DefiningGraph,
) -> Result<Option<GraphIso>, AutError> {
    require_scope(g1)?;
    require_scope(g2)?;
    Ok(g1.labelled_isomorphism(g2))
}

/// The graph-induced maps (one per graph automorphism) followed by the
/// global inversion; every returned map is relation-checked by the oracle.
/// Together with the conjugations these generate the automorphism group.
pub fn standard_automorphisms(
    graph: &DefiningGraph,
    oracle: &Oracle,
) -> Result<Vec<ArtinMap>, AutError> {
    require_scope(graph)?;
    let mut maps = Vec::new();
    for iso in graph.automorphisms() {
        maps.push(ArtinMap::graph_induced(graph, graph, &iso));
    }
    maps.push(ArtinMap::inversion(graph));
    for map in &maps {
        map.validate_relations(oracle)?;
    }
    Ok(maps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeightTag {
    HeightPreserving,
    InversionComposite,
}

/// Reads the height dichotomy off the generator-image heights: all `+1`
/// means height-preserving, all `-1` means the composite with the inversion
/// is; anything else contradicts the certified form `φ(s) = g t^{±1} g⁻¹`
/// and invalidates the map.
pub fn height_dichotomy(map: &ArtinMap) -> Result<HeightTag, AutError> {
    let mut signs = Vec::new();
    for (i, image) in map.images.iter().enumerate() {
        let h = image.height();
        if h.abs() != 1 {
            return Err(AutError::BadImageHeight(
                map.source.name(i).to_string(),
                h,
            ));
        }
        signs.push(h);
    }
    if signs.iter().all(|&s| s == 1) {
        Ok(HeightTag::HeightPreserving)
    } else if signs.iter().all(|&s| s == -1) {
        Ok(HeightTag::InversionComposite)
    } else {
        Err(AutError::MixedHeights)
    }
}

/// `Out(A_Γ) = Aut(Γ) × Z/2`, presented by explicit coset representatives
/// `φ_σ ∘ ι^ε` with their multiplication table.
#[derive(Debug, Clone)]
pub struct OutDescription {
    pub graph_auts: Vec<GraphIso>,
    /// Elements as `(automorphism index, inversion flag)`.
    pub elements: Vec<(usize, bool)>,
    /// `table[x][y]` = index of the product `elements[x] · elements[y]`.
    pub table: Vec<Vec<usize>>,
    pub order: usize,
}

pub fn out_group(graph: &DefiningGraph) -> Result<OutDescription, AutError> {
    require_scope(graph)?;
    let graph_auts = graph.automorphisms();
    let mut elements = Vec::new();
    for idx in 0..graph_auts.len() {
        for inv in [false, true] {
            elements.push((idx, inv));
        }
    }
    let index_of = |sigma: &GraphIso, inv: bool| {
        let s_idx = graph_auts.iter().position(|a| a == sigma).expect("closure");
        elements
            .iter()
            .position(|&(i, e)| i == s_idx && e == inv)
            .expect("element")
    };
    // The inversion commutes with every graph-induced map, so the group is
    // the direct product: (σ, ε)·(σ', ε') = (σ∘σ', ε xor ε').
    let mut table = Vec::with_capacity(elements.len());
    for &(i, e) in &elements {
        let mut row = Vec::with_capacity(elements.len());
        for &(j, f) in &elements {
            let sigma = graph_auts[i].compose(&graph_auts[j]);
            row.push(index_of(&sigma, e != f));
        }
        table.push(row);
    }
    Ok(OutDescription {
        order: elements.len(),
        graph_auts,
        elements,
        table,
    })
}

impl OutDescription {
    /// The representative automorphism map of an element.
    pub fn representative(&self, graph: &DefiningGraph, element: usize) -> ArtinMap {
        let (idx, inv) = self.elements[element];
        let base = ArtinMap::graph_induced(graph, graph, &self.graph_auts[idx]);
        if inv {
            base.compose(&ArtinMap::inversion(graph))
        } else {
            base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t333() -> DefiningGraph {
        DefiningGraph::triangle((3, 3, 3))
    }

    #[test]
    fn decide_isomorphic_suite() {
        let g1 = DefiningGraph::triangle((3, 4, 5));
        let relabelled = DefiningGraph::new(
            vec!["u", "v", "w"],
            vec![("u", "v", 5), ("u", "w", 4), ("v", "w", 3)],
        )
        .unwrap();
        assert!(decide_isomorphic(&g1, &relabelled).unwrap().is_some());
        let near_miss = DefiningGraph::triangle((3, 4, 4));
        assert!(decide_isomorphic(&g1, &near_miss).unwrap().is_none());
    }

    #[test]
    fn scope_enforced() {
        let with_infinity =
            DefiningGraph::new(vec!["a", "b", "c"], vec![("a", "b", 3), ("b", "c", 3)])
                .unwrap();
        assert!(matches!(
            decide_isomorphic(&with_infinity, &with_infinity),
            Err(AutError::OutOfScope(_))
        ));
        let small = DefiningGraph::triangle((2, 3, 3));
        assert!(matches!(
            decide_isomorphic(&small, &small),
            Err(AutError::OutOfScope(_))
        ));
    }

    #[test]
    fn standard_automorphisms_relation_checked() {
        let graph = t333();
        let oracle = Oracle::new(graph.clone()).unwrap();
        let maps = standard_automorphisms(&graph, &oracle).unwrap();
        // 6 graph-induced maps plus the inversion.
        assert_eq!(maps.len(), 7);
        // Conjugation is relation-preserving and height-preserving.
        let conj = ArtinMap::conjugation(&graph, &Word::gen(0));
        conj.validate_relations(&oracle).unwrap();
        assert_eq!(
            height_dichotomy(&conj).unwrap(),
            HeightTag::HeightPreserving
        );
    }

    #[test]
    fn inversion_has_order_two() {
        let graph = t333();
        let iota = ArtinMap::inversion(&graph);
        let squared = iota.compose(&iota);
        for (i, image) in squared.images.iter().enumerate() {
            assert_eq!(image.free_reduce(), Word::gen(i));
        }
    }

    #[test]
    fn dichotomy_tags() {
        let graph = t333();
        assert_eq!(
            height_dichotomy(&ArtinMap::inversion(&graph)).unwrap(),
            HeightTag::InversionComposite
        );
        assert_eq!(
            height_dichotomy(&ArtinMap::identity(&graph)).unwrap(),
            HeightTag::HeightPreserving
        );
        // Mixed signs are a validation failure.
        let mixed = ArtinMap::new(
            graph.clone(),
            graph.clone(),
            vec![Word::gen(0), Word::power(1, -1), Word::gen(2)],
        )
        .unwrap();
        assert!(matches!(
            height_dichotomy(&mixed),
            Err(AutError::MixedHeights)
        ));
        // Height ±1 violation.
        let squared = ArtinMap::new(
            graph.clone(),
            graph.clone(),
            vec![Word::power(0, 2), Word::gen(1), Word::gen(2)],
        )
        .unwrap();
        assert!(matches!(
            height_dichotomy(&squared),
            Err(AutError::BadImageHeight(_, 2))
        ));
    }

    #[test]
    fn mixed_sign_map_on_odd_edge_breaks_relation() {
        // a ↦ a, b ↦ b⁻¹ on an edge of label 3 cannot preserve the braid
        // relation.
        let graph = DefiningGraph::triangle((3, 3, 3));
        let oracle = Oracle::new(graph.clone()).unwrap();
        let map = ArtinMap::new(
            graph.clone(),
            graph.clone(),
            vec![Word::gen(0), Word::power(1, -1), Word::gen(2)],
        )
        .unwrap();
        assert!(matches!(
            map.validate_relations(&oracle),
            Err(AutError::RelationBroken(_, _))
        ));
    }

    #[test]
    fn out_group_orders() {
        assert_eq!(out_group(&t333()).unwrap().order, 12);
        assert_eq!(
            out_group(&DefiningGraph::triangle((3, 4, 5))).unwrap().order,
            2
        );
        assert_eq!(
            out_group(&DefiningGraph::triangle((3, 3, 4))).unwrap().order,
            4
        );
        let k4 = DefiningGraph::complete(&["a", "b", "c", "d"], 3).unwrap();
        assert_eq!(out_group(&k4).unwrap().order, 48);
    }

    #[test]
    fn out_table_is_a_group() {
        let out = out_group(&DefiningGraph::triangle((3, 3, 4))).unwrap();
        let n = out.order;
        let identity = out
            .elements
            .iter()
            .position(|&(i, e)| out.graph_auts[i].is_identity() && !e)
            .unwrap();
        for x in 0..n {
            assert_eq!(out.table[identity][x], x);
            assert_eq!(out.table[x][identity], x);
            assert!((0..n).any(|y| out.table[x][y] == identity));
            for y in 0..n {
                for z in 0..n {
                    assert_eq!(
                        out.table[out.table[x][y]][z],
                        out.table[x][out.table[y][z]]
                    );
                }
            }
        }
    }

    #[test]
    fn standard_images_are_conjugated_generator_powers() {
        let graph = t333();
        let oracle = Oracle::new(graph.clone()).unwrap();
        for map in standard_automorphisms(&graph, &oracle).unwrap() {
            for image in &map.images {
                let h = image.height();
                assert_eq!(h.abs(), 1);
                // Images of standard automorphisms are literal generator
                // powers (conjugator 1).
                assert_eq!(image.free_reduce().len(), 1);
            }
        }
    }
}
