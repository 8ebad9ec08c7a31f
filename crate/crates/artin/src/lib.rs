//! Computational toolkit for large-type Artin groups.
//!
//! The library is organised around a defining graph `Γ` with integer
//! coefficients `m_ab ≥ 2` (absence meaning `∞`) and the Artin group `A_Γ`
//! it presents. On top of that it provides:
//!
//! - exact word arithmetic and the height homomorphism ([`word`]),
//! - Garside normal forms for dihedral Artin groups `A_m` ([`dihedral`]),
//! - a rewriting-based word problem oracle for large-type groups ([`oracle`]),
//! - bounded-radius Deligne complex balls with exact Moussong angle data and
//!   a combinatorial Gauss-Bonnet auditor ([`deligne`]),
//! - the arrow calculus on principal triangles of `(3,3,3)` regions
//!   ([`hexagon`]),
//! - classification machinery for classical vs exotic dihedral subgroups
//!   ([`classify`]),
//! - the algebraic reconstruction of the complex from subgroup data alone
//!   ([`reconstruct`]),
//! - isomorphism decision and `Out(A_Γ)` computation ([`aut`]).
//!
//! All verdicts produced by radius-bounded searches carry the bounds they
//! were computed under; nothing pretends to quantify over the infinite group.

pub mod aut;
pub mod classify;
pub mod deligne;
pub mod dihedral;
pub mod graph;
pub mod hexagon;
pub mod oracle;
pub mod reconstruct;
pub mod word;

pub use graph::{DefiningGraph, GraphError, GraphIso};
pub use oracle::{Oracle, OracleError};
pub use word::{Letter, Word};
