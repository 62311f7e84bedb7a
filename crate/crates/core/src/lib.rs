//! Exact-arithmetic toolkit for analysing obviously strategyproof (OSP)
//! mechanisms for single-parameter agents.
//!
//! The crate models extensive-form mechanisms as binary implementation trees
//! over finite type domains, builds the per-agent OSP-graph, and decides
//! obvious strategyproofness via cycle monotonicity with exact rational
//! arithmetic throughout. On top of that sit the witness ironing operations,
//! the ordered-query transformation, the three-way greedy classifier, and a
//! related-machines scheduling mechanism with verified approximation bounds.

#![forbid(unsafe_code)]

pub mod fixtures;
pub mod interchange;
pub mod ironing;
pub mod model;
pub mod osp_graph;
pub mod random;
pub mod scheduling;
pub mod three_way;

pub use model::{Allocation, LeafNode, Mechanism, Node, Profile, QueryNode, Rat};
pub use osp_graph::{CycleWitness, OspGraph};
