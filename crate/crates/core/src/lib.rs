//! Finite posets, gluings along complete subsets, elevations, and
//! certified decompositions of a poset into growth and gluing steps.
//!
//! The main entry points are [`Poset::build`], [`glue_along_complete`],
//! [`split_for_cover`], [`gextension_step`] and [`decompose_to_point`], whose
//! output [`ConstructionScript::replay`] re-verifies from scratch.

pub mod chains;
pub mod dot;
pub mod elevation;
pub mod enumerate;
pub mod error;
pub mod gext;
pub mod gluing;
pub mod io;
pub mod morphism;
pub mod poset;
pub mod random;
pub mod script;

pub use chains::{chain_decomposition, glue_d_along_subcollection, split_for_cover, ChainDecomposition, SplitResult};
pub use elevation::{elevate, elevate_with_ids, m_count, retract, ElevationWitness};
pub use error::{Error, ErrorClass, Result};
pub use gext::{choose_pivot, gextension_step, measure, reduce_dimension, GExtension};
pub use gluing::{
    check_dim_min_preservation, find_c_sequence, glue_along_collection, glue_along_complete, glue_named, induced_map,
    is_height_zero_gluing, lift_cover, verify_gluing, CSequence, GluingDefect, GluingWitness,
};
pub use morphism::{
    find_isomorphism, is_embedding, is_isomorphism, is_poset_map, is_saturated_embedding, is_saturated_subset,
    MapDefect, PosetMap,
};
pub use poset::{node_set, Chain, NodeId, NodeSet, Poset};
pub use script::{decompose_to_point, wrap, ConstructionScript, GlueBlock, ReplayReport, StepKind, WrapOptions};
