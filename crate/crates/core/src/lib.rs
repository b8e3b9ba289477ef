//! Rooted densities, tree powers, local isomorphisms, random polynomial
//! graphs and random-graph transference for Turán problems of tree powers.

pub mod count;
pub mod density;
pub mod error;
pub mod field;
pub mod graph;
pub mod harness;
pub mod iso;
pub mod local_iso;
pub mod poly;
pub mod polygraph;
pub mod power;
pub mod transfer;

pub use count::{
    contains_subgraph, count_rooted_extensions, count_subgraph_copies, rooted_copies, rooted_extension_counts,
    ExtensionCounts,
};
pub use density::{density_m, is_balanced, rooted_density, two_density, Density, Rational};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use graph::{fixtures, Graph, RootedGraph, Vertex};
pub use local_iso::{
    decompose_power_image, enumerate_local_images, find_good_set, local_quotients, verify_density_monotone,
    verify_good_set, GoodSet, LocalMap, Violation,
};
pub use poly::{vanish_probability_test, vanish_probability_unchecked, SymmetricPolynomial, VanishEstimate};
pub use polygraph::{build_poly_graph, find_bad_root_tuples, prune_bad_roots, PolyGraphParams, Pruned};
pub use power::{build_full_power, enumerate_power_family, is_power_free, LabeledUnion, TreePowerSpec};
pub use transfer::{deletion_construct, sample_gnp, transfer_expected_count_check, transfer_subgraph, GnpConfig};
