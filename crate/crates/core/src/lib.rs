//! Network-slice resource provisioning under radio coverage constraints.
//!
//! The crate models an infrastructure graph of cloud nodes and remote radio
//! heads, per-slice resource demand graphs with a geographic coverage demand,
//! and the per-resource-block radio rates linking the two. On top of that it
//! builds and solves the provisioning MILPs and the direct SFC-embedding
//! baseline used for comparison.

pub mod coverage;
pub mod embedding;
pub mod error;
pub mod geometry;
pub mod provisioning;
pub mod radio;
pub mod slice;
pub mod topology;

pub use coverage::{aggregate_radio_demand, per_cell_demand, CoverageSpec, Density, DensityLayer, DEFAULT_CELL};
pub use error::{ModelError, ProvisioningError};
pub use geometry::{partition_area, project_equirectangular, Cell, Point, Rect};
pub use radio::{bits_per_rb_down, bits_per_rb_up, path_loss, precompute_rate_tables, Conservatism, RadioParams, RateTables};
pub use slice::{SliceSpec, SrdGraph, SrdLink, SrdNode};
pub use topology::{build_fat_tree, CostTable, FatTreeCaps, InfraLink, InfraNode, InfrastructureGraph, LevelCaps, NodeCost, NodeKind, RrhCaps};
