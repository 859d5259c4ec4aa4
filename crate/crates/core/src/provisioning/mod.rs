//! Coverage-aware provisioning of radio, compute, storage and link resources.
//!
//! [`build_rp`], [`build_np`] and [`build_jrn`] turn a scenario into MILPs;
//! [`carp`] runs one of the five variants end to end and [`delta_scaling`]
//! searches the largest uniformly scaled demand that still fits.
//! [`verify_solution`] re-checks a solution without going through the models.
//!
//! Departures from a literal reading of the formulation:
//! - radio-to-wired coupling rows are `>=` (an exact equality cannot be met once
//!   instance counts are integral and radio shares are fixed by the first step);
//! - intra-node traffic is bounded by, rather than equal to, the traffic of
//!   co-hosted endpoints, while every endpoint's traffic must be carried by
//!   the loopback or external links;
//! - flow conservation keeps the fan-out/fan-in ratio as written, so forks and
//!   merges over-provision the upstream or downstream node.

mod builder;
mod carp;
mod cost;
mod shares;
mod size;
mod verify;

pub use builder::{build_jrn, build_np, build_rp, ProvisioningModel};
pub use carp::{carp, delta_scaling, scale_slices, CarpOptions, DELTA_TOLERANCE};
pub use cost::{radio_cost, wired_cost};
pub use shares::{Costs, PriorUsage, ProblemRecord, ProvisioningSolution, RadioShares, Step, Variant, WiredShares};
pub use size::{count_problem_size, table_one_formula, ProblemSize, ScenarioDims, SliceDims};
pub use verify::{verify_solution, Family, SolutionViolation, VerificationReport};
