use sliceprov_milp::MilpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid topology: {0}")]
    Topology(String),
    #[error("invalid node {node}: {reason}")]
    Node { node: String, reason: String },
    #[error("invalid link {link}: {reason}")]
    Link { link: String, reason: String },
    #[error("invalid SRD for slice {slice}: {reason}")]
    Srd { slice: String, reason: String },
    #[error("invalid coverage: {0}")]
    Coverage(String),
    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },
    #[error("invalid radio parameter: {0}")]
    Radio(String),
}

#[derive(Debug, Error)]
pub enum ProvisioningError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{step} infeasible for slices {slices:?}")]
    Infeasible { step: String, slices: Vec<String> },
    #[error("{step} stopped without a solution for slices {slices:?} ({status})")]
    NoSolution { step: String, slices: Vec<String>, status: String },
    #[error("infeasible even at delta = {delta}")]
    DeltaFloor { delta: f64 },
}

impl ProvisioningError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, ProvisioningError::Infeasible { .. } | ProvisioningError::DeltaFloor { .. })
    }
}
