//! The full pipeline for one module, and index additivity for sequences.

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{classical_index, dirac_index, CohomologyError, CohomologyReport};
use crate::grothendieck::VirtualRModule;
use crate::jordan::{generalized_zero_eigenspace, jordan_decomposition, GeneralizedZeroEigenspace, JordanDecomposition, JordanError};
use crate::module::{ModuleError, ShortExactSequence, Sl2Module};
use crate::ndiff::NdError;
use crate::spin::{build_tensor, SpinError, TensorComplex};
use crate::weight::Weight;
use crate::zero_ses::SesError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    NDifferential(#[from] NdError),
    #[error(transparent)]
    Sequence(#[from] SesError),
    #[error("{0}")]
    Input(String),
}

impl AnalysisError {
    /// The weight that was out of reach, when the truncation was too shallow.
    pub fn shallow_weight(&self) -> Option<Weight> {
        match self {
            AnalysisError::Jordan(JordanError::ShallowTruncation { weight })
            | AnalysisError::Sequence(SesError::Jordan(JordanError::ShallowTruncation { weight }))
            | AnalysisError::NDifferential(NdError::Jordan(JordanError::ShallowTruncation { weight })) => Some(*weight),
            _ => None,
        }
    }
}

/// `V ⊗ S`, its generalized 0-eigenspace, a Jordan basis, and `H(V)`.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub tensor: TensorComplex,
    pub zero: GeneralizedZeroEigenspace,
    pub jordan: JordanDecomposition,
    pub report: CohomologyReport,
}

impl Analysis {
    pub fn new(m: &Sl2Module) -> Result<Self, AnalysisError> {
        let tensor = build_tensor(m)?;
        let zero = generalized_zero_eigenspace(&tensor)?;
        let jordan = jordan_decomposition(&zero)?;
        let report = CohomologyReport::compute(&zero)?;
        Ok(Analysis { tensor, zero, jordan, report })
    }

    pub fn index(&self) -> VirtualRModule {
        dirac_index(&self.report)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    /// `I(U)`, `I(V)`, `I(W)`.
    pub indices: [VirtualRModule; 3],
    /// The same built from `H^0` only.
    pub classical: [VirtualRModule; 3],
}

impl AdditivityReport {
    pub fn holds(&self) -> bool {
        self.indices[1] == &self.indices[0] + &self.indices[2]
    }

    pub fn classical_holds(&self) -> bool {
        self.classical[1] == &self.classical[0] + &self.classical[2]
    }
}

/// `I(V) = I(U) + I(W)` for `0 -> U -> V -> W -> 0`.
pub fn additivity_check(s: &ShortExactSequence) -> Result<AdditivityReport, AnalysisError> {
    let a = [Analysis::new(s.sub())?, Analysis::new(s.middle())?, Analysis::new(s.quotient())?];
    Ok(AdditivityReport {
        indices: std::array::from_fn(|i| a[i].index()),
        classical: std::array::from_fn(|i| classical_index(&a[i].report)),
    })
}
