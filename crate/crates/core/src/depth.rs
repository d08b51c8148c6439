//! Truncation depth checks for named modules and sequences.
//!
//! A truncation that is too shallow either fails outright (a weight whose
//! sector reaches the cut) or, for builtins, goes unnoticed by the Jordan
//! pass and only shows up as a report that changes when the depth grows.

use crate::analysis::AnalysisError;
use crate::report::{module_report, ses_report, Report};
use crate::source::{is_builtin_module, is_builtin_ses, module_source, ses_source};
use crate::verify::{verify_module, verify_ses, VerifySummary};

/// Extra depth compared against when looking for truncation effects.
pub const STABILITY_MARGIN: usize = 4;
/// How far past the requested depth to search for a sufficient one.
pub const SEARCH_LIMIT: usize = 64;

/// A module, or a sequence whose middle term is analyzed, by builtin name
/// or spec file path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Module(String),
    Ses(String),
}

#[derive(Debug, thiserror::Error)]
pub enum DepthError {
    #[error("depth {depth} is too shallow ({detail})")]
    Shallow { depth: usize, detail: String, suggested: Option<usize> },
    #[error(transparent)]
    Input(AnalysisError),
}

impl Target {
    pub fn name(&self) -> &str {
        match self {
            Target::Module(s) | Target::Ses(s) => s,
        }
    }

    pub fn is_builtin(&self) -> bool {
        match self {
            Target::Module(m) => is_builtin_module(m),
            Target::Ses(s) => is_builtin_ses(s),
        }
    }

    pub fn report_at(&self, depth: usize, n: Option<usize>) -> Result<Report, AnalysisError> {
        match self {
            Target::Module(m) => module_report(m, depth, n),
            Target::Ses(s) => ses_report(s, depth, n),
        }
    }

    pub fn verify_at(&self, depth: usize) -> Result<VerifySummary, AnalysisError> {
        match self {
            Target::Module(m) => verify_module(&module_source(m, depth)?),
            Target::Ses(s) => verify_ses(&ses_source(s, depth)?),
        }
    }

    /// The report at `depth`, unless that depth is too shallow. Spec files
    /// have a fixed size, so only the outright failure applies to them.
    pub fn stable_report(&self, depth: usize, n: Option<usize>) -> Result<Report, DepthError> {
        match self.report_at(depth, n) {
            Ok(r) => {
                if !self.is_builtin() || self.stable_at(depth, n, &r) {
                    return Ok(r);
                }
                Err(DepthError::Shallow {
                    depth,
                    detail: format!("the report changes between depth {depth} and {}", depth + STABILITY_MARGIN),
                    suggested: self.minimal_depth(depth, n),
                })
            }
            Err(e) => match e.shallow_weight() {
                Some(w) if self.is_builtin() => Err(DepthError::Shallow {
                    depth,
                    detail: format!("weight {w} is not reliable at this depth"),
                    suggested: self.minimal_depth(depth, n),
                }),
                Some(w) => Err(DepthError::Shallow {
                    depth,
                    detail: format!("weight {w} is not reliable; the spec file has too few weights"),
                    suggested: None,
                }),
                None => Err(DepthError::Input(e)),
            },
        }
    }

    fn stable_at(&self, depth: usize, n: Option<usize>, r: &Report) -> bool {
        matches!(self.report_at(depth + STABILITY_MARGIN, n), Ok(deeper) if deeper == *r)
    }

    /// The smallest depth above `depth` whose report is stable.
    pub fn minimal_depth(&self, depth: usize, n: Option<usize>) -> Option<usize> {
        (depth + 1..=depth + SEARCH_LIMIT).find(|&d| matches!(self.report_at(d, n), Ok(r) if self.stable_at(d, n, &r)))
    }
}
