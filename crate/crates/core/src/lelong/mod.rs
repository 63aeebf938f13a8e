//! Numerical lab for plurisubharmonic weights on the torus: the support
//! weight ψ, Fubini–Study type weights, log-space section evaluation,
//! growth tests, envelope reconstruction and limsup experiments.
//!
//! Grid work is data-parallel; every parallel map preserves sample order
//! and every reduction is either sequential or an exact max, so results
//! do not depend on the thread count.

use thiserror::Error;

use crate::sections::SectionError;

mod experiments;
mod grid;
mod section;
mod weights;

pub use experiments::{
    chern_convergence, direction_net_sequence, envelope_reconstruct, growth_check, limsup_weight,
    positive_direction_net, vertex_monomial_sequence, ConvergenceRow, EnvelopeConfig, EnvelopeResult,
    GrowthConfig, GrowthReport, LimsupResult, SearchFamilies,
};
pub use grid::{GridSpec, LogPoint, Sample, TorusPoint, WeightGrid};
pub use section::{section_eval, section_log_weight, PolySection};
pub use weights::{lambda_eval, psi_eval, LogWeight, ToricWeights};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LelongError {
    #[error("torus coordinate {index} is zero")]
    ZeroCoordinate { index: usize },
    #[error("section polytope has no vertices (divisor not basepoint free or polytope unbounded)")]
    VerticesUnavailable,
    #[error("exponent {exponent} is not in {degree}P")]
    ExponentOutsidePolytope { exponent: String, degree: u32 },
    #[error("exponent does not fit in i64")]
    ExponentOverflow,
    #[error("section is identically zero")]
    ZeroSection,
    #[error("no candidate section admits a finite scaling below H")]
    EmptyFamily,
    #[error("growth test inconclusive; sups by radius: {sups:?}")]
    Inconclusive { sups: Vec<(f64, f64)> },
    #[error("Q_{j} has degree {degree} > {j}")]
    DegreeExceedsIndex { j: usize, degree: u32 },
    #[error(transparent)]
    Section(#[from] SectionError),
}
