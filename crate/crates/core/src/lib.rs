//! Exact toric geometry of smooth complete fans (lattices, fans, torus
//! invariant divisors, section polytopes, the graded section ring) and a
//! floating-point lab for the associated plurisubharmonic weights.
//!
//! Everything is generic over the scalar: `I: ExactInt` on the polyhedral
//! side and `F: Real` on the numerical side. The aliases below fix
//! `BigInt` and `f64`.

pub mod divisor;
pub mod fan;
pub mod lattice;
pub mod lelong;
pub mod scalar;
pub mod sections;

pub use num_bigint::BigInt;

pub use divisor::{cartier_data, DivisorError, StrictnessAudit};
pub use fan::{Cone, FacetAdjacency, FanError};
pub use lattice::LatticeError;
pub use lelong::{GridSpec, LelongError, LogWeight};
pub use scalar::{ExactInt, Real};
pub use sections::{lattice_points, section_count_table, GradedMonomial, SectionError};

pub type LatticeVector = lattice::LatticeVector<BigInt>;
pub type RationalVector = lattice::RationalVector<BigInt>;
pub type IntMatrix = lattice::IntMatrix<BigInt>;
pub type Rational = scalar::Rational<BigInt>;
pub type Fan = fan::Fan<BigInt>;
pub type TorusDivisor = divisor::TorusDivisor<BigInt>;
pub type SupportFunction = divisor::SupportFunction<BigInt>;
pub type SectionPolytope = divisor::SectionPolytope<BigInt>;
pub type LiftedCone = sections::LiftedCone<BigInt>;
pub type LatticePointCache = sections::LatticePointCache<BigInt>;

pub type TorusPoint = lelong::TorusPoint<f64>;
pub type LogPoint = lelong::LogPoint<f64>;
pub type Sample = lelong::Sample<f64>;
pub type WeightGrid = lelong::WeightGrid<f64>;
pub type ToricWeights = lelong::ToricWeights<f64>;
pub type PolySection = lelong::PolySection<f64>;
