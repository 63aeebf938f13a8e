//! Log-weights on the torus: the Monge–Ampère support weight ψ and the
//! Fubini–Study type weight λ of a section polytope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::divisor::SectionPolytope;
use crate::scalar::{int_to_real, ExactInt, Real};
use crate::sections::lattice_points;

use super::grid::{LogPoint, Sample};
use super::LelongError;

/// A function `u = log H` sampled on the torus. `f64::NEG_INFINITY` is a
/// legitimate value (zeros of sections).
pub trait LogWeight<F: Real>: Sync {
    fn log_eval(&self, s: &Sample<F>) -> F;
}

impl<F: Real, W: Fn(&Sample<F>) -> F + Sync> LogWeight<F> for W {
    fn log_eval(&self, s: &Sample<F>) -> F {
        self(s)
    }
}

/// Float and exact views of a bounded section polytope `P`.
#[derive(Debug, Clone)]
pub struct ToricWeights<F> {
    dim: usize,
    vertices_exact: Vec<Vec<BigInt>>,
    vertices: Vec<Vec<F>>,
    points: Vec<Vec<F>>,
}

impl<F: Real> ToricWeights<F> {
    pub fn new<I: ExactInt>(p: &SectionPolytope<I>) -> Result<Self, LelongError> {
        let verts = p.vertices().map_err(|_| LelongError::VerticesUnavailable)?;
        if verts.is_empty() {
            return Err(LelongError::VerticesUnavailable);
        }
        let vertices_exact: Vec<Vec<BigInt>> = verts
            .iter()
            .map(|v| v.coords().iter().map(|c| c.to_bigint().expect("BigInt")).collect())
            .collect();
        let vertices = verts
            .iter()
            .map(|v| v.coords().iter().map(int_to_real).collect())
            .collect();
        let points = lattice_points(p, 1)?
            .iter()
            .map(|m| m.coords().iter().map(int_to_real).collect())
            .collect();
        Ok(Self {
            dim: p.ambient_dim(),
            vertices_exact,
            vertices,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    /// `P ∩ M`, lexicographic.
    pub fn lattice_points(&self) -> &[Vec<F>] {
        &self.points
    }

    /// `ψ(x) = max_{m ∈ vert P} ⟨m, x⟩`. Each dot product is exact in the
    /// rationals and rounded once.
    pub fn psi(&self, x: &LogPoint<F>) -> F {
        if x.coords().iter().any(|c| !c.is_finite()) {
            return self.psi_float(x);
        }
        let xs: Vec<BigRational> = x
            .coords()
            .iter()
            .map(|c| BigRational::from_float(c.to_f64().unwrap_or(0.0)).unwrap_or_else(BigRational::zero))
            .collect();
        let best = self
            .vertices_exact
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&xs)
                    .fold(BigRational::zero(), |acc, (m, c)| acc + c * m)
            })
            .max()
            .expect("non-empty vertex set");
        F::lit(best.to_f64().unwrap_or(f64::NAN))
    }

    fn psi_float(&self, x: &LogPoint<F>) -> F {
        self.vertices
            .iter()
            .map(|v| dot(v, x.coords()))
            .fold(F::neg_infinity(), F::max)
    }

    /// `λ(x) = ½ log Σ_{m ∈ P∩M} exp(2⟨m, x⟩)`, evaluated with the maximum
    /// factored out.
    pub fn lambda(&self, x: &LogPoint<F>) -> F {
        let two = F::lit(2.0);
        let exps: Vec<F> = self.points.iter().map(|m| two * dot(m, x.coords())).collect();
        let s = exps.iter().copied().fold(F::neg_infinity(), F::max);
        let sum: F = exps.iter().map(|&e| (e - s).exp()).sum();
        (s + sum.ln()) / two
    }

    pub fn psi_weight(&self) -> impl LogWeight<F> + '_ {
        move |s: &Sample<F>| self.psi(&s.log)
    }

    pub fn lambda_weight(&self) -> impl LogWeight<F> + '_ {
        move |s: &Sample<F>| self.lambda(&s.log)
    }
}

pub(crate) fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&p, &q)| acc + p * q)
}

/// `ψ_P(x)` for a one-off evaluation.
pub fn psi_eval<I: ExactInt, F: Real>(p: &SectionPolytope<I>, x: &LogPoint<F>) -> Result<F, LelongError> {
    Ok(ToricWeights::new(p)?.psi(x))
}

/// `λ_P(x)` for a one-off evaluation.
pub fn lambda_eval<I: ExactInt, F: Real>(p: &SectionPolytope<I>, x: &LogPoint<F>) -> Result<F, LelongError> {
    Ok(ToricWeights::new(p)?.lambda(x))
}
