//! Laurent polynomial sections `Q = (Σ c_m χ^m)^k` of `dL`.

use num_complex::Complex;
use num_traits::Zero;

use crate::divisor::SectionPolytope;
use crate::lattice::LatticeVector;
use crate::scalar::{ExactInt, Real};

use super::grid::{Sample, TorusPoint};
use super::LelongError;

/// `Q = (Σ c_m χ^m)^power` with every `m ∈ base_degree · P`, so that `Q` is
/// a section of degree `base_degree · power`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySection<F> {
    base_degree: u32,
    power: u32,
    exponents: Vec<Vec<i64>>,
    coeffs: Vec<Complex<F>>,
}

impl<F: Real> PolySection<F> {
    /// Zero coefficients are dropped and repeated exponents merged.
    pub fn new<I: ExactInt>(
        p: &SectionPolytope<I>,
        degree: u32,
        terms: Vec<(LatticeVector<I>, Complex<F>)>,
    ) -> Result<Self, LelongError> {
        let d = I::from_u32(degree).expect("degree fits the integer type");
        let mut merged: Vec<(Vec<i64>, Complex<F>)> = Vec::new();
        for (m, c) in terms {
            if !p.contains_dilate(&m, &d) {
                return Err(LelongError::ExponentOutsidePolytope {
                    exponent: m.to_string(),
                    degree,
                });
            }
            let key: Vec<i64> = m
                .coords()
                .iter()
                .map(|v| v.to_i64().ok_or(LelongError::ExponentOverflow))
                .collect::<Result<_, _>>()?;
            match merged.iter_mut().find(|(k, _)| *k == key) {
                Some((_, acc)) => *acc = *acc + c,
                None => merged.push((key, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        if merged.is_empty() {
            return Err(LelongError::ZeroSection);
        }
        let (exponents, coeffs) = merged.into_iter().unzip();
        Ok(Self {
            base_degree: degree,
            power: 1,
            exponents,
            coeffs,
        })
    }

    /// `c · χ^m`.
    pub fn monomial<I: ExactInt>(
        p: &SectionPolytope<I>,
        degree: u32,
        m: LatticeVector<I>,
        c: Complex<F>,
    ) -> Result<Self, LelongError> {
        Self::new(p, degree, vec![(m, c)])
    }

    /// `Q^k`; stored as a power, never expanded.
    pub fn pow(mut self, k: u32) -> Self {
        assert!(k >= 1, "power must be positive");
        self.power *= k;
        self
    }

    pub fn degree(&self) -> u32 {
        self.base_degree * self.power
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Complex<F>)> {
        self.exponents.iter().map(|e| e.as_slice()).zip(&self.coeffs)
    }

    /// `Q(z)` by direct evaluation.
    pub fn eval(&self, z: &TorusPoint<F>) -> Complex<F> {
        let base = self
            .exponents
            .iter()
            .zip(&self.coeffs)
            .fold(Complex::zero(), |acc, (m, c)| {
                let mono = m
                    .iter()
                    .zip(z.coords())
                    .fold(Complex::new(F::one(), F::zero()), |t, (&e, zk)| {
                        t * zk.powi(e as i32)
                    });
                acc + c * mono
            });
        base.powi(self.power as i32)
    }

    /// `log|Q(z)|` in log space: the largest term modulus is factored out
    /// before summing, so nothing overflows for large `|log|z||`. Returns
    /// `-∞` where `Q` vanishes.
    pub fn log_abs(&self, s: &Sample<F>) -> F {
        let x = s.log.coords();
        let theta = &s.phase;
        let logs: Vec<F> = self
            .exponents
            .iter()
            .map(|m| m.iter().zip(x).fold(F::zero(), |a, (&e, &xk)| a + F::lit(e as f64) * xk))
            .collect();
        let shift = logs
            .iter()
            .zip(&self.coeffs)
            .map(|(&l, c)| l + c.norm().ln())
            .fold(F::neg_infinity(), F::max);
        let sum = self
            .exponents
            .iter()
            .zip(&self.coeffs)
            .zip(&logs)
            .fold(Complex::<F>::zero(), |acc, ((m, c), &l)| {
                let angle = m
                    .iter()
                    .zip(theta)
                    .fold(F::zero(), |a, (&e, &t)| a + F::lit(e as f64) * t);
                acc + c * Complex::from_polar((l - shift).exp(), angle)
            });
        let r = sum.norm();
        if r.is_zero() {
            return F::neg_infinity();
        }
        F::lit(self.power as f64) * (shift + r.ln())
    }

    /// `(1/deg Q) log|Q(z)|`.
    pub fn log_weight(&self, s: &Sample<F>) -> F {
        self.log_abs(s) / F::lit(self.degree() as f64)
    }
}

/// `(1/deg Q) log|Q(z)|`.
pub fn section_log_weight<F: Real>(q: &PolySection<F>, s: &Sample<F>) -> F {
    q.log_weight(s)
}

/// `Q(z)`.
pub fn section_eval<F: Real>(q: &PolySection<F>, z: &TorusPoint<F>) -> Complex<F> {
    q.eval(z)
}
