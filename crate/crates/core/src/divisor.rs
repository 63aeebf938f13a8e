//! Torus-invariant divisors, their support functions, and the polytope of
//! sections.
//!
//! Convention: a support function is *convex* when
//! `φ(tu + (1-t)v) >= tφ(u) + (1-t)φ(v)`, i.e. when it is a minimum of
//! linear functions, `φ(u) = min_σ <m_σ, u>`. The growth majorant ψ used by
//! the numerical lab is the opposite, sup-convention, function of the
//! polytope; see [`crate::lelong`].

use std::collections::BTreeSet;


use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice::{
    cross_product, index_subsets, rank_of, IntMatrix, LatticeError, LatticeVector, RationalVector,
};
use crate::scalar::{ExactInt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    CoefficientCount { expected: usize, found: usize },
    #[error("maximal cone {cone} is not unimodular (det = {det})")]
    NotUnimodular { cone: usize, det: String },
    #[error("point {point} lies in no maximal cone")]
    OutsideSupport { point: String },
    #[error("divisor is not basepoint free; Cartier data are not the vertices of P_D")]
    NotBasepointFree,
    #[error("scaling factor must be positive")]
    NonPositiveScale,
    #[error("support functions live on different fans")]
    FanMismatch,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `D = Σ a_i D_i`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusDivisor<I: ExactInt> {
    coeffs: Vec<I>,
}

impl<I: ExactInt> TorusDivisor<I> {
    pub fn new(coeffs: Vec<I>) -> Self {
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| I::from_i64_exact(c)).collect())
    }

    pub fn zero(rays: usize) -> Self {
        Self::new(vec![I::zero(); rays])
    }

    pub fn coeffs(&self) -> &[I] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &I) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

/// The support function `φ_D`, linear on each maximal cone with
/// `φ_D(v_i) = -a_i`.
#[derive(Debug, Clone)]
pub struct SupportFunction<I: ExactInt> {
    fan: Fan<I>,
    divisor: TorusDivisor<I>,
    cartier: Vec<LatticeVector<I>>,
}

/// Computes the Cartier data `m_σ` with `<m_σ, v_i> = -a_i` for every
/// generator `v_i` of every maximal cone `σ`.
pub fn cartier_data<I: ExactInt>(
    fan: &Fan<I>,
    divisor: &TorusDivisor<I>,
) -> Result<SupportFunction<I>, DivisorError> {
    if divisor.len() != fan.rays().len() {
        return Err(DivisorError::CoefficientCount {
            expected: fan.rays().len(),
            found: divisor.len(),
        });
    }
    let mut cartier = Vec::with_capacity(fan.max_cones().len());
    for (c, cone) in fan.max_cones().iter().enumerate() {
        let m = IntMatrix::from_rows(&fan.cone_generators(c))?;
        let rhs = LatticeVector::new(
            cone.generators()
                .iter()
                .map(|&g| -divisor.coeffs()[g].clone())
                .collect(),
        );
        let m_sigma = m.solve_integer(&rhs).map_err(|e| match e {
            LatticeError::NotUnimodular { det } => DivisorError::NotUnimodular { cone: c, det },
            other => DivisorError::Lattice(other),
        })?;
        cartier.push(m_sigma);
    }
    Ok(SupportFunction {
        fan: fan.clone(),
        divisor: divisor.clone(),
        cartier,
    })
}

/// Outcome of the two strictness certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictnessAudit {
    /// `<m_σ, v_i> > -a_i` for every maximal cone and every ray outside it.
    pub outside_ray_strict: bool,
    /// Convex, and the Cartier data are pairwise distinct.
    pub convex_and_distinct: bool,
}

impl StrictnessAudit {
    pub fn agree(&self) -> bool {
        self.outside_ray_strict == self.convex_and_distinct
    }
}

impl<I: ExactInt> SupportFunction<I> {
    pub fn fan(&self) -> &Fan<I> {
        &self.fan
    }

    pub fn divisor(&self) -> &TorusDivisor<I> {
        &self.divisor
    }

    /// `m_σ` for each maximal cone, indexed like `fan().max_cones()`.
    pub fn cartier(&self) -> &[LatticeVector<I>] {
        &self.cartier
    }

    pub fn cartier_for(&self, cone: usize) -> &LatticeVector<I> {
        &self.cartier[cone]
    }

    /// `φ_D(u) = <m_σ, u>` for any maximal cone `σ` containing `u`.
    pub fn support_value(&self, u: &RationalVector<I>) -> Result<Rational<I>, DivisorError> {
        match self.fan.locate(u)? {
            Some(c) => Ok(self.cartier[c].dot_rational(u)),
            None => Err(DivisorError::OutsideSupport {
                point: format!("{u:?}"),
            }),
        }
    }

    /// `min_σ <m_σ, u>`; equals `support_value` exactly when φ is convex.
    pub fn min_over_cartier(&self, u: &RationalVector<I>) -> Rational<I> {
        self.cartier
            .iter()
            .map(|m| m.dot_rational(u))
            .min()
            .expect("fan has at least one maximal cone")
    }

    /// Slack `<m_σ, v_i> + a_i` for every maximal cone and every ray outside it.
    fn outside_ray_slacks(&self) -> impl Iterator<Item = I> + '_ {
        self.fan.max_cones().iter().enumerate().flat_map(move |(c, cone)| {
            (0..self.fan.rays().len())
                .filter(move |i| !cone.contains_ray(*i))
                .map(move |i| self.cartier[c].dot(self.fan.ray(i)) + self.divisor.coeffs()[i].clone())
        })
    }

    /// Every `m_σ` lies in `P_D`: `<m_σ, v_i> >= -a_i` for all rays.
    pub fn is_convex(&self) -> bool {
        self.outside_ray_slacks().all(|s| !s.is_negative())
    }

    /// Convex, with strict inequality for every ray outside each cone.
    pub fn is_strictly_convex(&self) -> bool {
        self.outside_ray_slacks().all(|s| s.is_positive())
    }

    pub fn is_basepoint_free(&self) -> bool {
        self.is_convex()
    }

    pub fn is_ample(&self) -> bool {
        self.is_strictly_convex()
    }

    /// On a smooth complete fan ample and very ample coincide. The
    /// chart-semigroup certificate lives in
    /// [`crate::sections::certify_very_ample`].
    pub fn is_very_ample(&self) -> bool {
        self.fan.is_smooth() && self.is_ample()
    }

    pub fn cartier_data_distinct(&self) -> bool {
        let set: BTreeSet<&LatticeVector<I>> = self.cartier.iter().collect();
        set.len() == self.cartier.len()
    }

    pub fn strictness_audit(&self) -> StrictnessAudit {
        StrictnessAudit {
            outside_ray_strict: self.is_strictly_convex(),
            convex_and_distinct: self.is_convex() && self.cartier_data_distinct(),
        }
    }

    /// Support function of `kD`.
    pub fn scaled(&self, k: &I) -> Result<Self, DivisorError> {
        if !k.is_positive() {
            return Err(DivisorError::NonPositiveScale);
        }
        Ok(Self {
            fan: self.fan.clone(),
            divisor: self.divisor.scale(k),
            cartier: self.cartier.iter().map(|m| m.scale(k)).collect(),
        })
    }

    /// Support function of `D + D'` on the same fan.
    pub fn sum(&self, other: &Self) -> Result<Self, DivisorError> {
        if self.fan.rays() != other.fan.rays() || self.fan.max_cones() != other.fan.max_cones() {
            return Err(DivisorError::FanMismatch);
        }
        Ok(Self {
            fan: self.fan.clone(),
            divisor: self.divisor.add(&other.divisor),
            cartier: self
                .cartier
                .iter()
                .zip(&other.cartier)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `P_D = {m : <m, v_i> >= -a_i}`. Vertices are the distinct Cartier
    /// data when φ is convex; otherwise only the inequalities are usable
    /// through [`SectionPolytope::vertices`].
    pub fn polytope(&self) -> SectionPolytope<I> {
        let normals = self.fan.rays().to_vec();
        let rhs = self.divisor.coeffs().iter().map(|a| -a.clone()).collect();
        let vertices = self.is_convex().then(|| {
            let set: BTreeSet<LatticeVector<I>> = self.cartier.iter().cloned().collect();
            set.into_iter().collect::<Vec<_>>()
        });
        SectionPolytope::from_parts(self.fan.dim(), normals, rhs, vertices)
    }
}

/// `{m : <m, v_i> >= b_i}` with optional lattice vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPolytope<I: ExactInt> {
    ambient: usize,
    normals: Vec<LatticeVector<I>>,
    rhs: Vec<I>,
    vertices: Option<Vec<LatticeVector<I>>>,
    dim: Option<usize>,
    bounded: bool,
}

impl<I: ExactInt> SectionPolytope<I> {
    fn from_parts(
        ambient: usize,
        normals: Vec<LatticeVector<I>>,
        rhs: Vec<I>,
        vertices: Option<Vec<LatticeVector<I>>>,
    ) -> Self {
        let mut p = Self {
            ambient,
            normals,
            rhs,
            vertices,
            dim: None,
            bounded: false,
        };
        p.bounded = p.recession_cone_is_trivial();
        p.dim = match &p.vertices {
            Some(v) => affine_dim(&v.iter().map(LatticeVector::to_rational).collect::<Vec<_>>()),
            None if p.bounded => affine_dim(&p.rational_vertices()),
            None => None,
        };
        p
    }

    /// Builds a polytope from raw inequalities `<m, normal_i> >= rhs_i`.
    /// Vertices are not attached; use [`Self::rational_vertices`].
    pub fn from_inequalities(ambient: usize, normals: Vec<LatticeVector<I>>, rhs: Vec<I>) -> Self {
        Self::from_parts(ambient, normals, rhs, None)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Affine dimension; `None` for the empty polytope (or unbounded input).
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Inequalities as `(normal, rhs)` pairs meaning `<m, normal> >= rhs`.
    pub fn inequalities(&self) -> impl Iterator<Item = (&LatticeVector<I>, &I)> {
        self.normals.iter().zip(&self.rhs)
    }

    /// Lattice vertices, available when the source divisor is basepoint free.
    pub fn vertices(&self) -> Result<&[LatticeVector<I>], DivisorError> {
        self.vertices.as_deref().ok_or(DivisorError::NotBasepointFree)
    }

    pub fn has_vertices(&self) -> bool {
        self.vertices.is_some()
    }

    /// `m ∈ dP`.
    pub fn contains_dilate(&self, m: &LatticeVector<I>, d: &I) -> bool {
        self.inequalities()
            .all(|(n, b)| m.dot(n) >= b.clone() * d.clone())
    }

    pub fn contains(&self, m: &LatticeVector<I>) -> bool {
        self.contains_dilate(m, &I::one())
    }

    pub fn contains_rational(&self, m: &RationalVector<I>) -> bool {
        self.inequalities()
            .all(|(n, b)| n.dot_rational(m) >= Rational::from_integer(b.clone()))
    }

    /// `kP` for `k >= 0`.
    pub fn dilate(&self, k: &I) -> Self {
        Self {
            ambient: self.ambient,
            normals: self.normals.clone(),
            rhs: self.rhs.iter().map(|b| b.clone() * k.clone()).collect(),
            vertices: self.vertices.as_ref().map(|vs| {
                let set: BTreeSet<_> = vs.iter().map(|v| v.scale(k)).collect();
                set.into_iter().collect()
            }),
            dim: if k.is_zero() { self.dim.map(|_| 0) } else { self.dim },
            bounded: self.bounded,
        }
    }

    /// Vertices computed from the inequalities alone: every feasible
    /// solution of `ambient` linearly independent tight constraints. Sorted,
    /// deduplicated. Empty for an empty or unbounded-without-vertices set.
    pub fn rational_vertices(&self) -> Vec<RationalVector<I>> {
        let n = self.ambient;
        if n == 0 {
            return vec![RationalVector::zeros(0)];
        }
        let mut out = BTreeSet::new();
        for subset in index_subsets(self.normals.len(), n) {
            let rows: Vec<_> = subset.iter().map(|&k| self.normals[k].clone()).collect();
            let Ok(m) = IntMatrix::from_rows(&rows) else { continue };
            if m.det().map_or(true, |d| d.is_zero()) {
                continue;
            }
            let b = LatticeVector::new(subset.iter().map(|&k| self.rhs[k].clone()).collect());
            let Ok(x) = m.solve_rational(&b.to_rational()) else { continue };
            if self.contains_rational(&x) {
                out.insert(OrdRational(x));
            }
        }
        out.into_iter().map(|o| o.0).collect()
    }

    /// Integer box `[lo, hi]` containing `dP`, from the vertex list (or the
    /// rational vertices when the lattice list is unavailable). `None` if
    /// `dP` is empty or unbounded.
    pub fn bounding_box(&self, d: &I) -> Option<(Vec<I>, Vec<I>)> {
        if !self.bounded {
            return None;
        }
        if d.is_zero() {
            return Some((vec![I::zero(); self.ambient], vec![I::zero(); self.ambient]));
        }
        let pts: Vec<RationalVector<I>> = match &self.vertices {
            Some(vs) => vs.iter().map(LatticeVector::to_rational).collect(),
            None => self.rational_vertices(),
        };
        if pts.is_empty() {
            return None;
        }
        let dr = Rational::from_integer(d.clone());
        let mut lo = Vec::with_capacity(self.ambient);
        let mut hi = Vec::with_capacity(self.ambient);
        for k in 0..self.ambient {
            let vals = pts.iter().map(|p| p.coords()[k].clone() * dr.clone());
            let (mn, mx) = vals.fold((None::<Rational<I>>, None::<Rational<I>>), |(mn, mx), v| {
                (
                    Some(mn.map_or(v.clone(), |m| m.min(v.clone()))),
                    Some(mx.map_or(v.clone(), |m| m.max(v))),
                )
            });
            lo.push(crate::lattice::ceil(&mn.expect("nonempty")));
            hi.push(crate::lattice::floor(&mx.expect("nonempty")));
        }
        Some((lo, hi))
    }

    /// Whether `{w : <w, normal_i> >= 0 for all i}` is `{0}`, i.e. whether the
    /// polyhedron (when nonempty) is bounded.
    fn recession_cone_is_trivial(&self) -> bool {
        let n = self.ambient;
        if n == 0 {
            return true;
        }
        if rank_of(&self.normals) < n {
            return false;
        }
        // The recession cone is pointed; it is nonzero iff it has an extreme
        // ray cut out by n-1 independent tight normals.
        for subset in index_subsets(self.normals.len(), n - 1) {
            let picked: Vec<_> = subset.iter().map(|&k| self.normals[k].clone()).collect();
            let Ok(dir) = cross_product(&picked, n) else { continue };
            if dir.is_zero() {
                continue;
            }
            for cand in [dir.clone(), -&dir] {
                if self.normals.iter().all(|v| !v.dot(&cand).is_negative()) {
                    return false;
                }
            }
        }
        true
    }
}

/// Total order wrapper so rational vectors can live in ordered sets.
#[derive(Clone, PartialEq, Eq)]
struct OrdRational<I: ExactInt>(RationalVector<I>);

impl<I: ExactInt> PartialOrd for OrdRational<I> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExactInt> Ord for OrdRational<I> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.coords().cmp(other.0.coords())
    }
}

/// Affine dimension of a finite point set; `None` when empty.
pub fn affine_dim<I: ExactInt>(points: &[RationalVector<I>]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<LatticeVector<I>> = points[1..]
        .iter()
        .map(|p| {
            let d = RationalVector::new(
                p.coords()
                    .iter()
                    .zip(first.coords())
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect(),
            );
            d.clear_denominators().0
        })
        .collect();
    Some(rank_of(&diffs))
}
