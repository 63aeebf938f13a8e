//! Simplicial cones and fans.

use std::collections::BTreeMap;

use num_traits::Signed;
use thiserror::Error;

use crate::lattice::{cross_product, index_subsets, IntMatrix, LatticeError, LatticeVector, RationalVector};
use crate::scalar::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {index} is the zero vector")]
    ZeroRay { index: usize },
    #[error("ray {index} has dimension {found}, expected {expected}")]
    RayDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("rays {first} and {second} span the same ray")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} references ray {ray}, but there are only {count} rays")]
    BadRayIndex { cone: usize, ray: usize, count: usize },
    #[error("cone {cone} repeats ray {ray}")]
    RepeatedGenerator { cone: usize, ray: usize },
    #[error("cone {cone} has {found} generators; maximal cones must have {expected}")]
    NotPure {
        cone: usize,
        expected: usize,
        found: usize,
    },
    #[error("cone {cone} has linearly dependent generators")]
    NotSimplicial { cone: usize },
    #[error("ray {ray} is not used by any maximal cone")]
    UnusedRay { ray: usize },
    #[error("cones {first} and {second} do not meet along a common face")]
    BadIntersection { first: usize, second: usize },
    #[error("fan has no maximal cones")]
    Empty,
    #[error("point has dimension {found}, fan has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A simplicial cone, stored as indices into its fan's ray list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    generators: Vec<usize>,
}

impl Cone {
    pub fn new(generators: Vec<usize>) -> Self {
        Self { generators }
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.generators.contains(&ray)
    }
}

/// A shared or unshared facet of the maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetAdjacency {
    /// Ray indices of the facet, sorted.
    pub facet: Vec<usize>,
    pub first: usize,
    pub second: Option<usize>,
}

/// A pure, simplicial, strongly convex fan in R^n.
#[derive(Clone, Debug)]
pub struct Fan<I: ExactInt> {
    dim: usize,
    rays: Vec<LatticeVector<I>>,
    max_cones: Vec<Cone>,
    /// For each maximal cone, one inward normal per generator: `normals[c][j]`
    /// vanishes on every generator but the `j`-th and is positive on it.
    normals: Vec<Vec<LatticeVector<I>>>,
}

impl<I: ExactInt> Fan<I> {
    /// Validates and builds a fan. Rays are reduced to primitive generators.
    pub fn new(
        dim: usize,
        rays: Vec<LatticeVector<I>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        if max_cones.is_empty() {
            return Err(FanError::Empty);
        }
        let mut prim = Vec::with_capacity(rays.len());
        for (index, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(FanError::RayDimension {
                    index,
                    expected: dim,
                    found: r.dim(),
                });
            }
            let p = r.primitive_reduce().map_err(|_| FanError::ZeroRay { index })?;
            if let Some(first) = prim.iter().position(|q| *q == p) {
                return Err(FanError::DuplicateRay {
                    first,
                    second: index,
                });
            }
            prim.push(p);
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        let mut normals = Vec::with_capacity(max_cones.len());
        let mut used = vec![false; prim.len()];
        for (ci, gens) in max_cones.into_iter().enumerate() {
            for (k, &g) in gens.iter().enumerate() {
                if g >= prim.len() {
                    return Err(FanError::BadRayIndex {
                        cone: ci,
                        ray: g,
                        count: prim.len(),
                    });
                }
                if gens[..k].contains(&g) {
                    return Err(FanError::RepeatedGenerator { cone: ci, ray: g });
                }
                used[g] = true;
            }
            if gens.len() != dim {
                return Err(FanError::NotPure {
                    cone: ci,
                    expected: dim,
                    found: gens.len(),
                });
            }
            let m = IntMatrix::from_rows(&gens.iter().map(|&g| prim[g].clone()).collect::<Vec<_>>())?;
            if m.det()?.is_zero() {
                return Err(FanError::NotSimplicial { cone: ci });
            }
            normals.push(inward_normals(&gens.iter().map(|&g| prim[g].clone()).collect::<Vec<_>>(), dim)?);
            cones.push(Cone::new(gens));
        }
        if let Some(ray) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay { ray });
        }

        let fan = Self {
            dim,
            rays: prim,
            max_cones: cones,
            normals,
        };
        for a in 0..fan.max_cones.len() {
            for b in a + 1..fan.max_cones.len() {
                if same_set(fan.max_cones[a].generators(), fan.max_cones[b].generators())
                    || !fan.meet_in_common_face(a, b)?
                {
                    return Err(FanError::BadIntersection {
                        first: a,
                        second: b,
                    });
                }
            }
        }
        Ok(fan)
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self, FanError> {
        Self::new(
            dim,
            rays.iter().map(|r| LatticeVector::from_i64s(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector<I>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector<I> {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn cone(&self, c: usize) -> &Cone {
        &self.max_cones[c]
    }

    /// Generator vectors of maximal cone `c`, in the cone's order.
    pub fn cone_generators(&self, c: usize) -> Vec<LatticeVector<I>> {
        self.max_cones[c]
            .generators()
            .iter()
            .map(|&g| self.rays[g].clone())
            .collect()
    }

    /// Inward facet normals of maximal cone `c`, aligned with its generators.
    pub fn cone_normals(&self, c: usize) -> &[LatticeVector<I>] {
        &self.normals[c]
    }

    /// Whether `u` is a nonnegative combination of the generators of
    /// maximal cone `c`.
    pub fn cone_contains(&self, c: usize, u: &RationalVector<I>) -> Result<bool, FanError> {
        if u.dim() != self.dim {
            return Err(FanError::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        Ok(self.normals[c]
            .iter()
            .all(|n| !n.dot_rational(u).is_negative()))
    }

    /// Coefficients of `u` in the generator basis of maximal cone `c`.
    pub fn cone_coordinates(
        &self,
        c: usize,
        u: &RationalVector<I>,
    ) -> Result<RationalVector<I>, FanError> {
        let m = IntMatrix::from_rows(&self.cone_generators(c))?.transpose();
        Ok(m.solve_rational(u)?)
    }

    /// First maximal cone containing `u`, if any.
    pub fn locate(&self, u: &RationalVector<I>) -> Result<Option<usize>, FanError> {
        for c in 0..self.max_cones.len() {
            if self.cone_contains(c, u)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Every maximal cone's generator matrix is unimodular.
    pub fn is_smooth(&self) -> bool {
        (0..self.max_cones.len()).all(|c| self.cone_det(c).abs().is_one())
    }

    pub fn cone_det(&self, c: usize) -> I {
        IntMatrix::from_rows(&self.cone_generators(c))
            .and_then(|m| m.det())
            .expect("validated cone is square")
    }

    /// Maximal cones that are not unimodular.
    pub fn singular_cones(&self) -> Vec<usize> {
        (0..self.max_cones.len())
            .filter(|&c| !self.cone_det(c).abs().is_one())
            .collect()
    }

    /// Facets of maximal cones with the cones that contain them, in order of
    /// first appearance.
    pub fn facet_pairs(&self) -> Vec<FacetAdjacency> {
        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut out: Vec<FacetAdjacency> = Vec::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.dim() {
                let mut facet: Vec<usize> = cone
                    .generators()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &g)| g)
                    .collect();
                facet.sort_unstable();
                match seen.get(&facet) {
                    Some(&slot) => {
                        // A valid fan never has a third cone on one facet;
                        // is_complete still sees it through unmatched counts.
                        if out[slot].second.is_none() {
                            out[slot].second = Some(ci);
                        }
                    }
                    None => {
                        seen.insert(facet.clone(), out.len());
                        out.push(FacetAdjacency {
                            facet,
                            first: ci,
                            second: None,
                        });
                    }
                }
            }
        }
        out
    }

    /// Facets bordering only one maximal cone.
    pub fn unmatched_facets(&self) -> Vec<FacetAdjacency> {
        self.facet_pairs()
            .into_iter()
            .filter(|f| f.second.is_none())
            .collect()
    }

    /// Every facet is shared by exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        self.facet_pairs().iter().all(|f| f.second.is_some())
    }

    /// Checks that cones `a` and `b` intersect in the cone spanned by their
    /// common generators. The intersection is pointed, so it suffices that
    /// every extreme ray of it lies in that common face. Extreme-ray
    /// candidates come from all (n-1)-subsets of the 2n facet normals.
    fn meet_in_common_face(&self, a: usize, b: usize) -> Result<bool, FanError> {
        let ca = &self.max_cones[a];
        let cb = &self.max_cones[b];
        let all: Vec<&LatticeVector<I>> = self.normals[a].iter().chain(&self.normals[b]).collect();
        // Normals for generators outside the common face; those must vanish.
        let off_face: Vec<&LatticeVector<I>> = ca
            .generators()
            .iter()
            .zip(&self.normals[a])
            .filter(|(g, _)| !cb.contains_ray(**g))
            .map(|(_, n)| n)
            .chain(
                cb.generators()
                    .iter()
                    .zip(&self.normals[b])
                    .filter(|(g, _)| !ca.contains_ray(**g))
                    .map(|(_, n)| n),
            )
            .collect();
        for subset in index_subsets(all.len(), self.dim - 1) {
            let picked: Vec<LatticeVector<I>> = subset.iter().map(|&k| all[k].clone()).collect();
            let dir = cross_product(&picked, self.dim)?;
            if dir.is_zero() {
                continue;
            }
            for cand in [dir.clone(), -&dir] {
                let feasible = all.iter().all(|n| !n.dot(&cand).is_negative());
                if feasible && off_face.iter().any(|n| !n.dot(&cand).is_zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn same_set(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().all(|g| b.contains(g))
}

/// Inward normals of the simplicial cone on `gens`: the `j`-th is
/// orthogonal to all generators but the `j`-th and positive on it.
fn inward_normals<I: ExactInt>(
    gens: &[LatticeVector<I>],
    dim: usize,
) -> Result<Vec<LatticeVector<I>>, LatticeError> {
    (0..gens.len())
        .map(|j| {
            let others: Vec<_> = gens
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, g)| g.clone())
                .collect();
            let n = cross_product(&others, dim)?;
            let n = if n.dot(&gens[j]).is_negative() { -&n } else { n };
            Ok(n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type F = Fan<BigInt>;
    type Q = RationalVector<BigInt>;

    fn p2() -> F {
        F::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
    }

    fn p1xp1() -> F {
        F::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap()
    }

    #[test]
    fn cone_contains_examples() {
        let quadrant = F::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert!(quadrant.cone_contains(0, &Q::from_fractions(&[(2, 1), (3, 1)])).unwrap());
        assert!(!quadrant.cone_contains(0, &Q::from_fractions(&[(-1, 1), (0, 1)])).unwrap());
        let f = p2();
        // cone on (0,1), (-1,-1): (-1,0) = 1*(0,1) + 1*(-1,-1)
        assert!(f.cone_contains(1, &Q::from_fractions(&[(-1, 1), (0, 1)])).unwrap());
        let coords = f.cone_coordinates(1, &Q::from_fractions(&[(-1, 1), (0, 1)])).unwrap();
        assert_eq!(coords, Q::from_fractions(&[(1, 1), (1, 1)]));
        assert!(matches!(
            f.cone_contains(0, &Q::from_fractions(&[(1, 1)])),
            Err(FanError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn smoothness() {
        assert!(p2().is_smooth());
        let p1 = F::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        assert!(p1.is_smooth());
        let singular = F::from_i64(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]).unwrap();
        assert!(!singular.is_smooth());
        assert_eq!(singular.singular_cones(), vec![0]);
    }

    #[test]
    fn completeness_and_facets() {
        assert!(p2().is_complete());
        assert_eq!(p2().facet_pairs().len(), 3);
        assert!(p2().facet_pairs().iter().all(|f| f.second.is_some()));

        let partial = F::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        assert!(!partial.is_complete());
        assert_eq!(partial.unmatched_facets().len(), 2);

        assert!(p1xp1().is_complete());
        assert_eq!(p1xp1().facet_pairs().len(), 4);

        let quadrant = F::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        let pairs = quadrant.facet_pairs();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|f| f.second.is_none()));

        let p1 = F::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        assert!(p1.is_complete());
        let half = F::from_i64(1, &[&[1]], &[&[0]]).unwrap();
        assert!(!half.is_complete());
    }

    #[test]
    fn rejects_invalid_fans() {
        // overlapping cones
        let err = F::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[-1, 2]], &[&[0, 1], &[2, 3]]);
        assert!(matches!(err, Err(FanError::BadIntersection { .. })));
        // same cone twice with different generator order also overlaps
        let err = F::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]);
        assert!(matches!(err, Err(FanError::BadIntersection { .. })));
        let err = F::from_i64(2, &[&[1, 0], &[2, 0]], &[&[0, 1]]);
        assert!(matches!(err, Err(FanError::DuplicateRay { .. })));
        let err = F::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1]]);
        assert!(matches!(err, Err(FanError::UnusedRay { ray: 2 })));
        let err = F::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0]]);
        assert!(matches!(err, Err(FanError::NotPure { .. })));
        let err = F::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]);
        assert!(matches!(err, Err(FanError::NotSimplicial { .. })));
        let err = F::from_i64(2, &[&[0, 0], &[0, 1]], &[&[0, 1]]);
        assert!(matches!(err, Err(FanError::ZeroRay { index: 0 })));
    }

    #[test]
    fn crossing_cones_in_three_dimensions_are_rejected() {
        // Two cones whose generators avoid each other but whose interiors cross.
        let err = F::from_i64(
            3,
            &[&[0, 4, 1], &[-4, -2, 1], &[4, -2, 1], &[0, -4, 1], &[-4, 2, 1], &[4, 2, 1]],
            &[&[0, 1, 2], &[3, 4, 5]],
        );
        assert!(matches!(err, Err(FanError::BadIntersection { .. })), "{err:?}");
    }

    #[test]
    fn rays_are_normalized() {
        let f = F::from_i64(1, &[&[3], &[-2]], &[&[0], &[1]]).unwrap();
        assert_eq!(f.ray(0), &LatticeVector::from_i64s(&[1]));
        assert_eq!(f.ray(1), &LatticeVector::from_i64s(&[-1]));
        assert!(f.ray(0).is_primitive());
    }
}
