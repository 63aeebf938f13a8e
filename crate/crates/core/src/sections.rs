//! Monomial bases of `Γ(X, dL)`, the lifted cone `C_φ` and its dual-cone
//! semigroup (the graded section ring), and chart semigroups at vertices.
//!
//! Orientation of `C_φ`: we use the region on or below the graph of φ,
//! generated by `(0, …, 0, -1)` and `(v_i, -a_i)`. For a convex φ (a minimum
//! of linear functions) this is a convex cone whose rays are the
//! `(v_i, -a_i)`. A dual lattice point `(m, t)` has degree `d = -t`, and the
//! degree-`d` slice of the dual semigroup is exactly `dP_D ∩ M`;
//! [`graded_slice`] checks that bijection on every call.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, RwLock};

use num_traits::Signed;
use thiserror::Error;

use crate::divisor::{DivisorError, SectionPolytope, SupportFunction};
use crate::lattice::{cross_product, index_subsets, rank_of, solve_in_span, IntMatrix, LatticeError, LatticeVector};
use crate::scalar::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("polytope is unbounded; lattice points cannot be enumerated")]
    Unbounded,
    #[error("lifted cone contains a line")]
    NotStronglyConvex,
    #[error("degree {degree}: dual-cone slice has {slice} points but dP has {polytope}")]
    ConventionMismatch {
        degree: u32,
        slice: usize,
        polytope: usize,
    },
    #[error("divisor is not very ample")]
    NotVeryAmple,
    #[error("chart semigroup at cone {cone} misses {witness}")]
    GenerationFailure { cone: usize, witness: String },
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `t_0^d χ^m`, with `m ∈ dP_D ∩ M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedMonomial<I: ExactInt> {
    pub degree: u32,
    pub exponent: LatticeVector<I>,
}

fn int<I: ExactInt>(d: u32) -> I {
    I::from_u32(d).expect("degree fits the integer type")
}

/// All `m ∈ Z^n ∩ dP`, lexicographically ordered.
pub fn lattice_points<I: ExactInt>(
    p: &SectionPolytope<I>,
    d: u32,
) -> Result<Vec<LatticeVector<I>>, SectionError> {
    if !p.is_bounded() {
        return Err(SectionError::Unbounded);
    }
    let dd = int::<I>(d);
    let Some((lo, hi)) = p.bounding_box(&dd) else {
        return Ok(Vec::new());
    };
    Ok(box_points(&lo, &hi)
        .into_iter()
        .filter(|m| p.contains_dilate(m, &dd))
        .collect())
}

/// Integer points of the box `[lo, hi]` in lexicographic order.
fn box_points<I: ExactInt>(lo: &[I], hi: &[I]) -> Vec<LatticeVector<I>> {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(LatticeVector::new(cur.clone()));
        let mut k = cur.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] = cur[k].clone() + I::one();
                cur[k + 1..].clone_from_slice(&lo[k + 1..]);
                break;
            }
        }
    }
}

/// `(d, |dP ∩ M|)` for `d = 0..=d_max`.
pub fn section_count_table<I: ExactInt>(
    p: &SectionPolytope<I>,
    d_max: u32,
) -> Result<Vec<(u32, usize)>, SectionError> {
    (0..=d_max)
        .map(|d| lattice_points(p, d).map(|pts| (d, pts.len())))
        .collect()
}

/// Per-degree memo of [`lattice_points`]; readers share, writers serialize.
#[derive(Debug)]
pub struct LatticePointCache<I: ExactInt> {
    polytope: SectionPolytope<I>,
    slices: RwLock<BTreeMap<u32, Arc<Vec<LatticeVector<I>>>>>,
}

impl<I: ExactInt> LatticePointCache<I> {
    pub fn new(polytope: SectionPolytope<I>) -> Self {
        Self {
            polytope,
            slices: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn polytope(&self) -> &SectionPolytope<I> {
        &self.polytope
    }

    pub fn get(&self, d: u32) -> Result<Arc<Vec<LatticeVector<I>>>, SectionError> {
        if let Some(hit) = self.slices.read().expect("cache lock").get(&d) {
            return Ok(hit.clone());
        }
        let pts = Arc::new(lattice_points(&self.polytope, d)?);
        let mut w = self.slices.write().expect("cache lock");
        Ok(w.entry(d).or_insert(pts).clone())
    }
}

/// `C_φ ⊂ R^{n+1}`: generator 0 is `(0, …, 0, -1)`, generator `i + 1` is
/// `(v_i, -a_i)`.
#[derive(Debug, Clone)]
pub struct LiftedCone<I: ExactInt> {
    dim: usize,
    generators: Vec<LatticeVector<I>>,
    redundant: Vec<bool>,
    source: SectionPolytope<I>,
}

/// A facet of a lifted cone: inward normal and the generators on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedFacet<I: ExactInt> {
    pub normal: LatticeVector<I>,
    pub generators: Vec<usize>,
}

pub fn lifted_cone<I: ExactInt>(phi: &SupportFunction<I>) -> LiftedCone<I> {
    let n = phi.fan().dim();
    let mut generators = Vec::with_capacity(phi.fan().rays().len() + 1);
    generators.push(LatticeVector::zeros(n).extend(-I::one()));
    for (v, a) in phi.fan().rays().iter().zip(phi.divisor().coeffs()) {
        generators.push(v.extend(-a.clone()));
    }
    let redundant = (0..generators.len())
        .map(|k| {
            let others: Vec<_> = generators
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, g)| g.clone())
                .collect();
            in_cone(&others, &generators[k])
        })
        .collect();
    LiftedCone {
        dim: n + 1,
        generators,
        redundant,
        source: phi.polytope(),
    }
}

/// Whether `target` is a nonnegative combination of `gens`. By
/// Carathéodory it suffices to look at linearly independent subsets.
fn in_cone<I: ExactInt>(gens: &[LatticeVector<I>], target: &LatticeVector<I>) -> bool {
    if target.is_zero() {
        return true;
    }
    let dim = target.dim();
    for k in 1..=dim.min(gens.len()) {
        for subset in index_subsets(gens.len(), k) {
            let cols: Vec<_> = subset.iter().map(|&j| gens[j].clone()).collect();
            if rank_of(&cols) < k {
                continue;
            }
            if let Some(x) = solve_in_span(&cols, target) {
                if x.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

impl<I: ExactInt> LiftedCone<I> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[LatticeVector<I>] {
        &self.generators
    }

    /// `redundant()[k]` iff generator `k` lies in the cone of the others.
    pub fn redundant(&self) -> &[bool] {
        &self.redundant
    }

    pub fn source(&self) -> &SectionPolytope<I> {
        &self.source
    }

    /// Facets by exhaustive search over `(dim - 1)`-subsets of generators.
    pub fn facets(&self) -> Vec<LiftedFacet<I>> {
        let mut out: Vec<LiftedFacet<I>> = Vec::new();
        for subset in index_subsets(self.generators.len(), self.dim - 1) {
            let picked: Vec<_> = subset.iter().map(|&k| self.generators[k].clone()).collect();
            let Ok(normal) = cross_product(&picked, self.dim) else { continue };
            if normal.is_zero() {
                continue;
            }
            let vals: Vec<I> = self.generators.iter().map(|g| g.dot(&normal)).collect();
            let normal = if vals.iter().all(|v| !v.is_negative()) {
                normal
            } else if vals.iter().all(|v| !v.is_positive()) {
                -&normal
            } else {
                continue;
            };
            let normal = normal.primitive_reduce().expect("nonzero normal");
            if out.iter().any(|f| f.normal == normal) {
                continue;
            }
            let on: Vec<usize> = vals
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k)
                .collect();
            let on_vecs: Vec<_> = on.iter().map(|&k| self.generators[k].clone()).collect();
            if rank_of(&on_vecs) == self.dim - 1 {
                out.push(LiftedFacet {
                    normal,
                    generators: on,
                });
            }
        }
        out
    }

    /// Full-dimensional and containing no line.
    pub fn is_strongly_convex(&self) -> bool {
        if rank_of(&self.generators) < self.dim {
            return false;
        }
        let normals: Vec<_> = self.facets().into_iter().map(|f| f.normal).collect();
        rank_of(&normals) == self.dim
    }
}

/// Every proper face is simplicial, i.e. each facet's generators are
/// linearly independent.
pub fn proper_faces_simplicial<I: ExactInt>(c: &LiftedCone<I>) -> Result<bool, SectionError> {
    if !c.is_strongly_convex() {
        return Err(SectionError::NotStronglyConvex);
    }
    Ok(c.facets().iter().all(|f| {
        let vecs: Vec<_> = f.generators.iter().map(|&k| c.generators[k].clone()).collect();
        rank_of(&vecs) == vecs.len()
    }))
}

/// The full face criterion: `C_φ` is strongly convex, its proper faces are
/// simplicial, and every `(v_i, -a_i)` is a ray of it. Equivalent to strict
/// convexity of φ.
pub fn simplicial_face_criterion<I: ExactInt>(c: &LiftedCone<I>) -> bool {
    match proper_faces_simplicial(c) {
        Ok(true) => {
            let facets = c.facets();
            (1..c.generators.len()).all(|k| facets.iter().any(|f| f.generators.contains(&k)))
        }
        _ => false,
    }
}

/// Degree-`d` slice of the dual semigroup `C_φ^∨ ∩ Z^{n+1}`, checked
/// against `lattice_points(P_D, d)`.
pub fn graded_slice<I: ExactInt>(
    c: &LiftedCone<I>,
    d: u32,
) -> Result<Vec<GradedMonomial<I>>, SectionError> {
    let slice = dual_slice(c, d)?;
    let expected = lattice_points(&c.source, d)?;
    if slice != expected {
        return Err(SectionError::ConventionMismatch {
            degree: d,
            slice: slice.len(),
            polytope: expected.len(),
        });
    }
    Ok(slice
        .into_iter()
        .map(|exponent| GradedMonomial { degree: d, exponent })
        .collect())
}

/// `{m : <(m, -d), g> >= 0 for every generator g}`, enumerated from the
/// cone's own description.
fn dual_slice<I: ExactInt>(c: &LiftedCone<I>, d: u32) -> Result<Vec<LatticeVector<I>>, SectionError> {
    let n = c.dim - 1;
    let dd = int::<I>(d);
    let mut normals = Vec::new();
    let mut rhs = Vec::new();
    for g in &c.generators {
        let w = LatticeVector::new(g.coords()[..n].to_vec());
        let s = g.coords()[n].clone();
        // <m, w> - d s >= 0
        if w.is_zero() {
            if (dd.clone() * s).is_positive() {
                return Ok(Vec::new());
            }
            continue;
        }
        normals.push(w);
        rhs.push(dd.clone() * s);
    }
    let slice = SectionPolytope::from_inequalities(n, normals, rhs);
    if !slice.is_bounded() {
        return Err(SectionError::Unbounded);
    }
    let Some((lo, hi)) = slice.bounding_box(&I::one()) else {
        return Ok(Vec::new());
    };
    let one = I::one();
    Ok(box_points(&lo, &hi)
        .into_iter()
        .filter(|m| slice.contains_dilate(m, &one))
        .collect())
}

/// Indecomposable graded monomials of degree `1..=d_max`: those not a sum
/// of two monomials of positive degree. Evidence of generation up to
/// `d_max` only.
pub fn semigroup_generators_up_to<I: ExactInt>(
    c: &LiftedCone<I>,
    d_max: u32,
) -> Result<Vec<GradedMonomial<I>>, SectionError> {
    let mut slices: Vec<HashSet<LatticeVector<I>>> = vec![HashSet::new()];
    let mut gens = Vec::new();
    for d in 1..=d_max {
        let slice = graded_slice(c, d)?;
        for mono in &slice {
            let x = &mono.exponent;
            let decomposable = (1..=d / 2).any(|d1| {
                let rest = &slices[(d - d1) as usize];
                slices[d1 as usize].iter().any(|y| rest.contains(&(x - y)))
            });
            if !decomposable {
                gens.push(mono.clone());
            }
        }
        slices.push(slice.into_iter().map(|m| m.exponent).collect());
    }
    Ok(gens)
}

/// `{m - m_σ : m ∈ P_D ∩ M}` for maximal cone `σ`, checked to generate
/// `σ^∨ ∩ M` by expressing the dual basis in it.
pub fn vertex_chart_generators<I: ExactInt>(
    phi: &SupportFunction<I>,
    cone: usize,
) -> Result<Vec<LatticeVector<I>>, SectionError> {
    if !phi.is_very_ample() {
        return Err(SectionError::NotVeryAmple);
    }
    let p = phi.polytope();
    let m_sigma = phi.cartier_for(cone);
    let shifted: Vec<LatticeVector<I>> = lattice_points(&p, 1)?
        .iter()
        .map(|m| m - m_sigma)
        .collect();

    let gens = phi.fan().cone_generators(cone);
    let basis = IntMatrix::from_rows(&gens)?;
    let in_dual = |u: &LatticeVector<I>| gens.iter().all(|v| !u.dot(v).is_negative());
    if let Some(bad) = shifted.iter().find(|u| !in_dual(u)) {
        return Err(SectionError::GenerationFailure {
            cone,
            witness: bad.to_string(),
        });
    }
    let grading = gens.iter().skip(1).fold(gens[0].clone(), |acc, v| &acc + v);
    let steps: Vec<&LatticeVector<I>> = shifted.iter().filter(|u| !u.is_zero()).collect();
    for j in 0..gens.len() {
        let dual = basis.solve_integer(&LatticeVector::unit(gens.len(), j))?;
        let mut dead = HashSet::new();
        if !semigroup_reaches(&steps, &dual, &grading, &in_dual, &mut dead) {
            return Err(SectionError::GenerationFailure {
                cone,
                witness: dual.to_string(),
            });
        }
    }
    Ok(shifted)
}

/// Depth-first search for `target` as a sum of `steps`, all of positive
/// degree under `grading`, never leaving the dual cone.
fn semigroup_reaches<I: ExactInt>(
    steps: &[&LatticeVector<I>],
    target: &LatticeVector<I>,
    grading: &LatticeVector<I>,
    in_dual: &dyn Fn(&LatticeVector<I>) -> bool,
    dead: &mut HashSet<LatticeVector<I>>,
) -> bool {
    if target.is_zero() {
        return true;
    }
    if dead.contains(target) {
        return false;
    }
    for s in steps {
        let rest = target - s;
        if in_dual(&rest)
            && rest.dot(grading) < target.dot(grading)
            && semigroup_reaches(steps, &rest, grading, in_dual, dead)
        {
            return true;
        }
    }
    dead.insert(target.clone());
    false
}

/// Runs [`vertex_chart_generators`] on every maximal cone.
pub fn certify_very_ample<I: ExactInt>(phi: &SupportFunction<I>) -> Result<(), SectionError> {
    for c in 0..phi.fan().max_cones().len() {
        vertex_chart_generators(phi, c)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{cartier_data, TorusDivisor};
    use crate::fan::Fan;
    use num_bigint::BigInt;

    type V = LatticeVector<BigInt>;

    fn phi(dim: usize, rays: &[&[i64]], cones: &[&[usize]], a: &[i64]) -> SupportFunction<BigInt> {
        let fan = Fan::from_i64(dim, rays, cones).unwrap();
        cartier_data(&fan, &TorusDivisor::from_i64s(a)).unwrap()
    }

    fn p2(a: &[i64]) -> SupportFunction<BigInt> {
        phi(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]], a)
    }

    fn p1(a: &[i64]) -> SupportFunction<BigInt> {
        phi(1, &[&[1], &[-1]], &[&[0], &[1]], a)
    }

    fn p1xp1(a: &[i64]) -> SupportFunction<BigInt> {
        phi(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]], a)
    }

    fn f1(a: &[i64]) -> SupportFunction<BigInt> {
        phi(2, &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]], a)
    }

    fn vs(pts: &[&[i64]]) -> Vec<V> {
        pts.iter().map(|p| V::from_i64s(p)).collect()
    }

    #[test]
    fn lattice_point_examples() {
        let p = p2(&[0, 0, 1]).polytope();
        assert_eq!(lattice_points(&p, 1).unwrap(), vs(&[&[0, 0], &[0, 1], &[1, 0]]));
        assert_eq!(lattice_points(&p, 2).unwrap().len(), 6);
        assert_eq!(lattice_points(&p, 0).unwrap(), vs(&[&[0, 0]]));
        // non-basepoint-free: still enumerable from the inequalities
        let anti = p2(&[0, 0, -1]).polytope();
        assert!(lattice_points(&anti, 3).unwrap().is_empty());
        assert_eq!(lattice_points(&anti, 0).unwrap().len(), 1);
    }

    #[test]
    fn unbounded_polytope_is_an_error() {
        let quadrant = phi(2, &[&[1, 0], &[0, 1]], &[&[0, 1]], &[0, 0]);
        assert_eq!(lattice_points(&quadrant.polytope(), 1), Err(SectionError::Unbounded));
    }

    #[test]
    fn count_tables() {
        let t: Vec<usize> = section_count_table(&p2(&[0, 0, 1]).polytope(), 3)
            .unwrap()
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(t, vec![1, 3, 6, 10]);
        let t: Vec<usize> = section_count_table(&p1(&[0, 1]).polytope(), 3)
            .unwrap()
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(t, vec![1, 2, 3, 4]);
        let t: Vec<usize> = section_count_table(&p1xp1(&[0, 0, 1, 1]).polytope(), 2)
            .unwrap()
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(t, vec![1, 4, 9]);
    }

    #[test]
    fn cache_returns_same_points() {
        let cache = LatticePointCache::new(p2(&[0, 0, 1]).polytope());
        let a = cache.get(3).unwrap();
        let b = cache.get(3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn lifted_cone_generators() {
        let c = lifted_cone(&p2(&[0, 0, 1]));
        assert_eq!(
            c.generators(),
            &vs(&[&[0, 0, -1], &[1, 0, 0], &[0, 1, 0], &[-1, -1, -1]])[..]
        );
        // the apex direction is inside the cone spanned by the ray lifts
        assert_eq!(c.redundant(), &[true, false, false, false]);

        let half = lifted_cone(&p1(&[0, 0]));
        assert_eq!(half.generators(), &vs(&[&[0, -1], &[1, 0], &[-1, 0]])[..]);
        assert!(!half.is_strongly_convex());

        let c = lifted_cone(&p1(&[0, 1]));
        assert_eq!(c.generators(), &vs(&[&[0, -1], &[1, 0], &[-1, -1]])[..]);
    }

    #[test]
    fn face_criterion_examples() {
        let c = lifted_cone(&p2(&[0, 0, 1]));
        assert_eq!(proper_faces_simplicial(&c), Ok(true));
        assert!(simplicial_face_criterion(&c));
        assert_eq!(c.facets().len(), 3);

        let fiber = lifted_cone(&f1(&[1, 0, 0, 0]));
        assert_eq!(proper_faces_simplicial(&fiber), Err(SectionError::NotStronglyConvex));
        assert!(!simplicial_face_criterion(&fiber));

        let simplex = lifted_cone(&p1(&[1, 1]));
        assert_eq!(proper_faces_simplicial(&simplex), Ok(true));

        let anti = lifted_cone(&p2(&[0, 0, -1]));
        assert!(!simplicial_face_criterion(&anti));
    }

    #[test]
    fn square_cone_has_four_simplicial_facets() {
        let c = lifted_cone(&p1xp1(&[0, 0, 1, 1]));
        assert_eq!(c.facets().len(), 4);
        assert!(simplicial_face_criterion(&c));
    }

    #[test]
    fn graded_slices() {
        let c = lifted_cone(&p2(&[0, 0, 1]));
        let s1 = graded_slice(&c, 1).unwrap();
        assert_eq!(s1.len(), 3);
        assert_eq!(
            s1.iter().map(|m| m.exponent.clone()).collect::<Vec<_>>(),
            lattice_points(c.source(), 1).unwrap()
        );
        assert_eq!(graded_slice(&c, 2).unwrap().len(), 6);
        let s0 = graded_slice(&c, 0).unwrap();
        assert_eq!(s0, vec![GradedMonomial { degree: 0, exponent: V::zeros(2) }]);
    }

    #[test]
    fn generators_in_degree_one() {
        let c = lifted_cone(&p2(&[0, 0, 1]));
        let g = semigroup_generators_up_to(&c, 4).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|m| m.degree == 1));

        let g = semigroup_generators_up_to(&lifted_cone(&p1(&[0, 2])), 3).unwrap();
        assert_eq!(g.iter().map(|m| m.exponent.clone()).collect::<Vec<_>>(), vs(&[&[0], &[1], &[2]]));
        assert!(g.iter().all(|m| m.degree == 1));

        let g = semigroup_generators_up_to(&lifted_cone(&p2(&[0, 0, 0])), 3).unwrap();
        assert_eq!(g, vec![GradedMonomial { degree: 1, exponent: V::zeros(2) }]);
    }

    #[test]
    fn chart_generators() {
        let f = p2(&[0, 0, 1]);
        assert_eq!(vertex_chart_generators(&f, 0).unwrap(), vs(&[&[0, 0], &[0, 1], &[1, 0]]));
        assert!(certify_very_ample(&f).is_ok());

        let g = vertex_chart_generators(&p1(&[0, 1]), 0).unwrap();
        assert_eq!(g, vs(&[&[0], &[1]]));

        let g = vertex_chart_generators(&p1xp1(&[0, 0, 1, 1]), 0).unwrap();
        assert_eq!(g, vs(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));

        assert_eq!(
            vertex_chart_generators(&f1(&[1, 0, 0, 0]), 0),
            Err(SectionError::NotVeryAmple)
        );
    }
}
