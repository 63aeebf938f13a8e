//! Growth tests, envelope reconstruction and Lelong-type limsup experiments.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::divisor::SectionPolytope;
use crate::lattice::LatticeVector;
use crate::scalar::{ExactInt, Real};
use crate::sections::lattice_points;

use super::grid::{GridSpec, Sample, WeightGrid};
use super::section::PolySection;
use super::weights::{dot, LogWeight, ToricWeights};
use super::LelongError;

/// Nested-radius test for `sup (u - ψ) < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthConfig {
    /// Outermost grid; inner levels halve the radius.
    pub grid: GridSpec,
    pub levels: usize,
    /// Sups of the two outermost levels within this are "stable".
    pub stable_tol: f64,
    /// Sups that grow by more than this are "unbounded".
    pub growth_threshold: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            levels: 4,
            stable_tol: 1e-6,
            growth_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport<F> {
    pub bounded: bool,
    /// `sup (u - ψ)` over the outermost grid.
    pub c_estimate: F,
    /// `(log radius, sup)` per level, innermost first.
    pub sups: Vec<(F, F)>,
    /// Samples where `u` was NaN.
    pub excluded: usize,
}

/// Decides whether `u ≤ ψ + C` from sups over nested log-radii.
pub fn growth_check<I: ExactInt, F: Real>(
    u: &dyn LogWeight<F>,
    p: &SectionPolytope<I>,
    cfg: &GrowthConfig,
) -> Result<GrowthReport<F>, LelongError> {
    let weights = ToricWeights::<F>::new(p)?;
    let levels = cfg.levels.max(2);
    let mut sups = Vec::with_capacity(levels);
    let mut excluded = 0;
    for k in 0..levels {
        let r = cfg.grid.log_radius / f64::powi(2.0, (levels - 1 - k) as i32);
        let grid = WeightGrid::<F>::new(weights.dim(), cfg.grid.with_radius(r));
        let diffs = grid.map_samples(|s| u.log_eval(s) - weights.psi(&s.log));
        let mut sup = F::neg_infinity();
        for d in diffs {
            if d.is_nan() {
                excluded += 1;
            } else {
                sup = sup.max(d);
            }
        }
        sups.push((F::lit(r), sup));
    }
    let last = sups[levels - 1].1;
    let prev = sups[levels - 2].1;
    let change = last - prev;
    let bounded = if change.abs() < F::lit(cfg.stable_tol) || (last == prev) {
        true
    } else if change > F::lit(cfg.growth_threshold) {
        false
    } else {
        return Err(LelongError::Inconclusive {
            sups: sups
                .iter()
                .map(|(r, s)| (r.to_f64().unwrap_or(f64::NAN), s.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        });
    };
    Ok(GrowthReport {
        bounded,
        c_estimate: last,
        sups,
        excluded,
    })
}

/// Candidate families for the envelope search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchFamilies {
    /// Single monomials `χ^m`.
    pub monomials: bool,
    /// `Σ conj(χ^m(z_0)) χ^m / ‖·‖`, one per evaluation point `z_0`.
    pub adapted: bool,
    /// Seeded random unit coefficient vectors.
    pub random: bool,
}

impl Default for SearchFamilies {
    fn default() -> Self {
        Self {
            monomials: true,
            adapted: true,
            random: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConfig {
    pub d_max: u32,
    /// Random candidates per degree.
    pub coeff_budget: usize,
    pub seed: u64,
    pub families: SearchFamilies,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self {
            d_max: 3,
            coeff_budget: 64,
            seed: 0,
            families: SearchFamilies::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnvelopeResult<F> {
    /// Evaluation grid; values are the reconstruction `H̃` (not its log).
    pub grid: WeightGrid<F>,
    /// `H` on the evaluation grid.
    pub target: Vec<F>,
    /// Candidates with a finite admissible scaling.
    pub candidates: usize,
    pub seed: u64,
}

impl<F: Real> EnvelopeResult<F> {
    /// `max |H̃ - H| / H` over the evaluation grid.
    pub fn max_relative_deviation(&self) -> F {
        self.grid
            .values()
            .iter()
            .zip(&self.target)
            .map(|(&r, &h)| ((r - h) / h).abs())
            .fold(F::zero(), F::max)
    }
}

/// Inner approximation of the envelope
/// `sup { |Q|^{1/d} : Q ∈ Γ(dL), d ≤ d_max, |Q|^{1/d} ≤ H }`.
///
/// Every candidate direction is rescaled by the largest factor keeping
/// `|Q|^{1/d} ≤ H` on the twice-refined constraint grid, so each retained
/// candidate is admissible there.
pub fn envelope_reconstruct<I: ExactInt, F: Real>(
    h: &dyn LogWeight<F>,
    p: &SectionPolytope<I>,
    grid: &GridSpec,
    cfg: &EnvelopeConfig,
) -> Result<EnvelopeResult<F>, LelongError> {
    let dim = p.ambient_dim();
    let (eval, fine, map) = WeightGrid::<F>::with_refinement(dim, *grid);
    let log_h_fine = fine.map_samples(|s| h.log_eval(s));
    let log_h: Vec<F> = map.iter().map(|&i| log_h_fine[i]).collect();

    let mut best = vec![F::neg_infinity(); eval.len()];
    let mut candidates = 0usize;
    for d in 1..=cfg.d_max {
        let exps: Vec<Vec<F>> = lattice_points(p, d)?
            .iter()
            .map(|m| m.coords().iter().map(crate::scalar::int_to_real).collect())
            .collect();
        if exps.is_empty() {
            continue;
        }
        let fine_table = monomial_table(&fine, &exps);
        let eval_table: Vec<&MonomialRow<F>> = map.iter().map(|&i| &fine_table[i]).collect();

        let mut family: Vec<Vec<Complex<F>>> = Vec::new();
        if cfg.families.monomials {
            for k in 0..exps.len() {
                let mut c = vec![Complex::new(F::zero(), F::zero()); exps.len()];
                c[k] = Complex::new(F::one(), F::zero());
                family.push(c);
            }
        }
        if cfg.families.adapted {
            for row in &eval_table {
                let norm = row.terms.iter().map(|w| w.norm_sqr()).sum::<F>().sqrt();
                if norm.is_zero() || !norm.is_finite() {
                    continue;
                }
                family.push(row.terms.iter().map(|w| w.conj() / norm).collect());
            }
        }
        if cfg.families.random {
            // one stream per degree: a larger budget only appends candidates
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(d as u64);
            for _ in 0..cfg.coeff_budget {
                let c: Vec<Complex<F>> = (0..exps.len())
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex::new(F::lit(re), F::lit(im))
                    })
                    .collect();
                let norm = c.iter().map(|w| w.norm_sqr()).sum::<F>().sqrt();
                if norm.is_zero() {
                    continue;
                }
                family.push(c.into_iter().map(|w| w / norm).collect());
            }
        }

        let inv_d = F::one() / F::lit(d as f64);
        let (level, used) = family
            .par_iter()
            .filter_map(|c| {
                let slack = fine_table
                    .iter()
                    .zip(&log_h_fine)
                    .map(|(row, &lh)| {
                        let q = row.log_abs(c);
                        if q == F::neg_infinity() {
                            F::infinity()
                        } else {
                            lh - inv_d * q
                        }
                    })
                    .fold(F::infinity(), F::min);
                if !slack.is_finite() {
                    return None;
                }
                let vals: Vec<F> = eval_table.iter().map(|row| inv_d * row.log_abs(c) + slack).collect();
                Some((vals, 1usize))
            })
            .reduce(
                || (vec![F::neg_infinity(); eval.len()], 0),
                |(a, n), (b, m)| (a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect(), n + m),
            );
        for (b, v) in best.iter_mut().zip(level) {
            *b = b.max(v);
        }
        candidates += used;
    }
    if candidates == 0 {
        return Err(LelongError::EmptyFamily);
    }
    let values = best.into_iter().map(F::exp).collect();
    let target = log_h.into_iter().map(F::exp).collect();
    Ok(EnvelopeResult {
        grid: eval.with_values(values),
        target,
        candidates,
        seed: cfg.seed,
    })
}

/// `χ^m(z) = e^{shift} · terms[m]` at one sample.
struct MonomialRow<F> {
    shift: F,
    terms: Vec<Complex<F>>,
}

impl<F: Real> MonomialRow<F> {
    fn log_abs(&self, c: &[Complex<F>]) -> F {
        let s = c
            .iter()
            .zip(&self.terms)
            .fold(Complex::new(F::zero(), F::zero()), |acc, (a, w)| acc + a * w);
        let r = s.norm();
        if r.is_zero() {
            F::neg_infinity()
        } else {
            self.shift + r.ln()
        }
    }
}

fn monomial_table<F: Real>(grid: &WeightGrid<F>, exps: &[Vec<F>]) -> Vec<MonomialRow<F>> {
    grid.map_samples(|s: &Sample<F>| {
        let logs: Vec<F> = exps.iter().map(|m| dot(m, s.log.coords())).collect();
        let shift = logs.iter().copied().fold(F::neg_infinity(), F::max);
        let terms = exps
            .iter()
            .zip(&logs)
            .map(|(m, &l)| Complex::from_polar((l - shift).exp(), dot(m, &s.phase)))
            .collect();
        MonomialRow { shift, terms }
    })
}

#[derive(Debug, Clone)]
pub struct LimsupResult<F> {
    /// Row `J - 1` holds `max_{j ≤ J} |Q_j|^{1/j}` per sample.
    pub running: Vec<Vec<F>>,
    /// Max-filtered last row.
    pub regularized: Vec<F>,
    pub grid: WeightGrid<F>,
}

fn check_degrees<F: Real>(qs: &[Option<PolySection<F>>]) -> Result<(), LelongError> {
    for (k, q) in qs.iter().enumerate() {
        if let Some(q) = q {
            if q.degree() as usize > k + 1 {
                return Err(LelongError::DegreeExceedsIndex {
                    j: k + 1,
                    degree: q.degree(),
                });
            }
        }
    }
    Ok(())
}

/// `log|Q_j|^{1/j}` per sample for each `j`, in order.
fn log_rows<F: Real>(grid: &WeightGrid<F>, qs: &[Option<PolySection<F>>]) -> Vec<Option<Vec<F>>> {
    qs.iter()
        .enumerate()
        .map(|(k, q)| {
            q.as_ref().map(|q| {
                let inv = F::one() / F::lit((k + 1) as f64);
                grid.map_samples(|s| inv * q.log_abs(s))
            })
        })
        .collect()
}

/// Running maxima of `|Q_j|^{1/j}` for `J = 1..=j_max` (`qs[j-1]` is
/// `Q_j`; `None` means `Q_j = 0`).
pub fn limsup_weight<F: Real>(
    qs: &[Option<PolySection<F>>],
    j_max: usize,
    grid: &GridSpec,
    dim: usize,
) -> Result<LimsupResult<F>, LelongError> {
    let qs = &qs[..j_max.min(qs.len())];
    check_degrees(qs)?;
    let g = WeightGrid::<F>::new(dim, *grid);
    let mut current = vec![F::neg_infinity(); g.len()];
    let mut running = Vec::with_capacity(j_max);
    let rows = log_rows(&g, qs);
    for j in 0..j_max {
        if let Some(Some(row)) = rows.get(j) {
            for (c, &v) in current.iter_mut().zip(row) {
                *c = c.max(v);
            }
        }
        running.push(current.iter().map(|&v| v.exp()).collect());
    }
    let regularized = g.max_filter(running.last().map(Vec::as_slice).unwrap_or(&[]));
    let last = running.last().cloned().unwrap_or_default();
    Ok(LimsupResult {
        running,
        regularized,
        grid: g.with_values(last),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<F> {
    pub j: usize,
    /// `sup |max_{i≤J} log|Q_i|^{1/i} - log H|`.
    pub sup_deviation: F,
    /// Mean of the same absolute deviation.
    pub l1_deviation: F,
    /// Samples dropped because some `Q_i` vanishes or is not finite there.
    pub excluded: usize,
}

/// Convergence table of the log running maximum towards `log H`.
pub fn chern_convergence<F: Real>(
    h: &dyn LogWeight<F>,
    qs: &[Option<PolySection<F>>],
    j_max: usize,
    grid: &GridSpec,
    dim: usize,
) -> Result<Vec<ConvergenceRow<F>>, LelongError> {
    let qs = &qs[..j_max.min(qs.len())];
    check_degrees(qs)?;
    let g = WeightGrid::<F>::new(dim, *grid);
    let log_h = g.map_samples(|s| h.log_eval(s));
    let rows = log_rows(&g, qs);
    let keep: Vec<bool> = (0..g.len())
        .map(|i| {
            log_h[i].is_finite()
                && rows
                    .iter()
                    .flatten()
                    .all(|row| row[i].is_finite())
        })
        .collect();
    let excluded = keep.iter().filter(|k| !**k).count();
    let mut current = vec![F::neg_infinity(); g.len()];
    let mut out = Vec::with_capacity(j_max);
    for j in 0..j_max {
        if let Some(Some(row)) = rows.get(j) {
            for (c, &v) in current.iter_mut().zip(row) {
                *c = c.max(v);
            }
        }
        let mut sup = F::zero();
        let mut sum = F::zero();
        let mut n = 0usize;
        for i in 0..g.len() {
            if !keep[i] {
                continue;
            }
            let dev = (current[i] - log_h[i]).abs();
            sup = sup.max(dev);
            sum = sum + dev;
            n += 1;
        }
        let mean = if n == 0 { F::nan() } else { sum / F::lit(n as f64) };
        out.push(ConvergenceRow {
            j: j + 1,
            sup_deviation: if n == 0 { F::nan() } else { sup },
            l1_deviation: mean,
            excluded,
        });
    }
    Ok(out)
}

/// `count` directions in the open positive orthant of `R^r`, unit length.
/// For `r = 2` the angles are evenly spaced; otherwise they are seeded
/// absolute Gaussians.
pub fn positive_direction_net<F: Real>(r: usize, count: usize, seed: u64) -> Vec<Vec<F>> {
    if r == 1 {
        return vec![vec![F::one()]; count];
    }
    if r == 2 {
        return (0..count)
            .map(|k| {
                let a = (k as f64 + 0.5) * std::f64::consts::FRAC_PI_2 / count as f64;
                vec![F::lit(a.cos()), F::lit(a.sin())]
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..r)
                .map(|_| {
                    let g: f64 = rng.sample(StandardNormal);
                    g.abs() + 1e-3
                })
                .collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| F::lit(x / n)).collect()
        })
        .collect()
}

/// `Q_j = χ^{j·v}` with `v` cycling through the vertices of `P`.
pub fn vertex_monomial_sequence<I: ExactInt, F: Real>(
    p: &SectionPolytope<I>,
    j_max: usize,
) -> Result<Vec<Option<PolySection<F>>>, LelongError> {
    let verts = p.vertices().map_err(|_| LelongError::VerticesUnavailable)?;
    if verts.is_empty() {
        return Err(LelongError::VerticesUnavailable);
    }
    (1..=j_max)
        .map(|j| {
            let v = &verts[(j - 1) % verts.len()];
            let k = I::from_usize(j).expect("index fits");
            PolySection::monomial(p, j as u32, v.scale(&k), Complex::new(F::one(), F::zero())).map(Some)
        })
        .collect()
}

/// `Q_j = (Σ_m c_m χ^m)^j` with `c` cycling through `net` (one coefficient
/// per point of `P ∩ M`, lexicographic).
pub fn direction_net_sequence<I: ExactInt, F: Real>(
    p: &SectionPolytope<I>,
    net: &[Vec<F>],
    j_max: usize,
) -> Result<Vec<Option<PolySection<F>>>, LelongError> {
    let pts: Vec<LatticeVector<I>> = lattice_points(p, 1)?;
    if net.is_empty() {
        return Err(LelongError::EmptyFamily);
    }
    let bases: Vec<PolySection<F>> = net
        .iter()
        .map(|c| {
            let terms = pts
                .iter()
                .cloned()
                .zip(c.iter().map(|&a| Complex::new(a, F::zero())))
                .collect();
            PolySection::new(p, 1, terms)
        })
        .collect::<Result<_, _>>()?;
    Ok((1..=j_max)
        .map(|j| Some(bases[(j - 1) % bases.len()].clone().pow(j as u32)))
        .collect())
}
