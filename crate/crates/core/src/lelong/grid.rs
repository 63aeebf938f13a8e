//! Sample grids on the torus `(C*)^n`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::Real;

use super::LelongError;

/// A point of `(C*)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint<F> {
    coords: Vec<Complex<F>>,
}

impl<F: Real> TorusPoint<F> {
    pub fn new(coords: Vec<Complex<F>>) -> Result<Self, LelongError> {
        if let Some(k) = coords.iter().position(|z| z.norm_sqr().is_zero()) {
            return Err(LelongError::ZeroCoordinate { index: k });
        }
        Ok(Self { coords })
    }

    /// `z_k = exp(x_k + i θ_k)`.
    pub fn from_polar(log: &[F], phase: &[F]) -> Self {
        Self {
            coords: log
                .iter()
                .zip(phase)
                .map(|(&x, &t)| Complex::from_polar(x.exp(), t))
                .collect(),
        }
    }

    pub fn coords(&self) -> &[Complex<F>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn log_point(&self) -> LogPoint<F> {
        LogPoint::new(self.coords.iter().map(|z| z.norm().ln()).collect())
    }

    pub fn phases(&self) -> Vec<F> {
        self.coords.iter().map(|z| z.arg()).collect()
    }
}

/// `(log|z_1|, …, log|z_n|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPoint<F> {
    coords: Vec<F>,
}

impl<F: Real> LogPoint<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A torus point together with its log-moduli and phases.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<F> {
    pub z: TorusPoint<F>,
    pub log: LogPoint<F>,
    pub phase: Vec<F>,
}

impl<F: Real> Sample<F> {
    pub fn from_polar(log: Vec<F>, phase: Vec<F>) -> Self {
        Self {
            z: TorusPoint::from_polar(&log, &phase),
            log: LogPoint::new(log),
            phase,
        }
    }

    pub fn from_torus(z: TorusPoint<F>) -> Self {
        let log = z.log_point();
        let phase = z.phases();
        Self { z, log, phase }
    }
}

/// Tensor grid: `points_per_axis` log-moduli uniformly spaced in
/// `[-log_radius, log_radius]` per coordinate, and `phases` equally spaced
/// angles per coordinate starting at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub log_radius: f64,
    pub points_per_axis: usize,
    pub phases: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            log_radius: 8.0,
            points_per_axis: 65,
            phases: 1,
        }
    }
}

impl GridSpec {
    pub fn with_radius(self, log_radius: f64) -> Self {
        Self { log_radius, ..self }
    }

    pub fn with_phases(self, phases: usize) -> Self {
        Self { phases, ..self }
    }

    /// Twice as fine in every axis; contains every point of `self`.
    pub fn refined(&self) -> Self {
        Self {
            log_radius: self.log_radius,
            points_per_axis: 2 * self.points_per_axis.max(1) - 1,
            phases: 2 * self.phases.max(1),
        }
    }

    fn log_axis(&self) -> Vec<f64> {
        let n = self.points_per_axis.max(1);
        if n == 1 {
            return vec![0.0];
        }
        let step = 2.0 * self.log_radius / (n - 1) as f64;
        (0..n).map(|i| -self.log_radius + step * i as f64).collect()
    }

    fn phase_axis(&self) -> Vec<f64> {
        let k = self.phases.max(1);
        (0..k)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / k as f64)
            .collect()
    }
}

/// Samples of a tensor grid plus one value per sample.
///
/// Sample order is row-major over the multi-index
/// `(log_1, …, log_n, phase_1, …, phase_n)`.
#[derive(Debug, Clone)]
pub struct WeightGrid<F> {
    spec: GridSpec,
    dim: usize,
    samples: Vec<Sample<F>>,
    values: Vec<F>,
}

impl<F: Real> WeightGrid<F> {
    pub fn new(dim: usize, spec: GridSpec) -> Self {
        let logs = spec.log_axis();
        let phases = spec.phase_axis();
        let shape = Self::shape_of(dim, &spec);
        let total: usize = shape.iter().product();
        let samples = (0..total)
            .map(|flat| {
                let idx = unflatten(flat, &shape);
                let log = (0..dim).map(|k| F::lit(logs[idx[k]])).collect();
                let phase = (0..dim).map(|k| F::lit(phases[idx[dim + k]])).collect();
                Sample::from_polar(log, phase)
            })
            .collect();
        Self {
            spec,
            dim,
            samples,
            values: vec![F::zero(); total],
        }
    }

    /// A grid and its twice-refined companion, with `map[i]` the index in
    /// the fine grid of coarse sample `i`. Shared samples are bit-identical.
    pub fn with_refinement(dim: usize, spec: GridSpec) -> (Self, Self, Vec<usize>) {
        let fine = Self::new(dim, spec.refined());
        let coarse_shape = Self::shape_of(dim, &spec);
        let fine_shape = Self::shape_of(dim, &fine.spec);
        let total: usize = coarse_shape.iter().product();
        let map: Vec<usize> = (0..total)
            .map(|flat| {
                let idx: Vec<usize> = unflatten(flat, &coarse_shape).into_iter().map(|i| 2 * i).collect();
                flatten(&idx, &fine_shape)
            })
            .collect();
        let samples = map.iter().map(|&i| fine.samples[i].clone()).collect();
        let coarse = Self {
            spec,
            dim,
            samples,
            values: vec![F::zero(); total],
        };
        (coarse, fine, map)
    }

    fn shape_of(dim: usize, spec: &GridSpec) -> Vec<usize> {
        let mut shape = vec![spec.points_per_axis.max(1); dim];
        shape.extend(std::iter::repeat_n(spec.phases.max(1), dim));
        shape
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample<F>] {
        &self.samples
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn with_values(mut self, values: Vec<F>) -> Self {
        assert_eq!(values.len(), self.samples.len(), "values must align with samples");
        self.values = values;
        self
    }

    /// Evaluates `f` at every sample in parallel; order is preserved.
    pub fn map_samples<T: Send>(&self, f: impl Fn(&Sample<F>) -> T + Sync + Send) -> Vec<T> {
        self.samples.par_iter().map(f).collect()
    }

    /// Indices within Chebyshev distance one, including `i` itself. Phase
    /// axes wrap around.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let shape = Self::shape_of(self.dim, &self.spec);
        let idx = unflatten(i, &shape);
        let axes = shape.len();
        let mut out = Vec::new();
        for code in 0..3usize.pow(axes as u32) {
            let mut c = code;
            let mut nb = Vec::with_capacity(axes);
            let mut ok = true;
            for (a, &len) in shape.iter().enumerate() {
                let step = (c % 3) as isize - 1;
                c /= 3;
                let raw = idx[a] as isize + step;
                let wraps = a >= self.dim;
                let v = if wraps {
                    raw.rem_euclid(len as isize) as usize
                } else if raw < 0 || raw >= len as isize {
                    ok = false;
                    break;
                } else {
                    raw as usize
                };
                nb.push(v);
            }
            if ok {
                let j = flatten(&nb, &shape);
                if !out.contains(&j) {
                    out.push(j);
                }
            }
        }
        out
    }

    /// One-cell max filter: the grid stand-in for upper semicontinuous
    /// regularization.
    pub fn max_filter(&self, values: &[F]) -> Vec<F> {
        (0..self.samples.len())
            .into_par_iter()
            .map(|i| {
                self.neighbors(i)
                    .into_iter()
                    .map(|j| values[j])
                    .fold(F::neg_infinity(), F::max)
            })
            .collect()
    }
}

fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for a in (0..shape.len()).rev() {
        idx[a] = flat % shape[a];
        flat /= shape[a];
    }
    idx
}

fn flatten(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &len)| acc * len + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_contains_origin_and_integers() {
        let g = WeightGrid::<f64>::new(1, GridSpec::default());
        assert_eq!(g.len(), 65);
        let xs: Vec<f64> = g.samples().iter().map(|s| s.log.coords()[0]).collect();
        assert_eq!(xs[0], -8.0);
        assert_eq!(xs[32], 0.0);
        assert_eq!(xs[64], 8.0);
        assert!(xs.contains(&1.0));
    }

    #[test]
    fn refinement_shares_samples() {
        let spec = GridSpec {
            log_radius: 3.0,
            points_per_axis: 7,
            phases: 2,
        };
        let (coarse, fine, map) = WeightGrid::<f64>::with_refinement(2, spec);
        assert_eq!(fine.len(), 13 * 13 * 4 * 4);
        for (i, &j) in map.iter().enumerate() {
            assert_eq!(coarse.samples()[i], fine.samples()[j]);
        }
        let direct = WeightGrid::<f64>::new(2, spec);
        for (a, b) in direct.samples().iter().zip(coarse.samples()) {
            assert!((a.log.coords()[0] - b.log.coords()[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn neighbors_wrap_phases_only() {
        let spec = GridSpec {
            log_radius: 1.0,
            points_per_axis: 3,
            phases: 4,
        };
        let g = WeightGrid::<f64>::new(1, spec);
        // corner in log, phase 0: log neighbors {0,1}, phase neighbors {3,0,1}
        assert_eq!(g.neighbors(0).len(), 6);
        // middle in log
        assert_eq!(g.neighbors(4 + 1).len(), 9);
    }

    #[test]
    fn max_filter_spreads_peaks() {
        let spec = GridSpec {
            log_radius: 1.0,
            points_per_axis: 5,
            phases: 1,
        };
        let g = WeightGrid::<f64>::new(1, spec);
        let v = vec![0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(g.max_filter(&v), vec![0.0, 1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn torus_points_reject_zero() {
        let err = TorusPoint::<f64>::new(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        assert!(matches!(err, Err(LelongError::ZeroCoordinate { index: 1 })));
        let z = TorusPoint::<f64>::new(vec![Complex::new(0.0, 2.0)]).unwrap();
        let s = Sample::from_torus(z);
        assert!((s.log.coords()[0] - 2f64.ln()).abs() < 1e-15);
        assert!((s.phase[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
