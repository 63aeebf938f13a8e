//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision when instantiated with `BigInt`.
//! Determinants use fraction-free (Bareiss) elimination; square solves are
//! Cramer's rule on top of it, so no intermediate rationals appear.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Index, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{ExactInt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix rows")]
    Ragged,
    #[error("matrix is singular")]
    Singular,
}

/// A point of Z^n.
///
/// Equality, ordering and hashing only look at the coordinates; the
/// primitive flag is a certificate, not part of the value.
#[derive(Clone)]
pub struct LatticeVector<I: ExactInt> {
    coords: Vec<I>,
    primitive: bool,
}

impl<I: ExactInt> LatticeVector<I> {
    pub fn new(coords: Vec<I>) -> Self {
        Self {
            coords,
            primitive: false,
        }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| I::from_i64_exact(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![I::zero(); dim])
    }

    /// Standard basis vector `e_k` of Z^dim.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[k] = I::one();
        v.primitive = true;
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[I] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<I> {
        self.coords
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> I {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(I::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Pairing with a rational vector.
    pub fn dot_rational(&self, other: &RationalVector<I>) -> Rational<I> {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(other.coords())
            .fold(Rational::zero(), |acc, (a, b)| {
                acc + b.clone() * Rational::from_integer(a.clone())
            })
    }

    pub fn scale(&self, k: &I) -> Self {
        Self::new(self.coords.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Appends a coordinate, giving a vector of Z^(n+1).
    pub fn extend(&self, last: I) -> Self {
        let mut coords = self.coords.clone();
        coords.push(last);
        Self::new(coords)
    }

    pub fn gcd(&self) -> I {
        self.coords
            .iter()
            .fold(I::zero(), |g, c| num_integer::Integer::gcd(&g, c))
    }

    /// Divides by the gcd of the entries. Sign is preserved.
    pub fn primitive_reduce(&self) -> Result<Self, LatticeError> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let g = self.gcd();
        Ok(Self {
            coords: self.coords.iter().map(|c| c.clone() / g.clone()).collect(),
            primitive: true,
        })
    }

    pub fn to_rational(&self) -> RationalVector<I> {
        RationalVector::new(
            self.coords
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.to_i64()).collect()
    }
}

impl<I: ExactInt> PartialEq for LatticeVector<I> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<I: ExactInt> Eq for LatticeVector<I> {}

impl<I: ExactInt> PartialOrd for LatticeVector<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExactInt> Ord for LatticeVector<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl<I: ExactInt> Hash for LatticeVector<I> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<I: ExactInt> fmt::Debug for LatticeVector<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<I: ExactInt> fmt::Display for LatticeVector<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<I: ExactInt> Index<usize> for LatticeVector<I> {
    type Output = I;
    fn index(&self, k: usize) -> &I {
        &self.coords[k]
    }
}

impl<I: ExactInt> Add for &LatticeVector<I> {
    type Output = LatticeVector<I>;
    fn add(self, rhs: Self) -> LatticeVector<I> {
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<I: ExactInt> Sub for &LatticeVector<I> {
    type Output = LatticeVector<I>;
    fn sub(self, rhs: Self) -> LatticeVector<I> {
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<I: ExactInt> Neg for &LatticeVector<I> {
    type Output = LatticeVector<I>;
    fn neg(self) -> LatticeVector<I> {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
            primitive: self.primitive,
        }
    }
}

/// A point of Q^n. `Ratio` keeps every entry in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalVector<I: ExactInt> {
    coords: Vec<Rational<I>>,
}

impl<I: ExactInt> RationalVector<I> {
    pub fn new(coords: Vec<Rational<I>>) -> Self {
        Self { coords }
    }

    pub fn from_fractions(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(p, q)| Rational::new(I::from_i64_exact(p), I::from_i64_exact(q)))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational<I>] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> I {
        self.coords
            .iter()
            .fold(I::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()))
    }

    /// `(numerators, denominator)` with `self = numerators / denominator`.
    pub fn clear_denominators(&self) -> (LatticeVector<I>, I) {
        let den = self.common_denominator();
        let nums = self
            .coords
            .iter()
            .map(|c| c.numer().clone() * (den.clone() / c.denom().clone()))
            .collect();
        (LatticeVector::new(nums), den)
    }
}

impl<I: ExactInt> fmt::Debug for RationalVector<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix with fixed shape.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix<I: ExactInt> {
    rows: usize,
    cols: usize,
    data: Vec<I>,
}

impl<I: ExactInt> IntMatrix<I> {
    pub fn from_rows(rows: &[LatticeVector<I>]) -> Result<Self, LatticeError> {
        let cols = rows.first().map_or(0, LatticeVector::dim);
        if rows.iter().any(|r| r.dim() != cols) {
            return Err(LatticeError::Ragged);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.coords().iter().cloned()).collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let rows: Vec<_> = rows.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![I::zero(); n * n];
        for k in 0..n {
            data[k * n + k] = I::one();
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &I {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> LatticeVector<I> {
        LatticeVector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = I::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k).clone() * rhs.get(k, c).clone();
                }
                data.push(acc);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &LatticeVector<I>) -> Result<LatticeVector<I>, LatticeError> {
        if v.dim() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(LatticeVector::new(
            (0..self.rows).map(|r| self.row(r).dot(v)).collect(),
        ))
    }

    fn with_column(&self, c: usize, col: &LatticeVector<I>) -> Self {
        let mut m = self.clone();
        for r in 0..self.rows {
            m.data[r * self.cols + c] = col[r].clone();
        }
        m
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> Result<I, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(bareiss_det(self.rows, self.data.clone()))
    }

    /// Rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.rows, self.cols, self.data.clone())
    }

    /// The unique integer `x` with `self * x = b`, for unimodular `self`.
    pub fn solve_integer(&self, b: &LatticeVector<I>) -> Result<LatticeVector<I>, LatticeError> {
        let det = self.det()?;
        if b.dim() != self.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows,
                found: b.dim(),
            });
        }
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodular {
                det: det.to_string(),
            });
        }
        let x = (0..self.cols)
            .map(|c| bareiss_det(self.rows, self.with_column(c, b).data) * det.clone())
            .collect();
        Ok(LatticeVector::new(x))
    }

    /// The unique rational `x` with `self * x = b`, for nonsingular `self`.
    pub fn solve_rational(
        &self,
        b: &RationalVector<I>,
    ) -> Result<RationalVector<I>, LatticeError> {
        let det = self.det()?;
        if b.dim() != self.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows,
                found: b.dim(),
            });
        }
        if det.is_zero() {
            return Err(LatticeError::Singular);
        }
        let (nums, den) = b.clear_denominators();
        let x = (0..self.cols)
            .map(|c| {
                let dc = bareiss_det(self.rows, self.with_column(c, &nums).data);
                Rational::new(dc, det.clone() * den.clone())
            })
            .collect();
        Ok(RationalVector::new(x))
    }
}

impl<I: ExactInt> fmt::Debug for IntMatrix<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|r| self.row(r)))
            .finish()
    }
}

fn bareiss_det<I: ExactInt>(n: usize, mut a: Vec<I>) -> I {
    if n == 0 {
        return I::one();
    }
    let mut sign = I::one();
    let mut prev = I::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return I::zero();
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j].clone() * a[k * n + k].clone()
                    - a[i * n + k].clone() * a[k * n + j].clone();
                a[i * n + j] = v / prev.clone();
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * a[n * n - 1].clone()
}

fn bareiss_rank<I: ExactInt>(rows: usize, cols: usize, mut a: Vec<I>) -> usize {
    let mut rank = 0;
    let mut prev = I::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(rank * cols + j, p * cols + j);
            }
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = a[i * cols + j].clone() * a[rank * cols + c].clone()
                    - a[i * cols + c].clone() * a[rank * cols + j].clone();
                a[i * cols + j] = v / prev.clone();
            }
            a[i * cols + c] = I::zero();
        }
        prev = a[rank * cols + c].clone();
        rank += 1;
    }
    rank
}

/// Rank of a list of vectors of a common dimension.
pub fn rank_of<I: ExactInt>(vectors: &[LatticeVector<I>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vectors).map_or(0, |m| m.rank())
}

/// Generalised cross product: for `dim - 1` vectors of Z^dim, the integer
/// vector of signed maximal minors. It is orthogonal to every input and is
/// zero exactly when the inputs are linearly dependent.
pub fn cross_product<I: ExactInt>(
    vectors: &[LatticeVector<I>],
    dim: usize,
) -> Result<LatticeVector<I>, LatticeError> {
    if vectors.len() + 1 != dim {
        return Err(LatticeError::DimensionMismatch {
            expected: dim - 1,
            found: vectors.len(),
        });
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(LatticeError::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let k = dim - 1;
    let coords = (0..dim)
        .map(|skip| {
            let minor: Vec<I> = vectors
                .iter()
                .flat_map(|v| {
                    v.coords()
                        .iter()
                        .enumerate()
                        .filter(move |(c, _)| *c != skip)
                        .map(|(_, x)| x.clone())
                })
                .collect();
            let d = bareiss_det(k, minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    Ok(LatticeVector::new(coords))
}

/// Solves `Σ c_k columns[k] = target` for linearly independent `columns`.
/// Returns `None` if `target` is outside their span.
pub fn solve_in_span<I: ExactInt>(
    columns: &[LatticeVector<I>],
    target: &LatticeVector<I>,
) -> Option<Vec<Rational<I>>> {
    let k = columns.len();
    let dim = target.dim();
    if k == 0 {
        return target.is_zero().then(Vec::new);
    }
    // Pick k coordinates on which the columns are independent, solve that
    // square system, then verify the remaining coordinates.
    for rows in index_subsets(dim, k) {
        let square: Vec<LatticeVector<I>> = rows
            .iter()
            .map(|&r| LatticeVector::new(columns.iter().map(|c| c[r].clone()).collect()))
            .collect();
        let m = IntMatrix::from_rows(&square).ok()?;
        if m.det().ok()?.is_zero() {
            continue;
        }
        let rhs = LatticeVector::new(rows.iter().map(|&r| target[r].clone()).collect());
        let x = m.solve_rational(&rhs.to_rational()).ok()?;
        let ok = (0..dim).all(|r| {
            let lhs = columns
                .iter()
                .zip(x.coords())
                .fold(Rational::zero(), |acc, (c, xi)| {
                    acc + xi.clone() * Rational::from_integer(c[r].clone())
                });
            lhs == Rational::from_integer(target[r].clone())
        });
        return ok.then(|| x.coords().to_vec());
    }
    None
}

/// All increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Floor of a rational.
pub fn floor<I: ExactInt>(r: &Rational<I>) -> I {
    r.floor().to_integer()
}

/// Ceiling of a rational.
pub fn ceil<I: ExactInt>(r: &Rational<I>) -> I {
    r.ceil().to_integer()
}
