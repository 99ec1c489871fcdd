//! Exact integer and rational linear algebra.
//!
//! Everything in this crate is computed over `BigInt` / `BigRational`.
//! Floating point never enters a decision; it only shows up when a report
//! renders a decimal approximation.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} vectors, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: BigInt },
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
}

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(v: &Int) -> Rational {
    BigRational::from_integer(v.clone())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; a zero denominator is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, LatticeError> {
    let bad = || LatticeError::InvalidRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `p` or `p/q` (lowest terms, positive denominator).
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    value
        .to_f64()
        .unwrap_or_else(|| value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN))
}

/// Integer point of the lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Int::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[axis] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &LatticeVector) -> Int {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, point: &RationalVector) -> Rational {
        self.0
            .iter()
            .zip(point.iter())
            .map(|(a, b)| b * rat_int(a))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Int) -> LatticeVector {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(rat_int).collect())
    }

    pub fn max_abs(&self) -> Int {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Machine-word copy for the enumeration kernels.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Deref for LatticeVector {
    type Target = [Int];

    fn deref(&self) -> &[Int] {
        &self.0
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Point of the dual space with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn from_pairs(coords: &[(i64, i64)]) -> Self {
        Self(coords.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> RationalVector {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> RationalVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// The integer vector, if every coordinate is integral.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(|c| c.to_integer()).collect()))
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<Int>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(LatticeError::DimensionMismatch { expected: ncols, found: bad.len() });
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn from_row_vectors(rows: &[LatticeVector]) -> Result<Self, LatticeError> {
        Self::from_rows(rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    pub fn from_columns(columns: &[LatticeVector]) -> Result<Self, LatticeError> {
        Ok(Self::from_row_vectors(columns)?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        Self { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.rows[i].clone())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn columns(&self) -> Vec<LatticeVector> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self { rows, ncols: self.nrows() }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, orow)| a * &orow[j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { rows, ncols: other.ncols }
    }

    pub fn mul_lattice(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(self.rows.iter().map(|r| r.iter().zip(v.iter()).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn mul_rational(&self, v: &RationalVector) -> RationalVector {
        RationalVector(
            self.rows
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(v.iter())
                        .fold(Rational::zero(), |acc, (a, b)| acc + b * rat_int(a))
                })
                .collect(),
        )
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.iter().map(rat_int).collect()).collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.nrows();
        if n == 0 {
            return Int::one();
        }
        let mut m = self.rows.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Int::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Integer inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LatticeError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodular { det });
        }
        let inv = invert_rational(&self.to_rational_rows()).ok_or(LatticeError::Singular)?;
        let rows = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        IntMatrix::from_rows(rows)
    }
}

/// Primitive form `w` and multiplicity `g` with `v = g·w`.
pub fn primitivize(v: &LatticeVector) -> Result<(LatticeVector, Int), LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let g = v.content();
    Ok((LatticeVector(v.iter().map(|c| c / &g).collect()), g))
}

/// Whether `vs` (n vectors in dimension n) form a basis of `Z^n`.
pub fn is_lattice_basis(vs: &[LatticeVector]) -> Result<bool, LatticeError> {
    let n = vs.first().map_or(0, LatticeVector::dim);
    if vs.len() != n {
        return Err(LatticeError::WrongCount { expected: n, found: vs.len() });
    }
    if let Some(bad) = vs.iter().find(|v| v.dim() != n) {
        return Err(LatticeError::DimensionMismatch { expected: n, found: bad.dim() });
    }
    Ok(IntMatrix::from_row_vectors(vs)?.det().abs().is_one())
}

/// Lattice basis of `{μ ∈ Z^d : Σ μ_k u_k = 0}` for the given columns `u_k`.
///
/// Row-reduces `[Uᵀ | I]` with unimodular integer row operations until the
/// left block is in echelon form; the right block of every zero row of the
/// left block is a kernel vector, and together they span the kernel lattice.
pub fn integer_kernel_basis(columns: &[LatticeVector]) -> Vec<LatticeVector> {
    let d = columns.len();
    if d == 0 {
        return Vec::new();
    }
    let n = columns[0].dim();
    let mut rows: Vec<Vec<Int>> = columns
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let mut row = u.coords().to_vec();
            row.extend((0..d).map(|j| if j == k { Int::one() } else { Int::zero() }));
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == d {
            break;
        }
        // Euclid on the column: repeatedly move the smallest nonzero entry up.
        loop {
            let candidate = (pivot_row..d)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = candidate else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..d {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pivot_row][col]);
                let (head, tail) = rows.split_at_mut(i);
                let pivot = &head[pivot_row];
                for (x, p) in tail[0].iter_mut().zip(pivot) {
                    *x -= &q * p;
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[pivot_row][col].is_zero() {
            pivot_row += 1;
        }
    }

    rows.into_iter()
        .skip(pivot_row)
        .map(|r| LatticeVector(r[n..].to_vec()))
        .collect()
}

/// Exact solution of `A x = b` for a square invertible rational matrix.
pub fn solve_rational(a: &[Vec<Rational>], b: &RationalVector) -> Result<RationalVector, LatticeError> {
    let n = a.len();
    if b.dim() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, found: b.dim() });
    }
    if let Some(bad) = a.iter().find(|r| r.len() != n) {
        return Err(LatticeError::DimensionMismatch { expected: n, found: bad.len() });
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero()).ok_or(LatticeError::Singular)?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            let (pivot, other) = if i < col {
                let (lo, hi) = m.split_at_mut(col);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = m.split_at_mut(i);
                (&lo[col], &mut hi[0])
            };
            for (x, p) in other.iter_mut().zip(pivot) {
                *x -= &f * p;
            }
        }
    }
    Ok(RationalVector(m.into_iter().map(|mut r| r.pop().unwrap_or_default()).collect()))
}

pub fn invert_rational(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e = RationalVector((0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect());
        columns.push(solve_rational(a, &e).ok()?);
    }
    Some((0..n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Rank of a rational matrix given by rows.
pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[rank][col];
            let (lo, hi) = m.split_at_mut(i);
            for (x, p) in hi[0].iter_mut().zip(&lo[rank]) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Affine map `x ↦ M x + t` with `|det M| = 1`.
///
/// Column `k` of `M` is the image of the `k`-th unit vector, so a simplex
/// `conv(0, a_1 e_1, …, a_n e_n)` goes to `conv(t, t + a_k M e_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    matrix: IntMatrix,
    translation: RationalVector,
}

impl UnimodularMap {
    /// `strict_sl` additionally demands `det M = +1`.
    pub fn new(matrix: IntMatrix, translation: RationalVector, strict_sl: bool) -> Result<Self, LatticeError> {
        if !matrix.is_square() {
            return Err(LatticeError::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if translation.dim() != matrix.nrows() {
            return Err(LatticeError::DimensionMismatch { expected: matrix.nrows(), found: translation.dim() });
        }
        let det = matrix.det();
        let ok = if strict_sl { det.is_one() } else { det.abs().is_one() };
        if !ok {
            return Err(LatticeError::NotUnimodular { det });
        }
        Ok(Self { matrix, translation })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: IntMatrix::identity(n), translation: RationalVector::zero(n) }
    }

    pub fn translation_only(translation: RationalVector) -> Self {
        Self { matrix: IntMatrix::identity(translation.dim()), translation }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &RationalVector {
        &self.translation
    }

    pub fn det(&self) -> Int {
        self.matrix.det()
    }

    pub fn apply(&self, x: &RationalVector) -> RationalVector {
        self.matrix.mul_rational(x).add(&self.translation)
    }

    /// Linear part only (for directions).
    pub fn apply_linear(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.mul_lattice(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            matrix: self.matrix.mul(&other.matrix),
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let inv = self.matrix.inverse_unimodular().expect("unimodular by construction");
        let translation = inv.mul_rational(&self.translation).neg();
        UnimodularMap { matrix: inv, translation }
    }
}
