//! Exact rational linear algebra.
//!
//! Everything downstream (kernels and images of powers of the Dirac operator,
//! their sums, intersections and quotients) reduces to the handful of
//! operations in this module. Matrices are dense and small; arithmetic is
//! exact, so pivots are simply the first nonzero entry.
//!
//! A [`Subspace`] is stored by a basis in reduced column echelon form. That
//! form is canonical, so two subspaces are equal as spans exactly when they
//! compare equal with `==`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"n"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    Rational::from_str(s.trim()).map_err(|_| LinalgError::ParseRational(s.to_string()))
}

/// Formats a vector of rationals as strings (`"p/q"`, or `"n"` for integers).
pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector length {found} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("denominator subspace is not contained in the numerator subspace")]
    NotContained,
    #[error("vector does not lie in the numerator subspace")]
    VectorNotInSubspace,
    #[error("cannot parse rational number {0:?}")]
    ParseRational(String),
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must equal rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: &Rational) {
        let idx = r * self.cols + c;
        self.data[idx] += value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (reduced, _, pivots) = rref(&self.hstack(&Matrix::identity(n)));
        if pivots.len() < n || pivots.get(n.wrapping_sub(1)).is_some_and(|&p| p != n - 1) {
            return None;
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(reduced.select(&rows, &cols))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// Reduced row echelon form. Returns the reduced matrix, the rank and the
/// pivot columns (ascending).
pub fn rref(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols {
                a.data.swap(p * a.cols + c, row * a.cols + c);
            }
        }
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let v = a.get(row, c) * &inv;
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let factor = a.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..a.cols {
                let sub = &factor * a.get(row, c);
                if !sub.is_zero() {
                    let v = a.get(r, c) - sub;
                    a.set(r, c, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots.len(), pivots)
}

/// Solves `a x = b`, returning the solution whose free variables are zero,
/// or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    let aug = a.hstack(&Matrix::from_columns(a.rows, &[b.to_vec()]));
    let (reduced, _, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(r, a.cols).clone();
    }
    Some(x)
}

/// Subspace `{x : m x = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (reduced, _, pivots) = rref(m);
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -reduced.get(r, free).clone();
        }
        vectors.push(v);
    }
    Subspace::span(m.cols, vectors)
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.rows, m.columns())
}

/// A linear subspace of `Q^n`, stored canonically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// `ambient x dim`, columns in reduced column echelon form.
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<Vec<String>> = self.vectors().iter().map(|v| format_vector(v)).collect();
        write!(f, "Subspace(ambient={}, basis={:?})", self.ambient, cols)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Span of arbitrary (possibly dependent) vectors of length `ambient`.
    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        for v in &rows {
            assert_eq!(v.len(), ambient, "spanning vector length mismatch");
        }
        let (reduced, rank, _) = rref(&Matrix::from_rows(&rows));
        let keep: Vec<usize> = (0..rank).collect();
        let all: Vec<usize> = (0..ambient).collect();
        Subspace { ambient, basis: reduced.select(&keep, &all).transpose() }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::span(
            ambient,
            indices.into_iter().map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            }),
        )
    }

    /// `{x ∈ self : x_r = 0 for r in rows}`.
    pub fn with_zero_coordinates(&self, rows: &[usize]) -> Subspace {
        let cols: Vec<usize> = (0..self.dim()).collect();
        let coefficients = kernel(&self.basis.select(rows, &cols));
        Subspace::span(self.ambient, (&self.basis * coefficients.basis()).columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// `ambient x dim` matrix whose columns are the canonical basis.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    /// Pivot row of each basis column.
    fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|c| (0..self.ambient).find(|&r| !self.basis.get(r, c).is_zero()).expect("nonzero column"))
            .collect()
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::LengthMismatch { expected: self.ambient, found: v.len() });
        }
        let coeffs: Vec<Rational> = self.pivot_rows().iter().map(|&p| v[p].clone()).collect();
        let recon = self.basis.mul_vec(&coeffs);
        Ok((recon.as_slice() == v).then_some(coeffs))
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        for v in self.vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subspace::span(self.ambient, self.vectors().into_iter().chain(other.vectors())))
    }

    /// Computed from the kernel of `[A | -B]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = self.basis.hstack(&-&other.basis);
        let da = self.dim();
        let vectors = kernel(&stacked).vectors().into_iter().map(|c| self.basis.mul_vec(&c[..da]));
        Ok(Subspace::span(self.ambient, vectors))
    }

    /// Image of this subspace under `m` (which must have `ambient` columns).
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols, self.ambient, "map source dimension mismatch");
        image(&(m * &self.basis))
    }

    /// `{x in self : m x in target}`.
    pub fn preimage(&self, m: &Matrix, target: &Subspace) -> Result<Subspace, LinalgError> {
        if m.cols != self.ambient {
            return Err(LinalgError::AmbientMismatch { left: m.cols, right: self.ambient });
        }
        if m.rows != target.ambient {
            return Err(LinalgError::AmbientMismatch { left: m.rows, right: target.ambient });
        }
        let stacked = (m * &self.basis).hstack(&-&target.basis);
        let da = self.dim();
        let vectors = kernel(&stacked).vectors().into_iter().map(|c| self.basis.mul_vec(&c[..da]));
        Ok(Subspace::span(self.ambient, vectors))
    }
}

/// `num / den` together with representatives of a basis of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub num: Subspace,
    pub den: Subspace,
    pub representatives: Vec<Vec<Rational>>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `x` in the representative basis.
    pub fn class_coordinates(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if x.len() != self.num.ambient_dim() {
            return Err(LinalgError::LengthMismatch { expected: self.num.ambient_dim(), found: x.len() });
        }
        let n = self.num.ambient_dim();
        let mut columns = self.representatives.clone();
        columns.extend(self.den.vectors());
        let system = Matrix::from_columns(n, &columns);
        let sol = solve(&system, x).ok_or(LinalgError::VectorNotInSubspace)?;
        Ok(sol[..self.dim()].to_vec())
    }

    pub fn is_zero_class(&self, x: &[Rational]) -> Result<bool, LinalgError> {
        Ok(self.class_coordinates(x)?.iter().all(Zero::is_zero))
    }
}

/// Quotient `num / den`; representatives extend the basis of `den` greedily
/// with the canonical basis vectors of `num` in index order.
pub fn quotient(num: &Subspace, den: &Subspace) -> Result<Quotient, LinalgError> {
    num.check_ambient(den)?;
    if !den.is_subspace_of(num)? {
        return Err(LinalgError::NotContained);
    }
    let mut current = den.clone();
    let mut representatives = Vec::new();
    for v in num.vectors() {
        if current.dim() == num.dim() {
            break;
        }
        if !current.contains(&v)? {
            current = current.sum(&Subspace::span(num.ambient, [v.clone()]))?;
            representatives.push(v);
        }
    }
    Ok(Quotient { num: num.clone(), den: den.clone(), representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_identity_and_dependent_rows() {
        let id = Matrix::identity(2);
        let (r, rank, piv) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(rank, 2);
        assert_eq!(piv, vec![0, 1]);

        let m = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let (r, rank, piv) = rref(&m);
        assert_eq!(r, Matrix::from_i64_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(rank, 1);
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn kernel_and_image_basics() {
        assert_eq!(kernel(&Matrix::zeros(3, 3)), Subspace::full(3));
        assert_eq!(kernel(&Matrix::identity(3)), Subspace::zero(3));
        assert_eq!(image(&Matrix::identity(3)), Subspace::full(3));
        let m = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(image(&m), Subspace::span(2, [v(&[1, 2])]));
        assert_eq!(kernel(&m), Subspace::span(2, [v(&[-2, 1])]));
    }

    #[test]
    fn image_of_single_nilpotent_chain() {
        // e3 -> e2 -> e1 -> 0
        let d = Matrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(image(&d).dim(), 2);
        assert_eq!(kernel(&d).dim(), 1);
    }

    #[test]
    fn intersect_and_sum_of_lines() {
        let a = Subspace::span(2, [v(&[1, 0])]);
        let b = Subspace::span(2, [v(&[1, 1])]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::zero(2));
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(2));
        assert_eq!(Subspace::full(2).intersect(&b).unwrap(), b);
        assert_eq!(a.sum(&Subspace::full(2)).unwrap(), Subspace::full(2));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(a.intersect(&b), Err(LinalgError::AmbientMismatch { .. })));
        assert!(matches!(a.sum(&b), Err(LinalgError::AmbientMismatch { .. })));
        assert!(matches!(a.contains(&v(&[1, 2, 3])), Err(LinalgError::LengthMismatch { .. })));
    }

    #[test]
    fn contains_basics() {
        let a = Subspace::span(3, [v(&[1, 2, 3]), v(&[0, 1, 1])]);
        assert!(a.contains(&v(&[0, 0, 0])).unwrap());
        for col in a.vectors() {
            assert!(a.contains(&col).unwrap());
        }
        assert!(a.contains(&v(&[1, 3, 4])).unwrap());
        assert!(!a.contains(&v(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn quotient_basics() {
        let plane = Subspace::full(2);
        let q = quotient(&plane, &plane).unwrap();
        assert_eq!(q.dim(), 0);
        assert!(q.representatives.is_empty());
        let q = quotient(&plane, &Subspace::zero(2)).unwrap();
        assert_eq!(q.dim(), 2);
        let line = Subspace::span(2, [v(&[1, 1])]);
        assert_eq!(quotient(&line, &plane), Err(LinalgError::NotContained));
        let q = quotient(&plane, &line).unwrap();
        assert_eq!(q.representatives, vec![v(&[1, 0])]);
        assert_eq!(q.class_coordinates(&v(&[3, 1])).unwrap(), v(&[2]));
    }

    #[test]
    fn empty_inverse() {
        assert_eq!(Matrix::zeros(0, 0).inverse(), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::new(2, 2, vec![rat(2), frac(1, 3), rat(-1), rat(5)]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert!(Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_picks_zero_free_variables() {
        let a = Matrix::from_i64_rows(&[&[1, 1, 0]]);
        assert_eq!(solve(&a, &v(&[3])).unwrap(), v(&[3, 0, 0]));
        let a = Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(solve(&a, &v(&[1, 2])).is_none());
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert_eq!(parse_rational("1/3").unwrap(), frac(1, 3));
        assert_eq!(parse_rational(" -4 ").unwrap(), rat(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    // Determinant by cofactor expansion: independent of elimination.
    fn det_laplace(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det_laplace(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combinations(n - 1, k);
        for mut c in combinations(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    fn rank_by_minors(m: &Matrix) -> usize {
        let max = m.rows().min(m.cols());
        for k in (1..=max).rev() {
            for rs in combinations(m.rows(), k) {
                for cs in combinations(m.cols(), k) {
                    let sub: Vec<Vec<Rational>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
                    if !det_laplace(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-3i64..=3, 1i64..=3).prop_map(|(n, d)| frac(n, d))
    }

    fn low_rank_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        (0usize..=n).prop_flat_map(move |r| {
            (
                proptest::collection::vec(small_rational(), n * r),
                proptest::collection::vec(small_rational(), r * n),
            )
                .prop_map(move |(a, b)| &Matrix::new(n, r, a) * &Matrix::new(r, n, b))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rank_matches_minor_oracle(m in low_rank_matrix(6)) {
            prop_assert_eq!(m.rank(), rank_by_minors(&m));
        }

        #[test]
        fn rank_nullity(m in proptest::collection::vec(small_rational(), 20)) {
            let m = Matrix::new(4, 5, m);
            prop_assert_eq!(kernel(&m).dim() + m.rank(), 5);
            let k = kernel(&m);
            prop_assert!((&m * k.basis()).is_zero());
        }

        #[test]
        fn grassmann_identity(
            a in proptest::collection::vec(proptest::collection::vec(small_rational(), 5), 0..4),
            b in proptest::collection::vec(proptest::collection::vec(small_rational(), 5), 0..4),
        ) {
            let a = Subspace::span(5, a);
            let b = Subspace::span(5, b);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(i.is_subspace_of(&a).unwrap() && i.is_subspace_of(&b).unwrap());
            let q = quotient(&s, &a).unwrap();
            prop_assert_eq!(q.dim() + a.dim(), s.dim());
        }

        #[test]
        fn canonical_form_ignores_spanning_set(
            vs in proptest::collection::vec(proptest::collection::vec(small_rational(), 4), 1..4),
            mix in proptest::collection::vec(small_rational(), 9),
        ) {
            let a = Subspace::span(4, vs.clone());
            let mut mixed = vs.clone();
            for (k, c) in mix.iter().enumerate() {
                let i = k % vs.len();
                let j = (k / 3) % vs.len();
                if i != j {
                    let add: Vec<Rational> = mixed[j].iter().map(|x| x * c).collect();
                    for (x, y) in mixed[i].iter_mut().zip(add) {
                        *x += y;
                    }
                }
            }
            mixed.reverse();
            prop_assert_eq!(a, Subspace::span(4, mixed));
        }
    }
}
