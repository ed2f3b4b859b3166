//! Dense complex vectors and matrices, Kronecker products and subsystem
//! embedding for the 2⊗2⊗2⊗2 bench space.
//!
//! Storage is nalgebra's column-major `DMatrix`; the largest object in the
//! system is 16×16 so nothing here is sparse.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{Slot, Source, DIM, SOURCE_DIM};
use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Default absolute tolerance for entrywise comparisons.
pub const TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(DVector<Complex64>);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().copied().map(re).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![ZERO; dim])
    }

    /// Unit vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut v = Self::zeros(dim)?;
        v.0[index] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn get(&self, index: usize) -> Option<Complex64> {
        self.0.get(index).copied()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    /// `(self|other)`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_dim(other.dim())?;
        Ok(self.0.dotc(&other.0))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Indices of entries with modulus above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i].norm() > tol).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim() == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }
}

impl From<DVector<Complex64>> for ComplexVector {
    /// Panics on an empty vector.
    fn from(v: DVector<Complex64>) -> Self {
        assert!(!v.is_empty(), "empty complex vector");
        Self(v)
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// 2×2 matrix `[[a, b], [c, d]]`.
    pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[a, b, c, d]))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of dimension 0");
        Self(DMatrix::identity(n, n))
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self(DMatrix::from_diagonal(&DVector::from_column_slice(
            entries,
        ))))
    }

    /// `|u)(v|`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        Self(u.0.clone() * v.0.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Complex64> {
        self.0.get((row, col)).copied()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.rows(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: v.dim(),
            });
        }
        Ok(ComplexVector(&self.0 * &v.0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    /// `‖AB − BA‖_max ≤ tol`.
    pub fn commutes_with(&self, other: &Self, tol: f64) -> Result<bool> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.max_abs_diff(&ba)? <= tol)
    }

    pub fn trace(&self) -> Result<Complex64> {
        self.require_square()?;
        Ok(self.0.trace())
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_square()?;
        let eig = self.0.clone().symmetric_eigenvalues();
        let mut values: Vec<f64> = eig.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                found: other.rows(),
            });
        }
        if self.cols() != other.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.cols(),
            });
        }
        Ok(())
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    /// Panics on a matrix with a zero dimension.
    fn from(m: DMatrix<Complex64>) -> Self {
        assert!(m.nrows() > 0 && m.ncols() > 0, "empty complex matrix");
        Self(m)
    }
}

// Operator sugar for same-shape arithmetic; shape errors panic here, use the
// `try_*` forms where shapes are not statically known.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul<&ComplexVector> for &ComplexMatrix {
    type Output = ComplexVector;
    fn mul(self, rhs: &ComplexVector) -> ComplexVector {
        self.apply(rhs).expect("matrix-vector shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: Self) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "vector sum shape mismatch");
        ComplexVector(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: Self) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "vector difference shape mismatch");
        ComplexVector(&self.0 - &rhs.0)
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{z:.6}")?;
        }
        f.write_str(")")
    }
}

/// Kronecker product; the result has `a.rows·b.rows` rows.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

fn require_2x2(op: &ComplexMatrix) -> Result<()> {
    if op.rows() == 2 && op.cols() == 2 {
        Ok(())
    } else {
        Err(Error::NotTwoByTwo {
            rows: op.rows(),
            cols: op.cols(),
        })
    }
}

/// Lifts a 2×2 operator onto one tensor factor of the 16-dimensional space.
pub fn embed(op: &ComplexMatrix, slot: Slot) -> Result<ComplexMatrix> {
    require_2x2(op)?;
    let id = ComplexMatrix::identity(2);
    let factors: [&ComplexMatrix; 4] =
        std::array::from_fn(|k| if k == slot.index() { op } else { &id });
    Ok(factors[0].kron(factors[1]).kron(factors[2]).kron(factors[3]))
}

/// Like [`embed`], addressing the slot by its position 0..=3.
pub fn embed_at(op: &ComplexMatrix, slot: usize) -> Result<ComplexMatrix> {
    embed(op, Slot::try_from(slot)?)
}

/// Lifts a 4×4 operator on one source's path⊗pol space onto the full space.
pub fn embed_source(op: &ComplexMatrix, source: Source) -> Result<ComplexMatrix> {
    if op.rows() != SOURCE_DIM || op.cols() != SOURCE_DIM {
        return Err(Error::NotFourByFour {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    let id = ComplexMatrix::identity(SOURCE_DIM);
    let full = match source {
        Source::One => op.kron(&id),
        Source::Two => id.kron(op),
    };
    debug_assert_eq!(full.rows(), DIM);
    Ok(full)
}

/// `‖m†m − I‖_max ≤ tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    m.require_square()?;
    let gram = m.adjoint().matmul(m)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows()))? <= tol)
}

/// Transverse field components of a beam, in arbitrary field units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    pub fn new(ex: Complex64, ey: Complex64) -> Self {
        Self { ex, ey }
    }

    /// `I₀ = |Ex|² + |Ey|²`.
    pub fn intensity(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    /// Unit-intensity copy, or `None` for a dark beam.
    pub fn normalized(&self) -> Option<Self> {
        let i0 = self.intensity();
        (i0 > 0.0).then(|| {
            let s = 1.0 / i0.sqrt();
            Self::new(self.ex * s, self.ey * s)
        })
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector(DVector::from_vec(vec![self.ex, self.ey]))
    }
}

/// Polarization angles of `e^{iφ}(cos θ, e^{iχ} sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolState {
    pub theta: f64,
    pub chi: f64,
    pub phi_global: f64,
}

pub fn make_pol_state(p: PolState) -> ComplexVector {
    let g = cis(p.phi_global);
    let first = g * p.theta.cos();
    let second = g * cis(p.chi) * p.theta.sin();
    ComplexVector(DVector::from_vec(vec![first, second]))
}
