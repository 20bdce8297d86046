use super::linalg::{self, eigh, hermitian_part, hermiticity_defect, re, CMat, CVec, HermEig};
use super::{check_square, CompositeSpace, QError, Tolerances};

/// Density matrix on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    space: CompositeSpace,
    matrix: CMat,
}

impl State {
    pub fn new(space: CompositeSpace, matrix: CMat) -> Result<Self, QError> {
        Self::with_tolerances(space, matrix, &Tolerances::default())
    }

    /// Validate Hermiticity, trace and positivity, then store the Hermitian part.
    pub fn with_tolerances(space: CompositeSpace, matrix: CMat, tol: &Tolerances) -> Result<Self, QError> {
        check_square(&matrix, space.dim())?;
        let defect = hermiticity_defect(&matrix);
        if defect > tol.herm {
            return Err(QError::NotHermitian(defect));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(QError::BadTrace(tr));
        }
        let m = hermitian_part(&matrix);
        let min = eigh(&m).min();
        if min < -tol.psd {
            return Err(QError::NotPositive(min));
        }
        Ok(State { space, matrix: m })
    }

    /// Internal constructor for matrices that are density matrices by construction.
    pub(crate) fn from_raw(space: CompositeSpace, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        State { space, matrix: hermitian_part(&matrix) }
    }

    /// Pure state from a vector normalised within the trace tolerance.
    pub fn pure(space: CompositeSpace, v: &CVec) -> Result<Self, QError> {
        if v.len() != space.dim() {
            return Err(QError::DimensionMismatch { expected: space.dim(), found: v.len() });
        }
        let n2 = v.norm_squared();
        if (n2 - 1.0).abs() > Tolerances::default().trace {
            return Err(QError::BadTrace(n2));
        }
        let u = v / re(n2.sqrt());
        Ok(State { space, matrix: linalg::outer(&u) })
    }

    /// Pure state from any nonzero vector, normalising it.
    pub fn pure_normalized(space: CompositeSpace, v: &CVec) -> Result<Self, QError> {
        if v.len() != space.dim() {
            return Err(QError::DimensionMismatch { expected: space.dim(), found: v.len() });
        }
        let n = v.norm();
        if n == 0.0 {
            return Err(QError::ZeroVector);
        }
        Ok(State { space, matrix: linalg::outer(&(v / re(n))) })
    }

    pub fn basis(space: CompositeSpace, i: usize) -> Result<Self, QError> {
        let d = space.dim();
        if i >= d {
            return Err(QError::DimensionMismatch { expected: d, found: i + 1 });
        }
        Ok(State { matrix: linalg::outer(&linalg::ket(d, i)), space })
    }

    pub fn maximally_mixed(space: CompositeSpace) -> Self {
        let d = space.dim();
        State { matrix: linalg::identity(d) * re(1.0 / d as f64), space }
    }

    /// Convex combination; weights must be a probability vector.
    pub fn mixture(parts: &[(f64, &State)]) -> Result<Self, QError> {
        let first = parts.first().ok_or(QError::Malformed("empty mixture".into()))?;
        let space = first.1.space.clone();
        let mut m = linalg::zeros(space.dim(), space.dim());
        for (w, s) in parts {
            if s.space != space {
                return Err(QError::DimensionMismatch { expected: space.dim(), found: s.dim() });
            }
            if *w < 0.0 {
                return Err(QError::Malformed("negative mixture weight".into()));
            }
            m += &s.matrix * re(*w);
        }
        State::new(space, m)
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn eig(&self) -> HermEig {
        eigh(&self.matrix)
    }

    pub fn tensor(&self, other: &State) -> State {
        State { space: self.space.tensor(&other.space), matrix: linalg::kron(&self.matrix, &other.matrix) }
    }

    /// `rho^{(x)m}`.
    pub fn tensor_power(&self, m: usize) -> State {
        let mut out = self.clone();
        for _ in 1..m.max(1) {
            out = out.tensor(self);
        }
        out
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<State, QError> {
        let sub = self.space.subspace(keep)?;
        let m = linalg::partial_trace_matrix(&self.matrix, &self.space.factor_dims, keep);
        Ok(State { space: sub, matrix: m })
    }

    /// Same matrix viewed on a different factorisation of the same total dimension.
    pub fn reshaped(&self, space: CompositeSpace) -> Result<State, QError> {
        if space.dim() != self.dim() {
            return Err(QError::DimensionMismatch { expected: self.dim(), found: space.dim() });
        }
        Ok(State { space, matrix: self.matrix.clone() })
    }

    /// `U rho U^dagger` for a unitary on the same space.
    pub fn conjugate(&self, u: &CMat) -> State {
        State::from_raw(self.space.clone(), u * &self.matrix * u.adjoint())
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_prod(&self.matrix, &self.matrix).re
    }
}

/// Hermitian operator on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    space: CompositeSpace,
    matrix: CMat,
}

impl Observable {
    pub fn new(space: CompositeSpace, matrix: CMat) -> Result<Self, QError> {
        check_square(&matrix, space.dim())?;
        let defect = hermiticity_defect(&matrix);
        if defect > Tolerances::default().herm {
            return Err(QError::NotHermitian(defect));
        }
        Ok(Observable { space, matrix: hermitian_part(&matrix) })
    }

    pub(crate) fn from_raw(space: CompositeSpace, matrix: CMat) -> Self {
        Observable { space, matrix: hermitian_part(&matrix) }
    }

    /// Diagonal observable from its eigenvalues in the standard basis.
    pub fn diagonal(space: CompositeSpace, levels: &[f64]) -> Result<Self, QError> {
        if levels.len() != space.dim() {
            return Err(QError::DimensionMismatch { expected: space.dim(), found: levels.len() });
        }
        let mut m = linalg::zeros(levels.len(), levels.len());
        for (i, &e) in levels.iter().enumerate() {
            m[(i, i)] = re(e);
        }
        Ok(Observable { space, matrix: m })
    }

    pub fn zero(space: CompositeSpace) -> Self {
        let d = space.dim();
        Observable { space, matrix: linalg::zeros(d, d) }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn eig(&self) -> HermEig {
        eigh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().min()
    }

    pub fn spread(&self) -> f64 {
        linalg::spectral_spread(&self.matrix)
    }

    /// `H - lambda_min(H) 1`, so that the ground energy is zero.
    pub fn ground_shifted(&self) -> Observable {
        let lo = self.min_eigenvalue();
        let m = &self.matrix - linalg::identity(self.dim()) * re(lo);
        Observable { space: self.space.clone(), matrix: m }
    }

    /// `H (x) 1 + 1 (x) H'`.
    pub fn tensor_sum(&self, other: &Observable) -> Observable {
        let a = linalg::kron(&self.matrix, &linalg::identity(other.dim()));
        let b = linalg::kron(&linalg::identity(self.dim()), &other.matrix);
        Observable { space: self.space.tensor(&other.space), matrix: a + b }
    }

    pub fn expectation(&self, s: &State) -> f64 {
        linalg::trace_prod(s.matrix(), &self.matrix).re
    }

    pub fn variance(&self, s: &State) -> f64 {
        let mean = self.expectation(s);
        let sq = &self.matrix * &self.matrix;
        (linalg::trace_prod(s.matrix(), &sq).re - mean * mean).max(0.0)
    }

    pub fn scaled(&self, k: f64) -> Observable {
        Observable { space: self.space.clone(), matrix: &self.matrix * re(k) }
    }
}
