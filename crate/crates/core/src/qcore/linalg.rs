//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Standard basis vector `|i>` in dimension `d`.
pub fn ket(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = re(1.0);
    v
}

/// `|v><v|` (not normalised).
pub fn outer(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// Column vector as a `d x 1` matrix.
pub fn column(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for m in ms {
        out = out.kronecker(*m);
    }
    out
}

pub fn trace(a: &CMat) -> Complex64 {
    a.trace()
}

/// `Tr[a b]` without forming the product.
pub fn trace_prod(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * re(0.5)
}

/// Largest entrywise modulus of `a - a^dagger`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.vectors.column(i).into_owned()
    }

    /// `sum_i f(lambda_i) |v_i><v_i|`.
    pub fn rebuild(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = re(f(lam));
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Projector on the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> CMat {
        self.rebuild(|x| if keep(x) { 1.0 } else { 0.0 })
    }
}

/// Hermitian eigendecomposition (input is symmetrised first).
pub fn eigh(a: &CMat) -> HermEig {
    let n = a.nrows();
    if n == 0 {
        return HermEig { values: Vec::new(), vectors: zeros(0, 0) };
    }
    let sym = hermitian_part(a);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermEig { values, vectors }
}

pub fn eigvalsh(a: &CMat) -> Vec<f64> {
    eigh(a).values
}

/// Matrix function of a Hermitian matrix through its eigendecomposition.
pub fn herm_fn(a: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    eigh(a).rebuild(f)
}

/// Square root of a (nearly) PSD matrix; negative eigenvalues are clamped to 0.
pub fn psd_sqrt(a: &CMat) -> CMat {
    herm_fn(a, |x| x.max(0.0).sqrt())
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    a.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Schatten 1-norm (sum of singular values).
pub fn trace_norm(a: &CMat) -> f64 {
    if hermiticity_defect(a) <= 1e-14 * (1.0 + max_abs(a)) {
        eigvalsh(a).iter().map(|x| x.abs()).sum()
    } else {
        singular_values(a).iter().sum()
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

/// Largest minus smallest eigenvalue.
pub fn spectral_spread(a: &CMat) -> f64 {
    let e = eigvalsh(a);
    match (e.first(), e.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    }
}

/// `max |(U^dagger U - I)_ij|`.
pub fn unitarity_defect(u: &CMat) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.ncols())))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Permutation matrix sending factor order `dims` to `dims[perm[0]], dims[perm[1]], ...`.
pub fn permutation_matrix(dims: &[usize], perm: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let mut m = zeros(total, total);
    let mut digits = vec![0usize; dims.len()];
    for idx in 0..total {
        let mut rem = idx;
        for (k, s) in old_strides.iter().enumerate() {
            digits[k] = rem / s;
            rem %= s;
        }
        let new_idx: usize = perm.iter().enumerate().map(|(pos, &p)| digits[p] * new_strides[pos]).sum();
        m[(new_idx, idx)] = re(1.0);
    }
    m
}

/// Reorder the tensor factors of an operator.
pub fn permute_factors(a: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let p = permutation_matrix(dims, perm);
    &p * a * p.adjoint()
}

/// Partial trace keeping the listed factors (output keeps ascending factor order).
pub fn partial_trace_matrix(a: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let dk: usize = kept.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();
    let perm: Vec<usize> = kept.iter().chain(traced.iter()).copied().collect();
    let is_identity_perm = perm.iter().enumerate().all(|(i, &p)| i == p);
    let b = if is_identity_perm { a.clone() } else { permute_factors(a, dims, &perm) };
    let mut out = zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dt {
                acc += b[(i * dt + k, j * dt + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Operator acting as `op` on the `targets` factors (in the given order) and identity elsewhere.
pub fn embed_operator(op: &CMat, dims: &[usize], targets: &[usize]) -> CMat {
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let d_rest: usize = rest.iter().map(|&i| dims[i]).product();
    let big = kron(op, &identity(d_rest));
    let order: Vec<usize> = targets.iter().chain(rest.iter()).copied().collect();
    let ordered_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    let mut inverse = vec![0; order.len()];
    for (pos, &f) in order.iter().enumerate() {
        inverse[f] = pos;
    }
    permute_factors(&big, &ordered_dims, &inverse)
}

/// Modified Gram-Schmidt completion of `vectors` (assumed orthonormal) to a basis of `C^d`,
/// drawing candidates from the standard basis in index order.
pub fn complete_basis(vectors: &[CVec], d: usize) -> Vec<CVec> {
    let mut basis: Vec<CVec> = vectors.to_vec();
    for i in 0..d {
        if basis.len() == d {
            break;
        }
        let mut cand = ket(d, i);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&cand);
                cand -= b * proj;
            }
        }
        let n = cand.norm();
        if n > 1e-8 {
            basis.push(cand / re(n));
        }
    }
    basis
}

/// Orthonormal basis of the column space of a PSD matrix, using eigenvalues above `tol`.
pub fn support_basis(a: &CMat, tol: f64) -> Vec<CVec> {
    let e = eigh(a);
    (0..e.values.len()).filter(|&i| e.values[i] > tol).map(|i| e.vector(i)).collect()
}

/// Unitary `exp(-i t G)` for Hermitian `G`.
pub fn unitary_exp(g: &CMat, t: f64) -> CMat {
    let e = eigh(g);
    let n = e.values.len();
    let mut scaled = e.vectors.clone();
    for (j, &lam) in e.values.iter().enumerate() {
        let ph = Complex64::from_polar(1.0, -t * lam);
        for i in 0..n {
            scaled[(i, j)] *= ph;
        }
    }
    scaled * e.vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
    }

    #[test]
    fn eigh_sorted_and_reconstructs() {
        let a = CMat::from_row_slice(2, 2, &[re(2.0), c64(0.0, 1.0), c64(0.0, -1.0), re(2.0)]);
        let e = eigh(&a);
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
        assert!(max_abs(&(e.rebuild(|x| x) - &a)) < 1e-12);
    }

    #[test]
    fn trace_norm_of_pauli() {
        assert!((trace_norm(&pauli_x()) - 2.0).abs() < 1e-12);
        let nilpotent = CMat::from_row_slice(2, 2, &[re(0.0), re(3.0), re(0.0), re(0.0)]);
        assert!((trace_norm(&nilpotent) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = CMat::from_row_slice(2, 2, &[re(0.7), c64(0.1, 0.2), c64(0.1, -0.2), re(0.3)]);
        let b = CMat::from_row_slice(3, 3, &[re(0.5), re(0.0), re(0.0), re(0.0), re(0.25), re(0.0), re(0.0), re(0.0), re(0.25)]);
        let ab = kron(&a, &b);
        assert!(max_abs(&(partial_trace_matrix(&ab, &[2, 3], &[0]) - &a)) < 1e-14);
        assert!(max_abs(&(partial_trace_matrix(&ab, &[2, 3], &[1]) - &b)) < 1e-14);
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = pauli_x();
        let b = identity(3) * re(2.0);
        let ab = kron(&a, &b);
        let ba = permute_factors(&ab, &[2, 3], &[1, 0]);
        assert!(max_abs(&(ba - kron(&b, &a))) < 1e-14);
    }

    #[test]
    fn embed_matches_kron() {
        let x = pauli_x();
        let e = embed_operator(&x, &[2, 3, 2], &[2]);
        assert!(max_abs(&(e - kron(&identity(6), &x))) < 1e-14);
        let e0 = embed_operator(&x, &[2, 3], &[0]);
        assert!(max_abs(&(e0 - kron(&x, &identity(3)))) < 1e-14);
    }

    #[test]
    fn completion_is_orthonormal() {
        let v = CVec::from_vec(vec![re(0.6), re(0.8), re(0.0)]);
        let basis = complete_basis(&[v], 3);
        assert_eq!(basis.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let ip = basis[i].dotc(&basis[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - re(want)).norm() < 1e-12);
            }
        }
    }
}
