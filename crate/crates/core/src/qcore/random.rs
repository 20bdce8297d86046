//! Seeded random states, unitaries and measurements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::linalg::{self, c64, re, CMat, CVec};
use super::{CompositeSpace, State};

pub type QRng = ChaCha8Rng;

pub fn rng(seed: u64) -> QRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> QRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn complex_normal<R: Rng + ?Sized>(r: &mut R) -> num_complex::Complex64 {
    let a: f64 = r.sample(StandardNormal);
    let b: f64 = r.sample(StandardNormal);
    c64(a, b) * re(std::f64::consts::FRAC_1_SQRT_2)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, r: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(r))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, r: &mut R) -> CMat {
    let z = ginibre(d, d, r);
    let qr = z.qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = rr[(j, j)];
        let ph = if diag.norm() > 0.0 { diag / re(diag.norm()) } else { re(1.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, r: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| complex_normal(r));
    let n = v.norm();
    v / re(n)
}

pub fn random_pure<R: Rng + ?Sized>(space: &CompositeSpace, r: &mut R) -> State {
    let v = random_unit_vector(space.dim(), r);
    State::from_raw(space.clone(), linalg::outer(&v))
}

/// Induced-measure mixed state of the given rank.
pub fn random_state_rank<R: Rng + ?Sized>(space: &CompositeSpace, rank: usize, r: &mut R) -> State {
    let d = space.dim();
    let g = ginibre(d, rank.clamp(1, d), r);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    State::from_raw(space.clone(), m / re(tr))
}

/// Mixed state with rank drawn uniformly from `1..=d`.
pub fn random_state<R: Rng + ?Sized>(space: &CompositeSpace, r: &mut R) -> State {
    let rank = r.random_range(1..=space.dim());
    random_state_rank(space, rank, r)
}

/// Two-outcome POVM `{U D U^dagger, 1 - U D U^dagger}` with `D` diagonal in `[0,1]`.
pub fn random_two_outcome_effect<R: Rng + ?Sized>(d: usize, r: &mut R) -> CMat {
    let u = haar_unitary(d, r);
    let mut diag = linalg::zeros(d, d);
    for i in 0..d {
        diag[(i, i)] = re(r.random::<f64>());
    }
    &u * diag * u.adjoint()
}

/// Projector of random rank in `1..d` onto a Haar-random subspace.
pub fn random_projector<R: Rng + ?Sized>(d: usize, r: &mut R) -> CMat {
    let rank = if d > 1 { r.random_range(1..d) } else { 1 };
    let u = haar_unitary(d, r);
    let mut p = linalg::zeros(d, d);
    for k in 0..rank {
        let v = u.column(k).into_owned();
        p += linalg::outer(&v);
    }
    p
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, r: &mut R) -> CMat {
    let g = ginibre(d, d, r);
    (&g + g.adjoint()) * re(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut r = rng(7);
        for d in 1..6 {
            let u = haar_unitary(d, &mut r);
            assert!(linalg::unitarity_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a: f64 = rng_stream(3, 9).random();
        let b: f64 = rng_stream(3, 9).random();
        let c: f64 = rng_stream(3, 10).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_states_are_valid() {
        let mut r = rng(1);
        let sp = CompositeSpace::new(vec![2, 3]).unwrap();
        for _ in 0..20 {
            let s = random_state(&sp, &mut r);
            assert!(State::new(sp.clone(), s.matrix().clone()).is_ok());
        }
    }
}
