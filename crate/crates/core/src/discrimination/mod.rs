//! Binary state discrimination, irreversibility and recovery errors.

use thiserror::Error;

use crate::channels::{Channel, ChannelError, Implementation, Povm};
use crate::qcore::info::purified_distance_matrix;
use crate::qcore::linalg::{self, psd_sqrt, re, CVec};
use crate::qcore::{fidelity, CompositeSpace, QError, State, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscriminationError {
    #[error("test states are not orthogonal (fidelity {0:e})")]
    NotOrthogonal(f64),
    #[error("prior {0} is outside [0, 1]")]
    BadPrior(f64),
    #[error("the two states live on different spaces")]
    SpaceMismatch,
    #[error("measurement must have exactly two outcomes")]
    NotBinary,
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] QError),
}

/// Binary ensemble `{(p, rho1), (1-p, rho2)}`.
#[derive(Clone, Debug)]
pub struct TestEnsemble {
    rho1: State,
    rho2: State,
    p: f64,
    require_orthogonal: bool,
}

impl TestEnsemble {
    /// Ensemble of orthogonal states, as required for irreversibility.
    pub fn orthogonal(rho1: State, rho2: State, p: f64) -> Result<Self, DiscriminationError> {
        let e = TestEnsemble::general(rho1, rho2, p)?;
        let f = fidelity(&e.rho1, &e.rho2);
        if f > Tolerances::default().orth {
            return Err(DiscriminationError::NotOrthogonal(f));
        }
        Ok(TestEnsemble { require_orthogonal: true, ..e })
    }

    pub fn general(rho1: State, rho2: State, p: f64) -> Result<Self, DiscriminationError> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(DiscriminationError::BadPrior(p));
        }
        if rho1.space() != rho2.space() {
            return Err(DiscriminationError::SpaceMismatch);
        }
        Ok(TestEnsemble { rho1, rho2, p, require_orthogonal: false })
    }

    /// Orthogonal pair of pure states.
    pub fn pure_pair(space: &CompositeSpace, psi1: &CVec, psi2: &CVec, p: f64) -> Result<Self, DiscriminationError> {
        TestEnsemble::orthogonal(State::pure_normalized(space.clone(), psi1)?, State::pure_normalized(space.clone(), psi2)?, p)
    }

    pub fn rho1(&self) -> &State {
        &self.rho1
    }

    pub fn rho2(&self) -> &State {
        &self.rho2
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> [f64; 2] {
        [self.p, 1.0 - self.p]
    }

    pub fn states(&self) -> [&State; 2] {
        [&self.rho1, &self.rho2]
    }

    pub fn space(&self) -> &CompositeSpace {
        self.rho1.space()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.require_orthogonal
    }

    pub fn with_prior(&self, p: f64) -> Result<Self, DiscriminationError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(DiscriminationError::BadPrior(p));
        }
        Ok(TestEnsemble { p, ..self.clone() })
    }

    /// `{(p, L(rho1)), (1-p, L(rho2))}`; orthogonality is not required of the image.
    pub fn image(&self, ch: &Channel) -> Result<TestEnsemble, DiscriminationError> {
        Ok(TestEnsemble { rho1: ch.apply(&self.rho1)?, rho2: ch.apply(&self.rho2)?, p: self.p, require_orthogonal: false })
    }

    /// `p rho1 + (1-p) rho2`.
    pub fn average(&self) -> State {
        State::from_raw(self.space().clone(), self.rho1.matrix() * re(self.p) + self.rho2.matrix() * re(1.0 - self.p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    Helstrom,
    Supplied,
}

#[derive(Clone, Debug)]
pub struct DiscriminationResult {
    pub p_fail: f64,
    pub povm: Povm,
    pub method: Method,
}

/// `sum_k q_k Tr[(1 - E_k) sigma_k]`.
pub fn p_fail(ens: &TestEnsemble, povm: &Povm) -> Result<f64, DiscriminationError> {
    if povm.len() != 2 {
        return Err(DiscriminationError::NotBinary);
    }
    if povm.dim() != ens.space().dim() {
        return Err(DiscriminationError::SpaceMismatch);
    }
    let d = povm.dim();
    let mut total = 0.0;
    for ((w, s), e) in ens.weights().iter().zip(ens.states()).zip(povm.effects()) {
        total += w * linalg::trace_prod(&(linalg::identity(d) - e), s.matrix()).re;
    }
    Ok(total)
}

/// Optimal two-outcome measurement: projector onto the positive part of `q1 s1 - q2 s2`.
///
/// Eigenvalues within `tol_psd` of zero are assigned to the second effect.
pub fn helstrom(ens: &TestEnsemble) -> DiscriminationResult {
    let [q1, q2] = ens.weights();
    let x = ens.rho1.matrix() * re(q1) - ens.rho2.matrix() * re(q2);
    let tol = Tolerances::default().psd;
    let pi_plus = linalg::eigh(&x).projector(|l| l > tol);
    let d = x.nrows();
    let povm = Povm::new(vec![pi_plus.clone(), linalg::identity(d) - pi_plus]).expect("projector pair is a POVM");
    let pf = p_fail(ens, &povm).expect("dimensions agree by construction");
    DiscriminationResult { p_fail: pf, povm, method: Method::Helstrom }
}

/// `(1 - || q1 s1 - q2 s2 ||_1) / 2`.
pub fn helstrom_closed_form(ens: &TestEnsemble) -> f64 {
    let [q1, q2] = ens.weights();
    let x = ens.rho1.matrix() * re(q1) - ens.rho2.matrix() * re(q2);
    0.5 * (1.0 - linalg::trace_norm(&x))
}

/// Kernel dimension of `q1 s1 - q2 s2` (eigenvalues within `tol_psd` of zero).
pub fn helstrom_kernel_dim(ens: &TestEnsemble) -> usize {
    let [q1, q2] = ens.weights();
    let x = ens.rho1.matrix() * re(q1) - ens.rho2.matrix() * re(q2);
    let tol = Tolerances::default().psd;
    linalg::eigvalsh(&x).iter().filter(|l| l.abs() <= tol).count()
}

#[derive(Clone, Debug)]
pub struct IrreversibilityReport {
    /// `sqrt(P_fail)` of the image ensemble.
    pub delta: f64,
    pub p_fail: f64,
    pub image: TestEnsemble,
    pub povm: Povm,
}

/// Irreversibility of `ch` on an orthogonal ensemble.
pub fn irreversibility(ch: &Channel, ens: &TestEnsemble) -> Result<IrreversibilityReport, DiscriminationError> {
    if !ens.is_orthogonal() {
        let f = fidelity(ens.rho1(), ens.rho2());
        return Err(DiscriminationError::NotOrthogonal(f));
    }
    let image = ens.image(ch)?;
    let h = helstrom(&image);
    let pf = h.p_fail.max(0.0);
    Ok(IrreversibilityReport { delta: pf.sqrt(), p_fail: pf, image, povm: h.povm })
}

/// Measure-and-prepare recovery `X -> sum_i Tr[Q_i X] rho_i`.
pub fn recovery_from_povm(q: &Povm, ens: &TestEnsemble) -> Result<Channel, DiscriminationError> {
    if q.len() != 2 {
        return Err(DiscriminationError::NotBinary);
    }
    let in_space = CompositeSpace::single(q.dim());
    let outputs = [ens.rho1.clone(), ens.rho2.clone()];
    Ok(Channel::measure_and_prepare(in_space, ens.space().clone(), q.effects(), &outputs)?)
}

/// `sum_k p_k D_F(rho_k, R(L(rho_k)))^2`.
pub fn avg_recovery_error(ch: &Channel, ens: &TestEnsemble, rec: &Channel) -> Result<f64, DiscriminationError> {
    let mut total = 0.0;
    for (w, s) in ens.weights().iter().zip(ens.states()) {
        let back = rec.apply_matrix(&ch.apply_matrix(s.matrix()));
        let d = purified_distance_matrix(s.matrix(), &back);
        total += w * d * d;
    }
    Ok(total)
}

/// `eps = sqrt( sum_i Tr[P_i rho P_i (1 - L^dagger(Q_i))] )`.
pub fn epsilon_approx(rho: &State, p: &Povm, q: &Povm, ch: &Channel) -> Result<f64, DiscriminationError> {
    if p.len() != q.len() {
        return Err(DiscriminationError::NotBinary);
    }
    if p.dim() != rho.dim() || q.dim() != ch.out_space().dim() || ch.in_space().dim() != rho.dim() {
        return Err(DiscriminationError::SpaceMismatch);
    }
    let d = rho.dim();
    let mut total = 0.0;
    for (pk, qk) in p.effects().iter().zip(q.effects()) {
        let block = pk * rho.matrix() * pk;
        let heis = ch.adjoint_apply_matrix(qk);
        total += linalg::trace_prod(&block, &(linalg::identity(d) - heis)).re;
    }
    Ok(total.max(0.0).sqrt())
}

/// Left-hand side and bound of the measurement-disturbance inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisturbanceGap {
    pub lhs: f64,
    pub bound: f64,
    pub epsilon: f64,
}

/// Compare `V^dagger L_Q(V (rho (x) eta) V^dagger) V` with `L_P(rho) (x) eta`.
///
/// `L_Q` acts on the kept output factors of the implementation. The register
/// is classical on both sides, so the trace norm splits into one term per outcome.
pub fn measurement_disturbance_gap(
    rho: &State,
    p: &Povm,
    q: &Povm,
    imp: &Implementation,
) -> Result<DisturbanceGap, DiscriminationError> {
    if p.len() != q.len() {
        return Err(DiscriminationError::NotBinary);
    }
    let dims = imp.out_space().factor_dims.clone();
    let keep = imp.keep().to_vec();
    let v = imp.unitary();
    let eta = imp.ancilla().matrix();
    let joint = linalg::kron(rho.matrix(), eta);
    let evolved = v * &joint * v.adjoint();
    let mut lhs = 0.0;
    for (pk, qk) in p.effects().iter().zip(q.effects()) {
        let sq = linalg::embed_operator(&psd_sqrt(qk), &dims, &keep);
        let back = v.adjoint() * (&sq * &evolved * &sq) * v;
        let sp = psd_sqrt(pk);
        let target = linalg::kron(&(&sp * rho.matrix() * &sp), eta);
        lhs += linalg::trace_norm(&(back - target));
    }
    let ch = imp.channel();
    let eps = epsilon_approx(rho, p, q, &ch)?;
    Ok(DisturbanceGap { lhs, bound: 4.0 * eps + eps * eps, epsilon: eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{c64, CMat};
    use crate::qcore::random;

    fn qubit(a: f64, b: f64) -> CVec {
        CVec::from_vec(vec![re(a), re(b)])
    }

    #[test]
    fn helstrom_for_identical_states_is_prior() {
        let sp = CompositeSpace::single(2);
        let s = State::maximally_mixed(sp);
        let e = TestEnsemble::general(s.clone(), s, 0.3).unwrap();
        let r = helstrom(&e);
        assert!((r.p_fail - 0.3).abs() < 1e-12);
        assert!((helstrom_closed_form(&e) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_pure_states_are_perfectly_distinguishable() {
        let sp = CompositeSpace::single(2);
        let e = TestEnsemble::pure_pair(&sp, &qubit(1.0, 1.0), &qubit(1.0, -1.0), 0.5).unwrap();
        assert!(helstrom(&e).p_fail.abs() < 1e-12);
        let bad = TestEnsemble::pure_pair(&sp, &qubit(1.0, 0.0), &qubit(1.0, 1.0), 0.5);
        assert!(matches!(bad, Err(DiscriminationError::NotOrthogonal(_))));
    }

    #[test]
    fn pure_state_helstrom_matches_overlap_formula() {
        let sp = CompositeSpace::single(2);
        let a = State::pure_normalized(sp.clone(), &qubit(1.0, 0.0)).unwrap();
        let b = State::pure_normalized(sp, &CVec::from_vec(vec![re(0.6), c64(0.0, 0.8)])).unwrap();
        let p = 0.4;
        let e = TestEnsemble::general(a, b, p).unwrap();
        let overlap2 = 0.36;
        let want = 0.5 * (1.0 - (1.0 - 4.0 * p * (1.0 - p) * overlap2).sqrt());
        assert!((helstrom(&e).p_fail - want).abs() < 1e-12);
    }

    #[test]
    fn irreversibility_of_dephasing() {
        let sp = CompositeSpace::single(2);
        let e = TestEnsemble::pure_pair(&sp, &qubit(1.0, 1.0), &qubit(1.0, -1.0), 0.5).unwrap();
        let deph = Channel::measure_and_prepare(
            sp.clone(),
            sp.clone(),
            &[linalg::outer(&qubit(1.0, 0.0)), linalg::outer(&qubit(0.0, 1.0))],
            &[State::basis(sp.clone(), 0).unwrap(), State::basis(sp.clone(), 1).unwrap()],
        )
        .unwrap();
        let r = irreversibility(&deph, &e).unwrap();
        assert!((r.delta - 0.5f64.sqrt()).abs() < 1e-12);
        let id = irreversibility(&Channel::identity(sp), &e).unwrap();
        assert!(id.delta < 1e-7);
    }

    #[test]
    fn helstrom_recovery_reaches_delta_squared() {
        let sp = CompositeSpace::single(3);
        let mut r = random::rng(21);
        let u = random::haar_unitary(3, &mut r);
        let e = TestEnsemble::pure_pair(&sp, &u.column(0).into_owned(), &u.column(1).into_owned(), 0.35).unwrap();
        let ch = Channel::new(sp.clone(), sp.clone(), {
            let w = random::haar_unitary(6, &mut r);
            (0..2).map(|k| CMat::from_fn(3, 3, |o, i| w[(o * 2 + k, i)])).collect()
        })
        .unwrap();
        let rep = irreversibility(&ch, &e).unwrap();
        let rec = recovery_from_povm(&rep.povm, &e).unwrap();
        let err = avg_recovery_error(&ch, &e, &rec).unwrap();
        assert!((err - rep.delta * rep.delta).abs() < 1e-8, "{err} vs {}", rep.delta * rep.delta);
    }

    #[test]
    fn disturbance_gap_is_zero_for_ideal_readout() {
        let sp = CompositeSpace::single(2);
        let p = Povm::two_outcome(linalg::outer(&qubit(1.0, 0.0))).unwrap();
        let imp = crate::channels::stinespring(&Channel::identity(sp.clone())).unwrap();
        let rho = random::random_state(&sp, &mut random::rng(3));
        let g = measurement_disturbance_gap(&rho, &p, &p, &imp).unwrap();
        assert!(g.lhs < 1e-12 && g.epsilon < 1e-7);
    }
}
