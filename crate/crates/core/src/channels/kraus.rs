use crate::qcore::linalg::{self, eigh, re, CMat};
use crate::qcore::{CompositeSpace, Observable, State, Tolerances};

use super::ChannelError;

/// CPTP map between composite spaces in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    in_space: CompositeSpace,
    out_space: CompositeSpace,
    kraus: Vec<CMat>,
}

/// Complete-positivity / trace-preservation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    pub min_choi_eigenvalue: f64,
    pub tp_defect: f64,
}

impl CptpReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.min_choi_eigenvalue >= -tol && self.tp_defect <= tol
    }
}

impl Channel {
    /// Build from Kraus operators and check `sum K^dagger K = 1` within the CPTP tolerance.
    pub fn new(in_space: CompositeSpace, out_space: CompositeSpace, kraus: Vec<CMat>) -> Result<Self, ChannelError> {
        Self::with_tolerance(in_space, out_space, kraus, Tolerances::default().cptp)
    }

    pub fn with_tolerance(
        in_space: CompositeSpace,
        out_space: CompositeSpace,
        kraus: Vec<CMat>,
        tol: f64,
    ) -> Result<Self, ChannelError> {
        if kraus.is_empty() {
            return Err(ChannelError::NoKraus);
        }
        for k in &kraus {
            if k.nrows() != out_space.dim() || k.ncols() != in_space.dim() {
                return Err(ChannelError::KrausShape {
                    expected: (out_space.dim(), in_space.dim()),
                    found: (k.nrows(), k.ncols()),
                });
            }
        }
        let ch = Channel { in_space, out_space, kraus };
        let defect = ch.tp_defect();
        if defect > tol {
            return Err(ChannelError::NotTracePreserving(defect));
        }
        Ok(ch)
    }

    pub(crate) fn from_raw(in_space: CompositeSpace, out_space: CompositeSpace, kraus: Vec<CMat>) -> Self {
        Channel { in_space, out_space, kraus }
    }

    /// Random channel of at least the given Kraus rank (raised until an isometry fits): the first columns of a Haar unitary, cut into blocks.
    pub fn random<R: rand::Rng + ?Sized>(in_space: CompositeSpace, out_space: CompositeSpace, rank: usize, r: &mut R) -> Self {
        let (di, dout) = (in_space.dim(), out_space.dim());
        let rank = rank.max(di.div_ceil(dout)).max(1);
        let u = crate::qcore::random::haar_unitary(dout * rank, r);
        let kraus = (0..rank).map(|k| u.view((k * dout, 0), (dout, di)).into_owned()).collect();
        Channel::from_raw(in_space, out_space, kraus)
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let d = space.dim();
        Channel { in_space: space.clone(), out_space: space, kraus: vec![linalg::identity(d)] }
    }

    pub fn unitary(space: CompositeSpace, u: CMat) -> Result<Self, ChannelError> {
        let defect = linalg::unitarity_defect(&u);
        if defect > Tolerances::default().cptp || u.nrows() != space.dim() {
            return Err(ChannelError::NotUnitary(defect));
        }
        Ok(Channel { in_space: space.clone(), out_space: space, kraus: vec![u] })
    }

    /// `X -> sum_i Tr[E_i X] sigma_i`.
    pub fn measure_and_prepare(
        in_space: CompositeSpace,
        out_space: CompositeSpace,
        effects: &[CMat],
        outputs: &[State],
    ) -> Result<Self, ChannelError> {
        if effects.len() != outputs.len() {
            return Err(ChannelError::Malformed("effects and outputs differ in length".into()));
        }
        let mut kraus = Vec::new();
        let tol = Tolerances::default().psd;
        for (e, s) in effects.iter().zip(outputs) {
            if s.space() != &out_space {
                return Err(ChannelError::SpaceMismatch);
            }
            let ee = eigh(e);
            let es = s.eig();
            for (i, &mu) in ee.values.iter().enumerate() {
                if mu <= tol {
                    continue;
                }
                let b = ee.vector(i);
                for (j, &nu) in es.values.iter().enumerate() {
                    if nu <= tol {
                        continue;
                    }
                    let a = es.vector(j);
                    kraus.push(&a * b.adjoint() * re((mu * nu).sqrt()));
                }
            }
        }
        if kraus.is_empty() {
            kraus.push(linalg::zeros(out_space.dim(), in_space.dim()));
        }
        Channel::new(in_space, out_space, kraus)
    }

    /// Replacement channel `X -> Tr[X] sigma`.
    pub fn replacement(in_space: CompositeSpace, sigma: &State) -> Result<Self, ChannelError> {
        let d = in_space.dim();
        Channel::measure_and_prepare(in_space, sigma.space().clone(), &[linalg::identity(d)], &[sigma.clone()])
    }

    pub fn in_space(&self) -> &CompositeSpace {
        &self.in_space
    }

    pub fn out_space(&self) -> &CompositeSpace {
        &self.out_space
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn apply_matrix(&self, x: &CMat) -> CMat {
        let mut out = linalg::zeros(self.out_space.dim(), self.out_space.dim());
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &State) -> Result<State, ChannelError> {
        if rho.space().dim() != self.in_space.dim() {
            return Err(ChannelError::SpaceMismatch);
        }
        Ok(State::from_raw(self.out_space.clone(), self.apply_matrix(rho.matrix())))
    }

    /// Heisenberg-picture map `Y -> sum K^dagger Y K`.
    pub fn adjoint_apply_matrix(&self, y: &CMat) -> CMat {
        let mut out = linalg::zeros(self.in_space.dim(), self.in_space.dim());
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        out
    }

    pub fn adjoint_apply(&self, y: &Observable) -> Result<Observable, ChannelError> {
        if y.dim() != self.out_space.dim() {
            return Err(ChannelError::SpaceMismatch);
        }
        Ok(Observable::from_raw(self.in_space.clone(), self.adjoint_apply_matrix(y.matrix())))
    }

    /// `self o first`.
    pub fn compose(&self, first: &Channel) -> Result<Channel, ChannelError> {
        if first.out_space.dim() != self.in_space.dim() {
            return Err(ChannelError::SpaceMismatch);
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                kraus.push(a * b);
            }
        }
        Ok(Channel { in_space: first.in_space.clone(), out_space: self.out_space.clone(), kraus })
    }

    /// `self (x) other` on the concatenated spaces.
    pub fn tensor(&self, other: &Channel) -> Channel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(linalg::kron(a, b));
            }
        }
        Channel {
            in_space: self.in_space.tensor(&other.in_space),
            out_space: self.out_space.tensor(&other.out_space),
            kraus,
        }
    }

    /// `id_R (x) self`, with the reference factor first.
    pub fn tensor_with_identity(&self, reference: &CompositeSpace) -> Channel {
        Channel::identity(reference.clone()).tensor(self)
    }

    /// `self (x) id_R`, with the reference factor last.
    pub fn tensor_identity_after(&self, side: &CompositeSpace) -> Channel {
        self.tensor(&Channel::identity(side.clone()))
    }

    /// Unnormalised Choi matrix `sum_ij |i><j| (x) Lambda(|i><j|)` on `in (x) out`.
    pub fn to_choi(&self) -> CMat {
        let (din, dout) = (self.in_space.dim(), self.out_space.dim());
        let mut choi = linalg::zeros(din * dout, din * dout);
        for k in &self.kraus {
            let mut v = linalg::CVec::zeros(din * dout);
            for i in 0..din {
                for o in 0..dout {
                    v[i * dout + o] = k[(o, i)];
                }
            }
            choi += linalg::outer(&v);
        }
        choi
    }

    /// Kraus form recovered from a Choi matrix by eigendecomposition.
    pub fn from_choi(choi: &CMat, in_space: CompositeSpace, out_space: CompositeSpace) -> Result<Channel, ChannelError> {
        let (din, dout) = (in_space.dim(), out_space.dim());
        if choi.nrows() != din * dout || choi.ncols() != din * dout {
            return Err(ChannelError::SpaceMismatch);
        }
        let tol = Tolerances::default();
        let e = eigh(choi);
        if e.min() < -tol.cptp {
            return Err(ChannelError::NotCompletelyPositive(e.min()));
        }
        let mut kraus = Vec::new();
        for (idx, &lam) in e.values.iter().enumerate() {
            if lam <= tol.psd {
                continue;
            }
            let v = e.vector(idx);
            let s = re(lam.sqrt());
            kraus.push(CMat::from_fn(dout, din, |o, i| v[i * dout + o] * s));
        }
        if kraus.is_empty() {
            return Err(ChannelError::NotTracePreserving(1.0));
        }
        Channel::new(in_space, out_space, kraus)
    }

    pub fn tp_defect(&self) -> f64 {
        let mut s = linalg::zeros(self.in_space.dim(), self.in_space.dim());
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        linalg::op_norm(&(s - linalg::identity(self.in_space.dim())))
    }

    pub fn cptp_check(&self) -> CptpReport {
        CptpReport { min_choi_eigenvalue: eigh(&self.to_choi()).min(), tp_defect: self.tp_defect() }
    }

    pub fn ensure_cptp(&self, tol: f64) -> Result<(), ChannelError> {
        let r = self.cptp_check();
        if r.min_choi_eigenvalue < -tol {
            return Err(ChannelError::NotCompletelyPositive(r.min_choi_eigenvalue));
        }
        if r.tp_defect > tol {
            return Err(ChannelError::NotTracePreserving(r.tp_defect));
        }
        Ok(())
    }
}

/// Complete dephasing in the orthonormal basis given by the columns of `basis`.
pub fn dephase(rho: &State, basis: &CMat) -> State {
    let d = rho.dim();
    let mut out = linalg::zeros(d, d);
    for j in 0..basis.ncols() {
        let b = basis.column(j).into_owned();
        let w = b.dotc(&(rho.matrix() * &b));
        out += linalg::outer(&b) * w;
    }
    State::from_raw(rho.space().clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{c64, max_abs};
    use crate::qcore::random;

    fn amplitude_damping(g: f64) -> Channel {
        let k0 = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re((1.0 - g).sqrt())]);
        let k1 = CMat::from_row_slice(2, 2, &[re(0.0), re(g.sqrt()), re(0.0), re(0.0)]);
        Channel::new(CompositeSpace::single(2), CompositeSpace::single(2), vec![k0, k1]).unwrap()
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = CMat::identity(2, 2) * re(0.9);
        let r = Channel::new(CompositeSpace::single(2), CompositeSpace::single(2), vec![k]);
        assert!(matches!(r, Err(ChannelError::NotTracePreserving(_))));
    }

    #[test]
    fn choi_round_trip() {
        let ch = amplitude_damping(0.3);
        let choi = ch.to_choi();
        let back = Channel::from_choi(&choi, CompositeSpace::single(2), CompositeSpace::single(2)).unwrap();
        assert!(max_abs(&(back.to_choi() - &choi)) < 1e-12);
        let report = ch.cptp_check();
        assert!(report.passes(1e-10));
        assert!((choi.trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_duality() {
        let ch = amplitude_damping(0.4);
        let mut r = random::rng(2);
        let rho = random::random_state(&CompositeSpace::single(2), &mut r);
        let y = random::random_hermitian(2, &mut r);
        let lhs = linalg::trace_prod(&ch.apply_matrix(rho.matrix()), &y);
        let rhs = linalg::trace_prod(rho.matrix(), &ch.adjoint_apply_matrix(&y));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn measure_and_prepare_outputs() {
        let sp = CompositeSpace::single(2);
        let p0 = linalg::outer(&linalg::ket(2, 0));
        let p1 = linalg::outer(&linalg::ket(2, 1));
        let plus = State::pure_normalized(sp.clone(), &linalg::CVec::from_vec(vec![re(1.0), re(1.0)])).unwrap();
        let mixed = State::maximally_mixed(sp.clone());
        let ch = Channel::measure_and_prepare(sp.clone(), sp.clone(), &[p0, p1], &[plus.clone(), mixed]).unwrap();
        let out = ch.apply(&State::basis(sp, 0).unwrap()).unwrap();
        assert!(max_abs(&(out.matrix() - plus.matrix())) < 1e-12);
    }

    #[test]
    fn dephasing_kills_coherence() {
        let sp = CompositeSpace::single(2);
        let v = linalg::CVec::from_vec(vec![re(1.0), c64(0.0, 1.0)]);
        let s = State::pure_normalized(sp, &v).unwrap();
        let d = dephase(&s, &linalg::identity(2));
        assert!(d.matrix()[(0, 1)].norm() < 1e-15);
        assert!((d.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
    }
}
