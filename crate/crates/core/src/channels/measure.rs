use crate::qcore::linalg::{self, eigh, hermiticity_defect, psd_sqrt, re, CMat, CVec};
use crate::qcore::{CompositeSpace, Observable, Tolerances};

use super::{Channel, ChannelError};

/// Finite-outcome POVM on a space of dimension `dim`.
#[derive(Clone, Debug)]
pub struct Povm {
    effects: Vec<CMat>,
}

impl Povm {
    pub fn new(effects: Vec<CMat>) -> Result<Self, ChannelError> {
        let first = effects.first().ok_or(ChannelError::Malformed("POVM needs an effect".into()))?;
        let d = first.nrows();
        let tol = Tolerances::default();
        let mut sum = linalg::zeros(d, d);
        for e in &effects {
            if e.nrows() != d || e.ncols() != d {
                return Err(ChannelError::SpaceMismatch);
            }
            if hermiticity_defect(e) > tol.herm {
                return Err(ChannelError::InvalidEffect("non-Hermitian effect".into()));
            }
            let min = eigh(e).min();
            if min < -tol.psd {
                return Err(ChannelError::InvalidEffect(format!("negative eigenvalue {min:e}")));
            }
            sum += e;
        }
        let defect = linalg::op_norm(&(sum - linalg::identity(d)));
        if defect > tol.cptp {
            return Err(ChannelError::InvalidEffect(format!("effects sum to identity only within {defect:e}")));
        }
        Ok(Povm { effects: effects.iter().map(linalg::hermitian_part).collect() })
    }

    /// `{E, 1 - E}`.
    pub fn two_outcome(e: CMat) -> Result<Self, ChannelError> {
        let d = e.nrows();
        let rest = linalg::identity(d) - &e;
        Povm::new(vec![e, rest])
    }

    /// Projective measurement in the orthonormal basis given by the columns of `basis`.
    pub fn basis_measurement(basis: &CMat) -> Result<Self, ChannelError> {
        let effects = (0..basis.ncols()).map(|j| linalg::outer(&basis.column(j).into_owned())).collect();
        Povm::new(effects)
    }

    pub fn effects(&self) -> &[CMat] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects.iter().all(|e| linalg::max_abs(&(e * e - e)) <= tol)
    }
}

/// Two-level classical register with a designated basis and Hamiltonian.
#[derive(Clone, Debug)]
pub struct Register {
    basis: [CVec; 2],
    hamiltonian: Observable,
}

impl Register {
    /// Computational basis, zero Hamiltonian.
    pub fn computational() -> Self {
        Register { basis: [linalg::ket(2, 0), linalg::ket(2, 1)], hamiltonian: Observable::zero(CompositeSpace::single(2)) }
    }

    pub fn with_hamiltonian(mut self, h: Observable) -> Result<Self, ChannelError> {
        if h.dim() != 2 {
            return Err(ChannelError::SpaceMismatch);
        }
        self.hamiltonian = h;
        Ok(self)
    }

    pub fn space(&self) -> CompositeSpace {
        CompositeSpace::single(2)
    }

    pub fn basis(&self) -> &[CVec; 2] {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &Observable {
        &self.hamiltonian
    }
}

fn two_outcomes(p: &Povm) -> Result<(), ChannelError> {
    if p.len() != 2 {
        return Err(ChannelError::Malformed(format!("a two-level register needs 2 outcomes, got {}", p.len())));
    }
    Ok(())
}

/// `Lambda_P(rho) = sum_k P_k rho P_k (x) |k><k|` on `A (x) K`.
pub fn measurement_channel_pvm(p: &Povm, space: &CompositeSpace, reg: &Register) -> Result<Channel, ChannelError> {
    two_outcomes(p)?;
    if !p.is_projective(1e-9) {
        return Err(ChannelError::InvalidEffect("measurement is not projective".into()));
    }
    if p.dim() != space.dim() {
        return Err(ChannelError::SpaceMismatch);
    }
    let kraus = p.effects().iter().zip(reg.basis()).map(|(e, k)| linalg::kron(e, &linalg::column(k))).collect();
    Channel::new(space.clone(), space.tensor(&reg.space()), kraus)
}

/// `Lambda_Q(rho) = sum_k sqrt(Q_k) rho sqrt(Q_k) (x) |k><k|` on `A (x) K`.
pub fn measurement_channel_povm(q: &Povm, space: &CompositeSpace, reg: &Register) -> Result<Channel, ChannelError> {
    two_outcomes(q)?;
    if q.dim() != space.dim() {
        return Err(ChannelError::SpaceMismatch);
    }
    let kraus = q.effects().iter().zip(reg.basis()).map(|(e, k)| linalg::kron(&psd_sqrt(e), &linalg::column(k))).collect();
    Channel::new(space.clone(), space.tensor(&reg.space()), kraus)
}

/// `Gamma_P(rho) = sum_k Tr[P_k rho] |k><k|` onto a register with one basis vector per outcome.
pub fn readout_channel(p: &Povm, space: &CompositeSpace, outcome_basis: &[CVec]) -> Result<Channel, ChannelError> {
    if outcome_basis.len() != p.len() {
        return Err(ChannelError::Malformed("one register vector per outcome is required".into()));
    }
    if p.dim() != space.dim() {
        return Err(ChannelError::SpaceMismatch);
    }
    let dk = outcome_basis[0].len();
    let mut kraus = Vec::new();
    for (e, k) in p.effects().iter().zip(outcome_basis) {
        let ee = eigh(e);
        for (i, &lam) in ee.values.iter().enumerate() {
            if lam > Tolerances::default().psd {
                kraus.push(k * ee.vector(i).adjoint() * re(lam.sqrt()));
            }
        }
    }
    Channel::new(space.clone(), CompositeSpace::single(dk), kraus)
}

pub fn readout_channel_register(p: &Povm, space: &CompositeSpace, reg: &Register) -> Result<Channel, ChannelError> {
    two_outcomes(p)?;
    readout_channel(p, space, reg.basis())
}
