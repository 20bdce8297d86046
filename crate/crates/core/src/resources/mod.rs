//! Resource measures for five theories and their continuity constants.

pub mod magic;
mod power;

pub use power::{
    c_quantity, channel_gain, channel_power, m_colon, m_cos, m_em, CQuantity, CosOptions, CosResult, EmOptions, EmResult, PowerOptions,
    PowerResult,
};

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{ChannelError, Register};
use crate::discrimination::DiscriminationError;
use crate::qcore::info::{binary_entropy, vn_entropy_matrix};
use crate::qcore::json::{matrix_from_json, matrix_to_json, JsonMatrix, OperatorJson};
use crate::qcore::linalg::{self, re, CMat};
use crate::qcore::optim::golden_max;
use crate::qcore::{CompositeSpace, Observable, QError, State};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResourceError {
    #[error("state does not live on the measure's space")]
    SpaceMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("LP solver failed: {0}")]
    Solver(String),
    #[error("cutting planes did not converge (slack eigenvalue {0:e})")]
    NoConvergence(f64),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] QError),
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Energy,
    Athermality,
    Coherence,
    Qfi,
    Magic,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] =
        [MeasureKind::Energy, MeasureKind::Athermality, MeasureKind::Coherence, MeasureKind::Qfi, MeasureKind::Magic];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Energy => "energy",
            MeasureKind::Athermality => "athermality",
            MeasureKind::Coherence => "coherence",
            MeasureKind::Qfi => "qfi",
            MeasureKind::Magic => "magic",
        }
    }
}

/// Shape of the additive continuity remainder `c(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum Remainder {
    Zero,
    /// `(1/beta) h(x/2)`.
    Thermal { beta: f64 },
    /// `(1 + x/2) h(x / (2 + x))`.
    Coherence,
}

impl Remainder {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 2.0);
        match *self {
            Remainder::Zero => 0.0,
            Remainder::Thermal { beta } => binary_entropy(x / 2.0) / beta,
            Remainder::Coherence => (1.0 + x / 2.0) * binary_entropy(x / (2.0 + x)),
        }
    }

    fn sup(&self) -> f64 {
        match *self {
            Remainder::Zero => 0.0,
            Remainder::Thermal { beta } => 2f64.ln() / beta,
            Remainder::Coherence => coherence_remainder_max(),
        }
    }
}

fn coherence_remainder_max() -> f64 {
    static MAX: OnceLock<f64> = OnceLock::new();
    *MAX.get_or_init(|| {
        let f = |x: f64| Remainder::Coherence.eval(x);
        let grid = 2000;
        let (mut best_x, mut best) = (0.0, 0.0);
        for i in 0..=grid {
            let x = 2.0 * i as f64 / grid as f64;
            let v = f(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        let h = 2.0 / grid as f64;
        let (_, refined) = golden_max(&f, (best_x - h).max(0.0), (best_x + h).min(2.0), 60);
        best.max(refined)
    })
}

/// Constants of `|M(rho^m) - M(sigma_m)| <= m^a K eps^b + c(eps)`.
///
/// `a = inf` marks the exponential form `exp(a' m) K eps^b + c(eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderConstants {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(with = "maybe_infinite")]
    pub a: f64,
    pub b: f64,
    pub a_prime: Option<f64>,
    pub c_max: f64,
    pub remainder: Remainder,
}

/// A float that may be `+inf`, written as the string `"inf"`.
mod maybe_infinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

impl HolderConstants {
    pub fn is_exponential(&self) -> bool {
        self.a.is_infinite()
    }

    pub fn c(&self, x: f64) -> f64 {
        self.remainder.eval(x)
    }

    /// Right-hand side of the continuity inequality for `m` copies at trace distance `eps`.
    pub fn continuity_rhs(&self, m: usize, eps: f64) -> f64 {
        let scale = if self.is_exponential() {
            (self.a_prime.unwrap_or(0.0) * m as f64).exp()
        } else {
            (m as f64).powf(self.a)
        };
        scale * self.k * eps.max(0.0).powf(self.b) + self.c(eps)
    }
}

/// A resource measure together with its context (Hamiltonian, temperature, basis, qubit count).
#[derive(Clone, Debug)]
pub struct ResourceMeasure {
    kind: MeasureKind,
    space: CompositeSpace,
    hamiltonian: Option<Observable>,
    beta: Option<f64>,
    basis: Option<CMat>,
    n_qubits: Option<usize>,
    log_partition: f64,
    constants: HolderConstants,
}

fn qubit_count(space: &CompositeSpace) -> Result<usize, ResourceError> {
    let d = space.dim();
    if d < 2 || !d.is_power_of_two() {
        return Err(ResourceError::Unsupported(format!("magic needs a qubit register, got dimension {d}")));
    }
    Ok(d.trailing_zeros() as usize)
}

impl ResourceMeasure {
    /// Energy `Tr[rho H]` with `H` shifted to a zero ground energy.
    pub fn energy(h: &Observable) -> Self {
        let shifted = h.ground_shifted();
        let k = shifted.spread() / 2.0;
        ResourceMeasure {
            kind: MeasureKind::Energy,
            space: h.space().clone(),
            hamiltonian: Some(shifted),
            beta: None,
            basis: None,
            n_qubits: None,
            log_partition: 0.0,
            constants: HolderConstants { k, a: 1.0, b: 1.0, a_prime: None, c_max: 0.0, remainder: Remainder::Zero },
        }
    }

    /// Athermality `(1/beta) D(rho || gibbs)`.
    pub fn athermality(h: &Observable, beta: f64) -> Result<Self, ResourceError> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(ResourceError::InvalidParameter(format!("inverse temperature must be positive, got {beta}")));
        }
        let shifted = h.ground_shifted();
        let levels = shifted.eig().values;
        let log_z = log_sum_exp(levels.iter().map(|e| -beta * e));
        let d = h.dim() as f64;
        let remainder = Remainder::Thermal { beta };
        Ok(ResourceMeasure {
            kind: MeasureKind::Athermality,
            space: h.space().clone(),
            hamiltonian: Some(shifted.clone()),
            beta: Some(beta),
            basis: None,
            n_qubits: None,
            log_partition: log_z,
            constants: HolderConstants {
                k: shifted.spread() + 2.0 / beta * d.ln(),
                a: 1.0,
                b: 1.0,
                a_prime: None,
                c_max: remainder.sup(),
                remainder,
            },
        })
    }

    /// Relative entropy of coherence in the computational basis.
    pub fn coherence(space: &CompositeSpace) -> Self {
        Self::coherence_in_basis(space, linalg::identity(space.dim())).expect("identity is unitary")
    }

    /// Relative entropy of coherence in the basis given by the columns of `basis`.
    pub fn coherence_in_basis(space: &CompositeSpace, basis: CMat) -> Result<Self, ResourceError> {
        if basis.nrows() != space.dim() || linalg::unitarity_defect(&basis) > 1e-9 {
            return Err(ResourceError::InvalidParameter("incoherent basis must be orthonormal".into()));
        }
        let d = space.dim() as f64;
        Ok(ResourceMeasure {
            kind: MeasureKind::Coherence,
            space: space.clone(),
            hamiltonian: None,
            beta: None,
            basis: Some(basis),
            n_qubits: None,
            log_partition: 0.0,
            constants: HolderConstants {
                k: 2.0 * d.ln(),
                a: 1.0,
                b: 1.0,
                a_prime: None,
                c_max: Remainder::Coherence.sup(),
                remainder: Remainder::Coherence,
            },
        })
    }

    /// Quantum Fisher information with respect to `H`.
    pub fn qfi(h: &Observable) -> Self {
        let half = h.spread() / 2.0;
        ResourceMeasure {
            kind: MeasureKind::Qfi,
            space: h.space().clone(),
            hamiltonian: Some(h.clone()),
            beta: None,
            basis: None,
            n_qubits: None,
            log_partition: 0.0,
            constants: HolderConstants {
                k: 32.0 * half * half,
                a: 2.0,
                b: 0.5,
                a_prime: None,
                c_max: 0.0,
                remainder: Remainder::Zero,
            },
        }
    }

    /// Max-relative entropy to the stabilizer hull (bits) on `n` qubits.
    pub fn magic(n_qubits: usize) -> Result<Self, ResourceError> {
        magic::stabilizer_states(n_qubits)?;
        let d = (1usize << n_qubits) as f64;
        Ok(ResourceMeasure {
            kind: MeasureKind::Magic,
            space: CompositeSpace::qubits(n_qubits),
            hamiltonian: None,
            beta: None,
            basis: None,
            n_qubits: Some(n_qubits),
            log_partition: 0.0,
            constants: HolderConstants {
                k: 2.0,
                a: f64::INFINITY,
                b: 1.0,
                a_prime: Some(d.ln()),
                c_max: 0.0,
                remainder: Remainder::Zero,
            },
        })
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn constants(&self) -> &HolderConstants {
        &self.constants
    }

    pub fn hamiltonian(&self) -> Option<&Observable> {
        self.hamiltonian.as_ref()
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn basis(&self) -> Option<&CMat> {
        self.basis.as_ref()
    }

    /// The measure on the joint system of `self` and `other` (in that order).
    pub fn product(&self, other: &ResourceMeasure) -> Result<ResourceMeasure, ResourceError> {
        if self.kind != other.kind {
            return Err(ResourceError::InvalidParameter("cannot combine measures of different theories".into()));
        }
        let joint_h = || {
            let a = self.hamiltonian.as_ref().expect("theory carries a Hamiltonian");
            let b = other.hamiltonian.as_ref().expect("theory carries a Hamiltonian");
            a.tensor_sum(b)
        };
        Ok(match self.kind {
            MeasureKind::Energy => ResourceMeasure::energy(&joint_h()),
            MeasureKind::Athermality => {
                let (b1, b2) = (self.beta.unwrap_or(1.0), other.beta.unwrap_or(1.0));
                if (b1 - b2).abs() > 1e-12 * b1.abs().max(1.0) {
                    return Err(ResourceError::InvalidParameter("temperatures differ".into()));
                }
                ResourceMeasure::athermality(&joint_h(), b1)?
            }
            MeasureKind::Qfi => ResourceMeasure::qfi(&joint_h()),
            MeasureKind::Coherence => {
                let b = linalg::kron(self.basis.as_ref().expect("basis"), other.basis.as_ref().expect("basis"));
                ResourceMeasure::coherence_in_basis(&self.space.tensor(&other.space), b)?
            }
            MeasureKind::Magic => ResourceMeasure::magic(self.n_qubits.unwrap_or(0) + other.n_qubits.unwrap_or(0))?,
        })
    }

    /// Same theory on a single qubit carrying the register's Hamiltonian or basis.
    pub fn register(&self, reg: &Register) -> Result<ResourceMeasure, ResourceError> {
        Ok(match self.kind {
            MeasureKind::Energy => ResourceMeasure::energy(reg.hamiltonian()),
            MeasureKind::Athermality => ResourceMeasure::athermality(reg.hamiltonian(), self.beta.unwrap_or(1.0))?,
            MeasureKind::Qfi => ResourceMeasure::qfi(reg.hamiltonian()),
            MeasureKind::Coherence => {
                let [k0, k1] = reg.basis();
                let mut b = linalg::zeros(2, 2);
                b.set_column(0, k0);
                b.set_column(1, k1);
                ResourceMeasure::coherence_in_basis(&reg.space(), b)?
            }
            MeasureKind::Magic => ResourceMeasure::magic(1)?,
        })
    }

    /// Measure on the system followed by the register.
    pub fn with_register(&self, reg: &Register) -> Result<ResourceMeasure, ResourceError> {
        self.product(&self.register(reg)?)
    }

    /// Measure on `R (x) A` with `R` a copy of this system.
    pub fn with_reference(&self) -> Result<ResourceMeasure, ResourceError> {
        self.product(self)
    }

    pub fn measure(&self, rho: &State) -> Result<f64, ResourceError> {
        if rho.dim() != self.space.dim() {
            return Err(ResourceError::SpaceMismatch);
        }
        self.measure_matrix(rho.matrix())
    }

    pub(crate) fn measure_matrix(&self, rho: &CMat) -> Result<f64, ResourceError> {
        let h = self.hamiltonian.as_ref();
        Ok(match self.kind {
            MeasureKind::Energy => linalg::trace_prod(rho, h.expect("energy Hamiltonian").matrix()).re,
            MeasureKind::Athermality => {
                let beta = self.beta.expect("athermality temperature");
                let e = linalg::trace_prod(rho, h.expect("athermality Hamiltonian").matrix()).re;
                e - vn_entropy_matrix(rho) / beta + self.log_partition / beta
            }
            MeasureKind::Coherence => {
                let b = self.basis.as_ref().expect("coherence basis");
                let rotated = b.adjoint() * rho * b;
                let diag: Vec<f64> = (0..rotated.nrows()).map(|i| rotated[(i, i)].re.max(0.0)).collect();
                crate::qcore::info::shannon_entropy(&diag) - vn_entropy_matrix(rho)
            }
            MeasureKind::Qfi => qfi_matrix(rho, h.expect("QFI generator").matrix()),
            MeasureKind::Magic => {
                magic::dmax_hull(rho, magic::stabilizer_states(self.n_qubits.expect("qubit count"))?)?.value_bits
            }
        })
    }

    /// Free states used to seed searches: ground/Gibbs/incoherent/stabilizer representatives.
    pub fn free_states(&self) -> Vec<State> {
        match self.kind {
            MeasureKind::Energy | MeasureKind::Qfi => {
                let h = self.hamiltonian.as_ref().expect("Hamiltonian");
                let e = h.eig();
                let mut out = vec![State::from_raw(self.space.clone(), linalg::outer(&e.vector(0)))];
                if self.kind == MeasureKind::Qfi {
                    out.push(State::maximally_mixed(self.space.clone()));
                }
                out
            }
            MeasureKind::Athermality => vec![gibbs_state(self.hamiltonian.as_ref().expect("Hamiltonian"), self.beta.unwrap())],
            MeasureKind::Coherence => {
                let b = self.basis.as_ref().expect("basis");
                let mut out = vec![State::maximally_mixed(self.space.clone())];
                out.push(State::from_raw(self.space.clone(), linalg::outer(&b.column(0).into_owned())));
                out
            }
            MeasureKind::Magic => {
                let n = self.n_qubits.unwrap_or(1);
                let s = magic::stabilizer_states(n).expect("validated");
                vec![State::maximally_mixed(self.space.clone()), State::from_raw(self.space.clone(), linalg::outer(&s[0]))]
            }
        }
    }

    pub fn descriptor(&self) -> MeasureDescriptor {
        MeasureDescriptor {
            kind: self.kind,
            dims: self.space.factor_dims.clone(),
            hamiltonian: self.hamiltonian.as_ref().map(|h| OperatorJson {
                dims: h.space().factor_dims.clone(),
                matrix: matrix_to_json(h.matrix()),
            }),
            beta: self.beta,
            basis: self.basis.as_ref().map(matrix_to_json),
            n_qubits: self.n_qubits,
            constants: Some(self.constants),
        }
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `2 sum_{l_i + l_j > 0} (l_i - l_j)^2 / (l_i + l_j) |<i|H|j>|^2`; equals `4 Var(H)` on pure states.
pub(crate) fn qfi_matrix(rho: &CMat, h: &CMat) -> f64 {
    let e = linalg::eigh(rho);
    let hb = e.vectors.adjoint() * h * &e.vectors;
    let n = e.values.len();
    let mut total = 0.0;
    for i in 0..n {
        let li = e.values[i].max(0.0);
        for j in 0..n {
            let lj = e.values[j].max(0.0);
            let s = li + lj;
            if s > 1e-12 {
                total += (li - lj).powi(2) / s * hb[(i, j)].norm_sqr();
            }
        }
    }
    2.0 * total
}

/// Gibbs state `exp(-beta H) / Z`.
pub fn gibbs_state(h: &Observable, beta: f64) -> State {
    let shifted = h.ground_shifted();
    let m = linalg::herm_fn(shifted.matrix(), |e| (-beta * e).exp());
    let z = m.trace().re;
    State::from_raw(h.space().clone(), m / re(z))
}

/// `F(rho) = Tr[rho H] - S(rho) / beta`.
pub fn free_energy(rho: &State, h: &Observable, beta: f64) -> f64 {
    h.expectation(rho) - crate::qcore::vn_entropy(rho) / beta
}

/// JSON form of a measure; `constants` is informational and recomputed on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureDescriptor {
    pub kind: MeasureKind,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<OperatorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<HolderConstants>,
}

impl MeasureDescriptor {
    pub fn build(&self) -> Result<ResourceMeasure, ResourceError> {
        let ham = || -> Result<Observable, ResourceError> {
            let h = self
                .hamiltonian
                .as_ref()
                .ok_or(ResourceError::InvalidParameter(format!("{} needs a hamiltonian", self.kind.name())))?;
            Ok(Observable::new(CompositeSpace::new(h.dims.clone())?, matrix_from_json(&h.matrix)?)?)
        };
        match self.kind {
            MeasureKind::Energy => Ok(ResourceMeasure::energy(&ham()?)),
            MeasureKind::Qfi => Ok(ResourceMeasure::qfi(&ham()?)),
            MeasureKind::Athermality => {
                let beta = self.beta.ok_or(ResourceError::InvalidParameter("athermality needs beta".into()))?;
                ResourceMeasure::athermality(&ham()?, beta)
            }
            MeasureKind::Coherence => {
                let space = CompositeSpace::new(self.dims.clone())?;
                match &self.basis {
                    Some(b) => ResourceMeasure::coherence_in_basis(&space, matrix_from_json(b)?),
                    None => Ok(ResourceMeasure::coherence(&space)),
                }
            }
            MeasureKind::Magic => {
                let n = match self.n_qubits {
                    Some(n) => n,
                    None => qubit_count(&CompositeSpace::new(self.dims.clone())?)?,
                };
                ResourceMeasure::magic(n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{c64, CVec};
    use crate::qcore::random;

    fn sz_half() -> Observable {
        Observable::diagonal(CompositeSpace::single(2), &[0.5, -0.5]).unwrap()
    }

    fn plus() -> State {
        State::pure_normalized(CompositeSpace::single(2), &CVec::from_vec(vec![re(1.0), re(1.0)])).unwrap()
    }

    #[test]
    fn plus_state_values() {
        let sp = CompositeSpace::single(2);
        assert!((ResourceMeasure::coherence(&sp).measure(&plus()).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((ResourceMeasure::qfi(&sz_half()).measure(&plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((ResourceMeasure::energy(&sz_half()).measure(&plus()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exponential_constants_round_trip() {
        let c = *ResourceMeasure::magic(1).unwrap().constants();
        assert!(c.is_exponential());
        let text = crate::qcore::json::to_string(&c);
        assert!(text.contains("\"a\":\"inf\""));
        let back: HolderConstants = crate::qcore::json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn gibbs_has_zero_athermality() {
        let h = Observable::diagonal(CompositeSpace::single(3), &[0.0, 0.7, 2.0]).unwrap();
        let m = ResourceMeasure::athermality(&h, 1.3).unwrap();
        assert!(m.measure(&gibbs_state(&h, 1.3)).unwrap().abs() < 1e-12);
        let ground = State::basis(CompositeSpace::single(3), 0).unwrap();
        let z: f64 = [0.0f64, 0.7, 2.0].iter().map(|e| (-1.3 * e).exp()).sum();
        assert!((m.measure(&ground).unwrap() - z.ln() / 1.3).abs() < 1e-12);
    }

    #[test]
    fn athermality_matches_relative_entropy() {
        let h = Observable::diagonal(CompositeSpace::single(2), &[0.2, 1.1]).unwrap();
        let beta = 0.8;
        let m = ResourceMeasure::athermality(&h, beta).unwrap();
        let rho = random::random_state(&CompositeSpace::single(2), &mut random::rng(9));
        let d = crate::qcore::rel_entropy(&rho, &gibbs_state(&h, beta));
        assert!((m.measure(&rho).unwrap() - d / beta).abs() < 1e-12);
    }

    #[test]
    fn qfi_is_four_variance_on_pure_states() {
        let mut r = random::rng(5);
        let h = Observable::new(CompositeSpace::single(3), random::random_hermitian(3, &mut r)).unwrap();
        let m = ResourceMeasure::qfi(&h);
        for _ in 0..10 {
            let psi = random::random_pure(&CompositeSpace::single(3), &mut r);
            assert!((m.measure(&psi).unwrap() - 4.0 * h.variance(&psi)).abs() < 1e-10);
        }
    }

    #[test]
    fn constants_per_theory() {
        let h = Observable::diagonal(CompositeSpace::single(2), &[0.0, 2.0]).unwrap();
        assert_eq!(ResourceMeasure::energy(&h).constants().k, 1.0);
        assert_eq!(ResourceMeasure::qfi(&h).constants().k, 32.0);
        let ath = ResourceMeasure::athermality(&h, 2.0).unwrap();
        assert!((ath.constants().k - (2.0 + 2f64.ln())).abs() < 1e-15);
        assert!((ath.constants().c_max - 2f64.ln() / 2.0).abs() < 1e-15);
        let coh = ResourceMeasure::coherence(&CompositeSpace::single(2));
        assert!((coh.constants().c_max - 2.0 * 2f64.ln()).abs() < 1e-9);
        let mg = ResourceMeasure::magic(1).unwrap();
        assert!(mg.constants().is_exponential());
        assert!((mg.constants().continuity_rhs(2, 0.1) - 4.0 * 2.0 * 0.1).abs() < 1e-12);
    }

    #[test]
    fn register_extension_uses_zero_hamiltonian() {
        let m = ResourceMeasure::athermality(&sz_half(), 1.0).unwrap().with_register(&Register::computational()).unwrap();
        assert_eq!(m.space().factor_dims, vec![2, 2]);
        let g = gibbs_state(&sz_half(), 1.0).tensor(&State::maximally_mixed(CompositeSpace::single(2)));
        assert!(m.measure(&g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn descriptor_round_trip() {
        let h = Observable::new(
            CompositeSpace::single(2),
            CMat::from_row_slice(2, 2, &[re(1.0), c64(0.0, 0.3), c64(0.0, -0.3), re(-1.0)]),
        )
        .unwrap();
        let m = ResourceMeasure::athermality(&h, 0.5).unwrap();
        let text = crate::qcore::json::to_string(&m.descriptor());
        let back: MeasureDescriptor = crate::qcore::json::from_str(&text).unwrap();
        let rebuilt = back.build().unwrap();
        let rho = plus();
        assert!((rebuilt.measure(&rho).unwrap() - m.measure(&rho).unwrap()).abs() < 1e-14);
    }
}
