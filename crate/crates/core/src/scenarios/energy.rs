//! Energy-theory examples: spin readout, non-conserving gates and the four-level channels.

use crate::bounds::{self, BoundInput, BoundKind};
use crate::channels::{readout_channel_register, Channel, Povm, Register};
use crate::discrimination::{irreversibility, TestEnsemble};
use crate::qcore::linalg::{self, re, CMat};
use crate::qcore::{random, trace_distance, CompositeSpace, Observable, State};
use crate::resources::{c_quantity, gibbs_state, ResourceMeasure};

use super::{default_grid, ket, SCALING_EPSILON, pauli_x, pauli_z, superpositions, Check, ScenarioError, ScenarioReport};

/// Spin-1/2 in a field, `H = (hw/2) sigma_z`, read out along the x axis.
pub fn spin_x_measurement(hbar_omega: f64, eps: f64) -> Result<ScenarioReport, ScenarioError> {
    spin_measurement(hbar_omega, eps, std::f64::consts::FRAC_PI_2)
}

/// Readout along the axis at polar angle `theta` in the x-z plane (`pi/2` is x, `0` commutes with `H`).
pub fn spin_measurement(hbar_omega: f64, eps: f64, theta: f64) -> Result<ScenarioReport, ScenarioError> {
    if !(hbar_omega > 0.0) || !(0.0..=1.0).contains(&eps) {
        return Err(ScenarioError::InvalidParameter("need hbar_omega > 0 and eps in [0, 1]".into()));
    }
    let space = CompositeSpace::single(2);
    let mut rep = ScenarioReport::new("spin-x");
    rep.param("hbar_omega", hbar_omega);
    rep.param("epsilon", eps);
    rep.param("theta", theta);

    let h = Observable::new(space.clone(), pauli_z() * re(hbar_omega / 2.0))?;
    let axis = pauli_x() * re(theta.sin()) + pauli_z() * re(theta.cos());
    let e = linalg::eigh(&axis);
    let (down, up) = (e.vector(0), e.vector(1));
    let pvm = Povm::new(vec![linalg::outer(&up), linalg::outer(&down)])?;

    let comm = bounds::projective_commutator_norm(&pvm, &h);
    rep.check(Check::eq("commutator_norm", comm, hbar_omega / 2.0 * theta.sin().abs(), 1e-12));

    let input = BoundInput {
        commutator_norm: Some(comm),
        spread_in: Some(h.spread()),
        epsilon: Some(eps),
        ..Default::default()
    };
    rep.bounds.push(bounds::proj_meas_energy_bound(&input)?);
    let grid = default_grid();
    rep.sweep(BoundKind::ProjectiveMeasurement, &input, "epsilon", &grid)?;
    if comm > 0.0 {
        let e = SCALING_EPSILON;
        let scaled = bounds::proj_meas_energy_bound(&input.clone().with("epsilon", e))?.value.finite().unwrap_or(f64::NAN) * e;
        let leading = comm * comm / (2.0 * h.spread());
        rep.value("leading_coefficient", leading);
        rep.check(Check::eq("scaled_bound", scaled, leading, 0.01 * leading));
    }

    // Readout eigenstates of the measured axis form an exactly reversible pair.
    let ens = TestEnsemble::pure_pair(&space, &up, &down, 0.5)?;
    let reg = Register::computational();
    let readout = readout_channel_register(&pvm, &space, &reg)?;
    let delta = irreversibility(&readout, &ens)?.delta;
    rep.check(Check::le("irreversibility", delta, 0.0, 1e-8));
    let c = c_quantity(&readout, &ens, &h, reg.hamiltonian())?;
    rep.value("c_quantity", c.value);
    rep.value("c_spread_bound", c.spread_bound);
    rep.value("c_commutator_form", 2.0 * comm);
    rep.check(Check::le("c_quantity_within_spread", c.value, c.spread_bound, 1e-12));
    if 2.0 * comm > c.spread_bound + 1e-12 {
        rep.note("the commutator form of the conservation defect exceeds the spectral-spread bound; both are reported");
    }
    let ee = BoundInput {
        c_quantity: Some(c.value),
        spread_in: Some(h.spread()),
        spread_out: Some(reg.hamiltonian().spread()),
        epsilon: Some(eps),
        ..Default::default()
    };
    rep.bounds.push(bounds::energy_error_bound(&ee)?);
    Ok(rep)
}

/// A gate `V` with Hamiltonian `H`; test states are the balanced superpositions of the extremal
/// eigenvectors of `H - V^dagger H V`.
pub fn unitary_gate(v: &CMat, h: &Observable, eps: f64) -> Result<ScenarioReport, ScenarioError> {
    let space = h.space().clone();
    if space.dim() < 2 {
        return Err(ScenarioError::InvalidParameter("the gate needs at least two levels".into()));
    }
    let gate = Channel::unitary(space.clone(), v.clone())?;
    let mut rep = ScenarioReport::new("unitary");
    rep.param("epsilon", eps);
    let defect = h.matrix() - v.adjoint() * h.matrix() * v;
    let e = linalg::eigh(&defect);
    let n = e.values.len();
    let (psi1, psi2) = superpositions(&e.vector(n - 1), &e.vector(0));
    let ens = TestEnsemble::pure_pair(&space, &psi1, &psi2, 0.5)?;

    let gspread = bounds::unitary_generator_spread(v, h);
    rep.value("generator_spread", gspread);
    rep.value("hamiltonian_spread", h.spread());
    rep.check(Check::le("irreversibility", irreversibility(&gate, &ens)?.delta, 0.0, 1e-8));
    let c = c_quantity(&gate, &ens, h, h)?;
    rep.check(Check::eq("c_quantity", c.value, gspread / 2.0, 1e-10));

    let input = BoundInput {
        generator_spread: Some(gspread),
        spread_in: Some(h.spread()),
        epsilon: Some(eps),
        ..Default::default()
    };
    rep.bounds.push(bounds::unitary_energy_bound(&input)?);
    rep.sweep(BoundKind::UnitaryGate, &input, "epsilon", &default_grid())?;
    let ee = BoundInput {
        c_quantity: Some(c.value),
        spread_in: Some(h.spread()),
        spread_out: Some(h.spread()),
        epsilon: Some(eps),
        ..Default::default()
    };
    rep.bounds.push(bounds::energy_error_bound(&ee)?);
    Ok(rep)
}

/// Hadamard gate on a qubit with `H = sigma_z / 2`.
pub fn hadamard_gate(eps: f64) -> Result<ScenarioReport, ScenarioError> {
    let h = Observable::new(CompositeSpace::single(2), pauli_z() * re(0.5))?;
    let mut rep = unitary_gate(&super::hadamard(), &h, eps)?;
    rep.id = "hadamard".into();
    Ok(rep)
}

struct FourLevel {
    space: CompositeSpace,
    h: Observable,
    plus: CMat,
    minus: CMat,
    rest: CMat,
    ens: TestEnsemble,
}

/// Basis `|0a>, |0b>, |1>, |2>` with energies `0, 0, e1, e2` and test pair `(|1> +- |2>)/sqrt2`.
fn four_level(e1: f64, e2: f64) -> Result<FourLevel, ScenarioError> {
    if !(0.0 < e1 && e1 < e2) {
        return Err(ScenarioError::InvalidParameter(format!("need 0 < E1 < E2, got E1 = {e1}, E2 = {e2}")));
    }
    let space = CompositeSpace::single(4);
    let h = Observable::diagonal(space.clone(), &[0.0, 0.0, e1, e2])?;
    let (p, m) = superpositions(&ket(4, 2), &ket(4, 3));
    let plus = linalg::outer(&p);
    let minus = linalg::outer(&m);
    let rest = linalg::identity(4) - &plus - &minus;
    let ens = TestEnsemble::pure_pair(&space, &p, &m, 0.5)?;
    Ok(FourLevel { space, h, plus, minus, rest, ens })
}

fn energy_bounds(rep: &mut ScenarioReport, c: f64, spread: f64, delta: f64) -> Result<(), ScenarioError> {
    let irr = BoundInput {
        c_quantity: Some(c),
        spread_in: Some(spread),
        spread_out: Some(spread),
        delta: Some(delta),
        ..Default::default()
    };
    rep.bounds.push(bounds::energy_irrev_bound(&irr)?);
    let err = BoundInput { delta: None, epsilon: Some(0.01), ..irr };
    rep.sweep(BoundKind::EnergyError, &err, "epsilon", &default_grid())?;
    Ok(())
}

/// Gibbs-preserving channel that maps the test pair onto the degenerate ground states and
/// everything else onto a compensating state, so the Gibbs state is a fixed point.
pub fn gibbs_preserving_diverging(e1: f64, e2: f64, beta: f64) -> Result<ScenarioReport, ScenarioError> {
    if !(beta > 0.0) {
        return Err(ScenarioError::InvalidParameter("beta must be positive".into()));
    }
    let fl = four_level(e1, e2)?;
    let mut rep = ScenarioReport::new("gibbs-preserving");
    rep.param("E1", e1);
    rep.param("E2", e2);
    rep.param("beta", beta);

    let tau = gibbs_state(&fl.h, beta);
    let eps_plus = linalg::trace_prod(&fl.plus, tau.matrix()).re;
    let eps_minus = linalg::trace_prod(&fl.minus, tau.matrix()).re;
    let z = 2.0 + (-beta * e1).exp() + (-beta * e2).exp();
    let expected = ((-beta * e1).exp() + (-beta * e2).exp()) / (2.0 * z);
    rep.check(Check::eq("weight_plus", eps_plus, expected, 1e-12));
    rep.check(Check::eq("weight_minus", eps_minus, expected, 1e-12));

    let g0a = linalg::outer(&ket(4, 0));
    let g0b = linalg::outer(&ket(4, 1));
    let raw = (tau.matrix() - &g0a * re(eps_plus) - &g0b * re(eps_minus)) / re(1.0 - eps_plus - eps_minus);
    let raw_eig = linalg::eigh(&raw);
    rep.check(Check::ge("compensating_state_min_eigenvalue", raw_eig.min(), 0.0, 1e-12));
    rep.check(Check::eq("compensating_state_trace", raw.trace().re, 1.0, 1e-12));
    let tau_prime = State::new(fl.space.clone(), raw)?;

    let outputs = [State::from_raw(fl.space.clone(), g0a), State::from_raw(fl.space.clone(), g0b), tau_prime];
    let ch = Channel::measure_and_prepare(
        fl.space.clone(),
        fl.space.clone(),
        &[fl.plus.clone(), fl.minus.clone(), fl.rest.clone()],
        &outputs,
    )?;
    let cptp = ch.cptp_check();
    rep.check(Check::ge("choi_min_eigenvalue", cptp.min_choi_eigenvalue, 0.0, 1e-10));
    rep.check(Check::le("trace_preservation_defect", cptp.tp_defect, 0.0, 1e-10));
    rep.check(Check::le("gibbs_fixed_point", trace_distance(&ch.apply(&tau)?, &tau), 0.0, 1e-10));
    let delta = irreversibility(&ch, &fl.ens)?.delta;
    rep.check(Check::le("irreversibility", delta, 0.0, 1e-8));
    let c = c_quantity(&ch, &fl.ens, &fl.h, &fl.h)?.value;
    rep.check(Check::eq("c_quantity", c, (e2 - e1) / 2.0, 1e-10));
    energy_bounds(&mut rep, c, fl.h.spread(), delta)?;

    // Athermality: the pair is an erasure of coherence between levels E1 and E2.
    let gain = super::erasure_gain_closed_form(&[0.0, 0.0, e1, e2], 2, 3, beta);
    let k = ResourceMeasure::athermality(&fl.h, beta)?.constants().k;
    let m_cos = 4f64.ln() / beta;
    rep.value("athermality_em_closed_form", gain);
    rep.value("athermality_cos_upper", m_cos);
    let threshold = 4.0 * std::f64::consts::LN_2 / beta;
    if e2 - e1 >= threshold {
        rep.note("level gap reaches the erasure threshold: athermality cost diverges");
        let at = BoundInput {
            m_em: Some(gain),
            m_cos: Some(m_cos),
            k: Some(k),
            beta: Some(beta),
            delta: Some(delta),
            epsilon: Some(0.01),
            ..Default::default()
        };
        rep.bounds.push(bounds::athermality_bound(&at)?);
        rep.sweep(BoundKind::AthermalityError, &at, "epsilon", &default_grid())?;
    } else {
        rep.note("level gap below the erasure threshold: no athermality divergence is claimed");
    }
    Ok(rep)
}

/// Energy-non-increasing channel sending the test pair to the two ground states and the rest to `|0a>`.
pub fn rni_energy(e1: f64, e2: f64, seed: u64) -> Result<ScenarioReport, ScenarioError> {
    let fl = four_level(e1, e2)?;
    let mut rep = ScenarioReport::new("rni-energy");
    rep.param("E1", e1);
    rep.param("E2", e2);
    let g0a = State::basis(fl.space.clone(), 0)?;
    let g0b = State::basis(fl.space.clone(), 1)?;
    let ch = Channel::measure_and_prepare(
        fl.space.clone(),
        fl.space.clone(),
        &[fl.plus.clone(), fl.minus.clone(), fl.rest.clone()],
        &[g0a.clone(), g0b, g0a],
    )?;
    let m = ResourceMeasure::energy(&fl.h);
    let mut r = random::rng(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let rho = random::random_state(&fl.space, &mut r);
        worst = worst.max(crate::resources::channel_gain(&m, &m, &ch, &rho)?);
    }
    rep.check(Check::le("max_energy_gain", worst, 0.0, 1e-12));
    let delta = irreversibility(&ch, &fl.ens)?.delta;
    rep.check(Check::le("irreversibility", delta, 0.0, 1e-8));
    let c = c_quantity(&ch, &fl.ens, &fl.h, &fl.h)?.value;
    rep.check(Check::eq("c_quantity", c, (e2 - e1) / 2.0, 1e-10));
    rep.value("c_quantity_squared", c * c);
    energy_bounds(&mut rep, c, fl.h.spread(), delta)?;
    Ok(rep)
}
