//! Probe cost of measuring a test pair through a free unitary coupling.

use crate::bounds::{self, BoundInput, BoundKind};
use crate::channels::{readout_channel_register, Implementation, Povm, Register, Channel};
use crate::discrimination::TestEnsemble;
use crate::qcore::linalg::{self, re};
use crate::qcore::{CompositeSpace, Observable, State};
use crate::resources::{channel_power, m_em, EmOptions, PowerOptions, ResourceMeasure};

use super::{default_grid, pauli_z, Check, ScenarioError, ScenarioReport};

#[derive(Clone, Debug)]
pub struct WayParams {
    pub epsilon: f64,
    /// Priors over which the discrimination gain is maximised.
    pub priors: Vec<f64>,
    pub power: PowerOptions,
}

impl Default for WayParams {
    fn default() -> Self {
        WayParams { epsilon: 0.1, priors: (1..10).map(|i| i as f64 / 10.0).collect(), power: PowerOptions::default() }
    }
}

/// `imp` couples the system to the probe state `eta` and keeps the factor on which `probe_povm`
/// reads out the test label. `m_sys` measures the system, `m_probe` the probe.
pub fn way_scenario(
    m_sys: &ResourceMeasure,
    m_probe: &ResourceMeasure,
    ens: &TestEnsemble,
    imp: &Implementation,
    probe_povm: &Povm,
    p: &WayParams,
) -> Result<ScenarioReport, ScenarioError> {
    if !(0.0..=1.0).contains(&p.epsilon) {
        return Err(ScenarioError::InvalidParameter("epsilon must lie in [0, 1]".into()));
    }
    if probe_povm.len() != 2 || probe_povm.dim() != imp.output_space().dim() {
        return Err(ScenarioError::InvalidParameter("the readout needs two outcomes on the kept output".into()));
    }
    if imp.ancilla().dim() != m_probe.space().dim() || ens.space().dim() != m_sys.space().dim() {
        return Err(ScenarioError::InvalidParameter("measures do not match the coupled systems".into()));
    }
    let mut rep = ScenarioReport::new("way");
    rep.param("epsilon", p.epsilon);

    // Error assumption on each test state.
    let eps2 = p.epsilon * p.epsilon;
    for (i, s) in ens.states().iter().enumerate() {
        let out = imp.apply(s)?;
        let miss = 1.0 - linalg::trace_prod(&probe_povm.effects()[i], out.matrix()).re;
        rep.check(Check::le(&format!("readout_error_{}", i + 1), miss, eps2, 1e-10));
    }

    // The composed readout must be completely free for the system theory.
    let reg = Register::computational();
    let readout = readout_channel_register(probe_povm, &imp.output_space(), &reg)?;
    let composed: Channel = readout.compose(&imp.channel())?;
    let m_reg = m_sys.register(&reg)?;
    let power = channel_power(m_sys, &m_reg, &composed, &PowerOptions { with_reference: true, ..p.power.clone() })?;
    rep.value("readout_power", power.value);
    rep.check(Check::le("readout_completely_free", power.value, 0.0, 1e-8));

    let mut best = f64::NEG_INFINITY;
    for &q in &p.priors {
        let e = m_em(m_sys, &ens.with_prior(q)?, &reg, &EmOptions::default())?;
        best = best.max(e.value);
    }
    rep.value("m_em_max", best);
    let probe_value = m_probe.measure(imp.ancilla())?;
    rep.value("probe_resource", probe_value);

    let input = BoundInput { m_em: Some(best), power: Some(power.value.max(0.0)), epsilon: Some(p.epsilon), ..Default::default() }
        .with_constants(m_probe.constants());
    let report = bounds::way_bound(&input)?;
    let needed = report.value.finite().unwrap_or(f64::INFINITY);
    rep.check(Check::ge("probe_resource_meets_bound", probe_value, needed, 1e-9));
    rep.bounds.push(report);
    rep.sweep(BoundKind::Way, &input, "epsilon", &default_grid())?;
    Ok(rep)
}

/// Two energy qubits swapped through an excited probe; test states are the energy eigenstates.
pub fn way_qubit_swap_instance(epsilon: f64) -> Result<ScenarioReport, ScenarioError> {
    let q = CompositeSpace::single(2);
    let h = Observable::new(q.clone(), pauli_z() * re(0.5))?;
    let m = ResourceMeasure::energy(&h);
    let e0 = linalg::ket(2, 0);
    let e1 = linalg::ket(2, 1);
    let ens = TestEnsemble::pure_pair(&q, &e0, &e1, 0.5)?;
    let swap = linalg::permutation_matrix(&[2, 2], &[1, 0]);
    // Index 0 carries energy +1/2, the excited level.
    let eta = State::basis(q.clone(), 0)?;
    let imp = Implementation::new(q.clone(), eta, swap, CompositeSpace::new(vec![2, 2])?, vec![1])?;
    let povm = Povm::new(vec![linalg::outer(&e0), linalg::outer(&e1)])?;
    let mut rep = way_scenario(&m, &m, &ens, &imp, &povm, &WayParams { epsilon, ..Default::default() })?;
    rep.note("energy-conserving swap with an excited probe; the bound is vacuous for eigenstate tests");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_instance_passes() {
        let r = way_qubit_swap_instance(0.1).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
        assert!((r.values["probe_resource"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_error_is_vacuous() {
        let r = way_qubit_swap_instance(1.0).unwrap();
        assert!(r.find_bound(BoundKind::Way).unwrap().value.finite().unwrap() <= 0.0);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(way_qubit_swap_instance(1.5).is_err());
    }
}
