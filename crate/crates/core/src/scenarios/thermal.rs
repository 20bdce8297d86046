//! Erasing coherence between two energy levels under the athermality measure.

use crate::bounds::{self, BoundInput, BoundKind};
use crate::channels::{measurement_channel_pvm, Channel, Povm, Register};
use crate::discrimination::{avg_recovery_error, helstrom, irreversibility, TestEnsemble};
use crate::qcore::linalg::{self, re};
use crate::qcore::{CompositeSpace, Observable, State};
use crate::resources::{gibbs_state, m_cos, m_em, CosOptions, EmOptions, ResourceMeasure};

use super::{default_grid, ket, recorded_implementation, superpositions, Check, ScenarioError, ScenarioReport};

#[derive(Clone, Debug, PartialEq)]
pub struct ErasureParams {
    /// Diagonal Hamiltonian levels.
    pub levels: Vec<f64>,
    /// Levels whose superpositions form the test pair.
    pub j: usize,
    pub j_prime: usize,
    /// Output levels for the two test states.
    pub j0: usize,
    pub j1: usize,
    pub beta: f64,
    pub epsilon: f64,
}

impl Default for ErasureParams {
    fn default() -> Self {
        ErasureParams { levels: vec![0.0, 4.0], j: 0, j_prime: 1, j0: 0, j1: 1, beta: 1.0, epsilon: 0.01 }
    }
}

/// `(1/beta) ln((r_j + r_j') / sqrt(r_j r_j'))` with Boltzmann weights `r = e^{-beta E}`.
pub fn erasure_gain_closed_form(levels: &[f64], j: usize, j_prime: usize, beta: f64) -> f64 {
    let (rj, rk) = ((-beta * levels[j]).exp(), (-beta * levels[j_prime]).exp());
    ((rj + rk) / (rj * rk).sqrt()).ln() / beta
}

fn validate(p: &ErasureParams) -> Result<(), ScenarioError> {
    let d = p.levels.len();
    if [p.j, p.j_prime, p.j0, p.j1].iter().any(|&i| i >= d) {
        return Err(ScenarioError::InvalidParameter(format!("level index out of range for {d} levels")));
    }
    if p.j == p.j_prime || p.j0 == p.j1 {
        return Err(ScenarioError::InvalidParameter("test levels and output levels must be distinct".into()));
    }
    if !(p.beta > 0.0 && p.beta.is_finite()) {
        return Err(ScenarioError::InvalidParameter("beta must be positive".into()));
    }
    if !(0.0..=1.0).contains(&p.epsilon) {
        return Err(ScenarioError::InvalidParameter("epsilon must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Measure-and-prepare erasure sending `psi` to `|j0>` and `psi_perp` to `|j1>`; the component
/// outside their span also goes to `|j0>`.
pub fn coherence_erasure(p: &ErasureParams) -> Result<ScenarioReport, ScenarioError> {
    validate(p)?;
    let d = p.levels.len();
    let beta = p.beta;
    let space = CompositeSpace::single(d);
    let h = Observable::diagonal(space.clone(), &p.levels)?;
    let mut rep = ScenarioReport::new("coherence-erasure");
    for (i, e) in p.levels.iter().enumerate() {
        rep.param(&format!("level_{i}"), *e);
    }
    rep.param("beta", beta);
    rep.param("epsilon", p.epsilon);
    rep.note("the component outside the test span is prepared in the first output level");

    let (psi, perp) = superpositions(&ket(d, p.j), &ket(d, p.j_prime));
    let ens = TestEnsemble::pure_pair(&space, &psi, &perp, 0.5)?;
    let e_psi = linalg::outer(&psi);
    let e_perp = linalg::outer(&perp);
    let rest = linalg::identity(d) - &e_psi - &e_perp;
    let out0 = State::basis(space.clone(), p.j0)?;
    let out1 = State::basis(space.clone(), p.j1)?;
    let ch = Channel::measure_and_prepare(
        space.clone(),
        space.clone(),
        &[e_psi.clone(), e_perp.clone(), rest],
        &[out0.clone(), out1.clone(), out0],
    )?;

    // Explicit recovery: read the output level back into the test pair.
    let r0 = linalg::outer(&ket(d, p.j0));
    let r1 = linalg::outer(&ket(d, p.j1));
    let r_rest = linalg::identity(d) - &r0 - &r1;
    let psi_state = State::pure(space.clone(), &psi)?;
    let perp_state = State::pure(space.clone(), &perp)?;
    let rec = Channel::measure_and_prepare(
        space.clone(),
        space.clone(),
        &[r0, r1, r_rest],
        &[psi_state.clone(), perp_state, psi_state],
    )?;
    rep.check(Check::le("explicit_recovery_error", avg_recovery_error(&ch, &ens, &rec)?, 0.0, 1e-10));
    let delta = irreversibility(&ch, &ens)?.delta;
    rep.check(Check::le("irreversibility", delta, 0.0, 1e-8));

    // Discrimination gain of the support measurement on the restricted Gibbs state.
    let m = ResourceMeasure::athermality(&h, beta)?;
    let reg = Register::computational();
    let closed = erasure_gain_closed_form(&p.levels, p.j, p.j_prime, beta);
    let delta_e = p.levels[p.j_prime] - p.levels[p.j];
    rep.check(Check::eq("closed_form_cosh", closed, (2.0 * (beta * delta_e / 2.0).cosh()).ln() / beta, 1e-9));
    let tau = gibbs_state(&h, beta);
    let span = &e_psi + &e_perp;
    let restricted = &span * tau.matrix() * &span;
    let tr = restricted.trace().re;
    let tau_tilde = State::new(space.clone(), restricted / re(tr))?;
    let pvm = Povm::new(vec![e_psi.clone(), linalg::identity(d) - &e_psi])?;
    let lp = measurement_channel_pvm(&pvm, &space, &reg)?;
    let direct = m.with_register(&reg)?.measure(&lp.apply(&tau_tilde)?)? - m.measure(&tau_tilde)?;
    rep.check(Check::eq("closed_form_direct", direct, closed, 1e-9));
    let em = m_em(&m, &ens, &reg, &EmOptions::default())?;
    rep.value("m_em_search", em.value);
    rep.check(Check::ge("m_em_search_reaches_closed_form", em.value, closed, 1e-9));

    // Cost side: the image pair is read out by an energy-diagonal projective measurement, which an
    // energy-preserving controlled flip implements.
    let image = ens.image(&ch)?;
    let q = helstrom(&image).povm;
    let ln4 = 4f64.ln() / beta;
    let projective = if q.is_projective(1e-9) { 1.0 } else { 0.0 };
    rep.check(Check::eq("image_measurement_projective", projective, 1.0, 0.0));
    if q.is_projective(1e-9) {
        let imp = recorded_implementation(&q, &space, &reg)?;
        let hk = reg.hamiltonian().matrix();
        let i2 = linalg::identity(2);
        let total_h = linalg::kron_all(&[h.matrix(), &i2, &i2])
            + linalg::kron_all(&[&linalg::identity(d), hk, &i2])
            + linalg::kron_all(&[&linalg::identity(d), &i2, hk]);
        let comm = linalg::op_norm(&linalg::commutator(imp.unitary(), &total_h));
        rep.check(Check::le("implementation_energy_commutator", comm, 0.0, 1e-12));
        let lq = measurement_channel_pvm(&q, &space, &reg)?;
        let choi_gap = linalg::max_abs(&(imp.channel().to_choi() - lq.to_choi()));
        rep.check(Check::le("implementation_matches_measurement", choi_gap, 0.0, 1e-10));
    }
    let cos = m_cos(&m, &image, &reg, &CosOptions::default())?;
    rep.value("m_cos_search", cos.value);
    rep.check(Check::le("measured_cos_power", cos.value, ln4, 1e-8));

    let base = BoundInput {
        m_em: Some(closed),
        m_cos: Some(ln4),
        beta: Some(beta),
        epsilon: Some(p.epsilon),
        ..Default::default()
    }
    .with_constants(m.constants());
    let gap_report = bounds::c_erase_gap_bound(&BoundInput { level_gap: Some(delta_e.abs()), beta: Some(beta), ..Default::default() })?;
    let margin = gap_report.value.finite().unwrap_or(0.0);
    rep.bounds.push(gap_report);
    if margin <= 0.0 {
        rep.note("level gap below the erasure threshold: bounds are vacuous");
    }
    rep.bounds.push(bounds::athermality_bound(&base.clone().with("delta", delta))?);
    rep.bounds.push(bounds::athermality_error_bound(&base)?);
    rep.bounds.push(bounds::work_bound(&base)?);
    let grid = default_grid();
    rep.sweep(BoundKind::AthermalityError, &base, "epsilon", &grid)?;
    rep.sweep(BoundKind::Work, &base, "epsilon", &grid)?;
    Ok(rep)
}
