//! Channel gains, heuristic resource power and the em/cos quantities of a test ensemble.

use crate::channels::{measurement_channel_povm, measurement_channel_pvm, Channel, Povm, Register};
use crate::discrimination::{helstrom, helstrom_kernel_dim, TestEnsemble};
use crate::qcore::linalg::{self, c64, psd_sqrt, re, CMat, CVec};
use crate::qcore::optim::{ascend, golden_max, AscentOptions};
use crate::qcore::{random, CompositeSpace, Observable, State, Tolerances};

use super::{MeasureKind, ResourceError, ResourceMeasure};

/// `M_out(L(rho)) - M_in(rho)`.
pub fn channel_gain(
    m_in: &ResourceMeasure,
    m_out: &ResourceMeasure,
    ch: &Channel,
    rho: &State,
) -> Result<f64, ResourceError> {
    Ok(m_out.measure(&ch.apply(rho)?)? - m_in.measure(rho)?)
}

#[derive(Clone, Debug)]
pub struct PowerOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Optimise over states on `R (x) A` with `R` a copy of `A`.
    pub with_reference: bool,
    pub ascent: AscentOptions,
    pub extra_starts: Vec<State>,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            restarts: 8,
            seed: 0,
            with_reference: true,
            ascent: AscentOptions { max_iters: 60, ..AscentOptions::default() },
            extra_starts: Vec::new(),
        }
    }
}

/// Heuristic supremum of the gain; `value` is the best gain found, hence a lower estimate.
#[derive(Clone, Debug)]
pub struct PowerResult {
    pub value: f64,
    pub certificate: State,
    pub with_reference: bool,
    pub starts: usize,
}

fn state_from_params(x: &[f64], d: usize) -> CMat {
    let a = CMat::from_fn(d, d, |i, j| c64(x[2 * (i * d + j)], x[2 * (i * d + j) + 1]));
    let m = &a * a.adjoint();
    let tr = m.trace().re;
    m / re(tr.max(1e-300))
}

fn params_from_state(rho: &CMat) -> Vec<f64> {
    let s = psd_sqrt(rho);
    let d = rho.nrows();
    let mut x = Vec::with_capacity(2 * d * d);
    for i in 0..d {
        for j in 0..d {
            x.push(s[(i, j)].re);
            x.push(s[(i, j)].im);
        }
    }
    x
}

/// `sup_sigma M_out((id (x) L)(sigma)) - M_in(sigma)` by multi-start ascent.
///
/// Starts include the free states of the input theory and the maximally mixed state,
/// so for a completely free channel the reported value is the gain at a free state.
pub fn channel_power(
    m_in: &ResourceMeasure,
    m_out: &ResourceMeasure,
    ch: &Channel,
    opts: &PowerOptions,
) -> Result<PowerResult, ResourceError> {
    if m_in.space().dim() != ch.in_space().dim() || m_out.space().dim() != ch.out_space().dim() {
        return Err(ResourceError::SpaceMismatch);
    }
    let (mi, mo, lifted) = if opts.with_reference {
        (m_in.with_reference()?, m_in.product(m_out)?, ch.tensor_with_identity(m_in.space()))
    } else {
        (m_in.clone(), m_out.clone(), ch.clone())
    };
    let d = mi.space().dim();
    let objective = |x: &[f64]| {
        let rho = state_from_params(x, d);
        let out = lifted.apply_matrix(&rho);
        match (mo.measure_matrix(&out), mi.measure_matrix(&rho)) {
            (Ok(a), Ok(b)) => a - b,
            _ => f64::NAN,
        }
    };
    let mut starts: Vec<CMat> = mi.free_states().iter().map(|s| s.matrix().clone()).collect();
    starts.push(linalg::identity(d) / re(d as f64));
    for s in &opts.extra_starts {
        if s.dim() == d {
            starts.push(s.matrix().clone());
        } else if opts.with_reference && s.dim() * m_in.space().dim() == d {
            let r = State::maximally_mixed(m_in.space().clone());
            starts.push(r.tensor(s).matrix().clone());
        }
    }
    let mut r = random::rng(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(random::random_state_rank(&CompositeSpace::single(d), d, &mut r).into_matrix());
    }
    let mut best: Option<(CMat, f64)> = None;
    for s in &starts {
        let x0 = params_from_state(s);
        let v0 = objective(&x0);
        let (x, v) = if v0.is_finite() { ascend(&objective, &x0, &opts.ascent) } else { (x0, v0) };
        let (cand, val) = if v0.is_finite() && v0 >= v { (s.clone(), v0) } else { (state_from_params(&x, d), v) };
        if val.is_finite() && best.as_ref().map_or(true, |(_, b)| val > *b) {
            best = Some((cand, val));
        }
    }
    let (m, value) = best.ok_or(ResourceError::Unsupported("no finite starting point".into()))?;
    Ok(PowerResult {
        value,
        certificate: State::from_raw(mi.space().clone(), m),
        with_reference: opts.with_reference,
        starts: starts.len(),
    })
}

#[derive(Clone, Debug)]
pub struct EmOptions {
    pub theta_grid: usize,
    pub extra_states: Vec<State>,
}

impl Default for EmOptions {
    fn default() -> Self {
        EmOptions { theta_grid: 72, extra_states: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct EmResult {
    pub value: f64,
    pub maximizer: State,
    pub candidates: usize,
}

fn support_pvm(ens: &TestEnsemble) -> Result<Povm, ResourceError> {
    let d = ens.space().dim();
    let p1 = linalg::eigh(ens.rho1().matrix()).projector(|l| l > 1e-9);
    Ok(Povm::new(vec![p1.clone(), linalg::identity(d) - p1])?)
}

fn respects_blocks(rho: &CMat, pvm: &Povm, ens: &TestEnsemble) -> bool {
    let w = ens.weights();
    pvm.effects().iter().zip(ens.states()).zip(w).all(|((pk, s), q)| {
        linalg::max_abs(&(pk * rho * pk - s.matrix() * re(q))) <= 1e-9
    })
}

/// Coherent combination `p rho1 + (1-p) rho2 + e^{i theta} C + h.c.`, `C = sqrt(p rho1) W sqrt((1-p) rho2)`.
fn coherent_family(ens: &TestEnsemble) -> impl Fn(f64) -> CMat + '_ {
    let [p, q] = ens.weights();
    let e1 = linalg::eigh(ens.rho1().matrix());
    let e2 = linalg::eigh(ens.rho2().matrix());
    let d = ens.space().dim();
    let mut w = linalg::zeros(d, d);
    let n1: Vec<usize> = (0..d).rev().filter(|&i| e1.values[i] > 1e-12).collect();
    let n2: Vec<usize> = (0..d).rev().filter(|&i| e2.values[i] > 1e-12).collect();
    for (&i, &j) in n1.iter().zip(&n2) {
        w += e1.vector(i) * e2.vector(j).adjoint();
    }
    let c = psd_sqrt(&(ens.rho1().matrix() * re(p))) * w * psd_sqrt(&(ens.rho2().matrix() * re(q)));
    let base = ens.average().into_matrix();
    move |theta: f64| {
        let ct = &c * c64(theta.cos(), theta.sin());
        &base + &ct + ct.adjoint()
    }
}

/// `sup_rho M_{AK}(L_P(rho)) - M_A(rho)` over states whose support-measurement blocks
/// reproduce the ensemble, searched over coherent combinations, the block mixture,
/// theory-specific restricted free states and any supplied extra states.
pub fn m_em(m: &ResourceMeasure, ens: &TestEnsemble, reg: &Register, opts: &EmOptions) -> Result<EmResult, ResourceError> {
    if m.space().dim() != ens.space().dim() {
        return Err(ResourceError::SpaceMismatch);
    }
    let pvm = support_pvm(ens)?;
    let lp = measurement_channel_pvm(&pvm, m.space(), reg)?;
    let m_out = m.with_register(reg)?;
    let gain = |rho: &CMat| -> f64 {
        match (m_out.measure_matrix(&lp.apply_matrix(rho)), m.measure_matrix(rho)) {
            (Ok(a), Ok(b)) => a - b,
            _ => f64::NEG_INFINITY,
        }
    };
    let mut best: (CMat, f64) = (ens.average().into_matrix(), f64::NEG_INFINITY);
    best.1 = gain(&best.0);
    let mut count = 1;
    let consider = |rho: CMat, best: &mut (CMat, f64)| {
        let v = gain(&rho);
        if v > best.1 {
            *best = (rho, v);
        }
    };
    let fam = coherent_family(ens);
    let n = opts.theta_grid.max(4);
    let mut grid_best = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let v = gain(&fam(theta));
        count += 1;
        if v > grid_best.1 {
            grid_best = (theta, v);
        }
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let (theta, _) = golden_max(&|t| gain(&fam(t)), grid_best.0 - h, grid_best.0 + h, 60);
    consider(fam(theta), &mut best);
    consider(fam(grid_best.0), &mut best);
    count += 2;
    let d = m.space().dim();
    let pi = linalg::eigh(&(ens.rho1().matrix() + ens.rho2().matrix())).projector(|l| l > 1e-9);
    let mut restricted: Vec<CMat> = Vec::new();
    match m.kind() {
        MeasureKind::Athermality => {
            let tau = super::gibbs_state(m.hamiltonian().expect("Hamiltonian"), m.beta().expect("beta"));
            restricted.push(&pi * tau.matrix() * &pi);
        }
        MeasureKind::Coherence | MeasureKind::Magic => restricted.push(pi.clone()),
        MeasureKind::Energy | MeasureKind::Qfi => {}
    }
    restricted.push(linalg::identity(d));
    for r in restricted.into_iter().chain(opts.extra_states.iter().map(|s| s.matrix().clone())) {
        if r.nrows() != d {
            continue;
        }
        let tr = r.trace().re;
        if tr <= 0.0 {
            continue;
        }
        let rho = r / re(tr);
        if respects_blocks(&rho, &pvm, ens) {
            consider(rho, &mut best);
            count += 1;
        }
    }
    Ok(EmResult { value: best.1, maximizer: State::from_raw(m.space().clone(), best.0), candidates: count })
}

#[derive(Clone, Debug)]
pub struct CosOptions {
    pub power: PowerOptions,
    pub kernel_samples: usize,
    pub seed: u64,
}

impl Default for CosOptions {
    fn default() -> Self {
        CosOptions { power: PowerOptions::default(), kernel_samples: 64, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct CosResult {
    pub value: f64,
    pub povm: Povm,
    pub kernel_dim: usize,
    pub samples: usize,
}

/// Resource power of the measurement channel of the Helstrom POVM of an image ensemble.
///
/// When `q1 s1 - q2 s2` has a kernel the optimal POVM is not unique; a seeded search over
/// kernel reassignments keeps the smallest power found.
pub fn m_cos(m: &ResourceMeasure, image: &TestEnsemble, reg: &Register, opts: &CosOptions) -> Result<CosResult, ResourceError> {
    let m_out = m.with_register(reg)?;
    let h = helstrom(image);
    let kernel_dim = helstrom_kernel_dim(image);
    let evaluate = |q: &Povm| -> Result<f64, ResourceError> {
        let lq = measurement_channel_povm(q, m.space(), reg)?;
        Ok(channel_power(m, &m_out, &lq, &opts.power)?.value)
    };
    let mut best = (h.povm.clone(), evaluate(&h.povm)?);
    let mut samples = 1;
    if kernel_dim > 0 {
        let [q1, q2] = image.weights();
        let x = image.rho1().matrix() * re(q1) - image.rho2().matrix() * re(q2);
        let e = linalg::eigh(&x);
        let tol = Tolerances::default().psd;
        let kernel: Vec<CVec> = (0..e.values.len()).filter(|&i| e.values[i].abs() <= tol).map(|i| e.vector(i)).collect();
        let d = x.nrows();
        let mut r = random::rng(opts.seed);
        for _ in 0..opts.kernel_samples {
            let u = random::haar_unitary(kernel.len(), &mut r);
            let mut z = linalg::zeros(d, d);
            for col in 0..kernel.len() {
                let t: f64 = rand::Rng::random(&mut r);
                let mut v = CVec::zeros(d);
                for (row, kv) in kernel.iter().enumerate() {
                    v += kv * u[(row, col)];
                }
                z += linalg::outer(&v) * re(t);
            }
            let first = &h.povm.effects()[0] + z;
            let q = Povm::two_outcome(first)?;
            let v = evaluate(&q)?;
            samples += 1;
            if v < best.1 {
                best = (q, v);
            }
        }
    }
    Ok(CosResult { value: best.1, povm: best.0, kernel_dim, samples })
}

#[derive(Clone, Copy, Debug)]
pub struct CQuantity {
    /// `|<psi2| H - L^dagger(H') |psi1>|`.
    pub value: f64,
    /// `(spread(H) + spread(H')) / 2`, an upper bound on `value`.
    pub spread_bound: f64,
}

fn leading_vector(s: &State) -> Result<CVec, ResourceError> {
    let e = s.eig();
    if (e.max() - 1.0).abs() > 1e-9 {
        return Err(ResourceError::InvalidParameter("ensemble states must be pure".into()));
    }
    Ok(e.vector(e.values.len() - 1))
}

/// Energy-conservation defect of a channel between two pure test states.
pub fn c_quantity(ch: &Channel, ens: &TestEnsemble, h_in: &Observable, h_out: &Observable) -> Result<CQuantity, ResourceError> {
    let psi1 = leading_vector(ens.rho1())?;
    let psi2 = leading_vector(ens.rho2())?;
    let x = h_in.matrix() - ch.adjoint_apply_matrix(h_out.matrix());
    let value = psi2.dotc(&(&x * &psi1)).norm();
    Ok(CQuantity { value, spread_bound: (h_in.spread() + h_out.spread()) / 2.0 })
}

/// `| M_rho(L) + M_rho(L_P) - M_rho((L (x) id_K) o L_P) |_+` for the energy theory.
pub fn m_colon(
    m_in: &ResourceMeasure,
    m_out: &ResourceMeasure,
    rho: &State,
    ch: &Channel,
    pvm: &Povm,
    reg: &Register,
) -> Result<f64, ResourceError> {
    if m_in.kind() != MeasureKind::Energy || m_out.kind() != MeasureKind::Energy {
        return Err(ResourceError::Unsupported("the strong-additivity defect is defined for energy only".into()));
    }
    let lp = measurement_channel_pvm(pvm, m_in.space(), reg)?;
    let after = ch.tensor_identity_after(&reg.space()).compose(&lp)?;
    let base = m_in.measure(rho)?;
    let g_ch = m_out.measure(&ch.apply(rho)?)? - base;
    let g_p = m_in.with_register(reg)?.measure(&lp.apply(rho)?)? - base;
    let g_both = m_out.with_register(reg)?.measure(&after.apply(rho)?)? - base;
    Ok((g_ch + g_p - g_both).max(0.0))
}
