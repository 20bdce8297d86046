//! Seeded invariant suites: discrimination oracles, the measurement-disturbance inequality,
//! resource-measure axioms and bound dominance.

use serde::Serialize;

use crate::bounds::{self, BoundInput, BoundKind, BoundValue};
use crate::channels::{Channel, Implementation, Povm};
use crate::discrimination::{
    avg_recovery_error, helstrom, helstrom_closed_form, irreversibility, measurement_disturbance_gap,
    recovery_from_povm, TestEnsemble,
};
use crate::qcore::linalg::{self, re, CMat};
use crate::qcore::random::{self, QRng};
use crate::qcore::{CompositeSpace, Observable, State};
use crate::resources::{gibbs_state, MeasureKind, ResourceMeasure};

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Fraction of the full instance budget, in `(0, 1]`.
    pub budget: f64,
    /// Multiplies every tolerance; a negative value makes the equality checks fail.
    pub tolerance_scale: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 0, budget: 1.0, tolerance_scale: 1.0 }
    }
}

impl SelftestOptions {
    fn count(&self, full: usize) -> usize {
        ((full as f64 * self.budget).ceil() as usize).max(1)
    }

    fn tol(&self, base: f64) -> f64 {
        base * self.tolerance_scale
    }
}

/// Outcome of one suite. `worst` is the largest margin seen, where a case violates when its
/// margin exceeds `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Tally {
    name: String,
    tolerance: f64,
    cases: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Tally { name: name.into(), tolerance, cases: 0, violations: 0, worst: f64::NEG_INFINITY }
    }

    fn record(&mut self, margin: f64) {
        self.cases += 1;
        if !(margin <= self.tolerance) {
            self.violations += 1;
        }
        if margin > self.worst || margin.is_nan() {
            self.worst = margin;
        }
    }

    fn fail(&mut self) {
        self.cases += 1;
        self.violations += 1;
        self.worst = f64::INFINITY;
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            pass: self.violations == 0 && self.cases > 0,
            name: self.name,
            cases: self.cases,
            violations: self.violations,
            worst: self.worst,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }
}

pub fn run_all(opts: &SelftestOptions) -> SelftestReport {
    let mut suites = helstrom_oracle(opts);
    suites.push(disturbance_sweep(opts));
    suites.extend(measure_axioms(opts));
    suites.extend(bound_dominance(opts));
    SelftestReport { seed: opts.seed, suites }
}

fn dim_in(r: &mut QRng, lo: usize, hi: usize) -> usize {
    r.random_range(lo..=hi)
}

/// Random state supported on the span of the given orthonormal columns.
fn state_on(cols: &CMat, r: &mut QRng) -> State {
    let k = cols.ncols();
    let inner = random::random_state(&CompositeSpace::single(k), r);
    let m = cols * inner.matrix() * cols.adjoint();
    State::new(CompositeSpace::single(cols.nrows()), m).expect("embedding preserves validity")
}

/// Closed form against sampled POVMs, and the Helstrom recovery against its irreversibility.
pub fn helstrom_oracle(opts: &SelftestOptions) -> Vec<SuiteResult> {
    let mut r = random::rng_stream(opts.seed, 1);
    let samples = opts.count(10_000);
    let mut sampled = Tally::new("helstrom/sampled-povms", opts.tol(1e-9));
    let mut closed = Tally::new("helstrom/closed-form", opts.tol(1e-9));
    let mut recovery = Tally::new("helstrom/recovery-error", opts.tol(1e-8));
    for _ in 0..opts.count(200) {
        let d = dim_in(&mut r, 2, 3);
        let sp = CompositeSpace::single(d);
        let p: f64 = r.random_range(0.05..0.95);
        let (a, b) = (random::random_state(&sp, &mut r), random::random_state(&sp, &mut r));
        let ens = TestEnsemble::general(a.clone(), b.clone(), p).expect("valid ensemble");
        let best = helstrom_closed_form(&ens);
        closed.record((helstrom(&ens).p_fail - best).abs());
        let mut lowest = f64::INFINITY;
        for _ in 0..samples {
            let e = if r.random::<f64>() < 0.5 {
                random::random_two_outcome_effect(d, &mut r)
            } else {
                random::random_projector(d, &mut r)
            };
            let pf = p * (1.0 - linalg::trace_prod(&e, a.matrix()).re) + (1.0 - p) * linalg::trace_prod(&e, b.matrix()).re;
            lowest = lowest.min(pf);
        }
        sampled.record(best - lowest);

        // Orthogonal pair through a random channel.
        let u = random::haar_unitary(d, &mut r);
        let split = dim_in(&mut r, 1, d - 1);
        let rho1 = state_on(&u.columns(0, split).into_owned(), &mut r);
        let rho2 = state_on(&u.columns(split, d - split).into_owned(), &mut r);
        let orth = TestEnsemble::orthogonal(rho1, rho2, p).expect("orthogonal supports");
        let dout = dim_in(&mut r, 2, 3);
        let rank = dim_in(&mut r, 1, 3);
        let ch = Channel::random(sp.clone(), CompositeSpace::single(dout), rank, &mut r);
        match irreversibility(&ch, &orth).and_then(|irr| {
            let rec = recovery_from_povm(&irr.povm, &orth)?;
            Ok((avg_recovery_error(&ch, &orth, &rec)?, irr.delta))
        }) {
            Ok((err, delta)) => recovery.record((err - delta * delta).abs()),
            Err(_) => recovery.fail(),
        }
    }
    vec![sampled.finish(), closed.finish(), recovery.finish()]
}

/// Swap of the first two basis vectors, identity elsewhere.
fn flip01(d: usize) -> CMat {
    let mut x = linalg::identity(d);
    x[(0, 0)] = re(0.0);
    x[(1, 1)] = re(0.0);
    x[(0, 1)] = re(1.0);
    x[(1, 0)] = re(1.0);
    x
}

/// `lhs <= 4 eps + eps^2` on generic couplings and on perturbed measuring couplings.
pub fn disturbance_sweep(opts: &SelftestOptions) -> SuiteResult {
    let mut r = random::rng_stream(opts.seed, 2);
    let mut t = Tally::new("disturbance", opts.tol(1e-9));
    for i in 0..opts.count(500) {
        let (da, db) = (dim_in(&mut r, 2, 4), dim_in(&mut r, 2, 4));
        let (sa, sb) = (CompositeSpace::single(da), CompositeSpace::single(db));
        let rho = random::random_state(&sa, &mut r);
        let p0 = random::random_projector(da, &mut r);
        let p = Povm::new(vec![p0.clone(), linalg::identity(da) - &p0]).expect("projector pair");
        let out = CompositeSpace::new(vec![da, db]).expect("dims");
        let built = if i % 2 == 0 {
            let v = random::haar_unitary(da * db, &mut r);
            let eta = random::random_state(&sb, &mut r);
            let keep = match r.random_range(0..3) {
                0 => vec![0],
                1 => vec![1],
                _ => vec![0, 1],
            };
            let dk: usize = keep.iter().map(|&k| [da, db][k]).product();
            let q = Povm::two_outcome(random::random_two_outcome_effect(dk, &mut r)).expect("effect");
            Implementation::new(sa.clone(), eta, v, out, keep).map(|imp| (imp, q))
        } else {
            let c = linalg::kron(&p0, &linalg::identity(db)) + linalg::kron(&(linalg::identity(da) - &p0), &flip01(db));
            let g = random::random_hermitian(da * db, &mut r);
            let v = linalg::unitary_exp(&g, r.random_range(0.0..0.1)) * c;
            let noise = r.random_range(0.0..0.05);
            let ground = State::basis(sb.clone(), 0).expect("basis");
            let mixed = random::random_state(&sb, &mut r);
            let eta = State::mixture(&[(1.0 - noise, &ground), (noise, &mixed)]).expect("mixture");
            let e0 = linalg::outer(&linalg::ket(db, 0));
            let q = Povm::new(vec![e0.clone(), linalg::identity(db) - e0]).expect("projector pair");
            Implementation::new(sa.clone(), eta, v, out, vec![1]).map(|imp| (imp, q))
        };
        match built.ok().and_then(|(imp, q)| measurement_disturbance_gap(&rho, &p, &q, &imp).ok()) {
            Some(gap) => t.record(gap.lhs - gap.bound),
            None => t.fail(),
        }
    }
    t.finish()
}

/// Integer-spaced levels so that sums of energies are exactly degenerate.
fn integer_levels(d: usize, r: &mut QRng) -> Vec<f64> {
    (0..d).map(|_| r.random_range(0..3) as f64).collect()
}

/// Random unitary commuting with a diagonal Hamiltonian.
fn conserving_unitary(levels: &[f64], r: &mut QRng) -> CMat {
    let n = levels.len();
    let mut u = linalg::zeros(n, n);
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&j| levels[j] == levels[i]).collect();
        let w = random::haar_unitary(block.len(), r);
        for (a, &ja) in block.iter().enumerate() {
            seen[ja] = true;
            for (b, &jb) in block.iter().enumerate() {
                u[(ja, jb)] = w[(a, b)];
            }
        }
    }
    u
}

fn sum_levels(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

/// `rho -> Tr_B[U (rho (x) eta) U^dagger]` for an energy-conserving `U`.
fn conserving_channel(levels_a: &[f64], levels_b: &[f64], eta: &State, r: &mut QRng) -> Channel {
    let u = conserving_unitary(&sum_levels(levels_a, levels_b), r);
    let sa = CompositeSpace::single(levels_a.len());
    let out = CompositeSpace::new(vec![levels_a.len(), levels_b.len()]).expect("dims");
    Implementation::new(sa, eta.clone(), u, out, vec![0]).expect("conserving unitary").channel()
}

/// Mixture of a phased basis permutation and rank-one maps `|f(j)><j|`, each sending basis
/// vectors to basis vectors.
fn incoherent_channel(d: usize, r: &mut QRng) -> Channel {
    let w: f64 = r.random();
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, r.random_range(0..=i));
    }
    let mut k0 = linalg::zeros(d, d);
    for (j, &pj) in perm.iter().enumerate() {
        let phase: f64 = r.random_range(0.0..std::f64::consts::TAU);
        k0[(pj, j)] = linalg::c64(phase.cos(), phase.sin()) * w.sqrt();
    }
    let mut kraus = vec![k0];
    let n = r.random_range(1..=3);
    for j in 0..d {
        let c: Vec<_> = (0..n).map(|_| random::complex_normal(r)).collect();
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in c {
            let mut k = linalg::zeros(d, d);
            k[(r.random_range(0..d), j)] = z * ((1.0 - w).sqrt() / norm);
            kraus.push(k);
        }
    }
    Channel::new(CompositeSpace::single(d), CompositeSpace::single(d), kraus).expect("normalised incoherent channel")
}

fn clifford_word(r: &mut QRng) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = CMat::from_row_slice(2, 2, &[re(s), re(s), re(s), re(-s)]);
    let ph = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), linalg::c64(0.0, 1.0)]);
    let mut u = linalg::identity(2);
    for _ in 0..r.random_range(1..=6) {
        u = if r.random::<bool>() { &h * u } else { &ph * u };
    }
    u
}

/// Clifford rotation, optionally followed by computational-basis dephasing.
fn stabilizer_channel(r: &mut QRng) -> Channel {
    let q = CompositeSpace::single(2);
    let u = clifford_word(r);
    if r.random::<bool>() {
        let p0 = linalg::outer(&linalg::ket(2, 0));
        let p1 = linalg::outer(&linalg::ket(2, 1));
        Channel::new(q.clone(), q, vec![&p0 * &u, &p1 * &u]).expect("dephased Clifford")
    } else {
        Channel::unitary(q, u).expect("Clifford")
    }
}

struct Theory {
    kind: MeasureKind,
    measure: ResourceMeasure,
    levels: Vec<f64>,
    beta: f64,
}

fn theory(kind: MeasureKind, r: &mut QRng) -> Theory {
    let beta = r.random_range(0.5..2.0);
    let d = if kind == MeasureKind::Magic { 2 } else { dim_in(r, 2, 3) };
    let mut levels = integer_levels(d, r);
    levels[0] = 0.0;
    if levels.iter().all(|&e| e == 0.0) {
        levels[d - 1] = 1.0;
    }
    let sp = CompositeSpace::single(d);
    let h = Observable::diagonal(sp.clone(), &levels).expect("levels");
    let measure = match kind {
        MeasureKind::Energy => ResourceMeasure::energy(&h),
        MeasureKind::Athermality => ResourceMeasure::athermality(&h, beta).expect("beta"),
        MeasureKind::Coherence => ResourceMeasure::coherence(&sp),
        MeasureKind::Qfi => ResourceMeasure::qfi(&h),
        MeasureKind::Magic => ResourceMeasure::magic(1).expect("one qubit"),
    };
    Theory { kind, measure, levels, beta }
}

fn free_operation(th: &Theory, r: &mut QRng) -> Channel {
    let d = th.levels.len();
    match th.kind {
        MeasureKind::Coherence => incoherent_channel(d, r),
        MeasureKind::Magic => stabilizer_channel(r),
        kind => {
            let db = dim_in(r, 2, 3);
            let lb = integer_levels(db, r);
            let sb = CompositeSpace::single(db);
            let hb = Observable::diagonal(sb.clone(), &lb).expect("levels");
            let eta = match kind {
                MeasureKind::Energy => State::pure(sb, &hb.eig().vector(0)).expect("ground state"),
                MeasureKind::Athermality => gibbs_state(&hb, th.beta),
                _ => {
                    let w: Vec<f64> = (0..db).map(|_| r.random::<f64>() + 1e-3).collect();
                    let tot: f64 = w.iter().sum();
                    let m = CMat::from_fn(db, db, |i, j| if i == j { re(w[i] / tot) } else { re(0.0) });
                    State::new(sb, m).expect("diagonal state")
                }
            };
            conserving_channel(&th.levels, &lb, &eta, r)
        }
    }
}

/// Additivity, monotonicity under sampled free operations, continuity and the pure-state QFI identity.
pub fn measure_axioms(opts: &SelftestOptions) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    for (idx, kind) in MeasureKind::ALL.iter().copied().enumerate() {
        let mut r = random::rng_stream(opts.seed, 10 + idx as u64);
        if kind != MeasureKind::Magic {
            let mut t = Tally::new(format!("additivity/{}", kind.name()), opts.tol(1e-7));
            for _ in 0..opts.count(200) {
                let (a, b) = (theory(kind, &mut r), theory(kind, &mut r));
                let b = if kind == MeasureKind::Athermality {
                    let h = Observable::diagonal(CompositeSpace::single(b.levels.len()), &b.levels).expect("levels");
                    Theory { measure: ResourceMeasure::athermality(&h, a.beta).expect("beta"), beta: a.beta, ..b }
                } else {
                    b
                };
                let rho = random::random_state(a.measure.space(), &mut r);
                let sigma = random::random_state(b.measure.space(), &mut r);
                let joint = a.measure.product(&b.measure);
                match (joint, a.measure.measure(&rho), b.measure.measure(&sigma)) {
                    (Ok(j), Ok(x), Ok(y)) => match j.measure(&rho.tensor(&sigma)) {
                        Ok(z) => t.record((z - x - y).abs()),
                        Err(_) => t.fail(),
                    },
                    _ => t.fail(),
                }
            }
            out.push(t.finish());
        }

        let mut t = Tally::new(format!("monotonicity/{}", kind.name()), opts.tol(1e-8));
        for _ in 0..opts.count(100) {
            let th = theory(kind, &mut r);
            let ch = free_operation(&th, &mut r);
            let rho = random::random_state(th.measure.space(), &mut r);
            match ch.apply(&rho).map_err(|_| ()).and_then(|o| {
                Ok(th.measure.measure(&o).map_err(|_| ())? - th.measure.measure(&rho).map_err(|_| ())?)
            }) {
                Ok(g) => t.record(g),
                Err(_) => t.fail(),
            }
        }
        out.push(t.finish());

        for m in [1usize, 2] {
            let mut t = Tally::new(format!("continuity/{}/m={m}", kind.name()), opts.tol(1e-9));
            for _ in 0..opts.count(200) {
                let th = theory(kind, &mut r);
                let mm = if m == 1 { Ok(th.measure.clone()) } else { th.measure.with_reference() };
                let Ok(mm) = mm else {
                    t.fail();
                    continue;
                };
                let rho = random::random_state(th.measure.space(), &mut r).tensor_power(m);
                let other = random::random_state(mm.space(), &mut r);
                let w: f64 = r.random::<f64>().powi(2);
                let sigma = State::mixture(&[(1.0 - w, &rho), (w, &other)]).expect("mixture");
                let eps = linalg::trace_norm(&(rho.matrix() - sigma.matrix()));
                match (mm.measure(&rho), mm.measure(&sigma)) {
                    (Ok(x), Ok(y)) => t.record((x - y).abs() - th.measure.constants().continuity_rhs(m, eps)),
                    _ => t.fail(),
                }
            }
            out.push(t.finish());
        }
    }

    out.push(qfi_pure(opts));
    out
}

/// Fisher information of pure states against four times the variance.
pub fn qfi_pure(opts: &SelftestOptions) -> SuiteResult {
    let mut r = random::rng_stream(opts.seed, 20);
    let mut t = Tally::new("qfi/pure-variance", opts.tol(1e-8));
    for _ in 0..opts.count(200) {
        let d = dim_in(&mut r, 2, 4);
        let sp = CompositeSpace::single(d);
        let h = Observable::new(sp.clone(), random::random_hermitian(d, &mut r)).expect("Hermitian");
        let psi = random::random_pure(&sp, &mut r);
        match ResourceMeasure::qfi(&h).measure(&psi) {
            Ok(f) => t.record((f - 4.0 * h.variance(&psi)).abs()),
            Err(_) => t.fail(),
        }
    }
    t.finish()
}

/// Random inputs for `kind` with the error parameter zeroed with some probability.
fn random_input(kind: BoundKind, r: &mut QRng) -> BoundInput {
    let mut inp = BoundInput {
        m_em: Some(r.random_range(0.0..3.0)),
        m_cos: Some(r.random_range(0.0..3.0)),
        power: Some(r.random_range(0.0..3.0)),
        k: Some(r.random_range(0.1..5.0)),
        a: Some(1.0),
        b: Some(1.0),
        c_max: Some(r.random_range(0.0..1.0)),
        beta: Some(r.random_range(0.2..3.0)),
        c_quantity: Some(if r.random::<f64>() < 0.2 { 0.0 } else { r.random_range(0.0..2.0) }),
        spread_in: Some(r.random_range(0.1..4.0)),
        spread_out: Some(r.random_range(0.0..4.0)),
        commutator_norm: Some(if r.random::<f64>() < 0.2 { 0.0 } else { r.random_range(0.0..2.0) }),
        generator_spread: Some(if r.random::<f64>() < 0.2 { 0.0 } else { r.random_range(0.0..4.0) }),
        level_gap: Some(r.random_range(0.0..6.0)),
        ..Default::default()
    };
    if r.random::<f64>() < 0.2 {
        inp.m_cos = inp.m_em;
        inp.power = inp.m_em;
    }
    if let Some(name) = kind.error_parameter() {
        let e = if r.random::<f64>() < 0.3 { 0.0 } else { r.random_range(1e-6..1.0) };
        inp.set(name, e);
    }
    inp
}

/// The driving quantity whose positivity together with a zero error makes a bound diverge.
fn drive(kind: BoundKind, inp: &BoundInput) -> f64 {
    let v = |x: Option<f64>| x.unwrap_or(0.0);
    match kind {
        BoundKind::FailureProbability | BoundKind::Way => v(inp.m_em) - v(inp.power),
        BoundKind::EnergyIrreversibility | BoundKind::EnergyError => v(inp.c_quantity),
        BoundKind::ProjectiveMeasurement => v(inp.commutator_norm),
        BoundKind::UnitaryGate => v(inp.generator_spread),
        BoundKind::ErasureGap => 0.0,
        _ => v(inp.m_em) - v(inp.m_cos),
    }
}

/// Simplified form below the general one, and divergence exactly at zero error with positive drive.
pub fn bound_dominance(opts: &SelftestOptions) -> Vec<SuiteResult> {
    let mut r = random::rng_stream(opts.seed, 30);
    let mut dom = Tally::new("bounds/simplified-below-general", opts.tol(1e-9));
    for _ in 0..opts.count(10_000) {
        let inp = random_input(BoundKind::General, &mut r);
        match (bounds::simplified_tradeoff_bound(&inp), bounds::general_tradeoff_bound(&inp)) {
            (Ok(s), Ok(g)) => match (s.value, g.value) {
                (BoundValue::Finite(x), BoundValue::Finite(y)) => dom.record(x - y),
                (sv, gv) => dom.record(if sv.le(gv, 0.0) { f64::NEG_INFINITY } else { f64::INFINITY }),
            },
            _ => dom.fail(),
        }
    }
    let mut div = Tally::new("bounds/divergence-iff", opts.tol(0.0));
    for kind in BoundKind::ALL {
        for _ in 0..opts.count(500) {
            let inp = random_input(kind, &mut r);
            let err = kind.error_parameter().and_then(|n| inp.get(n));
            let expected = drive(kind, &inp) > 0.0 && err == Some(0.0);
            match bounds::evaluate(kind, &inp) {
                Ok(rep) => div.record(if rep.value.is_divergent() == expected { f64::NEG_INFINITY } else { f64::INFINITY }),
                Err(_) => div.fail(),
            }
        }
    }
    vec![dom.finish(), div.finish()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelftestOptions {
        SelftestOptions { seed: 3, budget: 0.02, tolerance_scale: 1.0 }
    }

    #[test]
    fn reduced_budget_passes() {
        let rep = run_all(&quick());
        for s in &rep.suites {
            assert!(s.pass, "{s:?}");
        }
        assert!(rep.suites.iter().any(|s| s.name == "disturbance" && s.cases == 10));
    }

    #[test]
    fn negated_tolerance_fails() {
        let rep = run_all(&SelftestOptions { tolerance_scale: -1.0, ..quick() });
        assert!(!rep.all_passed());
    }

    #[test]
    fn incoherent_channels_are_channels() {
        let mut r = random::rng(1);
        for d in 2..4 {
            let ch = incoherent_channel(d, &mut r);
            assert!(ch.tp_defect() < 1e-12);
        }
    }

    #[test]
    fn conserving_unitary_commutes() {
        let mut r = random::rng(2);
        let levels = [0.0, 1.0, 1.0, 2.0, 1.0];
        let u = conserving_unitary(&levels, &mut r);
        let h = CMat::from_fn(5, 5, |i, j| if i == j { re(levels[i]) } else { re(0.0) });
        assert!(linalg::max_abs(&linalg::commutator(&u, &h)) < 1e-12);
        assert!(linalg::unitarity_defect(&u) < 1e-12);
    }
}
