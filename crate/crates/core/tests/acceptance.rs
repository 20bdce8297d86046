//! Acceptance criteria, one line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rtl_core::bounds::BoundKind;
use rtl_core::scenarios::{
    coherence_erasure, erasure_gain_closed_form, gibbs_preserving_diverging, qfi_divergence, rni_coherence, rni_magic,
    spin_x_measurement, ErasureParams, ScenarioReport,
};
use rtl_core::selftest::{self, SelftestOptions, SuiteResult};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn check_value(rep: &ScenarioReport, name: &str) -> f64 {
    rep.find_check(name).map(|c| c.value).unwrap_or(f64::NAN)
}

fn suites_pass(suites: &[SuiteResult]) -> Outcome {
    let bad: Vec<String> = suites
        .iter()
        .filter(|s| !s.pass)
        .map(|s| format!("{} ({} of {} cases, worst {:e})", s.name, s.violations, s.cases, s.worst))
        .collect();
    let cases: usize = suites.iter().map(|s| s.cases).sum();
    if bad.is_empty() {
        outcome(true, format!("{} suites, {cases} cases", suites.len()))
    } else {
        outcome(false, format!("failing: {}", bad.join(", ")))
    }
}

fn spin_x() -> Outcome {
    let at = |eps: f64| {
        spin_x_measurement(1.0, eps)
            .ok()
            .and_then(|r| r.find_bound(BoundKind::ProjectiveMeasurement).and_then(|b| b.value.finite()))
            .unwrap_or(f64::NAN)
    };
    let b = at(0.01);
    let eps = 1e-5;
    let scaled = at(eps) * eps;
    let pass = (b - 10.5).abs() <= 1e-12 && (scaled - 0.125).abs() <= 0.01 * 0.125;
    outcome(pass, format!("bound(0.01) = {b}, eps * bound(1e-5) = {scaled:.6}"))
}

fn gibbs_preserving() -> Outcome {
    let Ok(r) = gibbs_preserving_diverging(1.0, 2.0, 1.0) else {
        return outcome(false, "construction failed");
    };
    let choi = check_value(&r, "choi_min_eigenvalue");
    let fixed = check_value(&r, "gibbs_fixed_point");
    let delta = check_value(&r, "irreversibility");
    let c = check_value(&r, "c_quantity");
    let pass = choi >= -1e-10 && fixed <= 1e-10 && delta <= 1e-8 && (c - 0.5).abs() <= 1e-10;
    outcome(pass, format!("choi min {choi:e}, gibbs defect {fixed:e}, delta {delta:e}, C = {c}"))
}

fn magic() -> Outcome {
    let target = (1.0 + 2.0 * (std::f64::consts::PI / 18.0).sin()).log2();
    let Ok(r) = rni_magic() else {
        return outcome(false, "construction failed");
    };
    let v = r.values.get("t_magic_bits").copied().unwrap_or(f64::NAN);
    outcome((v - target).abs() <= 1e-4, format!("computed {v:.6} bits, target {target:.6} bits"))
}

fn athermality_closed_forms() -> Outcome {
    let p = ErasureParams::default();
    let Ok(r) = coherence_erasure(&p) else {
        return outcome(false, "construction failed");
    };
    // Independent form: (1/beta) ln(2 cosh(beta dE / 2)).
    let de = p.levels[p.j_prime] - p.levels[p.j];
    let oracle = (2.0 * (p.beta * de / 2.0).cosh()).ln() / p.beta;
    let closed = erasure_gain_closed_form(&p.levels, p.j, p.j_prime, p.beta);
    let direct = check_value(&r, "closed_form_direct");
    let power = check_value(&r, "measured_cos_power");
    let cap = 4f64.ln() / p.beta;
    let pass = (closed - oracle).abs() <= 1e-9 && (direct - closed).abs() <= 1e-9 && power <= cap + 1e-8;
    outcome(pass, format!("closed {closed:.12}, direct {direct:.12}, measured power {power:e} (cap {cap:.6})"))
}

fn rni_suite() -> Outcome {
    match (rni_coherence(), rni_magic()) {
        (Ok(c), Ok(m)) => {
            let failed: Vec<String> = c.failed().into_iter().chain(m.failed()).map(|k| k.name.clone()).collect();
            let n = c.checks.len() + m.checks.len();
            outcome(failed.is_empty(), if failed.is_empty() { format!("{n} checks") } else { format!("failing: {}", failed.join(", ")) })
        }
        _ => outcome(false, "construction failed"),
    }
}

fn qfi() -> Outcome {
    let pure = selftest::qfi_pure(&SelftestOptions::default());
    let Ok(r) = qfi_divergence(10_000, 1.0) else {
        return outcome(false, "construction failed");
    };
    let increasing = r.find_check("qfi_strictly_increasing").is_some_and(|c| c.pass);
    let mean = r.values.get("mean_energy").copied().unwrap_or(f64::NAN);
    let reference = r.values.get("mean_energy_reference").copied().unwrap_or(f64::NAN);
    let pure_ok = pure.pass;
    let pass = pure_ok && increasing && (mean - reference).abs() <= 1e-3;
    outcome(pass, format!("pure-state identity {}, increasing {increasing}, <H> {mean:.6} vs {reference:.6}", if pure_ok { "ok" } else { "violated" }))
}

fn main() -> ExitCode {
    let opts = SelftestOptions::default();
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("spin-x projective readout", Duration::from_secs(1), Box::new(spin_x)),
        ("gibbs-preserving diverging channel", Duration::from_secs(1), Box::new(gibbs_preserving)),
        ("helstrom oracle", Duration::from_secs(60), Box::new(move || suites_pass(&selftest::helstrom_oracle(&opts)))),
        ("measurement disturbance", Duration::from_secs(120), Box::new(move || suites_pass(&[selftest::disturbance_sweep(&opts)]))),
        ("measure axioms", Duration::from_secs(300), Box::new(move || suites_pass(&selftest::measure_axioms(&opts)))),
        ("T-state magic", Duration::from_secs(5), Box::new(magic)),
        ("athermality closed forms", Duration::from_secs(60), Box::new(athermality_closed_forms)),
        ("bound dominance and divergence", Duration::from_secs(60), Box::new(move || suites_pass(&selftest::bound_dominance(&opts)))),
        ("resource-non-increasing suite", Duration::from_secs(30), Box::new(rni_suite)),
        ("fisher information divergence", Duration::from_secs(60), Box::new(qfi)),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= *budget;
        let pass = o.pass && in_time;
        if !pass {
            failures += 1;
        }
        let timing = if in_time { String::new() } else { format!(" [over budget {budget:?}]") };
        println!(
            "criterion {:>2} {:<36} {}  {} ({:.2?}){timing}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
