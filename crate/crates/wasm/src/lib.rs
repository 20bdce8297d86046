//! Browser bindings. Each export takes plain numbers and returns a JSON string; the
//! `*_json` functions carry the logic and also run natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use rtl_core::bounds::{BoundKind, BoundValue};
use rtl_core::discrimination::{helstrom, helstrom_closed_form, TestEnsemble};
use rtl_core::qcore::json;
use rtl_core::qcore::linalg::{re, CMat};
use rtl_core::scenarios::{coherence_erasure, erasure_gain_closed_form, spin_x_measurement, ErasureParams, ScenarioReport};
use rtl_core::{CompositeSpace, State};

#[derive(Serialize)]
struct CurvePoint {
    epsilon: f64,
    /// `null` when the bound diverges.
    bound: Option<f64>,
    scaled: Option<f64>,
}

#[derive(Serialize)]
struct SpinCurve {
    hbar_omega: f64,
    leading_coefficient: f64,
    points: Vec<CurvePoint>,
}

fn log_points(from: f64, to: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(from > 0.0 && from < to && to <= 1.0) || points < 2 {
        return Err("need 0 < from < to <= 1 and at least 2 points".into());
    }
    let (a, b) = (from.ln(), to.ln());
    let last = points - 1;
    Ok((0..points)
        .map(|i| match i {
            0 => from,
            i if i == last => to,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect())
}

fn finite(v: BoundValue) -> Option<f64> {
    v.finite()
}

fn check_failures(rep: &ScenarioReport) -> Vec<String> {
    rep.failed().iter().map(|c| c.name.clone()).collect()
}

/// Energy-cost lower bound of a spin readout along x across a log grid of errors.
pub fn spin_x_curve_json(hbar_omega: f64, from: f64, to: f64, points: usize) -> Result<String, String> {
    let grid = log_points(from, to, points)?;
    let rep = spin_x_measurement(hbar_omega, grid[0]).map_err(|e| e.to_string())?;
    let sweep = rep
        .find_sweep(BoundKind::ProjectiveMeasurement)
        .ok_or("scenario has no readout sweep")?
        .resample(&grid)
        .map_err(|e| e.to_string())?;
    let points = sweep
        .rows
        .iter()
        .map(|r| CurvePoint { epsilon: r.epsilon, bound: finite(r.bound), scaled: finite(r.bound).map(|b| b * r.epsilon) })
        .collect();
    let leading = rep.values.get("leading_coefficient").copied().unwrap_or(0.0);
    Ok(json::to_string(&SpinCurve { hbar_omega, leading_coefficient: leading, points }))
}

#[derive(Serialize)]
struct Discrimination {
    p_fail: f64,
    closed_form: f64,
    /// Bloch coordinates `(t, x, z)` of the first optimal effect `(t 1 + x X + z Z) / 2`.
    effect: [f64; 3],
}

fn bloch_state(r: f64, angle: f64) -> Result<State, String> {
    if !(0.0..=1.0).contains(&r) {
        return Err("Bloch radius must lie in [0, 1]".into());
    }
    let (x, z) = (r * angle.sin(), r * angle.cos());
    let m = CMat::from_row_slice(2, 2, &[re((1.0 + z) / 2.0), re(x / 2.0), re(x / 2.0), re((1.0 - z) / 2.0)]);
    State::new(CompositeSpace::single(2), m).map_err(|e| e.to_string())
}

/// Optimal error for two qubit states in the x-z plane of the Bloch ball, given by radius and
/// polar angle, with prior `p` on the first.
pub fn helstrom_json(p: f64, r1: f64, angle1: f64, r2: f64, angle2: f64) -> Result<String, String> {
    let ens = TestEnsemble::general(bloch_state(r1, angle1)?, bloch_state(r2, angle2)?, p).map_err(|e| e.to_string())?;
    let best = helstrom(&ens);
    let e = &best.povm.effects()[0];
    let t = (e[(0, 0)] + e[(1, 1)]).re;
    let x = (e[(0, 1)] + e[(1, 0)]).re;
    let z = (e[(0, 0)] - e[(1, 1)]).re;
    Ok(json::to_string(&Discrimination { p_fail: best.p_fail, closed_form: helstrom_closed_form(&ens), effect: [t, x, z] }))
}

#[derive(Serialize)]
struct Erasure {
    level_gap: f64,
    beta: f64,
    epsilon: f64,
    gain: f64,
    cost_cap: f64,
    /// Positive when the erasure is provably costly.
    gap_margin: Option<f64>,
    athermality_error_bound: Option<f64>,
    work_bound: Option<f64>,
    failed_checks: Vec<String>,
}

/// Coherence erasure between levels `0` and `level_gap` at inverse temperature `beta`.
pub fn erasure_gap_json(level_gap: f64, beta: f64, epsilon: f64) -> Result<String, String> {
    if !(level_gap > 0.0) {
        return Err("level gap must be positive".into());
    }
    let p = ErasureParams { levels: vec![0.0, level_gap], beta, epsilon, ..Default::default() };
    let rep = coherence_erasure(&p).map_err(|e| e.to_string())?;
    let pick = |k: BoundKind| rep.find_bound(k).and_then(|b| finite(b.value));
    Ok(json::to_string(&Erasure {
        level_gap,
        beta,
        epsilon,
        gain: erasure_gain_closed_form(&p.levels, 0, 1, beta),
        cost_cap: 4f64.ln() / beta,
        gap_margin: pick(BoundKind::ErasureGap),
        athermality_error_bound: pick(BoundKind::AthermalityError),
        work_bound: pick(BoundKind::Work),
        failed_checks: check_failures(&rep),
    }))
}

#[wasm_bindgen]
pub fn spin_x_curve(hbar_omega: f64, from: f64, to: f64, points: usize) -> Result<String, JsError> {
    spin_x_curve_json(hbar_omega, from, to, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn helstrom_explorer(p: f64, r1: f64, angle1: f64, r2: f64, angle2: f64) -> Result<String, JsError> {
    helstrom_json(p, r1, angle1, r2, angle2).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn erasure_gap(level_gap: f64, beta: f64, epsilon: f64) -> Result<String, JsError> {
    erasure_gap_json(level_gap, beta, epsilon).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(text: &str, key: &str) -> f64 {
        let at = text.find(&format!("\"{key}\":")).expect("key present") + key.len() + 3;
        let rest = &text[at..];
        let end = rest.find([',', '}', ']']).unwrap();
        rest[..end].parse().unwrap()
    }

    #[test]
    fn spin_curve_approaches_leading_term() {
        let out = spin_x_curve_json(1.0, 1e-5, 1e-1, 5).unwrap();
        assert!(out.starts_with("{\"hbar_omega\""));
        let first_scaled = field(&out, "scaled");
        assert!((first_scaled - 0.125).abs() < 0.00125);
        assert!(spin_x_curve_json(1.0, 0.0, 0.1, 5).is_err());
    }

    #[test]
    fn orthogonal_pure_states_are_perfectly_distinguishable() {
        let out = helstrom_json(0.5, 1.0, 0.0, 1.0, std::f64::consts::PI).unwrap();
        assert!(field(&out, "p_fail").abs() < 1e-12);
        let same = helstrom_json(0.3, 0.5, 1.0, 0.5, 1.0).unwrap();
        assert!((field(&same, "closed_form") - 0.3).abs() < 1e-12);
        assert!(helstrom_json(0.5, 1.5, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn erasure_gap_sign_follows_threshold() {
        let wide = erasure_gap_json(4.0, 1.0, 0.01).unwrap();
        assert!(field(&wide, "gap_margin") > 0.0);
        assert!(wide.contains("\"failed_checks\":[]"));
        let narrow = erasure_gap_json(1.0, 1.0, 0.01).unwrap();
        assert!(field(&narrow, "gap_margin") <= 0.0);
    }
}
