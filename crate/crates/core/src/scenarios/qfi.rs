//! A state with finite energy and athermality whose Fisher information grows without bound.

use crate::qcore::linalg::{re, CVec};
use crate::qcore::{CompositeSpace, Observable, State};
use crate::resources::ResourceMeasure;

use super::{Check, ScenarioError, ScenarioReport};

const ZETA3: f64 = 1.202_056_903_159_594_2;
/// Truncation whose mean energy serves as the large-N reference.
pub const REFERENCE_TRUNCATION: usize = 1_000_000;
const LADDER: [usize; 4] = [10, 100, 1000, 10_000];
const DENSE_LIMIT: usize = 64;

/// Moments of `H = sum_n n |n><n|` (levels `0..=N`) in the state proportional to
/// `sum_{m=1}^N m^{-3/2} |m>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiSums {
    pub truncation: usize,
    pub mean: f64,
    pub mean_square: f64,
    /// `4 Var(H)` for the pure state.
    pub qfi: f64,
    /// `<H> + ln(Z_N) / beta`, the athermality of the pure state.
    pub athermality: f64,
}

impl QfiSums {
    pub fn compute(n: usize, beta: f64) -> Self {
        // Summed from the smallest terms upward.
        let (mut s3, mut s2, mut s1) = (0.0, 0.0, 0.0);
        for m in (1..=n).rev() {
            let x = m as f64;
            s3 += x.powi(-3);
            s2 += x.powi(-2);
            s1 += 1.0 / x;
        }
        let mean = s2 / s3;
        let mean_square = s1 / s3;
        let log_z = if n == 0 { 0.0 } else { (-(-beta * (n as f64 + 1.0)).exp_m1()).ln() - (-(-beta).exp_m1()).ln() };
        QfiSums {
            truncation: n,
            mean,
            mean_square,
            qfi: 4.0 * (mean_square - mean * mean),
            athermality: mean + log_z / beta,
        }
    }
}

fn dense_state(n: usize) -> Result<(State, Observable), ScenarioError> {
    let space = CompositeSpace::single(n + 1);
    let levels: Vec<f64> = (0..=n).map(|i| i as f64).collect();
    let h = Observable::diagonal(space.clone(), &levels)?;
    let mut v = CVec::zeros(n + 1);
    for m in 1..=n {
        v[m] = re((m as f64).powf(-1.5));
    }
    Ok((State::pure_normalized(space, &v)?, h))
}

/// Reports the moments at truncation `n` together with the growth trend over a fixed ladder.
pub fn qfi_divergence(n: usize, beta: f64) -> Result<ScenarioReport, ScenarioError> {
    if n == 0 || !(beta > 0.0) {
        return Err(ScenarioError::InvalidParameter("need truncation >= 1 and beta > 0".into()));
    }
    let mut rep = ScenarioReport::new("qfi-divergence");
    rep.param("truncation", n as f64);
    rep.param("beta", beta);
    rep.note("the truncated vector is renormalised exactly");
    let s = QfiSums::compute(n, beta);
    rep.value("mean_energy", s.mean);
    rep.value("mean_square_energy", s.mean_square);
    rep.value("qfi", s.qfi);
    rep.value("athermality", s.athermality);
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    rep.value("mean_energy_limit", zeta2 / ZETA3);
    if n == 1 {
        rep.check(Check::eq("single_level_qfi", s.qfi, 0.0, 1e-12));
    }

    if n <= DENSE_LIMIT {
        let (psi, h) = dense_state(n)?;
        let dense_qfi = ResourceMeasure::qfi(&h).measure(&psi)?;
        rep.check(Check::eq("dense_qfi", dense_qfi, s.qfi, 1e-8 * s.qfi.max(1.0)));
        rep.check(Check::eq("dense_qfi_variance", dense_qfi, 4.0 * h.variance(&psi), 1e-8 * s.qfi.max(1.0)));
        let dense_a = ResourceMeasure::athermality(&h, beta)?.measure(&psi)?;
        rep.check(Check::eq("dense_athermality", dense_a, s.athermality, 1e-8));
    }
    if n >= 1000 {
        let reference = QfiSums::compute(REFERENCE_TRUNCATION, beta).mean;
        rep.value("mean_energy_reference", reference);
        rep.check(Check::eq("mean_energy_converged", s.mean, reference, 1e-3));
    }
    let ladder: Vec<QfiSums> = LADDER.iter().map(|&k| QfiSums::compute(k, beta)).collect();
    for (k, q) in LADDER.iter().zip(&ladder) {
        rep.value(&format!("qfi_at_{k}"), q.qfi);
        rep.value(&format!("athermality_at_{k}"), q.athermality);
    }
    let min_step = ladder.windows(2).map(|w| w[1].qfi - w[0].qfi).fold(f64::INFINITY, f64::min);
    rep.value("qfi_min_step", min_step);
    rep.check(Check::eq("qfi_strictly_increasing", if min_step > 0.0 { 1.0 } else { 0.0 }, 1.0, 0.0));
    let a_spread = ladder.iter().map(|q| q.athermality).fold(f64::NEG_INFINITY, f64::max)
        - ladder.iter().map(|q| q.athermality).fold(f64::INFINITY, f64::min);
    rep.value("athermality_ladder_spread", a_spread);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_match_dense() {
        let r = qfi_divergence(20, 1.0).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
    }

    #[test]
    fn thousand_level_trend() {
        let r = qfi_divergence(1000, 1.0).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
        assert!((r.values["mean_energy"] - 1.3684).abs() < 1e-3);
        assert!(r.values["qfi_at_10000"] > r.values["qfi_at_1000"]);
    }

    #[test]
    fn single_level() {
        let s = QfiSums::compute(1, 1.0);
        assert_eq!(s.qfi, 0.0);
        assert!(qfi_divergence(1, 1.0).unwrap().all_passed());
    }
}
