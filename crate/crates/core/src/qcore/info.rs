//! Distances and entropies. Entropies are in nats unless converted with [`nats_to_bits`].

use super::linalg::{self, eigh, CMat};
use super::{State, Tolerances};

/// Uhlmann fidelity `|| sqrt(rho) sqrt(sigma) ||_1` (not squared).
pub fn fidelity(rho: &State, sigma: &State) -> f64 {
    fidelity_matrix(rho.matrix(), sigma.matrix())
}

/// Square root with eigenvalues below a few ulps of the largest treated as zero,
/// so that rounding noise in a rank-deficient input is not amplified.
fn clean_sqrt(a: &CMat) -> CMat {
    let e = eigh(a);
    let cutoff = 64.0 * f64::EPSILON * e.max().abs().max(1e-300);
    e.rebuild(|x| if x > cutoff { x.sqrt() } else { 0.0 })
}

pub(crate) fn fidelity_matrix(a: &CMat, b: &CMat) -> f64 {
    let prod = clean_sqrt(a) * clean_sqrt(b);
    linalg::singular_values(&prod).iter().sum::<f64>().clamp(0.0, 1.0)
}

/// `sqrt(1 - F^2)`.
pub fn purified_distance(rho: &State, sigma: &State) -> f64 {
    purified_distance_matrix(rho.matrix(), sigma.matrix())
}

pub(crate) fn purified_distance_matrix(a: &CMat, b: &CMat) -> f64 {
    let f = fidelity_matrix(a, b);
    (1.0 - f * f).max(0.0).sqrt()
}

/// `|| rho - sigma ||_1`, without the factor 1/2.
pub fn trace_distance(rho: &State, sigma: &State) -> f64 {
    linalg::trace_norm(&(rho.matrix() - sigma.matrix()))
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

pub fn vn_entropy(rho: &State) -> f64 {
    entropy_of_spectrum(&eigh(rho.matrix()).values)
}

pub(crate) fn vn_entropy_matrix(m: &CMat) -> f64 {
    entropy_of_spectrum(&eigh(m).values)
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    entropy_of_spectrum(p)
}

/// Umegaki relative entropy `D(rho || sigma)`; `+inf` when `supp rho` is not inside `supp sigma`.
pub fn rel_entropy(rho: &State, sigma: &State) -> f64 {
    rel_entropy_matrix(rho.matrix(), sigma.matrix(), Tolerances::default().supp)
}

pub(crate) fn rel_entropy_matrix(rho: &CMat, sigma: &CMat, tol_supp: f64) -> f64 {
    let es = eigh(sigma);
    let mut cross = 0.0;
    for (i, &lam) in es.values.iter().enumerate() {
        let v = es.vector(i);
        let weight = v.dotc(&(rho * &v)).re;
        if lam <= tol_supp {
            if weight > tol_supp {
                return f64::INFINITY;
            }
        } else {
            cross += weight * lam.ln();
        }
    }
    let neg_s = -vn_entropy_matrix(rho);
    (neg_s - cross).max(0.0)
}

/// `h(p) = -p ln p - (1-p) ln(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{re, CVec};
    use crate::qcore::CompositeSpace;

    fn q(v: [f64; 2]) -> State {
        State::pure_normalized(CompositeSpace::single(2), &CVec::from_vec(vec![re(v[0]), re(v[1])])).unwrap()
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap() {
        let a = q([1.0, 0.0]);
        let b = q([1.0, 1.0]);
        assert!((fidelity(&a, &b) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((purified_distance(&a, &b) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(fidelity(&a, &q([0.0, 1.0])) < 1e-12);
    }

    #[test]
    fn entropy_values() {
        let mixed = State::maximally_mixed(CompositeSpace::single(4));
        assert!((vn_entropy(&mixed) - 4f64.ln()).abs() < 1e-12);
        assert!(vn_entropy(&q([0.3, 0.7])).abs() < 1e-12);
        assert!((binary_entropy(0.5) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((nats_to_bits(2f64.ln()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_support_rule() {
        let zero = q([1.0, 0.0]);
        let one = q([0.0, 1.0]);
        assert_eq!(rel_entropy(&zero, &one), f64::INFINITY);
        let mixed = State::maximally_mixed(CompositeSpace::single(2));
        assert!((rel_entropy(&zero, &mixed) - 2f64.ln()).abs() < 1e-12);
        assert!(rel_entropy(&mixed, &mixed).abs() < 1e-12);
    }
}
