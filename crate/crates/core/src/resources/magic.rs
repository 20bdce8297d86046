//! Pure stabilizer states and the max-relative entropy to their convex hull.

use std::collections::HashSet;
use std::sync::OnceLock;

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};

use crate::qcore::linalg::{self, c64, re, CMat, CVec};

use super::ResourceError;

pub const MAX_QUBITS: usize = 3;
const CUT_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 40;

fn apply_hadamard(v: &CVec, n: usize, q: usize) -> CVec {
    let bit = 1 << (n - 1 - q);
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    let mut out = v.clone();
    for i in 0..v.len() {
        if i & bit == 0 {
            let (a, b) = (v[i], v[i | bit]);
            out[i] = (a + b) * s;
            out[i | bit] = (a - b) * s;
        }
    }
    out
}

fn apply_phase(v: &CVec, n: usize, q: usize) -> CVec {
    let bit = 1 << (n - 1 - q);
    let mut out = v.clone();
    for i in 0..v.len() {
        if i & bit != 0 {
            out[i] *= c64(0.0, 1.0);
        }
    }
    out
}

fn apply_cnot(v: &CVec, n: usize, c: usize, t: usize) -> CVec {
    let cb = 1 << (n - 1 - c);
    let tb = 1 << (n - 1 - t);
    let mut out = v.clone();
    for i in 0..v.len() {
        if i & cb != 0 {
            out[i] = v[i ^ tb];
        }
    }
    out
}

fn canonical_key(v: &CVec) -> Vec<(i64, i64)> {
    let lead = v.iter().find(|z| z.norm() > 1e-6).copied().unwrap_or(re(1.0));
    let ph = lead.conj() / re(lead.norm());
    v.iter()
        .map(|z| {
            let w = z * ph;
            ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
        })
        .collect()
}

/// All pure stabilizer states on `n` qubits (6, 60, 1080 for n = 1, 2, 3), by closure
/// of `|0...0>` under H, S and CNOT. Global phases are fixed by the first nonzero amplitude.
fn generate(n: usize) -> Vec<CVec> {
    let d = 1usize << n;
    let start = linalg::ket(d, 0);
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        if !seen.insert(canonical_key(&v)) {
            continue;
        }
        let lead = v.iter().find(|z| z.norm() > 1e-6).copied().unwrap_or(re(1.0));
        out.push(&v * (lead.conj() / re(lead.norm())));
        for q in 0..n {
            frontier.push(apply_hadamard(&v, n, q));
            frontier.push(apply_phase(&v, n, q));
        }
        for c in 0..n {
            for t in 0..n {
                if c != t {
                    frontier.push(apply_cnot(&v, n, c, t));
                }
            }
        }
    }
    out.sort_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
    out
}

/// Cached stabilizer states for `1 <= n <= 3` qubits.
pub fn stabilizer_states(n: usize) -> Result<&'static [CVec], ResourceError> {
    static CACHE: [OnceLock<Vec<CVec>>; MAX_QUBITS] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 || n > MAX_QUBITS {
        return Err(ResourceError::Unsupported(format!("stabilizer hull for {n} qubits")));
    }
    Ok(CACHE[n - 1].get_or_init(|| generate(n)).as_slice())
}

#[derive(Clone, Debug)]
pub struct MagicSolution {
    /// `log2` of the optimal hull weight.
    pub value_bits: f64,
    pub total_weight: f64,
    pub weights: Vec<f64>,
    pub min_eigenvalue: f64,
    pub rounds: usize,
}

fn cut(vars: &[Variable], states: &[CVec], rho: &CMat, v: &CVec) -> (LinearExpr, f64) {
    let mut expr = LinearExpr::empty();
    for (var, s) in vars.iter().zip(states) {
        let w = v.dotc(s).norm_sqr();
        if w > 1e-15 {
            expr.add(*var, w);
        }
    }
    (expr, v.dotc(&(rho * v)).re)
}

/// `min sum_i w_i` s.t. `sum_i w_i |s_i><s_i| >= rho`, `w >= 0`, by eigenvector cutting planes.
///
/// Each round adds the constraints `<v|sum w s - rho|v> >= 0` for the negative eigenvectors
/// of the current slack, until its smallest eigenvalue is at least `-1e-9`.
pub fn dmax_hull(rho: &CMat, states: &[CVec]) -> Result<MagicSolution, ResourceError> {
    let d = rho.nrows();
    if states.iter().any(|s| s.len() != d) {
        return Err(ResourceError::SpaceMismatch);
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Variable> = states.iter().map(|_| problem.add_var(1.0, (0.0, f64::INFINITY))).collect();
    let mut initial: Vec<CVec> = states.to_vec();
    let e = linalg::eigh(rho);
    initial.extend((0..d).map(|i| e.vector(i)));
    for v in &initial {
        let (expr, rhs) = cut(&vars, states, rho, v);
        problem.add_constraint(expr, ComparisonOp::Ge, rhs);
    }
    let mut sol = problem.solve().map_err(|e| ResourceError::Solver(e.to_string()))?;
    let mut rounds = 0;
    loop {
        let weights: Vec<f64> = vars.iter().map(|v| sol[*v].max(0.0)).collect();
        let se = linalg::eigh(&hull_slack(rho, states, &weights));
        let deficit = (-se.min()).max(0.0);
        if deficit <= CUT_TOL {
            let mut weights = weights;
            if deficit > 0.0 {
                // Computational basis states are stabilizer states and sum to the identity,
                // so spreading the deficit over them restores feasibility exactly.
                repair(&mut weights, states, deficit);
            }
            let total: f64 = weights.iter().sum();
            return Ok(MagicSolution {
                value_bits: total.max(1.0).log2(),
                total_weight: total,
                weights,
                min_eigenvalue: se.min(),
                rounds,
            });
        }
        if rounds >= MAX_ROUNDS {
            // Cutting planes tail off on curved faces. Both the repaired cut solution and the
            // barrier iterate are feasible, so the smaller total is the tighter upper bound.
            let mut repaired = weights;
            repair(&mut repaired, states, deficit);
            let total: f64 = repaired.iter().sum();
            let bar = dmax_barrier(rho, states);
            if bar.total_weight < total {
                return Ok(bar);
            }
            let min_eigenvalue = linalg::eigh(&hull_slack(rho, states, &repaired)).min();
            if min_eigenvalue < -CUT_TOL {
                return Err(ResourceError::NoConvergence(min_eigenvalue));
            }
            return Ok(MagicSolution { value_bits: total.max(1.0).log2(), total_weight: total, weights: repaired, min_eigenvalue, rounds });
        }
        for (i, &lam) in se.values.iter().enumerate() {
            if lam < -CUT_TOL * 0.1 {
                let (expr, rhs) = cut(&vars, states, rho, &se.vector(i));
                sol = sol.add_constraint(expr, ComparisonOp::Ge, rhs).map_err(|e| ResourceError::Solver(e.to_string()))?;
            }
        }
        rounds += 1;
    }
}

fn hull_slack(rho: &CMat, states: &[CVec], weights: &[f64]) -> CMat {
    let mut slack = -rho.clone();
    for (w, s) in weights.iter().zip(states) {
        if *w > 0.0 {
            slack += linalg::outer(s) * re(*w);
        }
    }
    slack
}

fn repair(weights: &mut [f64], states: &[CVec], deficit: f64) {
    for (w, s) in weights.iter_mut().zip(states) {
        let nonzero = s.iter().filter(|z| z.norm() > 1e-9).count();
        if nonzero == 1 {
            *w += deficit;
        }
    }
}

/// Log-barrier Newton path for the same program. Every iterate is strictly feasible, so the
/// returned weight is an upper bound, within `(N + d) / t` of the optimum at the last centred `t`.
/// The path stops early once the Newton system is too ill-conditioned to factor.
fn dmax_barrier(rho: &CMat, states: &[CVec]) -> MagicSolution {
    use nalgebra::{Cholesky, DMatrix, DVector};
    let d = rho.nrows();
    let n = states.len();
    let a = CMat::from_fn(d, n, |i, j| states[j][i]);
    let slack = |w: &DVector<f64>| -> CMat {
        let scaled = CMat::from_fn(d, n, |i, j| a[(i, j)] * re(w[j]));
        &scaled * a.adjoint() - rho
    };
    // Computational basis states sum to the identity, which dominates any state.
    let mut w = DVector::from_element(n, 1.0 / n as f64);
    for (j, s) in states.iter().enumerate() {
        if s.iter().filter(|z| z.norm() > 1e-9).count() == 1 {
            w[j] += 1.0;
        }
    }
    let barrier = |w: &DVector<f64>, t: f64| -> Option<f64> {
        if w.iter().any(|&x| x <= 0.0) {
            return None;
        }
        let e = linalg::eigh(&slack(w));
        if e.min() <= 0.0 {
            return None;
        }
        let logdet: f64 = e.values.iter().map(|x| x.ln()).sum();
        Some(t * w.sum() - logdet - w.iter().map(|x| x.ln()).sum::<f64>())
    };
    let gap_target = 1e-11;
    let mut t = 1.0;
    let mut rounds = 0;
    'path: loop {
        for _ in 0..200 {
            rounds += 1;
            let finv = linalg::herm_fn(&slack(&w), |x| 1.0 / x);
            let g = a.adjoint() * &finv * &a;
            let grad = DVector::from_fn(n, |i, _| t - g[(i, i)].re - 1.0 / w[i]);
            let hess = DMatrix::from_fn(n, n, |i, j| g[(i, j)].norm_sqr() + if i == j { 1.0 / (w[i] * w[i]) } else { 0.0 });
            let Some(chol) = Cholesky::new(hess) else { break 'path };
            let step = -chol.solve(&grad);
            let decrement = -grad.dot(&step);
            if !(decrement >= 1e-12) {
                break;
            }
            let Some(f0) = barrier(&w, t) else { break 'path };
            let mut alpha = 1.0;
            let next = loop {
                let cand = &w + &step * alpha;
                if let Some(f1) = barrier(&cand, t) {
                    if f1 <= f0 - 0.25 * alpha * decrement {
                        break Some(cand);
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    break None;
                }
            };
            match next {
                Some(cand) => w = cand,
                None => break,
            }
        }
        if (n + d) as f64 / t <= gap_target {
            break;
        }
        t *= 8.0;
    }
    let total = w.sum();
    MagicSolution {
        value_bits: total.max(1.0).log2(),
        total_weight: total,
        min_eigenvalue: linalg::eigh(&slack(&w)).min(),
        weights: w.iter().copied().collect(),
        rounds,
    }
}

/// Max-relative entropy (bits) to the stabilizer hull on `n` qubits.
pub fn dmax_bits(rho: &CMat, n: usize) -> Result<f64, ResourceError> {
    Ok(dmax_hull(rho, stabilizer_states(n)?)?.value_bits)
}

/// Whether `u` maps every Pauli string to a Pauli string up to phase.
pub fn is_clifford(u: &CMat, n: usize) -> bool {
    let d = 1usize << n;
    if u.nrows() != d || linalg::unitarity_defect(u) > 1e-9 {
        return false;
    }
    let paulis = pauli_strings(n);
    for p in paulis.iter().skip(1) {
        let img = u * p * u.adjoint();
        let mut hit = false;
        for q in &paulis {
            let ip = linalg::trace_prod(&q.adjoint(), &img) / re(d as f64);
            if (ip.norm() - 1.0).abs() < 1e-9 {
                hit = true;
                break;
            }
        }
        if !hit {
            return false;
        }
    }
    true
}

fn pauli_strings(n: usize) -> Vec<CMat> {
    let i2 = linalg::identity(2);
    let x = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
    let y = CMat::from_row_slice(2, 2, &[re(0.0), c64(0.0, -1.0), c64(0.0, 1.0), re(0.0)]);
    let z = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]);
    let single = [i2, x, y, z];
    let mut out = vec![linalg::identity(1)];
    for _ in 0..n {
        out = out.iter().flat_map(|a| single.iter().map(move |b| linalg::kron(a, b))).collect();
    }
    out
}

/// Whether `v` is (up to phase) one of the stabilizer states.
pub fn is_stabilizer_state(v: &CVec, n: usize) -> Result<bool, ResourceError> {
    Ok(stabilizer_states(n)?.iter().any(|s| (s.dotc(v).norm() - 1.0).abs() < 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_state() -> CVec {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CVec::from_vec(vec![re(s), c64(0.0, std::f64::consts::FRAC_PI_4).exp() * re(s)])
    }

    #[test]
    fn stabilizer_counts() {
        assert_eq!(stabilizer_states(1).unwrap().len(), 6);
        assert_eq!(stabilizer_states(2).unwrap().len(), 60);
        assert_eq!(stabilizer_states(3).unwrap().len(), 1080);
        assert!(stabilizer_states(4).is_err());
    }

    #[test]
    fn stabilizer_state_has_zero_magic() {
        for s in stabilizer_states(2).unwrap().iter().step_by(7) {
            assert!(dmax_bits(&linalg::outer(s), 2).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn t_state_value_matches_octahedron_geometry() {
        // Reference from an independent SDP solve over the octahedron: weight 4 - 2 sqrt2.
        let want = (4.0 - 2.0 * 2f64.sqrt()).log2();
        let got = dmax_bits(&linalg::outer(&t_state()), 1).unwrap();
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn barrier_agrees_with_cutting_planes() {
        let t = linalg::outer(&t_state());
        let b = dmax_barrier(&t, stabilizer_states(1).unwrap());
        assert!((b.total_weight - (4.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
        assert!(b.min_eigenvalue >= 0.0);
        let tt = linalg::kron(&t, &t);
        let lp = dmax_hull(&tt, stabilizer_states(2).unwrap()).unwrap();
        let bar = dmax_barrier(&tt, stabilizer_states(2).unwrap());
        assert!((lp.total_weight - bar.total_weight).abs() < 1e-7, "{} vs {}", lp.total_weight, bar.total_weight);
    }

    #[test]
    fn clifford_detection() {
        let h = CMat::from_row_slice(2, 2, &[re(1.0), re(1.0), re(1.0), re(-1.0)]) * re(std::f64::consts::FRAC_1_SQRT_2);
        assert!(is_clifford(&h, 1));
        let t = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), c64(0.0, std::f64::consts::FRAC_PI_4).exp()]);
        assert!(!is_clifford(&t, 1));
    }
}
