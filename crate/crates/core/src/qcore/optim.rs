//! Small derivative-free local ascent used by the heuristic suprema.

#[derive(Clone, Copy, Debug)]
pub struct AscentOptions {
    pub max_iters: usize,
    pub fd_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions { max_iters: 120, fd_step: 1e-6, initial_step: 0.5, min_step: 1e-9, tol: 1e-12 }
    }
}

/// Gradient ascent with forward-difference gradients and backtracking.
///
/// Returns the best point and value found. Non-finite objective values are
/// treated as rejected steps.
pub fn ascend(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], opts: &AscentOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return (x, fx);
    }
    let mut step = opts.initial_step;
    let mut grad = vec![0.0; n];
    let mut probe = x.clone();
    for _ in 0..opts.max_iters {
        for i in 0..n {
            probe[i] = x[i] + opts.fd_step;
            let v = f(&probe);
            grad[i] = if v.is_finite() { (v - fx) / opts.fd_step } else { 0.0 };
            probe[i] = x[i];
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-12 {
            break;
        }
        let mut improved = false;
        while step >= opts.min_step {
            let cand: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi + step * gi / gnorm).collect();
            let fc = f(&cand);
            if fc.is_finite() && fc > fx {
                let gain = fc - fx;
                x = cand;
                fx = fc;
                probe.copy_from_slice(&x);
                step *= 1.5;
                improved = gain > opts.tol;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (x, fx)
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        }
    }
    if fa > fb {
        (a, fa)
    } else {
        (b, fb)
    }
}
