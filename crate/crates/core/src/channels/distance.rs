use crate::qcore::info::purified_distance_matrix;
use crate::qcore::linalg::{self, c64, re, CMat, CVec};
use crate::qcore::optim::{ascend, AscentOptions};
use crate::qcore::{random, CompositeSpace, State};

use super::{Channel, ChannelError};

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    pub restarts: usize,
    pub seed: u64,
    pub ascent: AscentOptions,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { restarts: 32, seed: 0, ascent: AscentOptions::default() }
    }
}

/// Result of the multi-start search; `value` is a lower bound on the true maximum.
#[derive(Clone, Debug)]
pub struct ChannelDistance {
    pub value: f64,
    pub certificate_state: State,
    pub n_restarts: usize,
    pub lower_bound: bool,
}

fn vec_from_params(x: &[f64]) -> CVec {
    let n = x.len() / 2;
    let v = CVec::from_fn(n, |i, _| c64(x[2 * i], x[2 * i + 1]));
    let nrm = v.norm();
    if nrm == 0.0 {
        v
    } else {
        v / re(nrm)
    }
}

fn params_from_vec(v: &CVec) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// `max_psi D_F((id (x) L1)(psi), (id (x) L2)(psi))` over pure states on `R (x) A`, `dim R = dim A`.
pub fn channel_purified_distance(a: &Channel, b: &Channel, opts: &DistanceOptions) -> Result<ChannelDistance, ChannelError> {
    if a.in_space().dim() != b.in_space().dim() || a.out_space().dim() != b.out_space().dim() {
        return Err(ChannelError::SpaceMismatch);
    }
    let d = a.in_space().dim();
    let reference = CompositeSpace::single(d);
    let ea = a.tensor_with_identity(&reference);
    let eb = b.tensor_with_identity(&reference);
    let objective = |x: &[f64]| {
        let psi = vec_from_params(x);
        let rho = linalg::outer(&psi);
        purified_distance_matrix(&ea.apply_matrix(&rho), &eb.apply_matrix(&rho))
    };
    let mut rng = random::rng(opts.seed);
    let mut starts: Vec<CVec> = Vec::with_capacity(opts.restarts + 1);
    let mut max_ent = CVec::zeros(d * d);
    for i in 0..d {
        max_ent[i * d + i] = re(1.0 / (d as f64).sqrt());
    }
    starts.push(max_ent);
    for _ in 0..opts.restarts {
        starts.push(random::random_unit_vector(d * d, &mut rng));
    }
    let mut best: Option<(CVec, f64)> = None;
    for s in &starts {
        let (x, v) = ascend(&objective, &params_from_vec(s), &opts.ascent);
        if best.as_ref().map_or(true, |(_, bv)| v > *bv) {
            best = Some((vec_from_params(&x), v));
        }
    }
    let (psi, value) = best.expect("at least one start");
    let space = reference.tensor(a.in_space());
    Ok(ChannelDistance {
        value,
        certificate_state: State::pure_normalized(space, &psi)?,
        n_restarts: starts.len(),
        lower_bound: true,
    })
}

/// Purified distance of the outputs `(id (x) L1)(psi)` and `(id (x) L2)(psi)` for a given input.
pub fn output_distance(a: &Channel, b: &Channel, psi: &State) -> f64 {
    let d = a.in_space().dim();
    let reference = CompositeSpace::single(psi.dim() / d);
    let ea = a.tensor_with_identity(&reference);
    let eb = b.tensor_with_identity(&reference);
    let m: &CMat = psi.matrix();
    purified_distance_matrix(&ea.apply_matrix(m), &eb.apply_matrix(m))
}
