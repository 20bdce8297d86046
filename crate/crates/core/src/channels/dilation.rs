use crate::qcore::linalg::{self, re, CMat, CVec};
use crate::qcore::{CompositeSpace, State, Tolerances};

use super::{Channel, ChannelError};

/// Dilation `rho -> Tr_{B'} [ V (rho (x) eta) V^dagger ]`.
///
/// `V` maps `A (x) B` onto `out_space`; the factors of `out_space` listed in
/// `keep` form the output system `A'`, the rest form `B'`.
#[derive(Clone, Debug)]
pub struct Implementation {
    input: CompositeSpace,
    ancilla: State,
    unitary: CMat,
    out_space: CompositeSpace,
    keep: Vec<usize>,
}

impl Implementation {
    pub fn new(
        input: CompositeSpace,
        ancilla: State,
        unitary: CMat,
        out_space: CompositeSpace,
        keep: Vec<usize>,
    ) -> Result<Self, ChannelError> {
        let joint = input.dim() * ancilla.dim();
        if unitary.nrows() != joint || unitary.ncols() != joint || out_space.dim() != joint {
            return Err(ChannelError::SpaceMismatch);
        }
        let defect = linalg::unitarity_defect(&unitary);
        if defect > Tolerances::default().cptp {
            return Err(ChannelError::NotUnitary(defect));
        }
        let mut k = keep;
        k.sort_unstable();
        k.dedup();
        if k.iter().any(|&i| i >= out_space.n_factors()) {
            return Err(ChannelError::Malformed("output partition refers to a missing factor".into()));
        }
        Ok(Implementation { input, ancilla, unitary, out_space, keep: k })
    }

    pub fn input(&self) -> &CompositeSpace {
        &self.input
    }

    pub fn ancilla(&self) -> &State {
        &self.ancilla
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn out_space(&self) -> &CompositeSpace {
        &self.out_space
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn traced(&self) -> Vec<usize> {
        (0..self.out_space.n_factors()).filter(|i| !self.keep.contains(i)).collect()
    }

    pub fn output_space(&self) -> CompositeSpace {
        self.out_space.subspace(&self.keep).expect("partition validated at construction")
    }

    pub fn discarded_space(&self) -> CompositeSpace {
        self.out_space.subspace(&self.traced()).expect("partition validated at construction")
    }

    /// `V (rho (x) eta) V^dagger` on the full output space.
    pub fn joint_output(&self, rho: &State) -> Result<State, ChannelError> {
        if rho.dim() != self.input.dim() {
            return Err(ChannelError::SpaceMismatch);
        }
        let joint = linalg::kron(rho.matrix(), self.ancilla.matrix());
        Ok(State::from_raw(self.out_space.clone(), &self.unitary * joint * self.unitary.adjoint()))
    }

    pub fn apply(&self, rho: &State) -> Result<State, ChannelError> {
        Ok(self.joint_output(rho)?.partial_trace(&self.keep)?)
    }

    /// Kraus operators `sqrt(mu_b) (1 (x) <e|) V (1 (x) |b>)`.
    pub fn channel(&self) -> Channel {
        let dims = &self.out_space.factor_dims;
        let traced = self.traced();
        let order: Vec<usize> = self.keep.iter().chain(traced.iter()).copied().collect();
        let vp = linalg::permutation_matrix(dims, &order) * &self.unitary;
        let d_keep: usize = self.keep.iter().map(|&i| dims[i]).product();
        let d_tr: usize = traced.iter().map(|&i| dims[i]).product();
        let (da, db) = (self.input.dim(), self.ancilla.dim());
        let eta = self.ancilla.eig();
        let mut kraus = Vec::new();
        for (bi, &mu) in eta.values.iter().enumerate() {
            if mu <= Tolerances::default().psd {
                continue;
            }
            let bvec = eta.vector(bi);
            for e in 0..d_tr {
                let k = CMat::from_fn(d_keep, da, |ap, a| {
                    let mut acc = re(0.0);
                    for beta in 0..db {
                        acc += vp[(ap * d_tr + e, a * db + beta)] * bvec[beta];
                    }
                    acc * re(mu.sqrt())
                });
                if linalg::max_abs(&k) > 0.0 {
                    kraus.push(k);
                }
            }
        }
        if kraus.is_empty() {
            kraus.push(linalg::zeros(d_keep, da));
        }
        Channel::from_raw(self.input.clone(), self.output_space(), kraus)
    }
}

/// Inverse of [`stinespring`]: the channel realised by an implementation.
pub fn channel_from_implementation(imp: &Implementation) -> Channel {
    imp.channel()
}

/// Unitary dilation with a pure ancilla.
///
/// The environment dimension is the Kraus rank, padded up until `V` is square;
/// the isometry columns are completed by Gram-Schmidt over standard basis vectors.
pub fn stinespring(ch: &Channel) -> Result<Implementation, ChannelError> {
    let da = ch.in_space().dim();
    let dout = ch.out_space().dim();
    let rank = ch.kraus().len();
    let mut env = rank;
    while (dout * env) % da != 0 {
        env += 1;
    }
    let db = dout * env / da;
    let joint = da * db;
    let mut isometry_cols: Vec<CVec> = Vec::with_capacity(da);
    for a in 0..da {
        let mut col = CVec::zeros(joint);
        for (k, op) in ch.kraus().iter().enumerate() {
            for o in 0..dout {
                col[o * env + k] = op[(o, a)];
            }
        }
        isometry_cols.push(col);
    }
    let basis = linalg::complete_basis(&isometry_cols, joint);
    if basis.len() != joint {
        return Err(ChannelError::Malformed("could not complete the isometry".into()));
    }
    let mut v = linalg::zeros(joint, joint);
    let mut next_free = da;
    for a in 0..da {
        for b in 0..db {
            let idx = if b == 0 {
                a
            } else {
                let i = next_free;
                next_free += 1;
                i
            };
            v.set_column(a * db + b, &basis[idx]);
        }
    }
    let ancilla_space = CompositeSpace::single(db);
    let ancilla = State::basis(ancilla_space, 0)?;
    let out_space = ch.out_space().tensor(&CompositeSpace::single(env));
    let keep: Vec<usize> = (0..ch.out_space().n_factors()).collect();
    Implementation::new(ch.in_space().clone(), ancilla, v, out_space, keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::max_abs;
    use crate::qcore::random;

    fn sample_channel(seed: u64, din: usize, dout: usize, rank: usize) -> Channel {
        let mut r = random::rng(seed);
        let u = random::haar_unitary(dout * rank, &mut r);
        let kraus = (0..rank)
            .map(|k| CMat::from_fn(dout, din, |o, i| u[(o * rank + k, i)]))
            .collect();
        Channel::new(CompositeSpace::single(din), CompositeSpace::single(dout), kraus).unwrap()
    }

    #[test]
    fn stinespring_round_trip() {
        for (seed, din, dout, rank) in [(1, 2, 2, 2), (2, 3, 2, 3), (3, 2, 3, 1), (4, 4, 2, 3)] {
            let ch = sample_channel(seed, din, dout, rank);
            let imp = stinespring(&ch).unwrap();
            assert!(linalg::unitarity_defect(imp.unitary()) < 1e-10);
            let back = channel_from_implementation(&imp);
            assert!(max_abs(&(back.to_choi() - ch.to_choi())) < 1e-10, "case {din}->{dout} rank {rank}");
        }
    }

    #[test]
    fn identity_needs_trivial_ancilla() {
        let imp = stinespring(&Channel::identity(CompositeSpace::single(3))).unwrap();
        assert_eq!(imp.ancilla().dim(), 1);
        assert!(max_abs(&(imp.unitary() - linalg::identity(3))) < 1e-15);
    }

    #[test]
    fn apply_matches_kraus_channel() {
        let mut r = random::rng(5);
        let sp_a = CompositeSpace::single(2);
        let eta = random::random_state(&CompositeSpace::single(3), &mut r);
        let v = random::haar_unitary(6, &mut r);
        let imp = Implementation::new(sp_a.clone(), eta, v, CompositeSpace::new(vec![3, 2]).unwrap(), vec![1]).unwrap();
        let rho = random::random_state(&sp_a, &mut r);
        let direct = imp.apply(&rho).unwrap();
        let via = imp.channel().apply(&rho).unwrap();
        assert!(max_abs(&(direct.matrix() - via.matrix())) < 1e-12);
        assert!(imp.channel().tp_defect() < 1e-12);
    }
}
