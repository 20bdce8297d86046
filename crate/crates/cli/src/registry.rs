//! Scenario ids, their accepted parameters and defaults.

use rtl_core::scenarios::{
    coherence_erasure, gibbs_preserving_diverging, hadamard_gate, qfi_divergence, rni_coherence, rni_energy, rni_magic,
    spin_x_measurement, way_qubit_swap_instance, ErasureParams, ScenarioReport,
};

use crate::CliError;

/// Optional scenario parameters as given on the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub beta: Option<f64>,
    pub hbar_omega: Option<f64>,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub truncation: Option<usize>,
}

impl Overrides {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags = [
            ("eps", self.eps.is_some()),
            ("beta", self.beta.is_some()),
            ("hbar-omega", self.hbar_omega.is_some()),
            ("e1", self.e1.is_some()),
            ("e2", self.e2.is_some()),
            ("truncation", self.truncation.is_some()),
        ];
        for (name, set) in flags {
            if set {
                out.push(name);
            }
        }
        out
    }
}

pub struct Entry {
    pub id: &'static str,
    pub summary: &'static str,
    pub accepts: &'static [&'static str],
}

pub const SCENARIOS: &[Entry] = &[
    Entry { id: "spin-x", summary: "spin-1/2 readout along x", accepts: &["hbar-omega", "eps"] },
    Entry { id: "hadamard", summary: "Hadamard gate on an energy qubit", accepts: &["eps"] },
    Entry { id: "gibbs-diverging", summary: "Gibbs-preserving channel with diverging energy cost", accepts: &["e1", "e2", "beta"] },
    Entry { id: "rni-energy", summary: "energy-non-increasing channel with diverging cost", accepts: &["e1", "e2"] },
    Entry { id: "coherence-erasure", summary: "erasing coherence between two levels", accepts: &["e1", "e2", "beta", "eps"] },
    Entry { id: "rni-coherence", summary: "coherence-non-increasing readout", accepts: &[] },
    Entry { id: "rni-magic", summary: "magic-non-increasing readout of the T state", accepts: &[] },
    Entry { id: "way", summary: "probe cost of an energy-conserving swap readout", accepts: &["eps"] },
    Entry { id: "qfi-divergence", summary: "Fisher information growing with truncation", accepts: &["truncation", "beta"] },
];

pub fn lookup(id: &str) -> Result<&'static Entry, CliError> {
    SCENARIOS.iter().find(|e| e.id == id).ok_or_else(|| {
        let known: Vec<&str> = SCENARIOS.iter().map(|e| e.id).collect();
        CliError::UnknownId(format!("unknown scenario {id:?}; known: {}", known.join(", ")))
    })
}

pub fn run(id: &str, o: &Overrides, seed: u64) -> Result<ScenarioReport, CliError> {
    let entry = lookup(id)?;
    if let Some(bad) = o.given().into_iter().find(|f| !entry.accepts.contains(f)) {
        return Err(CliError::Usage(format!("scenario {id} does not take --{bad}")));
    }
    let rep = match id {
        "spin-x" => spin_x_measurement(o.hbar_omega.unwrap_or(1.0), o.eps.unwrap_or(0.01))?,
        "hadamard" => hadamard_gate(o.eps.unwrap_or(0.01))?,
        "gibbs-diverging" => gibbs_preserving_diverging(o.e1.unwrap_or(1.0), o.e2.unwrap_or(2.0), o.beta.unwrap_or(1.0))?,
        "rni-energy" => rni_energy(o.e1.unwrap_or(1.0), o.e2.unwrap_or(2.0), seed)?,
        "coherence-erasure" => {
            let d = ErasureParams::default();
            let levels = vec![o.e1.unwrap_or(d.levels[0]), o.e2.unwrap_or(d.levels[1])];
            coherence_erasure(&ErasureParams {
                levels,
                beta: o.beta.unwrap_or(d.beta),
                epsilon: o.eps.unwrap_or(d.epsilon),
                ..d
            })?
        }
        "rni-coherence" => rni_coherence()?,
        "rni-magic" => rni_magic()?,
        "way" => way_qubit_swap_instance(o.eps.unwrap_or(0.1))?,
        "qfi-divergence" => qfi_divergence(o.truncation.unwrap_or(1000), o.beta.unwrap_or(1.0))?,
        _ => unreachable!("lookup accepted {id}"),
    };
    Ok(rep)
}
