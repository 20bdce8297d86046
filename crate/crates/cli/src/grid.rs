//! Error grids for sweeps.

use clap::ValueEnum;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsGrid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl EpsGrid {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(CliError::Usage(format!("grid needs from < to, got {} and {}", self.from, self.to)));
        }
        if self.points < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 points, got {}", self.points)));
        }
        if self.spacing == Spacing::Log && self.from <= 0.0 {
            return Err(CliError::Usage("log spacing needs from > 0; use --spacing linear to include 0".into()));
        }
        if self.from < 0.0 || self.to > 1.0 {
            return Err(CliError::Usage("epsilon must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Ascending points with both endpoints exact.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        self.validate()?;
        let last = (self.points - 1) as f64;
        let mut out: Vec<f64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.from + (self.to - self.from) * t,
                    Spacing::Log => (self.from.ln() + (self.to.ln() - self.from.ln()) * t).exp(),
                }
            })
            .collect();
        out[0] = self.from;
        out[self.points - 1] = self.to;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(from: f64, to: f64, points: usize, spacing: Spacing) -> EpsGrid {
        EpsGrid { from, to, points, spacing }
    }

    #[test]
    fn log_grid_is_ascending_with_exact_ends() {
        let g = grid(1e-3, 1e-1, 20, Spacing::Log).points().unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!((g[0], g[19]), (1e-3, 1e-1));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!((g[1] / g[0] - g[19] / g[18]).abs() < 1e-12);
    }

    #[test]
    fn two_points() {
        assert_eq!(grid(0.0, 0.5, 2, Spacing::Linear).points().unwrap(), vec![0.0, 0.5]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(grid(0.1, 0.1, 5, Spacing::Linear).points().is_err());
        assert!(grid(0.1, 0.2, 1, Spacing::Linear).points().is_err());
        assert!(grid(0.0, 0.2, 5, Spacing::Log).points().is_err());
        assert!(grid(0.5, 2.0, 5, Spacing::Linear).points().is_err());
    }
}
