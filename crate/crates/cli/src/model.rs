//! `--model` values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use argmin_core::stable::StableLaw;
use argmin_core::walk_sim::WalkModel;

/// A walk or process family as named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Continuous walk with `P(S_n > 0) = θ` for all `n`.
    Theta(f64),
    Ssrw,
    /// Symmetric continuous increments (the `θ = 1/2` closed form).
    Symmetric,
    Gaussian,
    Stable {
        alpha: f64,
        beta: f64,
    },
    /// Sign probabilities read from a JSON file.
    Signs(PathBuf),
}

pub const SYNTAX: &str = "theta:X | ssrw | symmetric | gaussian | stable:ALPHA,BETA | signs:FILE";

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let number = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{v}` is not a number"))
        };
        match (head, arg) {
            ("ssrw", None) => Ok(Model::Ssrw),
            ("symmetric", None) => Ok(Model::Symmetric),
            ("gaussian", None) => Ok(Model::Gaussian),
            ("theta", Some(v)) => {
                let theta = number(v)?;
                if theta > 0.0 && theta < 1.0 {
                    Ok(Model::Theta(theta))
                } else {
                    Err(format!("theta must lie in (0, 1), got {theta}"))
                }
            }
            ("stable", Some(v)) => {
                let (a, b) = v
                    .split_once(',')
                    .ok_or_else(|| "stable needs ALPHA,BETA".to_string())?;
                let (alpha, beta) = (number(a)?, number(b)?);
                StableLaw::new(alpha, beta).map_err(|e| e.to_string())?;
                Ok(Model::Stable { alpha, beta })
            }
            ("signs", Some(path)) if !path.is_empty() => Ok(Model::Signs(path.into())),
            _ => Err(format!("unknown model `{s}`; expected {SYNTAX}")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Theta(t) => write!(f, "theta:{t}"),
            Model::Ssrw => f.write_str("ssrw"),
            Model::Symmetric => f.write_str("symmetric"),
            Model::Gaussian => f.write_str("gaussian"),
            Model::Stable { alpha, beta } => write!(f, "stable:{alpha},{beta}"),
            Model::Signs(p) => write!(f, "signs:{}", p.display()),
        }
    }
}

impl Model {
    /// Positivity parameter of the continuous-time limit, if the model has one.
    pub fn rho(&self) -> Option<f64> {
        match self {
            Model::Theta(t) => Some(*t),
            Model::Symmetric | Model::Gaussian => Some(0.5),
            Model::Stable { alpha, beta } => StableLaw::new(*alpha, *beta).ok().map(|l| l.rho()),
            Model::Ssrw | Model::Signs(_) => None,
        }
    }

    pub fn law(&self) -> Option<StableLaw<f64>> {
        match self {
            Model::Gaussian => StableLaw::new(2.0, 0.0).ok(),
            Model::Stable { alpha, beta } => StableLaw::new(*alpha, *beta).ok(),
            _ => None,
        }
    }

    /// Models with an increment sampler.
    pub fn walk(&self) -> Option<WalkModel> {
        match self {
            Model::Ssrw => Some(WalkModel::Ssrw),
            Model::Gaussian => Some(WalkModel::Gaussian),
            Model::Stable { .. } => self.law().map(WalkModel::Stable),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        assert_eq!("theta:0.25".parse(), Ok(Model::Theta(0.25)));
        assert_eq!("ssrw".parse(), Ok(Model::Ssrw));
        assert_eq!(
            "stable:1.5,1".parse(),
            Ok(Model::Stable {
                alpha: 1.5,
                beta: 1.0
            })
        );
        assert_eq!("signs:a.json".parse(), Ok(Model::Signs("a.json".into())));
        for bad in [
            "theta:1.5",
            "theta:0",
            "stable:1.5",
            "stable:0.5,1",
            "stable:1,0.5",
            "walk",
            "ssrw:1",
        ] {
            assert!(bad.parse::<Model>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["theta:0.3", "ssrw", "gaussian", "stable:1.5,-0.5"] {
            assert_eq!(s.parse::<Model>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn rho_of_models() {
        assert_eq!(Model::Gaussian.rho(), Some(0.5));
        let r = "stable:1.5,1".parse::<Model>().unwrap().rho().unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(Model::Ssrw.rho(), None);
    }
}
