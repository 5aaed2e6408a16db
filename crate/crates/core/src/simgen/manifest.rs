use crate::error::{BccdError, Result};

/// Line-oriented `key=value` experiment configuration. Unknown keys are
/// rejected so typos fail loudly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentManifest {
    pub nodes: usize,
    pub hidden: usize,
    pub rows: usize,
    pub trials: usize,
    pub theta: f64,
    pub seed: u64,
    pub density: f64,
    pub max_degree: usize,
    pub alpha: f64,
    pub k_max: usize,
}

impl Default for ExperimentManifest {
    fn default() -> Self {
        // the reference experiment shape: 6 observed binary nodes with a
        // couple of hidden confounders
        ExperimentManifest {
            nodes: 6,
            hidden: 1,
            rows: 1000,
            trials: 30,
            theta: 0.5,
            seed: 1,
            density: 0.3,
            max_degree: 3,
            alpha: 1.0,
            k_max: 5,
        }
    }
}

impl ExperimentManifest {
    pub fn parse(text: &str) -> Result<ExperimentManifest> {
        let mut m = ExperimentManifest::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(BccdError::Parse {
                line: idx + 1,
                msg: format!("expected key=value, got '{line}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| BccdError::Parse {
                line: idx + 1,
                msg: format!("bad {what} value '{value}'"),
            };
            match key {
                "nodes" => m.nodes = value.parse().map_err(|_| bad("nodes"))?,
                "hidden" => m.hidden = value.parse().map_err(|_| bad("hidden"))?,
                "rows" => m.rows = value.parse().map_err(|_| bad("rows"))?,
                "trials" => m.trials = value.parse().map_err(|_| bad("trials"))?,
                "theta" => m.theta = value.parse().map_err(|_| bad("theta"))?,
                "seed" => m.seed = value.parse().map_err(|_| bad("seed"))?,
                "density" => m.density = value.parse().map_err(|_| bad("density"))?,
                "max_degree" => m.max_degree = value.parse().map_err(|_| bad("max_degree"))?,
                "alpha" => m.alpha = value.parse().map_err(|_| bad("alpha"))?,
                "k_max" => m.k_max = value.parse().map_err(|_| bad("k_max"))?,
                other => {
                    return Err(BccdError::Parse {
                        line: idx + 1,
                        msg: format!("unknown key '{other}'"),
                    })
                }
            }
        }
        Ok(m)
    }

    pub fn render(&self) -> String {
        format!(
            "nodes={}\nhidden={}\nrows={}\ntrials={}\ntheta={}\nseed={}\ndensity={}\nmax_degree={}\nalpha={}\nk_max={}\n",
            self.nodes,
            self.hidden,
            self.rows,
            self.trials,
            self.theta,
            self.seed,
            self.density,
            self.max_degree,
            self.alpha,
            self.k_max
        )
    }

    /// Seed for one trial, derived so trials are independent and
    /// parallelizable: seed xor a splitmix-style hash of the trial index.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        let mut h = trial as u64;
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d049bb133111eb);
        h ^= h >> 31;
        self.seed ^ h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip_is_fixed_point() {
        let m = ExperimentManifest { nodes: 5, rows: 200, ..Default::default() };
        let text = m.render();
        let parsed = ExperimentManifest::parse(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(parsed.render(), text);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ExperimentManifest::parse("nodess=4\n").is_err());
        assert!(ExperimentManifest::parse("nodes four\n").is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        let m = ExperimentManifest::default();
        assert_ne!(m.trial_seed(0), m.trial_seed(1));
        assert_eq!(m.trial_seed(3), m.trial_seed(3));
    }
}
