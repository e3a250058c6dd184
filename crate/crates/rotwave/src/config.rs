//! Flat TOML run configuration. Every key mirrors a command-line flag with
//! dashes replaced by underscores; flags given on the command line win.

use crate::error::{CliError, CliResult};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub domain: Option<String>,
    pub inner_radius: Option<f64>,
    pub cusp_s: Option<f64>,
    pub cusp_c1: Option<f64>,
    pub alpha: Option<f64>,
    pub m: Option<f64>,
    pub p: Option<String>,
    pub dim: Option<usize>,
    pub n: Option<usize>,
    #[serde(alias = "K")]
    pub k: Option<usize>,
    pub m_theta_factor: Option<usize>,
    pub tol_quotient: Option<f64>,
    pub tol_residual: Option<f64>,
    pub tol_break: Option<f64>,
    pub max_iter: Option<usize>,
    pub damping: Option<f64>,
    pub starts: Option<String>,
    pub seed: Option<u64>,
    pub json: Option<String>,
    pub csv: Option<String>,
    pub modes_csv: Option<String>,
    pub lambdas: Option<String>,
    pub alphas: Option<String>,
    pub ms: Option<String>,
    pub ks: Option<String>,
    pub nodes: Option<usize>,
    pub fit_all: Option<bool>,
    pub profile: Option<String>,
    pub jobs: Option<usize>,
    pub s: Option<f64>,
    #[serde(alias = "L")]
    pub l: Option<f64>,
    #[serde(alias = "M")]
    pub box_m: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub kappa: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("config file: {e}")))
    }
}

/// Spacing used by `a:b:count` ranges when no suffix is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Geometric,
}

/// Parses `v1,v2,...` or `a:b:count[:lin|:log]`.
pub fn parse_list(text: &str, default: Spacing) -> CliResult<Vec<f64>> {
    let bad = || CliError::config(format!("malformed list '{text}': expected v1,v2,... or a:b:count[:lin|:log]"));
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let a: f64 = parts[0].parse().map_err(|_| bad())?;
        let b: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        let spacing = match parts.get(3) {
            None => default,
            Some(&"lin") => Spacing::Linear,
            Some(&"log") => Spacing::Geometric,
            Some(_) => return Err(bad()),
        };
        if count < 2 || !a.is_finite() || !b.is_finite() || a == b {
            return Err(bad());
        }
        let t = |i: usize| i as f64 / (count - 1) as f64;
        Ok(match spacing {
            Spacing::Linear => (0..count).map(|i| a + (b - a) * t(i)).collect(),
            Spacing::Geometric => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(CliError::config(format!("geometric range '{text}' needs positive endpoints")));
                }
                (0..count).map(|i| a * (b / a).powf(t(i))).collect()
            }
        })
    } else {
        let values = text
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<CliResult<Vec<_>>>()?;
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(bad());
        }
        Ok(values)
    }
}

pub fn parse_usize_list(text: &str) -> CliResult<Vec<usize>> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::config(format!("malformed integer list '{text}'")))?;
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        let g = parse_list("0.4:0.1:3", Spacing::Geometric).unwrap();
        assert!((g[1] - 0.2).abs() < 1e-15);
        let l = parse_list("0:1:11", Spacing::Linear).unwrap();
        assert_eq!(l.len(), 11);
        assert!((l[3] - 0.3).abs() < 1e-15);
        assert_eq!(parse_list("1, 10,100", Spacing::Linear).unwrap(), vec![1.0, 10.0, 100.0]);
        assert!((parse_list("1:100:3:log", Spacing::Linear).unwrap()[1] - 10.0).abs() < 1e-12);
        for bad in ["0.4:0.1", "0.4:x:5", "0.4:0.1:1", "0:1:3:log", "a,b", "", "1:2:3:cubic"] {
            assert!(parse_list(bad, Spacing::Geometric).is_err(), "{bad}");
        }
        assert_eq!(parse_usize_list("4,8,16").unwrap(), vec![4, 8, 16]);
        assert!(parse_usize_list("4,-8").is_err());
    }

    #[test]
    fn file_keys() {
        let c = FileConfig::parse("alpha = 0.5\np = \"4\"\nK = 16\nlambdas = \"0.4:0.1:5\"\n").unwrap();
        assert_eq!(c.alpha, Some(0.5));
        assert_eq!(c.k, Some(16));
        assert!(FileConfig::parse("bogus = 1").is_err());
    }
}
