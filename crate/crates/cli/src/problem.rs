//! Problem files and the `solve` command.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fracinv::field::{profile_to_csv, GridFunction};
use fracinv::fracops::{ResidualGrid, ResidualReport, TimeGrid};
use fracinv::inverse1::{residual_problem1, solve_problem1, Problem1Spec, DEFAULT_TRUNCATION};
use fracinv::inverse2::{residual_problem2, solve_problem2, PhiScaling, Problem2Spec};

use crate::expr::Expr;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    SpaceDegenerate,
    TimeDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_points: usize,
    pub x_points: usize,
}

/// The JSON input of `solve`.
///
/// `data` holds `v` and `w` for the space-degenerate problem and `phi` and
/// `psi` for the time-degenerate one, as expressions in `x`. `truncation`
/// is the Legendre degree N or the sine mode count K; for the
/// time-degenerate problem it may be omitted to let the solver choose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub problem: ProblemKind,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub data: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_scaling: Option<PhiScaling>,
}

/// A parsed and validated problem file.
pub struct Problem {
    pub file: ProblemFile,
    pub first: Expr,
    pub second: Expr,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Problem::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Problem, CliError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
        let (a, b) = file.data_names();
        let extra: Vec<&String> = file.data.keys().filter(|k| *k != a && *k != b).collect();
        if !extra.is_empty() {
            return Err(CliError::Input(format!("data: unexpected entries {extra:?}; expected '{a}' and '{b}'")));
        }
        let get = |name: &str| -> Result<Expr, CliError> {
            let src = file.data.get(name).ok_or_else(|| CliError::Input(format!("data: missing '{name}'")))?;
            Expr::parse(src, "x").map_err(|e| CliError::Input(format!("data.{name}: {e}")))
        };
        let (first, second) = (get(a)?, get(b)?);
        let p = Problem { file, first, second };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), CliError> {
        let f = &self.file;
        if f.grid.t_points == 0 || f.grid.x_points == 0 {
            return Err(CliError::Input("grid: t_points and x_points must be positive".into()));
        }
        match f.problem {
            ProblemKind::SpaceDegenerate => {
                if f.beta.is_some() || f.phi_scaling.is_some() {
                    return Err(CliError::Input("beta and phi_scaling apply to the time_degenerate problem only".into()));
                }
                self.spec1()?;
            }
            ProblemKind::TimeDegenerate => {
                if f.beta.is_none() {
                    return Err(CliError::Input("beta is required for the time_degenerate problem".into()));
                }
                self.spec2()?;
            }
        }
        Ok(())
    }

    fn spec1(&self) -> Result<Problem1Spec, CliError> {
        let f = &self.file;
        Problem1Spec::new(f.alpha, f.t_final, f.truncation.unwrap_or(DEFAULT_TRUNCATION)).map_err(|e| CliError::Input(e.to_string()))
    }

    fn spec2(&self) -> Result<Problem2Spec, CliError> {
        let f = &self.file;
        Ok(Problem2Spec::new(f.alpha, f.beta.unwrap_or(f64::NAN), f.t_final, f.truncation)
            .map_err(|e| CliError::Input(e.to_string()))?
            .with_scaling(f.phi_scaling.unwrap_or_default()))
    }

    /// Times: 0, T/(n−1), …, T for the space-degenerate problem; T/n, 2T/n,
    /// …, T for the time-degenerate one, whose solution may be singular at 0.
    pub fn t_nodes(&self) -> Vec<f64> {
        let (n, t) = (self.file.grid.t_points, self.file.t_final);
        match self.file.problem {
            ProblemKind::SpaceDegenerate if n == 1 => vec![t],
            ProblemKind::SpaceDegenerate => (0..n).map(|i| if i + 1 == n { t } else { t * i as f64 / (n - 1) as f64 }).collect(),
            ProblemKind::TimeDegenerate => (1..=n).map(|i| if i == n { t } else { t * i as f64 / n as f64 }).collect(),
        }
    }

    pub fn x_domain(&self) -> (f64, f64) {
        match self.file.problem {
            ProblemKind::SpaceDegenerate => (-1.0, 1.0),
            ProblemKind::TimeDegenerate => (0.0, 1.0),
        }
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        let (a, b) = self.x_domain();
        let n = self.file.grid.x_points;
        if n == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..n).map(|j| if j + 1 == n { b } else { a + (b - a) * j as f64 / (n - 1) as f64 }).collect()
    }
}

impl ProblemFile {
    pub fn data_names(&self) -> (&'static str, &'static str) {
        match self.problem {
            ProblemKind::SpaceDegenerate => ("v", "w"),
            ProblemKind::TimeDegenerate => ("phi", "psi"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Meta {
    pub input: ProblemFile,
    pub effective_truncation: usize,
    pub max_est_error: f64,
    pub x_domain: [f64; 2],
    pub warnings: Vec<String>,
}

pub struct Solved {
    pub u: GridFunction,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub meta: Meta,
    pub residual: Option<ResidualReport>,
}

/// Solve, tabulate, and optionally compute the PDE residual on t ∈ [T/10, T]
/// with `residual_steps` time steps.
pub fn solve(p: &Problem, residual_steps: Option<usize>) -> Result<Solved, CliError> {
    let t = p.t_nodes();
    let x = p.x_nodes();
    let (a, b) = p.x_domain();
    let (first, second) = (|x: f64| p.first.eval(x), |x: f64| p.second.eval(x));
    let tf = p.file.t_final;
    let residual_grid = |steps: usize| -> Result<ResidualGrid, CliError> {
        Ok(ResidualGrid::uniform(TimeGrid::new(tf, steps)?, 0.1 * tf, a, b, x.len().max(2))?)
    };
    let (u, h, trunc, est, warnings, residual) = match p.file.problem {
        ProblemKind::SpaceDegenerate => {
            let sol = solve_problem1(&p.spec1()?, first, second)?;
            let (u, e) = sol.u_grid(&t, &x)?;
            let h = sol.h_profile(&x)?;
            let r = residual_steps.map(|s| residual_problem1(&sol, &residual_grid(s)?).map_err(CliError::from)).transpose()?;
            (u, h, sol.truncation(), e.max(sol.max_est_error), sol.warnings.clone(), r)
        }
        ProblemKind::TimeDegenerate => {
            let sol = solve_problem2(&p.spec2()?, first, second)?;
            let (u, e) = sol.u_grid(&t, &x)?;
            let h = sol.h_profile(&x)?;
            let r = residual_steps.map(|s| residual_problem2(&sol, &residual_grid(s)?).map_err(CliError::from)).transpose()?;
            (u, h, sol.modes(), e.max(sol.max_est_error), sol.warnings.clone(), r)
        }
    };
    let meta = Meta { input: p.file.clone(), effective_truncation: trunc, max_est_error: est, x_domain: [a, b], warnings };
    Ok(Solved { u, x, h, meta, residual })
}

pub fn write_outputs(s: &Solved, dir: &Path) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Output(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("U.csv"), s.u.to_csv()).map_err(io)?;
    fs::write(dir.join("h.csv"), profile_to_csv(&s.x, &s.h)).map_err(io)?;
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&s.meta).expect("meta serializes") + "\n").map_err(io)?;
    if let Some(r) = &s.residual {
        fs::write(dir.join("residual.json"), serde_json::to_string_pretty(r).expect("report serializes") + "\n").map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{"problem": "space_degenerate", "alpha": 0.6, "T": 1.0,
        "data": {"v": "0", "w": "1 + (3x^2 - 1)"}, "truncation": 8, "grid": {"t_points": 5, "x_points": 9}}"#;

    #[test]
    fn loads_and_builds_grids() {
        let p = Problem::from_json(FIG1).unwrap();
        assert_eq!(p.t_nodes(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(p.x_nodes().first(), Some(&-1.0));
        assert_eq!(p.x_nodes().last(), Some(&1.0));
    }

    #[test]
    fn rejects_mismatched_files() {
        assert!(Problem::from_json(&FIG1.replace("\"v\"", "\"phi\"")).is_err());
        assert!(Problem::from_json(&FIG1.replace("0.6", "1.6")).is_err());
        assert!(Problem::from_json(&FIG1.replace("\"T\": 1.0,", "\"T\": 1.0, \"beta\": 0.5,")).is_err());
        assert!(Problem::from_json(&FIG1.replace("\"truncation\"", "\"trunc\"")).is_err());
        assert!(Problem::from_json(&FIG1.replace("3x^2", "3y^2")).is_err());
    }

    #[test]
    fn time_degenerate_grid_skips_zero() {
        let text = r#"{"problem": "time_degenerate", "alpha": 0.5, "beta": 0.5, "T": 1.0,
            "data": {"phi": "0", "psi": "sin(pi x)"}, "grid": {"t_points": 10, "x_points": 3}}"#;
        let p = Problem::from_json(text).unwrap();
        let t = p.t_nodes();
        assert_eq!(t.len(), 10);
        assert!((t[0] - 0.1).abs() < 1e-15 && t[9] == 1.0);
        assert_eq!(p.x_nodes(), vec![0.0, 0.5, 1.0]);
    }
}
