//! Sampled fields on rectangular (t, x) grids and their CSV form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values on a tensor grid, stored t-outer: `values[i * x.len() + j]` is
/// the value at `(t[i], x[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(t: Vec<f64>, x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != t.len() * x.len() {
            return Err(Error::InvalidParams(format!("{} values for a {}x{} grid", values.len(), t.len(), x.len())));
        }
        Ok(GridFunction { t, x, values })
    }

    /// Sample `f(t, x)` row by row.
    pub fn tabulate<F: Fn(f64, f64) -> Result<f64>>(t: &[f64], x: &[f64], f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(t.len() * x.len());
        for &ti in t {
            for &xj in x {
                values.push(f(ti, xj)?);
            }
        }
        Ok(GridFunction { t: t.to_vec(), x: x.to_vec(), values })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.x.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.x.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `t,x,value` rows, t-outer, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x,value\n");
        for (i, &t) in self.t.iter().enumerate() {
            for (j, &x) in self.x.iter().enumerate() {
                let _ = writeln!(s, "{},{},{}", fmt17(t), fmt17(x), fmt17(self.at(i, j)));
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut t: Vec<f64> = Vec::new();
        let mut x: Vec<f64> = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f = parse_row(line, 3, lineno)?;
            if t.last() != Some(&f[0]) {
                t.push(f[0]);
            }
            if t.len() == 1 {
                x.push(f[1]);
            }
            values.push(f[2]);
        }
        GridFunction::new(t, x, values)
    }
}

/// `x,value` rows for a function of x alone.
pub fn profile_to_csv(x: &[f64], values: &[f64]) -> String {
    let mut s = String::from("x,value\n");
    for (&xi, &v) in x.iter().zip(values) {
        let _ = writeln!(s, "{},{}", fmt17(xi), fmt17(v));
    }
    s
}

pub fn profile_from_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = Vec::new();
    let mut v = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f = parse_row(line, 2, lineno)?;
        x.push(f[0]);
        v.push(f[1]);
    }
    Ok((x, v))
}

fn parse_row(line: &str, width: usize, lineno: usize) -> Result<Vec<f64>> {
    let f: Vec<f64> = line
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParams(format!("line {}: {e}", lineno + 1)))?;
    if f.len() != width {
        return Err(Error::InvalidParams(format!("line {}: expected {width} columns", lineno + 1)));
    }
    Ok(f)
}

/// Scientific notation with 17 significant digits; parses back to the same f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let t = vec![0.0, 0.1, 1.0 / 3.0];
        let x = vec![-1.0, 0.2, std::f64::consts::PI / 4.0];
        let g = GridFunction::tabulate(&t, &x, |t, x| Ok((t * 7.0 + x).sin() / 3.0 + 1e-300)).unwrap();
        let back = GridFunction::from_csv(&g.to_csv()).unwrap();
        assert_eq!(g, back);
    }
}
