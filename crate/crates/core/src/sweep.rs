//! Spatial and parameter sweeps: zero-velocity grids, Jacobi-constant
//! curves at the triangular point, equilibrium loci and resonance curves.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Model, State};
use crate::equilibria::{locate, triangular_position, Label, RefineOptions, TriangularMode};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::stability::critical_mass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Ordered map over indices, optionally on the rayon pool.
fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            // mirror-exact for symmetric bounds
            .map(|i| (a * (n - 1 - i) as f64 + b * i as f64) / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_min: -1.5,
            x_max: 1.5,
            y_min: -1.5,
            y_max: 1.5,
            nx: 601,
            ny: 601,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Precondition(
                "grid needs at least two nodes per axis".into(),
            ));
        }
        let ordered = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ordered(self.x_min, self.x_max) || !ordered(self.y_min, self.y_max) {
            return Err(Error::Precondition(
                "grid bounds must be finite and increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        linspace(self.y_min, self.y_max, self.ny)
    }
}

/// Jacobi constant at rest on a grid, stored row by row (`y` outer).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZvcGrid {
    pub spec: GridSpec,
    pub values: Vec<Option<f64>>,
}

impl ZvcGrid {
    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.spec.nx + ix]
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// `C = 2U` at zero velocity on every node; nodes on a primary are missing.
pub fn zvc_grid(model: &Model, spec: &GridSpec, exec: Execution) -> Result<ZvcGrid> {
    spec.validate()?;
    let xs = spec.xs();
    let ys = spec.ys();
    let values = map_indexed(spec.nx * spec.ny, exec, |k| {
        let (ix, iy) = (k % spec.nx, k / spec.nx);
        model
            .jacobi(&State::at_rest(xs[ix], ys[iy]))
            .ok()
            .and_then(finite)
    });
    Ok(ZvcGrid {
        spec: *spec,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub parameter: f64,
    pub values: Vec<Option<f64>>,
}

/// One family of sampled values along a strictly monotone parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub label: String,
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<CurveRow>,
    /// Quantities held fixed along the curve.
    pub metadata: BTreeMap<String, f64>,
}

impl CurveSet {
    /// Values of one column, in parameter order.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }
}

fn check_monotone(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Precondition(format!("{name} grid is empty")));
    }
    let up = grid.windows(2).all(|w| w[1] > w[0]);
    let down = grid.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) || grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::Precondition(format!(
            "{name} grid must be finite and strictly monotone"
        )));
    }
    Ok(())
}

fn metadata(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Triangular-point coordinates and `C4` along `q1` for each `A2`.
pub fn c4_curves(
    base: &SystemParams,
    a2_list: &[f64],
    q1_grid: &[f64],
    mode: TriangularMode,
    exec: Execution,
) -> Result<Vec<CurveSet>> {
    check_monotone("q1", q1_grid)?;
    let mut out = Vec::with_capacity(a2_list.len());
    for &a2 in a2_list {
        let mut params = Vec::with_capacity(q1_grid.len());
        for &q1 in q1_grid {
            let p = base.with_q1(q1).with_a2(a2);
            p.validate()?;
            params.push(p);
        }
        let rows = map_indexed(params.len(), exec, |i| {
            let values = c4_point(&params[i], mode).unwrap_or_else(|_| vec![None, None, None]);
            CurveRow {
                parameter: q1_grid[i],
                values,
            }
        });
        out.push(CurveSet {
            label: format!("A2={}", crate::report::format_float(a2)),
            parameter: "q1".into(),
            columns: vec!["x4".into(), "y4".into(), "C4".into()],
            rows,
            metadata: metadata(&[("mu", base.mu), ("a2", a2), ("c_d", base.c_d)]),
        });
    }
    Ok(out)
}

fn c4_point(p: &SystemParams, mode: TriangularMode) -> Result<Vec<Option<f64>>> {
    let model = Model::new(*p)?;
    let (x, y) = triangular_position(&model, true, mode)?;
    let c = model.jacobi(&State::at_rest(x, y))?;
    Ok(vec![finite(x), finite(y), finite(c)])
}

/// Refined position of each point along `q1`.
pub fn equilibrium_locus(
    base: &SystemParams,
    q1_grid: &[f64],
    opts: &RefineOptions,
    exec: Execution,
) -> Result<Vec<CurveSet>> {
    check_monotone("q1", q1_grid)?;
    for &q1 in q1_grid {
        base.with_q1(q1).validate()?;
    }
    let per_q1 = map_indexed(q1_grid.len(), exec, |i| {
        let model = Model::new(base.with_q1(q1_grid[i]));
        Label::ALL.map(
            |label| match model.as_ref().ok().map(|m| locate(m, label, opts)) {
                Some(Ok(p)) => vec![finite(p.x), finite(p.y), finite(p.residual)],
                _ => vec![None, None, None],
            },
        )
    });
    Ok(Label::ALL
        .iter()
        .enumerate()
        .map(|(li, label)| CurveSet {
            label: label.to_string(),
            parameter: "q1".into(),
            columns: vec!["x".into(), "y".into(), "residual".into()],
            rows: q1_grid
                .iter()
                .zip(&per_q1)
                .map(|(&q1, pts)| CurveRow {
                    parameter: q1,
                    values: pts[li].clone(),
                })
                .collect(),
            metadata: metadata(&[("mu", base.mu), ("a2", base.a2), ("c_d", base.c_d)]),
        })
        .collect())
}

/// Critical mass ratio along `q1` for every `(k, A2)` pair.
pub fn stability_region(
    q1_grid: &[f64],
    a2_list: &[f64],
    k_list: &[u32],
    exec: Execution,
) -> Result<Vec<CurveSet>> {
    check_monotone("q1", q1_grid)?;
    let mut out = Vec::new();
    for &k in k_list {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: 0.0,
                reason: "resonance order must be at least 1",
            });
        }
        for &a2 in a2_list {
            let rows = map_indexed(q1_grid.len(), exec, |i| CurveRow {
                parameter: q1_grid[i],
                values: vec![critical_mass(k, q1_grid[i], a2)
                    .ok()
                    .and_then(|c| finite(c.mu_k))],
            });
            out.push(CurveSet {
                label: format!("k={k} A2={}", crate::report::format_float(a2)),
                parameter: "q1".into(),
                columns: vec!["mu_k".into()],
                rows,
                metadata: metadata(&[("k", f64::from(k)), ("a2", a2)]),
            });
        }
    }
    Ok(out)
}
