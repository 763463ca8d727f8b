//! Parameter sweeps over the coefficients of `T`, emitted as CSV.
//!
//! Grid points are evaluated on a worker pool and written in row-major
//! order, so the output does not depend on the number of workers.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sigma::{existence_check, ExistenceVerdict, VerdictStatus};
use crate::solver::{self, SolverOptions};
use crate::space::{HomogeneousSpace, MetricCoefficients, TensorCoefficients};

pub const MAX_FREE_AXES: usize = 2;

/// One swept coordinate of `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepAxis {
    /// 0-based coordinate index.
    pub coordinate: usize,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepAxis {
    /// Parses `"i=min:max:steps"` with a 1-based coordinate `i`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Grid(format!("{text:?}: {why}"));
        let (coord, range) = text.split_once('=').ok_or_else(|| bad("expected i=min:max:steps"))?;
        let coord: usize = coord.trim().parse().map_err(|_| bad("coordinate is not an integer"))?;
        if coord == 0 {
            return Err(bad("coordinates are 1-based"));
        }
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, steps] = parts[..] else {
            return Err(bad("expected i=min:max:steps"));
        };
        let axis = SweepAxis {
            coordinate: coord - 1,
            min: min.trim().parse().map_err(|_| bad("min is not a number"))?,
            max: max.trim().parse().map_err(|_| bad("max is not a number"))?,
            steps: steps.trim().parse().map_err(|_| bad("steps is not an integer"))?,
        };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.min > 0.0) {
            return Err(Error::Grid(format!("axis {}: min must be > 0", self.coordinate + 1)));
        }
        if !(self.max.is_finite() && self.max >= self.min) {
            return Err(Error::Grid(format!("axis {}: max must be >= min", self.coordinate + 1)));
        }
        if self.steps == 0 {
            return Err(Error::Grid(format!("axis {}: steps must be >= 1", self.coordinate + 1)));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.min
        } else if k + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64
        }
    }
}

/// A grid of tensors: `base` with up to two coordinates swept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepGrid {
    pub base: Vec<f64>,
    pub axes: Vec<SweepAxis>,
    /// Rescale every point so that `sum d_i z_i = 1`.
    pub normalize: bool,
}

impl SweepGrid {
    pub fn new(base: Vec<f64>, axes: Vec<SweepAxis>, normalize: bool) -> Result<Self> {
        if axes.len() > MAX_FREE_AXES {
            return Err(Error::Grid(format!("at most {MAX_FREE_AXES} free axes")));
        }
        for axis in &axes {
            axis.validate()?;
            if axis.coordinate >= base.len() {
                return Err(Error::Grid(format!(
                    "axis {} outside the {} tensor coordinates",
                    axis.coordinate + 1,
                    base.len()
                )));
            }
        }
        if axes.len() == 2 && axes[0].coordinate == axes[1].coordinate {
            return Err(Error::Grid("the two axes sweep the same coordinate".into()));
        }
        TensorCoefficients::new(base.clone())?;
        Ok(SweepGrid {
            base,
            axes,
            normalize,
        })
    }

    /// Grid points in row-major order (the first axis varies slowest).
    pub fn points(&self, space: &HomogeneousSpace) -> Vec<Vec<f64>> {
        let mut points = vec![self.base.clone()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (0..axis.steps).map(move |k| {
                        let mut q = p.clone();
                        q[axis.coordinate] = axis.value(k);
                        q
                    })
                })
                .collect();
        }
        if self.normalize {
            for p in &mut points {
                let total: f64 = p.iter().enumerate().map(|(i, z)| space.dim(i) * z).sum();
                p.iter_mut().for_each(|z| *z /= total);
            }
        }
        points
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    /// Also solve for the metric at guaranteed points.
    pub solve: bool,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

/// Metric found at a guaranteed point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolvedMetric {
    pub c: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub z: Vec<f64>,
    /// The verdict, or the error message for this point.
    #[serde(serialize_with = "outcome")]
    pub verdict: std::result::Result<ExistenceVerdict, String>,
    #[serde(serialize_with = "optional_outcome")]
    pub solved: Option<std::result::Result<SolvedMetric, String>>,
}

/// Writes `Ok(v)` as `v` and `Err(e)` as `{"error": e}`.
fn outcome<T: Serialize, S: serde::Serializer>(
    value: &std::result::Result<T, String>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Failed<'a> {
        error: &'a str,
    }
    match value {
        Ok(v) => v.serialize(serializer),
        Err(e) => Failed { error: e }.serialize(serializer),
    }
}

fn optional_outcome<T: Serialize, S: serde::Serializer>(
    value: &Option<std::result::Result<T, String>>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => outcome(v, serializer),
        None => serializer.serialize_none(),
    }
}

pub fn evaluate_point(space: &HomogeneousSpace, z: Vec<f64>, options: &SweepOptions) -> SweepRow {
    let tensor = match TensorCoefficients::new(z.clone()) {
        Ok(t) => t,
        Err(e) => {
            return SweepRow {
                z,
                verdict: Err(e.to_string()),
                solved: None,
            };
        }
    };
    let verdict = existence_check(space, &tensor, &options.solver).map_err(|e| e.to_string());
    let solved = match &verdict {
        Ok(v) if options.solve && v.status == VerdictStatus::Guaranteed => {
            Some(solve_point(space, &tensor, &options.solver).map_err(|e| e.to_string()))
        }
        _ => None,
    };
    SweepRow { z, verdict, solved }
}

fn solve_point(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<SolvedMetric> {
    let report = solver::maximize_s_on_mt(space, z, options)?;
    if !report.converged {
        return Err(Error::Optimizer {
            set: space.full_set(),
            message: "no interior maximum of S on M_T".into(),
        });
    }
    let v = solver::verify_prescribed_ricci(space, &MetricCoefficients::new(report.argmax)?, z)?;
    Ok(SolvedMetric {
        c: v.c,
        residual: v.residual,
    })
}

/// Evaluates every grid point; rows come back in grid order.
pub fn run_sweep(space: &HomogeneousSpace, grid: &SweepGrid, options: &SweepOptions) -> Result<Vec<SweepRow>> {
    if grid.base.len() != space.num_summands() {
        return Err(Error::DimensionMismatch {
            expected: space.num_summands(),
            got: grid.base.len(),
        });
    }
    let points = grid.points(space);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Grid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .into_par_iter()
            .map(|z| evaluate_point(space, z, options))
            .collect()
    }))
}

/// Writes `rows` as CSV: `z1..zs, status, apical, sigma, margin` and, when
/// `with_solve`, `c, residual`.
pub fn write_csv<W: Write>(rows: &[SweepRow], s: usize, with_solve: bool, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=s).map(|i| format!("z{i}")).collect();
    header.extend(["status", "apical", "sigma", "margin"].map(String::from));
    if with_solve {
        header.extend(["c", "residual"].map(String::from));
    }
    writer.write_record(&header)?;
    for row in rows {
        writer.write_record(row_fields(row, with_solve))?;
    }
    writer.flush()?;
    Ok(())
}

fn row_fields(row: &SweepRow, with_solve: bool) -> Vec<String> {
    let mut fields: Vec<String> = row.z.iter().map(|&z| format_float(z)).collect();
    match &row.verdict {
        Ok(v) => {
            fields.push(v.status.as_str().into());
            fields.push(v.apical.map(|a| a.to_string()).unwrap_or_default());
            fields.push(v.sigma.as_ref().map(|s| format_float(s.value)).unwrap_or_default());
            fields.push(v.margin.map(format_float).unwrap_or_default());
        }
        Err(e) => {
            fields.push(format!("error: {e}"));
            fields.extend([String::new(), String::new(), String::new()]);
        }
    }
    if with_solve {
        match &row.solved {
            Some(Ok(m)) => {
                fields.push(format_float(m.c));
                fields.push(format_float(m.residual));
            }
            Some(Err(e)) => {
                fields.push(format!("error: {e}"));
                fields.push(String::new());
            }
            None => fields.extend([String::new(), String::new()]),
        }
    }
    fields
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Runs the sweep and writes CSV.
pub fn emit_sweep<W: Write>(
    space: &HomogeneousSpace,
    grid: &SweepGrid,
    options: &SweepOptions,
    out: W,
) -> Result<()> {
    let rows = run_sweep(space, grid, options)?;
    write_csv(&rows, space.num_summands(), options.solve, out)
}
