use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, FracError, Result};
use crate::report::fmt9;

/// Norm on the value space `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorNorm {
    #[default]
    Euclidean,
    Max,
    Sum,
}

impl VectorNorm {
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            VectorNorm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            VectorNorm::Max => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            VectorNorm::Sum => v.iter().map(|x| x.abs()).sum(),
        }
    }
}

impl std::str::FromStr for VectorNorm {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" | "l2" => Ok(VectorNorm::Euclidean),
            "max" | "linf" => Ok(VectorNorm::Max),
            "sum" | "l1" => Ok(VectorNorm::Sum),
            other => domain(format!("unknown vector norm `{other}` (euclidean | max | sum)")),
        }
    }
}

/// Samples of a function `[t0, t1] → R^d` on a strictly increasing node set.
///
/// Between nodes the function is read as the linear interpolant of its
/// values; norms and level sets use the linear interpolant of the node
/// magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    dim: usize,
    norm: VectorNorm,
}

impl GridFunction {
    /// Builds a grid function from nodes and row-major values (`nodes.len() * dim`).
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, dim: usize, norm: VectorNorm) -> Result<Self> {
        if dim == 0 {
            return domain("dimension must be at least 1");
        }
        if nodes.len() < 2 {
            return domain(format!("need at least 2 nodes, got {}", nodes.len()));
        }
        if values.len() != nodes.len() * dim {
            return domain(format!(
                "value count {} does not match {} nodes of dimension {dim}",
                values.len(),
                nodes.len()
            ));
        }
        if let Some(i) = nodes.iter().position(|t| !t.is_finite()) {
            return domain(format!("node {i} is not finite"));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return domain(format!(
                "nodes must be strictly increasing (node {} = {} after {})",
                i + 1,
                nodes[i + 1],
                nodes[i]
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("value at node {} is not finite", i / dim));
        }
        Ok(GridFunction { nodes, values, dim, norm })
    }

    /// Scalar-valued grid function.
    pub fn scalar(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(nodes, values, 1, VectorNorm::Euclidean)
    }

    /// Samples a scalar function at the given nodes.
    pub fn sample(nodes: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::scalar(nodes.to_vec(), values)
    }

    /// Samples `f(t) · x` for a fixed direction `x`.
    pub fn sample_along(nodes: &[f64], direction: &[f64], norm: VectorNorm, f: impl Fn(f64) -> f64) -> Result<Self> {
        let dim = direction.len();
        let mut values = Vec::with_capacity(nodes.len() * dim);
        for &t in nodes {
            let s = f(t);
            values.extend(direction.iter().map(|x| s * x));
        }
        Self::new(nodes.to_vec(), values, dim, norm)
    }

    /// Zero function on the given nodes.
    pub fn zeros(nodes: &[f64], dim: usize, norm: VectorNorm) -> Result<Self> {
        Self::new(nodes.to_vec(), vec![0.0; nodes.len() * dim], dim, norm)
    }

    pub fn t0(&self) -> f64 {
        self.nodes[0]
    }

    pub fn t1(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> VectorNorm {
        self.norm
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Values of component `c` at every node.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().skip(c).step_by(self.dim).copied().collect()
    }

    /// `||f(t_i)||_X` at every node.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.chunks_exact(self.dim).map(|v| self.norm.apply(v)).collect()
    }

    pub fn max_cell_width(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Same nodes, new values (row-major).
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.nodes.clone(), values, self.dim, self.norm)
    }

    pub fn with_norm(mut self, norm: VectorNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn scaled(&self, c: f64) -> Self {
        GridFunction { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// `a·self + b·other` on a shared node set.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        self.with_values(values)
    }

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.dim != other.dim || self.nodes != other.nodes {
            return domain("grid functions must share nodes and dimension");
        }
        Ok(())
    }

    /// Index of the cell `[t_i, t_{i+1}]` containing `t` (clamped to the grid).
    pub fn cell_of(&self, t: f64) -> usize {
        let n = self.nodes.len();
        match self.nodes.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Linear interpolant of the values at `t ∈ [t0, t1]`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let i = self.cell_of(t);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let w = ((t - a) / (b - a)).clamp(0.0, 1.0);
        let (va, vb) = (self.value(i), self.value(i + 1));
        for c in 0..self.dim {
            out[c] = va[c] + w * (vb[c] - va[c]);
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    /// Reads the `t,v1,...,vd` CSV format.
    pub fn read_csv<R: Read>(reader: R, norm: VectorNorm) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "t" {
            return Err(FracError::Format("header must be `t,v1,...,vd`".to_string()));
        }
        for (j, h) in headers.iter().enumerate().skip(1) {
            if h != format!("v{j}") {
                return Err(FracError::Format(format!("column {} must be named `v{j}`, found `{h}`", j + 1)));
            }
        }
        let dim = headers.len() - 1;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = row + 2;
            let parse = |j: usize| -> Result<f64> {
                rec.get(j)
                    .ok_or_else(|| FracError::Format(format!("line {line}: missing column {}", j + 1)))?
                    .parse::<f64>()
                    .map_err(|e| FracError::Format(format!("line {line}, column {}: {e}", j + 1)))
            };
            let t = parse(0)?;
            if let Some(&prev) = nodes.last() {
                if t <= prev {
                    return Err(FracError::Format(format!(
                        "line {line}: t = {t} is not greater than the previous t = {prev}"
                    )));
                }
            }
            nodes.push(t);
            for j in 1..=dim {
                values.push(parse(j)?);
            }
        }
        Self::new(nodes, values, dim, norm)
    }

    pub fn read_csv_path(path: &Path, norm: VectorNorm) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, norm)
    }

    /// Writes the `t,v1,...,vd` CSV format with 9 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.dim).map(|j| format!("v{j}")));
        wtr.write_record(&header)?;
        for (i, t) in self.nodes.iter().enumerate() {
            let mut row = vec![fmt9(*t)];
            row.extend(self.value(i).iter().map(|v| fmt9(*v)));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
