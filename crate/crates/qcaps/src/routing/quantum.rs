//! Overlap-driven routing between quantum capsule layers.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{matrix_power, overlap_k, DensityMatrix};

pub const DEFAULT_ITERATIONS: usize = 3;

/// Overlaps at or below this are treated as zero when normalizing.
pub const ZERO_OVERLAP: f64 = 1e-14;

/// The M×J array of prediction states ρ_{j|i}.
#[derive(Clone, Debug)]
pub struct PredictionBundle {
    m: usize,
    j: usize,
    states: Vec<DensityMatrix>,
}

impl PredictionBundle {
    /// `states[i][j]`; every column must share a dimension.
    pub fn new(states: Vec<Vec<DensityMatrix>>) -> Result<Self> {
        let m = states.len();
        if m == 0 {
            return Err(Error::Argument(
                "bundle needs at least one input capsule".into(),
            ));
        }
        let j = states[0].len();
        if j == 0 || states.iter().any(|row| row.len() != j) {
            return Err(Error::Argument("ragged prediction bundle".into()));
        }
        for col in 0..j {
            let d = states[0][col].dim();
            if states.iter().any(|row| row[col].dim() != d) {
                return Err(Error::Argument(format!(
                    "column {col} mixes state dimensions"
                )));
            }
        }
        Ok(Self {
            m,
            j,
            states: states.into_iter().flatten().collect(),
        })
    }

    pub fn inputs(&self) -> usize {
        self.m
    }

    pub fn outputs(&self) -> usize {
        self.j
    }

    pub fn get(&self, i: usize, j: usize) -> &DensityMatrix {
        &self.states[i * self.j + j]
    }

    pub fn column(&self, j: usize) -> Vec<&DensityMatrix> {
        (0..self.m).map(|i| self.get(i, j)).collect()
    }
}

/// Routing coefficients and overlaps after the last iteration, both M×J.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutingState {
    m: usize,
    j: usize,
    q: Vec<f64>,
    overlaps: Vec<f64>,
    iteration: usize,
    max_delta_q: f64,
}

impl RoutingState {
    /// Assemble from per-column results (all columns share M).
    pub fn from_columns(columns: &[ColumnRouting], iterations: usize) -> Self {
        let j = columns.len();
        let m = columns.first().map_or(0, |c| c.q.len());
        let mut q = vec![0.0; m * j];
        let mut overlaps = vec![0.0; m * j];
        for (col, r) in columns.iter().enumerate() {
            for i in 0..m {
                q[i * j + col] = r.q[i];
                overlaps[i * j + col] = r.overlaps[i];
            }
        }
        let max_delta_q = columns.iter().map(|c| c.max_delta_q).fold(0.0, f64::max);
        Self {
            m,
            j,
            q,
            overlaps,
            iteration: iterations,
            max_delta_q,
        }
    }

    pub fn inputs(&self) -> usize {
        self.m
    }

    pub fn outputs(&self) -> usize {
        self.j
    }

    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.j + j]
    }

    pub fn q_column(&self, j: usize) -> Vec<f64> {
        (0..self.m).map(|i| self.q(i, j)).collect()
    }

    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.overlaps[i * self.j + j]
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// max |Δq| over all entries during the final iteration.
    pub fn max_delta_q(&self) -> f64 {
        self.max_delta_q
    }

    /// Largest deviation of a column sum from one.
    pub fn column_sum_error(&self) -> f64 {
        (0..self.j)
            .map(|j| (self.q_column(j).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// ω_i = (1+Ω_i)/Σ(1+Ω).
pub fn overlap_weights(column: &[&DensityMatrix], chi: &DensityMatrix, k: u32) -> Result<Vec<f64>> {
    let shifted = column
        .iter()
        .map(|rho| overlap_k(rho, chi, k).map(|o| 1.0 + o))
        .collect::<Result<Vec<_>>>()?;
    let z: f64 = shifted.iter().sum();
    Ok(shifted.into_iter().map(|w| w / z).collect())
}

/// q_i = Ω_i²/ΣΩ², uniform when every overlap is negligible.
pub fn routing_from_overlaps(overlaps: &[f64]) -> Vec<f64> {
    let m = overlaps.len();
    if overlaps.iter().all(|&o| o <= ZERO_OVERLAP) {
        return vec![1.0 / m as f64; m];
    }
    let sq: Vec<f64> = overlaps.iter().map(|o| o * o).collect();
    let z: f64 = sq.iter().sum();
    sq.into_iter().map(|s| s / z).collect()
}

pub fn update_routing(column: &[&DensityMatrix], chi: &DensityMatrix, k: u32) -> Result<Vec<f64>> {
    let overlaps = column
        .iter()
        .map(|rho| overlap_k(rho, chi, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(routing_from_overlaps(&overlaps))
}

/// χ = Σ_i q_i ρ_i.
pub fn mix_capsule(column: &[&DensityMatrix], q: &[f64]) -> Result<DensityMatrix> {
    DensityMatrix::mixture(column, q)
}

fn mix_matrices(column: &[&DensityMatrix], q: &[f64]) -> ComplexMatrix {
    let d = column[0].dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (rho, &w) in column.iter().zip(q) {
        acc.add_scaled(rho.matrix(), w);
    }
    acc
}

/// Result of routing one output column.
#[derive(Clone, Debug)]
pub struct ColumnRouting {
    pub chi: DensityMatrix,
    pub q: Vec<f64>,
    pub overlaps: Vec<f64>,
    pub max_delta_q: f64,
}

/// Route a single column; ρ_i^k is computed once and reused across iterations.
pub fn route_column(column: &[&DensityMatrix], k: u32, iterations: usize) -> Result<ColumnRouting> {
    if column.is_empty() {
        return Err(Error::Argument(
            "routing needs at least one input capsule".into(),
        ));
    }
    if iterations == 0 {
        return Err(Error::Argument(
            "routing needs at least one iteration".into(),
        ));
    }
    let m = column.len();
    let powers = column
        .iter()
        .map(|rho| matrix_power(rho, k))
        .collect::<Result<Vec<_>>>()?;
    let mut q = vec![1.0 / m as f64; m];
    let mut overlaps = vec![0.0; m];
    let mut max_delta_q = 0.0;
    for _ in 0..iterations {
        let chi = DensityMatrix::from_matrix_unchecked(mix_matrices(column, &q));
        let chi_k = matrix_power(&chi, k)?;
        for (o, rk) in overlaps.iter_mut().zip(&powers) {
            *o = rk.trace_product(&chi_k).re.clamp(0.0, 1.0);
        }
        let next = routing_from_overlaps(&overlaps);
        max_delta_q = q
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        q = next;
    }
    let chi = DensityMatrix::from_matrix_unchecked(mix_matrices(column, &q));
    Ok(ColumnRouting {
        chi,
        q,
        overlaps,
        max_delta_q,
    })
}

/// Route every column of the bundle; returns the output capsule states.
pub fn route_quantum(
    bundle: &PredictionBundle,
    k: u32,
    iterations: usize,
) -> Result<(Vec<DensityMatrix>, RoutingState)> {
    if k == 0 {
        return Err(Error::Argument("overlap order k must be positive".into()));
    }
    let columns = (0..bundle.outputs())
        .map(|col| route_column(&bundle.column(col), k, iterations))
        .collect::<Result<Vec<_>>>()?;
    let state = RoutingState::from_columns(&columns, iterations);
    let states = columns.into_iter().map(|c| c.chi).collect();
    Ok((states, state))
}
