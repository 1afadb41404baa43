//! Dynamic routing between classical capsule vectors.

use crate::error::{Error, Result};

/// A layer of real capsule vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalCapsuleLayer {
    capsules: Vec<Vec<f64>>,
}

impl ClassicalCapsuleLayer {
    pub fn new(capsules: Vec<Vec<f64>>) -> Result<Self> {
        if capsules.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Argument("non-finite capsule entry".into()));
        }
        Ok(Self { capsules })
    }

    pub fn capsules(&self) -> &[Vec<f64>] {
        &self.capsules
    }

    pub fn len(&self) -> usize {
        self.capsules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.capsules.is_empty()
    }

    /// Vector lengths, the usual class score of a capsule.
    pub fn lengths(&self) -> Vec<f64> {
        self.capsules.iter().map(|v| norm(v)).collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// (‖s‖²/(1+‖s‖²))·s/‖s‖, with squash(0) = 0.
pub fn squash(s: &[f64]) -> Vec<f64> {
    let n2: f64 = s.iter().map(|x| x * x).sum();
    if n2 == 0.0 {
        return vec![0.0; s.len()];
    }
    let scale = n2 / (1.0 + n2) / n2.sqrt();
    s.iter().map(|x| x * scale).collect()
}

/// Softmax of one row of logits.
pub fn softmax_over_j(b: &[f64]) -> Vec<f64> {
    let max = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = b.iter().map(|x| (x - max).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

/// Logits and coupling coefficients after classical routing, both M×J.
///
/// Each row of `r` sums to one: input capsule i distributes itself over the
/// output capsules.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalRouting {
    pub b: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Route predictions `u[i][j]` (vectors of a common length) for `iterations` rounds.
pub fn route_classical(
    u: &[Vec<Vec<f64>>],
    iterations: usize,
) -> Result<(Vec<Vec<f64>>, ClassicalRouting)> {
    if iterations == 0 {
        return Err(Error::Argument(
            "routing needs at least one iteration".into(),
        ));
    }
    let m = u.len();
    if m == 0 || u[0].is_empty() {
        return Err(Error::Argument(
            "routing needs at least one prediction".into(),
        ));
    }
    let j_count = u[0].len();
    let dim = u[0][0].len();
    if u.iter()
        .any(|row| row.len() != j_count || row.iter().any(|v| v.len() != dim))
    {
        return Err(Error::Argument("ragged prediction vectors".into()));
    }

    let mut b = vec![vec![0.0; j_count]; m];
    let mut r = Vec::new();
    let mut v = Vec::new();
    for _ in 0..iterations {
        r = b.iter().map(|row| softmax_over_j(row)).collect::<Vec<_>>();
        v = (0..j_count)
            .map(|j| {
                let mut s = vec![0.0; dim];
                for i in 0..m {
                    for (acc, x) in s.iter_mut().zip(&u[i][j]) {
                        *acc += r[i][j] * x;
                    }
                }
                squash(&s)
            })
            .collect::<Vec<_>>();
        for i in 0..m {
            for j in 0..j_count {
                b[i][j] += u[i][j].iter().zip(&v[j]).map(|(a, c)| a * c).sum::<f64>();
            }
        }
    }
    Ok((v, ClassicalRouting { b, r, iterations }))
}
