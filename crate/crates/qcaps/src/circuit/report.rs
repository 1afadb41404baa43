use std::fmt;

use rand::Rng;

use super::assignment::verify_small_t_limit;
use super::qram::{tensor_power, QRamState};
use super::swap_test::swap_test_with_fault;
use crate::error::Result;
use crate::quantum::DensityMatrix;
use crate::random::{derived_rng, random_mixed};
use crate::routing::{mix_capsule, overlap_weights};

pub const OVERLAP_TOLERANCE: f64 = 1e-10;
pub const SMALL_T_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    SwapTest,
    Assignment,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::SwapTest => "swap-test",
            CheckKind::Assignment => "assignment",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub kind: CheckKind,
    pub instance: usize,
    pub m: usize,
    pub k: usize,
    pub t: Option<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl ReportRow {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Plain-text table of circuit-versus-formula checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(ReportRow::passed)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<11} {:>8} {:>3} {:>3} {:>10} {:>14}  status",
            "check", "instance", "M", "k", "t", "max_dev"
        )?;
        for r in &self.rows {
            let t = r.t.map_or_else(|| "-".to_string(), |t| format!("{t:.6}"));
            writeln!(
                f,
                "{:<11} {:>8} {:>3} {:>3} {:>10} {:>14.3e}  {}",
                r.kind.to_string(),
                r.instance,
                r.m,
                r.k,
                t,
                r.max_deviation,
                if r.passed() { "ok" } else { "FAIL" }
            )?;
        }
        write!(f, "{} checks, {} failed", self.rows.len(), self.failures())
    }
}

/// Shape and fault settings for [`run_verification_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub swap_instances: usize,
    pub assignment_instances: usize,
    /// Fixed number of input capsules; random in 2..=4 when `None`.
    pub m: Option<usize>,
    /// Fixed overlap order; random in 1..=3 when `None`.
    pub k: Option<usize>,
    pub t: f64,
    /// Phase error injected into the controlled shift (0 = exact circuit).
    pub phase_fault: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            swap_instances: 50,
            assignment_instances: 20,
            m: None,
            k: None,
            t: 0.01,
            phase_fault: 0.0,
        }
    }
}

/// One random overlap-circuit instance: single-qubit predictions, M in 2..=4, k in 1..=3.
///
/// The capsule state is the uniform mixture of the predictions. Returns the
/// larger of the ω and p0 deviations from the closed forms.
pub fn swap_test_instance(seed: u64, instance: usize) -> Result<ReportRow> {
    swap_test_instance_with(seed, instance, None, None, 0.0)
}

pub fn swap_test_instance_with(
    seed: u64,
    instance: usize,
    m: Option<usize>,
    k: Option<usize>,
    phase_fault: f64,
) -> Result<ReportRow> {
    let mut rng = derived_rng(seed, instance as u64);
    let m_draw = rng.gen_range(2..=4);
    let k_draw = rng.gen_range(1..=3);
    let (m, k) = (m.unwrap_or(m_draw), k.unwrap_or(k_draw));
    if m == 0 || k == 0 {
        return Err(crate::Error::Argument(
            "verification needs M >= 1 and k >= 1".into(),
        ));
    }
    let preds: Vec<DensityMatrix> = (0..m).map(|_| random_mixed(1, &mut rng)).collect();
    let refs: Vec<&DensityMatrix> = preds.iter().collect();
    let chi = mix_capsule(&refs, &vec![1.0 / m as f64; m])?;
    let sigma = QRamState::uniform(&preds, k)?;
    let out = swap_test_with_fault(&sigma, &tensor_power(&chi, k)?, phase_fault)?;

    let omega = overlap_weights(&refs, &chi, k as u32)?;
    let a: f64 = refs
        .iter()
        .map(|r| crate::quantum::overlap_k(r, &chi, k as u32).map(|o| 1.0 + o))
        .sum::<Result<f64>>()?;
    let mut dev = (out.p0 - a / (2.0 * m as f64)).abs();
    for (x, y) in out.omega.iter().zip(&omega) {
        dev = dev.max((x - y).abs());
    }
    Ok(ReportRow {
        kind: CheckKind::SwapTest,
        instance,
        m,
        k,
        t: None,
        max_deviation: dev,
        tolerance: OVERLAP_TOLERANCE,
    })
}

/// Random weight vector in (0, 1], checked against the small-t limit at `t`.
pub fn assignment_instance(seed: u64, instance: usize, t: f64) -> Result<ReportRow> {
    let mut rng = derived_rng(seed ^ 0x5a5a, instance as u64);
    let m = rng.gen_range(2..=4);
    let qtilde: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..=1.0)).collect();
    let report = verify_small_t_limit(&qtilde, &[t])?;
    Ok(ReportRow {
        kind: CheckKind::Assignment,
        instance,
        m,
        k: 1,
        t: Some(t),
        max_deviation: report.max_deviation(),
        tolerance: SMALL_T_TOLERANCE,
    })
}

/// The default verification run used by the command-line tool.
pub fn run_verification(
    seed: u64,
    swap_instances: usize,
    assignment_instances: usize,
) -> Result<VerificationReport> {
    run_verification_with(
        seed,
        &VerifyOptions {
            swap_instances,
            assignment_instances,
            ..VerifyOptions::default()
        },
    )
}

pub fn run_verification_with(seed: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut rows = Vec::new();
    for i in 0..opts.swap_instances {
        rows.push(swap_test_instance_with(
            seed,
            i,
            opts.m,
            opts.k,
            opts.phase_fault,
        )?);
    }
    for i in 0..opts.assignment_instances {
        rows.push(assignment_instance(seed, i, opts.t)?);
    }
    Ok(VerificationReport { rows })
}
