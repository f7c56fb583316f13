//! Resilience metrics over a performance trace.
//!
//! With baseline `P̄`, event onset `t2` and recovery level `D = φ P̄`:
//!
//! * maximum degradation `M = max_{t >= t2} (P̄ - P(t))`, floored at zero;
//! * recovery step `t3`, the first `t >= t2` with `P(t) >= D`;
//! * total loss `sum_{t = t2}^{t3} max(0, P̄ - P(t))` with unit time steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::StepTrace;

pub const DEFAULT_RECOVERY_FRACTION: f64 = 0.9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("event onset {onset} outside a trace of {len} steps")]
    OnsetOutOfRange { onset: usize, len: usize },

    #[error("pre-event baseline needs at least one step before onset {0}")]
    EmptyPreEventWindow(usize),

    #[error("recovery fraction must lie in (0, 1], got {0}")]
    InvalidRecoveryFraction(f64),

    #[error("baseline must be finite, got {0}")]
    InvalidBaseline(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "policy", content = "value")]
pub enum BaselinePolicy {
    /// Mean performance over the steps before onset.
    #[default]
    PreEvent,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceReport {
    pub baseline: f64,
    pub onset: usize,
    pub recovery_fraction: f64,
    pub max_degradation: f64,
    pub recovery_level: f64,
    /// First step at or after onset reaching the recovery level, or the
    /// last step when `recovered` is false.
    pub recovery_step: usize,
    pub recovered: bool,
    pub total_loss: f64,
}

pub fn compute_resilience_metrics(
    performance: &[f64],
    baseline_policy: BaselinePolicy,
    onset: usize,
    recovery_fraction: f64,
) -> Result<ResilienceReport, MetricsError> {
    if onset >= performance.len() {
        return Err(MetricsError::OnsetOutOfRange {
            onset,
            len: performance.len(),
        });
    }
    if !(recovery_fraction > 0.0 && recovery_fraction <= 1.0) {
        return Err(MetricsError::InvalidRecoveryFraction(recovery_fraction));
    }
    let baseline = match baseline_policy {
        BaselinePolicy::PreEvent => {
            if onset == 0 {
                return Err(MetricsError::EmptyPreEventWindow(onset));
            }
            performance[..onset].iter().sum::<f64>() / onset as f64
        }
        BaselinePolicy::Fixed(v) => v,
    };
    if !baseline.is_finite() {
        return Err(MetricsError::InvalidBaseline(baseline));
    }
    let recovery_level = recovery_fraction * baseline;
    let after = &performance[onset..];
    let max_degradation = after.iter().map(|p| baseline - p).fold(0.0, f64::max);
    let (recovery_step, recovered) = match after.iter().position(|&p| p >= recovery_level) {
        Some(k) => (onset + k, true),
        None => (performance.len() - 1, false),
    };
    let total_loss = performance[onset..=recovery_step]
        .iter()
        .map(|p| (baseline - p).max(0.0))
        .sum();
    Ok(ResilienceReport {
        baseline,
        onset,
        recovery_fraction,
        max_degradation,
        recovery_level,
        recovery_step,
        recovered,
        total_loss,
    })
}

/// Metrics on the realized (post-attack) connectivity of a trace.
pub fn trace_resilience(
    trace: &[StepTrace],
    baseline_policy: BaselinePolicy,
    onset: usize,
    recovery_fraction: f64,
) -> Result<ResilienceReport, MetricsError> {
    let perf: Vec<f64> = trace.iter().map(|s| s.lambda2_realized).collect();
    compute_resilience_metrics(&perf, baseline_policy, onset, recovery_fraction)
}
