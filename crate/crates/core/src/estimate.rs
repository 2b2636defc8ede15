//! Measurement simulation and expectation estimation.
//!
//! Outcome i of an informationally complete measurement occurs with
//! probability w_i Tr[rho Pi_i]; averaging the data-processing values
//! f_i(O) = Tr[Theta_i^dag O] over sampled outcomes estimates Tr[rho O].
//! The weight sits in the sampling probability, so the estimator itself
//! is a plain empirical mean.

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{data_processing, OperatorFrame, Povm};
use crate::matrix::{hs_inner, C64, OperatorMatrix};
use crate::random::{derive_seed, rng_from_seed};

/// Outcome tallies of a simulated measurement run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub povm_id: String,
    pub outcome_counts: Vec<u64>,
    pub shots: u64,
    pub seed: u64,
}

impl MeasurementRecord {
    /// Counts must tally to the shot total.
    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.outcome_counts.iter().sum();
        if total != self.shots {
            return Err(Error::InvalidParameter(format!(
                "counts sum to {total}, expected {} shots",
                self.shots
            )));
        }
        Ok(())
    }
}

/// Estimate of one expectation value with its statistical error.
#[derive(Debug, Clone)]
pub struct EstimationReport {
    pub operator_id: String,
    pub estimate: C64,
    pub std_error: f64,
    pub exact: Option<C64>,
    pub shots: u64,
    pub seed: u64,
}

/// Outcome distribution p_i = w_i Tr[rho Pi_i].
///
/// Tiny negative traces from rounding are clamped to zero; validity of
/// the measurement guarantees the distribution sums to one.
pub fn outcome_probabilities(rho: &OperatorMatrix, povm: &Povm) -> Result<Vec<f64>> {
    rho.check_density(1e-10)?;
    if rho.dim() != povm.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.system_dim(),
            got: rho.dim(),
        });
    }
    let mut probs = Vec::with_capacity(povm.len());
    for (w, e) in povm.frame().weights().iter().zip(povm.frame().elements()) {
        let p = w * hs_inner(e, rho)?.re;
        if p < -1e-12 {
            return Err(Error::NotPsd(p));
        }
        probs.push(p.max(0.0));
    }
    Ok(probs)
}

fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let mut total = 0.0;
    for &p in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "probabilities must be finite and nonnegative, got {p}"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Multinomial sample of `shots` outcomes, reproducible from the seed.
/// Zero shots yields an all-zero record.
pub fn sample_outcomes(
    probs: &[f64],
    shots: u64,
    seed: u64,
    povm_id: &str,
) -> Result<MeasurementRecord> {
    check_distribution(probs)?;
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let top = *cumulative.last().expect("nonempty");
    let mut counts = vec![0u64; probs.len()];
    let mut rng = rng_from_seed(seed);
    for _ in 0..shots {
        let x: f64 = rng.random::<f64>() * top;
        let idx = cumulative
            .iter()
            .position(|&c| x < c)
            .unwrap_or(probs.len() - 1);
        counts[idx] += 1;
    }
    Ok(MeasurementRecord {
        povm_id: povm_id.to_string(),
        outcome_counts: counts,
        shots,
        seed,
    })
}

/// Empirical mean of the data-processing values over a record:
/// estimate = sum_i (counts_i / shots) f_i(O).
///
/// The standard error is the plug-in standard deviation of f over the
/// empirical distribution divided by sqrt(shots); below 1000 shots the
/// variance gets the small-sample correction. Passing the true state
/// fills the exact value Tr[rho O] for reporting.
pub fn estimate_expectation(
    record: &MeasurementRecord,
    dual: &OperatorFrame,
    observable: &OperatorMatrix,
    rho: Option<&OperatorMatrix>,
    operator_id: &str,
) -> Result<EstimationReport> {
    if record.shots == 0 {
        return Err(Error::ZeroShots);
    }
    record.validate()?;
    if record.outcome_counts.len() != dual.len() {
        return Err(Error::LengthMismatch {
            expected: dual.len(),
            got: record.outcome_counts.len(),
        });
    }
    let f = data_processing(dual, observable)?;
    let shots = record.shots as f64;
    let mut mean = C64::new(0.0, 0.0);
    for (count, fi) in record.outcome_counts.iter().zip(&f) {
        mean += fi * C64::new(*count as f64 / shots, 0.0);
    }
    let mut var = 0.0;
    for (count, fi) in record.outcome_counts.iter().zip(&f) {
        var += (*count as f64 / shots) * (fi - mean).norm_sqr();
    }
    if record.shots < 1000 && record.shots > 1 {
        var *= shots / (shots - 1.0);
    }
    let exact = match rho {
        Some(r) => Some(hs_inner(&r.hermitize(), observable)?),
        None => None,
    };
    Ok(EstimationReport {
        operator_id: operator_id.to_string(),
        estimate: mean,
        std_error: (var / shots).sqrt(),
        exact,
        shots: record.shots,
        seed: record.seed,
    })
}

/// Infinite-statistics contraction sum_i p_i f_i(O); equals Tr[rho O]
/// whenever the dual reconstructs.
pub fn contract_probabilities(
    probs: &[f64],
    dual: &OperatorFrame,
    observable: &OperatorMatrix,
) -> Result<C64> {
    if probs.len() != dual.len() {
        return Err(Error::LengthMismatch {
            expected: dual.len(),
            got: probs.len(),
        });
    }
    let f = data_processing(dual, observable)?;
    Ok(probs
        .iter()
        .zip(&f)
        .map(|(p, fi)| fi * C64::new(*p, 0.0))
        .sum())
}

/// Root-mean-square estimation error per shot count, with the fitted
/// log-log slope when every grid point has nonzero error.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub shots: Vec<u64>,
    pub rms_error: Vec<f64>,
    pub slope: Option<f64>,
}

/// Repeats the sample-estimate cycle over a shot grid and fits the error
/// scaling. Sub-seeds are derived per (grid index, repeat), so the study
/// is reproducible and repeats are independent.
pub fn convergence_study(
    rho: &OperatorMatrix,
    povm: &Povm,
    dual: &OperatorFrame,
    observable: &OperatorMatrix,
    shots_grid: &[u64],
    repeats: u64,
    seed: u64,
) -> Result<ConvergenceTable> {
    if shots_grid.is_empty() || repeats == 0 {
        return Err(Error::InvalidParameter(
            "convergence study needs a nonempty grid and at least one repeat".into(),
        ));
    }
    if shots_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "shot grid must be strictly ascending".into(),
        ));
    }
    if shots_grid[0] == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = outcome_probabilities(rho, povm)?;
    let exact = contract_probabilities(&probs, dual, observable)?;
    let mut rms = Vec::with_capacity(shots_grid.len());
    for (gi, &shots) in shots_grid.iter().enumerate() {
        let mut sum_sq = 0.0;
        for r in 0..repeats {
            let sub = derive_seed(seed, gi as u64, r);
            let record = sample_outcomes(&probs, shots, sub, "convergence")?;
            let report = estimate_expectation(&record, dual, observable, None, "study")?;
            sum_sq += (report.estimate - exact).norm_sqr();
        }
        rms.push((sum_sq / repeats as f64).sqrt());
    }
    let slope = if rms.iter().all(|&e| e > 0.0) {
        let xs: Vec<f64> = shots_grid.iter().map(|&s| (s as f64).ln()).collect();
        let ys: Vec<f64> = rms.iter().map(|&e| e.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(cov / var)
    } else {
        None
    };
    Ok(ConvergenceTable {
        shots: shots_grid.to_vec(),
        rms_error: rms,
        slope,
    })
}
