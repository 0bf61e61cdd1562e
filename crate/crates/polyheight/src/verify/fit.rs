//! Log-log regression of decay and sublevel curves.
//!
//! Decay fits anchor at the largest sampled frequencies: the window is the
//! shortest top suffix of at least eight points (about two octaves) passing
//! the linearity gate R² ≥ 0.995, extended only if the minimal window fails.

use super::{DecaySamples, SublevelSamples, VerifyError};

#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    /// Slope of log|J| (or log μ) against log λ (log ε).
    pub exponent: f64,
    pub log_flag_used: u8,
    pub stderr: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub r_squared: f64,
}

fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let stderr = if x.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    let r2 = if ss_tot > 1e-300 { 1.0 - ss_res / ss_tot } else { f64::NAN };
    (slope, intercept, stderr, r2)
}

/// Fits the decay exponent of |J(λ)|, optionally dividing out one log factor.
pub fn fit_decay(samples: &DecaySamples, log_flag: u8) -> Result<FitResult, VerifyError> {
    let mut pts: Vec<(f64, f64)> = samples
        .samples
        .iter()
        .filter(|s| s.value.norm() > 0.0 && s.lambda > std::f64::consts::E)
        .map(|s| {
            let y = s.value.norm().ln() - f64::from(log_flag) * s.lambda.ln().ln();
            (s.lambda, y)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 8 {
        return Err(VerifyError::InsufficientSamples { needed: 8 });
    }
    let lambda_max = pts.last().unwrap().0;
    // minimal window: top two octaves, never fewer than 8 points
    let base = pts
        .iter()
        .filter(|(l, _)| *l >= lambda_max / 4.0 * (1.0 - 1e-9))
        .count()
        .max(8);
    for len in base..=pts.len() {
        let window = &pts[pts.len() - len..];
        let xs: Vec<f64> = window.iter().map(|(l, _)| l.ln()).collect();
        let ys: Vec<f64> = window.iter().map(|(_, y)| *y).collect();
        let (slope, _, stderr, r2) = ols(&xs, &ys);
        if r2 >= 0.995 {
            return Ok(FitResult {
                exponent: slope,
                log_flag_used: log_flag,
                stderr,
                window: (window[0].0, window[len - 1].0),
                points: len,
                r_squared: r2,
            });
        }
    }
    Err(VerifyError::NoLinearWindow)
}

/// Fits the sublevel growth exponent a in μ(ε) ≈ c εᵃ (log(1/ε))^flag.
/// Points with wide confidence intervals or near-saturated measure are
/// excluded.
pub fn fit_sublevel(samples: &SublevelSamples, log_flag: u8) -> Result<FitResult, VerifyError> {
    let vol = 8.0 * samples.box_half.powi(3);
    let mut pts: Vec<(f64, f64)> = samples
        .samples
        .iter()
        .filter(|s| {
            s.measure > 0.0 && s.ci <= 0.05 * s.measure && s.measure < 0.45 * vol
        })
        .map(|s| {
            let inv = 1.0 / s.epsilon;
            let y = s.measure.ln() - f64::from(log_flag) * inv.ln().ln();
            (s.epsilon, y)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 6 {
        return Err(VerifyError::InsufficientSamples { needed: 6 });
    }
    let xs: Vec<f64> = pts.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, y)| *y).collect();
    let (slope, _, stderr, r2) = ols(&xs, &ys);
    Ok(FitResult {
        exponent: slope,
        log_flag_used: log_flag,
        stderr,
        window: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
        r_squared: r2,
    })
}
