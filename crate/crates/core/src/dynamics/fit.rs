use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples inside the fit window.
pub const MIN_SAMPLES: usize = 8;

/// `v(t) = A e^{−γt} + B` over `window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFit {
    #[serde(rename = "A")]
    pub a: f64,
    pub gamma: f64,
    #[serde(rename = "B")]
    pub b: f64,
    /// Root-mean-square residual over the window.
    pub residual: f64,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WindowPolicy {
    /// From the first sample below `0.95 v₀` to the first sample below
    /// `max(10⁻³, v_end + 10⁻³)`, or to the end.
    #[default]
    Decay,
    All,
    /// Samples with `t0 ≤ t ≤ t1`.
    Between(f64, f64),
}

fn window(times: &[f64], values: &[f64], policy: WindowPolicy) -> (usize, usize) {
    let n = times.len();
    match policy {
        WindowPolicy::All => (0, n),
        WindowPolicy::Between(t0, t1) => {
            let lo = times.iter().position(|&t| t >= t0).unwrap_or(n);
            let hi = times.iter().rposition(|&t| t <= t1).map_or(0, |i| i + 1);
            (lo, hi.max(lo))
        }
        WindowPolicy::Decay => {
            let v0 = values[0];
            let lo = values.iter().position(|&v| v < 0.95 * v0).unwrap_or(n);
            let floor = 1e-3f64.max(values[n - 1] + 1e-3);
            let hi = values[lo.min(n)..].iter().position(|&v| v < floor).map_or(n, |i| lo + i + 1);
            (lo, hi)
        }
    }
}

fn residuals(p: &Vector3<f64>, t: &[f64], v: &[f64]) -> Vec<f64> {
    t.iter().zip(v).map(|(&t, &v)| p[0] * (-p[1] * t).exp() + p[2] - v).collect()
}

fn cost(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Nonlinear least squares for `(A, γ, B)`, initialized at `A = v₀ − v_end`,
/// `B = v_end` and `γ` from a log-linear regression of `v − B`.
pub fn fit_exponential(times: &[f64], values: &[f64], policy: WindowPolicy) -> Result<ExpFit> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
    }
    if times.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let (lo, hi) = window(times, values, policy);
    if hi.saturating_sub(lo) < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} samples in the fit window, need {MIN_SAMPLES}",
            hi.saturating_sub(lo)
        )));
    }
    let (t, v) = (&times[lo..hi], &values[lo..hi]);

    let v_end = values[values.len() - 1];
    let b0 = v_end;
    let a0 = values[0] - v_end;
    let pts: Vec<(f64, f64)> =
        t.iter().zip(v).filter(|(_, &v)| v - b0 > 1e-12 * a0.abs().max(1e-300)).map(|(&t, &v)| (t, (v - b0).ln())).collect();
    let gamma0 = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let (st, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
        let (tm, ym) = (st / m, sy / m);
        let num: f64 = pts.iter().map(|(t, y)| (t - tm) * (y - ym)).sum();
        let den: f64 = pts.iter().map(|(t, _)| (t - tm).powi(2)).sum();
        if den > 0.0 { (-num / den).max(0.0) } else { 0.0 }
    } else {
        0.0
    };
    let gamma0 = if gamma0 > 0.0 { gamma0 } else { 1.0 / (t[t.len() - 1] - t[0]).max(1e-12) };

    let mut p = Vector3::new(a0, gamma0, b0);
    let mut r = residuals(&p, t, v);
    let mut c = cost(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    for _ in 0..1000 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&ti, &ri) in t.iter().zip(&r) {
            let e = (-p[1] * ti).exp();
            let j = Vector3::new(e, -p[0] * ti * e, 1.0);
            jtj += j * j.transpose();
            jtr += j * ri;
        }
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = jtj;
            for k in 0..3 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let mut q = p + step;
            q[1] = q[1].max(0.0);
            let rq = residuals(&q, t, v);
            let cq = cost(&rq);
            if cq.is_finite() && cq <= c {
                let rel = (q - p).norm() / (p.norm() + 1e-300);
                let drop = c - cq;
                p = q;
                r = rq;
                c = cq;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                if rel < 1e-14 || drop <= 1e-30 + 1e-15 * c {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // No descent direction left: a stationary point.
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !p.iter().all(|x| x.is_finite()) || !converged {
        return Err(Error::FitDiverged(format!("A = {}, γ = {}, B = {}", p[0], p[1], p[2])));
    }
    Ok(ExpFit {
        a: p[0],
        gamma: p[1],
        b: p[2],
        residual: (c / t.len() as f64).sqrt(),
        window: (t[0], t[t.len() - 1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_synthetic_parameters() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.02).collect();
        let v: Vec<f64> = t.iter().map(|t| 0.8 * (-2.0 * t).exp() + 0.1).collect();
        for policy in [WindowPolicy::Decay, WindowPolicy::All] {
            let f = fit_exponential(&t, &v, policy).unwrap();
            assert!((f.a - 0.8).abs() < 1e-6 && (f.gamma - 2.0).abs() < 1e-6 && (f.b - 0.1).abs() < 1e-6, "{f:?}");
            assert!(f.residual < 1e-9);
        }
    }

    #[test]
    fn decay_window_bounds() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
        let f = fit_exponential(&t, &v, WindowPolicy::Decay).unwrap();
        // First sample below 0.95 is t = 0.1; the floor max(1e-3, v_end + 1e-3) is reached near t = 6.9.
        assert_eq!(f.window.0, 0.1);
        assert!(f.window.1 > 6.5 && f.window.1 < 7.5, "{:?}", f.window);
        assert!((f.gamma - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_short_series() {
        let t: Vec<f64> = (0..6).map(|k| k as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
        assert!(matches!(fit_exponential(&t, &v, WindowPolicy::All), Err(Error::InsufficientData(_))));
        assert!(matches!(fit_exponential(&t, &v[..5], WindowPolicy::All), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tolerates_noise() {
        let mut g = crate::rng::SplitMix64::new(2);
        let t: Vec<f64> = (0..80).map(|k| k as f64 * 0.05).collect();
        let v: Vec<f64> = t.iter().map(|t| 0.5 * (-1.5 * t).exp() + 1e-4 * g.next_gaussian()).collect();
        let f = fit_exponential(&t, &v, WindowPolicy::All).unwrap();
        assert!((f.gamma - 1.5).abs() < 0.02, "{f:?}");
    }
}
