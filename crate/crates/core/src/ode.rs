//! Adaptive explicit Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! The integrator reports the state at caller-chosen output times. Steps are
//! clipped so every output time is hit exactly; no interpolation is involved.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h0: None,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `dy/dt = f(t, y)` from `(t0, y0)` and returns the state at each
/// of `output_times`, which must be non-decreasing and `>= t0`.
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    output_times: &[f64],
    opts: &IntegratorOptions,
) -> Result<(Vec<Vec<f64>>, IntegrationStats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if !(opts.rtol > 0.0) || !(opts.atol >= 0.0) {
        return Err(Error::Input("tolerances must be positive".into()));
    }
    if output_times.windows(2).any(|w| w[1] < w[0]) || output_times.first().is_some_and(|&t| t < t0) {
        return Err(Error::Input("output times must be non-decreasing and start at or after t0".into()));
    }
    let n = y0.len();
    let mut stats = IntegrationStats::default();
    let mut out = Vec::with_capacity(output_times.len());
    let mut y = y0.to_vec();
    let mut t = t0;

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    f(t, &y, &mut k1);
    stats.evaluations += 1;

    let t_final = output_times.last().copied().unwrap_or(t0);
    let mut h = match opts.h0 {
        Some(h) if h > 0.0 => h,
        _ => initial_step(&y, &k1, opts, t_final - t0),
    };

    let mut steps = 0usize;
    for &t_out in output_times {
        while t < t_out {
            if steps >= opts.max_steps {
                return Err(Error::Integration {
                    t,
                    reason: format!("exceeded {} steps", opts.max_steps),
                });
            }
            let remaining = t_out - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try <= f64::EPSILON * t.abs().max(1e-300) * 4.0 {
                return Err(Error::Integration {
                    t,
                    reason: format!("step size underflow (h = {h_try:.3e})"),
                });
            }

            for i in 0..n {
                tmp[i] = y[i] + h_try * A21 * k1[i];
            }
            f(t + C2 * h_try, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + h_try * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t + C3 * h_try, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + h_try * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t + C4 * h_try, &tmp, &mut k4);
            for i in 0..n {
                tmp[i] = y[i] + h_try * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t + C5 * h_try, &tmp, &mut k5);
            for i in 0..n {
                tmp[i] = y[i]
                    + h_try * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            f(t + h_try, &tmp, &mut k6);
            for i in 0..n {
                y_new[i] = y[i]
                    + h_try * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            let t_new = if clipped { t_out } else { t + h_try };
            f(t_new, &y_new, &mut k7);
            stats.evaluations += 6;
            steps += 1;

            let mut err_sq = 0.0;
            for i in 0..n {
                let e = h_try
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                let r = if sc > 0.0 { e / sc } else if e == 0.0 { 0.0 } else { f64::INFINITY };
                err_sq += r * r;
            }
            let err = if n > 0 { (err_sq / n as f64).sqrt() } else { 0.0 };
            if !err.is_finite() && err_sq.is_nan() {
                return Err(Error::Integration {
                    t,
                    reason: "non-finite derivative".into(),
                });
            }

            if err <= 1.0 {
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                stats.accepted += 1;
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // A step shortened to land on an output time says nothing
                // about the natural step size.
                if !clipped || factor < 1.0 {
                    h = h_try * factor;
                }
            } else {
                stats.rejected += 1;
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

fn initial_step(y: &[f64], dy: &[f64], opts: &IntegratorOptions, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y.len() {
        let sc = opts.atol + opts.rtol * y[i].abs();
        if sc > 0.0 {
            d0 += (y[i] / sc).powi(2);
            d1 += (dy[i] / sc).powi(2);
        }
    }
    let n = y.len().max(1) as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.abs().max(1e-300) } else { 0.01 * d0 / d1 };
    if span > 0.0 {
        h.min(span)
    } else {
        h
    }
}

/// Evenly spaced grid `t0, t0 + dt, ..., t1` with `n` points.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    t1
                } else {
                    t0 + (t1 - t0) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ts = linspace(0.0, 5.0, 11);
        let (ys, _) = integrate(|_, y, dy| dy[0] = -y[0], 0.0, &[1.0], &ts, &Default::default()).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9 * (-t).exp(), "t={t}");
        }
    }

    #[test]
    fn harmonic_oscillator_phase() {
        let ts = linspace(0.0, 100.0, 5);
        let (ys, _) = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            &ts,
            &Default::default(),
        )
        .unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - t.cos()).abs() < 1e-8);
            assert!((y[1] + t.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn output_at_t0_is_initial_state() {
        let (ys, stats) = integrate(|_, _, dy| dy[0] = 1.0, 0.0, &[3.0], &[0.0], &Default::default()).unwrap();
        assert_eq!(ys[0], vec![3.0]);
        assert_eq!(stats.accepted, 0);
    }

    #[test]
    fn step_budget_is_reported() {
        let opts = IntegratorOptions { max_steps: 3, ..Default::default() };
        let err = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            &[1000.0],
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn rejects_decreasing_outputs() {
        let r = integrate(|_, _, dy| dy[0] = 0.0, 0.0, &[0.0], &[1.0, 0.5], &Default::default());
        assert!(matches!(r, Err(Error::Input(_))));
    }
}
