//! Explicit Runge–Kutta 5(4) integration for planar autonomous fields,
//! with the classic proportional integral step controller. The state is a
//! fixed pair [x, y]; nothing here knows about Liénard structure.

use crate::error::{Error, Result};

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
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - 0.75 * BETA;
const FAC_SHRINK_MAX: f64 = 5.0; // step may shrink to h/5
const FAC_GROW_MAX: f64 = 0.1; // and grow to 10h
const MIN_STEP: f64 = 1e-14;

fn axpy(y: &[f64; 2], h: f64, coeffs: &[(f64, &[f64; 2])]) -> [f64; 2] {
    let mut out = *y;
    for &(c, k) in coeffs {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One fixed Dormand–Prince step; returns the 5th order solution and the
/// embedded error vector h·Σ eⱼ·kⱼ.
fn dp_step<F>(f: &mut F, y: &[f64; 2], h: f64) -> Result<([f64; 2], [f64; 2])>
where
    F: FnMut(&[f64; 2]) -> Result<[f64; 2]>,
{
    let k1 = f(y)?;
    let k2 = f(&axpy(y, h, &[(A21, &k1)]))?;
    let k3 = f(&axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = f(&axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(&axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = f(&axpy(
        y,
        h,
        &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let y5 = axpy(
        y,
        h,
        &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = f(&y5)?;
    let err = axpy(
        &[0.0, 0.0],
        h,
        &[
            (E1, &k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
    );
    Ok((y5, err))
}

/// Single fixed size step, 5th order solution only. Used to re-integrate
/// short arcs when a crossing time is being localized.
pub fn rk_step<F>(f: &mut F, y: &[f64; 2], h: f64) -> Result<[f64; 2]>
where
    F: FnMut(&[f64; 2]) -> Result<[f64; 2]>,
{
    Ok(dp_step(f, y, h)?.0)
}

/// An accepted step of the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct AcceptedStep {
    pub t_from: f64,
    pub t_to: f64,
    pub y_from: [f64; 2],
    pub y_to: [f64; 2],
}

/// Adaptive integrator state. `advance` produces one accepted step at a
/// time so callers can watch for events between steps.
pub struct AdaptiveRk<F> {
    f: F,
    pub t: f64,
    pub y: [f64; 2],
    h: f64,
    rtol: f64,
    atol: f64,
    max_step: f64,
    facold: f64,
}

impl<F> AdaptiveRk<F>
where
    F: FnMut(&[f64; 2]) -> Result<[f64; 2]>,
{
    /// `tol` sets the relative tolerance; the absolute tolerance rides two
    /// orders below it.
    pub fn new(mut f: F, y0: [f64; 2], tol: f64, max_step: f64) -> Result<Self> {
        let h = initial_step(&mut f, &y0, tol, tol / 100.0)?.min(max_step);
        Ok(AdaptiveRk {
            f,
            t: 0.0,
            y: y0,
            h,
            rtol: tol,
            atol: tol / 100.0,
            max_step,
            facold: 1e-4,
        })
    }

    pub fn field(&mut self) -> &mut F {
        &mut self.f
    }

    /// Takes accepted-or-rejected attempts until one passes the error test,
    /// then commits it and returns the step. Fails with `StepUnderflow` if
    /// error control drives the step below 1e-14.
    pub fn advance(&mut self) -> Result<AcceptedStep> {
        loop {
            let h = self.h.min(self.max_step);
            let (y_new, err_vec) = dp_step(&mut self.f, &self.y, h)?;
            let mut err_sq = 0.0;
            for i in 0..2 {
                let sk = self.atol + self.rtol * self.y[i].abs().max(y_new[i].abs());
                let e = err_vec[i] / sk;
                err_sq += e * e;
            }
            let err = (0.5 * err_sq).sqrt();
            if !err.is_finite() {
                // Overflow inside the stages; retreat hard.
                self.h = h / FAC_SHRINK_MAX;
                if self.h < MIN_STEP {
                    return Err(Error::StepUnderflow);
                }
                continue;
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                // Accept; PI controller sets the next step.
                let fac = (fac11 / self.facold.powf(BETA) / SAFE)
                    .clamp(FAC_GROW_MAX, FAC_SHRINK_MAX);
                self.facold = err.max(1e-4);
                let step = AcceptedStep {
                    t_from: self.t,
                    t_to: self.t + h,
                    y_from: self.y,
                    y_to: y_new,
                };
                self.t += h;
                self.y = y_new;
                self.h = (h / fac).min(self.max_step);
                return Ok(step);
            }
            self.h = h / (fac11 / SAFE).min(FAC_SHRINK_MAX);
            if self.h < MIN_STEP {
                return Err(Error::StepUnderflow);
            }
        }
    }
}

/// Standard starting step heuristic: scale from the field magnitude, then
/// correct with one Euler trial's curvature estimate.
fn initial_step<F>(f: &mut F, y0: &[f64; 2], rtol: f64, atol: f64) -> Result<f64>
where
    F: FnMut(&[f64; 2]) -> Result<[f64; 2]>,
{
    let f0 = f(y0)?;
    let sk = |v: &[f64; 2], i: usize| atol + rtol * v[i].abs();
    let d0 = ((y0[0] / sk(y0, 0)).powi(2) + (y0[1] / sk(y0, 1)).powi(2)).sqrt();
    let d1 = ((f0[0] / sk(y0, 0)).powi(2) + (f0[1] / sk(y0, 1)).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = [y0[0] + h0 * f0[0], y0[1] + h0 * f0[1]];
    let f1 = f(&y1)?;
    let d2 = (((f1[0] - f0[0]) / sk(y0, 0)).powi(2) + ((f1[1] - f0[1]) / sk(y0, 1)).powi(2))
        .sqrt()
        / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    Ok(h1.min(100.0 * h0).max(MIN_STEP * 10.0))
}
