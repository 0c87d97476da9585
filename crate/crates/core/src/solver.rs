//! Embedded Dormand-Prince 5(4) integrator with adaptive step control.
//!
//! Steps are clamped to land exactly on requested checkpoints, so output
//! samples and injection boundaries are hit without interpolation. The
//! error estimate uses the standard mixed absolute/relative norm and the
//! controller the usual 0.9 * err^(-1/5) update, clamped to [0.2, 5].

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-15,
            h_init: 1e-3,
            h_max: f64::INFINITY,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights equal the last A row (FSAL); these are the 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
const SAFETY: f64 = 0.9;

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1`, invoking `observe` at every
/// checkpoint in `checkpoints` (which must be strictly increasing, within
/// (t0, t1], and end at t1). `post_accept` runs after every accepted step and
/// may adjust the state (e.g. clip round-off negatives) or abort.
pub fn integrate_segment<F, O, P>(
    f: F,
    t0: f64,
    y0: &mut Vec<f64>,
    checkpoints: &[f64],
    opts: &SolverOptions,
    mut post_accept: P,
    mut observe: O,
) -> Result<()>
where
    F: Fn(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
    P: FnMut(f64, &mut [f64]) -> Result<bool>,
{
    let n = y0.len();
    let mut t = t0;
    let mut y = std::mem::take(y0);
    let mut k = vec![vec![0.0; n]; 7];
    let mut y_stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    f(t, &y, &mut k[0]);

    // `h` is the controller's natural step; attempts are clamped to land on
    // checkpoints without shrinking the natural step for later legs.
    let mut h = opts.h_init.min(opts.h_max);
    for &checkpoint in checkpoints {
        while t < checkpoint {
            let clamped = t + h >= checkpoint;
            let h_att = if clamped { checkpoint - t } else { h };
            if h_att <= f64::EPSILON * t.abs().max(1.0) {
                *y0 = y;
                return Err(Error::StepUnderflow { t, h: h_att });
            }
            // six derivative stages
            for stage in 0..6 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(stage + 1) {
                        acc += A[stage][j] * kj[i];
                    }
                    y_stage[i] = y[i] + h_att * acc;
                }
                f(t + C[stage] * h_att, &y_stage, &mut k[stage + 1]);
            }
            // 5th-order solution is the 6th stage argument (FSAL)
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(6) {
                    acc += A[5][j] * kj[i];
                }
                y_new[i] = y[i] + h_att * acc;
            }
            // error = y5 - y4
            let mut err_norm_sq = 0.0;
            for i in 0..n {
                let mut y4 = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    y4 += B4[j] * kj[i];
                }
                let err = h_att
                    * (A[5][0] * k[0][i]
                        + A[5][2] * k[2][i]
                        + A[5][3] * k[3][i]
                        + A[5][4] * k[4][i]
                        + A[5][5] * k[5][i]
                        - y4);
                let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                err_norm_sq += (err / scale) * (err / scale);
            }
            let err_norm = (err_norm_sq / n as f64).sqrt();

            if err_norm <= 1.0 {
                t = if clamped { checkpoint } else { t + h_att };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6); // FSAL: last stage derivative becomes first
                match post_accept(t, &mut y) {
                    Err(e) => {
                        *y0 = y;
                        return Err(e);
                    }
                    // state was adjusted: refresh the FSAL derivative
                    Ok(true) => f(t, &y, &mut k[0]),
                    Ok(false) => {}
                }
                if clamped {
                    observe(t, &y);
                }
                let scale = if err_norm == 0.0 {
                    MAX_SCALE
                } else {
                    (SAFETY * err_norm.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
                };
                let grown = (h_att * scale).min(opts.h_max);
                // A clamped attempt says nothing about the natural step;
                // keep the larger of the two.
                h = if clamped { h.max(grown) } else { grown };
            } else {
                h = h_att * (SAFETY * err_norm.powf(-0.2)).clamp(MIN_SCALE, 1.0);
            }
        }
    }
    *y0 = y;
    Ok(())
}
