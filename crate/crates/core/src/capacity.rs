//! Single-signal capacity C1, collective capacity C∞, and their gap Q.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{check_overlap, make_ensemble, sine};
use crate::error::{Error, Result};
use crate::linalg::{h2, von_neumann_entropy};
use crate::optimizer::golden_section_max;

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// C1 in bits: `½(1+S)log(1+S) + ½(1-S)log(1-S)` with `S = √(1-x²)`.
pub fn c1_closed(x: f64) -> f64 {
    if x >= 1.0 {
        return 0.0;
    }
    let s = sine(x);
    0.5 * xlog2x(1.0 + s) + 0.5 * xlog2x(1.0 - s)
}

/// C∞ in bits: `1 - ½((1-x)log(1-x) + (1+x)log(1+x))`.
pub fn c_inf_closed(x: f64) -> f64 {
    1.0 - 0.5 * (xlog2x(1.0 - x) + xlog2x(1.0 + x))
}

/// `Q = C∞ - C1`.
pub fn quantumness_q(x: f64) -> f64 {
    c_inf_closed(x) - c1_closed(x)
}

/// Mutual information between the preparation (priors `p`, `1-p`) and the
/// outcome of the real projective measurement at angle `phi`.
fn mutual_information(x: f64, p: f64, phi: f64) -> f64 {
    let s = sine(x);
    let (sn, cs) = phi.sin_cos();
    // P(outcome 0 | state i) = |<b0|ψi>|², b0 = (cos φ, sin φ)
    let q0 = cs * cs;
    let a = x * cs + s * sn;
    let q1 = a * a;
    let out0 = p * q0 + (1.0 - p) * q1;
    h2(out0.clamp(0.0, 1.0)) - p * h2(q0.clamp(0.0, 1.0)) - (1.0 - p) * h2(q1.clamp(0.0, 1.0))
}

/// Brute-force accessible information: grid sweep over measurement angle
/// `φ ∈ [0, π)` and prior `p ∈ [0, 1]`, then alternating golden-section
/// refinement on each coordinate inside the winning grid cell.
pub fn accessible_info_oracle(x: f64, angle_steps: usize, prior_steps: usize) -> Result<f64> {
    check_overlap(x)?;
    if angle_steps < 100 || prior_steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 grid steps (got {angle_steps}, {prior_steps})"
        )));
    }
    let pi = std::f64::consts::PI;
    let dphi = pi / angle_steps as f64;
    let dp = 1.0 / prior_steps as f64;

    let (mut best, mut phi, mut p) = (0..angle_steps)
        .into_par_iter()
        .map(|i| {
            let phi = i as f64 * dphi;
            (0..=prior_steps)
                .map(|j| {
                    let p = j as f64 * dp;
                    (mutual_information(x, p, phi), phi, p)
                })
                .fold((f64::NEG_INFINITY, 0.0, 0.0), |acc, v| {
                    if v.0 > acc.0 {
                        v
                    } else {
                        acc
                    }
                })
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0, 0.0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    for _ in 0..8 {
        let r = golden_section_max(
            |t| mutual_information(x, p, t),
            phi - dphi,
            phi + dphi,
            1e-12,
        )?;
        if r.value > best {
            best = r.value;
            phi = r.argmax;
        }
        let lo = (p - dp).max(0.0);
        let hi = (p + dp).min(1.0);
        let r = golden_section_max(|t| mutual_information(x, t, phi), lo, hi, 1e-12)?;
        if r.value > best {
            best = r.value;
            p = r.argmax;
        }
    }
    Ok(best)
}

/// Maximises the von Neumann entropy of `p ρ0 + (1-p) ρ1` over the prior.
/// Returns `(max entropy, maximising p)`.
pub fn holevo_prior_oracle(x: f64, prior_steps: usize) -> Result<(f64, f64)> {
    if prior_steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 prior steps (got {prior_steps})"
        )));
    }
    let e = make_ensemble(x)?;
    let entropy = |p: f64| -> f64 {
        let mix = &(&e.rho0 * p) + &(&e.rho1 * (1.0 - p));
        von_neumann_entropy(&mix).unwrap_or(f64::NEG_INFINITY)
    };
    let dp = 1.0 / prior_steps as f64;
    let (mut best, mut arg) = (0..=prior_steps)
        .map(|j| {
            let p = j as f64 * dp;
            (entropy(p), p)
        })
        .fold(
            (f64::NEG_INFINITY, 0.0),
            |acc, v| if v.0 > acc.0 { v } else { acc },
        );
    let lo = (arg - dp).max(0.0);
    let hi = (arg + dp).min(1.0);
    let r = golden_section_max(entropy, lo, hi, 1e-10)?;
    if r.value > best {
        best = r.value;
        arg = r.argmax;
    }
    Ok((best, arg))
}

/// Closed forms alongside their oracle values.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityReport {
    pub x: f64,
    pub c1: f64,
    pub c_inf: f64,
    pub q: f64,
    pub oracle_c1: f64,
    pub oracle_c_inf: f64,
    pub oracle_prior: f64,
    /// `(|c1 - oracle_c1|, |c_inf - oracle_c_inf|)`
    pub oracle_gap: (f64, f64),
}

pub fn capacity_report(x: f64, angle_steps: usize, prior_steps: usize) -> Result<CapacityReport> {
    check_overlap(x)?;
    let c1 = c1_closed(x);
    let c_inf = c_inf_closed(x);
    let oracle_c1 = accessible_info_oracle(x, angle_steps, prior_steps)?;
    let (oracle_c_inf, oracle_prior) = holevo_prior_oracle(x, prior_steps)?;
    Ok(CapacityReport {
        x,
        c1,
        c_inf,
        q: c_inf - c1,
        oracle_c1,
        oracle_c_inf,
        oracle_prior,
        oracle_gap: ((c1 - oracle_c1).abs(), (c_inf - oracle_c_inf).abs()),
    })
}
