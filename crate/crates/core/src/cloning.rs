//! State-dependent cloning of the two states under the equal-marginals rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{check_overlap, make_ensemble, sine, TwoStateEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor_vectors, ComplexVector, Keep};
use crate::optimizer::{simplex_minimize, PenaltySchedule, SimplexConfig};

const FEASIBLE_TOL: f64 = 1e-6;
const FAILED_EVALUATION: f64 = 1e6;
const PARAMS: usize = 8;

/// Optimal average global fidelity `½(1 + x³ + (1-x²)√(1+x²))`.
pub fn global_fidelity_closed(x: f64) -> f64 {
    let x2 = x * x;
    0.5 * (1.0 + x2 * x + (1.0 - x2) * (1.0 + x2).sqrt())
}

/// Optimal average local fidelity.
///
/// Below `x = 1/4` the inner radical is rewritten as
/// `16x²(1-2x) / ((1-x)r + 1 - 2x - 3x²)` with `r = √(1-2x+9x²)`, which
/// cancels the `1/x` prefactor analytically; the direct form loses every
/// significant digit to cancellation as `x -> 0`.
pub fn local_fidelity_closed(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let r = (1.0 - 2.0 * x + 9.0 * x * x).sqrt();
    let lead = (1.0 + x) * (3.0 - 3.0 * x + r);
    if x < 0.25 {
        let den = (1.0 - x) * r + 1.0 - 2.0 * x - 3.0 * x * x;
        let ratio = ((1.0 - 2.0 * x) / den).max(0.0);
        return 0.5 + std::f64::consts::SQRT_2 / 8.0 * lead * ratio.sqrt();
    }
    let inner = (-1.0 + 2.0 * x + 3.0 * x * x + (1.0 - x) * r).max(0.0);
    0.5 + std::f64::consts::SQRT_2 / (32.0 * x) * lead * inner.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CloneObjective {
    Global,
    Local,
}

#[derive(Clone, Debug, Serialize)]
pub struct CloneCandidate {
    pub x: f64,
    /// Joint system ⊗ ancilla output for input `ψ0`.
    pub joint0: ComplexVector,
    pub joint1: ComplexVector,
    /// Largest entry of `tr_S - tr_A` over both outputs.
    pub marginal_residual: f64,
    pub overlap_residual: f64,
    pub f_global: f64,
    pub f_local: f64,
    pub feasible: bool,
}

/// Builds the two joint outputs from 8 reals. The first four give `joint0`,
/// the last four (orthogonalised against it) give the direction that sets
/// `joint1 = x·joint0 + √(1-x²)·u`, so the pair always has overlap `x`.
fn joint_pair(params: &[f64], x: f64) -> Result<[ComplexVector; 2]> {
    let (a, b) = params.split_at(4);
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(na > 1e-12) {
        return Err(Error::RankDeficient(na));
    }
    let j0: Vec<f64> = a.iter().map(|v| v / na).collect();
    let dot: f64 = j0.iter().zip(b).map(|(p, q)| p * q).sum();
    let u: Vec<f64> = b.iter().zip(&j0).map(|(q, p)| q - dot * p).collect();
    let nu = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(nu > 1e-12) {
        return Err(Error::RankDeficient(nu));
    }
    let s = sine(x);
    let j1: Vec<f64> = j0.iter().zip(&u).map(|(p, q)| x * p + s * q / nu).collect();
    Ok([
        ComplexVector::from_real(&j0)?,
        ComplexVector::from_real(&j1)?,
    ])
}

struct Scores {
    f_global: f64,
    f_local: f64,
    marginal_residual: f64,
    marginal_norm: f64,
}

fn score(e: &TwoStateEnsemble, joints: &[ComplexVector; 2]) -> Result<Scores> {
    let mut s = Scores {
        f_global: 0.0,
        f_local: 0.0,
        marginal_residual: 0.0,
        marginal_norm: 0.0,
    };
    for (i, joint) in joints.iter().enumerate() {
        let psi = e.state(i);
        let ideal = tensor_vectors(psi, psi);
        s.f_global += 0.5 * joint.inner(&ideal).norm_sqr();
        let rho = joint.projector();
        let system = partial_trace(&rho, Keep::First, (2, 2))?;
        let ancilla = partial_trace(&rho, Keep::Second, (2, 2))?;
        s.f_local += 0.5 * system.expectation(psi);
        let diff = system.as_matrix().max_abs_diff(ancilla.as_matrix());
        s.marginal_residual = s.marginal_residual.max(diff);
        s.marginal_norm += (&system - &ancilla)
            .as_matrix()
            .data()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>();
    }
    s.marginal_norm = s.marginal_norm.sqrt();
    Ok(s)
}

fn candidate(e: &TwoStateEnsemble, params: &[f64]) -> Result<CloneCandidate> {
    let joints = joint_pair(params, e.x)?;
    let s = score(e, &joints)?;
    let overlap_residual = (joints[0].inner(&joints[1]) - e.x).norm();
    let [joint0, joint1] = joints;
    Ok(CloneCandidate {
        x: e.x,
        joint0,
        joint1,
        feasible: s.marginal_residual <= FEASIBLE_TOL && overlap_residual <= FEASIBLE_TOL,
        marginal_residual: s.marginal_residual,
        overlap_residual,
        f_global: s.f_global,
        f_local: s.f_local,
    })
}

/// Scores an arbitrary pair of joint outputs.
pub fn evaluate_clone_pair(
    x: f64,
    joint0: &ComplexVector,
    joint1: &ComplexVector,
) -> Result<CloneCandidate> {
    let e = make_ensemble(x)?;
    if joint0.dim() != 4 || joint1.dim() != 4 {
        return Err(Error::DimensionMismatch(
            "clone outputs live in C^2 ⊗ C^2".into(),
        ));
    }
    let joints = [joint0.clone(), joint1.clone()];
    let s = score(&e, &joints)?;
    let overlap_residual = (joint0.inner(joint1) - x).norm();
    Ok(CloneCandidate {
        x,
        joint0: joint0.clone(),
        joint1: joint1.clone(),
        feasible: s.marginal_residual <= FEASIBLE_TOL && overlap_residual <= FEASIBLE_TOL,
        marginal_residual: s.marginal_residual,
        overlap_residual,
        f_global: s.f_global,
        f_local: s.f_local,
    })
}

fn run_restart(
    e: &TwoStateEnsemble,
    objective: CloneObjective,
    seed: u64,
    index: usize,
) -> Option<CloneCandidate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut params: Vec<f64> = (0..PARAMS).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut simplex = SimplexConfig::new(PARAMS);
    simplex.max_iterations = 20_000;
    simplex.tolerance = 1e-14;
    simplex.seed = seed ^ index as u64;

    for w in PenaltySchedule::default().weights() {
        let f = |q: &[f64]| {
            let Ok(joints) = joint_pair(q, e.x) else {
                return FAILED_EVALUATION;
            };
            match score(e, &joints) {
                Ok(s) => {
                    let fid = match objective {
                        CloneObjective::Global => s.f_global,
                        CloneObjective::Local => s.f_local,
                    };
                    -fid + PenaltySchedule::penalty(s.marginal_norm, w)
                }
                Err(_) => FAILED_EVALUATION,
            }
        };
        if let Ok(r) = simplex_minimize(f, &simplex, &params) {
            params = r.argmin;
        }
    }
    candidate(e, &params).ok()
}

/// Maximises the chosen average fidelity over pairs of real joint outputs
/// with overlap `x` and equal system/ancilla marginals.
///
/// Restarts run in parallel. The best feasible candidate wins, ties going
/// to the lowest restart index; without a feasible one, the candidate with
/// the smallest marginal residual comes back with `feasible = false`.
pub fn cloning_oracle(
    x: f64,
    objective: CloneObjective,
    restarts: usize,
    seed: u64,
) -> Result<CloneCandidate> {
    check_overlap(x)?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let e = make_ensemble(x)?;
    let runs: Vec<Option<CloneCandidate>> = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(&e, objective, seed, i))
        .collect();
    let fidelity = |c: &CloneCandidate| match objective {
        CloneObjective::Global => c.f_global,
        CloneObjective::Local => c.f_local,
    };
    let mut best: Option<&CloneCandidate> = None;
    for c in runs.iter().flatten().filter(|c| c.feasible) {
        if best.is_none_or(|b| fidelity(c) > fidelity(b)) {
            best = Some(c);
        }
    }
    if best.is_none() {
        for c in runs.iter().flatten() {
            if best.is_none_or(|b| c.marginal_residual < b.marginal_residual) {
                best = Some(c);
            }
        }
    }
    best.cloned()
        .ok_or_else(|| Error::InvalidArgument("every cloning restart failed to evaluate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn printed_local(x: f64) -> f64 {
        let r = (1.0 - 2.0 * x + 9.0 * x * x).sqrt();
        let inner = (-1.0 + 2.0 * x + 3.0 * x * x + (1.0 - x) * r).max(0.0);
        0.5 + std::f64::consts::SQRT_2 / (32.0 * x) * (1.0 + x) * (3.0 - 3.0 * x + r) * inner.sqrt()
    }

    #[test]
    fn global_values() {
        assert_eq!(global_fidelity_closed(0.0), 1.0);
        assert_eq!(global_fidelity_closed(1.0), 1.0);
        let at_third = global_fidelity_closed(1.0 / 3f64.sqrt());
        assert!((at_third - 0.981125).abs() < 1e-6);
        assert!(1.0 - global_fidelity_closed(FRAC_1_SQRT_2) < 1.0 - at_third);
    }

    #[test]
    fn local_values() {
        assert!((local_fidelity_closed(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(local_fidelity_closed(0.0), 1.0);
        // direct evaluation of the printed expression at x = 1/2
        assert!((local_fidelity_closed(0.5) - 0.987139).abs() < 1e-6);
    }

    #[test]
    fn local_rewrite_agrees_with_printed_form() {
        for k in 1..=1000 {
            let x = k as f64 / 1000.0;
            let tol = if x < 0.05 { 1e-6 } else { 1e-12 };
            assert!(
                (local_fidelity_closed(x) - printed_local(x)).abs() < tol,
                "x={x}"
            );
        }
        // small-x continuity toward the removable singularity
        assert!((local_fidelity_closed(1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn closed_forms_in_range() {
        for k in 0..=1000 {
            let x = k as f64 / 1000.0;
            for f in [global_fidelity_closed(x), local_fidelity_closed(x)] {
                assert!((0.5..=1.0 + 1e-15).contains(&f), "x={x}: {f}");
            }
        }
    }

    #[test]
    fn ideal_clones_of_orthogonal_states() {
        let e0 = ComplexVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let e3 = ComplexVector::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        let c = evaluate_clone_pair(0.0, &e0, &e3).unwrap();
        assert!(c.feasible);
        assert_eq!((c.f_global, c.f_local), (1.0, 1.0));
    }

    #[test]
    fn overlap_is_exact_by_construction() {
        let params = [0.3, -0.2, 0.9, 0.1, 0.5, 0.4, -0.7, 0.2];
        let [a, b] = joint_pair(&params, 0.37).unwrap();
        assert!((a.inner(&b).re - 0.37).abs() < 1e-15);
        assert!(a.is_state() && b.is_state());
    }

    #[test]
    fn oracle_orthogonal() {
        for obj in [CloneObjective::Global, CloneObjective::Local] {
            let c = cloning_oracle(0.0, obj, 4, 1).unwrap();
            assert!(c.feasible);
            let f = if obj == CloneObjective::Global {
                c.f_global
            } else {
                c.f_local
            };
            assert!((f - 1.0).abs() < 2e-3);
        }
    }

    #[test]
    fn oracle_global_at_most_quantum_point() {
        let x = 1.0 / 3f64.sqrt();
        let c = cloning_oracle(x, CloneObjective::Global, 8, 5).unwrap();
        assert!(c.feasible);
        assert!((c.f_global - global_fidelity_closed(x)).abs() < 2e-3);
        assert!((c.joint0.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_local_at_half() {
        let c = cloning_oracle(0.5, CloneObjective::Local, 8, 5).unwrap();
        assert!(c.feasible);
        assert!((c.f_local - local_fidelity_closed(0.5)).abs() < 2e-3);
        assert!(c.f_local <= local_fidelity_closed(0.5) + 2e-3);
    }
}
