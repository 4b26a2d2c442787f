//! Information gain against disturbance for an eavesdropper on the two states.
//!
//! Eve couples a probe to each signal through an isometry
//! `V: C² -> C² ⊗ C^d`. Her error `P` is the Helstrom error between the two
//! probe states; the disturbance `D` is the probability that Bob's test
//! "is the signal still |ψ_i⟩?" fails, `D = 1 - ½ Σ_i ⟨ψ_i|ρ_i^A|ψ_i⟩`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{
    check_overlap, helstrom_error_closed, helstrom_error_of, make_ensemble, sine,
};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, partial_trace, tensor_product, ComplexMatrix, HermitianMatrix, Keep,
};
use crate::optimizer::{
    orthonormal_columns_from_params, simplex_minimize, PenaltySchedule, SimplexConfig,
};

const BOUND_SLACK: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-6;
const FAILED_EVALUATION: f64 = 1e6;

/// Minimum disturbance when Eve's error probability is held at `p`.
///
/// The radicand `(1-x²)(4P-4P²-x²)` is evaluated as `S²(S-u)(S+u)` with
/// `S = √(1-x²)` and `u = 1-2P`, which is algebraically identical but keeps
/// the `P = P_e` endpoint (where `u = S`) from leaving a square-root-amplified
/// rounding residue. Differences within a few ulps of the endpoint are
/// treated as the endpoint itself.
pub fn disturbance_curve(x: f64, p: f64) -> Result<f64> {
    check_overlap(x)?;
    let bound = helstrom_error_closed(x);
    if !(p >= bound - BOUND_SLACK) {
        return Err(Error::InformationBoundExceeded { p, bound });
    }
    if p > 0.5 + BOUND_SLACK {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p >= 0.5 {
        // inner expression is exactly 1
        return Ok(0.0);
    }
    let s = sine(x);
    let u = 1.0 - 2.0 * p;
    let gap = s - u;
    let gap = if gap <= 4.0 * f64::EPSILON { 0.0 } else { gap };
    let radicand = (s * s * gap * (s + u)).max(0.0);
    let x2 = x * x;
    let inner = 1.0 + x2 * (-1.0 - 4.0 * p + 4.0 * p * p + 2.0 * x2 + 2.0 * radicand.sqrt());
    let d = 0.5 - 0.5 * inner.max(0.0).sqrt();
    Ok(d.clamp(0.0, 0.5))
}

/// Minimum disturbance at maximal information, `½(1 - √(1 - x² + x⁴))`.
pub fn d_at_max_info(x: f64) -> f64 {
    let x2 = x * x;
    0.5 * (1.0 - (1.0 - x2 + x2 * x2).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EavesdropConfig {
    pub x: f64,
    /// Upper bound on Eve's error probability.
    pub p_eve: f64,
    pub probe_dim: usize,
    pub restarts: usize,
    /// First-stage penalty weight; later stages follow [`PenaltySchedule`].
    pub penalty_weight: f64,
    pub seed: u64,
    /// Nelder–Mead iteration budget per penalty stage.
    pub max_iterations: usize,
}

impl EavesdropConfig {
    pub fn new(x: f64, p_eve: f64) -> Result<Self> {
        let cfg = Self {
            x,
            p_eve,
            probe_dim: 4,
            restarts: 20,
            penalty_weight: PenaltySchedule::default().initial_weight,
            seed: 0,
            max_iterations: 60_000,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Eve extracts as much as possible: `p_eve` equal to the Helstrom error.
    pub fn at_max_info(x: f64) -> Result<Self> {
        check_overlap(x)?;
        Self::new(x, helstrom_error_closed(x))
    }

    pub fn validate(&self) -> Result<()> {
        check_overlap(self.x)?;
        let bound = helstrom_error_closed(self.x);
        if !(self.p_eve >= bound - BOUND_SLACK) {
            return Err(Error::InformationBoundExceeded {
                p: self.p_eve,
                bound,
            });
        }
        if self.p_eve > 0.5 + BOUND_SLACK {
            return Err(Error::ProbabilityOutOfRange(self.p_eve));
        }
        if self.probe_dim == 0 || self.restarts == 0 || !(self.penalty_weight > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bad eavesdrop config {self:?}"
            )));
        }
        Ok(())
    }

    fn schedule(&self) -> PenaltySchedule {
        PenaltySchedule {
            initial_weight: self.penalty_weight,
            ..PenaltySchedule::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EavesdropResult {
    pub x: f64,
    pub d: f64,
    pub p_achieved: f64,
    /// `2 x 2·probe_dim` isometry columns stacked as a `2·probe_dim x 2` matrix.
    pub isometry: ComplexMatrix,
    pub probe_dim: usize,
    pub rho_e: [HermitianMatrix; 2],
    pub rho_a: [HermitianMatrix; 2],
    pub converged: bool,
}

/// Outputs of one probe interaction on both signal states.
struct ProbeOutcome {
    d: f64,
    p: f64,
    rho_e: [HermitianMatrix; 2],
    rho_a: [HermitianMatrix; 2],
}

fn probe_outcome(v: &ComplexMatrix, x: f64, probe_dim: usize) -> Result<ProbeOutcome> {
    let e = make_ensemble(x)?;
    let mut rho_e = Vec::with_capacity(2);
    let mut rho_a = Vec::with_capacity(2);
    let mut fidelity = 0.0;
    for i in 0..2 {
        let joint = v.apply(e.state(i))?.projector();
        let a = partial_trace(&joint, Keep::First, (2, probe_dim))?;
        fidelity += 0.5 * a.expectation(e.state(i));
        rho_a.push(a);
        rho_e.push(partial_trace(&joint, Keep::Second, (2, probe_dim))?);
    }
    let p = helstrom_error_of(&rho_e[0], &rho_e[1])?;
    let to_pair = |mut v: Vec<HermitianMatrix>| {
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        [a, b]
    };
    Ok(ProbeOutcome {
        d: 1.0 - fidelity,
        p,
        rho_e: to_pair(rho_e),
        rho_a: to_pair(rho_a),
    })
}

fn isometry_for(params: &[f64], probe_dim: usize) -> Result<ComplexMatrix> {
    orthonormal_columns_from_params(params, 2 * probe_dim, 2)
}

/// Disturbance and Eve's error for one parameter vector.
pub fn evaluate_probe(params: &[f64], x: f64, probe_dim: usize) -> Result<(f64, f64)> {
    let v = isometry_for(params, probe_dim)?;
    let out = probe_outcome(&v, x, probe_dim)?;
    Ok((out.d, out.p))
}

struct RestartOutcome {
    params: Vec<f64>,
    d: f64,
    converged: bool,
}

fn run_restart(cfg: &EavesdropConfig, index: usize) -> RestartOutcome {
    let n = 8 * cfg.probe_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut params: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut simplex = SimplexConfig::new(n);
    simplex.max_iterations = cfg.max_iterations;
    simplex.seed = cfg.seed ^ index as u64;

    let mut stage_converged = false;
    for w in cfg.schedule().weights() {
        let objective = |q: &[f64]| match evaluate_probe(q, cfg.x, cfg.probe_dim) {
            Ok((d, p)) => d + PenaltySchedule::penalty(p - cfg.p_eve, w),
            Err(_) => FAILED_EVALUATION,
        };
        match simplex_minimize(objective, &simplex, &params) {
            Ok(r) => {
                params = r.argmin;
                stage_converged = r.converged;
            }
            Err(_) => stage_converged = false,
        }
    }
    match evaluate_probe(&params, cfg.x, cfg.probe_dim) {
        Ok((d, p)) => RestartOutcome {
            converged: stage_converged && p <= cfg.p_eve + FEASIBILITY_TOL,
            params,
            d,
        },
        Err(_) => RestartOutcome {
            params,
            d: f64::INFINITY,
            converged: false,
        },
    }
}

/// Numerically minimises the disturbance over probe isometries with Eve's
/// error held at or below `cfg.p_eve`.
///
/// Restarts run in parallel. The minimum-`D` converged restart wins, ties going
/// to the lowest restart index; if none converged the minimum-`D` restart is
/// returned with `converged = false`.
pub fn probe_oracle(cfg: &EavesdropConfig) -> Result<EavesdropResult> {
    cfg.validate()?;
    let runs: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(cfg, i))
        .collect();

    let pick = |only_converged: bool| {
        runs.iter()
            .enumerate()
            .filter(|(_, r)| !only_converged || r.converged)
            .fold(None::<(usize, f64)>, |best, (i, r)| match best {
                Some((_, d)) if r.d >= d => best,
                _ => Some((i, r.d)),
            })
            .map(|(i, _)| i)
    };
    let winner = pick(true)
        .or_else(|| pick(false))
        .expect("at least one restart");
    let best = &runs[winner];
    let v = isometry_for(&best.params, cfg.probe_dim)?;
    let out = probe_outcome(&v, cfg.x, cfg.probe_dim)?;
    Ok(EavesdropResult {
        x: cfg.x,
        d: out.d,
        p_achieved: out.p,
        isometry: v,
        probe_dim: cfg.probe_dim,
        rho_e: out.rho_e,
        rho_a: out.rho_a,
        converged: best.converged,
    })
}

/// Counts and rates from a simulated B92 transmission.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct B92Stats {
    pub x: f64,
    pub rounds: u64,
    pub seed: u64,
    pub eve_present: bool,
    pub eve_errors: Option<u64>,
    pub eve_error_rate: Option<f64>,
    pub eve_error_se: Option<f64>,
    pub expected_eve_error: Option<f64>,
    pub detections: u64,
    pub disturbance_rate: f64,
    pub disturbance_se: f64,
    pub expected_disturbance: f64,
}

/// Standard error of a binomial rate.
pub fn binomial_se(rate: f64, n: u64) -> f64 {
    (rate * (1.0 - rate) / n as f64).sqrt()
}

/// Joint outcome law for one sent bit: index `2·fail + guess`.
fn joint_outcomes(eve: &EavesdropResult, bit: usize) -> Result<[f64; 4]> {
    let e = make_ensemble(eve.x)?;
    let eig = hermitian_eigen(&(&eve.rho_e[1] - &eve.rho_e[0]))?;
    let d = eve.probe_dim;
    let mut guess1 = ComplexMatrix::zeros(d, d);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > 0.0 {
            let p = eig.vectors.column(k).projector();
            for i in 0..d {
                for j in 0..d {
                    guess1.set(i, j, guess1.get(i, j) + p.get(i, j));
                }
            }
        }
    }
    let ident = ComplexMatrix::identity(d);
    let guess0 = ComplexMatrix::new(
        d,
        d,
        ident
            .data()
            .iter()
            .zip(guess1.data())
            .map(|(a, b)| a - b)
            .collect(),
    )?;
    let pass = e.density(bit).as_matrix().clone();
    let fail = ComplexMatrix::new(
        2,
        2,
        ComplexMatrix::identity(2)
            .data()
            .iter()
            .zip(pass.data())
            .map(|(a, b)| a - b)
            .collect(),
    )?;
    let out = eve.isometry.apply(e.state(bit))?;
    let mut probs = [0.0; 4];
    for (b, bob) in [&pass, &fail].into_iter().enumerate() {
        for (g, eve_proj) in [&guess0, &guess1].into_iter().enumerate() {
            let amp = tensor_product(bob, eve_proj).apply(&out)?;
            probs[2 * b + g] = amp.norm_sqr();
        }
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Monte Carlo run of the B92 channel, optionally with Eve's probe in line.
///
/// Each round draws a uniform bit and prepares `ψ_bit`. With Eve present the
/// joint law of (Bob's pass/fail test on the signal, Eve's Helstrom guess on
/// her probe) is computed exactly and sampled; the two measurements act on
/// different factors so they commute.
pub fn simulate_b92(
    x: f64,
    rounds: u64,
    eve: Option<&EavesdropResult>,
    seed: u64,
) -> Result<B92Stats> {
    check_overlap(x)?;
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(eve) = eve else {
        // Bob's test on an untouched signal always passes
        for _ in 0..rounds {
            let _bit: bool = rng.random();
        }
        return Ok(B92Stats {
            x,
            rounds,
            seed,
            eve_present: false,
            eve_errors: None,
            eve_error_rate: None,
            eve_error_se: None,
            expected_eve_error: None,
            detections: 0,
            disturbance_rate: 0.0,
            disturbance_se: 0.0,
            expected_disturbance: 0.0,
        });
    };
    if (eve.x - x).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "probe was optimised for overlap {}, not {x}",
            eve.x
        )));
    }
    let laws = [joint_outcomes(eve, 0)?, joint_outcomes(eve, 1)?];
    let expected_eve_error = 0.5 * (laws[0][1] + laws[0][3]) + 0.5 * (laws[1][0] + laws[1][2]);
    let expected_disturbance = 0.5 * (laws[0][2] + laws[0][3]) + 0.5 * (laws[1][2] + laws[1][3]);

    let (mut eve_errors, mut detections) = (0u64, 0u64);
    for _ in 0..rounds {
        let bit = usize::from(rng.random::<bool>());
        let u: f64 = rng.random();
        let law = &laws[bit];
        let mut acc = 0.0;
        let mut outcome = 3;
        for (k, &p) in law.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = k;
                break;
            }
        }
        let (fail, guess) = (outcome / 2, outcome % 2);
        if guess != bit {
            eve_errors += 1;
        }
        if fail == 1 {
            detections += 1;
        }
    }
    let eve_rate = eve_errors as f64 / rounds as f64;
    let dist_rate = detections as f64 / rounds as f64;
    Ok(B92Stats {
        x,
        rounds,
        seed,
        eve_present: true,
        eve_errors: Some(eve_errors),
        eve_error_rate: Some(eve_rate),
        eve_error_se: Some(binomial_se(eve_rate, rounds)),
        expected_eve_error: Some(expected_eve_error),
        detections,
        disturbance_rate: dist_rate,
        disturbance_se: binomial_se(dist_rate, rounds),
        expected_disturbance,
    })
}
