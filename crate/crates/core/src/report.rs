//! Aggregate reports, curves, maxima searches and oracle verification.
//!
//! These are the library operations behind every number the CLI prints.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::capacity::{
    accessible_info_oracle, c1_closed, c_inf_closed, holevo_prior_oracle, quantumness_q,
};
use crate::cloning::{
    cloning_oracle, global_fidelity_closed, local_fidelity_closed, CloneObjective,
};
use crate::ensemble::{check_overlap, helstrom_error, helstrom_error_closed, make_ensemble};
use crate::error::{Error, Result};
use crate::optimizer::{golden_section_max, ScalarSearchResult};
use crate::tradeoff::{d_at_max_info, disturbance_curve, probe_oracle, EavesdropConfig};

/// Tolerance for the grid-sweep capacity oracles.
pub const CAPACITY_TOL: f64 = 1e-4;
/// Tolerance for the simplex-driven probe and cloning oracles.
pub const SEARCH_TOL: f64 = 2e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub x: f64,
    pub p_e: f64,
    pub c1: f64,
    pub c_inf: f64,
    pub q: f64,
    pub d_at_mi: f64,
    pub f_g: f64,
    pub f_l: f64,
}

impl MeasureReport {
    pub fn at(x: f64) -> Result<Self> {
        let e = make_ensemble(x)?;
        Ok(Self {
            x,
            p_e: helstrom_error(&e),
            c1: c1_closed(x),
            c_inf: c_inf_closed(x),
            q: quantumness_q(x),
            d_at_mi: d_at_max_info(x),
            f_g: global_fidelity_closed(x),
            f_l: local_fidelity_closed(x),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Pe,
    C1,
    Cinf,
    Q,
    Dmi,
    Fg,
    Fl,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Pe,
        Measure::C1,
        Measure::Cinf,
        Measure::Q,
        Measure::Dmi,
        Measure::Fg,
        Measure::Fl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Pe => "pe",
            Measure::C1 => "c1",
            Measure::Cinf => "cinf",
            Measure::Q => "q",
            Measure::Dmi => "dmi",
            Measure::Fg => "fg",
            Measure::Fl => "fl",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Measure::Pe => helstrom_error_closed(x),
            Measure::C1 => c1_closed(x),
            Measure::Cinf => c_inf_closed(x),
            Measure::Q => quantumness_q(x),
            Measure::Dmi => d_at_max_info(x),
            Measure::Fg => global_fidelity_closed(x),
            Measure::Fl => local_fidelity_closed(x),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub x: f64,
    pub value: f64,
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    Ok(())
}

/// `steps + 1` evenly spaced overlaps from 0 to 1 inclusive.
pub fn overlap_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

pub fn measure_curve(measure: Measure, steps: usize) -> Result<Vec<CurveRow>> {
    check_steps(steps)?;
    Ok(overlap_grid(steps)
        .into_iter()
        .map(|x| CurveRow {
            x,
            value: measure.eval(x),
        })
        .collect())
}

/// `D(P)` at fixed overlap for `steps + 1` values of `P` from `P_e` to ½.
/// Rows carry `P` in the `x` slot.
pub fn tradeoff_curve(x: f64, steps: usize) -> Result<Vec<CurveRow>> {
    check_overlap(x)?;
    check_steps(steps)?;
    let pe = helstrom_error_closed(x);
    if !(pe < 0.5) {
        return Err(Error::IndistinguishableEnsemble);
    }
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            let p = pe * (1.0 - t) + 0.5 * t;
            Ok(CurveRow {
                x: p,
                value: disturbance_curve(x, p)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximizeTarget {
    Q,
    Dmi,
    FgDeficit,
    FlDeficit,
}

impl MaximizeTarget {
    pub fn name(self) -> &'static str {
        match self {
            MaximizeTarget::Q => "q",
            MaximizeTarget::Dmi => "dmi",
            MaximizeTarget::FgDeficit => "fg-deficit",
            MaximizeTarget::FlDeficit => "fl-deficit",
        }
    }

    /// Overlap at which the two states are reported to be "most quantum".
    pub fn expected_argmax(self) -> f64 {
        match self {
            MaximizeTarget::Q | MaximizeTarget::Dmi => std::f64::consts::FRAC_1_SQRT_2,
            MaximizeTarget::FgDeficit => 1.0 / 3f64.sqrt(),
            MaximizeTarget::FlDeficit => 0.5,
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            MaximizeTarget::Q => quantumness_q(x),
            MaximizeTarget::Dmi => d_at_max_info(x),
            MaximizeTarget::FgDeficit => 1.0 - global_fidelity_closed(x),
            MaximizeTarget::FlDeficit => 1.0 - local_fidelity_closed(x),
        }
    }
}

impl FromStr for MaximizeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            MaximizeTarget::Q,
            MaximizeTarget::Dmi,
            MaximizeTarget::FgDeficit,
            MaximizeTarget::FlDeficit,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown maximize target {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximizeReport {
    pub measure: MaximizeTarget,
    #[serde(flatten)]
    pub search: ScalarSearchResult,
    pub expected_argmax: f64,
    pub deviation: f64,
}

/// Golden-section search for the most-quantum overlap on `[0.01, 0.99]`.
pub fn maximize(target: MaximizeTarget, tol: f64) -> Result<MaximizeReport> {
    let search = golden_section_max(|x| target.eval(x), 0.01, 0.99, tol)?;
    let expected_argmax = target.expected_argmax();
    Ok(MaximizeReport {
        measure: target,
        search,
        expected_argmax,
        deviation: (search.argmax - expected_argmax).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTarget {
    C1,
    Cinf,
    Tradeoff,
    CloneGlobal,
    CloneLocal,
}

impl VerifyTarget {
    pub fn name(self) -> &'static str {
        match self {
            VerifyTarget::C1 => "c1",
            VerifyTarget::Cinf => "cinf",
            VerifyTarget::Tradeoff => "tradeoff",
            VerifyTarget::CloneGlobal => "clone-global",
            VerifyTarget::CloneLocal => "clone-local",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            VerifyTarget::C1 | VerifyTarget::Cinf => CAPACITY_TOL,
            _ => SEARCH_TOL,
        }
    }
}

impl FromStr for VerifyTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            VerifyTarget::C1,
            VerifyTarget::Cinf,
            VerifyTarget::Tradeoff,
            VerifyTarget::CloneGlobal,
            VerifyTarget::CloneLocal,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown verify target {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyBudget {
    pub angle_steps: usize,
    pub prior_steps: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Eve's error bound for the tradeoff target; `None` means maximal information.
    pub p_eve: Option<f64>,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        Self {
            angle_steps: 1000,
            prior_steps: 1000,
            restarts: 40,
            seed: 0,
            p_eve: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub target: VerifyTarget,
    pub x: f64,
    pub closed: f64,
    pub oracle: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Eve's achieved error (tradeoff) or the maximising prior (cinf).
    pub auxiliary: Option<f64>,
    /// Whether the search converged / found a feasible point.
    pub converged: bool,
}

/// Runs the oracle for `target` and compares it against the closed form.
pub fn verify(target: VerifyTarget, x: f64, budget: &VerifyBudget) -> Result<VerifyReport> {
    check_overlap(x)?;
    let (closed, oracle, auxiliary, converged) = match target {
        VerifyTarget::C1 => {
            let v = accessible_info_oracle(x, budget.angle_steps, budget.prior_steps)?;
            (c1_closed(x), v, None, true)
        }
        VerifyTarget::Cinf => {
            let (v, p) = holevo_prior_oracle(x, budget.prior_steps)?;
            (c_inf_closed(x), v, Some(p), true)
        }
        VerifyTarget::Tradeoff => {
            let mut cfg = match budget.p_eve {
                Some(p) => EavesdropConfig::new(x, p)?,
                None => EavesdropConfig::at_max_info(x)?,
            };
            cfg.restarts = budget.restarts;
            cfg.seed = budget.seed;
            let r = probe_oracle(&cfg)?;
            (
                disturbance_curve(x, cfg.p_eve)?,
                r.d,
                Some(r.p_achieved),
                r.converged,
            )
        }
        VerifyTarget::CloneGlobal | VerifyTarget::CloneLocal => {
            let (objective, closed) = if target == VerifyTarget::CloneGlobal {
                (CloneObjective::Global, global_fidelity_closed(x))
            } else {
                (CloneObjective::Local, local_fidelity_closed(x))
            };
            let c = cloning_oracle(x, objective, budget.restarts, budget.seed)?;
            let v = if objective == CloneObjective::Global {
                c.f_global
            } else {
                c.f_local
            };
            (closed, v, Some(c.marginal_residual), c.feasible)
        }
    };
    let deviation = (oracle - closed).abs();
    let tolerance = target.tolerance();
    Ok(VerifyReport {
        target,
        x,
        closed,
        oracle,
        deviation,
        tolerance,
        pass: deviation <= tolerance && converged,
        auxiliary,
        converged,
    })
}
