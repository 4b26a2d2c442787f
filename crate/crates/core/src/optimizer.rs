//! Derivative-free search primitives shared by the oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector, C64};

const INV_PHI: f64 = 0.618_033_988_749_894_8; // 1/phi
const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarSearchResult {
    pub argmax: f64,
    pub value: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`, so the returned midpoint
/// is within `tol / 2` of the maximiser.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<ScalarSearchResult>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "golden section needs lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let eval = |t: f64| -> Result<f64> {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(t))
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut iterations = 0;
    while b - a > tol {
        iterations += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1)?;
        }
    }
    let argmax = 0.5 * (a + b);
    Ok(ScalarSearchResult {
        argmax,
        value: eval(argmax)?,
        iterations,
        bracket: (a, b),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexConfig {
    pub dimension: usize,
    pub max_iterations: usize,
    /// Converged once the spread of simplex values falls below this.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl SimplexConfig {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            max_iterations: 20_000,
            tolerance: 1e-12,
            restarts: 1,
            seed: 0,
            initial_step: 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 || !(self.tolerance > 0.0) || !(self.initial_step > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bad simplex config {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Nelder–Mead minimisation with coefficients (1, 2, 1/2, 1/2).
///
/// After each convergence the simplex is rebuilt around the best vertex
/// and the search continues; the run only counts as converged once a rebuild
/// fails to improve the value by more than `tolerance`. Restart `k > 0`
/// begins from `start` plus a uniform perturbation of width `initial_step`
/// drawn from a generator seeded by `cfg.seed`.
pub fn simplex_minimize<F>(f: F, cfg: &SimplexConfig, start: &[f64]) -> Result<SimplexResult>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    if start.len() != cfg.dimension {
        return Err(Error::DimensionMismatch(format!(
            "start has {} coordinates, config says {}",
            start.len(),
            cfg.dimension
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<SimplexResult> = None;
    for restart in 0..cfg.restarts.max(1) {
        let origin: Vec<f64> = if restart == 0 {
            start.to_vec()
        } else {
            start
                .iter()
                .map(|&s| s + rng.random_range(-cfg.initial_step..cfg.initial_step))
                .collect()
        };
        let run = nelder_mead_with_rebuilds(&f, cfg, &origin);
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn total(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn nelder_mead_with_rebuilds<F>(f: &F, cfg: &SimplexConfig, start: &[f64]) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut fx = total(f(&x));
    let mut used = 0;
    loop {
        let (nx, nfx, iters, ok) = nelder_mead(f, cfg, &x, fx, cfg.max_iterations - used);
        used += iters;
        let improvement = fx - nfx;
        if nfx < fx {
            x = nx;
            fx = nfx;
        }
        if !ok || used >= cfg.max_iterations {
            return SimplexResult {
                argmin: x,
                value: fx,
                converged: false,
                iterations: used,
            };
        }
        if improvement <= cfg.tolerance {
            return SimplexResult {
                argmin: x,
                value: fx,
                converged: true,
                iterations: used,
            };
        }
    }
}

/// One Nelder–Mead run; returns (best point, value, iterations, converged).
fn nelder_mead<F>(
    f: &F,
    cfg: &SimplexConfig,
    start: &[f64],
    f_start: f64,
    budget: usize,
) -> (Vec<f64>, f64, usize, bool)
where
    F: Fn(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    values.push(f_start);
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += cfg.initial_step;
        values.push(total(f(&v)));
        simplex.push(v);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < budget {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (ib, iw, isw) = (order[0], order[n], order[n - 1]);
        if values[iw] - values[ib] < cfg.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &k in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[k]) {
                *c += v;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        for j in 0..n {
            trial[j] = centroid[j] + ALPHA * (centroid[j] - simplex[iw][j]);
        }
        let fr = total(f(&trial));

        if fr < values[ib] {
            for j in 0..n {
                trial2[j] = centroid[j] + GAMMA * (trial[j] - centroid[j]);
            }
            let fe = total(f(&trial2));
            if fe < fr {
                simplex[iw].copy_from_slice(&trial2);
                values[iw] = fe;
            } else {
                simplex[iw].copy_from_slice(&trial);
                values[iw] = fr;
            }
            continue;
        }
        if fr < values[isw] {
            simplex[iw].copy_from_slice(&trial);
            values[iw] = fr;
            continue;
        }
        // contraction, outside if the reflection beat the worst point
        let outside = fr < values[iw];
        for j in 0..n {
            trial2[j] = if outside {
                centroid[j] + RHO * (trial[j] - centroid[j])
            } else {
                centroid[j] + RHO * (simplex[iw][j] - centroid[j])
            };
        }
        let fc = total(f(&trial2));
        if fc < if outside { fr } else { values[iw] } {
            simplex[iw].copy_from_slice(&trial2);
            values[iw] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[ib].clone();
        for k in 0..=n {
            if k == ib {
                continue;
            }
            for j in 0..n {
                simplex[k][j] = best[j] + SIGMA * (simplex[k][j] - best[j]);
            }
            values[k] = total(f(&simplex[k]));
        }
    }

    let ib = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    (simplex[ib].clone(), values[ib], iterations, converged)
}

/// Weight escalation shared by the constrained oracles.
///
/// Stage `k` uses weight `initial_weight * growth^k`. The penalty for a
/// constraint violation `v >= 0` is `w v + (w v)^2`: the linear term keeps the
/// optimum on the constraint even where the objective's slope there is
/// unbounded, the quadratic term dominates for large violations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PenaltySchedule {
    pub initial_weight: f64,
    pub growth: f64,
    pub stages: usize,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self {
            initial_weight: 10.0,
            growth: 10.0,
            stages: 3,
        }
    }
}

impl PenaltySchedule {
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.stages).map(move |k| self.initial_weight * self.growth.powi(k as i32))
    }

    #[inline]
    pub fn penalty(violation: f64, weight: f64) -> f64 {
        let wv = weight * violation.max(0.0);
        wv + wv * wv
    }
}

/// Interprets `params` as `cols` complex columns of length `rows`, laid out
/// column by column as `[re_0..re_{rows-1}, im_0..im_{rows-1}]`, and runs
/// Gram–Schmidt over them in order.
pub fn orthonormal_columns_from_params(
    params: &[f64],
    rows: usize,
    cols: usize,
) -> Result<ComplexMatrix> {
    if cols == 0 || cols > rows || params.len() != 2 * rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} params for a {rows}x{cols} isometry",
            params.len()
        )));
    }
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(cols);
    for chunk in params.chunks_exact(2 * rows) {
        let (re_part, im_part) = chunk.split_at(rows);
        let mut v: Vec<C64> = re_part
            .iter()
            .zip(im_part)
            .map(|(&a, &b)| c(a, b))
            .collect();
        // modified Gram-Schmidt, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let proj: C64 = q.entries().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q.entries()) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let raw = chunk.iter().map(|p| p * p).sum::<f64>().sqrt();
        if !(norm > RANK_TOL * raw.max(1.0)) {
            return Err(Error::RankDeficient(norm));
        }
        let inv = 1.0 / norm;
        basis.push(ComplexVector::new(
            v.into_iter().map(|z| z * inv).collect(),
        )?);
    }
    ComplexMatrix::from_columns(&basis)
}
