//! The two-state ensemble and its minimum-error discrimination.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, trace_norm, ComplexMatrix, ComplexVector, HermitianMatrix};

/// Checks `x ∈ [0, 1]`.
pub fn check_overlap(x: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::OverlapOutOfRange(x))
    }
}

/// `x = cos θ` for an angle given in degrees.
pub fn overlap_from_theta_degrees(theta_deg: f64) -> f64 {
    theta_deg.to_radians().cos()
}

/// `√(1 - x²)`, the sine of the angle between the states.
#[inline]
pub(crate) fn sine(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// Two equiprobable pure states `ψ0 = (1, 0)` and `ψ1 = (x, √(1-x²))`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoStateEnsemble {
    pub x: f64,
    pub theta: f64,
    pub psi0: ComplexVector,
    pub psi1: ComplexVector,
    pub rho0: HermitianMatrix,
    pub rho1: HermitianMatrix,
}

impl TwoStateEnsemble {
    pub fn new(x: f64) -> Result<Self> {
        check_overlap(x)?;
        let psi0 = ComplexVector::from_real(&[1.0, 0.0])?;
        let psi1 = ComplexVector::from_real(&[x, sine(x)])?;
        Ok(Self {
            x,
            theta: x.acos(),
            rho0: psi0.projector(),
            rho1: psi1.projector(),
            psi0,
            psi1,
        })
    }

    /// Prior probabilities; fixed at one half each.
    pub fn priors(&self) -> (f64, f64) {
        (0.5, 0.5)
    }

    pub fn state(&self, i: usize) -> &ComplexVector {
        match i {
            0 => &self.psi0,
            1 => &self.psi1,
            _ => panic!("ensemble has two states, asked for {i}"),
        }
    }

    pub fn density(&self, i: usize) -> &HermitianMatrix {
        match i {
            0 => &self.rho0,
            1 => &self.rho1,
            _ => panic!("ensemble has two states, asked for {i}"),
        }
    }
}

pub fn make_ensemble(x: f64) -> Result<TwoStateEnsemble> {
    TwoStateEnsemble::new(x)
}

/// Helstrom error `½(1 - √(1-x²))` of the closed form.
pub fn helstrom_error_closed(x: f64) -> f64 {
    0.5 * (1.0 - sine(x))
}

/// Minimum error `½ - ¼ tr|ρ1 - ρ0|` for two equiprobable states, pure or mixed.
pub fn helstrom_error_of(rho0: &HermitianMatrix, rho1: &HermitianMatrix) -> Result<f64> {
    Ok(0.5 - 0.25 * trace_norm(&(rho1 - rho0))?)
}

/// Smallest achievable error probability for the ensemble.
///
/// Returns the closed form; in debug builds the trace-norm route is
/// evaluated too and must agree to `1e-10`.
pub fn helstrom_error(e: &TwoStateEnsemble) -> f64 {
    let closed = helstrom_error_closed(e.x);
    debug_assert!({
        let via_trace = helstrom_error_of(&e.rho0, &e.rho1).expect("projectors are hermitian");
        (closed - via_trace).abs() <= 1e-10
    });
    closed
}

/// Optimal two-outcome projective measurement.
///
/// Column `k` is the basis vector whose click means "guess ψ_k": the
/// eigenvector of `ρ1 - ρ0` with negative eigenvalue comes first.
pub fn helstrom_measurement(e: &TwoStateEnsemble) -> Result<ComplexMatrix> {
    if e.x >= 1.0 {
        return Err(Error::IndistinguishableEnsemble);
    }
    let eig = hermitian_eigen(&(&e.rho1 - &e.rho0))?;
    // descending order: column 0 is the positive eigenvalue
    ComplexMatrix::from_columns(&[eig.vectors.column(1), eig.vectors.column(0)])
}

/// Average error of the rule "outcome k means state k" by direct
/// enumeration of both preparations and both outcomes.
pub fn decision_error(e: &TwoStateEnsemble, basis: &ComplexMatrix) -> f64 {
    let (p0, p1) = e.priors();
    let mut err = 0.0;
    for (i, prior) in [(0, p0), (1, p1)] {
        for k in 0..2 {
            if k != i {
                err += prior * basis.column(k).inner(e.state(i)).norm_sqr();
            }
        }
    }
    err
}
