//! Quantumness measures for a pair of nonorthogonal pure states.
//!
//! Every measure is a function of the overlap `x = ⟨ψ0|ψ1⟩ ∈ [0, 1]` and
//! comes as a closed form plus an independent numerical oracle:
//!
//! - [`ensemble`]: the canonical pair and its Helstrom error.
//! - [`capacity`]: single-signal capacity C1, collective capacity C∞ and
//!   their gap Q.
//! - [`tradeoff`]: minimum disturbance at given eavesdropper error, a probe
//!   optimiser, and a B92 Monte Carlo.
//! - [`cloning`]: optimal global and local cloning fidelities with a
//!   constrained-search oracle.
//! - [`optimizer`] and [`linalg`]: the supporting numerics.
//! - [`report`]: aggregate reports, curves, maxima and verification.

// `!(a > b)` is used on purpose so NaN lands in the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod cloning;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod report;
pub mod tradeoff;

pub use capacity::{
    accessible_info_oracle, c1_closed, c_inf_closed, capacity_report, holevo_prior_oracle,
    quantumness_q, CapacityReport,
};
pub use cloning::{
    cloning_oracle, evaluate_clone_pair, global_fidelity_closed, local_fidelity_closed,
    CloneCandidate, CloneObjective,
};
pub use ensemble::{
    check_overlap, decision_error, helstrom_error, helstrom_error_closed, helstrom_error_of,
    helstrom_measurement, make_ensemble, overlap_from_theta_degrees, TwoStateEnsemble,
};
pub use error::{Error, Result};
pub use linalg::{
    binary_entropy, hermitian_eigen, partial_trace, tensor_product, trace_norm,
    von_neumann_entropy, ComplexMatrix, ComplexVector, HermitianMatrix, Keep,
};
pub use optimizer::{
    golden_section_max, orthonormal_columns_from_params, simplex_minimize, PenaltySchedule,
    ScalarSearchResult, SimplexConfig, SimplexResult,
};
pub use report::{
    maximize, measure_curve, tradeoff_curve, verify, CurveRow, MaximizeReport, MaximizeTarget,
    Measure, MeasureReport, VerifyBudget, VerifyReport, VerifyTarget,
};
pub use tradeoff::{
    binomial_se, d_at_max_info, disturbance_curve, probe_oracle, simulate_b92, B92Stats,
    EavesdropConfig, EavesdropResult,
};
