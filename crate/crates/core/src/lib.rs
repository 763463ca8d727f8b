//! Existence and numerical construction of invariant metrics with
//! prescribed Ricci curvature `Ric g = cT` on compact homogeneous spaces
//! `G/H` whose isotropy summands are pairwise inequivalent.
//!
//! A space is described by its summand dimensions, Killing coefficients and
//! structure constants ([`HomogeneousSpace`]). From these the crate
//! evaluates the scalar curvature functional and its extensions to
//! intermediate subalgebras, enumerates those subalgebras, computes the
//! suprema `sigma(k, T)`, locates a `T`-apical subalgebra and decides
//! whether the sufficient existence condition holds. When it does, the
//! solver maximizes `S` on `{tr_g T = 1}` and checks that the maximizer
//! satisfies `Ric g = cT` with `c > 0`.

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod index_set;
pub mod sigma;
pub mod solver;
pub mod space;
pub mod subalgebra;
pub mod sweep;

pub use catalog::{builtin_space, BUILTIN_NAMES};
pub use curvature::{
    hat_scalar_curvature, metric_trace_of_t, ricci_coefficients, scalar_curvature,
    scalar_gradient, RicciCoefficients,
};
pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use sigma::{
    existence_check, find_t_apical, sigma, sigma_irreducible, sigma_table,
    wallach_existence_check, ExistenceVerdict, SigmaContext, SigmaResult, SigmaSource,
    VerdictStatus,
};
pub use solver::{
    escape_curve_s, maximize_hat_s_on_slice, maximize_s_on_mt, verify_prescribed_ricci,
    OptimizationReport, SolverOptions, VerificationResult,
};
pub use space::{
    trace_q_restricted, HomogeneousSpace, MetricCoefficients, StructureConstants,
    TensorCoefficients,
};
pub use subalgebra::{intermediate_subalgebras, is_bracket_closed, maximal_within, SubalgebraLattice};
