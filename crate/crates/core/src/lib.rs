//! Hypercomplex analyticity, checked numerically.
//!
//! `hyperan` implements quaternion and octonion arithmetic and four ways of
//! asking whether a function of a hypercomplex variable is "analytic":
//!
//! | operator | condition |
//! |---|---|
//! | holomorphy trio | `∂₀f = −i∂₁f = −j∂₂f = −k∂₃f` |
//! | global left derivative | `∂_q = ½(∂₀ − (i∂₁ + j∂₂ + k∂₃)/3)` |
//! | Cauchy–Riemann–Fueter | `(∂₀ + i∂₁ + j∂₂ + k∂₃) f = 0` |
//! | local | `½(∂₀ + ι∂_x) f = 0`, `ι = x⃗/|x⃗|` at the point itself |
//!
//! The local condition is the only one whose solutions include every
//! right-coefficient polynomial `Σ qⁿ cₙ`, and it carries over verbatim to
//! octonions.
//!
//! ```
//! use hyperan::prelude::*;
//!
//! let p = random_right_poly(11, Algebra::Quaternion, 4, 1.0).unwrap();
//! let f = FunctionSpec::RightPoly(p);
//! let at = Hypercomplex::quaternion(0.5, 0.8, -0.3, 0.6);
//!
//! let local = apply_local_conj_radial(&f, &at, 1e-4).unwrap();
//! let fueter = apply_crf(&f, &at, 1e-4).unwrap();
//! assert!(local.norm() < 1e-6);
//! assert!(fueter.norm() > 1e-2);
//! ```
//!
//! Module map:
//!
//! * [`algebra`]: Cayley–Dickson quaternions and octonions.
//! * [`function`]: function families and their JSON form.
//! * [`operators`]: finite-difference operators.
//! * [`classify`]: grids, residual statistics, verdicts, convergence orders.
//! * [`report`]: jobs behind the `hyperan` CLI and deterministic output.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod function;
pub mod operators;
pub mod report;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::algebra::{
        associator, basis_table, commutator, unit_imaginary, Algebra, BasisTable, Hypercomplex,
        ImaginaryDirection, SignedIndex,
    };
    pub use crate::classify::{
        classify, estimate_convergence_order, residual_stats, sample_grid, ClassifyConfig,
        GridSpec, OrderEstimate, RegularityReport, ResidualStats, Verdict,
    };
    pub use crate::function::{
        field_fn, random_right_poly, BuiltinName, CanonicalAxis, CanonicalPolynomial, Field,
        FunctionSpec, PlanePolynomial, RightPolynomial,
    };
    pub use crate::operators::{
        apply, apply_crf, apply_global_left, apply_holomorphy_trio, apply_local_conj_coordinate,
        apply_local_conj_radial, apply_local_derivative, apply_third_order_probe, partial_fd,
        OperatorKind, OperatorValue,
    };
    pub use crate::{Error, Result};
}
