//! Verify, certify, and refute isometry of (quantum) group actions on
//! finite metric spaces.
//!
//! A quantum action on an `n`-point space is carried by a magic biunitary:
//! an `n × n` grid of projections on a representation space whose rows and
//! columns sum to the identity. The grid acts isometrically exactly when it
//! commutes with the distance matrix, and this crate makes both sides of
//! that equivalence executable:
//!
//! * [`magic::MagicUnitary::check_commutation`] decides the commutation
//!   criterion along two independent routes and cross-validates them;
//! * [`transport`] builds the max-flow couplings that certify the Lipschitz
//!   contraction `L_d((ι⊗ω)α(f)) ≤ L_d(f)` pair by pair;
//! * [`isometry::witness_search`] refutes non-isometric grids with an
//!   explicit state and function whose defect is positive;
//! * [`group`] handles the classical shadow: isometry groups of finite
//!   metric spaces and largest isometric subgroups;
//! * [`m2cc`] works the quantum space `M₂(ℂ) ⊕ ℂ ⊕ ℂ` end to end, from the
//!   represented symmetry algebra to the admissibility criterion `x = y = 0`.
//!
//! The `qmi` binary exposes all of this behind `metric`, `magic`,
//! `transport`, `decide`, `group`, and `m2cc` subcommands; every run is
//! seeded and reproducible.

// indexed loops mirror the matrix formulas throughout
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod group;
pub mod instances;
pub mod isometry;
pub mod json;
pub mod m2cc;
pub mod magic;
pub mod matrix;
pub mod metric;
pub mod transport;

/// Default numerical tolerance wherever one is not stated explicitly.
pub const DEFAULT_TOL: f64 = 1e-9;
