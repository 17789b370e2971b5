//! Numerical toolkit for beta-Hermite random-matrix ensembles and
//! Tracy-Widom largest-eigenvalue statistics.
//!
//! The crate is organized around five subsystems:
//!
//! - [`tridiag`]: deterministic symmetric-tridiagonal eigenvalue machinery
//!   (Sturm counts, bisection, Householder reduction of dense symmetric
//!   matrices).
//! - [`ensembles`]: seeded samplers for the tridiagonal beta-Hermite model,
//!   dense GOE matrices and the stochastic Airy operator, plus the edge
//!   scaling and the joint eigenvalue log-density.
//! - [`painleve`]: special functions (Airy, log-gamma, incomplete beta) and
//!   the Painleve II pipeline producing the Tracy-Widom distribution
//!   functions F1, F2, F4.
//! - [`tails`]: closed-form tail asymptotics, concentration bounds and the
//!   infinite-divisibility diagnostics built on them.
//! - [`montecarlo`]: reproducible parallel batch sampling, empirical tail
//!   estimation with exact confidence intervals, tail-exponent fits and
//!   goodness-of-fit statistics.
//!
//! [`verify`] ties everything together into a self-checking report used by
//! the command-line `verify` subcommand and the acceptance test suite.

pub mod ensembles;
pub mod montecarlo;
pub mod painleve;
pub mod tails;
pub mod tridiag;
pub mod verify;
