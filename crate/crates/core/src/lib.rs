//! Exact shock solutions of the 1D barotropic and full compressible Euler
//! equations, Rankine-Hugoniot residuals and Hugoniot solvers, energy and
//! dissipation-potential bookkeeping, a first-order finite-volume oracle and
//! a weak-form residual checker.
//!
//! Sign conventions used throughout the crate: the jump bracket is
//! `[[q]] = q_right - q_left`, the unit normal `n` points from the left state
//! to the right state and `v_s` is the interface speed measured along `n`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eos;
pub mod error;
pub mod fv_solver;
pub mod lagrangian_maps;
pub mod quadrature;
pub mod rh;
pub mod shock1d;
pub mod weakcheck;

pub use eos::{FluidState, GasModel};
pub use error::{Error, Result};
pub use rh::{RhResidual, ShockJump};
pub use shock1d::{Domain, PiecewiseShockSolution};
