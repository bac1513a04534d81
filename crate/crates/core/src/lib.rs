// Literal tables keep published digits; NaN must fail every range check.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod inversion;
pub mod processes;
pub mod quadrature;
pub mod specfun;
