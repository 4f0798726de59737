//! Independent numerical oracles used to validate the closed-form dynamics
//! and the QP solver. Everything here is deliberately built from first
//! principles (quadrature, ODE integration, exhaustive enumeration) and never
//! touches the implementations it checks.

pub mod kepler;
pub mod qp_enum;
pub mod quadrature;
pub mod two_body;
