//! Numerical building blocks: double-double arithmetic, adaptive quadrature
//! and bracketed root finding.

pub mod dd;
pub mod quad;
pub mod roots;
