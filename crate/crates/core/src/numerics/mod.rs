//! Numerical building blocks: bracketed root finding, adaptive Runge-Kutta
//! integration with event location, and adaptive Gauss-Kronrod quadrature.

pub mod ode;
pub mod quad;
pub mod root;
