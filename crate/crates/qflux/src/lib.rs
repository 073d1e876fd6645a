//! Quantum hydrodynamics in one dimension: probability flux, diffusion flux,
//! osmotic velocity and the flow/diffusion split of the kinetic energy, for
//! analytic wave packets and numerically propagated states.

// `!(x > 0.0)` style guards are deliberate throughout: they reject NaN along
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod field;
pub mod hydro;
pub mod oracles;
pub mod packets;
pub mod propagator;
pub mod scenario;
pub mod specfun;
