//! Density-matrix simulation of quantum capsule networks.
//!
//! The crate covers the dense linear algebra and state primitives
//! ([`linalg`], [`quantum`]), the parameterized sub-network channels
//! ([`channels`]), classical and quantum dynamic routing ([`routing`]),
//! explicit circuit-level checks of the routing subroutines ([`circuit`]),
//! datasets ([`datasets`]), the trainable network ([`network`]) and the
//! image reconstruction stack ([`reconstruction`]).

pub mod channels;
pub mod circuit;
pub(crate) mod codec;
pub mod datasets;
pub mod error;
pub mod linalg;
pub mod network;
pub mod quantum;
pub mod random;
pub mod reconstruction;
pub mod routing;

pub use error::{Error, Result};
