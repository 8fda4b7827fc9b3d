//! Entangling power of few-qubit quantum gates, in three regimes: ideal,
//! quench-averaged over Gaussian parameter disorder, and with local noise
//! channels acting on the inputs.
//!
//! The crate is organized bottom-up: dense complex linear algebra
//! ([`linalg`]), entanglement measures ([`measures`]), input-state
//! manifolds ([`states`]), gate families ([`gates`]), Kraus channels
//! ([`channels`]), a multi-start simplex maximizer ([`optim`]), the power
//! engine itself ([`power`]) and closed-form cross-checks ([`oracles`]).

pub mod channels;
mod error;
pub mod gates;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod oracles;
pub mod power;
pub mod states;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;
