//! Exact q-series arithmetic for partition functions of symplectic group actions on
//! abelian surfaces, eta products, the weak Jacobi form `phi_{-2,1}`, and BPS counts.

pub mod bps;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod eta;
pub mod jacobi;
pub mod local;
pub mod modular;
pub mod series;
pub mod tables;

pub use error::{Error, Result};
pub use eta::EtaProduct;
pub use series::{IntSeries, LaurentPoly, TwoVarSeries};
