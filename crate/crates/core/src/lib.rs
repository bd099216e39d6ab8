//! Achievable rate regions for two-receiver discrete memoryless broadcast
//! channels with a rate-limited feedback link from the weaker receiver.

pub mod channel;
pub mod cli;
pub mod error;
pub mod fm;
pub mod prob;
pub mod region;
pub mod sim;
pub mod simplex;

pub use error::{Error, Result};
