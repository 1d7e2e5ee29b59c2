//! Customer preference advisor: a sigmoid backpropagation network, a
//! forward-chaining rule shell that blends rule conclusions with network
//! scores, and the contingency-table statistics used to evaluate both.

pub mod dataio;
pub mod error;
pub mod expert;
pub mod nnet;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
