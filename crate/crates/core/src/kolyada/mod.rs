//! Triangular maps over the Feigenbaum logistic map whose fibers are scaled tents.

pub mod envelope;
pub mod feigenbaum;
pub mod fiber;
pub mod height;
pub mod nseq;
pub mod pairs;
pub mod triangular;

pub use envelope::*;
pub use feigenbaum::*;
pub use fiber::*;
pub use height::*;
pub use nseq::*;
pub use pairs::*;
pub use triangular::*;
