pub mod eos;
pub mod error;
pub mod flux;
pub mod lcd;
pub mod limiter;
pub mod weno;
pub mod solver;
pub mod problems;
pub mod snapshot;
pub mod bench;
