//! Proximal-gradient and projection algorithms together with an analysis
//! engine that certifies whether their iterates form self-contracted
//! sequences, i.e. `d(x_{k3}, x_{k2}) ≤ d(x_{k3}, x_{k1})` for all
//! `k1 ≤ k2 ≤ k3`.

pub mod algorithms;
pub mod analysis;
pub mod error;
pub mod exec;
pub mod oracles;
pub mod point;
pub mod sets;
pub mod trajectory;

pub use error::{Error, Result};
pub use exec::Execution;
pub use point::{distance, Point};
pub use trajectory::{diameter, length, Trajectory, TrajectoryBuilder};
