//! Percolation laboratory for finite bounded-degree graphs: rooted balls and
//! their canonical certificates, the local metric, expansion bounds, Menger
//! flows, Bernoulli bond percolation, and empirical local weak limits.

pub mod ball;
pub mod canon;
pub mod error;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod locallimit;
pub mod percolation;
pub mod rng;

pub use ball::{extract_ball, metric_d, rooted_isomorphic, Agreement, RootedBall, RootedDistance};
pub use canon::Certificate;
pub use error::{Error, Result};
pub use generators::{generate, Family, GenSpec};
pub use graph::Graph;
