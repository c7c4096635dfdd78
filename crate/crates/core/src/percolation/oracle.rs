//! Closed-form percolation quantities on the infinite `d`-regular tree, and
//! the sprinkling decomposition `1 − p = (1 − p1)(1 − ε)`.

use crate::error::{Error, Result};

/// Probability that the root of the infinite `d`-regular tree is joined by an
/// open path to some vertex at depth `radius`.
///
/// With `w_k` the probability that a non-root vertex reaches `k` levels below
/// itself through its `d − 1` children: `w_0 = 1`,
/// `w_k = 1 − (1 − p·w_{k−1})^{d−1}`, and the root, having `d` children,
/// survives to depth `R >= 1` with probability `1 − (1 − p·w_{R−1})^d`.
pub fn tree_survival_oracle(d: usize, p: f64, radius: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("tree degree must be >= 2, got {d}")));
    }
    check_probability(p)?;
    if radius == 0 {
        return Ok(1.0);
    }
    let mut w = 1.0f64;
    for _ in 1..radius {
        w = 1.0 - (1.0 - p * w).powi(d as i32 - 1);
    }
    Ok(1.0 - (1.0 - p * w).powi(d as i32))
}

/// Critical bond probability `1/(d−1)` of the `d`-regular tree.
pub fn tree_critical_probability(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("tree degree must be >= 2, got {d}")));
    }
    Ok(1.0 / (d - 1) as f64)
}

/// `p` with `1 − p = (1 − p1)(1 − ε)`.
pub fn sprinkle_combined(p1: f64, epsilon: f64) -> Result<f64> {
    check_probability(p1)?;
    check_probability(epsilon)?;
    Ok(1.0 - (1.0 - p1) * (1.0 - epsilon))
}

/// `p1` with `1 − p = (1 − p1)(1 − ε)`; needs `ε <= p` and `ε < 1`.
pub fn sprinkle_base(p: f64, epsilon: f64) -> Result<f64> {
    check_probability(p)?;
    check_probability(epsilon)?;
    if epsilon >= 1.0 || epsilon > p {
        return Err(Error::InvalidArgument(format!(
            "sprinkling needs ε <= p and ε < 1 (p={p}, ε={epsilon})"
        )));
    }
    Ok(1.0 - (1.0 - p) / (1.0 - epsilon))
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probability must lie in [0, 1], got {p}")))
    }
}
