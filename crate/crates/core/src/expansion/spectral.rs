//! Second-smallest Laplacian eigenvalue and the Cheeger inequalities
//! `λ₂/2 <= h(G) <= sqrt(2·Δ·λ₂)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{ExpansionReport, Method};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SplitMix64;

/// Above this many vertices the dense eigensolver is replaced by restarted
/// Lanczos.
pub const DENSE_LIMIT: usize = 2000;

/// Relative tolerance on the eigenvalue for the iterative solver.
pub const EIGEN_TOL: f64 = 1e-8;

const LANCZOS_STEPS: usize = 60;
const MAX_RESTARTS: usize = 2000;

/// `λ₂` with its eigenvector and the residual `‖Lx − λx‖`.
pub fn dense_fiedler(g: &Graph) -> (f64, Vec<f64>, f64) {
    let n = g.n();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        lap[(v, v)] = g.degree(v) as f64;
    }
    for &(u, v) in g.edges() {
        lap[(u, v)] = -1.0;
        lap[(v, u)] = -1.0;
    }
    let eig = SymmetricEigen::new(lap);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = idx[1.min(n - 1)];
    let lambda = eig.eigenvalues[k];
    let x: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    let residual = residual_norm(g, &x, lambda);
    (lambda, x, residual)
}

fn laplacian_apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for v in 0..g.n() {
        let s: f64 = g.neighbors(v).iter().map(|&w| x[w]).sum();
        out[v] = g.degree(v) as f64 * x[v] - s;
    }
}

fn residual_norm(g: &Graph, x: &[f64], lambda: f64) -> f64 {
    let mut y = vec![0.0; x.len()];
    laplacian_apply(g, x, &mut y);
    let norm: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    y.iter()
        .zip(x)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt()
        / norm.max(f64::MIN_POSITIVE)
}

fn deflate_constant(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|a| *a -= mean);
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

/// Restarted Lanczos with full reorthogonalization on the complement of the
/// constant vector. Returns the smallest Ritz value there (an upper bound on
/// λ₂) and its residual.
pub fn lanczos_lambda2(g: &Graph) -> Result<(f64, f64)> {
    let n = g.n();
    let scale = 2.0 * g.max_degree().max(1) as f64;
    let mut rng = SplitMix64::new(0x5eed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    deflate_constant(&mut start);
    normalize(&mut start);

    let steps = LANCZOS_STEPS.min(n - 1).max(1);
    let mut previous = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for restart in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(steps);
        let mut beta: Vec<f64> = Vec::with_capacity(steps);
        let mut w = vec![0.0; n];
        for j in 0..steps {
            laplacian_apply(g, &basis[j], &mut w);
            let a: f64 = w.iter().zip(&basis[j]).map(|(x, y)| x * y).sum();
            alpha.push(a);
            deflate_constant(&mut w);
            for _ in 0..2 {
                for q in &basis {
                    let dot: f64 = w.iter().zip(q).map(|(x, y)| x * y).sum();
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
                }
            }
            if j + 1 == steps {
                break;
            }
            let b = normalize(&mut w);
            if b < 1e-12 * scale {
                break;
            }
            beta.push(b);
            basis.push(w.clone());
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (k, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let coeffs: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let mut ritz = vec![0.0; n];
        for (c, q) in coeffs.iter().zip(&basis) {
            ritz.iter_mut().zip(q).for_each(|(x, y)| *x += c * y);
        }
        deflate_constant(&mut ritz);
        normalize(&mut ritz);
        residual = residual_norm(g, &ritz, theta);
        let settled = (previous - theta).abs() <= EIGEN_TOL * theta.abs().max(1e-300);
        if residual <= EIGEN_TOL * scale || (settled && restart > 0) {
            return Ok((theta, residual));
        }
        previous = theta;
        start = ritz;
    }
    Err(Error::NonConvergence {
        iterations: MAX_RESTARTS * steps,
        residual,
    })
}

/// Cheeger bounds from `λ₂`, widened by the eigensolver residual.
pub fn cheeger_spectral_bounds(g: &Graph) -> Result<ExpansionReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Cheeger constant needs at least 2 vertices, got {n}"
        )));
    }
    if !g.is_connected() {
        return Ok(ExpansionReport {
            method: Method::Spectral,
            lower: 0.0,
            upper: 0.0,
            lower_exact: None,
            upper_exact: None,
            witness_cut: None,
            residual: Some(0.0),
        });
    }
    let (lambda, residual) = if n <= DENSE_LIMIT {
        let (l, _, r) = dense_fiedler(g);
        (l, r)
    } else {
        lanczos_lambda2(g)?
    };
    let delta = g.max_degree() as f64;
    let slack = residual + 64.0 * f64::EPSILON * 2.0 * delta;
    let lower = ((lambda - slack) / 2.0).max(0.0);
    let upper = (2.0 * delta * (lambda + slack).max(0.0)).sqrt();
    Ok(ExpansionReport {
        method: Method::Spectral,
        lower,
        upper,
        lower_exact: None,
        upper_exact: None,
        witness_cut: None,
        residual: Some(residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GenSpec};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    #[test]
    fn c6_spectrum() {
        let (l, _, r) = dense_fiedler(&cycle(6));
        let closed_form = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / 6.0).cos();
        assert!((l - closed_form).abs() < 1e-12);
        assert!((l - 1.0).abs() < 1e-12);
        assert!(r < 1e-10);
        let b = cheeger_spectral_bounds(&cycle(6)).unwrap();
        assert!((b.lower - 0.5).abs() < 1e-9);
        assert!((b.upper - 2.0).abs() < 1e-6);
    }

    #[test]
    fn k4_spectrum() {
        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        let b = cheeger_spectral_bounds(&k4).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-9);
        assert!((b.upper - 24f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)], None).unwrap();
        let b = cheeger_spectral_bounds(&g).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn lanczos_matches_dense() {
        for (n, seed) in [(200usize, 1u64), (400, 2)] {
            let g = generate(&GenSpec::new(Family::RandomRegular, n).with_degree(3).with_seed(seed))
                .unwrap();
            let (dense, _, _) = dense_fiedler(&g);
            let (iter, res) = lanczos_lambda2(&g).unwrap();
            assert!(
                (dense - iter).abs() <= 1e-6 * dense.max(1.0),
                "dense {dense} vs lanczos {iter} (res {res})"
            );
        }
        let c = cycle(64);
        let closed_form = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / 64.0).cos();
        let (iter, _) = lanczos_lambda2(&c).unwrap();
        assert!((iter - closed_form).abs() < 1e-6, "{iter} vs {closed_form}");
    }
}
