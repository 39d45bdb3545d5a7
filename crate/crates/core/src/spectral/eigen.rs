use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::perm_rep::ComponentGraph;

/// Combinatorial Laplacian `L = D - A`, multi-edges counted with multiplicity.
pub fn laplacian(graph: &ComponentGraph) -> DMatrix<f64> {
    let n = graph.vertex_count();
    let mut l = DMatrix::zeros(n, n);
    for &(a, b) in graph.local_edges() {
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
    }
    l
}

/// Eigenvalues of the Laplacian in ascending order.
pub fn laplacian_spectrum(graph: &ComponentGraph) -> Vec<f64> {
    let mut ev: Vec<f64> = laplacian(graph)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Second-smallest Laplacian eigenvalue and a unit eigenvector for it
/// (local coordinates, sign fixed so the first nonzero entry is positive).
pub fn fiedler(graph: &ComponentGraph) -> Result<(f64, Vec<f64>)> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let eig = SymmetricEigen::new(laplacian(graph));
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = idx[1];
    let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    // project out the constant vector, which the solver only removes up to rounding
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * norm) {
        let s = first.signum() / norm;
        v.iter_mut().for_each(|x| *x *= s);
    }
    Ok((eig.eigenvalues[k].max(0.0), v))
}

/// `λ₁(X)`: the minimum over mean-zero `f ≠ 0` of `Σ_{edges}|f(x)-f(y)|² / Σ f(x)²`.
pub fn lambda1(graph: &ComponentGraph) -> Result<f64> {
    fiedler(graph).map(|(l, _)| l)
}
