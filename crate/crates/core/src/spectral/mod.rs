//! Isoperimetric and spectral diagnostics of component graphs.
//!
//! All quotients sum over unordered edges, so at `p = 2` the p-Poincaré
//! constant is the Laplacian eigenvalue `λ₁` and the Cheeger bounds
//! `h²/(2k) <= λ₁ <= 2h` hold with their usual constants.

mod cheeger;
mod eigen;
mod poincare;

pub use cheeger::{cheeger_exact, cheeger_sweep, edge_boundary, CheegerCut, Ratio, EXHAUSTIVE_CAP};
pub use eigen::{fiedler, lambda1, laplacian, laplacian_spectrum};
pub use poincare::{p_poincare_constant, p_rayleigh_quotient, PoincareEstimate, PoincareOptions};

use serde::Serialize;

use crate::error::Result;
use crate::perm_rep::ComponentGraph;

/// Tolerance for the Cheeger-inequality checks.
pub const CHEEGER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PConstant {
    pub p: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub component: usize,
    pub size: usize,
    pub degree: usize,
    pub regular: bool,
    /// exact `h` when `cheeger_exact`, otherwise the sweep upper bound
    pub cheeger: Ratio,
    pub cheeger_exact: bool,
    pub lambda1: f64,
    pub p_constants: Vec<PConstant>,
}

impl SpectralReport {
    /// Certified lower bound on `h`: the exact value, or `λ₁/2` from `λ₁ <= 2h`
    /// when only a sweep estimate (an upper bound) is available.
    pub fn cheeger_lower_bound(&self) -> f64 {
        if self.cheeger_exact {
            self.cheeger.to_f64()
        } else {
            self.lambda1 / 2.0
        }
    }

    /// Invariants of the report; the Cheeger bounds are only checked for
    /// regular graphs with exact `h`.
    pub fn is_consistent(&self) -> bool {
        let nonneg = self.lambda1 >= 0.0 && self.p_constants.iter().all(|c| c.value >= 0.0);
        let bounds = !(self.regular && self.cheeger_exact)
            || cheeger_bounds_hold(self.cheeger.to_f64(), self.lambda1, self.degree);
        nonneg && bounds
    }
}

fn cheeger_bounds_hold(h: f64, lambda1: f64, k: usize) -> bool {
    h * h / (2.0 * k as f64) <= lambda1 + CHEEGER_TOL && lambda1 <= 2.0 * h + CHEEGER_TOL
}

/// Full spectral row for one connected component graph with at least two vertices.
pub fn spectral_report(
    graph: &ComponentGraph,
    component: usize,
    ps: &[f64],
    cap: usize,
    opts: &PoincareOptions,
) -> Result<SpectralReport> {
    let lambda1 = lambda1(graph)?;
    let (cut, exact) = if graph.vertex_count() <= cap {
        (cheeger_exact(graph, cap)?, true)
    } else {
        (cheeger_sweep(graph)?, false)
    };
    let p_constants = ps
        .iter()
        .map(|&p| p_poincare_constant(graph, p, opts).map(|e| PConstant { p, value: e.value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralReport {
        component,
        size: graph.vertex_count(),
        degree: graph.degree(),
        regular: graph.is_regular(),
        cheeger: cut.ratio,
        cheeger_exact: exact,
        lambda1,
        p_constants,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerBounds {
    pub k: usize,
    pub regular: bool,
    pub h: Ratio,
    pub lambda1: f64,
    /// `h²/(2k)`
    pub lower: f64,
    /// `2h`
    pub upper: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
    /// `None` when the graph is not regular and the bounds were not asserted
    pub holds: Option<bool>,
}

/// Exact `h`, `λ₁` and the two-sided Cheeger inequality for a `k`-regular graph.
pub fn check_cheeger_bounds(graph: &ComponentGraph, cap: usize) -> Result<CheegerBounds> {
    let h = cheeger_exact(graph, cap)?.ratio;
    let lambda1 = lambda1(graph)?;
    let k = graph.degree();
    let regular = graph.is_regular();
    let hf = h.to_f64();
    let lower = hf * hf / (2.0 * k as f64);
    let upper = 2.0 * hf;
    Ok(CheegerBounds {
        k,
        regular,
        h,
        lambda1,
        lower,
        upper,
        lower_slack: lambda1 - lower,
        upper_slack: upper - lambda1,
        holds: regular.then(|| cheeger_bounds_hold(hf, lambda1, k)),
    })
}

/// True iff every member's Cheeger constant exceeds `c`; vacuously true when empty.
/// Sweep-only members use the certified lower bound `λ₁/2`.
pub fn is_expander_family<'a, I>(reports: I, c: f64) -> bool
where
    I: IntoIterator<Item = &'a SpectralReport>,
{
    reports.into_iter().all(|r| r.cheeger_lower_bound() > c)
}
