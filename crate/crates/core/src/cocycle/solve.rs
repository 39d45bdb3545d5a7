//! Coboundary solving: least squares for `π_g(v) - v = c_g`, then the
//! minimal-q-norm representative along the per-component kernel.

use std::collections::BTreeMap;

use serde::Serialize;

use super::vector::{lp_norm, pow_abs};
use super::{Cocycle, Exponent, LpVector};
use crate::error::Result;
use crate::perm_rep::{orbit_decomposition, Representation, SignedPermutation};

/// Residual (ℓ₂) at or below which the cocycle counts as a coboundary.
pub const SOLVED_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoboundarySolution {
    /// present iff `residual <= SOLVED_TOL`
    pub solution: Option<LpVector>,
    /// ℓ₂ norm of `(π_g(v) - v - c_g)_g` at the least-squares optimum
    pub residual: f64,
    /// kernel coordinate chosen per component id, relative to the
    /// minimal-ℓ₂ least-squares solution; absent when the kernel is trivial
    pub per_component_shifts: BTreeMap<usize, f64>,
    /// `‖v‖_q` of the returned representative (or of the least-squares
    /// candidate when no solution exists)
    pub solution_qnorm: f64,
    pub q: Exponent,
}

/// Solves `{π_g(v) - v = c_g}_g` in least squares, one orbit at a time, and
/// picks the representative of minimal q-norm over the kernel.
pub fn solve_coboundary(
    rep: &Representation,
    c: &Cocycle,
    q: Exponent,
) -> Result<CoboundarySolution> {
    c.check_shape(rep)?;
    let gens: Vec<(&SignedPermutation, &[f64])> = rep
        .generators()
        .map(|(name, g)| (g, c.values[name].as_slice()))
        .collect();

    let mut v = vec![0.0; rep.n()];
    let mut shifts = BTreeMap::new();
    for (id, comp) in orbit_decomposition(rep).iter().enumerate() {
        let block = Block::new(&gens, &comp.indices);
        let mut x = block.least_squares();
        if let Some(k) = block.kernel() {
            let t = best_shift(&x, &k, q.value());
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi += t * ki;
            }
            shifts.insert(id, t);
        }
        for (&i, xi) in comp.indices.iter().zip(x) {
            v[i] = xi;
        }
    }

    let residual = gens
        .iter()
        .map(|(g, cg)| {
            g.displacement_slice(&v)
                .iter()
                .zip(cg.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum::<f64>()
        .sqrt();
    let solution_qnorm = lp_norm(&v, q.value());
    Ok(CoboundarySolution {
        solution: (residual <= SOLVED_TOL).then(|| LpVector::from_raw(q, v)),
        residual,
        per_component_shifts: shifts,
        solution_qnorm,
        q,
    })
}

/// The equations of one orbit in local coordinates: for each generator and
/// each vertex `i`, `sign_i · x[target_i] - x[i] = rhs`.
struct Block {
    /// (local target, sign, local row vertex) per generator and vertex
    rows: Vec<(usize, f64, usize)>,
    rhs: Vec<f64>,
    m: usize,
}

impl Block {
    fn new(gens: &[(&SignedPermutation, &[f64])], indices: &[usize]) -> Self {
        let local = |i: usize| indices.binary_search(&i).expect("orbit is closed");
        let mut rows = Vec::with_capacity(gens.len() * indices.len());
        let mut rhs = Vec::with_capacity(rows.capacity());
        for (g, cg) in gens {
            for (li, &i) in indices.iter().enumerate() {
                rows.push((local(g.targets()[i]), f64::from(g.signs()[i]), li));
                rhs.push(cg[i]);
            }
        }
        Block {
            rows,
            rhs,
            m: indices.len(),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|&(t, s, i)| s * x[t] - x[i]).collect()
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (&(t, s, i), &yr) in self.rows.iter().zip(y) {
            out[t] += s * yr;
            out[i] -= yr;
        }
        out
    }

    /// Conjugate gradients on the normal equations from zero, which stays in
    /// the row space and so converges to the minimal-ℓ₂ least-squares solution.
    fn least_squares(&self) -> Vec<f64> {
        let b = self.apply_transpose(&self.rhs);
        let bnorm = dot(&b, &b).sqrt();
        let mut x = vec![0.0; self.m];
        if bnorm == 0.0 {
            return x;
        }
        let mut r = b;
        let mut d = r.clone();
        let mut rr = dot(&r, &r);
        for _ in 0..(20 * self.m + 100) {
            if rr.sqrt() <= 1e-14 * bnorm {
                break;
            }
            let md = self.apply_transpose(&self.apply(&d));
            let dmd = dot(&d, &md);
            if dmd <= 0.0 {
                break;
            }
            let alpha = rr / dmd;
            for k in 0..self.m {
                x[k] += alpha * d[k];
                r[k] -= alpha * md[k];
            }
            let rr_new = dot(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            for k in 0..self.m {
                d[k] = r[k] + beta * d[k];
            }
        }
        x
    }

    /// The fixed vectors of the orbit: one ±1 pattern, or none when the signs
    /// are frustrated.
    fn kernel(&self) -> Option<Vec<f64>> {
        let mut k = vec![0.0; self.m];
        let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.m];
        for &(t, s, i) in &self.rows {
            out[i].push((t, s));
        }
        k[0] = 1.0;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for &(t, s) in &out[i] {
                if k[t] == 0.0 {
                    k[t] = s * k[i];
                    stack.push(t);
                }
            }
        }
        let consistent = self
            .rows
            .iter()
            .all(|&(t, s, i)| k[t] != 0.0 && s * k[t] == k[i]);
        consistent.then_some(k)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `Σ|x_i + t k_i|^q` over `t`, with `|k_i| = 1`.
fn best_shift(x: &[f64], k: &[f64], q: f64) -> f64 {
    let a: Vec<f64> = x.iter().zip(k).map(|(xi, ki)| xi * ki).collect();
    let lo = -a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hi = -a.iter().copied().fold(f64::INFINITY, f64::min);
    if q.is_infinite() {
        return 0.5 * (lo + hi);
    }
    // φ'(t) = q Σ |a_i + t|^{q-1} sign(a_i + t) is nondecreasing
    let slope = |t: f64| -> f64 {
        a.iter()
            .map(|&ai| pow_abs(ai + t, q - 1.0) * (ai + t).signum())
            .sum()
    };
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::coboundary_of;
    use crate::graphgen::cycle_rep;

    #[test]
    fn round_trip_recovers_vector_up_to_constants() {
        let rep = cycle_rep(7).unwrap();
        let v = LpVector::new(
            Exponent::Finite(2.0),
            vec![0.5, -1.0, 2.0, 3.5, 0.0, -0.25, 1.0],
        )
        .unwrap();
        let c = coboundary_of(&rep, &v).unwrap();
        let sol = solve_coboundary(&rep, &c, Exponent::Finite(2.0)).unwrap();
        assert!(sol.residual <= 1e-8);
        let w = sol.solution.unwrap();
        let diff: Vec<f64> = (0..7).map(|i| w[i] - v[i]).collect();
        for d in &diff {
            assert!((d - diff[0]).abs() < 1e-9);
        }
        // the q = 2 minimizer is mean zero
        assert!(w.coords().iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn zero_cocycle_gives_zero() {
        let rep = cycle_rep(5).unwrap();
        let c = Cocycle::zero(&rep, Exponent::Finite(3.0));
        let sol = solve_coboundary(&rep, &c, Exponent::Finite(3.0)).unwrap();
        assert_eq!(sol.residual, 0.0);
        assert_eq!(sol.solution.unwrap().coords(), &[0.0; 5]);
    }

    #[test]
    fn inconsistent_cycle_sum_leaves_residual() {
        let rep = cycle_rep(6).unwrap();
        let v = LpVector::new(Exponent::Finite(2.0), vec![1.0, 2.0, 0.0, -1.0, 0.5, 0.0]).unwrap();
        let mut c = coboundary_of(&rep, &v).unwrap();
        c.values.get_mut("s").unwrap()[2] += 1.0;
        let sol = solve_coboundary(&rep, &c, Exponent::Finite(2.0)).unwrap();
        assert!(sol.residual > 0.1, "{}", sol.residual);
        assert!(sol.solution.is_none());
    }

    #[test]
    fn signed_orbit_with_frustration_has_trivial_kernel() {
        // a single sign flip on a 2-cycle: x1 = x0 and x0 = -x1 force zero
        let g = SignedPermutation::new(vec![1, 0], vec![1, -1]).unwrap();
        let rep = Representation::with_detected_symmetry(2, [("g", g)]).unwrap();
        let v = LpVector::new(Exponent::Finite(2.0), vec![1.0, 3.0]).unwrap();
        let c = coboundary_of(&rep, &v).unwrap();
        let sol = solve_coboundary(&rep, &c, Exponent::Finite(2.0)).unwrap();
        assert!(sol.per_component_shifts.is_empty());
        let w = sol.solution.unwrap();
        assert!(w.max_abs_diff(&v) < 1e-10);
    }

    #[test]
    fn shift_minimizes_q_norm() {
        let x = [0.0, 1.0, 1.0, 5.0];
        let k = [1.0; 4];
        for q in [1.5, 2.0, 4.0] {
            let t = best_shift(&x, &k, q);
            let f = |t: f64| x.iter().map(|xi| pow_abs(xi + t, q)).sum::<f64>();
            assert!(f(t) <= f(t + 1e-4) && f(t) <= f(t - 1e-4), "q = {q}");
        }
        assert_eq!(best_shift(&x, &k, f64::INFINITY), -2.5);
        assert!((best_shift(&x, &k, 2.0) + 1.75).abs() < 1e-12);
    }
}
