//! Cocycles built from marked arcs on a non-expanding family of components.
//!
//! With `v = (1/#A_I)^{1/q}` on each marked set `A_I` and zero elsewhere,
//! every generator moves `v` by at most `Σ_I #∂A_I/#A_I` in `‖·‖_q^q` per
//! boundary crossing, while the minimal q-norm of any `w` with the same
//! coboundary is at least `2^{-q}` per component.

use serde::Serialize;

use super::vector::{norm_pow, Exponent, LpVector};
use super::{coboundary_of, sample_words, solve_coboundary, Cocycle, WORD_SEED};
use crate::error::{Error, Result};
use crate::graphgen::{nonexpander_family, NonExpanderFamily, NonExpanderParams};
use crate::perm_rep::Word;

#[derive(Clone, Debug)]
pub struct NonExpanderCocycle {
    /// sup-norm tagged vector, constant `(1/#A_I)^{1/q}` on each `A_I`
    pub vector: LpVector,
    /// `b_g = π_g(v) - v`, tagged with `q`
    pub cocycle: Cocycle,
    /// `‖b_g‖_q^q` per generator, in name order
    pub per_generator: Vec<(String, f64)>,
    /// `2 Σ_I #∂A_I/#A_I`
    pub bound: f64,
}

impl NonExpanderCocycle {
    pub fn within_bound(&self) -> bool {
        self.per_generator
            .iter()
            .all(|(_, x)| *x <= self.bound * (1.0 + 1e-12))
    }
}

pub fn nonexpander_cocycle(family: &NonExpanderFamily, q: f64) -> Result<NonExpanderCocycle> {
    let q_exp = Exponent::finite(q)?;
    let mut coords = vec![0.0; family.rep.n()];
    for comp in &family.components {
        if 2 * comp.marked.len() > comp.indices.len() {
            return Err(Error::ArcTooLarge {
                marked: comp.marked.len(),
                size: comp.indices.len(),
            });
        }
        let value = (1.0 / comp.marked.len() as f64).powf(1.0 / q);
        for &i in &comp.marked {
            coords[i] = value;
        }
    }
    let vector = LpVector::from_raw(Exponent::Infinite, coords);
    let mut cocycle = coboundary_of(&family.rep, &vector)?;
    cocycle.p = q_exp;
    let per_generator = cocycle
        .values
        .iter()
        .map(|(k, b)| (k.clone(), norm_pow(b, q)))
        .collect();
    Ok(NonExpanderCocycle {
        vector,
        cocycle,
        per_generator,
        bound: 2.0 * family.ratio_sum,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WordSample {
    pub word: Word,
    /// `‖π_g(v) - v‖_q^q`
    pub computed: f64,
    /// `2 |g| Σ_I #∂A_I/#A_I`
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordBoundReport {
    pub max_len: usize,
    pub samples: Vec<WordSample>,
    pub holds: bool,
}

/// Telescoping bound for words: `‖π_g(v) - v‖_q^q <= 2 l Σ_I #∂A_I/#A_I` for
/// `g` of length `l`, on exhaustive short words plus seeded random words.
pub fn word_displacement_bound(
    family: &NonExpanderFamily,
    max_len: usize,
    q: f64,
) -> Result<WordBoundReport> {
    let built = nonexpander_cocycle(family, q)?;
    let names: Vec<&str> = family.rep.names().collect();
    let mut samples = Vec::new();
    for word in sample_words(&names, max_len, WORD_SEED) {
        let g = family.rep.evaluate_word(&word)?;
        let computed = norm_pow(&g.displacement_slice(built.vector.coords()), q);
        let bound = 2.0 * word.len() as f64 * family.ratio_sum;
        samples.push(WordSample {
            word,
            computed,
            bound,
        });
    }
    let holds = samples
        .iter()
        .all(|s| s.computed <= s.bound * (1.0 + 1e-12) + 1e-300);
    Ok(WordBoundReport {
        max_len,
        samples,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub depth: usize,
    pub components: usize,
    /// `‖w‖_q^q` of the minimal-q-norm solution of the coboundary equation
    pub qnorm_q: f64,
    /// `2^{-q} · #components`
    pub lower_bound: f64,
    pub residual: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceTable {
    pub q: f64,
    pub rows: Vec<DivergenceRow>,
    pub strictly_increasing: bool,
    pub passed: bool,
}

/// At each depth, solves for the minimal-q-norm `w` with `π_g(w) - w = b_g`
/// and compares `‖w‖_q^q` with `2^{-q}` times the number of components.
pub fn divergence_diagnostic(
    params: &NonExpanderParams,
    q: f64,
    depths: &[usize],
) -> Result<DivergenceTable> {
    if depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "depths must be strictly increasing".into(),
        ));
    }
    let q_exp = Exponent::finite(q)?;
    let mut rows = Vec::with_capacity(depths.len());
    for &depth in depths {
        let family = nonexpander_family(depth, params)?;
        let built = nonexpander_cocycle(&family, q)?;
        let sol = solve_coboundary(&family.rep, &built.cocycle, q_exp)?;
        let qnorm_q = sol.solution_qnorm.powf(q);
        let lower_bound = 2f64.powf(-q) * family.components.len() as f64;
        rows.push(DivergenceRow {
            depth,
            components: family.components.len(),
            qnorm_q,
            lower_bound,
            residual: sol.residual,
            holds: sol.solution.is_some() && qnorm_q >= lower_bound,
        });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].qnorm_q > w[0].qnorm_q);
    let passed = strictly_increasing && rows.iter().all(|r| r.holds);
    Ok(DivergenceTable {
        q,
        rows,
        strictly_increasing,
        passed,
    })
}
