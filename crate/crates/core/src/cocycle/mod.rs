//! Cocycles and coboundaries of signed-permutation actions.
//!
//! A cocycle `c` assigns a vector to every group element with
//! `c_{gh} = π_g(c_h) + c_g`. It is stored on generators and extended to
//! words through that identity; coboundaries are `b_g = π_g(v) - v`.

mod interpolation;
mod nonexpander;
mod solve;
pub mod vector;

pub use interpolation::{
    interpolation_check, nonneg_reduction, power_map, power_map_identities, GeneratorRatio,
    InterpolationReport, PowerMapIdentities,
};
pub use nonexpander::{
    divergence_diagnostic, nonexpander_cocycle, word_displacement_bound, DivergenceRow,
    DivergenceTable, NonExpanderCocycle, WordBoundReport, WordSample,
};
pub use solve::{solve_coboundary, CoboundarySolution, SOLVED_TOL};
pub use vector::{lp_norm, norm_pow, Exponent, LpVector};

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm_rep::{orbit_decomposition, Component, Representation, SignedPermutation, Word};
use crate::spectral::{p_poincare_constant, PoincareOptions};

/// Seed for the random words used by identity checks and word bounds.
pub const WORD_SEED: u64 = 0x00C0_C7C1_E5EE_D001;
/// Random words sampled on top of the exhaustive ones.
pub const RANDOM_WORDS: usize = 100;
/// Words up to this length are enumerated exhaustively.
pub const EXHAUSTIVE_WORD_LEN: usize = 3;
/// Absolute tolerance of the Z¹ identity, scaled by `max(1, max |c|)`.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cocycle {
    pub p: Exponent,
    pub values: BTreeMap<String, Vec<f64>>,
}

impl Cocycle {
    pub fn zero(rep: &Representation, p: Exponent) -> Self {
        Cocycle {
            p,
            values: rep
                .names()
                .map(|n| (n.to_string(), vec![0.0; rep.n()]))
                .collect(),
        }
    }

    pub fn value(&self, name: &str) -> Result<&[f64]> {
        self.values
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Checks that every generator has a value of the right length and no extras exist.
    pub fn check_shape(&self, rep: &Representation) -> Result<()> {
        for name in rep.names() {
            let v = self.value(name)?;
            if v.len() != rep.n() {
                return Err(Error::Dimension {
                    expected: rep.n(),
                    found: v.len(),
                });
            }
        }
        if let Some(extra) = self.values.keys().find(|k| rep.generator(k).is_err()) {
            return Err(Error::UnknownGenerator(extra.clone()));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .values()
            .flatten()
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Extends the generator values to a word: `c_{s w} = c_s + π_s(c_w)` and
    /// `c_{s⁻¹} = -π_{s⁻¹}(c_s)`. Returns the word's action and value.
    pub fn on_word(
        &self,
        rep: &Representation,
        word: &Word,
    ) -> Result<(SignedPermutation, Vec<f64>)> {
        let n = rep.n();
        let mut perm = SignedPermutation::identity(n);
        let mut val = vec![0.0; n];
        for letter in word.letters().iter().rev() {
            let g = rep.generator(&letter.name)?;
            let cg = self.value(&letter.name)?;
            let (act, own) = if letter.inverse {
                let inv = g.inverse();
                let own: Vec<f64> = inv.apply_slice(cg).into_iter().map(|x| -x).collect();
                (inv, own)
            } else {
                (g.clone(), cg.to_vec())
            };
            let moved = act.apply_slice(&val);
            val = own.iter().zip(&moved).map(|(a, b)| a + b).collect();
            perm = act.compose(&perm)?;
        }
        Ok((perm, val))
    }
}

/// `b_g = π_g(v) - v` for every generator.
pub fn coboundary_of(rep: &Representation, v: &LpVector) -> Result<Cocycle> {
    if v.len() != rep.n() {
        return Err(Error::Dimension {
            expected: rep.n(),
            found: v.len(),
        });
    }
    Ok(Cocycle {
        p: v.exponent(),
        values: rep
            .generators()
            .map(|(name, g)| (name.to_string(), g.displacement_slice(v.coords())))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub words: usize,
    pub splits: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// the `g | h` split attaining the largest violation
    pub worst: Option<String>,
}

/// Checks `c_{gh} = π_g(c_h) + c_g` over all splits `g·h` of sampled words of
/// length `<= max_word_len`.
///
/// Words act through their permutation images, so two words with the same
/// image must carry the same cocycle value; the first word reaching an image
/// fixes its value and every later split is compared against it.
pub fn verify_cocycle_identity(
    rep: &Representation,
    c: &Cocycle,
    max_word_len: usize,
) -> Result<IdentityReport> {
    c.check_shape(rep)?;
    let names: Vec<&str> = rep.names().collect();
    let words = sample_words(&names, max_word_len, WORD_SEED);

    let mut table: HashMap<SignedPermutation, Vec<f64>> = HashMap::new();
    let mut canonical = |w: &Word| -> Result<(SignedPermutation, Vec<f64>)> {
        let (perm, val) = c.on_word(rep, w)?;
        let val = table.entry(perm.clone()).or_insert(val).clone();
        Ok((perm, val))
    };

    let mut splits = 0;
    let mut max_violation: f64 = 0.0;
    let mut worst = None;
    for w in &words {
        let (_, cw) = canonical(w)?;
        for k in 0..=w.len() {
            let (g, h) = w.split_at(k);
            let (pg, cg) = canonical(&g)?;
            let (_, ch) = canonical(&h)?;
            let moved = pg.apply_slice(&ch);
            let viol = cw
                .iter()
                .zip(moved.iter().zip(&cg))
                .fold(0.0f64, |m, (a, (b, d))| m.max((a - b - d).abs()));
            splits += 1;
            if viol > max_violation {
                max_violation = viol;
                worst = Some(format!("{g} | {h}"));
            }
        }
    }
    let tolerance = IDENTITY_TOL * c.max_abs().max(1.0);
    Ok(IdentityReport {
        words: words.len(),
        splits,
        max_violation,
        tolerance,
        passed: max_violation <= tolerance,
        worst,
    })
}

/// Exhaustive words up to length 3 (capped by `max_len`) plus seeded random
/// words with lengths in `1..=max_len`.
pub(crate) fn sample_words(names: &[&str], max_len: usize, seed: u64) -> Vec<Word> {
    let mut words = Word::exhaustive(names, max_len.min(EXHAUSTIVE_WORD_LEN));
    if max_len > 0 && !names.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_WORDS {
            let len = rng.random_range(1..=max_len);
            words.push(Word::random(names, len, &mut rng));
        }
    }
    words
}

/// `Σ_{g∈S} ‖π_g(v) - v‖_p^p`.
pub fn displacement(rep: &Representation, v: &LpVector, p: f64) -> Result<f64> {
    if v.len() != rep.n() {
        return Err(Error::Dimension {
            expected: rep.n(),
            found: v.len(),
        });
    }
    Ok(rep
        .generators()
        .map(|(_, g)| norm_pow(&g.displacement_slice(v.coords()), p))
        .sum())
}

/// Subtracts the mean of `v` over each component.
pub fn orbit_center(v: &LpVector, components: &[Component]) -> LpVector {
    let mut out = v.coords().to_vec();
    for c in components {
        let mean = c.indices.iter().map(|&i| v[i]).sum::<f64>() / c.len() as f64;
        for &i in &c.indices {
            out[i] -= mean;
        }
    }
    LpVector::from_raw(v.exponent(), out)
}

/// Per-component p-Poincaré constants of a representation.
#[derive(Clone, Debug)]
pub struct PoincareTable {
    pub p: f64,
    pub components: Vec<Component>,
    /// `None` for singleton components, which carry no constraint
    pub constants: Vec<Option<f64>>,
    /// components excluded from the check (the zero set `J`)
    pub excluded: Vec<bool>,
}

impl PoincareTable {
    pub fn compute(rep: &Representation, p: f64, opts: &PoincareOptions) -> Result<Self> {
        let components = orbit_decomposition(rep);
        let constants = components
            .iter()
            .map(|c| {
                if c.len() < 2 {
                    Ok(None)
                } else {
                    p_poincare_constant(&c.graph, p, opts).map(|e| Some(e.value))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let excluded = vec![false; components.len()];
        Ok(PoincareTable {
            p,
            components,
            constants,
            excluded,
        })
    }

    pub fn with_mask(mut self, excluded: Vec<bool>) -> Self {
        assert_eq!(excluded.len(), self.components.len(), "mask length");
        self.excluded = excluded;
        self
    }

    /// Smallest constant over the non-excluded, non-singleton components.
    pub fn c_min(&self) -> Option<f64> {
        self.constants
            .iter()
            .zip(&self.excluded)
            .filter(|(_, &x)| !x)
            .filter_map(|(c, _)| *c)
            .reduce(f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpanderCaseReport {
    pub p: f64,
    /// `Σ_g ‖π_g v̂ - v̂‖_p^p`
    pub lhs: f64,
    /// `c_min · ‖v̂‖_p^p`
    pub rhs: f64,
    pub c_min: f64,
    pub holds: bool,
}

/// Relative tolerance of the averaged-vector inequality.
pub const EXPANDER_CASE_TOL: f64 = 1e-8;

/// The averaging step for expander components: with `v̂` the orbit-centered
/// vector, `Σ_g ‖π_g v̂ - v̂‖_p^p >= c_min ‖v̂‖_p^p`.
pub fn expander_case_check(
    rep: &Representation,
    v: &LpVector,
    table: &PoincareTable,
) -> Result<ExpanderCaseReport> {
    let p = table.p;
    let mut centered = orbit_center(v, &table.components).into_coords();
    for (c, _) in table
        .components
        .iter()
        .zip(&table.excluded)
        .filter(|(_, &x)| x)
    {
        for &i in &c.indices {
            centered[i] = 0.0;
        }
    }
    let centered = LpVector::from_raw(v.exponent(), centered);
    let lhs = displacement(rep, &centered, p)?;
    let c_min = table.c_min().unwrap_or(0.0);
    let rhs = c_min * norm_pow(centered.coords(), p);
    Ok(ExpanderCaseReport {
        p,
        lhs,
        rhs,
        c_min,
        holds: lhs >= rhs * (1.0 - EXPANDER_CASE_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::cycle_rep;

    fn three_cycle_rep() -> Representation {
        let c = SignedPermutation::from_cycles(6, &[&[2, 3, 4]]).unwrap();
        let s = SignedPermutation::from_cycles(6, &[&[0, 1]]).unwrap();
        Representation::new(
            6,
            [("c", c.clone()), ("c_inv", c.inverse()), ("s", s)],
            true,
        )
        .unwrap()
    }

    fn vec2(x: &[f64]) -> LpVector {
        LpVector::new(Exponent::Finite(2.0), x.to_vec()).unwrap()
    }

    #[test]
    fn coboundary_examples() {
        let rep = three_cycle_rep();
        let zero = coboundary_of(&rep, &vec2(&[0.0; 6])).unwrap();
        assert_eq!(zero, Cocycle::zero(&rep, Exponent::Finite(2.0)));
        let fixed = coboundary_of(&rep, &vec2(&[1.0, 1.0, 2.0, 2.0, 2.0, 7.0])).unwrap();
        assert_eq!(fixed.max_abs(), 0.0);

        let v = vec2(&[0.3, -1.2, 2.5, 0.7, -0.1, 4.0]);
        let b = coboundary_of(&rep, &v).unwrap();
        for (name, g) in rep.generators() {
            let direct: Vec<f64> = (0..6).map(|i| v[g.targets()[i]] - v[i]).collect();
            assert_eq!(b.value(name).unwrap(), direct.as_slice());
        }
    }

    #[test]
    fn identity_check_passes_on_coboundaries_and_zero() {
        let rep = three_cycle_rep();
        let v = vec2(&[0.3, -1.2, 2.5, 0.7, -0.1, 4.0]);
        let r = verify_cocycle_identity(&rep, &coboundary_of(&rep, &v).unwrap(), 4).unwrap();
        assert!(r.passed && r.max_violation <= 1e-12, "{r:?}");
        let z = verify_cocycle_identity(&rep, &Cocycle::zero(&rep, Exponent::Finite(2.0)), 3);
        assert_eq!(z.unwrap().max_violation, 0.0);
    }

    #[test]
    fn identity_check_detects_corruption() {
        let rep = three_cycle_rep();
        let v = vec2(&[0.3, -1.2, 2.5, 0.7, -0.1, 4.0]);
        let mut c = coboundary_of(&rep, &v).unwrap();
        c.values.get_mut("c").unwrap()[3] += 1.0;
        let r = verify_cocycle_identity(&rep, &c, 3).unwrap();
        assert!(!r.passed);
        assert!((r.max_violation - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn identity_check_rejects_shape_errors() {
        let rep = three_cycle_rep();
        let mut c = Cocycle::zero(&rep, Exponent::Finite(2.0));
        c.values.remove("s");
        assert!(matches!(
            verify_cocycle_identity(&rep, &c, 2),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn displacement_examples() {
        let swap = SignedPermutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let rep = Representation::new(2, [("s", swap)], true).unwrap();
        assert_eq!(displacement(&rep, &vec2(&[1.0, 0.0]), 2.0).unwrap(), 2.0);
        assert_eq!(displacement(&rep, &vec2(&[5.0, 5.0]), 2.0).unwrap(), 0.0);
        let d1 = displacement(&rep, &vec2(&[1.0, -0.5]), 3.0).unwrap();
        let d2 = displacement(&rep, &vec2(&[-2.0, 1.0]), 3.0).unwrap();
        assert!((d2 - 8.0 * d1).abs() < 1e-12);
    }

    #[test]
    fn orbit_center_examples() {
        let swap = SignedPermutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let rep = Representation::new(2, [("s", swap)], true).unwrap();
        let comps = orbit_decomposition(&rep);
        assert_eq!(
            orbit_center(&vec2(&[1.0, 3.0]), &comps).coords(),
            &[-1.0, 1.0]
        );
        assert_eq!(
            orbit_center(&vec2(&[4.0, 4.0]), &comps).coords(),
            &[0.0, 0.0]
        );
    }

    #[test]
    fn centering_preserves_displacements() {
        let rep = three_cycle_rep();
        let comps = orbit_decomposition(&rep);
        let v = vec2(&[0.3, -1.2, 2.5, 0.7, -0.1, 4.0]);
        let c = orbit_center(&v, &comps);
        let a = coboundary_of(&rep, &v).unwrap();
        let b = coboundary_of(&rep, &c).unwrap();
        for (x, y) in a.values.values().zip(b.values.values()) {
            for (p, q) in x.iter().zip(y) {
                assert!((p - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expander_case_on_c8() {
        let rep = cycle_rep(8).unwrap();
        let table = PoincareTable::compute(&rep, 2.0, &PoincareOptions::default()).unwrap();
        let half = vec2(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let r = expander_case_check(&rep, &half, &table).unwrap();
        assert!(r.holds && r.lhs > 0.0, "{r:?}");
        let constant = vec2(&[3.0; 8]);
        let r = expander_case_check(&rep, &constant, &table).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn masked_components_drop_out() {
        let rep = three_cycle_rep();
        let table = PoincareTable::compute(&rep, 3.0, &PoincareOptions::default()).unwrap();
        let v = vec2(&[0.0, 0.0, 1.0, -2.0, 0.5, 0.0]);
        let mask = crate::perm_rep::zero_set_mask(&table.components, v.coords());
        assert_eq!(mask, vec![true, false, true]);
        let masked = table.with_mask(mask);
        assert_eq!(masked.c_min(), masked.constants[1]);
        assert!(expander_case_check(&rep, &v, &masked).unwrap().holds);
    }

    #[test]
    fn cocycle_json_shape() {
        let rep = cycle_rep(3).unwrap();
        let c = Cocycle::zero(&rep, Exponent::Finite(4.0));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"p":4.0,"values":{"s":[0.0,0.0,0.0],"s_inv":[0.0,0.0,0.0]}}"#
        );
        assert_eq!(serde_json::from_str::<Cocycle>(&s).unwrap(), c);
    }
}
