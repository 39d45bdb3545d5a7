//! Signed-permutation isometries of finite truncations of l_p.
//!
//! For `p != 2` every linear isometry of l_p acts on coordinates as
//! `(πv)_i = ε_i · v_{π̃(i)}` for a bijection `π̃` and signs `ε_i ∈ {±1}`.
//! A [`SignedPermutation`] stores exactly that datum on `{0..n-1}`, and a
//! [`Representation`] is a finite, named generating set of them.

mod orbit;
mod word;

pub use orbit::{
    component_graph, orbit_decomposition, zero_set_mask, Component, ComponentGraph, UnionFind,
};
pub use word::{Letter, Word};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cocycle::LpVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    targets: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(targets: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = targets.len();
        if signs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &t in &targets {
            if t >= n {
                return Err(Error::InvalidPermutation(format!(
                    "target {t} out of range for size {n}"
                )));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPermutation(format!("target {t} repeated")));
            }
        }
        if let Some((index, &s)) = signs.iter().enumerate().find(|(_, s)| s.abs() != 1) {
            return Err(Error::InvalidSign {
                index,
                value: s as i64,
            });
        }
        Ok(SignedPermutation { targets, signs })
    }

    /// All signs +1.
    pub fn unsigned(targets: Vec<usize>) -> Result<Self> {
        let n = targets.len();
        Self::new(targets, vec![1; n])
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            targets: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Unsigned permutation built from disjoint cycles; `[a, b, c]` sends `a -> b -> c -> a`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut targets: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || std::mem::replace(&mut touched[a], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {a} out of range or repeated"
                    )));
                }
                targets[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::unsigned(targets)
    }

    pub fn size(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.targets.iter().enumerate().all(|(i, &t)| i == t) && self.all_positive()
    }

    pub fn all_positive(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    /// Same bijection with every sign reset to +1.
    pub fn unsigned_part(&self) -> Self {
        SignedPermutation {
            targets: self.targets.clone(),
            signs: vec![1; self.size()],
        }
    }

    /// `result_i = signs_i · v_{targets_i}`.
    pub fn apply(&self, v: &LpVector) -> Result<LpVector> {
        self.check_size(v.len())?;
        Ok(LpVector::from_raw(
            v.exponent(),
            self.apply_slice(v.coords()),
        ))
    }

    pub(crate) fn apply_slice(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.size());
        self.targets
            .iter()
            .zip(&self.signs)
            .map(|(&t, &s)| f64::from(s) * v[t])
            .collect()
    }

    /// `apply(v) - v` without allocating the intermediate image.
    pub(crate) fn displacement_slice(&self, v: &[f64]) -> Vec<f64> {
        self.targets
            .iter()
            .zip(&self.signs)
            .zip(v)
            .map(|((&t, &s), &x)| f64::from(s) * v[t] - x)
            .collect()
    }

    /// `self` after `other`: `apply(a.compose(b), v) == apply(a, apply(b, v))`.
    pub fn compose(&self, other: &SignedPermutation) -> Result<Self> {
        self.check_size(other.size())?;
        let targets = self.targets.iter().map(|&t| other.targets[t]).collect();
        let signs = self
            .targets
            .iter()
            .zip(&self.signs)
            .map(|(&t, &s)| s * other.signs[t])
            .collect();
        Ok(SignedPermutation { targets, signs })
    }

    pub fn inverse(&self) -> Self {
        let n = self.size();
        let mut targets = vec![0; n];
        let mut signs = vec![1; n];
        for (i, (&t, &s)) in self.targets.iter().zip(&self.signs).enumerate() {
            targets[t] = i;
            signs[t] = s;
        }
        SignedPermutation { targets, signs }
    }

    fn check_size(&self, found: usize) -> Result<()> {
        if found == self.size() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.size(),
                found,
            })
        }
    }
}

/// Finitely many named signed permutations of one index set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RepresentationFile", into = "RepresentationFile")]
pub struct Representation {
    n: usize,
    generators: BTreeMap<String, SignedPermutation>,
    symmetric: bool,
}

impl Representation {
    pub fn new<I, S>(n: usize, generators: I, symmetric: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SignedPermutation)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, perm) in generators {
            let name = name.into();
            if name.is_empty()
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || c == '^' || c == '*')
            {
                return Err(Error::InvalidArgument(format!(
                    "generator name `{name}` must be nonempty without whitespace, `^` or `*`"
                )));
            }
            if perm.size() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: perm.size(),
                });
            }
            if map.contains_key(&name) {
                return Err(Error::DuplicateGenerator(name));
            }
            map.insert(name, perm);
        }
        if symmetric {
            if let Some(name) = first_unpaired(&map) {
                return Err(Error::NotSymmetric(name));
            }
        }
        Ok(Representation {
            n,
            generators: map,
            symmetric,
        })
    }

    /// Like [`Representation::new`] but sets the symmetric flag from the generators.
    pub fn with_detected_symmetry<I, S>(n: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SignedPermutation)>,
        S: Into<String>,
    {
        let mut rep = Self::new(n, generators, false)?;
        rep.symmetric = first_unpaired(&rep.generators).is_none();
        Ok(rep)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn generator(&self, name: &str) -> Result<&SignedPermutation> {
        self.generators
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Generators in name order.
    pub fn generators(&self) -> impl Iterator<Item = (&str, &SignedPermutation)> {
        self.generators.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Number of `{g, g⁻¹}` classes; an involution is its own class.
    pub fn inverse_pair_count(&self) -> usize {
        let mut counts: HashMap<&SignedPermutation, usize> = HashMap::new();
        for p in self.generators.values() {
            *counts.entry(p).or_default() += 1;
        }
        let mut pairs = 0;
        for (p, &c) in &counts {
            let inv = p.inverse();
            if inv == **p {
                pairs += c;
            } else {
                let ci = counts.get(&inv).copied().unwrap_or(0);
                // count each unordered class from the side with the larger multiplicity
                if c > ci || (c == ci && (&p.targets, &p.signs) < (&inv.targets, &inv.signs)) {
                    pairs += c;
                }
            }
        }
        pairs
    }

    pub fn all_positive(&self) -> bool {
        self.generators
            .values()
            .all(SignedPermutation::all_positive)
    }

    /// The representation with every sign reset to +1.
    pub fn unsigned(&self) -> Representation {
        Representation {
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|(k, v)| (k.clone(), v.unsigned_part()))
                .collect(),
            symmetric: self.symmetric,
        }
    }

    /// Composes the letters left to right, so the result acts as `s_1 ∘ s_2 ∘ … ∘ s_l`.
    pub fn evaluate_word(&self, word: &Word) -> Result<SignedPermutation> {
        let mut acc = SignedPermutation::identity(self.n);
        for letter in word.letters() {
            let g = self.generator(&letter.name)?;
            acc = if letter.inverse {
                acc.compose(&g.inverse())?
            } else {
                acc.compose(g)?
            };
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("representation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// First generator (in name order) whose inverse is not matched in the multiset.
fn first_unpaired(map: &BTreeMap<String, SignedPermutation>) -> Option<String> {
    let mut counts: HashMap<&SignedPermutation, i64> = HashMap::new();
    for p in map.values() {
        *counts.entry(p).or_default() += 1;
    }
    map.iter()
        .find(|(_, p)| {
            let inv = p.inverse();
            counts.get(&inv).copied().unwrap_or(0) != counts[p]
        })
        .map(|(k, _)| k.clone())
}

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    name: String,
    targets: Vec<usize>,
    signs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    n: usize,
    symmetric: bool,
    generators: Vec<GeneratorFile>,
}

impl TryFrom<RepresentationFile> for Representation {
    type Error = Error;

    fn try_from(file: RepresentationFile) -> Result<Self> {
        let mut gens = Vec::with_capacity(file.generators.len());
        for g in file.generators {
            let mut signs = Vec::with_capacity(g.signs.len());
            for (index, &s) in g.signs.iter().enumerate() {
                match s {
                    1 | -1 => signs.push(s as i8),
                    value => return Err(Error::InvalidSign { index, value }),
                }
            }
            gens.push((g.name, SignedPermutation::new(g.targets, signs)?));
        }
        Representation::new(file.n, gens, file.symmetric)
    }
}

impl From<Representation> for RepresentationFile {
    fn from(rep: Representation) -> Self {
        RepresentationFile {
            n: rep.n,
            symmetric: rep.symmetric,
            generators: rep
                .generators
                .into_iter()
                .map(|(name, p)| GeneratorFile {
                    name,
                    targets: p.targets,
                    signs: p.signs.into_iter().map(i64::from).collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Exponent;

    fn v(x: &[f64]) -> LpVector {
        LpVector::new(Exponent::Finite(2.0), x.to_vec()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = SignedPermutation::identity(2);
        assert_eq!(id.apply(&v(&[3.0, -1.0])).unwrap().coords(), &[3.0, -1.0]);
        let swap = SignedPermutation::new(vec![1, 0], vec![1, -1]).unwrap();
        assert_eq!(swap.apply(&v(&[2.0, 5.0])).unwrap().coords(), &[5.0, -2.0]);
        assert!(matches!(
            swap.apply(&v(&[1.0, 2.0, 3.0])),
            Err(Error::Dimension {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            SignedPermutation::unsigned(vec![0, 0]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            SignedPermutation::unsigned(vec![0, 2]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            SignedPermutation::new(vec![0, 1], vec![1, 0]),
            Err(Error::InvalidSign { index: 1, value: 0 })
        ));
    }

    #[test]
    fn compose_and_inverse_examples() {
        let swap = SignedPermutation::new(vec![1, 0], vec![1, -1]).unwrap();
        let flip = SignedPermutation::new(vec![0, 1], vec![-1, 1]).unwrap();
        let c = swap.compose(&flip).unwrap();
        assert_eq!(c, SignedPermutation::unsigned(vec![1, 0]).unwrap());
        assert_eq!(SignedPermutation::identity(2).compose(&swap).unwrap(), swap);

        let inv = swap.inverse();
        assert_eq!(
            inv,
            SignedPermutation::new(vec![1, 0], vec![-1, 1]).unwrap()
        );
        assert!(swap.compose(&inv).unwrap().is_identity());
        assert_eq!(
            SignedPermutation::identity(3).inverse(),
            SignedPermutation::identity(3)
        );

        let cyc = SignedPermutation::new(vec![2, 0, 1], vec![-1, 1, -1]).unwrap();
        assert!(cyc.compose(&cyc.inverse()).unwrap().is_identity());
        assert!(cyc.inverse().compose(&cyc).unwrap().is_identity());
    }

    #[test]
    fn compose_matches_apply_on_basis() {
        let a = SignedPermutation::new(vec![2, 0, 1], vec![-1, 1, -1]).unwrap();
        let b = SignedPermutation::new(vec![1, 0, 2], vec![1, -1, -1]).unwrap();
        let ab = a.compose(&b).unwrap();
        for k in 0..3 {
            let mut e = vec![0.0; 3];
            e[k] = 1.0;
            let lhs = ab.apply(&v(&e)).unwrap();
            let rhs = a.apply(&b.apply(&v(&e)).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn word_examples() {
        let a = SignedPermutation::new(vec![1, 2, 0], vec![1, -1, 1]).unwrap();
        let rep = Representation::new(3, [("a", a.clone())], false).unwrap();
        assert!(rep.evaluate_word(&Word::empty()).unwrap().is_identity());
        assert_eq!(rep.evaluate_word(&"a".parse().unwrap()).unwrap(), a);
        assert!(rep
            .evaluate_word(&"a a^-1".parse().unwrap())
            .unwrap()
            .is_identity());
        let aa = rep.evaluate_word(&"a a".parse().unwrap()).unwrap();
        assert_eq!(aa, a.compose(&a).unwrap());
        assert!(matches!(
            rep.evaluate_word(&"b".parse().unwrap()),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn representation_validation() {
        let s = SignedPermutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(matches!(
            Representation::new(3, [("s", s.clone())], true),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            Representation::new(4, [("s", s.clone())], false),
            Err(Error::Dimension { .. })
        ));
        assert!(Representation::new(3, [("a b", s.clone())], false).is_err());
        let rep = Representation::with_detected_symmetry(3, [("s", s.clone()), ("t", s.inverse())])
            .unwrap();
        assert!(rep.is_symmetric());
        assert_eq!(rep.inverse_pair_count(), 1);
        let swap = SignedPermutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let rep = Representation::new(3, [("s", s.clone()), ("t", s.inverse()), ("u", swap)], true)
            .unwrap();
        assert_eq!(rep.inverse_pair_count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let s = SignedPermutation::new(vec![1, 2, 0], vec![1, -1, 1]).unwrap();
        let rep = Representation::new(3, [("s", s.clone()), ("s_inv", s.inverse())], true).unwrap();
        let text = rep.to_json();
        assert!(text.starts_with(r#"{"n":3,"symmetric":true,"generators":[{"name":"s","#));
        assert_eq!(Representation::from_json(&text).unwrap(), rep);
        let bad = r#"{"n":2,"symmetric":false,"generators":[{"name":"a","targets":[1,0],"signs":[1,2]}]}"#;
        assert!(matches!(
            Representation::from_json(bad),
            Err(Error::Json(_))
        ));
    }
}
