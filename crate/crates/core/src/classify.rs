//! Bounded components: canonical labels, equivalence classes, and the finite
//! covering set of group elements realizing every restriction of the action.
//!
//! Labels only look at the unsigned part of each generator.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::cocycle::{norm_pow, LpVector};
use crate::error::{Error, Result};
use crate::perm_rep::{orbit_decomposition, Component, Letter, Representation, Word};

/// Largest component size accepted by [`canonical_label`].
pub const MAX_D: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentLabel {
    pub size: usize,
    /// `Λ`: global index → label in `0..size`
    pub lambda: BTreeMap<usize, usize>,
    /// `H(π̃_g|_I)` as a permutation of labels, by generator name
    pub gen_perms: BTreeMap<String, Vec<usize>>,
}

impl ComponentLabel {
    /// Global indices in label order (`Λ⁻¹`).
    pub fn order(&self) -> Vec<usize> {
        let mut out = vec![0; self.size];
        for (&x, &k) in &self.lambda {
            out[k] = x;
        }
        out
    }

    /// Checks `H(π̃_g)(Λ(x)) = Λ(π̃_g(x))` for every generator and index.
    pub fn verify(&self, rep: &Representation) -> bool {
        rep.generators().all(|(name, g)| {
            let Some(h) = self.gen_perms.get(name) else {
                return false;
            };
            self.lambda
                .iter()
                .all(|(&x, &k)| self.lambda.get(&g.targets()[x]) == Some(&h[k]))
        })
    }

    fn key(&self) -> (usize, &BTreeMap<String, Vec<usize>>) {
        (self.size, &self.gen_perms)
    }
}

/// `Λ` is breadth-first order from the least index, visiting generators in
/// name order; `H` follows by conjugation.
pub fn canonical_label(
    rep: &Representation,
    component: &Component,
    d: usize,
) -> Result<ComponentLabel> {
    if d > MAX_D {
        return Err(Error::InvalidArgument(format!(
            "D = {d} exceeds the supported maximum {MAX_D}"
        )));
    }
    if component.len() > d {
        return Err(Error::ComponentTooLarge {
            size: component.len(),
            bound: d,
        });
    }
    label_unbounded(rep, component)
}

fn label_unbounded(rep: &Representation, component: &Component) -> Result<ComponentLabel> {
    let size = component.len();
    let mut lambda = BTreeMap::new();
    let mut order = Vec::with_capacity(size);
    if size > 0 {
        let mut queue = VecDeque::from([component.least()]);
        lambda.insert(component.least(), 0);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for (_, g) in rep.generators() {
                let y = g.targets()[x];
                if !lambda.contains_key(&y) {
                    lambda.insert(y, lambda.len());
                    queue.push_back(y);
                }
            }
        }
    }
    if lambda.len() != size || component.indices.iter().any(|i| !lambda.contains_key(i)) {
        return Err(Error::NotAnOrbit);
    }
    let gen_perms = rep
        .generators()
        .map(|(name, g)| {
            let h = order.iter().map(|&x| lambda[&g.targets()[x]]).collect();
            (name.to_string(), h)
        })
        .collect();
    Ok(ComponentLabel {
        size,
        lambda,
        gen_perms,
    })
}

/// Groups labels with identical `(size, gen_perms)`; classes and their members
/// are listed in order of first appearance.
pub fn equivalence_classes(labels: &[ComponentLabel]) -> Vec<Vec<usize>> {
    let mut index: HashMap<(usize, &BTreeMap<String, Vec<usize>>), usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let next = classes.len();
        let c = *index.entry(l.key()).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(i);
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringElement {
    /// per class, the element's permutation of labels
    pub tuple: Vec<Vec<usize>>,
    pub word: Option<Word>,
}

/// The subgroup generated by the per-class generator tuples, one entry per element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringSet {
    /// class id → indices into the label list
    pub classes: Vec<Vec<usize>>,
    /// one representative label per class
    #[serde(skip)]
    pub class_labels: Vec<ComponentLabel>,
    pub elements: Vec<CoveringElement>,
}

impl CoveringSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, tuple: &[Vec<usize>]) -> Option<usize> {
        self.elements.iter().position(|e| e.tuple == tuple)
    }

    /// The per-class restriction of a word's action, read in each class's labels.
    pub fn restriction(&self, rep: &Representation, word: &Word) -> Result<Vec<Vec<usize>>> {
        let g = rep.evaluate_word(word)?;
        Ok(self
            .class_labels
            .iter()
            .map(|l| {
                l.order()
                    .iter()
                    .map(|&x| l.lambda[&g.targets()[x]])
                    .collect()
            })
            .collect())
    }

    /// Class of a label, matched on `(size, gen_perms)`.
    pub fn class_of(&self, label: &ComponentLabel) -> Option<usize> {
        self.class_labels
            .iter()
            .position(|l| l.key() == label.key())
    }
}

/// Breadth-first closure of the per-class generator tuples under composition.
/// Each element keeps the shortest word (generators in name order) reaching it.
pub fn covering_set(labels: &[ComponentLabel]) -> CoveringSet {
    let classes = equivalence_classes(labels);
    let class_labels: Vec<ComponentLabel> = classes.iter().map(|c| labels[c[0]].clone()).collect();
    let names: Vec<String> = class_labels
        .first()
        .map(|l| l.gen_perms.keys().cloned().collect())
        .unwrap_or_default();
    let gens: Vec<Vec<&[usize]>> = names
        .iter()
        .map(|n| {
            class_labels
                .iter()
                .map(|l| l.gen_perms.get(n).map(Vec::as_slice).unwrap_or(&[]))
                .collect()
        })
        .collect();

    let identity: Vec<Vec<usize>> = class_labels.iter().map(|l| (0..l.size).collect()).collect();
    let mut seen: HashMap<Vec<Vec<usize>>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elements = vec![CoveringElement {
        tuple: identity,
        word: Some(Word::empty()),
    }];
    let mut head = 0;
    while head < elements.len() {
        for (name, g) in names.iter().zip(&gens) {
            // the word `w s` acts as `x ↦ s(w(x))` on targets
            let next: Vec<Vec<usize>> = elements[head]
                .tuple
                .iter()
                .zip(g)
                .map(|(w, s)| w.iter().map(|&x| s[x]).collect())
                .collect();
            if !seen.contains_key(&next) {
                let mut word = elements[head].word.clone().expect("BFS words are set");
                word.push(Letter::new(name.clone()));
                seen.insert(next.clone(), elements.len());
                elements.push(CoveringElement {
                    tuple: next,
                    word: Some(word),
                });
            }
        }
        head += 1;
    }
    CoveringSet {
        classes,
        class_labels,
        elements,
    }
}

/// Labels every component and builds the covering set in one go.
pub fn classify(rep: &Representation, d: usize) -> Result<(Vec<ComponentLabel>, CoveringSet)> {
    let labels = orbit_decomposition(rep)
        .iter()
        .map(|c| canonical_label(rep, c, d))
        .collect::<Result<Vec<_>>>()?;
    let q = covering_set(&labels);
    Ok((labels, q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedCaseReport {
    pub p: f64,
    pub q_size: usize,
    /// `Σ_{g∈Q} ‖π_g(v) - v‖_p^p`
    pub lhs: f64,
    /// `‖w̃‖_p^p`
    pub rhs: f64,
    pub chain_holds: bool,
    /// `max_g ‖π_g(v - w̃) - (v - w̃)‖_∞`
    pub fixed_point_residual: f64,
    /// `max_g ‖(π_g(w̃) - w̃) - (π_g(v) - v)‖_∞`
    pub coboundary_residual: f64,
    pub holds: bool,
}

/// Tolerance of the fixed-point identity, scaled by `max(1, ‖v‖_∞)`.
pub const FIXED_POINT_TOL: f64 = 1e-12;

/// `w̃_i = v_i - v_{i_I}` with `i_I` the least index of the component of `i`.
/// Every coordinate `j` is moved onto `i_I` by some element of `Q`, which gives
/// `‖w̃‖_p^p <= Σ_{g∈Q} ‖π_g(v) - v‖_p^p`; `v - w̃` is constant on components
/// and hence fixed. Requires an all-positive representation.
pub fn bounded_case_coboundary(
    rep: &Representation,
    v: &LpVector,
    q_set: &CoveringSet,
    p: f64,
) -> Result<(LpVector, BoundedCaseReport)> {
    if v.len() != rep.n() {
        return Err(Error::Dimension {
            expected: rep.n(),
            found: v.len(),
        });
    }
    if !rep.all_positive() {
        return Err(Error::InvalidArgument(
            "bounded case needs an all-positive representation".into(),
        ));
    }
    let x = v.coords();
    let components = orbit_decomposition(rep);
    let mut w = vec![0.0; rep.n()];
    let mut lhs = 0.0;
    for comp in &components {
        let base = x[comp.least()];
        for &i in &comp.indices {
            w[i] = x[i] - base;
        }
        let label = label_unbounded(rep, comp)?;
        let class = q_set.class_of(&label).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "component with least index {} is not covered by Q",
                comp.least()
            ))
        })?;
        let order = label.order();
        for e in &q_set.elements {
            let h = &e.tuple[class];
            lhs += order
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let d = x[order[h[k]]] - x[i];
                    d.abs().powf(p)
                })
                .sum::<f64>();
        }
    }
    let rhs = norm_pow(&w, p);
    let fixed: Vec<f64> = x.iter().zip(&w).map(|(a, b)| a - b).collect();
    let mut fixed_point_residual: f64 = 0.0;
    let mut coboundary_residual: f64 = 0.0;
    for (_, g) in rep.generators() {
        let t = g.targets();
        for i in 0..rep.n() {
            fixed_point_residual = fixed_point_residual.max((fixed[t[i]] - fixed[i]).abs());
            let bw = w[t[i]] - w[i];
            let bv = x[t[i]] - x[i];
            coboundary_residual = coboundary_residual.max((bw - bv).abs());
        }
    }
    let scale = x.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    let chain_holds = lhs >= rhs * (1.0 - 1e-12);
    let holds = chain_holds
        && fixed_point_residual <= FIXED_POINT_TOL * scale
        && coboundary_residual <= FIXED_POINT_TOL * scale;
    let report = BoundedCaseReport {
        p,
        q_size: q_set.len(),
        lhs,
        rhs,
        chain_holds,
        fixed_point_residual,
        coboundary_residual,
        holds,
    };
    Ok((LpVector::from_raw(v.exponent(), w), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Exponent;
    use crate::graphgen::{bounded_family, ClassSpec};
    use crate::perm_rep::SignedPermutation;

    fn rep_of(n: usize, gens: &[(&str, Vec<usize>)]) -> Representation {
        let g = gens
            .iter()
            .map(|(k, t)| (*k, SignedPermutation::unsigned(t.clone()).unwrap()));
        Representation::with_detected_symmetry(n, g).unwrap()
    }

    fn labels(rep: &Representation) -> Vec<ComponentLabel> {
        orbit_decomposition(rep)
            .iter()
            .map(|c| canonical_label(rep, c, 5).unwrap())
            .collect()
    }

    #[test]
    fn label_examples() {
        let swap = rep_of(2, &[("s", vec![1, 0])]);
        let l = &labels(&swap)[0];
        assert_eq!(l.gen_perms["s"], vec![1, 0]);
        assert!(l.verify(&swap));

        let single = rep_of(1, &[("a", vec![0]), ("b", vec![0])]);
        let l = &labels(&single)[0];
        assert!(l.gen_perms.values().all(|h| h == &vec![0]));

        // component {2, 5, 7} cycled 2 → 7 → 5 → 2
        let mut t: Vec<usize> = (0..8).collect();
        (t[2], t[7], t[5]) = (7, 5, 2);
        let cyc = rep_of(8, &[("c", t)]);
        let comps = orbit_decomposition(&cyc);
        let comp = comps.iter().find(|c| c.least() == 2).unwrap();
        let l = canonical_label(&cyc, comp, 5).unwrap();
        assert_eq!(l.order(), vec![2, 7, 5]);
        assert_eq!(l.gen_perms["c"], vec![1, 2, 0]);
        assert!(l.verify(&cyc));
        assert!(matches!(
            canonical_label(&cyc, comp, 2),
            Err(Error::ComponentTooLarge { size: 3, bound: 2 })
        ));
    }

    #[test]
    fn class_examples() {
        let two_copies = rep_of(6, &[("a", vec![1, 2, 0, 4, 5, 3])]);
        assert_eq!(equivalence_classes(&labels(&two_copies)), vec![vec![0, 1]]);
        let mixed = rep_of(6, &[("a", vec![1, 2, 0, 4, 3, 5])]);
        let ls = labels(&mixed);
        // {0,1,2}, {3,4}, {5}
        assert_eq!(equivalence_classes(&ls).len(), 3);
        assert!(equivalence_classes(&[]).is_empty());
    }

    #[test]
    fn covering_examples() {
        let cyc = rep_of(3, &[("a", vec![1, 2, 0])]);
        assert_eq!(covering_set(&labels(&cyc)).len(), 3);
        let id = rep_of(3, &[("a", vec![0, 1, 2])]);
        assert_eq!(covering_set(&labels(&id)).len(), 1);
        // two classes, each moved by its own swap
        let klein = rep_of(5, &[("a", vec![1, 0, 2, 3, 4]), ("b", vec![0, 1, 3, 4, 2])]);
        let q = covering_set(&labels(&klein));
        assert_eq!(q.classes.len(), 2);
        assert_eq!(q.len(), 6);
        let klein = rep_of(5, &[("a", vec![1, 0, 2, 3, 4]), ("b", vec![0, 1, 3, 2, 4])]);
        let q = covering_set(&labels(&klein));
        assert_eq!(q.classes.len(), 3);
        assert_eq!(q.len(), 4);
        for e in &q.elements {
            let w = e.word.as_ref().unwrap();
            assert_eq!(q.restriction(&klein, w).unwrap(), e.tuple);
        }
    }

    #[test]
    fn bounded_case_examples() {
        let swap = rep_of(2, &[("s", vec![1, 0])]);
        let (_, q) = classify(&swap, 5).unwrap();
        let v = LpVector::new(Exponent::Finite(2.0), vec![0.0, 1.0]).unwrap();
        let (w, r) = bounded_case_coboundary(&swap, &v, &q, 2.0).unwrap();
        assert_eq!(w.coords(), &[0.0, 1.0]);
        assert_eq!((r.lhs, r.rhs), (2.0, 1.0));
        assert!(r.holds);

        let fam = bounded_family(
            5,
            &[
                ClassSpec::new(3, [("a", vec![1, 2, 0]), ("b", vec![0, 1, 2])]),
                ClassSpec::new(2, [("a", vec![1, 0]), ("b", vec![1, 0])]),
            ],
            2,
        )
        .unwrap();
        let (_, q) = classify(&fam, 5).unwrap();
        let mut by_index = vec![0.0; fam.n()];
        for c in orbit_decomposition(&fam) {
            for &i in &c.indices {
                by_index[i] = c.least() as f64 + 0.5;
            }
        }
        let v = LpVector::new(Exponent::Finite(3.0), by_index).unwrap();
        let (w, r) = bounded_case_coboundary(&fam, &v, &q, 3.0).unwrap();
        assert!(w.coords().iter().all(|&x| x == 0.0));
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
    }
}
