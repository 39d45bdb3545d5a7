//! Deterministic generators of representations and graph families.
//!
//! Randomness comes from a single [`ChaCha8Rng`] seeded with
//! `seed_from_u64`; [`RNG_ALGORITHM`] names it in output metadata.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{canonical_label, equivalence_classes};
use crate::error::{Error, Result};
use crate::perm_rep::{orbit_decomposition, ComponentGraph, Representation, SignedPermutation};
use crate::spectral::edge_boundary;

pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.9)";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shift `s` with `(s v)_i = v_{i+1 mod n}` and its inverse; the component graph is `C_n`.
pub fn cycle_rep(n: usize) -> Result<Representation> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let s = SignedPermutation::unsigned((0..n).map(|i| (i + 1) % n).collect())?;
    Representation::new(n, [("s_inv", s.inverse()), ("s", s)], true)
}

pub fn cycle_graph(n: usize) -> ComponentGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    ComponentGraph::on_range(n, &edges).expect("cycle edges")
}

pub fn complete_graph(n: usize) -> ComponentGraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    ComponentGraph::on_range(n, &edges).expect("complete edges")
}

pub fn path_graph(n: usize) -> ComponentGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    ComponentGraph::on_range(n, &edges).expect("path edges")
}

/// `d` uniformly random derangements `g0..g{d-1}` of `{0..n-1}` plus their
/// inverses; every component graph is `2d`-regular.
pub fn random_regular_rep(n: usize, d: usize, seed: u64) -> Result<Representation> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "random regular family needs n >= 4, got {n}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut gens = Vec::with_capacity(2 * d);
    for k in 0..d {
        let mut targets: Vec<usize> = (0..n).collect();
        loop {
            targets.shuffle(&mut rng);
            if targets.iter().enumerate().all(|(i, &t)| i != t) {
                break;
            }
        }
        let g = SignedPermutation::unsigned(targets)?;
        gens.push((format!("g{k}_inv"), g.inverse()));
        gens.push((format!("g{k}"), g));
    }
    Representation::new(n, gens, true)
}

/// Degree-8 torus construction on `Z_n × Z_n`: `(x,y) ↦ (x+y,y)`, `(x,x+y)`,
/// `(x+1,y)`, `(x,y+1)` and inverses, indexing `(x,y)` as `x·n + y`.
pub fn margulis_rep(n: usize) -> Result<Representation> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "torus needs n >= 2, got {n}"
        )));
    }
    let idx = |x: usize, y: usize| (x % n) * n + (y % n);
    let maps: [(&str, Box<dyn Fn(usize, usize) -> usize>); 4] = [
        ("shear_x", Box::new(move |x, y| idx(x + y, y))),
        ("shear_y", Box::new(move |x, y| idx(x, x + y))),
        ("shift_x", Box::new(move |x, y| idx(x + 1, y))),
        ("shift_y", Box::new(move |x, y| idx(x, y + 1))),
    ];
    let mut gens = Vec::with_capacity(8);
    for (name, f) in maps {
        let targets = (0..n * n).map(|i| f(i / n, i % n)).collect();
        let g = SignedPermutation::unsigned(targets)?;
        gens.push((format!("{name}_inv"), g.inverse()));
        gens.push((name.to_string(), g));
    }
    Representation::new(n * n, gens, true)
}

/// Shape of a cycle-arc family: component sizes and the marked-arc fraction.
#[derive(Clone, Copy, Debug)]
pub struct NonExpanderParams {
    pub growth: fn(usize) -> usize,
    pub arc_fraction: f64,
}

pub fn square_growth(n: usize) -> usize {
    (n + 2) * (n + 2)
}

impl NonExpanderParams {
    /// Declared uniform bound on `ratio_sum`, known for the default shape only.
    pub fn ratio_bound(&self) -> Option<f64> {
        let default = NonExpanderParams::default();
        (std::ptr::fn_addr_eq(self.growth, default.growth)
            && self.arc_fraction == default.arc_fraction)
            .then_some(NONEXPANDER_RATIO_BOUND)
    }
}

impl Default for NonExpanderParams {
    fn default() -> Self {
        NonExpanderParams {
            growth: square_growth,
            arc_fraction: 0.5,
        }
    }
}

/// Uniform bound on `ratio_sum` for the default parameters: with
/// `#∂A/#A = 2/⌊m²/2⌋ <= 4/(m²-1)`, the sum over `m >= 3` telescopes to `5/3`.
pub const NONEXPANDER_RATIO_BOUND: f64 = 5.0 / 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkedComponent {
    pub indices: Vec<usize>,
    /// the marked arc `A_I`
    pub marked: Vec<usize>,
    pub boundary: usize,
}

/// Disjoint cycles `C_{size(n)}`, `n = 1..=depth`, each with a marked arc.
#[derive(Clone, Debug)]
pub struct NonExpanderFamily {
    pub depth: usize,
    pub rep: Representation,
    pub components: Vec<MarkedComponent>,
    /// `Σ_I #∂A_I / #A_I`
    pub ratio_sum: f64,
}

#[derive(Serialize)]
pub struct FamilyMetadata {
    pub family: &'static str,
    pub depth: usize,
    pub sizes: Vec<usize>,
    pub marked: Vec<Vec<usize>>,
    pub ratio_sum: f64,
    pub ratio_bound: Option<f64>,
}

impl NonExpanderFamily {
    pub fn metadata(&self, params: &NonExpanderParams) -> FamilyMetadata {
        FamilyMetadata {
            family: "nonexpander",
            depth: self.depth,
            sizes: self.components.iter().map(|c| c.indices.len()).collect(),
            marked: self.components.iter().map(|c| c.marked.clone()).collect(),
            ratio_sum: self.ratio_sum,
            ratio_bound: params.ratio_bound(),
        }
    }
}

pub fn nonexpander_family(depth: usize, params: &NonExpanderParams) -> Result<NonExpanderFamily> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let sizes: Vec<usize> = (1..=depth).map(params.growth).collect();
    let mut blocks = Vec::with_capacity(depth);
    let mut offset = 0;
    for &m in &sizes {
        if m < 3 {
            return Err(Error::InvalidArgument(format!("component size {m} < 3")));
        }
        let marked = (m as f64 * params.arc_fraction).floor() as usize;
        if marked == 0 || 2 * marked > m {
            return Err(Error::ArcTooLarge { marked, size: m });
        }
        blocks.push((offset, m, marked));
        offset += m;
    }
    let n = offset;
    let mut shift = vec![0; n];
    for &(o, m, _) in &blocks {
        for j in 0..m {
            shift[o + j] = o + (j + 1) % m;
        }
    }
    let s = SignedPermutation::unsigned(shift)?;
    let rep = Representation::new(n, [("s_inv", s.inverse()), ("s", s)], true)?;

    let orbits = orbit_decomposition(&rep);
    let mut components = Vec::with_capacity(depth);
    let mut ratio_sum = 0.0;
    for (orbit, &(o, m, marked)) in orbits.iter().zip(&blocks) {
        debug_assert_eq!(orbit.indices.len(), m);
        let arc: Vec<usize> = (o..o + marked).collect();
        let boundary = edge_boundary(&orbit.graph, &arc)?;
        ratio_sum += boundary as f64 / marked as f64;
        components.push(MarkedComponent {
            indices: orbit.indices.clone(),
            marked: arc,
            boundary,
        });
    }
    Ok(NonExpanderFamily {
        depth,
        rep,
        components,
        ratio_sum,
    })
}

/// One class of bounded components: permutations of `{0..size-1}` by generator
/// name. Generators missing from a spec act trivially on its copies.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpec {
    pub size: usize,
    pub generators: BTreeMap<String, Vec<usize>>,
}

impl ClassSpec {
    pub fn new<S: Into<String>>(
        size: usize,
        gens: impl IntoIterator<Item = (S, Vec<usize>)>,
    ) -> Self {
        ClassSpec {
            size,
            generators: gens.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

/// Three inequivalent transitive classes on generators `a`, `b` with sizes
/// 3, 2 and 5 (so `D = 5` suffices).
pub fn sample_class_specs() -> Vec<ClassSpec> {
    vec![
        ClassSpec::new(3, [("a", vec![1, 2, 0]), ("b", vec![0, 1, 2])]),
        ClassSpec::new(2, [("a", vec![1, 0]), ("b", vec![1, 0])]),
        ClassSpec::new(5, [("a", vec![1, 2, 3, 4, 0]), ("b", vec![1, 0, 2, 3, 4])]),
    ]
}

/// Disjoint union of `copies` copies of every class. Each spec must act
/// transitively on its letters and the specs must be pairwise inequivalent,
/// so the result has exactly `class_specs.len()` classes (when `copies > 0`).
pub fn bounded_family(
    d: usize,
    class_specs: &[ClassSpec],
    copies: usize,
) -> Result<Representation> {
    let names: BTreeSet<&str> = class_specs
        .iter()
        .flat_map(|c| c.generators.keys().map(String::as_str))
        .collect();
    for spec in class_specs {
        if spec.size == 0 || spec.size > d {
            return Err(Error::InvalidClassSpec(format!(
                "class size {} outside 1..={d}",
                spec.size
            )));
        }
        for (name, perm) in &spec.generators {
            if perm.len() != spec.size {
                return Err(Error::InvalidClassSpec(format!(
                    "generator `{name}` has {} entries for a class of size {}",
                    perm.len(),
                    spec.size
                )));
            }
            SignedPermutation::unsigned(perm.clone())?;
        }
    }
    let build = |copies: usize| -> Result<Representation> {
        let n = copies * class_specs.iter().map(|c| c.size).sum::<usize>();
        let mut targets: BTreeMap<&str, Vec<usize>> =
            names.iter().map(|&k| (k, (0..n).collect())).collect();
        let mut offset = 0;
        for spec in class_specs {
            for _ in 0..copies {
                for (name, perm) in &spec.generators {
                    let t = targets.get_mut(name.as_str()).expect("name collected");
                    for (j, &pj) in perm.iter().enumerate() {
                        t[offset + j] = offset + pj;
                    }
                }
                offset += spec.size;
            }
        }
        let gens = targets
            .into_iter()
            .map(|(k, t)| SignedPermutation::unsigned(t).map(|p| (k, p)))
            .collect::<Result<Vec<_>>>()?;
        Representation::with_detected_symmetry(n, gens)
    };

    // one copy of each class: check transitivity and pairwise inequivalence
    let probe = build(1)?;
    let orbits = orbit_decomposition(&probe);
    if orbits.len() != class_specs.len() {
        return Err(Error::InvalidClassSpec(
            "every class spec must act transitively on its letters".into(),
        ));
    }
    let labels = orbits
        .iter()
        .map(|c| canonical_label(&probe, c, d))
        .collect::<Result<Vec<_>>>()?;
    if equivalence_classes(&labels).len() != class_specs.len() {
        return Err(Error::InvalidClassSpec(
            "two class specs are equivalent under canonical labeling".into(),
        ));
    }
    build(copies)
}
