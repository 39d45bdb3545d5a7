//! Edge boundaries and Cheeger constants, exact by subset enumeration or
//! estimated by a spectral sweep cut.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::eigen::fiedler;
use crate::error::{Error, Result};
use crate::perm_rep::ComponentGraph;

/// Largest vertex count the exhaustive search accepts by default.
pub const EXHAUSTIVE_CAP: usize = 24;

/// Nonnegative reduced fraction `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A subset `A` with `0 < #A <= #X/2` and its boundary ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct CheegerCut {
    pub ratio: Ratio,
    /// global vertex labels of `A`, sorted
    pub set: Vec<usize>,
}

impl CheegerCut {
    pub fn value(&self) -> f64 {
        self.ratio.to_f64()
    }
}

/// Number of edges (with multiplicity) having exactly one endpoint in `subset`.
pub fn edge_boundary(graph: &ComponentGraph, subset: &[usize]) -> Result<usize> {
    let mut inside = vec![false; graph.vertex_count()];
    for &v in subset {
        let i = graph.local_index(v).ok_or(Error::NotASubset)?;
        inside[i] = true;
    }
    Ok(graph
        .local_edges()
        .iter()
        .filter(|&&(a, b)| inside[a] != inside[b])
        .count())
}

/// Exact `h(X) = min #∂A/#A over 0 < #A <= #X/2`, by Gray-code enumeration.
///
/// Only subsets avoiding the last vertex are walked; each one is scored both
/// as itself and as its complement, since the boundary is shared.
pub fn cheeger_exact(graph: &ComponentGraph, cap: usize) -> Result<CheegerCut> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if n > cap.min(63) {
        return Err(Error::ExhaustiveCapExceeded { size: n, cap });
    }
    let adj = graph.adjacency();
    let deg: Vec<i64> = adj.iter().map(|a| a.len() as i64).collect();
    let half = n / 2;
    let free = n - 1;

    let mut mask: u64 = 0;
    let mut boundary: i64 = 0;
    let mut best: Option<(Ratio, u64)> = None;
    for step in 1u64..(1u64 << free) {
        let v = step.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let inside = adj[v].iter().filter(|&&u| mask >> u & 1 == 1).count() as i64;
        if mask & bit == 0 {
            boundary += deg[v] - 2 * inside;
        } else {
            boundary -= deg[v] - 2 * inside;
        }
        mask ^= bit;

        let k = mask.count_ones() as usize;
        let b = boundary as u64;
        if k <= half {
            consider(&mut best, b, k, mask);
        }
        if n - k <= half {
            let complement = !mask & ((1u64 << n) - 1);
            consider(&mut best, b, n - k, complement);
        }
    }
    let (ratio, set) = best.expect("n >= 2 admits a subset");
    Ok(CheegerCut {
        ratio,
        set: (0..n)
            .filter(|&i| set >> i & 1 == 1)
            .map(|i| graph.vertices()[i])
            .collect(),
    })
}

fn consider(best: &mut Option<(Ratio, u64)>, boundary: u64, size: usize, set: u64) {
    let r = Ratio::new(boundary, size as u64);
    if best.is_none_or(|(b, _)| r < b) {
        *best = Some((r, set));
    }
}

/// Upper bound on `h(X)` from sweep cuts along the Fiedler vector: prefixes of
/// the vertices sorted by coordinate, from both ends, of size at most `#X/2`.
pub fn cheeger_sweep(graph: &ComponentGraph) -> Result<CheegerCut> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let (_, f) = fiedler(graph)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let adj = graph.adjacency();

    let mut best: Option<(Ratio, Vec<usize>)> = None;
    for sweep in [order.clone(), order.into_iter().rev().collect::<Vec<_>>()] {
        let mut inside = vec![false; n];
        let mut boundary: i64 = 0;
        for (k, &v) in sweep.iter().take(n / 2).enumerate() {
            let cnt = adj[v].iter().filter(|&&u| inside[u]).count() as i64;
            boundary += adj[v].len() as i64 - 2 * cnt;
            inside[v] = true;
            let r = Ratio::new(boundary as u64, k as u64 + 1);
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, sweep[..=k].to_vec()));
            }
        }
    }
    let (ratio, local) = best.expect("n >= 2 gives a nonempty sweep");
    let mut set: Vec<usize> = local.into_iter().map(|i| graph.vertices()[i]).collect();
    set.sort_unstable();
    Ok(CheegerCut { ratio, set })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> ComponentGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ComponentGraph::on_range(n, &edges).unwrap()
    }

    fn complete(n: usize) -> ComponentGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        ComponentGraph::on_range(n, &edges).unwrap()
    }

    /// Recomputes every admissible subset from scratch.
    fn brute_force(g: &ComponentGraph) -> Ratio {
        let n = g.vertex_count();
        let mut best: Option<Ratio> = None;
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as u64;
            if k as usize > n / 2 {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let r = Ratio::new(edge_boundary(g, &set).unwrap() as u64, k);
            best = Some(best.map_or(r, |b| b.min(r)));
        }
        best.unwrap()
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(edge_boundary(&cycle(6), &[0, 1, 2]).unwrap(), 2);
        assert_eq!(edge_boundary(&cycle(6), &[]).unwrap(), 0);
        assert_eq!(edge_boundary(&complete(4), &[1, 3]).unwrap(), 4);
        assert!(matches!(
            edge_boundary(&cycle(4), &[9]),
            Err(Error::NotASubset)
        ));
    }

    #[test]
    fn exact_examples() {
        let c8 = cheeger_exact(&cycle(8), EXHAUSTIVE_CAP).unwrap();
        assert_eq!(c8.ratio, Ratio::new(1, 2));
        assert_eq!(c8.set.len(), 4);
        assert_eq!(edge_boundary(&cycle(8), &c8.set).unwrap(), 2);
        assert_eq!(
            cheeger_exact(&complete(4), 24).unwrap().ratio,
            Ratio::new(2, 1)
        );
        let edge = ComponentGraph::on_range(2, &[(0, 1)]).unwrap();
        assert_eq!(cheeger_exact(&edge, 24).unwrap().ratio, Ratio::new(1, 1));
    }

    #[test]
    fn exact_matches_brute_force_on_small_graphs() {
        let petersen_outer: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let mut petersen = petersen_outer.clone();
        petersen.extend((0..5).map(|i| (i, i + 5)));
        petersen.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        let graphs = [
            cycle(5),
            cycle(9),
            complete(6),
            ComponentGraph::on_range(10, &petersen).unwrap(),
            ComponentGraph::on_range(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(cheeger_exact(g, 24).unwrap().ratio, brute_force(g));
        }
    }

    #[test]
    fn cap_and_size_errors() {
        assert!(matches!(
            cheeger_exact(&cycle(30), 24),
            Err(Error::ExhaustiveCapExceeded { size: 30, .. })
        ));
        let single = ComponentGraph::on_range(1, &[]).unwrap();
        assert!(matches!(
            cheeger_exact(&single, 24),
            Err(Error::TooSmall(1))
        ));
    }

    #[test]
    fn sweep_examples() {
        let s = cheeger_sweep(&cycle(8)).unwrap().value();
        assert!((0.5..=1.0).contains(&s));
        assert_eq!(cheeger_sweep(&complete(4)).unwrap().ratio, Ratio::new(2, 1));
        let p4 = ComponentGraph::on_range(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(cheeger_sweep(&p4).unwrap().ratio, Ratio::new(1, 2));
    }

    #[test]
    fn ratio_ordering_and_display() {
        assert!(Ratio::new(1, 3) < Ratio::new(1, 2));
        assert_eq!(Ratio::new(4, 8), Ratio::new(1, 2));
        assert_eq!(Ratio::new(0, 5).to_string(), "0/1");
        assert_eq!(Ratio::new(6, 4).to_string(), "3/2");
    }
}
