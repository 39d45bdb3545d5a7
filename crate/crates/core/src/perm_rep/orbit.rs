//! Orbit decomposition and the multigraph carried by each orbit.

use super::Representation;
use crate::error::{Error, Result};

/// Disjoint sets with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Undirected multigraph on a set of global indices. Loops are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentGraph {
    vertices: Vec<usize>,
    /// endpoints as positions into `vertices`, `a < b`
    local: Vec<(usize, usize)>,
    degree: usize,
}

impl ComponentGraph {
    /// Builds a graph from global vertex labels and edges between them.
    pub fn from_edges(vertices: &[usize], edges: &[(usize, usize)]) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut local = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            let la = vs.binary_search(&a).map_err(|_| Error::NotASubset)?;
            let lb = vs.binary_search(&b).map_err(|_| Error::NotASubset)?;
            local.push((la.min(lb), la.max(lb)));
        }
        local.sort_unstable();
        let mut g = ComponentGraph {
            vertices: vs,
            local,
            degree: 0,
        };
        g.degree = g.degrees().into_iter().max().unwrap_or(0);
        Ok(g)
    }

    /// Graph on `0..n` given by local edges.
    pub fn on_range(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let vs: Vec<usize> = (0..n).collect();
        Self::from_edges(&vs, edges)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.local.len()
    }

    /// Edges as global index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.local
            .iter()
            .map(|&(a, b)| (self.vertices[a], self.vertices[b]))
    }

    /// Edges as positions into [`ComponentGraph::vertices`].
    pub fn local_edges(&self) -> &[(usize, usize)] {
        &self.local
    }

    pub fn local_index(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Max vertex degree, multi-edges counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.local {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    /// Local adjacency lists, one entry per edge (multi-edges repeat).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.local {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(n);
        let mut parts = n;
        for &(a, b) in &self.local {
            if uf.union(a, b) {
                parts -= 1;
            }
        }
        parts == 1
    }
}

/// One orbit of the underlying permutation action.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub indices: Vec<usize>,
    pub graph: ComponentGraph,
}

impl Component {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn least(&self) -> usize {
        self.indices[0]
    }
}

/// Orbits of the permutation action, sorted by least index.
pub fn orbit_decomposition(rep: &Representation) -> Vec<Component> {
    let n = rep.n();
    let mut uf = UnionFind::new(n);
    for (_, g) in rep.generators() {
        for (i, &t) in g.targets().iter().enumerate() {
            uf.union(i, t);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = uf.find(i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
        .into_iter()
        .map(|indices| {
            let graph = edges_of(rep, &indices);
            Component { indices, graph }
        })
        .collect()
}

/// The multigraph of one orbit: an edge `{a, π̃_g(a)}` per vertex `a` moved by a
/// generator `g`. For symmetric representations each `{g, g⁻¹}` class
/// contributes its edges once, which is the same as keeping only the arcs with
/// `a < π̃_g(a)` across all generators.
pub fn component_graph(rep: &Representation, indices: &[usize]) -> Result<ComponentGraph> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.last().is_some_and(|&m| m >= rep.n()) {
        return Err(Error::NotAnOrbit);
    }
    let mut member = vec![false; rep.n()];
    for &i in &sorted {
        member[i] = true;
    }
    for (_, g) in rep.generators() {
        if sorted.iter().any(|&i| !member[g.targets()[i]]) {
            return Err(Error::NotAnOrbit);
        }
    }
    let graph = edges_of(rep, &sorted);
    if !graph.is_connected() {
        return Err(Error::NotAnOrbit);
    }
    Ok(graph)
}

fn edges_of(rep: &Representation, sorted: &[usize]) -> ComponentGraph {
    let symmetric = rep.is_symmetric();
    let mut edges = Vec::new();
    for (_, g) in rep.generators() {
        for &a in sorted {
            let b = g.targets()[a];
            if b == a || (symmetric && b < a) {
                continue;
            }
            edges.push((a, b));
        }
    }
    ComponentGraph::from_edges(sorted, &edges).expect("orbit edges stay inside the orbit")
}

/// Flags the components on which `v` vanishes identically (the zero set `J`).
/// Indices stay stable; callers skip flagged components instead of re-indexing.
pub fn zero_set_mask(components: &[Component], v: &[f64]) -> Vec<bool> {
    components
        .iter()
        .map(|c| c.indices.iter().all(|&i| v[i] == 0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_rep::SignedPermutation;

    fn cyc(n: usize, c: &[usize]) -> SignedPermutation {
        SignedPermutation::from_cycles(n, &[c]).unwrap()
    }

    #[test]
    fn union_find() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 3));
        assert!(uf.union(3, 4));
        assert!(!uf.union(4, 0));
        assert_eq!(uf.find(0), uf.find(4));
        assert_ne!(uf.find(1), uf.find(0));
    }

    #[test]
    fn decomposition_examples() {
        let rep = Representation::new(
            6,
            [("a", cyc(6, &[0, 1])), ("b", cyc(6, &[2, 3, 4]))],
            false,
        )
        .unwrap();
        let comps = orbit_decomposition(&rep);
        let idx: Vec<&[usize]> = comps.iter().map(|c| c.indices.as_slice()).collect();
        assert_eq!(idx, vec![&[0, 1][..], &[2, 3, 4], &[5]]);

        let full = Representation::new(7, [("s", cyc(7, &[0, 3, 6, 1, 4, 2, 5]))], false).unwrap();
        assert_eq!(orbit_decomposition(&full).len(), 1);

        let none = Representation::new(4, Vec::<(String, _)>::new(), false).unwrap();
        let comps = orbit_decomposition(&none);
        assert_eq!(comps.len(), 4);
        assert!(comps
            .iter()
            .all(|c| c.len() == 1 && c.graph.edge_count() == 0));
    }

    #[test]
    fn graph_examples() {
        let s = cyc(5, &[0, 1, 2, 3, 4]);
        let rep = Representation::new(5, [("s", s.clone()), ("s_inv", s.inverse())], true).unwrap();
        let g = component_graph(&rep, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert!(g.is_regular() && g.degree() == 2);

        let swap = Representation::new(2, [("s", cyc(2, &[0, 1]))], true).unwrap();
        let g = component_graph(&swap, &[0, 1]).unwrap();
        assert_eq!((g.edge_count(), g.degree()), (1, 1));

        let two = Representation::new(
            4,
            [("a", cyc(4, &[0, 1, 2, 3])), ("b", cyc(4, &[0, 2, 1, 3]))],
            false,
        )
        .unwrap();
        let g = component_graph(&two, &[0, 1, 2, 3]).unwrap();
        assert_eq!(g.edge_count(), 8);
        assert!(g.is_regular() && g.degree() == 4);
    }

    #[test]
    fn graph_rejects_non_orbits() {
        let rep = Representation::new(
            6,
            [("a", cyc(6, &[0, 1])), ("b", cyc(6, &[2, 3, 4]))],
            false,
        )
        .unwrap();
        assert!(matches!(
            component_graph(&rep, &[0, 2]),
            Err(Error::NotAnOrbit)
        ));
        assert!(matches!(
            component_graph(&rep, &[0, 1, 5]),
            Err(Error::NotAnOrbit)
        ));
        assert!(matches!(component_graph(&rep, &[]), Err(Error::NotAnOrbit)));
        assert!(component_graph(&rep, &[4, 2, 3]).is_ok());
    }

    #[test]
    fn graph_from_edges() {
        assert!(ComponentGraph::from_edges(&[0, 1], &[(0, 0)]).is_err());
        assert!(matches!(
            ComponentGraph::from_edges(&[0, 1], &[(0, 2)]),
            Err(Error::NotASubset)
        ));
        let g = ComponentGraph::from_edges(&[3, 7, 9], &[(3, 7), (3, 7), (7, 9)]).unwrap();
        assert_eq!(g.degrees(), vec![2, 3, 1]);
        assert_eq!(g.degree(), 3);
        assert!(g.is_connected() && !g.is_regular());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(3, 7), (3, 7), (7, 9)]);
    }

    #[test]
    fn zero_mask() {
        let rep = Representation::new(4, [("a", cyc(4, &[0, 1]))], false).unwrap();
        let comps = orbit_decomposition(&rep);
        assert_eq!(
            zero_set_mask(&comps, &[0.0, 0.0, 1.0, 0.0]),
            vec![true, false, true]
        );
    }
}
