//! The correctness criterion on switching graphs.
//!
//! A switching graph is an undirected graph where some vertices are
//! *switched tensors*: each carries two argument edges, and a switching
//! keeps exactly one of the two. The criterion holds when every switching
//! is a tree.
//!
//! Two deciders are provided: an exponential brute force that enumerates
//! switchings (and produces a replayable witness on failure), and a
//! near-linear contraction on a union-find structure.

use std::collections::BTreeMap;

/// A switched tensor vertex with its two argument edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchedTensor {
    pub vertex: usize,
    pub left: usize,
    pub right: usize,
}

/// An undirected graph with ordinary edges and switched tensors.
#[derive(Debug, Clone, Default)]
pub struct CriterionGraph {
    vertices: usize,
    unswitched: Vec<(usize, usize)>,
    switched: Vec<SwitchedTensor>,
}

/// Why a particular switching is not a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchingFailure {
    Disconnected,
    Cyclic,
}

/// A failing switching: for each switched tensor, `false` keeps the left
/// argument edge and `true` the right one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingWitness {
    pub choices: Vec<bool>,
    pub failure: SwitchingFailure,
}

/// Brute force was cut off: too many switched tensors to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TooManySwitchings {
    pub switched: usize,
    pub bound: usize,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already in the same class.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl CriterionGraph {
    pub fn new(vertices: usize) -> Self {
        CriterionGraph {
            vertices,
            unswitched: Vec::new(),
            switched: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a < self.vertices && b < self.vertices);
        self.unswitched.push((a, b));
    }

    pub fn add_switched(&mut self, vertex: usize, left: usize, right: usize) {
        debug_assert!(vertex < self.vertices && left < self.vertices && right < self.vertices);
        self.switched.push(SwitchedTensor {
            vertex,
            left,
            right,
        });
    }

    pub fn switched_count(&self) -> usize {
        self.switched.len()
    }

    /// Edge list of one switching.
    pub fn switching_edges(&self, choices: &[bool]) -> Vec<(usize, usize)> {
        assert_eq!(choices.len(), self.switched.len());
        let mut edges = self.unswitched.clone();
        for (t, pick_right) in self.switched.iter().zip(choices) {
            edges.push((t.vertex, if *pick_right { t.right } else { t.left }));
        }
        edges
    }

    /// Is one particular switching a tree?
    pub fn switching_is_tree(&self, choices: &[bool]) -> Result<(), SwitchingFailure> {
        let edges = self.switching_edges(choices);
        let mut dsu = Dsu::new(self.vertices);
        let mut merges = 0usize;
        for (a, b) in edges {
            if dsu.union(a, b) {
                merges += 1;
            } else {
                return Err(SwitchingFailure::Cyclic);
            }
        }
        if merges + 1 == self.vertices {
            Ok(())
        } else {
            Err(SwitchingFailure::Disconnected)
        }
    }

    /// Enumerate all `2^k` switchings; `Err(Ok(w))` is a failing witness,
    /// `Err(Err(..))` means `k` exceeded `bound`.
    pub fn check_bruteforce(
        &self,
        bound: usize,
    ) -> Result<(), Result<SwitchingWitness, TooManySwitchings>> {
        let k = self.switched.len();
        if k > bound {
            return Err(Err(TooManySwitchings {
                switched: k,
                bound,
            }));
        }
        for mask in 0u64..(1u64 << k) {
            let choices: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            if let Err(failure) = self.switching_is_tree(&choices) {
                return Err(Ok(SwitchingWitness { choices, failure }));
            }
        }
        Ok(())
    }

    /// Near-linear decision by contraction.
    ///
    /// Every unswitched edge is merged; a switched tensor contracts once
    /// its two argument classes coincide while differing from its own.
    /// The criterion holds iff everything contracts to a single class.
    pub fn check_fast(&self) -> bool {
        let n = self.vertices;
        let k = self.switched.len();
        if n == 0 {
            return true;
        }
        // every switching has the same edge count; a tree needs n - 1
        if self.unswitched.len() + k != n - 1 {
            return false;
        }
        let mut dsu = Dsu::new(n);
        for &(a, b) in &self.unswitched {
            if !dsu.union(a, b) {
                return false; // cycle among unswitched edges
            }
        }
        // pending[root] lists switched tensors one of whose argument
        // classes currently has this root; lazy deletion via done[]
        let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut done = vec![false; k];
        let mut remaining = k;
        // unions still to perform (from contractions)
        let mut queue: Vec<(usize, usize)> = Vec::new();
        for (i, t) in self.switched.iter().enumerate() {
            let (rl, rr) = (dsu.find(t.left), dsu.find(t.right));
            if rl == rr {
                let rv = dsu.find(t.vertex);
                if rv == rl {
                    return false; // stuck: can never contract
                }
                done[i] = true;
                remaining -= 1;
                queue.push((t.vertex, t.left));
            } else {
                pending[rl].push(i);
                pending[rr].push(i);
            }
        }
        while let Some((a, b)) = queue.pop() {
            let (ra, rb) = (dsu.find(a), dsu.find(b));
            if ra == rb {
                continue;
            }
            // small-to-large on the pending lists
            let (winner, loser) = if pending[ra].len() >= pending[rb].len() {
                (ra, rb)
            } else {
                (rb, ra)
            };
            dsu.parent[loser] = winner;
            let moved = std::mem::take(&mut pending[loser]);
            for i in moved {
                if done[i] {
                    continue;
                }
                let t = self.switched[i];
                let (rl, rr) = (dsu.find(t.left), dsu.find(t.right));
                if rl == rr {
                    let rv = dsu.find(t.vertex);
                    if rv == rl {
                        return false;
                    }
                    done[i] = true;
                    remaining -= 1;
                    queue.push((t.vertex, t.left));
                } else {
                    pending[winner].push(i);
                }
            }
        }
        if remaining != 0 {
            return false;
        }
        let root = dsu.find(0);
        (0..n).all(|v| dsu.find(v) == root)
    }

    /// Connected components of the graph where every edge (switched or
    /// not) is present; useful in diagnostics.
    pub fn components_all_edges(&self) -> usize {
        let mut dsu = Dsu::new(self.vertices);
        let mut merges = 0usize;
        for &(a, b) in &self.unswitched {
            if dsu.union(a, b) {
                merges += 1;
            }
        }
        for t in &self.switched {
            if dsu.union(t.vertex, t.left) {
                merges += 1;
            }
            if dsu.union(t.vertex, t.right) {
                merges += 1;
            }
        }
        self.vertices - merges
    }

    /// Group vertices by component in the full graph, for error messages.
    pub fn component_map(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut dsu = Dsu::new(self.vertices);
        for &(a, b) in &self.unswitched {
            dsu.union(a, b);
        }
        for t in &self.switched {
            dsu.union(t.vertex, t.left);
            dsu.union(t.vertex, t.right);
        }
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices {
            map.entry(dsu.find(v)).or_default().push(v);
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// path graph 0-1-2: every (empty) switching is a tree
    #[test]
    fn path_is_correct() {
        let mut g = CriterionGraph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        assert!(g.check_fast());
        assert_eq!(g.check_bruteforce(20), Ok(()));
    }

    /// triangle: cyclic
    #[test]
    fn triangle_fails() {
        let mut g = CriterionGraph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        assert!(!g.check_fast());
        match g.check_bruteforce(20) {
            Err(Ok(w)) => assert_eq!(w.failure, SwitchingFailure::Cyclic),
            other => panic!("expected cyclic witness, got {other:?}"),
        }
    }

    /// two isolated vertices: disconnected
    #[test]
    fn disconnected_fails() {
        let g = CriterionGraph::new(2);
        assert!(!g.check_fast());
        match g.check_bruteforce(20) {
            Err(Ok(w)) => assert_eq!(w.failure, SwitchingFailure::Disconnected),
            other => panic!("expected disconnected witness, got {other:?}"),
        }
    }

    /// one switched tensor whose arguments are joined by an edge: both
    /// switchings are trees
    #[test]
    fn simple_switched_correct() {
        // vertices: 0 = tensor, 1 = left arg, 2 = right arg
        let mut g = CriterionGraph::new(3);
        g.add_edge(1, 2);
        g.add_switched(0, 1, 2);
        assert!(g.check_fast());
        assert_eq!(g.check_bruteforce(20), Ok(()));
    }

    /// switched tensor whose arguments are NOT otherwise connected: the
    /// switching that drops the needed edge disconnects the graph
    #[test]
    fn switched_disconnected_side() {
        let mut g = CriterionGraph::new(3);
        g.add_switched(0, 1, 2);
        // edge budget: 0 + 1 != 2, early reject in fast path
        assert!(!g.check_fast());
        match g.check_bruteforce(20) {
            Err(Ok(w)) => assert_eq!(w.failure, SwitchingFailure::Disconnected),
            other => panic!("expected disconnected witness, got {other:?}"),
        }
    }

    /// switched tensor with a cycle through its own vertex gets stuck
    #[test]
    fn switched_cycle_through_vertex() {
        // 0 tensor; args 1 and 2; path 1-3-0 and edge 2-3 makes both
        // switchings cyclic or disconnected depending on counts
        let mut g = CriterionGraph::new(4);
        g.add_switched(0, 1, 2);
        g.add_edge(1, 3);
        g.add_edge(3, 0);
        g.add_edge(2, 3);
        // budget: 3 + 1 = 4 edges for 4 vertices => not a tree ever
        assert!(!g.check_fast());
        assert!(matches!(g.check_bruteforce(20), Err(Ok(_))));
    }

    /// chained switched tensors that contract only after cascading unions
    #[test]
    fn cascading_contraction() {
        // t1 = (0; 1, 2) with 1-2 edge; t2 = (3; 0, 4) with 4 joined to
        // the t1 cluster only through 0's contraction.
        let mut g = CriterionGraph::new(5);
        g.add_edge(1, 2);
        g.add_switched(0, 1, 2);
        g.add_edge(4, 1);
        g.add_switched(3, 0, 4);
        assert!(g.check_fast());
        assert_eq!(g.check_bruteforce(20), Ok(()));
    }

    #[test]
    fn bruteforce_bound_respected() {
        let mut g = CriterionGraph::new(1);
        let v = 0;
        let mut last = v;
        for _ in 0..25 {
            let t = g.add_vertex();
            let l = g.add_vertex();
            let r = g.add_vertex();
            g.add_edge(l, r);
            g.add_edge(last, l);
            g.add_switched(t, l, r);
            last = t;
        }
        assert!(matches!(g.check_bruteforce(20), Err(Err(_))));
        assert!(g.check_fast());
    }

    /// fast and brute force agree on a batch of small random graphs
    #[test]
    fn deciders_agree_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..8);
            let mut g = CriterionGraph::new(n);
            let e = rng.gen_range(0..n + 2);
            for _ in 0..e {
                g.add_edge(rng.gen_range(0..n), rng.gen_range(0..n));
            }
            let k = rng.gen_range(0..3.min(n));
            for _ in 0..k {
                g.add_switched(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
            }
            let brute = g.check_bruteforce(20).is_ok();
            assert_eq!(g.check_fast(), brute, "graph {g:?}");
        }
    }

    #[test]
    fn large_chain_is_fast() {
        // a long caterpillar of switched tensors; sanity perf smoke test
        let mut g = CriterionGraph::new(1);
        let mut last = 0;
        for _ in 0..100_000 {
            let t = g.add_vertex();
            let l = g.add_vertex();
            let r = g.add_vertex();
            g.add_edge(l, r);
            g.add_edge(last, l);
            g.add_switched(t, l, r);
            last = t;
        }
        assert!(g.check_fast());
    }
}
