//! Linkings: total leaf functions between shapes that satisfy the
//! switching criterion. These are the morphisms of the free
//! star-autonomous category over the base.
//!
//! A linking `S -> T` is a partial leaf function on the signed leaf sets
//! of `S` and `T` that is total on its domain, restricts to a
//! label-compatible bijection on generator leaves, leaves unit-sourced
//! edges unlabelled, and whose every switching is a tree.

use std::fmt;

use thiserror::Error;

use crate::base::{BaseGraph, PathMorphism};
use crate::criterion::{CriterionGraph, SwitchingFailure, SwitchingWitness};
use crate::goi::{Endpoint, GoiError, PartialLeafFun, Side, SignedSet};
use crate::shape::{Atom, Shape, Sign};

/// Default cap on brute-force switching enumeration (2^20 switchings).
pub const DEFAULT_SWITCHING_BOUND: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkingError {
    #[error("edge error: {0}")]
    Edge(#[from] GoiError),
    #[error("domain leaf {0} has no edge")]
    MissingEdge(Endpoint),
    #[error("unit-sourced edge at {0} must be unlabelled")]
    UnitEdgeLabelled(Endpoint),
    #[error("generator edge {from} -> {to} has no label")]
    GenEdgeUnlabelled { from: Endpoint, to: Endpoint },
    #[error("generator edge {from} -> {to} lands on a unit leaf")]
    GenEdgeToUnit { from: Endpoint, to: Endpoint },
    #[error("generator leaf {0} is matched by {1} edges, expected exactly one")]
    GenLeafMatched(Endpoint, usize),
    #[error("label on {from} -> {to} is a path {found_src} -> {found_tgt}, expected {want_src} -> {want_tgt}")]
    LabelEndpoints {
        from: Endpoint,
        to: Endpoint,
        want_src: String,
        want_tgt: String,
        found_src: String,
        found_tgt: String,
    },
    #[error("switching criterion fails")]
    Criterion { witness: Option<SwitchingWitness> },
    #[error("too many switched tensors for brute force: {0} > bound {1}")]
    TooManySwitchings(usize, usize),
    #[error("middle shapes differ: cannot compose")]
    ShapeMismatch,
    #[error("shape has unexpected form: {0}")]
    BadShape(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A candidate or checked linking between two shapes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Linking {
    source: Shape,
    target: Shape,
    fun: PartialLeafFun,
}

impl Linking {
    /// Assemble a linking from raw edges; shape conditions are *not*
    /// checked here (see [`Linking::check`]), only endpoint sanity.
    pub fn from_edges(
        source: Shape,
        target: Shape,
        edges: impl IntoIterator<Item = (Endpoint, Endpoint, Option<PathMorphism>)>,
    ) -> Result<Linking, LinkingError> {
        let mut fun = PartialLeafFun::empty(source.leaves(), target.leaves());
        for (from, to, label) in edges {
            fun.insert_edge(from, to, label)?;
        }
        Ok(Linking {
            source,
            target,
            fun,
        })
    }

    pub fn from_fun(source: Shape, target: Shape, fun: PartialLeafFun) -> Linking {
        debug_assert_eq!(*fun.source(), source.leaves());
        debug_assert_eq!(*fun.target(), target.leaves());
        Linking {
            source,
            target,
            fun,
        }
    }

    pub fn source(&self) -> &Shape {
        &self.source
    }

    pub fn target(&self) -> &Shape {
        &self.target
    }

    pub fn fun(&self) -> &PartialLeafFun {
        &self.fun
    }

    fn atom_at(&self, e: Endpoint) -> Option<&Atom> {
        match e.side {
            Side::Source => self.fun.source().atom(e.index),
            Side::Target => self.fun.target().atom(e.index),
        }
    }

    /// Totality, generator bijection and label conditions.
    pub fn check_structure(&self) -> Result<(), LinkingError> {
        for d in self.fun.domain() {
            if self.fun.lookup(d).is_none() {
                return Err(LinkingError::MissingEdge(d));
            }
        }
        // count hits on codomain generator leaves by generator edges
        let mut hits: std::collections::BTreeMap<Endpoint, usize> = self
            .fun
            .codomain()
            .into_iter()
            .filter(|e| !self.atom_at(*e).expect("codomain leaf").is_unit())
            .map(|e| (e, 0))
            .collect();
        for (from, edge) in self.fun.edges() {
            let from_atom = self.atom_at(from).expect("domain leaf").clone();
            let to_atom = self.atom_at(edge.to).expect("codomain leaf").clone();
            match from_atom.generator() {
                None => {
                    if edge.label.is_some() {
                        return Err(LinkingError::UnitEdgeLabelled(from));
                    }
                }
                Some(g_from) => {
                    let Some(g_to) = to_atom.generator() else {
                        return Err(LinkingError::GenEdgeToUnit {
                            from,
                            to: edge.to,
                        });
                    };
                    let Some(label) = &edge.label else {
                        return Err(LinkingError::GenEdgeUnlabelled {
                            from,
                            to: edge.to,
                        });
                    };
                    if label.source != g_from || label.target != g_to {
                        return Err(LinkingError::LabelEndpoints {
                            from,
                            to: edge.to,
                            want_src: g_from.to_string(),
                            want_tgt: g_to.to_string(),
                            found_src: label.source.clone(),
                            found_tgt: label.target.clone(),
                        });
                    }
                    *hits.get_mut(&edge.to).expect("generator codomain leaf") += 1;
                }
            }
        }
        for (leaf, n) in hits {
            if n != 1 {
                return Err(LinkingError::GenLeafMatched(leaf, n));
            }
        }
        Ok(())
    }

    /// The switching graph: all parse-tree vertices of both shapes, tree
    /// edges, and the linking edges. Switched tensors are the positive
    /// tensors of the source and the negative tensors of the target,
    /// registered in traversal order (source first).
    pub fn criterion_graph(&self) -> CriterionGraph {
        let mut g = CriterionGraph::new(0);
        let src = add_shape_tree(&mut g, &self.source, Sign::Pos);
        let tgt = add_shape_tree(&mut g, &self.target, Sign::Neg);
        let leaf_vertex = |e: Endpoint| match e.side {
            Side::Source => src.leaves[e.index],
            Side::Target => tgt.leaves[e.index],
        };
        for (from, edge) in self.fun.edges() {
            g.add_edge(leaf_vertex(from), leaf_vertex(edge.to));
        }
        g
    }

    /// Full validity check with the near-linear criterion decider. On a
    /// criterion failure, a replayable witness is attached when the
    /// switching count permits brute-force extraction.
    pub fn check(&self) -> Result<(), LinkingError> {
        self.check_structure()?;
        let g = self.criterion_graph();
        if g.check_fast() {
            return Ok(());
        }
        let witness = match g.check_bruteforce(DEFAULT_SWITCHING_BOUND) {
            Err(Ok(w)) => Some(w),
            _ => None,
        };
        Err(LinkingError::Criterion { witness })
    }

    /// Full validity check with the brute-force switching enumerator.
    pub fn check_oracle(&self, bound: usize) -> Result<(), LinkingError> {
        self.check_structure()?;
        match self.criterion_graph().check_bruteforce(bound) {
            Ok(()) => Ok(()),
            Err(Ok(w)) => Err(LinkingError::Criterion { witness: Some(w) }),
            Err(Err(t)) => Err(LinkingError::TooManySwitchings(t.switched, t.bound)),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// Re-run one particular switching from a witness.
    pub fn replay_switching(&self, choices: &[bool]) -> Result<(), SwitchingFailure> {
        self.criterion_graph().switching_is_tree(choices)
    }

    /// Composition by path chasing. Both operands are assumed valid; an
    /// invalid composite is reported as an internal fault.
    pub fn compose(&self, other: &Linking) -> Result<Linking, LinkingError> {
        if self.target != other.source {
            return Err(LinkingError::ShapeMismatch);
        }
        let fun = self
            .fun
            .compose(&other.fun)
            .map_err(|e| LinkingError::Internal(format!("path composition failed: {e}")))?;
        let out = Linking {
            source: self.source.clone(),
            target: other.target.clone(),
            fun,
        };
        out.check()
            .map_err(|e| LinkingError::Internal(format!("composite is not a linking: {e}")))?;
        Ok(out)
    }

    /// Compatibility: the union directed graph of two composable linkings
    /// on the three leaf sets is acyclic. Guaranteed for valid linkings;
    /// exposed so the theorem can be tested directly.
    pub fn compatibility_check(&self, other: &Linking) -> Result<bool, LinkingError> {
        if self.target != other.source {
            return Err(LinkingError::ShapeMismatch);
        }
        // nodes: 0..nx = X leaves, nx..nx+ny = Y (middle), then Z; every
        // node has at most one outgoing edge, so cycle detection is a
        // simple chase with a global visited set
        let (nx, ny) = (self.fun.source().len(), self.fun.target().len());
        let node_f = |e: Endpoint| match e.side {
            Side::Source => e.index,
            Side::Target => nx + e.index,
        };
        let node_g = |e: Endpoint| match e.side {
            Side::Source => nx + e.index,
            Side::Target => nx + ny + e.index,
        };
        let total = nx + ny + other.fun.target().len();
        let mut next = vec![usize::MAX; total];
        for (from, edge) in self.fun.edges() {
            next[node_f(from)] = node_f(edge.to);
        }
        for (from, edge) in other.fun.edges() {
            next[node_g(from)] = node_g(edge.to);
        }
        let mut state = vec![0u8; total]; // 0 unseen, 1 on stack, 2 done
        for start in 0..total {
            if state[start] != 0 {
                continue;
            }
            let mut path = vec![start];
            state[start] = 1;
            let mut at = start;
            while next[at] != usize::MAX {
                at = next[at];
                match state[at] {
                    1 => return Ok(false), // cycle
                    2 => break,
                    _ => {
                        state[at] = 1;
                        path.push(at);
                    }
                }
            }
            for v in path {
                state[v] = 2;
            }
        }
        Ok(true)
    }

    // ---- canonical morphisms -------------------------------------------

    /// `id_S`, with identity labels on generator leaves.
    pub fn identity(s: &Shape) -> Linking {
        let leaves = s.leaves();
        let edges = paired_edges(&leaves, &leaves, |i| i, 0);
        Linking::from_edges(s.clone(), s.clone(), edges).expect("identity is well-formed")
    }

    /// The single-edge linking `a -> b` carrying the path `p : a -> b`.
    pub fn from_path(p: PathMorphism) -> Linking {
        let (s, t) = (Shape::gen(&p.source), Shape::gen(&p.target));
        Linking::from_edges(
            s,
            t,
            vec![(Endpoint::source(0), Endpoint::target(0), Some(p))],
        )
        .expect("generator linking is well-formed")
    }

    /// The generating arrow `x` of the base as a linking.
    pub fn gen(base: &BaseGraph, arrow: &str) -> Result<Linking, LinkingError> {
        let p = base
            .arrow_path(arrow)
            .map_err(|e| LinkingError::BadShape(e.to_string()))?;
        Ok(Linking::from_path(p))
    }

    /// Symmetry `S (x) T -> T (x) S`.
    pub fn sym(s: &Shape, t: &Shape) -> Linking {
        let (ns, nt) = (s.leaf_count(), t.leaf_count());
        let src = Shape::tensor(s.clone(), t.clone());
        let tgt = Shape::tensor(t.clone(), s.clone());
        let (sl, tl) = (src.leaves(), tgt.leaves());
        let edges = paired_edges(&sl, &tl, |i| if i < ns { nt + i } else { i - ns }, 0);
        Linking::from_edges(src, tgt, edges).expect("sym is well-formed")
    }

    /// Associativity `(S (x) T) (x) U -> S (x) (T (x) U)` (the leaf order
    /// is unchanged, so this is the identity pairing).
    pub fn assoc(s: &Shape, t: &Shape, u: &Shape) -> Linking {
        let src = Shape::tensor(Shape::tensor(s.clone(), t.clone()), u.clone());
        let tgt = Shape::tensor(s.clone(), Shape::tensor(t.clone(), u.clone()));
        let (sl, tl) = (src.leaves(), tgt.leaves());
        let edges = paired_edges(&sl, &tl, |i| i, 0);
        Linking::from_edges(src, tgt, edges).expect("assoc is well-formed")
    }

    pub fn assoc_inv(s: &Shape, t: &Shape, u: &Shape) -> Linking {
        let src = Shape::tensor(s.clone(), Shape::tensor(t.clone(), u.clone()));
        let tgt = Shape::tensor(Shape::tensor(s.clone(), t.clone()), u.clone());
        let (sl, tl) = (src.leaves(), tgt.leaves());
        let edges = paired_edges(&sl, &tl, |i| i, 0);
        Linking::from_edges(src, tgt, edges).expect("assoc_inv is well-formed")
    }

    /// Left unit map `l : S -> I (x) S`. The added unit leaf is positive
    /// on the target side, hence a codomain leaf needing no edge.
    pub fn unit_l(s: &Shape) -> Linking {
        let tgt = Shape::tensor(Shape::unit(), s.clone());
        let (sl, tl) = (s.leaves(), tgt.leaves());
        let edges = paired_edges(&sl, &tl, |i| i + 1, 0);
        Linking::from_edges(s.clone(), tgt, edges).expect("unit_l is well-formed")
    }

    /// Right unit map `r : S -> S (x) I`.
    pub fn unit_r(s: &Shape) -> Linking {
        let tgt = Shape::tensor(s.clone(), Shape::unit());
        let (sl, tl) = (s.leaves(), tgt.leaves());
        let edges = paired_edges(&sl, &tl, |i| i, 0);
        Linking::from_edges(s.clone(), tgt, edges).expect("unit_r is well-formed")
    }

    /// Retraction `I (x) S -> S`. The unit leaf is a domain leaf here; it
    /// attaches to the codomain copy of the first leaf of `S` (the
    /// paper's target is arbitrary; this choice is deterministic, and any
    /// two choices are similar).
    pub fn unit_l_inv(s: &Shape) -> Linking {
        let src = Shape::tensor(Shape::unit(), s.clone());
        let (sl, tl) = (src.leaves(), s.leaves());
        let mut edges = paired_edges_skipping(&sl, &tl, |i| i.checked_sub(1));
        edges.push((
            Endpoint::source(0),
            anchor_codomain(&tl, 0, 1),
            None,
        ));
        Linking::from_edges(src, s.clone(), edges).expect("unit_l_inv is well-formed")
    }

    /// Retraction `S (x) I -> S`.
    pub fn unit_r_inv(s: &Shape) -> Linking {
        let n = s.leaf_count();
        let src = Shape::tensor(s.clone(), Shape::unit());
        let (sl, tl) = (src.leaves(), s.leaves());
        let mut edges = paired_edges_skipping(&sl, &tl, |i| if i < n { Some(i) } else { None });
        edges.push((
            Endpoint::source(n),
            anchor_codomain(&tl, 0, 0),
            None,
        ));
        Linking::from_edges(src, s.clone(), edges).expect("unit_r_inv is well-formed")
    }

    /// `f (x) g`, placing `g`'s leaves after `f`'s on both sides.
    pub fn tensor_mor(f: &Linking, g: &Linking) -> Linking {
        let (ns, nt) = (f.source.leaf_count(), f.target.leaf_count());
        let shift = |e: Endpoint, off_s: usize, off_t: usize| match e.side {
            Side::Source => Endpoint::source(e.index + off_s),
            Side::Target => Endpoint::target(e.index + off_t),
        };
        let mut edges = Vec::new();
        for (from, edge) in f.fun.edges() {
            edges.push((from, edge.to, edge.label.clone()));
        }
        for (from, edge) in g.fun.edges() {
            edges.push((
                shift(from, ns, nt),
                shift(edge.to, ns, nt),
                edge.label.clone(),
            ));
        }
        let src = Shape::tensor(f.source.clone(), g.source.clone());
        let tgt = Shape::tensor(f.target.clone(), g.target.clone());
        Linking::from_edges(src, tgt, edges).expect("tensor of linkings is well-formed")
    }

    /// Contravariant dual `f* : T' -> S'`: every endpoint swaps sides,
    /// keeping its index, direction and label.
    pub fn dual_mor(f: &Linking) -> Linking {
        let flip = |e: Endpoint| match e.side {
            Side::Source => Endpoint::target(e.index),
            Side::Target => Endpoint::source(e.index),
        };
        let edges: Vec<_> = f
            .fun
            .edges()
            .map(|(from, edge)| (flip(from), flip(edge.to), edge.label.clone()))
            .collect();
        let src = Shape::dual(f.target.clone());
        let tgt = Shape::dual(f.source.clone());
        Linking::from_edges(src, tgt, edges).expect("dual of a linking is well-formed")
    }

    /// Transpose `f : S (x) T -> U'` into `S -> (T (x) U)'`.
    pub fn curry(f: &Linking) -> Result<Linking, LinkingError> {
        let Shape::Tensor(s, t) = &f.source else {
            return Err(LinkingError::BadShape(format!(
                "curry needs a tensor source, got {}",
                f.source
            )));
        };
        let Shape::Dual(u) = &f.target else {
            return Err(LinkingError::BadShape(format!(
                "curry needs a dual target, got {}",
                f.target
            )));
        };
        let (s, t) = (s.as_ref().clone(), t.as_ref().clone());
        let (ns, nt) = (s.leaf_count(), t.leaf_count());
        let tgt = Shape::dual(Shape::tensor(t, u.as_ref().clone()));
        let remap = |e: Endpoint| match e.side {
            Side::Source if e.index < ns => Endpoint::source(e.index),
            Side::Source => Endpoint::target(e.index - ns),
            Side::Target => Endpoint::target(nt + e.index),
        };
        let edges: Vec<_> = f
            .fun
            .edges()
            .map(|(from, edge)| (remap(from), remap(edge.to), edge.label.clone()))
            .collect();
        Ok(Linking::from_edges(s, tgt, edges).expect("curry is well-formed"))
    }

    /// Inverse transpose: `g : S -> (T (x) U)'` into `S (x) T -> U'`.
    pub fn uncurry(g: &Linking) -> Result<Linking, LinkingError> {
        let bad = || {
            LinkingError::BadShape(format!(
                "uncurry needs a target of the form (T*U)', got {}",
                g.target
            ))
        };
        let Shape::Dual(inner) = &g.target else {
            return Err(bad());
        };
        let Shape::Tensor(t, u) = inner.as_ref() else {
            return Err(bad());
        };
        let (t, u) = (t.as_ref().clone(), Shape::dual(u.as_ref().clone()));
        let (ns, nt) = (g.source.leaf_count(), t.leaf_count());
        let src = Shape::tensor(g.source.clone(), t);
        let remap = |e: Endpoint| match e.side {
            Side::Source => Endpoint::source(e.index),
            Side::Target if e.index < nt => Endpoint::source(ns + e.index),
            Side::Target => Endpoint::target(e.index - nt),
        };
        let edges: Vec<_> = g
            .fun
            .edges()
            .map(|(from, edge)| (remap(from), remap(edge.to), edge.label.clone()))
            .collect();
        Ok(Linking::from_edges(src, u, edges).expect("uncurry is well-formed"))
    }
}

impl fmt::Display for Linking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} -> {}", self.source, self.target)?;
        for (from, edge) in self.fun.edges() {
            match &edge.label {
                Some(p) => writeln!(f, "  {from} -> {} [{p}]", edge.to)?,
                None => writeln!(f, "  {from} -> {}", edge.to)?,
            }
        }
        Ok(())
    }
}

/// Vertex layout of one shape tree inside a criterion graph.
pub(crate) struct TreeLayout {
    pub root: usize,
    pub leaves: Vec<usize>,
}

/// Add the full parse tree of `shape` to `g`. Tensors whose sign equals
/// `switched_when` are switched.
pub(crate) fn add_shape_tree(
    g: &mut CriterionGraph,
    shape: &Shape,
    switched_when: Sign,
) -> TreeLayout {
    fn go(
        g: &mut CriterionGraph,
        shape: &Shape,
        sign: Sign,
        switched_when: Sign,
        leaves: &mut Vec<usize>,
    ) -> usize {
        match shape {
            Shape::Atom(_) => {
                let v = g.add_vertex();
                leaves.push(v);
                v
            }
            Shape::Tensor(l, r) => {
                let v = g.add_vertex();
                let lv = go(g, l, sign, switched_when, leaves);
                let rv = go(g, r, sign, switched_when, leaves);
                if sign == switched_when {
                    g.add_switched(v, lv, rv);
                } else {
                    g.add_edge(v, lv);
                    g.add_edge(v, rv);
                }
                v
            }
            Shape::Dual(s) => {
                let v = g.add_vertex();
                let cv = go(g, s, sign.flip(), switched_when, leaves);
                g.add_edge(v, cv);
                v
            }
        }
    }
    let mut leaves = Vec::new();
    let root = go(g, shape, Sign::Pos, switched_when, &mut leaves);
    TreeLayout { root, leaves }
}

fn identity_label(atom: &Atom) -> Option<PathMorphism> {
    atom.generator().map(PathMorphism::identity)
}

/// Identity-labelled pairing edges: source leaf `i` pairs with target
/// leaf `f(i) + off` (directed by sign). Signs and atoms must match.
fn paired_edges(
    src: &SignedSet,
    tgt: &SignedSet,
    f: impl Fn(usize) -> usize,
    off: usize,
) -> Vec<(Endpoint, Endpoint, Option<PathMorphism>)> {
    paired_edges_skipping(src, tgt, |i| Some(f(i) + off))
}

fn paired_edges_skipping(
    src: &SignedSet,
    tgt: &SignedSet,
    f: impl Fn(usize) -> Option<usize>,
) -> Vec<(Endpoint, Endpoint, Option<PathMorphism>)> {
    let mut out = Vec::new();
    for (i, (atom, sign)) in src.entries().iter().enumerate() {
        let Some(j) = f(i) else { continue };
        let (t_atom, t_sign) = &tgt.entries()[j];
        debug_assert_eq!(atom, t_atom, "paired leaves must agree");
        debug_assert_eq!(sign, t_sign);
        let label = identity_label(atom);
        match sign {
            Sign::Pos => out.push((Endpoint::source(i), Endpoint::target(j), label)),
            Sign::Neg => out.push((Endpoint::target(j), Endpoint::source(i), label)),
        }
    }
    out
}

/// Codomain endpoint of the `leaf`-th target leaf: its target copy when
/// positive there, else its source copy at `src_index_of_leaf`.
fn anchor_codomain(tgt: &SignedSet, leaf: usize, src_index_of_leaf: usize) -> Endpoint {
    match tgt.sign(leaf).expect("anchor leaf exists") {
        Sign::Pos => Endpoint::target(leaf),
        Sign::Neg => Endpoint::source(src_index_of_leaf),
    }
}
