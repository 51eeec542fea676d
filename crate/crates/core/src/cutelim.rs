//! One-sided linkings with cuts, and cut elimination.
//!
//! A one-sided linking lives on a sequent of shapes plus cut pairs. Each
//! cut stores a shape `S` once; its partner `S'` is derived, with leaf
//! `i` of `S` paired to leaf `i` of `S'`. Cut elimination removes cuts by
//! decomposing the stored shape at the root, composing labels along the
//! way; the turbo variant collapses all cuts in a single chase.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::base::PathMorphism;
use crate::criterion::{CriterionGraph, SwitchingWitness};
use crate::goi::{Endpoint, Side};
use crate::linking::{add_shape_tree, Linking, DEFAULT_SWITCHING_BOUND};
use crate::shape::{Atom, CutSequent, Shape, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutSide {
    Kept,
    Partner,
}

impl CutSide {
    pub fn flip(self) -> CutSide {
        match self {
            CutSide::Kept => CutSide::Partner,
            CutSide::Partner => CutSide::Kept,
        }
    }
}

/// A leaf address in a one-sided linking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OsLeaf {
    Seq { tree: usize, leaf: usize },
    Cut { cut: usize, side: CutSide, leaf: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OsError {
    #[error("leaf address {0:?} is out of range")]
    BadLeaf(OsLeaf),
    #[error("negative leaf {0:?} has no edge")]
    MissingEdge(OsLeaf),
    #[error("edge from positive leaf {0:?}")]
    EdgeFromPositive(OsLeaf),
    #[error("edge into negative leaf {0:?}")]
    EdgeIntoNegative(OsLeaf),
    #[error("duplicate edge from {0:?}")]
    DuplicateEdge(OsLeaf),
    #[error("unit-sourced edge at {0:?} must be unlabelled")]
    UnitEdgeLabelled(OsLeaf),
    #[error("generator edge {0:?} -> {1:?} has no label")]
    GenEdgeUnlabelled(OsLeaf, OsLeaf),
    #[error("generator edge {0:?} -> {1:?} lands on a unit leaf")]
    GenEdgeToUnit(OsLeaf, OsLeaf),
    #[error("generator leaf {0:?} is matched by {1} edges, expected exactly one")]
    GenLeafMatched(OsLeaf, usize),
    #[error("label on {0:?} -> {1:?} has wrong endpoints")]
    LabelEndpoints(OsLeaf, OsLeaf),
    #[error("switching criterion fails")]
    Criterion { witness: Option<SwitchingWitness> },
    #[error("too many switched tensors for brute force: {0} > bound {1}")]
    TooManySwitchings(usize, usize),
    #[error("no cut at index {0}")]
    NoSuchCut(usize),
    #[error("unexpected form: {0}")]
    BadForm(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Order in which cuts are eliminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// A one-sided linking: shapes plus directed, optionally labelled edges
/// from negative to positive leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneSidedLinking {
    shapes: CutSequent,
    edges: BTreeMap<OsLeaf, (OsLeaf, Option<PathMorphism>)>,
}

impl OneSidedLinking {
    pub fn new(shapes: CutSequent) -> OneSidedLinking {
        OneSidedLinking {
            shapes,
            edges: BTreeMap::new(),
        }
    }

    pub fn shapes(&self) -> &CutSequent {
        &self.shapes
    }

    pub fn edges(&self) -> impl Iterator<Item = (OsLeaf, OsLeaf, Option<&PathMorphism>)> {
        self.edges.iter().map(|(k, (to, lab))| (*k, *to, lab.as_ref()))
    }

    fn shape_of(&self, l: OsLeaf) -> Option<&Shape> {
        match l {
            OsLeaf::Seq { tree, .. } => self.shapes.sequent.get(tree),
            OsLeaf::Cut { cut, .. } => self.shapes.cuts.get(cut),
        }
    }

    /// Sign of the leaf in the one-sided reading (partner copies flip).
    pub fn sign_of(&self, l: OsLeaf) -> Option<Sign> {
        let shape = self.shape_of(l)?;
        let leaf = match l {
            OsLeaf::Seq { leaf, .. } | OsLeaf::Cut { leaf, .. } => leaf,
        };
        let sign = shape.leaves().sign(leaf)?;
        Some(match l {
            OsLeaf::Cut {
                side: CutSide::Partner,
                ..
            } => sign.flip(),
            _ => sign,
        })
    }

    pub fn atom_of(&self, l: OsLeaf) -> Option<Atom> {
        let shape = self.shape_of(l)?;
        let leaf = match l {
            OsLeaf::Seq { leaf, .. } | OsLeaf::Cut { leaf, .. } => leaf,
        };
        shape.leaves().atom(leaf).cloned()
    }

    /// All negative (edge-carrying) leaves, in address order.
    pub fn negative_leaves(&self) -> Vec<OsLeaf> {
        self.all_leaves()
            .into_iter()
            .filter(|l| self.sign_of(*l) == Some(Sign::Neg))
            .collect()
    }

    fn all_leaves(&self) -> Vec<OsLeaf> {
        let mut out = Vec::new();
        for (tree, s) in self.shapes.sequent.iter().enumerate() {
            for leaf in 0..s.leaf_count() {
                out.push(OsLeaf::Seq { tree, leaf });
            }
        }
        for (cut, s) in self.shapes.cuts.iter().enumerate() {
            for side in [CutSide::Kept, CutSide::Partner] {
                for leaf in 0..s.leaf_count() {
                    out.push(OsLeaf::Cut { cut, side, leaf });
                }
            }
        }
        out
    }

    pub fn add_edge(
        &mut self,
        from: OsLeaf,
        to: OsLeaf,
        label: Option<PathMorphism>,
    ) -> Result<(), OsError> {
        match self.sign_of(from) {
            None => return Err(OsError::BadLeaf(from)),
            Some(Sign::Pos) => return Err(OsError::EdgeFromPositive(from)),
            Some(Sign::Neg) => {}
        }
        match self.sign_of(to) {
            None => return Err(OsError::BadLeaf(to)),
            Some(Sign::Neg) => return Err(OsError::EdgeIntoNegative(to)),
            Some(Sign::Pos) => {}
        }
        if self.edges.contains_key(&from) {
            return Err(OsError::DuplicateEdge(from));
        }
        self.edges.insert(from, (to, label));
        Ok(())
    }

    // ---- textual addressing --------------------------------------------
    //
    // Trees are numbered globally: sequent trees first, then for each cut
    // its kept tree followed by its partner tree.

    pub fn tree_count(&self) -> usize {
        self.shapes.sequent.len() + 2 * self.shapes.cuts.len()
    }

    pub fn leaf_from_tree_index(&self, tree: usize, leaf: usize) -> Option<OsLeaf> {
        let n = self.shapes.sequent.len();
        let l = if tree < n {
            OsLeaf::Seq { tree, leaf }
        } else {
            let k = tree - n;
            OsLeaf::Cut {
                cut: k / 2,
                side: if k % 2 == 0 {
                    CutSide::Kept
                } else {
                    CutSide::Partner
                },
                leaf,
            }
        };
        self.sign_of(l).map(|_| l)
    }

    pub fn tree_index_of(&self, l: OsLeaf) -> (usize, usize) {
        let n = self.shapes.sequent.len();
        match l {
            OsLeaf::Seq { tree, leaf } => (tree, leaf),
            OsLeaf::Cut { cut, side, leaf } => (
                n + 2 * cut + if side == CutSide::Kept { 0 } else { 1 },
                leaf,
            ),
        }
    }

    pub fn leaf_name(&self, l: OsLeaf) -> String {
        let (tree, leaf) = self.tree_index_of(l);
        format!("g{tree}.{leaf}")
    }

    // ---- checking ------------------------------------------------------

    pub fn check_structure(&self) -> Result<(), OsError> {
        for l in self.negative_leaves() {
            if !self.edges.contains_key(&l) {
                return Err(OsError::MissingEdge(l));
            }
        }
        let mut hits: BTreeMap<OsLeaf, usize> = self
            .all_leaves()
            .into_iter()
            .filter(|l| {
                self.sign_of(*l) == Some(Sign::Pos)
                    && !self.atom_of(*l).expect("leaf in range").is_unit()
            })
            .map(|l| (l, 0))
            .collect();
        for (&from, (to, label)) in &self.edges {
            let from_atom = self.atom_of(from).expect("leaf in range");
            let to_atom = self.atom_of(*to).expect("leaf in range");
            match from_atom.generator() {
                None => {
                    if label.is_some() {
                        return Err(OsError::UnitEdgeLabelled(from));
                    }
                }
                Some(g_from) => {
                    let Some(g_to) = to_atom.generator() else {
                        return Err(OsError::GenEdgeToUnit(from, *to));
                    };
                    let Some(p) = label else {
                        return Err(OsError::GenEdgeUnlabelled(from, *to));
                    };
                    if p.source != g_from || p.target != g_to {
                        return Err(OsError::LabelEndpoints(from, *to));
                    }
                    *hits.get_mut(to).expect("generator positive leaf") += 1;
                }
            }
        }
        for (l, n) in hits {
            if n != 1 {
                return Err(OsError::GenLeafMatched(l, n));
            }
        }
        Ok(())
    }

    /// The switching graph: every tree (partner trees as literal duals,
    /// so with their own root dual vertex), all negative tensors
    /// switched, one unswitched cut edge joining the roots of each cut
    /// pair, plus the linking edges.
    pub fn criterion_graph(&self) -> CriterionGraph {
        let mut g = CriterionGraph::new(0);
        let mut layouts = Vec::new();
        for s in &self.shapes.sequent {
            layouts.push(add_shape_tree(&mut g, s, Sign::Neg));
        }
        for s in &self.shapes.cuts {
            let kept = add_shape_tree(&mut g, s, Sign::Neg);
            let partner = add_shape_tree(&mut g, &Shape::dual(s.clone()), Sign::Neg);
            g.add_edge(kept.root, partner.root);
            layouts.push(kept);
            layouts.push(partner);
        }
        for (&from, (to, _)) in &self.edges {
            let (ft, fl) = self.tree_index_of(from);
            let (tt, tl) = self.tree_index_of(*to);
            g.add_edge(layouts[ft].leaves[fl], layouts[tt].leaves[tl]);
        }
        g
    }

    pub fn check(&self) -> Result<(), OsError> {
        self.check_structure()?;
        let g = self.criterion_graph();
        if g.check_fast() {
            return Ok(());
        }
        let witness = match g.check_bruteforce(DEFAULT_SWITCHING_BOUND) {
            Err(Ok(w)) => Some(w),
            _ => None,
        };
        Err(OsError::Criterion { witness })
    }

    pub fn check_oracle(&self, bound: usize) -> Result<(), OsError> {
        self.check_structure()?;
        match self.criterion_graph().check_bruteforce(bound) {
            Ok(()) => Ok(()),
            Err(Ok(w)) => Err(OsError::Criterion { witness: Some(w) }),
            Err(Err(t)) => Err(OsError::TooManySwitchings(t.switched, t.bound)),
        }
    }

    // ---- cut elimination ----------------------------------------------

    fn remap_edges(&mut self, f: impl Fn(OsLeaf) -> OsLeaf) {
        let old = std::mem::take(&mut self.edges);
        for (from, (to, label)) in old {
            self.edges.insert(f(from), (f(to), label));
        }
    }

    /// One elimination step on cut `c`, decomposing the stored shape at
    /// its root connective.
    pub fn eliminate_cut(&mut self, c: usize) -> Result<(), OsError> {
        let shape = self
            .shapes
            .cuts
            .get(c)
            .ok_or(OsError::NoSuchCut(c))?
            .clone();
        match shape {
            Shape::Atom(_) => {
                let l_neg = OsLeaf::Cut {
                    cut: c,
                    side: CutSide::Partner,
                    leaf: 0,
                };
                let l_pos = OsLeaf::Cut {
                    cut: c,
                    side: CutSide::Kept,
                    leaf: 0,
                };
                let (t, y) = self
                    .edges
                    .remove(&l_neg)
                    .ok_or(OsError::MissingEdge(l_neg))?;
                if t == l_pos {
                    return Err(OsError::Internal(
                        "cut pair is linked to itself (cyclic net)".into(),
                    ));
                }
                // reroute everything aimed at the kept copy to t
                for (_, (to, label)) in self.edges.iter_mut() {
                    if *to == l_pos {
                        *to = t;
                        *label = match (label.take(), y.clone()) {
                            (Some(x), Some(y)) => Some(
                                x.compose(&y)
                                    .map_err(|e| OsError::Internal(e.to_string()))?,
                            ),
                            _ => None,
                        };
                    }
                }
                self.shapes.cuts.remove(c);
                self.remap_edges(|l| match l {
                    OsLeaf::Cut { cut, side, leaf } if cut > c => OsLeaf::Cut {
                        cut: cut - 1,
                        side,
                        leaf,
                    },
                    other => other,
                });
                Ok(())
            }
            Shape::Tensor(left, right) => {
                let n_left = left.leaf_count();
                self.shapes.cuts[c] = *left;
                self.shapes.cuts.insert(c + 1, *right);
                self.remap_edges(|l| match l {
                    OsLeaf::Cut { cut, side, leaf } if cut == c => {
                        if leaf < n_left {
                            l
                        } else {
                            OsLeaf::Cut {
                                cut: c + 1,
                                side,
                                leaf: leaf - n_left,
                            }
                        }
                    }
                    OsLeaf::Cut { cut, side, leaf } if cut > c => OsLeaf::Cut {
                        cut: cut + 1,
                        side,
                        leaf,
                    },
                    other => other,
                });
                Ok(())
            }
            Shape::Dual(inner) => {
                self.shapes.cuts[c] = *inner;
                self.remap_edges(|l| match l {
                    OsLeaf::Cut { cut, side, leaf } if cut == c => OsLeaf::Cut {
                        cut,
                        side: side.flip(),
                        leaf,
                    },
                    other => other,
                });
                Ok(())
            }
        }
    }

    /// Eliminate every cut, one step at a time, in strategy order.
    pub fn normalize(&mut self, strategy: Strategy) -> Result<(), OsError> {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        while !self.shapes.cuts.is_empty() {
            let c = match strategy {
                Strategy::Leftmost => 0,
                Strategy::Rightmost => self.shapes.cuts.len() - 1,
                Strategy::Random(_) => rng
                    .as_mut()
                    .expect("rng for random strategy")
                    .gen_range(0..self.shapes.cuts.len()),
            };
            self.eliminate_cut(c)?;
        }
        Ok(())
    }

    /// Collapse all cuts in one pass: chase every negative sequent leaf
    /// through the cut pairs (jumping between the two copies of each cut
    /// leaf) until it reaches a positive sequent leaf. Chains that loop
    /// forever through the cuts are dropped.
    pub fn turbo_normalize(&self) -> Result<OneSidedLinking, OsError> {
        let mut out = OneSidedLinking::new(
            CutSequent::new(self.shapes.sequent.clone(), Vec::new())
                .ok_or_else(|| OsError::BadForm("empty sequent part".into()))?,
        );
        for start in self.negative_leaves() {
            if matches!(start, OsLeaf::Cut { .. }) {
                continue;
            }
            let mut labels: Vec<Option<PathMorphism>> = Vec::new();
            let mut visited: BTreeSet<OsLeaf> = BTreeSet::new();
            let mut at = start;
            let end = loop {
                let Some((to, label)) = self.edges.get(&at) else {
                    return Err(OsError::MissingEdge(at));
                };
                labels.push(label.clone());
                match *to {
                    l @ OsLeaf::Seq { .. } => break Some(l),
                    OsLeaf::Cut { cut, side, leaf } => {
                        let partner = OsLeaf::Cut {
                            cut,
                            side: side.flip(),
                            leaf,
                        };
                        if !visited.insert(partner) {
                            break None; // cycle through the cuts
                        }
                        at = partner;
                    }
                }
            };
            if let Some(end) = end {
                let label = combine_labels(&labels)?;
                out.add_edge(start, end, label)?;
            }
        }
        Ok(out)
    }

    // ---- two-sided conversion ------------------------------------------

    /// View `f : S -> T` as the one-sided linking on `[S', T]`.
    pub fn from_two_sided(f: &Linking) -> OneSidedLinking {
        let shapes = CutSequent::new(
            vec![Shape::dual(f.source().clone()), f.target().clone()],
            Vec::new(),
        )
        .expect("nonempty");
        let mut os = OneSidedLinking::new(shapes);
        for (from, edge) in f.fun().edges() {
            os.add_edge(os_of(from), os_of(edge.to), edge.label.clone())
                .expect("two-sided edges transfer");
        }
        os
    }

    /// Inverse of [`OneSidedLinking::from_two_sided`]: requires a cut-free
    /// linking on exactly `[S', T]`.
    pub fn to_two_sided(&self) -> Result<Linking, OsError> {
        if !self.shapes.cuts.is_empty() {
            return Err(OsError::BadForm("cuts remain".into()));
        }
        let [first, target] = self.shapes.sequent.as_slice() else {
            return Err(OsError::BadForm(
                "expected a two-tree sequent [S', T]".into(),
            ));
        };
        let Shape::Dual(source) = first else {
            return Err(OsError::BadForm("first tree is not a dual".into()));
        };
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|(&from, (to, label))| Ok((ep_of(from)?, ep_of(*to)?, label.clone())))
            .collect::<Result<_, OsError>>()?;
        Linking::from_edges(source.as_ref().clone(), target.clone(), edges)
            .map_err(|e| OsError::Internal(e.to_string()))
    }
}

impl fmt::Display for OneSidedLinking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.shapes)?;
        for (&from, (to, label)) in &self.edges {
            let (a, b) = (self.leaf_name(from), self.leaf_name(*to));
            match label {
                Some(p) => writeln!(f, "  {a} -> {b} [{p}]")?,
                None => writeln!(f, "  {a} -> {b}")?,
            }
        }
        Ok(())
    }
}

fn os_of(e: Endpoint) -> OsLeaf {
    match e.side {
        Side::Source => OsLeaf::Seq {
            tree: 0,
            leaf: e.index,
        },
        Side::Target => OsLeaf::Seq {
            tree: 1,
            leaf: e.index,
        },
    }
}

fn ep_of(l: OsLeaf) -> Result<Endpoint, OsError> {
    match l {
        OsLeaf::Seq { tree: 0, leaf } => Ok(Endpoint::source(leaf)),
        OsLeaf::Seq { tree: 1, leaf } => Ok(Endpoint::target(leaf)),
        other => Err(OsError::BadLeaf(other)),
    }
}

fn combine_labels(labels: &[Option<PathMorphism>]) -> Result<Option<PathMorphism>, OsError> {
    let mut acc: Option<PathMorphism> = None;
    for l in labels {
        match l {
            None => return Ok(None),
            Some(p) => {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(prev) => prev
                        .compose(p)
                        .map_err(|e| OsError::Internal(e.to_string()))?,
                });
            }
        }
    }
    Ok(acc)
}

/// Compose two linkings by cutting on the middle shape and eliminating.
pub fn compose_via_cutelim(
    f: &Linking,
    g: &Linking,
    strategy: Strategy,
) -> Result<Linking, OsError> {
    let mut os = cut_configuration(f, g)?;
    os.normalize(strategy)?;
    os.to_two_sided()
}

/// Compose by the single-pass chase instead of stepwise elimination.
pub fn compose_turbo(f: &Linking, g: &Linking) -> Result<Linking, OsError> {
    cut_configuration(f, g)?.turbo_normalize()?.to_two_sided()
}

/// The pre-elimination configuration `[S', U]` with a cut on `T`:
/// `f`'s target leaves sit on the kept copy of the cut, `g`'s source
/// leaves on the partner copy.
pub fn cut_configuration(f: &Linking, g: &Linking) -> Result<OneSidedLinking, OsError> {
    if f.target() != g.source() {
        return Err(OsError::BadForm("middle shapes differ".into()));
    }
    let shapes = CutSequent::new(
        vec![Shape::dual(f.source().clone()), g.target().clone()],
        vec![f.target().clone()],
    )
    .expect("nonempty");
    let mut os = OneSidedLinking::new(shapes);
    for (from, edge) in f.fun().edges() {
        let conv = |e: Endpoint| match e.side {
            Side::Source => OsLeaf::Seq {
                tree: 0,
                leaf: e.index,
            },
            Side::Target => OsLeaf::Cut {
                cut: 0,
                side: CutSide::Kept,
                leaf: e.index,
            },
        };
        os.add_edge(conv(from), conv(edge.to), edge.label.clone())?;
    }
    for (from, edge) in g.fun().edges() {
        let conv = |e: Endpoint| match e.side {
            Side::Source => OsLeaf::Cut {
                cut: 0,
                side: CutSide::Partner,
                leaf: e.index,
            },
            Side::Target => OsLeaf::Seq {
                tree: 1,
                leaf: e.index,
            },
        };
        os.add_edge(conv(from), conv(edge.to), edge.label.clone())?;
    }
    Ok(os)
}
