//! Signed sets and partial leaf functions with path composition: the
//! ambient compact-closed category underlying linkings.
//!
//! A morphism `X -> Y` is a partial function from positive `X`-leaves and
//! negative `Y`-leaves to negative `X`-leaves and positive `Y`-leaves.
//! Composition chases finite directed paths through the middle object;
//! cycles through the middle silently drop (partiality).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::base::PathMorphism;
use crate::shape::{Atom, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoiError {
    #[error("endpoint {0} is not in the domain of the leaf function")]
    NotDomain(Endpoint),
    #[error("endpoint {0} is not in the codomain of the leaf function")]
    NotCodomain(Endpoint),
    #[error("endpoint {0} already has an outgoing edge")]
    DuplicateEdge(Endpoint),
    #[error("middle signed sets differ: cannot compose")]
    MiddleMismatch,
    #[error("edge label endpoints do not chain during path composition")]
    LabelMismatch,
    #[error("no composite edge at {0}")]
    EdgeAbsent(Endpoint),
}

/// An ordered sequence of signed, atom-labelled leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedSet(Vec<(Atom, Sign)>);

impl SignedSet {
    pub fn new(entries: Vec<(Atom, Sign)>) -> Self {
        SignedSet(entries)
    }

    pub fn entries(&self) -> &[(Atom, Sign)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, index: usize) -> Option<Sign> {
        self.0.get(index).map(|(_, s)| *s)
    }

    pub fn atom(&self, index: usize) -> Option<&Atom> {
        self.0.get(index).map(|(a, _)| a)
    }

    /// Disjoint union (concatenation).
    pub fn tensor(&self, other: &SignedSet) -> SignedSet {
        let mut entries = self.0.clone();
        entries.extend(other.0.iter().cloned());
        SignedSet(entries)
    }

    /// Reverse every sign.
    pub fn dual(&self) -> SignedSet {
        SignedSet(self.0.iter().map(|(a, s)| (a.clone(), s.flip())).collect())
    }
}

/// Which side of a leaf function an endpoint lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Source,
    Target,
}

/// A leaf of the source or target signed set, by 0-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub side: Side,
    pub index: usize,
}

impl Endpoint {
    pub fn source(index: usize) -> Endpoint {
        Endpoint {
            side: Side::Source,
            index,
        }
    }

    pub fn target(index: usize) -> Endpoint {
        Endpoint {
            side: Side::Target,
            index,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Source => write!(f, "s{}", self.index),
            Side::Target => write!(f, "t{}", self.index),
        }
    }
}

/// A directed, optionally labelled edge of a leaf function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub to: Endpoint,
    pub label: Option<PathMorphism>,
}

/// A partial leaf function between signed sets.
///
/// Domain endpoints are positive source leaves and negative target leaves;
/// codomain endpoints are negative source leaves and positive target
/// leaves. At most one edge leaves each domain endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialLeafFun {
    source: SignedSet,
    target: SignedSet,
    edges: BTreeMap<Endpoint, Edge>,
}

impl PartialLeafFun {
    pub fn empty(source: SignedSet, target: SignedSet) -> Self {
        PartialLeafFun {
            source,
            target,
            edges: BTreeMap::new(),
        }
    }

    /// The identity pairing on `x` (edge between leaf `i` on both sides,
    /// directed by sign), with the given per-leaf labels.
    pub fn identity(x: &SignedSet, labels: impl Fn(usize) -> Option<PathMorphism>) -> Self {
        let mut f = PartialLeafFun::empty(x.clone(), x.clone());
        for (i, (_, sign)) in x.entries().iter().enumerate() {
            let (from, to) = match sign {
                Sign::Pos => (Endpoint::source(i), Endpoint::target(i)),
                Sign::Neg => (Endpoint::target(i), Endpoint::source(i)),
            };
            f.insert_edge(from, to, labels(i)).expect("identity edges are well-formed");
        }
        f
    }

    pub fn source(&self) -> &SignedSet {
        &self.source
    }

    pub fn target(&self) -> &SignedSet {
        &self.target
    }

    pub fn edges(&self) -> impl Iterator<Item = (Endpoint, &Edge)> {
        self.edges.iter().map(|(k, v)| (*k, v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn lookup(&self, from: Endpoint) -> Option<&Edge> {
        self.edges.get(&from)
    }

    fn set_of(&self, e: Endpoint) -> &SignedSet {
        match e.side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    pub fn is_domain(&self, e: Endpoint) -> bool {
        match self.set_of(e).sign(e.index) {
            Some(sign) => match e.side {
                Side::Source => sign.is_positive(),
                Side::Target => !sign.is_positive(),
            },
            None => false,
        }
    }

    pub fn is_codomain(&self, e: Endpoint) -> bool {
        match self.set_of(e).sign(e.index) {
            Some(sign) => match e.side {
                Side::Source => !sign.is_positive(),
                Side::Target => sign.is_positive(),
            },
            None => false,
        }
    }

    /// All domain endpoints in order: positive source leaves, then
    /// negative target leaves.
    pub fn domain(&self) -> Vec<Endpoint> {
        let mut out = Vec::new();
        for (i, (_, s)) in self.source.entries().iter().enumerate() {
            if s.is_positive() {
                out.push(Endpoint::source(i));
            }
        }
        for (i, (_, s)) in self.target.entries().iter().enumerate() {
            if !s.is_positive() {
                out.push(Endpoint::target(i));
            }
        }
        out
    }

    /// All codomain endpoints in order: negative source leaves, then
    /// positive target leaves.
    pub fn codomain(&self) -> Vec<Endpoint> {
        let mut out = Vec::new();
        for (i, (_, s)) in self.source.entries().iter().enumerate() {
            if !s.is_positive() {
                out.push(Endpoint::source(i));
            }
        }
        for (i, (_, s)) in self.target.entries().iter().enumerate() {
            if s.is_positive() {
                out.push(Endpoint::target(i));
            }
        }
        out
    }

    pub fn insert_edge(
        &mut self,
        from: Endpoint,
        to: Endpoint,
        label: Option<PathMorphism>,
    ) -> Result<(), GoiError> {
        if !self.is_domain(from) {
            return Err(GoiError::NotDomain(from));
        }
        if !self.is_codomain(to) {
            return Err(GoiError::NotCodomain(to));
        }
        if self.edges.contains_key(&from) {
            return Err(GoiError::DuplicateEdge(from));
        }
        self.edges.insert(from, Edge { to, label });
        Ok(())
    }

    pub fn remove_edge(&mut self, from: Endpoint) -> Option<Edge> {
        self.edges.remove(&from)
    }

    /// Total on its domain?
    pub fn is_total(&self) -> bool {
        self.domain().iter().all(|e| self.edges.contains_key(e))
    }

    /// Path composition `self ; g`, together with the unique path witness
    /// for every composite edge (the sequence of intermediate middle-object
    /// endpoints, in `g`-source coordinates).
    pub fn compose_traced(
        &self,
        g: &PartialLeafFun,
    ) -> Result<(PartialLeafFun, BTreeMap<Endpoint, Vec<Endpoint>>), GoiError> {
        if self.target != *g.source() {
            return Err(GoiError::MiddleMismatch);
        }
        let mut out = PartialLeafFun::empty(self.source.clone(), g.target.clone());
        let mut witnesses = BTreeMap::new();
        for start in out.domain() {
            // chase alternating f/g hops through the middle object
            let mut labels: Vec<Option<PathMorphism>> = Vec::new();
            let mut middles: Vec<Endpoint> = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            // positions are tracked as (in_first, endpoint-in-that-frame)
            let (mut in_first, mut pos) = match start.side {
                Side::Source => (true, start),
                Side::Target => (false, start),
            };
            let end = loop {
                let step = if in_first {
                    self.edges.get(&pos)
                } else {
                    g.edges.get(&pos)
                };
                let Some(edge) = step else { break None };
                labels.push(edge.label.clone());
                match (in_first, edge.to.side) {
                    // landed in X: composite codomain
                    (true, Side::Source) => break Some(Endpoint::source(edge.to.index)),
                    // landed in Z: composite codomain
                    (false, Side::Target) => break Some(Endpoint::target(edge.to.index)),
                    // landed in the middle object Y
                    (true, Side::Target) => {
                        let y = Endpoint::source(edge.to.index);
                        if !seen.insert(y) {
                            break None; // cycle through the middle
                        }
                        middles.push(y);
                        in_first = false;
                        pos = y;
                    }
                    (false, Side::Source) => {
                        let y = Endpoint::target(edge.to.index);
                        if !seen.insert(Endpoint::source(edge.to.index)) {
                            break None;
                        }
                        middles.push(Endpoint::source(edge.to.index));
                        in_first = true;
                        pos = y;
                    }
                }
            };
            if let Some(end) = end {
                let label = collect_labels(&labels)?;
                out.insert_edge(start, end, label)?;
                witnesses.insert(start, middles);
            }
        }
        Ok((out, witnesses))
    }

    /// Path composition `self ; g`.
    pub fn compose(&self, g: &PartialLeafFun) -> Result<PartialLeafFun, GoiError> {
        Ok(self.compose_traced(g)?.0)
    }

    /// The unique alternating path behind a composite edge, as the
    /// sequence of intermediate middle-object endpoints.
    pub fn unique_path(
        &self,
        g: &PartialLeafFun,
        from: Endpoint,
    ) -> Result<Vec<Endpoint>, GoiError> {
        let (_, mut witnesses) = self.compose_traced(g)?;
        witnesses.remove(&from).ok_or(GoiError::EdgeAbsent(from))
    }
}

/// Composite label: labelled iff every hop is labelled (hops compose in
/// diagram order).
fn collect_labels(labels: &[Option<PathMorphism>]) -> Result<Option<PathMorphism>, GoiError> {
    let mut acc: Option<PathMorphism> = None;
    for l in labels {
        match l {
            None => return Ok(None),
            Some(p) => {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(prev) => prev.compose(p).map_err(|_| GoiError::LabelMismatch)?,
                });
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::Atom;

    fn ss(signs: &[Sign]) -> SignedSet {
        SignedSet::new(signs.iter().map(|s| (Atom::Unit, *s)).collect())
    }

    #[test]
    fn identity_is_a_unit() {
        let x = ss(&[Sign::Pos, Sign::Neg, Sign::Pos]);
        let y = ss(&[Sign::Neg, Sign::Pos]);
        let mut f = PartialLeafFun::empty(x.clone(), y.clone());
        f.insert_edge(Endpoint::source(0), Endpoint::target(1), None).unwrap();
        f.insert_edge(Endpoint::target(0), Endpoint::source(1), None).unwrap();
        f.insert_edge(Endpoint::source(2), Endpoint::target(1), None).unwrap();
        let id_x = PartialLeafFun::identity(&x, |_| None);
        let id_y = PartialLeafFun::identity(&y, |_| None);
        assert_eq!(id_x.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id_y).unwrap(), f);
    }

    #[test]
    fn middle_cycle_vanishes() {
        // chasing from x0 enters a loop y0 -> y1 -> y0 through the middle,
        // so the composite has no edge at x0 at all
        let x = ss(&[Sign::Pos]);
        let y = ss(&[Sign::Pos, Sign::Neg]);
        let z = ss(&[]);
        let mut f = PartialLeafFun::empty(x.clone(), y.clone());
        f.insert_edge(Endpoint::source(0), Endpoint::target(0), None).unwrap();
        f.insert_edge(Endpoint::target(1), Endpoint::target(0), None).unwrap();
        let mut g = PartialLeafFun::empty(y, z);
        g.insert_edge(Endpoint::source(0), Endpoint::source(1), None).unwrap();
        let gf = f.compose(&g).unwrap();
        assert_eq!(gf.edge_count(), 0);
        assert!(!gf.is_total());
    }

    #[test]
    fn duplicate_edge_rejected() {
        let x = ss(&[Sign::Pos]);
        let y = ss(&[Sign::Pos, Sign::Pos]);
        let mut f = PartialLeafFun::empty(x, y);
        f.insert_edge(Endpoint::source(0), Endpoint::target(0), None).unwrap();
        assert_eq!(
            f.insert_edge(Endpoint::source(0), Endpoint::target(1), None),
            Err(GoiError::DuplicateEdge(Endpoint::source(0)))
        );
    }

    #[test]
    fn domain_codomain_membership() {
        let x = ss(&[Sign::Pos, Sign::Neg]);
        let y = ss(&[Sign::Neg, Sign::Pos]);
        let f = PartialLeafFun::empty(x, y);
        assert_eq!(f.domain(), vec![Endpoint::source(0), Endpoint::target(0)]);
        assert_eq!(f.codomain(), vec![Endpoint::source(1), Endpoint::target(1)]);
        assert!(f.is_domain(Endpoint::source(0)));
        assert!(!f.is_domain(Endpoint::source(1)));
        assert!(f.is_codomain(Endpoint::target(1)));
    }

    #[test]
    fn tensor_and_dual_of_signed_sets() {
        let x = ss(&[Sign::Pos]);
        assert_eq!(x.dual().sign(0), Some(Sign::Neg));
        assert_eq!(x.dual().dual(), x);
        assert_eq!(SignedSet::default().tensor(&x), x);
    }

    #[test]
    fn unique_path_through_identity() {
        let x = ss(&[Sign::Pos, Sign::Neg]);
        let id = PartialLeafFun::identity(&x, |_| None);
        let f = {
            let mut f = PartialLeafFun::empty(x.clone(), x.clone());
            f.insert_edge(Endpoint::source(0), Endpoint::source(1), None).unwrap();
            f.insert_edge(Endpoint::target(1), Endpoint::target(0), None).unwrap();
            f
        };
        let path = id.unique_path(&f, Endpoint::source(0)).unwrap();
        // bounces through the pairing, then through f's internal edge
        assert_eq!(path, vec![Endpoint::source(0), Endpoint::source(1)]);
        let comp = id.compose(&f).unwrap();
        assert_eq!(comp.lookup(Endpoint::source(0)).unwrap().to, Endpoint::source(1));
    }

    #[test]
    fn absent_edge_is_an_error() {
        let x = ss(&[]);
        let f = PartialLeafFun::empty(x.clone(), x.clone());
        let g = f.clone();
        assert!(matches!(
            f.unique_path(&g, Endpoint::source(0)),
            Err(GoiError::EdgeAbsent(_))
        ));
    }
}
