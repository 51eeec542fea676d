//! Nets: linkings modulo rewiring of unit-sourced edges.
//!
//! Two linkings are *similar* when they differ in the target of a single
//! unit-sourced edge and both are valid; *equivalent* is the
//! reflexive-transitive closure. Equivalence is decidable because a
//! linking has finitely many rewirings; the search is breadth-first, so
//! witnesses are shortest.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use crate::goi::Endpoint;
use crate::linking::{Linking, LinkingError};
use crate::shape::Shape;

/// Default cap on the number of linkings explored per equivalence query.
pub const DEFAULT_CLASS_LIMIT: usize = 1_000_000;

/// Retarget the unit-sourced edge at `from` from `old_to` to `new_to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewireStep {
    pub from: Endpoint,
    pub old_to: Endpoint,
    pub new_to: Endpoint,
}

impl fmt::Display for RewireStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rewire {}: {} => {}", self.from, self.old_to, self.new_to)
    }
}

impl RewireStep {
    /// Apply the step, without validity checking.
    pub fn apply(&self, l: &Linking) -> Result<Linking, LinkingError> {
        let mut edges = Vec::new();
        let mut found = false;
        for (from, edge) in l.fun().edges() {
            if from == self.from {
                if edge.to != self.old_to {
                    return Err(LinkingError::Internal(format!(
                        "rewire step expects {} -> {}, found -> {}",
                        self.from, self.old_to, edge.to
                    )));
                }
                edges.push((from, self.new_to, edge.label.clone()));
                found = true;
            } else {
                edges.push((from, edge.to, edge.label.clone()));
            }
        }
        if !found {
            return Err(LinkingError::MissingEdge(self.from));
        }
        Linking::from_edges(l.source().clone(), l.target().clone(), edges)
    }
}

/// All valid one-step rewirings of `l`.
pub fn similar_neighbors(l: &Linking) -> Vec<(RewireStep, Linking)> {
    let mut out = Vec::new();
    let codomain = l.fun().codomain();
    for (from, edge) in l.fun().edges() {
        let atom = match from.side {
            crate::goi::Side::Source => l.fun().source().atom(from.index),
            crate::goi::Side::Target => l.fun().target().atom(from.index),
        }
        .expect("edge endpoint in range");
        if !atom.is_unit() {
            continue;
        }
        for &c in &codomain {
            if c == edge.to {
                continue;
            }
            let step = RewireStep {
                from,
                old_to: edge.to,
                new_to: c,
            };
            let cand = step.apply(l).expect("edge exists");
            if cand.check().is_ok() {
                out.push((step, cand));
            }
        }
    }
    out
}

/// Result of a net-equality query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqOutcome {
    /// A shortest rewiring sequence from the first linking to the second.
    Equivalent { witness: Vec<RewireStep> },
    Distinct,
    /// The exploration limit was hit before the class was exhausted.
    Inconclusive { explored: usize },
}

/// Decide whether two valid linkings present the same net.
pub fn equivalent(f: &Linking, g: &Linking, limit: usize) -> EqOutcome {
    if f.source() != g.source() || f.target() != g.target() {
        return EqOutcome::Distinct;
    }
    // rewiring never touches generator-sourced edges
    if gen_part(f) != gen_part(g) {
        return EqOutcome::Distinct;
    }
    let mut arena: Vec<(Linking, Option<(usize, RewireStep)>)> = vec![(f.clone(), None)];
    let mut index: HashMap<Linking, usize> = HashMap::new();
    index.insert(f.clone(), 0);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        if &arena[i].0 == g {
            // walk parents back to the start
            let mut steps = Vec::new();
            let mut at = i;
            while let Some((parent, step)) = arena[at].1 {
                steps.push(step);
                at = parent;
            }
            steps.reverse();
            return EqOutcome::Equivalent { witness: steps };
        }
        let current = arena[i].0.clone();
        for (step, next) in similar_neighbors(&current) {
            if index.contains_key(&next) {
                continue;
            }
            if arena.len() >= limit {
                return EqOutcome::Inconclusive {
                    explored: arena.len(),
                };
            }
            index.insert(next.clone(), arena.len());
            arena.push((next, Some((i, step))));
            queue.push_back(arena.len() - 1);
        }
    }
    EqOutcome::Distinct
}

fn gen_part(l: &Linking) -> Vec<(Endpoint, Endpoint, Option<crate::base::PathMorphism>)> {
    l.fun()
        .edges()
        .filter(|(from, _)| {
            let atom = match from.side {
                crate::goi::Side::Source => l.fun().source().atom(from.index),
                crate::goi::Side::Target => l.fun().target().atom(from.index),
            }
            .expect("edge endpoint in range");
            !atom.is_unit()
        })
        .map(|(from, e)| (from, e.to, e.label.clone()))
        .collect()
}

/// Enumeration ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted {
    pub limit: usize,
}

/// All valid linkings `source -> target` whose generator edges carry
/// identity labels. (Arbitrary base paths would make the set infinite.)
pub fn enumerate_linkings(
    source: &Shape,
    target: &Shape,
    limit: usize,
) -> Result<Vec<Linking>, Exhausted> {
    let probe = Linking::from_edges(source.clone(), target.clone(), vec![])
        .expect("empty edge set is well-formed");
    let domain = probe.fun().domain();
    let codomain = probe.fun().codomain();
    let atom_of = |e: Endpoint| match e.side {
        crate::goi::Side::Source => probe.fun().source().atom(e.index).cloned(),
        crate::goi::Side::Target => probe.fun().target().atom(e.index).cloned(),
    };
    // per-generator counts must match or there is nothing to enumerate
    let mut need: HashMap<String, isize> = HashMap::new();
    for &d in &domain {
        if let Some(g) = atom_of(d).unwrap().generator() {
            *need.entry(g.to_string()).or_default() += 1;
        }
    }
    for &c in &codomain {
        if let Some(g) = atom_of(c).unwrap().generator() {
            *need.entry(g.to_string()).or_default() -= 1;
        }
    }
    if need.values().any(|&n| n != 0) {
        return Ok(Vec::new());
    }

    struct Search<'a> {
        domain: &'a [Endpoint],
        codomain: &'a [Endpoint],
        atoms: Vec<crate::shape::Atom>,     // per domain position
        co_atoms: Vec<crate::shape::Atom>,  // per codomain position
        used: Vec<bool>,                    // codomain slots taken by generator edges
        chosen: Vec<Endpoint>,
        out: Vec<Linking>,
        source: &'a Shape,
        target: &'a Shape,
        budget: usize,
        limit: usize,
    }

    impl Search<'_> {
        fn go(&mut self, pos: usize) -> Result<(), Exhausted> {
            if self.budget == 0 {
                return Err(Exhausted { limit: self.limit });
            }
            self.budget -= 1;
            if pos == self.domain.len() {
                let edges: Vec<_> = self
                    .domain
                    .iter()
                    .zip(&self.chosen)
                    .map(|(&from, &to)| {
                        let label = self.atoms[from_index(self.domain, from)]
                            .generator()
                            .map(crate::base::PathMorphism::identity);
                        (from, to, label)
                    })
                    .collect();
                let cand =
                    Linking::from_edges(self.source.clone(), self.target.clone(), edges)
                        .expect("enumerated edges are well-formed");
                if cand.check().is_ok() {
                    self.out.push(cand);
                }
                return Ok(());
            }
            let atom = self.atoms[pos].clone();
            for (ci, &c) in self.codomain.iter().enumerate() {
                match atom.generator() {
                    Some(g) => {
                        if self.used[ci] || self.co_atoms[ci].generator() != Some(g) {
                            continue;
                        }
                        self.used[ci] = true;
                        self.chosen.push(c);
                        self.go(pos + 1)?;
                        self.chosen.pop();
                        self.used[ci] = false;
                    }
                    None => {
                        self.chosen.push(c);
                        self.go(pos + 1)?;
                        self.chosen.pop();
                    }
                }
            }
            Ok(())
        }
    }

    fn from_index(domain: &[Endpoint], e: Endpoint) -> usize {
        domain.iter().position(|&d| d == e).expect("domain endpoint")
    }

    let atoms: Vec<_> = domain.iter().map(|&d| atom_of(d).unwrap()).collect();
    let co_atoms: Vec<_> = codomain.iter().map(|&c| atom_of(c).unwrap()).collect();
    let mut search = Search {
        domain: &domain,
        codomain: &codomain,
        atoms,
        co_atoms,
        used: vec![false; codomain.len()],
        chosen: Vec::new(),
        out: Vec::new(),
        source,
        target,
        budget: limit,
        limit,
    };
    search.go(0)?;
    Ok(search.out)
}

/// Group the valid linkings `source -> target` into net equivalence
/// classes (connected components under single rewirings).
pub fn enumerate_nets(
    source: &Shape,
    target: &Shape,
    limit: usize,
) -> Result<Vec<Vec<Linking>>, Exhausted> {
    let all = enumerate_linkings(source, target, limit)?;
    let index: HashMap<&Linking, usize> = all.iter().zip(0..).collect();
    let mut class = vec![usize::MAX; all.len()];
    let mut classes: Vec<Vec<Linking>> = Vec::new();
    for start in 0..all.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        classes.push(Vec::new());
        let mut stack = vec![start];
        class[start] = id;
        while let Some(i) = stack.pop() {
            classes[id].push(all[i].clone());
            for (_, next) in similar_neighbors(&all[i]) {
                if let Some(&j) = index.get(&next) {
                    if class[j] == usize::MAX {
                        class[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
    }
    Ok(classes)
}
