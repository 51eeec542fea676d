//! Seeded random generation of shapes and valid linkings, used by the
//! property and cross-validation suites.
//!
//! Random linkings are built by composing canonical maps (walks starting
//! from an identity), so every generated linking is valid by
//! construction; validity is nevertheless asserted in the tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::base::BaseGraph;
use crate::linking::Linking;
use crate::shape::Shape;

/// The running example base: objects a,b,c,d with x: a->b, w: b->a,
/// y: c->c, z: c->d.
pub fn figure_base() -> BaseGraph {
    let mut g = BaseGraph::discrete(["a", "b", "c", "d"]).expect("fresh objects");
    g.add_arrow("x", "a", "b").expect("fresh arrow");
    g.add_arrow("w", "b", "a").expect("fresh arrow");
    g.add_arrow("y", "c", "c").expect("fresh arrow");
    g.add_arrow("z", "c", "d").expect("fresh arrow");
    g
}

/// A random shape over the base's objects with at most `max_leaves`
/// leaves (at least one).
pub fn random_shape(rng: &mut impl Rng, base: &BaseGraph, max_leaves: usize) -> Shape {
    let budget = rng.gen_range(1..=max_leaves.max(1));
    random_shape_with(rng, base, budget)
}

fn random_shape_with(rng: &mut impl Rng, base: &BaseGraph, budget: usize) -> Shape {
    let atom = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(0.4) || base.objects().is_empty() {
            Shape::unit()
        } else {
            Shape::gen(base.objects().choose(rng).expect("nonempty").clone())
        }
    };
    let mut s = if budget <= 1 {
        atom(rng)
    } else {
        match rng.gen_range(0..3) {
            0 => atom(rng),
            1 => {
                let left = rng.gen_range(1..budget);
                Shape::tensor(
                    random_shape_with(rng, base, left),
                    random_shape_with(rng, base, budget - left),
                )
            }
            _ => Shape::dual(random_shape_with(rng, base, budget)),
        }
    };
    while rng.gen_bool(0.25) {
        s = Shape::dual(s);
    }
    s
}

/// A random endo-linking `T -> T` built from canonical pieces.
pub fn random_endo(rng: &mut impl Rng, base: &BaseGraph, shape: &Shape, depth: usize) -> Linking {
    if depth == 0 {
        return Linking::identity(shape);
    }
    let piece = match shape {
        Shape::Atom(crate::shape::Atom::Gen(a)) => {
            // a random cycle a -> ... -> a if the base has one short enough
            random_cycle(rng, base, a, 3)
                .map(Linking::from_path)
                .unwrap_or_else(|| Linking::identity(shape))
        }
        Shape::Atom(crate::shape::Atom::Unit) => Linking::identity(shape),
        Shape::Tensor(l, r) => {
            let f = random_endo(rng, base, l, depth - 1);
            let g = random_endo(rng, base, r, depth - 1);
            let mut t = Linking::tensor_mor(&f, &g);
            if rng.gen_bool(0.5) {
                // bounce through the symmetry: T -> T' (x) T'' -> T
                let swap = Linking::sym(l, r).compose(&Linking::sym(r, l)).expect("sym cycle");
                t = t.compose(&swap).expect("endo composes");
            }
            t
        }
        Shape::Dual(inner) => Linking::dual_mor(&random_endo(rng, base, inner, depth - 1)),
    };
    let piece = if rng.gen_bool(0.5) {
        // detour through the unit: T -> T (x) I -> T
        let bounce = Linking::unit_r(shape)
            .compose(&Linking::unit_r_inv(shape))
            .expect("unit bounce");
        piece.compose(&bounce).expect("endo composes")
    } else {
        piece
    };
    piece
}

fn random_cycle(
    rng: &mut impl Rng,
    base: &BaseGraph,
    start: &str,
    max_len: usize,
) -> Option<crate::base::PathMorphism> {
    // bounded random search for a directed cycle through `start`
    for _ in 0..8 {
        let mut at = start.to_string();
        let mut names = Vec::new();
        for _ in 0..max_len {
            let options: Vec<_> = base.arrows_from(&at).collect();
            let Some(arrow) = options.choose(rng) else { break };
            names.push(arrow.name.clone());
            at = arrow.target.clone();
            if at == start {
                return Some(base.path(&names).expect("chained arrows"));
            }
        }
    }
    None
}

/// A random valid linking out of `source`: a composite of canonical
/// steps, with a target shape that wanders.
pub fn random_morphism(
    rng: &mut impl Rng,
    base: &BaseGraph,
    source: &Shape,
    steps: usize,
) -> Linking {
    let mut f = Linking::identity(source);
    for _ in 0..steps {
        let t = f.target().clone();
        let next = random_step(rng, base, &t);
        f = f.compose(&next).expect("canonical step composes");
    }
    f
}

fn random_step(rng: &mut impl Rng, base: &BaseGraph, t: &Shape) -> Linking {
    // collect the applicable moves, then pick one
    let mut moves: Vec<Linking> = vec![
        Linking::unit_l(t),
        Linking::unit_r(t),
        random_endo(rng, base, t, 2),
    ];
    match t {
        Shape::Atom(crate::shape::Atom::Gen(a)) => {
            let out: Vec<_> = base.arrows_from(a).collect();
            if let Some(arrow) = out.choose(rng) {
                moves.push(Linking::gen(base, &arrow.name).expect("declared arrow"));
            }
        }
        Shape::Tensor(l, r) => {
            moves.push(Linking::sym(l, r));
            if let Shape::Tensor(ll, lr) = l.as_ref() {
                moves.push(Linking::assoc(ll, lr, r));
            }
            if let Shape::Tensor(rl, rr) = r.as_ref() {
                moves.push(Linking::assoc_inv(l, rl, rr));
            }
            if matches!(l.as_ref(), Shape::Atom(crate::shape::Atom::Unit)) {
                moves.push(Linking::unit_l_inv(r));
            }
            if matches!(r.as_ref(), Shape::Atom(crate::shape::Atom::Unit)) {
                moves.push(Linking::unit_r_inv(l));
            }
            // independent recursion in both components
            let f = random_morphism(rng, base, l, 1);
            let g = random_morphism(rng, base, r, 1);
            moves.push(Linking::tensor_mor(&f, &g));
        }
        _ => {}
    }
    moves.choose(rng).expect("nonempty move set").clone()
}

/// A random composable pair of valid linkings.
pub fn random_composable_pair(
    rng: &mut impl Rng,
    base: &BaseGraph,
    max_leaves: usize,
    steps: usize,
) -> (Linking, Linking) {
    let s = random_shape(rng, base, max_leaves);
    let f = random_morphism(rng, base, &s, steps);
    let g = random_morphism(rng, base, f.target(), steps);
    (f, g)
}

/// A random instance of the transpose pattern: a valid
/// `g : (T (x) U)' -> (T (x) U)'`, which `uncurry` turns into
/// `(T (x) U)' (x) T -> U'`.
pub fn random_curry_instance(
    rng: &mut impl Rng,
    base: &BaseGraph,
    max_leaves: usize,
) -> (Linking, Shape, Shape) {
    let t = random_shape(rng, base, max_leaves);
    let u = random_shape(rng, base, max_leaves);
    let d = Shape::dual(Shape::tensor(t.clone(), u.clone()));
    let g = random_endo(rng, base, &d, 3);
    (g, t, u)
}
