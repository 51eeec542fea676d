//! The ten acceptance criteria, one test each, in order.
//!
//! Each test is self-contained: it builds its own fixtures (shapes and
//! linkings from the worked examples, or seeded random corpora) and
//! asserts both the expected results and, where stated, a wall-clock
//! bound.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use starnet::base::PathMorphism;
use starnet::cutelim::{compose_turbo, compose_via_cutelim, Strategy};
use starnet::diagram;
use starnet::goi::Endpoint;
use starnet::linking::Linking;
use starnet::net::{self, EqOutcome};
use starnet::sample::{
    figure_base, random_composable_pair, random_curry_instance, random_endo, random_morphism,
    random_shape,
};
use starnet::shape::{parse_shape, Shape};

fn ep(text: &str) -> Endpoint {
    let index = text[1..].parse().unwrap();
    match &text[..1] {
        "s" => Endpoint::source(index),
        _ => Endpoint::target(index),
    }
}

fn witness_len(f: &Linking, g: &Linking) -> usize {
    match net::equivalent(f, g, net::DEFAULT_CLASS_LIMIT) {
        EqOutcome::Equivalent { witness } => witness.len(),
        other => panic!("expected equivalence, got {other:?}"),
    }
}

/// Criterion 1: bot (x) bot has exactly the identity and twist linkings,
/// and they are distinct nets.
#[test]
fn criterion_01_example1_two_distinct_linkings() {
    let start = Instant::now();
    let b = parse_shape("I'*I'").unwrap();
    let all = net::enumerate_linkings(&b, &b, net::DEFAULT_CLASS_LIMIT).unwrap();
    assert_eq!(all.len(), 2);
    let id = Linking::identity(&b);
    let tw = Linking::from_edges(
        b.clone(),
        b,
        vec![(ep("t0"), ep("s1"), None), (ep("t1"), ep("s0"), None)],
    )
    .unwrap();
    assert!(all.contains(&id) && all.contains(&tw));
    assert_eq!(
        net::equivalent(&id, &tw, net::DEFAULT_CLASS_LIMIT),
        EqOutcome::Distinct
    );
    assert!(start.elapsed() < Duration::from_secs(1));
}

/// Criterion 2: identity = twist on I (x) I with a shortest witness of
/// exactly two rewirings; one net class of four linkings.
#[test]
fn criterion_02_example3_unit_twist() {
    let start = Instant::now();
    let p = parse_shape("I*I").unwrap();
    let id = Linking::identity(&p);
    let tw = Linking::from_edges(
        p.clone(),
        p.clone(),
        vec![(ep("s0"), ep("t1"), None), (ep("s1"), ep("t0"), None)],
    )
    .unwrap();
    assert_eq!(witness_len(&id, &tw), 2);
    let classes = net::enumerate_nets(&p, &p, net::DEFAULT_CLASS_LIMIT).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].len(), 4);
    assert!(start.elapsed() < Duration::from_secs(1));
}

/// Criterion 3: the triple-dual triangles of Examples 2 and 4 commute,
/// with shortest witnesses of at most three and five rewirings.
#[test]
fn criterion_03_triple_dual_triangles() {
    let start = Instant::now();
    let d = diagram::parse_diagram(include_str!("../examples/ex2_ex4_triple_dual.diag")).unwrap();
    let round2 = d.morphism("round2").unwrap();
    let round4 = d.morphism("round4").unwrap();
    let w2 = witness_len(round2, &Linking::identity(round2.source()));
    let w4 = witness_len(round4, &Linking::identity(round4.source()));
    assert!(w2 <= 3, "Example 2 witness has {w2} steps");
    assert!(w4 <= 5, "Example 4 witness has {w4} steps");
    assert!(start.elapsed() < Duration::from_secs(5));
}

/// Criterion 4: Example 5's six-stage chain composes to the identity on
/// a (x) b, via path composition and via turbo cut elimination.
#[test]
fn criterion_04_example5_chain_is_identity() {
    let start = Instant::now();
    let d = diagram::parse_diagram(include_str!("../examples/ex5_big_path.diag")).unwrap();
    let stages: Vec<&Linking> = ["L1", "L2", "L3", "L4", "L5"]
        .iter()
        .map(|n| d.morphism(n).unwrap())
        .collect();
    let id = Linking::identity(&parse_shape("a*b").unwrap());

    let mut by_path = stages[0].clone();
    for l in &stages[1..] {
        by_path = by_path.compose(l).unwrap();
    }
    assert_eq!(by_path, id);

    let mut by_turbo = stages[0].clone();
    for l in &stages[1..] {
        by_turbo = compose_turbo(&by_turbo, l).unwrap();
    }
    assert_eq!(by_turbo, id);
    assert!(start.elapsed() < Duration::from_secs(1));
}

/// Criterion 5: the labelled composition figure carries exactly the
/// collected paths x;w;x and z;y.
#[test]
fn criterion_05_labelled_composition() {
    let base = figure_base();
    let m = parse_shape("(I*I)*(a*b')*(I*I')").unwrap();
    let n = parse_shape("(b*a')*((c'*c)'*I')").unwrap();
    let p = parse_shape("((I'*d)'*c)'*(I*I)'").unwrap();
    let path = |names: &[&str]| {
        Some(
            base.path(&names.iter().map(|s| s.to_string()).collect::<Vec<_>>())
                .unwrap(),
        )
    };
    let f = Linking::from_edges(
        m,
        n.clone(),
        vec![
            (ep("s0"), ep("t0"), None),
            (ep("s1"), ep("t2"), None),
            (ep("s2"), ep("t0"), path(&["x"])),
            (ep("t1"), ep("s3"), path(&["x"])),
            (ep("t3"), ep("t2"), path(&["y"])),
            (ep("s4"), ep("s5"), None),
            (ep("t4"), ep("s5"), None),
        ],
    )
    .unwrap();
    let g = Linking::from_edges(
        n,
        p,
        vec![
            (ep("s0"), ep("s1"), path(&["w"])),
            (ep("t0"), ep("s1"), None),
            (ep("s2"), ep("t1"), path(&["z"])),
            (ep("t2"), ep("s3"), Some(PathMorphism::identity("c"))),
            (ep("t3"), ep("s4"), None),
            (ep("t4"), ep("s4"), None),
        ],
    )
    .unwrap();
    let h = f.compose(&g).unwrap();
    assert_eq!(h.check(), Ok(()));
    let xwx = h.fun().lookup(ep("s2")).unwrap().label.as_ref().unwrap();
    assert_eq!(xwx.arrows, vec!["x", "w", "x"]);
    assert_eq!(xwx.to_string(), "x.w.x");
    let zy = h.fun().lookup(ep("t2")).unwrap().label.as_ref().unwrap();
    assert_eq!(zy.arrows, vec!["y", "z"]);
    assert_eq!(zy.to_string(), "z.y");
}

/// Criterion 6: the contraction checker agrees with brute-force
/// switching enumeration on every candidate leaf function over a corpus
/// of small shapes, and on 10^4 random larger candidates.
#[test]
fn criterion_06_criterion_oracle_agreement() {
    let start = Instant::now();
    let base = figure_base();
    let mut rng = ChaCha8Rng::seed_from_u64(601);

    let agree = |l: &Linking| {
        let g = l.criterion_graph();
        let fast = g.check_fast();
        let brute = g.check_bruteforce(20).expect_err_or_ok();
        assert_eq!(
            fast, brute,
            "checkers disagree on {} -> {}\n{l}",
            l.source(),
            l.target()
        );
    };

    // exhaustive over all total leaf functions for small shape pairs
    let mut exhausted_pairs = 0usize;
    while exhausted_pairs < 150 {
        let s = random_shape(&mut rng, &base, 6);
        let t = random_shape(&mut rng, &base, 6);
        let probe = Linking::from_edges(s.clone(), t.clone(), vec![]).unwrap();
        let domain = probe.fun().domain();
        let codomain = probe.fun().codomain();
        if !domain.is_empty() && codomain.is_empty() {
            continue;
        }
        let total = (codomain.len() as u64).pow(domain.len() as u32);
        if total > 4096 {
            continue;
        }
        for mut k in 0..total {
            let mut edges = Vec::new();
            for &from in &domain {
                let to = codomain[(k % codomain.len() as u64) as usize];
                k /= codomain.len() as u64;
                edges.push((from, to, None));
            }
            let l = Linking::from_edges(s.clone(), t.clone(), edges).unwrap();
            agree(&l);
        }
        exhausted_pairs += 1;
    }

    // random larger candidates with at most 12 switched tensors
    let mut done = 0usize;
    while done < 10_000 {
        let s = random_shape(&mut rng, &base, 10);
        let t = random_shape(&mut rng, &base, 10);
        let probe = Linking::from_edges(s.clone(), t.clone(), vec![]).unwrap();
        if probe.criterion_graph().switched_count() > 12 {
            continue;
        }
        let domain = probe.fun().domain();
        let codomain = probe.fun().codomain();
        if !domain.is_empty() && codomain.is_empty() {
            continue;
        }
        let edges: Vec<_> = domain
            .iter()
            .map(|&from| (from, codomain[rng.gen_range(0..codomain.len())], None))
            .collect();
        let l = Linking::from_edges(s, t, edges).unwrap();
        agree(&l);
        done += 1;
    }
    assert!(start.elapsed() < Duration::from_secs(60));
}

/// Criterion 7: categorical laws on sampled instances, at least 500 per
/// law; coherence axioms and naturality hold on the nose, the unit
/// equations hold up to a single rewiring.
#[test]
fn criterion_07_categorical_property_suite() {
    let base = figure_base();
    let mut rng = ChaCha8Rng::seed_from_u64(701);

    // category laws: identities and associativity of composition
    for _ in 0..500 {
        let s = random_shape(&mut rng, &base, 5);
        let f = random_morphism(&mut rng, &base, &s, 2);
        assert_eq!(Linking::identity(&s).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&Linking::identity(f.target())).unwrap(), f);
        let g = random_morphism(&mut rng, &base, f.target(), 2);
        let h = random_morphism(&mut rng, &base, g.target(), 2);
        assert_eq!(
            f.compose(&g).unwrap().compose(&h).unwrap(),
            f.compose(&g.compose(&h).unwrap()).unwrap()
        );
    }

    // functoriality of (x) and contravariant functoriality of dual
    for _ in 0..500 {
        let (f1, g1) = random_composable_pair(&mut rng, &base, 4, 2);
        let (f2, g2) = random_composable_pair(&mut rng, &base, 4, 2);
        assert_eq!(
            Linking::tensor_mor(&f1, &f2)
                .compose(&Linking::tensor_mor(&g1, &g2))
                .unwrap(),
            Linking::tensor_mor(&f1.compose(&g1).unwrap(), &f2.compose(&g2).unwrap())
        );
        assert_eq!(
            Linking::dual_mor(&f1.compose(&g1).unwrap()),
            Linking::dual_mor(&g1).compose(&Linking::dual_mor(&f1)).unwrap()
        );
        // double dual preserves the underlying leaf function
        assert_eq!(
            Linking::dual_mor(&Linking::dual_mor(&f1)).fun(),
            f1.fun()
        );
    }

    // pentagon, triangle, hexagon, symmetry involution — exact
    for _ in 0..500 {
        let s = random_shape(&mut rng, &base, 3);
        let t = random_shape(&mut rng, &base, 3);
        let u = random_shape(&mut rng, &base, 3);
        let v = random_shape(&mut rng, &base, 3);

        let st = Shape::tensor(s.clone(), t.clone());
        let tu = Shape::tensor(t.clone(), u.clone());
        let uv = Shape::tensor(u.clone(), v.clone());
        let pentagon_long = Linking::tensor_mor(&Linking::assoc(&s, &t, &u), &Linking::identity(&v))
            .compose(&Linking::assoc(&s, &tu, &v))
            .unwrap()
            .compose(&Linking::tensor_mor(
                &Linking::identity(&s),
                &Linking::assoc(&t, &u, &v),
            ))
            .unwrap();
        let pentagon_short = Linking::assoc(&st, &u, &v)
            .compose(&Linking::assoc(&s, &t, &uv))
            .unwrap();
        assert_eq!(pentagon_long, pentagon_short);

        let triangle_left =
            Linking::tensor_mor(&Linking::unit_r(&s), &Linking::identity(&t))
                .compose(&Linking::assoc(&s, &Shape::unit(), &t))
                .unwrap();
        let triangle_right =
            Linking::tensor_mor(&Linking::identity(&s), &Linking::unit_l(&t));
        assert_eq!(triangle_left, triangle_right);

        let hexagon_long = Linking::assoc(&s, &t, &u)
            .compose(&Linking::sym(&s, &tu))
            .unwrap()
            .compose(&Linking::assoc(&t, &u, &s))
            .unwrap();
        let hexagon_short =
            Linking::tensor_mor(&Linking::sym(&s, &t), &Linking::identity(&u))
                .compose(&Linking::assoc(&t, &s, &u))
                .unwrap()
                .compose(&Linking::tensor_mor(
                    &Linking::identity(&t),
                    &Linking::sym(&s, &u),
                ))
                .unwrap();
        assert_eq!(hexagon_long, hexagon_short);

        assert_eq!(
            Linking::sym(&s, &t).compose(&Linking::sym(&t, &s)).unwrap(),
            Linking::identity(&st)
        );
    }

    // split-mono unit laws exact; the other composite is one rewiring
    // away from the identity
    for _ in 0..500 {
        let s = random_shape(&mut rng, &base, 5);
        let id = Linking::identity(&s);
        assert_eq!(
            Linking::unit_l(&s).compose(&Linking::unit_l_inv(&s)).unwrap(),
            id
        );
        assert_eq!(
            Linking::unit_r(&s).compose(&Linking::unit_r_inv(&s)).unwrap(),
            id
        );
        let lbar_l = Linking::unit_l_inv(&s).compose(&Linking::unit_l(&s)).unwrap();
        let id_is = Linking::identity(lbar_l.source());
        if lbar_l != id_is {
            assert_eq!(witness_len(&lbar_l, &id_is), 1, "lbar;l at {s}");
        }
    }

    // naturality squares: sym, assoc, and the unit maps — exact
    for _ in 0..500 {
        let s1 = random_shape(&mut rng, &base, 3);
        let s2 = random_shape(&mut rng, &base, 3);
        let s3 = random_shape(&mut rng, &base, 3);
        let f = random_morphism(&mut rng, &base, &s1, 1);
        let g = random_morphism(&mut rng, &base, &s2, 1);
        let h = random_morphism(&mut rng, &base, &s3, 1);
        let (t1, t2, t3) = (f.target().clone(), g.target().clone(), h.target().clone());

        assert_eq!(
            Linking::tensor_mor(&f, &g).compose(&Linking::sym(&t1, &t2)).unwrap(),
            Linking::sym(&s1, &s2).compose(&Linking::tensor_mor(&g, &f)).unwrap()
        );
        assert_eq!(
            Linking::tensor_mor(&Linking::tensor_mor(&f, &g), &h)
                .compose(&Linking::assoc(&t1, &t2, &t3))
                .unwrap(),
            Linking::assoc(&s1, &s2, &s3)
                .compose(&Linking::tensor_mor(&f, &Linking::tensor_mor(&g, &h)))
                .unwrap()
        );
        assert_eq!(
            f.compose(&Linking::unit_l(&t1)).unwrap(),
            Linking::unit_l(&s1)
                .compose(&Linking::tensor_mor(&Linking::identity(&Shape::unit()), &f))
                .unwrap()
        );
        assert_eq!(
            f.compose(&Linking::unit_r(&t1)).unwrap(),
            Linking::unit_r(&s1)
                .compose(&Linking::tensor_mor(&f, &Linking::identity(&Shape::unit())))
                .unwrap()
        );
    }

    // transpose: curry and uncurry are mutually inverse and preserve
    // validity
    for _ in 0..500 {
        let (g, _, _) = random_curry_instance(&mut rng, &base, 3);
        let f = Linking::uncurry(&g).unwrap();
        assert_eq!(f.check(), Ok(()));
        assert_eq!(Linking::curry(&f).unwrap(), g);
        assert_eq!(Linking::uncurry(&Linking::curry(&f).unwrap()).unwrap(), f);
    }
}

/// Criterion 8: path composition, turbo cut elimination, and stepwise
/// cut elimination (all three strategies) agree on 10^4 random pairs.
#[test]
fn criterion_08_engine_cross_validation() {
    let start = Instant::now();
    let base = figure_base();
    let mut rng = ChaCha8Rng::seed_from_u64(801);
    for i in 0..10_000u64 {
        let (f, g) = random_composable_pair(&mut rng, &base, 4, 2);
        let direct = f.compose(&g).unwrap();
        assert_eq!(compose_turbo(&f, &g).unwrap(), direct, "turbo, case {i}");
        for strategy in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(i)] {
            assert_eq!(
                compose_via_cutelim(&f, &g, strategy).unwrap(),
                direct,
                "{strategy:?}, case {i}"
            );
        }
    }
    assert!(start.elapsed() < Duration::from_secs(120));
}

/// Criterion 9: the Compatibility theorem (acyclic union graphs) and
/// Net Compositionality (rewiring respects composition), 10^3 cases each.
#[test]
fn criterion_09_compatibility_and_net_compositionality() {
    let base = figure_base();
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    for _ in 0..1_000 {
        let (f, g) = random_composable_pair(&mut rng, &base, 4, 2);
        assert_eq!(f.compatibility_check(&g), Ok(true));
    }

    // f ~ f' and g ~ g' imply f;g ~ f';g'
    let rewire = |l: &Linking, rng: &mut ChaCha8Rng| -> Linking {
        let options = net::similar_neighbors(l);
        if options.is_empty() {
            l.clone()
        } else {
            options[rng.gen_range(0..options.len())].1.clone()
        }
    };
    for _ in 0..1_000 {
        let (f, g) = random_composable_pair(&mut rng, &base, 4, 2);
        let f2 = rewire(&f, &mut rng);
        let g2 = rewire(&g, &mut rng);
        let lhs = f.compose(&g).unwrap();
        let rhs = f2.compose(&g2).unwrap();
        assert!(
            matches!(
                net::equivalent(&lhs, &rhs, net::DEFAULT_CLASS_LIMIT),
                EqOutcome::Equivalent { .. }
            ),
            "composites of rewired factors must stay equivalent"
        );
    }
}

/// Criterion 10: validity checking is fast on big inputs — the identity
/// over a right-comb shape with 10^5 leaves checks in under a second.
#[test]
fn criterion_10_large_identity_is_fast() {
    // deep shapes recurse, so give the worker a large stack
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(|| {
            let mut s = Shape::gen("a");
            for _ in 0..99_999 {
                s = Shape::tensor(Shape::gen("a"), s);
            }
            assert_eq!(s.leaf_count(), 100_000);
            let id = Linking::identity(&s);
            let start = Instant::now();
            assert_eq!(id.check(), Ok(()));
            assert!(
                start.elapsed() < Duration::from_secs(1),
                "check took {:?}",
                start.elapsed()
            );
        })
        .unwrap()
        .join()
        .unwrap();
}

/// Shipped example files all pass through the CLI goal runner.
#[test]
fn shipped_diagram_files_pass() {
    for (name, text) in [
        ("prelude", include_str!("../examples/prelude.diag")),
        ("ex1", include_str!("../examples/ex1_bot_twist.diag")),
        ("ex3", include_str!("../examples/ex3_unit_twist.diag")),
        ("ex2_ex4", include_str!("../examples/ex2_ex4_triple_dual.diag")),
        ("ex5", include_str!("../examples/ex5_big_path.diag")),
    ] {
        let report = diagram::run_diagram(text, &diagram::RunOptions::default());
        assert_eq!(report.exit_code, 0, "{name}: {:?}", report.lines);
    }
}

/// Random endos exist for the sampled corpus, so criterion 9's rewiring
/// step exercises real neighbors at least part of the time.
#[test]
fn rewiring_corpus_is_not_degenerate() {
    let base = figure_base();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut with_neighbors = 0usize;
    for _ in 0..200 {
        let s = random_shape(&mut rng, &base, 4);
        let f = random_endo(&mut rng, &base, &s, 3);
        if !net::similar_neighbors(&f).is_empty() {
            with_neighbors += 1;
        }
    }
    assert!(with_neighbors > 20, "only {with_neighbors} of 200");
}

trait ExpectErrOrOk {
    fn expect_err_or_ok(self) -> bool;
}

impl ExpectErrOrOk
    for Result<(), Result<starnet::criterion::SwitchingWitness, starnet::criterion::TooManySwitchings>>
{
    /// true iff the brute-force check accepted; panics if the switching
    /// bound was exceeded
    fn expect_err_or_ok(self) -> bool {
        match self {
            Ok(()) => true,
            Err(Ok(_)) => false,
            Err(Err(too_many)) => panic!("switching bound exceeded: {too_many:?}"),
        }
    }
}
