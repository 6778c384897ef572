//! Checking an elimination result against an independent decision procedure.
//!
//! Elimination turns "exists x. phi(x, params)" into a formula psi(params).
//! For any concrete parameter point the two must agree: psi evaluates by
//! arithmetic, while the original is decided by real-root isolation and sign
//! evaluation — a completely separate code path. Sampling many points gives
//! a strong differential test of the eliminator, and it is what the
//! `vsqe verify` subcommand automates.

use std::collections::BTreeMap;

use vsqe::elim::{eliminate_exists, Mode};
use vsqe::formula::{evaluate, parse_formula, print_formula};
use vsqe::qea::{BackendKind, Engine};
use vsqe::realalg::decide_exists_1d;
use vsqe::sample::{random_parametric_quadratic, random_rational, rng_from_seed};

fn main() {
    let engine =
        Engine::with_builtin_tables(vec![BackendKind::Tables, BackendKind::Pointfree]);

    // A hand-picked formula first: a quadratic whose leading coefficient can
    // vanish, so the answer must also cover the degenerate linear case.
    let matrix = parse_formula("(and (= (+ (* a x x) x 1) 0) (> x 0))").unwrap();
    let psi = eliminate_exists(&matrix, "x", 2, Mode::Lower, &engine).unwrap();
    println!("exists x. a x^2 + x + 1 = 0 and x > 0");
    println!("  <=> {}", print_formula(&psi));

    let mut rng = rng_from_seed(7);
    let mut agree = 0usize;
    let samples = 200usize;
    for _ in 0..samples {
        let mut point = BTreeMap::new();
        point.insert("a".to_string(), random_rational(&mut rng, 20));
        let by_psi = evaluate(&psi, &point).unwrap();
        let by_roots = decide_exists_1d(&matrix, "x", &point).unwrap();
        assert_eq!(by_psi, by_roots, "disagreement at a = {}", point["a"]);
        agree += 1;
    }
    println!("  {agree}/{samples} sampled points agree with root isolation");

    // Now random instances: formulas with two parameters and up to three
    // atoms, each checked at 25 parameter points.
    println!();
    let mut checked = 0usize;
    for i in 0..40u64 {
        let mut frng = rng_from_seed(1000 + i);
        let matrix = random_parametric_quadratic(&mut frng, "x", &["a", "b"], 3, 9);
        let psi = eliminate_exists(&matrix, "x", 2, Mode::Lower, &engine).unwrap();
        for _ in 0..25 {
            let mut point = BTreeMap::new();
            point.insert("a".to_string(), random_rational(&mut frng, 20));
            point.insert("b".to_string(), random_rational(&mut frng, 20));
            let by_psi = evaluate(&psi, &point).unwrap();
            let by_roots = decide_exists_1d(&matrix, "x", &point).unwrap();
            assert_eq!(
                by_psi,
                by_roots,
                "disagreement on {} at a = {}, b = {}",
                print_formula(&matrix),
                point["a"],
                point["b"]
            );
            checked += 1;
        }
    }
    println!("40 random parametric quadratics x 25 points: {checked}/{checked} agree");
}
