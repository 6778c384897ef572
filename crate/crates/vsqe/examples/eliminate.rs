//! Quantifier elimination end to end, on parametric input.
//!
//! The classic warm-up: for which b does x^2 + b x + 1 = 0 have a real
//! solution? The eliminator answers with a quantifier-free condition on b.
//! Along the way this example shows the candidate substitution points each
//! atom contributes, why the one-sided variant gets away with fewer of them,
//! and how whole quantifier blocks (including universal ones) are removed.

use vsqe::elim::{build_set, eliminate_block, eliminate_exists, Mode};
use vsqe::formula::{fold_constants, parse_formula, print_formula};
use vsqe::qea::{BackendKind, Engine};

fn main() {
    let engine =
        Engine::with_builtin_tables(vec![BackendKind::Tables, BackendKind::Pointfree]);

    // exists x. x^2 + b x + 1 = 0, a quadratic with one parameter.
    let matrix = parse_formula("(= (+ (* x x) (* b x) 1) 0)").unwrap();
    let psi = eliminate_exists(&matrix, "x", 2, Mode::Lower, &engine).unwrap();
    println!("exists x. x^2 + bx + 1 = 0");
    println!("  <=> {}", print_formula(&psi));

    // Sanity-check the answer at a few points: it should say b^2 >= 4.
    for b in [-3i64, -2, 0, 2, 5] {
        let mut point = std::collections::BTreeMap::new();
        point.insert("b".to_string(), rat(b));
        let val = vsqe::formula::evaluate(&psi, &point).unwrap();
        println!("  b = {b:>2}: {val}");
    }

    // What the eliminator actually substitutes: every atom contributes a
    // finite set of candidate points (named roots, roots nudged right by an
    // infinitesimal, and minus infinity). The disjunction of the formula at
    // those points is equivalent to the existential statement.
    println!();
    let le = parse_formula("(<= (+ (* a x x) (* b x) c) 0)").unwrap();
    let full = build_set(&le, "x", 2, Mode::Full).unwrap();
    let lower = build_set(&le, "x", 2, Mode::Lower).unwrap();
    println!("candidates for exists x. a x^2 + b x + c <= 0:");
    println!("  both-sided: {} candidates", full.len());
    for entry in full.kept() {
        println!("    {}", entry.term);
    }
    // A non-strict <= atom is satisfied on closed intervals, so it is enough
    // to try each interval's left endpoint: the roots the polynomial leaves
    // rising. That prunes half of the root candidates here.
    println!("  one-sided:  {} candidates", lower.len());
    for entry in lower.kept() {
        println!("    {}", entry.term);
    }

    // Universal quantifiers go through the same machinery by duality, and
    // whole prenex blocks are eliminated inside out.
    println!();
    let closed = parse_formula(
        "(forall (b) (exists (x) (= (+ (* x x) (* b x) 1) 0)))",
    )
    .unwrap();
    let answer = eliminate_block(&closed, None, Mode::Lower, &engine).unwrap();
    println!("forall b. exists x. x^2 + bx + 1 = 0");
    println!("  <=> {}", print_formula(&fold_constants(&answer)));

    let open = parse_formula(
        "(forall (x) (> (+ (* x x) (* b x) 1) 0))",
    )
    .unwrap();
    let answer = eliminate_block(&open, None, Mode::Lower, &engine).unwrap();
    println!("forall x. x^2 + bx + 1 > 0");
    println!("  <=> {}", print_formula(&answer));
}

fn rat(v: i64) -> vsqe::Rational {
    vsqe::Rational::from(num_bigint::BigInt::from(v))
}
