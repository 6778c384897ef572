//! Guard formulas: when does "the root with this sign code" actually exist?
//!
//! A parametric root is named by a coefficient polynomial and a code of
//! derivative signs. Its guard is a quantifier-free formula in the
//! coefficients alone that holds exactly when such a root exists. This
//! example prints the full degree-2 guard table, compares one row against
//! its quantified definition, and shows the satisfiability probe used to
//! discard elimination candidates whose guards cannot hold.

use vsqe::elim::{guard_sat, GuardStatus, ScreenPolicy};
use vsqe::formula::{parse_formula, print_formula};
use vsqe::qea::build_table;
use vsqe::thom::{all_candidate_codes, generic_poly, guard_tarski};
use vsqe::ParametricRoot;

fn main() {
    let table = build_table(2).expect("degree-2 table");

    println!("degree-2 guards (coefficients u2 x^2 + u1 x + u0):");
    for code in all_candidate_codes(2) {
        let guard = table.guard(&code).expect("every candidate code has a guard");
        println!("  {code}: {}", print_formula(guard));
    }

    // Each row is the quantifier-free answer to a one-variable question:
    // guard(s) <=> exists x. u2 x^2 + u1 x + u0 = 0 and signs of the
    // derivatives at x match s. The quantified original is available too.
    println!();
    let code = vsqe::thom::SignSequence::from_slice(&[-1, 1]);
    let root = ParametricRoot::new(generic_poly("u", "x", 2), "x", code.clone());
    let quantified = guard_tarski(&root).expect("nonzero code");
    println!("row {code} answers the quantified question:");
    println!("  {}", print_formula(&quantified));
    println!("  <=> {}", print_formula(table.guard(&code).unwrap()));

    // During elimination, guards with concrete coefficients fold to
    // true/false, and guards over parameters are probed for a satisfying
    // point before the candidate is kept. The probe is sound in one
    // direction only: "unsat" is a proof, "unknown" keeps the candidate.
    println!();
    let policy = ScreenPolicy::default();
    let cases = [
        // Satisfiable: a negative leading coefficient with a positive value
        // somewhere forces a crossing; the probe finds a witness point.
        "(and (< a 0) (> b 0))",
        // Unsatisfiable by sign analysis: a square plus one is positive.
        "(<= (+ (* b b) 1) 0)",
        // Thin solution set: satisfiable, but no witness in the sample
        // budget, so the probe honestly reports unknown and the candidate
        // would be kept.
        "(and (< (- (* 4 a c) (* b b)) 0) (= (- (+ (* a a a) (* b b b) (* c c c)) 33) 0))",
    ];
    for text in cases {
        let guard = parse_formula(text).expect("well-formed guard");
        let verdict = match guard_sat(&guard, &policy) {
            GuardStatus::Sat(point) => {
                let at: Vec<String> =
                    point.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                format!("sat at {}", at.join(", "))
            }
            GuardStatus::Unsat => "unsat (candidate discarded)".to_string(),
            GuardStatus::Unknown => "unknown (candidate kept)".to_string(),
        };
        println!("  {text}");
        println!("    -> {verdict}");
    }
}
