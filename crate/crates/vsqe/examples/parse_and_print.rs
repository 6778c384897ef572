//! Tour of the formula grammar: parsing, canonical printing, positive
//! form, and constant folding.
//!
//! Usage: cargo run -p vsqe --example parse_and_print

use vsqe::formula::{fold_constants, parse_formula, positive_form, print_formula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Atoms always compare a polynomial against zero; the right-hand
    // `0` may be written or omitted.
    let inputs = [
        "(and (<= (+ (* a x x) (* b x) c) 0) (> x 0))",
        "(not (or (= (- (* x x) 2) 0) (< (+ x 1) 0)))",
        "(>= (- (* 3 a) (* b b)))",
        "(exists (x) (and (> (* 2 x) 0) (< 1 0)))",
    ];
    for src in inputs {
        let f = parse_formula(src)?;
        println!("input:     {src}");
        println!("canonical: {}", print_formula(&f));
        // Positive form pushes negations into the relations and
        // normalizes every atom (content removed, leading coefficient
        // positive). It rejects quantifiers, so only apply it to
        // quantifier-free formulas.
        if f.is_quantifier_free() {
            println!("positive:  {}", print_formula(&positive_form(&f)?));
        }
        println!("folded:    {}", print_formula(&fold_constants(&f)));
        println!();
    }
    Ok(())
}
