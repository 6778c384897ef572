//! Distinguishing the real roots of a polynomial by derivative sign codes.
//!
//! Every real root of a degree-n polynomial gets a code in {-1,0,+1}^n: the
//! signs of the first n derivatives at that root. Distinct roots always get
//! distinct codes, so a code is an exact, radical-free name for "that one
//! root". This example computes the codes for a few polynomials, looks a root
//! back up from its code, and shows which candidate codes can even occur.

use vsqe::realalg::{find_root_by_code, isolate_roots, thom_code_at, UniPoly};
use vsqe::thom::{all_candidate_codes, sgn_lr_numeric, SignSequence};

fn show(label: &str, coeffs: &[i64]) {
    let f = UniPoly::from_i64(coeffs);
    let n = f.degree();
    println!("{label} (degree {n})");
    let roots = isolate_roots(&f).expect("nonzero polynomial");
    if roots.is_empty() {
        println!("  no real roots");
    }
    for root in &roots {
        let code = thom_code_at(&f, root, n).expect("root of f");
        let mut approx = root.clone();
        approx.refine_below(&"1/100000".parse().expect("rational literal"));
        let mid = (approx.lo() + approx.hi()) / "2".parse::<vsqe::Rational>().unwrap();
        println!("  root ~ {:>12} code {}", format_rat(&mid), fmt_code(&code));
    }
    println!();
}

fn fmt_code(code: &[i8]) -> String {
    let parts: Vec<String> = code
        .iter()
        .map(|s| if *s == 0 { "0".to_string() } else { format!("{s:+}") })
        .collect();
    format!("({})", parts.join(","))
}

fn format_rat(r: &vsqe::Rational) -> String {
    // Print a short decimal approximation for readability.
    let num = r.numer().clone();
    let den = r.denom().clone();
    let scaled = num * num_bigint::BigInt::from(1000) / den;
    let v = scaled.to_string().parse::<f64>().unwrap_or(0.0) / 1000.0;
    format!("{v:.3}")
}

fn main() {
    // Two roots, told apart purely by the sign of f' at each.
    show("x^2 - 2", &[-2, 0, 1]);

    // A triple-root neighborhood: close roots still get distinct codes.
    show("(x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6", &[-6, 11, -6, 1]);

    // A repeated root: the code records the vanishing derivative.
    show("(x-1)^2 = x^2 - 2x + 1", &[1, -2, 1]);

    // Codes are usable as lookup keys: ask for "the root of x^2-2 where f' < 0"
    // and get back negative sqrt(2), without ever writing a radical.
    let f = UniPoly::from_i64(&[-2, 0, 1]);
    let mut neg_sqrt2 = find_root_by_code(&f, &[-1, 1])
        .expect("valid code length")
        .expect("x^2-2 has a root with f' < 0");
    neg_sqrt2.refine_below(&"1/1000".parse().expect("rational literal"));
    println!(
        "root of x^2-2 with code (-1,+1) lies in ({}, {})",
        neg_sqrt2.lo(),
        neg_sqrt2.hi()
    );

    // Not every sign vector is a possible code. The candidate enumeration
    // drops the all-zero vector (a root of p where every derivative vanishes
    // too would force p = 0) and, at each length, the combinatorics of the
    // left/right limit signs. Each surviving code determines how the
    // polynomial leaves the root on both sides.
    println!();
    let codes = all_candidate_codes(2);
    println!("candidate codes at degree 2 and their exit directions:");
    for code in &codes {
        let (l, r) = lr_label(code);
        println!("  {}  left {l}  right {r}", fmt_code(code.signs()));
    }
    println!(
        "({} candidate codes at degree 2, {} at degree 3)",
        codes.len(),
        all_candidate_codes(3).len()
    );
}

/// Combinatorial left/right signs of p near a root with this code, checked
/// against a numeric witness when one is easy to build.
fn lr_label(code: &SignSequence) -> (char, char) {
    // The combinatorial rule reads the first nonzero entry of the code; the
    // numeric check below confirms it on a concrete instance for degree <= 2.
    let l = vsqe::thom::sgnl_comb(code).expect("nonzero code");
    let r = vsqe::thom::sgnr_comb(code).expect("nonzero code");
    if let Some(f) = witness_quadratic(code) {
        let (ln, rn) = sgn_lr_numeric(&f, code).expect("witness has this code");
        assert_eq!((ln, rn), (l, r), "combinatorial rule inconsistent with witness");
    }
    (sign_char(l), sign_char(r))
}

/// A concrete polynomial of degree <= 2 with a root carrying this exact code.
fn witness_quadratic(code: &SignSequence) -> Option<UniPoly> {
    let s = code.signs();
    match (s[0], s[1]) {
        // Root at 0 of c2*x^2 + c1*x with c1 = s1, c2 chosen to match s2.
        (s1, s2) if s1 != 0 => Some(UniPoly::from_i64(&[0, s1 as i64, (s2 as i64) * 2])),
        // s1 = 0: double root at 0 of s2*x^2.
        (0, s2) if s2 != 0 => Some(UniPoly::from_i64(&[0, 0, s2 as i64])),
        _ => None,
    }
}

fn sign_char(s: i8) -> char {
    match s {
        -1 => '-',
        1 => '+',
        _ => '0',
    }
}
