//! Exact real-root isolation with Sturm sequences.
//!
//! Usage: cargo run -p vsqe --example isolate_roots
//!
//! Every root of an integer polynomial is boxed in a rational interval
//! that contains no other root; intervals can then be refined to any
//! width without ever leaving exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use vsqe::realalg::{isolate_roots, sign_at_algebraic, UniPoly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (x² − 2)(x − 3) = x³ − 3x² − 2x + 6: roots −√2, √2, 3.
    let f = UniPoly::from_i64(&[6, -2, -3, 1]);
    println!("f has degree {} and {} real roots:", f.degree(), isolate_roots(&f)?.len());
    for mut root in isolate_roots(&f)? {
        // Shrink the isolating interval below 10⁻⁶.
        let eps = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
        root.refine_below(&eps);
        println!(
            "  root in [{}, {}] (width < 1e-6{})",
            root.lo(),
            root.hi(),
            root.as_rational().map(|r| format!(", exactly {r}")).unwrap_or_default(),
        );
    }

    // Signs of other polynomials at an algebraic point are exact too:
    // at ξ = √2, the sign of x³ − 3 is negative (2√2 < 3).
    let sqrt2 = isolate_roots(&UniPoly::from_i64(&[-2, 0, 1]))?.pop().expect("√2");
    let g = UniPoly::from_i64(&[-3, 0, 0, 1]);
    println!("sign of x^3 - 3 at sqrt(2): {}", sign_at_algebraic(&g, &sqrt2));
    Ok(())
}
