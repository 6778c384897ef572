//! Plugging in an external eliminator as a subprocess backend.
//!
//! The engine can delegate the one-variable questions it cannot answer from
//! its tables to another program: the sentence is written to the process's
//! stdin in the crate's formula syntax, and the process must print back one
//! quantifier-free equivalent and exit 0. This example wires up a tiny shell
//! script that genuinely answers the degree-1 root-existence questions (for
//! a linear u1 x + u0 they reduce to the sign of u1), then shows how bridge
//! failures surface as errors instead of wrong answers.

use std::os::unix::fs::PermissionsExt;

use vsqe::formula::print_formula;
use vsqe::poly::Polynomial;
use vsqe::qea::{BackendKind, Engine, QeQuery, QueryKind};
use vsqe::thom::SignSequence;

fn script(dir: &std::path::Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    let mut perm = std::fs::metadata(&path).unwrap().permissions();
    perm.set_mode(0o755);
    std::fs::set_permissions(&path, perm).unwrap();
    path.display().to_string()
}

fn main() {
    let dir = tempfile::tempdir().unwrap();

    // For a linear polynomial u1 x + u0, "it has a root where the first
    // derivative is positive/negative" is equivalent to u1 > 0 / u1 < 0 —
    // the derivative IS u1, and any nonzero slope yields a root. So a
    // backend that extracts that one conjunct from the question is a real
    // (if minimal) eliminator for these two sentences, and refuses anything
    // it does not recognize rather than guessing.
    let cmd = script(
        dir.path(),
        "linear_guards.sh",
        r#"input=$(cat)
case "$input" in
  *"(> u1 0)"*) echo "(> u1 0)" ;;
  *"(< u1 0)"*) echo "(< u1 0)" ;;
  *) echo "cannot answer: $input" >&2; exit 1 ;;
esac"#,
    );

    // No built-in tables: every question must go over the bridge.
    let mut engine = Engine::new(vec![BackendKind::Bridge]);
    engine.set_bridge(vsqe::qea::Bridge::new(&cmd));

    for sign in [1i8, -1] {
        let query = QeQuery::new(1, QueryKind::Guard {
            s: SignSequence::from_slice(&[sign]),
        });
        println!("sentence sent over the bridge:");
        println!("  {}", print_formula(&query.payload()));

        // Coefficients to substitute for u0, u1 once the answer comes back:
        // here the concrete line m x + (c - 1).
        let coeffs = [
            &Polynomial::variable("c") - &Polynomial::constant(1),
            Polynomial::variable("m"),
        ];
        let answer = engine.resolve(&query, &coeffs, None).unwrap();
        println!("  answer for p = m x + (c - 1): {}", print_formula(&answer));
    }

    // A bridge that breaks — wrong exit code, garbage output, or silence —
    // is always an error, never silently treated as "false".
    println!();
    let bad = script(dir.path(), "broken.sh", "cat > /dev/null; exit 3");
    let mut engine = Engine::new(vec![BackendKind::Bridge]);
    engine.set_bridge(vsqe::qea::Bridge::new(&bad));
    let query = QeQuery::new(1, QueryKind::Guard {
        s: SignSequence::from_slice(&[1]),
    });
    let coeffs = [Polynomial::constant(0), Polynomial::variable("m")];
    match engine.resolve(&query, &coeffs, None) {
        Ok(_) => unreachable!("a failing bridge must not produce an answer"),
        Err(e) => println!("broken bridge reported: {e}"),
    }

    // The honest script also refuses questions outside its scope, and that
    // refusal propagates as a failure too.
    let cmd = script(
        dir.path(),
        "refuses.sh",
        r#"cat > /dev/null; echo "only linear guards supported" >&2; exit 1"#,
    );
    let mut engine = Engine::new(vec![BackendKind::Bridge]);
    engine.set_bridge(vsqe::qea::Bridge::new(&cmd));
    let query = QeQuery::new(2, QueryKind::Guard {
        s: SignSequence::from_slice(&[1, 1]),
    });
    let coeffs = [
        Polynomial::constant(1),
        Polynomial::constant(0),
        Polynomial::constant(1),
    ];
    match engine.resolve(&query, &coeffs, None) {
        Ok(_) => unreachable!(),
        Err(e) => println!("out-of-scope question reported: {e}"),
    }
}
