//! Regenerate the shipped table files from the closed-form templates.
//!
//! Usage: cargo run -p vsqe --example author_tables [OUT_DIR]
//!
//! Writes degree1.tables and degree2.tables into OUT_DIR (default:
//! ./tables). The files are plain text in the same grammar the loader
//! accepts, so they can be inspected, diffed, and validated with
//! `vsqe tables-validate --tables OUT_DIR`.

use std::path::PathBuf;

use vsqe::qea::build_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir: PathBuf =
        std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("tables"));
    std::fs::create_dir_all(&out_dir)?;
    for degree in [1usize, 2] {
        let set = build_table(degree)?;
        let path = out_dir.join(format!("degree{degree}.tables"));
        std::fs::write(&path, set.to_text())?;
        println!("wrote {} ({} entries)", path.display(), set.len());
    }
    Ok(())
}
