//! On-disk format and in-memory store for quantifier-elimination answer
//! tables.
//!
//! A table file holds, for one degree n, quantifier-free answers keyed by
//! derivative sign sequences:
//!
//! ```text
//! (tables (degree 1) (version 1)
//!   (guard (signs 1) (formula (> u1 0)))
//!   (subst (signs 1) (rel <=) (formula ...))
//!   (nu (psigns 1) (qsigns -1) (formula ...))
//! )
//! ```
//!
//! Formulas are over the coefficient parameters u0..un (the root-defining
//! polynomial, uᵢ the coefficient of xⁱ) and v0..vn (the substituted
//! polynomial). Guards answer "does the root exist", subst entries answer
//! "does v ρ 0 hold at the root", nu entries answer "is the root also a
//! root of v with derivative signs t".

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::formula::{print_formula, Formula, Relation};
use crate::formula::{Parser, Token, TokenKind};
use crate::thom::SignSequence;

use super::QueryKind;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: syntax error at {line}:{col}: {message}")]
    Syntax { file: String, line: usize, col: usize, message: String },
    #[error("{file}: {message}")]
    Malformed { file: String, message: String },
    #[error("degree {degree} defined by both {first} and {second}")]
    DuplicateDegree { degree: usize, first: String, second: String },
}

/// All table entries for one degree.
#[derive(Clone, Debug, Default)]
pub struct TableSet {
    pub degree: usize,
    guards: BTreeMap<SignSequence, Formula>,
    substs: BTreeMap<(SignSequence, Relation), Formula>,
    nus: BTreeMap<(SignSequence, SignSequence), Formula>,
}

/// Identity of one table entry, used in reports and error messages.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntryKey {
    Guard(SignSequence),
    Subst(SignSequence, Relation),
    Nu(SignSequence, SignSequence),
}

impl std::fmt::Display for EntryKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntryKey::Guard(s) => write!(f, "guard {s}"),
            EntryKey::Subst(s, rel) => write!(f, "subst {s} {}", rel.token()),
            EntryKey::Nu(s, t) => write!(f, "nu {s} {t}"),
        }
    }
}

impl TableSet {
    pub fn new(degree: usize) -> Self {
        TableSet { degree, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.guards.len() + self.substs.len() + self.nus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert_guard(&mut self, s: SignSequence, f: Formula) -> Result<(), String> {
        if self.guards.contains_key(&s) {
            return Err(format!("duplicate entry: guard {s}"));
        }
        self.guards.insert(s, f);
        Ok(())
    }

    pub fn insert_subst(
        &mut self,
        s: SignSequence,
        rel: Relation,
        f: Formula,
    ) -> Result<(), String> {
        if self.substs.contains_key(&(s.clone(), rel)) {
            return Err(format!("duplicate entry: subst {s} {}", rel.token()));
        }
        self.substs.insert((s, rel), f);
        Ok(())
    }

    pub fn insert_nu(
        &mut self,
        s: SignSequence,
        t: SignSequence,
        f: Formula,
    ) -> Result<(), String> {
        if self.nus.contains_key(&(s.clone(), t.clone())) {
            return Err(format!("duplicate entry: nu {s} {t}"));
        }
        self.nus.insert((s, t), f);
        Ok(())
    }

    pub fn guard(&self, s: &SignSequence) -> Option<&Formula> {
        self.guards.get(s)
    }

    pub fn subst(&self, s: &SignSequence, rel: Relation) -> Option<&Formula> {
        self.substs.get(&(s.clone(), rel))
    }

    pub fn nu(&self, s: &SignSequence, t: &SignSequence) -> Option<&Formula> {
        self.nus.get(&(s.clone(), t.clone()))
    }

    pub fn lookup(&self, kind: &QueryKind) -> Option<&Formula> {
        match kind {
            QueryKind::Guard { s } => self.guard(s),
            QueryKind::Subst { s, rel } => self.subst(s, *rel),
            QueryKind::Nu { s, t } => self.nu(s, t),
        }
    }

    /// All entries in deterministic order: guards, then subst, then nu,
    /// each sorted by key.
    pub fn entries(&self) -> Vec<(EntryKey, &Formula)> {
        let mut out = Vec::with_capacity(self.len());
        for (s, f) in &self.guards {
            out.push((EntryKey::Guard(s.clone()), f));
        }
        for ((s, rel), f) in &self.substs {
            out.push((EntryKey::Subst(s.clone(), *rel), f));
        }
        for ((s, t), f) in &self.nus {
            out.push((EntryKey::Nu(s.clone(), t.clone()), f));
        }
        out
    }

    /// Serialize to the on-disk text form; inverse of [`parse_tables`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("(tables (degree {}) (version 1)\n", self.degree));
        for (key, f) in self.entries() {
            match key {
                EntryKey::Guard(s) => {
                    out.push_str(&format!(
                        "  (guard (signs{}) (formula {}))\n",
                        signs_text(&s),
                        print_formula(f)
                    ));
                }
                EntryKey::Subst(s, rel) => {
                    out.push_str(&format!(
                        "  (subst (signs{}) (rel {}) (formula {}))\n",
                        signs_text(&s),
                        rel.token(),
                        print_formula(f)
                    ));
                }
                EntryKey::Nu(s, t) => {
                    out.push_str(&format!(
                        "  (nu (psigns{}) (qsigns{}) (formula {}))\n",
                        signs_text(&s),
                        signs_text(&t),
                        print_formula(f)
                    ));
                }
            }
        }
        out.push_str(")\n");
        out
    }
}

fn signs_text(s: &SignSequence) -> String {
    s.signs().iter().map(|x| format!(" {x}")).collect()
}

struct TableParser<'a> {
    p: Parser,
    file: &'a str,
}

impl<'a> TableParser<'a> {
    fn syntax(&self, msg: impl Into<String>) -> TableError {
        let e = self.p.err_here(msg.into());
        TableError::Syntax { file: self.file.to_string(), line: e.line, col: e.col, message: e.message }
    }

    fn malformed(&self, msg: impl Into<String>) -> TableError {
        TableError::Malformed { file: self.file.to_string(), message: msg.into() }
    }

    fn expect_lparen(&mut self, what: &str) -> Result<(), TableError> {
        match self.p.next() {
            Some(Token { kind: TokenKind::LParen, .. }) => Ok(()),
            _ => Err(self.syntax(format!("expected ( to open {what}"))),
        }
    }

    fn expect_rparen(&mut self, what: &str) -> Result<(), TableError> {
        match self.p.next() {
            Some(Token { kind: TokenKind::RParen, .. }) => Ok(()),
            _ => Err(self.syntax(format!("expected ) to close {what}"))),
        }
    }

    fn expect_word(&mut self, want: &str) -> Result<(), TableError> {
        match self.p.next() {
            Some(Token { kind: TokenKind::Word(w), .. }) if w == want => Ok(()),
            _ => Err(self.syntax(format!("expected `{want}`"))),
        }
    }

    fn next_word(&mut self, what: &str) -> Result<String, TableError> {
        match self.p.next() {
            Some(Token { kind: TokenKind::Word(w), .. }) => Ok(w),
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, TableError> {
        match self.p.next() {
            Some(Token { kind: TokenKind::Int(n), .. }) => n
                .to_usize()
                .ok_or_else(|| self.malformed(format!("{what} out of range"))),
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    /// `(signs s1 … sn)` with the given head word.
    fn signs(&mut self, head: &str, degree: usize) -> Result<SignSequence, TableError> {
        self.expect_lparen(head)?;
        self.expect_word(head)?;
        let mut signs = Vec::new();
        loop {
            match self.p.next() {
                Some(Token { kind: TokenKind::Int(n), .. }) => {
                    let v = n
                        .to_i8()
                        .filter(|v| (-1..=1).contains(v))
                        .ok_or_else(|| self.malformed("sign entries must be -1, 0, or 1"))?;
                    signs.push(v);
                }
                Some(Token { kind: TokenKind::RParen, .. }) => break,
                _ => return Err(self.syntax("expected sign or )")),
            }
        }
        if signs.len() != degree {
            return Err(self.malformed(format!(
                "sign sequence has length {} but the table degree is {degree}",
                signs.len()
            )));
        }
        let seq = SignSequence::new(signs)
            .map_err(|e| self.malformed(e.to_string()))?;
        if seq.is_zero() {
            return Err(self.malformed("sign sequence must not be identically zero"));
        }
        Ok(seq)
    }

    /// `(formula F)`.
    fn formula(&mut self) -> Result<Formula, TableError> {
        self.expect_lparen("formula")?;
        self.expect_word("formula")?;
        let f = self.p.formula().map_err(|e| TableError::Syntax {
            file: self.file.to_string(),
            line: e.line,
            col: e.col,
            message: e.message,
        })?;
        if !f.is_quantifier_free() {
            return Err(self.malformed("table formulas must be quantifier-free"));
        }
        self.expect_rparen("formula")?;
        Ok(f)
    }
}

/// Parse one table file's text. `file` is used in error messages only.
pub fn parse_tables(src: &str, file: &str) -> Result<TableSet, TableError> {
    let p = Parser::new(src).map_err(|e| TableError::Syntax {
        file: file.to_string(),
        line: e.line,
        col: e.col,
        message: e.message,
    })?;
    let mut tp = TableParser { p, file };
    tp.expect_lparen("tables")?;
    tp.expect_word("tables")?;
    tp.expect_lparen("degree")?;
    tp.expect_word("degree")?;
    let degree = tp.next_usize("degree")?;
    if degree == 0 {
        return Err(tp.malformed("table degree must be at least 1"));
    }
    tp.expect_rparen("degree")?;
    tp.expect_lparen("version")?;
    tp.expect_word("version")?;
    let version = tp.next_usize("version")?;
    if version != 1 {
        return Err(tp.malformed(format!("unsupported table version {version}")));
    }
    tp.expect_rparen("version")?;

    let mut set = TableSet::new(degree);
    loop {
        match tp.p.peek() {
            Some(Token { kind: TokenKind::RParen, .. }) => {
                tp.p.next();
                break;
            }
            Some(Token { kind: TokenKind::LParen, .. }) => {
                tp.p.next();
                let kind = tp.next_word("entry kind")?;
                match kind.as_str() {
                    "guard" => {
                        let s = tp.signs("signs", degree)?;
                        let f = tp.formula()?;
                        tp.expect_rparen("guard entry")?;
                        set.insert_guard(s, f).map_err(|m| tp.malformed(m))?;
                    }
                    "subst" => {
                        let s = tp.signs("signs", degree)?;
                        tp.expect_lparen("rel")?;
                        tp.expect_word("rel")?;
                        let tok = tp.next_word("relation")?;
                        let rel = Relation::from_token(&tok)
                            .ok_or_else(|| tp.malformed(format!("unknown relation `{tok}`")))?;
                        tp.expect_rparen("rel")?;
                        let f = tp.formula()?;
                        tp.expect_rparen("subst entry")?;
                        set.insert_subst(s, rel, f).map_err(|m| tp.malformed(m))?;
                    }
                    "nu" => {
                        let s = tp.signs("psigns", degree)?;
                        let t = tp.signs("qsigns", degree)?;
                        let f = tp.formula()?;
                        tp.expect_rparen("nu entry")?;
                        set.insert_nu(s, t, f).map_err(|m| tp.malformed(m))?;
                    }
                    other => {
                        return Err(tp.malformed(format!("unknown entry kind `{other}`")))
                    }
                }
            }
            _ => return Err(tp.syntax("expected table entry or )")),
        }
    }
    tp.p.expect_done().map_err(|e| TableError::Syntax {
        file: file.to_string(),
        line: e.line,
        col: e.col,
        message: e.message,
    })?;
    Ok(set)
}

/// Load one table file.
pub fn load_file(path: &Path) -> Result<TableSet, TableError> {
    let file = path.display().to_string();
    let src = std::fs::read_to_string(path)
        .map_err(|source| TableError::Io { file: file.clone(), source })?;
    parse_tables(&src, &file)
}

/// Load every `*.tables` file in a directory, keyed by degree. Two files
/// claiming the same degree is an error.
pub fn load_dir(dir: &Path) -> Result<BTreeMap<usize, TableSet>, TableError> {
    let file = dir.display().to_string();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|source| TableError::Io { file: file.clone(), source })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |e| e == "tables"))
        .collect();
    paths.sort();
    let mut out: BTreeMap<usize, TableSet> = BTreeMap::new();
    let mut sources: BTreeMap<usize, String> = BTreeMap::new();
    for path in paths {
        let set = load_file(&path)?;
        let name = path.display().to_string();
        if let Some(first) = sources.get(&set.degree) {
            return Err(TableError::DuplicateDegree {
                degree: set.degree,
                first: first.clone(),
                second: name,
            });
        }
        sources.insert(set.degree, name);
        out.insert(set.degree, set);
    }
    Ok(out)
}

/// Convenience used throughout tests: parse text that must be valid.
pub fn parse_tables_str(src: &str) -> TableSet {
    parse_tables(src, "<inline>").expect("valid table text")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn seq(s: &[i8]) -> SignSequence {
        SignSequence::from_slice(s)
    }

    fn sample_set() -> TableSet {
        let mut set = TableSet::new(1);
        set.insert_guard(seq(&[1]), parse_formula("(> u1 0)").unwrap()).unwrap();
        set.insert_guard(seq(&[-1]), parse_formula("(< u1 0)").unwrap()).unwrap();
        set.insert_subst(
            seq(&[1]),
            Relation::Le,
            parse_formula("(and (> u1 0) (<= (+ (* u1 v0) (* -1 u0 v1)) 0))").unwrap(),
        )
        .unwrap();
        set.insert_nu(
            seq(&[1]),
            seq(&[-1]),
            parse_formula("(and (> u1 0) (= (+ (* u1 v0) (* -1 u0 v1)) 0) (< v1 0))").unwrap(),
        )
        .unwrap();
        set
    }

    #[test]
    fn round_trip() {
        let set = sample_set();
        let text = set.to_text();
        let back = parse_tables(&text, "t").unwrap();
        assert_eq!(back.degree, 1);
        assert_eq!(back.len(), set.len());
        assert_eq!(back.to_text(), text);
        assert_eq!(back.guard(&seq(&[1])), set.guard(&seq(&[1])));
        assert_eq!(back.subst(&seq(&[1]), Relation::Le), set.subst(&seq(&[1]), Relation::Le));
        assert_eq!(back.nu(&seq(&[1]), &seq(&[-1])), set.nu(&seq(&[1]), &seq(&[-1])));
    }

    #[test]
    fn rejects_duplicates_and_malformed() {
        let dup = "(tables (degree 1) (version 1)\n  (guard (signs 1) (formula true))\n  (guard (signs 1) (formula false))\n)";
        assert!(matches!(parse_tables(dup, "t"), Err(TableError::Malformed { .. })));
        let bad_len = "(tables (degree 2) (version 1)\n  (guard (signs 1) (formula true))\n)";
        assert!(matches!(parse_tables(bad_len, "t"), Err(TableError::Malformed { .. })));
        let bad_ver = "(tables (degree 1) (version 7))";
        assert!(matches!(parse_tables(bad_ver, "t"), Err(TableError::Malformed { .. })));
        let zero = "(tables (degree 2) (version 1)\n  (guard (signs 0 0) (formula true))\n)";
        assert!(matches!(parse_tables(zero, "t"), Err(TableError::Malformed { .. })));
        let bad_sign = "(tables (degree 1) (version 1)\n  (guard (signs 3) (formula true))\n)";
        assert!(matches!(parse_tables(bad_sign, "t"), Err(TableError::Malformed { .. })));
        let quantified =
            "(tables (degree 1) (version 1)\n  (guard (signs 1) (formula (exists (x) (= x 0))))\n)";
        assert!(matches!(parse_tables(quantified, "t"), Err(TableError::Malformed { .. })));
        let trailing = "(tables (degree 1) (version 1)) junk";
        assert!(matches!(parse_tables(trailing, "t"), Err(TableError::Syntax { .. })));
    }

    #[test]
    fn load_dir_detects_degree_clash() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("a.tables"),
            "(tables (degree 1) (version 1))",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("b.tables"),
            "(tables (degree 1) (version 1))",
        )
        .unwrap();
        assert!(matches!(
            load_dir(dir.path()),
            Err(TableError::DuplicateDegree { degree: 1, .. })
        ));
        std::fs::write(
            dir.path().join("b.tables"),
            "(tables (degree 2) (version 1))",
        )
        .unwrap();
        let map = load_dir(dir.path()).unwrap();
        assert_eq!(map.len(), 2);
        assert!(map.contains_key(&1) && map.contains_key(&2));
    }
}
