//! Finitely presented groups.
//!
//! Text grammar, one directive per line, `#` starts a comment:
//!
//! ```text
//! name trefoil        # optional label
//! gens a b
//! rel aba = bab       # sugar for the relator aba(bab)^-1
//! rel abAB
//! ```
//!
//! Generator names are a lowercase ASCII letter optionally followed by
//! digits (`a`, `x12`). In words, the uppercase form (`A`, `X12`) is the
//! inverse; whitespace between letters is optional and `1` is the empty word.

pub mod catalog;
mod smith;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use smith::smith_diagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the generators; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Free and cyclic reduction. Conjugate to the original, so it defines
    /// the same relator.
    pub fn cyclically_reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if stack.last() == Some(&l.inverted()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo] == stack[hi - 1].inverted() {
            lo += 1;
            hi -= 1;
        }
        Word(stack[lo..hi].to_vec())
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| l.exponent())
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self.0.iter().map(|l| l.generator).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    fn shifted(&self, offset: usize) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(l.generator + offset, l.inverse))
                .collect(),
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("relator {relator} refers to generator {generator}, but there are only {count}")]
    GeneratorOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
}

/// Generator names `a`..`z` when there are at most 26, `x1`, `x2`, ... otherwise.
pub fn default_names(count: usize) -> Vec<String> {
    if count <= 26 {
        (0..count)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

/// A group presentation `< gens | relators >`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    gen_names: Vec<String>,
    relators: Vec<Word>,
    label: Option<String>,
}

impl Presentation {
    pub fn new(gen_names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, name) in gen_names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(PresentationError::InvalidName(name.clone()));
            }
            if gen_names[..i].contains(name) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        for (r, word) in relators.iter().enumerate() {
            if let Some(l) = word.0.iter().find(|l| l.generator >= gen_names.len()) {
                return Err(PresentationError::GeneratorOutOfRange {
                    relator: r,
                    generator: l.generator,
                    count: gen_names.len(),
                });
            }
        }
        Ok(Presentation {
            gen_names,
            relators,
            label: None,
        })
    }

    /// Free group of the given rank with default generator names.
    pub fn free(rank: usize) -> Self {
        Presentation {
            gen_names: default_names(rank),
            relators: Vec::new(),
            label: Some(format!("F{rank}")),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn generator_count(&self) -> usize {
        self.gen_names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|n| n == name)
    }

    /// Parses a single word against this presentation's generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        parse_word(text, &self.gen_names, 1, 1)
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let sep = if self.gen_names.iter().all(|n| n.len() == 1) {
            ""
        } else {
            " "
        };
        word.0
            .iter()
            .map(|l| {
                let name = &self.gen_names[l.generator];
                if l.inverse {
                    name.to_ascii_uppercase()
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Free product: generators of `other` follow those of `self`; clashing
    /// names from `other` get a fresh numeric suffix.
    pub fn free_product(&self, other: &Presentation) -> Presentation {
        let mut names = self.gen_names.clone();
        for name in &other.gen_names {
            let taken =
                |n: &str| names.iter().any(|m| m == n) || other.gen_names.iter().any(|m| m == n);
            let fresh = if names.contains(name) {
                let stem = &name[..1];
                (1..)
                    .map(|k| format!("{stem}{k}"))
                    .find(|n| !taken(n))
                    .expect("unbounded suffixes")
            } else {
                name.clone()
            };
            names.push(fresh);
        }
        let offset = self.gen_names.len();
        let mut relators = self.relators.clone();
        relators.extend(other.relators.iter().map(|w| w.shifted(offset)));
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}*{b}")),
            _ => None,
        };
        Presentation {
            gen_names: names,
            relators,
            label,
        }
    }

    /// Relator exponent-sum matrix, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|w| {
                (0..self.generator_count())
                    .map(|g| w.exponent_sum(g))
                    .collect()
            })
            .collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        let diagonal = smith_diagonal(&self.exponent_matrix(), self.generator_count());
        let nonzero = diagonal.iter().filter(|&&d| d != 0).count();
        Abelianization {
            free_rank: self.generator_count() - nonzero,
            torsion: diagonal
                .into_iter()
                .filter(|&d| d > 1)
                .map(|d| d as u64)
                .collect(),
        }
    }
}

/// `Z^free_rank + Z/t_1 + Z/t_2 + ...` with `t_1 | t_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl Abelianization {
    pub fn is_free_abelian(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for Presentation {
    /// Writes the text form accepted by [`Presentation::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "name {label}")?;
        }
        write!(f, "gens")?;
        for name in &self.gen_names {
            write!(f, " {name}")?;
        }
        writeln!(f)?;
        for w in &self.relators {
            writeln!(f, "rel {}", self.format_word(w))?;
        }
        Ok(())
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_word(
    text: &str,
    names: &[String],
    line: usize,
    col0: usize,
) -> Result<Word, PresentationError> {
    let bytes = text.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    let mut saw_token = false;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        saw_token = true;
        if c == b'1' {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(syntax(
                line,
                col0 + i,
                format!("unexpected character `{}`", c as char),
            ));
        }
        let start = i;
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let token = &text[start..i];
        let name = token.to_ascii_lowercase();
        let generator = names.iter().position(|n| *n == name).ok_or_else(|| {
            PresentationError::UnknownGenerator {
                line,
                column: col0 + start,
                name: name.clone(),
            }
        })?;
        letters.push(Letter::new(generator, c.is_ascii_uppercase()));
    }
    if !saw_token {
        return Err(syntax(line, col0 + text.len(), "expected a word"));
    }
    Ok(Word(letters))
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        let mut label = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let keyword_len = trimmed
                .find(|c: char| c.is_whitespace())
                .unwrap_or(trimmed.len());
            let keyword = &trimmed[..keyword_len];
            let rest = &trimmed[keyword_len..];
            let rest_col = indent + keyword_len + 1;
            match keyword {
                "name" => {
                    let l = rest.trim();
                    if l.is_empty() {
                        return Err(syntax(line_no, rest_col, "expected a label"));
                    }
                    label = Some(l.to_string());
                }
                "gens" => {
                    if names.is_some() {
                        return Err(syntax(line_no, indent + 1, "second `gens` line"));
                    }
                    let mut list: Vec<String> = Vec::new();
                    for name in rest.split_whitespace() {
                        if !is_valid_name(name) {
                            let column = rest_col + rest.find(name).unwrap_or(0);
                            return Err(syntax(
                                line_no,
                                column,
                                format!("invalid generator name `{name}`"),
                            ));
                        }
                        if list.iter().any(|n| n == name) {
                            return Err(PresentationError::DuplicateGenerator(name.to_string()));
                        }
                        list.push(name.to_string());
                    }
                    names = Some(list);
                }
                "rel" => {
                    let gens = names
                        .as_ref()
                        .ok_or_else(|| syntax(line_no, indent + 1, "`rel` before `gens`"))?;
                    let word = match rest.find('=') {
                        Some(eq) => {
                            let lhs = parse_word(&rest[..eq], gens, line_no, rest_col)?;
                            let rhs =
                                parse_word(&rest[eq + 1..], gens, line_no, rest_col + eq + 1)?;
                            lhs.concat(&rhs.inverse())
                        }
                        None => parse_word(rest, gens, line_no, rest_col)?,
                    };
                    relators.push(word);
                }
                other => {
                    return Err(syntax(
                        line_no,
                        indent + 1,
                        format!("unknown directive `{other}`"),
                    ))
                }
            }
        }
        let gen_names = names.ok_or_else(|| syntax(1, 1, "missing `gens` line"))?;
        Ok(Presentation {
            gen_names,
            relators,
            label,
        })
    }
}

/// Parses presentation text.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let p = parse_presentation("gens a b\nrel a b a = b a b").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].len(), 6);
        assert_eq!(p.format_word(&p.relators()[0]), "abaBAB");

        let free = parse_presentation("gens a b\n").unwrap();
        assert_eq!(free.generator_count(), 2);
        assert!(free.relators().is_empty());

        let z3 = parse_presentation("gens a\nrel a a a").unwrap();
        assert_eq!(z3.relators()[0].len(), 3);
        assert_eq!(
            z3.abelianization(),
            Abelianization {
                free_rank: 0,
                torsion: vec![3]
            }
        );
    }

    #[test]
    fn parse_comments_labels_and_long_names() {
        let text = "# a comment\nname knot 1\n  gens x1 x2 y # trailing\nrel x1x2X1 = y\nrel 1\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.label(), Some("knot 1"));
        assert_eq!(p.gen_names(), &["x1", "x2", "y"]);
        assert_eq!(p.format_word(&p.relators()[0]), "x1 x2 X1 Y");
        assert!(p.relators()[1].is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_presentation("gens a b\nrel abc"),
            Err(PresentationError::UnknownGenerator {
                line: 2,
                column: 7,
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("gens a a"),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            parse_presentation("gens a\nrel a+a"),
            Err(PresentationError::Syntax {
                line: 2,
                column: 6,
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("rel a"),
            Err(PresentationError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_presentation("gens a\nrel"),
            Err(PresentationError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gens Ab"),
            Err(PresentationError::Syntax { .. })
        ));
        assert!(matches!(
            parse_presentation("gens a\nrelator a"),
            Err(PresentationError::Syntax { .. })
        ));
        assert!(parse_presentation("").is_err());
    }

    #[test]
    fn free_product_examples() {
        let f2 = Presentation::free(1).free_product(&Presentation::free(1));
        assert_eq!(f2.gen_names(), &["a", "a1"]);
        assert!(f2.relators().is_empty());

        let trefoil = parse_presentation("gens a b\nrel aba = bab").unwrap();
        let p = trefoil.free_product(&Presentation::free(1));
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relators().len(), 1);

        let q = Presentation::free(1).free_product(&trefoil);
        assert_eq!(q.gen_names(), &["a", "a1", "b"]);
        assert_eq!(q.format_word(&q.relators()[0]), "a1 b a1 B A1 B");

        let trivial = Presentation::new(vec![], vec![]).unwrap();
        assert_eq!(
            trefoil.free_product(&trivial).gen_names(),
            trefoil.gen_names()
        );
        assert_eq!(
            trefoil.free_product(&trivial).relators(),
            trefoil.relators()
        );
    }

    #[test]
    fn abelianization_examples() {
        let trefoil = parse_presentation("gens a b\nrel aba = bab").unwrap();
        assert_eq!(
            trefoil.abelianization(),
            Abelianization {
                free_rank: 1,
                torsion: vec![]
            }
        );
        for g in 0..5 {
            assert_eq!(
                Presentation::free(g).abelianization(),
                Abelianization {
                    free_rank: g,
                    torsion: vec![]
                }
            );
        }
        let p = parse_presentation("gens a b\nrel aa\nrel bbbb\nrel abAB").unwrap();
        assert_eq!(
            p.abelianization(),
            Abelianization {
                free_rank: 0,
                torsion: vec![2, 4]
            }
        );
        let q = parse_presentation("gens a b\nrel aabbbb").unwrap();
        assert_eq!(
            q.abelianization(),
            Abelianization {
                free_rank: 1,
                torsion: vec![2]
            }
        );
    }

    #[test]
    fn cyclic_reduction() {
        let p = parse_presentation("gens a b\nrel BaAbab\nrel Bab\nrel abAB").unwrap();
        assert_eq!(p.format_word(&p.relators()[0].cyclically_reduced()), "ab");
        assert_eq!(p.format_word(&p.relators()[1].cyclically_reduced()), "a");
        assert_eq!(p.format_word(&p.relators()[2].cyclically_reduced()), "abAB");
    }

    #[test]
    fn new_validates() {
        assert!(matches!(
            Presentation::new(vec!["a".into()], vec![Word(vec![Letter::new(1, false)])]),
            Err(PresentationError::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(
            Presentation::new(vec!["a".into(), "a".into()], vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(vec!["B".into()], vec![]),
            Err(PresentationError::InvalidName(_))
        ));
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        (1usize..30).prop_flat_map(|n| {
            let letter = (0..n, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv));
            let word = prop::collection::vec(letter, 0..8).prop_map(Word);
            (
                prop::collection::vec(word, 0..5),
                prop::option::of("[a-z][a-z ]{0,6}[a-z]"),
            )
                .prop_map(move |(rels, label)| {
                    let mut p = Presentation::new(default_names(n), rels).unwrap();
                    p.label = label;
                    p
                })
        })
    }

    proptest! {
        #[test]
        fn save_then_parse_is_identity(p in arb_presentation()) {
            let text = p.to_string();
            prop_assert_eq!(parse_presentation(&text).unwrap(), p);
        }

        #[test]
        fn free_rank_adds_under_free_product(a in arb_presentation(), b in arb_presentation()) {
            let (aa, ab) = (a.abelianization(), b.abelianization());
            let prod = a.free_product(&b).abelianization();
            if aa.is_free_abelian() && ab.is_free_abelian() {
                prop_assert_eq!(prod.free_rank, aa.free_rank + ab.free_rank);
                prop_assert!(prod.torsion.is_empty());
            }
        }
    }
}
