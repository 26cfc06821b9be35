//! The presentation calculus.
//!
//! A [`Presentation`] is an ordered generator list plus an ordered relator
//! list.  The constructors mirror the operations used to assemble the tower:
//! free and direct products, amalgamated unions over literally shared
//! generators, multi-letter HNN extensions and the ✻-construction
//! (a nested amalgamated union of "fixing" HNN extensions over a common
//! subgroup).
//!
//! Relator orientation: the relation `u^t = v` is stored as `t⁻¹ u t v⁻¹`
//! and "`t` fixes `u`" as `t⁻¹ u t u⁻¹`; the commutator of `g` and `h` is
//! `g⁻¹ h⁻¹ g h`.
//!
//! # File format
//!
//! ```text
//! stage: <label>
//! generators: g1 g2 …
//! relators:
//! <one word per line>
//! ```
//!
//! Lines starting with `#` are comments.  An identity relator is written
//! `1`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::words::{GenId, Morphism, Word, WordError};

/// Errors raised by presentation constructors and the file parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    /// Two factors that must be disjoint share a generator.
    #[error("generator `{0}` occurs in both factors")]
    SharedGenerator(String),
    /// A generator is listed twice.
    #[error("generator `{0}` is listed twice")]
    DuplicateGenerator(String),
    /// A relator or associated word mentions an undeclared generator.
    #[error("word `{word}` uses undeclared generator `{generator}`")]
    UnknownGenerator { word: String, generator: String },
    /// The declared shared generators differ from the actual overlap.
    #[error("inconsistent sharing: {0}")]
    InconsistentSharing(String),
    /// A morphism is not total or leaves the target alphabet.
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    /// Malformed presentation text.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

/// A finite presentation with a stage label.
#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    label: String,
    generators: Vec<GenId>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Checked constructor: no duplicate generators and every relator is a
    /// word over the generators.
    pub fn new(label: &str, generators: Vec<GenId>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let p = Presentation { label: label.to_string(), generators, relators };
        let mut seen = HashSet::new();
        for &g in &p.generators {
            if !seen.insert(g) {
                return Err(PresentationError::DuplicateGenerator(g.to_string()));
            }
        }
        for r in &p.relators {
            p.check_word(r)?;
        }
        Ok(p)
    }

    /// Free group on the given generators.
    pub fn free(label: &str, generators: &[GenId]) -> Result<Self, PresentationError> {
        Presentation::new(label, generators.to_vec(), Vec::new())
    }

    /// Stage label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same presentation under a new label.
    pub fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// Ordered generators.
    pub fn generators(&self) -> &[GenId] {
        &self.generators
    }

    /// Ordered relators.
    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `(number of generators, number of relators)`.
    pub fn stats(&self) -> (usize, usize) {
        (self.generators.len(), self.relators.len())
    }

    /// Whether `g` is a generator.
    pub fn contains(&self, g: GenId) -> bool {
        self.generators.contains(&g)
    }

    /// Checks that `w` only uses generators of this presentation.
    pub fn check_word(&self, w: &Word) -> Result<(), PresentationError> {
        match w.generators().into_iter().find(|g| !self.generators.contains(g)) {
            Some(g) => Err(PresentationError::UnknownGenerator { word: w.to_string(), generator: g.to_string() }),
            None => Ok(()),
        }
    }

    /// Copy with every generator barred.
    pub fn barred(&self, label: &str) -> Presentation {
        let bar = |w: &Word| Word::from_runs(w.runs().iter().map(|&(g, e)| (g.barred(), e)));
        Presentation {
            label: label.to_string(),
            generators: self.generators.iter().map(|g| g.barred()).collect(),
            relators: self.relators.iter().map(bar).collect(),
        }
    }

    /// Deterministic text serialization.
    pub fn export(&self) -> String {
        let mut out = format!("stage: {}\ngenerators:", self.label);
        for g in &self.generators {
            out.push(' ');
            out.push_str(&g.to_string());
        }
        out.push_str("\nrelators:\n");
        for r in &self.relators {
            if r.is_identity() {
                out.push('1');
            } else {
                out.push_str(&r.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Presentation::export`].
    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let syntax = |line: usize, column: usize, message: &str| PresentationError::Syntax {
            line,
            column,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.starts_with('#'));
        let (n, first) = lines.next().ok_or_else(|| syntax(1, 1, "missing `stage:` header"))?;
        let label = first
            .strip_prefix("stage:")
            .ok_or_else(|| syntax(n, 1, "expected `stage: <label>`"))?
            .trim()
            .to_string();
        let (n, second) = lines.next().ok_or_else(|| syntax(n + 1, 1, "missing `generators:` line"))?;
        let gens_text = second
            .strip_prefix("generators:")
            .ok_or_else(|| syntax(n, 1, "expected `generators: …`"))?;
        let mut generators = Vec::new();
        let mut column = "generators:".len() + 1;
        for token in gens_text.split(' ') {
            if !token.is_empty() {
                let g = GenId::parse(token).map_err(|e| match e {
                    WordError::Syntax { column: c, message } => syntax(n, column + c - 1, &message),
                    other => syntax(n, column, &other.to_string()),
                })?;
                if generators.contains(&g) {
                    return Err(syntax(n, column, &format!("generator `{g}` listed twice")));
                }
                generators.push(g);
            }
            column += token.len() + 1;
        }
        let (n, third) = lines.next().ok_or_else(|| syntax(n + 1, 1, "missing `relators:` line"))?;
        if third.trim_end() != "relators:" {
            return Err(syntax(n, 1, "expected `relators:`"));
        }
        let mut relators = Vec::new();
        for (n, line) in lines {
            let w = Word::parse(line).map_err(|e| match e {
                WordError::Syntax { column, message } => syntax(n, column, &message),
                other => syntax(n, 1, &other.to_string()),
            })?;
            if let Some(g) = w.generators().into_iter().find(|g| !generators.contains(g)) {
                let column = line.find(&g.to_string()).map_or(1, |c| c + 1);
                return Err(syntax(n, column, &format!("undeclared generator `{g}`")));
            }
            relators.push(w);
        }
        Ok(Presentation { label, generators, relators })
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, r) = self.stats();
        write!(f, "Presentation({}: {g} generators, {r} relators)", self.label)
    }
}

impl Morphism {
    /// Checked morphism between presentations: total on the source
    /// generators, with image words over the target generators.
    pub fn between(
        source: &Presentation,
        target: &Presentation,
        images: Vec<(GenId, Word)>,
    ) -> Result<Morphism, PresentationError> {
        let m = Morphism::new(source.label(), target.label(), images);
        for &g in source.generators() {
            let image = m
                .image(g)
                .ok_or_else(|| PresentationError::InvalidMorphism(format!("no image for `{g}`")))?;
            target
                .check_word(image)
                .map_err(|e| PresentationError::InvalidMorphism(e.to_string()))?;
        }
        Ok(m)
    }
}

/// `t⁻¹ u t v⁻¹`: the relator of `u^t = v`.
pub fn sends(t: GenId, u: &Word, v: &Word) -> Word {
    u.conjugate(&t.word()).multiply(&v.inverse())
}

/// `t⁻¹ u t u⁻¹`: the relator of "`t` fixes `u`".
pub fn fixes(t: GenId, u: &Word) -> Word {
    sends(t, u, u)
}

fn disjoint(p1: &Presentation, p2: &Presentation) -> Result<(), PresentationError> {
    match p2.generators.iter().find(|g| p1.generators.contains(g)) {
        Some(g) => Err(PresentationError::SharedGenerator(g.to_string())),
        None => Ok(()),
    }
}

/// Free product of presentations with disjoint generators.
pub fn free_product(p1: &Presentation, p2: &Presentation) -> Result<Presentation, PresentationError> {
    disjoint(p1, p2)?;
    Ok(Presentation {
        label: format!("({} * {})", p1.label, p2.label),
        generators: [p1.generators.as_slice(), &p2.generators].concat(),
        relators: [p1.relators.as_slice(), &p2.relators].concat(),
    })
}

/// Direct product: the free product plus one commutator `[g, h]` for every
/// `g` of `p1` and `h` of `p2` (outer loop over `p1`).
pub fn direct_product(p1: &Presentation, p2: &Presentation) -> Result<Presentation, PresentationError> {
    let mut p = free_product(p1, p2)?;
    p.label = format!("({} x {})", p1.label, p2.label);
    for &g in &p1.generators {
        for &h in &p2.generators {
            p.relators.push(g.word().commutator(&h.word()));
        }
    }
    Ok(p)
}

/// HNN extension by one stable letter: adds `stable` and one relator
/// `t⁻¹ u t v⁻¹` for each pair `(u, v)`.
pub fn hnn(p: &Presentation, stable: GenId, pairs: &[(Word, Word)]) -> Result<Presentation, PresentationError> {
    if p.contains(stable) {
        return Err(PresentationError::SharedGenerator(stable.to_string()));
    }
    let mut out = p.clone();
    out.label = format!("{} *_{{}} {}", p.label, stable);
    out.generators.push(stable);
    for (u, v) in pairs {
        p.check_word(u)?;
        p.check_word(v)?;
        out.relators.push(sends(stable, u, v));
    }
    Ok(out)
}

/// HNN extension whose stable letter fixes every word of `fixed`.
pub fn hnn_fix(p: &Presentation, stable: GenId, fixed: &[Word]) -> Result<Presentation, PresentationError> {
    let pairs: Vec<(Word, Word)> = fixed.iter().map(|u| (u.clone(), u.clone())).collect();
    hnn(p, stable, &pairs)
}

/// Amalgamated union over literally shared generators: generators of `p1`
/// followed by the non-shared generators of `p2`; relators of `p1` followed
/// by the relators of `p2` not already present (literal comparison of
/// reduced words).
pub fn amalgamated_union(
    p1: &Presentation,
    p2: &Presentation,
    shared: &[GenId],
) -> Result<Presentation, PresentationError> {
    let overlap: HashSet<GenId> = p2.generators.iter().copied().filter(|g| p1.contains(*g)).collect();
    let declared: HashSet<GenId> = shared.iter().copied().collect();
    if overlap != declared {
        let mut extra: Vec<String> = overlap.symmetric_difference(&declared).map(|g| g.to_string()).collect();
        extra.sort();
        return Err(PresentationError::InconsistentSharing(format!(
            "declared and actual shared generators differ on {}",
            extra.join(", ")
        )));
    }
    let mut out = p1.clone();
    out.label = format!("({} *_M {})", p1.label, p2.label);
    out.generators.extend(p2.generators.iter().copied().filter(|g| !overlap.contains(g)));
    let mut present: HashSet<Word> = out.relators.iter().cloned().collect();
    for r in &p2.relators {
        if present.insert(r.clone()) {
            out.relators.push(r.clone());
        }
    }
    Ok(out)
}

/// The ✻-construction: the nested amalgamated union over `m` of the
/// extensions `K_i *_{L_i} t_i`, where each `t_i` fixes the words `L_i`.
pub fn star(items: &[(Presentation, Vec<Word>, GenId)], m: &[GenId]) -> Result<Presentation, PresentationError> {
    let mut acc: Option<Presentation> = None;
    let mut letters = HashSet::new();
    for (k, l, t) in items {
        if let Some(g) = m.iter().find(|g| !k.contains(**g)) {
            return Err(PresentationError::InconsistentSharing(format!("`{g}` is not a generator of {}", k.label)));
        }
        if !letters.insert(*t) {
            return Err(PresentationError::DuplicateGenerator(t.to_string()));
        }
        let ext = hnn_fix(k, *t, l)?;
        acc = Some(match acc {
            None => ext,
            Some(prev) => amalgamated_union(&prev, &ext, m)?,
        });
    }
    acc.ok_or_else(|| PresentationError::InconsistentSharing("empty ✻-construction".to_string()))
}

/// `(number of generators, number of relators)` of `p`.
pub fn stats(p: &Presentation) -> (usize, usize) {
    p.stats()
}

/// Serializes `p`; see the module documentation for the format.
pub fn export(p: &Presentation) -> String {
    p.export()
}

/// Parses the output of [`export`].
pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
    Presentation::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GenId {
        GenId::parse(s).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn xi1() -> Presentation {
        let base = Presentation::free("F2", &[g("b"), g("c")]).unwrap();
        let p = hnn(&base, g("t[1]"), &[(w("b"), w("b")), (w("c"), w("c^2"))]).unwrap();
        hnn(&p, g("t'[1]"), &[(w("b"), w("c b c^-1")), (w("c"), w("c^2"))]).unwrap()
    }

    #[test]
    fn relator_orientation() {
        assert_eq!(sends(g("t"), &w("x"), &w("y")), w("t^-1 x t y^-1"));
        assert_eq!(fixes(g("t"), &w("u")), w("t^-1 u t u^-1"));
    }

    #[test]
    fn products() {
        let a = Presentation::free("A", &[g("a")]).unwrap();
        let theta = free_product(&a, &xi1()).unwrap();
        assert_eq!(theta.stats(), (5, 4));
        let b = Presentation::free("B", &[g("b")]).unwrap();
        assert_eq!(free_product(&a, &b).unwrap().stats(), (2, 0));
        assert_eq!(direct_product(&a, &b).unwrap().relators(), &[w("a^-1 b^-1 a b")]);
        let trivial = Presentation::free("1", &[]).unwrap();
        assert_eq!(free_product(&theta, &trivial).unwrap().stats(), theta.stats());
        assert_eq!(direct_product(&theta, &trivial).unwrap().stats(), theta.stats());
        assert!(matches!(free_product(&a, &a), Err(PresentationError::SharedGenerator(_))));
    }

    #[test]
    fn hnn_variants() {
        let x = xi1();
        assert_eq!(x.stats(), (4, 4));
        let free = hnn(&x, g("s"), &[]).unwrap();
        assert_eq!(free.stats(), (5, 4));
        assert!(hnn(&x, g("b"), &[]).is_err());
        assert!(hnn(&x, g("s"), &[(w("z"), w("b"))]).is_err());
    }

    #[test]
    fn amalgamation() {
        let a = Presentation::free("A", &[g("a")]).unwrap();
        let theta = free_product(&a, &xi1()).unwrap();
        let u1 = hnn_fix(&theta, g("u[1]"), &[w("c^-1 b c"), w("t[1]"), w("t'[1]")]).unwrap();
        let u2 = hnn_fix(&theta, g("u[2]"), &[w("a"), w("b"), w("t[1]"), w("t'[1]")]).unwrap();
        let cscr = amalgamated_union(&u1, &u2, theta.generators()).unwrap();
        assert_eq!(cscr.stats(), (7, 11));
        assert_eq!(amalgamated_union(&theta, &theta, theta.generators()).unwrap().stats(), theta.stats());
        assert!(matches!(
            amalgamated_union(&u1, &u2, &[g("a")]),
            Err(PresentationError::InconsistentSharing(_))
        ));
        let single = star(&[(theta.clone(), vec![w("a")], g("v"))], theta.generators()).unwrap();
        assert_eq!(single, hnn_fix(&theta, g("v"), &[w("a")]).unwrap());
    }

    #[test]
    fn export_parse() {
        let a = Presentation::free("A", &[g("a")]).unwrap();
        assert_eq!(a.export(), "stage: A\ngenerators: a\nrelators:\n");
        assert_eq!(Presentation::parse(&a.export()).unwrap(), a);
        let x = xi1().relabel("xi(1)");
        let text = x.export();
        assert_eq!(text.lines().count(), 3 + 4);
        assert_eq!(Presentation::parse(&text).unwrap(), x);
        let bad = "stage: s\ngenerators: a b\nrelators:\na b\nb z^2\n";
        assert_eq!(
            Presentation::parse(bad),
            Err(PresentationError::Syntax {
                line: 5,
                column: 3,
                message: "undeclared generator `z`".to_string()
            })
        );
        let commented = "# comment\nstage: s\ngenerators: a\nrelators:\n# another\na^2\n";
        assert_eq!(Presentation::parse(commented).unwrap().stats(), (1, 1));
    }

    #[test]
    fn checked_morphisms() {
        let src = Presentation::free("S", &[g("a"), g("b")]).unwrap();
        let dst = Presentation::free("T", &[g("x"), g("y")]).unwrap();
        assert!(Morphism::between(&src, &dst, vec![(g("a"), w("x y")), (g("b"), w("y"))]).is_ok());
        assert!(Morphism::between(&src, &dst, vec![(g("a"), w("x y"))]).is_err());
        assert!(Morphism::between(&src, &dst, vec![(g("a"), w("x")), (g("b"), w("z"))]).is_err());
    }
}
