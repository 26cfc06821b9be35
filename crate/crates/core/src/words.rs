//! Exact free-group arithmetic.
//!
//! A [`Word`] is a freely reduced word over an interned, decorated generator
//! alphabet ([`GenId`]).  Words are stored run-length encoded, so structural
//! equality of two `Word`s is equality in the free group.
//!
//! Conjugation follows the convention `x^y = y⁻¹·x·y` throughout the crate.
//!
//! The module also houses the standard word builders used by the
//! construction tower: `b_i = b^{c^i}`, `b_f`, `a_f = a^{b_f}` and the
//! alternating two-generator words `w_f(x, y)`, together with the inverse
//! operation [`seq_of_word`].
//!
//! # Text grammar
//!
//! ```text
//! name  := [a-z]+ ('_bar')? ('\'')? ('[' int (',' int)? ']')?
//! token := name ('^' int)?
//! word  := token (whitespace token)*
//! ```
//!
//! For example `b_bar'[1]^-2 c^3`.  The identity word renders as the empty
//! string; the parser also accepts the single token `1` for it.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

use crate::seqsets::Seq;

/// Errors raised by word-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    /// A generator of the input has no image under the morphism.
    #[error("generator `{0}` has no image under the morphism")]
    UnknownGenerator(String),
    /// The word uses a generator other than the two expected ones.
    #[error("word uses generator `{found}` outside {{{gx}, {gy}}}")]
    NotTwoGenerator { gx: String, gy: String, found: String },
    /// Malformed word or generator text.
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
}

/// Subscript decoration of a generator: `t[2]` or `l[1,0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subscript {
    One(i64),
    Two(i64, i64),
}

/// The fields of a decorated generator name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSpec {
    pub base: String,
    pub bar: bool,
    pub prime: bool,
    pub subscript: Option<Subscript>,
}

impl GenSpec {
    fn plain(base: &str) -> Self {
        GenSpec { base: base.to_string(), bar: false, prime: false, subscript: None }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if self.bar {
            f.write_str("_bar")?;
        }
        if self.prime {
            f.write_str("'")?;
        }
        match self.subscript {
            None => Ok(()),
            Some(Subscript::One(i)) => write!(f, "[{i}]"),
            Some(Subscript::Two(i, j)) => write!(f, "[{i},{j}]"),
        }
    }
}

#[derive(Default)]
struct Interner {
    specs: Vec<&'static GenSpec>,
    index: HashMap<&'static GenSpec, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static TABLE: OnceLock<RwLock<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Interner::default()))
}

/// An interned generator.  Equal fields give equal ids from any thread.
///
/// Ordering compares the underlying [`GenSpec`]s, so it does not depend on
/// interning order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenId(u32);

impl GenId {
    /// Interns `spec` and returns its id.
    pub fn intern(spec: GenSpec) -> GenId {
        if let Some(&id) = interner().read().expect("interner poisoned").index.get(&spec) {
            return GenId(id);
        }
        let mut table = interner().write().expect("interner poisoned");
        if let Some(&id) = table.index.get(&spec) {
            return GenId(id);
        }
        let id = table.specs.len() as u32;
        let leaked: &'static GenSpec = Box::leak(Box::new(spec));
        table.specs.push(leaked);
        table.index.insert(leaked, id);
        GenId(id)
    }

    /// Plain undecorated generator such as `a` or `kappa`.
    ///
    /// # Panics
    /// Panics if `base` is not a non-empty run of ASCII lowercase letters.
    pub fn named(base: &str) -> GenId {
        assert!(
            !base.is_empty() && base.bytes().all(|c| c.is_ascii_lowercase()),
            "invalid generator base name `{base}`"
        );
        GenId::intern(GenSpec::plain(base))
    }

    /// Parses a single generator name in the text grammar.
    pub fn parse(text: &str) -> Result<GenId, WordError> {
        let mut cursor = Cursor { bytes: text.as_bytes(), pos: 0, origin: 0 };
        let g = cursor.name()?;
        if cursor.pos != text.len() {
            return Err(cursor.error("trailing characters after generator name"));
        }
        Ok(g)
    }

    /// The decorated fields of this generator.
    pub fn spec(self) -> &'static GenSpec {
        interner().read().expect("interner poisoned").specs[self.0 as usize]
    }

    /// Same generator with a single integer subscript.
    pub fn sub(self, i: i64) -> GenId {
        GenId::intern(GenSpec { subscript: Some(Subscript::One(i)), ..self.spec().clone() })
    }

    /// Same generator with a pair subscript.
    pub fn sub2(self, i: i64, j: i64) -> GenId {
        GenId::intern(GenSpec { subscript: Some(Subscript::Two(i, j)), ..self.spec().clone() })
    }

    /// Primed copy.
    pub fn primed(self) -> GenId {
        GenId::intern(GenSpec { prime: true, ..self.spec().clone() })
    }

    /// Barred copy (idempotent).
    pub fn barred(self) -> GenId {
        GenId::intern(GenSpec { bar: true, ..self.spec().clone() })
    }

    /// The one-letter word `self`.
    pub fn word(self) -> Word {
        Word::gen(self)
    }

    /// The word `self^e`.
    pub fn pow(self, e: i64) -> Word {
        Word::power(self, e)
    }
}

impl PartialOrd for GenId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            std::cmp::Ordering::Equal
        } else {
            self.spec().cmp(other.spec())
        }
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec().fmt(f)
    }
}

impl fmt::Debug for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

impl FromStr for GenId {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenId::parse(s)
    }
}

/// A freely reduced word: adjacent runs carry distinct generators and no
/// run has exponent zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    runs: Vec<(GenId, i64)>,
}

impl Word {
    /// The identity.
    pub fn identity() -> Word {
        Word { runs: Vec::new() }
    }

    /// A single generator.
    pub fn gen(g: GenId) -> Word {
        Word { runs: vec![(g, 1)] }
    }

    /// `g^e`.
    pub fn power(g: GenId, e: i64) -> Word {
        if e == 0 {
            Word::identity()
        } else {
            Word { runs: vec![(g, e)] }
        }
    }

    /// Builds a word from arbitrary runs, freely reducing them.
    pub fn from_runs<I: IntoIterator<Item = (GenId, i64)>>(runs: I) -> Word {
        let mut w = Word::identity();
        for (g, e) in runs {
            w.push(g, e);
        }
        w
    }

    /// Product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut acc = Word::identity();
        for w in words {
            acc.append(w);
        }
        acc
    }

    /// Appends `g^e`, keeping the word reduced.
    pub fn push(&mut self, g: GenId, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    /// In-place right multiplication by `other`.
    pub fn append(&mut self, other: &Word) {
        for &(g, e) in &other.runs {
            self.push(g, e);
        }
    }

    /// Freely reduced concatenation `self · other`.
    pub fn multiply(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    /// Inverse word.
    pub fn inverse(&self) -> Word {
        Word { runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..n.unsigned_abs() {
            acc.append(&base);
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        let mut w = g.inverse();
        w.append(self);
        w.append(g);
        w
    }

    /// Commutator `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        Word::product([&self.inverse(), &other.inverse(), self, other])
    }

    /// The run list.
    pub fn runs(&self) -> &[(GenId, i64)] {
        &self.runs
    }

    /// Free-group length (sum of absolute exponents).
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    /// Whether this is the identity.
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Generators occurring in the word, in order of first occurrence.
    pub fn generators(&self) -> Vec<GenId> {
        let mut seen = Vec::new();
        for &(g, _) in &self.runs {
            if !seen.contains(&g) {
                seen.push(g);
            }
        }
        seen
    }

    /// Letter sequence as `(generator, ±1)` pairs.
    pub fn letters(&self) -> impl Iterator<Item = (GenId, i64)> + '_ {
        self.runs
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat((g, e.signum())).take(e.unsigned_abs() as usize))
    }

    /// Parses a word in the text grammar.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        let mut offset = 0;
        for token in text.split(|c: char| c.is_ascii_whitespace()) {
            if !token.is_empty() {
                let mut cursor = Cursor { bytes: token.as_bytes(), pos: 0, origin: offset };
                let g = cursor.name()?;
                let e = if cursor.eat(b'^') { cursor.int()? } else { 1 };
                if cursor.pos != token.len() {
                    return Err(cursor.error("unexpected character in token"));
                }
                w.push(g, e);
            }
            offset += token.len() + 1;
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("Word(1)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl From<GenId> for Word {
    fn from(g: GenId) -> Self {
        Word::gen(g)
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl std::ops::Mul for Word {
    type Output = Word;
    fn mul(mut self, rhs: Word) -> Word {
        self.append(&rhs);
        self
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    origin: usize,
}

impl Cursor<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax { column: self.origin + self.pos + 1, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &[u8]) -> bool {
        if self.bytes[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        self.eat(b'-');
        let digits = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    fn name(&mut self) -> Result<GenId, WordError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'a'..=b'z')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a generator name"));
        }
        let base = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii letters");
        let mut spec = GenSpec::plain(base);
        spec.bar = self.eat_str(b"_bar");
        spec.prime = self.eat(b'\'');
        if self.eat(b'[') {
            let i = self.int()?;
            spec.subscript = Some(if self.eat(b',') {
                Subscript::Two(i, self.int()?)
            } else {
                Subscript::One(i)
            });
            if !self.eat(b']') {
                return Err(self.error("expected `]`"));
            }
        }
        Ok(GenId::intern(spec))
    }
}

/// A generator → word map.  Generators without an image are an error when
/// substituted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Morphism {
    /// Label of the source group.
    pub source: String,
    /// Label of the target group.
    pub target: String,
    images: HashMap<GenId, Word>,
}

impl Morphism {
    /// Unchecked morphism from an image list.  See
    /// [`Morphism::between`](crate::presentations) for the checked variant.
    pub fn new<I: IntoIterator<Item = (GenId, Word)>>(source: &str, target: &str, images: I) -> Morphism {
        Morphism {
            source: source.to_string(),
            target: target.to_string(),
            images: images.into_iter().collect(),
        }
    }

    /// Identity on the given generators.
    pub fn identity(label: &str, gens: &[GenId]) -> Morphism {
        Morphism::new(label, label, gens.iter().map(|&g| (g, Word::gen(g))))
    }

    /// Image of a generator, if defined.
    pub fn image(&self, g: GenId) -> Option<&Word> {
        self.images.get(&g)
    }

    /// Number of generators with an image.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    /// Whether no generator has an image.
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// Applies `m` letterwise to `w` and freely reduces.
pub fn substitute(w: &Word, m: &Morphism) -> Result<Word, WordError> {
    let mut out = Word::identity();
    for &(g, e) in w.runs() {
        let image = m.image(g).ok_or_else(|| WordError::UnknownGenerator(g.to_string()))?;
        out.append(&image.pow(e));
    }
    Ok(out)
}

/// Freely reduced product `w1 · w2`.
pub fn multiply(w1: &Word, w2: &Word) -> Word {
    w1.multiply(w2)
}

/// `g⁻¹ · w · g`.
pub fn conjugate(w: &Word, g: &Word) -> Word {
    w.conjugate(g)
}

/// Inverse of `w`.
pub fn invert(w: &Word) -> Word {
    w.inverse()
}

/// The generators `a`, `b`, `c` of the ambient free group `F`.
pub fn abc() -> (GenId, GenId, GenId) {
    (GenId::named("a"), GenId::named("b"), GenId::named("c"))
}

/// `b_i = b^{c^i} = c^{-i} b c^i`.
pub fn b_i(i: i64) -> Word {
    let (_, b, c) = abc();
    Word::gen(b).conjugate(&c.pow(i))
}

/// `b_f = ∏ b_i^{f(i)}` over the support of `f` in increasing `i`.
pub fn b_f(f: &Seq) -> Word {
    let (_, b, c) = abc();
    let mut w = Word::identity();
    for (i, e) in f.entries() {
        w.push(c, -i);
        w.push(b, e);
        w.push(c, i);
    }
    w
}

/// `a_f = b_f⁻¹ · a · b_f`.
pub fn a_f(f: &Seq) -> Word {
    let (a, _, _) = abc();
    Word::gen(a).conjugate(&b_f(f))
}

/// `w_f(gx, gy) = … gx^{f(0)} gy^{f(1)} gx^{f(2)} …`: even positions use
/// `gx`, odd positions `gy` (negative positions follow the same parity).
pub fn w_f(f: &Seq, gx: GenId, gy: GenId) -> Word {
    Word::from_runs(f.entries().map(|(i, e)| (if i.rem_euclid(2) == 0 { gx } else { gy }, e)))
}

/// Inverse of [`w_f`] on words over `{gx, gy}`: records the alternating
/// exponents starting from position 0 with `gx`.
pub fn seq_of_word(w: &Word, gx: GenId, gy: GenId) -> Result<Seq, WordError> {
    let mut coeffs = Vec::new();
    for &(g, e) in w.runs() {
        let parity = if g == gx {
            0
        } else if g == gy {
            1
        } else {
            return Err(WordError::NotTwoGenerator {
                gx: gx.to_string(),
                gy: gy.to_string(),
                found: g.to_string(),
            });
        };
        if coeffs.len() % 2 != parity {
            coeffs.push(0);
        }
        coeffs.push(e);
    }
    Ok(Seq::new(0, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn multiply_cancels() {
        assert_eq!(w("x y") * w("y^-1 x"), w("x^2"));
        assert_eq!(w("x y^2 x^-1") * w("x y^-1"), w("x y"));
        let u = w("a b^-3 c a");
        assert!((&u * &u.inverse()).is_identity());
    }

    #[test]
    fn conjugation_convention() {
        assert_eq!(w("b").conjugate(&w("c")), w("c^-1 b c"));
        assert_eq!(b_i(1), w("c^-1 b c"));
        let u = w("a b c^2");
        assert_eq!(u.conjugate(&Word::identity()), u);
        let g = w("c b^-1");
        assert_eq!(u.conjugate(&g).conjugate(&g.inverse()), u);
    }

    #[test]
    fn generator_rendering_round_trips() {
        for text in ["b", "b_bar'[1]", "l[1,0]", "t'[-2]", "kappa[2]", "q'[6]", "p_bar[3]"] {
            let g = GenId::parse(text).unwrap();
            assert_eq!(g.to_string(), text);
        }
        assert_eq!(GenId::named("t").sub(2).primed(), GenId::parse("t'[2]").unwrap());
        assert_eq!(GenId::named("l").sub2(0, 0).barred().to_string(), "l_bar[0,0]");
    }

    #[test]
    fn word_grammar() {
        let u = w("b_bar'[1]^-2 c^3");
        assert_eq!(u.runs().len(), 2);
        assert_eq!(u.to_string(), "b_bar'[1]^-2 c^3");
        assert_eq!(w("1"), Word::identity());
        assert_eq!(Word::identity().to_string(), "");
        assert!(matches!(Word::parse("b^"), Err(WordError::Syntax { column: 3, .. })));
        assert!(matches!(Word::parse("a B"), Err(WordError::Syntax { column: 3, .. })));
        assert!(Word::parse("l[1,").is_err());
    }

    #[test]
    fn substitute_identity_and_unknown() {
        let r = w("t[2]^-1 b t[2] c b^-1 c^-1");
        let id = Morphism::identity("q", &r.generators());
        assert_eq!(substitute(&r, &id).unwrap(), r);
        let partial = Morphism::identity("q", &[GenId::named("b")]);
        assert!(matches!(substitute(&r, &partial), Err(WordError::UnknownGenerator(_))));
    }

    #[test]
    fn word_builders() {
        let f = Seq::new(0, vec![0, 5, 9, 8]);
        let expected = Word::product([&b_i(1).pow(5), &b_i(2).pow(9), &b_i(3).pow(8)]);
        assert_eq!(b_f(&f), expected);
        let x = GenId::named("m");
        let y = GenId::named("n");
        assert_eq!(w_f(&Seq::new(0, vec![3, 5, 4, 7]), x, y), w("m^3 n^5 m^4 n^7"));
        assert_eq!(a_f(&Seq::zero()), w("a"));
    }

    #[test]
    fn seq_of_word_examples() {
        let x = GenId::named("x");
        let y = GenId::named("y");
        assert_eq!(seq_of_word(&w("x^3 y^5 x^2"), x, y).unwrap(), Seq::new(0, vec![3, 5, 2]));
        assert_eq!(seq_of_word(&Word::identity(), x, y).unwrap(), Seq::zero());
        assert_eq!(seq_of_word(&w("y^2 x"), x, y).unwrap(), Seq::new(0, vec![0, 2, 1]));
        assert!(matches!(seq_of_word(&w("x z"), x, y), Err(WordError::NotTwoGenerator { .. })));
    }
}
