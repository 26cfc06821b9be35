//! The construction tower.
//!
//! Every named group of the construction is produced by [`build`] from a
//! [`StageId`], on demand and memoized.  Each stage extends its base stage by
//! new generators and relators, in exactly the order in which the explicit
//! generator and relator lists of the final group `q_final` enumerate them;
//! that order defines the index `k` used by [`gamma_image`].
//!
//! Naming: the stable letters of `k_omega2b` are `p[1]..p[4]` (their barred
//! copies `p_bar[1]..p_bar[4]`); the six stable letters introduced after
//! `k_t` are `q'[1]..q'[6]`.  The letters `p`, `q` (no subscript) belong to
//! `p_bar`.  The two generators of `t_q_final` are again called `x`, `y`.
//!
//! The embedding maps are [`embed_alpha`] (into the recursively presented
//! two-generator group, truncated by [`build_t_q`]), [`embed_phi`] (into
//! `q_final`, through the identical inclusion of `x`, `y`) and
//! [`embed_psi`] (into `t_q_final`, through the substitution [`gamma`]).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use thiserror::Error;

use crate::presentations::{amalgamated_union, direct_product, fixes, free_product, sends, Presentation};
use crate::seqsets::higman_code;
use crate::words::{a_f, b_i, substitute, GenId, Morphism, Word};

/// Errors raised by the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    /// The denominator does not divide `k!` for any `k` up to the bound.
    #[error("denominator {den} does not divide k! for any k <= {trunc_k}")]
    TruncationExceeded { den: i64, trunc_k: i64 },
    /// An exponent does not fit into 64 bits.
    #[error("exponent overflow while embedding {0}")]
    Overflow(String),
    /// Malformed rational.
    #[error("invalid rational `{0}`")]
    BadRational(String),
    /// Index out of range.
    #[error("index {0} out of range")]
    BadIndex(i64),
    /// Unknown stage name.
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
}

/// Default bound on `k` when none is supplied ([`embed_phi`], [`embed_psi`]).
pub const DEFAULT_TRUNC_K: i64 = 30;

/// The named stages of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageId {
    /// `⟨b, c, t_m, t'_m⟩` with the four relations of the auxiliary group.
    Xi(i64),
    Theta,
    Cscr,
    Ascr,
    KB,
    Zscr,
    Gscr,
    Lambda0,
    Lambda1,
    Lambda2,
    Fscr,
    Dscr,
    Lscr,
    KOmega2B,
    /// The barred copy of `k_omega2b`, times `F = ⟨a, b, c⟩`.
    KBar,
    M1,
    M2,
    KSigma,
    KC,
    KF,
    KT,
    Kscr,
    KQ1,
    KQ2,
    KZT,
    PBar,
    RBar,
    KZPlus,
    KWT,
    QFinal,
    TQFinal,
}

impl StageId {
    /// Every stage (the auxiliary family represented by `xi(1)`), in
    /// dependency order.
    pub const ALL: [StageId; 31] = [
        StageId::Xi(1),
        StageId::Theta,
        StageId::Cscr,
        StageId::Ascr,
        StageId::KB,
        StageId::Zscr,
        StageId::Gscr,
        StageId::Lambda0,
        StageId::Lambda1,
        StageId::Lambda2,
        StageId::Fscr,
        StageId::Dscr,
        StageId::Lscr,
        StageId::KOmega2B,
        StageId::KBar,
        StageId::M1,
        StageId::M2,
        StageId::KSigma,
        StageId::KC,
        StageId::KF,
        StageId::KT,
        StageId::Kscr,
        StageId::KQ1,
        StageId::KQ2,
        StageId::KZT,
        StageId::PBar,
        StageId::RBar,
        StageId::KZPlus,
        StageId::KWT,
        StageId::QFinal,
        StageId::TQFinal,
    ];

    /// Command-line spelling.
    pub fn name(self) -> String {
        match self {
            StageId::Xi(m) => format!("xi({m})"),
            other => other.static_name().to_string(),
        }
    }

    fn static_name(self) -> &'static str {
        match self {
            StageId::Xi(_) => "xi",
            StageId::Theta => "theta",
            StageId::Cscr => "cscr",
            StageId::Ascr => "ascr",
            StageId::KB => "k_b",
            StageId::Zscr => "zscr",
            StageId::Gscr => "gscr",
            StageId::Lambda0 => "lambda0",
            StageId::Lambda1 => "lambda1",
            StageId::Lambda2 => "lambda2",
            StageId::Fscr => "fscr",
            StageId::Dscr => "dscr",
            StageId::Lscr => "lscr",
            StageId::KOmega2B => "k_omega2b",
            StageId::KBar => "k_bar",
            StageId::M1 => "m1",
            StageId::M2 => "m2",
            StageId::KSigma => "k_sigma",
            StageId::KC => "k_c",
            StageId::KF => "k_f",
            StageId::KT => "k_t",
            StageId::Kscr => "kscr",
            StageId::KQ1 => "k_q1",
            StageId::KQ2 => "k_q2",
            StageId::KZT => "k_zt",
            StageId::PBar => "p_bar",
            StageId::RBar => "r_bar",
            StageId::KZPlus => "k_zplus",
            StageId::KWT => "k_wt",
            StageId::QFinal => "q_final",
            StageId::TQFinal => "t_q_final",
        }
    }

    /// Stages this stage is built from.
    pub fn bases(self) -> Vec<StageId> {
        use StageId::*;
        match self {
            Xi(_) | Zscr | Kscr => vec![],
            Theta => vec![Xi(1)],
            Cscr => vec![Theta],
            Ascr => vec![Cscr],
            KB => vec![Ascr],
            Gscr => vec![Zscr],
            Lambda0 | Lambda1 | Lambda2 => vec![Gscr],
            Fscr => vec![Lambda0, Lambda1, Lambda2],
            Dscr => vec![Fscr],
            Lscr => vec![Dscr, KB],
            KOmega2B => vec![Lscr],
            KBar => vec![KOmega2B],
            M1 => vec![KBar],
            M2 => vec![M1],
            KSigma => vec![M2],
            KC => vec![KOmega2B, KSigma],
            KF => vec![KC],
            KT => vec![KF],
            KQ1 => vec![KT, Kscr],
            KQ2 => vec![KQ1],
            KZT => vec![KQ2],
            PBar => vec![KZT],
            RBar => vec![PBar],
            KZPlus => vec![RBar],
            KWT => vec![KZPlus],
            QFinal => vec![KWT],
            TQFinal => vec![QFinal],
        }
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for StageId {
    type Err = PipelineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(m) = s.strip_prefix("xi(").and_then(|r| r.strip_suffix(')')) {
            return m.parse().map(StageId::Xi).map_err(|_| PipelineError::UnknownStage(s.to_string()));
        }
        StageId::ALL
            .into_iter()
            .find(|id| !matches!(id, StageId::Xi(_)) && id.static_name() == s)
            .ok_or_else(|| PipelineError::UnknownStage(s.to_string()))
    }
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    /// `num / den` in lowest terms; `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Result<Rational, PipelineError> {
        if den == 0 {
            return Err(PipelineError::BadRational(format!("{num}/{den}")));
        }
        let g = num.gcd(&den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        let (num, den) = (sign * (num / g), sign * (den / g));
        Ok(Rational { num, den })
    }

    /// Numerator.
    pub fn numerator(self) -> i64 {
        self.num
    }

    /// Positive denominator.
    pub fn denominator(self) -> i64 {
        self.den
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = PipelineError;
    /// Optional sign, digits, then optionally `/` and positive digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PipelineError::BadRational(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => {
                if !d.bytes().all(|c| c.is_ascii_digit()) || d.is_empty() {
                    return Err(bad());
                }
                (n, d.parse::<i64>().map_err(|_| bad())?)
            }
            None => (s, 1),
        };
        let digits = num.strip_prefix(['-', '+']).unwrap_or(num);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) || den == 0 {
            return Err(bad());
        }
        Rational::new(num.parse().map_err(|_| bad())?, den)
    }
}

fn gen(text: &str) -> GenId {
    GenId::parse(text).expect("built-in generator name")
}

fn word(text: &str) -> Word {
    Word::parse(text).expect("built-in word")
}

/// Incremental construction of a stage on top of a base.
struct Builder {
    label: String,
    generators: Vec<GenId>,
    relators: Vec<Word>,
}

impl Builder {
    fn empty(label: &str) -> Builder {
        Builder { label: label.to_string(), generators: Vec::new(), relators: Vec::new() }
    }

    fn on(base: &Presentation, label: &str) -> Builder {
        Builder {
            label: label.to_string(),
            generators: base.generators().to_vec(),
            relators: base.relators().to_vec(),
        }
    }

    fn gens(&mut self, names: &[&str]) -> &mut Self {
        self.generators.extend(names.iter().map(|n| gen(n)));
        self
    }

    fn fix(&mut self, t: &str, u: &Word) -> &mut Self {
        self.relators.push(fixes(gen(t), u));
        self
    }

    fn fix_all<'a, I: IntoIterator<Item = &'a Word>>(&mut self, t: &str, us: I) -> &mut Self {
        for u in us {
            self.fix(t, u);
        }
        self
    }

    fn send(&mut self, t: &str, u: &Word, v: &Word) -> &mut Self {
        self.relators.push(sends(gen(t), u, v));
        self
    }

    fn commute(&mut self, g: GenId, h: GenId) -> &mut Self {
        self.relators.push(g.word().commutator(&h.word()));
        self
    }

    fn finish(&self) -> Presentation {
        Presentation::new(&self.label, self.generators.clone(), self.relators.clone())
            .expect("stage recipes only use declared generators")
    }
}

/// `u` conjugated by the product of the generators named in `by`.
fn cj(u: &Word, by: &str) -> Word {
    u.conjugate(&word(by))
}

fn ws(texts: &[&str]) -> Vec<Word> {
    texts.iter().map(|t| word(t)).collect()
}

/// The nineteen generators of `dscr`, in canonical order.
fn dscr_letters() -> Vec<Word> {
    ws(&[
        "b", "c", "t[2]", "t'[2]", "t[0]", "t'[0]", "r[1]", "r[2]", "g", "h", "k", "l[0,0]", "l[1,0]", "l[1,1]",
        "s[0]", "s[1]", "s[2]", "a", "r",
    ])
}

/// The letters `a, b, c, z, m, n, kappa` of the final sections.
fn seven_letters() -> Vec<Word> {
    ws(&["a", "b", "c", "z", "m", "n", "kappa"])
}

fn bar_word(w: &Word) -> Word {
    Word::from_runs(w.runs().iter().map(|&(g, e)| (g.barred(), e)))
}

/// `d'' = d_1⁻¹ d_3⁻¹ d_5 d_7 d_11⁻¹ d_15 d_17` with `d_i = d^{e^i}`.
pub fn d_double_prime() -> Word {
    let d = gen("d").word();
    let e = gen("e");
    let factors = [(1, -1), (3, -1), (5, 1), (7, 1), (11, -1), (15, 1), (17, 1)];
    let mut w = Word::identity();
    for (i, s) in factors {
        w.append(&d.conjugate(&e.pow(i)).pow(s));
    }
    w
}

fn build_xi(m: i64) -> Presentation {
    let (b, c) = (word("b"), word("c"));
    let t = GenId::named("t").sub(m);
    let tp = t.primed();
    let c2 = word("c^2");
    let mut p = Builder::empty(&StageId::Xi(m).name());
    p.generators = vec![gen("b"), gen("c"), t, tp];
    p.relators = vec![
        sends(t, &b, &b_i(1 - m)),
        sends(tp, &b, &b_i(-m)),
        sends(t, &c, &c2),
        sends(tp, &c, &c2),
    ];
    p.finish()
}

fn construct(stage: StageId) -> Presentation {
    let label = stage.name();
    let label = label.as_str();
    let (a, b, c) = (word("a"), word("b"), word("c"));
    match stage {
        StageId::Xi(m) => build_xi(m),
        StageId::Theta => {
            let free_a = Presentation::free("a", &[gen("a")]).expect("single generator");
            free_product(&free_a, &build(StageId::Xi(1))).expect("disjoint").relabel(label)
        }
        StageId::Cscr => Builder::on(&build(StageId::Theta), label)
            .gens(&["u[1]", "u[2]"])
            .fix_all("u[1]", &ws(&["c^-1 b c", "t[1]", "t'[1]"]))
            .fix_all("u[2]", &ws(&["a", "b", "t[1]", "t'[1]"]))
            .finish(),
        StageId::Ascr => {
            let mut p = Builder::on(&build(StageId::Cscr), label);
            p.gens(&["d", "e"]);
            for x in [&a, &b, &c] {
                p.fix("d", &cj(x, "u[1]"));
            }
            p.send("d", &cj(&a, "u[2]"), &cj(&a, "b u[2]"))
                .send("d", &cj(&b, "u[2]"), &cj(&b, "u[2]"))
                .send("d", &cj(&c, "u[2]"), &cj(&c, "b u[2]"))
                .send("e", &a, &a)
                .send("e", &b, &cj(&b, "c"))
                .send("e", &c, &c);
            p.finish()
        }
        StageId::KB => Builder::on(&build(StageId::Ascr), label)
            .gens(&["v[1]", "v[2]"])
            .fix_all("v[1]", &ws(&["a", "e^-1 d e"]))
            .fix_all("v[2]", &ws(&["b^-1 a b", "d e^-1 d e"]))
            .finish(),
        StageId::Zscr => {
            let mut p = Builder::empty(label);
            p.gens(&["b", "c", "t[2]", "t'[2]", "t[0]", "t'[0]", "r[1]", "r[2]"]);
            p.send("t[2]", &b, &b_i(-1))
                .send("t'[2]", &b, &b_i(-2))
                .send("t[0]", &b, &b_i(1))
                .send("t'[0]", &b, &b);
            for t in ["t[2]", "t'[2]", "t[0]", "t'[0]"] {
                p.send(t, &c, &word("c^2"));
            }
            p.fix_all("r[1]", &[b_i(2), word("t[2]"), word("t'[2]")])
                .fix_all("r[2]", &[b_i(-1), word("t[0]"), word("t'[0]")]);
            p.finish()
        }
        StageId::Gscr => {
            let mut p = Builder::on(&build(StageId::Zscr), label);
            p.gens(&["g", "h", "k"]);
            let fixed = [cj(&b, "r[1]"), cj(&c, "r[1]"), cj(&b, "r[2]"), cj(&c, "r[2]")];
            for t in ["g", "h", "k"] {
                p.fix_all(t, &fixed);
            }
            p.finish()
        }
        StageId::Lambda0 => build(StageId::Gscr).as_ref().clone().relabel(label),
        StageId::Lambda1 => {
            let mut p = Builder::on(&build(StageId::Gscr), label);
            p.gens(&["l[0,0]"]);
            lambda00(&mut p);
            p.finish()
        }
        StageId::Lambda2 => {
            let mut p = Builder::on(&build(StageId::Gscr), label);
            p.gens(&["l[1,0]", "l[1,1]"]);
            lambda1x(&mut p);
            p.finish()
        }
        StageId::Fscr => {
            let mut p = Builder::on(&build(StageId::Gscr), label);
            p.gens(&["l[0,0]", "l[1,0]", "l[1,1]", "s[0]", "s[1]", "s[2]"]);
            lambda00(&mut p);
            lambda1x(&mut p);
            p.fix("s[0]", &word("g"))
                .fix_all("s[1]", &ws(&["h^-1 g h b^-1 g^-1", "l[0,0]"]))
                .fix_all("s[2]", &ws(&["k^-1 h^-1 k g k^-1 h k c^-1 b^-1 c g^-1", "l[1,0]", "l[1,1]"]));
            p.finish()
        }
        StageId::Dscr => {
            let mut p = Builder::on(&build(StageId::Fscr), label);
            p.gens(&["a", "r"]);
            let letters = dscr_letters();
            for s in ["s[0]", "s[1]", "s[2]"] {
                for x in &letters[..11] {
                    p.fix("a", &cj(x, s));
                }
            }
            p.send("r", &a, &a).send("r", &b, &cj(&b, "c^2")).send("r", &c, &c);
            p.finish()
        }
        StageId::Lscr => {
            let union = amalgamated_union(&build(StageId::Dscr), &build(StageId::KB), &abc())
                .expect("dscr and k_b share exactly a, b, c");
            let mut p = Builder::on(&union, label);
            p.gens(&["p[1]", "p[2]"]);
            for v in ["v[1]", "v[2]"] {
                for x in [&a, &b, &c] {
                    p.fix("p[1]", &cj(x, v));
                }
            }
            p.fix_all("p[2]", &[b.clone(), c.clone()]);
            p.finish()
        }
        StageId::KOmega2B => {
            let mut p = Builder::on(&build(StageId::Lscr), label);
            p.gens(&["p[3]", "p[4]"]);
            let letters = dscr_letters();
            for by in ["p[1]", "p[2]"] {
                for x in &letters {
                    p.fix("p[3]", &cj(x, by));
                }
            }
            p.fix_all("p[4]", &[a.clone(), b.clone(), c.clone()]);
            p.finish()
        }
        StageId::KBar => {
            let kbar = build(StageId::KOmega2B).barred("k_omega2b_bar");
            let f = Presentation::free("F", &abc()).expect("distinct generators");
            direct_product(&kbar, &f).expect("disjoint").relabel(label)
        }
        StageId::M1 => {
            let mut p = Builder::on(&build(StageId::KBar), label);
            p.gens(&["w[1]", "w[2]"]);
            for x in dscr_letters() {
                p.fix("w[1]", &cj(&bar_word(&x), "p_bar[3] p_bar[4]"));
            }
            p.fix_all("w[1]", &[a.clone(), b.clone(), c.clone()])
                .fix_all("w[2]", &ws(&["a_bar a", "b_bar c b c^-1", "c_bar c"]));
            p.finish()
        }
        StageId::M2 => {
            let mut p = Builder::on(&build(StageId::M1), label);
            p.gens(&["w[3]", "w[4]"]);
            p.fix_all("w[3]", &ws(&["a_bar", "b_bar", "c_bar"]));
            for x in six_letters() {
                p.fix("w[4]", &cj(&x, "w[1] w[2]"));
            }
            p.finish()
        }
        StageId::KSigma => {
            let mut p = Builder::on(&build(StageId::M2), label);
            p.gens(&["w[5]", "w[6]"]);
            p.fix_all("w[5]", &[a.clone(), b.clone(), c.clone()]);
            for by in ["w[3]", "w[4]"] {
                for x in six_letters() {
                    p.fix("w[6]", &cj(&x, by));
                }
            }
            p.finish()
        }
        StageId::KC => {
            let union = amalgamated_union(&build(StageId::KOmega2B), &build(StageId::KSigma), &abc())
                .expect("k_omega2b and k_sigma share exactly a, b, c");
            let mut p = Builder::on(&union, label);
            p.gens(&["x[1]", "x[2]"]);
            for x in dscr_letters() {
                p.fix("x[1]", &cj(&x, "p[3] p[4]"));
            }
            for x in six_letters() {
                p.fix("x[2]", &cj(&x, "w[5] w[6]"));
            }
            p.finish()
        }
        StageId::KF => {
            let mut p = Builder::on(&build(StageId::KC), label);
            p.gens(&["y[1]", "y[2]"]);
            for x in [&a, &b, &c] {
                p.fix("y[1]", &cj(x, "x[1] x[2]"));
            }
            let b5_squared = word("b^2").conjugate(&word("c^5"));
            p.fix("y[2]", &a.conjugate(&b5_squared))
                .fix("y[2]", &word("e^-5 d e^5 e^-6 d e^6"));
            p.finish()
        }
        StageId::KT => {
            let mut p = Builder::on(&build(StageId::KF), label);
            p.gens(&["z[1]", "z[2]"]);
            for x in [&a, &b, &c] {
                p.fix("z[1]", &cj(x, "y[1] y[2]"));
            }
            let e = gen("e");
            for i in (0..=18).filter(|&i| i != 5) {
                p.fix("z[1]", &word("d").conjugate(&e.pow(i)));
            }
            let f2 = higman_code(2).expect("k = 2 is a valid code index");
            p.fix("z[2]", &a_f(&f2)).fix("z[2]", &d_double_prime());
            p.finish()
        }
        StageId::Kscr => {
            let mut p = Builder::empty(label);
            p.gens(&["z", "m", "n", "kappa"]);
            kappa_swaps(&mut p);
            p.finish()
        }
        StageId::KQ1 => {
            let kt = build(StageId::KT);
            let mut p = Builder::on(&kt, label);
            p.gens(&["z", "m", "n", "kappa"]);
            kappa_swaps(&mut p);
            for x in ["z", "m", "n", "kappa"] {
                for &g in kt.generators() {
                    p.commute(gen(x), g);
                }
            }
            p.gens(&["q'[1]", "q'[2]"]);
            for x in [&a, &b, &c] {
                p.fix("q'[1]", &cj(x, "z[1] z[2]"));
            }
            p.fix_all("q'[1]", &ws(&["z", "n", "m", "kappa"]))
                .fix_all("q'[2]", &ws(&["a z", "b m", "c kappa"]));
            p.finish()
        }
        StageId::KQ2 => {
            let mut p = Builder::on(&build(StageId::KQ1), label);
            p.gens(&["q'[3]", "q'[4]"]);
            p.fix_all("q'[3]", &[a.clone(), b.clone(), c.clone()]);
            for x in seven_letters() {
                p.fix("q'[4]", &cj(&x, "q'[1] q'[2]"));
            }
            p.finish()
        }
        StageId::KZT => {
            let mut p = Builder::on(&build(StageId::KQ2), label);
            p.gens(&["q'[5]", "q'[6]"]);
            p.fix_all("q'[5]", &ws(&["z", "m", "n", "kappa"]));
            for by in ["q'[3]", "q'[4]"] {
                for x in seven_letters() {
                    p.fix("q'[6]", &cj(&x, by));
                }
            }
            p.finish()
        }
        StageId::PBar => Builder::on(&build(StageId::KZT), label)
            .gens(&["u", "p", "q", "v"])
            .send("z", &word("u"), &word("v"))
            .finish(),
        StageId::RBar => {
            let mut p = Builder::on(&build(StageId::PBar), label);
            p.gens(&["kappa[1]", "kappa[2]"]);
            for (t, conj, tail) in [("kappa[1]", "m", "p"), ("kappa[2]", "n", "q")] {
                p.send(t, &word("z"), &cj(&word("z"), conj));
                for x in ["m", "n", "u", "p", "q"] {
                    p.send(t, &word(x), &word(x));
                }
                p.send(t, &word("v"), &word(&format!("v {tail}")));
            }
            p.finish()
        }
        StageId::KZPlus => {
            let mut p = Builder::on(&build(StageId::RBar), label);
            p.gens(&["e[1]", "e[2]"]);
            for x in seven_letters() {
                p.fix("e[1]", &cj(&x, "q'[5] q'[6]"));
            }
            p.fix_all("e[2]", &ws(&["u", "v"]));
            p.finish()
        }
        StageId::KWT => {
            let mut p = Builder::on(&build(StageId::KZPlus), label);
            p.gens(&["f[1]", "f[2]"]);
            for by in ["e[1]", "e[2]"] {
                for x in seven_letters() {
                    p.fix("f[1]", &cj(&x, by));
                }
            }
            p.fix_all("f[2]", &ws(&["p", "q"]));
            p.finish()
        }
        StageId::QFinal => {
            let kwt = build(StageId::KWT);
            let mut p = Builder::on(&kwt, label);
            p.gens(&["x", "y", "t", "s"]);
            for x in seven_letters() {
                p.fix("t", &cj(&x, "f[1] f[2]"));
            }
            for x in ["x", "y"] {
                for &g in kwt.generators().iter().chain([&gen("t")]) {
                    p.commute(gen(x), g);
                }
            }
            p.send("s", &word("p"), &word("p x"))
                .send("s", &word("q"), &word("q y"))
                .send("s", &cj(&word("p"), "t"), &cj(&word("p"), "t"))
                .send("s", &cj(&word("q"), "t"), &cj(&word("q"), "t"));
            p.finish()
        }
        StageId::TQFinal => build_t_cal_q(),
    }
}

fn abc() -> [GenId; 3] {
    [gen("a"), gen("b"), gen("c")]
}

/// `ā, b̄, c̄, a, b, c`.
fn six_letters() -> Vec<Word> {
    ws(&["a_bar", "b_bar", "c_bar", "a", "b", "c"])
}

fn lambda00(p: &mut Builder) {
    p.send("l[0,0]", &word("b"), &word("b"))
        .send("l[0,0]", &word("g"), &cj(&word("g"), "h"))
        .send("l[0,0]", &word("h"), &word("h"));
}

fn lambda1x(p: &mut Builder) {
    let b1 = b_i(1);
    let (g, h) = (word("g"), word("h"));
    let h1 = cj(&h, "k");
    p.send("l[1,0]", &b1, &b1)
        .send("l[1,0]", &g, &g.conjugate(&h))
        .send("l[1,0]", &h, &h)
        .send("l[1,0]", &h1, &h1);
    p.send("l[1,1]", &b1, &b1)
        .send("l[1,1]", &g, &g.conjugate(&h1))
        .send("l[1,1]", &h, &h.conjugate(&h1))
        .send("l[1,1]", &h1, &h1);
}

fn kappa_swaps(p: &mut Builder) {
    p.send("kappa", &word("z"), &word("z"))
        .send("kappa", &word("m"), &word("n"))
        .send("kappa", &word("n"), &word("m"));
}

fn cache() -> &'static Mutex<HashMap<StageId, Arc<Presentation>>> {
    static CACHE: OnceLock<Mutex<HashMap<StageId, Arc<Presentation>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the memo cache) the presentation of `stage`.
pub fn build(stage: StageId) -> Arc<Presentation> {
    if let Some(p) = cache().lock().expect("stage cache poisoned").get(&stage) {
        return Arc::clone(p);
    }
    // Built outside the lock: recipes recurse into their bases.
    let p = Arc::new(construct(stage));
    let mut table = cache().lock().expect("stage cache poisoned");
    Arc::clone(table.entry(stage).or_insert(p))
}

fn xy() -> (GenId, GenId) {
    (gen("x"), gen("y"))
}

/// The pair `(k, m)` of the embedding: minimal `k ≥ 2` with `den | k!` and
/// `m = num · k! / den`.
pub fn alpha_parameters(r: Rational, trunc_k: i64) -> Result<(i64, i64), PipelineError> {
    let overflow = || PipelineError::Overflow(r.to_string());
    let mut factorial: i128 = 1;
    let mut k = 2;
    loop {
        if k > trunc_k {
            return Err(PipelineError::TruncationExceeded { den: r.den, trunc_k });
        }
        factorial = factorial.checked_mul(k as i128).ok_or_else(overflow)?;
        if factorial % r.den as i128 == 0 {
            let m = (r.num as i128).checked_mul(factorial / r.den as i128).ok_or_else(overflow)?;
            return Ok((k, i64::try_from(m).map_err(|_| overflow())?));
        }
        k += 1;
    }
}

/// `(y^m)^{(x y^k)² x⁻¹}` over `{x, y}`.
pub fn alpha_word(k: i64, m: i64) -> Word {
    let (x, y) = xy();
    let conj = Word::from_runs([(x, 1), (y, k), (x, 1), (y, k), (x, -1)]);
    y.pow(m).conjugate(&conj)
}

/// The embedding word of `r` in the two-generator group: with minimal
/// `k ≥ 2` such that the denominator divides `k!` and `m = num·k!/den`,
/// returns `(y^m)^{(x y^k)² x⁻¹}` reduced.  `trunc_k` bounds the search.
pub fn embed_alpha(r: Rational, trunc_k: i64) -> Result<Word, PipelineError> {
    let (k, m) = alpha_parameters(r, trunc_k)?;
    Ok(alpha_word(k, m))
}

/// The unexpanded form `(y^m)^((x y^k)^2 x^-1)` of [`embed_alpha`].
pub fn embed_alpha_symbolic(r: Rational, trunc_k: i64) -> Result<String, PipelineError> {
    let (k, m) = alpha_parameters(r, trunc_k)?;
    if m == 0 {
        return Ok(String::new());
    }
    let power = if m == 1 { "y".to_string() } else { format!("y^{m}") };
    let yk = if k == 1 { "y".to_string() } else { format!("y^{k}") };
    Ok(format!("({power})^((x {yk})^2 x^-1)"))
}

/// The relator `w_k = (y^k)^{(x y^k)² x⁻¹} · y^{−(x y^{k−1})² x⁻¹}`.
pub fn t_q_relator(k: i64) -> Word {
    let (x, y) = xy();
    let first = Word::from_runs([(x, 1), (y, k), (x, 1), (y, k), (x, -1)]);
    let second = Word::from_runs([(x, 1), (y, k - 1), (x, 1), (y, k - 1), (x, -1)]);
    y.pow(k).conjugate(&first).multiply(&y.pow(-1).conjugate(&second))
}

/// Truncation of the recursive two-generator presentation: relators `w_k`
/// for `k = 2..=max_k`.
pub fn build_t_q(max_k: i64) -> Result<Presentation, PipelineError> {
    if max_k < 2 {
        return Err(PipelineError::BadIndex(max_k));
    }
    let (x, y) = xy();
    let relators = (2..=max_k).map(t_q_relator).collect();
    Ok(Presentation::new(&format!("t_rat(max_k={max_k})"), vec![x, y], relators).expect("words over x, y"))
}

/// `a_k(x, y) = y^{(x y^k)² y⁻¹} · y^{−x}`, the image of the `k`-th
/// generator of `q_final` (`1 ≤ k ≤ 98`).
pub fn gamma_image(k: i64) -> Result<Word, PipelineError> {
    if !(1..=98).contains(&k) {
        return Err(PipelineError::BadIndex(k));
    }
    let (x, y) = xy();
    let conj = Word::from_runs([(x, 1), (y, k), (x, 1), (y, k), (y, -1)]);
    Ok(y.word().conjugate(&conj).multiply(&y.pow(-1).conjugate(&x.word())))
}

/// The substitution sending the `k`-th generator of `q_final` to
/// [`gamma_image`]`(k)`.
pub fn gamma() -> Morphism {
    let q = build(StageId::QFinal);
    let images = q
        .generators()
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, gamma_image(i as i64 + 1).expect("q_final has 98 generators")));
    Morphism::new(q.label(), "t_q_final", images)
}

/// The two-generator group whose relators are the images under
/// [`gamma`] of the relators of `q_final`.
pub fn build_t_cal_q() -> Presentation {
    let q = build(StageId::QFinal);
    let m = gamma();
    let relators = q
        .relators()
        .iter()
        .map(|r| substitute(r, &m).expect("gamma is total on q_final"))
        .collect();
    let (x, y) = xy();
    Presentation::new(&StageId::TQFinal.name(), vec![x, y], relators).expect("words over x, y")
}

/// The embedding word of `r` in `q_final` (the embedding word in the
/// two-generator group read over the generators `x`, `y` of `q_final`).
pub fn embed_phi(r: Rational) -> Result<Word, PipelineError> {
    embed_alpha(r, DEFAULT_TRUNC_K)
}

/// The embedding word of `r` in `t_q_final`.
pub fn embed_psi(r: Rational) -> Result<Word, PipelineError> {
    Ok(substitute(&embed_phi(r)?, &gamma()).expect("gamma is total on x, y"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_round_trip() {
        for s in StageId::ALL {
            assert_eq!(s.name().parse::<StageId>().unwrap(), s);
        }
        assert_eq!("xi(-3)".parse::<StageId>().unwrap(), StageId::Xi(-3));
        assert!("nope".parse::<StageId>().is_err());
        assert!("xi".parse::<StageId>().is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!("98/12".parse::<Rational>().unwrap(), Rational::new(49, 6).unwrap());
        assert_eq!("-4".parse::<Rational>().unwrap(), Rational::new(-4, 1).unwrap());
        assert_eq!("+3/9".parse::<Rational>().unwrap(), Rational::new(1, 3).unwrap());
        assert_eq!(Rational::new(0, 5).unwrap(), Rational::new(0, 1).unwrap());
        for bad in ["", "1/0", "1/-2", "a/2", "1/", "/2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn alpha_examples() {
        let r = Rational::new(98, 12).unwrap();
        assert_eq!(alpha_parameters(r, 10).unwrap(), (3, 49));
        assert_eq!(embed_alpha(r, 10).unwrap().to_string(), "x y^-3 x^-1 y^-3 x^-1 y^49 x y^3 x y^3 x^-1");
        assert_eq!(embed_alpha_symbolic(r, 10).unwrap(), "(y^49)^((x y^3)^2 x^-1)");
        assert!(embed_alpha(Rational::new(0, 1).unwrap(), 10).unwrap().is_identity());
        assert_eq!(alpha_parameters(Rational::new(1, 2).unwrap(), 10).unwrap(), (2, 1));
        assert_eq!(alpha_parameters(Rational::new(5, 1).unwrap(), 10).unwrap(), (2, 10));
        assert_eq!(
            embed_alpha(Rational::new(1, 7).unwrap(), 6),
            Err(PipelineError::TruncationExceeded { den: 7, trunc_k: 6 })
        );
        assert!(matches!(embed_alpha(Rational::new(i64::MAX, 1).unwrap(), 10), Err(PipelineError::Overflow(_))));
    }

    #[test]
    fn t_q_truncation() {
        assert_eq!(build_t_q(2).unwrap().stats(), (2, 1));
        assert_eq!(build_t_q(10).unwrap().stats(), (2, 9));
        assert!(build_t_q(1).is_err());
    }

    #[test]
    fn gamma_bounds() {
        assert!(gamma_image(0).is_err());
        assert!(gamma_image(99).is_err());
        assert!(!gamma_image(98).unwrap().is_identity());
    }

    #[test]
    fn small_stages() {
        assert_eq!(build(StageId::Xi(1)).stats(), (4, 4));
        assert_eq!(build(StageId::Theta).stats(), (5, 4));
        assert_eq!(build(StageId::Cscr).stats(), (7, 11));
        assert_eq!(build(StageId::Kscr).stats(), (4, 3));
        assert_eq!(build(StageId::Lambda1).stats(), (12, 29));
        assert_eq!(build(StageId::Lambda2).stats(), (13, 34));
    }
}
