//! Desk-scale verification oracles.
//!
//! * [`SubgroupAutomaton`]: Stallings foldings for finitely generated
//!   subgroups of free groups — membership, intersections (product
//!   automaton core) and ranks.
//! * [`SplitWord`]: words over the free basis `{a} ∪ {b_i}` of
//!   `⟨a, b_i : i ∈ ℤ⟩ ≤ F(a, b, c)`, with the `d_j`-action
//!   ([`d_action`]) and its orbits.
//! * [`kappa_action`]: the two endomorphisms of `⟨z, m, n, u, p, q, v⟩`
//!   induced by the stable letters `kappa[1]`, `kappa[2]`.
//! * [`xi_witness`]: constructive witnesses that `b_{m+k}` lies in
//!   `⟨b_m, t_m, t'_m⟩` inside the auxiliary group `xi(m)`.
//! * [`collect_conjugates`]: the conjugate-collecting normal form of a word
//!   in `⟨x, y⟩`.
//! * [`check`]: named property suites producing a [`Report`].

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::pipeline::{build, gamma, gamma_image, t_q_relator, StageId};
use crate::seqsets::{bump, enumerate, h_member, higman_code, member, Seq, SetId};
use crate::words::{self, a_f, b_i, seq_of_word, substitute, w_f, GenId, Morphism, Word};

// ---------------------------------------------------------------------------
// Stallings automata

/// A folded, basepointed, labelled graph representing a finitely generated
/// subgroup of a free group.  Edges are stored once, in the positive
/// direction `src --g--> dst`; reading `g⁻¹` traverses an edge backwards.
#[derive(Clone, Debug)]
pub struct SubgroupAutomaton {
    alphabet: Vec<GenId>,
    states: usize,
    base: usize,
    fwd: HashMap<(usize, GenId), usize>,
    bwd: HashMap<(usize, GenId), usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl SubgroupAutomaton {
    /// Folds the bouquet of the given generator words.
    pub fn new(generators: &[Word], ambient: &[GenId]) -> SubgroupAutomaton {
        let mut edges = Vec::new();
        let mut states = 1;
        for w in generators {
            let letters: Vec<(GenId, i64)> = w.letters().collect();
            let mut cur = 0;
            for (i, &(g, s)) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    states += 1;
                    states - 1
                };
                edges.push(if s > 0 { (cur, g, next) } else { (next, g, cur) });
                cur = next;
            }
        }
        Self::fold(edges, states, 0, ambient)
    }

    fn fold(mut edges: Vec<(usize, GenId, usize)>, states: usize, base: usize, ambient: &[GenId]) -> Self {
        let mut uf = UnionFind((0..states).collect());
        loop {
            let mut changed = false;
            let mut fwd: HashMap<(usize, GenId), usize> = HashMap::new();
            let mut bwd: HashMap<(usize, GenId), usize> = HashMap::new();
            for &(s, g, d) in &edges {
                let (s, d) = (uf.find(s), uf.find(d));
                if let Some(&d2) = fwd.get(&(s, g)) {
                    changed |= uf.union(d, d2);
                } else {
                    fwd.insert((s, g), d);
                }
                let d = uf.find(d);
                if let Some(&s2) = bwd.get(&(d, g)) {
                    changed |= uf.union(s, s2);
                } else {
                    bwd.insert((d, g), s);
                }
            }
            if !changed {
                break;
            }
        }
        let mut set: Vec<(usize, GenId, usize)> =
            edges.iter().map(|&(s, g, d)| (uf.find(s), g, uf.find(d))).collect();
        set.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        set.dedup();
        edges = set;
        Self::from_edges(&edges, uf.find(base), ambient)
    }

    /// Compact renumbering restricted to the base component.
    fn from_edges(edges: &[(usize, GenId, usize)], base: usize, ambient: &[GenId]) -> Self {
        let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(s, _, d) in edges {
            adjacency.entry(s).or_default().push(d);
            adjacency.entry(d).or_default().push(s);
        }
        let mut index = HashMap::from([(base, 0usize)]);
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &u in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if !index.contains_key(&u) {
                    index.insert(u, index.len());
                    queue.push_back(u);
                }
            }
        }
        let mut fwd = HashMap::new();
        let mut bwd = HashMap::new();
        for &(s, g, d) in edges {
            if let (Some(&s), Some(&d)) = (index.get(&s), index.get(&d)) {
                fwd.insert((s, g), d);
                bwd.insert((d, g), s);
            }
        }
        SubgroupAutomaton { alphabet: ambient.to_vec(), states: index.len(), base: 0, fwd, bwd }
    }

    /// Number of states.
    pub fn state_count(&self) -> usize {
        self.states
    }

    /// Number of (positively oriented) edges.
    pub fn edge_count(&self) -> usize {
        self.fwd.len()
    }

    /// Rank of the represented subgroup: `|E| − |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.state_count()
    }

    /// Ambient alphabet.
    pub fn alphabet(&self) -> &[GenId] {
        &self.alphabet
    }

    fn step(&self, state: usize, g: GenId, sign: i64) -> Option<usize> {
        if sign > 0 {
            self.fwd.get(&(state, g)).copied()
        } else {
            self.bwd.get(&(state, g)).copied()
        }
    }

    /// Whether `w` belongs to the subgroup.
    pub fn membership(&self, w: &Word) -> bool {
        let mut state = self.base;
        for (g, s) in w.letters() {
            match self.step(state, g, s) {
                Some(next) => state = next,
                None => return false,
            }
        }
        state == self.base
    }

    /// A free basis read off a spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let mut path: HashMap<usize, Word> = HashMap::from([(self.base, Word::identity())]);
        let mut queue = VecDeque::from([self.base]);
        let mut tree = HashSet::new();
        let mut sorted: Vec<(&(usize, GenId), &usize)> = self.fwd.iter().collect();
        sorted.sort_by(|x, y| (x.0 .0, x.0 .1, *x.1).cmp(&(y.0 .0, y.0 .1, *y.1)));
        while let Some(v) = queue.pop_front() {
            for &(&(s, g), &d) in &sorted {
                let (from, to, sign) = if s == v { (s, d, 1) } else if d == v { (d, s, -1) } else { continue };
                if !path.contains_key(&to) {
                    let mut p = path[&from].clone();
                    p.push(g, sign);
                    path.insert(to, p);
                    tree.insert((s, g, d));
                    queue.push_back(to);
                }
            }
        }
        sorted
            .iter()
            .filter(|(&(s, g), &d)| !tree.contains(&(s, g, d)))
            .map(|(&(s, g), &d)| {
                let mut w = path[&s].clone();
                w.push(g, 1);
                w.append(&path[&d].inverse());
                w
            })
            .collect()
    }

    /// The core of the product automaton, representing `H ∩ K`.
    pub fn intersection(&self, other: &SubgroupAutomaton) -> SubgroupAutomaton {
        let mut index = HashMap::from([((self.base, other.base), 0usize)]);
        let mut queue = VecDeque::from([(self.base, other.base)]);
        let mut edges = Vec::new();
        let mut alphabet: Vec<GenId> = self.alphabet.clone();
        alphabet.extend(other.alphabet.iter().filter(|g| !self.alphabet.contains(g)));
        while let Some((p, q)) = queue.pop_front() {
            let here = index[&(p, q)];
            for &g in &alphabet {
                for sign in [1, -1] {
                    if let (Some(p2), Some(q2)) = (self.step(p, g, sign), other.step(q, g, sign)) {
                        let fresh = index.len();
                        let next = *index.entry((p2, q2)).or_insert_with(|| {
                            queue.push_back((p2, q2));
                            fresh
                        });
                        if sign > 0 {
                            edges.push((here, g, next));
                        }
                    }
                }
            }
        }
        edges.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        edges.dedup();
        // Prune hanging trees: repeatedly drop non-base vertices of degree ≤ 1.
        loop {
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for &(s, _, d) in &edges {
                *degree.entry(s).or_default() += 1;
                *degree.entry(d).or_default() += 1;
            }
            let before = edges.len();
            edges.retain(|&(s, _, d)| (s == 0 || degree[&s] > 1) && (d == 0 || degree[&d] > 1));
            if edges.len() == before {
                break;
            }
        }
        Self::from_edges(&edges, 0, &alphabet)
    }
}

/// Folded core automaton of `⟨generators⟩`.
pub fn stallings(generators: &[Word], ambient: &[GenId]) -> SubgroupAutomaton {
    SubgroupAutomaton::new(generators, ambient)
}

// ---------------------------------------------------------------------------
// Split words over the basis {a} ∪ {b_i}

/// A letter of the basis `{a} ∪ {b_i : i ∈ ℤ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    A,
    B(i64),
}

/// A reduced word over `{a} ∪ {b_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SplitWord {
    runs: Vec<(Sym, i64)>,
}

impl SplitWord {
    /// The identity.
    pub fn identity() -> SplitWord {
        SplitWord::default()
    }

    /// `s^e`.
    pub fn power(s: Sym, e: i64) -> SplitWord {
        let mut w = SplitWord::identity();
        w.push(s, e);
        w
    }

    /// Appends `s^e`, reducing.
    pub fn push(&mut self, s: Sym, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == s {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((s, e));
    }

    /// Run list.
    pub fn runs(&self) -> &[(Sym, i64)] {
        &self.runs
    }

    /// Reduced product.
    pub fn multiply(&self, other: &SplitWord) -> SplitWord {
        let mut w = self.clone();
        for &(s, e) in &other.runs {
            w.push(s, e);
        }
        w
    }

    /// Inverse.
    pub fn inverse(&self) -> SplitWord {
        SplitWord { runs: self.runs.iter().rev().map(|&(s, e)| (s, -e)).collect() }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &SplitWord) -> SplitWord {
        g.inverse().multiply(self).multiply(g)
    }

    /// `b_f = ∏ b_i^{f(i)}` in basis form.
    pub fn b_f(f: &Seq) -> SplitWord {
        let mut w = SplitWord::identity();
        for (i, e) in f.entries() {
            w.push(Sym::B(i), e);
        }
        w
    }

    /// `a_f = b_f⁻¹ a b_f` in basis form.
    pub fn a_f(f: &Seq) -> SplitWord {
        SplitWord::power(Sym::A, 1).conjugate(&SplitWord::b_f(f))
    }

    /// Expansion over `{a, b, c}` (`b_i = c^{-i} b c^i`).
    pub fn to_word(&self) -> Word {
        let (a, _, _) = words::abc();
        let mut w = Word::identity();
        for &(s, e) in &self.runs {
            match s {
                Sym::A => w.push(a, e),
                Sym::B(i) => w.append(&b_i(i).pow(e)),
            }
        }
        w
    }

    /// Decomposition of a word over `{a, b, c}` in the basis, if the word
    /// lies in `⟨a, b_i⟩`.
    pub fn from_word(w: &Word) -> Option<SplitWord> {
        let (a, b, c) = words::abc();
        let mut height = 0i64;
        let mut out = SplitWord::identity();
        for &(g, e) in w.runs() {
            if g == c {
                height += e;
            } else if g == b {
                out.push(Sym::B(-height), e);
            } else if g == a && height == 0 {
                out.push(Sym::A, e);
            } else {
                return None;
            }
        }
        (height == 0).then_some(out)
    }

    /// Letterwise substitution, reduced.
    fn map(&self, image: impl Fn(Sym) -> SplitWord) -> SplitWord {
        let mut out = SplitWord::identity();
        for &(s, e) in &self.runs {
            let img = image(s);
            let img = if e < 0 { img.inverse() } else { img };
            for _ in 0..e.unsigned_abs() {
                out = out.multiply(&img);
            }
        }
        out
    }
}

impl fmt::Display for SplitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        for (k, &(s, e)) in self.runs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match s {
                Sym::A => f.write_str("a")?,
                Sym::B(i) => write!(f, "b_{{{i}}}")?,
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SplitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SplitWord({self})")
    }
}

/// The action of `d_j^{sign}`: maximal blocks over `⟨b_i : i > j⟩` are fixed,
/// maximal blocks over `⟨a, b_i : i ≤ j⟩` are conjugated by `b_j^{sign}`.
pub fn d_action(w: &SplitWord, j: i64, sign: i64) -> SplitWord {
    let conj = SplitWord::power(Sym::B(j), sign.signum());
    w.map(|s| match s {
        Sym::B(i) if i > j => SplitWord::power(s, 1),
        _ => SplitWord::power(s, 1).conjugate(&conj),
    })
}

/// Applies the word `∏ d_{j}^{s}` (left to right) to `w`, `n` times (the
/// inverse word for negative `n`).
fn d_word_power(w: &SplitWord, factors: &[(i64, i64)], n: i64) -> SplitWord {
    let mut out = w.clone();
    for _ in 0..n.unsigned_abs() {
        if n > 0 {
            for &(j, s) in factors {
                out = d_action(&out, j, s);
            }
        } else {
            for &(j, s) in factors.iter().rev() {
                out = d_action(&out, j, -s);
            }
        }
    }
    out
}

/// `a^{d_1^n}`.
pub fn d1_orbit(n: i64) -> SplitWord {
    d_word_power(&SplitWord::power(Sym::A, 1), &[(1, 1)], n)
}

/// `(a^b)^{(d_0 d_1)^n}`.
pub fn d0d1_orbit(n: i64) -> SplitWord {
    let ab = SplitWord::a_f(&Seq::from_values(&[1]));
    d_word_power(&ab, &[(0, 1), (1, 1)], n)
}

/// The factors of `d'' = d_1⁻¹ d_3⁻¹ d_5 d_7 d_11⁻¹ d_15 d_17`.
pub const D_DOUBLE_PRIME: [(i64, i64); 7] = [(1, -1), (3, -1), (5, 1), (7, 1), (11, -1), (15, 1), (17, 1)];

/// `a_{f_2}^{d''^n}`.
pub fn dprime_orbit(n: i64) -> SplitWord {
    let start = SplitWord::a_f(&higman_code(2).expect("valid index"));
    d_word_power(&start, &D_DOUBLE_PRIME, n)
}

// ---------------------------------------------------------------------------
// kappa action

/// The endomorphism `η_which^{sign}` of `⟨z, m, n, u, p, q, v⟩`: `η_1` sends
/// `z ↦ z^m`, `v ↦ v·p`; `η_2` sends `z ↦ z^n`, `v ↦ v·q`; all other
/// letters (including letters outside the alphabet) are fixed.  A `which`
/// other than 1 or 2 leaves `w` unchanged.
pub fn kappa_action(w: &Word, which: u8, sign: i64) -> Word {
    kappa_morphism(which, sign, &w.generators())
        .map(|m| substitute(w, &m).expect("morphism is total on the word's generators"))
        .unwrap_or_else(|| w.clone())
}

fn kappa_morphism(which: u8, sign: i64, extra: &[GenId]) -> Option<Morphism> {
    let g = |s: &str| GenId::named(s);
    let (conj, tail) = match which {
        1 => (g("m"), g("p")),
        2 => (g("n"), g("q")),
        _ => return None,
    };
    let s = sign.signum();
    let z = g("z").word().conjugate(&conj.pow(s));
    let v = Word::from_runs([(g("v"), 1), (tail, s)]);
    let images = extra
        .iter()
        .map(|&x| (x, x.word()))
        .chain([(g("z"), z), (g("v"), v)]);
    Some(Morphism::new("kappa", "kappa", images))
}

// ---------------------------------------------------------------------------
// Witnesses for the auxiliary groups xi(m)

/// A word `b_m^{T}` with `T` a positive word in `t[m]`, `t'[m]` that
/// evaluates to `b_{m+k}` in `xi(m)` (binary expansion of `k`).
pub fn xi_witness(m: i64, k: u64) -> Word {
    let t = GenId::named("t").sub(m);
    let tp = t.primed();
    let mut conj = Word::identity();
    if k > 0 {
        let bits = 64 - k.leading_zeros();
        for pos in (0..bits).rev() {
            conj.push(if (k >> pos) & 1 == 1 { t } else { tp }, 1);
        }
    }
    b_i(m).conjugate(&conj)
}

/// Evaluates a word of the form `T⁻¹ u T` (`u` over `{b, c}`, `T` positive in
/// `t[m]`, `t'[m]`) to a word over `{b, c}` through the isomorphisms
/// `t[m]: b ↦ b_{1−m}, c ↦ c²` and `t'[m]: b ↦ b_{−m}, c ↦ c²`.
pub fn xi_evaluate(w: &Word, m: i64) -> Option<Word> {
    let t = GenId::named("t").sub(m);
    let tp = t.primed();
    let letters: Vec<(GenId, i64)> = w.letters().collect();
    let suffix = letters.iter().rev().take_while(|&&(g, s)| (g == t || g == tp) && s > 0).count();
    let prefix = letters.iter().take_while(|&&(g, s)| (g == t || g == tp) && s < 0).count();
    if prefix != suffix || prefix + suffix > letters.len() {
        return None;
    }
    let conj: Vec<GenId> = letters[letters.len() - suffix..].iter().map(|&(g, _)| g).collect();
    let inverse_prefix: Vec<GenId> = letters[..prefix].iter().rev().map(|&(g, _)| g).collect();
    if conj != inverse_prefix {
        return None;
    }
    let mut u = Word::from_runs(letters[prefix..letters.len() - suffix].iter().copied());
    let (_, b, c) = words::abc();
    if u.generators().iter().any(|&g| g != b && g != c) {
        return None;
    }
    for g in conj {
        let image_b = if g == t { b_i(1 - m) } else { b_i(-m) };
        let xi = Morphism::new("xi", "xi", [(b, image_b), (c, c.pow(2))]);
        u = substitute(&u, &xi).expect("u is over b, c");
    }
    Some(u)
}

// ---------------------------------------------------------------------------
// Conjugate collecting

/// Writes `w ∈ ⟨x, y⟩` as `∏ (x^{ε_i})^{y^{n_i}} · y^k`; returns the pairs
/// `(ε_i, n_i)` with `ε_i = ±1`, and `k`.  Returns `None` if `w` uses other
/// generators.
pub fn collect_conjugates(w: &Word, x: GenId, y: GenId) -> Option<(Vec<(i64, i64)>, i64)> {
    let mut height = 0;
    let mut factors = Vec::new();
    for &(g, e) in w.runs() {
        if g == y {
            height += e;
        } else if g == x {
            factors.extend(std::iter::repeat((e.signum(), -height)).take(e.unsigned_abs() as usize));
        } else {
            return None;
        }
    }
    Some((factors, height))
}

/// Multiplies out a collected form.
pub fn uncollect(factors: &[(i64, i64)], k: i64, x: GenId, y: GenId) -> Word {
    let mut w = Word::identity();
    for &(e, n) in factors {
        w.append(&x.pow(e).conjugate(&y.pow(n)));
    }
    w.append(&y.pow(k));
    w
}

// ---------------------------------------------------------------------------
// Reports

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

/// Ordered list of property outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    fn record(&mut self, name: &str, counterexample: Option<String>) {
        self.entries.push(Entry { name: name.to_string(), pass: counterexample.is_none(), counterexample });
    }

    /// Whether every property passed.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

impl fmt::Display for Report {
    /// One line per property: `PASS|FAIL <name> [counterexample]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{} {}", if e.pass { "PASS" } else { "FAIL" }, e.name)?;
            if let Some(c) = &e.counterexample {
                write!(f, " {c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Stages,
    Codes,
    Seqsets,
    Orbits,
    Kappa,
    Xi,
    Substitution,
    Stallings,
    All,
}

impl Suite {
    /// All suites except `All`.
    pub const EACH: [Suite; 8] = [
        Suite::Stages,
        Suite::Codes,
        Suite::Seqsets,
        Suite::Orbits,
        Suite::Kappa,
        Suite::Xi,
        Suite::Substitution,
        Suite::Stallings,
    ];

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Stages => "stages",
            Suite::Codes => "codes",
            Suite::Seqsets => "seqsets",
            Suite::Orbits => "orbits",
            Suite::Kappa => "kappa",
            Suite::Xi => "xi",
            Suite::Substitution => "substitution",
            Suite::Stallings => "stallings",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Enumeration bounds for the sequence-set suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub len: i64,
    pub abs: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { len: 6, abs: 4 }
    }
}

/// Generator and relator counts of the tower, as computed in the
/// construction.
pub const EXPECTED_STATS: [(StageId, usize, usize); 27] = [
    (StageId::Xi(1), 4, 4),
    (StageId::Theta, 5, 4),
    (StageId::Cscr, 7, 11),
    (StageId::Ascr, 9, 20),
    (StageId::KB, 11, 24),
    (StageId::Zscr, 8, 14),
    (StageId::Gscr, 11, 26),
    (StageId::Fscr, 17, 43),
    (StageId::Dscr, 19, 79),
    (StageId::Lscr, 29, 111),
    (StageId::KOmega2B, 31, 152),
    (StageId::KBar, 34, 245),
    (StageId::M1, 36, 270),
    (StageId::M2, 38, 279),
    (StageId::KSigma, 40, 294),
    (StageId::KC, 70, 471),
    (StageId::KF, 72, 476),
    (StageId::KT, 74, 499),
    (StageId::Kscr, 4, 3),
    (StageId::KQ1, 80, 808),
    (StageId::KQ2, 82, 818),
    (StageId::KZT, 84, 836),
    (StageId::RBar, 90, 865),
    (StageId::KZPlus, 92, 874),
    (StageId::KWT, 94, 890),
    (StageId::QFinal, 98, 1091),
    (StageId::TQFinal, 2, 1091),
];

fn first_failure<T, I: IntoIterator<Item = T>>(items: I, ok: impl Fn(&T) -> bool, show: impl Fn(&T) -> String) -> Option<String> {
    items.into_iter().find(|x| !ok(x)).map(|x| show(&x))
}

/// Runs a suite.
pub fn check(suite: Suite, bounds: Bounds) -> Report {
    let mut report = Report::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        run_suite(s, bounds, &mut report);
    }
    report
}

fn run_suite(suite: Suite, bounds: Bounds, report: &mut Report) {
    let x = GenId::named("x");
    let y = GenId::named("y");
    match suite {
        Suite::Stages => {
            report.record(
                "stage-stats",
                {
                    let mismatches: Vec<String> = EXPECTED_STATS
                        .iter()
                        .filter(|&&(s, g, r)| build(s).stats() != (g, r))
                        .map(|&(s, g, r)| format!("{s}: got {:?}, expected ({g}, {r})", build(s).stats()))
                        .collect();
                    (!mismatches.is_empty()).then(|| mismatches.join("; "))
                },
            );
            report.record(
                "stage-monotonicity",
                first_failure(
                    StageId::ALL.into_iter().flat_map(|s| s.bases().into_iter().map(move |b| (s, b))),
                    |&(s, b)| {
                        s == StageId::TQFinal || {
                            let p = build(s);
                            // The barred copy contains the decorated generators of its base.
                            let decorate = s == StageId::KBar;
                            build(b).generators().iter().all(|&g| p.contains(if decorate { g.barred() } else { g }))
                        }
                    },
                    |(s, b)| format!("{s} does not contain {b}"),
                ),
            );
            report.record(
                "export-round-trip",
                first_failure(
                    StageId::ALL,
                    |&s| crate::presentations::parse(&build(s).export()).as_ref() == Ok(build(s).as_ref()),
                    |s| s.to_string(),
                ),
            );
        }
        Suite::Codes => {
            report.record(
                "code-of-relator",
                first_failure(
                    2..=40,
                    |&k| seq_of_word(&t_q_relator(k), x, y) == Ok(higman_code(k).expect("k >= 2")),
                    |k| format!("k={k}"),
                ),
            );
            report.record(
                "relator-of-code",
                first_failure(
                    2..=40,
                    |&k| w_f(&higman_code(k).expect("k >= 2"), x, y) == t_q_relator(k),
                    |k| format!("k={k}"),
                ),
            );
            let images: Vec<Word> = (1..=98).map(|k| gamma_image(k).expect("in range")).collect();
            let distinct: HashSet<&Word> = images.iter().collect();
            report.record(
                "gamma-images-distinct",
                (distinct.len() != images.len()).then(|| format!("{} distinct of 98", distinct.len())),
            );
        }
        Suite::Seqsets => {
            report.record(
                "C-nonnegative",
                first_failure(
                    enumerate(SetId::C, bounds.len, bounds.abs),
                    |f| f.coeffs().iter().all(|&c| c >= 0),
                    |f| f.to_string(),
                ),
            );
            report.record(
                "T-equals-F-cap-H",
                first_failure(
                    -10..=10,
                    |&n| {
                        let h = h_member(n);
                        let in_t = member(SetId::T, &h);
                        in_t == (n >= 0) && (!in_t || Ok(h.clone()) == higman_code(2 + n))
                    },
                    |n| format!("n={n}"),
                ),
            );
            let t = enumerate(SetId::T, 19, 3);
            let mut expected = vec![higman_code(2).expect("valid"), higman_code(3).expect("valid")];
            expected.sort();
            report.record("T-small-members", (t != expected).then(|| format!("{t:?}")));
        }
        Suite::Orbits => {
            let f = Seq::from_values(&[2, 5, 3]);
            report.record(
                "d-action-example",
                first_failure(
                    [(1, Seq::from_values(&[2, 6, 3])), (2, Seq::from_values(&[2, 5, 4]))],
                    |(j, g)| d_action(&SplitWord::a_f(&f), *j, 1) == SplitWord::a_f(g),
                    |(j, _)| format!("j={j}"),
                ),
            );
            report.record(
                "d1-orbit",
                first_failure(-8..=8, |&n| d1_orbit(n) == SplitWord::a_f(&Seq::from_values(&[0, n])), |n| format!("n={n}")),
            );
            report.record(
                "d0d1-orbit",
                first_failure(
                    -8..=8,
                    |&n| d0d1_orbit(n) == SplitWord::a_f(&Seq::from_values(&[n + 1, n])),
                    |n| format!("n={n}"),
                ),
            );
            report.record(
                "dprime-orbit",
                first_failure(-6..=6, |&n| dprime_orbit(n) == SplitWord::a_f(&h_member(n)), |n| format!("n={n}")),
            );
            report.record(
                "d-action-bumps",
                first_failure(
                    (0..=18).flat_map(|j| [(j, 1), (j, -1)]),
                    |&(j, s)| {
                        let f = higman_code(4).expect("valid");
                        d_action(&SplitWord::a_f(&f), j, s) == SplitWord::a_f(&bump(&f, j, s))
                    },
                    |(j, s)| format!("j={j} sign={s}"),
                ),
            );
        }
        Suite::Kappa => {
            let (lhs_u, rhs_u) = kappa_example_u();
            report.record("kappa-conjugate", (lhs_u != rhs_u).then(|| format!("got {lhs_u}")));
            let (lhs_v, rhs_v) = kappa_example_v();
            report.record("kappa-tail", (lhs_v != rhs_v).then(|| format!("got {lhs_v}")));
        }
        Suite::Xi => {
            report.record(
                "xi-witnesses",
                first_failure(
                    (-3..=3).flat_map(|m| (0..=20u64).map(move |k| (m, k))),
                    |&(m, k)| xi_evaluate(&xi_witness(m, k), m) == Some(b_i(m + k as i64)),
                    |(m, k)| format!("m={m} k={k}"),
                ),
            );
        }
        Suite::Substitution => {
            let q = build(StageId::QFinal);
            let tq = build(StageId::TQFinal);
            let g = gamma();
            report.record(
                "t_q_final-relators",
                first_failure(
                    0..q.relators().len(),
                    |&i| substitute(&q.relators()[i], &g).as_ref() == Ok(&tq.relators()[i]),
                    |i| format!("relator {}", i + 1),
                ),
            );
            report.record(
                "t_q_final-nonempty",
                first_failure(0..tq.relators().len(), |&i| !tq.relators()[i].is_identity(), |i| format!("relator {}", i + 1)),
            );
            let a = |k| gamma_image(k).expect("in range");
            let r1 = a(1).conjugate(&a(3)).multiply(&a(1).inverse().conjugate(&a(2).inverse()));
            report.record("t_q_final-first-relator", (tq.relators()[0] != r1).then(|| tq.relators()[0].to_string()));
        }
        Suite::Stallings => {
            report.record(
                "free-product-basis",
                first_failure(1..=8, |&n| truncated_pair_intersection_rank(n) == 0, |n| format!("N={n}")),
            );
            let (a, b, c) = words::abc();
            let whole = stallings(&[b.word(), c.word()], &[b, c]);
            let upper = stallings(&(1..=10).map(b_i).collect::<Vec<_>>(), &[b, c]);
            let b_set: Vec<Word> = enumerate(SetId::B, 1, 3).iter().map(a_f).collect();
            let orbit = stallings(&b_set, &[a, b, c]);
            let checks = [
                ("whole", whole.membership(&b_i(-1)), true),
                ("upper", upper.membership(&b_i(0)), false),
                ("B-orbit", orbit.membership(&a_f(&Seq::from_values(&[0, 2]))), true),
            ];
            report.record(
                "stallings-examples",
                first_failure(checks, |(_, got, want)| got == want, |(name, _, _)| name.to_string()),
            );
        }
        Suite::All => unreachable!("expanded by check"),
    }
}

/// Rank of `⟨b_1..b_N⟩ ∩ ⟨a, b_0, b_{−1}..b_{−N}⟩` in `F(a, b, c)`.
pub fn truncated_pair_intersection_rank(n: i64) -> usize {
    let (a, b, c) = words::abc();
    let ambient = [a, b, c];
    let upper: Vec<Word> = (1..=n).map(b_i).collect();
    let mut lower: Vec<Word> = vec![a.word()];
    lower.extend((-n..=0).rev().map(b_i));
    stallings(&upper, &ambient).intersection(&stallings(&lower, &ambient)).rank()
}

/// The word `κ₂⁷ κ₁⁴ κ₂⁵ κ₁³` as a list of `(which, count)`.
pub const KAPPA_EXAMPLE: [(u8, u32); 4] = [(2, 7), (1, 4), (2, 5), (1, 3)];

fn apply_kappa_word(w: &Word) -> Word {
    let mut out = w.clone();
    for (which, count) in KAPPA_EXAMPLE {
        for _ in 0..count {
            out = kappa_action(&out, which, 1);
        }
    }
    out
}

/// `((u^z)^{κ₂⁷κ₁⁴κ₂⁵κ₁³}, u^{z^{m³n⁵m⁴n⁷}})`.
pub fn kappa_example_u() -> (Word, Word) {
    let g = GenId::named;
    let uz = g("u").word().conjugate(&g("z").word());
    let tail = w_f(&Seq::from_values(&[3, 5, 4, 7]), g("m"), g("n"));
    let expected = g("u").word().conjugate(&g("z").word().conjugate(&tail));
    (apply_kappa_word(&uz), expected)
}

/// `(v^{κ₂⁷κ₁⁴κ₂⁵κ₁³}, v·p³q⁵p⁴q⁷)`.
pub fn kappa_example_v() -> (Word, Word) {
    let g = GenId::named;
    let expected = g("v").word().multiply(&w_f(&Seq::from_values(&[3, 5, 4, 7]), g("p"), g("q")));
    (apply_kappa_word(&g("v").word()), expected)
}

/// Map from stage to `(generators, relators)` of every stage in
/// [`StageId::ALL`].
pub fn stage_table() -> BTreeMap<String, (usize, usize)> {
    StageId::ALL.iter().map(|&s| (s.name(), build(s).stats())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_word_round_trip() {
        let f = Seq::from_values(&[2, 5, 3]);
        let w = SplitWord::a_f(&f);
        assert_eq!(w.to_word(), a_f(&f));
        assert_eq!(SplitWord::from_word(&a_f(&f)), Some(w));
        assert_eq!(SplitWord::from_word(&Word::parse("c a c^-1").unwrap()), None);
        assert_eq!(SplitWord::from_word(&Word::parse("c").unwrap()), None);
    }

    #[test]
    fn d_action_inverse() {
        let w = SplitWord::a_f(&Seq::from_values(&[2, 5, 3]));
        for j in -2..5 {
            assert_eq!(d_action(&d_action(&w, j, 1), j, -1), w);
        }
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(d1_orbit(3), SplitWord::a_f(&Seq::from_values(&[0, 3])));
        assert_eq!(d0d1_orbit(2), SplitWord::a_f(&Seq::from_values(&[3, 2])));
        assert_eq!(d1_orbit(0), SplitWord::power(Sym::A, 1));
        assert_eq!(dprime_orbit(1), SplitWord::a_f(&higman_code(3).unwrap()));
        assert_eq!(dprime_orbit(0), SplitWord::a_f(&higman_code(2).unwrap()));
        assert!(!member(SetId::T, &h_member(-1)));
        assert_eq!(dprime_orbit(-1), SplitWord::a_f(&h_member(-1)));
    }

    #[test]
    fn kappa_examples() {
        let (l, r) = kappa_example_u();
        assert_eq!(l, r);
        let (l, r) = kappa_example_v();
        assert_eq!(l, r);
        let z = GenId::named("z").word();
        assert_eq!(kappa_action(&kappa_action(&z, 1, 1), 1, -1), z);
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_witness(2, 0), b_i(2));
        assert_eq!(xi_evaluate(&xi_witness(2, 1), 2), Some(b_i(3)));
        assert_eq!(xi_evaluate(&xi_witness(1, 3), 1), Some(b_i(4)));
        assert_eq!(xi_evaluate(&Word::parse("t[1] b").unwrap(), 1), None);
    }

    #[test]
    fn stallings_examples() {
        let (a, b, c) = words::abc();
        let whole = stallings(&[b.word(), c.word()], &[b, c]);
        assert!(whole.membership(&b_i(-1)));
        assert_eq!(whole.rank(), 2);
        let upper = stallings(&(1..=10).map(b_i).collect::<Vec<_>>(), &[b, c]);
        assert!(!upper.membership(&b_i(0)));
        assert!(upper.membership(&b_i(7).multiply(&b_i(3))));
        assert_eq!(upper.rank(), 10);
        let orbit = stallings(&enumerate(SetId::B, 1, 3).iter().map(a_f).collect::<Vec<_>>(), &[a, b, c]);
        assert!(orbit.membership(&a_f(&Seq::from_values(&[0, 2]))));
        for n in 1..=8 {
            assert_eq!(truncated_pair_intersection_rank(n), 0);
        }
        let lo = stallings(&(0..=4).map(b_i).collect::<Vec<_>>(), &[b, c]);
        let meet = upper.intersection(&lo);
        assert_eq!(meet.rank(), 4);
        for w in meet.basis() {
            assert!(upper.membership(&w) && lo.membership(&w));
        }
    }

    #[test]
    fn collecting() {
        let x = GenId::named("x");
        let y = GenId::named("y");
        let w = Word::parse("y^2 x y^-5 x^-2 y").unwrap();
        let (factors, k) = collect_conjugates(&w, x, y).unwrap();
        assert_eq!(k, -2);
        assert_eq!(uncollect(&factors, k, x, y), w);
    }
}
