//! Finite-support integer sequences and the concrete sequence sets of the
//! construction.
//!
//! A [`Seq`] is a function `ℤ → ℤ` with finite support, stored as a window
//! `offset:[c0, c1, …]` whose first and last coefficients are nonzero.
//!
//! The sets ([`SetId`]) are given by their concrete descriptions:
//!
//! | set              | members                                                             |
//! |------------------|---------------------------------------------------------------------|
//! | `B`              | `(0, n)` and `(n+1, n)` on positions 0, 1                           |
//! | `omega2B`        | support in `[0, ∞)`, every pair `(f(2i), f(2i+1))` lies in `B`      |
//! | `sigma_omega2B`  | `f` with `shift(f, +1)` in `omega2B`                                |
//! | `C`              | `omega2B ∩ sigma_omega2B`                                           |
//! | `D`              | `(0,0,0,0,0, n−2, n)`                                               |
//! | `F`              | support in `[0, 18]` and `f(5) ≥ 2`                                 |
//! | `H`              | the code template `h(n) = higman_code(2 + n)` extended to all `n ∈ ℤ` |
//! | `T`              | `F ∩ H`                                                             |

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised by sequence operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    /// Index outside the admissible range.
    #[error("index {0} out of range (need k >= 2)")]
    BadIndex(i64),
    /// Malformed `offset:[c0,...]` text.
    #[error("cannot parse sequence `{0}`")]
    Parse(String),
    /// Unknown set name.
    #[error("unknown sequence set `{0}`")]
    UnknownSet(String),
}

/// Finite-support function `ℤ → ℤ`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Seq {
    offset: i64,
    coeffs: Vec<i64>,
}

impl Seq {
    /// The sequence with `f(offset + i) = coeffs[i]`, canonicalized.
    pub fn new(offset: i64, mut coeffs: Vec<i64>) -> Seq {
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == coeffs.len() {
            return Seq::zero();
        }
        coeffs.drain(..lead);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Seq { offset: offset + lead as i64, coeffs }
    }

    /// Sequence with the given values at positions `0, 1, 2, …`.
    pub fn from_values(values: &[i64]) -> Seq {
        Seq::new(0, values.to_vec())
    }

    /// The zero function.
    pub fn zero() -> Seq {
        Seq { offset: 0, coeffs: Vec::new() }
    }

    /// Whether this is the zero function.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least support index (0 for the zero function).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Coefficients from the least to the greatest support index.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `(min, max)` of the support, `None` for zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.coeffs.len() as i64 - 1))
        }
    }

    /// `f(i)`.
    pub fn eval(&self, i: i64) -> i64 {
        let k = i - self.offset;
        if k < 0 {
            0
        } else {
            self.coeffs.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// Nonzero entries `(i, f(i))` in increasing `i`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.offset + k as i64, c))
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Values on the inclusive window `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).map(|i| self.eval(i)).collect()
    }
}

/// `f` with coordinate `j` changed by `sign` (`f_j^+` for `sign = +1`).
pub fn bump(f: &Seq, j: i64, sign: i64) -> Seq {
    let (lo, hi) = match f.support() {
        Some((lo, hi)) => (lo.min(j), hi.max(j)),
        None => (j, j),
    };
    let mut values = f.window(lo, hi);
    values[(j - lo) as usize] += sign;
    Seq::new(lo, values)
}

/// Index shift: `shift(f, k)(i) = f(i − k)`, so `shift(f, −1)(i) = f(i + 1)`
/// moves the sequence one coordinate to the left.
///
/// Index law: `shift(bump(f, j, s), k) = bump(shift(f, k), j + k, s)`.
pub fn shift(f: &Seq, k: i64) -> Seq {
    if f.is_zero() {
        return Seq::zero();
    }
    Seq { offset: f.offset + k, coeffs: f.coeffs.clone() }
}

/// The 19-entry code of a positive-integer index `k` (any `k ∈ ℤ`; the
/// code proper is the case `k ≥ 2`, see [`higman_code`]).
pub fn code_template(k: i64) -> Seq {
    Seq::from_values(&[
        1, -k, -1, -k, -1, k, 1, k, 1, 1, -1, 1 - k, -1, -1, 1, k - 1, 1, k - 1, -1,
    ])
}

/// The code `f_k` of the relator `w_k`, for `k ≥ 2`.
pub fn higman_code(k: i64) -> Result<Seq, SeqError> {
    if k < 2 {
        return Err(SeqError::BadIndex(k));
    }
    Ok(code_template(k))
}

/// The member of the set `H` with parameter `n` (equal to `f_{2+n}`).
pub fn h_member(n: i64) -> Seq {
    code_template(2 + n)
}

impl Ord for Seq {
    /// Lexicographic order of the value sequences read from the left.
    fn cmp(&self, other: &Self) -> Ordering {
        let (lo, hi) = match (self.support(), other.support()) {
            (None, None) => return Ordering::Equal,
            (Some(s), None) | (None, Some(s)) => s,
            (Some((a, b)), Some((c, d))) => (a.min(c), b.max(d)),
        };
        (lo..=hi)
            .map(|i| self.eval(i).cmp(&other.eval(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Seq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.offset)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq({self})")
    }
}

impl FromStr for Seq {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SeqError::Parse(s.to_string());
        let (offset, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let offset: i64 = offset.trim().parse().map_err(|_| err())?;
        let inner = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
        let coeffs = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        let seq = Seq::new(offset, coeffs.clone());
        // Only canonical text is accepted, so that parse ∘ render is the identity.
        if seq.coeffs != coeffs || (seq.is_zero() && offset != 0) {
            return Err(err());
        }
        Ok(seq)
    }
}

/// The named sequence sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetId {
    B,
    Omega2B,
    SigmaOmega2B,
    C,
    D,
    F,
    H,
    T,
}

impl SetId {
    /// All sets, in documentation order.
    pub const ALL: [SetId; 8] = [
        SetId::B,
        SetId::Omega2B,
        SetId::SigmaOmega2B,
        SetId::C,
        SetId::D,
        SetId::F,
        SetId::H,
        SetId::T,
    ];

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            SetId::B => "B",
            SetId::Omega2B => "omega2B",
            SetId::SigmaOmega2B => "sigma_omega2B",
            SetId::C => "C",
            SetId::D => "D",
            SetId::F => "F",
            SetId::H => "H",
            SetId::T => "T",
        }
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetId {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SeqError::UnknownSet(s.to_string()))
    }
}

fn b_pair(x: i64, y: i64) -> bool {
    x == 0 || x == y + 1
}

fn support_within(f: &Seq, lo: i64, hi: i64) -> bool {
    f.support().map_or(true, |(a, b)| lo <= a && b <= hi)
}

/// Exact membership of `f` in the set `set`.
pub fn member(set: SetId, f: &Seq) -> bool {
    match set {
        SetId::B => support_within(f, 0, 1) && b_pair(f.eval(0), f.eval(1)),
        SetId::Omega2B => match f.support() {
            None => true,
            Some((lo, hi)) => lo >= 0 && (0..=hi / 2).all(|i| b_pair(f.eval(2 * i), f.eval(2 * i + 1))),
        },
        SetId::SigmaOmega2B => member(SetId::Omega2B, &shift(f, 1)),
        SetId::C => member(SetId::Omega2B, f) && member(SetId::SigmaOmega2B, f),
        SetId::D => support_within(f, 5, 6) && f.eval(5) == f.eval(6) - 2,
        SetId::F => support_within(f, 0, 18) && f.eval(5) >= 2,
        SetId::H => *f == h_member(f.eval(5) - 2),
        SetId::T => member(SetId::F, f) && member(SetId::H, f),
    }
}

/// Members of `omega2B` with support in `[lo, hi]` (`lo ≥ 0`) and entries
/// bounded by `abs` in absolute value.
fn omega2b_window(lo: i64, hi: i64, abs: i64) -> Vec<Seq> {
    let mut pairs = Vec::new();
    for n in -abs..=abs {
        pairs.push((0, n));
        if (n + 1).abs() <= abs {
            pairs.push((n + 1, n));
        }
    }
    pairs.sort();
    pairs.dedup();
    let allowed = |i: i64, v: i64| v == 0 || (lo <= i && i <= hi);
    let mut out = Vec::new();
    let mut values = Vec::new();
    fn rec(
        i: i64,
        hi: i64,
        pairs: &[(i64, i64)],
        allowed: &dyn Fn(i64, i64) -> bool,
        values: &mut Vec<i64>,
        out: &mut Vec<Seq>,
    ) {
        if 2 * i > hi {
            out.push(Seq::from_values(values));
            return;
        }
        for &(x, y) in pairs {
            if allowed(2 * i, x) && allowed(2 * i + 1, y) {
                values.push(x);
                values.push(y);
                rec(i + 1, hi, pairs, allowed, values, out);
                values.truncate(values.len() - 2);
            }
        }
    }
    if hi >= 0 {
        rec(0, hi, &pairs, &allowed, &mut values, &mut out);
    } else {
        out.push(Seq::zero());
    }
    out
}

/// All members of `set` with support in `[−bound_len, bound_len]` and
/// `|f(i)| ≤ bound_abs`, deduplicated and sorted lexicographically.
///
/// The enumeration is generative (templates and pair-by-pair search), not a
/// filter over the full box, except for `F`, whose size is exponential in
/// the window width.
pub fn enumerate(set: SetId, bound_len: i64, bound_abs: i64) -> Vec<Seq> {
    let (len, abs) = (bound_len.max(0), bound_abs.max(0));
    let fits = |f: &Seq| support_within(f, -len, len) && f.max_abs() <= abs;
    let mut out: Vec<Seq> = match set {
        SetId::B => (-abs - 1..=abs)
            .flat_map(|n| [Seq::from_values(&[0, n]), Seq::from_values(&[n + 1, n])])
            .filter(|f| member(SetId::B, f))
            .collect(),
        SetId::Omega2B => omega2b_window(0, len, abs),
        SetId::SigmaOmega2B => omega2b_window((1 - len).max(0), len + 1, abs)
            .iter()
            .map(|g| shift(g, -1))
            .collect(),
        SetId::C => omega2b_window(0, len, abs)
            .into_iter()
            .filter(|f| member(SetId::SigmaOmega2B, f))
            .collect(),
        SetId::D => (-abs..=abs + 2).map(|n| Seq::new(5, vec![n - 2, n])).collect(),
        SetId::F => {
            let hi = len.min(18);
            if hi < 5 {
                Vec::new()
            } else {
                let mut out = Vec::new();
                let width = (hi + 1) as usize;
                let mut values = vec![-abs; width];
                values[5] = 2;
                loop {
                    if values[5] <= abs {
                        out.push(Seq::from_values(&values));
                    }
                    // odometer increment, position 5 ranging over [2, abs]
                    let mut pos = 0;
                    loop {
                        if pos == width {
                            return finish(out, &fits);
                        }
                        let floor = if pos == 5 { 2 } else { -abs };
                        if values[pos] < abs {
                            values[pos] += 1;
                            break;
                        }
                        values[pos] = floor;
                        pos += 1;
                    }
                }
            }
        }
        SetId::H => (-abs - 2..=abs - 2).map(h_member).collect(),
        SetId::T => (0..=abs - 2).map(h_member).collect(),
    };
    out.retain(|f| member(set, f));
    finish(out, &fits)
}

fn finish(mut out: Vec<Seq>, fits: &dyn Fn(&Seq) -> bool) -> Vec<Seq> {
    out.retain(|f| fits(f));
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(values: &[i64]) -> Seq {
        Seq::from_values(values)
    }

    #[test]
    fn canonical_form_and_text() {
        let f = Seq::new(-2, vec![0, 0, 3, 0, 1, 0]);
        assert_eq!(f.offset(), 0);
        assert_eq!(f.coeffs(), &[3, 0, 1]);
        assert_eq!(f.to_string(), "0:[3,0,1]");
        assert_eq!("0:[3,0,1]".parse::<Seq>().unwrap(), f);
        assert_eq!(Seq::zero().to_string(), "0:[]");
        assert_eq!("0:[]".parse::<Seq>().unwrap(), Seq::zero());
        assert!("1:[0,2]".parse::<Seq>().is_err());
        assert!("x".parse::<Seq>().is_err());
    }

    #[test]
    fn bump_examples() {
        let f = s(&[0, 5, 9, 8]);
        assert_eq!(bump(&f, 1, 1), s(&[0, 6, 9, 8]));
        assert_eq!(bump(&f, 3, 1), s(&[0, 5, 9, 9]));
        assert_eq!(bump(&bump(&Seq::zero(), 0, 1), 0, -1), Seq::zero());
        assert_eq!(bump(&f, -2, -1), Seq::new(-2, vec![-1, 0, 0, 5, 9, 8]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&s(&[0, 5, 9, 8]), -1), s(&[5, 9, 8]));
        let g = shift(&s(&[3, 2, 9, 8]), -1);
        assert_eq!(g.window(-1, 2), vec![3, 2, 9, 8]);
        assert_eq!(g.support(), Some((-1, 2)));
    }

    #[test]
    fn codes() {
        assert_eq!(
            higman_code(2).unwrap(),
            s(&[1, -2, -1, -2, -1, 2, 1, 2, 1, 1, -1, -1, -1, -1, 1, 1, 1, 1, -1])
        );
        assert_eq!(
            higman_code(3).unwrap(),
            s(&[1, -3, -1, -3, -1, 3, 1, 3, 1, 1, -1, -2, -1, -1, 1, 2, 1, 2, -1])
        );
        assert_eq!(higman_code(1), Err(SeqError::BadIndex(1)));
        for k in 2..50 {
            assert_eq!(higman_code(k).unwrap().eval(5), k);
        }
    }

    #[test]
    fn membership_examples() {
        assert!(member(SetId::C, &s(&[5, 4, 3, 2, 1])));
        assert!(member(SetId::D, &s(&[0, 0, 0, 0, 0, 6, 8])));
        assert!(!member(SetId::D, &Seq::zero()));
        for k in 2..=20 {
            assert!(member(SetId::T, &higman_code(k).unwrap()));
        }
        assert!(member(SetId::H, &h_member(-1)));
        assert!(!member(SetId::T, &h_member(-1)));
        assert!(member(SetId::B, &s(&[0, -7])));
        assert!(member(SetId::B, &s(&[-6, -7])));
        assert!(!member(SetId::B, &s(&[2, 2])));
        assert!(!member(SetId::Omega2B, &Seq::new(-2, vec![1, 0])));
    }

    #[test]
    fn enumeration_examples() {
        let b = enumerate(SetId::B, 1, 2);
        let expected: Vec<Seq> = {
            let mut v = vec![
                s(&[0, -2]),
                s(&[0, -1]),
                s(&[0, 0]),
                s(&[0, 1]),
                s(&[0, 2]),
                s(&[-1, -2]),
                s(&[1, 0]),
                s(&[2, 1]),
            ];
            v.sort();
            v
        };
        assert_eq!(b, expected);
        assert_eq!(
            enumerate(SetId::T, 19, 3),
            vec![higman_code(3).unwrap(), higman_code(2).unwrap()]
        );
        assert!(enumerate(SetId::D, 3, 5).is_empty());
        assert_eq!(enumerate(SetId::D, 6, 2), vec![s(&[0, 0, 0, 0, 0, -2, 0]), s(&[0, 0, 0, 0, 0, -1, 1]), s(&[0, 0, 0, 0, 0, 0, 2])]);
    }
}
