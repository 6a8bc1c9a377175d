//! Primary and secondary colors and their total order.
//!
//! With `n` primary colors `a_1 < … < a_n`, the secondary colors are the
//! products `a_i a_j` for `i < j`. All `n(n+1)/2` colors sit on one chain:
//!
//! ```text
//! a1a2 < … < a1an < a1 < a2a3 < … < a2an < a2 < … < a(n-1)an < a(n-1) < an
//! ```
//!
//! i.e. colors are grouped in blocks by first index; within block `i` the
//! secondaries `a_i a_j` come in order of `j`, followed by the primary `a_i`.
//! The relative order of two colors therefore never depends on `n`; only the
//! numeric rank of a color inside the chain does.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::part::{alpha, beta, succ_raw, ColoredPart};

/// A primary color `a_i` or a secondary color `a_i a_j` with `i < j`.
///
/// Indices are 1-based. For `n ≤ 26` the presentation layer uses the letters
/// `a..z` (`a = a_1`), so `a_1 a_4` prints as `ad`; the canonical spelling
/// `a1a4` is accepted everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Primary(u8),
    Secondary(u8, u8),
}

impl Color {
    /// Secondary color with indices given in either order.
    pub fn secondary(i: u8, j: u8) -> Result<Color> {
        if i == 0 || j == 0 || i == j {
            return Err(Error::input(format!(
                "secondary color needs two distinct positive indices, got ({i}, {j})"
            )));
        }
        Ok(if i < j {
            Color::Secondary(i, j)
        } else {
            Color::Secondary(j, i)
        })
    }

    pub fn is_primary(self) -> bool {
        matches!(self, Color::Primary(_))
    }

    pub fn is_secondary(self) -> bool {
        matches!(self, Color::Secondary(_, _))
    }

    /// First (smallest) primary index of the color.
    pub fn first_index(self) -> u8 {
        match self {
            Color::Primary(i) => i,
            Color::Secondary(i, _) => i,
        }
    }

    /// Largest primary index used by the color, i.e. the minimal ambient `n`.
    pub fn max_index(self) -> u8 {
        match self {
            Color::Primary(i) => i,
            Color::Secondary(_, j) => j,
        }
    }

    /// True when the color's indices all lie in `1..=n`.
    pub fn valid_for(self, n: u8) -> bool {
        self.first_index() >= 1 && self.max_index() <= n
    }

    /// Chain-position key: block (first index), primaries after the block's
    /// secondaries, secondaries by second index. Comparing keys compares
    /// chain positions without needing the ambient `n`.
    fn order_key(self) -> (u8, u8, u8) {
        match self {
            Color::Primary(i) => (i, 1, 0),
            Color::Secondary(i, j) => (i, 0, j),
        }
    }

    /// Chain order `p ≤ q`.
    pub fn le(self, other: Color) -> bool {
        self.order_key() <= other.order_key()
    }

    /// Strict chain order `p < q`.
    pub fn lt(self, other: Color) -> bool {
        self.order_key() < other.order_key()
    }

    /// The 0/1 indicator `χ(p ≤ q)` used throughout the order relations.
    pub fn chi_le(self, other: Color) -> i64 {
        i64::from(self.le(other))
    }

    /// 0-based position of the color in the chain over `n` primary colors.
    ///
    /// Closed form: block `t` (for `t < i`) contributes `n − t + 1` colors;
    /// within block `i` the secondary `a_i a_j` sits at offset `j − i − 1`
    /// and the primary `a_i` at offset `n − i`.
    pub fn rank(self, n: u8) -> Result<u32> {
        if !self.valid_for(n) {
            return Err(Error::input(format!(
                "color {self} is not valid for n = {n}"
            )));
        }
        let (n, i) = (u32::from(n), u32::from(self.first_index()));
        let block_base: u32 = (1..i).map(|t| n - t + 1).sum();
        Ok(match self {
            Color::Secondary(_, j) => block_base + u32::from(j) - i - 1,
            Color::Primary(_) => block_base + n - i,
        })
    }

    /// The full chain for `n` primary colors, in increasing order.
    ///
    /// Materialized only for tests and display; order queries use
    /// [`Color::le`] and [`Color::rank`].
    pub fn chain(n: u8) -> Vec<Color> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Color::Secondary(i, j));
            }
            out.push(Color::Primary(i));
        }
        out
    }

    /// Canonical spelling: `a3`, `a1a4`.
    pub fn canonical(self) -> String {
        match self {
            Color::Primary(i) => format!("a{i}"),
            Color::Secondary(i, j) => format!("a{i}a{j}"),
        }
    }

    /// Letter spelling (`d`, `ad`) when every index fits in `a..z`,
    /// otherwise the canonical spelling.
    pub fn pretty(self) -> String {
        fn letter(i: u8) -> Option<char> {
            (1..=26).contains(&i).then(|| (b'a' + i - 1) as char)
        }
        match self {
            Color::Primary(i) => letter(i).map(String::from),
            Color::Secondary(i, j) => {
                letter(i).and_then(|a| letter(j).map(|b| format!("{a}{b}")))
            }
        }
        .unwrap_or_else(|| self.canonical())
    }

    /// Parses either spelling: `a1`, `a1a4`, `a`, `ad`.
    pub fn parse(s: &str) -> Result<Color> {
        let bad = || Error::input(format!("cannot parse color {s:?}"));
        if s.is_empty() || !s.is_ascii() {
            return Err(bad());
        }
        let mut indices: Vec<u8> = Vec::new();
        if s.bytes().any(|b| b.is_ascii_digit()) {
            // Canonical: one or two "a<number>" groups.
            let mut rest = s;
            while !rest.is_empty() {
                rest = rest.strip_prefix('a').ok_or_else(bad)?;
                let digits: String =
                    rest.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(bad());
                }
                rest = &rest[digits.len()..];
                indices.push(digits.parse::<u8>().map_err(|_| bad())?);
            }
        } else {
            // Pretty: one or two letters.
            for c in s.chars() {
                if !c.is_ascii_lowercase() {
                    return Err(bad());
                }
                indices.push(c as u8 - b'a' + 1);
            }
        }
        match indices.as_slice() {
            [i] if *i >= 1 => Ok(Color::Primary(*i)),
            [i, j] => Color::secondary(*i, *j),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Color::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Special pairs of secondary colors: `(a_k a_l, a_i a_j)` with
/// `i < j < k < l` or `k < i < j < l`. On these pairs the relation `≫`
/// relaxes `▷` by one.
pub fn special_pair(p: Color, q: Color) -> bool {
    match (p, q) {
        (Color::Secondary(k, l), Color::Secondary(i, j)) => {
            (i < j && j < k && k < l) || (k < i && i < j && j < l)
        }
        _ => false,
    }
}

/// Minimal difference `Δ(p, q) = min{k − l : β(k_p) ≻ α(l_q)}` for secondary
/// colors `p = a_r a_s`, `q = a_x a_y`, by the closed form
/// `χ(r ≤ y) + χ(r ≤ x)·χ(s ≤ y)`.
pub fn delta(p: Color, q: Color) -> Result<i64> {
    match (p, q) {
        (Color::Secondary(r, s), Color::Secondary(x, y)) => {
            Ok(i64::from(r <= y) + i64::from(r <= x) * i64::from(s <= y))
        }
        _ => Err(Error::input(format!(
            "delta is defined on secondary colors, got ({p}, {q})"
        ))),
    }
}

/// Brute-force version of [`delta`]: scans secondary sizes `k, l` and
/// returns the least `k − l` with `β(k_p) ≻ α(l_q)`.
///
/// A search bound of 4 already suffices: halves depend on the size only
/// through its parity and a uniform shift (adding 2 to the size adds 1 to
/// both halves), so scanning two sizes of each parity per side covers every
/// case and larger sizes only repeat the same differences.
pub fn delta_oracle(p: Color, q: Color, search_bound: u32) -> Result<i64> {
    if !(p.is_secondary() && q.is_secondary()) {
        return Err(Error::input(format!(
            "delta_oracle is defined on secondary colors, got ({p}, {q})"
        )));
    }
    let hi = 2 + search_bound;
    let mut best: Option<i64> = None;
    for k in 2..=hi {
        for l in 2..=hi {
            let bk = beta(&ColoredPart::new(k, p)?)?;
            let al = alpha(&ColoredPart::new(l, q)?)?;
            if succ_raw(i64::from(bk.size), bk.color, i64::from(al.size), al.color) {
                let diff = i64::from(k) - i64::from(l);
                best = Some(best.map_or(diff, |b: i64| b.min(diff)));
            }
        }
    }
    best.ok_or_else(|| {
        Error::internal(format!("delta_oracle({p}, {q}): no admissible pair found"))
    })
}
