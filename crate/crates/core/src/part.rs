//! Colored parts and the order relations `≻`, `▷`, `≫`.
//!
//! A part is a positive size with a color; secondary-colored parts have size
//! at least 2 so that they can split into two halves. The lexicographic
//! order compares sizes with a color tiebreak:
//!
//! ```text
//! k_p ≻ l_q   ⟺   k − l ≥ χ(p ≤ q)
//! ```
//!
//! `▷` requires `x ⪰ y + 1` (strictly `≻` when both colors are secondary),
//! and `≫` is `▷` relaxed to `x ≻ y` on special color pairs. Every
//! secondary part is the sum of its `≻`-consecutive *upper* and *lower*
//! halves `α`/`β`, and conversely [`merge`] rebuilds the unique secondary
//! part from a troublesome pair of primary parts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::color::{special_pair, Color};
use crate::error::{Error, Result};

/// A colored part: positive size plus color; size ≥ 2 when the color is
/// secondary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredPart {
    pub size: u32,
    pub color: Color,
}

impl ColoredPart {
    pub fn new(size: u32, color: Color) -> Result<ColoredPart> {
        let min = if color.is_secondary() { 2 } else { 1 };
        if size < min {
            return Err(Error::input(format!(
                "part size {size} too small for color {color} (min {min})"
            )));
        }
        Ok(ColoredPart { size, color })
    }

    /// Re-runs the constructor checks (useful after deserialization).
    pub fn validate(&self) -> Result<()> {
        ColoredPart::new(self.size, self.color).map(|_| ())
    }

    /// The part viewed as a [`ShiftedPart`] with the given size offset.
    pub fn shifted(&self, shift: i64) -> ShiftedPart {
        ShiftedPart { part: *self, shift }
    }

    /// Parses the CLI/display form `3[ad]`.
    pub fn parse(s: &str) -> Result<ColoredPart> {
        let bad = || Error::input(format!("cannot parse part {s:?}"));
        let (size, rest) = s.split_once('[').ok_or_else(bad)?;
        let color = rest.strip_suffix(']').ok_or_else(bad)?;
        ColoredPart::new(size.parse().map_err(|_| bad())?, Color::parse(color)?)
    }
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.size, self.color)
    }
}

/// A part together with an integer size offset used only for comparisons:
/// adding an integer to a part changes its size but never its color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftedPart {
    pub part: ColoredPart,
    pub shift: i64,
}

impl ShiftedPart {
    /// Effective size used in comparisons.
    pub fn size(&self) -> i64 {
        i64::from(self.part.size) + self.shift
    }

    pub fn color(&self) -> Color {
        self.part.color
    }
}

impl From<ColoredPart> for ShiftedPart {
    fn from(part: ColoredPart) -> Self {
        part.shifted(0)
    }
}

// ---------------------------------------------------------------------------
// Relations on (effective size, color) pairs. The `_raw` forms are the
// single source of truth; the public wrappers only adapt the types.
// ---------------------------------------------------------------------------

/// `k_p ≻ l_q ⟺ k − l ≥ χ(p ≤ q)`.
pub(crate) fn succ_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    xs - ys >= xc.chi_le(yc)
}

/// `⪰`: `≻` or identical (size, color).
pub(crate) fn succeq_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    succ_raw(xs, xc, ys, yc) || (xs == ys && xc == yc)
}

/// `▷`: `x ⪰ y + 1`, strict `≻` when both colors are secondary.
pub(crate) fn ord_tri_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    if xc.is_secondary() && yc.is_secondary() {
        succ_raw(xs, xc, ys + 1, yc)
    } else {
        succeq_raw(xs, xc, ys + 1, yc)
    }
}

/// `≫`: as `▷`, except `x ≻ y` when `(p, q)` is a special pair.
pub(crate) fn ord_gg_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    if special_pair(xc, yc) {
        succ_raw(xs, xc, ys, yc)
    } else {
        ord_tri_raw(xs, xc, ys, yc)
    }
}

/// Lexicographic order `x ≻ y` on parts.
pub fn succ(x: &ColoredPart, y: &ColoredPart) -> bool {
    succ_raw(i64::from(x.size), x.color, i64::from(y.size), y.color)
}

/// `x ⪰ y` on parts.
pub fn succeq(x: &ColoredPart, y: &ColoredPart) -> bool {
    succeq_raw(i64::from(x.size), x.color, i64::from(y.size), y.color)
}

/// Difference order `x ▷ y` on parts.
pub fn ord_tri(x: &ColoredPart, y: &ColoredPart) -> bool {
    ord_tri_raw(i64::from(x.size), x.color, i64::from(y.size), y.color)
}

/// Relaxed difference order `x ≫ y` on parts.
pub fn ord_gg(x: &ColoredPart, y: &ColoredPart) -> bool {
    ord_gg_raw(i64::from(x.size), x.color, i64::from(y.size), y.color)
}

/// `x ≻ y` on shifted parts.
pub fn succ_sh(x: &ShiftedPart, y: &ShiftedPart) -> bool {
    succ_raw(x.size(), x.color(), y.size(), y.color())
}

/// `x ⪰ y` on shifted parts.
pub fn succeq_sh(x: &ShiftedPart, y: &ShiftedPart) -> bool {
    succeq_raw(x.size(), x.color(), y.size(), y.color())
}

/// `x ▷ y` on shifted parts.
pub fn ord_tri_sh(x: &ShiftedPart, y: &ShiftedPart) -> bool {
    ord_tri_raw(x.size(), x.color(), y.size(), y.color())
}

/// `x ≫ y` on shifted parts.
pub fn ord_gg_sh(x: &ShiftedPart, y: &ShiftedPart) -> bool {
    ord_gg_raw(x.size(), x.color(), y.size(), y.color())
}

// ---------------------------------------------------------------------------
// Halves and merging.
// ---------------------------------------------------------------------------

fn require_secondary(x: &ColoredPart, op: &str) -> Result<(u8, u8)> {
    match x.color {
        Color::Secondary(i, j) => Ok((i, j)),
        Color::Primary(_) => Err(Error::input(format!(
            "{op} is defined on secondary parts, got {x}"
        ))),
    }
}

/// Upper half: `α(2k_{a_i a_j}) = k_{a_j}`, `α((2k+1)_{a_i a_j}) = (k+1)_{a_i}`.
pub fn alpha(x: &ColoredPart) -> Result<ColoredPart> {
    let (i, j) = require_secondary(x, "alpha")?;
    let k = x.size / 2;
    if x.size % 2 == 0 {
        ColoredPart::new(k, Color::Primary(j))
    } else {
        ColoredPart::new(k + 1, Color::Primary(i))
    }
}

/// Lower half: `β(2k_{a_i a_j}) = k_{a_i}`, `β((2k+1)_{a_i a_j}) = k_{a_j}`.
pub fn beta(x: &ColoredPart) -> Result<ColoredPart> {
    let (i, j) = require_secondary(x, "beta")?;
    let k = x.size / 2;
    if x.size % 2 == 0 {
        ColoredPart::new(k, Color::Primary(i))
    } else {
        ColoredPart::new(k, Color::Primary(j))
    }
}

/// True iff `x ≻ y` but not `x ≫ y`: `x` and `y` are `≻`-consecutive
/// primary parts of distinct colors — exactly the pairs merged by the
/// forward machine.
pub fn is_troublesome(x: &ColoredPart, y: &ColoredPart) -> Result<bool> {
    if x.color.is_secondary() || y.color.is_secondary() {
        return Err(Error::input(format!(
            "is_troublesome is defined on primary parts, got ({x}, {y})"
        )));
    }
    Ok(succ(x, y) && !ord_gg(x, y))
}

/// Merges a troublesome pair into the unique secondary part `z` with
/// `α(z) = x` and `β(z) = y`.
pub fn merge(x: &ColoredPart, y: &ColoredPart) -> Result<ColoredPart> {
    if !is_troublesome(x, y)? {
        return Err(Error::input(format!(
            "merge requires a troublesome pair, got ({x}, {y})"
        )));
    }
    let color = Color::secondary(x.color.first_index(), y.color.first_index())?;
    let z = ColoredPart::new(x.size + y.size, color)?;
    debug_assert_eq!(alpha(&z).as_ref(), Ok(x));
    debug_assert_eq!(beta(&z).as_ref(), Ok(y));
    Ok(z)
}

/// `seq[i] ⪰ seq[j] + d·(j − i)` — the d-different-distant predicate on
/// 0-based indices `i ≤ j`.
pub fn d_different_distant(seq: &[ColoredPart], i: usize, j: usize, d: i64) -> Result<bool> {
    if i > j || j >= seq.len() {
        return Err(Error::input(format!(
            "d_different_distant: bad indices i={i}, j={j}, len={}",
            seq.len()
        )));
    }
    let shift = d * (j as i64 - i as i64);
    Ok(succeq_sh(&seq[i].shifted(0), &seq[j].shifted(shift)))
}

// ---------------------------------------------------------------------------
// Primary equivalence classes of secondary parts.
// ---------------------------------------------------------------------------

/// Class comparison on (effective size, first color index).
pub(crate) fn class_greater_raw(
    x_size: i64,
    x_first: u8,
    y_size: i64,
    y_first: u8,
) -> bool {
    x_size > y_size || (x_size == y_size && x_first > y_first)
}

/// Primary-equivalence comparison of secondary parts: the class of `k_p`
/// exceeds the class of `h_q` iff `k > h`, or `k = h` and `p`'s first
/// primary index exceeds `q`'s.
pub fn class_compare(x: &ColoredPart, y: &ColoredPart) -> Result<bool> {
    if !(x.color.is_secondary() && y.color.is_secondary()) {
        return Err(Error::input(format!(
            "class_compare is defined on secondary parts, got ({x}, {y})"
        )));
    }
    Ok(class_greater_raw(
        i64::from(x.size),
        x.color.first_index(),
        i64::from(y.size),
        y.color.first_index(),
    ))
}
