//! Partitions over colored parts and the ground sets `O`, `E`, `E2`.
//!
//! * `O`: primary parts only, consecutive parts related by `≻`;
//! * `E`: parts in `P ⊔ S` (secondary sizes ≥ 2), consecutive parts related
//!   by `≫`;
//! * `E2 ⊂ E`: consecutive parts related by `▷`.
//!
//! The empty partition belongs to all three. Enumerators emit every member
//! of a ground set with a given total size exactly once, parts
//! largest-first.

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::error::{Error, Result};
use crate::part::{ord_gg, ord_tri, succ, ColoredPart};

/// Ground-set tag carried by a [`Partition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ground {
    Raw,
    O,
    E,
    E2,
}

/// An ordered sequence of colored parts, largest-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub parts: Vec<ColoredPart>,
}

impl Partition {
    pub fn new(parts: Vec<ColoredPart>) -> Partition {
        Partition { parts }
    }

    /// Parses the display form `5[b] 3[d] 2[a]` (whitespace separated).
    pub fn parse(s: &str) -> Result<Partition> {
        let parts = s
            .split_whitespace()
            .map(ColoredPart::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(parts))
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total size `|λ|`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|p| u64::from(p.size)).sum()
    }

    /// Structural validity of every part (secondary sizes ≥ 2).
    pub fn validate(&self) -> Result<()> {
        self.parts.iter().try_for_each(ColoredPart::validate)
    }

    /// The strongest ground tag the partition satisfies.
    pub fn ground(&self) -> Ground {
        if in_o(&self.parts) {
            Ground::O
        } else if in_e2(&self.parts) {
            Ground::E2
        } else if in_e(&self.parts) {
            Ground::E
        } else {
            Ground::Raw
        }
    }

    /// Commutative exponent vector of the primary colors over `1..=n`.
    pub fn color_product(&self, n: u8) -> Result<ColorProduct> {
        color_product(&self.parts, n)
    }

    /// Smallest ambient `n` accommodating every color in the partition.
    pub fn min_colors(&self) -> u8 {
        self.parts.iter().map(|p| p.color.max_index()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("()");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&strs.join(" "))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Partition::new(Vec::<ColoredPart>::deserialize(d)?))
    }
}

/// True iff all parts are primary and consecutive parts satisfy `≻`.
pub fn in_o(parts: &[ColoredPart]) -> bool {
    parts.iter().all(|p| p.color.is_primary())
        && parts.windows(2).all(|w| succ(&w[0], &w[1]))
}

/// True iff consecutive parts satisfy `≫`.
pub fn in_e(parts: &[ColoredPart]) -> bool {
    parts.windows(2).all(|w| ord_gg(&w[0], &w[1]))
}

/// True iff consecutive parts satisfy `▷`.
pub fn in_e2(parts: &[ColoredPart]) -> bool {
    parts.windows(2).all(|w| ord_tri(&w[0], &w[1]))
}

/// Exponent vector of primary colors: a secondary color `a_i a_j`
/// contributes to both `i` and `j`. Accumulation order never matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorProduct(pub Vec<u32>);

impl ColorProduct {
    pub fn zero(n: u8) -> ColorProduct {
        ColorProduct(vec![0; usize::from(n)])
    }

    fn add_color(&mut self, c: Color) {
        match c {
            Color::Primary(i) => self.0[usize::from(i) - 1] += 1,
            Color::Secondary(i, j) => {
                self.0[usize::from(i) - 1] += 1;
                self.0[usize::from(j) - 1] += 1;
            }
        }
    }

    /// Monomial display like `a^2*b*d^2` (empty product prints `1`).
    pub fn pretty(&self) -> String {
        let mut out = Vec::new();
        for (idx, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = Color::Primary(idx as u8 + 1).pretty();
            if e == 1 {
                out.push(name);
            } else {
                out.push(format!("{name}^{e}"));
            }
        }
        if out.is_empty() {
            "1".to_string()
        } else {
            out.join("*")
        }
    }
}

/// Color product of a part sequence over `1..=n` primary colors.
pub fn color_product(parts: &[ColoredPart], n: u8) -> Result<ColorProduct> {
    let mut acc = ColorProduct::zero(n);
    for p in parts {
        if !p.color.valid_for(n) {
            return Err(Error::input(format!(
                "part {p} does not fit in {n} primary colors"
            )));
        }
        acc.add_color(p.color);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Enumeration.
// ---------------------------------------------------------------------------

/// Which ground set an enumeration ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundSet {
    O,
    E,
    E2,
}

/// Candidate parts of a given size for the ground set.
fn parts_of_size(n: u8, size: u32, set: GroundSet) -> Vec<ColoredPart> {
    let mut out = Vec::new();
    for color in Color::chain(n) {
        let primary = color.is_primary();
        if matches!(set, GroundSet::O) && !primary {
            continue;
        }
        if !primary && size < 2 {
            continue;
        }
        out.push(ColoredPart { size, color });
    }
    out
}

/// Streams every partition of total size `m` in the ground set, invoking
/// `f` once per partition with the parts largest-first. Emission order is
/// deterministic: first part descending by size then chain order, recursing.
pub fn enumerate(n: u8, m: u64, set: GroundSet, f: &mut dyn FnMut(&[ColoredPart])) {
    fn admits(set: GroundSet, prev: &ColoredPart, next: &ColoredPart) -> bool {
        match set {
            GroundSet::O => succ(prev, next),
            GroundSet::E => ord_gg(prev, next),
            GroundSet::E2 => ord_tri(prev, next),
        }
    }
    fn rec(
        n: u8,
        remaining: u64,
        set: GroundSet,
        stack: &mut Vec<ColoredPart>,
        f: &mut dyn FnMut(&[ColoredPart]),
    ) {
        if remaining == 0 {
            f(stack);
            return;
        }
        let cap = u32::try_from(remaining.min(u64::from(u32::MAX))).unwrap();
        for size in (1..=cap).rev() {
            for cand in parts_of_size(n, size, set) {
                if let Some(prev) = stack.last() {
                    if !admits(set, prev, &cand) {
                        continue;
                    }
                }
                stack.push(cand);
                rec(n, remaining - u64::from(size), set, stack, f);
                stack.pop();
            }
        }
    }
    let mut stack = Vec::new();
    rec(n, m, set, &mut stack, f);
}

/// All partitions of size `m` in `O`, materialized.
pub fn enumerate_o(n: u8, m: u64) -> Vec<Partition> {
    collect(n, m, GroundSet::O)
}

/// All partitions of size `m` in `E`, materialized.
pub fn enumerate_e(n: u8, m: u64) -> Vec<Partition> {
    collect(n, m, GroundSet::E)
}

/// All partitions of size `m` in `E2`, materialized.
pub fn enumerate_e2(n: u8, m: u64) -> Vec<Partition> {
    collect(n, m, GroundSet::E2)
}

fn collect(n: u8, m: u64, set: GroundSet) -> Vec<Partition> {
    let mut out = Vec::new();
    enumerate(n, m, set, &mut |parts| {
        out.push(Partition::new(parts.to_vec()))
    });
    out
}

/// Independent memoized counter for cross-checking the generators: counts
/// suffixes by (previous part, remaining size) using the same admissibility
/// relation but none of the generator plumbing.
pub fn count_by_recurrence(n: u8, m: u64, set: GroundSet) -> u64 {
    use std::collections::HashMap;
    fn rec(
        n: u8,
        remaining: u64,
        prev: Option<ColoredPart>,
        set: GroundSet,
        memo: &mut HashMap<(Option<ColoredPart>, u64), u64>,
    ) -> u64 {
        if remaining == 0 {
            return 1;
        }
        if let Some(&hit) = memo.get(&(prev, remaining)) {
            return hit;
        }
        let mut total = 0u64;
        let cap = u32::try_from(remaining.min(u64::from(u32::MAX))).unwrap();
        for size in 1..=cap {
            for cand in parts_of_size(n, size, set) {
                let ok = match (prev, set) {
                    (None, _) => true,
                    (Some(p), GroundSet::O) => succ(&p, &cand),
                    (Some(p), GroundSet::E) => ord_gg(&p, &cand),
                    (Some(p), GroundSet::E2) => ord_tri(&p, &cand),
                };
                if ok {
                    total += rec(n, remaining - u64::from(size), Some(cand), set, memo);
                }
            }
        }
        memo.insert((prev, remaining), total);
        total
    }
    let mut memo = HashMap::new();
    rec(n, m, None, set, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part::d_different_distant;
    use std::collections::HashSet;

    fn pt(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let lambda = pt("5[b] 3[d] 2[a] 1[d] 1[c] 1[b] 1[a]");
        assert!(in_o(&lambda.parts));
        let nu = pt("5[b] 4[ad] 3[bc] 2[ad]");
        assert!(in_e(&nu.parts));
        assert!(!in_e2(&nu.parts));
        assert!(!in_o(&nu.parts));
        assert!(in_o(&[]) && in_e(&[]) && in_e2(&[]));
    }

    #[test]
    fn color_product_examples() {
        let nu = pt("5[b] 4[ad] 3[bc] 2[ad]");
        assert_eq!(nu.color_product(4).unwrap().0, vec![2, 2, 1, 2]);
        assert_eq!(Partition::new(vec![]).color_product(4).unwrap().0, vec![0; 4]);
        assert_eq!(nu.color_product(4).unwrap().pretty(), "a^2*b^2*c*d^2");
    }

    #[test]
    fn enumerate_o_examples() {
        let got = enumerate_o(1, 3);
        let set: HashSet<String> = got.iter().map(|p| p.to_string()).collect();
        assert_eq!(set, HashSet::from(["3[a]".into(), "2[a] 1[a]".into()]));
        assert_eq!(enumerate_o(2, 1).len(), 2);
        assert_eq!(enumerate_o(4, 0).len(), 1);
        assert!(enumerate_o(4, 0)[0].is_empty());
    }

    #[test]
    fn enumerate_e_contains_secondary() {
        let got = enumerate_e(2, 2);
        let set: HashSet<String> = got.iter().map(|p| p.to_string()).collect();
        assert!(set.contains("2[ab]"), "{set:?}");
        assert_eq!(enumerate_e(3, 0).len(), 1);
    }

    #[test]
    fn generators_duplicate_free_and_match_recurrence() {
        for set in [GroundSet::O, GroundSet::E, GroundSet::E2] {
            for n in 1..=4u8 {
                for m in 0..=10u64 {
                    let all = collect(n, m, set);
                    let uniq: HashSet<&Partition> = all.iter().collect();
                    assert_eq!(all.len(), uniq.len(), "dups n={n} m={m}");
                    assert_eq!(
                        all.len() as u64,
                        count_by_recurrence(n, m, set),
                        "count n={n} m={m} {set:?}"
                    );
                    for p in &all {
                        assert_eq!(p.size(), m);
                        let ok = match set {
                            GroundSet::O => in_o(&p.parts),
                            GroundSet::E => in_e(&p.parts),
                            GroundSet::E2 => in_e2(&p.parts),
                        };
                        assert!(ok, "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn e2_subset_of_e() {
        for n in 1..=4u8 {
            for m in 0..=10u64 {
                for p in enumerate_e2(n, m) {
                    assert!(in_e(&p.parts), "{p}");
                }
            }
        }
    }

    /// Members of E2 are 1-different-distant with slack: ν_i ▷ ν_j + (j−i−1).
    #[test]
    fn e2_distance_property() {
        use crate::part::ord_tri_sh;
        for m in 0..=14u64 {
            for p in enumerate_e2(4, m) {
                if p.len() > 8 {
                    continue;
                }
                for i in 0..p.len() {
                    for j in i + 1..p.len() {
                        let shift = (j - i) as i64 - 1;
                        assert!(
                            ord_tri_sh(&p.parts[i].shifted(0), &p.parts[j].shifted(shift)),
                            "{p} at ({i}, {j})"
                        );
                        assert!(d_different_distant(&p.parts, i, j, 1).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn partition_serde_is_bare_array() {
        let nu = pt("5[b] 4[ad]");
        assert_eq!(
            serde_json::to_string(&nu).unwrap(),
            r#"[{"size":5,"color":"a2"},{"size":4,"color":"a1a4"}]"#
        );
        let back: Partition = serde_json::from_str(
            r#"[{"size":5,"color":"b"},{"size":4,"color":"ad"}]"#,
        )
        .unwrap();
        assert_eq!(back, nu);
    }
}
