//! Bridge analysis: the half enumeration of a `≫`-ordered partition, the
//! bridge function on upper-half indices, and the resulting membership test
//! for the forward machine's image.
//!
//! A partition in `E` is re-enumerated by replacing every secondary part
//! with its upper and lower halves, giving positions `1..=p+2s` split into
//! the upper-half set `I`, the lower-half set `I+1` and the primary set `J`.
//! For each `i ∈ I` the bridge `Br(i)` names the position of the part that
//! first crosses the secondary part `ν_i + ν_{i+1}` under the backward
//! machine — or `i` itself when that part splits without crossing. The
//! image of the forward machine is exactly the set of partitions whose
//! troublesome secondary parts stay ahead of their bridges ([`in_e1`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::error::{Error, Result};
use crate::machine::{phi, psi};
use crate::part::{alpha, beta, ord_gg_raw, ord_tri, succ_raw, ColoredPart};
use crate::partition::{in_e, in_o, Partition};

/// A partition in `E` rewritten as its sequence of primary halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedPartition {
    /// The original parts, in partition order.
    pub originals: Vec<ColoredPart>,
    /// The half enumeration `ν_1 … ν_{p+2s}` (0-based storage).
    pub halves: Vec<ColoredPart>,
    /// Ascending upper-half positions `I` (1-based).
    pub upper: Vec<usize>,
    /// Ascending primary-part positions `J` (1-based).
    pub primary: Vec<usize>,
    /// For each half position (0-based), the index of the original part it
    /// came from.
    origin: Vec<usize>,
    /// Greatest primary color index in use; the sentinel part carries it.
    colors: u8,
}

/// Replaces every secondary part of `ν` by its two halves and records the
/// index sets `I` and `J`.
pub fn index_split(nu: &Partition) -> Result<IndexedPartition> {
    if !in_e(&nu.parts) {
        return Err(Error::input(format!(
            "index enumeration requires a ≫-ordered partition, got {nu}"
        )));
    }
    let mut halves = Vec::new();
    let mut upper = Vec::new();
    let mut primary = Vec::new();
    let mut origin = Vec::new();
    for (k, part) in nu.parts.iter().enumerate() {
        if part.color.is_primary() {
            primary.push(halves.len() + 1);
            halves.push(*part);
            origin.push(k);
        } else {
            upper.push(halves.len() + 1);
            halves.push(alpha(part)?);
            halves.push(beta(part)?);
            origin.push(k);
            origin.push(k);
        }
    }
    Ok(IndexedPartition {
        originals: nu.parts.clone(),
        halves,
        upper,
        primary,
        origin,
        colors: nu.min_colors().max(1),
    })
}

impl IndexedPartition {
    /// Number of enumerated positions `p + 2s`.
    pub fn len(&self) -> usize {
        self.halves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }

    /// The sentinel position `p + 2s + 1`, standing for a size-0 part in
    /// the greatest primary color.
    pub fn sentinel(&self) -> usize {
        self.halves.len() + 1
    }

    /// Effective (size, color) of position `idx`, accepting the sentinel.
    fn value(&self, idx: usize) -> (i64, Color) {
        if idx == self.sentinel() {
            (0, Color::Primary(self.colors))
        } else {
            let p = self.halves[idx - 1];
            (i64::from(p.size), p.color)
        }
    }

    /// The original secondary part whose upper half sits at `i ∈ I`.
    pub fn secondary_at(&self, i: usize) -> ColoredPart {
        self.originals[self.origin[i - 1]]
    }

    /// The original part directly left of the secondary part at `i ∈ I`.
    pub fn left_of(&self, i: usize) -> Option<ColoredPart> {
        let k = self.origin[i - 1];
        k.checked_sub(1).map(|k| self.originals[k])
    }

    /// True when the lower half of the secondary part at `i′` outruns the
    /// target position `x` shifted by `(x − i′)/2 − 1` — the comparison at
    /// the heart of the bridge definition (strict `≻`).
    fn lower_beats(&self, i_prime: usize, x: usize) -> bool {
        debug_assert_eq!((x - i_prime) % 2, 0, "odd gap between {i_prime} and {x}");
        let low = self.halves[i_prime]; // position i′ + 1, 0-based i′
        let shift = (x - i_prime) as i64 / 2 - 1;
        let (ts, tc) = self.value(x);
        succ_raw(i64::from(low.size), low.color, ts + shift, tc)
    }

    /// Maximal runs of consecutive secondary parts, each as its list of
    /// upper-half positions plus the closing position (a `J` element or the
    /// sentinel).
    fn runs(&self) -> Vec<(Vec<usize>, usize)> {
        let mut runs = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        let mut pos = 1;
        while pos <= self.len() {
            if self.primary.binary_search(&pos).is_ok() {
                if !current.is_empty() {
                    runs.push((std::mem::take(&mut current), pos));
                }
                pos += 1;
            } else {
                current.push(pos);
                pos += 2;
            }
        }
        if !current.is_empty() {
            runs.push((current, self.sentinel()));
        }
        runs
    }
}

/// The bridge value for every upper-half position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeTable(pub BTreeMap<usize, usize>);

impl BridgeTable {
    /// Positions whose secondary part splits without crossing anything.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.0
            .iter()
            .filter(|(i, b)| i == b)
            .map(|(&i, _)| i)
            .collect()
    }

    /// Checks that the table is non-decreasing and idempotent on values
    /// that are themselves upper-half positions.
    pub fn check_monotone_idempotent(&self) -> Result<()> {
        let mut prev = 0usize;
        for (&i, &b) in &self.0 {
            if b < i {
                return Err(Error::internal(format!("bridge {b} below its index {i}")));
            }
            if b < prev {
                return Err(Error::internal(format!(
                    "bridge table decreases at index {i}"
                )));
            }
            prev = b;
            if let Some(&bb) = self.0.get(&b) {
                if bb != b {
                    return Err(Error::internal(format!(
                        "bridge of bridge {b} is {bb}, not a fixed point"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Computes the bridge table straight from its definition: try the closing
/// primary position first, otherwise the furthest reachable upper-half
/// position, otherwise the index itself.
pub fn bridge_direct(ip: &IndexedPartition) -> BridgeTable {
    let mut table = BTreeMap::new();
    for &i in &ip.upper {
        let j = ip
            .primary
            .iter()
            .copied()
            .find(|&j| j > i)
            .unwrap_or_else(|| ip.sentinel());
        let within = |lo: usize, hi: usize| {
            ip.upper
                .iter()
                .copied()
                .filter(move |&u| u >= lo && u < hi)
        };
        if within(i, j).all(|ipr| !ip.lower_beats(ipr, j)) {
            table.insert(i, j);
            continue;
        }
        let reachable = within(i, j)
            .skip(1)
            .filter(|&u| within(i, u).all(|ipr| !ip.lower_beats(ipr, u)))
            .max();
        table.insert(i, reachable.unwrap_or(i));
    }
    BridgeTable(table)
}

/// Computes the bridge table by the right-to-left fixed-point scan over
/// each maximal secondary run, then checks it against [`bridge_direct`].
pub fn bridge_recursive(ip: &IndexedPartition) -> Result<BridgeTable> {
    let mut table = BTreeMap::new();
    for (uppers, j) in ip.runs() {
        let mut fixed: Vec<usize> = Vec::new(); // descending
        // A run with no closing primary part splits its last secondary part
        // immediately, forcing a fixed point there.
        let (mut target, mut limit) = if j == ip.sentinel() {
            let last = *uppers.last().expect("runs are nonempty");
            fixed.push(last);
            (last, uppers.len() - 1)
        } else {
            (j, uppers.len())
        };
        loop {
            let hit = uppers[..limit]
                .iter()
                .rposition(|&u| ip.lower_beats(u, target));
            let Some(k) = hit else { break };
            fixed.push(uppers[k]);
            target = uppers[k];
            limit = k;
        }
        for &u in &uppers {
            let b = if fixed.contains(&u) {
                u
            } else {
                fixed.iter().copied().filter(|&f| f > u).min().unwrap_or(j)
            };
            table.insert(u, b);
        }
    }
    let table = BridgeTable(table);
    let direct = bridge_direct(ip);
    if table != direct {
        return Err(Error::internal(format!(
            "bridge scan {table:?} disagrees with direct computation {direct:?}"
        )));
    }
    Ok(table)
}

/// Upper-half positions of the troublesome secondary parts: well-ordered
/// (or unconstrained) on the left but not `▷`-ordered with the following
/// secondary part.
pub fn troublesome_secondary(ip: &IndexedPartition) -> Vec<usize> {
    ip.upper
        .iter()
        .copied()
        .filter(|&i| {
            let sec = ip.secondary_at(i);
            let left_ok = ip.left_of(i).is_none_or(|l| ord_tri(&l, &sec));
            let right_bad = ip.upper.binary_search(&(i + 2)).is_ok()
                && !ord_tri(&sec, &ip.secondary_at(i + 2));
            left_ok && right_bad
        })
        .collect()
}

/// Which of the three equivalent membership tests to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E1Route {
    /// Every bridged secondary part sits between its left neighbor and its
    /// shifted bridge part.
    Cond2,
    /// Only troublesome secondary parts are checked, against eq-style
    /// strict dominance of their shifted bridge part.
    Cond3,
    /// Run the backward machine and check the forward machine restores the
    /// input.
    Roundtrip,
}

fn shifted_bridge(ip: &IndexedPartition, i: usize, b: usize) -> (i64, Color) {
    let (s, c) = ip.value(b);
    (s + (b - i) as i64 / 2, c)
}

fn in_e1_route(ip: &IndexedPartition, table: &BridgeTable, route: E1Route) -> Result<bool> {
    match route {
        E1Route::Cond2 => {
            for (&i, &b) in &table.0 {
                if b == i {
                    continue;
                }
                let (bs, bc) = shifted_bridge(ip, i, b);
                let sec = ip.secondary_at(i);
                if succ_raw(bs, bc, i64::from(sec.size), sec.color) {
                    return Ok(false);
                }
                if let Some(l) = ip.left_of(i) {
                    if !ord_gg_raw(i64::from(l.size), l.color, bs, bc) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        E1Route::Cond3 => {
            for i in troublesome_secondary(ip) {
                let b = table.0[&i];
                if b == i {
                    continue;
                }
                let (bs, bc) = shifted_bridge(ip, i, b);
                let sec = ip.secondary_at(i);
                if !succ_raw(i64::from(sec.size), sec.color, bs, bc) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        E1Route::Roundtrip => {
            let nu = Partition::new(ip.originals.clone());
            let (out, _) = psi(&nu)?;
            if !in_o(&out) {
                return Ok(false);
            }
            let (back, _) = phi(&Partition::new(out))?;
            Ok(back.parts == ip.originals)
        }
    }
}

/// Tests membership in the forward machine's image along one route.
pub fn in_e1(nu: &Partition, route: E1Route) -> Result<bool> {
    let ip = index_split(nu)?;
    let table = bridge_recursive(&ip)?;
    in_e1_route(&ip, &table, route)
}

/// Fast membership test for inner search loops: definitional bridge plus
/// the troublesome-part check only, skipping the cross-validation the
/// slower entry points perform.
pub(crate) fn in_e1_fast(nu: &Partition) -> Result<bool> {
    let ip = index_split(nu)?;
    let table = bridge_direct(&ip);
    in_e1_route(&ip, &table, E1Route::Cond3)
}

/// Runs all three membership routes and errors if they disagree.
pub fn in_e1_all(nu: &Partition) -> Result<bool> {
    let ip = index_split(nu)?;
    let table = bridge_recursive(&ip)?;
    table.check_monotone_idempotent()?;
    let c2 = in_e1_route(&ip, &table, E1Route::Cond2)?;
    let c3 = in_e1_route(&ip, &table, E1Route::Cond3)?;
    let rt = in_e1_route(&ip, &table, E1Route::Roundtrip)?;
    if c2 != c3 || c2 != rt {
        return Err(Error::internal(format!(
            "membership routes disagree on {nu}: cond2={c2} cond3={c3} roundtrip={rt}"
        )));
    }
    Ok(c2)
}

/// Outcome of the three equivalent membership routes, reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub cond2: bool,
    pub cond3: bool,
    pub roundtrip: bool,
}

/// Full bridge analysis of one partition, in interchange form: the index
/// sets of the half enumeration, the troublesome upper-half positions, the
/// bridge table as `[index, bridge]` pairs, and the membership verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    #[serde(rename = "I")]
    pub upper: Vec<usize>,
    #[serde(rename = "J")]
    pub primary: Vec<usize>,
    #[serde(rename = "TS")]
    pub troublesome: Vec<usize>,
    #[serde(rename = "Br")]
    pub bridge: Vec<(usize, usize)>,
    pub fixed_points: Vec<usize>,
    #[serde(rename = "in_E1")]
    pub membership: MembershipVerdict,
}

/// Runs the full bridge analysis: half enumeration, recursive bridge table
/// (cross-checked against the definition), troublesome positions, and all
/// three membership routes.
pub fn bridge_report(nu: &Partition) -> Result<BridgeReport> {
    let ip = index_split(nu)?;
    let table = bridge_recursive(&ip)?;
    table.check_monotone_idempotent()?;
    let membership = MembershipVerdict {
        cond2: in_e1_route(&ip, &table, E1Route::Cond2)?,
        cond3: in_e1_route(&ip, &table, E1Route::Cond3)?,
        roundtrip: in_e1_route(&ip, &table, E1Route::Roundtrip)?,
    };
    Ok(BridgeReport {
        upper: ip.upper.clone(),
        primary: ip.primary.clone(),
        troublesome: troublesome_secondary(&ip),
        bridge: table.0.iter().map(|(&i, &b)| (i, b)).collect(),
        fixed_points: table.fixed_points(),
        membership,
    })
}
