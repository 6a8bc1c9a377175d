//! Forbidden-pattern machinery: shortcut detection, forbidden/optimal
//! testing, bounded exhaustive mining, arrow-notation symbolic patterns,
//! the known four- and five-color optimal families, and the constructive
//! amplifier that stacks a shortcut onto an allowed pattern to manufacture
//! arbitrarily long forbidden patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bridge::{bridge_direct, in_e1_all, in_e1_fast, index_split};
use crate::color::{special_pair, Color};
use crate::error::{Error, Result};
use crate::part::{class_greater_raw, ord_gg, ord_gg_raw, ord_tri, succ_raw, ColoredPart};
use crate::partition::Partition;

// ---------------------------------------------------------------------------
// Pattern instances.
// ---------------------------------------------------------------------------

/// A chain of secondary parts well-ordered by `≫`, optionally closed by a
/// single primary part in last position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternInstance {
    pub parts: Vec<ColoredPart>,
}

impl PatternInstance {
    pub fn new(parts: Vec<ColoredPart>) -> Result<PatternInstance> {
        if parts.is_empty() {
            return Err(Error::input("a pattern needs at least one part"));
        }
        for part in &parts {
            part.validate()?;
        }
        for (i, part) in parts.iter().enumerate() {
            if part.color.is_primary() && i + 1 != parts.len() {
                return Err(Error::input(format!(
                    "primary part {part} allowed only in last position"
                )));
            }
        }
        for pair in parts.windows(2) {
            if !ord_gg(&pair[0], &pair[1]) {
                return Err(Error::input(format!(
                    "parts {} and {} are not consecutive under the chain relation",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(PatternInstance { parts })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn ends_primary(&self) -> bool {
        self.parts.last().is_some_and(|p| p.color.is_primary())
    }

    /// True when the first two parts are secondary and violate the
    /// distinct-part order: forced for every forbidden pattern head.
    pub fn head_violates(&self) -> bool {
        match self.parts.as_slice() {
            [x, y, ..] => {
                x.color.is_secondary() && y.color.is_secondary() && !ord_tri(x, y)
            }
            _ => false,
        }
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.parts.clone())
    }

    pub fn minus_first(&self) -> Option<PatternInstance> {
        (self.parts.len() > 1).then(|| PatternInstance {
            parts: self.parts[1..].to_vec(),
        })
    }

    pub fn minus_last(&self) -> Option<PatternInstance> {
        (self.parts.len() > 1).then(|| PatternInstance {
            parts: self.parts[..self.parts.len() - 1].to_vec(),
        })
    }
}

impl fmt::Display for PatternInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

// ---------------------------------------------------------------------------
// Symbolic arrow notation.
// ---------------------------------------------------------------------------

/// A single move of the arrow notation for consecutive pattern parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    /// `p -> q`: `(p, q)` is a special pair and the sizes differ by exactly
    /// `χ(p ≤ q)`, so the parts are consecutive for the strict order.
    Special,
    /// `p ->> q`: the sizes differ by exactly `1 + χ(p ≤ q)`, so the parts
    /// are consecutive for the distinct-part order.
    TwoHeaded,
}

/// Arrow-notation pattern: colors joined by moves, anchored at the size `base`
/// of the last part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicPattern {
    pub colors: Vec<Color>,
    pub moves: Vec<Move>,
    pub base: u32,
}

impl fmt::Display for SymbolicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, color) in self.colors.iter().enumerate() {
            if i > 0 {
                let arrow = match self.moves[i - 1] {
                    Move::Special => "->",
                    Move::TwoHeaded => "->>",
                };
                write!(f, " {arrow} ")?;
            }
            write!(f, "{}", color.pretty())?;
        }
        write!(f, ", k={}", self.base)
    }
}

/// Expands arrow notation into a concrete pattern, building sizes from the
/// base size of the last part backwards.
pub fn realize(sym: &SymbolicPattern) -> Result<PatternInstance> {
    if sym.colors.is_empty() {
        return Err(Error::input("symbolic pattern needs at least one color"));
    }
    if sym.moves.len() + 1 != sym.colors.len() {
        return Err(Error::input(format!(
            "{} colors need {} moves, got {}",
            sym.colors.len(),
            sym.colors.len() - 1,
            sym.moves.len()
        )));
    }
    let mut sizes = vec![0i64; sym.colors.len()];
    *sizes.last_mut().expect("nonempty") = i64::from(sym.base);
    for i in (0..sym.moves.len()).rev() {
        let (p, q) = (sym.colors[i], sym.colors[i + 1]);
        let chi = p.chi_le(q);
        let delta = match sym.moves[i] {
            Move::Special => {
                if !special_pair(p, q) {
                    return Err(Error::input(format!(
                        "single-headed move between {} and {} requires a special pair",
                        p.pretty(),
                        q.pretty()
                    )));
                }
                chi
            }
            Move::TwoHeaded => 1 + chi,
        };
        sizes[i] = sizes[i + 1] + delta;
    }
    let parts = sym
        .colors
        .iter()
        .zip(&sizes)
        .map(|(&color, &size)| {
            let size = u32::try_from(size)
                .map_err(|_| Error::input(format!("realized size {size} out of range")))?;
            ColoredPart::new(size, color)
        })
        .collect::<Result<Vec<_>>>()?;
    PatternInstance::new(parts)
}

/// Recovers the arrow notation of a pattern when every consecutive gap is a
/// valid move; returns `None` when some gap is wider than both move kinds.
pub fn symbolic_of(pat: &PatternInstance) -> Option<SymbolicPattern> {
    let mut moves = Vec::with_capacity(pat.len().saturating_sub(1));
    for pair in pat.parts.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let diff = i64::from(x.size) - i64::from(y.size);
        let chi = x.color.chi_le(y.color);
        if diff == chi && special_pair(x.color, y.color) {
            moves.push(Move::Special);
        } else if diff == 1 + chi {
            moves.push(Move::TwoHeaded);
        } else {
            return None;
        }
    }
    Some(SymbolicPattern {
        colors: pat.parts.iter().map(|p| p.color).collect(),
        moves,
        base: pat.parts.last().expect("nonempty pattern").size,
    })
}

// ---------------------------------------------------------------------------
// Shortcuts and forbidden tests.
// ---------------------------------------------------------------------------

/// A chain of `s + 1` secondary parts is a shortcut when the class of its
/// last part strictly exceeds the class of the first part lowered by `s − 1`:
/// the tail then outruns the head fast enough to stack copies indefinitely.
pub fn is_shortcut(pat: &PatternInstance) -> Result<bool> {
    if pat.ends_primary() {
        return Err(Error::input(format!(
            "shortcut test is defined on all-secondary patterns, got {pat}"
        )));
    }
    if pat.len() < 3 {
        return Ok(false);
    }
    let first = &pat.parts[0];
    let last = pat.parts.last().expect("nonempty pattern");
    let s = pat.len() as i64 - 1;
    Ok(class_greater_raw(
        i64::from(last.size),
        last.color.first_index(),
        i64::from(first.size) - s + 1,
        first.color.first_index(),
    ))
}

/// A pattern is forbidden when, embedded as a partition, it falls outside the
/// image set of the merge machine.
pub fn is_forbidden(pat: &PatternInstance) -> Result<bool> {
    Ok(!in_e1_all(&pat.partition())?)
}

/// Forbidden, but allowed again after removing either the first or the last
/// part.
pub fn is_optimal_forbidden(pat: &PatternInstance) -> Result<bool> {
    if !is_forbidden(pat)? {
        return Ok(false);
    }
    for trunc in [pat.minus_first(), pat.minus_last()].into_iter().flatten() {
        if is_forbidden(&trunc)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_special_move(x: &ColoredPart, y: &ColoredPart) -> bool {
    x.color.is_secondary()
        && y.color.is_secondary()
        && special_pair(x.color, y.color)
        && i64::from(x.size) - i64::from(y.size) == x.color.chi_le(y.color)
}

/// True when some interior secondary part receives a single-headed move and
/// emits one, i.e. sits strictly between two special-pair steps. Chains
/// avoiding this configuration provably contain no shortcut.
pub fn has_double_special_pivot(parts: &[ColoredPart]) -> bool {
    parts.windows(3).any(|w| {
        is_special_move(&w[0], &w[1]) && is_special_move(&w[1], &w[2])
    })
}

// ---------------------------------------------------------------------------
// Bounded exhaustive mining.
// ---------------------------------------------------------------------------

fn canonical_key(n: u8, pat: &PatternInstance) -> (usize, u32, Vec<u32>, Vec<u32>) {
    let ranks = pat
        .parts
        .iter()
        .map(|p| p.color.rank(n).expect("mined color valid for n"))
        .collect();
    let sizes = pat.parts.iter().map(|p| p.size).collect();
    (pat.len(), pat.parts[0].size, ranks, sizes)
}

fn secondary_colors(n: u8) -> Vec<Color> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in (i + 1)..=n {
            out.push(Color::secondary(i, j).expect("i < j"));
        }
    }
    out
}

/// Membership in the primary-equivalence envelope that every optimal
/// forbidden pattern satisfies: the class of the part at 0-based position `t`
/// strictly exceeds the class of the head lowered by `t`.
fn loop_envelope(head: &ColoredPart, t: usize, cand: &ColoredPart) -> bool {
    class_greater_raw(
        i64::from(cand.size),
        cand.color.first_index(),
        i64::from(head.size) - t as i64,
        head.color.first_index(),
    )
}

fn try_finals(
    n: u8,
    chain: &[ColoredPart],
    out: &mut Vec<PatternInstance>,
) -> Result<()> {
    let head = &chain[0];
    let last = chain.last().expect("chain nonempty");
    let s = chain.len() as i64;
    for c in 1..=n {
        let color = Color::Primary(c);
        for k in 1..last.size {
            let primary = ColoredPart::new(k, color)?;
            if !ord_gg(last, &primary) {
                continue;
            }
            // Necessary crossing condition: the final part shifted by the
            // number of secondaries beats the class of the head.
            if !succ_raw(i64::from(k) + s, color, i64::from(head.size), head.color) {
                continue;
            }
            // Interior parts must each stay one different-distance above the
            // shifted final part.
            let interior_ok = chain.iter().enumerate().skip(1).all(|(t, part)| {
                succ_raw(
                    i64::from(part.size),
                    part.color,
                    i64::from(k) + s - t as i64,
                    color,
                )
            });
            if !interior_ok {
                continue;
            }
            let mut parts = chain.to_vec();
            parts.push(primary);
            let full = Partition::new(parts.clone());
            if in_e1_fast(&full)? {
                continue;
            }
            let head_trunc = Partition::new(parts[1..].to_vec());
            let tail_trunc = Partition::new(parts[..parts.len() - 1].to_vec());
            if !in_e1_fast(&head_trunc)? || !in_e1_fast(&tail_trunc)? {
                continue;
            }
            out.push(PatternInstance { parts });
        }
    }
    Ok(())
}

fn mine_extend(
    n: u8,
    colors: &[Color],
    max_parts: usize,
    chain: &mut Vec<ColoredPart>,
    out: &mut Vec<PatternInstance>,
) -> Result<()> {
    try_finals(n, chain, out)?;
    if chain.len() + 1 >= max_parts {
        return Ok(());
    }
    let head = chain[0];
    let last = *chain.last().expect("chain nonempty");
    let t = chain.len();
    for &color in colors {
        for size in 2..=last.size {
            let cand = ColoredPart::new(size, color)?;
            if !ord_gg(&last, &cand) || !loop_envelope(&head, t, &cand) {
                continue;
            }
            chain.push(cand);
            mine_extend(n, colors, max_parts, chain, out)?;
            chain.pop();
        }
    }
    Ok(())
}

/// Exhaustively enumerates the optimal forbidden patterns ending in a primary
/// part with at most `max_parts` parts and first-part size at most
/// `max_size`. All-secondary forbidden chains are canonicalized away: a chain
/// closed by a secondary part is optimal and forbidden exactly when the chain
/// closed by that part's upper half is, so the primary-ending form represents
/// both.
pub fn mine_optimal(n: u8, max_parts: usize, max_size: u32) -> Result<Vec<PatternInstance>> {
    if n < 2 {
        return Err(Error::input("mining needs at least two primary colors"));
    }
    if max_parts == 0 || max_size == 0 {
        return Err(Error::input("mining bounds must be positive"));
    }
    let colors = secondary_colors(n);
    let mut heads = Vec::new();
    for &p in &colors {
        for &q in &colors {
            if p == q || !special_pair(p, q) {
                continue;
            }
            // The head pair is consecutive for the strict order (and hence
            // violates the distinct-part order), which pins the size gap.
            let chi = p.chi_le(q);
            for h in 2..=max_size {
                let second = i64::from(h) - chi;
                if second >= 2 {
                    heads.push((ColoredPart::new(h, p)?, ColoredPart::new(second as u32, q)?));
                }
            }
        }
    }
    let mined: Result<Vec<Vec<PatternInstance>>> = heads
        .par_iter()
        .map(|(first, second)| {
            let mut out = Vec::new();
            if max_parts >= 3 {
                let mut chain = vec![*first, *second];
                mine_extend(n, &colors, max_parts, &mut chain, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut set = BTreeMap::new();
    for pat in mined?.into_iter().flatten() {
        set.insert(canonical_key(n, &pat), pat);
    }
    Ok(set.into_values().collect())
}

/// Enumerates every all-secondary chain within the bounds that satisfies the
/// shortcut inequality. With `skip_double_pivot` set, chains containing an
/// interior part pinched between two special-pair steps are pruned, matching
/// the restriction under which no shortcut is supposed to exist.
pub fn find_shortcuts(
    n: u8,
    max_parts: usize,
    max_size: u32,
    skip_double_pivot: bool,
) -> Result<Vec<PatternInstance>> {
    if n < 2 {
        return Err(Error::input("shortcut search needs at least two primary colors"));
    }
    if max_parts == 0 || max_size == 0 {
        return Err(Error::input("shortcut search bounds must be positive"));
    }
    let colors = secondary_colors(n);

    fn extend(
        colors: &[Color],
        max_parts: usize,
        floor: u32,
        skip_double_pivot: bool,
        chain: &mut Vec<ColoredPart>,
        out: &mut Vec<PatternInstance>,
    ) -> Result<()> {
        if chain.len() >= 3 {
            let pat = PatternInstance {
                parts: chain.clone(),
            };
            if is_shortcut(&pat)? {
                out.push(pat);
            }
        }
        if chain.len() >= max_parts {
            return Ok(());
        }
        let last = *chain.last().expect("chain nonempty");
        for &color in colors {
            for size in floor.max(2)..=last.size {
                let cand = ColoredPart::new(size, color)?;
                if !ord_gg(&last, &cand) {
                    continue;
                }
                chain.push(cand);
                let len = chain.len();
                let pinched = skip_double_pivot
                    && len >= 3
                    && is_special_move(&chain[len - 3], &chain[len - 2])
                    && is_special_move(&chain[len - 2], &chain[len - 1]);
                if !pinched {
                    extend(colors, max_parts, floor, skip_double_pivot, chain, out)?;
                }
                chain.pop();
            }
        }
        Ok(())
    }

    let mut firsts = Vec::new();
    for &color in &colors {
        for size in 2..=max_size {
            firsts.push(ColoredPart::new(size, color)?);
        }
    }
    let found: Result<Vec<Vec<PatternInstance>>> = firsts
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            // Any shortcut of `m ≤ max_parts` parts keeps every size within
            // `first − m + 2` of the head, since sizes never increase along
            // the chain and the tail class must reach back up to the head.
            let floor = (i64::from(first.size) - max_parts as i64 + 2).max(2) as u32;
            let mut chain = vec![*first];
            extend(&colors, max_parts, floor, skip_double_pivot, &mut chain, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut set = BTreeMap::new();
    for pat in found?.into_iter().flatten() {
        set.insert(canonical_key(n, &pat), pat);
    }
    Ok(set.into_values().collect())
}

// ---------------------------------------------------------------------------
// Known optimal families.
// ---------------------------------------------------------------------------

fn color(s: &str) -> Color {
    Color::parse(s).expect("hardcoded family color")
}

/// All instances of the two four-color optimal families within the bounds:
/// equal-sized `cd, ab` closed by `c` or `d` two below, and the nested
/// `ad, bc` staircase closed by `a`.
pub fn four_color_family_instances(max_parts: usize, max_size: u32) -> Vec<PatternInstance> {
    let mut out = Vec::new();
    if max_parts < 3 {
        return out;
    }
    let realize_word = |first: &str, second: &str, last: &str, k: u32| {
        realize(&SymbolicPattern {
            colors: vec![color(first), color(second), color(last)],
            moves: vec![Move::Special, Move::TwoHeaded],
            base: k,
        })
        .expect("family word realizes")
    };
    let mut k = 1;
    while k + 2 <= max_size {
        out.push(realize_word("cd", "ab", "c", k));
        out.push(realize_word("cd", "ab", "d", k));
        if k >= 2 {
            out.push(realize_word("ad", "bc", "a", k));
        }
        k += 1;
    }
    let mut set = BTreeMap::new();
    for pat in out {
        set.insert(canonical_key(4, &pat), pat);
    }
    set.into_values().collect()
}

/// Segment grammar for the five-color family bodies.
#[derive(Debug, Clone)]
enum Seg {
    Step(Move, Color),
    Opt(Vec<Seg>),
    Star(Vec<Seg>),
    Alt(Vec<Vec<Seg>>),
}

fn advance(segs: &[Seg], tokens: &[(Move, Color)], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut positions = starts.clone();
    for seg in segs {
        positions = match seg {
            Seg::Step(mv, col) => positions
                .iter()
                .filter(|&&p| p < tokens.len() && tokens[p] == (*mv, *col))
                .map(|&p| p + 1)
                .collect(),
            Seg::Opt(inner) => {
                let mut next = advance(inner, tokens, &positions);
                next.extend(positions.iter().copied());
                next
            }
            Seg::Star(inner) => {
                let mut acc = positions.clone();
                let mut frontier = positions;
                loop {
                    let next: BTreeSet<usize> = advance(inner, tokens, &frontier)
                        .difference(&acc)
                        .copied()
                        .collect();
                    if next.is_empty() {
                        break;
                    }
                    acc.extend(next.iter().copied());
                    frontier = next;
                }
                acc
            }
            Seg::Alt(branches) => {
                let mut next = BTreeSet::new();
                for branch in branches {
                    next.extend(advance(branch, tokens, &positions));
                }
                next
            }
        };
        if positions.is_empty() {
            break;
        }
    }
    positions
}

struct Family {
    name: String,
    heads: Vec<Color>,
    body: Vec<Seg>,
    finals: Vec<Color>,
    k_min: u32,
    k_max: Option<u32>,
    penult_in: Option<Vec<Color>>,
}

fn step(mv: Move, c: &str) -> Seg {
    Seg::Step(mv, color(c))
}

fn opt_step(mv: Move, c: &str) -> Seg {
    Seg::Opt(vec![Seg::Step(mv, color(c))])
}

/// `->> ae -> cd (->> be -> cd)* (->> be)(->> bd)(->> bc)` — the descent
/// through `cd` with optional `b`-row tail.
fn block_cd_descent() -> Vec<Seg> {
    vec![
        step(Move::TwoHeaded, "ae"),
        step(Move::Special, "cd"),
        Seg::Star(vec![step(Move::TwoHeaded, "be"), step(Move::Special, "cd")]),
        opt_step(Move::TwoHeaded, "be"),
        opt_step(Move::TwoHeaded, "bd"),
        opt_step(Move::TwoHeaded, "bc"),
    ]
}

fn block_bd() -> Vec<Seg> {
    vec![
        step(Move::TwoHeaded, "ae"),
        step(Move::Special, "bd"),
        opt_step(Move::TwoHeaded, "bc"),
    ]
}

fn block_bc() -> Vec<Seg> {
    vec![step(Move::TwoHeaded, "ae"), step(Move::Special, "bc")]
}

fn block_ad_bc() -> Vec<Seg> {
    vec![
        opt_step(Move::TwoHeaded, "ae"),
        step(Move::TwoHeaded, "ad"),
        step(Move::Special, "bc"),
    ]
}

/// Body shared by the `de -> bc` tower families: special step into `bc`, then
/// any sequence of the four descent blocks.
fn body_de_bc_tower() -> Vec<Seg> {
    vec![
        step(Move::Special, "bc"),
        Seg::Star(vec![Seg::Alt(vec![
            block_cd_descent(),
            block_bd(),
            block_bc(),
            block_ad_bc(),
        ])]),
    ]
}

fn body_de_bc_tower_with_a_row() -> Vec<Seg> {
    let mut body = body_de_bc_tower();
    body.push(opt_step(Move::TwoHeaded, "ae"));
    body.push(opt_step(Move::TwoHeaded, "ad"));
    body.push(opt_step(Move::TwoHeaded, "ac"));
    body.push(opt_step(Move::TwoHeaded, "ab"));
    body
}

/// Body shared by the `cd/ce -> ab` tower families: special step into `ab`,
/// then any sequence of the three `de`-descent blocks.
fn body_cd_ab_tower() -> Vec<Seg> {
    let tower_tail = {
        let mut segs = vec![
            step(Move::TwoHeaded, "de"),
            step(Move::Special, "bc"),
            Seg::Star(vec![Seg::Alt(vec![
                block_cd_descent(),
                block_bd(),
                block_bc(),
                block_ad_bc(),
            ])]),
        ];
        segs.push(opt_step(Move::TwoHeaded, "ae"));
        segs.push(opt_step(Move::TwoHeaded, "ad"));
        segs.push(opt_step(Move::TwoHeaded, "ac"));
        segs.push(opt_step(Move::TwoHeaded, "ab"));
        segs
    };
    vec![
        step(Move::Special, "ab"),
        Seg::Star(vec![Seg::Alt(vec![
            vec![step(Move::TwoHeaded, "de"), step(Move::Special, "ab")],
            vec![
                step(Move::TwoHeaded, "de"),
                step(Move::Special, "ac"),
                opt_step(Move::TwoHeaded, "ab"),
            ],
            tower_tail,
        ])]),
    ]
}

fn five_color_families() -> Vec<Family> {
    let fam = |name: &str,
               heads: &[&str],
               body: Vec<Seg>,
               finals: &[&str],
               k_min: u32,
               k_max: Option<u32>,
               penult_in: Option<&[&str]>| Family {
        name: name.to_string(),
        heads: heads.iter().map(|s| color(s)).collect(),
        body,
        finals: finals.iter().map(|s| color(s)).collect(),
        k_min,
        k_max,
        penult_in: penult_in.map(|cs| cs.iter().map(|s| color(s)).collect()),
    };
    vec![
        fam("ad->bc |->> a, k>=2", &["ad"], vec![step(Move::Special, "bc")], &["a"], 2, None, None),
        fam("be->cd |->> b, k>=2", &["be"], vec![step(Move::Special, "cd")], &["b"], 2, None, None),
        fam(
            "de->ab |->> d,e, k>=1",
            &["de"],
            vec![step(Move::Special, "ab")],
            &["d", "e"],
            1,
            None,
            None,
        ),
        fam(
            "de->ac (->>ab) |->> d,e, k>=1",
            &["de"],
            vec![step(Move::Special, "ac"), opt_step(Move::TwoHeaded, "ab")],
            &["d", "e"],
            1,
            None,
            None,
        ),
        fam("ae->bc |->> a, k>=2", &["ae"], vec![step(Move::Special, "bc")], &["a"], 2, None, None),
        fam(
            "ae->bd (->>bc) |->> a, k>=2",
            &["ae"],
            vec![step(Move::Special, "bd"), opt_step(Move::TwoHeaded, "bc")],
            &["a"],
            2,
            None,
            None,
        ),
        fam("ae->cd |->> b, k>=2", &["ae"], vec![step(Move::Special, "cd")], &["b"], 2, None, None),
        fam(
            "ae->cd descent |->> a, k>=2",
            &["ae"],
            {
                let mut body = vec![
                    step(Move::Special, "cd"),
                    Seg::Star(vec![step(Move::TwoHeaded, "be"), step(Move::Special, "cd")]),
                ];
                body.push(opt_step(Move::TwoHeaded, "be"));
                body.push(opt_step(Move::TwoHeaded, "bd"));
                body.push(opt_step(Move::TwoHeaded, "bc"));
                body
            },
            &["a"],
            2,
            None,
            None,
        ),
        fam("de->bc |->> a, k>=2", &["de"], vec![step(Move::Special, "bc")], &["a"], 2, None, None),
        fam(
            "de->bc tower |->> e, k>=1",
            &["de"],
            body_de_bc_tower_with_a_row(),
            &["e"],
            1,
            None,
            None,
        ),
        fam(
            "de->bc tower |->> d, k>=1",
            &["de"],
            body_de_bc_tower_with_a_row(),
            &["d"],
            1,
            None,
            None,
        ),
        fam(
            "cd,ce->ab |->> d,e, k>=1",
            &["cd", "ce"],
            vec![step(Move::Special, "ab")],
            &["d", "e"],
            1,
            None,
            None,
        ),
        fam(
            "cd,ce->ab tower |->> c, k>=2",
            &["cd", "ce"],
            body_cd_ab_tower(),
            &["c"],
            2,
            None,
            None,
        ),
        fam(
            "cd,ce->ab tower ->>de |->> c, k>=2",
            &["cd", "ce"],
            {
                let mut body = body_cd_ab_tower();
                body.push(step(Move::TwoHeaded, "de"));
                body
            },
            &["c"],
            2,
            None,
            None,
        ),
        fam(
            "cd,ce->ab tower |->> c, k=1",
            &["cd", "ce"],
            body_cd_ab_tower(),
            &["c"],
            1,
            Some(1),
            Some(&["ac", "ab", "bc"]),
        ),
    ]
}

/// Matches a pattern against the bounded five-color family grammar. The
/// grammar is deliberately permissive: the "not ending by" side constraints
/// of the exact classification are dropped, so a match certifies membership
/// in the closure of the listed families, never the converse.
pub fn matches_five_color_family(pat: &PatternInstance) -> Option<String> {
    let sym = symbolic_of(pat)?;
    let m = sym.colors.len();
    if m < 3 || !sym.colors[m - 1].is_primary() {
        return None;
    }
    if sym.moves[m - 2] != Move::TwoHeaded || sym.moves[0] != Move::Special {
        return None;
    }
    let tokens: Vec<(Move, Color)> = sym
        .moves
        .iter()
        .copied()
        .zip(sym.colors[1..].iter().copied())
        .collect();
    let body_tokens = &tokens[..tokens.len() - 1];
    for family in five_color_families() {
        if !family.heads.contains(&sym.colors[0]) {
            continue;
        }
        if !family.finals.contains(&sym.colors[m - 1]) {
            continue;
        }
        if sym.base < family.k_min || family.k_max.is_some_and(|kmax| sym.base > kmax) {
            continue;
        }
        if let Some(allowed) = &family.penult_in {
            if !allowed.contains(&sym.colors[m - 2]) {
                continue;
            }
        }
        let starts = BTreeSet::from([0usize]);
        if advance(&family.body, body_tokens, &starts).contains(&body_tokens.len()) {
            return Some(family.name);
        }
    }
    None
}

/// Names the known optimal family a pattern belongs to, if any: the two
/// three-part families for four primary colors, or the bounded five-color
/// grammar for five.
pub fn detect_family(n: u8, pat: &PatternInstance) -> Option<String> {
    match n {
        4 => {
            let sym = symbolic_of(pat)?;
            if sym.moves.as_slice() != [Move::Special, Move::TwoHeaded] {
                return None;
            }
            use Color::{Primary, Secondary};
            match sym.colors.as_slice() {
                [Secondary(3, 4), Secondary(1, 2), Primary(3 | 4)] if sym.base >= 1 => {
                    Some("cd->ab |->> c,d, k>=1".to_string())
                }
                [Secondary(1, 4), Secondary(2, 3), Primary(1)] if sym.base >= 2 => {
                    Some("ad->bc |->> a, k>=2".to_string())
                }
                _ => None,
            }
        }
        5 => matches_five_color_family(pat),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Constructive amplifier.
// ---------------------------------------------------------------------------

/// Stacks shifted copies of the shortcut `zeta` in front of the allowed
/// pattern `eta` until the combined chain stops being reachable by the merge
/// machine. Each additional copy adds more secondary parts than head size,
/// so the crossing condition at the head eventually fails; the search scans
/// copy counts and even global shifts and returns the first verified
/// forbidden chain.
pub fn build_forbidden_from_shortcut(
    zeta: &PatternInstance,
    eta: &PatternInstance,
) -> Result<PatternInstance> {
    if !is_shortcut(zeta)? {
        return Err(Error::input(format!("{zeta} is not a shortcut")));
    }
    if is_forbidden(eta)? {
        return Err(Error::input(format!("{eta} must be allowed")));
    }
    let ip = index_split(&eta.partition())?;
    let table = bridge_direct(&ip);
    let last_half = ip.len();
    if table.0.get(&1) != Some(&last_half) {
        return Err(Error::input(format!(
            "{eta} must have the bridge of its first part at its last position"
        )));
    }

    let s = zeta.len() as i64 - 1;
    let zeta_last = zeta.parts.last().expect("nonempty pattern");
    let eta_head = &eta.parts[0];
    // Smallest junction lift making the last shortcut part chain onto the head
    // of the allowed pattern.
    let junction = (0..)
        .find(|&c: &i64| {
            ord_gg_raw(
                i64::from(zeta_last.size) + c,
                zeta_last.color,
                i64::from(eta_head.size),
                eta_head.color,
            )
        })
        .expect("junction lift exists for growing shift");

    for copies in 0..=40i64 {
        for lift in (0..=80i64).step_by(2) {
            let mut parts = Vec::new();
            let mut ok = true;
            for w in (0..=copies).rev() {
                for part in &zeta.parts {
                    let size = i64::from(part.size) + s * w + junction + lift;
                    match u32::try_from(size).ok().map(|sz| ColoredPart::new(sz, part.color)) {
                        Some(Ok(p)) => parts.push(p),
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            for part in &eta.parts {
                let size = i64::from(part.size) + lift;
                match u32::try_from(size).ok().map(|sz| ColoredPart::new(sz, part.color)) {
                    Some(Ok(p)) => parts.push(p),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let Ok(candidate) = PatternInstance::new(parts) else {
                continue;
            };
            let cip = index_split(&candidate.partition())?;
            let ctable = bridge_direct(&cip);
            if ctable.0.get(&1) != Some(&cip.len()) {
                continue;
            }
            if is_forbidden(&candidate)? {
                return Ok(candidate);
            }
        }
    }
    Err(Error::internal(
        "shortcut amplification exhausted its search bounds without a forbidden chain".to_string(),
    ))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> PatternInstance {
        let parts = s
            .split_whitespace()
            .map(|w| ColoredPart::parse(w).unwrap())
            .collect();
        PatternInstance::new(parts).unwrap()
    }

    fn sym(colors: &[&str], moves: &[Move], base: u32) -> SymbolicPattern {
        SymbolicPattern {
            colors: colors.iter().map(|c| color(c)).collect(),
            moves: moves.to_vec(),
            base,
        }
    }

    #[test]
    fn realize_examples() {
        use Move::{Special as S, TwoHeaded as T};
        let got = realize(&sym(&["ad", "bc", "cd", "b"], &[S, T, T], 5)).unwrap();
        assert_eq!(got, pat("9[ad] 8[bc] 6[cd] 5[b]"));
        let got = realize(&sym(&["cd", "ab", "c"], &[S, T], 1)).unwrap();
        assert_eq!(got, pat("3[cd] 3[ab] 1[c]"));
        let got = realize(&sym(&["c"], &[], 4)).unwrap();
        assert_eq!(got, pat("4[c]"));
        // (ac, bd) interleaves strictly, so it is not a special pair.
        let err = realize(&sym(&["ac", "bd", "a"], &[S, T], 2)).unwrap_err();
        assert!(err.is_input());
    }

    #[test]
    fn symbolic_roundtrip() {
        let p = pat("9[ad] 8[bc] 6[cd] 5[b]");
        let s = symbolic_of(&p).unwrap();
        assert_eq!(s.to_string(), "ad -> bc ->> cd ->> b, k=5");
        assert_eq!(realize(&s).unwrap(), p);
        // A gap of three between 5[cd] and 2[c] is wider than any move.
        assert!(symbolic_of(&pat("5[cd] 5[ab] 2[c]")).is_none());
    }

    #[test]
    fn shortcut_examples() {
        // (k+3)ae (k+2)cd (k+2)ab k_de k_bc at k = 2.
        let zeta = pat("5[ae] 4[cd] 4[ab] 2[de] 2[bc]");
        assert!(is_shortcut(&zeta).unwrap());
        assert!(!is_shortcut(&pat("4[cd] 4[ab]")).unwrap());
        assert!(is_shortcut(&pat("4[cd] 4[ab] 2[c]")).unwrap_err().is_input());
    }

    #[test]
    fn forbidden_examples() {
        assert!(is_forbidden(&pat("3[cd] 3[ab] 1[c]")).unwrap());
        assert!(!is_forbidden(&pat("3[ad] 2[bc] 1[a]")).unwrap());
        assert!(is_forbidden(&pat("4[ad] 3[bc] 2[a]")).unwrap());
    }

    #[test]
    fn optimal_examples() {
        assert!(is_optimal_forbidden(&pat("3[cd] 3[ab] 1[c]")).unwrap());
        assert!(!is_optimal_forbidden(&pat("3[ad] 2[bc] 1[a]")).unwrap());
        // Prepending a well-ordered part keeps the tail forbidden, so the
        // longer chain is forbidden but no longer optimal.
        let longer = pat("5[cd] 3[cd] 3[ab] 1[c]");
        assert!(is_forbidden(&longer).unwrap());
        assert!(!is_optimal_forbidden(&longer).unwrap());
    }

    #[test]
    fn double_pivot_detection() {
        // ae -> cd -> ab: the cd part receives and emits a special move.
        let pinched = pat("5[ae] 4[cd] 4[ab]");
        assert!(has_double_special_pivot(&pinched.parts));
        let free = pat("4[cd] 4[ab] 2[de]");
        assert!(!has_double_special_pivot(&free.parts));
    }

    #[test]
    fn mining_matches_four_color_families() {
        let mined = mine_optimal(4, 5, 12).unwrap();
        let expected = four_color_family_instances(5, 12);
        let mined_strs: Vec<String> = mined.iter().map(|p| p.to_string()).collect();
        let expected_strs: Vec<String> = expected.iter().map(|p| p.to_string()).collect();
        assert_eq!(mined_strs, expected_strs);
        assert!(!mined_strs.contains(&"3[ad] 2[bc] 1[a]".to_string()));
        // Each mined pattern must hold up under the fully validated
        // membership routes, not just the fast mining filter.
        for p in &mined {
            assert!(is_optimal_forbidden(p).unwrap(), "{p}");
        }
    }

    #[test]
    fn mining_is_empty_below_four_colors() {
        assert!(mine_optimal(2, 5, 10).unwrap().is_empty());
        assert!(mine_optimal(3, 5, 10).unwrap().is_empty());
    }

    #[test]
    fn mining_finds_five_color_staircase() {
        let mined = mine_optimal(5, 3, 6).unwrap();
        for k in 2..=4u32 {
            let inst = realize(&sym(&["ad", "bc", "a"], &[Move::Special, Move::TwoHeaded], k))
                .unwrap();
            assert!(mined.contains(&inst), "missing k={k}");
        }
    }

    #[test]
    fn family_recognizer_accepts_realizations() {
        use Move::{Special as S, TwoHeaded as T};
        let words: Vec<SymbolicPattern> = vec![
            sym(&["ad", "bc", "a"], &[S, T], 2),
            sym(&["be", "cd", "b"], &[S, T], 3),
            sym(&["de", "ab", "e"], &[S, T], 1),
            sym(&["de", "ac", "ab", "d"], &[S, T, T], 1),
            sym(&["ae", "bd", "bc", "a"], &[S, T, T], 2),
            sym(&["ae", "cd", "be", "cd", "a"], &[S, T, S, T], 2),
            sym(&["de", "bc", "ae", "cd", "e"], &[S, T, S, T], 1),
            sym(&["de", "bc", "ae", "bc", "ae", "e"], &[S, T, S, T, T], 1),
            sym(&["cd", "ab", "c"], &[S, T], 1),
            sym(&["ce", "ab", "de", "ab", "c"], &[S, T, S, T], 2),
            sym(&["cd", "ab", "de", "c"], &[S, T, T], 2),
        ];
        for word in words {
            let inst = realize(&word).unwrap();
            assert!(
                matches_five_color_family(&inst).is_some(),
                "no family for {word}"
            );
        }
        // An allowed pattern outside every family shape.
        assert!(matches_five_color_family(&pat("3[ad] 2[bc] 1[a]")).is_none());
        assert!(matches_five_color_family(&pat("5[cd] 5[ab] 2[c]")).is_none());
    }

    #[test]
    fn shortcut_search_finds_known_shortcut() {
        let found = find_shortcuts(5, 5, 6, false).unwrap();
        assert!(found.contains(&pat("5[ae] 4[cd] 4[ab] 2[de] 2[bc]")));
        // Every hit must really satisfy the shortcut inequality.
        for p in &found {
            assert!(is_shortcut(p).unwrap(), "{p}");
        }
    }

    #[test]
    fn shortcut_search_empty_without_double_pivot() {
        assert!(find_shortcuts(5, 5, 8, true).unwrap().is_empty());
    }

    #[test]
    fn amplifier_builds_verified_forbidden_chain() {
        let zeta = pat("5[ae] 4[cd] 4[ab] 2[de] 2[bc]");
        let eta = pat("5[cd] 5[ab] 2[c]");
        let built = build_forbidden_from_shortcut(&zeta, &eta).unwrap();
        assert!(is_forbidden(&built).unwrap());
        assert!(built.len() > eta.len());
        let ip = index_split(&built.partition()).unwrap();
        let table = bridge_direct(&ip);
        assert_eq!(table.0.get(&1), Some(&ip.len()));
    }
}
