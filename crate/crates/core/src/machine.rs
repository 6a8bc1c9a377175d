//! The two Bressoud-style machines mapping between primary-part partitions
//! and `≫`-ordered colored partitions.
//!
//! [`phi`] consumes a partition in `O` (distinct primary parts ordered by
//! `≻`): it repeatedly *merges* the leftmost troublesome pair of primary
//! parts into a secondary part and then *crosses* that secondary part with
//! the primary parts above it until the sequence is locally `≫`-ordered.
//! [`psi`] runs the inverse moves on a partition in `E`: it repeatedly
//! crosses the rightmost secondary part with the primary part below it and
//! eventually *splits* it into its upper and lower halves.
//!
//! Both machines record a [`MachineTrace`]: the ordered list of
//! merge/cross/split events, the `(δ, γ, μ)` snapshots taken at each merge
//! boundary, and — for [`psi`] — the final position `θ_x` of the primary
//! part originating from each half or primary part of the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::part::{alpha, beta, is_troublesome, merge, ord_gg, succ, ColoredPart};
use crate::partition::{in_e, in_o, Partition};

/// One elementary move of a machine. Positions are 1-based indices of the
/// left element of the affected pair (or of the affected part for `Split`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MachineEvent {
    /// Two adjacent primary parts merged into a secondary part.
    Merge { at: usize },
    /// A primary part and a secondary part exchanged positions, the moving
    /// secondary part shrinking by one and the primary part growing by one.
    Cross { at: usize },
    /// A secondary part split into its upper and lower halves.
    Split { at: usize },
}

/// A `(δ, γ, μ)` decomposition of the working sequence: `delta` is the
/// prefix through the last secondary part, `gamma` the primary parts up to
/// and including the left element of the first troublesome pair (or the
/// whole remainder when none exists), `mu` the untouched tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub delta: Vec<ColoredPart>,
    pub gamma: Vec<ColoredPart>,
    pub mu: Vec<ColoredPart>,
}

/// Full record of one machine run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineTrace {
    pub events: Vec<MachineEvent>,
    pub snapshots: Vec<Triplet>,
    /// For [`psi`] only: `theta[x-1]` is the final 1-based position of the
    /// primary part coming from position `x` of the input's half
    /// enumeration (upper half, lower half, or primary part).
    pub theta: Option<Vec<usize>>,
}

/// Splits a working sequence into its `(δ, γ, μ)` triplet.
fn take_snapshot(work: &[ColoredPart]) -> Result<Triplet> {
    let cut = work
        .iter()
        .rposition(|p| p.color.is_secondary())
        .map_or(0, |i| i + 1);
    let (delta, tail) = work.split_at(cut);
    let mut boundary = tail.len();
    for i in 0..tail.len().saturating_sub(1) {
        if is_troublesome(&tail[i], &tail[i + 1])? {
            boundary = i + 1;
            break;
        }
    }
    Ok(Triplet {
        delta: delta.to_vec(),
        gamma: tail[..boundary].to_vec(),
        mu: tail[boundary..].to_vec(),
    })
}

fn guard(events: &[MachineEvent], limit: usize) -> Result<()> {
    if events.len() > limit {
        return Err(Error::internal(format!(
            "machine exceeded {limit} events without terminating"
        )));
    }
    Ok(())
}

/// Runs the forward machine on a partition with distinct primary parts.
///
/// Returns the `≫`-ordered image together with the full trace. Errors with
/// an input error when `λ` is not in `O`, and with an internal error if the
/// termination guard trips (which would indicate a bug, not bad input).
pub fn phi(lambda: &Partition) -> Result<(Partition, MachineTrace)> {
    if !in_o(&lambda.parts) {
        return Err(Error::input(format!(
            "phi input must be strictly ordered primary parts, got {lambda}"
        )));
    }
    let mut work = lambda.parts.clone();
    let limit = work.len() * work.len() + work.len();
    let mut events = Vec::new();
    let mut snapshots = Vec::new();

    loop {
        snapshots.push(take_snapshot(&work)?);
        // Step 1: merge the leftmost troublesome pair of primary parts.
        let mut merged_at = None;
        for i in 0..work.len().saturating_sub(1) {
            if work[i].color.is_primary()
                && work[i + 1].color.is_primary()
                && is_troublesome(&work[i], &work[i + 1])?
            {
                merged_at = Some(i);
                break;
            }
        }
        let Some(i) = merged_at else { break };
        let sec = merge(&work[i], &work[i + 1])?;
        work.splice(i..i + 2, [sec]);
        events.push(MachineEvent::Merge { at: i + 1 });
        guard(&events, limit)?;

        // Step 2: cross every primary part sitting out of order directly
        // above a secondary part, leftmost first.
        loop {
            let mut crossed = false;
            for i in 0..work.len() - 1 {
                if work[i].color.is_primary()
                    && work[i + 1].color.is_secondary()
                    && !ord_gg(&work[i], &work[i + 1])
                {
                    let up = ColoredPart::new(work[i + 1].size + 1, work[i + 1].color)?;
                    let down = ColoredPart::new(work[i].size - 1, work[i].color)?;
                    work[i] = up;
                    work[i + 1] = down;
                    events.push(MachineEvent::Cross { at: i + 1 });
                    guard(&events, limit)?;
                    crossed = true;
                    break;
                }
            }
            if !crossed {
                break;
            }
        }
    }

    let out = Partition::new(work);
    if !in_e(&out.parts) {
        return Err(Error::internal(format!(
            "phi output {out} is not well-ordered"
        )));
    }
    Ok((
        out,
        MachineTrace {
            events,
            snapshots,
            theta: None,
        },
    ))
}

/// A working item of the backward machine: the part plus the identity tags
/// of the half enumeration positions it carries.
#[derive(Clone, Copy)]
enum Tagged {
    Primary(ColoredPart, usize),
    /// Secondary part with the tags of its upper and lower halves.
    Secondary(ColoredPart, usize, usize),
}

impl Tagged {
    fn part(&self) -> ColoredPart {
        match *self {
            Tagged::Primary(p, _) | Tagged::Secondary(p, _, _) => p,
        }
    }
}

fn psi_snapshot(work: &[Tagged], gamma_end: usize) -> Triplet {
    let cut = work
        .iter()
        .rposition(|t| matches!(t, Tagged::Secondary(..)))
        .map_or(0, |i| i + 1);
    let parts = |r: std::ops::Range<usize>| work[r].iter().map(Tagged::part).collect();
    Triplet {
        delta: parts(0..cut),
        gamma: parts(cut..gamma_end),
        mu: parts(gamma_end..work.len()),
    }
}

/// Runs the backward machine on a `≫`-ordered partition.
///
/// Returns the resulting sequence of primary parts (not necessarily in `O`)
/// and the trace, including the final position map `theta`.
pub fn psi(nu: &Partition) -> Result<(Vec<ColoredPart>, MachineTrace)> {
    psi_impl(nu).map(|(out, trace, _)| (out, trace))
}

/// Runs the backward machine and reports, for each secondary part (keyed by
/// the 1-based half-enumeration position of its upper half), the first
/// primary part it crossed: the origin position of that primary part and its
/// value at the moment of the crossing. Secondary parts that split without
/// crossing are absent from the map.
pub fn psi_first_crossings(
    nu: &Partition,
) -> Result<std::collections::BTreeMap<usize, (usize, ColoredPart)>> {
    psi_impl(nu).map(|(_, _, crossings)| crossings)
}

type PsiOutcome = (
    Vec<ColoredPart>,
    MachineTrace,
    std::collections::BTreeMap<usize, (usize, ColoredPart)>,
);

fn psi_impl(nu: &Partition) -> Result<PsiOutcome> {
    if !in_e(&nu.parts) {
        return Err(Error::input(format!(
            "psi input must be a ≫-ordered partition, got {nu}"
        )));
    }
    // Tag every position of the half enumeration: a secondary part occupies
    // two consecutive positions (upper then lower half).
    let mut work: Vec<Tagged> = Vec::new();
    let mut pos = 1usize;
    for p in &nu.parts {
        if p.color.is_primary() {
            work.push(Tagged::Primary(*p, pos));
            pos += 1;
        } else {
            work.push(Tagged::Secondary(*p, pos, pos + 1));
            pos += 2;
        }
    }
    let total = pos - 1;
    let limit = total * total + total;
    let mut events = Vec::new();
    let mut snapshots = vec![psi_snapshot(&work, work.len())];
    let mut crossings = std::collections::BTreeMap::new();

    loop {
        // Step 1: the rightmost secondary part, crossed downward while the
        // primary part below it would not stay below its lower half.
        let Some(i) = work
            .iter()
            .rposition(|t| matches!(t, Tagged::Secondary(..)))
        else {
            break;
        };
        let Tagged::Secondary(sec, utag, ltag) = work[i] else {
            unreachable!()
        };
        let crosses = match work.get(i + 1) {
            Some(Tagged::Primary(p, _)) => !succ(&beta(&sec)?, p),
            _ => false,
        };
        if crosses {
            let Tagged::Primary(p, ptag) = work[i + 1] else {
                unreachable!()
            };
            crossings.entry(utag).or_insert((ptag, p));
            work[i] = Tagged::Primary(ColoredPart::new(p.size + 1, p.color)?, ptag);
            work[i + 1] = Tagged::Secondary(ColoredPart::new(sec.size - 1, sec.color)?, utag, ltag);
            events.push(MachineEvent::Cross { at: i + 1 });
            guard(&events, limit)?;
            continue;
        }
        // Step 2: split into upper and lower halves.
        let up = alpha(&sec)?;
        let down = beta(&sec)?;
        work.splice(
            i..i + 1,
            [Tagged::Primary(up, utag), Tagged::Primary(down, ltag)],
        );
        events.push(MachineEvent::Split { at: i + 1 });
        guard(&events, limit)?;
        snapshots.push(psi_snapshot(&work, i + 1));
    }

    let mut theta = vec![0usize; total];
    let mut out = Vec::with_capacity(total);
    for (y, item) in work.iter().enumerate() {
        let Tagged::Primary(p, tag) = *item else {
            unreachable!()
        };
        theta[tag - 1] = y + 1;
        out.push(p);
    }
    Ok((
        out,
        MachineTrace {
            events,
            snapshots,
            theta: Some(theta),
        },
        crossings,
    ))
}

fn check_ground(name: &str, parts: &[ColoredPart], ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::internal(format!(
            "snapshot component {name} violates its ground set: {:?}",
            parts.iter().map(ToString::to_string).collect::<Vec<_>>()
        )))
    }
}

fn validate_triplet(t: &Triplet) -> Result<()> {
    check_ground("delta", &t.delta, in_e(&t.delta))?;
    check_ground(
        "gamma",
        &t.gamma,
        in_o(&t.gamma) && in_e(&t.gamma) && t.gamma.iter().all(|p| p.color.is_primary()),
    )?;
    check_ground("mu", &t.mu, in_o(&t.mu))?;
    if let (Some(s), Some(g)) = (t.delta.last(), t.gamma.first()) {
        if !ord_gg(s, g) {
            return Err(Error::internal(format!(
                "snapshot boundary {s} does not dominate {g}"
            )));
        }
    }
    Ok(())
}

/// Returns the forward machine's snapshots after validating each one: the
/// three components lie in their ground sets, the boundary parts are
/// `≫`-ordered, each `μ` is a strict tail of the previous one, and each `δ`
/// is a prefix of the next one.
pub fn phi_triplets(trace: &MachineTrace) -> Result<&[Triplet]> {
    for t in &trace.snapshots {
        validate_triplet(t)?;
    }
    for w in trace.snapshots.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let tail_start = a.mu.len().checked_sub(b.mu.len());
        if tail_start.is_none_or(|s| s == 0 || a.mu[s..] != b.mu[..]) {
            return Err(Error::internal("snapshot μ is not a strict tail"));
        }
        if b.delta.len() < a.delta.len() || b.delta[..a.delta.len()] != a.delta[..] {
            return Err(Error::internal("snapshot δ is not a prefix"));
        }
    }
    Ok(&trace.snapshots)
}

/// Returns the backward machine's snapshots after validating each one.
pub fn psi_triplets(trace: &MachineTrace) -> Result<&[Triplet]> {
    for t in &trace.snapshots {
        validate_triplet(t)?;
    }
    Ok(&trace.snapshots)
}

/// Checks that the backward snapshots replay the forward ones in reverse:
/// with `S + 1` snapshots on each side, backward snapshot `v` must equal
/// forward snapshot `S + 2 − v` (1-based).
pub fn check_triplet_reversal(forward: &MachineTrace, backward: &MachineTrace) -> Result<()> {
    if forward.snapshots.len() != backward.snapshots.len() {
        return Err(Error::internal(format!(
            "snapshot counts differ: {} forward vs {} backward",
            forward.snapshots.len(),
            backward.snapshots.len()
        )));
    }
    for (v, b) in backward.snapshots.iter().enumerate() {
        let f = &forward.snapshots[forward.snapshots.len() - 1 - v];
        if f != b {
            return Err(Error::internal(format!(
                "snapshot {} does not mirror its forward counterpart",
                v + 1
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate, GroundSet};

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn parts(s: &str) -> Vec<ColoredPart> {
        if s.is_empty() {
            Vec::new()
        } else {
            p(s).parts
        }
    }

    #[test]
    fn forward_machine_small_example() {
        let (out, trace) = phi(&p("5[b] 3[d] 2[a] 1[d] 1[c] 1[b] 1[a]")).unwrap();
        assert_eq!(out, p("5[b] 4[ad] 3[bc] 2[ad]"));
        let merges = trace
            .events
            .iter()
            .filter(|e| matches!(e, MachineEvent::Merge { .. }))
            .count();
        assert_eq!(merges, 3);
    }

    #[test]
    fn forward_machine_larger_example() {
        let (out, _) = phi(&p(
            "12[a] 7[b] 6[d] 6[c] 5[a] 4[d] 4[c] 4[b] 4[a] 3[c] 1[d] 1[c] 1[b] 1[a]",
        ))
        .unwrap();
        assert_eq!(out, p("14[bd] 11[a] 10[ad] 9[bc] 8[ac] 3[c] 2[cd] 2[ab]"));
    }

    #[test]
    fn forward_machine_identity_on_well_ordered_input() {
        let lambda = p("9[d] 6[a] 3[c] 1[a]");
        let (out, trace) = phi(&lambda).unwrap();
        assert_eq!(out, lambda);
        assert!(trace.events.is_empty());
        assert_eq!(trace.snapshots.len(), 1);

        let (empty, _) = phi(&Partition::new(vec![])).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn forward_machine_rejects_unordered_input() {
        assert!(phi(&p("1[a] 1[b]")).unwrap_err().is_input());
        assert!(phi(&p("3[ad] 1[a]")).unwrap_err().is_input());
    }

    #[test]
    fn forward_snapshot_table() {
        let (_, trace) = phi(&p("5[b] 3[d] 2[a] 1[d] 1[c] 1[b] 1[a]")).unwrap();
        let rows: Vec<Triplet> = [
            ("", "5[b] 3[d] 2[a]", "1[d] 1[c] 1[b] 1[a]"),
            ("5[b] 4[ad]", "2[d] 1[c]", "1[b] 1[a]"),
            ("5[b] 4[ad] 3[bc]", "1[d]", "1[a]"),
            ("5[b] 4[ad] 3[bc] 2[ad]", "", ""),
        ]
        .iter()
        .map(|(d, g, m)| Triplet {
            delta: parts(d),
            gamma: parts(g),
            mu: parts(m),
        })
        .collect();
        assert_eq!(phi_triplets(&trace).unwrap(), &rows[..]);
    }

    #[test]
    fn backward_machine_six_color_examples() {
        let (out, _) = psi(&p("4[ae] 3[cd] 3[ab]")).unwrap();
        assert_eq!(out, parts("4[a] 2[a] 1[e] 1[d] 1[c] 1[b]"));

        // A second preimage of the same output: the machine is not
        // injective outside the forward image.
        let (out2, _) = psi(&p("4[a] 3[ae] 2[cd] 1[b]")).unwrap();
        assert_eq!(out2, out);

        let (out3, _) = psi(&p("4[e] 3[ef] 3[cd] 3[ab] 1[f]")).unwrap();
        assert_eq!(out3, parts("4[e] 4[f] 1[f] 1[e] 1[d] 1[c] 1[b] 1[a]"));
    }

    #[test]
    fn backward_machine_recursive_bridge_example() {
        let (out, _) = psi(&p("20[ef] 20[ad] 19[bc] 16[de] 14[af] 11[ad] 6[c]")).unwrap();
        assert_eq!(
            out,
            parts("12[b] 11[a] 9[f] 9[e] 9[d] 9[c] 8[e] 8[d] 8[c] 7[a] 6[f] 5[d] 5[a]")
        );
    }

    #[test]
    fn backward_snapshot_table_mirrors_forward() {
        let (lambda, fwd) = {
            let input = p("5[b] 3[d] 2[a] 1[d] 1[c] 1[b] 1[a]");
            let (out, trace) = phi(&input).unwrap();
            (out, trace)
        };
        let (_, bwd) = psi(&lambda).unwrap();
        psi_triplets(&bwd).unwrap();
        check_triplet_reversal(&fwd, &bwd).unwrap();
        // Spot-check the first backward row: the full partition is δ.
        assert_eq!(bwd.snapshots[0].delta, parts("5[b] 4[ad] 3[bc] 2[ad]"));
        assert!(bwd.snapshots[0].gamma.is_empty());
    }

    #[test]
    fn backward_machine_theta_permutation() {
        let (_, trace) = psi(&p("14[bd] 11[a] 10[ad] 9[bc] 8[ac] 3[c] 2[cd] 2[ab]")).unwrap();
        assert_eq!(
            trace.theta.unwrap(),
            vec![2, 3, 1, 5, 6, 7, 8, 4, 9, 10, 11, 12, 13, 14]
        );
    }

    #[test]
    fn backward_machine_identity_on_primary_parts() {
        let (out, trace) = psi(&p("9[d] 6[a] 3[c] 1[a]")).unwrap();
        assert_eq!(out, parts("9[d] 6[a] 3[c] 1[a]"));
        assert!(trace.events.is_empty());
        assert_eq!(trace.theta.unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn round_trip_on_exhaustive_sweep() {
        for n in 2..=4u8 {
            for m in 0..=12u64 {
                enumerate(n, m, GroundSet::O, &mut |lambda| {
                    let lambda = Partition::new(lambda.to_vec());
                    let (nu, fwd) = phi(&lambda).unwrap();
                    assert!(in_e(&nu.parts));
                    assert_eq!(nu.size(), lambda.size());
                    phi_triplets(&fwd).unwrap();
                    let (back, bwd) = psi(&nu).unwrap();
                    assert_eq!(back, lambda.parts, "round trip failed for {lambda}");
                    psi_triplets(&bwd).unwrap();
                    check_triplet_reversal(&fwd, &bwd).unwrap();
                });
            }
        }
    }

    #[test]
    fn split_halves_are_ordered_with_positive_sizes() {
        for m in 0..=12u64 {
            enumerate(4, m, GroundSet::E, &mut |nu| {
                let nu = Partition::new(nu.to_vec());
                let (out, trace) = psi(&nu).unwrap();
                assert!(out.iter().all(|q| q.size >= 1 && q.color.is_primary()));
                let theta = trace.theta.unwrap();
                let mut seen = theta.clone();
                seen.sort_unstable();
                assert_eq!(seen, (1..=theta.len()).collect::<Vec<_>>());
            });
        }
    }
}
