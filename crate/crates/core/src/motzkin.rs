//! Path and forest encodings of `≫`-ordered partitions.
//!
//! Running the backward machine sends every enumerated position of a
//! partition in `E` to a final position; reading the letters `U`/`D`/`H`
//! (upper half, lower half, primary part) in final-position order yields a
//! Motzkin word whose `H` letters cut it into Dyck segments. The standard
//! Dyck-path/rooted-tree bijection then turns the partition into an ordered
//! forest with one tree per segment: each edge is weighted by the secondary
//! part whose upper half opened it and each root is annotated with the
//! primary part closing its segment (the last segment has none). The final
//! positions also recompute the bridge table directly.

use serde::Serialize;

use crate::bridge::{bridge_direct, index_split, BridgeTable, IndexedPartition};
use crate::error::{Error, Result};
use crate::machine::psi;
use crate::part::ColoredPart;
use crate::partition::Partition;

/// Final positions: `theta[x-1]` is where position `x` of the half
/// enumeration ends up after the backward machine.
pub fn theta(nu: &Partition) -> Result<Vec<usize>> {
    let (_, trace) = psi(nu)?;
    Ok(trace.theta.expect("backward machine always records theta"))
}

/// The letter sequence of a partition read in final-position order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotzkinWord(pub String);

impl std::fmt::Display for MotzkinWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn position_class(ip: &IndexedPartition, x: usize) -> char {
    if ip.primary.binary_search(&x).is_ok() {
        'H'
    } else if ip.upper.binary_search(&x).is_ok() {
        'U'
    } else {
        'D'
    }
}

/// Checks the pairwise relations the final positions must satisfy: nested
/// or disjoint half intervals, order-preserving primary positions, the
/// one-sided drift bounds, and primary positions never landing inside a
/// half interval.
fn validate_positions(ip: &IndexedPartition, th: &[usize]) -> Result<()> {
    let fail = |msg: String| Err(Error::internal(format!("final positions invalid: {msg}")));
    for (a, &i) in ip.upper.iter().enumerate() {
        if th[i] < i + 1 {
            return fail(format!("lower half at {} drifted left", i + 1));
        }
        for &ipr in &ip.upper[a + 1..] {
            let nested = th[ipr - 1] < th[i - 1] && th[i - 1] < th[i] && th[i] < th[ipr];
            let disjoint = th[i - 1] < th[i] && th[i] < th[ipr - 1] && th[ipr - 1] < th[ipr];
            if !nested && !disjoint {
                return fail(format!("half intervals at {i} and {ipr} interleave"));
            }
        }
        for &j in &ip.primary {
            if !(th[j - 1] < th[i - 1] || th[i] < th[j - 1]) {
                return fail(format!("primary {j} lands inside the interval of {i}"));
            }
        }
    }
    for w in ip.primary.windows(2) {
        if th[w[0] - 1] >= th[w[1] - 1] {
            return fail(format!("primary order broken at {}", w[1]));
        }
    }
    for &j in &ip.primary {
        if th[j - 1] > j {
            return fail(format!("primary at {j} drifted right"));
        }
    }
    Ok(())
}

/// Builds the Motzkin word of a partition, validating both the final
/// position relations and the path's prefix condition.
pub fn motzkin_word(nu: &Partition) -> Result<MotzkinWord> {
    let ip = index_split(nu)?;
    let th = theta(nu)?;
    validate_positions(&ip, &th)?;
    let mut letters = vec![' '; th.len()];
    for (x0, &y) in th.iter().enumerate() {
        letters[y - 1] = position_class(&ip, x0 + 1);
    }
    let word: String = letters.into_iter().collect();
    let mut height = 0i64;
    for c in word.chars() {
        height += match c {
            'U' => 1,
            'D' => -1,
            _ => 0,
        };
        if height < 0 {
            return Err(Error::internal(format!("word {word} dips below zero")));
        }
    }
    if height != 0 {
        return Err(Error::internal(format!("word {word} does not close")));
    }
    Ok(MotzkinWord(word))
}

/// Recomputes the bridge table from the final positions alone and checks it
/// against the definitional computation.
pub fn bridge_from_theta(nu: &Partition) -> Result<BridgeTable> {
    let ip = index_split(nu)?;
    let th = theta(nu)?;
    let mut table = std::collections::BTreeMap::new();
    for &i in &ip.upper {
        let from_primary = ip
            .primary
            .iter()
            .copied()
            .filter(|&j| j > i && th[j - 1] < th[i - 1])
            .min();
        let b = from_primary.unwrap_or_else(|| {
            ip.upper
                .iter()
                .copied()
                .filter(|&u| u >= i && th[u - 1] <= th[i - 1])
                .max()
                .expect("i itself qualifies")
        });
        table.insert(i, b);
    }
    let table = BridgeTable(table);
    let direct = bridge_direct(&ip);
    if table != direct {
        return Err(Error::internal(format!(
            "position-based bridge {table:?} disagrees with direct computation {direct:?}"
        )));
    }
    Ok(table)
}

/// A node hanging below a root: the edge into it carries the secondary part
/// whose upper half opened it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestNode {
    /// Upper-half position of the opening secondary part.
    pub index: usize,
    /// The secondary part weighting the incoming edge.
    pub weight: ColoredPart,
    pub children: Vec<ForestNode>,
}

/// One rooted tree: its children in left-to-right (final position) order
/// and the primary part closing its segment, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestTree {
    pub annotation: Option<ColoredPart>,
    pub children: Vec<ForestNode>,
}

/// The ordered forest of a partition in `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedForest {
    pub trees: Vec<ForestTree>,
}

impl WeightedForest {
    /// Total number of edges, which must equal the number of secondary
    /// parts.
    pub fn edge_count(&self) -> usize {
        fn count(nodes: &[ForestNode]) -> usize {
            nodes.iter().map(|n| 1 + count(&n.children)).sum()
        }
        self.trees.iter().map(|t| count(&t.children)).sum()
    }

    /// Re-serializes the forest as its Motzkin word.
    pub fn to_word(&self) -> MotzkinWord {
        fn emit(nodes: &[ForestNode], out: &mut String) {
            for n in nodes {
                out.push('U');
                emit(&n.children, out);
                out.push('D');
            }
        }
        let mut out = String::new();
        for tree in &self.trees {
            emit(&tree.children, &mut out);
            if tree.annotation.is_some() {
                out.push('H');
            }
        }
        MotzkinWord(out)
    }
}

/// Builds the weighted rooted forest of a partition in `E`.
pub fn forest(nu: &Partition) -> Result<WeightedForest> {
    let ip = index_split(nu)?;
    let th = theta(nu)?;
    validate_positions(&ip, &th)?;
    let mut by_final: Vec<usize> = vec![0; th.len()];
    for (x0, &y) in th.iter().enumerate() {
        by_final[y - 1] = x0 + 1;
    }
    let mut trees = Vec::new();
    // The stack holds the path from the current tree's root; level 0 is the
    // list of finished subtrees at root level.
    let mut stack: Vec<Vec<ForestNode>> = vec![Vec::new()];
    let mut open: Vec<(usize, ColoredPart)> = Vec::new();
    for &x in &by_final {
        match position_class(&ip, x) {
            'U' => {
                open.push((x, ip.secondary_at(x)));
                stack.push(Vec::new());
            }
            'D' => {
                let children = stack.pop().expect("validated word stays nonnegative");
                let (index, weight) = open.pop().expect("open edge for every D");
                stack
                    .last_mut()
                    .expect("root level")
                    .push(ForestNode {
                        index,
                        weight,
                        children,
                    });
            }
            _ => {
                debug_assert_eq!(stack.len(), 1, "H letter inside a segment");
                trees.push(ForestTree {
                    annotation: Some(ip.halves[x - 1]),
                    children: std::mem::take(&mut stack[0]),
                });
            }
        }
    }
    trees.push(ForestTree {
        annotation: None,
        children: std::mem::take(&mut stack[0]),
    });
    Ok(WeightedForest { trees })
}

/// Renders the forest as a deterministic DOT digraph. Roots of segments
/// with no closing primary part are drawn dashed.
pub fn dot_export(forest: &WeightedForest) -> String {
    fn emit(parent: &str, nodes: &[ForestNode], out: &mut String) {
        for n in nodes {
            let name = format!("n{}", n.index);
            out.push_str(&format!("    {name} [label=\"{}\"];\n", n.index));
            out.push_str(&format!("    {parent} -> {name} [label=\"{}\"];\n", n.weight));
            emit(&name, &n.children, out);
        }
    }
    let mut out = String::from("digraph forest {\n    node [shape=circle];\n");
    for (k, tree) in forest.trees.iter().enumerate() {
        let root = format!("r{k}");
        match &tree.annotation {
            Some(p) => out.push_str(&format!("    {root} [label=\"{p}\"];\n")),
            None => out.push_str(&format!("    {root} [label=\"\", style=dashed];\n")),
        }
        emit(&root, &tree.children, &mut out);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate, GroundSet};

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    const EXAMPLE: &str = "14[bd] 11[a] 10[ad] 9[bc] 8[ac] 3[c] 2[cd] 2[ab]";

    #[test]
    fn word_examples() {
        assert_eq!(motzkin_word(&p(EXAMPLE)).unwrap().0, "HUDUUDUDDHUDUD");
        assert_eq!(motzkin_word(&p("9[d] 6[a] 3[c]")).unwrap().0, "HHH");
        assert_eq!(motzkin_word(&p("3[ad]")).unwrap().0, "UD");
    }

    #[test]
    fn position_based_bridge_matches() {
        let br = bridge_from_theta(&p(EXAMPLE)).unwrap();
        let expect: std::collections::BTreeMap<usize, usize> =
            [(1, 3), (4, 8), (6, 8), (8, 8), (11, 11), (13, 13)]
                .into_iter()
                .collect();
        assert_eq!(br.0, expect);
    }

    #[test]
    fn forest_example_shape() {
        let f = forest(&p(EXAMPLE)).unwrap();
        assert_eq!(f.trees.len(), 3);
        assert_eq!(f.edge_count(), 6);
        // First segment is empty, closed by the primary part 11[a].
        assert_eq!(f.trees[0].annotation, Some(ColoredPart::parse("11[a]").unwrap()));
        assert!(f.trees[0].children.is_empty());
        // Second tree: root children are the parts at positions 1 and 8,
        // with positions 4 and 6 hanging below 8.
        let t = &f.trees[1];
        assert_eq!(t.annotation, Some(ColoredPart::parse("3[c]").unwrap()));
        let idx: Vec<usize> = t.children.iter().map(|n| n.index).collect();
        assert_eq!(idx, vec![1, 8]);
        assert_eq!(t.children[0].weight, ColoredPart::parse("14[bd]").unwrap());
        let inner: Vec<usize> = t.children[1].children.iter().map(|n| n.index).collect();
        assert_eq!(inner, vec![4, 6]);
        // Third tree: the two trailing secondary parts as siblings, no
        // closing primary part.
        let t = &f.trees[2];
        assert_eq!(t.annotation, None);
        let idx: Vec<usize> = t.children.iter().map(|n| n.index).collect();
        assert_eq!(idx, vec![11, 13]);
    }

    #[test]
    fn forest_of_primary_partition_is_bare_roots() {
        let f = forest(&p("9[d] 6[a] 3[c]")).unwrap();
        assert_eq!(f.trees.len(), 4);
        assert_eq!(f.edge_count(), 0);
    }

    #[test]
    fn word_round_trip_and_counts_on_sweep() {
        for m in 0..=13u64 {
            enumerate(4, m, GroundSet::E, &mut |nu| {
                let nu = Partition::new(nu.to_vec());
                let word = motzkin_word(&nu).unwrap();
                let f = forest(&nu).unwrap();
                assert_eq!(f.to_word(), word, "round trip for {nu}");
                let s = nu.parts.iter().filter(|q| q.color.is_secondary()).count();
                let pcount = nu.parts.len() - s;
                assert_eq!(f.edge_count(), s);
                assert_eq!(f.trees.len(), pcount + 1);
                bridge_from_theta(&nu).unwrap();
            });
        }
    }

    #[test]
    fn stationary_bridge_iff_lower_half_stays_put() {
        for m in 0..=13u64 {
            enumerate(4, m, GroundSet::E, &mut |nu| {
                let nu = Partition::new(nu.to_vec());
                let th = theta(&nu).unwrap();
                let br = bridge_from_theta(&nu).unwrap();
                for (&i, &b) in &br.0 {
                    assert_eq!(b == i, th[i] == i + 1, "{nu} at {i}");
                    // Drift of the lower half counts the later positions
                    // that finish earlier.
                    let ip = index_split(&nu).unwrap();
                    let crossers = ip
                        .upper
                        .iter()
                        .chain(ip.primary.iter())
                        .filter(|&&u| u > i && th[u - 1] < th[i - 1])
                        .count();
                    assert_eq!(th[i] - (i + 1), crossers, "{nu} drift at {i}");
                }
            });
        }
    }

    #[test]
    fn dot_output_is_deterministic() {
        let a = dot_export(&forest(&p(EXAMPLE)).unwrap());
        let b = dot_export(&forest(&p(EXAMPLE)).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.matches("->").count(), 6);
        assert!(a.contains("label=\"14[bd]\""));
        assert!(a.contains("style=dashed"));

        let empty = dot_export(&WeightedForest { trees: vec![] });
        assert_eq!(empty, "digraph forest {\n    node [shape=circle];\n}\n");
    }
}
