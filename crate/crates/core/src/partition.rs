//! Partitions and bipartitions, plus their canonical text form
//! `[a1,a2,...|b1,b2,...]` where an empty component is written `-`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::node::NodeCoord;

/// A weakly decreasing sequence of positive parts. Rows are 1-based and
/// reading past the last stored row yields 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Length of row `row` (1-based); 0 beyond the last row.
    pub fn part(&self, row: usize) -> usize {
        if row == 0 {
            return 0;
        }
        self.parts.get(row - 1).copied().unwrap_or(0)
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Rows `a` at whose end a box may be added, i.e. the addable nodes are
    /// `(a, part(a) + 1)`.
    pub fn addable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.rows() + 1).filter(move |&a| a == 1 || self.part(a - 1) > self.part(a))
    }

    /// Rows whose last box may be removed.
    pub fn removable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.rows()).filter(move |&a| self.part(a) > self.part(a + 1))
    }

    fn grow(&mut self, row: usize) {
        if row == self.parts.len() + 1 {
            self.parts.push(1);
        } else {
            self.parts[row - 1] += 1;
        }
    }

    fn shrink(&mut self, row: usize) {
        self.parts[row - 1] -= 1;
        if self.parts[row - 1] == 0 {
            self.parts.pop();
        }
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_rank(n: usize) -> Vec<Partition> {
        fn go(rest: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: prefix.clone() });
                return;
            }
            for k in (1..=rest.min(cap)).rev() {
                prefix.push(k);
                go(rest - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// An ordered pair of partitions; component 0 is `first`, component 1 is
/// `second`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    components: [Partition; 2],
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        Self { components: [first, second] }
    }

    pub fn from_parts(first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        Ok(Self::new(Partition::new(first)?, Partition::new(second)?))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn first(&self) -> &Partition {
        &self.components[0]
    }

    pub fn second(&self) -> &Partition {
        &self.components[1]
    }

    /// Component `c`, which must be 0 or 1.
    pub fn component(&self, c: usize) -> &Partition {
        &self.components[c]
    }

    pub fn rank(&self) -> usize {
        self.components[0].rank() + self.components[1].rank()
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(Partition::is_empty)
    }

    /// The bipartition with its components exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.components[1].clone(), self.components[0].clone())
    }

    pub fn contains(&self, node: NodeCoord) -> bool {
        node.row >= 1 && node.col >= 1 && node.col <= self.components[node.comp].part(node.row)
    }

    /// Every addable node, component 0 first, rows ascending.
    pub fn addable_nodes(&self) -> Vec<NodeCoord> {
        (0..2)
            .flat_map(|c| {
                let p = &self.components[c];
                p.addable_rows().map(move |a| NodeCoord::new(a, p.part(a) + 1, c))
            })
            .collect()
    }

    /// Every removable node, component 0 first, rows ascending.
    pub fn removable_nodes(&self) -> Vec<NodeCoord> {
        (0..2)
            .flat_map(|c| {
                let p = &self.components[c];
                p.removable_rows().map(move |a| NodeCoord::new(a, p.part(a), c))
            })
            .collect()
    }

    pub fn is_addable(&self, node: NodeCoord) -> bool {
        node.comp < 2
            && node.row >= 1
            && node.col == self.components[node.comp].part(node.row) + 1
            && (node.row == 1 || self.components[node.comp].part(node.row - 1) >= node.col)
    }

    pub fn is_removable(&self, node: NodeCoord) -> bool {
        node.comp < 2
            && node.row >= 1
            && node.col >= 1
            && node.col == self.components[node.comp].part(node.row)
            && self.components[node.comp].part(node.row + 1) < node.col
    }

    /// Adds `node`, which must be addable.
    pub fn with_node(&self, node: NodeCoord) -> Option<Self> {
        if !self.is_addable(node) {
            return None;
        }
        let mut next = self.clone();
        next.components[node.comp].grow(node.row);
        Some(next)
    }

    /// Removes `node`, which must be removable.
    pub fn without_node(&self, node: NodeCoord) -> Option<Self> {
        if !self.is_removable(node) {
            return None;
        }
        let mut next = self.clone();
        next.components[node.comp].shrink(node.row);
        Some(next)
    }

    /// All bipartitions of rank `n`.
    pub fn all_of_rank(n: usize) -> Vec<Bipartition> {
        let mut out = Vec::new();
        for k in (0..=n).rev() {
            let firsts = Partition::all_of_rank(k);
            let seconds = Partition::all_of_rank(n - k);
            for a in &firsts {
                for b in &seconds {
                    out.push(Bipartition::new(a.clone(), b.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.components[0], self.components[1])
    }
}

// Parts are capped so that contents b - a + s always fit comfortably in i64.
const MAX_PART: usize = u32::MAX as usize;

fn parse_component(side: &str) -> std::result::Result<Partition, String> {
    let side = side.trim();
    if side == "-" {
        return Ok(Partition::empty());
    }
    if side.is_empty() {
        return Err("empty component; write `-` for the empty partition".into());
    }
    let mut parts = Vec::new();
    for token in side.split(',') {
        let token = token.trim();
        let value: usize = token
            .parse()
            .map_err(|_| format!("{token:?} is not a nonnegative integer"))?;
        if value == 0 {
            return Err("parts must be positive".into());
        }
        if value > MAX_PART {
            return Err(format!("part {value} is too large"));
        }
        parts.push(value);
    }
    Partition::new(parts).map_err(|e| e.to_string())
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse { text: text.to_string(), reason };
        let body = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| fail("expected `[...|...]`".into()))?;
        let mut sides = body.split('|');
        let (Some(first), Some(second), None) = (sides.next(), sides.next(), sides.next()) else {
            return Err(fail("expected exactly one `|`".into()));
        };
        let first = parse_component(first).map_err(&fail)?;
        let second = parse_component(second).map_err(&fail)?;
        Ok(Bipartition::new(first, second))
    }
}

impl Serialize for Bipartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bipartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bp(text: &str) -> Bipartition {
        text.parse().unwrap()
    }

    #[test]
    fn partition_strips_trailing_zeros() {
        let p = Partition::new(vec![3, 1, 0, 0]).unwrap();
        assert_eq!(p.parts(), &[3, 1]);
        assert_eq!(p.rank(), 4);
        assert_eq!(p.part(5), 0);
        assert_eq!(p.part(0), 0);
    }

    #[test]
    fn partition_rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn text_form() {
        let l = Bipartition::from_parts(vec![4, 3, 1, 1], vec![4]).unwrap();
        assert_eq!(l.to_string(), "[4,3,1,1|4]");
        assert_eq!(bp("[4,3,1,1|4]"), l);
        assert_eq!(bp("[-|3,2,2,2,1]").second().parts(), &[3, 2, 2, 2, 1]);
        assert_eq!(bp(" [ - | - ] "), Bipartition::empty());
        assert_eq!(Bipartition::empty().to_string(), "[-|-]");
    }

    #[test]
    fn text_form_errors() {
        for bad in ["", "[]", "[1|2|3]", "[1,2|-]", "[0|-]", "4|4", "[|1]", "[1,,1|-]", "[a|-]", "[-1|-]"] {
            assert!(bad.parse::<Bipartition>().is_err(), "{bad}");
        }
    }

    #[test]
    fn addable_and_removable() {
        let l = bp("[4,3,1,1|4]");
        let add: Vec<_> = l.addable_nodes().iter().map(|n| (n.row, n.col, n.comp)).collect();
        assert_eq!(add, vec![(1, 5, 0), (2, 4, 0), (3, 2, 0), (5, 1, 0), (1, 5, 1), (2, 1, 1)]);
        let rem: Vec<_> = l.removable_nodes().iter().map(|n| (n.row, n.col, n.comp)).collect();
        assert_eq!(rem, vec![(1, 4, 0), (2, 3, 0), (4, 1, 0), (1, 4, 1)]);
    }

    #[test]
    fn counts_of_all_bipartitions() {
        // number of bipartitions of n: 1, 2, 5, 10, 20, 36, 65
        let counts: Vec<_> = (0..7).map(|n| Bipartition::all_of_rank(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20, 36, 65]);
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::vec(1usize..6, 0..5).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn text_roundtrip(a in arb_partition(), b in arb_partition()) {
            let l = Bipartition::new(a, b);
            prop_assert_eq!(l.to_string().parse::<Bipartition>().unwrap(), l);
        }

        #[test]
        fn add_then_remove(a in arb_partition(), b in arb_partition()) {
            let l = Bipartition::new(a, b);
            for node in l.addable_nodes() {
                let up = l.with_node(node).unwrap();
                prop_assert_eq!(up.rank(), l.rank() + 1);
                prop_assert!(up.is_removable(node));
                prop_assert_eq!(up.without_node(node).unwrap(), l.clone());
            }
        }
    }
}
