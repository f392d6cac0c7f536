//! Signatures, normal and good nodes, the crystal operators, and the
//! enumeration of the highest-weight component through `(∅, ∅)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::{self, residue, Charge, Modulus, NodeCoord, NodeOrder, Residue};
use crate::partition::Bipartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "A")]
    Addable,
    #[serde(rename = "R")]
    Removable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub node: NodeCoord,
    pub kind: NodeKind,
}

/// What is left of a signature once every `RA` has been cancelled: all
/// surviving addable nodes precede all surviving removable ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedSignature {
    pub addable: Vec<NodeCoord>,
    /// The normal nodes, ascending.
    pub normal: Vec<NodeCoord>,
}

impl ReducedSignature {
    /// The good node: the leftmost surviving `R`.
    pub fn good(&self) -> Option<NodeCoord> {
        self.normal.first().copied()
    }

    /// The addable node that becomes good once added: the rightmost
    /// surviving `A`.
    pub fn cogood(&self) -> Option<NodeCoord> {
        self.addable.last().copied()
    }
}

/// The `i`-signature of `lambda`: its addable and removable `i`-nodes,
/// ascending under `order`.
pub fn signature(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Vec<SignatureEntry> {
    let mut entries: Vec<SignatureEntry> = node::addable_nodes(lambda, i, order)
        .into_iter()
        .map(|node| SignatureEntry { node, kind: NodeKind::Addable })
        .chain(
            node::removable_nodes(lambda, i, order)
                .into_iter()
                .map(|node| SignatureEntry { node, kind: NodeKind::Removable }),
        )
        .collect();
    entries.sort_by_key(|entry| order.key(entry.node));
    debug_assert!(
        entries.windows(2).all(|w| order.key(w[0].node) != order.key(w[1].node)),
        "order keys must separate the nodes of a signature"
    );
    entries
}

/// Deletes adjacent `RA` pairs until none remain.
///
/// One left-to-right pass: removable nodes wait on a stack and an addable
/// node cancels the nearest pending one.
pub fn reduce_signature(entries: &[SignatureEntry]) -> ReducedSignature {
    let mut addable = Vec::new();
    let mut pending = Vec::new();
    for entry in entries {
        match entry.kind {
            NodeKind::Removable => pending.push(entry.node),
            NodeKind::Addable => {
                if pending.pop().is_none() {
                    addable.push(entry.node);
                }
            }
        }
    }
    ReducedSignature { addable, normal: pending }
}

pub fn reduced_signature(lambda: &Bipartition, i: Residue, order: NodeOrder) -> ReducedSignature {
    reduce_signature(&signature(lambda, i, order))
}

/// The normal `i`-nodes of `lambda`, ascending.
pub fn normal_nodes(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Vec<NodeCoord> {
    reduced_signature(lambda, i, order).normal
}

pub fn good_node(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Option<NodeCoord> {
    reduced_signature(lambda, i, order).good()
}

/// The addable `i`-node `γ` such that `γ` is the good `i`-node of
/// `lambda + γ`.
pub fn good_node_addable(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Option<NodeCoord> {
    reduced_signature(lambda, i, order).cogood()
}

/// Removes the good `i`-node, if there is one.
pub fn lower(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Option<Bipartition> {
    good_node(lambda, i, order).and_then(|node| lambda.without_node(node))
}

/// Adds the addable node that becomes the good `i`-node.
pub fn raise(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Option<Bipartition> {
    good_node_addable(lambda, i, order).and_then(|node| lambda.with_node(node))
}

/// Residues worth trying at `lambda`: every class for finite `e`, otherwise
/// the distinct contents of its addable and removable nodes.
pub fn residues(lambda: &Bipartition, e: Modulus, order: NodeOrder) -> Vec<Residue> {
    match e {
        Modulus::Finite(m) => (0..m).map(|i| e.residue(i)).collect(),
        Modulus::Infinite => {
            let charge = order.charge();
            let contents: BTreeSet<i64> = lambda
                .addable_nodes()
                .into_iter()
                .chain(lambda.removable_nodes())
                .map(|n| n.content(charge))
                .collect();
            contents.into_iter().map(|c| e.residue(c)).collect()
        }
    }
}

/// Which residue to strip first when walking back to `(∅, ∅)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StripOrder {
    #[default]
    SmallestResidue,
    LargestResidue,
}

/// Walks from `lambda` back to `(∅, ∅)` by repeatedly removing good nodes,
/// returning the residue labels in the order they were stripped. `None`
/// means the walk got stuck at a nonempty bipartition, i.e. `lambda` is not
/// in the component of `(∅, ∅)`.
pub fn unwind(lambda: &Bipartition, e: Modulus, order: NodeOrder, strip: StripOrder) -> Option<Vec<Residue>> {
    let mut current = lambda.clone();
    let mut labels = Vec::with_capacity(lambda.rank());
    while !current.is_empty() {
        let mut candidates = residues(&current, e, order);
        if strip == StripOrder::LargestResidue {
            candidates.reverse();
        }
        let (i, next) = candidates
            .into_iter()
            .find_map(|i| lower(&current, i, order).map(|next| (i, next)))?;
        labels.push(i);
        current = next;
    }
    Some(labels)
}

/// Membership in the Uglov (or Kleshchev) set of `order`.
pub fn is_uglov(lambda: &Bipartition, e: Modulus, order: NodeOrder) -> bool {
    unwind(lambda, e, order, StripOrder::default()).is_some()
}

/// Levels `0..=max_rank` of the component through `(∅, ∅)`.
pub fn enumerate_levels(e: Modulus, order: NodeOrder, max_rank: usize) -> Result<Vec<BTreeSet<Bipartition>>> {
    order.validate(e)?;
    let mut levels = Vec::with_capacity(max_rank + 1);
    levels.push(BTreeSet::from([Bipartition::empty()]));
    for _ in 0..max_rank {
        let frontier: Vec<&Bipartition> = levels.last().expect("level 0 exists").iter().collect();
        let next: BTreeSet<Bipartition> = frontier
            .par_iter()
            .flat_map_iter(|lambda| {
                residues(lambda, e, order)
                    .into_iter()
                    .filter_map(move |i| raise(lambda, i, order))
            })
            .collect();
        levels.push(next);
    }
    Ok(levels)
}

/// The Uglov bipartitions of rank `n` for `order`.
pub fn enumerate_uglov(e: Modulus, order: NodeOrder, n: usize) -> Result<BTreeSet<Bipartition>> {
    Ok(enumerate_levels(e, order, n)?.pop().expect("nonempty"))
}

/// The non-recursive FLOTW test, valid for `0 <= s0 <= s1 < e`.
pub fn is_flotw(lambda: &Bipartition, e: i64, charge: Charge) -> Result<bool> {
    let modulus = Modulus::finite(e)?;
    let Charge { s0, s1 } = charge;
    if !(0 <= s0 && s0 <= s1 && s1 < e) {
        return Err(Error::ChargeWindow { s0, s1, window: "0 <= s0 <= s1 < e" });
    }
    let (first, second) = (lambda.first(), lambda.second());
    let gap = (s1 - s0) as usize;
    let wrap = (e + s0 - s1) as usize;
    let rows = first.rows().max(second.rows());
    for i in 1..=rows {
        if first.part(i) < second.part(i + gap) || second.part(i) < first.part(i + wrap) {
            return Ok(false);
        }
    }
    // residues at the right ends of the rows of each length
    let mut ends: std::collections::BTreeMap<usize, BTreeSet<i64>> = Default::default();
    for c in 0..2 {
        let p = lambda.component(c);
        for (a, &k) in p.parts().iter().enumerate() {
            let end = NodeCoord::new(a + 1, k, c);
            ends.entry(k).or_default().insert(residue(end, modulus, charge).value());
        }
    }
    Ok(ends.values().all(|seen| (seen.len() as i64) < e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalEdge {
    pub from: Bipartition,
    pub to: Bipartition,
    pub label: i64,
}

/// The crystal graph truncated at `max_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub e: Modulus,
    pub order: NodeOrder,
    pub levels: Vec<Vec<Bipartition>>,
    pub edges: Vec<CrystalEdge>,
}

pub fn build_crystal(e: Modulus, order: NodeOrder, max_rank: usize) -> Result<CrystalGraph> {
    let levels = enumerate_levels(e, order, max_rank)?;
    let mut edges = Vec::new();
    for level in levels.iter().take(max_rank) {
        for lambda in level {
            for i in residues(lambda, e, order) {
                if let Some(mu) = raise(lambda, i, order) {
                    edges.push(CrystalEdge { from: lambda.clone(), to: mu, label: i.value() });
                }
            }
        }
    }
    Ok(CrystalGraph {
        e,
        order,
        levels: levels.into_iter().map(|l| l.into_iter().collect()).collect(),
        edges,
    })
}

impl CrystalGraph {
    pub fn max_rank(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph crystal {{");
        let _ = writeln!(out, "  label=\"e={} order={}\";", self.e, self.order);
        for (rank, level) in self.levels.iter().enumerate() {
            let _ = write!(out, "  {{ rank=same;");
            for lambda in level {
                let _ = write!(out, " \"{lambda}\";");
            }
            let _ = writeln!(out, " }} // rank {rank}");
        }
        for edge in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", edge.from, edge.to, edge.label);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("crystal graphs always serialize")
    }

    /// Parses and validates a JSON document produced by [`to_json`](Self::to_json).
    pub fn from_json(text: &str) -> Result<Self> {
        let graph: CrystalGraph = serde_json::from_str(text)?;
        graph.validate()?;
        Ok(graph)
    }

    /// Checks levels, ranks, and that every edge is a good-node edge.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        self.order.validate(self.e)?;
        if self.levels.first().map(Vec::as_slice) != Some(&[Bipartition::empty()][..]) {
            return bad("level 0 must be exactly [-|-]".into());
        }
        let mut rank_of = std::collections::HashMap::new();
        for (rank, level) in self.levels.iter().enumerate() {
            for lambda in level {
                if lambda.rank() != rank {
                    return bad(format!("{lambda} listed at level {rank}"));
                }
                if rank_of.insert(lambda, rank).is_some() {
                    return bad(format!("{lambda} listed twice"));
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut reached = BTreeSet::from([Bipartition::empty()]);
        for edge in &self.edges {
            if !rank_of.contains_key(&edge.from) || !rank_of.contains_key(&edge.to) {
                return bad(format!("edge {} -> {} leaves the vertex set", edge.from, edge.to));
            }
            let i = Residue::new(edge.label, self.e)?;
            if raise(&edge.from, i, self.order).as_ref() != Some(&edge.to) {
                return bad(format!("{} -{}-> {} is not a good-node edge", edge.from, edge.label, edge.to));
            }
            if !seen.insert((&edge.from, edge.label)) {
                return bad(format!("two {}-edges leave {}", edge.label, edge.from));
            }
            reached.insert(edge.to.clone());
        }
        if reached.len() != rank_of.len() {
            return bad("some vertex is not reached from [-|-]".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bp(text: &str) -> Bipartition {
        text.parse().unwrap()
    }

    fn n(a: usize, b: usize, c: usize) -> NodeCoord {
        NodeCoord::new(a, b, c)
    }

    fn entries(word: &str) -> Vec<SignatureEntry> {
        word.chars()
            .enumerate()
            .map(|(k, ch)| SignatureEntry {
                node: n(k + 1, 1, 0),
                kind: if ch == 'A' { NodeKind::Addable } else { NodeKind::Removable },
            })
            .collect()
    }

    /// Literal fixpoint deletion of adjacent `RA`.
    fn reduce_naive(entries: &[SignatureEntry]) -> ReducedSignature {
        let mut word = entries.to_vec();
        loop {
            let hit = word
                .windows(2)
                .position(|w| w[0].kind == NodeKind::Removable && w[1].kind == NodeKind::Addable);
            match hit {
                Some(k) => {
                    word.drain(k..k + 2);
                }
                None => break,
            }
        }
        let split = word.iter().take_while(|e| e.kind == NodeKind::Addable).count();
        assert!(word[split..].iter().all(|e| e.kind == NodeKind::Removable));
        ReducedSignature {
            addable: word[..split].iter().map(|e| e.node).collect(),
            normal: word[split..].iter().map(|e| e.node).collect(),
        }
    }

    #[test]
    fn reduce_words() {
        let r = reduce_signature(&entries("RRAR"));
        assert_eq!(r.normal, vec![n(1, 1, 0), n(4, 1, 0)]);
        assert!(r.addable.is_empty());
        let r = reduce_signature(&entries("AR"));
        assert_eq!((r.addable.len(), r.normal.len()), (1, 1));
        let r = reduce_signature(&entries("RARA"));
        assert_eq!(r, ReducedSignature::default());
    }

    proptest! {
        #[test]
        fn stack_pass_matches_fixpoint_deletion(word in "[AR]{0,16}") {
            let e = entries(&word);
            prop_assert_eq!(reduce_signature(&e), reduce_naive(&e));
        }
    }

    #[test]
    fn good_node_fixture() {
        let l = bp("[4,3,1,1|4]");
        let order = NodeOrder::Uglov(Charge::new(0, 6));
        let one = Modulus::Finite(4).residue(1);
        let sig: String = signature(&l, one, order)
            .iter()
            .map(|e| if e.kind == NodeKind::Addable { 'A' } else { 'R' })
            .collect();
        assert_eq!(sig, "RRAR");
        assert_eq!(normal_nodes(&l, one, order), vec![n(4, 1, 0), n(1, 4, 1)]);
        assert_eq!(good_node(&l, one, order), Some(n(4, 1, 0)));
    }

    #[test]
    fn good_node_small_cases() {
        let e = Modulus::Finite(2);
        let order = NodeOrder::Uglov(Charge::new(0, 0));
        for i in 0..2 {
            assert_eq!(good_node(&Bipartition::empty(), e.residue(i), order), None);
        }
        // signature A(1,1,1) R(1,1,0)
        let l = bp("[1|-]");
        let sig = signature(&l, e.residue(0), order);
        assert_eq!(
            sig,
            vec![
                SignatureEntry { node: n(1, 1, 1), kind: NodeKind::Addable },
                SignatureEntry { node: n(1, 1, 0), kind: NodeKind::Removable },
            ]
        );
        assert_eq!(good_node(&l, e.residue(0), order), Some(n(1, 1, 0)));
    }

    #[test]
    fn good_node_addable_cases() {
        let e = Modulus::Finite(4);
        let order = NodeOrder::Uglov(Charge::new(0, 1));
        assert_eq!(good_node_addable(&Bipartition::empty(), e.residue(0), order), Some(n(1, 1, 0)));
        assert_eq!(good_node_addable(&Bipartition::empty(), e.residue(2), order), None);
        let l = bp("[8|4]");
        for i in 0..4 {
            let i = e.residue(i);
            if let Some(node) = good_node_addable(&l, i, order) {
                let up = l.with_node(node).unwrap();
                assert_eq!(good_node(&up, i, order), Some(node));
            }
        }
    }

    #[test]
    fn enumeration_fixtures() {
        let e4 = Modulus::Finite(4);
        assert_eq!(
            enumerate_uglov(e4, NodeOrder::Uglov(Charge::new(0, 0)), 0).unwrap(),
            BTreeSet::from([Bipartition::empty()])
        );
        assert!(enumerate_uglov(e4, NodeOrder::Uglov(Charge::new(0, 1)), 12).unwrap().contains(&bp("[8|4]")));
        assert!(enumerate_uglov(e4, NodeOrder::Uglov(Charge::new(0, 2)), 10)
            .unwrap()
            .contains(&bp("[2,2,1|3,2]")));
    }

    #[test]
    fn flotw_fixtures() {
        assert!(is_flotw(&bp("[2,2,1|3,2]"), 4, Charge::new(0, 2)).unwrap());
        assert!(is_flotw(&Bipartition::empty(), 3, Charge::new(1, 2)).unwrap());
        assert!(is_flotw(&bp("[1|-]"), 4, Charge::new(1, 4)).is_err());
        assert!(is_flotw(&bp("[1|-]"), 4, Charge::new(2, 1)).is_err());
        // ((1),(1)) at e = 2, charge (0,0): decided by the recursive set
        let phi = enumerate_uglov(Modulus::Finite(2), NodeOrder::Uglov(Charge::new(0, 0)), 2).unwrap();
        let l = bp("[1|1]");
        assert_eq!(is_flotw(&l, 2, Charge::new(0, 0)).unwrap(), phi.contains(&l));
        assert!(phi.contains(&l));
    }

    /// Brute-force FLOTW filter over every bipartition of each rank.
    fn flotw_set(e: i64, s: Charge, n: usize) -> BTreeSet<Bipartition> {
        Bipartition::all_of_rank(n)
            .into_iter()
            .filter(|l| is_flotw(l, e, s).unwrap())
            .collect()
    }

    #[test]
    fn flotw_equals_recursive_sets_small_grid() {
        for e in 2..=3 {
            for s0 in 0..e {
                for s1 in s0..e {
                    let s = Charge::new(s0, s1);
                    let levels = enumerate_levels(Modulus::Finite(e), NodeOrder::Uglov(s), 6).unwrap();
                    for (rank, level) in levels.iter().enumerate() {
                        assert_eq!(level, &flotw_set(e, s, rank), "e={e} s={s} n={rank}");
                    }
                }
            }
        }
    }

    #[test]
    fn crystal_graph_small() {
        let e = Modulus::Finite(2);
        let order = NodeOrder::Uglov(Charge::new(0, 0));
        let g = build_crystal(e, order, 0).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges.is_empty());

        let g = build_crystal(e, order, 2).unwrap();
        for (rank, level) in g.levels.iter().enumerate() {
            assert_eq!(level.len(), flotw_set(2, Charge::new(0, 0), rank).len());
        }
        for edge in &g.edges {
            let i = e.residue(edge.label);
            assert_eq!(lower(&edge.to, i, order).as_ref(), Some(&edge.from));
        }
        g.validate().unwrap();
        assert_eq!(CrystalGraph::from_json(&g.to_json()).unwrap(), g);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph crystal {"));
        assert_eq!(dot.matches(" -> ").count(), g.edges.len());
    }

    #[test]
    fn crystal_graph_validation_rejects_tampering() {
        let g = build_crystal(Modulus::Finite(3), NodeOrder::Uglov(Charge::new(0, 1)), 3).unwrap();
        let mut bad = g.clone();
        bad.edges[0].label = (bad.edges[0].label + 1) % 3;
        assert!(bad.validate().is_err());
        let mut bad = g.clone();
        bad.levels[2].push(bp("[1|1]"));
        bad.levels[2].sort();
        bad.levels[2].dedup();
        if bad.levels[2].len() > g.levels[2].len() {
            assert!(bad.validate().is_err());
        }
        let mut bad = g;
        bad.edges.pop();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn infinite_modulus_enumeration() {
        // every member satisfies the dominance condition
        let s = Charge::new(0, 1);
        for rank in 0..=5 {
            let phi = enumerate_uglov(Modulus::Infinite, NodeOrder::Uglov(s), rank).unwrap();
            let expected: BTreeSet<_> = Bipartition::all_of_rank(rank)
                .into_iter()
                .filter(|l| (1..=rank).all(|i| l.first().part(i) >= l.second().part(i + 1)))
                .collect();
            assert_eq!(phi, expected, "rank {rank}");
        }
    }

    #[test]
    fn unwind_detects_non_members() {
        let e = Modulus::Finite(2);
        let order = NodeOrder::Uglov(Charge::new(0, 0));
        assert!(!is_uglov(&bp("[-|1]"), e, order));
        assert!(is_uglov(&bp("[1|-]"), e, order));
        assert!(unwind(&Bipartition::empty(), e, order, StripOrder::LargestResidue).unwrap().is_empty());
    }
}
