//! Charged nodes: residues and the three total orders on same-residue nodes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::Bipartition;

/// The charge `(s0, s1)` attached to the two components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Charge {
    pub s0: i64,
    pub s1: i64,
}

impl Charge {
    pub const fn new(s0: i64, s1: i64) -> Self {
        Self { s0, s1 }
    }

    /// `s_c` for component `c`.
    pub fn get(self, c: usize) -> i64 {
        if c == 0 {
            self.s0
        } else {
            self.s1
        }
    }

    /// `(s0 + t*e, s1 + t*e)`.
    pub fn shifted(self, t: i64, e: i64) -> Self {
        Self::new(self.s0 + t * e, self.s1 + t * e)
    }

    pub fn difference(self) -> i64 {
        self.s1 - self.s0
    }
}

impl From<[i64; 2]> for Charge {
    fn from([s0, s1]: [i64; 2]) -> Self {
        Self::new(s0, s1)
    }
}

impl From<Charge> for [i64; 2] {
    fn from(c: Charge) -> Self {
        [c.s0, c.s1]
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.s0, self.s1)
    }
}

fn parse_pair(text: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = text
        .trim()
        .split_once(',')
        .ok_or_else(|| format!("expected `s0,s1`, got {text:?}"))?;
    let a = a.trim().parse::<i64>().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse::<i64>().map_err(|e| format!("{b:?}: {e}"))?;
    // keeps every downstream content and shift computation far from overflow
    const LIMIT: i64 = 1 << 40;
    if a.abs() > LIMIT || b.abs() > LIMIT {
        return Err(format!("charge component out of range (|s| <= {LIMIT})"));
    }
    Ok((a, b))
}

impl FromStr for Charge {
    type Err = Error;

    /// Parses `s0,s1`, e.g. `0,6` or `-1,0`.
    fn from_str(text: &str) -> Result<Self> {
        parse_pair(text)
            .map(|(a, b)| Charge::new(a, b))
            .map_err(|reason| Error::Parse { text: text.to_string(), reason })
    }
}

/// The modulus `e`: an integer at least 2, or infinity for the `sl_inf`
/// setting where residues are raw contents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    Finite(i64),
    Infinite,
}

impl Modulus {
    pub fn finite(e: i64) -> Result<Self> {
        if e < 2 {
            return Err(Error::BadModulus(e));
        }
        Ok(Modulus::Finite(e))
    }

    /// `e` as an integer, if finite.
    pub fn value(self) -> Option<i64> {
        match self {
            Modulus::Finite(e) => Some(e),
            Modulus::Infinite => None,
        }
    }

    pub fn reduce(self, content: i64) -> i64 {
        match self {
            Modulus::Finite(e) => content.rem_euclid(e),
            Modulus::Infinite => content,
        }
    }

    pub fn residue(self, content: i64) -> Residue {
        Residue { value: self.reduce(content), modulus: self }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Finite(e) => write!(f, "{e}"),
            Modulus::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "∞" => Ok(Modulus::Infinite),
            t => {
                let e = t.parse::<i64>().map_err(|err| Error::Parse {
                    text: text.to_string(),
                    reason: err.to_string(),
                })?;
                Modulus::finite(e)
            }
        }
    }
}

impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Modulus::Finite(e) => serializer.serialize_i64(*e),
            Modulus::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(e) => Modulus::finite(e).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A residue class: `0 <= value < e`, or an unreduced content when `e` is
/// infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: i64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i64, modulus: Modulus) -> Result<Self> {
        if let Modulus::Finite(e) = modulus {
            if !(0..e).contains(&value) {
                return Err(Error::BadResidue { value, modulus: e });
            }
        }
        Ok(Self { value, modulus })
    }

    pub fn value(self) -> i64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A node `(a, b, c)`: row `a >= 1`, column `b >= 1`, component `c` in
/// `{0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeCoord {
    pub row: usize,
    pub col: usize,
    pub comp: usize,
}

impl NodeCoord {
    /// Panics unless `row, col >= 1` and `comp <= 1`.
    pub fn new(row: usize, col: usize, comp: usize) -> Self {
        assert!(row >= 1 && col >= 1 && comp <= 1, "invalid node ({row},{col},{comp})");
        Self { row, col, comp }
    }

    /// The content `b - a + s_c`.
    pub fn content(self, charge: Charge) -> i64 {
        self.col as i64 - self.row as i64 + charge.get(self.comp)
    }
}

impl fmt::Display for NodeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.comp)
    }
}

/// `res(node) = b - a + s_c (mod e)`.
pub fn residue(node: NodeCoord, e: Modulus, charge: Charge) -> Residue {
    e.residue(node.content(charge))
}

/// A total order on the same-residue nodes of a bipartition.
///
/// The asymptotic variants carry `(v0, v1)`, which only fixes residues; the
/// order itself looks at components and rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeOrder {
    Uglov(Charge),
    AsymptoticPlus(i64, i64),
    AsymptoticMinus(i64, i64),
}

impl NodeOrder {
    /// The charge used to compute residues under this order.
    pub fn charge(self) -> Charge {
        match self {
            NodeOrder::Uglov(c) => c,
            NodeOrder::AsymptoticPlus(v0, v1) | NodeOrder::AsymptoticMinus(v0, v1) => Charge::new(v0, v1),
        }
    }

    /// Checks that asymptotic parameters lie in `[0, e)`.
    pub fn validate(self, e: Modulus) -> Result<()> {
        match (self, e) {
            (NodeOrder::AsymptoticPlus(v0, v1) | NodeOrder::AsymptoticMinus(v0, v1), Modulus::Finite(m)) => {
                if (0..m).contains(&v0) && (0..m).contains(&v1) {
                    Ok(())
                } else {
                    Err(Error::ChargeWindow { s0: v0, s1: v1, window: "0 <= v0, v1 < e" })
                }
            }
            _ => Ok(()),
        }
    }

    /// Sort key: `x < y` under this order iff `key(x) < key(y)`.
    pub fn key(self, node: NodeCoord) -> (i64, i64) {
        let c = node.comp as i64;
        let a = node.row as i64;
        match self {
            // equal contents: the node in component 1 comes first
            NodeOrder::Uglov(charge) => (node.content(charge), -c),
            NodeOrder::AsymptoticPlus(..) => (-c, -a),
            NodeOrder::AsymptoticMinus(..) => (c, -a),
        }
    }
}

impl fmt::Display for NodeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeOrder::Uglov(c) => write!(f, "{c}"),
            NodeOrder::AsymptoticPlus(v0, v1) => write!(f, "{v0},{v1}+"),
            NodeOrder::AsymptoticMinus(v0, v1) => write!(f, "{v0},{v1}-"),
        }
    }
}

impl FromStr for NodeOrder {
    type Err = Error;

    /// `s0,s1` for the Uglov order, `v0,v1+` / `v0,v1-` for the asymptotic
    /// orders.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let fail = |reason| Error::Parse { text: text.to_string(), reason };
        if let Some(rest) = t.strip_suffix('+') {
            let (a, b) = parse_pair(rest).map_err(fail)?;
            Ok(NodeOrder::AsymptoticPlus(a, b))
        } else if let Some(rest) = t.strip_suffix('-').filter(|r| !r.trim_end().ends_with(',')) {
            let (a, b) = parse_pair(rest).map_err(fail)?;
            Ok(NodeOrder::AsymptoticMinus(a, b))
        } else {
            Ok(NodeOrder::Uglov(t.parse()?))
        }
    }
}

impl Serialize for NodeOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Compares two distinct same-residue nodes.
pub fn compare_nodes(x: NodeCoord, y: NodeCoord, order: NodeOrder) -> Result<Ordering> {
    if x == y {
        return Err(Error::SameNode(x.to_string()));
    }
    match order.key(x).cmp(&order.key(y)) {
        Ordering::Equal => Err(Error::Incomparable(x.to_string(), y.to_string(), order.to_string())),
        ord => Ok(ord),
    }
}

fn of_residue(nodes: Vec<NodeCoord>, i: Residue, order: NodeOrder) -> Vec<NodeCoord> {
    let charge = order.charge();
    let mut out: Vec<_> = nodes
        .into_iter()
        .filter(|&n| residue(n, i.modulus(), charge) == i)
        .collect();
    out.sort_by_key(|&n| order.key(n));
    out
}

/// Addable `i`-nodes of `lambda`, ascending under `order`.
pub fn addable_nodes(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Vec<NodeCoord> {
    of_residue(lambda.addable_nodes(), i, order)
}

/// Removable `i`-nodes of `lambda`, ascending under `order`.
pub fn removable_nodes(lambda: &Bipartition, i: Residue, order: NodeOrder) -> Vec<NodeCoord> {
    of_residue(lambda.removable_nodes(), i, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(a: usize, b: usize, c: usize) -> NodeCoord {
        NodeCoord::new(a, b, c)
    }

    fn bp(text: &str) -> Bipartition {
        text.parse().unwrap()
    }

    const E4: Modulus = Modulus::Finite(4);

    #[test]
    fn residues_from_the_worked_diagram() {
        let s = Charge::new(0, 6);
        assert_eq!(residue(n(1, 4, 1), E4, s).value(), 1);
        assert_eq!(residue(n(4, 1, 0), E4, s).value(), 1);
        assert_eq!(residue(n(1, 1, 0), Modulus::Finite(5), Charge::new(0, 0)).value(), 0);
        // second component row reads 2 3 0 1
        let row: Vec<_> = (1..=4).map(|b| residue(n(1, b, 1), E4, s).value()).collect();
        assert_eq!(row, vec![2, 3, 0, 1]);
        assert_eq!(residue(n(1, 1, 1), Modulus::Infinite, s).value(), 6);
        assert_eq!(residue(n(3, 1, 0), Modulus::Infinite, s).value(), -2);
    }

    #[test]
    fn uglov_comparisons() {
        let u = NodeOrder::Uglov(Charge::new(0, 6));
        assert_eq!(compare_nodes(n(4, 1, 0), n(2, 3, 0), u), Ok(Ordering::Less));
        assert_eq!(compare_nodes(n(2, 1, 1), n(1, 4, 1), u), Ok(Ordering::Less));
        assert_eq!(compare_nodes(n(1, 4, 1), n(2, 1, 1), u), Ok(Ordering::Greater));
        assert!(matches!(compare_nodes(n(1, 1, 0), n(1, 1, 0), u), Err(Error::SameNode(_))));
    }

    #[test]
    fn asymptotic_comparisons() {
        let minus = NodeOrder::AsymptoticMinus(2, 3);
        let plus = NodeOrder::AsymptoticPlus(2, 3);
        assert_eq!(compare_nodes(n(1, 1, 0), n(1, 1, 1), minus), Ok(Ordering::Less));
        assert_eq!(compare_nodes(n(1, 1, 0), n(1, 1, 1), plus), Ok(Ordering::Greater));
        // lower rows come first within a component
        assert_eq!(compare_nodes(n(3, 1, 0), n(1, 3, 0), minus), Ok(Ordering::Less));
        assert_eq!(compare_nodes(n(3, 1, 1), n(1, 3, 1), plus), Ok(Ordering::Less));
    }

    #[test]
    fn worked_example_nodes() {
        let l = bp("[4,3,1,1|4]");
        let u = NodeOrder::Uglov(Charge::new(0, 6));
        let one = Residue::new(1, E4).unwrap();
        assert_eq!(addable_nodes(&l, one, u), vec![n(2, 1, 1)]);
        assert_eq!(removable_nodes(&l, one, u), vec![n(4, 1, 0), n(2, 3, 0), n(1, 4, 1)]);
    }

    #[test]
    fn empty_bipartition_nodes() {
        let e = Modulus::Finite(3);
        let order = NodeOrder::Uglov(Charge::new(1, 4));
        let i = e.residue(1);
        assert_eq!(addable_nodes(&Bipartition::empty(), i, order), vec![n(1, 1, 0), n(1, 1, 1)]);
        let order = NodeOrder::Uglov(Charge::new(4, 4));
        assert_eq!(addable_nodes(&Bipartition::empty(), i, order), vec![n(1, 1, 1), n(1, 1, 0)]);
        let order = NodeOrder::Uglov(Charge::new(1, 3));
        assert_eq!(addable_nodes(&Bipartition::empty(), i, order), vec![n(1, 1, 0)]);
        let single = bp("[1|-]");
        let order = NodeOrder::Uglov(Charge::new(0, 1));
        assert_eq!(removable_nodes(&single, e.residue(0), order), vec![n(1, 1, 0)]);
    }

    #[test]
    fn order_text_forms() {
        for text in ["0,6", "-1,0", "0,1+", "2,3-", "-2,-3-", "-2,-3"] {
            let order: NodeOrder = text.parse().unwrap();
            assert_eq!(order.to_string(), text);
        }
        assert_eq!("0,1-".parse::<NodeOrder>().unwrap(), NodeOrder::AsymptoticMinus(0, 1));
        for bad in ["", "1", "1,", "1,-", "a,b", "1,2,3", "1,2+-"] {
            assert!(bad.parse::<NodeOrder>().is_err(), "{bad}");
        }
        assert!(NodeOrder::AsymptoticMinus(0, 4).validate(E4).is_err());
    }

    #[test]
    fn modulus_parsing() {
        assert_eq!("inf".parse::<Modulus>().unwrap(), Modulus::Infinite);
        assert_eq!("3".parse::<Modulus>().unwrap(), Modulus::Finite(3));
        assert!("1".parse::<Modulus>().is_err());
        assert!(Residue::new(4, E4).is_err());
    }

    fn arb_bipartition(max: usize) -> impl Strategy<Value = Bipartition> {
        let part = prop::collection::vec(1usize..=max, 0..4).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        });
        (part.clone(), part).prop_map(|(a, b)| Bipartition::from_parts(a, b).unwrap())
    }

    fn arb_order() -> impl Strategy<Value = NodeOrder> {
        prop_oneof![
            (-6i64..6, -6i64..6).prop_map(|(a, b)| NodeOrder::Uglov(Charge::new(a, b))),
            (0i64..2, 0i64..2).prop_map(|(a, b)| NodeOrder::AsymptoticPlus(a, b)),
            (0i64..2, 0i64..2).prop_map(|(a, b)| NodeOrder::AsymptoticMinus(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn residue_is_periodic_in_the_charge(a in 1usize..9, b in 1usize..9, c in 0usize..2,
                                             s0 in -9i64..9, s1 in -9i64..9, e in 2i64..6, t in -3i64..3) {
            let node = n(a, b, c);
            let s = Charge::new(s0, s1);
            let e = Modulus::Finite(e);
            prop_assert_eq!(residue(node, e, s), residue(node, e, s.shifted(t, e.value().unwrap())));
        }

        // antisymmetry and transitivity on the same-residue nodes of one bipartition
        #[test]
        fn orders_are_strict_total(l in arb_bipartition(4), order in arb_order(), e in 2i64..5) {
            let e = Modulus::Finite(e);
            for i in 0..e.value().unwrap() {
                let i = e.residue(i);
                let mut nodes = addable_nodes(&l, i, order);
                nodes.extend(removable_nodes(&l, i, order));
                for &x in &nodes {
                    for &y in &nodes {
                        if x == y { continue; }
                        let xy = compare_nodes(x, y, order).unwrap();
                        let yx = compare_nodes(y, x, order).unwrap();
                        prop_assert_eq!(xy, yx.reverse());
                        for &z in &nodes {
                            if z == x || z == y { continue; }
                            let yz = compare_nodes(y, z, order).unwrap();
                            if xy == Ordering::Less && yz == Ordering::Less {
                                prop_assert_eq!(compare_nodes(x, z, order).unwrap(), Ordering::Less);
                            }
                        }
                    }
                }
            }
        }

        // adding then removing an i-node leaves the A/R balance unchanged
        #[test]
        fn node_balance_is_restored(l in arb_bipartition(4), s0 in -3i64..3, s1 in -3i64..3, e in 2i64..5) {
            let e = Modulus::Finite(e);
            let order = NodeOrder::Uglov(Charge::new(s0, s1));
            for i in 0..e.value().unwrap() {
                let i = e.residue(i);
                let balance = |x: &Bipartition| {
                    addable_nodes(x, i, order).len() as i64 - removable_nodes(x, i, order).len() as i64
                };
                for node in addable_nodes(&l, i, order) {
                    let back = l.with_node(node).unwrap().without_node(node).unwrap();
                    prop_assert_eq!(balance(&back), balance(&l));
                }
            }
        }
    }

    /// Uglov order coincides with the asymptotic orders once the charge
    /// difference is large relative to the rank.
    #[test]
    fn uglov_order_stabilises() {
        for e in 2..=4i64 {
            let m = Modulus::Finite(e);
            for rank in 0..=6usize {
                for l in Bipartition::all_of_rank(rank) {
                    for v0 in 0..e {
                        for v1 in 0..e {
                            let n = rank as i64;
                            // smallest congruent charge with s1 - s0 > n - 1
                            let k = (n - 1 - (v1 - v0)).div_euclid(e) + 1;
                            let minus = Charge::new(v0, v1 + k * e);
                            // smallest congruent charge with s0 - s1 > n - 1 - e
                            let k = (n - 1 - e - (v0 - v1)).div_euclid(e) + 1;
                            let plus = Charge::new(v0 + k * e, v1);
                            for (s, asym) in [
                                (minus, NodeOrder::AsymptoticMinus(v0, v1)),
                                (plus, NodeOrder::AsymptoticPlus(v0, v1)),
                            ] {
                                let u = NodeOrder::Uglov(s);
                                for i in 0..e {
                                    let i = m.residue(i);
                                    let mut nodes = addable_nodes(&l, i, u);
                                    nodes.extend(removable_nodes(&l, i, u));
                                    for &x in &nodes {
                                        for &y in &nodes {
                                            if x != y && l.is_removable(x) {
                                                assert_eq!(
                                                    compare_nodes(x, y, u).unwrap(),
                                                    compare_nodes(x, y, asym).unwrap(),
                                                    "{l} {x} {y} {s}"
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
