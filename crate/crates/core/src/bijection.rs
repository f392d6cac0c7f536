//! Crystal isomorphisms between Uglov sets of different charges: the
//! recursive oracle that replays residue labels, and an engine that builds
//! the same map out of shifts, component swaps and the symbol map Υ.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::crystal::{is_uglov, raise, unwind, StripOrder};
use crate::error::{Error, Result};
use crate::node::{Charge, Modulus, NodeOrder};
use crate::partition::Bipartition;
use crate::symbol::{upsilon, upsilon_inverse};

/// Where a bijection should land: a concrete charge, or one of the two
/// asymptotic orders with parameters `(v0, v1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChargeTarget {
    Exact(Charge),
    AsymptoticPlus(i64, i64),
    AsymptoticMinus(i64, i64),
}

impl ChargeTarget {
    /// The node order whose crystal this target labels.
    pub fn order(self) -> NodeOrder {
        match self {
            ChargeTarget::Exact(c) => NodeOrder::Uglov(c),
            ChargeTarget::AsymptoticPlus(v0, v1) => NodeOrder::AsymptoticPlus(v0, v1),
            ChargeTarget::AsymptoticMinus(v0, v1) => NodeOrder::AsymptoticMinus(v0, v1),
        }
    }

    pub fn from_order(order: NodeOrder) -> Self {
        match order {
            NodeOrder::Uglov(c) => ChargeTarget::Exact(c),
            NodeOrder::AsymptoticPlus(v0, v1) => ChargeTarget::AsymptoticPlus(v0, v1),
            NodeOrder::AsymptoticMinus(v0, v1) => ChargeTarget::AsymptoticMinus(v0, v1),
        }
    }

    fn is_asymptotic(self) -> bool {
        !matches!(self, ChargeTarget::Exact(_))
    }

    /// A concrete charge whose Uglov set of rank `n` coincides with this
    /// target. Exact targets return their own charge.
    pub fn concrete_charge(self, e: i64, n: usize) -> Charge {
        let n = n as i64;
        match self {
            ChargeTarget::Exact(c) => c,
            // need s1 - s0 > n - 1
            ChargeTarget::AsymptoticMinus(v0, v1) => {
                let k = div_ceil(n - (v1 - v0), e);
                Charge::new(v0, v1 + k * e)
            }
            // need s0 - s1 > n - 1 - e
            ChargeTarget::AsymptoticPlus(v0, v1) => {
                let k = div_ceil(n - e - (v0 - v1), e);
                Charge::new(v0 + k * e, v1)
            }
        }
    }

    /// Whether `charge` is past the stabilisation threshold for rank `n`.
    pub fn is_stable_at(self, charge: Charge, e: i64, n: usize) -> bool {
        let n = n as i64;
        match self {
            ChargeTarget::Exact(c) => c == charge,
            ChargeTarget::AsymptoticMinus(..) => charge.s1 - charge.s0 > n - 1,
            ChargeTarget::AsymptoticPlus(..) => charge.s0 - charge.s1 > n - 1 - e,
        }
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl fmt::Display for ChargeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.order().fmt(f)
    }
}

impl FromStr for ChargeTarget {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Ok(ChargeTarget::from_order(text.parse()?))
    }
}

impl Serialize for ChargeTarget {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChargeTarget {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// One atomic move of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// `(s0, s1) -> (s0 + t*e, s1 + t*e)`; the map is the identity.
    Shift { t: i64 },
    /// `(s0, s1) -> (s1, s0 + e)`; the map swaps the components.
    Swap,
    /// `(s0, s1) -> (s0, s1 + e)` via Υ; needs `0 <= s0 <= s1`.
    Upsilon,
    /// `(s0, s1) -> (s0, s1 - e)` via Υ⁻¹; needs `0 <= s0 <= s1 - e`.
    UpsilonInverse,
    /// Identity; marks that the charge is past the asymptotic threshold.
    Stabilize,
}

impl Step {
    /// The charge after this step, or an error if the step does not apply.
    pub fn next_charge(self, charge: Charge, e: i64) -> Result<Charge> {
        let Charge { s0, s1 } = charge;
        let bad = |why: &str| Err(Error::BadPlan(format!("{self:?} at charge ({charge}): {why}")));
        match self {
            Step::Shift { t } => match t.checked_mul(e).and_then(|d| Some((s0.checked_add(d)?, s1.checked_add(d)?))) {
                Some((a, b)) => Ok(Charge::new(a, b)),
                None => bad("overflow"),
            },
            Step::Swap => s0.checked_add(e).map(|b| Charge::new(s1, b)).map_or_else(|| bad("overflow"), Ok),
            Step::Upsilon if 0 <= s0 && s0 <= s1 => {
                s1.checked_add(e).map(|b| Charge::new(s0, b)).map_or_else(|| bad("overflow"), Ok)
            }
            Step::Upsilon => bad("needs 0 <= s0 <= s1"),
            Step::UpsilonInverse if 0 <= s0 && s1.checked_sub(e).is_some_and(|b| s0 <= b) => Ok(Charge::new(s0, s1 - e)),
            Step::UpsilonInverse => bad("needs 0 <= s0 <= s1 - e"),
            Step::Stabilize => Ok(charge),
        }
    }

    /// Applies the step to `lambda` at `charge`, returning the image and the
    /// new charge.
    pub fn apply(self, lambda: &Bipartition, charge: Charge, e: i64) -> Result<(Bipartition, Charge)> {
        let next = self.next_charge(charge, e)?;
        let image = match self {
            Step::Shift { .. } | Step::Stabilize => lambda.clone(),
            Step::Swap => lambda.swapped(),
            Step::Upsilon => upsilon(lambda, charge)?,
            Step::UpsilonInverse => upsilon_inverse(lambda, next)?,
        };
        Ok((image, next))
    }

    fn inverse(self) -> Vec<Step> {
        match self {
            Step::Shift { t } => vec![Step::Shift { t: -t }],
            Step::Swap => vec![Step::Swap, Step::Shift { t: -1 }],
            Step::Upsilon => vec![Step::UpsilonInverse],
            Step::UpsilonInverse => vec![Step::Upsilon],
            Step::Stabilize => vec![],
        }
    }
}

/// How [`plan_with`] searches for a step sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PlanStrategy {
    /// Move both charges into the window `0 <= s0 <= s1 < e` and join the
    /// two paths there.
    #[default]
    Window,
    /// Breadth-first search for a shortest sequence, trying swaps first.
    Shortest,
}

/// An auditable sequence of moves from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiPlan {
    pub e: i64,
    pub source: Charge,
    pub target: ChargeTarget,
    /// The rank the asymptotic threshold was computed for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub steps: Vec<Step>,
}

impl PsiPlan {
    /// The charges visited, starting with `source`.
    pub fn charges(&self) -> Result<Vec<Charge>> {
        let mut out = vec![self.source];
        for step in &self.steps {
            let last = *out.last().expect("nonempty");
            out.push(step.next_charge(last, self.e)?);
        }
        Ok(out)
    }

    /// Replays the charges and checks that they end on the target.
    pub fn validate(&self) -> Result<()> {
        Modulus::finite(self.e)?;
        check_size(self.e, self.source)?;
        if self.e > MAX_MODULUS || self.rank.is_some_and(|n| n > MAX_RANK) {
            return Err(Error::BadPlan("modulus or rank out of range".into()));
        }
        let end = *self.charges()?.last().expect("nonempty");
        match self.target {
            ChargeTarget::Exact(c) if c == end => Ok(()),
            ChargeTarget::Exact(c) => Err(Error::BadPlan(format!("plan ends at ({end}), not ({c})"))),
            target => {
                let Some(n) = self.rank else {
                    return Err(Error::BadPlan("asymptotic plan without a rank".into()));
                };
                if self.steps.last() != Some(&Step::Stabilize) {
                    return Err(Error::BadPlan("asymptotic plan must end with stabilize".into()));
                }
                if !congruent(self.e, end, target.concrete_charge(self.e, n)) {
                    return Err(Error::BadPlan(format!("plan ends at ({end}), not congruent to {target}")));
                }
                if target.is_stable_at(end, self.e, n) {
                    Ok(())
                } else {
                    Err(Error::BadPlan(format!("({end}) is not past the threshold of {target} for rank {n}")))
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plans always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: PsiPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }
}

const MAX_MODULUS: i64 = 1 << 20;
const MAX_RANK: usize = 1 << 20;
const MAX_CHARGE: i64 = 1 << 40;
// Bound on |s1 - s0| / e; each unit costs one ladder step.
const MAX_LADDER: i64 = 1 << 12;

fn check_size(e: i64, charge: Charge) -> Result<()> {
    if charge.s0.abs() > MAX_CHARGE || charge.s1.abs() > MAX_CHARGE {
        return Err(Error::BadPlan(format!("charge ({charge}) is out of range")));
    }
    if (charge.s1 - charge.s0).abs() / e > MAX_LADDER {
        return Err(Error::BadPlan(format!("charge ({charge}) is too far from the window for e = {e}")));
    }
    Ok(())
}

/// `{s0, s1}` and `{t0, t1}` agree modulo `e` as multisets.
pub fn congruent(e: i64, a: Charge, b: Charge) -> bool {
    let sorted = |c: Charge| {
        let (x, y) = (c.s0.rem_euclid(e), c.s1.rem_euclid(e));
        (x.min(y), x.max(y))
    };
    sorted(a) == sorted(b)
}

// Moves `charge` into the window 0 <= s0 <= s1 < e.
fn normalize(charge: Charge, e: i64) -> (Vec<Step>, Charge) {
    let mut steps = Vec::new();
    let mut c = charge;
    loop {
        let t = -c.s0.div_euclid(e);
        if t != 0 {
            steps.push(Step::Shift { t });
            c = c.shifted(t, e);
        }
        let step = match c.s1 - c.s0 {
            d if d < 0 => Step::Swap,
            d if d >= e => Step::UpsilonInverse,
            _ if c.s1 >= e => Step::Swap,
            _ => return (steps, c),
        };
        c = step.next_charge(c, e).expect("normalisation steps always apply");
        steps.push(step);
    }
}

fn simplify(steps: Vec<Step>) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(steps.len());
    for step in steps {
        match (out.last().copied(), step) {
            (_, Step::Shift { t: 0 }) => {}
            (Some(Step::Shift { t: a }), Step::Shift { t: b }) => {
                out.pop();
                if a + b != 0 {
                    out.push(Step::Shift { t: a + b });
                }
            }
            (Some(Step::Upsilon), Step::UpsilonInverse) | (Some(Step::UpsilonInverse), Step::Upsilon) => {
                out.pop();
            }
            (Some(Step::Swap), Step::Swap) => {
                out.pop();
                out.push(Step::Shift { t: 1 });
            }
            _ => out.push(step),
        }
    }
    out
}

/// A plan with the default strategy.
pub fn plan(e: i64, source: Charge, target: ChargeTarget, n: Option<usize>) -> Result<PsiPlan> {
    plan_with(PlanStrategy::default(), e, source, target, n)
}

/// Builds a step sequence taking the Uglov set of `source` to that of
/// `target`. Asymptotic targets need the rank `n`.
pub fn plan_with(strategy: PlanStrategy, e: i64, source: Charge, target: ChargeTarget, n: Option<usize>) -> Result<PsiPlan> {
    let modulus = Modulus::finite(e)?;
    target.order().validate(modulus)?;
    if target.is_asymptotic() && n.is_none() {
        return Err(Error::BadPlan(format!("target {target} needs a rank")));
    }
    if e > MAX_MODULUS || n.is_some_and(|n| n > MAX_RANK) {
        return Err(Error::BadPlan("modulus or rank out of range".into()));
    }
    check_size(e, source)?;
    if let ChargeTarget::Exact(c) = target {
        check_size(e, c)?;
    }
    let end = target.concrete_charge(e, n.unwrap_or(0));
    if !congruent(e, source, end) {
        return Err(Error::Incongruent { source_charge: source.to_string(), target: target.to_string(), e });
    }
    let mut steps = match strategy {
        PlanStrategy::Window => {
            let (mut forward, _) = normalize(source, e);
            let (back, _) = normalize(end, e);
            forward.extend(back.into_iter().rev().flat_map(Step::inverse));
            simplify(forward)
        }
        PlanStrategy::Shortest => shortest_path(e, source, end)?,
    };
    if target.is_asymptotic() {
        steps.push(Step::Stabilize);
    }
    let plan = PsiPlan { e, source, target, rank: if target.is_asymptotic() { n } else { None }, steps };
    plan.validate()?;
    Ok(plan)
}

fn shortest_path(e: i64, source: Charge, end: Charge) -> Result<Vec<Step>> {
    const MOVES: [&[Step]; 6] = [
        &[Step::Swap],
        &[Step::Swap, Step::Shift { t: -1 }],
        &[Step::Upsilon],
        &[Step::UpsilonInverse],
        &[Step::Shift { t: 1 }],
        &[Step::Shift { t: -1 }],
    ];
    let bound = [source.s0, source.s1, end.s0, end.s1].iter().map(|s| s.abs()).max().unwrap_or(0) + 3 * e;
    let in_box = |c: Charge| c.s0.abs() <= bound && c.s1.abs() <= bound;
    let mut parent: HashMap<Charge, (Charge, usize)> = HashMap::new();
    let mut queue = VecDeque::from([source]);
    parent.insert(source, (source, usize::MAX));
    while let Some(c) = queue.pop_front() {
        if c == end {
            let mut moves = Vec::new();
            let mut cur = c;
            while cur != source {
                let (prev, m) = parent[&cur];
                moves.push(m);
                cur = prev;
            }
            let steps = moves.into_iter().rev().flat_map(|m| MOVES[m].iter().copied()).collect();
            return Ok(simplify(steps));
        }
        for (m, seq) in MOVES.iter().enumerate() {
            let next = seq.iter().try_fold(c, |acc, s| s.next_charge(acc, e));
            if let Ok(next) = next {
                if in_box(next) && !parent.contains_key(&next) {
                    parent.insert(next, (c, m));
                    queue.push_back(next);
                }
            }
        }
    }
    Err(Error::BadPlan(format!("no path from ({source}) to ({end})")))
}

/// Runs `plan` on `lambda`, which must lie in the Uglov set of the source.
pub fn execute(plan: &PsiPlan, lambda: &Bipartition) -> Result<Bipartition> {
    let mut current = lambda.clone();
    let mut charge = plan.source;
    for step in &plan.steps {
        (current, charge) = step.apply(&current, charge, plan.e)?;
    }
    Ok(current)
}

/// The crystal isomorphism from the Uglov set of `source` to that of
/// `target`, built from a plan.
pub fn psi(lambda: &Bipartition, e: i64, source: Charge, target: ChargeTarget) -> Result<Bipartition> {
    let modulus = Modulus::finite(e)?;
    if !is_uglov(lambda, modulus, NodeOrder::Uglov(source)) {
        return Err(Error::NotMember { bipartition: lambda.clone(), order: source.to_string() });
    }
    let plan = plan(e, source, target, Some(lambda.rank()))?;
    execute(&plan, lambda)
}

/// The crystal isomorphism computed directly: strip good nodes down to
/// `(∅, ∅)` under `from`, then add them back in reverse under `to`.
pub fn psi_recursive(lambda: &Bipartition, e: Modulus, from: NodeOrder, to: NodeOrder) -> Result<Bipartition> {
    psi_recursive_with(StripOrder::default(), lambda, e, from, to)
}

pub fn psi_recursive_with(
    strip: StripOrder,
    lambda: &Bipartition,
    e: Modulus,
    from: NodeOrder,
    to: NodeOrder,
) -> Result<Bipartition> {
    from.validate(e)?;
    to.validate(e)?;
    let isomorphic = match e {
        Modulus::Finite(m) => congruent(m, from.charge(), to.charge()),
        Modulus::Infinite => from.charge() == to.charge(),
    };
    if !isomorphic {
        return Err(Error::NotIsomorphic(from.to_string(), to.to_string()));
    }
    let labels = unwind(lambda, e, from, strip)
        .ok_or_else(|| Error::NotMember { bipartition: lambda.clone(), order: from.to_string() })?;
    labels.iter().rev().try_fold(Bipartition::empty(), |current, &i| {
        raise(&current, i, to).ok_or_else(|| Error::NotIsomorphic(from.to_string(), to.to_string()))
    })
}
