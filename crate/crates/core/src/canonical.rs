//! Canonical basis elements of level-two sl_∞ modules, obtained by
//! permuting subsets of the θ-pairs of a symbol.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::Charge;
use crate::partition::Bipartition;
use crate::symbol::{from_symbol, swap_pairs, theta, to_symbol};

/// Above this many pairs the orbit is not enumerated.
pub const MAX_PAIRS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub bipartition: Bipartition,
    pub degree: usize,
}

/// `b(head) = sum of v^degree * bipartition` over the terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct CanonicalElement {
    pub head: Bipartition,
    pub terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawElement {
    head: Bipartition,
    terms: Vec<Term>,
}

impl TryFrom<RawElement> for CanonicalElement {
    type Error = Error;

    fn try_from(raw: RawElement) -> Result<Self> {
        let element = CanonicalElement { head: raw.head, terms: raw.terms };
        element.validate()?;
        Ok(element)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl CanonicalElement {
    /// The number of pairs, i.e. the largest degree.
    pub fn pairs(&self) -> usize {
        self.terms.iter().map(|t| t.degree).max().unwrap_or(0)
    }

    /// Structural checks: a single degree-0 term equal to the head, distinct
    /// terms of equal rank, and `C(p, k)` terms of each degree `k`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Json(format!("canonical element: {msg}")));
        let p = self.pairs();
        if p > MAX_PAIRS {
            return Err(Error::TooManyPairs { pairs: p, limit: MAX_PAIRS });
        }
        let heads: Vec<_> = self.terms.iter().filter(|t| t.degree == 0).collect();
        if heads.len() != 1 || heads[0].bipartition != self.head {
            return bad("exactly one degree-0 term, equal to the head, is required");
        }
        let distinct: BTreeSet<_> = self.terms.iter().map(|t| &t.bipartition).collect();
        if distinct.len() != self.terms.len() {
            return bad("repeated term");
        }
        if self.terms.iter().any(|t| t.bipartition.rank() != self.head.rank()) {
            return bad("terms of different rank");
        }
        for k in 0..=p {
            let count = self.terms.iter().filter(|t| t.degree == k).count();
            if count != binomial(p, k) {
                return bad("degree counts are not binomial");
            }
        }
        Ok(())
    }

    /// The unique term of largest degree.
    pub fn top_term(&self) -> Result<&Bipartition> {
        let p = self.pairs();
        let top: Vec<_> = self.terms.iter().filter(|t| t.degree == p).collect();
        match top.as_slice() {
            [only] => Ok(&only.bipartition),
            _ => Err(Error::NonUniqueMaximum { degree: p, count: top.len() }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("canonical elements always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for CanonicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b =")?;
        for (k, term) in self.terms.iter().enumerate() {
            let sep = if k == 0 { " " } else { " + " };
            match term.degree {
                0 => write!(f, "{sep}{}", term.bipartition)?,
                1 => write!(f, "{sep}v·{}", term.bipartition)?,
                d => write!(f, "{sep}v^{d}·{}", term.bipartition)?,
            }
        }
        Ok(())
    }
}

/// `λ0_i >= λ1_{i + s1 - s0}` for all `i >= 1`. Charges with `s0 > s1`
/// are outside the range of the criterion and give `false`.
pub fn is_sl_infinity_member(lambda: &Bipartition, charge: Charge) -> bool {
    let Ok(d) = usize::try_from(charge.s1 - charge.s0) else {
        return false;
    };
    (1..=lambda.second().rows().saturating_sub(d)).all(|i| lambda.first().part(i) >= lambda.second().part(i + d))
}

/// Every bipartition reached by swapping a subset of the θ-pairs of the
/// symbol of `lambda`, with the subset size as degree.
pub fn pair_orbit(lambda: &Bipartition, charge: Charge) -> Result<CanonicalElement> {
    let symbol = to_symbol(lambda, charge, None)?;
    if !is_sl_infinity_member(lambda, charge) {
        return Err(Error::NotSlInfinityMember(lambda.clone()));
    }
    let pairs = theta(&symbol)?.pairs;
    if pairs.len() > MAX_PAIRS {
        return Err(Error::TooManyPairs { pairs: pairs.len(), limit: MAX_PAIRS });
    }
    let mut terms = (0u32..1 << pairs.len())
        .map(|mask| {
            let chosen: Vec<_> = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
            let mu = from_symbol(&swap_pairs(&symbol, &chosen)?)?;
            Ok(Term { bipartition: mu, degree: chosen.len() })
        })
        .collect::<Result<Vec<_>>>()?;
    terms.sort_by(|a, b| (a.degree, &a.bipartition).cmp(&(b.degree, &b.bipartition)));
    Ok(CanonicalElement { head: lambda.clone(), terms })
}

/// The term of largest degree in [`pair_orbit`].
pub fn degree_max_term(lambda: &Bipartition, charge: Charge) -> Result<Bipartition> {
    pair_orbit(lambda, charge)?.top_term().cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(text: &str) -> Bipartition {
        text.parse().unwrap()
    }

    #[test]
    fn membership() {
        assert!(is_sl_infinity_member(&bp("[8|4]"), Charge::new(0, 1)));
        assert!(!is_sl_infinity_member(&bp("[-|1]"), Charge::new(0, 0)));
        assert!(is_sl_infinity_member(&bp("[3,1|-]"), Charge::new(2, 2)));
        assert!(!is_sl_infinity_member(&bp("[1|1,1,1]"), Charge::new(0, 1)));
        assert!(is_sl_infinity_member(&bp("[1|1,1]"), Charge::new(0, 1)));
        assert!(!is_sl_infinity_member(&bp("[1|-]"), Charge::new(1, 0)));
    }

    #[test]
    fn orbit_fixtures() {
        let b = pair_orbit(&bp("[8|4]"), Charge::new(0, 1)).unwrap();
        assert_eq!(b.terms.len(), 2);
        assert_eq!(b.to_string(), "b = [8|4] + v·[5|7]");

        let b = pair_orbit(&bp("[2,2,1|3,2]"), Charge::new(0, 2)).unwrap();
        let degrees: Vec<_> = b.terms.iter().map(|t| t.degree).collect();
        assert_eq!(degrees, vec![0, 1, 1, 2]);
        assert_eq!(b.top_term().unwrap(), &bp("[-|3,2,2,2,1]"));
        assert!(b.to_string().ends_with("+ v^2·[-|3,2,2,2,1]"));
        b.validate().unwrap();

        let b = pair_orbit(&bp("[3,1|3,1]"), Charge::new(1, 1)).unwrap();
        assert_eq!(b.terms, vec![Term { bipartition: bp("[3,1|3,1]"), degree: 0 }]);
    }

    #[test]
    fn degree_max_fixtures() {
        assert_eq!(degree_max_term(&bp("[8|4]"), Charge::new(0, 1)).unwrap(), bp("[5|7]"));
        assert_eq!(degree_max_term(&bp("[2,2,1|3,2]"), Charge::new(0, 2)).unwrap(), bp("[-|3,2,2,2,1]"));
        assert_eq!(degree_max_term(&bp("[4|7,1]"), Charge::new(0, 9)).unwrap(), bp("[4|7,1]"));
    }

    #[test]
    fn orbit_errors() {
        assert!(matches!(pair_orbit(&bp("[-|1]"), Charge::new(0, 0)), Err(Error::NotSlInfinityMember(_))));
        assert!(matches!(pair_orbit(&bp("[1|-]"), Charge::new(1, 0)), Err(Error::ChargeWindow { .. })));
        // every row of a 21x21 square lands above the top row
        let wide = Bipartition::from_parts(vec![21; 21], vec![]).unwrap();
        assert!(matches!(pair_orbit(&wide, Charge::new(0, 0)), Err(Error::TooManyPairs { pairs: 21, .. })));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let b = pair_orbit(&bp("[2,2,1|3,2]"), Charge::new(0, 2)).unwrap();
        let text = b.to_json();
        assert!(text.starts_with(r#"{"head":"[2,2,1|3,2]","terms":[{"bipartition":"[2,2,1|3,2]","degree":0}"#));
        assert_eq!(CanonicalElement::from_json(&text).unwrap(), b);
        let dup = r#"{"head":"[1|-]","terms":[{"bipartition":"[1|-]","degree":0},{"bipartition":"[1|-]","degree":1}]}"#;
        assert!(CanonicalElement::from_json(dup).is_err());
        let no_head = r#"{"head":"[1|-]","terms":[{"bipartition":"[-|1]","degree":0}]}"#;
        assert!(CanonicalElement::from_json(no_head).is_err());
        let uneven = r#"{"head":"[2|-]","terms":[{"bipartition":"[2|-]","degree":0},{"bipartition":"[-|2]","degree":2}]}"#;
        assert!(CanonicalElement::from_json(uneven).is_err());
    }
}
