//! Charged symbols of bipartitions, the pairings θ and τ, and the map Υ
//! that swaps the pairs of a symbol, together with its inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::Charge;
use crate::partition::{Bipartition, Partition};

// Bound on symbol entries accepted from outside; keeps decoding in range.
const MAX_ENTRY: i64 = 1 << 40;
const MAX_ROW: i64 = 1 << 24;

/// Two rows of beta-numbers. `top` is the row of component 1 (length
/// `m + s1`), `bottom` the row of component 0 (length `m + s0`); both are
/// stored strictly decreasing, so index 0 holds `β_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSymbol")]
pub struct Symbol {
    charge: Charge,
    m: usize,
    top: Vec<i64>,
    bottom: Vec<i64>,
}

#[derive(Deserialize)]
struct RawSymbol {
    charge: Charge,
    m: usize,
    top: Vec<i64>,
    bottom: Vec<i64>,
}

impl TryFrom<RawSymbol> for Symbol {
    type Error = Error;

    fn try_from(raw: RawSymbol) -> Result<Self> {
        Symbol::new(raw.charge, raw.m, raw.top, raw.bottom)
    }
}

fn check_charge(charge: Charge) -> Result<()> {
    if 0 <= charge.s0 && charge.s0 <= charge.s1 {
        Ok(())
    } else {
        Err(Error::ChargeWindow { s0: charge.s0, s1: charge.s1, window: "0 <= s0 <= s1" })
    }
}

fn check_row(row: &[i64], expected_len: i64, name: &str) -> Result<()> {
    let bad = |msg: String| Err(Error::MalformedSymbol(msg));
    if expected_len > MAX_ROW {
        return bad(format!("{name} row would have {expected_len} entries; the limit is {MAX_ROW}"));
    }
    if row.len() as i64 != expected_len {
        return bad(format!("{name} row has length {}, expected {expected_len}", row.len()));
    }
    if row.windows(2).any(|w| w[0] <= w[1]) {
        return bad(format!("{name} row is not strictly decreasing"));
    }
    if row.iter().any(|&x| !(0..=MAX_ENTRY).contains(&x)) {
        return bad(format!("{name} row has an entry outside [0, {MAX_ENTRY}]"));
    }
    // m > r - s forces the last beta-number to be 0
    if row.last().is_some_and(|&x| x != 0) {
        return bad(format!("{name} row does not end in 0; the padding m is too small"));
    }
    Ok(())
}

impl Symbol {
    /// Validates and builds a symbol. Rows must be strictly decreasing.
    pub fn new(charge: Charge, m: usize, top: Vec<i64>, bottom: Vec<i64>) -> Result<Self> {
        check_charge(charge)?;
        let m_i = i64::try_from(m).map_err(|_| Error::MalformedSymbol("m is too large".into()))?;
        check_row(&top, m_i.saturating_add(charge.s1), "top")?;
        check_row(&bottom, m_i.saturating_add(charge.s0), "bottom")?;
        Ok(Self { charge, m, top, bottom })
    }

    pub fn charge(&self) -> Charge {
        self.charge
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The component-1 row, `β^{(1)}_1 > β^{(1)}_2 > ...`.
    pub fn top(&self) -> &[i64] {
        &self.top
    }

    /// The component-0 row, `β^{(0)}_1 > β^{(0)}_2 > ...`.
    pub fn bottom(&self) -> &[i64] {
        &self.bottom
    }

    /// With both rows written in ascending order and aligned on the
    /// left, every top entry is at most the bottom entry below it.
    pub fn is_standard(&self) -> bool {
        self.first_unstandard_index().is_none()
    }

    // 1-based index into the bottom row of the first violation
    fn first_unstandard_index(&self) -> Option<usize> {
        let len = self.bottom.len();
        self.bottom
            .iter()
            .rev()
            .zip(self.top.iter().rev())
            .position(|(b, t)| t > b)
            .map(|k| len - k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbols always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Two lines, top row first, each row ascending.
impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |row: &[i64]| row.iter().rev().map(i64::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", line(&self.top))?;
        write!(f, "{}", line(&self.bottom))
    }
}

/// The least admissible padding, `max(1, r0 - s0 + 1, r1 - s1 + 1)`.
pub fn canonical_m(lambda: &Bipartition, charge: Charge) -> usize {
    let bound = padding_bound(lambda, charge);
    (bound + 1).max(1) as usize
}

fn padding_bound(lambda: &Bipartition, charge: Charge) -> i64 {
    let r0 = lambda.first().rows() as i64 - charge.s0;
    let r1 = lambda.second().rows() as i64 - charge.s1;
    r0.max(r1)
}

fn beta_row(p: &Partition, len: i64, shift: i64) -> Vec<i64> {
    (1..=len).map(|j| p.part(j as usize) as i64 - j + shift).collect()
}

/// The charged symbol of `lambda`: `β^{(c)}_j = λ^{(c)}_j - j + s_c + m`.
pub fn to_symbol(lambda: &Bipartition, charge: Charge, m: Option<usize>) -> Result<Symbol> {
    check_charge(charge)?;
    let bound = padding_bound(lambda, charge);
    let m = m.unwrap_or_else(|| canonical_m(lambda, charge));
    let m_i = m as i64;
    if m_i <= bound {
        return Err(Error::PaddingTooSmall { m: m_i, bound });
    }
    if m_i.saturating_add(charge.s1) > MAX_ROW {
        return Err(Error::MalformedSymbol(format!("rows longer than {MAX_ROW} entries")));
    }
    let top = beta_row(lambda.second(), m_i + charge.s1, charge.s1 + m_i);
    let bottom = beta_row(lambda.first(), m_i + charge.s0, charge.s0 + m_i);
    Symbol::new(charge, m, top, bottom)
}

fn decode_row(row: &[i64], shift: i64) -> Result<Partition> {
    let parts = row
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let part = b + (k as i64 + 1) - shift;
            usize::try_from(part).map_err(|_| Error::MalformedSymbol(format!("row decodes to negative part {part}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts).map_err(|_| Error::MalformedSymbol("row decodes to an increasing sequence".into()))
}

/// Inverse of [`to_symbol`].
pub fn from_symbol(symbol: &Symbol) -> Result<Bipartition> {
    let m = symbol.m as i64;
    let first = decode_row(&symbol.bottom, symbol.charge.s0 + m)?;
    let second = decode_row(&symbol.top, symbol.charge.s1 + m)?;
    Ok(Bipartition::new(first, second))
}

/// An injection from the bottom row into the top row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Pairing {
    /// `(x, image of x)` for every bottom entry, bottom row order.
    pub map: Vec<(i64, i64)>,
    /// The non-fixed points of `map`.
    pub pairs: Vec<(i64, i64)>,
}

impl Pairing {
    fn from_images(bottom: &[i64], images: Vec<i64>) -> Self {
        let map: Vec<_> = bottom.iter().copied().zip(images).collect();
        let pairs = map.iter().copied().filter(|(x, y)| x != y).collect();
        Pairing { map, pairs }
    }

    pub fn image(&self, x: i64) -> Option<i64> {
        self.map.iter().find(|(b, _)| *b == x).map(|&(_, t)| t)
    }
}

/// θ: bottom entries from smallest to largest, each sent to the largest
/// unused top entry not exceeding it.
pub fn theta(symbol: &Symbol) -> Result<Pairing> {
    if let Some(index) = symbol.first_unstandard_index() {
        return Err(Error::NotStandard { index });
    }
    let mut used = vec![false; symbol.top.len()];
    let mut images = vec![0; symbol.bottom.len()];
    for (k, &x) in symbol.bottom.iter().enumerate().rev() {
        // top is decreasing, so the first fit is the largest
        let j = (0..symbol.top.len())
            .find(|&j| !used[j] && symbol.top[j] <= x)
            .ok_or(Error::NotStandard { index: k + 1 })?;
        used[j] = true;
        images[k] = symbol.top[j];
    }
    Ok(Pairing::from_images(&symbol.bottom, images))
}

/// τ: bottom entries from largest to smallest, each sent to the smallest
/// unused top entry not below it.
pub fn tau(symbol: &Symbol) -> Result<Pairing> {
    let mut used = vec![false; symbol.top.len()];
    let mut images = Vec::with_capacity(symbol.bottom.len());
    for &x in &symbol.bottom {
        let Some(j) = (0..symbol.top.len()).rev().find(|&j| !used[j] && symbol.top[j] >= x) else {
            return Err(Error::NotInImage(from_symbol(symbol)?));
        };
        used[j] = true;
        images.push(symbol.top[j]);
    }
    Ok(Pairing::from_images(&symbol.bottom, images))
}

/// Exchanges each `(bottom entry, top entry)` pair between the rows and
/// re-sorts them.
pub fn swap_pairs(symbol: &Symbol, pairs: &[(i64, i64)]) -> Result<Symbol> {
    let mut top = symbol.top.clone();
    let mut bottom = symbol.bottom.clone();
    for &(b, t) in pairs {
        let (Some(kb), Some(kt)) = (bottom.iter().position(|&x| x == b), top.iter().position(|&x| x == t)) else {
            return Err(Error::MalformedSymbol(format!("({b},{t}) is not a pair of the symbol")));
        };
        bottom[kb] = t;
        top[kt] = b;
    }
    top.sort_unstable_by(|a, b| b.cmp(a));
    bottom.sort_unstable_by(|a, b| b.cmp(a));
    Symbol::new(symbol.charge, symbol.m, top, bottom)
}

/// Υ with the canonical padding.
pub fn upsilon(lambda: &Bipartition, charge: Charge) -> Result<Bipartition> {
    upsilon_with_m(lambda, charge, None)
}

/// Υ: swap every θ-pair of the symbol and decode.
pub fn upsilon_with_m(lambda: &Bipartition, charge: Charge, m: Option<usize>) -> Result<Bipartition> {
    let symbol = to_symbol(lambda, charge, m)?;
    let pairing = theta(&symbol)?;
    from_symbol(&swap_pairs(&symbol, &pairing.pairs)?)
}

/// Υ⁻¹ with the canonical padding.
pub fn upsilon_inverse(mu: &Bipartition, charge: Charge) -> Result<Bipartition> {
    upsilon_inverse_with_m(mu, charge, None)
}

/// Υ⁻¹: swap every τ-pair of the symbol and decode.
pub fn upsilon_inverse_with_m(mu: &Bipartition, charge: Charge, m: Option<usize>) -> Result<Bipartition> {
    let symbol = to_symbol(mu, charge, m)?;
    let pairing = tau(&symbol)?;
    from_symbol(&swap_pairs(&symbol, &pairing.pairs)?).map_err(|_| Error::NotInImage(mu.clone()))
}
