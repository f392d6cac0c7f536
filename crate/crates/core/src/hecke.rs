//! Parameter arithmetic for Hecke algebras of type B_n with parameters
//! `Q = -ζ^b` and `q = ζ^a`, `ζ` a primitive `l`-th root of unity: the
//! quantum characteristic `e` and the charge of a canonical basic set.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::node::Charge;

/// At most this many solutions `d` are listed.
pub const MAX_LISTED: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeParams {
    pub a: i64,
    pub b: i64,
    pub l: i64,
    /// Multiplicative order of `ζ^a`.
    pub e: i64,
    /// Least `d` in `[0, l)` with `ζ^b = -ζ^(a*d)`.
    pub d: i64,
    /// The `p` with `d + p*e < b/a < d + (p+1)*e`.
    pub p: i64,
    /// `(d + p*e, 0)`; the same for every solution `d`.
    pub charge: Charge,
    /// Number of `d` in `[0, l)` solving the congruence.
    pub solution_count: i64,
    /// The first [`MAX_LISTED`] solutions, ascending.
    pub solutions: Vec<i64>,
}

/// Derives `(e, d, p)` and the charge `(d + p*e, 0)`.
pub fn basic_set_charge(a: i64, b: i64, l: i64) -> Result<HeckeParams> {
    for (name, value) in [("a", a), ("b", b), ("l", l)] {
        if value <= 0 {
            return Err(Error::NonPositive { name, value });
        }
    }
    if l % 2 != 0 {
        return Err(Error::OddL(l));
    }
    let g = a.gcd(&l);
    let e = l / g;
    if e == 1 {
        return Err(Error::TrivialE);
    }
    // a*d ≡ b - l/2 (mod l)
    let rhs = (b as i128 - (l / 2) as i128).rem_euclid(l as i128);
    if rhs % g as i128 != 0 {
        return Err(Error::NoSolution { l });
    }
    let a_red = (a / g) as i128 % e as i128;
    let inverse = a_red.extended_gcd(&(e as i128)).x.rem_euclid(e as i128);
    let d = ((rhs / g as i128) * inverse).rem_euclid(e as i128) as i64;

    // p*a*e < b - a*d < (p+1)*a*e
    let gap = b as i128 - a as i128 * d as i128;
    let step = a as i128 * e as i128;
    let (p, rest) = gap.div_mod_floor(&step);
    if rest == 0 {
        return Err(Error::OnWall { quotient: p as i64 });
    }
    let p = p as i64;
    let solutions = (0..g).map(|k| d + k * e).take(MAX_LISTED).collect();
    Ok(HeckeParams { a, b, l, e, d, p, charge: Charge::new(d + p * e, 0), solution_count: g, solutions })
}
