//! Exact rational surgery slopes and their Farey-parent decomposition.
//!
//! A [`Slope`] is a fraction p/q in least terms with q >= 0. The denominator
//! q = 0 encodes the infinity slope (the unsurgered three-sphere), whose
//! unique representative is 1/0. The numerator carries the first homology of
//! the surgered manifold: |H_1| = |p|, with p = 0 standing for infinite H_1.
//!
//! Every slope of denominator q >= 2 splits into a coprime triple of parents
//! (a,b), (c,d) and an excess pair (e,f) satisfying
//!
//! ```text
//! qc - pd = bc - ad = pb - qa = 1,   (p,q) = (a,b) + (c,d),
//! ```
//!
//! the bookkeeping that drives the rational surgery induction. The parents
//! are computed directly by the extended Euclidean algorithm: (c,d) is the
//! unique solution of qc - pd = 1 with 0 < d < q.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced rational surgery coefficient p/q with q >= 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Normalizes (p, q) to the unique reduced representative with q >= 0.
    /// Any (p, 0) with p != 0 collapses to the infinity slope 1/0.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("0/0 is not a slope".into()));
        }
        if q == 0 {
            return Ok(Slope { p: 1, q: 0 });
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Slope { p: n, q: 1 }
    }

    pub fn infinity() -> Self {
        Slope { p: 1, q: 0 }
    }

    pub fn numerator(&self) -> i64 {
        self.p
    }

    pub fn denominator(&self) -> i64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.q == 1).then_some(self.p)
    }

    /// |H_1| of the surgered manifold; 0 encodes the infinite H_1 of the
    /// zero surgery, and the infinity slope gives 1 (the three-sphere).
    pub fn h1_order(&self) -> u64 {
        self.p.unsigned_abs()
    }

    /// The slope -p/q; infinity is its own mirror.
    pub fn mirror(&self) -> Slope {
        if self.q == 0 {
            *self
        } else {
            Slope { p: -self.p, q: self.q }
        }
    }

    /// True exactly when H_1(Y; F_2) != 0, i.e. the numerator is even
    /// (including p = 0).
    pub fn admits_nontrivial_bundle(&self) -> bool {
        self.p % 2 == 0
    }

    /// The mod-2 bundle classes available on this surgery.
    pub fn bundle_classes(&self) -> &'static [BundleClass] {
        if self.admits_nontrivial_bundle() {
            &[BundleClass::Trivial, BundleClass::Nontrivial]
        } else {
            &[BundleClass::Trivial]
        }
    }

    /// Compares p/q with the integer m. Infinity compares greater than
    /// every integer.
    pub fn cmp_int(&self, m: i64) -> Ordering {
        if self.q == 0 {
            return Ordering::Greater;
        }
        (self.p as i128).cmp(&(m as i128 * self.q as i128))
    }

    /// Compares |p/q| with the nonnegative integer m. Infinity compares
    /// greater than everything.
    pub fn abs_cmp_int(&self, m: u64) -> Ordering {
        if self.q == 0 {
            return Ordering::Greater;
        }
        (self.p.unsigned_abs() as u128).cmp(&(m as u128 * self.q as u128))
    }

    /// Sign of the slope: -1, 0 or 1. Infinity reports 1.
    pub fn signum(&self) -> i64 {
        if self.q == 0 {
            1
        } else {
            self.p.signum()
        }
    }

    /// The coprime-parent decomposition. Requires q >= 2: integer slopes
    /// and infinity have no triple.
    pub fn farey_triple(&self) -> Result<SlopeTriple> {
        let (p, q) = (self.p, self.q);
        if q < 2 {
            return Err(Error::IntegerSlope(*self));
        }
        // pd = -1 mod q has the unique solution 0 < d < q; then c is forced.
        let pm = p.rem_euclid(q);
        debug_assert!(pm != 0, "reduced slope with q >= 2 has p invertible mod q");
        let inv = mod_inverse(pm, q);
        let d = q - inv;
        let c = ((1 + p as i128 * d as i128) / q as i128) as i64;
        let (a, b) = (p - c, q - d);
        let excess = match b.cmp(&d) {
            Ordering::Equal => (1, 0),
            Ordering::Less => (c - a, d - b),
            Ordering::Greater => (a - c, b - d),
        };
        let triple = SlopeTriple { target: *self, left: (a, b), right: (c, d), excess };
        debug_assert!(triple.verify());
        Ok(triple)
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    /// Orders by rational value, with infinity greater than every finite
    /// slope.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
            }
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "inf")
        } else if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Slope({self})")
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts "p/q", a bare integer "n", or "inf".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::infinity());
        }
        let bad = || Error::InvalidSlope(format!("cannot parse '{s}' as p/q, an integer, or inf"));
        match s.split_once('/') {
            Some((num, den)) => {
                let p: i64 = num.trim().parse().map_err(|_| bad())?;
                let q: i64 = den.trim().parse().map_err(|_| bad())?;
                Slope::new(p, q)
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(Slope::integer(n))
            }
        }
    }
}

impl TryFrom<String> for Slope {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

/// The mod-2 bundle datum on a surgered manifold. The nontrivial class
/// exists only when the slope numerator is even.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleClass {
    Trivial,
    Nontrivial,
}

impl BundleClass {
    pub fn is_admissible_on(self, s: Slope) -> bool {
        self == BundleClass::Trivial || s.admits_nontrivial_bundle()
    }

    /// The nontrivial class on `s`, rejecting odd numerators.
    pub fn nontrivial_on(s: Slope) -> Result<Self> {
        if s.admits_nontrivial_bundle() {
            Ok(BundleClass::Nontrivial)
        } else {
            Err(Error::InvalidBundle(s))
        }
    }
}

impl fmt::Display for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleClass::Trivial => write!(f, "trivial"),
            BundleClass::Nontrivial => write!(f, "nontrivial"),
        }
    }
}

impl FromStr for BundleClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" | "0" => Ok(BundleClass::Trivial),
            "nontrivial" | "1" => Ok(BundleClass::Nontrivial),
            other => Err(Error::InvalidSlope(format!(
                "bundle class must be 'trivial' or 'nontrivial', got '{other}'"
            ))),
        }
    }
}

/// The coprime triple attached to a slope of denominator >= 2: parents
/// left = (a,b) and right = (c,d) with (p,q) = (a,b) + (c,d), plus the
/// excess pair (e,f).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlopeTriple {
    pub target: Slope,
    pub left: (i64, i64),
    pub right: (i64, i64),
    pub excess: (i64, i64),
}

impl SlopeTriple {
    pub fn left_slope(&self) -> Slope {
        Slope { p: self.left.0, q: self.left.1 }
    }

    pub fn right_slope(&self) -> Slope {
        Slope { p: self.right.0, q: self.right.1 }
    }

    pub fn excess_slope(&self) -> Slope {
        // (e,f) is coprime with f >= 0, and (1,0) is already canonical.
        Slope { p: self.excess.0, q: self.excess.1 }
    }

    /// Checks every defining identity exactly (in 128-bit arithmetic).
    pub fn verify(&self) -> bool {
        let (p, q) = (self.target.p as i128, self.target.q as i128);
        let (a, b) = (self.left.0 as i128, self.left.1 as i128);
        let (c, d) = (self.right.0 as i128, self.right.1 as i128);
        let (e, f) = (self.excess.0 as i128, self.excess.1 as i128);

        if q * c - p * d != 1 || b * c - a * d != 1 || p * b - q * a != 1 {
            return false;
        }
        if b <= 0 || d <= 0 || f < 0 || (f == 0 && e != 1) {
            return false;
        }
        if (a + c, b + d) != (p, q) {
            return false;
        }
        let excess_ok = match b.cmp(&d) {
            Ordering::Equal => b == 1 && d == 1 && (e, f) == (1, 0),
            Ordering::Less => (e, f) == (c - a, d - b),
            Ordering::Greater => (e, f) == (a - c, b - d),
        };
        if !excess_ok {
            return false;
        }
        // All finite corners live in the integer interval around p/q.
        let n = self.target.p.div_euclid(self.target.q) as i128;
        let inside = |x: i128, y: i128| n * y <= x && x <= (n + 1) * y;
        inside(a, b) && inside(c, d) && (f == 0 || inside(e, f))
    }
}

/// All reduced slopes p/q with |p| <= pmax and qlo <= q <= qhi, ordered by
/// (q, p). Includes p = 0 only when q = 1.
pub fn reduced_slopes(pmax: i64, qlo: i64, qhi: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in qlo.max(1)..=qhi {
        for p in -pmax..=pmax {
            if (p != 0 || q == 1) && gcd(p.unsigned_abs(), q.unsigned_abs()) == 1 {
                out.push(Slope { p, q });
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of a modulo m, for 0 < a < m coprime to m; the result lies in
/// 1..m.
fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}
