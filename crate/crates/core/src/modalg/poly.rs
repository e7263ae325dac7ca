//! Polynomials over the two-element field, stored as little-endian bit
//! sequences packed into 64-bit words. All arithmetic is schoolbook; the
//! degrees in play here are tiny.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Rem};
use std::str::FromStr;

use crate::error::{Error, Result};

/// An element of F2[x] in canonical form: no trailing zero words, so the
/// zero polynomial is the empty sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { words: vec![1] }
    }

    pub fn x() -> Self {
        Poly2 { words: vec![2] }
    }

    /// The monomial x^d.
    pub fn monomial(d: usize) -> Self {
        let mut words = vec![0u64; d / 64 + 1];
        words[d / 64] = 1 << (d % 64);
        Poly2 { words }
    }

    /// Builds a polynomial from the exponents with coefficient 1.
    pub fn from_support(exponents: &[usize]) -> Self {
        let mut p = Poly2::zero();
        for &d in exponents {
            p = p + Poly2::monomial(d);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - top.leading_zeros() as usize))
    }

    pub fn coeff(&self, d: usize) -> bool {
        self.words.get(d / 64).is_some_and(|w| w >> (d % 64) & 1 == 1)
    }

    /// The coefficient of x^0, i.e. the value at 0.
    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    /// Largest k with x^k dividing self; None for zero.
    pub fn x_valuation(&self) -> Option<usize> {
        for (i, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Exact division by x^k. Panics if x^k does not divide self.
    pub fn div_x_pow(&self, k: usize) -> Poly2 {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        assert!(self.x_valuation().is_some_and(|v| v >= k));
        self.shr_bits(k)
    }

    fn shl_bits(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (wshift, bshift) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + wshift + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + wshift] |= w << bshift;
            if bshift > 0 {
                words[i + wshift + 1] |= w >> (64 - bshift);
            }
        }
        Poly2 { words }.normalized()
    }

    fn shr_bits(&self, k: usize) -> Poly2 {
        let (wshift, bshift) = (k / 64, k % 64);
        if wshift >= self.words.len() {
            return Poly2::zero();
        }
        let mut words = vec![0u64; self.words.len() - wshift];
        for i in 0..words.len() {
            words[i] = self.words[i + wshift] >> bshift;
            if bshift > 0 && i + wshift + 1 < self.words.len() {
                words[i] |= self.words[i + wshift + 1] << (64 - bshift);
            }
        }
        Poly2 { words }.normalized()
    }

    fn normalized(mut self) -> Poly2 {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    /// Quotient and remainder with deg r < deg d. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly2) -> (Poly2, Poly2) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        let mut q = Poly2::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            q = q + Poly2::monomial(shift);
            r = r + d.shl_bits(shift);
        }
        (q, r)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    }

    /// Splits self = x^k * g with g(0) = 1. None for the zero polynomial.
    pub fn split_x_power(&self) -> Option<(usize, Poly2)> {
        let k = self.x_valuation()?;
        Some((k, self.shr_bits(k)))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (i, w) in short.words.iter().enumerate() {
            words[i] ^= w;
        }
        Poly2 { words }.normalized()
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut acc = Poly2::zero();
        for (i, &w) in self.words.iter().enumerate() {
            for b in 0..64 {
                if w >> b & 1 == 1 {
                    acc = &acc + &rhs.shl_bits(i * 64 + b);
                }
            }
        }
        acc
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

impl Rem for &Poly2 {
    type Output = Poly2;
    fn rem(self, rhs: &Poly2) -> Poly2 {
        self.div_rem(rhs).1
    }
}

impl Div for &Poly2 {
    type Output = Poly2;
    fn div(self, rhs: &Poly2) -> Poly2 {
        self.div_rem(rhs).0
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly2 {
    /// Orders by degree, then lexicographically on high coefficients; used
    /// only to keep factor multisets canonical.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for d in (0..=deg).rev() {
            if !self.coeff(d) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match d {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Parses sums of monomials: "x^2+x+1", "x", "1", "0".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSlope(format!("cannot parse '{s}' as an F2[x] polynomial"));
        if s.is_empty() {
            return Err(bad());
        }
        let mut p = Poly2::zero();
        for term in s.split('+') {
            let term = term.trim();
            p = match term {
                "0" => p,
                "1" => p + Poly2::one(),
                "x" => p + Poly2::x(),
                _ => {
                    let d: usize = term
                        .strip_prefix("x^")
                        .ok_or_else(bad)?
                        .trim()
                        .parse()
                        .map_err(|_| bad())?;
                    p + Poly2::monomial(d)
                }
            };
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn basics() {
        assert!(Poly2::zero().is_zero());
        assert_eq!(Poly2::zero().degree(), None);
        assert_eq!(p("x^2+x+1").degree(), Some(2));
        assert!(p("x+1").constant_term());
        assert!(!p("x^3+x").constant_term());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1", "x", "x+1", "x^2+x+1", "x^65+x^2"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("x+x").to_string(), "0");
    }

    #[test]
    fn division_examples() {
        let (q, r) = p("x^3+x^2").div_rem(&p("x+1"));
        assert_eq!(q, p("x^2"));
        assert!(r.is_zero());

        let (q, r) = p("x^3+x+1").div_rem(&p("x^2+1"));
        assert_eq!(q, p("x"));
        assert_eq!(r, p("1"));
    }

    #[test]
    fn x_power_split() {
        assert_eq!(p("x^3+x^2").split_x_power(), Some((2, p("x+1"))));
        assert_eq!(p("x+1").split_x_power(), Some((0, p("x+1"))));
        assert_eq!(p("x^4").split_x_power(), Some((4, p("1"))));
        assert_eq!(Poly2::zero().split_x_power(), None);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p("x^2+x").gcd(&p("x^2+1")), p("x+1"));
        assert_eq!(p("x^3").gcd(&p("x+1")), p("1"));
    }

    proptest! {
        #[test]
        fn mul_distributes(a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
            let mk = |bits: u32| Poly2 { words: vec![bits as u64] }.normalized();
            let (a, b, c) = (mk(a), mk(b), mk(c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn div_rem_reconstructs(a in 0u32..65536, d in 1u32..4096) {
            let a = Poly2 { words: vec![a as u64] }.normalized();
            let d = Poly2 { words: vec![d as u64] }.normalized();
            let (q, r) = a.div_rem(&d);
            prop_assert_eq!(&(&q * &d) + &r, a);
            if let Some(rd) = r.degree() {
                prop_assert!(rd < d.degree().unwrap());
            }
        }
    }
}
