//! Laurent polynomials over F2, optionally reduced modulo `u^N = 1`.
//!
//! Polynomials are stored sparsely as a set of exponents (every present
//! exponent has coefficient 1). Cyclic work (invertibility, inverses, the
//! period iteration in [`crate::cqca`]) goes through the dense
//! [`BitRow`] form and the ordinary F2[x] arithmetic in [`Gf2x`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitRow;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("modulus mismatch: {0:?} vs {1:?}")]
    ModulusMismatch(Option<usize>, Option<usize>),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{poly} is not invertible modulo u^{n} = 1")]
    NotInvertible { poly: String, n: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeSet<i64>,
    modulus: Option<usize>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeSet::new(),
            modulus: None,
        }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: i64) -> Self {
        LaurentPoly {
            terms: BTreeSet::from([k]),
            modulus: None,
        }
    }

    /// `u^c + u^-c`, or `0` for `c = 0`.
    pub fn symmetric_pair(c: i64) -> Self {
        Self::from_exponents([c, -c])
    }

    /// Builds a polynomial from exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exps: I) -> Self {
        let mut terms = BTreeSet::new();
        for e in exps {
            if !terms.remove(&e) {
                terms.insert(e);
            }
        }
        LaurentPoly {
            terms,
            modulus: None,
        }
    }

    /// Reduces exponents into `[0, n)` and attaches the modulus.
    pub fn reduce_mod(&self, n: usize) -> Result<Self, PolyError> {
        if n == 0 {
            return Err(PolyError::ZeroModulus);
        }
        if let Some(m) = self.modulus {
            if m != n {
                return Err(PolyError::ModulusMismatch(Some(m), Some(n)));
            }
            return Ok(self.clone());
        }
        let mut p = Self::from_exponents(self.terms.iter().map(|e| e.rem_euclid(n as i64)));
        p.modulus = Some(n);
        Ok(p)
    }

    pub fn modulus(&self) -> Option<usize> {
        self.modulus
    }

    pub fn terms(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.terms.contains(&k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&0)
    }

    /// Highest exponent; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.last().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.first().copied()
    }

    /// Largest `|k|` among the exponents; `None` for zero.
    pub fn reach(&self) -> Option<i64> {
        self.terms.iter().map(|k| k.abs()).max()
    }

    /// Parity of the number of terms, i.e. `p(1)` in F2.
    pub fn eval_at_one(&self) -> bool {
        self.terms.len() % 2 == 1
    }

    /// True iff the exponent set is closed under negation (modulo N when a
    /// modulus is attached).
    pub fn is_symmetric(&self) -> bool {
        match self.modulus {
            None => self.terms.iter().all(|k| self.terms.contains(&-k)),
            Some(n) => {
                let n = n as i64;
                self.terms
                    .iter()
                    .all(|k| self.terms.contains(&(-k).rem_euclid(n)))
            }
        }
    }

    /// `p(u^f)`: every exponent multiplied by `f`.
    pub fn dilate(&self, f: i64) -> Self {
        let mut p = Self::from_exponents(self.terms.iter().map(|k| k * f));
        if let Some(n) = self.modulus {
            p = p.reduce_mod(n).expect("nonzero modulus");
        }
        p
    }

    /// `p(u^-1)`.
    pub fn reflect(&self) -> Self {
        self.dilate(-1)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(LaurentPoly {
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .copied()
                .collect(),
            modulus: self.modulus,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(self.modulus, other.modulus));
        }
        let mut terms = BTreeSet::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut e = a + b;
                if let Some(n) = self.modulus {
                    e = e.rem_euclid(n as i64);
                }
                if !terms.remove(&e) {
                    terms.insert(e);
                }
            }
        }
        Ok(LaurentPoly {
            terms,
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly {
            terms: BTreeSet::from([0]),
            modulus: self.modulus,
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Dense coefficient vector modulo `u^n - 1`.
    pub fn to_dense(&self, n: usize) -> BitRow {
        let mut r = BitRow::zeros(n);
        for k in &self.terms {
            r.flip(k.rem_euclid(n as i64) as usize);
        }
        r
    }

    pub fn from_dense(r: &BitRow) -> Self {
        LaurentPoly {
            terms: r.iter_ones().map(|i| i as i64).collect(),
            modulus: Some(r.len()),
        }
    }

    /// `self * v` where `v` is a dense polynomial modulo `u^{v.len()} - 1`.
    pub fn mul_dense(&self, v: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(v.len());
        for k in &self.terms {
            v.xor_rotated_into(*k, &mut out);
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on modulus mismatch; use [`LaurentPoly::checked_add`] to
    /// handle it.
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("modulus mismatch in add")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("modulus mismatch in mul")
    }
}

pub fn add(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    p.checked_add(q)
}

pub fn mul(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    p.checked_mul(q)
}

pub fn is_symmetric(p: &LaurentPoly) -> bool {
    p.is_symmetric()
}

/// Whether `p` has an inverse in F2[u]/(u^n - 1), decided by
/// `gcd(p mod (u^n - 1), u^n - 1) = 1`.
pub fn is_n_invertible(p: &LaurentPoly, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let a = Gf2x::from_bits(&p.to_dense(n));
    let m = Gf2x::cyclotomic_modulus(n);
    a.gcd(&m).is_one()
}

/// Inverse of `p` modulo `u^n = 1`, returned with the modulus attached.
pub fn invert(p: &LaurentPoly, n: usize) -> Result<LaurentPoly, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroModulus);
    }
    let a = Gf2x::from_bits(&p.to_dense(n));
    let m = Gf2x::cyclotomic_modulus(n);
    let (g, s) = a.ext_gcd(&m);
    if !g.is_one() {
        return Err(PolyError::NotInvertible {
            poly: p.to_string(),
            n,
        });
    }
    Ok(LaurentPoly::from_dense(&s.rem(&m).to_bits(n)))
}

/// Product of two dense polynomials modulo `u^n - 1`, `n = a.len()`.
pub fn cyclic_mul(a: &BitRow, b: &BitRow) -> BitRow {
    assert_eq!(a.len(), b.len(), "cyclic length mismatch");
    let n = a.len();
    let prod = Gf2x::from_bits(a).mul(&Gf2x::from_bits(b));
    let mut out = BitRow::zeros(n);
    if let Some(d) = prod.degree() {
        for i in 0..=d {
            if prod.coeff(i) {
                out.flip(i % n);
            }
        }
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "1")?,
                1 => write!(f, "u")?,
                k => write!(f, "u^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            None => write!(f, "LaurentPoly({self})"),
            Some(n) => write!(f, "LaurentPoly({self} mod u^{n}-1)"),
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyError;

    /// Parses `u^-1+1+u` style text. Whitespace is ignored, `0` alone is the
    /// zero polynomial, and explicit coefficients are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        let err = |column: usize, message: &str| PolyError::Parse {
            column,
            message: message.to_string(),
        };
        if chars.is_empty() {
            return Err(err(1, "empty polynomial"));
        }
        if chars.len() == 1 && chars[0].1 == '0' {
            return Ok(LaurentPoly::zero());
        }
        let mut exps = Vec::new();
        let mut pos = 0;
        loop {
            let (col, c) = *chars
                .get(pos)
                .ok_or_else(|| err(s.chars().count() + 1, "expected a term"))?;
            match c {
                '1' => {
                    exps.push(0);
                    pos += 1;
                }
                'u' => {
                    pos += 1;
                    if chars.get(pos).map(|x| x.1) == Some('^') {
                        pos += 1;
                        let start = pos;
                        if matches!(chars.get(pos).map(|x| x.1), Some('-') | Some('+')) {
                            pos += 1;
                        }
                        while chars.get(pos).is_some_and(|x| x.1.is_ascii_digit()) {
                            pos += 1;
                        }
                        let text: String = chars[start..pos].iter().map(|x| x.1).collect();
                        let k: i64 = text.parse().map_err(|_| {
                            err(
                                chars.get(start).map_or(col + 2, |x| x.0),
                                "expected an integer exponent",
                            )
                        })?;
                        exps.push(k);
                    } else {
                        exps.push(1);
                    }
                }
                d if d.is_ascii_digit() => {
                    return Err(err(col, "coefficients other than an implicit 1 are not allowed"))
                }
                _ => return Err(err(col, &format!("unexpected character '{c}'"))),
            }
            match chars.get(pos) {
                None => break,
                Some((_, '+')) => pos += 1,
                Some((col, c)) => {
                    let msg = if c.is_ascii_alphanumeric() {
                        "coefficients other than an implicit 1 are not allowed".to_string()
                    } else {
                        format!("expected '+', found '{c}'")
                    };
                    return Err(err(*col, &msg));
                }
            }
        }
        Ok(LaurentPoly::from_exponents(exps))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordinary polynomials over F2 (non-negative exponents), bit `i` holding
/// the coefficient of `x^i`. Only used for gcd and inverse computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2x {
    words: Vec<u64>,
}

impl Gf2x {
    fn normalize(mut self) -> Self {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    pub fn zero() -> Self {
        Gf2x { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2x { words: vec![1] }
    }

    pub fn from_bits(r: &BitRow) -> Self {
        let mut words = vec![0u64; r.len().div_ceil(64)];
        for i in r.iter_ones() {
            words[i / 64] |= 1 << (i % 64);
        }
        Gf2x { words }.normalize()
    }

    /// `x^n + 1`.
    pub fn cyclotomic_modulus(n: usize) -> Self {
        let mut words = vec![0u64; n / 64 + 1];
        words[0] ^= 1;
        words[n / 64] ^= 1 << (n % 64);
        Gf2x { words }.normalize()
    }

    /// Bits `0..n` as a dense row. Higher coefficients must be zero.
    pub fn to_bits(&self, n: usize) -> BitRow {
        let mut r = BitRow::zeros(n);
        for i in 0..self.words.len() * 64 {
            if self.coeff(i) {
                assert!(i < n, "polynomial does not fit in {n} bits");
                r.set(i, true);
            }
        }
        r
    }

    pub fn degree(&self) -> Option<usize> {
        self.words
            .last()
            .map(|w| (self.words.len() - 1) * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn xor_shifted(&mut self, other: &Gf2x, shift: usize) {
        let ws = shift / 64;
        let bs = shift % 64;
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
    }

    pub fn add(&self, other: &Gf2x) -> Gf2x {
        let mut r = self.clone();
        r.xor_shifted(other, 0);
        r.normalize()
    }

    pub fn mul(&self, other: &Gf2x) -> Gf2x {
        let mut r = Gf2x::zero();
        let Some(d) = self.degree() else {
            return r;
        };
        for i in 0..=d {
            if self.coeff(i) {
                r.xor_shifted(other, i);
            }
        }
        r.normalize()
    }

    pub fn divrem(&self, m: &Gf2x) -> (Gf2x, Gf2x) {
        let dm = m.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Gf2x::zero();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            let s = dr - dm;
            r.xor_shifted(m, s);
            r = r.normalize();
            q.xor_shifted(&Gf2x::one(), s);
        }
        (q.normalize(), r)
    }

    pub fn rem(&self, m: &Gf2x) -> Gf2x {
        self.divrem(m).1
    }

    pub fn gcd(&self, other: &Gf2x) -> Gf2x {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Returns `(g, s)` with `s * self ≡ g (mod m)`, `g = gcd(self, m)`.
    pub fn ext_gcd(&self, m: &Gf2x) -> (Gf2x, Gf2x) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Gf2x::zero(), Gf2x::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.add(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        (r0, s0)
    }
}
