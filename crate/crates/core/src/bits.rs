//! Fixed-length bit vectors over F2.
//!
//! `BitRow` doubles as a Pauli-string half (`x` or `z` mask), as the dense
//! coefficient vector of a polynomial modulo `u^N - 1`, and as a row in the
//! GF(2) eliminations of [`crate::gf2`]. Index `i` is ring site `i`, or the
//! coefficient of `u^i`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut r = Self::zeros(len);
        r.set(i, true);
        r
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut r = Self::zeros(len);
        for i in ones {
            r.flip(i);
        }
        r
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "bit row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitRow) -> BitRow {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &BitRow) -> BitRow {
        assert_eq!(self.len, other.len, "bit row length mismatch");
        BitRow {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Parity of the bitwise AND, i.e. the F2 inner product.
    pub fn dot(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len, "bit row length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(wi, w)| wi * 64 + w.trailing_zeros() as usize)
    }

    /// Cyclic shift: bit `i` moves to `(i + k) mod len`. Multiplication by
    /// `u^k` modulo `u^len - 1`.
    pub fn rotated(&self, k: i64) -> BitRow {
        let n = self.len;
        if n == 0 {
            return self.clone();
        }
        let k = k.rem_euclid(n as i64) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut out = BitRow::zeros(n);
        for i in self.iter_ones() {
            out.set((i + k) % n, true);
        }
        out
    }

    /// Xors `self` rotated by `k` into `acc`.
    pub fn xor_rotated_into(&self, k: i64, acc: &mut BitRow) {
        let n = self.len;
        let k = k.rem_euclid(n as i64) as usize;
        for i in self.iter_ones() {
            acc.flip((i + k) % n);
        }
    }

    /// Index map `i -> (i * factor) mod len`, xoring collisions.
    pub fn dilated(&self, factor: usize) -> BitRow {
        let n = self.len;
        let mut out = BitRow::zeros(n);
        for i in self.iter_ones() {
            out.flip((i * factor) % n);
        }
        out
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitRow {
        let mut out = BitRow::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({})", self.to_bitstring())
    }
}
