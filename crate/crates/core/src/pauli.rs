//! Phase-free Pauli strings on a ring of `n` qubits and the automaton
//! action on them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitRow;
use crate::cqca::{CqcaClass, CqcaMatrix};
use crate::gf2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("ring size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("automaton is {0}, not a glider automaton")]
    NotGlider(CqcaClass),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("internal: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: BitRow,
    z: BitRow,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: BitRow::zeros(n),
            z: BitRow::zeros(n),
        }
    }

    pub fn from_bits(x: BitRow, z: BitRow) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::SizeMismatch(x.len(), z.len()));
        }
        Ok(PauliString { n: x.len(), x, z })
    }

    /// Single-site operator; `site` is reduced modulo `n`.
    pub fn single(n: usize, site: i64, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(site, letter);
        p
    }

    pub fn x(n: usize, site: i64) -> Self {
        Self::single(n, site, Letter::X)
    }

    pub fn z(n: usize, site: i64) -> Self {
        Self::single(n, site, Letter::Z)
    }

    /// Product of single-site letters, e.g. `[(0, X), (-1, Z)]`.
    pub fn from_letters(n: usize, letters: &[(i64, Letter)]) -> Self {
        let mut p = Self::identity(n);
        for &(s, l) in letters {
            p = p.mul(&Self::single(n, s, l)).expect("same size");
        }
        p
    }

    fn wrap(&self, site: i64) -> usize {
        site.rem_euclid(self.n as i64) as usize
    }

    pub fn set(&mut self, site: i64, letter: Letter) {
        let i = self.wrap(site);
        let (x, z) = letter.bits();
        self.x.set(i, x);
        self.z.set(i, z);
    }

    pub fn get(&self, site: i64) -> Letter {
        let i = self.wrap(site);
        Letter::from_bits(self.x.get(i), self.z.get(i))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn xbits(&self) -> &BitRow {
        &self.x
    }

    pub fn zbits(&self) -> &BitRow {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        (0..self.n).filter(|&i| self.x.get(i) || self.z.get(i)).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.x.get(i) || self.z.get(i)).collect()
    }

    /// `(x | z)` as one 2n-bit row.
    pub fn to_vec(&self) -> BitRow {
        self.x.concat(&self.z)
    }

    pub fn from_vec(v: &BitRow) -> Self {
        let n = v.len() / 2;
        PauliString {
            n,
            x: v.slice(0, n),
            z: v.slice(n, n),
        }
    }

    /// Phase-free product.
    pub fn mul(&self, o: &PauliString) -> Result<PauliString, PauliError> {
        if self.n != o.n {
            return Err(PauliError::SizeMismatch(self.n, o.n));
        }
        Ok(PauliString {
            n: self.n,
            x: self.x.xor(&o.x),
            z: self.z.xor(&o.z),
        })
    }

    /// Site `i` moves to `i + k`.
    pub fn translate(&self, k: i64) -> PauliString {
        PauliString {
            n: self.n,
            x: self.x.rotated(k),
            z: self.z.rotated(k),
        }
    }

    /// Same letters read on a different ring size; sites must fit.
    pub fn restrict(&self, sites: &[usize]) -> PauliString {
        let mut p = PauliString::identity(sites.len());
        for (j, &s) in sites.iter().enumerate() {
            p.set(j as i64, self.get(s as i64));
        }
        p
    }
}

/// 1 iff the two operators anticommute.
pub fn symplectic_product(p: &PauliString, q: &PauliString) -> Result<bool, PauliError> {
    if p.n != q.n {
        return Err(PauliError::SizeMismatch(p.n, q.n));
    }
    Ok(p.x.dot(&q.z) ^ p.z.dot(&q.x))
}

/// `t . xi` reduced modulo `u^N = 1`.
pub fn apply_cqca(t: &CqcaMatrix, p: &PauliString) -> PauliString {
    let row = |r: usize| {
        let mut v = t.entry(r, 0).mul_dense(&p.x);
        v.xor_assign(&t.entry(r, 1).mul_dense(&p.z));
        v
    };
    PauliString {
        n: p.n,
        x: row(0),
        z: row(1),
    }
}

pub fn apply_power(t: &CqcaMatrix, p: &PauliString, k: u64) -> PauliString {
    let mut q = p.clone();
    for _ in 0..k {
        q = apply_cqca(t, &q);
    }
    q
}

/// `[p, T(p), ..., T^steps(p)]`.
pub fn cone_evolution(t: &CqcaMatrix, p: &PauliString, steps: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(p.clone());
    for _ in 0..steps {
        let next = apply_cqca(t, out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glider {
    pub pauli: PauliString,
    pub shift: i64,
}

/// True iff `T(p)` is `p` translated by `shift`.
pub fn is_glider(t: &CqcaMatrix, p: &PauliString, shift: i64) -> bool {
    !p.is_identity() && apply_cqca(t, p) == p.translate(shift)
}

/// Generators of the gliders of a glider automaton on a ring of size `n`.
///
/// With `Tr t = u^c + u^-c` the characteristic polynomial splits as
/// `(x + u^c)(x + u^-c)`, and an eigenvector for `u^{±c}` is read off either
/// row of `t`. The returned list holds the independent translates of both
/// eigenvectors; products of gliders with the same shift are gliders.
pub fn find_gliders(t: &CqcaMatrix, n: usize) -> Result<Vec<Glider>, PauliError> {
    let c = match t.classify() {
        CqcaClass::Glider(c) => c as i64,
        other => return Err(PauliError::NotGlider(other)),
    };
    let mut out = Vec::new();
    for shift in [c, -c] {
        let lam = crate::polyring::LaurentPoly::monomial(shift);
        let (xp, zp) = if !t.entry(0, 1).is_zero() {
            (t.entry(0, 1).clone(), t.entry(0, 0) + &lam)
        } else {
            (t.entry(1, 1) + &lam, t.entry(1, 0).clone())
        };
        let seed = PauliString {
            n,
            x: xp.to_dense(n),
            z: zp.to_dense(n),
        };
        let seed = anchor(&seed);
        if !is_glider(t, &seed, shift) {
            return Err(PauliError::Internal(format!(
                "no glider with shift {shift} at n = {n}"
            )));
        }
        let mut ech = gf2::Echelon::new(2 * n);
        for k in 0..n as i64 {
            let g = seed.translate(k);
            if ech.insert(&g.to_vec()) {
                out.push(Glider { pauli: g, shift });
            }
        }
    }
    Ok(out)
}

// translate so the first X (else Z) site is 0
fn anchor(p: &PauliString) -> PauliString {
    let first = p.x.first_one().or_else(|| p.z.first_one()).unwrap_or(0);
    p.translate(-(first as i64))
}

/// Dimension of the space of operators translated by `shift` under `t`,
/// by brute-force nullspace of `(T - S_shift)` on F2^{2n}.
pub fn glider_space_dim(t: &CqcaMatrix, n: usize, shift: i64) -> usize {
    let cols: Vec<BitRow> = (0..2 * n)
        .map(|j| {
            let e = PauliString::from_vec(&BitRow::unit(2 * n, j));
            apply_cqca(t, &e).to_vec().xor(&e.translate(shift).to_vec())
        })
        .collect();
    2 * n - gf2::rank(2 * n, &cols)
}

/// Glider factors whose product is `Z_i Z_{i-k}`:
/// `(Z_i T(Z_{i-c})) (T(Z_{i-c}) Z_{i-2c}) ...`.
pub fn cone_pair_from_lines(
    t: &CqcaMatrix,
    n: usize,
    i: i64,
    k: i64,
) -> Result<Vec<PauliString>, PauliError> {
    let c = match t.classify() {
        CqcaClass::Glider(c) => c as i64,
        other => return Err(PauliError::NotGlider(other)),
    };
    if k < 0 || k % (2 * c) != 0 {
        return Err(PauliError::InvalidArgument(format!(
            "k = {k} must be a non-negative multiple of {}",
            2 * c
        )));
    }
    let mut factors = Vec::new();
    let mut site = i;
    while site > i - k {
        let mid = apply_cqca(t, &PauliString::z(n, site - c));
        let left = PauliString::z(n, site).mul(&mid)?;
        let right = mid.mul(&PauliString::z(n, site - 2 * c))?;
        for f in [&left, &right] {
            if !(is_glider(t, f, c) || is_glider(t, f, -c)) {
                return Err(PauliError::Internal(format!("factor {f} is not a glider")));
            }
        }
        factors.push(left);
        factors.push(right);
        site -= 2 * c;
    }
    let mut prod = PauliString::identity(n);
    for f in &factors {
        prod = prod.mul(f)?;
    }
    let target = PauliString::z(n, i).mul(&PauliString::z(n, i - k))?;
    if prod != target {
        return Err(PauliError::Internal(format!(
            "factors multiply to {prod}, expected {target}"
        )));
    }
    Ok(factors)
}

/// Closure under `p, q -> p q` whenever `p` and `q` anticommute.
pub fn lie_closure(generators: &[PauliString]) -> BTreeSet<PauliString> {
    let mut set: BTreeSet<PauliString> = generators
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    let mut members: Vec<PauliString> = set.iter().cloned().collect();
    let mut next = 0;
    while next < members.len() {
        let p = members[next].clone();
        next += 1;
        let mut fresh = Vec::new();
        for q in &members[..next] {
            if symplectic_product(&p, q).unwrap_or(false) {
                let r = p.mul(q).expect("same size");
                if set.insert(r.clone()) {
                    fresh.push(r);
                }
            }
        }
        members.extend(fresh);
    }
    set
}

/// Whether `{Z_i, T(Z_i)}` spans all of F2^{2n}.
pub fn injectivity_rank(t: &CqcaMatrix, n: usize) -> bool {
    let mut ech = gf2::Echelon::new(2 * n);
    for i in 0..n as i64 {
        let z = PauliString::z(n, i);
        ech.insert(&z.to_vec());
        ech.insert(&apply_cqca(t, &z).to_vec());
    }
    ech.rank() == 2 * n
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.n {
            let l = self.get(i as i64);
            if l != Letter::I {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}{}", l.as_char(), i)?;
            }
        }
        if first {
            write!(f, "I")?;
        }
        write!(f, " @N={}", self.n)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Parses `X0 Z3 Y5 @N=8`. Sites may be negative and are reduced
    /// modulo `N`; repeated sites multiply.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |column: usize, message: String| PauliError::Parse { column, message };
        let Some(at) = s.find('@') else {
            return Err(err(s.len() + 1, "missing ring size '@N=<n>'".into()));
        };
        let size_part = s[at + 1..].trim();
        let n: usize = size_part
            .strip_prefix("N=")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| err(at + 2, format!("bad ring size '{size_part}'")))?;
        let mut p = PauliString::identity(n);
        let body = &s[..at];
        let mut offset = 0;
        for tok in body.split_whitespace() {
            let col = body[offset..].find(tok).map_or(0, |i| i + offset) + 1;
            offset = col - 1 + tok.len();
            let mut chars = tok.chars();
            let letter = match chars.next() {
                Some('X') => Letter::X,
                Some('Y') => Letter::Y,
                Some('Z') => Letter::Z,
                Some('I') => Letter::I,
                _ => return Err(err(col, format!("bad token '{tok}'"))),
            };
            if letter == Letter::I && tok == "I" {
                continue;
            }
            let site: i64 = chars
                .as_str()
                .parse()
                .map_err(|_| err(col + 1, format!("bad site in '{tok}'")))?;
            p = p.mul(&PauliString::single(n, site, letter))?;
        }
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tg_action_on_units() {
        let tg = CqcaMatrix::tg();
        assert_eq!(apply_cqca(&tg, &PauliString::z(6, 0)), PauliString::x(6, 0));
        let expected =
            PauliString::from_letters(6, &[(-1, Letter::X), (0, Letter::Z), (1, Letter::X)]);
        assert_eq!(apply_cqca(&tg, &PauliString::x(6, 0)), expected);
        let p: PauliString = "X1 Z2 Y4 @N=6".parse().unwrap();
        assert_eq!(apply_cqca(&CqcaMatrix::identity(), &p), p);
    }

    #[test]
    fn symplectic_examples() {
        let n = 3;
        assert!(symplectic_product(&PauliString::x(n, 0), &PauliString::z(n, 0)).unwrap());
        assert!(!symplectic_product(&PauliString::x(n, 0), &PauliString::x(n, 1)).unwrap());
        assert!(symplectic_product(&PauliString::x(3, 0), &PauliString::x(4, 0)).is_err());
    }

    #[test]
    fn tg_gliders() {
        let tg = CqcaMatrix::tg();
        let gl = find_gliders(&tg, 8).unwrap();
        let right = PauliString::from_letters(8, &[(0, Letter::X), (-1, Letter::Z)]);
        let left = PauliString::from_letters(8, &[(1, Letter::Z), (0, Letter::X)]);
        assert!(gl.contains(&Glider { pauli: right, shift: 1 }));
        assert!(gl.contains(&Glider { pauli: left, shift: -1 }));
        for g in &gl {
            assert!(is_glider(&tg, &g.pauli, g.shift));
        }
        assert!(matches!(
            find_gliders(&CqcaMatrix::tp(), 8),
            Err(PauliError::NotGlider(_))
        ));
    }

    #[test]
    fn cone_returns_after_n_steps() {
        let orbit = cone_evolution(&CqcaMatrix::tg(), &PauliString::z(6, 0), 6);
        assert_eq!(orbit[6], orbit[0]);
        assert!(orbit[1..6].iter().all(|p| *p != orbit[0]));
        let id = PauliString::identity(6);
        assert!(cone_evolution(&CqcaMatrix::tf(), &id, 4).iter().all(|p| *p == id));
    }

    #[test]
    fn cone_layer_two() {
        let tg = CqcaMatrix::tg();
        let n = 8;
        let t2 = apply_power(&tg, &PauliString::z(n, 0), 2);
        let expected = apply_cqca(&tg, &PauliString::z(n, -1))
            .mul(&PauliString::z(n, 0))
            .unwrap()
            .mul(&apply_cqca(&tg, &PauliString::z(n, 1)))
            .unwrap();
        assert_eq!(t2, expected);
    }

    #[test]
    fn lines_make_cone_pairs() {
        let tg = CqcaMatrix::tg();
        let f = cone_pair_from_lines(&tg, 12, 5, 2).unwrap();
        let mid = apply_cqca(&tg, &PauliString::z(12, 4));
        assert_eq!(f[0], PauliString::z(12, 5).mul(&mid).unwrap());
        assert_eq!(f[1], mid.mul(&PauliString::z(12, 3)).unwrap());
        assert!(cone_pair_from_lines(&tg, 12, 5, 0).unwrap().is_empty());
        assert!(cone_pair_from_lines(&tg, 12, 5, 3).is_err());
    }

    #[test]
    fn closure_small() {
        let c = lie_closure(&[PauliString::x(1, 0), PauliString::z(1, 0)]);
        assert_eq!(c.len(), 3);
        assert!(c.contains(&"Y0 @N=1".parse().unwrap()));
        assert_eq!(lie_closure(&[PauliString::x(2, 0)]).len(), 1);
    }

    #[test]
    fn injectivity_small() {
        assert!(injectivity_rank(&CqcaMatrix::tg(), 4));
        assert!(!injectivity_rank(&CqcaMatrix::identity(), 3));
    }

    #[test]
    fn text_form() {
        let p: PauliString = "X0 Z3 Y5 @N=8".parse().unwrap();
        assert_eq!(p.to_string(), "X0 Z3 Y5 @N=8");
        let q: PauliString = "X-1 X7 @N=8".parse().unwrap();
        assert!(q.is_identity());
        assert_eq!(q.to_string(), "I @N=8");
        assert!("X0 Q1 @N=4".parse::<PauliString>().is_err());
        assert!("X0".parse::<PauliString>().is_err());
        assert!("X0 @N=0".parse::<PauliString>().is_err());
    }
}
