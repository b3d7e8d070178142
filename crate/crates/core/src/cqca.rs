//! Clifford cellular automata as 2x2 matrices of symmetric Laurent
//! polynomials with unit determinant.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitRow;
use crate::numtheory;
use crate::polyring::{cyclic_mul, is_n_invertible, LaurentPoly, PolyError};

#[derive(Debug, Error)]
pub enum CqcaError {
    #[error("determinant is {0}, expected 1")]
    BadDeterminant(String),
    #[error("entry t{0}{1} = {2} is not symmetric")]
    NotSymmetric(usize, usize, String),
    #[error("unknown preset '{0}' (expected Tg, Tf, Tp, Te)")]
    UnknownPreset(String),
    #[error("invalid CQCA spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("period search exceeded {0} steps")]
    PeriodBudgetExceeded(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// A 2x2 polynomial matrix without the CQCA invariants. Used for powers and
/// reductions modulo `u^N = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub e: [[LaurentPoly; 2]; 2],
}

impl PolyMatrix {
    pub fn new(t11: LaurentPoly, t12: LaurentPoly, t21: LaurentPoly, t22: LaurentPoly) -> Self {
        PolyMatrix {
            e: [[t11, t12], [t21, t22]],
        }
    }

    pub fn identity_with(modulus: Option<usize>) -> Self {
        let (one, zero) = match modulus {
            None => (LaurentPoly::one(), LaurentPoly::zero()),
            Some(n) => (
                LaurentPoly::one().reduce_mod(n).expect("positive modulus"),
                LaurentPoly::zero().reduce_mod(n).expect("positive modulus"),
            ),
        };
        PolyMatrix::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn entry(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.e[r][c]
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn det(&self) -> LaurentPoly {
        &(&self.e[0][0] * &self.e[1][1]) + &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let m = |r: usize, c: usize| &(&self.e[r][0] * &o.e[0][c]) + &(&self.e[r][1] * &o.e[1][c]);
        PolyMatrix::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn reduce_mod(&self, n: usize) -> Result<PolyMatrix, PolyError> {
        Ok(PolyMatrix::new(
            self.e[0][0].reduce_mod(n)?,
            self.e[0][1].reduce_mod(n)?,
            self.e[1][0].reduce_mod(n)?,
            self.e[1][1].reduce_mod(n)?,
        ))
    }

    pub fn is_identity(&self) -> bool {
        self.e[0][0].is_one() && self.e[1][1].is_one() && self.e[0][1].is_zero() && self.e[1][0].is_zero()
    }

    pub fn modulus(&self) -> Option<usize> {
        self.e[0][0].modulus()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CqcaClass {
    Periodic(u8),
    Glider(u64),
    Fractal,
}

impl fmt::Display for CqcaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CqcaClass::Periodic(a) => write!(f, "Periodic({a})"),
            CqcaClass::Glider(c) => write!(f, "Glider({c})"),
            CqcaClass::Fractal => write!(f, "Fractal"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Hadamard,
    Phase,
}

/// The automaton `t`. Entries are infinite-chain representatives; the
/// constructor enforces `det t = 1` and symmetric entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CqcaMatrix {
    m: PolyMatrix,
}

impl CqcaMatrix {
    pub fn new(
        t11: LaurentPoly,
        t12: LaurentPoly,
        t21: LaurentPoly,
        t22: LaurentPoly,
    ) -> Result<Self, CqcaError> {
        Self::from_poly_matrix(PolyMatrix::new(t11, t12, t21, t22))
    }

    pub fn from_poly_matrix(m: PolyMatrix) -> Result<Self, CqcaError> {
        for r in 0..2 {
            for c in 0..2 {
                let p = &m.e[r][c];
                if p.modulus().is_some() {
                    return Err(CqcaError::Spec("entries must not carry a modulus".into()));
                }
                if !p.is_symmetric() {
                    return Err(CqcaError::NotSymmetric(r + 1, c + 1, p.to_string()));
                }
            }
        }
        let det = m.det();
        if !det.is_one() {
            return Err(CqcaError::BadDeterminant(det.to_string()));
        }
        Ok(CqcaMatrix { m })
    }

    /// `[[trace, 1], [1, 0]]`.
    pub fn simple(trace: LaurentPoly) -> Result<Self, CqcaError> {
        Self::new(trace, LaurentPoly::one(), LaurentPoly::one(), LaurentPoly::zero())
    }

    pub fn identity() -> Self {
        CqcaMatrix {
            m: PolyMatrix::identity_with(None),
        }
    }

    /// `[[u+u^-1, 1], [1, 0]]`, the cluster-state automaton.
    pub fn tg() -> Self {
        Self::simple(LaurentPoly::symmetric_pair(1)).expect("valid preset")
    }

    /// `[[1+u+u^-1, 1], [1, 0]]`, fractal.
    pub fn tf() -> Self {
        Self::simple(LaurentPoly::from_exponents([-1, 0, 1])).expect("valid preset")
    }

    /// `h = [[0, 1], [1, 0]]`.
    pub fn tp() -> Self {
        Self::hadamard()
    }

    /// `h * tg = [[1, 0], [u+u^-1, 1]]`.
    pub fn te() -> Self {
        Self::hadamard().compose(&Self::tg()).expect("valid preset")
    }

    pub fn hadamard() -> Self {
        Self::simple(LaurentPoly::zero()).expect("valid preset")
    }

    /// `s = [[1, 0], [1, 1]]`.
    pub fn phase() -> Self {
        Self::new(
            LaurentPoly::one(),
            LaurentPoly::zero(),
            LaurentPoly::one(),
            LaurentPoly::one(),
        )
        .expect("valid preset")
    }

    pub fn preset(name: &str) -> Result<Self, CqcaError> {
        match name.to_ascii_lowercase().as_str() {
            "tg" => Ok(Self::tg()),
            "tf" => Ok(Self::tf()),
            "tp" => Ok(Self::tp()),
            "te" => Ok(Self::te()),
            _ => Err(CqcaError::UnknownPreset(name.to_string())),
        }
    }

    pub fn presets() -> Vec<(&'static str, CqcaMatrix)> {
        vec![
            ("Tg", Self::tg()),
            ("Tf", Self::tf()),
            ("Tp", Self::tp()),
            ("Te", Self::te()),
        ]
    }

    pub fn entry(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.m.e[r][c]
    }

    pub fn as_poly_matrix(&self) -> &PolyMatrix {
        &self.m
    }

    pub fn trace(&self) -> LaurentPoly {
        self.m.trace()
    }

    pub fn classify(&self) -> CqcaClass {
        let tr = self.trace();
        if tr.is_zero() {
            return CqcaClass::Periodic(0);
        }
        if tr.is_one() {
            return CqcaClass::Periodic(1);
        }
        if let Some(c) = tr.degree() {
            if c > 0 && tr == LaurentPoly::symmetric_pair(c) {
                return CqcaClass::Glider(c as u64);
            }
        }
        CqcaClass::Fractal
    }

    /// Matrix product `self * other`. Symmetric polynomials form a subring,
    /// so the result always satisfies the invariants; a violation is still
    /// reported instead of normalised.
    pub fn compose(&self, other: &CqcaMatrix) -> Result<CqcaMatrix, CqcaError> {
        Self::from_poly_matrix(self.m.mul(&other.m))
    }

    pub fn is_simple(&self) -> bool {
        self.entry(0, 1).is_one() && self.entry(1, 0).is_one() && self.entry(1, 1).is_zero()
    }

    pub fn is_entangling(&self) -> bool {
        self.m
            .e
            .iter()
            .flatten()
            .any(|p| !(p.is_zero() || p.is_one()))
    }

    pub fn conjugate_basis(&self, which: Basis) -> CqcaMatrix {
        // both h and s are involutions over F2
        let g = match which {
            Basis::Hadamard => Self::hadamard(),
            Basis::Phase => Self::phase(),
        };
        g.compose(self)
            .and_then(|x| x.compose(&g))
            .expect("conjugation preserves the invariants")
    }

    /// `t12` is invertible modulo `u^N = 1`.
    pub fn injective_for(&self, n: usize) -> bool {
        is_n_invertible(self.entry(0, 1), n)
    }

    /// Injective for every ring size.
    pub fn injective_for_all(&self) -> bool {
        self.entry(0, 1).is_one()
    }

    /// `t^k` by repeated multiplication, optionally modulo `u^N = 1`.
    pub fn power_by_multiplication(&self, k: u64, n: Option<usize>) -> PolyMatrix {
        let base = match n {
            Some(n) => self.m.reduce_mod(n).expect("positive modulus"),
            None => self.m.clone(),
        };
        let mut acc = PolyMatrix::identity_with(n);
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `t^k = a_k t + b_k I` via the Cayley-Hamilton identity
    /// `t^2 = Tr(t) t + I`, evaluated by square-and-multiply.
    pub fn power(&self, k: u64, n: Option<usize>) -> PolyMatrix {
        let reduce = |p: &LaurentPoly| match n {
            Some(n) => p.reduce_mod(n).expect("positive modulus"),
            None => p.clone(),
        };
        let one = reduce(&LaurentPoly::one());
        let zero = reduce(&LaurentPoly::zero());
        let gamma = reduce(&self.trace());
        let (a, b) = ch_pow_sparse(&gamma, k, &one, &zero);
        let t = match n {
            Some(n) => self.m.reduce_mod(n).expect("positive modulus"),
            None => self.m.clone(),
        };
        PolyMatrix::new(
            &(&a * &t.e[0][0]) + &b,
            &a * &t.e[0][1],
            &a * &t.e[1][0],
            &(&a * &t.e[1][1]) + &b,
        )
    }

    /// Multiplicative order of `t` modulo `u^N = 1`.
    pub fn period(&self, n: usize) -> Result<u64, CqcaError> {
        self.period_with_budget(n, DEFAULT_PERIOD_BUDGET)
    }

    pub fn period_with_budget(&self, n: usize, budget: u64) -> Result<u64, CqcaError> {
        if n == 0 {
            return Err(CqcaError::ZeroModulus);
        }
        let ctx = ModCtx::new(self, n);
        if let Some(m) = ctx.known_multiple() {
            return Ok(ctx.reduce_order(m));
        }
        ctx.iterate(budget)
    }
}

/// Step cap for the plain iteration when no multiple of the order is known.
pub const DEFAULT_PERIOD_BUDGET: u64 = 1 << 26;

fn ch_pow_sparse(
    gamma: &LaurentPoly,
    mut k: u64,
    one: &LaurentPoly,
    zero: &LaurentPoly,
) -> (LaurentPoly, LaurentPoly) {
    // (a, b) represents a t + b I
    let mut acc = (zero.clone(), one.clone());
    let mut base = (one.clone(), zero.clone());
    let combine = |x: &(LaurentPoly, LaurentPoly), y: &(LaurentPoly, LaurentPoly)| {
        let aa = &x.0 * &y.0;
        (
            &(&(&aa * gamma) + &(&x.0 * &y.1)) + &(&x.1 * &y.0),
            &aa + &(&x.1 * &y.1),
        )
    };
    while k > 0 {
        if k & 1 == 1 {
            acc = combine(&acc, &base);
        }
        base = combine(&base, &base);
        k >>= 1;
    }
    acc
}

/// Dense arithmetic on the Cayley-Hamilton pair modulo `u^N - 1`.
struct ModCtx {
    n: usize,
    gamma: LaurentPoly,
    gamma_dense: BitRow,
    t: [[BitRow; 2]; 2],
}

type Pair = (BitRow, BitRow);

impl ModCtx {
    fn new(t: &CqcaMatrix, n: usize) -> Self {
        let d = |r: usize, c: usize| t.entry(r, c).to_dense(n);
        ModCtx {
            n,
            gamma: t.trace(),
            gamma_dense: t.trace().to_dense(n),
            t: [[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]],
        }
    }

    fn one(&self) -> BitRow {
        BitRow::unit(self.n, 0)
    }

    fn combine(&self, x: &Pair, y: &Pair) -> Pair {
        let aa = cyclic_mul(&x.0, &y.0);
        let mut a = cyclic_mul(&aa, &self.gamma_dense);
        a.xor_assign(&cyclic_mul(&x.0, &y.1));
        a.xor_assign(&cyclic_mul(&x.1, &y.0));
        let mut b = aa;
        b.xor_assign(&cyclic_mul(&x.1, &y.1));
        (a, b)
    }

    fn square(&self, x: &Pair) -> Pair {
        // squaring over F2 dilates exponents by 2
        let a2 = x.0.dilated(2);
        let b2 = x.1.dilated(2);
        (cyclic_mul(&a2, &self.gamma_dense), a2.xor(&b2))
    }

    fn pow(&self, mut k: u64) -> Pair {
        let mut acc = (BitRow::zeros(self.n), self.one());
        let mut base = (self.one(), BitRow::zeros(self.n));
        while k > 0 {
            if k & 1 == 1 {
                acc = self.combine(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// `a t + b I == I`, checked on every entry (t12 may be a zero divisor).
    fn is_identity(&self, x: &Pair) -> bool {
        let (a, b) = x;
        let one = self.one();
        cyclic_mul(a, &self.t[0][1]).is_zero()
            && cyclic_mul(a, &self.t[1][0]).is_zero()
            && cyclic_mul(a, &self.t[0][0]).xor(b) == one
            && cyclic_mul(a, &self.t[1][1]).xor(b) == one
    }

    /// Some multiple of the order, verified by exponentiation.
    fn known_multiple(&self) -> Option<u64> {
        let n = self.n as u64;
        let s = n.trailing_zeros();
        let m = n >> s;
        let mut candidates = vec![2u64, 3];
        for f in [1u64, 2, 3] {
            if let Some(c) = n.checked_mul(f) {
                candidates.push(c);
            }
        }
        if n.is_multiple_of(2) {
            candidates.push(3 * n / 2);
        }
        if let Some(d) = numtheory::order_of_two(m, 1 << 20) {
            if 2 * d < 63 {
                let base = (1u64 << (2 * d)) - 1;
                if let Some(c) = 1u64.checked_shl(s + 1).and_then(|p| p.checked_mul(base)) {
                    candidates.push(c);
                }
            }
        }
        candidates
            .into_iter()
            .find(|&c| self.is_identity(&self.pow(c)))
    }

    fn reduce_order(&self, multiple: u64) -> u64 {
        let mut order = multiple;
        for (p, _) in numtheory::factor(multiple) {
            while order.is_multiple_of(p) && self.is_identity(&self.pow(order / p)) {
                order /= p;
            }
        }
        order
    }

    fn iterate(&self, budget: u64) -> Result<u64, CqcaError> {
        // a_{k+1} = gamma a_k + b_k, b_{k+1} = a_k
        let mut a = self.one();
        let mut b = BitRow::zeros(self.n);
        for k in 1..=budget {
            if self.is_identity(&(a.clone(), b.clone())) {
                return Ok(k);
            }
            let na = self.gamma.mul_dense(&a).xor(&b);
            b = a;
            a = na;
        }
        Err(CqcaError::PeriodBudgetExceeded(budget))
    }
}

/// On-disk or inline description of an automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CqcaSpec {
    Trace { trace: LaurentPoly },
    Matrix { matrix: [[LaurentPoly; 2]; 2] },
}

impl CqcaSpec {
    pub fn build(&self) -> Result<CqcaMatrix, CqcaError> {
        match self {
            CqcaSpec::Trace { trace } => CqcaMatrix::simple(trace.clone()),
            CqcaSpec::Matrix { matrix } => CqcaMatrix::new(
                matrix[0][0].clone(),
                matrix[0][1].clone(),
                matrix[1][0].clone(),
                matrix[1][1].clone(),
            ),
        }
    }
}

impl From<&CqcaMatrix> for CqcaSpec {
    fn from(t: &CqcaMatrix) -> Self {
        CqcaSpec::Matrix {
            matrix: t.m.e.clone(),
        }
    }
}

/// Resolves a preset name, `trace=<poly>`, inline JSON, or a path to a JSON
/// spec file.
pub fn load_cqca(arg: &str) -> Result<CqcaMatrix, CqcaError> {
    if let Ok(t) = CqcaMatrix::preset(arg) {
        return Ok(t);
    }
    if let Some(poly) = arg.strip_prefix("trace=") {
        return CqcaMatrix::simple(poly.parse()?);
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        let path = Path::new(arg);
        if !path.exists() {
            return Err(CqcaError::UnknownPreset(arg.to_string()));
        }
        std::fs::read_to_string(path).map_err(|source| CqcaError::Io {
            path: arg.to_string(),
            source,
        })?
    };
    let spec: CqcaSpec = serde_json::from_str(&text).map_err(|e| {
        CqcaError::Spec(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    spec.build()
}

impl FromStr for CqcaMatrix {
    type Err = CqcaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        load_cqca(s)
    }
}

impl fmt::Debug for CqcaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CqcaMatrix{:?}", self.m)
    }
}

impl fmt::Display for CqcaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

/// Random symmetric polynomial with terms in `[-reach, reach]`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, reach: i64) -> LaurentPoly {
    let mut exps = Vec::new();
    if rng.random_bool(0.5) {
        exps.push(0);
    }
    for k in 1..=reach {
        if rng.random_bool(0.5) {
            exps.push(k);
            exps.push(-k);
        }
    }
    LaurentPoly::from_exponents(exps)
}

/// Random valid automaton: a product of up to `factors` simple automata,
/// interleaved with random phase conjugations.
pub fn random_cqca<R: Rng + ?Sized>(rng: &mut R, reach: i64, factors: usize) -> CqcaMatrix {
    let mut t = CqcaMatrix::simple(random_symmetric(rng, reach)).expect("simple is valid");
    for _ in 1..rng.random_range(1..=factors.max(1)) {
        let f = CqcaMatrix::simple(random_symmetric(rng, reach)).expect("simple is valid");
        t = t.compose(&f).expect("product is valid");
        if rng.random_bool(0.3) {
            t = t.conjugate_basis(Basis::Phase);
        }
    }
    t
}
