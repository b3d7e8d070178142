use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{MbqcError, DIMENSION_BUDGET};
use crate::cqca::CqcaMatrix;
use crate::symmetry::CellKind;

/// How the junk tensors `B^j` were produced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Junk {
    /// `B^j = 1`: the fixed point.
    Fixed,
    /// `B^j = 1 + eps * G_j` with `G_j` real symmetric Gaussian.
    Perturbed { eps: f64, seed: u64 },
    /// `B^0 = diag(1, 1/2)`, every other `B^j` a rotation by a quarter turn,
    /// so the single-flip overlaps vanish.
    ZeroOverlap,
}

impl fmt::Display for Junk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Junk::Fixed => f.write_str("fixed"),
            Junk::Perturbed { eps, seed } => write!(f, "perturbed:{eps}:{seed}"),
            Junk::ZeroOverlap => f.write_str("zero-overlap"),
        }
    }
}

impl FromStr for Junk {
    type Err = MbqcError;

    fn from_str(s: &str) -> Result<Self, MbqcError> {
        let bad = || MbqcError::InvalidArgument(format!("bad state `{s}`"));
        match s {
            "fixed" => Ok(Junk::Fixed),
            "zero-overlap" => Ok(Junk::ZeroOverlap),
            _ => {
                let rest = s.strip_prefix("perturbed:").ok_or_else(bad)?;
                let (eps, seed) = rest.split_once(':').ok_or_else(bad)?;
                let eps: f64 = eps.parse().map_err(|_| bad())?;
                if !eps.is_finite() || eps < 0.0 {
                    return Err(bad());
                }
                Ok(Junk::Perturbed {
                    eps,
                    seed: seed.parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

/// A state in the phase of `t`: tensors `B^j ⊗ C^j T` on a ring of `n`
/// sites, with the same `B^j` in every column.
#[derive(Clone, Debug)]
pub struct PhaseState {
    pub t: CqcaMatrix,
    pub n: usize,
    pub cell: CellKind,
    pub period: usize,
    pub junk: Junk,
    /// Indexed by column configuration: bit `i` is qubit `a` of site `i`,
    /// bit `n + i` qubit `b`. Empty for the fixed point.
    b: Vec<DMatrix<f64>>,
}

impl PhaseState {
    pub fn new(t: &CqcaMatrix, n: usize, cell: CellKind, junk: Junk) -> Result<Self, MbqcError> {
        if n == 0 {
            return Err(MbqcError::InvalidArgument("N must be positive".into()));
        }
        let bond: usize = if junk == Junk::Fixed { 1 } else { 2 };
        let dim = bond.checked_shl(n as u32).unwrap_or(usize::MAX);
        if n >= 30 || dim > DIMENSION_BUDGET {
            return Err(MbqcError::DimensionBudget(dim, DIMENSION_BUDGET));
        }
        let configs = 1usize << (n * cell.qubits_per_site());
        let b = match junk {
            Junk::Fixed => Vec::new(),
            Junk::Perturbed { eps, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..configs)
                    .map(|_| {
                        let mut g = DMatrix::<f64>::zeros(2, 2);
                        for r in 0..2 {
                            for c in r..2 {
                                let v: f64 = StandardNormal.sample(&mut rng);
                                g[(r, c)] = v;
                                g[(c, r)] = v;
                            }
                        }
                        DMatrix::identity(2, 2) + g * eps
                    })
                    .collect()
            }
            Junk::ZeroOverlap => (0..configs)
                .map(|j| {
                    if j == 0 {
                        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5])
                    } else {
                        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
                    }
                })
                .collect(),
        };
        Ok(PhaseState {
            t: t.clone(),
            n,
            cell,
            period: t.period(n)? as usize,
            junk,
            b,
        })
    }

    pub fn fixed(t: &CqcaMatrix, n: usize, cell: CellKind) -> Result<Self, MbqcError> {
        Self::new(t, n, cell, Junk::Fixed)
    }

    pub fn bond(&self) -> usize {
        self.b.first().map_or(1, |m| m.nrows())
    }

    /// `D_B * 2^N`.
    pub fn dimension(&self) -> usize {
        self.bond() << self.n
    }

    pub fn configurations(&self) -> usize {
        1 << (self.n * self.cell.qubits_per_site())
    }

    pub fn junk(&self, config: usize) -> DMatrix<f64> {
        self.b
            .get(config)
            .cloned()
            .unwrap_or_else(|| DMatrix::identity(1, 1))
    }

    /// `sum_j B^j ⊗ B^j`.
    pub fn transfer(&self) -> DMatrix<f64> {
        if self.b.is_empty() {
            return DMatrix::from_element(1, 1, self.configurations() as f64);
        }
        let d = self.bond();
        let mut e = DMatrix::zeros(d * d, d * d);
        for m in &self.b {
            e += m.kronecker(m);
        }
        e
    }
}

/// Leading eigenvalue with right and left eigenvectors, by power iteration.
fn leading_pair(m: &DMatrix<f64>) -> (f64, DVector<f64>, DVector<f64>) {
    fn iterate(m: &DMatrix<f64>) -> DVector<f64> {
        let d = m.nrows();
        let mut v = DVector::from_fn(d, |i, _| 1.0 + 0.1 * i as f64).normalize();
        for _ in 0..200_000 {
            let w = m * &v;
            let norm = w.norm();
            if norm == 0.0 {
                break;
            }
            let mut w = w / norm;
            if w.dot(&v) < 0.0 {
                w = -w;
            }
            let delta = (&w - &v).norm();
            v = w;
            if delta < 1e-15 {
                break;
            }
        }
        v
    }
    let r = iterate(m);
    let l = iterate(&m.transpose());
    let lambda = l.dot(&(m * &r)) / l.dot(&r);
    (lambda, r, l)
}

/// `|lambda_2 / lambda_1|` of the transfer operator.
pub fn gap_ratio(state: &PhaseState) -> f64 {
    let e = state.transfer();
    if e.nrows() == 1 {
        return 0.0;
    }
    let mut mods: Vec<f64> = e.complex_eigenvalues().iter().map(|c| c.norm()).collect();
    mods.sort_by(|a, b| b.total_cmp(a));
    if mods[0] == 0.0 {
        1.0
    } else {
        mods[1] / mods[0]
    }
}

fn check_injective(state: &PhaseState) -> Result<f64, MbqcError> {
    let r = gap_ratio(state);
    if r >= 1.0 - 1e-9 {
        return Err(MbqcError::NonInjective(r));
    }
    Ok(r)
}

/// Which qubit of a site cell is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sub {
    A,
    B,
}

impl Sub {
    pub fn config_bit(self, n: usize, site: usize) -> usize {
        match self {
            Sub::A => site,
            Sub::B => n + site,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NuReport {
    pub site: usize,
    pub l: usize,
    pub sub: Sub,
    pub nu: f64,
    pub gap_ratio: f64,
    /// `nu = 0`: the rotation cannot be driven at this qubit.
    pub failure: bool,
}

/// `<v| B^{e} |v> / <v| B^0 |v>` with `v` the leading eigenvectors of `B^0`
/// and `e` the configuration with only the measured qubit flipped.
pub fn estimate_nu(state: &PhaseState, site: usize, l: usize, sub: Sub) -> Result<NuReport, MbqcError> {
    if l == 0 || l > state.period {
        return Err(MbqcError::RowOutOfRange { l, period: state.period });
    }
    if site >= state.n || (sub == Sub::B && state.cell == CellKind::OneQubit) {
        return Err(MbqcError::InvalidArgument(format!(
            "qubit ({site}, {sub:?}) not in the cell"
        )));
    }
    let gap = check_injective(state)?;
    let nu = if state.b.is_empty() {
        1.0
    } else {
        let (_, r, lv) = leading_pair(&state.b[0]);
        let e = state.junk(1 << sub.config_bit(state.n, site));
        lv.dot(&(e * &r)) / lv.dot(&(&state.b[0] * &r))
    };
    Ok(NuReport {
        site,
        l,
        sub,
        nu,
        gap_ratio: gap,
        failure: nu.abs() < 1e-12,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WireReport {
    pub gap_ratio: f64,
    /// Decay rate per block, `-L ln(gap_ratio)`.
    pub rate: f64,
    /// `ceil(10 / rate)`.
    pub default_buffers: usize,
    pub residuals: Vec<(usize, f64)>,
}

impl WireReport {
    /// Least-squares line through `(k, ln residual)`: `(slope, r^2)`.
    pub fn log_linear_fit(&self) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .residuals
            .iter()
            .filter(|(_, r)| *r > 0.0)
            .map(|&(k, r)| (k as f64, r.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        Some((slope, r2))
    }
}

/// Distance of `k` outcome-averaged buffer blocks from the rank-one channel
/// that forgets the junk state.
pub fn oblivious_wire(state: &PhaseState, ks: &[usize]) -> Result<WireReport, MbqcError> {
    let e = state.transfer();
    let l = state.period as i32;
    let r = gap_ratio(state);
    let (lambda, rv, lv) = leading_pair(&e);
    let proj = &rv * lv.transpose() / lv.dot(&rv);
    let step = e.pow(state.period as u32) / lambda.powi(l);
    let residuals = ks
        .iter()
        .map(|&k| {
            let m = step.pow(k as u32);
            (k, (m - &proj).svd(false, false).singular_values.max())
        })
        .collect();
    let rate = if r == 0.0 { f64::INFINITY } else { -(l as f64) * r.ln() };
    let default_buffers = if rate.is_infinite() {
        0
    } else if rate <= 0.0 {
        usize::MAX
    } else {
        (10.0 / rate).ceil() as usize
    };
    Ok(WireReport {
        gap_ratio: r,
        rate,
        default_buffers,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_nu_is_one() {
        let s = PhaseState::fixed(&CqcaMatrix::tg(), 3, CellKind::OneQubit).unwrap();
        for i in 0..3 {
            let r = estimate_nu(&s, i, 1, Sub::A).unwrap();
            assert_eq!(r.nu, 1.0);
        }
        let w = oblivious_wire(&s, &[0, 1, 2]).unwrap();
        assert!(w.residuals.iter().all(|&(_, r)| r < 1e-12));
    }

    #[test]
    fn perturbed_nu_near_one() {
        let j: Junk = "perturbed:0.1:7".parse().unwrap();
        let s = PhaseState::new(&CqcaMatrix::tg(), 2, CellKind::OneQubit, j).unwrap();
        let r = estimate_nu(&s, 0, 1, Sub::A).unwrap();
        assert!((r.nu - 1.0).abs() < 0.5, "{}", r.nu);
        let w = oblivious_wire(&s, &[1, 2, 3, 4, 5, 6]).unwrap();
        let (slope, r2) = w.log_linear_fit().unwrap();
        assert!(slope < 0.0 && r2 > 0.99, "{slope} {r2}");
    }

    #[test]
    fn zero_overlap_flagged() {
        let s = PhaseState::new(&CqcaMatrix::tg(), 2, CellKind::OneQubit, Junk::ZeroOverlap).unwrap();
        assert!(estimate_nu(&s, 1, 1, Sub::A).unwrap().failure);
    }

    #[test]
    fn junk_round_trip() {
        for s in ["fixed", "zero-overlap", "perturbed:0.1:42"] {
            assert_eq!(s.parse::<Junk>().unwrap().to_string(), s);
        }
        assert!("perturbed:x:1".parse::<Junk>().is_err());
    }
}
