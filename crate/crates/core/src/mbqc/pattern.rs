use serde::{Deserialize, Serialize};

use super::gates::{all_generators, gate_generator, seeds, GateGenerator};
use super::layout::entangling_layout;
use super::linalg::{pauli_matrix, virtual_clifford};
use super::state::Sub;
use super::MbqcError;
use crate::cqca::{CqcaMatrix, CqcaSpec};
use crate::pauli::{apply_power, Letter, PauliString};
use crate::symmetry::CellKind;

/// Tilted qubit: ring site, block row `l` (1-based column) and sublattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltSite {
    pub site: usize,
    pub column: usize,
    pub sub: Sub,
}

impl TiltSite {
    pub fn seed(&self) -> Letter {
        match self.sub {
            Sub::A => Letter::Z,
            Sub::B => Letter::X,
        }
    }
}

/// One logical rotation: a block of `n x l` cells measured in `|+>, |->`
/// except at most one tilted qubit, followed by `buffers` default blocks.
///
/// The tilted qubit is measured in `{|+> + i tau |->, |-> - i tau |+>}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPattern {
    pub cqca: CqcaSpec,
    pub n: usize,
    pub l: usize,
    pub cell: CellKind,
    pub tilt: Option<TiltSite>,
    /// Requested rotation angle `d alpha`.
    pub angle: f64,
    /// Tilt parameter realising `exp(2i d alpha nu P)` with `nu` as below.
    pub tau: f64,
    /// `nu` the tilt was rescaled by.
    pub nu: f64,
    pub buffers: usize,
    /// Generator `T^{L-l+1}(P_i)`.
    pub generator: Option<PauliString>,
    /// Per gate-block column, one character per qubit (`a` bits then `b`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<String>>,
}

impl MeasurementPattern {
    pub fn automaton(&self) -> Result<CqcaMatrix, MbqcError> {
        Ok(self.cqca.build()?)
    }

    pub fn qubits_per_column(&self) -> usize {
        self.n * self.cell.qubits_per_site()
    }

    /// Rescales the tilt for a state with the given `nu`.
    pub fn with_nu(mut self, nu: f64) -> Result<Self, MbqcError> {
        if nu.abs() < 1e-12 {
            return Err(MbqcError::InvalidArgument(
                "nu = 0: the rotation cannot be driven".into(),
            ));
        }
        self.tau = self.tau * self.nu / nu;
        self.nu = nu;
        Ok(self)
    }

    /// Outcome masks for the gate block; all zero when absent.
    pub fn outcome_masks(&self) -> Result<Vec<usize>, MbqcError> {
        let Some(rows) = &self.outcomes else {
            return Ok(vec![0; self.l]);
        };
        if rows.len() != self.l {
            return Err(MbqcError::InvalidArgument(format!(
                "expected {} outcome rows, found {}",
                self.l,
                rows.len()
            )));
        }
        rows.iter().map(|r| parse_outcomes(r, self.qubits_per_column())).collect()
    }

    pub fn validate(&self) -> Result<(), MbqcError> {
        let t = self.automaton()?;
        let period = t.period(self.n)? as usize;
        if self.l != period {
            return Err(MbqcError::InvalidArgument(format!(
                "block length {} differs from the period {period}",
                self.l
            )));
        }
        if let Some(tilt) = self.tilt {
            if tilt.column == 0 || tilt.column > self.l {
                return Err(MbqcError::RowOutOfRange { l: tilt.column, period });
            }
            if tilt.site >= self.n || (tilt.sub == Sub::B && self.cell == CellKind::OneQubit) {
                return Err(MbqcError::InvalidArgument(format!("tilt {tilt:?} outside the block")));
            }
        }
        self.outcome_masks().map(|_| ())
    }
}

pub fn parse_outcomes(s: &str, width: usize) -> Result<usize, MbqcError> {
    if s.len() != width || width >= usize::BITS as usize {
        return Err(MbqcError::InvalidArgument(format!(
            "outcome row `{s}` must have {width} bits"
        )));
    }
    s.chars().enumerate().try_fold(0usize, |m, (k, c)| match c {
        '0' => Ok(m),
        '1' => Ok(m | 1 << k),
        _ => Err(MbqcError::InvalidArgument(format!("bad outcome bit `{c}`"))),
    })
}

pub fn format_outcomes(mask: usize, width: usize) -> String {
    (0..width).map(|k| if mask >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// What to rotate about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateRequest {
    /// Tilt at `(site, l)` with the given seed letter.
    Generator { site: usize, l: usize, seed: Letter },
    /// Any generator whose image equals this string.
    Pauli(PauliString),
    /// A string on the logical qubits of the entangling layout.
    Logical(PauliString),
}

fn distance(a: &PauliString, b: &PauliString) -> usize {
    (0..a.n() as i64).filter(|&k| a.get(k) != b.get(k)).count()
}

fn resolve(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
    request: &GateRequest,
) -> Result<GateGenerator, MbqcError> {
    let (target, images): (PauliString, Vec<(GateGenerator, PauliString)>) = match request {
        GateRequest::Generator { site, l, seed } => {
            return gate_generator(t, n, *site, *l, cell, *seed);
        }
        GateRequest::Pauli(p) => {
            if p.n() != n {
                return Err(MbqcError::InvalidArgument(format!("{p} is not on {n} sites")));
            }
            let gens = all_generators(t, n, cell)?;
            let images = gens
                .into_iter()
                .map(|g| {
                    let img = g.image.clone();
                    (g, img)
                })
                .collect();
            (p.clone(), images)
        }
        GateRequest::Logical(p) => {
            let layout = entangling_layout(t, n, cell)?;
            if p.n() != layout.logical_sites.len() {
                return Err(MbqcError::InvalidArgument(format!(
                    "{p} is not on {} logical qubits",
                    layout.logical_sites.len()
                )));
            }
            let gens = all_generators(t, n, cell)?;
            let projected = gens
                .into_iter()
                .filter_map(|g| layout.project(&g.image).map(|q| (g, q)))
                .collect();
            (p.clone(), projected)
        }
    };
    if let Some((g, _)) = images.iter().find(|(_, img)| *img == target) {
        return Ok(g.clone());
    }
    let best = images.iter().map(|(_, i)| distance(i, &target)).min().unwrap_or(0);
    let mut nearest: Vec<String> = images
        .iter()
        .filter(|(_, i)| distance(i, &target) == best)
        .map(|(g, i)| format!("{i} (site {}, l {}, {:?})", g.site, g.l, g.seed))
        .collect();
    nearest.dedup();
    nearest.truncate(3);
    Err(MbqcError::Unreachable {
        target: target.to_string(),
        nearest: nearest.join(", "),
    })
}

/// Sign `s` with `(W^dag)^m V(P) W^m = s V(T^m P)` for the synthesized `W`.
pub fn conjugation_sign(t: &CqcaMatrix, p: &PauliString, m: usize) -> f64 {
    let n = p.n();
    let w = virtual_clifford(t, n);
    let mut q = pauli_matrix(p);
    for _ in 0..m {
        q = w.adjoint() * q * &w;
    }
    let img = pauli_matrix(&apply_power(t, p, m as u64));
    let overlap = (q * img).trace().re / (1usize << n) as f64;
    overlap.signum()
}

/// Pattern driving `exp(2i angle P)` for the requested generator `P`, at
/// `nu = 1`; see [`MeasurementPattern::with_nu`].
pub fn compile_rotation(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
    request: &GateRequest,
    angle: f64,
    buffers: usize,
) -> Result<MeasurementPattern, MbqcError> {
    let l = t.period(n)? as usize;
    if !angle.is_finite() {
        return Err(MbqcError::InvalidArgument("angle must be finite".into()));
    }
    let (tilt, tau, generator) = if angle == 0.0 {
        (None, 0.0, None)
    } else {
        let g = resolve(t, n, cell, request)?;
        debug_assert!(seeds(cell).contains(&g.seed));
        let sub = if g.seed == Letter::Z { Sub::A } else { Sub::B };
        let m = l - g.l + 1 + buffers * l;
        let seed = PauliString::single(n, g.site as i64, g.seed);
        let sigma = conjugation_sign(t, &seed, m);
        let tilt = TiltSite {
            site: g.site,
            column: g.l,
            sub,
        };
        (Some(tilt), -2.0 * angle * sigma, Some(g.image))
    };
    Ok(MeasurementPattern {
        cqca: CqcaSpec::from(t),
        n,
        l,
        cell,
        tilt,
        angle,
        tau,
        nu: 1.0,
        buffers,
        generator,
        outcomes: None,
    })
}
