use serde::Serialize;

use super::gates::{all_generators, seeds};
use super::MbqcError;
use crate::cqca::CqcaMatrix;
use crate::pauli::{apply_power, lie_closure, Letter, PauliString};
use crate::symmetry::CellKind;

/// Logical qubits on every `2n`-th site, the sites in between prepared in
/// eigenstates of the middle factors of the first non-local image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalLayout {
    pub n: usize,
    /// Half-width of the non-local image; logical spacing is `2 * half_width`.
    pub half_width: usize,
    pub spacing: usize,
    /// Number of automaton steps `m` giving the image `T^m(P_i)`.
    pub steps: usize,
    pub seed: Letter,
    /// Image centred on site 0.
    pub image: PauliString,
    pub logical_sites: Vec<usize>,
    /// Ancilla sites and the Pauli whose +1 eigenstate they start in.
    pub ancillas: Vec<(usize, Letter)>,
    /// Two-body logical generator for the pair around site `half_width`.
    pub effective: PauliString,
}

fn half_width(p: &PauliString) -> usize {
    let n = p.n();
    p.support().into_iter().map(|s| s.min(n - s)).max().unwrap_or(0)
}

pub fn entangling_layout(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
) -> Result<LogicalLayout, MbqcError> {
    if !t.is_entangling() {
        return Err(MbqcError::NotEntangling);
    }
    let period = t.period(n)? as usize;
    let mut found = None;
    'search: for m in 1..=period {
        for &p in seeds(cell) {
            let img = apply_power(t, &PauliString::single(n, 0, p), m as u64);
            let h = half_width(&img);
            if h > 0 {
                found = Some((m, p, img, h));
                break 'search;
            }
        }
    }
    let Some((steps, seed, image, h)) = found else {
        return Err(MbqcError::InvalidArgument(format!(
            "no non-local image on a ring of {n} sites"
        )));
    };
    let spacing = 2 * h;
    if !n.is_multiple_of(spacing) || n < 2 * spacing {
        return Err(MbqcError::InvalidArgument(format!(
            "ring size {n} must be a multiple of {} and hold two logical qubits",
            spacing
        )));
    }
    let logical_sites: Vec<usize> = (0..n).step_by(spacing).collect();
    let mut ancillas = Vec::new();
    for &base in &logical_sites {
        for j in 1..spacing {
            let letter = match image.get(j as i64 - h as i64) {
                Letter::I => Letter::Z,
                l => l,
            };
            ancillas.push((base + j, letter));
        }
    }
    let centred = image.translate(h as i64);
    let effective = centred.restrict(&logical_sites);
    Ok(LogicalLayout {
        n,
        half_width: h,
        spacing,
        steps,
        seed,
        image,
        logical_sites,
        ancillas,
        effective,
    })
}

impl LogicalLayout {
    /// The generator restricted to logical sites, or `None` when it would
    /// disturb an ancilla.
    pub fn project(&self, g: &PauliString) -> Option<PauliString> {
        for &(s, l) in &self.ancillas {
            let a = g.get(s as i64);
            if a != Letter::I && a != l {
                return None;
            }
        }
        Some(g.restrict(&self.logical_sites))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalityReport {
    pub universal: bool,
    pub logical_qubits: usize,
    pub closure_size: usize,
    pub target_size: usize,
    pub generators_total: usize,
    pub generators_used: usize,
    pub layout: Option<LogicalLayout>,
}

/// Largest ring size accepted by [`universality_check`].
pub const MAX_UNIVERSALITY_N: usize = 12;

pub fn universality_check(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
) -> Result<UniversalityReport, MbqcError> {
    if n == 0 || n > MAX_UNIVERSALITY_N {
        return Err(MbqcError::InvalidArgument(format!(
            "N = {n} outside 1..={MAX_UNIVERSALITY_N}"
        )));
    }
    let gens = all_generators(t, n, cell)?;
    let total = gens.len();
    let (layout, projected): (Option<LogicalLayout>, Vec<PauliString>) =
        if t.is_entangling() {
            let layout = entangling_layout(t, n, cell)?;
            let projected = gens
                .iter()
                .filter_map(|g| layout.project(&g.image))
                .filter(|p| !p.is_identity())
                .collect();
            (Some(layout), projected)
        } else {
            (None, gens.iter().map(|g| g.image.clone()).collect())
        };
    let q = layout.as_ref().map_or(n, |l| l.logical_sites.len());
    let closure = lie_closure(&projected);
    let target = 4usize.pow(q as u32) - 1;
    Ok(UniversalityReport {
        universal: closure.len() == target,
        logical_qubits: q,
        closure_size: closure.len(),
        target_size: target,
        generators_total: total,
        generators_used: projected.len(),
        layout,
    })
}
