//! L-cycle symmetry operators of the fixed-point states, their raster
//! output, and faithfulness checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitRow;
use crate::cqca::{CqcaClass, CqcaError, CqcaMatrix};
use crate::gf2;
use crate::pauli::{apply_cqca, find_gliders, is_glider, PauliError, PauliString};

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Cqca(#[from] CqcaError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("{0} is not a glider of this automaton")]
    NotAGlider(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    OneQubit,
    TwoQubit,
}

impl CellKind {
    pub fn qubits_per_site(self) -> usize {
        match self {
            CellKind::OneQubit => 1,
            CellKind::TwoQubit => 2,
        }
    }
}

impl FromStr for CellKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" | "one_qubit" => Ok(CellKind::OneQubit),
            "two" | "two_qubit" => Ok(CellKind::TwoQubit),
            _ => Err(format!("unknown cell kind '{s}' (expected one|two)")),
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellKind::OneQubit => "one_qubit",
            CellKind::TwoQubit => "two_qubit",
        })
    }
}

/// One on-site layer: `a` is the X-mask on the a-qubits (the only qubits of
/// a one-qubit cell), `b` the X-mask on the b-qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternRow {
    pub a: BitRow,
    pub b: BitRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryPattern {
    pub n: usize,
    pub l: usize,
    pub cell: CellKind,
    pub seed: PauliString,
    pub rows: Vec<PatternRow>,
}

fn layer(p: &PauliString, cell: CellKind) -> PatternRow {
    match cell {
        CellKind::OneQubit => PatternRow {
            a: p.xbits().clone(),
            b: BitRow::zeros(p.n()),
        },
        CellKind::TwoQubit => PatternRow {
            a: p.xbits().clone(),
            b: p.zbits().clone(),
        },
    }
}

/// Rows `u(t^m xi)` (or `u'(t^m xi)`) for `m = 0..L`.
pub fn build_cycle(
    t: &CqcaMatrix,
    seed: &PauliString,
    cell: CellKind,
) -> Result<SymmetryPattern, SymmetryError> {
    let l = t.period(seed.n())? as usize;
    let mut rows = Vec::with_capacity(l);
    let mut p = seed.clone();
    for _ in 0..l {
        rows.push(layer(&p, cell));
        p = apply_cqca(t, &p);
    }
    debug_assert_eq!(&p, seed);
    Ok(SymmetryPattern {
        n: seed.n(),
        l,
        cell,
        seed: seed.clone(),
        rows,
    })
}

/// Diagonal line pattern generated by a glider, one-qubit cell.
pub fn line_symmetry(
    t: &CqcaMatrix,
    glider: &PauliString,
) -> Result<SymmetryPattern, SymmetryError> {
    let c = match t.classify() {
        CqcaClass::Glider(c) => c as i64,
        other => return Err(PauliError::NotGlider(other).into()),
    };
    if !(is_glider(t, glider, c) || is_glider(t, glider, -c)) {
        return Err(SymmetryError::NotAGlider(glider.to_string()));
    }
    build_cycle(t, glider, CellKind::OneQubit)
}

impl SymmetryPattern {
    /// All layers concatenated into one row.
    pub fn flatten(&self) -> BitRow {
        let mut bits = Vec::new();
        for r in &self.rows {
            for i in 0..self.n {
                bits.push(r.a.get(i));
                if self.cell == CellKind::TwoQubit {
                    bits.push(r.b.get(i));
                }
            }
        }
        BitRow::from_bools(&bits)
    }

    pub fn is_blank(&self) -> bool {
        self.rows.iter().all(|r| r.a.is_zero() && r.b.is_zero())
    }

    fn row_text(&self, r: &PatternRow) -> String {
        (0..self.n)
            .map(|i| match (self.cell, r.a.get(i), r.b.get(i)) {
                (CellKind::OneQubit, true, _) => 'X',
                (CellKind::OneQubit, false, _) => '.',
                (CellKind::TwoQubit, false, false) => '.',
                (CellKind::TwoQubit, true, false) => 'A',
                (CellKind::TwoQubit, false, true) => 'B',
                (CellKind::TwoQubit, true, true) => '2',
            })
            .collect()
    }

    fn row_bits(&self, r: &PatternRow) -> String {
        let mut s = String::with_capacity(2 * self.n);
        for i in 0..self.n {
            s.push(if r.a.get(i) { '1' } else { '0' });
            if self.cell == CellKind::TwoQubit {
                s.push(if r.b.get(i) { '1' } else { '0' });
            }
        }
        s
    }

    pub fn render(&self, format: RenderFormat) -> Vec<u8> {
        let mut out = String::new();
        match format {
            RenderFormat::Ascii => {
                for r in &self.rows {
                    out.push_str(&self.row_text(r));
                    out.push('\n');
                }
            }
            RenderFormat::Pbm => {
                let width = self.n * self.cell.qubits_per_site();
                out.push_str(&format!("P1\n{} {}\n", width, self.rows.len()));
                for r in &self.rows {
                    out.push_str(&self.row_bits(r));
                    out.push('\n');
                }
            }
            RenderFormat::Json => {
                let doc = PatternJson {
                    n: self.n,
                    l: self.l,
                    cell: self.cell,
                    seed: self.seed.to_string(),
                    rows: self.rows.iter().map(|r| self.row_bits(r)).collect(),
                };
                out = serde_json::to_string_pretty(&doc).expect("serializable");
                out.push('\n');
            }
        }
        out.into_bytes()
    }
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    n: usize,
    l: usize,
    cell: CellKind,
    seed: String,
    rows: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Pbm,
    Json,
}

impl FromStr for RenderFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "pbm" => Ok(RenderFormat::Pbm),
            "json" => Ok(RenderFormat::Json),
            _ => Err(format!("unknown format '{s}' (expected ascii|pbm|json)")),
        }
    }
}

/// Unit seeds `X_i, Z_i` for all sites.
pub fn unit_seeds(n: usize) -> Vec<PauliString> {
    (0..n as i64)
        .flat_map(|i| [PauliString::x(n, i), PauliString::z(n, i)])
        .collect()
}

/// The map from seeds to patterns has trivial kernel.
pub fn faithfulness_check(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
) -> Result<bool, SymmetryError> {
    let rows: Vec<BitRow> = unit_seeds(n)
        .iter()
        .map(|s| build_cycle(t, s, cell).map(|p| p.flatten()))
        .collect::<Result<_, _>>()?;
    let width = rows.first().map_or(0, |r| r.len());
    Ok(gf2::rank(width, &rows) == 2 * n)
}

/// Number of independent line symmetries of a glider automaton.
pub fn line_group_rank(t: &CqcaMatrix, n: usize) -> Result<usize, SymmetryError> {
    let pats: Vec<BitRow> = find_gliders(t, n)?
        .iter()
        .map(|g| line_symmetry(t, &g.pauli).map(|p| p.flatten()))
        .collect::<Result<_, _>>()?;
    let width = pats.first().map_or(0, |r| r.len());
    Ok(gf2::rank(width, &pats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;

    #[test]
    fn tg_cone_rows() {
        let p = build_cycle(&CqcaMatrix::tg(), &PauliString::z(6, 0), CellKind::OneQubit).unwrap();
        assert_eq!(p.l, 6);
        let art = String::from_utf8(p.render(RenderFormat::Ascii)).unwrap();
        assert_eq!(art, "......\nX.....\n.X...X\nX.X.X.\n.X...X\nX.....\n");
    }

    #[test]
    fn tp_rows_are_single_sites() {
        let p = build_cycle(&CqcaMatrix::tp(), &PauliString::z(4, 1), CellKind::OneQubit).unwrap();
        assert_eq!(p.l, 2);
        assert_eq!(p.rows[0].a, BitRow::zeros(4));
        assert_eq!(p.rows[1].a, BitRow::unit(4, 1));
    }

    #[test]
    fn blank_for_identity_seed() {
        let p = build_cycle(&CqcaMatrix::tf(), &PauliString::identity(8), CellKind::OneQubit)
            .unwrap();
        assert!(p.is_blank());
    }

    #[test]
    fn te_two_qubit_rows() {
        let p = build_cycle(&CqcaMatrix::te(), &PauliString::x(6, 0), CellKind::TwoQubit).unwrap();
        let art = String::from_utf8(p.render(RenderFormat::Ascii)).unwrap();
        assert_eq!(art, "A.....\nAB...B\n");
    }

    #[test]
    fn pbm_header_and_width() {
        let p = build_cycle(&CqcaMatrix::te(), &PauliString::x(3, 0), CellKind::TwoQubit).unwrap();
        let pbm = String::from_utf8(p.render(RenderFormat::Pbm)).unwrap();
        assert_eq!(pbm, "P1\n6 2\n100000\n100101\n");
    }

    #[test]
    fn line_rank_tg() {
        for n in [4, 6, 8] {
            assert_eq!(line_group_rank(&CqcaMatrix::tg(), n).unwrap(), 2 * (n - 1));
        }
        let not = PauliString::from_letters(6, &[(0, Letter::X)]);
        assert!(matches!(
            line_symmetry(&CqcaMatrix::tg(), &not),
            Err(SymmetryError::NotAGlider(_))
        ));
        assert!(line_symmetry(&CqcaMatrix::tp(), &not).is_err());
    }

    #[test]
    fn faithful_examples() {
        assert!(faithfulness_check(&CqcaMatrix::tg(), 4, CellKind::OneQubit).unwrap());
        assert!(faithfulness_check(&CqcaMatrix::te(), 4, CellKind::TwoQubit).unwrap());
    }
}
