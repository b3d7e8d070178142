use serde::Serialize;

use super::MbqcError;
use crate::cqca::CqcaMatrix;
use crate::pauli::{apply_power, Letter, PauliString};
use crate::symmetry::CellKind;

/// Rotation generator of a tilted measurement at site `i`, block row `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateGenerator {
    pub site: usize,
    pub l: usize,
    pub cell: CellKind,
    pub seed: Letter,
    /// `T^{L-l+1}(P_i)`.
    pub image: PauliString,
}

pub fn gate_generator(
    t: &CqcaMatrix,
    n: usize,
    i: usize,
    l: usize,
    cell: CellKind,
    p: Letter,
) -> Result<GateGenerator, MbqcError> {
    let period = t.period(n)? as usize;
    if l == 0 || l > period {
        return Err(MbqcError::RowOutOfRange { l, period });
    }
    if i >= n {
        return Err(MbqcError::InvalidArgument(format!("site {i} out of range 0..{n}")));
    }
    match (cell, p) {
        (CellKind::OneQubit, Letter::Z) | (CellKind::TwoQubit, Letter::Z | Letter::X) => {}
        _ => {
            return Err(MbqcError::InvalidArgument(format!(
                "seed {p:?} not available in a {cell} cell"
            )))
        }
    }
    let seed = PauliString::single(n, i as i64, p);
    Ok(GateGenerator {
        site: i,
        l,
        cell,
        seed: p,
        image: apply_power(t, &seed, (period - l + 1) as u64),
    })
}

/// Seeds a tilted measurement can address in the given cell.
pub fn seeds(cell: CellKind) -> &'static [Letter] {
    match cell {
        CellKind::OneQubit => &[Letter::Z],
        CellKind::TwoQubit => &[Letter::Z, Letter::X],
    }
}

/// Every generator over sites, rows and seeds.
pub fn all_generators(
    t: &CqcaMatrix,
    n: usize,
    cell: CellKind,
) -> Result<Vec<GateGenerator>, MbqcError> {
    let period = t.period(n)? as usize;
    let mut out = Vec::new();
    for l in 1..=period {
        for i in 0..n {
            for &p in seeds(cell) {
                out.push(gate_generator(t, n, i, l, cell, p)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_rows() {
        let tg = CqcaMatrix::tg();
        let g1 = gate_generator(&tg, 6, 2, 1, CellKind::OneQubit, Letter::Z).unwrap();
        assert_eq!(g1.image, PauliString::z(6, 2));
        let gl = gate_generator(&tg, 6, 2, 6, CellKind::OneQubit, Letter::Z).unwrap();
        assert_eq!(gl.image, PauliString::x(6, 2));
        assert!(matches!(
            gate_generator(&tg, 6, 2, 7, CellKind::OneQubit, Letter::Z),
            Err(MbqcError::RowOutOfRange { l: 7, period: 6 })
        ));
        assert!(gate_generator(&tg, 6, 2, 1, CellKind::OneQubit, Letter::X).is_err());
    }

    #[test]
    fn two_qubit_first_row() {
        let te = CqcaMatrix::te();
        let z = gate_generator(&te, 4, 1, 1, CellKind::TwoQubit, Letter::Z).unwrap();
        let x = gate_generator(&te, 4, 1, 1, CellKind::TwoQubit, Letter::X).unwrap();
        assert_eq!(z.image, PauliString::z(4, 1));
        assert_eq!(x.image, PauliString::x(4, 1));
    }
}
