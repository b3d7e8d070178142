use serde::Serialize;

use super::MbqcError;
use crate::cqca::{CqcaClass, CqcaMatrix};
use crate::symmetry::CellKind;

/// Ring size and block length actually used for a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputationPeriod {
    pub requested_n: usize,
    pub n: usize,
    pub l: u64,
    pub class: CqcaClass,
    pub warning: Option<String>,
}

pub fn period_for_computation(t: &CqcaMatrix, n: usize) -> Result<ComputationPeriod, MbqcError> {
    if n == 0 {
        return Err(MbqcError::InvalidArgument("N must be positive".into()));
    }
    let class = t.classify();
    let (usable, warning) = match class {
        CqcaClass::Periodic(_) => (n, None),
        CqcaClass::Glider(c) => {
            let usable = n + n % 2;
            let warning = (c > 1).then(|| {
                format!("glider speed {c}: using the exact order, which may be below N")
            });
            (usable, warning)
        }
        CqcaClass::Fractal => {
            let usable = n.next_power_of_two();
            let warning = (usable != n).then(|| {
                format!("fractal periods are linear only on powers of two; using N = {usable}")
            });
            (usable, warning)
        }
    };
    Ok(ComputationPeriod {
        requested_n: n,
        n: usable,
        l: t.period(usable)?,
        class,
        warning,
    })
}

/// Site measurements consumed by one logical gate: `N * L * (1 + buffers)`.
pub fn measurements_per_gate(n: usize, l: u64, buffers: usize) -> u64 {
    n as u64 * l * (1 + buffers as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpeedupReport {
    pub n: usize,
    pub buffers: usize,
    pub l_fast: u64,
    pub l_slow: u64,
    pub per_gate_fast: u64,
    pub per_gate_slow: u64,
    /// `per_gate_fast / per_gate_slow` as written, e.g. `2/16`.
    pub ratio: String,
    /// The same ratio in lowest terms.
    pub ratio_reduced: String,
    /// Counts multiplied by qubits per site.
    pub physical_fast: u64,
    pub physical_slow: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compares measurement cost per gate of two automata on the same ring.
pub fn speedup(
    fast: (&CqcaMatrix, CellKind),
    slow: (&CqcaMatrix, CellKind),
    n: usize,
    buffers: usize,
) -> Result<SpeedupReport, MbqcError> {
    let l_fast = fast.0.period(n)?;
    let l_slow = slow.0.period(n)?;
    let per_gate_fast = measurements_per_gate(n, l_fast, buffers);
    let per_gate_slow = measurements_per_gate(n, l_slow, buffers);
    let g = gcd(per_gate_fast, per_gate_slow);
    Ok(SpeedupReport {
        n,
        buffers,
        l_fast,
        l_slow,
        per_gate_fast,
        per_gate_slow,
        ratio: format!("{l_fast}/{l_slow}"),
        ratio_reduced: format!("{}/{}", per_gate_fast / g, per_gate_slow / g),
        physical_fast: per_gate_fast * fast.1.qubits_per_site() as u64,
        physical_slow: per_gate_slow * slow.1.qubits_per_site() as u64,
    })
}
