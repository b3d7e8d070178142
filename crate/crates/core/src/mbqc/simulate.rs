use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::linalg::{
    frame_distance, pauli_from_masks, pauli_matrix, pauli_rotation, virtual_clifford, CMat, I,
};
use super::pattern::MeasurementPattern;
use super::state::{estimate_nu, PhaseState, Sub};
use super::{MbqcError, DIMENSION_BUDGET};
use crate::cqca::CqcaMatrix;
use crate::pauli::{apply_power, symplectic_product, PauliString};

/// Operator realised on the virtual space by one measured block.
#[derive(Clone, Debug)]
pub struct VirtualOperator {
    /// Full `D_B * 2^N` operator, junk factor first.
    pub full: CMat,
    /// Logical `2^N` part, normalised to be unitary when the branch is.
    pub logical: CMat,
    /// `sqrt(tr(R^dag R) / 2^N)` of the unnormalised logical part `R`.
    pub weight: f64,
}

/// `C^j = X^{b bits} Z^{a bits}` on the virtual ring.
fn byproduct_matrix(n: usize, config: usize) -> CMat {
    let mask = (1usize << n) - 1;
    let (z, x) = ((config & mask) as u64, (config >> n) as u64);
    // pauli_from_masks carries i^{x.z}; C^j does not.
    let ph = match (x & z).count_ones() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => -I,
        2 => Complex64::new(-1.0, 0.0),
        _ => I,
    };
    pauli_from_masks(n, x, z) * ph
}

/// `C^j` as a Pauli string.
pub fn byproduct_pauli(n: usize, config: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for i in 0..n {
        let z = config >> i & 1 == 1;
        let x = config >> (n + i) & 1 == 1;
        p.set(i as i64, crate::pauli::Letter::from_bits(x, z));
    }
    p
}

fn real_to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

fn check(state: &PhaseState, pattern: &MeasurementPattern) -> Result<(), MbqcError> {
    pattern.validate()?;
    if pattern.automaton()? != state.t || pattern.n != state.n || pattern.cell != state.cell {
        return Err(MbqcError::InvalidArgument(
            "pattern and state describe different automata, sizes or cells".into(),
        ));
    }
    if state.dimension() > DIMENSION_BUDGET {
        return Err(MbqcError::DimensionBudget(state.dimension(), DIMENSION_BUDGET));
    }
    Ok(())
}

/// Exact contraction of the gate block and its buffers. `outcomes` gives one
/// configuration mask per gate-block column; buffers are read as all `+`.
pub fn simulate_pattern(
    state: &PhaseState,
    pattern: &MeasurementPattern,
    outcomes: Option<&[usize]>,
) -> Result<VirtualOperator, MbqcError> {
    check(state, pattern)?;
    let stored;
    let outcomes = match outcomes {
        Some(o) => o,
        None => {
            stored = pattern.outcome_masks()?;
            &stored
        }
    };
    if outcomes.len() != pattern.l {
        return Err(MbqcError::InvalidArgument(format!(
            "expected {} outcome columns, found {}",
            pattern.l,
            outcomes.len()
        )));
    }
    let n = state.n;
    let w = virtual_clifford(&state.t, n);
    let bond = state.bond();
    let mut full = CMat::identity(bond << n, bond << n);
    let columns = pattern.l * (1 + pattern.buffers);
    for c in 1..=columns {
        let s = if c <= pattern.l { outcomes[c - 1] } else { 0 };
        let terms: Vec<(usize, Complex64)> = match pattern.tilt {
            Some(tilt) if tilt.column == c => {
                let e = 1usize << tilt.sub.config_bit(n, tilt.site);
                let it = I * pattern.tau;
                if s & e == 0 {
                    vec![(s, Complex64::new(1.0, 0.0)), (s | e, -it)]
                } else {
                    vec![(s & !e, it), (s, Complex64::new(1.0, 0.0))]
                }
            }
            _ => vec![(s, Complex64::new(1.0, 0.0))],
        };
        let mut col = CMat::zeros(bond << n, bond << n);
        for (config, coef) in terms {
            let virt = byproduct_matrix(n, config) * &w;
            col += real_to_complex(&state.junk(config)).kronecker(&virt) * coef;
        }
        full *= col;
    }
    let reduced = if bond == 1 {
        full.clone()
    } else {
        let (r, l) = junk_boundary(state);
        let d = 1usize << n;
        let mut out = CMat::zeros(d, d);
        for (a, la) in l.iter().enumerate().take(bond) {
            for (b, rb) in r.iter().enumerate().take(bond) {
                out += full.view((a * d, b * d), (d, d)) * Complex64::new(la * rb, 0.0);
            }
        }
        out
    };
    let d = (1usize << n) as f64;
    let weight = ((reduced.adjoint() * &reduced).trace().re / d).sqrt();
    if weight.is_nan() || weight <= 1e-300 {
        return Err(MbqcError::ZeroWeight);
    }
    Ok(VirtualOperator {
        full,
        logical: reduced / Complex64::new(weight, 0.0),
        weight,
    })
}

/// Leading right and left eigenvectors of `B^0`, with `<l|r> = 1`.
fn junk_boundary(state: &PhaseState) -> (Vec<f64>, Vec<f64>) {
    let b0 = state.junk(0);
    let power = |m: &DMatrix<f64>| {
        let mut v = nalgebra::DVector::from_element(m.nrows(), 1.0).normalize();
        for _ in 0..200_000 {
            let w = (m * &v).normalize();
            let done = (&w - &v).norm() < 1e-15;
            v = w;
            if done {
                break;
            }
        }
        v
    };
    let r = power(&b0);
    let l = power(&b0.transpose());
    let s = l.dot(&r);
    (r.iter().copied().collect(), l.iter().map(|v| v / s).collect())
}

/// Frame `prod_c T^{-(c-1)}(C^{s_c})` picked up relative to the all-`+`
/// branch, and the sign the outcomes impose on the rotation.
pub fn predict_byproduct(
    t: &CqcaMatrix,
    pattern: &MeasurementPattern,
    outcomes: &[usize],
) -> (PauliString, f64) {
    let n = pattern.n;
    let l = pattern.l as u64;
    let mut frame = PauliString::identity(n);
    for (k, &s) in outcomes.iter().enumerate() {
        let back = (l - (k as u64 % l)) % l;
        let moved = apply_power(t, &byproduct_pauli(n, s), back);
        frame = frame.mul(&moved).expect("same ring");
    }
    let mut sign = 1.0;
    if let Some(tilt) = pattern.tilt {
        let c = tilt.column;
        let s = outcomes[c - 1];
        if s >> tilt.sub.config_bit(n, tilt.site) & 1 == 1 {
            sign = -sign;
        }
        if tilt.sub == Sub::B && s >> tilt.site & 1 == 1 {
            sign = -sign;
        }
        let seed = PauliString::single(n, tilt.site as i64, tilt.seed());
        for later in c + 1..=pattern.l {
            let pushed = apply_power(t, &seed, (later - c) as u64);
            let by = byproduct_pauli(n, outcomes[later - 1]);
            if symplectic_product(&pushed, &by).expect("same ring") {
                sign = -sign;
            }
        }
    }
    (frame, sign)
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstOrderReport {
    pub angle: f64,
    pub generator: Option<PauliString>,
    pub nu_state: f64,
    pub nu_pattern: f64,
    /// `+1` or `-1`: direction of the rotation in this branch.
    pub sign: f64,
    pub weight: f64,
    pub distance: f64,
    pub tolerance: f64,
    pub frame: PauliString,
    pub predicted_frame: PauliString,
    pub frame_matches: bool,
    pub pass: bool,
}

/// Compares the realised operator with `exp(2i d alpha (nu / nu_pattern) P)`
/// up to a global phase and a Pauli frame on the left.
pub fn verify_first_order(
    state: &PhaseState,
    pattern: &MeasurementPattern,
    outcomes: Option<&[usize]>,
) -> Result<FirstOrderReport, MbqcError> {
    let masks = match outcomes {
        Some(o) => o.to_vec(),
        None => pattern.outcome_masks()?,
    };
    if state.junk != super::state::Junk::Fixed && masks.iter().any(|&m| m != 0) {
        return Err(MbqcError::InvalidArgument(
            "perturbed states are verified on the all-+ branch".into(),
        ));
    }
    let op = simulate_pattern(state, pattern, Some(&masks))?;
    let n = state.n;
    let d = 1usize << n;
    let nu_state = match pattern.tilt {
        Some(t) => estimate_nu(state, t.site, t.column, t.sub)?.nu,
        None => 1.0,
    };
    let (rel, sign) = predict_byproduct(&state.t, pattern, &masks);
    let target = match &pattern.generator {
        Some(g) => pauli_rotation(
            &pauli_matrix(g),
            2.0 * pattern.angle * sign * nu_state / pattern.nu,
        ),
        None => CMat::identity(d, d),
    };
    let fit = frame_distance(&op.logical, &target, n);
    let base = if masks.iter().all(|&m| m == 0) {
        fit.frame.clone()
    } else {
        let zero = vec![0; pattern.l];
        let op0 = simulate_pattern(state, pattern, Some(&zero))?;
        let (_, s0) = predict_byproduct(&state.t, pattern, &zero);
        let t0 = match &pattern.generator {
            Some(g) => pauli_rotation(&pauli_matrix(g), 2.0 * pattern.angle * s0),
            None => CMat::identity(d, d),
        };
        frame_distance(&op0.logical, &t0, n).frame
    };
    let predicted = rel.mul(&base).expect("same ring");
    let tolerance = 10.0 * pattern.angle * pattern.angle;
    let frame_matches = predicted == fit.frame;
    Ok(FirstOrderReport {
        angle: pattern.angle,
        generator: pattern.generator.clone(),
        nu_state,
        nu_pattern: pattern.nu,
        sign,
        weight: op.weight,
        distance: fit.distance,
        tolerance,
        frame: fit.frame,
        predicted_frame: predicted,
        frame_matches,
        pass: fit.distance <= tolerance && frame_matches,
    })
}

/// Default qubits uniform; the tilted qubit by branch weight given the rest.
pub fn sample_outcomes<R: Rng + ?Sized>(
    state: &PhaseState,
    pattern: &MeasurementPattern,
    rng: &mut R,
) -> Result<Vec<usize>, MbqcError> {
    let width = state.n * state.cell.qubits_per_site();
    let mut masks: Vec<usize> = (0..pattern.l)
        .map(|_| rng.random_range(0..1usize << width))
        .collect();
    if let Some(tilt) = pattern.tilt {
        let e = 1usize << tilt.sub.config_bit(state.n, tilt.site);
        let c = tilt.column - 1;
        masks[c] &= !e;
        let w0 = simulate_pattern(state, pattern, Some(&masks))?.weight.powi(2);
        masks[c] |= e;
        let w1 = simulate_pattern(state, pattern, Some(&masks))?.weight.powi(2);
        if rng.random::<f64>() * (w0 + w1) < w0 {
            masks[c] &= !e;
        }
    }
    Ok(masks)
}
