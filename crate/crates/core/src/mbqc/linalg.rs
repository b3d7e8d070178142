//! Dense complex linear algebra on the `2^N`-dimensional virtual space.
//!
//! Basis index bit `k` is the Z-eigenvalue bit of virtual qubit `k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitRow;
use crate::cqca::CqcaMatrix;
use crate::pauli::{Letter, PauliString};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

fn mask(r: &BitRow) -> u64 {
    r.iter_ones().fold(0u64, |m, i| m | (1 << i))
}

fn parity(v: u64) -> bool {
    v.count_ones() % 2 == 1
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Hermitian matrix `i^{x.z} X^x Z^z`.
pub fn pauli_matrix(p: &PauliString) -> CMat {
    pauli_from_masks(p.n(), mask(p.xbits()), mask(p.zbits()))
}

pub fn pauli_from_masks(n: usize, x: u64, z: u64) -> CMat {
    let d = 1usize << n;
    let ph = i_pow((x & z).count_ones());
    let mut m = CMat::zeros(d, d);
    for k in 0..d as u64 {
        let s = if parity(z & k) { -ph } else { ph };
        m[((k ^ x) as usize, k as usize)] = s;
    }
    m
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// `exp(i theta P)` for a Hermitian Pauli matrix `P`.
pub fn pauli_rotation(p: &CMat, theta: f64) -> CMat {
    let d = p.nrows();
    identity(d) * Complex64::new(theta.cos(), 0.0) + p * (I * theta.sin())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn spectral_norm(m: &CMat) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `t^{-1} . xi` using `t^{-1} = [[t22, t12], [t21, t11]]` (det 1 over F2).
pub fn apply_inverse(t: &CqcaMatrix, p: &PauliString) -> PauliString {
    let x = t.entry(1, 1).mul_dense(p.xbits()).xor(&t.entry(0, 1).mul_dense(p.zbits()));
    let z = t.entry(1, 0).mul_dense(p.xbits()).xor(&t.entry(0, 0).mul_dense(p.zbits()));
    PauliString::from_bits(x, z).expect("same length")
}

/// Clifford `W` with `W^dag V(xi) W ∝ V(t xi)` on `n` virtual qubits.
///
/// `W|0>` is the +1 eigenstate of the images of `Z_i` under `t^{-1}`, with
/// its first nonzero amplitude real and positive; `W|x>` applies the images
/// of `X^x`.
pub fn virtual_clifford(t: &CqcaMatrix, n: usize) -> CMat {
    let d = 1usize << n;
    let qs: Vec<CMat> = (0..n as i64)
        .map(|i| pauli_matrix(&apply_inverse(t, &PauliString::z(n, i))))
        .collect();
    let ps: Vec<CMat> = (0..n as i64)
        .map(|i| pauli_matrix(&apply_inverse(t, &PauliString::x(n, i))))
        .collect();
    let mut proj = identity(d);
    for q in &qs {
        proj = (identity(d) + q) * Complex64::new(0.5, 0.0) * proj;
    }
    let mut phi = None;
    for k in 0..d {
        let v = proj.column(k).into_owned();
        if v.norm() > 1e-6 {
            phi = Some(v.normalize());
            break;
        }
    }
    let mut phi = phi.expect("stabilizer group has a common eigenvector");
    let lead = phi
        .iter()
        .copied()
        .find(|c| c.norm() > 1e-9)
        .expect("nonzero vector");
    phi *= lead.conj() / lead.norm();
    let mut w = CMat::zeros(d, d);
    w.set_column(0, &phi);
    for x in 1..d {
        let low = x.trailing_zeros() as usize;
        let prev = w.column(x & (x - 1)).into_owned();
        w.set_column(x, &(&ps[low] * prev));
    }
    w
}

/// Closest Pauli frame and global phase: minimises
/// `|| u - e^{i phi} F g ||_2` over Hermitian Paulis `F`.
pub struct FrameFit {
    pub distance: f64,
    pub frame: PauliString,
    pub phase: f64,
}

pub fn frame_distance(u: &CMat, g: &CMat, n: usize) -> FrameFit {
    let d = 1usize << n;
    let x = u * g.adjoint();
    let mut best = (f64::NEG_INFINITY, 0u64, 0u64, Complex64::new(0.0, 0.0));
    for fx in 0..d as u64 {
        for fz in 0..d as u64 {
            // tr(F X) with F_{k^fx, k} = i^{fx.fz} (-1)^{fz.k}
            let mut tr = Complex64::new(0.0, 0.0);
            for k in 0..d as u64 {
                let v = x[(k as usize, (k ^ fx) as usize)];
                tr += if parity(fz & k) { -v } else { v };
            }
            tr *= i_pow((fx & fz).count_ones());
            if tr.norm() > best.0 {
                best = (tr.norm(), fx, fz, tr);
            }
        }
    }
    let (_, fx, fz, tr) = best;
    let f = pauli_from_masks(n, fx, fz);
    let phase = tr.arg();
    let diff = u - (&f * g) * Complex64::from_polar(1.0, phase);
    let mut frame = PauliString::identity(n);
    for k in 0..n {
        let l = Letter::from_bits((fx >> k) & 1 == 1, (fz >> k) & 1 == 1);
        frame.set(k as i64, l);
    }
    FrameFit {
        distance: spectral_norm(&diff),
        frame,
        phase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::apply_cqca;

    fn close(a: &CMat, b: &CMat) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn pauli_algebra() {
        let x = pauli_matrix(&PauliString::x(1, 0));
        let z = pauli_matrix(&PauliString::z(1, 0));
        let y = pauli_matrix(&"Y0 @N=1".parse().unwrap());
        assert!(close(&(&x * &x), &identity(2)));
        assert!(close(&(&x * &z), &(-(&z * &x))));
        assert!(close(&y, &((&x * &z) * I)));
        assert!(close(&(&y * &y), &identity(2)));
    }

    #[test]
    fn clifford_conjugation() {
        for (_, t) in CqcaMatrix::presets() {
            for n in 1..=4 {
                let w = virtual_clifford(&t, n);
                assert!(close(&(w.adjoint() * &w), &identity(1 << n)));
                for p in crate::symmetry::unit_seeds(n) {
                    let lhs = w.adjoint() * pauli_matrix(&p) * &w;
                    let rhs = pauli_matrix(&apply_cqca(&t, &p));
                    assert!(close(&lhs, &rhs) || close(&lhs, &(-rhs)), "{t} n={n} {p}");
                }
            }
        }
    }

    #[test]
    fn frame_fit_recovers_frame() {
        let n = 2;
        let g = pauli_rotation(&pauli_matrix(&"X0 Z1 @N=2".parse().unwrap()), 0.3);
        let f = pauli_matrix(&"Y1 @N=2".parse().unwrap());
        let u = (&f * &g) * Complex64::from_polar(1.0, 0.7);
        let fit = frame_distance(&u, &g, n);
        assert!(fit.distance < 1e-12);
        assert_eq!(fit.frame, "Y1 @N=2".parse().unwrap());
    }
}
