//! Local stabilizer generators of the fixed-point states on an `N x M`
//! torus, for one- and two-qubit unit cells.
//!
//! Qubit indexing: one-qubit cell `(i, c) -> c*N + i`; two-qubit cell
//! `(i, c, s) -> 2*(c*N + i) + s` with `s = 0` for `a` and `s = 1` for `b`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitRow;
use crate::cqca::{CqcaError, CqcaMatrix};
use crate::gf2::{self, Echelon};
use crate::pauli::{apply_cqca, symplectic_product, Letter, PauliString};
use crate::symmetry::{CellKind, SymmetryPattern};

#[derive(Debug, Error)]
pub enum StabilizerError {
    #[error("one-qubit cell requires a simple automaton")]
    NotSimple,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("generator {0} is not in graph-state form")]
    NotGraphForm(String),
    #[error(transparent)]
    Cqca(#[from] CqcaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    pub n: usize,
    pub m: usize,
    pub cell: CellKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TorusSite {
    pub i: usize,
    pub c: usize,
    /// 0 for `a` (and one-qubit cells), 1 for `b`.
    pub sub: usize,
}

impl Lattice {
    pub fn num_qubits(&self) -> usize {
        self.n * self.m * self.cell.qubits_per_site()
    }

    pub fn index(&self, i: i64, c: i64, sub: usize) -> usize {
        let i = i.rem_euclid(self.n as i64) as usize;
        let c = c.rem_euclid(self.m as i64) as usize;
        match self.cell {
            CellKind::OneQubit => c * self.n + i,
            CellKind::TwoQubit => 2 * (c * self.n + i) + sub,
        }
    }

    pub fn site(&self, q: usize) -> TorusSite {
        match self.cell {
            CellKind::OneQubit => TorusSite {
                i: q % self.n,
                c: q / self.n,
                sub: 0,
            },
            CellKind::TwoQubit => TorusSite {
                i: (q / 2) % self.n,
                c: (q / 2) / self.n,
                sub: q % 2,
            },
        }
    }

    fn coord_text(&self, s: TorusSite) -> String {
        match self.cell {
            CellKind::OneQubit => format!("({},{})", s.i, s.c),
            CellKind::TwoQubit => {
                format!("({},{},{})", s.i, s.c, if s.sub == 0 { 'a' } else { 'b' })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Anchor site; for two-qubit cells `seed` records the virtual seed.
    pub i: usize,
    pub c: usize,
    pub seed: Option<Letter>,
    pub op: PauliString,
}

#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    pub lattice: Lattice,
    pub generators: Vec<Generator>,
}

struct Builder<'a> {
    lat: &'a Lattice,
    op: PauliString,
}

impl Builder<'_> {
    fn put(&mut self, i: i64, c: i64, sub: usize, l: Letter) {
        let q = self.lat.index(i, c, sub);
        let p = PauliString::single(self.op.n(), q as i64, l);
        self.op = self.op.mul(&p).expect("same size");
    }
}

/// Stabilizer generators of the fixed-point state.
pub fn fixed_point_stabilizers(
    t: &CqcaMatrix,
    n: usize,
    m: usize,
    cell: CellKind,
) -> Result<StabilizerTableau, StabilizerError> {
    if n == 0 || m == 0 {
        return Err(StabilizerError::InvalidArgument("N and M must be positive".into()));
    }
    let lat = Lattice { n, m, cell };
    let nq = lat.num_qubits();
    let mut generators = Vec::with_capacity(nq);
    match cell {
        CellKind::OneQubit => {
            if !t.is_simple() {
                return Err(StabilizerError::NotSimple);
            }
            let trace = t.trace();
            for c in 0..m as i64 {
                for i in 0..n as i64 {
                    let mut b = Builder {
                        lat: &lat,
                        op: PauliString::identity(nq),
                    };
                    b.put(i, c - 1, 0, Letter::Z);
                    b.put(i, c, 0, Letter::X);
                    for k in trace.terms() {
                        b.put(i + k, c, 0, Letter::Z);
                    }
                    b.put(i, c + 1, 0, Letter::Z);
                    generators.push(Generator {
                        i: i as usize,
                        c: c as usize,
                        seed: None,
                        op: b.op,
                    });
                }
            }
        }
        CellKind::TwoQubit => {
            for c in 0..m as i64 {
                for i in 0..n as i64 {
                    for (seed, eta) in [
                        (Letter::X, PauliString::x(n, i)),
                        (Letter::Z, PauliString::z(n, i)),
                    ] {
                        let mut b = Builder {
                            lat: &lat,
                            op: PauliString::identity(nq),
                        };
                        // C V(eta) on column c: X^a Z^b on eta^X, Z^a on eta^Z
                        for s in eta.xbits().iter_ones() {
                            b.put(s as i64, c, 0, Letter::X);
                            b.put(s as i64, c, 1, Letter::Z);
                        }
                        for s in eta.zbits().iter_ones() {
                            b.put(s as i64, c, 0, Letter::Z);
                        }
                        // V(t eta) C on column c+1: Z^b on X part, Z^a X^b on Z part
                        let te = apply_cqca(t, &eta);
                        for s in te.xbits().iter_ones() {
                            b.put(s as i64, c + 1, 1, Letter::Z);
                        }
                        for s in te.zbits().iter_ones() {
                            b.put(s as i64, c + 1, 0, Letter::Z);
                            b.put(s as i64, c + 1, 1, Letter::X);
                        }
                        generators.push(Generator {
                            i: i as usize,
                            c: c as usize,
                            seed: Some(seed),
                            op: b.op,
                        });
                    }
                }
            }
        }
    }
    Ok(StabilizerTableau {
        lattice: lat,
        generators,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TableauReport {
    pub qubits: usize,
    pub generators: usize,
    pub all_commute: bool,
    /// First few anticommuting generator pairs.
    pub anticommuting: Vec<(usize, usize)>,
    pub rank: usize,
    pub radii: Vec<usize>,
    pub max_radius: usize,
    pub ok: bool,
}

impl StabilizerTableau {
    pub fn rows(&self) -> Vec<BitRow> {
        self.generators.iter().map(|g| g.op.to_vec()).collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.lattice.num_qubits()
    }

    fn radius(&self, g: &Generator) -> usize {
        let lat = &self.lattice;
        g.op
            .support()
            .into_iter()
            .map(|q| {
                let s = lat.site(q);
                let di = s.i.abs_diff(g.i);
                let dc = s.c.abs_diff(g.c);
                di.min(lat.n - di).max(dc.min(lat.m - dc))
            })
            .max()
            .unwrap_or(0)
    }

    pub fn verify(&self) -> TableauReport {
        verify_tableau(self)
    }

    /// Whether `op` lies in the span of the generators (phase-free).
    pub fn contains(&self, op: &PauliString) -> bool {
        let mut e = Echelon::new(2 * self.num_qubits());
        for r in self.rows() {
            e.insert(&r);
        }
        e.contains(&op.to_vec())
    }

    /// The physical operator of a tiled symmetry pattern, layer `m` of the
    /// pattern sitting on column `(m + offset) mod M`.
    pub fn pattern_operator(
        &self,
        pattern: &SymmetryPattern,
        offset: usize,
    ) -> Result<PauliString, StabilizerError> {
        let lat = &self.lattice;
        if pattern.n != lat.n || pattern.cell != lat.cell {
            return Err(StabilizerError::SizeMismatch(format!(
                "pattern ({}, {}) vs lattice ({}, {})",
                pattern.n, pattern.cell, lat.n, lat.cell
            )));
        }
        if pattern.l == 0 || !lat.m.is_multiple_of(pattern.l) {
            return Err(StabilizerError::SizeMismatch(format!(
                "M = {} is not a multiple of L = {}",
                lat.m, pattern.l
            )));
        }
        let nq = lat.num_qubits();
        let mut x = BitRow::zeros(nq);
        for c in 0..lat.m {
            let row = &pattern.rows[c % pattern.l];
            let col = (c + offset) as i64;
            for i in row.a.iter_ones() {
                x.flip(lat.index(i as i64, col, 0));
            }
            for i in row.b.iter_ones() {
                x.flip(lat.index(i as i64, col, 1));
            }
        }
        Ok(PauliString::from_bits(x, BitRow::zeros(nq)).expect("same length"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            let _ = writeln!(s, "{} = {}", self.label(g), self.op_text(&g.op));
        }
        s
    }

    pub fn hamiltonian_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            let _ = writeln!(s, "-1 {}", self.op_text(&g.op));
        }
        s
    }

    fn label(&self, g: &Generator) -> String {
        match g.seed {
            None => format!("K[{},{}]", g.i, g.c),
            Some(l) => format!("K[{},{},{}]", g.i, g.c, l.as_char()),
        }
    }

    fn op_text(&self, op: &PauliString) -> String {
        let mut sites: Vec<(TorusSite, Letter)> = op
            .support()
            .into_iter()
            .map(|q| (self.lattice.site(q), op.get(q as i64)))
            .collect();
        sites.sort_by_key(|(s, _)| (s.c, s.i, s.sub));
        sites
            .iter()
            .map(|(s, l)| format!("{}{}", l.as_char(), self.lattice.coord_text(*s)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators
            .iter()
            .map(|g| {
                serde_json::json!({
                    "label": self.label(g),
                    "op": self.op_text(&g.op),
                    "coefficient": -1,
                })
            })
            .collect();
        serde_json::json!({
            "n": self.lattice.n,
            "m": self.lattice.m,
            "cell": self.lattice.cell,
            "generators": gens,
        })
    }
}

pub fn verify_tableau(tab: &StabilizerTableau) -> TableauReport {
    let g = &tab.generators;
    let mut anticommuting = Vec::new();
    let mut all_commute = true;
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            if symplectic_product(&g[a].op, &g[b].op).unwrap_or(true) {
                all_commute = false;
                if anticommuting.len() < 16 {
                    anticommuting.push((a, b));
                }
            }
        }
    }
    let rank = gf2::rank(2 * tab.num_qubits(), &tab.rows());
    let radii: Vec<usize> = g.iter().map(|x| tab.radius(x)).collect();
    let max_radius = radii.iter().copied().max().unwrap_or(0);
    TableauReport {
        qubits: tab.num_qubits(),
        generators: g.len(),
        all_commute,
        anticommuting,
        rank,
        radii,
        max_radius,
        ok: all_commute && rank == tab.num_qubits() && g.len() == tab.num_qubits(),
    }
}

/// Whether the tiled pattern acts trivially on the state.
pub fn symmetry_membership(
    tab: &StabilizerTableau,
    pattern: &SymmetryPattern,
    offset: usize,
) -> Result<bool, StabilizerError> {
    Ok(tab.contains(&tab.pattern_operator(pattern, offset)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphState {
    pub qubits: usize,
    pub edges: BTreeSet<(usize, usize)>,
    /// Every vertex carries an extra phase gate (Y instead of X).
    pub s_dressed: bool,
}

impl GraphState {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Generators `X_v prod Z_w` (or `Y_v` when dressed).
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.qubits)
            .map(|v| {
                let mut p = PauliString::single(
                    self.qubits,
                    v as i64,
                    if self.s_dressed { Letter::Y } else { Letter::X },
                );
                for &(a, b) in &self.edges {
                    if a == v || b == v {
                        let w = if a == v { b } else { a };
                        p = p.mul(&PauliString::z(self.qubits, w as i64)).expect("same size");
                    }
                }
                p
            })
            .collect()
    }
}

/// Reads the graph off a one-qubit-cell tableau whose generators have the
/// form `X_v` (or `Y_v`) times `Z` on the neighbours.
pub fn graph_state_extract(tab: &StabilizerTableau) -> Result<GraphState, StabilizerError> {
    if tab.lattice.cell != CellKind::OneQubit {
        return Err(StabilizerError::InvalidArgument(
            "graph extraction needs a one-qubit cell".into(),
        ));
    }
    let nq = tab.num_qubits();
    let mut adj = vec![BTreeSet::new(); nq];
    let mut dressed = None;
    for g in &tab.generators {
        let v = tab.lattice.index(g.i as i64, g.c as i64, 0);
        let centre = g.op.get(v as i64);
        let is_y = match centre {
            Letter::X => false,
            Letter::Y => true,
            _ => return Err(StabilizerError::NotGraphForm(tab.label(g))),
        };
        if *dressed.get_or_insert(is_y) != is_y {
            return Err(StabilizerError::NotGraphForm(tab.label(g)));
        }
        for q in g.op.support() {
            if q == v {
                continue;
            }
            if g.op.get(q as i64) != Letter::Z {
                return Err(StabilizerError::NotGraphForm(tab.label(g)));
            }
            adj[v].insert(q);
        }
    }
    let mut edges = BTreeSet::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            if !adj[w].contains(&v) {
                return Err(StabilizerError::NotGraphForm(format!(
                    "asymmetric edge {v} -> {w}"
                )));
            }
            edges.insert((v.min(w), v.max(w)));
        }
    }
    Ok(GraphState {
        qubits: nq,
        edges,
        s_dressed: dressed.unwrap_or(false),
    })
}

/// One-qubit tableau of `t` on `N x M` versus the two-qubit tableau of
/// `t^2` on `N x M/2`, with columns `2k` (b) and `2k+1` (a) forming cell `k`.
pub fn cross_validate_cells(t: &CqcaMatrix, n: usize, m: usize) -> Result<bool, StabilizerError> {
    if !t.is_simple() {
        return Err(StabilizerError::NotSimple);
    }
    if m == 0 || !m.is_multiple_of(2) {
        return Err(StabilizerError::InvalidArgument(format!("M = {m} must be even")));
    }
    let one = fixed_point_stabilizers(t, n, m, CellKind::OneQubit)?;
    let two = fixed_point_stabilizers(&t.compose(t)?, n, m / 2, CellKind::TwoQubit)?;
    let lat2 = two.lattice;
    let nq = lat2.num_qubits();
    let map = |q: usize| {
        let s = one.lattice.site(q);
        let sub = if s.c % 2 == 0 { 1 } else { 0 };
        lat2.index(s.i as i64, (s.c / 2) as i64, sub)
    };
    let mapped: Vec<BitRow> = one
        .generators
        .iter()
        .map(|g| {
            let mut p = PauliString::identity(nq);
            for q in g.op.support() {
                p.set(map(q) as i64, g.op.get(q as i64));
            }
            p.to_vec()
        })
        .collect();
    Ok(gf2::same_span(2 * nq, &mapped, &two.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(tab: &StabilizerTableau) -> Vec<BitRow> {
        tab.rows()
    }

    #[test]
    fn tg_is_cluster() {
        let tab = fixed_point_stabilizers(&CqcaMatrix::tg(), 4, 4, CellKind::OneQubit).unwrap();
        let rep = tab.verify();
        assert!(rep.ok);
        assert_eq!(rep.rank, 16);
        assert_eq!(rep.max_radius, 1);
        let g = graph_state_extract(&tab).unwrap();
        assert!(!g.s_dressed);
        assert!((0..16).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn text_export() {
        let tab = fixed_point_stabilizers(&CqcaMatrix::tp(), 2, 3, CellKind::OneQubit).unwrap();
        let txt = tab.to_text();
        assert_eq!(txt.lines().next().unwrap(), "K[0,0] = X(0,0) Z(0,1) Z(0,2)");
        assert!(tab.hamiltonian_text().starts_with("-1 X(0,0) Z(0,1) Z(0,2)\n"));
    }

    #[test]
    fn corrupted_generator_flagged() {
        let mut tab =
            fixed_point_stabilizers(&CqcaMatrix::tg(), 4, 4, CellKind::OneQubit).unwrap();
        let nq = tab.num_qubits();
        tab.generators[0].op = tab.generators[0]
            .op
            .mul(&PauliString::x(nq, 1))
            .unwrap();
        assert!(!tab.verify().all_commute);
    }

    #[test]
    fn te_two_qubit_valid() {
        let tab = fixed_point_stabilizers(&CqcaMatrix::te(), 4, 4, CellKind::TwoQubit).unwrap();
        assert!(tab.verify().ok);
        assert_eq!(ops(&tab).len(), 32);
    }

    #[test]
    fn cells_agree() {
        assert!(cross_validate_cells(&CqcaMatrix::tg(), 4, 8).unwrap());
        assert!(cross_validate_cells(&CqcaMatrix::tp(), 4, 8).unwrap());
        assert!(cross_validate_cells(&CqcaMatrix::tf(), 8, 8).unwrap());
        assert!(cross_validate_cells(&CqcaMatrix::te(), 4, 8).is_err());
    }
}
