//! Gaussian elimination over F2 on [`BitRow`]s.

use crate::bits::BitRow;

/// Incrementally built row-echelon basis of a subspace of F2^width.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    // (pivot column, row); each row's pivot is its lowest set bit and no
    // other stored row has that bit set below its own pivot ordering.
    rows: Vec<(usize, BitRow)>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating against the basis; zero iff `v` is
    /// in the span.
    pub fn reduce(&self, v: &BitRow) -> BitRow {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if r.get(*p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the basis. Returns false if it was already in the span.
    pub fn insert(&mut self, v: &BitRow) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                for (_, row) in self.rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((p, r));
                true
            }
        }
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitRow> {
        self.rows.iter().map(|(_, r)| r)
    }
}

pub fn rank<'a, I: IntoIterator<Item = &'a BitRow>>(width: usize, rows: I) -> usize {
    let mut e = Echelon::new(width);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// True iff the two families span the same subspace.
pub fn same_span(width: usize, a: &[BitRow], b: &[BitRow]) -> bool {
    let mut ea = Echelon::new(width);
    for r in a {
        ea.insert(r);
    }
    let mut eb = Echelon::new(width);
    for r in b {
        eb.insert(r);
    }
    ea.rank() == eb.rank() && b.iter().all(|r| ea.contains(r))
}

/// Basis of `{x : M x = 0}` where `M` is given by its rows, each of length
/// `ncols`. Returned vectors are in reduced form (one free variable set per
/// vector).
pub fn nullspace(rows: &[BitRow], ncols: usize) -> Vec<BitRow> {
    // reduced row echelon form with explicit pivot bookkeeping
    let mut m: Vec<BitRow> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, sel);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = BitRow::unit(ncols, f);
        for (ri, &p) in pivots.iter().enumerate() {
            if m[ri].get(f) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_rank_and_membership() {
        let a = BitRow::from_indices(4, [0, 1]);
        let b = BitRow::from_indices(4, [1, 2]);
        let c = BitRow::from_indices(4, [0, 2]);
        let mut e = Echelon::new(4);
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&c));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&c));
        assert!(!e.contains(&BitRow::unit(4, 3)));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![
            BitRow::from_indices(5, [0, 1, 4]),
            BitRow::from_indices(5, [1, 2]),
            BitRow::from_indices(5, [0, 2, 4]),
        ];
        let ns = nullspace(&rows, 5);
        assert_eq!(ns.len(), 5 - rank(5, &rows));
        for v in &ns {
            for r in &rows {
                assert!(!r.dot(v));
            }
        }
    }
}
