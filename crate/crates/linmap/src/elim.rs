//! Exact elimination: sparse reduced echelon form, nullspaces, inverses and a
//! separate fraction-free rank computation.

use std::collections::BTreeMap;

use cyclo::CycScalar;

use crate::map::{one, zero, Acc, LinMap};
use crate::shape::SpaceShape;
use crate::LinError;

type Row = Vec<(usize, CycScalar)>;

/// `a - c * b` for sorted sparse rows.
fn axpy(a: &Row, c: &CycScalar, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(usize::MAX, |x| x.0);
        let kb = b.get(j).map_or(usize::MAX, |x| x.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally maintained reduced row echelon form over sparse rows.
///
/// Pivots are the first nonzero entry of each reduced row and are scaled to 1;
/// every pivot column is zero in all other stored rows.
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: Row) -> Row {
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            if let Some(p) = self.pivots.get(&c) {
                let f = row[k].1.clone();
                row = axpy(&row, &f, p);
                // entries before position k are untouched, the pivot entry is gone
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn push(&mut self, row: Row) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let mut row: Row = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        row.sort_by_key(|(c, _)| *c);
        let row = self.reduce(row);
        let Some((pc, lead)) = row.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let row: Row = row.into_iter().map(|(c, x)| (c, &x * &inv)).collect();
        for other in self.pivots.values_mut() {
            if let Ok(k) = other.binary_search_by_key(&pc, |(c, _)| *c) {
                let f = other[k].1.clone();
                *other = axpy(other, &f, &row);
            }
        }
        self.pivots.insert(pc, row);
        true
    }

    /// Basis of the solution space of the stored homogeneous system.
    ///
    /// One vector per free column `f`, with a 1 in position `f`, zeros in
    /// the other free positions and minus the pivot-row entries elsewhere.
    pub fn kernel(&self) -> Vec<Vec<CycScalar>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![zero(); self.ncols];
            v[f] = one();
            for (&p, row) in &self.pivots {
                if let Ok(k) = row.binary_search_by_key(&f, |(c, _)| *c) {
                    v[p] = -&row[k].1;
                }
            }
            out.push(v);
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &Row)> {
        self.pivots.iter()
    }
}

/// Rows of a map as sparse lists.
pub fn sparse_rows(f: &LinMap) -> Vec<Row> {
    let mut rows: Vec<Row> = vec![Vec::new(); f.rows()];
    for j in 0..f.cols() {
        for (i, x) in f.col(j) {
            rows[i].push((j, x.clone()));
        }
    }
    rows
}

/// Exact basis of `ker f`, in reduced echelon normal form.
pub fn nullspace(f: &LinMap) -> Vec<Vec<CycScalar>> {
    let mut e = Echelon::new(f.cols());
    for row in sparse_rows(f) {
        e.push(row);
    }
    e.kernel()
}

/// Kernel basis packed as the columns of a map `k^r -> dom f`.
pub fn kernel_map(f: &LinMap) -> LinMap {
    let ker = nullspace(f);
    let r = ker.len();
    let cols = ker.into_iter().map(|v| v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
    LinMap::from_columns(f.dom().clone(), SpaceShape::flat(r), cols)
}

/// Rank by fraction-free (Bareiss) elimination on a dense copy.
///
/// Kept independent of [`Echelon`] so the two can check each other.
pub fn rank_bareiss(f: &LinMap) -> usize {
    let mut a = f.to_rows();
    let (n, m) = (f.rows(), f.cols());
    let mut prev = one();
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..m {
                let v = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = &v / &prev;
            }
            a[i][c] = zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Exact inverse of a square map.
pub fn inverse(f: &LinMap) -> Result<LinMap, LinError> {
    let n = f.rows();
    if n != f.cols() {
        return Err(LinError::ShapeMismatch(format!("inverse of non-square {}<-{}", f.cod(), f.dom())));
    }
    // reduce [A | I]; the identity block sits in columns n..2n
    let mut e = Echelon::new(2 * n);
    for (i, mut row) in sparse_rows(f).into_iter().enumerate() {
        row.push((n + i, one()));
        e.push(row);
    }
    if (0..n).any(|c| !e.pivots.contains_key(&c)) {
        return Err(LinError::Singular);
    }
    let mut cols: Vec<Vec<(usize, CycScalar)>> = vec![Vec::new(); n];
    for (&p, row) in e.rows() {
        for (c, x) in row {
            if *c >= n {
                cols[c - n].push((p, x.clone()));
            }
        }
    }
    Ok(LinMap::from_columns(f.dom().clone(), f.cod().clone(), cols))
}

/// Some solution `x` of `f x = b`, if the system is consistent.
pub fn solve(f: &LinMap, b: &[CycScalar]) -> Option<Vec<CycScalar>> {
    let n = f.cols();
    let mut e = Echelon::new(n + 1);
    for (i, mut row) in sparse_rows(f).into_iter().enumerate() {
        if !b[i].is_zero() {
            row.push((n, b[i].clone()));
        }
        e.push(row);
    }
    if e.pivots.contains_key(&n) {
        return None;
    }
    let mut x = vec![zero(); n];
    for (&p, row) in e.rows() {
        if let Some((_, v)) = row.last().filter(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

/// Column space dimension via the sparse echelon pass.
pub fn rank(f: &LinMap) -> usize {
    let mut e = Echelon::new(f.cols());
    for row in sparse_rows(f) {
        e.push(row);
    }
    e.rank()
}

/// Applies a kernel basis to check `f v = 0` for each vector.
pub fn annihilates(f: &LinMap, vs: &[Vec<CycScalar>]) -> bool {
    let mut acc = Acc::new(f.rows());
    vs.iter().all(|v| {
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in f.col(j) {
                acc.add(i, a * x);
            }
        }
        acc.drain().is_empty()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> LinMap {
        LinMap::from_rows(
            SpaceShape::flat(rows.len()),
            SpaceShape::flat(rows[0].len()),
            rows.iter().map(|row| row.iter().map(|&x| CycScalar::int(x)).collect()).collect(),
        )
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(nullspace(&LinMap::id(4)).is_empty());
        let z = LinMap::zero(SpaceShape::flat(2), SpaceShape::flat(3));
        assert_eq!(nullspace(&z).len(), 3);
    }

    #[test]
    fn kernel_is_reduced_and_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let k = nullspace(&a);
        assert_eq!(k.len(), 2);
        assert!(annihilates(&a, &k));
        assert_eq!(rank_bareiss(&a), 2);
        // free columns 2 and 3 carry the unit entries
        assert!(k[0][2].is_one() && k[0][3].is_zero());
        assert!(k[1][3].is_one() && k[1][2].is_zero());
    }

    #[test]
    fn inverse_of_cyclotomic_matrix() {
        let z = CycScalar::zeta(3);
        let a = LinMap::from_rows(
            SpaceShape::flat(2),
            SpaceShape::flat(2),
            vec![vec![CycScalar::int(1), z.clone()], vec![&z * &z, CycScalar::int(2)]],
        );
        let ai = inverse(&a).unwrap();
        assert_eq!(&ai * &a, LinMap::id(2));
        assert_eq!(&a * &ai, LinMap::id(2));
        assert!(matches!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(LinError::Singular)));
        assert!(matches!(inverse(&LinMap::zero(SpaceShape::flat(3), SpaceShape::flat(3))), Err(LinError::Singular)));
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve(&a, &[CycScalar::int(3), CycScalar::int(1), CycScalar::int(4)]).unwrap();
        assert_eq!(x, vec![CycScalar::int(2), CycScalar::int(1)]);
        assert!(solve(&a, &[CycScalar::int(3), CycScalar::int(1), CycScalar::int(5)]).is_none());
    }
}
