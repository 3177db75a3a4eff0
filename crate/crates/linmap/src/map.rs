use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use cyclo::CycScalar;

use crate::shape::SpaceShape;
use crate::LinError;

pub(crate) fn zero() -> CycScalar {
    static Z: OnceLock<CycScalar> = OnceLock::new();
    Z.get_or_init(|| CycScalar::zero(1)).clone()
}

pub(crate) fn one() -> CycScalar {
    static O: OnceLock<CycScalar> = OnceLock::new();
    O.get_or_init(|| CycScalar::one(1)).clone()
}

#[derive(Clone)]
enum Store {
    /// Column-major, `rows * cols` entries.
    Dense(Vec<CycScalar>),
    /// One row-sorted list of nonzeros per column.
    Sparse(Vec<Vec<(usize, CycScalar)>>),
}

/// Exact linear map `dom -> cod` between tensor-factored spaces.
///
/// Rows are indexed by the codomain basis and columns by the domain basis;
/// multi-indices are row-major in leg order, so the first leg is the most
/// significant digit.
#[derive(Clone)]
pub struct LinMap {
    dom: SpaceShape,
    cod: SpaceShape,
    rows: usize,
    cols: usize,
    store: Store,
}

/// Iterator over the nonzero entries of one column.
pub enum ColIter<'a> {
    Dense(std::iter::Enumerate<std::slice::Iter<'a, CycScalar>>),
    Sparse(std::slice::Iter<'a, (usize, CycScalar)>),
}

impl<'a> Iterator for ColIter<'a> {
    type Item = (usize, &'a CycScalar);
    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        match self {
            ColIter::Dense(it) => it.find(|(_, x)| !x.is_zero()),
            ColIter::Sparse(it) => it.next().map(|(r, x)| (*r, x)),
        }
    }
}

/// Sparse accumulator reused across columns.
pub(crate) struct Acc {
    vals: Vec<Option<CycScalar>>,
    touched: Vec<usize>,
}

impl Acc {
    pub(crate) fn new(n: usize) -> Acc {
        Acc { vals: vec![None; n], touched: Vec::new() }
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, x: CycScalar) {
        match &mut self.vals[i] {
            Some(v) => *v += &x,
            slot => {
                *slot = Some(x);
                self.touched.push(i);
            }
        }
    }

    pub(crate) fn drain(&mut self) -> Vec<(usize, CycScalar)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = self.vals[i].take().unwrap();
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

impl LinMap {
    fn build(cod: SpaceShape, dom: SpaceShape, store: Store) -> LinMap {
        let rows = cod.dim();
        let cols = dom.dim();
        LinMap { dom, cod, rows, cols, store }.normalized()
    }

    /// Sparse map from per-column nonzero lists (rows need not be sorted).
    pub fn from_columns(cod: SpaceShape, dom: SpaceShape, mut cols: Vec<Vec<(usize, CycScalar)>>) -> LinMap {
        assert_eq!(cols.len(), dom.dim());
        let rows = cod.dim();
        for c in cols.iter_mut() {
            c.retain(|(_, x)| !x.is_zero());
            c.sort_by_key(|(r, _)| *r);
            assert!(c.iter().all(|(r, _)| *r < rows), "row index out of range");
            assert!(c.windows(2).all(|w| w[0].0 != w[1].0), "duplicate entry");
        }
        LinMap::build(cod, dom, Store::Sparse(cols))
    }

    /// Triplets `(row, col, value)`; duplicate positions are summed.
    pub fn from_triplets(
        cod: SpaceShape,
        dom: SpaceShape,
        trips: impl IntoIterator<Item = (usize, usize, CycScalar)>,
    ) -> LinMap {
        let mut acc: Vec<Vec<(usize, CycScalar)>> = vec![Vec::new(); dom.dim()];
        for (r, c, x) in trips {
            acc[c].push((r, x));
        }
        let cols = acc
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|(r, _)| *r);
                let mut merged: Vec<(usize, CycScalar)> = Vec::with_capacity(col.len());
                for (r, x) in col {
                    match merged.last_mut() {
                        Some((lr, lx)) if *lr == r => *lx += &x,
                        _ => merged.push((r, x)),
                    }
                }
                merged
            })
            .collect();
        LinMap::from_columns(cod, dom, cols)
    }

    /// Dense map from a row-major list of rows.
    pub fn from_rows(cod: SpaceShape, dom: SpaceShape, rows: Vec<Vec<CycScalar>>) -> LinMap {
        let (r, c) = (cod.dim(), dom.dim());
        assert_eq!(rows.len(), r);
        let mut data = vec![zero(); r * c];
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, x) in row.into_iter().enumerate() {
                data[j * r + i] = x;
            }
        }
        LinMap::build(cod, dom, Store::Dense(data))
    }

    pub fn from_fn(cod: SpaceShape, dom: SpaceShape, mut f: impl FnMut(usize, usize) -> CycScalar) -> LinMap {
        let (r, c) = (cod.dim(), dom.dim());
        let mut data = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                data.push(f(i, j));
            }
        }
        LinMap::build(cod, dom, Store::Dense(data))
    }

    /// Column map `k -> cod` given by a coordinate vector.
    pub fn vector(cod: SpaceShape, v: Vec<CycScalar>) -> LinMap {
        assert_eq!(v.len(), cod.dim());
        let col = v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        LinMap::from_columns(cod, SpaceShape::scalar(), vec![col])
    }

    /// Row map `dom -> k` given by a coordinate vector.
    pub fn covector(dom: SpaceShape, v: Vec<CycScalar>) -> LinMap {
        assert_eq!(v.len(), dom.dim());
        let cols = v.into_iter().map(|x| vec![(0, x)]).collect();
        LinMap::from_columns(SpaceShape::scalar(), dom, cols)
    }

    pub fn scalar(x: CycScalar) -> LinMap {
        LinMap::from_columns(SpaceShape::scalar(), SpaceShape::scalar(), vec![vec![(0, x)]])
    }

    pub fn zero(cod: SpaceShape, dom: SpaceShape) -> LinMap {
        let n = dom.dim();
        LinMap::from_columns(cod, dom, vec![Vec::new(); n])
    }

    pub fn identity(shape: SpaceShape) -> LinMap {
        let n = shape.dim();
        let cols = (0..n).map(|j| vec![(j, one())]).collect();
        LinMap::from_columns(shape.clone(), shape, cols)
    }

    pub fn id(d: usize) -> LinMap {
        LinMap::identity(SpaceShape::flat(d))
    }

    /// The flip `A ⊗ B -> B ⊗ A`.
    pub fn flip(a: usize, b: usize) -> LinMap {
        LinMap::permutation(&[a, b], &[1, 0])
    }

    /// Leg permutation: output leg `k` is input leg `perm[k]`.
    pub fn permutation(factors: &[usize], perm: &[usize]) -> LinMap {
        let n = factors.len();
        assert_eq!(perm.len(), n);
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let dom = SpaceShape::new(factors);
        let cod_f: Vec<usize> = perm.iter().map(|&p| factors[p]).collect();
        let cod = SpaceShape::new(&cod_f);
        let total = dom.dim();
        let mut digits = vec![0usize; n];
        let cols = (0..total)
            .map(|j| {
                let mut rest = j;
                for k in (0..n).rev() {
                    digits[k] = rest % factors[k];
                    rest /= factors[k];
                }
                let mut r = 0;
                for k in 0..n {
                    r = r * cod_f[k] + digits[perm[k]];
                }
                vec![(r, one())]
            })
            .collect();
        LinMap::from_columns(cod, dom, cols)
    }

    fn normalized(mut self) -> LinMap {
        let cells = self.rows * self.cols;
        let nnz = self.nnz();
        let want_dense = cells > 0 && nnz * 4 > cells;
        match (&self.store, want_dense) {
            (Store::Sparse(cols), true) => {
                let mut data = vec![zero(); cells];
                for (j, col) in cols.iter().enumerate() {
                    for (i, x) in col {
                        data[j * self.rows + i] = x.clone();
                    }
                }
                self.store = Store::Dense(data);
            }
            (Store::Dense(_), false) => {
                let cols = (0..self.cols).map(|j| self.col(j).map(|(i, x)| (i, x.clone())).collect()).collect();
                self.store = Store::Sparse(cols);
            }
            _ => {}
        }
        self
    }

    #[inline]
    pub fn dom(&self) -> &SpaceShape {
        &self.dom
    }

    #[inline]
    pub fn cod(&self) -> &SpaceShape {
        &self.cod
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.store {
            Store::Dense(d) => d.iter().filter(|x| !x.is_zero()).count(),
            Store::Sparse(c) => c.iter().map(Vec::len).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Dense(d) => d.iter().all(CycScalar::is_zero),
            Store::Sparse(c) => c.iter().all(Vec::is_empty),
        }
    }

    #[inline]
    pub fn col(&self, j: usize) -> ColIter<'_> {
        match &self.store {
            Store::Dense(d) => ColIter::Dense(d[j * self.rows..(j + 1) * self.rows].iter().enumerate()),
            Store::Sparse(c) => ColIter::Sparse(c[j].iter()),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> CycScalar {
        assert!(i < self.rows && j < self.cols);
        match &self.store {
            Store::Dense(d) => d[j * self.rows + i].clone(),
            Store::Sparse(c) => match c[j].binary_search_by_key(&i, |(r, _)| *r) {
                Ok(k) => c[j][k].1.clone(),
                Err(_) => zero(),
            },
        }
    }

    /// Dense copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<CycScalar> {
        let mut v = vec![zero(); self.rows];
        for (i, x) in self.col(j) {
            v[i] = x.clone();
        }
        v
    }

    /// Dense copy of the whole matrix as rows.
    pub fn to_rows(&self) -> Vec<Vec<CycScalar>> {
        let mut out = vec![vec![zero(); self.cols]; self.rows];
        for j in 0..self.cols {
            for (i, x) in self.col(j) {
                out[i][j] = x.clone();
            }
        }
        out
    }

    /// Nonzero entries as `(row, col, value)`, column by column.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &CycScalar)> + '_ {
        (0..self.cols).flat_map(move |j| self.col(j).map(move |(i, x)| (i, j, x)))
    }

    /// Same matrix, relabelled shapes of equal total dimension.
    pub fn reshape(&self, cod: SpaceShape, dom: SpaceShape) -> Result<LinMap, LinError> {
        if cod.dim() != self.rows || dom.dim() != self.cols {
            return Err(LinError::ShapeMismatch(format!(
                "cannot reshape {}<-{} as {}<-{}",
                self.cod, self.dom, cod, dom
            )));
        }
        let mut out = self.clone();
        out.cod = cod;
        out.dom = dom;
        Ok(out)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinMap) -> Result<LinMap, LinError> {
        if self.cols != g.rows {
            return Err(LinError::ShapeMismatch(format!(
                "compose: domain {} of the outer map does not match codomain {} of the inner map",
                self.dom, g.cod
            )));
        }
        let mut acc = Acc::new(self.rows);
        let cols = (0..g.cols)
            .map(|j| {
                for (k, gk) in g.col(j) {
                    for (i, fik) in self.col(k) {
                        acc.add(i, fik * gk);
                    }
                }
                acc.drain()
            })
            .collect();
        Ok(LinMap::build(self.cod.clone(), g.dom.clone(), Store::Sparse(cols)))
    }

    /// Tensor product `self ⊗ g`.
    pub fn kron(&self, g: &LinMap) -> LinMap {
        let cod = self.cod.concat(&g.cod);
        let dom = self.dom.concat(&g.dom);
        let gr = g.rows;
        let mut cols = Vec::with_capacity(self.cols * g.cols);
        for j1 in 0..self.cols {
            for j2 in 0..g.cols {
                let mut col = Vec::new();
                for (i1, a) in self.col(j1) {
                    for (i2, b) in g.col(j2) {
                        col.push((i1 * gr + i2, a * b));
                    }
                }
                cols.push(col);
            }
        }
        LinMap::build(cod, dom, Store::Sparse(cols))
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols: Vec<Vec<(usize, CycScalar)>> = vec![Vec::new(); self.rows];
        for j in 0..self.cols {
            for (i, x) in self.col(j) {
                cols[i].push((j, x.clone()));
            }
        }
        LinMap::build(self.dom.clone(), self.cod.clone(), Store::Sparse(cols))
    }

    pub fn scale(&self, s: &CycScalar) -> LinMap {
        if s.is_zero() {
            return LinMap::zero(self.cod.clone(), self.dom.clone());
        }
        let cols = (0..self.cols).map(|j| self.col(j).map(|(i, x)| (i, x * s)).collect()).collect();
        LinMap::build(self.cod.clone(), self.dom.clone(), Store::Sparse(cols))
    }

    fn zip_with(&self, o: &LinMap, neg: bool) -> Result<LinMap, LinError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinError::ShapeMismatch(format!(
                "sum of {}<-{} and {}<-{}",
                self.cod, self.dom, o.cod, o.dom
            )));
        }
        let mut acc = Acc::new(self.rows);
        let cols = (0..self.cols)
            .map(|j| {
                for (i, x) in self.col(j) {
                    acc.add(i, x.clone());
                }
                for (i, x) in o.col(j) {
                    acc.add(i, if neg { -x } else { x.clone() });
                }
                acc.drain()
            })
            .collect();
        Ok(LinMap::build(self.cod.clone(), self.dom.clone(), Store::Sparse(cols)))
    }

    pub fn try_add(&self, o: &LinMap) -> Result<LinMap, LinError> {
        self.zip_with(o, false)
    }

    pub fn try_sub(&self, o: &LinMap) -> Result<LinMap, LinError> {
        self.zip_with(o, true)
    }

    /// First position where the two matrices differ, with both entries.
    pub fn first_difference(&self, o: &LinMap) -> Option<(usize, usize, CycScalar, CycScalar)> {
        if self.rows != o.rows || self.cols != o.cols {
            return Some((usize::MAX, usize::MAX, zero(), zero()));
        }
        for j in 0..self.cols {
            let a = self.column(j);
            let b = o.column(j);
            if let Some(i) = (0..self.rows).find(|&i| a[i] != b[i]) {
                return Some((i, j, a[i].clone(), b[i].clone()));
            }
        }
        None
    }

    /// The scalar `c` with `self = c · o`, if there is one.
    ///
    /// Two zero maps give `Some(1)`.
    pub fn ratio_to(&self, o: &LinMap) -> Option<CycScalar> {
        if self.rows != o.rows || self.cols != o.cols {
            return None;
        }
        let mut c: Option<CycScalar> = None;
        for j in 0..self.cols {
            let a = self.column(j);
            let b = o.column(j);
            for i in 0..self.rows {
                match (a[i].is_zero(), b[i].is_zero()) {
                    (true, true) => {}
                    (false, true) => return None,
                    (_, false) => {
                        let q = &a[i] / &b[i];
                        match &c {
                            None => c = Some(q),
                            Some(c0) if *c0 == q => {}
                            Some(_) => return None,
                        }
                    }
                }
            }
        }
        Some(c.unwrap_or_else(one))
    }

    /// Value of a `k -> k` map.
    pub fn as_scalar(&self) -> Option<CycScalar> {
        (self.rows == 1 && self.cols == 1).then(|| self.get(0, 0))
    }

    /// `(I_a ⊗ m ⊗ I_b) ∘ self`, where `self` has `a * dom(m) * b` rows.
    pub fn apply_block(&self, a: usize, m: &LinMap, b: usize) -> Result<LinMap, LinError> {
        let d = m.cols;
        let e = m.rows;
        if a * d * b != self.rows {
            return Err(LinError::ShapeMismatch(format!(
                "block of width {d} with bypass {a}x{b} applied to {} rows",
                self.rows
            )));
        }
        let out_rows = a * e * b;
        let mut acc = Acc::new(out_rows);
        let cols = (0..self.cols)
            .map(|j| {
                for (r, x) in self.col(j) {
                    let bi = r % b;
                    let di = (r / b) % d;
                    let ai = r / (b * d);
                    for (ei, y) in m.col(di) {
                        acc.add((ai * e + ei) * b + bi, y * x);
                    }
                }
                acc.drain()
            })
            .collect();
        let cod = SpaceShape::flat(out_rows);
        Ok(LinMap::build(cod, self.dom.clone(), Store::Sparse(cols)))
    }

    /// `self ∘ (I_a ⊗ m ⊗ I_b)`, where `self` has `a * cod(m) * b` columns.
    pub fn precompose_block(&self, a: usize, m: &LinMap, b: usize) -> Result<LinMap, LinError> {
        let d = m.cols;
        let e = m.rows;
        if a * e * b != self.cols {
            return Err(LinError::ShapeMismatch(format!(
                "block of height {e} with bypass {a}x{b} precomposed with {} columns",
                self.cols
            )));
        }
        let mut acc = Acc::new(self.rows);
        let mut cols = Vec::with_capacity(a * d * b);
        for ai in 0..a {
            for di in 0..d {
                for bi in 0..b {
                    for (ei, y) in m.col(di) {
                        for (r, x) in self.col((ai * e + ei) * b + bi) {
                            acc.add(r, x * y);
                        }
                    }
                    cols.push(acc.drain());
                }
            }
        }
        let dom = SpaceShape::flat(a * d * b);
        Ok(LinMap::build(self.cod.clone(), dom, Store::Sparse(cols)))
    }

    /// Applies the map to a coordinate vector.
    pub fn apply_vec(&self, x: &[CycScalar]) -> Vec<CycScalar> {
        assert_eq!(x.len(), self.cols);
        let mut acc = Acc::new(self.rows);
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (i, a) in self.col(j) {
                acc.add(i, a * xj);
            }
        }
        let mut out = vec![zero(); self.rows];
        for (i, v) in acc.drain() {
            out[i] = v;
        }
        out
    }
}

impl PartialEq for LinMap {
    fn eq(&self, o: &LinMap) -> bool {
        if self.rows != o.rows || self.cols != o.cols {
            return false;
        }
        (0..self.cols).all(|j| {
            let mut a = self.col(j);
            let mut b = o.col(j);
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return true,
                    (Some((i, x)), Some((k, y))) if i == k && x == y => {}
                    _ => return false,
                }
            }
        })
    }
}

impl Eq for LinMap {}

impl<'a> Mul<&'a LinMap> for &'a LinMap {
    type Output = LinMap;
    /// Composition; panics on a shape mismatch.
    fn mul(self, g: &LinMap) -> LinMap {
        self.compose(g).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Add<&'a LinMap> for &'a LinMap {
    type Output = LinMap;
    fn add(self, o: &LinMap) -> LinMap {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a LinMap> for &'a LinMap {
    type Output = LinMap;
    fn sub(self, o: &LinMap) -> LinMap {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &LinMap {
    type Output = LinMap;
    fn neg(self) -> LinMap {
        self.scale(&CycScalar::int(-1))
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMap {} <- {} ({} nonzeros)", self.cod, self.dom, self.nnz())?;
        if self.rows * self.cols <= 256 {
            for row in self.to_rows() {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}
