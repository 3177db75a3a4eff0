//! Elements of Q(zeta_M) in the power basis, reduced modulo Phi_M.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::Mutex;

use num_integer::Integer;
use smallvec::{smallvec, SmallVec};

use crate::rat::Rat;
use crate::CycError;

type Coeffs = SmallVec<[Rat; 4]>;

/// Per-order data: `pow[k]` is `x^k mod Phi_M` for `k < max(2 phi - 1, M)`.
#[derive(Debug)]
pub struct FieldTable {
    pub order: u32,
    pub phi: usize,
    /// Coefficients of Phi_M, low degree first (monic).
    pub cyclotomic: Vec<i64>,
    pow: Vec<Vec<i64>>,
}

impl FieldTable {
    fn build(order: u32) -> FieldTable {
        let cyclotomic = cyclotomic_poly(order);
        let phi = cyclotomic.len() - 1;
        let len = (2 * phi).max(order as usize).max(1);
        let mut pow = Vec::with_capacity(len);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..len {
            pow.push(cur.clone());
            // multiply by x and reduce the degree-phi term
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * cyclotomic[i];
                }
            }
        }
        FieldTable { order, phi, cyclotomic, pow }
    }

    /// `x^k mod Phi_M` as integer coefficients.
    pub fn power(&self, k: usize) -> &[i64] {
        &self.pow[k % (self.order as usize).max(1)]
    }
}

/// Coefficients of the M-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let den = cyclotomic_poly(d);
            num = exact_div_monic(&num, &den);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let qd = r.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = r[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &dc) in den.iter().enumerate() {
                r[k + i] -= c * dc;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

pub fn euler_phi(m: u32) -> usize {
    cyclotomic_poly_degree(m)
}

fn cyclotomic_poly_degree(m: u32) -> usize {
    let mut n = m as u64;
    let mut res = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            res -= res / p;
        }
        p += 1;
    }
    if n > 1 {
        res -= res / n;
    }
    res as usize
}

static TABLES: Mutex<Option<HashMap<u32, &'static FieldTable>>> = Mutex::new(None);

/// Shared table for `Q(zeta_order)`; tables are built once and live for the process.
pub fn table(order: u32) -> &'static FieldTable {
    let mut guard = TABLES.lock().expect("field table registry poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(order)
        .or_insert_with(|| Box::leak(Box::new(FieldTable::build(order))))
}

/// An element of the cyclotomic field Q(zeta_M).
#[derive(Clone)]
pub struct CycScalar {
    tab: &'static FieldTable,
    c: Coeffs,
}

impl CycScalar {
    pub fn zero(order: u32) -> CycScalar {
        let tab = table(order);
        CycScalar { tab, c: smallvec![Rat::ZERO; tab.phi] }
    }

    pub fn one(order: u32) -> CycScalar {
        CycScalar::from_rat(Rat::ONE, order)
    }

    pub fn from_rat(r: Rat, order: u32) -> CycScalar {
        let mut s = CycScalar::zero(order);
        s.c[0] = r;
        s
    }

    pub fn int(n: i64) -> CycScalar {
        CycScalar::from_rat(Rat::int(n), 1)
    }

    pub fn rat(n: i64, d: i64) -> CycScalar {
        CycScalar::from_rat(Rat::new(n, d), 1)
    }

    /// `zeta_M^k`.
    pub fn zeta_pow(order: u32, k: i64) -> CycScalar {
        let tab = table(order);
        let k = k.rem_euclid(order as i64) as usize;
        let c = tab.power(k).iter().map(|&x| Rat::int(x)).collect();
        CycScalar { tab, c }
    }

    pub fn zeta(order: u32) -> CycScalar {
        CycScalar::zeta_pow(order, 1)
    }

    /// Builds from power-basis coefficients; longer inputs are reduced mod Phi_M.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rat>) -> CycScalar {
        let tab = table(order);
        if coeffs.len() == tab.phi {
            return CycScalar { tab, c: coeffs.into_iter().collect() };
        }
        let mut out = CycScalar::zero(order);
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, &p) in tab.power(k).iter().enumerate() {
                if p != 0 {
                    out.c[i] = &out.c[i] + &(a * &Rat::int(p));
                }
            }
        }
        out
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.tab.order
    }

    #[inline]
    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.c[1..].iter().all(Rat::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Canonical embedding into Q(zeta_N) for `M | N`.
    pub fn lift(&self, n: u32) -> Result<CycScalar, CycError> {
        let m = self.order();
        if n % m != 0 {
            return Err(CycError::NotAMultiple { from: m, to: n });
        }
        if n == m {
            return Ok(self.clone());
        }
        let step = (n / m) as usize;
        let tab = table(n);
        let mut out = CycScalar::zero(n);
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, &p) in tab.power(k * step).iter().enumerate() {
                if p != 0 {
                    out.c[i] = &out.c[i] + &(a * &Rat::int(p));
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`lift`](Self::lift): returns the preimage in Q(zeta_m) when there is one.
    pub fn project(&self, m: u32) -> Result<Option<CycScalar>, CycError> {
        let n = self.order();
        if n % m != 0 {
            return Err(CycError::NotAMultiple { from: m, to: n });
        }
        let small = table(m);
        // columns: lifted basis vectors of Q(zeta_m)
        let cols: Vec<CycScalar> = (0..small.phi)
            .map(|k| CycScalar::zeta_pow(m, k as i64).lift(n).unwrap())
            .collect();
        let rows = self.tab.phi;
        let ncols = small.phi;
        let mut a: Vec<Vec<Rat>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rat> = cols.iter().map(|c| c.c[r].clone()).collect();
                row.push(self.c[r].clone());
                row
            })
            .collect();
        let sol = solve_consistent(&mut a, ncols);
        Ok(sol.map(|x| CycScalar::from_coeffs(m, x)))
    }

    fn rational_scale(&self, r: &Rat) -> CycScalar {
        CycScalar { tab: self.tab, c: self.c.iter().map(|x| x * r).collect() }
    }

    fn mul_same(&self, o: &CycScalar) -> CycScalar {
        let phi = self.tab.phi;
        if phi == 1 {
            return CycScalar { tab: self.tab, c: smallvec![&self.c[0] * &o.c[0]] };
        }
        if let Some(r) = self.as_rat() {
            return o.rational_scale(r);
        }
        if let Some(r) = o.as_rat() {
            return self.rational_scale(r);
        }
        let mut prod: SmallVec<[Rat; 8]> = smallvec![Rat::ZERO; 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        let mut c: Coeffs = prod[..phi].iter().cloned().collect();
        for (k, p) in prod.iter().enumerate().skip(phi) {
            if p.is_zero() {
                continue;
            }
            for (i, &t) in self.tab.power(k).iter().enumerate() {
                if t != 0 {
                    c[i] = &c[i] + &(p * &Rat::int(t));
                }
            }
        }
        CycScalar { tab: self.tab, c }
    }

    /// Brings both operands to a common order (the lcm of the two).
    fn align<'a>(
        a: &'a CycScalar,
        b: &'a CycScalar,
    ) -> (std::borrow::Cow<'a, CycScalar>, std::borrow::Cow<'a, CycScalar>) {
        use std::borrow::Cow;
        if std::ptr::eq(a.tab, b.tab) {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let l = a.order().lcm(&b.order());
        let la = if a.order() == l { Cow::Borrowed(a) } else { Cow::Owned(a.lift(l).unwrap()) };
        let lb = if b.order() == l { Cow::Borrowed(b) } else { Cow::Owned(b.lift(l).unwrap()) };
        (la, lb)
    }

    /// Addition that refuses to coerce between different orders.
    pub fn add_strict(&self, o: &CycScalar) -> Result<CycScalar, CycError> {
        if self.order() != o.order() {
            return Err(CycError::OrderMismatch(self.order(), o.order()));
        }
        Ok(self + o)
    }

    /// Multiplication that refuses to coerce between different orders.
    pub fn mul_strict(&self, o: &CycScalar) -> Result<CycScalar, CycError> {
        if self.order() != o.order() {
            return Err(CycError::OrderMismatch(self.order(), o.order()));
        }
        Ok(self * o)
    }

    pub fn inv(&self) -> Result<CycScalar, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            return Ok(CycScalar::from_rat(r.recip(), self.order()));
        }
        let a: Vec<Rat> = self.c.to_vec();
        let m: Vec<Rat> = self.tab.cyclotomic.iter().map(|&x| Rat::int(x)).collect();
        let s = poly_inverse_mod(&a, &m);
        Ok(CycScalar::from_coeffs(self.order(), s))
    }

    pub fn checked_div(&self, o: &CycScalar) -> Result<CycScalar, CycError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> CycScalar {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycScalar::one(self.order());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism zeta -> zeta^a, for `gcd(a, M) = 1`.
    pub fn galois(&self, a: i64) -> CycScalar {
        let m = self.order() as i64;
        let mut out = CycScalar::zero(self.order());
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = CycScalar::zeta_pow(self.order(), (k as i64 * a).rem_euclid(m.max(1)));
            out = &out + &z.rational_scale(c);
        }
        out
    }

    /// Complex conjugate (zeta -> zeta^-1).
    pub fn conj(&self) -> CycScalar {
        self.galois(-1)
    }

    /// Smallest order this value can be written in; used to keep literals short.
    pub fn minimal_order(&self) -> CycScalar {
        if let Some(r) = self.as_rat() {
            return CycScalar::from_rat(r.clone(), 1);
        }
        let n = self.order();
        for d in 1..n {
            if n % d == 0 {
                if let Ok(Some(p)) = self.project(d) {
                    return p;
                }
            }
        }
        self.clone()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, o: &CycScalar) -> bool {
        let (a, b) = CycScalar::align(self, o);
        a.c == b.c
    }
}
impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero(1)
    }
}

impl From<Rat> for CycScalar {
    fn from(r: Rat) -> Self {
        CycScalar::from_rat(r, 1)
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::int(n)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    #[inline]
    fn add(self, o: &CycScalar) -> CycScalar {
        if std::ptr::eq(self.tab, o.tab) {
            let c = self.c.iter().zip(o.c.iter()).map(|(a, b)| a + b).collect();
            return CycScalar { tab: self.tab, c };
        }
        let (a, b) = CycScalar::align(self, o);
        &*a + &*b
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    #[inline]
    fn sub(self, o: &CycScalar) -> CycScalar {
        if std::ptr::eq(self.tab, o.tab) {
            let c = self.c.iter().zip(o.c.iter()).map(|(a, b)| a - b).collect();
            return CycScalar { tab: self.tab, c };
        }
        let (a, b) = CycScalar::align(self, o);
        &*a - &*b
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    #[inline]
    fn mul(self, o: &CycScalar) -> CycScalar {
        if std::ptr::eq(self.tab, o.tab) {
            return self.mul_same(o);
        }
        // rational operands scale without lifting the other side
        if self.order() == 1 {
            return o.rational_scale(&self.c[0]);
        }
        if o.order() == 1 {
            return self.rational_scale(&o.c[0]);
        }
        let (a, b) = CycScalar::align(self, o);
        a.mul_same(&b)
    }
}

impl<'a> Div<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn div(self, o: &CycScalar) -> CycScalar {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { tab: self.tab, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $f(self, o: CycScalar) -> CycScalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $f(self, o: &CycScalar) -> CycScalar {
                (&self).$f(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&CycScalar> for CycScalar {
    #[inline]
    fn add_assign(&mut self, o: &CycScalar) {
        if std::ptr::eq(self.tab, o.tab) {
            for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
                if !b.is_zero() {
                    *a = &*a + b;
                }
            }
        } else {
            *self = &*self + o;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, o: &CycScalar) {
        *self = &*self - o;
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rat() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.signum() < 0;
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{}", self.order(), k)?,
                (_, false) => write!(f, "{mag}*z{}^{}", self.order(), k)?,
            }
        }
        Ok(())
    }
}

// ---- polynomial helpers over Q (low degree first) ----

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![Rat::ZERO], r);
    }
    let mut q = vec![Rat::ZERO; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * bc);
            }
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::ZERO; n];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] - y;
    }
    trim(&mut out);
    out
}

/// Extended Euclid: `s` with `s * a = 1 mod m`, assuming `gcd(a, m) = 1`.
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rat::ZERO], vec![Rat::ONE]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = r0[0].recip();
    let (_, s) = poly_divmod(&s0, m);
    s.iter().map(|x| x * &c).collect()
}

/// Solves an augmented system `[A | b]` with `ncols` unknowns; `None` when inconsistent.
fn solve_consistent(a: &mut [Vec<Rat>], ncols: usize) -> Option<Vec<Rat>> {
    let rows = a.len();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::ZERO; ncols];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = a[i][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40 {
            assert_eq!(cyclotomic_poly(m).len() - 1, euler_phi(m));
        }
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [3u32, 4, 5, 8, 12, 15] {
            let z = CycScalar::zeta(m);
            assert!(z.pow(m as i64).is_one());
            for k in 1..m as i64 {
                assert!(!z.pow(k).is_one());
            }
        }
    }

    #[test]
    fn i_squared() {
        let i = CycScalar::zeta(4);
        assert_eq!(&i * &i, CycScalar::int(-1));
    }

    #[test]
    fn phi3_relation() {
        let z = CycScalar::zeta(3);
        let s = &(&CycScalar::one(3) + &z) + &(&z * &z);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_two_plus_zeta8() {
        let a = &CycScalar::int(2) + &CycScalar::zeta(8);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn lift_and_project() {
        assert_eq!(CycScalar::zeta(4).lift(8).unwrap(), CycScalar::zeta_pow(8, 2));
        assert_eq!(CycScalar::int(-1).lift(8).unwrap(), CycScalar::int(-1));
        for k in 0..2 {
            let b = CycScalar::zeta_pow(3, k);
            let up = b.lift(12).unwrap();
            assert_eq!(up.project(3).unwrap().unwrap().coeffs(), b.coeffs());
        }
        assert!(CycScalar::zeta(12).project(3).unwrap().is_none());
        assert!(matches!(CycScalar::zeta(4).lift(6), Err(CycError::NotAMultiple { .. })));
    }

    #[test]
    fn mixed_orders_coerce() {
        let a = CycScalar::zeta(4);
        let b = CycScalar::zeta(3);
        let p = &a * &b;
        assert_eq!(p.order(), 12);
        assert_eq!(p, CycScalar::zeta_pow(12, 7));
        assert!(matches!(a.add_strict(&b), Err(CycError::OrderMismatch(4, 3))));
    }

    #[test]
    fn galois_conjugation() {
        let z = CycScalar::zeta(8);
        assert!((&z * &z.conj()).is_one());
        let s2 = &z + &z.conj();
        assert_eq!(&s2 * &s2, CycScalar::int(2));
    }

    #[test]
    fn minimal_order_finds_subfield() {
        let i = CycScalar::zeta(4).lift(24).unwrap();
        assert_eq!(i.minimal_order().order(), 4);
    }
}
