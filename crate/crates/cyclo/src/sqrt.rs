//! Square roots inside cyclotomic fields.
//!
//! Rationals go through Gauss sums, `r * zeta^j` through roots of unity, and
//! anything else through a p-adic lift: pick a prime `p = 1 mod N`, take square
//! roots at every embedding mod `p^k`, interpolate back to the power basis and
//! rationally reconstruct. Every candidate is checked by squaring.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{euler_phi, table, CycScalar};
use crate::rat::{square_part, Rat};
use crate::CycError;

/// Largest field degree the generic p-adic search is attempted for.
const GENERIC_MAX_PHI: usize = 12;

/// Returns `s` with `s^2 = a` in the smallest `Q(zeta_N)`, `N` a multiple of the
/// order of `a` and at most `max_order`. The sign is fixed by making the first
/// nonzero power-basis coefficient positive.
pub fn sqrt_in_cyclotomic(a: &CycScalar, max_order: u32) -> Result<CycScalar, CycError> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    let m = a.order();
    let rational_need = a.as_rat().map(rational_sqrt_order);
    let unit_need = rational_times_root(a);
    let mut n = m;
    while n <= max_order {
        let found = if let Some(need) = rational_need {
            if n % need == 0 {
                Some(rational_sqrt(a.as_rat().unwrap()).lift(n)?)
            } else {
                None
            }
        } else if let Some((r, j)) = &unit_need {
            let (need, s) = root_times_root(r, *j, m);
            if n % need == 0 {
                Some(s.lift(n)?)
            } else {
                None
            }
        } else if euler_phi(n) <= GENERIC_MAX_PHI {
            padic_sqrt(&a.lift(n)?)
        } else {
            None
        };
        if let Some(s) = found {
            debug_assert!(&s * &s == *a);
            return Ok(normalize_sign(s));
        }
        n += m;
    }
    Err(CycError::NotFound { value: a.to_string(), max_order })
}

fn normalize_sign(s: CycScalar) -> CycScalar {
    match s.coeffs().iter().find(|c| !c.is_zero()) {
        Some(c) if c.signum() < 0 => -s,
        _ => s,
    }
}

/// Smallest order containing `sqrt(r)`.
fn rational_sqrt_order(r: &Rat) -> u32 {
    rational_sqrt(r).order()
}

fn gauss_sum(p: u32) -> CycScalar {
    let mut g = CycScalar::zero(p);
    for k in 1..p {
        let leg = legendre(k as u64, p as u64);
        let z = CycScalar::zeta_pow(p, k as i64);
        g = if leg == 1 { &g + &z } else { &g - &z };
    }
    g
}

fn legendre(a: u64, p: u64) -> i32 {
    let r = modpow_u64(a % p, (p - 1) / 2, p);
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

fn modpow_u64(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// `sqrt(r)` built from Gauss sums `sqrt(p*)`, `sqrt(+-2)` and `sqrt(-1)`,
/// in the smallest cyclotomic field containing it.
fn rational_sqrt(r: &Rat) -> CycScalar {
    let nd = r.numer() * r.denom();
    let (root, core) = square_part(&nd);
    let coeff = Rat::from(root) / Rat::from(r.denom());
    let mut s = CycScalar::from_rat(coeff, 1);
    // sign of the part not yet accounted for by the p* factors
    let mut sign = if nd.sign() == Sign::Minus { -1 } else { 1 };
    let mut two = false;
    let mut rest = core;
    let mut p = BigInt::from(2u32);
    while rest > BigInt::one() {
        if (&rest % &p).is_zero() {
            rest /= &p;
            let pp = p.to_u32().expect("prime factor too large for a cyclotomic root");
            if pp == 2 {
                two = true;
            } else {
                // gauss_sum(p)^2 = p* = (-1)^((p-1)/2) p
                if pp % 4 == 3 {
                    sign = -sign;
                }
                s = &s * &gauss_sum(pp);
            }
        }
        p += 1u32;
    }
    let tail = match (two, sign) {
        (false, 1) => None,
        (false, _) => Some(CycScalar::zeta(4)),
        (true, 1) => Some(&CycScalar::zeta(8) + &CycScalar::zeta_pow(8, 7)),
        (true, _) => Some(&CycScalar::zeta(8) + &CycScalar::zeta_pow(8, 3)),
    };
    if let Some(t) = tail {
        s = &s * &t;
    }
    s
}

/// Detects `a = r * zeta_M^j` with `r` rational.
fn rational_times_root(a: &CycScalar) -> Option<(Rat, i64)> {
    let m = a.order() as i64;
    for j in 0..m {
        let t = a * &CycScalar::zeta_pow(a.order(), -j);
        if let Some(r) = t.as_rat() {
            return Some((r.clone(), j));
        }
    }
    None
}

/// `sqrt(r * zeta_m^j)` and the order it needs.
fn root_times_root(r: &Rat, j: i64, m: u32) -> (u32, CycScalar) {
    let sr = rational_sqrt(r);
    let need_r = sr.order();
    let (need_z, z) = if j % 2 == 0 {
        (m, CycScalar::zeta_pow(m, j / 2))
    } else if m % 2 == 1 {
        (m, CycScalar::zeta_pow(m, (j + m as i64) / 2))
    } else {
        (2 * m, CycScalar::zeta_pow(2 * m, j))
    };
    let need = (need_r as u64).lcm(&(need_z as u64)) as u32;
    (need, &sr * &z)
}

// ---- generic p-adic search ----

fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modpow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let mut m = s;
    let mut c = modpow_u64(z, q, p);
    let mut t = modpow_u64(a, q, p);
    let mut r = modpow_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = modpow_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let r = num_rational::BigRational::new(r1, t1);
    Some(Rat::from_big(r))
}

fn eval_mod(coeffs: &[Rat], x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let mut acc = BigInt::zero();
    let mut xp = BigInt::one();
    for c in coeffs {
        if !c.is_zero() {
            let d = modinv(&c.denom(), m)?;
            acc = (acc + c.numer() * d % m * &xp) % m;
        }
        xp = &xp * x % m;
    }
    Some(acc.mod_floor(m))
}

/// Solves `V c = b (mod m)` for the Vandermonde matrix of `roots`.
fn vandermonde_solve(roots: &[BigInt], b: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
    let n = roots.len();
    let mut a: Vec<Vec<BigInt>> = roots
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = BigInt::one();
            for _ in 0..n {
                row.push(p.clone());
                p = &p * r % m;
            }
            row.push(bi.clone());
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| modinv(&a[i][c], m).is_some())?;
        a.swap(c, piv);
        let inv = modinv(&a[c][c], m)?;
        for x in a[c].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let prow = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(prow.iter()) {
                    *x = (&*x - &f * y).mod_floor(m);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn padic_sqrt(a: &CycScalar) -> Option<CycScalar> {
    let n = a.order() as u64;
    let tab = table(a.order());
    let phi = tab.phi;
    let coeffs = a.coeffs();
    // prime p = 1 mod n, avoiding denominators and the discriminant region
    let mut p = n * ((10_007 / n) + 1) + 1;
    loop {
        if is_probable_prime(p) && coeffs.iter().all(|c| !(c.denom() % p).is_zero()) {
            break;
        }
        p += n;
    }
    // primitive n-th root of unity mod p
    let mut w = 0u64;
    for g in 2..p {
        let cand = modpow_u64(g, (p - 1) / n, p);
        let primitive = (1..n).filter(|d| n % d == 0).all(|d| modpow_u64(cand, d, p) != 1);
        if primitive {
            w = cand;
            break;
        }
    }
    let exps: Vec<u64> = (1..=n).filter(|e| e.gcd(&n) == 1).collect();
    debug_assert_eq!(exps.len(), phi);
    let pb = BigInt::from(p);
    let roots_p: Vec<u64> = exps.iter().map(|&e| modpow_u64(w, e, p)).collect();
    let mut sq_p = Vec::with_capacity(phi);
    for r in &roots_p {
        let v = eval_mod(coeffs, &BigInt::from(*r), &pb)?.to_u64()?;
        if v == 0 {
            return None;
        }
        sq_p.push(tonelli_shanks(v, p)?);
    }
    let mut k = 4u32;
    while k <= 256 {
        let modulus = pb.pow(k);
        // Hensel-lift w and the square roots to p^k
        let nb = BigInt::from(n);
        let mut wk = BigInt::from(w);
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let mm = pb.pow(prec);
            let f = (wk.modpow(&nb, &mm) - 1u32).mod_floor(&mm);
            let df = (&nb * wk.modpow(&(&nb - 1u32), &mm)).mod_floor(&mm);
            wk = (&wk - f * modinv(&df, &mm)?).mod_floor(&mm);
        }
        let roots: Vec<BigInt> = exps.iter().map(|&e| wk.modpow(&BigInt::from(e), &modulus)).collect();
        let mut sq = Vec::with_capacity(phi);
        for (r, s0) in roots.iter().zip(&sq_p) {
            let target = eval_mod(coeffs, r, &modulus)?;
            let mut s = BigInt::from(*s0);
            let mut prec = 1u32;
            while prec < k {
                prec = (2 * prec).min(k);
                let mm = pb.pow(prec);
                let f = (&s * &s - &target).mod_floor(&mm);
                let inv = modinv(&(BigInt::from(2u32) * &s), &mm)?;
                s = (&s - f * inv).mod_floor(&mm);
            }
            sq.push(s);
        }
        let combos = 1u64 << (phi - 1);
        for mask in 0..combos {
            let b: Vec<BigInt> = sq
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                        (-s).mod_floor(&modulus)
                    } else {
                        s.clone()
                    }
                })
                .collect();
            let Some(c) = vandermonde_solve(&roots, &b, &modulus) else { continue };
            let rats: Option<Vec<Rat>> = c.iter().map(|x| rational_reconstruct(x, &modulus)).collect();
            let Some(rats) = rats else { continue };
            let s = CycScalar::from_coeffs(a.order(), rats);
            if &s * &s == *a {
                return Some(s);
            }
        }
        k *= 2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &CycScalar, bound: u32) -> CycScalar {
        let s = sqrt_in_cyclotomic(a, bound).unwrap();
        assert_eq!(&s * &s, *a);
        s
    }

    #[test]
    fn sqrt_one_is_one() {
        assert!(check(&CycScalar::int(1), 1).is_one());
    }

    #[test]
    fn sqrt_two_needs_zeta8() {
        let s = check(&CycScalar::int(2), 8);
        assert_eq!(s.order(), 8);
        assert_eq!(s, &CycScalar::zeta(8) + &CycScalar::zeta_pow(8, 7));
        assert!(sqrt_in_cyclotomic(&CycScalar::int(2), 7).is_err());
    }

    #[test]
    fn rational_square_roots() {
        for (n, d) in [(3, 1), (5, 1), (-1, 1), (-3, 1), (12, 7), (1, 6), (-10, 9), (49, 4)] {
            let r = CycScalar::rat(n, d);
            check(&r, 840);
        }
    }

    #[test]
    fn sqrt_of_zeta3_is_in_q_zeta3() {
        let z = CycScalar::zeta(3);
        let s = check(&z, 3);
        assert_eq!(s.order(), 3);
        assert_eq!(s, -CycScalar::zeta_pow(3, 2));
    }

    #[test]
    fn sqrt_of_i_needs_order_8() {
        let i = CycScalar::zeta(4);
        assert!(sqrt_in_cyclotomic(&i, 4).is_err());
        assert_eq!(check(&i, 8).order(), 8);
    }

    #[test]
    fn generic_padic_square() {
        let x = &(&CycScalar::int(3) + &CycScalar::zeta(5)) - &CycScalar::rat(1, 2).lift(5).unwrap();
        let x = &x + &(&CycScalar::zeta_pow(5, 2) * &CycScalar::int(2));
        let sq = &x * &x;
        let s = check(&sq, 5);
        assert!(s == x || s == -x.clone());
    }

    #[test]
    fn non_square_is_not_found() {
        let a = &CycScalar::int(1) + &CycScalar::zeta(5);
        let a = &a + &CycScalar::int(1);
        assert!(sqrt_in_cyclotomic(&a, 5).is_err());
    }
}
