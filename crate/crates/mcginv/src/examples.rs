//! Example algebras: Drinfeld doubles given by structure constants.
//!
//! The double `D(A)` has basis `e^i ⊗ e_j` (index `i·n + j`) with
//!
//! ```text
//! (f⊗a)(g⊗b) = f · g(S^-1(a3) ? a1) ⊗ a2 b
//! Δ(f⊗a)     = (f''⊗a1) ⊗ (f'⊗a2)        where f(xy) = f'(x) f''(y)
//! S(f⊗a)     = (ε⊗S(a)) (f∘S^-1 ⊗ 1)
//! R          = Σ_i (1⊗e_i) ⊗ (e^i⊗1)
//! ```
//!
//! and the product of `A*` is `(fg)(x) = f(x1) g(x2)`.

use cyclo::CycScalar;
use linmap::LinMap;

use crate::hopf::{from_tables, is_zero, tensor, zeros, Elem, HopfData};
use crate::ribbon::{verify_quasitriangular, verify_ribbon, RibbonData};
use crate::McgError;

fn one() -> CycScalar {
    CycScalar::one(1)
}

/// Sparse element accumulator keyed by basis index.
fn push(out: &mut Vec<(usize, CycScalar)>, k: usize, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    if let Some(e) = out.iter_mut().find(|e| e.0 == k) {
        e.1 += &c;
    } else {
        out.push((k, c));
    }
}

fn clean(v: Vec<(usize, CycScalar)>) -> Vec<(usize, CycScalar)> {
    let mut v: Vec<_> = v.into_iter().filter(|e| !e.1.is_zero()).collect();
    v.sort_by_key(|e| e.0);
    v
}

/// The Drinfeld double of `a`, with its canonical R-matrix.
pub fn drinfeld_double(a: &HopfData) -> Result<(HopfData, Elem), McgError> {
    let n = a.n;
    let s_inv = a.antipode_inverse()?;
    let unit_a = a.one();
    let eps_a: Vec<CycScalar> = (0..n).map(|i| a.eps.get(0, i)).collect();

    // (Δ⊗id)Δ(e_j) as (a1, a2, a3, c)
    let cop2: Vec<Vec<(usize, usize, usize, CycScalar)>> = (0..n)
        .map(|j| {
            let mut out = Vec::new();
            for (x, y, c) in a.cop_basis(j) {
                for (x1, x2, c2) in a.cop_basis(*x) {
                    out.push((*x1, *x2, *y, c * c2));
                }
            }
            out
        })
        .collect();
    // dual product e^i e^k = Σ_l [coefficient of e_i ⊗ e_k in Δ(e_l)] e^l
    let dual_mul = |f: &[(usize, CycScalar)], g: &[(usize, CycScalar)]| -> Vec<(usize, CycScalar)> {
        let mut out = Vec::new();
        for l in 0..n {
            let mut acc = CycScalar::zero(1);
            for (x, y, c) in a.cop_basis(l) {
                for (i, fi) in f {
                    if i != x {
                        continue;
                    }
                    for (k, gk) in g {
                        if k == y {
                            acc += &(&(fi * gk) * c);
                        }
                    }
                }
            }
            push(&mut out, l, acc);
        }
        out
    };
    // x ↦ e^k(S^-1(a3) x a1) as a functional
    let conj_functional = |k: usize, a1: usize, a3: usize| -> Vec<(usize, CycScalar)> {
        let left = s_inv.column(a3);
        let mut out = Vec::new();
        for p in 0..n {
            let y = a.mul(&a.mul(&left, &a.basis(p)), &a.basis(a1));
            push(&mut out, p, y[k].clone());
        }
        out
    };
    let dim = n * n;
    let mut prod_table: Vec<Vec<(usize, CycScalar)>> = Vec::with_capacity(dim * dim);
    for ij in 0..dim {
        let (i, j) = (ij / n, ij % n);
        for kb in 0..dim {
            let (k, b) = (kb / n, kb % n);
            let mut out = Vec::new();
            for (a1, a2, a3, c) in &cop2[j] {
                let g = conj_functional(k, *a1, *a3);
                let f = dual_mul(&[(i, one())], &g);
                let ab = a.prod_basis(*a2, b);
                for (p, x) in &f {
                    for (q, y) in ab {
                        push(&mut out, p * n + q, &(c * x) * y);
                    }
                }
            }
            prod_table.push(clean(out));
        }
    }
    let mul_d = |x: &[(usize, CycScalar)], y: &[(usize, CycScalar)]| -> Vec<(usize, CycScalar)> {
        let mut out = Vec::new();
        for (i, cx) in x {
            for (j, cy) in y {
                for (k, c) in &prod_table[i * dim + j] {
                    push(&mut out, *k, &(cx * cy) * c);
                }
            }
        }
        clean(out)
    };
    // f(xy) = f'(x) f''(y): Δ(e^l) = Σ_{x,y} [e_x e_y]_l e^x ⊗ e^y
    let cop_table: Vec<Vec<(usize, usize, CycScalar)>> = (0..dim)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut out = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    let c = a.prod_basis(x, y).iter().find(|e| e.0 == i).map(|e| e.1.clone());
                    let Some(c) = c else { continue };
                    for (a1, a2, c2) in a.cop_basis(j) {
                        out.push((y * n + a1, x * n + a2, &c * c2));
                    }
                }
            }
            out
        })
        .collect();
    let eps_star: Vec<(usize, CycScalar)> = clean(eps_a.iter().cloned().enumerate().collect());
    let antipode: Vec<Vec<(usize, CycScalar)>> = (0..dim)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let sa = a.antipode(&a.basis(j));
            let left: Vec<(usize, CycScalar)> = {
                let mut out = Vec::new();
                for (p, e) in &eps_star {
                    for (q, s) in sa.iter().enumerate() {
                        push(&mut out, p * n + q, e * s);
                    }
                }
                clean(out)
            };
            let right: Vec<(usize, CycScalar)> = {
                let mut out = Vec::new();
                for p in 0..n {
                    let fp = s_inv.get(i, p);
                    for (q, u) in unit_a.iter().enumerate() {
                        push(&mut out, p * n + q, &fp * u);
                    }
                }
                clean(out)
            };
            mul_d(&left, &right)
        })
        .collect();
    let unit = tensor(&eps_a, &unit_a);
    let counit: Vec<CycScalar> = (0..dim).map(|ij| &unit_a[ij / n] * &eps_a[ij % n]).collect();
    let order = a.order;
    let d = from_tables(
        &format!("D({})", a.name),
        order,
        dim,
        |x, y| prod_table[x * dim + y].clone(),
        |x| cop_table[x].clone(),
        unit,
        counit,
        |x| antipode[x].clone(),
    )?;
    let mut r = zeros(dim * dim);
    for i in 0..n {
        let left = tensor(&eps_a, &a.basis(i));
        let mut dual_i = zeros(n);
        dual_i[i] = one();
        let right = tensor(&dual_i, &unit_a);
        let term = tensor(&left, &right);
        for (o, x) in r.iter_mut().zip(term) {
            *o += &x;
        }
    }
    Ok((d, r))
}

/// A generated example: algebra, R-matrix and ribbon element.
#[derive(Clone, Debug)]
pub struct Example {
    pub hopf: HopfData,
    pub r: Elem,
    pub v: Option<Elem>,
}

impl Example {
    pub fn ribbon(&self) -> Result<RibbonData, McgError> {
        RibbonData::new(self.hopf.clone(), self.r.clone(), self.v.clone())
    }
}

/// `D(k[Z/k])` with basis `δ_g ⊗ h` at index `g·k + h`, certified before
/// it is returned.
pub fn drinfeld_double_cyclic(k: usize) -> Result<Example, McgError> {
    if k < 2 {
        return Err(McgError::IndexOutOfRange(format!("k = {k} must be at least 2")));
    }
    let (mut hopf, r) = drinfeld_double(&crate::hopf::cyclic_group_algebra(k))?;
    hopf.name = format!("D(Z/{k})");
    let ex = Example { hopf, r, v: None };
    certify(&ex)?;
    Ok(ex)
}

/// Runs every verifier; errors name the first failing check.
pub fn certify(ex: &Example) -> Result<RibbonData, McgError> {
    let fail = |what: &str, r: &crate::Report| {
        McgError::Format(format!("{what} failed: {}", r.first_failure().map_or("?", |c| c.name.as_str())))
    };
    let rh = ex.hopf.verify_hopf();
    if !rh.passed() {
        return Err(fail("Hopf axioms", &rh));
    }
    let rq = verify_quasitriangular(&ex.hopf, &ex.r);
    if !rq.passed() {
        return Err(fail("quasitriangularity", &rq));
    }
    let rd = ex.ribbon()?;
    let rr = verify_ribbon(&rd);
    if !rr.passed() {
        return Err(fail("ribbon axioms", &rr));
    }
    rd.require_factorizable()?;
    Ok(rd)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `δ_g ⊗ h ↦ δ_{ag} ⊗ h^a` on `D(k[Z/k])` (additive notation for `Z/k`).
pub fn automorphism_from_group_aut(k: usize, a: i64) -> Result<LinMap, McgError> {
    let ar = a.rem_euclid(k as i64) as usize;
    if gcd(ar, k) != 1 {
        return Err(McgError::NotCoprime { a, k });
    }
    let dim = k * k;
    let t = (0..dim).map(|gh| {
        let (g, h) = (gh / k, gh % k);
        (((ar * g) % k) * k + (ar * h) % k, gh, one())
    });
    Ok(LinMap::from_triplets(linmap::SpaceShape::flat(dim), linmap::SpaceShape::flat(dim), t))
}

/// Sweedler's four-dimensional algebra: basis `1, g, x, gx` with
/// `g² = 1`, `x² = 0`, `xg = -gx`, `Δx = x⊗1 + g⊗x`.
pub fn sweedler() -> HopfData {
    let m1 = || CycScalar::int(-1);
    // words as (g-power, has x) with the sign of the normal form g^a x^b
    let word = |i: usize| (i & 1, i >> 1);
    let idx = |g: usize, x: usize| g | (x << 1);
    let prod = move |i: usize, j: usize| {
        let (g1, x1) = word(i);
        let (g2, x2) = word(j);
        if x1 + x2 > 1 {
            return vec![];
        }
        // x g = -g x
        let sign = if x1 == 1 && g2 == 1 { m1() } else { one() };
        vec![(idx((g1 + g2) % 2, x1 + x2), sign)]
    };
    let cop = |i: usize| match i {
        0 => vec![(0, 0, one())],
        1 => vec![(1, 1, one())],
        2 => vec![(2, 0, one()), (1, 2, one())],
        _ => vec![(3, 1, one()), (0, 3, one())],
    };
    let antipode = move |i: usize| match i {
        0 => vec![(0, one())],
        1 => vec![(1, one())],
        2 => vec![(3, m1())],
        _ => vec![(2, one())],
    };
    let mut unit = zeros(4);
    unit[0] = one();
    let counit = vec![one(), one(), CycScalar::zero(1), CycScalar::zero(1)];
    from_tables("H4", 1, 4, prod, cop, unit, counit, antipode).expect("consistent tables")
}

/// `D(H4)`: a noncommutative, noncocommutative factorizable example with
/// non-involutive antipode.
///
/// `D(H4)` has no ribbon element (the distinguished group-like of `H4` has no
/// group-like square root), so `v` here is the first central `t^-1 u`, `t`
/// group-like, with `ε(v) = 1` and `Δ(v) = (v⊗v)Q^-1`. It fails only
/// `S(v) = v`, and is meant for checks that do not involve the ribbon element.
pub fn double_sweedler() -> Result<Example, McgError> {
    let h4 = sweedler();
    let (mut hopf, r) = drinfeld_double(&h4)?;
    hopf.name = "D(H4)".into();
    let n = 4;
    // group-likes of H4* (ε and the character g ↦ -1) and of H4 (1, g)
    let chars = [
        vec![one(), one(), CycScalar::zero(1), CycScalar::zero(1)],
        vec![one(), CycScalar::int(-1), CycScalar::zero(1), CycScalar::zero(1)],
    ];
    let probe = RibbonData::new(hopf.clone(), r.clone(), Some(hopf.one()));
    let u = match probe {
        Ok(p) => p.u,
        Err(_) => {
            // any invertible placeholder works for reading off u
            return Err(McgError::MissingRibbon("could not derive the Drinfeld element".into()));
        }
    };
    for ch in &chars {
        for gl in [h4.basis(0), h4.basis(1)] {
            let t = tensor(ch, &gl);
            debug_assert_eq!(t.len(), n * n);
            let Some(tinv) = hopf.inverse_elem(&t) else { continue };
            let v = hopf.mul(&tinv, &u);
            if is_zero(&v) {
                continue;
            }
            let Ok(rd) = RibbonData::new(hopf.clone(), r.clone(), Some(v.clone())) else { continue };
            let rep = verify_ribbon(&rd);
            if rep.failed_names() == ["S(v) = v"] {
                return Ok(Example { hopf, r, v: Some(v) });
            }
        }
    }
    Err(McgError::MissingRibbon("no group-like yields a central twist candidate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_doubles_certify() {
        for k in [2, 3] {
            let ex = drinfeld_double_cyclic(k).unwrap();
            assert_eq!(ex.hopf.n, k * k);
        }
    }

    #[test]
    fn sweedler_is_hopf() {
        let r = sweedler().verify_hopf();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn double_sweedler_is_factorizable_but_not_ribbon() {
        let ex = double_sweedler().unwrap();
        assert!(ex.hopf.verify_hopf().passed());
        assert!(verify_quasitriangular(&ex.hopf, &ex.r).passed());
        let rd = ex.ribbon().unwrap();
        assert!(rd.factorizable && rd.normalized);
        assert_ne!(&rd.base.s * &rd.base.s, LinMap::id(16));
        assert!(matches!(certify(&ex), Err(McgError::Format(m)) if m.contains("S(v) = v")));
    }

    #[test]
    fn automorphism_candidates() {
        assert_eq!(automorphism_from_group_aut(2, 1).unwrap(), LinMap::id(4));
        assert!(matches!(automorphism_from_group_aut(4, 2), Err(McgError::NotCoprime { .. })));
        let w = automorphism_from_group_aut(5, 2).unwrap();
        let w2 = &w * &w;
        assert_ne!(w2, LinMap::id(25));
        assert_eq!(&w2 * &w2, LinMap::id(25));
    }
}
