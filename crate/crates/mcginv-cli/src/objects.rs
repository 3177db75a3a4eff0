//! Bimodule expressions for `hom`: tensor products of `1`, `F` and `K`,
//! each optionally dualized or raised to a power.
//!
//! ```text
//! F * F^v        F ⊗ F^∨
//! ^vK * F^2      ^∨K ⊗ F ⊗ F
//! ```

use mcginv::bimod::{coregular, dual, tensor, tensor_power, unit, Bimodule, Side};
use mcginv::coend::handle_bimodule;
use mcginv::{McgError, RibbonData};

fn atom(rd: &RibbonData, tok: &str) -> Result<Bimodule, McgError> {
    let bad = || McgError::Format(format!("unknown object {tok:?}; use 1, F or K with ^v, ∨ or ^N"));
    let mut s = tok.trim();
    let mut left = false;
    for p in ["^v", "∨"] {
        if let Some(rest) = s.strip_prefix(p) {
            left = true;
            s = rest;
        }
    }
    let mut right = false;
    let mut power = 1;
    for p in ["^v", "∨"] {
        if let Some(rest) = s.strip_suffix(p) {
            right = true;
            s = rest;
        }
    }
    if let Some((base, exp)) = s.split_once('^') {
        power = exp.parse::<usize>().map_err(|_| bad())?;
        s = base;
    }
    let h = &rd.base;
    let x = match s {
        "1" => unit(h),
        "F" => coregular(h),
        "K" => handle_bimodule(h),
        _ => return Err(bad()),
    };
    let x = match (left, right) {
        (true, true) => return Err(bad()),
        (true, false) => dual(rd, &x, Side::Left),
        (false, true) => dual(rd, &x, Side::Right),
        (false, false) => x,
    };
    Ok(tensor_power(h, &x, power))
}

pub fn parse_object(rd: &RibbonData, src: &str) -> Result<Bimodule, McgError> {
    let mut out: Option<Bimodule> = None;
    for tok in src.split(['*', '⊗']) {
        let x = atom(rd, tok)?;
        out = Some(match out {
            None => x,
            Some(acc) => tensor(&rd.base, &acc, &x)?,
        });
    }
    out.ok_or_else(|| McgError::Format("empty object expression".into()))
}
