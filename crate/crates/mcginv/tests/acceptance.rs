//! One PASS/FAIL line per acceptance criterion. Every comparison is exact.

use std::time::{Duration, Instant};

use cyclo::CycScalar;
use linmap::LinMap;
use mcginv::bundle::Bundle;
use mcginv::coend::HandleK;
use mcginv::examples::{automorphism_from_group_aut, drinfeld_double_cyclic, Example};
use mcginv::mcg::{generators, invariance_suite, McgContext, SuiteOptions};
use mcginv::ribbon::{identity_suite, verify_integrals, verify_quasitriangular, verify_ribbon, RibbonData};
use mcginv::Report;

type Outcome = Result<String, String>;

fn ex(k: usize) -> Example {
    drinfeld_double_cyclic(k).unwrap()
}

fn ctx(k: usize) -> McgContext {
    McgContext::new(ex(k).ribbon().unwrap(), None).unwrap()
}

fn require(rep: &Report) -> Result<(), String> {
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {}", rep.title, c.name)),
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    if e < limit {
        Ok(())
    } else {
        Err(format!("{what} took {e:?}, limit {limit:?}"))
    }
}

fn axioms() -> Outcome {
    for k in [2, 3] {
        let t = Instant::now();
        let e = ex(k);
        require(&e.hopf.verify_hopf())?;
        require(&verify_quasitriangular(&e.hopf, &e.r))?;
        let rd = e.ribbon().map_err(|e| e.to_string())?;
        require(&verify_ribbon(&rd))?;
        rd.require_factorizable().map_err(|e| e.to_string())?;
        if !rd.normalized {
            return Err(format!("D(Z/{k}): integrals not normalized"));
        }
        require(&verify_integrals(&rd))?;
        if !rd.eval_lambda(&rd.big_lambda).is_one() {
            return Err(format!("D(Z/{k}): λ(Λ) ≠ 1"));
        }
        if rd.f_q.apply_vec(&rd.lambda) != rd.big_lambda {
            return Err(format!("D(Z/{k}): f_Q(λ) ≠ Λ"));
        }
        if rd.base.antipode(&rd.big_lambda) != rd.big_lambda {
            return Err(format!("D(Z/{k}): S(Λ) ≠ Λ"));
        }
        within(t, Duration::from_secs(5), &format!("D(Z/{k}) certification"))?;
    }
    Ok("D(Z/2), D(Z/3) certified".into())
}

fn identities() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for k in [2, 3] {
        let rep = identity_suite(&ex(k).ribbon().unwrap());
        require(&rep)?;
        count += rep.checks.len();
    }
    within(t, Duration::from_secs(60), "identity suite")?;
    Ok(format!("{count} identities exact"))
}

fn chain() -> Outcome {
    let t = Instant::now();
    let c = ctx(2);
    let paths = c.cor11_paths();
    if let Some(i) = (1..4).find(|&i| paths[i] != paths[0]) {
        return Err(format!("chain picture {} differs from the first", i + 1));
    }
    let idf = LinMap::identity(c.f.bimod.shape.clone());
    let c111 = c.corr(1, 1, 1);
    let via_unit = (&c.f.m * &c.corr(1, 1, 0).kron(&idf)).reshape(c111.cod().clone(), c111.dom().clone()).unwrap();
    if c111 != via_unit {
        return Err("Corr_{1,1,1} ≠ m_F∘(Corr_{1,1,0}⊗id)".into());
    }
    for g in 1..=2 {
        if c.corr_g11(g) != c.corr_g11_product(g) {
            return Err(format!("nested and product constructions differ at g = {g}"));
        }
    }
    within(t, Duration::from_secs(10), "chain")?;
    Ok("four pictures and both construction paths agree".into())
}

fn suite_all(c: &McgContext, cases: &[(usize, usize)], limit: Duration) -> Result<usize, String> {
    let t = Instant::now();
    let mut checks = 0;
    for &(g, n) in cases {
        let (rep, res) = invariance_suite(c, g, n, &SuiteOptions::default());
        require(&rep)?;
        if res.len() != generators(g, n).len() {
            return Err(format!("({g},{n}) on {}: generators were sampled", c.rd.base.name));
        }
        checks += res.len();
    }
    within(t, limit, &format!("suite on {}", c.rd.base.name))?;
    Ok(checks)
}

fn invariance() -> Outcome {
    let a = suite_all(&ctx(2), &[(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)], Duration::from_secs(120))?;
    let b = suite_all(&ctx(3), &[(1, 0), (1, 1), (2, 1)], Duration::from_secs(900))?;
    Ok(format!("{} generator checks", a + b))
}

fn twisted() -> Outcome {
    let t = Instant::now();
    let rd = ex(3).ribbon().unwrap();
    let w = automorphism_from_group_aut(3, 2).map_err(|e| e.to_string())?;
    let winv = linmap::inverse(&w).map_err(|e| e.to_string())?;
    let plain = McgContext::new(rd.clone(), None).unwrap();
    let tw = McgContext::new(rd, Some(&w)).map_err(|e| e.to_string())?;
    for (g, n) in [(1, 0), (1, 1)] {
        let (rep, _) = invariance_suite(&tw, g, n, &SuiteOptions::default());
        require(&rep)?;
        let want = McgContext::twisted_from_plain(&plain, &winv, g, n).map_err(|e| e.to_string())?;
        if tw.cor(g, n) != want {
            return Err(format!("Cor^ω_{{{g},{n}}} ≠ Cor∘(id⊗(ω^-1)*)^g"));
        }
    }
    within(t, Duration::from_secs(120), "twisted suite")?;
    Ok("inversion on D(Z/3)".into())
}

fn nonvanishing() -> Outcome {
    for k in [2, 3] {
        if ctx(k).cor(1, 0).is_zero() {
            return Err(format!("Cor_{{1,0}} = 0 on D(Z/{k})"));
        }
    }
    Ok("Cor_{1,0} ≠ 0 on both".into())
}

fn sl2z() -> Outcome {
    let rd = ex(2).ribbon().unwrap();
    let k = HandleK::build(&rd).map_err(|e| e.to_string())?;
    let id = LinMap::identity(k.bimod.shape.clone());
    if &k.s * &k.s_inv != id {
        return Err("S_K S_K^-1 ≠ id".into());
    }
    match k.sl2z_scalars() {
        (Some(c1), Some(c2)) => Ok(format!("c1 = {c1}, c2 = {c2}")),
        (None, _) => Err("(S_K T_K)^3 not proportional to S_K^2".into()),
        (_, None) => Err("S_K^2 T_K not proportional to T_K S_K^2".into()),
    }
}

fn dense_oracle() -> Outcome {
    let mut count = 0;
    for k in [2, 3] {
        let c = ctx(k);
        for n in 0..=2 {
            let objs = vec![c.f.bimod.clone(); n];
            let cor = c.cor(1, n);
            for gen in generators(1, n) {
                let a = c.action(gen, 1, &objs).map_err(|e| e.to_string())?;
                let f = a.apply(&cor).map_err(|e| e.to_string())?;
                let d = a.apply_dense(&cor).map_err(|e| e.to_string())?;
                if f != d {
                    return Err(format!("{} at n = {n} on D(Z/{k})", gen.label()));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} generator applications"))
}

fn mutations() -> Outcome {
    let e = ex(2);
    let mut named = Vec::new();

    let mut b = Bundle::from_example(&e);
    b.product[0].3 += &CycScalar::int(1);
    let rep = b.hopf().map_err(|e| e.to_string())?.verify_hopf();
    named.push(("product", rep.first_failure().map(|c| c.name.clone())));

    let mut r = e.r.clone();
    let i = r.iter().position(|c| !c.is_zero()).unwrap();
    r[i] += &CycScalar::int(1);
    let rep = verify_quasitriangular(&e.hopf, &r);
    named.push(("R", rep.first_failure().map(|c| c.name.clone())));

    let rd = e.ribbon().unwrap();
    let mut bad: RibbonData = rd.clone();
    bad.lambda[0] += &CycScalar::int(1);
    let mut rep = verify_integrals(&bad);
    rep.merge("identities", identity_suite(&bad));
    named.push(("λ", rep.first_failure().map(|c| c.name.clone())));

    let mut parts = Vec::new();
    for (what, fail) in named {
        match fail {
            Some(name) => parts.push(format!("{what} -> \"{name}\"")),
            None => return Err(format!("mutated {what} passed silently")),
        }
    }
    Ok(parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom certification", axioms),
        ("identity suite", identities),
        ("chain and construction paths", chain),
        ("invariance under all generators", invariance),
        ("twisted correlators", twisted),
        ("non-vanishing", nonvanishing),
        ("SL(2,Z) spot-check", sl2z),
        ("factored equals dense", dense_oracle),
        ("negative controls", mutations),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let ms = t.elapsed().as_millis();
        match &out {
            Ok(d) => println!("PASS {} {name} ({d}) [{ms} ms]", i + 1),
            Err(d) => {
                println!("FAIL {} {name}: {d} [{ms} ms]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
