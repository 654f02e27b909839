use std::sync::Arc;

use defcalc::cech::{cech_scdgla, global_sections_compare, refinement_independence, refinement_map, Refinement};
use defcalc::dgla::{
    gauge, gauge_equiv_decide, mc_defect, obstruction_class, project_through, tangent_space, Dgla, LieCtx,
    Splitting, TensorCtx,
};
use defcalc::exactalg::Q;
use defcalc::forms::PolyForm;
use defcalc::graded::Complex;
use defcalc::h1sc::{
    check_witness, equiv_decide, generate_samples, hypothesis_h_minus1, lift_gauge_degree0, phi_01, phi_02, psi_01,
    surjectivity_lift, surjectivity_report, tangent_h1sc, verify_main_theorem, z1_check, z1_member, z1_transport, H1Ctx,
    Samples, Z1Status,
};
use defcalc::io;
use defcalc::tw::{decompose_mc, normal_form_01, normal_form_02, tot_complex, truncation_criterion, ScDgla, TwCtx, TwElement};
use defcalc::{Error, Result};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::instance::{Body, Instance};
use crate::{Cli, Command};

/// JSON body plus the names of failed properties.
#[derive(Default)]
pub struct Report {
    pub body: Value,
    pub failures: Vec<String>,
}

impl Report {
    fn new(body: Value) -> Report {
        Report { body, failures: vec![] }
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }

    /// Records a mathematical failure; input and resource errors propagate.
    fn soft<T>(&mut self, label: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if crate::exit_code(&e) == 1 => {
                self.fail(format!("{label}: {e}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(io::q_to_json).collect())
}

fn forms_json(fs: &[PolyForm]) -> Value {
    Value::Array(fs.iter().map(PolyForm::to_json).collect())
}

fn complex_json(c: &Complex) -> Value {
    let degrees: Vec<Value> = (c.lo..=c.hi())
        .map(|j| {
            let reps: Vec<Value> = c.representatives(j).iter().map(|v| vec_json(v)).collect();
            json!({"degree": j, "dim": c.dim(j), "h_dim": c.h_dim(j), "representatives": reps})
        })
        .collect();
    Value::Array(degrees)
}

fn tot_json(g: &ScDgla) -> Value {
    let (c, _) = tot_complex(g);
    let dims: Vec<Value> = (c.lo..=c.hi()).map(|j| json!({"degree": j, "h_dim": c.h_dim(j)})).collect();
    Value::Array(dims)
}

fn levels_json(g: &ScDgla) -> Value {
    Value::Array(g.levels.iter().map(|l| io::space_to_json(&l.space)).collect())
}

/// Levels `0..min(2, top)`.
fn upto2(g: &Arc<ScDgla>) -> Arc<ScDgla> {
    if g.top() <= 2 {
        g.clone()
    } else {
        Arc::new(g.restrict_levels(2))
    }
}

fn z1_input(h: &H1Ctx, v: &Value, r: usize) -> Result<(Vec<Q>, Vec<Q>)> {
    let (l, m, _) = io::z1_from_json(&h.g, v, r)?;
    Ok((l, m))
}

fn tw_input(g: &Arc<ScDgla>, inst: &Instance, cap: u32) -> Result<(TwCtx, TwElement)> {
    let v = inst.input("y")?;
    let n = v.as_array().map(Vec::len).unwrap_or(0);
    if !(2..=3).contains(&n) || n - 1 > g.top() {
        return Err(bad("inputs.y needs the components on levels 0..1 or 0..2"));
    }
    let gt = Arc::new(g.restrict_levels(n - 1));
    let tw = TwCtx::new(gt.clone(), inst.artin.clone(), cap);
    let y = io::tw_from_json(&gt, v, inst.r())?;
    Ok((tw, y))
}

pub fn run(cli: &Cli, inst: &Instance) -> Result<Report> {
    match cli.command {
        Command::CheckDgla => check_dgla(inst),
        Command::Cohomology => cohomology(inst),
        Command::McCheck => mc_check(inst),
        Command::GaugeEquiv => gauge_equiv(cli, inst),
        Command::TwDecompose => tw_decompose(cli, inst),
        Command::Z1Check => z1_check_cmd(inst),
        Command::H1Equiv => h1_equiv(cli, inst),
        Command::Phi => phi(cli, inst),
        Command::Psi => psi(cli, inst),
        Command::LiftSurjective => lift_surjective(cli, inst),
        Command::LiftGauge => lift_gauge(cli, inst),
        Command::Transport => transport(cli, inst),
        Command::Tangent => tangent(inst),
        Command::Obstruction => obstruction(inst),
        Command::CechBuild => cech_build(inst),
        Command::Refine => refine(inst),
        Command::VerifyTheorem => verify_theorem(cli, inst),
        Command::Selftest => selftest(cli, inst),
    }
}

fn check_dgla(inst: &Instance) -> Result<Report> {
    match &inst.body {
        Body::Dgla(l) => {
            l.check_axioms()?;
            Ok(Report::new(json!({"space": io::space_to_json(&l.space), "abelian": l.is_abelian()})))
        }
        Body::Sc { g, .. } => {
            for l in &g.levels {
                l.check_axioms()?;
            }
            g.check()?;
            Ok(Report::new(json!({"levels": levels_json(g), "h_minus1_level2": hypothesis_h_minus1(g)})))
        }
    }
}

fn cohomology(inst: &Instance) -> Result<Report> {
    match &inst.body {
        Body::Dgla(l) => Ok(Report::new(json!({"cohomology": complex_json(&l.complex())}))),
        Body::Sc { g, augmentation, .. } => {
            let levels: Vec<Value> = g.levels.iter().map(|l| complex_json(&l.complex())).collect();
            let (h0, h1, h2) = truncation_criterion(g);
            let mut body = json!({
                "levels": levels,
                "tot": tot_json(g),
                "truncation": {"h0_surjective": h0, "h1_bijective": h1, "h2_injective": h2},
            });
            if let Some(ag) = augmentation {
                let rep = global_sections_compare(ag);
                body["global_sections"] = json!({"base": rep.base, "tot": rep.tot, "iso": rep.iso, "all_iso": rep.all_iso()});
            }
            Ok(Report::new(body))
        }
    }
}

fn mc_check(inst: &Instance) -> Result<Report> {
    let l = inst.dgla()?;
    let ctx = TensorCtx::new(l.clone(), inst.artin.clone(), Q::zero());
    let x = io::element_from_json(&l, inst.input("x")?, inst.r())?;
    let defect = mc_defect(&ctx, &x);
    let mut rep = Report::new(json!({"defect": io::element_to_json(&l, &defect, inst.r(), 2)}));
    if !ctx.is_zero(&defect) {
        rep.fail("Maurer-Cartan equation dx + ½[x,x] = 0 fails");
    }
    Ok(rep)
}

fn gauge_equiv(cli: &Cli, inst: &Instance) -> Result<Report> {
    let l = inst.dgla()?;
    let r = inst.r();
    let ctx = TensorCtx::new(l.clone(), inst.artin.clone(), Q::zero());
    let x0 = io::element_from_json(&l, inst.input("x0")?, r)?;
    let x1 = io::element_from_json(&l, inst.input("x1")?, r)?;
    let dec = gauge_equiv_decide(&ctx, &x0, &x1, cli.groebner_budget)?;
    let mut rep = Report::new(json!({
        "equivalent": dec.equivalent,
        "witness": dec.witness.as_ref().map(|a| io::element_to_json(&l, a, r, 0)),
    }));
    if let Some(a) = &dec.witness {
        if gauge(&ctx, a, &x0) != x1 {
            rep.fail("witness does not move x0 to x1");
        }
    }
    Ok(rep)
}

fn tw_decompose(cli: &Cli, inst: &Instance) -> Result<Report> {
    let r = inst.r();
    if let Body::Dgla(l) = &inst.body {
        let sp = inst.input("splitting")?;
        let basis = |key: &str| -> Result<Vec<Vec<Q>>> {
            let list = sp.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("splitting.{key} is required")))?;
            list.iter()
                .map(|v| {
                    let row = io::mat_from_json(&json!([v]), 1, l.dim())?;
                    Ok(row.row(0).to_vec())
                })
                .collect()
        };
        let split = Splitting { m_basis: basis("m_basis")?, c_basis: basis("c_basis")? };
        let y = io::element_from_json(l, inst.input("y")?, r)?;
        let mut rep = Report::default();
        if let Some((x, c)) = rep.soft("decompose_mc", decompose_mc(l, &split, &inst.artin, &y))? {
            rep.body = json!({"x": io::element_to_json(l, &x, r, 1), "c": io::element_to_json(l, &c, r, 0)});
        }
        return Ok(rep);
    }
    let g = inst.sc()?;
    let (tw, y) = tw_input(g, inst, cli.degree_cap)?;
    let mut rep = Report::default();
    if y.len() == 2 {
        if let Some(nf) = rep.soft("normal_form_01", normal_form_01(&tw, &y))? {
            rep.body = json!({"x": io::element_to_json(&tw.g.levels[0], &nf.x, r, 1), "p": forms_json(&nf.p)});
        }
    } else if let Some(nf) = rep.soft("normal_form_02", normal_form_02(&tw, &y))? {
        rep.body = json!({
            "x": io::element_to_json(&tw.g.levels[0], &nf.x, r, 1),
            "p": forms_json(&nf.p),
            "q": forms_json(&nf.q),
            "r": forms_json(&nf.r),
        });
    }
    Ok(rep)
}

fn z1_check_cmd(inst: &Instance) -> Result<Report> {
    let g = upto2(inst.sc()?);
    let h = H1Ctx::new(g.clone(), inst.artin.clone())?;
    let r = inst.r();
    let (l, m) = match inst.inputs.get("z") {
        Some(v) => z1_input(&h, v, r)?,
        None => (vec![Q::zero(); g.levels[0].dim() * r], vec![Q::zero(); g.levels[1].dim() * r]),
    };
    let mut rep = Report::default();
    match z1_check(&h, &l, &m)? {
        Z1Status::Member(z) => rep.body = json!({"member": true, "z": io::z1_to_json(&g, &z, r)}),
        Z1Status::Fails(msg) => {
            rep.body = json!({"member": false, "reason": msg});
            rep.fail(msg);
        }
    }
    Ok(rep)
}

fn h1_equiv(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = upto2(inst.sc()?);
    let h = H1Ctx::new(g.clone(), inst.artin.clone())?;
    let r = inst.r();
    let (l0, m0) = z1_input(&h, inst.input("z0")?, r)?;
    let (l1, m1) = z1_input(&h, inst.input("z1")?, r)?;
    let mut rep = Report::default();
    if rep.soft("z0", z1_member(&h, &l0, &m0))?.is_none() || rep.soft("z1", z1_member(&h, &l1, &m1))?.is_none() {
        return Ok(rep);
    }
    let dec = equiv_decide(&h, (&l0, &m0), (&l1, &m1), cli.groebner_budget)?;
    rep.body = json!({
        "equivalent": dec.equivalent,
        "witness": dec.witness.as_ref().map(|w| io::witness_to_json(&g, w, r)),
    });
    if let Some(w) = &dec.witness {
        if !check_witness(&h, (&l0, &m0), (&l1, &m1), w) {
            rep.fail("witness equations fail");
        }
    }
    Ok(rep)
}

fn phi(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = inst.sc()?;
    let r = inst.r();
    let (tw, y) = tw_input(g, inst, cli.degree_cap)?;
    let mut rep = Report::default();
    if y.len() == 2 {
        if let Some((l, m)) = rep.soft("phi_01", phi_01(&tw, &y))? {
            rep.body = json!({"l": io::element_to_json(&tw.g.levels[0], &l, r, 1), "m": io::element_to_json(&tw.g.levels[1], &m, r, 0)});
        }
    } else {
        let h = H1Ctx::new(tw.g.clone(), inst.artin.clone())?;
        if let Some(z) = rep.soft("phi_02", phi_02(&h, &tw, &y))? {
            rep.body = json!({"z": io::z1_to_json(&tw.g, &z, r)});
        }
    }
    Ok(rep)
}

fn psi(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = inst.sc()?;
    let r = inst.r();
    let g01 = Arc::new(g.restrict_levels(1));
    let tw = TwCtx::new(g01.clone(), inst.artin.clone(), cli.degree_cap);
    let z = inst.input("z")?;
    let l = io::element_from_json(&g01.levels[0], z.get("l").ok_or_else(|| bad("z.l is required"))?, r)?;
    let m = io::element_from_json(&g01.levels[1], z.get("m").ok_or_else(|| bad("z.m is required"))?, r)?;
    let mut rep = Report::default();
    if let Some(y) = rep.soft("psi_01", psi_01(&tw, &l, &m))? {
        rep.body = json!({"y": io::tw_to_json(&y)});
        if let Some(back) = rep.soft("phi_01 of the image", phi_01(&tw, &y))? {
            if back != (l, m) {
                rep.fail("phi_01(psi_01(l, m)) != (l, m)");
            }
        }
    }
    Ok(rep)
}

fn lift_surjective(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = upto2(inst.sc()?);
    if g.top() < 2 {
        return Err(bad("needs levels 0..2"));
    }
    let r = inst.r();
    let h = H1Ctx::new(g.clone(), inst.artin.clone())?;
    let tw = TwCtx::new(g.clone(), inst.artin.clone(), cli.degree_cap);
    let (l, m) = z1_input(&h, inst.input("z")?, r)?;
    let mut rep = Report::default();
    let Some(z) = rep.soft("input", z1_member(&h, &l, &m))? else { return Ok(rep) };
    let variant = cli.w_variant.lift();
    let variants: Vec<Value> = surjectivity_report(&h, &tw, &z)
        .into_iter()
        .map(|(v, res)| json!({"variant": v.name(), "pass": res.is_ok(), "detail": res.err().unwrap_or_default()}))
        .collect();
    let y = rep.soft(&format!("lift with variant {}", variant.name()), surjectivity_lift(&h, &tw, &z, variant))?;
    rep.body = json!({
        "variant": variant.name(),
        "adjudicated": "corrected",
        "z": io::z1_to_json(&g, &z, r),
        "y": y.as_ref().map(io::tw_to_json),
        "variants": variants,
    });
    Ok(rep)
}

fn lift_gauge(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = upto2(inst.sc()?);
    if g.top() < 2 {
        return Err(bad("needs levels 0..2"));
    }
    let r = inst.r();
    let tw = TwCtx::new(g.clone(), inst.artin.clone(), cli.degree_cap);
    let a0 = io::element_from_json(&g.levels[0], inst.input("a0")?, r)?;
    let a1 = inst.input("a1")?.as_array().ok_or_else(|| bad("inputs.a1 is a list of forms on the 1-simplex"))?;
    if a1.len() != g.levels[1].dim() * r {
        return Err(bad(format!("inputs.a1 needs {} forms", g.levels[1].dim() * r)));
    }
    let a1: Vec<PolyForm> = a1.iter().map(|f| io::form_from_json(1, f)).collect::<Result<_>>()?;
    let variant = cli.gauge_variant.lift();
    let mut rep = Report::default();
    let a2 = rep.soft("lift_gauge_degree0", lift_gauge_degree0(&tw, &a0, &a1, variant))?;
    rep.body = json!({"variant": cli.gauge_variant.name(), "a2": a2.as_deref().map(forms_json)});
    Ok(rep)
}

fn transport(cli: &Cli, inst: &Instance) -> Result<Report> {
    let g = upto2(inst.sc()?);
    let ext = inst.extension()?;
    let (rb, ra) = (ext.total.dim(), ext.base.dim());
    let hb = H1Ctx::new(g.clone(), Arc::new(ext.total.clone()))?;
    let ha = H1Ctx::new(g.clone(), Arc::new(ext.base.clone()))?;
    let (l, m) = z1_input(&hb, inst.input("z")?, rb)?;
    let (tl, tm) = z1_input(&ha, inst.input("target")?, ra)?;
    let mut rep = Report::default();
    if rep.soft("z", z1_member(&hb, &l, &m))?.is_none() || rep.soft("target", z1_member(&ha, &tl, &tm))?.is_none() {
        return Ok(rep);
    }
    let w = match inst.inputs.get("witness") {
        Some(v) => io::witness_from_json(&g, v, ra)?,
        None => {
            let pl = project_through(&ext, g.levels[0].dim(), &l);
            let pm = project_through(&ext, g.levels[1].dim(), &m);
            let dec = equiv_decide(&ha, (&pl, &pm), (&tl, &tm), cli.groebner_budget)?;
            match dec.witness {
                Some(w) => w,
                None if dec.equivalent => return Err(Error::DegreeBudgetExceeded("equivalent but no explicit witness found".into())),
                None => {
                    rep.fail("the projection of z is not equivalent to the target");
                    return Ok(rep);
                }
            }
        }
    };
    let out = rep.soft("z1_transport", z1_transport(&ext, &hb, &ha, (&l, &m), (&tl, &tm), &w))?;
    rep.body = json!({"witness": io::witness_to_json(&g, &w, ra), "z": out.map(|z| io::z1_to_json(&g, &z, rb))});
    Ok(rep)
}

fn tangent(inst: &Instance) -> Result<Report> {
    match &inst.body {
        Body::Dgla(l) => {
            let (dim, reps) = tangent_space(l);
            let reps: Vec<Value> = reps.iter().map(|e| Value::Array(e.coeffs.iter().map(|c| vec_json(c)).collect())).collect();
            Ok(Report::new(json!({"dim": dim, "representatives": reps})))
        }
        Body::Sc { g, .. } => {
            let t = tangent_h1sc(g);
            let mut rep = Report::new(json!({"tot": t.tot, "cocycle": t.cocycle, "agree": t.agree()}));
            if !t.agree() {
                rep.fail("tangent dimensions disagree");
            }
            Ok(rep)
        }
    }
}

fn obstruction(inst: &Instance) -> Result<Report> {
    let l = inst.dgla()?;
    let ext = inst.extension()?;
    let (rb, ra) = (ext.total.dim(), ext.base.dim());
    let x = io::element_from_json(&l, inst.input("x")?, ra)?;
    let lift = match inst.inputs.get("lift") {
        Some(v) => Some(io::element_from_json(&l, v, rb)?),
        None => None,
    };
    let ob = obstruction_class(&l, &ext, &x, lift)?;
    let mut rep = Report::new(json!({
        "class": ob.class.iter().map(|c| vec_json(c)).collect::<Vec<_>>(),
        "representatives": ob.representatives.iter().map(|c| vec_json(c)).collect::<Vec<_>>(),
        "vanishes": ob.vanishes(),
        "naive_lift": io::element_to_json(&l, &ob.naive_lift, rb, 1),
        "lift": ob.lift.as_ref().map(|y| io::element_to_json(&l, y, rb, 1)),
    }));
    if let Some(y) = &ob.lift {
        let ctx = TensorCtx::new(l.clone(), Arc::new(ext.total.clone()), Q::zero());
        if !ctx.is_zero(&mc_defect(&ctx, y)) {
            rep.fail("returned lift is not Maurer-Cartan");
        }
        if project_through(&ext, l.dim(), y) != x {
            rep.fail("returned lift does not project to x");
        }
    }
    Ok(rep)
}

fn cech_build(inst: &Instance) -> Result<Report> {
    let (c, labels) = inst.cover()?;
    let g = cech_scdgla(c)?;
    let mut body = json!({
        "opens": c.opens(),
        "indices": labels,
        "levels": levels_json(&g),
        "scdgla": io::scdgla_to_json(&g),
        "h_minus1_level2": hypothesis_h_minus1(&g),
        "tot": tot_json(&g),
    });
    if let Body::Sc { augmentation: Some(ag), .. } = &inst.body {
        let rep = global_sections_compare(ag);
        body["global_sections"] = json!({"base": rep.base, "tot": rep.tot, "iso": rep.iso, "all_iso": rep.all_iso()});
    }
    Ok(Report::new(body))
}

fn refine(inst: &Instance) -> Result<Report> {
    let (source, _) = inst.cover()?;
    let g = upto2(inst.sc()?);
    let r = inst.r();
    let spec = inst.input("refinement")?;
    let (target, _) = io::cover_from_json(spec.get("target").ok_or_else(|| bad("refinement.target is required"))?)?;
    let maps: Vec<Vec<usize>> = serde_json::from_value(spec.get("maps").cloned().unwrap_or(Value::Null))
        .map_err(|e| bad(format!("refinement.maps: {e}")))?;
    let pick = |key: &str, dflt: usize| spec.get(key).and_then(Value::as_u64).map_or(dflt, |v| v as usize);
    let (phi, psi) = (pick("phi", 0), pick("psi", 1));
    let tg = cech_scdgla(&target)?;
    let ref_ = Refinement::canonical(source.clone(), target, maps)?;
    let h = H1Ctx::new(g.clone(), inst.artin.clone())?;
    let (l, m) = z1_input(&h, inst.input("z")?, r)?;
    let mut rep = Report::default();
    if rep.soft("z", z1_member(&h, &l, &m))?.is_none() {
        return Ok(rep);
    }
    let mut images = vec![];
    for which in 0..ref_.maps.len() {
        let z = rep.soft(&format!("refinement map {which}"), refinement_map(&ref_, which, &inst.artin, (&l, &m)))?;
        images.push(z.map_or(Value::Null, |z| io::z1_to_json(&tg, &z, r)));
    }
    let witness = if ref_.maps.len() > 1 {
        rep.soft("independence witness", refinement_independence(&ref_, phi, psi, &inst.artin, (&l, &m)))?
    } else {
        None
    };
    rep.body = json!({"images": images, "phi": phi, "psi": psi, "witness": witness.map(|w| io::witness_to_json(&tg, &w, r))});
    Ok(rep)
}

/// Seeded samples plus any listed under `inputs.samples`.
fn samples(cli: &Cli, inst: &Instance, h: &H1Ctx, tw: &TwCtx) -> Result<Samples> {
    let mut s = generate_samples(h, tw, cli.seed, cli.samples)?;
    if let Some(extra) = inst.inputs.get("samples") {
        for v in extra.get("tw").and_then(Value::as_array).into_iter().flatten() {
            s.tw.push(io::tw_from_json(&h.g, v, h.r())?);
        }
        for v in extra.get("z1").and_then(Value::as_array).into_iter().flatten() {
            let (l, m) = z1_input(h, v, h.r())?;
            s.z1.push(z1_member(h, &l, &m)?);
        }
    }
    Ok(s)
}

fn theorem_context(cli: &Cli, inst: &Instance) -> Result<(Arc<ScDgla>, H1Ctx, TwCtx)> {
    let g = inst.sc()?;
    if g.top() < 2 {
        return Err(bad("needs levels 0..2"));
    }
    let hm = hypothesis_h_minus1(g);
    if hm != 0 {
        return Err(Error::Hypothesis(format!("dim H^{{-1}}(g₂) = {hm}, the comparison needs it to vanish")));
    }
    let g2 = upto2(g);
    let h = H1Ctx::new(g2.clone(), inst.artin.clone())?;
    let tw = TwCtx::new(g2.clone(), inst.artin.clone(), cli.degree_cap);
    Ok((g2, h, tw))
}

fn verify_theorem(cli: &Cli, inst: &Instance) -> Result<Report> {
    let (g2, h, tw) = theorem_context(cli, inst)?;
    let s = samples(cli, inst, &h, &tw)?;
    let report = verify_main_theorem(g2, inst.artin.clone(), &s, cli.groebner_budget)?;
    let mut body = report.to_json();
    body["samples"] = json!({"tw": s.tw.len(), "z1": s.z1.len()});
    let mut rep = Report::new(body);
    for c in report.well_defined.iter().chain(&report.surjectivity).chain(&report.injectivity) {
        if !c.pass {
            rep.fail(format!("{}: {}", c.label, c.detail));
        }
    }
    if !report.tangent.agree() {
        rep.fail("tangent dimensions disagree");
    }
    Ok(rep)
}

fn item(rep: &mut Report, items: &mut Vec<Value>, label: &str, r: Result<()>) -> Result<()> {
    let pass = rep.soft(label, r)?.is_some();
    let detail = if pass { String::new() } else { rep.failures.last().cloned().unwrap_or_default() };
    items.push(json!({"check": label, "pass": pass, "detail": detail}));
    Ok(())
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Check(msg.to_string()))
    }
}

fn selftest(cli: &Cli, inst: &Instance) -> Result<Report> {
    let mut rep = Report::default();
    let mut items = vec![];
    let l0: Arc<Dgla>;
    let g = match &inst.body {
        Body::Dgla(l) => {
            l0 = l.clone();
            None
        }
        Body::Sc { g, .. } => {
            l0 = g.level(0).clone();
            Some(g.clone())
        }
    };
    item(&mut rep, &mut items, "axioms", l0.check_axioms())?;
    let c0 = TensorCtx::new(l0.clone(), inst.artin.clone(), Q::zero());
    item(&mut rep, &mut items, "zero is Maurer-Cartan", check(c0.is_zero(&mc_defect(&c0, &c0.zero())), "mc_defect(0) != 0"))?;
    if let Some(g) = g {
        item(&mut rep, &mut items, "cosimplicial identities", g.check())?;
        let t = tangent_h1sc(&g);
        item(&mut rep, &mut items, "tangent agreement", check(t.agree(), "tangent dimensions disagree"))?;
        let g2 = upto2(&g);
        let h = H1Ctx::new(g2.clone(), inst.artin.clone())?;
        let zl = vec![Q::zero(); g2.levels[0].dim() * inst.r()];
        let zm = vec![Q::zero(); g2.levels[1].dim() * inst.r()];
        let zero_ok = match z1_check(&h, &zl, &zm)? {
            Z1Status::Member(z) => check(z.n.iter().flatten().all(Q::is_zero), "witness n of zero is nonzero"),
            Z1Status::Fails(msg) => Err(Error::Check(msg)),
        };
        item(&mut rep, &mut items, "zero cocycle", zero_ok)?;
        if g.top() >= 2 {
            let hm = hypothesis_h_minus1(&g);
            if hm != 0 {
                items.push(json!({"check": "main theorem", "pass": true, "detail": format!("skipped: dim H^{{-1}}(g₂) = {hm}")}));
            } else {
                let (g2, h, tw) = theorem_context(cli, inst)?;
                let s = samples(cli, inst, &h, &tw)?;
                let g01 = Arc::new(g2.restrict_levels(1));
                let tw01 = TwCtx::new(g01, inst.artin.clone(), cli.degree_cap);
                for (i, z) in s.z1.iter().enumerate() {
                    let rt = psi_01(&tw01, &z.l, &z.m)
                        .and_then(|y| phi_01(&tw01, &y))
                        .and_then(|back| check(back == (z.l.clone(), z.m.clone()), "phi_01(psi_01(z)) != z"));
                    item(&mut rep, &mut items, &format!("psi/phi round trip on z1 sample {i}"), rt)?;
                }
                let report = verify_main_theorem(g2, inst.artin.clone(), &s, cli.groebner_budget)?;
                let failed: Vec<String> = report
                    .well_defined
                    .iter()
                    .chain(&report.surjectivity)
                    .chain(&report.injectivity)
                    .filter(|c| !c.pass)
                    .map(|c| c.label.clone())
                    .collect();
                let ok = if report.all_pass() { Ok(()) } else { Err(Error::Check(failed.join("; "))) };
                item(&mut rep, &mut items, "main theorem", ok)?;
            }
        }
    } else {
        let (dim, _) = tangent_space(&l0);
        items.push(json!({"check": "tangent space", "pass": true, "detail": format!("dim H¹ = {dim}")}));
    }
    rep.body = json!({"checks": items});
    Ok(rep)
}
