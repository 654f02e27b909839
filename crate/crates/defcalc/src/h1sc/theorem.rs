use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::maps::{t1, times};
use super::{
    coface_block, hcat, sub_mat,
    equiv_decide, hypothesis_h_minus1, lift_gauge_degree0, phi_02, surjectivity_lift, surjectivity_report, tangent_h1sc,
    check_witness, z1_check, EquivWitness, GaugeLift, H1Ctx, LiftVariant, TangentReport, Z1Element, Z1Status,
};
use crate::artin::{make_dual_numbers, ArtinAlgebra};
use crate::dgla::random::small_q;
use crate::dgla::{bch, bch_many, gauge, mc_defect, solve_order_by_order, Dgla, LieCtx, TensorCtx};
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::{fmt_q, solve_linear, LinSystem, Mat, Q};
use crate::forms::{face, PolyForm};
use crate::tw::{monomials, normal_form_01, ScDgla, TwCtx, TwElement};

/// Total-degree cap used for Thom-Whitney contexts built by the driver.
pub const DRIVER_CAP: u32 = 64;

/// Gauge element `(a₀, a₁)` of `Tot_TW(g_{[0,1]})` taking levels `0..1` of
/// `from` to those of `to`, given a witness for `Φ(from) ~ Φ(to)`:
/// `a₁ = p(t) • ∂_{0,1}a • −(d(tb) + [∂_{0,1}x', tb]) • −p'(t)`.
pub fn gauge_01(h: &H1Ctx, tw: &TwCtx, from: &TwElement, to: &TwElement, w: &EquivWitness) -> Result<(Vec<Q>, Vec<PolyForm>)> {
    let src = normal_form_01(tw, from)?;
    let dst = normal_form_01(tw, to)?;
    let end = |p: &[PolyForm]| -> Vec<Q> { p.iter().map(|f| face(1, f).expect("1-simplex").constant_term()).collect() };
    let (m_src, m_dst) = (end(&src.p), end(&dst.p));
    check(check_witness(h, (&src.x, &m_src), (&dst.x, &m_dst), w), "witness does not relate the two images")?;
    let e1 = &tw.levels[1];
    let tb = times(&w.b, &t1());
    let base = e1.from_q(&h.coface(0, 1, &src.x));
    let sigma = e1.neg(&e1.add(&e1.d(&tb), &e1.bracket(&base, &tb)));
    let a1 = bch_many(e1, &[dst.p.clone(), e1.from_q(&h.coface(0, 1, &w.a)), sigma, e1.neg(&src.p)]);
    check(gauge(&tw.levels[0], &tw.constant(0, &w.a), &from[0]) == to[0], "level 0 gauge fails")?;
    check(gauge(e1, &a1, &from[1]) == to[1], "level 1 gauge fails")?;
    Ok((w.a.clone(), a1))
}

/// Basis of `(Ω₂ ⊗ g₂)⁰` with total degree at most `cap` and all three
/// faces zero.
fn relative_basis(l: &Dgla, cap: u32) -> Vec<Vec<PolyForm>> {
    let monos = monomials(2, cap);
    let mut keys = vec![];
    for v in 0..l.dim() {
        let deg = l.deg(v);
        if !(-2..=0).contains(&deg) {
            continue;
        }
        for mono in monos.iter().filter(|(_, m)| m.count_ones() as i32 == -deg) {
            keys.push((v, mono.clone()));
        }
    }
    let mut rows: HashMap<(usize, usize, Vec<u32>, u32), usize> = HashMap::new();
    let mut entries = vec![];
    for (col, (v, (e, m))) in keys.iter().enumerate() {
        let f = PolyForm::monomial(e.clone(), *m, Q::one());
        for k in 0..3 {
            for ((e2, m2), c) in face(k, &f).expect("2-simplex").terms {
                let len = rows.len();
                let row = *rows.entry((*v, k, e2, m2)).or_insert(len);
                entries.push((row, col, c));
            }
        }
    }
    let mut phi = Mat::zeros(rows.len(), keys.len());
    for (row, col, c) in entries {
        let cur = phi.get(row, col).clone();
        phi.set(row, col, cur + c);
    }
    let ker = if rows.is_empty() {
        (0..keys.len())
            .map(|i| {
                let mut u = vec![Q::zero(); keys.len()];
                u[i] = Q::one();
                u
            })
            .collect()
    } else {
        phi.kernel()
    };
    ker.iter()
        .map(|vec| {
            let mut out = vec![PolyForm::zero(2); l.dim()];
            for (c, (v, (e, m))) in vec.iter().zip(&keys) {
                if !c.is_zero() {
                    out[*v].add_term(e.clone(), *m, c.clone());
                }
            }
            out
        })
        .collect()
}

/// Solves `dδ = rhs` for `δ` in the span of `basis` (coefficients in ℚ).
fn solve_forms(plain: &TensorCtx<PolyForm>, basis: &[Vec<PolyForm>], rhs: &[PolyForm]) -> Option<Vec<PolyForm>> {
    let mut index: BTreeMap<(usize, Vec<u32>, u32), usize> = BTreeMap::new();
    let mut flatten = |x: &[PolyForm]| -> Vec<(usize, Q)> {
        let mut out = vec![];
        for (v, f) in x.iter().enumerate() {
            for ((e, m), c) in &f.terms {
                let len = index.len();
                out.push((*index.entry((v, e.clone(), *m)).or_insert(len), c.clone()));
            }
        }
        out
    };
    let cols: Vec<Vec<(usize, Q)>> = basis.iter().map(|b| flatten(&plain.d(&b.to_vec()))).collect();
    let target = flatten(rhs);
    let mut mat = Mat::zeros(index.len(), basis.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            mat.set(*i, j, c.clone());
        }
    }
    let mut b = vec![Q::zero(); index.len()];
    for (i, c) in target {
        b[i] = c;
    }
    let (coef, _) = solve_linear(&LinSystem::new(mat, b).ok()?)?;
    let mut out = vec![PolyForm::zero(2); rhs.len()];
    for (c, bv) in coef.iter().zip(basis) {
        if !c.is_zero() {
            for (o, f) in out.iter_mut().zip(bv) {
                *o = o.add(&f.scale(c));
            }
        }
    }
    Some(out)
}

/// Finds `c ∈ (Ω₂ ⊗ g₂)⁰ ⊗ m_A` vanishing on `∂Δ²` with `e^c * from = to`,
/// order by order along the `m_A`-adic filtration. Each step is a linear
/// problem in the complex of forms vanishing on the boundary, whose `H¹` is
/// `H^{−1}(g₂)`.
fn solve_level2(tw: &TwCtx, from: &[PolyForm], to: &[PolyForm]) -> Result<Vec<PolyForm>> {
    let e2 = &tw.levels[2];
    let l2 = &tw.g.levels[2];
    let r = e2.r();
    let plain = TensorCtx::new(l2.clone(), Arc::new(make_dual_numbers(2)?), PolyForm::zero(2));
    let (vecs, levels, tinv) = tw.a.adapted_basis();
    let mut cache: HashMap<u32, Vec<Vec<PolyForm>>> = HashMap::new();
    let mut c = e2.zero();
    for _ in 0..=(tw.a.nilpotency_index() * r + 2) {
        let f = e2.sub(&gauge(e2, &c, &from.to_vec()), &to.to_vec());
        if e2.is_zero(&f) {
            return Ok(c);
        }
        let coords: Vec<Vec<PolyForm>> = (0..l2.dim())
            .map(|v| {
                (0..r)
                    .map(|b| (0..r).fold(PolyForm::zero(2), |acc, e| acc.add(&f[v * r + e].scale(tinv.get(b, e)))))
                    .collect()
            })
            .collect();
        let k = (0..r).filter(|&b| coords.iter().any(|cv| !cv[b].is_zero())).map(|b| levels[b]).min().unwrap();
        for b in (0..r).filter(|&b| levels[b] == k) {
            let comp: Vec<PolyForm> = coords.iter().map(|cv| cv[b].clone()).collect();
            if comp.iter().all(|p| p.is_zero()) {
                continue;
            }
            let cap = comp.iter().map(|p| p.total_degree()).max().unwrap_or(0) + 1;
            let basis = cache.entry(cap).or_insert_with(|| relative_basis(l2, cap));
            let delta = solve_forms(&plain, basis, &comp)
                .ok_or_else(|| Error::Check(format!("level-2 discrepancy is not exact at filtration level {k}")))?;
            for (v, dv) in delta.iter().enumerate() {
                if dv.is_zero() {
                    continue;
                }
                for e in 0..r {
                    if !vecs[b][e].is_zero() {
                        c[v * r + e] = c[v * r + e].add(&dv.scale(&vecs[b][e]));
                    }
                }
            }
        }
    }
    Err(Error::Check("level-2 solver did not converge".into()))
}

/// Gauge equivalence in `Tot_TW(g_{[0,2]})` between Maurer-Cartan elements
/// with `~`-equivalent images: decide the relation, build the level 0..1
/// gauge, extend it to level 2, then remove the remaining level-2
/// discrepancy inside forms vanishing on the boundary. Returns `c` with
/// `e^c * from = to`.
pub fn injectivity_witness(h: &H1Ctx, tw: &TwCtx, from: &TwElement, to: &TwElement, budget: usize) -> Result<TwElement> {
    if hypothesis_h_minus1(&h.g) != 0 {
        return Err(Error::Hypothesis("H^{-1}(g₂) ≠ 0".into()));
    }
    let z_from = phi_02(h, tw, from)?;
    let z_to = phi_02(h, tw, to)?;
    let dec = equiv_decide(h, z_from.pair(), z_to.pair(), budget)?;
    if !dec.equivalent {
        return Err(Error::Check("images are not equivalent".into()));
    }
    let w = dec.witness.ok_or_else(|| Error::Check("no rational witness could be read off".into()))?;
    let (a0, a1) = gauge_01(h, tw, from, to, &w)?;
    let a2 = lift_gauge_degree0(tw, &a0, &a1, GaugeLift::Corrected)?;
    let g1 = vec![tw.constant(0, &a0), a1, a2];
    let mid = gauge(tw, &g1, from);
    check(mid[0] == to[0] && mid[1] == to[1], "lifted gauge does not fix levels 0..1")?;
    let c = solve_level2(tw, &mid[2], &to[2])?;
    let mut gc = tw.zero();
    gc[2] = c;
    let total = bch(tw, &gc, &g1);
    tw.check(&total)?;
    check(gauge(tw, &total, from) == *to, "composite gauge element does not reach the target")?;
    Ok(total)
}

/// A random cocycle: the three conditions are solved order by order in the
/// unknowns `(l, m, n)`, starting from a random cocycle of the linearized
/// system (the degree-1 part of the total complex); resamples up to `tries`
/// times when a step is obstructed.
pub fn random_z1<R: Rng>(h: &H1Ctx, rng: &mut R, density: f64, tries: usize) -> Option<Z1Element> {
    let r = h.r();
    let g = &h.g;
    let third = h.c.len() > 2;
    let (g0, g1) = (&g.levels[0], &g.levels[1]);
    let (rl, rm) = (g0.range(1), g1.range(0));
    let rn = if third { g.levels[2].range(-1) } else { 0..0 };
    let (nl, nm, nn) = (rl.len(), rm.len(), rn.len());
    let neg = -Q::one();
    let mut lin = hcat(&[g0.d_block(1), Mat::zeros(g0.range(2).len(), nm + nn)]);
    let row2 = hcat(&[
        sub_mat(&coface_block(g, 0, 1, 1), &coface_block(g, 1, 1, 1)),
        g1.d_block(0).scale(&neg),
        Mat::zeros(g1.range(1).len(), nn),
    ]);
    lin = lin.vstack(&row2);
    if third {
        let g2 = &g.levels[2];
        let alt = sub_mat(&coface_block(g, 0, 2, 0), &coface_block(g, 1, 2, 0)).add(&coface_block(g, 2, 2, 0));
        lin = lin.vstack(&hcat(&[Mat::zeros(g2.range(0).len(), nl), alt, g2.d_block(-1).scale(&neg)]));
    }
    let split = |z: &[Q]| -> (Vec<Q>, Vec<Q>, Vec<Q>) {
        let mut l = h.c[0].zero();
        l[rl.start * r..rl.end * r].clone_from_slice(&z[..nl * r]);
        let mut m = h.c[1].zero();
        m[rm.start * r..rm.end * r].clone_from_slice(&z[nl * r..(nl + nm) * r]);
        let mut n = if third { h.c[2].zero() } else { vec![] };
        if third {
            n[rn.start * r..rn.end * r].clone_from_slice(&z[(nl + nm) * r..]);
        }
        (l, m, n)
    };
    let f = |z: &[Q]| -> Vec<Q> {
        let (l, m, n) = split(z);
        let (c0, c1) = (&h.c[0], &h.c[1]);
        let mut out = mc_defect(c0, &l)[g0.range(2).start * r..g0.range(2).end * r].to_vec();
        let e = c1.sub(&gauge(c1, &m, &h.coface(0, 1, &l)), &h.coface(1, 1, &l));
        out.extend_from_slice(&e[g1.range(1).start * r..g1.range(1).end * r]);
        if third {
            let c2 = &h.c[2];
            let x = h.base2(&l);
            let t = c2.sub(&h.triangle(&m), &c2.add(&c2.d(&n), &c2.bracket(&x, &n)));
            let r0 = g.levels[2].range(0);
            out.extend_from_slice(&t[r0.start * r..r0.end * r]);
        }
        out
    };
    let kernel = lin.kernel();
    for _ in 0..tries {
        let mut start = vec![Q::zero(); (nl + nm + nn) * r];
        for kv in &kernel {
            for e in 0..r {
                let c = small_q(rng, density);
                if c.is_zero() {
                    continue;
                }
                for (v, kc) in kv.iter().enumerate() {
                    start[v * r + e] += &c * kc;
                }
            }
        }
        let Ok(z) = solve_order_by_order(&h.a, &lin, &f, start) else { continue };
        let (l, m, _) = split(&z);
        if let Ok(Z1Status::Member(el)) = z1_check(h, &l, &m) {
            return Some(el);
        }
    }
    None
}

/// A random face-compatible pair `(a₀, a₁) ∈ Tot⁰_TW(g_{[0,1]}) ⊗ m_A`.
pub fn random_gauge_01<R: Rng>(h: &H1Ctx, tw: &TwCtx, rng: &mut R, density: f64) -> (Vec<Q>, Vec<PolyForm>) {
    let r = h.r();
    let l0 = &h.g.levels[0];
    let mut a0 = h.c[0].zero();
    for i in l0.range(0) {
        for e in 0..r {
            a0[i * r + e] = small_q(rng, density);
        }
    }
    let (d0, d1) = (h.coface(0, 1, &a0), h.coface(1, 1, &a0));
    let t = t1();
    let one_t = PolyForm::one(1).sub(&t);
    let bump = t.mul(&one_t);
    let g1 = &h.g.levels[1];
    let mut a1 = tw.levels[1].zero();
    for (k, f) in a1.iter_mut().enumerate() {
        let deg = g1.deg(k / r);
        if deg == 0 {
            *f = one_t.scale(&d0[k]).add(&t.scale(&d1[k])).add(&bump.scale(&small_q(rng, density)));
        } else if deg == -1 {
            let c0 = small_q(rng, density);
            let c1 = small_q(rng, density);
            *f = PolyForm::one(1).scale(&c0).add(&t.scale(&c1)).mul(&crate::forms::chart_dcoord(1, 0));
        }
    }
    (a0, a1)
}

/// A random element of `Tot⁰_TW(g_{[0,2]}) ⊗ m_A`.
pub fn random_gauge<R: Rng>(h: &H1Ctx, tw: &TwCtx, rng: &mut R, density: f64) -> Result<TwElement> {
    let (a0, a1) = random_gauge_01(h, tw, rng, density);
    let a2 = lift_gauge_degree0(tw, &a0, &a1, GaugeLift::Corrected)?;
    Ok(vec![tw.constant(0, &a0), a1, a2])
}

/// Sample cocycles and Maurer-Cartan elements for [`verify_main_theorem`].
#[derive(Debug, Clone, Default)]
pub struct Samples {
    pub tw: Vec<TwElement>,
    pub z1: Vec<Z1Element>,
}

/// Seeded samples: random cocycles, their lifts moved by random gauge
/// elements, and gauge moves of the zero element.
pub fn generate_samples(h: &H1Ctx, tw: &TwCtx, seed: u64, count: usize) -> Result<Samples> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Samples::default();
    for _ in 0..count {
        if let Some(z) = random_z1(h, &mut rng, 0.6, 20) {
            let y = surjectivity_lift(h, tw, &z, LiftVariant::Corrected)?;
            let g = random_gauge(h, tw, &mut rng, 0.5)?;
            out.tw.push(gauge(tw, &g, &y));
            out.z1.push(z);
        }
    }
    let g = random_gauge(h, tw, &mut rng, 0.5)?;
    out.tw.push(gauge(tw, &g, &tw.zero()));
    Ok(out)
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckItem {
    fn from_result<T>(label: String, r: Result<T>) -> CheckItem {
        match r {
            Ok(_) => CheckItem { label, pass: true, detail: String::new() },
            Err(e) => CheckItem { label, pass: false, detail: e.to_string() },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "check": self.label, "pass": self.pass, "detail": self.detail })
    }
}

/// Outcome of [`verify_main_theorem`]. `variants` records how the
/// alternative surjectivity constructions fare; they are informational.
#[derive(Debug, Clone)]
pub struct MainReport {
    pub well_defined: Vec<CheckItem>,
    pub surjectivity: Vec<CheckItem>,
    pub injectivity: Vec<CheckItem>,
    pub tangent: TangentReport,
    pub variants: Vec<CheckItem>,
}

impl MainReport {
    pub fn all_pass(&self) -> bool {
        self.well_defined.iter().chain(&self.surjectivity).chain(&self.injectivity).all(|c| c.pass) && self.tangent.agree()
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[CheckItem]| Value::Array(v.iter().map(|c| c.to_json()).collect());
        json!({
            "all_pass": self.all_pass(),
            "well_defined": list(&self.well_defined),
            "surjectivity": list(&self.surjectivity),
            "injectivity": list(&self.injectivity),
            "tangent": { "tot": self.tangent.tot, "cocycle": self.tangent.cocycle, "agree": self.tangent.agree() },
            "surjectivity_variants": list(&self.variants),
        })
    }
}

fn describe(x: &[Q]) -> String {
    x.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}

/// Checks on samples that `Φ: Def_{Tot_TW(g_{[0,2]})}(A) → H¹_sc(exp g)(A)`
/// is well defined, surjective and injective, and that both tangent
/// computations agree. Refuses to run unless `H^{−1}(g₂) = 0`.
pub fn verify_main_theorem(g: Arc<ScDgla>, a: Arc<ArtinAlgebra>, samples: &Samples, budget: usize) -> Result<MainReport> {
    if g.top() < 2 {
        return invalid("needs levels 0..2");
    }
    let hm = hypothesis_h_minus1(&g);
    if hm != 0 {
        return Err(Error::Hypothesis(format!("dim H^{{-1}}(g₂) = {hm}, the comparison needs it to vanish")));
    }
    let g2 = Arc::new(g.restrict_levels(2));
    let h = H1Ctx::new(g2.clone(), a.clone())?;
    let tw = TwCtx::new(g2.clone(), a, DRIVER_CAP);
    let mut well_defined = vec![];
    let mut images = vec![];
    for (i, y) in samples.tw.iter().enumerate() {
        let r = phi_02(&h, &tw, y);
        if let Ok(z) = &r {
            images.push((i, z.clone()));
        }
        well_defined.push(CheckItem::from_result(format!("phi_02 lands in Z1 (tw sample {i})"), r));
    }
    let mut surjectivity = vec![];
    let mut variants = vec![];
    let mut lifts = vec![];
    for (i, z) in samples.z1.iter().enumerate() {
        let r = surjectivity_lift(&h, &tw, z, LiftVariant::Corrected);
        if let Ok(y) = &r {
            lifts.push(y.clone());
        }
        surjectivity.push(CheckItem::from_result(format!("preimage of z1 sample {i}"), r));
        for (v, res) in surjectivity_report(&h, &tw, z) {
            let label = format!("variant {} on z1 sample {i} (n = [{}])", v.name(), describe(z.n.as_deref().unwrap_or(&[])));
            variants.push(CheckItem { label, pass: res.is_ok(), detail: res.err().unwrap_or_default() });
        }
    }
    let mut injectivity = vec![];
    // each sample against the lift of its own image
    for (i, z) in &images {
        let y = &samples.tw[*i];
        let r = surjectivity_lift(&h, &tw, z, LiftVariant::Corrected).and_then(|y2| injectivity_witness(&h, &tw, y, &y2, budget));
        injectivity.push(CheckItem::from_result(format!("tw sample {i} ≃ lift of its image"), r));
    }
    // pairs of samples with equivalent images
    let all: Vec<TwElement> = samples.tw.iter().cloned().chain(lifts).collect();
    let zs: Vec<Option<Z1Element>> = all.iter().map(|y| phi_02(&h, &tw, y).ok()).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (Some(zi), Some(zj)) = (&zs[i], &zs[j]) else { continue };
            let dec = equiv_decide(&h, zi.pair(), zj.pair(), budget)?;
            if dec.equivalent {
                let r = injectivity_witness(&h, &tw, &all[i], &all[j], budget);
                injectivity.push(CheckItem::from_result(format!("pair ({i}, {j}) with equivalent images"), r));
            }
        }
    }
    Ok(MainReport { well_defined, surjectivity, injectivity, tangent: tangent_h1sc(&g2), variants })
}
