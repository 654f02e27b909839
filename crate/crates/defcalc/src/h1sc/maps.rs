use num_traits::{One, Zero};

use super::{half, solve_homotopy, z1_member, H1Ctx, Z1Element};
use crate::dgla::{bch_many, gauge, mc_defect, LieCtx, TensorCtx};
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::{MPoly, Q};
use crate::forms::{chart_coord, chart_dcoord, face, from_chart, poly_divide, to_chart, PolyForm};
use crate::tw::{normal_form_01, normal_form_02, NormalForm01, TwCtx, TwElement};

/// Chart coordinate `t` on `Δ¹` (`t = 0` is face 0).
pub(crate) fn t1() -> PolyForm {
    chart_coord(1, 0)
}

fn s(j: usize) -> PolyForm {
    chart_coord(2, j)
}

fn ds(j: usize) -> PolyForm {
    chart_dcoord(2, j)
}

/// `x ⊗ w` for a rational vector `x`.
pub(crate) fn times(x: &[Q], w: &PolyForm) -> Vec<PolyForm> {
    x.iter().map(|c| if c.is_zero() { PolyForm::zero(w.n) } else { w.scale(c) }).collect()
}

/// Pullback of a form on `Δ¹` along `t ↦ expr`.
fn at(f: &PolyForm, expr: &PolyForm, dexpr: &PolyForm) -> PolyForm {
    to_chart(f).substitute(expr.n, &[expr.clone()], &[dexpr.clone()])
}

/// The coefficient `c(t)` of the `dt` part of a form on `Δ¹`, as a 0-form.
fn dt_coef(f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(1);
    for ((e, _), v) in &to_chart(&f.part(1)).terms {
        out.add_term(e.clone(), 0, v.clone());
    }
    from_chart(&out)
}

/// Exact division by a polynomial in the chart coordinates `(s₀, s₁)`.
fn chart_div(f: &PolyForm, g: &MPoly) -> Result<PolyForm> {
    Ok(from_chart(&poly_divide(&to_chart(f), g)?))
}

fn one_minus_s0() -> MPoly {
    MPoly::one(2).sub(&MPoly::var(2, 0))
}

/// Points of `Δ²` used as substitutions for the `Δ¹` coordinate.
#[derive(Clone, Copy)]
enum Sub {
    S0,
    S1,
    OneMinusS0,
    Zero,
}

fn at_pt(f: &PolyForm, p: Sub) -> PolyForm {
    let (e, de) = match p {
        Sub::S0 => (s(0), ds(0)),
        Sub::S1 => (s(1), ds(1)),
        Sub::OneMinusS0 => (PolyForm::one(2).sub(&s(0)), ds(0).scale(&-Q::one())),
        Sub::Zero => (PolyForm::zero(2), PolyForm::zero(2)),
    };
    at(f, &e, &de)
}

fn check_mc_levels(tw: &TwCtx, y: &TwElement) -> Result<()> {
    for (n, (v, c)) in y.iter().zip(&tw.levels).enumerate() {
        check(c.is_zero(&mc_defect(c, v)), format!("level {n} is not Maurer-Cartan"))?;
    }
    Ok(())
}

/// `(l, m) ↦ (l, e^{tm} * ∂_{0,1}l)` on levels `0..1`.
pub fn psi_01(tw: &TwCtx, l: &[Q], m: &[Q]) -> Result<TwElement> {
    if tw.levels.len() != 2 {
        return invalid("expects the Thom-Whitney context of levels 0..1");
    }
    let y = NormalForm01 { x: l.to_vec(), p: times(m, &t1()) }.assemble(tw);
    check_mc_levels(tw, &y)?;
    tw.check(&y)?;
    Ok(y)
}

/// `(x, e^{p(t)} * ∂_{0,1}x) ↦ (x, p(1))`.
pub fn phi_01(tw: &TwCtx, y: &TwElement) -> Result<(Vec<Q>, Vec<Q>)> {
    let nf = normal_form_01(tw, y)?;
    let m = nf.p.iter().map(|f| face(1, f).expect("1-simplex").constant_term()).collect();
    Ok((nf.x, m))
}

/// `(x, e^{p(t)} * ∂_{0,1}x, e^{q+r} * ∂_{0,2}∂_{0,1}x) ↦ (x, p(1))` with
/// the homotopy witness `n`.
pub fn phi_02(h: &H1Ctx, tw: &TwCtx, y: &TwElement) -> Result<Z1Element> {
    let nf = normal_form_02(tw, y)?;
    let m: Vec<Q> = nf.p.iter().map(|f| face(1, f).expect("1-simplex").constant_term()).collect();
    z1_member(h, &nf.x, &m).map_err(|e| Error::Check(format!("image is not a cocycle: {e}")))
}

/// Constructions of the level-2 form in the surjectivity lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftVariant {
    /// `w(t) = d(tn) + ½[x, tn]` with `dn + ½[x, n] = ∂_{0,2}m • −∂_{1,2}m • ∂_{2,2}m`,
    /// and `R = s₀s₁ X(s₀) / (s₀(1−s₀)) • s₀∂_{1,2}m • s₁∂_{0,2}m` where
    /// `X(t) = t∂_{2,2}m • −w(t) • t∂_{0,2}m • −t∂_{1,2}m`.
    Printed,
    /// As `Printed` with coefficient 1 in `w` and in the equation for `n`.
    Normalized,
    /// As `Normalized` with `w(t) = t(dn + [x, n])`, dropping `dt ⊗ n`.
    NormalizedPointwise,
    /// Coefficient 1, and `X = X⁰(t) + X¹(t)dt` extended to the triangle as
    /// `s₁X⁰(s₀)/(1−s₀) + X¹(s₀)(s₁ds₀ − s₀ds₁)`.
    Corrected,
}

impl LiftVariant {
    pub const ALL: [LiftVariant; 4] =
        [LiftVariant::Printed, LiftVariant::Normalized, LiftVariant::NormalizedPointwise, LiftVariant::Corrected];

    pub fn name(self) -> &'static str {
        match self {
            LiftVariant::Printed => "printed",
            LiftVariant::Normalized => "normalized",
            LiftVariant::NormalizedPointwise => "normalized-pointwise",
            LiftVariant::Corrected => "corrected",
        }
    }
}

/// A Maurer-Cartan element of `Tot_TW(g_{[0,2]})` whose image under
/// [`phi_02`] is `(l, m)`; every postcondition is checked.
pub fn surjectivity_lift(h: &H1Ctx, tw: &TwCtx, z: &Z1Element, variant: LiftVariant) -> Result<TwElement> {
    if tw.levels.len() != 3 || h.c.len() != 3 {
        return invalid("expects levels 0..2");
    }
    let r = h.r();
    let (l, m) = (&z.l, &z.m);
    let c2 = &h.c[2];
    let x2 = h.base2(l);
    let u = h.triangle(m);
    let coef = if variant == LiftVariant::Printed { half() } else { Q::one() };
    let n = solve_homotopy(c2, &x2, &u, &coef)
        .ok_or_else(|| Error::Check(format!("no n with dn + {coef}[x, n] = ∂_{{0,2}}m • −∂_{{1,2}}m • ∂_{{2,2}}m")))?;
    let e1 = TensorCtx::new(h.g.levels[2].clone(), h.a.clone(), PolyForm::zero(1));
    let e2 = &tw.levels[2];
    let t = t1();
    let w = if variant == LiftVariant::NormalizedPointwise {
        times(&c2.add(&c2.d(&n), &c2.bracket(&x2, &n)), &t)
    } else {
        let tn = times(&n, &t);
        e1.add(&e1.d(&tn), &e1.scale(&e1.bracket(&e1.from_q(&x2), &tn), &coef))
    };
    let dm = |k: usize| h.coface(k, 2, m);
    let xx = bch_many(&e1, &[times(&dm(2), &t), e1.neg(&w), times(&dm(0), &t), e1.neg(&times(&dm(1), &t))]);
    let (s0, s1) = (s(0), s(1));
    let ext: Vec<PolyForm> = if variant == LiftVariant::Corrected {
        let rot = s1.mul(&ds(0)).sub(&s0.mul(&ds(1)));
        xx.iter()
            .map(|f| {
                let a = chart_div(&at_pt(&f.part(0), Sub::S0), &one_minus_s0())?.mul(&s1);
                Ok(a.add(&at_pt(&dt_coef(f), Sub::S0).mul(&rot)))
            })
            .collect::<Result<_>>()?
    } else {
        let den = MPoly::var(2, 0).mul(&one_minus_s0());
        xx.iter().map(|f| Ok(chart_div(&at_pt(f, Sub::S0), &den)?.mul(&s0.mul(&s1)))).collect::<Result<_>>()?
    };
    let rr = bch_many(e2, &[ext, times(&dm(1), &s0), times(&dm(0), &s1)]);
    let base = h.g.composite(0, &[0, 1]).apply_tensor(l, r, &Q::zero());
    let mut y = NormalForm01 { x: l.clone(), p: times(m, &t) }.assemble(tw);
    y.push(gauge(e2, &rr, &e2.from_q(&base)));
    check_mc_levels(tw, &y)?;
    let faces = |k: usize| -> Vec<PolyForm> { rr.iter().map(|f| face(k, f).expect("2-simplex")).collect() };
    check(faces(0) == times(&dm(0), &t), "R(0,t) = t∂_{0,2}m fails")?;
    check(faces(1) == times(&dm(1), &t), "R(t,0) = t∂_{1,2}m fails")?;
    tw.check(&y)?;
    let back = phi_02(h, tw, &y)?;
    check(back.l == *l && back.m == *m, "the lift does not map back to (l, m)")?;
    Ok(y)
}

/// Runs every [`LiftVariant`] and records the first failure of each.
pub fn surjectivity_report(h: &H1Ctx, tw: &TwCtx, z: &Z1Element) -> Vec<(LiftVariant, std::result::Result<(), String>)> {
    LiftVariant::ALL
        .iter()
        .map(|&v| (v, surjectivity_lift(h, tw, z, v).map(|_| ()).map_err(|e| e.to_string())))
        .collect()
}

/// Formulas for the level-2 component of a lifted gauge element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeLift {
    /// `a₂^{−1} = a_{2,0}ds₀ + a_{2,1}ds₁` with
    /// `a_{2,0} = B(s₀) + s₁(E(s₀) − B(s₀) + C(1−s₀) − s₀C(0))/(1−s₀)` and
    /// `a_{2,1} = C(s₁) − s₀C(0)`, where `B, C, E` are the `dt`
    /// coefficients of `∂_{1,2}a₁, ∂_{0,2}a₁, ∂_{2,2}a₁`.
    Printed,
    /// `a_{2,0} = B(s₀) + s₁H(s₀)`, `a_{2,1} = C(s₁) − s₀H(s₀)` with
    /// `H = E(s₀) − B(s₀) + C(1−s₀)`.
    Corrected,
}

/// Extends `(a₀, a₁) ∈ Tot⁰_TW(g_{[0,1]}) ⊗ m_A` to level 2; the degree-0
/// part of `a₂` is the same for both variants. Checks every face condition.
pub fn lift_gauge_degree0(tw: &TwCtx, a0: &[Q], a1: &[PolyForm], variant: GaugeLift) -> Result<Vec<PolyForm>> {
    if tw.levels.len() != 3 {
        return invalid("expects levels 0..2");
    }
    let r = tw.r();
    let g = &tw.g;
    if a0.len() != tw.levels[0].len() || a1.len() != tw.levels[1].len() {
        return invalid("gauge components have the wrong length");
    }
    for (lvl, len) in [(0usize, a0.len()), (1, a1.len())] {
        let l = &g.levels[lvl];
        for i in 0..len {
            let deg = l.deg(i / r);
            let ok = if lvl == 0 {
                deg == 0 || a0[i].is_zero()
            } else {
                a1[i].terms.keys().all(|(_, mask)| mask.count_ones() as i32 == -deg)
            };
            if !ok {
                return invalid("gauge element is not of total degree 0");
            }
        }
    }
    for k in 0..2 {
        let lhs: Vec<PolyForm> = a1.iter().map(|f| face(k, f).expect("1-simplex")).collect();
        if lhs != tw.constant(0, &g.coface(k, 1).apply_tensor(a0, r, &Q::zero())) {
            return invalid(format!("(a₀, a₁) fails the face condition k={k}"));
        }
    }
    let ak: Vec<Vec<PolyForm>> = (0..3).map(|k| g.coface(k, 2).apply_tensor(a1, r, &PolyForm::zero(1))).collect();
    let (s0, s1) = (s(0), s(1));
    let mut a2 = Vec::with_capacity(tw.levels[2].len());
    for i in 0..tw.levels[2].len() {
        let zero_part = |k: usize| ak[k][i].part(0);
        let dt_part = |k: usize| dt_coef(&ak[k][i]);
        let num0 = at_pt(&zero_part(2), Sub::S0)
            .sub(&at_pt(&zero_part(1), Sub::S0))
            .sub(&at_pt(&zero_part(0), Sub::OneMinusS0))
            .add(&at_pt(&zero_part(0), Sub::Zero));
        let deg0 = at_pt(&zero_part(1), Sub::S0)
            .add(&at_pt(&zero_part(0), Sub::S1))
            .sub(&at_pt(&zero_part(1), Sub::Zero))
            .add(&s1.mul(&chart_div(&num0, &one_minus_s0())?));
        let (b, c, e) = (dt_part(1), dt_part(0), dt_part(2));
        let (phi, psi) = match variant {
            GaugeLift::Printed => {
                let num = at_pt(&e, Sub::S0)
                    .sub(&at_pt(&b, Sub::S0))
                    .add(&at_pt(&c, Sub::OneMinusS0))
                    .sub(&s0.mul(&at_pt(&c, Sub::Zero)));
                let phi = at_pt(&b, Sub::S0).add(&s1.mul(&chart_div(&num, &one_minus_s0())?));
                let psi = at_pt(&c, Sub::S1).sub(&s0.mul(&at_pt(&c, Sub::Zero)));
                (phi, psi)
            }
            GaugeLift::Corrected => {
                let hh = at_pt(&e, Sub::S0).sub(&at_pt(&b, Sub::S0)).add(&at_pt(&c, Sub::OneMinusS0));
                (at_pt(&b, Sub::S0).add(&s1.mul(&hh)), at_pt(&c, Sub::S1).sub(&s0.mul(&hh)))
            }
        };
        a2.push(deg0.add(&phi.mul(&ds(0))).add(&psi.mul(&ds(1))));
    }
    let y = vec![tw.constant(0, a0), a1.to_vec(), a2.clone()];
    tw.check(&y)?;
    Ok(a2)
}
