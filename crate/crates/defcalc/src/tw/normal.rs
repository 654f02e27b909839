use std::sync::Arc;

use num_traits::Zero;

use super::{TwCtx, TwElement};
use crate::artin::ArtinAlgebra;
use crate::dgla::{bch_many, decompose, gauge, mc_defect, splitting_homotopy, DglaMorphism, LieCtx, Splitting, TensorCtx};
use crate::dgla::Dgla;
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::Q;
use crate::forms::{chart_homotopy, chart_vertex_projection, face, from_chart, restrict_edge, to_chart, PolyForm};

/// Writes Maurer-Cartan `y ∈ L ⊗ m_A` as `e^c * x` with `x ∈ M ⊗ m_A` and
/// `c ∈ C⁰ ⊗ m_A` for a splitting `L = M ⊕ C ⊕ dC`.
pub fn decompose_mc(l: &Arc<Dgla>, split: &Splitting, a: &Arc<ArtinAlgebra>, y: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    let (p, k) = splitting_homotopy(l, split)?;
    let ctx = TensorCtx::new(l.clone(), a.clone(), Q::zero());
    let y = y.to_vec();
    if y.len() != ctx.len() {
        return invalid("element has wrong length");
    }
    check(ctx.is_zero(&mc_defect(&ctx, &y)), "input is not Maurer-Cartan")?;
    let r = ctx.r();
    let pm = DglaMorphism { matrix: p };
    let km = DglaMorphism { matrix: k };
    let (x, c) = decompose(&ctx, &y, |v| pm.apply_tensor(v, r, &Q::zero()), |v| km.apply_tensor(v, r, &Q::zero()))?;
    check(gauge(&ctx, &c, &x) == y, "decomposition does not reproduce the input")?;
    Ok((x, c))
}

/// `y = e^c * y₀` with `y₀` constant and `c` in the image of the chart homotopy.
fn chart_decompose(ctx: &TensorCtx<PolyForm>, y: &[PolyForm]) -> Result<(Vec<Q>, Vec<PolyForm>)> {
    let proj = |x: &Vec<PolyForm>| -> Vec<PolyForm> { x.iter().map(|f| from_chart(&chart_vertex_projection(&to_chart(f)))).collect() };
    let hom = |x: &Vec<PolyForm>| -> Vec<PolyForm> { x.iter().map(|f| from_chart(&chart_homotopy(&to_chart(f)))).collect() };
    let (x, c) = decompose(ctx, &y.to_vec(), proj, hom)?;
    Ok((x.iter().map(|f| f.constant_term()).collect(), c))
}

fn check_levels(tw: &TwCtx, y: &TwElement, top: usize) -> Result<()> {
    if tw.g.top() < top || y.len() != tw.levels.len() {
        return invalid(format!("need an element with levels 0..{top}"));
    }
    for n in 0..=top {
        check(tw.levels[n].is_zero(&mc_defect(&tw.levels[n], &y[n])), format!("level {n} is not Maurer-Cartan"))?;
    }
    if let Some((k, n)) = tw.face_defects(y).into_iter().find(|&(_, n)| n <= top) {
        return Err(Error::Check(format!("face condition fails at (k={k}, n={n})")));
    }
    Ok(())
}

fn at_end(p: &[PolyForm]) -> Vec<Q> {
    p.iter().map(|f| face(1, f).expect("1-simplex").constant_term()).collect()
}

/// `(x, p)` with `y = (x, e^{p(t)} * ∂_{0,1}x)` and `p ∈ t·g₁⁰[t] ⊗ m_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm01 {
    pub x: Vec<Q>,
    pub p: Vec<PolyForm>,
}

impl NormalForm01 {
    /// Levels 0 and 1 of the assembled element.
    pub fn assemble(&self, tw: &TwCtx) -> Vec<Vec<PolyForm>> {
        let r = tw.r();
        let c1 = &tw.levels[1];
        let y1 = c1.from_q(&tw.g.coface(0, 1).apply_tensor(&self.x, r, &Q::zero()));
        vec![tw.constant(0, &self.x), gauge(c1, &self.p, &y1)]
    }
}

/// Normal form on levels `[0, 1]`; checks `∂_{1,1}x = e^{p(1)} * ∂_{0,1}x`.
pub fn normal_form_01(tw: &TwCtx, y: &TwElement) -> Result<NormalForm01> {
    check_levels(tw, y, 1)?;
    let r = tw.r();
    let x: Vec<Q> = y[0].iter().map(|f| f.constant_term()).collect();
    let (y1, p) = chart_decompose(&tw.levels[1], &y[1])?;
    let g1 = TensorCtx::new(tw.g.levels[1].clone(), tw.a.clone(), Q::zero());
    let d0x = tw.g.coface(0, 1).apply_tensor(&x, r, &Q::zero());
    let d1x = tw.g.coface(1, 1).apply_tensor(&x, r, &Q::zero());
    check(y1 == d0x, "level 1 does not start at ∂_{0,1}x")?;
    check(d1x == gauge(&g1, &at_end(&p), &d0x), "face condition ∂_{1,1}x = e^{p(1)} * ∂_{0,1}x fails")?;
    Ok(NormalForm01 { x, p })
}

/// `(x, p, q, r)` with level 2 equal to `e^{q + r} * ∂_{0,2}∂_{0,1}x`,
/// `q` a 0-form vanishing at the base vertex and `r ∈ g₂^{−1}[s]·s₀ds₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm02 {
    pub x: Vec<Q>,
    pub p: Vec<PolyForm>,
    pub q: Vec<PolyForm>,
    pub r: Vec<PolyForm>,
}

impl NormalForm02 {
    pub fn assemble(&self, tw: &TwCtx) -> Vec<Vec<PolyForm>> {
        let nf = NormalForm01 { x: self.x.clone(), p: self.p.clone() };
        let mut out = nf.assemble(tw);
        let ra = tw.r();
        let c2 = &tw.levels[2];
        let z = c2.from_q(&tw.g.composite(0, &[0, 1]).apply_tensor(&self.x, ra, &Q::zero()));
        out.push(gauge(c2, &c2.add(&self.q, &self.r), &z));
        out
    }
}

/// Value of a 0-form on the 2-simplex at chart point `(0, 1)`.
fn at_01(f: &PolyForm) -> Q {
    to_chart(f).part(0).eval0(&[Q::zero(), Q::from_integer(1.into())])
}

/// Normal form on levels `[0, 2]`, verifying all four face conditions
/// including the edge-stabilizer identity.
pub fn normal_form_02(tw: &TwCtx, y: &TwElement) -> Result<NormalForm02> {
    check_levels(tw, y, 2)?;
    let NormalForm01 { x, p } = normal_form_01(tw, y)?;
    let ra = tw.r();
    let (y2, c) = chart_decompose(&tw.levels[2], &y[2])?;
    let z = tw.g.composite(0, &[0, 1]).apply_tensor(&x, ra, &Q::zero());
    check(y2 == z, "level 2 does not start at ∂_{0,2}∂_{0,1}x")?;
    let q: Vec<PolyForm> = c.iter().map(|f| f.part(0)).collect();
    let r: Vec<PolyForm> = c.iter().map(|f| f.part(1)).collect();
    let zero1 = PolyForm::zero(1);
    let faces = |k: usize, v: &[PolyForm]| -> Vec<PolyForm> { v.iter().map(|f| face(k, f).expect("2-simplex")).collect() };
    check(faces(0, &q) == tw.g.coface(0, 2).apply_tensor(&p, ra, &zero1), "face condition ∂_{0,2}p(t) = q(0,t) fails")?;
    check(faces(1, &q) == tw.g.coface(1, 2).apply_tensor(&p, ra, &zero1), "face condition ∂_{1,2}p(t) = q(t,0) fails")?;
    // edge stabilizer identity in Ω₁ ⊗ g₂ ⊗ m_A
    let e = TensorCtx::new(tw.g.levels[2].clone(), tw.a.clone(), zero1.clone());
    let p22 = tw.g.coface(2, 2).apply_tensor(&p, ra, &zero1);
    let edge: Vec<PolyForm> = q.iter().zip(&r).map(|(a, b)| restrict_edge(&a.add(b)).expect("2-simplex")).collect();
    let q01: Vec<PolyForm> = q.iter().map(|f| PolyForm::constant(1, at_01(f))).collect();
    let u = bch_many(&e, &[e.neg(&p22), edge, e.neg(&q01)]);
    let base = e.from_q(&tw.g.composite(0, &[0, 2]).apply_tensor(&x, ra, &Q::zero()));
    check(gauge(&e, &u, &base) == base, "edge stabilizer identity fails")?;
    Ok(NormalForm02 { x, p, q, r })
}
