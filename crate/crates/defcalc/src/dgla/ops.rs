use std::sync::Arc;

use num_traits::Zero;

use super::calculus::{gauge, mc_defect};
use super::ctx::{LieCtx, TensorCtx};
use super::Dgla;
use crate::artin::{ArtinAlgebra, SmallExtension};
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::{groebner, solve_linear, LinSystem, MPoly, Mat, MonomialOrder, PolyIdeal, Q};
use crate::graded::GradedElement;

pub use super::path::{homotopy_path_dgla, PathDgla};

/// Solves the ℚ-linear equation `map(h) = rhs` for `h` in the span of `basis`.
pub fn solve_in_span<C: LieCtx<E = Vec<Q>>>(
    ctx: &C,
    basis: &[Vec<Q>],
    map: impl Fn(&Vec<Q>) -> Vec<Q>,
    rhs: &[Q],
) -> Option<Vec<Q>> {
    let cols: Vec<Vec<Q>> = basis.iter().map(&map).collect();
    let m = Mat::from_cols(rhs.len(), &cols);
    let (coef, _) = solve_linear(&LinSystem::new(m, rhs.to_vec()).ok()?)?;
    let mut h = ctx.zero();
    for (c, b) in coef.iter().zip(basis) {
        if !c.is_zero() {
            h = ctx.add(&h, &ctx.scale(b, c));
        }
    }
    Some(h)
}

/// Basis of `L^j ⊗ m_A` as full-length rational vectors.
pub fn degree_basis(ctx: &TensorCtx<Q>, j: i32) -> Vec<Vec<Q>> {
    let r = ctx.r();
    ctx.l
        .range(j)
        .flat_map(|i| (0..r).map(move |e| (i, e)))
        .map(|(i, e)| ctx.unit(i, e, Q::from_integer(1.into())))
        .collect()
}

/// Finds `h ∈ L^{−1} ⊗ m_A` with `dh + [x,h] = u`.
pub fn irrelevant_stabilizer_membership(ctx: &TensorCtx<Q>, x: &Vec<Q>, u: &Vec<Q>) -> Option<Vec<Q>> {
    let basis = degree_basis(ctx, -1);
    if ctx.is_zero(u) {
        return Some(ctx.zero());
    }
    solve_in_span(ctx, &basis, |h| ctx.add(&ctx.d(h), &ctx.bracket(x, h)), u)
}

/// `L ⊗ m_A` with differential `d_x = d + [x, −]` for Maurer-Cartan `x`.
#[derive(Debug, Clone)]
pub struct TwistedDgla<C: LieCtx> {
    pub base: C,
    pub x: C::E,
}

impl<C: LieCtx> LieCtx for TwistedDgla<C> {
    type E = C::E;
    fn zero(&self) -> C::E {
        self.base.zero()
    }
    fn is_zero(&self, x: &C::E) -> bool {
        self.base.is_zero(x)
    }
    fn add(&self, x: &C::E, y: &C::E) -> C::E {
        self.base.add(x, y)
    }
    fn scale(&self, x: &C::E, c: &Q) -> C::E {
        self.base.scale(x, c)
    }
    fn bracket(&self, x: &C::E, y: &C::E) -> C::E {
        self.base.bracket(x, y)
    }
    fn d(&self, y: &C::E) -> C::E {
        self.base.add(&self.base.d(y), &self.base.bracket(&self.x, y))
    }
    fn depth(&self) -> usize {
        self.base.depth()
    }
}

/// Twists by a Maurer-Cartan element and checks `d_x² = 0` on a basis.
pub fn twisted(ctx: &TensorCtx<Q>, x: &Vec<Q>) -> Result<TwistedDgla<TensorCtx<Q>>> {
    if !ctx.is_zero(&mc_defect(ctx, x)) {
        return Err(Error::Check("twisting element is not Maurer-Cartan".into()));
    }
    let t = TwistedDgla { base: ctx.clone(), x: x.clone() };
    for i in 0..ctx.l.dim() {
        for e in 0..ctx.r() {
            let u = ctx.unit(i, e, Q::from_integer(1.into()));
            check(ctx.is_zero(&t.d(&t.d(&u))), "twisted differential does not square to zero")?;
        }
    }
    Ok(t)
}

/// Result of the obstruction computation for a small extension.
#[derive(Debug, Clone)]
pub struct Obstruction {
    /// For each kernel basis vector `j_k` of `B → A`, coordinates of the
    /// class in the basis of `H²(L)` given by `representatives`.
    pub class: Vec<Vec<Q>>,
    pub representatives: Vec<Vec<Q>>,
    /// The chosen lift `x̃` over `m_B`.
    pub naive_lift: Vec<Q>,
    /// A Maurer-Cartan lift over `m_B`, when the class vanishes.
    pub lift: Option<Vec<Q>>,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        self.class.iter().flatten().all(|c| c.is_zero())
    }
}

/// Lifts an element of `L ⊗ m_A` to `L ⊗ m_B` through the basis section.
pub fn lift_through(ext: &SmallExtension, dim: usize, x: &[Q]) -> Vec<Q> {
    let (ra, rb) = (ext.base.dim(), ext.total.dim());
    let mut out = vec![Q::zero(); dim * rb];
    for i in 0..dim {
        let v = ext.lift(&x[i * ra..(i + 1) * ra]);
        out[i * rb..(i + 1) * rb].clone_from_slice(&v);
    }
    out
}

/// Projects an element of `L ⊗ m_B` to `L ⊗ m_A`.
pub fn project_through(ext: &SmallExtension, dim: usize, x: &[Q]) -> Vec<Q> {
    let (ra, rb) = (ext.base.dim(), ext.total.dim());
    let mut out = vec![Q::zero(); dim * ra];
    for i in 0..dim {
        let v = ext.project(&x[i * rb..(i + 1) * rb]);
        out[i * ra..(i + 1) * ra].clone_from_slice(&v);
    }
    out
}

/// Obstruction class in `H²(L) ⊗ J` of lifting `x` along `ext`, computed
/// from `lift` (or the basis-section lift when `None`).
pub fn obstruction_class(l: &Arc<Dgla>, ext: &SmallExtension, x: &[Q], lift: Option<Vec<Q>>) -> Result<Obstruction> {
    let ca = TensorCtx::new(l.clone(), Arc::new(ext.base.clone()), Q::zero());
    if x.len() != ca.len() {
        return invalid("element has wrong length");
    }
    if !ca.is_zero(&mc_defect(&ca, &x.to_vec())) {
        return invalid("element is not Maurer-Cartan over the base");
    }
    let cb = TensorCtx::new(l.clone(), Arc::new(ext.total.clone()), Q::zero());
    let xt = match lift {
        Some(v) => {
            check(project_through(ext, l.dim(), &v) == x, "supplied lift does not project to x")?;
            v
        }
        None => lift_through(ext, l.dim(), x),
    };
    let o = mc_defect(&cb, &xt);
    let rb = ext.total.dim();
    // write o = Σ_k o_k ⊗ j_k
    let jm = Mat::from_cols(rb, &ext.kernel_basis);
    let complex = l.complex();
    let reps = complex.representatives(2);
    let d1 = l.d_block(1);
    let mut class = Vec::new();
    let mut corrections: Vec<Vec<Q>> = Vec::new();
    let r2 = l.range(2);
    let mut parts: Vec<Vec<Q>> = vec![vec![Q::zero(); r2.len()]; ext.kernel_basis.len()];
    for (row, i) in r2.clone().enumerate() {
        let (c, _) = solve_linear(&LinSystem::new(jm.clone(), o[i * rb..(i + 1) * rb].to_vec())?)
            .ok_or_else(|| Error::Check("obstruction does not lie in L ⊗ J".into()))?;
        for (k, ck) in c.into_iter().enumerate() {
            parts[k][row] = ck;
        }
    }
    for ok in &parts {
        // ok = Σ c_r rep_r + d1 h
        let mut cols: Vec<Vec<Q>> = reps.clone();
        cols.extend((0..d1.cols).map(|c| d1.col(c)));
        let (sol, _) = solve_linear(&LinSystem::new(Mat::from_cols(r2.len(), &cols), ok.clone())?)
            .ok_or_else(|| Error::Check("obstruction is not a cocycle".into()))?;
        class.push(sol[..reps.len()].to_vec());
        corrections.push(sol[reps.len()..].to_vec());
    }
    let mut out = Obstruction { class, representatives: reps, naive_lift: xt.clone(), lift: None };
    if out.vanishes() {
        let mut fixed = xt;
        let r1 = l.range(1);
        for (k, h) in corrections.iter().enumerate() {
            for (row, i) in r1.clone().enumerate() {
                for e in 0..rb {
                    fixed[i * rb + e] -= &h[row] * &ext.kernel_basis[k][e];
                }
            }
        }
        check(cb.is_zero(&mc_defect(&cb, &fixed)), "corrected lift is not Maurer-Cartan")?;
        out.lift = Some(fixed);
    }
    Ok(out)
}

/// Outcome of the gauge-equivalence decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeDecision {
    pub equivalent: bool,
    pub witness: Option<Vec<Q>>,
}

fn read_solution(g: &PolyIdeal, fixed: &[Option<Q>]) -> Option<Vec<Q>> {
    let mut sol = fixed.to_vec();
    for p in &g.generators {
        let used = p.vars_used();
        if !p.is_affine() || used.len() != 1 {
            return None;
        }
        let v = used[0];
        let mut e = vec![0; g.nvars];
        e[v] = 1;
        sol[v] = Some(-p.constant_term() / &p.terms[&e]);
    }
    sol.into_iter().collect()
}

/// Greedy witness extraction: fix variables to zero while the system stays
/// consistent and read off a solution once the reduced basis is linear with
/// a unique solution.
pub(crate) fn extract_witness(gens: &[MPoly], nvars: usize, budget: usize) -> Result<Option<Vec<Q>>> {
    let mut gens: Vec<MPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut fixed: Vec<Option<Q>> = vec![None; nvars];
    for _ in 0..=nvars {
        let g = groebner(&PolyIdeal::new(nvars, gens.clone(), MonomialOrder::Lex), budget)?;
        if g.is_unit() {
            return Ok(None);
        }
        if let Some(sol) = read_solution(&g, &fixed) {
            return Ok(Some(sol));
        }
        let determined: Vec<usize> = g
            .generators
            .iter()
            .filter_map(|p| p.lead(MonomialOrder::Lex))
            .flat_map(|(e, _)| (0..nvars).filter(|&v| e[v] > 0).collect::<Vec<_>>())
            .collect();
        let Some(free) = (0..nvars).rev().find(|v| fixed[*v].is_none() && !determined.contains(v)) else {
            return Ok(None);
        };
        fixed[free] = Some(Q::zero());
        gens = gens.iter().map(|p| p.subst_value(free, &Q::zero())).filter(|p| !p.is_zero()).collect();
    }
    Ok(None)
}

/// Decides whether `x₁ = e^a * x₀` for some `a ∈ L⁰ ⊗ m_A` over the
/// algebraic closure; a witness is attached when one can be read off.
pub fn gauge_equiv_decide(ctx: &TensorCtx<Q>, x0: &Vec<Q>, x1: &Vec<Q>, budget: usize) -> Result<GaugeDecision> {
    let (gens, nv, sym) = gauge_system(ctx, x0, x1);
    let ideal = PolyIdeal::new(nv, gens.clone(), MonomialOrder::GrevLex);
    let ok = crate::exactalg::ideal_has_solution(&ideal, budget)?;
    if !ok {
        return Ok(GaugeDecision { equivalent: false, witness: None });
    }
    let witness = match extract_witness(&gens, nv, budget)? {
        Some(vals) => {
            let a = sym(&vals);
            if gauge(ctx, &a, x0) == *x1 {
                Some(a)
            } else {
                None
            }
        }
        None => None,
    };
    Ok(GaugeDecision { equivalent: true, witness })
}

type Assemble = Box<dyn Fn(&[Q]) -> Vec<Q>>;

/// Polynomial system `e^a * x₀ − x₁ = 0` in the coordinates of `a`.
pub(crate) fn gauge_system(ctx: &TensorCtx<Q>, x0: &Vec<Q>, x1: &Vec<Q>) -> (Vec<MPoly>, usize, Assemble) {
    let r = ctx.r();
    let idx: Vec<usize> = ctx.l.range(0).flat_map(|i| (0..r).map(move |e| i * r + e)).collect();
    let nv = idx.len();
    let pz = MPoly::zero(nv);
    let sctx = TensorCtx::new(ctx.l.clone(), ctx.a.clone(), pz.clone());
    let mut a = sctx.zero();
    for (v, &k) in idx.iter().enumerate() {
        a[k] = MPoly::var(nv, v);
    }
    let gx = gauge(&sctx, &a, &sctx.from_q(x0));
    let diff = sctx.sub(&gx, &sctx.from_q(x1));
    let gens: Vec<MPoly> = diff.into_iter().filter(|p| !p.is_zero()).collect();
    let len = ctx.len();
    let assemble: Assemble = Box::new(move |vals: &[Q]| {
        let mut out = vec![Q::zero(); len];
        for (v, &k) in idx.iter().enumerate() {
            out[k] = vals[v].clone();
        }
        out
    });
    (gens, nv, assemble)
}

/// Checks `e^{a•b} * x = eᵃ * (eᵇ * x)` exactly.
pub fn gauge_group_law_check<C: LieCtx>(ctx: &C, a: &C::E, b: &C::E, x: &C::E) -> bool {
    let ab = super::calculus::bch(ctx, a, b);
    gauge(ctx, &ab, x) == gauge(ctx, a, &gauge(ctx, b, x))
}

/// `dim H¹(L)` with cocycle representatives.
pub fn tangent_space(l: &Dgla) -> (usize, Vec<GradedElement>) {
    let reps = l.complex().representatives(1);
    (reps.len(), reps.iter().map(|v| GradedElement::from_rational(1, v)).collect())
}

/// Splitting `L = M ⊕ C ⊕ D` with `d: C → D` an isomorphism, given by bases
/// (full-length rational vectors) of `C` and `M`; `D = dC`.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub m_basis: Vec<Vec<Q>>,
    pub c_basis: Vec<Vec<Q>>,
}

/// Projection onto `M` along `C ⊕ D` and the homotopy `K = (d|_C)⁻¹` on `D`,
/// both as matrices on the flat basis of `L`; checks the splitting.
pub fn splitting_homotopy(l: &Dgla, s: &Splitting) -> Result<(Mat, Mat)> {
    let n = l.dim();
    let d_basis: Vec<Vec<Q>> = s.c_basis.iter().map(|c| l.d_vec(c)).collect();
    let mut all = s.m_basis.clone();
    all.extend(s.c_basis.iter().cloned());
    all.extend(d_basis.iter().cloned());
    if all.len() != n {
        return invalid("splitting dimensions do not add up");
    }
    let t = Mat::from_cols(n, &all);
    let tinv = crate::artin::invert(&t).ok_or_else(|| Error::Invalid("splitting is not a direct sum (d: C → D not an isomorphism)".into()))?;
    for mv in &s.m_basis {
        let coords = tinv.mul_vec(&l.d_vec(mv));
        check(coords[s.m_basis.len()..].iter().all(|c| c.is_zero()), "M is not a subcomplex")?;
    }
    let (nm, nc) = (s.m_basis.len(), s.c_basis.len());
    // in the adapted basis: P keeps M coordinates; K sends D_j to C_j
    let mut pa = Mat::zeros(n, n);
    let mut ka = Mat::zeros(n, n);
    for i in 0..nm {
        pa.set(i, i, Q::from_integer(1.into()));
    }
    for j in 0..nc {
        ka.set(nm + j, nm + nc + j, Q::from_integer(1.into()));
    }
    Ok((t.mul(&pa).mul(&tinv), t.mul(&ka).mul(&tinv)))
}

/// Order-by-order solver for `F(z) = 0` with `z ∈ V ⊗ m_A`: at each step
/// the lowest filtration level of `F(z)` is killed with the linearization
/// `dfm: V → W`. Errors when a step is obstructed.
pub fn solve_order_by_order(
    a: &ArtinAlgebra,
    dfm: &Mat,
    f: impl Fn(&[Q]) -> Vec<Q>,
    mut z: Vec<Q>,
) -> Result<Vec<Q>> {
    let r = a.dim();
    let (nw, nv) = (dfm.rows, dfm.cols);
    let (vecs, levels, tinv) = a.adapted_basis();
    for _ in 0..=(a.nilpotency_index() * r + 2) {
        let fz = f(&z);
        if fz.iter().all(|c| c.is_zero()) {
            return Ok(z);
        }
        let coords: Vec<Vec<Q>> = (0..nw).map(|w| tinv.mul_vec(&fz[w * r..(w + 1) * r])).collect();
        let k = (0..r)
            .filter(|&b| coords.iter().any(|c| !c[b].is_zero()))
            .map(|b| levels[b])
            .min()
            .unwrap();
        for b in (0..r).filter(|&b| levels[b] == k) {
            let rhs: Vec<Q> = coords.iter().map(|c| -c[b].clone()).collect();
            let (delta, _) = solve_linear(&LinSystem::new(dfm.clone(), rhs)?)
                .ok_or_else(|| Error::Check(format!("obstructed at filtration level {k}")))?;
            for v in 0..nv {
                if delta[v].is_zero() {
                    continue;
                }
                for e in 0..r {
                    z[v * r + e] += &delta[v] * &vecs[b][e];
                }
            }
        }
    }
    Err(Error::Check("order-by-order solver did not converge".into()))
}
