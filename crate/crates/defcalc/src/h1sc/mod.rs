//! The cocycle functor `Z¹_sc(exp g)`, the relation `~` and `H¹_sc`, the
//! maps between Thom-Whitney Maurer-Cartan elements and cocycles, and the
//! driver that checks `Def_{Tot_TW(g_{[0,2]})} ≅ H¹_sc(exp g)` on samples.

use std::sync::Arc;

use num_traits::Zero;

use crate::artin::{ArtinAlgebra, SmallExtension};
use crate::dgla::{
    ad_exp, bch, bch_many, degree_basis, gauge, irrelevant_stabilizer_membership, lift_through, mc_defect, project_through,
    solve_in_span, LieCtx, TensorCtx,
};
use crate::error::{invalid, Error, Result};
use crate::exactalg::{ideal_has_solution, qf, MPoly, Mat, MonomialOrder, PolyIdeal, Q};
use crate::tw::{tot_complex, ScDgla};

mod maps;
mod theorem;

pub use maps::{lift_gauge_degree0, phi_01, phi_02, psi_01, surjectivity_lift, surjectivity_report, GaugeLift, LiftVariant};
pub use theorem::{
    gauge_01, generate_samples, injectivity_witness, random_gauge, random_gauge_01, random_z1, verify_main_theorem, CheckItem, MainReport, Samples,
};

/// Levels `0..2` of a semicosimplicial DGLA over a fixed Artin algebra.
#[derive(Debug, Clone)]
pub struct H1Ctx {
    pub g: Arc<ScDgla>,
    pub a: Arc<ArtinAlgebra>,
    /// `g_i ⊗ m_A` for `i ≤ min(2, top)`.
    pub c: Vec<TensorCtx<Q>>,
}

impl H1Ctx {
    pub fn new(g: Arc<ScDgla>, a: Arc<ArtinAlgebra>) -> Result<H1Ctx> {
        if g.top() < 1 {
            return invalid("need at least levels 0 and 1");
        }
        let c = (0..=g.top().min(2)).map(|i| TensorCtx::new(g.levels[i].clone(), a.clone(), Q::zero())).collect();
        Ok(H1Ctx { g, a, c })
    }

    pub fn r(&self) -> usize {
        self.a.dim()
    }

    fn has_level2(&self) -> bool {
        self.c.len() > 2
    }

    /// `∂_{k,i}` applied to an element of `g_{i−1} ⊗ m_A`.
    pub fn coface(&self, k: usize, i: usize, x: &[Q]) -> Vec<Q> {
        self.g.coface(k, i).apply_tensor(x, self.r(), &Q::zero())
    }

    /// `∂_{2,2}∂_{0,1}l`, the base point of the third cocycle condition.
    pub fn base2(&self, l: &[Q]) -> Vec<Q> {
        self.g.composite(0, &[0, 2]).apply_tensor(l, self.r(), &Q::zero())
    }

    /// `∂_{0,2}m • −∂_{1,2}m • ∂_{2,2}m`.
    pub fn triangle(&self, m: &[Q]) -> Vec<Q> {
        let c2 = &self.c[2];
        bch_many(c2, &[self.coface(0, 2, m), c2.neg(&self.coface(1, 2, m)), self.coface(2, 2, m)])
    }

    fn check_shape(&self, l: &[Q], m: &[Q]) -> Result<()> {
        if l.len() != self.c[0].len() || m.len() != self.c[1].len() {
            return invalid("cocycle components have the wrong length");
        }
        if self.c[0].part(l, 1) != l {
            return invalid("l must lie in g₀¹ ⊗ m_A");
        }
        if self.c[1].part(m, 0) != m {
            return invalid("m must lie in g₁⁰ ⊗ m_A");
        }
        Ok(())
    }
}

/// A point of `Z¹_sc(exp g)(A)` with a homotopy witness `n ∈ g₂^{−1} ⊗ m_A`
/// (absent when `g` stops at level 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Z1Element {
    pub l: Vec<Q>,
    pub m: Vec<Q>,
    pub n: Option<Vec<Q>>,
}

impl Z1Element {
    pub fn pair(&self) -> (&[Q], &[Q]) {
        (&self.l, &self.m)
    }
}

/// Outcome of [`z1_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum Z1Status {
    Member(Z1Element),
    /// Names the first condition that fails.
    Fails(String),
}

impl Z1Status {
    pub fn member(self) -> Option<Z1Element> {
        match self {
            Z1Status::Member(z) => Some(z),
            Z1Status::Fails(_) => None,
        }
    }
}

/// Checks the three cocycle conditions, solving for `n` linearly.
pub fn z1_check(h: &H1Ctx, l: &[Q], m: &[Q]) -> Result<Z1Status> {
    h.check_shape(l, m)?;
    let (c0, c1) = (&h.c[0], &h.c[1]);
    if !c0.is_zero(&mc_defect(c0, &l.to_vec())) {
        return Ok(Z1Status::Fails("Maurer-Cartan condition dl + ½[l,l] = 0 fails".into()));
    }
    if h.coface(1, 1, l) != gauge(c1, &m.to_vec(), &h.coface(0, 1, l)) {
        return Ok(Z1Status::Fails("face condition ∂_{1,1}l = e^m * ∂_{0,1}l fails".into()));
    }
    let n = if h.has_level2() {
        let u = h.triangle(m);
        match irrelevant_stabilizer_membership(&h.c[2], &h.base2(l), &u) {
            Some(n) => Some(n),
            None => return Ok(Z1Status::Fails("homotopy condition: ∂_{0,2}m • −∂_{1,2}m • ∂_{2,2}m is not dn + [x, n]".into())),
        }
    } else {
        None
    };
    Ok(Z1Status::Member(Z1Element { l: l.to_vec(), m: m.to_vec(), n }))
}

/// Like [`z1_check`] but an error when the pair is not a cocycle.
pub fn z1_member(h: &H1Ctx, l: &[Q], m: &[Q]) -> Result<Z1Element> {
    match z1_check(h, l, m)? {
        Z1Status::Member(z) => Ok(z),
        Z1Status::Fails(msg) => Err(Error::Check(msg)),
    }
}

/// Witness `(a, b)` for `(l₀,m₀) ~ (l₁,m₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivWitness {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivDecision {
    pub equivalent: bool,
    pub witness: Option<EquivWitness>,
}

/// `−m₀ • −∂_{1,1}a • m₁ • ∂_{0,1}a`.
fn equiv_defect(h: &H1Ctx, m0: &[Q], m1: &[Q], a: &[Q]) -> Vec<Q> {
    let c1 = &h.c[1];
    bch_many(c1, &[c1.neg(&m0.to_vec()), c1.neg(&h.coface(1, 1, a)), m1.to_vec(), h.coface(0, 1, a)])
}

/// `db + [∂_{0,1}l₀, b]`.
fn twisted_d1(h: &H1Ctx, l0: &[Q], b: &[Q]) -> Vec<Q> {
    let c1 = &h.c[1];
    let x = h.coface(0, 1, l0);
    c1.add(&c1.d(&b.to_vec()), &c1.bracket(&x, &b.to_vec()))
}

/// Checks both witness equations exactly.
pub fn check_witness(h: &H1Ctx, z0: (&[Q], &[Q]), z1: (&[Q], &[Q]), w: &EquivWitness) -> bool {
    let c0 = &h.c[0];
    if w.a.len() != c0.len() || w.b.len() != h.c[1].len() {
        return false;
    }
    if c0.part(&w.a, 0) != w.a || h.c[1].part(&w.b, -1) != w.b {
        return false;
    }
    gauge(c0, &w.a, &z0.0.to_vec()) == z1.0 && equiv_defect(h, z0.1, z1.1, &w.a) == twisted_d1(h, z0.0, &w.b)
}

/// Decides `(l₀,m₀) ~ (l₁,m₁)`. Only `a` enters polynomially: `b` is
/// eliminated by projecting onto the cokernel of `b ↦ db + [∂_{0,1}l₀, b]`
/// and recovered by a linear solve once `a` is known.
pub fn equiv_decide(h: &H1Ctx, z0: (&[Q], &[Q]), z1: (&[Q], &[Q]), budget: usize) -> Result<EquivDecision> {
    h.check_shape(z0.0, z0.1)?;
    h.check_shape(z1.0, z1.1)?;
    let r = h.r();
    let (c0, c1) = (&h.c[0], &h.c[1]);
    let idx: Vec<usize> = c0.l.range(0).flat_map(|i| (0..r).map(move |e| i * r + e)).collect();
    let nv = idx.len();
    let pz = MPoly::zero(nv);
    let p0 = TensorCtx::new(c0.l.clone(), h.a.clone(), pz.clone());
    let p1 = TensorCtx::new(c1.l.clone(), h.a.clone(), pz.clone());
    let mut a = p0.zero();
    for (v, &k) in idx.iter().enumerate() {
        a[k] = MPoly::var(nv, v);
    }
    let mut gens: Vec<MPoly> = p0.sub(&gauge(&p0, &a, &p0.from_q(z0.0)), &p0.from_q(z1.0));
    let da = |k: usize| h.g.coface(k, 1).apply_tensor(&a, r, &pz);
    let lhs = bch_many(&p1, &[p1.neg(&p1.from_q(z0.1)), p1.neg(&da(1)), p1.from_q(z1.1), da(0)]);
    let bbasis = degree_basis(c1, -1);
    let cols: Vec<Vec<Q>> = bbasis.iter().map(|b| twisted_d1(h, z0.0, b)).collect();
    let t = Mat::from_cols(c1.len(), &cols);
    for y in t.transpose().kernel() {
        let mut p = MPoly::zero(nv);
        for (yk, lk) in y.iter().zip(&lhs) {
            if !yk.is_zero() {
                p = p.add(&lk.scale(yk));
            }
        }
        gens.push(p);
    }
    gens.retain(|p| !p.is_zero());
    let ideal = PolyIdeal::new(nv, gens.clone(), MonomialOrder::GrevLex);
    if !ideal_has_solution(&ideal, budget)? {
        return Ok(EquivDecision { equivalent: false, witness: None });
    }
    let witness = crate::dgla::extract_witness(&gens, nv, budget)?.and_then(|vals| {
        let mut av = vec![Q::zero(); c0.len()];
        for (v, &k) in idx.iter().enumerate() {
            av[k] = vals[v].clone();
        }
        let u = equiv_defect(h, z0.1, z1.1, &av);
        let b = solve_in_span(c1, &bbasis, |b| twisted_d1(h, z0.0, b), &u)?;
        let w = EquivWitness { a: av, b };
        check_witness(h, z0, z1, &w).then_some(w)
    });
    Ok(EquivDecision { equivalent: true, witness })
}

/// Applies a witnessed `~`-move: `(e^a * l, ∂_{1,1}a • m • (db + [∂_{0,1}l, b]) • −∂_{0,1}a)`.
pub fn equiv_apply(h: &H1Ctx, z: (&[Q], &[Q]), w: &EquivWitness) -> (Vec<Q>, Vec<Q>) {
    let (c0, c1) = (&h.c[0], &h.c[1]);
    let l1 = gauge(c0, &w.a, &z.0.to_vec());
    let m1 = bch_many(c1, &[h.coface(1, 1, &w.a), z.1.to_vec(), twisted_d1(h, z.0, &w.b), c1.neg(&h.coface(0, 1, &w.a))]);
    (l1, m1)
}

/// Witness for `(l₁,m₁) ~ (l₀,m₀)` from one for `(l₀,m₀) ~ (l₁,m₁)`:
/// `a' = −a`, `b' = e^{ad ∂_{0,1}a}(−b)`.
pub fn equiv_inverse(h: &H1Ctx, w: &EquivWitness) -> EquivWitness {
    let (c0, c1) = (&h.c[0], &h.c[1]);
    let b = ad_exp(c1, &h.coface(0, 1, &w.a), &c1.neg(&w.b));
    EquivWitness { a: c0.neg(&w.a), b }
}

/// Completes a given `a` to a witness for `z₀ ~ z₁` by solving for `b`.
pub fn complete_witness(h: &H1Ctx, z0: (&[Q], &[Q]), z1: (&[Q], &[Q]), a: &[Q]) -> Option<EquivWitness> {
    let u = equiv_defect(h, z0.1, z1.1, a);
    let b = solve_in_span(&h.c[1], &degree_basis(&h.c[1], -1), |b| twisted_d1(h, z0.0, b), &u)?;
    let w = EquivWitness { a: a.to_vec(), b };
    check_witness(h, z0, z1, &w).then_some(w)
}

/// Witness for `z₀ ~ z₂` from `z₀ ~ z₁` (via `w01`) and `z₁ ~ z₂` (via
/// `w12`): `a = α • a`, with `b` solved linearly.
pub fn equiv_compose(h: &H1Ctx, z0: (&[Q], &[Q]), z2: (&[Q], &[Q]), w01: &EquivWitness, w12: &EquivWitness) -> Option<EquivWitness> {
    let a = bch(&h.c[0], &w12.a, &w01.a);
    let u = equiv_defect(h, z0.1, z2.1, &a);
    let b = solve_in_span(&h.c[1], &degree_basis(&h.c[1], -1), |b| twisted_d1(h, z0.0, b), &u)?;
    let w = EquivWitness { a, b };
    check_witness(h, z0, z2, &w).then_some(w)
}

/// Preimage under `Z¹(B) → H¹(B) ×_{H¹(A)} Z¹(A)`: given `(l,m)` over `B`
/// and a witness for `β(l,m) ~ (l₀,m₀)` over `A`, returns
/// `(e^{ã} * l, ∂_{1,1}ã • m • (db̃ + [∂_{0,1}l, b̃]) • −∂_{0,1}ã)`.
pub fn z1_transport(
    ext: &SmallExtension,
    hb: &H1Ctx,
    ha: &H1Ctx,
    z: (&[Q], &[Q]),
    target: (&[Q], &[Q]),
    w: &EquivWitness,
) -> Result<Z1Element> {
    let (d0, d1) = (hb.g.levels[0].dim(), hb.g.levels[1].dim());
    let pz = (project_through(ext, d0, z.0), project_through(ext, d1, z.1));
    if !check_witness(ha, (&pz.0, &pz.1), target, w) {
        return Err(Error::Check("witness does not relate the projected pair to the target".into()));
    }
    let lifted = EquivWitness { a: lift_through(ext, d0, &w.a), b: lift_through(ext, d1, &w.b) };
    let (l, m) = equiv_apply(hb, z, &lifted);
    let out = z1_member(hb, &l, &m)?;
    if project_through(ext, d0, &l) != target.0 || project_through(ext, d1, &m) != target.1 {
        return Err(Error::Check("transported element does not map to the target".into()));
    }
    Ok(out)
}

/// `T H¹_sc` computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangentReport {
    /// `dim H¹(Tot(g_{[0,2]}))`.
    pub tot: usize,
    /// Linearized cocycles at `ℚ[ε]/ε²` modulo the linearized relation.
    pub cocycle: usize,
}

impl TangentReport {
    pub fn agree(&self) -> bool {
        self.tot == self.cocycle
    }
}

fn block(m: &Mat, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
    let mut out = Mat::zeros(rows.len(), cols.len());
    for (i, r) in rows.clone().enumerate() {
        for (j, c) in cols.clone().enumerate() {
            out.set(i, j, m.get(r, c).clone());
        }
    }
    out
}

fn coface_block(g: &ScDgla, k: usize, i: usize, j: i32) -> Mat {
    block(&g.coface(k, i).matrix, g.levels[i].range(j), g.levels[i - 1].range(j))
}

/// Horizontal concatenation of blocks sharing a row count.
fn hcat(parts: &[Mat]) -> Mat {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, m| acc.hstack(m))
}

fn sub_mat(a: &Mat, b: &Mat) -> Mat {
    a.add(&b.scale(&-Q::from_integer(1.into())))
}

/// Tangent space of `H¹_sc(exp g)`: (i) `H¹` of the total complex of levels
/// `0..2`; (ii) linearized cocycles `dl = 0`, `∂_{1,1}l − ∂_{0,1}l + dm = 0`,
/// `∂_{0,2}m − ∂_{1,2}m + ∂_{2,2}m ∈ d(g₂^{−1})`, modulo
/// `(−da, ∂_{1,1}a − ∂_{0,1}a + db)`.
pub fn tangent_h1sc(g: &ScDgla) -> TangentReport {
    let top = g.top().min(2);
    let t = g.restrict_levels(top);
    let tot = tot_complex(&t).0.h_dim(1);
    if top < 1 {
        return TangentReport { tot, cocycle: t.levels[0].cohomology_dim(1) };
    }
    let (g0, g1) = (&t.levels[0], &t.levels[1]);
    let (nl, nm) = (g0.range(1).len(), g1.range(0).len());
    let eq1 = hcat(&[g0.d_block(1), Mat::zeros(g0.range(2).len(), nm)]);
    let eq2 = hcat(&[sub_mat(&coface_block(&t, 1, 1, 1), &coface_block(&t, 0, 1, 1)), g1.d_block(0)]);
    let mut z = eq1.vstack(&eq2);
    if top == 2 {
        let g2 = &t.levels[2];
        let alt = sub_mat(&sub_mat(&coface_block(&t, 0, 2, 0), &coface_block(&t, 1, 2, 0)), &coface_block(&t, 2, 2, 0).scale(&-Q::from_integer(1.into())));
        let coker = g2.d_block(-1).transpose().kernel();
        if !coker.is_empty() {
            let proj = Mat::from_cols(g2.range(0).len(), &coker).transpose();
            z = z.vstack(&hcat(&[Mat::zeros(proj.rows, nl), proj.mul(&alt)]));
        }
    }
    let zdim = nl + nm - z.rank();
    let (na, nb) = (g0.range(0).len(), g1.range(-1).len());
    let top_rows = hcat(&[g0.d_block(0).scale(&-Q::from_integer(1.into())), Mat::zeros(nl, nb)]);
    let bottom = hcat(&[sub_mat(&coface_block(&t, 1, 1, 0), &coface_block(&t, 0, 1, 0)), g1.d_block(-1)]);
    let bmap = top_rows.vstack(&bottom);
    let brank = if na + nb == 0 { 0 } else { bmap.rank() };
    TangentReport { tot, cocycle: zdim - brank }
}

/// `dim H^{−1}(g₂)`; the comparison theorem needs it to vanish.
pub fn hypothesis_h_minus1(g: &ScDgla) -> usize {
    if g.top() < 2 {
        0
    } else {
        g.levels[2].cohomology_dim(-1)
    }
}

/// Solves `dn + c[x, n] = u` for `n ∈ g₂^{−1} ⊗ m_A`.
pub(crate) fn solve_homotopy(c2: &TensorCtx<Q>, x: &[Q], u: &[Q], coef: &Q) -> Option<Vec<Q>> {
    let basis = degree_basis(c2, -1);
    solve_in_span(c2, &basis, |n| c2.add(&c2.d(n), &c2.scale(&c2.bracket(&x.to_vec(), n), coef)), u)
}

pub(crate) fn half() -> Q {
    qf(1, 2)
}
