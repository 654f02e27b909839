//! Semicosimplicial DGLAs, the total complex, the Thom-Whitney DGLA and
//! Maurer-Cartan normal forms.

mod capped;
mod normal;
mod tot;

pub(crate) use capped::monomials;
pub use capped::{tw_cohomology_capped, tw_space_dims};
pub use normal::{decompose_mc, normal_form_01, normal_form_02, NormalForm01, NormalForm02};
pub use tot::{tot_complex, tot_differential, truncation_criterion, TotElement, TotLayout};

use std::sync::Arc;

use num_traits::Zero;

use crate::artin::ArtinAlgebra;
use crate::dgla::{LieCtx, TensorCtx, Dgla, DglaMorphism};
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::{Mat, Q};
use crate::forms::{face, integrate, whitney_form, PolyForm};

/// Levels `g₀ … g_M` with cofaces `∂_{k,i}: g_{i−1} → g_i`.
#[derive(Debug, Clone)]
pub struct ScDgla {
    pub levels: Vec<Arc<Dgla>>,
    /// `cofaces[i][k] = ∂_{k,i}`; `cofaces[0]` is empty.
    pub cofaces: Vec<Vec<DglaMorphism>>,
}

impl ScDgla {
    /// Checks that every coface is a DGLA morphism and the cosimplicial
    /// identities `∂_{k+1,i+1}∂_{l,i} = ∂_{l,i+1}∂_{k,i}` for `k ≥ l`.
    pub fn new(levels: Vec<Dgla>, cofaces: Vec<Vec<DglaMorphism>>) -> Result<ScDgla> {
        let g = ScDgla::unchecked(levels, cofaces)?;
        g.check()?;
        Ok(g)
    }

    pub(crate) fn unchecked(levels: Vec<Dgla>, mut cofaces: Vec<Vec<DglaMorphism>>) -> Result<ScDgla> {
        if levels.is_empty() {
            return invalid("need at least one level");
        }
        if cofaces.len() == levels.len() - 1 {
            cofaces.insert(0, vec![]);
        }
        if cofaces.len() != levels.len() || !cofaces[0].is_empty() {
            return invalid("cofaces must be given for levels 1..M");
        }
        for (i, maps) in cofaces.iter().enumerate().skip(1) {
            if maps.len() != i + 1 {
                return invalid(format!("level {i} needs {} cofaces", i + 1));
            }
            for m in maps {
                if m.matrix.rows != levels[i].dim() || m.matrix.cols != levels[i - 1].dim() {
                    return invalid(format!("coface into level {i} has wrong shape"));
                }
            }
        }
        Ok(ScDgla { levels: levels.into_iter().map(Arc::new).collect(), cofaces })
    }

    pub fn check(&self) -> Result<()> {
        for i in 1..self.levels.len() {
            for (k, m) in self.cofaces[i].iter().enumerate() {
                DglaMorphism::new(&self.levels[i - 1], &self.levels[i], m.matrix.clone())
                    .map_err(|e| Error::Check(format!("coface ({k},{i}): {e}")))?;
            }
        }
        for i in 1..self.top() {
            for k in 0..=i {
                for l in 0..=k {
                    let lhs = self.coface(k + 1, i + 1).compose(self.coface(l, i));
                    let rhs = self.coface(l, i + 1).compose(self.coface(k, i));
                    check(lhs == rhs, format!("cosimplicial identity fails for k={k}, l={l}, i={i}"))?;
                }
            }
        }
        Ok(())
    }

    /// `M`, the index of the last level.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Arc<Dgla> {
        &self.levels[i]
    }

    /// `∂_{k,i}`.
    pub fn coface(&self, k: usize, i: usize) -> &DglaMorphism {
        &self.cofaces[i][k]
    }

    /// Composite coface for the monotone injection `[n] → [m]` missing the
    /// ascending indices `missing`.
    pub fn composite(&self, n: usize, missing: &[usize]) -> DglaMorphism {
        let mut acc = DglaMorphism::identity(&self.levels[n]);
        for (t, &j) in missing.iter().enumerate() {
            acc = self.coface(j, n + t + 1).compose(&acc);
        }
        acc
    }

    /// Levels outside `[m1, m2]` become zero, with zero cofaces around them.
    pub fn truncate(&self, m1: usize, m2: usize) -> Result<ScDgla> {
        if m1 > m2 || m2 > self.top() {
            return invalid("truncation needs m1 <= m2 <= M");
        }
        let keep = |i: usize| (m1..=m2).contains(&i);
        let levels: Vec<Dgla> =
            (0..=self.top()).map(|i| if keep(i) { (*self.levels[i]).clone() } else { Dgla::zero() }).collect();
        let mut cofaces = vec![vec![]];
        for i in 1..levels.len() {
            cofaces.push(
                (0..=i)
                    .map(|k| {
                        if keep(i) && keep(i - 1) {
                            self.coface(k, i).clone()
                        } else {
                            DglaMorphism::zero(&levels[i - 1], &levels[i])
                        }
                    })
                    .collect(),
            );
        }
        ScDgla::unchecked(levels, cofaces)
    }

    /// Drops levels above `m`.
    pub fn restrict_levels(&self, m: usize) -> ScDgla {
        ScDgla { levels: self.levels[..=m].to_vec(), cofaces: self.cofaces[..=m].to_vec() }
    }
}

/// `g_{−1} → g₀ ⇉ g₁ …` with `∂_{0,1}∂_{0,0} = ∂_{1,1}∂_{0,0}`.
#[derive(Debug, Clone)]
pub struct AugmentedScDgla {
    pub base: Arc<Dgla>,
    pub rest: ScDgla,
    pub aug: DglaMorphism,
}

impl AugmentedScDgla {
    pub fn new(base: Dgla, rest: ScDgla, aug: DglaMorphism) -> Result<AugmentedScDgla> {
        let aug = DglaMorphism::new(&base, &rest.levels[0], aug.matrix)?;
        if rest.top() >= 1 {
            check(
                rest.coface(0, 1).compose(&aug) == rest.coface(1, 1).compose(&aug),
                "augmentation is not equalized by the two cofaces",
            )?;
        }
        Ok(AugmentedScDgla { base: Arc::new(base), rest, aug })
    }

    /// `∂_{n,n} ⋯ ∂_{1,1} ∂_{0,0}`.
    pub fn to_level(&self, n: usize) -> DglaMorphism {
        let mut acc = self.aug.clone();
        for i in 1..=n {
            acc = self.rest.coface(i, i).compose(&acc);
        }
        acc
    }
}

/// Element of `Tot_TW(g) ⊗ m_A`: one coefficient vector of forms per level.
pub type TwElement = Vec<Vec<PolyForm>>;

/// `Tot_TW(g) ⊗ m_A` with a total-degree cap on forms.
#[derive(Debug, Clone)]
pub struct TwCtx {
    pub g: Arc<ScDgla>,
    pub a: Arc<ArtinAlgebra>,
    pub levels: Vec<TensorCtx<PolyForm>>,
    pub cap: u32,
}

impl TwCtx {
    pub fn new(g: Arc<ScDgla>, a: Arc<ArtinAlgebra>, cap: u32) -> TwCtx {
        let levels = (0..g.levels.len())
            .map(|n| TensorCtx::new(g.levels[n].clone(), a.clone(), PolyForm::zero(n)))
            .collect();
        TwCtx { g, a, levels, cap }
    }

    pub fn r(&self) -> usize {
        self.a.dim()
    }

    pub fn check_cap(&self, x: &TwElement) -> Result<()> {
        x.iter().flatten().try_for_each(|f| f.check_cap(self.cap))
    }

    /// `δ^{k,n} x_n = ∂_{k,n} x_{n−1}` for all `0 ≤ k ≤ n ≤ M`.
    pub fn face_compatible(&self, x: &TwElement) -> bool {
        self.face_defects(x).is_empty()
    }

    /// Pairs `(k, n)` where the face condition fails.
    pub fn face_defects(&self, x: &TwElement) -> Vec<(usize, usize)> {
        let r = self.r();
        let mut bad = vec![];
        for n in 1..x.len() {
            for k in 0..=n {
                let lhs: Vec<PolyForm> = x[n].iter().map(|f| face(k, f).expect("face in range")).collect();
                let rhs = self.g.coface(k, n).apply_tensor(&x[n - 1], r, &PolyForm::zero(n - 1));
                if lhs != rhs {
                    bad.push((k, n));
                }
            }
        }
        bad
    }

    /// Cap and face conditions.
    pub fn check(&self, x: &TwElement) -> Result<()> {
        if x.len() != self.levels.len() || x.iter().zip(&self.levels).any(|(v, c)| v.len() != c.len()) {
            return invalid("element has wrong shape");
        }
        self.check_cap(x)?;
        let bad = self.face_defects(x);
        if let Some((k, n)) = bad.first() {
            return Err(Error::Check(format!("face condition fails at (k={k}, n={n})")));
        }
        Ok(())
    }

    /// Level `n` of `x`, as an element of `Ω_n ⊗ g_n ⊗ m_A`.
    pub fn constant(&self, n: usize, v: &[Q]) -> Vec<PolyForm> {
        self.levels[n].from_q(v)
    }

    /// `I`: integrates the top-degree part levelwise.
    pub fn integrate(&self, x: &TwElement) -> TotElement {
        x.iter().map(|v| v.iter().map(integrate).collect()).collect()
    }

    /// `E`: Whitney forms tensored with composite cofaces.
    pub fn whitney(&self, y: &TotElement) -> Result<TwElement> {
        let r = self.r();
        let m_top = self.g.top();
        let mut out: TwElement = self.zero();
        for (n, yn) in y.iter().enumerate() {
            if yn.iter().all(|c| c.is_zero()) {
                continue;
            }
            for m in n..=m_top {
                for sigma in subsets(m + 1, n + 1) {
                    let missing: Vec<usize> = (0..=m).filter(|v| !sigma.contains(v)).collect();
                    let mapped = self.g.composite(n, &missing).apply_tensor(yn, r, &Q::zero());
                    let w = whitney_form(m, &sigma)?;
                    for (o, c) in out[m].iter_mut().zip(&mapped) {
                        if !c.is_zero() {
                            *o = o.add(&w.scale(c));
                        }
                    }
                }
            }
        }
        self.check_cap(&out)?;
        Ok(out)
    }

    /// Constant forms `(∂_{0,0}x, ∂_{1,1}∂_{0,0}x, …)`.
    pub fn augment_embed(&self, ag: &AugmentedScDgla, x: &[Q]) -> TwElement {
        let r = self.r();
        (0..self.levels.len())
            .map(|n| self.constant(n, &ag.to_level(n).apply_tensor(x, r, &Q::zero())))
            .collect()
    }

    /// Whether every level is constant (0-forms without variables).
    pub fn is_constant(&self, x: &TwElement) -> bool {
        x.iter().flatten().all(|f| f.is_constant())
    }
}

/// Ascending `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(0, n, k, &mut vec![], &mut out);
    out
}

impl LieCtx for TwCtx {
    type E = TwElement;
    fn zero(&self) -> TwElement {
        self.levels.iter().map(|c| c.zero()).collect()
    }
    fn is_zero(&self, x: &TwElement) -> bool {
        x.iter().zip(&self.levels).all(|(v, c)| c.is_zero(v))
    }
    fn add(&self, x: &TwElement, y: &TwElement) -> TwElement {
        x.iter().zip(y).zip(&self.levels).map(|((u, v), c)| c.add(u, v)).collect()
    }
    fn scale(&self, x: &TwElement, s: &Q) -> TwElement {
        x.iter().zip(&self.levels).map(|(u, c)| c.scale(u, s)).collect()
    }
    fn bracket(&self, x: &TwElement, y: &TwElement) -> TwElement {
        x.iter().zip(y).zip(&self.levels).map(|((u, v), c)| c.bracket(u, v)).collect()
    }
    fn d(&self, x: &TwElement) -> TwElement {
        x.iter().zip(&self.levels).map(|(u, c)| c.d(u)).collect()
    }
    fn depth(&self) -> usize {
        self.a.nilpotency_index()
    }
}

/// Builds the coface matrix between two levels from `(row, col, value)` triples.
pub fn coface_matrix(rows: usize, cols: usize, entries: &[(usize, usize, Q)]) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for (i, j, c) in entries {
        m.set(*i, *j, c.clone());
    }
    m
}
