//! Čech semicosimplicial DGLAs of combinatorial covers: a cover is its
//! nerve (up to triple intersections) with a local DGLA on every tuple and
//! restriction morphisms along the face inclusions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::artin::ArtinAlgebra;
use crate::dgla::{Dgla, DglaMorphism};
use crate::error::{check, invalid, Error, Result};
use crate::exactalg::{Mat, Q};
use crate::graded::induced_on_cohomology;
use crate::h1sc::{check_witness, complete_witness, z1_member, EquivWitness, H1Ctx, Z1Element};
use crate::tw::{subsets, tot_complex, AugmentedScDgla, ScDgla, TotLayout};

/// Deepest intersection kept: levels `0..=TOP` of the Čech object.
pub const TOP: usize = 2;

/// Strictly increasing index tuple `(i₀ < … < i_k)`.
pub type Tuple = Vec<usize>;

/// Local DGLAs on all tuples of length `1..=3` of `0..opens`, with
/// restrictions for every inclusion that adds one index.
#[derive(Debug, Clone)]
pub struct CoverData {
    opens: usize,
    locals: BTreeMap<Tuple, Dgla>,
    restrictions: BTreeMap<(Tuple, Tuple), DglaMorphism>,
}

fn is_tuple(t: &[usize], opens: usize) -> bool {
    !t.is_empty() && t.len() <= TOP + 1 && t.windows(2).all(|w| w[0] < w[1]) && t.iter().all(|&i| i < opens)
}

fn without(t: &[usize], k: usize) -> Tuple {
    let mut s = t.to_vec();
    s.remove(k);
    s
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i))
}

impl CoverData {
    /// Missing locals are zero; a missing restriction is only allowed when
    /// its target is zero. Restrictions are checked to be morphisms and to
    /// commute along composable inclusions.
    pub fn new(opens: usize, locals: BTreeMap<Tuple, Dgla>, restrictions: BTreeMap<(Tuple, Tuple), DglaMorphism>) -> Result<CoverData> {
        if opens == 0 {
            return invalid("a cover needs at least one open");
        }
        for t in locals.keys() {
            if !is_tuple(t, opens) {
                return invalid(format!("bad index tuple {t:?}"));
            }
        }
        for (s, t) in restrictions.keys() {
            if !is_tuple(s, opens) || !is_tuple(t, opens) || s.len() + 1 != t.len() || !is_subset(s, t) {
                return invalid(format!("restriction {s:?} -> {t:?} is not a face inclusion"));
            }
        }
        let mut locals = locals;
        for n in 0..=TOP {
            for t in subsets(opens, n + 1) {
                locals.entry(t).or_insert_with(Dgla::zero);
            }
        }
        let mut full = BTreeMap::new();
        for n in 1..=TOP {
            for t in subsets(opens, n + 1) {
                for k in 0..t.len() {
                    let s = without(&t, k);
                    let (src, tgt) = (&locals[&s], &locals[&t]);
                    let f = match restrictions.get(&(s.clone(), t.clone())) {
                        Some(f) => DglaMorphism::new(src, tgt, f.matrix.clone())?,
                        None if tgt.dim() == 0 => DglaMorphism::zero(src, tgt),
                        None => return invalid(format!("missing restriction {s:?} -> {t:?}")),
                    };
                    full.insert((s, t.clone()), f);
                }
            }
        }
        let c = CoverData { opens, locals, restrictions: full };
        c.check_coherence()?;
        Ok(c)
    }

    /// Builds every local and restriction from closures.
    pub fn from_fn(opens: usize, local: impl Fn(&[usize]) -> Dgla, restrict: impl Fn(&[usize], &[usize]) -> DglaMorphism) -> Result<CoverData> {
        let mut locals = BTreeMap::new();
        let mut res = BTreeMap::new();
        for n in 0..=TOP {
            for t in subsets(opens, n + 1) {
                if n > 0 {
                    for k in 0..t.len() {
                        let s = without(&t, k);
                        res.insert((s.clone(), t.clone()), restrict(&s, &t));
                    }
                }
                locals.insert(t.clone(), local(&t));
            }
        }
        CoverData::new(opens, locals, res)
    }

    /// `L` on every tuple of the nerve, zero elsewhere; identity restrictions.
    /// `nerve` must be closed under taking sub-tuples.
    pub fn on_nerve(l: &Dgla, opens: usize, nerve: impl Fn(&[usize]) -> bool) -> Result<CoverData> {
        let local = |t: &[usize]| if nerve(t) { l.clone() } else { Dgla::zero() };
        CoverData::from_fn(opens, local, |s, t| {
            if nerve(t) {
                DglaMorphism::identity(l)
            } else {
                DglaMorphism::zero(&local(s), &Dgla::zero())
            }
        })
    }

    /// Constant presheaf `L` on `opens` opens with all intersections nonempty.
    pub fn constant(l: &Dgla, opens: usize) -> Result<CoverData> {
        CoverData::on_nerve(l, opens, |_| true)
    }

    /// Skyscraper at a point lying exactly in the opens listed in `support`.
    pub fn point_sheaf(l: &Dgla, opens: usize, support: &[usize]) -> Result<CoverData> {
        CoverData::on_nerve(l, opens, |t| is_subset(t, support))
    }

    pub fn opens(&self) -> usize {
        self.opens
    }

    pub fn local(&self, t: &[usize]) -> &Dgla {
        &self.locals[t]
    }

    /// Restriction along any inclusion `s ⊆ t`, composed one index at a time.
    pub fn restriction(&self, s: &[usize], t: &[usize]) -> Result<DglaMorphism> {
        if !is_subset(s, t) || !self.locals.contains_key(s) || !self.locals.contains_key(t) {
            return invalid(format!("{s:?} is not a sub-tuple of {t:?}"));
        }
        let mut cur = s.to_vec();
        let mut acc = DglaMorphism::identity(self.local(s));
        for &i in t {
            if cur.contains(&i) {
                continue;
            }
            let mut next = cur.clone();
            next.push(i);
            next.sort_unstable();
            acc = self.restrictions[&(cur, next.clone())].compose(&acc);
            cur = next;
        }
        Ok(acc)
    }

    fn check_coherence(&self) -> Result<()> {
        for t in subsets(self.opens, TOP + 1) {
            for a in 0..t.len() {
                for b in a + 1..t.len() {
                    let (mid1, mid2) = (without(&t, a), without(&t, b));
                    let low = without(&mid1, b - 1);
                    let via1 = self.restrictions[&(mid1.clone(), t.clone())].compose(&self.restrictions[&(low.clone(), mid1)]);
                    let via2 = self.restrictions[&(mid2.clone(), t.clone())].compose(&self.restrictions[&(low.clone(), mid2)]);
                    check(via1 == via2, format!("restrictions from {low:?} to {t:?} do not commute"))?;
                }
            }
        }
        Ok(())
    }

    /// Tuples indexing level `n`, in the order used by `cech_scdgla`.
    pub fn tuples(&self, n: usize) -> Vec<Tuple> {
        subsets(self.opens, n + 1)
    }

    fn level(&self, n: usize) -> (Dgla, Vec<Vec<usize>>) {
        let parts: Vec<&Dgla> = self.tuples(n).iter().map(|t| &self.locals[t]).collect();
        let sum = Dgla::direct_sum(&parts);
        let emb = Dgla::sum_embeddings(&parts, &sum.space);
        (sum, emb)
    }

    /// Component at tuple `t` of a level-`n` element of `g_n ⊗ m_A` (`r = dim m_A`).
    pub fn component(&self, t: &[usize], x: &[Q], r: usize) -> Result<Vec<Q>> {
        let n = t.len().wrapping_sub(1);
        let Some(ti) = self.tuples(n).iter().position(|s| s == t) else {
            return invalid(format!("no tuple {t:?}"));
        };
        let (_, emb) = self.level(n);
        Ok(emb[ti].iter().flat_map(|&i| (0..r).map(move |e| x[i * r + e].clone())).collect())
    }

    /// Inverse of `component`: assembles a level-`n` element from its parts.
    pub fn assemble(&self, n: usize, parts: &BTreeMap<Tuple, Vec<Q>>, r: usize) -> Vec<Q> {
        let (sum, emb) = self.level(n);
        let mut out = vec![Q::zero(); sum.dim() * r];
        for (ti, t) in self.tuples(n).iter().enumerate() {
            if let Some(v) = parts.get(t) {
                for (k, &i) in emb[ti].iter().enumerate() {
                    for e in 0..r {
                        out[i * r + e] = v[k * r + e].clone();
                    }
                }
            }
        }
        out
    }
}

/// Levels `∏ L(U_{i₀…i_n})` for `n ≤ 2`; `∂_k` restricts from the tuple
/// with the `k`-th index omitted.
pub fn cech_scdgla(c: &CoverData) -> Result<ScDgla> {
    let lv: Vec<(Dgla, Vec<Vec<usize>>)> = (0..=TOP).map(|n| c.level(n)).collect();
    let mut cofaces = vec![vec![]];
    for n in 1..=TOP {
        let tgt = c.tuples(n);
        let src = c.tuples(n - 1);
        let mut maps = vec![];
        for k in 0..=n {
            let mut m = Mat::zeros(lv[n].0.dim(), lv[n - 1].0.dim());
            for (ti, t) in tgt.iter().enumerate() {
                let s = without(t, k);
                let si = src.iter().position(|x| *x == s).expect("face of a tuple");
                let f = &c.restrictions[&(s, t.clone())].matrix;
                for (a, &row) in lv[n].1[ti].iter().enumerate() {
                    for (b, &col) in lv[n - 1].1[si].iter().enumerate() {
                        let v = f.get(a, b);
                        if !v.is_zero() {
                            m.set(row, col, v.clone());
                        }
                    }
                }
            }
            maps.push(DglaMorphism { matrix: m });
        }
        cofaces.push(maps);
    }
    ScDgla::new(lv.into_iter().map(|(l, _)| l).collect(), cofaces)
}

/// A refinement `𝒰′ → 𝒰` with one or more refinement functions `I′ → I`
/// and comparison morphisms `L(U_S) → L(U′_T)` for source index sets `S`
/// covering the images of `T`.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub source: CoverData,
    pub target: CoverData,
    pub maps: Vec<Vec<usize>>,
    comparisons: BTreeMap<(Tuple, Tuple), DglaMorphism>,
}

fn check_maps(source: &CoverData, target: &CoverData, maps: &[Vec<usize>]) -> Result<()> {
    if maps.is_empty() {
        return invalid("need at least one refinement function");
    }
    for f in maps {
        if f.len() != target.opens || f.iter().any(|&i| i >= source.opens) {
            return invalid("refinement function has the wrong shape");
        }
    }
    Ok(())
}

fn image_set(maps: &[Vec<usize>], t: &[usize]) -> Tuple {
    let mut s: Tuple = maps.iter().flat_map(|f| t.iter().map(|&i| f[i])).collect();
    s.sort_unstable();
    s.dedup();
    s
}

impl Refinement {
    /// Comparison maps are checked to be morphisms and to commute with the
    /// restrictions of both covers.
    pub fn new(source: CoverData, target: CoverData, maps: Vec<Vec<usize>>, comparisons: BTreeMap<(Tuple, Tuple), DglaMorphism>) -> Result<Refinement> {
        check_maps(&source, &target, &maps)?;
        let mut checked = BTreeMap::new();
        for ((s, t), f) in comparisons {
            if !source.locals.contains_key(&s) || !target.locals.contains_key(&t) {
                return invalid(format!("comparison {s:?} -> {t:?} names an unknown tuple"));
            }
            checked.insert((s.clone(), t.clone()), DglaMorphism::new(source.local(&s), target.local(&t), f.matrix)?);
        }
        let r = Refinement { source, target, maps, comparisons: checked };
        r.check_squares()?;
        Ok(r)
    }

    /// Identity comparisons between equal locals and zero maps into zero
    /// locals, for every target tuple and every source set inside the
    /// images of that tuple.
    pub fn canonical(source: CoverData, target: CoverData, maps: Vec<Vec<usize>>) -> Result<Refinement> {
        check_maps(&source, &target, &maps)?;
        let mut comps = BTreeMap::new();
        for n in 0..=TOP {
            for t in target.tuples(n) {
                let img = image_set(&maps, &t);
                for k in 1..=img.len().min(TOP + 1) {
                    for pick in subsets(img.len(), k) {
                        let s: Tuple = pick.iter().map(|&i| img[i]).collect();
                        let (ls, lt) = (source.local(&s), target.local(&t));
                        if lt.dim() == 0 {
                            comps.insert((s, t.clone()), DglaMorphism::zero(ls, lt));
                        } else if ls == lt {
                            comps.insert((s, t.clone()), DglaMorphism::identity(ls));
                        }
                    }
                }
            }
        }
        Refinement::new(source, target, maps, comps)
    }

    fn check_squares(&self) -> Result<()> {
        for ((s, t), f) in &self.comparisons {
            for ((s2, t2), f2) in &self.comparisons {
                if (s2, t2) == (s, t) || !is_subset(s2, s) || !is_subset(t2, t) {
                    continue;
                }
                let lhs = f.compose(&self.source.restriction(s2, s)?);
                let rhs = self.target.restriction(t2, t)?.compose(f2);
                check(lhs == rhs, format!("comparison square {s2:?}->{s:?}, {t2:?}->{t:?} does not commute"))?;
            }
        }
        Ok(())
    }

    /// Comparison `L(U_S) → L(U′_T)` applied to a tensor element.
    fn compare(&self, s: &[usize], t: &[usize], x: &[Q], r: usize) -> Result<Vec<Q>> {
        match self.comparisons.get(&(s.to_vec(), t.to_vec())) {
            Some(f) => Ok(f.apply_tensor(x, r, &Q::zero())),
            None => invalid(format!("no comparison map {s:?} -> {t:?}")),
        }
    }
}

fn contexts(r: &Refinement, a: &Arc<ArtinAlgebra>) -> Result<(H1Ctx, H1Ctx)> {
    let hs = H1Ctx::new(Arc::new(cech_scdgla(&r.source)?), a.clone())?;
    let ht = H1Ctx::new(Arc::new(cech_scdgla(&r.target)?), a.clone())?;
    Ok((hs, ht))
}

/// `m_{ij}` for any ordered pair, with `m_{ii} = 0` and `m_{ji} = −m_{ij}`,
/// together with the sorted tuple it lives on.
fn m_entry(src: &CoverData, m: &[Q], i: usize, j: usize, r: usize) -> Result<(Tuple, Vec<Q>)> {
    if i == j {
        return Ok((vec![i], vec![Q::zero(); src.local(&[i]).dim() * r]));
    }
    let t = vec![i.min(j), i.max(j)];
    let v = src.component(&t, m, r)?;
    Ok((t, if i < j { v } else { v.iter().map(|c| -c).collect() }))
}

fn refine_with(r: &Refinement, f: &[usize], hs: &H1Ctx, ht: &H1Ctx, z: (&[Q], &[Q])) -> Result<Z1Element> {
    let ra = hs.r();
    z1_member(hs, z.0, z.1)?;
    let (src, tgt) = (&r.source, &r.target);
    let mut l = BTreeMap::new();
    for t in tgt.tuples(0) {
        let s = vec![f[t[0]]];
        l.insert(t.clone(), r.compare(&s, &t, &src.component(&s, z.0, ra)?, ra)?);
    }
    let mut m = BTreeMap::new();
    for t in tgt.tuples(1) {
        let (s, v) = m_entry(src, z.1, f[t[0]], f[t[1]], ra)?;
        let v = if s.len() == 1 { vec![Q::zero(); tgt.local(&t).dim() * ra] } else { r.compare(&s, &t, &v, ra)? };
        m.insert(t, v);
    }
    let l = tgt.assemble(0, &l, ra);
    let m = tgt.assemble(1, &m, ra);
    z1_member(ht, &l, &m)
}

/// `ρ_φ(l, m) = (l_{φα}|_{U′_α}, m_{φα,φβ}|_{U′_{αβ}})`, using the
/// refinement function `r.maps[which]`; the image is checked to be a cocycle.
pub fn refinement_map(r: &Refinement, which: usize, a: &Arc<ArtinAlgebra>, z: (&[Q], &[Q])) -> Result<Z1Element> {
    let Some(f) = r.maps.get(which) else {
        return invalid("no such refinement function");
    };
    let (hs, ht) = contexts(r, a)?;
    refine_with(r, f, &hs, &ht, z)
}

/// Witness for `ρ_φ(z) ~ ρ_ψ(z)` with `a_α = m_{ψα,φα}|_{U′_α}` and `b`
/// solved linearly; fails loudly if the witness does not check.
pub fn refinement_independence(r: &Refinement, phi: usize, psi: usize, a: &Arc<ArtinAlgebra>, z: (&[Q], &[Q])) -> Result<EquivWitness> {
    let (Some(f), Some(g)) = (r.maps.get(phi), r.maps.get(psi)) else {
        return invalid("no such refinement function");
    };
    let (hs, ht) = contexts(r, a)?;
    let ra = hs.r();
    let z0 = refine_with(r, f, &hs, &ht, z)?;
    let z1 = refine_with(r, g, &hs, &ht, z)?;
    let mut parts = BTreeMap::new();
    for t in r.target.tuples(0) {
        let (s, v) = m_entry(&r.source, z.1, g[t[0]], f[t[0]], ra)?;
        let v = if s.len() == 1 { vec![Q::zero(); r.target.local(&t).dim() * ra] } else { r.compare(&s, &t, &v, ra)? };
        parts.insert(t, v);
    }
    let av = r.target.assemble(0, &parts, ra);
    let w = complete_witness(&ht, z0.pair(), z1.pair(), &av)
        .ok_or_else(|| Error::Check("refinement witness a_α = m_{ψα,φα} does not relate the two restrictions".into()))?;
    check(check_witness(&ht, z0.pair(), z1.pair(), &w), "refinement witness fails")?;
    Ok(w)
}

/// Per-degree comparison of `H^j(g_{−1})` with `H^j(Tot(g))` for `j = 0, 1, 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalSectionsReport {
    pub base: Vec<usize>,
    pub tot: Vec<usize>,
    pub iso: Vec<bool>,
}

impl GlobalSectionsReport {
    pub fn all_iso(&self) -> bool {
        self.iso.iter().all(|&b| b)
    }
}

/// Whether `x ↦ (∂_{0,0}x, 0, …)` induces isomorphisms `H^j(g_{−1}) → H^j(Tot(g))`.
pub fn global_sections_compare(ag: &AugmentedScDgla) -> GlobalSectionsReport {
    let base = ag.base.complex();
    let (tot, lay): (_, TotLayout) = tot_complex(&ag.rest);
    let mut out = GlobalSectionsReport { base: vec![], tot: vec![], iso: vec![] };
    for j in 0..=2 {
        let mut f = Mat::zeros(lay.dim(j), ag.base.dim());
        if let Some(b) = lay.basis.get(&j) {
            for (row, &(lvl, idx)) in b.iter().enumerate() {
                if lvl == 0 {
                    for col in 0..ag.base.dim() {
                        f.set(row, col, ag.aug.matrix.get(idx, col).clone());
                    }
                }
            }
        }
        // restrict the columns to base degree j
        let cols: Vec<Vec<Q>> = ag.base.range(j).map(|c| f.col(c)).collect();
        let fj = Mat::from_cols(lay.dim(j), &cols);
        let (inj, surj) = induced_on_cohomology(&base, &tot, &fj, j);
        out.base.push(base.h_dim(j));
        out.tot.push(tot.h_dim(j));
        out.iso.push(inj && surj);
    }
    out
}

/// Augments a Čech object by global sections `L(X)` with restrictions to each open.
pub fn augment_cover(c: &CoverData, global: Dgla, to_opens: &[DglaMorphism]) -> Result<AugmentedScDgla> {
    let g = cech_scdgla(c)?;
    if to_opens.len() != c.opens {
        return invalid("need one restriction per open");
    }
    let (sum, emb) = c.level(0);
    let mut m = Mat::zeros(sum.dim(), global.dim());
    for (i, f) in to_opens.iter().enumerate() {
        let f = DglaMorphism::new(&global, c.local(&[i]), f.matrix.clone())?;
        for (a, &row) in emb[i].iter().enumerate() {
            for col in 0..global.dim() {
                m.set(row, col, f.matrix.get(a, col).clone());
            }
        }
    }
    AugmentedScDgla::new(global, g, DglaMorphism { matrix: m })
}

#[cfg(test)]
mod tests;
