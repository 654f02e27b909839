//! DGLAs with exact structure constants and the Maurer-Cartan calculus over
//! Artin rings.

mod calculus;
mod coef;
mod ctx;
mod ops;
mod path;
pub mod random;

pub use calculus::{ad_exp, bch, bch_many, decompose, gauge, mc_defect};
pub use coef::Coef;
pub use ctx::{LieCtx, TensorCtx};
pub(crate) use ops::extract_witness;
pub use ops::{
    degree_basis, lift_through, project_through, solve_in_span, gauge_equiv_decide, gauge_group_law_check, homotopy_path_dgla, irrelevant_stabilizer_membership,
    obstruction_class, solve_order_by_order, splitting_homotopy, tangent_space, twisted, GaugeDecision,
    Obstruction, PathDgla, Splitting, TwistedDgla,
};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{check, invalid, Result};
use crate::exactalg::{Mat, Q};
use crate::graded::{Complex, GradedMap, GradedSpace};

/// Sparse vector: `(index, coefficient)` pairs.
pub type Sparse = Vec<(usize, Q)>;

/// A finite-dimensional DGLA on a flat basis ordered by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dgla {
    pub space: GradedSpace,
    degs: Vec<i32>,
    d: Mat,
    br: Vec<Vec<Sparse>>,
}

/// One structure constant `[e_a, e_b] += c · e_out`, indices within degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketEntry {
    pub deg_a: i32,
    pub idx_a: usize,
    pub deg_b: i32,
    pub idx_b: usize,
    pub idx_out: usize,
    pub coeff: Q,
}

impl BracketEntry {
    pub fn new(deg_a: i32, idx_a: usize, deg_b: i32, idx_b: usize, idx_out: usize, coeff: Q) -> BracketEntry {
        BracketEntry { deg_a, idx_a, deg_b, idx_b, idx_out, coeff }
    }
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::from_integer(1.into())
    } else {
        Q::from_integer(1.into())
    }
}

fn odd(x: i32) -> bool {
    x.rem_euclid(2) == 1
}

impl Dgla {
    /// Builds a DGLA from a differential and bracket entries; the bracket is
    /// completed by graded antisymmetry. All axioms are checked.
    pub fn new(space: GradedSpace, d: &GradedMap, entries: &[BracketEntry]) -> Result<Dgla> {
        if d.shift != 1 {
            return invalid("differential must have shift 1");
        }
        let n = space.total_dim();
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        let mut given: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for e in entries {
            if e.idx_a >= space.dim(e.deg_a) || e.idx_b >= space.dim(e.deg_b) || e.idx_out >= space.dim(e.deg_a + e.deg_b) {
                return invalid("bracket entry index out of range");
            }
            let a = space.offset(e.deg_a) + e.idx_a;
            let b = space.offset(e.deg_b) + e.idx_b;
            let o = space.offset(e.deg_a + e.deg_b) + e.idx_out;
            *given.entry((a, b)).or_default().entry(o).or_insert_with(Q::zero) += &e.coeff;
        }
        let degs = space.flat_degrees();
        for ((a, b), outs) in &given {
            let s = -sign(odd(degs[*a]) && odd(degs[*b]));
            let mirror = a != b && !given.contains_key(&(*b, *a));
            for (o, c) in outs {
                *table.entry((*a, *b)).or_default().entry(*o).or_insert_with(Q::zero) += c;
                if mirror {
                    *table.entry((*b, *a)).or_default().entry(*o).or_insert_with(Q::zero) += &s * c;
                }
            }
        }
        let mut br = vec![vec![Vec::new(); n]; n];
        for ((a, b), outs) in table {
            br[a][b] = outs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        Dgla::from_parts(space, d.flat(), br)
    }

    /// Shorthand constructor: `dims` per degree, differential entries
    /// `(deg, source idx, target idx in deg+1, coeff)` and bracket entries.
    pub fn build(dims: &[(i32, usize)], d: &[(i32, usize, usize, Q)], entries: &[BracketEntry]) -> Result<Dgla> {
        let space = GradedSpace::new(dims.iter().copied());
        let mut blocks: BTreeMap<i32, Mat> = BTreeMap::new();
        for (j, s, t, c) in d {
            if *s >= space.dim(*j) || *t >= space.dim(j + 1) {
                return invalid("differential entry index out of range");
            }
            let m = blocks.entry(*j).or_insert_with(|| Mat::zeros(space.dim(j + 1), space.dim(*j)));
            m.set(*t, *s, m.get(*t, *s) + c);
        }
        let dm = GradedMap::new(space.clone(), space.clone(), 1, blocks)?;
        Dgla::new(space, &dm, entries)
    }

    /// Builds from a flat differential and a full bracket table, checking axioms.
    pub fn from_parts(space: GradedSpace, d: Mat, br: Vec<Vec<Sparse>>) -> Result<Dgla> {
        let dg = Dgla::from_parts_unchecked(space, d, br)?;
        dg.check_axioms()?;
        Ok(dg)
    }

    pub(crate) fn from_parts_unchecked(space: GradedSpace, d: Mat, br: Vec<Vec<Sparse>>) -> Result<Dgla> {
        let n = space.total_dim();
        if d.rows != n || d.cols != n || br.len() != n || br.iter().any(|r| r.len() != n) {
            return invalid("structure has wrong size");
        }
        let degs = space.flat_degrees();
        for i in 0..n {
            for j in 0..n {
                if !d.get(i, j).is_zero() && degs[i] != degs[j] + 1 {
                    return invalid("differential does not raise degree by one");
                }
                for (k, _) in &br[i][j] {
                    if degs[*k] != degs[i] + degs[j] {
                        return invalid("bracket is not graded");
                    }
                }
            }
        }
        Ok(Dgla { space, degs, d, br })
    }

    pub fn zero() -> Dgla {
        Dgla { space: GradedSpace::default(), degs: vec![], d: Mat::zeros(0, 0), br: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.degs.len()
    }

    pub fn deg(&self, i: usize) -> i32 {
        self.degs[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degs
    }

    /// Flat indices of the basis vectors of degree `j`.
    pub fn range(&self, j: i32) -> std::ops::Range<usize> {
        let o = self.space.offset(j);
        o..o + self.space.dim(j)
    }

    pub fn d_matrix(&self) -> &Mat {
        &self.d
    }

    /// `d` restricted to degree `j`, as a matrix `L^j → L^{j+1}`.
    pub fn d_block(&self, j: i32) -> Mat {
        let (s, t) = (self.range(j), self.range(j + 1));
        let mut m = Mat::zeros(t.len(), s.len());
        for (r, ti) in t.clone().enumerate() {
            for (c, si) in s.clone().enumerate() {
                m.set(r, c, self.d.get(ti, si).clone());
            }
        }
        m
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &Sparse {
        &self.br[i][j]
    }

    pub fn is_abelian(&self) -> bool {
        self.br.iter().all(|r| r.iter().all(|s| s.is_empty()))
    }

    pub fn d_vec(&self, x: &[Q]) -> Vec<Q> {
        self.d.mul_vec(x)
    }

    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || self.br[i][j].is_empty() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, t) in &self.br[i][j] {
                    out[k.to_owned()] += &c * t;
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::from_integer(1.into());
        v
    }

    /// d² = 0, graded antisymmetry, Jacobi and Leibniz on basis triples.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.dim();
        if !self.d.mul(&self.d).is_zero() {
            return Err(crate::Error::NotADifferential);
        }
        let units: Vec<Vec<Q>> = (0..n).map(|i| self.unit(i)).collect();
        let dunits: Vec<Vec<Q>> = units.iter().map(|u| self.d_vec(u)).collect();
        let brs: Vec<Vec<Vec<Q>>> =
            (0..n).map(|i| (0..n).map(|j| self.bracket_vec(&units[i], &units[j])).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (self.degs[a], self.degs[b]);
                let anti: Vec<Q> = brs[b][a].iter().map(|x| x * sign(odd(da) && odd(db))).collect();
                check(brs[a][b].iter().zip(&anti).all(|(x, y)| (x + y).is_zero()), format!("antisymmetry fails on ({a},{b})"))?;
                let lhs = self.d_vec(&brs[a][b]);
                let t1 = self.bracket_vec(&dunits[a], &units[b]);
                let t2 = self.bracket_vec(&units[a], &dunits[b]);
                let s = sign(odd(da));
                check(
                    lhs.iter().zip(t1.iter().zip(&t2)).all(|(l, (x, y))| *l == x + &s * y),
                    format!("Leibniz fails on ({a},{b})"),
                )?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if brs[a][b].iter().all(|x| x.is_zero()) && (0..n).all(|c| brs[b][c].iter().all(|x| x.is_zero())) {
                    continue;
                }
                for c in 0..n {
                    let (da, db) = (self.degs[a], self.degs[b]);
                    let lhs = self.bracket_vec(&units[a], &brs[b][c]);
                    let r1 = self.bracket_vec(&brs[a][b], &units[c]);
                    let r2 = self.bracket_vec(&units[b], &brs[a][c]);
                    let s = sign(odd(da) && odd(db));
                    check(
                        lhs.iter().zip(r1.iter().zip(&r2)).all(|(l, (x, y))| *l == x + &s * y),
                        format!("Jacobi fails on ({a},{b},{c})"),
                    )?;
                }
            }
        }
        Ok(())
    }

    /// The underlying cochain complex over the full degree range.
    pub fn complex(&self) -> Complex {
        let (Some(lo), Some(hi)) = (self.space.min_degree(), self.space.max_degree()) else {
            return Complex::new(0, vec![0], vec![]).unwrap();
        };
        let dims: Vec<usize> = (lo..=hi).map(|j| self.space.dim(j)).collect();
        let ds: Vec<Mat> = (lo..hi).map(|j| self.d_block(j)).collect();
        Complex::new(lo, dims, ds).expect("d^2 = 0 was checked")
    }

    pub fn cohomology_dim(&self, j: i32) -> usize {
        self.complex().h_dim(j)
    }

    /// Structure constants as entries (only `a <= b` pairs are listed).
    pub fn bracket_entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in a..self.dim() {
                for (o, c) in &self.br[a][b] {
                    let (da, db) = (self.degs[a], self.degs[b]);
                    out.push(BracketEntry {
                        deg_a: da,
                        idx_a: a - self.space.offset(da),
                        deg_b: db,
                        idx_b: b - self.space.offset(db),
                        idx_out: o - self.space.offset(da + db),
                        coeff: c.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn d_graded(&self) -> GradedMap {
        GradedMap::from_flat(self.space.clone(), self.space.clone(), 1, &self.d).expect("graded")
    }

    /// Direct sum (product) of DGLAs.
    pub fn direct_sum(parts: &[&Dgla]) -> Dgla {
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for p in parts {
            for (&j, &k) in &p.space.dims {
                *dims.entry(j).or_default() += k;
            }
        }
        let space = GradedSpace::new(dims);
        let embeds = Dgla::sum_embeddings(parts, &space);
        let n = space.total_dim();
        let mut d = Mat::zeros(n, n);
        let mut br = vec![vec![Vec::new(); n]; n];
        for (p, emb) in parts.iter().zip(&embeds) {
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    let v = p.d.get(j, i);
                    if !v.is_zero() {
                        d.set(emb[j], emb[i], v.clone());
                    }
                    br[emb[i]][emb[j]] = p.br[i][j].iter().map(|(k, c)| (emb[*k], c.clone())).collect();
                }
            }
        }
        Dgla::from_parts_unchecked(space, d, br).expect("sum of DGLAs")
    }

    /// Flat index maps of each summand into the direct sum.
    pub fn sum_embeddings(parts: &[&Dgla], space: &GradedSpace) -> Vec<Vec<usize>> {
        let mut used: BTreeMap<i32, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for p in parts {
            let mut emb = vec![0; p.dim()];
            for (&j, &k) in &p.space.dims {
                let u = used.entry(j).or_default();
                for t in 0..k {
                    emb[p.space.offset(j) + t] = space.offset(j) + *u + t;
                }
                *u += k;
            }
            out.push(emb);
        }
        out
    }
}

/// A degree-preserving linear map between DGLAs on flat bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DglaMorphism {
    pub matrix: Mat,
}

impl DglaMorphism {
    pub fn new(src: &Dgla, tgt: &Dgla, matrix: Mat) -> Result<DglaMorphism> {
        if matrix.rows != tgt.dim() || matrix.cols != src.dim() {
            return invalid("morphism has wrong shape");
        }
        for r in 0..matrix.rows {
            for c in 0..matrix.cols {
                if !matrix.get(r, c).is_zero() && tgt.deg(r) != src.deg(c) {
                    return invalid("morphism does not preserve degree");
                }
            }
        }
        let f = DglaMorphism { matrix };
        f.check(src, tgt)?;
        Ok(f)
    }

    pub fn zero(src: &Dgla, tgt: &Dgla) -> DglaMorphism {
        DglaMorphism { matrix: Mat::zeros(tgt.dim(), src.dim()) }
    }

    pub fn identity(l: &Dgla) -> DglaMorphism {
        DglaMorphism { matrix: Mat::identity(l.dim()) }
    }

    pub fn compose(&self, first: &DglaMorphism) -> DglaMorphism {
        DglaMorphism { matrix: self.matrix.mul(&first.matrix) }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(x)
    }

    /// Commutes with `d` and brackets.
    pub fn check(&self, src: &Dgla, tgt: &Dgla) -> Result<()> {
        check(self.matrix.mul(src.d_matrix()) == tgt.d_matrix().mul(&self.matrix), "morphism does not commute with d")?;
        let n = src.dim();
        for a in 0..n {
            for b in a..n {
                let (ua, ub) = (src.unit(a), src.unit(b));
                let lhs = self.apply(&src.bracket_vec(&ua, &ub));
                let rhs = tgt.bracket_vec(&self.apply(&ua), &self.apply(&ub));
                check(lhs == rhs, "morphism does not preserve brackets")?;
            }
        }
        Ok(())
    }

    /// Apply to an element of `L ⊗ m_A` stored with index `i*r + e`.
    pub fn apply_tensor<S: Coef>(&self, x: &[S], r: usize, zero: &S) -> Vec<S> {
        let (rows, cols) = (self.matrix.rows, self.matrix.cols);
        let mut out = vec![zero.clone(); rows * r];
        for i in 0..rows {
            for j in 0..cols {
                let c = self.matrix.get(i, j);
                if c.is_zero() {
                    continue;
                }
                for e in 0..r {
                    let v = &x[j * r + e];
                    if !v.is_nil() {
                        out[i * r + e] = out[i * r + e].plus(&v.scaled(c));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
