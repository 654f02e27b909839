//! Finite-dimensional ℤ-graded spaces, graded maps and cochain complexes.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::artin::ArtinAlgebra;
use crate::error::{invalid, Error, Result};
use crate::exactalg::{Mat, Q};

/// Dimensions per degree; absent degrees have dimension zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    pub dims: BTreeMap<i32, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i32, usize)>) -> GradedSpace {
        GradedSpace { dims: dims.into_iter().filter(|(_, n)| *n > 0).collect() }
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.dims.get(&deg).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Position of the first basis vector of degree `deg` in the flat basis
    /// (degrees in increasing order).
    pub fn offset(&self, deg: i32) -> usize {
        self.dims.range(..deg).map(|(_, n)| n).sum()
    }

    /// Degree of every flat basis vector.
    pub fn flat_degrees(&self) -> Vec<i32> {
        self.dims.iter().flat_map(|(&d, &n)| std::iter::repeat(d).take(n)).collect()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }
}

/// Tensor with `m_A`: dimensions multiply by `dim m_A`.
pub fn tensor_artin(space: &GradedSpace, a: &ArtinAlgebra) -> Result<GradedSpace> {
    if a.dim() == 0 {
        return invalid("m_A basis must be nonempty");
    }
    Ok(GradedSpace::new(space.dims.iter().map(|(&d, &n)| (d, n * a.dim()))))
}

/// Per-degree blocks `source^j → target^{j+shift}`; missing blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub shift: i32,
    pub blocks: BTreeMap<i32, Mat>,
}

impl GradedMap {
    pub fn new(source: GradedSpace, target: GradedSpace, shift: i32, blocks: BTreeMap<i32, Mat>) -> Result<GradedMap> {
        for (&j, m) in &blocks {
            if m.cols != source.dim(j) || m.rows != target.dim(j + shift) {
                return invalid(format!("block in degree {j} has wrong shape"));
            }
        }
        Ok(GradedMap { source, target, shift, blocks })
    }

    pub fn zero(source: GradedSpace, target: GradedSpace, shift: i32) -> GradedMap {
        GradedMap { source, target, shift, blocks: BTreeMap::new() }
    }

    pub fn block(&self, j: i32) -> Mat {
        self.blocks
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.target.dim(j + self.shift), self.source.dim(j)))
    }

    /// The map on flat bases.
    pub fn flat(&self) -> Mat {
        let mut m = Mat::zeros(self.target.total_dim(), self.source.total_dim());
        for (&j, b) in &self.blocks {
            let (r0, c0) = (self.target.offset(j + self.shift), self.source.offset(j));
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
        }
        m
    }

    /// Builds the block form of a flat matrix that respects the grading.
    pub fn from_flat(source: GradedSpace, target: GradedSpace, shift: i32, m: &Mat) -> Result<GradedMap> {
        let sd = source.flat_degrees();
        let td = target.flat_degrees();
        let mut blocks = BTreeMap::new();
        for (&j, &n) in &source.dims {
            let tn = target.dim(j + shift);
            let (r0, c0) = (target.offset(j + shift), source.offset(j));
            let mut b = Mat::zeros(tn, n);
            for r in 0..tn {
                for c in 0..n {
                    b.set(r, c, m.get(r0 + r, c0 + c).clone());
                }
            }
            if !b.is_zero() {
                blocks.insert(j, b);
            }
        }
        for r in 0..m.rows {
            for c in 0..m.cols {
                if !m.get(r, c).is_zero() && td[r] != sd[c] + shift {
                    return invalid("matrix does not have the stated shift");
                }
            }
        }
        GradedMap::new(source, target, shift, blocks)
    }
}

/// Homogeneous element: `coeffs[i][e]` is the coefficient of basis vector
/// `i` of the given degree tensored with ideal basis vector `e` (a single
/// column for ℚ coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    pub degree: i32,
    pub coeffs: Vec<Vec<Q>>,
}

impl GradedElement {
    pub fn from_rational(degree: i32, v: &[Q]) -> GradedElement {
        GradedElement { degree, coeffs: v.iter().map(|x| vec![x.clone()]).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|x| x.is_zero())
    }
}

/// Cochain complex `C^lo → … → C^hi` with `d[j-lo]: C^j → C^{j+1}`.
#[derive(Debug, Clone)]
pub struct Complex {
    pub lo: i32,
    pub dims: Vec<usize>,
    pub d: Vec<Mat>,
}

impl Complex {
    pub fn new(lo: i32, dims: Vec<usize>, d: Vec<Mat>) -> Result<Complex> {
        if d.len() + 1 != dims.len() && !(dims.is_empty() && d.is_empty()) {
            return invalid("need one differential between consecutive degrees");
        }
        for (k, m) in d.iter().enumerate() {
            if m.cols != dims[k] || m.rows != dims[k + 1] {
                return invalid("differential shape mismatch");
            }
            if k > 0 && !m.mul(&d[k - 1]).is_zero() {
                return Err(Error::NotADifferential);
            }
        }
        Ok(Complex { lo, dims, d })
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, j: i32) -> usize {
        if j < self.lo || j > self.hi() {
            0
        } else {
            self.dims[(j - self.lo) as usize]
        }
    }

    /// `d: C^j → C^{j+1}` (zero matrix outside the stored range).
    pub fn diff(&self, j: i32) -> Mat {
        if j >= self.lo && j < self.hi() {
            self.d[(j - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.dim(j + 1), self.dim(j))
        }
    }

    pub fn cocycles(&self, j: i32) -> Vec<Vec<Q>> {
        self.diff(j).kernel()
    }

    pub fn coboundary_rank(&self, j: i32) -> usize {
        self.diff(j - 1).rank()
    }

    pub fn h_dim(&self, j: i32) -> usize {
        self.cocycles(j).len() - self.coboundary_rank(j)
    }

    /// Cocycles whose classes form a basis of `H^j`.
    pub fn representatives(&self, j: i32) -> Vec<Vec<Q>> {
        let n = self.dim(j);
        let dm = self.diff(j - 1);
        let mut cols: Vec<Vec<Q>> = (0..dm.cols).map(|c| dm.col(c)).collect();
        let base = Mat::from_cols(n, &cols).rank();
        let mut reps = Vec::new();
        let mut rank = base;
        for z in self.cocycles(j) {
            cols.push(z.clone());
            let r = Mat::from_cols(n, &cols).rank();
            if r > rank {
                rank = r;
                reps.push(z);
            } else {
                cols.pop();
            }
        }
        reps
    }
}

/// Cohomology of a graded space with a degree-1 differential: dimension and
/// representatives per degree.
pub fn complex_cohomology(space: &GradedSpace, d: &GradedMap) -> Result<BTreeMap<i32, (usize, Vec<GradedElement>)>> {
    if d.shift != 1 {
        return invalid("differential must have shift 1");
    }
    let c = complex_of(space, d)?;
    let mut out = BTreeMap::new();
    for &j in space.dims.keys() {
        let reps = c.representatives(j);
        out.insert(j, (reps.len(), reps.iter().map(|v| GradedElement::from_rational(j, v)).collect()));
    }
    Ok(out)
}

pub(crate) fn complex_of(space: &GradedSpace, d: &GradedMap) -> Result<Complex> {
    let (Some(lo), Some(hi)) = (space.min_degree(), space.max_degree()) else {
        return Complex::new(0, vec![], vec![]);
    };
    let dims: Vec<usize> = (lo..=hi).map(|j| space.dim(j)).collect();
    let ds: Vec<Mat> = (lo..hi).map(|j| d.block(j)).collect();
    Complex::new(lo, dims, ds)
}

/// Whether a chain map `f` (per-degree matrices `f(j)`) is injective /
/// surjective on `H^j`.
pub fn induced_on_cohomology(src: &Complex, tgt: &Complex, f: &Mat, j: i32) -> (bool, bool) {
    let zs = src.cocycles(j);
    let zt = tgt.cocycles(j);
    let bt = tgt.diff(j - 1);
    let bs_rank = src.coboundary_rank(j);
    let nt = tgt.dim(j);
    // surjective: f(Z_s) + B_t = Z_t
    let mut cols: Vec<Vec<Q>> = zs.iter().map(|z| f.mul_vec(z)).collect();
    cols.extend((0..bt.cols).map(|c| bt.col(c)));
    let surj = Mat::from_cols(nt, &cols).rank() == zt.len();
    // injective: {z ∈ Z_s : f z ∈ B_t} has dimension rank B_s
    let nz = zs.len();
    let mut sys_cols: Vec<Vec<Q>> = zs.iter().map(|z| f.mul_vec(z)).collect();
    sys_cols.extend((0..bt.cols).map(|c| bt.col(c).iter().map(|x| -x.clone()).collect()));
    let sys = Mat::from_cols(nt, &sys_cols);
    let ker = sys.kernel();
    let ns = src.dim(j);
    let preimages: Vec<Vec<Q>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![Q::zero(); ns];
            for (c, z) in k.iter().take(nz).zip(&zs) {
                for (vi, zi) in v.iter_mut().zip(z) {
                    *vi += c * zi;
                }
            }
            v
        })
        .collect();
    let inj = Mat::from_cols(ns, &preimages).rank() == bs_rank;
    (inj, surj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::make_dual_numbers;
    use crate::exactalg::q;

    fn qm(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_differential() {
        let s = GradedSpace::new([(0, 2)]);
        let d = GradedMap::zero(s.clone(), s.clone(), 1);
        assert_eq!(complex_cohomology(&s, &d).unwrap()[&0].0, 2);
    }

    #[test]
    fn exact_pair() {
        let s = GradedSpace::new([(0, 1), (1, 1)]);
        let d = GradedMap::new(s.clone(), s.clone(), 1, [(0, qm(&[&[1]]))].into()).unwrap();
        let h = complex_cohomology(&s, &d).unwrap();
        assert_eq!((h[&0].0, h[&1].0), (0, 0));
    }

    #[test]
    fn three_term() {
        let s = GradedSpace::new([(-1, 1), (0, 2), (1, 1)]);
        let d = GradedMap::new(
            s.clone(),
            s.clone(),
            1,
            [(-1, qm(&[&[1], &[0]])), (0, qm(&[&[0, 1]]))].into(),
        )
        .unwrap();
        let h = complex_cohomology(&s, &d).unwrap();
        assert_eq!((h[&-1].0, h[&0].0, h[&1].0), (0, 0, 0));
    }

    #[test]
    fn not_a_differential() {
        let s = GradedSpace::new([(0, 1), (1, 1), (2, 1)]);
        let d = GradedMap::new(s.clone(), s.clone(), 1, [(0, qm(&[&[1]])), (1, qm(&[&[1]]))].into()).unwrap();
        assert_eq!(complex_cohomology(&s, &d), Err(Error::NotADifferential));
    }

    #[test]
    fn tensor_dims() {
        let a2 = make_dual_numbers(2).unwrap();
        let a3 = make_dual_numbers(3).unwrap();
        assert_eq!(tensor_artin(&GradedSpace::new([(0, 3)]), &a2).unwrap().dims, GradedSpace::new([(0, 3)]).dims);
        assert_eq!(
            tensor_artin(&GradedSpace::new([(0, 1), (1, 2)]), &a3).unwrap(),
            GradedSpace::new([(0, 2), (1, 4)])
        );
    }

    #[test]
    fn induced_identity() {
        let c = Complex::new(0, vec![1, 1], vec![qm(&[&[0]])]).unwrap();
        assert_eq!(induced_on_cohomology(&c, &c, &Mat::identity(1), 0), (true, true));
        assert_eq!(induced_on_cohomology(&c, &c, &Mat::zeros(1, 1), 0), (false, false));
    }
}
