use num_traits::{One, Zero};

use super::scalar::Q;
use crate::error::{invalid, Error, Result};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return invalid("ragged matrix");
        }
        Ok(Mat { rows: r, cols: c, data: rows.concat() })
    }

    /// Matrix whose columns are the given vectors, with `rows` rows.
    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Mat {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i].clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = m.get(r, j);
                    if sub.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * sub;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
            for x in v.iter_mut() {
                *x /= &lead;
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a maximal linearly independent subset of the columns.
    pub fn independent_cols(&self) -> Vec<usize> {
        self.rref().1
    }
}

/// A linear system `matrix * x = rhs`.
#[derive(Debug, Clone)]
pub struct LinSystem {
    pub matrix: Mat,
    pub rhs: Vec<Q>,
}

impl LinSystem {
    pub fn new(matrix: Mat, rhs: Vec<Q>) -> Result<LinSystem> {
        if matrix.rows != rhs.len() {
            return invalid("row count and rhs length differ");
        }
        Ok(LinSystem { matrix, rhs })
    }
}

/// Particular solution plus kernel basis, or `None` if inconsistent.
/// The particular solution has zero free variables.
pub fn solve_linear(sys: &LinSystem) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let a = &sys.matrix;
    let n = a.cols;
    let aug = a.hstack(&Mat::from_cols(a.rows, &[sys.rhs.clone()]));
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, n).clone();
    }
    debug_assert_eq!(a.mul_vec(&x), sys.rhs);
    Some((x, a.kernel()))
}

/// `(dim ker d_out, rank d_in, dim H)` for `d_out ∘ d_in = 0`.
pub fn cohomology_dims(d_in: &Mat, d_out: &Mat) -> Result<(usize, usize, usize)> {
    if d_in.rows != d_out.cols {
        return invalid("differentials are not composable");
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let ker = d_out.cols - d_out.rank();
    let im = d_in.rank();
    Ok((ker, im, ker - im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn solve_identity_case() {
        let s = LinSystem::new(m(&[&[1]]), vec![q(0)]).unwrap();
        let (x, k) = solve_linear(&s).unwrap();
        assert_eq!(x, vec![q(0)]);
        assert!(k.is_empty());
    }

    #[test]
    fn solve_underdetermined() {
        let s = LinSystem::new(m(&[&[1, 1]]), vec![q(1)]).unwrap();
        let (x, k) = solve_linear(&s).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
        assert_eq!(k, vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn solve_inconsistent() {
        let s = LinSystem::new(m(&[&[1], &[1]]), vec![q(0), q(1)]).unwrap();
        assert!(solve_linear(&s).is_none());
    }

    #[test]
    fn cohomology_dims_examples() {
        assert_eq!(cohomology_dims(&m(&[&[0]]), &m(&[&[0]])).unwrap(), (1, 0, 1));
        assert_eq!(cohomology_dims(&m(&[&[1]]), &m(&[&[0]])).unwrap(), (1, 1, 0));
        assert_eq!(cohomology_dims(&m(&[&[1], &[1]]), &m(&[&[1, -1]])).unwrap(), (1, 1, 0));
        assert_eq!(
            cohomology_dims(&m(&[&[1]]), &m(&[&[1]])),
            Err(Error::CompositionNonzero)
        );
    }
}
