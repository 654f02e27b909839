//! Local Artinian algebras `(A, m_A)` over ℚ, stored through `m_A`.

use num_traits::{One, Zero};

use crate::error::{check, invalid, Result};
use crate::exactalg::{q, Mat, Q};

/// `m_A` with a basis and a multiplication table; `A = ℚ ⊕ m_A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinAlgebra {
    pub names: Vec<String>,
    /// `table[i][j]` is the coordinate vector of `e_i * e_j`.
    pub table: Vec<Vec<Vec<Q>>>,
    nilpotency: usize,
}

impl ArtinAlgebra {
    pub fn new(names: Vec<String>, table: Vec<Vec<Vec<Q>>>) -> Result<ArtinAlgebra> {
        let r = names.len();
        if r == 0 {
            return invalid("maximal ideal basis must be nonempty");
        }
        if table.len() != r || table.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
            return invalid("product table has wrong shape");
        }
        let mut a = ArtinAlgebra { names, table, nilpotency: 0 };
        for i in 0..r {
            for j in 0..r {
                check(a.table[i][j] == a.table[j][i], format!("product not commutative on ({i},{j})"))?;
                for k in 0..r {
                    let lhs = a.mul(&a.table[i][j], &a.basis(k));
                    let rhs = a.mul(&a.basis(i), &a.table[j][k]);
                    check(lhs == rhs, format!("product not associative on ({i},{j},{k})"))?;
                }
            }
        }
        let powers = a.powers();
        match powers.iter().position(|p| p.is_empty()) {
            Some(k) if k + 1 <= r + 1 => a.nilpotency = k + 1,
            _ => return invalid("maximal ideal is not nilpotent"),
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Smallest `N` with `m_A^N = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    pub fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.dim()]
    }

    /// Product of two elements of `m_A`.
    pub fn mul(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let r = self.dim();
        let mut out = vec![Q::zero(); r];
        for i in 0..r {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    pub fn multiply(&self, u: &[Q], v: &[Q]) -> Result<Vec<Q>> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return invalid("basis length mismatch");
        }
        Ok(self.mul(u, v))
    }

    /// Bases of `m^1, m^2, …` up to and including the first zero power.
    pub fn powers(&self) -> Vec<Vec<Vec<Q>>> {
        let r = self.dim();
        let mut out = vec![(0..r).map(|i| self.basis(i)).collect::<Vec<_>>()];
        for _ in 0..=r {
            let last = out.last().unwrap();
            if last.is_empty() {
                break;
            }
            let mut gens = Vec::new();
            for u in last {
                for i in 0..r {
                    gens.push(self.mul(u, &self.basis(i)));
                }
            }
            out.push(span_basis(r, &gens));
        }
        out
    }

    /// A basis adapted to the `m`-adic filtration: returns the basis
    /// vectors (original coordinates), their levels (`v ∈ m^level`, not in
    /// `m^{level+1}`), and the inverse change of basis.
    pub fn adapted_basis(&self) -> (Vec<Vec<Q>>, Vec<usize>, Mat) {
        let r = self.dim();
        let powers = self.powers();
        let mut vecs: Vec<Vec<Q>> = Vec::new();
        let mut levels = Vec::new();
        for level in (1..powers.len()).rev() {
            for v in &powers[level - 1] {
                let mut trial = vecs.clone();
                trial.push(v.clone());
                if Mat::from_cols(r, &trial).rank() == trial.len() {
                    vecs = trial;
                    levels.push(level);
                }
            }
        }
        let t = Mat::from_cols(r, &vecs);
        let inv = invert(&t).expect("adapted basis is a basis");
        (vecs, levels, inv)
    }
}

fn span_basis(r: usize, gens: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if gens.is_empty() {
        return vec![];
    }
    let m = Mat::from_cols(r, gens);
    m.independent_cols().into_iter().map(|j| gens[j].clone()).collect()
}

pub(crate) fn invert(m: &Mat) -> Option<Mat> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let (r, piv) = m.hstack(&Mat::identity(n)).rref();
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, r.get(i, n + j).clone());
        }
    }
    Some(out)
}

/// `ℚ[ε]/(εⁿ)` with ideal basis `ε, …, ε^{n−1}`.
pub fn make_dual_numbers(n: usize) -> Result<ArtinAlgebra> {
    if n < 2 {
        return invalid("need n >= 2");
    }
    let r = n - 1;
    let names = (1..n).map(|k| if k == 1 { "eps".to_string() } else { format!("eps^{k}") }).collect();
    let mut table = vec![vec![vec![Q::zero(); r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            let k = i + j + 2;
            if k < n {
                table[i][j][k - 1] = Q::one();
            }
        }
    }
    ArtinAlgebra::new(names, table)
}

/// A surjection `B → A` with kernel `J`, `J·m_B = 0`.
#[derive(Debug, Clone)]
pub struct SmallExtension {
    pub total: ArtinAlgebra,
    pub base: ArtinAlgebra,
    /// `dim m_A × dim m_B`.
    pub projection: Mat,
    pub kernel_basis: Vec<Vec<Q>>,
    /// `dim m_B × dim m_A`, right inverse of `projection`.
    pub section: Mat,
}

impl SmallExtension {
    pub fn new(total: ArtinAlgebra, base: ArtinAlgebra, projection: Mat) -> Result<SmallExtension> {
        let (rb, ra) = (total.dim(), base.dim());
        if projection.rows != ra || projection.cols != rb {
            return invalid("projection has wrong shape");
        }
        check(projection.rank() == ra, "projection is not surjective")?;
        for i in 0..rb {
            for j in 0..rb {
                let lhs = projection.mul_vec(&total.mul(&total.basis(i), &total.basis(j)));
                let rhs = base.mul(&projection.col(i), &projection.col(j));
                check(lhs == rhs, "projection is not multiplicative")?;
            }
        }
        let kernel_basis = projection.kernel();
        for k in &kernel_basis {
            for i in 0..rb {
                check(total.mul(k, &total.basis(i)).iter().all(|x| x.is_zero()), "J * m_B != 0")?;
            }
        }
        // section: solve projection * s_j = e_j
        let mut cols = Vec::new();
        for j in 0..ra {
            let sys = crate::exactalg::LinSystem::new(projection.clone(), base.basis(j))?;
            let (x, _) = crate::exactalg::solve_linear(&sys).expect("surjective");
            cols.push(x);
        }
        let section = Mat::from_cols(rb, &cols);
        Ok(SmallExtension { total, base, projection, kernel_basis, section })
    }

    pub fn project(&self, u: &[Q]) -> Vec<Q> {
        self.projection.mul_vec(u)
    }

    pub fn lift(&self, u: &[Q]) -> Vec<Q> {
        self.section.mul_vec(u)
    }
}

/// `ℚ[ε]/ε^{k+1} → ℚ[ε]/ε^k` for `k = n−1, …, 2`.
pub fn small_extension_chain(n: usize) -> Result<Vec<SmallExtension>> {
    if n < 3 {
        return invalid("need n >= 3");
    }
    let mut out = Vec::new();
    for k in (2..n).rev() {
        let b = make_dual_numbers(k + 1)?;
        let a = make_dual_numbers(k)?;
        let mut p = Mat::zeros(a.dim(), b.dim());
        for i in 0..a.dim() {
            p.set(i, i, q(1));
        }
        out.push(SmallExtension::new(b, a, p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers() {
        let a = make_dual_numbers(2).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.mul(&a.basis(0), &a.basis(0)), vec![q(0)]);
        let b = make_dual_numbers(3).unwrap();
        assert_eq!(b.mul(&b.basis(0), &b.basis(0)), vec![q(0), q(1)]);
        assert_eq!(b.mul(&b.basis(1), &b.basis(0)), vec![q(0), q(0)]);
        assert_eq!(b.mul(&[q(1), q(1)], &b.basis(0)), vec![q(0), q(1)]);
        assert_eq!(make_dual_numbers(4).unwrap().nilpotency_index(), 4);
        assert!(make_dual_numbers(1).is_err());
        assert!(b.multiply(&[q(1)], &[q(1), q(0)]).is_err());
    }

    #[test]
    fn chain() {
        let c3 = small_extension_chain(3).unwrap();
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].kernel_basis, vec![vec![q(0), q(1)]]);
        let c4 = small_extension_chain(4).unwrap();
        assert_eq!(c4.len(), 2);
        assert_eq!(c4[0].kernel_basis, vec![vec![q(0), q(0), q(1)]]);
        assert_eq!(c4[1].kernel_basis, vec![vec![q(0), q(1)]]);
        for e in &c4 {
            for j in 0..e.base.dim() {
                assert_eq!(e.project(&e.lift(&e.base.basis(j))), e.base.basis(j));
            }
        }
    }

    #[test]
    fn rejects_non_nilpotent() {
        let t = vec![vec![vec![q(1)]]];
        assert!(ArtinAlgebra::new(vec!["e".into()], t).is_err());
    }

    #[test]
    fn two_variable_algebra() {
        // Q[x,y]/(x^2, y^2): m has basis x, y, xy
        let z = || vec![q(0); 3];
        let mut t = vec![vec![z(); 3]; 3];
        t[0][1] = vec![q(0), q(0), q(1)];
        t[1][0] = vec![q(0), q(0), q(1)];
        let a = ArtinAlgebra::new(vec!["x".into(), "y".into(), "xy".into()], t).unwrap();
        assert_eq!(a.nilpotency_index(), 3);
        let (vecs, levels, _) = a.adapted_basis();
        assert_eq!(vecs.len(), 3);
        assert_eq!(levels, vec![2, 1, 1]);
    }
}
