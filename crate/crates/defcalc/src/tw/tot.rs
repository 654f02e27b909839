use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ScDgla;
use crate::exactalg::{Mat, Q};
use crate::graded::{induced_on_cohomology, Complex};

/// Element of `Tot(g) ⊗ m_A`: one coefficient vector per level
/// (length `dim g_i · dim m_A`). Level `i` in `g_i^{j−i}` has total degree `j`.
pub type TotElement = Vec<Vec<Q>>;

fn sgn(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// `d_Tot x` with `d_Tot = Σ_k (−1)^k ∂_{k,i+1} + (−1)^i d_i` on level `i`.
pub fn tot_differential(g: &ScDgla, x: &TotElement, r: usize) -> TotElement {
    let mut out: TotElement = g.levels.iter().map(|l| vec![Q::zero(); l.dim() * r]).collect();
    for (i, xi) in x.iter().enumerate() {
        let l = &g.levels[i];
        let s = sgn(i % 2 == 1);
        for e in 0..r {
            let col: Vec<Q> = (0..l.dim()).map(|v| xi[v * r + e].clone()).collect();
            let dv = l.d_vec(&col);
            for (v, c) in dv.iter().enumerate() {
                out[i][v * r + e] += &s * c;
            }
        }
        if i < g.top() {
            for k in 0..=i + 1 {
                let y = g.coface(k, i + 1).apply_tensor(xi, r, &Q::zero());
                let s = sgn(k % 2 == 1);
                for (o, c) in out[i + 1].iter_mut().zip(&y) {
                    *o += &s * c;
                }
            }
        }
    }
    out
}

/// Basis of each `Tot^j`: pairs `(level, flat index in g_level)`.
#[derive(Debug, Clone, Default)]
pub struct TotLayout {
    pub basis: BTreeMap<i32, Vec<(usize, usize)>>,
}

impl TotLayout {
    pub fn new(g: &ScDgla) -> TotLayout {
        let mut basis: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, l) in g.levels.iter().enumerate() {
            for v in 0..l.dim() {
                basis.entry(l.deg(v) + i as i32).or_default().push((i, v));
            }
        }
        TotLayout { basis }
    }

    pub fn dim(&self, j: i32) -> usize {
        self.basis.get(&j).map_or(0, |b| b.len())
    }

    /// Coordinates of the degree-`j` part of `x` (ℚ coefficients).
    pub fn to_vec(&self, j: i32, x: &TotElement) -> Vec<Q> {
        self.basis.get(&j).map_or(vec![], |b| b.iter().map(|&(i, v)| x[i][v].clone()).collect())
    }

    pub fn from_vec(&self, g: &ScDgla, j: i32, v: &[Q]) -> TotElement {
        let mut x: TotElement = g.levels.iter().map(|l| vec![Q::zero(); l.dim()]).collect();
        if let Some(b) = self.basis.get(&j) {
            for (&(i, idx), c) in b.iter().zip(v) {
                x[i][idx] = c.clone();
            }
        }
        x
    }
}

/// `(Tot(g), d_Tot)` as a finite complex with its layout.
pub fn tot_complex(g: &ScDgla) -> (Complex, TotLayout) {
    let lay = TotLayout::new(g);
    let (Some(&lo), Some(&hi)) = (lay.basis.keys().next(), lay.basis.keys().last()) else {
        return (Complex::new(0, vec![], vec![]).unwrap(), lay);
    };
    let dims: Vec<usize> = (lo..=hi).map(|j| lay.dim(j)).collect();
    let mut ds = vec![];
    for j in lo..hi {
        let cols: Vec<Vec<Q>> = (0..lay.dim(j))
            .map(|c| {
                let mut unit = vec![Q::zero(); lay.dim(j)];
                unit[c] = Q::one();
                lay.to_vec(j + 1, &tot_differential(g, &lay.from_vec(g, j, &unit), 1))
            })
            .collect();
        ds.push(Mat::from_cols(lay.dim(j + 1), &cols));
    }
    (Complex::new(lo, dims, ds).expect("d_Tot squares to zero"), lay)
}

/// For the projection `Tot(g) → Tot(g_{[0,2]})`: (surjective on H⁰,
/// bijective on H¹, injective on H²).
pub fn truncation_criterion(g: &ScDgla) -> (bool, bool, bool) {
    let t = g.truncate(0, g.top().min(2)).expect("valid truncation");
    let (c1, l1) = tot_complex(g);
    let (c2, l2) = tot_complex(&t);
    let proj = |j: i32| {
        let mut f = Mat::zeros(l2.dim(j), l1.dim(j));
        if let (Some(b1), Some(b2)) = (l1.basis.get(&j), l2.basis.get(&j)) {
            for (c, key) in b1.iter().enumerate() {
                if let Some(r) = b2.iter().position(|k| k == key) {
                    f.set(r, c, Q::one());
                }
            }
        }
        f
    };
    let (_, s0) = induced_on_cohomology(&c1, &c2, &proj(0), 0);
    let (i1, s1) = induced_on_cohomology(&c1, &c2, &proj(1), 1);
    let (i2, _) = induced_on_cohomology(&c1, &c2, &proj(2), 2);
    (s0, i1 && s1, i2)
}
