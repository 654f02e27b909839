use std::sync::Arc;

use num_traits::Zero;

use super::coef::Coef;
use super::Dgla;
use crate::artin::ArtinAlgebra;
use crate::exactalg::Q;

/// A nilpotent graded Lie algebra in which the Maurer-Cartan calculus runs.
pub trait LieCtx {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn scale(&self, x: &Self::E, c: &Q) -> Self::E;
    fn bracket(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn d(&self, x: &Self::E) -> Self::E;
    /// Every bracket of this many elements vanishes.
    fn depth(&self) -> usize;

    fn neg(&self, x: &Self::E) -> Self::E {
        self.scale(x, &-Q::from_integer(1.into()))
    }

    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E {
        self.add(x, &self.neg(y))
    }
}

/// `L ⊗ S ⊗ m_A`, elements stored as `x[i*r + e]` for basis vector `i` of
/// `L` and ideal basis vector `e`.
#[derive(Debug, Clone)]
pub struct TensorCtx<S: Coef> {
    pub l: Arc<Dgla>,
    pub a: Arc<ArtinAlgebra>,
    pub zero: S,
    prod: Vec<Vec<Vec<(usize, Q)>>>,
}

impl<S: Coef> TensorCtx<S> {
    pub fn new(l: Arc<Dgla>, a: Arc<ArtinAlgebra>, zero: S) -> TensorCtx<S> {
        let r = a.dim();
        let prod = (0..r)
            .map(|e| {
                (0..r)
                    .map(|f| {
                        a.table[e][f].iter().enumerate().filter(|(_, c)| !Zero::is_zero(*c)).map(|(g, c)| (g, c.clone())).collect()
                    })
                    .collect()
            })
            .collect();
        TensorCtx { l, a, zero, prod }
    }

    pub fn r(&self) -> usize {
        self.a.dim()
    }

    pub fn len(&self) -> usize {
        self.l.dim() * self.r()
    }

    /// Embeds a rational vector of length `dim L * r`.
    pub fn from_q(&self, x: &[Q]) -> Vec<S> {
        x.iter().map(|c| if Zero::is_zero(c) { self.zero.clone() } else { self.zero.from_q(c) }).collect()
    }

    /// Keeps only components of degree `j`.
    pub fn part(&self, x: &[S], j: i32) -> Vec<S> {
        let r = self.r();
        x.iter()
            .enumerate()
            .map(|(k, v)| if self.l.deg(k / r) == j { v.clone() } else { self.zero.clone() })
            .collect()
    }

    /// The element `s · v_i ⊗ e`.
    pub fn unit(&self, i: usize, e: usize, s: S) -> Vec<S> {
        let mut x = vec![self.zero.clone(); self.len()];
        x[i * self.r() + e] = s;
        x
    }

    /// Multiplies by an element of `m_A` (coordinates `u`).
    pub fn mul_artin(&self, x: &[S], u: &[Q]) -> Vec<S> {
        let r = self.r();
        let mut out = vec![self.zero.clone(); x.len()];
        for (k, v) in x.iter().enumerate() {
            if v.is_nil() {
                continue;
            }
            let (i, e) = (k / r, k % r);
            for (f, uf) in u.iter().enumerate() {
                if Zero::is_zero(uf) {
                    continue;
                }
                for (g, c) in &self.prod[e][f] {
                    let t = v.scaled(&(uf * c));
                    out[i * r + g] = out[i * r + g].plus(&t);
                }
            }
        }
        out
    }

    /// Applies a coefficient-wise map.
    pub fn map_coef(&self, x: &[S], f: impl Fn(&S) -> S) -> Vec<S> {
        x.iter().map(|v| if v.is_nil() { self.zero.clone() } else { f(v) }).collect()
    }
}

impl<S: Coef> LieCtx for TensorCtx<S> {
    type E = Vec<S>;

    fn zero(&self) -> Vec<S> {
        vec![self.zero.clone(); self.len()]
    }

    fn is_zero(&self, x: &Vec<S>) -> bool {
        x.iter().all(|v| v.is_nil())
    }

    fn add(&self, x: &Vec<S>, y: &Vec<S>) -> Vec<S> {
        x.iter().zip(y).map(|(a, b)| a.plus(b)).collect()
    }

    fn scale(&self, x: &Vec<S>, c: &Q) -> Vec<S> {
        x.iter().map(|a| a.scaled(c)).collect()
    }

    fn bracket(&self, x: &Vec<S>, y: &Vec<S>) -> Vec<S> {
        let r = self.r();
        let mut out = self.zero();
        let xs: Vec<usize> = (0..x.len()).filter(|&k| !x[k].is_nil()).collect();
        let ys: Vec<usize> = (0..y.len()).filter(|&k| !y[k].is_nil()).collect();
        let twisted: Vec<Option<S>> = y.iter().map(|v| if v.is_nil() { None } else { Some(v.twist()) }).collect();
        for &kx in &xs {
            let (i, e) = (kx / r, kx % r);
            let odd = self.l.deg(i).rem_euclid(2) == 1;
            for &ky in &ys {
                let (j, f) = (ky / r, ky % r);
                let br = self.l.bracket_basis(i, j);
                if br.is_empty() || self.prod[e][f].is_empty() {
                    continue;
                }
                let yv = if odd { twisted[ky].as_ref().unwrap() } else { &y[ky] };
                let s = x[kx].times(yv);
                if s.is_nil() {
                    continue;
                }
                for (k, c) in br {
                    for (g, c2) in &self.prod[e][f] {
                        let idx = k * r + g;
                        out[idx] = out[idx].plus(&s.scaled(&(c * c2)));
                    }
                }
            }
        }
        out
    }

    fn d(&self, x: &Vec<S>) -> Vec<S> {
        let r = self.r();
        let dm = self.l.d_matrix();
        let mut out: Vec<S> = x.iter().map(|v| v.dd()).collect();
        for (k, v) in x.iter().enumerate() {
            if v.is_nil() {
                continue;
            }
            let (i, e) = (k / r, k % r);
            let tv = v.twist();
            for t in 0..self.l.dim() {
                let c = dm.get(t, i);
                if !Zero::is_zero(c) {
                    out[t * r + e] = out[t * r + e].plus(&tv.scaled(c));
                }
            }
        }
        out
    }

    fn depth(&self) -> usize {
        self.a.nilpotency_index()
    }
}
