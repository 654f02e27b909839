use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::ScDgla;
use crate::exactalg::{Mat, Q};
use crate::forms::{face, PolyForm};

pub(crate) type Mono = (Vec<u32>, u32);

pub(crate) fn monomials(n: usize, cap: u32) -> Vec<Mono> {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                let used: u32 = e.iter().sum();
                (0..=cap.saturating_sub(used)).map(move |a| {
                    let mut f = e.clone();
                    f.push(a);
                    f
                })
            })
            .collect();
    }
    let mut out = vec![];
    for e in exps {
        for m in 0..(1u32 << n) {
            if e.iter().sum::<u32>() + m.count_ones() <= cap {
                out.push((e.clone(), m));
            }
        }
    }
    out
}

struct Space {
    keys: Vec<(usize, Mono, usize)>,
    index: HashMap<(usize, Mono, usize), usize>,
}

fn space(g: &ScDgla, monos: &[Vec<Mono>], j: i32) -> Space {
    let mut keys = vec![];
    for (n, l) in g.levels.iter().enumerate() {
        for mono in &monos[n] {
            for v in 0..l.dim() {
                if mono.1.count_ones() as i32 + l.deg(v) == j {
                    keys.push((n, mono.clone(), v));
                }
            }
        }
    }
    let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    Space { keys, index }
}

/// Basis (columns) of the face-compatible subspace of degree `j`.
fn compatible_basis(g: &ScDgla, sp: &Space) -> Mat {
    let mut rows: BTreeMap<(usize, usize, Mono, usize), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Q)> = vec![];
    for (col, (n, (e, m), v)) in sp.keys.iter().enumerate() {
        let w = PolyForm::monomial(e.clone(), *m, Q::one());
        if *n >= 1 {
            for k in 0..=*n {
                for ((e2, m2), c) in face(k, &w).expect("face in range").terms {
                    let len = rows.len();
                    let r = *rows.entry((*n, k, (e2, m2), *v)).or_insert(len);
                    entries.push((r, col, c));
                }
            }
        }
        if *n < g.top() {
            for k in 0..=*n + 1 {
                let mat = &g.coface(k, n + 1).matrix;
                for t in 0..mat.rows {
                    let a = mat.get(t, *v);
                    if !a.is_zero() {
                        let len = rows.len();
                        let r = *rows.entry((n + 1, k, (e.clone(), *m), t)).or_insert(len);
                        entries.push((r, col, -a.clone()));
                    }
                }
            }
        }
    }
    let mut phi = Mat::zeros(rows.len(), sp.keys.len());
    for (r, c, v) in entries {
        let cur = phi.get(r, c).clone();
        phi.set(r, c, cur + v);
    }
    let ker = phi.kernel();
    Mat::from_cols(sp.keys.len(), &ker)
}

fn differential(g: &ScDgla, src: &Space, tgt: &Space) -> Mat {
    let mut d = Mat::zeros(tgt.keys.len(), src.keys.len());
    let mut add = |key: (usize, Mono, usize), col: usize, c: Q| {
        let r = tgt.index[&key];
        let cur = d.get(r, col).clone();
        d.set(r, col, cur + c);
    };
    for (col, (n, (e, m), v)) in src.keys.iter().enumerate() {
        let w = PolyForm::monomial(e.clone(), *m, Q::one());
        for (mono, c) in w.d().terms {
            add((*n, mono, *v), col, c);
        }
        let s = if m.count_ones() % 2 == 1 { -Q::one() } else { Q::one() };
        let l = &g.levels[*n];
        for t in 0..l.dim() {
            let a = l.d_matrix().get(t, *v);
            if !a.is_zero() {
                add((*n, (e.clone(), *m), t), col, &s * a);
            }
        }
    }
    d
}

fn degree_range(g: &ScDgla) -> Option<(i32, i32)> {
    let lo = g.levels.iter().filter_map(|l| l.space.min_degree()).min()?;
    let hi = g.levels.iter().enumerate().filter_map(|(n, l)| l.space.max_degree().map(|d| d + n as i32)).max()?;
    Some((lo, hi))
}

/// Dimensions of the capped face-compatible spaces `Tot_TW^j`.
pub fn tw_space_dims(g: &ScDgla, cap: u32) -> BTreeMap<i32, usize> {
    let monos: Vec<Vec<Mono>> = (0..g.levels.len()).map(|n| monomials(n, cap)).collect();
    let Some((lo, hi)) = degree_range(g) else { return BTreeMap::new() };
    (lo..=hi).map(|j| (j, compatible_basis(g, &space(g, &monos, j)).cols)).collect()
}

/// Cohomology dimensions of the degree-capped `Tot_TW(g)` (ℚ coefficients).
pub fn tw_cohomology_capped(g: &ScDgla, cap: u32) -> BTreeMap<i32, usize> {
    let monos: Vec<Vec<Mono>> = (0..g.levels.len()).map(|n| monomials(n, cap)).collect();
    let Some((lo, hi)) = degree_range(g) else { return BTreeMap::new() };
    let spaces: Vec<Space> = (lo - 1..=hi + 1).map(|j| space(g, &monos, j)).collect();
    let bases: Vec<Mat> = spaces.iter().map(|s| compatible_basis(g, s)).collect();
    // rank of d restricted to the compatible subspace, per degree
    let ranks: Vec<usize> = (0..spaces.len() - 1)
        .map(|k| differential(g, &spaces[k], &spaces[k + 1]).mul(&bases[k]).rank())
        .collect();
    let mut out = BTreeMap::new();
    for j in lo..=hi {
        let k = (j - lo + 1) as usize;
        out.insert(j, bases[k].cols - ranks[k] - ranks[k - 1]);
    }
    out
}
