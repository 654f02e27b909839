//! Seeded random instances for property tests and sample generation.

use num_traits::Zero;
use rand::Rng;

use super::calculus::{gauge, mc_defect};
use super::ctx::{LieCtx, TensorCtx};
use super::ops::solve_order_by_order;
use super::{Dgla, Sparse};
use crate::artin::invert;
use crate::exactalg::{q, qf, Mat, Q};
use crate::graded::GradedSpace;

/// Small random rational, zero with probability `1 − density`.
pub fn small_q<R: Rng>(rng: &mut R, density: f64) -> Q {
    if !rng.gen_bool(density) {
        return Q::zero();
    }
    let n = rng.gen_range(-3i64..=3);
    let d = *[1i64, 1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap();
    qf(n, d)
}

/// Random element of `L^j ⊗ m_A`.
pub fn random_elem<R: Rng>(ctx: &TensorCtx<Q>, j: i32, rng: &mut R, density: f64) -> Vec<Q> {
    let r = ctx.r();
    let mut x = ctx.zero();
    for i in ctx.l.range(j) {
        for e in 0..r {
            x[i * r + e] = small_q(rng, density);
        }
    }
    x
}

/// Graded Lie algebras (zero differential) used as building blocks:
/// `(degrees, [(a, b, out, coeff)])` with `a <= b`.
fn lie_block(kind: usize) -> (Vec<i32>, Vec<(usize, usize, usize, Q)>) {
    match kind {
        0 => (vec![0], vec![]),
        1 => (vec![0, 0], vec![(0, 1, 1, q(1))]),
        2 => (vec![0, 0, 0], vec![(0, 1, 2, q(1))]),
        3 => (vec![0, 0, 0], vec![(0, 1, 1, q(2)), (0, 2, 2, q(-2)), (1, 2, 0, q(1))]),
        _ => (vec![0, 1, 2], vec![(0, 1, 1, q(1)), (0, 2, 2, q(2)), (1, 1, 2, q(2))]),
    }
}

/// A random DGLA: a square-zero extension `(ℚ ⊕ V) ⊗ g` plus a random
/// abelian complex, in a random graded basis. Degrees lie in `[−2, 2]`.
pub fn random_dgla<R: Rng>(rng: &mut R) -> Dgla {
    let kind = rng.gen_range(0..6).min(4);
    let (gdeg, gbr) = lie_block(kind);
    // C = ℚ·1 ⊕ V, V = span(a) or span(a, b) with da = b
    let mut cdeg: Vec<i32> = vec![0];
    let mut cd: Vec<(usize, usize)> = vec![];
    let gmax = *gdeg.iter().max().unwrap();
    let mut vlen = rng.gen_range(0..=2);
    if gmax == 0 && rng.gen_bool(0.5) {
        // V = span(a), |a| = 1: first-order deformations a ⊗ g
        vlen = 0;
        cdeg.push(1);
    }
    if vlen > 0 {
        let lo = -2;
        let hi = 2 - gmax - (vlen as i32 - 1);
        let mut p = rng.gen_range(lo..=hi);
        if p == 0 && gdeg.len() >= 2 {
            p = -1;
        }
        cdeg.push(p);
        if vlen == 2 {
            cdeg.push(p + 1);
            if rng.gen_bool(0.7) {
                cd.push((1, 2));
            }
        }
    }
    // basis of C ⊗ g: (c, x)
    let mut basis: Vec<(usize, usize, i32)> = vec![];
    for c in 0..cdeg.len() {
        for x in 0..gdeg.len() {
            basis.push((c, x, cdeg[c] + gdeg[x]));
        }
    }
    // random abelian complex
    let mut wdeg: Vec<i32> = vec![];
    let mut wd: Vec<(usize, usize)> = vec![];
    for _ in 0..rng.gen_range(0..=2) {
        let p = rng.gen_range(-2..=1);
        wdeg.push(p);
        if rng.gen_bool(0.5) {
            wdeg.push(p + 1);
            wd.push((wdeg.len() - 2, wdeg.len() - 1));
        }
    }
    let mut degs: Vec<i32> = basis.iter().map(|b| b.2).collect();
    degs.extend(&wdeg);
    let nb = basis.len();
    // enforce ≤ 4 per degree by dropping extra abelian vectors
    let count = |d: i32, v: &[i32]| v.iter().filter(|&&x| x == d).count();
    if (-2..=2).any(|d| count(d, &degs) > 4) || degs.iter().any(|&d| !(-2..=2).contains(&d)) {
        degs.truncate(nb);
        wdeg.clear();
        wd.clear();
    }
    let n = degs.len();
    let mut d = Mat::zeros(n, n);
    let mut br: Vec<Vec<Sparse>> = vec![vec![vec![]; n]; n];
    let find = |c: usize, x: usize| basis.iter().position(|b| b.0 == c && b.1 == x).unwrap();
    for (k, &(c, x, _)) in basis.iter().enumerate() {
        for &(c1, c2) in &cd {
            if c1 == c {
                d.set(find(c2, x), k, q(1));
            }
        }
    }
    for &(a, b) in &wd {
        d.set(nb + b, nb + a, q(1));
    }
    let prod = |c1: usize, c2: usize| -> Option<usize> {
        match (c1, c2) {
            (0, c) | (c, 0) => Some(c),
            _ => None,
        }
    };
    let gb = |x: usize, y: usize| -> Vec<(usize, Q)> {
        let mut out = vec![];
        for &(a, b, o, ref c) in &gbr {
            if a == x && b == y {
                out.push((o, c.clone()));
            } else if a == y && b == x && a != b {
                let s = if (gdeg[a] * gdeg[b]).rem_euclid(2) == 1 { q(1) } else { q(-1) };
                out.push((o, s * c));
            }
        }
        out
    };
    for (i, &(c1, x, _)) in basis.iter().enumerate() {
        for (j, &(c2, y, _)) in basis.iter().enumerate() {
            let Some(c) = prod(c1, c2) else { continue };
            let s = if (gdeg[x] * cdeg[c2]).rem_euclid(2) == 1 { q(-1) } else { q(1) };
            for (o, coef) in gb(x, y) {
                br[i][j].push((find(c, o), &s * coef));
            }
        }
    }
    // sort basis by degree
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (degs[i], i));
    let mut pos = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let mut d2 = Mat::zeros(n, n);
    let mut br2: Vec<Vec<Sparse>> = vec![vec![vec![]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if !d.get(i, j).is_zero() {
                d2.set(pos[i], pos[j], d.get(i, j).clone());
            }
            br2[pos[i]][pos[j]] = br[i][j].iter().map(|(k, c)| (pos[*k], c.clone())).collect();
        }
    }
    let mut dims = std::collections::BTreeMap::new();
    for &dg in &degs {
        *dims.entry(dg).or_insert(0usize) += 1;
    }
    let space = GradedSpace::new(dims);
    let base = Dgla::from_parts_unchecked(space, d2, br2).expect("well-formed");
    change_basis(&base, rng)
}

/// Conjugates the structure by a random invertible degree-preserving matrix.
pub fn change_basis<R: Rng>(l: &Dgla, rng: &mut R) -> Dgla {
    let n = l.dim();
    let mut t = Mat::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && l.deg(i) == l.deg(j) && rng.gen_bool(0.5) {
                t.set(i, j, q(rng.gen_range(-2..=2)));
            }
        }
    }
    let t = match invert(&t) {
        Some(_) => t,
        None => Mat::identity(n),
    };
    let tinv = invert(&t).unwrap();
    let d = tinv.mul(l.d_matrix()).mul(&t);
    let cols: Vec<Vec<Q>> = (0..n).map(|j| t.col(j)).collect();
    let mut br: Vec<Vec<Sparse>> = vec![vec![vec![]; n]; n];
    for a in 0..n {
        for b in 0..n {
            let v = tinv.mul_vec(&l.bracket_vec(&cols[a], &cols[b]));
            br[a][b] = v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        }
    }
    Dgla::from_parts_unchecked(l.space.clone(), d, br).expect("conjugated structure")
}

/// Random Maurer-Cartan element: a random first-order cocycle completed
/// order by order, then moved by a random gauge. `None` when obstructed.
pub fn random_mc<R: Rng>(ctx: &TensorCtx<Q>, rng: &mut R, density: f64) -> Option<Vec<Q>> {
    let r = ctx.r();
    let l = &ctx.l;
    let (r1, r2) = (l.range(1), l.range(2));
    let d1 = l.d_block(1);
    let z1 = d1.kernel();
    let mut z0 = vec![Q::zero(); r1.len() * r];
    for zv in &z1 {
        for e in 0..r {
            let c = small_q(rng, density);
            if c.is_zero() {
                continue;
            }
            for (v, zc) in zv.iter().enumerate() {
                z0[v * r + e] += &c * zc;
            }
        }
    }
    let off1 = r1.start * r;
    let embed = |z: &[Q]| {
        let mut x = ctx.zero();
        x[off1..off1 + z.len()].clone_from_slice(z);
        x
    };
    let off2 = r2.start * r;
    let f = |z: &[Q]| mc_defect(ctx, &embed(z))[off2..off2 + r2.len() * r].to_vec();
    let z = solve_order_by_order(&ctx.a, &d1, f, z0).ok()?;
    let x = embed(&z);
    let a = random_elem(ctx, 0, rng, density);
    let y = gauge(ctx, &a, &x);
    debug_assert!(ctx.is_zero(&mc_defect(ctx, &y)));
    Some(y)
}
