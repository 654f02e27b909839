use super::ctx::LieCtx;
use crate::error::{Error, Result};
use crate::exactalg::bernoulli;
use crate::exactalg::{q, qf, Q};

fn guard<C: LieCtx>(ctx: &C) -> usize {
    4 * ctx.depth() + 8
}

/// `dx + ½[x,x]`.
pub fn mc_defect<C: LieCtx>(ctx: &C, x: &C::E) -> C::E {
    ctx.add(&ctx.d(x), &ctx.scale(&ctx.bracket(x, x), &qf(1, 2)))
}

/// `e^{ad a} y = Σ ad_aⁿ y / n!`.
pub fn ad_exp<C: LieCtx>(ctx: &C, a: &C::E, y: &C::E) -> C::E {
    let mut sum = y.clone();
    let mut term = y.clone();
    for n in 1..guard(ctx) {
        term = ctx.scale(&ctx.bracket(a, &term), &qf(1, n as i64));
        if ctx.is_zero(&term) {
            return sum;
        }
        sum = ctx.add(&sum, &term);
    }
    panic!("ad-exponential series did not terminate: coefficients are not nilpotent");
}

/// Gauge action `e^a * x = x + Σ_{n≥0} ad_aⁿ/(n+1)! ([a,x] − da)`.
pub fn gauge<C: LieCtx>(ctx: &C, a: &C::E, x: &C::E) -> C::E {
    let mut term = ctx.sub(&ctx.bracket(a, x), &ctx.d(a));
    let mut sum = x.clone();
    for n in 1..guard(ctx) {
        if ctx.is_zero(&term) {
            return sum;
        }
        sum = ctx.add(&sum, &term);
        term = ctx.scale(&ctx.bracket(a, &term), &qf(1, n as i64 + 1));
    }
    panic!("gauge series did not terminate: coefficients are not nilpotent");
}

/// `a • b = log(eᵃ eᵇ)`, truncated where brackets vanish.
pub fn bch<C: LieCtx>(ctx: &C, a: &C::E, b: &C::E) -> C::E {
    let n_max = ctx.depth().max(2) + 1;
    let bern = bernoulli(n_max + 1);
    let mut fact = vec![q(1)];
    for k in 1..=n_max + 1 {
        let f = &fact[k - 1] * q(k as i64);
        fact.push(f);
    }
    let sum_xy = ctx.add(a, b);
    let diff_xy = ctx.sub(a, b);
    let mut z: Vec<C::E> = vec![ctx.zero(), sum_xy.clone()];
    for n in 1..n_max {
        let mut next = ctx.scale(&ctx.bracket(&diff_xy, &z[n]), &qf(1, 2));
        // w[j][s]: sum over compositions of s into j positive parts of
        // [Z_{k1},[…,[Z_{kj}, X+Y]]]
        let pmax = n / 2;
        if pmax >= 1 {
            let mut w: Vec<Vec<C::E>> = vec![vec![ctx.zero(); n + 1]; 2 * pmax + 1];
            w[0][0] = sum_xy.clone();
            for j in 1..=2 * pmax {
                for s in j..=n {
                    let mut acc = ctx.zero();
                    for k in 1..=s - (j - 1) {
                        let inner = &w[j - 1][s - k];
                        if ctx.is_zero(inner) || ctx.is_zero(&z[k]) {
                            continue;
                        }
                        acc = ctx.add(&acc, &ctx.bracket(&z[k], inner));
                    }
                    w[j][s] = acc;
                }
            }
            for p in 1..=pmax {
                let coeff: Q = &bern[2 * p] / &fact[2 * p];
                next = ctx.add(&next, &ctx.scale(&w[2 * p][n], &coeff));
            }
        }
        z.push(ctx.scale(&next, &qf(1, n as i64 + 1)));
    }
    let mut out = ctx.zero();
    for t in z.iter().skip(1) {
        out = ctx.add(&out, t);
    }
    out
}

/// Left-to-right product `a₁ • a₂ • … • a_k`.
pub fn bch_many<C: LieCtx>(ctx: &C, items: &[C::E]) -> C::E {
    let mut acc = ctx.zero();
    for it in items {
        acc = bch(ctx, &acc, it);
    }
    acc
}

/// Writes a Maurer-Cartan `y` as `e^c * x` with `(1−P)x = 0` and `c` in
/// the image of `homotopy`, where `d·homotopy + homotopy·d = 1 − P`.
pub fn decompose<C: LieCtx>(
    ctx: &C,
    y: &C::E,
    proj: impl Fn(&C::E) -> C::E,
    homotopy: impl Fn(&C::E) -> C::E,
) -> Result<(C::E, C::E)> {
    let mut c = ctx.zero();
    for _ in 0..=guard(ctx) {
        let x = gauge(ctx, &ctx.neg(&c), y);
        if ctx.is_zero(&ctx.sub(&x, &proj(&x))) {
            return Ok((x, c));
        }
        c = ctx.sub(&c, &homotopy(&x));
    }
    Err(Error::Check("decomposition did not converge (input not Maurer-Cartan?)".into()))
}
