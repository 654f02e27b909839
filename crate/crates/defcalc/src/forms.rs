//! Polynomial differential forms `Ω_n` on the standard simplices.
//!
//! A [`PolyForm`] stores terms keyed by an exponent vector over `n`
//! positional variables and a bitmask of differentials. In canonical
//! coordinates position `j` is the barycentric coordinate `t_{j+1}` (with
//! `t₀ = 1 − Σ t_i` eliminated). The *vertex chart* uses `s_j = u_j` for
//! `j = 0..n−1` (eliminating `u_n`); [`to_chart`] and [`from_chart`] convert.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dgla::Coef;
use crate::error::{invalid, Error, Result};
use crate::exactalg::factorial;
use crate::exactalg::{fmt_q, q, MPoly, MonomialOrder, Q};

type Key = (Vec<u32>, u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    pub n: usize,
    pub terms: BTreeMap<Key, Q>,
}

fn sign_q(neg: bool) -> Q {
    if neg {
        -Q::one()
    } else {
        Q::one()
    }
}

impl PolyForm {
    pub fn zero(n: usize) -> PolyForm {
        PolyForm { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> PolyForm {
        let mut f = PolyForm::zero(n);
        f.add_term(vec![0; n], 0, c);
        f
    }

    pub fn one(n: usize) -> PolyForm {
        PolyForm::constant(n, Q::one())
    }

    /// The positional variable `j` (0-form).
    pub fn var(n: usize, j: usize) -> PolyForm {
        let mut e = vec![0; n];
        e[j] = 1;
        let mut f = PolyForm::zero(n);
        f.add_term(e, 0, Q::one());
        f
    }

    /// The differential of positional variable `j`.
    pub fn dvar(n: usize, j: usize) -> PolyForm {
        let mut f = PolyForm::zero(n);
        f.add_term(vec![0; n], 1 << j, Q::one());
        f
    }

    /// Barycentric coordinate `t_i`, `i = 0..=n`, in canonical coordinates.
    pub fn bary(n: usize, i: usize) -> PolyForm {
        if i == 0 {
            let mut f = PolyForm::one(n);
            for j in 0..n {
                f = f.sub(&PolyForm::var(n, j));
            }
            f
        } else {
            PolyForm::var(n, i - 1)
        }
    }

    /// `dt_i`, `i = 0..=n`, in canonical coordinates.
    pub fn dbary(n: usize, i: usize) -> PolyForm {
        if i == 0 {
            let mut f = PolyForm::zero(n);
            for j in 0..n {
                f = f.sub(&PolyForm::dvar(n, j));
            }
            f
        } else {
            PolyForm::dvar(n, i - 1)
        }
    }

    pub fn monomial(exps: Vec<u32>, mask: u32, c: Q) -> PolyForm {
        let mut f = PolyForm::zero(exps.len());
        f.add_term(exps, mask, c);
        f
    }

    pub fn add_term(&mut self, e: Vec<u32>, mask: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (e, mask);
        let remove = {
            let v = self.terms.entry(key.clone()).or_insert_with(Q::zero);
            *v += c;
            v.is_zero()
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &PolyForm) -> PolyForm {
        let mut r = self.clone();
        for ((e, m), c) in &o.terms {
            r.add_term(e.clone(), *m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &PolyForm) -> PolyForm {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero(self.n);
        }
        PolyForm { n: self.n, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Wedge product with Koszul signs.
    pub fn mul(&self, o: &PolyForm) -> PolyForm {
        let mut r = PolyForm::zero(self.n);
        for ((e1, m1), c1) in &self.terms {
            for ((e2, m2), c2) in &o.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                let mut swaps = 0;
                for i in 0..32 {
                    if m2 & (1 << i) != 0 {
                        swaps += (m1 >> (i + 1)).count_ones();
                    }
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, m1 | m2, sign_q(swaps % 2 == 1) * c1 * c2);
            }
        }
        r
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        let mut r = PolyForm::zero(self.n);
        for ((e, m), c) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 || m & (1 << i) != 0 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 1;
                let below = (m & ((1u32 << i) - 1)).count_ones();
                r.add_term(e2, m | (1 << i), sign_q(below % 2 == 1) * q(e[i] as i64) * c);
            }
        }
        r
    }

    /// `(−1)^{form degree}` applied termwise.
    pub fn twist(&self) -> PolyForm {
        PolyForm {
            n: self.n,
            terms: self.terms.iter().map(|((e, m), c)| ((e.clone(), *m), sign_q(m.count_ones() % 2 == 1) * c)).collect(),
        }
    }

    /// Component of form degree `k`.
    pub fn part(&self, k: u32) -> PolyForm {
        PolyForm {
            n: self.n,
            terms: self.terms.iter().filter(|((_, m), _)| m.count_ones() == k).map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    /// Polynomial degree plus form degree, maximized over terms.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(e, m)| e.iter().sum::<u32>() + m.count_ones()).max().unwrap_or(0)
    }

    pub fn check_cap(&self, cap: u32) -> Result<()> {
        let t = self.total_degree();
        if t > cap {
            return Err(Error::DegreeBudgetExceeded(format!("form of total degree {t} exceeds cap {cap}")));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(e, m)| *m == 0 && e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&(vec![0; self.n], 0)).cloned().unwrap_or_else(Q::zero)
    }

    /// Pullback along positional substitution: variable `j` goes to the
    /// 0-form `vars[j]`, its differential to the 1-form `dvars[j]`.
    pub fn substitute(&self, target_n: usize, vars: &[PolyForm], dvars: &[PolyForm]) -> PolyForm {
        let mut out = PolyForm::zero(target_n);
        let mut powers: Vec<Vec<PolyForm>> = vars.iter().map(|v| vec![PolyForm::one(target_n), v.clone()]).collect();
        for ((e, m), c) in &self.terms {
            let mut t = PolyForm::constant(target_n, c.clone());
            for j in 0..self.n {
                let k = e[j] as usize;
                while powers[j].len() <= k {
                    let next = powers[j].last().unwrap().mul(&vars[j]);
                    powers[j].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[j][k]);
                }
            }
            for j in 0..self.n {
                if m & (1 << j) != 0 {
                    t = t.mul(&dvars[j]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluates a 0-form part at a point given in positional variables.
    pub fn eval0(&self, pt: &[Q]) -> Q {
        let mut s = Q::zero();
        for ((e, m), c) in &self.terms {
            if *m != 0 {
                continue;
            }
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((e, m), c)| {
                    let dts: Vec<usize> = (0..self.n).filter(|j| m & (1 << j) != 0).map(|j| j + 1).collect();
                    serde_json::json!([fmt_q(c), e, dts])
                })
                .collect(),
        )
    }
}

impl Coef for PolyForm {
    fn zero_like(&self) -> PolyForm {
        PolyForm::zero(self.n)
    }
    fn one_like(&self) -> PolyForm {
        PolyForm::one(self.n)
    }
    fn is_nil(&self) -> bool {
        PolyForm::is_zero(self)
    }
    fn plus(&self, o: &PolyForm) -> PolyForm {
        PolyForm::add(self, o)
    }
    fn scaled(&self, c: &Q) -> PolyForm {
        PolyForm::scale(self, c)
    }
    fn times(&self, o: &PolyForm) -> PolyForm {
        PolyForm::mul(self, o)
    }
    fn twist(&self) -> PolyForm {
        PolyForm::twist(self)
    }
    fn dd(&self) -> PolyForm {
        PolyForm::d(self)
    }
}

pub fn omega_mul(f: &PolyForm, g: &PolyForm) -> Result<PolyForm> {
    if f.n != g.n {
        return invalid("forms live on different simplices");
    }
    Ok(f.mul(g))
}

pub fn omega_mul_capped(f: &PolyForm, g: &PolyForm, cap: u32) -> Result<PolyForm> {
    let p = omega_mul(f, g)?;
    p.check_cap(cap)?;
    Ok(p)
}

pub fn omega_d(f: &PolyForm) -> PolyForm {
    f.d()
}

/// Pullback along the `k`-th coface `Δ^{n−1} → Δⁿ` (insert 0 at slot `k`).
pub fn face(k: usize, f: &PolyForm) -> Result<PolyForm> {
    let n = f.n;
    if n == 0 || k > n {
        return invalid(format!("face index {k} out of range for n = {n}"));
    }
    let m = n - 1;
    let mut vars = Vec::with_capacity(n);
    let mut dvars = Vec::with_capacity(n);
    for i in 1..=n {
        if i < k {
            vars.push(PolyForm::bary(m, i));
            dvars.push(PolyForm::dbary(m, i));
        } else if i == k {
            vars.push(PolyForm::zero(m));
            dvars.push(PolyForm::zero(m));
        } else {
            vars.push(PolyForm::bary(m, i - 1));
            dvars.push(PolyForm::dbary(m, i - 1));
        }
    }
    Ok(f.substitute(m, &vars, &dvars))
}

/// Composite pullback to a vertex `v` of `Δⁿ` (a constant for 0-forms).
pub fn vertex_value(f: &PolyForm, v: usize) -> Q {
    let mut pt = vec![Q::zero(); f.n];
    if v >= 1 {
        pt[v - 1] = Q::one();
    }
    f.part(0).eval0(&pt)
}

/// `∫_{Δⁿ}` of the top-degree part, orientation `dt₁…dt_n`.
pub fn integrate(f: &PolyForm) -> Q {
    let n = f.n;
    let top: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut s = Q::zero();
    for ((e, m), c) in &f.terms {
        if *m != top {
            continue;
        }
        let mut num = Q::one();
        for &a in e {
            num *= factorial(a as usize);
        }
        let tot: u32 = e.iter().sum();
        s += c * num / factorial(n + tot as usize);
    }
    s
}

/// Checked integration: the form must be homogeneous of top degree.
pub fn integrate_top(f: &PolyForm) -> Result<Q> {
    if f.terms.keys().any(|(_, m)| m.count_ones() as usize != f.n) {
        return invalid("integrand is not of top degree");
    }
    Ok(integrate(f))
}

/// Whitney elementary form `ω_{i₀…i_k}` on `Δⁿ` with the `k!` normalization.
pub fn whitney_form(n: usize, idx: &[usize]) -> Result<PolyForm> {
    if idx.is_empty() || idx.windows(2).any(|w| w[0] >= w[1]) || *idx.last().unwrap() > n {
        return invalid("indices must be strictly increasing and at most n");
    }
    let k = idx.len() - 1;
    let mut out = PolyForm::zero(n);
    for j in 0..=k {
        let mut t = PolyForm::bary(n, idx[j]);
        for (l, &i) in idx.iter().enumerate() {
            if l != j {
                t = t.mul(&PolyForm::dbary(n, i));
            }
        }
        out = out.add(&t.scale(&sign_q(j % 2 == 1)));
    }
    Ok(out.scale(&factorial(k)))
}

/// Canonical coordinates to the vertex chart `s_j = u_j`.
pub fn to_chart(f: &PolyForm) -> PolyForm {
    let n = f.n;
    let mut vars = Vec::new();
    let mut dvars = Vec::new();
    for j in 0..n {
        // canonical position j is u_{j+1}
        if j + 1 < n {
            vars.push(PolyForm::var(n, j + 1));
            dvars.push(PolyForm::dvar(n, j + 1));
        } else {
            let mut v = PolyForm::one(n);
            let mut dv = PolyForm::zero(n);
            for i in 0..n {
                v = v.sub(&PolyForm::var(n, i));
                dv = dv.sub(&PolyForm::dvar(n, i));
            }
            vars.push(v);
            dvars.push(dv);
        }
    }
    f.substitute(n, &vars, &dvars)
}

/// Vertex chart back to canonical coordinates.
pub fn from_chart(f: &PolyForm) -> PolyForm {
    let n = f.n;
    let vars: Vec<PolyForm> = (0..n).map(|j| PolyForm::bary(n, j)).collect();
    let dvars: Vec<PolyForm> = (0..n).map(|j| PolyForm::dbary(n, j)).collect();
    f.substitute(n, &vars, &dvars)
}

/// The chart coordinate `s_j = u_j` written canonically.
pub fn chart_coord(n: usize, j: usize) -> PolyForm {
    PolyForm::bary(n, j)
}

pub fn chart_dcoord(n: usize, j: usize) -> PolyForm {
    PolyForm::dbary(n, j)
}

/// Pullback of a form on `Δ²` along the edge `(s₀,s₁) = (t, 1−t)`.
pub fn restrict_edge(f: &PolyForm) -> Result<PolyForm> {
    if f.n != 2 {
        return invalid("restrict_edge expects a form on the 2-simplex");
    }
    face(2, f)
}

/// Exact division of every coefficient polynomial by `g` (positional
/// variables as in `f`).
pub fn poly_divide(f: &PolyForm, g: &MPoly) -> Result<PolyForm> {
    if g.is_zero() {
        return Err(Error::NotDivisible("division by zero".into()));
    }
    let n = f.n;
    let ord = MonomialOrder::Lex;
    let mut by_mask: BTreeMap<u32, MPoly> = BTreeMap::new();
    for ((e, m), c) in &f.terms {
        by_mask.entry(*m).or_insert_with(|| MPoly::zero(n)).add_term(e.clone(), c.clone());
    }
    let (ge, gc) = g.lead(ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
    let mut out = PolyForm::zero(n);
    for (m, mut p) in by_mask {
        while let Some((e, c)) = p.lead(ord).map(|(e, c)| (e.clone(), c.clone())) {
            if !e.iter().zip(&ge).all(|(a, b)| a >= b) {
                return Err(Error::NotDivisible(format!("coefficient of dt-mask {m} is not divisible")));
            }
            let shift: Vec<u32> = e.iter().zip(&ge).map(|(a, b)| a - b).collect();
            let qc = &c / &gc;
            p = p.sub(&g.mul_term(&shift, &qc));
            out.add_term(shift, m, qc);
        }
    }
    Ok(out)
}

/// Chart homotopy `K` with base vertex `s = 0`, satisfying
/// `dK + Kd = 1 − P` where `P` is evaluation at the base vertex.
/// Implemented for `n ≤ 2`; input and output in chart coordinates.
pub fn chart_homotopy(f: &PolyForm) -> PolyForm {
    match f.n {
        0 => PolyForm::zero(0),
        1 => radial(&f.part(1)),
        2 => {
            let two = f.part(2);
            let k2 = k_top2(&two);
            let one = f.part(1);
            let k1 = radial(&one.sub(&k_top2(&one.d())));
            k1.add(&k2)
        }
        _ => unimplemented!("chart homotopy only for n <= 2"),
    }
}

/// Evaluation at the chart base vertex `s = 0`, as a constant 0-form.
pub fn chart_vertex_projection(f: &PolyForm) -> PolyForm {
    PolyForm::constant(f.n, f.part(0).eval0(&vec![Q::zero(); f.n]))
}

/// Radial homotopy on 1-forms: `s^α ds_i ↦ s_i s^α / (|α|+1)`.
fn radial(f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(f.n);
    for ((e, m), c) in &f.terms {
        debug_assert_eq!(m.count_ones(), 1);
        let i = m.trailing_zeros() as usize;
        let deg: u32 = e.iter().sum();
        let mut e2 = e.clone();
        e2[i] += 1;
        out.add_term(e2, 0, c / q(deg as i64 + 1));
    }
    out
}

/// `g ds₀ds₁ ↦ f s₀ ds₁` with `∂₀(s₀ f) = g`.
fn k_top2(f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(2);
    for ((e, m), c) in &f.terms {
        debug_assert_eq!(*m, 3);
        out.add_term(vec![e[0] + 1, e[1]], 2, c / q(e[0] as i64 + 1));
    }
    out
}
