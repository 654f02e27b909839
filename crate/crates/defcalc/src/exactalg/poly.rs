use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::scalar::{fmt_q, Q};

/// Monomial order used by the Gröbner engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> MPoly {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> MPoly {
        let mut p = MPoly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars.max(o.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn mul_term(&self, e: &[u32], c: &Q) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e1, c1)| (e1.iter().zip(e).map(|(a, b)| a + b).collect(), c1 * c))
                .collect(),
        }
    }

    /// Leading exponent and coefficient in the given order.
    pub fn lead(&self, ord: MonomialOrder) -> Option<(&Vec<u32>, &Q)> {
        match ord {
            MonomialOrder::Lex => self.terms.iter().next_back(),
            MonomialOrder::GrevLex => self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0)),
        }
    }

    pub fn make_monic(&self, ord: MonomialOrder) -> MPoly {
        match self.lead(ord) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Substitutes the value `v` for variable `i`.
    pub fn subst_value(&self, i: usize, v: &Q) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            let mut f = c.clone();
            for _ in 0..k {
                f *= v;
            }
            r.add_term(e2, f);
        }
        r
    }

    pub fn eval(&self, pt: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
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

    /// Whether every term has total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.total_degree() <= 1
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([fmt_q(c), e]))
                .collect(),
        )
    }
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_q(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    #[test]
    fn grevlex_order() {
        let o = MonomialOrder::GrevLex;
        assert_eq!(o.cmp(&[2, 0], &[0, 1]), Ordering::Greater);
        // x*z < y^2 in grevlex (last variable penalized)
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn arithmetic() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let expect = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expect);
        assert_eq!(p.subst_value(1, &q(1)), x.mul(&x).sub(&MPoly::one(2)));
    }
}
