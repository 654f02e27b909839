
use super::poly::{MPoly, MonomialOrder};
use crate::error::{Error, Result};

/// Default cap on the number of S-polynomials Buchberger may reduce.
pub const DEFAULT_GROEBNER_BUDGET: usize = 20_000;

/// Generators over a common variable set together with a monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyIdeal {
    pub nvars: usize,
    pub generators: Vec<MPoly>,
    pub order: MonomialOrder,
}

impl PolyIdeal {
    pub fn new(nvars: usize, generators: Vec<MPoly>, order: MonomialOrder) -> PolyIdeal {
        assert!(generators.iter().all(|g| g.nvars == nvars), "generators must share variables");
        PolyIdeal { nvars, generators, order }
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| !g.is_zero() && g.is_constant())
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Full reduction of `f` modulo `g` (normal form).
pub fn reduce(f: &MPoly, g: &[MPoly], ord: MonomialOrder) -> MPoly {
    let leads: Vec<(Vec<u32>, _)> = g
        .iter()
        .filter_map(|p| p.lead(ord).map(|(e, c)| (e.clone(), c.clone())))
        .collect();
    let live: Vec<&MPoly> = g.iter().filter(|p| !p.is_zero()).collect();
    let mut p = f.clone();
    let mut rem = MPoly::zero(f.nvars);
    while let Some((e, c)) = p.lead(ord).map(|(e, c)| (e.clone(), c.clone())) {
        match leads.iter().position(|(le, _)| divides(le, &e)) {
            Some(k) => {
                let (le, lc) = &leads[k];
                let shift: Vec<u32> = e.iter().zip(le).map(|(a, b)| a - b).collect();
                let fac = -(&c / lc);
                p = p.add(&live[k].mul_term(&shift, &fac));
            }
            None => {
                p.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
    }
    rem
}

fn s_poly(f: &MPoly, g: &MPoly, ord: MonomialOrder) -> MPoly {
    let (ef, cf) = f.lead(ord).unwrap();
    let (eg, cg) = g.lead(ord).unwrap();
    let l = lcm(ef, eg);
    let sf: Vec<u32> = l.iter().zip(ef).map(|(a, b)| a - b).collect();
    let sg: Vec<u32> = l.iter().zip(eg).map(|(a, b)| a - b).collect();
    f.mul_term(&sf, &cf.recip()).sub(&g.mul_term(&sg, &cg.recip()))
}

/// Reduced Gröbner basis via Buchberger with the product and chain criteria.
pub fn groebner(ideal: &PolyIdeal, budget: usize) -> Result<PolyIdeal> {
    let ord = ideal.order;
    let n = ideal.nvars;
    let mut basis: Vec<MPoly> = Vec::new();
    for g in &ideal.generators {
        let r = reduce(g, &basis, ord);
        if !r.is_zero() {
            basis.push(r.make_monic(ord));
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(PolyIdeal::new(n, vec![MPoly::one(n)], ord));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done = std::collections::HashSet::new();
    let mut count = 0usize;
    while let Some((i, j)) = pairs.pop() {
        done.insert((i, j));
        let li = basis[i].lead(ord).unwrap().0.clone();
        let lj = basis[j].lead(ord).unwrap().0.clone();
        // product criterion
        if li.iter().zip(&lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion
        let l = lcm(&li, &lj);
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lk = basis[k].lead(ord).unwrap().0;
            let key = |a: usize, b: usize| (a.min(b), a.max(b));
            divides(lk, &l) && done.contains(&key(i, k)) && done.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        count += 1;
        if count > budget {
            return Err(Error::DegreeBudgetExceeded(format!(
                "Buchberger exceeded {budget} S-polynomial reductions"
            )));
        }
        let s = s_poly(&basis[i], &basis[j], ord);
        let r = reduce(&s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(PolyIdeal::new(n, vec![MPoly::one(n)], ord));
        }
        basis.push(r.make_monic(ord));
        let k = basis.len() - 1;
        for i2 in 0..k {
            pairs.insert(0, (i2, k));
        }
    }
    // minimize
    let leads: Vec<Vec<u32>> = basis.iter().map(|g| g.lead(ord).unwrap().0.clone()).collect();
    let mut keep = Vec::new();
    for (i, li) in leads.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, lj)| {
            j != i && divides(lj, li) && (lj != li || j < i)
        });
        if !redundant {
            keep.push(basis[i].clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<MPoly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (le, lc) = keep[i].lead(ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut tail = keep[i].clone();
        tail.terms.remove(&le);
        let mut r = reduce(&tail, &others, ord);
        r.add_term(le, lc);
        reduced.push(r.make_monic(ord));
    }
    reduced.sort_by(|a, b| ord.cmp(a.lead(ord).unwrap().0, b.lead(ord).unwrap().0));
    Ok(PolyIdeal::new(n, reduced, ord))
}

/// True iff the generators have a common zero over the algebraic closure.
pub fn ideal_has_solution(ideal: &PolyIdeal, budget: usize) -> Result<bool> {
    let nonzero: Vec<MPoly> = ideal.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(true);
    }
    let g = groebner(&PolyIdeal::new(ideal.nvars, nonzero, ideal.order), budget)?;
    Ok(!g.is_unit())
}

impl PolyIdeal {
    /// Checks that every generator of `self` reduces to zero modulo `basis`.
    pub fn reduces_to_zero_mod(&self, basis: &[MPoly]) -> bool {
        self.generators.iter().all(|g| reduce(g, basis, self.order).is_zero())
    }

    /// Checks Buchberger's criterion on `self` viewed as a basis.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        for j in 0..g.len() {
            for i in 0..j {
                if g[i].is_zero() || g[j].is_zero() {
                    continue;
                }
                if !reduce(&s_poly(&g[i], &g[j], self.order), g, self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
