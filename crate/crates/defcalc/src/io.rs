//! JSON reading and writing for every input and output type. Rationals are
//! written `"p/q"` (or `"p"`), matrices as lists of rows.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::artin::{make_dual_numbers, ArtinAlgebra};
use crate::cech::{CoverData, Tuple};
use crate::dgla::{BracketEntry, Dgla, DglaMorphism};
use crate::error::{invalid, Result};
use crate::exactalg::{fmt_q, parse_q, Mat, Q};
use crate::forms::PolyForm;
use crate::graded::{GradedMap, GradedSpace};
use crate::h1sc::{EquivWitness, Z1Element};
use crate::tw::{AugmentedScDgla, ScDgla, TwElement};

pub fn q_to_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => invalid(format!("expected a rational, got {v}")),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| crate::Error::Invalid(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| crate::Error::Invalid(format!("{what} must be a list")))
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| crate::Error::Invalid(format!("{what} must be an integer")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    usize::try_from(int(v, what)?).or_else(|_| invalid(format!("{what} must be nonnegative")))
}

fn vec_from_json(v: &Value) -> Result<Vec<Q>> {
    array(v, "vector")?.iter().map(q_from_json).collect()
}

fn vec_to_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_to_json).collect())
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array((0..m.rows).map(|r| vec_to_json(&(0..m.cols).map(|c| m.get(r, c).clone()).collect::<Vec<_>>())).collect())
}

/// A list of rows, or `{"entries": [[row, col, "p/q"], …]}`; an empty list
/// is the zero matrix of the expected shape.
pub fn mat_from_json(v: &Value, rows: usize, cols: usize) -> Result<Mat> {
    let mut m = Mat::zeros(rows, cols);
    if let Some(entries) = v.get("entries") {
        for e in array(entries, "entries")? {
            let e = array(e, "entry")?;
            if e.len() != 3 {
                return invalid("entries are [row, col, value]");
            }
            let (r, c) = (index(&e[0], "row")?, index(&e[1], "col")?);
            if r >= rows || c >= cols {
                return invalid("matrix entry out of range");
            }
            m.set(r, c, q_from_json(&e[2])?);
        }
        return Ok(m);
    }
    let list = array(v, "matrix")?;
    if list.is_empty() {
        return Ok(m);
    }
    if list.len() != rows {
        return invalid(format!("matrix has {} rows, expected {rows}", list.len()));
    }
    for (r, row) in list.iter().enumerate() {
        let row = vec_from_json(row)?;
        if row.len() != cols {
            return invalid(format!("matrix row has {} entries, expected {cols}", row.len()));
        }
        for (c, x) in row.into_iter().enumerate() {
            m.set(r, c, x);
        }
    }
    Ok(m)
}

pub fn artin_to_json(a: &ArtinAlgebra) -> Value {
    let mut products = vec![];
    for i in 0..a.dim() {
        for j in i..a.dim() {
            if a.table[i][j].iter().any(|c| !c.is_zero()) {
                products.push(json!([i, j, vec_to_json(&a.table[i][j])]));
            }
        }
    }
    json!({"ideal_basis": a.names, "products": products})
}

/// `{"ideal_basis": […], "products": [[i, j, coeffs]…]}` or the shorthand
/// `{"dual_numbers": n}` for `ℚ[ε]/εⁿ`.
pub fn artin_from_json(v: &Value) -> Result<ArtinAlgebra> {
    if let Some(n) = v.get("dual_numbers") {
        return make_dual_numbers(index(n, "dual_numbers")?);
    }
    let names: Vec<String> = array(field(v, "ideal_basis")?, "ideal_basis")?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| crate::Error::Invalid("basis names are strings".into())))
        .collect::<Result<_>>()?;
    let r = names.len();
    let mut table = vec![vec![vec![Q::zero(); r]; r]; r];
    if let Some(ps) = v.get("products") {
        for p in array(ps, "products")? {
            let p = array(p, "product")?;
            if p.len() != 3 {
                return invalid("products are [i, j, coefficients]");
            }
            let (i, j) = (index(&p[0], "i")?, index(&p[1], "j")?);
            let c = vec_from_json(&p[2])?;
            if i >= r || j >= r || c.len() != r {
                return invalid("product entry out of range");
            }
            table[i][j] = c.clone();
            table[j][i] = c;
        }
    }
    ArtinAlgebra::new(names, table)
}

pub fn space_to_json(s: &GradedSpace) -> Value {
    let dims: Map<String, Value> = s.dims.iter().map(|(j, n)| (j.to_string(), json!(n))).collect();
    json!({ "dims": dims })
}

pub fn space_from_json(v: &Value) -> Result<GradedSpace> {
    let dims = field(v, "dims")?.as_object().ok_or_else(|| crate::Error::Invalid("dims must be an object".into()))?;
    let mut out = vec![];
    for (k, n) in dims {
        let j: i32 = k.parse().or_else(|_| invalid(format!("bad degree {k}")))?;
        out.push((j, index(n, "dimension")?));
    }
    Ok(GradedSpace::new(out))
}

pub fn map_to_json(m: &GradedMap) -> Value {
    let blocks: Map<String, Value> = m.blocks.iter().map(|(j, b)| (j.to_string(), mat_to_json(b))).collect();
    json!({"shift": m.shift, "blocks": blocks})
}

pub fn map_from_json(v: &Value, source: &GradedSpace, target: &GradedSpace) -> Result<GradedMap> {
    let shift = int(field(v, "shift")?, "shift")? as i32;
    let mut blocks = BTreeMap::new();
    if let Some(bs) = v.get("blocks") {
        let bs = bs.as_object().ok_or_else(|| crate::Error::Invalid("blocks must be an object".into()))?;
        for (k, b) in bs {
            let j: i32 = k.parse().or_else(|_| invalid(format!("bad degree {k}")))?;
            blocks.insert(j, mat_from_json(b, target.dim(j + shift), source.dim(j))?);
        }
    }
    GradedMap::new(source.clone(), target.clone(), shift, blocks)
}

pub fn dgla_to_json(l: &Dgla) -> Value {
    let bracket: Vec<Value> = l
        .bracket_entries()
        .iter()
        .map(|e| json!([e.deg_a, e.idx_a, e.deg_b, e.idx_b, e.idx_out, fmt_q(&e.coeff)]))
        .collect();
    json!({"space": space_to_json(&l.space), "d": map_to_json(&l.d_graded()), "bracket": bracket})
}

/// Brackets are completed by graded antisymmetry on load.
pub fn dgla_from_json(v: &Value) -> Result<Dgla> {
    let space = space_from_json(field(v, "space")?)?;
    let d = match v.get("d") {
        Some(d) => map_from_json(d, &space, &space)?,
        None => GradedMap::zero(space.clone(), space.clone(), 1),
    };
    let mut entries = vec![];
    if let Some(bs) = v.get("bracket") {
        for b in array(bs, "bracket")? {
            let b = array(b, "bracket entry")?;
            if b.len() != 6 {
                return invalid("bracket entries are [dega, ia, degb, ib, iout, coeff]");
            }
            entries.push(BracketEntry::new(
                int(&b[0], "dega")? as i32,
                index(&b[1], "ia")?,
                int(&b[2], "degb")? as i32,
                index(&b[3], "ib")?,
                index(&b[4], "iout")?,
                q_from_json(&b[5])?,
            ));
        }
    }
    Dgla::new(space, &d, &entries)
}

pub fn scdgla_to_json(g: &ScDgla) -> Value {
    let levels: Vec<Value> = g.levels.iter().map(|l| dgla_to_json(l)).collect();
    let mut cofaces = vec![];
    for i in 1..=g.top() {
        for k in 0..=i {
            cofaces.push(json!({"i": i, "k": k, "map": mat_to_json(&g.coface(k, i).matrix)}));
        }
    }
    json!({"levels": levels, "cofaces": cofaces})
}

/// Missing cofaces are zero.
pub fn scdgla_from_json(v: &Value) -> Result<ScDgla> {
    let levels: Vec<Dgla> = array(field(v, "levels")?, "levels")?.iter().map(dgla_from_json).collect::<Result<_>>()?;
    let mut cofaces: Vec<Vec<DglaMorphism>> = vec![vec![]];
    for i in 1..levels.len() {
        cofaces.push((0..=i).map(|_| DglaMorphism::zero(&levels[i - 1], &levels[i])).collect());
    }
    if let Some(cs) = v.get("cofaces") {
        for c in array(cs, "cofaces")? {
            let (i, k) = (index(field(c, "i")?, "i")?, index(field(c, "k")?, "k")?);
            if i == 0 || i >= levels.len() || k > i {
                return invalid(format!("no coface ∂_{{{k},{i}}}"));
            }
            let m = mat_from_json(field(c, "map")?, levels[i].dim(), levels[i - 1].dim())?;
            cofaces[i][k] = DglaMorphism { matrix: m };
        }
    }
    ScDgla::new(levels, cofaces)
}

/// `{"base": dgla, "map": matrix}` next to the levels.
pub fn augmented_from_json(v: &Value) -> Result<AugmentedScDgla> {
    let g = scdgla_from_json(v)?;
    let aug = field(v, "augmentation")?;
    let base = dgla_from_json(field(aug, "base")?)?;
    let m = mat_from_json(field(aug, "map")?, g.levels[0].dim(), base.dim())?;
    AugmentedScDgla::new(base, g, DglaMorphism { matrix: m })
}

fn tuple_key(t: &[usize], labels: &[String]) -> String {
    let parts: Vec<&str> = t.iter().map(|&i| labels[i].as_str()).collect();
    if labels.iter().all(|l| l.chars().count() == 1) {
        parts.concat()
    } else {
        parts.join(",")
    }
}

fn parse_key(k: &str, labels: &[String]) -> Result<Tuple> {
    let parts: Vec<String> = if k.contains(',') { k.split(',').map(|s| s.trim().to_string()).collect() } else { k.chars().map(|c| c.to_string()).collect() };
    let mut t = vec![];
    for p in parts {
        match labels.iter().position(|l| *l == p) {
            Some(i) => t.push(i),
            None => return invalid(format!("unknown index {p:?} in {k:?}")),
        }
    }
    t.sort_unstable();
    Ok(t)
}

pub fn cover_to_json(c: &CoverData, labels: &[String]) -> Value {
    let mut locals = Map::new();
    let mut restrictions = vec![];
    for n in 0..=crate::cech::TOP {
        for t in c.tuples(n) {
            if c.local(&t).dim() == 0 {
                continue;
            }
            locals.insert(tuple_key(&t, labels), dgla_to_json(c.local(&t)));
            for k in 0..t.len() {
                let mut s = t.clone();
                s.remove(k);
                if n > 0 {
                    let f = c.restriction(&s, &t).expect("face inclusion");
                    restrictions.push(json!({"from": tuple_key(&s, labels), "to": tuple_key(&t, labels), "map": mat_to_json(&f.matrix)}));
                }
            }
        }
    }
    json!({"indices": labels, "locals": locals, "restrictions": restrictions})
}

/// Index labels are strings or integers; tuple keys concatenate single
/// character labels (`"01"`) or join longer ones with commas.
pub fn cover_from_json(v: &Value) -> Result<(CoverData, Vec<String>)> {
    let labels: Vec<String> = array(field(v, "indices")?, "indices")?
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => invalid("indices are strings or integers"),
        })
        .collect::<Result<_>>()?;
    let mut locals = BTreeMap::new();
    if let Some(ls) = v.get("locals") {
        let ls = ls.as_object().ok_or_else(|| crate::Error::Invalid("locals must be an object".into()))?;
        for (k, d) in ls {
            locals.insert(parse_key(k, &labels)?, dgla_from_json(d)?);
        }
    }
    let zero = Dgla::zero();
    let mut res = BTreeMap::new();
    if let Some(rs) = v.get("restrictions") {
        for r in array(rs, "restrictions")? {
            let from = parse_key(field(r, "from")?.as_str().unwrap_or_default(), &labels)?;
            let to = parse_key(field(r, "to")?.as_str().unwrap_or_default(), &labels)?;
            let (src, tgt) = (locals.get(&from).unwrap_or(&zero), locals.get(&to).unwrap_or(&zero));
            let m = mat_from_json(field(r, "map")?, tgt.dim(), src.dim())?;
            res.insert((from, to), DglaMorphism { matrix: m });
        }
    }
    Ok((CoverData::new(labels.len(), locals, res)?, labels))
}

/// Homogeneous element of `L ⊗ m_A` as `{"degree": j, "coeffs": [[c_e…]…]}`
/// with one row per basis vector of degree `j`.
pub fn element_to_json(l: &Dgla, x: &[Q], r: usize, degree: i32) -> Value {
    let rows: Vec<Value> = l.range(degree).map(|i| vec_to_json(&x[i * r..(i + 1) * r])).collect();
    json!({"degree": degree, "coeffs": rows})
}

pub fn element_from_json(l: &Dgla, v: &Value, r: usize) -> Result<Vec<Q>> {
    let degree = int(field(v, "degree")?, "degree")? as i32;
    let rows = array(field(v, "coeffs")?, "coeffs")?;
    let range = l.range(degree);
    if rows.len() != range.len() {
        return invalid(format!("expected {} rows in degree {degree}, got {}", range.len(), rows.len()));
    }
    let mut out = vec![Q::zero(); l.dim() * r];
    for (i, row) in range.zip(rows) {
        let row = vec_from_json(row)?;
        if row.len() != r {
            return invalid(format!("expected {r} coefficients per row"));
        }
        out[i * r..(i + 1) * r].clone_from_slice(&row);
    }
    Ok(out)
}

pub fn z1_to_json(g: &ScDgla, z: &Z1Element, r: usize) -> Value {
    let n = match &z.n {
        Some(n) if g.top() >= 2 => element_to_json(&g.levels[2], n, r, -1),
        _ => Value::Null,
    };
    json!({"l": element_to_json(&g.levels[0], &z.l, r, 1), "m": element_to_json(&g.levels[1], &z.m, r, 0), "n": n})
}

/// Reads `(l, m)`; a supplied `n` is returned for comparison but never trusted.
pub fn z1_from_json(g: &ScDgla, v: &Value, r: usize) -> Result<(Vec<Q>, Vec<Q>, Option<Vec<Q>>)> {
    let l = element_from_json(&g.levels[0], field(v, "l")?, r)?;
    let m = element_from_json(&g.levels[1], field(v, "m")?, r)?;
    let n = match v.get("n") {
        Some(Value::Null) | None => None,
        Some(n) if g.top() >= 2 => Some(element_from_json(&g.levels[2], n, r)?),
        Some(_) => return invalid("n given without a level 2"),
    };
    Ok((l, m, n))
}

pub fn witness_to_json(g: &ScDgla, w: &EquivWitness, r: usize) -> Value {
    json!({"a": element_to_json(&g.levels[0], &w.a, r, 0), "b": element_to_json(&g.levels[1], &w.b, r, -1)})
}

pub fn witness_from_json(g: &ScDgla, v: &Value, r: usize) -> Result<EquivWitness> {
    Ok(EquivWitness {
        a: element_from_json(&g.levels[0], field(v, "a")?, r)?,
        b: element_from_json(&g.levels[1], field(v, "b")?, r)?,
    })
}

pub fn form_from_json(n: usize, v: &Value) -> Result<PolyForm> {
    let mut f = PolyForm::zero(n);
    for t in array(v, "form")? {
        let t = array(t, "form term")?;
        if t.len() != 3 {
            return invalid("form terms are [coeff, exponents, differentials]");
        }
        let c = q_from_json(&t[0])?;
        let e: Vec<u32> = array(&t[1], "exponents")?.iter().map(|x| index(x, "exponent").map(|k| k as u32)).collect::<Result<_>>()?;
        if e.len() != n {
            return invalid(format!("expected {n} exponents"));
        }
        let mut mask = 0u32;
        for d in array(&t[2], "differentials")? {
            let j = index(d, "differential")?;
            if j == 0 || j > n {
                return invalid("differentials are numbered 1..n");
            }
            mask |= 1 << (j - 1);
        }
        f.add_term(e, mask, c);
    }
    Ok(f)
}

/// One list of forms per level, indexed like the tensor coordinates.
pub fn tw_to_json(y: &TwElement) -> Value {
    Value::Array(y.iter().map(|lvl| Value::Array(lvl.iter().map(|f| f.to_json()).collect())).collect())
}

pub fn tw_from_json(g: &ScDgla, v: &Value, r: usize) -> Result<TwElement> {
    let lvls = array(v, "Thom-Whitney element")?;
    if lvls.len() != g.levels.len() {
        return invalid(format!("expected {} levels", g.levels.len()));
    }
    lvls.iter()
        .enumerate()
        .map(|(n, lv)| {
            let fs = array(lv, "level")?;
            if fs.len() != g.levels[n].dim() * r {
                return invalid(format!("level {n} needs {} forms", g.levels[n].dim() * r));
            }
            fs.iter().map(|f| form_from_json(n, f)).collect()
        })
        .collect()
}
