//! Small named instances used by the command-line tool and the test suites.

use crate::cech::{cech_scdgla, CoverData};
use crate::dgla::{BracketEntry, Dgla, DglaMorphism};
use crate::error::{invalid, Result};
use crate::exactalg::{Mat, Q};
use crate::tw::ScDgla;

fn one() -> Q {
    Q::from_integer(1.into())
}

/// `L ⊕ N ⇉ M → 0` with cofaces `(0, g)` and `(h, 0)`.
pub fn pair_of_morphisms(l: &Dgla, n: &Dgla, m: &Dgla, h: &DglaMorphism, g: &DglaMorphism) -> Result<ScDgla> {
    h.check(l, m)?;
    g.check(n, m)?;
    let sum = Dgla::direct_sum(&[l, n]);
    let emb = Dgla::sum_embeddings(&[l, n], &sum.space);
    let mut d0 = Mat::zeros(m.dim(), sum.dim());
    let mut d1 = Mat::zeros(m.dim(), sum.dim());
    for row in 0..m.dim() {
        for (c, &col) in emb[1].iter().enumerate() {
            d0.set(row, col, g.matrix.get(row, c).clone());
        }
        for (c, &col) in emb[0].iter().enumerate() {
            d1.set(row, col, h.matrix.get(row, c).clone());
        }
    }
    let zero = Dgla::zero();
    let z = DglaMorphism::zero(m, &zero);
    ScDgla::new(
        vec![sum, m.clone(), zero],
        vec![vec![DglaMorphism { matrix: d0 }, DglaMorphism { matrix: d1 }], vec![z.clone(), z.clone(), z]],
    )
}

/// `a` (deg 0), `v` (deg 1) with `[a, v] = v`.
pub fn affine_line() -> Dgla {
    Dgla::build(&[(0, 1), (1, 1)], &[], &[BracketEntry::new(0, 0, 1, 0, 0, one())]).expect("valid DGLA")
}

/// `e` (deg −1), `a, b` (deg 0), `v` (deg 1) with `de = a` and `b` acting by
/// weight one on `e, a, v`. Its cohomology vanishes in negative degrees but
/// degree −1 is nonzero, so homotopy terms appear in cocycles.
pub fn weighted() -> Dgla {
    Dgla::build(
        &[(-1, 1), (0, 2), (1, 1)],
        &[(-1, 0, 0, one())],
        &[
            BracketEntry::new(0, 1, -1, 0, 0, one()),
            BracketEntry::new(0, 1, 0, 0, 0, one()),
            BracketEntry::new(0, 1, 1, 0, 0, one()),
        ],
    )
    .expect("valid DGLA")
}

/// `e` (deg −1), `a` (deg 0), zero differential and bracket: `H^{−1} ≠ 0`.
pub fn with_h_minus1() -> Dgla {
    Dgla::build(&[(-1, 1), (0, 1)], &[], &[]).expect("valid DGLA")
}

/// A bundled example: the semicosimplicial DGLA and, for Čech examples, its cover.
#[derive(Debug, Clone)]
pub struct Bundled {
    pub name: &'static str,
    pub g: ScDgla,
    pub cover: Option<CoverData>,
    /// Whether `H^{−1}(g₂) = 0`.
    pub hypothesis: bool,
}

pub const BUNDLED: [&str; 5] = ["pair_of_morphisms", "constant_cover", "point_sheaf", "trivial", "negative_control"];

/// Looks up a bundled example by name.
pub fn bundled(name: &str) -> Result<Bundled> {
    let cover = |name, c: CoverData, hypothesis| -> Result<Bundled> {
        Ok(Bundled { name, g: cech_scdgla(&c)?, cover: Some(c), hypothesis })
    };
    match name {
        "pair_of_morphisms" => {
            // L = M = affine line with h = id, N = ⟨w⟩ in degree 1 with g(w) = v
            let m = affine_line();
            let n = Dgla::build(&[(1, 1)], &[], &[])?;
            let mut gm = Mat::zeros(2, 1);
            gm.set(1, 0, one());
            let g = pair_of_morphisms(&m, &n, &m, &DglaMorphism::identity(&m), &DglaMorphism { matrix: gm })?;
            Ok(Bundled { name: "pair_of_morphisms", g, cover: None, hypothesis: true })
        }
        "constant_cover" => cover("constant_cover", CoverData::constant(&weighted(), 3)?, true),
        "point_sheaf" => cover("point_sheaf", CoverData::point_sheaf(&weighted(), 3, &[0, 1])?, true),
        "trivial" => {
            let z = Dgla::zero();
            let zm = DglaMorphism::zero(&z, &z);
            let g = ScDgla::new(vec![z.clone(), z.clone(), z], vec![vec![zm.clone(), zm.clone()], vec![zm.clone(), zm.clone(), zm]])?;
            Ok(Bundled { name: "trivial", g, cover: None, hypothesis: true })
        }
        "negative_control" => cover("negative_control", CoverData::constant(&with_h_minus1(), 3)?, false),
        _ => invalid(format!("unknown bundled instance {name:?}; known: {}", BUNDLED.join(", "))),
    }
}
