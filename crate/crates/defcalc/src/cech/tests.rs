use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::artin::make_dual_numbers;
use crate::dgla::{bch_many, gauge, mc_defect, LieCtx, TensorCtx};
use crate::exactalg::q;
use crate::h1sc::{random_z1, z1_check, Z1Status};
use crate::instances::weighted;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dual(n: usize) -> Arc<ArtinAlgebra> {
    Arc::new(make_dual_numbers(n).unwrap())
}

/// Automorphism of the weighted DGLA: `e, a ↦ 2e, 2a`, `b ↦ b`, `v ↦ 3v`.
fn rescale() -> DglaMorphism {
    let mut m = Mat::identity(4);
    m.set(0, 0, q(2));
    m.set(1, 1, q(2));
    m.set(3, 3, q(3));
    DglaMorphism::new(&weighted(), &weighted(), m).unwrap()
}

fn abelian_line() -> Dgla {
    Dgla::build(&[(0, 1)], &[], &[]).unwrap()
}

#[test]
fn single_set_cover() {
    let c = CoverData::constant(&weighted(), 1).unwrap();
    let g = cech_scdgla(&c).unwrap();
    assert_eq!(*g.levels[0], weighted());
    assert_eq!(g.levels[1].dim(), 0);
    assert_eq!(g.levels[2].dim(), 0);
}

#[test]
fn two_set_cover_unrolled() {
    let l = weighted();
    let c = CoverData::from_fn(2, |_| l.clone(), |s, _| if s == [1] { rescale() } else { DglaMorphism::identity(&l) }).unwrap();
    let g = cech_scdgla(&c).unwrap();
    assert_eq!(g.levels[0].dim(), 8);
    assert_eq!(*g.levels[1], l);
    // x = (x₀, x₁): ∂₀x = x₁|_{01}, ∂₁x = x₀|_{01}
    let x0: Vec<Q> = (1..=4).map(q).collect();
    let x1: Vec<Q> = (5..=8).map(q).collect();
    let x = c.assemble(0, &[(vec![0], x0.clone()), (vec![1], x1.clone())].into_iter().collect(), 1);
    assert_eq!(g.coface(0, 1).apply(&x), rescale().apply(&x1));
    assert_eq!(g.coface(1, 1).apply(&x), x0);
}

#[test]
fn incoherent_restrictions_are_rejected() {
    let l = weighted();
    let r = CoverData::from_fn(3, |_| l.clone(), |s, t| if s == [0, 1] && t == [0, 1, 2] { rescale() } else { DglaMorphism::identity(&l) });
    assert!(matches!(r, Err(Error::Check(_))));
    // a missing restriction into a nonzero local
    let mut locals = BTreeMap::new();
    locals.insert(vec![0], l.clone());
    locals.insert(vec![1], l.clone());
    locals.insert(vec![0, 1], l.clone());
    assert!(CoverData::new(2, locals, BTreeMap::new()).is_err());
}

#[test]
fn abelian_cover_matches_nerve_cohomology() {
    // full triangle: contractible nerve
    let g = cech_scdgla(&CoverData::constant(&abelian_line(), 3).unwrap()).unwrap();
    let (c, _) = tot_complex(&g);
    assert_eq!((c.h_dim(0), c.h_dim(1), c.h_dim(2)), (1, 0, 0));
    // hollow triangle: a circle, C⁰ = C¹ = ℚ³, δ of rank 2
    let g = cech_scdgla(&CoverData::on_nerve(&abelian_line(), 3, |t| t.len() < 3).unwrap()).unwrap();
    let (c, _) = tot_complex(&g);
    assert_eq!((c.h_dim(0), c.h_dim(1), c.h_dim(2)), (1, 1, 0));
    // point sheaf supported on two of three opens
    let g = cech_scdgla(&CoverData::point_sheaf(&abelian_line(), 3, &[0, 2]).unwrap()).unwrap();
    let (c, _) = tot_complex(&g);
    assert_eq!((c.h_dim(0), c.h_dim(1)), (1, 0));
}

/// The deformation equations written per open, per pair and per triple.
fn unrolled(c: &CoverData, a: &Arc<ArtinAlgebra>, l: &[Q], m: &[Q], n: Option<&[Q]>) -> bool {
    let r = a.dim();
    let ctx = TensorCtx::new(Arc::new(weighted()), a.clone(), Q::zero());
    let li = |i: usize| c.component(&[i], l, r).unwrap();
    let mij = |i: usize, j: usize| c.component(&[i, j], m, r).unwrap();
    for i in 0..3 {
        if !ctx.is_zero(&mc_defect(&ctx, &li(i))) {
            return false;
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if li(i) != gauge(&ctx, &mij(i, j), &li(j)) {
            return false;
        }
    }
    let Some(n) = n else { return false };
    let n = c.component(&[0, 1, 2], n, r).unwrap();
    let lhs = bch_many(&ctx, &[mij(1, 2), ctx.neg(&mij(0, 2)), mij(0, 1)]);
    lhs == ctx.add(&ctx.d(&n), &ctx.bracket(&li(1), &n))
}

#[test]
fn deformation_equations_specialize() {
    let c = CoverData::constant(&weighted(), 3).unwrap();
    let a = dual(3);
    let h = H1Ctx::new(Arc::new(cech_scdgla(&c).unwrap()), a.clone()).unwrap();
    let mut rng = seeded(1);
    for _ in 0..4 {
        let z = random_z1(&h, &mut rng, 0.6, 20).unwrap();
        assert!(unrolled(&c, &a, &z.l, &z.m, z.n.as_deref()));
        // a perturbed pair fails both ways
        let mut m = z.m.clone();
        let b01 = c.assemble(1, &[(vec![0, 1], vec![Q::zero(), Q::zero(), Q::zero(), Q::zero(), q(1), Q::zero(), Q::zero(), Q::zero()])].into_iter().collect(), 2);
        m = h.c[1].add(&m, &b01);
        let st = z1_check(&h, &z.l, &m).unwrap();
        let n = match &st {
            Z1Status::Member(e) => e.n.clone(),
            Z1Status::Fails(_) => None,
        };
        assert_eq!(st.member().is_some(), unrolled(&c, &a, &z.l, &m, n.as_deref()));
    }
}

fn coarse_to_fine() -> Refinement {
    let l = weighted();
    Refinement::canonical(CoverData::constant(&l, 2).unwrap(), CoverData::constant(&l, 3).unwrap(), vec![vec![0, 0, 1], vec![0, 1, 1]]).unwrap()
}

#[test]
fn identity_refinement() {
    let c = CoverData::constant(&weighted(), 3).unwrap();
    let r = Refinement::canonical(c.clone(), c, vec![vec![0, 1, 2]]).unwrap();
    let a = dual(3);
    let h = H1Ctx::new(Arc::new(cech_scdgla(&r.source).unwrap()), a.clone()).unwrap();
    let z = random_z1(&h, &mut seeded(2), 0.6, 20).unwrap();
    let out = refinement_map(&r, 0, &a, z.pair()).unwrap();
    assert_eq!(out.pair(), z.pair());
    let w = refinement_independence(&r, 0, 0, &a, z.pair()).unwrap();
    assert!(w.a.iter().all(|c| c.is_zero()));
}

#[test]
fn refinement_of_planted_and_zero_cocycles() {
    let r = coarse_to_fine();
    let a = dual(3);
    let h = H1Ctx::new(Arc::new(cech_scdgla(&r.source).unwrap()), a.clone()).unwrap();
    let zero = refinement_map(&r, 0, &a, (&h.c[0].zero(), &h.c[1].zero())).unwrap();
    assert!(zero.l.iter().chain(&zero.m).all(|c| c.is_zero()));
    let mut rng = seeded(3);
    for _ in 0..3 {
        let z = random_z1(&h, &mut rng, 0.6, 20).unwrap();
        for which in 0..2 {
            let out = refinement_map(&r, which, &a, z.pair()).unwrap();
            assert!(out.n.is_some());
        }
        // the witness a_α = m_{ψα,φα} relates the two restrictions
        let w = refinement_independence(&r, 0, 1, &a, z.pair()).unwrap();
        let m01 = r.source.component(&[0, 1], &z.m, 2).unwrap();
        // φ = (0,0,1), ψ = (0,1,1): only α = 1 has ψα ≠ φα, with a₁ = m_{10} = −m_{01}
        let a1 = c_component(&w.a, 1);
        assert_eq!(a1, m01.iter().map(|c| -c).collect::<Vec<_>>());
        assert!(c_component(&w.a, 0).iter().chain(&c_component(&w.a, 2)).all(|c| c.is_zero()));
    }
}

fn c_component(x: &[Q], open: usize) -> Vec<Q> {
    CoverData::constant(&weighted(), 3).unwrap().component(&[open], x, 2).unwrap()
}

#[test]
fn abelian_refinement_witness_is_linear() {
    // abelian locals: −m₀ − ∂₁a + m₁ + ∂₀a = db exactly
    let l = Dgla::build(&[(-1, 1), (0, 1), (1, 1)], &[(-1, 0, 0, q(1))], &[]).unwrap();
    let r = Refinement::canonical(CoverData::constant(&l, 2).unwrap(), CoverData::constant(&l, 3).unwrap(), vec![vec![0, 0, 1], vec![0, 1, 1]]).unwrap();
    let a = dual(3);
    let hs = H1Ctx::new(Arc::new(cech_scdgla(&r.source).unwrap()), a.clone()).unwrap();
    let ht = H1Ctx::new(Arc::new(cech_scdgla(&r.target).unwrap()), a.clone()).unwrap();
    let z = random_z1(&hs, &mut seeded(5), 0.7, 20).unwrap();
    let z0 = refinement_map(&r, 0, &a, z.pair()).unwrap();
    let z1 = refinement_map(&r, 1, &a, z.pair()).unwrap();
    let w = refinement_independence(&r, 0, 1, &a, z.pair()).unwrap();
    let c1 = &ht.c[1];
    let lhs = c1.add(&c1.sub(&z1.m, &z0.m), &c1.sub(&ht.coface(0, 1, &w.a), &ht.coface(1, 1, &w.a)));
    assert_eq!(lhs, c1.d(&w.b));
}

#[test]
fn refinement_rejects_bad_comparisons() {
    let l = weighted();
    let mut comps = BTreeMap::new();
    comps.insert((vec![0], vec![0]), rescale());
    comps.insert((vec![0], vec![0, 1]), DglaMorphism::identity(&l));
    let r = Refinement::new(CoverData::constant(&l, 1).unwrap(), CoverData::constant(&l, 2).unwrap(), vec![vec![0, 0]], comps);
    assert!(matches!(r, Err(Error::Check(_))));
    assert!(Refinement::canonical(CoverData::constant(&l, 1).unwrap(), CoverData::constant(&l, 2).unwrap(), vec![vec![0, 3]]).is_err());
}

fn diagonal(c: &CoverData, l: &Dgla) -> AugmentedScDgla {
    let maps = vec![DglaMorphism::identity(l); c.opens()];
    augment_cover(c, l.clone(), &maps).unwrap()
}

#[test]
fn global_sections_examples() {
    let l = weighted();
    // interval nerve
    let c = CoverData::constant(&l, 2).unwrap();
    let rep = global_sections_compare(&diagonal(&c, &l));
    assert!(rep.all_iso(), "{rep:?}");
    assert_eq!(rep.base, rep.tot);
    // single set
    let c = CoverData::constant(&l, 1).unwrap();
    assert!(global_sections_compare(&diagonal(&c, &l)).all_iso());
    // hollow triangle: H¹ of the circle appears on the Čech side only
    let line = abelian_line();
    let c = CoverData::on_nerve(&line, 3, |t| t.len() < 3).unwrap();
    let rep = global_sections_compare(&diagonal(&c, &line));
    assert_eq!(rep.base, vec![1, 0, 0]);
    assert_eq!(rep.tot, vec![1, 1, 0]);
    assert_eq!(rep.iso, vec![true, false, true]);
    // augmentation must be equalized by both cofaces
    let bad = vec![DglaMorphism::identity(&l), DglaMorphism::zero(&l, &l)];
    assert!(augment_cover(&CoverData::constant(&l, 2).unwrap(), l.clone(), &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn refinement_independence_holds(seed in any::<u64>()) {
        let r = coarse_to_fine();
        let a = dual(3);
        let h = H1Ctx::new(Arc::new(cech_scdgla(&r.source).unwrap()), a.clone()).unwrap();
        let z = random_z1(&h, &mut seeded(seed), 0.6, 20).unwrap();
        prop_assert!(refinement_independence(&r, 0, 1, &a, z.pair()).is_ok());
        prop_assert!(refinement_independence(&r, 1, 0, &a, z.pair()).is_ok());
    }

    #[test]
    fn cech_objects_pass_construction_checks(mask in 0u8..8) {
        // nerves of three opens: drop some pairs (and then the triple)
        let pairs = [[0usize, 1], [0, 2], [1, 2]];
        let keep = |t: &[usize]| match t.len() {
            1 => true,
            2 => pairs.iter().enumerate().any(|(k, p)| p == t && mask & (1 << k) == 0),
            _ => mask == 0,
        };
        let c = CoverData::on_nerve(&weighted(), 3, keep).unwrap();
        let g = cech_scdgla(&c).unwrap();
        prop_assert!(g.check().is_ok());
    }
}
