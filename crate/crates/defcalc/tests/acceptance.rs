//! Acceptance suite: one line per criterion. Run with
//! `cargo test -p defcalc --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use defcalc::artin::{make_dual_numbers, small_extension_chain, ArtinAlgebra, SmallExtension};
use defcalc::cech::{cech_scdgla, refinement_independence, refinement_map, CoverData, Refinement};
use defcalc::dgla::random::{random_dgla, random_elem, random_mc, small_q};
use defcalc::dgla::{
    bch, bch_many, gauge, gauge_group_law_check, mc_defect, obstruction_class, project_through, BracketEntry, Dgla, LieCtx,
    Splitting, TensorCtx,
};
use defcalc::exactalg::{q, solve_linear, LinSystem, Mat, Q, DEFAULT_GROEBNER_BUDGET};
use defcalc::h1sc::{
    check_witness, equiv_apply, gauge_01, generate_samples, lift_gauge_degree0, phi_01, phi_02, psi_01, random_gauge,
    random_gauge_01, random_z1, surjectivity_lift, surjectivity_report, tangent_h1sc, verify_main_theorem, z1_check,
    z1_member, z1_transport, EquivWitness, GaugeLift, H1Ctx, LiftVariant, Z1Status,
};
use defcalc::instances::{bundled, weighted};
use defcalc::tw::{
    decompose_mc, normal_form_01, normal_form_02, tot_complex, tot_differential, tw_cohomology_capped, ScDgla, TotElement,
    TwCtx, TwElement,
};
use defcalc::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dual(n: usize) -> Arc<ArtinAlgebra> {
    Arc::new(make_dual_numbers(n).unwrap())
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn cover_g(name: &str) -> Arc<ScDgla> {
    Arc::new(bundled(name).unwrap().g)
}

fn contexts(g: &Arc<ScDgla>, n: usize, cap: u32) -> (H1Ctx, TwCtx) {
    let a = dual(n);
    (H1Ctx::new(g.clone(), a.clone()).unwrap(), TwCtx::new(g.clone(), a, cap))
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(1);
    v
}

fn sign(odd: bool) -> Q {
    if odd {
        q(-1)
    } else {
        q(1)
    }
}

fn axioms() -> Outcome {
    let mut checked = 0;
    for seed in 0..20u64 {
        let l = random_dgla(&mut seeded(seed));
        ok(l.check_axioms(), "construction checks")?;
        let n = l.dim();
        for j in l.degrees() {
            ensure((-2..=2).contains(j), "degree outside [-2, 2]")?;
            ensure(l.range(*j).len() <= 4, "more than 4 basis vectors in one degree")?;
        }
        let add = |x: &[Q], y: &[Q], s: &Q| x.iter().zip(y).map(|(a, b)| a + s * b).collect::<Vec<Q>>();
        for i in 0..n {
            let ei = unit(n, i);
            ensure(l.d_vec(&l.d_vec(&ei)).iter().all(Q::is_zero), format!("seed {seed}: d² ≠ 0"))?;
            for j in 0..n {
                let ej = unit(n, j);
                let (di, dj) = (l.deg(i), l.deg(j));
                // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                let lhs = l.d_vec(&l.bracket_vec(&ei, &ej));
                let rhs = add(&l.bracket_vec(&l.d_vec(&ei), &ej), &l.bracket_vec(&ei, &l.d_vec(&ej)), &sign(di % 2 != 0));
                ensure(lhs == rhs, format!("seed {seed}: Leibniz fails on ({i},{j})"))?;
                for k in 0..n {
                    let ek = unit(n, k);
                    // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                    let lhs = l.bracket_vec(&ei, &l.bracket_vec(&ej, &ek));
                    let rhs = add(
                        &l.bracket_vec(&l.bracket_vec(&ei, &ej), &ek),
                        &l.bracket_vec(&ej, &l.bracket_vec(&ei, &ek)),
                        &sign((di * dj) % 2 != 0),
                    );
                    ensure(lhs == rhs, format!("seed {seed}: Jacobi fails on ({i},{j},{k})"))?;
                }
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} random DGLAs: construction, d² = 0, Leibniz, Jacobi on all basis tuples"))
}

fn gauge_calculus() -> Outcome {
    let mut count = 0;
    let mut seed = 0u64;
    for n in [2usize, 3, 4] {
        let mut here = 0;
        while here < 18 {
            seed += 1;
            ensure(seed < 10_000, "could not find enough Maurer-Cartan samples")?;
            let mut rng = seeded(seed);
            let l = Arc::new(random_dgla(&mut rng));
            let c = TensorCtx::new(l.clone(), dual(n), Q::zero());
            let Some(x) = random_mc(&c, &mut rng, 0.5) else { continue };
            let (a, b, e) = (random_elem(&c, 0, &mut rng, 0.5), random_elem(&c, 0, &mut rng, 0.5), random_elem(&c, 0, &mut rng, 0.5));
            ensure(c.is_zero(&mc_defect(&c, &gauge(&c, &a, &x))), format!("seed {seed}: gauge does not preserve MC"))?;
            ensure(bch(&c, &bch(&c, &a, &b), &e) == bch(&c, &a, &bch(&c, &b, &e)), format!("seed {seed}: BCH not associative"))?;
            ensure(gauge_group_law_check(&c, &a, &b, &x), format!("seed {seed}: group law fails"))?;
            here += 1;
            count += 1;
        }
    }
    Ok(format!("{count} (a, b, x) instances over ℚ[ε]/εⁿ, n = 2, 3, 4"))
}

fn random_tot<R: Rng>(g: &ScDgla, r: usize, rng: &mut R) -> TotElement {
    g.levels.iter().map(|l| (0..l.dim() * r).map(|_| small_q(rng, 0.5)).collect()).collect()
}

fn dupont() -> Outcome {
    let mut rng = seeded(5);
    let mut basis = 0;
    for name in ["constant_cover", "point_sheaf", "pair_of_morphisms"] {
        let g = cover_g(name);
        let tw = TwCtx::new(g.clone(), dual(2), 12);
        let r = tw.r();
        for n in 0..g.levels.len() {
            for v in 0..g.levels[n].dim() * r {
                let mut y: TotElement = g.levels.iter().map(|l| vec![Q::zero(); l.dim() * r]).collect();
                y[n][v] = q(1);
                let e = ok(tw.whitney(&y), "whitney")?;
                ensure(tw.face_compatible(&e), format!("{name}: E(basis) not face compatible"))?;
                ensure(tw.integrate(&e) == y, format!("{name}: I∘E ≠ Id on level {n} index {v}"))?;
                // E is a chain map on basis vectors
                let de = ok(tw.whitney(&tot_differential(&g, &y, r)), "whitney")?;
                ensure(tw.d(&e) == de, format!("{name}: E is not a chain map"))?;
                basis += 1;
            }
        }
        for _ in 0..10 {
            let e = |rng: &mut ChaCha8Rng| tw.whitney(&random_tot(&g, r, rng)).unwrap();
            let x = tw.add(&tw.add(&e(&mut rng), &tw.bracket(&e(&mut rng), &e(&mut rng))), &tw.d(&e(&mut rng)));
            ensure(tw.integrate(&tw.d(&x)) == tot_differential(&g, &tw.integrate(&x), r), format!("{name}: I is not a chain map"))?;
        }
    }
    Ok(format!("I∘E = Id and E chain map on {basis} basis vectors of Tot; I chain map on 30 random forms"))
}

fn normal_forms() -> Outcome {
    // decompose_mc: L = span(a₀, a₁) ⊕ span(v, w), da₀ = v, a₁ acts with weight one
    let l = Arc::new(
        Dgla::build(&[(0, 2), (1, 2)], &[(0, 0, 0, q(1))], &[BracketEntry::new(0, 1, 0, 0, 0, q(1)), BracketEntry::new(0, 1, 1, 0, 0, q(1))])
            .unwrap(),
    );
    let split = Splitting { m_basis: vec![vec![q(0), q(1), q(0), q(0)], vec![q(0), q(0), q(0), q(1)]], c_basis: vec![vec![q(1), q(0), q(0), q(0)]] };
    let a = dual(4);
    let ctx = TensorCtx::new(l.clone(), a.clone(), Q::zero());
    let mut rng = seeded(3);
    let r = ctx.r();
    for i in 0..20 {
        let mut x = ctx.zero();
        let mut c = ctx.zero();
        for e in 0..r {
            x[3 * r + e] = small_q(&mut rng, 0.6);
            c[e] = small_q(&mut rng, 0.6);
        }
        let y = gauge(&ctx, &c, &x);
        let got = ok(decompose_mc(&l, &split, &a, &y), "decompose_mc")?;
        ensure(got == (x, c), format!("decompose_mc sample {i} not recovered"))?;
    }
    // normal forms on levels [0,1] and [0,2]: gauge moves of lifted cocycles
    let mut planted = 0;
    for (name, seed) in [("constant_cover", 7u64), ("pair_of_morphisms", 8)] {
        let (h, tw) = contexts(&cover_g(name), 3, 48);
        let mut rng = seeded(seed);
        for _ in 0..10 {
            let base = match random_z1(&h, &mut rng, 0.6, 20) {
                Some(z) => ok(surjectivity_lift(&h, &tw, &z, LiftVariant::Corrected), "lift")?,
                None => tw.zero(),
            };
            let y = gauge(&tw, &ok(random_gauge(&h, &tw, &mut rng, 0.5), "gauge")?, &base);
            ensure(tw.face_compatible(&y) && tw.is_zero(&mc_defect(&tw, &y)), "planted element is not an MC element")?;
            let nf = ok(normal_form_02(&tw, &y), "normal_form_02")?;
            ensure(nf.assemble(&tw) == y, format!("{name}: normal_form_02 does not reassemble"))?;
            let nf1 = ok(normal_form_01(&tw, &y), "normal_form_01")?;
            ensure(nf1.assemble(&tw)[..] == y[..2], format!("{name}: normal_form_01 does not reassemble"))?;
            planted += 1;
        }
    }
    Ok(format!("decompose_mc on 20 plants; normal_form_01/02 with all face conditions on {planted} plants each"))
}

fn isomorphism_01() -> Outcome {
    let g = cover_g("constant_cover");
    let (h, full) = contexts(&g, 3, 48);
    let tw01 = TwCtx::new(Arc::new(g.restrict_levels(1)), h.a.clone(), 48);
    let mut rng = seeded(11);
    let mut n = 0;
    while n < 20 {
        let Some(z) = random_z1(&h, &mut rng, 0.6, 20) else { continue };
        let y = ok(psi_01(&tw01, &z.l, &z.m), "psi_01")?;
        let back = ok(phi_01(&tw01, &y), "phi_01")?;
        ensure((back.0.as_slice(), back.1.as_slice()) == z.pair(), "phi_01∘psi_01 ≠ Id")?;
        let a = ok(random_gauge(&h, &full, &mut rng, 0.5), "gauge")?;
        let y2 = gauge(&tw01, &a[..2].to_vec(), &y);
        let (l2, m2) = ok(phi_01(&tw01, &y2), "phi_01")?;
        let y3 = ok(psi_01(&tw01, &l2, &m2), "psi_01")?;
        let w = EquivWitness { a: h.c[0].zero(), b: h.c[1].zero() };
        let (a0, a1) = ok(gauge_01(&h, &tw01, &y2, &y3, &w), "gauge_01")?;
        ensure(gauge(&tw01, &vec![tw01.constant(0, &a0), a1], &y2) == y3, "psi_01∘phi_01 witness fails")?;
        n += 1;
    }
    let p = cover_g("pair_of_morphisms");
    let t = tangent_h1sc(&p);
    let tot = tot_complex(&p).0.h_dim(1);
    let capped = tw_cohomology_capped(&p, 3).get(&1).copied().unwrap_or(0);
    ensure(t.agree() && t.cocycle == tot && tot == capped, format!("tangent {t:?}, H¹(Tot) = {tot}, capped TW H¹ = {capped}"))?;
    Ok(format!("round trips and witnessed gauge equivalences on {n} cocycles; pair of morphisms tangent = H¹(Tot) = capped H¹(Tot_TW) = {tot}"))
}

fn constructions_07() -> Outcome {
    let g = cover_g("constant_cover");
    let (h, tw) = contexts(&g, 3, 48);
    let mut rng = seeded(21);
    let (mut n, mut nonzero_n) = (0, 0);
    let mut printed_fail = 0;
    let mut other: Vec<(LiftVariant, usize)> = LiftVariant::ALL.iter().map(|v| (*v, 0)).collect();
    while n < 20 {
        let Some(z) = random_z1(&h, &mut rng, 0.6, 20) else { continue };
        let y = surjectivity_lift(&h, &tw, &z, LiftVariant::Corrected);
        if let Err(Error::NotDivisible(e)) = &y {
            return Err(format!("NotDivisible under the adjudicated variant: {e}"));
        }
        let y = ok(y, "corrected lift")?;
        ensure(tw.face_compatible(&y), "lift not face compatible")?;
        ensure(tw.is_zero(&mc_defect(&tw, &y)), "lift not Maurer-Cartan")?;
        let back = ok(phi_02(&h, &tw, &y), "phi_02")?;
        ensure(back.pair() == z.pair(), "phi_02 round trip fails")?;
        if z.n.iter().flatten().any(|c| !c.is_zero()) {
            nonzero_n += 1;
        }
        for (v, res) in surjectivity_report(&h, &tw, &z) {
            if res.is_err() {
                other.iter_mut().find(|(w, _)| *w == v).unwrap().1 += 1;
                if v == LiftVariant::Printed {
                    printed_fail += 1;
                }
            }
        }
        n += 1;
    }
    ensure(other.iter().find(|(v, _)| *v == LiftVariant::Corrected).unwrap().1 == 0, "corrected variant failed in the report")?;
    let mut gauge_n = 0;
    let mut printed_gauge_fail = 0;
    for _ in 0..20 {
        let (a0, a1) = random_gauge_01(&h, &tw, &mut rng, 0.5);
        let a2 = ok(lift_gauge_degree0(&tw, &a0, &a1, GaugeLift::Corrected), "gauge lift")?;
        let full: TwElement = vec![tw.constant(0, &a0), a1.clone(), a2];
        ensure(tw.face_compatible(&full), "gauge lift not face compatible")?;
        if lift_gauge_degree0(&tw, &a0, &a1, GaugeLift::Printed).is_err() {
            printed_gauge_fail += 1;
        }
        gauge_n += 1;
    }
    let summary: Vec<String> = other.iter().map(|(v, k)| format!("{}: {k}/{n} fail", v.name())).collect();
    Ok(format!(
        "{n} planted cocycles over ℚ[ε]/ε³ ({nonzero_n} with n ≠ 0) lifted; adjudicated variant: corrected [{}]; printed fails on {printed_fail}; {gauge_n} gauge lifts face compatible (printed gauge formula fails on {printed_gauge_fail})",
        summary.join(", ")
    ))
}

fn main_theorem() -> Outcome {
    let mut lines = vec![];
    for name in ["pair_of_morphisms", "constant_cover", "point_sheaf"] {
        for n in [2usize, 3] {
            let g = cover_g(name);
            let (h, tw) = contexts(&g, n, 64);
            let samples = ok(generate_samples(&h, &tw, 1, 3), "samples")?;
            let rep = ok(verify_main_theorem(g.clone(), h.a.clone(), &samples, DEFAULT_GROEBNER_BUDGET), "verify")?;
            ensure(!rep.well_defined.is_empty() && !rep.surjectivity.is_empty() && !rep.injectivity.is_empty(), format!("{name} ε^{n}: a sub-check ran on no samples"))?;
            ensure(rep.all_pass(), format!("{name} ε^{n}: {}", rep.to_json()))?;
            lines.push(format!("{name}/ε^{n} ({}+{}+{})", rep.well_defined.len(), rep.surjectivity.len(), rep.injectivity.len()));
        }
    }
    let neg = bundled("negative_control").unwrap();
    let g = Arc::new(neg.g);
    let refused = matches!(verify_main_theorem(g, dual(2), &Default::default(), DEFAULT_GROEBNER_BUDGET), Err(Error::Hypothesis(_)));
    ensure(refused, "negative control was not refused")?;
    Ok(format!("all four sub-checks pass on {}; negative control refused", lines.join(", ")))
}

/// The deformation equations per open, per pair and per triple.
fn unrolled(c: &CoverData, a: &Arc<ArtinAlgebra>, l: &[Q], m: &[Q], n: Option<&[Q]>) -> bool {
    let r = a.dim();
    let ctx = TensorCtx::new(Arc::new(weighted()), a.clone(), Q::zero());
    let li = |i: usize| c.component(&[i], l, r).unwrap();
    let mij = |i: usize, j: usize| c.component(&[i, j], m, r).unwrap();
    if (0..3).any(|i| !ctx.is_zero(&mc_defect(&ctx, &li(i)))) {
        return false;
    }
    if [(0, 1), (0, 2), (1, 2)].iter().any(|&(i, j)| li(i) != gauge(&ctx, &mij(i, j), &li(j))) {
        return false;
    }
    let Some(n) = n else { return false };
    let n = c.component(&[0, 1, 2], n, r).unwrap();
    let lhs = bch_many(&ctx, &[mij(1, 2), ctx.neg(&mij(0, 2)), mij(0, 1)]);
    lhs == ctx.add(&ctx.d(&n), &ctx.bracket(&li(1), &n))
}

fn cech_layer() -> Outcome {
    let l = weighted();
    let refinement =
        Refinement::canonical(CoverData::constant(&l, 2).unwrap(), CoverData::constant(&l, 3).unwrap(), vec![vec![0, 0, 1], vec![0, 1, 1]])
            .unwrap();
    let a = dual(3);
    let r = a.dim();
    let hs = H1Ctx::new(Arc::new(cech_scdgla(&refinement.source).unwrap()), a.clone()).unwrap();
    let ht = H1Ctx::new(Arc::new(cech_scdgla(&refinement.target).unwrap()), a.clone()).unwrap();
    let mut rng = seeded(3);
    let mut k = 0;
    while k < 10 {
        let Some(z) = random_z1(&hs, &mut rng, 0.6, 20) else { continue };
        let z0 = ok(refinement_map(&refinement, 0, &a, z.pair()), "refinement map φ")?;
        let z1 = ok(refinement_map(&refinement, 1, &a, z.pair()), "refinement map ψ")?;
        let w = ok(refinement_independence(&refinement, 0, 1, &a, z.pair()), "independence")?;
        ensure(check_witness(&ht, z0.pair(), z1.pair(), &w), "witness does not check")?;
        // φ = (0,0,1), ψ = (0,1,1): a₁ = m_{10} = −m_{01}, a₀ = a₂ = 0
        let m01 = refinement.source.component(&[0, 1], &z.m, r).unwrap();
        let comp = |i: usize| refinement.target.component(&[i], &w.a, r).unwrap();
        ensure(comp(1) == m01.iter().map(|c| -c).collect::<Vec<_>>(), "a₁ ≠ −m₀₁")?;
        ensure(comp(0).iter().chain(&comp(2)).all(Q::is_zero), "a₀ or a₂ nonzero")?;
        k += 1;
    }
    let c = bundled("constant_cover").unwrap().cover.unwrap();
    let h = H1Ctx::new(Arc::new(cech_scdgla(&c).unwrap()), a.clone()).unwrap();
    let mut spec = 0;
    let mut rejected = 0;
    while spec < 10 {
        let Some(z) = random_z1(&h, &mut rng, 0.6, 20) else { continue };
        ensure(unrolled(&c, &a, &z.l, &z.m, z.n.as_deref()), "cocycle fails the unrolled equations")?;
        let mut parts = std::collections::BTreeMap::new();
        // along b, which acts with weight one and is not a boundary
        let mut bump = vec![Q::zero(); l.dim() * r];
        bump[(l.range(0).start + 1) * r] = small_q(&mut rng, 1.0) + q(4);
        parts.insert(vec![0, 1], bump);
        let m = h.c[1].add(&z.m, &c.assemble(1, &parts, r));
        let st = ok(z1_check(&h, &z.l, &m), "z1_check")?;
        let n = match &st {
            Z1Status::Member(e) => e.n.clone(),
            Z1Status::Fails(_) => None,
        };
        let member = matches!(st, Z1Status::Member(_));
        ensure(member == unrolled(&c, &a, &z.l, &m, n.as_deref()), "z1_check and the unrolled equations disagree")?;
        if !member {
            rejected += 1;
        }
        spec += 1;
    }
    ensure(rejected > 0, "no perturbation was rejected")?;
    Ok(format!(
        "explicit witness a_α = m_(ψα,φα) verified on {k} cocycles (2-set cover refined to 3 sets, two refinement functions); equations agree componentwise on {spec} cocycles and {spec} perturbations ({rejected} rejected)"
    ))
}

/// Whether some lift `x̃ + y`, `y ∈ L¹ ⊗ J`, is Maurer-Cartan: the defect is
/// affine in `y`, so this is a linear system built from defect evaluations.
fn linear_search(l: &Arc<Dgla>, ext: &SmallExtension, naive: &[Q]) -> bool {
    let c = TensorCtx::new(l.clone(), Arc::new(ext.total.clone()), Q::zero());
    let rb = c.r();
    let base = mc_defect(&c, &naive.to_vec());
    let mut cols = vec![];
    for i in l.range(1) {
        for k in &ext.kernel_basis {
            let mut y = naive.to_vec();
            for e in 0..rb {
                y[i * rb + e] += &k[e];
            }
            let dy = mc_defect(&c, &y);
            cols.push(dy.iter().zip(&base).map(|(u, v)| u - v).collect::<Vec<Q>>());
        }
    }
    let rhs: Vec<Q> = base.iter().map(|v| -v).collect();
    if cols.is_empty() {
        return rhs.iter().all(Q::is_zero);
    }
    let sys = LinSystem::new(Mat::from_cols(rhs.len(), &cols), rhs).unwrap();
    solve_linear(&sys).is_some()
}

fn obstruction() -> Outcome {
    let ext = small_extension_chain(3).unwrap().remove(0);
    // v (deg 1), w (deg 2), [v,v] = 2w; x = εv
    let vw = Arc::new(Dgla::build(&[(1, 1), (2, 1)], &[], &[BracketEntry::new(1, 0, 1, 0, 0, q(2))]).unwrap());
    let ob = ok(obstruction_class(&vw, &ext, &[q(1), q(0)], None), "obstruction")?;
    ensure(!ob.vanishes() && ob.lift.is_none(), "class should be nonzero with no lift")?;
    ensure(!linear_search(&vw, &ext, &ob.naive_lift), "linear search found a lift of εv")?;
    // adding u (deg 1) with du = w
    let vuw = Arc::new(Dgla::build(&[(1, 2), (2, 1)], &[(1, 1, 0, q(1))], &[BracketEntry::new(1, 0, 1, 0, 0, q(2))]).unwrap());
    let ob = ok(obstruction_class(&vuw, &ext, &[q(1), q(0), q(0)], None), "obstruction")?;
    let lift = ob.lift.clone().ok_or("class vanishes but no lift returned")?;
    ensure(ob.vanishes(), "class should vanish")?;
    let cb = TensorCtx::new(vuw.clone(), Arc::new(ext.total.clone()), Q::zero());
    ensure(cb.is_zero(&mc_defect(&cb, &lift)), "returned lift is not MC")?;
    ensure(project_through(&ext, vuw.dim(), &lift) == vec![q(1), q(0), q(0)], "returned lift does not project to x")?;
    ensure(linear_search(&vuw, &ext, &ob.naive_lift), "linear search disagrees with the vanishing class")?;
    // independence of the chosen lift, and agreement with the linear search
    let ext4 = small_extension_chain(4).unwrap().remove(0);
    let mut tested = 0;
    let mut seed = 100u64;
    while tested < 20 {
        seed += 1;
        let mut rng = seeded(seed);
        let l = Arc::new(random_dgla(&mut rng));
        let c = TensorCtx::new(l.clone(), Arc::new(ext4.base.clone()), Q::zero());
        let Some(x) = random_mc(&c, &mut rng, 0.6) else { continue };
        let first = ok(obstruction_class(&l, &ext4, &x, None), "obstruction")?;
        let mut other = first.naive_lift.clone();
        let rb = ext4.total.dim();
        for i in l.range(1) {
            let s = small_q(&mut rng, 0.7);
            for e in 0..rb {
                other[i * rb + e] += &s * &ext4.kernel_basis[0][e];
            }
        }
        let second = ok(obstruction_class(&l, &ext4, &x, Some(other)), "obstruction")?;
        ensure(first.class == second.class, format!("seed {seed}: class depends on the lift"))?;
        ensure(first.vanishes() == linear_search(&l, &ext4, &first.naive_lift), format!("seed {seed}: class and linear search disagree"))?;
        tested += 1;
    }
    Ok(format!("no-lift and corrected-lift examples behave as derived; class lift-independent and matching linear search on {tested} random instances"))
}

fn smoothness() -> Outcome {
    let g = cover_g("constant_cover");
    let chain = small_extension_chain(4).unwrap();
    let mut rng = seeded(31);
    let mut count = 0;
    for ext in &chain {
        let hb = H1Ctx::new(g.clone(), Arc::new(ext.total.clone())).unwrap();
        let ha = H1Ctx::new(g.clone(), Arc::new(ext.base.clone())).unwrap();
        let mut here = 0;
        while here < 5 {
            let Some(z) = random_z1(&hb, &mut rng, 0.6, 20) else { continue };
            let pz = (project_through(ext, g.levels[0].dim(), &z.l), project_through(ext, g.levels[1].dim(), &z.m));
            let w = EquivWitness { a: random_elem(&ha.c[0], 0, &mut rng, 0.5), b: random_elem(&ha.c[1], -1, &mut rng, 0.5) };
            let target = equiv_apply(&ha, (&pz.0, &pz.1), &w);
            ok(z1_member(&ha, &target.0, &target.1), "target")?;
            let out = ok(z1_transport(ext, &hb, &ha, z.pair(), (&target.0, &target.1), &w), "z1_transport")?;
            ok(z1_member(&hb, &out.l, &out.m), "preimage")?;
            ensure(project_through(ext, g.levels[0].dim(), &out.l) == target.0, "preimage does not project")?;
            ensure(project_through(ext, g.levels[1].dim(), &out.m) == target.1, "preimage does not project")?;
            here += 1;
            count += 1;
        }
    }
    Ok(format!("{count} verified preimages across the {} extensions of small_extension_chain(4)", chain.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("algebraic axioms", axioms),
        ("gauge calculus", gauge_calculus),
        ("Dupont identities", dupont),
        ("normal forms", normal_forms),
        ("levels 0..1 isomorphism and tangent", isomorphism_01),
        ("surjectivity and gauge lifts", constructions_07),
        ("main comparison theorem", main_theorem),
        ("Čech layer", cech_layer),
        ("obstruction theory", obstruction),
        ("smoothness of the truncation", smoothness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:.1}s] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:.1}s] {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
