//! End-to-end reproduction checks. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line even when an earlier one fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use compack::exactalg::{
    resultant, AlgebraicReal, BiPoly, DyadicInterval, RadicalElement, RadicalTower, RatFunc,
    RationalPoly, Ring, Var,
};
use compack::geom::Q23;
use compack::necklace::{
    enumerate_skew_candidates, run_skew_search, search_triples, AngleContext, Bead,
    DihedralCosineSet, NecklaceWord, PairKind, SkewSearch, TripleCount, DEFAULT_MAX_BITS,
};
use compack::packing::{
    all_stackings, build_close_packing, density, fill_octahedral_holes, recover_stacking,
    solid_angle_at_small, stacking_classes, verify_compact,
};
use compack::shell::{
    embed_shell, rings_per_vertex, search_shells, shell_ring_property, shell_word_sets, ShapeClass,
    DEFAULT_NODE_BUDGET, KISSING_BOUND,
};

type Check = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(desc: &[i64]) -> RationalPoly {
    RationalPoly::from_ints_desc(desc)
}

fn root_in_unit(p: &RationalPoly) -> AlgebraicReal {
    AlgebraicReal::roots_in(p, &q(0, 1), &q(1, 1)).remove(0)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn words(list: &[&str]) -> BTreeSet<NecklaceWord> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

const TABLE_ONE: [&str; 18] = [
    "11111", "1111r", "111rr", "11rrr", "1rrrr", "rrrrr", "1111", "111r", "11r1r", "1r1rr", "rrrr",
    "111", "11r", "11rr", "1rrr", "1r1r", "rrr", "1rr",
];

// (word, minimal polynomial with descending coefficients, printed root in thousandths)
const TABLE_TWO: [(&str, &[i64], i64); 10] = [
    ("11111", &[1, 4, 1, -6, 1], 902),
    ("1111r", &[4, 8, -4, -6, 1], 849),
    ("111rr", &[1, 4, 3, -6, 1], 720),
    ("11r1r", &[4, -20, 9, 2], 690),
    ("11rrr", &[1, -2, -5, 0, 1], 420),
    ("1111", &[1, 2, -1], 414),
    ("111r", &[2, 3, -1], 280),
    ("111", &[2, 4, -1], 224),
    ("1r1rr", &[2, 9, -20, 4], 223),
    ("11rr", &[1, -6, 1], 171),
];

fn criterion_1() -> Check {
    let mine: BTreeSet<NecklaceWord> = enumerate_skew_candidates().into_iter().collect();
    let table = words(&TABLE_ONE);
    ensure(enumerate_skew_candidates().len() == 18, || {
        format!("{} candidates", enumerate_skew_candidates().len())
    })?;
    ensure(mine == table, || format!("candidate set differs: {mine:?}"))?;
    Ok("18 candidate words, identical to the table".into())
}

fn criterion_2(search: &SkewSearch) -> Check {
    let pre = search.distinct_values().len();
    let certified = search.certified_values();
    ensure(pre == 16, || format!("{pre} pre-filter values"))?;
    ensure(certified.len() == 10, || {
        format!("{} certified values", certified.len())
    })?;
    let tol = q(5, 10_000);
    let mut off = Vec::new();
    let mut truncated = true;
    for (word, mp, approx) in TABLE_TWO {
        let want = poly(mp);
        let word: NecklaceWord = word.parse().unwrap();
        let hit = search
            .certified()
            .into_iter()
            .find(|c| c.witness_word == word && c.value.minpoly() == &want)
            .ok_or_else(|| format!("no certified root of {want} from {word}"))?;
        let mut v = hit.value.clone();
        v.refine(&q(1, 1 << 30));
        let (lo, hi) = v.isolating_interval();
        let a = q(approx, 1000);
        if !(lo - &tol <= a && a <= hi + &tol) {
            off.push(format!(
                "{} ≈ {:.6} vs 0.{approx:03}",
                word.radius_code(),
                hit.value.to_f64()
            ));
        }
        // the printed digits are the first three of the decimal expansion
        truncated &= a <= *lo && *hi < &a + q(1, 1000);
    }
    let rows =
        format!("{pre} pre-filter values, 10 certified rows with matching minimal polynomials");
    ensure(off.is_empty(), || {
        format!(
            "{rows}; {} approximations off by more than 5e-4: {}; all ten agree with truncation to three decimals: {truncated}",
            off.len(),
            off.join(", ")
        )
    })?;
    Ok(format!("{rows} and approximations"))
}

fn criterion_3(radii: &[AlgebraicReal]) -> Check {
    let target = poly(&[1, 2, -1]);
    let mut found = Vec::new();
    for r in radii {
        for t in
            search_triples(AngleContext::Large, r, DEFAULT_MAX_BITS).map_err(|e| e.to_string())?
        {
            if t.certified {
                found.push((
                    r.minpoly().clone(),
                    t.triple,
                    t.words.into_iter().collect::<BTreeSet<_>>(),
                ));
            }
        }
    }
    let want = vec![(
        target,
        TripleCount::new(2, 4, 0),
        words(&["LLLSLS", "LLSLLS"]),
    )];
    ensure(found == want, || {
        format!("certified large solutions: {found:?}")
    })?;
    Ok("only X²+2X−1 with triple (2,4,0), words {LLLSLS, LLSLLS}".into())
}

fn criterion_4(radii: &[AlgebraicReal]) -> Check {
    let target = poly(&[1, -6, 1]);
    let mut found = Vec::new();
    for r in radii {
        for t in
            search_triples(AngleContext::Small, r, DEFAULT_MAX_BITS).map_err(|e| e.to_string())?
        {
            if t.certified {
                found.push((r.minpoly().clone(), t.words));
            }
        }
    }
    ensure(found.len() == 1 && found[0].0 == target, || {
        format!("certified small solutions: {found:?}")
    })?;
    let got: Vec<String> = found[0].1.iter().map(|w| w.radius_code()).collect();
    ensure(got == ["11rr"], || format!("words {got:?}"))?;
    Ok("only X²−6X+1, word 11rr".into())
}

fn criterion_5() -> Check {
    let r = root_in_unit(&poly(&[1, 2, -1]));
    let om = solid_angle_at_small(&r).map_err(|e| e.to_string())?;
    ensure(om.pi_fraction() == Some(q(1, 2)), || {
        format!("solid angle {:?}·π", om.pi_fraction())
    })?;
    let enc = om.enclosure(128).map_err(|e| e.to_string())?;
    let half_pi = DyadicInterval::pi(160).div_int(2);
    ensure(
        enc.overlaps(&half_pi) && enc.width() < BigRational::new(1.into(), BigInt::from(1) << 100),
        || format!("enclosure {enc}"),
    )?;
    let eq = solid_angle_at_small(&AlgebraicReal::from_int(1)).map_err(|e| e.to_string())?;
    ensure(eq.cos_dihedral.as_rational() == Some(q(1, 3)), || {
        "equal-sphere cos A ≠ 1/3".into()
    })?;
    let not_div = eq
        .certified_not_dividing_sphere(1024)
        .map_err(|e| e.to_string())?;
    ensure(not_div, || "4π/Ω may be an integer".into())?;
    let ratio = eq.sphere_ratio(128).map_err(|e| e.to_string())?;
    Ok(format!(
        "Ω(√2−1) = π/2 exactly; 4π/Ω at equal radii in [{:.6}, {:.6}], no integer",
        ratio.lo_f64(),
        ratio.hi_f64()
    ))
}

fn criterion_6() -> Check {
    let (large, small) = shell_word_sets();
    let search = search_shells(&large, &small, KISSING_BOUND, DEFAULT_NODE_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(search.shells.len() == 2, || {
        format!("{} shells", search.shells.len())
    })?;
    for s in &search.shells {
        ensure(s.count(Bead::L) == 12 && s.count(Bead::S) == 6, || {
            format!(
                "shell with {} L and {} S",
                s.count(Bead::L),
                s.count(Bead::S)
            )
        })?;
    }
    ensure(!search.shells[0].is_isomorphic(&search.shells[1]), || {
        "shells are isomorphic".into()
    })?;
    let r = root_in_unit(&poly(&[1, 2, -1]));
    let mut rings = BTreeMap::new();
    for s in &search.shells {
        // embedding fails on any inexact distance or closure
        let e = embed_shell(s, &r).map_err(|e| e.to_string())?;
        let rs = shell_ring_property(&e);
        rings.insert(e.shape_class, (rs.len(), rings_per_vertex(&e, &rs)));
    }
    let classes: Vec<ShapeClass> = rings.keys().copied().collect();
    ensure(
        classes
            == [
                ShapeClass::Cuboctahedron,
                ShapeClass::TriangularOrthobicupola,
            ],
        || format!("{classes:?}"),
    )?;
    let cub = rings[&ShapeClass::Cuboctahedron];
    let orth = rings[&ShapeClass::TriangularOrthobicupola];
    let summary = format!(
        "2 shells (12 L + 6 S), cuboctahedron and triangular orthobicupola; coplanar 6-rings: {} and {} \
         (at most {} through one vertex of the cuboctahedron)",
        cub.0, orth.0, cub.1
    );
    ensure(cub.0 == 2 && orth.0 == 1, || {
        format!("{summary}; expected 2 and 1 rings")
    })?;
    Ok(summary)
}

fn criterion_7() -> Check {
    let classes = stacking_classes(6);
    let words = all_stackings(6);
    let filled_density = Q23::new(q(5, 3), q(-1, 1), q(0, 1), q(0, 1));
    let unfilled_density = Q23::sqrt2().scale(&q(1, 6));
    let ratio_target = Q23::new(q(-6, 1), q(5, 1), q(0, 1), q(0, 1));
    let sqrt18 = Q23::sqrt2().scale(&q(3, 1));
    for seq in &words {
        let bare = build_close_packing(seq);
        let filled = fill_octahedral_holes(&bare).map_err(|e| format!("{seq}: {e}"))?;
        let rep = verify_compact(&filled);
        ensure(rep.is_compact(), || {
            format!("{seq} filled: {:?}", rep.verdict)
        })?;
        let bare_rep = verify_compact(&bare);
        ensure(!bare_rep.is_compact(), || {
            format!("{seq} unfilled reported compact")
        })?;
        let d = density(&filled, 128).density_over_pi;
        ensure(d == filled_density, || format!("{seq}: density {d}·π"))?;
        ensure(&d * &sqrt18 == ratio_target, || {
            format!("{seq}: ratio {}", &d * &sqrt18)
        })?;
        let d0 = density(&bare, 128).density_over_pi;
        ensure(d0 == unfilled_density, || {
            format!("{seq}: unfilled density {d0}·π")
        })?;
    }
    Ok(format!(
        "{} words of period ≤ 6 ({} classes up to symmetry): filled compact, unfilled not compact, \
         density (5/3 − √2)·π, ratio 5√2 − 6",
        words.len(),
        classes.len()
    ))
}

fn criterion_8() -> Check {
    let all = all_stackings(6);
    for seq in &all {
        let filled =
            fill_octahedral_holes(&build_close_packing(seq)).map_err(|e| format!("{seq}: {e}"))?;
        let back = recover_stacking(&filled).map_err(|e| format!("{seq}: {e}"))?;
        ensure(back.equivalent(seq), || {
            format!("{seq} recovered as {back}")
        })?;
    }
    Ok(format!(
        "{} words of period ≤ 6 recovered up to symmetry",
        all.len()
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(-1000..=1000), rng.gen_range(1..=200))
}

fn interval_fuzz(rng: &mut ChaCha8Rng, ops: usize) -> Result<(), String> {
    let mut done = 0;
    while done < ops {
        let prec = rng.gen_range(8..=96);
        let (a, b) = (random_rational(rng), random_rational(rng));
        let (ia, ib) = (
            DyadicInterval::from_rational(&a, prec),
            DyadicInterval::from_rational(&b, prec),
        );
        let (res, exact) = match rng.gen_range(0..6) {
            0 => (ia.add(&ib), &a + &b),
            1 => (ia.sub(&ib), &a - &b),
            2 => (ia.mul(&ib), &a * &b),
            3 => (ia.square(), &a * &a),
            4 => match ia.div(&ib) {
                Some(x) => (x, &a / &b),
                None => {
                    ensure(ib.contains_zero(), || format!("division by {ib} refused"))?;
                    continue;
                }
            },
            _ => {
                let k = rng.gen_range(-50..=50i64);
                (ia.mul_int(k), &a * BigRational::from_integer(k.into()))
            }
        };
        ensure(res.contains(&exact), || {
            format!("{res} misses {exact} (prec {prec})")
        })?;
        // sqrt checked through squaring the enclosure of the exact root's square
        if exact > BigRational::zero() {
            let s = DyadicInterval::from_rational(&exact, prec)
                .sqrt()
                .ok_or("sqrt refused")?;
            ensure(s.square().contains(&exact), || {
                format!("sqrt({exact}) = {s}")
            })?;
        }
        done += 1;
    }
    Ok(())
}

fn random_bipoly(rng: &mut ChaCha8Rng) -> BiPoly {
    let terms: Vec<((u32, u32), BigRational)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                (rng.gen_range(0..=2), rng.gen_range(0..=2)),
                q(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
            )
        })
        .collect();
    BiPoly::from_terms(terms)
}

fn resultant_soundness(rng: &mut ChaCha8Rng, instances: usize) -> Result<(), String> {
    for _ in 0..instances {
        let (r0, x0) = (
            q(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
            q(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
        );
        let lin_x = BiPoly::from_terms([((0, 1), q(1, 1)), ((0, 0), -x0.clone())]);
        let lin_r = BiPoly::from_terms([((1, 0), q(1, 1)), ((0, 0), -r0.clone())]);
        // both vanish at (r0, x0) by construction
        let f = lin_x
            .mul(&random_bipoly(rng))
            .add(&lin_r.mul(&random_bipoly(rng)));
        let g = lin_x
            .mul(&random_bipoly(rng))
            .add(&lin_r.mul(&random_bipoly(rng)));
        if f.degree_in(Var::X).unwrap_or(0) == 0 || g.degree_in(Var::X).unwrap_or(0) == 0 {
            continue;
        }
        let res = resultant(&f, &g, Var::X).map_err(|e| e.to_string())?;
        ensure(res.is_zero() || Zero::is_zero(&res.eval(&r0)), || {
            format!("Res_X does not vanish at r = {r0}")
        })?;
        let res = resultant(&f, &g, Var::R).map_err(|e| e.to_string())?;
        ensure(res.is_zero() || Zero::is_zero(&res.eval(&x0)), || {
            format!("Res_r does not vanish at X = {x0}")
        })?;
    }
    Ok(())
}

fn random_radical(
    rng: &mut ChaCha8Rng,
    tower: &std::sync::Arc<RadicalTower<BigRational>>,
) -> RadicalElement<BigRational> {
    let mut e = RadicalElement::zero(tower);
    for mask in 0..(1u32 << tower.len()) {
        if rng.gen_bool(0.6) {
            e = e.add(&RadicalElement::term(
                tower,
                mask,
                q(rng.gen_range(-20..=20), rng.gen_range(1..=6)),
            ));
        }
    }
    e
}

fn radical_laws(rng: &mut ChaCha8Rng, instances: usize) -> Result<(), String> {
    for _ in 0..instances {
        let n = rng.gen_range(1..=3);
        let names = (0..n).map(|i| format!("Y{i}")).collect();
        let squares = (0..n)
            .map(|_| q(rng.gen_range(1..=30), rng.gen_range(1..=5)))
            .collect();
        let tower = RadicalTower::new(names, squares);
        let (a, b, c) = (
            random_radical(rng, &tower),
            random_radical(rng, &tower),
            random_radical(rng, &tower),
        );
        ensure(a.mul(&b) == b.mul(&a), || "product not commutative".into())?;
        ensure(a.add(&b) == b.add(&a), || "sum not commutative".into())?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || {
            "product not associative".into()
        })?;
        ensure(a.add(&b).add(&c) == a.add(&b.add(&c)), || {
            "sum not associative".into()
        })?;
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || {
            "not distributive".into()
        })?;
        // the product's value lies in the product of the factors' enclosures
        let branch: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let ea = a.enclose_at(&branch, 64).map_err(|e| e.to_string())?;
        let eb = b.enclose_at(&branch, 64).map_err(|e| e.to_string())?;
        let eab = a
            .mul(&b)
            .enclose_at(&branch, 64)
            .map_err(|e| e.to_string())?;
        ensure(ea.mul(&eb).overlaps(&eab), || {
            format!("value of product {eab} outside {}", ea.mul(&eb))
        })?;
    }
    Ok(())
}

fn inverse_radius_identity() -> Result<(), String> {
    let large = DihedralCosineSet::symbolic(AngleContext::Large);
    let small = DihedralCosineSet::symbolic(AngleContext::Small);
    let inv = RatFunc::r().inv().unwrap();
    let cos2 = |s: &DihedralCosineSet<RatFunc>, k: PairKind| s.cos(k).square().as_scalar().unwrap();
    for (kl, ks) in [
        (PairKind::SS, PairKind::LL),
        (PairKind::LS, PairKind::LS),
        (PairKind::LL, PairKind::SS),
    ] {
        let lhs = cos2(&large, kl).substitute(&inv).unwrap();
        ensure(lhs == cos2(&small, ks), || {
            format!("cos² {kl:?} at 1/r differs from small {ks:?}")
        })?;
    }
    let lhs = large
        .cos(PairKind::SS)
        .as_scalar()
        .unwrap()
        .substitute(&inv)
        .unwrap();
    ensure(lhs == small.cos(PairKind::LL).as_scalar().unwrap(), || {
        "signed cosine differs".into()
    })?;
    Ok(())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    interval_fuzz(&mut rng, 100_000)?;
    resultant_soundness(&mut rng, 1000)?;
    radical_laws(&mut rng, 1000)?;
    inverse_radius_identity()?;
    // sign decisions in Q(√2, √3) agree with a float oracle away from zero
    for _ in 0..1000 {
        let x = Q23::new(
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        );
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            ensure(x.sign() == f.signum() as i32, || format!("sign of {x}"))?;
        }
    }
    Ok(
        "10⁵ interval ops, 10³ resultant instances, 10³ radical-tower instances, 1/r identity"
            .into(),
    )
}

struct Outcome {
    failures: usize,
}

impl Outcome {
    fn run(&mut self, id: u32, limit: Duration, f: impl FnOnce() -> Check) {
        let t = Instant::now();
        let res = f();
        let el = t.elapsed();
        let res = match res {
            Ok(msg) if el > limit => Err(format!("{msg}; took {el:.2?}, limit {limit:?}")),
            other => other,
        };
        match res {
            Ok(msg) => println!("PASS criterion {id}: {msg} [{el:.2?}]"),
            Err(msg) => {
                self.failures += 1;
                println!("FAIL criterion {id}: {msg} [{el:.2?}]");
            }
        }
    }
}

fn main() -> ExitCode {
    let mut out = Outcome { failures: 0 };
    out.run(1, Duration::from_secs(1), criterion_1);
    let mut radii = Vec::new();
    out.run(2, Duration::from_secs(300), || {
        let search = run_skew_search(DEFAULT_MAX_BITS).map_err(|e| e.to_string())?;
        radii = search.certified_values();
        criterion_2(&search)
    });
    out.run(3, Duration::from_secs(120), || criterion_3(&radii));
    out.run(4, Duration::from_secs(120), || criterion_4(&radii));
    out.run(5, Duration::from_secs(60), criterion_5);
    out.run(6, Duration::from_secs(60), criterion_6);
    out.run(7, Duration::from_secs(300), criterion_7);
    out.run(8, Duration::from_secs(300), criterion_8);
    out.run(9, Duration::from_secs(300), criterion_9);
    println!("{} of 9 criteria failed", out.failures);
    if out.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
