//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines land in the test log; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qha_core::coxeter::{coxeter_phi, coxeter_psi, weighted_chi};
use qha_core::field::Rational;
use qha_core::knit::{hat_an_predict, Knitter};
use qha_core::matrix::eval_poly;
use qha_core::relations::{
    element_is_zero, graded_dim, parse_element, verify_against_knitting, verify_preprojective,
    EngineConfig, RelationFamily,
};
use qha_core::scalar::{convert_weight, int_weight};
use qha_core::weights::{
    a_n_shortcut_weight, dynkin_eigenweight, extended_dynkin_semiregular_weight, is_regular,
    radical_vector,
};
use qha_core::{
    catalog, classify, double, AnyWeight, Field, FieldSpec, IndecMultiset, IntMatrix, Quiver,
    ZQVertex,
};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn z(i: usize, m: i64) -> ZQVertex {
    ZQVertex::new(i, m)
}

fn ms(pairs: &[(usize, i64, u64)]) -> IndecMultiset {
    IndecMultiset::from_pairs(pairs.iter().map(|&(i, m, k)| (z(i, m), k)))
}

fn ones(n: usize) -> Vec<Rational> {
    int_weight(&vec![1; n])
}

fn census(per_quiver: Duration) -> Check {
    for q in catalog::dynkin_census() {
        let start = Instant::now();
        let class = classify(&q);
        let h = class.coxeter_number().ok_or("census quiver not Dynkin")? as i64;
        let r = q.num_vertices() as i64;
        let indecs = Knitter::new(&q).enumerate_indecomposables().map_err(err)?;
        let dims: Vec<i64> = indecs.iter().map(|(_, d)| d.iter().sum()).collect();
        let count = indecs.len() as i64;
        let sum: i64 = dims.iter().sum();
        let sum_sq: i64 = dims.iter().map(|d| d * d).sum();
        ensure(count == r * h / 2, || format!("{class}: {count} indecomposables"))?;
        ensure(sum == r * h * (h + 1) / 6, || format!("{class}: sum dim {sum}"))?;
        ensure(sum_sq == r * h * h * (h + 1) / 12, || format!("{class}: sum dim^2 {sum_sq}"))?;
        ensure(start.elapsed() < per_quiver, || format!("{class}: took {:?}", start.elapsed()))?;
    }
    Ok(())
}

fn a3_golden() -> Check {
    let q = catalog::linear_a(3);
    let k = Knitter::new(&q);
    let ladder = k.ladder(&ms(&[(1, 0, 1)]), 3).map_err(err)?;
    let expected = vec![
        ms(&[(1, 0, 1)]),
        ms(&[(2, 0, 1), (0, 1, 1)]),
        ms(&[(1, 1, 1)]),
        IndecMultiset::new(),
    ];
    ensure(ladder == expected, || format!("ladder of P_2: {ladder:?}"))?;
    let aggregates = [[3, 2, 1], [2, 4, 2], [1, 2, 3]];
    let table = graded_dim(
        &q,
        &RelationFamily::QuiverHeisenberg(ones(3)),
        EngineConfig::dynkin_default(&q, false).map_err(err)?,
    )
    .map_err(err)?;
    for (i, agg) in aggregates.iter().enumerate() {
        let dec = k.qha_decomposition(i, None).map_err(err)?;
        ensure(dec.aggregate_dims == agg.to_vec(), || format!("knit aggregate at {i}: {:?}", dec.aggregate_dims))?;
        for (s, d) in dec.degree_dims.iter().enumerate() {
            let engine: Vec<i64> = table.slice(i, s, 3).iter().map(|&x| x as i64).collect();
            ensure(&engine == d, || format!("slice i={i} s={s}: engine {engine:?} knit {d:?}"))?;
        }
        let col: Vec<i64> = table.column(i, 3).iter().map(|&x| x as i64).collect();
        ensure(col == agg.to_vec(), || format!("engine column {i}: {col:?}"))?;
    }
    ensure(table.total() == 20, || format!("grand total {}", table.total()))
}

fn boundary_proposition() -> Check {
    let q = catalog::linear_a(3);
    let dq = double(&q);
    for (w, want) in [([3, -1, -1], true), ([1, 1, 1], false)] {
        let v = int_weight(&w);
        let regular = is_regular(&q, &v).map_err(err)?.regular == Some(true);
        ensure(regular, || format!("{w:?} should be regular"))?;
        let elem = parse_element(&dq, "wrho2(2)", Some(&v), &qha_core::field::parse_rational).map_err(err)?;
        let zero = element_is_zero(&q, &RelationFamily::QuiverHeisenberg(v), &elem).map_err(err)?;
        ensure(zero == want, || format!("v={w:?}: zero = {zero}"))?;
    }
    Ok(())
}

fn vanishing_and_duality() -> Check {
    let cases: [(Quiver, Vec<i64>); 4] = [
        (catalog::linear_a(2), vec![1, 2]),
        (catalog::linear_a(3), vec![3, -1, -1]),
        (catalog::linear_a(4), vec![1, 1, 1, 1]),
        (catalog::dynkin_d(4), vec![1, 2, 1, 1]),
    ];
    for (q, w) in cases {
        let v = int_weight(&w);
        ensure(is_regular(&q, &v).map_err(err)?.regular == Some(true), || format!("{w:?} not regular"))?;
        let all: Vec<usize> = (0..q.num_vertices()).collect();
        let rep = verify_against_knitting(&q, &v, &all, true, EngineConfig::DEFAULT_CAP).map_err(err)?;
        let bad = rep
            .comparisons
            .iter()
            .find(|c| matches!(c.check, "duality" | "vanishing") && !c.ok());
        ensure(bad.is_none(), || format!("{}: {}", classify(&q), bad.unwrap()))?;
        ensure(rep.extra_band == Some(0), || format!("{}: extra band {:?}", classify(&q), rep.extra_band))?;
    }
    Ok(())
}

fn coxeter_identities() -> Check {
    for q in catalog::dynkin_census() {
        let class = classify(&q);
        let h = class.coxeter_number().ok_or("not Dynkin")?;
        let n = q.num_vertices();
        let phi = coxeter_phi(&q);
        ensure(phi.pow(h) == IntMatrix::identity(n), || format!("{class}: Phi^h != I"))?;
        let psi = coxeter_psi(&q);
        let mut sum = IntMatrix::zeros(n, n);
        let mut power = IntMatrix::identity(n);
        for _ in 0..h {
            sum = sum.add_mat(&power);
            power = power.mul_mat(&psi);
        }
        ensure(sum == IntMatrix::zeros(n, n), || format!("{class}: sum of Psi powers nonzero"))?;
        let cp = phi.to_field::<Rational>().char_poly().ok_or("char poly")?;
        let at_one = eval_poly(&cp, &Rational::from_i64(1));
        ensure(at_one != Rational::from_i64(0), || format!("{class}: 1 is an eigenvalue of Phi"))?;
    }
    for big_n in 1..=8 {
        let q = catalog::linear_a(big_n);
        let cp = coxeter_psi(&q).to_field::<Rational>().char_poly().ok_or("char poly")?;
        ensure(cp == ones(big_n + 1), || format!("A{big_n}: char poly {cp:?}"))?;
    }
    Ok(())
}

fn eigenweights() -> Check {
    let quivers = [
        catalog::linear_a(2),
        catalog::linear_a(3),
        catalog::linear_a(4),
        catalog::linear_a(5),
        catalog::dynkin_d(4),
        catalog::dynkin_d(5),
    ];
    for q in quivers {
        let class = classify(&q);
        let ew = dynkin_eigenweight(&q, 0).map_err(err)?;
        let psi = coxeter_psi(&q).map(|&x| ew.field.from_rational(Rational::from_i64(x)));
        let lhs = psi.mul_vec(&ew.weight);
        let zeta_inv = ew.field.zeta().inv().ok_or("zeta")?;
        let rhs: Vec<_> = ew.weight.iter().map(|x| zeta_inv.clone() * x.clone()).collect();
        ensure(lhs == rhs, || format!("{class}: eigen-equation"))?;
        ensure(is_regular(&q, &ew.weight).map_err(err)?.regular == Some(true), || format!("{class}: not regular"))?;
    }
    for big_n in 2..=8 {
        let q = catalog::linear_a(big_n);
        let (ew, lambda) = a_n_shortcut_weight(&q).map_err(err)?;
        for i in 1..=big_n {
            for j in i..=big_n {
                let interval: Vec<i64> = (1..=big_n).map(|k| i64::from(i <= k && k <= j)).collect();
                let chi = weighted_chi(&ew.weight, &interval).map_err(err)?;
                let closed = (i..=j)
                    .map(|k| lambda.pow((big_n - k) as u64))
                    .fold(ew.field.from_rational(Rational::from_i64(0)), |a, b| a + b);
                ensure(chi == closed && chi != ew.field.from_rational(Rational::from_i64(0)), || format!("A{big_n}: M_({i},{j})"))?;
            }
        }
    }
    Ok(())
}

fn kronecker() -> Check {
    let q = catalog::kronecker();
    let k = Knitter::new(&q);
    let l1 = k.ladder(&ms(&[(0, 0, 1)]), 7).map_err(err)?;
    let l2 = k.ladder(&ms(&[(1, 0, 1)]), 7).map_err(err)?;
    for m in 0..=3usize {
        let (even, odd) = (2 * m, 2 * m + 1);
        let mi = m as i64;
        let checks = [
            (&l1[even], ms(&[(0, mi, 2 * m as u64 + 1)])),
            (&l1[odd], ms(&[(1, mi, 2 * m as u64 + 2)])),
            (&l2[even], ms(&[(1, mi, 2 * m as u64 + 1)])),
            (&l2[odd], ms(&[(0, mi + 1, 2 * m as u64 + 2)])),
        ];
        for (got, want) in checks {
            ensure(*got == want, || format!("m={m}: {got:?} != {want:?}"))?;
        }
    }
    let delta = radical_vector(&q).map_err(err)?;
    ensure(delta == vec![1, 1], || format!("delta {delta:?}"))?;
    let v = extended_dynkin_semiregular_weight(&q, &delta).map_err(err)?;
    ensure(v == int_weight(&[-1, 1]), || format!("v {v:?}"))?;
    let psi = coxeter_psi(&q).to_field::<Rational>();
    ensure(psi.mul_vec(&v) == v, || "Psi v != v".into())?;
    let chi = weighted_chi(&v, &delta).map_err(err)?;
    ensure(chi == Rational::from_i64(0), || format!("chi(delta) = {chi}"))
}

fn hat_a() -> Check {
    for big_n in [2, 3] {
        let q = catalog::hat_a(big_n);
        let k = Knitter::new(&q);
        for i in 0..=big_n {
            let ladder = k.ladder(&ms(&[(i, 0, 1)]), 4).map_err(err)?;
            for (n, l) in ladder.iter().enumerate() {
                let p = hat_an_predict(&q, i, n).map_err(err)?;
                ensure(&p == l, || format!("N={big_n} i={i} n={n}"))?;
            }
        }
    }
    Ok(())
}

fn preprojective_oracle() -> Check {
    for q in [catalog::linear_a(2), catalog::linear_a(3), catalog::dynkin_d(4)] {
        let cmp = verify_preprojective::<Rational>(&q, EngineConfig::DEFAULT_CAP).map_err(err)?;
        let bad = cmp.iter().find(|c| !c.ok());
        ensure(bad.is_none(), || format!("{}: {}", classify(&q), bad.unwrap()))?;
    }
    Ok(())
}

fn finiteness_boundary() -> Check {
    let q = catalog::linear_a(2);
    let h = 3;
    let band = |w: &[i64]| -> Result<u64, String> {
        let t = graded_dim(
            &q,
            &RelationFamily::QuiverHeisenberg(int_weight(w)),
            EngineConfig::new(2 * h - 3, 2 * h - 3),
        )
        .map_err(err)?;
        Ok(t.length_band(2 * h - 3))
    };
    let bad = int_weight(&[1, -1]);
    let rep = is_regular(&q, &bad).map_err(err)?;
    ensure(rep.sincere && rep.regular == Some(false), || "(1,-1) should be sincere and not regular".into())?;
    let b = band(&[1, -1])?;
    ensure(b > 0, || format!("non-regular band {b}"))?;
    let g = band(&[1, 1])?;
    ensure(g == 0, || format!("regular band {g}"))
}

fn property_suites() -> Check {
    // mesh additivity on census windows
    for q in catalog::dynkin_census() {
        let k = Knitter::new(&q);
        for m in -2..=2 {
            for i in 0..q.num_vertices() {
                let x = z(i, m);
                let mut lhs = k.dimvec(x).map_err(err)?;
                for (a, b) in lhs.iter_mut().zip(k.dimvec(x.translate(1)).map_err(err)?) {
                    *a += b;
                }
                let rhs = k.multiset_dimvec(&k.successors(x)).map_err(err)?;
                ensure(lhs == rhs, || format!("{}: mesh at {x:?}", classify(&q)))?;
            }
        }
    }
    // weight independence
    let pairs: [(Quiver, [Vec<i64>; 2]); 2] = [
        (catalog::linear_a(2), [vec![1, 1], vec![1, 2]]),
        (catalog::linear_a(3), [vec![1, 1, 1], vec![3, -1, -1]]),
    ];
    for (q, [u, w]) in &pairs {
        let cfg = EngineConfig::dynkin_default(q, true).map_err(err)?;
        let a = graded_dim(q, &RelationFamily::QuiverHeisenberg(int_weight(u)), cfg).map_err(err)?;
        let b = graded_dim(q, &RelationFamily::QuiverHeisenberg(int_weight(w)), cfg).map_err(err)?;
        ensure(a.nonzero() == b.nonzero(), || format!("{u:?} vs {w:?}"))?;
    }
    // F_101 against Q on A_3
    let q = catalog::linear_a(3);
    let v = int_weight(&[2, 3, 5]);
    let AnyWeight::Prime(vp) = convert_weight(&v, FieldSpec::Prime(101)).map_err(err)? else {
        return Err("conversion".into());
    };
    let cfg = EngineConfig::dynkin_default(&q, true).map_err(err)?;
    let tq = graded_dim(&q, &RelationFamily::QuiverHeisenberg(v.clone()), cfg).map_err(err)?;
    let tp = graded_dim(&q, &RelationFamily::QuiverHeisenberg(vp), cfg).map_err(err)?;
    ensure(tq.nonzero() == tp.nonzero(), || "F_101 table differs".into())?;
    // scaling by 7
    for q in catalog::dynkin_census().into_iter().take(8) {
        for seed in 1..=5i64 {
            let w: Vec<i64> = (0..q.num_vertices() as i64).map(|k| ((k * seed + 2) % 5) - 2).map(|x| if x == 0 { 3 } else { x }).collect();
            let v = int_weight(&w);
            let v7 = int_weight(&w.iter().map(|x| 7 * x).collect::<Vec<_>>());
            let (a, b) = (is_regular(&q, &v).map_err(err)?, is_regular(&q, &v7).map_err(err)?);
            let wa: Vec<_> = a.witnesses.iter().map(|(d, _)| d.clone()).collect();
            let wb: Vec<_> = b.witnesses.iter().map(|(d, _)| d.clone()).collect();
            ensure(a.regular == b.regular && wa == wb, || format!("{}: {w:?}", classify(&q)))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("Dynkin census counts and dimension sums", Duration::from_secs(16), || census(Duration::from_secs(1))),
        ("A3 golden ladder and bigraded table", Duration::from_secs(10), a3_golden),
        ("boundary proposition for the squared Casimir", Duration::from_secs(5), boundary_proposition),
        ("vanishing and duality slices", Duration::from_secs(60), vanishing_and_duality),
        ("Coxeter identities", Duration::from_secs(1), coxeter_identities),
        ("eigenweights and the A_N shortcut", Duration::from_secs(5), eigenweights),
        ("Kronecker multiplicities and semiregular weight", Duration::from_secs(1), kronecker),
        ("hat-A closed form", Duration::from_secs(5), hat_a),
        ("preprojective oracle equivalence", Duration::from_secs(30), preprojective_oracle),
        ("finiteness boundary band", Duration::from_secs(10), finiteness_boundary),
        ("property suites", Duration::from_secs(60), property_suites),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|_| ensure(took < *limit, || format!("took {took:?}, limit {limit:?}")));
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({} ms)", k + 1, took.as_millis()),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
