//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use hilbgen::bps::{
    bps_table, chi_y_series, genus_zero_series, hyperelliptic_table, k3_reference_series,
    verify_hilb_bopy_with, verify_phi_square_identity,
};
use hilbgen::catalog::{assemble_z, catalog, classify, AdeType, GroupTag, SingularityType};
use hilbgen::eta::{eta_expansion, euler_product};
use hilbgen::jacobi::{genus_evaluate_at_minus_one, genus_expand, phi_m2_1};
use hilbgen::local::{d4_cross_derivation, local_a_type, LocalFactorSet};
use hilbgen::modular::{
    default_points, measure_multiplier, measure_multiplier_with_weight, random_gamma0,
};
use hilbgen::series::{IntSeries, LaurentPoly, TwoVarSeries};
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const ORDER: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || {
        format!("took {elapsed:.2?}, limit {limit_s}s")
    })
}

fn table2_exact() -> Outcome {
    let start = Instant::now();
    let t = bps_table(7, 4).map_err(|e| e.to_string())?;
    let check = t.check_against_reference();
    within(start.elapsed(), 5)?;
    ensure(check.compared == 40, || {
        format!("compared {} entries", check.compared)
    })?;
    ensure(check.pass, || format!("mismatches: {:?}", check.mismatches))?;
    for (d, h, v) in [(4, 2, 3), (7, 0, 418_176), (7, 3, -64)] {
        ensure(t.get(d, h) == BigInt::from(v), || {
            format!("({d},{h}) = {}", t.get(d, h))
        })?;
    }
    Ok(format!("40/40 entries exact in {:.2?}", start.elapsed()))
}

fn table1_assembly() -> Outcome {
    let start = Instant::now();
    let a_only = LocalFactorSet::a_types(ORDER);
    let derived = LocalFactorSet::derive_all(ORDER).map_err(|e| e.to_string())?;
    for r in catalog() {
        let locals = if r.row_id <= 5 { &a_only } else { &derived };
        let z = assemble_z(&r, locals, ORDER).map_err(|e| format!("row {}: {e}", r.row_id))?;
        let reference = r
            .reference_product
            .expansion(ORDER)
            .inverse()
            .map_err(|e| e.to_string())?;
        let cmp = z.compare(&reference);
        ensure(cmp.equal && cmp.compared == ORDER, || {
            format!(
                "row {} differs at q^{:?} (compared {})",
                r.row_id, cmp.first_mismatch, cmp.compared
            )
        })?;
    }
    let (d6, d7) = d4_cross_derivation(ORDER).map_err(|e| e.to_string())?;
    let cmp = d6.series.compare(&d7.series);
    ensure(cmp.equal && cmp.compared == ORDER, || {
        format!("D4 rows 6/7 differ at {:?}", cmp.first_mismatch)
    })?;
    within(start.elapsed(), 30)?;
    Ok(format!(
        "11 rows to O(q^{ORDER}), D4 rows 6 and 7 agree, {:.2?}",
        start.elapsed()
    ))
}

fn modular_certification() -> Outcome {
    for r in catalog() {
        let p = &r.reference_product;
        let cusps = p.koehler_check();
        ensure(
            cusps.is_holomorphic() && !cusps.is_cuspidal() && cusps.has_zero_cusp(),
            || format!("row {}: {:?}", r.row_id, cusps.classification),
        )?;
        ensure(
            p.weight() == Rational64::new(r.euler_quotient, 2) && p.weight() == r.weight(),
            || {
                format!(
                    "row {}: weight {} vs e/2 = {}/2",
                    r.row_id,
                    p.weight(),
                    r.euler_quotient
                )
            },
        )?;
        ensure(p.level() == r.order as u64, || {
            format!("row {}: level {}", r.row_id, p.level())
        })?;
        ensure(p.order_at_infinity() == Rational64::from_integer(0), || {
            format!("row {}: order", r.row_id)
        })?;
        let s = p.expansion(ORDER);
        ensure(s.leading() == Some(&BigInt::from(1)), || {
            format!("row {}: leading coefficient", r.row_id)
        })?;
    }
    Ok("11 rows holomorphic, non-cuspidal, weight e/2, order 0, leading 1".into())
}

fn singularity_constraint() -> Outcome {
    let rows = catalog();
    for r in rows.iter().filter(|r| r.group != GroupTag::Trivial) {
        let v = r.sing_type.constraint_value();
        ensure(v == Rational64::from_integer(24), || {
            format!("row {}: sum = {v}", r.row_id)
        })?;
    }
    ensure(rows[0].sing_type.counts().is_empty(), || {
        "trivial action has singular points".into()
    })?;
    let z2: Vec<SingularityType> = classify(GroupTag::Z2)
        .solutions
        .into_iter()
        .map(|s| s.sing_type)
        .collect();
    ensure(
        z2 == vec![SingularityType::new([(AdeType::A1, 16)])],
        || format!("Z2: {z2:?}"),
    )?;
    let z3: Vec<SingularityType> = classify(GroupTag::Z3)
        .solutions
        .into_iter()
        .map(|s| s.sing_type)
        .collect();
    ensure(z3 == vec![SingularityType::new([(AdeType::A2, 9)])], || {
        format!("Z3: {z3:?}")
    })?;
    Ok("10 non-trivial rows give 24; Z2 -> 16A1, Z3 -> 9A2 uniquely".into())
}

fn genus_zero() -> Outcome {
    let expected = [1i64, 16, 144, 960, 5264, 25056, 106944, 418176];
    let g = genus_zero_series(21);
    for (d, &v) in expected.iter().enumerate() {
        ensure(*g.coeff(d) == BigInt::from(v), || {
            format!("q^{d}: {}", g.coeff(d))
        })?;
    }
    let row2 = hilbgen::catalog::row(2).map_err(|e| e.to_string())?;
    let chi = chi_y_series(&row2, 21).map_err(|e| e.to_string())?;
    let t = bps_table(20, 21).map_err(|e| e.to_string())?;
    for d in 0..=20 {
        let at_minus_one = genus_evaluate_at_minus_one(chi.coeff(d)).map_err(|e| e.to_string())?;
        ensure(at_minus_one == *g.coeff(d), || {
            format!("chi_y(-1) at q^{d}")
        })?;
        ensure(t.get(d, 0) == *g.coeff(d), || format!("h=0 row at d={d}"))?;
    }
    Ok("d <= 7 values exact; chi_y(-1) and h=0 row agree for d <= 20".into())
}

fn hyperelliptic() -> Outcome {
    let table = hyperelliptic_table(20).map_err(|e| e.to_string())?;
    ensure(table.get(0, 1) == BigInt::from(4), || {
        format!("h_0(1) = {}", table.get(0, 1))
    })?;
    for g in 2..=table.gmax {
        ensure(table.get(0, g) == BigInt::from(0), || {
            format!("h_0({g}) = {}", table.get(0, g))
        })?;
    }
    let id = verify_phi_square_identity(ORDER).map_err(|e| e.to_string())?;
    ensure(id.pass, || {
        format!("identity fails at q^{:?}", id.first_mismatch)
    })?;
    let bopy = verify_hilb_bopy_with(&table);
    ensure(bopy.pass && bopy.lines.len() == 21, || {
        let bad: Vec<usize> = bopy.lines.iter().filter(|l| !l.pass).map(|l| l.d).collect();
        format!("n_d(0) relation fails for d in {bad:?}")
    })?;
    Ok(format!(
        "h_0(1)=4, eta identity to O(q^{ORDER}), n_d(0) relation for d <= 20"
    ))
}

fn k3_reference() -> Outcome {
    let order = 30;
    // the quotient form is rebuilt and compared inside k3_reference_series
    let k3 = k3_reference_series(order).map_err(|e| e.to_string())?;
    ensure(
        k3.euler.coeff_at(0.into()) == Some(BigInt::from(24)),
        || "e(Hilb^1) != 24".into(),
    )?;
    let delta = eta_expansion(order).pow(24).map_err(|e| e.to_string())?;
    let inv_delta = delta.inverse().map_err(|e| e.to_string())?;
    let at_minus_one = k3.kkv.eval_y(-1).map_err(|e| e.to_string())?;
    let cmp = at_minus_one.compare(&inv_delta);
    ensure(cmp.equal && cmp.compared == order, || {
        format!("KKV(y=-1) vs 1/Delta at {:?}", cmp.first_mismatch)
    })?;
    // the quotient form once more, explicitly
    let phi = phi_m2_1(order).substitute_neg_y();
    let prod = k3
        .kkv
        .mul_int_series(&delta)
        .map_err(|e| e.to_string())?
        .mul(&phi);
    let neg_t = TwoVarSeries::one(order).mul_laurent(&LaurentPoly::genus_t().neg());
    ensure(prod == neg_t, || "KKV * Delta * phi(q,-y) != -t".into())?;
    Ok(format!(
        "e(Hilb^1(K3)) = 24; both KKV forms and 1/Delta agree to O(q^{order})"
    ))
}

fn partition_oracle() -> Outcome {
    fn partitions(n: usize, max: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|p| partitions(n - p, p)).sum()
    }
    let f = local_a_type(AdeType::A1, 31).map_err(|e| e.to_string())?;
    for n in 0..=30 {
        let p = partitions(n, n);
        ensure(*f.series.coeff(n) == BigInt::from(p), || {
            format!("q^{n}: {} vs {p}", f.series.coeff(n))
        })?;
    }
    Ok("A-type factor equals partition counts for n <= 30".into())
}

fn numerical_modularity() -> Outcome {
    let start = Instant::now();
    let points = default_points();
    ensure(points.iter().all(|p| p.im >= 1.0), || {
        "test point below Im = 1".into()
    })?;
    let mut worst = 0.0f64;
    let mut weakest_control = f64::INFINITY;
    let mut widened = Vec::new();
    for r in catalog() {
        let p = &r.reference_product;
        let k = p.weight().to_f64().unwrap();
        let n = r.order as u64;
        let mut ms = random_gamma0(n, 20, 10, 0).map_err(|e| e.to_string())?;
        ensure(ms.len() == 10, || {
            format!("row {}: only {} matrices", r.row_id, ms.len())
        })?;
        ensure(
            ms.iter()
                .all(|l| [l.a, l.b, l.c, l.d].iter().all(|x| x.abs() <= 20)),
            || "bound exceeded".into(),
        )?;
        if n > 20 {
            // no c != 0 element has entries <= 20, so the weight control uses the smallest bound N
            let extra = random_gamma0(n, n as i64, 10, 0).map_err(|e| e.to_string())?;
            ms.extend(extra.into_iter().filter(|l| l.c != 0));
            widened.push(r.row_id);
        }
        let mut controls = 0;
        for l in &ms {
            let m = measure_multiplier(p, l, &points, 200).map_err(|e| e.to_string())?;
            worst = worst.max(m.residual);
            ensure(m.residual < 1e-8, || {
                format!("row {} {l:?}: residual {:e}", r.row_id, m.residual)
            })?;
            ensure((m.value.norm() - 1.0).abs() <= 1e-8, || {
                format!("row {} {l:?}: |v| = {}", r.row_id, m.value.norm())
            })?;
            if l.c != 0 {
                for shifted in [k - 0.5, k + 0.5] {
                    let w = measure_multiplier_with_weight(p, l, &points, 200, shifted)
                        .map_err(|e| e.to_string())?;
                    weakest_control = weakest_control.min(w.residual);
                    ensure(w.residual > 1e-3, || {
                        format!("row {} {l:?}: weight {shifted} not rejected", r.row_id)
                    })?;
                }
                controls += 1;
            }
        }
        ensure(controls > 0, || {
            format!("row {}: no matrix with c != 0", r.row_id)
        })?;
    }
    within(start.elapsed(), 10)?;
    Ok(format!(
        "max residual {worst:.1e}, weakest wrong-weight residual {weakest_control:.1e}, \
         rows {widened:?} add c != 0 samples at bound |G|, {:.2?}",
        start.elapsed()
    ))
}

fn property_suites() -> Outcome {
    let cases = 1000;
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let coeffs = |len: usize| proptest::collection::vec(-50i64..50, len);
    let unit = |len: usize| {
        (
            proptest::bool::ANY,
            proptest::collection::vec(-50i64..50, len - 1),
        )
            .prop_map(|(neg, mut rest)| {
                rest.insert(0, if neg { -1 } else { 1 });
                IntSeries::from_i64s(0, &rest)
            })
    };
    let mut passed = 0;

    runner
        .run(&(coeffs(12), coeffs(12), coeffs(12)), |(a, b, c)| {
            let (a, b, c) = (
                IntSeries::from_i64s(0, &a),
                IntSeries::from_i64s(0, &b),
                IntSeries::from_i64s(0, &c),
            );
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(
                a.mul(&b.checked_add(&c).unwrap()),
                a.mul(&b).checked_add(&a.mul(&c)).unwrap()
            );
            prop_assert_eq!(a.mul(&IntSeries::one(12)), a.clone());
            Ok(())
        })
        .map_err(|e| format!("ring axioms: {e}"))?;
    passed += 1;

    runner
        .run(&unit(15), |a| {
            let inv = a.inverse().unwrap();
            prop_assert!(a.mul(&inv).is_one());
            prop_assert!(inv.mul(&a).is_one());
            Ok(())
        })
        .map_err(|e| format!("inverse round trip: {e}"))?;
    passed += 1;

    runner
        .run(
            &(
                unit(12).prop_map(|s| {
                    if s.coeff(0) < &BigInt::from(0) {
                        s.neg()
                    } else {
                        s
                    }
                }),
                1u32..6,
            ),
            |(a, n)| {
                let p = a.pow(n as i64).unwrap();
                prop_assert_eq!(p.nth_root(n).unwrap(), a);
                Ok(())
            },
        )
        .map_err(|e| format!("root round trip: {e}"))?;
    passed += 1;

    runner
        .run(&proptest::collection::vec(-1000i64..1000, 1..13), |half| {
            let deg = half.len() as i64 - 1;
            let mut full = half.clone();
            full.extend(half.iter().rev().skip(1));
            let p = LaurentPoly::from_i64s(-deg, &full);
            let g = genus_expand(&p).unwrap();
            prop_assert_eq!(g.reconstruct(), p.clone());
            prop_assert_eq!(genus_evaluate_at_minus_one(&p).unwrap(), g.get(0));
            Ok(())
        })
        .map_err(|e| format!("genus round trip: {e}"))?;
    passed += 1;

    // the Euler product against its own inverse, a fixed sanity anchor for the kernels
    ensure(
        euler_product(50)
            .mul(&euler_product(50).inverse().unwrap())
            .is_one(),
        || "euler inverse".into(),
    )?;
    Ok(format!("{passed} suites x {cases} cases, zero failures"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 BPS table reproduction", table2_exact),
        ("2 action table assembly", table1_assembly),
        ("3 modular-form certification", modular_certification),
        ("4 singularity constraint", singularity_constraint),
        ("5 genus-zero series", genus_zero),
        ("6 hyperelliptic consistency", hyperelliptic),
        ("7 K3 reference suite", k3_reference),
        ("8 partition oracle", partition_oracle),
        ("9 numerical modularity", numerical_modularity),
        ("10 property suites", property_suites),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
