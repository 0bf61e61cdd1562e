//! Acceptance suite: every criterion below runs at its stated tolerance and
//! prints one PASS/FAIL line. Exact criteria compare rational data
//! bit-for-bit; numeric criteria pin the fitted exponents to the predicted
//! decay and integrability laws.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use polyheight::adapt::ChartStep;
use polyheight::algebra::{LinearMap3, Polynomial, Scalar};
use polyheight::catalog::{catalog, decay_catalog};
use polyheight::lp::{lp_contains, lp_distance};
use polyheight::newton::{build_polyhedron, SupportSet};
use polyheight::pipeline::analyze;
use polyheight::rng::SplitMix64;
use polyheight::structure::{decompose, hessian_vanishes, StructureError};
use polyheight::verify::{
    cone_directions, decay_scan, eval_oscillatory, fit_decay, fit_sublevel,
    integrability_probe, sublevel_measure, BumpSpec, SublevelBudget, Verdict,
};
use std::time::Instant;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn p3(s: &str) -> Polynomial {
    Polynomial::parse(s, 3).unwrap()
}

fn report(criterion: &str, pass: bool, elapsed_s: f64, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({elapsed_s:.2}s) {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

// -------------------------------------------------------------------------
// 1. Catalog correctness (exact, < 1 s)
// -------------------------------------------------------------------------

#[test]
fn criterion_1_catalog_correctness() {
    let start = Instant::now();
    for entry in catalog() {
        let phi = p3(entry.text);
        let a = analyze(&phi).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        let expected_h = rat(entry.h.0, entry.h.1);
        assert_eq!(a.height.height, expected_h, "{}: height", entry.name);
        assert_eq!(a.height.nu, entry.nu, "{}: nu", entry.name);
        assert_eq!(a.height.case, entry.case, "{}: case", entry.name);
        // every emitted chart re-applied to the input reproduces the final
        // polynomial exactly
        assert_eq!(a.chart.apply(&phi), a.chart.final_poly, "{}: chart", entry.name);

        // hand-derived charts
        match entry.name {
            "x1^2" | "x1^3" | "x1^4" | "x1^5" | "x1^2*x2^2" | "x1^2+x2^3" => {
                assert_eq!(a.chart.steps.len(), 1, "{}", entry.name);
                match &a.chart.steps[0] {
                    ChartStep::Linear(m) => assert_eq!(m, &LinearMap3::identity()),
                    other => panic!("{}: unexpected step {other:?}", entry.name),
                }
            }
            name if name.starts_with("(x2-x1^2)^2") => {
                assert_eq!(a.chart.steps.len(), 2, "{name}");
                match &a.chart.steps[1] {
                    ChartStep::Shear { target, source, coeff, power } => {
                        assert_eq!((*target, *source, *power), (1, 0, 2), "{name}");
                        assert_eq!(coeff, &Scalar::one(), "{name}");
                    }
                    other => panic!("{name}: unexpected step {other:?}"),
                }
            }
            "x1^3+x1^2*x2+x1^4*x3" => {
                let fc = a.height.form_constants.as_ref().expect("form constants");
                assert_eq!(fc.c1, Scalar::one());
                assert_eq!(fc.c2, Scalar::one());
                assert_eq!(fc.c3, Scalar::zero());
                let m = LinearMap3::from_i64([[1, 0, 0], [-1, 1, 0], [0, 0, 1]]).unwrap();
                assert_eq!(fc.b, m, "B = A·(triangular map) with A = identity");
            }
            _ => {}
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "1 catalog-correctness",
        elapsed < 1.0,
        elapsed,
        &format!("{} entries, exact h/nu/case/chart", catalog().len()),
    );
}

// -------------------------------------------------------------------------
// 2. Structure round-trip (exact, < 30 s)
// -------------------------------------------------------------------------

fn random_coeff(rng: &mut SplitMix64) -> i64 {
    let c = rng.next_range_i64(-3, 3);
    if c == 0 { 1 } else { c }
}

fn random_univariate(rng: &mut SplitMix64, min_ord: u32, max_deg: u32) -> Polynomial {
    // x1^min_ord * (c0 + ... ) with c0 != 0
    let extra = rng.next_below((max_deg - min_ord + 1) as u64) as u32;
    let mut terms = Vec::new();
    terms.push((min_ord, random_coeff(rng)));
    for k in 1..=extra {
        if rng.next_f64() < 0.6 {
            terms.push((min_ord + k, rng.next_range_i64(-3, 3)));
        }
    }
    let mut p = Polynomial::zero(1);
    for (e, c) in terms {
        let m = polyheight::algebra::Monomial([e, 0, 0]);
        p = p.add(&Polynomial::monomial(m, Scalar::from_int(c), 1));
    }
    p
}

fn random_canonical(rng: &mut SplitMix64, shape: u64) -> Polynomial {
    match shape {
        0 => {
            // one-variable: x1^nu * Q(x1)
            let nu = 2 + rng.next_below(3) as u32;
            random_univariate(rng, nu, 8).with_nvars(3)
        }
        1 => {
            // two-variable: ψ(x1, x2), min degree 2
            loop {
                let mut p = Polynomial::zero(3);
                for _ in 0..4 + rng.next_below(3) {
                    let a = rng.next_below(7) as u32;
                    let b = rng.next_below(7) as u32;
                    if a + b < 2 || a + b > 8 {
                        continue;
                    }
                    let m = polyheight::algebra::Monomial([a, b, 0]);
                    p = p.add(&Polynomial::monomial(
                        m,
                        Scalar::from_int(rng.next_range_i64(-3, 3)),
                        3,
                    ));
                }
                if !p.is_zero() {
                    return p;
                }
            }
        }
        _ => {
            // form: Q1(x1) + Q2(x1) x2 + Q3(x1) x3
            let zero_q1 = rng.next_f64() < 0.25;
            let (o1, o2, o3) = (
                2 + rng.next_below(3) as u32,
                1 + rng.next_below(3) as u32,
                1 + rng.next_below(3) as u32,
            );
            let q1 = if zero_q1 { Polynomial::zero(1) } else { random_univariate(rng, o1, 7) };
            let q2 = random_univariate(rng, o2, 7);
            let q3 = random_univariate(rng, o3, 7);
            let x2 = Polynomial::var(1, 3);
            let x3 = Polynomial::var(2, 3);
            q1.with_nvars(3)
                .add(&q2.with_nvars(3).mul(&x2))
                .add(&q3.with_nvars(3).mul(&x3))
        }
    }
}

fn random_matrix(rng: &mut SplitMix64, bound: i64) -> LinearMap3 {
    loop {
        let entries: [[i64; 3]; 3] = std::array::from_fn(|_| {
            std::array::from_fn(|_| rng.next_range_i64(-bound, bound))
        });
        if let Ok(m) = LinearMap3::from_i64(entries) {
            return m;
        }
    }
}

#[test]
fn criterion_2_structure_round_trip() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xC2_2024);

    for i in 0..50u64 {
        let base = random_canonical(&mut rng, i % 3);
        let a = random_matrix(&mut rng, 2);
        let phi = base.compose_linear(&a);
        assert!(
            hessian_vanishes(&phi).vanishes,
            "composed canonical shape must stay degenerate (case {i})"
        );
        let dec = decompose(&phi).unwrap_or_else(|e| panic!("case {i}: {e}"));
        assert!(dec.verify(&phi), "case {i}: witness identity");
    }

    // generic polynomials are not degenerate; decompose must refuse with a
    // valid witness point
    let mut produced = 0;
    while produced < 50 {
        let mut phi = Polynomial::zero(3);
        for _ in 0..6 {
            let a = rng.next_below(4) as u32;
            let b = rng.next_below(4) as u32;
            let c = rng.next_below(4) as u32;
            let d = a + b + c;
            if !(2..=4).contains(&d) {
                continue;
            }
            let m = polyheight::algebra::Monomial([a, b, c]);
            phi = phi.add(&Polynomial::monomial(
                m,
                Scalar::from_int(rng.next_range_i64(-3, 3)),
                3,
            ));
        }
        let det = phi.hessian_det();
        if det.is_zero() {
            continue; // rare degenerate draw; not the target of this half
        }
        produced += 1;
        match decompose(&phi) {
            Err(StructureError::NotDegenerate { witness, .. }) => {
                let point = [
                    Scalar::from_int(witness[0]),
                    Scalar::from_int(witness[1]),
                    Scalar::from_int(witness[2]),
                ];
                assert!(!det.eval(&point).is_zero(), "witness point must be valid");
            }
            other => panic!("expected NotDegenerate, got {other:?}"),
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "2 structure-round-trip",
        elapsed < 30.0,
        elapsed,
        "50 canonical round-trips + 50 generic rejections",
    );
}

// -------------------------------------------------------------------------
// 3. Newton oracle equivalence (exact, < 60 s)
// -------------------------------------------------------------------------

#[test]
fn criterion_3_newton_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xC3_2024);
    let mut memberships = 0usize;
    for case in 0..100u32 {
        let dim: u8 = if case % 10 < 7 { 3 } else { 2 };
        let npoints = 3 + rng.next_below(10) as usize;
        let mut points = Vec::with_capacity(npoints);
        for _ in 0..npoints {
            let p = [
                rng.next_below(13) as u32,
                rng.next_below(13) as u32,
                if dim == 3 { rng.next_below(13) as u32 } else { 0 },
            ];
            if p == [0, 0, 0] {
                continue;
            }
            points.push(p);
        }
        if points.is_empty() {
            points.push([1, 1, 0]);
        }
        let support = SupportSet::new(dim, points.clone());
        let hull = build_polyhedron(&support);

        // distance agreement, exact
        let d_facets = hull.distance();
        let d_lp = lp_distance(&support.points, dim as usize);
        assert_eq!(d_facets, d_lp, "case {case}: distance mismatch");

        // membership agreement on random rational points
        for _ in 0..10 {
            let t: Vec<BigRational> = (0..dim as usize)
                .map(|_| {
                    rat(
                        rng.next_below(57) as i64,
                        1 + rng.next_below(4) as i64,
                    )
                })
                .collect();
            let by_facets = hull.contains(&t);
            let by_lp = lp_contains(&support.points, dim as usize, &t);
            assert_eq!(by_facets, by_lp, "case {case}: membership of {t:?}");
            memberships += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "3 newton-oracle-equivalence",
        elapsed < 60.0,
        elapsed,
        &format!("100 supports, {memberships} membership queries"),
    );
}

// -------------------------------------------------------------------------
// 4. Decay sharpness (numeric, < 10 min)
// -------------------------------------------------------------------------

#[test]
fn criterion_4_decay_sharpness() {
    let start = Instant::now();
    let bump = BumpSpec::standard();
    let normal = [0.0, 0.0, 0.0, 1.0];
    let mut detail = String::new();
    for entry in decay_catalog() {
        let phi = p3(entry.text);
        let scan = decay_scan(&phi, &bump, normal, 64.0, 262144.0, 4);
        let fit = fit_decay(&scan, entry.log_flag).unwrap_or_else(|e| {
            panic!("{}: {e} ({} accepted)", entry.name, scan.samples.len())
        });
        let dev = (fit.exponent - entry.beta).abs();
        detail.push_str(&format!(
            "{}: fitted {:.4} vs {:.4} (dev {:.3}); ",
            entry.name, fit.exponent, entry.beta, dev
        ));
        assert!(
            dev <= 0.07,
            "{}: fitted {} expected {} (log flag {})",
            entry.name,
            fit.exponent,
            entry.beta,
            entry.log_flag
        );
        if entry.name == "x1^2*x2^2" {
            // the no-log fit must reveal the logarithmic correction
            let raw = fit_decay(&scan, 0).unwrap();
            detail.push_str(&format!("no-log fit {:.4}; ", raw.exponent));
            assert!(
                raw.exponent > -0.5 && raw.exponent < -0.40,
                "log factor not visible: no-log fit {}",
                raw.exponent
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report("4 decay-sharpness", elapsed < 600.0, elapsed, &detail);
}

// -------------------------------------------------------------------------
// 5. Uniformity envelope (numeric, < 10 min)
// -------------------------------------------------------------------------

#[test]
fn criterion_5_uniformity_envelope() {
    let start = Instant::now();
    let bump = BumpSpec::standard();
    let dirs = cone_directions(0.1);
    let mut detail = String::new();
    for entry in decay_catalog() {
        let phi = p3(entry.text);
        let bound = entry.beta + 0.1;
        let mut worst = f64::NEG_INFINITY;
        for dir in &dirs[1..] {
            let scan = decay_scan(&phi, &bump, *dir, 64.0, 2048.0, 2);
            assert!(scan.samples.len() >= 8, "{} dir {dir:?}: too few samples", entry.name);
            // when the cone direction kills every stationary point, the
            // decay is super-polynomial and no log-log window is linear;
            // the envelope is then checked on the endpoint secant
            let slope = match fit_decay(&scan, entry.log_flag) {
                Ok(fit) => fit.exponent,
                Err(_) => {
                    let first = scan.samples.first().unwrap();
                    let last = scan.samples.last().unwrap();
                    let num = (last.value.norm().max(1e-300) / first.value.norm()).ln();
                    num / (last.lambda / first.lambda).ln()
                }
            };
            worst = worst.max(slope);
            assert!(
                slope <= bound,
                "{} dir {dir:?}: decay slope {} above envelope {}",
                entry.name,
                slope,
                bound
            );
        }
        detail.push_str(&format!("{}: worst cone fit {:.4} ≤ {:.4}; ", entry.name, worst, bound));

        // a direction with ξ₄ = 0 decays beyond any power
        let flat = [1.0, 0.0, 0.0, 0.0];
        let j_min = eval_oscillatory(&phi, &bump, [64.0 * flat[0], 0.0, 0.0, 0.0]);
        let j_hi = eval_oscillatory(&phi, &bump, [4096.0 * flat[0], 0.0, 0.0, 0.0]);
        assert!(
            j_hi.value.norm() < 1e-8 * j_min.value.norm(),
            "{}: flat-direction |J| did not collapse ({} vs {})",
            entry.name,
            j_hi.value.norm(),
            j_min.value.norm()
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    report("5 uniformity-envelope", elapsed < 600.0, elapsed, &detail);
}

// -------------------------------------------------------------------------
// 6. Integrability dichotomy (numeric, < 5 min)
// -------------------------------------------------------------------------

#[test]
fn criterion_6_integrability_dichotomy() {
    let start = Instant::now();
    let eps_grid: Vec<f64> = (6..=20).map(|k| 2f64.powi(-k)).collect();
    let mut detail = String::new();
    for entry in catalog() {
        let phi = p3(entry.text);
        let analysis = analyze(&phi).unwrap();
        let h = analysis.height.height.to_f64().unwrap();
        let nu = analysis.height.nu;
        let samples = sublevel_measure(&phi, 1.0, &eps_grid, 0xD1C0, SublevelBudget::default());
        let fit = fit_sublevel(&samples, nu).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        let expected = 1.0 / h;
        assert!(
            (fit.exponent - expected).abs() <= 0.1,
            "{}: sublevel exponent {} vs 1/h = {}",
            entry.name,
            fit.exponent,
            expected
        );
        let conv = integrability_probe(&samples, 1.5 * h, nu, Some(expected)).unwrap();
        assert_eq!(
            conv.verdict,
            Verdict::Converges,
            "{}: probe at p = 1.5h (a·p = {})",
            entry.name,
            conv.fit.exponent * 1.5 * h
        );
        let div = integrability_probe(&samples, 0.75 * h, nu, Some(expected)).unwrap();
        assert_eq!(
            div.verdict,
            Verdict::Diverges,
            "{}: probe at p = 0.75h (a·p = {})",
            entry.name,
            div.fit.exponent * 0.75 * h
        );
        detail.push_str(&format!("{}: a={:.3} (1/h={:.3}); ", entry.name, fit.exponent, expected));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report("6 integrability-dichotomy", elapsed < 300.0, elapsed, &detail);
}

// -------------------------------------------------------------------------
// 7. Invariance suite (exact, < 60 s)
// -------------------------------------------------------------------------

#[test]
fn criterion_7_invariance_suite() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xC7_2024);

    // h and ν are invariant under linear precompositions
    for entry in catalog() {
        let phi = p3(entry.text);
        let base = analyze(&phi).unwrap();
        for _ in 0..20 {
            let l = random_matrix(&mut rng, 1);
            let phi_l = phi.compose_linear(&l);
            let a = analyze(&phi_l)
                .unwrap_or_else(|e| panic!("{} ∘ L: {e}", entry.name));
            assert_eq!(a.height.height, base.height.height, "{}: h under L", entry.name);
            assert_eq!(a.height.nu, base.height.nu, "{}: nu under L", entry.name);
        }
    }

    // chain rule: det D²(φ∘A) = det(A)² (det D²φ)∘A, exactly
    for case in 0..50 {
        let mut phi = Polynomial::zero(3);
        for _ in 0..6 {
            let a = rng.next_below(4) as u32;
            let b = rng.next_below(4) as u32;
            let c = rng.next_below(3) as u32;
            if !(1..=4).contains(&(a + b + c)) {
                continue;
            }
            let m = polyheight::algebra::Monomial([a, b, c]);
            phi = phi.add(&Polynomial::monomial(
                m,
                Scalar::from_int(rng.next_range_i64(-3, 3)),
                3,
            ));
        }
        let a = random_matrix(&mut rng, 2);
        let lhs = phi.compose_linear(&a).hessian_det();
        let det2 = a.det() * a.det();
        let rhs = phi.hessian_det().compose_linear(&a).scale(&det2);
        assert_eq!(lhs, rhs, "chain rule case {case}");
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "7 invariance-suite",
        elapsed < 60.0,
        elapsed,
        "20 precompositions × catalog + 50 chain-rule identities",
    );
}
