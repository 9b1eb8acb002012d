//! Acceptance gate: the ten primary criteria, one test and one printed
//! verdict line each. Every tolerance is stated inline next to its check.

use std::time::Instant;

use gjms6::bubble_quadrature::{
    coefficient_a, coefficient_a_limit, limit_bracket, limit_bracket_from_betas,
    n10_log_divergence, remainder_scaling, sobolev_quotient_at, BubbleParams,
};
use gjms6::exact_arith::{
    dim_eval, n_plus, rat, ratio, rational_to_f64, BetaRatio, DimRational, Rational,
};
use gjms6::green_expansion::{build_source, log_coefficient_n10, psi4_coefficients, psi4_reference_ratios, solve_psi4};
use gjms6::polyspace::HomogeneousPoly;
use gjms6::sphere_spectral::{
    factor_constants, lambda_zero, q_sphere, verify_factorization, y6_sphere, Density,
    ZonalGalerkin,
};
use gjms6::tensor_weyl::{SchoutenJet, WeylTensor};

const PTS: usize = 32;

fn pass(k: u32, what: &str) {
    println!("[criterion {k:02}] PASS — {what}");
}

fn data(n: usize, seed: u64) -> (WeylTensor, SchoutenJet) {
    let w = WeylTensor::random(n, seed);
    let jet = SchoutenJet::random(n, seed.wrapping_add(99), w.norm_sq());
    (w, jet)
}

#[test]
fn criterion_01_factorization_identity() {
    let start = Instant::now();
    verify_factorization().expect("display equals the three-factor product");
    let lambda0 = factor_constants()
        .iter()
        .fold(DimRational::one(), |acc, c| &acc * c);
    let rhs = &(&q_sphere() * &n_plus(-6)) / &DimRational::from_int(2);
    assert!(
        (&lambda0 - &rhs).is_zero(),
        "constant eigenvalue must equal (n-6)/2 · Q symbolically"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "budget 1 s, took {elapsed:?}");
    pass(1, &format!(
        "Einstein factorization and lambda_0 = (n-6)/2·Q hold as exact rational functions of n (runtime {elapsed:.2?} < 1 s)"
    ));
}

#[test]
fn criterion_02_psi4_closed_forms() {
    let start = Instant::now();
    // published display, frozen here independently of the library
    let published: [DimRational; 3] = [
        DimRational::one() / (DimRational::from_int(135) * n_plus(-2)),
        gjms6::exact_arith::dim_poly(&[-20, 3])
            / (DimRational::from_int(270) * n_plus(4) * n_plus(-4) * n_plus(-8)),
        -gjms6::exact_arith::dim_poly(&[224, -66, 5])
            / (DimRational::from_int(120) * n_plus(-8) * n_plus(-4)),
    ];
    let ours = psi4_coefficients();
    for (our, pub_) in ours.iter().zip(&published) {
        // single documented global sign
        assert!((&(our + pub_)).is_zero(), "ours = -published, slot-by-slot");
    }
    let fourth = psi4_reference_ratios()[3].clone();
    assert_eq!(
        fourth,
        -(n_plus(-10) * n_plus(-8)).recip(),
        "fourth coefficient disagrees by exactly (n-8)(n-10), documented"
    );
    for n in 11usize..=20 {
        let c: Vec<Rational> = ours.iter().map(|d| dim_eval(d, n as i64).unwrap()).collect();
        for seed in 0..20u64 {
            let (w, jet) = data(n, 1000 * n as u64 + seed);
            let source = build_source(n, &w, &jet);
            let psi = solve_psi4(&source);
            let dec = psi.harmonic_decompose();
            let b = source.brackets();
            assert_eq!(dec.component(0), &b.bracket1.scale(&c[0]));
            assert_eq!(
                dec.component(1),
                &b.bracket2.scale(&c[1]).add(&b.bracket3.scale(&c[2]))
            );
            assert_eq!(
                dec.component(2),
                &HomogeneousPoly::constant(n, &w.norm_sq() * &c[3])
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "budget 30 s, took {elapsed:?}");
    pass(2, &format!(
        "solver psi_4 equals the closed forms exactly for 200 random tensors, n in 11..=20, up to the documented global sign; fourth coefficient carries the documented (n-8)(n-10) factor (runtime {elapsed:.2?} < 30 s)"
    ));
}

#[test]
fn criterion_03_n10_log_coefficient() {
    for seed in [3u64, 7, 19] {
        let (w, jet) = data(10, seed);
        let lc = log_coefficient_n10(&w, &jet);
        assert_eq!(lc.unit_leading, ratio(1, 4320), "unit-leading coefficient, exact");
        assert_eq!(lc.reference, ratio(1, 17280), "published value on record");
        assert_eq!(lc.reference_ratio(), Some(ratio(1, 4)), "audit: published/ours = 1/4");
        let c10 = 128.0 * std::f64::consts::PI.powi(5);
        let scaled = rational_to_f64(&lc.unit_leading) / c10;
        assert!(
            (lc.delta_normalized - scaled).abs() <= 1e-15 * scaled.abs(),
            "delta normalization divides by 128·pi^5"
        );
    }
    pass(3, "n = 10 log coefficient emitted in both normalizations; published 1/17280 vs exact 1/4320 is a documented-discrepancy with ratio 1/4 on the audit trail (exact)");
}

#[test]
fn criterion_04_harmonicity_suite() {
    let start = Instant::now();
    for seed in 0..100u64 {
        let n = 10 + (seed as usize) % 7; // n in 10..=16
        let (w, jet) = data(n, seed);
        let b = gjms6::tensor_weyl::bracket_polynomials(&w, &jet);
        assert!(b.bracket1.is_harmonic(), "bracket 1, n = {n}, seed = {seed}");
        assert!(b.bracket2.is_harmonic(), "bracket 2, n = {n}, seed = {seed}");
        assert!(b.bracket3.is_harmonic(), "bracket 3, n = {n}, seed = {seed}");
        assert_eq!(
            w.quartic_form().laplacian(),
            w.vector_form().scale(&rat(2)),
            "Delta Q = 2V"
        );
        assert_eq!(
            w.symmetrized_contraction(),
            &w.norm_sq() * rat(3),
            "sum (W_ikls + W_ilks)^2 = 3|W|^2"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget 60 s, took {elapsed:?}");
    pass(4, &format!(
        "brackets 1-3 exactly harmonic and both contraction identities exact for 100 random pairs, n in 10..=16 (runtime {elapsed:.2?} < 60 s)"
    ));
}

#[test]
fn criterion_05_beta_identities() {
    // B(n/2+1, n/2-3) = (n/2-4)(n/2-5)/((n-3)(n-4)) · B(n/2+1, n/2-5)
    let b_2_m6 = BetaRatio::relative_to_reference(2, -6).unwrap();
    assert_eq!(
        b_2_m6.value,
        n_plus(-8) * n_plus(-10)
            / (DimRational::from_int(4) * n_plus(-3) * n_plus(-4))
    );
    // B(n/2+1, n/2-4) = (n/2-5)/(n-4) · B(n/2+1, n/2-5)
    let b_2_m8 = BetaRatio::relative_to_reference(2, -8).unwrap();
    assert_eq!(
        b_2_m8.value,
        n_plus(-10) / (DimRational::from_int(2) * n_plus(-4))
    );
    // B(n/2, n/2-4) = (n-10)/n · B(n/2+1, n/2-5)
    let b_0_m8 = BetaRatio::relative_to_reference(0, -8).unwrap();
    assert_eq!(b_0_m8.value, n_plus(-10) / DimRational::nvar());
    pass(5, "the three quoted Beta ratios hold as exact rational functions of n");
}

#[test]
fn criterion_06_bracket_negativity() {
    let bracket = limit_bracket();
    assert_eq!(bracket, limit_bracket_from_betas(), "two assembly routes agree");
    for n in 11..=200 {
        let v = dim_eval(&bracket, n).unwrap();
        assert!(v < rat(0), "bracket must be negative at n = {n}, got {v}");
    }
    assert_eq!(dim_eval(&bracket, 11).unwrap(), ratio(-184171, 18304));
    pass(6, "bracket polynomial negative for every integer 11 <= n <= 200 in exact arithmetic; spot value at n = 11 equals -184171/18304");
}

#[test]
fn criterion_07_sharp_sobolev() {
    for n in 7..=12 {
        let y6 = y6_sphere(n);
        let q = sobolev_quotient_at(n, 1.0, PTS);
        assert!(
            (q / y6 - 1.0).abs() <= 1e-8,
            "n = {n}: quotient {q} vs Y6 {y6} beyond 1e-8 relative"
        );
        for eps in [1.0 / 3.0, 2.7] {
            let qe = sobolev_quotient_at(n, eps, PTS);
            assert!(
                (qe - q).abs() <= 1e-9 * y6,
                "n = {n}: quotient must be eps-invariant to 1e-9, moved by {}",
                (qe - q).abs() / y6
            );
        }
    }
    pass(7, "bubble quotient equals Y6(S^n) within 1e-8 relative for n in 7..=12 and is eps-invariant to 1e-9");
}

#[test]
fn criterion_08_a_coefficient_limit() {
    let rho = 0.5;
    for n in 11..=14 {
        let eps = rho * 1e-3;
        let params = BubbleParams::new(n, eps, rho, PTS);
        let scaled = coefficient_a(&params) / eps.powi(4);
        let limit = coefficient_a_limit(n);
        assert!(
            (scaled / limit - 1.0).abs() <= 0.01,
            "n = {n}: {scaled} vs Beta closed form {limit} beyond 1%"
        );
    }
    let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect();
    let fit = n10_log_divergence(rho, &grid, PTS);
    assert!(fit.slope < 0.0, "n = 10 brace must diverge to -infinity");
    assert!(
        fit.max_rel_residual <= 1e-3,
        "linear fit in |log eps| residual {} > 1e-3",
        fit.max_rel_residual
    );
    pass(8, "A-coefficient within 1% of the Beta closed form at eps/rho = 1e-3 for n in 11..=14; n = 10 sweep has negative slope in |log eps| with fit residual <= 1e-3");
}

#[test]
fn criterion_09_remainder_scaling() {
    let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(-3.0 - 0.5 * k as f64)).collect();
    let v10 = remainder_scaling(10, 0.5, &grid, PTS);
    assert!((v10.plain_slope - 4.0).abs() <= 0.1, "{v10:?}");
    assert!(!v10.log_detected, "{v10:?}");
    let v11 = remainder_scaling(11, 0.5, &grid, PTS);
    assert!((v11.corrected_slope - 5.0).abs() <= 0.1, "{v11:?}");
    assert!(v11.log_detected, "{v11:?}");
    let v12 = remainder_scaling(12, 0.5, &grid, PTS);
    assert!((v12.plain_slope - 5.0).abs() <= 0.1, "{v12:?}");
    assert!(!v12.log_detected, "{v12:?}");
    pass(9, "remainder exponents fit to 4.0 (n = 10), 5.0 with detected log correction (n = 11), and 5.0 (n = 12), each within ±0.1");
}

#[test]
fn criterion_10_galerkin() {
    let n = 10usize;
    let ell_max = 8usize;
    let galerkin = ZonalGalerkin::new(n, ell_max, 40);
    let f_val = rational_to_f64(&lambda_zero(n as i64));
    let density = Density::Constant(f_val);

    // 1% perturbation of the constant solution along even modes; the first
    // mode is exactly flat at n = 10 and is left untouched
    let mut u0 = galerkin.constant_function(1.0);
    let a0 = u0.coeffs[0];
    u0.coeffs[0] += 0.01 * a0;
    u0.coeffs[2] -= 0.01 * a0;
    u0.coeffs[4] += 0.005 * a0;

    // analytic gradient vs central differences at the perturbed point
    let g0 = galerkin.gradient(&density, &u0);
    let h = 1e-5;
    for ell in 0..=ell_max {
        let mut up = u0.clone();
        up.coeffs[ell] += h;
        let mut dn = u0.clone();
        dn.coeffs[ell] -= h;
        let fd = (galerkin.energy(&density, &up) - galerkin.energy(&density, &dn)) / (2.0 * h);
        assert!(
            (fd - g0.coeffs[ell]).abs() <= 1e-6 * g0.coeffs[ell].abs().max(1.0),
            "mode {ell}: finite differences {fd} vs analytic {}",
            g0.coeffs[ell]
        );
    }

    let tol = 1e-10;
    let u = galerkin
        .find_critical_point(&density, &u0, tol)
        .expect("Newton converges from the 1% perturbation");
    let g = galerkin.gradient(&density, &u);
    let gnorm = g.coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = u
        .coeffs
        .iter()
        .enumerate()
        .map(|(ell, a)| {
            let la = galerkin.eigenvalue(ell) * a;
            la * la
        })
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    assert!(gnorm <= tol * scale, "residual {gnorm} > 1e-10 x scale {scale}");

    let nf = n as f64;
    let level = galerkin.mountain_pass_level(&density, &u);
    let closed = 3.0 / nf * y6_sphere(n as i64).powf(nf / 6.0) * f_val.powf((6.0 - nf) / 6.0);
    assert!(
        (level / closed - 1.0).abs() <= 1e-8,
        "level {level} vs closed form {closed} beyond 1e-8 relative"
    );
    pass(10, "Newton on S^10 (L = 8) converges from a 1% perturbation with residual <= 1e-10, the mountain-pass level matches (3/n)·Y6^{n/6}·f^{(6-n)/6} within 1e-8, and the gradient matches finite differences to 1e-6");
}
