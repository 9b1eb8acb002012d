//! Command-line driver. Each subcommand re-derives one slice of the
//! toolkit's claims and emits a report of typed records; the process exit
//! code summarizes the verdicts (0 clean, 1 any mismatch, 2 usage error).

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bubble_quadrature::{
    brace, coefficient_a, coefficient_a_limit, critical_mass, default_quad_points,
    limit_bracket, limit_bracket_from_betas, n10_log_divergence, remainder_scaling,
    sobolev_quotient_at, BubbleParams,
};
use crate::exact_arith::{dim_eval, factorial_big, n_plus, ratio, DimRational, Rational};
use crate::green_expansion::{
    build_source, delta_constant, expand, log_coefficient_n10, psi4_coefficients,
    psi4_reference_ratios, residual_vanishes_through, solve_psi4,
};
use crate::polyspace::HomogeneousPoly;
use crate::sphere_spectral::{
    factor_constants, lambda_zero, omega_n, q_sphere, sphere_spectrum,
    y6_sphere, Density, EinsteinOperator, ZonalGalerkin,
};
use crate::tensor_weyl::{SchoutenJet, WeylTensor};

// ---------------------------------------------------------------------------
// report schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    Mismatch,
    DocumentedDiscrepancy,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::DocumentedDiscrepancy => "documented-discrepancy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

impl Provenance {
    fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        }
    }
}

/// One verified claim: what was expected, what came out, and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRecord {
    pub claim_id: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    pub provenance: Provenance,
}

impl ReportRecord {
    fn verdict(
        id: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        ok: bool,
        provenance: Provenance,
    ) -> Self {
        ReportRecord {
            claim_id: id.into(),
            expected: expected.into(),
            computed: computed.into(),
            status: if ok { Status::Match } else { Status::Mismatch },
            provenance,
        }
    }

    fn documented(
        id: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        provenance: Provenance,
    ) -> Self {
        ReportRecord {
            claim_id: id.into(),
            expected: expected.into(),
            computed: computed.into(),
            status: Status::DocumentedDiscrepancy,
            provenance,
        }
    }
}

/// Resolved run parameters, echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub n: Option<i64>,
    pub ell_max: Option<usize>,
    pub eps: Option<f64>,
    pub rho: Option<f64>,
    pub quad_points: usize,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub output_format: String,
}

impl RunConfig {
    fn bare(subcommand: &str, format: OutputFormat) -> Self {
        RunConfig {
            subcommand: subcommand.to_string(),
            n: None,
            ell_max: None,
            eps: None,
            rho: None,
            quad_points: default_quad_points(),
            seed: None,
            tol: None,
            output_format: format.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub claims: Vec<ReportRecord>,
    pub config: RunConfig,
    pub version: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let bad = self.claims.iter().any(|c| c.status == Status::Mismatch);
        if bad {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim_id,expected,computed,status,provenance\n");
        for c in &self.claims {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&c.claim_id),
                csv_field(&c.expected),
                csv_field(&c.computed),
                c.status.as_str(),
                c.provenance.as_str(),
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// 17 significant digits: enough to round-trip any f64.
fn f17(v: f64) -> String {
    format!("{v:.16e}")
}

fn rel_close(expected: f64, computed: f64, tol: f64) -> bool {
    (computed - expected).abs() <= tol * expected.abs().max(tol)
}

// ---------------------------------------------------------------------------
// argument surface
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gjms6", version, about = "Sixth-order conformal operator checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere eigenvalues by two routes, Q-curvature, and the sharp constant.
    Spectrum {
        #[arg(long)]
        n: i64,
        /// Highest spherical-harmonic degree to tabulate.
        #[arg(long, default_value_t = 3)]
        ell_max: u32,
    },
    /// Symbolic check of the three-factor Einstein product.
    Factorization {
        /// Number of factors in the product (the operator fixes 3).
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Negative control: shift one factor and confirm detection.
        #[arg(long)]
        perturb: bool,
    },
    /// Expansion coefficients of the fundamental solution near the pole.
    Green {
        #[arg(long)]
        n: usize,
        /// Seed for the random curvature data.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Degree-by-degree induction driver with the zero curvature map.
    Expand {
        #[arg(long)]
        n: usize,
        /// Solve every layer of degree at most this.
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Concentrated-profile energies: mass, quotient, and the A-coefficient.
    Bubble {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Sweep ε at n = 10 and fit the logarithmic divergence.
        #[arg(long)]
        scan: bool,
        /// Gauss panel size for the adaptive quadrature.
        #[arg(long)]
        quad_points: Option<usize>,
    },
    /// Galerkin critical point on the sphere and its mountain-pass level.
    Mountain {
        #[arg(long)]
        n: usize,
        /// Right-hand density; only "const" is implemented.
        #[arg(long, default_value = "const")]
        f: String,
        #[arg(long, default_value_t = 8)]
        ell_max: usize,
        /// Newton stopping tolerance (relative to the solution scale).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        quad_points: Option<usize>,
        /// Seed for the initial perturbation.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

pub fn execute(cli: &Cli) -> Result<Report, String> {
    let fmt = cli.format;
    let (claims, config) = match &cli.command {
        Command::Spectrum { n, ell_max } => run_spectrum(*n, *ell_max, fmt)?,
        Command::Factorization { k, perturb } => run_factorization(*k, *perturb, fmt)?,
        Command::Green { n, seed } => run_green(*n, *seed, fmt)?,
        Command::Expand { n, max_order, seed } => run_expand(*n, *max_order, *seed, fmt)?,
        Command::Bubble { n, eps, rho, scan, quad_points } => {
            run_bubble(*n, *eps, *rho, *scan, *quad_points, fmt)?
        }
        Command::Mountain { n, f, ell_max, tol, quad_points, seed } => {
            run_mountain(n, f, *ell_max, *tol, *quad_points, *seed, fmt)?
        }
    };
    Ok(Report {
        claims,
        config,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn require_dim(n: i64, context: &str) -> Result<(), String> {
    if n < 7 {
        Err(format!(
            "{context} requires n ≥ 7; the operator degenerates at n = 6 (got n = {n})"
        ))
    } else {
        Ok(())
    }
}

fn run_spectrum(
    n: i64,
    ell_max: u32,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    require_dim(n, "spectrum")?;
    if ell_max > 64 {
        return Err(format!("ell_max is capped at 64 (got {ell_max})"));
    }
    let mut config = RunConfig::bare("spectrum", fmt);
    config.n = Some(n);
    config.ell_max = Some(ell_max as usize);

    let spectrum = sphere_spectrum(n, ell_max);
    let op = EinsteinOperator::standard();
    let mut claims = Vec::new();
    for ell in 0..=ell_max as usize {
        let t = Rational::from_integer((ell as i64 * (ell as i64 + n - 1)).into());
        let cubic = op.sphere_eigenvalue(n, &t);
        let product = &spectrum.eigenvalues[ell];
        claims.push(ReportRecord::verdict(
            format!("spectrum.lambda[{ell}]"),
            cubic.to_string(),
            product.to_string(),
            &cubic == product,
            Provenance::Derived,
        ));
        // dimension of the harmonic space by the classical closed form
        let ebig: BigInt = (2 * ell as i64 + n - 1)
            * factorial_big(ell as u64 + n as u64 - 2)
            / (factorial_big(ell as u64) * factorial_big(n as u64 - 1));
        let mult = spectrum.multiplicities[ell];
        claims.push(ReportRecord::verdict(
            format!("spectrum.multiplicity[{ell}]"),
            ebig.to_string(),
            mult.to_string(),
            ebig.to_string() == mult.to_string(),
            Provenance::Trivial,
        ));
    }
    // λ₀ = (n−6)/2 · Q on the sphere
    let q = dim_eval(&q_sphere(), n).map_err(|e| e.to_string())?;
    let from_lambda = lambda_zero(n) * ratio(2, n - 6);
    claims.push(ReportRecord::verdict(
        "spectrum.q_curvature",
        q.to_string(),
        from_lambda.to_string(),
        q == from_lambda,
        Provenance::Paper,
    ));
    // sharp constant: closed form against the concentrated-profile quotient
    let y6 = y6_sphere(n);
    let quotient = sobolev_quotient_at(n, 1.0, config.quad_points);
    claims.push(ReportRecord::verdict(
        "spectrum.sharp_constant",
        f17(y6),
        f17(quotient),
        rel_close(y6, quotient, 1e-8),
        Provenance::Derived,
    ));
    Ok((claims, config))
}

fn run_factorization(
    k: u32,
    perturb: bool,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    if k != 3 {
        return Err(format!(
            "the sixth-order operator factors into exactly 3 terms (got --k {k})"
        ));
    }
    let config = RunConfig::bare("factorization", fmt);
    let mut factors = crate::sphere_spectral::factor_constants_general();
    if perturb {
        factors[0] = &factors[0] + &DimRational::from_rat(ratio(1, 1000));
    }
    let display = EinsteinOperator::standard();
    let product = EinsteinOperator::from_factors(&factors);
    let slots = [
        ("factorization.coeff_delta2", &display.quad_coeff, &product.quad_coeff),
        ("factorization.coeff_delta1", &display.lin_coeff, &product.lin_coeff),
        ("factorization.coeff_delta0", &display.const_coeff, &product.const_coeff),
    ];
    let mut claims = Vec::new();
    for (id, d, p) in slots {
        claims.push(ReportRecord::verdict(
            id,
            d.to_string(),
            p.to_string(),
            (d - p).is_zero(),
            Provenance::Paper,
        ));
    }
    // constant eigenvalue equals (n−6)/2 · Q as rational functions of n
    let lambda0 = factor_constants()
        .iter()
        .fold(DimRational::one(), |acc, c| &acc * c);
    let rhs = &(&q_sphere() * &n_plus(-6)) / &DimRational::from_int(2);
    claims.push(ReportRecord::verdict(
        "factorization.lambda0_identity",
        rhs.to_string(),
        lambda0.to_string(),
        (&lambda0 - &rhs).is_zero(),
        Provenance::Derived,
    ));
    // published spot values
    claims.push(ReportRecord::verdict(
        "factorization.lambda0[n=10]",
        "5040",
        lambda_zero(10).to_string(),
        lambda_zero(10) == ratio(5040, 1),
        Provenance::Paper,
    ));
    let q10 = dim_eval(&q_sphere(), 10).map_err(|e| e.to_string())?;
    claims.push(ReportRecord::verdict(
        "factorization.q[n=10]",
        "2520",
        q10.to_string(),
        q10 == ratio(2520, 1),
        Provenance::Paper,
    ));
    let q7 = dim_eval(&q_sphere(), 7).map_err(|e| e.to_string())?;
    claims.push(ReportRecord::verdict(
        "factorization.q[n=7]",
        "10395/32",
        q7.to_string(),
        q7 == ratio(10395, 32),
        Provenance::Paper,
    ));
    Ok((claims, config))
}

fn curvature_data(n: usize, seed: u64) -> (WeylTensor, SchoutenJet) {
    let w = WeylTensor::random(n, seed);
    let jet = SchoutenJet::random(n, seed.wrapping_add(99), w.norm_sq());
    (w, jet)
}

fn zero_map(p: &HomogeneousPoly) -> HomogeneousPoly {
    HomogeneousPoly::zero(p.dim(), p.degree() + 2)
}

fn run_green(
    n: usize,
    seed: u64,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    require_dim(n as i64, "green")?;
    let mut config = RunConfig::bare("green", fmt);
    config.n = Some(n as i64);
    config.seed = Some(seed);
    let (w, jet) = curvature_data(n, seed);
    let mut claims = Vec::new();

    if n >= 11 {
        let source = build_source(n, &w, &jet);
        let psi = solve_psi4(&source);
        let dec = psi.harmonic_decompose();
        let b = source.brackets();
        let c: Vec<Rational> = psi4_coefficients()
            .iter()
            .map(|d| dim_eval(d, n as i64).unwrap())
            .collect();
        // pure layers admit direct proportionality checks
        let top = dec.component(0).proportionality(&b.bracket1);
        claims.push(ReportRecord::verdict(
            "green.psi4.layer_h4",
            c[0].to_string(),
            top.as_ref().map_or_else(|| "not proportional".to_string(), |r| r.to_string()),
            top.as_ref() == Some(&c[0]),
            Provenance::Derived,
        ));
        let mixed = b.bracket2.scale(&c[1]).add(&b.bracket3.scale(&c[2]));
        let diff = dec.component(1).sub(&mixed);
        claims.push(ReportRecord::verdict(
            "green.psi4.layer_h2",
            "0",
            if diff.is_zero() {
                "0".to_string()
            } else {
                format!("{} stray terms", diff.num_terms())
            },
            diff.is_zero(),
            Provenance::Derived,
        ));
        let tail = &w.norm_sq() * &c[3];
        let h0 = dec.component(2).coeff(&vec![0u8; n]);
        claims.push(ReportRecord::verdict(
            "green.psi4.layer_h0",
            tail.to_string(),
            h0.to_string(),
            tail == h0,
            Provenance::Derived,
        ));
        // ratios against the published coefficient display: a global sign
        // on the first three, and two extra near-kernel factors on the tail
        let ratios = psi4_reference_ratios();
        for (i, r) in ratios.iter().enumerate().take(3) {
            let val = dim_eval(r, n as i64).unwrap();
            claims.push(ReportRecord::verdict(
                format!("green.psi4.ratio_vs_published[{}]", i + 1),
                "-1",
                val.to_string(),
                val == ratio(-1, 1),
                Provenance::Paper,
            ));
        }
        let r4 = dim_eval(&ratios[3], n as i64).unwrap();
        claims.push(ReportRecord::documented(
            "green.psi4.ratio_vs_published[4]",
            "-1",
            format!("{r4} (extra factor 1/((n-10)(n-8)))"),
            Provenance::Paper,
        ));
    } else if n == 10 {
        let lc = log_coefficient_n10(&w, &jet);
        claims.push(ReportRecord::verdict(
            "green.n10.log_unit_leading",
            "1/4320",
            lc.unit_leading.to_string(),
            lc.unit_leading == ratio(1, 4320),
            Provenance::Derived,
        ));
        claims.push(ReportRecord::documented(
            "green.n10.log_published",
            lc.reference.to_string(),
            lc.unit_leading.to_string(),
            Provenance::Paper,
        ));
        let rr = lc.reference_ratio();
        claims.push(ReportRecord::verdict(
            "green.n10.log_published_ratio",
            "1/4",
            rr.as_ref().map_or_else(|| "undefined".to_string(), |r| r.to_string()),
            rr == Some(ratio(1, 4)),
            Provenance::Derived,
        ));
        let c10 = 128.0 * std::f64::consts::PI.powi(5);
        claims.push(ReportRecord::verdict(
            "green.n10.delta_constant",
            f17(c10),
            f17(delta_constant(10)),
            rel_close(c10, delta_constant(10), 1e-12),
            Provenance::Derived,
        ));
        let scaled = crate::exact_arith::rational_to_f64(&lc.unit_leading) / delta_constant(10);
        claims.push(ReportRecord::verdict(
            "green.n10.log_delta_normalized",
            f17(scaled),
            f17(lc.delta_normalized),
            scaled == lc.delta_normalized,
            Provenance::Trivial,
        ));
        // the kernel layer must actually route through the log branch
        let series = build_source(10, &w, &jet).as_series();
        let res = expand(10, &series, zero_map, 4).map_err(|e| e.to_string())?;
        let first = res.log_coefficients.keys().next().map(|&(m, _)| m);
        claims.push(ReportRecord::verdict(
            "green.n10.first_log_degree",
            "4",
            first.map_or_else(|| "none".to_string(), |m| m.to_string()),
            first == Some(4),
            Provenance::Derived,
        ));
    } else {
        let series = build_source(n, &w, &jet).as_series();
        let res = expand(n, &series, zero_map, 6).map_err(|e| e.to_string())?;
        let clean = residual_vanishes_through(n, &series, &res.psi, zero_map, 6);
        claims.push(ReportRecord::verdict(
            "green.low.residual",
            "vanishes through degree 6",
            if clean { "vanishes through degree 6" } else { "nonzero residual" },
            clean,
            Provenance::Derived,
        ));
        if n == 8 {
            // the (n−8) kernel factor makes the degree-4 layer resonant; the
            // log enters at r²·log r, inside the published A + O(r) remainder
            let first = res.log_coefficients.keys().next().map(|&(m, _)| m);
            claims.push(ReportRecord::verdict(
                "green.n8.first_log_degree",
                "4",
                first.map_or_else(|| "none".to_string(), |m| m.to_string()),
                first == Some(4),
                Provenance::Derived,
            ));
            claims.push(ReportRecord::verdict(
                "green.n8.remainder_compatible",
                "no log below order r (profile c·r^-2 + A + O(r))",
                first.map_or_else(
                    || "no log at all".to_string(),
                    |m| format!("first log at order r^{}", m as i64 - 2),
                ),
                first.is_none_or(|m| (m as i64 - 2) >= 1),
                Provenance::Paper,
            ));
        } else {
            // n = 7, 9: the expansion is a pure polynomial series
            claims.push(ReportRecord::verdict(
                "green.polynomial.max_log_power",
                "0",
                res.psi.max_log_power().to_string(),
                res.psi.max_log_power() == 0,
                Provenance::Paper,
            ));
        }
    }
    Ok((claims, config))
}

fn run_expand(
    n: usize,
    max_order: u32,
    seed: u64,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    require_dim(n as i64, "expand")?;
    if max_order > 12 {
        return Err(format!("max order is capped at 12 (got {max_order})"));
    }
    let mut config = RunConfig::bare("expand", fmt);
    config.n = Some(n as i64);
    config.seed = Some(seed);
    let (w, jet) = curvature_data(n, seed);
    let series = build_source(n, &w, &jet).as_series();
    let res = expand(n, &series, zero_map, max_order).map_err(|e| e.to_string())?;
    let mut claims = Vec::new();
    let clean = residual_vanishes_through(n, &series, &res.psi, zero_map, max_order);
    claims.push(ReportRecord::verdict(
        "expand.residual",
        format!("no terms of degree <= {max_order}"),
        if clean {
            format!("no terms of degree <= {max_order}")
        } else {
            "nonzero residual".to_string()
        },
        clean,
        Provenance::Derived,
    ));
    // with the zero curvature map only the degree-4 source layer is solved,
    // so a log appears exactly when a degree-4 layer is resonant: the H₂
    // layer at n = 8 and the radial H₀ layer at n = 10
    let expect_log = if (n == 8 || n == 10) && max_order >= 4 {
        Some(4u32)
    } else {
        None
    };
    let first = res.log_coefficients.keys().next().map(|&(m, _)| m);
    claims.push(ReportRecord::verdict(
        "expand.first_log_degree",
        expect_log.map_or_else(|| "none".to_string(), |m| m.to_string()),
        first.map_or_else(|| "none".to_string(), |m| m.to_string()),
        first == expect_log,
        Provenance::Derived,
    ));
    Ok((claims, config))
}

fn run_bubble(
    n: i64,
    eps: f64,
    rho: f64,
    scan: bool,
    quad_points: Option<usize>,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    require_dim(n, "bubble")?;
    if !(eps > 0.0 && rho > 0.0) {
        return Err(format!("eps and rho must be positive (got {eps}, {rho})"));
    }
    if scan && n != 10 {
        return Err(format!(
            "--scan fits the ten-dimensional logarithmic divergence; use --n 10 (got {n})"
        ));
    }
    let points = quad_points.unwrap_or_else(default_quad_points);
    let mut config = RunConfig::bare("bubble", fmt);
    config.n = Some(n);
    config.eps = Some(eps);
    config.rho = Some(rho);
    config.quad_points = points;
    let mut claims = Vec::new();

    if scan {
        // geometric ε grid over three decades; the brace grows like
        // −(36/5)·ln ε with an ε²-small residual
        let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect();
        let fit = n10_log_divergence(rho, &grid, points);
        claims.push(ReportRecord::verdict(
            "bubble.n10.slope",
            f17(-36.0 / 5.0),
            f17(fit.slope),
            (fit.slope + 36.0 / 5.0).abs() <= 0.02,
            Provenance::Derived,
        ));
        claims.push(ReportRecord::verdict(
            "bubble.n10.slope_negative",
            "< 0",
            f17(fit.slope),
            fit.slope < 0.0,
            Provenance::Paper,
        ));
        claims.push(ReportRecord::verdict(
            "bubble.n10.fit_residual",
            "<= 1e-3",
            f17(fit.max_rel_residual),
            fit.max_rel_residual <= 1e-3,
            Provenance::Derived,
        ));
        for e in grid {
            let model = fit.slope * (-e.ln()) + fit.intercept;
            let measured = brace(10, rho / e, points);
            claims.push(ReportRecord::verdict(
                format!("bubble.n10.sweep[eps={e:.3e}]"),
                f17(model),
                f17(measured),
                rel_close(measured, model, 2e-3),
                Provenance::Derived,
            ));
        }
        return Ok((claims, config));
    }

    let mass = critical_mass(n, eps, points);
    claims.push(ReportRecord::verdict(
        "bubble.critical_mass",
        f17(omega_n(n)),
        f17(mass),
        rel_close(omega_n(n), mass, 1e-10),
        Provenance::Derived,
    ));
    let y6 = y6_sphere(n);
    let q = sobolev_quotient_at(n, eps, points);
    claims.push(ReportRecord::verdict(
        "bubble.sobolev_quotient",
        f17(y6),
        f17(q),
        rel_close(y6, q, 1e-8),
        Provenance::Derived,
    ));
    let q3 = sobolev_quotient_at(n, 3.0 * eps, points);
    claims.push(ReportRecord::verdict(
        "bubble.sobolev_scale_invariance",
        "<= 1e-9 relative",
        f17((q3 - q).abs() / y6),
        (q3 - q).abs() <= 1e-9 * y6,
        Provenance::Derived,
    ));

    if n >= 11 {
        let bracket = dim_eval(&limit_bracket(), n).map_err(|e| e.to_string())?;
        let from_betas = dim_eval(&limit_bracket_from_betas(), n).map_err(|e| e.to_string())?;
        claims.push(ReportRecord::verdict(
            "bubble.bracket_identity",
            bracket.to_string(),
            from_betas.to_string(),
            bracket == from_betas,
            Provenance::Derived,
        ));
        claims.push(ReportRecord::verdict(
            "bubble.bracket_negative",
            "< 0",
            bracket.to_string(),
            bracket < ratio(0, 1),
            Provenance::Paper,
        ));
        let params = BubbleParams::new(n, eps, rho, points);
        let a = coefficient_a(&params);
        let limit = coefficient_a_limit(n) * eps.powi(4);
        claims.push(ReportRecord::verdict(
            "bubble.coefficient_a",
            f17(limit),
            f17(a),
            rel_close(limit, a, 0.01),
            Provenance::Derived,
        ));
    }

    if n >= 10 {
        // remainder-integral scaling: ε⁴ at n = 10, ε⁵ log at 11, ε⁵ above
        let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(-3.0 - 0.5 * k as f64)).collect();
        let verdict = remainder_scaling(n, rho, &grid, points);
        let target = if n == 10 { 4.0 } else { 5.0 };
        let want_log = n == 11;
        let slope = if verdict.log_detected {
            verdict.corrected_slope
        } else {
            verdict.plain_slope
        };
        claims.push(ReportRecord::verdict(
            "bubble.remainder_exponent",
            format!("{target} (log factor: {want_log})"),
            format!("{} (log factor: {})", f17(slope), verdict.log_detected),
            (slope - target).abs() <= 0.1 && verdict.log_detected == want_log,
            Provenance::Derived,
        ));
    }
    Ok((claims, config))
}

fn run_mountain(
    n: &usize,
    f: &str,
    ell_max: usize,
    tol: f64,
    quad_points: Option<usize>,
    seed: u64,
    fmt: OutputFormat,
) -> Result<(Vec<ReportRecord>, RunConfig), String> {
    let n = *n;
    require_dim(n as i64, "mountain")?;
    if f != "const" {
        return Err(format!("only --f const is implemented (got {f:?})"));
    }
    if !(ell_max >= 1 && ell_max <= 32) {
        return Err(format!("ell_max must lie in 1..=32 (got {ell_max})"));
    }
    let nf = n as f64;
    let two_sharp = 2.0 * nf / (nf - 6.0);
    let needed = (two_sharp.ceil() as usize + 2) * ell_max / 2 + 2;
    let points = quad_points.unwrap_or_else(default_quad_points).max(needed);
    let mut config = RunConfig::bare("mountain", fmt);
    config.n = Some(n as i64);
    config.ell_max = Some(ell_max);
    config.tol = Some(tol);
    config.seed = Some(seed);
    config.quad_points = points;

    let galerkin = ZonalGalerkin::new(n, ell_max, points);
    let f_val = crate::exact_arith::rational_to_f64(&lambda_zero(n as i64));
    let density = Density::Constant(f_val);

    // start from the constant solution nudged along the even modes; the odd
    // first mode is left alone (at n = 10 it is exactly flat)
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u0 = galerkin.constant_function(1.0);
    let a0 = u0.coeffs[0];
    for ell in (2..=ell_max).step_by(2) {
        u0.coeffs[ell] += 0.01 * a0 * rng.gen_range(-1.0..1.0);
    }

    let mut claims = Vec::new();

    // finite-difference audit of the gradient at the perturbed start
    let g0 = galerkin.gradient(&density, &u0);
    let h = 1e-5;
    let mut max_rel: f64 = 0.0;
    for ell in 0..=ell_max {
        let mut up = u0.clone();
        up.coeffs[ell] += h;
        let mut dn = u0.clone();
        dn.coeffs[ell] -= h;
        let fd = (galerkin.energy(&density, &up) - galerkin.energy(&density, &dn)) / (2.0 * h);
        let rel = (fd - g0.coeffs[ell]).abs() / g0.coeffs[ell].abs().max(1.0);
        max_rel = max_rel.max(rel);
    }
    claims.push(ReportRecord::verdict(
        "mountain.fd_gradient",
        "<= 1e-6 relative",
        f17(max_rel),
        max_rel <= 1e-6,
        Provenance::Derived,
    ));

    let u = match galerkin.find_critical_point(&density, &u0, tol) {
        Ok(u) => u,
        Err(e) => {
            claims.push(ReportRecord::verdict(
                "mountain.newton_residual",
                format!("<= {tol:e} x scale"),
                e.to_string(),
                false,
                Provenance::Derived,
            ));
            return Ok((claims, config));
        }
    };
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
    claims.push(ReportRecord::verdict(
        "mountain.newton_residual",
        f17(tol * scale),
        f17(gnorm),
        gnorm <= tol * scale,
        Provenance::Derived,
    ));

    // with f ≡ λ₀ the solved profile is the constant one
    let dev = galerkin
        .values_at_nodes(&u)
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    claims.push(ReportRecord::verdict(
        "mountain.constant_profile",
        "<= 1e-4 deviation from 1",
        f17(dev),
        dev <= 1e-4,
        Provenance::Derived,
    ));

    let level = galerkin.mountain_pass_level(&density, &u);
    let closed = 3.0 / nf * y6_sphere(n as i64).powf(nf / 6.0) * f_val.powf((6.0 - nf) / 6.0);
    claims.push(ReportRecord::verdict(
        "mountain.level",
        f17(closed),
        f17(level),
        rel_close(closed, level, 1e-8),
        Provenance::Derived,
    ));
    Ok((claims, config))
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let rendered = match cli.format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            };
            if let Some(path) = &cli.output {
                if let Err(err) = std::fs::write(path, &rendered) {
                    eprintln!("gjms6: cannot write {}: {err}", path.display());
                    return 2;
                }
            } else {
                print!("{rendered}");
            }
            report.exit_code()
        }
        Err(msg) => {
            eprintln!("gjms6: {msg}");
            2
        }
    }
}
