//! Einstein and round-sphere specializations: the constant-coefficient
//! cubic for the operator, its exact factorization, the sphere spectrum,
//! the sharp constant Y₆(Sⁿ), and a zonal Galerkin solver for the
//! critical-exponent equation P u = f u^{(n+6)/(n−6)}.

use nalgebra::{DMatrix, DVector};

use crate::exact_arith::{
    dim_poly, gamma_half, n_plus, rat, rational_to_f64, DimRational, Rational,
};

// ---------------------------------------------------------------------------
// exact operator coefficients and factorization
// ---------------------------------------------------------------------------

/// Constant-coefficient cubic −P = Δ³ + aΔ² + bΔ + c on an Einstein
/// manifold, with the scalar-curvature powers factored out: a per R,
/// b per R², c per R³.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EinsteinOperator {
    pub quad_coeff: DimRational,
    pub lin_coeff: DimRational,
    pub const_coeff: DimRational,
}

/// Q-curvature of an Einstein metric per R³: (n⁴−20n²+64)/(32n²(n−1)³).
pub fn q_einstein() -> DimRational {
    dim_poly(&[64, 0, -20, 0, 1])
        / (DimRational::from_int(32) * DimRational::nvar().pow(2) * n_plus(-1).pow(3))
}

/// Q-curvature of the round sphere (R = n(n−1)): n(n⁴−20n²+64)/32.
pub fn q_sphere() -> DimRational {
    DimRational::nvar() * dim_poly(&[64, 0, -20, 0, 1]) / DimRational::from_int(32)
}

/// The three factor shifts of the sphere factorization
/// ∏ᵢ(−Δ + cᵢ): (n−6)(n+4)/4, (n−4)(n+2)/4, n(n−2)/4.
pub fn factor_constants() -> [DimRational; 3] {
    let quarter = |p: DimRational| p / DimRational::from_int(4);
    [
        quarter(n_plus(-6) * n_plus(4)),
        quarter(n_plus(-4) * n_plus(2)),
        quarter(DimRational::nvar() * n_plus(-2)),
    ]
}

/// Factor shifts per unit R from the general order-2k product at k = 3:
/// (n+2i−2)(n−2i)/(4n(n−1)) for i = 3, 2, 1.
pub fn factor_constants_general() -> [DimRational; 3] {
    let shift = |i: i64| {
        n_plus(2 * i - 2) * n_plus(-2 * i)
            / (DimRational::from_int(4) * DimRational::nvar() * n_plus(-1))
    };
    [shift(3), shift(2), shift(1)]
}

impl EinsteinOperator {
    /// The published constant-coefficient display.
    pub fn standard() -> Self {
        EinsteinOperator {
            quad_coeff: dim_poly(&[32, 6, -3])
                / (DimRational::from_int(4) * DimRational::nvar() * n_plus(-1)),
            lin_coeff: dim_poly(&[192, 128, -52, -12, 3])
                / (DimRational::from_int(16) * DimRational::nvar().pow(2) * n_plus(-1).pow(2)),
            const_coeff: -(n_plus(-6) * q_einstein()) / DimRational::from_int(2),
        }
    }

    /// Expands P = ∏(−Δ + tᵢR) into the cubic via the elementary
    /// symmetric functions: a = −e₁, b = e₂, c = −e₃.
    pub fn from_factors(t: &[DimRational; 3]) -> Self {
        let e1 = &t[0] + &t[1] + &t[2];
        let e2 = &t[0] * &t[1] + &t[0] * &t[2] + &t[1] * &t[2];
        let e3 = &t[0] * &t[1] * &t[2];
        EinsteinOperator {
            quad_coeff: -e1,
            lin_coeff: e2,
            const_coeff: -e3,
        }
    }

    /// Operator eigenvalue on the sphere (R = n(n−1)) at −Δ-eigenvalue t:
    /// t³ − aRt² + bR²t − cR³.
    pub fn sphere_eigenvalue(&self, n: i64, t: &Rational) -> Rational {
        let r = rat(n * (n - 1));
        let a = self.quad_coeff.eval(n).expect("no pole for n ≥ 2");
        let b = self.lin_coeff.eval(n).expect("no pole for n ≥ 2");
        let c = self.const_coeff.eval(n).expect("no pole for n ≥ 2");
        t * t * t - a * &r * t * t + b * &r * &r * t - c * &r * &r * &r
    }
}

/// One coefficient slot of the cubic failing to match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMismatch {
    pub slot: &'static str,
    pub display: DimRational,
    pub product: DimRational,
}

/// Expands the given factor shifts (per unit R) and compares all three
/// non-leading cubic coefficients against the published display, as exact
/// rational functions of n.
pub fn verify_factorization_with(factors: &[DimRational; 3]) -> Result<(), FactorMismatch> {
    let display = EinsteinOperator::standard();
    let product = EinsteinOperator::from_factors(factors);
    for (slot, d, p) in [
        ("delta^2", &display.quad_coeff, &product.quad_coeff),
        ("delta^1", &display.lin_coeff, &product.lin_coeff),
        ("delta^0", &display.const_coeff, &product.const_coeff),
    ] {
        if d != p {
            return Err(FactorMismatch {
                slot,
                display: d.clone(),
                product: p.clone(),
            });
        }
    }
    Ok(())
}

/// Checks the sphere factorization and the general-product route at k = 3.
pub fn verify_factorization() -> Result<(), FactorMismatch> {
    verify_factorization_with(&factor_constants_general())?;
    // sphere shifts are the same factors multiplied by R = n(n−1)
    let general = factor_constants_general();
    let r = DimRational::nvar() * n_plus(-1);
    let sphere = factor_constants();
    for (g, s) in general.iter().zip(sphere.iter()) {
        if &(g * &r) != s {
            return Err(FactorMismatch {
                slot: "sphere shift",
                display: s.clone(),
                product: g * &r,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sphere spectrum
// ---------------------------------------------------------------------------

/// Exact sphere spectrum λ_ℓ = ∏ᵢ(ℓ(ℓ+n−1) + cᵢ) with multiplicities.
#[derive(Debug, Clone)]
pub struct SphereSpectrum {
    pub n: i64,
    pub eigenvalues: Vec<Rational>,
    pub multiplicities: Vec<u128>,
    pub factor_constants: [Rational; 3],
}

fn binomial_u128(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the degree-ℓ spherical-harmonic space on Sⁿ.
pub fn harmonic_multiplicity(n: u64, ell: u64) -> u128 {
    match ell {
        0 => 1,
        1 => (n + 1) as u128,
        _ => binomial_u128(n + ell, ell) - binomial_u128(n + ell - 2, ell - 2),
    }
}

pub fn sphere_spectrum(n: i64, ell_max: u32) -> SphereSpectrum {
    assert!(n >= 7, "positivity regime starts at n = 7");
    let consts = factor_constants();
    let c: Vec<Rational> = consts
        .iter()
        .map(|d| d.eval(n).expect("no pole for n ≥ 7"))
        .collect();
    let eigenvalues = (0..=ell_max)
        .map(|ell| {
            let t = rat(ell as i64 * (ell as i64 + n - 1));
            (&t + &c[0]) * (&t + &c[1]) * (&t + &c[2])
        })
        .collect();
    let multiplicities = (0..=ell_max)
        .map(|ell| harmonic_multiplicity(n as u64, ell as u64))
        .collect();
    SphereSpectrum {
        n,
        eigenvalues,
        multiplicities,
        factor_constants: [c[0].clone(), c[1].clone(), c[2].clone()],
    }
}

// ---------------------------------------------------------------------------
// sphere volume and the sharp constant
// ---------------------------------------------------------------------------

/// Volume of the unit n-sphere, 2π^{(n+1)/2}/Γ((n+1)/2), with the Gamma
/// factor evaluated from its exact half-integer closed form.
pub fn omega_n(n: i64) -> f64 {
    assert!(n >= 1);
    2.0 * std::f64::consts::PI.powf((n as f64 + 1.0) / 2.0) / gamma_half(n + 1)
}

/// λ₀ = c₁c₂c₃ = (n−6)/2 · Q_{Sⁿ}, exact.
pub fn lambda_zero(n: i64) -> Rational {
    let [c1, c2, c3] = factor_constants();
    (c1 * c2 * c3).eval(n).expect("no pole for n ≥ 7")
}

/// Sharp sixth-order Sobolev constant of the round sphere,
/// Y₆(Sⁿ) = (n−6)/2 · Q_{Sⁿ} · ω_n^{6/n}.
pub fn y6_sphere(n: i64) -> f64 {
    assert!(n >= 7);
    rational_to_f64(&lambda_zero(n)) * omega_n(n).powf(6.0 / n as f64)
}

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence. Deterministic; exact for polynomials of degree
/// ≤ 2·points − 1.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(points >= 1);
    let mut nodes = vec![0.0; points];
    let mut weights = vec![0.0; points];
    let np = points as f64;
    for k in 0..points {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (np + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_points(x) and derivative by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=points {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = np * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // ascending order, symmetric pairs adjacent in the sum
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Compensated (Kahan) summation over a deterministic index order.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

// ---------------------------------------------------------------------------
// zonal Galerkin discretization
// ---------------------------------------------------------------------------

/// Coefficients in the L²-orthonormal zonal harmonic basis e₀..e_L.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalFunction {
    pub coeffs: Vec<f64>,
}

impl ZonalFunction {
    pub fn ell_max(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Right-hand density f: constant or zonal.
#[derive(Debug, Clone)]
pub enum Density {
    Constant(f64),
    Zonal(ZonalFunction),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("Hessian factorization failed")]
    SingularHessian,
    #[error("no convergence after {iterations} iterations; residual {residual}")]
    NoConvergence { iterations: usize, residual: String },
}

/// Zonal Galerkin context on Sⁿ: spectrum, orthonormal Gegenbauer basis
/// sampled at Gauss–Legendre nodes, and sphere-measure quadrature weights.
pub struct ZonalGalerkin {
    n: usize,
    ell_max: usize,
    lambda: Vec<f64>,
    /// full sphere-measure weights ω_{n−1}·w_q·(1−t_q²)^{(n−2)/2}
    weights: Vec<f64>,
    nodes: Vec<f64>,
    /// basis[ℓ][q] = e_ℓ(t_q)
    basis: Vec<Vec<f64>>,
    two_sharp: f64,
}

impl ZonalGalerkin {
    pub fn new(n: usize, ell_max: usize, quad_points: usize) -> Self {
        assert!(n >= 7, "critical exponent requires n ≥ 7");
        // guard: the quadrature must integrate products of basis modes and
        // the (integer part of the) nonlinearity without aliasing
        let two_sharp = 2.0 * n as f64 / (n as f64 - 6.0);
        let needed = (two_sharp.ceil() as usize + 2) * ell_max / 2 + 2;
        assert!(
            quad_points >= needed,
            "quadrature under-resolved: {quad_points} points for ell_max {ell_max}"
        );
        let spectrum = sphere_spectrum(n as i64, ell_max as u32);
        let lambda = spectrum
            .eigenvalues
            .iter()
            .map(rational_to_f64)
            .collect::<Vec<_>>();
        let (nodes, gl_weights) = gauss_legendre(quad_points);
        let area_factor = omega_n(n as i64 - 1);
        let weights: Vec<f64> = nodes
            .iter()
            .zip(&gl_weights)
            .map(|(&t, &w)| area_factor * w * (1.0 - t * t).powf((n as f64 - 2.0) / 2.0))
            .collect();
        let basis = zonal_basis_at(n, ell_max, &nodes);
        ZonalGalerkin {
            n,
            ell_max,
            lambda,
            weights,
            nodes,
            basis,
            two_sharp,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn eigenvalue(&self, ell: usize) -> f64 {
        self.lambda[ell]
    }

    pub fn two_sharp(&self) -> f64 {
        self.two_sharp
    }

    /// The constant function with the given pointwise value.
    pub fn constant_function(&self, value: f64) -> ZonalFunction {
        let mut coeffs = vec![0.0; self.ell_max + 1];
        // e₀ = ω_n^{−1/2}
        coeffs[0] = value * omega_n(self.n as i64).sqrt();
        ZonalFunction { coeffs }
    }

    /// Pointwise values of u at the quadrature nodes.
    pub fn values_at_nodes(&self, u: &ZonalFunction) -> Vec<f64> {
        assert_eq!(u.coeffs.len(), self.ell_max + 1);
        (0..self.nodes.len())
            .map(|q| {
                kahan_sum(
                    u.coeffs
                        .iter()
                        .enumerate()
                        .map(|(l, &a)| a * self.basis[l][q]),
                )
            })
            .collect()
    }

    fn density_at_nodes(&self, f: &Density) -> Vec<f64> {
        match f {
            Density::Constant(c) => vec![*c; self.nodes.len()],
            Density::Zonal(z) => self.values_at_nodes(z),
        }
    }

    /// ∫_{Sⁿ} F dμ for node-sampled values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        kahan_sum(values.iter().zip(&self.weights).map(|(&v, &w)| v * w))
    }

    /// ½Σλ_ℓa_ℓ² − (1/2♯)∫f|u|^{2♯}.
    pub fn energy(&self, f: &Density, u: &ZonalFunction) -> f64 {
        let quad = 0.5
            * kahan_sum(
                self.lambda
                    .iter()
                    .zip(&u.coeffs)
                    .map(|(&l, &a)| l * a * a),
            );
        let uvals = self.values_at_nodes(u);
        let fvals = self.density_at_nodes(f);
        let nl: Vec<f64> = uvals
            .iter()
            .zip(&fvals)
            .map(|(&uv, &fv)| fv * uv.abs().powf(self.two_sharp))
            .collect();
        quad - self.integrate(&nl) / self.two_sharp
    }

    /// Quadratic part by the diagonal spectral sum, ∫uPu = Σλ_ℓa_ℓ².
    pub fn quadratic_energy_spectral(&self, u: &ZonalFunction) -> f64 {
        kahan_sum(
            self.lambda
                .iter()
                .zip(&u.coeffs)
                .map(|(&l, &a)| l * a * a),
        )
    }

    /// Quadratic part by quadrature of u·(Pu) pointwise; independent route
    /// through the basis tables.
    pub fn quadratic_energy_quadrature(&self, u: &ZonalFunction) -> f64 {
        let pu = ZonalFunction {
            coeffs: u
                .coeffs
                .iter()
                .zip(&self.lambda)
                .map(|(&a, &l)| a * l)
                .collect(),
        };
        let uv = self.values_at_nodes(u);
        let pv = self.values_at_nodes(&pu);
        let prod: Vec<f64> = uv.iter().zip(&pv).map(|(&x, &y)| x * y).collect();
        self.integrate(&prod)
    }

    /// ∇E: g_ℓ = λ_ℓa_ℓ − ∫f|u|^{2♯−2}u·e_ℓ.
    pub fn gradient(&self, f: &Density, u: &ZonalFunction) -> ZonalFunction {
        let uvals = self.values_at_nodes(u);
        let fvals = self.density_at_nodes(f);
        let force: Vec<f64> = uvals
            .iter()
            .zip(&fvals)
            .map(|(&uv, &fv)| fv * uv.abs().powf(self.two_sharp - 2.0) * uv)
            .collect();
        let coeffs = (0..=self.ell_max)
            .map(|l| {
                let proj = kahan_sum(
                    force
                        .iter()
                        .zip(&self.basis[l])
                        .zip(&self.weights)
                        .map(|((&fo, &e), &w)| w * fo * e),
                );
                self.lambda[l] * u.coeffs[l] - proj
            })
            .collect();
        ZonalFunction { coeffs }
    }

    /// ∇²E: λ_ℓδ_{ℓm} − (2♯−1)∫f|u|^{2♯−2}e_ℓe_m.
    pub fn hessian(&self, f: &Density, u: &ZonalFunction) -> DMatrix<f64> {
        let uvals = self.values_at_nodes(u);
        let fvals = self.density_at_nodes(f);
        let factor: Vec<f64> = uvals
            .iter()
            .zip(&fvals)
            .zip(&self.weights)
            .map(|((&uv, &fv), &w)| w * fv * uv.abs().powf(self.two_sharp - 2.0))
            .collect();
        let k = self.ell_max + 1;
        let mut h = DMatrix::zeros(k, k);
        for l in 0..k {
            for m in l..k {
                let v = kahan_sum(
                    factor
                        .iter()
                        .zip(&self.basis[l])
                        .zip(&self.basis[m])
                        .map(|((&fa, &el), &em)| fa * el * em),
                );
                let entry = -(self.two_sharp - 1.0) * v;
                h[(l, m)] = entry;
                h[(m, l)] = entry;
            }
            h[(l, l)] += self.lambda[l];
        }
        h
    }

    fn residual_scale(&self, u: &ZonalFunction) -> f64 {
        let quad: f64 = self
            .lambda
            .iter()
            .zip(&u.coeffs)
            .map(|(&l, &a)| (l * a) * (l * a))
            .sum::<f64>()
            .sqrt();
        quad.max(1.0)
    }

    /// Damped Newton iteration on ∇E = 0, converging when the gradient
    /// norm drops below tol relative to the linear-term scale.
    pub fn find_critical_point(
        &self,
        f: &Density,
        u0: &ZonalFunction,
        tol: f64,
    ) -> Result<ZonalFunction, SolveError> {
        let mut u = u0.clone();
        let max_iter = 100;
        for _ in 0..max_iter {
            let g = self.gradient(f, &u);
            let gnorm = norm(&g.coeffs);
            if gnorm <= tol * self.residual_scale(&u) {
                return Ok(u);
            }
            let h = self.hessian(f, &u);
            let rhs = DVector::from_iterator(g.coeffs.len(), g.coeffs.iter().map(|&v| -v));
            let lu = h.lu();
            let step = lu.solve(&rhs).ok_or(SolveError::SingularHessian)?;
            let mut s = 1.0;
            loop {
                let trial = ZonalFunction {
                    coeffs: u
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| a + s * step[i])
                        .collect(),
                };
                let tnorm = norm(&self.gradient(f, &trial).coeffs);
                if tnorm < gnorm || s < 1e-8 {
                    u = trial;
                    break;
                }
                s *= 0.5;
            }
        }
        let g = self.gradient(f, &u);
        Err(SolveError::NoConvergence {
            iterations: max_iter,
            residual: format!("{:e}", norm(&g.coeffs)),
        })
    }

    /// ∫φPφ / ‖f^{1/2♯}φ‖²_{2♯}, the one-dimensional mountain-pass
    /// quotient of the path γ(t) = tφ/‖f^{1/2♯}φ‖_{2♯}.
    pub fn path_quotient(&self, f: &Density, phi: &ZonalFunction) -> f64 {
        let num = self.quadratic_energy_spectral(phi);
        let pv = self.values_at_nodes(phi);
        let fv = self.density_at_nodes(f);
        let p2s: Vec<f64> = pv
            .iter()
            .zip(&fv)
            .map(|(&v, &fval)| fval * v.abs().powf(self.two_sharp))
            .collect();
        let den = self.integrate(&p2s).powf(2.0 / self.two_sharp);
        num / den
    }

    /// Mountain-pass level (3/n)·quotient^{n/6}; the supremum of
    /// ½t²q − t^{2♯}/2♯ over t ≥ 0.
    pub fn mountain_pass_level(&self, f: &Density, phi: &ZonalFunction) -> f64 {
        let q = self.path_quotient(f, phi);
        3.0 / self.n as f64 * q.powf(self.n as f64 / 6.0)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// Orthonormal zonal harmonics e_ℓ(t) = C_ℓ^{(n−1)/2}(t)/√(ω_{n−1}h_ℓ)
/// sampled at the given nodes, where h_ℓ is the Gegenbauer L²([−1,1],
/// (1−t²)^{(n−2)/2}) norm.
fn zonal_basis_at(n: usize, ell_max: usize, nodes: &[f64]) -> Vec<Vec<f64>> {
    let lam = (n as f64 - 1.0) / 2.0;
    let area_factor = omega_n(n as i64 - 1);
    // h_ℓ = π·2^{2−n}·Γ(ℓ+n−1)/(ℓ!·(ℓ+(n−1)/2)·Γ((n−1)/2)²)
    let gamma_lam_sq = gamma_half(n as i64 - 1).powi(2);
    let mut norms = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let num = crate::exact_arith::factorial_big((ell + n - 2) as u64);
        let den = crate::exact_arith::factorial_big(ell as u64);
        let ratio = rational_to_f64(&Rational::new(num, den));
        let h = std::f64::consts::PI * 2f64.powi(2 - n as i32) * ratio
            / ((ell as f64 + lam) * gamma_lam_sq);
        norms.push((area_factor * h).sqrt());
    }
    let mut basis = vec![vec![0.0; nodes.len()]; ell_max + 1];
    for (q, &t) in nodes.iter().enumerate() {
        let mut c_prev = 1.0;
        let mut c_cur = 2.0 * lam * t;
        for ell in 0..=ell_max {
            let c = match ell {
                0 => 1.0,
                1 => c_cur,
                _ => {
                    let lf = ell as f64;
                    let c_next =
                        (2.0 * t * (lf - 1.0 + lam) * c_cur - (lf - 2.0 + 2.0 * lam) * c_prev)
                            / lf;
                    c_prev = c_cur;
                    c_cur = c_next;
                    c_next
                }
            };
            basis[ell][q] = c / norms[ell];
        }
    }
    basis
}
