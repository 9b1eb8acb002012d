//! Python bindings. Exact rationals cross the boundary as "p/q" strings;
//! everything numeric is a plain float. Dimension arguments are validated
//! here so library asserts never unwind across the FFI.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gjms6::bubble_quadrature as bubble;
use gjms6::exact_arith::{dim_eval, rational_to_f64};
use gjms6::green_expansion as green;
use gjms6::sphere_spectral as sphere;
use gjms6::tensor_weyl::{SchoutenJet, WeylTensor};

fn check_dim(n: i64) -> PyResult<()> {
    if n < 7 {
        Err(PyValueError::new_err(format!(
            "dimension must be at least 7; the operator degenerates at n = 6 (got {n})"
        )))
    } else {
        Ok(())
    }
}

/// Q-curvature of the round n-sphere, exact.
#[pyfunction]
fn q_curvature(n: i64) -> PyResult<String> {
    check_dim(n)?;
    Ok(dim_eval(&sphere::q_sphere(), n)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .to_string())
}

/// Constant eigenvalue λ₀ = (n−6)/2 · Q, exact.
#[pyfunction]
fn lambda_zero(n: i64) -> PyResult<String> {
    check_dim(n)?;
    Ok(sphere::lambda_zero(n).to_string())
}

/// [(eigenvalue, multiplicity)] for ℓ = 0..=ell_max on the round sphere.
#[pyfunction]
fn sphere_spectrum(n: i64, ell_max: u32) -> PyResult<Vec<(String, u128)>> {
    check_dim(n)?;
    if ell_max > 64 {
        return Err(PyValueError::new_err("ell_max is capped at 64"));
    }
    let s = sphere::sphere_spectrum(n, ell_max);
    Ok(s.eigenvalues
        .iter()
        .zip(&s.multiplicities)
        .map(|(l, &m)| (l.to_string(), m))
        .collect())
}

/// Dimension of the space of degree-ℓ spherical harmonics on Sⁿ.
#[pyfunction]
fn harmonic_multiplicity(n: u64, ell: u64) -> PyResult<u128> {
    check_dim(n as i64)?;
    Ok(sphere::harmonic_multiplicity(n, ell))
}

/// Area of the unit n-sphere.
#[pyfunction]
fn omega_n(n: i64) -> PyResult<f64> {
    if n < 1 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(sphere::omega_n(n))
}

/// Sharp constant Y₆(Sⁿ) = λ₀ · ω_n^{6/n}.
#[pyfunction]
fn y6_sphere(n: i64) -> PyResult<f64> {
    check_dim(n)?;
    Ok(sphere::y6_sphere(n))
}

/// Checks the three-factor Einstein product against the published display;
/// raises ValueError on any coefficient mismatch.
#[pyfunction]
fn verify_factorization() -> PyResult<()> {
    sphere::verify_factorization().map_err(|m| {
        PyValueError::new_err(format!(
            "{} coefficient differs: display {} vs product {}",
            m.slot, m.display, m.product
        ))
    })
}

/// The bracket rational from the A-coefficient limit, exact.
#[pyfunction]
fn bracket_value(n: i64) -> PyResult<String> {
    if n <= 3 {
        return Err(PyValueError::new_err("the bracket has a pole at n = 3"));
    }
    Ok(dim_eval(&bubble::limit_bracket(), n)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .to_string())
}

/// Ratios of the published ψ₄ coefficients to the solver closed forms.
#[pyfunction]
fn psi4_ratios(n: i64) -> PyResult<Vec<String>> {
    if n < 11 {
        return Err(PyValueError::new_err(
            "the degree-4 layer is resonant for n ≤ 10",
        ));
    }
    green::psi4_reference_ratios()
        .iter()
        .map(|r| {
            dim_eval(r, n)
                .map(|v| v.to_string())
                .map_err(|e| PyValueError::new_err(e.to_string()))
        })
        .collect()
}

/// Concentrated-profile quotient; equals Y₆(Sⁿ) for every ε.
#[pyfunction]
#[pyo3(signature = (n, eps = 1.0, points = 32))]
fn sobolev_quotient(n: i64, eps: f64, points: usize) -> PyResult<f64> {
    check_dim(n)?;
    if eps <= 0.0 {
        return Err(PyValueError::new_err("eps must be positive"));
    }
    Ok(bubble::sobolev_quotient_at(n, eps, points))
}

/// ∫ u^{2♯}: the sphere volume, by the stereographic identity.
#[pyfunction]
#[pyo3(signature = (n, eps = 1.0, points = 32))]
fn critical_mass(n: i64, eps: f64, points: usize) -> PyResult<f64> {
    check_dim(n)?;
    if eps <= 0.0 {
        return Err(PyValueError::new_err("eps must be positive"));
    }
    Ok(bubble::critical_mass(n, eps, points))
}

/// The cut-off correction coefficient A for ε ≪ ρ.
#[pyfunction]
#[pyo3(signature = (n, eps, rho, points = 32))]
fn coefficient_a(n: i64, eps: f64, rho: f64, points: usize) -> PyResult<f64> {
    if n < 10 {
        return Err(PyValueError::new_err("defined for n ≥ 10"));
    }
    if !(eps > 0.0 && rho > 0.0) {
        return Err(PyValueError::new_err("eps and rho must be positive"));
    }
    let params = bubble::BubbleParams::new(n, eps, rho, points);
    Ok(bubble::coefficient_a(&params))
}

/// ε→0 limit of coefficient_a / ε⁴ via the Beta closed form; n ≥ 11.
#[pyfunction]
fn coefficient_a_limit(n: i64) -> PyResult<f64> {
    if n < 11 {
        return Err(PyValueError::new_err(
            "the limit integral converges only for n ≥ 11",
        ));
    }
    Ok(bubble::coefficient_a_limit(n))
}

/// Linear fit of the n = 10 brace against |log ε|:
/// (slope, intercept, max relative residual).
#[pyfunction]
#[pyo3(signature = (rho = 0.5, points = 32))]
fn n10_log_fit(rho: f64, points: usize) -> PyResult<(f64, f64, f64)> {
    if rho <= 0.0 {
        return Err(PyValueError::new_err("rho must be positive"));
    }
    let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect();
    let fit = bubble::n10_log_divergence(rho, &grid, points);
    Ok((fit.slope, fit.intercept, fit.max_rel_residual))
}

/// The n = 10 log-r coefficient for a random curvature sample:
/// (unit-leading "p/q", δ-normalized float, published "p/q").
#[pyfunction]
#[pyo3(signature = (seed = 7))]
fn log_coefficient_n10(seed: u64) -> PyResult<(String, f64, String)> {
    let w = WeylTensor::random(10, seed);
    let jet = SchoutenJet::random(10, seed.wrapping_add(99), w.norm_sq());
    let lc = green::log_coefficient_n10(&w, &jet);
    Ok((
        lc.unit_leading.to_string(),
        lc.delta_normalized,
        lc.reference.to_string(),
    ))
}

/// Zonal Galerkin solver on Sⁿ with the constant density f ≡ λ₀, so the
/// constant function is the known critical point.
#[pyclass]
struct GalerkinSolver {
    inner: sphere::ZonalGalerkin,
    density: sphere::Density,
    f_val: f64,
    n: usize,
}

#[pymethods]
impl GalerkinSolver {
    #[new]
    #[pyo3(signature = (n, ell_max, quad_points = None))]
    fn new(n: usize, ell_max: usize, quad_points: Option<usize>) -> PyResult<Self> {
        check_dim(n as i64)?;
        if !(1..=32).contains(&ell_max) {
            return Err(PyValueError::new_err("ell_max must lie in 1..=32"));
        }
        let two_sharp = 2.0 * n as f64 / (n as f64 - 6.0);
        let needed = (two_sharp.ceil() as usize + 2) * ell_max / 2 + 2;
        let points = quad_points.unwrap_or(32).max(needed);
        let inner = sphere::ZonalGalerkin::new(n, ell_max, points);
        let f_val = rational_to_f64(&sphere::lambda_zero(n as i64));
        Ok(GalerkinSolver {
            inner,
            density: sphere::Density::Constant(f_val),
            f_val,
            n,
        })
    }

    /// Newton from a 1% even-mode perturbation of the constant solution.
    /// Returns (residual, residual_bound, level, closed_level).
    #[pyo3(signature = (tol = 1e-10))]
    fn solve(&self, tol: f64) -> PyResult<(f64, f64, f64, f64)> {
        let mut u0 = self.inner.constant_function(1.0);
        let a0 = u0.coeffs[0];
        u0.coeffs[0] += 0.01 * a0;
        if u0.coeffs.len() > 2 {
            u0.coeffs[2] -= 0.01 * a0;
        }
        if u0.coeffs.len() > 4 {
            u0.coeffs[4] += 0.005 * a0;
        }
        let u = self
            .inner
            .find_critical_point(&self.density, &u0, tol)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let g = self.inner.gradient(&self.density, &u);
        let residual = g.coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = u
            .coeffs
            .iter()
            .enumerate()
            .map(|(ell, a)| {
                let la = self.inner.eigenvalue(ell) * a;
                la * la
            })
            .sum::<f64>()
            .sqrt()
            .max(1.0);
        let level = self.inner.mountain_pass_level(&self.density, &u);
        let nf = self.n as f64;
        let closed = 3.0 / nf
            * sphere::y6_sphere(self.n as i64).powf(nf / 6.0)
            * self.f_val.powf((6.0 - nf) / 6.0);
        Ok((residual, tol * scale, level, closed))
    }

    /// Eigenvalue λ_ℓ of the basis mode.
    fn eigenvalue(&self, ell: usize) -> PyResult<f64> {
        if ell >= self.inner.dim() {
            return Err(PyValueError::new_err("mode index out of range"));
        }
        Ok(self.inner.eigenvalue(ell))
    }
}

#[pymodule]
fn gjms6_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(q_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_zero, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(omega_n, m)?)?;
    m.add_function(wrap_pyfunction!(y6_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(verify_factorization, m)?)?;
    m.add_function(wrap_pyfunction!(bracket_value, m)?)?;
    m.add_function(wrap_pyfunction!(psi4_ratios, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(critical_mass, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_a, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_a_limit, m)?)?;
    m.add_function(wrap_pyfunction!(n10_log_fit, m)?)?;
    m.add_function(wrap_pyfunction!(log_coefficient_n10, m)?)?;
    m.add_class::<GalerkinSolver>()?;
    Ok(())
}
