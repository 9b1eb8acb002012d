//! The radial shift-operator calculus: A_α = r²Δ₀ + 2α·r∂_r + α(α+n−2)
//! and its α-derivative B_α = 2r∂_r + 2α + n − 2.
//!
//! On the layer r^{2i}ℋ_{m−2i} of a degree-m polynomial, A_α acts as the
//! scalar (α+2i)(2m−2i+α+n−2) and B_α as the scalar 2m+2α+n−2, so triple
//! compositions applied to φ·log^k r reduce to falling-factorial
//! bookkeeping per layer. Inverting the triple generates a log term on
//! each kernel layer, with the B-combination scalar as divisor.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact_arith::{n_plus, rat, DimRational, Rational};
use crate::polyspace::HomogeneousPoly;

/// Log powers above this are a bookkeeping bug, not mathematics.
pub const MAX_LOG_POWER: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RadialError {
    /// A kernel layer whose B-combination scalar also vanishes cannot be
    /// inverted by a single log term. Does not occur for n ≥ 7.
    #[error("triple and B-combination both vanish on layer i = {layer} at degree {degree}")]
    UnsupportedDegeneracy { degree: u32, layer: u32 },
}

/// The shift operator A_α with a dimension-parametric parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialOperator {
    pub alpha: DimRational,
}

impl RadialOperator {
    pub fn new(alpha: DimRational) -> Self {
        RadialOperator { alpha }
    }

    /// Symbolic action on a homogeneous polynomial in dimension n:
    /// A_α p = r²Δ₀p + (2αm + α(α+n−2))p, using r∂_r p = m·p.
    pub fn apply(&self, p: &HomogeneousPoly, n: i64) -> HomogeneousPoly {
        assert_eq!(p.dim() as i64, n, "operator dimension must match polynomial");
        let a = self.alpha.eval(n).expect("operator parameter has a pole");
        apply_shift(&a, p, n)
    }

    pub fn eigen_a(&self, m: u32, i: u32, n: i64) -> Rational {
        eigen_a(&self.alpha.eval(n).expect("pole"), m, i, n)
    }

    pub fn eigen_b(&self, m: u32, n: i64) -> Rational {
        eigen_b(&self.alpha.eval(n).expect("pole"), m, n)
    }
}

fn apply_shift(alpha: &Rational, p: &HomogeneousPoly, n: i64) -> HomogeneousPoly {
    let m = p.degree() as i64;
    let scalar = alpha * rat(2 * m) + alpha * (alpha + rat(n - 2));
    let mut out = p.scale(&scalar);
    if p.degree() >= 2 {
        out = out.add(&p.laplacian().mul_r2());
    }
    out
}

/// Eigenvalue of A_α on r^{2i}ℋ_{m−2i}: (α+2i)(2m−2i+α+n−2).
pub fn eigen_a(alpha: &Rational, m: u32, i: u32, n: i64) -> Rational {
    debug_assert!(i <= m / 2);
    (alpha + rat(2 * i as i64)) * (rat(2 * m as i64 - 2 * i as i64 + n - 2) + alpha)
}

/// Eigenvalue of B_α on all of 𝒫_m: 2m + 2α + n − 2.
pub fn eigen_b(alpha: &Rational, m: u32, n: i64) -> Rational {
    rat(2 * m as i64 + n - 2) + alpha * rat(2)
}

/// The Green's-expansion triple (γ, β, α) = (2−n, 4−n, 6−n).
pub fn standard_triple(n: i64) -> (Rational, Rational, Rational) {
    (rat(2 - n), rat(4 - n), rat(6 - n))
}

/// Same triple as rational functions of the symbolic dimension.
pub fn standard_triple_dim() -> (DimRational, DimRational, DimRational) {
    (-n_plus(-2), -n_plus(-4), -n_plus(-6))
}

/// Eigenvalue of A_{2−n}A_{4−n}A_{6−n} on r^{2i}ℋ_{m−2i}:
/// (6−n+2i)(4−n+2i)(2−n+2i)(2m+4−2i)(2m+2−2i)(2m−2i).
pub fn triple_eigenvalue(n: i64, m: u32, i: u32) -> Rational {
    debug_assert!(i <= m / 2);
    let (m, i) = (m as i64, i as i64);
    rat((6 - n + 2 * i) * (4 - n + 2 * i) * (2 - n + 2 * i))
        * rat((2 * m + 4 - 2 * i) * (2 * m + 2 - 2 * i) * (2 * m - 2 * i))
}

/// The B-combination scalar (B_γA_βA_α + A_γB_βA_α + A_γA_βB_α) on
/// r^{2i}ℋ_{m−2i} for the standard triple; this is the log-term divisor
/// on kernel layers.
pub fn b_combination(n: i64, m: u32, i: u32) -> Rational {
    let (g, b, a) = standard_triple(n);
    let (ag, ab, aa) = (
        eigen_a(&g, m, i, n),
        eigen_a(&b, m, i, n),
        eigen_a(&a, m, i, n),
    );
    let (bg, bb, ba) = (eigen_b(&g, m, n), eigen_b(&b, m, n), eigen_b(&a, m, n));
    bg * &ab * &aa + &ag * bb * &aa + &ag * &ab * ba
}

/// Scalar factor of log^{j−jj} produced by the triple acting on a layer
/// at log power j: the falling factorial j(j−1)…(j−jj+1) times the sum
/// over ways to distribute jj differentiations (each operator absorbing
/// at most two: A ↦ B ↦ 1) across the three slots.
fn triple_log_scalar(
    eig: &[(Rational, Rational); 3], // (a, b) per operator slot
    j: u32,
    jj: u32,
) -> Rational {
    let mut falling = rat(1);
    for t in 0..jj {
        falling *= rat(j as i64 - t as i64);
    }
    if falling.is_zero() {
        return falling;
    }
    let mut sum = rat(0);
    for j1 in 0..=2u32.min(jj) {
        for j2 in 0..=2u32.min(jj - j1) {
            let j3 = jj - j1 - j2;
            if j3 > 2 {
                continue;
            }
            let pick = |slot: usize, d: u32| match d {
                0 => eig[slot].0.clone(),
                1 => eig[slot].1.clone(),
                _ => rat(1),
            };
            sum += pick(0, j1) * pick(1, j2) * pick(2, j3);
        }
    }
    falling * sum
}

/// Finite sum Σ r^{6−n+m}·ψ_{m,j}·log^j r with ψ_{m,j} homogeneous of
/// degree m; the r^{6−n} prefactor is implicit and uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRadialSeries {
    n: usize,
    terms: BTreeMap<(u32, u32), HomogeneousPoly>,
}

impl LogRadialSeries {
    pub fn new(n: usize) -> Self {
        LogRadialSeries {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(m: u32, j: u32, psi: HomogeneousPoly) -> Self {
        let mut s = Self::new(psi.dim());
        s.add_term(m, j, psi);
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges ψ into the (degree, log-power) slot, dropping zero results.
    pub fn add_term(&mut self, m: u32, j: u32, psi: HomogeneousPoly) {
        assert_eq!(psi.dim(), self.n);
        assert_eq!(psi.degree(), m, "term degree must match its slot");
        assert!(j <= MAX_LOG_POWER, "log power exceeds internal bound");
        if psi.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((m, j))
            .or_insert_with(|| HomogeneousPoly::zero(self.n, m));
        *slot = slot.add(&psi);
        if slot.is_zero() {
            self.terms.remove(&(m, j));
        }
    }

    pub fn add_series(&mut self, other: &Self) {
        for (&(m, j), psi) in &other.terms {
            self.add_term(m, j, psi.clone());
        }
    }

    pub fn term(&self, m: u32, j: u32) -> Option<&HomogeneousPoly> {
        self.terms.get(&(m, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &HomogeneousPoly)> {
        self.terms.iter().map(|(&(m, j), p)| (m, j, p))
    }

    pub fn max_log_power(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new(self.n);
        for (&(m, j), psi) in &self.terms {
            out.add_term(m, j, psi.scale(c));
        }
        out
    }
}

/// A_γA_βA_α applied to a whole series of φ·log^k r terms, layer by layer
/// with the falling-factorial rule (the closed form of the seven-line
/// composition identity).
pub fn apply_triple_log(
    series: &LogRadialSeries,
    gamma: &Rational,
    beta: &Rational,
    alpha: &Rational,
    n: i64,
) -> LogRadialSeries {
    assert_eq!(series.dim() as i64, n, "operator dimension must match series");
    let mut out = LogRadialSeries::new(series.dim());
    for (m, j, psi) in series.iter() {
        let dec = psi.harmonic_decompose();
        for (i, h) in dec.components().iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let i = i as u32;
            let eig = [
                (eigen_a(gamma, m, i, n), eigen_b(gamma, m, n)),
                (eigen_a(beta, m, i, n), eigen_b(beta, m, n)),
                (eigen_a(alpha, m, i, n), eigen_b(alpha, m, n)),
            ];
            let mut layer = h.clone();
            for _ in 0..i {
                layer = layer.mul_r2();
            }
            for jj in 0..=j.min(MAX_LOG_POWER) {
                let scalar = triple_log_scalar(&eig, j, jj);
                if scalar.is_zero() {
                    continue;
                }
                out.add_term(m, j - jj, layer.scale(&scalar));
            }
        }
    }
    out
}

/// Spec-shaped wrapper taking dimension-parametric operator parameters.
pub fn apply_triple_log_dim(
    series: &LogRadialSeries,
    gamma: &DimRational,
    beta: &DimRational,
    alpha: &DimRational,
    n: i64,
) -> LogRadialSeries {
    let g = gamma.eval(n).expect("pole in gamma");
    let b = beta.eval(n).expect("pole in beta");
    let a = alpha.eval(n).expect("pole in alpha");
    apply_triple_log(series, &g, &b, &a, n)
}

/// Product-rule route for the same composition: apply the single-operator
/// identity A_α(φ log^j) = (A_αφ)log^j + j(B_αφ)log^{j−1} + j(j−1)φ log^{j−2}
/// three times with fully symbolic polynomial arithmetic. Slower; used as
/// an independent oracle for `apply_triple_log`.
pub fn apply_triple_log_product_rule(
    series: &LogRadialSeries,
    gamma: &Rational,
    beta: &Rational,
    alpha: &Rational,
    n: i64,
) -> LogRadialSeries {
    assert_eq!(series.dim() as i64, n, "operator dimension must match series");
    let apply_one = |s: &LogRadialSeries, param: &Rational| {
        let mut out = LogRadialSeries::new(s.dim());
        for (m, j, psi) in s.iter() {
            out.add_term(m, j, apply_shift(param, psi, n));
            if j >= 1 {
                let b = eigen_b(param, m, n);
                out.add_term(m, j - 1, psi.scale(&(b * rat(j as i64))));
            }
            if j >= 2 {
                out.add_term(m, j - 2, psi.scale(&rat(j as i64 * (j as i64 - 1))));
            }
        }
        out
    };
    apply_one(&apply_one(&apply_one(series, alpha), beta), gamma)
}

/// Log term emitted while inverting the triple on a kernel layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLogTerm {
    /// Layer index i of r^{2i}ℋ_{m−2i}.
    pub layer: u32,
    /// The B-combination divisor used (times the log-power factor).
    pub divisor: Rational,
    /// The emitted coefficient polynomial, already divided.
    pub poly: HomogeneousPoly,
}

/// Solves A_γA_βA_α ψ = −rhs layer by layer for the standard triple.
///
/// Non-kernel layers divide by the triple eigenvalue; kernel layers emit a
/// log term with the B-combination scalar as divisor.
pub fn invert_triple(
    rhs: &HomogeneousPoly,
    n: i64,
) -> Result<(HomogeneousPoly, Vec<KernelLogTerm>), RadialError> {
    let (psi, extra) = invert_triple_at_log(rhs, 0, n)?;
    Ok((psi, extra))
}

/// Solves the cancellation problem at log power j: returns the log^j
/// coefficient for regular layers and the log^{j+1} kernel terms, whose
/// divisor picks up the factor (j+1) from the falling-factorial rule.
pub fn invert_triple_at_log(
    rhs: &HomogeneousPoly,
    j: u32,
    n: i64,
) -> Result<(HomogeneousPoly, Vec<KernelLogTerm>), RadialError> {
    assert_eq!(rhs.dim() as i64, n, "operator dimension must match polynomial");
    let m = rhs.degree();
    let mut psi = HomogeneousPoly::zero(rhs.dim(), m);
    let mut logs = Vec::new();
    if rhs.is_zero() {
        return Ok((psi, logs));
    }
    let dec = rhs.harmonic_decompose();
    for (i, h) in dec.components().iter().enumerate() {
        if h.is_zero() {
            continue;
        }
        let i = i as u32;
        let mut layer = h.clone();
        for _ in 0..i {
            layer = layer.mul_r2();
        }
        let lambda = triple_eigenvalue(n, m, i);
        if !lambda.is_zero() {
            psi = psi.add(&layer.scale(&(-lambda.recip())));
        } else {
            let bc = b_combination(n, m, i);
            if bc.is_zero() {
                return Err(RadialError::UnsupportedDegeneracy {
                    degree: m,
                    layer: i,
                });
            }
            let divisor = bc * rat(j as i64 + 1);
            logs.push(KernelLogTerm {
                layer: i,
                divisor: divisor.clone(),
                poly: layer.scale(&(-divisor.recip())),
            });
        }
    }
    Ok((psi, logs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ratio;
    use proptest::prelude::*;

    #[test]
    fn eigen_examples() {
        let n = 13i64;
        let alpha = rat(6 - n);
        assert_eq!(eigen_a(&alpha, 0, 0, n), rat((6 - n) * 4));
        assert_eq!(eigen_b(&alpha, 0, n), rat(10 - n));
        // α = −2i kills the first factor
        assert_eq!(eigen_a(&rat(-4), 4, 2, n), rat(0));
    }

    #[test]
    fn triple_eigenvalue_examples() {
        assert_eq!(triple_eigenvalue(10, 4, 0), rat(-184320));
        assert_eq!(triple_eigenvalue(10, 4, 1), rat(-23040));
        assert_eq!(triple_eigenvalue(10, 4, 2), rat(0));
        for n in 7..20 {
            assert_eq!(triple_eigenvalue(n, 0, 0), rat(0));
        }
    }

    #[test]
    fn b_combination_regression_constants() {
        for n in [8i64, 10, 12, 14, 16] {
            // r^{n−6}ℋ₀: 8(n−2)(n−4)(n−6)
            let m = (n - 6) as u32;
            let i = ((n - 6) / 2) as u32;
            assert_eq!(b_combination(n, m, i), rat(8 * (n - 2) * (n - 4) * (n - 6)));
            // r^{n−6}ℋ₂: 8(n+2)n(n−2)
            let m = (n - 4) as u32;
            let i = ((n - 6) / 2) as u32;
            assert_eq!(b_combination(n, m, i), rat(8 * (n + 2) * n * (n - 2)));
            // r^{n−4}ℋ₀: −4n(n−2)(n−4)
            let m = (n - 4) as u32;
            let i = ((n - 4) / 2) as u32;
            assert_eq!(b_combination(n, m, i), rat(-4 * n * (n - 2) * (n - 4)));
        }
    }

    #[test]
    fn kernel_census_even_n() {
        // the first vanishing triple eigenvalue sits at m = n−6, i = (n−6)/2
        for n in [8i64, 10, 12, 14, 16] {
            let mut first: Option<(u32, u32)> = None;
            'outer: for m in 1..=(n as u32) {
                for i in 0..=(m / 2) {
                    if triple_eigenvalue(n, m, i).is_zero() {
                        first = Some((m, i));
                        break 'outer;
                    }
                }
            }
            assert_eq!(first, Some(((n - 6) as u32, ((n - 6) / 2) as u32)));
        }
        // odd n: no kernel at positive degree in range
        for n in [7i64, 9, 11, 13] {
            for m in 1..=(n as u32 + 2) {
                for i in 0..=(m / 2) {
                    assert!(!triple_eigenvalue(n, m, i).is_zero());
                }
            }
        }
    }

    #[test]
    fn apply_triple_no_log_collapses_to_composition() {
        let n = 11i64;
        let dim = 11usize;
        let (g, b, a) = standard_triple(n);
        let mut e = vec![0u8; dim];
        e[0] = 2;
        e[1] = 1;
        let phi = HomogeneousPoly::monomial(dim, &e, rat(3));
        let series = LogRadialSeries::from_term(3, 0, phi.clone());
        let out = apply_triple_log(&series, &g, &b, &a, n);
        // compose symbolically
        let op_a = RadialOperator::new(-n_plus(-6));
        let op_b = RadialOperator::new(-n_plus(-4));
        let op_g = RadialOperator::new(-n_plus(-2));
        let expect = op_g.apply(&op_b.apply(&op_a.apply(&phi, n), n), n);
        assert_eq!(out.term(3, 0), Some(&expect));
        assert_eq!(out.max_log_power(), 0);
    }

    #[test]
    fn kernel_layer_log_one_gives_pure_b_combination() {
        // φ = r^{n−6}·1 at log power 1 maps to 8(n−2)(n−4)(n−6)·φ log⁰
        let n = 10i64;
        let dim = 10usize;
        let (g, b, a) = standard_triple(n);
        let phi = HomogeneousPoly::r_pow(dim, 4);
        let series = LogRadialSeries::from_term(4, 1, phi.clone());
        let out = apply_triple_log(&series, &g, &b, &a, n);
        assert_eq!(out.term(4, 1), None);
        assert_eq!(out.term(4, 0), Some(&phi.scale(&rat(1536))));
    }

    #[test]
    fn invert_triple_examples() {
        let dim = 11usize;
        let n = 11i64;
        // harmonic rhs: plain division by the i = 0 eigenvalue
        let mut e = vec![0u8; dim];
        e[0] = 3;
        e[1] = 1;
        let mut rhs = HomogeneousPoly::monomial(dim, &e, rat(12));
        rhs = rhs.harmonic_decompose().component(0).clone();
        let (psi, logs) = invert_triple(&rhs, n).unwrap();
        assert!(logs.is_empty());
        assert_eq!(psi, rhs.scale(&(-triple_eigenvalue(n, 4, 0).recip())));

        // kernel rhs at n = 10: divisor 8·8·6·4 = 1536
        let dim = 10usize;
        let rhs = HomogeneousPoly::r_pow(dim, 4).scale(&ratio(-16, 45));
        let (psi, logs) = invert_triple(&rhs, 10).unwrap();
        assert!(psi.is_zero());
        assert_eq!(logs.len(), 1);
        assert_eq!(logs[0].layer, 2);
        assert_eq!(logs[0].divisor, rat(1536));
        assert_eq!(
            logs[0].poly,
            HomogeneousPoly::r_pow(dim, 4).scale(&ratio(16, 45 * 1536))
        );

        // zero rhs
        let (psi, logs) = invert_triple(&HomogeneousPoly::zero(dim, 4), 10).unwrap();
        assert!(psi.is_zero() && logs.is_empty());
    }

    #[test]
    fn invert_then_apply_cancels_rhs() {
        let n = 10i64;
        let dim = 10usize;
        let (g, b, a) = standard_triple(n);
        // mixed rhs with kernel and non-kernel content
        let mut e = vec![0u8; dim];
        e[0] = 4;
        let rhs = HomogeneousPoly::monomial(dim, &e, rat(7));
        let (psi, logs) = invert_triple(&rhs, n).unwrap();
        let mut series = LogRadialSeries::from_term(4, 0, psi);
        for t in logs {
            series.add_term(4, 1, t.poly);
        }
        let mut total = apply_triple_log(&series, &g, &b, &a, n);
        total.add_term(4, 0, rhs);
        assert!(total.term(4, 0).is_none());
        assert!(total.term(4, 1).is_none());
    }

    prop_compose! {
        fn arb_series()(dim in 7usize..=14)(
            dim in Just(dim),
            terms in prop::collection::vec(
                (1u32..=5, 0u32..=3, prop::collection::vec(0u32..=5, 8), -9i64..=9),
                1..5,
            ),
        ) -> LogRadialSeries {
            let mut s = LogRadialSeries::new(dim);
            for (m, j, raw, c) in terms {
                let mut e = vec![0u8; dim];
                let mut left = m;
                for i in 0..dim {
                    let take = raw[i % 8].min(left);
                    e[i] = take as u8;
                    left -= take;
                }
                e[dim - 1] += left as u8;
                s.add_term(m, j, HomogeneousPoly::monomial(dim, &e, rat(c)));
            }
            s
        }
    }

    proptest! {
        #[test]
        fn falling_factorial_route_matches_product_rule(
            s in arb_series(),
            g_num in -12i64..=3,
            b_num in -12i64..=3,
            a_num in -12i64..=3,
        ) {
            let n = s.dim() as i64;
            let (g, b, a) = (ratio(g_num, 2), ratio(b_num, 2), ratio(a_num, 2));
            let fast = apply_triple_log(&s, &g, &b, &a, n);
            let slow = apply_triple_log_product_rule(&s, &g, &b, &a, n);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn diagonalization_consistency(
            n in 7i64..=14,
            i in 0u32..=2,
            alpha_num in -20i64..=8,
            raw in prop::collection::vec(0u32..=4, 8),
            c in 1i64..=9,
        ) {
            let dim = n as usize;
            // random polynomial of degree 4, take its top harmonic layer
            let mut e = vec![0u8; dim];
            let mut left = 4u32;
            for k in 0..dim {
                let take = raw[k % 8].min(left);
                e[k] = take as u8;
                left -= take;
            }
            e[dim - 1] += left as u8;
            let p = HomogeneousPoly::monomial(dim, &e, rat(c));
            let h = p.harmonic_decompose().component(0).clone();
            prop_assume!(!h.is_zero());
            let mut layer = h.clone();
            for _ in 0..i {
                layer = layer.mul_r2();
            }
            let m = 4 + 2 * i;
            let alpha = ratio(alpha_num, 2);
            let op = RadialOperator::new(DimRational::from_rat(alpha.clone()));
            let applied = op.apply(&layer, n);
            let eig = eigen_a(&alpha, m, i, n);
            prop_assert_eq!(applied, layer.scale(&eig));
        }
    }
}
