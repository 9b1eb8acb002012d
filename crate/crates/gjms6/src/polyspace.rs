//! Exact homogeneous polynomial algebra in ℝⁿ and the harmonic
//! decomposition 𝒫_m = ⊕_k r^{2k} ℋ_{m−2k}.
//!
//! Polynomials are sparse maps from exponent multi-indices to rationals;
//! all arithmetic is exact. The decomposition inverts the diagonal action
//! of the flat Laplacian on r^{2k}·harmonic layers, so it needs no inner
//! products and stays in ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exact_arith::{rat, Rational};

/// Homogeneous polynomial of fixed degree in a fixed number of variables.
///
/// Zero coefficients are never stored; every stored multi-index sums to the
/// polynomial's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    n: usize,
    m: u32,
    coeffs: BTreeMap<Vec<u8>, Rational>,
}

impl HomogeneousPoly {
    pub fn zero(n: usize, m: u32) -> Self {
        HomogeneousPoly {
            n,
            m,
            coeffs: BTreeMap::new(),
        }
    }

    /// Single monomial c·x^exps; degree is the exponent sum.
    pub fn monomial(n: usize, exps: &[u8], c: Rational) -> Self {
        assert_eq!(exps.len(), n, "multi-index length must equal dimension");
        let m = exps.iter().map(|&e| e as u32).sum();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exps.to_vec(), c);
        }
        HomogeneousPoly { n, m, coeffs }
    }

    /// The constant polynomial c (degree 0).
    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(n, &vec![0u8; n], c)
    }

    /// One-pass build from (multi-index, coefficient) pairs; repeated
    /// indices accumulate and zero coefficients are dropped.
    pub fn from_terms(
        n: usize,
        m: u32,
        terms: impl IntoIterator<Item = (Vec<u8>, Rational)>,
    ) -> Self {
        let mut p = Self::zero(n, m);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "multi-index length must equal dimension");
            assert_eq!(
                e.iter().map(|&x| x as u32).sum::<u32>(),
                m,
                "degree mismatch"
            );
            p.insert_add(e, c);
        }
        p
    }

    /// r² = Σ xᵢ².
    pub fn r_squared(n: usize) -> Self {
        let mut p = Self::zero(n, 2);
        for i in 0..n {
            let mut e = vec![0u8; n];
            e[i] = 2;
            p.coeffs.insert(e, rat(1));
        }
        p
    }

    /// (r²)^k.
    pub fn r_pow(n: usize, two_k: u32) -> Self {
        assert!(two_k % 2 == 0, "radial powers are even");
        let mut p = Self::constant(n, rat(1));
        for _ in 0..two_k / 2 {
            p = p.mul_r2();
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exps: &[u8]) -> Rational {
        self.coeffs.get(exps).cloned().unwrap_or_else(|| rat(0))
    }

    fn insert_add(&mut self, exps: Vec<u8>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.m, other.m, "cannot add different degrees");
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        HomogeneousPoly {
            n: self.n,
            m: self.m,
            coeffs,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.m);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, k)| (e.clone(), k * c))
            .collect();
        HomogeneousPoly {
            n: self.n,
            m: self.m,
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n, self.m + other.m);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca * cb);
            }
        }
        out
    }

    /// Multiplication by r², the layer-shift map.
    pub fn mul_r2(&self) -> Self {
        let mut out = Self::zero(self.n, self.m + 2);
        for (e, c) in &self.coeffs {
            for i in 0..self.n {
                let mut e2 = e.clone();
                e2[i] += 2;
                out.insert_add(e2, c.clone());
            }
        }
        out
    }

    /// Flat Laplacian Δ₀; degree drops by 2 (zero polynomial below degree 2).
    pub fn laplacian(&self) -> Self {
        let m_out = self.m.saturating_sub(2);
        let mut out = Self::zero(self.n, m_out);
        for (e, c) in &self.coeffs {
            for i in 0..self.n {
                if e[i] >= 2 {
                    let mut e2 = e.clone();
                    e2[i] -= 2;
                    let f = rat(e[i] as i64) * rat(e[i] as i64 - 1);
                    out.insert_add(e2, c * f);
                }
            }
        }
        out
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_zero()
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.n);
        let mut acc = rat(0);
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e.iter()) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// If self = c·other for a single rational c, returns c.
    pub fn proportionality(&self, other: &Self) -> Option<Rational> {
        if other.is_zero() {
            return self.is_zero().then(|| rat(0));
        }
        if self.is_zero() {
            return Some(rat(0));
        }
        let (e0, c0) = other.coeffs.iter().next().unwrap();
        let ratio = self.coeffs.get(e0)? / c0;
        (self == &other.scale(&ratio)).then_some(ratio)
    }

    pub fn harmonic_decompose(&self) -> HarmonicDecomposition {
        HarmonicDecomposition::of(self)
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, ei)?,
                }
            }
        }
        Ok(())
    }
}

/// The unique splitting p = Σ_k r^{2k} h_k with each h_k harmonic of
/// degree m − 2k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicDecomposition {
    n: usize,
    m: u32,
    components: Vec<HomogeneousPoly>,
}

impl HarmonicDecomposition {
    /// Eigenvalue of Δ on the layer r^{2k}·ℋ_{m−2k} relative to the layer
    /// below: Δ(r^{2k} h) = 2k(2m − 2k + n − 2)·r^{2k−2} h.
    pub fn layer_divisor(n: usize, m: u32, k: u32) -> Rational {
        rat(2 * k as i64) * rat(2 * m as i64 - 2 * k as i64 + n as i64 - 2)
    }

    fn of(p: &HomogeneousPoly) -> Self {
        let (n, m) = (p.dim(), p.degree());
        let mut components = vec![HomogeneousPoly::zero(n, m % 2); (m / 2 + 1) as usize];
        for (k, c) in components.iter_mut().enumerate() {
            *c = HomogeneousPoly::zero(n, m - 2 * k as u32);
        }
        if p.is_zero() {
            return HarmonicDecomposition { n, m, components };
        }
        if m <= 1 {
            components[0] = p.clone();
            return HarmonicDecomposition { n, m, components };
        }
        let sub = Self::of(&p.laplacian());
        let mut head = p.clone();
        for k in 1..=(m / 2) {
            let div = Self::layer_divisor(n, m, k);
            debug_assert!(!div.is_zero());
            let h = sub.components[(k - 1) as usize].scale(&div.recip());
            let mut shifted = h.clone();
            for _ in 0..k {
                shifted = shifted.mul_r2();
            }
            head = head.sub(&shifted);
            components[k as usize] = h;
        }
        components[0] = head;
        debug_assert!(components[0].is_harmonic());
        HarmonicDecomposition { n, m, components }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// h_k, the harmonic factor of the r^{2k} layer.
    pub fn component(&self, k: u32) -> &HomogeneousPoly {
        &self.components[k as usize]
    }

    pub fn components(&self) -> &[HomogeneousPoly] {
        &self.components
    }

    /// Σ_k r^{2k} h_k; equals the decomposed polynomial exactly.
    pub fn reconstruct(&self) -> HomogeneousPoly {
        let mut acc = HomogeneousPoly::zero(self.n, self.m);
        for (k, h) in self.components.iter().enumerate() {
            let mut shifted = h.clone();
            for _ in 0..k {
                shifted = shifted.mul_r2();
            }
            acc = acc.add(&shifted);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ratio;
    use proptest::prelude::*;

    fn x1_squared(n: usize) -> HomogeneousPoly {
        let mut e = vec![0u8; n];
        e[0] = 2;
        HomogeneousPoly::monomial(n, &e, rat(1))
    }

    #[test]
    fn laplacian_basics() {
        let n = 10;
        assert_eq!(
            x1_squared(n).laplacian(),
            HomogeneousPoly::constant(n, rat(2))
        );
        assert_eq!(
            HomogeneousPoly::r_squared(n).laplacian(),
            HomogeneousPoly::constant(n, rat(2 * n as i64))
        );
        let mut e = vec![0u8; n];
        e[0] = 1;
        e[1] = 1;
        let x1x2 = HomogeneousPoly::monomial(n, &e, rat(1));
        assert!(x1x2.is_harmonic());
    }

    #[test]
    fn decompose_x1_squared() {
        let n = 10;
        let d = x1_squared(n).harmonic_decompose();
        // h₀ = x₁² − r²/10, h₁ = 1/10
        assert_eq!(d.component(1), &HomogeneousPoly::constant(n, ratio(1, 10)));
        let h0 = x1_squared(n).sub(&HomogeneousPoly::r_squared(n).scale(&ratio(1, 10)));
        assert_eq!(d.component(0), &h0);
        assert_eq!(d.reconstruct(), x1_squared(n));
    }

    #[test]
    fn decompose_harmonic_is_identity() {
        let n = 8;
        let mut e = vec![0u8; n];
        e[0] = 1;
        e[1] = 1;
        let p = HomogeneousPoly::monomial(n, &e, rat(3));
        let d = p.harmonic_decompose();
        assert_eq!(d.component(0), &p);
        assert!(d.component(1).is_zero());
    }

    #[test]
    fn decompose_r4() {
        let n = 9;
        let d = HomogeneousPoly::r_pow(n, 4).harmonic_decompose();
        assert!(d.component(0).is_zero());
        assert!(d.component(1).is_zero());
        assert_eq!(d.component(2), &HomogeneousPoly::constant(n, rat(1)));
    }

    #[test]
    fn evaluate_at_basis_point() {
        let n = 7;
        let p = x1_squared(n).sub(&HomogeneousPoly::r_squared(n).scale(&ratio(1, n as i64)));
        let mut e1 = vec![rat(0); n];
        e1[0] = rat(1);
        assert_eq!(p.evaluate(&e1), rat(1) - ratio(1, n as i64));
        // harmonic of degree ≥ 1 vanishes at the origin
        assert_eq!(p.evaluate(&vec![rat(0); n]), rat(0));
    }

    #[test]
    fn layer_laplacian_closed_form() {
        // Δ(r^{2k} h) = 2k(2(m−2k) + n + 2k − 2)·r^{2k−2} h for harmonic h
        let n = 9;
        let mut e = vec![0u8; n];
        e[0] = 1;
        e[1] = 1;
        let h = HomogeneousPoly::monomial(n, &e, rat(1)); // harmonic, degree 2
        for k in 1u32..=3 {
            let m = 2 + 2 * k;
            let mut p = h.clone();
            for _ in 0..k {
                p = p.mul_r2();
            }
            let mut expect = h.scale(&HarmonicDecomposition::layer_divisor(n, m, k));
            for _ in 0..k - 1 {
                expect = expect.mul_r2();
            }
            assert_eq!(p.laplacian(), expect);
        }
    }

    #[test]
    fn proportionality_detects_multiples() {
        let n = 6;
        let p = HomogeneousPoly::r_squared(n);
        assert_eq!(p.scale(&ratio(3, 7)).proportionality(&p), Some(ratio(3, 7)));
        assert_eq!(x1_squared(n).proportionality(&p), None);
    }

    type RawTerms = Vec<(Vec<u32>, i64)>;

    fn build_poly(n: usize, m: u32, terms: RawTerms) -> HomogeneousPoly {
        let mut p = HomogeneousPoly::zero(n, m);
        for (raw, c) in terms {
            // project the raw exponent vector onto the degree-m simplex
            let mut e = vec![0u8; n];
            let mut left = m;
            for (i, r) in raw.iter().enumerate() {
                let take = (*r).min(left);
                e[i] = take as u8;
                left -= take;
            }
            e[n - 1] += left as u8;
            p = p.add(&HomogeneousPoly::monomial(n, &e, rat(c)));
        }
        p
    }

    fn raw_terms(n: usize) -> impl Strategy<Value = RawTerms> {
        prop::collection::vec((prop::collection::vec(0u32..=8, n), -9i64..=9), 0..12)
    }

    prop_compose! {
        fn arb_poly()(n in 7usize..=14, m in 0u32..=8)(
            n in Just(n),
            m in Just(m),
            terms in raw_terms(n),
        ) -> HomogeneousPoly {
            build_poly(n, m, terms)
        }
    }

    prop_compose! {
        fn arb_poly_pair()(n in 7usize..=14, m in 0u32..=8)(
            n in Just(n),
            m in Just(m),
            ta in raw_terms(n),
            tb in raw_terms(n),
        ) -> (HomogeneousPoly, HomogeneousPoly) {
            (build_poly(n, m, ta), build_poly(n, m, tb))
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reconstruction_is_exact(p in arb_poly()) {
            let d = p.harmonic_decompose();
            prop_assert_eq!(d.reconstruct(), p);
        }
    }

    proptest! {
        #[test]
        fn components_are_harmonic(p in arb_poly()) {
            for h in p.harmonic_decompose().components() {
                prop_assert!(h.is_harmonic());
            }
        }

        #[test]
        fn decomposition_is_a_projection(p in arb_poly()) {
            // decomposing a single reassembled layer returns exactly that layer
            let d = p.harmonic_decompose();
            for (k, h) in d.components().iter().enumerate() {
                let mut layer = h.clone();
                for _ in 0..k {
                    layer = layer.mul_r2();
                }
                let dd = layer.harmonic_decompose();
                for (j, g) in dd.components().iter().enumerate() {
                    if j == k {
                        prop_assert_eq!(g, h);
                    } else {
                        prop_assert!(g.is_zero());
                    }
                }
            }
        }

        #[test]
        fn laplacian_commutes_with_add(pair in arb_poly_pair()) {
            let (a, b) = pair;
            prop_assert_eq!(a.add(&b).laplacian(), a.laplacian().add(&b.laplacian()));
        }
    }
}
