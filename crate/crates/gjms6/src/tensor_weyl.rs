//! Exact Weyl-tensor algebra: seeded random tensors with the full Riemann
//! symmetry class and vanishing traces, the quartic/vector contraction
//! forms, and the harmonic bracket polynomials they generate.
//!
//! Random tensors are built by projecting an integer array onto the
//! Riemann symmetry class (symmetrize, remove the Bianchi-violating part,
//! subtract the Kulkarni–Nomizu trace part) with all divisions cleared, so
//! entries stay integers and the heavy rank-4 contractions run in i128.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_arith::{rat, ratio, Rational};
use crate::polyspace::HomogeneousPoly;

/// Rank-4 tensor with Weyl symmetries: antisymmetric in each index pair,
/// symmetric under pair swap, first Bianchi identity, and all traces zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylTensor {
    n: usize,
    w: Vec<Rational>,
    /// Integer snapshot when every entry is an i64; drives the fast paths.
    wi: Option<Vec<i64>>,
}

#[inline]
fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

impl WeylTensor {
    /// Wraps raw entries, verifying every Weyl invariant exactly.
    pub fn from_entries(n: usize, w: Vec<Rational>) -> Self {
        assert!(n >= 4, "Weyl tensors vanish identically below dimension 4");
        assert_eq!(w.len(), n * n * n * n);
        let wi = w
            .iter()
            .map(|r| {
                if r.denom().is_one() {
                    r.numer().to_i64()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<i64>>>();
        let t = WeylTensor { n, w, wi };
        t.assert_invariants();
        t
    }

    fn from_ints(n: usize, wi: Vec<i64>) -> Self {
        let w = wi.iter().map(|&v| rat(v)).collect();
        Self::from_entries(n, w)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        &self.w[idx(self.n, i, j, k, l)]
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(Zero::is_zero)
    }

    fn assert_invariants(&self) {
        let n = self.n;
        if let Some(wi) = &self.wi {
            let w = |i, j, k, l| wi[idx(n, i, j, k, l)];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            assert_eq!(w(i, j, k, l), -w(j, i, k, l), "pair antisymmetry");
                            assert_eq!(w(i, j, k, l), -w(i, j, l, k), "pair antisymmetry");
                            assert_eq!(w(i, j, k, l), w(k, l, i, j), "pair swap symmetry");
                            assert_eq!(
                                w(i, j, k, l) + w(i, k, l, j) + w(i, l, j, k),
                                0,
                                "first Bianchi identity"
                            );
                        }
                    }
                }
            }
            for j in 0..n {
                for l in 0..n {
                    let tr: i64 = (0..n).map(|i| w(i, j, i, l)).sum();
                    assert_eq!(tr, 0, "trace must vanish");
                }
            }
            return;
        }
        let w = |i, j, k, l| &self.w[idx(n, i, j, k, l)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(w(i, j, k, l), &-w(j, i, k, l), "pair antisymmetry");
                        assert_eq!(w(i, j, k, l), &-w(i, j, l, k), "pair antisymmetry");
                        assert_eq!(w(i, j, k, l), w(k, l, i, j), "pair swap symmetry");
                        let bianchi =
                            w(i, j, k, l) + w(i, k, l, j) + w(i, l, j, k);
                        assert!(bianchi.is_zero(), "first Bianchi identity");
                    }
                }
            }
        }
        for j in 0..n {
            for l in 0..n {
                let tr: Rational = (0..n).map(|i| w(i, j, i, l).clone()).sum();
                assert!(tr.is_zero(), "trace must vanish");
            }
        }
    }

    /// Deterministic nonzero Weyl tensor from a seed: integer noise
    /// projected onto the symmetry class with denominators cleared.
    pub fn random(n: usize, seed: u64) -> Self {
        assert!(n >= 4, "Weyl tensors vanish identically below dimension 4");
        let mut attempt = seed;
        loop {
            let t = Self::random_once(n, attempt);
            if !t.iter_ints().all(|v| v == 0) {
                let g = t.iter_ints().fold(0i64, |acc, v| acc.gcd(&v.abs()));
                let reduced = t.iter_ints().map(|v| v / g).collect();
                return Self::from_ints(n, reduced);
            }
            attempt = attempt.wrapping_add(1);
        }
    }

    fn random_once(n: usize, seed: u64) -> RawTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = n * n * n * n;
        let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(-9..=9)).collect();
        let at = |v: &[i64], i, j, k, l| v[idx(n, i, j, k, l)];

        // Riemann symmetry class (scaled by 8 to stay in integers)
        let mut r1 = vec![0i64; count];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        r1[idx(n, i, j, k, l)] = at(&raw, i, j, k, l) - at(&raw, j, i, k, l)
                            + at(&raw, j, i, l, k)
                            - at(&raw, i, j, l, k)
                            + at(&raw, k, l, i, j)
                            - at(&raw, l, k, i, j)
                            + at(&raw, l, k, j, i)
                            - at(&raw, k, l, j, i);
                    }
                }
            }
        }

        // remove the Bianchi-violating part: R2 = 3·R1 − cyclic(R1)
        let mut r2 = vec![0i64; count];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let cyc = at(&r1, i, j, k, l) + at(&r1, i, k, l, j) + at(&r1, i, l, j, k);
                        r2[idx(n, i, j, k, l)] = 3 * at(&r1, i, j, k, l) - cyc;
                    }
                }
            }
        }

        // trace removal, scaled by 2n(n−1)(n−2):
        //   W = R2 − KN(E, g)/(n−2) − S·KN(g, g)/(2n(n−1)),
        // with Ric the (1,3) trace, S its trace, E = Ric − (S/n)g.
        let ni = n as i64;
        let mut ric = vec![0i64; n * n];
        for j in 0..n {
            for l in 0..n {
                ric[j * n + l] = (0..n).map(|i| at(&r2, i, j, i, l)).sum();
            }
        }
        let s: i64 = (0..n).map(|j| ric[j * n + j]).sum();
        // scaled traceless Ricci: E' = n·Ric − S·g  (E = E'/n)
        let eprime = |a: usize, b: usize| ni * ric[a * n + b] - if a == b { s } else { 0 };
        let delta = |a: usize, b: usize| (a == b) as i64;
        let scale = 2 * ni * (ni - 1) * (ni - 2);
        let mut w = vec![0i64; count];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let kn_e = eprime(i, k) * delta(j, l) - eprime(i, l) * delta(j, k)
                            + eprime(j, l) * delta(i, k)
                            - eprime(j, k) * delta(i, l);
                        let kn_g = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k)
                            + delta(j, l) * delta(i, k)
                            - delta(j, k) * delta(i, l);
                        w[idx(n, i, j, k, l)] = scale * at(&r2, i, j, k, l)
                            - 2 * (ni - 1) * kn_e
                            - (ni - 2) * s * kn_g;
                    }
                }
            }
        }
        RawTensor(w)
    }

    /// |W|² = Σ W_{ijkl}².
    pub fn norm_sq(&self) -> Rational {
        match &self.wi {
            Some(wi) => {
                let s: i128 = wi.iter().map(|&v| (v as i128) * (v as i128)).sum();
                Rational::from_integer(s.into())
            }
            None => self.w.iter().map(|v| v * v).sum(),
        }
    }

    /// Σ W_{iklj} W_{jkli}, which the Bianchi identity pins to |W|²/2.
    pub fn pair_contraction(&self) -> Rational {
        let n = self.n;
        match &self.wi {
            Some(wi) => {
                let mut s = 0i128;
                for i in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for j in 0..n {
                                s += wi[idx(n, i, k, l, j)] as i128
                                    * wi[idx(n, j, k, l, i)] as i128;
                            }
                        }
                    }
                }
                Rational::from_integer(s.into())
            }
            None => {
                let mut s = rat(0);
                for i in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for j in 0..n {
                                s += self.entry(i, k, l, j) * self.entry(j, k, l, i);
                            }
                        }
                    }
                }
                s
            }
        }
    }

    /// Σ_{i,k,l,s} (W_{ikls} + W_{ilks})², which contracts to 3|W|².
    pub fn symmetrized_contraction(&self) -> Rational {
        let n = self.n;
        match &self.wi {
            Some(wi) => {
                let mut acc = 0i128;
                for i in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for s in 0..n {
                                let v =
                                    (wi[idx(n, i, k, l, s)] + wi[idx(n, i, l, k, s)]) as i128;
                                acc += v * v;
                            }
                        }
                    }
                }
                Rational::from_integer(acc.into())
            }
            None => {
                let mut acc = rat(0);
                for i in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for s in 0..n {
                                let v = self.entry(i, k, l, s) + self.entry(i, l, k, s);
                                acc += &v * &v;
                            }
                        }
                    }
                }
                acc
            }
        }
    }

    /// Q(x) = Σ_{k,l} (W_{iklj} xⁱxʲ)², homogeneous of degree 4.
    pub fn quartic_form(&self) -> HomogeneousPoly {
        let n = self.n;
        let mut acc: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
        let mut add = |i: usize, j: usize, s: usize, t: usize, v: Rational| {
            if v.is_zero() {
                return;
            }
            let mut e = vec![0u8; n];
            e[i] += 1;
            e[j] += 1;
            e[s] += 1;
            e[t] += 1;
            *acc.entry(e).or_insert_with(|| rat(0)) += v;
        };
        match &self.wi {
            Some(wi) => {
                // U_{(ij),(st)} = Σ_{k,l} W_{iklj} W_{sklt}, symmetric in (ij)↔(st)
                for p in 0..n * n {
                    let (i, j) = (p / n, p % n);
                    for q in p..n * n {
                        let (s, t) = (q / n, q % n);
                        let mut u = 0i128;
                        for k in 0..n {
                            for l in 0..n {
                                u += wi[idx(n, i, k, l, j)] as i128
                                    * wi[idx(n, s, k, l, t)] as i128;
                            }
                        }
                        if u != 0 {
                            let mult = if p == q { 1 } else { 2 };
                            add(i, j, s, t, Rational::from_integer((u * mult).into()));
                        }
                    }
                }
            }
            None => {
                for p in 0..n * n {
                    let (i, j) = (p / n, p % n);
                    for q in p..n * n {
                        let (s, t) = (q / n, q % n);
                        let mut u = rat(0);
                        for k in 0..n {
                            for l in 0..n {
                                u += self.entry(i, k, l, j) * self.entry(s, k, l, t);
                            }
                        }
                        if !u.is_zero() {
                            let mult = rat(if p == q { 1 } else { 2 });
                            add(i, j, s, t, u * mult);
                        }
                    }
                }
            }
        }
        HomogeneousPoly::from_terms(n, 4, acc)
    }

    /// V(x) = Σ_{k,l,s} ((W_{ikls} + W_{ilks}) xⁱ)², homogeneous of degree 2.
    pub fn vector_form(&self) -> HomogeneousPoly {
        let n = self.n;
        let mut out = HomogeneousPoly::zero(n, 2);
        for i in 0..n {
            for j in i..n {
                let m = match &self.wi {
                    Some(wi) => {
                        let mut m = 0i128;
                        for k in 0..n {
                            for l in 0..n {
                                for s in 0..n {
                                    m += (wi[idx(n, i, k, l, s)] + wi[idx(n, i, l, k, s)]) as i128
                                        * (wi[idx(n, j, k, l, s)] + wi[idx(n, j, l, k, s)])
                                            as i128;
                                }
                            }
                        }
                        Rational::from_integer(m.into())
                    }
                    None => {
                        let mut m = rat(0);
                        for k in 0..n {
                            for l in 0..n {
                                for s in 0..n {
                                    m += (self.entry(i, k, l, s) + self.entry(i, l, k, s))
                                        * (self.entry(j, k, l, s) + self.entry(j, l, k, s));
                                }
                            }
                        }
                        m
                    }
                };
                if !m.is_zero() {
                    let mut e = vec![0u8; n];
                    e[i] += 1;
                    e[j] += 1;
                    let c = if i == j { m } else { m * rat(2) };
                    out = out.add(&HomogeneousPoly::monomial(n, &e, c));
                }
            }
        }
        out
    }

    /// Pullback by a signed permutation of the coordinate axes.
    pub fn signed_permutation(&self, perm: &[usize], signs: &[i8]) -> Self {
        let n = self.n;
        assert_eq!(perm.len(), n);
        assert_eq!(signs.len(), n);
        let mut w = vec![rat(0); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let sgn = (signs[i] * signs[j] * signs[k] * signs[l]) as i64;
                        w[idx(n, i, j, k, l)] = self
                            .entry(perm[i], perm[j], perm[k], perm[l])
                            * rat(sgn);
                    }
                }
            }
        }
        Self::from_entries(n, w)
    }
}

/// Intermediate integer array before invariant checking.
struct RawTensor(Vec<i64>);

impl RawTensor {
    fn iter_ints(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }
}

/// Pointwise second-order Schouten data: the Hessian of σ₁(A) and |W|²,
/// tied together by Δσ₁(A) = −|W|²/(12(n−1)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchoutenJet {
    n: usize,
    hess: Vec<Rational>,
    w_norm_sq: Rational,
}

impl SchoutenJet {
    pub fn new(n: usize, hess: Vec<Rational>, w_norm_sq: Rational) -> Self {
        assert_eq!(hess.len(), n * n);
        for a in 0..n {
            for b in 0..n {
                assert_eq!(hess[a * n + b], hess[b * n + a], "Hessian must be symmetric");
            }
        }
        let tr: Rational = (0..n).map(|a| hess[a * n + a].clone()).sum();
        let target = -&w_norm_sq / rat(12 * (n as i64 - 1));
        assert_eq!(tr * rat(2), target * rat(2), "trace(hess) must be −|W|²/(12(n−1))");
        SchoutenJet { n, hess, w_norm_sq }
    }

    /// Deterministic random jet compatible with the given |W|².
    pub fn random(n: usize, seed: u64, w_norm_sq: Rational) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1e7);
        let ni = n as i64;
        let mut hess = vec![rat(0); n * n];
        for a in 0..n {
            for b in a..n {
                let v = rat(rng.gen_range(-9..=9));
                hess[a * n + b] = v.clone();
                hess[b * n + a] = v;
            }
        }
        let tr: Rational = (0..n).map(|a| hess[a * n + a].clone()).sum();
        let shift = (-&w_norm_sq / rat(12 * (ni - 1)) - tr) / rat(ni);
        for a in 0..n {
            hess[a * n + a] += &shift;
        }
        Self::new(n, hess, w_norm_sq)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn w_norm_sq(&self) -> &Rational {
        &self.w_norm_sq
    }

    pub fn hess_entry(&self, a: usize, b: usize) -> &Rational {
        &self.hess[a * self.n + b]
    }

    /// σ₁(A)_{,ij} xⁱxʲ as a degree-2 polynomial.
    pub fn hess_form(&self) -> HomogeneousPoly {
        let n = self.n;
        let mut out = HomogeneousPoly::zero(n, 2);
        for a in 0..n {
            for b in a..n {
                let c = if a == b {
                    self.hess[a * n + b].clone()
                } else {
                    self.hess[a * n + b].clone() * rat(2)
                };
                if !c.is_zero() {
                    let mut e = vec![0u8; n];
                    e[a] += 1;
                    e[b] += 1;
                    out = out.add(&HomogeneousPoly::monomial(n, &e, c));
                }
            }
        }
        out
    }
}

/// The four building blocks of the Green's-function source term: the three
/// harmonic brackets and the pure-radial tail |W|²r⁴.
#[derive(Debug, Clone)]
pub struct BracketForms {
    /// Q − r²V/(n+4) + 3|W|²r⁴/(2(n+4)(n+2)); harmonic of degree 4.
    pub bracket1: HomogeneousPoly,
    /// V − 3|W|²r²/n; harmonic of degree 2.
    pub bracket2: HomogeneousPoly,
    /// hess-form + |W|²r²/(12n(n−1)); harmonic of degree 2.
    pub bracket3: HomogeneousPoly,
    /// |W|²r⁴.
    pub tail: HomogeneousPoly,
}

impl BracketForms {
    /// Degree-4 version of bracket2 (multiplied by r²).
    pub fn bracket2_r2(&self) -> HomogeneousPoly {
        self.bracket2.mul_r2()
    }

    /// Degree-4 version of bracket3 (multiplied by r²).
    pub fn bracket3_r2(&self) -> HomogeneousPoly {
        self.bracket3.mul_r2()
    }
}

/// Assembles the bracket polynomials and verifies their harmonicity; a
/// violation is an invariant bug, so it aborts.
pub fn bracket_polynomials(w: &WeylTensor, jet: &SchoutenJet) -> BracketForms {
    let n = w.dim();
    assert_eq!(jet.dim(), n);
    let ni = n as i64;
    let wsq = w.norm_sq();
    assert_eq!(
        jet.w_norm_sq(),
        &wsq,
        "jet was built for a different |W|²"
    );
    let q = w.quartic_form();
    let v = w.vector_form();
    let r2 = HomogeneousPoly::r_squared(n);
    let r4 = HomogeneousPoly::r_pow(n, 4);

    let bracket1 = q
        .sub(&v.mul_r2().scale(&ratio(1, ni + 4)))
        .add(&r4.scale(&(&wsq * ratio(3, 2 * (ni + 4) * (ni + 2)))));
    let bracket2 = v.sub(&r2.scale(&(&wsq * ratio(3, ni))));
    let bracket3 = jet
        .hess_form()
        .add(&r2.scale(&(&wsq * ratio(1, 12 * ni * (ni - 1)))));
    let tail = r4.scale(&wsq);

    assert!(bracket1.is_harmonic(), "bracket1 must be harmonic");
    assert!(bracket2.is_harmonic(), "bracket2 must be harmonic");
    assert!(bracket3.is_harmonic(), "bracket3 must be harmonic");
    BracketForms {
        bracket1,
        bracket2,
        bracket3,
        tail,
    }
}

/// B_{ij} xⁱxʲ: −2V/(9(n−2)) + |W|²r²/(12(n−2)(n−1)) − (7n−8)/(n−2)·hess-form.
pub fn bach_quadratic(w: &WeylTensor, jet: &SchoutenJet) -> HomogeneousPoly {
    let n = w.dim();
    let ni = n as i64;
    let wsq = w.norm_sq();
    let v = w.vector_form();
    let r2 = HomogeneousPoly::r_squared(n);
    v.scale(&ratio(-2, 9 * (ni - 2)))
        .add(&r2.scale(&(&wsq * ratio(1, 12 * (ni - 2) * (ni - 1)))))
        .add(&jet.hess_form().scale(&-ratio(7 * ni - 8, ni - 2)))
}
