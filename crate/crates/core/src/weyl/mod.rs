//! The rational Weyl algebra `Q[x_1..x_n]<d_1..d_n>`, optionally extended by a
//! central parameter `s` and by the pair `(t, dt)`, together with its actions
//! on twisted powers of a polynomial.

mod action;
mod poly;

pub use action::{FractionContext, FractionElement, SPolyFrac};
pub use poly::{default_names, grlex_cmp, monomials_up_to, Poly};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{content_scale, Rational, UniPoly};
use crate::error::{Error, Result};

/// Which generators an algebra has. Monomials always carry `2n + 3` exponent
/// slots laid out as `x_1..x_n, d_1..d_n, s, t, dt`; absent generators keep
/// exponent zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraSignature {
    pub n: usize,
    pub has_s: bool,
    pub has_t: bool,
}

impl AlgebraSignature {
    pub fn plain(n: usize) -> Self {
        assert!(n >= 1);
        AlgebraSignature { n, has_s: false, has_t: false }
    }

    pub fn with_s(n: usize) -> Self {
        AlgebraSignature { n, has_s: true, has_t: false }
    }

    pub fn with_t(n: usize) -> Self {
        AlgebraSignature { n, has_s: false, has_t: true }
    }

    pub fn slots(&self) -> usize {
        2 * self.n + 3
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn d(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn s(&self) -> usize {
        2 * self.n
    }

    pub fn t(&self) -> usize {
        2 * self.n + 1
    }

    pub fn dt(&self) -> usize {
        2 * self.n + 2
    }

    /// Slots that may carry nonzero exponents.
    pub fn active_slots(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..2 * self.n).collect();
        if self.has_s {
            out.push(self.s());
        }
        if self.has_t {
            out.push(self.t());
            out.push(self.dt());
        }
        out
    }
}

/// Normal-ordered monomial `x^a d^b s^c t^d dt^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylMonomial(pub Vec<u32>);

impl WeylMonomial {
    pub fn one(sig: &AlgebraSignature) -> Self {
        WeylMonomial(vec![0; sig.slots()])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn divides(&self, other: &WeylMonomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn quotient(&self, divisor: &WeylMonomial) -> WeylMonomial {
        WeylMonomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &WeylMonomial) -> WeylMonomial {
        WeylMonomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of x-derivatives plus the power of `s`.
    pub fn sharp_weight(&self, sig: &AlgebraSignature) -> u32 {
        (0..sig.n).map(|i| self.0[sig.d(i)]).sum::<u32>() + self.0[sig.s()]
    }

    /// Order in all derivatives, `dt` included.
    pub fn differential_order(&self, sig: &AlgebraSignature) -> u32 {
        (0..sig.n).map(|i| self.0[sig.d(i)]).sum::<u32>() + self.0[sig.dt()]
    }

    /// `t`-exponent minus `dt`-exponent.
    pub fn v_weight(&self, sig: &AlgebraSignature) -> i64 {
        self.0[sig.t()] as i64 - self.0[sig.dt()] as i64
    }
}

fn falling(p: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(p - j))
}

fn binomial(n: u32, k: u32) -> BigInt {
    falling(n, k) / falling(k, k)
}

/// Expands `m1 * m2` into normal order using `[d_i, x_i] = 1` and `[dt, t] = 1`.
pub fn monomial_product(sig: &AlgebraSignature, m1: &WeylMonomial, m2: &WeylMonomial) -> Vec<(WeylMonomial, BigInt)> {
    let mut pairs: Vec<(usize, usize)> = (0..sig.n).map(|i| (sig.x(i), sig.d(i))).collect();
    pairs.push((sig.t(), sig.dt()));

    let mut base = vec![0u32; sig.slots()];
    base[sig.s()] = m1.0[sig.s()] + m2.0[sig.s()];
    let mut acc: Vec<(Vec<u32>, BigInt)> = vec![(base, BigInt::one())];
    for (xs, ds) in pairs {
        let (p, q) = (m1.0[xs], m1.0[ds]);
        let (p2, q2) = (m2.0[xs], m2.0[ds]);
        // d^q x^p2 = sum_k C(q,k) p2^(k falling) x^(p2-k) d^(q-k)
        let kmax = q.min(p2);
        if kmax == 0 {
            for (e, _) in acc.iter_mut() {
                e[xs] = p + p2;
                e[ds] = q + q2;
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * (kmax as usize + 1));
        for (e, c) in &acc {
            for k in 0..=kmax {
                let mut ne = e.clone();
                ne[xs] = p + p2 - k;
                ne[ds] = q + q2 - k;
                next.push((ne, c * binomial(q, k) * falling(p2, k)));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(e, c)| (WeylMonomial(e), c)).collect()
}

/// Element of the Weyl algebra over the rationals: a finite combination of
/// normal-ordered monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    sig: AlgebraSignature,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylElement {
    pub fn zero(sig: AlgebraSignature) -> Self {
        WeylElement { sig, terms: BTreeMap::new() }
    }

    pub fn constant(sig: AlgebraSignature, c: Rational) -> Self {
        Self::from_monomial(sig, WeylMonomial::one(&sig), c)
    }

    pub fn one(sig: AlgebraSignature) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn from_monomial(sig: AlgebraSignature, m: WeylMonomial, c: Rational) -> Self {
        let mut e = Self::zero(sig);
        e.add_term(m, c);
        e
    }

    fn generator(sig: AlgebraSignature, slot: usize) -> Self {
        let mut m = WeylMonomial::one(&sig);
        m.0[slot] = 1;
        Self::from_monomial(sig, m, Rational::one())
    }

    pub fn x(sig: AlgebraSignature, i: usize) -> Self {
        Self::generator(sig, sig.x(i))
    }

    pub fn d(sig: AlgebraSignature, i: usize) -> Self {
        Self::generator(sig, sig.d(i))
    }

    pub fn s(sig: AlgebraSignature) -> Self {
        assert!(sig.has_s);
        Self::generator(sig, sig.s())
    }

    pub fn t(sig: AlgebraSignature) -> Self {
        assert!(sig.has_t);
        Self::generator(sig, sig.t())
    }

    pub fn dt(sig: AlgebraSignature) -> Self {
        assert!(sig.has_t);
        Self::generator(sig, sig.dt())
    }

    /// Embeds a polynomial in `x` as a multiplication operator.
    pub fn from_poly(sig: AlgebraSignature, p: &Poly) -> Self {
        assert_eq!(p.nvars(), sig.n);
        let mut e = Self::zero(sig);
        for (exps, c) in p.terms() {
            let mut m = WeylMonomial::one(&sig);
            m.0[..sig.n].copy_from_slice(exps);
            e.add_term(m, c.clone());
        }
        e
    }

    /// Embeds a polynomial in `s`.
    pub fn from_s_poly(sig: AlgebraSignature, p: &UniPoly) -> Self {
        assert!(sig.has_s || p.degree().unwrap_or(0) == 0);
        let mut e = Self::zero(sig);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut m = WeylMonomial::one(&sig);
            m.0[sig.s()] = k as u32;
            e.add_term(m, c.clone());
        }
        e
    }

    /// Embeds a vector field `sum a_i d_i`.
    pub fn vector_field(sig: AlgebraSignature, coeffs: &[Poly]) -> Self {
        let mut e = Self::zero(sig);
        for (i, a) in coeffs.iter().enumerate() {
            e = &e + &(&Self::from_poly(sig, a) * &Self::d(sig, i));
        }
        e
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn terms(&self) -> &BTreeMap<WeylMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &WeylMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &Rational, other: &WeylElement) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), factor * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig);
        }
        WeylElement { sig: self.sig, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Product with the signatures checked.
    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &WeylElement) -> WeylElement {
        let mut out = Self::zero(self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, k) in monomial_product(&self.sig, m1, m2) {
                    out.add_term(m, &c * Rational::from_integer(k));
                }
            }
        }
        out
    }

    /// `c * m * self` for a monomial `m`.
    pub fn left_mul_monomial(&self, m: &WeylMonomial, c: &Rational) -> WeylElement {
        let mut out = Self::zero(self.sig);
        for (m2, c2) in &self.terms {
            let cc = c * c2;
            for (mm, k) in monomial_product(&self.sig, m, m2) {
                out.add_term(mm, &cc * Rational::from_integer(k));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> WeylElement {
        let mut acc = Self::one(self.sig);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Total order filtration degree: derivatives plus powers of `s`.
    pub fn sharp_order(&self) -> Result<u32> {
        if self.sig.has_t {
            return Err(Error::InvalidInput("sharp_order on a signature with t".into()));
        }
        self.terms
            .keys()
            .map(|m| m.sharp_weight(&self.sig))
            .max()
            .ok_or_else(|| Error::InvalidInput("sharp_order of the zero element".into()))
    }

    /// Order in `d_1..d_n, dt`; `None` for zero.
    pub fn differential_order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.differential_order(&self.sig)).max()
    }

    /// Smallest V-weight of a term (`t` counts +1, `dt` counts -1).
    pub fn v_order(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.v_weight(&self.sig)).min()
    }

    pub fn involves_slot(&self, slot: usize) -> bool {
        self.terms.keys().any(|m| m.0[slot] > 0)
    }

    /// Substitutes the rational `value` for `s`, landing in the algebra without `s`.
    pub fn substitute_s(&self, value: &Rational) -> WeylElement {
        let sig = AlgebraSignature { has_s: false, ..self.sig };
        let mut out = Self::zero(sig);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let k = nm.0[self.sig.s()];
            nm.0[self.sig.s()] = 0;
            out.add_term(nm, c * crate::arith::pow(value, k));
        }
        out
    }

    /// Applies the automorphism `s -> s + shift`.
    pub fn shift_s(&self, shift: &Rational) -> WeylElement {
        let sslot = self.sig.s();
        let mut out = Self::zero(self.sig);
        for (m, c) in &self.terms {
            let k = m.0[sslot];
            // (s + shift)^k
            let binom = UniPoly::linear(shift.clone()).pow(k);
            for (j, bc) in binom.coeffs().iter().enumerate() {
                let mut nm = m.clone();
                nm.0[sslot] = j as u32;
                out.add_term(nm, c * bc);
            }
        }
        out
    }

    /// Re-embeds into a larger signature (same `n`).
    pub fn embed(&self, sig: AlgebraSignature) -> WeylElement {
        assert_eq!(sig.n, self.sig.n);
        assert!(sig.has_s || !self.involves_slot(self.sig.s()));
        assert!(sig.has_t || !(self.involves_slot(self.sig.t()) || self.involves_slot(self.sig.dt())));
        WeylElement { sig, terms: self.terms.clone() }
    }

    /// The `x`-polynomial, if the element involves no other generator.
    pub fn as_poly(&self) -> Option<Poly> {
        let n = self.sig.n;
        let mut p = Poly::zero(n);
        for (m, c) in &self.terms {
            if m.0[n..].iter().any(|&e| e > 0) {
                return None;
            }
            p.add_term(m.0[..n].to_vec(), c.clone());
        }
        Some(p)
    }

    /// The `s`-polynomial, if the element involves only `s`.
    pub fn as_s_poly(&self) -> Option<UniPoly> {
        let sslot = self.sig.s();
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != sslot && e > 0) {
                return None;
            }
            let k = m.0[sslot] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Scale factor making the coefficients coprime integers.
    pub fn content_scale(&self) -> Rational {
        content_scale(self.terms.values())
    }

    /// Canonical text using the given x-variable names. Terms are sorted by
    /// descending graded lex over the slot layout; every exponent is written.
    pub fn canonical_string(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let slot_names = slot_names(&self.sig, names);
        let mut terms: Vec<(&WeylMonomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0 .0, &a.0 .0));
        terms
            .into_iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .0
                    .iter()
                    .zip(&slot_names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, name)| format!("{name}^{e}"))
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn leading_sign_negative(&self, lead: &WeylMonomial) -> bool {
        self.terms.get(lead).is_some_and(|c| c.is_negative())
    }
}

pub fn slot_names(sig: &AlgebraSignature, names: &[String]) -> Vec<String> {
    assert_eq!(names.len(), sig.n);
    let mut out: Vec<String> = names.to_vec();
    out.extend(names.iter().map(|v| format!("d{v}")));
    out.push("s".into());
    out.push("t".into());
    out.push("dt".into());
    out
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string(&default_names("x", self.sig.n)))
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Rational::one())
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        self.mul_unchecked(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn defining_relation() {
        let sig = AlgebraSignature::plain(1);
        let (x, d) = (WeylElement::x(sig, 0), WeylElement::d(sig, 0));
        assert_eq!(&d * &x, &(&x * &d) + &WeylElement::one(sig));
    }

    #[test]
    fn second_order_leibniz() {
        let sig = AlgebraSignature::plain(1);
        let (x, d) = (WeylElement::x(sig, 0), WeylElement::d(sig, 0));
        let lhs = &d.pow(2) * &x.pow(2);
        let mut rhs = &x.pow(2) * &d.pow(2);
        rhs.add_scaled(&int(4), &(&x * &d));
        rhs.add_scaled(&int(2), &WeylElement::one(sig));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn s_is_central() {
        let sig = AlgebraSignature::with_s(1);
        let xd = &WeylElement::x(sig, 0) * &WeylElement::d(sig, 0);
        let s = WeylElement::s(sig);
        assert_eq!(&s * &xd, &xd * &s);
        assert_eq!((&s * &xd).len(), 1);
    }

    #[test]
    fn t_pair_relation() {
        let sig = AlgebraSignature::with_t(1);
        let (t, dt) = (WeylElement::t(sig), WeylElement::dt(sig));
        assert_eq!(&(&dt * &t) - &(&t * &dt), WeylElement::one(sig));
        assert_eq!((&t * &dt).v_order(), Some(0));
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let a = WeylElement::one(AlgebraSignature::plain(1));
        let b = WeylElement::one(AlgebraSignature::with_s(1));
        assert!(matches!(a.mul(&b), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn sharp_orders() {
        let sig = AlgebraSignature::with_s(2);
        let x = WeylElement::x(sig, 0);
        assert_eq!(x.pow(3).sharp_order().unwrap(), 0);
        let p = &(&x * &WeylElement::d(sig, 0).pow(2)) * &WeylElement::s(sig).pow(3);
        assert_eq!(p.sharp_order().unwrap(), 5);
        let mut e = &(&x * &WeylElement::d(sig, 0)).scale(&rat(1, 2)) + &(&WeylElement::x(sig, 1) * &WeylElement::d(sig, 1)).scale(&rat(1, 3));
        e = &e - &WeylElement::s(sig);
        assert_eq!(e.sharp_order().unwrap(), 1);
        assert!(WeylElement::zero(sig).sharp_order().is_err());
    }

    #[test]
    fn canonical_text_is_sorted() {
        let sig = AlgebraSignature::with_s(1);
        let names = vec!["x1".to_string()];
        let p = &(&WeylElement::x(sig, 0).pow(2) * &WeylElement::d(sig, 0).pow(3)) * &WeylElement::s(sig);
        let q = &p - &WeylElement::constant(sig, rat(1, 2));
        assert_eq!(q.canonical_string(&names), "1*x1^2*dx1^3*s^1 + -1/2");
    }

    #[test]
    fn s_shift_and_substitution() {
        let sig = AlgebraSignature::with_s(1);
        let p = &(&WeylElement::x(sig, 0) * &WeylElement::d(sig, 0)) - &WeylElement::s(sig);
        let shifted = p.shift_s(&int(-1));
        assert_eq!(shifted.substitute_s(&int(0)), p.substitute_s(&int(-1)));
    }
}
