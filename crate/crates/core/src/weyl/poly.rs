use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{content_scale, Rational};

/// Sparse commutative polynomial over the rationals in a fixed number of
/// variables. Exponent vectors are keyed lexicographically; no zero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// Graded-lex comparison of exponent vectors: total degree first, then the
/// first differing exponent (larger is bigger).
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Vec<u32>, Rational> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), v * c))
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add_term(ne, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division is not exact.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dlm, dlc) = divisor.leading().expect("division by the zero polynomial");
        let (dlm, dlc) = (dlm.clone(), dlc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((lm, lc)) = rem.leading() {
            if lm.iter().zip(&dlm).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = lm.iter().zip(&dlm).map(|(a, b)| a - b).collect();
            let qc = lc / &dlc;
            rem = &rem - &divisor.mul_monomial(&qe, &qc);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Appends `extra` variables (with exponent zero) at the end.
    pub fn extend(&self, extra: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = e.clone();
                ne.extend(std::iter::repeat(0).take(extra));
                (ne, c.clone())
            })
            .collect();
        Poly { nvars: self.nvars + extra, terms }
    }

    /// Substitutes `value` for the last variable and drops it.
    pub fn specialize_last(&self, value: &Rational) -> Self {
        let n = self.nvars - 1;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let k = e[n] as i32;
            out.add_term(e[..n].to_vec(), c * crate::arith::pow(value, k as u32));
        }
        out
    }

    /// Drops the trailing variables, which must not occur.
    pub fn truncate_vars(&self, n: usize) -> Option<Self> {
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            if e[n..].iter().any(|&x| x != 0) {
                return None;
            }
            out.add_term(e[..n].to_vec(), c.clone());
        }
        Some(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= crate::arith::pow(x, k);
            }
            acc += t;
        }
        acc
    }

    /// Scales to integer coefficients with content one and positive leading
    /// coefficient (graded lex).
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut scale = content_scale(self.terms.values());
        if self.leading().expect("nonzero").1.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    /// Canonical text: terms in descending graded-lex order, each written as
    /// `c*v1^e1*v2^e2`, joined by ` + `.
    pub fn canonical_string(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        terms
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, name)| format!("{name}^{k}"))
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
}

/// Exponent vectors in `n` variables of total degree at most `bound`, in
/// ascending graded-lex order.
pub fn monomials_up_to(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=(bound - used) {
                let mut nm: Vec<u32> = m.clone();
                nm.push(e);
                next.push(nm);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| grlex_cmp(a, b));
    out
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        return vec![prefix.to_string()];
    }
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string(&default_names("x", self.nvars)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn cusp() -> Poly {
        &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3)
    }

    #[test]
    fn exact_division() {
        let f = cusp();
        let g = &f * &(&Poly::var(2, 0) + &Poly::one(2));
        assert_eq!(g.div_exact(&f).unwrap(), &Poly::var(2, 0) + &Poly::one(2));
        assert!((&g + &Poly::one(2)).div_exact(&f).is_none());
    }

    #[test]
    fn canonical_text() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(cusp().canonical_string(&names), "1*y^3 + 1*x^2");
        assert_eq!(cusp().scale(&int(-2)).primitive(), cusp());
    }
}
