//! Actions of the Weyl algebra on twisted fractions `g f^(-m) f^(-alpha)` and on
//! `g(x,s) f^(-m) f^(s+gamma)`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::{Poly, WeylElement};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// A divisor `f` with its partial derivatives, shared by all fraction computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionContext {
    f: Poly,
    df: Vec<Poly>,
    // f and its partials with one extra trailing variable standing for s
    fs: Poly,
    dfs: Vec<Poly>,
}

impl FractionContext {
    pub fn new(f: Poly) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidInput("the divisor must be nonzero".into()));
        }
        let n = f.nvars();
        let df: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
        let fs = f.extend(1);
        let dfs = df.iter().map(|p| p.extend(1)).collect();
        Ok(FractionContext { f, df, fs, dfs })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn df(&self) -> &[Poly] {
        &self.df
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    /// `numerator f^(-pole) f^(-twist)` with common factors of `f` cancelled.
    pub fn fraction(&self, numerator: Poly, pole: u32, twist: Rational) -> FractionElement {
        let (numerator, pole) = cancel(&self.f, numerator, pole);
        FractionElement { numerator, pole, twist }
    }

    /// `f^(-1-alpha)` written as `1 * f^(-1) * f^(-alpha)`.
    pub fn unit(&self, alpha: &Rational) -> FractionElement {
        self.fraction(Poly::one(self.nvars()), 1, alpha.clone())
    }

    /// Rewrites `u` with pole exactly `level` (numerator multiplied by a power of f).
    pub fn at_pole(&self, u: &FractionElement, level: u32) -> Result<Poly> {
        if u.pole > level {
            return Err(Error::PoleExceeded { pole: u.pole, level });
        }
        Ok(&u.numerator * &self.f.pow(level - u.pole))
    }

    /// Sum of fractions sharing a twist.
    pub fn sum(&self, items: &[FractionElement], twist: &Rational) -> FractionElement {
        let level = items.iter().map(|u| u.pole).max().unwrap_or(0);
        let mut num = Poly::zero(self.nvars());
        for u in items {
            assert_eq!(&u.twist, twist, "twist mismatch");
            num = &num + &self.at_pole(u, level).expect("level is the maximum");
        }
        self.fraction(num, level, twist.clone())
    }

    /// Applies a plain differential operator (no `s`, no `t`).
    pub fn act_on_fraction(&self, op: &WeylElement, u: &FractionElement) -> Result<FractionElement> {
        let sig = op.signature();
        if sig.n != self.nvars() {
            return Err(Error::SignatureMismatch(format!("operator in {} variables, divisor in {}", sig.n, self.nvars())));
        }
        if op.involves_slot(sig.s()) || (sig.has_t && (op.involves_slot(sig.t()) || op.involves_slot(sig.dt()))) {
            return Err(Error::InvalidInput("act_on_fraction needs an operator without s and t".into()));
        }
        let n = sig.n;
        let mut memo: HashMap<Vec<u32>, (Poly, u32)> = HashMap::new();
        memo.insert(vec![0; n], (u.numerator.clone(), u.pole));
        let mut parts: Vec<(Poly, u32)> = Vec::new();
        for (m, c) in op.terms() {
            let b = m.0[n..2 * n].to_vec();
            let (g, p) = self.derivative_chain(&mut memo, &b, &u.twist).clone();
            parts.push((g.mul_monomial(&m.0[..n], c), p));
        }
        let level = parts.iter().map(|(_, p)| *p).max().unwrap_or(0);
        let mut num = Poly::zero(n);
        for (g, p) in parts {
            num = &num + &(&g * &self.f.pow(level - p));
        }
        Ok(self.fraction(num, level, u.twist.clone()))
    }

    /// `d^b` applied to the memo seed, filling intermediate multi-indices.
    fn derivative_chain<'a>(&self, memo: &'a mut HashMap<Vec<u32>, (Poly, u32)>, b: &[u32], twist: &Rational) -> &'a (Poly, u32) {
        if !memo.contains_key(b) {
            let i = b.iter().position(|&e| e > 0).expect("seed is present");
            let mut prev = b.to_vec();
            prev[i] -= 1;
            let (g, p) = self.derivative_chain(memo, &prev, twist).clone();
            // d_i (g f^(-p-a)) = (d_i g * f - (p + a) g d_i f) f^(-p-1-a)
            let coef = Rational::from_integer(BigInt::from(p)) + twist;
            let num = &(&g.derivative(i) * &self.f) - &(&g * &self.df[i]).scale(&coef);
            let (num, pole) = cancel(&self.f, num, p + 1);
            memo.insert(b.to_vec(), (num, pole));
        }
        &memo[b]
    }

    /// Applies an operator of `D[s]` to `f^(s+gamma)`.
    pub fn act_on_fs(&self, op: &WeylElement, gamma: &Rational) -> Result<SPolyFrac> {
        let seed = SPolyFrac { numerator: Poly::one(self.nvars() + 1), pole: 0, shift: gamma.clone() };
        self.act_on_spoly(op, &seed)
    }

    /// Applies an operator of `D[s]` to `g(x,s) f^(-m) f^(s+gamma)`.
    pub fn act_on_spoly(&self, op: &WeylElement, u: &SPolyFrac) -> Result<SPolyFrac> {
        let sig = op.signature();
        if sig.n != self.nvars() {
            return Err(Error::SignatureMismatch(format!("operator in {} variables, divisor in {}", sig.n, self.nvars())));
        }
        if sig.has_t && (op.involves_slot(sig.t()) || op.involves_slot(sig.dt())) {
            return Err(Error::InvalidInput("act_on_fs needs an operator without t".into()));
        }
        let n = sig.n;
        let mut memo: HashMap<Vec<u32>, (Poly, u32)> = HashMap::new();
        memo.insert(vec![0; n], (u.numerator.clone(), u.pole));
        let mut parts: Vec<(Poly, u32)> = Vec::new();
        for (m, c) in op.terms() {
            let b = m.0[n..2 * n].to_vec();
            let (g, p) = self.s_derivative_chain(&mut memo, &b, &u.shift).clone();
            let mut mono = m.0[..n].to_vec();
            mono.push(m.0[sig.s()]);
            parts.push((g.mul_monomial(&mono, c), p));
        }
        let level = parts.iter().map(|(_, p)| *p).max().unwrap_or(0);
        let mut num = Poly::zero(n + 1);
        for (g, p) in parts {
            num = &num + &(&g * &self.fs.pow(level - p));
        }
        let (numerator, pole) = cancel(&self.fs, num, level);
        Ok(SPolyFrac { numerator, pole, shift: u.shift.clone() })
    }

    fn s_derivative_chain<'a>(&self, memo: &'a mut HashMap<Vec<u32>, (Poly, u32)>, b: &[u32], gamma: &Rational) -> &'a (Poly, u32) {
        if !memo.contains_key(b) {
            let i = b.iter().position(|&e| e > 0).expect("seed is present");
            let mut prev = b.to_vec();
            prev[i] -= 1;
            let (g, p) = self.s_derivative_chain(memo, &prev, gamma).clone();
            // d_i (g f^(s+gamma-p)) = (d_i g * f + (s + gamma - p) g d_i f) f^(s+gamma-p-1)
            let n = self.nvars();
            let mut factor = Poly::var(n + 1, n);
            factor.add_term(vec![0; n + 1], gamma - Rational::from_integer(BigInt::from(p)));
            let num = &(&g.derivative(i) * &self.fs) + &(&(&g * &self.dfs[i]) * &factor);
            let (num, pole) = cancel(&self.fs, num, p + 1);
            memo.insert(b.to_vec(), (num, pole));
        }
        &memo[b]
    }
}

fn cancel(f: &Poly, mut numerator: Poly, mut pole: u32) -> (Poly, u32) {
    if numerator.is_zero() {
        return (numerator, 0);
    }
    while pole > 0 {
        match numerator.div_exact(f) {
            Some(q) => {
                numerator = q;
                pole -= 1;
            }
            None => break,
        }
    }
    (numerator, pole)
}

/// `numerator * f^(-pole) * f^(-twist)` in canonical form: when `pole > 0`,
/// `f` does not divide the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FractionElement {
    pub numerator: Poly,
    pub pole: u32,
    pub twist: Rational,
}

impl FractionElement {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn display(&self, names: &[String]) -> String {
        format!("({})*f^(-{})*f^(-{})", self.numerator.canonical_string(names), self.pole, self.twist)
    }
}

/// `numerator(x, s) * f^(-pole) * f^(s + shift)`; the numerator carries `s`
/// as its last variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SPolyFrac {
    pub numerator: Poly,
    pub pole: u32,
    pub shift: Rational,
}

impl SPolyFrac {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Rewrites with a different shift differing by an integer, then cancels.
    pub fn rebase(&self, ctx: &FractionContext, shift: &Rational) -> Result<SPolyFrac> {
        let d = &self.shift - shift;
        if !d.is_integer() {
            return Err(Error::InvalidInput("shifts must differ by an integer".into()));
        }
        let d: i64 = d.to_integer().try_into().map_err(|_| Error::InvalidInput("shift too large".into()))?;
        // g f^(-p) f^(s+shift+d) = g f^(d-p) f^(s+shift)
        let e = d - self.pole as i64;
        let (num, pole) = if e >= 0 {
            (&self.numerator * &ctx.fs.pow(e as u32), 0)
        } else {
            (self.numerator.clone(), (-e) as u32)
        };
        let (numerator, pole) = cancel(&ctx.fs, num, pole);
        Ok(SPolyFrac { numerator, pole, shift: shift.clone() })
    }

    /// True iff this equals `b(s) f^(s+shift)`.
    pub fn equals_s_poly_times(&self, ctx: &FractionContext, b: &crate::arith::UniPoly, shift: &Rational) -> Result<bool> {
        let me = self.rebase(ctx, shift)?;
        let n = ctx.nvars();
        let mut target = Poly::zero(n + 1);
        for (k, c) in b.coeffs().iter().enumerate() {
            let mut e = vec![0; n + 1];
            e[n] = k as u32;
            target.add_term(e, c.clone());
        }
        Ok(me.pole == 0 && me.numerator == target)
    }

    /// Substitutes `s = value` and writes the result with twist `twist`;
    /// `value + shift + twist` must be an integer.
    pub fn specialize(&self, ctx: &FractionContext, value: &Rational, twist: &Rational) -> Result<FractionElement> {
        let d = value + &self.shift + twist;
        if !d.is_integer() {
            return Err(Error::InvalidInput("specialization does not land in the requested twist".into()));
        }
        let d: i64 = d.to_integer().try_into().map_err(|_| Error::InvalidInput("exponent too large".into()))?;
        let g = self.numerator.specialize_last(value);
        let e = d - self.pole as i64;
        if e >= 0 {
            Ok(ctx.fraction(&g * &ctx.f.pow(e as u32), 0, twist.clone()))
        } else {
            Ok(ctx.fraction(g, (-e) as u32, twist.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::AlgebraSignature;
    use crate::arith::{int, rat, UniPoly};

    fn x1() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn chain_rule_on_fs() {
        let ctx = FractionContext::new(x1()).unwrap();
        let sig = AlgebraSignature::with_s(1);
        let r = ctx.act_on_fs(&WeylElement::d(sig, 0), &int(0)).unwrap();
        assert_eq!(r.pole, 1);
        assert_eq!(r.numerator, Poly::var(2, 1));
    }

    #[test]
    fn annihilator_of_shifted_power() {
        let ctx = FractionContext::new(x1()).unwrap();
        let sig = AlgebraSignature::with_s(1);
        let op = &(&WeylElement::x(sig, 0) * &WeylElement::d(sig, 0)) - &(&WeylElement::s(sig) - &WeylElement::one(sig));
        assert!(ctx.act_on_fs(&op, &int(-1)).unwrap().is_zero());
    }

    #[test]
    fn node_functional_equation() {
        let f = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(2);
        let ctx = FractionContext::new(f).unwrap();
        let sig = AlgebraSignature::with_s(2);
        let op = (&WeylElement::d(sig, 0).pow(2) + &WeylElement::d(sig, 1).pow(2)).scale(&rat(1, 4));
        let r = ctx.act_on_fs(&op, &int(1)).unwrap();
        assert!(r.equals_s_poly_times(&ctx, &UniPoly::linear(int(1)).pow(2), &int(0)).unwrap());
    }

    #[test]
    fn power_rule_on_fraction() {
        let ctx = FractionContext::new(x1()).unwrap();
        let sig = AlgebraSignature::plain(1);
        let u = ctx.fraction(Poly::one(1), 1, rat(1, 2));
        let r = ctx.act_on_fraction(&WeylElement::d(sig, 0), &u).unwrap();
        assert_eq!(r, ctx.fraction(Poly::constant(1, rat(-3, 2)), 2, rat(1, 2)));
        let same = ctx.act_on_fraction(&WeylElement::one(sig), &u).unwrap();
        assert_eq!(same, u);
    }

    #[test]
    fn cancellation_on_construction() {
        let f = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3);
        let ctx = FractionContext::new(f.clone()).unwrap();
        let u = ctx.fraction(&f * &Poly::var(2, 0), 2, int(0));
        assert_eq!(u.pole, 1);
        assert_eq!(u.numerator, Poly::var(2, 0));
    }
}
