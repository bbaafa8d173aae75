use num_bigint::BigInt;
use num_traits::One;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::weyl::{AlgebraSignature, FractionContext, FractionElement, Poly, WeylElement};

/// `f` and `alpha` for the graph module of `f^(-alpha)`.
#[derive(Clone, Debug)]
pub struct GraphContext {
    pub ctx: FractionContext,
    pub alpha: Rational,
}

impl GraphContext {
    pub fn new(f: Poly, alpha: Rational) -> Result<Self> {
        Ok(GraphContext { ctx: FractionContext::new(f)?, alpha })
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn zero(&self) -> GraphElement {
        GraphElement { coeffs: Vec::new() }
    }

    /// `f^(-1-alpha)` at index 0.
    pub fn unit(&self) -> GraphElement {
        GraphElement { coeffs: vec![self.ctx.unit(&self.alpha)] }
    }

    pub fn element(&self, coeffs: Vec<FractionElement>) -> GraphElement {
        let mut g = GraphElement { coeffs };
        g.trim();
        g
    }

    fn frac_zero(&self) -> FractionElement {
        self.ctx.fraction(Poly::zero(self.nvars()), 0, self.alpha.clone())
    }

    fn add_at(&self, out: &mut Vec<FractionElement>, i: usize, u: FractionElement) {
        while out.len() <= i {
            out.push(self.frac_zero());
        }
        out[i] = self.ctx.sum(&[out[i].clone(), u], &self.alpha);
    }

    pub fn add(&self, a: &GraphElement, b: &GraphElement) -> GraphElement {
        let mut out = a.coeffs.clone();
        for (i, u) in b.coeffs.iter().enumerate() {
            self.add_at(&mut out, i, u.clone());
        }
        self.element(out)
    }

    pub fn scale(&self, a: &GraphElement, c: &Rational) -> GraphElement {
        let coeffs = a
            .coeffs
            .iter()
            .map(|u| self.ctx.fraction(u.numerator.scale(c), u.pole, self.alpha.clone()))
            .collect();
        self.element(coeffs)
    }

    pub fn mul_x(&self, a: &GraphElement, j: usize) -> GraphElement {
        let n = self.nvars();
        let x = Poly::var(n, j);
        let coeffs = a.coeffs.iter().map(|u| self.ctx.fraction(&u.numerator * &x, u.pole, self.alpha.clone())).collect();
        self.element(coeffs)
    }

    pub fn mul_poly(&self, a: &GraphElement, p: &Poly) -> GraphElement {
        let coeffs = a.coeffs.iter().map(|u| self.ctx.fraction(&u.numerator * p, u.pole, self.alpha.clone())).collect();
        self.element(coeffs)
    }

    pub fn apply_dt(&self, a: &GraphElement) -> GraphElement {
        if a.is_zero() {
            return a.clone();
        }
        let mut coeffs = vec![self.frac_zero()];
        coeffs.extend(a.coeffs.iter().cloned());
        self.element(coeffs)
    }

    /// `t (u dt^i) = f u dt^i - i u dt^(i-1)`.
    pub fn apply_t(&self, a: &GraphElement) -> GraphElement {
        let mut out = Vec::new();
        let f = self.ctx.f();
        for (i, u) in a.coeffs.iter().enumerate() {
            self.add_at(&mut out, i, self.ctx.fraction(&u.numerator * f, u.pole, self.alpha.clone()));
            if i > 0 {
                let c = Rational::from_integer(BigInt::from(i));
                self.add_at(&mut out, i - 1, self.ctx.fraction(u.numerator.scale(&-c), u.pole, self.alpha.clone()));
            }
        }
        self.element(out)
    }

    /// `theta = dt t`.
    pub fn apply_theta(&self, a: &GraphElement) -> GraphElement {
        self.apply_dt(&self.apply_t(a))
    }

    /// `d_j (u dt^i) = (d_j u) dt^i - (d_j f) u dt^(i+1)`.
    pub fn apply_d(&self, a: &GraphElement, j: usize) -> Result<GraphElement> {
        let sig = AlgebraSignature::plain(self.nvars());
        let dj = WeylElement::d(sig, j);
        let mut out = Vec::new();
        let dfj = &self.ctx.df()[j];
        for (i, u) in a.coeffs.iter().enumerate() {
            self.add_at(&mut out, i, self.ctx.act_on_fraction(&dj, u)?);
            self.add_at(&mut out, i + 1, self.ctx.fraction(-&(&u.numerator * dfj), u.pole, self.alpha.clone()));
        }
        Ok(self.element(out))
    }
}

/// `sum_i u_i dt^i` with every `u_i` of twist `alpha`; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphElement {
    pub coeffs: Vec<FractionElement>,
}

impl GraphElement {
    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|u| u.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest `dt` index carrying a nonzero coefficient.
    pub fn dt_order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_pole(&self) -> u32 {
        self.coeffs.iter().map(|u| u.pole).max().unwrap_or(0)
    }
}

/// Action of an operator in `x, d, s, t, dt` on the graph module. Monomials are
/// normal ordered `x^a d^b s^c t^p dt^q` and applied right to left, with `s`
/// acting as `-dt t` at its position.
pub fn graph_act(g: &GraphContext, op: &WeylElement, u: &GraphElement) -> Result<GraphElement> {
    let sig = op.signature();
    let n = g.nvars();
    if sig.n != n {
        return Err(Error::SignatureMismatch(format!("operator in {} variables, module in {}", sig.n, n)));
    }
    let mut total = g.zero();
    for (m, c) in op.terms() {
        let e = &m.0;
        let mut v = u.clone();
        if sig.has_t {
            for _ in 0..e[sig.dt()] {
                v = g.apply_dt(&v);
            }
            for _ in 0..e[sig.t()] {
                v = g.apply_t(&v);
            }
        }
        for _ in 0..e[sig.s()] {
            v = g.scale(&g.apply_theta(&v), &-Rational::one());
        }
        for j in 0..n {
            for _ in 0..e[sig.d(j)] {
                v = g.apply_d(&v, j)?;
            }
        }
        let mono: Vec<u32> = e[..n].to_vec();
        v = g.mul_poly(&v, &Poly::monomial(n, mono, c.clone()));
        total = g.add(&total, &v);
    }
    Ok(total)
}

/// `p(theta + shift)` applied to `u`, by Horner's rule.
pub fn apply_theta_poly(g: &GraphContext, p: &crate::arith::UniPoly, shift: &Rational, u: &GraphElement) -> GraphElement {
    let coeffs = p.coeffs();
    let mut acc = g.zero();
    for c in coeffs.iter().rev() {
        let shifted = g.add(&g.apply_theta(&acc), &g.scale(&acc, shift));
        acc = g.add(&shifted, &g.scale(u, c));
    }
    acc
}

/// Checks the graph relations on the unit element: `(t - f) u = 0`,
/// `[dt, t] u = u`, and `(d_j + (d_j f) dt) u` is the plain derivative of the
/// coefficient at index 0 (zero exactly when `u` is the delta at `alpha = 0`).
pub fn unit_relations_hold(g: &GraphContext) -> Result<bool> {
    let u = g.unit();
    let f = g.ctx.f();
    let tu = g.apply_t(&u);
    let fu = g.mul_poly(&u, f);
    if g.add(&tu, &g.scale(&fu, &-Rational::one())) != g.zero() {
        return Ok(false);
    }
    for j in 0..g.nvars() {
        let a = g.apply_d(&u, j)?;
        let b = g.mul_poly(&g.apply_dt(&u), &g.ctx.df()[j]);
        let plain = g.ctx.act_on_fraction(&WeylElement::d(AlgebraSignature::plain(g.nvars()), j), &u.coeffs[0])?;
        if g.add(&a, &b) != g.element(vec![plain]) {
            return Ok(false);
        }
    }
    let comm = g.add(&g.apply_dt(&g.apply_t(&u)), &g.scale(&g.apply_t(&g.apply_dt(&u)), &-Rational::one()));
    Ok(comm == u)
}
