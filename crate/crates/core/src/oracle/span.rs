use std::collections::VecDeque;

use num_bigint::BigInt;

use crate::arith::{Rational, UniPoly};
use crate::error::{Error, Result};
use crate::groebner::{module_intersection, ModuleGb};
use crate::weyl::{FractionElement, Poly};

use super::graph::{GraphContext, GraphElement};

/// Finite window for span computations: `dt`-order at most `e`, pole order at
/// most `m`. `d` is the degree bound at which truncated spans are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationBudget {
    pub e: u32,
    pub d: u32,
    pub m: u32,
}

impl TruncationBudget {
    pub fn new(e: u32, d: u32, m: u32) -> Self {
        TruncationBudget { e, d, m }
    }

    /// The next window up; the comparison degree stays fixed.
    pub fn next(&self) -> Self {
        TruncationBudget { e: self.e + 1, d: self.d, m: self.m + 1 }
    }

    pub fn scaled(&self, factor: u32) -> Self {
        let factor = factor.max(1);
        TruncationBudget { e: self.e * factor, d: self.d, m: self.m * factor }
    }
}

impl Default for TruncationBudget {
    fn default() -> Self {
        TruncationBudget::new(4, 8, 6)
    }
}

/// Elementary operators used to close a span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphOp {
    D(usize),
    T,
    Dt,
    Theta,
}

/// A graph element in window coordinates: entry `i` is the numerator `h_i` of
/// `h_i f^(-m) f^(-alpha) dt^i`.
pub type WindowVec = Vec<Poly>;

/// An O-submodule of the window, generated by elements of the graph module
/// that fit in the window. Position 0 of the inner basis is `dt`-index `e`, so
/// that the Groebner basis eliminates high `dt`-orders first.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub budget: TruncationBudget,
    n: usize,
    gb: ModuleGb,
}

impl SpanBasis {
    fn to_positions(&self, v: &WindowVec) -> Vec<Poly> {
        v.iter().rev().cloned().collect()
    }

    pub fn contains(&self, v: &WindowVec) -> bool {
        self.gb.contains(&self.to_positions(v))
    }

    pub fn contains_all(&self, vs: &[WindowVec]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }

    pub fn includes(&self, other: &SpanBasis) -> bool {
        self.contains_all(&other.generators())
    }

    /// Reduced generators in `dt`-index order.
    pub fn generators(&self) -> Vec<WindowVec> {
        self.gb.reduced_basis().into_iter().map(|g| g.into_iter().rev().collect()).collect()
    }

    /// Generators of the part of the span with `dt`-order at most `k`.
    pub fn low_part(&self, k: u32) -> Vec<WindowVec> {
        self.generators()
            .into_iter()
            .filter(|g| g.iter().enumerate().all(|(i, h)| i as u32 <= k || h.is_zero()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.gb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gb.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }
}

/// Window arithmetic for one context and budget.
pub struct Window<'a> {
    pub g: &'a GraphContext,
    pub budget: TruncationBudget,
}

impl<'a> Window<'a> {
    pub fn new(g: &'a GraphContext, budget: TruncationBudget) -> Self {
        Window { g, budget }
    }

    fn len(&self) -> usize {
        self.budget.e as usize + 1
    }

    fn n(&self) -> usize {
        self.g.nvars()
    }

    pub fn zero(&self) -> WindowVec {
        vec![Poly::zero(self.n()); self.len()]
    }

    /// Window coordinates of `u`, or None if it does not fit.
    pub fn embed(&self, u: &GraphElement) -> Option<WindowVec> {
        if u.dt_order().is_some_and(|o| o > self.budget.e as usize) {
            return None;
        }
        let mut out = self.zero();
        for (i, c) in u.coeffs.iter().enumerate() {
            out[i] = self.g.ctx.at_pole(c, self.budget.m).ok()?;
        }
        Some(out)
    }

    pub fn to_element(&self, v: &WindowVec) -> GraphElement {
        let coeffs = v.iter().map(|h| self.frac(h)).collect();
        self.g.element(coeffs)
    }

    fn frac(&self, h: &Poly) -> FractionElement {
        self.g.ctx.fraction(h.clone(), self.budget.m, self.g.alpha.clone())
    }

    /// Index-0 coefficient as a fraction.
    pub fn project0(&self, v: &WindowVec) -> FractionElement {
        self.frac(&v[0])
    }

    /// Applies an elementary operator. A derivative that raises the pole past
    /// `m` is replaced by `f` times itself, which stays in the same O-span.
    pub fn apply(&self, op: GraphOp, v: &WindowVec) -> Option<WindowVec> {
        let e = self.budget.e as usize;
        let f = self.g.ctx.f();
        match op {
            GraphOp::T => {
                let mut out = self.zero();
                for i in 0..=e {
                    let mut h = &v[i] * f;
                    if i < e && !v[i + 1].is_zero() {
                        h = &h - &v[i + 1].scale(&Rational::from_integer(BigInt::from(i + 1)));
                    }
                    out[i] = h;
                }
                Some(out)
            }
            GraphOp::Dt => {
                if !v[e].is_zero() {
                    return None;
                }
                let mut out = self.zero();
                out[1..].clone_from_slice(&v[..e]);
                Some(out)
            }
            GraphOp::Theta => self.apply(GraphOp::T, v).and_then(|w| self.apply(GraphOp::Dt, &w)),
            GraphOp::D(j) => {
                if !v[e].is_zero() {
                    return None;
                }
                let df = &self.g.ctx.df()[j];
                let coef = Rational::from_integer(BigInt::from(self.budget.m)) + &self.g.alpha;
                // numerators at pole m + 1
                let mut w = self.zero();
                for i in 0..=e {
                    let mut h = &(&v[i].derivative(j) * f) - &(&v[i] * df).scale(&coef);
                    if i > 0 {
                        h = &h - &(&(&v[i - 1] * df) * f);
                    }
                    w[i] = h;
                }
                let divided: Option<WindowVec> = w.iter().map(|h| h.div_exact(f)).collect();
                Some(divided.unwrap_or(w))
            }
        }
    }

    /// `p(theta + shift) v`, or None if it leaves the window.
    pub fn apply_theta_poly(&self, p: &UniPoly, shift: &Rational, v: &WindowVec) -> Option<WindowVec> {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            let th = self.apply(GraphOp::Theta, &acc)?;
            acc = (0..acc.len()).map(|i| &(&th[i] + &acc[i].scale(shift)) + &v[i].scale(c)).collect();
        }
        Some(acc)
    }

    pub fn t_power(&self, v: &WindowVec, k: u32) -> WindowVec {
        let mut out = v.clone();
        for _ in 0..k {
            out = self.apply(GraphOp::T, &out).expect("t never leaves the window");
        }
        out
    }

    /// The unit element `f^(-1-alpha)`.
    pub fn unit(&self) -> WindowVec {
        self.embed(&self.g.unit()).expect("the unit fits any window with m >= 1")
    }

    pub fn empty_span(&self) -> SpanBasis {
        SpanBasis { budget: self.budget, n: self.n(), gb: ModuleGb::new(self.n(), self.len()) }
    }

    /// Smallest O-submodule of the window containing `seeds` and stable under
    /// `ops` as far as results stay inside the window.
    pub fn closure(&self, seeds: &[WindowVec], ops: &[GraphOp]) -> SpanBasis {
        let mut span = self.empty_span();
        let mut queue: VecDeque<WindowVec> = seeds.iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            let pos = span.to_positions(&v);
            if !span.gb.insert(&pos) {
                continue;
            }
            for &op in ops {
                if let Some(w) = self.apply(op, &v) {
                    if w.iter().any(|h| !h.is_zero()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        span
    }

    /// O-span of the given vectors, without closing under any operator.
    pub fn o_span(&self, gens: &[WindowVec]) -> SpanBasis {
        self.closure(gens, &[])
    }

    /// The operators generating `V^0 D` over O.
    pub fn v0_ops(&self) -> Vec<GraphOp> {
        let mut ops: Vec<GraphOp> = (0..self.n()).map(GraphOp::D).collect();
        ops.push(GraphOp::T);
        ops.push(GraphOp::Theta);
        ops
    }

    /// `V^k D f^(-1-alpha)` within the window.
    pub fn v_ind_span(&self, k: u32) -> SpanBasis {
        let seed = self.t_power(&self.unit(), k);
        self.closure(&[seed], &self.v0_ops())
    }

    /// `V_ind^(k+1) + beta(theta - k + alpha) V_ind^k` within the window, as the
    /// `V^0 D`-span of `t^(k+1) u` and `beta(theta - k + alpha) t^k u`.
    pub fn v_can_span(&self, k: u32, beta: &UniPoly) -> Result<SpanBasis> {
        let tk = self.t_power(&self.unit(), k);
        let shift = &self.g.alpha - Rational::from_integer(BigInt::from(k));
        let second = self
            .apply_theta_poly(beta, &shift, &tk)
            .ok_or_else(|| Error::BudgetInconclusive(format!("beta(theta) leaves the window at dt-order {}", self.budget.e)))?;
        let first = self.t_power(&tk, 1);
        Ok(self.closure(&[first, second], &self.v0_ops()))
    }

    /// `F_l D[t, dt] f^(-1-alpha)`: O[t]-span of `d^b dt^c u` with `|b| + c <= l`.
    pub fn ord_span(&self, l: u32) -> SpanBasis {
        self.filtered_span(l, None)
    }

    /// `(F_l D ∩ V^k D) f^(-1-alpha)`: O[t]-span of `t^(c+k) dt^c d^b u`
    /// with `|b| + c <= l`.
    pub fn ord_v_span(&self, l: u32, k: u32) -> SpanBasis {
        self.filtered_span(l, Some(k))
    }

    fn filtered_span(&self, l: u32, vk: Option<u32>) -> SpanBasis {
        let n = self.n();
        // d^b u for |b| <= l, breadth first
        let mut layers: Vec<Vec<WindowVec>> = vec![vec![self.unit()]];
        let mut seeds = Vec::new();
        for level in 0..=l {
            let cur = layers[level as usize].clone();
            for v in &cur {
                let mut w = v.clone();
                for c in 0..=(l - level) {
                    let seed = match vk {
                        Some(k) => self.t_power(&w, c + k),
                        None => w.clone(),
                    };
                    seeds.push(seed);
                    match self.apply(GraphOp::Dt, &w) {
                        Some(next) => w = next,
                        None => break,
                    }
                }
            }
            let mut next = Vec::new();
            for v in &cur {
                for j in 0..n {
                    if let Some(w) = self.apply_exact_d(j, v) {
                        next.push(w);
                    }
                }
            }
            layers.push(next);
        }
        self.closure(&seeds, &[GraphOp::T])
    }

    /// `d_j v` only when it fits the window exactly.
    fn apply_exact_d(&self, j: usize, v: &WindowVec) -> Option<WindowVec> {
        let el = self.g.apply_d(&self.to_element(v), j).ok()?;
        self.embed(&el)
    }

    /// Intersection of two spans.
    pub fn intersect(&self, a: &SpanBasis, b: &SpanBasis) -> SpanBasis {
        let rank = self.len();
        let ga: Vec<Vec<Poly>> = a.gb.reduced_basis();
        let gb: Vec<Vec<Poly>> = b.gb.reduced_basis();
        let meet = module_intersection(self.n(), rank, &ga, &gb);
        let mut span = self.empty_span();
        for g in meet {
            span.gb.insert(&g);
        }
        span
    }
}

/// True if every numerator of `v` is zero.
pub fn is_zero_vec(v: &WindowVec) -> bool {
    v.iter().all(|h| h.is_zero())
}
