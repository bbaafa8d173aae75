use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::annbs::{beta_polynomial, BSPolyData, EulerField};
use crate::arith::linalg::{SparseEchelon, SparseVec};
use crate::arith::{is_integer, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, eliminate, MonomialOrder};
use crate::hodge::GrlexKey;
use crate::weyl::{default_names, monomials_up_to, AlgebraSignature, FractionContext, FractionElement, Poly, WeylElement, WeylMonomial};

use super::graph::{apply_theta_poly, GraphContext, GraphElement};
use super::span::{TruncationBudget, Window, WindowVec};

/// Everything an identity check may need about one divisor and twist.
#[derive(Clone, Debug)]
pub struct OracleContext {
    pub f: Poly,
    pub alpha: Rational,
    pub k: u32,
    pub bs: BSPolyData,
    /// Generators of the annihilator of `f^s` in `D[s]`.
    pub ann: Vec<WeylElement>,
    pub euler: Option<EulerField>,
    pub budget: TruncationBudget,
}

impl OracleContext {
    pub fn beta(&self) -> UniPoly {
        beta_polynomial(&self.bs, &self.alpha)
    }

    fn graph(&self) -> Result<GraphContext> {
        GraphContext::new(self.f.clone(), self.alpha.clone())
    }

    fn names(&self) -> Vec<String> {
        default_names("x", self.f.nvars())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Pass { detail: String },
    Fail { witness: String },
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Pass { detail } => write!(f, "pass ({detail})"),
            OracleVerdict::Fail { witness } => write!(f, "fail (witness: {witness})"),
        }
    }
}

/// One identity, checked at a single budget.
pub trait IdentityCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict>;

    /// Whether the check presupposes that the roots lie in the window
    /// `(-2-alpha, -alpha)`.
    fn needs_window(&self) -> bool {
        true
    }

    /// Runs at the context budget and the next one up. The verdict is
    /// reported only when both agree.
    fn verify(&self, cx: &OracleContext) -> Result<OracleVerdict> {
        let a = self.check_at(cx, cx.budget)?;
        let b = self.check_at(cx, cx.budget.next())?;
        match (&a, &b) {
            (OracleVerdict::Pass { .. }, OracleVerdict::Pass { .. }) => Ok(a),
            (OracleVerdict::Fail { witness: x }, OracleVerdict::Fail { witness: y }) if x == y => Ok(a),
            _ => Err(Error::BudgetInconclusive(format!("{}: `{a}` at the budget, `{b}` one step up", self.name()))),
        }
    }
}

/// All checks, in a fixed order.
pub fn registry() -> Vec<Box<dyn IdentityCheck>> {
    vec![
        Box::new(AnnPresentation),
        Box::new(Generation),
        Box::new(VindBfunction),
        Box::new(PhiTwist),
        Box::new(FvCompat),
        Box::new(TordVsOrd),
    ]
}

pub fn lookup(name: &str) -> Result<Box<dyn IdentityCheck>> {
    registry().into_iter().find(|c| c.name() == name).ok_or_else(|| {
        let names: Vec<&str> = registry().iter().map(|c| c.name()).collect();
        Error::Config(format!("unknown selector `{name}` (known: {})", names.join(", ")))
    })
}

fn int(i: u32) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

/// Weights `w` with `E = sum w_i x_i d_i`, when the Euler field has that shape.
fn diagonal_weights(e: Option<&EulerField>) -> Option<Vec<Rational>> {
    let e = e?;
    let n = e.coeffs.len();
    let mut w = Vec::with_capacity(n);
    for (i, c) in e.coeffs.iter().enumerate() {
        let mut unit = vec![0u32; n];
        unit[i] = 1;
        let wi = c.coeff(&unit);
        if c != &Poly::monomial(n, unit, wi.clone()) {
            return None;
        }
        w.push(wi);
    }
    Some(w)
}

/// Monomials `x^a d^b` with `|b| <= order`, `|a| <= degree`, and, when weights
/// are given, weight `sum w_i (a_i - b_i)` equal to `target`.
fn operator_monomials(n: usize, order: u32, degree: u32, weights: Option<(&[Rational], &Rational)>) -> Vec<WeylMonomial> {
    let sig = AlgebraSignature::plain(n);
    let mut out = Vec::new();
    for b in monomials_up_to(n, order) {
        for a in monomials_up_to(n, degree) {
            if let Some((w, target)) = weights {
                let wt: Rational = (0..n).map(|i| &w[i] * (Rational::from_integer(BigInt::from(a[i])) - int(b[i]))).sum();
                if &wt != target {
                    continue;
                }
            }
            let mut m = vec![0u32; sig.slots()];
            m[..n].copy_from_slice(&a);
            m[n..2 * n].copy_from_slice(&b);
            out.push(WeylMonomial(m));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Col {
    Image(Reverse<GrlexKey>),
    Tag(usize),
}

/// Images of operator monomials on one fraction, eliminated with tags so that
/// kernel elements and preimages can be read off.
struct ImageSystem {
    monos: Vec<WeylMonomial>,
    level: u32,
    ech: SparseEchelon<Col>,
}

impl ImageSystem {
    fn build(ctx: &FractionContext, monos: Vec<WeylMonomial>, src: &FractionElement) -> Result<Self> {
        let sig = AlgebraSignature::plain(ctx.nvars());
        let images: Vec<FractionElement> = monos
            .iter()
            .map(|m| ctx.act_on_fraction(&WeylElement::from_monomial(sig, m.clone(), Rational::one()), src))
            .collect::<Result<_>>()?;
        let level = images.iter().map(|u| u.pole).max().unwrap_or(0).max(src.pole + 1);
        let mut ech = SparseEchelon::new();
        for (j, u) in images.iter().enumerate() {
            let mut v = image_vec(ctx, u, level)?;
            v.insert(Col::Tag(j), Rational::one());
            ech.insert(v);
        }
        Ok(ImageSystem { monos, level, ech })
    }

    fn operator(&self, tags: &SparseVec<Col>, sign: &Rational) -> WeylElement {
        let sig = AlgebraSignature::plain((self.monos[0].0.len() - 3) / 2);
        let mut op = WeylElement::zero(sig);
        for (k, c) in tags {
            if let Col::Tag(j) = k {
                op.add_term(self.monos[*j].clone(), c * sign);
            }
        }
        op
    }

    fn kernel(&self) -> Vec<WeylElement> {
        self.ech
            .tail_subspace(|k| matches!(k, Col::Tag(_)))
            .iter()
            .map(|row| self.operator(row, &Rational::one()))
            .collect()
    }

    fn preimage(&self, ctx: &FractionContext, target: &FractionElement) -> Result<Option<WeylElement>> {
        if target.pole > self.level {
            return Ok(None);
        }
        let rem = self.ech.reduce(image_vec(ctx, target, self.level)?);
        match rem.keys().next() {
            Some(Col::Image(_)) => Ok(None),
            _ => Ok(Some(self.operator(&rem, &-Rational::one()))),
        }
    }
}

fn image_vec(ctx: &FractionContext, u: &FractionElement, level: u32) -> Result<SparseVec<Col>> {
    let num = ctx.at_pole(u, level)?;
    Ok(num.terms().iter().map(|(e, c)| (Col::Image(Reverse(GrlexKey(e.clone()))), c.clone())).collect())
}

struct AnnPresentation;

impl IdentityCheck for AnnPresentation {
    fn name(&self) -> &'static str {
        "ann-presentation"
    }

    fn summary(&self) -> &'static str {
        "operators killing f^(-1-alpha) are ann_D f^s + D(E + 1 + alpha)"
    }

    fn needs_window(&self) -> bool {
        false
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let euler = cx.euler.as_ref().ok_or_else(|| Error::MissingHypothesis("ann-presentation needs an Euler vector field".into()))?;
        let n = cx.f.nvars();
        let plain = AlgebraSignature::plain(n);
        let ctx = FractionContext::new(cx.f.clone())?;
        let unit = ctx.unit(&cx.alpha);
        let s_slot = cx.ann.first().ok_or_else(|| Error::InvalidInput("empty annihilator".into()))?.signature().s();
        let mut gens: Vec<WeylElement> = eliminate(&cx.ann, &[s_slot])?.iter().map(|g| g.substitute_s(&Rational::zero())).collect();
        let one_alpha = Rational::one() + &cx.alpha;
        gens.push(&euler.operator(plain) + &WeylElement::constant(plain, one_alpha.clone()));
        let names = cx.names();
        for g in &gens {
            if !ctx.act_on_fraction(g, &unit)?.is_zero() {
                return Ok(OracleVerdict::Fail { witness: format!("{} does not kill f^(-1-alpha)", g.canonical_string(&names)) });
            }
        }
        let ideal = buchberger(&gens, &MonomialOrder::graded_lex(plain))?;
        let order = (budget.e / 2).max(1);
        let degree = budget.m.saturating_sub(2).max(1);
        let monos = operator_monomials(n, order, degree, None);
        let system = ImageSystem::build(&ctx, monos, &unit)?;
        let kernel = system.kernel();
        for p in &kernel {
            if !ideal.contains(p)? {
                return Ok(OracleVerdict::Fail { witness: format!("{} kills f^(-1-alpha) but is not in the ideal", p.canonical_string(&names)) });
            }
        }
        Ok(OracleVerdict::Pass { detail: format!("{} kernel operators of order <= {order}, degree <= {degree} lie in the ideal", kernel.len()) })
    }
}

struct Generation;

impl Generation {
    /// Roots `r` of `b` with `r + alpha` an integer below `-k`.
    fn obstruction(cx: &OracleContext) -> Option<Rational> {
        let k = int(cx.k);
        cx.bs.roots.entries.iter().map(|(r, _)| r.clone()).find(|r| {
            let shifted = r + &cx.alpha;
            is_integer(&shifted) && shifted < -k.clone()
        })
    }
}

impl IdentityCheck for Generation {
    fn name(&self) -> &'static str {
        "generation"
    }

    fn summary(&self) -> &'static str {
        "f^(-alpha-k-1) lies in D f^(-alpha-k) iff no root of b lies in Z_{<-k} - alpha"
    }

    fn needs_window(&self) -> bool {
        false
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let n = cx.f.nvars();
        let ctx = FractionContext::new(cx.f.clone())?;
        let src = ctx.fraction(Poly::one(n), cx.k, cx.alpha.clone());
        let target = ctx.fraction(Poly::one(n), cx.k + 1, cx.alpha.clone());
        let weights = diagonal_weights(cx.euler.as_ref());
        let minus_one = -Rational::one();
        let monos = match &weights {
            Some(w) => operator_monomials(n, budget.e, budget.d, Some((w, &minus_one))),
            None => operator_monomials(n, (budget.e / 2).max(1), budget.d / 2, None),
        };
        let system = ImageSystem::build(&ctx, monos, &src)?;
        let found = system.preimage(&ctx, &target)?;
        let obstruction = Self::obstruction(cx);
        match (found, obstruction) {
            (Some(p), None) => Ok(OracleVerdict::Pass {
                detail: format!("f^(-alpha-{}) = P f^(-alpha-{}) with P = {}", cx.k + 1, cx.k, p.canonical_string(&cx.names())),
            }),
            (None, Some(r)) => Ok(OracleVerdict::Fail { witness: format!("root {r}; f^(-alpha-{}) is not generated by f^(-alpha-{})", cx.k + 1, cx.k) }),
            (Some(p), Some(r)) => Err(Error::Inconsistency(format!(
                "root {r} forbids generation, yet {} maps f^(-alpha-{}) to f^(-alpha-{})",
                p.canonical_string(&cx.names()),
                cx.k,
                cx.k + 1
            ))),
            (None, None) => Err(Error::BudgetInconclusive(format!("no operator of the searched shape generates at order <= {}", budget.e))),
        }
    }
}

struct VindBfunction;

impl VindBfunction {
    /// `p(-theta + k - 1 - alpha) t^k u`: `s` acts as `-theta` and step `k`
    /// shifts the argument by `k`.
    fn image(w: &Window, p: &UniPoly, k: u32, alpha: &Rational) -> Option<WindowVec> {
        let c = int(k) - Rational::one() - alpha;
        let q = p.compose_affine(&-Rational::one(), &c);
        let tk = w.t_power(&w.unit(), k);
        w.apply_theta_poly(&q, &Rational::zero(), &tk)
    }
}

impl IdentityCheck for VindBfunction {
    fn name(&self) -> &'static str {
        "vind-bfunction"
    }

    fn summary(&self) -> &'static str {
        "b(-theta + k - 1 - alpha) maps V_ind^k into V_ind^(k+1), and no proper divisor does"
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let g = cx.graph()?;
        let w = Window::new(&g, budget);
        let b = &cx.bs.b;
        let mut checked = Vec::new();
        for k in 0..=1u32 {
            let next = w.v_ind_span(k + 1);
            let img = Self::image(&w, b, k, &cx.alpha).ok_or_else(|| Error::BudgetInconclusive("b(theta) leaves the window".into()))?;
            if !next.contains(&img) {
                return Ok(OracleVerdict::Fail { witness: format!("b does not map V_ind^{k} into V_ind^{}", k + 1) });
            }
            for (root, _) in &cx.bs.roots.entries {
                let (q, _) = b.div_rem(&UniPoly::linear(-root.clone()));
                let img = Self::image(&w, &q, k, &cx.alpha).ok_or_else(|| Error::BudgetInconclusive("divisor leaves the window".into()))?;
                if next.contains(&img) {
                    return Ok(OracleVerdict::Fail { witness: format!("b / (s - ({root})) already maps V_ind^{k} into V_ind^{}", k + 1) });
                }
            }
            checked.push(k);
        }
        Ok(OracleVerdict::Pass { detail: format!("minimal on steps {checked:?}") })
    }
}

struct PhiTwist;

impl PhiTwist {
    /// `Q_i(x) = x (x + 1) ... (x + i - 1)` as a polynomial in `s` after
    /// substituting `x = -s + shift`.
    fn q(i: usize, shift: &Rational) -> UniPoly {
        let mut out = UniPoly::one();
        for j in 0..i {
            let factor = UniPoly::new(vec![shift + int(j as u32), -Rational::one()]);
            out = &out * &factor;
        }
        out
    }

    /// `c[i][j]` with `Q_i(-s - alpha) = sum_j c[i][j] Q_j(-s)`.
    fn basis_change(len: usize, alpha: &Rational) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for i in 0..len {
            let mut rest = Self::q(i, &-alpha.clone());
            let mut row = vec![Rational::zero(); len];
            for j in (0..=i).rev() {
                let qj = Self::q(j, &Rational::zero());
                let lead = rest.coeffs().get(j).cloned().unwrap_or_else(Rational::zero);
                let c = lead / qj.leading().expect("Q_j is nonzero");
                rest = &rest - &qj.scale(&c);
                row[j] = c;
            }
            out.push(row);
        }
        out
    }

    /// The isomorphism onto the graph module of `O(*f)`.
    fn phi(src: &GraphContext, dst: &GraphContext, v: &GraphElement) -> GraphElement {
        let len = v.coeffs.len();
        let c = Self::basis_change(len, &src.alpha);
        let f = src.ctx.f();
        let mut out = Vec::new();
        for j in 0..len {
            let mut parts = Vec::new();
            for (i, u) in v.coeffs.iter().enumerate().skip(j) {
                if c[i][j].is_zero() {
                    continue;
                }
                // c_ij h_i f^(j - i)
                let num = &u.numerator.scale(&c[i][j]) * &f.pow(j as u32);
                parts.push(dst.ctx.fraction(num, u.pole + i as u32, Rational::zero()));
            }
            out.push(dst.ctx.sum(&parts, &Rational::zero()));
        }
        dst.element(out)
    }
}

impl IdentityCheck for PhiTwist {
    fn name(&self) -> &'static str {
        "phi-twist"
    }

    fn summary(&self) -> &'static str {
        "the twist isomorphism commutes with x, d, t, sends theta to theta - alpha, and matches V-steps"
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let src = cx.graph()?;
        let dst = GraphContext::new(cx.f.clone(), Rational::zero())?;
        let w = Window::new(&src, budget);
        let wd = Window::new(&dst, budget);
        let beta = cx.beta();
        let phi = |v: &GraphElement| Self::phi(&src, &dst, v);
        if phi(&src.unit()) != dst.unit() {
            return Ok(OracleVerdict::Fail { witness: "unit is not sent to f^(-1)".into() });
        }
        let span = w.v_can_span(cx.k, &beta)?;
        let gens = span.generators();
        let alpha = cx.alpha.clone();
        for (idx, v) in gens.iter().enumerate() {
            let v = w.to_element(v);
            let pv = phi(&v);
            let mut checks: Vec<(&str, GraphElement, GraphElement)> = vec![
                ("t", phi(&src.apply_t(&v)), dst.apply_t(&pv)),
                ("theta", phi(&src.apply_theta(&v)), dst.add(&dst.apply_theta(&pv), &dst.scale(&pv, &-alpha.clone()))),
            ];
            for j in 0..src.nvars() {
                checks.push(("x", phi(&src.mul_x(&v, j)), dst.mul_x(&pv, j)));
                checks.push(("d", phi(&src.apply_d(&v, j)?), dst.apply_d(&pv, j)?));
            }
            for (name, a, b) in checks {
                if a != b {
                    return Ok(OracleVerdict::Fail { witness: format!("{name} on generator {idx} of V^{}", cx.k) });
                }
            }
        }
        // seeds of V^k go to the seeds of the untwisted step
        let tk = src.unit();
        let tk = (0..cx.k).fold(tk, |acc, _| src.apply_t(&acc));
        let shift = src.alpha.clone() - int(cx.k);
        let seed = apply_theta_poly(&src, &beta, &shift, &tk);
        let tk_dst = (0..cx.k).fold(dst.unit(), |acc, _| dst.apply_t(&acc));
        let expected = apply_theta_poly(&dst, &beta, &-int(cx.k), &tk_dst);
        if phi(&seed) != expected {
            return Ok(OracleVerdict::Fail { witness: format!("beta seed of V^{} is not matched", cx.k) });
        }
        let target = wd.closure(
            &[wd.t_power(&wd.embed(&tk_dst).expect("fits"), 1), wd.embed(&expected).ok_or_else(|| Error::BudgetInconclusive("seed image leaves the window".into()))?],
            &wd.v0_ops(),
        );
        for (idx, v) in gens.iter().enumerate() {
            let Some(img) = wd.embed(&phi(&w.to_element(v))) else { continue };
            if !target.contains(&img) {
                return Ok(OracleVerdict::Fail { witness: format!("image of generator {idx} of V^{} leaves the untwisted step", cx.k) });
            }
        }
        Ok(OracleVerdict::Pass { detail: format!("{} generators of V^{} checked", gens.len(), cx.k) })
    }
}

struct FvCompat;

impl IdentityCheck for FvCompat {
    fn name(&self) -> &'static str {
        "fv-compat"
    }

    fn summary(&self) -> &'static str {
        "F_l^ord ∩ V_ind^k = (F_l D ∩ V^k D) f^(-1-alpha) with l = k"
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let g = cx.graph()?;
        let w = Window::new(&g, budget);
        let (l, k) = (cx.k, cx.k);
        let meet = w.intersect(&w.ord_span(l), &w.v_ind_span(k));
        let rhs = w.ord_v_span(l, k);
        if !meet.includes(&rhs) {
            return Ok(OracleVerdict::Fail { witness: "(F_l D ∩ V^k D) u is not inside the intersection".into() });
        }
        for (idx, v) in meet.generators().iter().enumerate() {
            if !rhs.contains(v) {
                return Ok(OracleVerdict::Fail { witness: format!("generator {idx} of the intersection, dt-order {}", dt_order(v)) });
            }
        }
        Ok(OracleVerdict::Pass { detail: format!("l = k = {k}, {} generators", meet.generators().len()) })
    }
}

struct TordVsOrd;

impl IdentityCheck for TordVsOrd {
    fn name(&self) -> &'static str {
        "tord-vs-ord"
    }

    fn summary(&self) -> &'static str {
        "V^0 ∩ F_k^(t-ord) = V^0 ∩ F_k^ord"
    }

    fn check_at(&self, cx: &OracleContext, budget: TruncationBudget) -> Result<OracleVerdict> {
        let g = cx.graph()?;
        let w = Window::new(&g, budget);
        let v0 = w.v_can_span(0, &cx.beta())?;
        let low = w.o_span(&v0.low_part(cx.k));
        let ord = w.ord_span(cx.k);
        for (idx, v) in low.generators().iter().enumerate() {
            if !ord.contains(v) {
                return Ok(OracleVerdict::Fail { witness: format!("generator {idx} of V^0 ∩ F_{}^(t-ord) is not in F_{}^ord", cx.k, cx.k) });
            }
        }
        let back = w.intersect(&ord, &v0);
        if !low.includes(&back) {
            return Ok(OracleVerdict::Fail { witness: format!("V^0 ∩ F_{}^ord exceeds dt-order {}", cx.k, cx.k) });
        }
        Ok(OracleVerdict::Pass { detail: format!("k = {}, {} generators", cx.k, low.generators().len()) })
    }
}

fn dt_order(v: &WindowVec) -> usize {
    v.iter().rposition(|h| !h.is_zero()).unwrap_or(0)
}
