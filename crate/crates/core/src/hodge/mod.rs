//! The ideal Gamma and the Hodge filtration steps computed from it.
//!
//! `Gamma = D[s] f + D[s] beta(-s) + ann f^(s-1)`; step `k` of the Hodge
//! filtration is obtained by intersecting with the sharp filtration at level
//! `k`, substituting `s = -alpha` and applying the result to `f^(-1-alpha)`.
//! The shifted variant `Gamma~` (with `beta(-s+alpha)`, `ann f^(s-1-alpha)`
//! and the substitution `s = 0`) is computed independently as a cross-check.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::annbs::{beta_polynomial, root_window_check, BSPolyData, EulerField, WindowVerdict};
use crate::arith::{linalg::SparseEchelon, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_with, commutative_groebner, eliminate, filtration_intersect, GbOptions, LeftIdealBasis, MonomialOrder};
use crate::weyl::{grlex_cmp, monomials_up_to, AlgebraSignature, FractionContext, FractionElement, Poly, WeylElement, WeylMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaVariant {
    /// `beta(-s)`, `ann f^(s-1)`, specialization `s = -alpha`.
    Standard,
    /// `beta(-s+alpha)`, `ann f^(s-1-alpha)`, specialization `s = 0`.
    Shifted,
}

/// Hypotheses behind a computation, recorded in every output.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Hypotheses {
    pub window_passed: bool,
    pub euler_field: Option<EulerField>,
    pub parametrically_prime_asserted: bool,
    pub ann_complete_asserted: bool,
}

#[derive(Clone, Debug)]
pub struct GammaIdeal {
    pub f: Poly,
    pub alpha: Rational,
    pub variant: GammaVariant,
    pub beta: UniPoly,
    pub f_gen: WeylElement,
    pub beta_gen: WeylElement,
    pub ann_gens: Vec<WeylElement>,
    pub basis: LeftIdealBasis,
    pub hypotheses: Hypotheses,
}

impl GammaIdeal {
    pub fn components(&self) -> Vec<WeylElement> {
        let mut out = vec![self.f_gen.clone(), self.beta_gen.clone()];
        out.extend(self.ann_gens.iter().cloned());
        out
    }

    /// Value substituted for `s` when passing to plain operators.
    pub fn specialization(&self) -> Rational {
        match self.variant {
            GammaVariant::Standard => -self.alpha.clone(),
            GammaVariant::Shifted => Rational::zero(),
        }
    }

    pub fn gb(&self) -> &[WeylElement] {
        self.basis.gb().expect("built with a basis")
    }
}

/// Assembles Gamma (or its shifted variant) from annihilators of `f^s` and
/// computes its reduced basis under the sharp order.
pub fn build_gamma(
    f: &Poly,
    alpha: &Rational,
    bs: &BSPolyData,
    ann_fs: &[WeylElement],
    hypotheses: Hypotheses,
    variant: GammaVariant,
) -> Result<GammaIdeal> {
    if alpha < &Rational::zero() {
        return Err(Error::InvalidInput("alpha must be nonnegative".into()));
    }
    if let WindowVerdict::Fail { offending } = root_window_check(bs, alpha) {
        return Err(Error::WindowFailure { offending });
    }
    let n = f.nvars();
    let sig = AlgebraSignature::with_s(n);
    let beta = beta_polynomial(bs, alpha);
    let (beta_arg_shift, ann_shift) = match variant {
        GammaVariant::Standard => (Rational::zero(), -Rational::one()),
        GammaVariant::Shifted => (alpha.clone(), -Rational::one() - alpha),
    };
    // beta(-s + shift)
    let beta_sub = beta.compose_affine(&-Rational::one(), &beta_arg_shift);
    let beta_gen = WeylElement::from_s_poly(sig, &beta_sub);
    let f_gen = WeylElement::from_poly(sig, f);
    // P(s) kills f^s, so P(s + c) kills f^(s + c)
    let ann_gens: Vec<WeylElement> = ann_fs.iter().map(|g| g.shift_s(&ann_shift)).collect();
    crate::annbs::check_annihilators(f, &ann_gens, &ann_shift)?;
    let mut gens = vec![f_gen.clone(), beta_gen.clone()];
    gens.extend(ann_gens.iter().cloned());
    let basis = buchberger_with(&gens, &MonomialOrder::sharp(sig), GbOptions { certificates: false })?;
    let mut hypotheses = hypotheses;
    hypotheses.window_passed = true;
    Ok(GammaIdeal { f: f.clone(), alpha: alpha.clone(), variant, beta, f_gen, beta_gen, ann_gens, basis, hypotheses })
}

/// Generators of `Gamma ∩ O` by eliminating the derivatives and `s`,
/// returned as a reduced graded-lex basis.
pub fn hodge_ideal_zero(gamma: &GammaIdeal) -> Result<Vec<Poly>> {
    let sig = AlgebraSignature::with_s(gamma.f.nvars());
    let mut front: Vec<usize> = (0..sig.n).map(|i| sig.d(i)).collect();
    front.push(sig.s());
    let elim = eliminate(&gamma.components(), &front)?;
    let polys: Vec<Poly> = elim.iter().map(|g| g.as_poly().expect("free of d and s")).collect();
    commutative_groebner(&polys)
}

/// An O-submodule of `O(*f) f^(-alpha)` in normal form: its elements are
/// `h f^(-pole_level) f^(-alpha)` with `h` in the ideal `numerators`, and
/// `echelon` spans the degree-truncated part of that ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub pole_level: u32,
    pub degree_bound: u32,
    pub numerators: Vec<Poly>,
    pub echelon: Vec<Poly>,
}

pub fn canonical_module_form(ctx: &FractionContext, gens: &[FractionElement], pole_level: u32, degree_bound: u32) -> Result<CanonicalForm> {
    let n = ctx.nvars();
    let mut nums = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        nums.push(ctx.at_pole(g, pole_level)?);
    }
    if let Some(tw) = gens.first().map(|g| &g.twist) {
        if gens.iter().any(|g| &g.twist != tw) {
            return Err(Error::InvalidInput("generators with different twists".into()));
        }
    }
    let numerators = if nums.is_empty() { Vec::new() } else { commutative_groebner(&nums)? };
    let echelon = truncated_span(&numerators, n, degree_bound);
    Ok(CanonicalForm { pole_level, degree_bound, numerators, echelon })
}

/// Reduced echelon basis of `I ∩ Q[x]_{<= bound}` for a graded basis of `I`.
pub fn truncated_span(gb: &[Poly], n: usize, bound: u32) -> Vec<Poly> {
    let mut ech: SparseEchelon<std::cmp::Reverse<GrlexKey>> = SparseEchelon::new();
    for g in gb {
        let Some(d) = g.total_degree() else { continue };
        if d > bound {
            continue;
        }
        for m in monomials_up_to(n, bound - d) {
            let v = g.mul_monomial(&m, &Rational::one());
            ech.insert(v.terms().iter().map(|(e, c)| (std::cmp::Reverse(GrlexKey(e.clone())), c.clone())).collect());
        }
    }
    ech.reduced_rows()
        .into_iter()
        .map(|row| Poly::from_terms(n, row.into_iter().map(|(k, c)| (k.0 .0, c))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrlexKey(pub Vec<u32>);

impl PartialOrd for GrlexKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrlexKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        grlex_cmp(&self.0, &other.0)
    }
}

#[derive(Clone, Debug)]
pub struct HodgeStep {
    pub k: u32,
    pub alpha: Rational,
    pub operator_gens: Vec<WeylElement>,
    pub fraction_gens: Vec<FractionElement>,
    pub module: CanonicalForm,
    pub hypotheses: Hypotheses,
}

/// Step `k`: specialize `s` in `d^b s^c g` for basis elements `g` with
/// `sharp(g) + |b| + c <= k`, then apply to `f^(-1-alpha)`.
pub fn hodge_step(gamma: &GammaIdeal, k: u32, degree_bound: u32) -> Result<HodgeStep> {
    if k >= 1 {
        if !gamma.hypotheses.parametrically_prime_asserted {
            return Err(Error::MissingHypothesis("steps k >= 1 need the parametric primality assertion".into()));
        }
        if gamma.hypotheses.euler_field.is_none() {
            return Err(Error::MissingHypothesis("steps k >= 1 need an Euler vector field".into()));
        }
    }
    let n = gamma.f.nvars();
    let sig = AlgebraSignature::with_s(n);
    let value = gamma.specialization();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut operator_gens = Vec::new();
    for (g, room) in filtration_intersect(&gamma.basis, k)? {
        for mono in d_s_monomials(&sig, room) {
            let op = g.left_mul_monomial(&mono, &Rational::one()).substitute_s(&value);
            if op.is_zero() {
                continue;
            }
            if op.differential_order().unwrap_or(0) > k {
                return Err(Error::Inconsistency(format!("operator {op} exceeds order {k}")));
            }
            let mut normalized = op.scale(&op.content_scale());
            if normalized.terms().values().next_back().is_some_and(|c| c < &Rational::zero()) {
                normalized = normalized.scale(&-Rational::one());
            }
            if seen.insert(normalized.to_string()) {
                operator_gens.push(op);
            }
        }
    }
    let ctx = FractionContext::new(gamma.f.clone())?;
    let unit = ctx.unit(&gamma.alpha);
    let fraction_gens = operator_gens.iter().map(|op| ctx.act_on_fraction(op, &unit)).collect::<Result<Vec<_>>>()?;
    for u in &fraction_gens {
        if u.pole > k + 1 {
            return Err(Error::Inconsistency(format!("fraction pole {} exceeds {}", u.pole, k + 1)));
        }
    }
    let module = canonical_module_form(&ctx, &fraction_gens, k + 1, degree_bound)?;
    Ok(HodgeStep { k, alpha: gamma.alpha.clone(), operator_gens, fraction_gens, module, hypotheses: gamma.hypotheses.clone() })
}

/// Monomials `d^b s^c` with `|b| + c <= room`.
fn d_s_monomials(sig: &AlgebraSignature, room: u32) -> Vec<WeylMonomial> {
    let mut out = Vec::new();
    for exps in monomials_up_to(sig.n + 1, room) {
        let mut m = WeylMonomial::one(sig);
        for i in 0..sig.n {
            m.0[sig.d(i)] = exps[i];
        }
        m.0[sig.s()] = exps[sig.n];
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annbs::{ann_fs_order1, bs_polynomial, euler_field};
    use crate::arith::{int, rat};

    fn setup(f: &Poly, alpha: Rational, variant: GammaVariant) -> GammaIdeal {
        let ann = ann_fs_order1(f, &int(0)).unwrap();
        let bs = bs_polynomial(f, &ann, true).unwrap();
        let hyp = Hypotheses {
            euler_field: Some(euler_field(f, 2).unwrap()),
            parametrically_prime_asserted: true,
            ann_complete_asserted: true,
            ..Default::default()
        };
        build_gamma(f, &alpha, &bs, &ann, hyp, variant).unwrap()
    }

    #[test]
    fn smooth_untwisted_is_unit() {
        let x = Poly::var(1, 0);
        let g = setup(&x, int(0), GammaVariant::Standard);
        assert_eq!(g.gb(), &[WeylElement::one(AlgebraSignature::with_s(1))]);
        assert_eq!(hodge_ideal_zero(&g).unwrap(), vec![Poly::one(1)]);
    }

    #[test]
    fn smooth_half_twist() {
        let x = Poly::var(1, 0);
        let g = setup(&x, rat(1, 2), GammaVariant::Standard);
        assert_eq!(hodge_ideal_zero(&g).unwrap(), vec![x.clone()]);
        let step = hodge_step(&g, 0, 8).unwrap();
        let ctx = FractionContext::new(x.clone()).unwrap();
        let expected = canonical_module_form(&ctx, &[ctx.fraction(Poly::one(1), 0, rat(1, 2))], 1, 8).unwrap();
        assert_eq!(step.module, expected);
    }

    #[test]
    fn cusp_zero_step() {
        let f = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3);
        let g = setup(&f, int(0), GammaVariant::Standard);
        assert_eq!(hodge_ideal_zero(&g).unwrap(), vec![Poly::var(2, 0), Poly::var(2, 1)]);
    }

    #[test]
    fn module_form_examples() {
        let x = Poly::var(1, 0);
        let ctx = FractionContext::new(x.clone()).unwrap();
        let a = canonical_module_form(&ctx, &[ctx.fraction(x.clone(), 1, int(0)), ctx.fraction(x.scale(&int(2)), 1, int(0))], 1, 1).unwrap();
        assert_eq!(a.numerators, vec![x.clone()]);
        assert_eq!(a.echelon, vec![x.clone()]);
        let b = canonical_module_form(&ctx, &[ctx.fraction(Poly::one(1), 1, int(0)), ctx.fraction(x.clone(), 1, int(0))], 1, 1).unwrap();
        assert_eq!(b.echelon.len(), 2);
        assert!(matches!(canonical_module_form(&ctx, &[ctx.fraction(Poly::one(1), 2, int(0))], 1, 1), Err(Error::PoleExceeded { .. })));
    }
}
