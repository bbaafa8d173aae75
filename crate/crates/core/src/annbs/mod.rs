//! Annihilators of `f^(s+c)`, Euler vector fields, Bernstein-Sato polynomials
//! with a functional-equation certificate, and the polynomial beta.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{linalg, poly_from_linear_factors, rational_roots, Rational, RootList, UniPoly};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, buchberger_with, commutative_syzygies, normal_form, GbOptions, MonomialOrder};
use crate::weyl::{monomials_up_to, AlgebraSignature, FractionContext, Poly, WeylElement};

/// `E = sum a_i d_i` with `E f = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerField {
    pub coeffs: Vec<Poly>,
}

impl EulerField {
    pub fn operator(&self, sig: AlgebraSignature) -> WeylElement {
        WeylElement::vector_field(sig, &self.coeffs)
    }
}

/// A Bernstein-Sato polynomial with its roots and an operator `P` satisfying
/// `P f^(s+1) = b(s) f^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSPolyData {
    pub b: UniPoly,
    pub roots: RootList,
    pub certificate: WeylElement,
    pub ann_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowVerdict {
    Pass,
    Fail { offending: Vec<Rational> },
}

fn check_nonconstant(f: &Poly) -> Result<()> {
    if f.is_constant() {
        return Err(Error::InvalidInput("f must be non-constant".into()));
    }
    Ok(())
}

/// Order-one annihilators `sum a_i d_i - a_0 (s + c)` of `f^(s+c)`, one for
/// each generator of the syzygy module of `(f_x1, .., f_xn, -f)`.
pub fn ann_fs_order1(f: &Poly, shift: &Rational) -> Result<Vec<WeylElement>> {
    check_nonconstant(f)?;
    let n = f.nvars();
    let sig = AlgebraSignature::with_s(n);
    let mut polys: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
    polys.push(-f);
    let syz = commutative_syzygies(&polys)?;
    let ctx = FractionContext::new(f.clone())?;
    let s_plus_c = &WeylElement::s(sig) + &WeylElement::constant(sig, shift.clone());
    let mut out = Vec::new();
    for rel in syz.relations {
        let mut op = WeylElement::vector_field(sig, &rel[..n]);
        op = &op - &(&WeylElement::from_poly(sig, &rel[n]) * &s_plus_c);
        op = normalize_operator(&op, &rel[n]);
        if !ctx.act_on_fs(&op, shift)?.is_zero() {
            return Err(Error::Inconsistency(format!("syzygy operator {op} does not annihilate f^(s+c)")));
        }
        out.push(op);
    }
    Ok(out)
}

/// Scales so that a constant `a_0` becomes 1; otherwise to primitive integer form.
fn normalize_operator(op: &WeylElement, a0: &Poly) -> WeylElement {
    if a0.is_constant() && !a0.is_zero() {
        let c = a0.coeff(&vec![0; a0.nvars()]);
        return op.scale(&(Rational::one() / c));
    }
    let mut scale = op.content_scale();
    let lead = op.terms().iter().max_by(|a, b| crate::weyl::grlex_cmp(&a.0 .0, &b.0 .0)).map(|(_, c)| c.clone());
    if lead.is_some_and(|c| c.is_negative()) {
        scale = -scale;
    }
    op.scale(&scale)
}

/// Solves `sum a_i f_xi = f` with `deg a_i <= b` for the smallest `b <= degree_bound`.
pub fn euler_field(f: &Poly, degree_bound: u32) -> Result<EulerField> {
    check_nonconstant(f)?;
    for bound in 0..=degree_bound {
        if let Some(e) = euler_field_at(f, bound) {
            return Ok(e);
        }
    }
    Err(Error::NoEulerField { bound: degree_bound })
}

fn euler_field_at(f: &Poly, bound: u32) -> Option<EulerField> {
    let n = f.nvars();
    let monos = monomials_up_to(n, bound);
    let df: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
    // unknown (i, mono) -> column; equation per monomial of the product
    let mut rows: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
    let ncols = n * monos.len();
    for (i, dfi) in df.iter().enumerate() {
        for (j, m) in monos.iter().enumerate() {
            for (e, c) in dfi.terms() {
                let key: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                let row = rows.entry(key).or_insert_with(|| vec![Rational::zero(); ncols]);
                row[i * monos.len() + j] += c;
            }
        }
    }
    for e in f.terms().keys() {
        rows.entry(e.clone()).or_insert_with(|| vec![Rational::zero(); ncols]);
    }
    let keys: Vec<Vec<u32>> = rows.keys().cloned().collect();
    let matrix: Vec<Vec<Rational>> = rows.into_values().collect();
    let rhs: Vec<Rational> = keys.iter().map(|k| f.coeff(k)).collect();
    let sol = linalg::solve(&matrix, &rhs)?;
    let coeffs = (0..n)
        .map(|i| Poly::from_terms(n, monos.iter().enumerate().map(|(j, m)| (m.clone(), sol[i * monos.len() + j].clone()))))
        .collect();
    let e = EulerField { coeffs };
    debug_assert!(apply_field(&e, f) == *f);
    Some(e)
}

pub fn apply_field(e: &EulerField, f: &Poly) -> Poly {
    let mut acc = Poly::zero(f.nvars());
    for (i, a) in e.coeffs.iter().enumerate() {
        acc = &acc + &(a * &f.derivative(i));
    }
    acc
}

/// Checks that every generator kills `f^(s+shift)`.
pub fn check_annihilators(f: &Poly, gens: &[WeylElement], shift: &Rational) -> Result<()> {
    let ctx = FractionContext::new(f.clone())?;
    for g in gens {
        if !ctx.act_on_fs(g, shift)?.is_zero() {
            return Err(Error::InvalidAnnihilator(format!("{g} does not annihilate f^(s{})", fmt_shift(shift))));
        }
    }
    Ok(())
}

fn fmt_shift(c: &Rational) -> String {
    if c.is_zero() {
        String::new()
    } else if c.is_negative() {
        format!("{c}")
    } else {
        format!("+{c}")
    }
}

/// Bernstein-Sato polynomial of `f` relative to the annihilator generated by
/// `ann_gens`: the monic generator of `(<ann_gens> + D[s] f) ∩ Q[s]`.
pub fn bs_polynomial(f: &Poly, ann_gens: &[WeylElement], ann_complete: bool) -> Result<BSPolyData> {
    check_nonconstant(f)?;
    let n = f.nvars();
    let sig = AlgebraSignature::with_s(n);
    check_annihilators(f, ann_gens, &Rational::zero())?;
    let mut gens: Vec<WeylElement> = ann_gens.to_vec();
    gens.push(WeylElement::from_poly(sig, f));
    let fpos = gens.len() - 1;
    let front: Vec<usize> = (0..n).flat_map(|i| [sig.x(i), sig.d(i)]).collect();
    let order = MonomialOrder::block(sig, front.clone());
    let basis = buchberger_with(&gens, &order, GbOptions { certificates: true })?;
    let gb = basis.gb()?;
    let certs = basis.certificates.as_ref().expect("tracked");
    let (idx, g) = gb
        .iter()
        .enumerate()
        .find(|(_, g)| front.iter().all(|&s| !g.involves_slot(s)))
        .ok_or_else(|| Error::RootSanity("no nonzero polynomial in s lies in the ideal".into()))?;
    let bpoly = g.as_s_poly().expect("free of x and d");
    let lc = bpoly.leading().cloned().expect("nonzero");
    let b = bpoly.monic();
    let raw_cert = certs[idx][fpos].scale(&(Rational::one() / lc));

    let ctx = FractionContext::new(f.clone())?;
    let certificate = simplify_certificate(f, ann_gens, &raw_cert)?;
    let verified = ctx.act_on_fs(&certificate, &Rational::one())?;
    if !verified.equals_s_poly_times(&ctx, &b, &Rational::zero())? {
        return Err(Error::Inconsistency("functional equation certificate failed to verify".into()));
    }

    let roots = rational_roots(&b)?;
    sanity(&b, &roots, n)?;
    Ok(BSPolyData { b, roots, certificate, ann_complete })
}

/// Reduces the certificate modulo the annihilator of `f^(s+1)` (generators
/// shifted by `s -> s+1`), which does not change its action on `f^(s+1)`.
fn simplify_certificate(f: &Poly, ann_gens: &[WeylElement], cert: &WeylElement) -> Result<WeylElement> {
    if ann_gens.is_empty() {
        return Ok(cert.clone());
    }
    let sig = AlgebraSignature::with_s(f.nvars());
    let shifted: Vec<WeylElement> = ann_gens.iter().map(|g| g.shift_s(&Rational::one())).collect();
    let basis = buchberger(&shifted, &MonomialOrder::sharp(sig))?;
    Ok(normal_form(cert, &basis)?.0)
}

fn sanity(b: &UniPoly, roots: &RootList, n: usize) -> Result<()> {
    let minus_one = -Rational::one();
    if roots.multiplicity(&minus_one) == 0 {
        return Err(Error::RootSanity(format!("s+1 does not divide b(s) = {b}")));
    }
    if roots.cofactor.degree() != Some(0) {
        return Err(Error::RootSanity(format!("b(s) = {b} has non-rational roots")));
    }
    let low = -Rational::from_integer((n as i64).into());
    // -1 itself is always a root (it is the only one for smooth f, even when n = 1)
    for r in roots.roots().filter(|r| **r != minus_one) {
        if !(r > &low && r < &Rational::zero()) {
            return Err(Error::RootSanity(format!("root {r} lies outside (-{n}, 0)")));
        }
    }
    Ok(())
}

/// `prod (s + lambda + 1)^l` over roots `lambda` in the open interval `(-alpha-1, -alpha)`.
pub fn beta_polynomial(bs: &BSPolyData, alpha: &Rational) -> UniPoly {
    let hi = -alpha.clone();
    let lo = &hi - Rational::one();
    let shifts: Vec<(Rational, u32)> = bs
        .roots
        .entries
        .iter()
        .filter(|(r, _)| r > &lo && r < &hi)
        .map(|(r, m)| (r + Rational::one(), *m))
        .collect();
    poly_from_linear_factors(&shifts)
}

/// Passes iff every root lies in the open interval `(-2-alpha, -alpha)`.
pub fn root_window_check(bs: &BSPolyData, alpha: &Rational) -> WindowVerdict {
    let hi = -alpha.clone();
    let lo = &hi - Rational::from_integer(2.into());
    let offending: Vec<Rational> = bs.roots.roots().filter(|r| !(*r > &lo && *r < &hi)).cloned().collect();
    if offending.is_empty() {
        WindowVerdict::Pass
    } else {
        WindowVerdict::Fail { offending }
    }
}

/// Top sharp-degree parts of the reduced basis of the ideal generated by
/// `gens` under the sharp order: generators of the symbol ideal, emitted for
/// inspection of the parametric primality hypothesis.
pub fn sharp_symbols(gens: &[WeylElement]) -> Result<Vec<WeylElement>> {
    let sig = gens.first().ok_or_else(|| Error::InvalidInput("no generators".into()))?.signature();
    let basis = buchberger_with(gens, &MonomialOrder::sharp(sig), GbOptions { certificates: false })?;
    let mut out = Vec::new();
    for g in basis.gb()? {
        let top = g.sharp_order()?;
        let mut sym = WeylElement::zero(sig);
        for (m, c) in g.terms() {
            if m.sharp_weight(&sig) == top {
                sym.add_term(m.clone(), c.clone());
            }
        }
        out.push(sym);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn vars(n: usize) -> Vec<Poly> {
        (0..n).map(|i| Poly::var(n, i)).collect()
    }

    #[test]
    fn smooth_annihilator() {
        let x = Poly::var(1, 0);
        let ops = ann_fs_order1(&x, &int(-1)).unwrap();
        let sig = AlgebraSignature::with_s(1);
        let expected = &(&WeylElement::x(sig, 0) * &WeylElement::d(sig, 0)) - &(&WeylElement::s(sig) - &WeylElement::one(sig));
        assert_eq!(ops, vec![expected]);
    }

    #[test]
    fn euler_fields() {
        let v = vars(2);
        let cusp = &v[0].pow(2) + &v[1].pow(3);
        let e = euler_field(&cusp, 3).unwrap();
        assert_eq!(e.coeffs, vec![v[0].scale(&rat(1, 2)), v[1].scale(&rat(1, 3))]);
        let node = &v[0].pow(2) + &v[1].pow(2);
        assert!(matches!(euler_field(&node, 0), Err(Error::NoEulerField { bound: 0 })));
        let e = euler_field(&node, 1).unwrap();
        assert_eq!(apply_field(&e, &node), node);
    }

    #[test]
    fn bs_of_a_coordinate() {
        let x = Poly::var(1, 0);
        let ann = ann_fs_order1(&x, &int(0)).unwrap();
        let bs = bs_polynomial(&x, &ann, true).unwrap();
        assert_eq!(bs.b, UniPoly::linear(int(1)));
        assert_eq!(bs.certificate, WeylElement::d(AlgebraSignature::with_s(1), 0));
    }

    #[test]
    fn invalid_annihilator_rejected() {
        let x = Poly::var(1, 0);
        let sig = AlgebraSignature::with_s(1);
        let bad = vec![WeylElement::d(sig, 0)];
        assert!(matches!(bs_polynomial(&x, &bad, false), Err(Error::InvalidAnnihilator(_))));
    }

    #[test]
    fn cusp_bs_and_beta() {
        let v = vars(2);
        let cusp = &v[0].pow(2) + &v[1].pow(3);
        let ann = ann_fs_order1(&cusp, &int(0)).unwrap();
        let bs = bs_polynomial(&cusp, &ann, true).unwrap();
        assert_eq!(bs.b, UniPoly::new(vec![rat(35, 36), rat(107, 36), int(3), int(1)]));
        assert_eq!(beta_polynomial(&bs, &int(0)), UniPoly::linear(rat(1, 6)));
        assert_eq!(root_window_check(&bs, &int(0)), WindowVerdict::Pass);
        assert_eq!(root_window_check(&bs, &rat(7, 6)), WindowVerdict::Fail { offending: vec![rat(-7, 6), int(-1), rat(-5, 6)] });
    }
}
