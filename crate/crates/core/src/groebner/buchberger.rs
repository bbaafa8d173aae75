use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};

use super::MonomialOrder;
use crate::arith::{content_scale, Rational};
use crate::error::{Error, Result};
use crate::weyl::{AlgebraSignature, Poly, WeylElement, WeylMonomial};

/// Element keyed by its order key; the leading term is the last entry.
type KPoly = BTreeMap<Vec<u32>, Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbOptions {
    /// Track every basis element as a left combination of the generators.
    pub certificates: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { certificates: true }
    }
}

/// A left ideal given by generators, optionally with its reduced Groebner
/// basis and the cofactors expressing each basis element in the generators.
#[derive(Clone, Debug)]
pub struct LeftIdealBasis {
    pub generators: Vec<WeylElement>,
    pub order: MonomialOrder,
    pub groebner: Option<Vec<WeylElement>>,
    /// `certificates[i][j]` multiplies `generators[j]` in the expression of `groebner[i]`.
    pub certificates: Option<Vec<Vec<WeylElement>>>,
}

impl LeftIdealBasis {
    pub fn new(generators: Vec<WeylElement>, order: MonomialOrder) -> Self {
        LeftIdealBasis { generators, order, groebner: None, certificates: None }
    }

    pub fn gb(&self) -> Result<&[WeylElement]> {
        self.groebner.as_deref().ok_or(Error::MissingGroebner)
    }

    pub fn leading_monomials(&self) -> Result<Vec<WeylMonomial>> {
        Ok(self.gb()?.iter().map(|g| leading(&self.order, g).0).collect())
    }

    pub fn contains(&self, p: &WeylElement) -> Result<bool> {
        Ok(normal_form(p, self)?.0.is_zero())
    }

    /// Leading term of `p` under the basis order.
    pub fn leading(&self, p: &WeylElement) -> (WeylMonomial, Rational) {
        leading(&self.order, p)
    }
}

pub fn leading(order: &MonomialOrder, p: &WeylElement) -> (WeylMonomial, Rational) {
    p.terms()
        .iter()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
        .expect("leading term of zero")
}

struct Entry {
    p: KPoly,
    cert: Vec<WeylElement>,
    lead: WeylMonomial,
    lead_key: Vec<u32>,
    lc: Rational,
}

struct Engine<'a> {
    order: &'a MonomialOrder,
    sig: AlgebraSignature,
    certs: bool,
}

fn axpy(target: &mut KPoly, key: Vec<u32>, v: Rational) {
    use std::collections::btree_map::Entry as E;
    match target.entry(key) {
        E::Occupied(mut o) => {
            *o.get_mut() += v;
            if o.get().is_zero() {
                o.remove();
            }
        }
        E::Vacant(slot) => {
            if !v.is_zero() {
                slot.insert(v);
            }
        }
    }
}

impl<'a> Engine<'a> {
    fn to_k(&self, e: &WeylElement) -> KPoly {
        e.terms().iter().map(|(m, c)| (self.order.key(m), c.clone())).collect()
    }

    fn from_k(&self, p: &KPoly) -> WeylElement {
        let mut out = WeylElement::zero(self.sig);
        for (k, c) in p {
            out.add_term(self.order.decode(k), c.clone());
        }
        out
    }

    /// `p -= factor * m * g`, skipping the key `skip` (known to cancel).
    fn sub_product(&self, p: &mut KPoly, factor: &Rational, m: &WeylMonomial, g: &KPoly, skip: Option<&Vec<u32>>) {
        for (k, c) in g {
            let gm = self.order.decode(k);
            let cc = factor * c;
            for (mm, coef) in crate::weyl::monomial_product(&self.sig, m, &gm) {
                let key = self.order.key(&mm);
                if Some(&key) == skip {
                    continue;
                }
                axpy(p, key, -(&cc * Rational::from_integer(coef)));
            }
        }
    }

    fn sub_cert(&self, cert: &mut [WeylElement], factor: &Rational, m: &WeylMonomial, g: &[WeylElement]) {
        if !self.certs {
            return;
        }
        for (c, gc) in cert.iter_mut().zip(g) {
            if !gc.is_zero() {
                c.add_scaled(&-factor.clone(), &gc.left_mul_monomial(m, &Rational::one()));
            }
        }
    }

    /// Full reduction of `p` against the entries selected by `use_entry`.
    fn reduce(
        &self,
        mut p: KPoly,
        mut cert: Vec<WeylElement>,
        basis: &[Entry],
        use_entry: impl Fn(usize) -> bool,
    ) -> (KPoly, Vec<WeylElement>) {
        let mut rem = KPoly::new();
        while let Some((k, c)) = p.pop_last() {
            let m = self.order.decode(&k);
            let found = basis.iter().enumerate().find(|(i, g)| use_entry(*i) && g.lead.divides(&m));
            match found {
                Some((_, g)) => {
                    let q = m.quotient(&g.lead);
                    let factor = &c / &g.lc;
                    self.sub_product(&mut p, &factor, &q, &g.p, Some(&k));
                    self.sub_cert(&mut cert, &factor, &q, &g.cert);
                }
                None => {
                    rem.insert(k, c);
                }
            }
        }
        (rem, cert)
    }

    fn make_entry(&self, mut p: KPoly, mut cert: Vec<WeylElement>) -> Entry {
        let mut scale = content_scale(p.values());
        if p.last_key_value().expect("nonzero").1.is_negative() {
            scale = -scale;
        }
        if !scale.is_one() {
            for v in p.values_mut() {
                *v *= &scale;
            }
            if self.certs {
                for c in cert.iter_mut() {
                    *c = c.scale(&scale);
                }
            }
        }
        let (lead_key, lc) = p.last_key_value().map(|(k, c)| (k.clone(), c.clone())).expect("nonzero");
        Entry { lead: self.order.decode(&lead_key), lead_key, lc, p, cert }
    }

    fn s_poly(&self, a: &Entry, b: &Entry) -> (KPoly, Vec<WeylElement>) {
        let l = a.lead.lcm(&b.lead);
        let (qa, qb) = (l.quotient(&a.lead), l.quotient(&b.lead));
        let mut p = KPoly::new();
        let mut cert = vec![WeylElement::zero(self.sig); a.cert.len()];
        // p = (qa a)/lc_a - (qb b)/lc_b
        let fa = -(Rational::one() / &a.lc);
        let fb = Rational::one() / &b.lc;
        self.sub_product(&mut p, &fa, &qa, &a.p, None);
        self.sub_product(&mut p, &fb, &qb, &b.p, None);
        self.sub_cert(&mut cert, &fa, &qa, &a.cert);
        self.sub_cert(&mut cert, &fb, &qb, &b.cert);
        (p, cert)
    }
}

pub fn buchberger(gens: &[WeylElement], order: &MonomialOrder) -> Result<LeftIdealBasis> {
    buchberger_with(gens, order, GbOptions::default())
}

/// Reduced left Groebner basis. Pairs are processed smallest lcm first (ties by
/// index) and skipped by the chain criterion only.
pub fn buchberger_with(gens: &[WeylElement], order: &MonomialOrder, opts: GbOptions) -> Result<LeftIdealBasis> {
    let sig = order.signature();
    for g in gens {
        if g.signature() != sig {
            return Err(Error::SignatureMismatch(format!("generator in {:?}, order on {:?}", g.signature(), sig)));
        }
    }
    let eng = Engine { order, sig, certs: opts.certificates };
    let ngens = gens.len();
    let unit = |i: usize| -> Vec<WeylElement> {
        if !opts.certificates {
            return Vec::new();
        }
        (0..ngens).map(|j| if i == j { WeylElement::one(sig) } else { WeylElement::zero(sig) }).collect()
    };

    let mut basis: Vec<Entry> = Vec::new();
    let mut pairs: BTreeSet<(Vec<u32>, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |basis: &mut Vec<Entry>, pairs: &mut BTreeSet<_>, pending: &mut HashSet<_>, e: Entry| {
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let l = g.lead.lcm(&e.lead);
            pairs.insert((order.key(&l), j, i));
            pending.insert((i, j));
        }
        basis.push(e);
    };

    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let (p, cert) = eng.reduce(eng.to_k(g), unit(idx), &basis, |_| true);
        if !p.is_empty() {
            let e = eng.make_entry(p, cert);
            add(&mut basis, &mut pairs, &mut pending, e);
        }
    }

    while let Some((lkey, j, i)) = pairs.pop_first() {
        pending.remove(&(i, j));
        let l = order.decode(&lkey);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let (sp, cert) = eng.s_poly(&basis[i], &basis[j]);
        let (p, cert) = eng.reduce(sp, cert, &basis, |_| true);
        if !p.is_empty() {
            let e = eng.make_entry(p, cert);
            add(&mut basis, &mut pairs, &mut pending, e);
        }
    }

    // minimal basis, then tail reduction
    let nb = basis.len();
    let active: Vec<bool> = (0..nb)
        .map(|i| {
            !(0..nb).any(|j| j != i && basis[j].lead.divides(&basis[i].lead) && (basis[j].lead != basis[i].lead || j < i))
        })
        .collect();
    let mut reduced: Vec<Entry> = Vec::new();
    for i in 0..nb {
        if !active[i] {
            continue;
        }
        let mut p = basis[i].p.clone();
        let (lk, lc) = p.pop_last().expect("nonzero");
        let (mut tail, cert) = eng.reduce(p, basis[i].cert.clone(), &basis, |j| active[j] && j != i);
        tail.insert(lk, lc);
        reduced.push(eng.make_entry(tail, cert));
    }
    reduced.sort_by(|a, b| b.lead_key.cmp(&a.lead_key));

    let groebner = reduced.iter().map(|e| eng.from_k(&e.p)).collect();
    let certificates = if opts.certificates { Some(reduced.into_iter().map(|e| e.cert).collect()) } else { None };
    Ok(LeftIdealBasis { generators: gens.to_vec(), order: order.clone(), groebner: Some(groebner), certificates })
}

/// Remainder of `p` modulo the Groebner basis together with cofactors `q_i`
/// such that `p = sum q_i g_i + remainder`.
pub fn normal_form(p: &WeylElement, basis: &LeftIdealBasis) -> Result<(WeylElement, Vec<WeylElement>)> {
    let gb = basis.gb()?;
    let sig = basis.order.signature();
    if p.signature() != sig {
        return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", p.signature(), sig)));
    }
    let eng = Engine { order: &basis.order, sig, certs: true };
    let entries: Vec<Entry> = gb
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let cert = (0..gb.len()).map(|j| if i == j { WeylElement::one(sig) } else { WeylElement::zero(sig) }).collect();
            let p = eng.to_k(g);
            let (lead_key, lc) = p.last_key_value().map(|(k, c)| (k.clone(), c.clone())).expect("nonzero");
            Entry { lead: basis.order.decode(&lead_key), lead_key, lc, p, cert }
        })
        .collect();
    let zero_cert = vec![WeylElement::zero(sig); gb.len()];
    let (rem, cert) = eng.reduce(eng.to_k(p), zero_cert, &entries, |_| true);
    // the tracked combination is p - remainder expressed with a minus sign
    let quotients = cert.into_iter().map(|c| -&c).collect();
    Ok((eng.from_k(&rem), quotients))
}

/// Elements of the reduced basis under a block order that avoid every slot
/// of `front`; they generate the intersection with the subalgebra of the
/// remaining generators.
pub fn eliminate(gens: &[WeylElement], front: &[usize]) -> Result<Vec<WeylElement>> {
    let sig = gens.first().ok_or_else(|| Error::InvalidInput("no generators".into()))?.signature();
    let order = MonomialOrder::block(sig, front.to_vec());
    let basis = buchberger_with(gens, &order, GbOptions { certificates: false })?;
    Ok(free_of(basis.gb()?, front))
}

pub(crate) fn free_of(gb: &[WeylElement], front: &[usize]) -> Vec<WeylElement> {
    gb.iter().filter(|g| front.iter().all(|&slot| !g.involves_slot(slot))).cloned().collect()
}

/// `{(g, k - sharp(g))}` over basis elements of sharp order at most `k`.
pub fn filtration_intersect(basis: &LeftIdealBasis, k: u32) -> Result<Vec<(WeylElement, u32)>> {
    if !basis.order.is_sharp() {
        return Err(Error::OrderNotSharp);
    }
    let mut out = Vec::new();
    for g in basis.gb()? {
        let o = g.sharp_order()?;
        if o <= k {
            out.push((g.clone(), k - o));
        }
    }
    Ok(out)
}

/// Reduced Groebner basis (graded lex) of a commutative ideal, computed by
/// embedding the polynomials as derivative-free operators.
pub fn commutative_groebner(polys: &[Poly]) -> Result<Vec<Poly>> {
    let n = polys.first().ok_or_else(|| Error::InvalidInput("no generators".into()))?.nvars();
    let sig = AlgebraSignature::plain(n);
    let gens: Vec<WeylElement> = polys.iter().map(|p| WeylElement::from_poly(sig, p)).collect();
    let basis = buchberger_with(&gens, &MonomialOrder::graded_lex(sig), GbOptions { certificates: false })?;
    Ok(basis.gb()?.iter().map(|g| g.as_poly().expect("derivative-free")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn check_certificates(b: &LeftIdealBasis) {
        let gb = b.gb().unwrap();
        for (g, cert) in gb.iter().zip(b.certificates.as_ref().unwrap()) {
            let mut sum = WeylElement::zero(g.signature());
            for (q, gen) in cert.iter().zip(&b.generators) {
                sum = &sum + &(q * gen);
            }
            assert_eq!(&sum, g);
        }
    }

    #[test]
    fn x_and_d_generate_everything() {
        let sig = AlgebraSignature::plain(1);
        let b = buchberger(&[WeylElement::x(sig, 0), WeylElement::d(sig, 0)], &MonomialOrder::graded_lex(sig)).unwrap();
        assert_eq!(b.gb().unwrap(), &[WeylElement::one(sig)]);
        check_certificates(&b);
    }

    #[test]
    fn s_plus_one_appears() {
        let sig = AlgebraSignature::with_s(1);
        let xd = &WeylElement::x(sig, 0) * &WeylElement::d(sig, 0);
        let gens = [&xd - &WeylElement::s(sig), WeylElement::x(sig, 0)];
        let b = buchberger(&gens, &MonomialOrder::graded_lex(sig)).unwrap();
        let target = &WeylElement::s(sig) + &WeylElement::one(sig);
        assert!(b.contains(&target).unwrap());
        check_certificates(&b);
        let elim = eliminate(&gens, &[sig.x(0), sig.d(0)]).unwrap();
        assert_eq!(elim, vec![target]);
    }

    #[test]
    fn principal_ideal() {
        let sig = AlgebraSignature::plain(2);
        let f = &WeylElement::x(sig, 0).pow(2) + &WeylElement::x(sig, 1).pow(3);
        let b = buchberger(&[f.scale(&rat(-3, 2))], &MonomialOrder::graded_lex(sig)).unwrap();
        assert_eq!(b.gb().unwrap(), &[f]);
    }

    #[test]
    fn normal_form_steps() {
        let sig = AlgebraSignature::with_s(1);
        let xd = &WeylElement::x(sig, 0) * &WeylElement::d(sig, 0);
        let g = &xd - &WeylElement::s(sig);
        let b = buchberger(&[g.clone()], &MonomialOrder::graded_lex(sig)).unwrap();
        let (r, q) = normal_form(&xd, &b).unwrap();
        assert_eq!(r, WeylElement::s(sig));
        assert_eq!(&(&q[0] * &b.gb().unwrap()[0]) + &r, xd);
        assert!(normal_form(&g, &b).unwrap().0.is_zero());

        let b2 = buchberger(&[WeylElement::x(sig, 0), WeylElement::s(sig)], &MonomialOrder::graded_lex(sig)).unwrap();
        assert_eq!(normal_form(&WeylElement::one(sig), &b2).unwrap().0, WeylElement::one(sig));
        let missing = LeftIdealBasis::new(vec![g], MonomialOrder::graded_lex(sig));
        assert!(matches!(normal_form(&xd, &missing), Err(Error::MissingGroebner)));
    }

    #[test]
    fn elimination_keeps_x() {
        let sig = AlgebraSignature::with_s(1);
        let gens = [WeylElement::x(sig, 0), WeylElement::s(sig)];
        let elim = eliminate(&gens, &[sig.d(0), sig.s()]).unwrap();
        assert_eq!(elim, vec![WeylElement::x(sig, 0)]);
    }

    #[test]
    fn filtration_levels() {
        let sig = AlgebraSignature::with_s(1);
        let b = buchberger(&[WeylElement::x(sig, 0), WeylElement::s(sig)], &MonomialOrder::sharp(sig)).unwrap();
        let level0 = filtration_intersect(&b, 0).unwrap();
        assert_eq!(level0, vec![(WeylElement::x(sig, 0), 0)]);
        assert_eq!(filtration_intersect(&b, 3).unwrap().len(), 2);
        let unit = buchberger(&[WeylElement::constant(sig, int(5))], &MonomialOrder::sharp(sig)).unwrap();
        assert_eq!(filtration_intersect(&unit, 0).unwrap(), vec![(WeylElement::one(sig), 0)]);
        let graded = buchberger(&[WeylElement::x(sig, 0)], &MonomialOrder::graded_lex(sig)).unwrap();
        assert!(matches!(filtration_intersect(&graded, 0), Err(Error::OrderNotSharp)));
    }

    #[test]
    fn commutative_basis() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let gb = commutative_groebner(&[&x * &y, &(&x * &x) - &y]).unwrap();
        // y^2 = x^3 y / ... : the ideal contains y^2 since x*(x y) - y*(x^2 - y) = y^2
        let y2 = &y * &y;
        assert!(gb.iter().any(|g| g == &y2));
    }
}
