use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{content_scale, Rational, UniPoly};
use crate::error::{Error, Result};

/// Rational roots of a polynomial with multiplicities.
///
/// `leading * prod (x - root)^mult * cofactor` reproduces the input exactly;
/// `cofactor` is monic and has no rational roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootList {
    pub entries: Vec<(Rational, u32)>,
    pub cofactor: UniPoly,
    pub leading: Rational,
}

impl RootList {
    pub fn multiplicity(&self, root: &Rational) -> u32 {
        self.entries.iter().find(|(r, _)| r == root).map_or(0, |(_, m)| *m)
    }

    pub fn roots(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|(r, _)| r)
    }

    pub fn reconstruct(&self) -> UniPoly {
        let shifts: Vec<(Rational, u32)> = self.entries.iter().map(|(r, m)| (-r, *m)).collect();
        (&poly_from_linear_factors(&shifts) * &self.cofactor).scale(&self.leading)
    }
}

/// `prod (x + shift)^mult`; the empty product is `1`.
pub fn poly_from_linear_factors(entries: &[(Rational, u32)]) -> UniPoly {
    entries
        .iter()
        .fold(UniPoly::one(), |acc, (shift, mult)| &acc * &UniPoly::linear(shift.clone()).pow(*mult))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d.saturating_mul(d) <= small {
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
        out.sort();
        return out;
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// All rational roots with multiplicities, by the rational-root theorem on the
/// primitive integer form, deflating after each hit.
pub fn rational_roots(p: &UniPoly) -> Result<RootList> {
    if p.is_zero() {
        return Err(Error::InvalidInput("rational_roots of the zero polynomial".into()));
    }
    let leading = p.leading().cloned().expect("nonzero");
    let mut rest = p.monic();
    let mut entries: Vec<(Rational, u32)> = Vec::new();

    let mut zero_mult = 0;
    while rest.coeff(0).is_zero() && rest.degree() > Some(0) {
        rest = rest.div_rem(&UniPoly::x()).0;
        zero_mult += 1;
    }
    if zero_mult > 0 {
        entries.push((Rational::zero(), zero_mult));
    }

    if rest.degree().unwrap_or(0) > 0 {
        let scale = content_scale(rest.coeffs());
        let ints: Vec<BigInt> = rest.scale(&scale).coeffs().iter().map(|c| c.to_integer()).collect();
        let nums = divisors(&ints[0]);
        let dens = divisors(ints.last().expect("nonempty"));
        let mut candidates: Vec<Rational> = Vec::new();
        for q in &dens {
            for pn in &nums {
                if pn.gcd(q).is_one() {
                    candidates.push(Rational::new(pn.clone(), q.clone()));
                    candidates.push(Rational::new(-pn.clone(), q.clone()));
                }
            }
        }
        candidates.sort();
        for r in candidates {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let factor = UniPoly::linear(-r.clone());
            let mut mult = 0;
            while rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
                rest = rest.div_rem(&factor).0;
                mult += 1;
            }
            if mult > 0 {
                entries.push((r, mult));
            }
        }
    }

    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let list = RootList { entries, cofactor: rest.monic(), leading };
    if &list.reconstruct() != p {
        return Err(Error::Inconsistency("rational root reconstruction failed".into()));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn repeated_linear_factor() {
        let p = UniPoly::linear(int(1)).pow(2);
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots.entries, vec![(int(-1), 2)]);
        assert_eq!(roots.cofactor, UniPoly::one());
    }

    #[test]
    fn cusp_bernstein_sato_roots() {
        // expanded (s+1)(s+5/6)(s+7/6) by hand: s^3 + 3s^2 + 107/36 s + 35/36
        let p = UniPoly::new(vec![rat(35, 36), rat(107, 36), int(3), int(1)]);
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots.entries, vec![(rat(-7, 6), 1), (int(-1), 1), (rat(-5, 6), 1)]);
    }

    #[test]
    fn no_rational_roots() {
        let p = UniPoly::new(vec![int(1), int(0), int(1)]);
        let roots = rational_roots(&p).unwrap();
        assert!(roots.entries.is_empty());
        assert_eq!(roots.cofactor, p);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(rational_roots(&UniPoly::zero()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_root_and_scalar() {
        let p = (&UniPoly::x().pow(3) * &UniPoly::linear(rat(2, 3))).scale(&int(-4));
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots.entries, vec![(rat(-2, 3), 1), (int(0), 3)]);
        assert_eq!(roots.leading, int(-4));
    }

    #[test]
    fn linear_factor_products() {
        assert_eq!(poly_from_linear_factors(&[]), UniPoly::one());
        assert_eq!(poly_from_linear_factors(&[(rat(1, 6), 1)]), UniPoly::linear(rat(1, 6)));
        assert_eq!(poly_from_linear_factors(&[(int(0), 2)]), UniPoly::x().pow(2));
    }
}
