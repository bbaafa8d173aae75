use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::linalg::solve;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::weyl::Poly;

/// Newton polyhedron of `f`: the convex hull of its exponents plus the
/// positive orthant, stored as supporting inequalities `<w, a> >= 1` with
/// `w >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub exponents: Vec<Vec<u32>>,
    pub inequalities: Vec<Vec<Rational>>,
}

fn r(i: u32) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

fn dot(w: &[Rational], a: &[u32]) -> Rational {
    w.iter().zip(a).map(|(x, &y)| x * r(y)).sum()
}

fn subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, size, i + 1, cur, out);
        cur.pop();
    }
}

impl NewtonPolyhedron {
    pub fn new(f: &Poly) -> Result<Self> {
        let exponents: Vec<Vec<u32>> = f.terms().keys().cloned().collect();
        if exponents.is_empty() {
            return Err(Error::InvalidInput("the zero polynomial has no Newton polyhedron".into()));
        }
        let n = f.nvars();
        let mut inequalities: Vec<Vec<Rational>> = Vec::new();
        if exponents.iter().any(|e| e.iter().all(|&x| x == 0)) {
            return Ok(NewtonPolyhedron { exponents, inequalities });
        }
        // Candidate normals: some coordinates forced to zero, the rest fixed
        // by requiring <w, p> = 1 on enough exponents.
        for zeros in 0..n {
            let mut zsets = Vec::new();
            subsets(n, zeros, 0, &mut Vec::new(), &mut zsets);
            for z in zsets {
                let free: Vec<usize> = (0..n).filter(|i| !z.contains(i)).collect();
                let mut psets = Vec::new();
                subsets(exponents.len(), free.len(), 0, &mut Vec::new(), &mut psets);
                for ps in psets {
                    let rows: Vec<Vec<Rational>> = ps.iter().map(|&p| free.iter().map(|&i| r(exponents[p][i])).collect()).collect();
                    let Some(sol) = solve(&rows, &vec![Rational::one(); ps.len()]) else { continue };
                    // the solution must be unique: the chosen points independent
                    if !crate::arith::linalg::nullspace(&rows, free.len()).is_empty() {
                        continue;
                    }
                    let mut w = vec![Rational::zero(); n];
                    for (k, &i) in free.iter().enumerate() {
                        w[i] = sol[k].clone();
                    }
                    if w.iter().any(|x| x < &Rational::zero()) {
                        continue;
                    }
                    if exponents.iter().all(|e| dot(&w, e) >= Rational::one()) && !inequalities.contains(&w) {
                        inequalities.push(w);
                    }
                }
            }
        }
        inequalities.sort();
        Ok(NewtonPolyhedron { exponents, inequalities })
    }

    /// True if `a + (1,...,1)` lies in the interior of `c` times the polyhedron.
    pub fn interior_shifted(&self, a: &[u32], c: &Rational) -> bool {
        let shifted: Vec<u32> = a.iter().map(|x| x + 1).collect();
        self.inequalities.iter().all(|w| dot(w, &shifted) > c.clone())
    }

    /// True if `a + (1,...,1)` lies in `c` times the polyhedron.
    pub fn closed_shifted(&self, a: &[u32], c: &Rational) -> bool {
        let shifted: Vec<u32> = a.iter().map(|x| x + 1).collect();
        self.inequalities.iter().all(|w| dot(w, &shifted) >= c.clone())
    }
}

/// Generators of the multiplier ideal of `f^c` for Newton-nondegenerate `f`,
/// as monomials (or `f` times them for `c >= 1`).
pub fn newton_multiplier(f: &Poly, c: &Rational) -> Result<Vec<Poly>> {
    if c < &Rational::zero() {
        return Err(Error::InvalidInput("negative exponent".into()));
    }
    if c >= &Rational::one() {
        let inner = newton_multiplier(f, &(c - Rational::one()))?;
        return Ok(inner.iter().map(|g| g * f).collect());
    }
    let poly = NewtonPolyhedron::new(f)?;
    monomial_generators(f.nvars(), |a| poly.interior_shifted(a, c))
}

/// Generators of the multiplier ideal of `f^(c - eps)` for small `eps > 0`.
pub fn newton_multiplier_left(f: &Poly, c: &Rational) -> Result<Vec<Poly>> {
    if c < &Rational::zero() {
        return Err(Error::InvalidInput("negative exponent".into()));
    }
    if c > &Rational::one() {
        let inner = newton_multiplier_left(f, &(c - Rational::one()))?;
        return Ok(inner.iter().map(|g| g * f).collect());
    }
    let poly = NewtonPolyhedron::new(f)?;
    monomial_generators(f.nvars(), |a| poly.closed_shifted(a, c))
}

/// Minimal monomials satisfying an upward-closed membership test.
fn monomial_generators(n: usize, member: impl Fn(&[u32]) -> bool) -> Result<Vec<Poly>> {
    // along each axis, the first exponent that is inside
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = vec![0u32; n];
        while !member(&a) {
            a[i] += 1;
            if a[i] > 256 {
                return Err(Error::InvalidInput("f is not convenient along an axis; multiplier ideal is not monomial-finite".into()));
            }
        }
        bounds.push(a[i]);
    }
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut a = vec![0u32; n];
    loop {
        if member(&a) {
            members.push(a.clone());
        }
        let mut i = 0;
        while i < n {
            if a[i] < bounds[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let minimal: Vec<&Vec<u32>> = members
        .iter()
        .filter(|m| !members.iter().any(|o| o != *m && o.iter().zip(m.iter()).all(|(x, y)| x <= y)))
        .collect();
    let mut gens: Vec<Poly> = minimal.into_iter().map(|m| Poly::monomial(n, m.clone(), Rational::one())).collect();
    gens.sort_by(|p, q| {
        let a = p.leading().map(|(e, _)| e.clone()).unwrap_or_default();
        let b = q.leading().map(|(e, _)| e.clone()).unwrap_or_default();
        crate::weyl::grlex_cmp(&b, &a)
    });
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn cusp() -> Poly {
        &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3)
    }

    #[test]
    fn cusp_facet() {
        let p = NewtonPolyhedron::new(&cusp()).unwrap();
        assert!(p.inequalities.contains(&vec![rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn cusp_thresholds() {
        let f = cusp();
        assert_eq!(newton_multiplier(&f, &rat(4, 5)).unwrap(), vec![Poly::one(2)]);
        assert_eq!(newton_multiplier(&f, &rat(5, 6)).unwrap(), vec![Poly::var(2, 0), Poly::var(2, 1)]);
        assert_eq!(newton_multiplier(&f, &rat(1, 1)).unwrap(), vec![f.clone()]);
    }

    #[test]
    fn left_limits() {
        let f = cusp();
        assert_eq!(newton_multiplier_left(&f, &rat(5, 6)).unwrap(), vec![Poly::one(2)]);
        assert_eq!(newton_multiplier_left(&f, &rat(1, 1)).unwrap(), vec![Poly::var(2, 0), Poly::var(2, 1)]);
        assert_eq!(newton_multiplier_left(&f, &rat(0, 1)).unwrap(), vec![Poly::one(2)]);
        let x = Poly::var(1, 0);
        assert_eq!(newton_multiplier_left(&x, &rat(1, 2)).unwrap(), vec![Poly::one(1)]);
        assert_eq!(newton_multiplier_left(&x, &rat(3, 2)).unwrap(), vec![x.clone()]);
        assert_eq!(newton_multiplier_left(&x, &rat(1, 1)).unwrap(), vec![Poly::one(1)]);
    }

    #[test]
    fn smooth_floor() {
        let x = Poly::var(1, 0);
        assert_eq!(newton_multiplier(&x, &rat(3, 2)).unwrap(), vec![x.clone()]);
        assert_eq!(newton_multiplier(&x, &rat(1, 2)).unwrap(), vec![Poly::one(1)]);
    }
}
