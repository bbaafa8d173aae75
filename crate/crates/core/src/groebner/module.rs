use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};

use crate::arith::{content_scale, Rational};
use crate::error::{Error, Result};
use crate::weyl::{grlex_cmp, Poly};

/// Relations `(a_1..a_r)` with `sum a_i p_i = 0` generating the syzygy module
/// of the input tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyBasis {
    pub relations: Vec<Vec<Poly>>,
}

// Key of a term of a module element over Q[x]: (priority, degree, exponents...)
// with priority = rank - position, so lower positions dominate (position over
// term, graded lex inside a position).
type MKey = Vec<u32>;
type MPoly = BTreeMap<MKey, Rational>;

fn lead(p: &MPoly) -> (&MKey, &Rational) {
    p.last_key_value().expect("nonzero module element")
}

/// Groebner basis of a submodule of `Q[x]^rank`, maintained incrementally:
/// after every `insert` the stored elements form a Groebner basis of the
/// module generated so far. Position 0 is the most significant.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    n: usize,
    rank: usize,
    basis: Vec<MPoly>,
    pending: HashSet<(usize, usize)>,
}

impl ModuleGb {
    pub fn new(n: usize, rank: usize) -> Self {
        ModuleGb { n, rank, basis: Vec::new(), pending: HashSet::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn key(&self, pos: usize, exps: &[u32]) -> MKey {
        let mut k = Vec::with_capacity(self.n + 2);
        k.push((self.rank - pos) as u32);
        k.push(exps.iter().sum());
        k.extend_from_slice(exps);
        k
    }

    fn pos(&self, k: &MKey) -> usize {
        self.rank - k[0] as usize
    }

    fn encode(&self, v: &[Poly]) -> MPoly {
        assert_eq!(v.len(), self.rank, "module element of the wrong rank");
        let mut out = MPoly::new();
        for (pos, p) in v.iter().enumerate() {
            for (e, c) in p.terms() {
                out.insert(self.key(pos, e), c.clone());
            }
        }
        out
    }

    fn decode(&self, p: &MPoly) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.n); self.rank];
        for (k, c) in p {
            out[self.pos(k)].add_term(k[2..].to_vec(), c.clone());
        }
        out
    }

    fn divides(a: &MKey, b: &MKey) -> bool {
        a[0] == b[0] && a[2..].iter().zip(&b[2..]).all(|(x, y)| x <= y)
    }

    fn sub_shifted(target: &mut MPoly, factor: &Rational, shift: &[u32], src: &MPoly, skip_lead: bool) {
        let total: u32 = shift.iter().sum();
        let mut it = src.iter().rev();
        if skip_lead {
            it.next();
        }
        for (k, v) in it {
            let mut nk = k.clone();
            for (e, s) in nk[2..].iter_mut().zip(shift) {
                *e += s;
            }
            nk[1] += total;
            let delta = -(factor * v);
            match target.get_mut(&nk) {
                Some(cur) => {
                    *cur += delta;
                    if cur.is_zero() {
                        target.remove(&nk);
                    }
                }
                None => {
                    target.insert(nk, delta);
                }
            }
        }
    }

    fn reduce_raw(basis: &[MPoly], mut p: MPoly, skip: Option<usize>) -> MPoly {
        let mut rem = MPoly::new();
        while let Some((k, c)) = p.pop_last() {
            let found = basis.iter().enumerate().find(|(i, g)| Some(*i) != skip && Self::divides(lead(g).0, &k));
            match found {
                Some((_, g)) => {
                    let (gk, gc) = lead(g);
                    let shift: Vec<u32> = k[2..].iter().zip(&gk[2..]).map(|(a, b)| a - b).collect();
                    let factor = &c / gc;
                    Self::sub_shifted(&mut p, &factor, &shift, g, true);
                }
                None => {
                    rem.insert(k, c);
                }
            }
        }
        rem
    }

    fn normalize(p: &mut MPoly) {
        let mut scale = content_scale(p.values());
        if lead(p).1.is_negative() {
            scale = -scale;
        }
        if !scale.is_one() {
            for v in p.values_mut() {
                *v *= &scale;
            }
        }
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        self.decode(&Self::reduce_raw(&self.basis, self.encode(v), None))
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        Self::reduce_raw(&self.basis, self.encode(v), None).is_empty()
    }

    /// Adds `v` to the module; returns false if it was already a member.
    pub fn insert(&mut self, v: &[Poly]) -> bool {
        let r = Self::reduce_raw(&self.basis, self.encode(v), None);
        if r.is_empty() {
            return false;
        }
        let mut pairs: BTreeSet<(Vec<u32>, usize, usize)> = BTreeSet::new();
        self.push(r, &mut pairs);
        while let Some((_, j, i)) = pairs.pop_first() {
            self.pending.remove(&(i, j));
            let (ki, kj) = (lead(&self.basis[i]).0.clone(), lead(&self.basis[j]).0.clone());
            let l: Vec<u32> = ki[2..].iter().zip(&kj[2..]).map(|(x, y)| *x.max(y)).collect();
            let mut lkey = ki.clone();
            lkey[2..].copy_from_slice(&l);
            lkey[1] = l.iter().sum();
            let chain = (0..self.basis.len()).any(|k| {
                k != i
                    && k != j
                    && Self::divides(lead(&self.basis[k]).0, &lkey)
                    && !self.pending.contains(&(i.min(k), i.max(k)))
                    && !self.pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let shift = |k: &MKey| -> Vec<u32> { l.iter().zip(&k[2..]).map(|(a, b)| a - b).collect() };
            let mut s = MPoly::new();
            let fi = -(Rational::one() / lead(&self.basis[i]).1);
            let fj = Rational::one() / lead(&self.basis[j]).1;
            Self::sub_shifted(&mut s, &fi, &shift(&ki), &self.basis[i], true);
            Self::sub_shifted(&mut s, &fj, &shift(&kj), &self.basis[j], true);
            let r = Self::reduce_raw(&self.basis, s, None);
            if !r.is_empty() {
                self.push(r, &mut pairs);
            }
        }
        true
    }

    fn push(&mut self, mut p: MPoly, pairs: &mut BTreeSet<(Vec<u32>, usize, usize)>) {
        Self::normalize(&mut p);
        let j = self.basis.len();
        let lk = lead(&p).0.clone();
        for (i, g) in self.basis.iter().enumerate() {
            let gk = lead(g).0;
            if gk[0] == lk[0] {
                let l: Vec<u32> = gk[2..].iter().zip(&lk[2..]).map(|(x, y)| *x.max(y)).collect();
                let mut sort = vec![l.iter().sum::<u32>()];
                sort.extend(&l);
                pairs.insert((sort, j, i));
                self.pending.insert((i, j));
            }
        }
        self.basis.push(p);
    }

    /// The reduced Groebner basis, sorted by leading term (largest first).
    pub fn reduced_basis(&self) -> Vec<Vec<Poly>> {
        let nb = self.basis.len();
        let keep: Vec<usize> = (0..nb)
            .filter(|&i| {
                let li = lead(&self.basis[i]).0;
                !(0..nb).any(|j| {
                    let lj = lead(&self.basis[j]).0;
                    j != i && Self::divides(lj, li) && (lj != li || j < i)
                })
            })
            .collect();
        let kept: Vec<MPoly> = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut out: Vec<MPoly> = Vec::new();
        for (idx, g) in kept.iter().enumerate() {
            let mut p = g.clone();
            let (lk, lc) = p.pop_last().expect("nonzero");
            let mut r = Self::reduce_raw(&kept, p, Some(idx));
            r.insert(lk, lc);
            Self::normalize(&mut r);
            out.push(r);
        }
        out.sort_by(|a, b| lead(b).0.cmp(lead(a).0));
        out.iter().map(|p| self.decode(p)).collect()
    }

    /// Position of the leading term of a nonzero element.
    pub fn leading_position(&self, v: &[Poly]) -> Option<usize> {
        let p = self.encode(v);
        p.last_key_value().map(|(k, _)| self.pos(k))
    }
}

/// Generators of the syzygy module of `polys`, from the position-over-term
/// Groebner basis of the rows `(p_i, e_i)`: basis elements with vanishing
/// first component are exactly the syzygies.
pub fn commutative_syzygies(polys: &[Poly]) -> Result<SyzygyBasis> {
    let first = polys.first().ok_or_else(|| Error::InvalidInput("no polynomials".into()))?;
    let n = first.nvars();
    let r = polys.len();
    let mut gb = ModuleGb::new(n, r + 1);
    for (i, p) in polys.iter().enumerate() {
        let mut row = vec![Poly::zero(n); r + 1];
        row[0] = p.clone();
        row[i + 1] = Poly::one(n);
        gb.insert(&row);
    }
    let mut relations: Vec<Vec<Poly>> =
        gb.reduced_basis().into_iter().filter(|g| g[0].is_zero()).map(|g| g[1..].to_vec()).collect();
    relations.sort_by(|a, b| cmp_relation(a, b));
    Ok(SyzygyBasis { relations })
}

/// Intersection of two submodules of `Q[x]^rank` given by generators.
pub fn module_intersection(n: usize, rank: usize, a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let mut gb = ModuleGb::new(n, 2 * rank);
    let zero = vec![Poly::zero(n); rank];
    for g in a {
        let mut row = g.clone();
        row.extend(g.iter().cloned());
        gb.insert(&row);
    }
    for g in b {
        let mut row = g.clone();
        row.extend(zero.iter().cloned());
        gb.insert(&row);
    }
    gb.reduced_basis().into_iter().filter(|g| g[..rank].iter().all(|p| p.is_zero())).map(|g| g[rank..].to_vec()).collect()
}

fn cmp_relation(a: &[Poly], b: &[Poly]) -> std::cmp::Ordering {
    for (p, q) in a.iter().zip(b) {
        let lp = p.leading().map(|(e, _)| e.clone());
        let lq = q.leading().map(|(e, _)| e.clone());
        let ord = match (lp, lq) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(x), Some(y)) => grlex_cmp(&x, &y),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn check(polys: &[Poly], syz: &SyzygyBasis) {
        for rel in &syz.relations {
            let mut sum = Poly::zero(polys[0].nvars());
            for (a, p) in rel.iter().zip(polys) {
                sum = &sum + &(a * p);
            }
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn smooth_line() {
        let x = Poly::var(1, 0);
        let polys = [Poly::one(1), -&x];
        let syz = commutative_syzygies(&polys).unwrap();
        check(&polys, &syz);
        assert_eq!(syz.relations, vec![vec![x, Poly::one(1)]]);
    }

    #[test]
    fn cusp_jacobian() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = &x.pow(2) + &y.pow(3);
        let polys = [f.derivative(0), f.derivative(1), -&f];
        let syz = commutative_syzygies(&polys).unwrap();
        check(&polys, &syz);
        assert!(syz.relations.len() >= 2);
        // some relation has a nonzero constant last entry (an Euler relation)
        assert!(syz.relations.iter().any(|r| r[2].is_constant() && !r[2].is_zero()));
    }

    #[test]
    fn incremental_membership() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let mut gb = ModuleGb::new(2, 2);
        assert!(gb.insert(&[x.clone(), y.clone()]));
        assert!(gb.insert(&[y.clone(), Poly::zero(2)]));
        // y*(x, y) - x*(y, 0) = (0, y^2)
        assert!(gb.contains(&[Poly::zero(2), &y * &y]));
        assert!(!gb.contains(&[Poly::zero(2), y.clone()]));
        assert!(!gb.insert(&[x.scale(&int(3)), y.scale(&int(3))]));
    }

    #[test]
    fn intersection_of_ideals() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let meet = module_intersection(2, 1, &[vec![x.clone()]], &[vec![y.clone()]]);
        assert_eq!(meet, vec![vec![&x * &y]]);
    }
}
