use std::cmp::Ordering;

use crate::weyl::{AlgebraSignature, WeylMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GradedLex,
    /// `|b| + c` first, then total degree, then lex.
    SharpGraded,
    /// Total degree in the `front` slots first, then total degree, then lex.
    Block { front: Vec<usize> },
}

/// Admissible monomial order on a fixed signature. Each monomial is mapped to
/// a sort key (a few weights followed by the exponents in tie-break order) and
/// keys are compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    sig: AlgebraSignature,
    kind: OrderKind,
    perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(sig: AlgebraSignature, kind: OrderKind) -> Self {
        MonomialOrder { sig, kind, perm: (0..sig.slots()).collect() }
    }

    pub fn graded_lex(sig: AlgebraSignature) -> Self {
        Self::new(sig, OrderKind::GradedLex)
    }

    pub fn sharp(sig: AlgebraSignature) -> Self {
        Self::new(sig, OrderKind::SharpGraded)
    }

    pub fn block(sig: AlgebraSignature, front: Vec<usize>) -> Self {
        Self::new(sig, OrderKind::Block { front })
    }

    /// Replaces the lex tie-break: `perm[0]` is the most significant slot.
    pub fn with_perm(mut self, perm: Vec<usize>) -> Self {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..self.sig.slots()).collect::<Vec<_>>(), "not a permutation of the slots");
        self.perm = perm;
        self
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn is_sharp(&self) -> bool {
        self.kind == OrderKind::SharpGraded
    }

    fn nweights(&self) -> usize {
        match self.kind {
            OrderKind::GradedLex => 1,
            _ => 2,
        }
    }

    pub fn key(&self, m: &WeylMonomial) -> Vec<u32> {
        let e = m.exps();
        let mut key = Vec::with_capacity(self.nweights() + e.len());
        match &self.kind {
            OrderKind::GradedLex => key.push(m.total_degree()),
            OrderKind::SharpGraded => {
                key.push(m.sharp_weight(&self.sig));
                key.push(m.total_degree());
            }
            OrderKind::Block { front } => {
                key.push(front.iter().map(|&i| e[i]).sum());
                key.push(m.total_degree());
            }
        }
        key.extend(self.perm.iter().map(|&i| e[i]));
        key
    }

    pub fn decode(&self, key: &[u32]) -> WeylMonomial {
        let w = self.nweights();
        let mut e = vec![0; self.sig.slots()];
        for (pos, &slot) in self.perm.iter().enumerate() {
            e[slot] = key[w + pos];
        }
        WeylMonomial(e)
    }

    pub fn cmp(&self, a: &WeylMonomial, b: &WeylMonomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_round_trip_and_sharp_priority() {
        let sig = AlgebraSignature::with_s(2);
        let ord = MonomialOrder::sharp(sig).with_perm(vec![6, 5, 4, 3, 2, 1, 0]);
        let mut a = WeylMonomial::one(&sig);
        a.0[sig.x(0)] = 5;
        let mut b = WeylMonomial::one(&sig);
        b.0[sig.s()] = 1;
        assert_eq!(ord.decode(&ord.key(&a)), a);
        assert_eq!(ord.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates() {
        let sig = AlgebraSignature::with_s(1);
        let ord = MonomialOrder::block(sig, vec![sig.x(0), sig.d(0)]);
        let mut a = WeylMonomial::one(&sig);
        a.0[sig.x(0)] = 1;
        let mut b = WeylMonomial::one(&sig);
        b.0[sig.s()] = 7;
        assert_eq!(ord.cmp(&a, &b), Ordering::Greater);
    }
}
