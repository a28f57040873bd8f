//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

/// Maximum number of variables supported by a session.
pub const MAX_VARS: usize = 8;

/// An exponent vector; entries past the session's variable count are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn from_exps(e: &[u32]) -> Monomial {
        let mut m = [0u16; MAX_VARS];
        for (k, &x) in e.iter().enumerate() {
            m[k] = u16::try_from(x).expect("exponent overflow");
        }
        Monomial(m)
    }

    pub fn var(k: usize, e: u32) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[k] = u16::try_from(e).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn exp(&self, k: usize) -> u32 {
        self.0[k] as u32
    }

    #[inline]
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn weighted(&self, w: &[i64]) -> i64 {
        w.iter().zip(self.0.iter()).map(|(&a, &e)| a * e as i64).sum()
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = self.0;
        for k in 0..MAX_VARS {
            r[k] = r[k].checked_add(o.0[k]).expect("exponent overflow");
        }
        Monomial(r)
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    #[inline]
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut r = [0u16; MAX_VARS];
        for k in 0..MAX_VARS {
            r[k] = o.0[k] - self.0[k];
        }
        Monomial(r)
    }

    #[inline]
    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut r = [0u16; MAX_VARS];
        for k in 0..MAX_VARS {
            r[k] = self.0[k].max(o.0[k]);
        }
        Monomial(r)
    }

    #[inline]
    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        let mut r = self.0;
        for x in r.iter_mut() {
            *x = u16::try_from(*x as u32 * e).expect("exponent overflow");
        }
        Monomial(r)
    }

    /// Bit mask used to reject divisibility quickly.
    #[inline]
    pub fn mask(&self) -> u32 {
        let mut m = 0u32;
        for k in 0..MAX_VARS {
            let e = self.0[k];
            if e >= 1 {
                m |= 1 << (4 * k);
            }
            if e >= 2 {
                m |= 1 << (4 * k + 1);
            }
            if e >= 4 {
                m |= 1 << (4 * k + 2);
            }
            if e >= 8 {
                m |= 1 << (4 * k + 3);
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Grevlex,
    Lex,
    GradedLex,
}

/// A monomial order: a kind plus a variable precedence (`precedence[0]` is the largest variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub precedence: Vec<usize>,
    pub weights: Vec<i64>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, precedence: (0..nvars).collect(), weights: vec![1; nvars] }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_precedence(mut self, precedence: Vec<usize>) -> Self {
        assert_eq!(precedence.len(), self.precedence.len());
        self.precedence = precedence;
        self
    }

    pub fn with_weights(mut self, weights: Vec<i64>) -> Self {
        assert_eq!(weights.len(), self.precedence.len());
        self.weights = weights;
        self
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn is_graded(&self) -> bool {
        self.kind != OrderKind::Lex
    }

    /// Comparison ignoring the weighted degree (the tie-break part).
    #[inline]
    pub fn tiebreak(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex | OrderKind::GradedLex => {
                for &v in &self.precedence {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => {
                for &v in self.precedence.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.is_graded() {
            match a.weighted(&self.weights).cmp(&b.weighted(&self.weights)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.tiebreak(a, b)
    }
}

/// Compare two monomials in the given order.
pub fn compare_monomials(a: &Monomial, b: &Monomial, order: &MonomialOrder) -> Ordering {
    order.cmp(a, b)
}
