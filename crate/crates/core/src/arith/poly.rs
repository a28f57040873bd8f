//! Sparse polynomials over 𝔽_p in canonical (descending) term order.

use std::collections::HashMap;
use std::fmt;

use super::field;
use super::monomial::Monomial;
use super::ring::{same_session, RingRef};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.ring.same(&o.ring) && self.terms == o.terms
    }
}
impl Eq for Poly {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Pow(u64),
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly { ring: ring.clone(), terms: vec![] }
    }

    pub fn constant(ring: &RingRef, c: i64) -> Poly {
        Poly::monomial(ring, Monomial::ONE, field::from_i64(c, ring.p()))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: u32) -> Poly {
        let c = c % ring.p();
        let terms = if c == 0 { vec![] } else { vec![(m, c)] };
        Poly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &RingRef, k: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(k, 1), 1)
    }

    /// Build from arbitrary (possibly repeated, unreduced) terms.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Poly {
        let p = ring.p();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = field::add(*e, c % p, p);
        }
        let mut v: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let ord = ring.order().clone();
        v.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms: v }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.iter().find(|(a, _)| a == m).map(|t| t.1).unwrap_or(0)
    }

    /// Weighted (unscaled) degree of each term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        let w = self.ring.weights();
        self.terms.iter().map(|(m, _)| m.weighted(w)).max()
    }

    /// Degree if homogeneous with respect to the session weights.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let w = self.ring.weights();
        let d = self.terms.first()?.0.weighted(w);
        self.terms.iter().all(|(m, _)| m.weighted(w) == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.ring.p();
        let c = c % p;
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|&(m, a)| (m, field::mul(a, c, p))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Poly {
        let p = self.ring.p();
        let c = c % p;
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        // multiplication by a monomial preserves any monomial order
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|&(a, b)| (a.mul(m), field::mul(b, c, p))).collect() }
    }

    fn merge(&self, o: &Poly, sign: bool) -> Poly {
        let p = self.ring.p();
        let ord = self.ring.order();
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match ord.cmp(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, if sign { field::neg(b[j].1, p) } else { b[j].1 }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if sign { field::sub(a[i].1, b[j].1, p) } else { field::add(a[i].1, b[j].1, p) };
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(m, c)| (m, if sign { field::neg(c, p) } else { c })));
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, o: &Poly) -> Result<Poly> {
        same_session(&self.ring, &o.ring)?;
        Ok(self.merge(o, false))
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly> {
        same_session(&self.ring, &o.ring)?;
        Ok(self.merge(o, true))
    }

    pub fn mul(&self, o: &Poly) -> Result<Poly> {
        same_session(&self.ring, &o.ring)?;
        let p = self.ring.p();
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(self.len() * o.len());
        for &(a, c) in &self.terms {
            for &(b, d) in &o.terms {
                let e = acc.entry(a.mul(&b)).or_insert(0);
                *e = field::add(*e, field::mul(c, d, p), p);
            }
        }
        Ok(Poly::from_terms(&self.ring, acc))
    }

    pub fn pow(&self, k: u64) -> Poly {
        let mut result = Poly::constant(&self.ring, 1);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }

    /// Dispatch for the four arithmetic operations.
    pub fn arith(&self, o: &Poly, op: PolyOp) -> Result<Poly> {
        match op {
            PolyOp::Add => self.add(o),
            PolyOp::Sub => self.sub(o),
            PolyOp::Mul => self.mul(o),
            PolyOp::Pow(k) => Ok(self.pow(k)),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.ring.p() - 1)
    }

    /// The term-wise map c·x^a ↦ c·x^{q·a} (equal to f^q when q is a power of p).
    pub fn frobenius_power_q(&self, q: u32) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|&(m, c)| (m.pow(q), c)).collect() }
    }

    pub fn derivative(&self, k: usize) -> Poly {
        let p = self.ring.p();
        let terms = self.terms.iter().filter_map(|&(m, c)| {
            let e = m.exp(k);
            let c2 = field::mul(c, e % p, p);
            (c2 != 0).then(|| {
                let mut m2 = m;
                m2.0[k] -= 1;
                (m2, c2)
            })
        });
        Poly::from_terms(&self.ring, terms)
    }

    /// Set variable `k` to zero.
    pub fn restrict_zero(&self, k: usize) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().copied().filter(|(m, _)| m.exp(k) == 0).collect() }
    }

    pub fn with_ring(&self, ring: &RingRef) -> Poly {
        Poly::from_terms(ring, self.terms.iter().copied())
    }

    /// Render in the input grammar (coefficients as representatives in [0, p)).
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.ring.names();
        let mut parts = vec![];
        for &(m, c) in &self.terms {
            let mut factors = vec![];
            if c != 1 || m == Monomial::ONE {
                factors.push(c.to_string());
            }
            for (k, name) in names.iter().enumerate() {
                match m.exp(k) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `f^p` via the term-wise map.
pub fn frobenius_power(f: &Poly) -> Poly {
    f.frobenius_power_q(f.ring().p())
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly> {
    a.arith(b, op)
}
