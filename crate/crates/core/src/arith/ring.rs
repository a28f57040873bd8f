//! The session context: prime, variables, weights, order and grading scale.

use std::sync::Arc;

use super::field::{self, check_prime};
use super::monomial::{MonomialOrder, OrderKind, MAX_VARS};
use crate::error::{Error, Result};

/// Default maximal Frobenius level a session is prepared for.
pub const DEFAULT_E_MAX: u32 = 3;

/// Immutable session data shared by every polynomial and module of a computation.
///
/// `scale = p^e_max` multiplies every degree so that `F^e_*` modules with
/// `e <= e_max` carry integer degrees.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u32,
    names: Vec<String>,
    weights: Vec<i64>,
    order: MonomialOrder,
    e_max: u32,
    scale: i64,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(p: u64, names: &[&str]) -> Result<RingRef> {
        RingBuilder::new(p, names).build()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Grading weights of the variables (before scaling).
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn e_max(&self) -> u32 {
        self.e_max
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Scaled degree of each variable.
    pub fn var_degrees(&self) -> Vec<i64> {
        self.weights.iter().map(|w| w * self.scale).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        field::inv(a, self.p)
    }

    /// Same session as `other` (structural equality).
    pub fn same(&self, other: &Ring) -> bool {
        self == other
    }

    /// A copy of this session with different variable weights.
    pub fn reweighted(&self, weights: Vec<i64>) -> RingRef {
        let mut b = RingBuilder::from_ring(self);
        b.weights = weights;
        b.build().expect("reweighting a valid ring")
    }

    /// A copy of this session with a different maximal Frobenius level.
    pub fn with_e_max(&self, e_max: u32) -> RingRef {
        let mut b = RingBuilder::from_ring(self);
        b.e_max = e_max;
        b.build().expect("valid ring")
    }

    /// A copy with a different order kind/precedence (weights kept).
    pub fn with_order(&self, kind: OrderKind, precedence: Vec<usize>) -> RingRef {
        let mut b = RingBuilder::from_ring(self);
        b.kind = kind;
        b.precedence = Some(precedence);
        b.build().expect("valid ring")
    }
}

/// Builder for [`Ring`].
#[derive(Clone, Debug)]
pub struct RingBuilder {
    p: u64,
    names: Vec<String>,
    weights: Vec<i64>,
    kind: OrderKind,
    precedence: Option<Vec<usize>>,
    e_max: u32,
}

impl RingBuilder {
    pub fn new(p: u64, names: &[&str]) -> Self {
        RingBuilder {
            p,
            names: names.iter().map(|s| s.to_string()).collect(),
            weights: vec![1; names.len()],
            kind: OrderKind::Grevlex,
            precedence: None,
            e_max: DEFAULT_E_MAX,
        }
    }

    fn from_ring(r: &Ring) -> Self {
        RingBuilder {
            p: r.p as u64,
            names: r.names.clone(),
            weights: r.weights.clone(),
            kind: r.order.kind,
            precedence: Some(r.order.precedence.clone()),
            e_max: r.e_max,
        }
    }

    pub fn weights(mut self, w: Vec<i64>) -> Self {
        self.weights = w;
        self
    }

    pub fn order(mut self, kind: OrderKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn precedence(mut self, prec: Vec<usize>) -> Self {
        self.precedence = Some(prec);
        self
    }

    pub fn e_max(mut self, e: u32) -> Self {
        self.e_max = e;
        self
    }

    pub fn build(self) -> Result<RingRef> {
        let p = check_prime(self.p)?;
        let n = self.names.len();
        if n > MAX_VARS {
            return Err(Error::Invalid(format!("at most {MAX_VARS} variables are supported")));
        }
        for (k, a) in self.names.iter().enumerate() {
            if a.is_empty() || !a.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("bad variable name `{a}`")));
            }
            if a.chars().next().unwrap().is_ascii_digit() {
                return Err(Error::Invalid(format!("bad variable name `{a}`")));
            }
            if self.names[..k].contains(a) {
                return Err(Error::Invalid(format!("duplicate variable `{a}`")));
            }
        }
        if self.weights.len() != n || self.weights.iter().any(|&w| w <= 0) {
            return Err(Error::Invalid("weights must be positive, one per variable".into()));
        }
        let precedence = self.precedence.unwrap_or_else(|| (0..n).collect());
        let mut seen = precedence.clone();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::Invalid("precedence must be a permutation".into()));
        }
        let scale = (p as i64)
            .checked_pow(self.e_max)
            .filter(|s| *s < (1 << 40))
            .ok_or_else(|| Error::Invalid("e_max too large".into()))?;
        let order = MonomialOrder { kind: self.kind, precedence, weights: self.weights.clone() };
        Ok(Arc::new(Ring { p, names: self.names, weights: self.weights, order, e_max: self.e_max, scale }))
    }
}

/// Fail with `SessionMismatch` unless both rings agree.
pub fn same_session(a: &Ring, b: &Ring) -> Result<()> {
    if a.same(b) {
        Ok(())
    } else {
        Err(Error::SessionMismatch)
    }
}
