//! Gröbner bases of ideals in 𝔽_p[x_1..x_n]: normal forms, saturation,
//! Hilbert functions and the isolated-singularity predicate.

pub mod engine;

use std::sync::Arc;

use crate::arith::{Monomial, MonomialOrder, OrderKind, Poly, RingBuilder, RingRef};
use crate::error::{Error, Result};
pub use engine::{syzygies, Gb, GbOptions, ModOrder, Term, Vector, DEFAULT_DEGREE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &RingRef, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            crate::arith::ring::same_session(ring, g.ring())?;
        }
        Ok(Ideal { ring: ring.clone(), gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub basis: Vec<Poly>,
    pub order: MonomialOrder,
    pub reduced: bool,
    gb: Gb,
    ring: RingRef,
}

fn ideal_order(ring: &RingRef, order: &MonomialOrder) -> Arc<ModOrder> {
    Arc::new(ModOrder::new(ring, vec![0]).with_kind(order.kind, order.precedence.clone()))
}

pub fn poly_to_vector(f: &Poly, order: &ModOrder) -> Vector {
    order.normalize(f.terms().iter().map(|&(m, k)| Term { m, c: 0, k }).collect())
}

pub fn vector_to_poly(ring: &RingRef, v: &[Term]) -> Poly {
    Poly::from_terms(ring, v.iter().map(|t| (t.m, t.k)))
}

/// Reduced Gröbner basis of `ideal` with respect to `order`.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_capped(ideal, order, DEFAULT_DEGREE_CAP)
}

pub fn buchberger_capped(ideal: &Ideal, order: &MonomialOrder, cap: u32) -> Result<GroebnerBasis> {
    let ring = ideal.ring();
    if order.nvars() != ring.nvars() {
        return Err(Error::Invalid("order has the wrong number of variables".into()));
    }
    // the order's weights must match the session grading for graded kinds
    let mo = ideal_order(ring, order);
    let gens: Vec<Vector> = ideal.gens.iter().map(|g| poly_to_vector(g, &mo)).collect();
    let gb = Gb::compute(mo, &gens, GbOptions { degree_cap: cap, track: false, product_criterion: true })?;
    let mut basis: Vec<Poly> = gb.elements().map(|v| vector_to_poly(ring, v)).collect();
    // list in descending order of leading monomials
    basis.reverse();
    Ok(GroebnerBasis { basis, order: order.clone(), reduced: true, gb, ring: ring.clone() })
}

impl GroebnerBasis {
    pub fn normal_form(&self, f: &Poly) -> Poly {
        let v = poly_to_vector(f, &self.gb.order);
        vector_to_poly(&self.ring, &self.gb.reduce(v))
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gb.leading().map(|(m, _)| m).collect()
    }

    pub fn engine(&self) -> &Gb {
        &self.gb
    }
}

pub fn normal_form(f: &Poly, g: &GroebnerBasis) -> Poly {
    g.normal_form(f)
}

/// `I : g^∞` via the extra-variable elimination `(I, 1 - t·g) ∩ S`.
pub fn saturate(ideal: &Ideal, g: &Poly) -> Result<Ideal> {
    if g.is_zero() {
        return Err(Error::Invalid("cannot saturate by zero".into()));
    }
    let ring = ideal.ring();
    let n = ring.nvars();
    let mut names: Vec<String> = ring.names().to_vec();
    let mut tname = String::from("t");
    while names.contains(&tname) {
        tname.push('_');
    }
    names.push(tname);
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut prec = vec![n];
    prec.extend(0..n);
    let mut weights = ring.weights().to_vec();
    weights.push(1);
    let big = RingBuilder::new(ring.p() as u64, &name_refs)
        .weights(weights)
        .order(OrderKind::Lex)
        .precedence(prec)
        .e_max(ring.e_max())
        .build()?;
    let lift = |f: &Poly| f.with_ring(&big);
    let t = Poly::var(&big, n);
    let one_minus_tg = Poly::constant(&big, 1).sub(&t.mul(&lift(g))?)?;
    let mut gens: Vec<Poly> = ideal.gens().iter().map(lift).collect();
    gens.push(one_minus_tg);
    let gb = buchberger(&Ideal::new(&big, gens)?, big.order())?;
    let kept: Vec<Poly> = gb
        .basis
        .iter()
        .filter(|f| f.terms().iter().all(|(m, _)| m.exp(n) == 0))
        .map(|f| f.with_ring(ring))
        .collect();
    Ideal::new(ring, kept)
}

/// Enumerate all monomials in `nvars` variables of weighted degree `t`.
pub fn monomials_of_degree(weights: &[i64], t: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if t < 0 {
        return out;
    }
    let n = weights.len();
    let mut cur = [0u16; crate::arith::MAX_VARS];
    fn rec(k: usize, rest: i64, w: &[i64], cur: &mut [u16; crate::arith::MAX_VARS], out: &mut Vec<Monomial>) {
        if k + 1 == w.len() {
            if rest % w[k] == 0 {
                cur[k] = (rest / w[k]) as u16;
                out.push(Monomial(*cur));
                cur[k] = 0;
            }
            return;
        }
        let mut e = 0;
        while e * w[k] <= rest {
            cur[k] = e as u16;
            rec(k + 1, rest - e * w[k], w, cur, out);
            e += 1;
        }
        cur[k] = 0;
    }
    if n == 0 {
        if t == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, t, weights, &mut cur, &mut out);
    out
}

/// `dim_𝔽p (S/I)_t` counted by standard monomials.
pub fn hilbert_dim(ideal: &Ideal, t: i64) -> Result<usize> {
    if !ideal.is_homogeneous() {
        return Err(Error::NotHomogeneous("hilbert_dim needs a homogeneous ideal".into()));
    }
    let ring = ideal.ring();
    let gb = buchberger(ideal, ring.order())?;
    let lts = gb.leading_monomials();
    Ok(monomials_of_degree(ring.weights(), t).iter().filter(|m| !lts.iter().any(|l| l.divides(m))).count())
}

/// Outcome of the isolated-singularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isolation {
    Isolated,
    NotIsolated,
    /// `∂f/∂x_k` vanishes identically although `x_k` occurs in `f`.
    Indeterminate { variable: String },
}

impl Isolation {
    pub fn is_isolated(&self) -> bool {
        *self == Isolation::Isolated
    }
}

/// Decide whether `(f, ∂f/∂x_1, …, ∂f/∂x_n)` is 𝔪-primary.
pub fn is_isolated_singularity(f: &Poly) -> Result<Isolation> {
    let ring = f.ring();
    let n = ring.nvars();
    for k in 0..n {
        let occurs = f.terms().iter().any(|(m, _)| m.exp(k) > 0);
        if occurs && f.derivative(k).is_zero() {
            return Ok(Isolation::Indeterminate { variable: ring.names()[k].clone() });
        }
    }
    let mut gens = vec![f.clone()];
    gens.extend((0..n).map(|k| f.derivative(k)));
    let gb = buchberger(&Ideal::new(ring, gens)?, ring.order())?;
    for k in 0..n {
        let mut found = false;
        for e in 1..=DEFAULT_DEGREE_CAP {
            if gb.contains(&Poly::monomial(ring, Monomial::var(k, e), 1)) {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(Isolation::NotIsolated);
        }
    }
    Ok(Isolation::Isolated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_in, Ring};

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_in(g, r).unwrap()).collect()).unwrap()
    }

    fn basis_text(gb: &GroebnerBasis) -> Vec<String> {
        let mut v: Vec<String> = gb.basis.iter().map(|f| f.to_text()).collect();
        v.sort();
        v
    }

    #[test]
    fn spec_examples() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let gb = buchberger(&ideal(&r, &["x"]), r.order()).unwrap();
        assert_eq!(basis_text(&gb), vec!["x"]);
        let gb = buchberger(&ideal(&r, &["x^2+y^2", "x*y"]), r.order()).unwrap();
        assert_eq!(basis_text(&gb), vec!["x*y", "x^2 + y^2", "y^3"]);
        assert_eq!(normal_form(&parse_in("y^3 + x", &r).unwrap(), &gb), parse_in("x", &r).unwrap());
        let r4 = Ring::new(5, &["x", "y", "z", "w"]).unwrap();
        let gb = buchberger(&ideal(&r4, &["y", "x", "-w", "-z"]), r4.order()).unwrap();
        assert_eq!(basis_text(&gb), vec!["w", "x", "y", "z"]);
    }

    #[test]
    fn normal_forms() {
        let r = Ring::new(7, &["x", "y"]).unwrap();
        let gb = buchberger(&ideal(&r, &["x^2", "y"]), r.order()).unwrap();
        assert!(normal_form(&parse_in("x^2*y", &r).unwrap(), &gb).is_zero());
        let gb = buchberger(&ideal(&r, &["x"]), r.order()).unwrap();
        assert_eq!(normal_form(&parse_in("x+1", &r).unwrap(), &gb), parse_in("1", &r).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        let x = parse_in("x", &r).unwrap();
        let y = parse_in("y", &r).unwrap();
        let s = saturate(&ideal(&r, &["x*y"]), &x).unwrap();
        let gb = buchberger(&s, r.order()).unwrap();
        assert_eq!(basis_text(&gb), vec!["y"]);
        let s = saturate(&ideal(&r, &["x^2", "x*y"]), &x).unwrap();
        assert_eq!(basis_text(&buchberger(&s, r.order()).unwrap()), vec!["1"]);
        let s = saturate(&ideal(&r, &["x"]), &y).unwrap();
        assert_eq!(basis_text(&buchberger(&s, r.order()).unwrap()), vec!["x"]);
    }

    #[test]
    fn hilbert_examples() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        assert_eq!(hilbert_dim(&ideal(&r, &[]), 3).unwrap(), 4);
        assert_eq!(hilbert_dim(&ideal(&r, &["x", "y"]), 0).unwrap(), 1);
        assert_eq!(hilbert_dim(&ideal(&r, &["x", "y"]), 1).unwrap(), 0);
        let r3 = Ring::new(7, &["x", "y", "z"]).unwrap();
        assert_eq!(hilbert_dim(&ideal(&r3, &["x^3+y^3+z^3"]), 3).unwrap(), 9);
        assert!(matches!(hilbert_dim(&ideal(&r3, &["x+1"]), 1), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn isolation_examples() {
        let r = Ring::new(3, &["x", "y", "z", "w"]).unwrap();
        assert_eq!(is_isolated_singularity(&parse_in("x*y-z*w", &r).unwrap()).unwrap(), Isolation::Isolated);
        let r2 = Ring::new(5, &["x", "y"]).unwrap();
        assert_eq!(is_isolated_singularity(&parse_in("x^2", &r2).unwrap()).unwrap(), Isolation::NotIsolated);
        let r3 = Ring::new(7, &["x", "y", "z"]).unwrap();
        assert!(is_isolated_singularity(&parse_in("x^3+y^3+z^3", &r3).unwrap()).unwrap().is_isolated());
        let r3 = Ring::new(3, &["x", "y", "z"]).unwrap();
        assert!(matches!(
            is_isolated_singularity(&parse_in("x^3+y^3+z^3", &r3).unwrap()).unwrap(),
            Isolation::Indeterminate { .. }
        ));
    }
}
