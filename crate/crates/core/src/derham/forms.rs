//! Modules of (logarithmic, twisted) differential forms and their Frobenius
//! pushforwards, with maps described by rules on log-monomials.
//!
//! Every form is written through log-monomials `x^b dlog x_J`; an ordinary
//! `dx_j` is `x_j dlog x_j`. A form space fixes the active variables (the
//! others are set to zero), the log indices `E` and an integer twist `D`
//! supported on `E`; its `i`-forms are free on `g_J = x^{-D} ω_J`, where
//! `ω_J` wedges `dlog x_j` for `j ∈ E` and `dx_j` otherwise. The underlying
//! log-monomial exponent of `g_J` is `-D + 1_{J∖E}`.

use std::sync::Arc;

use crate::arith::{field, Monomial, RingRef};
use crate::error::{Error, Result};
use crate::frob::{pushforward, ClassSel, FrobeniusModule, Hypersurface, MultiDegree};
use crate::groebner::{ModOrder, Term, Vector};
use crate::modalg::{unit, Module, ModuleMap, PresentedModule};

pub type Mask = u32;

/// `(-1)^{#{j ∈ J : j < l}}`, the sign of `dlog x_l ∧ ω_J = ± ω_{J∪l}`.
pub fn wedge_sign(l: usize, j: Mask) -> bool {
    (j & ((1u32 << l) - 1)).count_ones() % 2 == 1
}

/// Sign and mask of `ω_A ∧ ω_B`, or `None` when they overlap.
pub fn wedge_masks(a: Mask, b: Mask) -> Option<(bool, Mask)> {
    if a & b != 0 {
        return None;
    }
    // move each element of b left past the larger elements of a
    let mut neg = false;
    let mut rest = b;
    while rest != 0 {
        let l = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let larger = a & !((1u32 << (l + 1)) - 1);
        if larger.count_ones() % 2 == 1 {
            neg = !neg;
        }
    }
    Some((neg, a | b))
}

/// Ascending `i`-subsets of the set bits of `universe`, in lexicographic order.
pub fn subsets_of(universe: Mask, i: usize) -> Vec<Mask> {
    let idx: Vec<usize> = (0..32).filter(|&k| universe >> k & 1 == 1).collect();
    let mut out = Vec::new();
    fn rec(idx: &[usize], start: usize, left: usize, cur: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for s in start..idx.len() {
            if idx.len() - s < left {
                break;
            }
            rec(idx, s + 1, left - 1, cur | 1 << idx[s], out);
        }
    }
    rec(&idx, 0, i, 0, &mut out);
    out
}

/// Which forms: ambient ring or hypersurface, active variables, log indices
/// and twist.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub hs: Hypersurface,
    pub active: Mask,
    pub log: Mask,
    pub twist: Vec<i64>,
}

impl FormSpace {
    /// Ordinary forms on `R = S/(f)` (`f = 0` gives affine space).
    pub fn plain(hs: &Hypersurface) -> FormSpace {
        let n = hs.nvars();
        FormSpace { hs: hs.clone(), active: (1u32 << n) - 1, log: 0, twist: vec![0; n] }
    }

    /// Log forms along the coordinate hyperplanes in `log`, twisted by `twist`.
    pub fn log(ring: &RingRef, log: Mask, twist: Vec<i64>) -> Result<FormSpace> {
        let hs = Hypersurface::new(&crate::arith::Poly::zero(ring))?;
        let n = ring.nvars();
        if twist.len() != n || (0..n).any(|k| twist[k] != 0 && log >> k & 1 == 0) {
            return Err(Error::BadSupport);
        }
        Ok(FormSpace { hs, active: (1u32 << n) - 1, log, twist })
    }

    /// The same forms on the hyperplane `x_k = 0` (log structure restricted).
    pub fn restrict_to_hyperplane(&self, k: usize) -> Result<FormSpace> {
        if !self.hs.f.is_zero() {
            return Err(Error::Invalid("restriction is only available on affine space".into()));
        }
        let mut twist = self.twist.clone();
        twist[k] = 0;
        Ok(FormSpace { hs: self.hs.clone(), active: self.active & !(1 << k), log: self.log & !(1 << k), twist })
    }

    /// The same space with a different twist.
    pub fn with_twist(&self, twist: Vec<i64>) -> FormSpace {
        FormSpace { twist, ..self.clone() }
    }

    pub fn ring(&self) -> &RingRef {
        &self.hs.ring
    }

    pub fn nvars(&self) -> usize {
        self.hs.nvars()
    }

    pub fn dim(&self) -> usize {
        self.active.count_ones() as usize
    }

    pub fn subsets(&self, i: usize) -> Vec<Mask> {
        subsets_of(self.active, i)
    }

    /// Underlying log-monomial exponent of `g_J`.
    pub fn mdeg(&self, j: Mask) -> MultiDegree {
        (0..self.nvars())
            .map(|k| -self.twist[k] + i64::from(j >> k & 1 == 1 && self.log >> k & 1 == 0))
            .collect()
    }

    /// Whether `x^b dlog x_J` belongs to the `i`-forms of this space.
    pub fn contains(&self, b: &[i64], j: Mask) -> bool {
        if j & !self.active != 0 {
            return false;
        }
        let m = self.mdeg(j);
        (0..self.nvars()).all(|k| b[k] >= m[k] && (self.active >> k & 1 == 1 || b[k] == 0))
    }

    /// The base module of `i`-forms.
    pub fn forms(&self, i: usize) -> Result<Arc<Forms>> {
        let ring = self.ring().clone();
        let n = self.nvars();
        let scale = ring.scale();
        let w = ring.weights().to_vec();
        let subsets = self.subsets(i);
        let mdeg: Vec<MultiDegree> = subsets.iter().map(|&j| self.mdeg(j)).collect();
        let degrees: Vec<i64> = mdeg.iter().map(|m| scale * m.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>()).collect();
        let order = Arc::new(ModOrder::new(&ring, degrees));
        let mut rels: Vec<Vector> = Vec::new();
        for k in (0..n).filter(|&k| self.active >> k & 1 == 0) {
            for c in 0..subsets.len() {
                rels.push(vec![Term { m: Monomial::var(k, 1), c: c as u32, k: 1 }]);
            }
        }
        let f = &self.hs.f;
        if !f.is_zero() {
            if self.log != 0 || self.twist.iter().any(|&t| t != 0) || self.active != (1 << n) - 1 {
                return Err(Error::Invalid("log structures are only available on affine space".into()));
            }
            let p = ring.p();
            for c in 0..subsets.len() {
                rels.push(order.normalize(f.terms().iter().map(|&(m, k)| Term { m, c: c as u32, k }).collect()));
            }
            if i >= 1 {
                let pos: std::collections::HashMap<Mask, usize> = subsets.iter().enumerate().map(|(a, &b)| (b, a)).collect();
                for jp in subsets_of(self.active, i - 1) {
                    let mut terms = Vec::new();
                    for l in (0..n).filter(|&l| jp >> l & 1 == 0) {
                        let c = pos[&(jp | 1 << l)] as u32;
                        let neg = wedge_sign(l, jp);
                        for &(m, k) in f.derivative(l).terms() {
                            terms.push(Term { m, c, k: if neg { field::neg(k, p) } else { k } });
                        }
                    }
                    let v = order.normalize(terms);
                    if !v.is_empty() {
                        rels.push(v);
                    }
                }
            }
        }
        let module = PresentedModule::from_order(order, rels)?;
        Ok(Arc::new(Forms { space: self.clone(), i, subsets, mdeg, module }))
    }
}

/// The `i`-forms of a space as a presented module on the `g_J`.
#[derive(Clone, Debug)]
pub struct Forms {
    pub space: FormSpace,
    pub i: usize,
    pub subsets: Vec<Mask>,
    pub mdeg: Vec<MultiDegree>,
    pub module: Module,
}

impl Forms {
    /// The same generators with a different presentation (e.g. a quotient).
    pub fn with_module(&self, module: Module) -> Arc<Forms> {
        Arc::new(Forms { module, ..self.clone() })
    }

    pub fn index_of(&self, j: Mask) -> Option<usize> {
        self.subsets.iter().position(|&s| s == j)
    }
}

/// `F^e_*` of a forms module restricted to one class (`e = 0`: the module itself).
#[derive(Clone, Debug)]
pub struct FormLevel {
    pub forms: Arc<Forms>,
    pub e: u32,
    pub module: Module,
    push: Option<FrobeniusModule>,
}

/// A log-monomial `c · x^b dlog x_J`.
pub type LogTerm = (MultiDegree, Mask, u32);

impl FormLevel {
    pub fn base(forms: &Arc<Forms>) -> FormLevel {
        FormLevel { forms: forms.clone(), e: 0, module: forms.module.clone(), push: None }
    }

    pub fn pushed(forms: &Arc<Forms>, e: u32, class: &ClassSel) -> Result<FormLevel> {
        if e == 0 {
            return Ok(FormLevel::base(forms));
        }
        let fm = pushforward(&forms.space.hs, &forms.module, &forms.mdeg, e, class)?;
        Ok(FormLevel { forms: forms.clone(), e, module: fm.module.clone(), push: Some(fm) })
    }

    pub fn frobenius_module(&self) -> Option<&FrobeniusModule> {
        self.push.as_ref()
    }

    pub fn space(&self) -> &FormSpace {
        &self.forms.space
    }

    pub fn q(&self) -> i64 {
        (self.space().hs.p() as i64).pow(self.e)
    }

    /// Underlying log-monomial of a generator.
    pub fn generator_term(&self, g: usize) -> (MultiDegree, Mask) {
        match &self.push {
            None => (self.forms.mdeg[g].clone(), self.forms.subsets[g]),
            Some(fm) => {
                let (k, r) = &fm.gens[g];
                let k = *k as usize;
                (self.forms.mdeg[k].iter().zip(r).map(|(a, b)| a + b).collect(), self.forms.subsets[k])
            }
        }
    }

    /// The log-monomials of an element.
    pub fn underlying(&self, v: &[Term]) -> Vec<LogTerm> {
        let n = self.space().nvars();
        let base: Vector = match &self.push {
            None => v.to_vec(),
            Some(fm) => fm.to_underlying(v),
        };
        base.iter()
            .map(|t| {
                let c = t.c as usize;
                let b = (0..n).map(|k| t.m.exp(k) as i64 + self.forms.mdeg[c][k]).collect();
                (b, self.forms.subsets[c], t.k)
            })
            .collect()
    }

    /// The element with the given log-monomials.
    pub fn from_underlying(&self, terms: &[LogTerm]) -> Result<Vector> {
        let n = self.space().nvars();
        let order = self.module.order();
        let mut out: Vector = Vec::new();
        for (b, j, c) in terms {
            if *c == 0 {
                continue;
            }
            let idx = self
                .forms
                .index_of(*j)
                .ok_or_else(|| Error::IllDefined("form index outside the target space".into()))?;
            let rel: Vec<i64> = (0..n).map(|k| b[k] - self.forms.mdeg[idx][k]).collect();
            if rel.iter().any(|&x| x < 0) {
                return Err(Error::IllDefined("log-monomial outside the target twist".into()));
            }
            let piece = match &self.push {
                None => {
                    let e: Vec<u32> = rel.iter().map(|&x| x as u32).collect();
                    vec![Term { m: Monomial::from_exps(&e), c: idx as u32, k: *c }]
                }
                Some(fm) => order.scale(&fm.push_element(&rel, &unit(idx))?, *c),
            };
            out = order.add(&out, &piece);
        }
        Ok(out)
    }
}

/// Images of the generators of `src` under `rule`, as vectors of `tgt`.
pub fn monomial_images(src: &FormLevel, tgt: &FormLevel, rule: impl Fn(&[i64], Mask) -> Vec<LogTerm>) -> Result<Vec<Vector>> {
    (0..src.module.rank())
        .map(|g| {
            let (b, j) = src.generator_term(g);
            tgt.from_underlying(&rule(&b, j))
        })
        .collect()
}

/// The map sending each generator's log-monomial through `rule`, certified.
pub fn monomial_map(src: &FormLevel, tgt: &FormLevel, rule: impl Fn(&[i64], Mask) -> Vec<LogTerm>) -> Result<ModuleMap> {
    let images = monomial_images(src, tgt, rule)?;
    ModuleMap::new(src.module.clone(), tgt.module.clone(), images, 0)
}

/// The exterior derivative rule: `d(x^b ω_J) = Σ_l b_l x^b dlog x_l ∧ ω_J`.
pub fn d_rule(space: &FormSpace) -> impl Fn(&[i64], Mask) -> Vec<LogTerm> + '_ {
    let p = space.hs.p();
    move |b: &[i64], j: Mask| {
        let mut out = Vec::new();
        for l in 0..space.nvars() {
            if space.active >> l & 1 == 0 || j >> l & 1 == 1 {
                continue;
            }
            let c = b[l].rem_euclid(p as i64) as u32;
            if c == 0 {
                continue;
            }
            let c = if wedge_sign(l, j) { field::neg(c, p) } else { c };
            out.push((b.to_vec(), j | 1 << l, c));
        }
        out
    }
}

/// The inverse Cartier rule at level `e`: `x^b ω ↦ x^{qb} ω`.
pub fn inverse_cartier_rule(q: i64) -> impl Fn(&[i64], Mask) -> Vec<LogTerm> {
    move |b: &[i64], j: Mask| vec![(b.iter().map(|x| x * q).collect(), j, 1)]
}

/// The Cartier rule dropping `k` levels: `x^b ω ↦ x^{b/p^k} ω` when `p^k | b`, else 0.
pub fn cartier_rule(pk: i64) -> impl Fn(&[i64], Mask) -> Vec<LogTerm> {
    move |b: &[i64], j: Mask| {
        if b.iter().all(|x| x.rem_euclid(pk) == 0) {
            vec![(b.iter().map(|x| x.div_euclid(pk)).collect(), j, 1)]
        } else {
            vec![]
        }
    }
}

/// The identity rule (inclusions between twists or log structures).
pub fn identity_rule(b: &[i64], j: Mask) -> Vec<LogTerm> {
    vec![(b.to_vec(), j, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_lex_order() {
        assert_eq!(subsets_of(0b111, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets_of(0b110, 1), vec![0b010, 0b100]);
        assert_eq!(subsets_of(0b11, 0), vec![0]);
    }

    #[test]
    fn wedge_signs() {
        // dx_1 ∧ dx_0 = -dx_0 ∧ dx_1
        assert_eq!(wedge_masks(0b10, 0b01), Some((true, 0b11)));
        assert_eq!(wedge_masks(0b01, 0b10), Some((false, 0b11)));
        assert_eq!(wedge_masks(0b01, 0b01), None);
        // dx_1 ∧ (dx_0 ∧ dx_2) = -dx_0 ∧ dx_1 ∧ dx_2
        assert_eq!(wedge_masks(0b010, 0b101), Some((true, 0b111)));
        assert!(wedge_sign(1, 0b101));
        assert!(!wedge_sign(0, 0b110));
    }
}
