//! Hom modules, double duals, reflexive hulls and torsion.

use std::sync::Arc;

use super::{
    minimal_generators, present_submodule, reindex, tracked_gb_of, unit, Module, ModuleMap, Order, PresentedModule,
};
use crate::arith::{Monomial, OrderKind};
use crate::error::{Error, Result};
use crate::groebner::{syzygies, Gb, GbOptions, ModOrder, Term, Vector, DEFAULT_DEGREE_CAP};

/// `Hom_S(M, N)` as a submodule of `N^{⊕ rank M}`.
///
/// Component `k·b + β` of the ambient module holds the coefficient of the
/// `β`-th generator of `N` in the image of the `k`-th generator of `M`.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: Module,
    pub ambient: Module,
    pub inclusion: ModuleMap,
    pub source_rank: usize,
    pub target_rank: usize,
}

impl HomModule {
    /// The `j`-th generator as a map `M → N`.
    pub fn generator_map(&self, j: usize, m: &Module, n: &Module) -> ModuleMap {
        let b = self.target_rank;
        let v = &self.inclusion.images()[j];
        let shift = self.module.degrees()[j];
        let images: Vec<Vector> = (0..self.source_rank)
            .map(|k| reindex(n.order(), v, |c| ((c as usize) / b == k).then_some(c % b as u32)))
            .collect();
        ModuleMap::new_unchecked(m.clone(), n.clone(), images, shift)
    }
}

pub fn hom_module(m: &Module, n: &Module) -> Result<HomModule> {
    let ring = m.ring().clone();
    let a = m.rank();
    let b = n.rank();
    let mut hdeg = Vec::with_capacity(a * b);
    for k in 0..a {
        for beta in 0..b {
            hdeg.push(n.degrees()[beta] - m.degrees()[k]);
        }
    }
    let mut hrels = Vec::new();
    for k in 0..a {
        for r in n.relations() {
            hrels.push(r.iter().map(|t| Term { c: t.c + (k * b) as u32, ..*t }).collect());
        }
    }
    let ambient = PresentedModule::new(&ring, hdeg.clone(), hrels)?;
    let mrels = m.relations();
    let preimage: Vec<Vector> = if mrels.is_empty() || b == 0 {
        (0..a * b).map(unit).collect()
    } else {
        let mo = m.order();
        let mut tdeg = Vec::with_capacity(mrels.len() * b);
        for r in mrels {
            let d = mo.degree(r).unwrap();
            for beta in 0..b {
                tdeg.push(n.degrees()[beta] - d);
            }
        }
        let torder: Order = Arc::new(ModOrder::new(&ring, tdeg));
        let mut cols: Vec<Vec<Term>> = vec![Vec::new(); a * b];
        for (l, r) in mrels.iter().enumerate() {
            for t in r {
                for beta in 0..b {
                    cols[t.c as usize * b + beta].push(Term { m: t.m, c: (l * b + beta) as u32, k: t.k });
                }
            }
        }
        let mut cols: Vec<Vector> = cols.into_iter().map(|c| torder.normalize(c)).collect();
        let mut col_deg = hdeg.clone();
        for l in 0..mrels.len() {
            for r in n.relations() {
                let shifted: Vector = r.iter().map(|t| Term { c: t.c + (l * b) as u32, ..*t }).collect();
                let shifted = torder.normalize(shifted);
                col_deg.push(torder.degree(&shifted).unwrap());
                cols.push(shifted);
            }
        }
        let syz = syzygies(&torder, &cols, &col_deg, DEFAULT_DEGREE_CAP)?;
        let ao = ambient.order();
        syz.iter()
            .map(|s| reindex(ao, s, |c| ((c as usize) < a * b).then_some(c)))
            .filter(|v| !v.is_empty())
            .collect()
    };
    let gens = minimal_generators(ambient.order(), ambient.relations(), preimage)?;
    let (module, inclusion) = present_submodule(&ambient, gens)?;
    Ok(HomModule { module, ambient, inclusion, source_rank: a, target_rank: b })
}

/// `M* = Hom(M, B)`, `M** = Hom(M*, B)` and the canonical map `M → M**`.
#[derive(Clone, Debug)]
pub struct Reflexive {
    pub dual: HomModule,
    pub bidual: HomModule,
    pub canonical: ModuleMap,
}

impl Reflexive {
    pub fn is_reflexive(&self) -> Result<bool> {
        Ok(self.canonical.is_injective()? && self.canonical.is_surjective()?)
    }
}

pub fn double_dual(m: &Module, base: &Module) -> Result<Reflexive> {
    let dual = hom_module(m, base)?;
    let bidual = hom_module(&dual.module, base)?;
    let b = base.rank();
    let c = dual.module.rank();
    let h2 = bidual.ambient.order().clone();
    // membership lifts in the bidual: its generators together with the ambient relations
    let mut cols = bidual.inclusion.images().to_vec();
    let ngens = cols.len();
    cols.extend(bidual.ambient.relations().iter().cloned());
    let gb = if cols.is_empty() { None } else { Some(tracked_gb_of(&h2, &cols)?) };
    let mut images = Vec::with_capacity(m.rank());
    for k in 0..m.rank() {
        let mut terms = Vec::new();
        for l in 0..c {
            for t in &dual.inclusion.images()[l] {
                if t.c as usize / b == k {
                    let beta = t.c as usize % b;
                    terms.push(Term { c: (l * b + beta) as u32, ..*t });
                }
            }
        }
        let w = h2.normalize(terms);
        if w.is_empty() {
            images.push(vec![]);
            continue;
        }
        let gb = gb.as_ref().ok_or_else(|| Error::Invalid("empty bidual received a nonzero element".into()))?;
        let cof = gb.lift(w).ok_or_else(|| Error::Invalid("evaluation map left the bidual".into()))?;
        images.push(reindex(bidual.module.order(), &cof, |c| ((c as usize) < ngens).then_some(c)));
    }
    let canonical = ModuleMap::new_unchecked(m.clone(), bidual.module.clone(), images, 0);
    Ok(Reflexive { dual, bidual, canonical })
}

/// The double dual over `base` with its canonical map.
pub fn reflexivize(m: &Module, base: &Module) -> Result<(Module, ModuleMap)> {
    let r = double_dual(m, base)?;
    Ok((r.bidual.module, r.canonical))
}

/// `ker(M → M**)`, the torsion submodule when `base` is a domain.
pub fn torsion_submodule(m: &Module, base: &Module, base_is_domain: bool) -> Result<(Module, ModuleMap)> {
    if !base_is_domain {
        return Err(Error::NotDomain);
    }
    let r = double_dual(m, base)?;
    r.canonical.kernel()
}

/// Generators of `⟨gens⟩ : x_var^∞` for homogeneous `gens`, by dividing a
/// Gröbner basis for a reverse-lex order with `x_var` last.
pub fn saturate_generators(order: &Order, gens: &[Vector], var: usize) -> Result<Vec<Vector>> {
    let n = order.ring.nvars();
    let mut prec: Vec<usize> = (0..n).filter(|&v| v != var).collect();
    prec.push(var);
    let sat_order = Arc::new((**order).clone().with_kind(OrderKind::Grevlex, prec));
    let gens: Vec<Vector> = gens.iter().map(|g| sat_order.normalize(g.clone())).collect();
    let gb = Gb::compute(sat_order, &gens, GbOptions::default())?;
    let mut out = Vec::with_capacity(gb.len());
    for v in gb.elements() {
        let e = v.iter().map(|t| t.m.exp(var)).min().unwrap_or(0);
        let q = Monomial::var(var, e);
        out.push(order.normalize(v.iter().map(|t| Term { m: q.quotient_of(&t.m), ..*t }).collect()));
    }
    Ok(out)
}

/// `(U : x_var^∞)/U`, the part of `M` killed by a power of `x_var`.
pub fn torsion_by_saturation(m: &Module, var: usize) -> Result<(Module, ModuleMap)> {
    let sat = saturate_generators(m.order(), m.relations(), var)?;
    let gens = minimal_generators(m.order(), m.relations(), sat)?;
    present_submodule(m, gens)
}
