//! Differential forms modulo torsion on the coordinate simple normal crossing
//! divisor `E = {x_1⋯x_n = 0} ⊂ A^n`, its component `E_1 = {x_1 = 0}` and the
//! union `E_1^c` of the remaining components, with the short exact sequence
//! `0 → Ω^i_E/tors → Ω^i_{E_1^c}/tors ⊕ Ω^i_{E_1} → Ω^i_{E_1^c}|_{E_1}/tors → 0`.
//!
//! Index sets are bit masks over `0..n`; variable `k` is `x_{k+1}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Monomial, Poly, Ring, RingRef, MAX_VARS};
use crate::derham::{
    certify_ses, degree_grid, kaehler, residue_sequence_with, subsets_of, Mask, ResidueReport,
    SesCertificate,
};
use crate::error::{Error, Result};
use crate::frob::Hypersurface;
use crate::groebner::{Term, Vector};
use crate::modalg::{double_dual, quotient, unit, Lifter, Module, ModuleMap, PresentedModule};

/// Degree bound (unscaled) for the degree-wise checks.
pub const SNC_DEGREE_TOP: i64 = 6;

/// The affine space `A^n` over `𝔽_p` with its coordinate divisor and a
/// distinguished component.
#[derive(Clone, Debug)]
pub struct SncContext {
    pub ring: RingRef,
    pub n: usize,
    /// Index of the distinguished component `{x_d = 0}` (0-based).
    pub component: usize,
}

impl SncContext {
    /// Variables `x1, …, xn`, distinguished component `x1`.
    pub fn new(p: u64, n: usize) -> Result<SncContext> {
        if n == 0 {
            return Err(Error::Invalid("an SNC context needs at least one variable".into()));
        }
        let names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Ok(SncContext { ring: Ring::new(p, &refs)?, n, component: 0 })
    }

    pub fn with_component(mut self, component: usize) -> Result<SncContext> {
        if component >= self.n {
            return Err(Error::BadSupport);
        }
        self.component = component;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn full(&self) -> Mask {
        (1u32 << self.n) - 1
    }

    /// All indices but the distinguished one.
    pub fn rest(&self) -> Mask {
        self.full() & !(1u32 << self.component)
    }

    /// `Σ_i`: ascending `i`-tuples in `1..=n`.
    pub fn sigma(&self, i: usize) -> Vec<Mask> {
        subsets_of(self.full(), i)
    }

    /// `Π_i`: ascending `i`-tuples avoiding the distinguished index.
    pub fn pi(&self, i: usize) -> Vec<Mask> {
        subsets_of(self.rest(), i)
    }

    /// `a^c`, the complement of `a` among the non-distinguished indices.
    pub fn complement(&self, a: Mask) -> Mask {
        self.rest() & !a
    }

    fn degree(&self, a: Mask) -> i64 {
        let w = self.ring.var_degrees();
        (0..self.n).filter(|&k| a >> k & 1 == 1).map(|k| w[k]).sum()
    }
}

/// `x_S = Π_{k ∈ S} x_k`.
pub fn mask_monomial(s: Mask) -> Monomial {
    let exps: Vec<u32> = (0..MAX_VARS).map(|k| s >> k & 1).collect();
    Monomial::from_exps(&exps)
}

fn monomial_times(s: Mask, c: usize) -> Vector {
    vec![Term { m: mask_monomial(s), c: c as u32, k: 1 }]
}

/// Which module of forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SncKind {
    /// `Ω^i_E/tors`.
    Divisor,
    /// `Ω^i_{E_1^c}/tors`.
    Complement,
    /// `Ω^i_{E_1}`.
    Component,
    /// `Ω^i_{E_1^c}|_{E_1}/tors`.
    Restricted,
}

/// A module of forms presented on the generators `dx_a`, `a ∈ subsets`.
#[derive(Clone, Debug)]
pub struct SncFormModule {
    pub kind: SncKind,
    pub i: usize,
    pub subsets: Vec<Mask>,
    pub module: Module,
}

impl SncFormModule {
    pub fn index_of(&self, a: Mask) -> Option<usize> {
        self.subsets.iter().position(|&s| s == a)
    }
}

/// The closed-form presentation of `which` in form degree `i`.
///
/// `Ω^i_E/tors` is built from the split relation families: `x_{a^c} dx_d ∧
/// dx_a` for `a ∈ Π_{i-1}` and `x_d x_{b^c} dx_b` for `b ∈ Π_i`.
pub fn snc_module(ctx: &SncContext, which: SncKind, i: usize) -> Result<SncFormModule> {
    if i == 0 || i > ctx.n {
        return Err(Error::Invalid(format!("form degree {i} outside 1..={}", ctx.n)));
    }
    let d = ctx.component;
    let xd = 1u32 << d;
    let subsets = match which {
        SncKind::Divisor | SncKind::Complement => ctx.sigma(i),
        SncKind::Component | SncKind::Restricted => ctx.pi(i),
    };
    let index = |a: Mask| subsets.iter().position(|&s| s == a).expect("index set");
    let mut rels: Vec<Vector> = Vec::new();
    match which {
        SncKind::Divisor | SncKind::Complement => {
            let extra = if which == SncKind::Divisor { xd } else { 0 };
            for a in ctx.pi(i - 1) {
                rels.push(monomial_times(ctx.complement(a), index(a | xd)));
            }
            for b in ctx.pi(i) {
                rels.push(monomial_times(extra | ctx.complement(b), index(b)));
            }
        }
        SncKind::Component => {
            for b in ctx.pi(i) {
                rels.push(monomial_times(xd, index(b)));
            }
        }
        SncKind::Restricted => {
            for b in ctx.pi(i) {
                rels.push(monomial_times(xd, index(b)));
                rels.push(monomial_times(ctx.complement(b), index(b)));
            }
        }
    }
    let degrees = subsets.iter().map(|&a| ctx.degree(a)).collect();
    let module = PresentedModule::new(&ctx.ring, degrees, rels)?;
    Ok(SncFormModule { kind: which, i, subsets, module })
}

fn certified(source: Module, target: Module, images: Vec<Vector>) -> Result<ModuleMap> {
    ModuleMap::new(source, target, images, 0)
        .map_err(|e| Error::IllDefined(format!("the map does not respect the relation families: {e}")))
}

/// `φ: Ω^i_E/tors → Ω^i_{E_1^c}/tors ⊕ Ω^i_{E_1}`,
/// `Σ f_a dx_a ↦ (Σ f_a dx_a, Σ_{a ∈ Π_i} f̄_a dx̄_a)`.
pub fn phi_map(ctx: &SncContext, i: usize) -> Result<ModuleMap> {
    let src = snc_module(ctx, SncKind::Divisor, i)?;
    let left = snc_module(ctx, SncKind::Complement, i)?;
    let right = snc_module(ctx, SncKind::Component, i)?;
    let target = PresentedModule::direct_sum(&[left.module.clone(), right.module.clone()])?;
    let offset = left.module.rank();
    let images = src
        .subsets
        .iter()
        .map(|&a| {
            let mut v = unit(left.index_of(a).expect("same index set"));
            if let Some(k) = right.index_of(a) {
                v.extend(unit(offset + k));
            }
            target.order().normalize(v)
        })
        .collect();
    certified(src.module, target, images)
}

/// `ψ: Ω^i_{E_1^c}/tors ⊕ Ω^i_{E_1} → Ω^i_{E_1^c}|_{E_1}/tors`,
/// `(Σ f_a dx_a, Σ ḡ_a dx̄_a) ↦ Σ_{a ∈ Π_i} (f̄_a − ḡ_a) dx̄_a`.
pub fn psi_map(ctx: &SncContext, i: usize) -> Result<ModuleMap> {
    let left = snc_module(ctx, SncKind::Complement, i)?;
    let right = snc_module(ctx, SncKind::Component, i)?;
    let target = snc_module(ctx, SncKind::Restricted, i)?;
    let source = PresentedModule::direct_sum(&[left.module.clone(), right.module.clone()])?;
    let minus_one = ctx.p() - 1;
    let mut images: Vec<Vector> =
        left.subsets.iter().map(|&a| target.index_of(a).map(unit).unwrap_or_default()).collect();
    for &b in &right.subsets {
        let k = target.index_of(b).expect("same index set");
        images.push(vec![Term { m: Monomial::ONE, c: k as u32, k: minus_one }]);
    }
    certified(source, target.module, images)
}

/// Render a vector of forms as `f·dx1^dx3 + …`.
pub fn describe_form(ring: &RingRef, subsets: &[Mask], v: &[Term]) -> String {
    let mut parts: BTreeMap<u32, Vec<(Monomial, u32)>> = BTreeMap::new();
    for t in v {
        parts.entry(t.c).or_default().push((t.m, t.k));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts
        .into_iter()
        .map(|(c, terms)| {
            let coeff = Poly::from_terms(ring, terms).to_text();
            let a = subsets.get(c as usize).copied().unwrap_or(0);
            let wedge: Vec<String> =
                (0..32).filter(|&k| a >> k & 1 == 1).map(|k| format!("d{}", ring.names()[k])).collect();
            format!("({coeff})·{}", wedge.join("^"))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Exactness certificate for one `(n, i, p)`.
#[derive(Clone, Debug, Serialize)]
pub struct SncCertificate {
    pub n: usize,
    pub i: usize,
    pub p: u32,
    pub phi_injective: bool,
    pub psi_surjective: bool,
    pub composite_zero: bool,
    pub image_is_kernel: bool,
    /// Degrees (unscaled) where `dim A − dim B + dim C ≠ 0` or exactness fails.
    pub bad_degrees: Vec<i64>,
    /// `(claim, witness)` for the first failing claim.
    pub failure: Option<(String, String)>,
}

impl SncCertificate {
    pub fn holds(&self) -> bool {
        self.phi_injective && self.psi_surjective && self.composite_zero && self.image_is_kernel && self.bad_degrees.is_empty()
    }
}

/// Certify the short exact sequence in form degree `i`, and degree by degree
/// up to `top` (unscaled).
pub fn verify_snc_exact(ctx: &SncContext, i: usize, top: i64) -> Result<SncCertificate> {
    let phi = phi_map(ctx, i)?;
    let psi = psi_map(ctx, i)?;
    let scale = ctx.ring.scale();
    let grid = degree_grid(&[&phi.source, &phi.target, &psi.target], scale, top * scale);
    let cert: SesCertificate = certify_ses(&phi, &psi, &grid)?;
    let bad_degrees = cert
        .degrees
        .iter()
        .filter(|d| !d.short_exact() || d.dims[0] + d.dims[2] != d.dims[1])
        .map(|d| d.t / scale)
        .collect();
    let sigma = ctx.sigma(i);
    let middle: Vec<Mask> = sigma.iter().copied().chain(ctx.pi(i)).collect();
    let failure = if !cert.module.injective {
        let w = phi.kernel_generators()?.into_iter().next().unwrap_or_default();
        Some(("φ is injective".to_string(), describe_form(&ctx.ring, &sigma, &w)))
    } else if !cert.module.surjective {
        let (coker, _) = psi.cokernel()?;
        let missing = (0..coker.rank()).find(|&k| coker.reduce(unit(k)).map_or(true, |r| !r.is_empty())).unwrap_or(0);
        Some(("ψ is surjective".to_string(), describe_form(&ctx.ring, &ctx.pi(i), &unit(missing))))
    } else if !cert.module.complex {
        let k = (0..phi.source.rank())
            .find(|&k| psi.target.reduce(psi.apply(&phi.apply(&unit(k)))).map_or(true, |r| !r.is_empty()))
            .unwrap_or(0);
        Some(("ψ ∘ φ = 0".to_string(), describe_form(&ctx.ring, &sigma, &unit(k))))
    } else if !cert.module.exact_middle {
        let (_, inc) = phi.image()?;
        let lifter = Lifter::for_inclusion(&inc)?;
        let w = psi.kernel_generators()?.into_iter().find(|k| lifter.lift(k).is_none()).unwrap_or_default();
        Some(("ker ψ ⊆ im φ".to_string(), describe_form(&ctx.ring, &middle, &w)))
    } else {
        None
    };
    Ok(SncCertificate {
        n: ctx.n,
        i,
        p: ctx.p(),
        phi_injective: cert.module.injective,
        psi_surjective: cert.module.surjective,
        composite_zero: cert.module.complex,
        image_is_kernel: cert.module.exact_middle,
        bad_degrees,
        failure,
    })
}

/// [`verify_snc_exact`] over `1 ≤ n ≤ n_max`, `1 ≤ i ≤ min(n, i_max)` and the
/// given primes, in a fixed order.
pub fn verify_snc_grid(n_max: usize, i_max: usize, primes: &[u64], top: i64) -> Result<Vec<SncCertificate>> {
    let jobs: Vec<(u64, usize, usize)> = primes
        .iter()
        .flat_map(|&p| (1..=n_max).flat_map(move |n| (1..=n.min(i_max)).map(move |i| (p, n, i))))
        .collect();
    jobs.par_iter().map(|&(p, n, i)| verify_snc_exact(&SncContext::new(p, n)?, i, top)).collect()
}

/// `M/ker(M → M**)` over `R = S/(f)`, which is `M` modulo torsion for reduced
/// `R`.
fn torsion_free_quotient(m: &Module, f: &Poly) -> Result<Module> {
    let hs = Hypersurface::new(f)?;
    if m.is_zero()? {
        return Ok(m.clone());
    }
    let r = double_dual(m, &hs.ring_module())?;
    let ker = r.canonical.kernel_generators()?;
    Ok(quotient(m, &ker)?.0)
}

/// The generator-matching map from a closed form to `Ω^i_R/tors` computed
/// generically.
fn matching_map(closed: &SncFormModule, generic: &Module, subsets: &[Mask]) -> Result<ModuleMap> {
    let images = closed
        .subsets
        .iter()
        .map(|&a| subsets.iter().position(|&s| s == a).map(unit).ok_or(Error::Invalid("generator missing".into())))
        .collect::<Result<Vec<_>>>()?;
    certified(closed.module.clone(), generic.clone(), images)
}

/// Whether the closed form for `which` agrees with `Ω^i/tors` of the
/// corresponding reduced hypersurface, computed through the double dual.
///
/// `Ω^i_{E_1^c}|_{E_1}/tors` is compared by Hilbert function with the divisor
/// form in one variable fewer, which is then checked in turn.
pub fn torsion_cross_check(ctx: &SncContext, which: SncKind, i: usize) -> Result<bool> {
    let closed = snc_module(ctx, which, i)?;
    let (f, closed) = match which {
        SncKind::Divisor => (Poly::monomial(&ctx.ring, mask_monomial(ctx.full()), 1), closed),
        SncKind::Complement => (Poly::monomial(&ctx.ring, mask_monomial(ctx.rest()), 1), closed),
        SncKind::Component => (Poly::var(&ctx.ring, ctx.component), closed),
        SncKind::Restricted => {
            if ctx.n == 1 {
                return closed.module.is_zero();
            }
            let sub = SncContext::new(ctx.p() as u64, ctx.n - 1)?;
            if i > sub.n {
                return closed.module.is_zero();
            }
            let expected = snc_module(&sub, SncKind::Divisor, i)?;
            let scale = ctx.ring.scale();
            for t in 0..=SNC_DEGREE_TOP {
                if closed.module.graded_piece_dim(t * scale)? != expected.module.graded_piece_dim(t * scale)? {
                    return Ok(false);
                }
            }
            return torsion_cross_check(&sub, SncKind::Divisor, i);
        }
    };
    if f.homogeneous_degree() == Some(0) {
        return closed.module.is_zero();
    }
    let m = kaehler(&f, i)?;
    let generic = torsion_free_quotient(&m, &f)?;
    let forms = crate::derham::FormSpace::plain(&Hypersurface::new(&f)?).forms(i)?;
    let map = match matching_map(&closed, &generic, &forms.subsets) {
        Ok(m) => m,
        Err(Error::IllDefined(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(map.is_injective()? && map.is_surjective()?)
}

/// The residue sequence for `BΩ^i`, `ZΩ^i` or `GΩ^i` (`which` = 2, 3, 4) on
/// `A^n` with log poles along all coordinate hyperplanes and `D` the
/// distinguished component.
pub fn snc_bzg_residue(ctx: &SncContext, i: usize, which: u8, top: i64) -> Result<ResidueReport> {
    if !(2..=4).contains(&which) {
        return Err(Error::Invalid(format!("residue sequence {which} is not one of 2..=4")));
    }
    residue_sequence_with(&ctx.ring, ctx.full(), ctx.component, i, which, top)
}

#[cfg(test)]
mod tests;
