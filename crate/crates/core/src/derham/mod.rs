//! De Rham complexes in characteristic `p`: Kähler differentials, the
//! `S`-linear differential on Frobenius pushforwards, boundaries and cycles,
//! inverse Cartier operators, reflexive forms and iterated Cartier packages.
//!
//! All pushed modules are restricted to one class of the Frobenius grading
//! (see [`crate::frob`]); Cartier-type maps only see the class of zero.

pub mod forms;
pub mod log;
pub mod reflexive;

use std::sync::Arc;

use crate::arith::Poly;
use crate::error::{Error, Result};
use crate::frob::{ClassSel, Hypersurface};
use crate::groebner::Vector;
use crate::modalg::{
    sequence_in_degree, short_exact, subquotient, DegreeExactness, Lifter, Module, ModuleMap, ShortExact,
};
pub use forms::{
    cartier_rule, d_rule, identity_rule, inverse_cartier_rule, monomial_images, monomial_map, subsets_of, wedge_masks,
    wedge_sign, FormLevel, FormSpace, Forms, LogTerm, Mask,
};
pub use log::{
    duality_check, hara_functoriality, hara_package, hara_package_with, log_forms, residue_rule, residue_sequence,
    residue_sequence_with, DualityClass, DualityReport, HaraClass, HaraLevel, HaraPackage, LadderCheck, LogDivisor,
    ResidueKind, ResidueReport,
};
pub use reflexive::{
    cartier_comparison, describe_module, iterate_cartier, nonzerodivisor_variable, reflexive_forms, CartierComparison,
    CartierPackage, ReflexiveForms,
};

/// A form space together with its modules of `i`-forms, `0 ≤ i ≤ n + 1`.
#[derive(Clone, Debug)]
pub struct DeRhamDatum {
    pub space: FormSpace,
    forms: Vec<Arc<Forms>>,
}

impl DeRhamDatum {
    /// Ordinary forms on `S/(f)`.
    pub fn new(f: &Poly) -> Result<DeRhamDatum> {
        DeRhamDatum::from_space(FormSpace::plain(&Hypersurface::new(f)?))
    }

    pub fn from_space(space: FormSpace) -> Result<DeRhamDatum> {
        let top = space.dim() + 1;
        let forms = (0..=top).map(|i| space.forms(i)).collect::<Result<Vec<_>>>()?;
        Ok(DeRhamDatum { space, forms })
    }

    /// Check `d ∘ d = 0` on the class of zero of `F_*Ω^•`.
    pub fn certify_complex(&self) -> Result<()> {
        let top = self.top();
        let zero = ClassSel::zero(self.space.nvars());
        for i in 0..top.saturating_sub(1) {
            let d0 = de_rham_d(self, i, 1, &zero)?;
            let d1 = de_rham_d(self, i + 1, 1, &zero)?;
            if !d1.compose(&d0)?.is_zero()? {
                return Err(Error::IllDefined(format!("d ∘ d is nonzero on {i}-forms")));
            }
        }
        Ok(())
    }

    pub fn hypersurface(&self) -> &Hypersurface {
        &self.space.hs
    }

    pub fn top(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn forms(&self, i: usize) -> &Arc<Forms> {
        &self.forms[i.min(self.top())]
    }

    /// `Ω^i` as a presented module.
    pub fn omega(&self, i: usize) -> Module {
        self.forms(i).module.clone()
    }

    /// `F^e_*Ω^i` restricted to `class` (`e = 0`: `Ω^i` itself).
    pub fn level(&self, i: usize, e: u32, class: &ClassSel) -> Result<FormLevel> {
        FormLevel::pushed(self.forms(i), e, class)
    }
}

/// `Ω^i_R` for `R = S/(f)`: generators `dx_J` and relations `f dx_J`,
/// `df ∧ dx_{J'}`.
pub fn kaehler(f: &Poly, i: usize) -> Result<Module> {
    let hs = Hypersurface::new(f)?;
    let space = FormSpace::plain(&hs);
    Ok(space.forms(i)?.module.clone())
}

/// `d: F^e_*Ω^i → F^e_*Ω^{i+1}` on one class.
pub fn de_rham_d(datum: &DeRhamDatum, i: usize, e: u32, class: &ClassSel) -> Result<ModuleMap> {
    if e == 0 {
        return Err(Error::Invalid("the differential is only linear after a Frobenius pushforward".into()));
    }
    let src = datum.level(i, e, class)?;
    let tgt = datum.level(i + 1, e, class)?;
    monomial_map(&src, &tgt, d_rule(&datum.space))
}

/// Boundaries and cycles inside `F^e_*Ω^i` for one class.
#[derive(Clone, Debug)]
pub struct BoundariesCycles {
    pub level: FormLevel,
    pub z: Module,
    pub z_inc: ModuleMap,
    pub b: Module,
    pub b_inc: ModuleMap,
    /// `B → Z`.
    pub b_to_z: ModuleMap,
}

pub fn boundaries_cycles(datum: &DeRhamDatum, i: usize, e: u32, class: &ClassSel) -> Result<BoundariesCycles> {
    let level = datum.level(i, e, class)?;
    let (z, z_inc) = de_rham_d(datum, i, e, class)?.kernel()?;
    let (b, b_inc) = if i == 0 {
        crate::modalg::present_submodule(&level.module, vec![])?
    } else {
        de_rham_d(datum, i - 1, e, class)?.image()?
    };
    let lifter = Lifter::for_inclusion(&z_inc)?;
    let b_to_z = crate::modalg::restrict_map_with(&ModuleMap::identity(&level.module), &b_inc, &lifter)?;
    Ok(BoundariesCycles { level, z, z_inc, b, b_inc, b_to_z })
}

/// `C^{-1}: Ω^i → ZΩ^i/BΩ^i` (class zero of `F_*`).
#[derive(Clone, Debug)]
pub struct InverseCartier {
    pub omega: FormLevel,
    pub cycles: BoundariesCycles,
    /// `Z/B` presented on the generators of `Z`.
    pub quotient: Module,
    pub map: ModuleMap,
    /// The images `x^{qb} ω` as elements of `F_*Ω^i`.
    pub raw_images: Vec<Vector>,
}

pub fn inverse_cartier(datum: &DeRhamDatum, i: usize) -> Result<InverseCartier> {
    let n = datum.space.nvars();
    let cycles = boundaries_cycles(datum, i, 1, &ClassSel::zero(n))?;
    let omega = datum.level(i, 0, &ClassSel::All)?;
    let q = cycles.level.q();
    let raw_images = monomial_images(&omega, &cycles.level, inverse_cartier_rule(q))?;
    let (quotient, lifter) = subquotient(&cycles.z_inc, cycles.b_inc.images())?;
    let mut images = Vec::with_capacity(raw_images.len());
    for v in &raw_images {
        images.push(lifter.lift(v).ok_or_else(|| Error::IllDefined("inverse Cartier image is not closed".into()))?);
    }
    let map = ModuleMap::new(omega.module.clone(), quotient.clone(), images, 0)?;
    Ok(InverseCartier { omega, cycles, quotient, map, raw_images })
}

/// Degrees `lo, lo + step, …, top`, starting at the least generator degree of
/// `modules` rounded down to a multiple of `step`.
pub fn degree_grid(modules: &[&Module], step: i64, top: i64) -> Vec<i64> {
    let lo = modules.iter().flat_map(|m| m.degrees().iter().copied()).min().unwrap_or(0).min(top);
    let lo = lo.div_euclid(step) * step;
    (0..).map(|k| lo + k * step).take_while(|&t| t <= top).collect()
}

/// A short sequence `0 → A → B → C → 0` certified both as modules and degree
/// by degree.
#[derive(Clone, Debug)]
pub struct SesCertificate {
    pub module: ShortExact,
    pub degrees: Vec<DegreeExactness>,
}

impl SesCertificate {
    pub fn holds(&self) -> bool {
        self.module.holds() && self.degrees.iter().all(|d| d.short_exact())
    }

    /// Degree-wise Euler characteristic `dim A − dim B + dim C` vanishes.
    pub fn euler_balanced(&self) -> bool {
        self.degrees.iter().all(|d| d.dims[0] + d.dims[2] == d.dims[1])
    }
}

pub fn certify_ses(a: &ModuleMap, b: &ModuleMap, grid: &[i64]) -> Result<SesCertificate> {
    let module = short_exact(a, b)?;
    let degrees = grid.iter().map(|&t| sequence_in_degree(a, b, t)).collect::<Result<Vec<_>>>()?;
    Ok(SesCertificate { module, degrees })
}

/// Grid of degrees up to `top` (unscaled) for a sequence living at Frobenius
/// level `e`.
pub fn sequence_grid(a: &ModuleMap, b: &ModuleMap, e: u32, top: i64) -> Vec<i64> {
    let ring = a.source.ring();
    let scale = ring.scale();
    let step = scale / (ring.p() as i64).pow(e);
    degree_grid(&[&a.source, &a.target, &b.target], step, top * scale)
}

#[cfg(test)]
mod tests;
