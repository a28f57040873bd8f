//! Reflexive forms `Ω^[i]` on a hypersurface, the modules `ZΩ^[i]`,
//! `BΩ^[i]`, `GΩ^[i]`, the Cartier operator and its iterates.
//!
//! With `Ω^i` reflexive, `ZΩ^[i]` is the kernel of `d` into
//! `F_*(Ω^{i+1}/tors)`, `BΩ^[i]` is the saturation of `BΩ^i` (the unique
//! extension agreeing with `BΩ^i` on the punctured spectrum whose quotient is
//! torsion-free) and `C` is obtained by inverting `C^{-1}: Ω^i → Z/B^[i]`.
//! Torsion and saturation are taken with respect to a variable not dividing
//! `f`, which is a nonzerodivisor on `R`.

use crate::arith::Poly;
use crate::error::{Error, Result};
use crate::frob::ClassSel;
use crate::groebner::Vector;
use crate::modalg::hom::saturate_generators;
use crate::modalg::{
    minimal_generators, present_submodule, quotient, subquotient, torsion_by_saturation, Lifter, Module, ModuleMap,
};

use super::{d_rule, inverse_cartier_rule, monomial_images, monomial_map, DeRhamDatum, FormLevel};

/// A variable `x_k` with `x_k ∤ f`, if `f ≠ 0`.
pub fn nonzerodivisor_variable(f: &Poly) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    (0..f.ring().nvars()).find(|&k| !f.restrict_zero(k).is_zero())
}

/// Degrees of the generators of a nonzero module, for diagnostics.
pub fn describe_module(m: &Module) -> Result<String> {
    let (t, _, _) = m.trim()?;
    let scale = m.ring().scale();
    let degs: Vec<String> = t.degrees().iter().map(|d| format!("{}/{}", d, scale)).collect();
    Ok(format!("{} generator(s) in degrees [{}]", t.rank(), degs.join(", ")))
}

/// `F^e_*(Ω^{i+1}/tors)` on the class of zero.
fn torsion_free_level(datum: &DeRhamDatum, i: usize, e: u32, var: Option<usize>) -> Result<FormLevel> {
    let forms = datum.forms(i);
    let n = datum.space.nvars();
    match var {
        None => FormLevel::pushed(forms, e, &ClassSel::zero(n)),
        Some(v) => {
            let (_, inc) = torsion_by_saturation(&forms.module, v)?;
            let (q, _) = quotient(&forms.module, inc.images())?;
            FormLevel::pushed(&forms.with_module(q), e, &ClassSel::zero(n))
        }
    }
}

/// Everything up to the comparison map `C^{-1}: Ω^i → ZΩ^[i]/BΩ^[i]`.
#[derive(Clone, Debug)]
pub struct CartierComparison {
    pub i: usize,
    pub omega: FormLevel,
    pub p: FormLevel,
    pub z: Module,
    pub z_inc: ModuleMap,
    pub b_plain: Vec<Vector>,
    pub b_sat: Vec<Vector>,
    pub quotient: Module,
    pub forward: ModuleMap,
    pub raw_images: Vec<Vector>,
    pub var: Option<usize>,
}

pub fn cartier_comparison(datum: &DeRhamDatum, i: usize) -> Result<CartierComparison> {
    let n = datum.space.nvars();
    let zero = ClassSel::zero(n);
    let var = nonzerodivisor_variable(&datum.space.hs.f);
    let omega = datum.level(i, 0, &ClassSel::All)?;
    let p = datum.level(i, 1, &zero)?;
    let qlevel = torsion_free_level(datum, i + 1, 1, var)?;
    let d = monomial_map(&p, &qlevel, d_rule(&datum.space))?;
    let (z, z_inc) = d.kernel()?;
    let b_plain: Vec<Vector> = if i == 0 {
        vec![]
    } else {
        let prev = datum.level(i - 1, 1, &zero)?;
        monomial_map(&prev, &p, d_rule(&datum.space))?.image()?.1.images().to_vec()
    };
    let b_sat = match var {
        None => b_plain.clone(),
        Some(v) => {
            let mut gens = b_plain.clone();
            gens.extend(p.module.relations().iter().cloned());
            let sat = if gens.is_empty() { vec![] } else { saturate_generators(p.module.order(), &gens, v)? };
            minimal_generators(p.module.order(), p.module.relations(), sat)?
        }
    };
    let (quot, lifter) = subquotient(&z_inc, &b_sat)?;
    let raw_images = monomial_images(&omega, &p, inverse_cartier_rule(p.q()))?;
    let mut images = Vec::with_capacity(raw_images.len());
    for v in &raw_images {
        images.push(lifter.lift(v).ok_or_else(|| Error::IllDefined("inverse Cartier image is not closed".into()))?);
    }
    let forward = ModuleMap::new(omega.module.clone(), quot.clone(), images, 0)?;
    Ok(CartierComparison { i, omega, p, z, z_inc, b_plain, b_sat, quotient: quot, forward, raw_images, var })
}

/// `Ω^[i]`, `ZΩ^[i]`, `BΩ^[i]`, `GΩ^[i]` with `C` and `C^{-1}` (level one,
/// class of zero).
#[derive(Clone, Debug)]
pub struct ReflexiveForms {
    pub i: usize,
    pub omega: FormLevel,
    pub p: FormLevel,
    pub z: Module,
    pub z_inc: ModuleMap,
    pub b: Module,
    pub b_inc: ModuleMap,
    pub b_plain: Vec<Vector>,
    pub g: Module,
    pub g_proj: ModuleMap,
    /// `C: ZΩ^[i] → Ω^[i]`.
    pub c: ModuleMap,
    /// `C^{-1}: Ω^[i] → GΩ^[i]`.
    pub c_inv: ModuleMap,
    /// `C^{-1}: Ω^[i] → ZΩ^[i]/BΩ^[i]` and its inverse.
    pub forward: ModuleMap,
    pub backward: ModuleMap,
    pub var: Option<usize>,
}

impl ReflexiveForms {
    /// `C ∘ C^{-1} = id` on `Ω^[i]`.
    pub fn split_identity(&self) -> Result<bool> {
        self.backward.compose(&self.forward)?.equals(&ModuleMap::identity(&self.omega.module))
    }
}

pub fn reflexive_forms(datum: &DeRhamDatum, i: usize) -> Result<ReflexiveForms> {
    let cmp = cartier_comparison(datum, i)?;
    if !cmp.forward.is_injective()? {
        return Err(Error::NotReflexive(i));
    }
    if !cmp.forward.is_surjective()? {
        let (coker, _) = cmp.forward.cokernel()?;
        return Err(Error::CartierNotSurjective { level: 1, cokernel: describe_module(&coker)? });
    }
    let backward = cmp.forward.invert_iso()?;
    let omega_mod = cmp.omega.module.clone();
    let c = ModuleMap::new(cmp.z.clone(), omega_mod.clone(), backward.images().to_vec(), 0)?;
    let (g, g_proj) = quotient(&cmp.p.module, &cmp.b_sat)?;
    let c_inv = ModuleMap::new(omega_mod, g.clone(), cmp.raw_images.clone(), 0)?;
    let (b, b_inc) = present_submodule(&cmp.p.module, cmp.b_sat.clone())?;
    Ok(ReflexiveForms {
        i,
        omega: cmp.omega,
        p: cmp.p,
        z: cmp.z,
        z_inc: cmp.z_inc,
        b,
        b_inc,
        b_plain: cmp.b_plain,
        g,
        g_proj,
        c,
        c_inv,
        forward: cmp.forward,
        backward,
        var: cmp.var,
    })
}

/// `(Z_n, B_n, G_n, C_n, C_n^{-1})` at level `n` for `i`-forms, on the class of zero.
#[derive(Clone, Debug)]
pub struct CartierPackage {
    pub i: usize,
    pub n_level: u32,
    pub level: FormLevel,
    pub z: Module,
    pub z_inc: ModuleMap,
    pub b: Module,
    pub b_inc: ModuleMap,
    pub g: Module,
    pub g_proj: ModuleMap,
    /// `C_n: Z_n → Ω^[i]`.
    pub c: ModuleMap,
    /// `C_n^{-1}: Ω^[i] → G_n`.
    pub c_inv: ModuleMap,
    /// `C^{-1}_{m,m-1}: G_{m-1} → G_m` for `m = 2..=n`.
    pub chain: Vec<ModuleMap>,
}

/// Iterate the partial map `C` on reflexive forms up to level `n_level`.
///
/// `Z_m` is the pullback of `Z_{m-1}` along `F^{m-1}_*C` restricted to the
/// cycles of the level-`m` complex, and `B_m = ker C_m`.
pub fn iterate_cartier(datum: &DeRhamDatum, i: usize, n_level: u32) -> Result<Vec<CartierPackage>> {
    if n_level == 0 || n_level > datum.space.ring().e_max() {
        return Err(Error::Invalid(format!("iteration level {n_level} outside 1..={}", datum.space.ring().e_max())));
    }
    let rf = reflexive_forms(datum, i)?;
    let n = datum.space.nvars();
    let zero = ClassSel::zero(n);
    let p = datum.space.hs.p() as i64;
    let omega = rf.omega.clone();
    let first = CartierPackage {
        i,
        n_level: 1,
        level: rf.p.clone(),
        z: rf.z.clone(),
        z_inc: rf.z_inc.clone(),
        b: rf.b.clone(),
        b_inc: rf.b_inc.clone(),
        g: rf.g.clone(),
        g_proj: rf.g_proj.clone(),
        c: rf.c.clone(),
        c_inv: rf.c_inv.clone(),
        chain: vec![],
    };
    let z1_lifter = Lifter::for_inclusion(&rf.z_inc)?;
    let mut out = vec![first];
    for m in 2..=n_level {
        let prev = out.last().unwrap().clone();
        let pm = datum.level(i, m, &zero)?;
        let qm = torsion_free_level(datum, i + 1, m, rf.var)?;
        let (k, k_inc) = monomial_map(&pm, &qm, d_rule(&datum.space))?.kernel()?;
        // F^{m-1}_*C on the cycles of the level-m complex, landing in level m-1
        let step = |v: &Vector| -> Result<Vector> {
            let terms = pm.underlying(v);
            let at_one = rf.p.from_underlying(&terms)?;
            let z = z1_lifter.lift(&at_one).ok_or_else(|| Error::IllDefined("element is not a cycle".into()))?;
            let c = rf.c.apply(&z);
            prev.level.from_underlying(&omega.underlying(&c))
        };
        let k_images: Vec<Vector> = k_inc.images().iter().map(&step).collect::<Result<_>>()?;
        let (outside, _) = quotient(&prev.level.module, prev.z_inc.images())?;
        let to_outside = ModuleMap::new(k.clone(), outside, k_images.clone(), 0)?;
        let (zk, zk_inc) = to_outside.kernel()?;
        let z_gens: Vec<Vector> = zk_inc.images().iter().map(|v| k_inc.apply(v)).collect();
        let (z, z_inc) = present_submodule(&pm.module, z_gens)?;
        let _ = zk;
        let prev_lifter = Lifter::for_inclusion(&prev.z_inc)?;
        let mut c_images = Vec::with_capacity(z.rank());
        for v in z_inc.images() {
            let w = step(v)?;
            let l = prev_lifter.lift(&w).ok_or_else(|| Error::IllDefined("pullback left the previous cycles".into()))?;
            c_images.push(prev.c.apply(&l));
        }
        let c = ModuleMap::new(z.clone(), omega.module.clone(), c_images, 0)?;
        if !c.is_surjective()? {
            let (coker, _) = c.cokernel()?;
            return Err(Error::CartierNotSurjective { level: m, cokernel: describe_module(&coker)? });
        }
        let b_in_z = c.kernel_generators()?;
        let b_gens: Vec<Vector> = b_in_z.iter().map(|v| z_inc.apply(v)).collect();
        let (b, b_inc) = present_submodule(&pm.module, b_gens.clone())?;
        let (g, g_proj) = quotient(&pm.module, &b_gens)?;
        let raw = monomial_images(&omega, &pm, inverse_cartier_rule(pm.q()))?;
        let c_inv = ModuleMap::new(omega.module.clone(), g.clone(), raw, 0)?;
        let lift_imgs = monomial_images(&prev.level, &pm, inverse_cartier_rule(p))?;
        let link = ModuleMap::new(prev.g.clone(), g.clone(), lift_imgs, 0)?;
        let mut chain = prev.chain.clone();
        chain.push(link);
        out.push(CartierPackage { i, n_level: m, level: pm, z, z_inc, b, b_inc, g, g_proj, c, c_inv, chain });
    }
    Ok(out)
}
