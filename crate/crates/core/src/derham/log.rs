//! Logarithmic forms on affine space along coordinate hyperplanes, twisted by
//! ℚ-divisors supported on them: the twisted Cartier sequences and their
//! iterates, the wedge-product duality and the residue sequences.
//!
//! On affine space every pushed form module is free and splits over the
//! residues of the underlying exponent modulo `q`; all computations run one
//! residue class at a time.

use std::sync::Arc;

use rayon::prelude::*;

use crate::arith::{field, RingRef};
use crate::error::{Error, Result};
use crate::frob::{ClassSel, MultiDegree};
use crate::groebner::{Term, Vector};
use crate::modalg::{
    hom_module, present_submodule, quotient, restrict_map, short_exact, unit, HomModule, Lifter, Module, ModuleMap,
    PresentedModule, ShortExact,
};

use super::{
    cartier_rule, certify_ses, d_rule, degree_grid, identity_rule, inverse_cartier_rule, monomial_images, monomial_map,
    sequence_grid, wedge_masks, wedge_sign, FormLevel, FormSpace, Forms, LogTerm, Mask, SesCertificate,
};

/// Degree bound (unscaled) for the degree-wise certificates of the twisted
/// Cartier sequences.
pub const HARA_DEGREE_TOP: i64 = 12;
/// Degree bound for the duality dimension counts.
pub const DUALITY_DEGREE_TOP: i64 = 10;
/// Degree bound for the residue sequences.
pub const RESIDUE_DEGREE_TOP: i64 = 8;

/// A ℚ-divisor `Σ a_k/p^{e_k} {x_k = 0}` supported on coordinate hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDivisor {
    pub support: Mask,
    /// `(a_k, e_k)` per variable.
    pub coeffs: Vec<(i64, u32)>,
    p: i64,
}

impl LogDivisor {
    pub fn new(ring: &RingRef, support: Mask, coeffs: Vec<(i64, u32)>) -> Result<LogDivisor> {
        let n = ring.nvars();
        if coeffs.len() != n || support >> n != 0 {
            return Err(Error::BadSupport);
        }
        for (k, &(a, e)) in coeffs.iter().enumerate() {
            if a != 0 && support >> k & 1 == 0 {
                return Err(Error::BadSupport);
            }
            if e > ring.e_max() {
                return Err(Error::DenominatorOverflow);
            }
        }
        Ok(LogDivisor { support, coeffs, p: ring.p() as i64 })
    }

    pub fn zero(ring: &RingRef, support: Mask) -> Result<LogDivisor> {
        LogDivisor::new(ring, support, vec![(0, 0); ring.nvars()])
    }

    /// `(a/p^e)·Σ_{k ∈ support} {x_k = 0}`.
    pub fn uniform(ring: &RingRef, support: Mask, a: i64, e: u32) -> Result<LogDivisor> {
        let n = ring.nvars();
        let coeffs = (0..n).map(|k| if support >> k & 1 == 1 { (a, e) } else { (0, 0) }).collect();
        LogDivisor::new(ring, support, coeffs)
    }

    /// `⌊p^m Δ⌋` as an integer twist.
    pub fn floor_times(&self, m: u32) -> Vec<i64> {
        let q = self.p.pow(m);
        self.coeffs.iter().map(|&(a, e)| (a * q).div_euclid(self.p.pow(e))).collect()
    }

    /// Coefficient-wise `self ≤ other`.
    pub fn le(&self, other: &LogDivisor) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&(a, e), &(b, f))| a * self.p.pow(f) <= b * self.p.pow(e))
    }
}

/// `Ω^i(log E)` on affine space, free on the wedges of `dlog x_j` (`j ∈ E`)
/// and `dx_j` (`j ∉ E`).
pub fn log_forms(ring: &RingRef, log: Mask, i: usize) -> Result<Arc<Forms>> {
    FormSpace::log(ring, log, vec![0; ring.nvars()])?.forms(i)
}

/// All residues `[0, q)^n`, lexicographically.
fn all_classes(n: usize, q: i64) -> Vec<MultiDegree> {
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0i64; n];
            for k in (0..n).rev() {
                v[k] = (idx % q as usize) as i64;
                idx /= q as usize;
            }
            v
        })
        .collect()
}

fn class_index(c: &[i64], q: i64) -> usize {
    c.iter().fold(0usize, |acc, &x| acc * q as usize + x.rem_euclid(q) as usize)
}

fn zero_module(ring: &RingRef) -> Module {
    PresentedModule::free(ring, vec![])
}

fn level_of(space: &FormSpace, i: usize, e: u32, class: &[i64]) -> Result<FormLevel> {
    FormLevel::pushed(&space.forms(i)?, e, &ClassSel::Class(class.to_vec()))
}

/// `im(d)` inside `level` (`i`-forms) as a submodule, together with the
/// source generator behind each of its generators.
fn boundary_part(space: &FormSpace, level: &FormLevel, class: &[i64]) -> Result<(Module, ModuleMap, Vec<usize>)> {
    let i = level.forms.i;
    if i == 0 {
        let (b, inc) = present_submodule(&level.module, vec![])?;
        return Ok((b, inc, vec![]));
    }
    let prev = level_of(space, i - 1, level.e, class)?;
    let d = monomial_map(&prev, level, d_rule(space))?;
    let mut gens = Vec::new();
    let mut sources = Vec::new();
    for (k, v) in d.images().iter().enumerate() {
        if !v.is_empty() {
            gens.push(v.clone());
            sources.push(k);
        }
    }
    let (b, inc) = present_submodule(&level.module, gens)?;
    Ok((b, inc, sources))
}

/// `ker(d)` inside `level`.
fn cycle_part(space: &FormSpace, level: &FormLevel, class: &[i64]) -> Result<(Module, ModuleMap)> {
    let next = level_of(space, level.forms.i + 1, level.e, class)?;
    monomial_map(level, &next, d_rule(space))?.kernel()
}

/// One residue class of one level of a twisted Cartier package.
#[derive(Clone, Debug)]
pub struct HaraClass {
    pub class: MultiDegree,
    /// `F^m_*Ω^i(log E)(⌊p^mΔ⌋)` on this class.
    pub level: FormLevel,
    /// The literal boundaries `im d`.
    pub image_d: Module,
    pub image_d_inc: ModuleMap,
    pub z: Module,
    pub z_inc: ModuleMap,
    pub b: Module,
    pub b_inc: ModuleMap,
    /// `C_m: Z_m → Ω^i(log E)(Δ)`.
    pub c: ModuleMap,
    /// `0 → im d → B_m → B_{m-1} → 0` (the last term on the class `c/p`).
    pub chain: ShortExact,
}

/// Level `m` of a twisted Cartier package.
#[derive(Clone, Debug)]
pub struct HaraLevel {
    pub n_level: u32,
    pub space: FormSpace,
    pub classes: Vec<HaraClass>,
    /// `G_m = F^m_*Ω^i(log E)(p^mΔ)/B_m` on the class of zero.
    pub g: Module,
    pub g_proj: ModuleMap,
    /// `C_m^{-1}: Ω^i(log E)(Δ) → G_m`.
    pub c_inv: ModuleMap,
    /// `0 → B_m → Z_m → Ω^i(log E)(Δ) → 0` on the class of zero.
    pub ses: SesCertificate,
    /// `C_m ∘ C_m^{-1} = id` on `Ω^i(log E)(Δ)`.
    pub split_identity: bool,
}

impl HaraLevel {
    pub fn class(&self, c: &[i64]) -> &HaraClass {
        let q = (self.space.hs.p() as i64).pow(self.n_level);
        &self.classes[class_index(c, q)]
    }

    pub fn zero_class(&self) -> &HaraClass {
        &self.classes[0]
    }

    pub fn holds(&self) -> bool {
        self.ses.holds() && self.split_identity && self.classes.iter().all(|c| c.chain.holds())
    }
}

/// The twisted Cartier operators `C_{m,Δ}` for `m = 1..=n_level`.
#[derive(Clone, Debug)]
pub struct HaraPackage {
    pub log: Mask,
    pub delta: LogDivisor,
    pub i: usize,
    /// `Ω^i(log E)(Δ)`.
    pub omega: FormLevel,
    pub levels: Vec<HaraLevel>,
}

impl HaraPackage {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.holds())
    }
}

pub fn hara_package(ring: &RingRef, log: Mask, delta: &LogDivisor, i: usize, n_level: u32) -> Result<HaraPackage> {
    hara_package_with(ring, log, delta, i, n_level, HARA_DEGREE_TOP)
}

/// As [`hara_package`], certifying degree-wise exactness up to degree `top`.
///
/// `Z_1` and `B_1` are the cycles and boundaries of the twisted complex; for
/// `m ≥ 2`, `Z_m` is the pullback of `Z_{m-1}` along `C` on the cycles and
/// `B_m = ker C_m`.
pub fn hara_package_with(
    ring: &RingRef,
    log: Mask,
    delta: &LogDivisor,
    i: usize,
    n_level: u32,
    top: i64,
) -> Result<HaraPackage> {
    if delta.support & !log != 0 {
        return Err(Error::BadSupport);
    }
    if n_level == 0 || n_level > ring.e_max() {
        return Err(Error::Invalid(format!("iteration level {n_level} outside 1..={}", ring.e_max())));
    }
    let n = ring.nvars();
    let p = ring.p() as i64;
    let base_space = FormSpace::log(ring, log, delta.floor_times(0))?;
    let omega = FormLevel::base(&base_space.forms(i)?);
    let mut levels: Vec<HaraLevel> = Vec::new();
    for m in 1..=n_level {
        let q = p.pow(m);
        let space = FormSpace::log(ring, log, delta.floor_times(m))?;
        let prev = levels.last();
        let classes = all_classes(n, q)
            .into_par_iter()
            .map(|c| hara_class(&space, &omega, prev, i, m, c))
            .collect::<Result<Vec<_>>>()?;
        let zero = &classes[0];
        let (g, g_proj) = quotient(&zero.level.module, zero.b_inc.images())?;
        let raw = monomial_images(&omega, &zero.level, inverse_cartier_rule(q))?;
        let c_inv = ModuleMap::new(omega.module.clone(), g.clone(), raw.clone(), 0)?;
        let z_lifter = Lifter::for_inclusion(&zero.z_inc)?;
        let mut back = Vec::with_capacity(raw.len());
        let mut split_identity = true;
        for v in &raw {
            match z_lifter.lift(v) {
                Some(l) => back.push(zero.c.apply(&l)),
                None => {
                    split_identity = false;
                    back.push(vec![]);
                }
            }
        }
        if split_identity {
            let composite = ModuleMap::new(omega.module.clone(), omega.module.clone(), back, 0)?;
            split_identity = composite.equals(&ModuleMap::identity(&omega.module))?;
        }
        let b_to_z = restrict_map(&ModuleMap::identity(&zero.level.module), &zero.b_inc, &zero.z_inc)?;
        let grid = sequence_grid(&b_to_z, &zero.c, m, top);
        let ses = certify_ses(&b_to_z, &zero.c, &grid)?;
        levels.push(HaraLevel { n_level: m, space, classes, g, g_proj, c_inv, ses, split_identity });
    }
    Ok(HaraPackage { log, delta: delta.clone(), i, omega, levels })
}

fn hara_class(
    space: &FormSpace,
    omega: &FormLevel,
    prev: Option<&HaraLevel>,
    i: usize,
    m: u32,
    c: MultiDegree,
) -> Result<HaraClass> {
    let p = space.hs.p() as i64;
    let q = p.pow(m);
    let ring = space.ring();
    let level = level_of(space, i, m, &c)?;
    let (image_d, image_d_inc, _) = boundary_part(space, &level, &c)?;
    let (k, k_inc) = cycle_part(space, &level, &c)?;
    let divisible = c.iter().all(|x| x % p == 0);
    // the class c/p one level down, when the level-one Cartier map can be nonzero
    let below = match prev {
        Some(pl) if divisible => {
            let cp: MultiDegree = c.iter().map(|x| x / p).collect();
            Some(pl.class(&cp))
        }
        _ => None,
    };
    let step = match below {
        Some(b) => Some(monomial_map(&level, &b.level, cartier_rule(p))?),
        None => None,
    };
    let (z, z_inc) = match (below, &step) {
        (Some(b), Some(cp)) => {
            let (outside, _) = quotient(&b.level.module, b.z_inc.images())?;
            let imgs: Vec<Vector> = k_inc.images().iter().map(|v| cp.apply(v)).collect();
            let to = ModuleMap::new(k.clone(), outside, imgs, 0)?;
            let gens: Vec<Vector> = to.kernel_generators()?.iter().map(|v| k_inc.apply(v)).collect();
            present_submodule(&level.module, gens)?
        }
        _ => (k, k_inc),
    };
    let c_full = monomial_map(&level, omega, cartier_rule(q))?;
    let cmap = c_full.compose(&z_inc)?;
    let b_gens: Vec<Vector> = cmap.kernel_generators()?.iter().map(|v| z_inc.apply(v)).collect();
    let (b, b_inc) = present_submodule(&level.module, b_gens)?;
    let first = restrict_map(&ModuleMap::identity(&level.module), &image_d_inc, &b_inc)?;
    let second = match (below, &step) {
        (Some(bl), Some(cp)) => restrict_map(cp, &b_inc, &bl.b_inc)?,
        _ => ModuleMap::zero(&b, &zero_module(ring), 0),
    };
    let chain = short_exact(&first, &second)?;
    Ok(HaraClass { class: c, level, image_d, image_d_inc, z, z_inc, b, b_inc, c: cmap, chain })
}

/// Commutativity of the inclusion ladder between the packages for `Δ' ≤ Δ`
/// at one level and class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderCheck {
    pub n_level: u32,
    pub class: MultiDegree,
    /// `B' → Z' → Z` equals `B' → B → Z`.
    pub left: bool,
    /// `Z' → Z → Ω(Δ)` equals `Z' → Ω(Δ') → Ω(Δ)`.
    pub right: bool,
}

/// The vertical inclusions for `Δ' ≤ Δ` restricted to `B`, `Z` and `Ω`, and
/// the commutativity of both squares, for every level and class.
pub fn hara_functoriality(small: &HaraPackage, big: &HaraPackage) -> Result<Vec<LadderCheck>> {
    if small.log != big.log || small.i != big.i || small.levels.len() != big.levels.len() {
        return Err(Error::Invalid("packages are not comparable".into()));
    }
    if !small.delta.le(&big.delta) {
        return Err(Error::Invalid("functoriality needs Δ' ≤ Δ".into()));
    }
    let iota0 = monomial_map(&small.omega, &big.omega, identity_rule)?;
    let mut out = Vec::new();
    for (ls, lb) in small.levels.iter().zip(&big.levels) {
        let checks = ls
            .classes
            .par_iter()
            .zip(lb.classes.par_iter())
            .map(|(cs, cb)| {
                let iota = monomial_map(&cs.level, &cb.level, identity_rule)?;
                let zv = restrict_map(&iota, &cs.z_inc, &cb.z_inc)?;
                let bv = restrict_map(&iota, &cs.b_inc, &cb.b_inc)?;
                let bz_s = restrict_map(&ModuleMap::identity(&cs.level.module), &cs.b_inc, &cs.z_inc)?;
                let bz_b = restrict_map(&ModuleMap::identity(&cb.level.module), &cb.b_inc, &cb.z_inc)?;
                let left = zv.compose(&bz_s)?.equals(&bz_b.compose(&bv)?)?;
                let right = cb.c.compose(&zv)?.equals(&iota0.compose(&cs.c)?)?;
                Ok(LadderCheck { n_level: ls.n_level, class: cs.class.clone(), left, right })
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(checks);
    }
    Ok(out)
}

/// One residue class of the duality statements for `i`-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityClass {
    pub class: MultiDegree,
    /// `F_*Ω^{n-i}(log E)(-E) → Hom(F_*Ω^i(log E), ω)` is an isomorphism.
    pub forms_iso: bool,
    /// `BΩ^{n-i+1}(log E)(-E) → Hom(BΩ^i(log E), ω)` is an isomorphism.
    pub boundaries_iso: bool,
    /// `GΩ^{n-i}(log E)(-E) → Hom(ZΩ^i(log E), ω)` is an isomorphism.
    pub cycles_iso: bool,
    /// Graded dimensions of both sides agree up to the degree bound, per item.
    pub dims_agree: [bool; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub log: Mask,
    pub i: usize,
    pub classes: Vec<DualityClass>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.classes
            .iter()
            .all(|c| c.forms_iso && c.boundaries_iso && c.cycles_iso && c.dims_agree.iter().all(|&b| b))
    }
}

/// `C(η ∧ ξ)` for `η`, `ξ` of complementary degree and opposite classes.
fn trace_pairing(eta: &[LogTerm], xi: &[LogTerm], p: u32, omega: &FormLevel) -> Result<Vector> {
    let mut terms = Vec::new();
    let pk = p as i64;
    for (b1, j1, c1) in eta {
        for (b2, j2, c2) in xi {
            let Some((neg, mask)) = wedge_masks(*j1, *j2) else { continue };
            let b: Vec<i64> = b1.iter().zip(b2).map(|(a, b)| a + b).collect();
            let c = field::mul(*c1, *c2, p);
            let c = if neg { field::neg(c, p) } else { c };
            for (bb, jj, k) in cartier_rule(pk)(&b, mask) {
                terms.push((bb, jj, field::mul(k, c, p)));
            }
        }
    }
    omega.from_underlying(&terms)
}

/// The element of `Hom(M, ω)` sending the generators of `M` to `images`.
fn hom_element(h: &HomModule, lifter: &Lifter, images: &[Vector]) -> Result<Vector> {
    let b = h.target_rank as u32;
    let mut v: Vector = Vec::new();
    for (k, img) in images.iter().enumerate() {
        for t in img {
            v.push(Term { c: k as u32 * b + t.c, ..*t });
        }
    }
    let v = h.ambient.order().normalize(v);
    lifter.lift(&v).ok_or_else(|| Error::IllDefined("pairing does not define a homomorphism".into()))
}

/// The pairing map `N → Hom(M, ω)`, where generator `j` of `N` pairs through
/// the form `partners[j]` and `M` is generated by `m_gens` inside `m_level`.
fn pairing_map(
    n_mod: &Module,
    partners: &[Vec<LogTerm>],
    m_mod: &Module,
    m_level: &FormLevel,
    m_gens: &[Vector],
    omega: &FormLevel,
) -> Result<(HomModule, ModuleMap)> {
    let p = omega.space().hs.p();
    let h = hom_module(m_mod, &omega.module)?;
    let lifter = Lifter::for_inclusion(&h.inclusion)?;
    let xis: Vec<Vec<LogTerm>> = m_gens.iter().map(|g| m_level.underlying(g)).collect();
    let mut images = Vec::with_capacity(partners.len());
    for (j, eta) in partners.iter().enumerate() {
        let imgs = xis.iter().map(|xi| trace_pairing(eta, xi, p, omega)).collect::<Result<Vec<_>>>()?;
        ModuleMap::new(m_mod.clone(), omega.module.clone(), imgs.clone(), n_mod.degrees()[j])?;
        images.push(hom_element(&h, &lifter, &imgs)?);
    }
    let phi = ModuleMap::new(n_mod.clone(), h.module.clone(), images, 0)?;
    Ok((h, phi))
}

fn is_iso(phi: &ModuleMap) -> Result<bool> {
    Ok(phi.is_injective()? && phi.is_surjective()?)
}

fn dims_agree(a: &Module, b: &Module, step: i64, top: i64) -> Result<bool> {
    for t in degree_grid(&[a, b], step, top) {
        if a.graded_piece_dim(t)? != b.graded_piece_dim(t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three duality isomorphisms for `i`-forms on affine space with log
/// poles along `log`, one residue class at a time.
pub fn duality_check(ring: &RingRef, log: Mask, i: usize) -> Result<DualityReport> {
    let n = ring.nvars();
    if i > n {
        return Err(Error::Invalid(format!("form degree {i} exceeds {n}")));
    }
    let p = ring.p() as i64;
    let scale = ring.scale();
    let step = scale / p;
    let top = DUALITY_DEGREE_TOP * scale;
    let sp = FormSpace::log(ring, log, vec![0; n])?;
    let minus_e: Vec<i64> = (0..n).map(|k| -i64::from(log >> k & 1 == 1)).collect();
    let spm = FormSpace::log(ring, log, minus_e)?;
    let omega = FormLevel::base(&spm.forms(n)?);
    let classes = all_classes(n, p)
        .into_par_iter()
        .map(|c| {
            let neg: MultiDegree = c.iter().map(|x| (-x).rem_euclid(p)).collect();
            // item 1
            let m1 = level_of(&sp, i, 1, &c)?;
            let n1 = level_of(&spm, n - i, 1, &neg)?;
            let m1_gens: Vec<Vector> = (0..m1.module.rank()).map(unit).collect();
            let partners1: Vec<Vec<LogTerm>> = (0..n1.module.rank()).map(|j| n1.underlying(&unit(j))).collect();
            let (h1, phi1) = pairing_map(&n1.module, &partners1, &m1.module, &m1, &m1_gens, &omega)?;
            let forms_iso = is_iso(&phi1)?;
            let d1 = dims_agree(&n1.module, &h1.module, step, top)?;
            // item 2: Hom(B^i) against B^{n-i+1}(-E), paired through d-preimages
            let (boundaries_iso, d2) = if i == 0 {
                (true, true)
            } else {
                let (bm, bm_inc, _) = boundary_part(&sp, &m1, &c)?;
                let n2_level = level_of(&spm, n - i + 1, 1, &neg)?;
                let (bn, _, sources) = boundary_part(&spm, &n2_level, &neg)?;
                let partners2: Vec<Vec<LogTerm>> = sources.iter().map(|&k| n1.underlying(&unit(k))).collect();
                let (h2, phi2) = pairing_map(&bn, &partners2, &bm, &m1, bm_inc.images(), &omega)?;
                (is_iso(&phi2)?, dims_agree(&bn, &h2.module, step, top)?)
            };
            // item 3: Hom(Z^i) against G^{n-i}(-E)
            let (zm, zm_inc) = cycle_part(&sp, &m1, &c)?;
            let (_, bn_inc, _) = boundary_part(&spm, &n1, &neg)?;
            let (g, _) = quotient(&n1.module, bn_inc.images())?;
            let (h3, phi3) = pairing_map(&g, &partners1, &zm, &m1, zm_inc.images(), &omega)?;
            let cycles_iso = is_iso(&phi3)?;
            let d3 = dims_agree(&g, &h3.module, step, top)?;
            Ok(DualityClass { class: c, forms_iso, boundaries_iso, cycles_iso, dims_agree: [d1, d2, d3] })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualityReport { log, i, classes })
}

/// The residue along `x_k = 0`: `x^b dlog x_J ↦ ±x^b|_{x_k=0} dlog x_{J∖k}`
/// for `k ∈ J`, zero otherwise.
pub fn residue_rule(k: usize, p: u32) -> impl Fn(&[i64], Mask) -> Vec<LogTerm> {
    move |b: &[i64], j: Mask| {
        if j >> k & 1 == 0 || b[k] != 0 {
            return vec![];
        }
        let rest = j & !(1 << k);
        let c = if wedge_sign(k, rest) { p - 1 } else { 1 };
        vec![(b.to_vec(), rest, c)]
    }
}

/// Which residue sequence: forms, boundaries, cycles or `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueKind {
    Forms,
    Boundaries,
    Cycles,
    Quotient,
}

impl ResidueKind {
    pub fn from_index(which: u8) -> Result<ResidueKind> {
        match which {
            1 => Ok(ResidueKind::Forms),
            2 => Ok(ResidueKind::Boundaries),
            3 => Ok(ResidueKind::Cycles),
            4 => Ok(ResidueKind::Quotient),
            _ => Err(Error::Invalid(format!("residue sequence {which} is not one of 1..=4"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResidueReport {
    pub kind: ResidueKind,
    pub log: Mask,
    pub component: usize,
    pub i: usize,
    /// One certificate per residue class (a single unpushed one for forms).
    pub classes: Vec<(MultiDegree, SesCertificate)>,
}

impl ResidueReport {
    pub fn holds(&self) -> bool {
        self.classes.iter().all(|(_, c)| c.holds())
    }
}

pub fn residue_sequence(ring: &RingRef, log: Mask, component: usize, i: usize, which: u8) -> Result<ResidueReport> {
    residue_sequence_with(ring, log, component, i, which, RESIDUE_DEGREE_TOP)
}

/// `0 → X(log E−D) → X(log E) → X_D(log (E−D)|_D) → 0` for `X` one of
/// `Ω^i`, `BΩ^i`, `ZΩ^i`, `GΩ^i`, with `D = {x_component = 0}`.
pub fn residue_sequence_with(
    ring: &RingRef,
    log: Mask,
    component: usize,
    i: usize,
    which: u8,
    top: i64,
) -> Result<ResidueReport> {
    let kind = ResidueKind::from_index(which)?;
    let n = ring.nvars();
    if component >= n || log >> component & 1 == 0 {
        return Err(Error::BadSupport);
    }
    if i > n {
        return Err(Error::Invalid(format!("form degree {i} exceeds {n}")));
    }
    let p = ring.p();
    let big = FormSpace::log(ring, log, vec![0; n])?;
    let small = FormSpace::log(ring, log & !(1 << component), vec![0; n])?;
    let dsp = big.restrict_to_hyperplane(component)?;
    let (e, classes) = match kind {
        ResidueKind::Forms => (0, vec![vec![0; n]]),
        _ => (1, all_classes(n, p as i64)),
    };
    let certs = classes
        .into_par_iter()
        .map(|c| {
            let ls = level_of(&small, i, e, &c)?;
            let lb = level_of(&big, i, e, &c)?;
            let ld = if i == 0 { None } else { Some(level_of(&dsp, i - 1, e, &c)?) };
            let a = monomial_map(&ls, &lb, identity_rule)?;
            let r = match &ld {
                Some(ld) => monomial_map(&lb, ld, residue_rule(component, p))?,
                None => ModuleMap::zero(&lb.module, &zero_module(ring), 0),
            };
            let (a2, r2) = match kind {
                ResidueKind::Forms => (a, r),
                ResidueKind::Boundaries | ResidueKind::Cycles => {
                    let part = |sp: &FormSpace, l: &FormLevel| -> Result<ModuleMap> {
                        if kind == ResidueKind::Boundaries {
                            Ok(boundary_part(sp, l, &c)?.1)
                        } else {
                            Ok(cycle_part(sp, l, &c)?.1)
                        }
                    };
                    let s_inc = part(&small, &ls)?;
                    let b_inc = part(&big, &lb)?;
                    let a2 = restrict_map(&a, &s_inc, &b_inc)?;
                    let r2 = match &ld {
                        Some(ld) => restrict_map(&r, &b_inc, &part(&dsp, ld)?)?,
                        None => ModuleMap::zero(&b_inc.source, &zero_module(ring), 0),
                    };
                    (a2, r2)
                }
                ResidueKind::Quotient => {
                    let g = |sp: &FormSpace, l: &FormLevel| -> Result<Module> {
                        Ok(quotient(&l.module, boundary_part(sp, l, &c)?.1.images())?.0)
                    };
                    let gs = g(&small, &ls)?;
                    let gb = g(&big, &lb)?;
                    let a2 = ModuleMap::new(gs, gb.clone(), a.images().to_vec(), 0)?;
                    let r2 = match &ld {
                        Some(ld) => ModuleMap::new(gb, g(&dsp, ld)?, r.images().to_vec(), 0)?,
                        None => ModuleMap::zero(&gb, &zero_module(ring), 0),
                    };
                    (a2, r2)
                }
            };
            let grid = sequence_grid(&a2, &r2, e, top);
            Ok((c, certify_ses(&a2, &r2, &grid)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueReport { kind, log, component, i, classes: certs })
}
