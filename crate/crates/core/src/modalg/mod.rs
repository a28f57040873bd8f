//! Finitely presented graded modules over `S = 𝔽_p[x_1..x_n]`.
//!
//! A module is a free module `F` with scaled generator degrees modulo a
//! homogeneous relation submodule `U`; elements are vectors of `F`. Maps are
//! given by the images of the generators. Degrees are always in the session's
//! scaled units (`p^{e_max}` times the natural weighted degree).

pub mod hom;
pub mod linalg;
pub mod resolution;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use crate::arith::{field, Monomial, Poly, RingRef};
use crate::error::{Error, Result};
use crate::groebner::{monomials_of_degree, syzygies, Gb, GbOptions, ModOrder, Term, Vector, DEFAULT_DEGREE_CAP};
pub use hom::{double_dual, hom_module, reflexivize, torsion_by_saturation, torsion_submodule, HomModule, Reflexive};
pub use linalg::{solve_sparse, DenseMatrix, SparseRow};
pub use resolution::{
    comparison_maps, ext_cokernel, ext_cokernel_with, ext_group, ext_induced, free_resolution, ExtCokernel, Resolution,
};

pub type Order = Arc<ModOrder>;
pub type Module = Arc<PresentedModule>;

pub fn free_order(ring: &RingRef, degrees: Vec<i64>) -> Order {
    Arc::new(ModOrder::new(ring, degrees))
}

/// `Σ_t k_t x^{m_t} images[c_t]` normalized in `order`.
pub fn combine(order: &ModOrder, images: &[Vector], v: &[Term]) -> Vector {
    let p = order.p();
    let mut terms = Vec::new();
    for t in v {
        for s in &images[t.c as usize] {
            terms.push(Term { m: s.m.mul(&t.m), c: s.c, k: field::mul(s.k, t.k, p) });
        }
    }
    order.normalize(terms)
}

/// Multiply a vector by a polynomial.
pub fn poly_times(order: &ModOrder, f: &Poly, v: &[Term]) -> Vector {
    let p = order.p();
    let mut terms = Vec::with_capacity(f.len() * v.len());
    for &(m, k) in f.terms() {
        for t in v {
            terms.push(Term { m: t.m.mul(&m), c: t.c, k: field::mul(t.k, k, p) });
        }
    }
    order.normalize(terms)
}

pub fn unit(c: usize) -> Vector {
    vec![Term { m: Monomial::ONE, c: c as u32, k: 1 }]
}

/// A polynomial placed in component `c`.
pub fn poly_vector(order: &ModOrder, f: &Poly, c: usize) -> Vector {
    order.normalize(f.terms().iter().map(|&(m, k)| Term { m, c: c as u32, k }).collect())
}

/// Re-index components through `map` and normalize in `order`.
pub fn reindex(order: &ModOrder, v: &[Term], map: impl Fn(u32) -> Option<u32>) -> Vector {
    order.normalize(v.iter().filter_map(|t| map(t.c).map(|c| Term { c, ..*t })).collect())
}

fn gb_of(order: &Order, gens: &[Vector]) -> Result<Gb> {
    Gb::compute(order.clone(), gens, GbOptions { degree_cap: DEFAULT_DEGREE_CAP, ..Default::default() })
}

fn tracked_gb_of(order: &Order, gens: &[Vector]) -> Result<Gb> {
    Gb::compute(order.clone(), gens, GbOptions { degree_cap: DEFAULT_DEGREE_CAP, track: true, ..Default::default() })
}

/// Reduce `v` against exact-leading-term echelon rows; rows stay monic with
/// distinct leading terms.
fn echelon_insert(order: &ModOrder, rows: &mut Vec<Vector>, index: &mut HashMap<(Monomial, u32), usize>, v: Vector) -> bool {
    let p = order.p();
    let mut v = v;
    let mut i = 0;
    while i < v.len() {
        let t = v[i];
        if let Some(&r) = index.get(&(t.m, t.c)) {
            v = order.add_mul(&v, &rows[r], field::neg(t.k, p), &Monomial::ONE);
        } else {
            i += 1;
        }
    }
    if v.is_empty() {
        return false;
    }
    let v = order.monic(&v);
    index.insert((v[0].m, v[0].c), rows.len());
    rows.push(v);
    true
}

/// A minimal homogeneous generating set of `⟨gens⟩ + U` modulo `U`.
pub fn minimal_generators(order: &Order, rels: &[Vector], gens: Vec<Vector>) -> Result<Vec<Vector>> {
    let mut gens: Vec<Vector> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    gens.sort_by_key(|g| order.degree(g).unwrap());
    let mut kept: Vec<Vector> = Vec::new();
    let mut i = 0;
    while i < gens.len() {
        let d = order.degree(&gens[i]).unwrap();
        let mut j = i;
        while j < gens.len() && order.degree(&gens[j]).unwrap() == d {
            j += 1;
        }
        let mut basis: Vec<Vector> = rels.to_vec();
        basis.extend(kept.iter().cloned());
        let gb = if basis.is_empty() { None } else { Some(gb_of(order, &basis)?) };
        let mut rows = Vec::new();
        let mut index = HashMap::new();
        for g in &gens[i..j] {
            let nf = match &gb {
                Some(gb) => gb.reduce(g.clone()),
                None => g.clone(),
            };
            if echelon_insert(order, &mut rows, &mut index, nf) {
                kept.push(g.clone());
            }
        }
        i = j;
    }
    Ok(kept)
}

/// A finitely presented graded module `F / U`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    order: Order,
    relations: Vec<Vector>,
    pub label: Option<String>,
    gb: OnceLock<Gb>,
}

impl PresentedModule {
    pub fn new(ring: &RingRef, degrees: Vec<i64>, relations: Vec<Vector>) -> Result<Module> {
        Self::from_order(free_order(ring, degrees), relations)
    }

    pub fn from_order(order: Order, relations: Vec<Vector>) -> Result<Module> {
        let relations: Vec<Vector> =
            relations.into_iter().map(|r| order.normalize(r)).filter(|r| !r.is_empty()).collect();
        for r in &relations {
            if r.iter().any(|t| t.c as usize >= order.rank()) {
                return Err(Error::Invalid("relation outside the generator range".into()));
            }
            if !order.is_homogeneous(r) {
                return Err(Error::NotHomogeneous("module relation is not homogeneous".into()));
            }
        }
        Ok(Arc::new(PresentedModule { order, relations, label: None, gb: OnceLock::new() }))
    }

    pub fn free(ring: &RingRef, degrees: Vec<i64>) -> Module {
        Arc::new(PresentedModule { order: free_order(ring, degrees), relations: vec![], label: None, gb: OnceLock::new() })
    }

    pub fn with_label(self: &Module, label: &str) -> Module {
        let mut m = (**self).clone();
        m.label = Some(label.to_string());
        Arc::new(m)
    }

    pub fn ring(&self) -> &RingRef {
        &self.order.ring
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn degrees(&self) -> &[i64] {
        &self.order.gen_deg
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    /// Gröbner basis of the relation submodule, computed once.
    pub fn gb(&self) -> Result<&Gb> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = gb_of(&self.order, &self.relations)?;
        let _ = self.gb.set(g);
        Ok(self.gb.get().unwrap())
    }

    pub fn reduce(&self, v: Vector) -> Result<Vector> {
        Ok(self.gb()?.reduce(v))
    }

    /// Whether `v` is zero in the module.
    pub fn is_zero_element(&self, v: &[Term]) -> Result<bool> {
        Ok(self.gb()?.contains(v))
    }

    /// Whether the module itself is zero.
    pub fn is_zero(&self) -> Result<bool> {
        let gb = self.gb()?;
        Ok((0..self.rank()).all(|c| gb.contains(&unit(c))))
    }

    /// Standard terms `(monomial, generator)` spanning the degree-`t` piece.
    pub fn piece_basis(&self, t: i64) -> Result<Vec<(Monomial, u32)>> {
        let gb = self.gb()?;
        let lts: Vec<(Monomial, u32)> = gb.leading().collect();
        let w = self.ring().var_degrees();
        let mut out = Vec::new();
        for (k, &d) in self.degrees().iter().enumerate() {
            if t < d {
                continue;
            }
            for m in monomials_of_degree(&w, t - d) {
                if !lts.iter().any(|(l, c)| *c == k as u32 && l.divides(&m)) {
                    out.push((m, k as u32));
                }
            }
        }
        out.sort_by(|a, b| self.order.cmp_mc(&b.0, b.1, &a.0, a.1));
        Ok(out)
    }

    pub fn graded_piece_dim(&self, t: i64) -> Result<usize> {
        Ok(self.piece_basis(t)?.len())
    }

    /// Rank over the fraction field of `S`: with a position-over-term order the
    /// number of distinct leading components of a relation basis is the rank
    /// of the relation matrix.
    pub fn generic_rank(&self) -> Result<usize> {
        let r = self.rank();
        let o = Arc::new((*self.order).clone().with_blocks((0..r as u32).collect()));
        let gb = gb_of(&o, &self.relations)?;
        let mut comps: Vec<u32> = gb.leading().map(|(_, c)| c).collect();
        comps.sort();
        comps.dedup();
        Ok(r - comps.len())
    }

    /// Coordinates of `v` (assumed homogeneous of degree `t`) in `piece_basis(t)`.
    pub fn coordinates(&self, basis: &[(Monomial, u32)], v: Vector) -> Result<Vec<u32>> {
        let nf = self.reduce(v)?;
        let index: HashMap<(Monomial, u32), usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut out = vec![0; basis.len()];
        for t in nf {
            let i = *index.get(&(t.m, t.c)).ok_or_else(|| Error::Invalid("element outside the graded piece".into()))?;
            out[i] = t.k;
        }
        Ok(out)
    }

    /// Drop generators killed by relations with a unit entry. Returns the
    /// trimmed module with the isomorphisms to and from it.
    pub fn trim(self: &Module) -> Result<(Module, ModuleMap, ModuleMap)> {
        let p = self.ring().p();
        let r = self.rank();
        let order = &self.order;
        let mut rels: Vec<Vector> = self.relations.clone();
        let mut subst: Vec<Option<Vector>> = vec![None; r];
        loop {
            let mut found = None;
            'search: for (ri, rel) in rels.iter().enumerate() {
                for t in rel {
                    if t.m == Monomial::ONE {
                        found = Some((ri, t.c, t.k));
                        break 'search;
                    }
                }
            }
            let Some((ri, c, k)) = found else { break };
            let u = rels.swap_remove(ri);
            // e_c = -(1/k)(u - k e_c)
            let inv = field::inv(k, p);
            let rest: Vector = u.iter().filter(|t| t.c != c).copied().collect();
            let expr = order.scale(&rest, field::neg(inv, p));
            let eliminate = |v: &Vector| -> Vector {
                let mut terms: Vec<Term> = Vec::new();
                for t in v {
                    if t.c == c {
                        for s in &expr {
                            terms.push(Term { m: s.m.mul(&t.m), c: s.c, k: field::mul(s.k, t.k, p) });
                        }
                    } else {
                        terms.push(*t);
                    }
                }
                order.normalize(terms)
            };
            rels = rels.iter().map(&eliminate).filter(|v| !v.is_empty()).collect();
            for s in subst.iter_mut().flatten() {
                *s = eliminate(s);
            }
            subst[c as usize] = Some(expr);
        }
        let kept: Vec<usize> = (0..r).filter(|&c| subst[c].is_none()).collect();
        if kept.len() == r {
            let id = ModuleMap::identity(self);
            return Ok((self.clone(), id.clone(), id));
        }
        let mut newpos = vec![u32::MAX; r];
        for (i, &c) in kept.iter().enumerate() {
            newpos[c] = i as u32;
        }
        let new_order = Arc::new(
            ModOrder::new(self.ring(), kept.iter().map(|&c| self.degrees()[c]).collect())
                .with_kind(order.kind, order.prec.clone()),
        );
        let remap = |v: &Vector| reindex(&new_order, v, |c| Some(newpos[c as usize]));
        let new_rels: Vec<Vector> = rels.iter().map(remap).collect();
        let trimmed = PresentedModule::from_order(new_order.clone(), new_rels)?;
        let to_images: Vec<Vector> = (0..r)
            .map(|c| match &subst[c] {
                Some(e) => remap(e),
                None => unit(newpos[c] as usize),
            })
            .collect();
        let from_images: Vec<Vector> = kept.iter().map(|&c| unit(c)).collect();
        let to = ModuleMap::new_unchecked(self.clone(), trimmed.clone(), to_images, 0);
        let from = ModuleMap::new_unchecked(trimmed.clone(), self.clone(), from_images, 0);
        Ok((trimmed, to, from))
    }

    /// Direct sum of modules.
    pub fn direct_sum(parts: &[Module]) -> Result<Module> {
        let ring = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?.ring().clone();
        let mut degrees = Vec::new();
        let mut rels = Vec::new();
        let mut offset = 0u32;
        for m in parts {
            degrees.extend_from_slice(m.degrees());
            for r in m.relations() {
                rels.push(r.iter().map(|t| Term { c: t.c + offset, ..*t }).collect());
            }
            offset += m.rank() as u32;
        }
        PresentedModule::new(&ring, degrees, rels)
    }
}

/// Present the submodule of `ambient` generated by `gens`, with its inclusion.
pub fn present_submodule(ambient: &Module, gens: Vec<Vector>) -> Result<(Module, ModuleMap)> {
    let ring = ambient.ring().clone();
    let order = ambient.order().clone();
    let gens: Vec<Vector> = gens.into_iter().map(|g| order.normalize(g)).filter(|g| !g.is_empty()).collect();
    let m = gens.len();
    let degrees: Vec<i64> = gens.iter().map(|g| order.degree(g).unwrap()).collect();
    let sub_order = Arc::new(ModOrder::new(&ring, degrees.clone()).with_kind(order.kind, order.prec.clone()));
    let rels = if m == 0 {
        vec![]
    } else {
        let mut cols = gens.clone();
        cols.extend(ambient.relations().iter().cloned());
        let mut col_deg = degrees.clone();
        col_deg.extend(ambient.relations().iter().map(|r| order.degree(r).unwrap()));
        let syz = syzygies(&order, &cols, &col_deg, DEFAULT_DEGREE_CAP)?;
        let projected: Vec<Vector> =
            syz.iter().map(|s| reindex(&sub_order, s, |c| ((c as usize) < m).then_some(c))).collect();
        minimal_generators(&sub_order, &[], projected)?
    };
    let sub = PresentedModule::from_order(sub_order, rels)?;
    let inc = ModuleMap::new_unchecked(sub.clone(), ambient.clone(), gens, 0);
    Ok((sub, inc))
}

/// A degree-`shift` homogeneous map given by the images of the generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    images: Vec<Vector>,
    pub shift: i64,
}

impl ModuleMap {
    /// Build a map, certifying homogeneity and well-definedness.
    pub fn new(source: Module, target: Module, images: Vec<Vector>, shift: i64) -> Result<ModuleMap> {
        if images.len() != source.rank() {
            return Err(Error::Invalid("one image per source generator is required".into()));
        }
        let map = Self::new_unchecked(source, target, images, shift);
        map.certify()?;
        Ok(map)
    }

    pub fn new_unchecked(source: Module, target: Module, images: Vec<Vector>, shift: i64) -> ModuleMap {
        let images = images.into_iter().map(|v| target.order().normalize(v)).collect();
        ModuleMap { source, target, images, shift }
    }

    /// Check homogeneity of the images and that relations map to zero.
    pub fn certify(&self) -> Result<()> {
        let to = self.target.order();
        for (k, v) in self.images.iter().enumerate() {
            if v.iter().any(|t| t.c as usize >= self.target.rank()) {
                return Err(Error::IllDefined("image outside the target generators".into()));
            }
            if !v.is_empty()
                && (!to.is_homogeneous(v) || to.degree(v).unwrap() != self.source.degrees()[k] + self.shift) {
                    return Err(Error::IllDefined(format!("image of generator {k} has the wrong degree")));
                }
        }
        for (i, r) in self.source.relations().iter().enumerate() {
            if !self.target.is_zero_element(&self.apply(r))? {
                return Err(Error::IllDefined(format!("relation {i} does not map into the target relations")));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Module) -> ModuleMap {
        ModuleMap { source: m.clone(), target: m.clone(), images: (0..m.rank()).map(unit).collect(), shift: 0 }
    }

    pub fn zero(source: &Module, target: &Module, shift: i64) -> ModuleMap {
        ModuleMap { source: source.clone(), target: target.clone(), images: vec![vec![]; source.rank()], shift }
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    /// Image of a source vector (not reduced).
    pub fn apply(&self, v: &[Term]) -> Vector {
        combine(self.target.order(), &self.images, v)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ModuleMap) -> Result<ModuleMap> {
        if !Arc::ptr_eq(&g.target, &self.source) && g.target.degrees() != self.source.degrees() {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        let images = g.images.iter().map(|v| self.apply(v)).collect();
        Ok(ModuleMap::new_unchecked(g.source.clone(), self.target.clone(), images, g.shift + self.shift))
    }

    /// Equality modulo the target relations.
    pub fn equals(&self, other: &ModuleMap) -> Result<bool> {
        if self.images.len() != other.images.len() {
            return Ok(false);
        }
        let to = self.target.order();
        for (a, b) in self.images.iter().zip(&other.images) {
            if !self.target.is_zero_element(&to.sub(a, b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> Result<bool> {
        for v in &self.images {
            if !self.target.is_zero_element(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators of the preimage of the target relations, as source vectors.
    fn preimage_generators(&self) -> Result<Vec<Vector>> {
        let to = self.target.order();
        let so = self.source.order();
        let m = self.source.rank();
        let mut cols = self.images.clone();
        cols.extend(self.target.relations().iter().cloned());
        let mut col_deg: Vec<i64> = self.source.degrees().iter().map(|d| d + self.shift).collect();
        col_deg.extend(self.target.relations().iter().map(|r| to.degree(r).unwrap()));
        let syz = syzygies(to, &cols, &col_deg, DEFAULT_DEGREE_CAP)?;
        Ok(syz.iter().map(|s| reindex(so, s, |c| ((c as usize) < m).then_some(c))).filter(|v| !v.is_empty()).collect())
    }

    /// Generators (source vectors) of the kernel, minimal modulo source relations.
    pub fn kernel_generators(&self) -> Result<Vec<Vector>> {
        let gens = self.preimage_generators()?;
        minimal_generators(self.source.order(), self.source.relations(), gens)
    }

    pub fn kernel(&self) -> Result<(Module, ModuleMap)> {
        present_submodule(&self.source, self.kernel_generators()?)
    }

    pub fn image(&self) -> Result<(Module, ModuleMap)> {
        let gens = minimal_generators(self.target.order(), self.target.relations(), self.images.clone())?;
        present_submodule(&self.target, gens)
    }

    pub fn cokernel(&self) -> Result<(Module, ModuleMap)> {
        let mut rels = self.target.relations().to_vec();
        rels.extend(self.images.iter().filter(|v| !v.is_empty()).cloned());
        let coker = PresentedModule::from_order(self.target.order().clone(), rels)?;
        let proj = ModuleMap::new_unchecked(self.target.clone(), coker.clone(), (0..self.target.rank()).map(unit).collect(), 0);
        Ok((coker, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel_generators()?.is_empty())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let (coker, _) = self.cokernel()?;
        coker.is_zero()
    }

    /// The inverse of an isomorphism.
    pub fn invert_iso(&self) -> Result<ModuleMap> {
        if !self.is_injective()? {
            return Err(Error::NotIso("map has a nonzero kernel".into()));
        }
        if !self.is_surjective()? {
            return Err(Error::NotIso("map is not surjective".into()));
        }
        let to = self.target.order();
        let m = self.source.rank();
        let mut cols = self.images.clone();
        cols.extend(self.target.relations().iter().cloned());
        let gb = tracked_gb_of(to, &cols)?;
        let so = self.source.order();
        let mut inv = Vec::with_capacity(self.target.rank());
        for b in 0..self.target.rank() {
            let cof = gb.lift(unit(b)).ok_or_else(|| Error::NotIso("generator not hit".into()))?;
            inv.push(reindex(so, &cof, |c| ((c as usize) < m).then_some(c)));
        }
        Ok(ModuleMap::new_unchecked(self.target.clone(), self.source.clone(), inv, -self.shift))
    }

    /// Matrix of the map between the degree-`t` and degree-`t+shift` pieces.
    pub fn matrix_in_degree(&self, t: i64) -> Result<DenseMatrix> {
        let sb = self.source.piece_basis(t)?;
        let tb = self.target.piece_basis(t + self.shift)?;
        let p = self.source.ring().p();
        let mut cols = Vec::with_capacity(sb.len());
        for &(m, k) in &sb {
            let v = self.apply(&[Term { m, c: k, k: 1 }]);
            cols.push(self.target.coordinates(&tb, v)?);
        }
        Ok(DenseMatrix::from_columns(p, tb.len(), &cols))
    }
}

/// Exactness data of `A →a→ B →b→ C` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeExactness {
    pub t: i64,
    pub dims: [usize; 3],
    pub ranks: [usize; 2],
}

impl DegreeExactness {
    pub fn exact_middle(&self) -> bool {
        self.ranks[0] + self.ranks[1] == self.dims[1]
    }

    pub fn short_exact(&self) -> bool {
        self.exact_middle() && self.ranks[0] == self.dims[0] && self.ranks[1] == self.dims[2]
    }
}

/// Ranks and dimensions of a two-map sequence in degree `t`.
pub fn sequence_in_degree(a: &ModuleMap, b: &ModuleMap, t: i64) -> Result<DegreeExactness> {
    let ma = a.matrix_in_degree(t)?;
    let mb = b.matrix_in_degree(t + a.shift)?;
    Ok(DegreeExactness {
        t,
        dims: [ma.cols, ma.rows, mb.rows],
        ranks: [ma.rank(), mb.rank()],
    })
}

/// A degree-preserving map `source → target` with prescribed images on some
/// generators, found by linear algebra on graded pieces.
pub fn find_degree_zero_map(source: &Module, target: &Module, fixed: &[(usize, Vector)]) -> Result<Option<ModuleMap>> {
    let p = source.ring().p();
    let to = target.order().clone();
    let fixed_map: HashMap<usize, Vector> = fixed.iter().cloned().collect();
    // unknown blocks: for each free generator, a basis of the target piece
    let mut blocks: Vec<(usize, Vec<(Monomial, u32)>)> = Vec::new();
    let mut offset = Vec::with_capacity(source.rank());
    let mut nunknowns = 0;
    let mut piece_cache: HashMap<i64, Vec<(Monomial, u32)>> = HashMap::new();
    for (k, &d) in source.degrees().iter().enumerate() {
        offset.push(nunknowns);
        if fixed_map.contains_key(&k) {
            continue;
        }
        let basis = match piece_cache.get(&d) {
            Some(b) => b.clone(),
            None => {
                let b = target.piece_basis(d)?;
                piece_cache.insert(d, b.clone());
                b
            }
        };
        nunknowns += basis.len();
        blocks.push((k, basis));
    }
    let block_of: HashMap<usize, usize> = blocks.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let mut equations: Vec<(SparseRow, u32)> = Vec::new();
    for rel in source.relations() {
        let d = source.order().degree(rel).unwrap();
        let tb = match piece_cache.get(&d) {
            Some(b) => b.clone(),
            None => {
                let b = target.piece_basis(d)?;
                piece_cache.insert(d, b.clone());
                b
            }
        };
        if tb.is_empty() {
            continue;
        }
        // one sparse equation per coordinate of the target piece
        let mut rows: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); tb.len()];
        let mut constant = vec![0u32; tb.len()];
        for t in rel {
            let k = t.c as usize;
            if let Some(img) = fixed_map.get(&k) {
                let v = combine(&to, std::slice::from_ref(img), &[Term { c: 0, ..*t }]);
                let c = target.coordinates(&tb, v)?;
                for (a, b) in constant.iter_mut().zip(c) {
                    *a = field::add(*a, b, p);
                }
            } else {
                let (_, basis) = &blocks[block_of[&k]];
                for (bi, &(bm, bc)) in basis.iter().enumerate() {
                    let v = vec![Term { m: bm.mul(&t.m), c: bc, k: t.k }];
                    let c = target.coordinates(&tb, v)?;
                    for (r, b) in c.into_iter().enumerate() {
                        if b != 0 {
                            let e = rows[r].entry(offset[k] + bi).or_insert(0);
                            *e = field::add(*e, b, p);
                        }
                    }
                }
            }
        }
        for (row, c) in rows.into_iter().zip(constant) {
            let row: SparseRow = row.into_iter().filter(|&(_, v)| v != 0).collect();
            equations.push((row, field::neg(c, p)));
        }
    }
    let solution = solve_sparse(p, nunknowns, equations);
    let Some(x) = solution else { return Ok(None) };
    let mut images = Vec::with_capacity(source.rank());
    for k in 0..source.rank() {
        if let Some(img) = fixed_map.get(&k) {
            images.push(img.clone());
        } else {
            let (_, basis) = &blocks[block_of[&k]];
            let terms: Vec<Term> = basis
                .iter()
                .enumerate()
                .filter(|(bi, _)| x[offset[k] + bi] != 0)
                .map(|(bi, &(m, c))| Term { m, c, k: x[offset[k] + bi] })
                .collect();
            images.push(to.normalize(terms));
        }
    }
    Ok(Some(ModuleMap::new_unchecked(source.clone(), target.clone(), images, 0)))
}

/// Expresses ambient elements through a chosen generating list of a
/// submodule, modulo the ambient relations.
pub struct Lifter {
    sub: Module,
    gb: Option<Gb>,
    ngens: usize,
}

impl Lifter {
    /// `sub` must have one generator per entry of `gens`.
    pub fn new(ambient: &Module, sub: &Module, gens: &[Vector]) -> Result<Lifter> {
        let mut cols = gens.to_vec();
        cols.extend(ambient.relations().iter().cloned());
        let cols: Vec<Vector> = cols.into_iter().map(|c| ambient.order().normalize(c)).collect();
        let gb = if cols.iter().all(|c| c.is_empty()) { None } else { Some(tracked_gb_of(ambient.order(), &cols)?) };
        Ok(Lifter { sub: sub.clone(), gb, ngens: gens.len() })
    }

    /// Lifter for a submodule given by its inclusion map.
    pub fn for_inclusion(inc: &ModuleMap) -> Result<Lifter> {
        Lifter::new(&inc.target, &inc.source, inc.images())
    }

    /// Coordinates of `v` in the submodule generators, or `None` when `v`
    /// is not in the submodule.
    pub fn lift(&self, v: &[Term]) -> Option<Vector> {
        if v.is_empty() {
            return Some(vec![]);
        }
        let gb = self.gb.as_ref()?;
        let cof = gb.lift(v.to_vec())?;
        let n = self.ngens;
        Some(reindex(self.sub.order(), &cof, |c| ((c as usize) < n).then_some(c)))
    }

    pub fn module(&self) -> &Module {
        &self.sub
    }
}

/// The map between submodules induced by an ambient map `f`, given the two
/// inclusions; fails when `f` does not carry one submodule into the other.
pub fn restrict_map(f: &ModuleMap, src_inc: &ModuleMap, tgt_inc: &ModuleMap) -> Result<ModuleMap> {
    let lifter = Lifter::for_inclusion(tgt_inc)?;
    restrict_map_with(f, src_inc, &lifter)
}

pub fn restrict_map_with(f: &ModuleMap, src_inc: &ModuleMap, lifter: &Lifter) -> Result<ModuleMap> {
    let mut images = Vec::with_capacity(src_inc.source.rank());
    for v in src_inc.images() {
        let w = f.apply(v);
        let l = lifter.lift(&w).ok_or_else(|| Error::IllDefined("map does not preserve the submodules".into()))?;
        images.push(l);
    }
    ModuleMap::new(src_inc.source.clone(), lifter.module().clone(), images, f.shift)
}

/// `Big/Small` for submodules `Small ⊆ Big` of one ambient module, presented
/// on the generators of `Big`.
pub fn subquotient(big_inc: &ModuleMap, small_gens: &[Vector]) -> Result<(Module, Lifter)> {
    let lifter = Lifter::for_inclusion(big_inc)?;
    let mut rels = big_inc.source.relations().to_vec();
    for g in small_gens {
        let l = lifter.lift(g).ok_or_else(|| Error::IllDefined("subquotient: small module not contained in big".into()))?;
        if !l.is_empty() {
            rels.push(l);
        }
    }
    let q = PresentedModule::from_order(big_inc.source.order().clone(), rels)?;
    let lifter = Lifter { sub: q.clone(), gb: lifter.gb, ngens: lifter.ngens };
    Ok((q, lifter))
}

/// The quotient `M / ⟨gens⟩` with its projection.
pub fn quotient(m: &Module, gens: &[Vector]) -> Result<(Module, ModuleMap)> {
    let mut rels = m.relations().to_vec();
    rels.extend(gens.iter().filter(|g| !g.is_empty()).cloned());
    let q = PresentedModule::from_order(m.order().clone(), rels)?;
    let proj = ModuleMap::new_unchecked(m.clone(), q.clone(), (0..m.rank()).map(unit).collect(), 0);
    Ok((q, proj))
}

/// Exactness of `0 → A → B → C → 0` as module maps: `a` injective, `b`
/// surjective and `ker b = im a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExact {
    pub injective: bool,
    pub surjective: bool,
    pub complex: bool,
    pub exact_middle: bool,
}

impl ShortExact {
    pub fn holds(&self) -> bool {
        self.injective && self.surjective && self.complex && self.exact_middle
    }
}

pub fn short_exact(a: &ModuleMap, b: &ModuleMap) -> Result<ShortExact> {
    let injective = a.is_injective()?;
    let surjective = b.is_surjective()?;
    let ba = b.compose(a)?;
    let complex = ba.is_zero()?;
    let exact_middle = if complex {
        let ker = b.kernel_generators()?;
        let (_, inc) = a.image()?;
        let lifter = Lifter::for_inclusion(&inc)?;
        ker.iter().all(|k| lifter.lift(k).is_some())
    } else {
        false
    };
    Ok(ShortExact { injective, surjective, complex, exact_middle })
}

#[cfg(test)]
mod tests;
