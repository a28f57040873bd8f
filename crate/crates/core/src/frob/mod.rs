//! Frobenius pushforwards of graded modules over a hypersurface ring and the
//! Frobenius map itself.
//!
//! `R = S/(f)` is graded by `ℤ^n/L`, where `L` is spanned by the differences
//! of the exponent vectors of `f`. Consequently `F^e_*M` splits as an
//! `S`-module into summands indexed by classes in `ℤ^n/(L + p^e ℤ^n)`; all
//! Frobenius-type maps out of `M` land in the class of multidegree zero, so
//! most computations only need that summand.

pub mod oracles;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::arith::{Monomial, Poly, RingRef, MAX_VARS};
use crate::error::{Error, Result};
use crate::groebner::{is_isolated_singularity, Isolation, ModOrder, Term, Vector};
use crate::modalg::{unit, Module, ModuleMap, PresentedModule, Resolution};
pub use oracles::{cech_details, cech_f_injective, duality_details, f_injective_via_duality, fedder_is_fpure, CechPiece, CechReport};

pub type MultiDegree = Vec<i64>;

/// Positive integer weights making `f` quasi-homogeneous, when they are unique
/// up to scaling (or when the standard grading already works).
pub fn quasi_homogeneous_weights(f: &Poly) -> Option<Vec<i64>> {
    let n = f.ring().nvars();
    if f.is_zero() || f.len() == 1 {
        return Some(vec![1; n]);
    }
    let exps: Vec<Vec<i64>> = f.terms().iter().map(|(m, _)| (0..n).map(|k| m.exp(k) as i64).collect()).collect();
    let diffs: Vec<Vec<i64>> = exps[1..].iter().map(|e| e.iter().zip(&exps[0]).map(|(a, b)| a - b).collect()).collect();
    if diffs.iter().all(|d| d.iter().sum::<i64>() == 0) {
        return Some(vec![1; n]);
    }
    let basis = rational_nullspace(&diffs, n);
    if basis.len() != 1 {
        return None;
    }
    let v = &basis[0];
    let sign = if v.iter().all(|&x| x > 0) {
        1
    } else if v.iter().all(|&x| x < 0) {
        -1
    } else {
        return None;
    };
    let g = v.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
    Some(v.iter().map(|&x| sign * x / g).collect())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Integer basis of the rational nullspace of `rows` (fraction-free elimination).
fn rational_nullspace(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..n {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd128(g, x.abs()));
                if g > 1 {
                    for x in m[i].iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        // solve with x_free = L (common multiple of pivots)
        let l = pivots.iter().enumerate().fold(1i128, |l, (ri, &pc)| lcm128(l, m[ri][pc].abs()));
        let mut x = vec![0i128; n];
        x[free] = l;
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[ri][free] * l / m[ri][pc];
        }
        let g = x.iter().fold(0i128, |g, &v| gcd128(g, v.abs())).max(1);
        out.push(x.iter().map(|&v| (v / g) as i64).collect());
    }
    out
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd128(b, a % b) }
}

fn lcm128(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 { a.max(b) } else { a / gcd128(a, b) * b }
}

/// The hypersurface `R = S/(f)` with its grading data (`f = 0` gives `R = S`).
#[derive(Clone, Debug)]
pub struct Hypersurface {
    pub ring: RingRef,
    pub f: Poly,
    lattice: Vec<MultiDegree>,
}

impl Hypersurface {
    pub fn new(f: &Poly) -> Result<Hypersurface> {
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous(format!("{} is not homogeneous for the session weights", f.to_text())));
        }
        let n = f.ring().nvars();
        let exps: Vec<MultiDegree> = f.terms().iter().map(|(m, _)| (0..n).map(|k| m.exp(k) as i64).collect()).collect();
        let lattice = exps.iter().skip(1).map(|e| e.iter().zip(&exps[0]).map(|(a, b)| a - b).collect()).collect();
        Ok(Hypersurface { ring: f.ring().clone(), f: f.clone(), lattice })
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.f.is_zero()
    }

    /// Krull dimension of `R`.
    pub fn dim(&self) -> usize {
        if self.f.is_zero() { self.nvars() } else { self.nvars() - 1 }
    }

    /// Weighted degree of `f` (unscaled).
    pub fn degree(&self) -> i64 {
        self.f.homogeneous_degree().unwrap_or(0)
    }

    pub fn scaled_degree(&self) -> i64 {
        self.degree() * self.ring.scale()
    }

    /// Sum of the variable weights (unscaled), the degree of `ω_S^{-1}`.
    pub fn weight_sum(&self) -> i64 {
        self.ring.weights().iter().sum()
    }

    /// Multidegree of `f` (that of its leading term).
    pub fn f_multidegree(&self) -> MultiDegree {
        match self.f.leading() {
            Some((m, _)) => (0..self.nvars()).map(|k| m.exp(k) as i64).collect(),
            None => vec![0; self.nvars()],
        }
    }

    /// Generators of the lattice `L`.
    pub fn lattice(&self) -> &[MultiDegree] {
        &self.lattice
    }

    /// `R` as a cyclic `S`-module.
    pub fn ring_module(&self) -> Module {
        let rels = if self.f.is_zero() {
            vec![]
        } else {
            vec![self.f.terms().iter().map(|&(m, k)| Term { m, c: 0, k }).collect()]
        };
        PresentedModule::new(&self.ring, vec![0], rels).expect("homogeneous hypersurface")
    }

    /// The coset `v + L` inside `(ℤ/q)^n`, sorted.
    pub fn orbit(&self, v: &[i64], q: i64) -> Vec<MultiDegree> {
        let start: MultiDegree = v.iter().map(|&x| x.rem_euclid(q)).collect();
        let mut seen: HashSet<MultiDegree> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for g in &self.lattice {
                let next: MultiDegree = cur.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(q)).collect();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<MultiDegree> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Whether `a` and `b` lie in the same class of `ℤ^n/(L + qℤ^n)`.
    pub fn same_class(&self, a: &[i64], b: &[i64], q: i64) -> bool {
        let target: MultiDegree = b.iter().map(|&x| x.rem_euclid(q)).collect();
        self.orbit(a, q).binary_search(&target).is_ok()
    }

    /// One representative (the lexicographically least) per class.
    pub fn class_reps(&self, q: i64) -> Vec<MultiDegree> {
        let n = self.nvars();
        let mut seen: BTreeSet<MultiDegree> = BTreeSet::new();
        let mut reps = Vec::new();
        let total = (q as u64).pow(n as u32);
        for idx in 0..total {
            let mut v = vec![0i64; n];
            let mut rest = idx;
            for k in (0..n).rev() {
                v[k] = (rest % q as u64) as i64;
                rest /= q as u64;
            }
            if seen.contains(&v) {
                continue;
            }
            for w in self.orbit(&v, q) {
                seen.insert(w);
            }
            reps.push(v);
        }
        reps
    }

    /// `Ok` when the origin is an isolated singularity (or `R` is regular).
    pub fn require_isolated(&self) -> Result<()> {
        if self.f.is_zero() {
            return Ok(());
        }
        match is_isolated_singularity(&self.f)? {
            Isolation::Isolated => Ok(()),
            Isolation::NotIsolated => Err(Error::NotIsolated),
            Isolation::Indeterminate { variable } => Err(Error::Indeterminate(format!(
                "the partial derivative with respect to {variable} vanishes identically"
            ))),
        }
    }
}

/// Which summands of a pushforward to keep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSel {
    All,
    Class(MultiDegree),
}

impl ClassSel {
    pub fn zero(n: usize) -> ClassSel {
        ClassSel::Class(vec![0; n])
    }
}

/// The `S`-module `F^e_*M` (or one class summand of it) with generators
/// `F^e_*(x^r g_k)`, `0 ≤ r_i < p^e`.
#[derive(Clone, Debug)]
pub struct FrobeniusModule {
    pub module: Module,
    pub base: Module,
    pub base_mdeg: Vec<MultiDegree>,
    pub e: u32,
    pub q: i64,
    pub class: ClassSel,
    pub gens: Vec<(u32, MultiDegree)>,
    index: HashMap<(u32, MultiDegree), u32>,
}

fn exps_of(m: &Monomial, n: usize) -> MultiDegree {
    (0..n).map(|k| m.exp(k) as i64).collect()
}

fn all_residues(n: usize, q: i64) -> Vec<MultiDegree> {
    let total = (q as u64).pow(n as u32);
    (0..total)
        .map(|idx| {
            let mut v = vec![0i64; n];
            let mut rest = idx;
            for k in (0..n).rev() {
                v[k] = (rest % q as u64) as i64;
                rest /= q as u64;
            }
            v
        })
        .collect()
}

/// Multidegree of a homogeneous vector, read off its first term.
pub fn vector_multidegree(v: &[Term], mdeg: &[MultiDegree], n: usize) -> MultiDegree {
    let t = v[0];
    exps_of(&t.m, n).iter().zip(&mdeg[t.c as usize]).map(|(a, b)| a + b).collect()
}

/// Push a module forward along `F^e`, keeping the selected classes.
pub fn pushforward(hs: &Hypersurface, base: &Module, mdeg: &[MultiDegree], e: u32, class: &ClassSel) -> Result<FrobeniusModule> {
    let ring = hs.ring.clone();
    let n = hs.nvars();
    if e == 0 || e > ring.e_max() {
        return Err(Error::Invalid(format!("Frobenius level {e} outside 1..={}", ring.e_max())));
    }
    if mdeg.len() != base.rank() {
        return Err(Error::Invalid("one multidegree per generator is required".into()));
    }
    let q = (ring.p() as i64).pow(e);
    let scale = ring.scale();
    let w = ring.weights().to_vec();
    let residues_for = |v: &MultiDegree| -> Vec<MultiDegree> {
        match class {
            ClassSel::All => all_residues(n, q),
            ClassSel::Class(c) => {
                let diff: MultiDegree = c.iter().zip(v).map(|(a, b)| a - b).collect();
                hs.orbit(&diff, q)
            }
        }
    };
    let mut gens = Vec::new();
    let mut degrees = Vec::new();
    let mut index = HashMap::new();
    for (k, md) in mdeg.iter().enumerate() {
        for r in residues_for(md) {
            let d = base.degrees()[k] + scale * r.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>();
            if d % q != 0 {
                return Err(Error::Invalid("generator degree not divisible by the Frobenius level".into()));
            }
            index.insert((k as u32, r.clone()), gens.len() as u32);
            gens.push((k as u32, r));
            degrees.push(d / q);
        }
    }
    let order = Arc::new(ModOrder::new(&ring, degrees));
    let mut fm = FrobeniusModule {
        module: PresentedModule::from_order(order.clone(), vec![])?,
        base: base.clone(),
        base_mdeg: mdeg.to_vec(),
        e,
        q,
        class: class.clone(),
        gens,
        index,
    };
    let mut rels = Vec::new();
    for u in base.relations() {
        let md = vector_multidegree(u, mdeg, n);
        for r in residues_for(&md) {
            rels.push(fm.push_element(&r, u)?);
        }
    }
    fm.module = PresentedModule::from_order(order, rels)?;
    Ok(fm)
}

impl FrobeniusModule {
    pub fn nvars(&self) -> usize {
        self.base.ring().nvars()
    }

    pub fn generator_index(&self, k: u32, r: &[i64]) -> Option<usize> {
        self.index.get(&(k, r.to_vec())).map(|&i| i as usize)
    }

    /// `F^e_*(x^r · v)` for a base vector `v`, in the pushed generators.
    pub fn push_element(&self, r: &[i64], v: &[Term]) -> Result<Vector> {
        let n = self.nvars();
        let q = self.q;
        let mut terms = Vec::with_capacity(v.len());
        for t in v {
            let mut a = [0u32; MAX_VARS];
            let mut rem = vec![0i64; n];
            for k in 0..n {
                let x = t.m.exp(k) as i64 + r[k];
                a[k] = (x / q) as u32;
                rem[k] = x % q;
            }
            let c = self
                .generator_index(t.c, &rem)
                .ok_or_else(|| Error::Invalid("element lies outside the selected Frobenius class".into()))?;
            terms.push(Term { m: Monomial::from_exps(&a[..n]), c: c as u32, k: t.k });
        }
        Ok(self.module.order().normalize(terms))
    }

    /// The element of `M` underlying a pushed vector.
    pub fn to_underlying(&self, v: &[Term]) -> Vector {
        let n = self.nvars();
        let q = self.q;
        let terms = v
            .iter()
            .map(|t| {
                let (k, r) = &self.gens[t.c as usize];
                let e: Vec<u32> = (0..n).map(|i| (t.m.exp(i) as i64 * q + r[i]) as u32).collect();
                Term { m: Monomial::from_exps(&e), c: *k, k: t.k }
            })
            .collect();
        self.base.order().normalize(terms)
    }

    /// `F^e_*φ: F^e_*M → F^e_*N` for a multidegree-preserving `φ`.
    pub fn push_map(&self, target: &FrobeniusModule, phi: &ModuleMap) -> Result<ModuleMap> {
        let mut images = Vec::with_capacity(self.gens.len());
        for (k, r) in &self.gens {
            images.push(target.push_element(r, &phi.images()[*k as usize])?);
        }
        ModuleMap::new(self.module.clone(), target.module.clone(), images, phi.shift / self.q)
    }
}

/// `F^e: R → F^e_*R`, `1 ↦ F^e_*1`, landing in the class-zero summand.
pub fn frobenius_map(hs: &Hypersurface, e: u32) -> Result<(FrobeniusModule, ModuleMap)> {
    let r = hs.ring_module();
    let n = hs.nvars();
    let fm = pushforward(hs, &r, &[vec![0; n]], e, &ClassSel::zero(n))?;
    let one = fm.generator_index(0, &vec![0; n]).expect("class zero contains F_*1");
    let map = ModuleMap::new(r, fm.module.clone(), vec![unit(one)], 0)?;
    Ok((fm, map))
}

/// Resolutions of `R` and of the class-zero part of `F^e_*R` obtained by
/// pushing `0 → S(-s) → S → R → 0` forward, with the comparison maps of the
/// Frobenius (`1 ↦ F^e_*1`, `e_f ↦ F^e_*(f^{q-1} e_f)`).
pub struct FrobeniusResolutions {
    pub base: Resolution,
    pub pushed: Resolution,
    pub comparison: Vec<Vec<Vector>>,
}

pub fn frobenius_resolutions(hs: &Hypersurface, e: u32) -> Result<FrobeniusResolutions> {
    let ring = hs.ring.clone();
    let n = hs.nvars();
    let zero = vec![0i64; n];
    let s_free = PresentedModule::free(&ring, vec![0]);
    let f0 = pushforward(hs, &s_free, std::slice::from_ref(&zero), e, &ClassSel::zero(n))?;
    let one = f0.generator_index(0, &zero).unwrap();
    if hs.f.is_zero() {
        let base = Resolution::from_parts(vec![s_free.order().clone()], vec![])?;
        let pushed = Resolution::from_parts(vec![f0.module.order().clone()], vec![])?;
        return Ok(FrobeniusResolutions { base, pushed, comparison: vec![vec![unit(one)]] });
    }
    let sdeg = hs.scaled_degree();
    let fmd = hs.f_multidegree();
    let s_shift = PresentedModule::free(&ring, vec![sdeg]);
    let f1 = pushforward(hs, &s_shift, std::slice::from_ref(&fmd), e, &ClassSel::zero(n))?;
    let fvec: Vector = s_free.order().normalize(hs.f.terms().iter().map(|&(m, k)| Term { m, c: 0, k }).collect());
    let base = Resolution::from_parts(
        vec![s_free.order().clone(), s_shift.order().clone()],
        vec![vec![fvec.clone()]],
    )?;
    // d_1 on the pushed side: F_*(x^r e_f) ↦ F_*(x^r f)
    let mut d1 = Vec::with_capacity(f1.gens.len());
    for (_, r) in &f1.gens {
        d1.push(f0.push_element(r, &fvec)?);
    }
    let pushed = Resolution::from_parts(vec![f0.module.order().clone(), f1.module.order().clone()], vec![d1])?;
    let q = f0.q as u64;
    let g = hs.f.pow(q - 1);
    let gvec: Vector = g.terms().iter().map(|&(m, k)| Term { m, c: 0, k }).collect();
    let alpha1 = f1.push_element(&zero, &gvec)?;
    let comparison = vec![vec![unit(one)], vec![alpha1]];
    // chain-map certificate: d_1(α_1) = α_0(d_1) = f · F_*1
    let lhs = crate::modalg::combine(&pushed.free[0], &pushed.maps[0], &comparison[1][0]);
    let rhs = crate::modalg::combine(&pushed.free[0], &comparison[0], &fvec);
    if lhs != rhs {
        return Err(Error::IllDefined("Frobenius comparison map is not a chain map".into()));
    }
    Ok(FrobeniusResolutions { base, pushed, comparison })
}
