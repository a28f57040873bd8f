//! Graded free resolutions, Ext groups and the maps induced on them.

use std::sync::Arc;

use super::{combine, gb_of, minimal_generators, present_submodule, reindex, tracked_gb_of, unit, Module, ModuleMap, Order, PresentedModule};
use crate::arith::Monomial;
use crate::error::{Error, Result};
use crate::groebner::{syzygies, ModOrder, Term, Vector, DEFAULT_DEGREE_CAP};

/// `… → F_2 → F_1 → F_0`, with `maps[k]` the columns of `F_{k+1} → F_k`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub free: Vec<Order>,
    pub maps: Vec<Vec<Vector>>,
}

impl Resolution {
    /// Assemble a resolution from known differentials.
    pub fn from_parts(free: Vec<Order>, maps: Vec<Vec<Vector>>) -> Result<Resolution> {
        if maps.len() + 1 != free.len() {
            return Err(Error::Invalid("a resolution needs one more free module than maps".into()));
        }
        for (k, cols) in maps.iter().enumerate() {
            if cols.len() != free[k + 1].rank() {
                return Err(Error::Invalid(format!("map {k} has the wrong number of columns")));
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(k, cols)| cols.into_iter().map(|c| free[k].normalize(c)).collect())
            .collect();
        Ok(Resolution { free, maps })
    }

    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.free.get(k).map(|o| o.rank()).unwrap_or(0)
    }

    pub fn degrees(&self, k: usize) -> &[i64] {
        self.free.get(k).map(|o| o.gen_deg.as_slice()).unwrap_or(&[])
    }

    /// `d_k ∘ d_{k+1} = 0` for all `k`.
    pub fn is_complex(&self) -> bool {
        for k in 1..self.maps.len() {
            for col in &self.maps[k] {
                if !combine(&self.free[k - 1], &self.maps[k - 1], col).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// The dual free module `F_k^* ⊗ S(twist)`.
    pub fn dual_order(&self, k: usize, twist: i64) -> Order {
        let ring = self.free[0].ring.clone();
        Arc::new(ModOrder::new(&ring, self.degrees(k).iter().map(|d| twist - d).collect()))
    }

    /// Columns of `d_{k+1}^*: F_k^* → F_{k+1}^*`.
    pub fn dual_map(&self, k: usize, twist: i64) -> Vec<Vector> {
        let target = self.dual_order(k + 1, twist);
        match self.maps.get(k) {
            None => vec![vec![]; self.rank(k)],
            Some(cols) => transpose(cols, self.rank(k), &target),
        }
    }
}

/// Transpose of a matrix given by columns, as columns in `target`.
pub fn transpose(cols: &[Vector], rows: usize, target: &ModOrder) -> Vec<Vector> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new(); rows];
    for (b, col) in cols.iter().enumerate() {
        for t in col {
            out[t.c as usize].push(Term { m: t.m, c: b as u32, k: t.k });
        }
    }
    out.into_iter().map(|v| target.normalize(v)).collect()
}

/// A graded free resolution of `M` with `F_0` the given generators and minimal
/// generating sets of the syzygy modules after that.
pub fn free_resolution(m: &Module, length: usize) -> Result<Resolution> {
    let ring = m.ring().clone();
    let mut free: Vec<Order> = vec![m.order().clone()];
    let mut maps: Vec<Vec<Vector>> = Vec::new();
    let mut cols = minimal_generators(m.order(), &[], m.relations().to_vec())?;
    while !cols.is_empty() && maps.len() < length {
        let k = free.len() - 1;
        let deg: Vec<i64> = cols.iter().map(|c| free[k].degree(c).unwrap()).collect();
        let next = Arc::new(ModOrder::new(&ring, deg.clone()));
        maps.push(cols.clone());
        free.push(next.clone());
        if maps.len() == length {
            break;
        }
        let syz = syzygies(&free[k], &cols, &deg, DEFAULT_DEGREE_CAP)?;
        cols = minimal_generators(&next, &[], syz)?;
    }
    Ok(Resolution { free, maps })
}

/// Cycles and boundaries of the dual complex at index `i`.
#[derive(Clone, Debug)]
pub struct ExtData {
    pub ambient: Order,
    pub cycles: Vec<Vector>,
    pub boundaries: Vec<Vector>,
}

pub fn ext_data(res: &Resolution, i: usize, twist: i64) -> Result<ExtData> {
    let ambient = res.dual_order(i, twist);
    if res.rank(i) == 0 {
        return Ok(ExtData { ambient, cycles: vec![], boundaries: vec![] });
    }
    let dstar = res.dual_map(i, twist);
    let cycles: Vec<Vector> = if res.rank(i + 1) == 0 {
        (0..res.rank(i)).map(unit).collect()
    } else {
        let target = res.dual_order(i + 1, twist);
        let syz = syzygies(&target, &dstar, &ambient.gen_deg, DEFAULT_DEGREE_CAP)?;
        syz.into_iter().map(|v| ambient.normalize(v)).collect()
    };
    let boundaries: Vec<Vector> = if i == 0 {
        vec![]
    } else {
        res.dual_map(i - 1, twist).into_iter().filter(|v| !v.is_empty()).collect()
    };
    Ok(ExtData { ambient, cycles, boundaries })
}

/// `Ext^i_S(M, S(twist))` presented as cycles modulo boundaries.
pub fn ext_group(m: &Module, i: usize, twist: i64) -> Result<Module> {
    let n = m.ring().nvars();
    let res = free_resolution(m, n + 1)?;
    Ok(ext_from(&res, i, twist)?.0)
}

/// The Ext module with the ambient generators of its presentation.
fn ext_from(res: &Resolution, i: usize, twist: i64) -> Result<(Module, Vec<Vector>, ExtData)> {
    let data = ext_data(res, i, twist)?;
    let amb = PresentedModule::from_order(data.ambient.clone(), data.boundaries.clone())?;
    let gens = minimal_generators(&data.ambient, &data.boundaries, data.cycles.clone())?;
    let (module, _) = present_submodule(&amb, gens.clone())?;
    Ok((module, gens, data))
}

/// Lift `α: M → N` to chain maps `α_k: F_k(M) → F_k(N)` for `k ≤ upto`.
pub fn comparison_maps(alpha: &ModuleMap, rm: &Resolution, rn: &Resolution, upto: usize) -> Result<Vec<Vec<Vector>>> {
    if alpha.shift != 0 {
        return Err(Error::Invalid("comparison maps need a degree-preserving map".into()));
    }
    let mut out: Vec<Vec<Vector>> = vec![alpha.images().iter().map(|v| rn.free[0].normalize(v.clone())).collect()];
    for k in 1..=upto {
        if rm.rank(k) == 0 {
            out.push(vec![]);
            continue;
        }
        let prev = &out[k - 1];
        let target_prev = &rn.free[k - 1];
        let gb = if rn.rank(k) > 0 { Some(tracked_gb_of(target_prev, &rn.maps[k - 1])?) } else { None };
        let mut cols = Vec::with_capacity(rm.rank(k));
        for col in &rm.maps[k - 1] {
            let w = combine(target_prev, prev, col);
            if w.is_empty() {
                cols.push(vec![]);
                continue;
            }
            let gb = gb.as_ref().ok_or_else(|| Error::IllDefined("chain map cannot be lifted".into()))?;
            let cof = gb.lift(w).ok_or_else(|| Error::IllDefined("chain map cannot be lifted".into()))?;
            cols.push(rn.free[k].normalize(cof));
        }
        out.push(cols);
    }
    Ok(out)
}

/// The map `Ext^i(N, S(twist)) → Ext^i(M, S(twist))` induced by `α: M → N`.
pub fn ext_induced(alpha: &ModuleMap, i: usize, twist: i64) -> Result<ModuleMap> {
    let n = alpha.source.ring().nvars();
    let rm = free_resolution(&alpha.source, n + 1)?;
    let rn = free_resolution(&alpha.target, n + 1)?;
    let comp = comparison_maps(alpha, &rm, &rn, i)?;
    let (em, gm, dm) = ext_from(&rm, i, twist)?;
    let (en, gn, _) = ext_from(&rn, i, twist)?;
    let star = transpose(&comp[i], rn.rank(i), &dm.ambient);
    let mut cols = gm.clone();
    cols.extend(dm.boundaries.iter().cloned());
    let gb = if cols.is_empty() { None } else { Some(tracked_gb_of(&dm.ambient, &cols)?) };
    let mut images = Vec::with_capacity(gn.len());
    for z in &gn {
        let w = combine(&dm.ambient, &star, z);
        if w.is_empty() {
            images.push(vec![]);
            continue;
        }
        let gb = gb.as_ref().ok_or_else(|| Error::IllDefined("induced map leaves the cycles".into()))?;
        let cof = gb.lift(w).ok_or_else(|| Error::IllDefined("induced map leaves the cycles".into()))?;
        images.push(reindex(em.order(), &cof, |c| ((c as usize) < gm.len()).then_some(c)));
    }
    Ok(ModuleMap::new_unchecked(en, em, images, 0))
}

/// Cokernel of an induced Ext map, tested without presenting the Ext modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtCokernel {
    pub index: usize,
    pub zero: bool,
    /// Number of cycle generators of `Ext^i(M)` not reached.
    pub uncovered: usize,
    /// Whether the cokernel has finite length (support in the origin).
    pub finite_length: bool,
    /// Whether `Ext^i(M)` itself vanishes.
    pub target_zero: bool,
}

/// Decide whether `Ext^i(N) → Ext^i(M)` is surjective, given resolutions and
/// the `i`-th comparison map `α_i: F_i(M) → F_i(N)`.
pub fn ext_cokernel_with(rm: &Resolution, rn: &Resolution, alpha_i: &[Vector], i: usize, twist: i64, power_cap: u32) -> Result<ExtCokernel> {
    let dm = ext_data(rm, i, twist)?;
    let mut done = ExtCokernel { index: i, zero: true, uncovered: 0, finite_length: true, target_zero: true };
    if dm.cycles.is_empty() {
        return Ok(done);
    }
    let bgb = if dm.boundaries.is_empty() { None } else { Some(gb_of(&dm.ambient, &dm.boundaries)?) };
    let outside: Vec<&Vector> =
        dm.cycles.iter().filter(|z| bgb.as_ref().map(|g| !g.contains(z)).unwrap_or(true)).collect();
    if outside.is_empty() {
        return Ok(done);
    }
    done.target_zero = false;
    let dn = ext_data(rn, i, twist)?;
    let star = transpose(alpha_i, rn.rank(i), &dm.ambient);
    let mut sub = dm.boundaries.clone();
    for z in &dn.cycles {
        let w = combine(&dm.ambient, &star, z);
        if !w.is_empty() {
            sub.push(w);
        }
    }
    let gb = if sub.is_empty() { None } else { Some(gb_of(&dm.ambient, &sub)?) };
    let uncovered: Vec<&Vector> =
        outside.into_iter().filter(|z| gb.as_ref().map(|g| !g.contains(z)).unwrap_or(true)).collect();
    done.uncovered = uncovered.len();
    done.zero = uncovered.is_empty();
    let Some(gb) = gb else {
        // nothing to divide by: a nonzero submodule of a free module
        done.finite_length = false;
        return Ok(done);
    };
    let n = dm.ambient.ring.nvars();
    'gens: for z in uncovered {
        for j in 0..n {
            let x = Monomial::var(j, 1);
            let mut cur = gb.reduce((*z).clone());
            let mut e = 0;
            while !cur.is_empty() {
                e += 1;
                if e > power_cap {
                    done.finite_length = false;
                    break 'gens;
                }
                let shifted: Vector = cur.iter().map(|t| Term { m: t.m.mul(&x), ..*t }).collect();
                cur = gb.reduce(dm.ambient.normalize(shifted));
            }
        }
    }
    Ok(done)
}

/// Surjectivity of `Ext^i(N, S(twist)) → Ext^i(M, S(twist))` induced by `α`.
pub fn ext_cokernel(alpha: &ModuleMap, i: usize, twist: i64) -> Result<ExtCokernel> {
    let n = alpha.source.ring().nvars();
    let rm = free_resolution(&alpha.source, n + 1)?;
    let rn = free_resolution(&alpha.target, n + 1)?;
    let comp = comparison_maps(alpha, &rm, &rn, i)?;
    ext_cokernel_with(&rm, &rn, &comp[i], i, twist, DEFAULT_DEGREE_CAP)
}
