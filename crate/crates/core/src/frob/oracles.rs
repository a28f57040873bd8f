//! Three independent tests of Frobenius behaviour for a hypersurface: Fedder's
//! criterion, the action on top local cohomology, and surjectivity of the
//! dual maps on Ext into the canonical module.

use std::collections::HashMap;

use super::{frobenius_resolutions, Hypersurface};
use crate::arith::Poly;
use crate::error::{Error, Result};
use crate::groebner::{monomials_of_degree, DEFAULT_DEGREE_CAP};
use crate::modalg::{ext_cokernel_with, DenseMatrix, ExtCokernel};

/// `R = S/(f)` is F-pure at the origin iff `f^{p-1} ∉ 𝔪^{[p]}`, i.e. some
/// monomial of `f^{p-1}` has every exponent below `p`.
pub fn fedder_is_fpure(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let n = f.ring().nvars();
    if f.terms().iter().any(|(m, _)| m.total() == 0) {
        return Err(Error::Invalid("f must vanish at the origin".into()));
    }
    let p = f.ring().p();
    let g = f.pow(p as u64 - 1);
    Ok(g.terms().iter().any(|(m, _)| (0..n).all(|k| m.exp(k) < p)))
}

/// One graded piece of `H^{n-1}_𝔪(R)` and the Frobenius acting on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechPiece {
    pub degree: i64,
    pub dim: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechReport {
    /// Top degree of `H^{n-1}_𝔪(R)`, `deg f − Σ w_i`.
    pub a_invariant: i64,
    pub pieces: Vec<CechPiece>,
    pub injective: bool,
}

type NegExp = Vec<i64>;

/// Basis `x^{-b}` (`b_i ≥ 1`) of `H^n_𝔪(S)` in weighted degree `t`.
fn top_cohomology_basis(w: &[i64], t: i64) -> Vec<NegExp> {
    let sw: i64 = w.iter().sum();
    monomials_of_degree(w, -t - sw)
        .iter()
        .map(|m| (0..w.len()).map(|k| m.exp(k) as i64 + 1).collect())
        .collect()
}

/// Frobenius on `H^{n-1}_𝔪(R) = ker(f: H^n_𝔪(S)(-s) → H^n_𝔪(S))` in degrees
/// `a, a-1, …, a-window`; the socle degree `a` alone decides injectivity,
/// the lower degrees are reported as a cross-check.
pub fn cech_details(hs: &Hypersurface, window: i64) -> Result<CechReport> {
    hs.require_isolated()?;
    let ring = &hs.ring;
    let p = ring.p();
    let n = ring.nvars();
    let w = ring.weights().to_vec();
    let s = hs.degree();
    let a = s - hs.weight_sum();
    if hs.f.is_zero() {
        return Ok(CechReport { a_invariant: -hs.weight_sum(), pieces: vec![], injective: true });
    }
    let fexp: Vec<(Vec<i64>, u32)> =
        hs.f.terms().iter().map(|(m, k)| ((0..n).map(|i| m.exp(i) as i64).collect(), *k)).collect();
    let g = hs.f.pow(p as u64 - 1);
    let gexp: Vec<(Vec<i64>, u32)> =
        g.terms().iter().map(|(m, k)| ((0..n).map(|i| m.exp(i) as i64).collect(), *k)).collect();
    let mut pieces = Vec::new();
    let mut injective = true;
    for t in (a - window..=a).rev() {
        // elements of H^n(S)(-s)_t are classes of degree t - s
        let src = top_cohomology_basis(&w, t - s);
        if src.is_empty() {
            continue;
        }
        let tgt = top_cohomology_basis(&w, t);
        let tidx: HashMap<&NegExp, usize> = tgt.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut mat = DenseMatrix::zeros(p, tgt.len(), src.len());
        for (j, b) in src.iter().enumerate() {
            for (m, k) in &fexp {
                let c: NegExp = b.iter().zip(m).map(|(x, y)| x - y).collect();
                if c.iter().all(|&x| x >= 1) {
                    let i = tidx[&c];
                    mat.set(i, j, crate::arith::field::add(mat.get(i, j), *k, p));
                }
            }
        }
        let kernel = mat.nullspace();
        if kernel.is_empty() {
            continue;
        }
        // F(η) = f^{p-1} η^p, again a class in H^n(S)(-s)
        let mut idx: HashMap<NegExp, usize> = HashMap::new();
        let mut cols: Vec<Vec<(usize, u32)>> = Vec::new();
        for eta in &kernel {
            let mut col = Vec::new();
            for (j, &c) in eta.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (m, k) in &gexp {
                    let img: NegExp = src[j].iter().zip(m).map(|(x, y)| p as i64 * x - y).collect();
                    if img.iter().all(|&x| x >= 1) {
                        let len = idx.len();
                        let r = *idx.entry(img).or_insert(len);
                        col.push((r, crate::arith::field::mul(c, *k, p)));
                    }
                }
            }
            cols.push(col);
        }
        let mut img = DenseMatrix::zeros(p, idx.len(), cols.len());
        for (j, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                img.set(r, j, crate::arith::field::add(img.get(r, j), v, p));
            }
        }
        let rank = img.rank();
        if t == a && rank < kernel.len() {
            injective = false;
        }
        pieces.push(CechPiece { degree: t, dim: kernel.len(), image_rank: rank });
    }
    Ok(CechReport { a_invariant: a, pieces, injective })
}

/// Injectivity of Frobenius on `H^{n-1}_𝔪(R)` by the local-cohomology oracle.
pub fn cech_f_injective(hs: &Hypersurface) -> Result<bool> {
    Ok(cech_details(hs, 0)?.injective)
}

/// Surjectivity of `Ext^{n-j}(F_*R, ω_S) → Ext^{n-j}(R, ω_S)` for every
/// `j ≤ dim R`, reported index by index.
pub fn duality_details(hs: &Hypersurface) -> Result<Vec<ExtCokernel>> {
    hs.require_isolated()?;
    let n = hs.nvars();
    let res = frobenius_resolutions(hs, 1)?;
    let twist = -hs.weight_sum() * hs.ring.scale();
    let mut out = Vec::new();
    for j in 0..=hs.dim() {
        let k = n - j;
        if k > res.base.length() {
            out.push(ExtCokernel { index: k, zero: true, uncovered: 0, finite_length: true, target_zero: true });
            continue;
        }
        out.push(ext_cokernel_with(&res.base, &res.pushed, &res.comparison[k], k, twist, DEFAULT_DEGREE_CAP)?);
    }
    Ok(out)
}

/// F-injectivity of `R` via local duality.
pub fn f_injective_via_duality(hs: &Hypersurface) -> Result<bool> {
    Ok(duality_details(hs)?.iter().all(|c| c.zero))
}
