//! Buchberger's algorithm for submodules of graded free modules.
//!
//! Elements are sparse vectors of terms `c · x^m · e_comp`, kept sorted in
//! descending module order. Ideals are the rank-one case.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::arith::field;
use crate::arith::{Monomial, OrderKind, RingRef};
use crate::error::{Error, Result};

/// Default cap on the total degree of S-pair least common multiples.
pub const DEFAULT_DEGREE_CAP: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub m: Monomial,
    pub c: u32,
    pub k: u32,
}

/// A vector in a free module: terms sorted descending by the module order.
pub type Vector = Vec<Term>;

/// Module term order over a free module with shifted generator degrees.
///
/// Terms compare by block (block 0 largest), then (for graded kinds) by total
/// scaled degree, then by the monomial tie-break, then by component (lower
/// index larger). For grevlex the tie-break is reverse lexicographic on the
/// exponents alone, which makes `x_last | lt(v) ⟺ x_last | v` for homogeneous `v`.
#[derive(Clone, Debug)]
pub struct ModOrder {
    pub ring: RingRef,
    pub gen_deg: Vec<i64>,
    pub block: Vec<u32>,
    pub kind: OrderKind,
    pub prec: Vec<usize>,
    var_deg: Vec<i64>,
    nvars: usize,
}

impl ModOrder {
    pub fn new(ring: &RingRef, gen_deg: Vec<i64>) -> Self {
        let n = gen_deg.len();
        ModOrder {
            ring: ring.clone(),
            block: vec![0; n],
            kind: ring.order().kind,
            prec: ring.order().precedence.clone(),
            var_deg: ring.var_degrees(),
            nvars: ring.nvars(),
            gen_deg,
        }
    }

    pub fn with_blocks(mut self, block: Vec<u32>) -> Self {
        assert_eq!(block.len(), self.gen_deg.len());
        self.block = block;
        self
    }

    pub fn with_kind(mut self, kind: OrderKind, prec: Vec<usize>) -> Self {
        self.kind = kind;
        self.prec = prec;
        self
    }

    pub fn rank(&self) -> usize {
        self.gen_deg.len()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    #[inline]
    pub fn mono_deg(&self, m: &Monomial) -> i64 {
        let mut d = 0;
        for k in 0..self.nvars {
            d += self.var_deg[k] * m.0[k] as i64;
        }
        d
    }

    #[inline]
    pub fn term_deg(&self, t: &Term) -> i64 {
        self.gen_deg[t.c as usize] + self.mono_deg(&t.m)
    }

    #[inline]
    fn tiebreak(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Grevlex => {
                for &v in self.prec.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            _ => {
                for &v in &self.prec {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Compare `(a, ca)` with `(b, cb)`.
    #[inline]
    pub fn cmp_mc(&self, a: &Monomial, ca: u32, b: &Monomial, cb: u32) -> Ordering {
        let (ba, bb) = (self.block[ca as usize], self.block[cb as usize]);
        if ba != bb {
            return bb.cmp(&ba);
        }
        if self.kind != OrderKind::Lex {
            let da = self.gen_deg[ca as usize] + self.mono_deg(a);
            let db = self.gen_deg[cb as usize] + self.mono_deg(b);
            if da != db {
                return da.cmp(&db);
            }
        }
        match self.tiebreak(a, b) {
            Ordering::Equal => cb.cmp(&ca),
            o => o,
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp_mc(&a.m, a.c, &b.m, b.c)
    }

    pub fn sort(&self, v: &mut Vector) {
        v.sort_by(|a, b| self.cmp(b, a));
    }

    /// Canonicalize arbitrary terms: combine, drop zeros, sort.
    pub fn normalize(&self, mut v: Vector) -> Vector {
        let p = self.p();
        self.sort(&mut v);
        let mut out: Vector = Vec::with_capacity(v.len());
        for t in v {
            let k = t.k % p;
            if let Some(last) = out.last_mut() {
                if last.m == t.m && last.c == t.c {
                    last.k = field::add(last.k, k, p);
                    if last.k == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if k != 0 {
                out.push(Term { k, ..t });
            }
        }
        out
    }

    /// `a + coef · x^q · b`.
    pub fn add_mul(&self, a: &[Term], b: &[Term], coef: u32, q: &Monomial) -> Vector {
        let p = self.p();
        if coef == 0 || b.is_empty() {
            return a.to_vec();
        }
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj = b.first().map(|t| Term { m: t.m.mul(q), c: t.c, k: field::mul(t.k, coef, p) });
        while i < a.len() {
            let Some(tb) = bj else { break };
            match self.cmp(&a[i], &tb) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(tb);
                    j += 1;
                    bj = b.get(j).map(|t| Term { m: t.m.mul(q), c: t.c, k: field::mul(t.k, coef, p) });
                }
                Ordering::Equal => {
                    let k = field::add(a[i].k, tb.k, p);
                    if k != 0 {
                        out.push(Term { k, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| Term { m: t.m.mul(q), c: t.c, k: field::mul(t.k, coef, p) });
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        if let Some(tb) = bj {
            out.push(tb);
            out.extend(b[j + 1..].iter().map(|t| Term { m: t.m.mul(q), c: t.c, k: field::mul(t.k, coef, p) }));
        }
        out
    }

    pub fn add(&self, a: &[Term], b: &[Term]) -> Vector {
        self.add_mul(a, b, 1, &Monomial::ONE)
    }

    pub fn sub(&self, a: &[Term], b: &[Term]) -> Vector {
        self.add_mul(a, b, self.p() - 1, &Monomial::ONE)
    }

    pub fn scale(&self, a: &[Term], coef: u32) -> Vector {
        let p = self.p();
        let coef = coef % p;
        if coef == 0 {
            return vec![];
        }
        a.iter().map(|t| Term { k: field::mul(t.k, coef, p), ..*t }).collect()
    }

    pub fn monic(&self, a: &[Term]) -> Vector {
        match a.first() {
            None => vec![],
            Some(t) => self.scale(a, self.ring.inv(t.k)),
        }
    }

    /// Scaled degree of a homogeneous vector (of its leading term).
    pub fn degree(&self, v: &[Term]) -> Option<i64> {
        v.first().map(|t| self.term_deg(t))
    }

    pub fn is_homogeneous(&self, v: &[Term]) -> bool {
        match v.first() {
            None => true,
            Some(t) => {
                let d = self.term_deg(t);
                v.iter().all(|s| self.term_deg(s) == d)
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Elem {
    v: Vector,
    cof: Vector,
    lt: Monomial,
    comp: u32,
    mask: u32,
    sugar: i64,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: i64,
}

/// A Gröbner basis of a submodule, optionally remembering how each element is
/// expressed in the original generators.
#[derive(Clone, Debug)]
pub struct Gb {
    pub order: Arc<ModOrder>,
    elems: Vec<Elem>,
    track: bool,
    cof_order: Option<Arc<ModOrder>>,
    by_comp: Vec<Vec<usize>>,
}

/// Configuration knobs for a Buchberger run.
#[derive(Clone, Copy, Debug)]
pub struct GbOptions {
    pub degree_cap: u32,
    pub track: bool,
    pub product_criterion: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { degree_cap: DEFAULT_DEGREE_CAP, track: false, product_criterion: false }
    }
}

struct Reducers<'a> {
    elems: &'a [Elem],
    by_comp: &'a [Vec<usize>],
}

impl<'a> Reducers<'a> {
    #[inline]
    fn find(&self, m: &Monomial, c: u32) -> Option<usize> {
        let mask = m.mask();
        for &i in self.by_comp.get(c as usize)? {
            let e = &self.elems[i];
            if e.mask & !mask == 0 && e.lt.divides(m) {
                return Some(i);
            }
        }
        None
    }
}

/// Reduce `v` completely; returns (remainder, accumulated quotient cofactors).
fn reduce_full(
    order: &ModOrder,
    red: &Reducers,
    cof_order: Option<&ModOrder>,
    mut v: Vector,
    mut cof: Vector,
    top_only: bool,
) -> (Vector, Vector) {
    let p = order.p();
    let mut rem: Vector = Vec::new();
    let mut start = 0;
    while start < v.len() {
        let t = v[start];
        match red.find(&t.m, t.c) {
            Some(i) => {
                let e = &red.elems[i];
                let q = e.lt.quotient_of(&t.m);
                let coef = field::neg(t.k, p);
                v = order.add_mul(&v[start..], &e.v, coef, &q);
                start = 0;
                if let Some(co) = cof_order {
                    cof = co.add_mul(&cof, &e.cof, coef, &q);
                }
            }
            None => {
                if top_only {
                    rem.extend_from_slice(&v[start..]);
                    return (rem, cof);
                }
                rem.push(t);
                start += 1;
            }
        }
    }
    (rem, cof)
}

impl Gb {
    /// Run Buchberger on `gens`.
    pub fn compute(order: Arc<ModOrder>, gens: &[Vector], opts: GbOptions) -> Result<Gb> {
        let p = order.p();
        let rank = order.rank();
        let cof_order = if opts.track {
            let degs: Vec<i64> = gens.iter().map(|g| order.degree(g).unwrap_or(0)).collect();
            Some(Arc::new(ModOrder::new(&order.ring, degs)))
        } else {
            None
        };
        let mut elems: Vec<Elem> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); rank];
        let mut pairs: Vec<Pair> = Vec::new();

        // pending input generators ordered by sugar
        let sugar_of = |v: &Vector| -> i64 { v.iter().map(|t| order.term_deg(t)).max().unwrap_or(0) };
        let mut inputs: Vec<(i64, usize)> =
            gens.iter().enumerate().filter(|(_, g)| !g.is_empty()).map(|(i, g)| (sugar_of(g), i)).collect();
        inputs.sort();
        let mut next_input = 0;

        loop {
            // choose the next item: smallest sugar, inputs first on ties
            let best_pair = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.sugar.cmp(&b.sugar).then_with(|| {
                        order.cmp_mc(&a.lcm, elems[a.i].comp, &b.lcm, elems[b.i].comp)
                    })
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
                })
                .map(|(idx, pr)| (idx, pr.sugar));
            let take_input = match (next_input < inputs.len(), best_pair) {
                (false, None) => break,
                (true, None) => true,
                (false, Some(_)) => false,
                (true, Some((_, s))) => inputs[next_input].0 <= s,
            };
            let (h, hcof, sugar) = if take_input {
                let (s, gi) = inputs[next_input];
                next_input += 1;
                let cof = if opts.track {
                    vec![Term { m: Monomial::ONE, c: gi as u32, k: 1 }]
                } else {
                    vec![]
                };
                (gens[gi].clone(), cof, s)
            } else {
                let (idx, _) = best_pair.unwrap();
                let pr = pairs.swap_remove(idx);
                if pr.lcm.total() > opts.degree_cap {
                    return Err(Error::DegreeBlowup { cap: opts.degree_cap });
                }
                let (a, b) = (&elems[pr.i], &elems[pr.j]);
                let qa = a.lt.quotient_of(&pr.lcm);
                let qb = b.lt.quotient_of(&pr.lcm);
                let s = order.add_mul(&order.add_mul(&[], &a.v, 1, &qa), &b.v, p - 1, &qb);
                let cof = match &cof_order {
                    Some(co) => co.add_mul(&co.add_mul(&[], &a.cof, 1, &qa), &b.cof, p - 1, &qb),
                    None => vec![],
                };
                (s, cof, pr.sugar)
            };
            let red = Reducers { elems: &elems, by_comp: &by_comp };
            let (h, hcof) = reduce_full(&order, &red, cof_order.as_deref(), h, hcof, false);
            if h.is_empty() {
                continue;
            }
            let inv = order.ring.inv(h[0].k);
            let h = order.scale(&h, inv);
            let hcof = cof_order.as_ref().map(|co| co.scale(&hcof, inv)).unwrap_or_default();
            let lt = h[0].m;
            let comp = h[0].c;
            let new_idx = elems.len();
            let sugar = sugar.max(sugar_of(&h));
            elems.push(Elem { mask: lt.mask(), v: h, cof: hcof, lt, comp, sugar });
            active.push(true);

            // Gebauer–Möller update
            pairs.retain(|pr| {
                if elems[pr.i].comp != comp || !lt.divides(&pr.lcm) {
                    return true;
                }
                let li = elems[pr.i].lt.lcm(&lt);
                let lj = elems[pr.j].lt.lcm(&lt);
                li == pr.lcm || lj == pr.lcm
            });
            let mut cand: Vec<(usize, Monomial, bool)> = by_comp[comp as usize]
                .iter()
                .filter(|&&j| active[j])
                .map(|&j| {
                    let l = elems[j].lt.lcm(&lt);
                    (j, l, elems[j].lt.coprime(&lt))
                })
                .collect();
            // criterion M: drop pairs whose lcm is properly divisible by another candidate's lcm
            let snapshot = cand.clone();
            cand.retain(|(_, l, _)| !snapshot.iter().any(|(_, l2, _)| l2 != l && l2.divides(l)));
            // criterion F with the product criterion: one representative per lcm
            cand.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
            let mut kept: Vec<(usize, Monomial)> = Vec::new();
            let mut idx = 0;
            while idx < cand.len() {
                let l = cand[idx].1;
                let mut end = idx;
                let mut any_coprime = false;
                while end < cand.len() && cand[end].1 == l {
                    any_coprime |= cand[end].2;
                    end += 1;
                }
                if !(opts.product_criterion && any_coprime) {
                    kept.push((cand[idx].0, l));
                }
                idx = end;
            }
            for (j, l) in kept {
                let s = (elems[j].sugar + order.mono_deg(&elems[j].lt.quotient_of(&l)))
                    .max(sugar + order.mono_deg(&lt.quotient_of(&l)));
                pairs.push(Pair { i: j, j: new_idx, lcm: l, sugar: s });
            }
            // retire elements whose leading term is now redundant
            let bc = &mut by_comp[comp as usize];
            for &j in bc.iter() {
                if active[j] && lt.divides(&elems[j].lt) {
                    active[j] = false;
                }
            }
            bc.retain(|&j| active[j]);
            bc.push(new_idx);
        }

        // interreduce the active elements into the reduced basis
        let mut keep: Vec<Elem> = elems.into_iter().zip(active).filter(|(_, a)| *a).map(|(e, _)| e).collect();
        keep.sort_by(|a, b| order.cmp_mc(&a.lt, a.comp, &b.lt, b.comp));
        let mut gb = Gb { order: order.clone(), elems: Vec::new(), track: opts.track, cof_order, by_comp: vec![Vec::new(); rank] };
        let all = keep.clone();
        let mut all_by_comp: Vec<Vec<usize>> = vec![Vec::new(); rank];
        for (i, e) in all.iter().enumerate() {
            all_by_comp[e.comp as usize].push(i);
        }
        // a tail term is smaller than its own leading term, so no element reduces itself
        let red = Reducers { elems: &all, by_comp: &all_by_comp };
        for e in keep.into_iter() {
            let head = e.v[0];
            let tail = e.v[1..].to_vec();
            let (rem, cof) = reduce_full(&order, &red, gb.cof_order.as_deref(), tail, e.cof.clone(), false);
            let mut v = vec![head];
            v.extend(rem);
            let idx = gb.elems.len();
            gb.by_comp[e.comp as usize].push(idx);
            gb.elems.push(Elem { v, cof, ..e });
        }
        Ok(gb)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Vector> {
        self.elems.iter().map(|e| &e.v)
    }

    pub fn element(&self, i: usize) -> &Vector {
        &self.elems[i].v
    }

    /// Expression of basis element `i` in the input generators (tracked runs only).
    pub fn cofactor(&self, i: usize) -> &Vector {
        assert!(self.track);
        &self.elems[i].cof
    }

    pub fn leading(&self) -> impl Iterator<Item = (Monomial, u32)> + '_ {
        self.elems.iter().map(|e| (e.lt, e.comp))
    }

    pub fn reduce(&self, v: Vector) -> Vector {
        let red = Reducers { elems: &self.elems, by_comp: &self.by_comp };
        reduce_full(&self.order, &red, None, v, vec![], false).0
    }

    pub fn contains(&self, v: &[Term]) -> bool {
        let red = Reducers { elems: &self.elems, by_comp: &self.by_comp };
        reduce_full(&self.order, &red, None, v.to_vec(), vec![], true).0.is_empty()
    }

    /// Write `v = rem + Σ cof_j · gen_j`; returns `(rem, cof)`.
    pub fn reduce_with_cofactors(&self, v: Vector) -> (Vector, Vector) {
        assert!(self.track, "cofactors requested from an untracked basis");
        let red = Reducers { elems: &self.elems, by_comp: &self.by_comp };
        let (rem, cof) = reduce_full(&self.order, &red, self.cof_order.as_deref(), v, vec![], false);
        let co = self.cof_order.as_ref().unwrap();
        (rem, co.scale(&cof, self.order.p() - 1))
    }

    /// `Some(cof)` with `v = Σ cof_j · gen_j` when `v` lies in the submodule.
    pub fn lift(&self, v: Vector) -> Option<Vector> {
        let (rem, cof) = self.reduce_with_cofactors(v);
        rem.is_empty().then_some(cof)
    }

    pub fn cof_order(&self) -> Option<&Arc<ModOrder>> {
        self.cof_order.as_ref()
    }
}

/// Generators of the module of syzygies among `cols` (vectors in the free
/// module of `order`), living in a free module with generator degrees `col_deg`.
pub fn syzygies(order: &Arc<ModOrder>, cols: &[Vector], col_deg: &[i64], cap: u32) -> Result<Vec<Vector>> {
    let r = order.rank();
    let m = cols.len();
    let mut gen_deg = order.gen_deg.clone();
    gen_deg.extend_from_slice(col_deg);
    let mut block = order.block.clone();
    block.extend(std::iter::repeat_n(order.block.iter().copied().max().unwrap_or(0) + 1, m));
    let aug = Arc::new(
        ModOrder::new(&order.ring, gen_deg).with_blocks(block).with_kind(order.kind, order.prec.clone()),
    );
    let gens: Vec<Vector> = cols
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut w = v.clone();
            w.push(Term { m: Monomial::ONE, c: (r + j) as u32, k: 1 });
            aug.normalize(w)
        })
        .collect();
    let gb = Gb::compute(aug, &gens, GbOptions { degree_cap: cap, ..Default::default() })?;
    let out_order = ModOrder::new(&order.ring, col_deg.to_vec()).with_kind(order.kind, order.prec.clone());
    let mut out = Vec::new();
    for v in gb.elements() {
        if (v[0].c as usize) >= r {
            debug_assert!(v.iter().all(|t| (t.c as usize) >= r));
            let w: Vector = v.iter().map(|t| Term { c: t.c - r as u32, ..*t }).collect();
            out.push(out_order.normalize(w));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_in, Ring};

    fn vec_of(order: &ModOrder, entries: &[&str]) -> Vector {
        let mut terms = Vec::new();
        for (c, e) in entries.iter().enumerate() {
            let f = parse_in(e, &order.ring).unwrap();
            terms.extend(f.terms().iter().map(|&(m, k)| Term { m, c: c as u32, k }));
        }
        order.normalize(terms)
    }

    #[test]
    fn koszul_syzygy() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        let s = r.scale();
        let o = Arc::new(ModOrder::new(&r, vec![0]));
        let cols = vec![vec_of(&o, &["x"]), vec_of(&o, &["y"])];
        let syz = syzygies(&o, &cols, &[s, s], 40).unwrap();
        assert_eq!(syz.len(), 1);
        let out = ModOrder::new(&r, vec![s, s]);
        let expect = vec_of(&out, &["y", "-x"]);
        let got = out.monic(&syz[0]);
        assert_eq!(got, out.monic(&expect));
    }

    #[test]
    fn syzygies_annihilate() {
        let r = Ring::new(7, &["x", "y", "z"]).unwrap();
        let s = r.scale();
        let o = Arc::new(ModOrder::new(&r, vec![0, 0]));
        let cols = vec![
            vec_of(&o, &["x^2", "y*z"]),
            vec_of(&o, &["x*y", "z^2"]),
            vec_of(&o, &["y^2", "x*z"]),
        ];
        let syz = syzygies(&o, &cols, &[2 * s, 2 * s, 2 * s], 40).unwrap();
        assert!(!syz.is_empty());
        for v in &syz {
            let mut acc: Vector = vec![];
            for t in v {
                acc = o.add_mul(&acc, &cols[t.c as usize], t.k, &t.m);
            }
            assert!(acc.is_empty());
        }
    }

    #[test]
    fn lift_recovers_combination() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let o = Arc::new(ModOrder::new(&r, vec![0]));
        let gens = vec![vec_of(&o, &["x^2+y^2"]), vec_of(&o, &["x*y"])];
        let gb = Gb::compute(o.clone(), &gens, GbOptions { track: true, ..Default::default() }).unwrap();
        let target = vec_of(&o, &["y^3"]);
        let cof = gb.lift(target.clone()).unwrap();
        let mut acc: Vector = vec![];
        for t in &cof {
            acc = o.add_mul(&acc, &gens[t.c as usize], t.k, &t.m);
        }
        assert_eq!(acc, target);
        assert!(gb.lift(vec_of(&o, &["x"])).is_none());
    }

    #[test]
    fn degree_cap_reported() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        let o = Arc::new(ModOrder::new(&r, vec![0]));
        let gens = vec![vec_of(&o, &["x^3+y^3"]), vec_of(&o, &["x^2*y"])];
        let res = Gb::compute(o, &gens, GbOptions { degree_cap: 2, ..Default::default() });
        assert_eq!(res.err(), Some(Error::DegreeBlowup { cap: 2 }));
    }
}
