use super::*;
use crate::arith::{parse_in, Ring};

fn vecs(order: &ModOrder, entries: &[&str]) -> Vector {
    let mut terms = Vec::new();
    for (c, e) in entries.iter().enumerate() {
        let f = parse_in(e, &order.ring).unwrap();
        terms.extend(f.terms().iter().map(|&(m, k)| Term { m, c: c as u32, k }));
    }
    order.normalize(terms)
}

fn ring2(p: u64) -> RingRef {
    Ring::new(p, &["x", "y"]).unwrap()
}

/// `S^cols → S` given by a row of polynomials of degree one.
fn row_map(r: &RingRef, entries: &[&str]) -> ModuleMap {
    let s = r.scale();
    let src = PresentedModule::free(r, vec![s; entries.len()]);
    let tgt = PresentedModule::free(r, vec![0]);
    let imgs = entries.iter().map(|e| vecs(tgt.order(), &[e])).collect();
    ModuleMap::new(src, tgt, imgs, 0).unwrap()
}

fn cyclic(r: &RingRef, rels: &[&str]) -> Module {
    let o = free_order(r, vec![0]);
    PresentedModule::new(r, vec![0], rels.iter().map(|g| vecs(&o, &[g])).collect()).unwrap()
}

#[test]
fn syzygy_examples() {
    let r = ring2(5);
    let s = r.scale();
    let o = free_order(&r, vec![0]);
    let syz = syzygies(&o, &[vecs(&o, &["x"]), vecs(&o, &["y"])], &[s, s], 40).unwrap();
    assert_eq!(syz.len(), 1);
    let out = free_order(&r, vec![s, s]);
    assert_eq!(out.monic(&syz[0]), out.monic(&vecs(&out, &["y", "-x"])));
    assert!(syzygies(&o, &[vecs(&o, &["x"])], &[s], 40).unwrap().is_empty());
    let syz = syzygies(&o, &[vecs(&o, &["x"]), vecs(&o, &["x"])], &[s, s], 40).unwrap();
    assert_eq!(syz.len(), 1);
    assert_eq!(out.monic(&syz[0]), out.monic(&vecs(&out, &["1", "-1"])));
}

#[test]
fn kernel_examples() {
    let r = ring2(5);
    let s = r.scale();
    let src = PresentedModule::free(&r, vec![0, s]);
    let zero = ModuleMap::zero(&src, &PresentedModule::free(&r, vec![0]), 0);
    let (k, inc) = zero.kernel().unwrap();
    assert_eq!(k.rank(), 2);
    assert!(inc.is_surjective().unwrap());
    assert!(row_map(&r, &["x"]).kernel().unwrap().0.is_zero().unwrap());
    let (k, inc) = row_map(&r, &["x", "y"]).kernel().unwrap();
    assert_eq!(k.rank(), 1);
    assert!(k.relations().is_empty());
    assert_eq!(k.degrees(), &[2 * s]);
    let o = inc.target.order();
    assert_eq!(o.monic(&inc.images()[0]), o.monic(&vecs(o, &["y", "-x"])));
}

#[test]
fn image_coker_examples() {
    let r = ring2(3);
    let m = cyclic(&r, &["x^2"]);
    let id = ModuleMap::identity(&m);
    let (img, inc) = id.image().unwrap();
    assert!(inc.is_surjective().unwrap() && inc.is_injective().unwrap());
    assert_eq!(img.graded_piece_dim(r.scale()).unwrap(), 2);
    assert!(id.cokernel().unwrap().0.is_zero().unwrap());
    let (c, _) = row_map(&r, &["x"]).cokernel().unwrap();
    let s = r.scale();
    assert_eq!((0..4).map(|t| c.graded_piece_dim(t * s).unwrap()).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    let (c, _) = row_map(&r, &["x", "y"]).cokernel().unwrap();
    assert_eq!(c.graded_piece_dim(0).unwrap(), 1);
    assert_eq!(c.graded_piece_dim(s).unwrap(), 0);
}

#[test]
fn hom_examples() {
    let r = ring2(5);
    let s = r.scale();
    let base = PresentedModule::free(&r, vec![0]);
    let h = hom_module(&cyclic(&r, &["x*y+y^2"]), &base).unwrap();
    assert!(h.module.is_zero().unwrap());
    let h = hom_module(&base, &PresentedModule::free(&r, vec![s])).unwrap();
    assert_eq!(h.module.rank(), 1);
    assert_eq!(h.module.degrees(), &[s]);
    assert!(h.module.relations().is_empty());
    // the maximal ideal, presented by its Koszul relation
    let (mm, _) = row_map(&r, &["x", "y"]).image().unwrap();
    let h = hom_module(&mm, &base).unwrap();
    assert_eq!(h.module.rank(), 1);
    assert_eq!(h.module.degrees(), &[0]);
    assert!(h.module.relations().is_empty());
}

#[test]
fn reflexive_examples() {
    let r = ring2(3);
    let s = r.scale();
    let base = PresentedModule::free(&r, vec![0]);
    let free = PresentedModule::free(&r, vec![0, s]);
    let (_, can) = reflexivize(&free, &base).unwrap();
    assert!(can.is_injective().unwrap() && can.is_surjective().unwrap());
    let (mm, _) = row_map(&r, &["x", "y"]).image().unwrap();
    let (bb, can) = reflexivize(&mm, &base).unwrap();
    assert_eq!(bb.rank(), 1);
    assert!(can.is_injective().unwrap());
    assert!(!can.is_surjective().unwrap());
    let (c, _) = can.cokernel().unwrap();
    assert_eq!(c.graded_piece_dim(0).unwrap(), 1);
    assert_eq!(c.graded_piece_dim(s).unwrap(), 0);
    let (bb, _) = reflexivize(&cyclic(&r, &["x"]), &base).unwrap();
    assert!(bb.is_zero().unwrap());
}

#[test]
fn torsion_examples() {
    let r = Ring::new(5, &["x"]).unwrap();
    let base = PresentedModule::free(&r, vec![0]);
    let (t, _) = torsion_submodule(&base, &base, true).unwrap();
    assert!(t.is_zero().unwrap());
    let q = cyclic(&r, &["x"]);
    let (_, inc) = torsion_submodule(&q, &base, true).unwrap();
    assert!(inc.is_surjective().unwrap());
    assert_eq!(torsion_submodule(&q, &base, false).err(), Some(Error::NotDomain));
    let r2 = ring2(5);
    let o = free_order(&r2, vec![0, 0]);
    let m = PresentedModule::new(&r2, vec![0, 0], vec![vecs(&o, &["0", "x"])]).unwrap();
    let base2 = PresentedModule::free(&r2, vec![0]);
    let (t, inc) = torsion_submodule(&m, &base2, true).unwrap();
    assert_eq!(t.rank(), 1);
    assert_eq!(inc.images()[0], unit(1));
    let (t2, inc2) = torsion_by_saturation(&m, 0).unwrap();
    assert_eq!(t2.rank(), 1);
    assert_eq!(inc2.images()[0], unit(1));
}

#[test]
fn resolution_examples() {
    let r = ring2(5);
    let s = r.scale();
    let res = free_resolution(&cyclic(&r, &["x", "y"]), 3).unwrap();
    assert_eq!(res.length(), 2);
    assert_eq!(res.degrees(1), &[s, s]);
    assert_eq!(res.degrees(2), &[2 * s]);
    assert!(res.is_complex());
    assert_eq!(free_resolution(&PresentedModule::free(&r, vec![0, 0]), 3).unwrap().length(), 0);
    let res = free_resolution(&cyclic(&r, &["x^3+y^3"]), 3).unwrap();
    assert_eq!(res.length(), 1);
    assert_eq!(res.degrees(1), &[3 * s]);
}

#[test]
fn ext_examples() {
    let r = ring2(3);
    let s = r.scale();
    let e = ext_group(&cyclic(&r, &["x", "y"]), 2, 0).unwrap();
    assert_eq!(e.graded_piece_dim(-2 * s).unwrap(), 1);
    assert_eq!(e.graded_piece_dim(-s).unwrap(), 0);
    assert_eq!(e.rank(), 1);
    assert!(ext_group(&cyclic(&r, &["x", "y"]), 1, 0).unwrap().is_zero().unwrap());
    let base = PresentedModule::free(&r, vec![0]);
    let e0 = ext_group(&base, 0, 0).unwrap();
    assert_eq!(e0.rank(), 1);
    assert!(e0.relations().is_empty());
    let r1 = Ring::new(3, &["x"]).unwrap();
    let e1 = ext_group(&cyclic(&r1, &["x"]), 1, 0).unwrap();
    assert_eq!(e1.degrees(), &[-r1.scale()]);
    assert_eq!(e1.graded_piece_dim(-r1.scale()).unwrap(), 1);
    assert_eq!(e1.graded_piece_dim(0).unwrap(), 0);
}

#[test]
fn ext_induced_examples() {
    let r = Ring::new(5, &["x"]).unwrap();
    let base = PresentedModule::free(&r, vec![0]);
    let id = ModuleMap::identity(&base);
    let e = ext_induced(&id, 0, 0).unwrap();
    assert!(e.equals(&ModuleMap::identity(&e.source)).unwrap());
    let z = ModuleMap::zero(&base, &base, 0);
    assert!(ext_induced(&z, 0, 0).unwrap().is_zero().unwrap());
    // multiplication by x from S(-1) to S
    let s1 = PresentedModule::free(&r, vec![r.scale()]);
    let mx = ModuleMap::new(s1, base.clone(), vec![vecs(base.order(), &["x"])], 0).unwrap();
    let e = ext_induced(&mx, 0, 0).unwrap();
    assert_eq!(e.images().len(), 1);
    let o = e.target.order();
    assert_eq!(e.images()[0], vecs(o, &["x"]));
    let c = ext_cokernel(&mx, 0, 0).unwrap();
    assert!(!c.zero);
    assert!(c.finite_length);
    assert!(ext_cokernel(&id, 0, 0).unwrap().zero);
}

#[test]
fn surjective_injective_examples() {
    let r = ring2(7);
    let s = r.scale();
    let base = PresentedModule::free(&r, vec![0]);
    let id = ModuleMap::identity(&base);
    assert!(id.is_injective().unwrap() && id.is_surjective().unwrap());
    let mx = ModuleMap::new(PresentedModule::free(&r, vec![s]), base.clone(), vec![vecs(base.order(), &["x"])], 0).unwrap();
    assert!(mx.is_injective().unwrap());
    assert!(!mx.is_surjective().unwrap());
    let (mm, inc) = row_map(&r, &["x", "y"]).image().unwrap();
    let src = PresentedModule::free(&r, vec![s, s]);
    let onto = ModuleMap::new(src, mm.clone(), vec![unit(0), unit(1)], 0).unwrap();
    assert!(onto.is_surjective().unwrap());
    assert!(!onto.is_injective().unwrap());
    assert!(inc.is_injective().unwrap());
}

#[test]
fn invert_examples() {
    let r = ring2(7);
    let s = r.scale();
    let m = PresentedModule::free(&r, vec![s]);
    let id = ModuleMap::identity(&m);
    assert!(id.invert_iso().unwrap().equals(&id).unwrap());
    let three = ModuleMap::new(m.clone(), m.clone(), vec![vec![Term { m: Monomial::ONE, c: 0, k: 3 }]], 0).unwrap();
    let inv = three.invert_iso().unwrap();
    assert_eq!(inv.images()[0], vec![Term { m: Monomial::ONE, c: 0, k: 5 }]);
    let mx = ModuleMap::new(m.clone(), PresentedModule::free(&r, vec![0]), vec![vecs(&free_order(&r, vec![0]), &["x"])], 0).unwrap();
    assert!(matches!(mx.invert_iso(), Err(Error::NotIso(_))));
}

#[test]
fn graded_piece_examples() {
    let r = Ring::new(5, &["x"]).unwrap();
    let s = r.scale();
    assert_eq!(PresentedModule::free(&r, vec![s]).graded_piece_dim(3 * s).unwrap(), 1);
    let r2 = ring2(5);
    let q = cyclic(&r2, &["x", "y"]);
    assert_eq!(q.graded_piece_dim(0).unwrap(), 1);
    assert_eq!(q.graded_piece_dim(s).unwrap(), 0);
    let omega = PresentedModule::free(&r2, vec![s, s]);
    assert_eq!(omega.graded_piece_dim(s).unwrap(), 2);
}

#[test]
fn trim_removes_unit_generators() {
    let r = ring2(5);
    let s = r.scale();
    let o = free_order(&r, vec![s, s, 2 * s]);
    let m = PresentedModule::new(&r, vec![s, s, 2 * s], vec![vecs(&o, &["x", "y", "-1"]), vecs(&o, &["y", "0", "0"])]).unwrap();
    let (t, to, from) = m.trim().unwrap();
    assert_eq!(t.rank(), 2);
    to.certify().unwrap();
    from.certify().unwrap();
    assert!(to.compose(&from).unwrap().equals(&ModuleMap::identity(&t)).unwrap());
    assert!(from.compose(&to).unwrap().equals(&ModuleMap::identity(&m)).unwrap());
}

#[test]
fn generic_rank_examples() {
    let r = ring2(3);
    assert_eq!(cyclic(&r, &["x"]).generic_rank().unwrap(), 0);
    assert_eq!(PresentedModule::free(&r, vec![0, 0]).generic_rank().unwrap(), 2);
    let (mm, _) = row_map(&r, &["x", "y"]).image().unwrap();
    assert_eq!(mm.generic_rank().unwrap(), 1);
}

#[test]
fn degree_zero_map_search() {
    let r = Ring::new(3, &["x"]).unwrap();
    let s = r.scale();
    let base = PresentedModule::free(&r, vec![0]);
    let src = PresentedModule::free(&r, vec![0, s]);
    let t = find_degree_zero_map(&src, &base, &[(0, unit(0))]).unwrap().unwrap();
    t.certify().unwrap();
    // S/(x) has no degree-zero map to S sending 1 to 1
    let q = cyclic(&r, &["x"]);
    assert!(find_degree_zero_map(&q, &base, &[(0, unit(0))]).unwrap().is_none());
}
