use super::*;
use crate::arith::{parse_in, Ring, RingRef};
use crate::frob::MultiDegree;
use crate::groebner::{monomials_of_degree, Term};
use crate::modalg::unit;

fn datum(text: &str, vars: &[&str], p: u64) -> DeRhamDatum {
    let ring = Ring::new(p, vars).unwrap();
    DeRhamDatum::new(&parse_in(text, &ring).unwrap()).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn kaehler_presentations() {
    let ring = Ring::new(5, &["x", "y", "z", "w"]).unwrap();
    let f = parse_in("x*y-z*w", &ring).unwrap();
    let m = kaehler(&f, 1).unwrap();
    assert_eq!(m.rank(), 4);
    // f·dx_j for each j plus df
    assert_eq!(m.relations().len(), 5);
    assert_eq!(kaehler(&f, 5).unwrap().rank(), 0);
    let s = kaehler(&parse_in("0", &ring).unwrap(), 1).unwrap();
    assert_eq!(s.rank(), 4);
    assert!(s.relations().is_empty());
}

#[test]
fn differential_kills_pth_powers() {
    let d = datum("0", &["x"], 3);
    let lvl = d.level(0, 1, &ClassSel::zero(1)).unwrap();
    let next = d.level(1, 1, &ClassSel::zero(1)).unwrap();
    let dmap = de_rham_d(&d, 0, 1, &ClassSel::zero(1)).unwrap();
    let xp = lvl.from_underlying(&[(vec![3], 0, 1)]).unwrap();
    assert!(dmap.apply(&xp).is_empty());
    let one = ClassSel::Class(vec![1]);
    let dmap = de_rham_d(&d, 0, 1, &one).unwrap();
    let src = d.level(0, 1, &one).unwrap();
    let tgt = d.level(1, 1, &one).unwrap();
    let x = src.from_underlying(&[(vec![1], 0, 1)]).unwrap();
    let dx = tgt.from_underlying(&[(vec![1], 1, 1)]).unwrap();
    assert_eq!(dmap.apply(&x), dx);
    assert_eq!(next.module.rank(), 1);
}

#[test]
fn d_squared_vanishes_on_fermat_cubic() {
    let d = datum("x^3+y^3+z^3", &["x", "y", "z"], 7);
    for c in d.hypersurface().class_reps(7).into_iter().take(6) {
        let sel = ClassSel::Class(c);
        let d0 = de_rham_d(&d, 0, 1, &sel).unwrap();
        let d1 = de_rham_d(&d, 1, 1, &sel).unwrap();
        assert!(d1.compose(&d0).unwrap().is_zero().unwrap());
    }
    d.certify_complex().unwrap();
    datum("x*y-z*w", &["x", "y", "z", "w"], 3).certify_complex().unwrap();
}

#[test]
fn boundaries_and_cycles_of_the_affine_line_in_characteristic_two() {
    let d = datum("0", &["x"], 2);
    // x^{2k} dx = x^{2k+1} dlog x lives in the odd class
    let odd = boundaries_cycles(&d, 1, 1, &ClassSel::Class(vec![1])).unwrap();
    assert!(odd.b_inc.is_surjective().unwrap());
    assert!(odd.z_inc.is_surjective().unwrap());
    let even = boundaries_cycles(&d, 1, 1, &ClassSel::Class(vec![0])).unwrap();
    assert_eq!(even.b.rank(), 0);
    assert!(even.z_inc.is_surjective().unwrap());
    let zero = boundaries_cycles(&d, 0, 1, &ClassSel::Class(vec![1])).unwrap();
    assert_eq!(zero.b.rank(), 0);
}

/// `dim Ω^i_t` of affine `n`-space (standard grading).
fn omega_dim(n: usize, i: usize, t: i64) -> usize {
    if t < i as i64 {
        return 0;
    }
    binomial(n, i) * monomials_of_degree(&vec![1; n], t - i as i64).len()
}

#[test]
fn regular_cartier_isomorphism_with_dimension_oracle() {
    for (n, p) in [(1usize, 2u64), (2, 2), (2, 3)] {
        let vars: Vec<&str> = ["x", "y", "z"][..n].to_vec();
        let d = datum("0", &vars, p);
        let scale = d.space.ring().scale();
        for i in 0..=n {
            let ic = inverse_cartier(&d, i).unwrap();
            assert!(ic.map.is_injective().unwrap(), "n={n} p={p} i={i}");
            assert!(ic.map.is_surjective().unwrap(), "n={n} p={p} i={i}");
            for t in 0..=(2 * n as i64 * p as i64) {
                assert_eq!(ic.quotient.graded_piece_dim(t * scale).unwrap(), omega_dim(n, i, t), "n={n} p={p} i={i} t={t}");
            }
        }
    }
}

#[test]
fn inverse_cartier_on_generators() {
    let d = datum("0", &["x"], 2);
    let ic = inverse_cartier(&d, 1).unwrap();
    // C^{-1}(dx) = x dx = x^2 dlog x, and C^{-1}(x dx) = x^3 dx = x^4 dlog x
    let expected = ic.cycles.level.from_underlying(&[(vec![2], 1, 1)]).unwrap();
    assert_eq!(ic.raw_images[0], expected);
    let x_dx = ic.omega.from_underlying(&[(vec![2], 1, 1)]).unwrap();
    let img = combine_images(&ic.raw_images, &x_dx, &ic.cycles.level.module);
    assert_eq!(img, ic.cycles.level.from_underlying(&[(vec![4], 1, 1)]).unwrap());
    let ic0 = inverse_cartier(&d, 0).unwrap();
    assert_eq!(ic0.raw_images[0], unit(0));
}

fn combine_images(images: &[crate::groebner::Vector], v: &[Term], target: &crate::modalg::Module) -> crate::groebner::Vector {
    crate::modalg::combine(target.order(), images, v)
}

#[test]
fn reflexive_forms_on_affine_space_split() {
    let d = datum("0", &["x", "y"], 3);
    for i in 0..=2 {
        let rf = reflexive_forms(&d, i).unwrap();
        assert!(rf.split_identity().unwrap());
        assert!(rf.c.is_surjective().unwrap());
    }
}

#[test]
fn reflexive_forms_on_the_quadric_cone() {
    let d = datum("x*y-z*w", &["x", "y", "z", "w"], 3);
    let rf = reflexive_forms(&d, 1).unwrap();
    assert!(rf.split_identity().unwrap());
    assert!(rf.c.is_surjective().unwrap());
    // BΩ^1 ⊆ BΩ^[1]
    let lifter = crate::modalg::Lifter::for_inclusion(&rf.b_inc).unwrap();
    assert!(rf.b_plain.iter().all(|v| lifter.lift(v).is_some()));
    let rf0 = reflexive_forms(&d, 0).unwrap();
    assert_eq!(rf0.b.rank(), 0);
    assert!(rf0.split_identity().unwrap());
}

#[test]
fn iterated_cartier_on_the_affine_line() {
    let d = datum("0", &["x"], 2);
    let pk = iterate_cartier(&d, 1, 2).unwrap();
    assert_eq!(pk.len(), 2);
    let two = &pk[1];
    assert!(two.c.is_surjective().unwrap());
    assert_eq!(two.chain.len(), 1);
    let scale = d.space.ring().scale();
    let (zb, _) = crate::modalg::quotient(&two.z, &two.c.kernel_generators().unwrap()).unwrap();
    for t in 0..=8 {
        assert_eq!(zb.graded_piece_dim(t * scale).unwrap(), omega_dim(1, 1, t), "t={t}");
    }
    // C_2 ∘ C_2^{-1} = id
    let lifter = crate::modalg::Lifter::for_inclusion(&two.z_inc).unwrap();
    let back: Vec<_> = two.c_inv.images().iter().map(|v| two.c.apply(&lifter.lift(v).unwrap())).collect();
    let id = crate::modalg::ModuleMap::new(two.c.target.clone(), two.c.target.clone(), back, 0).unwrap();
    assert!(id.equals(&crate::modalg::ModuleMap::identity(&two.c.target)).unwrap());
}

#[test]
fn log_forms_ranks_and_differential() {
    let ring = Ring::new(3, &["x", "y", "z"]).unwrap();
    for i in 0..=3 {
        assert_eq!(log_forms(&ring, 0b001, i).unwrap().module.rank(), binomial(3, i));
    }
    let ring = Ring::new(3, &["x"]).unwrap();
    let space = FormSpace::log(&ring, 1, vec![0]).unwrap();
    let rule = d_rule(&space);
    assert!(rule(&[3], 0).is_empty());
    assert_eq!(rule(&[2], 0), vec![(vec![2], 1, 2)]);
}

fn ring_n(n: usize, p: u64) -> RingRef {
    Ring::new(p, &["x", "y", "z"][..n]).unwrap()
}

#[test]
fn hara_sequences_on_the_affine_line() {
    for p in [2u64, 3] {
        let ring = ring_n(1, p);
        let delta = LogDivisor::uniform(&ring, 1, -1, 1).unwrap();
        for i in 0..=1 {
            let pk = hara_package(&ring, 1, &delta, i, 1).unwrap();
            assert!(pk.holds(), "p={p} i={i}");
            assert!(pk.levels[0].ses.euler_balanced());
        }
    }
}

#[test]
fn untwisted_hara_package_is_the_plain_cartier_package() {
    let ring = ring_n(2, 2);
    let delta = LogDivisor::zero(&ring, 0).unwrap();
    let pk = hara_package(&ring, 0, &delta, 1, 2).unwrap();
    assert!(pk.holds());
    let d = DeRhamDatum::new(&parse_in("0", &ring).unwrap()).unwrap();
    let plain = iterate_cartier(&d, 1, 2).unwrap();
    for (a, b) in pk.levels.iter().zip(&plain) {
        let z = &a.zero_class().z;
        for t in 0..=6 {
            let s = ring.scale() * t;
            assert_eq!(z.graded_piece_dim(s).unwrap(), b.z.graded_piece_dim(s).unwrap());
        }
    }
}

#[test]
fn hara_functoriality_ladder_commutes() {
    let ring = ring_n(1, 3);
    let small = LogDivisor::uniform(&ring, 1, -1, 1).unwrap();
    let big = LogDivisor::zero(&ring, 1).unwrap();
    let a = hara_package(&ring, 1, &small, 1, 2).unwrap();
    let b = hara_package(&ring, 1, &big, 1, 2).unwrap();
    let checks = hara_functoriality(&a, &b).unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c.left && c.right));
}

#[test]
fn log_divisor_guards() {
    let ring = ring_n(2, 3);
    assert!(matches!(LogDivisor::new(&ring, 0b01, vec![(0, 0), (1, 1)]), Err(Error::BadSupport)));
    assert!(matches!(LogDivisor::uniform(&ring, 0b11, -1, 9), Err(Error::DenominatorOverflow)));
    let d = LogDivisor::uniform(&ring, 0b11, -1, 2).unwrap();
    assert_eq!(d.floor_times(0), vec![-1, -1]);
    assert_eq!(d.floor_times(1), vec![-1, -1]);
    assert_eq!(d.floor_times(2), vec![-1, -1]);
    let delta = LogDivisor::uniform(&ring, 0b11, -1, 1).unwrap();
    assert!(matches!(hara_package(&ring, 0b01, &delta, 0, 1), Err(Error::BadSupport)));
}

#[test]
fn duality_on_the_plane() {
    let ring = ring_n(2, 3);
    for i in 0..=2 {
        let rep = duality_check(&ring, 0b11, i).unwrap();
        assert!(rep.holds(), "i={i}: {:?}", rep.classes.iter().find(|c| !c.forms_iso || !c.cycles_iso || !c.boundaries_iso));
    }
    let rep = duality_check(&ring_n(2, 2), 0, 2).unwrap();
    assert!(rep.holds());
}

#[test]
fn residue_sequences_on_the_plane() {
    let ring = ring_n(2, 3);
    for which in 1..=4 {
        for i in 0..=2 {
            let rep = residue_sequence(&ring, 0b11, 0, i, which).unwrap();
            assert!(rep.holds(), "which={which} i={i}");
        }
    }
    assert!(matches!(residue_sequence(&ring, 0b10, 0, 1, 1), Err(Error::BadSupport)));
}

#[test]
fn residue_of_dlog() {
    let rule = residue_rule(0, 3);
    assert_eq!(rule(&[0, 1], 0b11), vec![(vec![0, 1], 0b10, 1)]);
    assert_eq!(rule(&[0, 1], 0b10), vec![]);
    assert_eq!(rule(&[1, 1], 0b11), vec![]);
    let rule = residue_rule(1, 3);
    assert_eq!(rule(&[0, 0], 0b11), vec![(vec![0, 0], 0b01, 2)]);
    let _: MultiDegree = vec![];
}
