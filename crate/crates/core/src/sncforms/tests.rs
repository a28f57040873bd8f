use super::*;

fn ctx(p: u64, n: usize) -> SncContext {
    SncContext::new(p, n).unwrap()
}

fn dims(m: &Module, top: i64) -> Vec<usize> {
    let s = m.ring().scale();
    (0..=top).map(|t| m.graded_piece_dim(t * s).unwrap()).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// Number of monomials of degree `t` in the variables of `allowed` that avoid
/// every variable of `forbidden_any` being absent, i.e. divisible by none of
/// the monomials in `killers`: a brute-force count of standard monomials.
fn standard_count(n: usize, t: usize, killers: &[Mask]) -> usize {
    let mut count = 0;
    let mut exps = vec![0usize; n];
    fn rec(k: usize, left: usize, exps: &mut Vec<usize>, killers: &[Mask], count: &mut usize) {
        let n = exps.len();
        if k == n - 1 {
            exps[k] = left;
            let support: Mask = (0..n).filter(|&j| exps[j] > 0).fold(0, |m, j| m | 1 << j);
            if !killers.iter().any(|&s| s & !support == 0) {
                *count += 1;
            }
            return;
        }
        for e in 0..=left {
            exps[k] = e;
            rec(k + 1, left - e, exps, killers, count);
        }
    }
    rec(0, t, &mut exps, killers, &mut count);
    count
}

#[test]
fn index_sets() {
    let c = ctx(3, 3);
    assert_eq!(c.sigma(2), vec![0b011, 0b101, 0b110]);
    assert_eq!(c.pi(1), vec![0b010, 0b100]);
    assert_eq!(c.pi(0), vec![0]);
    assert_eq!(c.complement(0b010), 0b100);
}

#[test]
fn plane_divisor_forms() {
    let c = ctx(3, 2);
    let m = snc_module(&c, SncKind::Divisor, 1).unwrap();
    // (A dx ⊕ A dy)/(y dx, x dy)
    assert_eq!(m.module.relations().len(), 2);
    assert_eq!(dims(&m.module, 6), vec![0, 2, 2, 2, 2, 2, 2]);
    let comp = snc_module(&c, SncKind::Complement, 1).unwrap();
    // k[x] dx
    assert_eq!(dims(&comp.module, 4), vec![0, 1, 1, 1, 1]);
    let e1 = snc_module(&c, SncKind::Component, 1).unwrap();
    assert_eq!(dims(&e1.module, 4), vec![0, 1, 1, 1, 1]);
    // the formula gives zero on the point E_1 ∩ E_1^c
    assert!(snc_module(&c, SncKind::Restricted, 1).unwrap().module.is_zero().unwrap());
}

#[test]
fn split_relation_families_match_the_single_family() {
    for n in 1..=4 {
        let c = ctx(2, n);
        for i in 1..=n {
            let m = snc_module(&c, SncKind::Divisor, i).unwrap();
            let single: Vec<Vector> = m
                .subsets
                .iter()
                .enumerate()
                .map(|(k, &a)| monomial_times(c.full() & !a, k))
                .collect();
            let other = PresentedModule::new(&c.ring, m.module.degrees().to_vec(), single).unwrap();
            let there = ModuleMap::new(m.module.clone(), other.clone(), (0..m.subsets.len()).map(unit).collect(), 0);
            let back = ModuleMap::new(other, m.module.clone(), (0..m.subsets.len()).map(unit).collect(), 0);
            assert!(there.is_ok() && back.is_ok(), "n = {n}, i = {i}");
        }
    }
}

#[test]
fn divisor_forms_match_a_standard_monomial_count() {
    // (Ω^i_E/tors)_t = ⊕_a x_a-free part: monomials of degree t − i not divisible by x_{[n]∖a}
    for (n, p) in [(3usize, 2u64), (3, 3), (4, 5)] {
        let c = ctx(p, n);
        for i in 1..=n.min(3) {
            let m = snc_module(&c, SncKind::Divisor, i).unwrap();
            for t in 0..=SNC_DEGREE_TOP as usize {
                let expected: usize = if t < i {
                    0
                } else {
                    c.sigma(i).iter().map(|&a| standard_count(n, t - i, &[c.full() & !a])).sum()
                };
                assert_eq!(m.module.graded_piece_dim((t as i64) * c.ring.scale()).unwrap(), expected, "n {n} i {i} t {t}");
            }
        }
    }
}

#[test]
fn component_forms_are_free_over_the_hyperplane() {
    let c = ctx(3, 3);
    for i in 1..=2 {
        let m = snc_module(&c, SncKind::Component, i).unwrap();
        for t in 0..=6usize {
            let expected = if t < i { 0 } else { binomial(2, i) * (t - i + 1) };
            assert_eq!(m.module.graded_piece_dim(t as i64 * c.ring.scale()).unwrap(), expected);
        }
    }
}

#[test]
fn phi_on_the_plane() {
    let c = ctx(3, 2);
    let phi = phi_map(&c, 1).unwrap();
    // dx ↦ (dx, 0) and dy ↦ (dy, dȳ)
    assert_eq!(phi.images()[0], unit(0));
    assert_eq!(phi.images()[1], vec![Term { m: Monomial::ONE, c: 1, k: 1 }, Term { m: Monomial::ONE, c: 2, k: 1 }]);
    let psi = psi_map(&c, 1).unwrap();
    assert!(psi.compose(&phi).unwrap().is_zero().unwrap());
}

#[test]
fn spec_examples_hold() {
    for (p, n, i) in [(3u64, 2usize, 1usize), (2, 3, 1), (3, 3, 2)] {
        let cert = verify_snc_exact(&ctx(p, n), i, 6).unwrap();
        assert!(cert.holds(), "{cert:?}");
        assert!(cert.failure.is_none());
    }
}

#[test]
fn top_degree_is_degenerate_but_exact() {
    for n in 1..=3 {
        let c = ctx(5, n);
        let cert = verify_snc_exact(&c, n, 6).unwrap();
        assert!(cert.holds());
        // Ω^n_E/tors is zero: every dx_{[n]} is killed by x_∅ = 1
        assert!(snc_module(&c, SncKind::Divisor, n).unwrap().module.is_zero().unwrap());
    }
}

#[test]
fn the_full_grid_is_exact() {
    let certs = verify_snc_grid(4, 3, &[2, 3, 5], SNC_DEGREE_TOP).unwrap();
    assert_eq!(certs.len(), 3 * (1 + 2 + 3 + 3));
    for c in &certs {
        assert!(c.holds(), "{c:?}");
    }
}

#[test]
fn other_distinguished_components() {
    let c = ctx(3, 3).with_component(1).unwrap();
    for i in 1..=3 {
        assert!(verify_snc_exact(&c, i, 5).unwrap().holds());
    }
    assert!(matches!(ctx(3, 2).with_component(2), Err(Error::BadSupport)));
}

#[test]
fn a_wrong_map_is_reported_with_a_witness() {
    // dropping the first component of ψ breaks ψ ∘ φ = 0
    let c = ctx(3, 3);
    let phi = phi_map(&c, 1).unwrap();
    let psi = psi_map(&c, 1).unwrap();
    let images: Vec<Vector> = psi.images().iter().enumerate().map(|(k, v)| if k < 3 { vec![] } else { v.clone() }).collect();
    let bad = ModuleMap::new(psi.source.clone(), psi.target.clone(), images, 0).unwrap();
    assert!(!bad.compose(&phi).unwrap().is_zero().unwrap());
}

#[test]
fn closed_forms_agree_with_generic_torsion() {
    for p in [2u64, 3] {
        for n in 1..=3 {
            let c = ctx(p, n);
            for i in 1..=n {
                for which in [SncKind::Divisor, SncKind::Complement, SncKind::Component, SncKind::Restricted] {
                    assert!(torsion_cross_check(&c, which, i).unwrap(), "p {p} n {n} i {i} {which:?}");
                }
            }
        }
    }
}

#[test]
fn residue_sequences_for_the_coordinate_divisor() {
    let c = ctx(2, 2);
    for which in 2..=4u8 {
        for i in 0..=2 {
            assert!(snc_bzg_residue(&c, i, which, 6).unwrap().holds(), "which {which} i {i}");
        }
    }
    let c = ctx(3, 2);
    assert!(snc_bzg_residue(&c, 2, 2, 6).unwrap().holds());
    assert!(matches!(snc_bzg_residue(&c, 1, 1, 6), Err(Error::Invalid(_))));
}
