//! Property tests for invariants that hold on every input.

use proptest::prelude::*;

use frobcheck::arith::{Monomial, MonomialOrder, Poly, Ring, RingRef};
use frobcheck::cli::{parse_hypersurface, run_check, Job};
use frobcheck::derham::wedge_masks;
use frobcheck::frob::{cech_f_injective, f_injective_via_duality, fedder_is_fpure, Hypersurface};
use frobcheck::groebner::{buchberger, Ideal};
use frobcheck::modalg::{solve_sparse, DenseMatrix, SparseRow};
use frobcheck::sncforms::{verify_snc_exact, SncContext};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn ring(p: u64) -> RingRef {
    Ring::new(p, &["x", "y", "z"]).unwrap()
}

/// Random terms `(exponents, coefficient)` in three variables.
fn terms() -> impl Strategy<Value = Vec<([u32; 3], u32)>> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], 0u32..1000), 0..5)
}

fn poly(ring: &RingRef, ts: &[([u32; 3], u32)]) -> Poly {
    let p = ring.p();
    Poly::from_terms(ring, ts.iter().map(|(e, c)| (Monomial::from_exps(e), c % p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(pi in 0usize..4, a in terms(), b in terms(), c in terms()) {
        let r = ring(PRIMES[pi]);
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn frobenius_is_additive(pi in 0usize..4, a in terms(), b in terms()) {
        let p = PRIMES[pi];
        let r = ring(p);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assert_eq!(a.add(&b).unwrap().pow(p), a.pow(p).add(&b.pow(p)).unwrap());
    }

    #[test]
    fn groebner_bases_decide_membership(pi in 0usize..4, g1 in terms(), g2 in terms(), h1 in terms(), h2 in terms()) {
        let r = ring(PRIMES[pi]);
        let (g1, g2) = (poly(&r, &g1), poly(&r, &g2));
        let ideal = Ideal::new(&r, vec![g1.clone(), g2.clone()]).unwrap();
        let gb = buchberger(&ideal, &MonomialOrder::grevlex(3)).unwrap();
        let member = poly(&r, &h1).mul(&g1).unwrap().add(&poly(&r, &h2).mul(&g2).unwrap()).unwrap();
        prop_assert!(gb.contains(&member));
        for g in &gb.basis {
            prop_assert!(gb.contains(g));
        }
        let nf = gb.normal_form(&poly(&r, &h1));
        prop_assert_eq!(gb.normal_form(&nf), nf.clone());
        prop_assert!(gb.contains(&poly(&r, &h1).sub(&nf).unwrap()));
    }

    #[test]
    fn sparse_solutions_satisfy_their_systems(
        pi in 0usize..4,
        rows in 1usize..7,
        cols in 1usize..7,
        seed in prop::collection::vec(0u32..1000, 49),
        x0 in prop::collection::vec(0u32..1000, 7),
        consistent in any::<bool>(),
    ) {
        let p = PRIMES[pi] as u32;
        let columns: Vec<Vec<u32>> = (0..cols).map(|j| (0..rows).map(|i| seed[i * 7 + j] % p).collect()).collect();
        let a = DenseMatrix::from_columns(p, rows, &columns);
        let x0: Vec<u32> = x0[..cols].iter().map(|v| v % p).collect();
        let mut b = a.mul_vec(&x0);
        if !consistent {
            b[0] = (b[0] + 1) % p;
        }
        let eqs: Vec<(SparseRow, u32)> = (0..rows)
            .map(|i| ((0..cols).filter(|&j| a.get(i, j) != 0).map(|j| (j, a.get(i, j))).collect(), b[i]))
            .collect();
        let sparse = solve_sparse(p, cols, eqs);
        prop_assert_eq!(sparse.is_some(), a.solve(&b).is_some());
        if let Some(x) = sparse {
            prop_assert_eq!(a.mul_vec(&x), b.clone());
        }
        if consistent {
            prop_assert!(a.solve(&b).is_some());
        }
    }

    #[test]
    fn wedge_is_graded_commutative(a in 0u32..32, b in 0u32..32) {
        match (wedge_masks(a, b), wedge_masks(b, a)) {
            (None, None) => prop_assert!(a & b != 0),
            (Some((s1, m1)), Some((s2, m2))) => {
                prop_assert_eq!(a & b, 0);
                prop_assert_eq!(m1, a | b);
                prop_assert_eq!(m1, m2);
                let odd = (a.count_ones() * b.count_ones()) % 2 == 1;
                prop_assert_eq!(s1 != s2, odd);
            }
            _ => prop_assert!(false, "wedge defined in one order only"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Diagonal cubics `a x³ + b y³ + c z³` with `abc ≠ 0`: F-pure iff
    /// `p ≡ 1 mod 3`, and the oracles agree.
    #[test]
    fn diagonal_cubics_follow_the_residue_of_p(pi in 0usize..4, coeffs in [1u64..100, 1u64..100, 1u64..100]) {
        let p = [7u64, 11, 13, 19][pi];
        let c: Vec<u64> = coeffs.iter().map(|c| 1 + c % (p - 1)).collect();
        let text = format!("{}*x^3 + {}*y^3 + {}*z^3", c[0], c[1], c[2]);
        let f = parse_hypersurface(&text, &["x", "y", "z"], p).unwrap();
        let hs = Hypersurface::new(&f).unwrap();
        let fedder = fedder_is_fpure(&f).unwrap();
        let cech = cech_f_injective(&hs).unwrap();
        let duality = f_injective_via_duality(&hs).unwrap();
        prop_assert_eq!(fedder, p % 3 == 1);
        prop_assert_eq!(cech, duality);
        prop_assert!(!fedder || cech);
    }

    #[test]
    fn snc_sequences_are_exact(pi in 0usize..3, n in 1usize..4, i_seed in 0usize..3, comp_seed in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let i = 1 + i_seed % n;
        let ctx = SncContext::new(p, n).unwrap().with_component(comp_seed % n).unwrap();
        let cert = verify_snc_exact(&ctx, i, 5).unwrap();
        prop_assert!(cert.holds(), "{:?}", cert);
    }

    #[test]
    fn check_reports_are_reproducible(pi in 0usize..3, coeffs in [1u64..100, 1u64..100]) {
        let p = [3u64, 5, 7][pi];
        let c: Vec<u64> = coeffs.iter().map(|c| 1 + c % (p - 1)).collect();
        let job = Job {
            f: Some(format!("{}*x*y + {}*z*w", c[0], c[1])),
            vars: Some(["x", "y", "z", "w"].map(String::from).to_vec()),
            primes: Some(vec![p]),
            k: Some(0),
            ..Job::default()
        };
        let first = run_check(&job);
        prop_assert_eq!(first.exit_code, 0);
        prop_assert_eq!(first.report.to_json(), run_check(&job).report.to_json());
        let echoed = serde_json::to_string(&job).unwrap();
        prop_assert_eq!(Job::from_json(&echoed).unwrap(), job);
    }
}
