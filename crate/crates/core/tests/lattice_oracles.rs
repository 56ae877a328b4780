use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wcurve::lattice::*;
use wcurve::prototypes::{enumerate_prototypes, enumerate_prototypes_all, spin_of_prototype};
use wcurve::rational::qi;
use wcurve::Discriminant;

fn sample_points(n: usize) -> Vec<(i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    while out.len() < n {
        let d: i64 = rng.gen_range(5..=500);
        let Ok(disc) = Discriminant::new(d) else {
            continue;
        };
        let all = enumerate_prototypes_all(&disc);
        if all.is_empty() {
            continue;
        }
        let p = all[rng.gen_range(0..all.len())];
        out.push((d, p.e, p.c));
    }
    out
}

#[test]
fn lattices_are_unimodular_and_preserved() {
    for (d, e, c) in sample_points(200) {
        let tau = prototype_tau(d, e, 1, c).unwrap();
        for (l, autos) in [
            (
                PolarizedLattice::d8(tau.clone()).unwrap(),
                [Automorphism::J, Automorphism::R],
            ),
            (
                PolarizedLattice::d12(tau.clone()).unwrap(),
                [Automorphism::Z, Automorphism::R],
            ),
        ] {
            let g = gram_matrix(&l).unwrap();
            assert!(g.is_integral() && g.is_skew(), "D = {d}");
            assert_eq!(g.det(), qi(1), "D = {d}");
            for a in autos {
                let m = automorphism_matrix(&l, a).unwrap();
                assert_eq!(m.transpose().mul(&g).mul(&m), g, "{a:?} at D = {d}");
            }
        }
    }
}

#[test]
fn s_commutes_with_j_and_is_self_adjoint() {
    for (d, e, c) in sample_points(200) {
        let l = PolarizedLattice::d8(prototype_tau(d, e, 1, c).unwrap()).unwrap();
        let g = gram_matrix(&l).unwrap();
        let j = automorphism_matrix(&l, Automorphism::J).unwrap();
        let s = real_mult_generator(d, e, 1, c).unwrap();
        assert_eq!(s, real_mult_via_lattice(d, e, 1, c).unwrap(), "D = {d}");
        // The displayed matrix is in row convention; its transpose acts on
        // coordinate columns like J does.
        let a = s.transpose();
        assert_eq!(a.mul(&j), j.mul(&a), "D = {d}");
        assert_eq!(g.mul(&a), a.transpose().mul(&g), "D = {d}");
        assert_eq!(g.mul(&s), s.transpose().mul(&g), "literal D = {d}");
    }
}

#[test]
fn s_integrality_matches_congruences() {
    let mut checked = 0;
    for e in -40i64..=40 {
        for k in 1..=4 {
            for c in 1..=40 {
                // D = (2bc − e²)/k² for the admissible b.
                for b in 1.. {
                    let num = 2 * b * c - e * e;
                    if num > 2000 * k * k {
                        break;
                    }
                    if num <= 0 || num % (k * k) != 0 {
                        continue;
                    }
                    let d = num / (k * k);
                    if d < 5 || d % 4 > 1 {
                        continue;
                    }
                    let s = real_mult_generator(d, e, k, c).unwrap();
                    let crit = s_integrality_criterion(d, e, k, c).unwrap();
                    assert_eq!(s.is_integral(), crit, "D = {d}, e = {e}, k = {k}, c = {c}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn prototype_congruences_match_s_integrality() {
    for d in (5..=2000).filter(|d| d % 4 <= 1) {
        let disc = Discriminant::new(d).unwrap();
        for p in enumerate_prototypes_all(&disc) {
            assert!(real_mult_generator(d, p.e, 1, p.c).unwrap().is_integral());
        }
    }
}

#[test]
fn structural_spin_matches_corollary() {
    for d in (17..=2000).step_by(8) {
        let disc = Discriminant::new(d).unwrap();
        for p in enumerate_prototypes(&disc) {
            let s = spin_of_prototype(&p).unwrap();
            assert_eq!(spin_via_structure(&p).unwrap(), s, "{p:?}");
            assert_eq!(spin_via_arf(&p).unwrap(), s, "{p:?}");
        }
    }
}
