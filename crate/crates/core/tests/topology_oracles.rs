use std::time::Instant;

use wcurve::arith::Discriminant;
use wcurve::reference::ReferenceTables;
use wcurve::topology::{
    check_bounds, compute_invariants, compute_invariants_with, genus_zero_components,
    verify_reference_tables,
};

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

#[test]
fn reference_tables_verify() {
    let t = ReferenceTables::bundled().unwrap();
    let rep = verify_reference_tables(&t, 256).unwrap();
    for m in &rep.mismatches {
        println!("{m:?}");
    }
    println!("{}", rep.summary());
    assert!(rep.is_ok(), "{}", rep.summary());
    assert_eq!(rep.polynomials, 23);
    assert_eq!(rep.rows, 142);
}

#[test]
fn large_rows() {
    let t = ReferenceTables::bundled().unwrap();
    let start = Instant::now();
    for v in [41376, 41377, 41380, 41381, 41384, 41385, 41388] {
        let recs = compute_invariants(&disc(v)).unwrap();
        for row in t.invariant_rows(v) {
            let r = recs.iter().find(|r| r.spin == row.spin).unwrap();
            assert_eq!(
                (r.genus, r.e2 as i64, r.cusps, r.chi.clone()),
                (Some(row.genus), row.e2, Some(row.cusps), row.chi.clone()),
                "D = {v}"
            );
        }
    }
    println!("large rows in {:?}", start.elapsed());
}

#[test]
fn genus_zero_set() {
    let t = ReferenceTables::bundled().unwrap();
    let got = genus_zero_components(1000, &t).unwrap();
    let mut want: Vec<(i64, Option<u8>)> = Vec::new();
    for v in 5..=41 {
        if let Ok(d) = Discriminant::new(v) {
            if d.is_spin_split() {
                want.push((v, Some(0)));
                want.push((v, Some(1)));
            } else {
                want.push((v, None));
            }
        }
    }
    want.extend([(49, Some(0)), (49, Some(1)), (81, Some(1))]);
    assert_eq!(want.len(), 26);
    assert_eq!(got, want);
}

#[test]
fn genus_integrality_and_spin_symmetry() {
    for v in 5..=2000 {
        let Ok(d) = Discriminant::new(v) else {
            continue;
        };
        if d.is_square {
            continue;
        }
        let recs = compute_invariants(&d).unwrap();
        assert!(recs
            .iter()
            .all(|r| r.genus.is_some() && r.chi_defect().unwrap() == wcurve::rational::qi(0)));
        if recs.len() == 2 {
            let key = |i: usize| {
                (
                    recs[i].genus,
                    recs[i].e2,
                    recs[i].cusps,
                    recs[i].chi.clone(),
                )
            };
            assert_eq!(key(0), key(1), "D = {v}");
        }
    }
}

#[test]
fn bounds_hold() {
    let t = ReferenceTables::bundled().unwrap();
    for v in 5..=2000 {
        let Ok(d) = Discriminant::new(v) else {
            continue;
        };
        let rep = check_bounds(&d, Some(&t)).unwrap();
        assert_eq!(rep.failures().count(), 0, "{rep:?}");
    }
}

#[test]
fn low_genus_closure() {
    // Components of genus ≤ 4 with non-square D ≤ 7000 all have D ≤ 121.
    let ds: Vec<i64> = (122..=7000)
        .filter(|&v| Discriminant::new(v).map(|d| !d.is_square).unwrap_or(false))
        .collect();
    use rayon::prelude::*;
    let bad: Vec<i64> = ds
        .par_iter()
        .filter(|&&v| {
            compute_invariants(&disc(v))
                .unwrap()
                .iter()
                .any(|r| r.genus.unwrap() <= 4)
        })
        .copied()
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
    let _ = compute_invariants_with;
}
