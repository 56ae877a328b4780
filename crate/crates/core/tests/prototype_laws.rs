use wcurve::arith::Discriminant;
use wcurve::prototypes::{e2_by_spin, e2_closed_form, enumerate_prototypes, spin_of_prototype};
use wcurve::rational::qi;

#[test]
fn enumeration_matches_class_number_formula() {
    for v in 9..=2000 {
        let Ok(d) = Discriminant::new(v) else {
            continue;
        };
        let n = enumerate_prototypes(&d).len() as i64;
        assert_eq!(e2_closed_form(&d).unwrap(), qi(n), "D = {v}");
    }
}

#[test]
fn spin_laws() {
    for v in (17..=2000).step_by(8) {
        let d = Discriminant::new(v).unwrap();
        let protos = enumerate_prototypes(&d);
        if d.is_square {
            let want = ((d.conductor + 1) / 2 % 2) as u8;
            assert!(
                protos.iter().all(|p| spin_of_prototype(p).unwrap() == want),
                "D = {v}"
            );
        } else {
            let (s0, s1) = e2_by_spin(&d).unwrap();
            assert_eq!(s0, s1, "D = {v}");
            assert_eq!((s0 + s1) as usize, protos.len());
        }
    }
}
