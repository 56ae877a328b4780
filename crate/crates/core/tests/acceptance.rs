//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion can be known red: it fails for a documented reason that no
//! implementation can remove. Those failures are listed in `KNOWN_RED` by
//! part id; the process exits non-zero on any other failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wcurve::arith::Discriminant;
use wcurve::cusps::{cusp_classes, y0_cusp_count};
use wcurve::lattice::{
    real_mult_generator, s_integrality_criterion, spin_via_arf, spin_via_structure,
};
use wcurve::modular::{
    a_of_tau, fd_minimal_factor, fd_polynomial, format_integer_poly, j_of_tau, BigComplex,
    BigComplexCtx, RationalPoly,
};
use wcurve::prototypes::{e2_by_spin, e2_closed_form, enumerate_prototypes, spin_of_prototype};
use wcurve::rational::qi;
use wcurve::reference::{PolynomialForm, ReferenceTables};
use wcurve::topology::{
    check_bounds, compute_invariants, genus_zero_components, square_genus_bounds,
};

/// (part id, reason) of failures that are expected and documented.
const KNOWN_RED: &[(&str, &str)] = &[
    (
        "4:D=5",
        "the printed D = 5 polynomial has constant +124; the pairing a ↦ (12−2a)/(a+2) of its two roots forces −124",
    ),
    (
        "9:q-expansion",
        "the q⁵ coefficient of a(τ) is −4640256, so the five-term truncation error exceeds 10⁶|q|⁵ at every tested point",
    ),
];

struct Outcome {
    id: u32,
    name: &'static str,
    detail: String,
    failed_parts: Vec<String>,
}

impl Outcome {
    fn new(id: u32, name: &'static str) -> Self {
        Outcome {
            id,
            name,
            detail: String::new(),
            failed_parts: Vec::new(),
        }
    }

    fn fail(&mut self, part: impl Into<String>) {
        self.failed_parts.push(part.into());
    }
}

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

fn invariant_rows(refs: &ReferenceTables, out: &mut Outcome, squares: bool) -> usize {
    let mut rows = 0;
    for v in refs
        .invariant_discriminants()
        .into_iter()
        .filter(|&v| v <= 225)
    {
        let d = disc(v);
        if d.is_square != squares {
            continue;
        }
        let recs = compute_invariants(&d).unwrap();
        for row in refs.invariant_rows(v) {
            rows += 1;
            let Some(r) = recs.iter().find(|r| r.spin == row.spin) else {
                out.fail(format!("D={v} spin {:?} missing", row.spin));
                continue;
            };
            let ok = if squares {
                (r.e2 as i64, &r.chi) == (row.e2, &row.chi)
            } else {
                (r.genus, r.e2 as i64, r.cusps, &r.chi)
                    == (Some(row.genus), row.e2, Some(row.cusps), &row.chi)
            };
            if !ok {
                out.fail(format!("D={v} spin {:?}", row.spin));
            }
        }
    }
    rows
}

fn criterion_1(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(
        1,
        "reference invariants, non-square rows D <= 225 (genus, e2, cusps, chi)",
    );
    let n = invariant_rows(refs, &mut o, false);
    o.detail = format!("{n} component rows");
    o
}

fn criterion_2(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(2, "reference invariants, square rows (e2, chi)");
    let n = invariant_rows(refs, &mut o, true);
    let squares: Vec<i64> = refs
        .invariant_discriminants()
        .into_iter()
        .filter(|&v| disc(v).is_square)
        .collect();
    if squares != [9, 16, 25, 36, 49, 64, 81, 100, 121, 144, 169, 196, 225] {
        o.fail(format!("square rows present: {squares:?}"));
    }
    o.detail = format!("{n} component rows over {} squares", squares.len());
    o
}

fn criterion_3(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(3, "large-discriminant rows D in 41376..41388");
    let mut rows = 0;
    for v in [41376, 41377, 41380, 41381, 41384, 41385, 41388] {
        let recs = compute_invariants(&disc(v)).unwrap();
        let ref_rows = refs.invariant_rows(v);
        if ref_rows.is_empty() {
            o.fail(format!("D={v} has no reference row"));
        }
        for row in ref_rows {
            rows += 1;
            let r = recs.iter().find(|r| r.spin == row.spin);
            let ok = r.is_some_and(|r| {
                (r.genus, r.e2 as i64, r.cusps, &r.chi)
                    == (Some(row.genus), row.e2, Some(row.cusps), &row.chi)
            });
            if !ok {
                o.fail(format!("D={v} spin {:?}", row.spin));
            }
        }
    }
    o.detail = format!("{rows} component rows");
    o
}

fn criterion_4(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(4, "reference polynomials D <= 56 at 256 bits");
    let mut n = 0;
    let mut notes = Vec::new();
    for row in refs.polynomials.iter().filter(|r| r.d <= 56) {
        n += 1;
        let mut ctx = BigComplexCtx::new(256).unwrap();
        let res = match fd_polynomial(&disc(row.d), &mut ctx) {
            Ok(r) => r,
            Err(e) => {
                o.fail(format!("D={}", row.d));
                notes.push(format!("D={}: {e}", row.d));
                continue;
            }
        };
        let ours = match row.form {
            PolynomialForm::Defining => res.defining.clone(),
            PolynomialForm::Radical => res.radical(),
        };
        if ours.primitive() != row.polynomial.primitive() {
            o.fail(format!("D={}", row.d));
            notes.push(format!(
                "D={}: computed {} vs printed {}",
                row.d,
                format_integer_poly(&ours.primitive()),
                row.printed
            ));
        }
    }
    o.detail = format!(
        "{n} rows{}",
        if notes.is_empty() {
            String::new()
        } else {
            format!("; {}", notes.join("; "))
        }
    );
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new(5, "E(76) and f_76");
    let protos: Vec<_> = enumerate_prototypes(&disc(76))
        .iter()
        .map(|p| p.key())
        .collect();
    if protos != [(-2, 2, 20), (-2, 4, 10), (2, 4, 10)] {
        o.fail("E(76)");
    }
    let mut ctx = BigComplexCtx::new(256).unwrap();
    let res = fd_polynomial(&disc(76), &mut ctx).unwrap();
    let cubic = RationalPoly::parse("t^3+3t^2+3459t+6913").unwrap();
    let minimal = fd_minimal_factor(&res).unwrap();
    if minimal != cubic {
        o.fail("minimal factor");
    }
    if !cubic.divides(&res.defining) {
        o.fail("cubic does not divide the defining product");
    }
    o.detail = format!("E(76) = {protos:?}; minimal factor {minimal}");
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new(
        6,
        "#E(D) equals the class-number closed form, 8 < D <= 2000",
    );
    let mut n = 0;
    for v in 9..=2000 {
        let Ok(d) = Discriminant::new(v) else {
            continue;
        };
        n += 1;
        if e2_closed_form(&d).unwrap() != qi(enumerate_prototypes(&d).len() as i64) {
            o.fail(format!("D={v}"));
        }
    }
    o.detail = format!("{n} discriminants");
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new(7, "spin laws, D ≡ 1 (mod 8), 9 < D <= 2000");
    let mut n = 0;
    for v in (17..=2000).step_by(8) {
        let d = disc(v);
        n += 1;
        let protos = enumerate_prototypes(&d);
        if d.is_square {
            let want = ((d.conductor + 1) / 2 % 2) as u8;
            if !protos.iter().all(|p| spin_of_prototype(p).unwrap() == want) {
                o.fail(format!("D={v}"));
            }
        } else {
            match e2_by_spin(&d) {
                Ok((a, b)) if a == b && (a + b) as usize == protos.len() => {}
                _ => o.fail(format!("D={v}")),
            }
        }
    }
    o.detail = format!("{n} discriminants");
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new(
        8,
        "oracle equivalences (S integrality, Arf spin, cusp classes)",
    );
    let mut s_checked = 0;
    for e in -40i64..=40 {
        for k in 1..=4 {
            for c in 1..=40 {
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
                    s_checked += 1;
                    let s = real_mult_generator(d, e, k, c).unwrap();
                    if s.is_integral() != s_integrality_criterion(d, e, k, c).unwrap() {
                        o.fail(format!("a: D={d} e={e} k={k} c={c}"));
                    }
                }
            }
        }
    }
    let mut spins = 0;
    for v in (17..=2000).step_by(8) {
        for p in enumerate_prototypes(&disc(v)) {
            spins += 1;
            let s = spin_of_prototype(&p).unwrap();
            if spin_via_arf(&p).unwrap() != s || spin_via_structure(&p).unwrap() != s {
                o.fail(format!("b: {:?} at D={v}", p.key()));
            }
        }
    }
    for m in 1..=500 {
        if cusp_classes(m).unwrap().len() as i64 != y0_cusp_count(m).unwrap() {
            o.fail(format!("c: m={m}"));
        }
    }
    o.detail = format!("(a) {s_checked} (e,k,c,D) cases, (b) {spins} prototypes, (c) m <= 500");
    o
}

fn q_series(ctx: &BigComplexCtx, q: &BigComplex) -> BigComplex {
    let coeffs = [-2, -256, -6144, -76800, -671744];
    let mut acc = ctx.int(0);
    for &c in coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, q), &ctx.int(c));
    }
    acc
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new(9, "analytic suite (q-expansion, cubic j-relation, j∘h)");
    let mut ctx = BigComplexCtx::new(256).unwrap();
    let mut ratios = Vec::new();
    for t in [1.0, 1.2, 1.5] {
        let tau = ctx.from_f64(0.0, t);
        let a = a_of_tau(&tau, &mut ctx).unwrap();
        let q = (-2.0 * std::f64::consts::PI * t).exp();
        let two_tau = ctx.scale_ratio(&tau, 2, 1);
        let arg = ctx.mul_i_pi(&two_tau);
        let qc = ctx.exp(&arg);
        let diff = ctx.sub(&a, &q_series(&ctx, &qc));
        let (re, im) = diff.to_f64_pair();
        let ratio = re.hypot(im) / q.powi(5);
        ratios.push(format!("{ratio:.4e}"));
        if ratio > 1e6 {
            o.fail("9:q-expansion");
        }
    }
    o.failed_parts.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(0x9e1a);
    let mut worst = i64::MIN;
    for _ in 0..50 {
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range(0.6..2.0);
        let tau = ctx.from_f64(x, y);
        let a = a_of_tau(&tau, &mut ctx).unwrap();
        let j = j_of_tau(&tau, &mut ctx).unwrap();
        // a³ + 3a² + (3 − j/256)a + 1 − j/128
        let lin = ctx.mul(&ctx.sub(&ctx.int(3), &ctx.scale_ratio(&j, 1, 256)), &a);
        let mut cubic = ctx.add(
            &ctx.pow_small(&a, 3),
            &ctx.mul(&ctx.int(3), &ctx.pow_small(&a, 2)),
        );
        cubic = ctx.add(&ctx.add(&cubic, &lin), &ctx.one());
        cubic = ctx.sub(&cubic, &ctx.scale_ratio(&j, 1, 128));
        // j = 256(a + 1)³/(a + 2)
        let jh = ctx
            .div(
                &ctx.mul(&ctx.int(256), &ctx.pow_small(&ctx.add(&a, &ctx.one()), 3)),
                &ctx.add(&a, &ctx.int(2)),
            )
            .unwrap();
        let r1 = cubic.mag_log2();
        let r2 = ctx.sub(&jh, &j).mag_log2();
        worst = worst.max(r1).max(r2);
        if r1 >= -128 {
            o.fail("9:cubic relation");
        }
        if r2 >= -128 {
            o.fail("9:j∘h");
        }
    }
    o.failed_parts.dedup();
    o.detail = format!(
        "|a − series|/|q|⁵ at t = 1, 1.2, 1.5: {}; worst j residual 2^{worst}",
        ratios.join(", ")
    );
    o
}

fn criterion_10(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(10, "structural suite, D <= 2000");
    let mut checks = 0;
    for v in 5..=2000 {
        let Ok(d) = Discriminant::new(v) else {
            continue;
        };
        if !d.is_square {
            for r in compute_invariants(&d).unwrap() {
                if r.genus.is_none() || r.chi_defect() != Some(qi(0)) {
                    o.fail(format!("genus D={v}"));
                }
            }
        }
        let rep = check_bounds(&d, Some(refs)).unwrap();
        checks += rep.checks.len();
        for c in rep.failures() {
            o.fail(format!(
                "{} D={v} spin {:?}: {} vs {}",
                c.name, c.spin, c.value, c.bound
            ));
        }
    }
    o.detail = format!("{checks} inequality checks");
    o
}

fn criterion_11(refs: &ReferenceTables) -> Outcome {
    let mut o = Outcome::new(11, "genus-zero classification, D <= 1000");
    let got = genus_zero_components(1000, refs).unwrap();
    let mut want = Vec::new();
    for v in 5..=41 {
        if let Ok(d) = Discriminant::new(v) {
            if d.is_spin_split() {
                want.extend([(v, Some(0)), (v, Some(1))]);
            } else {
                want.push((v, None));
            }
        }
    }
    want.extend([(49, Some(0)), (49, Some(1)), (81, Some(1))]);
    if got != want {
        o.fail(format!("got {got:?}"));
    }
    // Square D above 225 have no table genus; they are excluded by the
    // cusp-count bound.
    let excluded: Vec<i64> = (16..=31)
        .map(|f| f * f)
        .filter(|&v| {
            square_genus_bounds(&disc(v))
                .unwrap()
                .iter()
                .all(|b| *b > qi(0))
        })
        .collect();
    if excluded.len() != 16 {
        o.fail("square bound not positive for every 256 <= D <= 961");
    }
    o.detail = format!(
        "{} components (expected {}); {} squares above 225 excluded by bound",
        got.len(),
        want.len(),
        excluded.len()
    );
    o
}

fn main() {
    let refs = ReferenceTables::bundled().expect("bundled tables");
    type Crit<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<Crit> = vec![
        Box::new(|| criterion_1(&refs)),
        Box::new(|| criterion_2(&refs)),
        Box::new(|| criterion_3(&refs)),
        Box::new(|| criterion_4(&refs)),
        Box::new(criterion_5),
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(criterion_8),
        Box::new(criterion_9),
        Box::new(|| criterion_10(&refs)),
        Box::new(|| criterion_11(&refs)),
    ];
    let mut unexpected = 0;
    let mut documented = 0;
    for c in criteria {
        let start = Instant::now();
        let o = c();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let status = if o.failed_parts.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "{status} {:>2}  {}  [{ms:.0} ms] {}",
            o.id, o.name, o.detail
        );
        for part in &o.failed_parts {
            let tag = if part.starts_with(&format!("{}:", o.id)) {
                part.clone()
            } else {
                format!("{}:{part}", o.id)
            };
            match KNOWN_RED.iter().find(|(id, _)| *id == tag) {
                Some((_, why)) => {
                    documented += 1;
                    println!("         known red {tag}: {why}");
                }
                None => {
                    unexpected += 1;
                    println!("         failed {tag}");
                }
            }
        }
    }
    println!(
        "acceptance: {unexpected} unexpected failure(s), {documented} documented known-red part(s)"
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
