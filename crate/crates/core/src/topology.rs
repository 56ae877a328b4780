//! Per-component invariants of W_D: genus, orbifold points, cusps and Euler
//! characteristic, with the genus solved from χ = 2 − 2g − C − Σ(1 − 1/n)eₙ.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Discriminant;
use crate::cusps::{
    count_pd_components, cusp_count_wd, one_cylinder_count, pd_components, two_cyl_spin_difference,
    y0_cusp_count,
};
use crate::error::{Error, Result};
use crate::eulerchar::{chi_wd, chi_wd_components, chi_xd};
use crate::modular::{fd_polynomial, BigComplexCtx};
use crate::prototypes::{e2_by_spin, orbifold_signature, OrbifoldSignature};
use crate::rational::{self, q, qi, Q};
use crate::reference::{PolynomialForm, ReferenceTables};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentInvariants {
    #[serde(rename = "D")]
    pub d: i64,
    pub spin: Option<u8>,
    pub genus: Option<i64>,
    pub e2: u64,
    pub e4: u64,
    pub e5: u64,
    pub cusps: Option<i64>,
    #[serde(serialize_with = "rational::serialize")]
    pub chi: Q,
    /// Fields taken from reference data rather than computed.
    pub reference_fields: Vec<&'static str>,
}

impl ComponentInvariants {
    fn signature(&self) -> OrbifoldSignature {
        OrbifoldSignature {
            e2: self.e2,
            e4: self.e4,
            e5: self.e5,
        }
    }

    /// 2 − 2g − C − e₂/2 − 3e₄/4 − 4e₅/5 − χ, when genus and cusps are known.
    pub fn chi_defect(&self) -> Option<Q> {
        let (g, c) = (self.genus?, self.cusps?);
        Some(qi(2 - 2 * g - c) - orbifold_term(&self.signature()) - &self.chi)
    }
}

fn orbifold_term(s: &OrbifoldSignature) -> Q {
    q(s.e2 as i64, 2) + q(3 * s.e4 as i64, 4) + q(4 * s.e5 as i64, 5)
}

/// Solve χ = 2 − 2g − C − Σ(1 − 1/n)eₙ for g.
pub fn solve_genus(chi: &Q, cusps: i64, sig: &OrbifoldSignature) -> Result<i64> {
    let two_g = qi(2 - cusps) - orbifold_term(sig) - chi;
    let g2 = two_g
        .is_integer()
        .then(|| two_g.to_integer().to_i64())
        .flatten()
        .filter(|g| g % 2 == 0 && *g >= 0)
        .ok_or_else(|| {
            Error::consistency(format!(
                "2g = {} is not a non-negative even integer (χ = {}, C = {cusps}, e = {sig:?})",
                rational::to_string(&two_g),
                rational::to_string(chi)
            ))
        })?;
    Ok(g2 / 2)
}

/// Component records computed without reference data. Square D leaves
/// genus and cusps unset.
pub fn compute_invariants(d: &Discriminant) -> Result<Vec<ComponentInvariants>> {
    let sig = orbifold_signature(d)?;
    let mut out = Vec::new();
    if d.is_spin_split() {
        let (e0, e1) = e2_by_spin(d)?;
        let (c0, c1) = chi_wd_components(d)?;
        let cusps = if d.is_square {
            None
        } else {
            Some(cusp_count_wd(d)?)
        };
        if let Some(c) = cusps {
            if c % 2 != 0 {
                return Err(Error::consistency(format!(
                    "D = {d}: odd cusp total {c} cannot split evenly"
                )));
            }
        }
        for (spin, e2, chi) in [(0u8, e0, c0), (1, e1, c1)] {
            out.push(ComponentInvariants {
                d: d.value,
                spin: Some(spin),
                genus: None,
                e2,
                e4: 0,
                e5: 0,
                cusps: cusps.map(|c| c / 2),
                chi,
                reference_fields: vec![],
            });
        }
    } else {
        out.push(ComponentInvariants {
            d: d.value,
            spin: None,
            genus: None,
            e2: sig.e2,
            e4: sig.e4,
            e5: sig.e5,
            cusps: if d.is_square {
                None
            } else {
                Some(cusp_count_wd(d)?)
            },
            chi: chi_wd(d)?,
            reference_fields: vec![],
        });
    }
    for r in &mut out {
        if let Some(c) = r.cusps {
            r.genus = Some(solve_genus(&r.chi, c, &r.signature())?);
        }
    }
    Ok(out)
}

/// As [`compute_invariants`], with square-D genus and cusps filled from the
/// reference rows when present. Filled values must satisfy the χ relation.
pub fn compute_invariants_with(
    d: &Discriminant,
    refs: &ReferenceTables,
) -> Result<Vec<ComponentInvariants>> {
    let mut out = compute_invariants(d)?;
    if !d.is_square {
        return Ok(out);
    }
    let rows = refs.invariant_rows(d.value);
    for r in &mut out {
        let Some(row) = rows.iter().find(|row| row.spin == r.spin) else {
            continue;
        };
        if row.ref_only.iter().any(|f| f == "genus") {
            r.genus = Some(row.genus);
            r.reference_fields.push("genus");
        }
        if row.ref_only.iter().any(|f| f == "cusps") {
            r.cusps = Some(row.cusps);
            r.reference_fields.push("cusps");
        }
        if let Some(defect) = r.chi_defect() {
            if !defect.is_zero() {
                return Err(Error::Reference(format!(
                    "D = {d}, spin {:?}: reference genus {} and cusps {} violate the χ relation by {}",
                    r.spin,
                    row.genus,
                    row.cusps,
                    rational::to_string(&defect)
                )));
            }
        }
    }
    Ok(out)
}

/// Every valid discriminant in `from..=to`, ascending.
pub fn discriminants(from: i64, to: i64) -> Vec<Discriminant> {
    (from.max(5)..=to)
        .filter_map(|v| Discriminant::new(v).ok())
        .collect()
}

/// Invariants for every D in `from..=to`, computed in parallel on the current
/// rayon pool. The output order is by D, then spin, independent of scheduling.
pub fn invariants_range(
    from: i64,
    to: i64,
    refs: Option<&ReferenceTables>,
) -> Result<Vec<ComponentInvariants>> {
    let per_d: Vec<Result<Vec<ComponentInvariants>>> = discriminants(from, to)
        .par_iter()
        .map(|d| match refs {
            Some(t) => compute_invariants_with(d, t),
            None => compute_invariants(d),
        })
        .collect();
    let mut out = Vec::new();
    for r in per_d {
        out.extend(r?);
    }
    Ok(out)
}

/// g(V) ≥ D^{3/2}/600 − D/16 − D^{3/4}/2 − 75 for non-square D, and
/// g(V) ≥ D^{3/2}/240 − 7D/10 − D^{3/4}/2 − 75 for square D.
pub fn effective_genus_bound(d: &Discriminant) -> f64 {
    let x = d.value as f64;
    if d.is_square {
        x.powf(1.5) / 240.0 - 7.0 * x / 10.0 - x.powf(0.75) / 2.0 - 75.0
    } else {
        x.powf(1.5) / 600.0 - x / 16.0 - x.powf(0.75) / 2.0 - 75.0
    }
}

/// Lower bounds on the genus of each component of W_{f²}, one per record of
/// [`compute_invariants`].
///
/// The cusps split into C₁ one-cylinder cusps, counted exactly, and
/// C₂ < C(P_D) two-cylinder cusps; C(P_D) is bounded by the Y₀(m) cusp counts.
/// With two spin components the C₂ cusps differ across them by Δ(f), so each
/// gets at most (C₂ + Δ)/2 whichever side is larger.
pub fn square_genus_bounds(d: &Discriminant) -> Result<Vec<Q>> {
    if !d.is_square {
        return Err(Error::not_applicable(format!("D = {d} is not a square")));
    }
    let f = d.conductor;
    let c1 = one_cylinder_count(f)?;
    let mut cpd = 0;
    for c in pd_components(d) {
        cpd += y0_cusp_count(c.m)?;
    }
    let c_max = if d.is_spin_split() {
        c1 + (cpd - 1 + two_cyl_spin_difference(f)?) / 2
    } else {
        c1 + cpd - 1
    };
    Ok(compute_invariants(d)?
        .iter()
        .map(|r| (qi(2 - c_max) - orbifold_term(&r.signature()) - &r.chi) / qi(2))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub spin: Option<u8>,
    pub value: String,
    pub bound: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Evaluate every applicable inequality for D: e₂ ≤ D/2, h₀(P_D) ≤ D^{3/4} + 150,
/// |χ(X_D)| > D^{3/2}/300, and the genus lower bounds where the genus is known.
pub fn check_bounds(d: &Discriminant, refs: Option<&ReferenceTables>) -> Result<BoundsReport> {
    let recs = match refs {
        Some(t) => compute_invariants_with(d, t)?,
        None => compute_invariants(d)?,
    };
    let x = d.value as f64;
    let mut checks = Vec::new();
    let e2: u64 = recs.iter().map(|r| r.e2).sum();
    checks.push(BoundCheck {
        name: "e2 <= D/2".into(),
        spin: None,
        value: e2.to_string(),
        bound: rational::to_string(&q(d.value, 2)),
        holds: 2 * e2 as i64 <= d.value,
    });
    let h0 = pd_components(d).len();
    let h0_bound = x.powf(0.75) + 150.0;
    checks.push(BoundCheck {
        name: "h0(P_D) <= D^(3/4)+150".into(),
        spin: None,
        value: h0.to_string(),
        bound: format!("{h0_bound:.3}"),
        holds: (h0 as f64) <= h0_bound && count_pd_components(d).is_ok(),
    });
    if !d.is_square {
        let chi = chi_xd(d)?.abs();
        let b = x.powf(1.5) / 300.0;
        checks.push(BoundCheck {
            name: "|chi(X_D)| > D^(3/2)/300".into(),
            spin: None,
            value: rational::to_string(&chi),
            bound: format!("{b:.3}"),
            holds: rational::to_f64(&chi) > b,
        });
    }
    let eff = effective_genus_bound(d);
    let derived = if d.is_square {
        Some(square_genus_bounds(d)?)
    } else {
        None
    };
    for (i, r) in recs.iter().enumerate() {
        let Some(g) = r.genus else { continue };
        checks.push(BoundCheck {
            name: "genus >= effective bound".into(),
            spin: r.spin,
            value: g.to_string(),
            bound: format!("{eff:.3}"),
            holds: g as f64 >= eff,
        });
        if let Some(b) = &derived {
            checks.push(BoundCheck {
                name: "genus >= cusp-count bound".into(),
                spin: r.spin,
                value: g.to_string(),
                bound: rational::to_string(&b[i]),
                holds: qi(g) >= b[i],
            });
        }
    }
    Ok(BoundsReport { d: d.value, checks })
}

/// A component of W_D, as (D, spin).
pub type ComponentId = (i64, Option<u8>);

/// Below this every discriminant is evaluated, whatever the bounds say.
const EXHAUSTIVE_BELOW: i64 = 1000;

/// Every component of genus zero with D ≤ `d_max`, as (D, spin).
///
/// Square D needs the genus from `refs`; without it a component is excluded
/// only when its cusp-count bound is positive.
pub fn genus_zero_components(d_max: i64, refs: &ReferenceTables) -> Result<Vec<ComponentId>> {
    if d_max < 121 {
        return Err(Error::domain(format!(
            "genus-zero search needs D_max >= 121, got {d_max}"
        )));
    }
    let per_d: Vec<Result<Vec<ComponentId>>> = discriminants(5, d_max)
        .par_iter()
        .map(|d| {
            if d.value >= EXHAUSTIVE_BELOW && effective_genus_bound(d) > 0.0 {
                return Ok(vec![]);
            }
            let recs = compute_invariants_with(d, refs)?;
            let bounds = if d.is_square {
                Some(square_genus_bounds(d)?)
            } else {
                None
            };
            let mut found = Vec::new();
            for (i, r) in recs.iter().enumerate() {
                match (r.genus, &bounds) {
                    (Some(0), _) => found.push((d.value, r.spin)),
                    (Some(_), _) => {}
                    (None, Some(b)) if b[i] > qi(0) => {}
                    (None, _) => {
                        return Err(Error::Reference(format!(
                            "D = {d}, spin {:?}: genus unavailable and not excluded by a bound",
                            r.spin
                        )))
                    }
                }
            }
            Ok(found)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_d {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CellMismatch {
    pub table: &'static str,
    #[serde(rename = "D")]
    pub d: i64,
    pub spin: Option<u8>,
    pub column: &'static str,
    pub printed: String,
    pub computed: String,
    /// Set when the bundled errata list documents this cell.
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub rows: usize,
    pub cells_checked: usize,
    pub cells_echoed: usize,
    pub polynomials: usize,
    pub mismatches: Vec<CellMismatch>,
}

impl VerifyReport {
    /// Mismatches not covered by the errata list.
    pub fn failures(&self) -> impl Iterator<Item = &CellMismatch> {
        self.mismatches.iter().filter(|m| m.erratum.is_none())
    }

    pub fn is_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn summary(&self) -> String {
        let errata = self.mismatches.len() - self.failures().count();
        let head = if self.is_ok() { "OK" } else { "FAILED" };
        let mut s = format!(
            "{head}: {} rows, {} polynomials",
            self.rows, self.polynomials
        );
        if errata > 0 {
            s += &format!(", {errata} documented erratum cell(s)");
        }
        let bad = self.failures().count();
        if bad > 0 {
            s += &format!(", {bad} mismatched cell(s)");
        }
        s
    }
}

/// Recompute every computable cell of the reference tables and diff.
/// Square-D genus and cusps are echoed, not verified. polynomial rows are
/// evaluated at `precision_bits`.
pub fn verify_reference_tables(
    refs: &ReferenceTables,
    precision_bits: usize,
) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    let ds = refs.invariant_discriminants();
    let computed: Vec<Result<Vec<ComponentInvariants>>> = ds
        .par_iter()
        .map(|&v| compute_invariants(&Discriminant::new(v)?))
        .collect();
    for (&v, recs) in ds.iter().zip(computed) {
        let recs = recs?;
        for row in refs.invariant_rows(v) {
            rep.rows += 1;
            let ours = recs.iter().find(|r| r.spin == row.spin).ok_or_else(|| {
                Error::Reference(format!(
                    "D = {v}: reference spin {:?} has no computed component",
                    row.spin
                ))
            })?;
            let mut cell =
                |column: &'static str, printed: String, computed: Option<String>| match computed {
                    None => rep.cells_echoed += 1,
                    Some(c) => {
                        rep.cells_checked += 1;
                        if c != printed {
                            let erratum = refs
                                .erratum("invariants", v, row.spin, column, &c)
                                .map(str::to_owned);
                            rep.mismatches.push(CellMismatch {
                                table: "invariants",
                                d: v,
                                spin: row.spin,
                                column,
                                printed,
                                computed: c,
                                erratum,
                            });
                        }
                    }
                };
            let echoed = |f: &str| row.ref_only.iter().any(|x| x == f);
            cell(
                "genus",
                row.genus.to_string(),
                ours.genus
                    .filter(|_| !echoed("genus"))
                    .map(|g| g.to_string()),
            );
            cell("e2", row.e2.to_string(), Some(ours.e2.to_string()));
            cell(
                "cusps",
                row.cusps.to_string(),
                ours.cusps
                    .filter(|_| !echoed("cusps"))
                    .map(|c| c.to_string()),
            );
            cell(
                "chi",
                rational::to_string(&row.chi),
                Some(rational::to_string(&ours.chi)),
            );
        }
    }
    let polys: Vec<Result<(i64, String, String)>> = refs
        .polynomials
        .par_iter()
        .map(|row| {
            let mut ctx = BigComplexCtx::new(precision_bits)?;
            let res = fd_polynomial(&Discriminant::new(row.d)?, &mut ctx)?;
            let ours = match row.form {
                PolynomialForm::Defining => res.defining,
                PolynomialForm::Radical => res.radical(),
            };
            Ok((row.d, poly_key(&ours), poly_key(&row.polynomial)))
        })
        .collect();
    for p in polys {
        let (v, ours, printed) = p?;
        rep.polynomials += 1;
        if ours != printed {
            let erratum = refs
                .erratum("polynomials", v, None, "polynomial", &ours)
                .map(str::to_owned);
            rep.mismatches.push(CellMismatch {
                table: "polynomials",
                d: v,
                spin: None,
                column: "polynomial",
                printed,
                computed: ours,
                erratum,
            });
        }
    }
    Ok(rep)
}

/// The primitive integer form, printed; equal keys mean equal up to content.
pub fn poly_key(p: &crate::modular::RationalPoly) -> String {
    crate::modular::format_integer_poly(&p.primitive())
}
