//! Bundled reference tables: per-component invariants (`invariants.csv`) and
//! the polynomials f_D (`polynomials.csv`). Values are stored as printed.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::modular::RationalPoly;
use crate::rational::{self, Q};

const INVARIANTS: &str = include_str!("../data/invariants.csv");
const POLYNOMIALS: &str = include_str!("../data/polynomials.csv");
const ERRATA: &str = include_str!("../data/errata.csv");

/// Environment variable naming a directory with replacement table files.
pub const TABLES_ENV: &str = "WCURVE_TABLES";

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRow {
    pub d: i64,
    /// Spin parity for split discriminants, `None` for a single component.
    pub spin: Option<u8>,
    pub genus: i64,
    pub e2: i64,
    pub cusps: i64,
    pub chi: Q,
    /// Fields that the library cannot derive independently and takes from this row.
    pub ref_only: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Copy)]
pub enum PolynomialForm {
    Defining,
    Radical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialRow {
    pub d: i64,
    pub printed: String,
    pub polynomial: RationalPoly,
    pub form: PolynomialForm,
}

/// A printed cell known to be wrong, with the value it should hold.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Erratum {
    pub table: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub spin: Option<u8>,
    pub column: String,
    pub printed: String,
    pub corrected: String,
    pub note: String,
}

#[derive(Deserialize)]
struct RawB {
    #[serde(rename = "D")]
    d: i64,
    spin: Option<u8>,
    genus: i64,
    e2: i64,
    cusps: i64,
    chi: String,
    ref_only: Option<String>,
}

#[derive(Deserialize)]
struct RawC {
    #[serde(rename = "D")]
    d: i64,
    polynomial: String,
    form: String,
}

#[derive(Debug, Clone)]
pub struct ReferenceTables {
    pub invariants: Vec<InvariantRow>,
    pub polynomials: Vec<PolynomialRow>,
    pub errata: Vec<Erratum>,
}

fn bad(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Reference(format!("{what}: {detail}"))
}

pub fn parse_invariants(text: &str) -> Result<Vec<InvariantRow>> {
    let mut out = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).deserialize::<RawB>() {
        let r = rec.map_err(|e| bad("invariants.csv", e))?;
        let chi = rational::parse(&r.chi).ok_or_else(|| {
            bad(
                "invariants.csv",
                format!("bad χ {:?} at D = {}", r.chi, r.d),
            )
        })?;
        let ref_only = r
            .ref_only
            .unwrap_or_default()
            .split(';')
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        out.push(InvariantRow {
            d: r.d,
            spin: r.spin,
            genus: r.genus,
            e2: r.e2,
            cusps: r.cusps,
            chi,
            ref_only,
        });
    }
    Ok(out)
}

pub fn parse_errata(text: &str) -> Result<Vec<Erratum>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| bad("errata.csv", e))
}

pub fn parse_polynomials(text: &str) -> Result<Vec<PolynomialRow>> {
    let mut out = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).deserialize::<RawC>() {
        let r = rec.map_err(|e| bad("polynomials.csv", e))?;
        let polynomial = RationalPoly::parse(&r.polynomial)
            .map_err(|e| bad("polynomials.csv", format!("D = {}: {e}", r.d)))?;
        let form = match r.form.as_str() {
            "defining" => PolynomialForm::Defining,
            "radical" => PolynomialForm::Radical,
            f => return Err(bad("polynomials.csv", format!("unknown form {f:?}"))),
        };
        out.push(PolynomialRow {
            d: r.d,
            printed: r.polynomial,
            polynomial,
            form,
        });
    }
    Ok(out)
}

impl ReferenceTables {
    pub fn bundled() -> Result<Self> {
        Ok(Self {
            invariants: parse_invariants(INVARIANTS)?,
            polynomials: parse_polynomials(POLYNOMIALS)?,
            errata: parse_errata(ERRATA)?,
        })
    }

    /// Tables from `dir/invariants.csv` and `dir/polynomials.csv`, plus `dir/errata.csv`
    /// if present.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| bad(name, format!("{}: {e}", dir.display())))
        };
        let errata = if dir.join("errata.csv").exists() {
            parse_errata(&read("errata.csv")?)?
        } else {
            vec![]
        };
        Ok(Self {
            invariants: parse_invariants(&read("invariants.csv")?)?,
            polynomials: parse_polynomials(&read("polynomials.csv")?)?,
            errata,
        })
    }

    /// The directory in `WCURVE_TABLES` if set, otherwise the bundled copy.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(TABLES_ENV) {
            Some(dir) if !dir.is_empty() => Self::load(Path::new(&dir)),
            _ => Self::bundled(),
        }
    }

    pub fn invariant_rows(&self, d: i64) -> Vec<&InvariantRow> {
        self.invariants.iter().filter(|r| r.d == d).collect()
    }

    pub fn polynomial_row(&self, d: i64) -> Option<&PolynomialRow> {
        self.polynomials.iter().find(|r| r.d == d)
    }

    /// The erratum note for a cell whose computed value matches the listed correction.
    pub fn erratum(
        &self,
        table: &str,
        d: i64,
        spin: Option<u8>,
        column: &str,
        computed: &str,
    ) -> Option<&str> {
        self.errata
            .iter()
            .find(|e| {
                e.table == table
                    && e.d == d
                    && e.spin == spin
                    && e.column == column
                    && e.corrected == computed
            })
            .map(|e| e.note.as_str())
    }

    /// Every D with at least one row in the invariants table, ascending.
    pub fn invariant_discriminants(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.invariants.iter().map(|r| r.d).collect();
        v.dedup();
        v
    }
}
