//! Published reference tables and the cell-by-cell regression diff.
//!
//! The fixtures live in `fixtures/*.csv` and are compiled into the binary.
//! They are never regenerated from this crate's own output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::{
    canonical_singularity, complex_component, decompose_complex, enumerate_omegas,
    CyclicSingularity, Stratum,
};
use crate::error::{Error, Result};
use crate::partitions::{Partition, Partitions};
use crate::real::{bundle_orientable_k1, real_component};
use crate::topology::{betti, ktheory_ranks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    BettiK1,
    BettiK2,
    Ktheory,
    Sl6Catalogs,
    Sl16Examples,
    Su6Orientability,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::BettiK1,
        TableId::BettiK2,
        TableId::Ktheory,
        TableId::Sl6Catalogs,
        TableId::Sl16Examples,
        TableId::Su6Orientability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::BettiK1 => "betti_k1",
            TableId::BettiK2 => "betti_k2",
            TableId::Ktheory => "ktheory",
            TableId::Sl6Catalogs => "sl6_catalogs",
            TableId::Sl16Examples => "sl16_examples",
            TableId::Su6Orientability => "su6_orientability",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }

    /// The embedded fixture contents.
    pub fn fixture(self) -> &'static str {
        match self {
            TableId::BettiK1 => include_str!("../fixtures/betti_k1.csv"),
            TableId::BettiK2 => include_str!("../fixtures/betti_k2.csv"),
            TableId::Ktheory => include_str!("../fixtures/ktheory.csv"),
            TableId::Sl6Catalogs => include_str!("../fixtures/sl6_catalogs.csv"),
            TableId::Sl16Examples => include_str!("../fixtures/sl16_examples.csv"),
            TableId::Su6Orientability => include_str!("../fixtures/su6_orientability.csv"),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: String,
    pub column: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub table: TableId,
    pub cells_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    fn new(table: TableId) -> Self {
        DiffReport {
            table,
            cells_checked: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, row: &str, column: &str, expected: impl ToString, actual: impl ToString) {
        self.cells_checked += 1;
        let (expected, actual) = (expected.to_string(), actual.to_string());
        if expected != actual {
            self.mismatches.push(Mismatch {
                row: row.to_string(),
                column: column.to_string(),
                expected,
                actual,
            });
        }
    }
}

struct Fixture {
    table: TableId,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Fixture {
    fn parse(table: TableId, text: &str) -> Result<Self> {
        let bad = |reason: String| Error::Fixture {
            table: table.name().to_string(),
            reason,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = reader
            .records()
            .map(|r| {
                r.map(|rec| rec.iter().map(str::to_string).collect())
                    .map_err(|e| bad(e.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(Fixture {
            table,
            header,
            rows,
        })
    }

    fn col(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Fixture {
                table: self.table.name().to_string(),
                reason: format!("missing column {name}"),
            })
    }

    fn int(&self, row: &[String], name: &str) -> Result<u64> {
        let cell = &row[self.col(name)?];
        cell.trim().parse().map_err(|_| Error::Fixture {
            table: self.table.name().to_string(),
            reason: format!("column {name}: {cell:?} is not an integer"),
        })
    }

    fn ints(&self, row: &[String], name: &str) -> Result<Vec<u64>> {
        let cell = &row[self.col(name)?];
        cell.split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Fixture {
                    table: self.table.name().to_string(),
                    reason: format!("column {name}: {cell:?} is not an integer list"),
                })
            })
            .collect()
    }

    fn partition(&self, row: &[String]) -> Result<Partition> {
        row[self.col("partition")?].parse()
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Checks a table against the embedded fixture.
pub fn verify(table: TableId) -> Result<DiffReport> {
    verify_text(table, table.fixture())
}

/// Checks a table against the fixture file of the same name in `dir`.
pub fn verify_dir(table: TableId, dir: &Path) -> Result<DiffReport> {
    let path = dir.join(table.file_name());
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Fixture {
        table: table.name().to_string(),
        reason: format!("{}: {e}", path.display()),
    })?;
    verify_text(table, &text)
}

/// Checks a table against fixture text in the shipped CSV layout.
pub fn verify_text(table: TableId, text: &str) -> Result<DiffReport> {
    let fixture = Fixture::parse(table, text)?;
    match table {
        TableId::BettiK1 => verify_betti(&fixture, 1),
        TableId::BettiK2 => verify_betti(&fixture, 2),
        TableId::Ktheory => verify_ktheory(&fixture),
        TableId::Sl6Catalogs => verify_catalog_rows(&fixture, true),
        TableId::Sl16Examples => verify_catalog_rows(&fixture, false),
        TableId::Su6Orientability => verify_orientability(&fixture),
    }
}

fn verify_betti(f: &Fixture, k: u64) -> Result<DiffReport> {
    let mut report = DiffReport::new(f.table);
    for row in &f.rows {
        let n = f.int(row, "n")?;
        let label = format!("n={n}");
        let ranks = betti(n, k)?.ranks;
        for (col, name) in f.header.iter().enumerate().skip(1) {
            let actual = ranks.get(col - 1).map(u128::to_string).unwrap_or_default();
            report.check(&label, name, row[col].trim(), actual);
        }
        if ranks.len() > f.header.len() - 1 {
            report.check(
                &label,
                "extra degrees",
                "",
                join_u128(&ranks[f.header.len() - 1..]),
            );
        }
    }
    Ok(report)
}

fn join_u128(v: &[u128]) -> String {
    v.iter().map(u128::to_string).collect::<Vec<_>>().join(" ")
}

fn verify_ktheory(f: &Fixture) -> Result<DiffReport> {
    let mut report = DiffReport::new(f.table);
    let kind = f.col("K")?;
    for row in &f.rows {
        let n = f.int(row, "n")?;
        let which = row[kind].trim();
        for (col, name) in f.header.iter().enumerate().skip(2) {
            let k: u64 = name.parse().map_err(|_| Error::Fixture {
                table: f.table.name().to_string(),
                reason: format!("column header {name:?} is not k"),
            })?;
            let actual = if n % k == 0 {
                let r = ktheory_ranks(n, k)?;
                if which == "K0" { r.k0 } else { r.k1 }.to_string()
            } else {
                String::new()
            };
            report.check(
                &format!("n={n} {which}"),
                &format!("k={k}"),
                row[col].trim(),
                actual,
            );
        }
    }
    Ok(report)
}

fn verify_catalog_rows(f: &Fixture, full_catalogs: bool) -> Result<DiffReport> {
    let mut report = DiffReport::new(f.table);
    let mut seen: BTreeMap<(u64, u64), BTreeSet<(String, u64)>> = BTreeMap::new();
    for row in &f.rows {
        let n = f.int(row, "n")?;
        let k = f.int(row, "k")?;
        let mu = f.partition(row)?;
        let exponent = f.int(row, "omega_exponent")?;
        let label = format!("n={n} k={k} mu={mu} omega^{exponent}");
        seen.entry((n, k))
            .or_default()
            .insert((mu.to_string(), exponent));

        let Some(omega) = enumerate_omegas(&mu, n, k)?
            .into_iter()
            .find(|w| w.exponent == exponent)
        else {
            report.check(&label, "omega_exponent", exponent, "absent");
            continue;
        };
        let c = complex_component(&mu, omega, n, k)?;
        report.check(
            &label,
            "omega_order",
            f.int(row, "omega_order")?,
            c.omega.order,
        );
        report.check(
            &label,
            "multiplicity",
            f.int(row, "multiplicity")?,
            c.multiplicity,
        );
        report.check(&label, "torus_dim", f.int(row, "torus_dim")?, c.torus_dim);
        let printed = CyclicSingularity {
            ambient_dim: f.int(row, "ambient_dim")?,
            group_order: f.int(row, "group_order")?,
            weights: f.ints(row, "weights")?,
        };
        report.check(
            &label,
            "ambient_dim",
            printed.ambient_dim,
            c.singularity.ambient_dim,
        );
        report.check(
            &label,
            "group_order",
            printed.group_order,
            c.singularity.group_order,
        );
        let mut expected_w = printed.weights.clone();
        let mut actual_w = c.singularity.weights.clone();
        expected_w.sort_unstable();
        actual_w.sort_unstable();
        report.check(&label, "weights", join(&expected_w), join(&actual_w));
        let (ce, ca) = (
            canonical_singularity(&printed),
            canonical_singularity(&c.singularity),
        );
        report.check(&label, "canonical", ce.to_string(), ca.to_string());
    }
    for ((n, k), keys) in seen {
        let computed: BTreeSet<(String, u64)> = if full_catalogs {
            decompose_complex(n, k)?
                .entries
                .iter()
                .map(|e| (e.partition().to_string(), e.omega().exponent))
                .collect()
        } else {
            let partitions: BTreeSet<&String> = keys.iter().map(|(p, _)| p).collect();
            let mut out = BTreeSet::new();
            for p in partitions {
                let mu: Partition = p.parse()?;
                out.extend(
                    enumerate_omegas(&mu, n, k)?
                        .into_iter()
                        .map(|w| (p.clone(), w.exponent)),
                );
            }
            out
        };
        let render = |s: &BTreeSet<(String, u64)>| {
            s.iter()
                .map(|(p, e)| format!("{p}@{e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        report.check(
            &format!("n={n} k={k}"),
            "strata",
            render(&keys),
            render(&computed),
        );
    }
    Ok(report)
}

fn verify_orientability(f: &Fixture) -> Result<DiffReport> {
    let mut report = DiffReport::new(f.table);
    let mut order = Vec::new();
    for row in &f.rows {
        let mu = f.partition(row)?;
        let n = mu.n();
        order.push(mu.to_string());
        let label = format!("mu={mu}");
        let g = mu.gcd_parts();
        let reduced: Vec<u64> = mu.runs().iter().map(|&(j, _)| j / g).collect();
        let excess: Vec<u64> = mu.runs().iter().map(|&(_, m)| m - 1).collect();
        report.check(
            &label,
            "reduced_parts",
            join(&f.ints(row, "reduced_parts")?),
            join(&reduced),
        );
        report.check(
            &label,
            "multiplicities_minus_one",
            join(&f.ints(row, "multiplicities_minus_one")?),
            join(&excess),
        );
        let omega = enumerate_omegas(&mu, n, 1)?[0];
        let r = real_component(&mu, omega, n, 1)?;
        report.check(&label, "x_count", f.int(row, "x_count")?, r.multiplicity);
        report.check(
            &label,
            "base_torus_dim",
            f.int(row, "base_torus_dim")?,
            r.base_torus_dim,
        );
        let mut expected: Vec<u64> = f
            .ints(row, "simplex_dims")?
            .into_iter()
            .filter(|&d| d > 0)
            .collect();
        let mut actual: Vec<u64> = r
            .fiber_simplex_dims
            .iter()
            .copied()
            .filter(|&d| d > 0)
            .collect();
        expected.sort_unstable();
        actual.sort_unstable();
        report.check(&label, "simplex_dims", join(&expected), join(&actual));
        let orientable = if bundle_orientable_k1(&mu) {
            "Yes"
        } else {
            "No"
        };
        report.check(
            &label,
            "orientable",
            row[f.col("orientable")?].trim(),
            orientable,
        );
    }
    if let Some(n) = f
        .rows
        .first()
        .map(|r| f.partition(r))
        .transpose()?
        .map(|p| p.n())
    {
        let all: Vec<String> = Partitions::new(n).map(|p| p.to_string()).collect();
        report.check(
            &format!("n={n}"),
            "partitions",
            order.join(" "),
            all.join(" "),
        );
    }
    Ok(report)
}
