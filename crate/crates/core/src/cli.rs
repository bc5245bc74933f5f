//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification or duality check finds a
//! mismatch, 2 for usage and domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::complex::{
    complex_component, decompose_complex, enumerate_omegas, y_mu_count, y_mu_count_direct,
    ComplexComponent, OmegaLabel, QuotientCatalog, Stratum,
};
use crate::error::{check_divides, Error, Result};
use crate::numtheory::{divisor_sigma, divisors, pillai, pillai_via_totient};
use crate::partitions::{partitions_pairs, Partition, Partitions};
use crate::real::{decompose_real, real_component, RealComponent};
use crate::reference::{verify, verify_dir, DiffReport, TableId};
use crate::topology::{
    betti, betti_table, duality_report, euler_characteristic, ktheory_ranks, ktheory_table,
    top_betti, Table,
};

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "EXTQUOT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "extquot",
    version,
    about = "Extended quotients of type A maximal tori by the Weyl group"
)]
pub struct Cli {
    /// Worker threads (default: all cores; EXTQUOT_THREADS takes precedence)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Complex,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Betti,
    Ktheory,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the component catalog of S_k//W or T_k//W
    Decompose {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = FormArg::Complex)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Restrict to one partition, e.g. 1+1+2+2 or 2^2,4^1
        #[arg(long)]
        partition: Option<String>,
    },
    /// Print a single component
    Component {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        partition: String,
        /// Exponent of omega in C_h, h = gcd(g, k)
        #[arg(long, default_value_t = 0)]
        omega: u64,
        #[arg(long, value_enum, default_value_t = FormArg::Complex)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Betti numbers b_0 .. b_D
    Betti {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Ranks of K^0 and K^1
    Ktheory {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Euler characteristic
    Euler {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// Betti or K-theory table in the appendix layout
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long)]
        max_n: u64,
        #[arg(long, default_value_t = 1)]
        min_n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        even_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare S_k//W with its Langlands dual S_{n/k}//W for every k | n
    Duality {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Regression against the published tables (paper, all, or one table id)
    Verify {
        suite: String,
        /// Read fixtures from this directory instead of the embedded copies
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .or(cli.threads)
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 2;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Result<i32> {
    match *command {
        Command::Decompose {
            n,
            k,
            form,
            format,
            ref partition,
        } => {
            check_divides(n, k)?;
            let only = partition
                .as_deref()
                .map(|p| parse_partition(p, n))
                .transpose()?;
            match form {
                FormArg::Complex => {
                    let catalog = match &only {
                        Some(mu) => single_partition(mu, n, k, complex_component)?,
                        None => decompose_complex(n, k)?,
                    };
                    emit_catalog(&catalog, format, out);
                }
                FormArg::Real => {
                    let catalog = match &only {
                        Some(mu) => single_partition(mu, n, k, real_component)?,
                        None => decompose_real(n, k)?,
                    };
                    emit_catalog(&catalog, format, out);
                }
            }
            Ok(0)
        }
        Command::Component {
            n,
            k,
            ref partition,
            omega,
            form,
            format,
        } => {
            check_divides(n, k)?;
            let mu = parse_partition(partition, n)?;
            let label = enumerate_omegas(&mu, n, k)?
                .into_iter()
                .find(|w| w.exponent == omega)
                .ok_or_else(|| {
                    Error::domain(format!("omega exponent {omega} is out of range for {mu}"))
                })?;
            match form {
                FormArg::Complex => {
                    let c = complex_component(&mu, label, n, k)?;
                    emit_catalog(
                        &QuotientCatalog {
                            n,
                            k,
                            entries: vec![c],
                        },
                        format,
                        out,
                    );
                }
                FormArg::Real => {
                    let c = real_component(&mu, label, n, k)?;
                    emit_catalog(
                        &QuotientCatalog {
                            n,
                            k,
                            entries: vec![c],
                        },
                        format,
                        out,
                    );
                }
            }
            Ok(0)
        }
        Command::Betti { n, k, format } => {
            let b = betti(n, k)?;
            match format {
                Format::Json => line(out, serde_json::to_string(&b).expect("serializable")),
                Format::Csv | Format::Markdown => {
                    let t = betti_table(k, n, n, false)?;
                    out.extend(render_table(&t, format).into_bytes());
                }
                Format::Text => line(out, join_spaced(&b.ranks)),
            }
            Ok(0)
        }
        Command::Ktheory { n, k, format } => {
            let r = ktheory_ranks(n, k)?;
            match format {
                Format::Json => line(out, serde_json::to_string(&r).expect("serializable")),
                Format::Csv => line(out, format!("k0,k1\n{},{}", r.k0, r.k1)),
                Format::Markdown => line(
                    out,
                    format!("| K0 | K1 |\n| --- | --- |\n| {} | {} |", r.k0, r.k1),
                ),
                Format::Text => line(out, format!("{} {}", r.k0, r.k1)),
            }
            Ok(0)
        }
        Command::Euler { n, k } => {
            line(out, euler_characteristic(n, k)?.to_string());
            Ok(0)
        }
        Command::Table {
            kind,
            max_n,
            min_n,
            k,
            even_only,
            format,
        } => {
            if k == 0 {
                return Err(Error::domain("k must be positive"));
            }
            let table = match kind {
                TableKind::Betti => betti_table(k, min_n, max_n, even_only)?,
                TableKind::Ktheory => ktheory_table(min_n, max_n)?,
            };
            out.extend(render_table(&table, format).into_bytes());
            Ok(0)
        }
        Command::Duality { n, format } => cmd_duality(n, format, out),
        Command::Verify {
            ref suite,
            ref fixtures,
            format,
        } => cmd_verify(suite, fixtures.as_deref(), format, out),
    }
}

fn line(out: &mut Vec<u8>, s: impl AsRef<str>) {
    out.extend_from_slice(s.as_ref().as_bytes());
    out.push(b'\n');
}

fn join_spaced(v: &[u128]) -> String {
    v.iter().map(u128::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_partition(text: &str, n: u64) -> Result<Partition> {
    let mu: Partition = text.parse()?;
    if mu.n() != n {
        return Err(Error::InvalidPartition {
            input: text.to_string(),
            reason: format!("parts sum to {}, not n = {n}", mu.n()),
        });
    }
    Ok(mu)
}

fn single_partition<C>(
    mu: &Partition,
    n: u64,
    k: u64,
    build: fn(&Partition, OmegaLabel, u64, u64) -> Result<C>,
) -> Result<QuotientCatalog<C>> {
    let entries = enumerate_omegas(mu, n, k)?
        .into_iter()
        .map(|w| build(mu, w, n, k))
        .collect::<Result<_>>()?;
    Ok(QuotientCatalog { n, k, entries })
}

fn omega_string(w: OmegaLabel) -> String {
    if w.exponent == 0 {
        "1".to_string()
    } else {
        format!("zeta_{}^{}", w.h, w.exponent)
    }
}

/// Columns shared by both forms, then form-specific extras.
trait CatalogRow: Stratum {
    fn extra_header() -> Vec<&'static str>;
    fn extra_cells(&self) -> Vec<String>;
}

impl CatalogRow for ComplexComponent {
    fn extra_header() -> Vec<&'static str> {
        Vec::new()
    }
    fn extra_cells(&self) -> Vec<String> {
        Vec::new()
    }
}

fn spaced(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

impl CatalogRow for RealComponent {
    fn extra_header() -> Vec<&'static str> {
        vec![
            "fiber_simplex_dims",
            "join_counts",
            "action_orientation_preserving",
            "bundle_orientable",
        ]
    }
    fn extra_cells(&self) -> Vec<String> {
        vec![
            spaced(&self.fiber_simplex_dims),
            spaced(&self.join_counts),
            self.action_orientation_preserving.to_string(),
            self.bundle_orientable
                .map(|b| b.to_string())
                .unwrap_or_default(),
        ]
    }
}

fn catalog_table<C: CatalogRow>(catalog: &QuotientCatalog<C>, human: bool) -> Table {
    let mut header: Vec<String> = if human {
        ["mu", "omega", "|omega|", "|X|", "variety"]
            .map(String::from)
            .to_vec()
    } else {
        [
            "partition",
            "omega_exponent",
            "omega_order",
            "multiplicity",
            "torus_dim",
            "ambient_dim",
            "group_order",
            "weights",
            "variety",
        ]
        .map(String::from)
        .to_vec()
    };
    header.extend(C::extra_header().into_iter().map(String::from));
    let rows = catalog
        .entries
        .iter()
        .map(|e| {
            let w = e.omega();
            let mut row = if human {
                vec![
                    e.partition().to_string(),
                    omega_string(w),
                    w.order.to_string(),
                    e.multiplicity().to_string(),
                    e.variety(),
                ]
            } else {
                let s = e.singularity();
                vec![
                    e.partition().to_string(),
                    w.exponent.to_string(),
                    w.order.to_string(),
                    e.multiplicity().to_string(),
                    e.torus_dim().to_string(),
                    s.ambient_dim.to_string(),
                    s.group_order.to_string(),
                    spaced(&s.weights),
                    e.variety(),
                ]
            };
            row.extend(e.extra_cells());
            row
        })
        .collect();
    Table { header, rows }
}

fn emit_catalog<C: CatalogRow>(catalog: &QuotientCatalog<C>, format: Format, out: &mut Vec<u8>) {
    match format {
        Format::Json => line(
            out,
            serde_json::to_string_pretty(&catalog.to_json()).expect("serializable"),
        ),
        Format::Csv => out.extend(catalog_table(catalog, false).to_csv().into_bytes()),
        Format::Markdown | Format::Text => {
            line(
                out,
                format!(
                    "# {} extended quotient, n = {}, k = {}: {} component{}",
                    catalog.form(),
                    catalog.n,
                    catalog.k,
                    catalog.component_count(),
                    if catalog.component_count() == 1 {
                        ""
                    } else {
                        "s"
                    }
                ),
            );
            out.extend(catalog_table(catalog, true).to_markdown().into_bytes());
        }
    }
}

fn render_table(table: &Table, format: Format) -> String {
    match format {
        Format::Markdown | Format::Text => table.to_markdown(),
        Format::Json => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| {
                    table
                        .header
                        .iter()
                        .zip(r)
                        .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                        .collect::<serde_json::Map<_, _>>()
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&rows).expect("serializable")
            )
        }
        Format::Csv => table.to_csv(),
    }
}

fn cmd_duality(n: u64, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    let mut reports = Vec::new();
    for k in divisors(n)? {
        reports.push(duality_report(n, k)?);
    }
    let ok = reports.iter().all(|r| r.is_consistent());
    match format {
        Format::Json => line(
            out,
            serde_json::to_string_pretty(&reports).expect("serializable"),
        ),
        _ => {
            for r in &reports {
                let eq = |b: bool| if b { "equal" } else { "DIFFER" };
                line(
                    out,
                    format!(
                        "n={} k={} dual={} betti={} counts={} tori={} betti_numbers=[{}] singularity_differences=[{}]",
                        r.n,
                        r.k,
                        r.dual_k,
                        eq(r.betti_equal),
                        eq(r.counts_equal),
                        eq(r.torus_counts_equal),
                        join_spaced(&r.betti),
                        r.singularity_differences().join(" ")
                    ),
                );
            }
            line(out, format!("duality {}", if ok { "ok" } else { "FAILED" }));
        }
    }
    Ok(if ok { 0 } else { 1 })
}

/// A named invariant check run by `verify all`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn property_checks() -> Result<Vec<PropertyCheck>> {
    let mut checks = Vec::new();

    let mut bad = Vec::new();
    for n in 1..=30u64 {
        for k in divisors(n)? {
            if betti(n, k)?.ranks != betti(n, n / k)?.ranks {
                bad.push(format!("({n},{k})"));
            }
        }
    }
    checks.push(PropertyCheck {
        name: "duality_betti_n30",
        passed: bad.is_empty(),
        detail: bad.join(" "),
    });

    let mut bad = Vec::new();
    for n in 1..=40u64 {
        let ks = divisors(n)?;
        for mu in Partitions::new(n) {
            for &k in &ks {
                if y_mu_count(&mu, n, k)? != y_mu_count_direct(&mu, n, k)? {
                    bad.push(format!("({n},{k},{mu})"));
                }
            }
        }
    }
    checks.push(PropertyCheck {
        name: "component_count_closed_form_n40",
        passed: bad.is_empty(),
        detail: bad.join(" "),
    });

    let bad: Vec<String> = (1..=10_000u64)
        .filter(|&a| pillai(a).ok() != pillai_via_totient(a).ok())
        .map(|a| a.to_string())
        .collect();
    checks.push(PropertyCheck {
        name: "pillai_totient_1e4",
        passed: bad.is_empty(),
        detail: bad.join(" "),
    });

    let mut bad = Vec::new();
    for n in 1..=45u64 {
        let b = betti(n, 1)?;
        if b.euler_characteristic() != divisor_sigma(n)? as i128 {
            bad.push(format!("euler n={n}"));
        }
        let (deg, rank) = top_betti(n);
        if deg as usize != b.top_degree() || b.ranks.last() != Some(&rank) {
            bad.push(format!("top n={n}"));
        }
    }
    checks.push(PropertyCheck {
        name: "euler_and_top_betti_n45",
        passed: bad.is_empty(),
        detail: bad.join(" "),
    });

    let top: Vec<u128> = (0..=20).map(partitions_pairs).collect();
    checks.push(PropertyCheck {
        name: "two_colour_partitions_deg20",
        passed: top[0] == 1 && top[2] == 5,
        detail: String::new(),
    });
    Ok(checks)
}

fn cmd_verify(
    suite: &str,
    fixtures: Option<&std::path::Path>,
    format: Format,
    out: &mut Vec<u8>,
) -> Result<i32> {
    let (tables, with_properties): (Vec<TableId>, bool) = match suite {
        "paper" => (TableId::ALL.to_vec(), false),
        "all" => (TableId::ALL.to_vec(), true),
        other => (vec![other.parse()?], false),
    };
    let reports: Vec<DiffReport> = tables
        .iter()
        .map(|&t| match fixtures {
            Some(dir) => verify_dir(t, dir),
            None => verify(t),
        })
        .collect::<Result<_>>()?;
    let properties = if with_properties {
        property_checks()?
    } else {
        Vec::new()
    };
    let mismatches: usize = reports.iter().map(|r| r.mismatches.len()).sum::<usize>()
        + properties.iter().filter(|p| !p.passed).count();
    match format {
        Format::Json => line(
            out,
            serde_json::to_string_pretty(&json!({
                "suite": suite,
                "tables": reports,
                "properties": properties,
                "mismatches": mismatches,
                "status": if mismatches == 0 { "ok" } else { "mismatch" },
            }))
            .expect("serializable"),
        ),
        _ => {
            for r in &reports {
                line(
                    out,
                    format!(
                        "table={} cells={} mismatches={}",
                        r.table,
                        r.cells_checked,
                        r.mismatches.len()
                    ),
                );
                for m in &r.mismatches {
                    line(
                        out,
                        format!(
                            "mismatch table={} row={:?} column={:?} expected={:?} actual={:?}",
                            r.table, m.row, m.column, m.expected, m.actual
                        ),
                    );
                }
            }
            for p in &properties {
                line(
                    out,
                    format!("property={} passed={} {}", p.name, p.passed, p.detail).trim_end(),
                );
            }
            line(
                out,
                format!(
                    "summary suite={suite} tables={} properties={} mismatches={mismatches} status={}",
                    reports.len(),
                    properties.len(),
                    if mismatches == 0 { "ok" } else { "mismatch" }
                ),
            );
        }
    }
    Ok(if mismatches == 0 { 0 } else { 1 })
}
