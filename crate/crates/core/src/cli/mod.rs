//! Command-line front end: argument types, job execution and report
//! rendering. The binary only parses arguments and prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclic::{hc_tower_surjectivity, mod_p_control, CyclicComplexBundle, RelativeCyclic};
use crate::dga::{dga_from_toml, koszul_resolution, reduction_map, DGAlgebra};
use crate::error::{Error, Result};
use crate::filtered::{adic_filtration, filtered_ring_from_toml, graded_comparison, FilteredRing};
use crate::hochschild::HochschildComplex;
use crate::intlin::{is_prime, AbelianGroup};
use crate::ktheory::k_table;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug, Clone)]
#[command(name = "shukla", version, about = "Exact Hochschild and cyclic homology of small DG rings over Z")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RingArgs {
    /// `zmod:P^N` for the resolution of Z/P^N, or a TOML file.
    #[arg(long)]
    pub ring: String,
    /// Highest degree reported. Defaults to 2p-1 for `zmod:` rings.
    #[arg(long)]
    pub max_degree: Option<i64>,
    /// Allow degrees above 2p-1 for `zmod:` rings; those results are flagged.
    #[arg(long)]
    pub allow_unverified: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Hochschild homology HH_i.
    Hh(RingArgs),
    /// Cyclic homology HC_i.
    Hc(RingArgs),
    /// Relative cyclic homology of Z/p^n -> Z/p^m.
    RelHc {
        #[command(flatten)]
        ring: RingArgs,
        /// Target `zmod:P^M`; defaults to one level down.
        #[arg(long)]
        to: Option<String>,
    },
    /// Compare the filtered cyclic bar construction with its graded pieces.
    GrCheck {
        /// `zmod:P^N` for the p-adic filtration, or a filtered ring TOML file.
        #[arg(long)]
        ring: String,
        /// Highest simplicial degree.
        #[arg(long, default_value_t = 3)]
        max_q: usize,
    },
    /// K-groups of Z/p^n in degrees 1..=p-3.
    KGroups {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Recompute the reference tables and report PASS/FAIL per cell.
    ReproducePaper {
        #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = vec![3u64, 5, 7])]
        p: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = vec![1u32, 2, 3])]
        n: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub degree: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
    pub flags: Vec<String>,
    pub provenance: Vec<String>,
}

impl ResultRow {
    fn new(degree: i64, g: &AbelianGroup, flags: Vec<String>, provenance: Vec<String>) -> Self {
        ResultRow {
            degree,
            level: None,
            free_rank: g.free_rank(),
            invariant_factors: g.invariant_factors().iter().map(|d| d.to_string()).collect(),
            flags,
            provenance,
        }
    }

    pub fn group(&self) -> AbelianGroup {
        let orders = self.invariant_factors.iter().map(|d| d.parse().expect("decimal")).collect();
        AbelianGroup::from_orders(self.free_rank, orders)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub results: Vec<ResultRow>,
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip)]
    pub failed: bool,
}

impl Report {
    fn new(command: &str, params: BTreeMap<String, Value>) -> Self {
        Report { schema_version: SCHEMA_VERSION, command: command.into(), params, results: Vec::new(), lines: Vec::new(), failed: false }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable report") + "\n",
            Format::Text => {
                let mut s = String::new();
                for l in &self.lines {
                    writeln!(s, "{l}").unwrap();
                }
                s
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    ZMod { p: u64, n: u32 },
    File(PathBuf),
}

impl RingSpec {
    pub fn parse(s: &str) -> Result<RingSpec> {
        let Some(rest) = s.strip_prefix("zmod:") else {
            return Ok(RingSpec::File(PathBuf::from(s)));
        };
        let (p, n) = match rest.split_once('^') {
            Some((p, n)) => (p, n),
            None => (rest, "1"),
        };
        let p: u64 = p.trim().parse().map_err(|_| Error::InvalidParams(format!("bad prime in '{s}'")))?;
        let n: u32 = n.trim().parse().map_err(|_| Error::InvalidParams(format!("bad exponent in '{s}'")))?;
        if !is_prime(p) || n < 1 {
            return Err(Error::InvalidParams(format!("'{s}' needs a prime p and n >= 1")));
        }
        Ok(RingSpec::ZMod { p, n })
    }

    fn label(&self) -> String {
        match self {
            RingSpec::ZMod { p, n } => format!("zmod:{p}^{n}"),
            RingSpec::File(path) => path.display().to_string(),
        }
    }

    fn read(path: &PathBuf) -> Result<String> {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn algebra(&self) -> Result<DGAlgebra> {
        match self {
            RingSpec::ZMod { p, n } => koszul_resolution(&BigInt::from(*p).pow(*n)),
            RingSpec::File(path) => dga_from_toml(&Self::read(path)?),
        }
    }

    pub fn filtered(&self) -> Result<FilteredRing> {
        match self {
            RingSpec::ZMod { p, n } => adic_filtration(*p, *n),
            RingSpec::File(path) => filtered_ring_from_toml(&Self::read(path)?),
        }
    }
}

const DEFAULT_FILE_DEGREE: i64 = 4;

/// Checked degree window: returns the top degree and the first degree that
/// lies outside the verified window, if any.
fn degree_window(ring: &RingSpec, args: &RingArgs) -> Result<(i64, Option<i64>)> {
    let verified = match ring {
        RingSpec::ZMod { p, .. } => Some(2 * *p as i64 - 1),
        RingSpec::File(_) => None,
    };
    let max = args.max_degree.unwrap_or(verified.unwrap_or(DEFAULT_FILE_DEGREE));
    if max < 0 {
        return Err(Error::InvalidParams(format!("max degree {max} is negative")));
    }
    match verified {
        Some(v) if max > v && !args.allow_unverified => Err(Error::Range(format!(
            "max degree {max} is above the verified window 0..={v}; pass --allow-unverified"
        ))),
        Some(v) if max > v => Ok((max, Some(v + 1))),
        _ => Ok((max, None)),
    }
}

fn ring_params(ring: &RingSpec, max: i64, args: &RingArgs) -> BTreeMap<String, Value> {
    let mut params = BTreeMap::new();
    params.insert("ring".into(), json!(ring.label()));
    params.insert("max_degree".into(), json!(max));
    params.insert("allow_unverified".into(), json!(args.allow_unverified));
    params
}

fn flags_for(i: i64, unverified_from: Option<i64>) -> Vec<String> {
    match unverified_from {
        Some(u) if i >= u => vec!["UNVERIFIED".into()],
        _ => Vec::new(),
    }
}

fn push_group(report: &mut Report, name: &str, i: i64, g: &AbelianGroup, flags: Vec<String>, provenance: Vec<String>) {
    let suffix = if flags.is_empty() { String::new() } else { format!(" [{}]", flags.join(", ")) };
    report.lines.push(format!("{name}_{i} = {g}{suffix}"));
    report.results.push(ResultRow::new(i, g, flags, provenance));
}

fn run_absolute(kind: &str, args: &RingArgs) -> Result<Report> {
    let ring = RingSpec::parse(&args.ring)?;
    let (max, unverified) = degree_window(&ring, args)?;
    let a = ring.algebra()?;
    let mut report = Report::new(kind, ring_params(&ring, max, args));
    let (name, provenance) = if kind == "hh" {
        ("HH", format!("normalized Hochschild complex through degree {}", max + 1))
    } else {
        ("HC", format!("total complex of the (b, B) bicomplex through degree {}", max + 1))
    };
    report.lines.push(format!("# {name} of {} for degrees 0..={max}", ring.label()));
    let groups: Vec<AbelianGroup> = if kind == "hh" {
        let h = HochschildComplex::new(&a, max)?;
        (0..=max).map(|i| h.homology(i)).collect::<Result<_>>()?
    } else {
        let b = CyclicComplexBundle::new(&a, max)?;
        (0..=max).map(|i| b.homology(i)).collect::<Result<_>>()?
    };
    for (i, g) in (0..=max).zip(&groups) {
        push_group(&mut report, name, i, g, flags_for(i, unverified), vec![provenance.clone()]);
    }
    Ok(report)
}

fn run_relative(args: &RingArgs, to: Option<&str>) -> Result<Report> {
    let ring = RingSpec::parse(&args.ring)?;
    let RingSpec::ZMod { p, n } = ring else {
        return Err(Error::InvalidParams("rel-hc needs a zmod: ring".into()));
    };
    let m = match to.map(RingSpec::parse).transpose()? {
        None => n.checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| Error::InvalidParams("rel-hc needs n >= 2".into()))?,
        Some(RingSpec::ZMod { p: q, n: m }) if q == p && m < n => m,
        Some(other) => {
            return Err(Error::InvalidParams(format!("target {} must be zmod:{p}^m with m < {n}", other.label())))
        }
    };
    let (max, unverified) = degree_window(&ring, args)?;
    let pb = BigInt::from(p);
    let f = reduction_map(&pb.pow(n), &pb.pow(m))?;
    let rel = RelativeCyclic::new(&f, max)?;
    let mut params = ring_params(&ring, max, args);
    params.insert("to".into(), json!(format!("zmod:{p}^{m}")));
    let mut report = Report::new("rel-hc", params);
    report.lines.push(format!("# relative HC of zmod:{p}^{n} -> zmod:{p}^{m} for degrees 0..={max}"));
    let provenance = "H_{i+1} of the mapping cone of the induced map of (b, B) total complexes".to_string();
    for i in 0..=max {
        let g = rel.homology(i)?;
        push_group(&mut report, "HC", i, &g, flags_for(i, unverified), vec![provenance.clone()]);
    }
    Ok(report)
}

fn run_gr_check(ring: &str, max_q: usize) -> Result<Report> {
    let spec = RingSpec::parse(ring)?;
    let r = spec.filtered()?;
    let mut params = BTreeMap::new();
    params.insert("ring".into(), json!(spec.label()));
    params.insert("max_q".into(), json!(max_q));
    let mut report = Report::new("gr-check", params);
    for q in 0..=max_q {
        for k in (q as i64 + 1) * r.lo() - 1..=1 {
            let c = graded_comparison(&r, q, k);
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            report.failed |= !c.passed;
            report.lines.push(format!("{verdict} q={q} k={k}: {} vs {}", c.lhs, c.rhs));
            let mut row = ResultRow::new(
                q as i64,
                &c.lhs,
                vec![verdict.into()],
                vec![format!("graded piece of Z_{q} at level {k}; direct sum side {}", c.rhs)],
            );
            row.level = Some(k);
            report.results.push(row);
        }
    }
    Ok(report)
}

fn run_k_groups(p: u64, n: u32) -> Result<Report> {
    let table = k_table(p, n)?;
    let mut params = BTreeMap::new();
    params.insert("p".into(), json!(p));
    params.insert("n".into(), json!(n));
    let mut report = Report::new("k-groups", params);
    report.lines.push(format!("# K_i(Z/{p}^{n}) for 1 <= i <= {}", p - 3));
    for e in &table {
        let mut flags: Vec<String> = e.tower.iter().map(|r| r.certificate.as_str().to_string()).collect();
        flags.dedup();
        if e.provenance.iter().any(|s| s.starts_with("AXIOM-TC")) {
            flags.push("AXIOM-TC".into());
        }
        if !e.matches_closed_form {
            flags.push("MISMATCH".into());
            report.failed = true;
        }
        push_group(&mut report, "K", e.degree, &e.group, flags, e.provenance.clone());
    }
    Ok(report)
}

/// One PASS/FAIL cell of the reference tables.
#[derive(Clone, Debug)]
struct Cell {
    table: &'static str,
    p: u64,
    n: u32,
    degree: i64,
    group: AbelianGroup,
    got: String,
    expected: String,
    ok: bool,
}

fn cell(table: &'static str, p: u64, n: u32, degree: i64, got: AbelianGroup, expected: AbelianGroup) -> Cell {
    let ok = got == expected;
    Cell { table, p, n, degree, got: got.to_string(), expected: expected.to_string(), group: got, ok }
}

fn pow_group(p: u64, e: u32) -> AbelianGroup {
    AbelianGroup::from_orders(0, vec![BigInt::from(p).pow(e)])
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Absolute(u64, u32),
    Hochschild(u64, u32),
    Relative(u64, u32),
    ModP(u64, u32),
    Tower(u64, u32),
    K(u64, u32),
}

fn run_task(t: Task) -> Result<Vec<Cell>> {
    let even = |i: i64, g: AbelianGroup| if i % 2 == 0 { g } else { AbelianGroup::trivial() };
    Ok(match t {
        Task::Absolute(p, n) => {
            let top = 2 * p as i64 - 1;
            let b = CyclicComplexBundle::new(&koszul_resolution(&BigInt::from(p).pow(n))?, top)?;
            (0..=top)
                .map(|i| Ok(cell("hc", p, n, i, b.homology(i)?, even(i, pow_group(p, n * (i as u32 / 2 + 1))))))
                .collect::<Result<_>>()?
        }
        Task::Hochschild(p, n) => {
            let top = 2 * p as i64 - 1;
            let h = HochschildComplex::new(&koszul_resolution(&BigInt::from(p).pow(n))?, top)?;
            (0..=top).map(|i| Ok(cell("hh", p, n, i, h.homology(i)?, even(i, pow_group(p, n))))).collect::<Result<_>>()?
        }
        Task::Relative(p, n) => {
            let top = 2 * p as i64 - 1;
            let pb = BigInt::from(p);
            let rel = RelativeCyclic::new(&reduction_map(&pb.pow(n), &pb.pow(n - 1))?, top)?;
            (0..=top)
                .map(|i| Ok(cell("rel-hc", p, n, i, rel.homology(i)?, even(i, pow_group(p, i as u32 / 2 + 1)))))
                .collect::<Result<_>>()?
        }
        Task::ModP(p, n) => mod_p_control(p, n, 2 * p as i64 - 1)?
            .into_iter()
            .enumerate()
            .map(|(i, g)| cell("hc-mod-p", p, n, i as i64, g, pow_group(p, 1)))
            .collect(),
        Task::Tower(p, n) => (0..2 * p as i64)
            .map(|i| {
                let r = hc_tower_surjectivity(p, n, i)?;
                let got = format!("{} -> {} {}", r.source, r.target, if r.onto { "onto" } else { "not onto" });
                let expected = format!("{} -> {} onto", r.source, r.target);
                Ok(Cell { table: "tower", p, n, degree: i, group: r.target, got, expected, ok: r.onto })
            })
            .collect::<Result<_>>()?,
        Task::K(p, n) => k_table(p, n)?
            .into_iter()
            .map(|e| {
                let i = e.degree;
                let expected = if i % 2 == 1 {
                    let j = ((i + 1) / 2) as u32;
                    let pb = BigInt::from(p);
                    AbelianGroup::from_orders(0, vec![pb.pow(j * (n - 1)) * (pb.pow(j) - 1)])
                } else {
                    AbelianGroup::trivial()
                };
                cell("k", p, n, i, e.group, expected)
            })
            .collect(),
    })
}

fn run_reproduce(ps: &[u64], ns: &[u32]) -> Result<Report> {
    if let Some(p) = ps.iter().find(|&&p| !is_prime(p) || p < 3) {
        return Err(Error::InvalidParams(format!("{p} is not a prime >= 3")));
    }
    if ns.contains(&0) {
        return Err(Error::InvalidParams("levels must be at least 1".into()));
    }
    let mut tasks = Vec::new();
    for &p in ps {
        for &n in ns {
            tasks.extend([Task::Absolute(p, n), Task::Hochschild(p, n), Task::ModP(p, n)]);
            if n >= 2 {
                tasks.extend([Task::Relative(p, n), Task::Tower(p, n)]);
            }
            if p >= 5 {
                tasks.push(Task::K(p, n));
            }
        }
    }
    let results: Vec<Vec<Cell>> = tasks.par_iter().map(|&t| run_task(t)).collect::<Result<_>>()?;
    let mut params = BTreeMap::new();
    params.insert("p".into(), json!(ps));
    params.insert("n".into(), json!(ns));
    let mut report = Report::new("reproduce-paper", params);
    let (mut pass, mut total) = (0, 0);
    for c in results.into_iter().flatten() {
        let ok = c.ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        total += 1;
        pass += usize::from(ok);
        report.failed |= !ok;
        let name = format!("{} p={} n={} i={}", c.table, c.p, c.n, c.degree);
        report.lines.push(format!("{verdict} {name}: got {}, expected {}", c.got, c.expected));
        report.results.push(ResultRow::new(c.degree, &c.group, vec![verdict.into()], vec![name, format!("expected {}", c.expected)]));
    }
    report.lines.push(format!("{pass}/{total} cells passed"));
    Ok(report)
}

/// Runs a parsed job.
pub fn run(spec: &JobSpec) -> Result<Report> {
    match &spec.command {
        Command::Hh(args) => run_absolute("hh", args),
        Command::Hc(args) => run_absolute("hc", args),
        Command::RelHc { ring, to } => run_relative(ring, to.as_deref()),
        Command::GrCheck { ring, max_q } => run_gr_check(ring, *max_q),
        Command::KGroups { p, n } => run_k_groups(*p, *n),
        Command::ReproducePaper { p, n } => run_reproduce(p, n),
    }
}

/// Output of a full invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the job.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let spec = match JobSpec::try_parse_from(args) {
        Ok(s) => s,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run(&spec) {
        Ok(report) => Outcome { code: report.exit_code(), stdout: report.render(spec.format), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
