//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input
//! error, 3 a budget or size cap was exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::construction::{
    binomial_family, theorem7_distinct_count, DEFAULT_ENUMERATION_BUDGET, DEFAULT_LEMMA6_BUDGET,
};
use crate::counting::{enumerate_s, theorem1_bound, BoundFlag};
use crate::error::Error;
use crate::integers::{Factorizer, DEFAULT_CAP_BITS};
use crate::oracle::{
    exact_element_order_with, group_order_factorization, scan, verify_instance, BRule, ScanOptions,
    VerificationReport, VerifyOptions,
};
use crate::parameters::{build_spec, ExtensionSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "binomial-order",
    version,
    about = "High order elements θ + b in F_q[x]/(x^m - a)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BRuleArg {
    One,
    All,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Prime base field size, at least 5.
    #[arg(long)]
    q: u64,
    /// Extension degree.
    #[arg(long)]
    m: usize,
    /// Nonzero constant of θ + b.
    #[arg(long, default_value_t = 1)]
    b: u64,
    /// Use this a instead of the default construction.
    #[arg(long)]
    a: Option<u64>,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Largest |S| enumerated exhaustively.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    enum_budget: u64,
    /// Largest factorization input, in bits.
    #[arg(long, default_value_t = DEFAULT_CAP_BITS)]
    factor_cap_bits: u64,
    /// Largest number of tuples visited by the degree-sum search.
    #[arg(long, default_value_t = DEFAULT_LEMMA6_BUDGET)]
    lemma6_budget: u64,
}

impl BudgetArgs {
    fn verify_options(&self, a_override: Option<u64>) -> VerifyOptions {
        VerifyOptions {
            a_override,
            enumeration_budget: self.enum_budget,
            lemma6_budget: self.lemma6_budget,
            factor_cap_bits: self.factor_cap_bits,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the instance parameters.
    Params {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the k·l conjugate binomials of θ + b.
    Binomials {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count the selection set S and evaluate the order bounds.
    CountS {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Also enumerate S and count distinct products.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        enum_budget: u64,
    },
    /// Exact multiplicative order of θ + b.
    Order {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = DEFAULT_CAP_BITS)]
        factor_cap_bits: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run every check for one instance.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify a grid of instances.
    Scan {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long)]
        m_max: usize,
        #[arg(long, value_enum, default_value = "one")]
        b_rule: BRuleArg,
        /// Include instances with m | q - 1.
        #[arg(long)]
        include_degenerate: bool,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Failure of a subcommand, already mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = if err.is_budget() {
            EXIT_BUDGET
        } else if matches!(err, Error::FormulaMismatch(_)) {
            EXIT_CHECK_FAILED
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("output error: {err}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(err: csv::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("output error: {err}"),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let is_info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if is_info {
                let _ = write!(out, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Params { instance, format } => params(&instance, format, out, err),
        Command::Binomials { instance, format } => binomials(&instance, format, out),
        Command::CountS {
            instance,
            exhaustive,
            enum_budget,
        } => count_s(&instance, exhaustive, enum_budget, out),
        Command::Order {
            instance,
            factor_cap_bits,
            format,
        } => order(&instance, factor_cap_bits, format, out),
        Command::Verify {
            instance,
            budgets,
            format,
        } => verify(&instance, &budgets, format, out),
        Command::Scan {
            q,
            m_max,
            b_rule,
            include_degenerate,
            budgets,
            format,
        } => {
            let options = ScanOptions {
                q_set: q,
                m_max,
                b_rule: match b_rule {
                    BRuleArg::One => BRule::One,
                    BRuleArg::All => BRule::All,
                },
                include_degenerate,
                verify: budgets.verify_options(None),
            };
            run_scan(&options, format, out, err)
        }
    }
}

fn spec_for(instance: &InstanceArgs) -> Result<ExtensionSpec, Failure> {
    Ok(build_spec(instance.q, instance.m, instance.b, instance.a)?)
}

fn params(
    instance: &InstanceArgs,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let spec = spec_for(instance)?;
    for warning in spec.warnings() {
        writeln!(err, "warning: {warning}")?;
    }
    match format {
        Format::Json => writeln!(out, "{}", spec.to_json())?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(["q", "m", "a", "b", "e", "k", "l", "t"])?;
            let record = spec.to_record();
            writer.write_record([
                record.q.to_string(),
                record.m.to_string(),
                record.a.to_string(),
                record.b.to_string(),
                record.e.to_string(),
                record.k.to_string(),
                record.l.to_string(),
                record.t,
            ])?;
            writer.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "field      F_{}[x]/(x^{} - {})",
                spec.q(),
                spec.m(),
                spec.a()
            )?;
            writeln!(out, "element    θ + {}", spec.b())?;
            writeln!(out, "ord(a)     {}", spec.e())?;
            writeln!(out, "m = k·l    {} = {}·{}", spec.m(), spec.k(), spec.l())?;
            writeln!(
                out,
                "t          {} (mod q-1: {})",
                spec.t(),
                spec.t_reduced()
            )?;
            for (i, row) in spec.exponent_table().iter().enumerate() {
                writeln!(
                    out,
                    "i={i:<4} q^{} = {} + {}·{}",
                    row.alpha,
                    i * spec.k() + 1,
                    row.r,
                    spec.m()
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BinomialLine {
    i: usize,
    j: usize,
    elem: String,
}

fn binomials(instance: &InstanceArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let spec = spec_for(instance)?;
    let family = binomial_family(&spec);
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            for binom in &family {
                writer.serialize(BinomialLine {
                    i: binom.i,
                    j: binom.j,
                    elem: binom.to_element(&spec).to_string(),
                })?;
            }
            writer.flush()?;
        }
        Format::Json => {
            for binom in &family {
                let line = BinomialLine {
                    i: binom.i,
                    j: binom.j,
                    elem: binom.to_element(&spec).to_string(),
                };
                writeln!(out, "{}", serde_json::to_string(&line).expect("serializes"))?;
            }
        }
        Format::Text => {
            for binom in &family {
                writeln!(
                    out,
                    "i={} j={} elem={}",
                    binom.i,
                    binom.j,
                    binom.to_element(&spec)
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// JSON shape of `count-s`.
#[derive(Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct CountSRecord {
    pub k: usize,
    pub l: usize,
    pub s_count: String,
    pub theorem1_bound: String,
    pub lemma8_w: Option<usize>,
    pub lemma8_count: Option<String>,
    pub case: u8,
    pub flags: Vec<BoundFlag>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enumerated_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distinct_products: Option<String>,
}

fn count_s(
    instance: &InstanceArgs,
    exhaustive: bool,
    budget: u64,
    out: &mut dyn Write,
) -> CmdResult {
    let spec = spec_for(instance)?;
    let report = theorem1_bound(spec.k(), spec.l(), spec.m());
    let mut record = CountSRecord {
        k: report.k,
        l: report.l,
        s_count: report.s_count.to_string(),
        theorem1_bound: report.theorem1_bound.to_string(),
        lemma8_w: report.lemma8.as_ref().map(|s| s.w),
        lemma8_count: report.lemma8.as_ref().map(|s| s.count.to_string()),
        case: report.case_id,
        flags: report.flags.clone(),
        enumerated_count: None,
        distinct_products: None,
    };
    let mut code = EXIT_OK;
    if exhaustive {
        let m = BigUint::from(spec.m());
        let enumerated = BigUint::from(enumerate_s(spec.k(), spec.l(), &m, budget)?.count());
        let distinct = theorem7_distinct_count(&spec, budget)?;
        if enumerated != report.s_count || !distinct.all_distinct() {
            code = EXIT_CHECK_FAILED;
        }
        record.enumerated_count = Some(enumerated.to_string());
        record.distinct_products = Some(distinct.distinct.to_string());
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string(&record).expect("serializes")
    )?;
    Ok(code)
}

#[derive(Serialize)]
struct OrderRecord {
    q: u64,
    m: usize,
    a: u64,
    b: u64,
    element: String,
    order: String,
    group_order: String,
}

fn order(instance: &InstanceArgs, cap_bits: u64, format: Format, out: &mut dyn Write) -> CmdResult {
    let spec = spec_for(instance)?;
    let factorizer = Factorizer::with_cap_bits(cap_bits);
    let x = spec.theta_plus_b();
    let order = exact_element_order_with(&spec, &x, &factorizer)?;
    let group = group_order_factorization(&spec, &factorizer)?;
    let record = OrderRecord {
        q: spec.q(),
        m: spec.m(),
        a: spec.a().value(),
        b: spec.b().value(),
        element: x.to_string(),
        order: order.to_string(),
        group_order: group.value().to_string(),
    };
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&record).expect("serializes")
        )?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.serialize(&record)?;
            writer.flush()?;
        }
        Format::Text => {
            writeln!(out, "ord(θ + {}) = {}", record.b, record.order)?;
            writeln!(out, "q^m - 1     = {} = {}", record.group_order, group)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_report_text(report: &VerificationReport, out: &mut dyn Write) -> std::io::Result<()> {
    let spec = &report.spec;
    writeln!(
        out,
        "q={} m={} a={} b={}  k={} l={} case {}",
        spec.q(),
        spec.m(),
        spec.a(),
        spec.b(),
        spec.k(),
        spec.l(),
        report.bound.case_id
    )?;
    writeln!(out, "  exact order      {}", report.exact_order)?;
    writeln!(out, "  ⌈2^sqrt(2m)⌉      {}", report.bound.theorem1_bound)?;
    writeln!(out, "  ⌊(29/5)^k⌋        {}", report.bound.lemma5_floor)?;
    writeln!(out, "  |S|              {}", report.bound.s_count)?;
    if let Some(s) = &report.bound.lemma8 {
        writeln!(out, "  constructive     w={} count={}", s.w, s.count)?;
    }
    for flag in &report.bound.flags {
        writeln!(out, "  flag: {flag}")?;
    }
    for warning in spec.warnings() {
        writeln!(out, "  warning: {warning}")?;
    }
    let checks = serde_json::to_value(&report.checks).expect("serializes");
    if let Some(map) = checks.as_object() {
        for (name, value) in map {
            let shown = match value {
                serde_json::Value::Bool(true) => "pass",
                serde_json::Value::Bool(false) => "FAIL",
                _ => "skipped",
            };
            writeln!(out, "  {name:<26}{shown}")?;
        }
    }
    for note in &report.skipped {
        writeln!(out, "  skipped: {note}")?;
    }
    for (name, elapsed) in &report.timings {
        writeln!(out, "  time {name:<22}{:.3}s", elapsed.as_secs_f64())?;
    }
    Ok(())
}

fn verify(
    instance: &InstanceArgs,
    budgets: &BudgetArgs,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let options = budgets.verify_options(instance.a);
    let report = verify_instance(instance.q, instance.m, instance.b, &options)?;
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.serialize(report.to_csv_row())?;
            writer.flush()?;
        }
        Format::Text => write_report_text(&report, out)?,
    }
    Ok(if report.all_checks_pass() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Serialize)]
struct ScanErrorLine<'a> {
    q: u64,
    m: usize,
    b: u64,
    error: &'a str,
}

fn run_scan(
    options: &ScanOptions,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let rows = scan(options)?;
    let mut failed = false;
    let mut over_budget = false;
    let mut csv_writer = (format == Format::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    for row in &rows {
        match &row.outcome {
            Ok(report) => {
                failed |= !report.all_checks_pass();
                match format {
                    Format::Json => writeln!(out, "{}", report.to_json())?,
                    Format::Csv => csv_writer
                        .as_mut()
                        .expect("csv writer")
                        .serialize(report.to_csv_row())?,
                    Format::Text => write_report_text(report, out)?,
                }
            }
            Err(e) => {
                if e.is_budget() {
                    over_budget = true;
                } else {
                    failed = true;
                }
                let message = e.to_string();
                match format {
                    Format::Json => {
                        let line = ScanErrorLine {
                            q: row.q,
                            m: row.m,
                            b: row.b,
                            error: &message,
                        };
                        writeln!(out, "{}", serde_json::to_string(&line).expect("serializes"))?;
                    }
                    _ => writeln!(err, "q={} m={} b={}: {message}", row.q, row.m, row.b)?,
                }
            }
        }
    }
    if let Some(writer) = csv_writer {
        let bytes = writer
            .into_inner()
            .map_err(|e| Failure::from(std::io::Error::other(e.to_string())))?;
        if bytes.is_empty() {
            // Header only comes from the first serialized row.
            writeln!(
                out,
                "q,m,a,b,k,l,case,s_count,theorem1_bound,exact_order,all_checks_pass"
            )?;
        } else {
            out.write_all(&bytes)?;
        }
    }
    Ok(if failed {
        EXIT_CHECK_FAILED
    } else if over_budget {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}
