//! Command-line front end: argument parsing, the subcommands, and report
//! emission.
//!
//! Exit codes: 0 on success, 1 when a verification failed (the report is
//! still written), 2 on invalid input.

mod args;
mod emit;
mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

pub use args::{Cli, Command, Emit, Place, RepArgs};
pub use emit::{emit_report, Output, Table, REPORT_COLUMNS};
pub use suites::{run_suite, SuiteParams, CHARSUM_TOLERANCE, SUITES};

use crate::exactalg::{series_expand, LaurentPoly, TruncatedSeries};
use crate::localrep::{self, LocalFieldData, Residue, UnramifiedRep};
use crate::reciprocity::{self, ParamPair};
use crate::whittaker::{self, TorusCocharacter};
use crate::zeta::{self, WeightResult, WeightValue, ZetaResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Everything that determines a run's output.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub emit: Emit,
    pub seed: u64,
    pub jobs: usize,
    pub timings: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
        let cfg = RunConfig { command: cli.command, emit: cli.emit, seed: cli.seed, jobs, timings: cli.timings };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.jobs == 0 {
            return Err(invalid("--jobs must be at least 1"));
        }
        Ok(())
    }
}

/// Result of one run: exit code and the bytes for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    fn invalid(e: CliError) -> Self {
        Outcome { code: EXIT_INVALID, stdout: Vec::new(), stderr: format!("whitlocal: {e}\n") }
    }

    /// A completed run; a failed check still emits its report.
    fn finished(out: &Output, ok: bool, emit: Emit) -> Self {
        Outcome { code: if ok { EXIT_OK } else { EXIT_FAILED }, stdout: out.render(emit), stderr: String::new() }
    }
}

/// Runs the configured command on a pool of `cfg.jobs` threads.
pub fn run_command(cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome::invalid(e);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(p) => p,
        Err(e) => return Outcome::invalid(invalid(e)),
    };
    match pool.install(|| dispatch(cfg)) {
        Ok((out, ok)) => Outcome::finished(&out, ok, cfg.emit),
        Err(e) => Outcome::invalid(e),
    }
}

/// Parses `args` (including the program name), runs, and writes to the
/// process streams. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match RunConfig::from_cli(cli) {
        Ok(cfg) => run_command(&cfg),
        Err(e) => Outcome::invalid(e),
    };
    let _ = std::io::stdout().write_all(&outcome.stdout);
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}

fn parse_field(p: &str, psi_cond: u32) -> Result<LocalFieldData, CliError> {
    let field = match p {
        "symbolic" | "q" => LocalFieldData::symbolic(),
        s => {
            let v: u64 = s.parse().map_err(|_| invalid(format!("--p must be an integer or \"symbolic\", got {s:?}")))?;
            LocalFieldData::numeric(v).map_err(invalid)?
        }
    };
    Ok(field.with_conductor(psi_cond))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| invalid(format!("{what}: {x:?} is not an integer"))))
        .collect()
}

fn parse_rep(json: Option<&str>, prefix: &str, rank: usize) -> Result<UnramifiedRep, CliError> {
    let rep = match json {
        Some(j) => serde_json::from_str(j).map_err(|e| invalid(format!("representation {j:?}: {e}")))?,
        None => UnramifiedRep::symbolic(prefix, rank).map_err(invalid)?,
    };
    if rep.rank() != rank {
        return Err(invalid(format!("expected a representation of rank {rank}, got rank {}", rep.rank())));
    }
    Ok(rep)
}

fn require_rank(n: usize, min: usize) -> Result<(), CliError> {
    if n < min {
        return Err(invalid(format!("--n must be at least {min}, got {n}")));
    }
    Ok(())
}

fn series_rows(table: &mut Table, s: &TruncatedSeries) {
    for (k, c) in s.coeffs().iter().enumerate() {
        table.push(vec![k.to_string(), c.to_string()]);
    }
}

fn series_text(s: &TruncatedSeries) -> String {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("  {}^{k}: {c}\n", s.var()))
        .collect()
}

fn dispatch(cfg: &RunConfig) -> Result<(Output, bool), CliError> {
    match &cfg.command {
        Command::Lfactor { n, order, reps } => lfactor(*n, *order, reps),
        Command::Whittaker { n, mu, level, p, psi_cond, contragredient, rep } => {
            whittaker_cmd(*n, mu, *level, &parse_field(p, *psi_cond)?, *contragredient, rep.as_deref())
        }
        Command::Zeta { n, order, reps } => zeta_cmd(*n, *order, reps),
        Command::Weight { place, n, level, order, cond, p, trivial_central, reps } => {
            weight_cmd(*place, *n, *level, *order, *cond, &parse_field(p, 0)?, *trivial_central, reps)
        }
        Command::Index { n, p, level, bruteforce } => index_cmd(*n, p, *level, *bruteforce),
        Command::Charsum { p, level, valuations, n, psi_cond } => {
            charsum_cmd(&parse_field(p, *psi_cond)?, *level, valuations, *n)
        }
        Command::Params { n, s, w } => params_cmd(*n, s, w),
        Command::Verify { suite, n_max, order } => {
            let params = SuiteParams { n_max: *n_max, order: *order, seed: cfg.seed };
            let mut report = run_suite(suite, params)?;
            if !cfg.timings {
                report = report.without_timings();
            }
            let ok = report.passed();
            Ok((Output::new(&report, emit::report_table(&report), emit::report_text(&report)), ok))
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LfactorOut {
    rep_a: UnramifiedRep,
    rep_b: UnramifiedRep,
    closed_form: crate::exactalg::RationalFunction,
    series: TruncatedSeries,
}

fn lfactor(n: usize, order: usize, reps: &RepArgs) -> Result<(Output, bool), CliError> {
    require_rank(n, 1)?;
    let a = parse_rep(reps.rep_a.as_deref(), "a", n + 1)?;
    let b = parse_rep(reps.rep_b.as_deref(), "b", n)?;
    let closed = zeta::local_l_factor(&a, &b, "X").map_err(invalid)?;
    let series = series_expand(&closed, "X", order).map_err(invalid)?;
    let mut table = Table::new(&["degree", "coefficient"]);
    series_rows(&mut table, &series);
    let text = format!("L(s, A x B) = {closed}\nexpansion in X = q^(-s):\n{}", series_text(&series));
    let out = LfactorOut { rep_a: a, rep_b: b, closed_form: closed, series };
    Ok((Output::new(&out, table, text), true))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WhittakerOut {
    rep: UnramifiedRep,
    mu: TorusCocharacter,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    model: &'static str,
    #[serde(with = "crate::exactalg::text::as_text")]
    value: LaurentPoly,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_text")]
    paper_literal_value: Option<LaurentPoly>,
}

mod opt_text {
    use serde::Serializer;

    use crate::exactalg::LaurentPoly;

    pub fn serialize<S: Serializer>(p: &Option<LaurentPoly>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => s.serialize_some(&p.to_string()),
            None => s.serialize_none(),
        }
    }
}

fn whittaker_cmd(
    n: usize,
    mu: &str,
    level: Option<u32>,
    field: &LocalFieldData,
    contragredient: bool,
    rep: Option<&str>,
) -> Result<(Output, bool), CliError> {
    require_rank(n, 1)?;
    let rep = parse_rep(rep, "a", n)?;
    let mu = TorusCocharacter::new(parse_list(mu, "--mu")?);
    let (model, value, paper) = match (level, contragredient) {
        (Some(_), true) => return Err(invalid("--level and --contragredient are exclusive")),
        (Some(m), false) => (
            "twisted",
            whittaker::twisted_value(&rep, &mu, m, field).map_err(invalid)?,
            Some(whittaker::twisted_value_paper_literal(&rep, &mu, m, field).map_err(invalid)?),
        ),
        (None, true) => ("contragredient", whittaker::contragredient_value(&rep, &mu).map_err(invalid)?, None),
        (None, false) => ("spherical", whittaker::spherical_value(&rep, &mu).map_err(invalid)?, None),
    };
    let mut pairs = vec![("model", model.to_string()), ("mu", mu.to_string()), ("value", value.to_string())];
    if let Some(pl) = &paper {
        pairs.push(("paperLiteralValue", pl.to_string()));
    }
    let text = format!(
        "{model} Whittaker value at diag(w^{mu}) = {value}{}",
        paper.as_ref().map(|p| format!("\nwith the printed constant: {p}")).unwrap_or_default()
    );
    let out = WhittakerOut { rep, mu, level, model, value, paper_literal_value: paper };
    Ok((Output::new(&out, Table::fields(pairs), text), true))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZetaOut {
    rep_a: UnramifiedRep,
    rep_b: UnramifiedRep,
    #[serde(flatten)]
    result: ZetaResult,
    identity_holds: bool,
}

fn zeta_cmd(n: usize, order: usize, reps: &RepArgs) -> Result<(Output, bool), CliError> {
    require_rank(n, 1)?;
    let a = parse_rep(reps.rep_a.as_deref(), "a", n + 1)?;
    let b = parse_rep(reps.rep_b.as_deref(), "b", n)?;
    let result = zeta::local_zeta_unramified(&a, &b, "X", order).map_err(invalid)?;
    let closed = result.closed_form.as_ref().expect("unramified zeta carries its L-factor");
    let expanded = series_expand(closed, "X", order).map_err(invalid)?;
    let mut table = Table::new(&["degree", "lattice_sum", "l_factor", "match"]);
    for (k, (x, y)) in result.series.coeffs().iter().zip(expanded.coeffs()).enumerate() {
        table.push(vec![k.to_string(), x.to_string(), y.to_string(), (x == y).to_string()]);
    }
    let holds = result.closed_form_mismatch().map_err(invalid)?.is_none();
    let text = format!(
        "Psi(s, W_A, W_B) for GL({}) x GL({n}), {} lattice points\n{}L-factor: {closed}\nidentity holds to order {order}: {holds}",
        n + 1,
        result.lattice_points_visited,
        series_text(&result.series)
    );
    let out = ZetaOut { rep_a: a, rep_b: b, result, identity_holds: holds };
    Ok((Output::new(&out, table, text), holds))
}

fn weight_output(h: WeightResult) -> Output {
    let table = match &h.value {
        WeightValue::Series(s) => {
            let mut t = Table::new(&["degree", "coefficient"]);
            series_rows(&mut t, s);
            t
        }
        other => {
            let mut pairs = vec![(
                "value",
                match other {
                    WeightValue::Exact(p) => p.to_string(),
                    WeightValue::Rational(f) => f.to_string(),
                    _ => "undetermined".to_string(),
                },
            )];
            if let Some(v) = h.verdict {
                pairs.push(("verdict", serde_json::to_value(v).expect("enum").as_str().unwrap_or_default().to_string()));
            }
            if let Some(set) = &h.index_set {
                let labels: Vec<String> = set.iter().map(|t| format!("({}, {}, {})", t.a1, t.a2, t.j)).collect();
                pairs.push(("indexSet", labels.join(" ")));
            }
            if let Some(c) = &h.paper_comparison {
                pairs.push(("paperConstant", c.paper_constant.to_string()));
                pairs.push(("computedConstant", c.computed_constant.to_string()));
                pairs.push(("ratio", c.ratio.to_string()));
            }
            Table::fields(pairs)
        }
    };
    let mut text = match &h.value {
        WeightValue::Series(s) => format!("H_v as a series:\n{}", series_text(s)),
        WeightValue::Exact(p) => format!("H_v = {p}\n"),
        WeightValue::Rational(f) => format!("H_v = {f}\n"),
        WeightValue::Undetermined => "H_v is undetermined (ramified Whittaker values needed)\n".to_string(),
    };
    if let Some(c) = &h.paper_comparison {
        text.push_str(&format!(
            "printed constant {}, computed constant {}, ratio {}\n",
            c.paper_constant, c.computed_constant, c.ratio
        ));
    }
    Output::new(&h, table, text)
}

#[allow(clippy::too_many_arguments)]
fn weight_cmd(
    place: Place,
    n: usize,
    level: u32,
    order: usize,
    cond: u32,
    field: &LocalFieldData,
    trivial_central: bool,
    reps: &RepArgs,
) -> Result<(Output, bool), CliError> {
    let h = match place {
        Place::Unramified => {
            require_rank(n, 2)?;
            let big = parse_rep(reps.rep_a.as_deref(), "a", n + 1)?;
            let pi = parse_rep(reps.rep_b.as_deref(), "b", n)?;
            let pi1 = parse_rep(reps.rep_c.as_deref(), "c", n - 1)?;
            zeta::weight_unramified(&big, &pi, &pi1, order).map_err(invalid)?
        }
        Place::L => {
            require_rank(n, 2)?;
            let pi = parse_rep(reps.rep_a.as_deref(), "b", n)?;
            let pi = if trivial_central { pi.with_trivial_central(true).map_err(invalid)? } else { pi };
            let pi1 = parse_rep(reps.rep_b.as_deref(), "c", n - 1)?;
            let mut h = zeta::weight_at_l(&pi, &pi1, level, "Y", order, field).map_err(invalid)?;
            if let WeightValue::Series(s) = &h.value {
                let coeffs = s
                    .coeffs()
                    .iter()
                    .map(|c| pi.impose_trivial_central(c))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(invalid)?;
                h.value = WeightValue::Series(TruncatedSeries::new(s.var(), coeffs).map_err(invalid)?);
            }
            h
        }
        Place::Q => {
            require_rank(n, 1)?;
            zeta::weight_at_q_structural(cond, level, n, field).map_err(invalid)?
        }
    };
    let ok = match place {
        Place::Unramified => h.value.is_one(),
        _ => true,
    };
    Ok((weight_output(h), ok))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IndexOut {
    n: usize,
    p: String,
    level: u32,
    closed_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<String>,
}

fn index_cmd(n: usize, p: &str, level: u32, bruteforce: bool) -> Result<(Output, bool), CliError> {
    require_rank(n, 1)?;
    let field = parse_field(p, 0)?;
    let closed = match field.residue {
        Residue::Numeric(pr) => localrep::congruence_index(n, pr, level).to_string(),
        Residue::Symbolic => localrep::congruence_index_poly(n, &field, level).to_string(),
    };
    let brute = match (bruteforce, field.residue) {
        (false, _) => None,
        (true, Residue::Numeric(pr)) => {
            Some(localrep::congruence_index_bruteforce(n, pr, level).map_err(invalid)?.to_string())
        }
        (true, Residue::Symbolic) => return Err(invalid("--bruteforce needs a numeric --p")),
    };
    let ok = brute.as_ref().is_none_or(|b| *b == closed);
    let mut pairs = vec![("closedForm", closed.clone())];
    if let Some(b) = &brute {
        pairs.push(("bruteForce", b.clone()));
    }
    let text = format!(
        "[GL({n}, o) : K_0(w^{level})] = {closed}{}",
        brute.as_ref().map(|b| format!(" (enumeration: {b})")).unwrap_or_default()
    );
    let out = IndexOut { n, p: field.residue.to_string(), level, closed_form: closed, brute_force: brute };
    Ok((Output::new(&out, Table::fields(pairs), text), ok))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CharsumOut {
    p: String,
    level: u32,
    valuations: Vec<i64>,
    #[serde(with = "crate::exactalg::text::as_text")]
    exact: LaurentPoly,
    #[serde(with = "crate::exactalg::text::as_text")]
    paper_literal: LaurentPoly,
}

fn charsum_cmd(field: &LocalFieldData, level: u32, valuations: &str, n: usize) -> Result<(Output, bool), CliError> {
    let vals = parse_list(valuations, "--valuations")?;
    let exact = localrep::character_sum(field, level, &vals).map_err(invalid)?;
    let paper = localrep::character_sum_paper_literal(field, n, level, &vals).map_err(invalid)?;
    let pairs = vec![("exact", exact.to_string()), ("paperLiteral", paper.to_string())];
    let text = format!("character sum = {exact} (printed constant for n = {n}: {paper})");
    let out = CharsumOut { p: field.residue.to_string(), level, valuations: vals, exact, paper_literal: paper };
    Ok((Output::new(&out, Table::fields(pairs), text), true))
}

#[derive(Serialize)]
struct ParamsOut {
    input: ParamPair,
    dual: ParamPair,
    involution: bool,
}

fn params_cmd(n: usize, s: &str, w: &str) -> Result<(Output, bool), CliError> {
    require_rank(n, 2)?;
    let s: LaurentPoly = s.parse().map_err(invalid)?;
    let w: LaurentPoly = w.parse().map_err(invalid)?;
    let input = ParamPair::new(s, w, n);
    let dual = reciprocity::dual_params(&input);
    let involution = reciprocity::dual_params(&dual) == input;
    let pairs = vec![("s'", dual.s.to_string()), ("w'", dual.w.to_string()), ("involution", involution.to_string())];
    let text = format!("n = {n}: (s, w) = ({}, {}) -> (s', w') = ({}, {})", input.s, input.w, dual.s, dual.w);
    Ok((Output::new(&ParamsOut { input, dual, involution }, Table::fields(pairs), text), involution))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let mut full = vec!["whitlocal"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).unwrap();
        run_command(&RunConfig::from_cli(cli).unwrap())
    }

    #[test]
    fn failing_report_exits_one_and_still_emits() {
        let report = crate::report::SuiteReport::from_checks("s", vec![crate::report::Check::fail("a", "broken", "x != y")]);
        let out = Output::new(&report, emit::report_table(&report), emit::report_text(&report));
        let o = Outcome::finished(&out, report.passed(), Emit::Json);
        assert_eq!(o.code, EXIT_FAILED);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["checks"][0]["witness"], "x != y");
    }

    #[test]
    fn involution_suite_has_nine_checks() {
        let o = run(&["verify", "--suite", "involution", "--n-max", "10", "--emit", "json", "--jobs", "2"]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["checks"].as_array().unwrap().len(), 9);
        assert!(v["checks"][0].get("millis").is_none());
    }

    #[test]
    fn weight_l_example() {
        let o = run(&["weight", "--place", "l", "--n", "2", "--level", "1", "--order", "6"]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let coeffs = &v["value"]["series"]["coeffs"];
        assert_eq!(coeffs[1], "b2*c1 + b1*c1");
        assert_eq!(coeffs[2], "-b1*b2*c1^2");
        assert_eq!(v["placeKind"], "dividing_l");

        let o = run(&["weight", "--place", "l", "--n", "2", "--level", "1", "--trivial-central"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["value"]["series"]["coeffs"][2], "-c1^2");
    }

    #[test]
    fn zeta_csv() {
        let o = run(&["zeta", "--n", "2", "--order", "6", "--emit", "csv"]);
        assert_eq!(o.code, 0);
        let text = String::from_utf8(o.stdout).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "degree,lattice_sum,l_factor,match");
        assert_eq!(lines.len(), 8);
        assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    }

    #[test]
    fn invalid_inputs_exit_two() {
        assert_eq!(run(&["verify", "--suite", "bogus"]).code, 2);
        assert_eq!(run(&["charsum", "--p", "x", "--valuations", "1"]).code, 2);
        assert_eq!(run(&["whittaker", "--n", "2", "--mu", "1"]).code, 2);
        assert_eq!(run(&["zeta", "--n", "1", "--rep-a", "{\"rank\":3}"]).code, 2);
        assert_eq!(main_with_args(["whitlocal", "zeta", "--order", "minus"]), 2);
        assert_eq!(main_with_args(["whitlocal", "params", "--jobs", "0"]), EXIT_INVALID);
    }

    #[test]
    fn small_commands() {
        let o = run(&["index", "--n", "3", "--p", "2", "--level", "1", "--bruteforce", "--emit", "text"]);
        assert_eq!(String::from_utf8(o.stdout).unwrap(), "[GL(3, o) : K_0(w^1)] = 7 (enumeration: 7)\n");
        let o = run(&["charsum", "--p", "3", "--level", "1", "--valuations", "1,2"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["exact"], "9");
        let o = run(&["params", "--n", "3", "--s", "1", "--w", "1", "--emit", "csv"]);
        assert_eq!(String::from_utf8(o.stdout).unwrap(), "field,value\r\ns',2/3\r\nw',4/3\r\ninvolution,true\r\n");
        let o = run(&["whittaker", "--n", "2", "--mu", "1", "--level", "1", "--emit", "json"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["value"], "q^(1/2)*a2 + q^(1/2)*a1");
        let o = run(&["weight", "--place", "q", "--cond", "1", "--level", "1", "--n", "2", "--p", "2"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["verdict"], "single_term");
    }
}
