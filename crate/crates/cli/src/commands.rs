use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::result::Result;

use channel_space::io::{parse_grid, Format};
use channel_space::number::{format_rational, parse_rational, to_f64};
use channel_space::oracle::{oracle_radial_probability, oracle_s_pair};
use channel_space::ranking::CONVENTION;
use channel_space::verify::{run_campaign, Campaign, Check, VerifyConfig};
use channel_space::*;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::{Command, Global, OutputFormat, TieMode};

/// Largest `n` for the exhaustive sweeps of `verify`; the triangle survey is
/// cubic in `n!`.
const VERIFY_EXHAUSTIVE_LIMIT: usize = 5;

#[derive(Debug)]
pub enum Failure {
    Domain(Error),
    Usage(String),
    OracleMismatch(String),
    /// A completed verification run with failing checks; carries the report.
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(Error::Parse(_)) | Failure::Usage(_) => 3,
            Failure::Domain(_) => 1,
            Failure::OracleMismatch(_) | Failure::Verification(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Usage(msg) => f.write_str(msg),
            Failure::OracleMismatch(msg) => write!(f, "oracle mismatch: {msg}"),
            Failure::Verification(_) => f.write_str("verification failed"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<String, Failure>;

struct Settings {
    tie: TieRule,
    prior: Prior,
    validation: Validation,
    seed: u64,
    format: OutputFormat,
}

fn settings(g: &Global) -> Result<Settings, Failure> {
    let tie = match (g.tie_rule, &g.epsilon) {
        (TieMode::Exact, None) => TieRule::Exact,
        (TieMode::Exact, Some(_)) => return Err(Failure::Usage("--epsilon needs --tie-rule epsilon".into())),
        (TieMode::Epsilon, None) => return Err(Failure::Usage("--tie-rule epsilon needs --epsilon".into())),
        (TieMode::Epsilon, Some(eps)) => TieRule::epsilon(parse_rational(eps)?)?,
    };
    let prior = if g.prior.trim() == "uniform" {
        Prior::Uniform
    } else {
        let weights = g
            .prior
            .split(',')
            .map(parse_rational)
            .collect::<channel_space::Result<Vec<_>>>()?;
        Prior::explicit(weights)?
    };
    let mut validation = match &g.tolerance {
        Some(t) => Validation::with_tolerance(parse_rational(t)?),
        None => Validation::default(),
    };
    validation.normalize = g.normalize;
    Ok(Settings {
        tie,
        prior,
        validation,
        seed: g.seed,
        format: g.format,
    })
}

pub fn run(command: Command, global: &Global) -> Outcome {
    let s = settings(global)?;
    match command {
        Command::Order { file } => order(&file, &s),
        Command::DistPerm { sigma, phi, oracle } => dist_perm(&sigma, &phi, oracle, &s),
        Command::DistChannel { p, q, oracle, global } => dist_channel(&p, &q, oracle, global, &s),
        Command::Cones { n, summary } => cones(n, summary, &s),
        Command::Verify {
            suite,
            exhaustive_n,
            random_pairs,
            random_channels,
            mc_pairs,
            mc_samples,
        } => {
            if exhaustive_n > VERIFY_EXHAUSTIVE_LIMIT {
                return Err(Error::TooLarge {
                    what: "exhaustive n",
                    n: exhaustive_n,
                    limit: VERIFY_EXHAUSTIVE_LIMIT,
                }
                .into());
            }
            let cfg = VerifyConfig {
                seed: s.seed,
                exhaustive_n,
                random_pairs,
                random_channels,
                mc_pairs,
                mc_samples,
                ..VerifyConfig::default()
            };
            verify(&suite, &cfg, &s)
        }
        Command::Simulate { p, q, samples } => simulate(&p, &q, samples, &s),
    }
}

fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json value")
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn load_channel(path: &Path, s: &Settings) -> Result<Channel, Failure> {
    Ok(channel_space::io::read_channel(path, &s.validation)?)
}

fn order(path: &Path, s: &Settings) -> Outcome {
    let text = read_text(path)?;
    let grid = parse_grid(&text, Format::detect(path, &text))?;
    // The weak-order matrix is defined for any non-negative grid; row sums
    // only decide whether it is reported as a channel.
    let (ch, stochastic) = match Channel::validate(grid.clone(), &s.validation) {
        Ok(ch) => (ch, true),
        Err(Error::RowSumViolation { .. }) => (Channel::from_nonnegative(grid)?, false),
        Err(e) => return Err(e.into()),
    };
    let o = weak_order_matrix(&ch, &s.tie);
    let columns: Vec<Value> = o
        .columns
        .iter()
        .enumerate()
        .map(|(j, w)| {
            json!({
                "column": j + 1,
                "ranks": w.ranks(),
                "dimension": cone_dimension(w),
                "stable": w.is_strict(),
            })
        })
        .collect();
    let report = json!({
        "n": ch.n_inputs(),
        "m": ch.m_outputs(),
        "row_stochastic": stochastic,
        "convention": CONVENTION,
        "weak_order_matrix": o.rows(),
        "columns": columns,
        "stable": o.is_stable(),
    });
    if s.format == OutputFormat::Json {
        return Ok(render(&report));
    }
    let mut out = String::new();
    writeln!(out, "weak-order matrix ({} inputs x {} outputs, rank 1 = largest)", ch.n_inputs(), ch.m_outputs()).unwrap();
    for row in o.rows() {
        let cells: Vec<String> = row.iter().map(|r| format!("{r:>3}")).collect();
        writeln!(out, "  {}", cells.join(" ")).unwrap();
    }
    writeln!(out, "column  dimension  stable").unwrap();
    for (j, w) in o.columns.iter().enumerate() {
        writeln!(out, "{:>6}  {:>9}  {}", j + 1, cone_dimension(w), w.is_strict()).unwrap();
    }
    write!(out, "row-stochastic: {stochastic}; stable: {}", o.is_stable()).unwrap();
    Ok(out)
}

fn parse_ranking(text: &str) -> Result<Ranking, Failure> {
    let perm = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad ranking {text:?}: expected comma-separated inputs like 3,1,2")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ranking::from_perm_one_based(&perm).map_err(|e| Failure::Usage(e.to_string()))
}

fn ranking_json(r: &Ranking) -> Value {
    json!({"perm": r.perm_one_based(), "inverse": r.ranks()})
}

fn count_json(c: &AgreementCount) -> Value {
    serde_json::to_value(c).expect("count serializes")["value"].clone()
}

fn dist_perm(sigma: &str, phi: &str, oracle: bool, s: &Settings) -> Outcome {
    let sigma = parse_ranking(sigma)?;
    let phi = parse_ranking(phi)?;
    let count = s_pair(&sigma, &phi)?;
    let mut report = json!({
        "n": sigma.len(),
        "convention": CONVENTION,
        "sigma": ranking_json(&sigma),
        "phi": ranking_json(&phi),
        "agreements": count_json(&count),
        "total_codes": count_json(&AgreementCount { value: AgreementCount::total_codes(count.n), n: count.n }),
        "probability": format_rational(&count.probability()),
        "distance": format_rational(&decoding_distance(&sigma, &phi)?),
        "kendall_tau": kendall_tau(&sigma, &phi)?,
    });
    if oracle {
        let counted = oracle_s_pair(&sigma, &phi)?;
        if counted != count {
            return Err(Failure::OracleMismatch(format!(
                "formula gives {} agreeing codes, enumeration gives {}",
                count.value, counted.value
            )));
        }
        report["oracle_agreements"] = count_json(&counted);
    }
    if s.format == OutputFormat::Json {
        return Ok(render(&report));
    }
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    writeln!(out, "sigma        perm {}  inverse {}", list(&sigma.perm_one_based()), list(&sigma.ranks())).unwrap();
    writeln!(out, "phi          perm {}  inverse {}", list(&phi.perm_one_based()), list(&phi.ranks())).unwrap();
    writeln!(out, "agreements   {} of {}", count.value, AgreementCount::total_codes(count.n)).unwrap();
    writeln!(out, "probability  {}", report["probability"].as_str().unwrap()).unwrap();
    writeln!(out, "distance     {}", report["distance"].as_str().unwrap()).unwrap();
    write!(out, "kendall tau  {}", report["kendall_tau"]).unwrap();
    if oracle {
        write!(out, "\noracle       agrees").unwrap();
    }
    Ok(out)
}

fn dist_channel(p_path: &Path, q_path: &Path, oracle: bool, global: bool, s: &Settings) -> Outcome {
    let p = load_channel(p_path, s)?;
    let q = load_channel(q_path, s)?;
    let report = radial_agreement(&p, &q, &s.prior, &s.tie)?;
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["n"] = json!(p.n_inputs());
    out["m"] = json!(p.m_outputs());
    if oracle {
        let counted = oracle_radial_probability(&p, &q, &s.prior)?;
        if counted != report.probability {
            return Err(Failure::OracleMismatch(format!(
                "closed form gives {}, enumeration gives {}",
                format_rational(&report.probability),
                format_rational(&counted)
            )));
        }
        out["oracle_probability"] = json!(format_rational(&counted));
    }
    if global {
        out["global_distance"] = json!(format_rational(&global_decoding_distance(&p, &q, &s.tie)?));
    }
    if s.format == OutputFormat::Json {
        return Ok(render(&out));
    }
    let mut text = String::new();
    writeln!(text, "column  S(sigma_i, phi_i)  norm").unwrap();
    for (j, (sv, norm)) in report.per_column_s.iter().zip(&report.column_norms).enumerate() {
        writeln!(text, "{:>6}  {:>17}  {}", j + 1, sv, format_rational(norm)).unwrap();
    }
    writeln!(text, "prior        {}", report.prior).unwrap();
    writeln!(text, "probability  {}", format_rational(&report.probability)).unwrap();
    write!(text, "distance     {}", format_rational(&report.distance)).unwrap();
    if oracle {
        write!(text, "\noracle       agrees").unwrap();
    }
    if let Some(g) = out.get("global_distance").and_then(Value::as_str) {
        write!(text, "\nglobal       {g}").unwrap();
    }
    Ok(text)
}

fn cones(n: usize, summary: bool, s: &Settings) -> Outcome {
    let orders = enumerate_weak_orders(n)?;
    let mut by_dim = vec![0usize; n];
    for w in &orders {
        by_dim[cone_dimension(w) - 1] += 1;
    }
    let counts: Vec<Value> = by_dim
        .iter()
        .enumerate()
        .rev()
        .map(|(d, c)| json!({"dimension": d + 1, "count": c}))
        .collect();
    let mut report = json!({
        "n": n,
        "total": orders.len(),
        "fubini": order::fubini(n).to_string(),
        "by_dimension": counts,
    });
    if !summary {
        report["weak_orders"] = orders
            .iter()
            .map(|w| json!({"ranks": w.ranks(), "dimension": cone_dimension(w)}))
            .collect();
    }
    if s.format == OutputFormat::Json {
        return Ok(render(&report));
    }
    let mut out = String::new();
    if !summary {
        for w in &orders {
            let ranks: Vec<String> = w.ranks().iter().map(usize::to_string).collect();
            writeln!(out, "({})  dim {}", ranks.join(","), cone_dimension(w)).unwrap();
        }
    }
    for (d, c) in by_dim.iter().enumerate().rev() {
        writeln!(out, "dimension {}: {c}", d + 1).unwrap();
    }
    write!(out, "total {} (Fubini number {})", orders.len(), order::fubini(n)).unwrap();
    Ok(out)
}

fn verify(suite: &[String], cfg: &VerifyConfig, s: &Settings) -> Outcome {
    let checks = if suite.is_empty() {
        Check::ALL.to_vec()
    } else {
        suite
            .iter()
            .map(|name| name.trim().parse::<Check>().map_err(Failure::Usage))
            .collect::<Result<Vec<_>, _>>()?
    };
    let campaign = run_campaign(&checks, cfg)?;
    let text = match s.format {
        OutputFormat::Json => serde_json::to_string_pretty(&campaign).expect("campaign serializes"),
        OutputFormat::Table => campaign_table(&campaign),
    };
    if campaign.passed {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn campaign_table(c: &Campaign) -> String {
    let mut out = String::new();
    for r in &c.checks {
        let status = match (r.informational, r.failures.is_empty()) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        writeln!(out, "{status} {:<20} instances {:>9}  failures {}", r.check, r.instances, r.failures.len()).unwrap();
        if r.check == "example6" {
            if let Some(details) = &r.details {
                example6_rows(&mut out, details);
            }
        }
        if r.check == "triangle" {
            if let Some(per_n) = r.details.as_ref().and_then(|d| d["by_n"].as_array()) {
                for row in per_n {
                    writeln!(out, "     n = {}: {} violations in {} triples", row["n"], row["violations"], row["triples"]).unwrap();
                }
            }
        }
    }
    write!(out, "seed {}: {}", c.seed, if c.passed { "passed" } else { "FAILED" }).unwrap();
    out
}

fn example6_rows(out: &mut String, details: &Value) {
    let seq = |v: &Value| {
        v.as_array()
            .map(|a| a.iter().map(Value::to_string).collect::<Vec<_>>().join(","))
            .unwrap_or_default()
    };
    let str_of = |v: &Value| v.as_str().unwrap_or("").to_string();
    writeln!(out, "     pair  published S  oracle S  published d  oracle d  discrepancy").unwrap();
    for row in details["radial"].as_array().into_iter().flatten() {
        writeln!(
            out,
            "     {:<4}  {:<11}  {:<8}  {:<11}  {:<8}  {}",
            str_of(&row["pair"]),
            seq(&row["published_per_column_s"]),
            seq(&row["oracle_per_column_s"]),
            str_of(&row["published_distance"]),
            str_of(&row["oracle_distance"]),
            row["discrepancy"]
        )
        .unwrap();
    }
    writeln!(out, "     pair  published global d  oracle global d  discrepancy").unwrap();
    for row in details["global"].as_array().into_iter().flatten() {
        writeln!(
            out,
            "     {:<4}  {:<18}  {:<15}  {}",
            str_of(&row["pair"]),
            str_of(&row["published_distance"]),
            str_of(&row["oracle_distance"]),
            row["discrepancy"]
        )
        .unwrap();
    }
}

fn simulate(p_path: &Path, q_path: &Path, samples: u64, s: &Settings) -> Outcome {
    let p = load_channel(p_path, s)?;
    let q = load_channel(q_path, s)?;
    let est = monte_carlo_radial(&p, &q, &s.prior, samples, s.seed)?;
    let exact: BigRational = radial_agreement_probability(&p, &q, &s.prior, &s.tie)?;
    let gap = est.estimate - to_f64(&exact);
    let z = (est.standard_error > 0.0).then(|| gap / est.standard_error);
    let mut report = serde_json::to_value(&est).expect("estimate serializes");
    report["closed_form"] = json!(format_rational(&exact));
    report["deviation_in_se"] = json!(z);
    if s.format == OutputFormat::Json {
        return Ok(render(&report));
    }
    Ok(format!(
        "samples      {}\nagreements   {}\nestimate     {}\nstd error    {}\nclosed form  {}\nseed         {} ({})",
        est.samples,
        est.agreements,
        est.estimate,
        est.standard_error,
        format_rational(&exact),
        est.seed,
        est.rng
    ))
}
