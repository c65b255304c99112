//! Command-line front end. [`run`] parses arguments, executes one verb and
//! returns the rendered report with its exit code.

pub mod args;

use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::{Args, BackendArg, CaseArg, Format, Verb};
use skewinv::canonical::{direct_sum, parse_blocks};
use skewinv::corealg::Backend;
use skewinv::genmat::{evaluate, evaluate_direct, Assignment, Invariant};
use skewinv::hsp::{builtin_certificates, check_certificate, verify_hsp, HspCase};
use skewinv::invbase::{minimal_generators, verify_generation, Options};
use skewinv::suite::{discrepancy_notes, identity_suite, n3_generating_set, run_all, DiscrepancyNote, SuiteOptions};
use skewinv::words::{canonical_rep, is_reversal_symmetric, Word};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Rendered output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: &'static str,
    pub seed: u64,
    pub wall_time_ms: u128,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub payload: Value,
    pub notes: Vec<DiscrepancyNote>,
}

/// Result of a verb before it is wrapped in a report.
struct Payload {
    passed: bool,
    value: Value,
    csv: Option<String>,
}

impl Payload {
    fn new(passed: bool, value: Value) -> Self {
        Payload { passed, value, csv: None }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let args = match Args::try_parse_from(&argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_PASS, stdout: e.to_string(), stderr: String::new() };
            }
            let line = first_line(&e.to_string());
            return error_outcome(echo, 0, start, line);
        }
    };
    let result = execute(&args);
    match result {
        Err(e) => error_outcome(echo, args.seed, start, format!("error: {e:#}")),
        Ok(p) => {
            let code = if p.passed { EXIT_PASS } else { EXIT_FAIL };
            let stdout = match (&args.format, p.csv) {
                (Format::Csv, Some(csv)) => csv,
                _ => render(&RunReport {
                    command: echo,
                    version: skewinv::VERSION,
                    seed: args.seed,
                    wall_time_ms: start.elapsed().as_millis(),
                    status: if p.passed { "pass" } else { "fail" },
                    error: None,
                    payload: p.value,
                    notes: notes(),
                }),
            };
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &stdout) {
                    let msg = format!("error: cannot write {}: {e}", path.display());
                    return Outcome { code: EXIT_USAGE, stdout, stderr: msg + "\n" };
                }
            }
            Outcome { code, stdout, stderr: String::new() }
        }
    }
}

fn first_line(s: &str) -> String {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments").trim().to_string()
}

fn notes() -> Vec<DiscrepancyNote> {
    discrepancy_notes().unwrap_or_default()
}

fn render(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

fn error_outcome(command: Vec<String>, seed: u64, start: Instant, msg: String) -> Outcome {
    let report = RunReport {
        command,
        version: skewinv::VERSION,
        seed,
        wall_time_ms: start.elapsed().as_millis(),
        status: "error",
        error: Some(msg.clone()),
        payload: Value::Null,
        notes: Vec::new(),
    };
    Outcome { code: EXIT_USAGE, stdout: render(&report), stderr: msg + "\n" }
}

fn execute(a: &Args) -> anyhow::Result<Payload> {
    if a.format == Format::Csv && a.verb != Verb::Mingens {
        bail!("--format csv is only available for mingens");
    }
    match a.verb {
        Verb::Sigma => sigma(a),
        Verb::Trace => trace(a),
        Verb::Mingens => mingens(a),
        Verb::Generation => generation(a),
        Verb::Hsp => hsp(a),
        Verb::Certificate => certificate(a),
        Verb::Canon => canon(a),
        Verb::Eval => eval(a),
        Verb::Identities => {
            let checks = identity_suite(&suite_options(a))?;
            let passed = checks.iter().all(|c| c.passed);
            Ok(Payload::new(passed, json!({ "checks": checks })))
        }
        Verb::Report => {
            if !a.all {
                bail!("report requires --all");
            }
            let criteria = run_all(&suite_options(a))?;
            let passed = criteria.iter().all(|c| c.passed);
            Ok(Payload::new(passed, json!({ "criteria": criteria })))
        }
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, verb: Verb) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("{} requires --{flag}", verb.name()))
}

pub fn parse_word(s: &str) -> anyhow::Result<Word> {
    let letters = s
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|_| anyhow!("bad letter `{}` in --word", t.trim())))
        .collect::<anyhow::Result<Vec<u8>>>()?;
    Ok(Word::new(letters)?)
}

fn word(a: &Args) -> anyhow::Result<Word> {
    let s = a.word.as_deref().ok_or_else(|| anyhow!("{} requires --word", a.verb.name()))?;
    parse_word(s)
}

fn backend(a: &Args) -> Backend {
    match a.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Modular => Backend::Modular { prime: a.prime },
    }
}

fn options(a: &Args) -> Options {
    Options { bound: a.maxdeg, backend: backend(a), seed: a.seed }
}

fn suite_options(a: &Args) -> SuiteOptions {
    SuiteOptions { seed: a.seed, retries: a.retries, backend: backend(a) }
}

fn letters_d(a: &Args, w: &Word) -> anyhow::Result<usize> {
    let d = a.d.unwrap_or(w.max_letter());
    if d < w.max_letter() {
        bail!("--d {d} is smaller than the largest letter {}", w.max_letter());
    }
    Ok(d)
}

fn invariant_json(inv: &Invariant) -> Value {
    json!({
        "label": inv.label,
        "mdeg": inv.mdeg.to_string(),
        "polynomial": inv.value.to_string(),
        "terms": inv.value.len(),
        "coefficients": inv.value,
    })
}

fn sigma(a: &Args) -> anyhow::Result<Payload> {
    let (n, t) = (need(a.n, "n", a.verb)?, need(a.t, "t", a.verb)?);
    let w = word(a)?;
    let inv = Invariant::sigma(t, w.clone(), n, letters_d(a, &w)?)?;
    Ok(Payload::new(true, json!({ "n": n, "t": t, "word": w, "invariant": invariant_json(&inv) })))
}

fn trace(a: &Args) -> anyhow::Result<Payload> {
    let n = need(a.n, "n", a.verb)?;
    let w = word(a)?;
    let rep = canonical_rep(&w);
    let inv = Invariant::trace(w.clone(), n, letters_d(a, &w)?)?;
    Ok(Payload::new(
        true,
        json!({
            "n": n,
            "word": w,
            "representative": rep.rep,
            "trace_sign": rep.trace_sign(),
            "reversal_symmetric": is_reversal_symmetric(&w),
            "invariant": invariant_json(&inv),
        }),
    ))
}

fn mingens(a: &Args) -> anyhow::Result<Payload> {
    let (n, d) = (need(a.n, "n", a.verb)?, need(a.d, "d", a.verb)?);
    let rep = minimal_generators(n, d, &options(a))?;
    let profile: Vec<Value> =
        rep.profile().into_iter().map(|(m, c)| json!({ "mdeg": m.to_string(), "count": c })).collect();
    let csv = rep.to_csv();
    Ok(Payload {
        passed: true,
        value: json!({ "total_generators": rep.total_generators(), "profile": profile, "report": rep }),
        csv: Some(csv),
    })
}

/// Standard generating sets: `n = 2`, `n = 3`, or a single matrix.
fn standard_generators(n: usize, d: usize) -> anyhow::Result<Vec<Invariant>> {
    let w = |l: &[u8]| Word::from_slice(l);
    if d == 1 {
        return (1..=n / 2).map(|k| Ok(Invariant::sigma(2 * k, w(&[1]), n, 1)?)).collect();
    }
    match n {
        2 => {
            let mut g = Vec::new();
            for i in 1..=d as u8 {
                g.push(Invariant::sigma(2, w(&[i]), 2, d)?);
            }
            for i in 1..=d as u8 {
                for j in i + 1..=d as u8 {
                    g.push(Invariant::trace(w(&[i, j]), 2, d)?);
                }
            }
            Ok(g)
        }
        3 => Ok(n3_generating_set(d)?),
        _ => bail!("no standard generating set for n = {n}, d = {d}; supported: n = 2, n = 3, or d = 1"),
    }
}

fn generation(a: &Args) -> anyhow::Result<Payload> {
    let (n, d) = (need(a.n, "n", a.verb)?, need(a.d, "d", a.verb)?);
    let gens = standard_generators(n, d)?;
    let check = verify_generation(&gens, n, d, &options(a))?;
    let labels: Vec<&str> = gens.iter().map(|g| g.label.as_str()).collect();
    Ok(Payload::new(check.generates, json!({ "n": n, "d": d, "candidates": labels, "check": check })))
}

fn case_letter(c: CaseArg) -> &'static str {
    match c {
        CaseArg::A => "A",
        CaseArg::B => "B",
        CaseArg::C => "C",
        CaseArg::D => "D",
    }
}

fn hsp(a: &Args) -> anyhow::Result<Payload> {
    let case = HspCase::new(case_letter(need(a.case, "case", a.verb)?), a.d)?;
    let report = verify_hsp(case, a.seed, a.retries)?;
    Ok(Payload::new(report.passed, serde_json::to_value(&report)?))
}

fn certificate(a: &Args) -> anyhow::Result<Payload> {
    let mut certs = builtin_certificates();
    if let Some(c) = a.case {
        let case = HspCase::new(case_letter(c), a.d.or(matches!(c, CaseArg::A).then_some(2)))?;
        let names = case.certificate_names();
        certs.retain(|x| names.contains(&x.name.as_str()));
    }
    let checks = certs.iter().map(check_certificate).collect::<skewinv::Result<Vec<_>>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(Payload::new(passed, json!({ "certificates": checks })))
}

fn canon(a: &Args) -> anyhow::Result<Payload> {
    let spec = a.blocks.as_deref().ok_or_else(|| anyhow!("canon requires --blocks"))?;
    let m = direct_sum(&parse_blocks(spec)?)?;
    let rows: Vec<Vec<String>> =
        m.matrix.rows().into_iter().map(|r| r.into_iter().map(|x| x.to_string()).collect()).collect();
    let mut value = json!({ "label": m.label(), "n": m.n(), "matrix": m.matrix, "rows": rows });
    let mut passed = true;
    if a.check_sigma {
        let sigmas = (1..=m.n()).map(|t| m.matrix.sigma(t)).collect::<skewinv::Result<Vec<_>>>()?;
        passed = sigmas.iter().all(|s| s.is_zero());
        let listed: Vec<Value> =
            sigmas.iter().enumerate().map(|(i, s)| json!({ "t": i + 1, "value": s.to_string() })).collect();
        value["sigma"] = json!(listed);
        value["sigma_all_zero"] = json!(passed);
    }
    Ok(Payload::new(passed, value))
}

fn eval(a: &Args) -> anyhow::Result<Payload> {
    let path = a.matrices.as_ref().ok_or_else(|| anyhow!("eval requires --matrices"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let asg = Assignment::from_json(&text)?;
    let t = need(a.t, "t", a.verb)?;
    let w = word(a)?;
    let inv = Invariant::sigma(t, w, asg.n(), asg.d())?;
    let by_substitution = evaluate(&inv, &asg)?;
    let by_products = evaluate_direct(&inv, &asg)?;
    let agree = by_substitution == by_products;
    Ok(Payload::new(
        agree,
        json!({
            "label": inv.label,
            "n": asg.n(),
            "d": asg.d(),
            "by_substitution": by_substitution.to_string(),
            "by_products": by_products.to_string(),
            "agree": agree,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse_from_comma_lists() {
        assert_eq!(parse_word("1, 2,2").unwrap(), Word::from_slice(&[1, 2, 2]));
        assert!(parse_word("1,,2").is_err());
        assert!(parse_word("0").is_err());
        assert!(parse_word("x").is_err());
    }

    #[test]
    fn first_line_skips_blank_lines() {
        assert_eq!(first_line("\n  error: bad\nmore"), "error: bad");
        assert_eq!(first_line(""), "error: invalid arguments");
    }

    #[test]
    fn single_matrix_generators_are_even_sigmas() {
        let g = standard_generators(5, 1).unwrap();
        let labels: Vec<&str> = g.iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels, ["σ2(Y1)", "σ4(Y1)"]);
        assert_eq!(standard_generators(2, 3).unwrap().len(), 6);
    }
}
