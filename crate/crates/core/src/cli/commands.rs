use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Cli, CliError, Command, CompileArgs, Status, FIXTURES_ENV};
use crate::cqca::{load_cqca, CqcaMatrix};
use crate::mbqc::{
    all_generators, compile_rotation, estimate_nu, oblivious_wire, sample_outcomes, simulate_pattern,
    speedup, universality_check, verify_first_order, GateRequest, Junk, MeasurementPattern,
    PhaseState,
};
use crate::pauli::{cone_evolution, lie_closure, Letter, PauliString};
use crate::stabilizer::{fixed_point_stabilizers, verify_tableau};
use crate::symmetry::{build_cycle, RenderFormat};

/// Largest ring size the period table accepts.
pub const MAX_TABLE_N: usize = 4096;

const BUNDLED_TABLE: &str = include_str!("../../fixtures/periods_tf.json");
const TABLE_FILE: &str = "periods_tf.json";

#[derive(Debug, Serialize, Deserialize)]
struct PeriodRow {
    n: usize,
    l: u64,
}

#[derive(Debug, Deserialize)]
struct PeriodFixture {
    cqca: String,
    rows: Vec<PeriodRow>,
}

fn emit(cli: &Cli, out: &mut Vec<u8>, report: &Value) -> Result<(), CliError> {
    if cli.text {
        write_text(out, report, "")?;
    } else {
        serde_json::to_writer_pretty(&mut *out, report).map_err(|e| CliError::internal(e.to_string()))?;
        out.push(b'\n');
    }
    Ok(())
}

fn write_text(out: &mut Vec<u8>, v: &Value, indent: &str) -> std::io::Result<()> {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        writeln!(out, "{indent}{k}:")?;
                        write_text(out, val, &format!("{indent}  "))?;
                    }
                    _ => writeln!(out, "{indent}{k}: {}", scalar(val))?,
                }
            }
            Ok(())
        }
        other => writeln!(out, "{indent}{}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::internal(e.to_string()))
}

/// Accepts `Z0`, `X1 Z2` or a full `... @N=k` string.
fn parse_pauli(s: &str, n: usize) -> Result<PauliString, CliError> {
    let text = if s.contains('@') {
        s.to_string()
    } else {
        format!("{s} @N={n}")
    };
    let p: PauliString = text.parse()?;
    if p.n() != n {
        return Err(CliError::user(format!("`{s}` is not on {n} sites")));
    }
    Ok(p)
}

pub(super) fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<Status, CliError> {
    match &cli.command {
        Command::Classify { spec } => {
            let t = load_cqca(&spec.cqca)?;
            let report = json!({
                "cqca": spec.cqca,
                "matrix": t.to_string(),
                "class": t.classify().to_string(),
                "trace": t.trace().to_string(),
                "simple": t.is_simple(),
                "entangling": t.is_entangling(),
                "injective_all_n": t.injective_for_all(),
            });
            emit(cli, out, &report)?;
            Ok(Status::Ok)
        }
        Command::Period {
            spec,
            nmax,
            golden,
            fixtures,
        } => period(cli, out, &spec.cqca, *nmax, *golden, fixtures.clone()),
        Command::Render {
            spec,
            n,
            seed,
            cell,
            format,
        } => {
            let t = load_cqca(&spec.cqca)?;
            let fmt: RenderFormat = format.parse().map_err(CliError::user)?;
            let seed = parse_pauli(seed, *n)?;
            let pattern = build_cycle(&t, &seed, *cell)?;
            out.extend_from_slice(&pattern.render(fmt));
            Ok(Status::Ok)
        }
        Command::Stabilizers {
            spec,
            n,
            m,
            cell,
            verify,
            format,
        } => {
            let t = load_cqca(&spec.cqca)?;
            let tab = fixed_point_stabilizers(&t, *n, *m, *cell)?;
            if *verify {
                let rep = verify_tableau(&tab);
                let ok = rep.ok;
                let mut v = to_value(&rep)?;
                v["pass"] = json!(ok);
                emit(cli, out, &v)?;
                return Ok(if ok { Status::Ok } else { Status::PropertyFails });
            }
            match format.as_str() {
                "text" => out.extend_from_slice(tab.to_text().as_bytes()),
                "hamiltonian" => out.extend_from_slice(tab.hamiltonian_text().as_bytes()),
                "json" => {
                    serde_json::to_writer_pretty(&mut *out, &tab.to_json())
                        .map_err(|e| CliError::internal(e.to_string()))?;
                    out.push(b'\n');
                }
                other => {
                    return Err(CliError::user(format!(
                        "unknown format `{other}` (expected text, json, hamiltonian)"
                    )))
                }
            }
            Ok(Status::Ok)
        }
        Command::Gates { spec, n, cell } => {
            let t = load_cqca(&spec.cqca)?;
            let gens = all_generators(&t, *n, *cell)?;
            let report = json!({
                "cqca": spec.cqca,
                "n": n,
                "l": t.period(*n)?,
                "cell": cell,
                "generators": to_value(&gens)?,
            });
            emit(cli, out, &report)?;
            Ok(Status::Ok)
        }
        Command::Universality { spec, n, cell } => {
            let t = load_cqca(&spec.cqca)?;
            let rep = universality_check(&t, *n, *cell)?;
            let mut v = to_value(&rep)?;
            v["verdict"] = json!(if rep.universal { "universal" } else { "not universal" });
            emit(cli, out, &v)?;
            Ok(if rep.universal { Status::Ok } else { Status::PropertyFails })
        }
        Command::Compile(args) => compile(cli, out, args),
        Command::Simulate {
            pattern,
            state,
            report,
            rescale,
            sample,
        } => simulate(cli, out, pattern, state, *report, *rescale, *sample),
        Command::Apply { spec, pauli, steps } => {
            let t = load_cqca(&spec.cqca)?;
            let p: PauliString = pauli.parse()?;
            let images: Vec<String> = cone_evolution(&t, &p, *steps)
                .iter()
                .map(|q| q.to_string())
                .collect();
            let report = json!({ "cqca": spec.cqca, "input": p.to_string(), "steps": steps, "images": images });
            emit(cli, out, &report)?;
            Ok(Status::Ok)
        }
        Command::Closure { pauli } => {
            let gens = pauli
                .iter()
                .map(|s| s.parse::<PauliString>())
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(g) = gens.iter().find(|g| g.n() != gens[0].n()) {
                return Err(CliError::user(format!("{g} is on a different ring")));
            }
            let q = gens[0].n();
            if q > 6 {
                return Err(CliError::user("closure is limited to 6 qubits"));
            }
            let closure = lie_closure(&gens);
            let full = 4usize.pow(q as u32) - 1;
            let mut report = json!({
                "generators": pauli,
                "qubits": q,
                "closure_size": closure.len(),
                "full_algebra": closure.len() == full,
            });
            if closure.len() <= 64 {
                report["elements"] = json!(closure.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            }
            emit(cli, out, &report)?;
            Ok(Status::Ok)
        }
        Command::Speedup {
            fast,
            fast_cell,
            slow,
            slow_cell,
            n,
            buffers,
        } => {
            let f = load_cqca(fast)?;
            let s = load_cqca(slow)?;
            let rep = speedup((&f, *fast_cell), (&s, *slow_cell), *n, *buffers)?;
            let mut v = to_value(&rep)?;
            v["fast"] = json!(fast);
            v["slow"] = json!(slow);
            emit(cli, out, &v)?;
            Ok(Status::Ok)
        }
    }
}

fn load_fixture(dir: Option<PathBuf>) -> Result<(String, PeriodFixture), CliError> {
    let dir = dir.or_else(|| std::env::var_os(FIXTURES_ENV).map(PathBuf::from));
    let (source, text) = match dir {
        Some(d) => {
            let path = d.join(TABLE_FILE);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::user(format!("cannot read {}: {e}", path.display())))?;
            (path.display().to_string(), text)
        }
        None => (format!("bundled:{TABLE_FILE}"), BUNDLED_TABLE.to_string()),
    };
    let fixture = serde_json::from_str(&text)
        .map_err(|e| CliError::user(format!("{source}: line {} column {}: {e}", e.line(), e.column())))?;
    Ok((source, fixture))
}

fn period(
    cli: &Cli,
    out: &mut Vec<u8>,
    spec: &str,
    nmax: usize,
    golden: bool,
    fixtures: Option<PathBuf>,
) -> Result<Status, CliError> {
    if !(2..=MAX_TABLE_N).contains(&nmax) {
        return Err(CliError::user(format!("Nmax must lie in 2..={MAX_TABLE_N}")));
    }
    let t = load_cqca(spec)?;
    let rows = (2..=nmax)
        .step_by(2)
        .map(|n| Ok(PeriodRow { n, l: t.period(n)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut report = json!({ "cqca": spec, "nmax": nmax, "rows": to_value(&rows)? });
    let mut status = Status::Ok;
    if golden {
        let (source, fixture) = load_fixture(fixtures)?;
        let expected = load_cqca(&fixture.cqca)?;
        if expected != t {
            return Err(CliError::user(format!(
                "golden table is for {}, not {spec}",
                fixture.cqca
            )));
        }
        let actual: BTreeMap<usize, u64> = rows.iter().map(|r| (r.n, r.l)).collect();
        let mut checked = 0;
        let mut mismatches = Vec::new();
        for row in fixture.rows.iter().filter(|r| r.n <= nmax) {
            checked += 1;
            let got = actual.get(&row.n).copied();
            if got != Some(row.l) {
                mismatches.push(json!({ "n": row.n, "expected": row.l, "actual": got }));
            }
        }
        let matched = mismatches.is_empty() && checked > 0;
        if !matched {
            status = Status::PropertyFails;
        }
        report["golden"] = json!({
            "fixture": source,
            "rows_checked": checked,
            "matched": matched,
            "mismatches": mismatches,
        });
    }
    emit(cli, out, &report)?;
    Ok(status)
}

fn compile(cli: &Cli, out: &mut Vec<u8>, a: &CompileArgs) -> Result<Status, CliError> {
    let t = load_cqca(&a.spec.cqca)?;
    let request = match (&a.pauli, &a.logical, a.site, a.row) {
        (Some(p), _, _, _) => GateRequest::Pauli(parse_pauli(p, a.n)?),
        (_, Some(p), _, _) => GateRequest::Logical(p.parse()?),
        (_, _, Some(site), Some(l)) => {
            let seed = match a.letter.to_ascii_uppercase() {
                'Z' => Letter::Z,
                'X' => Letter::X,
                c => return Err(CliError::user(format!("seed letter must be Z or X, not {c}"))),
            };
            GateRequest::Generator { site, l, seed }
        }
        _ => return Err(CliError::user("give --site/--row, --pauli or --logical")),
    };
    let pattern = compile_rotation(&t, a.n, a.cell, &request, a.angle, a.buffers)?.with_nu(a.nu)?;
    emit(cli, out, &to_value(&pattern)?)?;
    Ok(Status::Ok)
}

fn simulate(
    cli: &Cli,
    out: &mut Vec<u8>,
    path: &PathBuf,
    state: &str,
    full_report: bool,
    rescale: bool,
    sample: Option<u64>,
) -> Result<Status, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::user(format!("cannot read {}: {e}", path.display())))?;
    let mut pattern: MeasurementPattern = serde_json::from_str(&text).map_err(|e| {
        CliError::user(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    pattern.validate()?;
    let t: CqcaMatrix = pattern.automaton()?;
    let junk: Junk = state.parse()?;
    let st = PhaseState::new(&t, pattern.n, pattern.cell, junk)?;
    let nu = match pattern.tilt {
        Some(tilt) => Some(estimate_nu(&st, tilt.site, tilt.column, tilt.sub)?),
        None => None,
    };
    if rescale {
        if let Some(r) = &nu {
            if r.failure {
                return Err(CliError::user(format!(
                    "nu = 0 at site {} row {}: the computation fails here",
                    r.site, r.l
                )));
            }
            pattern = pattern.with_nu(r.nu)?;
        }
    }
    let outcomes = match sample {
        Some(seed) => sample_outcomes(&st, &pattern, &mut ChaCha8Rng::seed_from_u64(seed))?,
        None => pattern.outcome_masks()?,
    };
    let check = verify_first_order(&st, &pattern, Some(&outcomes))?;
    let pass = check.pass;
    let report = if full_report {
        let wire = oblivious_wire(&st, &(0..=6).collect::<Vec<_>>())?;
        let fit = wire.log_linear_fit();
        json!({
            "state": junk.to_string(),
            "pattern": to_value(&pattern)?,
            "outcomes": outcomes,
            "nu": to_value(&nu)?,
            "first_order": to_value(&check)?,
            "wire": to_value(&wire)?,
            "wire_fit": fit.map(|(slope, r2)| json!({ "slope": slope, "r2": r2 })),
            "pass": pass,
        })
    } else {
        let op = simulate_pattern(&st, &pattern, Some(&outcomes))?;
        let rows: Vec<Vec<[f64; 2]>> = op
            .logical
            .row_iter()
            .map(|r| r.iter().map(|c| [c.re, c.im]).collect())
            .collect();
        json!({
            "weight": op.weight,
            "distance": check.distance,
            "tolerance": check.tolerance,
            "pass": pass,
            "logical": rows,
        })
    };
    emit(cli, out, &report)?;
    Ok(if pass { Status::Ok } else { Status::PropertyFails })
}
