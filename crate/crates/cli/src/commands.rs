use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use lattice_skein::coeff::{self, CoeffError, Route};
use lattice_skein::oracle::MarkerConvention;
use lattice_skein::poset::{self, FiberMode};
use lattice_skein::tree;
use lattice_skein::verify;
use lattice_skein::{BSeq, CatalanError, CatalanState, Exec, Oracle, OracleError, PosetError, TreeError};

use crate::{ExportWhat, Format, RouteArg, StateSource};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Budget(String),
    #[error("{summary}")]
    Mismatch { summary: String, output: String },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Mismatch { .. } => 4,
        }
    }

    /// Partial output to print before the error message.
    pub fn stdout(&self) -> Option<&str> {
        match self {
            CliError::Mismatch { output, .. } => Some(output),
            _ => None,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<CoeffError> for CliError {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::Oracle(o) | CoeffError::Poset(PosetError::Oracle(o)) => o.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Oracle(o) => o.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<CatalanError> for CliError {
    fn from(e: CatalanError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        CliError::Validation(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Reads a state from inline JSON or from a JSON file.
fn read_state(arg: &str) -> Result<CatalanState> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Validation(format!("cannot read {arg}: {e}")))?
    };
    Ok(CatalanState::from_json(&text)?)
}

fn resolve(source: &StateSource) -> Result<CatalanState> {
    match (&source.state, &source.b, source.n) {
        (Some(s), None, _) => read_state(s),
        (None, Some(b), Some(n)) => Ok(BSeq::parse(b, n)?.state()),
        _ => Err(CliError::Validation("give either --state or --b with --n".into())),
    }
}

pub fn expand(
    m: usize,
    n: usize,
    restricted: bool,
    filter: Option<&str>,
    format: Format,
    oracle: &Oracle,
) -> Result<String> {
    if m == 0 || n == 0 {
        return Err(CliError::Validation("m and n must be positive".into()));
    }
    let filter = filter.map(read_state).transpose()?;
    if let Some(f) = &filter {
        if (f.m(), f.n()) != (m, n) {
            return Err(CliError::Validation(format!(
                "filter state lives in L({},{}), not L({m},{n})",
                f.m(),
                f.n()
            )));
        }
    }
    let expansion = if restricted {
        oracle.restricted_expansion(m, n)?
    } else {
        oracle.full_expansion(m, n)?
    };
    let rows: Vec<(CatalanState, String)> = match &filter {
        Some(f) => vec![(f.clone(), expansion.get(f).map_or_else(|| "0".to_string(), |p| p.to_string()))],
        None => expansion.iter().map(|(s, p)| (s.clone(), p.to_string())).collect(),
    };
    let mut out = String::new();
    match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(s, p)| serde_json::json!({ "state": s, "coefficient": p }))
                .collect();
            let doc = serde_json::json!({ "m": m, "n": n, "restricted": restricted, "buckets": items });
            out = serde_json::to_string_pretty(&doc).expect("json") + "\n";
        }
        _ => {
            for (s, p) in rows {
                let _ = writeln!(out, "{s}\t{p}");
            }
        }
    }
    Ok(out)
}

pub fn coeff(source: &StateSource, route: RouteArg, format: Format, oracle: &Oracle) -> Result<String> {
    let state = resolve(source)?;
    let route = match route {
        RouteArg::Auto => None,
        RouteArg::Tree => Some(Route::Tree),
        RouteArg::Fiber => Some(Route::Fiber),
        RouteArg::Oracle => Some(Route::Oracle),
        RouteArg::Factored => Some(Route::Factored),
    };
    let report = coeff::property_report(&state, route, oracle)?;
    let out = match format {
        Format::Json => report.to_json() + "\n",
        _ => {
            let mut out = String::new();
            let p = &report.properties;
            let _ = writeln!(out, "state: {}", report.state);
            let _ = writeln!(out, "coefficient: {}", report.coefficient);
            let _ = writeln!(out, "route: {}", report.route);
            let _ = writeln!(out, "palindromic: {}", p.palindromic);
            let _ = writeln!(out, "unimodal: {}", p.unimodal);
            let _ = writeln!(out, "positive: {}", p.positive);
            let _ = writeln!(out, "no_gaps: {}", p.no_gaps);
            if let Some(b) = &report.b_min {
                let _ = writeln!(out, "b_min: {b}");
            }
            if let Some(b) = &report.b_max {
                let _ = writeln!(out, "b_max: {b}");
            }
            if let Some(d) = report.mindeg_q {
                let _ = writeln!(out, "mindeg_q: {d}");
            }
            for e in &report.expectations {
                let _ = writeln!(out, "expect {}: {}", e.name, if e.holds { "ok" } else { "FAILED" });
            }
            out
        }
    };
    if !report.expectations_hold() {
        return Err(CliError::Mismatch {
            summary: format!("expected properties fail for {}", report.state.to_json()),
            output: out,
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    max_m: usize,
    max_n: usize,
    trees: usize,
    max_edges: usize,
    seed: u64,
    flip: bool,
    format: Format,
    oracle: &Oracle,
) -> Result<String> {
    let oracle = if flip {
        oracle.with_convention(MarkerConvention::Flipped)
    } else {
        *oracle
    };
    let mut report = verify::sweep(max_m, max_n, &oracle)?;
    for (name, tally) in verify::tree_sweep(trees, max_edges, seed) {
        report.checks.insert(name, tally);
    }
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("json") + "\n",
        _ => {
            let mut out = String::new();
            for s in &report.shapes {
                let total = s.total.map_or_else(|| "-".to_string(), |t| t.to_string());
                let _ = writeln!(out, "L({},{}): {} floor-free states, {} states in total", s.m, s.n, s.floor_free, total);
            }
            for (m, n) in &report.skipped {
                let _ = writeln!(out, "L({m},{n}): skipped (over budget)");
            }
            for (name, t) in &report.checks {
                let status = if t.failed == 0 { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{status} {name}: {} passed, {} failed", t.passed, t.failed);
                if let Some(w) = &t.first_failure {
                    let _ = writeln!(out, "  first failure: {w}");
                }
            }
            let _ = writeln!(out, "states checked: {}", report.states_checked());
            out
        }
    };
    if !report.ok() {
        return Err(CliError::Mismatch {
            summary: format!("{} check(s) failed", report.failures()),
            output: out,
        });
    }
    Ok(out)
}

pub fn export(
    source: &StateSource,
    what: ExportWhat,
    out: Option<&Path>,
    format: Format,
    oracle: &Oracle,
) -> Result<String> {
    let state = resolve(source)?;
    let text = match what {
        ExportWhat::State => state.to_json() + "\n",
        ExportWhat::Hasse => {
            let h = poset::hasse_with(&state, FiberMode::Peeling, oracle)?;
            match format {
                Format::Json => serde_json::to_string_pretty(&h).expect("json") + "\n",
                _ => h.to_dot(),
            }
        }
        ExportWhat::Tree => {
            let (t, d) = tree::tree_of(&state)?;
            match format {
                Format::Json => {
                    let doc = serde_json::json!({
                        "tree": tree::delayed_paren(&t, &d),
                        "q": tree::plucking(&t, &d).to_string(),
                    });
                    serde_json::to_string_pretty(&doc).expect("json") + "\n"
                }
                Format::Text => tree::delayed_paren(&t, &d) + "\n",
                Format::Dot => t.to_dot(Some(&d)),
            }
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn bench(m: usize, n: usize, restricted: bool, reps: usize, oracle: &Oracle) -> Result<String> {
    let mut out = String::new();
    let mut reference = None;
    for exec in [Exec::Serial, Exec::Parallel] {
        let o = Oracle { exec, ..*oracle };
        let mut best = f64::INFINITY;
        for _ in 0..reps.max(1) {
            let start = Instant::now();
            let e = if restricted {
                o.restricted_expansion(m, n)?
            } else {
                o.full_expansion(m, n)?
            };
            best = best.min(start.elapsed().as_secs_f64());
            match &reference {
                None => reference = Some(e),
                Some(r) if *r != e => {
                    return Err(CliError::Mismatch {
                        summary: "serial and parallel expansions differ".into(),
                        output: out,
                    })
                }
                Some(_) => {}
            }
        }
        let name = if exec == Exec::Serial { "serial" } else { "parallel" };
        let _ = writeln!(out, "{name}: {:.3} ms (best of {})", best * 1e3, reps.max(1));
    }
    Ok(out)
}
