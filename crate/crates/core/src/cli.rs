//! Command-line driver: load a configuration, validate it, run the engine and
//! optionally the oracle, and render the result.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::engine::{analyze, AnalysisOptions, EngineError, HomologyReport, Mode, ModeRequest, RankValue};
use crate::model::{parse_config, validate, Violation};
use crate::oracle::oracle_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub input_path: PathBuf,
    pub mode: ModeRequest,
    pub run_oracle: bool,
    pub format: Format,
    pub assume_phi_injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub output: String,
}

#[derive(Serialize)]
struct Failure<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    violations: &'a [Violation],
}

fn failure(format: Format, exit_code: i32, kind: &str, message: String, violations: &[Violation]) -> RunOutcome {
    let output = match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(&Failure {
                error: kind,
                message,
                violations,
            })
            .expect("failure report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("error ({kind}): {message}\n");
            for v in violations {
                let _ = writeln!(s, "  - {v}");
            }
            s
        }
    };
    RunOutcome { exit_code, output }
}

fn engine_exit(e: &EngineError) -> (i32, &'static str) {
    match e {
        EngineError::ExactModeUnavailable { .. } | EngineError::Local(_) => (EXIT_INVALID, "invalid"),
        _ => (EXIT_INCONSISTENT, "inconsistent"),
    }
}

pub fn run(options: &RunOptions) -> RunOutcome {
    let format = options.format;
    let text = match std::fs::read_to_string(&options.input_path) {
        Ok(t) => t,
        Err(e) => {
            return failure(
                format,
                EXIT_IO,
                "io",
                format!("cannot read {}: {e}", options.input_path.display()),
                &[],
            )
        }
    };
    let config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return failure(format, EXIT_INVALID, "parse", e.to_string(), &[]),
    };
    let violations = validate(&config);
    if !violations.is_empty() {
        return failure(
            format,
            EXIT_INVALID,
            "invalid",
            format!("{} violation(s)", violations.len()),
            &violations,
        );
    }
    let analysis = AnalysisOptions {
        mode: options.mode,
        assume_phi_injective: options.assume_phi_injective,
    };
    let mut report = match analyze(&config, analysis) {
        Ok(r) => r,
        Err(e) => {
            let (code, kind) = engine_exit(&e);
            return failure(format, code, kind, e.to_string(), &[]);
        }
    };
    let mut exit_code = EXIT_OK;
    if options.run_oracle {
        match oracle_check(&config) {
            Ok(verdicts) => {
                if verdicts.iter().any(|v| !v.passed) {
                    exit_code = EXIT_ORACLE;
                }
                report.oracle_verdicts = Some(verdicts);
            }
            Err(e) => return failure(format, EXIT_ORACLE, "oracle", e.to_string(), &[]),
        }
    }
    let output = match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(&report),
    };
    RunOutcome { exit_code, output }
}

fn rank_line(out: &mut String, degree: u32, rank: &RankValue) {
    let _ = match rank {
        RankValue::Exact(v) => writeln!(out, "b∨_{degree} = {v}"),
        RankValue::Interval { lo, hi } => writeln!(out, "b∨_{degree} ∈ [{lo}, {hi}]"),
    };
}

/// Human-readable rendering. Carries the same numbers as the machine format.
pub fn render_text(r: &HomologyReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "{}", if r.label.is_empty() { "(unlabelled)" } else { &r.label });
    let _ = writeln!(w, "config: {}", r.config);
    let _ = writeln!(w, "V ⊂ P^{}, n = {}, d = {}", r.n + 1, r.n, r.d);
    let mode = match r.mode {
        Mode::Exact => "exact",
        Mode::RankBound => "rank-bound",
    };
    let requested = serde_json::to_value(r.mode_requested).expect("mode serializes");
    let _ = writeln!(w, "mode: {mode} (requested {})", requested.as_str().unwrap_or("?"));
    for c in &r.counts {
        let _ = writeln!(
            w,
            "  component {}: g = {}, ν = {}, γ = {}, μ⊥ = {}, #W = {}",
            c.id,
            c.genus,
            c.nu,
            c.gamma,
            c.mu_perp,
            c.loops()
        );
    }
    let _ = writeln!(w, "χ(V_Δ, V_ε) = {}", r.chi_vanishing);
    rank_line(w, r.top_degree, &r.b_top);
    rank_line(w, r.mid_degree, &r.b_mid);
    let _ = writeln!(w, "b∨_{} ≤ {} (loop kernel bound)", r.top_degree, r.b_top_bound);
    if let Some(basis) = &r.b_top_basis {
        let vecs: Vec<String> = basis
            .iter()
            .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        let _ = writeln!(w, "H∨_{} basis: [{}]", r.top_degree, vecs.join(", "));
    }
    let _ = writeln!(
        w,
        "H∨_{} is free; torsion of H∨_{}: {}",
        r.top_degree,
        r.mid_degree,
        match r.mid_torsion {
            crate::engine::TorsionStatus::Free => "none",
            crate::engine::TorsionStatus::Undetermined => "undetermined",
        }
    );
    let flags = &r.corollaries;
    for f in &flags.components {
        let _ = writeln!(
            w,
            "  {}: no eigenvalue 1 = {}, rank-zero Milnor fibre = {}",
            f.component, f.no_eigenvalue_one, f.rank_zero_fibre
        );
    }
    let _ = writeln!(
        w,
        "corollaries: top vanishes = {}, irreducible singular curve = {}",
        flags.top_vanishes, flags.irreducible_sigma
    );
    if let Some(b) = flags.betti_formula {
        let _ = writeln!(w, "closed-form b∨_{} = {}", r.mid_degree, b);
    }
    let _ = writeln!(
        w,
        "smooth fibre: χ(V_ε) = {}, b_{}(V_ε) = {}",
        r.smooth_baseline.chi, r.n, r.smooth_baseline.b_n
    );

    let a = &r.absolute;
    let stable: Vec<String> = a
        .stable_degrees
        .iter()
        .map(|d| format!("b_{}(V) = {}", d.degree, d.rank))
        .collect();
    if !stable.is_empty() {
        let _ = writeln!(w, "H_k(V) ≅ H_k(P^{}) away from degrees {}..{}: {}", r.n, r.n, r.n + 2, stable.join(", "));
    }
    let _ = writeln!(w, "b_{}(V) ≤ {}", r.n + 2, a.b_top_upper_bound);
    let _ = writeln!(w, "b_{}(V) ≤ {}", r.n, a.b_n_upper_bound);
    let _ = writeln!(w, "b_{}(V) = {}", r.n + 2, a.b_top);
    for rel in &a.relations {
        let _ = writeln!(w, "  {rel}");
    }
    if a.assumed_phi_injective {
        let _ = writeln!(w, "assuming Φ injective:");
        if let Some(b) = a.b_mid {
            let _ = writeln!(w, "  b_{}(V) = {}", r.n + 1, b);
        }
        match &a.b_n {
            Some(b) => {
                let _ = writeln!(w, "  b_{}(V) = {}", r.n, b);
            }
            None => {
                let _ = writeln!(w, "  b_{}(V) unresolved (b∨_{} not exact)", r.n, r.mid_degree);
            }
        }
    }
    if let Some(c) = &a.components_check {
        let _ = writeln!(w, "irreducible components r = {}: b∨_4 = r − 1 = {} holds", c.r, c.expected_top);
    }
    if let Some(verdicts) = &r.oracle_verdicts {
        let passed = verdicts.iter().filter(|v| v.passed).count();
        let _ = writeln!(w, "oracle: {passed}/{} verdicts passed", verdicts.len());
        for v in verdicts.iter().filter(|v| !v.passed) {
            let _ = writeln!(
                w,
                "  FAIL {} [{}]: {}",
                v.check,
                v.subject,
                v.witness.as_deref().unwrap_or("")
            );
        }
    }
    out
}
