//! End-to-end rigidity verdicts for Lie subalgebras of `sl(n+1)`.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::foliation::{check_descends, check_integrability, check_pluecker, omega_from_fields, pullback_linear, CheckResult, Distribution, FoliationError};
use crate::liecoh::{builtin_algebra, cohomology_dim, quotient_module, CohomologyReport, ComplementChoice, LieAlgebraData, LieError};
use crate::singdim::{codim_report, CodimReport, SliceOptions};

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub slice: SliceOptions,
    /// Directory for form dumps; nothing is written when `None`.
    pub dump_dir: Option<PathBuf>,
    /// Adds wall-clock timings; reports are then no longer byte-stable.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Split hypothesis certified and `H^1 = 0`.
    Rigid,
    /// Some hypothesis failed or was refuted.
    NotCertified,
    /// `ω(𝔤)` vanishes or a stage errored.
    NoVerdict,
    /// Pull-back rows: structural checks only.
    ChecksOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub algebra: String,
    pub n: usize,
    pub q: Option<usize>,
    pub degree: Option<i64>,
    pub omega_nonzero: bool,
    pub descends: Option<bool>,
    pub pluecker: Option<CheckResult>,
    pub integrable: Option<CheckResult>,
    pub splitting_degrees: Option<Vec<i64>>,
    pub codim: Option<CodimReport>,
    pub h1: Option<CohomologyReport>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<serde_json::Value>,
}

impl VerdictReport {
    fn empty(algebra: &str, n: usize) -> VerdictReport {
        VerdictReport {
            algebra: algebra.to_string(),
            n,
            q: None,
            degree: None,
            omega_nonzero: false,
            descends: None,
            pluecker: None,
            integrable: None,
            splitting_degrees: None,
            codim: None,
            h1: None,
            verdict: Verdict::NoVerdict,
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn is_rigid(&self) -> bool {
        self.verdict == Verdict::Rigid
    }

    pub fn h1_dim(&self) -> Option<usize> {
        self.h1.as_ref().map(|h| h.dim)
    }
}

fn dump(opts: &PipelineOptions, name: &str, body: &str) -> Result<(), String> {
    if let Some(dir) = &opts.dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
        std::fs::write(dir.join(name), body).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

fn structural(d: &Distribution, r: &mut VerdictReport) {
    r.q = Some(d.q);
    r.degree = Some(d.degree);
    r.omega_nonzero = !d.omega.is_zero();
    r.splitting_degrees = d.splitting_degrees.clone();
    r.descends = Some(match check_descends(&d.omega) {
        Ok(deg) => deg == d.degree,
        Err(v) => {
            r.notes.push(format!("descent: {v}"));
            false
        }
    });
    r.pluecker = Some(check_pluecker(&d.omega));
    r.integrable = Some(check_integrability(&d.omega));
}

/// Runs every stage on `g`, recording failures in the report.
pub fn run_pipeline(id: &str, g: &LieAlgebraData, opts: &PipelineOptions) -> VerdictReport {
    let mut r = VerdictReport::empty(id, g.n());
    let mut times = serde_json::Map::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, times: &mut serde_json::Map<String, serde_json::Value>| {
        times.insert(name.to_string(), json!(clock.elapsed().as_millis() as u64));
        clock = Instant::now();
    };
    let d = match omega_from_fields(&g.fields()) {
        Ok(d) => d,
        Err(FoliationError::DegenerateOmega) => {
            r.notes.push("omega vanishes identically".into());
            return r;
        }
        Err(e) => {
            r.notes.push(format!("omega: {e}"));
            return r;
        }
    };
    let stem = file_stem(id);
    if let Err(e) = dump(opts, &format!("{stem}.omega.form"), &d.omega.to_string())
        .and_then(|_| dump(opts, &format!("{stem}.domega.form"), &d.omega.d().to_string()))
    {
        r.notes.push(format!("dump: {e}"));
    }
    lap("omega", &mut times);
    structural(&d, &mut r);
    lap("checks", &mut times);
    match codim_report(&d, &opts.slice) {
        Ok(c) => r.codim = Some(c),
        Err(e) => r.notes.push(format!("codim: {e}")),
    }
    lap("codim", &mut times);
    let module = match quotient_module(g, ComplementChoice::Graded(0)) {
        Err(LieError::NotSemisimple(why)) => {
            r.notes.push(format!("ungraded complement: {why}"));
            quotient_module(g, ComplementChoice::Standard)
        }
        other => other,
    };
    match module.and_then(|m| cohomology_dim(&m, 1)) {
        Ok(h) => {
            if !h.modular_agrees {
                r.notes.push("modular rank cross-check disagrees".into());
            }
            r.h1 = Some(h)
        }
        Err(e) => r.notes.push(format!("cohomology: {e}")),
    }
    lap("cohomology", &mut times);
    let structural_ok = r.descends == Some(true)
        && r.pluecker.as_ref().is_some_and(CheckResult::is_pass)
        && r.integrable.as_ref().is_some_and(CheckResult::is_pass);
    let split = r.codim.as_ref().is_some_and(CodimReport::certified);
    let h1_zero = r.h1_dim() == Some(0);
    r.verdict = if structural_ok && split && h1_zero { Verdict::Rigid } else { Verdict::NotCertified };
    if opts.timing {
        r.timing_ms = Some(serde_json::Value::Object(times));
    }
    r
}

/// Structural checks on the pull-back of `ω(𝔤)` along a linear projection.
pub fn run_pullback(id: &str, g: &LieAlgebraData, m: usize) -> VerdictReport {
    let mut r = VerdictReport::empty(id, g.n() + m);
    match omega_from_fields(&g.fields()) {
        Ok(d) => {
            let pb = pullback_linear(&d, m);
            structural(&pb, &mut r);
            if r.degree != Some(d.degree) {
                r.notes.push("degree changed under pull-back".into());
            }
            r.verdict = Verdict::ChecksOnly;
        }
        Err(e) => r.notes.push(format!("omega: {e}")),
    }
    r
}

/// One row of the rigid-foliation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableRow {
    Builtin { id: String, name: &'static str, params: serde_json::Value },
    Pullback { id: String, name: &'static str, params: serde_json::Value, m: usize },
}

pub fn table1_rows() -> Vec<TableRow> {
    let b = |id: String, name, params| TableRow::Builtin { id, name, params };
    let mut rows = Vec::new();
    for q in [2usize, 3] {
        rows.push(b(format!("aff_sym({})", q + 2), "aff_sym", json!({"r": q + 2})));
    }
    for r in [5usize, 6] {
        rows.push(b(format!("sl2_sym({r})"), "sl2_sym", json!({"r": r})));
    }
    for n in 3usize..=6 {
        rows.push(b(format!("infinito({n})"), "infinito", json!({"n": n})));
    }
    rows.push(b("g6".into(), "g6", json!({})));
    rows.push(b("g7".into(), "g7", json!({})));
    for m in [1usize, 2] {
        rows.push(TableRow::Pullback {
            id: format!("pullback(infinito(3),{m})"),
            name: "infinito",
            params: json!({"n": 3}),
            m,
        });
    }
    rows
}

/// Runs every table row in parallel; output order follows [`table1_rows`].
pub fn table1(opts: &PipelineOptions) -> Vec<VerdictReport> {
    table1_rows()
        .par_iter()
        .map(|row| match row {
            TableRow::Builtin { id, name, params } => match builtin_algebra(name, params) {
                Ok(g) => run_pipeline(id, &g, opts),
                Err(e) => {
                    let mut r = VerdictReport::empty(id, 0);
                    r.notes.push(e.to_string());
                    r
                }
            },
            TableRow::Pullback { id, name, params, m } => match builtin_algebra(name, params) {
                Ok(g) => run_pullback(id, &g, *m),
                Err(e) => {
                    let mut r = VerdictReport::empty(id, 0);
                    r.notes.push(e.to_string());
                    r
                }
            },
        })
        .collect()
}
