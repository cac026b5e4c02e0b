use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rigfol::extsearch::{build_extension_system, solve_extension_system};
use rigfol::foliation::{check_descends, check_integrability, check_pluecker, omega_from_fields, Distribution};
use rigfol::liecoh::{cohomology_dim, parse_algebra_json, quotient_module, ComplementChoice, LieAlgebraData};
use rigfol::multical::PForm;
use rigfol::pipeline::{run_pipeline, table1, PipelineOptions, VerdictReport};
use rigfol::singdim::{codim_report, SliceOptions};

/// Largest `n` run through the full pipeline without a warning.
const DESK_MAX_N: usize = 7;

#[derive(Parser, Debug)]
#[command(name = "rigfol", version, about = "Rigidity checks for foliations defined by Lie subalgebras of sl(n+1)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for the random slices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comma-separated primes for the slice certificate.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Slice trials per prime.
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,
    /// Write intermediate forms here.
    #[arg(long, global = true)]
    dump_dir: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Record stage timings (reports stop being byte-stable).
    #[arg(long, global = true)]
    timing: bool,
}

impl Global {
    fn slice(&self) -> SliceOptions {
        SliceOptions {
            primes: self.primes.clone(),
            count: if self.primes.is_empty() { 2 } else { self.primes.len() },
            trials: self.trials,
            seed: self.seed,
        }
    }

    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions { slice: self.slice(), dump_dir: self.dump_dir.clone(), timing: self.timing }
    }
}

/// Where the algebra comes from: a JSON spec or a named builtin.
#[derive(Args, Debug)]
struct AlgebraSource {
    /// Algebra spec file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    spec: Option<PathBuf>,
    /// Builtin name: infinito, chain, aff_sym, sl2_sym, diagonal, g6, g7.
    #[arg(long)]
    builtin: Option<String>,
    /// Builtin parameter `key=value`; the value is read as JSON.
    #[arg(long = "param", short = 'p', value_parser = parse_param)]
    params: Vec<(String, Value)>,
}

fn parse_param(s: &str) -> Result<(String, Value), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.to_string(), v))
}

impl AlgebraSource {
    fn id(&self) -> String {
        match (&self.spec, &self.builtin) {
            (Some(p), _) => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            (None, Some(b)) if self.params.is_empty() => b.clone(),
            (None, Some(b)) => {
                let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{b}({})", ps.join(","))
            }
            (None, None) => String::new(),
        }
    }

    fn load(&self) -> Result<LieAlgebraData> {
        let v = match (&self.spec, &self.builtin) {
            (Some(path), _) => read_json(path)?,
            (None, Some(name)) => {
                let params: serde_json::Map<String, Value> = self.params.iter().cloned().collect();
                json!({ "builtin": name, "params": params })
            }
            (None, None) => bail!("give an algebra with --spec FILE or --builtin NAME"),
        };
        let g = parse_algebra_json(&v).with_context(|| format!("loading algebra `{}`", self.id()))?;
        if g.n() > DESK_MAX_N {
            eprintln!("warning: n = {} is above the desk-scale cap {DESK_MAX_N}", g.n());
        }
        Ok(g)
    }
}

/// Input for stages that also accept a dumped form.
#[derive(Args, Debug)]
struct FormOrAlgebra {
    /// Form file as written by `omega --dump-dir`.
    #[arg(long, conflicts_with_all = ["spec", "builtin"])]
    form: Option<PathBuf>,
    #[command(flatten)]
    algebra: AlgebraSource,
}

impl FormOrAlgebra {
    fn distribution(&self) -> Result<Distribution> {
        match &self.form {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let omega = PForm::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                Ok(Distribution::from_form(omega)?)
            }
            None => Ok(omega_from_fields(&self.algebra.load()?.fields())?),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Complement {
    Graded,
    Standard,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute ω(𝔤) and its degree.
    Omega(AlgebraSource),
    /// Descent, Plücker and integrability checks.
    Check(FormOrAlgebra),
    /// Slice certificates for the codimension hypotheses.
    Singdim(FormOrAlgebra),
    /// dim H^k(𝔤, sl(n+1)/𝔤).
    Cohomology {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Complement::Graded)]
        complement: Complement,
    },
    /// Solve the extension structure equations for a given n.
    Extend {
        #[arg(long)]
        n: usize,
    },
    /// Every stage and a rigidity verdict.
    Pipeline(AlgebraSource),
    /// Every row of the rigid-foliation table.
    Table1,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn emit(global: &Global, value: &Value, text: impl FnOnce() -> String) -> Result<()> {
    if global.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn dump_form(global: &Global, name: &str, form: &PForm) -> Result<()> {
    if let Some(dir) = &global.dump_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(name);
        std::fs::write(&path, form.to_string()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn report_line(r: &VerdictReport) -> String {
    let h1 = r.h1_dim().map_or("-".to_string(), |d| d.to_string());
    let codim = match &r.codim {
        Some(c) if c.certified() => "certified",
        Some(_) => "refuted",
        None => "-",
    };
    format!(
        "{:<26} n={} q={} deg={} split={} h1={} verdict={}\n",
        r.algebra,
        r.n,
        r.q.map_or("-".into(), |q| q.to_string()),
        r.degree.map_or("-".into(), |d| d.to_string()),
        codim,
        h1,
        serde_json::to_value(&r.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
    )
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Omega(src) => {
            let d = omega_from_fields(&src.load()?.fields())?;
            let stem = src.id().replace(|c: char| !c.is_ascii_alphanumeric() && c != '_', "_");
            dump_form(g, &format!("{stem}.omega.form"), &d.omega)?;
            dump_form(g, &format!("{stem}.domega.form"), &d.omega.d())?;
            let v = json!({
                "algebra": src.id(),
                "n": d.n,
                "q": d.q,
                "degree": d.degree,
                "splitting_degrees": d.splitting_degrees,
                "omega": d.omega.to_string(),
            });
            emit(g, &v, || format!("n={} q={} degree={}\n{}", d.n, d.q, d.degree, d.omega))
        }
        Cmd::Check(input) => {
            let d = input.distribution()?;
            let descends = check_descends(&d.omega).map_err(|v| v.to_string());
            let pluecker = check_pluecker(&d.omega);
            let integrable = check_integrability(&d.omega);
            let v = json!({
                "n": d.n,
                "q": d.q,
                "degree": d.degree,
                "descends": descends.is_ok(),
                "pluecker": pluecker,
                "integrable": integrable,
            });
            emit(g, &v, || {
                format!(
                    "descends: {}\npluecker: {:?}\nintegrable: {:?}\n",
                    descends.map_or_else(|e| e, |deg| format!("degree {deg}")),
                    pluecker,
                    integrable
                )
            })
        }
        Cmd::Singdim(input) => {
            let d = input.distribution()?;
            let rep = codim_report(&d, &g.slice())?;
            emit(g, &serde_json::to_value(&rep)?, || {
                let line = |c: &rigfol::singdim::SliceCertificate| {
                    format!("{} codim >= {}: {:?} at {:?}\n", c.ideal_id, c.claimed_codim, c.verdict, c.primes)
                };
                line(&rep.omega_geq2) + &line(&rep.split_hypothesis)
            })
        }
        Cmd::Cohomology { algebra, degree, complement } => {
            let alg = algebra.load()?;
            let choice = match complement {
                Complement::Graded => ComplementChoice::Graded(0),
                Complement::Standard => ComplementChoice::Standard,
            };
            let h = cohomology_dim(&quotient_module(&alg, choice)?, degree)?;
            emit(g, &serde_json::to_value(&h)?, || format!("dim H^{degree} = {}\n", h.dim))
        }
        Cmd::Extend { n } => {
            let sys = build_extension_system(n)?;
            let sols = solve_extension_system(&sys)?;
            let v = json!({ "n": n, "unknowns": sys.unknown_names(), "solutions": sols });
            emit(g, &v, || {
                let mut s = format!("{} solution(s) in {}\n", sols.len(), sys.unknown_names().join(", "));
                for sol in &sols {
                    let vals: Vec<String> = sol.values.iter().map(ToString::to_string).collect();
                    let tail = match &sol.failing {
                        Some((a, b)) => format!("not closed at [{a}, {b}]"),
                        None => format!("closed: {}", sol.relations.join("; ")),
                    };
                    s += &format!("({}) {tail}\n", vals.join(", "));
                }
                s
            })
        }
        Cmd::Pipeline(src) => {
            let alg = src.load()?;
            let r = run_pipeline(&src.id(), &alg, &g.pipeline());
            emit(g, &serde_json::to_value(&r)?, || report_line(&r))
        }
        Cmd::Table1 => {
            let rows = table1(&g.pipeline());
            emit(g, &serde_json::to_value(&rows)?, || rows.iter().map(report_line).collect())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
