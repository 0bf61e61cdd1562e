//! Command-line front end: exact analysis reports plus numerical
//! verification of the decay and integrability predictions.

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use polyheight::adapt::AdaptError;
use polyheight::algebra::{AlgebraError, LinearMap3, Polynomial, Scalar};
use polyheight::catalog::catalog;
use polyheight::pipeline::{analyze, analyze_with_matrix, Analysis, AnalyzeError};
use polyheight::report::AnalysisReport;
use polyheight::structure::StructureError;
use polyheight::verify::{
    decay_scan, fit_decay, integrability_probe, sublevel_measure, BumpSpec, SublevelBudget,
};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "polyheight",
    about = "Newton heights, adapted coordinates and sharp oscillatory decay \
             for trivariate polynomials with vanishing Hessian determinant",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: decomposition, adapted chart, h, ν, exponent report.
    Analyze {
        /// Polynomial in x1, x2, x3 (e.g. "x1^3+x1^2*x2+x1^4*x3").
        input: String,
        /// Witness matrix: nine comma-separated entries (row-major), each a
        /// rational p/q or a+b*sqrt(D).
        #[arg(long)]
        assume_matrix: Option<String>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compact single-line JSON.
        #[arg(long)]
        compact: bool,
    },
    /// Structural decomposition only.
    Decompose {
        input: String,
        #[arg(long)]
        assume_matrix: Option<String>,
    },
    /// Exact test of det(D²φ) ≡ 0.
    CheckHessian { input: String },
    /// Sample |J(λ·direction)| on a geometric grid and fit the decay rate.
    VerifyDecay {
        input: String,
        /// Frequency direction ξ/|ξ| as four comma-separated floats.
        #[arg(long, default_value = "0,0,0,1")]
        direction: String,
        #[arg(long, default_value_t = 64.0)]
        lmin: f64,
        #[arg(long, default_value_t = 262144.0)]
        lmax: f64,
        #[arg(long, default_value_t = 4)]
        points_per_octave: u32,
        /// Bump radius per axis.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// CSV output path (columns: lambda, re, im, abs, err).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate sublevel measures and decide the |φ|^{-1/p} dichotomy.
    VerifySublevel {
        input: String,
        /// Exponent p of the integrability test.
        #[arg(long)]
        p: f64,
        /// Half-width of the sampling box around the origin.
        #[arg(long, default_value_t = 1.0)]
        box_half: f64,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long, default_value_t = 2e-6)]
        eps_min: f64,
        #[arg(long, default_value_t = 1.5e-2)]
        eps_max: f64,
        /// CSV output path (columns: epsilon, measure, ci).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in corpus through the exact pipeline.
    Catalog {
        /// Emit one JSON report per entry.
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { input, assume_matrix, out, compact } => {
            let phi = match parse_input(&input) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let start = Instant::now();
            let analysis = match run_analysis(&phi, assume_matrix.as_deref()) {
                Ok(a) => a,
                Err(code) => return code,
            };
            let report = AnalysisReport::from_analysis(&analysis, start.elapsed().as_millis());
            let text = if compact {
                serde_json::to_string(&report).unwrap()
            } else {
                serde_json::to_string_pretty(&report).unwrap()
            };
            emit(out.as_deref(), &text)
        }
        Command::Decompose { input, assume_matrix } => {
            let phi = match parse_input(&input) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let analysis = match run_analysis(&phi, assume_matrix.as_deref()) {
                Ok(a) => a,
                Err(code) => return code,
            };
            let report = AnalysisReport::from_analysis(&analysis, 0);
            let text = serde_json::to_string_pretty(&report.decomposition).unwrap();
            emit(None, &text)
        }
        Command::CheckHessian { input } => {
            let phi = match parse_input(&input) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let rep = polyheight::structure::hessian_vanishes(&phi);
            let payload = match &rep.witness {
                Some((point, value)) => json!({
                    "vanishes": rep.vanishes,
                    "witness_point": point,
                    "witness_value": value.to_string(),
                }),
                None => json!({ "vanishes": rep.vanishes }),
            };
            emit(None, &serde_json::to_string_pretty(&payload).unwrap())
        }
        Command::VerifyDecay {
            input,
            direction,
            lmin,
            lmax,
            points_per_octave,
            radius,
            out,
        } => {
            let phi = match parse_input(&input) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let analysis = match run_analysis(&phi, None) {
                Ok(a) => a,
                Err(code) => return code,
            };
            let dir = match parse_direction(&direction) {
                Ok(d) => d,
                Err(msg) => return fail(2, "bad-direction", &msg),
            };
            let bump = BumpSpec::with_radius(radius);
            let scan = decay_scan(&phi, &bump, dir, lmin, lmax, points_per_octave);
            if let Some(path) = &out {
                let mut csv = String::from("lambda,re,im,abs,err\n");
                for s in &scan.samples {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        s.lambda,
                        s.value.re,
                        s.value.im,
                        s.value.norm(),
                        s.err
                    ));
                }
                if std::fs::write(path, csv).is_err() {
                    return fail(1, "io", "cannot write CSV output");
                }
            }
            let h = rational_to_f64(&analysis.height.height);
            let nu = analysis.height.nu;
            let normal_dir = dir[0] == 0.0 && dir[1] == 0.0 && dir[2] == 0.0;
            if dir[3] == 0.0 {
                // no stationary phase anywhere: super-polynomial decay
                let first = scan.samples.first().map(|s| s.value.norm());
                let last = scan.samples.last().map(|s| s.value.norm());
                let payload = json!({
                    "direction": dir,
                    "super_polynomial": true,
                    "first_abs": first,
                    "last_abs": last,
                    "samples": scan.samples.len(),
                });
                return emit(None, &serde_json::to_string_pretty(&payload).unwrap());
            }
            match fit_decay(&scan, nu) {
                Ok(fit) => {
                    let expected = -1.0 / h;
                    let pass = normal_dir && (fit.exponent - expected).abs() <= 0.07;
                    let payload = json!({
                        "direction": dir,
                        "fitted_exponent": fit.exponent,
                        "expected_exponent": expected,
                        "log_flag": nu,
                        "stderr": fit.stderr,
                        "r_squared": fit.r_squared,
                        "window": [fit.window.0, fit.window.1],
                        "accepted": scan.samples.len(),
                        "dropped": scan.dropped.len(),
                        "verdict": if normal_dir {
                            if pass { "PASS" } else { "FAIL" }
                        } else {
                            "n/a (non-normal direction)"
                        },
                    });
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    if normal_dir && !pass {
                        1
                    } else {
                        0
                    }
                }
                Err(e) => fail(1, "fit", &e.to_string()),
            }
        }
        Command::VerifySublevel { input, p, box_half, seed, eps_min, eps_max, out } => {
            let phi = match parse_input(&input) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let analysis = match run_analysis(&phi, None) {
                Ok(a) => a,
                Err(code) => return code,
            };
            let mut eps = Vec::new();
            let mut e = eps_max;
            while e >= eps_min * (1.0 - 1e-12) {
                eps.push(e);
                e /= 2.0;
            }
            let samples = sublevel_measure(&phi, box_half, &eps, seed, SublevelBudget::default());
            if let Some(path) = &out {
                let mut csv = String::from("epsilon,measure,ci\n");
                for s in &samples.samples {
                    csv.push_str(&format!("{},{},{}\n", s.epsilon, s.measure, s.ci));
                }
                if std::fs::write(path, csv).is_err() {
                    return fail(1, "io", "cannot write CSV output");
                }
            }
            let h = rational_to_f64(&analysis.height.height);
            match integrability_probe(&samples, p, analysis.height.nu, Some(1.0 / h)) {
                Ok(probe) => {
                    let payload = json!({
                        "p": p,
                        "h": analysis.height.height.to_string(),
                        "verdict": probe.verdict,
                        "boundary": probe.boundary,
                        "fitted_exponent": probe.fit.exponent,
                        "expected_exponent": 1.0 / h,
                        "stderr": probe.fit.stderr,
                        "points": probe.fit.points,
                        "total_samples": samples.total_points,
                    });
                    emit(None, &serde_json::to_string_pretty(&payload).unwrap())
                }
                Err(e) => fail(1, "fit", &e.to_string()),
            }
        }
        Command::Catalog { json: as_json } => {
            let mut failures = 0;
            for entry in catalog() {
                let phi = Polynomial::parse(entry.text, 3).unwrap();
                match analyze(&phi) {
                    Ok(a) => {
                        let h_expected = format_ratio(entry.h);
                        let h_got = a.height.height.to_string();
                        let ok = h_got == h_expected
                            && a.height.nu == entry.nu
                            && a.height.case == entry.case;
                        if !ok {
                            failures += 1;
                        }
                        if as_json {
                            let report = AnalysisReport::from_analysis(&a, 0);
                            println!("{}", serde_json::to_string(&report).unwrap());
                        } else {
                            println!(
                                "{:12} {:28} h={:6} nu={} p_S={:5} [{}] {}",
                                format!("{:?}", a.height.case),
                                entry.name,
                                h_got,
                                a.height.nu,
                                a.exponents.p_s.to_string(),
                                report_status(&a),
                                if ok { "ok" } else { "MISMATCH" }
                            );
                        }
                    }
                    Err(e) => {
                        failures += 1;
                        eprintln!("{}: analysis failed: {e}", entry.name);
                    }
                }
            }
            if failures > 0 {
                1
            } else {
                0
            }
        }
    }
}

fn report_status(a: &Analysis) -> &'static str {
    match a.exponents.p_s_status {
        polyheight::adapt::PSStatus::Exact => "exact",
        polyheight::adapt::PSStatus::LowerBoundOnly => "lower-bound-only",
        polyheight::adapt::PSStatus::CurvatureCase => "curvature-case",
    }
}

fn format_ratio((n, d): (i64, i64)) -> String {
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn parse_input(text: &str) -> Result<Polynomial, i32> {
    match Polynomial::parse(text, 3) {
        Ok(p) => Ok(p),
        Err(e) => {
            let (kind, data) = match &e {
                AlgebraError::Parse { offset, msg } => {
                    ("parse", json!({ "offset": offset, "message": msg }))
                }
                AlgebraError::DegreeCap(d) => ("degree-cap", json!({ "degree": d })),
                AlgebraError::VariableRange(v) => ("variable-range", json!({ "variable": v })),
                other => ("parse", json!({ "message": other.to_string() })),
            };
            Err(fail(2, kind, &serde_json::to_string(&data).unwrap()))
        }
    }
}

fn parse_direction(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err("direction needs four comma-separated components".into());
    }
    let mut d = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        d[i] = p
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad direction component `{p}`"))?;
    }
    if d.iter().all(|x| *x == 0.0) {
        return Err("direction must be nonzero".into());
    }
    Ok(d)
}

fn parse_matrix(text: &str) -> Result<LinearMap3, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 9 {
        return Err("matrix needs nine comma-separated entries (row-major)".into());
    }
    let mut entries: Vec<Scalar> = Vec::with_capacity(9);
    for p in parts {
        entries.push(p.trim().parse::<Scalar>()?);
    }
    let rows: [[Scalar; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| entries[3 * i + j].clone())
    });
    LinearMap3::new(rows).map_err(|e| e.to_string())
}

fn run_analysis(phi: &Polynomial, assume_matrix: Option<&str>) -> Result<Analysis, i32> {
    let result = match assume_matrix {
        Some(text) => match parse_matrix(text) {
            Ok(a) => analyze_with_matrix(phi, a),
            Err(msg) => return Err(fail(2, "bad-matrix", &msg)),
        },
        None => analyze(phi),
    };
    result.map_err(|e| {
        let (code, kind) = match &e {
            AnalyzeError::Structure(StructureError::NotDegenerate { .. }) => (3, "not-degenerate"),
            AnalyzeError::Structure(StructureError::Precondition(_)) => (2, "precondition"),
            AnalyzeError::Structure(StructureError::Unrepresentable(_)) => (4, "unrepresentable"),
            AnalyzeError::Structure(StructureError::CandidateIrrational { .. }) => {
                (4, "candidate-irrational")
            }
            AnalyzeError::Adapt(AdaptError::IterationCapExceeded { .. }) => (5, "iteration-cap"),
            AnalyzeError::Adapt(_) => (4, "adapt"),
            AnalyzeError::Newton(_) => (2, "newton"),
        };
        fail(code, kind, &e.to_string())
    })
}

/// Prints structured diagnostics JSON on stderr; returns the exit code.
fn fail(code: i32, kind: &str, detail: &str) -> i32 {
    let payload = json!({ "error": kind, "detail": detail, "exit_code": code });
    eprintln!("{}", serde_json::to_string(&payload).unwrap());
    code
}

fn emit(path: Option<&std::path::Path>, text: &str) -> i32 {
    match path {
        Some(p) => {
            if let Err(e) = std::fs::File::create(p).and_then(|mut f| f.write_all(text.as_bytes()))
            {
                return fail(1, "io", &e.to_string());
            }
            0
        }
        None => {
            println!("{text}");
            0
        }
    }
}
