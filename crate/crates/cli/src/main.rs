use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use frac_hardy::exponents::{gamma_roots, sobolev_exponents};
use frac_hardy::verifier::{self, ProblemSpec, VerificationReport};
use frac_hardy::{
    hardy_constant, lambda_derivative, lambda_folded, Error, FracParams, QuadratureConfig, Weight,
};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CRITICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "frac-hardy", version, about = "Constants, exponents and verification campaigns for fractional Hardy and CKN inequalities")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Spatial dimension N.
    #[arg(long = "N", global = true, default_value_t = 3)]
    n: u32,
    /// Fractional order s in (0, 1).
    #[arg(long, global = true, default_value_t = 0.5)]
    s: f64,
    /// Integrability exponent p > 1.
    #[arg(long, global = true, default_value_t = 2.0)]
    p: f64,
    /// Hardy weight exponent β.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, global = true, default_value_t = 1e-8, env = "FRAC_HARDY_REL_TOL")]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// γ₀, Λ(γ₀) and the sharp constant 2Λ(γ₀).
    Constants {
        /// Also evaluate Λ at this γ.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// CSV table of (γ, Λ(γ), Λ'(γ)).
    Curve {
        #[arg(long, default_value_t = 0.0)]
        gamma_min: f64,
        /// Defaults to γ_max = (N - ps - 2β)/(p - 1).
        #[arg(long)]
        gamma_max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Roots of Λ(γ) = λ, q₊ and the Sobolev exponents.
    Exponents {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Run a verification campaign.
    Verify {
        check: Check,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Supersolution certificate below q₊ or non-existence witness above it.
    Certify {
        /// Defaults to Λ(γ₀)/2.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Hardy,
    ImprovedHardy,
    Ckn,
    CknBounded,
    Picone,
    Elementary,
    GroundState,
    G1Identity,
    Barrier,
    Divergence,
}

enum Failure {
    Invalid(String),
    Numerical(String),
    Critical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct RunConfig {
    params: FracParams,
    weight: Option<Weight>,
    cfg: QuadratureConfig,
    common: Common,
}

impl RunConfig {
    fn new(common: Common, check_weight: bool) -> Result<Self, Failure> {
        let params = FracParams::new(common.n, common.s, common.p)?;
        let weight = if check_weight { Some(Weight::new(common.beta, &params)?) } else { None };
        let cfg = QuadratureConfig { rel_tol: common.rel_tol, ..Default::default() };
        cfg.validate()?;
        Ok(Self { params, weight, cfg, common })
    }

    fn weight(&self) -> Weight {
        self.weight.unwrap_or_else(|| Weight::unweighted(&self.params))
    }

    fn peak(&self) -> Result<f64, Failure> {
        let w = self.weight();
        Ok(lambda_folded(w.gamma0, &w, &self.params, &self.cfg)?.value)
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn to_csv(v: &Value) -> String {
    let mut s = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            s.push_str(&format!("{k},{x}\n"));
        }
    }
    s
}

fn render(run: &RunConfig, v: Value) -> String {
    match run.common.format {
        Format::Json => to_json(&v),
        Format::Csv => to_csv(&v),
    }
}

fn constants(run: &RunConfig, gamma: Option<f64>) -> Result<String, Failure> {
    let w = run.weight();
    let lam = lambda_folded(w.gamma0, &w, &run.params, &run.cfg)?;
    let sharp = hardy_constant(&w, &run.params, &run.cfg)?;
    let mut out = json!({
        "N": run.params.dim(),
        "s": run.params.s(),
        "p": run.params.p(),
        "beta": w.beta,
        "gamma0": w.gamma0,
        "gamma_max": w.gamma_max,
        "lambda_gamma0": lam.value,
        "hardy_constant": sharp.value,
        "abs_error": sharp.abs_error,
    });
    if let Some(g) = gamma {
        out["gamma"] = json!(g);
        out["lambda_gamma"] = json!(lambda_folded(g, &w, &run.params, &run.cfg)?.value);
    }
    Ok(render(run, out))
}

fn curve(run: &RunConfig, lo: f64, hi: Option<f64>, steps: usize) -> Result<String, Failure> {
    let w = run.weight();
    let hi = hi.unwrap_or(w.gamma_max);
    if !(lo >= 0.0 && hi > lo) || steps == 0 {
        return Err(Failure::Invalid("need 0 ≤ gamma_min < gamma_max and steps ≥ 1".into()));
    }
    let mut s = String::from("gamma,lambda,lambda_prime\n");
    for k in 0..=steps {
        let g = lo + (hi - lo) * k as f64 / steps as f64;
        let l = lambda_folded(g, &w, &run.params, &run.cfg)?.value;
        let d = lambda_derivative(g, &w, &run.params, &run.cfg)?.value;
        s.push_str(&format!("{g},{l},{d}\n"));
    }
    Ok(s)
}

fn exponents(run: &RunConfig, lambda: f64, q: Option<f64>) -> Result<String, Failure> {
    let w = run.weight();
    let roots = gamma_roots(lambda, &w, &run.params, run.common.rel_tol)?;
    let p_star_s_q = match q {
        Some(q) => Some(sobolev_exponents(&run.params, q)?.p_star_s_q),
        None => None,
    };
    let out = json!({
        "lambda": lambda,
        "gamma1": roots.gamma1,
        "gamma2": roots.gamma2,
        "residual": roots.residual,
        "q_plus": run.params.p() - 1.0 + run.params.ps() / roots.gamma1,
        "p_star_s": run.params.p_star(),
        "p_star_s_q": p_star_s_q,
    });
    Ok(render(run, out))
}

fn verify(
    run: &RunConfig,
    check: Check,
    trials: usize,
    q: Option<f64>,
    lambda: Option<f64>,
) -> Result<VerificationReport, Failure> {
    let (pr, beta, seed) = (&run.params, run.common.beta, run.common.seed);
    let report = match check {
        Check::Hardy => verifier::verify_hardy(trials, beta, pr, seed)?,
        Check::ImprovedHardy => {
            verifier::verify_improved_hardy(trials, q.unwrap_or(pr.p() - 0.5), pr, seed)?
        }
        Check::Ckn => verifier::verify_ckn(trials, beta, pr, false, None, seed)?,
        Check::CknBounded => {
            let critical = (pr.nf() - pr.ps()) / 2.0;
            let q = q.unwrap_or((1.0 + pr.p()) / 2.0);
            verifier::verify_ckn(trials, critical, pr, true, Some(q), seed)?
        }
        Check::Picone => verifier::verify_picone(trials, pr, seed)?,
        Check::Elementary => verifier::verify_elementary(trials, pr, seed)?,
        Check::GroundState => verifier::verify_ground_state(trials, pr, seed)?,
        Check::G1Identity => {
            let family = verifier::bump_family(1, seed)?;
            verifier::verify_g1_identity(&family[0], beta, pr)?
        }
        Check::Barrier => {
            let lambda = match lambda {
                Some(l) => l,
                None => run.peak()? / 2.0,
            };
            verifier::verify_truncation_barrier(lambda, pr)?
        }
        Check::Divergence => verifier::verify_divergence(beta, pr)?,
    };
    Ok(report)
}

fn certify(run: &RunConfig, lambda: Option<f64>, q: f64, radius: f64) -> Result<(String, bool), Failure> {
    let pr = &run.params;
    if !(q > pr.p() - 1.0) {
        return Err(Failure::Invalid(format!("q = {q} must exceed p - 1 = {}", pr.p() - 1.0)));
    }
    let lambda = match lambda {
        Some(l) => l,
        None => run.peak()? / 2.0,
    };
    let spec = ProblemSpec::new(lambda, q, radius)?;
    let q_plus = frac_hardy::critical_exponent_qplus(lambda, pr, verifier::ROOT_TOL)?;
    if (q - q_plus).abs() <= run.common.rel_tol * q_plus.max(1.0) {
        return Err(Failure::Critical(format!(
            "critical, undecidable at tolerance: q = {q} is within {:e} of q₊ = {q_plus}",
            run.common.rel_tol
        )));
    }
    let (regime, report) = if q < q_plus {
        ("subcritical", verifier::certify_supersolution(&spec, pr)?)
    } else {
        ("supercritical", verifier::nonexistence_witness(&spec, pr)?)
    };
    let out = json!({ "regime": regime, "q_plus": q_plus, "report": report });
    Ok((to_json(&out), report.passed()))
}

fn emit(run: &RunConfig, text: &str) -> Result<(), Failure> {
    match &run.common.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let needs_weight = !matches!(
        cli.command,
        Command::Verify { check: Check::Divergence | Check::CknBounded, .. }
    );
    let run = RunConfig::new(cli.common, needs_weight)?;
    let (text, passed) = match cli.command {
        Command::Constants { gamma } => (constants(&run, gamma)?, true),
        Command::Curve { gamma_min, gamma_max, steps } => (curve(&run, gamma_min, gamma_max, steps)?, true),
        Command::Exponents { lambda, q } => (exponents(&run, lambda, q)?, true),
        Command::Verify { check, trials, q, lambda } => {
            let report = verify(&run, check, trials, q, lambda)?;
            (to_json(&report), report.passed())
        }
        Command::Certify { lambda, q, radius } => certify(&run, lambda, q, radius)?,
    };
    emit(&run, &text)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Critical(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_CRITICAL)
        }
    }
}
