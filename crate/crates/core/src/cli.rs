//! Command-line front end. Every subcommand prints a human-readable summary
//! and can write a canonical JSON report with `--json FILE`.
//!
//! Exit codes: 0 pass, 1 fail with witness, 2 usage or data error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::acceptance::{run_all, DEFAULT_SEED};
use crate::arith::{Ring, WittRing};
use crate::bialgebra::{dualize, height1_gamma, GammaAlgebra, GammaModule, TwistedBialgebra};
use crate::fgl::{honda, FormalGroupLaw, Height};
use crate::graded::{verify_coherence, GradedObj};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::series::TruncSeries;
use crate::theta::{
    derive_theta, frobenius_congruence_comodule, gamma_congruence_check, verify_weight_p_squares, wilkerson_check, ComoduleAlgebra,
    CongruenceReport, FrobeniusClassSpec, PsiRingPresentation,
};
use crate::weights::{binomial_gcd, epi_family_check, prime_power, regularity_certificate, EpiFamily};

#[derive(Debug, Parser)]
#[command(name = "powops", version, about = "Exact checks for formal groups, power operations and their congruences")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the machine-readable report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    #[arg(long, global = true)]
    precision: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Formal group laws.
    Fgl {
        #[command(subcommand)]
        cmd: FglCmd,
    },
    /// The twisted Z/2-graded category.
    Graded {
        #[command(subcommand)]
        cmd: GradedCmd,
    },
    /// Twisted bialgebras and their duals.
    Bialg {
        #[command(subcommand)]
        cmd: BialgCmd,
    },
    /// ψ-ring presentations and θ.
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// Congruence criteria for Γ-algebras and comodules.
    Congruence {
        #[command(subcommand)]
        cmd: CongruenceCmd,
    },
    /// Critical weights and epimorphic families.
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Builtin {
    Multiplicative,
    Additive,
    Honda,
}

#[derive(Debug, Subcommand)]
enum FglCmd {
    /// Axioms, [p]-series and height of a law read from a file.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// The same for a built-in law over Z/p^N.
    Builtin {
        #[arg(value_enum)]
        kind: Builtin,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        height: u32,
    },
}

#[derive(Debug, Subcommand)]
enum GradedCmd {
    /// Pentagon, triangle, hexagon and symmetry on a list of objects.
    Coherence {
        /// JSON list of `{"even": [...], "odd": [...]}`; defaults to the standard four objects.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum BialgCmd {
    /// Axioms of a bialgebra read from a file, and of its dual.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// The height-one bialgebra over W(F_{p^f})/p^N.
    Height1 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ThetaCmd {
    /// `ψ(x) ≡ x^p mod p` for a presentation, with θ on generators when it holds.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CongruenceCmd {
    /// `x·σ ≡ x^p` on W(F_{p^f})/p^N with ψ acting by `a·σ`.
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        a: i64,
    },
    /// The Frobenius congruence for comodule data read from a file.
    Comodule {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// The weight-p pullback and pushout at height one over Z/p^N.
    Squares {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
enum WeightsCmd {
    /// Table of gcd{C(m, i) : 0 < i < m}.
    Gcd {
        #[arg(long)]
        max: u64,
    },
    /// Regularity certificate for weight m at the prime p.
    Certify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
    /// Joint surjectivity of a family of module maps.
    Epi {
        #[arg(long)]
        file: PathBuf,
    },
}

/// The JSON document written by `--json`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub verdict: &'static str,
    pub checks: Report,
    pub data: Value,
}

struct Outcome {
    text: String,
    checks: Report,
    data: Value,
}

type CmdResult = Result<Outcome, String>;

fn read_json(path: &PathBuf, digest: &mut Sha256) -> Result<Value, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    digest.update(&bytes);
    serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn congruence_outcome(rep: &CongruenceReport, mut text: String) -> Outcome {
    if rep.passed {
        text.push_str("congruence holds\n");
    }
    for w in &rep.witnesses {
        text.push_str(&format!("witness {}: defect residue [{}]\n", w.label, w.residue.join(", ")));
    }
    let mut data = rep.to_json();
    if let Some(obj) = data.as_object_mut() {
        obj.remove("checks");
    }
    Outcome { text, checks: rep.checks.clone(), data }
}

fn fgl_report<R: Ring>(law: &FormalGroupLaw<R>, p: u64) -> Outcome {
    let mut checks = Report::new();
    let ax = law.axioms();
    for (name, residual) in ax.checks() {
        checks.expect_none(name, (residual != "0").then(|| residual.to_string()));
    }
    let mut text = format!("axioms: {}\n", if ax.ok() { "hold" } else { "fail" });
    let mut data = json!({});
    match law.n_series(p as i64) {
        Ok(s) => {
            text.push_str(&format!("[{p}](x) = {s}\n"));
            data["p_series"] = json!(s.to_string());
        }
        Err(e) => checks.push("p_series", false, Some(e.to_string())),
    }
    if law.ring().char_p() == Some(p) {
        match law.height(p) {
            Ok(h) => {
                let shown = match h {
                    Height::Exact(n) => n.to_string(),
                    Height::AtLeast(n) => format!("at least {n}"),
                };
                text.push_str(&format!("height: {shown}\n"));
                data["height"] = json!(shown);
            }
            Err(e) => checks.push("height", false, Some(e.to_string())),
        }
    }
    Outcome { text, checks, data }
}

fn run_fgl(cli: &Cli, cmd: &FglCmd, digest: &mut Sha256) -> CmdResult {
    let bound = cli.degree_bound.unwrap_or(8);
    let prec = cli.precision.unwrap_or(1);
    match cmd {
        FglCmd::Check { file } => {
            let v = read_json(file, digest)?;
            let ring = WittRing::from_json(v.get("ring").ok_or("missing ring")?).map_err(|e| e.to_string())?;
            let law = TruncSeries::from_json(&ring, v.get("F").ok_or("missing F")?).map_err(|e| e.to_string())?;
            if law.vars().len() != 2 {
                return Err("F must be a series in two variables".into());
            }
            Ok(fgl_report(&FormalGroupLaw::new_unchecked(law), ring.p()))
        }
        FglCmd::Builtin { kind, p, height } => {
            let ring = WittRing::prime_field(*p, prec).map_err(|e| e.to_string())?;
            let law = match kind {
                Builtin::Multiplicative => FormalGroupLaw::multiplicative(&ring, bound),
                Builtin::Additive => FormalGroupLaw::additive(&ring, bound),
                Builtin::Honda => honda(*p, *height, prec, bound).map_err(|e| e.to_string())?,
            };
            let mut out = fgl_report(&law, *p);
            if prec > 1 {
                let res = fgl_report(&law.residue(), *p);
                out.text.push_str(&format!("mod {p}:\n{}", res.text));
                out.checks.extend("residue.", res.checks);
                out.data["residue"] = res.data;
            }
            Ok(out)
        }
    }
}

fn run_graded(cli: &Cli, cmd: &GradedCmd, digest: &mut Sha256) -> CmdResult {
    let GradedCmd::Coherence { file } = cmd;
    let ring = WittRing::prime_field(2, cli.precision.unwrap_or(3)).map_err(|e| e.to_string())?;
    let objects = match file {
        None => GradedObj::standard_set(&ring),
        Some(path) => read_json(path, digest)?
            .as_array()
            .ok_or("expected a list of objects")?
            .iter()
            .map(|o| GradedObj::from_json(&ring, o).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let rep = verify_coherence(&objects, None).map_err(|e| e.to_string())?;
    let mut checks = Report::new();
    for c in &rep.checks {
        checks.push(c.name.clone(), c.ok, c.witness.as_ref().map(|(l, r)| format!("{l} vs {r}")));
    }
    let text = format!("{} diagrams, {} fail\n", rep.checks.len(), rep.checks.iter().filter(|c| !c.ok).count());
    Ok(Outcome { text, checks, data: json!({"objects": objects.iter().map(GradedObj::to_json).collect::<Vec<_>>()}) })
}

fn bialgebra_outcome(g: &TwistedBialgebra) -> CmdResult {
    let mut checks = g.verify().map_err(|e| e.to_string())?;
    let mut data = json!({"kmax": g.kmax, "ranks": (0..=g.kmax).map(|k| g.rank(k)).collect::<Vec<_>>()});
    if checks.passed() {
        let dual = dualize(g).map_err(|e| e.to_string())?;
        checks.extend("dual.", dual.verify());
        checks.push("dual.i_star_iso", dual.i_star_is_iso(), None);
        data["t_star_frobenius_power"] = json!((1..=g.kmax).map(|k| dual.t_star_frobenius_power(k)).collect::<Vec<_>>());
    }
    let failed: Vec<&str> = checks.failures().map(|c| c.name.as_str()).collect();
    let text = if failed.is_empty() {
        format!("{} checks pass\n", checks.checks.len())
    } else {
        format!("failing: {}\n", failed.join(", "))
    };
    Ok(Outcome { text, checks, data })
}

fn run_bialg(cli: &Cli, cmd: &BialgCmd, digest: &mut Sha256) -> CmdResult {
    match cmd {
        BialgCmd::Check { file } => {
            let g = TwistedBialgebra::from_json(&read_json(file, digest)?).map_err(|e| e.to_string())?;
            bialgebra_outcome(&g)
        }
        BialgCmd::Height1 { p, f, kmax } => {
            let g = height1_gamma(*p, cli.precision.unwrap_or(3), *f, *kmax).map_err(|e| e.to_string())?;
            bialgebra_outcome(&g)
        }
    }
}

fn run_theta(cli: &Cli, cmd: &ThetaCmd, digest: &mut Sha256) -> CmdResult {
    let ThetaCmd::Check { file, samples } = cmd;
    let pres = PsiRingPresentation::from_json(&read_json(file, digest)?).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let rep = wilkerson_check(&pres, *samples, &mut rng).map_err(|e| e.to_string())?;
    let mut out = congruence_outcome(&rep, String::new());
    if rep.passed {
        let th = derive_theta(&pres).map_err(|e| e.to_string())?;
        let mut values = serde_json::Map::new();
        for (name, v) in &th.values {
            let shown = th.target.render(v);
            out.text.push_str(&format!("θ({name}) = {shown}\n"));
            values.insert(name.clone(), json!(shown));
        }
        out.data["theta"] = Value::Object(values);
    }
    Ok(out)
}

fn run_congruence(cli: &Cli, cmd: &CongruenceCmd, digest: &mut Sha256) -> CmdResult {
    match cmd {
        CongruenceCmd::Gamma { p, f, a } => {
            let g = height1_gamma(*p, cli.precision.unwrap_or(3), *f, 1).map_err(|e| e.to_string())?;
            let r = &g.ring;
            let module = GammaModule::height1(&g, vec!["1".into()], &Matrix::from_rows(r, vec![vec![r.int(*a)]]))
                .map_err(|e| e.to_string())?;
            let b = GammaAlgebra { module, mult: vec![vec![vec![r.one()]]], unit: vec![r.one()] };
            let rep = gamma_congruence_check(&g, &FrobeniusClassSpec::height1(&g), &b, cli.degree_bound.unwrap_or(3))
                .map_err(|e| e.to_string())?;
            Ok(congruence_outcome(&rep, String::new()))
        }
        CongruenceCmd::Comodule { file, samples } => {
            let c = ComoduleAlgebra::from_json(&read_json(file, digest)?).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let rep = frobenius_congruence_comodule(&c, *samples, &mut rng).map_err(|e| e.to_string())?;
            Ok(congruence_outcome(&rep, String::new()))
        }
        CongruenceCmd::Squares { p } => {
            let g = height1_gamma(*p, cli.precision.unwrap_or(4), 1, 1).map_err(|e| e.to_string())?;
            let sq = verify_weight_p_squares(&g, &FrobeniusClassSpec::height1(&g)).map_err(|e| e.to_string())?;
            let text = format!(
                "pullback basis (columns) {}\ninvariant factors p^{:?}\npushout rank {}\n",
                sq.pullback_basis.to_json(),
                sq.pullback_exponents,
                sq.pushout_rank
            );
            let data = json!({
                "pullback_basis": sq.pullback_basis.to_json(),
                "pullback_exponents": sq.pullback_exponents,
                "pushout_rank": sq.pushout_rank,
                "generators": sq.generators.to_json(),
            });
            Ok(Outcome { text, checks: sq.report, data })
        }
    }
}

fn run_weights(cmd: &WeightsCmd, digest: &mut Sha256) -> CmdResult {
    match cmd {
        WeightsCmd::Gcd { max } => {
            let mut text = String::from("m\tgcd\n");
            let mut rows = Vec::new();
            let mut checks = Report::new();
            for m in 2..=*max {
                let g = binomial_gcd(m);
                let expected = prime_power(m).map_or(1, |(p, _)| p);
                if g != expected.into() {
                    checks.push(format!("gcd[{m:04}]"), false, Some(g.to_string()));
                }
                text.push_str(&format!("{m}\t{g}\n"));
                rows.push(json!([m, g.to_string()]));
            }
            checks.push("gcd_matches_prime_powers", checks.passed(), None);
            Ok(Outcome { text, checks, data: json!({"table": rows}) })
        }
        WeightsCmd::Certify { m, p } => {
            let c = regularity_certificate(*m, *p).map_err(|e| e.to_string())?;
            let mut checks = Report::new();
            if !matches!(c.case, crate::weights::CertCase::Critical | crate::weights::CertCase::TrivialWeight) {
                checks.expect_none("index_prime_to_p", (c.valuation() != Some(0)).then(|| format!("{:?}", c.valuations)));
                checks.expect_none("valuation_methods_agree", (!c.methods_agree()).then(|| format!("{:?}", c.valuations)));
            }
            let text = format!("{}\n", serde_json::to_string(&c.to_json()).expect("json"));
            Ok(Outcome { text, checks, data: c.to_json() })
        }
        WeightsCmd::Epi { file } => {
            let fam = EpiFamily::from_json(&read_json(file, digest)?).map_err(|e| e.to_string())?;
            let res = epi_family_check(&fam).map_err(|e| e.to_string())?;
            let mut checks = Report::new();
            checks.expect_none(
                "surjective",
                res.witness.as_ref().filter(|_| !res.surjective).map(|w| w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
            );
            let text = format!(
                "surjective: {}\nresidue rank: {} of {}\n",
                res.surjective, res.residue_rank, fam.target_rank
            );
            Ok(Outcome { text, checks, data: res.to_json() })
        }
    }
}

fn run_selftest(cli: &Cli) -> CmdResult {
    let results = run_all(cli.seed);
    let mut checks = Report::new();
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{r}\n"));
        checks.push(format!("criterion_{:02}", r.number), r.passed, (!r.passed).then(|| r.detail.clone()));
    }
    Ok(Outcome { text, checks, data: serde_json::to_value(&results).expect("json") })
}

fn subcommand_name(cmd: &Command) -> String {
    let s = format!("{cmd:?}");
    let head: String = s.chars().take_while(|c| c.is_alphanumeric()).collect();
    let inner = match cmd {
        Command::Fgl { cmd } => format!("{cmd:?}"),
        Command::Graded { cmd } => format!("{cmd:?}"),
        Command::Bialg { cmd } => format!("{cmd:?}"),
        Command::Theta { cmd } => format!("{cmd:?}"),
        Command::Congruence { cmd } => format!("{cmd:?}"),
        Command::Weights { cmd } => format!("{cmd:?}"),
        Command::Selftest => String::new(),
    };
    let sub: String = inner.chars().take_while(|c| c.is_alphanumeric()).collect();
    if sub.is_empty() {
        head.to_lowercase()
    } else {
        format!("{} {}", head.to_lowercase(), sub.to_lowercase())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut digest = Sha256::new();
    // the report path does not change the inputs
    let mut skip = false;
    for a in args.iter().skip(1) {
        let s = a.to_string_lossy();
        if skip {
            skip = false;
            continue;
        }
        if s == "--json" {
            skip = true;
            continue;
        }
        if s.starts_with("--json=") {
            continue;
        }
        digest.update(s.as_bytes());
        digest.update([0]);
    }
    let result = match &cli.command {
        Command::Fgl { cmd } => run_fgl(&cli, cmd, &mut digest),
        Command::Graded { cmd } => run_graded(&cli, cmd, &mut digest),
        Command::Bialg { cmd } => run_bialg(&cli, cmd, &mut digest),
        Command::Theta { cmd } => run_theta(&cli, cmd, &mut digest),
        Command::Congruence { cmd } => run_congruence(&cli, cmd, &mut digest),
        Command::Weights { cmd } => run_weights(cmd, &mut digest),
        Command::Selftest => run_selftest(&cli),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let passed = outcome.checks.passed();
    let _ = write!(out, "{}", outcome.text);
    let _ = writeln!(out, "verdict: {} (seed {})", if passed { "PASS" } else { "FAIL" }, cli.seed);
    if let Some(path) = &cli.json {
        let report = RunReport {
            subcommand: subcommand_name(&cli.command),
            inputs_digest: hex::encode(digest.finalize()),
            seed: cli.seed,
            verdict: if passed { "pass" } else { "fail" },
            checks: outcome.checks.sorted(),
            data: outcome.data,
        };
        let body = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    }
    if passed {
        0
    } else {
        1
    }
}
