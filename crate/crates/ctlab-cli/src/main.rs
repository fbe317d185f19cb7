//! `ctlab`: model checking, intervention, entailment, characteristic
//! formulas, synthesis and proof checking from the command line.
//!
//! Exit codes: 0 true/ok, 1 false, 2 file or parse error, 3 budget exceeded.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ctlab::calculus::{proof_from_json, rule_soundness_fuzz, Checker, Rule, System};
use ctlab::charform::{
    build_beta_en, build_chi, build_chi_k, build_direct_cause, build_leadsto, build_phi, build_theta, build_unf,
    build_xi,
};
use ctlab::decision::Decider;
use ctlab::intervention::intervene_team;
use ctlab::model::io::{class_from_json, embedded_signature, signature_from_json, team_from_json, team_to_json};
use ctlab::synthesis::{Synth, TeamClass, DEFAULT_CAP};
use ctlab::syntax::parse_file;
use ctlab::{parse, satisfies, Formula, InterventionSpec, SatContext, Semantics, Signature, Team};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ctlab", version, about = "Causal and generalized causal team semantics")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sweeps and fuzzing (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Machine)]
    format: Format,
    /// Node budget for formula builders and normal forms.
    #[arg(long, global = true, env = "CTLAB_BUDGET_NODES")]
    budget_nodes: Option<u128>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does the team satisfy each formula?
    Check(CheckArgs),
    /// Apply do(X=x) to a team and print the result.
    Intervene(InterveneArgs),
    /// Decide Γ ⊨ φ.
    Entail(EntailArgs),
    /// Print a characteristic formula.
    Emit(EmitArgs),
    /// Build a formula that defines a class of teams.
    Synthesize(SynthArgs),
    /// Does the formula define exactly the class?
    Verify(VerifyArgs),
    /// Derivations.
    Proof {
        #[command(subcommand)]
        cmd: ProofCmd,
    },
    /// Randomized soundness check of one rule (or `all`).
    FuzzRule(FuzzArgs),
}

#[derive(Args)]
struct SigArg {
    /// Signature file; defaults to the signature embedded in the team file.
    #[arg(long)]
    sig: Option<PathBuf>,
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula in the concrete grammar.
    #[arg(long)]
    formula: Vec<String>,
    /// File with one formula per line (`#` starts a comment).
    #[arg(long)]
    formulas: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    sig: SigArg,
    #[arg(long)]
    team: PathBuf,
    #[command(flatten)]
    formulas: FormulaArgs,
    /// Largest team for which tensor splits are enumerated.
    #[arg(long, default_value_t = 12)]
    team_cap: usize,
}

#[derive(Args)]
struct InterveneArgs {
    #[command(flatten)]
    sig: SigArg,
    #[arg(long)]
    team: PathBuf,
    /// The intervention, e.g. `X=1, Y=2`.
    #[arg(long = "do")]
    iv: String,
    /// Write the team here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntailArgs {
    #[arg(long)]
    sig: PathBuf,
    #[arg(long, default_value = "g")]
    semantics: String,
    /// A premise; repeat for more.
    #[arg(long)]
    gamma: Vec<String>,
    #[arg(long)]
    phi: String,
    /// Write a counterexample team here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Phi,
    Theta,
    Chi,
    Xi,
    Unf,
    Leadsto,
    Dc,
    BetaEn,
}

#[derive(Args)]
struct EmitArgs {
    which: Which,
    #[command(flatten)]
    sig: SigArg,
    /// Team supplying the law (phi), the rows (theta) or itself (xi).
    #[arg(long)]
    team: Option<PathBuf>,
    /// For chi: the bound k of chi_k; without it, chi itself.
    #[arg(long)]
    k: Option<i64>,
    /// Cause variable (leadsto, dc) or the variable of beta_en.
    #[arg(long)]
    x: Option<String>,
    /// Effect variable (leadsto, dc).
    #[arg(long)]
    y: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Co,
    Cod,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    sig: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    sig: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    formula: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum ProofCmd {
    /// Check a derivation file.
    Check {
        file: PathBuf,
        /// co-g, cov-g, cod-g, cov-c or cod-c; defaults to the file's.
        #[arg(long)]
        system: Option<String>,
    },
}

#[derive(Args)]
struct FuzzArgs {
    /// Rule name as in derivation files, or `all`.
    #[arg(long)]
    rule: String,
    #[arg(long)]
    sig: PathBuf,
    #[arg(long, default_value = "cov-c")]
    system: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

/// A false verdict: exit 1 after printing.
struct Negative;

fn read(p: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn load_sig(arg: &SigArg, team: Option<&Path>) -> anyhow::Result<Signature> {
    if let Some(p) = &arg.sig {
        return Ok(signature_from_json(&read(p)?)?);
    }
    if let Some(t) = team {
        if let Some(s) = embedded_signature(&read(t)?)? {
            return Ok(s);
        }
    }
    bail!("no signature: pass --sig or embed one in the team file")
}

fn formulas(args: &FormulaArgs, sig: &Signature) -> anyhow::Result<Vec<Formula>> {
    let mut out = Vec::new();
    for f in &args.formula {
        out.push(parse(f, sig)?);
    }
    if let Some(p) = &args.formulas {
        out.extend(parse_file(&read(p)?, sig)?);
    }
    if out.is_empty() {
        bail!("no formula given");
    }
    Ok(out)
}

fn kv(key: &str, value: impl std::fmt::Display) {
    println!("{key}={value}");
}

fn compact(json: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(json).expect("own output");
    v.to_string()
}

fn write_or_print(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(a: &CheckArgs, fmt: Format) -> anyhow::Result<Result<(), Negative>> {
    let sig = load_sig(&a.sig, Some(&a.team))?;
    let team = team_from_json(&sig, &read(&a.team)?)?;
    let ctx = SatContext { team_cap: a.team_cap, ..SatContext::default() };
    let mut all = true;
    for f in formulas(&a.formulas, &sig)? {
        let v = satisfies(&sig, &team, &f, &ctx)?;
        all &= v;
        match fmt {
            Format::Machine => println!("formula={} verdict={v}", f.display(&sig)),
            Format::Human => println!("{} {}", if v { "T |=" } else { "T |/=" }, f.display(&sig)),
        }
    }
    Ok(if all { Ok(()) } else { Err(Negative) })
}

fn cmd_intervene(a: &InterveneArgs) -> anyhow::Result<()> {
    let sig = load_sig(&a.sig, Some(&a.team))?;
    let team = team_from_json(&sig, &read(&a.team)?)?;
    let iv = InterventionSpec::parse(&a.iv, &sig)?;
    let out = intervene_team(&team, &iv)?;
    write_or_print(a.out.as_deref(), &team_to_json(&sig, &out))
}

fn cmd_entail(a: &EntailArgs, fmt: Format) -> anyhow::Result<Result<(), Negative>> {
    let sig = signature_from_json(&read(&a.sig)?)?;
    let sem: Semantics = a.semantics.parse()?;
    let gamma = a.gamma.iter().map(|g| parse(g, &sig)).collect::<Result<Vec<_>, _>>()?;
    let phi = parse(&a.phi, &sig)?;
    let v = Decider::new(&sig)?.entails(&gamma, &phi, sem)?;
    match fmt {
        Format::Machine => kv("verdict", v.holds),
        Format::Human => println!("{}", if v.holds { "entailed" } else { "not entailed" }),
    }
    if let Some(t) = &v.counterexample {
        let json = team_to_json(&sig, t);
        match &a.out {
            Some(p) => std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
            None => match fmt {
                Format::Machine => kv("counterexample", compact(&json)),
                Format::Human => print!("counterexample:\n{json}"),
            },
        }
    }
    Ok(if v.holds { Ok(()) } else { Err(Negative) })
}

fn var_arg(sig: &Signature, v: &Option<String>, flag: &str) -> anyhow::Result<usize> {
    let name = v.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))?;
    Ok(sig.var_checked(name)?)
}

fn team_arg(sig: &Signature, t: &Option<PathBuf>) -> anyhow::Result<Team> {
    let p = t.as_ref().ok_or_else(|| anyhow!("--team is required"))?;
    Ok(team_from_json(sig, &read(p)?)?)
}

fn cmd_emit(a: &EmitArgs, fmt: Format) -> anyhow::Result<()> {
    let sig = load_sig(&a.sig, a.team.as_deref())?;
    let c = match a.which {
        Which::Phi => {
            let t = team_arg(&sig, &a.team)?.generalized();
            let laws = t.laws();
            if laws.len() != 1 {
                bail!("phi needs a team with exactly one law, found {}", laws.len());
            }
            build_phi(laws.iter().next().expect("one law"), &sig)?
        }
        Which::Theta => build_theta(&team_arg(&sig, &a.team)?.generalized().assignments(), &sig)?,
        Which::Chi => match a.k {
            Some(k) => build_chi_k(&sig, k)?,
            None => build_chi(&sig)?,
        },
        Which::Xi => build_xi(&team_arg(&sig, &a.team)?.generalized(), &sig)?,
        Which::Unf => build_unf(&sig)?,
        Which::Leadsto => build_leadsto(var_arg(&sig, &a.x, "x")?, var_arg(&sig, &a.y, "y")?, &sig)?,
        Which::Dc => build_direct_cause(var_arg(&sig, &a.x, "x")?, var_arg(&sig, &a.y, "y")?, &sig)?,
        Which::BetaEn => build_beta_en(var_arg(&sig, &a.x, "x")?, &sig)?,
    };
    match fmt {
        Format::Machine => {
            kv("builder", c.builder);
            kv("params", &c.params);
            kv("size", c.size());
            kv("formula", c.formula.display(&sig));
        }
        Format::Human => println!("{}", c.formula.display(&sig)),
    }
    Ok(())
}

fn load_class(sig: &Signature, p: &Path) -> anyhow::Result<TeamClass> {
    Ok(class_from_json(sig, &read(p)?)?.into())
}

fn cmd_synthesize(a: &SynthArgs, fmt: Format) -> anyhow::Result<()> {
    let sig = signature_from_json(&read(&a.sig)?)?;
    let class = load_class(&sig, &a.class)?;
    let s = Synth::new(&sig, a.cap)?;
    let f = match a.target {
        Target::Co => s.synthesize_co(&class)?,
        Target::Cod => s.synthesize_cod(&class)?,
    };
    match fmt {
        Format::Machine => {
            kv("size", f.size());
            kv("formula", f.display(&sig));
        }
        Format::Human => println!("{}", f.display(&sig)),
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<Result<(), Negative>> {
    let sig = signature_from_json(&read(&a.sig)?)?;
    let class = load_class(&sig, &a.class)?;
    let f = parse(&a.formula, &sig)?;
    let ok = Synth::new(&sig, a.cap)?.verify_defines(&f, &class)?;
    kv("defines", ok);
    Ok(if ok { Ok(()) } else { Err(Negative) })
}

fn cmd_proof(file: &Path, system: &Option<String>, fmt: Format) -> anyhow::Result<Result<(), Negative>> {
    let p = proof_from_json(&read(file)?)?;
    let sys: System = match (system, p.system) {
        (Some(s), _) => s.parse()?,
        (None, Some(s)) => s,
        (None, None) => bail!("no system: pass --system or set it in the file"),
    };
    let sig = &p.signature;
    match Checker::new(sig, sys).check(&p.derivation) {
        Ok(c) => {
            let open: Vec<String> = c.assumptions().iter().map(|f| f.display(sig)).collect();
            match fmt {
                Format::Machine => {
                    kv("valid", true);
                    kv("system", sys);
                    kv("nodes", p.derivation.size());
                    kv("conclusion", c.conclusion.display(sig));
                    kv("assumptions", open.join(" ; "));
                }
                Format::Human => println!("{} |- {}  ({sys})", open.join(", "), c.conclusion.display(sig)),
            }
            Ok(Ok(()))
        }
        Err(e) => {
            let path: Vec<String> = e.path.iter().map(usize::to_string).collect();
            match fmt {
                Format::Machine => {
                    kv("valid", false);
                    kv("path", format!("/{}", path.join("/")));
                    kv("reason", &e.reason);
                }
                Format::Human => println!("invalid {e}"),
            }
            Ok(Err(Negative))
        }
    }
}

fn cmd_fuzz(a: &FuzzArgs, seed: u64, fmt: Format) -> anyhow::Result<Result<(), Negative>> {
    let sig = signature_from_json(&read(&a.sig)?)?;
    let sys: System = a.system.parse()?;
    let rules: Vec<Rule> = if a.rule == "all" {
        sys.rules()
    } else {
        vec![Rule::from_name(&a.rule).ok_or_else(|| anyhow!("unknown rule `{}`", a.rule))?]
    };
    let reports = rules
        .par_iter()
        .map(|&r| rule_soundness_fuzz(r, sys, &sig, a.trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sound = true;
    for r in &reports {
        sound &= r.sound();
        match fmt {
            Format::Machine => println!(
                "rule={} system={} trials={} applicable={} violations={}",
                r.rule,
                r.system,
                r.trials,
                r.applicable,
                r.violations.len()
            ),
            Format::Human => println!("{:<20} {}/{} applicable, {} violations", r.rule.name(), r.applicable, r.trials, r.violations.len()),
        }
        for v in &r.violations {
            kv("violation", v);
        }
    }
    Ok(if sound { Ok(()) } else { Err(Negative) })
}

fn run(cli: Cli) -> anyhow::Result<Result<(), Negative>> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().ok();
    }
    if let Some(n) = cli.budget_nodes {
        std::env::set_var("CTLAB_BUDGET_NODES", n.to_string());
    }
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Check(a) => cmd_check(a, fmt),
        Cmd::Intervene(a) => cmd_intervene(a).map(Ok),
        Cmd::Entail(a) => cmd_entail(a, fmt),
        Cmd::Emit(a) => cmd_emit(a, fmt).map(Ok),
        Cmd::Synthesize(a) => cmd_synthesize(a, fmt).map(Ok),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Proof { cmd: ProofCmd::Check { file, system } } => cmd_proof(file, system, fmt),
        Cmd::FuzzRule(a) => cmd_fuzz(a, cli.seed, fmt),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<ctlab::Error>() {
        Some(ctlab::Error::Budget(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // deep formulas recurse deeply
    let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || run(cli));
    let res = worker.expect("spawn worker").join().unwrap_or_else(|_| Err(anyhow!("internal error")));
    match res {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
