//! Command-line front end and HTTP explorer API for `qvgr`.

pub mod server;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qvgr::cartan::{CartanData, FiniteType, HeightFunction};
use qvgr::characters::Characters;
use qvgr::cluster::{
    build_sink_source_seed, build_xi_seed, window_torus, QuantumSeed, SeedJson, VariableMode,
};
use qvgr::monomial::{Monomial, Site};
use qvgr::screening::in_ring;
use qvgr::torus::{Torus, TorusElement};
use qvgr::tsystem::tsystem_check;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qvgr::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qvgr::Error as E;
        match self {
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Core(
                E::InvalidType(_)
                | E::BadNode { .. }
                | E::BadHeight(_)
                | E::NotSource(_)
                | E::Parse(_)
                | E::Frozen(_)
                | E::UnknownVertex(_)
                | E::Window(_)
                | E::Parity(_)
                | E::NotDominant(_),
            ) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a successful command reports back to `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
}

#[derive(Debug, Parser)]
#[command(name = "qvgr", version, about = "Quantum virtual Grothendieck rings and their cluster structure")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrix, symmetrizer and Coxeter number.
    Cartan(TypeArg),
    /// Values of b̃_{i,j}(u).
    Btilde(BtildeArgs),
    /// N(m1, m2) with m1 * m2 = q^N m2 * m1.
    Pairing(PairingArgs),
    /// F_q(m) via the q-algorithm.
    Fq(ElementArgs),
    /// E_q(m).
    Eq(ElementArgs),
    /// L_q(m) with its Kazhdan-Lusztig table.
    Lq(ElementArgs),
    /// The KR polynomial F_q(m^{(i)}[p,s]).
    Kr(KrArgs),
    /// Checks the quantum folded T-system.
    Tsystem(TsystemArgs),
    /// Builds a seed and prints it as JSON.
    Seed(SeedArgs),
    /// Mutates a seed.
    Mutate(MutateArgs),
    /// Runs the built-in consistency checks.
    Verify(VerifyArgs),
    /// Serves the explorer API.
    Serve(ServeArgs),
    /// Prints the valued quiver of a seed.
    ExportQuiver(ExportArgs),
}

#[derive(Debug, Args)]
pub struct TypeArg {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BtildeArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Largest u printed; defaults to 2h.
    #[arg(long)]
    pub u_max: Option<i64>,
}

#[derive(Debug, Args)]
pub struct PairingArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    pub m1: Monomial,
    pub m2: Monomial,
}

#[derive(Debug, Args)]
pub struct ElementArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    /// e.g. "X[2,5] X[1,10]".
    pub monomial: Monomial,
    #[arg(long)]
    pub json: bool,
    /// Print the colored graph of the q-algorithm as DOT (fq only).
    #[arg(long)]
    pub dot: bool,
}

#[derive(Debug, Args)]
pub struct KrArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    #[arg(long)]
    pub i: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: i64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TsystemArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    /// Check every node with 1 <= k <= K instead of a single instance.
    #[arg(long)]
    pub sweep: Option<i64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Kr,
    Truncated,
}

impl From<ModeArg> for VariableMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Kr => VariableMode::Kr,
            ModeArg::Truncated => VariableMode::Truncated,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Read the seed from a JSON file (`-` for stdin) instead of building one.
    #[arg(long, conflicts_with_all = ["ty", "xi", "sink_source"])]
    pub seed: Option<PathBuf>,
    #[arg(long = "type", short = 't')]
    pub ty: Option<FiniteType>,
    /// Height function, e.g. "0,1,0"; defaults to the standard one at level 0.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long)]
    pub sink_source: bool,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub s: i64,
    /// Rows per node of the sink-source window.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Truncated)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct MutateArgs {
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Vertex to mutate at, e.g. "(2,1)"; may be repeated.
    #[arg(long)]
    pub at: Vec<Site>,
    /// JSON array of vertices `[[i,p], ...]`, applied before `--at`.
    #[arg(long)]
    pub seq: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "type", short = 't')]
    pub ty: FiniteType,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuiverFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, value_enum, default_value_t = QuiverFormat::Dot)]
    pub format: QuiverFormat,
}

fn torus(ty: FiniteType) -> CliResult<Torus> {
    Ok(Torus::for_type(ty)?)
}

fn parse_xi(cd: &CartanData, s: &str) -> CliResult<HeightFunction> {
    let vals = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("bad height function {s:?}: {e}")))?;
    Ok(HeightFunction::new(cd, vals)?)
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// Builds or loads the seed described by `a`.
pub fn load_seed(a: &SeedArgs) -> CliResult<QuantumSeed> {
    if let Some(path) = &a.seed {
        let j: SeedJson = serde_json::from_str(&read_input(path)?)?;
        return Ok(QuantumSeed::from_json(&j)?);
    }
    let ty = a.ty.ok_or_else(|| CliError::Usage("either --seed or --type is required".into()))?;
    let depth = if a.sink_source { a.window.unwrap_or(a.depth) } else { a.depth };
    let mut ch = Characters::new(window_torus(ty, depth, 0)?);
    let cd = ch.torus().cartan().clone();
    if a.sink_source {
        Ok(build_sink_source_seed(&mut ch, a.s, depth, a.mode.into())?)
    } else {
        let xi = match &a.xi {
            Some(s) => parse_xi(&cd, s)?,
            None => HeightFunction::standard(&cd, a.s),
        };
        Ok(build_xi_seed(&mut ch, &xi, depth, a.mode.into())?)
    }
}

/// Applies `seq` and then `at`.
pub fn apply_mutations(seed: &QuantumSeed, seq: &[Site], at: &[Site]) -> CliResult<QuantumSeed> {
    let mut s = seed.clone();
    for &v in seq.iter().chain(at) {
        s = s.mutate_at(v)?;
    }
    Ok(s)
}

#[derive(Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct ArrowJson {
    pub from: Site,
    pub to: Site,
    pub value: (i64, i64),
}

#[derive(Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct QuiverJson {
    pub vertices: Vec<Site>,
    pub frozen: Vec<Site>,
    pub arrows: Vec<ArrowJson>,
}

pub fn quiver_json(seed: &QuantumSeed) -> QuiverJson {
    let vs = seed.vertices();
    QuiverJson {
        vertices: vs.to_vec(),
        frozen: vs.iter().copied().filter(|v| seed.is_frozen(*v).unwrap_or(false)).collect(),
        arrows: seed
            .quiver()
            .arrows()
            .iter()
            .map(|(&(k, l), &value)| ArrowJson { from: vs[k], to: vs[l], value })
            .collect(),
    }
}

#[derive(Serialize)]
struct CartanJson {
    #[serde(rename = "type")]
    ty: String,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    coxeter_number: usize,
}

fn print_element(out: &mut dyn Write, a: &TorusElement, json: bool) -> CliResult<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(a)?)?;
    } else {
        writeln!(out, "{a}")?;
    }
    Ok(())
}

fn check_line(out: &mut dyn Write, ok: bool, what: &str) -> CliResult<bool> {
    writeln!(out, "{} {what}", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}

fn verify(out: &mut dyn Write, a: &VerifyArgs) -> CliResult<Outcome> {
    let mut all = true;
    let mut ch = Characters::new(window_torus(a.ty, a.depth, 0)?);
    let cd = ch.torus().cartan().clone();
    let t = ch.torus().clone();
    all &= check_line(out, t.table().verify_range_lemma().is_ok(), "btilde range")?;
    for i in cd.nodes() {
        let f = ch.compute_fq(&Monomial::x(i, cd.parity(i)))?;
        let ok = in_ring(&t, &f)? && f.is_bar_invariant() && f.negative_coefficients().is_empty();
        all &= check_line(out, ok, &format!("fundamental {i}"))?;
    }
    for i in cd.nodes() {
        let p = cd.parity(i);
        for k in 1..=2 {
            let r = tsystem_check(&mut ch, i, p, p + 2 * k)?;
            all &= check_line(out, r.holds, &format!("tsystem ({i},{p},{})", p + 2 * k))?;
        }
    }
    for s in [0, 1] {
        let xi = HeightFunction::standard(&cd, s);
        let seed = build_xi_seed(&mut ch, &xi, a.depth, VariableMode::Truncated)?;
        all &= check_line(out, seed.is_compatible(), &format!("compatible xi-seed s={s}"))?;
        let ss = build_sink_source_seed(&mut ch, s, a.depth, VariableMode::Truncated)?;
        all &= check_line(out, ss.is_compatible(), &format!("compatible sink-source seed s={s}"))?;
    }
    Ok(if all { Outcome::Ok } else { Outcome::Failed })
}

/// Runs every subcommand except `serve`.
pub fn run(cmd: &Command, out: &mut dyn Write) -> CliResult<Outcome> {
    match cmd {
        Command::Cartan(a) => {
            let cd = CartanData::new(a.ty);
            let j = CartanJson {
                ty: a.ty.to_string(),
                cartan: cd.nodes().map(|i| cd.nodes().map(|j| cd.c(i, j)).collect()).collect(),
                symmetrizer: cd.nodes().map(|i| cd.d(i)).collect(),
                coxeter_number: cd.coxeter_number(),
            };
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
            } else {
                writeln!(out, "type {}", j.ty)?;
                writeln!(out, "coxeter number {}", j.coxeter_number)?;
                writeln!(out, "symmetrizer {:?}", j.symmetrizer)?;
                for row in &j.cartan {
                    writeln!(out, "{row:?}")?;
                }
            }
        }
        Command::Btilde(a) => {
            let t = torus(a.ty)?;
            let cd = t.cartan().clone();
            let u_max = a.u_max.unwrap_or(2 * cd.coxeter_number() as i64);
            let is: Vec<usize> = a.i.map_or_else(|| cd.nodes().collect(), |i| vec![i]);
            let js: Vec<usize> = a.j.map_or_else(|| cd.nodes().collect(), |j| vec![j]);
            let t = if u_max > t.table().bound() { Torus::with_bound(a.ty, u_max)? } else { t };
            for &i in &is {
                for &j in &js {
                    cd.check_node(i)?;
                    cd.check_node(j)?;
                    let vals = (1..=u_max).map(|u| t.table().b(i, j, u)).collect::<Result<Vec<_>, _>>()?;
                    writeln!(out, "{i} {j} {vals:?}")?;
                }
            }
        }
        Command::Pairing(a) => {
            let t = torus(a.ty)?;
            writeln!(out, "{}", t.pairing(&a.m1, &a.m2)?)?;
        }
        Command::Fq(a) => {
            let mut ch = Characters::new(torus(a.ty)?);
            if a.dot {
                let (_, g) = ch.compute_fq_graph(&a.monomial)?;
                write!(out, "{}", g.to_dot())?;
            } else {
                print_element(out, &ch.compute_fq(&a.monomial)?, a.json)?;
            }
        }
        Command::Eq(a) => {
            let mut ch = Characters::new(torus(a.ty)?);
            print_element(out, &ch.compute_eq(&a.monomial)?, a.json)?;
        }
        Command::Lq(a) => {
            let mut ch = Characters::new(torus(a.ty)?);
            let (l, table) = ch.compute_lq(&a.monomial)?;
            if a.json {
                #[derive(Serialize)]
                struct LqJson<'a> {
                    element: &'a TorusElement,
                    table: &'a qvgr::characters::KlTable,
                }
                writeln!(out, "{}", serde_json::to_string_pretty(&LqJson { element: &l, table: &table })?)?;
            } else {
                writeln!(out, "{l}")?;
                for (k, m) in table.dominant.iter().enumerate() {
                    writeln!(out, "# {m}: P = {}, L in F = {}", table.p[k], table.l_in_f[k])?;
                }
            }
        }
        Command::Kr(a) => {
            let mut ch = Characters::new(torus(a.ty)?);
            print_element(out, &ch.compute_fq_kr(a.i, a.p, a.s)?, a.json)?;
        }
        Command::Tsystem(a) => {
            let mut ch = Characters::new(torus(a.ty)?);
            let cd = ch.torus().cartan().clone();
            let mut cases = Vec::new();
            match (a.sweep, a.i, a.p, a.s) {
                (Some(kmax), None, None, None) => {
                    for i in cd.nodes() {
                        for k in 1..=kmax {
                            cases.push((i, cd.parity(i), cd.parity(i) + 2 * k));
                        }
                    }
                }
                (None, Some(i), Some(p), Some(s)) => cases.push((i, p, s)),
                _ => return Err(CliError::Usage("give either --sweep K or all of --i --p --s".into())),
            }
            let mut all = true;
            for (i, p, s) in cases {
                let r = tsystem_check(&mut ch, i, p, s)?;
                all &= r.holds;
                writeln!(
                    out,
                    "{} ({i},{p},{s}) alpha={} gamma={}",
                    if r.holds { "PASS" } else { "FAIL" },
                    r.alpha,
                    r.gamma
                )?;
            }
            return Ok(if all { Outcome::Ok } else { Outcome::Failed });
        }
        Command::Seed(a) => {
            let seed = load_seed(a)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&seed.to_json())?)?;
        }
        Command::Mutate(a) => {
            let seed = load_seed(&a.seed)?;
            let seq: Vec<Site> = match &a.seq {
                Some(p) => serde_json::from_str(&read_input(p)?)?,
                None => Vec::new(),
            };
            if seq.is_empty() && a.at.is_empty() {
                return Err(CliError::Usage("nothing to mutate: give --at or --seq".into()));
            }
            let seed = apply_mutations(&seed, &seq, &a.at)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&seed.to_json())?)?;
        }
        Command::Verify(a) => return verify(out, a),
        Command::ExportQuiver(a) => {
            let seed = load_seed(&a.seed)?;
            match a.format {
                QuiverFormat::Dot => write!(out, "{}", seed.quiver().to_dot(&seed.labels()))?,
                QuiverFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&quiver_json(&seed))?)?,
            }
        }
        Command::Serve(_) => return Err(CliError::Usage("serve is handled by the binary".into())),
    }
    Ok(Outcome::Ok)
}
