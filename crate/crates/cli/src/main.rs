//! `nilmag` command-line front end.

mod files;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilmag::catalog::{build_str, radon_hurwitz, type_two_candidate_pairs, CatalogError, CatalogId};
use nilmag::deform::{
    canonical_split, deform, det_factorization_holds, find_invariant_split, iso_check, negative_r_witness,
    pfaffian_identity_check, DeformError, DeformSpec,
};
use nilmag::exactmath::rational::{int, Rational};
use nilmag::flow::{integrate, FlowError};
use nilmag::magnetic::{type2_closed_space, LorentzForce, MagneticError};
use nilmag::nilalgebra::{pfaffian_of, AlgebraError, NilAlgebra, DEFAULT_PROBE_SLICES};
use serde_json::json;

use files::{read_json, to_json, vec_strings, AlgebraFile, ForceFile};
use report::{analyze, space_matrices, DeformationInfo};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Magnetic(#[from] MagneticError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Catalog(_) => "catalog",
            CliError::Algebra(_) => "algebra",
            CliError::Magnetic(_) => "force",
            CliError::Deform(_) => "deform",
            CliError::Flow(_) => "flow",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "nilmag", version, about = "Closed left-invariant 2-forms on 2-step nilpotent Lie algebras")]
struct Cli {
    /// Seed for randomized probes and split searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random lines tried by the singularity classifier.
    #[arg(long, global = true, default_value_t = DEFAULT_PROBE_SLICES)]
    probe_slices: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SplitMode {
    Auto,
    Explicit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog ids.
    Catalog,
    /// Full report for an algebra (catalog:ID or a JSON file).
    Analyze { src: String },
    /// Basis of the type-II closed forms.
    Type2 { src: String },
    /// Pfaffian of j_Z as a polynomial in z1..zm.
    Pfaffian { src: String },
    /// Deform j_{Z1} by r on v2 and write the result.
    Deform {
        src: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, value_enum, default_value_t = SplitMode::Auto)]
        split: SplitMode,
        /// 1-based V indices spanning v1 (explicit split).
        #[arg(long, value_delimiter = ',')]
        v1: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        z1: usize,
        #[arg(long, default_value_t = 2)]
        z2: usize,
        /// Where the deformed algebra file goes.
        #[arg(long)]
        algebra_out: PathBuf,
    },
    /// Check the map n_r -> n_{1/r} on the canonical split.
    IsoCheck {
        src: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Integrate a magnetic trajectory; writes CSV.
    Flow {
        src: String,
        /// exact:FILE, j:Zk, type2-basis:k or zero.
        #[arg(long)]
        force: String,
        /// Initial velocity, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        u0: String,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        t: f64,
    },
    /// Admissible pairs (n, m) that can carry type-II forms.
    Pairs {
        #[arg(long, default_value_t = 64)]
        nmax: u64,
    },
}

fn load(src: &str) -> Result<NilAlgebra, CliError> {
    match src.strip_prefix("catalog:") {
        Some(id) => Ok(build_str(id)?),
        None => read_json::<AlgebraFile>(Path::new(src))?.to_algebra(),
    }
}

fn unit(len: usize, k: usize) -> Vec<Rational> {
    (0..len).map(|i| int((i == k) as i64)).collect()
}

fn one_based(k: usize, len: usize, what: &str) -> Result<usize, CliError> {
    if k == 0 || k > len {
        return Err(CliError::Usage(format!("{what} index {k} out of range 1..={len}")));
    }
    Ok(k - 1)
}

fn parse_force(a: &NilAlgebra, spec: &str) -> Result<LorentzForce, CliError> {
    let (n, m) = (a.dim_v(), a.dim_z());
    let index = |s: &str| -> Result<usize, CliError> {
        s.parse::<usize>().map_err(|_| CliError::Usage(format!("bad index in force spec {spec:?}")))
    };
    if spec == "zero" {
        return Ok(LorentzForce::zero(n, m));
    }
    if let Some(path) = spec.strip_prefix("exact:") {
        let f = read_json::<ForceFile>(Path::new(path))?.to_force()?;
        if f.dim_v() != n || f.dim_z() != m {
            return Err(CliError::Magnetic(MagneticError::DimensionMismatch {
                expected: n + m,
                got: f.dim_v() + f.dim_z(),
            }));
        }
        return Ok(f);
    }
    if let Some(k) = spec.strip_prefix("j:Z").or_else(|| spec.strip_prefix("j:z")) {
        let t = one_based(index(k)?, m, "center")?;
        return Ok(LorentzForce::from_j(a, &unit(m, t))?);
    }
    if let Some(k) = spec.strip_prefix("type2-basis:") {
        let space = type2_closed_space(a);
        let k = one_based(index(k)?, space.dim(), "type-II basis")?;
        return Ok(space.basis()[k].clone());
    }
    Err(CliError::Usage(format!("unknown force spec {spec:?}")))
}

fn run_deform(
    cli: &Cli,
    a: NilAlgebra,
    r: Rational,
    split: SplitMode,
    v1_idx: &[usize],
    z1: usize,
    z2: usize,
    algebra_out: &Path,
) -> Result<String, CliError> {
    let n = a.dim_v();
    if z1 == 0 || z2 == 0 {
        return Err(CliError::Usage("center indices are 1-based".into()));
    }
    let (z1, z2) = (z1 - 1, z2 - 1);
    let (v1, v2, method) = match split {
        SplitMode::Explicit => {
            if v1_idx.is_empty() {
                return Err(CliError::Usage("--split explicit needs --v1".into()));
            }
            let mut idx = Vec::new();
            for &k in v1_idx {
                idx.push(one_based(k, n, "v")?);
            }
            let v1: Vec<_> = idx.iter().map(|&k| unit(n, k)).collect();
            let v2: Vec<_> = (0..n).filter(|k| !idx.contains(k)).map(|k| unit(n, k)).collect();
            (v1, v2, "explicit")
        }
        SplitMode::Auto => match canonical_split(&a) {
            Ok((v1, v2, _)) if (z1, z2) == (0, 1) => (v1, v2, "canonical"),
            _ => {
                let (v1, v2) = find_invariant_split(&a, z1, z2, cli.seed)?;
                (v1, v2, "search")
            }
        },
    };
    let spec = DeformSpec::new(a.clone(), z1, z2, v1, v2, r.clone())?;
    let d = deform(&spec)?;
    std::fs::write(algebra_out, to_json(&AlgebraFile::from_algebra(&d.algebra)))
        .map_err(|e| CliError::Io(format!("{}: {e}", algebra_out.display())))?;
    let mut rep = analyze(&d.algebra, cli.probe_slices, cli.seed);
    rep.deformation = Some(DeformationInfo {
        base: a.name().to_string(),
        r: r.to_string(),
        split: method.to_string(),
        z1: z1 + 1,
        z2: z2 + 1,
        v1_basis: spec.v1().iter().map(|v| vec_strings(v)).collect(),
        det_factorization: det_factorization_holds(&d),
        pfaffian_sign: pfaffian_identity_check(&d).ok().and_then(|p| p.sign),
        negative_r_witness: negative_r_witness(&d).map(|(z, x)| json!({ "z": vec_strings(&z), "kernel": vec_strings(&x) })),
    });
    Ok(to_json(&rep))
}

fn run_flow(a: &NilAlgebra, force: &str, u0: &str, dt: f64, t: f64) -> Result<String, CliError> {
    let f = parse_force(a, force)?;
    let u0: Vec<f64> = u0
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad --u0 entry {s:?}"))))
        .collect::<Result<_, _>>()?;
    let run = integrate(a, &f, &u0, dt, t)?;
    let (n, m) = (a.dim_v(), a.dim_z());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n + m).map(|i| format!("u_{i}")));
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=m).map(|i| format!("z_{i}")));
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for s in &run {
        let row = std::iter::once(s.t).chain(s.u.iter().copied()).chain(s.x.iter().copied()).chain(s.z.iter().copied());
        w.write_record(row.map(|x| x.to_string())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Catalog => {
            let rows: Vec<_> = CatalogId::listing()
                .into_iter()
                .map(|id| {
                    let a = nilmag::catalog::build(id);
                    json!({
                        "id": id.to_string(),
                        "dim_v": a.as_ref().map(|a| a.dim_v()).ok(),
                        "dim_z": a.as_ref().map(|a| a.dim_z()).ok(),
                        "description": id.describe(),
                    })
                })
                .collect();
            Ok(to_json(&rows))
        }
        Command::Analyze { src } => Ok(to_json(&analyze(&load(src)?, cli.probe_slices, cli.seed))),
        Command::Type2 { src } => {
            let a = load(src)?;
            let sp = type2_closed_space(&a);
            Ok(to_json(&json!({
                "algebra": a.name(),
                "dim": sp.dim(),
                "basis": space_matrices(&sp),
            })))
        }
        Command::Pfaffian { src } => {
            let a = load(src)?;
            let pf = pfaffian_of(&a);
            Ok(to_json(&json!({
                "algebra": a.name(),
                "variables": (1..=a.dim_z()).map(|t| format!("z{t}")).collect::<Vec<_>>(),
                "pfaffian": pf.as_ref().map(ToString::to_string),
                "identically_zero": pf.as_ref().is_none_or(|p| p.is_zero()),
            })))
        }
        Command::Deform { src, r, split, v1, z1, z2, algebra_out } => {
            let r = files::rational(r)?;
            run_deform(cli, load(src)?, r, *split, v1, *z1, *z2, algebra_out)
        }
        Command::IsoCheck { src, r } => {
            let a = load(src)?;
            let r = files::rational(r)?;
            let c = iso_check(&a, &r)?;
            Ok(to_json(&json!({
                "algebra": a.name(),
                "r": r.to_string(),
                "m_tilde": c.m_tilde,
                "holds": c.holds(),
                "homomorphism": c.homomorphism,
                "reversed": c.reversed,
            })))
        }
        Command::Flow { src, force, u0, dt, t } => run_flow(&load(src)?, force, u0, *dt, *t),
        Command::Pairs { nmax } => {
            let rows: Vec<_> = type_two_candidate_pairs(*nmax)
                .into_iter()
                .map(|(n, m)| json!({ "n": n, "m": m, "rho_n": radon_hurwitz(n) }))
                .collect();
            Ok(to_json(&json!({ "nmax": nmax, "pairs": rows })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        },
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = if matches!(e, CliError::Usage(_)) { 2 } else { 1 };
            eprint!("{}", to_json(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } })));
            ExitCode::from(code)
        }
    }
}

