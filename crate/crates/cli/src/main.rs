use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use growglue::dot::emit_dot;
use growglue::io::{
    emit_elevation, emit_gluing, emit_poset, emit_script, emit_split, parse_labeled_poset, parse_map, parse_poset,
    parse_script,
};
use growglue::random::random_poset;
use growglue::{
    decompose_to_point, elevate, glue_along_collection, retract, split_for_cover, Error, ErrorClass, NodeSet,
    WrapOptions,
};

/// Finite posets: gluing, splitting, elevation, and certified decompositions.
///
/// Every file argument accepts `-` for standard input.
#[derive(Parser)]
#[command(name = "growglue", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print size, dimension, extremal nodes and chain counts.
    Info { poset: PathBuf },
    /// Check whether a map is a saturated embedding; exit 1 if not.
    VerifyEmbedding { source: PathBuf, target: PathBuf, map: PathBuf },
    /// Glue along one or more comma-separated node sets.
    Glue {
        poset: PathBuf,
        #[arg(long, required = true, value_name = "IDS")]
        along: Vec<String>,
    },
    /// Split a minimal node so that a given cover becomes its only cover.
    Split {
        poset: PathBuf,
        #[arg(long = "min", value_name = "U1")]
        min: String,
        #[arg(long = "cover", value_name = "U2")]
        cover: String,
    },
    /// Grow fresh minimal nodes below a minimal node.
    Elevate {
        poset: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Collapse the down-set of a height-one node into it.
    Retract {
        poset: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Decompose into growth and gluing steps from a point; emits a script.
    Decompose {
        poset: PathBuf,
        /// Comma-separated: single-max, single-min, min-height=N, min-dim=N.
        #[arg(long, value_name = "OPTIONS")]
        wrap: Option<String>,
    },
    /// Re-verify a script; exit 1 if the certificate does not hold.
    Replay { script: PathBuf },
    /// Emit a Graphviz rendering.
    Render {
        poset: PathBuf,
        #[arg(long, value_name = "IDS")]
        highlight: Option<String>,
    },
    /// Emit a seeded random poset.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        p: f64,
    },
}

enum Failure {
    Input(String),
    Verification(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.class() {
            ErrorClass::Input => Failure::Input(e.to_string()),
            ErrorClass::Verification => Failure::Verification(e.to_string()),
            ErrorClass::Internal => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn ids(list: &str) -> NodeSet {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Into::into).collect()
}

fn wrap_options(list: &str) -> Result<WrapOptions, Failure> {
    let mut opts = WrapOptions::default();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let number = |v: &str| v.parse::<usize>().map_err(|_| Failure::Input(format!("bad wrap value in `{item}`")));
        match item.split_once('=') {
            None if item == "single-max" => opts.single_max = true,
            None if item == "single-min" => opts.single_min = true,
            Some(("min-height", v)) => opts.min_height = number(v)?,
            Some(("min-dim", v)) => opts.min_dim = number(v)?,
            _ => return Err(Failure::Input(format!("unknown wrap option `{item}`"))),
        }
    }
    Ok(opts)
}

fn info(text: &str) -> Outcome {
    let p = parse_poset(text)?;
    let join = |s: NodeSet| s.iter().map(|id| id.as_str()).collect::<Vec<_>>().join(" ");
    Ok(format!(
        "nodes: {}\ncovers: {}\ndim: {}\nmin: {}\nmax: {}\nmaximal chains: {}\nlongest chains: {}\n",
        p.len(),
        p.cover_count(),
        p.dim()?,
        join(p.min_nodes()?),
        join(p.max_nodes()?),
        p.maximal_chains()?.len(),
        p.eta()?,
    ))
}

fn verify_embedding(source: &str, target: &str, map: &str) -> Outcome {
    let (x, y) = (parse_poset(source)?, parse_poset(target)?);
    let f = parse_map(map, &x, &y)?;
    let mut out = String::new();
    let checks = [
        ("poset map", f.monotonicity_defect()),
        ("embedding", f.embedding_defect()),
        ("saturated embedding", f.saturated_embedding_defect()),
    ];
    for (name, defect) in checks {
        match defect {
            None => out.push_str(&format!("{name}: yes\n")),
            Some(d) => {
                out.push_str(&format!("{name}: no ({d})\n"));
                return Err(Failure::Verification(out.trim_end().to_string()));
            }
        }
    }
    let onto = f.surjectivity_defect().is_none();
    out.push_str(&format!("isomorphism: {}\n", if onto { "yes" } else { "no" }));
    Ok(out)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Info { poset } => info(&read(&poset)?),
        Command::VerifyEmbedding { source, target, map } => verify_embedding(&read(&source)?, &read(&target)?, &read(&map)?),
        Command::Glue { poset, along } => {
            let x = parse_poset(&read(&poset)?)?;
            let collection: Vec<NodeSet> = along.iter().map(|s| ids(s)).collect();
            Ok(emit_gluing(&glue_along_collection(&x, &collection)?))
        }
        Command::Split { poset, min, cover } => {
            let x = parse_poset(&read(&poset)?)?;
            Ok(emit_split(&split_for_cover(&x, &min, &cover)?))
        }
        Command::Elevate { poset, at, count } => {
            let x = parse_poset(&read(&poset)?)?;
            Ok(emit_elevation(&elevate(&x, &at, count)?))
        }
        Command::Retract { poset, at } => {
            let z = parse_poset(&read(&poset)?)?;
            Ok(emit_elevation(&retract(&z, &at)?))
        }
        Command::Decompose { poset, wrap } => {
            let x = parse_poset(&read(&poset)?)?;
            let opts = wrap.as_deref().map(wrap_options).transpose()?.unwrap_or_default();
            Ok(emit_script(&decompose_to_point(&x, &opts)?))
        }
        Command::Replay { script } => {
            let s = parse_script(&read(&script)?)?;
            Ok(format!("{}\n", s.replay()?))
        }
        Command::Render { poset, highlight } => {
            let (p, labels) = parse_labeled_poset(&read(&poset)?)?;
            let hl = highlight.as_deref().map(ids).unwrap_or_default();
            if let Some(id) = hl.iter().find(|id| !p.contains(id.as_str())) {
                return Err(Error::UnknownNode(id.clone()).into());
            }
            Ok(emit_dot(&p, &hl, &labels))
        }
        Command::Random { seed, nodes, p } => Ok(emit_poset(&random_poset(seed, nodes, p)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
