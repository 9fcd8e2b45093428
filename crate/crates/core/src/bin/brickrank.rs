//! Command-line front end.
//!
//! Exit codes: 0 success or a positive answer, 1 a negative answer, 2 bad
//! input, 3 a resource guard refused the request, 4 an internal assertion or
//! i/o failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use brickrank::archetypes::{certificate_with, CertificateOptions, LevelSummary};
use brickrank::brick::parse_bricks;
use brickrank::dedekind::{dedekind_count, enumerate_lattice};
use brickrank::maxrank::{geometric_maxrank_with, maxrank_table};
use brickrank::witness::tile_witness;
use brickrank::{
    is_tilable, minimal_set_with, Brick, BrickAntichain, ClosureOptions, Error, FactoredNat, Lattice, Phrase,
};

/// Bricks generated without pruning before the guard trips.
const UNPRUNED_LIMIT: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "brickrank", version, about = "Minimal tilable boxes and maxrank tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (defaults to the available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Close without pruning to the minimal elements
    #[arg(long, global = true)]
    no_prune: bool,

    /// Lift the resource guards
    #[arg(long, global = true, env = "BRICKRANK_GUARD_OVERRIDE", value_parser = clap::builder::FalseyValueParser::new())]
    allow_big: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ProtoArgs {
    /// Proto bricks such as 25x3 or (wx)x(w+x)
    bricks: Vec<String>,

    /// Read bricks from a file: one per line, or a JSON list of strings
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the minimal tilable boxes and the rank
    MinimalSet(ProtoArgs),

    /// Decide whether a box is tilable
    Tilable {
        #[command(flatten)]
        protos: ProtoArgs,

        /// The box to tile
        #[arg(short, long)]
        target: String,

        /// Also construct and print a verified signed tiling
        #[arg(long)]
        witness: bool,
    },

    /// Rank of the worst-case cube proto-set
    Maxrank {
        n: Option<usize>,
        d: Option<usize>,

        /// Print the whole table instead
        #[arg(long)]
        table: bool,

        #[arg(long, default_value_t = 3)]
        n_max: usize,

        #[arg(long, default_value_t = 2)]
        d_min: usize,

        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },

    /// The free distributive lattice on n letters
    Dedekind {
        n: Option<usize>,

        /// Print D(n), excluding the two constants (the default)
        #[arg(long, conflicts_with = "enumerate")]
        count: bool,

        /// List every phrase
        #[arg(long)]
        enumerate: bool,

        /// Print the dual of a phrase
        #[arg(long, value_name = "PHRASE")]
        dual: Option<String>,
    },

    /// Compute the levels of minimal symbolic bricks and their archetypes
    Certificate {
        n: usize,

        /// Checkpoint directory; levels already there are reused
        #[arg(long, value_name = "DIR")]
        resume: Option<PathBuf>,
    },

    /// The rank polynomial and its values
    Poly {
        n: usize,

        /// Evaluate at a single dimension
        #[arg(long)]
        at: Option<i64>,

        /// Print values for d = 0..=UPTO
        #[arg(long, default_value_t = 11)]
        upto: i64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Guard(_) => 3,
            Error::Assertion(_) | Error::Overflow(_) | Error::Io(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("brickrank: {e}");
            return ExitCode::from(4);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("brickrank: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::MinimalSet(protos) => cmd_minimal_set(cli, protos),
        Command::Tilable {
            protos,
            target,
            witness,
        } => cmd_tilable(cli, protos, target, *witness),
        Command::Maxrank {
            n,
            d,
            table,
            n_max,
            d_min,
            d_max,
        } => {
            if *table {
                cmd_maxrank_table(cli, *n_max, *d_min, *d_max)
            } else {
                let (Some(n), Some(d)) = (n, d) else {
                    return Err(usage("maxrank needs N and D, or --table"));
                };
                cmd_maxrank(cli, *n, *d)
            }
        }
        Command::Dedekind {
            n,
            count: _,
            enumerate,
            dual,
        } => cmd_dedekind(cli, *n, *enumerate, dual.as_deref()),
        Command::Certificate { n, resume } => cmd_certificate(cli, *n, resume.clone()),
        Command::Poly { n, at, upto } => cmd_poly(cli, *n, *at, *upto),
    }
}

fn emit(text: &str) {
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
}

fn emit_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn read_brick_strings(protos: &ProtoArgs) -> Result<Vec<String>, Failure> {
    let mut items = protos.bricks.clone();
    if let Some(path) = &protos.input {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if text.trim_start().starts_with('[') {
            let list: Vec<String> = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
            items.extend(list);
        } else {
            items.extend(
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(String::from),
            );
        }
    }
    if items.is_empty() {
        return Err(usage("no proto bricks given"));
    }
    Ok(items)
}

fn closure_options(cli: &Cli) -> ClosureOptions {
    ClosureOptions {
        prune: !cli.no_prune,
        limit: (cli.no_prune && !cli.allow_big).then_some(UNPRUNED_LIMIT),
    }
}

fn is_symbolic(items: &[String]) -> bool {
    items.iter().any(|s| s.contains('('))
}

fn minimal_of<L: Lattice + brickrank::brick::SideText>(
    cli: &Cli,
    items: &[String],
) -> Result<(Vec<Brick<L>>, BrickAntichain<L>), Failure> {
    let refs: Vec<&str> = items.iter().map(String::as_str).collect();
    let protos: Vec<Brick<L>> = parse_bricks(&refs)?;
    let m = minimal_set_with(&protos, closure_options(cli))?;
    Ok((protos, m))
}

fn print_antichain<L: Lattice + brickrank::brick::SideText>(cli: &Cli, m: &BrickAntichain<L>) {
    let bricks: Vec<String> = m.iter().map(ToString::to_string).collect();
    match cli.format {
        Format::Text => {
            for b in &bricks {
                println!("{b}");
            }
            println!("rank {}", bricks.len());
        }
        Format::Json => emit_json(&json!({ "bricks": bricks, "rank": bricks.len() })),
        Format::Csv => {
            println!("brick");
            for b in &bricks {
                println!("{b}");
            }
        }
    }
}

fn cmd_minimal_set(cli: &Cli, protos: &ProtoArgs) -> CmdResult {
    let items = read_brick_strings(protos)?;
    if is_symbolic(&items) {
        let (_, m) = minimal_of::<Phrase>(cli, &items)?;
        print_antichain(cli, &m);
    } else {
        let (_, m) = minimal_of::<FactoredNat>(cli, &items)?;
        print_antichain(cli, &m);
    }
    Ok(0)
}

fn cmd_tilable(cli: &Cli, protos: &ProtoArgs, target: &str, want_witness: bool) -> CmdResult {
    let items = read_brick_strings(protos)?;
    if is_symbolic(&items) || target.contains('(') {
        if want_witness {
            return Err(usage("witnesses need numeric bricks"));
        }
        let (_, m) = minimal_of::<Phrase>(cli, &items)?;
        let t: Brick<Phrase> = target.parse()?;
        let divisor = m.divisor_of(&t)?.map(ToString::to_string);
        return report_tilable(cli, &t.to_string(), divisor, None);
    }
    let (ps, m) = minimal_of::<FactoredNat>(cli, &items)?;
    let t: Brick<FactoredNat> = target.parse()?;
    let divisor = m.divisor_of(&t)?.map(ToString::to_string);
    let witness = if want_witness && divisor.is_some() {
        tile_witness(&ps, &t)?
    } else {
        None
    };
    debug_assert_eq!(divisor.is_some(), is_tilable(&t, &m)?);
    report_tilable(cli, &t.to_string(), divisor, witness)
}

fn report_tilable(
    cli: &Cli,
    target: &str,
    divisor: Option<String>,
    witness: Option<brickrank::witness::TilingWitness>,
) -> CmdResult {
    let yes = divisor.is_some();
    match cli.format {
        Format::Json => {
            let mut doc = json!({ "target": target, "tilable": yes, "divisor": divisor });
            if let Some(w) = &witness {
                doc["witness"] = w.to_json_value();
            }
            emit_json(&doc);
        }
        Format::Text | Format::Csv => {
            match &divisor {
                Some(m) => println!("yes (via {m})"),
                None => println!("no"),
            }
            if let Some(w) = &witness {
                println!("{}", w.to_json()?);
            }
        }
    }
    Ok(if yes { 0 } else { 1 })
}

fn cmd_maxrank(cli: &Cli, n: usize, d: usize) -> CmdResult {
    let r = geometric_maxrank_with(n, d, cli.allow_big)?;
    match cli.format {
        Format::Json => emit_json(&json!({ "n": n, "d": d, "maxrank": r })),
        Format::Csv => emit(&format!("n,d,maxrank\n{n},{d},{r}")),
        Format::Text => println!("{r}"),
    }
    Ok(0)
}

fn cmd_maxrank_table(cli: &Cli, n_max: usize, d_min: usize, d_max: usize) -> CmdResult {
    let table = maxrank_table(n_max, d_min, d_max, cli.allow_big)?;
    match cli.format {
        Format::Json => emit_json(&serde_json::to_value(&table).expect("table serializes")),
        Format::Csv => emit(&table.to_csv()),
        Format::Text => {
            let mut out = String::new();
            write!(out, "{:>3}", "n\\d").ok();
            for d in d_min..=d_max {
                write!(out, " {d:>8}").ok();
            }
            out.push('\n');
            for row in &table.rows {
                write!(out, "{:>3}", row.n).ok();
                for v in &row.values {
                    write!(out, " {v:>8}").ok();
                }
                out.push('\n');
            }
            emit(&out);
        }
    }
    Ok(0)
}

fn cmd_dedekind(cli: &Cli, n: Option<usize>, enumerate: bool, dual: Option<&str>) -> CmdResult {
    if let Some(text) = dual {
        let p: Phrase = text.parse()?;
        let letters = n.unwrap_or(0).max(8 - p.alphabet_mask().leading_zeros() as usize);
        let d = p.dual().render(letters);
        match cli.format {
            Format::Json => emit_json(&json!({ "phrase": p.render(letters), "dual": d })),
            _ => println!("{d}"),
        }
        return Ok(0);
    }
    let n = n.ok_or_else(|| usage("dedekind needs N unless --dual is given"))?;
    if enumerate {
        let phrases: Vec<String> = enumerate_lattice(n)?.iter().map(|p| p.render(n)).collect();
        match cli.format {
            Format::Json => emit_json(&json!({ "n": n, "count": phrases.len(), "phrases": phrases })),
            Format::Csv => {
                println!("phrase");
                for p in &phrases {
                    println!("{p}");
                }
            }
            Format::Text => {
                for p in &phrases {
                    println!("{p}");
                }
            }
        }
        return Ok(0);
    }
    let c = dedekind_count(n)?;
    match cli.format {
        Format::Json => emit_json(&json!({ "n": n, "count": c })),
        Format::Csv => emit(&format!("n,count\n{n},{c}")),
        Format::Text => println!("{c}"),
    }
    Ok(0)
}

fn cmd_certificate(cli: &Cli, n: usize, resume: Option<PathBuf>) -> CmdResult {
    let mut progress = |s: LevelSummary| {
        eprintln!(
            "level {}: {} minimal bricks, max true dimension {}",
            s.dimension, s.size, s.max_true_dim
        );
    };
    let cert = certificate_with(
        n,
        CertificateOptions {
            allow_big: cli.allow_big,
            checkpoint_dir: resume,
            progress: Some(&mut progress),
        },
    )?;
    let poly = cert.rank_polynomial();
    let archetypes: Vec<String> = cert.archetypes.iter().map(|a| a.render(n)).collect();
    match cli.format {
        Format::Json => {
            let levels: Vec<_> = cert
                .levels
                .iter()
                .map(|l| json!({ "dimension": l.dimension, "size": l.len(), "max_true_dim": l.max_true_dim() }))
                .collect();
            emit_json(&json!({
                "n": n,
                "levels": levels,
                "max_true_dim": cert.max_true_dim,
                "arch_counts": cert.arch_count_table(),
                "archetypes": archetypes,
                "polynomial": poly.to_string(),
            }));
        }
        Format::Csv => {
            println!("dimension,size,max_true_dim");
            for l in &cert.levels {
                println!("{},{},{}", l.dimension, l.len(), l.max_true_dim());
            }
        }
        Format::Text => {
            println!("max true dimension {}", cert.max_true_dim);
            println!("archetypes {}", archetypes.len());
            for a in &archetypes {
                println!("  {a}");
            }
            println!("polynomial {poly}");
        }
    }
    Ok(0)
}

fn cmd_poly(cli: &Cli, n: usize, at: Option<i64>, upto: i64) -> CmdResult {
    let cert = certificate_with(
        n,
        CertificateOptions {
            allow_big: cli.allow_big,
            ..Default::default()
        },
    )?;
    let poly = cert.rank_polynomial();
    let points: Vec<i64> = match at {
        Some(d) => vec![d],
        None => (0..=upto).collect(),
    };
    if points.iter().any(|&d| d < 0) {
        return Err(usage("dimensions must be non-negative"));
    }
    let values: Vec<String> = points
        .iter()
        .map(|&d| poly.eval_integer(d).map(|v| v.to_string()).unwrap_or_default())
        .collect();
    match cli.format {
        Format::Json => {
            let coeffs: Vec<String> = poly.coeffs().iter().map(ToString::to_string).collect();
            let table: Vec<_> = points
                .iter()
                .zip(&values)
                .map(|(d, v)| json!({ "d": d, "value": v.parse::<u64>().map_or(json!(v), |x| json!(x)) }))
                .collect();
            emit_json(&json!({ "n": n, "polynomial": poly.to_string(), "coefficients": coeffs, "values": table }));
        }
        Format::Csv => {
            println!("d,value");
            for (d, v) in points.iter().zip(&values) {
                println!("{d},{v}");
            }
        }
        Format::Text => {
            if at.is_some() {
                println!("{}", values[0]);
            } else {
                println!("{poly}");
                println!("{}", values.join(","));
            }
        }
    }
    Ok(0)
}
