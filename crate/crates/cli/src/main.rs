use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use bgx_core::amodule::{AModule, ModuleMap, ShortExactSeq};
use bgx_core::brown_gitler::{brown_gitler, mahowald_sequence, p_map, q_extension, q_map, q_tilde, stunted_projective};
use bgx_core::chart::{ext_chart, family_chart, ExtChart};
use bgx_core::doc::{convert, read_module, ModuleDocument};
use bgx_core::ext::{is_free_over, margolis_homology};
use bgx_core::steenrod::AlgebraSpec;
use bgx_core::{verify, BgxError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bgx", version, about = "Brown-Gitler modules, Dyer-Lashof extensions and Ext charts")]
struct Cli {
    /// Truncation window for stunted projective spaces and chart ranges.
    #[arg(long, global = true, env = "BGX_WINDOW", default_value_t = 24)]
    window: i32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit G(n) as a module document.
    Gmod {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Emit H_*(P_k), k in -1..=1, truncated at the window.
    Pmod {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[arg(long)]
        top: Option<i32>,
        #[command(flatten)]
        output: Output,
    },
    /// Emit q(n, r): G(n+r) → G(n)⊗H(P_0), or q̃(n, r) into G(n)⊗H(P_1).
    Qmap {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        tilde: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Emit the middle term of Q(n, r), optionally checking the extension.
    Qext {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Chart of Ext^{s,t}(source, target) as TSV.
    Ext {
        /// G(n), F2, F2[k], P(k), Q(n,r) or a module document path.
        #[arg(long)]
        source: String,
        #[arg(long, default_value = "F2")]
        target: String,
        #[arg(long, default_value = "E1")]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        smax: usize,
        #[arg(long, allow_hyphen_values = true)]
        tmin: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        tmax: Option<i32>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Chart of Ext^{s,s}(G(n), target) with Q^r, Sq^k and h0 registered.
    Dlchart {
        #[arg(long, default_value = "F2[2]")]
        target: String,
        #[arg(long, default_value = "E1")]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        smax: usize,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the registered maps as TSV.
        #[arg(long)]
        maps: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Margolis homology of a module, or the Q(n, 2^k) table with --table.
    Margolis {
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Freeness over a finite subalgebra.
    Freeness {
        #[arg(long)]
        module: String,
        #[arg(long, default_value = "E1")]
        algebra: String,
    },
    /// Run acceptance criteria: `all` or criterion numbers.
    Verify {
        #[arg(default_value = "all")]
        suites: Vec<String>,
    },
    /// Parse, validate and re-serialize a module document.
    Convert {
        input: PathBuf,
        output: Option<PathBuf>,
    },
}

enum Failure {
    Error(BgxError),
    Check(String),
}

impl From<BgxError> for Failure {
    fn from(e: BgxError) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

fn exit_code(e: &BgxError) -> u8 {
    match e {
        BgxError::DimensionMismatch { .. } => 3,
        BgxError::Contract(_) => 4,
        BgxError::Domain(_) => 5,
        BgxError::NotUnstable(_) => 6,
        BgxError::Window { .. } => 7,
        BgxError::ResolutionFloor { .. } => 8,
        BgxError::Adem(_) => 9,
        BgxError::Parse(_) => 10,
        BgxError::Schema { .. } => 11,
        BgxError::Io(_) => 12,
        BgxError::Json(_) => 13,
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_args<const N: usize>(s: &str, prefix: &str) -> Option<[i32; N]> {
    let inner = s.strip_prefix(prefix)?.strip_suffix(')')?;
    let parts: Vec<i32> = inner.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    parts.try_into().ok()
}

/// Resolves a module designation.
fn module(spec: &str, window: i32) -> Result<AModule, BgxError> {
    if spec == "F2" {
        return Ok(AModule::f2_at(AlgebraSpec::Full, 0));
    }
    if let Some(k) = spec
        .strip_prefix("F2[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|k| k.trim().parse::<i32>().ok())
    {
        return Ok(AModule::f2_at(AlgebraSpec::Full, k).with_name(format!("Σ^{k}F2")));
    }
    if let Some([n]) = parse_args::<1>(spec, "G(") {
        let n = u32::try_from(n).map_err(|_| BgxError::Domain(format!("G({n}) needs n >= 0")))?;
        return Ok(brown_gitler(n));
    }
    if let Some([k]) = parse_args::<1>(spec, "P(") {
        return stunted_projective(k, window);
    }
    if let Some([n, r]) = parse_args::<2>(spec, "Q(") {
        let (n, r) = (u32::try_from(n), u32::try_from(r));
        let (Ok(n), Ok(r)) = (n, r) else {
            return Err(BgxError::Domain("Q(n, r) needs n, r >= 0".into()));
        };
        return Ok(q_extension(n, r)?.middle().as_ref().clone());
    }
    read_module(Path::new(spec))
}

fn map_json(f: &ModuleMap) -> String {
    let matrices: BTreeMap<i32, Vec<Vec<u8>>> = f
        .source()
        .degrees()
        .filter(|&d| f.source().dim(d) > 0)
        .map(|d| {
            let m = f.matrix(d);
            let rows = m
                .row_vecs()
                .iter()
                .map(|r| r.to_bools().into_iter().map(u8::from).collect())
                .collect();
            (d, rows)
        })
        .collect();
    let value = serde_json::json!({
        "source": ModuleDocument::from_module(f.source()),
        "target": ModuleDocument::from_module(f.target()),
        "shift": f.shift(),
        "matrices": matrices,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("maps serialize");
    s.push('\n');
    s
}

fn check_line(ok: bool, what: &str, failures: &mut Vec<String>) {
    eprintln!("{} {what}", if ok { "ok  " } else { "FAIL" });
    if !ok {
        failures.push(what.to_string());
    }
}

fn qext_checks(n: u32, r: u32, e: &ShortExactSeq) -> Result<Vec<String>, BgxError> {
    let mut failures = Vec::new();
    check_line(e.check().is_ok(), &format!("Q({n},{r}) is a short exact sequence"), &mut failures);
    let split = e.is_split()?;
    eprintln!("info Q({n},{r}) is {}", if split { "split" } else { "nonsplit" });
    if n >= 1 && r + 1 == n {
        let mah = mahowald_sequence(n)?.suspend(-1);
        check_line(
            e.equivalent(&mah)?,
            &format!("Q({n},{r}) is equivalent to the desuspended Mahowald sequence for n = {n}"),
            &mut failures,
        );
    }
    if r == n {
        let top = mahowald_sequence(n + 1)?.suspend(-2);
        let pn = p_map(n)
            .suspend(-2)
            .with_ends(Arc::clone(top.sub()), Arc::new(brown_gitler(n).suspend(-1)))?;
        let po = top.pushout(&pn)?;
        let gamma = p_map(2 * n)
            .suspend(-1)
            .with_ends(Arc::clone(po.quotient()), Arc::clone(e.quotient()))?;
        let alpha = ModuleMap::identification(Arc::clone(po.sub()), Arc::clone(e.sub()))?;
        check_line(
            po.equivalence_via(e, &alpha, &gamma)?.is_some(),
            &format!("Q({n},{n}) is the pushout of the twice desuspended Mahowald sequence for n = {} along p_{n}", n + 1),
            &mut failures,
        );
    }
    Ok(failures)
}

fn write_chart(chart: &ExtChart, svg: &Option<PathBuf>, output: &Output) -> Result<(), Failure> {
    if let Some(p) = svg {
        std::fs::write(p, chart.to_svg())?;
    }
    emit(output, &chart.to_tsv())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let window = cli.window;
    match cli.command {
        Command::Gmod { n, output } => emit(&output, &ModuleDocument::from_module(&brown_gitler(n)).to_canonical_json()),
        Command::Pmod { k, top, output } => {
            let p = stunted_projective(k, top.unwrap_or(window))?;
            emit(&output, &ModuleDocument::from_module(&p).to_canonical_json())
        }
        Command::Qmap { n, r, tilde, output } => {
            let f = if tilde { q_tilde(n, r)? } else { q_map(n, r)? };
            emit(&output, &map_json(&f))
        }
        Command::Qext { n, r, check, output } => {
            let e = q_extension(n, r)?;
            emit(&output, &ModuleDocument::from_module(e.middle()).to_canonical_json())?;
            if check {
                let failures = qext_checks(n, r, &e)?;
                if !failures.is_empty() {
                    return Err(Failure::Check(failures.join("; ")));
                }
            }
            Ok(())
        }
        Command::Ext {
            source,
            target,
            algebra,
            smax,
            tmin,
            tmax,
            svg,
            output,
        } => {
            let spec = AlgebraSpec::from_name(&algebra)?;
            let n = module(&source, window)?;
            let m = module(&target, window)?;
            let tmin = tmin.unwrap_or(m.min_degree() - n.max_degree());
            let tmax = tmax.unwrap_or(tmin + window);
            let chart = ext_chart(&n, &m, spec, smax, tmin, tmax, None)?;
            write_chart(&chart, &svg, &output)
        }
        Command::Dlchart {
            target,
            algebra,
            smax,
            nmax,
            svg,
            maps,
            output,
        } => {
            let spec = AlgebraSpec::from_name(&algebra)?;
            let m = Arc::new(module(&target, window)?);
            let chart = family_chart(m, spec, smax, nmax, true)?;
            if let Some(p) = maps {
                std::fs::write(p, chart.maps_tsv())?;
            }
            write_chart(&chart, &svg, &output)
        }
        Command::Margolis { module: name, h, table, output } => {
            if table {
                let rows = verify::margolis_table()?;
                return emit(&output, &verify::margolis_tsv(&rows));
            }
            let name = name.ok_or_else(|| BgxError::contract("margolis needs --module or --table"))?;
            let m = module(&name, window)?;
            let mut text = String::from("i\tdegree\tdim\n");
            for i in 0..=h as usize {
                for (d, k) in margolis_homology(&m, i)? {
                    text.push_str(&format!("{i}\t{d}\t{k}\n"));
                }
            }
            emit(&output, &text)
        }
        Command::Freeness { module: name, algebra } => {
            let spec = AlgebraSpec::from_name(&algebra)?;
            let m = module(&name, window)?;
            let r = is_free_over(&m, spec)?;
            println!("module\t{}", m.name());
            println!("algebra\t{}", r.spec);
            println!("free\t{}", r.free);
            println!("generators\t{:?}", r.generators);
            if let Some((d, v)) = &r.witness {
                println!("witness\tdegree {d}: {v:?}");
            }
            for (i, h) in r.margolis.iter().enumerate() {
                let dims: Vec<String> = h.iter().map(|(d, k)| format!("{d}:{k}")).collect();
                println!("H(Q{i})\t{}", if dims.is_empty() { "0".into() } else { dims.join(",") });
            }
            if !r.margolis_agrees {
                return Err(Failure::Check("Margolis homology disagrees with the cover test".into()));
            }
            Ok(())
        }
        Command::Verify { suites } => {
            let ids: Vec<usize> = if suites.iter().any(|s| s == "all") {
                (1..=verify::CRITERIA.len()).collect()
            } else {
                suites
                    .iter()
                    .map(|s| {
                        s.parse::<usize>()
                            .ok()
                            .filter(|i| (1..=verify::CRITERIA.len()).contains(i))
                            .ok_or_else(|| BgxError::Parse(format!("unknown suite {s:?}; use 1..=12 or all")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let outcomes = bgx_core::par::sweep(&ids, |&i| verify::run(i));
            for o in &outcomes {
                println!("{o}");
            }
            let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(format!("criteria {} failed", failed.join(", "))))
            }
        }
        Command::Convert { input, output } => {
            let text = convert(&std::fs::read_to_string(&input)?)?;
            emit(&Output { out: output }, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("bgx: check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("bgx: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
