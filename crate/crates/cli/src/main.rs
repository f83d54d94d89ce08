mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use seglink::corpus;
use seglink::gadget::{transform, TransformOptions, TransformReport};
use seglink::geom::format_rat;
use seglink::instance::Verdict;
use seglink::linker::{decide, oracle_decide, verify_linking, Decision, LinkMode, Linking, ORACLE_CAP};
use seglink::verify::{verify_all, verify_forced_sequence};
use seglink::SegmentFamily;

use render::{render_svg, RenderOptions};

const INVALID: u8 = 2;
const NO: u8 = 3;

#[derive(Parser)]
#[command(name = "seglink", version, about = "Link line segments into simple polygons and chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Circuit,
    Path,
}

impl From<Mode> for LinkMode {
    fn from(m: Mode) -> LinkMode {
        match m {
            Mode::Circuit => LinkMode::Circuit,
            Mode::Path => LinkMode::Path,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a .segs file against its declared class
    Validate { file: PathBuf },
    /// Decide whether the family links into a simple polygon or chain
    Solve {
        mode: Mode,
        file: PathBuf,
        /// Use the brute-force oracle (at most 7 segments)
        #[arg(long)]
        oracle: bool,
        /// Write the witness here when the answer is yes
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Compile an interior-disjoint axis-parallel family into gadgets
    Transform {
        mode: Mode,
        input: PathBuf,
        output: PathBuf,
        /// Report sidecar path (default: <output>.report)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-check the gadget lemmas on a transformed family
    Verify {
        file: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Draw a family as SVG
    Render {
        file: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Magnify the a1' displacement by this factor (needs --report)
        #[arg(long)]
        zoom_delta: Option<u64>,
        /// Write here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a corpus instance
    Gen {
        #[command(subcommand)]
        which: Gen,
    },
}

#[derive(Subcommand)]
enum Gen {
    L,
    Rect,
    Nested,
    /// A grid of disjoint rectangles
    Grid { cols: i64, rows: i64 },
    RandomDisjoint { n: usize, seed: u64 },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_family(path: &Path) -> Result<SegmentFamily> {
    let text = read(path)?;
    SegmentFamily::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_report(path: &Path) -> Result<TransformReport> {
    let text = read(path)?;
    TransformReport::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_witness(path: &Path) -> Result<Linking> {
    let text = read(path)?;
    Linking::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { file } => {
            let family = load_family(&file)?;
            match family.validate() {
                Ok(Verdict::Valid(class)) => {
                    println!("valid {}", class.tag());
                    Ok(ExitCode::SUCCESS)
                }
                Ok(Verdict::Invalid(v)) => {
                    println!("invalid: {v}");
                    Ok(ExitCode::from(INVALID))
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(ExitCode::from(INVALID))
                }
            }
        }
        Command::Solve { mode, file, oracle, witness } => {
            let family = load_family(&file)?;
            match family.validate()? {
                Verdict::Valid(_) => {}
                Verdict::Invalid(v) => {
                    println!("invalid: {v}");
                    return Ok(ExitCode::from(INVALID));
                }
            }
            let decision = if oracle {
                oracle_decide(&family, mode.into(), ORACLE_CAP)?
            } else {
                decide(&family, mode.into())
            };
            match decision {
                Decision::Yes(w) => {
                    println!("YES");
                    if let Some(path) = witness {
                        write(&path, &w.to_text())?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Decision::No => {
                    println!("NO");
                    Ok(ExitCode::from(NO))
                }
            }
        }
        Command::Transform { mode, input, output, report } => {
            let family = load_family(&input)?;
            let (out, rep) = match transform(&family, mode.into(), &TransformOptions::default()) {
                Ok(x) => x,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(INVALID));
                }
            };
            let report = report.unwrap_or_else(|| {
                let mut p = output.clone().into_os_string();
                p.push(".report");
                PathBuf::from(p)
            });
            write(&output, &out.serialize())?;
            write(&report, &rep.to_text())?;
            println!("delta {}", format_rat(&rep.params.delta));
            println!("gadgets {}", rep.gadgets.len());
            println!("segments {} -> {}", family.len(), out.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, report, witness } => {
            let Some(report) = report else {
                bail!("verify needs --report");
            };
            let family = load_family(&file)?;
            let rep = load_report(&report)?;
            let mut ok = true;
            match verify_all(&family, &rep) {
                Ok(r) => {
                    print!("{}", r.to_text());
                    ok &= r.all_pass();
                }
                Err(e) => {
                    println!("mismatch: {e}");
                    return Ok(ExitCode::from(INVALID));
                }
            }
            if let Some(path) = witness {
                let w = load_witness(&path)?;
                if let Err(v) = verify_linking(&family, &w) {
                    println!("witness invalid: {v}");
                    return Ok(ExitCode::from(INVALID));
                }
                match verify_forced_sequence(&family, &rep, &w) {
                    Ok(r) => {
                        print!("{}", r.to_text());
                        ok &= r.all_pass();
                    }
                    Err(e) => {
                        println!("mismatch: {e}");
                        return Ok(ExitCode::from(INVALID));
                    }
                }
            }
            println!("{}", if ok { "all checks pass" } else { "some checks fail" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(INVALID) })
        }
        Command::Render { file, witness, report, zoom_delta, output } => {
            let family = load_family(&file)?;
            let witness = witness.as_deref().map(load_witness).transpose()?;
            let report = report.as_deref().map(load_report).transpose()?;
            if zoom_delta.is_some() && report.is_none() {
                bail!("--zoom-delta needs --report to locate the a1' points");
            }
            if let Some(w) = &witness {
                if w.order.iter().any(|e| e.seg >= family.len()) {
                    bail!("witness does not match the family");
                }
            }
            let svg = render_svg(
                &family,
                &RenderOptions {
                    witness: witness.as_ref(),
                    report: report.as_ref(),
                    zoom_delta,
                },
            );
            match output {
                Some(path) => write(&path, &svg)?,
                None => print!("{svg}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { which } => {
            let family = match which {
                Gen::L => corpus::l_instance(),
                Gen::Rect => corpus::rectangle(),
                Gen::Nested => corpus::nested_loops(),
                Gen::Grid { cols, rows } => corpus::rectangle_grid(cols, rows),
                Gen::RandomDisjoint { n, seed } => corpus::random_disjoint(n, seed),
            };
            print!("{}", family.serialize());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
