use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{classify, enumerate_ktqs, format_algebra, parse_algebra, EnumerateOptions, Filter, TernaryQuasigroup};
use crate::chain::{boundary, Chain, DiffKind};
use crate::diagram::{Correspondence, Diagram};
use crate::error::{Error, HomologyError, ParseError};
use crate::homology::{homology, two_cocycles, Cochain, HomologyVariant, Mode, Relators};
use crate::invariants::{default_variant, invariant_report, state_sum, ReportOptions};

#[derive(Debug, Parser)]
#[command(name = "ktq", version, about = "Knot-theoretic ternary quasigroups, their homology and diagram invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the quasigroup property and the axioms A3L, A3R and T = M.
    Verify { algebra: PathBuf },
    /// List every Latin cube of an order, optionally filtered by axioms.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Keep one representative per relabeling orbit.
        #[arg(long)]
        dedup: bool,
        /// Allow order 5.
        #[arg(long)]
        force: bool,
    },
    /// Compute one homology group.
    Homology {
        algebra: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: isize,
        #[arg(long, value_enum, default_value_t = RelatorsArg::None)]
        relators: RelatorsArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Quot)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = DiffArg::Full)]
        diff: DiffArg,
    },
    /// Apply a differential to a chain file.
    Boundary {
        algebra: PathBuf,
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = DiffArg::Full)]
        diff: DiffArg,
    },
    /// Count (and optionally list) the colorings of a diagram.
    Color {
        algebra: PathBuf,
        diagram: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Print the generators and relations read off a diagram.
    Present { diagram: PathBuf },
    /// Generators of the 2-cocycles with coefficients in Z_m.
    Cocycles {
        algebra: PathBuf,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = RelatorsArg::D)]
        relators: RelatorsArg,
    },
    /// Evaluate the cocycle state sum of a diagram.
    Statesum {
        algebra: PathBuf,
        diagram: PathBuf,
        cocycle: PathBuf,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Compare the invariants of two diagrams.
    Compare {
        algebra: PathBuf,
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long)]
        correspondence: Option<PathBuf>,
        #[arg(long = "mod", default_value_t = 3)]
        modulus: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Ktq,
    Iktq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelatorsArg {
    #[value(name = "none")]
    None,
    #[value(name = "D")]
    D,
    #[value(name = "I")]
    I,
    #[value(name = "ID")]
    Id,
}

impl From<RelatorsArg> for Relators {
    fn from(r: RelatorsArg) -> Self {
        match r {
            RelatorsArg::None => Relators::None,
            RelatorsArg::D => Relators::D,
            RelatorsArg::I => Relators::I,
            RelatorsArg::Id => Relators::ID,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Sub,
    Quot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DiffArg {
    #[value(name = "L")]
    L,
    #[value(name = "R")]
    R,
    Full,
}

impl From<DiffArg> for DiffKind {
    fn from(d: DiffArg) -> Self {
        match d {
            DiffArg::L => DiffKind::Left,
            DiffArg::R => DiffKind::Right,
            DiffArg::Full => DiffKind::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    #[value(name = "N")]
    N,
    #[value(name = "NI")]
    Ni,
    #[value(name = "NID")]
    Nid,
}

impl From<VariantArg> for HomologyVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Plain => HomologyVariant::plain(),
            VariantArg::N => HomologyVariant::normalized(),
            VariantArg::Ni => HomologyVariant::normalized_involutory(),
            VariantArg::Nid => HomologyVariant::normalized_involutory_degenerate(),
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn parse_file<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, ParseError>) -> Result<T, Error> {
    let text = read(path)?;
    parse(&text).map_err(|source| Error::Parse { path: path.display().to_string(), source })
}

fn load_algebra(path: &Path) -> Result<TernaryQuasigroup, Error> {
    Ok(classify(&parse_file(path, parse_algebra)?))
}

/// Runs the command line and returns the process exit code. Results go to
/// `out`, diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io { path: "<stdout>".into(), source: e }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Error> {
    let text = match command {
        Command::Verify { algebra } => verify(&load_algebra(&algebra)?),
        Command::Enumerate { order, filter, dedup, force } => {
            let filter = match filter {
                FilterArg::All => Filter::AllQuasigroups,
                FilterArg::Ktq => Filter::Ktq,
                FilterArg::Iktq => Filter::Iktq,
            };
            let cap = if force { 5 } else { EnumerateOptions::DEFAULT_MAX_ORDER };
            let tables = enumerate_ktqs(EnumerateOptions::new(order).filter(filter).dedup(dedup).max_order(cap))?;
            let mut s = format!("# {} tables\n", tables.len());
            for t in &tables {
                s.push('\n');
                s.push_str(&format_algebra(t));
            }
            s
        }
        Command::Homology { algebra, degree, relators, mode, diff } => {
            let x = load_algebra(&algebra)?;
            let mode = match mode {
                ModeArg::Sub => Mode::Subcomplex,
                ModeArg::Quot => Mode::Quotient,
            };
            let g = homology(&x, degree, HomologyVariant::new(relators.into(), mode, diff.into()))?;
            format!("{g}\n")
        }
        Command::Boundary { algebra, chain, diff } => {
            let x = load_algebra(&algebra)?;
            x.require_quasigroup()?;
            let c = parse_file(&chain, |t| Chain::parse(t, 1))?;
            for (t, _) in c.iter() {
                t.check_range(x.order())?;
            }
            boundary(x.table(), &c, diff.into()).to_text()
        }
        Command::Color { algebra, diagram, list } => {
            let x = load_algebra(&algebra)?;
            let d = parse_file(&diagram, Diagram::parse)?;
            let cols = d.colorings(&x)?;
            let mut s = format!("count: {}\n", cols.len());
            if list {
                for c in &cols {
                    let row: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                    s.push_str(&row.join(" "));
                    s.push('\n');
                }
            }
            s
        }
        Command::Present { diagram } => parse_file(&diagram, Diagram::parse)?.presentation(),
        Command::Cocycles { algebra, modulus, relators } => {
            let x = load_algebra(&algebra)?;
            let variant = HomologyVariant::new(relators.into(), Mode::Quotient, DiffKind::Full);
            let gens = two_cocycles(&x, modulus, variant)?;
            let mut s = format!("# {} generators of 2-cocycles for {variant} with coefficients in Z_{modulus}\n", gens.len());
            for g in &gens {
                s.push('\n');
                s.push_str(&g.to_text());
            }
            s
        }
        Command::Statesum { algebra, diagram, cocycle, variant } => {
            let x = load_algebra(&algebra)?;
            let d = parse_file(&diagram, Diagram::parse)?;
            let phi = parse_file(&cocycle, Cochain::parse)?;
            let variant = variant.map(Into::into).unwrap_or_else(|| default_variant(d.kind()));
            format!("{}\n", state_sum(&d, &x, &phi, variant)?)
        }
        Command::Compare { algebra, first, second, variant, correspondence, modulus } => {
            if modulus < 2 {
                return Err(Error::Homology(HomologyError::Linalg(crate::error::LinalgError::InvalidModulus(modulus))));
            }
            let x = load_algebra(&algebra)?;
            let d1 = parse_file(&first, Diagram::parse)?;
            let d2 = parse_file(&second, Diagram::parse)?;
            let correspondence = correspondence.map(|p| parse_file(&p, Correspondence::parse)).transpose()?;
            let options = ReportOptions { variant: variant.map(Into::into), modulus, correspondence, cocycles: None };
            invariant_report(&d1, &d2, &x, &options)?.to_text()
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)
}

fn verify(x: &TernaryQuasigroup) -> String {
    let f = x.flags();
    let mut s = format!(
        "quasigroup: {}, A3L: {}, A3R: {}, involutory: {} ({})\n",
        yes_no(f.is_quasigroup),
        yes_no(f.satisfies_a3l),
        yes_no(f.satisfies_a3r),
        yes_no(f.is_involutory),
        f.label()
    );
    if let Some(v) = x.quasigroup_violation() {
        let [a, b, c, o] = v.first;
        let [d, e, f, _] = v.second;
        s.push_str(&format!("# {} slot is not injective: T({a},{b},{c}) = T({d},{e},{f}) = {o}\n", v.slot));
    }
    let a3 = x.a3_report();
    for (name, q) in [("A3L", a3.a3l_counterexample), ("A3R", a3.a3r_counterexample)] {
        if let Some([a, b, c, d]) = q {
            s.push_str(&format!("# {name} fails at (a,b,c,d) = ({a},{b},{c},{d})\n"));
        }
    }
    s
}
