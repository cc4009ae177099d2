use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use klr_core::flag_oracle::{oracle_report, Guard};
use klr_core::{CoxeterSystem, Element, HeckeAlgebra, KLTable, MultiplicityEngine, Suite, TableSet};

#[derive(Parser)]
#[command(name = "klr", version, about = "Kazhdan-Lusztig polynomials, tilting multiplicities and Richardson varieties")]
struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Order and longest element, or the Bruhat interval [z, x].
    Group {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long, requires = "x")]
        z: Option<String>,
        #[arg(long, requires = "z")]
        x: Option<String>,
        /// List every element.
        #[arg(long, conflicts_with_all = ["z", "x"])]
        list: bool,
    },
    /// A single h_{y,x}, the column of x, or the whole table.
    Kl {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[arg(long)]
        x: Option<String>,
        /// Read polynomials from this table file instead of computing them.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// The r-polynomial r_{y,x}, or R_{y,x}(q) with --as-R.
    Rpoly {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        x: String,
        #[arg(long = "as-R")]
        as_r: bool,
    },
    /// Graded multiplicity Σ_i [T_x : L_z<i>] v^i.
    Mult {
        #[command(flatten)]
        pair: PairArgs,
        /// Evaluate at v = 1.
        #[arg(long)]
        ungraded: bool,
    },
    /// Poincaré polynomial of the geometric extension on the Richardson variety.
    Poincare {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Check identity suites over every comparable pair.
    Verify {
        #[arg(long = "type")]
        cartan: String,
        /// duality, reciprocity, parity, agreement, positivity or all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// Count open Richardson varieties over F_q by enumerating flags.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Exit with status 1 if a count differs from R_{y,y'}(q).
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Validate or export table files.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long = "type")]
    cartan: String,
    #[arg(long)]
    z: String,
    #[arg(long)]
    x: String,
    #[command(flatten)]
    tables: TableArgs,
}

#[derive(Args)]
struct TableArgs {
    /// ell-KL table file; omitted means ordinary KL polynomials.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Table for the Langlands dual type, needed when ell > 0 and the type is not self-dual.
    #[arg(long, requires = "table")]
    dual_table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TableAction {
    /// Check a table file against every invariant.
    Validate {
        #[arg(long = "type")]
        cartan: String,
        file: PathBuf,
    },
    /// Write the ordinary (ell = 0) table.
    Export {
        #[arg(long = "type")]
        cartan: String,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Rows with named columns, rendered as text, CSV or JSON.
struct Records {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Records {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn json(&self) -> Result<String> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| self.columns.iter().map(|c| c.to_string()).zip(r.iter().map(|v| v.clone().into())).collect())
            .collect();
        let value = if rows.len() == 1 { serde_json::Value::Object(rows[0].clone()) } else { rows.into() };
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }

    fn render(&self, format: Format, text: String) -> Result<String> {
        match format {
            Format::Text => Ok(text),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }
}

fn system(cartan: &str) -> Result<CoxeterSystem> {
    CoxeterSystem::parse(cartan).with_context(|| format!("bad --type {cartan:?}"))
}

/// Parses a word, echoing its canonical form on stderr.
fn element(sys: &CoxeterSystem, name: &str, word: &str) -> Result<Element> {
    let x = sys.parse_element(word).with_context(|| format!("bad --{name} {word:?}"))?;
    eprintln!("{name} = {} [{}]", x.pretty(), x.to_word_string());
    Ok(x)
}

fn engine(sys: &CoxeterSystem, tables: &TableArgs) -> Result<MultiplicityEngine> {
    let Some(path) = &tables.table else {
        return Ok(MultiplicityEngine::ordinary(sys)?);
    };
    let table = KLTable::load(path, sys.cartan()).with_context(|| format!("loading {}", path.display()))?;
    let mut set = TableSet::new();
    if let Some(dual) = &tables.dual_table {
        set.insert(KLTable::load(dual, sys.cartan().dual()).with_context(|| format!("loading {}", dual.display()))?);
    }
    Ok(MultiplicityEngine::new(sys, &table, &set)?)
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

/// Output plus whether every check passed.
type Outcome = (String, bool);

fn run(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Group { cartan, z, x, list } => {
            let sys = system(&cartan)?;
            let elements = match (z, x, list) {
                (Some(z), Some(x), _) => {
                    let (z, x) = (element(&sys, "z", &z)?, element(&sys, "x", &x)?);
                    Some(sys.interval(&z, &x)?)
                }
                (_, _, true) => {
                    sys.group_table()?;
                    Some(sys.enumerate())
                }
                _ => None,
            };
            match elements {
                Some(elements) => {
                    let mut rec = Records::new(&["word", "element", "length"]);
                    for w in &elements {
                        rec.push(vec![w.to_word_string(), w.pretty(), w.length().to_string()]);
                    }
                    let text = lines(elements.iter().map(|w| format!("{} [{}] length {}", w.pretty(), w.to_word_string(), w.length())));
                    Ok((rec.render(format, text)?, true))
                }
                None => {
                    let w0 = sys.longest_element();
                    let mut rec = Records::new(&["type", "order", "w0", "w0_length"]);
                    rec.push(vec![sys.cartan().to_string(), sys.order().to_string(), w0.to_word_string(), w0.length().to_string()]);
                    let text = format!(
                        "type: {}\norder: {}\nw0: {} [{}]\nlength of w0: {}\n",
                        sys.cartan(),
                        sys.order(),
                        w0.pretty(),
                        w0.to_word_string(),
                        w0.length()
                    );
                    Ok((rec.render(format, text)?, true))
                }
            }
        }
        Command::Kl { cartan, y, x, table } => {
            let sys = system(&cartan)?;
            let table = match &table {
                Some(path) => KLTable::load(path, sys.cartan()).with_context(|| format!("loading {}", path.display()))?,
                None => KLTable::default_table(&sys)?,
            };
            let x = x.map(|x| element(&sys, "x", &x)).transpose()?;
            let y = y.map(|y| element(&sys, "y", &y)).transpose()?;
            let mut rec = Records::new(&["y", "x", "polynomial"]);
            let mut text = String::new();
            let mut add = |y: &Element, x: &Element| {
                let p = table.get(&y.to_word_string(), &x.to_word_string());
                let _ = writeln!(text, "h({}, {}) = {}", y.pretty(), x.pretty(), p);
                rec.push(vec![y.to_word_string(), x.to_word_string(), p.to_string()]);
            };
            match (&y, &x) {
                (Some(y), Some(x)) => add(y, x),
                (None, Some(x)) => {
                    for y in sys.interval(&sys.identity(), x)? {
                        add(&y, x);
                    }
                }
                _ => {
                    let group = sys.group_table()?;
                    for (yi, xi) in group.comparable_pairs() {
                        add(group.element(yi), group.element(xi));
                    }
                }
            }
            if let (Some(_), Some(_), Format::Text) = (&y, &x, format) {
                text = rec.rows[0][2].clone() + "\n";
            }
            Ok((rec.render(format, text)?, true))
        }
        Command::Rpoly { cartan, y, x, as_r } => {
            let sys = system(&cartan)?;
            let (y, x) = (element(&sys, "y", &y)?, element(&sys, "x", &x)?);
            let r = HeckeAlgebra::new(&sys)?.r_poly(&y, &x)?;
            let value = if as_r {
                let d = x.length() as i32 - y.length() as i32;
                if r.is_zero() { "0".to_string() } else { r.to_r_form(d)?.to_string() }
            } else {
                r.to_string()
            };
            let mut rec = Records::new(&["y", "x", if as_r { "R" } else { "r" }]);
            rec.push(vec![y.to_word_string(), x.to_word_string(), value.clone()]);
            Ok((rec.render(format, value + "\n")?, true))
        }
        Command::Mult { pair, ungraded } => {
            let sys = system(&pair.cartan)?;
            let (z, x) = (element(&sys, "z", &pair.z)?, element(&sys, "x", &pair.x)?);
            let engine = engine(&sys, &pair.tables)?;
            let value = if ungraded {
                engine.ungraded_mult(&z, &x)?.to_string()
            } else {
                engine.jh_poly(&z, &x)?.poly.to_string()
            };
            let mut rec = Records::new(&["z", "x", if ungraded { "multiplicity" } else { "polynomial" }]);
            rec.push(vec![z.to_word_string(), x.to_word_string(), value.clone()]);
            Ok((rec.render(format, value + "\n")?, true))
        }
        Command::Poincare { pair } => {
            let sys = system(&pair.cartan)?;
            let (z, x) = (element(&sys, "z", &pair.z)?, element(&sys, "x", &pair.x)?);
            let value = engine(&sys, &pair.tables)?.richardson_poincare(&z, &x)?.to_string();
            let mut rec = Records::new(&["z", "x", "polynomial"]);
            rec.push(vec![z.to_word_string(), x.to_word_string(), value.clone()]);
            Ok((rec.render(format, value + "\n")?, true))
        }
        Command::Verify { cartan, suite, jobs, tables } => {
            let suites = parse_suites(&suite)?;
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let sys = system(&cartan)?;
            let report = engine(&sys, &tables)?.verify(&suites, jobs);
            let out = match format {
                Format::Text => report.to_text(),
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            Ok((out, report.passed()))
        }
        Command::Oracle { n, q, compare, jobs } => {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let report = oracle_report(n, q, jobs, Guard::from_env())?;
            let out = match format {
                Format::Text => report.to_text(),
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            Ok((out, !compare || report.passed()))
        }
        Command::Table { action } => match action {
            TableAction::Validate { cartan, file } => {
                let sys = system(&cartan)?;
                let t = KLTable::load(&file, sys.cartan()).with_context(|| format!("validating {}", file.display()))?;
                let mut rec = Records::new(&["file", "type", "ell", "entries", "status"]);
                rec.push(vec![file.display().to_string(), t.cartan().to_string(), t.ell().to_string(), t.len().to_string(), "valid".into()]);
                let text = format!("{}: valid {} table, ell = {}, {} entries\n", file.display(), t.cartan(), t.ell(), t.len());
                Ok((rec.render(format, text)?, true))
            }
            TableAction::Export { cartan, out } => {
                let json = KLTable::default_table(&system(&cartan)?)?.to_json()?;
                match out {
                    Some(path) => {
                        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
                        Ok((String::new(), true))
                    }
                    None => Ok((json, true)),
                }
            }
        },
    }
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    let mut suites = Vec::new();
    for name in names {
        if name == "all" {
            suites.extend(Suite::ALL);
        } else {
            suites.push(name.parse::<Suite>().map_err(anyhow::Error::msg)?);
        }
    }
    suites.sort();
    suites.dedup();
    Ok(suites)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
