use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fliesskit::automaton::word_to_string;
use fliesskit::decide::{analyze_automaton, zeroness, AnalysisReport, Property, SystemProperty, ZeronessReport};
use fliesskit::oracle::truncate;
use fliesskit::parse::{
    detect_file_kind, parse_automaton, parse_constraint, parse_input_series, parse_system,
    parse_word, print_automaton, print_system, FileKind,
};
use fliesskit::rational::rat_to_string;
use fliesskit::series::TruncatedPowerSeries;
use fliesskit::system::{automaton_to_system, fliess_eval, simulate, system_to_automaton};
use fliesskit::{PolynomialSystem, ShuffleAutomaton};
use fliesskit::commlang::{compile_constraint, restrict_automaton};

#[derive(Parser)]
#[command(name = "fliesskit", version, about = "Exact analysis of polynomial control systems via shuffle automata")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format: human-readable text or machine-readable key=value lines
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a semantic property exactly
    Check {
        #[command(subcommand)]
        what: Check,
    },
    /// Print the coefficient of one word in the generating series
    Coeff {
        file: PathBuf,
        /// Word as concatenated letters, e.g. a0a1a1 (eps for the empty word)
        #[arg(long)]
        word: String,
    },
    /// Integrate the system and print the output series to a given order
    Simulate {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        /// Input series, e.g. u1=[1,0,2]; slot n multiplies t^n/n!. Omitted inputs are 0.
        #[arg(long = "input")]
        inputs: Vec<String>,
    },
    /// Evaluate the Fliess operator of the generating series directly
    Fliess {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long = "input")]
        inputs: Vec<String>,
    },
    /// Convert between the system and automaton representations
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Dump all series coefficients up to a depth, one `word<TAB>rational` per line
    Oracle {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Restrict the series support to a commutative regular language
    Restrict {
        file: PathBuf,
        /// Counting constraint, e.g. "count(a1) == 0 && count(a0) % 2 == 1"
        #[arg(long)]
        lang: String,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Automaton,
    System,
}

#[derive(Subcommand)]
enum Check {
    /// Is the output identically zero for all inputs?
    Zero { file: PathBuf },
    /// Do two systems/automata produce the same output for all inputs?
    Equal { file: PathBuf, other: PathBuf },
    /// Does the output not depend on the inputs in J?
    Independent {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<usize>,
    },
    /// Is the output linear in the inputs in J?
    Linear {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<usize>,
    },
    /// Does the output depend on the inputs in J only through pointwise values?
    Analytic {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<usize>,
    },
    /// Is the output invariant under temporal translation of the inputs?
    Stationary { file: PathBuf },
    /// Is the series supported away from the drift letter a0?
    TimeInvariant { file: PathBuf },
}

/// A parsed input file: always an automaton, plus the system form when the
/// file was a system (or the automaton is convertible).
struct Loaded {
    automaton: ShuffleAutomaton,
    system: Option<PolynomialSystem>,
}

impl Loaded {
    fn num_inputs(&self) -> usize {
        self.automaton.alphabet_size - 1
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn load(path: &PathBuf) -> Result<Loaded, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let in_file = |e: fliesskit::parse::ParseError| format!("{}:{}", path.display(), e);
    match detect_file_kind(&text).map_err(in_file)? {
        FileKind::System => {
            let s = parse_system(&text).map_err(in_file)?;
            Ok(Loaded { automaton: system_to_automaton(&s), system: Some(s) })
        }
        FileKind::Automaton => {
            let a = parse_automaton(&text).map_err(in_file)?;
            Ok(Loaded { automaton: a, system: None })
        }
    }
}

fn parse_inputs(specs: &[String], m: usize, order: usize) -> Result<Vec<TruncatedPowerSeries>, String> {
    let mut out = vec![TruncatedPowerSeries::zero(order); m];
    for spec in specs {
        let (idx, slots) = parse_input_series(spec).map_err(|e| format!("--input {}: {}", spec, e))?;
        if idx > m {
            return Err(format!("--input {}: system has only {} input(s)", spec, m));
        }
        out[idx - 1] = TruncatedPowerSeries::from_slots(slots, order);
    }
    Ok(out)
}

fn series_line(y: &TruncatedPowerSeries, format: Format) -> String {
    let slots: Vec<String> = y.slots().iter().map(rat_to_string).collect();
    match format {
        Format::Kv => format!("y=[{}]", slots.join(",")),
        Format::Text => format!("y(t) slots (slot n multiplies t^n/n!): [{}]", slots.join(", ")),
    }
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Zero => "zeroness",
        Property::Equivalence => "equivalence",
        Property::Independence => "independence",
        Property::Linearity => "linearity",
        Property::Analyticity => "analyticity",
        Property::Stationarity => "stationarity",
        Property::TimeInvariance => "time-invariance",
    }
}

/// Verdict vocabulary per property, for both exit code and output.
fn verdict_words(p: Property) -> (&'static str, &'static str) {
    match p {
        Property::Zero => ("zero", "nonzero"),
        Property::Equivalence => ("equal", "not_equal"),
        _ => ("holds", "fails"),
    }
}

fn print_zeroness(property: Property, r: &ZeronessReport, format: Format) -> ExitCode {
    let (yes, no) = verdict_words(property);
    let verdict = if r.is_zero { yes } else { no };
    match format {
        Format::Kv => {
            println!("verdict={}", verdict);
            if let Some(w) = &r.witness {
                println!("witness={}", word_to_string(w));
            }
            println!("saturation_depth={}", r.saturation_depth);
        }
        Format::Text => {
            println!("property: {}", property_name(property));
            println!("verdict: {}", verdict);
            if let Some(w) = &r.witness {
                println!("witness: {}", word_to_string(w));
            }
            println!("saturation depth: {}", r.saturation_depth);
        }
    }
    ExitCode::from(if r.is_zero { 0 } else { 1 })
}

fn print_analysis(r: &AnalysisReport, format: Format) -> ExitCode {
    let (yes, no) = verdict_words(r.property);
    let verdict = if r.verdict { yes } else { no };
    let depth = r.subreports.iter().map(|s| s.saturation_depth).max().unwrap_or(0);
    match format {
        Format::Kv => {
            println!("verdict={}", verdict);
            if !r.inputs.is_empty() {
                let js: Vec<String> = r.inputs.iter().map(|j| j.to_string()).collect();
                println!("inputs={}", js.join(","));
            }
            if let Some(w) = &r.witness {
                println!("witness={}", word_to_string(w));
            }
            if let Some((a, b)) = r.failing_pair {
                println!("failing_pair=a{},a{}", a.0, b.0);
            }
            println!("saturation_depth={}", depth);
        }
        Format::Text => {
            println!("property: {}", property_name(r.property));
            println!("verdict: {}", verdict);
            if !r.inputs.is_empty() {
                let js: Vec<String> = r.inputs.iter().map(|j| format!("u{}", j)).collect();
                println!("inputs: {}", js.join(", "));
            }
            if let Some(w) = &r.witness {
                println!("witness: {}", word_to_string(w));
            }
            if let Some((a, b)) = r.failing_pair {
                println!("failing pair: a{}, a{}", a.0, b.0);
            }
            println!("saturation depth: {}", depth);
        }
    }
    ExitCode::from(if r.verdict { 0 } else { 1 })
}

fn run_property(file: &PathBuf, property: SystemProperty, format: Format) -> ExitCode {
    let loaded = match load(file) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    match analyze_automaton(&loaded.automaton, loaded.num_inputs(), &property) {
        Ok(r) => print_analysis(&r, format),
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match cli.cmd {
        Cmd::Check { what } => match what {
            Check::Zero { file } => {
                let loaded = match load(&file) {
                    Ok(l) => l,
                    Err(e) => return fail(e),
                };
                let r = zeroness(&loaded.automaton);
                print_zeroness(Property::Zero, &r, format)
            }
            Check::Equal { file, other } => {
                let (a, b) = match (load(&file), load(&other)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return fail(e),
                };
                match fliesskit::decide::equal(&a.automaton, &b.automaton) {
                    Ok(r) => print_zeroness(Property::Equivalence, &r, format),
                    Err(e) => fail(e),
                }
            }
            Check::Independent { file, inputs } => {
                run_property(&file, SystemProperty::Independence(inputs), format)
            }
            Check::Linear { file, inputs } => {
                run_property(&file, SystemProperty::Linearity(inputs), format)
            }
            Check::Analytic { file, inputs } => {
                run_property(&file, SystemProperty::Analyticity(inputs), format)
            }
            Check::Stationary { file } => run_property(&file, SystemProperty::Stationarity, format),
            Check::TimeInvariant { file } => {
                run_property(&file, SystemProperty::TimeInvariance, format)
            }
        },
        Cmd::Coeff { file, word } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            let w = match parse_word(&word, loaded.automaton.alphabet_size) {
                Ok(w) => w,
                Err(e) => return fail(format!("--word {}: {}", word, e)),
            };
            let c = loaded.automaton.coeff(&w);
            println!("{}", rat_to_string(&c));
            ExitCode::SUCCESS
        }
        Cmd::Simulate { file, order, inputs } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            let system = loaded
                .system
                .clone()
                .unwrap_or_else(|| automaton_to_system(&loaded.automaton));
            let u = match parse_inputs(&inputs, loaded.num_inputs(), order) {
                Ok(u) => u,
                Err(e) => return fail(e),
            };
            match simulate(&system, &u, order) {
                Ok(y) => {
                    println!("{}", series_line(&y, format));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Fliess { file, order, inputs } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            let u = match parse_inputs(&inputs, loaded.num_inputs(), order) {
                Ok(u) => u,
                Err(e) => return fail(e),
            };
            match fliess_eval(&loaded.automaton, &u, order) {
                Ok(y) => {
                    println!("{}", series_line(&y, format));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Convert { file, to } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            match to {
                Target::Automaton => println!("{}", print_automaton(&loaded.automaton)),
                Target::System => {
                    let s = loaded
                        .system
                        .clone()
                        .unwrap_or_else(|| automaton_to_system(&loaded.automaton));
                    println!("{}", print_system(&s));
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Oracle { file, depth } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            print!("{}", truncate(&loaded.automaton, depth).dump());
            ExitCode::SUCCESS
        }
        Cmd::Restrict { file, lang, output } => {
            let loaded = match load(&file) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            let constraint = match parse_constraint(&lang, loaded.automaton.alphabet_size) {
                Ok(c) => c,
                Err(e) => return fail(format!("--lang: {}", e)),
            };
            let rec = match compile_constraint(&constraint, loaded.automaton.alphabet_size) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let restricted = restrict_automaton(&loaded.automaton, &rec);
            let text = print_automaton(&restricted);
            match output {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text + "\n") {
                        return fail(format!("{}: {}", path.display(), e));
                    }
                }
                None => println!("{}", text),
            }
            ExitCode::SUCCESS
        }
    }
}
