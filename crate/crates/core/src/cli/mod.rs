//! Command-line front end: descriptor ingestion, verdict reports and the
//! bundled corpus.

pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::specseq::corpus;
use crate::{Error, Result};
use format::{DegenerationPayload, DescriptorFile, Payload};
pub use report::{build_report, input_digest, Questions, VerdictReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "monodromy", version, about = "Integral monodromy and weight verdicts from descriptor files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Answer questions about a descriptor file.
    Run(RunArgs),
    /// Write a bundled example descriptor.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub monodromy_verdict: bool,
    #[arg(long)]
    pub tf_check: bool,
    #[arg(long)]
    pub weight_certify: bool,
    #[arg(long)]
    pub bad_primes: bool,
    #[arg(long)]
    pub ell: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<i64>,
    #[arg(long)]
    pub q: Option<String>,
    /// Also write the structured report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    #[value(name = "i_n")]
    INn,
    #[value(name = "good_reduction")]
    GoodReduction,
    #[value(name = "two_components")]
    TwoComponents,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub name: ExampleName,
    /// Number of lines in the I_n cycle.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Genus of the double curve for two_components.
    #[arg(long, default_value_t = 1)]
    pub g: usize,
    /// Gysin∘restriction composite for two_components.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub s: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The bundled descriptor for a corpus name, with Betti numbers where known.
pub fn generate_example(name: ExampleName, n: usize, g: usize, s: i64) -> Result<DescriptorFile> {
    let (desc, betti) = match name {
        ExampleName::INn => (corpus::i_n(n)?, Some(vec![1, 2, 1])),
        ExampleName::GoodReduction => (corpus::good_reduction(), Some(vec![1, 2, 1])),
        ExampleName::TwoComponents => (corpus::two_components(g, s), None),
    };
    desc.validate()?;
    Ok(DescriptorFile::new(Payload::Degeneration(DegenerationPayload::from_descriptor(&desc, betti))))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::descriptor(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Parses a descriptor file and answers the questions.
pub fn run_file(path: &Path, questions: &Questions) -> Result<VerdictReport> {
    let raw = read(path)?;
    let text = std::str::from_utf8(&raw).map_err(|e| Error::descriptor(format!("not UTF-8: {e}")))?;
    let file = DescriptorFile::parse(text)?;
    build_report(&raw, &file, questions)
}

fn run(args: &RunArgs) -> Result<String> {
    let q = args
        .q
        .as_deref()
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::InvalidArgument(format!("--q {s} is not an integer"))))
        .transpose()?;
    let questions = Questions {
        monodromy_verdict: args.monodromy_verdict,
        tf_check: args.tf_check,
        weight_certify: args.weight_certify,
        bad_primes: args.bad_primes,
        ell: args.ell,
        w: args.w,
        q,
    };
    let report = run_file(&args.path, &questions)?;
    if let Some(out) = &args.out {
        write(out, &report.to_structured())?;
    }
    Ok(match args.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Structured => report.to_structured(),
    })
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => run(a),
        Command::Generate(a) => generate_example(a.name, a.n, a.g, a.s).and_then(|f| {
            let text = f.to_json();
            match &a.out {
                Some(p) => write(p, &text).map(|_| String::new()),
                None => Ok(text),
            }
        }),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_round_trips() {
        let names = [(ExampleName::INn, 7, 1, 1), (ExampleName::GoodReduction, 3, 1, 1), (ExampleName::TwoComponents, 3, 2, 5)];
        for (name, n, g, s) in names {
            let file = generate_example(name, n, g, s).unwrap();
            let text = file.to_json();
            let back = DescriptorFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let Payload::Degeneration(p) = &back.payload else { panic!("degeneration expected") };
            let desc = p.to_descriptor().unwrap();
            assert_eq!(DegenerationPayload::from_descriptor(&desc, p.betti.clone()), *p);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let text = r#"{"format_version":1,"kind":"degeneration","payload":{"relative_dimension":1,"components":1,
            "strata":[{"index":[1],"cohomology":[{"degree":0,"rank":"x"}]}]}}"#;
        let err = DescriptorFile::parse(text).unwrap_err().to_string();
        assert!(err.contains("strata[0].cohomology[0].rank"), "{err}");
        let err = DescriptorFile::parse(r#"{"format_version":2,"kind":"nilpotent","payload":{"matrix":[]}}"#).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_INPUT);
        let err = DescriptorFile::parse(r#"{"format_version":1,"kind":"other","payload":{}}"#).unwrap_err();
        assert!(err.to_string().contains("kind"));
    }

    #[test]
    fn reports_are_deterministic() {
        let file = generate_example(ExampleName::INn, 6, 1, 1).unwrap();
        let raw = file.to_json();
        let q = Questions { monodromy_verdict: true, w: Some(1), ..Default::default() };
        let a = build_report(raw.as_bytes(), &file, &q).unwrap();
        let b = build_report(raw.as_bytes(), &file, &q).unwrap();
        assert_eq!(a.to_structured(), b.to_structured());
        let v = &a.json["verdicts"]["monodromy"][0]["levels"][1];
        assert_eq!(v["divisors"], serde_json::json!(["6"]));
    }
}
