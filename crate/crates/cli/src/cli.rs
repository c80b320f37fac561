//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sesforge_core::normalize::parse_links;
use sesforge_core::rdf::Iri;
use sesforge_core::store::{QueryPattern, Registry, StoreError};
use sesforge_core::syntax::{serialize_turtle, Format, PhraseTable};
use sesforge_core::{Namespaces, Vocab, DEFAULT_SESCORE_BASE};

use crate::convert::{convert_document, ConvertError};
use crate::http::{serve, ServiceConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "sesforge",
    version,
    about = "SES-core concept-map conversion, registry and query"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Registry directory.
    #[arg(long, global = true, env = "SESFORGE_REGISTRY", default_value = "sesforge-registry")]
    pub registry: PathBuf,
    /// SES-core ontology namespace; the global and local namespaces derive from it.
    #[arg(long, global = true, default_value = DEFAULT_SESCORE_BASE)]
    pub base_iri: String,
    /// Linking-phrase table (`phrase -> curie` lines) replacing the built-in one.
    #[arg(long, global = true)]
    pub phrases: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Owl,
    Cxl,
    Ttl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Owl => Format::Owl,
            FormatArg::Cxl => Format::Cxl,
            FormatArg::Ttl => Format::Turtle,
        }
    }
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input document.
    input: PathBuf,
    /// Input format; defaults to the file extension.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Contextualization links, one `case_local -> framework_local` per line.
    #[arg(long)]
    links: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize a document against the registry and print Turtle plus the report. The registry is not changed.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        /// Case id used in the report; defaults to the input file stem.
        #[arg(long)]
        case_id: Option<String>,
        /// Write to this file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seed built-in frameworks (Ostrom2007, Ostrom2009, McGinnisOstrom2014).
    Seed {
        #[arg(required = true)]
        frameworks: Vec<String>,
    },
    /// Validate the registry, or a Turtle graph together with the registry.
    Validate { input: Option<PathBuf> },
    /// Run a basic-graph-pattern query (`-` reads it from standard input).
    Query { query: String },
    /// Keyword search over labels and local names.
    Search {
        #[arg(required = true)]
        keywords: Vec<String>,
    },
    /// Normalize a document and add it to the registry as a case.
    Add {
        case_id: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print a case, a framework, or the whole registry as Turtle.
    Export {
        #[arg(long, conflicts_with = "framework")]
        case: Option<String>,
        #[arg(long)]
        framework: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long, default_value_t = 8 * 1024 * 1024, value_parser = clap::value_parser!(u64).range(1..))]
        max_upload_bytes: u64,
    },
}

/// Failure carrying its exit code; the message goes to standard error.
struct Failure(i32, String);

impl From<ConvertError> for Failure {
    fn from(e: ConvertError) -> Self {
        match e {
            ConvertError::Parse(p) => Failure(EXIT_PARSE, format!("parse error: {p}")),
            other => Failure(EXIT_INVALID, other.to_string()),
        }
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let code = match e {
            StoreError::Corrupt { .. } | StoreError::Io { .. } => EXIT_PARSE,
            StoreError::InvalidCaseId(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        };
        Failure(code, e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

impl GlobalOpts {
    pub fn vocab(&self) -> Result<Vocab, String> {
        Iri::new(&self.base_iri).map_err(|e| format!("--base-iri: {e}"))?;
        Ok(Vocab::new(&Namespaces::from_base(&self.base_iri)))
    }

    pub fn phrase_table(&self) -> Result<PhraseTable, String> {
        match &self.phrases {
            None => Ok(PhraseTable::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                PhraseTable::parse(&text).map_err(|e| format!("{}: {e}", p.display()))
            }
        }
    }
}

struct Session {
    opts: GlobalOpts,
    vocab: Vocab,
    phrases: PhraseTable,
}

impl Session {
    fn load(&self) -> Result<Registry, Failure> {
        Ok(Registry::load(&self.opts.registry, self.vocab.clone())?)
    }

    fn save(&self, reg: &Registry) -> Result<(), Failure> {
        Ok(reg.save(&self.opts.registry)?)
    }

    fn format_of(&self, input: &InputArgs) -> Result<Format, Failure> {
        input
            .format
            .map(Format::from)
            .or_else(|| Format::from_path(&input.input))
            .ok_or_else(|| {
                Failure(
                    EXIT_USAGE,
                    format!("cannot tell the format of {}; pass --format", input.input.display()),
                )
            })
    }

    fn links(&self, reg: &Registry, input: &InputArgs) -> Result<Vec<(Iri, Iri)>, Failure> {
        match &input.links {
            None => Ok(Vec::new()),
            Some(p) => parse_links(&read_file(p)?, &reg.prefixes(), &self.vocab)
                .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", p.display()))),
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(EXIT_PARSE, format!("stdout: {e}"))),
    }
}

fn run_command(s: &Session, command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: io::Error| Failure(EXIT_PARSE, e.to_string());
    match command {
        Command::Convert { input, case_id, output } => {
            let format = s.format_of(&input)?;
            let text = read_file(&input.input)?;
            let reg = s.load()?;
            let links = s.links(&reg, &input)?;
            let case_id = case_id.unwrap_or_else(|| {
                input
                    .input
                    .file_stem()
                    .map(|stem| stem.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "case".into())
            });
            let conversion = convert_document(&reg, &text, format, &s.phrases, &case_id, &links)?;
            write_output(&output, &conversion.output, out)?;
            if conversion.has_errors() {
                writeln!(err, "validation failed:\n{}", conversion.validation).map_err(io)?;
                return Ok(EXIT_INVALID);
            }
            Ok(EXIT_OK)
        }
        Command::Seed { frameworks } => {
            let mut reg = s.load()?;
            for id in &frameworks {
                if reg.seed_framework(id)? {
                    writeln!(out, "seeded {id}").map_err(io)?;
                } else {
                    writeln!(out, "{id} already present").map_err(io)?;
                }
            }
            s.save(&reg)?;
            Ok(EXIT_OK)
        }
        Command::Validate { input } => {
            let reg = s.load()?;
            let mut g = reg.union();
            if let Some(path) = input {
                let text = read_file(&path)?;
                let case = sesforge_core::syntax::parse_turtle(&text, &reg.prefixes())
                    .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
                g.merge(&case);
            }
            let report = sesforge_core::sescore::validate(&g, reg.vocab());
            write!(out, "{report}").map_err(io)?;
            Ok(if report.has_errors() { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Query { query } => {
            let text = if query == "-" {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf).map_err(io)?;
                buf
            } else {
                query
            };
            let reg = s.load()?;
            let pm = reg.prefixes();
            let q = QueryPattern::parse(&text, &pm, reg.vocab()).map_err(|e| Failure(EXIT_PARSE, e.to_string()))?;
            write!(out, "{}", reg.bgp_query(&q).to_tsv(&pm)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Search { keywords } => {
            let reg = s.load()?;
            let pm = reg.prefixes();
            for (iri, score) in reg.keyword_search(&keywords.join(" ")) {
                writeln!(out, "{score}\t{}", pm.compact(&iri)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Add { case_id, input } => {
            let format = s.format_of(&input)?;
            let text = read_file(&input.input)?;
            let mut reg = s.load()?;
            let links = s.links(&reg, &input)?;
            let conversion = convert_document(&reg, &text, format, &s.phrases, &case_id, &links)?;
            reg.commit(conversion.prepared)?;
            s.save(&reg)?;
            writeln!(out, "added case {case_id}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Export {
            case,
            framework,
            output,
        } => {
            let reg = s.load()?;
            let g = match (case, framework) {
                (Some(id), _) => reg.case(&id).cloned().ok_or(StoreError::UnknownCase(id))?,
                (_, Some(id)) => reg
                    .frameworks()
                    .get(&id)
                    .cloned()
                    .ok_or_else(|| Failure(EXIT_INVALID, format!("unknown framework `{id}`")))?,
                _ => reg.union(),
            };
            write_output(&output, &serialize_turtle(&g, &reg.prefixes()), out)?;
            Ok(EXIT_OK)
        }
        Command::Serve {
            listen,
            max_upload_bytes,
        } => {
            let reg = s.load()?;
            let cfg = ServiceConfig {
                listen,
                registry_dir: s.opts.registry.clone(),
                phrases: s.phrases.clone(),
                max_upload_bytes: max_upload_bytes as usize,
            };
            let runtime = tokio::runtime::Runtime::new().map_err(io)?;
            runtime.block_on(serve(cfg, reg)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let setup = cli
        .global
        .vocab()
        .and_then(|vocab| Ok((vocab, cli.global.phrase_table()?)));
    let (vocab, phrases) = match setup {
        Ok(x) => x,
        Err(message) => {
            let _ = writeln!(err, "sesforge: {message}");
            return EXIT_USAGE;
        }
    };
    let session = Session {
        opts: cli.global,
        vocab,
        phrases,
    };
    match run_command(&session, cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "sesforge: {message}");
            code
        }
    }
}
