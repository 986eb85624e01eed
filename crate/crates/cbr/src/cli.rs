//! Command-line front end. `run` takes an argv slice and returns the exit
//! code plus the stdout and stderr text, so the whole surface is testable
//! in-process. Exit codes: 0 success, 1 domain errors, 2 parse errors.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::diagram::{compose, enumerate_loop_free, tensor, Color, ColoredObject, Diagram};
use crate::dsl::{self, DslError};
use crate::json::{self, JsonError};
use crate::quantize::state_sum;
use crate::render::{render, Format, Style};
use crate::represent::{eval, is_faithful, verify_relations, RelationReport};

const EXIT_OK: i32 = 0;
const EXIT_DOMAIN: i32 = 1;
const EXIT_PARSE: i32 = 2;

#[derive(Debug)]
struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn domain(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<JsonError> for CmdError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Syntax(_) | JsonError::Format { .. } => CmdError::parse(e.to_string()),
            _ => CmdError::domain(e.to_string()),
        }
    }
}

impl From<DslError> for CmdError {
    fn from(e: DslError) -> Self {
        match e {
            DslError::Parse { .. } => CmdError::parse(e.to_string()),
            DslError::Diagram(_) => CmdError::domain(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "cbr", version, about = "Colored tangle diagram calculator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Diagram inputs: positional file paths, with `--expr` filling remaining
/// slots in order with inline expressions.
#[derive(Args, Default)]
struct DiagramInputs {
    /// Diagram JSON file paths
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Inline diagram expression, e.g. "i(0) ; e(0)"
    #[arg(long, value_name = "DSL")]
    expr: Vec<String>,
}

impl DiagramInputs {
    fn resolve(&self, want: usize) -> Result<Vec<Diagram>, CmdError> {
        let mut out = Vec::with_capacity(want);
        for path in &self.files {
            let text = fs::read_to_string(path)
                .map_err(|e| CmdError::domain(format!("{}: {e}", path.display())))?;
            out.push(json::diagram_from_str(&text)?);
        }
        for expr in &self.expr {
            out.push(dsl::parse_expr(expr)?);
        }
        if out.len() != want {
            return Err(CmdError::parse(format!(
                "expected {want} diagram input(s), got {}",
                out.len()
            )));
        }
        Ok(out)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compose two diagrams, first argument applied first
    Compose(DiagramInputs),
    /// Tensor two diagrams side by side
    Tensor(DiagramInputs),
    /// Normal-form decomposition of a diagram
    Nf(DiagramInputs),
    /// Evaluate a diagram to an exact rational matrix
    Eval {
        /// Representation JSON file
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
        #[command(flatten)]
        input: DiagramInputs,
    },
    /// Decide faithfulness for the given dimension list
    CheckFaithful {
        /// Comma-separated dimensions, e.g. 2,3,5
        #[arg(long, value_name = "DIMS")]
        dims: String,
    },
    /// Check the defining relations diagrammatically and under a representation
    VerifyRelations {
        /// Representation JSON file
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
        /// Comma-separated colors, e.g. 0,1
        #[arg(long, value_name = "COLORS")]
        palette: String,
    },
    /// List the loop-free diagrams of a hom set
    Enumerate {
        /// Comma-separated domain colors (empty for the unit object)
        #[arg(long, value_name = "COLORS", default_value = "")]
        dom: String,
        /// Comma-separated codomain colors (empty for the unit object)
        #[arg(long, value_name = "COLORS", default_value = "")]
        cod: String,
        /// Restrict to loop-free diagrams (required: hom sets are infinite otherwise)
        #[arg(long)]
        loop_free: bool,
    },
    /// State sum of a field set in the series-valued completion
    StateSum {
        /// Field set JSON file
        #[arg(long, value_name = "FILE")]
        fields: PathBuf,
    },
    /// Draw a diagram
    Render {
        /// Output format
        #[arg(long, value_name = "svg|tikz")]
        format: String,
        #[command(flatten)]
        input: DiagramInputs,
    },
}

fn parse_u32_list(s: &str, what: &str) -> Result<Vec<u32>, CmdError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CmdError::parse(format!("bad {what} entry {x:?}")))
        })
        .collect()
}

fn read_rep(path: &PathBuf) -> Result<crate::represent::Representation, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::domain(format!("{}: {e}", path.display())))?;
    Ok(json::representation_from_str(&text)?)
}

fn relation_report_value(r: &RelationReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert(
                "colors".into(),
                Value::Array(c.colors.iter().map(|k| json!(k.0)).collect()),
            );
            o.insert("diagrams_equal".into(), json!(c.diagrams_equal));
            o.insert("matrices_equal".into(), json!(c.matrices_equal));
            o.insert("relation".into(), json!(c.relation));
            Value::Object(o)
        })
        .collect();
    let mut o = Map::new();
    o.insert("all_pass".into(), json!(r.all_pass()));
    o.insert("checks".into(), Value::Array(checks));
    Value::Object(o)
}

fn dispatch(cli: Cli) -> Result<String, CmdError> {
    match cli.cmd {
        Cmd::Compose(inputs) => {
            let d = inputs.resolve(2)?;
            let g = compose(&d[1], &d[0]).map_err(|e| CmdError::domain(e.to_string()))?;
            Ok(json::diagram_to_string(&g))
        }
        Cmd::Tensor(inputs) => {
            let d = inputs.resolve(2)?;
            Ok(json::diagram_to_string(&tensor(&d[0], &d[1])))
        }
        Cmd::Nf(inputs) => {
            let d = inputs.resolve(1)?;
            Ok(json::normal_form_to_value(&d[0].normal_form()).to_string())
        }
        Cmd::Eval { rep, input } => {
            let rep = read_rep(&rep)?;
            let d = input.resolve(1)?;
            let m = eval(&rep, &d[0]).map_err(|e| CmdError::domain(e.to_string()))?;
            Ok(json::matrix_to_value(&m).to_string())
        }
        Cmd::CheckFaithful { dims } => {
            let dims: Vec<u64> = parse_u32_list(&dims, "dimension")?
                .into_iter()
                .map(u64::from)
                .collect();
            let verdict = is_faithful(&dims).map_err(|e| CmdError::domain(e.to_string()))?;
            let mut o = Map::new();
            o.insert("faithful".into(), json!(verdict.faithful));
            if let Some(w) = verdict.witness {
                o.insert("witness".into(), json!(w));
            }
            Ok(Value::Object(o).to_string())
        }
        Cmd::VerifyRelations { rep, palette } => {
            let rep = read_rep(&rep)?;
            let palette: Vec<Color> = parse_u32_list(&palette, "palette")?
                .into_iter()
                .map(Color)
                .collect();
            let report =
                verify_relations(&rep, &palette).map_err(|e| CmdError::domain(e.to_string()))?;
            Ok(relation_report_value(&report).to_string())
        }
        Cmd::Enumerate { dom, cod, loop_free } => {
            if !loop_free {
                return Err(CmdError::domain(
                    "hom sets are infinite without --loop-free",
                ));
            }
            let dom = ColoredObject::new(
                parse_u32_list(&dom, "dom")?.into_iter().map(Color).collect(),
            );
            let cod = ColoredObject::new(
                parse_u32_list(&cod, "cod")?.into_iter().map(Color).collect(),
            );
            let diagrams: Vec<Value> = enumerate_loop_free(&dom, &cod)
                .iter()
                .map(json::diagram_to_value)
                .collect();
            Ok(Value::Array(diagrams).to_string())
        }
        Cmd::StateSum { fields } => {
            let text = fs::read_to_string(&fields)
                .map_err(|e| CmdError::domain(format!("{}: {e}", fields.display())))?;
            let fs = json::field_set_from_str(&text)?;
            let z = state_sum(&fs).map_err(|e| CmdError::domain(e.to_string()))?;
            Ok(json::qelement_to_value(&z).to_string())
        }
        Cmd::Render { format, input } => {
            let format = match format.as_str() {
                "svg" => Format::Svg,
                "tikz" => Format::Tikz,
                other => {
                    return Err(CmdError::parse(format!(
                        "unsupported format {other:?}; use svg or tikz"
                    )))
                }
            };
            let style = match std::env::var("CBR_COLOR_PALETTE") {
                Ok(spec) => Style::from_palette_spec(&spec),
                Err(_) => Style::default(),
            };
            let d = input.resolve(1)?;
            Ok(render(&d[0], format, &style))
        }
    }
}

/// Run the CLI on an argv sequence (including the program name).
/// Returns (exit code, stdout, stderr).
pub fn run<I, S>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help and version requests are successes
            return if e.use_stderr() {
                (EXIT_PARSE, String::new(), e.to_string())
            } else {
                (EXIT_OK, e.to_string(), String::new())
            };
        }
    };
    match dispatch(cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            (EXIT_OK, out, String::new())
        }
        Err(e) => (e.code, String::new(), format!("error: {}\n", e.message)),
    }
}
