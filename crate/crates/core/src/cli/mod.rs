//! The `gog` command-line tool.
//!
//! Exit codes: 0 success or YES, 1 NO, 2 UNKNOWN, 64 usage error, 65 data error.

pub mod document;
mod refine_data;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::families::{make, make_example_1_4, FamilyError, FamilyId, FamilyInstance};
use crate::gog::{
    collapse, equivalent, find_redundant_vertices, fundamental_presentation, is_minimal, is_reduced, refine, validate,
    GogError, GraphOfGroups, Severity, TriState,
};
use crate::invariants::abelianization;
use crate::lattice::{canonicalize, count_sandwich_classes, LatticeSubgroup};

pub use document::{DocError, GogDocument, Mode};
pub use refine_data::parse_refine_data;

pub const REPORT_HEADER: &str = "gog-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

pub fn exit_code(t: TriState) -> i32 {
    match t {
        TriState::Yes => EXIT_OK,
        TriState::No => EXIT_NO,
        TriState::Unknown => EXIT_UNKNOWN,
    }
}

#[derive(Parser, Debug)]
#[command(name = "gog", version, about = "Graphs of groups: checks, collapse, refinement and invariants")]
pub struct Cli {
    /// Also write a machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Keep unknown sections and keys instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural and algebraic checks.
    Validate { file: PathBuf },
    /// Is every edge end non-surjective (loops excepted)?
    Minimal { file: PathBuf },
    /// Is every non-loop edge end non-surjective?
    Reduced { file: PathBuf },
    /// Lists redundant vertices; exits 1 if any is found.
    Redundant { file: PathBuf },
    /// Collapses the named edges and prints the result.
    Collapse {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<String>,
    },
    /// Refines a vertex using a splitting of its group.
    Refine {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
    },
    /// Abelianizations of vertex groups, edge groups and the fundamental group.
    Invariants { file: PathBuf },
    /// Builds a member of a named family.
    Family {
        id: String,
        #[arg(long)]
        n: Option<u64>,
        /// Parameter of the power family, as `b1,b2,b3`.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Print the certificate instead of the graph.
        #[arg(long)]
        invariants: bool,
    },
    /// Counts sandwich classes of subgroups between A and the ambient group.
    Sandwich {
        /// Ambient group as `m` or `m / (r1), (r2), ...`.
        #[arg(long, allow_hyphen_values = true)]
        ambient: String,
        /// Generators of A as `(a, b), (c, d)`.
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
    },
    /// Prints the canonical form of a document.
    Format { file: PathBuf },
    /// Decides whether two graphs are the same up to renaming and conjugation.
    Equivalent { first: PathBuf, second: PathBuf },
}

/// Key/value findings plus optional document text for standard output.
#[derive(Debug, Default)]
struct Outcome {
    fields: Vec<(String, String)>,
    document: Option<String>,
    code: i32,
}

impl Outcome {
    fn field(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn data(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_DATA, message: message.into() }
}

fn read_doc(path: &Path, mode: Mode) -> Result<GogDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    GogDocument::parse(&text, mode).map_err(|e| data(format!("{}:{e}", path.display())))
}

/// Runs the tool in-process and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mode = if cli.lenient { Mode::Lenient } else { Mode::Strict };
    let outcome = match execute(&cli.command, mode) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(err, "gog: {}", f.message);
            return f.code;
        }
    };
    for (k, v) in &outcome.fields {
        let _ = writeln!(out, "{k}: {v}");
    }
    if let Some(doc) = &outcome.document {
        if !outcome.fields.is_empty() {
            let _ = writeln!(out);
        }
        let _ = out.write_all(doc.as_bytes());
    }
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report_text(command_name(&cli.command), &outcome)) {
            let _ = writeln!(err, "gog: {}: {e}", path.display());
            return EXIT_DATA;
        }
    }
    outcome.code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Minimal { .. } => "minimal",
        Command::Reduced { .. } => "reduced",
        Command::Redundant { .. } => "redundant",
        Command::Collapse { .. } => "collapse",
        Command::Refine { .. } => "refine",
        Command::Invariants { .. } => "invariants",
        Command::Family { .. } => "family",
        Command::Sandwich { .. } => "sandwich",
        Command::Format { .. } => "format",
        Command::Equivalent { .. } => "equivalent",
    }
}

fn report_text(command: &str, o: &Outcome) -> String {
    let mut s = format!("{REPORT_HEADER}\ncommand = {command}\nexit = {}\n", o.code);
    for (k, v) in &o.fields {
        for line in v.lines() {
            s.push_str(&format!("{k} = {line}\n"));
        }
    }
    if let Some(doc) = &o.document {
        s.push_str("\n[document]\n");
        for line in doc.lines().filter(|l| !l.is_empty()) {
            s.push_str(&format!("line = {line}\n"));
        }
    }
    s
}

fn execute(command: &Command, mode: Mode) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    match command {
        Command::Validate { file } => {
            let doc = read_doc(file, mode)?;
            let diags = validate(&doc.graph);
            let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
            let unchecked = diags.len() - errors;
            o.field("errors", errors);
            o.field("unchecked", unchecked);
            for d in &diags {
                o.field("diagnostic", d);
            }
            o.code = if errors > 0 {
                EXIT_NO
            } else if unchecked > 0 {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
        }
        Command::Minimal { file } | Command::Reduced { file } => {
            let doc = read_doc(file, mode)?;
            let (key, t) = match command {
                Command::Minimal { .. } => ("minimal", is_minimal(&doc.graph)),
                _ => ("reduced", is_reduced(&doc.graph)),
            };
            let t = t.map_err(gog_failure)?;
            o.field(key, t);
            o.code = exit_code(t);
        }
        Command::Redundant { file } => {
            let doc = read_doc(file, mode)?;
            let found = find_redundant_vertices(&doc.graph).map_err(gog_failure)?;
            let mut any = TriState::No;
            for (v, t) in &found {
                o.field("vertex", format!("{} {t}", doc.graph.vertices()[*v].name));
                any = any.or(*t);
            }
            o.field("redundant", any);
            o.code = exit_code(any.not());
        }
        Command::Collapse { file, edges } => {
            let doc = read_doc(file, mode)?;
            let idx = edges
                .iter()
                .map(|e| doc.graph.edge_index(e).ok_or_else(|| usage(format!("no edge named {e:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let g = collapse(&doc.graph, &idx).map_err(gog_failure)?;
            summarize(&mut o, &g);
            o.document = Some(GogDocument::from_graph(doc.name.as_deref(), &g).serialize());
        }
        Command::Refine { file, data: path } => {
            let doc = read_doc(file, mode)?;
            let text = std::fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            let rd = parse_refine_data(&text, &doc.graph, mode).map_err(|e| data(format!("{}:{e}", path.display())))?;
            match refine(&doc.graph, &rd) {
                Ok(g) => {
                    o.field("refined", doc.graph.vertices()[rd.vertex].name.clone());
                    summarize(&mut o, &g);
                    o.document = Some(GogDocument::from_graph(doc.name.as_deref(), &g).serialize());
                }
                Err(e) => {
                    o.field("error", e.code());
                    o.field("reason", &e);
                    o.code = match e {
                        GogError::AttachmentUndecidable(_) => EXIT_UNKNOWN,
                        GogError::AttachmentFailed(_) => EXIT_NO,
                        _ => EXIT_DATA,
                    };
                }
            }
        }
        Command::Invariants { file } => {
            let doc = read_doc(file, mode)?;
            invariants(&mut o, &doc.graph);
        }
        Command::Family { id, n, b, invariants: certificate } => {
            let inst = family(id, *n, b.as_deref())?;
            if *certificate {
                o.field("family", inst.family);
                o.field("parameter", &inst.parameter);
                for line in inst.certificate.to_string().lines() {
                    let (k, v) = line.split_once(": ").expect("certificate line");
                    o.field(k, v);
                }
                for note in &inst.notes {
                    o.field("note", note);
                }
            } else {
                let name = format!("{}-{}", inst.family, inst.parameter);
                let mut doc = GogDocument::from_graph(Some(&name), &inst.graph);
                doc.notes = inst.notes.clone();
                o.document = Some(doc.serialize());
            }
        }
        Command::Sandwich { ambient, sub } => sandwich(&mut o, ambient, sub)?,
        Command::Format { file } => {
            let doc = read_doc(file, mode)?;
            o.document = Some(doc.serialize());
        }
        Command::Equivalent { first, second } => {
            let a = read_doc(first, mode)?;
            let b = read_doc(second, mode)?;
            let t = equivalent(&a.graph, &b.graph);
            o.field("equivalent", t);
            o.code = exit_code(t);
        }
    }
    Ok(o)
}

fn gog_failure(e: GogError) -> Failure {
    data(format!("{} ({})", e, e.code()))
}

fn summarize(o: &mut Outcome, g: &GraphOfGroups) {
    o.field("vertices", g.vertices().len());
    o.field("edges", g.edges().len());
}

fn invariants(o: &mut Outcome, g: &GraphOfGroups) {
    let show = |l: &crate::gog::GroupLabel| l.abelianization().map_or_else(|| "unknown".to_string(), |a| a.to_string());
    for v in g.vertices() {
        o.field("vertex", format!("{} {}", v.name, show(&v.label)));
    }
    for e in g.edges() {
        o.field("edge", format!("{} {}", e.name, show(&e.label)));
    }
    o.field("first-betti", (g.edges().len() + 1).saturating_sub(g.vertices().len()));
    match fundamental_presentation(g, &g.default_spanning_tree()) {
        Ok(p) => o.field("abelianization", abelianization(&p)),
        Err(GogError::Unpresentable(_)) => {
            o.field("abelianization", "unknown");
            o.code = EXIT_UNKNOWN;
        }
        Err(e) => {
            o.field("abelianization", "error");
            o.field("reason", e);
            o.code = EXIT_DATA;
        }
    }
}

fn family(id: &str, n: Option<u64>, b: Option<&str>) -> Result<FamilyInstance, Failure> {
    let f = FamilyId::parse(id).ok_or_else(|| {
        let known: Vec<&str> = FamilyId::ALL.iter().map(|f| f.id()).collect();
        usage(format!("unknown family {id:?}; known: {}", known.join(", ")))
    })?;
    let param_err = |e: FamilyError| match e {
        FamilyError::Parameter(m) => usage(m),
        FamilyError::Gog(g) => gog_failure(g),
    };
    if f == FamilyId::Power {
        if n.is_some() {
            return Err(usage("the power family takes --b b1,b2,b3"));
        }
        let b = b.ok_or_else(|| usage("the power family needs --b b1,b2,b3"))?;
        let parts: Vec<i64> = b
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| usage(format!("bad --b component {p:?}"))))
            .collect::<Result<_, _>>()?;
        let [b1, b2, b3] = parts[..] else { return Err(usage("--b needs exactly three integers")) };
        return Ok(make_example_1_4([b1, b2, b3]));
    }
    if b.is_some() {
        return Err(usage(format!("family {id} takes --n, not --b")));
    }
    let n = n.ok_or_else(|| usage(format!("family {id} needs --n")))?;
    make(f, n).map_err(param_err)
}

fn sandwich(o: &mut Outcome, ambient: &str, sub: &str) -> Result<(), Failure> {
    let label = document::parse_group_spec(&format!("abelian {ambient}")).map_err(|e| usage(format!("--ambient: {}", e.reason)))?;
    let crate::gog::GroupLabel::Abelian(p) = label else { unreachable!() };
    let gens = document::parse_vectors(sub).map_err(|e| usage(format!("--sub: {}", e.reason)))?;
    if let Some(g) = gens.iter().find(|g| g.len() != p.ambient_rank()) {
        return Err(usage(format!("--sub: generator has {} entries, expected {}", g.len(), p.ambient_rank())));
    }
    let a = canonicalize(&gens, &p).map_err(|e| usage(e.to_string()))?;
    let report = count_sandwich_classes(&a, &p).map_err(|e| data(e.to_string()))?;
    o.field("ambient", p.invariants());
    o.field("subgroup", subgroup_text(&a));
    o.field("root-closure-options", report.root_closure_options.len());
    let (lo, hi) = report.complement_rank_range;
    o.field("complement-ranks", format!("{lo}..{hi}"));
    o.field("classes", report.class_count);
    for c in &report.classes {
        o.field(
            "class",
            format!(
                "root-closure {} complement-rank {} witness {}",
                subgroup_text(&c.root_closure),
                c.complement_rank,
                subgroup_text(&c.witness)
            ),
        );
    }
    Ok(())
}

fn subgroup_text(s: &LatticeSubgroup) -> String {
    let gens: Vec<String> = s
        .generators()
        .iter()
        .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("<{}>", gens.join(", "))
}
