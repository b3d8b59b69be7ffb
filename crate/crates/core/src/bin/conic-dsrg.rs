//! Command-line front end: build the cover graph and the two directed
//! strongly regular graphs, verify certificates, run the exhaustive
//! transitive search, and decide isomorphism questions on matrix files.
//!
//! Exit codes: 0 success, 1 negative result (e.g. not isomorphic or a
//! failed certificate on user input), 2 I/O or parse failure, 3 internal
//! assertion or verification failure, 64 usage error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conic_dsrg::construction::{
    gamma_intersection_array, ConstructionContext, ConstructionError, OrbitChoice,
};
use conic_dsrg::digraph::{
    antipodal_partition, read_edgelist, read_matrix01, verify_drg, verify_dsrg, write_edgelist,
    write_matrix01, Digraph, DsrgParams,
};
use conic_dsrg::geometry::VertexSet;
use conic_dsrg::gf2e::FieldSpec;
use conic_dsrg::iso;
use conic_dsrg::search;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "conic-dsrg",
    version,
    about = "Exact constructions and certificates for the directed strongly regular graphs with parameters (63,11,8,1,2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Matrix01,
    Edgelist,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Orbit {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<Orbit> for OrbitChoice {
    fn from(o: Orbit) -> OrbitChoice {
        match o {
            Orbit::A => OrbitChoice::A,
            Orbit::B => OrbitChoice::B,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the cover graph over GF(2^e) and certify its distance
    /// regularity and antipodal class structure.
    Gamma {
        /// Field, as "e=<int>,mod=<hex>".
        #[arg(long, default_value = "e=3,mod=0xB")]
        field: String,
        /// Write the adjacency matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FileFormat::Matrix01)]
        format: FileFormat,
    },
    /// Build one of the two directed strongly regular graphs (q = 8) and
    /// print its certificate.
    Delta {
        /// Which stabilizer orbit of antipodes receives the one-way arcs.
        #[arg(long, value_enum)]
        orbit: Orbit,
        #[arg(long, default_value = "e=3,mod=0xB")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FileFormat::Matrix01)]
        format: FileFormat,
        /// Compare the result against this matrix file up to isomorphism.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Check the directed strong regularity identity of a matrix file.
    Verify {
        /// Parameters "v,k,t,lambda,mu".
        #[arg(long)]
        params: String,
        file: PathBuf,
    },
    /// Enumerate all transitive candidates, certify each, classify the
    /// survivors up to isomorphism, and write one representative per class.
    Search {
        #[arg(long, default_value = "e=3,mod=0xB")]
        field: String,
        /// Directory for the class representative files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = FileFormat::Matrix01)]
        format: FileFormat,
        /// Compare the class representatives against this matrix file.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Decide whether two matrix files are isomorphic digraphs.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Transpose the second digraph before comparing.
        #[arg(long)]
        transpose: bool,
        /// Node budget for the canonical search.
        #[arg(long, default_value_t = iso::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Print the automorphism group of a matrix file: order, structure
    /// report, and generators.
    Aut {
        file: PathBuf,
        #[arg(long, default_value_t = iso::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// List the vertex coordinates of the cover graph for a field.
    Vertices {
        #[arg(long, default_value = "e=3,mod=0xB")]
        field: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Gamma { field, out, format } => cmd_gamma(&field, out.as_deref(), format),
        Command::Delta { orbit, field, out, format, expect } => {
            cmd_delta(orbit.into(), &field, out.as_deref(), format, expect.as_deref())
        }
        Command::Verify { params, file } => cmd_verify(&params, &file),
        Command::Search { field, out_dir, format, expect } => {
            cmd_search(&field, &out_dir, format, expect.as_deref())
        }
        Command::Iso { a, b, transpose, budget } => cmd_iso(&a, &b, transpose, budget),
        Command::Aut { file, budget } => cmd_aut(&file, budget),
        Command::Vertices { field } => cmd_vertices(&field),
    };
    ExitCode::from(code)
}

fn parse_field(s: &str) -> Result<FieldSpec, u8> {
    s.parse::<FieldSpec>().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

/// Writes a digraph with `# key: value` header lines (matrix01 only; the
/// edge-list contract has no header section).
fn write_digraph(d: &Digraph, path: &Path, format: FileFormat, headers: &[String]) -> Result<(), u8> {
    let result = fs::File::create(path).and_then(|mut f| {
        match format {
            FileFormat::Matrix01 => {
                for line in headers {
                    writeln!(f, "# {line}")?;
                }
                write_matrix01(d, &mut f)?;
            }
            FileFormat::Edgelist => write_edgelist(d, &mut f)?,
        }
        f.flush()
    });
    result.map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_IO
    })
}

/// Reads either supported format, deciding by the shape of the first
/// non-header line: edge lists contain whitespace, matrix rows do not.
fn read_digraph(path: &Path) -> Result<Digraph, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })?;
    let first = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
    let parsed = if first.split_whitespace().count() > 1 {
        read_edgelist(&text)
    } else {
        read_matrix01(&text)
    };
    parsed.map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn cmd_gamma(field: &str, out: Option<&Path>, format: FileFormat) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if field.order() < 4 {
        eprintln!("error: the cover graph needs field order at least 4");
        return EXIT_USAGE;
    }
    let vertices = VertexSet::new(field);
    let gamma = conic_dsrg::construction::build_gamma(&vertices);
    println!("field: {field}");
    println!("vertices: {}", gamma.n());
    let cert = verify_drg(&gamma, &gamma_intersection_array(field.order()));
    println!("{cert}");
    if !cert.ok() {
        return EXIT_INTERNAL;
    }
    println!(
        "intersection array: {}",
        cert.found.expect("a passing certificate records the measured array")
    );
    match antipodal_partition(&gamma) {
        Ok(classes) => {
            println!("antipodal classes: {} of size {}", classes.len(), classes[0].len());
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    }
    if let Some(path) = out {
        if let Err(code) = write_digraph(&gamma, path, format, &[format!("field: {field}")]) {
            return code;
        }
        println!("wrote {}", path.display());
    }
    EXIT_OK
}

fn build_context(field: FieldSpec) -> Result<ConstructionContext, u8> {
    ConstructionContext::new(field).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            ConstructionError::FieldOrderNotEight(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        }
    })
}

fn cmd_delta(
    orbit: OrbitChoice,
    field: &str,
    out: Option<&Path>,
    format: FileFormat,
    expect: Option<&Path>,
) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if field.order() != 8 {
        eprintln!("error: the directed construction needs field order 8");
        return EXIT_USAGE;
    }
    let ctx = match build_context(field) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let delta = match ctx.build_delta(orbit) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let params = DsrgParams::new(63, 11, 8, 1, 2).expect("valid parameters");
    let cert = verify_dsrg(&delta, params);
    println!("orbit: {orbit}");
    println!("{cert}");
    if !cert.ok() {
        return EXIT_INTERNAL;
    }
    if let Some(path) = out {
        let headers = [format!("field: {field}"), format!("orbit: {orbit}")];
        if let Err(code) = write_digraph(&delta, path, format, &headers) {
            return code;
        }
        println!("wrote {}", path.display());
    }
    if let Some(path) = expect {
        let expected = match read_digraph(path) {
            Ok(d) => d,
            Err(code) => return code,
        };
        match iso::find_isomorphism(&delta, &expected, iso::DEFAULT_NODE_BUDGET) {
            Ok(Some(_)) => println!("expect: isomorphic to {}", path.display()),
            Ok(None) => {
                println!("expect: NOT ISOMORPHIC to {}", path.display());
                return EXIT_NEGATIVE;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INTERNAL;
            }
        }
    }
    EXIT_OK
}

fn cmd_verify(params: &str, file: &Path) -> u8 {
    let params: DsrgParams = match params.parse() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let d = match read_digraph(file) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let cert = verify_dsrg(&d, params);
    println!("{cert}");
    if cert.ok() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_search(field: &str, out_dir: &Path, format: FileFormat, expect: Option<&Path>) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let ctx = match build_context(field) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let report = match search::search_all(&ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    print!("{report}");
    let extension = match format {
        FileFormat::Matrix01 => "mat",
        FileFormat::Edgelist => "edges",
    };
    for (i, class) in report.classes.iter().enumerate() {
        let path = out_dir.join(format!("dsrg63_class{}.{extension}", i + 1));
        let headers = [
            format!("field: {field}"),
            format!("class: {} of {}", i + 1, report.classes.len()),
        ];
        if let Err(code) = write_digraph(&class.representative, &path, format, &headers) {
            return code;
        }
        println!("wrote {}", path.display());
    }
    if let Some(path) = expect {
        let expected = match read_digraph(path) {
            Ok(d) => d,
            Err(code) => return code,
        };
        let mut matched = None;
        for (i, class) in report.classes.iter().enumerate() {
            match iso::find_isomorphism(&class.representative, &expected, iso::DEFAULT_NODE_BUDGET)
            {
                Ok(Some(_)) => {
                    matched = Some(i + 1);
                    break;
                }
                Ok(None) => {}
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INTERNAL;
                }
            }
        }
        match matched {
            Some(i) => println!("expect: {} is isomorphic to class {i}", path.display()),
            None => {
                println!("expect: {} matches no class", path.display());
                return EXIT_NEGATIVE;
            }
        }
    }
    if report.classes.len() == 2 {
        EXIT_OK
    } else {
        eprintln!(
            "error: expected exactly 2 isomorphism classes, found {}",
            report.classes.len()
        );
        EXIT_INTERNAL
    }
}

fn cmd_iso(a: &Path, b: &Path, transpose: bool, budget: u64) -> u8 {
    let da = match read_digraph(a) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let db = match read_digraph(b) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let db = if transpose { db.transpose() } else { db };
    match iso::find_isomorphism(&da, &db, budget) {
        Ok(Some(map)) => {
            println!("ISOMORPHIC");
            println!("{map}");
            EXIT_OK
        }
        Ok(None) => {
            println!("NOT ISOMORPHIC");
            EXIT_NEGATIVE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_aut(file: &Path, budget: u64) -> u8 {
    let d = match read_digraph(file) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let group = match iso::automorphism_group(&d, budget) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let report = match iso::aut_structure_report(&group) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    print!("{report}");
    print!("generators: {}", group.serialize());
    EXIT_OK
}

fn cmd_vertices(field: &str) -> u8 {
    let field = match parse_field(field) {
        Ok(f) => f,
        Err(code) => return code,
    };
    print!("{}", VertexSet::new(field).export_lines());
    EXIT_OK
}
