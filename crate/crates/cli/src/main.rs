//! Command-line front end: every engine behind one deterministic binary.
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 incomplete record,
//! 3 contradiction or detected violation.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use isharp_core::dims::{dim_c, dim_f2_value, t2};
use isharp_core::error::{Error, Result};
use isharp_core::froyshov::q3_surgery;
use isharp_core::knotdb::{KnotRecord, KnotTable};
use isharp_core::modalg::{decompose, psi_iso, ses_dims, smith_normal_form, v_space, Poly2, PolyMatrix};
use isharp_core::obstruct::{is_lspace_knot_f2, lspace_slopes, su2_abelian_obstruction, torsion_free};
use isharp_core::propagate::{propagate, Graph};
use isharp_core::scan::{table_rows, to_csv, triangle_scan};
use isharp_core::slope::{BundleClass, Slope};

#[derive(Parser)]
#[command(
    name = "isharp",
    about = "Exact surgery dimension formulas, q3, obstructions and bound propagation",
    version
)]
struct Cli {
    /// Knot database path (JSON); defaults to $KNOTDB_PATH, then the
    /// bundled table.
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension over F2 at a slope
    Dim {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
        #[arg(long, default_value = "trivial")]
        bundle: String,
    },
    /// Dimension over C at a slope ("lo|hi" when undetermined)
    Dimc {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Froyshov q3 of an odd-numerator surgery
    Q3 {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Instanton L-space status and the L-space slope range
    Lspace { knot: String },
    /// Is the integral group at (slope, bundle) free of 2-torsion?
    Torsionfree {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
        #[arg(long, default_value = "trivial")]
        bundle: String,
    },
    /// SU(2)-abelian exclusion verdict at a slope
    Su2ab {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Count of 2-torsion summands in the +1 surgery
    T2 { knot: String },
    /// Connected sum of two records
    Sum { left: String, right: String },
    /// Mirror of a record
    Mirror { knot: String },
    /// CSV dimension table over a slope range
    Table {
        knot: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 8)]
        denom_max: i64,
    },
    /// Exact-triangle consistency scan; exits 3 on any violation
    Triangles {
        knot: String,
        #[arg(long, default_value_t = 8)]
        qmax: i64,
        #[arg(long, default_value_t = 64)]
        pmax: i64,
    },
    /// Run the database's constraint graph to its fixpoint
    Propagate,
    /// Decompose an F2[x] presentation matrix ("x^2,x+1;0,x")
    Modalg { presentation: String },
    /// Validate records against the consistency rules; exits 3 on violations
    Validate { knot: Option<String> },
}

enum Table {
    Bundled(&'static KnotTable),
    Owned(KnotTable),
}

impl Table {
    fn get(&self) -> &KnotTable {
        match self {
            Table::Bundled(t) => t,
            Table::Owned(t) => t,
        }
    }
}

fn load_table(db: &Option<PathBuf>) -> Result<Table> {
    let path = db.clone().or_else(|| std::env::var_os("KNOTDB_PATH").map(PathBuf::from));
    match path {
        Some(p) => {
            let bytes = std::fs::read(&p)
                .map_err(|e| Error::Db(format!("cannot read {}: {e}", p.display())))?;
            Ok(Table::Owned(KnotTable::load(&bytes)?))
        }
        None => Ok(Table::Bundled(KnotTable::bundled())),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IncompleteRecord { .. } | Error::AmbiguousDimension(_) => 2,
        Error::Contradiction(_) | Error::Validation(_) => 3,
        _ => 1,
    }
}

fn parse_slope(s: &str) -> Result<Slope> {
    s.parse()
}

fn parse_bundle(s: &str) -> Result<BundleClass> {
    s.parse()
}

fn knot(table: &KnotTable, name: &str) -> Result<KnotRecord> {
    table.get(name)
}

fn print_record(rec: &KnotRecord) {
    println!("{}", serde_json::to_string_pretty(rec).expect("records serialize"));
}

fn parse_presentation(text: &str) -> Result<PolyMatrix> {
    let rows: Vec<Vec<Poly2>> = text
        .split(';')
        .map(|row| row.split(',').map(|e| e.trim().parse()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::ShapeMismatch("presentation rows have unequal lengths".into()));
    }
    Ok(PolyMatrix::from_rows(rows))
}

fn run_validate(db: &Option<PathBuf>, name: Option<&str>) -> Result<i32> {
    // load leniently so every violation is reported, not just the first
    let path = db.clone().or_else(|| std::env::var_os("KNOTDB_PATH").map(PathBuf::from));
    let table = match path {
        Some(p) => {
            let bytes = std::fs::read(&p)
                .map_err(|e| Error::Db(format!("cannot read {}: {e}", p.display())))?;
            Table::Owned(KnotTable::load_lenient(&bytes)?.0)
        }
        None => Table::Bundled(KnotTable::bundled()),
    };
    let table = table.get();
    let records = match name {
        Some(n) => vec![table.get(n)?],
        None => table.fixture_records(),
    };
    let mut count = 0usize;
    for rec in &records {
        for v in rec.validate() {
            println!("{}: {v}", rec.name);
            count += 1;
        }
    }
    if count == 0 {
        println!("ok ({} records checked)", records.len());
        Ok(0)
    } else {
        println!("{count} violations");
        Ok(3)
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    if let Cmd::Validate { knot: name } = &cli.cmd {
        return run_validate(&cli.db, name.as_deref());
    }
    let table = load_table(&cli.db)?;
    let table = table.get();
    match cli.cmd {
        Cmd::Dim { knot: name, slope, bundle } => {
            let k = knot(table, &name)?;
            let s = parse_slope(&slope)?;
            let w = parse_bundle(&bundle)?;
            println!("{}", dim_f2_value(&k, s, w)?);
        }
        Cmd::Dimc { knot: name, slope } => {
            let k = knot(table, &name)?;
            println!("{}", dim_c(&k, parse_slope(&slope)?)?.kind);
        }
        Cmd::Q3 { knot: name, slope } => {
            let k = knot(table, &name)?;
            let r = q3_surgery(&k, parse_slope(&slope)?)?;
            println!("{} (branch {})", r.value, r.branch);
        }
        Cmd::Lspace { knot: name } => {
            let k = knot(table, &name)?;
            println!("{}", is_lspace_knot_f2(&k)?);
            println!("L-space surgeries: {}", lspace_slopes(&k)?);
        }
        Cmd::Torsionfree { knot: name, slope, bundle } => {
            let k = knot(table, &name)?;
            println!("{}", torsion_free(&k, parse_slope(&slope)?, parse_bundle(&bundle)?)?);
        }
        Cmd::Su2ab { knot: name, slope } => {
            let k = knot(table, &name)?;
            println!("{}", su2_abelian_obstruction(&k, parse_slope(&slope)?)?);
        }
        Cmd::T2 { knot: name } => {
            println!("{}", t2(&knot(table, &name)?)?);
        }
        Cmd::Sum { left, right } => {
            let sum = knot(table, &left)?.connected_sum(&knot(table, &right)?);
            print_record(&sum);
        }
        Cmd::Mirror { knot: name } => {
            print_record(&knot(table, &name)?.mirror());
        }
        Cmd::Table { knot: name, from, to, denom_max } => {
            let k = knot(table, &name)?;
            let rows = table_rows(&k, parse_slope(&from)?, parse_slope(&to)?, denom_max)?;
            print!("{}", to_csv(&rows));
        }
        Cmd::Triangles { knot: name, qmax, pmax } => {
            let k = knot(table, &name)?;
            let rep = triangle_scan(&k, qmax, pmax)?;
            for v in &rep.violations {
                println!("{v}");
            }
            println!(
                "{} violations ({} rational, {} integer triangles)",
                rep.violations.len(),
                rep.rational_checked,
                rep.integer_checked
            );
            if !rep.passed() {
                return Ok(3);
            }
        }
        Cmd::Propagate => {
            if table.constraints().is_empty() {
                println!("no constraints in the database");
                return Ok(0);
            }
            let graph = Graph::from_table(table);
            let fp = propagate(&graph)?;
            println!("{}", fp.render());
        }
        Cmd::Modalg { presentation } => {
            let a = parse_presentation(&presentation)?;
            let sd = smith_normal_form(&a);
            let diag: Vec<String> =
                sd.d.diagonal_entries().iter().map(ToString::to_string).collect();
            println!("snf: diag({})", diag.join(", "));
            let dec = decompose(&a);
            println!("module: {}", dec.module);
            let v = v_space(&dec.module);
            println!("v profile: {:?}", v.profile());
            let s = ses_dims(&dec.module);
            println!("ses: coker {} + ker {} = {}", s.coker_dim, s.ker_dim, s.middle_dim);
            let psi = psi_iso(&dec.module)?;
            println!("psi: bijective onto ker(x), dimension {}", psi.kernel_dim);
        }
        Cmd::Validate { .. } => unreachable!("handled before table load"),
    }
    Ok(0)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
