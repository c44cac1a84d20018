//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::basis::{expected_top_row, run_pipeline, selftest, top_row_multiset};
use crate::cubic::{
    dickson_form, eigenvalue_check, jordan_identity_check, seed_triples, to_tensor, verify_tensor_invariance,
};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::{verify_relations, GeneratorSet};
use crate::gf41::{lift_table, reduce_cyc, Gf41};
use crate::linalg::{CycMatrix, Matrix};
use crate::matfile::{read_matrix_file, write_cyc, write_gf41, AnyMatrix};
use crate::orbits::{
    enumerate_orbit, fixed_seed, perm_images, proj1755_seed, scalar_character, CanonicalPoint, StabChain,
    DEFAULT_ORBIT_CAP,
};
use crate::wordlang::{derive_generators, eval_word, parse_word_with_names, Env};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "tits-e6",
    version,
    about = "Exact generators for the Tits group in compact E6"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print or write the five generators.
    Gens {
        /// Reduce entries modulo 41.
        #[arg(long)]
        gf41: bool,
        /// Write one file per generator into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check and print a PASS/FAIL table.
    Verify,
    /// Enumerate an orbit and print its size.
    Orbit {
        #[arg(long, value_enum)]
        seed: Seed,
        /// Generators to use: `all` or a comma-separated list.
        #[arg(long, default_value = "all")]
        gens: String,
        /// Also print each generator's permutation of the orbit.
        #[arg(long)]
        perms: bool,
    },
    /// Order of the group generated by a subset, acting on the 2304-point orbit.
    Order {
        #[arg(long, default_value = "all")]
        gens: String,
    },
    /// Print the 45 cubic form terms.
    Cubic {
        /// Check invariance under each generator instead.
        #[arg(long)]
        check: bool,
    },
    /// Evaluate a group word and print the resulting matrix.
    Eval {
        #[arg(long)]
        word: String,
        /// Bind a name to a matrix file: `name=path`.
        #[arg(long = "bind", value_name = "NAME=FILE")]
        binds: Vec<String>,
        /// Use the mod-41 generators as default bindings.
        #[arg(long)]
        gf41: bool,
    },
    /// Reduce a matrix file modulo 41, or print the table of designated residues.
    Reduce41 {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Run the mod-41 basis search.
    #[command(group(ArgGroup::new("source").required(true).args(["input", "selftest"])))]
    Basis {
        /// Directory holding a.mat and b.mat over GF(41).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Scramble the reduced generators and recover them.
        #[arg(long)]
        selftest: bool,
        /// First scramble seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of scramble seeds.
        #[arg(long, default_value_t = 5)]
        count: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Seed {
    /// (1,1,1;0²⁴)
    Fixed,
    /// The 1-space of (0,0,0;0⁴;i,1,−1,−i;0¹⁶).
    Proj1755,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Syntax { .. }
        | Error::UnboundName(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch(_)
        | Error::DenominatorDivisibleBy41 => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o error: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Gens { gf41, out: dir } => cmd_gens(gf41, dir.as_deref(), out),
        Command::Verify => cmd_verify(out),
        Command::Orbit { seed, gens, perms } => cmd_orbit(seed, &gens, perms, out),
        Command::Order { gens } => cmd_order(&gens, out),
        Command::Cubic { check } => cmd_cubic(check, out),
        Command::Eval { word, binds, gf41 } => cmd_eval(&word, &binds, gf41, out),
        Command::Reduce41 { input } => cmd_reduce41(input.as_deref(), out),
        Command::Basis { input: Some(dir), .. } => cmd_basis_in(&dir, out),
        Command::Basis { seed, count, .. } => cmd_basis_selftest(seed, count, out),
    }
}

fn cmd_gens(gf41: bool, dir: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let g = GeneratorSet::build();
    let texts: Vec<(&str, String)> = if gf41 {
        g.reduce()?.named().iter().map(|(n, m)| (*n, write_gf41(m))).collect()
    } else {
        g.named().iter().map(|(n, m)| (*n, write_cyc(m))).collect()
    };
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for (name, text) in texts {
                let path = dir.join(format!("{name}.mat"));
                std::fs::write(&path, text).map_err(io)?;
                writeln!(out, "{}", path.display()).map_err(io)?;
            }
        }
        None => {
            for (name, text) in texts {
                writeln!(out, "# {name}").map_err(io)?;
                out.write_all(text.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn all_generators(g: &GeneratorSet<CycNum>) -> Vec<CycMatrix> {
    g.as_array().iter().map(|m| (*m).clone()).collect()
}

fn seed_point(seed: Seed) -> CanonicalPoint {
    match seed {
        Seed::Fixed => fixed_seed(),
        Seed::Proj1755 => proj1755_seed(),
    }
}

fn cmd_orbit(seed: Seed, spec: &str, perms: bool, out: &mut dyn Write) -> Result<i32> {
    let g = GeneratorSet::build();
    let gens: Vec<CycMatrix> = g.select(spec)?.into_iter().map(|(_, m)| m.clone()).collect();
    let orbit = enumerate_orbit(&seed_point(seed), &gens, DEFAULT_ORBIT_CAP)?;
    writeln!(out, "{}", orbit.len()).map_err(io)?;
    if perms {
        for p in perm_images(&orbit, &gens)?.perms {
            let line: Vec<String> = p.images().iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_order(spec: &str, out: &mut dyn Write) -> Result<i32> {
    let g = GeneratorSet::build();
    let names: Vec<&str> = g.select(spec)?.into_iter().map(|(n, _)| n).collect();
    let all = all_generators(&g);
    let orbit = enumerate_orbit(&fixed_seed(), &all, DEFAULT_ORBIT_CAP)?;
    let perms = perm_images(&orbit, &all)?;
    let idx: Vec<usize> = names
        .iter()
        .map(|n| g.named().iter().position(|(m, _)| m == n).expect("selected"))
        .collect();
    writeln!(out, "{}", StabChain::build(&perms.subset(&idx)).order()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_cubic(check: bool, out: &mut dyn Write) -> Result<i32> {
    let g = GeneratorSet::build();
    let form = dickson_form(&g)?;
    if !check {
        for t in form.terms() {
            writeln!(out, "{t}").map_err(io)?;
        }
        return Ok(EXIT_OK);
    }
    let tensor = to_tensor(&form);
    let checks: Vec<(String, bool)> = g
        .named()
        .iter()
        .map(|(n, m)| {
            (
                format!("cubic form invariant under {n}"),
                verify_tensor_invariance(&tensor, m),
            )
        })
        .collect();
    print_table(&checks, out)
}

fn print_table(checks: &[(String, bool)], out: &mut dyn Write) -> Result<i32> {
    for (name, ok) in checks {
        writeln!(out, "{}  {name}", if *ok { "PASS" } else { "FAIL" }).map_err(io)?;
    }
    Ok(if checks.iter().all(|(_, ok)| *ok) {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn parse_bind(b: &str) -> Result<(&str, &Path)> {
    let (name, path) = b
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("binding {b:?} is not NAME=FILE")))?;
    if name.is_empty() || path.is_empty() {
        return Err(Error::InvalidArgument(format!("binding {b:?} is not NAME=FILE")));
    }
    Ok((name, Path::new(path)))
}

fn eval_text<T: Field>(word: &str, defaults: &GeneratorSet<T>, binds: Vec<(&str, Matrix<T>)>) -> Result<Matrix<T>> {
    let mut env = Env::new();
    for (name, m) in defaults.named() {
        if !binds.iter().any(|(n, _)| *n == name) {
            env.bind(name, m.clone())?;
        }
    }
    for (name, m) in binds {
        env.bind(name, m)?;
    }
    let names = env.names().into_iter().map(str::to_owned).collect::<Vec<_>>();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    eval_word(&parse_word_with_names(word, &refs)?, &env)
}

fn cmd_eval(word: &str, binds: &[String], gf41: bool, out: &mut dyn Write) -> Result<i32> {
    let mut loaded = Vec::new();
    for b in binds {
        let (name, path) = parse_bind(b)?;
        loaded.push((name, read_matrix_file(path)?));
    }
    let any_gf = gf41 || loaded.iter().any(|(_, m)| matches!(m, AnyMatrix::Gf41(_)));
    let g = GeneratorSet::build();
    let text = if any_gf {
        let binds = loaded
            .into_iter()
            .map(|(n, m)| match m {
                AnyMatrix::Gf41(m) => Ok((n, m)),
                AnyMatrix::Cyc(m) => Ok((n, m.try_map(reduce_cyc)?)),
            })
            .collect::<Result<Vec<_>>>()?;
        write_gf41(&eval_text(word, &g.reduce()?, binds)?)
    } else {
        let binds = loaded
            .into_iter()
            .map(|(n, m)| match m {
                AnyMatrix::Cyc(m) => (n, m),
                AnyMatrix::Gf41(_) => unreachable!("handled above"),
            })
            .collect();
        write_cyc(&eval_text(word, &g, binds)?)
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_reduce41(input: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    match input {
        Some(path) => {
            let m = match read_matrix_file(path)? {
                AnyMatrix::Cyc(m) => m.try_map(reduce_cyc)?,
                AnyMatrix::Gf41(m) => m,
            };
            out.write_all(write_gf41(&m).as_bytes()).map_err(io)?;
        }
        None => {
            for (k, v) in lift_table() {
                writeln!(out, "{k}  {v}").map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn multiset_text(m: &BTreeMap<u8, usize>) -> String {
    m.iter().map(|(k, n)| format!("{k}x{n}")).collect::<Vec<_>>().join(" ")
}

fn cmd_basis_selftest(seed: u64, count: u64, out: &mut dyn Write) -> Result<i32> {
    if count == 0 {
        return Err(Error::InvalidArgument("--count must be positive".into()));
    }
    let reference = GeneratorSet::build().reduce()?;
    let seeds: Vec<u64> = (seed..seed.saturating_add(count)).collect();
    let report = selftest(&reference, &seeds)?;
    let code = print_table(&report.checks, out)?;
    writeln!(out, "top row: {}", multiset_text(&report.top_row)).map_err(io)?;
    writeln!(out, "multiple: {}", report.multiple).map_err(io)?;
    Ok(code)
}

fn cmd_basis_in(dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let load = |name: &str| match read_matrix_file(&dir.join(name))? {
        AnyMatrix::Gf41(m) => Ok(m),
        AnyMatrix::Cyc(_) => Err(Error::Parse(format!("{name}: expected a gf41 matrix"))),
    };
    let [f1, f2, d, ac, eprime] = derive_generators(load("a.mat")?, load("b.mat")?)?;
    let result = run_pipeline(&GeneratorSet { f1, f2, d, ac, eprime })?;
    for (name, m) in result.balanced.named() {
        writeln!(out, "# {name}").map_err(io)?;
        out.write_all(write_gf41(m).as_bytes()).map_err(io)?;
    }
    let top = top_row_multiset(&result.balanced.eprime);
    writeln!(out, "# top row: {}", multiset_text(&top)).map_err(io)?;
    writeln!(out, "# multiple: {}", result.multiple).map_err(io)?;
    Ok(if top == expected_top_row() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

/// Sum of |x|² over a row.
fn row_norm(m: &CycMatrix, r: usize) -> CycNum {
    m.row(r).iter().fold(CycNum::zero(), |acc, x| &acc + &(x * &x.conj()))
}

fn eprime_top_row_ok(e: &CycMatrix) -> bool {
    let mut counts: HashMap<&CycNum, usize> = HashMap::new();
    for x in e.row(0).iter().filter(|x| !x.is_zero()) {
        *counts.entry(x).or_insert(0) += 1;
    }
    let want = [
        (CycNum::from_ratio(2, 5), 2),
        (CycNum::from_ratio(1, 5), 9),
        (CycNum::from_ratio(-1, 5), 8),
    ];
    counts.len() == 3 && want.iter().all(|(v, n)| counts.get(v) == Some(n))
}

/// All checks run by `verify`, in output order.
pub fn verification_checks() -> Result<Vec<(String, bool)>> {
    let g = GeneratorSet::build();
    let mut checks: Vec<(String, bool)> = verify_relations(&g)?
        .checks
        .into_iter()
        .map(|c| (c.name, c.passed))
        .collect();

    let e = &g.eprime;
    checks.push(("e' symmetric".into(), e.is_symmetric()));
    checks.push((
        "e' rows have norm 1".into(),
        (0..e.rows()).all(|r| row_norm(e, r).is_one()),
    ));
    checks.push(("e' top row: 2/5 x2, 1/5 x9, -1/5 x8".into(), eprime_top_row_ok(e)));

    let form = dickson_form(&g)?;
    checks.push(("cubic form has 45 terms".into(), form.len() == 45));
    checks.push((
        "cubic terms satisfy the eigenvalue condition".into(),
        form.terms().iter().all(eigenvalue_check),
    ));
    let tensor = to_tensor(&form);
    for (n, m) in g.named() {
        checks.push((
            format!("cubic form invariant under {n}"),
            verify_tensor_invariance(&tensor, m),
        ));
    }
    let fixing = g.select("f1,f2,ac,eprime")?;
    checks.push((
        "f1, f2, ac, e' fix the identity vector; form value 1".into(),
        jordan_identity_check(&form, &fixing)?.passed(),
    ));
    checks.push((
        "cubic seed triples present".into(),
        seed_triples().iter().all(|s| form.terms().contains(s)),
    ));

    let residues: [(CycNum, i64); 8] = [
        (CycNum::i(), 9),
        (CycNum::z(), 16),
        (CycNum::z_pow(2), 10),
        (CycNum::z_pow(3), 37),
        (CycNum::z_pow(4), 18),
        (CycNum::sigma(), 7),
        (CycNum::tau(), 35),
        (CycNum::from_ratio(1, 5), 33),
    ];
    checks.push((
        "mod-41 images of i, z, z^2, z^3, z^4, sigma, tau, 1/5".into(),
        residues.iter().all(|(x, r)| reduce_cyc(x) == Ok(Gf41::new(*r))),
    ));

    let all = all_generators(&g);
    let orbit = enumerate_orbit(&fixed_seed(), &all, DEFAULT_ORBIT_CAP)?;
    checks.push(("orbit of (1,1,1;0^24) has 2304 points".into(), orbit.len() == 2304));
    let perms = perm_images(&orbit, &all)?;
    let full = StabChain::build(&perms).order();
    let sub = StabChain::build(&perms.subset(&[0, 1, 3, 4])).order();
    checks.push((
        "order of <f1,f2,d,ac,e'> is 17971200".into(),
        full == 17_971_200u32.into(),
    ));
    checks.push(("order of <f1,f2,ac,e'> is 7800".into(), sub == 7800u32.into()));

    let proj = proj1755_seed();
    let orbit = enumerate_orbit(&proj, &all, DEFAULT_ORBIT_CAP)?;
    checks.push((
        "projective orbit of (0,0,0;0^4;i,1,-1,-i;0^16) has 1755 points".into(),
        orbit.len() == 1755,
    ));
    let perms = perm_images(&orbit, &all)?;
    checks.push((
        "stabilizer of the 1755 seed has order 10240".into(),
        StabChain::build(&perms).stabilizer_order(1) == 10240u32.into(),
    ));
    checks.push(("d fixes the 1755 seed".into(), scalar_character(&proj, &g.d)?.is_one()));
    let c = scalar_character(&proj, &g.ac.pow(3)?)?;
    checks.push((
        "(ac)^3 scales the 1755 seed by a power of i".into(),
        (0..4).any(|k| c == CycNum::i().pow(k)),
    ));

    let report = selftest(&g.reduce()?, &[1])?;
    checks.push(("mod-41 basis search recovers the monomial form".into(), report.passed()));
    Ok(checks)
}

fn cmd_verify(out: &mut dyn Write) -> Result<i32> {
    print_table(&verification_checks()?, out)
}
