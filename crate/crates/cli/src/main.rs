use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ufmvt::analytic::main_term::{main_term_coeffs, residue_principal, FullMainTerm};
use ufmvt::analytic::special::{
    gamma_brent_mcmillan, gamma_euler_maclaurin, zeta_prime_over_zeta_at_2, zeta_prime_with_cutoff,
};
use ufmvt::analytic::{constant_c, euler_gamma, zeta_prime_2};
use ufmvt::arith::{self, for_each_divisor};
use ufmvt::characters::{
    char_sum_l1, elementary_char_sum, s_via_characters, verify_orthogonality, CharacterGroup, L1Mode,
};
use ufmvt::counting::{r_bruteforce, r_divisor_method, r_k_bruteforce, s_direct, s_sieve, u_direct};
use ufmvt::experiments::{delta_scan_with, fit_log_poly, write_csv};
use ufmvt::Error;

#[derive(Parser)]
#[command(name = "ufmvt", version, about = "Counts of a/n = 1/x + 1/y and their averages")]
struct Cli {
    /// Annotated output instead of bare values.
    #[arg(long, global = true)]
    human: bool,
    /// Worker threads for parallel paths (default: all cores).
    #[arg(long, global = true, env = "UFMVT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// R(n;a): ordered pairs (x, y) with a/n = 1/x + 1/y.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, value_enum, default_value_t = CountMethod::Divisor)]
        method: CountMethod,
    },
    /// S(N;a) or T(N;a).
    Sum {
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, value_enum, default_value_t = SumMethod::Sieve)]
        method: SumMethod,
        #[arg(long, value_enum, default_value_t = Kind::S)]
        kind: Kind,
    },
    /// U(N).
    U {
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Constants and main-term coefficients as key=value lines.
    Constants {
        #[arg(long, default_value_t = 1)]
        a: u64,
    },
    /// Principal residue and full main term of S(N;a).
    Residue {
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, value_enum, default_value_t = L1)]
        l1: L1,
    },
    /// CSV of S(N;a) against the main terms.
    Scan {
        #[arg(long)]
        a: u64,
        /// Comma-separated N values; `2^k` and ranges `2^lo..2^hi` allowed.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = L1)]
        l1: L1,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Least-squares fit of value/N in powers of log N, as JSON.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        /// CSV column holding the values.
        #[arg(long, default_value = "S_exact")]
        column: String,
    },
    /// Character group of a; with --verify, runs the identity checks.
    Chars {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long = "N", default_value_t = 1000)]
        big_n: u64,
    },
    /// R_k(n;a): ordered k-tuples with a/n = 1/x₁ + … + 1/x_k.
    Rk {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMethod {
    Brute,
    Divisor,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumMethod {
    Direct,
    Sieve,
    Chars,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "S")]
    S,
    #[value(name = "T")]
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum L1 {
    Exact,
    Truncated,
}

const L1: L1 = L1::Exact;

impl From<L1> for L1Mode {
    fn from(m: L1) -> Self {
        match m {
            L1::Exact => L1Mode::Exact,
            L1::Truncated => L1Mode::Truncated,
        }
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Fixed-point rendering with 12 significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn err3(x: f64) -> String {
    format!("{x:.3e}")
}

struct Out {
    human: bool,
    w: BufWriter<io::Stdout>,
}

impl Out {
    fn value(&mut self, label: &str, v: impl std::fmt::Display) -> io::Result<()> {
        if self.human {
            writeln!(self.w, "{label} = {v}")
        } else {
            writeln!(self.w, "{v}")
        }
    }

    fn pair(&mut self, key: &str, v: impl std::fmt::Display) -> io::Result<()> {
        if self.human {
            writeln!(self.w, "{key:<24} {v}")
        } else {
            writeln!(self.w, "{key}={v}")
        }
    }
}

fn s_with(method: SumMethod, big_n: u64, a: u64) -> ufmvt::Result<u64> {
    match method {
        SumMethod::Direct => s_direct(big_n, a),
        SumMethod::Sieve => s_sieve(big_n, a),
        SumMethod::Chars => s_via_characters(big_n, a),
    }
}

fn parse_term(t: &str) -> Result<u64, String> {
    let t = t.trim();
    match t.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|_| format!("bad grid entry {t:?}"))?;
            let e: u32 = e.parse().map_err(|_| format!("bad grid entry {t:?}"))?;
            b.checked_pow(e).ok_or_else(|| format!("grid entry {t:?} overflows"))
        }
        None => t.parse().map_err(|_| format!("bad grid entry {t:?}")),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<u64>, String> {
    let mut grid = Vec::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (lo.trim(), hi.trim());
                match (lo.split_once('^'), hi.split_once('^')) {
                    (Some((b1, e1)), Some((b2, e2))) if b1 == b2 => {
                        let base = parse_term(&format!("{b1}^1"))?;
                        let e1: u32 = e1.parse().map_err(|_| format!("bad range {part:?}"))?;
                        let e2: u32 = e2.parse().map_err(|_| format!("bad range {part:?}"))?;
                        for e in e1..=e2 {
                            grid.push(base.checked_pow(e).ok_or_else(|| format!("range {part:?} overflows"))?);
                        }
                    }
                    _ => {
                        let (lo, hi) = (parse_term(lo)?, parse_term(hi)?);
                        grid.extend(lo..=hi);
                    }
                }
            }
            None => grid.push(parse_term(part)?),
        }
    }
    Ok(grid)
}

fn run(cli: Cli) -> Outcome {
    let mut out = Out {
        human: cli.human,
        w: BufWriter::new(io::stdout()),
    };
    match cli.command {
        Command::Count { n, a, method } => {
            let r = match method {
                CountMethod::Brute => r_bruteforce(n, a)?,
                CountMethod::Divisor => {
                    if n == 0 || a == 0 {
                        return Err(Error::Domain("n and a must be positive".into()).into());
                    }
                    r_divisor_method(&arith::factorize(n)?, a)?
                }
            };
            out.value(&format!("R({n};{a})"), r)?;
        }
        Command::Sum { big_n, a, method, kind } => {
            let v = match kind {
                Kind::S => s_with(method, big_n, a)?,
                Kind::T => {
                    if a == 0 {
                        return Err(Error::Domain("a must be positive".into()).into());
                    }
                    let mut ds = Vec::new();
                    for_each_divisor(arith::factorize(a)?.factors(), |d| ds.push(d));
                    let mut total = 0u64;
                    for d in ds {
                        if big_n / d > 0 {
                            total += s_with(method, big_n / d, a / d)?;
                        }
                    }
                    total
                }
            };
            let name = match kind {
                Kind::S => "S",
                Kind::T => "T",
            };
            out.value(&format!("{name}({big_n};{a})"), v)?;
        }
        Command::U { big_n } => {
            out.value(&format!("U({big_n})"), u_direct(big_n)?)?;
        }
        Command::Constants { a } => {
            let gamma = euler_gamma()?;
            let gamma_err = (gamma_euler_maclaurin(200) - gamma_brent_mcmillan(12)).abs().max(f64::EPSILON * gamma);
            let zp = zeta_prime_2()?;
            let zp_err = (zeta_prime_with_cutoff(2.0, 20) - zp).abs().max(f64::EPSILON * zp.abs());
            let c = constant_c()?;
            let m = main_term_coeffs(a)?;
            out.pair("gamma", sig12(gamma))?;
            out.pair("gamma_err", err3(gamma_err))?;
            out.pair("zeta_prime_2", sig12(zp))?;
            out.pair("zeta_prime_2_err", err3(zp_err))?;
            out.pair("zeta_prime_over_zeta_2", sig12(zeta_prime_over_zeta_at_2()?))?;
            out.pair("C", sig12(c.value))?;
            out.pair("C_err", err3(c.error_estimate))?;
            out.pair("a", a)?;
            out.pair("A", sig12(m.leading))?;
            out.pair("c1", sig12(m.c1))?;
            out.pair("c1_residue", sig12(m.c1_residue))?;
            out.pair("c0_explicit", sig12(m.c0_explicit))?;
        }
        Command::Residue { big_n, a, l1 } => {
            let res = residue_principal(big_n, a)?;
            let full = FullMainTerm::new(a, l1.into())?.evaluate(big_n)?;
            out.pair("residue_principal", sig12(res))?;
            out.pair("main_term_full", sig12(full))?;
        }
        Command::Scan { a, grid, l1, output } => {
            let grid = parse_grid(&grid).map_err(Failure::Usage)?;
            let records = delta_scan_with(a, &grid, l1.into())?;
            match output {
                Some(path) => write_csv(BufWriter::new(File::create(path)?), &records)?,
                None => write_csv(&mut out.w, &records)?,
            }
        }
        Command::Fit { input, degree, column } => {
            let mut rdr = csv::Reader::from_path(&input)
                .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let headers = rdr.headers().map_err(|e| Failure::Usage(e.to_string()))?.clone();
            let find = |name: &str| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Failure::Usage(format!("column {name:?} not in {}", input.display())))
            };
            let (ni, vi) = (find("N")?, find(&column)?);
            let mut points = Vec::new();
            for rec in rdr.records() {
                let rec = rec.map_err(|e| Failure::Usage(e.to_string()))?;
                let parse = |i: usize| {
                    rec[i]
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| Failure::Usage(format!("not a number: {:?}", &rec[i])))
                };
                points.push((parse(ni)?, parse(vi)?));
            }
            let fit = fit_log_poly(&points, degree)?;
            let text = serde_json::to_string_pretty(&fit).expect("fit serializes");
            writeln!(out.w, "{text}")?;
        }
        Command::Chars { a, verify, big_n } => {
            let group = CharacterGroup::build(a)?;
            out.pair("modulus", a)?;
            out.pair("phi", group.size())?;
            out.pair("exponent", group.exponent())?;
            let gens: Vec<String> = group
                .generators()
                .iter()
                .map(|(g, o)| format!("{g}:{o}"))
                .collect();
            out.pair("generators", gens.join(","))?;
            if a >= 3 {
                out.pair("char_sum_L1", sig12(char_sum_l1(a)?))?;
                out.pair("elementary_char_sum", sig12(elementary_char_sum(a)?))?;
            }
            if verify {
                verify_orthogonality(&group)?;
                out.pair("orthogonality", "ok")?;
                let chars = s_via_characters(big_n, a)?;
                let direct = s_direct(big_n, a)?;
                if chars != direct {
                    return Err(Error::Consistency(format!(
                        "S({big_n};{a}): characters give {chars}, direct count {direct}"
                    ))
                    .into());
                }
                out.pair("s_via_characters", chars)?;
                out.pair("s_direct", direct)?;
            }
        }
        Command::Rk { n, a, k } => {
            out.value(&format!("R_{k}({n};{a})"), r_k_bruteforce(n, a, k)?)?;
        }
    }
    out.w.flush()?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) => 2,
        Error::ResourceGuard { .. } => 3,
        Error::Consistency(_) | Error::Precision(_) | Error::Singular(_) => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
