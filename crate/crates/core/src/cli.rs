//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::brauer::{brauer_reps, eval_invariant, WeightedPoint};
use crate::divisor::{BiForm22, DerivedSurfaces, DoubleSexticSurface, QuadricSextet};
use crate::error::{Error, Result};
use crate::local::{hilbert_symbol, invariant_of_symbol, Place, DEFAULT_PRECISION};
use crate::pipeline::{
    bad_primes_block, derive_certificate, parse_prime_list, parse_table, reproduce, run_verdict, smoothness_block,
    verify_table, Block, Certificate, Format, VerdictOptions, TRIAL_BOUND,
};
use crate::points::{find_local_point, find_rational_points, verify_local_point, SearchConfig, WEIL_THRESHOLD};
use crate::poly::parse::parse_integer_list;
use crate::smoothness::{bad_prime_candidates, is_smooth_sextic};
use crate::sod::{expected_residual, identity_check};
use crate::ZPoly;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "twistk3",
    version,
    about = "Brauer-Manin computations on twisted K3 double sextics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output style.
    #[arg(long, value_enum, default_value_t = FormatArg::Human, global = true)]
    pub format: FormatArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Human,
    Certificate,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Certificate => Format::Certificate,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    /// A (2,2) divisor file.
    #[arg(long)]
    pub divisor: Option<PathBuf>,
    /// A divisor file or a `w^2 = <sextic>` file.
    #[arg(long)]
    pub surface: Option<PathBuf>,
    /// Which surface of a divisor: 1 (x side) or 2 (y side).
    #[arg(long, default_value_t = 1)]
    pub side: u8,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the double-sextic equations and discriminant curves.
    Derive {
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Decide smoothness of the branch sextic over Q.
    Smooth {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Certify the primes of bad reduction.
    Badprimes {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Trial-division bound.
        #[arg(long, default_value_t = TRIAL_BOUND)]
        bound: u64,
        /// File of additional primes, one per line.
        #[arg(long)]
        extra_primes: Option<PathBuf>,
    },
    /// Search for points over Q_p, R or Q.
    Search {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// A prime, `real`, or `rational`.
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = 4)]
        height: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Check this triple instead of searching.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Evaluate the Brauer class at a point.
    Invariants {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        place: String,
    },
    /// Full obstruction pipeline for the first surface of a divisor.
    Verdict {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        extra_primes: Option<PathBuf>,
        /// Local points to try before searching (`p x0 x1 x2` rows).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        height: u64,
        #[arg(long, default_value_t = TRIAL_BOUND)]
        bound: u64,
    },
    /// Re-verify a table of local points on the first surface.
    VerifyTable {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
    /// Replay the mutations of the two decompositions.
    SodCheck,
    /// Run everything on the bundled divisor.
    ReproducePaper {
        /// Restrict to the examples at these places (`2`, `real`).
        #[arg(long)]
        place: Vec<String>,
        #[arg(long, default_value_t = 4)]
        height: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Hilbert symbol (a, b)_v of two rationals.
    Symbol {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// A prime or `real`.
        v: String,
    },
}

/// Outcome of a command: rendered output and whether its checks passed.
pub struct Outcome {
    pub certificate: Certificate,
    pub pass: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {}", path.display(), e)))
}

fn load_divisor(path: &Path) -> Result<BiForm22> {
    BiForm22::parse(&read(path)?)
}

fn side_of(side: u8) -> Result<crate::divisor::Side> {
    match side {
        1 => Ok(crate::divisor::Side::X),
        2 => Ok(crate::divisor::Side::Y),
        _ => Err(Error::invalid("--side must be 1 or 2")),
    }
}

struct Surface {
    name: String,
    g: ZPoly,
    sextet: Option<QuadricSextet>,
}

fn load_surface(args: &SurfaceArgs) -> Result<Surface> {
    let path = match (&args.divisor, &args.surface) {
        (Some(p), None) | (None, Some(p)) => p,
        (Some(_), Some(_)) => return Err(Error::invalid("give only one of --divisor and --surface")),
        (None, None) => return Err(Error::invalid("--divisor or --surface is required")),
    };
    let text = read(path)?;
    let side = side_of(args.side)?;
    if args.surface.is_some() && (text.contains("w^2") || !text.contains(':')) {
        let s = DoubleSexticSurface::parse(&text)?;
        return Ok(Surface {
            name: "X".into(),
            g: s.g,
            sextet: None,
        });
    }
    let d = DerivedSurfaces::from_divisor(&BiForm22::parse(&text)?)?;
    let (q, s) = d.side(side);
    Ok(Surface {
        name: format!("X{}", args.side),
        g: s.g.clone(),
        sextet: Some(q.clone()),
    })
}

fn parse_point(text: &str) -> Result<[BigInt; 3]> {
    let v = parse_integer_list(text, 1)?;
    <[BigInt; 3]>::try_from(v).map_err(|_| Error::invalid("a point needs three integer coordinates"))
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let r = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad rational '{}'", t)))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad rational '{}'", t)))?;
            if d == BigInt::from(0) {
                return Err(Error::invalid("zero denominator"));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(t.parse().map_err(|_| Error::invalid(format!("bad rational '{}'", t)))?),
    };
    Ok(r)
}

fn single(block: Block, pass: bool) -> Outcome {
    Outcome {
        certificate: Certificate { blocks: vec![block] },
        pass,
    }
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Derive { divisor } => {
            let d = DerivedSurfaces::from_divisor(&load_divisor(divisor)?)?;
            Ok(Outcome {
                certificate: derive_certificate(&d),
                pass: true,
            })
        }
        Command::Smooth { surface } => {
            let s = load_surface(surface)?;
            let c = is_smooth_sextic(&crate::poly::to_rational(&s.g))?;
            Ok(single(smoothness_block(&s.name, &c), c.smooth()))
        }
        Command::Badprimes {
            surface,
            bound,
            extra_primes,
        } => {
            let s = load_surface(surface)?;
            let extra = match extra_primes {
                Some(p) => parse_prime_list(&read(p)?)?,
                None => Vec::new(),
            };
            let r = bad_prime_candidates(&s.g, *bound, &extra)?;
            Ok(single(bad_primes_block(&s.name, &r), true))
        }
        Command::Search {
            surface,
            place,
            height,
            precision,
            point,
        } => {
            let s = load_surface(surface)?;
            let config = SearchConfig {
                height_bound: *height,
                padic_precision: *precision,
                prime_enumeration_bound: WEIL_THRESHOLD,
            };
            config.validate()?;
            let mut b = Block::new(&format!("search {}", s.name));
            if place == "rational" {
                if let Some(pt) = point {
                    let pt = WeightedPoint::new(parse_point(pt)?, &s.g)?;
                    let ok = !pt.wsq.is_negative_value() && crate::ntheory::is_perfect_square(&pt.wsq);
                    b.push("point", &pt).push("rational", ok);
                    return Ok(single(b, ok));
                }
                let pts = find_rational_points(&s.g, &config)?;
                b.push("height", height).push("count", pts.len());
                for p in &pts {
                    b.push("point", p);
                }
                return Ok(single(b, true));
            }
            let place: Place = place.parse()?;
            b.push("place", &place);
            let found = match point {
                Some(pt) => verify_local_point(&s.g, parse_point(pt)?, &place)?,
                None => match find_local_point(&s.g, &place, &config) {
                    Ok(p) => Some(p),
                    Err(Error::NotFound(_)) => None,
                    Err(e) => return Err(e),
                },
            };
            match &found {
                Some(p) => b.push("point", p),
                None => b.push("point", "none found"),
            };
            Ok(single(b, found.is_some()))
        }
        Command::Invariants { surface, point, place } => {
            let s = load_surface(surface)?;
            let q = s
                .sextet
                .ok_or_else(|| Error::invalid("invariants need a divisor (for the quadrics)"))?;
            let place: Place = place.parse()?;
            let pt = WeightedPoint::new(parse_point(point)?, &s.g)?;
            let ev = eval_invariant(&brauer_reps(&q), &pt, &place)?;
            let mut b = Block::new(&format!("invariant {}", s.name));
            b.push("point", &pt)
                .push("place", &place)
                .push("representative", ev.rep)
                .push("entries", format!("{}, {}", ev.left, ev.right))
                .push("symbol", ev.symbol)
                .push("invariant", ev.invariant)
                .push("agreeing_representatives", ev.agreeing);
            Ok(single(b, true))
        }
        Command::Verdict {
            divisor,
            extra_primes,
            table,
            height,
            bound,
        } => {
            let z = load_divisor(divisor)?;
            let mut opts = VerdictOptions {
                trial_bound: *bound,
                config: SearchConfig {
                    height_bound: *height,
                    ..Default::default()
                },
                ..Default::default()
            };
            if let Some(p) = extra_primes {
                opts.extra_primes = parse_prime_list(&read(p)?)?;
            }
            if let Some(t) = table {
                for row in parse_table(&read(t)?) {
                    let row = row?;
                    opts.hints.push((row.place, row.coords));
                }
            }
            let run = run_verdict(&z, &opts)?;
            Ok(Outcome {
                certificate: run.certificate(),
                pass: true,
            })
        }
        Command::VerifyTable { divisor, table } => {
            let d = DerivedSurfaces::from_divisor(&load_divisor(divisor)?)?;
            let text = read(table)?;
            let (b, ok) = verify_table(&d, &text);
            Ok(single(b, ok))
        }
        Command::SodCheck => {
            let c = identity_check()?;
            let mut b = Block::new("sod-check");
            for (name, t) in [("decomposition_1", &c.first), ("decomposition_2", &c.second)] {
                for (i, step) in t.steps.iter().enumerate() {
                    b.push(&format!("{}_step{}", name, i), step);
                }
                let res: Vec<String> = t.residual.iter().map(|p| p.to_string()).collect();
                b.push(&format!("{}_residual", name), res.join(", "));
            }
            let ok = c.agree && c.first.residual == expected_residual();
            b.push("agree", ok);
            Ok(single(b, ok))
        }
        Command::ReproducePaper {
            place,
            height,
            precision,
        } => {
            let places = place.iter().map(|p| p.parse()).collect::<Result<Vec<Place>>>()?;
            let config = SearchConfig {
                height_bound: *height,
                padic_precision: *precision,
                ..Default::default()
            };
            let (certificate, pass) = reproduce(&places, &config)?;
            Ok(Outcome { certificate, pass })
        }
        Command::Symbol { a, b, v } => {
            let (a, b) = (parse_rational(a)?, parse_rational(b)?);
            let place: Place = v.parse()?;
            let s = hilbert_symbol(&a, &b, &place)?;
            let mut blk = Block::new("symbol");
            blk.push("a", &a)
                .push("b", &b)
                .push("place", &place)
                .push("symbol", s)
                .push("invariant", invariant_of_symbol(s));
            Ok(single(blk, true))
        }
    }
}

trait NegativeValue {
    fn is_negative_value(&self) -> bool;
}

impl NegativeValue for BigInt {
    fn is_negative_value(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
}

/// Exit code for an error: 2 for bad input, 1 for failed computations.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::IntegralityViolation(_) | Error::NotPIntegral { .. } => {
            EXIT_INPUT
        }
        _ => EXIT_FAIL,
    }
}

/// Runs the parsed command, printing to stdout/stderr; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", out.certificate.render(cli.format.into()));
            if out.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code(&e)
        }
    }
}
