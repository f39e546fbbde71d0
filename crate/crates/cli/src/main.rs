//! Command-line front end: load posets, regions and modules from JSON,
//! apply region operations and functors, compute exact distances, and run
//! the seeded verification suites.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification
//! failure. All rationals in JSON are "p/q" strings; key order is stable,
//! so identical inputs and seeds reproduce identical bytes.

use clap::{Args, Parser, Subcommand};
use scottpersist::cell::{cosections, sections, CellModule};
use scottpersist::functors::{
    is_ephemeral, is_lower_semicontinuous, is_upper_semicontinuous, jstar_representative, l1_top,
    overline, r1_socle, scott_radical, scott_socle, scott_top, underline,
};
use scottpersist::json;
use scottpersist::metrics::{
    canonical_interleaving, check_interleaving, distance_indicator, distance_scott,
    distance_to_zero, tr_flags, DistanceResult, DistanceValue, Replacement, SuperlinearFamily,
};
use scottpersist::poset::PosetSpec;
use scottpersist::rat::{format_rat, parse_rat, FieldMode};
use scottpersist::region::{MeagerVerdict, Region};
use scottpersist::verify::{run_suite, SUITES};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scottpersist", version, about = "Exact persistence-module calculus over continuous posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region operations: interior | closure | boundary | meager | injective | contains
    Region {
        op: String,
        #[command(flatten)]
        io: Io,
        /// Point as comma-separated rationals (for `contains`)
        #[arg(long)]
        p: Option<String>,
        /// Seed for the meagerness witness search
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Module operations: eval | sections | cosections | sum | shift
    Module {
        op: String,
        #[command(flatten)]
        io: Io,
        /// Second module (for `sum`)
        #[arg(long)]
        b: Option<String>,
        /// Region file (for `sections`/`cosections`)
        #[arg(long)]
        region: Option<String>,
        /// Source point, comma-separated (for `eval`)
        #[arg(long)]
        p: Option<String>,
        /// Target point, comma-separated (for `eval`)
        #[arg(long)]
        q: Option<String>,
        /// Translation direction, comma-separated (for `shift`)
        #[arg(long)]
        v: Option<String>,
        /// Translation amount as a rational (for `shift`)
        #[arg(long)]
        eps: Option<String>,
    },
    /// Apply a functor: overline | underline | soc | rad | top | r1soc | l1top |
    /// ephemeral | semicont | jstar. Input may be a module, region or
    /// convex-region file; regions are replaced by their indicator modules.
    Functor {
        name: String,
        #[command(flatten)]
        io: Io,
    },
    /// Metric operations: tr | certify | distance | distance0
    Distance {
        #[arg(default_value = "distance")]
        op: String,
        /// First operand (region or module file)
        #[arg(long)]
        a: Option<String>,
        /// Second operand (region or module file)
        #[arg(long)]
        b: Option<String>,
        #[command(flatten)]
        io: Io,
        /// Translation direction, comma-separated rationals
        #[arg(long)]
        v: Option<String>,
        /// Interleaving amount as a rational (for `certify`)
        #[arg(long)]
        eps: Option<String>,
        /// Replacement used for the canonical certificate: overline | underline
        #[arg(long, default_value = "overline")]
        replacement: String,
        /// Externally supplied certificate to validate instead
        #[arg(long)]
        cert: Option<String>,
    },
    /// Run a seeded verification suite (or `all`)
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct Io {
    /// Input file
    #[arg(long = "in")]
    input: Option<String>,
    /// Output file (defaults to stdout)
    #[arg(long)]
    out: Option<String>,
}

enum AppError {
    Usage(String),
    Domain(String),
    Verification,
}

impl From<scottpersist::Error> for AppError {
    fn from(e: scottpersist::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    // fail fast on a malformed field selection
    if let Err(e) = FieldMode::from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Verification) => ExitCode::from(3),
    }
}

fn read_json(path: &str) -> Result<Value, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| AppError::Usage(format!("{path}: invalid JSON: {e}")))
}

fn required<'a>(opt: &'a Option<String>, flag: &str) -> Result<&'a str, AppError> {
    opt.as_deref().ok_or_else(|| AppError::Usage(format!("missing required flag --{flag}")))
}

fn emit(out: &Option<String>, value: &Value) -> Result<(), AppError> {
    let text = format!("{}\n", serde_json::to_string_pretty(value).unwrap());
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Usage(format!("cannot write {path}: {e}"))),
    }
}

/// A module file has a "dim" key; a plain region has "kind"; a convex region
/// has "outer". Regions are loaded as their indicator modules.
fn load_module(path: &str) -> Result<CellModule, AppError> {
    let v = read_json(path)?;
    if v.get("dim").is_some() {
        Ok(json::module_from_value(&v)?)
    } else {
        Ok(json::indicator_from_value(&v)?)
    }
}

fn load_family(v: &Option<String>, dim: usize) -> Result<SuperlinearFamily, AppError> {
    match v {
        Some(csv) => Ok(SuperlinearFamily::new(json::point_from_csv(csv)?)?),
        None => Ok(SuperlinearFamily::new(scottpersist::poset::Point(vec![
            scottpersist::rat::rat_int(1);
            dim
        ]))?),
    }
}

fn distance_value_json(d: &DistanceValue) -> Value {
    match d {
        DistanceValue::Finite(r) => json!({ "d": format_rat(r) }),
        DistanceValue::Infinite => json!({ "d": "inf" }),
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Region { op, io, p, seed } => {
            let input = read_json(required(&io.input, "in")?)?;
            let value = match op.as_str() {
                "interior" | "closure" => {
                    let r = json::region_from_value(&input)?;
                    let out = match (&r, op.as_str()) {
                        (Region::Up(u), "interior") => Region::Up(u.interior()?),
                        (Region::Up(u), _) => Region::Up(u.closure()?),
                        (Region::Down(d), "interior") => Region::Down(d.interior()?),
                        (Region::Down(d), _) => Region::Down(d.closure()?),
                    };
                    json::region_to_value(&out)
                }
                "boundary" => {
                    let r = json::region_from_value(&input)?;
                    json::convex_region_to_value(&r.boundary()?)
                }
                "meager" => {
                    let r = if input.get("outer").is_some() {
                        json::convex_region_from_value(&input)?
                    } else {
                        json::region_from_value(&input)?.boundary()?
                    };
                    match r.is_meager(seed, 1000)? {
                        MeagerVerdict::Meager { certificate } => {
                            json!({ "meager": true, "certificate": certificate })
                        }
                        MeagerVerdict::NotMeager { witness } => json!({
                            "meager": false,
                            "witness": [json::point_to_value(&witness.0), json::point_to_value(&witness.1)],
                        }),
                        MeagerVerdict::Unknown => json!({ "meager": null }),
                    }
                }
                "injective" => match json::region_from_value(&input)? {
                    Region::Down(d) => json!({ "result": d.is_injective_indicator_region()? }),
                    Region::Up(_) => {
                        return Err(AppError::Domain(
                            "injective-indicator test applies to down-sets".into(),
                        ))
                    }
                },
                "contains" => {
                    let r = json::region_from_value(&input)?;
                    let pt = json::point_from_csv(required(&p, "p")?)?;
                    json!({ "result": r.contains(&pt)? })
                }
                other => return Err(AppError::Usage(format!("unknown region op {other:?}"))),
            };
            emit(&io.out, &value)
        }
        Command::Module { op, io, b, region, p, q, v, eps } => {
            let m = load_module(required(&io.input, "in")?)?;
            let value = match op.as_str() {
                "eval" => {
                    let pp = json::point_from_csv(required(&p, "p")?)?;
                    let qq = json::point_from_csv(required(&q, "q")?)?;
                    json::matrix_to_value(&m.eval_map(&pp, &qq)?)
                }
                "sections" => {
                    let r = json::region_from_value(&read_json(required(&region, "region")?)?)?;
                    match r {
                        Region::Up(u) => {
                            let s = sections(&m, &u)?;
                            json!({ "dim": s.dim, "stalk_dims": s.stalk_dims })
                        }
                        Region::Down(_) => {
                            return Err(AppError::Domain("sections need an up-set region".into()))
                        }
                    }
                }
                "cosections" => {
                    let r = json::region_from_value(&read_json(required(&region, "region")?)?)?;
                    match r {
                        Region::Down(d) => json!({ "dim": cosections(&m, &d)? }),
                        Region::Up(_) => {
                            return Err(AppError::Domain("cosections need a down-set region".into()))
                        }
                    }
                }
                "sum" => {
                    let other = load_module(required(&b, "b")?)?;
                    json::module_to_value(&m.direct_sum(&other)?)
                }
                "shift" => {
                    let vv = json::point_from_csv(required(&v, "v")?)?;
                    let ee = parse_rat(required(&eps, "eps")?)?;
                    json::module_to_value(&m.shift(&vv, &ee)?)
                }
                other => return Err(AppError::Usage(format!("unknown module op {other:?}"))),
            };
            emit(&io.out, &value)
        }
        Command::Functor { name, io } => {
            let m = load_module(required(&io.input, "in")?)?;
            let value = match name.as_str() {
                "overline" => json::module_to_value(&overline(&m)?.output),
                "underline" => json::module_to_value(&underline(&m)?.output),
                "soc" => json::module_to_value(&scott_socle(&m)?.output),
                "rad" => json::module_to_value(&scott_radical(&m)?.output),
                "top" => json::module_to_value(&scott_top(&m)?.output),
                "r1soc" => json::module_to_value(&r1_socle(&m)?),
                "l1top" => json::module_to_value(&l1_top(&m)?),
                "jstar" => json::module_to_value(&jstar_representative(&m)?),
                "ephemeral" => json!({ "result": is_ephemeral(&m)? }),
                "semicont" => json!({
                    "upper": is_upper_semicontinuous(&m)?,
                    "lower": is_lower_semicontinuous(&m)?,
                }),
                other => return Err(AppError::Usage(format!("unknown functor {other:?}"))),
            };
            emit(&io.out, &value)
        }
        Command::Distance { op, a, b, io, v, eps, replacement, cert } => {
            let value = match op.as_str() {
                "tr" => {
                    let vv = json::point_from_csv(required(&v, "v")?)?;
                    let poset = match &io.input {
                        Some(path) => json::poset_from_value(&read_json(path)?)?,
                        None => PosetSpec::RnStandard(vv.dim()),
                    };
                    let fam = SuperlinearFamily::new(vv)?;
                    let flags = tr_flags(&fam, &poset)?;
                    json!({ "tr1": flags.tr1, "tr2": flags.tr2, "tr3": flags.tr3, "notes": flags.notes })
                }
                "distance" => {
                    let va = read_json(required(&a, "a")?)?;
                    let vb = read_json(required(&b, "b")?)?;
                    if va.get("dim").is_some() || vb.get("dim").is_some() {
                        let (ma, mb) = (load_module(required(&a, "a")?)?, load_module(required(&b, "b")?)?);
                        let fam = load_family(&v, ma.complex.dim)?;
                        match distance_scott(&ma, &mb, &fam)? {
                            DistanceResult::Finite(r) => json!({ "d": format_rat(&r) }),
                            DistanceResult::Infinite => json!({ "d": "inf" }),
                            DistanceResult::NotComputable(reason) => {
                                json!({ "d": null, "reason": reason })
                            }
                        }
                    } else {
                        let ra = json::region_from_value(&va)?;
                        let rb = json::region_from_value(&vb)?;
                        let fam = load_family(&v, ra.poset().dim())?;
                        distance_value_json(&distance_indicator(&ra, &rb, &fam)?)
                    }
                }
                "distance0" => {
                    let m = load_module(required(&io.input, "in")?)?;
                    let fam = load_family(&v, m.complex.dim)?;
                    distance_value_json(&distance_to_zero(&m, &fam)?)
                }
                "certify" => {
                    let m = load_module(required(&a, "a")?)?;
                    let fam = load_family(&v, m.complex.dim)?;
                    match &cert {
                        Some(path) => {
                            let n = load_module(required(&b, "b")?)?;
                            let c = json::certificate_from_value(&read_json(path)?)?;
                            json!({ "valid": check_interleaving(&m, &n, &fam, &c)? })
                        }
                        None => {
                            let which = match replacement.as_str() {
                                "overline" => Replacement::Overline,
                                "underline" => Replacement::Underline,
                                other => {
                                    return Err(AppError::Usage(format!(
                                        "unknown replacement {other:?}"
                                    )))
                                }
                            };
                            let ee = parse_rat(required(&eps, "eps")?)?;
                            let c = canonical_interleaving(&m, which, &ee, &fam)?;
                            let other = match which {
                                Replacement::Overline => overline(&m)?.output,
                                Replacement::Underline => underline(&m)?.output,
                            };
                            let valid = check_interleaving(&m, &other, &fam, &c)?;
                            json!({ "valid": valid, "certificate": json::certificate_to_value(&c) })
                        }
                    }
                }
                other => return Err(AppError::Usage(format!("unknown distance op {other:?}"))),
            };
            emit(&io.out, &value)
        }
        Command::Verify { suite, seed, cases, out } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(AppError::Usage(format!(
                    "unknown suite {suite:?}; available: {}",
                    SUITES.join(", ")
                )));
            };
            let mut all_pass = true;
            let mut reports = Vec::new();
            for name in names {
                let report = run_suite(name, seed, cases)?;
                all_pass &= report.passed();
                reports.push(report.to_json());
            }
            let value = if reports.len() == 1 { reports.pop().unwrap() } else { Value::Array(reports) };
            emit(&out, &value)?;
            if all_pass {
                Ok(())
            } else {
                Err(AppError::Verification)
            }
        }
    }
}
