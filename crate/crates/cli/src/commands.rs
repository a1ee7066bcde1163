use std::error::Error as StdError;
use std::fs;
use std::io::Read;
use std::path::Path;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use latmat::enumeration::{enumerate_meet_semilattices, filter_min_cover, SemilatticeCatalog};
use latmat::exec::configure_threads;
use latmat::invertibility::{invertibility_report, meet_side_report, Verdict};
use latmat::lattice::{divisor_subposet, Valuation, ValuedSet};
use latmat::matrix::{
    det_meet_via_convolution, determinant, factorize_join, join_matrix, meet_matrix, RationalMatrix,
};
use latmat::numtheory::{
    class_inequality_instance, parse_params, search_singular, unchecked_expression,
    verify_counterexample, InequalityClass, SearchTemplate,
};
use latmat::poset::{canonicalize, IncidenceFunction, Poset, PosetJson};
use latmat::rational::{format_rational, parse_positive};
use latmat::reproduce::{run_all, run_criterion};
use latmat::{Error, Execution};

use crate::args::{
    Cli, Command, CounterexampleCommand, MatrixCommand, PosetCommand, Route, SetArg, Side,
};

type CmdResult = Result<u8, Box<dyn StdError>>;

fn read_input(path: &Path) -> Result<String, Box<dyn StdError>> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
    }
}

fn read_poset(path: &Path) -> Result<Poset, Box<dyn StdError>> {
    let json: PosetJson = serde_json::from_str(&read_input(path)?)?;
    Ok(Poset::from_json(&json)?)
}

fn parse_ints(items: &[String]) -> Result<Vec<BigUint>, Error> {
    items.iter().map(|s| parse_positive(s)).collect()
}

fn read_set(arg: &SetArg) -> Result<ValuedSet, Box<dyn StdError>> {
    match (&arg.file, &arg.elements) {
        (Some(path), _) => Ok(ValuedSet::from_json_str(&read_input(path)?)?),
        (None, Some(items)) => Ok(ValuedSet::divisor(
            &parse_ints(items)?,
            Valuation::parse(&arg.f)?,
        )?),
        (None, None) => Err("pass --set FILE or --elements".into()),
    }
}

struct Output {
    pretty: bool,
}

impl Output {
    fn json<T: Serialize>(&self, value: &T) -> Result<(), Box<dyn StdError>> {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)?
        } else {
            serde_json::to_string(value)?
        };
        println!("{text}");
        Ok(())
    }

    fn matrix(&self, m: &RationalMatrix) -> Result<(), Box<dyn StdError>> {
        if self.pretty {
            print!("{m}");
            Ok(())
        } else {
            self.json(&m.to_json())
        }
    }
}

fn execution(threads: Option<usize>) -> Execution {
    match threads {
        Some(1) => Execution::Sequential,
        Some(k) if k > 1 => {
            configure_threads(k);
            Execution::Parallel
        }
        _ => Execution::Parallel,
    }
}

pub fn run(cli: Cli) -> CmdResult {
    let out = Output { pretty: cli.pretty };
    let exec = execution(cli.threads);
    match cli.command {
        Command::Poset(PosetCommand::Validate { file }) => {
            let p = read_poset(&file)?;
            out.json(&json!({
                "valid": true,
                "n": p.len(),
                "covers": p.covers().len(),
                "meet_semilattice": p.is_meet_semilattice(),
                "lattice": p.is_lattice(),
            }))?;
            Ok(0)
        }
        Command::Poset(PosetCommand::Show { file, dot }) => {
            let p = read_poset(&file)?;
            if dot {
                print!("{}", p.to_dot());
                Ok(0)
            } else {
                out.json(&p.to_json())?;
                Ok(0)
            }
        }
        Command::Mobius { file } => {
            let p = std::sync::Arc::new(read_poset(&file)?);
            let mu = IncidenceFunction::mobius(p.clone());
            let n = p.len();
            let rows: Vec<Vec<String>> = (0..n)
                .map(|i| (0..n).map(|j| format_rational(mu.get(i, j))).collect())
                .collect();
            let labels: Vec<String> = (0..n).map(|i| p.label(i)).collect();
            out.json(&json!({ "n": n, "labels": labels, "mu": rows }))?;
            Ok(0)
        }
        Command::Matrix(MatrixCommand::Meet { set }) => {
            out.matrix(&meet_matrix(&read_set(&set)?)?)?;
            Ok(0)
        }
        Command::Matrix(MatrixCommand::Join { set }) => {
            out.matrix(&join_matrix(&read_set(&set)?)?)?;
            Ok(0)
        }
        Command::Det { set, via, side } => {
            let vs = read_set(&set)?;
            let det = match (via, side) {
                (Route::Elimination, Side::Join) => determinant(&join_matrix(&vs)?)?,
                (Route::Elimination, Side::Meet) => determinant(&meet_matrix(&vs)?)?,
                (Route::Convolution, Side::Meet) => det_meet_via_convolution(&vs, vs.f())?.det,
                (Route::Convolution, Side::Join) => {
                    let fact = factorize_join(&vs)?;
                    let prod: latmat::Rational = fact.delta.iter().product();
                    det_meet_via_convolution(&vs, &vs.f().reciprocal())?.det * &prod * &prod
                }
            };
            println!("{}", format_rational(&det));
            Ok(0)
        }
        Command::Factorize { set } => {
            let fact = factorize_join(&read_set(&set)?)?;
            if out.pretty {
                println!(
                    "delta: {}",
                    fact.delta
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                print!("core:\n{}", fact.core);
            } else {
                let delta: Vec<String> = fact.delta.iter().map(format_rational).collect();
                out.json(&json!({ "delta": delta, "core": fact.core.to_json() }))?;
            }
            Ok(0)
        }
        Command::Invertibility { set, lenient } => {
            let vs = read_set(&set)?;
            let report = if lenient {
                meet_side_report(&vs)?
            } else {
                invertibility_report(&vs)?
            };
            out.json(&report)?;
            Ok(if report.verdict == Verdict::Singular {
                1
            } else {
                0
            })
        }
        Command::Enumerate {
            n,
            min_cover,
            count_only,
            dot_dir,
        } => {
            let mut classes = enumerate_meet_semilattices(n, exec)?;
            if let Some(k) = min_cover {
                classes = filter_min_cover(&classes, k);
            }
            if let Some(dir) = &dot_dir {
                fs::create_dir_all(dir)?;
                for (i, p) in classes.iter().enumerate() {
                    fs::write(dir.join(format!("n{n}_{i:03}.dot")), p.to_dot())?;
                }
            }
            if count_only {
                println!("{}", classes.len());
            } else {
                let catalog = SemilatticeCatalog::builtin();
                let items = classes
                    .iter()
                    .map(|p| {
                        Ok(json!({
                            "key": canonicalize(p)?.to_hex(),
                            "class": catalog.classify(p),
                            "poset": p.to_json(),
                        }))
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                out.json(&items)?;
            }
            Ok(0)
        }
        Command::Classify { file, elements } => {
            let p = match (file, elements) {
                (Some(path), _) => read_poset(&path)?,
                (None, Some(items)) => divisor_subposet(&parse_ints(&items)?)?,
                (None, None) => return Err("pass a poset file or --elements".into()),
            };
            out.json(&json!({ "class": SemilatticeCatalog::builtin().classify(&p) }))?;
            Ok(0)
        }
        Command::Counterexample(CounterexampleCommand::Verify { elements }) => {
            let r = verify_counterexample(&parse_ints(&elements)?)?;
            out.json(&r)?;
            Ok(if r.singular { 1 } else { 0 })
        }
        Command::Counterexample(CounterexampleCommand::Search {
            template,
            bound,
            atom_bound,
            limit,
            size,
        }) => {
            if template != "s38" {
                return Err(
                    Error::Param(format!("unknown template {template:?}; available: s38")).into(),
                );
            }
            let t = SearchTemplate::s38(atom_bound, bound).with_size(size);
            let hits = search_singular(&t, limit, exec)?;
            out.json(&hits)?;
            Ok(if hits.is_empty() { 0 } else { 1 })
        }
        Command::Inequality {
            class,
            params,
            top,
            unchecked,
        } => {
            let class: InequalityClass = class.parse()?;
            let params = parse_params(&params)?;
            let top = top.as_deref().map(parse_positive).transpose()?;
            if unchecked {
                let value = unchecked_expression(class, &params, top.as_ref())?;
                out.json(
                    &json!({ "class": class, "value": format_rational(&value), "checked": false }),
                )?;
            } else {
                out.json(&class_inequality_instance(class, &params, top.as_ref())?)?;
            }
            Ok(0)
        }
        Command::ReproducePaper { only } => {
            let outcomes = match only {
                Some(id) if (1..=9).contains(&id) => vec![run_criterion(id, exec)],
                Some(id) => return Err(Error::Param(format!("no criterion {id}")).into()),
                None => run_all(exec),
            };
            for o in &outcomes {
                println!(
                    "[{}] {} {} ({} ms, limit {} ms): {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.id,
                    o.name,
                    o.elapsed_ms,
                    o.limit_ms,
                    o.detail
                );
            }
            Ok(if outcomes.iter().all(|o| o.passed) {
                0
            } else {
                1
            })
        }
    }
}
