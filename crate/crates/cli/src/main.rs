use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dp1lines::hasse::{hasse_covers, pair_matching};
use dp1lines::pin::{admissible_with_bases, line_counts};
use dp1lines::real::{catalog, catalog_entry, real_roots, CATALOG_VERSION};
use dp1lines::roots::{standard_e8_basis, SimpleSystem};
use dp1lines::tritangent::{
    classify_tritangent, cubic_conic_count, nodal_signed_count, parse_rational, symmetric_to_cone,
    tritangent_table, Arrangement, BinaryForm,
};
use dp1lines::verify::{self, Group};

/// Exact lattice computations for real lines on real del Pezzo surfaces of degree 1.
#[derive(Parser)]
#[command(name = "dp1lines", version)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the eleven real deformation classes.
    Catalog,
    /// Hyperbolic and elliptic real lines of one class.
    Lines {
        /// Class label, e.g. RP2+Klein.
        #[arg(long = "class")]
        class: String,
    },
    /// Run the consistency checks; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Positive-root cover graph of a root system.
    Hasse {
        /// One of E8, E7, D6, D4+A1, D4, A1.
        #[arg(long = "type")]
        ty: String,
        /// Also print the pairing of non-simple positive roots.
        #[arg(long)]
        emit_matching: bool,
    },
    /// Tritangent sections of sextics on the quadric cone.
    Tritangent {
        #[command(subcommand)]
        command: TritangentCommand,
    },
    /// Adapters from plane sextics.
    Sextic {
        #[command(subcommand)]
        command: SexticCommand,
    },
    /// Signed line count with k real nodes.
    Nodal {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=8))]
        k: u8,
    },
    /// Real tritangent counts for an arrangement such as "<4|0>", "<|||>" or "<1|1>".
    Table {
        /// Arrangement code; all rows when omitted.
        #[arg(long)]
        arrangement: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    tables: bool,
    #[arg(long)]
    matching: bool,
    #[arg(long)]
    pairs: bool,
    #[arg(long)]
    tritangents: bool,
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum TritangentCommand {
    /// Classify the section y = 0 of w^2 = y^3 + p2 y^2 + p4 y + p6.
    ///
    /// Coefficients are comma-separated rationals ("3", "-2/5") in descending
    /// powers of x0.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        #[arg(long, allow_hyphen_values = true)]
        p4: String,
        #[arg(long, allow_hyphen_values = true)]
        p6: String,
    },
}

#[derive(Subcommand)]
enum SexticCommand {
    /// Convert a sextic even in x2 to (p2, p4, p6).
    ///
    /// Takes 28 comma-separated rationals grouped by the power k = 0..6 of
    /// x2; group k lists the 7 - k coefficients of a binary form in
    /// descending powers of x0.
    Symmetric {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn domain(e: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

struct Outcome {
    command: &'static str,
    passed: bool,
    text: String,
    payload: Value,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn parse_form(s: &str, name: &str) -> Result<BinaryForm, Failure> {
    s.parse().map_err(|e| domain(format!("--{name}: {e}")))
}

fn simple_system_for(ty: &str) -> Result<SimpleSystem, Failure> {
    let idx: &[usize] = match ty.to_ascii_uppercase().as_str() {
        "E8" => &[0, 1, 2, 3, 4, 5, 6, 7],
        "E7" => &[0, 1, 2, 3, 4, 5, 6],
        "D6" => &[0, 2, 3, 4, 5, 6],
        "D4+A1" => &[0, 2, 3, 4, 6],
        "D4" => &[0, 2, 3, 4],
        "A1" => &[3],
        _ => return Err(domain(format!("unsupported root system {ty:?}"))),
    };
    let b = standard_e8_basis();
    SimpleSystem::from_roots(idx.iter().map(|&i| b[i]).collect()).map_err(domain)
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Catalog => {
            let rows: Vec<Value> = catalog().iter().map(|e| to_value(&e.class)).collect();
            let mut text = format!(
                "{:<11} {:<8} {:<12} {:>5} {:>4} {:>4} {:>3}  partner\n",
                "class", "smith", "eigen", "lines", "h", "e", "h1"
            );
            for e in catalog() {
                let c = &e.class;
                text += &format!(
                    "{:<11} {:<8} {:<12} {:>5} {:>4} {:>4} {:>3}  {}\n",
                    c.label,
                    c.smith_type,
                    c.eigen_type,
                    c.expected_lines,
                    c.expected_h,
                    c.expected_e,
                    c.expected_h1_dim,
                    c.bertini_partner
                );
            }
            Ok(Outcome {
                command: "catalog",
                passed: true,
                text,
                payload: json!({ "classes": rows }),
            })
        }
        Command::Lines { class } => {
            let entry =
                catalog_entry(class).ok_or_else(|| domain(format!("unknown class {class:?}")))?;
            let sigma = &entry.structure;
            let adm = admissible_with_bases(sigma).map_err(domain)?;
            let (f, basis) = adm
                .first()
                .ok_or_else(|| domain("no admissible quadratic function"))?;
            let counts = line_counts(sigma, f).map_err(domain)?;
            let invariant = adm
                .iter()
                .all(|(g, _)| line_counts(sigma, g).map(|c| c == counts).unwrap_or(false));
            let text = format!(
                "{}: {} real lines, {} hyperbolic, {} elliptic, signed sum {}\nadmissible quadratic functions: {}\nspecial basis ({}):\n{}\n",
                entry.class.label,
                real_roots(sigma).len(),
                counts.hyperbolic,
                counts.elliptic,
                counts.signed_sum,
                adm.len(),
                entry.class.eigen_type,
                basis.roots().iter().map(|r| format!("  {r}")).collect::<Vec<_>>().join("\n"),
            );
            Ok(Outcome {
                command: "lines",
                passed: invariant,
                text,
                payload: json!({
                    "class": entry.class.label,
                    "eigen_type": entry.class.eigen_type,
                    "real_lines": real_roots(sigma).len(),
                    "hyperbolic": counts.hyperbolic,
                    "elliptic": counts.elliptic,
                    "signed_sum": counts.signed_sum,
                    "admissible_chis": adm.len(),
                    "counts_chi_invariant": invariant,
                    "chi": f,
                    "special_basis": basis,
                }),
            })
        }
        Command::Verify(a) => {
            let mut groups = Vec::new();
            if a.all || !(a.tables || a.matching || a.pairs || a.tritangents) {
                groups.push(Group::All);
            } else {
                for (on, g) in [
                    (a.tables, Group::Tables),
                    (a.pairs, Group::Pairs),
                    (a.matching, Group::Matching),
                    (a.tritangents, Group::Tritangents),
                ] {
                    if on {
                        groups.push(g);
                    }
                }
            }
            let mut checks: Vec<verify::Check> = groups.into_iter().flat_map(verify::run).collect();
            checks.sort_by_key(|c| c.id);
            checks.dedup_by_key(|c| c.id);
            let passed = checks.iter().all(|c| c.passed);
            let text = checks
                .iter()
                .map(|c| {
                    format!(
                        "[{}] {:>2} {}: {}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.id,
                        c.name,
                        c.detail
                    )
                })
                .collect();
            Ok(Outcome {
                command: "verify",
                passed,
                text,
                payload: json!({ "checks": checks }),
            })
        }
        Command::Hasse { ty, emit_matching } => {
            let s = simple_system_for(ty)?;
            let poset = hasse_covers(&s);
            let mut text = format!(
                "{}: {} positive roots, {} cover edges\n",
                ty.to_ascii_uppercase(),
                poset.nodes.len(),
                poset.covers.len()
            );
            let mut payload = json!({
                "type": ty.to_ascii_uppercase(),
                "nodes": poset.nodes,
                "covers": poset.covers,
            });
            if *emit_matching {
                let p = pair_matching(&s).map_err(|e| Failure {
                    code: 1,
                    message: e.to_string(),
                })?;
                text += &format!("{} pairs\n", p.pairs.len());
                for (u, v) in &p.pairs {
                    text += &format!("  {u} -- {v}\n");
                }
                payload["matching"] = to_value(&p.pairs);
            }
            Ok(Outcome {
                command: "hasse",
                passed: true,
                text,
                payload,
            })
        }
        Command::Tritangent {
            command: TritangentCommand::Classify { p2, p4, p6 },
        } => {
            let (p2, p4, p6) = (
                parse_form(p2, "p2")?,
                parse_form(p4, "p4")?,
                parse_form(p6, "p6")?,
            );
            let v = classify_tritangent(&p2, &p4, &p6).map_err(domain)?;
            let text = format!(
                "side {:?}, {:?}: {} of {} real tangencies with p4 > 0, resultant {}\n",
                v.side, v.species, v.positive_real_tangencies, v.real_tangencies, v.resultant
            )
            .to_lowercase();
            Ok(Outcome {
                command: "tritangent classify",
                passed: true,
                text,
                payload: to_value(&v),
            })
        }
        Command::Sextic {
            command: SexticCommand::Symmetric { coeffs },
        } => {
            let c = coeffs
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(domain)?;
            let (p2, p4, p6) = symmetric_to_cone(&c).map_err(domain)?;
            Ok(Outcome {
                command: "sextic symmetric",
                passed: true,
                text: format!("p2 = {p2}\np4 = {p4}\np6 = {p6}\n"),
                payload: json!({ "p2": p2, "p4": p4, "p6": p6 }),
            })
        }
        Command::Nodal { k } => {
            let nodes: Vec<_> = standard_e8_basis().into_iter().take(*k as usize).collect();
            let signed = nodal_signed_count(&nodes).map_err(domain)?;
            let cubic = cubic_conic_count(&nodes).map_err(domain)?;
            Ok(Outcome {
                command: "nodal",
                passed: true,
                text: format!(
                    "k = {k}: signed line count {signed}, signed tritangent count {}, cubic conic count {cubic}\n",
                    signed / 2
                ),
                payload: json!({ "k": k, "signed_line_count": signed, "signed_tritangent_count": signed / 2, "cubic_conic_count": cubic }),
            })
        }
        Command::Table { arrangement } => {
            let list = match arrangement {
                Some(a) => vec![Arrangement::parse(a).map_err(domain)?],
                None => Arrangement::ALL.to_vec(),
            };
            let rows = list
                .into_iter()
                .map(tritangent_table)
                .collect::<Result<Vec<_>, _>>()
                .map_err(domain)?;
            let text = rows
                .iter()
                .map(|r| {
                    format!(
                        "{:<6} total {:>3}  hyperbolic {:>3}  elliptic {:>3}\n",
                        r.arrangement, r.total, r.hyperbolic, r.elliptic
                    )
                })
                .collect();
            let payload = if rows.len() == 1 {
                to_value(&rows[0])
            } else {
                json!({ "rows": rows })
            };
            Ok(Outcome {
                command: "table",
                passed: true,
                text,
                payload,
            })
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Catalog => "catalog",
        Command::Lines { .. } => "lines",
        Command::Verify(_) => "verify",
        Command::Hasse { .. } => "hasse",
        Command::Tritangent { .. } => "tritangent classify",
        Command::Sextic { .. } => "sextic symmetric",
        Command::Nodal { .. } => "nodal",
        Command::Table { .. } => "table",
    }
}

fn report(command: &str, passed: bool, payload: Value) -> String {
    let r = json!({
        "command": command,
        "status": if passed { "pass" } else { "fail" },
        "version": CATALOG_VERSION,
        "payload": payload,
    });
    serde_json::to_string_pretty(&r).expect("json")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", report(out.command, out.passed, out.payload));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                println!(
                    "{}",
                    report(
                        command_name(&cli.command),
                        false,
                        json!({ "error": f.message })
                    )
                );
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
