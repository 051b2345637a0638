//! Command-line front end: file I/O, report envelopes, and a uniform exit
//! scheme over the library.
//!
//! Exit codes: 0 success or property holds, 1 property false with a
//! witness in the report, 2 invalid input, 3 budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use groupot::calib::{
    calibration_value, converse_check, kantorovich_dual_factor, realize_potential, verify_tree_map,
    Tree, TreeMap,
};
use groupot::chain::PolyChain1;
use groupot::classify::classify_groups;
use groupot::czt::has_czt;
use groupot::error::{Error, ErrorCategory};
use groupot::feasibility::{czt_norm_feasibility, NormFeasibilityResult};
use groupot::group::{element_from_json, element_to_json, FactorSpec, GroupElement, GroupSpec};
use groupot::metric::Instance;
use groupot::nbp::{
    check_nbp, construct_nbp, find_nbp_counterexample, NbpReport, NbpSearchOptions,
};
use groupot::plan::TransportPlan;
use groupot::report::ReportBuilder;
use groupot::solver::{
    solve_brute, solve_flow, solve_with, CandidateBound, SolveOptions, DEFAULT_NODE_BUDGET,
};
use groupot::structure::{
    list_indecomposables, list_indecomposables_in_ball, verify_indecomposable_laws,
    verify_pairwise_l1, ElementOrder,
};
use groupot::Result;
use groupot::Scalar;

#[derive(Parser)]
#[command(name = "groupot", version, about = "Exact transport with group coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Print the full run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed recorded in the report; derived from the input digest if absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Decomposed,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a transport instance exactly.
    Solve {
        /// Instance JSON file.
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Attach dual certificates for line factors and require zero gap.
        #[arg(long)]
        certify: bool,
        /// Write the plan JSON here.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check a plan for the nonbranching row equalities.
    CheckNbp {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Plan JSON file.
        #[arg(short = 'p', long)]
        plan: PathBuf,
    },
    /// Build a nonbranching plan directly from an instance's coefficients.
    ConstructNbp {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Search for coefficients over a group that admit no nonbranching plan.
    RefuteNbp {
        /// Group spec JSON file.
        #[arg(long)]
        group: PathBuf,
        /// Largest coefficient multiset size to try.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Demand forest support graphs.
        #[arg(long)]
        acyclic: bool,
    },
    /// Decide whether every zero-sum triple is collinear under the norm.
    CheckCzt {
        #[arg(long)]
        group: PathBuf,
    },
    /// Decide whether a finite abelian group carries any collinear norm.
    CztSearch {
        /// Cyclic factor moduli, comma separated, e.g. 2,4.
        #[arg(long)]
        moduli: String,
    },
    /// Sweep all abelian groups up to an order bound.
    Classify {
        #[arg(long)]
        max_order: u64,
    },
    /// List indecomposable elements of a group.
    Indecomposables {
        #[arg(long)]
        group: PathBuf,
        /// Norm-ball radius; required for groups with infinite factors.
        #[arg(long)]
        radius: Option<String>,
    },
    /// Check the norm laws at an indecomposable element.
    VerifyStructure {
        #[arg(long)]
        group: PathBuf,
        /// Indecomposable element, JSON coordinates.
        #[arg(long)]
        g: String,
        /// Companion element, JSON coordinates.
        #[arg(long)]
        h: String,
        /// Largest homogeneity multiple tested.
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Largest multiple pair tested for additivity.
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Eliminate the interior vertices of a chain.
    Simplify {
        /// Chain JSON file.
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Print per-step masses.
        #[arg(long)]
        trace: bool,
    },
    /// Tree calibration lower bounds for an instance.
    Calibrate {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Per-factor certificates: JSON list of {"tree":…, "map":[…]}.
        #[arg(long)]
        trees: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let (name, input_bytes) = command_digest_input(&cli.command);
    let builder = ReportBuilder::new(&name, &input_bytes, cli.seed, budget);
    match run(&cli.command, budget) {
        Ok((result, code, human)) => {
            let report = builder.finish(result);
            if cli.json {
                emit(&serde_json::to_string_pretty(&report).unwrap());
            } else {
                for line in human {
                    emit(&line);
                }
            }
            ExitCode::from(code)
        }
        Err(err) => {
            let code = match err.category() {
                ErrorCategory::Budget => 3u8,
                ErrorCategory::PropertyFalse => 1,
                ErrorCategory::InvalidInput => 2,
            };
            if cli.json {
                let report = builder.finish(json!({
                    "error": err.to_string(),
                    "category": format!("{:?}", err.category()),
                }));
                emit(&serde_json::to_string_pretty(&report).unwrap());
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(code)
        }
    }
}

/// Write a line to stdout, swallowing broken pipes so `groupot … | head`
/// exits quietly.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

/// Canonical digest input per command: raw file bytes for file commands,
/// the parameter string otherwise.
fn command_digest_input(cmd: &Command) -> (String, Vec<u8>) {
    fn read_or_empty(p: &Path) -> Vec<u8> {
        fs::read(p).unwrap_or_default()
    }
    match cmd {
        Command::Solve { input, .. } => ("solve".into(), read_or_empty(input)),
        Command::CheckNbp { input, plan } => {
            let mut bytes = read_or_empty(input);
            bytes.extend(read_or_empty(plan));
            ("check-nbp".into(), bytes)
        }
        Command::ConstructNbp { input, .. } => ("construct-nbp".into(), read_or_empty(input)),
        Command::RefuteNbp { group, max_n, acyclic } => {
            let mut bytes = read_or_empty(group);
            bytes.extend(format!("max-n={max_n};acyclic={acyclic}").into_bytes());
            ("refute-nbp".into(), bytes)
        }
        Command::CheckCzt { group } => ("check-czt".into(), read_or_empty(group)),
        Command::CztSearch { moduli } => {
            ("czt-search".into(), format!("moduli={moduli}").into_bytes())
        }
        Command::Classify { max_order } => {
            ("classify".into(), format!("max-order={max_order}").into_bytes())
        }
        Command::Indecomposables { group, radius } => {
            let mut bytes = read_or_empty(group);
            if let Some(r) = radius {
                bytes.extend(format!("radius={r}").into_bytes());
            }
            ("indecomposables".into(), bytes)
        }
        Command::VerifyStructure { group, g, h, n, k_max } => {
            let mut bytes = read_or_empty(group);
            bytes.extend(format!("g={g};h={h};n={n};k-max={k_max}").into_bytes());
            ("verify-structure".into(), bytes)
        }
        Command::Simplify { input, .. } => ("simplify".into(), read_or_empty(input)),
        Command::Calibrate { input, trees } => {
            let mut bytes = read_or_empty(input);
            if let Some(t) = trees {
                bytes.extend(read_or_empty(t));
            }
            ("calibrate".into(), bytes)
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&read_json(path)?)
}

fn read_group(path: &Path) -> Result<GroupSpec> {
    serde_json::from_value(read_json(path)?)
        .map_err(|e| Error::InvalidInput(format!("bad group spec: {e}")))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn json_u128(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(v.to_string()),
    }
}

fn elements_json(elems: &[GroupElement]) -> Value {
    Value::from(elems.iter().map(element_to_json).collect::<Vec<_>>())
}

fn nbp_report_json(report: &NbpReport) -> Value {
    json!({
        "nbp": report.nbp,
        "acyclic": report.acyclic,
        "violated_rows": report
            .violated_rows
            .iter()
            .map(|(row, have, need)| json!({"row": row, "norm": have, "edge_norm_sum": need}))
            .collect::<Vec<_>>(),
        "cycle": report.cycle_witness,
    })
}

fn feasibility_json(r: &NormFeasibilityResult) -> Value {
    json!({
        "moduli": r.moduli,
        "feasible": r.feasible,
        "witness_norm": r.witness_norm,
        "family": r.family_description,
        "trace": {
            "classes": r.trace.classes,
            "triples": r.trace.triples,
            "patterns_total": json_u128(r.trace.patterns_total),
            "patterns_refuted": json_u128(r.trace.patterns_refuted),
            "patterns_feasible": json_u128(r.trace.patterns_feasible),
            "refutations": r
                .trace
                .refutations
                .iter()
                .map(|p| json!({"prefix": p.prefix, "pruned": json_u128(p.pruned)}))
                .collect::<Vec<_>>(),
        },
    })
}

fn parse_element(spec: &GroupSpec, text: &str) -> Result<GroupElement> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("bad element {text:?}: {e}")))?;
    element_from_json(spec, &value)
}

type CmdOutcome = (Value, u8, Vec<String>);

fn run(cmd: &Command, budget: u128) -> Result<CmdOutcome> {
    let solve_opts = SolveOptions { budget };
    let search_opts = NbpSearchOptions {
        require_acyclic: false,
        budget,
    };
    match cmd {
        Command::Solve {
            input,
            method,
            certify,
            output,
        } => {
            let inst = read_instance(input)?;
            let plan = match method {
                Method::Auto | Method::Decomposed => solve_with(&inst, &solve_opts)?,
                Method::Brute => solve_brute(&inst, &CandidateBound::Auto, &solve_opts)?,
            };
            let cost = plan.cost.clone().expect("solver attaches cost");
            let mut result = json!({
                "cost": cost,
                "plan": plan.to_json(),
            });
            let mut human = vec![format!("cost {cost}")];
            if *certify {
                let certs = certify_line_factors(&inst)?;
                human.push(format!(
                    "certified {} line factor(s), zero gap",
                    certs.as_array().map_or(0, Vec::len)
                ));
                result["certificates"] = certs;
            }
            if let Some(path) = output {
                write_json(path, &plan.to_json())?;
                human.push(format!("plan written to {}", path.display()));
            }
            Ok((result, 0, human))
        }
        Command::CheckNbp { input, plan } => {
            let inst = read_instance(input)?;
            let plan = TransportPlan::from_json(&read_json(plan)?)?;
            let report = check_nbp(&plan, &inst)?;
            let code = u8::from(!report.nbp);
            let human = if report.nbp {
                vec![format!(
                    "plan is nonbranching ({})",
                    if report.acyclic { "forest support" } else { "cyclic support" }
                )]
            } else {
                report
                    .violated_rows
                    .iter()
                    .map(|(row, have, need)| {
                        format!("row {row} branches: norm {have} < edge sum {need}")
                    })
                    .collect()
            };
            Ok((nbp_report_json(&report), code, human))
        }
        Command::ConstructNbp { input, output } => {
            let inst = read_instance(input)?;
            let plan = construct_nbp(&inst.group, &inst.coefficients)?.with_cost(&inst.metric)?;
            let report = check_nbp(&plan, &inst)?;
            let cost = plan.cost.clone().expect("cost attached");
            if let Some(path) = output {
                write_json(path, &plan.to_json())?;
            }
            let human = vec![format!(
                "constructed nonbranching plan, cost {cost}, {}",
                if report.acyclic { "forest support" } else { "cyclic support" }
            )];
            Ok((
                json!({"plan": plan.to_json(), "cost": cost, "check": nbp_report_json(&report)}),
                0,
                human,
            ))
        }
        Command::RefuteNbp {
            group,
            max_n,
            acyclic,
        } => {
            let spec = read_group(group)?;
            let opts = NbpSearchOptions {
                require_acyclic: *acyclic,
                budget,
            };
            match find_nbp_counterexample(&spec, *max_n, &opts)? {
                None => Ok((
                    json!({"counterexample": Value::Null, "max_n": max_n}),
                    0,
                    vec![format!(
                        "every coefficient set of size <= {max_n} has a plan"
                    )],
                )),
                Some((coeffs, proof)) => {
                    let rendered = elements_json(&coeffs);
                    let human = vec![format!(
                        "no plan for coefficients {rendered}: searched {} assignments",
                        proof.search_space
                    )];
                    Ok((
                        json!({
                            "counterexample": rendered,
                            "search_space": proof.search_space.to_string(),
                            "visited": json_u128(proof.visited),
                            "require_acyclic": proof.require_acyclic,
                        }),
                        1,
                        human,
                    ))
                }
            }
        }
        Command::CheckCzt { group } => {
            let spec = read_group(group)?;
            match has_czt(&spec)? {
                None => Ok((
                    json!({"czt": true, "witness": Value::Null}),
                    0,
                    vec!["all zero-sum triples are collinear".into()],
                )),
                Some(triple) => {
                    let rendered = elements_json(&triple);
                    Ok((
                        json!({"czt": false, "witness": rendered}),
                        1,
                        vec![format!("noncollinear zero-sum triple: {rendered}")],
                    ))
                }
            }
        }
        Command::CztSearch { moduli } => {
            let parsed = parse_moduli(moduli)?;
            let result = czt_norm_feasibility(&parsed, &solve_opts)?;
            let code = u8::from(!result.feasible);
            let human = if result.feasible {
                let witness = result.witness_norm.as_ref().expect("feasible");
                let mut lines = vec![format!(
                    "feasible: witness norm ({})",
                    witness
                        .iter()
                        .map(Scalar::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                )];
                lines.extend(
                    result
                        .family_description
                        .iter()
                        .flatten()
                        .map(|d| format!("  {d}")),
                );
                lines
            } else {
                vec![format!(
                    "infeasible: all {} equality patterns refuted",
                    result.trace.patterns_total
                )]
            };
            Ok((feasibility_json(&result), code, human))
        }
        Command::Classify { max_order } => {
            let report = classify_groups(*max_order, &solve_opts)?;
            let mut human = Vec::new();
            for e in &report.entries {
                if e.result.feasible {
                    human.push(format!("{}: feasible", e.name));
                }
            }
            for e in &report.entries {
                if !e.result.feasible {
                    human.push(format!("{}: infeasible", e.name));
                }
            }
            let entries: Vec<Value> = report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "moduli": e.moduli,
                        "order": e.order,
                        "feasible": e.result.feasible,
                        "witness_norm": e.result.witness_norm,
                        "family": e.result.family_description,
                    })
                })
                .collect();
            Ok((
                json!({"max_order": max_order, "groups": entries}),
                0,
                human,
            ))
        }
        Command::Indecomposables { group, radius } => {
            let spec = read_group(group)?;
            let set = match radius {
                Some(text) => {
                    let r = Scalar::parse(text)?;
                    list_indecomposables_in_ball(&spec, &r, &solve_opts)?
                }
                None => list_indecomposables(&spec, &solve_opts)?,
            };
            let items: Vec<Value> = set
                .representatives
                .iter()
                .zip(&set.orders)
                .map(|(g, o)| {
                    let order = match o {
                        ElementOrder::Finite(m) => json_u128(*m),
                        ElementOrder::Infinite => Value::from("infinite"),
                    };
                    json!({"element": element_to_json(g), "order": order})
                })
                .collect();
            let human = vec![format!(
                "{} indecomposable class(es): {}",
                set.representatives.len(),
                elements_json(&set.representatives)
            )];
            Ok((json!({"indecomposables": items}), 0, human))
        }
        Command::VerifyStructure {
            group,
            g,
            h,
            n,
            k_max,
        } => {
            let spec = read_group(group)?;
            let ge = parse_element(&spec, g)?;
            let he = parse_element(&spec, h)?;
            let law = verify_indecomposable_laws(&spec, &ge, &he, *n, &solve_opts)?;
            // The pairwise law only applies when both elements are
            // indecomposable with distinct spans; otherwise skip it.
            let pairwise = match verify_pairwise_l1(&spec, &ge, &he, *k_max, &solve_opts) {
                Ok(r) => Some(r),
                Err(Error::NotIndecomposable(_) | Error::SameSubgroup) => None,
                Err(e) => return Err(e),
            };
            let ok = law.holds() && pairwise.as_ref().is_none_or(|p| p.is_none());
            let mut human = Vec::new();
            match &law.failure {
                None => human.push(format!(
                    "laws hold: minimizer n = {}, residual {}",
                    law.minimizer.as_ref().expect("holds"),
                    element_to_json(law.residual.as_ref().expect("holds"))
                )),
                Some(f) => human.push(format!("law failure: {f:?}")),
            }
            match &pairwise {
                None => human.push("pairwise law not applicable to this pair".into()),
                Some(None) => human.push("pairwise sums are additive".into()),
                Some(Some(f)) => human.push(format!("pairwise failure: {f:?}")),
            }
            Ok((
                json!({
                    "holds": ok,
                    "minimizer": law.minimizer.as_ref().map(|n| n.to_string()),
                    "residual": law.residual.as_ref().map(element_to_json),
                    "law_failure": law.failure.as_ref().map(|f| format!("{f:?}")),
                    "pairwise_applicable": pairwise.is_some(),
                    "pairwise_failure": pairwise
                        .as_ref()
                        .and_then(|p| p.as_ref())
                        .map(|f| format!("{f:?}")),
                }),
                u8::from(!ok),
                human,
            ))
        }
        Command::Simplify {
            input,
            output,
            trace,
        } => {
            let chain = PolyChain1::from_json(&read_json(input)?)?;
            let (flat, steps) = chain.simplify(&search_opts)?;
            let mut human = Vec::new();
            if *trace {
                for s in &steps.steps {
                    human.push(format!(
                        "eliminate vertex {}: mass {} -> {}",
                        s.vertex, s.mass_before, s.mass_after
                    ));
                }
            }
            human.push(format!(
                "{} elimination(s), final mass {}",
                steps.steps.len(),
                flat.mass()?
            ));
            if let Some(path) = output {
                write_json(path, &flat.to_json())?;
                human.push(format!("chain written to {}", path.display()));
            }
            Ok((
                json!({
                    "chain": flat.to_json(),
                    "mass": flat.mass()?,
                    "steps": steps
                        .steps
                        .iter()
                        .map(|s| json!({
                            "vertex": s.vertex,
                            "mass_before": s.mass_before,
                            "mass_after": s.mass_after,
                        }))
                        .collect::<Vec<_>>(),
                }),
                0,
                human,
            ))
        }
        Command::Calibrate { input, trees } => {
            let inst = read_instance(input)?;
            let (certs, potentials) = match trees {
                Some(path) => (parse_certs(&read_json(path)?)?, Vec::new()),
                None => default_certs(&inst)?,
            };
            for (tree, map) in &certs {
                if let Some(b) = verify_tree_map(&inst.metric, tree, map)?.first() {
                    return Err(Error::LipschitzViolation {
                        i: b.i,
                        j: b.j,
                        tree: b.tree_dist.clone(),
                        space: b.space_dist.clone(),
                    });
                }
            }
            let value = calibration_value(&inst, &certs)?;
            let cost = solve_with(&inst, &solve_opts)?
                .cost
                .expect("solver attaches cost");
            let gap = &cost - &value;
            let mut result = json!({
                "value": value,
                "cost": cost,
                "gap": gap,
                "certificates": certs
                    .iter()
                    .map(|(tree, map)| json!({"tree": tree.to_json(), "map": map.to_vertex}))
                    .collect::<Vec<_>>(),
            });
            if !potentials.is_empty() {
                result["potentials"] = Value::from(
                    potentials
                        .iter()
                        .map(|p| serde_json::to_value(&p.1).expect("scalars serialize"))
                        .collect::<Vec<_>>(),
                );
            }
            let mut human = vec![format!("calibration value {value}, cost {cost}, gap {gap}")];
            if gap.is_zero() {
                if let Some((tree, map)) = certs.first() {
                    if certs.len() == 1 {
                        let report = converse_check(&inst, tree, map)?;
                        human.push(format!(
                            "equality case: optimal plan nonbranching = {}",
                            report.nbp
                        ));
                        result["converse_nbp"] = Value::from(report.nbp);
                    }
                }
            }
            Ok((result, 0, human))
        }
    }
}

fn parse_moduli(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidInput(format!("bad modulus {part:?}: {e}")))
        })
        .collect()
}

/// Dual certificate per line factor: potential plus value, checked to
/// match that factor's exact flow cost.
fn certify_line_factors(inst: &Instance) -> Result<Value> {
    let mut certs = Vec::new();
    for (k, factor) in inst.group.factors().iter().enumerate() {
        let weight = match factor {
            FactorSpec::IntZ { weight } | FactorSpec::RealQ { weight } => weight.clone(),
            FactorSpec::ModM { .. } => continue,
        };
        let (potential, value) = kantorovich_dual_factor(inst, k)?;
        let sub = line_factor_instance(inst, k)?;
        let flow_cost = solve_flow(&sub)?.cost.expect("cost attached");
        if value != flow_cost {
            return Err(Error::NotCalibrated {
                fill: value,
                optimal: flow_cost,
            });
        }
        certs.push(json!({
            "factor": k,
            "weight": weight,
            "potential": potential.values,
            "value": value,
        }));
    }
    Ok(Value::from(certs))
}

fn line_factor_instance(inst: &Instance, k: usize) -> Result<Instance> {
    let group = GroupSpec::new(vec![inst.group.factors()[k].clone()])?;
    let coeffs = inst
        .coefficients
        .iter()
        .map(|c| GroupElement::new(vec![c.coords[k].clone()]))
        .collect();
    Instance::new(group, inst.metric.clone(), coeffs)
}

fn parse_certs(value: &Value) -> Result<Vec<(Tree, TreeMap)>> {
    let list = value
        .as_array()
        .ok_or_else(|| Error::InvalidInput("certificates must be a JSON array".into()))?;
    list.iter()
        .map(|item| {
            let tree = Tree::from_json(
                item.get("tree")
                    .ok_or_else(|| Error::InvalidInput("certificate lacks a tree".into()))?,
            )?;
            let map: Vec<usize> = serde_json::from_value(
                item.get("map")
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("certificate lacks a map".into()))?,
            )
            .map_err(|e| Error::InvalidInput(format!("bad map: {e}")))?;
            Ok((tree, TreeMap { to_vertex: map }))
        })
        .collect()
}

/// Interval trees from optimal potentials for line factors; parity and
/// table factors collapse to a point (a valid, if weak, certificate).
#[allow(clippy::type_complexity)]
fn default_certs(
    inst: &Instance,
) -> Result<(Vec<(Tree, TreeMap)>, Vec<(usize, Vec<Scalar>)>)> {
    let mut certs = Vec::new();
    let mut potentials = Vec::new();
    for (k, factor) in inst.group.factors().iter().enumerate() {
        match factor {
            FactorSpec::IntZ { .. } | FactorSpec::RealQ { .. } => {
                let (potential, _) = kantorovich_dual_factor(inst, k)?;
                let (tree, map) = realize_potential(&potential)?;
                potentials.push((k, potential.values.clone()));
                certs.push((tree, map));
            }
            FactorSpec::ModM { .. } => {
                let point = Tree::new(1, vec![])?;
                let collapse = TreeMap {
                    to_vertex: vec![0; inst.len()],
                };
                certs.push((point, collapse));
            }
        }
    }
    Ok((certs, potentials))
}
