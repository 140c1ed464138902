//! Front end for `stringy-core`: parses input documents, runs one pipeline
//! per command and renders deterministic JSON or aligned text.

pub mod cache;
pub mod input;
pub mod render;

use std::path::PathBuf;

use anyhow::Context;
use serde_json::{json, Map, Value};
use stringy_core::moduli::{enumerate_k03_bg, mass_check, structure_constants};
use stringy_core::stringy::{
    ring_table, sector_json, verify_associativity, verify_commutativity, verify_grading,
    verify_identity, CheckReport, StringyClass, DEFAULT_MAX_BASIS,
};
use stringy_core::{
    build_group, cohomology_p1, pushforward_degree, root_section_exists, Eigen, FiniteGroup,
    Orbifold, RingTable, TwistedLineBundleData,
};

use crate::input::{InstanceDoc, RootsDoc, RrDoc};

pub const CACHE_ENV: &str = "STRINGY_CACHE_DIR";
pub const DEFAULT_SAMPLES: usize = 1000;
/// Moduli enumeration walks all of `G x G`; cap the group order it accepts.
pub const MODULI_MAX_ORDER: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Inertia,
    Ring,
    Verify,
    Poincare,
    Moduli,
    Rr,
    Roots,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Inertia => "inertia",
            Command::Ring => "ring",
            Command::Verify => "verify",
            Command::Poincare => "poincare",
            Command::Moduli => "moduli",
            Command::Rr => "rr",
            Command::Roots => "roots",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input_path: PathBuf,
    pub output: Format,
    pub cache_dir: Option<PathBuf>,
    pub max_group_order: usize,
    pub seed: u64,
    pub samples: usize,
}

impl JobSpec {
    pub fn new(command: Command, input_path: impl Into<PathBuf>) -> Self {
        JobSpec {
            command,
            input_path: input_path.into(),
            output: Format::Json,
            cache_dir: None,
            max_group_order: stringy_core::DEFAULT_MAX_ORDER,
            seed: 0,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// Exit status convention: 0 success, 1 a property check failed, 2 bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    doc: Value,
    text: String,
    passed: bool,
}

pub fn run(job: &JobSpec) -> Outcome {
    match run_inner(job) {
        Ok(out) => out,
        Err(e) => Outcome {
            status: 2,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn run_inner(job: &JobSpec) -> anyhow::Result<Outcome> {
    let raw = if job.input_path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(&job.input_path)
            .with_context(|| format!("reading {}", job.input_path.display()))?
    };
    let input: Value = serde_json::from_str(&raw).context("input is not valid JSON")?;

    let key = cache::key(job, &input);
    if let Some(dir) = &job.cache_dir {
        if let Some(hit) = cache::load(dir, &key) {
            return Ok(Outcome {
                status: 0,
                stdout: hit,
                stderr: String::new(),
            });
        }
    }

    let report = execute(job, input)?;
    let stdout = match job.output {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.doc)?;
            s.push('\n');
            s
        }
        Format::Table => report.text,
    };
    let status = if report.passed { 0 } else { 1 };
    if status == 0 {
        if let Some(dir) = &job.cache_dir {
            cache::store(dir, &key, &stdout)
                .with_context(|| format!("writing cache in {}", dir.display()))?;
        }
    }
    Ok(Outcome {
        status,
        stdout,
        stderr: String::new(),
    })
}

fn execute(job: &JobSpec, input: Value) -> anyhow::Result<Report> {
    match job.command {
        Command::Rr => return rr(serde_json::from_value(input).context("rr input")?),
        Command::Roots => return roots(serde_json::from_value(input).context("roots input")?),
        Command::Verify if input::is_table_document(&input) => {
            let tbl = RingTable::from_json(&input, job.max_group_order)?;
            return Ok(verify(&tbl, job));
        }
        _ => {}
    }
    let doc: InstanceDoc = serde_json::from_value(input).context("instance input")?;
    let (group, action) = doc.into_parts();
    let orb = Orbifold::from_specs(&group, &action, job.max_group_order)?;
    Ok(match job.command {
        Command::Inertia => inertia(&orb),
        Command::Ring => ring(&ring_table(&orb, DEFAULT_MAX_BASIS)?),
        Command::Verify => verify(&ring_table(&orb, DEFAULT_MAX_BASIS)?, job),
        Command::Poincare => poincare(&orb)?,
        Command::Moduli => moduli(&build_group(&group, job.max_group_order)?, job)?,
        Command::Rr | Command::Roots => unreachable!(),
    })
}

fn inertia(orb: &Orbifold) -> Report {
    let sectors: Vec<Value> = orb.sectors().iter().map(sector_json).collect();
    let rows: Vec<Vec<String>> = orb
        .sectors()
        .iter()
        .map(|s| {
            vec![
                s.label.clone(),
                s.index_r.to_string(),
                s.fixed_dim.to_string(),
                s.age.to_string(),
                s.aut_order_x1.to_string(),
                s.aut_order_x1bar.to_string(),
                s.class_size.to_string(),
            ]
        })
        .collect();
    let text = format!(
        "{} acting on C^{}\n{}",
        orb.group(),
        orb.action().dim(),
        render::table(
            &["sector", "r", "fixed_dim", "age", "|Aut| X1", "|Aut| X1bar", "class"],
            &rows
        )
    );
    Report {
        doc: json!({
            "group": orb.group().spec(),
            "action": orb.action().spec(),
            "sectors": sectors,
        }),
        text,
        passed: true,
    }
}

fn describe_class(tbl: &RingTable, x: &StringyClass) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let ring = tbl.orbifold().ring();
    x.terms()
        .iter()
        .map(|(&k, c)| {
            let label = &tbl.basis()[k].label;
            if *c == ring.one() {
                format!("1_{label}")
            } else {
                format!("({})*1_{label}", ring.display(c))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn ring(tbl: &RingTable) -> Report {
    let mut rows = Vec::new();
    for i in 0..tbl.len() {
        for j in i..tbl.len() {
            rows.push(vec![
                format!("1_{} * 1_{}", tbl.basis()[i].label, tbl.basis()[j].label),
                describe_class(tbl, tbl.basis_product(i, j)),
            ]);
        }
    }
    let text = format!(
        "{} acting on C^{}  (hash {})\n{}",
        tbl.orbifold().group(),
        tbl.orbifold().action().dim(),
        &tbl.hash()[..16],
        render::table(&["product", "value"], &rows)
    );
    Report {
        doc: tbl.to_json(),
        text,
        passed: true,
    }
}

fn check_json(c: &CheckReport) -> Value {
    json!({
        "name": c.name,
        "checked": c.checked,
        "passed": c.passed(),
        "counterexample": c.counterexample,
    })
}

fn verify(tbl: &RingTable, job: &JobSpec) -> Report {
    let checks = [verify_identity(tbl), verify_commutativity(tbl), verify_grading(tbl)];
    let assoc = verify_associativity(tbl, job.samples, job.seed);
    let passed = checks.iter().all(CheckReport::passed) && assoc.passed();
    let mut rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.checked.to_string(),
                if c.passed() { "pass".into() } else { "FAIL".into() },
                c.counterexample.clone().unwrap_or_default(),
            ]
        })
        .collect();
    rows.push(vec![
        "associativity".into(),
        format!("{}+{}", assoc.basis_triples, assoc.sampled_triples),
        if assoc.passed() { "pass".into() } else { "FAIL".into() },
        assoc.counterexample.clone().unwrap_or_default(),
    ]);
    Report {
        doc: json!({
            "hash": tbl.hash(),
            "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
            "associativity": {
                "basis_triples": assoc.basis_triples,
                "sampled_triples": assoc.sampled_triples,
                "seed": job.seed,
                "passed": assoc.passed(),
                "counterexample": assoc.counterexample,
            },
            "passed": passed,
        }),
        text: render::table(&["check", "cases", "result", "detail"], &rows),
        passed,
    }
}

fn poincare(orb: &Orbifold) -> anyhow::Result<Report> {
    let poly = stringy_core::poincare_polynomial(orb.action())?;
    let mut map = Map::new();
    for (age, count) in &poly {
        map.insert(age.to_string(), Value::from(*count));
    }
    let integral = poly.keys().all(|a| a.is_integer());
    let terms: Vec<String> = poly
        .iter()
        .map(|(a, c)| match (a.to_string().as_str(), *c) {
            ("0", c) => c.to_string(),
            ("1", 1) => "q".to_string(),
            ("1", c) => format!("{c}q"),
            (a, 1) => format!("q^{a}"),
            (a, c) => format!("{c}q^{a}"),
        })
        .collect();
    let text = format!(
        "{}\ngrading is {}\n",
        terms.join(" + "),
        if integral { "integral" } else { "fractional" }
    );
    Ok(Report {
        doc: Value::Object(map),
        text,
        passed: true,
    })
}

fn moduli(group: &FiniteGroup, job: &JobSpec) -> anyhow::Result<Report> {
    let comps = enumerate_k03_bg(group, job.max_group_order.min(MODULI_MAX_ORDER))?;
    let check = mass_check(group, &comps);
    let class_label = |c: usize| group.label(group.conjugacy_classes()[c].representative);
    let components: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "triple": c.triple.map(|g| group.label(g)),
                "aut_order": c.aut_order,
                "orbit_size": c.orbit_size,
                "eval_sectors": c.eval_sectors.map(class_label),
                "node_indices": c.node_indices,
            })
        })
        .collect();
    let constants: Vec<Value> = structure_constants(group, &comps)
        .into_iter()
        .map(|((a, b), out)| {
            let mut m = Map::new();
            for (k, n) in out {
                m.insert(class_label(k), Value::from(n));
            }
            json!({ "left": class_label(a), "right": class_label(b), "result": m })
        })
        .collect();
    let rows: Vec<Vec<String>> = comps
        .iter()
        .map(|c| {
            vec![
                c.triple.map(|g| group.label(g)).join(" "),
                c.aut_order.to_string(),
                c.eval_sectors.map(class_label).join(" "),
                format!("{:?}", c.node_indices),
            ]
        })
        .collect();
    let text = format!(
        "{}\nmass: {} vs |G|^2 = {} ({})\n",
        render::table(&["triple", "|Aut|", "eval sectors", "r"], &rows),
        check.lhs,
        check.rhs,
        if check.ok { "ok" } else { "MISMATCH" }
    );
    Ok(Report {
        doc: json!({
            "group": group.spec(),
            "components": components,
            "mass_check": { "lhs": check.lhs, "rhs": check.rhs, "ok": check.ok },
            "structure_constants": constants,
        }),
        text,
        passed: check.ok,
    })
}

fn rr(doc: RrDoc) -> anyhow::Result<Report> {
    let degree = input::parse_rational(&doc.degree)?;
    let monodromies = doc.monodromies.map(|[k, r]| Eigen::new(k, r));
    let data = TwistedLineBundleData::new(degree.clone(), monodromies)?;
    let d = pushforward_degree(&data)?;
    let (h0, h1) = cohomology_p1(&d);
    let text = format!("pushforward degree {d}\nh0 = {h0}, h1 = {h1}\n");
    Ok(Report {
        doc: json!({
            "degree": degree.to_string(),
            "monodromies": doc.monodromies,
            "pushforward_degree": stringy_core::equivariant::json_integer(&d),
            "h0": stringy_core::equivariant::json_integer(&h0),
            "h1": stringy_core::equivariant::json_integer(&h1),
        }),
        text,
        passed: true,
    })
}

fn roots(doc: RootsDoc) -> anyhow::Result<Report> {
    let pic = doc.picard()?;
    let exists = root_section_exists(&pic, doc.r)?;
    Ok(Report {
        doc: json!({
            "free_rank": pic.free_rank,
            "torsion": pic.torsion,
            "element": pic.element,
            "r": doc.r,
            "root_exists": exists,
        }),
        text: format!(
            "an r = {} root {}\n",
            doc.r,
            if exists { "exists" } else { "does not exist" }
        ),
        passed: true,
    })
}
