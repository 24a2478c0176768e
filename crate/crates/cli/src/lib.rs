//! Command implementations behind the `ballean` binary.
//!
//! Every command produces a [`CommandResult`]: a status that maps to the exit
//! code, a JSON payload written to stdout as canonical JSON (sorted keys, no
//! whitespace), and human-readable diagnostics for stderr.

use std::fs;
use std::path::{Path, PathBuf};

use ballean::ballcore::{AxiomReport, Witness};
use ballean::cellular::{cellularization, partition_at};
use ballean::decompose::decompose;
use ballean::groupball::{asymorphism_between, truncated_locally_finite_within};
use ballean::io;
use ballean::metrics::{format_rational, random_ultrametric, ultrametrize};
use ballean::product::DEFAULT_MAX_SUPPORT;
use ballean::{BallStructure, BalleanError, ErrorKind, SubgroupChain};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

#[derive(Debug, Parser)]
#[command(name = "ballean", version, about = "Finite balleans: axioms, cellularization, ultrametrics, product decomposition")]
pub struct Cli {
    /// Largest support any command will load or build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUPPORT)]
    pub max_support: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check containment, symmetry and composition.
    Validate { path: PathBuf },
    /// Replace every ball by its path-connectivity class.
    Cellularize { path: PathBuf },
    /// Blocks of a cellular structure, per radius.
    Partition {
        path: PathBuf,
        /// Only this radius.
        #[arg(long)]
        radius: Option<String>,
    },
    /// Ultrametric realizing a connected cellular structure with nested radii.
    Ultrametrize { path: PathBuf },
    /// Factor a homogeneous cellular structure into a direct product.
    Decompose {
        path: PathBuf,
        /// Point sent to the all-basepoints tuple (default: first point).
        #[arg(long)]
        basepoint: Option<String>,
        /// Drop radii whose balls repeat an earlier radius.
        #[arg(long)]
        dedup_radii: bool,
    },
    /// Asymorphism between two group balleans with equal branching profiles.
    Asymorph { path_g: PathBuf, path_h: PathBuf },
    /// Seeded random ultrametric space.
    GenUltrametric {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Seeded subgroup chain in a direct sum of small cyclic groups.
    GenChain {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ContractError,
    InputError,
    ResourceError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ContractError => 1,
            Status::InputError => 2,
            Status::ResourceError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::ContractError => "contract-error",
            Status::InputError => "input-error",
            Status::ResourceError => "resource-error",
        }
    }
}

impl From<ErrorKind> for Status {
    fn from(kind: ErrorKind) -> Self {
        match kind {
            ErrorKind::Contract => Status::ContractError,
            ErrorKind::Input => Status::InputError,
            ErrorKind::Resource => Status::ResourceError,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        Self {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }

    fn failure(status: Status, message: String, mut details: Map<String, Value>) -> Self {
        details.insert(
            "error".into(),
            json!({ "kind": status.as_str(), "message": message.clone() }),
        );
        Self {
            status,
            payload: Value::Object(details),
            diagnostics: vec![message],
        }
    }

    /// The payload as one line of canonical JSON.
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string(&self.payload).expect("json values serialize");
        out.push('\n');
        out
    }
}

impl From<BalleanError> for CommandResult {
    fn from(err: BalleanError) -> Self {
        let mut details = Map::new();
        match &err {
            BalleanError::NotHomogeneous(report) => {
                details.insert("homogeneity".into(), io::to_value(report));
            }
            BalleanError::ProfileMismatch { left, right } => {
                details.insert("profiles".into(), json!([left, right]));
            }
            BalleanError::NotABallean(report) => {
                details.insert("axioms".into(), io::to_value(report));
            }
            _ => {}
        }
        Self::failure(err.kind().into(), err.to_string(), details)
    }
}

type Outcome = Result<CommandResult, BalleanError>;

fn read(path: &Path) -> Result<String, CommandResult> {
    fs::read_to_string(path).map_err(|e| {
        CommandResult::failure(
            Status::InputError,
            format!("cannot read {}: {e}", path.display()),
            Map::new(),
        )
    })
}

fn bounded(len: usize, limit: usize) -> Result<(), BalleanError> {
    if len > limit {
        Err(BalleanError::TooLarge { size: len, limit })
    } else {
        Ok(())
    }
}

fn load_structure(path: &Path, limit: usize) -> Result<BallStructure, CommandResult> {
    let text = read(path)?;
    let bs = io::parse_structure(&text)?;
    bounded(bs.len(), limit)?;
    Ok(bs)
}

fn load_chain(path: &Path, limit: usize) -> Result<SubgroupChain, CommandResult> {
    let text = read(path)?;
    let sc = io::parse_chain(&text)?;
    bounded(sc.group().order(), limit)?;
    Ok(sc)
}

pub fn run(cli: &Cli) -> CommandResult {
    let limit = cli.max_support;
    let outcome = match &cli.command {
        Command::Validate { path } => load_structure(path, limit).map(|bs| cmd_validate(&bs)),
        Command::Cellularize { path } => load_structure(path, limit).map(|bs| flatten(cmd_cellularize(&bs))),
        Command::Partition { path, radius } => {
            load_structure(path, limit).map(|bs| flatten(cmd_partition(&bs, radius.as_deref())))
        }
        Command::Ultrametrize { path } => load_structure(path, limit).map(|bs| flatten(cmd_ultrametrize(&bs))),
        Command::Decompose {
            path,
            basepoint,
            dedup_radii,
        } => load_structure(path, limit).map(|bs| flatten(cmd_decompose(&bs, basepoint.as_deref(), *dedup_radii))),
        Command::Asymorph { path_g, path_h } => load_chain(path_g, limit)
            .and_then(|g| load_chain(path_h, limit).map(|h| (g, h)))
            .map(|(g, h)| flatten(cmd_asymorph(&g, &h))),
        Command::GenUltrametric { seed, points, depth } => Ok(flatten(
            bounded(*points, limit).map(|_| CommandResult::ok(io::metric_space_to_value(&random_ultrametric(*seed, *points, *depth)))),
        )),
        Command::GenChain { seed, levels } => Ok(flatten(gen_chain(*seed, *levels, limit))),
    };
    outcome.unwrap_or_else(|failure| failure)
}

fn flatten(outcome: Outcome) -> CommandResult {
    outcome.unwrap_or_else(CommandResult::from)
}

fn witness_value(bs: &BallStructure, w: &Witness) -> Value {
    let radius = |a: usize| bs.radii()[a].clone();
    let point = |x: usize| bs.support()[x].clone();
    match w {
        Witness::Found { radius: r } => json!({ "witness": radius(*r) }),
        Witness::Missing { refutations } => json!({
            "refutations": refutations
                .iter()
                .map(|r| json!({ "candidate": radius(r.candidate), "x": point(r.x), "y": point(r.y) }))
                .collect::<Vec<_>>()
        }),
    }
}

/// The axiom report with points and radii by name.
pub fn report_value(bs: &BallStructure, report: &AxiomReport) -> Value {
    let per_radius = |list: &[Witness]| -> Map<String, Value> {
        list.iter()
            .enumerate()
            .map(|(a, w)| (bs.radii()[a].clone(), witness_value(bs, w)))
            .collect()
    };
    let composition: Map<String, Value> = report
        .composition
        .iter()
        .enumerate()
        .map(|(a, row)| (bs.radii()[a].clone(), Value::Object(per_radius(row))))
        .collect();
    json!({
        "containment_ok": report.containment_ok,
        "containment_violation": report
            .containment_violation
            .map(|m| json!({ "point": bs.support()[m.x], "radius": bs.radii()[m.radius] })),
        "symmetry_ok": report.symmetry_ok,
        "ball_into_dual": per_radius(&report.ball_into_dual),
        "dual_into_ball": per_radius(&report.dual_into_ball),
        "composition_ok": report.composition_ok,
        "composition": composition,
    })
}

pub fn cmd_validate(bs: &BallStructure) -> CommandResult {
    let report = bs.validate();
    let payload = report_value(bs, &report);
    if report.is_ballean() {
        CommandResult::ok(payload)
    } else {
        CommandResult {
            status: Status::ContractError,
            payload,
            diagnostics: vec![report.summary()],
        }
    }
}

pub fn cmd_cellularize(bs: &BallStructure) -> Outcome {
    Ok(CommandResult::ok(io::structure_to_value(&cellularization(bs)?)))
}

fn blocks_value(bs: &BallStructure, blocks: &[Vec<usize>]) -> Value {
    json!(blocks
        .iter()
        .map(|b| b.iter().map(|&x| bs.support()[x].clone()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn cmd_partition(bs: &BallStructure, radius: Option<&str>) -> Outcome {
    let radii: Vec<usize> = match radius {
        Some(name) => vec![bs.radius_index(name).ok_or_else(|| BalleanError::UnknownName {
            what: "radius",
            name: name.to_owned(),
        })?],
        None => (0..bs.radius_count()).collect(),
    };
    let mut out = Map::new();
    for a in radii {
        out.insert(bs.radii()[a].clone(), blocks_value(bs, &partition_at(bs, a)?));
    }
    Ok(CommandResult::ok(Value::Object(out)))
}

pub fn cmd_ultrametrize(bs: &BallStructure) -> Outcome {
    let u = ultrametrize(bs)?;
    let target = u.space.metric_ballean();
    if let Some(v) = u.asymorphism.verify(bs, &target)? {
        return Ok(CommandResult::failure(
            Status::ContractError,
            format!("ultrametric does not reproduce the structure: {v}"),
            Map::new(),
        ));
    }
    let named = |from: &BallStructure, to: &BallStructure, bound: &[usize]| -> Map<String, Value> {
        bound
            .iter()
            .enumerate()
            .map(|(a, &b)| (from.radii()[a].clone(), json!(to.radii()[b])))
            .collect()
    };
    let values: Map<String, Value> = u
        .radius_values
        .iter()
        .enumerate()
        .map(|(a, v)| (bs.radii()[a].clone(), json!(format_rational(v))))
        .collect();
    Ok(CommandResult::ok(json!({
        "space": io::metric_space_to_value(&u.space),
        "radius_values": values,
        "bounds": {
            "forward": named(bs, &target, &u.asymorphism.forward_bound),
            "backward": named(&target, bs, &u.asymorphism.backward_bound),
        },
    })))
}

pub fn cmd_decompose(bs: &BallStructure, basepoint: Option<&str>, dedup_radii: bool) -> Outcome {
    let bs = if dedup_radii { bs.dedup_radii() } else { bs.clone() };
    let x0 = match basepoint {
        Some(name) => bs.point_index(name).ok_or_else(|| BalleanError::UnknownName {
            what: "point",
            name: name.to_owned(),
        })?,
        None => 0,
    };
    let d = decompose(&bs, x0)?;
    let target = d.target();
    if let Some((x, a)) = d.asymorphism.ball_image_mismatch(&bs, &target)? {
        return Ok(CommandResult::failure(
            Status::ContractError,
            format!(
                "image of the ball around {} at radius {} is not a ball",
                bs.support()[x],
                bs.radii()[a]
            ),
            Map::new(),
        ));
    }
    let map: Map<String, Value> = d
        .coordinates
        .iter()
        .enumerate()
        .map(|(x, p)| (bs.support()[x].clone(), json!(p.coords)))
        .collect();
    Ok(CommandResult::ok(json!({
        "profile": d.profile,
        "factors": d.family.factors(),
        "map": map,
    })))
}

pub fn cmd_asymorph(g: &SubgroupChain, h: &SubgroupChain) -> Outcome {
    let map = asymorphism_between(g, h)?;
    let (bg, bh) = (g.ballean(), h.ballean());
    if let Some(v) = map.verify(&bg, &bh)? {
        return Ok(CommandResult::failure(
            Status::ContractError,
            format!("composed map is not an asymorphism: {v}"),
            Map::new(),
        ));
    }
    let pairs: Map<String, Value> = map
        .forward
        .iter()
        .enumerate()
        .map(|(x, &y)| (bg.support()[x].clone(), json!(bh.support()[y])))
        .collect();
    Ok(CommandResult::ok(json!({
        "profile": g.profile(),
        "map": pairs,
        "forward_bound": map.forward_bound,
        "backward_bound": map.backward_bound,
    })))
}

fn gen_chain(seed: u64, levels: usize, limit: usize) -> Outcome {
    let sc = truncated_locally_finite_within(seed, levels, limit)?;
    Ok(CommandResult::ok(io::chain_to_value(&sc)))
}
