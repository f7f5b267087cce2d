//! Executes a [`RunConfig`] and writes its table or image.

use std::fmt;
use std::io::Write;

use cascade_core::attractor::{
    bifurcation_scan, build_markov, census, spacing_ratios, star_values,
};
use cascade_core::basin::{corner_accumulation, interior_accumulation, render_basins};
use cascade_core::output::{basin_table, image_bytes, write_csv, ImageFormat, Table, Value};
use cascade_core::scalar::{
    avoidance_measure_tent, classify_orbit, estimate_avoidance_curve, OrbitClass,
    DEFAULT_BOUNDARY_TOL,
};
use cascade_core::{Error, Threshold};

use crate::config::{Command, Format, RunConfig, Target};

#[derive(Debug)]
pub enum RunError {
    /// Parameters rejected by the library.
    Usage(String),
    Runtime(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(s) | RunError::Runtime(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Parameter(_) => RunError::Usage(e.to_string()),
            _ => RunError::Runtime(e.to_string()),
        }
    }
}

/// Result of a subcommand before it is written out.
pub enum Artifact {
    Table(Table),
    Image(Vec<u8>),
}

fn threshold(cfg: &RunConfig) -> Result<Threshold, RunError> {
    let c1 = cfg
        .c1
        .ok_or_else(|| RunError::Usage(format!("{} needs --c1", cfg.command.name())))?;
    Ok(Threshold::new(c1)?)
}

fn class_row(c1: f64, class: OrbitClass) -> Vec<Value> {
    let (period, steps, detail) = match class {
        OrbitClass::SuperStable { period, steps_to_c } => (
            Value::from(period),
            Value::from(steps_to_c),
            Value::from(""),
        ),
        OrbitClass::Repeller { iterations_checked } => (
            Value::from(""),
            Value::from(""),
            Value::from(format!("no entry in {iterations_checked} steps")),
        ),
        OrbitClass::Boundary { step } => (
            Value::from(""),
            Value::from(step),
            Value::from("orbit point on the boundary of C"),
        ),
    };
    vec![c1.into(), class.label().into(), period, steps, detail]
}

const CLASS_HEADER: [&str; 5] = ["c1", "class", "period", "step", "note"];

fn orbit(cfg: &RunConfig) -> Result<Table, RunError> {
    let t = threshold(cfg)?;
    let class = classify_orbit(&t, cfg.max_iter, DEFAULT_BOUNDARY_TOL);
    let mut table = Table::new(CLASS_HEADER.into_iter().chain(["c0", "c2", "d1"]));
    let mut row = class_row(t.c1(), class);
    row.extend([t.c0().into(), t.c2().into(), t.d1().into()]);
    table.push(row);
    Ok(table)
}

fn stars(cfg: &RunConfig) -> Result<Table, RunError> {
    let stars = star_values(cfg.max_s)?;
    let ratios = spacing_ratios(&stars);
    let mut table = Table::new(["s", "xi", "residual", "spacing_ratio"]);
    for s in &stars {
        let ratio = ratios
            .iter()
            .find(|(k, _)| *k == s.s)
            .map_or(Value::from(""), |(_, r)| Value::from(*r));
        table.push(vec![s.s.into(), s.value.into(), s.residual.into(), ratio]);
    }
    Ok(table)
}

fn scan(cfg: &RunConfig) -> Result<Table, RunError> {
    let mut table = Table::new(CLASS_HEADER);
    for s in bifurcation_scan(cfg.lo, cfg.hi, cfg.steps, cfg.max_iter)? {
        table.push(class_row(s.c1, s.class));
    }
    Ok(table)
}

fn basin(cfg: &RunConfig) -> Result<Artifact, RunError> {
    let t = threshold(cfg)?;
    let grid = render_basins(&t, &cfg.grid)?;
    Ok(match cfg.format {
        Format::Csv => Artifact::Table(basin_table(&grid)),
        Format::Pgm => Artifact::Image(image_bytes(&grid, ImageFormat::Pgm)),
        Format::Ppm => Artifact::Image(image_bytes(&grid, ImageFormat::Ppm)),
    })
}

fn census_table(cfg: &RunConfig) -> Result<Table, RunError> {
    let t = threshold(cfg)?;
    let c = census(
        &t,
        cfg.sites,
        cfg.samples,
        cfg.seed,
        cfg.grid.transient,
        cfg.max_period,
    );
    let mut header = vec![
        "attractor".to_owned(),
        "kind".to_owned(),
        "period".to_owned(),
        "hits".to_owned(),
        "fingerprint".to_owned(),
    ];
    header.extend((1..=cfg.sites).map(|i| format!("x{i}")));
    let mut table = Table::new(header);
    for (k, e) in c.entries.iter().enumerate() {
        let kind = if e.record.is_trivial() {
            "origin".to_owned()
        } else {
            e.record.kind.to_string()
        };
        let mut row = vec![
            k.into(),
            kind.into(),
            e.record.period.into(),
            e.hits.into(),
            e.record.window_fingerprint.into(),
        ];
        row.extend(e.record.orbit[0].iter().map(|&x| Value::from(x)));
        table.push(row);
    }
    if c.unresolved > 0 {
        let mut row = vec![
            Value::from(""),
            "unresolved".into(),
            "".into(),
            c.unresolved.into(),
            "".into(),
        ];
        row.extend((0..cfg.sites).map(|_| Value::from("")));
        table.push(row);
    }
    Ok(table)
}

fn markov(cfg: &RunConfig) -> Result<Table, RunError> {
    let t = threshold(cfg)?;
    let m = build_markov(&t, cfg.n)?;
    let mut table = Table::new([
        "index",
        "lo",
        "hi",
        "transitions",
        "n0",
        "spectral_radius",
        "entropy_bound",
    ]);
    for (a, (iv, row)) in m.intervals.iter().zip(&m.matrix).enumerate() {
        let bits: String = row.iter().map(|b| char::from(b'0' + b)).collect();
        table.push(vec![
            a.into(),
            iv.lo.into(),
            iv.hi.into(),
            bits.into(),
            m.n0.into(),
            m.spectral_radius.into(),
            m.entropy_bound().into(),
        ]);
    }
    Ok(table)
}

fn measure(cfg: &RunConfig) -> Result<Table, RunError> {
    let t = threshold(cfg)?;
    let mut table = Table::new([
        "j",
        "fraction",
        "stderr",
        "samples",
        "entered",
        "tent_model",
    ]);
    for e in estimate_avoidance_curve(&t, cfg.j, cfg.samples, cfg.seed) {
        table.push(vec![
            e.j.into(),
            e.fraction.into(),
            e.stderr.into(),
            e.samples.into(),
            (1.0 - e.fraction).into(),
            avoidance_measure_tent(&t, e.j).into(),
        ]);
    }
    Ok(table)
}

fn accumulation(cfg: &RunConfig) -> Result<Table, RunError> {
    let t = threshold(cfg)?;
    match &cfg.target {
        Some(Target::Corners { eps, resolutions }) => {
            let mut table = Table::new(["resolution", "eps", "corner", "components"]);
            for r in corner_accumulation(&t, &cfg.grid, eps, resolutions)? {
                table.push(vec![
                    r.resolution.into(),
                    r.eps.into(),
                    r.corner.label().into(),
                    r.components.into(),
                ]);
            }
            Ok(table)
        }
        Some(Target::Point { point, radii }) => {
            let mut table = Table::new(["resolution", "px", "py", "radius", "components"]);
            for r in interior_accumulation(&t, &cfg.grid, *point, radii)? {
                table.push(vec![
                    r.resolution.into(),
                    point.0.into(),
                    point.1.into(),
                    r.radius.into(),
                    r.components.into(),
                ]);
            }
            Ok(table)
        }
        None => Err(RunError::Usage(
            "accumulation needs --corner or --point".into(),
        )),
    }
}

/// Runs the subcommand without writing anything.
pub fn compute(cfg: &RunConfig) -> Result<Artifact, RunError> {
    let table = match cfg.command {
        Command::Basin => return basin(cfg),
        Command::Orbit => orbit(cfg)?,
        Command::Stars => stars(cfg)?,
        Command::Scan => scan(cfg)?,
        Command::Census => census_table(cfg)?,
        Command::Markov => markov(cfg)?,
        Command::Measure => measure(cfg)?,
        Command::Accumulation => accumulation(cfg)?,
    };
    Ok(Artifact::Table(table))
}

/// Runs the subcommand and writes its output to `--out`, or to `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), RunError> {
    let artifact = compute(cfg)?;
    let io = |e: std::io::Error| RunError::Runtime(format!("cannot write output: {e}"));
    match (&cfg.output, artifact) {
        (Some(path), Artifact::Table(t)) => write_csv(&t, path)?,
        (Some(path), Artifact::Image(bytes)) => std::fs::write(path, bytes).map_err(|source| {
            RunError::from(Error::Io {
                path: path.clone(),
                source,
            })
        })?,
        (None, Artifact::Table(t)) => t
            .write_to(&mut *stdout)
            .map_err(|e| RunError::Runtime(format!("cannot write output: {e}")))?,
        (None, Artifact::Image(bytes)) => stdout.write_all(&bytes).map_err(io)?,
    }
    stdout.flush().map_err(io)
}
