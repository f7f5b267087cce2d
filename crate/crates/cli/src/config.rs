//! Run configuration: command-line flags, `CASCADE_*` environment variables
//! and a `key=value` file, in that order of precedence, over built-in
//! defaults.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use cascade_core::attractor::xi2;
use cascade_core::basin::{GridSpec, DEFAULT_RESOLUTION, DEFAULT_TRANSIENT, DEFAULT_WINDOW};
use cascade_core::scalar::DEFAULT_MAX_ITER;
use cascade_core::seed::DEFAULT_SEED;
use cascade_core::Threshold;
use clap::{Arg, ArgAction, ArgGroup};

pub const ENV_PREFIX: &str = "CASCADE_";
/// Environment variable naming a config file when `--config` is absent.
pub const ENV_CONFIG: &str = "CASCADE_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Orbit,
    Stars,
    Scan,
    Basin,
    Census,
    Markov,
    Measure,
    Accumulation,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Orbit,
        Command::Stars,
        Command::Scan,
        Command::Basin,
        Command::Census,
        Command::Markov,
        Command::Measure,
        Command::Accumulation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::Stars => "stars",
            Command::Scan => "scan",
            Command::Basin => "basin",
            Command::Census => "census",
            Command::Markov => "markov",
            Command::Measure => "measure",
            Command::Accumulation => "accumulation",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Command::Orbit => "Classify the orbit of c1 under the threshold map",
            Command::Stars => "Star values and their spacing ratios",
            Command::Scan => "Classify a grid of thresholds",
            Command::Basin => "Render a two-site basin map",
            Command::Census => "Count lattice attractors from random initial states",
            Command::Markov => "Markov partition and entropy bound",
            Command::Measure => "Measure of points avoiding the critical interval",
            Command::Accumulation => "Component counts near corners or an interior point",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Orbit => &["c1", "max-iter"],
            Command::Stars => &["max-s"],
            Command::Scan => &["lo", "hi", "steps", "max-iter"],
            Command::Basin => &["c1", "res", "transient", "window", "pin", "format"],
            Command::Census => &["c1", "sites", "samples", "seed", "transient", "max-period"],
            Command::Markov => &["c1", "n"],
            Command::Measure => &["c1", "j", "samples", "seed"],
            Command::Accumulation => &[
                "c1",
                "res",
                "transient",
                "window",
                "corner",
                "point",
                "eps",
                "resolutions",
                "radii",
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Pgm,
    Ppm,
}

/// Where accumulation counts are taken.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Corners {
        eps: Vec<f64>,
        resolutions: Vec<usize>,
    },
    Point {
        point: (f64, f64),
        radii: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Absent for `stars` and `scan`.
    pub c1: Option<f64>,
    pub sites: usize,
    /// Basin grid; `transient` and `window` are shared with `census`.
    pub grid: GridSpec,
    pub samples: u64,
    pub seed: u64,
    pub max_period: usize,
    pub max_iter: usize,
    pub max_s: u32,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub n: usize,
    pub j: u32,
    pub target: Option<Target>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    /// `--help` or `--version`; the text goes to stdout with status 0.
    Display(String),
    Usage(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Display(s) | ConfigError::Usage(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for ConfigError {}

fn usage(msg: impl Into<String>) -> ConfigError {
    ConfigError::Usage(msg.into())
}

struct Key {
    name: &'static str,
    value: &'static str,
    help: &'static str,
}

const KEYS: &[Key] = &[
    Key {
        name: "c1",
        value: "X",
        help: "threshold in (0.75, 1)",
    },
    Key {
        name: "max-iter",
        value: "K",
        help: "orbit steps before giving up [10000]",
    },
    Key {
        name: "max-s",
        value: "S",
        help: "largest star index, at most 12 [8]",
    },
    Key {
        name: "lo",
        value: "A",
        help: "lower end of the scan [0.7501]",
    },
    Key {
        name: "hi",
        value: "B",
        help: "upper end of the scan [0.9999]",
    },
    Key {
        name: "steps",
        value: "K",
        help: "scan points, endpoints included [1000]",
    },
    Key {
        name: "sites",
        value: "N",
        help: "lattice sites [2]",
    },
    Key {
        name: "res",
        value: "R",
        help: "cells per axis [499]",
    },
    Key {
        name: "transient",
        value: "T",
        help: "steps discarded before measuring [100]",
    },
    Key {
        name: "window",
        value: "W",
        help: "steps summed into the fingerprint [12]",
    },
    Key {
        name: "pin",
        value: "X,..",
        help: "fixed values for sites 3.. of a basin slice",
    },
    Key {
        name: "samples",
        value: "M",
        help: "random samples [census 10000, measure 1000000]",
    },
    Key {
        name: "seed",
        value: "S",
        help: "master seed, decimal or 0x-hex [0x5EEDCA5CADE]",
    },
    Key {
        name: "max-period",
        value: "P",
        help: "longest period searched [64]",
    },
    Key {
        name: "n",
        value: "K",
        help: "partition depth [12]",
    },
    Key {
        name: "j",
        value: "J",
        help: "last step of the avoidance curve [10]",
    },
    Key {
        name: "corner",
        value: "",
        help: "count components in the corner boxes",
    },
    Key {
        name: "point",
        value: "PX,PY",
        help: "count components in disks around a point",
    },
    Key {
        name: "eps",
        value: "E,..",
        help: "decreasing corner box sizes [0.1,0.05,0.02]",
    },
    Key {
        name: "resolutions",
        value: "R,..",
        help: "increasing resolutions [125,249,499]",
    },
    Key {
        name: "radii",
        value: "R,..",
        help: "disk radii [0.01,0.02,0.05,0.1,0.2]",
    },
    Key {
        name: "format",
        value: "FMT",
        help: "csv, pgm or ppm [csv]",
    },
    Key {
        name: "out",
        value: "PATH",
        help: "output file [stdout]",
    },
];

const SWITCHES: &[&str] = &["corner"];

fn key(name: &str) -> Option<&'static Key> {
    KEYS.iter().find(|k| k.name == name)
}

fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase().replace('-', "_"))
}

fn cli() -> clap::Command {
    let mut app = clap::Command::new("cascade")
        .about("Threshold-coupled logistic lattices")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .global(true)
                .help("key=value config file"),
        );
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name()).about(cmd.about());
        for &name in cmd.keys().iter().chain(&["out"]) {
            let k = key(name).expect("known key");
            let arg = Arg::new(name).long(name).help(k.help);
            sub = sub.arg(if SWITCHES.contains(&name) {
                arg.action(ArgAction::SetTrue)
            } else {
                arg.value_name(k.value).allow_hyphen_values(true)
            });
        }
        if cmd == Command::Accumulation {
            sub = sub.group(ArgGroup::new("target").args(["corner", "point"]));
        }
        app = app.subcommand(sub);
    }
    app
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", no + 1))?;
        let k = k.trim().replace('_', "-");
        if key(&k).is_none() {
            return Err(format!("line {}: unknown key '{k}'", no + 1));
        }
        out.insert(k, v.trim().to_owned());
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from `argv` (including the program name), the
/// process environment and an optional config file. `--config` in `argv`
/// replaces `file`.
pub fn parse_config(
    argv: &[String],
    env: &HashMap<String, String>,
    file: Option<&Path>,
) -> Result<RunConfig, ConfigError> {
    let matches = cli().try_get_matches_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                ConfigError::Display(e.render().to_string())
            }
            ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                usage("missing subcommand (try --help)")
            }
            _ => {
                let text = e.render().to_string();
                let first = text.lines().next().unwrap_or("invalid arguments");
                usage(first.trim_start_matches("error: ").to_owned())
            }
        }
    })?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = Command::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .expect("registered subcommand");

    for var in env.keys() {
        if let Some(rest) = var.strip_prefix(ENV_PREFIX) {
            let k = rest.to_lowercase().replace('_', "-");
            if var != ENV_CONFIG && key(&k).is_none() {
                return Err(usage(format!("unknown environment variable {var}")));
            }
        }
    }

    let config_path = sub
        .get_one::<String>("config")
        .map(PathBuf::from)
        .or_else(|| file.map(Path::to_path_buf));
    let mut values = match &config_path {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    for k in KEYS {
        if let Some(v) = env.get(&env_name(k.name)) {
            values.insert(k.name.to_owned(), v.clone());
        }
    }
    for &name in command.keys().iter().chain(&["out"]) {
        if SWITCHES.contains(&name) {
            if sub.get_flag(name) {
                values.insert(name.to_owned(), "true".to_owned());
            }
        } else if let Some(v) = sub.get_one::<String>(name) {
            values.insert(name.to_owned(), v.clone());
        }
    }
    // A flag picks the accumulation target over lower layers.
    if command == Command::Accumulation {
        if sub.get_flag("corner") {
            values.remove("point");
        } else if sub.get_one::<String>("point").is_some() {
            values.remove("corner");
        }
    }
    build(command, &values)
}

struct Values<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Values<'_> {
    fn raw(&self, k: &str) -> Option<&str> {
        self.map.get(k).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, k: &str, default: T) -> Result<T, ConfigError> {
        match self.raw(k) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| usage(format!("invalid value '{v}' for {k}"))),
        }
    }

    fn list<T: std::str::FromStr + Clone>(
        &self,
        k: &str,
        default: &[T],
    ) -> Result<Vec<T>, ConfigError> {
        match self.raw(k) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| usage(format!("invalid value '{v}' for {k}")))
                })
                .collect(),
        }
    }

    fn seed(&self) -> Result<u64, ConfigError> {
        let Some(v) = self.raw("seed") else {
            return Ok(DEFAULT_SEED);
        };
        let digits = v.replace('_', "");
        let parsed = match digits
            .strip_prefix("0x")
            .or_else(|| digits.strip_prefix("0X"))
        {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => digits.parse(),
        };
        parsed.map_err(|_| usage(format!("invalid value '{v}' for seed")))
    }

    fn switch(&self, k: &str) -> Result<bool, ConfigError> {
        self.parse(k, false)
    }
}

fn build(command: Command, map: &BTreeMap<String, String>) -> Result<RunConfig, ConfigError> {
    let v = Values { map };
    let c1 = match v.raw("c1") {
        Some(_) => Some(v.parse("c1", 0.0)?),
        None => None,
    };
    let needs_c1 = !matches!(command, Command::Stars | Command::Scan);
    if needs_c1 {
        let Some(c1) = c1 else {
            return Err(usage(format!("{} needs --c1", command.name())));
        };
        Threshold::new(c1).map_err(|_| usage(format!("c1 = {c1} must lie in (0.75, 1)")))?;
        if command == Command::Markov && c1 <= xi2() {
            return Err(usage(format!(
                "markov needs c1 > (2 + sqrt 3)/4 = {:.9}, got {c1}",
                xi2()
            )));
        }
    }

    let format = match v.raw("format").unwrap_or("csv") {
        "csv" => Format::Csv,
        "pgm" => Format::Pgm,
        "ppm" => Format::Ppm,
        other => return Err(usage(format!("unknown format '{other}' (csv, pgm, ppm)"))),
    };
    if format != Format::Csv && command != Command::Basin {
        return Err(usage("image formats apply to basin only"));
    }

    let grid = GridSpec {
        resolution: v.parse("res", DEFAULT_RESOLUTION)?,
        pinned: v.list("pin", &[])?,
        transient: v.parse("transient", DEFAULT_TRANSIENT)?,
        window: v.parse("window", DEFAULT_WINDOW)?,
        ..GridSpec::default()
    };
    grid.validate().map_err(|e| usage(e.to_string()))?;

    let default_samples = if command == Command::Measure {
        1_000_000
    } else {
        10_000
    };
    let cfg = RunConfig {
        command,
        c1,
        sites: v.parse("sites", 2)?,
        grid,
        samples: v.parse("samples", default_samples)?,
        seed: v.seed()?,
        max_period: v.parse("max-period", 64)?,
        max_iter: v.parse("max-iter", DEFAULT_MAX_ITER)?,
        max_s: v.parse("max-s", 8)?,
        lo: v.parse("lo", 0.7501)?,
        hi: v.parse("hi", 0.9999)?,
        steps: v.parse("steps", 1000)?,
        n: v.parse("n", 12)?,
        j: v.parse("j", 10)?,
        target: target(command, &v)?,
        output: v.raw("out").map(PathBuf::from),
        format,
    };
    check_ranges(&cfg)?;
    Ok(cfg)
}

fn target(command: Command, v: &Values) -> Result<Option<Target>, ConfigError> {
    if command != Command::Accumulation {
        return Ok(None);
    }
    let corner = v.switch("corner")?;
    let point = v.raw("point");
    match (corner, point) {
        (true, Some(_)) => Err(usage("--corner and --point are mutually exclusive")),
        (false, None) => Err(usage("accumulation needs --corner or --point PX,PY")),
        (true, None) => Ok(Some(Target::Corners {
            eps: v.list("eps", &[0.1, 0.05, 0.02])?,
            resolutions: v.list("resolutions", &[125, 249, 499])?,
        })),
        (false, Some(_)) => {
            let p: Vec<f64> = v.list("point", &[])?;
            let [px, py] = p[..] else {
                return Err(usage("--point takes two values PX,PY"));
            };
            Ok(Some(Target::Point {
                point: (px, py),
                radii: v.list("radii", &[0.01, 0.02, 0.05, 0.1, 0.2])?,
            }))
        }
    }
}

fn check_ranges(cfg: &RunConfig) -> Result<(), ConfigError> {
    let fail = |msg: String| Err(usage(msg));
    match cfg.command {
        Command::Orbit | Command::Scan if cfg.max_iter == 0 => {
            fail("max-iter must be positive".into())
        }
        Command::Stars if !(2..=12).contains(&cfg.max_s) => {
            fail(format!("max-s = {} must lie in 2..=12", cfg.max_s))
        }
        Command::Scan if !(cfg.lo > 0.75 && cfg.lo < cfg.hi && cfg.hi < 1.0) => fail(format!(
            "scan range [{}, {}] must satisfy 0.75 < lo < hi < 1",
            cfg.lo, cfg.hi
        )),
        Command::Scan if cfg.steps < 2 => fail("steps must be at least 2".into()),
        Command::Census if cfg.sites == 0 => fail("sites must be positive".into()),
        Command::Census | Command::Measure if cfg.samples == 0 => {
            fail("samples must be positive".into())
        }
        Command::Census if cfg.max_period == 0 => fail("max-period must be positive".into()),
        Command::Accumulation => match &cfg.target {
            Some(Target::Point { point, .. })
                if !(point.0 > 0.0 && point.0 < 1.0 && point.1 > 0.0 && point.1 < 1.0) =>
            {
                fail("--point must lie in the open unit square".into())
            }
            Some(Target::Corners { eps, resolutions }) => {
                if eps.windows(2).any(|w| w[1] >= w[0]) {
                    fail("eps values must be decreasing".into())
                } else if resolutions.windows(2).any(|w| w[1] <= w[0]) || resolutions.contains(&0) {
                    fail("resolutions must be increasing".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}
