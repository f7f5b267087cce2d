use std::collections::HashMap;
use std::io::Write;

use cascade_cli::config::{parse_config_text, Target};
use cascade_cli::{parse_config, Command, ConfigError, Format};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("cascade")
        .chain(args.iter().copied())
        .map(String::from)
        .collect()
}

fn no_env() -> HashMap<String, String> {
    HashMap::new()
}

fn env(pairs: &[(&str, &str)]) -> HashMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn is_usage(r: Result<cascade_cli::RunConfig, ConfigError>) -> bool {
    matches!(r, Err(ConfigError::Usage(_)))
}

#[test]
fn basin_defaults_follow_the_reference_protocol() {
    let cfg = parse_config(&argv(&["basin", "--c1", "0.84"]), &no_env(), None).unwrap();
    assert_eq!(cfg.command, Command::Basin);
    assert_eq!(cfg.c1, Some(0.84));
    assert_eq!(cfg.grid.resolution, 499);
    assert_eq!(cfg.grid.transient, 100);
    assert_eq!(cfg.grid.window, 12);
    assert_eq!(cfg.format, Format::Csv);
    assert_eq!(cfg.seed, 0x5EED_CA5CADE);
}

#[test]
fn threshold_below_three_quarters_is_a_usage_error() {
    assert!(is_usage(parse_config(
        &argv(&["orbit", "--c1", "0.5"]),
        &no_env(),
        None
    )));
    assert!(is_usage(parse_config(
        &argv(&["orbit", "--c1", "1.0"]),
        &no_env(),
        None
    )));
    assert!(is_usage(parse_config(&argv(&["orbit"]), &no_env(), None)));
}

#[test]
fn census_config_is_fully_determined() {
    let a = ["census", "--c1", "0.84", "--sites", "3", "--seed", "7"];
    let cfg = parse_config(&argv(&a), &no_env(), None).unwrap();
    assert_eq!((cfg.sites, cfg.seed, cfg.samples), (3, 7, 10_000));
    assert_eq!(cfg, parse_config(&argv(&a), &no_env(), None).unwrap());
}

#[test]
fn flags_beat_environment_beat_file_beat_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "# basin settings\nres = 63\ntransient=50\nwindow=8\nc1=0.85"
    )
    .unwrap();
    drop(f);

    let e = env(&[("CASCADE_TRANSIENT", "60"), ("CASCADE_WINDOW", "9")]);
    let cfg = parse_config(&argv(&["basin", "--window", "10"]), &e, Some(&path)).unwrap();
    assert_eq!(cfg.grid.resolution, 63);
    assert_eq!(cfg.grid.transient, 60);
    assert_eq!(cfg.grid.window, 10);
    assert_eq!(cfg.c1, Some(0.85));

    let cfg = parse_config(&argv(&["basin"]), &no_env(), Some(&path)).unwrap();
    assert_eq!((cfg.grid.transient, cfg.grid.window), (50, 8));

    // --config replaces the file argument.
    let other = dir.path().join("other.conf");
    std::fs::write(&other, "c1=0.9\n").unwrap();
    let a = argv(&["basin", "--config", other.to_str().unwrap()]);
    let cfg = parse_config(&a, &no_env(), Some(&path)).unwrap();
    assert_eq!((cfg.c1, cfg.grid.resolution), (Some(0.9), 499));
}

#[test]
fn unknown_keys_and_flags_are_rejected() {
    assert!(parse_config_text("c1=0.9\nspeed=3\n")
        .unwrap_err()
        .contains("line 2"));
    assert!(parse_config_text("c1 0.9\n").is_err());
    assert!(parse_config_text("max_iter = 5").is_ok());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "colour=red\n").unwrap();
    assert!(is_usage(parse_config(
        &argv(&["stars"]),
        &no_env(),
        Some(&path)
    )));
    assert!(is_usage(parse_config(
        &argv(&["stars", "--colour", "red"]),
        &no_env(),
        None
    )));
    assert!(is_usage(parse_config(
        &argv(&["stars"]),
        &env(&[("CASCADE_COLOUR", "red")]),
        None
    )));
    // Keys of other subcommands are known but not flags here.
    assert!(is_usage(parse_config(
        &argv(&["stars", "--c1", "0.9"]),
        &no_env(),
        None
    )));
    let missing = dir.path().join("missing.conf");
    assert!(is_usage(parse_config(
        &argv(&["stars"]),
        &no_env(),
        Some(&missing)
    )));
}

#[test]
fn out_of_range_values_are_rejected() {
    let bad: &[&[&str]] = &[
        &["basin", "--c1", "0.84", "--res", "1"],
        &["basin", "--c1", "0.84", "--window", "0"],
        &["basin", "--c1", "0.84", "--format", "png"],
        &["census", "--c1", "0.84", "--format", "ppm"],
        &["census", "--c1", "0.84", "--samples", "0"],
        &["census", "--c1", "0.84", "--seed", "-1"],
        &["markov", "--c1", "0.9"],
        &["scan", "--lo", "0.9", "--hi", "0.8"],
        &["stars", "--max-s", "40"],
        &["accumulation", "--c1", "0.84"],
        &[
            "accumulation",
            "--c1",
            "0.84",
            "--corner",
            "--point",
            "0.5,0.5",
        ],
        &["accumulation", "--c1", "0.84", "--point", "1.5,0.5"],
        &["accumulation", "--c1", "0.84", "--point", "0.5"],
        &[
            "accumulation",
            "--c1",
            "0.84",
            "--corner",
            "--eps",
            "0.01,0.1",
        ],
        &["measure", "--c1", "abc"],
    ];
    for args in bad {
        assert!(
            is_usage(parse_config(&argv(args), &no_env(), None)),
            "{args:?}"
        );
    }
}

#[test]
fn seeds_accept_hex() {
    let cfg = parse_config(
        &argv(&["measure", "--c1", "0.9", "--seed", "0x5EED_CA5CADE"]),
        &no_env(),
        None,
    )
    .unwrap();
    assert_eq!(cfg.seed, 0x5EED_CA5CADE);
    assert_eq!(cfg.samples, 1_000_000);
}

#[test]
fn accumulation_targets() {
    let cfg = parse_config(
        &argv(&["accumulation", "--c1", "0.94", "--point", "0.75,0.75"]),
        &no_env(),
        None,
    )
    .unwrap();
    assert!(matches!(
        cfg.target,
        Some(Target::Point {
            point: (0.75, 0.75),
            ..
        })
    ));
    // A flag overrides the target chosen in the environment.
    let e = env(&[("CASCADE_POINT", "0.75,0.75")]);
    let cfg = parse_config(
        &argv(&["accumulation", "--c1", "0.94", "--corner"]),
        &e,
        None,
    )
    .unwrap();
    assert!(matches!(cfg.target, Some(Target::Corners { .. })));
}

#[test]
fn help_is_not_an_error() {
    assert!(matches!(
        parse_config(&argv(&["--help"]), &no_env(), None),
        Err(ConfigError::Display(_))
    ));
}
