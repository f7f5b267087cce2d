use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use cascade_cli::config::ENV_CONFIG;
use cascade_cli::{execute, parse_config, ConfigError};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let env: HashMap<String, String> = std::env::vars().collect();
    let file = env.get(ENV_CONFIG).map(PathBuf::from);
    let cfg = match parse_config(&argv, &env, file.as_deref()) {
        Ok(cfg) => cfg,
        Err(ConfigError::Display(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("cascade: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cfg, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cascade: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
