//! The versioned report the command line writes for `check`.

use std::path::Path;

use netinform::report::{run_check, CheckConfig, Inputs, ModeSelection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json");
    let inputs = Inputs::from_files(&file, None)?;
    let cfg = CheckConfig {
        mode: ModeSelection::Both,
        probe: 10,
        ..CheckConfig::default()
    };
    let report = run_check(&inputs, &cfg)?;
    println!("{}", report.to_json());
    eprintln!("exit code {}", report.exit_code);
    Ok(())
}
