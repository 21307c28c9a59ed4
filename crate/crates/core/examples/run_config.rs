// Runs an experiment from a JSON configuration and writes its CSV and
// result record.

use gromov_walk::config::ExperimentConfig;
use gromov_walk::experiment;

const CONFIG: &str = r#"{
    "schema_version": 1,
    "model": {"kind": "free", "rank": 2},
    "step": {"support": [{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
                         {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]},
    "estimator": "tail",
    "params": {"ns": [20, 40], "l": 0.25},
    "seed": 2024,
    "trials": 2000
}"#;

pub fn run_example() -> gromov_walk::Result<()> {
    let config = ExperimentConfig::from_json(CONFIG)?;
    println!("config digest {}", config.digest());
    let out = experiment::run(&config)?;
    print!("{}", String::from_utf8_lossy(&out.table.to_csv()?));
    let dir = std::env::temp_dir().join(format!("gromov-walk-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let record = out.write(&dir.join("tail.csv"))?;
    println!("record written to {}", record.display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
