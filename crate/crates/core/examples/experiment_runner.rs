//! Runs a small experiment definition and prints the JSON-lines report.
//!
//!     cargo run --release --example experiment_runner

use satstream::harness::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"{
  "master_seed": 1,
  "experiments": [
    {
      "name": "lp-round",
      "task": {"problem": "maxsat", "mode": "lp_round"},
      "source": {"kind": "random", "n": 12, "m": 600, "min_len": 1, "max_len": 5},
      "instances": 2, "seeds": 2, "eps": 0.15, "oracle": true,
      "ratio_threshold": 0.3, "required_success": 0.95
    },
    {
      "name": "bounded-frequency",
      "task": {"problem": "minsat", "algo": "freq", "f": 4},
      "source": {"kind": "bounded_frequency", "n": 12, "f": 4, "max_len": 6},
      "instances": 3, "eps": 0.2, "oracle": true, "ratio_threshold": 13.86, "required_success": 1.0
    }
  ]
}"#;

fn main() {
    let cfg: ExperimentConfig = serde_json::from_str(CONFIG).unwrap();
    let report = run_experiment(&cfg).unwrap();
    print!("{}", report.to_json_lines());
    println!("all thresholds met: {}", report.all_passed());
}
