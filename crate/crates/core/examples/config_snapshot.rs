//! Reads an experiment configuration, builds its soliton and round-trips
//! the fields through the binary snapshot format.
//!
//!     cargo run --release --example config_snapshot

use mlsim::io::{decode_snapshot, encode_snapshot, ExperimentConfig};
use mlsim::soliton::build_soliton;

const CONFIG: &str = r#"
seed = 3

[grid]
L = 16.0
N = 64

[soliton]
v = [0.4, 0.2]
omega = 2.0

[integrator]
T = 4.0
"#;

fn main() -> mlsim::Result<()> {
    let cfg = ExperimentConfig::from_toml(CONFIG)?;
    cfg.validate()?;
    let grid = cfg.grid()?;
    let rec = build_soliton(cfg.soliton_params()?, &cfg.density(&grid)?, cfg.particle()?)?;

    let components: Vec<Vec<f64>> = (0..2)
        .map(|c| rec.a.component(c).values())
        .chain((0..2).map(|c| rec.pi.component(c).values()))
        .collect();
    let bytes = encode_snapshot(&grid, 0.0, &components)?;
    let snap = decode_snapshot(&bytes)?;
    assert_eq!(snap.components, components);
    println!(
        "{} bytes, N = {}, L = {}, {} components",
        bytes.len(),
        snap.n,
        snap.len,
        snap.components.len()
    );
    println!("dt = {}, steps = {}", cfg.dt(), cfg.steps());
    print!("{}", cfg.to_toml());
    Ok(())
}
