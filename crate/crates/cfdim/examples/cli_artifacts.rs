//! Driving the command layer from code: resolved configs, the CSV pressure
//! cache, and the JSON artifacts the `cfdim` binary writes.

use cfdim::cli::{execute, Command, PressureCache, RunConfig};
use cfdim::pressure::{Alphabet, SummationMode};
use cfdim::Rational;

fn main() -> cfdim::Result<()> {
    let cache = std::env::temp_dir().join("cfdim-example-cache.csv");
    let mut cfg = RunConfig::new(Command::Pressure {
        base: Rational::frac(3, 2),
        alphabet: Alphabet::Bound(3),
        n: 3,
        tol: 1e-10,
        mode: SummationMode::CompensatedFloat,
        leaf_budget: 1 << 20,
    });
    cfg.cache = Some(cache.clone());

    for _ in 0..2 {
        let out = execute(&cfg)?;
        let r = &out.artifact.result;
        println!("s = {}  cache: {}", r["s_value"], r["cache"]);
    }
    println!("{}", execute(&cfg)?.artifact.render());
    println!("{} cached rows in {}", PressureCache::open(&cache)?.len(), cache.display());
    Ok(())
}
