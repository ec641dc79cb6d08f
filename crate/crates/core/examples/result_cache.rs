//! Memoizing expensive results on disk, keyed by operation and parameters.

use std::error::Error;

use lagrange_spectra::analysis::{d_hi_at, Resolution};
use lagrange_spectra::cache::Cache;
use lagrange_spectra::interval::parse_rational;
use serde_json::json;

pub fn run() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("lagrange-spectra-example-{}", std::process::id()));
    let cache = Cache::new(&dir);
    let params = json!({"N": 3, "window": 2, "t": "3.2"});
    for _ in 0..2 {
        let (payload, status) = cache.get_or_compute("d_hi", &params, || {
            let res = Resolution::new(3, 2);
            Ok(d_hi_at(&parse_rational("3.2")?, &res)?.to_string())
        })?;
        println!("{status:?}: dHi(3.2) = {payload}");
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
