//! Interval decomposition of a representation of `1 → 2` with two copies of
//! `[1,2]` and one each of `[1,1]` and `[2,2]`, hidden behind a random
//! change of basis.

use std::collections::BTreeMap;

use quiver_signal::decomposition::barcode_interval;
use quiver_signal::linalg::RankTolerance;
use quiver_signal::representation::Representation;
use quiver_signal::sample::{random_basis_change, rng};

fn main() -> quiver_signal::Result<()> {
    let planted = Representation::interval_sum(2, &BTreeMap::from([((1, 2), 2), ((1, 1), 1), ((2, 2), 1)]))?;
    for seed in 0..3 {
        let p = random_basis_change(&planted, &mut rng(seed));
        let rep = planted.change_basis(&p)?;
        let bc = barcode_interval(&rep, RankTolerance::Default)?;
        let bars: Vec<String> = bc
            .multiplicities
            .iter()
            .map(|(&(a, b), m)| format!("[{a},{b}]x{m}"))
            .collect();
        println!("seed {seed}: {}", bars.join(" "));
    }
    Ok(())
}
