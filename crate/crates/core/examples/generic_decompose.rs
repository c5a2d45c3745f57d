//! Splits a representation into indecomposable summands by factoring a random
//! endomorphism, then reassembles it.

use std::collections::BTreeMap;

use quiver_signal::decomposition::{generic_decompose, DEFAULT_MAX_ROUNDS};
use quiver_signal::linalg::RankTolerance;
use quiver_signal::morphisms::end_dim;
use quiver_signal::representation::Representation;
use quiver_signal::sample::{random_basis_change, rng};

fn main() -> quiver_signal::Result<()> {
    let tol = RankTolerance::Default;
    let planted = Representation::interval_sum(4, &BTreeMap::from([((1, 4), 1), ((2, 3), 2), ((3, 3), 1), ((1, 2), 1)]))?;
    let rep = planted.change_basis(&random_basis_change(&planted, &mut rng(8)))?;

    let list = generic_decompose(&rep, 42, DEFAULT_MAX_ROUNDS, tol);
    for s in &list.summands {
        println!("dims {:?}  end dim {}  unsplit {}", s.rep.dims(), end_dim(&s.rep, tol), s.unsplit);
    }
    println!("reassembles to an isomorphic copy: {}", list.verify(&rep, 7, tol)?);
    Ok(())
}
