//! Hom spaces between representations, and isomorphism testing with a
//! witness.

use quiver_signal::linalg::RankTolerance;
use quiver_signal::morphisms::{end_dim, hom_basis, is_isomorphic, DEFAULT_TRIALS};
use quiver_signal::representation::Representation;
use quiver_signal::sample::{random_basis_change, rng};

fn main() -> quiver_signal::Result<()> {
    let tol = RankTolerance::Default;
    for (a, b, c, d) in [(1, 2, 2, 3), (2, 3, 1, 2), (1, 3, 1, 3), (1, 1, 3, 3)] {
        let src = Representation::interval(3, a, b)?;
        let dst = Representation::interval(3, c, d)?;
        let basis = hom_basis(&src, &dst, tol)?;
        println!("dim Hom(I[{a},{b}], I[{c},{d}]) = {}", basis.len());
        assert!(basis.iter().all(|t| t.commutes()));
    }

    let planted = Representation::interval(3, 1, 3)?.direct_sum(&Representation::interval(3, 2, 2)?)?;
    let p = random_basis_change(&planted, &mut rng(5));
    let moved = planted.change_basis(&p)?;
    println!("end dim before/after basis change: {} / {}", end_dim(&planted, tol), end_dim(&moved, tol));

    let verdict = is_isomorphic(&planted, &moved, DEFAULT_TRIALS, 11, tol)?;
    println!("isomorphic: {}", verdict.isomorphic);
    if let Some(w) = verdict.witness {
        let (residual, scale) = w.residual();
        println!("witness commuting residual {residual:e} at scale {scale:e}");
    }
    Ok(())
}
