//! A shift operator `ρ(p)` is zero except for one block, at row `h(p)` and
//! column `t(p)`, which holds the composite of the maps along `p`.

use quiver_signal::quiver::example_quiver;
use quiver_signal::sample::{random_representation, rng};

fn main() -> quiver_signal::Result<()> {
    let q = example_quiver();
    let rep = random_representation(&q, &[2, 3, 2, 2, 1], &mut rng(3));

    for ids in [&["a34", "a41"][..], &["a44", "a44"][..], &["a22"][..]] {
        let p = q.path(ids)?;
        let s = rep.shift_operator(&p)?;
        let (r, c) = s.support();
        assert_eq!(s.nonzero_blocks(), vec![(r, c)]);
        println!(
            "ρ({}) is {}x{} with its only nonzero block at ({}, {}):",
            q.describe(&p),
            s.matrix.nrows(),
            s.matrix.ncols(),
            q.nodes()[r],
            q.nodes()[c],
        );
        println!("{}", s.block(r, c));
    }
    Ok(())
}
