//! Filters a signal on the five-node quiver with `c = a51·a35 + a12·a41·a34`.
//! Only node 3 feeds either path, and both paths end at nodes 1 and 2, so
//! the output vanishes at nodes 3, 4 and 5.

use quiver_signal::path_algebra::FilterElement;
use quiver_signal::quiver::example_quiver;
use quiver_signal::sample::{random_representation, random_signal, rng};

fn main() -> quiver_signal::Result<()> {
    let q = example_quiver();
    let mut g = rng(1);
    let rep = random_representation(&q, &[2, 3, 2, 2, 1], &mut g);
    let x = random_signal(&rep, &mut g);

    let c = FilterElement::from_terms(
        &q,
        [(1.0, q.path(&["a35", "a51"])?), (1.0, q.path(&["a34", "a41", "a12"])?)],
    )?;
    println!("c = {}", c.describe(&q));

    let y = rep.apply_filter(&c, &x)?;
    for (node, block) in q.nodes().iter().zip(y.blocks()) {
        println!("y({node}) = {:?}", block.as_slice());
    }

    // the same output through the dense filter matrix
    let dense = rep.filter_matrix(&c)? * x.flatten();
    println!("max deviation from dense ρ(c)x: {:e}", (dense - y.flatten()).amax());
    Ok(())
}
