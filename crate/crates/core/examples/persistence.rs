//! Persistent homology of a triangle that appears vertex by vertex, then
//! edge by edge, then gets filled in.

use quiver_signal::tda::{filtered_triangle, FilteredComplex, Simplex};

fn main() -> quiver_signal::Result<()> {
    let cx = filtered_triangle();
    for k in 0..2 {
        let bc = cx.persistence_barcode(k)?;
        let betti: Vec<usize> = (0..=cx.steps()).map(|l| cx.betti(k, l)).collect();
        println!("H{k}: betti {betti:?}, bars {:?}", bc.bars());
    }

    // a square whose diagonal arrives late, splitting one loop into two
    let mut simplices: Vec<Simplex> = ["a", "b", "c", "d"].iter().map(|v| Simplex::new([*v], 0)).collect();
    for (u, v) in [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")] {
        simplices.push(Simplex::new([u, v], 1));
    }
    simplices.push(Simplex::new(["a", "c"], 2));
    simplices.push(Simplex::new(["a", "b", "c"], 3));
    let square = FilteredComplex::new(simplices)?;
    println!("square H1 bars {:?}", square.persistence_barcode(1)?.bars());
    Ok(())
}
