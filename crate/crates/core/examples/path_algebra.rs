//! Products and sums in the path algebra. Paths are written right to left:
//! `a23·a12` first follows `a12`, then `a23`.

use quiver_signal::path_algebra::FilterElement;
use quiver_signal::quiver::example_quiver;

fn main() -> quiver_signal::Result<()> {
    let q = example_quiver();
    let a12 = FilterElement::from_path(q.path(&["a12"])?);
    let a23 = FilterElement::from_path(q.path(&["a23"])?);
    let a34 = FilterElement::from_path(q.path(&["a34"])?);

    let composed = FilterElement::multiply(&a23, &a12)?;
    println!("a23 · a12 = {}", composed.describe(&q));
    let blocked = FilterElement::multiply(&a12, &a23)?;
    println!("a12 · a23 = {}", blocked.describe(&q));

    let b = FilterElement::add(&a12, &a34, 2.0, -1.0)?;
    let product = FilterElement::multiply(&a23, &b)?;
    println!("a23 · (2 a12 - a34) = {}", product.describe(&q));

    let one = FilterElement::unit(&q);
    println!("1 = {}", one.describe(&q));
    assert_eq!(FilterElement::multiply(&one, &b)?, b);

    let paths = q.enumerate_paths(2);
    println!("{} paths of length at most 2:", paths.len());
    for p in &paths {
        println!("  {}", q.describe(p));
    }
    Ok(())
}
