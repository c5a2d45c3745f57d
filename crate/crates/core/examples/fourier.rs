//! Fourier coordinates exist only for semisimple representations; for an
//! acyclic quiver that means every arrow map is zero. Other inputs get their
//! composition factors instead.

use quiver_signal::decomposition::{composition_factors, fourier_decompose, is_semisimple};
use quiver_signal::path_algebra::FilterElement;
use quiver_signal::quiver::Quiver;
use quiver_signal::representation::Representation;
use quiver_signal::sample::{random_representation, random_signal, rng};

fn main() -> quiver_signal::Result<()> {
    let q = Quiver::chain(3);
    let mut g = rng(4);
    let rep = Representation::zero_maps(q.clone(), vec![2, 1, 3])?;
    let x = random_signal(&rep, &mut g);

    let hat = fourier_decompose(&rep, &x)?;
    println!("multiplicities {:?}", hat.multiplicities);
    let c = FilterElement::from_terms(&q, [(2.0, q.trivial(0)), (-1.0, q.trivial(2)), (5.0, q.path(&["a12"])?)])?;
    let lhs = fourier_decompose(&rep, &rep.apply_filter(&c, &x)?)?;
    let rhs = hat.apply_filter(&rep, &c)?;
    println!("Δ(ρ(c)x) = ρ(c)Δ(x): {}", lhs == rhs);
    println!("Δ⁻¹Δx = x: {}", hat.synthesize(&rep)? == x);

    let busy = random_representation(&q, &[2, 1, 3], &mut g);
    println!("semisimple: {}", is_semisimple(&busy)?);
    match fourier_decompose(&busy, &random_signal(&busy, &mut g)) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!(),
    }
    println!("composition factors {:?}", composition_factors(&busy)?);
    Ok(())
}
