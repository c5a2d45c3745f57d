//! Loads the bundled fixtures, writes them back in canonical form and runs
//! the command-line front end on them.

use quiver_signal::cli::run;
use quiver_signal::io::Workspace;

fn main() -> quiver_signal::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let mut ws = Workspace::default();
    ws.load_quiver(format!("{dir}/five_node_quiver.json"))?;
    ws.load_representation(format!("{dir}/five_node_rep.json"))?;
    ws.load_signal(format!("{dir}/five_node_signal.json"))?;
    ws.load_filter(format!("{dir}/five_node_filter.json"))?;

    let original = std::fs::read_to_string(format!("{dir}/five_node_quiver.json")).expect("fixture");
    let saved = ws.save()?;
    println!("quiver file round-trips byte for byte: {}", saved[0] == original);

    let out = run([
        "quiver-signal",
        "decompose",
        "--mode",
        "barcode",
        "-q",
        &format!("{dir}/a2_quiver.json"),
        "-r",
        &format!("{dir}/a2_rep.json"),
    ]);
    println!("exit {}\n{}", out.code, out.stdout);
    Ok(())
}
