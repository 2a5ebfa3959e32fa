//! Regenerates the bundled corpus: `cargo run --release -p algdist --example gen_corpus [dir]`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use algdist::io::{hgr::write_hgr, mtx::write_matrix_market};
use algdist::synth;

fn main() -> algdist::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus"));
    std::fs::create_dir_all(&dir)?;

    let graphs = [
        ("grid_40x50.mtx", synth::grid(40, 50, 11)),
        ("random_2k.mtx", synth::random_connected(2000, 6000, 12)),
        ("communities_5k.mtx", synth::two_communities(2500, 8, 40, 13)),
        ("banded_15k.mtx", synth::banded(15000, 3, 40, 14)),
        ("banded_30k.mtx", synth::banded(30000, 3, 200, 15)),
    ];
    for (name, g) in &graphs {
        let mut f = BufWriter::new(File::create(dir.join(name))?);
        write_matrix_market(g, &mut f)?;
        f.flush()?;
        println!("{name}: n={} m={}", g.n(), g.num_edges());
    }

    let hypergraphs = [
        ("hyper_300.hgr", synth::random_hypergraph(300, 400, 6, 20, 21)),
        ("hyper_1k.hgr", synth::random_hypergraph(1000, 1500, 8, 40, 22)),
    ];
    for (name, h) in &hypergraphs {
        let mut f = BufWriter::new(File::create(dir.join(name))?);
        write_hgr(h, &mut f)?;
        f.flush()?;
        println!("{name}: nv={} ne={}", h.num_vertices(), h.num_hyperedges());
    }
    Ok(())
}
