//! Benchmark inputs shared by the criterion targets.

use rbcdn::generate::{self, EmbeddedGraph};
use rbcdn::{build_rbcdn_instance, fpp_embed, Layout, RbcdnRpInstance};

/// Seeded maximal planar graph drawn on the grid.
pub fn drawn_maximal(n: usize, seed: u64) -> (EmbeddedGraph, Layout) {
    let es = generate::random_maximal_planar(n, seed);
    let layout = fpp_embed(&es.graph, &es.rotation)
        .and_then(|g| Ok(g.to_layout()?))
        .expect("generated graphs embed");
    (es, layout)
}

/// Reduction instance built from a wheel, which is Hamiltonian.
pub fn wheel_instance(n: usize) -> RbcdnRpInstance {
    let es = generate::wheel(n);
    build_rbcdn_instance(&es.graph, &es.rotation).expect("wheels reduce")
}
