use rbcdn::generate::{random_maximal_planar, random_planar, random_tree, EmbeddedGraph};
use rbcdn::geom::segments_properly_intersect;
use rbcdn::planar::{
    canonical_order, fpp_embed, triangulate, validate_rotation_system, verify_canonical_order, RotationSystem,
};

fn assert_good_drawing(es: &EmbeddedGraph) {
    let n = es.node_count() as i64;
    let drawn = fpp_embed(&es.graph, &es.rotation).unwrap();
    for &(x, y) in &drawn.coords {
        assert!(
            (0..=2 * n - 4).contains(&x) && (0..=n - 2).contains(&y),
            "({x},{y}) out of grid for n={n}"
        );
    }
    let layout = drawn.to_layout().unwrap();
    assert!(!segments_properly_intersect(&layout), "crossing for {}", es.graph);
    assert_eq!(drawn.graph, es.graph);
    let faces = validate_rotation_system(&es.graph, &RotationSystem::from_layout(&layout)).unwrap();
    assert_eq!(faces, 2 + es.graph.link_count() - es.node_count());
}

#[test]
fn maximal_planar_drawings() {
    for seed in 0..60 {
        let n = 3 + (seed as usize * 7) % 48;
        let es = random_maximal_planar(n, seed);
        let co = canonical_order(&es.graph, &es.rotation).unwrap();
        verify_canonical_order(&es.graph, &es.rotation, &co.order).unwrap();
        assert_good_drawing(&es);
    }
}

#[test]
fn sparse_planar_drawings() {
    for seed in 0..60 {
        let n = 3 + (seed as usize * 5) % 30;
        let es = random_planar(n, 0.3, seed);
        let tri = triangulate(&es.graph, &es.rotation).unwrap();
        assert_eq!(tri.graph.link_count(), 3 * n - 6);
        assert_eq!(&tri.graph.links()[..es.graph.link_count()], es.graph.links());
        assert_good_drawing(&es);
        assert_good_drawing(&random_tree(n, seed));
    }
}
