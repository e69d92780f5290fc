mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use ngo_strings::partitions::partitions_of;
use ngo_strings::quiver::spectral_dual_graph;
use ngo_strings::{Error, Matrix, MultiGraph, Partition, Quiver, VertexPartition};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn triangle() -> Quiver {
    Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
}

#[test]
fn spectral_dual_graph_examples() {
    let g = spectral_dual_graph(&p("2,2"), 2).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.betti1().unwrap()), (2, 8, 7));
    assert_eq!(g.loop_count(), 0);

    let g = spectral_dual_graph(&p("2,1,1"), 2).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.betti1().unwrap()), (3, 10, 8));
    let adj = g.adjacency();
    assert_eq!((adj[0][1], adj[0][2], adj[1][2]), (4, 4, 2));

    for g in 2..6 {
        let single = spectral_dual_graph(&p("5"), g).unwrap();
        assert_eq!((single.vertex_count(), single.edge_count(), single.betti1().unwrap()), (1, 0, 0));
    }
    assert!(matches!(spectral_dual_graph(&p("1,1"), 1), Err(Error::InvalidArgument(_))));
}

#[test]
fn spectral_dual_graphs_are_connected_with_expected_multiplicities() {
    for n in 1..=7 {
        for part in partitions_of(n).unwrap() {
            for g in 2..=4u32 {
                let graph = spectral_dual_graph(&part, g).unwrap();
                assert!(graph.is_connected());
                let adj = graph.adjacency();
                let parts = part.parts();
                for i in 0..parts.len() {
                    for j in 0..parts.len() {
                        let expected = if i == j { 0 } else { parts[i] * parts[j] * (2 * g - 2) };
                        assert_eq!(adj[i][j], expected);
                    }
                }
            }
        }
    }
}

#[test]
fn betti_numbers() {
    assert_eq!(MultiGraph::path(3).betti1().unwrap(), 0);
    assert_eq!(MultiGraph::banana(2).betti1().unwrap(), 1);
    assert_eq!(MultiGraph::new(1, vec![(0, 0), (0, 0)]).unwrap().betti1().unwrap(), 2);
    let disconnected = MultiGraph::new(3, vec![(0, 1)]).unwrap();
    assert!(matches!(disconnected.betti1(), Err(Error::PreconditionViolation(_))));
}

#[test]
fn contraction_examples() {
    let vp = VertexPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
    let c = triangle().contract(&vp).unwrap();
    assert_eq!(c.quiver.vertex_count(), 2);
    assert_eq!(c.quiver.arrows(), &[(0, 1), (1, 0)]);
    assert_eq!(c.deleted_loops, 1);

    let q = triangle();
    let same = q.contract(&VertexPartition::singletons(3)).unwrap();
    assert_eq!(same.quiver, q);
    assert_eq!(same.deleted_loops, 0);

    let whole = q.contract(&VertexPartition::whole(3)).unwrap();
    assert_eq!((whole.quiver.vertex_count(), whole.quiver.arrow_count(), whole.deleted_loops), (1, 0, 3));

    assert!(q.contract(&VertexPartition::singletons(4)).is_err());
    assert!(VertexPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
    assert!(VertexPartition::new(3, vec![vec![0, 1]]).is_err());
    assert!(VertexPartition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
}

fn bell(n: usize) -> usize {
    common::set_partitions(n).len()
}

#[test]
fn vertex_partitions_enumerated_once_each() {
    for n in 1..=7 {
        let all = VertexPartition::all(n);
        assert_eq!(all.len(), bell(n));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert_eq!(all[0], VertexPartition::whole(n));
    }
}

#[test]
fn contraction_composes_exhaustively() {
    let mut rng = StdRng::seed_from_u64(11);
    for vertices in 1..=5 {
        for _ in 0..4 {
            let edges = rng.gen_range(vertices - 1..=vertices + 4);
            let graph = common::random_connected(&mut rng, vertices, edges, true);
            let q = Quiver::from_graph(&graph);
            for vp in VertexPartition::all(vertices) {
                let first = q.contract(&vp).unwrap();
                if graph.has_connected_blocks(&vp) {
                    assert!(first.quiver.betti1().unwrap() <= q.betti1().unwrap());
                }
                for coarser in VertexPartition::all(vp.len()) {
                    let two_step = first.quiver.contract(&coarser).unwrap();
                    let merged = vp.coarsen(&coarser).unwrap();
                    let direct = q.contract(&merged).unwrap();
                    assert_eq!(two_step.quiver, direct.quiver, "{vp} then {coarser}");
                    assert_eq!(first.deleted_loops + two_step.deleted_loops, direct.deleted_loops);
                }
            }
        }
    }
}

#[test]
fn bridges() {
    assert!(MultiGraph::banana(2).is_bridgeless());
    assert!(MultiGraph::cycle(4).is_bridgeless());
    assert!(!MultiGraph::path(1).is_bridgeless());
    assert!(!MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap().is_bridgeless());
    assert!(MultiGraph::new(1, vec![(0, 0)]).unwrap().is_bridgeless());
    for p in ["2,1", "1,1,1,1"] {
        assert!(spectral_dual_graph(&p.parse().unwrap(), 2).unwrap().is_bridgeless());
    }
}

#[test]
fn connected_blocks() {
    let path = MultiGraph::path(2);
    assert!(path.has_connected_blocks(&VertexPartition::whole(3)));
    assert!(path.has_connected_blocks(&VertexPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap()));
    assert!(!path.has_connected_blocks(&VertexPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap()));
    let merged = Quiver::from_graph(&path).contract(&VertexPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap()).unwrap();
    assert_eq!(merged.quiver.betti1().unwrap(), 1);
}

#[test]
fn doubling() {
    let single = Quiver::new(2, vec![(0, 1)]).unwrap();
    assert_eq!(single.double().arrows(), &[(0, 1), (1, 0)]);
    let d = triangle().double();
    assert_eq!(d.arrow_count(), 6);
    for k in 0..3 {
        let (s, t) = d.arrows()[2 * k];
        assert_eq!(d.arrows()[2 * k + 1], (t, s));
        assert_eq!((s, t), triangle().arrows()[k]);
    }
    let empty = Quiver::new(3, vec![]).unwrap();
    assert_eq!(empty.double(), empty);
}

fn rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[test]
fn boundary_matrix_examples() {
    let a: Matrix = Quiver::new(2, vec![(0, 1)]).unwrap().boundary_matrix().unwrap();
    assert_eq!(a, Matrix::from_i64_rows(1, &[&[1]]).unwrap());
    let a: Matrix = triangle().boundary_matrix().unwrap();
    assert_eq!(a, Matrix::from_i64_rows(3, &[&[1, -1, 0], &[0, 1, -1]]).unwrap());
    let looped: Matrix = Quiver::new(2, vec![(0, 1), (1, 1)]).unwrap().boundary_matrix().unwrap();
    assert_eq!(looped.column(1), vec![BigInt::from(0); 1]);
    assert!(matches!(Quiver::new(1, vec![]).unwrap().boundary_matrix::<BigInt>(), Err(Error::InvalidArgument(_))));
}

#[test]
fn boundary_matrix_has_full_row_rank() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let v = rng.gen_range(2..7);
        let g = common::random_connected(&mut rng, v, 9, true);
        let a: Matrix = Quiver::from_graph(&g).boundary_matrix().unwrap();
        assert_eq!(common::rational_rank(&rows(&a)), g.vertex_count() - 1);
        assert_eq!(a.rank(), g.vertex_count() - 1);
    }
}

#[test]
fn canonical_key_examples() {
    let tri = MultiGraph::cycle(3);
    assert_eq!(tri.canonical_key(), tri.relabel(&[2, 0, 1]).canonical_key());
    assert_eq!(tri.canonical_key(), tri.reorder_edges(&[2, 1, 0]).canonical_key());
    assert_ne!(MultiGraph::banana(2).canonical_key(), MultiGraph::path(2).canonical_key());

    let g22 = spectral_dual_graph(&p("2,2"), 2).unwrap();
    assert_eq!(g22.canonical_key(), g22.relabel(&[1, 0]).canonical_key());
    let g211 = spectral_dual_graph(&p("2,1,1"), 2).unwrap();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in perms {
        assert_eq!(g211.relabel(&perm).canonical_key(), g211.canonical_key());
    }
}

#[test]
fn canonical_key_decodes_to_isomorphic_graph() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let g = common::random_small(&mut rng, 6, 9, true);
        let back = MultiGraph::from_canonical_key(&g.canonical_key()).unwrap();
        assert!(common::isomorphic_brute(&g, &back));
        assert_eq!(back.canonical_key(), g.canonical_key());
    }
    assert!(MultiGraph::from_canonical_key(&[0, 0, 1]).is_err());
}

#[test]
fn canonical_key_separates_non_isomorphic_pairs() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 100 {
        let v = rng.gen_range(2..=6);
        let e = rng.gen_range(v - 1..=8);
        let a = common::random_connected(&mut rng, v, e, true);
        let b = common::random_connected(&mut rng, v, e, true);
        let iso = common::isomorphic_brute(&a, &b);
        assert_eq!(iso, a.canonical_key() == b.canonical_key(), "{:?} vs {:?}", a.edges(), b.edges());
        if !iso {
            checked += 1;
        }
    }
}

#[test]
fn dot_output() {
    assert_eq!(MultiGraph::banana(2).to_dot(), "graph G {\n  0;\n  1;\n  0 -- 1;\n  0 -- 1;\n}\n");
    assert_eq!(Quiver::new(2, vec![(1, 0)]).unwrap().to_dot(), "digraph Q {\n  0;\n  1;\n  1 -> 0;\n}\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_key_invariant_under_relabeling(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = common::random_small(&mut rng, 7, 6, true);
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rng);
        let h = g.relabel(&perm).reorder_edges(&order);
        prop_assert_eq!(g.canonical_key(), h.canonical_key());
    }
}
