mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use symmetria::adjacency::AdjacencyIndex;
use symmetria::meshio::{obj_string, off_string, parse_mesh, parse_mesh_str, write_mesh, MeshFormat};
use symmetria::synthetic;
use symmetria::{SymmetryError, TriangleMesh};

fn bumpy_grid(nx: usize, ny: usize, seed: u64) -> TriangleMesh {
    let mut rng = common::rng(seed);
    let jitter: Vec<f64> = (0..nx * ny).map(|_| rng.gen_range(-0.2..0.2)).collect();
    let g = synthetic::grid(nx, ny, 1.0);
    let verts = g
        .vertices()
        .iter()
        .zip(&jitter)
        .map(|(p, j)| [p[0] + j, p[1], 0.3 * (p[0] * 0.7).sin() * (p[1] * 0.4).cos()])
        .collect();
    TriangleMesh::new(verts, g.faces().to_vec()).unwrap()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

#[test]
fn tetrahedron_area_and_scaling() {
    let t = synthetic::unit_tetrahedron();
    assert!((t.surface_area() - 3f64.sqrt()).abs() < 1e-12);
    let s = 3f64.sqrt() / 4.0;
    for a in t.vertex_areas() {
        assert!((a - s).abs() < 1e-12);
    }
    assert!(relative_gap(t.scaled(2.0).unwrap().surface_area(), 4.0 * 3f64.sqrt()) < 1e-12);
}

#[test]
fn icosphere_area_is_close_to_sphere() {
    let m = synthetic::icosphere(3);
    // independent summation of triangle areas via Heron's formula
    let heron: f64 = m
        .faces()
        .iter()
        .map(|&[a, b, c]| {
            let (x, y, z) = (m.edge_length(a, b), m.edge_length(b, c), m.edge_length(c, a));
            let s = 0.5 * (x + y + z);
            (s * (s - x) * (s - y) * (s - z)).sqrt()
        })
        .sum();
    assert!(relative_gap(heron, m.surface_area()) < 1e-10);
    assert!(relative_gap(m.surface_area(), 4.0 * std::f64::consts::PI) < 0.02);
}

#[test]
fn vertex_areas_sum_to_surface_area() {
    for m in [
        synthetic::icosphere(2),
        synthetic::mirrored_blob(8).mesh,
        bumpy_grid(9, 7, 1),
    ] {
        let sum: f64 = m.vertex_areas().iter().sum();
        assert!(relative_gap(sum, m.surface_area()) < 1e-12);
        assert!(m.vertex_areas().iter().all(|&a| a > 0.0));
    }
}

#[test]
fn reindexing_preserves_areas_and_adjacency() {
    let m = synthetic::mirrored_blob(6).mesh;
    let n = m.n_vertices();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut common::rng(9));
    // new index of old vertex v is perm[v]
    let mut verts = vec![[0.0; 3]; n];
    for v in 0..n {
        verts[perm[v]] = *m.position(v);
    }
    let mut faces: Vec<[usize; 3]> = m
        .faces()
        .iter()
        .map(|f| [perm[f[0]], perm[f[1]], perm[f[2]]])
        .collect();
    faces.reverse();
    let p = TriangleMesh::new(verts, faces).unwrap();
    let (a, b) = (m.vertex_areas(), p.vertex_areas());
    let (adj_m, adj_p) = (
        AdjacencyIndex::build(&m).unwrap(),
        AdjacencyIndex::build(&p).unwrap(),
    );
    for v in 0..n {
        assert!(relative_gap(a[v], b[perm[v]]) < 1e-12);
        let mut mapped: Vec<usize> = adj_m.one_ring(v).iter().map(|&u| perm[u]).collect();
        mapped.sort_unstable();
        let mut other = adj_p.one_ring(perm[v]).to_vec();
        other.sort_unstable();
        assert_eq!(mapped, other);
    }
}

#[test]
fn closed_meshes_satisfy_euler_and_two_faces_per_edge() {
    for m in [synthetic::icosphere(2), synthetic::mirrored_blob(10).mesh] {
        let adj = AdjacencyIndex::build(&m).unwrap();
        let chi = m.n_vertices() as i64 - adj.edges().len() as i64 + m.n_faces() as i64;
        assert_eq!(chi, 2);
        assert!(adj.edge_faces().iter().all(|e| !e.is_boundary() && e.faces().count() == 2));
    }
}

#[test]
fn k_ring_is_repeated_one_ring_union() {
    let m = synthetic::mirrored_blob(6).mesh;
    let adj = AdjacencyIndex::build(&m).unwrap();
    for v in (0..m.n_vertices()).step_by(7) {
        let mut set = std::collections::BTreeSet::from([v]);
        for _ in 0..3 {
            let grown: Vec<usize> = set.iter().flat_map(|&u| adj.one_ring(u).to_vec()).collect();
            set.extend(grown);
        }
        set.remove(&v);
        assert_eq!(adj.k_ring(v, 3), set.into_iter().collect::<Vec<_>>());
    }
}

#[test]
fn disjoint_tetrahedra_are_rejected() {
    let tet = synthetic::unit_tetrahedron();
    let mut text = String::from("OFF\n8 8 0\n");
    for shift in [0.0, 5.0] {
        for p in tet.vertices() {
            text += &format!("{} {} {}\n", p[0] + shift, p[1], p[2]);
        }
    }
    for base in [0, 4] {
        for f in tet.faces() {
            text += &format!("3 {} {} {}\n", f[0] + base, f[1] + base, f[2] + base);
        }
    }
    let err = parse_mesh_str(&text, MeshFormat::Off).unwrap_err();
    assert!(matches!(err, SymmetryError::Validation { .. }));
    assert!(err.to_string().contains("disconnected"));
}

#[test]
fn files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let m = synthetic::mirrored_blob(4).mesh;
    for name in ["blob.off", "blob.obj"] {
        let path = dir.path().join(name);
        write_mesh(&m, &path).unwrap();
        let back = parse_mesh(&path, None).unwrap();
        assert_eq!(back.faces(), m.faces());
        assert_eq!(back.vertices(), m.vertices());
    }
    assert!(matches!(
        parse_mesh(dir.path().join("missing.off"), None),
        Err(SymmetryError::Io { .. })
    ));
}

#[test]
fn mirrored_meshes_have_exact_isometric_involutions() {
    for mm in [synthetic::mirrored_blob(12), synthetic::mirrored_dumbbell(12)] {
        let m = &mm.mesh;
        let pi = &mm.involution;
        for v in 0..m.n_vertices() {
            assert_eq!(pi[pi[v]], v);
            let (p, q) = (m.position(v), m.position(pi[v]));
            assert_eq!([-p[0], p[1], p[2]], *q);
        }
        let adj = AdjacencyIndex::build(m).unwrap();
        for &(a, b) in adj.edges() {
            assert!(adj.edge_index(pi[a], pi[b]).is_some());
            assert!((m.edge_length(a, b) - m.edge_length(pi[a], pi[b])).abs() < 1e-12);
        }
    }
}

#[test]
fn cut_mesh_keeps_consistent_ground_truth() {
    let blob = synthetic::mirrored_blob(12);
    let (mesh, truth) = common::cut_hole(&blob, common::flank_direction(0.3), 0.05);
    let removed = blob.mesh.surface_area() - mesh.surface_area();
    assert!(removed > 0.0 && removed <= 0.05 * blob.mesh.surface_area());
    assert!(truth.len() < blob.mesh.n_vertices());
    for &(a, b) in &truth {
        let (p, q) = (mesh.position(a), mesh.position(b));
        assert_eq!([-p[0], p[1], p[2]], *q);
    }
    assert!(AdjacencyIndex::build(&mesh).unwrap().edge_faces().iter().any(|e| e.is_boundary()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn off_and_obj_round_trip(nx in 2usize..8, ny in 2usize..8, seed in 0u64..1000) {
        let m = bumpy_grid(nx, ny, seed);
        for (text, fmt) in [(off_string(&m), MeshFormat::Off), (obj_string(&m), MeshFormat::Obj)] {
            let back = parse_mesh_str(&text, fmt).unwrap();
            prop_assert_eq!(back.faces(), m.faces());
            prop_assert_eq!(back.vertices(), m.vertices());
        }
    }

    #[test]
    fn area_scales_quadratically(s in 0.05f64..20.0) {
        let m = synthetic::icosphere(1);
        prop_assert!(relative_gap(m.scaled(s).unwrap().surface_area(), s * s * m.surface_area()) < 1e-12);
    }

    #[test]
    fn grid_edge_count_matches_formula(nx in 2usize..12, ny in 2usize..12) {
        let g = synthetic::grid(nx, ny, 0.5);
        let adj = AdjacencyIndex::build(&g).unwrap();
        let expected = (nx - 1) * ny + nx * (ny - 1) + (nx - 1) * (ny - 1);
        prop_assert_eq!(adj.edges().len(), expected);
        let boundary = adj.edge_faces().iter().filter(|e| e.is_boundary()).count();
        prop_assert_eq!(boundary, 2 * (nx - 1) + 2 * (ny - 1));
    }
}
