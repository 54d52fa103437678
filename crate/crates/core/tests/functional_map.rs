mod common;

use rand::Rng;
use symmetria::adjacency::AdjacencyIndex;
use symmetria::functional_map::{build_functional_map, eigenfunction_sign, parity_oracle, MapOptions};
use symmetria::geodesics::Dijkstra;
use symmetria::spectral::{eigen_gap_flags, eigendecompose};
use symmetria::synthetic::{self, MirroredMesh};
use symmetria::{detect, LaplaceOperator, RunConfig, SpectralBasis, SymmetryError};

struct Setup {
    mm: MirroredMesh,
    adj: AdjacencyIndex,
    basis: SpectralBasis,
    oracle: Vec<f64>,
    flags: Vec<bool>,
}

fn setup(resolution: usize) -> Setup {
    let mm = synthetic::mirrored_blob(resolution);
    let adj = AdjacencyIndex::build(&mm.mesh).unwrap();
    let op = LaplaceOperator::assemble(&mm.mesh).unwrap();
    let basis = eigendecompose(&op, 13).unwrap();
    let oracle = parity_oracle(&basis, &op.mass, &mm.involution);
    let flags = eigen_gap_flags(&basis.eigenvalues, 1e-3);
    Setup { mm, adj, basis, oracle, flags }
}

#[test]
fn oracle_is_plus_or_minus_one_for_simple_eigenvalues() {
    let s = setup(16);
    for c in (0..13).filter(|&c| !s.flags[c]) {
        assert!((s.oracle[c].abs() - 1.0).abs() < 1e-8, "column {c}: {}", s.oracle[c]);
    }
}

#[test]
fn single_symmetric_pair_votes_match_the_oracle() {
    let s = setup(16);
    let mut d = Dijkstra::new(&s.mm.mesh, &s.adj);
    let mut rng = common::rng(21);
    let n = s.mm.mesh.n_vertices();
    let (mut votes, mut wrong) = (0, 0);
    for _ in 0..30 {
        let v = rng.gen_range(0..n);
        if s.mm.involution[v] == v {
            continue;
        }
        let path = d.shortest_path(v, s.mm.involution[v]).unwrap();
        for c in (0..13).filter(|&c| !s.flags[c]) {
            let vote = eigenfunction_sign(&s.basis, std::slice::from_ref(&path), c, 1e-6);
            if vote.sign == 0 {
                continue;
            }
            votes += 1;
            if vote.sign != s.oracle[c].signum() as i8 {
                wrong += 1;
            }
        }
    }
    assert!(votes > 100);
    assert_eq!(wrong, 0, "{wrong}/{votes} votes disagree");
}

#[test]
fn low_modes_alternate_along_the_long_axis() {
    // the blob is longest across the mirror plane, so its first nonconstant
    // mode is odd; the next one runs along a transverse axis and is even
    let s = setup(16);
    let order = s.basis.order();
    let config = RunConfig::default();
    let det = detect(&s.mm.mesh, &config).unwrap();
    let det_order = det.basis.order();
    assert_eq!(det.map.signs[det_order[1]], -1);
    assert_eq!(det.map.signs[det_order[2]], 1);
    assert!(s.oracle[order[1]] < -0.5 && s.oracle[order[2]] > 0.5);
}

#[test]
fn sign_flips_do_not_change_votes() {
    let s = setup(12);
    let mut d = Dijkstra::new(&s.mm.mesh, &s.adj);
    let paths = vec![d.shortest_path(10, s.mm.involution[10]).unwrap(), d.shortest_path(40, 77).unwrap()];
    for c in 0..13 {
        let a = eigenfunction_sign(&s.basis, &paths, c, 1e-6);
        let b = eigenfunction_sign(&s.basis.flipped(c), &paths, c, 1e-6);
        assert_eq!(a.sign, b.sign);
        assert!((a.confidence - b.confidence).abs() < 1e-15);
    }
}

#[test]
fn all_flagged_is_degenerate_and_constant_stays_even() {
    let s = setup(10);
    let mut d = Dijkstra::new(&s.mm.mesh, &s.adj);
    let paths = vec![d.shortest_path(5, s.mm.involution[5]).unwrap()];
    let err = build_functional_map(&s.basis, &paths, &[true; 13], &MapOptions::default()).unwrap_err();
    assert!(matches!(err, SymmetryError::DegenerateMap(_)));
    let map = build_functional_map(&s.basis, &paths, &s.flags, &MapOptions::default()).unwrap();
    let constant = s.basis.order()[0];
    assert_eq!(map.signs[constant], 1);
    assert_eq!(map.active[0], constant);
    let diag = map.matrix();
    for c in 0..13 {
        assert_eq!(diag[(c, c)], map.signs[c] as f64);
    }
    assert!(build_functional_map(&s.basis, &[], &s.flags, &MapOptions::default()).is_err());
}
