use std::collections::BTreeMap;

use latticeperfect_core::lattice::{Extents, GridKind, Patch, Wrap};
use proptest::prelude::*;

fn planar_kind() -> impl Strategy<Value = GridKind> {
    prop_oneof![
        Just(GridKind::Square),
        Just(GridKind::Triangular),
        Just(GridKind::Hexagonal),
    ]
}

/// Torus dimensions valid for `kind` (even for hexagonal), at least 3 so that
/// neighbors are distinct.
fn torus() -> impl Strategy<Value = (GridKind, usize, usize)> {
    planar_kind().prop_flat_map(|k| {
        let dims = if k == GridKind::Hexagonal {
            (2usize..5).prop_map(|x| 2 * x).boxed()
        } else {
            (3usize..9).boxed()
        };
        (Just(k), dims.clone(), dims)
    })
}

proptest! {
    #[test]
    fn tori_are_regular_and_symmetric((kind, w, h) in torus()) {
        let p = Patch::torus(kind, w, h).unwrap();
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for v in 0..p.len() {
            prop_assert_eq!(p.adjacent(v).len(), kind.degree());
            prop_assert!(p.is_interior(v));
            for &u in p.adjacent(v) {
                *edges.entry((v, u)).or_default() += 1;
            }
        }
        for (&(v, u), &m) in &edges {
            prop_assert_eq!(edges.get(&(u, v)).copied(), Some(m));
        }
    }

    #[test]
    fn translations_are_automorphisms((kind, w, h) in torus(), dx in 0i64..8, dy in 0i64..8) {
        let p = Patch::torus(kind, w, h).unwrap();
        let (dx, dy) = if kind == GridKind::Hexagonal { (2 * dx, 2 * dy) } else { (dx, dy) };
        let t = p.translate(&[dx, dy]).unwrap();
        let mut seen = vec![false; p.len()];
        for &x in &t {
            prop_assert!(!seen[x]);
            seen[x] = true;
        }
        for v in 0..p.len() {
            let mut a: Vec<usize> = p.adjacent(v).iter().map(|&u| t[u]).collect();
            let mut b: Vec<usize> = p.adjacent(t[v]).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn open_window_interior_has_full_degree(kind in planar_kind(), w in 1usize..8, h in 1usize..8) {
        let p = Patch::new(kind, Extents::Plane { width: w, height: h }, Wrap::NONE).unwrap();
        for v in 0..p.len() {
            let deg = p.adjacent(v).len();
            prop_assert_eq!(p.is_interior(v), deg == kind.degree());
            prop_assert!(deg <= kind.degree());
        }
    }

    #[test]
    fn coord_index_round_trip((kind, w, h) in torus()) {
        let p = Patch::torus(kind, w, h).unwrap();
        for v in 0..p.len() {
            let (x, y) = p.coord(v);
            prop_assert_eq!(p.index(x, y), Some(v));
            prop_assert_eq!(p.index(x + w as i64, y - h as i64), Some(v));
        }
    }
}

#[test]
fn tree_is_three_regular_inside() {
    let p = Patch::new(
        GridKind::BinaryTree,
        Extents::Tree { spine: 3, depth: 5 },
        Wrap::NONE,
    )
    .unwrap();
    assert_eq!(p.len(), 7 * 32);
    for v in 0..p.len() {
        let deg = p.adjacent(v).len();
        if p.is_interior(v) {
            assert_eq!(deg, 3);
        } else {
            assert!(deg < 3);
        }
        for &u in p.adjacent(v) {
            assert!(p.adjacent(u).contains(&v));
        }
    }
}

#[test]
fn hexagonal_torus_is_bipartite() {
    let p = Patch::torus(GridKind::Hexagonal, 6, 4).unwrap();
    for v in 0..p.len() {
        let (x, y) = p.coord(v);
        for &u in p.adjacent(v) {
            let (a, b) = p.coord(u);
            assert_ne!((x + y) % 2, (a + b) % 2);
        }
    }
}
