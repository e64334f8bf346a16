use color_gkp::lattice::{BinaryError, Color, DualLattice};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over GF(2) of rows given as face lists, by plain elimination on
/// boolean vectors.
fn rank_gf2(rows: Vec<Vec<usize>>, ncols: usize) -> usize {
    let mut m: Vec<Vec<bool>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![false; ncols];
            for c in r {
                v[c] ^= true;
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col]) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][col] {
                let pivot = m[rank].clone();
                for (a, b) in m[i].iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn overlap(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

#[test]
fn structure_for_even_distances() {
    for d in [4, 6, 8, 10] {
        let l = DualLattice::build(d).unwrap();
        l.check_invariants().unwrap();
        assert_eq!(l.num_faces(), 2 * d * d);
        assert_eq!(l.num_vertices(), d * d);
        assert_eq!(l.num_edges(), 3 * d * d);

        let mut per_color = [0usize; 3];
        for v in 0..l.num_vertices() {
            let deg = l.faces_of_vertex(v).len();
            match l.color(v) {
                Color::Red => {
                    per_color[0] += 1;
                    assert_eq!(deg, 4);
                }
                Color::Green => {
                    per_color[1] += 1;
                    assert_eq!(deg, 8);
                }
                Color::Blue => {
                    per_color[2] += 1;
                    assert_eq!(deg, 8);
                }
            }
        }
        assert_eq!(per_color, [d * d / 2, d * d / 4, d * d / 4]);

        for f in l.faces() {
            let mut colors: Vec<Color> = f.vertices.iter().map(|&v| l.color(v)).collect();
            colors.sort();
            assert_eq!(colors, vec![Color::Red, Color::Green, Color::Blue]);
            for &v in &f.vertices {
                assert!(l.faces_of_vertex(v).contains(&f.id));
            }
        }

        // two independent relations among the checks leave 4 logical qubits
        let rows: Vec<Vec<usize>> = (0..l.num_vertices()).map(|v| l.faces_of_vertex(v).to_vec()).collect();
        let rank = rank_gf2(rows, l.num_faces());
        assert_eq!(rank, d * d - 2);
        assert_eq!(l.num_faces() - 2 * rank, 4);

        let xs = l.logical_x_supports();
        let zs = l.logical_z_supports();
        for i in 0..4 {
            let x = BinaryError::from_faces(l.num_faces(), &xs[i]).unwrap();
            let z = BinaryError::from_faces(l.num_faces(), &zs[i]).unwrap();
            assert!(l.syndrome_of(&x).unwrap().iter().all(|&b| !b), "d={d} X{i} is not a logical");
            assert!(l.syndrome_of(&z).unwrap().iter().all(|&b| !b), "d={d} Z{i} is not a logical");
            for j in 0..4 {
                assert_eq!(overlap(&xs[i], &zs[j]) % 2 == 1, i == j, "d={d} X{i} vs Z{j}");
            }
        }
    }
}

#[test]
fn logical_strings_are_not_stabilizers() {
    let l = DualLattice::build(6).unwrap();
    let stabilizers: Vec<Vec<usize>> = (0..l.num_vertices()).map(|v| l.faces_of_vertex(v).to_vec()).collect();
    let base = rank_gf2(stabilizers.clone(), l.num_faces());
    for x in l.logical_x_supports() {
        let mut rows = stabilizers.clone();
        rows.push(x.clone());
        assert_eq!(rank_gf2(rows, l.num_faces()), base + 1);
    }
}

#[test]
fn minimum_logical_weight_at_distance_four() {
    let l = DualLattice::build(4).unwrap();
    let n = l.num_faces();
    let mut weight_four_logicals = 0;
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                for e in c..n {
                    let faces: Vec<usize> = [a, b, c, e].into_iter().collect();
                    let err = BinaryError::from_faces(n, &faces).unwrap();
                    if err.weight() == 0 || l.syndrome_of(&err).unwrap().iter().any(|&s| s) {
                        continue;
                    }
                    assert_eq!(err.weight(), 4, "syndrome-free error {faces:?} below weight 4");
                    if l.logical_flips(&err).unwrap().iter().any(|&f| f) {
                        weight_four_logicals += 1;
                    }
                }
            }
        }
    }
    assert!(weight_four_logicals > 0);
}

#[test]
fn random_errors_have_even_syndromes_per_color_pair() {
    let l = DualLattice::build(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..2000 {
        let err = BinaryError { flips: (0..l.num_faces()).map(|_| rng.random_bool(0.3)).collect() };
        let s = l.syndrome_of(&err).unwrap();
        let count = |c: Color| (0..s.len()).filter(|&v| s[v] && l.color(v) == c).count();
        let (r, g, b) = (count(Color::Red), count(Color::Green), count(Color::Blue));
        assert_eq!((r + g) % 2, 0);
        assert_eq!((r + b) % 2, 0);
        assert_eq!((g + b) % 2, 0);
    }
}

proptest! {
    #[test]
    fn syndrome_is_linear(seed in any::<u64>()) {
        let l = DualLattice::build(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = BinaryError { flips: (0..l.num_faces()).map(|_| rng.random_bool(0.2)).collect() };
        let b = BinaryError { flips: (0..l.num_faces()).map(|_| rng.random_bool(0.2)).collect() };
        let sa = l.syndrome_of(&a).unwrap();
        let sb = l.syndrome_of(&b).unwrap();
        let sab = l.syndrome_of(&a.xor(&b)).unwrap();
        for v in 0..sab.len() {
            prop_assert_eq!(sab[v], sa[v] ^ sb[v]);
        }
    }

    #[test]
    fn logicals_ignore_stabilizers(seed in any::<u64>(), picks in proptest::collection::vec(0usize..64, 0..6)) {
        let l = DualLattice::build(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.random_range(0..4);
        let mut r = BinaryError::from_faces(l.num_faces(), &l.logical_x_supports()[k]).unwrap();
        let before = l.logical_flips(&r).unwrap();
        for v in picks {
            let s = BinaryError::from_faces(l.num_faces(), l.faces_of_vertex(v)).unwrap();
            r = r.xor(&s);
        }
        prop_assert_eq!(l.logical_flips(&r).unwrap(), before);
        let mut want = [false; 4];
        want[k] = true;
        prop_assert_eq!(before, want);
    }
}
