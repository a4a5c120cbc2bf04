use crepant::ehrhart::ehrhart_bruteforce;
use crepant::exact::{solve, LatticeBasis, Rational, RationalMatrix, RationalVector};
use crepant::triangulation::{staircase, verify_balanced, verify_coherent, CertifiedTriangulation, TriangulationParts};
use proptest::prelude::*;

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn grid_points() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for x in 0..=3 {
        for y in 0..=x {
            out.push(vec![x, y]);
        }
    }
    out
}

fn index(points: &[Vec<i64>], p: [i64; 2]) -> u32 {
    points.iter().position(|q| q[..] == p[..]).unwrap() as u32
}

fn triangle(points: &[Vec<i64>], cell: [[i64; 2]; 3]) -> Vec<u32> {
    cell.iter().map(|&p| index(points, p)).collect()
}

/// Left-hand picture: the triangle `conv{(0,0), (3,0), (3,3)}` cut by
/// horizontals, verticals and the lines `y = x − c`.
fn picture_a() -> TriangulationParts {
    let points = grid_points();
    let mut cells = Vec::new();
    for a in 0..3 {
        for b in 0..=a {
            cells.push(triangle(&points, [[a, b], [a + 1, b], [a + 1, b + 1]]));
            if b < a {
                cells.push(triangle(&points, [[a, b], [a, b + 1], [a + 1, b + 1]]));
            }
        }
    }
    let colours = points.iter().map(|p| ((p[0] + p[1]) % 3) as u8).collect();
    TriangulationParts {
        dim: 2,
        points,
        cells,
        colours: Some(colours),
        heights: None,
        height_denominator: 1,
        ambient: vec![vec![0, 0], vec![3, 0], vec![3, 3]],
    }
}

/// Right-hand picture: same points, with two diagonals flipped.
fn picture_d() -> TriangulationParts {
    let mut parts = picture_a();
    let p = &parts.points;
    parts.cells = [
        [[0, 0], [1, 0], [1, 1]],
        [[1, 1], [2, 1], [2, 2]],
        [[2, 2], [3, 2], [3, 3]],
        [[1, 0], [2, 0], [2, 1]],
        [[1, 0], [1, 1], [2, 1]],
        [[2, 0], [3, 0], [3, 1]],
        [[2, 0], [2, 1], [3, 1]],
        [[2, 1], [3, 1], [2, 2]],
        [[3, 1], [3, 2], [2, 2]],
    ]
    .iter()
    .map(|&c| triangle(p, c))
    .collect();
    parts
}

#[test]
fn labelled_colouring_is_balanced() {
    let parts = picture_a();
    let labelled = [
        ([0, 0], 0),
        ([1, 0], 1),
        ([2, 0], 2),
        ([3, 0], 0),
        ([1, 1], 2),
        ([2, 1], 0),
        ([3, 1], 1),
        ([2, 2], 1),
        ([3, 2], 2),
        ([3, 3], 0),
    ];
    let mut colours = vec![9u8; parts.points.len()];
    for (p, c) in labelled {
        colours[index(&parts.points, p) as usize] = c;
    }
    assert!(colours.iter().all(|&c| c < 3));
    let t = CertifiedTriangulation::from_parts(TriangulationParts {
        colours: Some(colours),
        ..parts
    })
    .unwrap();
    assert_eq!(t.num_cells(), 9);
    assert!(verify_balanced(&t).unwrap().ok);
}

#[test]
fn flipped_picture_admits_no_colouring() {
    let parts = picture_d();
    let t = CertifiedTriangulation::from_parts(parts.clone()).unwrap();
    assert_eq!(t.num_cells(), 9);
    assert!(!verify_balanced(&t).unwrap().ok);
    let n = parts.points.len();
    let rainbow = |c: &[u8]| {
        parts.cells.iter().all(|cell| {
            let mut seen = [false; 3];
            cell.iter().for_each(|&v| seen[c[v as usize] as usize] = true);
            seen.iter().all(|&s| s)
        })
    };
    let mut c = vec![0u8; n];
    let mut found = false;
    for code in 0..3u32.pow(n as u32) {
        let mut r = code;
        for x in c.iter_mut() {
            *x = (r % 3) as u8;
            r /= 3;
        }
        found |= rainbow(&c);
    }
    assert!(!found);
}

/// Global strict concavity: on every cell, the affine interpolant of the
/// heights lies strictly above every other vertex's height.
fn globally_coherent(points: &[Vec<i64>], cells: &[Vec<u32>], h: &[i128]) -> bool {
    cells.iter().all(|cell| {
        let base = &points[cell[0] as usize];
        let cols: Vec<RationalVector> = cell[1..]
            .iter()
            .map(|&v| RationalVector::new(points[v as usize].iter().zip(base).map(|(x, y)| int(x - y)).collect()))
            .collect();
        let m = RationalMatrix::from_columns(&cols).unwrap();
        (0..points.len() as u32).filter(|v| !cell.contains(v)).all(|v| {
            let rhs = RationalVector::new(points[v as usize].iter().zip(base).map(|(x, y)| int(x - y)).collect());
            let x = solve(&m, &rhs).unwrap();
            let mut value = (int(1) - x.sum()) * Rational::from_integer(h[cell[0] as usize].into());
            for (xi, &w) in x.iter().zip(&cell[1..]) {
                value += xi * Rational::from_integer(h[w as usize].into());
            }
            value > Rational::from_integer(h[v as usize].into())
        })
    })
}

fn parts_of(t: &CertifiedTriangulation) -> TriangulationParts {
    TriangulationParts {
        dim: t.dim(),
        points: t.points().map(|p| p.to_vec()).collect(),
        cells: t.cells().map(|c| c.to_vec()).collect(),
        colours: None,
        heights: None,
        height_denominator: 1,
        ambient: t.ambient().to_vec(),
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn simplex(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), dim + 1).prop_filter("full-dimensional", |v| {
        let rows: Vec<Vec<i64>> = v[1..]
            .iter()
            .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
            .collect();
        det(&rows) != 0
    })
}

fn ehrhart(v: &[Vec<i64>]) -> crepant::ehrhart::EhrhartData {
    let dim = v[0].len();
    let vertices: Vec<RationalVector> = v.iter().map(|p| RationalVector::from_ints(p)).collect();
    ehrhart_bruteforce(&vertices, &LatticeBasis::standard(dim)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wall_check_matches_global_concavity(d in 2usize..=3, noise in prop::collection::vec(-2i128..=2, 27)) {
        // Perturbed multiples of the staircase heights land on both sides.
        let base = staircase(d, 2).unwrap();
        let mut parts = parts_of(&base);
        let psi = base.height_numerators().unwrap();
        let h: Vec<i128> = psi.iter().zip(&noise).map(|(p, e)| 2 * p + e).collect();
        parts.heights = Some(h.clone());
        let oracle = globally_coherent(&parts.points, &parts.cells, &h);
        let t = CertifiedTriangulation::from_parts(parts).unwrap();
        prop_assert_eq!(verify_coherent(&t).unwrap().ok, oracle);
    }

    #[test]
    fn ehrhart_invariants(v in (1usize..=3).prop_flat_map(simplex)) {
        let d = v[0].len();
        let e = ehrhart(&v);
        let rows: Vec<Vec<i64>> = v[1..].iter().map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
        let volume = det(&rows).unsigned_abs();
        prop_assert_eq!(e.delta[0], 1);
        prop_assert_eq!(e.delta.iter().sum::<u64>(), volume);
        prop_assert_eq!(e.delta[1], e.counts[1] - d as u64 - 1);
        prop_assert_eq!(&e.a.entries()[0], &int(1));
        let fact: i64 = (1..=d as i64).product();
        prop_assert_eq!(&e.a.entries()[d], &(int(volume as i64) / int(fact)));
    }

    #[test]
    fn dilation_scales_coefficients(v in (1usize..=2).prop_flat_map(simplex), lambda in 1i64..=4) {
        let scaled: Vec<Vec<i64>> = v.iter().map(|p| p.iter().map(|x| x * lambda).collect()).collect();
        let (e, f) = (ehrhart(&v), ehrhart(&scaled));
        for (j, (a, b)) in e.a.iter().zip(f.a.iter()).enumerate() {
            prop_assert_eq!(a * int(lambda.pow(j as u32)), b.clone());
        }
    }
}

#[test]
fn perturbed_heights_cover_both_outcomes() {
    let base = staircase(2, 2).unwrap();
    let parts = parts_of(&base);
    let psi = base.height_numerators().unwrap();
    let mut seen = [false; 2];
    for bump in -2i128..=2 {
        let h: Vec<i128> = psi
            .iter()
            .enumerate()
            .map(|(i, p)| 2 * p + if i == 4 { bump } else { 0 })
            .collect();
        seen[globally_coherent(&parts.points, &parts.cells, &h) as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}
