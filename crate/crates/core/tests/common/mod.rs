//! Random generators and brute-force oracles shared by the integration tests.
//! Nothing here calls into the routines it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toric_oka::fan::{validate_fan, Fan, ValidatedFan};
use toric_oka::fanfmt::{catalog_fan, catalog_names, resolve_catalog_expr};
use toric_oka::IntMatrix;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let v: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    IntMatrix::from_i64(rows, cols, &v)
}

/// Product of random elementary integer operations; determinant is +-1 by
/// construction.
pub fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();
    if n == 0 {
        return IntMatrix::identity(0);
    }
    for _ in 0..3 * n + 2 {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                rows.swap(i, j);
            }
            1 => {
                let i = rng.gen_range(0..n);
                rows[i] = rows[i].iter().map(|x| -x).collect();
            }
            _ if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c = big(rng.gen_range(-2..=2));
                let add: Vec<BigInt> = rows[j].iter().map(|x| x * &c).collect();
                for (a, b) in rows[i].iter_mut().zip(add) {
                    *a += b;
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(&rows, n).unwrap()
}

/// Applies `u -> u * basis` to every ray.
pub fn transform_fan(f: &Fan, basis: &IntMatrix) -> Fan {
    let rays = f.rays.iter().map(|u| basis.left_apply(u).unwrap()).collect();
    Fan::new(f.name.clone(), f.lattice_rank, rays, f.max_cones.clone())
}

pub fn catalog() -> Vec<(String, Fan)> {
    catalog_names()
        .into_iter()
        .map(|n| {
            let f = catalog_fan(&n).unwrap().to_fan();
            (n, f)
        })
        .collect()
}

pub const SMOOTH_CATALOG: &[&str] = &[
    "projective(1)",
    "projective(2)",
    "projective(3)",
    "projective(4)",
    "p1xp1",
    "hirzebruch(0)",
    "hirzebruch(1)",
    "hirzebruch(2)",
    "hirzebruch(3)",
    "hirzebruch(4)",
    "hirzebruch(5)",
    "blowup_p2",
    "affine(1)",
    "affine(2)",
    "affine(3)",
    "torus(1)",
    "torus(2)",
    "torus(3)",
    "torsion_z2",
    "projective(2)*torus(2)",
];

pub fn catalog_expr(expr: &str) -> Fan {
    resolve_catalog_expr(expr).unwrap().to_fan()
}

fn random_primitive(rng: &mut StdRng, n: usize) -> Vec<BigInt> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g == 1 {
            return v.into_iter().map(big).collect();
        }
    }
}

/// Removes rays that no cone uses and renumbers the rest.
fn compact(n: usize, rays: &[Vec<BigInt>], cones: &[Vec<usize>]) -> Fan {
    let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    let map: Vec<Option<usize>> = {
        let mut next = 0;
        (0..rays.len())
            .map(|i| {
                used.contains(&i).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let new_rays = (0..rays.len()).filter(|i| used.contains(i)).map(|i| rays[i].clone()).collect();
    let new_cones = cones
        .iter()
        .map(|c| c.iter().map(|&r| map[r].unwrap()).collect())
        .collect();
    Fan::new(Some("random".into()), n, new_rays, new_cones)
}

/// A random valid simplicial fan of rank 1..=3 with at most 8 rays, grown by
/// adding random simplicial cones that keep the fan valid.
pub fn random_simplicial_fan(rng: &mut StdRng) -> ValidatedFan {
    loop {
        let n = rng.gen_range(1..=3);
        let pool_size = rng.gen_range(1..=if n == 1 { 2 } else { 8 });
        let mut pool: Vec<Vec<BigInt>> = Vec::new();
        while pool.len() < pool_size {
            let v = random_primitive(rng, n);
            if !pool.contains(&v) {
                pool.push(v);
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for _ in 0..24 {
            let size = rng.gen_range(1..=n.min(pool.len()));
            let mut cand: Vec<usize> = Vec::new();
            while cand.len() < size {
                let r = rng.gen_range(0..pool.len());
                if !cand.contains(&r) {
                    cand.push(r);
                }
            }
            cand.sort_unstable();
            if cones.iter().any(|c| cand.iter().all(|r| c.contains(r))) {
                continue;
            }
            let mut trial: Vec<Vec<usize>> = cones
                .iter()
                .filter(|c| !c.iter().all(|r| cand.contains(r)))
                .cloned()
                .collect();
            trial.push(cand);
            if validate_fan(&compact(n, &pool, &trial)).is_ok() {
                cones = trial;
            }
        }
        if cones.is_empty() {
            continue;
        }
        let f = compact(n, &pool, &cones);
        if let Ok(v) = validate_fan(&f) {
            return v;
        }
    }
}

/// Random smooth fan: a smooth catalog fan (or product of two) under a random
/// unimodular change of basis, followed by random star subdivisions at the
/// sum of two rays spanning a common cone.
pub fn random_smooth_fan(rng: &mut StdRng) -> Fan {
    const SEEDS: &[&str] = &[
        "P1", "P2", "P3", "p1xp1", "F1", "F2", "F3", "blowup_p2", "affine(2)", "affine(3)", "torsion_z2",
        "P1*affine(1)", "P2*P1", "F1*torus(1)", "P1*torus(2)",
    ];
    let base = catalog_expr(SEEDS[rng.gen_range(0..SEEDS.len())]);
    let basis = random_unimodular(rng, base.lattice_rank);
    let mut f = transform_fan(&base, &basis);
    for _ in 0..rng.gen_range(0..=3) {
        let pairs: Vec<(usize, usize)> = f
            .max_cones
            .iter()
            .flat_map(|c| {
                c.iter()
                    .flat_map(move |&a| c.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            })
            .collect();
        if pairs.is_empty() || f.rays.len() >= 12 {
            break;
        }
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        let new_ray: Vec<BigInt> = f.rays[a].iter().zip(&f.rays[b]).map(|(x, y)| x + y).collect();
        let idx = f.rays.len();
        f.rays.push(new_ray);
        let mut cones = Vec::new();
        for c in &f.max_cones {
            if c.contains(&a) && c.contains(&b) {
                cones.push(c.iter().map(|&r| if r == a { idx } else { r }).collect());
                cones.push(c.iter().map(|&r| if r == b { idx } else { r }).collect());
            } else {
                cones.push(c.clone());
            }
        }
        f.max_cones = cones;
    }
    f.name = Some("random-smooth".into());
    f
}

fn mask(c: &[usize]) -> u64 {
    c.iter().fold(0, |m, &r| m | (1 << r))
}

/// Minimal non-faces by scanning all `2^m` subsets.
pub fn brute_force_primitive_collections(f: &ValidatedFan) -> Vec<Vec<usize>> {
    let m = f.ray_count();
    let cones: Vec<u64> = f.max_cones().iter().map(|c| mask(c)).collect();
    let is_face = |s: u64| cones.iter().any(|&k| s & k == s);
    let mut out: Vec<Vec<usize>> = (0u64..1 << m)
        .filter(|&s| !is_face(s) && (0..m).filter(|r| s & (1 << r) != 0).all(|r| is_face(s & !(1 << r))))
        .map(|s| (0..m).filter(|r| s & (1 << r) != 0).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// `(C^m \ Z) = union of U_sigma` checked pointwise on zero-patterns.
pub fn brute_force_cover_identity(f: &ValidatedFan, collections: &[Vec<usize>]) -> bool {
    let m = f.ray_count();
    let cones: Vec<u64> = f.max_cones().iter().map(|c| mask(c)).collect();
    let pcs: Vec<u64> = collections.iter().map(|c| mask(c)).collect();
    (0u64..1 << m).all(|s| {
        let in_z = pcs.iter().any(|&p| p & !s == 0);
        let in_some_u = cones.iter().any(|&k| {
            // x with zero set s lies in U_k iff no removed hyperplane contains it
            (0..m).all(|r| k & (1 << r) != 0 || s & (1 << r) == 0)
        });
        in_z != in_some_u
    })
}

/// Order of the stabilizer `{t in G : t_rho = 1 for rho not in sigma}`,
/// computed as the size of `Z^m / (image of rays + span of e_rho off sigma)`.
/// Returns `None` when that group is infinite.
pub fn stabilizer_order_in_g(f: &ValidatedFan, cone: &[usize]) -> Option<BigInt> {
    // Quotienting Z^m by e_rho off sigma leaves Z^sigma modulo the image of
    // M under m -> (<m, u_rho>)_{rho in sigma}.
    let n = f.lattice_rank();
    let restricted: Vec<Vec<BigInt>> = (0..n)
        .map(|j| cone.iter().map(|&r| f.rays()[r][j].clone()).collect())
        .collect();
    lattice_index_by_minors(&restricted, cone.len())
}

/// Index of the lattice spanned by `gens` (vectors of length `dim`) in `Z^dim`,
/// as the gcd of all `dim x dim` minors. `None` if they do not span.
pub fn lattice_index_by_minors(gens: &[Vec<BigInt>], dim: usize) -> Option<BigInt> {
    if dim == 0 {
        return Some(BigInt::one());
    }
    let mut g = BigInt::zero();
    let k = gens.len();
    let mut choice: Vec<usize> = (0..dim).collect();
    if k < dim {
        return None;
    }
    loop {
        let rows: Vec<Vec<BigInt>> = choice.iter().map(|&i| gens[i].clone()).collect();
        let det = IntMatrix::from_rows(&rows, dim).unwrap().determinant().unwrap();
        g = num_integer::Integer::gcd(&g, &det);
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return if g.is_zero() { None } else { Some(g.abs()) };
            }
            i -= 1;
            if choice[i] < k - dim + i {
                choice[i] += 1;
                for j in i + 1..dim {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solves `lambda * gens = p` over the rationals for linearly independent
/// rows `gens`; `None` if `p` is outside their span.
pub fn coordinates_in_span(gens: &[Vec<BigRational>], p: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = gens.len();
    let n = p.len();
    // augmented system: columns are generators, rows are coordinates
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..k).map(|i| gens[i][j].clone()).collect();
            row.push(p[j].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(r) = (pivot_row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, r);
        let pv = a[pivot_row][col].clone();
        for x in a[pivot_row].iter_mut() {
            *x = &*x / &pv;
        }
        for r in 0..n {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let prow = a[pivot_row].clone();
                for (x, y) in a[r].iter_mut().zip(prow) {
                    *x = &*x - &factor * y;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        lambda[c] = a[r][k].clone();
    }
    Some(lambda)
}

/// Whether `p` lies in the cone generated by the given independent vectors.
pub fn in_simplicial_cone(gens: &[Vec<BigInt>], p: &[BigRational]) -> bool {
    let g: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|v| v.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    if gens.is_empty() {
        return p.iter().all(Zero::is_zero);
    }
    match coordinates_in_span(&g, p) {
        Some(l) => l.iter().all(|x| !x.is_negative()),
        None => false,
    }
}

/// Random point of the cone: non-negative combination, some coefficients
/// possibly zero so faces get sampled too.
pub fn sample_cone_point(rng: &mut StdRng, gens: &[Vec<BigInt>], dim: usize) -> Vec<BigRational> {
    let mut p = vec![BigRational::zero(); dim];
    for g in gens {
        let c = if rng.gen_bool(0.25) {
            0
        } else {
            rng.gen_range(1..=7)
        };
        let coeff = BigRational::new(big(c), big(rng.gen_range(1..=5)));
        for (x, y) in p.iter_mut().zip(g) {
            *x += &coeff * BigRational::from_integer(y.clone());
        }
    }
    p
}
