use num_bigint::BigInt;

use super::document::{product_fan, FanDocument};
use super::FormatError;

/// Canonical names of the catalog entries, in listing order.
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=4).map(|n| format!("projective({n})")).collect();
    names.extend((1..=3).map(|n| format!("affine({n})")));
    names.extend((1..=3).map(|k| format!("torus({k})")));
    names.push("p1xp1".into());
    names.extend((0..=5).map(|a| format!("hirzebruch({a})")));
    names.extend(FIXED_NAMES[1..].iter().map(|s| s.to_string()));
    names
}

const FIXED_NAMES: [&str; 5] = ["p1xp1", "blowup_p2", "torsion_z2", "wps_112", "wps_123"];

const MAX_AFFINE_OR_TORUS: usize = 16;

/// Splits `family(3)`, `family3` into `("family", Some(3))`.
fn split_name(name: &str) -> (String, Option<usize>) {
    let lower = name.trim().to_ascii_lowercase();
    if FIXED_NAMES.contains(&lower.as_str()) {
        return (lower, None);
    }
    if let Some(open) = lower.find('(') {
        if let Some(inner) = lower[open + 1..].strip_suffix(')') {
            return (lower[..open].to_string(), inner.trim().parse().ok());
        }
        return (lower, None);
    }
    let digits = lower.trim_end_matches(|c: char| c.is_ascii_digit());
    if digits.len() < lower.len() {
        return (digits.to_string(), lower[digits.len()..].parse().ok());
    }
    (lower, None)
}

fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()
}

fn doc(name: String, lattice_rank: usize, rays: Vec<Vec<BigInt>>, cones: &[&[usize]]) -> FanDocument {
    FanDocument {
        name,
        lattice_rank,
        rays,
        max_cones: cones.iter().map(|c| c.to_vec()).collect(),
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = k_subsets(n - 1, k);
    for mut s in k_subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// Looks up a single catalog fan. Accepts `projective(2)`, `projective2` and
/// `P2` style names.
pub fn catalog_fan(name: &str) -> Result<FanDocument, FormatError> {
    let unknown = || FormatError::UnknownCatalogName(name.to_string());
    let (family, param) = split_name(name);
    let fan = match (family.as_str(), param) {
        ("projective" | "p", Some(n)) if (1..=4).contains(&n) => {
            let mut rays: Vec<Vec<BigInt>> = (0..n).map(|i| unit(n, i)).collect();
            rays.push(vec![BigInt::from(-1); n]);
            FanDocument {
                name: format!("projective({n})"),
                lattice_rank: n,
                rays,
                max_cones: k_subsets(n + 1, n),
            }
        }
        ("affine" | "a", Some(n)) if n <= MAX_AFFINE_OR_TORUS => FanDocument {
            name: format!("affine({n})"),
            lattice_rank: n,
            rays: (0..n).map(|i| unit(n, i)).collect(),
            max_cones: vec![(0..n).collect()],
        },
        ("torus" | "t", Some(k)) if k <= MAX_AFFINE_OR_TORUS => FanDocument {
            name: format!("torus({k})"),
            lattice_rank: k,
            rays: vec![],
            max_cones: vec![vec![]],
        },
        ("hirzebruch" | "f", Some(a)) if a <= 5 => doc(
            format!("hirzebruch({a})"),
            2,
            ints(&[&[1, 0], &[0, 1], &[-1, a as i64], &[0, -1]]),
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        ),
        ("p1xp1", None) => doc(
            "p1xp1".into(),
            2,
            ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
        ),
        ("blowup_p2", None) => doc(
            "blowup_p2".into(),
            2,
            ints(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]),
            &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
        ),
        ("torsion_z2", None) => doc("torsion_z2".into(), 2, ints(&[&[1, 1], &[1, -1]]), &[&[0], &[1]]),
        ("wps_112", None) => doc(
            "wps_112".into(),
            2,
            ints(&[&[1, 0], &[0, 1], &[-1, -2]]),
            &[&[0, 1], &[1, 2], &[2, 0]],
        ),
        ("wps_123", None) => doc(
            "wps_123".into(),
            2,
            ints(&[&[1, 0], &[0, 1], &[-2, -3]]),
            &[&[0, 1], &[1, 2], &[2, 0]],
        ),
        _ => return Err(unknown()),
    };
    Ok(fan)
}

/// A `*`-separated product of catalog names, e.g. `P2*torus(2)`.
pub fn resolve_catalog_expr(expr: &str) -> Result<FanDocument, FormatError> {
    let mut factors = expr.split('*').map(catalog_fan);
    let first = factors
        .next()
        .unwrap_or_else(|| Err(FormatError::UnknownCatalogName(expr.to_string())))?;
    factors.try_fold(first, |acc, f| Ok(product_fan(&acc, &f?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fanfmt::serialize_fan;

    #[test]
    fn projective_line() {
        let d = catalog_fan("projective(1)").unwrap();
        assert_eq!(d.rays, ints(&[&[1], &[-1]]));
        assert_eq!(d.max_cones, vec![vec![0], vec![1]]);
    }

    #[test]
    fn projective_plane_cones() {
        let d = catalog_fan("P2").unwrap();
        assert_eq!(d.max_cones, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(d, catalog_fan("projective2").unwrap());
    }

    #[test]
    fn aliases_and_unknowns() {
        assert_eq!(catalog_fan("F3").unwrap().name, "hirzebruch(3)");
        assert!(catalog_fan("projective(5)").is_err());
        assert!(catalog_fan("hirzebruch(6)").is_err());
        assert!(catalog_fan("klein_bottle").is_err());
        assert!(catalog_fan("wps_").is_err());
    }

    #[test]
    fn every_listed_name_resolves() {
        for name in catalog_names() {
            assert_eq!(catalog_fan(&name).unwrap().name, name);
        }
    }

    #[test]
    fn products() {
        let p1p1 = resolve_catalog_expr("P1*P1").unwrap();
        assert_eq!(serialize_fan(&FanDocument { name: String::new(), ..p1p1 }), serialize_fan(&FanDocument {
            name: String::new(),
            ..catalog_fan("p1xp1").unwrap()
        }));
        let c2 = resolve_catalog_expr("affine(1)*affine(1)").unwrap();
        assert_eq!(c2.max_cones, vec![vec![0, 1]]);
        assert_eq!(c2.rays, ints(&[&[1, 0], &[0, 1]]));
        let t = resolve_catalog_expr("P2*torus(2)").unwrap();
        assert_eq!((t.lattice_rank, t.rays.len()), (4, 3));
        assert_eq!(t.max_cones, catalog_fan("P2").unwrap().max_cones);
    }
}
