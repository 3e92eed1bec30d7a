//! Rational polyhedral fans: validation, cone multiplicities, smoothness,
//! and detection/splitting of torus factors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{int_dot, separating_functional};
use crate::intlinalg::{gcd_of, hermite_normal_form, saturation_index, smith_normal_form, IntMatrix};

/// Bitmask bound on the number of rays.
pub const MAX_RAYS: usize = 64;

/// A fan as supplied by the user: rays in `Z^lattice_rank` and maximal cones
/// given by ray indices. Nothing is checked until [`validate_fan`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    pub name: Option<String>,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(
        name: Option<String>,
        lattice_rank: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Self {
        Self {
            name,
            lattice_rank,
            rays,
            max_cones,
        }
    }

    pub fn from_i64(name: &str, lattice_rank: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Self {
        Self {
            name: Some(name.to_string()),
            lattice_rank,
            rays: rays
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            max_cones: max_cones.iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }
}

/// A list of ray indices printed as `{2,0}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConeLabel(pub Vec<usize>);

impl fmt::Display for ConeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FanError {
    #[error("ray {ray} has {len} coordinates, expected {expected}")]
    RayDimension { ray: usize, len: usize, expected: usize },
    #[error("ray {ray} is the zero vector")]
    ZeroRay { ray: usize },
    #[error("ray {ray} is not primitive (gcd of entries is {gcd})")]
    NonPrimitiveRay {
        ray: usize,
        #[serde(with = "crate::bigjson::int")]
        gcd: BigInt,
    },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} refers to ray {ray}, but there are only {ray_count} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, ray_count: usize },
    #[error("cone {cone} lists ray {ray} more than once")]
    RepeatedRayInCone { cone: usize, ray: usize },
    #[error("maximal cone {inner} is contained in maximal cone {outer}")]
    NestedCones { inner: usize, outer: usize },
    #[error("ray {ray} belongs to no cone; list it as a one-dimensional cone")]
    UnusedRay { ray: usize },
    #[error("fan has {rays} rays; at most {max} are supported")]
    TooManyRays { rays: usize, max: usize },
    #[error("cone {cone_rays} (cone {cone}) is not simplicial")]
    NonSimplicialCone { cone: usize, cone_rays: ConeLabel },
    #[error("cones {first} and {second} do not meet in a common face")]
    BadIntersection { first: usize, second: usize },
    #[error("{cone_rays} is not a cone of the fan")]
    UnknownCone { cone_rays: ConeLabel },
}

/// Certificate that two maximal cones meet along the cone spanned by their
/// common rays: `functional` is positive on the first cone's other rays,
/// negative on the second's, and zero on the shared ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub first: usize,
    pub second: usize,
    pub functional: Vec<BigInt>,
}

/// A fan whose axioms have been checked. Every maximal cone is simplicial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedFan {
    fan: Fan,
    masks: Vec<u64>,
    separations: Vec<Separation>,
}

pub(crate) fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub(crate) fn indices_of(mask: u64) -> Vec<usize> {
    (0..MAX_RAYS).filter(|&i| mask & (1u64 << i) != 0).collect()
}

pub fn validate_fan(fan: &Fan) -> Result<ValidatedFan, FanError> {
    let n = fan.lattice_rank;
    let m = fan.rays.len();
    if m > MAX_RAYS {
        return Err(FanError::TooManyRays { rays: m, max: MAX_RAYS });
    }
    for (i, ray) in fan.rays.iter().enumerate() {
        if ray.len() != n {
            return Err(FanError::RayDimension {
                ray: i,
                len: ray.len(),
                expected: n,
            });
        }
        if ray.iter().all(Zero::is_zero) {
            return Err(FanError::ZeroRay { ray: i });
        }
        let g = gcd_of(ray);
        if !g.is_one() {
            return Err(FanError::NonPrimitiveRay { ray: i, gcd: g });
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if fan.rays[i] == fan.rays[j] {
                return Err(FanError::DuplicateRay { first: i, second: j });
            }
        }
    }

    let mut fan = fan.clone();
    if fan.max_cones.is_empty() {
        fan.max_cones.push(Vec::new());
    }
    let mut masks = Vec::with_capacity(fan.max_cones.len());
    for (c, cone) in fan.max_cones.iter().enumerate() {
        let mut mask = 0u64;
        for &r in cone {
            if r >= m {
                return Err(FanError::RayIndexOutOfRange {
                    cone: c,
                    ray: r,
                    ray_count: m,
                });
            }
            if mask & (1 << r) != 0 {
                return Err(FanError::RepeatedRayInCone { cone: c, ray: r });
            }
            mask |= 1 << r;
        }
        masks.push(mask);
    }
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if i != j && a & b == a && (a != b || i > j) {
                return Err(FanError::NestedCones { inner: i, outer: j });
            }
        }
    }
    let used = masks.iter().fold(0u64, |u, &k| u | k);
    if let Some(r) = (0..m).find(|&r| used & (1 << r) == 0) {
        return Err(FanError::UnusedRay { ray: r });
    }

    for (c, cone) in fan.max_cones.iter().enumerate() {
        let gens = IntMatrix::from_rows(&cone.iter().map(|&r| fan.rays[r].clone()).collect::<Vec<_>>(), n)
            .expect("ray lengths checked");
        if gens.rank() < cone.len() {
            return Err(FanError::NonSimplicialCone {
                cone: c,
                cone_rays: ConeLabel(cone.clone()),
            });
        }
    }

    let mut separations = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            let common = masks[i] & masks[j];
            let pick = |mask: u64| -> Vec<&[BigInt]> {
                indices_of(mask).into_iter().map(|r| fan.rays[r].as_slice()).collect()
            };
            let functional = separating_functional(
                n,
                &pick(masks[i] & !common),
                &pick(masks[j] & !common),
                &pick(common),
            )
            .ok_or(FanError::BadIntersection { first: i, second: j })?;
            separations.push(Separation {
                first: i,
                second: j,
                functional,
            });
        }
    }

    Ok(ValidatedFan {
        fan,
        masks,
        separations,
    })
}

impl ValidatedFan {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn lattice_rank(&self) -> usize {
        self.fan.lattice_rank
    }

    pub fn ray_count(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.fan.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.fan.max_cones
    }

    pub(crate) fn max_cone_masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn separations(&self) -> &[Separation] {
        &self.separations
    }

    pub fn cone_dimension(&self, cone: usize) -> usize {
        self.fan.max_cones[cone].len()
    }

    /// Always true: validation rejects non-simplicial cones.
    pub fn is_simplicial(&self) -> bool {
        true
    }

    /// The `m x n` matrix whose rows are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.fan.rays, self.fan.lattice_rank).expect("validated ray lengths")
    }

    pub fn generator_matrix(&self, rays: &[usize]) -> IntMatrix {
        self.ray_matrix().select_rows(rays)
    }

    /// Whether the ray set is a face of some maximal cone.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        if rays.iter().any(|&r| r >= self.ray_count()) {
            return false;
        }
        let mask = mask_of(rays);
        self.masks.iter().any(|&k| k & mask == mask)
    }

    /// Every cone of the fan, as sorted ray-index lists ordered by dimension
    /// then lexicographically. Includes the zero cone.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut faces = std::collections::BTreeSet::new();
        for &mask in &self.masks {
            let mut sub = mask;
            loop {
                faces.insert((sub.count_ones(), indices_of(sub)));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        faces.into_iter().map(|(_, c)| c).collect()
    }
}

pub fn cone_multiplicity(f: &ValidatedFan, cone: &[usize]) -> Result<BigInt, FanError> {
    if !f.is_cone(cone) || has_repeats(cone) {
        return Err(FanError::UnknownCone {
            cone_rays: ConeLabel(cone.to_vec()),
        });
    }
    Ok(saturation_index(&f.generator_matrix(cone)).expect("cones of a validated fan are simplicial"))
}

fn has_repeats(cone: &[usize]) -> bool {
    let mut seen = 0u64;
    for &r in cone {
        if seen & (1 << r) != 0 {
            return true;
        }
        seen |= 1 << r;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeMultiplicity {
    pub cone: usize,
    pub rays: ConeLabel,
    #[serde(with = "crate::bigjson::int")]
    pub multiplicity: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub cones: Vec<ConeMultiplicity>,
    /// First maximal cone with multiplicity above one.
    pub offender: Option<ConeMultiplicity>,
}

impl SmoothnessReport {
    pub fn smooth(&self) -> bool {
        self.offender.is_none()
    }
}

pub fn is_smooth(f: &ValidatedFan) -> SmoothnessReport {
    let cones: Vec<ConeMultiplicity> = f
        .max_cones()
        .iter()
        .enumerate()
        .map(|(i, c)| ConeMultiplicity {
            cone: i,
            rays: ConeLabel(c.clone()),
            multiplicity: cone_multiplicity(f, c).expect("maximal cone is a cone"),
        })
        .collect();
    let offender = cones.iter().find(|c| !c.multiplicity.is_one()).cloned();
    SmoothnessReport { cones, offender }
}

pub fn torus_factor_rank(f: &ValidatedFan) -> usize {
    f.lattice_rank() - f.ray_matrix().rank()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSplit {
    /// The fan with the torus factor removed, cones kept index-for-index.
    pub reduced: ValidatedFan,
    pub torus_rank: usize,
    /// Unimodular `n x n` matrix. Its first `n - k` rows are a basis of the
    /// saturated span of the rays; each ray equals its reduced coordinates
    /// (padded with zeros) times this matrix.
    pub basis: IntMatrix,
}

pub fn split_torus_factor(f: &ValidatedFan) -> TorusSplit {
    let n = f.lattice_rank();
    let k = torus_factor_rank(f);
    if k == 0 {
        return TorusSplit {
            reduced: f.clone(),
            torus_rank: 0,
            basis: IntMatrix::identity(n),
        };
    }
    let r = n - k;
    let rays = f.ray_matrix();

    // Coordinates on which every ray vanishes; if there are exactly k of them
    // they already span the complement and a permutation suffices.
    let zero_cols: Vec<usize> = (0..n)
        .filter(|&j| f.rays().iter().all(|u| u[j].is_zero()))
        .collect();
    let (coords, basis) = if zero_cols.len() == k {
        let order: Vec<usize> = (0..n)
            .filter(|j| !zero_cols.contains(j))
            .chain(zero_cols.iter().copied())
            .collect();
        let basis = IntMatrix::identity(n).select_rows(&order);
        (rays.mul(&basis.transpose()).expect("shapes agree"), basis)
    } else {
        let snf = smith_normal_form(&rays);
        let coords = rays.mul(&snf.right).expect("shapes agree");
        // Hermite form of a unimodular matrix is the identity, so the
        // transform is its inverse.
        let (_, inverse) = hermite_normal_form(&snf.right);
        (coords, inverse)
    };

    let reduced_rays: Vec<Vec<BigInt>> = (0..coords.rows())
        .map(|i| {
            debug_assert!(coords.row(i)[r..].iter().all(Zero::is_zero));
            coords.row(i)[..r].to_vec()
        })
        .collect();
    let reduced = Fan::new(
        f.fan().name.clone(),
        r,
        reduced_rays,
        f.max_cones().to_vec(),
    );
    TorusSplit {
        reduced: validate_fan(&reduced).expect("unimodular image of a valid fan is valid"),
        torus_rank: k,
        basis,
    }
}

pub fn is_complete(f: &ValidatedFan) -> bool {
    let n = f.lattice_rank();
    if n == 0 {
        return true;
    }
    let masks = f.max_cone_masks();
    if masks.iter().any(|k| k.count_ones() as usize != n) {
        return false;
    }
    masks.iter().all(|&mask| {
        indices_of(mask).into_iter().all(|r| {
            let facet = mask & !(1u64 << r);
            masks.iter().filter(|&&k| k & facet == facet).count() == 2
        })
    })
}

/// Evaluates the separation certificate for cones `i < j`; used by tests and
/// by consumers that want to re-check a validated fan cheaply.
pub fn separation_holds(f: &ValidatedFan, s: &Separation) -> bool {
    let masks = f.max_cone_masks();
    let (a, b) = (masks[s.first], masks[s.second]);
    let common = a & b;
    (0..f.ray_count()).all(|r| {
        let bit = 1u64 << r;
        let value = int_dot(&s.functional, &f.rays()[r]);
        if common & bit != 0 {
            value.is_zero()
        } else if a & bit != 0 {
            value > BigInt::zero()
        } else if b & bit != 0 {
            value < BigInt::zero()
        } else {
            true
        }
    })
}
