//! Quotient presentation `X = (C^m \ Z) / G` of a toric variety without
//! torus factors: primitive collections, the irrelevant locus, the class
//! group, the group `G = Hom(Cl(X), C*)` inside `(C*)^m`, stabilizers, and
//! the cover of `C^m \ Z` by coordinate-hyperplane complements.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::fan::{indices_of, mask_of, torus_factor_rank, ConeLabel, FanError, ValidatedFan};
use crate::intlinalg::{cokernel_invariants, kernel_basis, smith_normal_form, AbelianGroup, IntMatrix};

/// Subset sizes up to which the cover identity is checked over all subsets.
pub const EXHAUSTIVE_COVER_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("fan has a torus factor of rank {rank}; split it off first")]
    TorusFactorPresent { rank: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("ray set {subset} avoids every primitive collection but lies in no cone")]
    CoverGap { subset: ConeLabel },
}

/// Codimension of the irrelevant locus; `Infinite` when the locus is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Codim {
    Finite(usize),
    Infinite,
}

impl Codim {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Codim::Finite(c) => c >= bound,
            Codim::Infinite => true,
        }
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(c) => write!(f, "{c}"),
            Codim::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for Codim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Codim::Finite(c) => s.serialize_u64(*c as u64),
            Codim::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Codim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "INFINITE" => Ok(Codim::Infinite),
            serde_json::Value::Number(n) => {
                let v = crate::bigjson::from_number(&n).map_err(D::Error::custom)?;
                usize::try_from(v)
                    .map(Codim::Finite)
                    .map_err(|_| D::Error::custom("codimension out of range"))
            }
            other => Err(D::Error::custom(format!(
                "expected a codimension or \"INFINITE\", found {other}"
            ))),
        }
    }
}

fn require_torus_free(f: &ValidatedFan) -> Result<(), CoxError> {
    match torus_factor_rank(f) {
        0 => Ok(()),
        rank => Err(CoxError::TorusFactorPresent { rank }),
    }
}

/// Minimal ray sets contained in no cone, sorted by size then lexicographically.
pub fn primitive_collections(f: &ValidatedFan) -> Vec<Vec<usize>> {
    let faces: BTreeSet<u64> = f.all_cones().iter().map(|c| mask_of(c)).collect();
    let m = f.ray_count();
    // Every minimal non-face is a face plus one ray.
    let mut found: BTreeSet<(u32, Vec<usize>)> = BTreeSet::new();
    for &face in &faces {
        for r in 0..m {
            let candidate = face | (1u64 << r);
            if candidate == face || faces.contains(&candidate) {
                continue;
            }
            let minimal = indices_of(candidate)
                .into_iter()
                .all(|s| faces.contains(&(candidate & !(1u64 << s))));
            if minimal {
                found.insert((candidate.count_ones(), indices_of(candidate)));
            }
        }
    }
    found.into_iter().map(|(_, c)| c).collect()
}

pub fn irrelevant_codim(collections: &[Vec<usize>], _m: usize) -> Codim {
    collections
        .iter()
        .map(Vec::len)
        .min()
        .map_or(Codim::Infinite, Codim::Finite)
}

pub fn class_group(f: &ValidatedFan) -> Result<AbelianGroup, CoxError> {
    require_torus_free(f)?;
    Ok(cokernel_invariants(&f.ray_matrix()))
}

/// A generator of `G` inside `(C*)^m`.
///
/// With `order = None` it is the one-parameter subgroup `t -> (t^e_1, ..., t^e_m)`.
/// With `order = Some(d)` it is the point `(z^e_1, ..., z^e_m)` for a primitive
/// `d`-th root of unity `z`, exponents reduced into `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterGenerator {
    #[serde(with = "opt_bigint")]
    pub order: Option<BigInt>,
    #[serde(with = "crate::bigjson::vec")]
    pub exponents: Vec<BigInt>,
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct W(#[serde(with = "crate::bigjson::int")] BigInt);

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        x.clone().map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

impl CharacterGenerator {
    /// Checks `prod_rho g_rho^<m_j, u_rho> = 1` for every basis vector `m_j`,
    /// on exponents: `e · rays` must vanish (torus) or vanish mod the order.
    pub fn satisfies_defining_equations(&self, rays: &IntMatrix) -> bool {
        if self.exponents.len() != rays.rows() {
            return false;
        }
        let Ok(pairing) = rays.left_apply(&self.exponents) else {
            return false;
        };
        match &self.order {
            None => pairing.iter().all(Zero::is_zero),
            Some(d) if *d > BigInt::one() => pairing.iter().all(|x| x.is_multiple_of(d)),
            Some(_) => false,
        }
    }
}

/// `G = Hom(Cl(X), C*)`: a torus times a finite abelian group, hence reductive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescription {
    pub torus_rank: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub finite_factors: Vec<BigInt>,
    /// Finite-order generators first (in the order of `finite_factors`),
    /// then the one-parameter subgroups.
    pub character_generators: Vec<CharacterGenerator>,
}

impl GroupDescription {
    pub fn finite_order(&self) -> BigInt {
        self.finite_factors.iter().product()
    }

    pub fn is_reductive(&self) -> bool {
        // Tori and finite groups are reductive, and so are their products.
        true
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.torus_rank {
            0 => {}
            1 => parts.push("C*".to_string()),
            r => parts.push(format!("(C*)^{r}")),
        }
        parts.extend(self.finite_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

struct Grading {
    class_group: AbelianGroup,
    degree_matrix: IntMatrix,
    group: GroupDescription,
}

/// Rows of the degree matrix: one per torsion factor of the class group
/// (entries reduced mod the factor) followed by one per free factor.
fn grading(f: &ValidatedFan) -> Result<Grading, CoxError> {
    require_torus_free(f)?;
    let rays = f.ray_matrix();
    let m = rays.rows();
    let snf = smith_normal_form(&rays);
    let diag = snf.diagonal_entries();

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut gens = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if *d > BigInt::one() {
            let row: Vec<BigInt> = snf.left.row(i).iter().map(|x| x.mod_floor(d)).collect();
            gens.push(CharacterGenerator {
                order: Some(d.clone()),
                exponents: row.clone(),
            });
            rows.push(row);
            torsion.push(d.clone());
        }
    }
    // The free part is the left kernel of the ray matrix, in Hermite form.
    let free = kernel_basis(&rays);
    for row in free.to_rows() {
        gens.push(CharacterGenerator {
            order: None,
            exponents: row.clone(),
        });
        rows.push(row);
    }
    let class_group = AbelianGroup {
        free_rank: free.rows(),
        torsion: torsion.clone(),
    };
    Ok(Grading {
        degree_matrix: IntMatrix::from_rows(&rows, m).expect("rows of length m"),
        group: GroupDescription {
            torus_rank: free.rows(),
            finite_factors: torsion,
            character_generators: gens,
        },
        class_group,
    })
}

pub fn group_g(f: &ValidatedFan) -> Result<GroupDescription, CoxError> {
    Ok(grading(f)?.group)
}

/// Invariant factors above one of the stabilizer of a point in the orbit of
/// the given cone; empty means the action is free there.
pub fn stabilizer_invariants(f: &ValidatedFan, cone: &[usize]) -> Result<Vec<BigInt>, CoxError> {
    require_torus_free(f)?;
    if !f.is_cone(cone) || mask_of(cone).count_ones() as usize != cone.len() {
        return Err(FanError::UnknownCone {
            cone_rays: ConeLabel(cone.to_vec()),
        }
        .into());
    }
    let snf = smith_normal_form(&f.generator_matrix(cone));
    Ok(snf
        .diagonal_entries()
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stabilizer {
    pub cone: ConeLabel,
    #[serde(with = "crate::bigjson::vec")]
    pub invariants: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeActionReport {
    pub free: bool,
    pub cones_checked: usize,
    pub offender: Option<Stabilizer>,
}

/// Maximal cones are checked first, in the order given, so an offender is
/// reported as the user wrote it; then every remaining face.
pub fn verify_free_action(f: &ValidatedFan) -> Result<FreeActionReport, CoxError> {
    require_torus_free(f)?;
    let faces = f.all_cones();
    let max_cones = f.max_cones();
    let ordered = max_cones
        .iter()
        .cloned()
        .chain(faces.iter().filter(|c| !max_cones.iter().any(|k| mask_of(k) == mask_of(c))).cloned());
    for cone in ordered {
        let invariants = stabilizer_invariants(f, &cone)?;
        if !invariants.is_empty() {
            return Ok(FreeActionReport {
                free: false,
                cones_checked: faces.len(),
                offender: Some(Stabilizer {
                    cone: ConeLabel(cone),
                    invariants,
                }),
            });
        }
    }
    Ok(FreeActionReport {
        free: true,
        cones_checked: faces.len(),
        offender: None,
    })
}

/// `U_sigma = C^m` minus the coordinate hyperplanes of rays outside `sigma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSet {
    pub cone: usize,
    pub removed_hyperplanes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverMethod {
    /// Every subset of rays was checked.
    Exhaustive,
    /// The identity follows from the collections being exactly the minimal
    /// non-faces; that property was rechecked instead.
    MinimalNonFace,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverWitness {
    pub open_sets: Vec<CoverSet>,
    pub method: CoverMethod,
    pub subsets_checked: u64,
}

/// Certifies `union of U_sigma = C^m \ Z`: a point's zero set `S` avoids every
/// primitive collection exactly when `S` lies in some maximal cone.
pub fn verify_cover(f: &ValidatedFan) -> Result<CoverWitness, CoxError> {
    let m = f.ray_count();
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let open_sets = f
        .max_cones()
        .iter()
        .enumerate()
        .map(|(i, c)| CoverSet {
            cone: i,
            removed_hyperplanes: indices_of(all & !mask_of(c)),
        })
        .collect();
    let collections: Vec<u64> = primitive_collections(f).iter().map(|c| mask_of(c)).collect();
    let cones = f.max_cone_masks();

    if m <= EXHAUSTIVE_COVER_LIMIT {
        for subset in 0..=all {
            let outside_z = !collections.iter().any(|&c| c & !subset == 0);
            let covered = cones.iter().any(|&k| subset & k == subset);
            if outside_z != covered {
                return Err(CoxError::CoverGap {
                    subset: ConeLabel(indices_of(subset)),
                });
            }
        }
        return Ok(CoverWitness {
            open_sets,
            method: CoverMethod::Exhaustive,
            subsets_checked: 1u64 << m,
        });
    }

    let is_face = |s: u64| cones.iter().any(|&k| s & k == s);
    for &c in &collections {
        let minimal = indices_of(c).into_iter().all(|r| is_face(c & !(1u64 << r)));
        if is_face(c) || !minimal {
            return Err(CoxError::CoverGap {
                subset: ConeLabel(indices_of(c)),
            });
        }
    }
    Ok(CoverWitness {
        open_sets,
        method: CoverMethod::MinimalNonFace,
        subsets_checked: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxPresentation {
    pub m: usize,
    pub primitive_collections: Vec<Vec<usize>>,
    pub codim_z: Codim,
    pub class_group: AbelianGroup,
    pub group: GroupDescription,
    /// Grading `Z^m -> Cl(X)`; see [`group_g`] for the row layout.
    pub degree_matrix: IntMatrix,
}

pub fn cox_presentation(f: &ValidatedFan) -> Result<CoxPresentation, CoxError> {
    let grading = grading(f)?;
    debug_assert_eq!(grading.class_group, class_group(f)?);
    let m = f.ray_count();
    let primitive_collections = primitive_collections(f);
    let codim_z = irrelevant_codim(&primitive_collections, m);
    Ok(CoxPresentation {
        m,
        primitive_collections,
        codim_z,
        class_group: grading.class_group,
        group: grading.group,
        degree_matrix: grading.degree_matrix,
    })
}
