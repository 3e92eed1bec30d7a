//! Oka certificates for smooth toric varieties.
//!
//! A certificate is a derivation tree. Its leaves are the two trusted facts
//! about Oka manifolds (complex Lie groups; complements of codimension-two
//! algebraic subsets of `C^m`), and its inner nodes are bundle transfer, the
//! slice-theorem step for the quotient `C^m \ Z -> X`, and the splitting off
//! of a torus factor. Only the *hypotheses* of the trusted rules are checked,
//! and every hypothesis is recomputable from the fan alone.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{
    cox_presentation, group_g, primitive_collections, irrelevant_codim, verify_cover, verify_free_action, Codim,
    CoverWitness, FreeActionReport, GroupDescription,
};
use crate::fan::{
    is_smooth, split_torus_factor, validate_fan, ConeLabel, Fan, FanError, TorusSplit, ValidatedFan,
};
use crate::fanfmt::subject_hash;
use crate::intlinalg::{AbelianGroup, IntMatrix};

pub const FORMAT_VERSION: &str = "1";

const QUOTIENT_GROUP: &str = "G";
const TORUS_FACTOR: &str = "TORUS_FACTOR";
const REDUCTIVE_JUSTIFICATION: &str =
    "G = Hom(Cl(X), C*) is a torus times a finite abelian group, hence reductive";
const TRANSFER_DIRECTION: &str = "TOTAL_SPACE_TO_BASE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "LIE_GROUP_OKA")]
    LieGroupOka,
    #[serde(rename = "CODIM2_COMPLEMENT_OKA")]
    Codim2ComplementOka,
    #[serde(rename = "QUOTIENT_BUNDLE")]
    QuotientBundle,
    #[serde(rename = "BUNDLE_TRANSFER")]
    BundleTransfer,
    #[serde(rename = "PRODUCT_SPLIT")]
    ProductSplit,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::LieGroupOka => "LIE_GROUP_OKA",
            RuleId::Codim2ComplementOka => "CODIM2_COMPLEMENT_OKA",
            RuleId::QuotientBundle => "QUOTIENT_BUNDLE",
            RuleId::BundleTransfer => "BUNDLE_TRANSFER",
            RuleId::ProductSplit => "PRODUCT_SPLIT",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, RuleId::LieGroupOka | RuleId::Codim2ComplementOka)
    }

    /// Human-readable statement of the rule, stored in every step so that
    /// renderers never need their own copy of the prose.
    pub fn metadata(self) -> RuleMetadata {
        let (label, statement, source, scope) = match self {
            RuleId::LieGroupOka => (
                "Lie groups are Oka",
                "Every complex Lie group is elliptic in Gromov's sense and therefore an Oka manifold.",
                "M. Gromov, Oka's principle for holomorphic sections of elliptic bundles (1989)",
                "trusted axiom; the checker verifies that the group is a complex Lie group given by explicit generators",
            ),
            RuleId::Codim2ComplementOka => (
                "codimension-two complements are Oka",
                "If A is an algebraic subvariety of C^m of codimension at least 2, then C^m \\ A is elliptic and therefore Oka.",
                "M. Gromov, Oka's principle for holomorphic sections of elliptic bundles (1989)",
                "trusted axiom; the checker recomputes the irrelevant locus and its codimension",
            ),
            RuleId::QuotientBundle => (
                "free reductive quotients are bundles",
                "If a reductive group G acts freely on an affine G-variety U, the quotient map U -> U/G is locally trivial (Luna's etale slice theorem; holomorphically, Snow's slice theorem). C^m \\ Z is covered by G-invariant affine open sets U, so C^m \\ Z -> X is a holomorphic principal G-bundle.",
                "D. Luna, Slices etales (1973); D. M. Snow, Reductive group actions on Stein spaces (1982)",
                "trusted rule; local triviality over each U is not re-proved, only the hypotheses (reductive G, free action, invariant affine cover) are checked",
            ),
            RuleId::BundleTransfer => (
                "Oka property passes along bundles",
                "If E -> B is a holomorphic fibre bundle whose fibres are Oka manifolds, then B is Oka if and only if E is Oka.",
                "F. Forstneric, Oka manifolds (2009); Oka maps (2010)",
                "trusted rule; the checker verifies that the premises supply the bundle, an Oka fibre and an Oka total space",
            ),
            RuleId::ProductSplit => (
                "torus factors split off",
                "If the rays of the fan span a sublattice of corank k, then X is isomorphic to Y x (C*)^k with Y toric and without torus factor; the projection X -> Y is a bundle with Oka fibre (C*)^k, so X is Oka if Y is.",
                "D. Cox, J. Little, H. Schenck, Toric Varieties, quotient construction",
                "the unimodular change of basis is checked exactly; the bundle step is an instance of bundle transfer",
            ),
        };
        RuleMetadata {
            label: label.to_string(),
            statement: statement.to_string(),
            source: source.to_string(),
            scope: scope.to_string(),
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleMetadata {
    pub label: String,
    pub statement: String,
    pub source: String,
    pub scope: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieGroupWitness {
    /// `"G"` for the quotient group, `"TORUS_FACTOR"` for a split-off torus.
    pub group: String,
    /// Rank of the ambient torus `(C*)^ambient_rank` containing the group.
    pub ambient_rank: usize,
    pub description: GroupDescription,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Codim2Witness {
    pub m: usize,
    pub primitive_collections: Vec<Vec<usize>>,
    pub codim: Codim,
    pub at_least_two: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientBundleWitness {
    pub m: usize,
    pub class_group: AbelianGroup,
    pub group: GroupDescription,
    pub degree_matrix: IntMatrix,
    pub reductive: bool,
    pub reductive_justification: String,
    pub free_action: FreeActionReport,
    pub cover: CoverWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleTransferWitness {
    pub total_space: String,
    pub fibre: String,
    pub base: String,
    pub direction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSplitWitness {
    pub lattice_rank: usize,
    pub torus_rank: usize,
    /// Rows form a lattice basis; each ray is its reduced coordinates, padded
    /// with `torus_rank` zeros, times this matrix.
    pub basis: IntMatrix,
    #[serde(with = "crate::bigjson::rows")]
    pub reduced_rays: Vec<Vec<BigInt>>,
    pub reduced_subject: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum Witness {
    #[serde(rename = "LIE_GROUP_OKA")]
    LieGroup(LieGroupWitness),
    #[serde(rename = "CODIM2_COMPLEMENT_OKA")]
    Codim2(Codim2Witness),
    #[serde(rename = "QUOTIENT_BUNDLE")]
    QuotientBundle(QuotientBundleWitness),
    #[serde(rename = "BUNDLE_TRANSFER")]
    BundleTransfer(BundleTransferWitness),
    #[serde(rename = "PRODUCT_SPLIT")]
    ProductSplit(ProductSplitWitness),
}

impl Witness {
    pub fn rule(&self) -> RuleId {
        match self {
            Witness::LieGroup(_) => RuleId::LieGroupOka,
            Witness::Codim2(_) => RuleId::Codim2ComplementOka,
            Witness::QuotientBundle(_) => RuleId::QuotientBundle,
            Witness::BundleTransfer(_) => RuleId::BundleTransfer,
            Witness::ProductSplit(_) => RuleId::ProductSplit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub rule: RuleId,
    pub conclusion: String,
    pub witness: Witness,
    pub premises: Vec<Step>,
    pub metadata: RuleMetadata,
}

impl Step {
    fn new(witness: Witness, conclusion: String, premises: Vec<Step>) -> Self {
        let rule = witness.rule();
        Self {
            rule,
            conclusion,
            witness,
            premises,
            metadata: rule.metadata(),
        }
    }

    /// Pre-order traversal with the JSON path of each step.
    pub fn walk(&self, path: &str, visit: &mut dyn FnMut(&str, &Step)) {
        visit(path, self);
        for (i, p) in self.premises.iter().enumerate() {
            p.walk(&format!("{path}.premises[{i}]"), visit);
        }
    }

    pub fn contains_subtree(&self, other: &Step) -> bool {
        self == other || self.premises.iter().any(|p| p.contains_subtree(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OkaCertificate {
    pub format_version: String,
    pub subject: String,
    pub conclusion: String,
    pub derivation: Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectionReason {
    InvalidFan,
    NotSmooth,
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectionReason::InvalidFan => "INVALID_FAN",
            RejectionReason::NotSmooth => "NOT_SMOOTH",
        })
    }
}

/// A maximal cone that is not smooth. `multiplicity` is absent when the cone
/// is not even simplicial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeWitness {
    pub cone: usize,
    pub rays: ConeLabel,
    #[serde(serialize_with = "serialize_opt_int")]
    pub multiplicity: Option<BigInt>,
    pub simplicial: bool,
}

fn serialize_opt_int<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(crate::bigjson::to_number).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionWitness {
    Fan(FanError),
    Cone(ConeWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
pub struct Rejection {
    pub reason: RejectionReason,
    pub witness: RejectionWitness,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            RejectionWitness::Fan(e) => write!(f, "{}: {e}", self.reason),
            RejectionWitness::Cone(c) => match &c.multiplicity {
                Some(mult) => write!(
                    f,
                    "{}: cone {} (maximal cone {}) has multiplicity {mult}",
                    self.reason, c.rays, c.cone
                ),
                None => write!(
                    f,
                    "{}: cone {} (maximal cone {}) is not simplicial",
                    self.reason, c.rays, c.cone
                ),
            },
        }
    }
}

fn variety(hash: &str) -> String {
    format!("X[{hash}]")
}

fn oka_claim(hash: &str) -> String {
    format!("{} is Oka", variety(hash))
}

fn torus_name(k: usize) -> String {
    format!("(C*)^{k}")
}

fn total_space(m: usize) -> String {
    format!("C^{m} \\ Z")
}

fn torus_leaf(k: usize, conclusion: String) -> Step {
    Step::new(
        Witness::LieGroup(LieGroupWitness {
            group: TORUS_FACTOR.to_string(),
            ambient_rank: k,
            description: torus_description(k),
        }),
        conclusion,
        vec![],
    )
}

fn torus_description(k: usize) -> GroupDescription {
    GroupDescription {
        torus_rank: k,
        finite_factors: vec![],
        character_generators: vec![],
    }
}

fn point_torus_conclusion(hash: &str, n: usize) -> String {
    format!("{} = {} is Oka", variety(hash), torus_name(n))
}

fn product_split_witness(f: &ValidatedFan, split: &TorusSplit) -> ProductSplitWitness {
    ProductSplitWitness {
        lattice_rank: f.lattice_rank(),
        torus_rank: split.torus_rank,
        basis: split.basis.clone(),
        reduced_rays: split.reduced.rays().to_vec(),
        reduced_subject: subject_hash(split.reduced.fan()),
    }
}

/// Runs the whole pipeline: validation, torus splitting, the smoothness gate,
/// the quotient presentation and the rule applications.
pub fn certify(fan: &Fan) -> Result<OkaCertificate, Rejection> {
    let validated = validate_fan(fan).map_err(|e| match e {
        FanError::NonSimplicialCone { cone, cone_rays } => Rejection {
            reason: RejectionReason::NotSmooth,
            witness: RejectionWitness::Cone(ConeWitness {
                cone,
                rays: cone_rays,
                multiplicity: None,
                simplicial: false,
            }),
        },
        other => Rejection {
            reason: RejectionReason::InvalidFan,
            witness: RejectionWitness::Fan(other),
        },
    })?;
    let hash = subject_hash(fan);
    let derivation = derive(&validated, &hash)?;
    Ok(OkaCertificate {
        format_version: FORMAT_VERSION.to_string(),
        subject: hash.clone(),
        conclusion: oka_claim(&hash),
        derivation,
    })
}

fn derive(f: &ValidatedFan, hash: &str) -> Result<Step, Rejection> {
    let split = split_torus_factor(f);
    if split.torus_rank == 0 {
        return derive_torus_free(f, hash);
    }
    if split.reduced.ray_count() == 0 {
        return Ok(torus_leaf(
            split.torus_rank,
            point_torus_conclusion(hash, split.torus_rank),
        ));
    }
    let witness = product_split_witness(f, &split);
    let inner = derive_torus_free(&split.reduced, &witness.reduced_subject)?;
    Ok(Step::new(
        Witness::ProductSplit(witness),
        oka_claim(hash),
        vec![
            inner,
            torus_leaf(split.torus_rank, format!("{} is Oka", torus_name(split.torus_rank))),
        ],
    ))
}

fn derive_torus_free(f: &ValidatedFan, hash: &str) -> Result<Step, Rejection> {
    let smooth = is_smooth(f);
    if let Some(bad) = smooth.offender {
        return Err(Rejection {
            reason: RejectionReason::NotSmooth,
            witness: RejectionWitness::Cone(ConeWitness {
                cone: bad.cone,
                rays: bad.rays,
                multiplicity: Some(bad.multiplicity),
                simplicial: true,
            }),
        });
    }
    let pres = cox_presentation(f).expect("torus factor already split off");
    // Every ray lies in some cone, so no primitive collection is a singleton.
    assert!(pres.codim_z.at_least(2), "irrelevant locus of a valid fan has codimension >= 2");
    let free_action = verify_free_action(f).expect("torus factor already split off");
    assert!(free_action.free, "smooth fan with a non-free action: {free_action:?}");
    let cover = verify_cover(f).expect("cover identity holds for validated fans");

    let m = pres.m;
    let group_leaf = Step::new(
        Witness::LieGroup(LieGroupWitness {
            group: QUOTIENT_GROUP.to_string(),
            ambient_rank: m,
            description: pres.group.clone(),
        }),
        format!("G = {} is Oka", pres.group),
        vec![],
    );
    let quotient = Step::new(
        Witness::QuotientBundle(QuotientBundleWitness {
            m,
            class_group: pres.class_group.clone(),
            group: pres.group.clone(),
            degree_matrix: pres.degree_matrix.clone(),
            reductive: pres.group.is_reductive(),
            reductive_justification: REDUCTIVE_JUSTIFICATION.to_string(),
            free_action,
            cover,
        }),
        format!(
            "{} -> {} is a holomorphic fibre bundle with Oka fibre G",
            total_space(m),
            variety(hash)
        ),
        vec![group_leaf],
    );
    let complement = Step::new(
        Witness::Codim2(Codim2Witness {
            m,
            primitive_collections: pres.primitive_collections.clone(),
            codim: pres.codim_z,
            at_least_two: pres.codim_z.at_least(2),
        }),
        format!("{} is Oka", total_space(m)),
        vec![],
    );
    Ok(Step::new(
        Witness::BundleTransfer(BundleTransferWitness {
            total_space: total_space(m),
            fibre: QUOTIENT_GROUP.to_string(),
            base: variety(hash),
            direction: TRANSFER_DIRECTION.to_string(),
        }),
        oka_claim(hash),
        vec![quotient, complement],
    ))
}

/// Where and why a certificate failed to check. `path` uses the JSON field
/// path of the offending value, e.g. `derivation.premises[1].witness.CODIM2_COMPLEMENT_OKA.codim`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("mismatch at {path}: {message}")]
pub struct CheckError {
    pub path: String,
    pub message: String,
}

fn mismatch(path: impl Into<String>, message: impl Into<String>) -> CheckError {
    CheckError {
        path: path.into(),
        message: message.into(),
    }
}

fn expect_eq<T: PartialEq + fmt::Debug>(path: &str, found: &T, expected: &T) -> Result<(), CheckError> {
    if found == expected {
        Ok(())
    } else {
        Err(mismatch(path, format!("expected {expected:?}, found {found:?}")))
    }
}

fn expect_true(path: &str, ok: bool, what: &str) -> Result<(), CheckError> {
    if ok {
        Ok(())
    } else {
        Err(mismatch(path, what.to_string()))
    }
}

fn expect_shape(step: &Step, path: &str, rule: RuleId, premises: usize) -> Result<(), CheckError> {
    expect_eq(&format!("{path}.rule"), &step.rule, &rule)?;
    expect_eq(&format!("{path}.witness"), &step.witness.rule(), &rule)?;
    expect_eq(&format!("{path}.metadata"), &step.metadata, &rule.metadata())?;
    if step.premises.len() != premises {
        return Err(mismatch(
            format!("{path}.premises"),
            format!("{rule} takes {premises} premises, found {}", step.premises.len()),
        ));
    }
    Ok(())
}

/// Rechecks a certificate against a fan. Every witness is recomputed from
/// the fan; the tree must have exactly the shape the rules allow.
pub fn verify_certificate(cert: &OkaCertificate, fan: &Fan) -> Result<(), CheckError> {
    expect_eq("format_version", &cert.format_version.as_str(), &FORMAT_VERSION)?;
    let hash = subject_hash(fan);
    expect_eq("subject", &cert.subject, &hash)?;
    let validated = validate_fan(fan).map_err(|e| mismatch("subject", format!("fan is invalid: {e}")))?;
    expect_eq("conclusion", &cert.conclusion, &oka_claim(&hash))?;
    check_derivation(&cert.derivation, &validated, &hash, "derivation")
}

fn check_derivation(step: &Step, f: &ValidatedFan, hash: &str, path: &str) -> Result<(), CheckError> {
    let split = split_torus_factor(f);
    if split.torus_rank == 0 {
        return check_torus_free(step, f, hash, path);
    }
    if split.reduced.ray_count() == 0 {
        return check_torus_leaf(step, split.torus_rank, &point_torus_conclusion(hash, split.torus_rank), path);
    }

    expect_shape(step, path, RuleId::ProductSplit, 2)?;
    expect_eq(&format!("{path}.conclusion"), &step.conclusion, &oka_claim(hash))?;
    let Witness::ProductSplit(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.PRODUCT_SPLIT");
    let n = f.lattice_rank();
    expect_eq(&format!("{wp}.lattice_rank"), &w.lattice_rank, &n)?;
    expect_eq(&format!("{wp}.torus_rank"), &w.torus_rank, &split.torus_rank)?;
    expect_true(
        &format!("{wp}.basis"),
        w.basis.rows() == n && w.basis.cols() == n && w.basis.is_unimodular(),
        "basis is not a unimodular n x n matrix",
    )?;
    // Independent of how the basis was found: rays = [reduced | 0] * basis.
    let r = n - split.torus_rank;
    let reduced_ok = w.reduced_rays.len() == f.ray_count()
        && w.reduced_rays.iter().zip(f.rays()).all(|(y, u)| {
            y.len() == r && {
                let padded: Vec<BigInt> = y.iter().cloned().chain((0..split.torus_rank).map(|_| BigInt::from(0))).collect();
                w.basis.left_apply(&padded).map(|v| &v == u).unwrap_or(false)
            }
        });
    expect_true(&format!("{wp}.reduced_rays"), reduced_ok, "reduced rays times basis do not give the rays")?;
    expect_eq(&format!("{wp}.basis"), &w.basis, &split.basis)?;
    expect_eq(&format!("{wp}.reduced_rays"), &w.reduced_rays, &split.reduced.rays().to_vec())?;
    let reduced_hash = subject_hash(split.reduced.fan());
    expect_eq(&format!("{wp}.reduced_subject"), &w.reduced_subject, &reduced_hash)?;

    check_torus_free(&step.premises[0], &split.reduced, &reduced_hash, &format!("{path}.premises[0]"))?;
    check_torus_leaf(
        &step.premises[1],
        split.torus_rank,
        &format!("{} is Oka", torus_name(split.torus_rank)),
        &format!("{path}.premises[1]"),
    )
}

fn check_torus_leaf(step: &Step, k: usize, conclusion: &str, path: &str) -> Result<(), CheckError> {
    expect_shape(step, path, RuleId::LieGroupOka, 0)?;
    expect_eq(&format!("{path}.conclusion"), &step.conclusion.as_str(), &conclusion)?;
    let Witness::LieGroup(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.LIE_GROUP_OKA");
    expect_eq(&format!("{wp}.group"), &w.group.as_str(), &TORUS_FACTOR)?;
    expect_eq(&format!("{wp}.ambient_rank"), &w.ambient_rank, &k)?;
    expect_eq(&format!("{wp}.description"), &w.description, &torus_description(k))
}

fn check_torus_free(step: &Step, f: &ValidatedFan, hash: &str, path: &str) -> Result<(), CheckError> {
    expect_shape(step, path, RuleId::BundleTransfer, 2)?;
    expect_eq(&format!("{path}.conclusion"), &step.conclusion, &oka_claim(hash))?;
    if let Some(bad) = is_smooth(f).offender {
        return Err(mismatch(
            path,
            format!("fan is not smooth: cone {} has multiplicity {}", bad.rays, bad.multiplicity),
        ));
    }
    let m = f.ray_count();

    let Witness::BundleTransfer(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.BUNDLE_TRANSFER");
    expect_eq(&format!("{wp}.total_space"), &w.total_space, &total_space(m))?;
    expect_eq(&format!("{wp}.fibre"), &w.fibre.as_str(), &QUOTIENT_GROUP)?;
    expect_eq(&format!("{wp}.base"), &w.base, &variety(hash))?;
    expect_eq(&format!("{wp}.direction"), &w.direction.as_str(), &TRANSFER_DIRECTION)?;

    let quotient_path = format!("{path}.premises[0]");
    let complement_path = format!("{path}.premises[1]");
    let group = check_quotient_bundle(&step.premises[0], f, hash, &quotient_path)?;
    check_group_leaf(&step.premises[0].premises[0], f, &group, &format!("{quotient_path}.premises[0]"))?;
    check_complement(&step.premises[1], f, &complement_path)
}

fn check_quotient_bundle(
    step: &Step,
    f: &ValidatedFan,
    hash: &str,
    path: &str,
) -> Result<GroupDescription, CheckError> {
    expect_shape(step, path, RuleId::QuotientBundle, 1)?;
    let m = f.ray_count();
    expect_eq(
        &format!("{path}.conclusion"),
        &step.conclusion,
        &format!("{} -> {} is a holomorphic fibre bundle with Oka fibre G", total_space(m), variety(hash)),
    )?;
    let Witness::QuotientBundle(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.QUOTIENT_BUNDLE");
    let pres = cox_presentation(f).map_err(|e| mismatch(&wp, e.to_string()))?;

    expect_eq(&format!("{wp}.m"), &w.m, &m)?;
    expect_eq(&format!("{wp}.class_group"), &w.class_group, &pres.class_group)?;
    expect_eq(&format!("{wp}.group"), &w.group, &pres.group)?;
    expect_eq(&format!("{wp}.degree_matrix"), &w.degree_matrix, &pres.degree_matrix)?;
    expect_true(&format!("{wp}.reductive"), w.reductive, "the group must be reductive")?;
    expect_eq(
        &format!("{wp}.reductive_justification"),
        &w.reductive_justification.as_str(),
        &REDUCTIVE_JUSTIFICATION,
    )?;

    let free = verify_free_action(f).map_err(|e| mismatch(&wp, e.to_string()))?;
    expect_true(&format!("{wp}.free_action.free"), w.free_action.free, "the action must be free")?;
    expect_eq(&format!("{wp}.free_action"), &w.free_action, &free)?;

    let cover = verify_cover(f).map_err(|e| mismatch(format!("{wp}.cover"), e.to_string()))?;
    expect_eq(&format!("{wp}.cover"), &w.cover, &cover)?;
    Ok(pres.group)
}

fn check_group_leaf(step: &Step, f: &ValidatedFan, group: &GroupDescription, path: &str) -> Result<(), CheckError> {
    expect_shape(step, path, RuleId::LieGroupOka, 0)?;
    expect_eq(&format!("{path}.conclusion"), &step.conclusion, &format!("G = {group} is Oka"))?;
    let Witness::LieGroup(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.LIE_GROUP_OKA");
    expect_eq(&format!("{wp}.group"), &w.group.as_str(), &QUOTIENT_GROUP)?;
    expect_eq(&format!("{wp}.ambient_rank"), &w.ambient_rank, &f.ray_count())?;
    let rays = f.ray_matrix();
    for (i, g) in w.description.character_generators.iter().enumerate() {
        expect_true(
            &format!("{wp}.description.character_generators[{i}]"),
            g.satisfies_defining_equations(&rays),
            "generator violates the defining equations of G",
        )?;
    }
    let recomputed = group_g(f).map_err(|e| mismatch(&wp, e.to_string()))?;
    expect_eq(&format!("{wp}.description"), &w.description, &recomputed)
}

fn check_complement(step: &Step, f: &ValidatedFan, path: &str) -> Result<(), CheckError> {
    expect_shape(step, path, RuleId::Codim2ComplementOka, 0)?;
    let m = f.ray_count();
    expect_eq(&format!("{path}.conclusion"), &step.conclusion, &format!("{} is Oka", total_space(m)))?;
    let Witness::Codim2(w) = &step.witness else { unreachable!("shape checked") };
    let wp = format!("{path}.witness.CODIM2_COMPLEMENT_OKA");
    let collections = primitive_collections(f);
    let codim = irrelevant_codim(&collections, m);
    expect_eq(&format!("{wp}.m"), &w.m, &m)?;
    expect_eq(&format!("{wp}.primitive_collections"), &w.primitive_collections, &collections)?;
    expect_eq(&format!("{wp}.codim"), &w.codim, &codim)?;
    expect_true(&format!("{wp}.codim"), w.codim.at_least(2), "codimension of Z must be at least 2")?;
    expect_true(&format!("{wp}.at_least_two"), w.at_least_two, "codimension of Z must be at least 2")
}

/// Renders the derivation as indented prose, quoting each rule's statement
/// from the certificate's own metadata.
pub fn explain(cert: &OkaCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Claim: {}", cert.conclusion);
    let _ = writeln!(out, "Subject fan: {}", cert.subject);
    let _ = writeln!(out);
    explain_step(&cert.derivation, "1", 0, &mut out);
    out
}

fn explain_step(step: &Step, number: &str, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}{number}. {} [{}]", step.conclusion, step.rule);
    let kind = if step.rule.is_axiom() { "Axiom" } else { "Rule" };
    let _ = writeln!(out, "{pad}   {kind} ({}): {}", step.metadata.label, step.metadata.statement);
    let _ = writeln!(out, "{pad}   Source: {}", step.metadata.source);
    let _ = writeln!(out, "{pad}   Checked: {}", step.metadata.scope);
    let _ = writeln!(out, "{pad}   Witness: {}", witness_summary(&step.witness));
    if !step.premises.is_empty() {
        let _ = writeln!(out, "{pad}   Because:");
    }
    for (i, p) in step.premises.iter().enumerate() {
        explain_step(p, &format!("{number}.{}", i + 1), depth + 1, out);
    }
}

fn witness_summary(w: &Witness) -> String {
    match w {
        Witness::LieGroup(w) if w.group == TORUS_FACTOR => {
            format!("the algebraic torus {}", torus_name(w.description.torus_rank))
        }
        Witness::LieGroup(w) => format!(
            "G = {} inside (C*)^{}, with {} explicit generator(s)",
            w.description,
            w.ambient_rank,
            w.description.character_generators.len()
        ),
        Witness::Codim2(w) => {
            let pcs: Vec<String> = w
                .primitive_collections
                .iter()
                .map(|c| ConeLabel(c.clone()).to_string())
                .collect();
            format!(
                "m = {}, primitive collections [{}], codim Z = {}",
                w.m,
                pcs.join(", "),
                w.codim
            )
        }
        Witness::QuotientBundle(w) => format!(
            "Cl(X) = {}, G = {}, free action checked on {} cones, cover by {} invariant affine sets ({} subsets checked)",
            w.class_group,
            w.group,
            w.free_action.cones_checked,
            w.cover.open_sets.len(),
            w.cover.subsets_checked
        ),
        Witness::BundleTransfer(w) => format!(
            "bundle {} -> {} with fibre {}; total space Oka implies base Oka",
            w.total_space, w.base, w.fibre
        ),
        Witness::ProductSplit(w) => format!(
            "rays span a saturated sublattice of rank {} in Z^{}; torus factor {}",
            w.lattice_rank - w.torus_rank,
            w.lattice_rank,
            torus_name(w.torus_rank)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fanfmt::catalog_fan;

    fn fan(name: &str) -> Fan {
        catalog_fan(name).unwrap().to_fan()
    }

    #[test]
    fn p2_certificate_shape() {
        let cert = certify(&fan("P2")).unwrap();
        let root = &cert.derivation;
        assert_eq!(root.rule, RuleId::BundleTransfer);
        assert_eq!(root.premises[0].rule, RuleId::QuotientBundle);
        assert_eq!(root.premises[0].premises[0].rule, RuleId::LieGroupOka);
        assert_eq!(root.premises[1].rule, RuleId::Codim2ComplementOka);
        let Witness::Codim2(w) = &root.premises[1].witness else { panic!() };
        assert_eq!((w.m, w.codim), (3, Codim::Finite(3)));
        let Witness::LieGroup(g) = &root.premises[0].premises[0].witness else { panic!() };
        assert_eq!(g.description.torus_rank, 1);
        assert!(verify_certificate(&cert, &fan("P2")).is_ok());
    }

    #[test]
    fn trivial_fan_is_a_single_leaf() {
        let cert = certify(&fan("torus(2)")).unwrap();
        assert_eq!(cert.derivation.rule, RuleId::LieGroupOka);
        assert!(cert.derivation.premises.is_empty());
        verify_certificate(&cert, &fan("torus(2)")).unwrap();
    }

    #[test]
    fn wps_rejected_with_cone() {
        let r = certify(&fan("wps_112")).unwrap_err();
        assert_eq!(r.reason, RejectionReason::NotSmooth);
        let RejectionWitness::Cone(c) = &r.witness else { panic!() };
        assert_eq!(c.rays, ConeLabel(vec![2, 0]));
        assert_eq!(c.multiplicity, Some(BigInt::from(2)));
        assert_eq!(r.to_string(), "NOT_SMOOTH: cone {2,0} (maximal cone 2) has multiplicity 2");
    }

    #[test]
    fn non_simplicial_cone_reported_as_not_smooth() {
        let f = Fan::from_i64("sq", 3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]], &[&[0, 1, 2, 3]]);
        let r = certify(&f).unwrap_err();
        assert_eq!(r.reason, RejectionReason::NotSmooth);
        assert!(matches!(r.witness, RejectionWitness::Cone(ConeWitness { simplicial: false, .. })));
    }

    #[test]
    fn invalid_fan_rejected() {
        let f = Fan::from_i64("x", 2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]], &[&[0, 1], &[2, 3]]);
        let r = certify(&f).unwrap_err();
        assert_eq!(r.reason, RejectionReason::InvalidFan);
        assert_eq!(r.witness, RejectionWitness::Fan(FanError::BadIntersection { first: 0, second: 1 }));
    }

    #[test]
    fn wrong_subject_rejected() {
        let cert = certify(&fan("P2")).unwrap();
        let err = verify_certificate(&cert, &fan("p1xp1")).unwrap_err();
        assert_eq!(err.path, "subject");
    }

    #[test]
    fn tampered_codim_rejected_at_leaf() {
        let mut cert = certify(&fan("P2")).unwrap();
        let Witness::Codim2(w) = &mut cert.derivation.premises[1].witness else { panic!() };
        w.codim = Codim::Finite(1);
        let err = verify_certificate(&cert, &fan("P2")).unwrap_err();
        assert_eq!(err.path, "derivation.premises[1].witness.CODIM2_COMPLEMENT_OKA.codim");
    }

    #[test]
    fn swapped_premises_rejected() {
        let mut cert = certify(&fan("P2")).unwrap();
        cert.derivation.premises.swap(0, 1);
        let err = verify_certificate(&cert, &fan("P2")).unwrap_err();
        assert_eq!(err.path, "derivation.premises[0].rule");
    }

    #[test]
    fn product_with_torus_embeds_inner_derivation() {
        let inner = certify(&fan("P2")).unwrap();
        let outer = certify(&crate::fanfmt::resolve_catalog_expr("P2*torus(2)").unwrap().to_fan()).unwrap();
        assert_eq!(outer.derivation.rule, RuleId::ProductSplit);
        assert_eq!(outer.derivation.premises[0], inner.derivation);
    }

    #[test]
    fn explanation_mentions_every_rule() {
        let text = explain(&certify(&fan("P2")).unwrap());
        for rule in ["BUNDLE_TRANSFER", "QUOTIENT_BUNDLE", "LIE_GROUP_OKA", "CODIM2_COMPLEMENT_OKA"] {
            assert!(text.contains(rule), "{text}");
        }
        assert!(text.contains(&RuleId::BundleTransfer.metadata().statement));
    }
}
