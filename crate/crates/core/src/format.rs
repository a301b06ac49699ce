//! JSON wire formats: family files, nesting-tree files, and certificates.
//!
//! Subspaces serialize as arrays of basis rows with integer-coded entries;
//! big integers serialize as decimal strings so no value is ever truncated
//! to 64 bits. Writers emit UTF-8 with a trailing newline and are
//! byte-deterministic for a fixed input.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certify::{BoundReport, Certificate, Outcome};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::nesting::{FamilyNode, FamilyTree, NestingParams};
use crate::subspace::Subspace;

/// Serialized field tower: {p, t, modulus, [ext_degree, ext_modulus]}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u32,
    pub t: usize,
    pub modulus: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_modulus: Option<Vec<u32>>,
}

impl FieldRecord {
    pub fn from_spec(field: &FieldSpec) -> FieldRecord {
        FieldRecord {
            p: field.characteristic(),
            t: field.degree(),
            modulus: field.modulus().iter().map(|c| c.0).collect(),
            ext_degree: None,
            ext_modulus: None,
        }
    }

    pub fn to_spec(&self) -> Result<Arc<FieldSpec>> {
        FieldSpec::with_modulus(
            self.p,
            self.t,
            self.modulus.iter().map(|&c| FieldElem(c)).collect(),
        )
    }
}

pub fn subspace_rows(s: &Subspace) -> Vec<Vec<u32>> {
    s.basis()
        .rows_iter()
        .map(|r| r.iter().map(|e| e.0).collect())
        .collect()
}

pub fn rows_to_subspace(
    field: &Arc<FieldSpec>,
    ambient: usize,
    rows: &[Vec<u32>],
) -> Result<Subspace> {
    let q = field.order();
    let rows: Vec<Vec<FieldElem>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| {
                    if v >= q {
                        Err(Error::Parse(format!("entry {v} outside GF({q})")))
                    } else {
                        Ok(FieldElem(v))
                    }
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Subspace::from_rows(field.clone(), ambient, &rows)
}

/// A flat family of k-spaces with its field header.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub field: FieldRecord,
    pub ambient_n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub members: Vec<Vec<Vec<u32>>>,
}

impl FamilyFile {
    pub fn new(
        field: &FieldSpec,
        ambient_n: usize,
        k: usize,
        construction: Option<String>,
        s: Option<usize>,
        members: &[Subspace],
    ) -> FamilyFile {
        FamilyFile {
            field: FieldRecord::from_spec(field),
            ambient_n,
            k,
            construction,
            s,
            members: members.iter().map(subspace_rows).collect(),
        }
    }

    /// Decode the members; validates entries, widths and the stated k.
    pub fn to_subspaces(&self) -> Result<(Arc<FieldSpec>, Vec<Subspace>)> {
        let field = self.field.to_spec()?;
        let members: Vec<Subspace> = self
            .members
            .iter()
            .map(|rows| {
                let s = rows_to_subspace(&field, self.ambient_n, rows)?;
                if s.dim() != self.k {
                    return Err(Error::Parse(format!(
                        "member of dimension {} in a k = {} family",
                        s.dim(),
                        self.k
                    )));
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((field, members))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("family files always serialize");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<FamilyFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A nesting tree: parameters, tower, nested nodes, and the flat leaf list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    pub params: NestingParams,
    pub field: FieldRecord,
    pub tower: Vec<Vec<Vec<u32>>>,
    pub nodes: Vec<TreeNodeRecord>,
    pub leaves: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeNodeRecord {
    pub member: Vec<Vec<u32>>,
    pub children: Vec<TreeNodeRecord>,
}

fn node_record(node: &FamilyNode) -> TreeNodeRecord {
    TreeNodeRecord {
        member: subspace_rows(&node.member),
        children: node.children.iter().map(node_record).collect(),
    }
}

impl TreeFile {
    pub fn from_tree(tree: &FamilyTree) -> TreeFile {
        TreeFile {
            params: tree.params.clone(),
            field: FieldRecord::from_spec(&tree.field),
            tower: tree.tower.iter().map(subspace_rows).collect(),
            nodes: tree.roots.iter().map(node_record).collect(),
            leaves: tree
                .leaf_subspaces()
                .iter()
                .map(subspace_rows)
                .collect(),
        }
    }

    pub fn to_tree(&self) -> Result<FamilyTree> {
        let field = self.field.to_spec()?;
        let n = self.params.ambient_dim;
        fn build(
            rec: &TreeNodeRecord,
            field: &Arc<FieldSpec>,
            n: usize,
        ) -> Result<FamilyNode> {
            Ok(FamilyNode {
                member: rows_to_subspace(field, n, &rec.member)?,
                children: rec
                    .children
                    .iter()
                    .map(|c| build(c, field, n))
                    .collect::<Result<Vec<_>>>()?,
            })
        }
        Ok(FamilyTree {
            params: self.params.clone(),
            field: field.clone(),
            tower: self
                .tower
                .iter()
                .map(|rows| rows_to_subspace(&field, n, rows))
                .collect::<Result<Vec<_>>>()?,
            roots: self
                .nodes
                .iter()
                .map(|r| build(r, &field, n))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("tree files always serialize");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<TreeFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Serialized verification report; counts and bounds as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub family_hash: String,
    pub family_size: usize,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub exhaustive: bool,
    pub pairs_examined: u64,
    pub subsets_examined: u64,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates_checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub member_indices: Vec<usize>,
    pub kernel: Vec<Vec<u32>>,
    pub kernel_dim: usize,
    pub span_dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    pub actual: String,
    pub upper: String,
}

impl BoundsRecord {
    fn from_report(report: &BoundReport) -> BoundsRecord {
        BoundsRecord {
            lower: report.lower.as_ref().map(|b| b.to_string()),
            actual: report.actual.to_string(),
            upper: report.upper.to_string(),
        }
    }
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> CertificateFile {
        let (outcome, witness, detail, candidates_checked) = match &cert.outcome {
            Outcome::SunflowerFree => ("sunflower-free".to_string(), None, None, None),
            Outcome::Witness(w) => (
                "witness".to_string(),
                Some(WitnessRecord {
                    member_indices: w.member_indices.clone(),
                    kernel: subspace_rows(&w.kernel),
                    kernel_dim: w.kernel_dim,
                    span_dim: w.span_dim,
                }),
                None,
                None,
            ),
            Outcome::ConditionsHold => ("conditions-hold".to_string(), None, None, None),
            Outcome::ConditionViolation { detail } => (
                "condition-violation".to_string(),
                None,
                Some(detail.clone()),
                None,
            ),
            Outcome::NestingValid => ("nesting-valid".to_string(), None, None, None),
            Outcome::NestingViolation { detail } => (
                "nesting-violation".to_string(),
                None,
                Some(detail.clone()),
                None,
            ),
            Outcome::Maximal { candidates_checked } => (
                "maximal".to_string(),
                None,
                None,
                Some(*candidates_checked),
            ),
            Outcome::Extendable { candidate } => (
                "extendable".to_string(),
                None,
                Some(format!("extendable by {:?}", subspace_rows(candidate))),
                None,
            ),
        };
        CertificateFile {
            family_hash: cert.family_hash.clone(),
            family_size: cert.family_size,
            s: cert.s,
            mode: cert.mode.map(|m| m.to_string()),
            exhaustive: cert.stats.exhaustive,
            pairs_examined: cert.stats.pairs_examined,
            subsets_examined: cert.stats.subsets_examined,
            outcome,
            witness,
            detail,
            candidates_checked,
            bounds: cert.bounds.as_ref().map(BoundsRecord::from_report),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("certificates always serialize");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<CertificateFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
