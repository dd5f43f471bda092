//! Serialization schemas for instances and reports.
//!
//! Complex scalars serialize as two-element arrays `[re, im]`, matrices
//! row-major, and everything is plain JSON so fixtures stay diffable.
//! Serialization is byte-stable: struct field order is fixed and floats use
//! the shortest round-tripping representation, so identical inputs produce
//! identical files.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, AlgebraElement, CMatrix, CentralElement, C64};
use crate::characterize::{CharacterizationResult, ProjectionGamma, Verdict, Witness};
use crate::error::{Error, Result};
use crate::module::{ModuleElement, ModuleSpace};
use crate::operators::ModuleOperator;

/// A complex number as `[re, im]`.
pub type ComplexDto = [f64; 2];

pub(crate) fn complex_to_dto(z: C64) -> ComplexDto {
    [z.re, z.im]
}

pub(crate) fn complex_from_dto(d: ComplexDto) -> C64 {
    C64::new(d[0], d[1])
}

// ---------------------------------------------------------------------------
// value schemas
// ---------------------------------------------------------------------------

/// `{"blocks": [[[..row..], ..], ..]}` — one row-major matrix per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElementDto {
    pub blocks: Vec<Vec<Vec<ComplexDto>>>,
}

impl AlgebraElementDto {
    pub fn from_element(a: &AlgebraElement) -> Self {
        let blocks = a
            .blocks()
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| complex_to_dto(m[(r, c)])).collect())
                    .collect()
            })
            .collect();
        Self { blocks }
    }

    pub fn to_element(&self, descriptor: &AlgebraDescriptor) -> Result<AlgebraElement> {
        if self.blocks.len() != descriptor.num_blocks() {
            return Err(Error::Malformed(format!(
                "expected {} blocks, found {}",
                descriptor.num_blocks(),
                self.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (b, rows) in self.blocks.iter().enumerate() {
            let k = descriptor.block_sizes()[b];
            if rows.len() != k || rows.iter().any(|row| row.len() != k) {
                return Err(Error::Malformed(format!("block {b} is not {k}x{k}")));
            }
            blocks.push(CMatrix::from_fn(k, k, |r, c| complex_from_dto(rows[r][c])));
        }
        AlgebraElement::from_blocks(descriptor.clone(), blocks)
    }
}

/// `{"entries": [AlgebraElement, ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleElementDto {
    pub entries: Vec<AlgebraElementDto>,
}

impl ModuleElementDto {
    pub fn from_element(x: &ModuleElement) -> Self {
        Self {
            entries: x
                .entries()
                .iter()
                .map(AlgebraElementDto::from_element)
                .collect(),
        }
    }

    pub fn to_element(&self, space: &ModuleSpace) -> Result<ModuleElement> {
        if self.entries.len() != space.rank() {
            return Err(Error::Malformed(format!(
                "expected {} entries, found {}",
                space.rank(),
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_element(space.descriptor()))
            .collect::<Result<Vec<_>>>()?;
        ModuleElement::from_entries(space.clone(), entries)
    }
}

/// `{"coeffs": [[AlgebraElement, ..], ..]}` — row `i` holds `C_{i0..im}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorDto {
    pub coeffs: Vec<Vec<AlgebraElementDto>>,
}

impl OperatorDto {
    pub fn from_operator(op: &ModuleOperator) -> Self {
        let n = op.domain().rank();
        let m = op.codomain().rank();
        let coeffs = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| AlgebraElementDto::from_element(op.coeff(i, j)))
                    .collect()
            })
            .collect();
        Self { coeffs }
    }

    pub fn to_operator(
        &self,
        domain: &ModuleSpace,
        codomain: &ModuleSpace,
    ) -> Result<ModuleOperator> {
        if self.coeffs.len() != domain.rank()
            || self.coeffs.iter().any(|row| row.len() != codomain.rank())
        {
            return Err(Error::Malformed("coefficient array shape mismatch".into()));
        }
        let mut coeffs = Vec::with_capacity(domain.rank() * codomain.rank());
        for row in &self.coeffs {
            for dto in row {
                coeffs.push(dto.to_element(domain.descriptor())?);
            }
        }
        ModuleOperator::from_coeffs(domain.clone(), codomain.clone(), coeffs)
    }
}

pub fn central_to_dto(g: &CentralElement) -> Vec<ComplexDto> {
    g.scalars().iter().map(|&z| complex_to_dto(z)).collect()
}

pub fn central_from_dto(
    descriptor: &AlgebraDescriptor,
    dto: &[ComplexDto],
) -> Result<CentralElement> {
    CentralElement::new(
        descriptor.clone(),
        dto.iter().map(|&d| complex_from_dto(d)).collect(),
    )
    .map_err(|_| Error::Malformed("central element scalar count mismatch".into()))
}

// ---------------------------------------------------------------------------
// instance files
// ---------------------------------------------------------------------------

/// A self-contained problem instance: algebra, rank, seed, operators, and the
/// construction's ground-truth γ when one exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub blocks: Vec<usize>,
    pub rank: usize,
    pub seed: u64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<ComplexDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<OperatorDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<OperatorDto>,
}

impl InstanceFile {
    pub fn space(&self) -> Result<ModuleSpace> {
        ModuleSpace::new(AlgebraDescriptor::new(self.blocks.clone())?, self.rank)
    }

    /// The operator pair, or `Malformed` if the instance does not carry one.
    pub fn operators(&self) -> Result<(ModuleOperator, ModuleOperator)> {
        let space = self.space()?;
        let t = self
            .t
            .as_ref()
            .ok_or_else(|| Error::Malformed("instance has no operator T".into()))?
            .to_operator(&space, &space)?;
        let s = self
            .s
            .as_ref()
            .ok_or_else(|| Error::Malformed("instance has no operator S".into()))?
            .to_operator(&space, &space)?;
        Ok((t, s))
    }

    pub fn stored_gamma(&self) -> Result<Option<CentralElement>> {
        match &self.gamma {
            None => Ok(None),
            Some(dto) => {
                let desc = AlgebraDescriptor::new(self.blocks.clone())?;
                Ok(Some(central_from_dto(&desc, dto)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionGammaDto {
    pub block: usize,
    pub projection: String,
    pub gamma: ComplexDto,
}

impl ProjectionGammaDto {
    fn from(p: &ProjectionGamma) -> Self {
        Self {
            block: p.block,
            projection: p.label.clone(),
            gamma: complex_to_dto(p.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub x: ModuleElementDto,
    pub y: ModuleElementDto,
    pub orthogonality: f64,
    pub violation: f64,
    pub threshold: f64,
}

impl WitnessDto {
    pub fn from_witness(w: &Witness) -> Self {
        Self {
            x: ModuleElementDto::from_element(&w.x),
            y: ModuleElementDto::from_element(&w.y),
            orthogonality: w.orthogonality,
            violation: w.violation,
            threshold: w.threshold,
        }
    }
}

/// Tagged record for a preservation verdict:
/// `{"verdict": "preserving" | "not_preserving" | "zero_pair" | "inconclusive", …}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDto {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<ComplexDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_projection_gammas: Option<Vec<ProjectionGammaDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lsq_gamma: Option<Vec<ComplexDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<usize>,
}

impl VerdictDto {
    pub fn from_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::Preserving(res) => Self::from_characterization("preserving", res),
            Verdict::ZeroPair => Self {
                verdict: "zero_pair".into(),
                gamma: Some(vec![]),
                residual: Some(0.0),
                tolerance: None,
                per_projection_gammas: None,
                lsq_gamma: None,
                witness: None,
                attempts: None,
            },
            Verdict::NotPreserving(w) => Self {
                verdict: "not_preserving".into(),
                gamma: None,
                residual: None,
                tolerance: None,
                per_projection_gammas: None,
                lsq_gamma: None,
                witness: Some(WitnessDto::from_witness(w)),
                attempts: None,
            },
            Verdict::Inconclusive { residual, attempts } => Self {
                verdict: "inconclusive".into(),
                gamma: None,
                residual: *residual,
                tolerance: None,
                per_projection_gammas: None,
                lsq_gamma: None,
                witness: None,
                attempts: Some(*attempts),
            },
        }
    }

    fn from_characterization(tag: &str, res: &CharacterizationResult) -> Self {
        Self {
            verdict: tag.into(),
            gamma: Some(central_to_dto(&res.gamma)),
            residual: Some(res.residual),
            tolerance: Some(res.tolerance),
            per_projection_gammas: Some(
                res.per_projection
                    .iter()
                    .map(ProjectionGammaDto::from)
                    .collect(),
            ),
            lsq_gamma: Some(central_to_dto(&res.lsq_gamma)),
            witness: None,
            attempts: None,
        }
    }

    /// Stable exit-code contract: 0 preserving, 1 not preserving, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "preserving" | "zero_pair" => 0,
            "not_preserving" => 1,
            _ => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema is serializable");
        s.push('\n');
        s
    }
}

/// One recorded suite failure with enough serialized input to re-verify it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureDto {
    pub case: String,
    pub measured: f64,
    pub threshold: f64,
    pub inputs: serde_json::Value,
}

/// Canonical suite report; wall time is attached only in timing mode so the
/// canonical output is byte-stable per seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReportDto {
    pub suite: String,
    pub blocks: Vec<usize>,
    pub rank: usize,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub failures: Vec<FailureDto>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRunDto {
    pub reports: Vec<SuiteReportDto>,
    pub all_passed: bool,
}

impl SuiteRunDto {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema is serializable");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
