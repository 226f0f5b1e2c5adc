//! Evaluates the left- and right-hand side of every complementarity relation
//! and emits structured verdicts. Path distinguishability defaults to the
//! closed-form upper bound for P_s (a stronger check than the stated
//! inequality); an oracle mode recomputes it with the POVM optimizer.

pub mod closed_form;
mod report;

pub use report::{csv_columns, csv_fields, fmt_float};

use serde::{Deserialize, Serialize};

use crate::discrimination::{
    ps_helstrom_n2, ps_optimize, ps_upper_bound, Ensemble, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::interferometer::{apply_detectors, DetectorConfig, InterferometerOutput};
use crate::measures::{
    concurrence_wootters, entanglement_e, entanglement_pure_formula, mixedness_from_purity,
    visibility_v_sq, visibility_x, MeasureKind, MeasureValue,
};
use crate::states::{DensityMatrix, PureBipartite};
use crate::tolerances::Tolerances;

/// The relations this library can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationId {
    /// Duality: (P_s - 1/n)² + V² ≤ (1-1/n)² - 2(n-1)/n² (Tr ρ̃_D² - Tr ρ̃_A²)
    #[serde(rename = "th1")]
    Th1Duality,
    /// No-memory duality for pure inputs: (P_s - 1/n)² + V² ≤ (1-1/n)²
    #[serde(rename = "eq13")]
    Eq13NoMemory,
    /// Two-path identity form of the duality
    #[serde(rename = "cor1")]
    Cor1N2Identity,
    /// Mixedness triality: lhs + M(ρ̃_A) ≤ (1-1/n)² + M(ρ̃_D)
    #[serde(rename = "th2")]
    Th2Mixedness,
    /// Two-path identity with |⟨d₁|d₂⟩|² = ½: pd² + ½V² + ½M = ¼
    #[serde(rename = "cor2")]
    Cor2N2Identity,
    /// Entanglement triality: pd² + V² + E(ρ_AB)² ≤ (n²-1)/n² - 2(n-1)/n² Tr ρ̃_AB²
    #[serde(rename = "th3")]
    Th3Entanglement,
    /// Prior duality with l1 coherence: pd² + X² ≤ (1-1/n)²
    #[serde(rename = "eq1")]
    Eq1Prior,
    /// Prior memory-assisted duality: pd² + X² ≤ (1-1/n)² + 2(n-1)/n² (Tr ρ̃_A² - Tr ρ̃_AB²)
    #[serde(rename = "eq2")]
    Eq2PriorMemory,
    /// Limiting duality, identical branch vectors: pd² + V² ≤ (1-1/n)²
    #[serde(rename = "limit_pd_v")]
    LimitPdV,
    /// Limiting duality, orthonormal branch vectors: pd² + E² ≤ rhs of Th3
    #[serde(rename = "limit_pd_e")]
    LimitPdE,
}

impl RelationId {
    pub const ALL: [RelationId; 10] = [
        RelationId::Th1Duality,
        RelationId::Eq13NoMemory,
        RelationId::Cor1N2Identity,
        RelationId::Th2Mixedness,
        RelationId::Cor2N2Identity,
        RelationId::Th3Entanglement,
        RelationId::Eq1Prior,
        RelationId::Eq2PriorMemory,
        RelationId::LimitPdV,
        RelationId::LimitPdE,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RelationId::Th1Duality => "th1",
            RelationId::Eq13NoMemory => "eq13",
            RelationId::Cor1N2Identity => "cor1",
            RelationId::Th2Mixedness => "th2",
            RelationId::Cor2N2Identity => "cor2",
            RelationId::Th3Entanglement => "th3",
            RelationId::Eq1Prior => "eq1",
            RelationId::Eq2PriorMemory => "eq2",
            RelationId::LimitPdV => "limit_pd_v",
            RelationId::LimitPdE => "limit_pd_e",
        }
    }

    pub fn parse(s: &str) -> Option<RelationId> {
        RelationId::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s.trim().to_ascii_lowercase())
    }
}

impl std::fmt::Display for RelationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the P_s term of path distinguishability is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdMode {
    /// Closed-form upper bound (default; matches how the relations are proved).
    UpperBound,
    /// Iterated-POVM value (oracle mode; never exceeds the bound).
    Optimized,
}

/// Input state, keeping the amplitude form when it is known so that
/// entanglement stays available at any path count.
#[derive(Clone, Debug)]
pub struct InputState {
    rho: DensityMatrix,
    pure: Option<PureBipartite>,
}

impl InputState {
    pub fn mixed(rho: DensityMatrix) -> Self {
        InputState { rho, pure: None }
    }

    pub fn pure(psi: PureBipartite) -> Self {
        let rho = psi.to_density();
        InputState {
            rho,
            pure: Some(psi),
        }
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn as_pure(&self) -> Option<&PureBipartite> {
        self.pure.as_ref()
    }

    pub fn dim_a(&self) -> usize {
        self.rho.dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.rho.dim_b()
    }
}

impl From<DensityMatrix> for InputState {
    fn from(rho: DensityMatrix) -> Self {
        InputState::mixed(rho)
    }
}

impl From<PureBipartite> for InputState {
    fn from(psi: PureBipartite) -> Self {
        InputState::pure(psi)
    }
}

/// Scalar quantities entering a relation; absent fields were not needed.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Components {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps: Option<f64>,
}

/// Verdict for one relation on one input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplementarityReport {
    pub relation: RelationId,
    /// Path count (the normalization dimension).
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs
    pub residual: f64,
    /// Inequalities: residual ≥ −tol. Identities: |residual| ≤ tol.
    pub satisfied: bool,
    pub is_identity: bool,
    pub components: Components,
}

impl ComplementarityReport {
    fn build(
        relation: RelationId,
        n: usize,
        lhs: f64,
        rhs: f64,
        is_identity: bool,
        components: Components,
        tol: f64,
    ) -> Self {
        let residual = rhs - lhs;
        let satisfied = if is_identity {
            residual.abs() <= tol
        } else {
            residual >= -tol
        };
        ComplementarityReport {
            relation,
            n,
            lhs,
            rhs,
            residual,
            satisfied,
            is_identity,
            components,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }

    /// Every present component sits in its measure's valid range.
    pub fn components_in_range(&self, tol: f64) -> bool {
        let n = self.n;
        let c = &self.components;
        let checks = [
            c.v2.map(|v| MeasureValue::new(MeasureKind::V2, v, n)),
            c.x2.map(|v| MeasureValue::new(MeasureKind::X2, v, n)),
            c.e2.map(|v| MeasureValue::new(MeasureKind::E2, v, n)),
            c.m_a.map(|v| MeasureValue::new(MeasureKind::M, v, n)),
            c.purity_a
                .map(|v| MeasureValue::new(MeasureKind::Purity, v, n)),
        ];
        let simple = checks.iter().flatten().all(|m| m.in_range(tol));
        // pd² ∈ [0, (1-1/n)²]; joint/detector purities only bounded above by 1
        let nf = n as f64;
        let pd_ok = c
            .pd2
            .map(|p| (-tol..=(1.0 - 1.0 / nf) * (1.0 - 1.0 / nf) + tol).contains(&p))
            .unwrap_or(true);
        let ab_ok = c
            .purity_ab
            .map(|p| (0.0..=1.0 + tol).contains(&p))
            .unwrap_or(true);
        let d_ok = c
            .purity_d
            .map(|p| (1.0 / nf - tol..=1.0 + tol).contains(&p))
            .unwrap_or(true);
        simple && pd_ok && ab_ok && d_ok
    }
}

/// Precomputed per-evaluation quantities shared by the relation formulas.
struct EvalContext {
    n: usize,
    out: InterferometerOutput,
    ps: f64,
    pd2: f64,
    v2: f64,
    x2: f64,
}

impl EvalContext {
    fn new(input: &InputState, det: &DetectorConfig, mode: PdMode) -> Result<Self> {
        let out = apply_detectors(input.density(), det)?;
        let n = input.dim_a();
        let ensemble = Ensemble::new(out.q.clone(), det.clone())?;
        let ps = match mode {
            PdMode::UpperBound => ps_upper_bound(&ensemble),
            PdMode::Optimized => ps_optimize(&ensemble, DEFAULT_MAX_ITER, DEFAULT_TOL)?.value,
        };
        let pd = ps - 1.0 / n as f64;
        let v2 = visibility_v_sq(&out.rho_a_tilde, n);
        let x = visibility_x(&out.rho_a_tilde, n);
        Ok(EvalContext {
            n,
            out,
            ps,
            pd2: pd * pd,
            v2,
            x2: x * x,
        })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn base_components(&self) -> Components {
        Components {
            pd2: Some(self.pd2),
            v2: Some(self.v2),
            x2: Some(self.x2),
            purity_a: Some(self.out.purity_a),
            purity_d: Some(self.out.purity_d),
            purity_ab: Some(self.out.purity_ab),
            ps: Some(self.ps),
            ..Components::default()
        }
    }
}

fn entanglement_sq(input: &InputState) -> Result<f64> {
    if let Some(psi) = input.as_pure() {
        return entanglement_pure_formula(psi, psi.dim_a());
    }
    let rho = input.density();
    if rho.dim_a() == 2 && rho.dim_b() == 2 {
        let c = concurrence_wootters(rho)?;
        let e = entanglement_e(c, 2);
        return Ok(e * e);
    }
    Err(Error::EntanglementUnavailable {
        dim_a: rho.dim_a(),
        dim_b: rho.dim_b(),
    })
}

/// Duality between path distinguishability and visibility.
pub fn eval_th1(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<ComplementarityReport> {
    eval_th1_with(input, det, mode, &Tolerances::DEFAULT)
}

pub fn eval_th1_with(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    let ctx = EvalContext::new(input, det, mode)?;
    let nf = ctx.nf();
    let lhs = ctx.pd2 + ctx.v2;
    let rhs = (1.0 - 1.0 / nf) * (1.0 - 1.0 / nf)
        - 2.0 * (nf - 1.0) / (nf * nf) * (ctx.out.purity_d - ctx.out.purity_a);
    Ok(ComplementarityReport::build(
        RelationId::Th1Duality,
        ctx.n,
        lhs,
        rhs,
        false,
        ctx.base_components(),
        tol.relation,
    ))
}

/// No-memory duality; requires a pure input with trivial memory (dim_b = 1).
pub fn eval_eq13(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<ComplementarityReport> {
    eval_eq13_with(input, det, mode, &Tolerances::DEFAULT)
}

pub fn eval_eq13_with(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    if input.dim_b() != 1 {
        return Err(Error::Precondition(
            "no-memory duality requires memory dimension 1".into(),
        ));
    }
    if input.as_pure().is_none() && (input.density().purity() - 1.0).abs() > tol.relation {
        return Err(Error::Precondition(
            "no-memory duality requires a pure input state".into(),
        ));
    }
    let ctx = EvalContext::new(input, det, mode)?;
    let nf = ctx.nf();
    let lhs = ctx.pd2 + ctx.v2;
    let rhs = (1.0 - 1.0 / nf) * (1.0 - 1.0 / nf);
    Ok(ComplementarityReport::build(
        RelationId::Eq13NoMemory,
        ctx.n,
        lhs,
        rhs,
        false,
        ctx.base_components(),
        tol.relation,
    ))
}

/// Two-path identity form of the duality; P_s via the Helstrom value.
pub fn eval_cor1(input: &InputState, det: &DetectorConfig) -> Result<ComplementarityReport> {
    eval_cor1_with(input, det, &Tolerances::DEFAULT)
}

pub fn eval_cor1_with(
    input: &InputState,
    det: &DetectorConfig,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    if input.dim_a() != 2 {
        return Err(Error::Precondition("identity form requires n = 2".into()));
    }
    let out = apply_detectors(input.density(), det)?;
    let ensemble = Ensemble::new(out.q.clone(), det.clone())?;
    let ps = ps_helstrom_n2(&ensemble)?;
    let pd = ps - 0.5;
    let v2 = visibility_v_sq(&out.rho_a_tilde, 2);
    let x = visibility_x(&out.rho_a_tilde, 2);
    let lhs = pd * pd + v2;
    let rhs = 0.25 - 0.5 * (out.purity_d - out.purity_a);
    let components = Components {
        pd2: Some(pd * pd),
        v2: Some(v2),
        x2: Some(x * x),
        purity_a: Some(out.purity_a),
        purity_d: Some(out.purity_d),
        purity_ab: Some(out.purity_ab),
        ps: Some(ps),
        ..Components::default()
    };
    Ok(ComplementarityReport::build(
        RelationId::Cor1N2Identity,
        2,
        lhs,
        rhs,
        true,
        components,
        tol.relation,
    ))
}

/// Mixedness triality.
pub fn eval_th2(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<ComplementarityReport> {
    eval_th2_with(input, det, mode, &Tolerances::DEFAULT)
}

pub fn eval_th2_with(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    let ctx = EvalContext::new(input, det, mode)?;
    let nf = ctx.nf();
    let m_a = mixedness_from_purity(ctx.out.purity_a, ctx.n);
    let m_d = mixedness_from_purity(ctx.out.purity_d, ctx.n);
    let lhs = ctx.pd2 + ctx.v2 + m_a;
    let rhs = (1.0 - 1.0 / nf) * (1.0 - 1.0 / nf) + m_d;
    let components = Components {
        m_a: Some(m_a),
        ..ctx.base_components()
    };
    Ok(ComplementarityReport::build(
        RelationId::Th2Mixedness,
        ctx.n,
        lhs,
        rhs,
        false,
        components,
        tol.relation,
    ))
}

/// Two-path complete triality at |⟨d₁|d₂⟩|² = ½.
pub fn eval_cor2(input: &InputState, det: &DetectorConfig) -> Result<ComplementarityReport> {
    eval_cor2_with(input, det, &Tolerances::DEFAULT)
}

pub fn eval_cor2_with(
    input: &InputState,
    det: &DetectorConfig,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    if input.dim_a() != 2 {
        return Err(Error::Precondition(
            "complete triality requires n = 2".into(),
        ));
    }
    if (det.overlap_sq(0, 1) - 0.5).abs() > 1e-12 {
        return Err(Error::Precondition(
            "complete triality requires |⟨d₁|d₂⟩|² = ½".into(),
        ));
    }
    let out = apply_detectors(input.density(), det)?;
    let ensemble = Ensemble::new(out.q.clone(), det.clone())?;
    let ps = ps_helstrom_n2(&ensemble)?;
    let pd = ps - 0.5;
    let v2 = visibility_v_sq(&out.rho_a_tilde, 2);
    let m_a = mixedness_from_purity(out.purity_a, 2);
    let lhs = pd * pd + 0.5 * v2 + 0.5 * m_a;
    let rhs = 0.25;
    let components = Components {
        pd2: Some(pd * pd),
        v2: Some(v2),
        m_a: Some(m_a),
        purity_a: Some(out.purity_a),
        purity_d: Some(out.purity_d),
        purity_ab: Some(out.purity_ab),
        ps: Some(ps),
        ..Components::default()
    };
    Ok(ComplementarityReport::build(
        RelationId::Cor2N2Identity,
        2,
        lhs,
        rhs,
        true,
        components,
        tol.relation,
    ))
}

/// Entanglement triality. E is computed on the pre-interaction state; the
/// joint purity on the post-interaction one, exactly as the relation states.
pub fn eval_th3(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<ComplementarityReport> {
    eval_th3_with(input, det, mode, &Tolerances::DEFAULT)
}

pub fn eval_th3_with(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    let e2 = entanglement_sq(input)?;
    let ctx = EvalContext::new(input, det, mode)?;
    let nf = ctx.nf();
    let lhs = ctx.pd2 + ctx.v2 + e2;
    let rhs = (nf * nf - 1.0) / (nf * nf) - 2.0 * (nf - 1.0) / (nf * nf) * ctx.out.purity_ab;
    let components = Components {
        e2: Some(e2),
        ..ctx.base_components()
    };
    Ok(ComplementarityReport::build(
        RelationId::Th3Entanglement,
        ctx.n,
        lhs,
        rhs,
        false,
        components,
        tol.relation,
    ))
}

/// Which limiting duality to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitBranch {
    /// All branch overlaps have unit modulus: memory separates, wave side.
    PdV,
    /// All branch overlaps vanish: maximal entanglement, particle side.
    PdE,
}

/// Limiting dualities for pure inputs whose branch vectors are either all
/// parallel (PdV) or all orthonormal (PdE). Complete (identities) at n = 2.
pub fn eval_limits(
    psi: &PureBipartite,
    det: &DetectorConfig,
    branch: LimitBranch,
) -> Result<ComplementarityReport> {
    eval_limits_with(psi, det, branch, PdMode::UpperBound, &Tolerances::DEFAULT)
}

pub fn eval_limits_with(
    psi: &PureBipartite,
    det: &DetectorConfig,
    branch: LimitBranch,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<ComplementarityReport> {
    let n = psi.dim_a();
    for i in 0..n {
        for k in 0..i {
            if psi.branch_probability(i) < 1e-15 || psi.branch_probability(k) < 1e-15 {
                continue;
            }
            let overlap_sq = psi.branch_overlap(i, k).norm_sqr();
            let target = match branch {
                LimitBranch::PdV => 1.0,
                LimitBranch::PdE => 0.0,
            };
            if (overlap_sq - target).abs() > tol.relation {
                return Err(Error::Precondition(format!(
                    "branch overlap |⟨u_{k}|u_{i}⟩|² = {overlap_sq}, expected {target}"
                )));
            }
        }
    }
    let input = InputState::pure(psi.clone());
    let ctx = EvalContext::new(&input, det, mode)?;
    let nf = ctx.nf();
    let (relation, lhs, rhs, components) = match branch {
        LimitBranch::PdV => {
            let lhs = ctx.pd2 + ctx.v2;
            let rhs = (1.0 - 1.0 / nf) * (1.0 - 1.0 / nf);
            (RelationId::LimitPdV, lhs, rhs, ctx.base_components())
        }
        LimitBranch::PdE => {
            let e2 = entanglement_pure_formula(psi, n)?;
            let lhs = ctx.pd2 + e2;
            let rhs =
                (nf * nf - 1.0) / (nf * nf) - 2.0 * (nf - 1.0) / (nf * nf) * ctx.out.purity_ab;
            let components = Components {
                e2: Some(e2),
                ..ctx.base_components()
            };
            (RelationId::LimitPdE, lhs, rhs, components)
        }
    };
    Ok(ComplementarityReport::build(
        relation,
        n,
        lhs,
        rhs,
        n == 2,
        components,
        tol.relation,
    ))
}

/// The two prior-work dualities, evaluated side by side. Both use the
/// l1-coherence visibility X; the memory-assisted variant takes its purities
/// post-interaction.
pub fn eval_priors(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<(ComplementarityReport, ComplementarityReport)> {
    eval_priors_with(input, det, mode, &Tolerances::DEFAULT)
}

pub fn eval_priors_with(
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
    tol: &Tolerances,
) -> Result<(ComplementarityReport, ComplementarityReport)> {
    let ctx = EvalContext::new(input, det, mode)?;
    let nf = ctx.nf();
    let lhs = ctx.pd2 + ctx.x2;
    let base = (1.0 - 1.0 / nf) * (1.0 - 1.0 / nf);
    let eq1 = ComplementarityReport::build(
        RelationId::Eq1Prior,
        ctx.n,
        lhs,
        base,
        false,
        ctx.base_components(),
        tol.relation,
    );
    let rhs2 = base + 2.0 * (nf - 1.0) / (nf * nf) * (ctx.out.purity_a - ctx.out.purity_ab);
    let eq2 = ComplementarityReport::build(
        RelationId::Eq2PriorMemory,
        ctx.n,
        lhs,
        rhs2,
        false,
        ctx.base_components(),
        tol.relation,
    );
    Ok((eq1, eq2))
}

/// Dispatch by relation id. Limit relations require a pure input.
pub fn eval_relation(
    relation: RelationId,
    input: &InputState,
    det: &DetectorConfig,
    mode: PdMode,
) -> Result<ComplementarityReport> {
    match relation {
        RelationId::Th1Duality => eval_th1(input, det, mode),
        RelationId::Eq13NoMemory => eval_eq13(input, det, mode),
        RelationId::Cor1N2Identity => eval_cor1(input, det),
        RelationId::Th2Mixedness => eval_th2(input, det, mode),
        RelationId::Cor2N2Identity => eval_cor2(input, det),
        RelationId::Th3Entanglement => eval_th3(input, det, mode),
        RelationId::Eq1Prior => Ok(eval_priors(input, det, mode)?.0),
        RelationId::Eq2PriorMemory => Ok(eval_priors(input, det, mode)?.1),
        RelationId::LimitPdV | RelationId::LimitPdE => {
            let psi = input.as_pure().ok_or_else(|| {
                Error::Precondition("limit relations need a pure input state".into())
            })?;
            let branch = if relation == RelationId::LimitPdV {
                LimitBranch::PdV
            } else {
                LimitBranch::PdE
            };
            eval_limits_with(psi, det, branch, mode, &Tolerances::DEFAULT)
        }
    }
}
