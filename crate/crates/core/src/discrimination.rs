//! Minimum-error discrimination of the detector states: the closed-form
//! upper bound on the optimal success probability, the exact two-state
//! (Helstrom) value, and two independent numerical oracles — the square-root
//! ("pretty good") measurement and a fixed-point POVM optimizer.

use crate::error::{Error, Result};
use crate::interferometer::DetectorConfig;
use crate::qmat::{pseudo_inverse_sqrt, trace_norm, CMatrix, HermitianMatrix, C64};
use crate::tolerances::Tolerances;

pub const DEFAULT_MAX_ITER: usize = 5000;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Prior-weighted ensemble of pure detector states, characterized by overlaps.
#[derive(Clone, Debug)]
pub struct Ensemble {
    priors: Vec<f64>,
    det: DetectorConfig,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, det: DetectorConfig) -> Result<Self> {
        if priors.len() != det.n() {
            return Err(Error::DimensionMismatch {
                expected: det.n(),
                got: priors.len(),
            });
        }
        let mut clean = Vec::with_capacity(priors.len());
        for &q in &priors {
            if !q.is_finite() || q < -1e-12 {
                return Err(Error::parameter("priors", format!("invalid prior {q}")));
            }
            clean.push(q.max(0.0));
        }
        let total: f64 = clean.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::parameter(
                "priors",
                format!("priors sum to {total}, expected 1"),
            ));
        }
        Ok(Ensemble { priors: clean, det })
    }

    /// Uniform priors over the detector states.
    pub fn uniform(det: DetectorConfig) -> Self {
        let n = det.n();
        Ensemble {
            priors: vec![1.0 / n as f64; n],
            det,
        }
    }

    pub fn n(&self) -> usize {
        self.priors.len()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn detectors(&self) -> &DetectorConfig {
        &self.det
    }
}

/// ||T_ik||₁ = 2√(((q_i+q_k)/2)² − q_i q_k |⟨d_i|d_k⟩|²) for
/// T_ik = q_i|d_i⟩⟨d_i| − q_k|d_k⟩⟨d_k|.
fn pair_trace_norm(qi: f64, qk: f64, overlap_sq: f64) -> f64 {
    let s = 0.5 * (qi + qk);
    2.0 * (s * s - qi * qk * overlap_sq).max(0.0).sqrt()
}

/// Closed-form upper bound on the optimal success probability:
/// P_s ≤ 1/n + (1/2n) Σ_{i,k} ||T_ik||₁ (the i=k terms vanish, so each
/// unordered pair is counted twice).
pub fn ps_upper_bound(e: &Ensemble) -> f64 {
    let n = e.n();
    let q = e.priors();
    let mut sum = 0.0;
    for i in 0..n {
        for k in 0..n {
            if i != k {
                sum += pair_trace_norm(q[i], q[k], e.det.overlap_sq(i, k));
            }
        }
    }
    1.0 / n as f64 + sum / (2.0 * n as f64)
}

/// Exact two-state optimum ½ + ½||q₁ρ₁ − q₂ρ₂||₁, evaluated through the
/// eigenvalue route on materialized vectors (an algebraically independent
/// path from [`ps_upper_bound`], which it must equal at n = 2).
pub fn ps_helstrom_n2(e: &Ensemble) -> Result<f64> {
    if e.n() != 2 {
        return Err(Error::parameter(
            "ensemble",
            "Helstrom value requires n = 2",
        ));
    }
    let vs = e.det.vectors()?;
    let dim = vs[0].len();
    let q = e.priors();
    let mut m = CMatrix::zeros(dim, dim);
    m = m.add(&CMatrix::outer(&vs[0], &vs[0]).scale(C64::new(q[0], 0.0)));
    m = m.sub(&CMatrix::outer(&vs[1], &vs[1]).scale(C64::new(q[1], 0.0)));
    let h = HermitianMatrix::trusted(m);
    Ok(0.5 + 0.5 * trace_norm(&h))
}

/// Success probability of the square-root measurement
/// Π_i = ρ̄^{-1/2} q_i |d_i⟩⟨d_i| ρ̄^{-1/2}, ρ̄ = Σ q_i |d_i⟩⟨d_i|,
/// with the pseudo-inverse taken on the support.
pub fn ps_pgm(e: &Ensemble) -> Result<f64> {
    let vs = e.det.vectors()?;
    let q = e.priors();
    let dim = vs[0].len();
    let mut avg = CMatrix::zeros(dim, dim);
    for (qi, v) in q.iter().zip(&vs) {
        avg = avg.add(&CMatrix::outer(v, v).scale(C64::new(*qi, 0.0)));
    }
    let w = pseudo_inverse_sqrt(&HermitianMatrix::trusted(avg), Tolerances::DEFAULT.rank_cut);
    let mut p = 0.0;
    for (qi, v) in q.iter().zip(&vs) {
        let wv = w.mul_vec(v);
        let amp: C64 = v.iter().zip(&wv).map(|(a, b)| a.conj() * b).sum();
        p += qi * qi * amp.re * amp.re;
    }
    Ok(p)
}

/// Feasible POVM together with the success value it achieves.
#[derive(Clone, Debug)]
pub struct OptimizedPovm {
    /// One element per ensemble member, in the detector-vector space.
    pub elements: Vec<CMatrix>,
    /// Success probability achieved by `elements`.
    pub value: f64,
    /// Fixed-point iterations consumed.
    pub iterations: usize,
    /// Whether successive values converged below tolerance within the
    /// iteration budget (a false value flags the result, it is still feasible).
    pub converged: bool,
}

impl OptimizedPovm {
    /// Checks PSD of each element (within −tol.povm_psd) and completeness
    /// (ΣΠ_i = I within tol.povm_complete, entrywise).
    pub fn is_feasible(&self, tol: &Tolerances) -> bool {
        let dim = match self.elements.first() {
            Some(m) => m.rows(),
            None => return false,
        };
        let mut sum = CMatrix::zeros(dim, dim);
        for el in &self.elements {
            let h = HermitianMatrix::trusted(el.clone());
            if let Some(&min) = crate::qmat::eigvals_hermitian(&h).last() {
                if min < -tol.povm_psd {
                    return false;
                }
            }
            sum = sum.add(el);
        }
        sum.max_abs_diff(&CMatrix::identity(dim)) <= tol.povm_complete
    }
}

/// Fixed-point iteration on the minimum-error optimality conditions,
/// seeded from the pretty good measurement:
///   G = Σ_j R_j Π_j R_j,   Π_i ← G^{-1/2} R_i Π_i R_i G^{-1/2},
/// with R_i = q_i |d_i⟩⟨d_i|. The success value is non-decreasing across
/// accepted iterations; a non-monotone proposal is blended back toward the
/// previous POVM with step halving.
pub fn ps_optimize(e: &Ensemble, max_iter: usize, tol: f64) -> Result<OptimizedPovm> {
    let vs = e.det.vectors()?;
    let q = e.priors();
    let n = e.n();
    let dim = vs[0].len();

    // Zero-prior states never contribute to the objective; drop them from the
    // iteration and merge their (empty) element into the largest-prior slot.
    let active: Vec<usize> = (0..n).filter(|&i| q[i] > 0.0).collect();
    if active.is_empty() {
        return Err(Error::parameter("priors", "all priors are zero"));
    }

    let value_of = |povm: &[CMatrix]| -> f64 {
        let mut p = 0.0;
        for i in 0..n {
            let pv = povm[i].mul_vec(&vs[i]);
            let s: C64 = vs[i].iter().zip(&pv).map(|(a, b)| a.conj() * b).sum();
            p += q[i] * s.re;
        }
        p
    };

    // PGM seed
    let mut avg = CMatrix::zeros(dim, dim);
    for &i in &active {
        avg = avg.add(&CMatrix::outer(&vs[i], &vs[i]).scale(C64::new(q[i], 0.0)));
    }
    let w0 = pseudo_inverse_sqrt(&HermitianMatrix::trusted(avg), Tolerances::DEFAULT.rank_cut);
    let mut povm: Vec<CMatrix> = (0..n)
        .map(|i| {
            if q[i] > 0.0 {
                let wv = w0.mul_vec(&vs[i]);
                CMatrix::outer(&wv, &wv).scale(C64::new(q[i], 0.0))
            } else {
                CMatrix::zeros(dim, dim)
            }
        })
        .collect();
    let mut value = value_of(&povm);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        // G = Σ R_i Π_i R_i is rank-one per active state for pure ensembles.
        let mut g = CMatrix::zeros(dim, dim);
        let mut weights = vec![0.0; n];
        for &i in &active {
            let pv = povm[i].mul_vec(&vs[i]);
            let s: C64 = vs[i].iter().zip(&pv).map(|(a, b)| a.conj() * b).sum();
            weights[i] = (q[i] * q[i] * s.re).max(0.0);
            g = g.add(&CMatrix::outer(&vs[i], &vs[i]).scale(C64::new(weights[i], 0.0)));
        }
        let w = pseudo_inverse_sqrt(&HermitianMatrix::trusted(g), 1e-14);
        let proposal: Vec<CMatrix> = (0..n)
            .map(|i| {
                if weights[i] > 0.0 {
                    let wv = w.mul_vec(&vs[i]);
                    CMatrix::outer(&wv, &wv).scale(C64::new(weights[i], 0.0))
                } else {
                    CMatrix::zeros(dim, dim)
                }
            })
            .collect();
        let proposal_value = value_of(&proposal);

        let (next, next_value) = if proposal_value + 1e-15 >= value {
            (proposal, proposal_value)
        } else {
            // damp the step by halving until the value stops decreasing
            let mut alpha = 0.5;
            let mut chosen = None;
            while alpha > 1e-7 {
                let blended: Vec<CMatrix> = povm
                    .iter()
                    .zip(&proposal)
                    .map(|(old, new)| {
                        old.scale(C64::new(1.0 - alpha, 0.0))
                            .add(&new.scale(C64::new(alpha, 0.0)))
                    })
                    .collect();
                let bv = value_of(&blended);
                if bv + 1e-15 >= value {
                    chosen = Some((blended, bv));
                    break;
                }
                alpha *= 0.5;
            }
            match chosen {
                Some(res) => res,
                None => {
                    // no productive step remains
                    converged = true;
                    break;
                }
            }
        };

        let delta = next_value - value;
        povm = next;
        value = next_value;
        if delta.abs() < tol {
            converged = true;
            break;
        }
    }

    // Complete the POVM: push any support deficit onto the largest-prior
    // element so the returned measurement resolves the identity.
    let mut sum = CMatrix::zeros(dim, dim);
    for el in &povm {
        sum = sum.add(el);
    }
    let deficit = CMatrix::identity(dim).sub(&sum);
    if deficit.frobenius_norm() > 1e-13 {
        let target = (0..n)
            .max_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap())
            .unwrap_or(0);
        povm[target] = povm[target].add(&deficit);
        value = value_of(&povm);
    }

    Ok(OptimizedPovm {
        elements: povm,
        value,
        iterations,
        converged,
    })
}

/// All four discrimination quantities for one ensemble.
#[derive(Clone, Debug)]
pub struct DiscriminationResult {
    /// Closed-form upper bound.
    pub ps_upper: f64,
    /// Exact value when available (n = 2 only).
    pub ps_exact: Option<f64>,
    /// Pretty good measurement value (lower bound on the optimum).
    pub ps_pgm: f64,
    /// Value reached by the iterated POVM.
    pub ps_opt: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl DiscriminationResult {
    /// ps_pgm ≤ ps_opt ≤ ps_exact (when present) ≤ ps_upper, within slack,
    /// and everything at most 1.
    pub fn sandwich_holds(&self, slack: f64) -> bool {
        let exact_ok = match self.ps_exact {
            Some(ex) => self.ps_opt <= ex + slack && ex <= self.ps_upper + slack,
            None => true,
        };
        self.ps_pgm <= self.ps_opt + slack
            && self.ps_opt <= self.ps_upper + slack
            && exact_ok
            && self.ps_upper <= 1.0 + 1e-12
            && self.ps_pgm >= 0.0
    }
}

/// Runs bound, Helstrom (at n = 2), PGM and optimizer on one ensemble.
pub fn discriminate(e: &Ensemble) -> Result<DiscriminationResult> {
    let ps_upper = ps_upper_bound(e);
    let ps_exact = if e.n() == 2 {
        Some(ps_helstrom_n2(e)?)
    } else {
        None
    };
    let pgm = ps_pgm(e)?;
    let opt = ps_optimize(e, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
    Ok(DiscriminationResult {
        ps_upper,
        ps_exact,
        ps_pgm: pgm,
        ps_opt: opt.value,
        iterations: opt.iterations,
        converged: opt.converged,
    })
}
