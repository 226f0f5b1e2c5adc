/// Central numerical tolerance configuration.
///
/// Every validation and comparison threshold used by the library lives here,
/// so that the whole pipeline can be audited (or tightened) in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity defect accepted at construction (entrywise, absolute).
    pub herm: f64,
    /// Deviation of the trace from 1 accepted for density matrices.
    pub trace_one: f64,
    /// Magnitude of negative eigenvalues accepted for density matrices.
    pub state_psd: f64,
    /// Deviation of the squared norm from 1 accepted for pure-state amplitudes.
    pub pure_norm: f64,
    /// Deviation of Gram diagonal entries from 1.
    pub gram_diag: f64,
    /// Magnitude of negative Gram eigenvalues accepted as zero.
    pub gram_psd: f64,
    /// Eigenvalues below this are treated as rank-deficient directions
    /// when factorizing a Gram matrix or inverting an ensemble average.
    pub rank_cut: f64,
    /// Identity residual / one-sided slack for complementarity relations.
    pub relation: f64,
    /// Magnitude of negative POVM-element eigenvalues accepted as feasible.
    pub povm_psd: f64,
    /// Entrywise deviation from identity accepted for POVM completeness.
    pub povm_complete: f64,
    /// Agreement required between independent computation routes.
    pub cross_check: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        herm: 1e-12,
        trace_one: 1e-10,
        state_psd: 1e-10,
        pure_norm: 1e-12,
        gram_diag: 1e-9,
        gram_psd: 1e-12,
        rank_cut: 1e-11,
        relation: 1e-9,
        povm_psd: 1e-9,
        povm_complete: 1e-8,
        cross_check: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}
