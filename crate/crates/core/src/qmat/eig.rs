use super::matrix::{CMatrix, HermitianMatrix, C64};

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order, eigenvectors as the corresponding columns of a unitary matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi diagonalization. Small dense matrices only (desk scale is
/// dimension <= 64); accuracy is set by the off-diagonal norm criterion below,
/// comfortably tighter than the 1e-10 residual contract.
pub fn eig_hermitian(h: &HermitianMatrix) -> Eigen {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = CMatrix::identity(n);
    if n > 1 {
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
        let stop = scale * (n as f64) * 1e-16;
        for _sweep in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= stop {
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate_to_zero(&mut a, &mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Eigen { values, vectors }
}

/// Eigenvalues only (same routine; vector accumulation is cheap at this scale).
pub fn eigvals_hermitian(h: &HermitianMatrix) -> Vec<f64> {
    eig_hermitian(h).values
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += 2.0 * a[(p, q)].norm_sqr();
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating the (p, q) entry.
///
/// With a_pq = r e^{iθ}, the unitary acts on the (p, q) plane as
///   U_pp = c, U_pq = -s e^{iθ}, U_qp = s e^{-iθ}, U_qq = c,
/// and A ← U†AU, V ← VU.
fn rotate_to_zero(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs() + r) || r < f64::MIN_POSITIVE {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    // smaller-magnitude root of t² - 2τt - 1 = 0
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();

    // A ← A·U (columns p, q)
    for j in 0..n {
        let ajp = a[(j, p)];
        let ajq = a[(j, q)];
        a[(j, p)] = ajp.scale(c) + ajq * phase.conj().scale(s);
        a[(j, q)] = ajq.scale(c) - ajp * phase.scale(s);
    }
    // A ← U†·A (rows p, q)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj.scale(c) + aqj * phase.scale(s);
        a[(q, j)] = aqj.scale(c) - apj * phase.conj().scale(s);
    }
    // V ← V·U
    for j in 0..n {
        let vjp = v[(j, p)];
        let vjq = v[(j, q)];
        v[(j, p)] = vjp.scale(c) + vjq * phase.conj().scale(s);
        v[(j, q)] = vjq.scale(c) - vjp * phase.scale(s);
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Trace norm ||M||₁ = Σ|λ_i| of a Hermitian matrix.
pub fn trace_norm(h: &HermitianMatrix) -> f64 {
    eigvals_hermitian(h).iter().map(|l| l.abs()).sum()
}

/// Principal square root of a Hermitian PSD matrix (tiny negative eigenvalues
/// are clipped to zero).
pub fn matrix_sqrt(h: &HermitianMatrix) -> CMatrix {
    let eig = eig_hermitian(h);
    let n = h.dim();
    let u = &eig.vectors;
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    CMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| u[(i, k)] * u[(j, k)].conj() * C64::new(roots[k], 0.0))
            .sum()
    })
}

/// Pseudo-inverse square root on the support: eigenvalues below
/// `cut` (absolute) map to zero, the rest to 1/√λ.
pub fn pseudo_inverse_sqrt(h: &HermitianMatrix, cut: f64) -> CMatrix {
    let eig = eig_hermitian(h);
    let n = h.dim();
    let u = &eig.vectors;
    let inv_roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l > cut { 1.0 / l.sqrt() } else { 0.0 })
        .collect();
    CMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| u[(i, k)] * u[(j, k)].conj() * C64::new(inv_roots[k], 0.0))
            .sum()
    })
}
