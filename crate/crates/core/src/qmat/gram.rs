use super::eig::eig_hermitian;
use super::matrix::{CMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Factorizes a PSD unit-diagonal Gram matrix G_ik = ⟨v_k|v_i⟩ into unit
/// vectors living in a space of dimension equal to the numerical rank.
///
/// The factorization is rank-revealing (eigendecomposition, not Cholesky), so
/// rank-deficient Grams such as identical-vector configurations are accepted.
pub fn gram_to_vectors(g: &CMatrix, tol: &Tolerances) -> Result<Vec<Vec<C64>>> {
    let n = g.rows();
    let h = HermitianMatrix::new_with(g.clone(), tol)?;
    for i in 0..n {
        let d = h.as_matrix()[(i, i)].re;
        if (d - 1.0).abs() > tol.gram_diag {
            return Err(Error::GramDiagonal { index: i, got: d });
        }
    }
    let eig = eig_hermitian(&h);
    if let Some(&min) = eig.values.last() {
        if min < -tol.gram_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&k| eig.values[k] > tol.rank_cut).collect();
    let rank = kept.len().max(1);
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![C64::new(0.0, 0.0); rank];
        for (slot, &k) in kept.iter().enumerate() {
            v[slot] = eig.vectors[(i, k)].scale(eig.values[k].sqrt());
        }
        vectors.push(v);
    }
    Ok(vectors)
}

/// Gram matrix ⟨v_k|v_i⟩ of a list of vectors (all of equal dimension).
pub fn gram_of_vectors(vectors: &[Vec<C64>]) -> CMatrix {
    let n = vectors.len();
    CMatrix::from_fn(n, n, |i, k| {
        vectors[k]
            .iter()
            .zip(&vectors[i])
            .map(|(vk, vi)| vk.conj() * vi)
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn identity_gram_gives_orthonormal_basis() {
        let vs = gram_to_vectors(&CMatrix::identity(3), &TOL).unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs[0].len(), 3);
        let g = gram_of_vectors(&vs);
        assert!(g.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn two_vector_gram_reproduces_overlap() {
        let x = 0.37;
        let g = CMatrix::from_real(2, &[1.0, x, x, 1.0]);
        let vs = gram_to_vectors(&g, &TOL).unwrap();
        let back = gram_of_vectors(&vs);
        assert!(back.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn three_detector_gram_with_one_third_overlap() {
        let mut g = CMatrix::identity(3);
        g[(0, 1)] = C64::new(1.0 / 3.0, 0.0);
        g[(1, 0)] = C64::new(1.0 / 3.0, 0.0);
        let vs = gram_to_vectors(&g, &TOL).unwrap();
        let back = gram_of_vectors(&vs);
        assert!(back.max_abs_diff(&g) < 1e-12);
        for v in &vs {
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_all_ones_gram_accepted() {
        let g = CMatrix::from_fn(3, 3, |_, _| C64::new(1.0, 0.0));
        let vs = gram_to_vectors(&g, &TOL).unwrap();
        // identical vectors in a 1-dimensional space
        assert_eq!(vs[0].len(), 1);
        let back = gram_of_vectors(&vs);
        assert!(back.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn non_psd_gram_rejected() {
        let g = CMatrix::from_real(2, &[1.0, 1.2, 1.2, 1.0]);
        assert!(matches!(
            gram_to_vectors(&g, &TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn non_unit_diagonal_rejected() {
        let g = CMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.9]);
        assert!(matches!(
            gram_to_vectors(&g, &TOL),
            Err(Error::GramDiagonal { .. })
        ));
    }

    #[test]
    fn complex_gram_round_trip() {
        let z = C64::new(0.2, -0.5);
        let mut g = CMatrix::identity(2);
        g[(0, 1)] = z;
        g[(1, 0)] = z.conj();
        let vs = gram_to_vectors(&g, &TOL).unwrap();
        let back = gram_of_vectors(&vs);
        assert!(back.max_abs_diff(&g) < 1e-12);
    }
}
