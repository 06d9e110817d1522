//! Transforms of a Hermitian matrix `P`:
//!
//! * pseudo-similarity `H†·P·H` for an arbitrary `N x K` matrix `H`,
//! * unitary compression `Qᴴ·P·Q` for column-unitary `Q`,
//! * the rank-deficient (possibly dimension-inflating) construction
//!   `H̃ = H·Vᴴ` and its transform computed two ways,
//! * the oblique similarity-plus-selection `Îᵀ·X⁻¹·P·X·Î`, which carries no
//!   interlacing guarantee.

use serde::{Deserialize, Serialize};

use crate::eigen::eigvals_hermitian;
use crate::error::{Error, Result};
use crate::genmat::{check_selection, selection_matrix};
use crate::linalg::{inverse, is_hermitian, numerical_rank, pseudo_inverse, ComplexMatrix};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    PseudoSimilarity,
    UnitaryCompression,
    Inflated,
    Oblique,
}

#[derive(Debug, Clone)]
pub struct TransformResult {
    pub transformed: ComplexMatrix,
    /// Detected rank of the transforming matrix (selection size for the
    /// oblique transform).
    pub input_rank: usize,
    /// Whether `transformed` passed the hermiticity check.
    pub hermitian: bool,
    pub construction: Construction,
}

fn hermitian_flag(m: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    is_hermitian(m, tol.hermiticity * m.max_abs())
}

fn require_hermitian(p: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if !p.is_square() {
        return Err(Error::Dimension(format!(
            "P must be square, got {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    if !hermitian_flag(p, tol)? {
        return Err(Error::Contract("P is not Hermitian".into()));
    }
    Ok(())
}

fn require_orthonormal(q: &ComplexMatrix, tol: &Tolerances, name: &str) -> Result<()> {
    let defect = q.orthonormality_defect();
    if defect > tol.orthonormality {
        return Err(Error::Contract(format!(
            "{name} columns are not orthonormal (defect {defect:e})"
        )));
    }
    Ok(())
}

/// `H†·P·H` for Hermitian `P` (`N x N`) and any `N x K` matrix `H`.
///
/// `H` may have any rank, including `K > N` and rank 0 (which gives the
/// `K x K` zero matrix).
pub fn pseudo_similarity(p: &ComplexMatrix, h: &ComplexMatrix, tol: &Tolerances) -> Result<TransformResult> {
    require_hermitian(p, tol)?;
    if h.rows() != p.rows() {
        return Err(Error::Dimension(format!(
            "H has {} rows but P is {}x{}",
            h.rows(),
            p.rows(),
            p.cols()
        )));
    }
    if h.cols() == 0 {
        return Err(Error::Dimension("H has no columns".into()));
    }
    let h_pinv = pseudo_inverse(h, tol.rank)?;
    let transformed = &(&h_pinv * p) * h;
    Ok(TransformResult {
        hermitian: hermitian_flag(&transformed, tol)?,
        input_rank: numerical_rank(h, tol.rank)?,
        transformed,
        construction: Construction::PseudoSimilarity,
    })
}

/// `Qᴴ·P·Q` for column-unitary `Q`.
pub fn unitary_compression(p: &ComplexMatrix, q: &ComplexMatrix, tol: &Tolerances) -> Result<TransformResult> {
    require_hermitian(p, tol)?;
    if q.rows() != p.rows() {
        return Err(Error::Dimension(format!(
            "Q has {} rows but P is {}x{}",
            q.rows(),
            p.rows(),
            p.cols()
        )));
    }
    require_orthonormal(q, tol, "Q")?;
    let transformed = &(&q.adjoint() * p) * q;
    Ok(TransformResult {
        hermitian: hermitian_flag(&transformed, tol)?,
        input_rank: q.cols(),
        transformed,
        construction: Construction::UnitaryCompression,
    })
}

/// `H̃ = H·Vᴴ` for full-column-rank `H` (`N x L`) and column-unitary `V`
/// (`K x L`, `K >= L`). The result is `N x K` of rank `L`.
pub fn build_rank_deficient(h: &ComplexMatrix, v: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    if v.cols() != h.cols() {
        return Err(Error::Dimension(format!(
            "H has {} columns but V has {}",
            h.cols(),
            v.cols()
        )));
    }
    if v.rows() < v.cols() {
        return Err(Error::Dimension(format!(
            "V must be tall (K >= L), got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    require_orthonormal(v, tol, "V")?;
    let rank = numerical_rank(h, tol.rank)?;
    if rank != h.cols() {
        return Err(Error::Contract(format!(
            "H must have full column rank {}, detected {rank}",
            h.cols()
        )));
    }
    Ok(h * &v.adjoint())
}

#[derive(Debug, Clone)]
pub struct Inflation {
    /// Route (a): `H̃†·P·H̃`.
    pub result: TransformResult,
    /// Route (b): `V·(H†·P·H)·Vᴴ`.
    pub factored: ComplexMatrix,
    /// Max-entry distance between the two routes.
    pub route_gap: f64,
}

/// Largest eigenvalue magnitude of Hermitian `p`.
pub fn spectral_scale(p: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(eigvals_hermitian(p, tol.hermiticity)?.scale())
}

/// Transform of the rank-deficient matrix `H·Vᴴ`, computed directly and via
/// the factored form; the two must agree within
/// `cross · max(1, spectral scale of P)` per entry.
pub fn inflate_transform(
    p: &ComplexMatrix,
    h: &ComplexMatrix,
    v: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<Inflation> {
    require_hermitian(p, tol)?;
    let h_tilde = build_rank_deficient(h, v, tol)?;
    let direct = pseudo_similarity(p, &h_tilde, tol)?;
    let inner = pseudo_similarity(p, h, tol)?;
    let factored = &(v * &inner.transformed) * &v.adjoint();
    let route_gap = direct.transformed.max_abs_diff(&factored);
    let allowed = tol.cross * spectral_scale(p, tol)?.max(1.0);
    if !(route_gap <= allowed) {
        return Err(Error::RouteDisagreement {
            gap: route_gap,
            allowed,
            route_a: Box::new(direct.transformed),
            route_b: Box::new(factored),
        });
    }
    Ok(Inflation {
        result: TransformResult {
            construction: Construction::Inflated,
            ..direct
        },
        factored,
        route_gap,
    })
}

/// `Îᵀ·X⁻¹·P·X·Î` where `Î` selects the (zero-based) columns `selection`.
pub fn oblique_transform(
    p: &ComplexMatrix,
    x: &ComplexMatrix,
    selection: &[usize],
    tol: &Tolerances,
) -> Result<TransformResult> {
    require_hermitian(p, tol)?;
    if x.shape() != p.shape() {
        return Err(Error::Dimension(format!(
            "X is {}x{} but P is {}x{}",
            x.rows(),
            x.cols(),
            p.rows(),
            p.cols()
        )));
    }
    check_selection(selection, p.rows())?;
    let x_inv = inverse(x)?;
    let similar = &(&x_inv * p) * x;
    let transformed = similar.principal_submatrix(selection);
    Ok(TransformResult {
        hermitian: hermitian_flag(&transformed, tol)?,
        input_rank: selection.len(),
        transformed,
        construction: Construction::Oblique,
    })
}

/// The selection matrix `Î` for an index list, for callers that need it
/// materialized.
pub fn selection_as_matrix(selection: &[usize], n: usize) -> Result<ComplexMatrix> {
    selection_matrix(selection, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigvals_general;
    use crate::linalg::C64;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn selection_case_is_principal_submatrix() {
        let p = ComplexMatrix::from_diag(&[1., 2., 3.]);
        let h = ComplexMatrix::identity(3).leading_columns(2);
        let t = pseudo_similarity(&p, &h, &tol()).unwrap();
        assert!(t.transformed.max_abs_diff(&ComplexMatrix::from_diag(&[1., 2.])) < 1e-15);
        assert_eq!(t.input_rank, 2);
        assert!(t.hermitian);
    }

    #[test]
    fn single_column_picks_diagonal_entry() {
        let p = real(&[&[2., 1.], &[1., 2.]]);
        let t = pseudo_similarity(&p, &real(&[&[1.], &[0.]]), &tol()).unwrap();
        assert!((t.transformed[(0, 0)] - C64::new(2., 0.)).norm() < 1e-15);
    }

    #[test]
    fn identity_p_gives_identity() {
        let h = real(&[&[1., 2.], &[0., 1.], &[3., -1.]]);
        let t = pseudo_similarity(&ComplexMatrix::identity(3), &h, &tol()).unwrap();
        assert!(t.transformed.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn rank_zero_h_gives_zero_matrix() {
        let p = ComplexMatrix::from_diag(&[1., 2.]);
        let t = pseudo_similarity(&p, &ComplexMatrix::zeros(2, 3), &tol()).unwrap();
        assert_eq!(t.input_rank, 0);
        assert_eq!(t.transformed, ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn pseudo_similarity_errors() {
        let p = ComplexMatrix::from_diag(&[1., 2.]);
        assert!(matches!(
            pseudo_similarity(&p, &ComplexMatrix::identity(3), &tol()),
            Err(Error::Dimension(_))
        ));
        let not_hermitian = real(&[&[0., 1.], &[0., 0.]]);
        assert!(matches!(
            pseudo_similarity(&not_hermitian, &ComplexMatrix::identity(2), &tol()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn compression_examples() {
        let p = ComplexMatrix::from_diag(&[1., 2., 3.]);
        let t = unitary_compression(&p, &ComplexMatrix::identity(3), &tol()).unwrap();
        assert_eq!(t.transformed, p);
        let q = ComplexMatrix::identity(3).select_columns(&[0, 2]);
        let t = unitary_compression(&p, &q, &tol()).unwrap();
        assert_eq!(t.transformed, ComplexMatrix::from_diag(&[1., 3.]));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = real(&[&[s], &[s]]);
        let t = unitary_compression(&real(&[&[2., 1.], &[1., 2.]]), &q, &tol()).unwrap();
        assert!((t.transformed[(0, 0)] - C64::new(3., 0.)).norm() < 1e-15);
    }

    #[test]
    fn compression_rejects_non_orthonormal() {
        let p = ComplexMatrix::from_diag(&[1., 2.]);
        assert!(matches!(
            unitary_compression(&p, &real(&[&[1.], &[1.]]), &tol()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn rank_deficient_embedding_pads_with_zero_columns() {
        let h = real(&[&[1., 2.], &[0., 1.], &[1., 0.]]);
        let v = ComplexMatrix::identity(4).leading_columns(2);
        let ht = build_rank_deficient(&h, &v, &tol()).unwrap();
        assert_eq!(ht.shape(), (3, 4));
        for i in 0..3 {
            assert_eq!(&ht.row(i)[..2], h.row(i));
            assert!(ht.row(i)[2..].iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn rank_deficient_hand_example() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ht = build_rank_deficient(&real(&[&[1.], &[0.]]), &real(&[&[s], &[s]]), &tol()).unwrap();
        assert!(ht.max_abs_diff(&real(&[&[s, s], &[0., 0.]])) < 1e-16);
        assert_eq!(numerical_rank(&ht, 1e-10).unwrap(), 1);
    }

    #[test]
    fn rank_deficient_rejects_bad_v() {
        let h = real(&[&[1.], &[0.]]);
        assert!(build_rank_deficient(&h, &real(&[&[1.], &[1.]]), &tol()).is_err());
    }

    #[test]
    fn inflation_with_identity_embedding_places_block_top_left() {
        let p = real(&[&[2., 1., 0.], &[1., 3., 1.], &[0., 1., 4.]]);
        let h = real(&[&[1., 0.], &[2., 1.], &[0., 1.]]);
        let v = ComplexMatrix::identity(4).leading_columns(2);
        let inf = inflate_transform(&p, &h, &v, &tol()).unwrap();
        let inner = pseudo_similarity(&p, &h, &tol()).unwrap().transformed;
        let t = &inf.result.transformed;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j < 2 { inner[(i, j)] } else { C64::new(0., 0.) };
                assert!((t[(i, j)] - expected).norm() < 1e-12);
            }
        }
        assert_eq!(inf.result.construction, Construction::Inflated);
    }

    #[test]
    fn inflation_hand_example() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = ComplexMatrix::from_diag(&[1., 3.]);
        let inf = inflate_transform(&p, &real(&[&[1.], &[0.]]), &real(&[&[s], &[s]]), &tol()).unwrap();
        // V·[1]·Vᴴ = [[1/2, 1/2], [1/2, 1/2]], eigenvalues {0, 1}
        assert!(inf.result.transformed.max_abs_diff(&real(&[&[0.5, 0.5], &[0.5, 0.5]])) < 1e-15);
        let ev = eigvals_general(&inf.result.transformed, 1e-10).unwrap().sorted_real().unwrap();
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 1.).abs() < 1e-15);
    }

    #[test]
    fn oblique_hand_example() {
        let p = ComplexMatrix::from_diag(&[1., 2., 3.]);
        let x = real(&[&[1., 0., 0.], &[0., 1., 0.], &[5., 0., 1.]]);
        // X⁻¹ = [[1,0,0],[0,1,0],[-5,0,1]], X⁻¹PX = [[1,0,0],[0,2,0],[10,0,3]]
        let t = oblique_transform(&p, &x, &[0], &tol()).unwrap();
        assert!((t.transformed[(0, 0)] - C64::new(1., 0.)).norm() < 1e-14);
        let t = oblique_transform(&p, &x, &[0, 2], &tol()).unwrap();
        assert!(t.transformed.max_abs_diff(&real(&[&[1., 0.], &[10., 3.]])) < 1e-13);
        assert!(!t.hermitian);
    }

    #[test]
    fn oblique_errors() {
        let p = ComplexMatrix::from_diag(&[1., 2.]);
        assert!(matches!(
            oblique_transform(&p, &ComplexMatrix::zeros(2, 2), &[0], &tol()),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            oblique_transform(&p, &ComplexMatrix::identity(2), &[1, 1], &tol()),
            Err(Error::Contract(_))
        ));
    }
}
