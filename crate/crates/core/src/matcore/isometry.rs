use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{inner, vec_norm, ComplexMatrix, C64};
use crate::{Error, Result};

/// Candidates whose residual after projection falls below this are rejected.
const COMPLETION_REJECT: f64 = 1e-10;

/// `‖G − 1‖_F` for the Gram matrix `G_jk = ⟨v_j|v_k⟩`.
pub fn orthonormality_residual(vectors: &[Vec<C64>]) -> f64 {
    let mut acc = 0.0;
    for (j, u) in vectors.iter().enumerate() {
        for (k, v) in vectors.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            acc += (inner(u, v) - target).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Completes an orthonormal set to a basis of `C^dim`.
///
/// Standard basis vectors are tried in index order; each is orthogonalized
/// (twice, modified Gram–Schmidt) against everything accepted so far and kept
/// when its residual norm is at least `1e-10`. Only the new vectors are
/// returned. The result depends on the span of `given`, not on the particular
/// basis chosen for it.
pub fn complete_orthonormal(given: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = given.to_vec();
    let mut added = Vec::new();
    for k in 0..dim {
        if basis.len() >= dim {
            break;
        }
        let mut cand: Vec<C64> = (0..dim)
            .map(|i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &cand);
                for (x, y) in cand.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let norm = vec_norm(&cand);
        if norm < COMPLETION_REJECT {
            continue;
        }
        for x in cand.iter_mut() {
            *x /= norm;
        }
        basis.push(cand.clone());
        added.push(cand);
    }
    added
}

/// Unitary `U` with `U·columns[j] = images[j]`, completed deterministically.
///
/// Both lists are completed with [`complete_orthonormal`] and the completions
/// are paired in order, so `U = Σ_j |image_j⟩⟨column_j|` over the extended
/// lists. Empty lists give the identity.
pub fn extend_isometry(
    columns: &[Vec<C64>],
    images: &[Vec<C64>],
    dim: usize,
    tol: f64,
) -> Result<ComplexMatrix> {
    if columns.len() != images.len() {
        return Err(Error::DimensionMismatch {
            expected: columns.len(),
            found: images.len(),
        });
    }
    if columns.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: columns.len(),
        });
    }
    for v in columns.iter().chain(images) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    for set in [columns, images] {
        let residual = orthonormality_residual(set);
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
    }
    Ok(extend_unchecked(columns, images, dim))
}

pub(crate) fn extend_unchecked(
    columns: &[Vec<C64>],
    images: &[Vec<C64>],
    dim: usize,
) -> ComplexMatrix {
    let extra_cols = complete_orthonormal(columns, dim);
    let extra_imgs = complete_orthonormal(images, dim);
    let mut u = ComplexMatrix::zeros(dim, dim);
    let pairs = columns
        .iter()
        .zip(images)
        .chain(extra_cols.iter().zip(&extra_imgs));
    for (col, img) in pairs {
        u = &u + &ComplexMatrix::outer(img, col);
    }
    u
}
