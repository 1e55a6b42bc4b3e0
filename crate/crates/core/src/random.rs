//! Seeded generators for random quantum objects.
//!
//! Everything is driven by [`Rng`], a ChaCha8 stream seeded from a `u64`
//! through `rand_core`'s `seed_from_u64`, so a seed reproduces the same
//! objects on every platform.

use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{inner, vec_norm, ComplexMatrix, C64};
use crate::types::{DensityOperator, Instrument, Observable, Povm, StateVector};
use crate::DEFAULT_TOL;

/// Deterministic random source.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn seed(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw from `[0, 1)` with 53 random mantissa bits.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.gen_range(lo..=hi)
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard complex Gaussian (`E|z|² = 1`).
    pub fn complex_normal(&mut self) -> C64 {
        let s = 0.5f64.sqrt();
        C64::new(self.normal() * s, self.normal() * s)
    }

    pub fn ginibre(&mut self, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, d, |_, _| self.complex_normal())
    }

    pub fn hermitian(&mut self, d: usize) -> ComplexMatrix {
        self.ginibre(d).hermitian_part()
    }

    /// Haar-random unitary: Gram–Schmidt on the columns of a Ginibre matrix.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        let g = self.ginibre(d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = g.column(j);
            for _ in 0..2 {
                for b in &cols {
                    let c = inner(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let n = vec_norm(&v);
            for x in v.iter_mut() {
                *x /= n;
            }
            cols.push(v);
        }
        ComplexMatrix::from_columns(d, &cols)
    }

    pub fn vector(&mut self, d: usize) -> Vec<C64> {
        (0..d).map(|_| self.complex_normal()).collect()
    }

    pub fn state(&mut self, d: usize) -> StateVector {
        loop {
            if let Ok(s) = StateVector::normalized(self.vector(d)) {
                return s;
            }
        }
    }

    /// Full-rank random density operator `GG†/Tr(GG†)`.
    pub fn density(&mut self, d: usize) -> DensityOperator {
        self.density_of_rank(d, d)
    }

    /// Random density operator of rank at most `rank`.
    pub fn density_of_rank(&mut self, d: usize, rank: usize) -> DensityOperator {
        let g = ComplexMatrix::from_fn(d, rank.max(1), |_, _| self.complex_normal());
        let m = g.matmul(&g.adjoint());
        let tr = m.trace().re;
        DensityOperator::new(m.scale_real(1.0 / tr)).expect("Wishart matrices are valid states")
    }

    /// Density operator supported inside `range(projector)`.
    pub fn density_in(&mut self, projector: &ComplexMatrix) -> DensityOperator {
        let d = projector.rows();
        let rank = self.range(1, d);
        loop {
            let g = ComplexMatrix::from_fn(d, rank, |_, _| self.complex_normal());
            let h = projector.matmul(&g);
            let m = h.matmul(&h.adjoint()).hermitian_part();
            let tr = m.trace().re;
            if tr > 1e-6 {
                return DensityOperator::new(m.scale_real(1.0 / tr))
                    .expect("projected Wishart matrices are valid states");
            }
        }
    }

    /// Random observable: Haar eigenbasis, random degeneracy pattern, distinct
    /// eigenvalues separated by at least 0.1.
    pub fn observable(&mut self, d: usize) -> Observable {
        let k = self.range(1, d);
        self.observable_with_outcomes(d, k)
    }

    /// Random observable with exactly `k ≤ d` distinct eigenvalues.
    pub fn observable_with_outcomes(&mut self, d: usize, k: usize) -> Observable {
        assert!(k >= 1 && k <= d);
        // Every cluster gets one vector, the rest are assigned at random.
        let mut owner: Vec<usize> = (0..k).collect();
        for _ in k..d {
            owner.push(self.range(0, k - 1));
        }
        for i in (1..owner.len()).rev() {
            let j = self.range(0, i);
            owner.swap(i, j);
        }
        let u = self.unitary(d);
        let mut projectors = alloc::vec![ComplexMatrix::zeros(d, d); k];
        for (col, &cluster) in owner.iter().enumerate() {
            let v = u.column(col);
            projectors[cluster] = &projectors[cluster] + &ComplexMatrix::outer(&v, &v);
        }
        let mut value = -2.0 * self.uniform();
        let mut eigenvalues = Vec::with_capacity(k);
        for _ in 0..k {
            eigenvalues.push(value);
            value += 0.1 + self.uniform();
        }
        Observable::new(eigenvalues, projectors, DEFAULT_TOL)
            .expect("constructed observable is valid")
    }

    /// Random instrument with `k` outcomes read off a Haar unitary on `C^d ⊗ C^k`
    /// with the apparatus prepared in its first basis state.
    pub fn instrument(&mut self, d: usize, k: usize) -> Instrument {
        let w = self.unitary(d * k);
        let transformers = (0..k)
            .map(|l| ComplexMatrix::from_fn(d, d, |a, b| w[(a * k + l, b * k)]))
            .collect();
        Instrument::indexed(transformers, DEFAULT_TOL)
            .expect("dilated unitary gives a complete instrument")
    }

    pub fn povm(&mut self, d: usize, k: usize) -> Povm {
        crate::types::povm_of(&self.instrument(d, k))
    }

    /// Ordinary instrument for `obs`: outcome `i` is `M_i = U_i P_i`, with
    /// `U_i` acting inside `range(P_i)` when `repeatable[i]` and Haar-random
    /// on the whole space otherwise.
    pub fn ordinary_instrument(&mut self, obs: &Observable, repeatable: &[bool]) -> Instrument {
        assert_eq!(repeatable.len(), obs.len());
        let d = obs.dim();
        let transformers = obs
            .projectors()
            .iter()
            .zip(repeatable)
            .map(|(p, &rep)| {
                if rep {
                    let basis = crate::matcore::projector_basis(p);
                    let r = self.unitary(basis.len());
                    let mut m = ComplexMatrix::zeros(d, d);
                    for (j, bj) in basis.iter().enumerate() {
                        for (l, bl) in basis.iter().enumerate() {
                            m = &m + &ComplexMatrix::outer(bj, bl).scale(r[(j, l)]);
                        }
                    }
                    m
                } else {
                    self.unitary(d).matmul(p)
                }
            })
            .collect();
        Instrument::new(transformers, obs.labels().to_vec(), DEFAULT_TOL)
            .expect("ordinary instrument is complete")
    }

    /// Ginibre matrix with `nullity` singular directions removed.
    pub fn rank_deficient(&mut self, d: usize, nullity: usize) -> ComplexMatrix {
        let g = self.ginibre(d);
        let v = self.unitary(d);
        let mut keep = ComplexMatrix::identity(d);
        for j in 0..nullity.min(d) {
            let c = v.column(j);
            keep = &keep - &ComplexMatrix::outer(&c, &c);
        }
        g.matmul(&keep)
    }
}
