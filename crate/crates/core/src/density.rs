use num_complex::Complex64;

use crate::entanglement::binary_entropy;

/// A single-qubit density matrix, `rows[i][j] = ⟨i|ρ|j⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitDensity {
    rows: [[Complex64; 2]; 2],
}

impl QubitDensity {
    pub fn new(rows: [[Complex64; 2]; 2]) -> Self {
        Self { rows }
    }

    pub fn diagonal(p0: f64, p1: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new([
            [Complex64::new(p0, 0.0), zero],
            [zero, Complex64::new(p1, 0.0)],
        ])
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i][j]
    }

    pub fn trace(&self) -> Complex64 {
        self.rows[0][0] + self.rows[1][1]
    }

    pub fn det(&self) -> f64 {
        (self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]).re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.rows[0][1] - self.rows[1][0].conj()).norm() <= tol
            && self.rows[0][0].im.abs() <= tol
            && self.rows[1][1].im.abs() <= tol
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &QubitDensity) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.rows[i][j] - other.rows[i][j]).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order, assuming Hermitian with unit trace.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let tr = self.trace().re;
        let disc = (tr * tr - 4.0 * self.det()).max(0.0).sqrt();
        [0.5 * (tr - disc), 0.5 * (tr + disc)]
    }

    /// Base-2 von Neumann entropy (ebits).
    pub fn entropy(&self) -> f64 {
        let [low, _] = self.eigenvalues();
        binary_entropy(low.clamp(0.0, 1.0))
    }

    /// `4 det ρ`: the squared concurrence between this qubit and the rest of
    /// a globally pure state.
    pub fn tangle(&self) -> f64 {
        (4.0 * self.det()).clamp(0.0, 1.0)
    }
}
