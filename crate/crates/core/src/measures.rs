//! Coherence measures of a state in a reference basis: relative entropy,
//! l1 norm, and l2 (Hilbert-Schmidt) norm.
//!
//! All three quantify off-diagonal structure of the density matrix in the
//! chosen basis and vanish exactly on states diagonal in that basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_transform, entropy_of_probs, hermitian_eig, DensityMatrix, LogBase, UnitaryMatrix,
};

/// Entropy differences this far below zero are rounding noise and floored
/// to 0; anything lower indicates a numerical defect (the dephased state
/// majorizes the spectrum, so the true value is nonnegative).
const NEGATIVE_CLAMP: f64 = 1e-10;

/// All three measures of one state in one basis, plus the diagonal part
/// (the dephased distribution) they were computed from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// Relative entropy of coherence, in units of the configured log base.
    pub c_r: f64,
    /// l1 norm of coherence: sum of off-diagonal moduli.
    pub c_l1: f64,
    /// l2 norm of coherence: sum of squared off-diagonal moduli.
    pub c_l2: f64,
    /// Diagonal of the matrix representation (a probability vector).
    pub diagonal: Vec<f64>,
}

/// S(diag(rho)) - S(spec(rho)): entropy gained by dephasing in the current
/// basis. Small negatives from rounding are clamped to zero.
pub fn relative_entropy_coherence(rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    let diag = rho.diagonal_probabilities();
    let eig = hermitian_eig(rho)?;
    let c = entropy_of_probs(&diag, base) - entropy_of_probs(eig.spectrum.values(), base);
    if c < -NEGATIVE_CLAMP {
        return Err(Error::Numerical(format!(
            "relative-entropy coherence {c:.3e} below the rounding floor"
        )));
    }
    Ok(c.max(0.0))
}

/// Sum of moduli of all off-diagonal entries.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = m.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m.get(i, j).norm();
            }
        }
    }
    s
}

/// Sum of squared moduli of all off-diagonal entries
/// (= ||rho||_2^2 - sum_mu |rho_mumu|^2).
pub fn l2_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = m.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s
}

/// All three measures of rho in the basis whose vectors are the columns of
/// `u`, i.e. the measures of U^dag rho U in the computational basis.
pub fn coherence_in_basis(
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    base: LogBase,
) -> Result<CoherenceReport> {
    if rho.dim() != u.dim() {
        return Err(Error::Shape(format!(
            "state dimension {} vs basis dimension {}",
            rho.dim(),
            u.dim()
        )));
    }
    let transformed = conjugate_transform(u, rho)?;
    report_of(&transformed, base)
}

/// Measures of rho as represented (computational basis).
pub fn report_of(rho: &DensityMatrix, base: LogBase) -> Result<CoherenceReport> {
    let diagonal = rho.diagonal_probabilities();
    Ok(CoherenceReport {
        c_r: relative_entropy_coherence(rho, base)?,
        c_l1: l1_coherence(rho),
        c_l2: l2_coherence(rho),
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier_matrix;
    use crate::linalg::{shannon_entropy, ComplexMatrix, Spectrum};
    use crate::search::{random_spectrum, sample_cue, RngStream};
    use num_complex::Complex64;

    fn qutrit_fourier_state() -> DensityMatrix {
        let spec = Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
        let f3 = fourier_matrix(3).unwrap();
        DensityMatrix::from_eigensystem(&spec, f3.unitary()).unwrap()
    }

    #[test]
    fn diagonal_states_have_zero_coherence() {
        let rho =
            DensityMatrix::from_spectrum(&Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap()).unwrap();
        assert_eq!(relative_entropy_coherence(&rho, LogBase::Two).unwrap(), 0.0);
        assert_eq!(l1_coherence(&rho), 0.0);
        assert_eq!(l2_coherence(&rho), 0.0);
    }

    #[test]
    fn plus_state_is_maximally_coherent_qubit() {
        // |+><+| has every entry 1/2.
        let half = Complex64::new(0.5, 0.0);
        let rho =
            DensityMatrix::new(ComplexMatrix::new(2, vec![half, half, half, half]).unwrap())
                .unwrap();
        assert!((relative_entropy_coherence(&rho, LogBase::Two).unwrap() - 1.0).abs() < 1e-10);
        assert!((l1_coherence(&rho) - 1.0).abs() < 1e-12);
        assert!((l2_coherence(&rho) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn qutrit_fourier_state_measures() {
        let rho = qutrit_fourier_state();
        // C_R = log2(3) - H(0.5, 0.3, 0.2)
        let expected_cr = 3.0_f64.log2() - 1.485475;
        assert!((relative_entropy_coherence(&rho, LogBase::Two).unwrap() - expected_cr).abs() < 1e-5);
        // Table value for the l1 norm in this basis.
        assert!((l1_coherence(&rho) - 0.529150).abs() < 1e-6);
        // l2 equals purity - 1/3 here.
        assert!((l2_coherence(&rho) - (0.38 - 1.0 / 3.0)).abs() < 1e-9);
    }

    #[test]
    fn eigenbasis_zeroes_all_measures() {
        let mut rng = RngStream::new(404, 0);
        let spec = random_spectrum(4, &mut rng).unwrap();
        let basis = sample_cue(4, &mut rng).unwrap();
        let rho = DensityMatrix::from_eigensystem(&spec, &basis).unwrap();
        let eig = hermitian_eig(&rho).unwrap();
        let report = coherence_in_basis(&rho, &eig.vectors, LogBase::Two).unwrap();
        assert!(report.c_r < 1e-9);
        assert!(report.c_l1 < 1e-9);
        assert!(report.c_l2 < 1e-9);
    }

    #[test]
    fn identity_basis_reports_state_as_given() {
        let rho = qutrit_fourier_state();
        let report = coherence_in_basis(&rho, &UnitaryMatrix::identity(3), LogBase::Two).unwrap();
        assert!((report.c_l1 - l1_coherence(&rho)).abs() < 1e-12);
        assert!((report.c_l2 - l2_coherence(&rho)).abs() < 1e-12);
    }

    #[test]
    fn fig1_value_for_diagonal_four_level_state() {
        // rho = diag(0.4, 0.3, 0.2, 0.1), measured in the basis F4^dag.
        let spec = Spectrum::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let rho = DensityMatrix::from_spectrum(&spec).unwrap();
        let f4 = fourier_matrix(4).unwrap();
        let report = coherence_in_basis(&rho, &f4.unitary().adjoint(), LogBase::Two).unwrap();
        assert!((report.c_l1 - 0.765685).abs() < 1e-6);
    }

    #[test]
    fn maximally_coherent_pure_state_l1_is_d_minus_1() {
        for d in 2..=6 {
            let inv = Complex64::new(1.0 / d as f64, 0.0);
            let rho =
                DensityMatrix::new(ComplexMatrix::from_fn(d, |_, _| inv)).unwrap();
            assert!((l1_coherence(&rho) - (d as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_state_in_fourier_basis_reaches_d_minus_1() {
        for d in 2..=6 {
            let mut values = vec![0.0; d];
            values[0] = 1.0;
            let rho = DensityMatrix::from_spectrum(&Spectrum::new(values).unwrap()).unwrap();
            let f = fourier_matrix(d).unwrap();
            let report = coherence_in_basis(&rho, &f.unitary().adjoint(), LogBase::Two).unwrap();
            assert!((report.c_l1 - (d as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn monomial_transforms_preserve_all_measures() {
        use crate::hadamard::MonomialMatrix;
        let mut rng = RngStream::new(9090, 0);
        for d in 2..=5 {
            let spec = random_spectrum(d, &mut rng).unwrap();
            let basis = sample_cue(d, &mut rng).unwrap();
            let rho = DensityMatrix::from_eigensystem(&spec, &basis).unwrap();

            let mut perm: Vec<usize> = (0..d).collect();
            rng.shuffle(&mut perm);
            let phases: Vec<Complex64> = (0..d)
                .map(|_| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.next_f64()))
                .collect();
            let m = MonomialMatrix::new(perm, phases).unwrap().to_matrix();

            let before = report_of(&rho, LogBase::Two).unwrap();
            let after = coherence_in_basis(&rho, &m, LogBase::Two).unwrap();
            assert!((before.c_r - after.c_r).abs() < 1e-10, "C_R changed at d={d}");
            assert!((before.c_l1 - after.c_l1).abs() < 1e-10, "C_l1 changed at d={d}");
            assert!((before.c_l2 - after.c_l2).abs() < 1e-10, "C_l2 changed at d={d}");
        }
    }

    #[test]
    fn maximally_mixed_state_is_coherence_free_everywhere() {
        let mut rng = RngStream::new(606, 0);
        for d in [2usize, 3, 5] {
            let rho =
                DensityMatrix::from_spectrum(&Spectrum::new(vec![1.0 / d as f64; d]).unwrap())
                    .unwrap();
            for _ in 0..20 {
                let u = sample_cue(d, &mut rng).unwrap();
                let report = coherence_in_basis(&rho, &u, LogBase::Two).unwrap();
                assert!(report.c_r < 1e-10);
                assert!(report.c_l1 < 1e-10);
                assert!(report.c_l2 < 1e-10);
            }
        }
    }

    #[test]
    fn sampled_bases_respect_entropy_and_purity_bounds() {
        let mut rng = RngStream::new(515, 0);
        for d in 2..=6 {
            let spec = random_spectrum(d, &mut rng).unwrap();
            let basis = sample_cue(d, &mut rng).unwrap();
            let rho = DensityMatrix::from_eigensystem(&spec, &basis).unwrap();
            let s = shannon_entropy(&spec, LogBase::Two);
            let cr_bound = (d as f64).log2() - s;
            let cl2_bound = spec.purity() - 1.0 / d as f64;
            for _ in 0..50 {
                let u = sample_cue(d, &mut rng).unwrap();
                let report = coherence_in_basis(&rho, &u, LogBase::Two).unwrap();
                assert!(report.c_r <= cr_bound + 1e-9, "C_R bound violated at d={d}");
                assert!(report.c_l2 <= cl2_bound + 1e-9, "C_l2 bound violated at d={d}");
                assert!(report.c_l1 <= d as f64 - 1.0 + 1e-9);
                let dsum: f64 = report.diagonal.iter().sum();
                assert!((dsum - 1.0).abs() < 1e-10);
            }
        }
    }
}
