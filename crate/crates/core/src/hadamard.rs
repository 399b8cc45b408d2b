//! Fourier and complex Hadamard matrices, monomial equivalence transforms,
//! the dual basis, and generalized Pauli operators.
//!
//! The rescaled convention is used throughout: a complex Hadamard matrix is
//! unitary with every entry of modulus 1/sqrt(d). Only the Fourier family is
//! constructed here; other equivalence classes can be loaded from file and
//! validated with [`is_hadamard`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, is_unitary, ComplexMatrix, DensityMatrix, UnitaryMatrix,
};

/// Tolerance for the unimodularity and unitarity of Hadamard matrices.
pub const HADAMARD_TOL: f64 = 1e-10;
/// Tolerance for monomial phase moduli.
pub const PHASE_TOL: f64 = 1e-12;

/// Unitary matrix with all entries of modulus 1/sqrt(d).
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    matrix: UnitaryMatrix,
}

impl HadamardMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let (ok, dev) = is_hadamard(&matrix, HADAMARD_TOL);
        if !ok {
            return Err(Error::InvalidState(format!(
                "not a (rescaled) complex Hadamard matrix: max deviation {dev:.3e}"
            )));
        }
        Ok(Self {
            matrix: UnitaryMatrix::new(matrix)?,
        })
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Product D P of a diagonal unitary and a permutation: the coherence-value-
/// preserving unitaries. `permutation[j]` is the image of basis index `j`,
/// and `phases[i]` multiplies row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMatrix {
    permutation: Vec<usize>,
    phases: Vec<Complex64>,
}

impl MonomialMatrix {
    pub fn new(permutation: Vec<usize>, phases: Vec<Complex64>) -> Result<Self> {
        let d = permutation.len();
        if phases.len() != d {
            return Err(Error::Shape(format!(
                "{} phases for a dimension-{d} permutation",
                phases.len()
            )));
        }
        let mut seen = vec![false; d];
        for &p in &permutation {
            if p >= d || seen[p] {
                return Err(Error::InvalidState(format!(
                    "not a permutation of 0..{d}: {permutation:?}"
                )));
            }
            seen[p] = true;
        }
        for z in &phases {
            if (z.norm() - 1.0).abs() > PHASE_TOL {
                return Err(Error::InvalidState(format!(
                    "phase {z} is not unimodular within {PHASE_TOL:.0e}"
                )));
            }
        }
        Ok(Self { permutation, phases })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            permutation: (0..dim).collect(),
            phases: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    /// Dense matrix form: (D P)_{pi(j), j} = phases[pi(j)].
    pub fn to_matrix(&self) -> UnitaryMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d);
        for j in 0..d {
            let i = self.permutation[j];
            m.set(i, j, self.phases[i]);
        }
        UnitaryMatrix::new(m).expect("monomial matrices are unitary by construction")
    }
}

/// The Fourier matrix F_d with entries omega^(mu nu)/sqrt(d),
/// omega = exp(2 pi i / d). Dephased: first row and column all 1/sqrt(d).
pub fn fourier_matrix(d: usize) -> Result<HadamardMatrix> {
    if d == 0 {
        return Err(Error::Domain("Fourier matrix needs dimension >= 1".into()));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let m = ComplexMatrix::from_fn(d, |mu, nu| {
        let angle = 2.0 * std::f64::consts::PI * ((mu * nu) % d) as f64 / d as f64;
        Complex64::from_polar(scale, angle)
    });
    HadamardMatrix::new(m)
}

/// The dual basis |phi_k> = F_d |k>, returned as column vectors. Every
/// amplitude has modulus 1/sqrt(d): each vector is maximally coherent in
/// the standard basis.
pub fn dual_basis(d: usize) -> Result<Vec<Vec<Complex64>>> {
    let f = fourier_matrix(d)?;
    Ok((0..d)
        .map(|k| (0..d).map(|n| f.matrix().get(n, k)).collect())
        .collect())
}

/// Generalized Pauli pair (Z_d, X_d): Z_d|j> = omega^j |j> and
/// X_d|j> = |j+1 mod d>.
pub fn generalized_pauli(d: usize) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    if d == 0 {
        return Err(Error::Domain("Pauli operators need dimension >= 1".into()));
    }
    let z = ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let x = ComplexMatrix::from_fn(d, |i, j| {
        if i == (j + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok((UnitaryMatrix::new(z)?, UnitaryMatrix::new(x)?))
}

/// M1 H M2 for monomial M1, M2: stays inside the Hadamard equivalence class.
pub fn equivalence_transform(
    h: &HadamardMatrix,
    m1: &MonomialMatrix,
    m2: &MonomialMatrix,
) -> Result<HadamardMatrix> {
    if m1.dim() != h.dim() || m2.dim() != h.dim() {
        return Err(Error::Shape(format!(
            "monomial dimensions {} and {} vs Hadamard dimension {}",
            m1.dim(),
            m2.dim(),
            h.dim()
        )));
    }
    let product = m1
        .to_matrix()
        .matrix()
        .mul(h.matrix())?
        .mul(m2.to_matrix().matrix())?;
    HadamardMatrix::new(product)
}

/// `true` iff `m` is unitary within `tol` and every entry modulus is within
/// `tol` of 1/sqrt(d). The maximum deviation over both conditions is
/// reported either way.
pub fn is_hadamard(m: &ComplexMatrix, tol: f64) -> (bool, f64) {
    let d = m.dim();
    let target = 1.0 / (d as f64).sqrt();
    let mut dev = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            dev = dev.max((m.get(i, j).norm() - target).abs());
        }
    }
    let (_, unit_res) = is_unitary(m, tol);
    dev = dev.max(unit_res);
    (dev <= tol, dev)
}

/// The basis W = V H^dag in which the state's matrix representation has a
/// uniform diagonal (all entries 1/d): V diagonalizes rho, H is any
/// rescaled complex Hadamard matrix.
pub fn optimal_basis(rho: &DensityMatrix, h: &HadamardMatrix) -> Result<UnitaryMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::Shape(format!(
            "state dimension {} vs Hadamard dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    let eig = hermitian_eig(rho)?;
    eig.vectors.compose(&h.unitary().adjoint())
}
