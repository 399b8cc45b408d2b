//! Dense complex-matrix kernel: arithmetic, Hermitian eigendecomposition,
//! unitarity checks, and entropy of probability vectors.
//!
//! Everything here is a pure function of immutable inputs. Matrices are
//! stored row-major as flat `Vec<Complex64>`; dimensions stay small (the
//! experiments run at d <= 8), so the O(d^3) kernels are written for
//! clarity rather than blocking.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for Hermiticity and trace checks.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on |tr rho - 1|.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) floor are clamped to zero.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Max-norm tolerance for U U^dag = I.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Probability entries above this (negative) floor are clamped to zero.
pub const PROBABILITY_FLOOR: f64 = -1e-12;
/// Tolerance on |sum(p) - 1|.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;
/// Max-norm tolerance for the eigendecomposition reconstruction V L V^dag = rho.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_OFF_TOL: f64 = 1e-12;
/// Maximum number of Jacobi sweeps before reporting non-convergence.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Logarithm base for entropies; base 2 is the quantum-information convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LogBase {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogBase::Two => write!(f, "2"),
            LogBase::E => write!(f, "e"),
        }
    }
}

/// Dense d x d complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from a flat row-major entry vector. Rejects wrong lengths and
    /// non-finite entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {}x{} = {} entries, got {}",
                dim,
                dim,
                dim * dim,
                entries.len()
            )));
        }
        if let Some(z) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite entry {z}")));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build entrywise from a closure over (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Diagonal matrix from real values.
    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_fn(d, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.entries[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Matrix product; errors on dimension mismatch.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max-norm of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise Hermiticity defect |A_ij - conj(A_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }
}

/// `true` iff ||M M^dag - I||_max <= tol; the residual is reported either way.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> (bool, f64) {
    let residual = unitarity_residual(m);
    (residual <= tol, residual)
}

/// ||M M^dag - I||_max.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                s += m.get(i, k) * m.get(j, k).conj();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Nonnegative real eigenvalue/probability vector summing to one.
///
/// Construction clamps entries in `[PROBABILITY_FLOOR, 0)` to zero and keeps
/// the caller's order when asked; the plain constructor sorts descending,
/// which is the convention everywhere a single canonical order is needed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validate and sort descending.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut s = Self::in_given_order(values)?;
        s.values
            .sort_by(|a, b| b.partial_cmp(a).expect("finite probabilities"));
        Ok(s)
    }

    /// Validate but keep the caller-supplied order (needed when exploring
    /// permutations explicitly).
    pub fn in_given_order(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("spectrum must have dimension >= 1".into()));
        }
        let mut clamped = Vec::with_capacity(values.len());
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidState(format!("non-finite probability {v}")));
            }
            if v < PROBABILITY_FLOOR {
                return Err(Error::InvalidState(format!(
                    "probability {v} below floor {PROBABILITY_FLOOR}"
                )));
            }
            if v > 1.0 + PROBABILITY_SUM_TOL {
                return Err(Error::InvalidState(format!("probability {v} exceeds 1")));
            }
            clamped.push(v.clamp(0.0, 1.0));
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {sum}, expected 1 within {PROBABILITY_SUM_TOL}"
            )));
        }
        Ok(Self { values: clamped })
    }

    /// Reorder as `values[perm[i]]`; `perm` must be a bijection on 0..d.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.values.len();
        if perm.len() != d {
            return Err(Error::Shape(format!(
                "permutation length {} does not match dimension {d}",
                perm.len()
            )));
        }
        let mut seen = vec![false; d];
        for &p in perm {
            if p >= d || seen[p] {
                return Err(Error::InvalidState(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        Ok(Self {
            values: perm.iter().map(|&p| self.values[p]).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum of squared probabilities, tr(rho^2) for the state they came from.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Hermitian, positive-semidefinite, unit-trace complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity, unit trace and positivity (via the eigensolver).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_defect();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |A_ij - conj(A_ji)| = {herm:.3e} > {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {tr} differs from 1 beyond {TRACE_TOL:.0e}"
            )));
        }
        let (eigenvalues, _) = jacobi_hermitian(&matrix)?;
        if let Some(bad) = eigenvalues.iter().find(|&&l| l < EIGENVALUE_FLOOR) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {bad:.3e} below floor {EIGENVALUE_FLOOR:.0e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Assemble rho = U Lambda U^dag from a spectrum and the basis carrying it.
    pub fn from_eigensystem(spectrum: &Spectrum, basis: &UnitaryMatrix) -> Result<Self> {
        if spectrum.dim() != basis.dim() {
            return Err(Error::Shape(format!(
                "spectrum dimension {} vs basis dimension {}",
                spectrum.dim(),
                basis.dim()
            )));
        }
        let u = basis.matrix();
        let d = spectrum.dim();
        let lambda = spectrum.values();
        // (U L U^dag)_ij = sum_k l_k U_ik conj(U_jk)
        let m = ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| lambda[k] * u.get(i, k) * u.get(j, k).conj())
                .sum()
        });
        Self::new(m)
    }

    /// Diagonal density matrix with the spectrum on the diagonal, in its
    /// stored order.
    pub fn from_spectrum(spectrum: &Spectrum) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(spectrum.values()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Diagonal part as a probability vector (tiny negatives clamped).
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        self.matrix
            .real_diagonal()
            .iter()
            .map(|&p| if p < 0.0 { 0.0 } else { p })
            .collect()
    }
}

/// d x d complex matrix with U U^dag = I within `UNITARITY_TOL`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARITY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let (ok, residual) = is_unitary(&matrix, tol);
        if !ok {
            return Err(Error::InvalidState(format!(
                "not unitary: ||U U^dag - I||_max = {residual:.3e} > {tol:.0e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Product of two unitaries (revalidated against rounding drift).
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.matrix.mul(rhs.matrix())?)
    }
}

/// Spectrum plus the unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub vectors: UnitaryMatrix,
}

/// Eigendecomposition of a density matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back descending; tiny negatives (within the floor) are
/// clamped to zero and the spectrum renormalized. The reconstruction
/// `V L V^dag` is checked against the input within `RECONSTRUCTION_TOL`.
pub fn hermitian_eig(rho: &DensityMatrix) -> Result<EigenDecomposition> {
    let (mut values, vectors) = jacobi_hermitian(rho.matrix())?;

    // Descending stable sort, carrying the eigenvector columns along.
    let d = values.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));
    values = order.iter().map(|&k| values[k]).collect();
    let v = ComplexMatrix::from_fn(d, |i, j| vectors.get(i, order[j]));

    for l in values.iter_mut() {
        if *l < 0.0 {
            if *l < EIGENVALUE_FLOOR {
                return Err(Error::InvalidState(format!(
                    "eigenvalue {l:.3e} below floor {EIGENVALUE_FLOOR:.0e}"
                )));
            }
            *l = 0.0;
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > TRACE_TOL {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {sum} differs from 1 beyond {TRACE_TOL:.0e}"
        )));
    }
    for l in values.iter_mut() {
        *l /= sum;
    }

    let spectrum = Spectrum::in_given_order(values)?;
    let vectors = UnitaryMatrix::new(v)?;

    let rebuilt = DensityMatrix::from_eigensystem(&spectrum, &vectors)?;
    let residual = rebuilt.matrix().max_abs_diff(rho.matrix());
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::Numerical(format!(
            "eigendecomposition reconstruction residual {residual:.3e} > {RECONSTRUCTION_TOL:.0e}"
        )));
    }

    Ok(EigenDecomposition { spectrum, vectors })
}

/// U^dag rho U: the state rho re-expressed in the basis whose vectors are
/// the columns of U.
pub fn conjugate_transform(u: &UnitaryMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::Shape(format!(
            "basis dimension {} vs state dimension {}",
            u.dim(),
            rho.dim()
        )));
    }
    let transformed = u
        .matrix()
        .adjoint()
        .mul(rho.matrix())?
        .mul(u.matrix())?;
    DensityMatrix::new(transformed)
}

/// Shannon entropy -sum p log p with 0 log 0 = 0.
pub fn shannon_entropy(p: &Spectrum, base: LogBase) -> f64 {
    entropy_of_probs(p.values(), base)
}

/// Entropy of a raw probability slice; entries are assumed clamped >= 0.
pub(crate) fn entropy_of_probs(probs: &[f64], base: LogBase) -> f64 {
    let s: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * base.log(p))
        .sum();
    // Guard against -0.0 from rounding on pure distributions.
    if s <= 0.0 {
        0.0
    } else {
        s
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Returns the (unsorted) real diagonal and the accumulated rotation whose
/// columns are eigenvectors. Sweeps run until the off-diagonal Frobenius
/// norm drops below `JACOBI_OFF_TOL`.
fn jacobi_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let herm = m.hermiticity_defect();
    if herm > HERMITICITY_TOL {
        return Err(Error::InvalidState(format!(
            "eigensolver input not Hermitian: defect {herm:.3e}"
        )));
    }
    let d = m.dim();
    let mut a = m.clone();
    // Symmetrize so rounding in the input cannot bias the iteration.
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
        let re = a.get(i, i).re;
        a.set(i, i, Complex64::new(re, 0.0));
    }
    let mut v = ComplexMatrix::identity(d);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if offdiag_frobenius(&a) < JACOBI_OFF_TOL {
            return Ok((a.real_diagonal(), v));
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                let abs = apq.norm();
                if abs < 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Rotation angle for the phase-stripped 2x2 real block,
                // taking the smaller root for stability.
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let jpp = phase * c;
                let jpq = phase * s;

                // Columns p, q of A <- A J.
                for k in 0..d {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * jpp - akq * s);
                    a.set(k, q, akp * jpq + akq * c);
                }
                // Rows p, q of A <- J^dag A.
                let phc = phase.conj();
                for k in 0..d {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * (phc * c) - aqk * s);
                    a.set(q, k, apk * (phc * s) + aqk * c);
                }
                // The rotation annihilates (p,q) analytically; pin it.
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                let rp = a.get(p, p).re;
                let rq = a.get(q, q).re;
                a.set(p, p, Complex64::new(rp, 0.0));
                a.set(q, q, Complex64::new(rq, 0.0));

                // V <- V J.
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp - vkq * s);
                    v.set(k, q, vkp * jpq + vkq * c);
                }
            }
        }
    }

    let off = offdiag_frobenius(&a);
    if off < JACOBI_OFF_TOL {
        Ok((a.real_diagonal(), v))
    } else {
        Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps; \
             off-diagonal residual {off:.3e}"
        )))
    }
}

fn offdiag_frobenius(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}
