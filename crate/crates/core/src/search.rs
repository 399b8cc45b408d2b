//! Haar-random basis sampling and the random-search experiments: CUE
//! unitaries, seeded reproducible streams, coherence maximization over
//! random bases, the first-order stationarity residual, and circulant
//! structure checks of the transformed state.
//!
//! Reproducibility contract: a stream is ChaCha12 keyed by
//! `seed_from_u64(seed)` (SplitMix64 key expansion) with the ChaCha stream
//! counter set to `stream_id`. Uniform doubles take the top 53 bits of each
//! `next_u64`; Gaussian variates come from the Box-Muller transform on that
//! stream. Identical `(seed, stream_id)` therefore reproduces identical
//! samples bit-exactly, independent of platform.

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    entropy_of_probs, ComplexMatrix, LogBase, Spectrum, UnitaryMatrix,
};

/// Unitarity tolerance demanded of CUE samples (tighter than the general
/// `UnitaryMatrix` tolerance; Householder QR delivers it with margin).
pub const CUE_UNITARITY_TOL: f64 = 1e-12;
/// Hermitian-symmetry tolerance of the transformed-state entries.
pub const THETA_SYMMETRY_TOL: f64 = 1e-12;
/// |Theta| below this is treated as zero in the stationarity condition.
pub const THETA_ZERO_TOL: f64 = 1e-12;
/// Circulant-structure tolerance.
pub const CIRCULANT_TOL: f64 = 1e-10;
/// Default perturbation scale (radians) for [`local_refine`].
pub const DEFAULT_REFINE_STEP: f64 = 0.05;

const TWO_53: f64 = 9007199254740992.0; // 2^53

/// Seeded, stream-split random source. See the module docs for the exact
/// algorithm; the point is that `(seed, stream_id)` fully determines the
/// sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / TWO_53
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 / TWO_53
    }

    /// Two independent standard normals by Box-Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Uniform integer in [0, n) by rejection (unbiased).
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = n.wrapping_mul(u64::MAX / n);
        loop {
            let x = self.next_u64();
            if zone == 0 || x < zone {
                return x % n;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            slice.swap(i, j);
        }
    }
}

/// Uniform random point on the probability simplex (descending order), via
/// normalized exponentials.
pub fn random_spectrum(d: usize, rng: &mut RngStream) -> Result<Spectrum> {
    if d == 0 {
        return Err(Error::Domain("spectrum needs dimension >= 1".into()));
    }
    let mut values: Vec<f64> = (0..d).map(|_| -rng.next_f64_open().ln()).collect();
    let sum: f64 = values.iter().sum();
    for v in values.iter_mut() {
        *v /= sum;
    }
    // Remove the rounding slack so the probabilities sum to 1 exactly.
    let drift: f64 = values.iter().sum::<f64>() - 1.0;
    values[0] -= drift;
    Spectrum::new(values)
}

/// Haar-distributed unitary: QR factorization of a complex Ginibre matrix
/// with the R-diagonal phase correction that makes the factorization
/// unique (diagonal of R positive), hence the sample exactly Haar.
pub fn sample_cue(d: usize, rng: &mut RngStream) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::Domain("CUE sample needs dimension >= 1".into()));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = ComplexMatrix::from_fn(d, |_, _| {
        let (re, im) = rng.normal_pair();
        Complex64::new(re * scale, im * scale)
    });
    let (q, r) = householder_qr(&ginibre);
    let u = ComplexMatrix::from_fn(d, |i, j| {
        let rjj = r.get(j, j);
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.get(i, j) * phase
    });
    UnitaryMatrix::with_tolerance(u, CUE_UNITARITY_TOL)
}

/// Householder QR of a square complex matrix: A = Q R with Q unitary and R
/// upper triangular.
fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(d);
    let mut v = vec![Complex64::new(0.0, 0.0); d];

    for k in 0..d {
        let mut norm_sq = 0.0;
        for i in k..d {
            norm_sq += r.get(i, k).norm_sqr();
        }
        let norm_x = norm_sq.sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let x0 = r.get(k, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        // v = x + phase * ||x|| * e1 avoids cancellation; H = I - 2vv^dag/|v|^2
        // sends x to -phase * ||x|| * e1.
        for i in k..d {
            v[i] = r.get(i, k);
        }
        v[k] += phase * norm_x;
        let vnorm2: f64 = (k..d).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        let two_over = 2.0 / vnorm2;

        for j in k..d {
            let mut w = Complex64::new(0.0, 0.0);
            for i in k..d {
                w += v[i].conj() * r.get(i, j);
            }
            let scale = w * two_over;
            for i in k..d {
                let val = r.get(i, j) - scale * v[i];
                r.set(i, j, val);
            }
        }
        for i in 0..d {
            let mut w = Complex64::new(0.0, 0.0);
            for j in k..d {
                w += q.get(i, j) * v[j];
            }
            let scale = w * two_over;
            for j in k..d {
                let val = q.get(i, j) - scale * v[j].conj();
                q.set(i, j, val);
            }
        }
    }
    (q, r)
}

/// Entries of the state in a candidate basis, built directly from the
/// spectrum: Theta_ij = sum_k lambda_k U_ik conj(U_jk). Circulant when the
/// basis is the Fourier matrix.
#[derive(Debug, Clone)]
pub struct ThetaMatrix {
    entries: ComplexMatrix,
    spectrum: Spectrum,
    basis: UnitaryMatrix,
}

impl ThetaMatrix {
    pub fn new(lambda: &Spectrum, basis: &UnitaryMatrix) -> Result<Self> {
        let d = lambda.dim();
        if basis.dim() != d {
            return Err(Error::Shape(format!(
                "spectrum dimension {d} vs basis dimension {}",
                basis.dim()
            )));
        }
        let u = basis.matrix();
        let v = lambda.values();
        let entries = ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| v[k] * u.get(i, k) * u.get(j, k).conj())
                .sum()
        });
        let defect = entries.hermiticity_defect();
        if defect > THETA_SYMMETRY_TOL {
            return Err(Error::Numerical(format!(
                "transformed-state symmetry defect {defect:.3e} > {THETA_SYMMETRY_TOL:.0e}"
            )));
        }
        Ok(Self {
            entries,
            spectrum: lambda.clone(),
            basis: basis.clone(),
        })
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn basis(&self) -> &UnitaryMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }
}

/// Which coherence measure a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "r")]
    RelativeEntropy,
    #[serde(rename = "l2")]
    L2,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::L1 => write!(f, "l1"),
            Measure::RelativeEntropy => write!(f, "r"),
            Measure::L2 => write!(f, "l2"),
        }
    }
}

/// The chosen measure of U Lambda U^dag, computed without building the full
/// density matrix. This is the hot path of the random search.
pub fn measure_value(lambda: &Spectrum, u: &UnitaryMatrix, measure: Measure, base: LogBase) -> f64 {
    let d = lambda.dim();
    let v = lambda.values();
    let m = u.matrix();
    match measure {
        Measure::L1 | Measure::L2 => {
            let mut total = 0.0;
            for i in 0..d {
                for j in (i + 1)..d {
                    let mut t = Complex64::new(0.0, 0.0);
                    for k in 0..d {
                        t += v[k] * m.get(i, k) * m.get(j, k).conj();
                    }
                    total += match measure {
                        Measure::L1 => 2.0 * t.norm(),
                        _ => 2.0 * t.norm_sqr(),
                    };
                }
            }
            total
        }
        Measure::RelativeEntropy => {
            let mut diag = vec![0.0; d];
            for (i, slot) in diag.iter_mut().enumerate() {
                *slot = (0..d).map(|k| v[k] * m.get(i, k).norm_sqr()).sum();
            }
            (entropy_of_probs(&diag, base) - entropy_of_probs(v, base)).max(0.0)
        }
    }
}

/// Random-search configuration. Workers split the sample budget evenly;
/// worker `w` draws from stream `w` of the configured seed, so results are
/// deterministic for a fixed worker count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub top_k: usize,
    pub log_base: LogBase,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            workers: 1,
            top_k: 10,
            log_base: LogBase::Two,
        }
    }
}

/// Outcome of a seeded random-basis search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub samples: u64,
    pub best_value: f64,
    pub best_unitary: UnitaryMatrix,
    /// The analytic reference the samples are compared against.
    pub reference: f64,
    /// best_value - reference; positive margins are genuine exceedances.
    pub best_margin: f64,
    /// Samples whose value strictly exceeds the reference.
    pub violation_count: u64,
    /// Best values found, descending, at most `top_k` of them.
    pub top_values: Vec<f64>,
}

struct WorkerOutput {
    top: Vec<f64>,
    best_value: f64,
    best_unitary: Option<UnitaryMatrix>,
    violations: u64,
}

fn run_worker(
    lambda: &Spectrum,
    measure: Measure,
    base: LogBase,
    seed: u64,
    stream: u64,
    count: u64,
    top_k: usize,
    reference: f64,
) -> Result<WorkerOutput> {
    let d = lambda.dim();
    let mut rng = RngStream::new(seed, stream);
    let mut top: Vec<f64> = Vec::with_capacity(top_k + 1);
    let mut best_value = f64::NEG_INFINITY;
    let mut best_unitary = None;
    let mut violations = 0u64;

    for _ in 0..count {
        let u = sample_cue(d, &mut rng)?;
        let value = measure_value(lambda, &u, measure, base);
        if value > reference {
            violations += 1;
        }
        if value > best_value {
            best_value = value;
            best_unitary = Some(u);
        }
        let pos = top.partition_point(|&t| t >= value);
        if pos < top_k {
            top.insert(pos, value);
            top.truncate(top_k);
        }
    }
    Ok(WorkerOutput {
        top,
        best_value,
        best_unitary,
        violations,
    })
}

/// Maximize a coherence measure of U Lambda U^dag over `samples` CUE draws.
/// Records the best value and unitary, the top values, and the count of
/// samples strictly exceeding `reference`.
pub fn random_search(
    lambda: &Spectrum,
    measure: Measure,
    config: &SearchConfig,
    reference: f64,
) -> Result<SearchResult> {
    if config.samples == 0 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    if config.workers == 0 {
        return Err(Error::Domain("worker count must be >= 1".into()));
    }
    if config.top_k == 0 {
        return Err(Error::Domain("top-k must be >= 1".into()));
    }
    let workers = config.workers.min(config.samples as usize).max(1);
    let counts: Vec<u64> = (0..workers as u64)
        .map(|w| config.samples / workers as u64 + u64::from(w < config.samples % workers as u64))
        .collect();

    let outputs: Vec<WorkerOutput> = if workers == 1 {
        vec![run_worker(
            lambda,
            measure,
            config.log_base,
            config.seed,
            0,
            counts[0],
            config.top_k,
            reference,
        )?]
    } else {
        let results: Vec<Result<WorkerOutput>> = std::thread::scope(|scope| {
            let handles: Vec<_> = counts
                .iter()
                .enumerate()
                .map(|(w, &count)| {
                    let lambda = &*lambda;
                    scope.spawn(move || {
                        run_worker(
                            lambda,
                            measure,
                            config.log_base,
                            config.seed,
                            w as u64,
                            count,
                            config.top_k,
                            reference,
                        )
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        results.into_iter().collect::<Result<Vec<_>>>()?
    };

    // Deterministic merge: concatenate in worker order, stable-sort by value
    // descending (ties keep the lower worker), truncate.
    let mut top_values: Vec<f64> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_unitary: Option<UnitaryMatrix> = None;
    let mut violation_count = 0u64;
    for out in &outputs {
        top_values.extend_from_slice(&out.top);
        violation_count += out.violations;
    }
    top_values.sort_by(|a, b| b.partial_cmp(a).expect("finite measure values"));
    top_values.truncate(config.top_k);
    for out in outputs {
        if out.best_value > best_value {
            best_value = out.best_value;
            best_unitary = out.best_unitary;
        }
    }
    let best_unitary = best_unitary.expect("at least one sample");

    Ok(SearchResult {
        samples: config.samples,
        best_value,
        best_unitary,
        reference,
        best_margin: best_value - reference,
        violation_count,
        top_values,
    })
}

/// Max-norm residual of the first-order optimality condition for the l1
/// measure at the basis `u`:
///
///   sum_j Theta_jm Theta_kj / |Theta_jm| = sum_j Theta_kj Theta_jm / |Theta_kj|
///
/// over all (m, k). Terms whose denominator modulus falls below
/// `THETA_ZERO_TOL` are skipped on both sides symmetrically, so the
/// residual is vacuous for the maximally mixed state (all off-diagonals
/// vanish there).
pub fn stationarity_residual(lambda: &Spectrum, u: &UnitaryMatrix) -> Result<f64> {
    let theta = ThetaMatrix::new(lambda, u)?;
    let t = theta.entries();
    let d = theta.dim();
    let mut worst = 0.0_f64;
    for m in 0..d {
        for k in 0..d {
            let mut lhs = Complex64::new(0.0, 0.0);
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in 0..d {
                let tjm = t.get(j, m);
                let tkj = t.get(k, j);
                let njm = tjm.norm();
                let nkj = tkj.norm();
                if njm < THETA_ZERO_TOL || nkj < THETA_ZERO_TOL {
                    continue;
                }
                lhs += tjm * tkj / njm;
                rhs += tkj * tjm / nkj;
            }
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// `true` iff the entries depend only on (i - j) mod d within
/// `CIRCULANT_TOL`, with the first column matching the analytic values
/// Theta_n = (1/d) sum_k lambda_k omega^(nk) — whose n = 0 entry is the
/// uniform diagonal value 1/d. The maximum deviation is reported either way.
pub fn circulant_check(theta: &ThetaMatrix) -> (bool, f64) {
    let d = theta.dim();
    let t = theta.entries();
    let first_col: Vec<Complex64> = (0..d).map(|n| t.get(n, 0)).collect();
    let mut dev = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let n = (i + d - j) % d;
            dev = dev.max((t.get(i, j) - first_col[n]).norm());
        }
    }
    let v = theta.spectrum().values();
    for (n, &actual) in first_col.iter().enumerate() {
        let mut expected = Complex64::new(0.0, 0.0);
        for (k, &l) in v.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * ((n * k) % d) as f64 / d as f64;
            expected += l * Complex64::from_polar(1.0, angle);
        }
        expected /= d as f64;
        dev = dev.max((actual - expected).norm());
    }
    (dev <= CIRCULANT_TOL, dev)
}

/// Truncated exponential series; ample for the small anti-Hermitian steps
/// used in refinement (norms well below 1).
fn exp_series(m: &ComplexMatrix) -> ComplexMatrix {
    let d = m.dim();
    let mut result = ComplexMatrix::identity(d);
    let mut term = ComplexMatrix::identity(d);
    for n in 1..=24 {
        term = term.mul(m).expect("square matrices");
        let inv = 1.0 / (n as f64);
        term = ComplexMatrix::from_fn(d, |i, j| term.get(i, j) * inv);
        result = ComplexMatrix::from_fn(d, |i, j| result.get(i, j) + term.get(i, j));
    }
    result
}

/// Hill-climbing refinement of a basis: propose U exp(K) for small random
/// anti-Hermitian K, keep improvements of the target measure. The step
/// size (see [`DEFAULT_REFINE_STEP`]) halves after 100 consecutive
/// rejections. The result never scores below the starting point.
pub fn local_refine(
    lambda: &Spectrum,
    u0: &UnitaryMatrix,
    measure: Measure,
    base: LogBase,
    steps: u64,
    step_size: f64,
    rng: &mut RngStream,
) -> Result<UnitaryMatrix> {
    if lambda.dim() != u0.dim() {
        return Err(Error::Shape(format!(
            "spectrum dimension {} vs basis dimension {}",
            lambda.dim(),
            u0.dim()
        )));
    }
    let d = u0.dim();
    let mut current = u0.clone();
    let mut best = measure_value(lambda, &current, measure, base);
    let mut step = step_size;
    let mut rejections = 0u32;

    for _ in 0..steps {
        let g = ComplexMatrix::from_fn(d, |_, _| {
            let (re, im) = rng.normal_pair();
            Complex64::new(re, im)
        });
        // K = step * (G - G^dag)/2 is anti-Hermitian, so exp(K) is unitary.
        let k = ComplexMatrix::from_fn(d, |i, j| {
            (g.get(i, j) - g.get(j, i).conj()) * (0.5 * step)
        });
        let candidate = current.compose(&UnitaryMatrix::with_tolerance(
            exp_series(&k),
            1e-10,
        )?)?;
        let value = measure_value(lambda, &candidate, measure, base);
        if value > best {
            best = value;
            current = candidate;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= 100 {
                step *= 0.5;
                rejections = 0;
            }
        }
    }
    Ok(current)
}
