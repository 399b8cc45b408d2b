//! Closed-form coherence quantities that depend only on the spectrum:
//! the relative-entropy and l2 maxima, the Fourier-basis l1 value O_d and
//! its permutation-maximized variant, and the basis-independent pair
//! C_P / C_F.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{shannon_entropy, LogBase, Spectrum};
use crate::search::RngStream;

/// Largest dimension for which the permutation maximum is enumerated
/// exhaustively (8! = 40320 evaluations).
pub const EXHAUSTIVE_PERMUTATION_CAP: usize = 8;

/// Every closed-form quantity for one spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub dimension: usize,
    pub log_base: LogBase,
    /// log d - S(lambda): the relative-entropy ceiling.
    pub c_r_max: f64,
    /// tr(rho^2) - 1/d: the l2 ceiling.
    pub c_l2_max: f64,
    /// Fourier-basis l1 value for the spectrum in descending order.
    pub o_d: f64,
    /// Maximum of O_d over spectrum permutations.
    pub o_d_tilde: f64,
    /// An argmax permutation for `o_d_tilde` (lexicographically smallest).
    pub o_d_tilde_permutation: Vec<usize>,
    /// sqrt[(d-1)(d tr(rho^2) - 1)].
    pub c_p: f64,
    /// Renormalized distance from the maximally mixed state; (d-1) C_F = C_P.
    pub c_f: f64,
}

/// log d - S(lambda) in the configured base.
pub fn cr_max(lambda: &Spectrum, base: LogBase) -> f64 {
    let d = lambda.dim() as f64;
    (base.log(d) - shannon_entropy(lambda, base)).max(0.0)
}

/// tr(rho^2) - 1/d.
pub fn cl2_max(lambda: &Spectrum) -> f64 {
    (lambda.purity() - 1.0 / lambda.dim() as f64).max(0.0)
}

/// The l1 norm of coherence of F_d Lambda F_d^dag, evaluated from the
/// spectrum alone:
///
///   O_d = sum_{n=1}^{d-1} sqrt( sum_i l_i^2
///         + sum_{k != l} l_k l_l cos[2 pi n (k - l) / d] ).
///
/// The spectrum is taken in its stored order; permutations change the value
/// for d >= 4.
pub fn o_d(lambda: &Spectrum) -> f64 {
    let d = lambda.dim();
    let v = lambda.values();
    let purity: f64 = v.iter().map(|x| x * x).sum();
    let mut total = 0.0;
    for n in 1..d {
        let mut arg = purity;
        for k in 0..d {
            for l in 0..d {
                if k != l {
                    let angle = 2.0 * std::f64::consts::PI * n as f64
                        * (k as f64 - l as f64)
                        / d as f64;
                    arg += v[k] * v[l] * angle.cos();
                }
            }
        }
        // The argument is |sum_k l_k omega^{nk}|^2, nonnegative up to rounding.
        total += arg.max(0.0).sqrt();
    }
    total
}

/// Qutrit closed form: sqrt(2) sqrt[(l0-l1)^2 + (l0-l2)^2 + (l1-l2)^2].
pub fn o3_closed(lambda: &Spectrum) -> Result<f64> {
    let v = lambda.values();
    if v.len() != 3 {
        return Err(Error::Domain(format!(
            "qutrit closed form needs d = 3, got d = {}",
            v.len()
        )));
    }
    let s = (v[0] - v[1]).powi(2) + (v[0] - v[2]).powi(2) + (v[1] - v[2]).powi(2);
    Ok((2.0 * s).sqrt())
}

/// d = 4 closed form:
/// 2 sqrt[(l0-l2)^2 + (l1-l3)^2] + |l0 - l1 + l2 - l3|.
pub fn o4_closed(lambda: &Spectrum) -> Result<f64> {
    let v = lambda.values();
    if v.len() != 4 {
        return Err(Error::Domain(format!(
            "d = 4 closed form needs d = 4, got d = {}",
            v.len()
        )));
    }
    let root = ((v[0] - v[2]).powi(2) + (v[1] - v[3]).powi(2)).sqrt();
    Ok(2.0 * root + (v[0] - v[1] + v[2] - v[3]).abs())
}

/// Values within this band of the maximum count as tied orderings;
/// mathematically equal permutations land well inside it, genuinely
/// different ones far outside.
const PERMUTATION_TIE_TOL: f64 = 1e-12;

/// Maximum of O_d over all d! orderings of the spectrum, with the
/// lexicographically smallest argmax permutation (ties resolved within
/// `PERMUTATION_TIE_TOL`, since symmetric orderings differ by rounding
/// only). Errors above the exhaustive cap; use [`o_d_tilde_sampled`] there.
pub fn o_d_tilde(lambda: &Spectrum) -> Result<(f64, Vec<usize>)> {
    let d = lambda.dim();
    if d > EXHAUSTIVE_PERMUTATION_CAP {
        return Err(Error::Capability(format!(
            "exhaustive permutation search capped at d = {EXHAUSTIVE_PERMUTATION_CAP} \
             ({}! evaluations); use the sampled-permutation mode for d = {d}",
            EXHAUSTIVE_PERMUTATION_CAP
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for perm in (0..d).permutations(d) {
        best = best.max(o_d(&lambda.permuted(&perm)?));
    }
    // Second pass in lexicographic order: the first permutation inside the
    // tie band is the lexicographically smallest argmax.
    for perm in (0..d).permutations(d) {
        if o_d(&lambda.permuted(&perm)?) >= best - PERMUTATION_TIE_TOL {
            return Ok((best, perm));
        }
    }
    unreachable!("the maximizing permutation is revisited in the second pass")
}

/// Seeded random-permutation estimate of the permutation maximum, for
/// dimensions above the exhaustive cap. Always includes the identity
/// ordering, so the result is >= O_d of the stored order.
pub fn o_d_tilde_sampled(
    lambda: &Spectrum,
    samples: u64,
    rng: &mut RngStream,
) -> Result<(f64, Vec<usize>)> {
    let d = lambda.dim();
    let identity: Vec<usize> = (0..d).collect();
    let mut best = o_d(lambda);
    let mut best_perm = identity.clone();
    for _ in 0..samples {
        let mut perm = identity.clone();
        rng.shuffle(&mut perm);
        let value = o_d(&lambda.permuted(&perm)?);
        if value > best {
            best = value;
            best_perm = perm;
        }
    }
    Ok((best, best_perm))
}

/// The pair (C_P, C_F):
/// C_P = sqrt[(d-1)(d tr(rho^2) - 1)] and C_F from its spectral form,
/// C_F = sqrt[ sum_{j,k} (l_j - l_k)^2 / (2(d-1)) ].
pub fn c_p_c_f(lambda: &Spectrum) -> (f64, f64) {
    let d = lambda.dim();
    if d == 1 {
        return (0.0, 0.0);
    }
    let df = d as f64;
    let c_p = ((df - 1.0) * (df * lambda.purity() - 1.0)).max(0.0).sqrt();
    let v = lambda.values();
    let mut pair_sum = 0.0;
    for j in 0..d {
        for k in 0..d {
            pair_sum += (v[j] - v[k]).powi(2);
        }
    }
    let c_f = (pair_sum / (2.0 * (df - 1.0))).sqrt();
    (c_p, c_f)
}

/// How the permutation maximum should be obtained.
#[derive(Debug, Clone, Copy)]
pub enum TildeMode {
    /// Enumerate all d! orderings (requires d <= the exhaustive cap).
    Exhaustive,
    /// Seeded random-permutation sampling for large d.
    Sampled { samples: u64, seed: u64 },
}

/// Compute every closed-form quantity for a spectrum. The spectrum is
/// brought to descending order first (the convention for reported values);
/// use [`o_d`] directly for explicit orderings.
pub fn analyze(lambda: &Spectrum, base: LogBase, tilde: TildeMode) -> Result<AnalyticReport> {
    let sorted = Spectrum::new(lambda.values().to_vec())?;
    let (o_tilde, perm) = match tilde {
        TildeMode::Exhaustive => o_d_tilde(&sorted)?,
        TildeMode::Sampled { samples, seed } => {
            o_d_tilde_sampled(&sorted, samples, &mut RngStream::new(seed, 0))?
        }
    };
    let (c_p, c_f) = c_p_c_f(&sorted);
    Ok(AnalyticReport {
        dimension: sorted.dim(),
        log_base: base,
        c_r_max: cr_max(&sorted, base),
        c_l2_max: cl2_max(&sorted),
        o_d: o_d(&sorted),
        o_d_tilde: o_tilde,
        o_d_tilde_permutation: perm,
        c_p,
        c_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier_matrix;
    use crate::linalg::DensityMatrix;
    use crate::measures::l1_coherence;
    use crate::search::random_spectrum;

    fn spec(values: &[f64]) -> Spectrum {
        Spectrum::in_given_order(values.to_vec()).unwrap()
    }

    #[test]
    fn cr_max_examples() {
        assert!(cr_max(&spec(&[0.25; 4]), LogBase::Two).abs() < 1e-12);
        assert!((cr_max(&spec(&[1.0, 0.0, 0.0]), LogBase::Two) - 3.0_f64.log2()).abs() < 1e-12);
        let expected = 3.0_f64.log2() - 1.485475;
        assert!((cr_max(&spec(&[0.5, 0.3, 0.2]), LogBase::Two) - expected).abs() < 1e-5);
    }

    #[test]
    fn cl2_max_examples() {
        assert!(cl2_max(&spec(&[1.0 / 3.0; 3])).abs() < 1e-12);
        assert!((cl2_max(&spec(&[1.0, 0.0])) - 0.5).abs() < 1e-12);
        assert!((cl2_max(&spec(&[0.5, 0.3, 0.2])) - (0.38 - 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn o_d_reference_values() {
        // Qubit: O_2 = |l0 - l1|.
        assert!((o_d(&spec(&[0.9, 0.1])) - 0.8).abs() < 1e-12);
        // Table value at d = 3.
        assert!((o_d(&spec(&[0.5, 0.3, 0.2])) - 0.529150).abs() < 1e-6);
        // Figure value at d = 4.
        assert!((o_d(&spec(&[0.4, 0.3, 0.2, 0.1])) - 0.765685).abs() < 1e-6);
    }

    #[test]
    fn closed_forms_match_direct_sum() {
        assert!((o3_closed(&spec(&[0.5, 0.3, 0.2])).unwrap() - (2.0 * 0.14_f64).sqrt()).abs() < 1e-12);
        assert!(o3_closed(&spec(&[1.0 / 3.0; 3])).unwrap().abs() < 1e-9);
        let o4 = o4_closed(&spec(&[0.4, 0.3, 0.2, 0.1])).unwrap();
        assert!((o4 - (2.0 * 0.08_f64.sqrt() + 0.2)).abs() < 1e-12);

        assert!(matches!(o3_closed(&spec(&[0.5, 0.5])), Err(Error::Domain(_))));
        assert!(matches!(o4_closed(&spec(&[0.5, 0.5])), Err(Error::Domain(_))));

        let mut rng = RngStream::new(8, 0);
        for _ in 0..200 {
            let s3 = random_spectrum(3, &mut rng).unwrap();
            assert!((o3_closed(&s3).unwrap() - o_d(&s3)).abs() < 1e-9);
            let s4 = random_spectrum(4, &mut rng).unwrap();
            assert!((o4_closed(&s4).unwrap() - o_d(&s4)).abs() < 1e-9);
        }
    }

    #[test]
    fn o3_is_permutation_symmetric() {
        let s = spec(&[0.5, 0.3, 0.2]);
        let reference = o_d(&s);
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let value = o_d(&s.permuted(&perm).unwrap());
            assert!((value - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn tilde_examples() {
        // d = 2: symmetric under swap.
        let (v2, _) = o_d_tilde(&spec(&[0.9, 0.1])).unwrap();
        assert!((v2 - 0.8).abs() < 1e-12);

        // d = 4 figure spectrum: descending order is already maximal and is
        // the lexicographically smallest argmax.
        let (v4, p4) = o_d_tilde(&spec(&[0.4, 0.3, 0.2, 0.1])).unwrap();
        assert!((v4 - 0.765685).abs() < 1e-6);
        assert_eq!(p4, vec![0, 1, 2, 3]);

        // d = 3: every ordering gives the same value.
        let mut rng = RngStream::new(3, 0);
        let s3 = random_spectrum(3, &mut rng).unwrap();
        let (v3, p3) = o_d_tilde(&s3).unwrap();
        assert!((v3 - o_d(&s3)).abs() < 1e-12);
        assert_eq!(p3, vec![0, 1, 2]);
    }

    #[test]
    fn tilde_respects_cap_and_sampled_mode_is_lower_bounded() {
        let uniform = spec(&[1.0 / 9.0; 9]);
        assert!(matches!(o_d_tilde(&uniform), Err(Error::Capability(_))));

        let mut rng = RngStream::new(77, 0);
        let s9 = random_spectrum(9, &mut rng).unwrap();
        let (v, _) = o_d_tilde_sampled(&s9, 200, &mut RngStream::new(1, 0)).unwrap();
        assert!(v >= o_d(&s9) - 1e-12);
    }

    #[test]
    fn cp_cf_examples_and_identity() {
        let (cp, cf) = c_p_c_f(&spec(&[0.25; 4]));
        assert!(cp.abs() < 1e-12 && cf.abs() < 1e-12);

        let (cp2, _) = c_p_c_f(&spec(&[0.9, 0.1]));
        assert!((cp2 - 0.8).abs() < 1e-12);
        assert!((cp2 - o_d(&spec(&[0.9, 0.1]))).abs() < 1e-12);

        let (cp3, _) = c_p_c_f(&spec(&[0.5, 0.3, 0.2]));
        assert!((cp3 - 0.529150).abs() < 1e-6);
        assert!((cp3 - o_d(&spec(&[0.5, 0.3, 0.2]))).abs() < 1e-9);

        let mut rng = RngStream::new(55, 0);
        for d in 2..=8 {
            let s = random_spectrum(d, &mut rng).unwrap();
            let (cp, cf) = c_p_c_f(&s);
            assert!((cp - (d as f64 - 1.0) * cf).abs() < 1e-10, "identity broken at d={d}");
        }
    }

    #[test]
    fn o_d_agrees_with_matrix_l1_oracle() {
        let mut rng = RngStream::new(1234, 0);
        for d in 2..=8 {
            let f = fourier_matrix(d).unwrap();
            for _ in 0..50 {
                let s = random_spectrum(d, &mut rng).unwrap();
                let rho = DensityMatrix::from_eigensystem(&s, f.unitary()).unwrap();
                assert!(
                    (o_d(&s) - l1_coherence(&rho)).abs() < 1e-9,
                    "analytic and matrix routes disagree at d={d}"
                );
            }
        }
    }

    #[test]
    fn pure_state_value_is_d_minus_1() {
        for d in 2..=8 {
            let mut values = vec![0.0; d];
            values[0] = 1.0;
            assert!((o_d(&spec(&values)) - (d as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn analyze_collects_consistent_report() {
        let s = spec(&[0.2, 0.5, 0.3]); // unsorted on purpose
        let report = analyze(&s, LogBase::Two, TildeMode::Exhaustive).unwrap();
        assert_eq!(report.dimension, 3);
        assert!((report.o_d - 0.529150).abs() < 1e-6);
        assert!(report.o_d_tilde >= report.o_d - 1e-12);
        assert!((report.c_p - 2.0 * report.c_f).abs() < 1e-10);
        assert!(report.c_r_max >= 0.0 && report.c_l2_max >= 0.0);
    }
}
