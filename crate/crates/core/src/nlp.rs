//! The noisy-linear-problem pipeline: quantum sample preparation, the
//! Bernstein-Vazirani transform and candidate extraction, exact success
//! probabilities against the closed-form lower bound, the test-candidate
//! filter, and the full solve loop with its composite failure bound.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{centered_distance, random_vector, vec_dot, FieldDescriptor, FieldElement, FieldVector};
use crate::qstate::{mixed_radix_digits, StateVector};
use crate::rng::substream;
use crate::scalar::{norm_sqr, real, Complex, Real};

/// Retries on a zero ancilla outcome before a round is abandoned; the zero
/// outcome carries probability exactly 1/q, so 64 misses is unreachable.
const ZERO_ANCILLA_RETRIES: u32 = 64;

/// Noise distribution for the per-sample error `delta`.
///
/// Every kind keeps the centered magnitude of `delta` at or below `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Zero,
    BoundedUniform { t: u64 },
    TruncatedGaussian { t: u64, sigma: f64 },
}

impl NoiseModel {
    /// Maximum centered magnitude the model can emit.
    pub fn bound(&self) -> u64 {
        match self {
            NoiseModel::Zero => 0,
            NoiseModel::BoundedUniform { t } => *t,
            NoiseModel::TruncatedGaussian { t, .. } => *t,
        }
    }

    /// Rejects parameters whose acceptance window `2t+1` covers all of F_q.
    pub fn validate_for(&self, field: FieldDescriptor) -> Result<()> {
        let q = field.modulus();
        let t = self.bound();
        if 2 * t + 1 >= q {
            return Err(Error::BoundTooLarge { t, q });
        }
        if let NoiseModel::TruncatedGaussian { sigma, .. } = self {
            if !(*sigma > 0.0) {
                return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
            }
        }
        Ok(())
    }

    /// Draws one `delta`, reduced into `[0, q)`.
    pub fn sample<R: Rng + ?Sized>(&self, field: FieldDescriptor, rng: &mut R) -> FieldElement {
        match self {
            NoiseModel::Zero => field.zero(),
            NoiseModel::BoundedUniform { t } => {
                let k = rng.random_range(-(*t as i64)..=*t as i64);
                field.element_from_i64(k)
            }
            NoiseModel::TruncatedGaussian { t, sigma } => {
                let t = *t as i64;
                let weights: Vec<f64> =
                    (-t..=t).map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp()).collect();
                let total: f64 = weights.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (offset, w) in weights.iter().enumerate() {
                    u -= w;
                    if u < 0.0 {
                        return field.element_from_i64(-t + offset as i64);
                    }
                }
                field.element_from_i64(t)
            }
        }
    }
}

/// The prepared quantum sample: a uniform superposition of `|a>|a.x + delta_a>`
/// over all `a` in F_q^d, with the realized noise recorded per `a` so exact
/// probabilities can be computed later.
#[derive(Debug, Clone)]
pub struct SampleState<T: Real> {
    state: StateVector<T>,
    secret: FieldVector,
    noise_table: Vec<u64>,
    noise_bound: u64,
    dim: usize,
}

impl<T: Real> SampleState<T> {
    /// Fresh IID noise per `a`, drawn from `model`.
    pub fn prepare<R: Rng + ?Sized>(
        field: FieldDescriptor,
        dim: usize,
        secret: &FieldVector,
        model: &NoiseModel,
        rng: &mut R,
    ) -> Result<Self> {
        model.validate_for(field)?;
        let support = support_size(field, dim)?;
        let table: Vec<u64> =
            (0..support).map(|_| model.sample(field, rng).value()).collect();
        Self::with_noise_table_bound(field, dim, secret, table, model.bound())
    }

    /// Structured noise `delta_a = a . eta` for a fixed error vector.
    pub fn prepare_structured(
        field: FieldDescriptor,
        dim: usize,
        secret: &FieldVector,
        eta: &FieldVector,
    ) -> Result<Self> {
        if eta.len() != dim {
            return Err(Error::DimensionMismatch { left: eta.len(), right: dim });
        }
        let support = support_size(field, dim)?;
        let q = field.modulus();
        let table: Vec<u64> = (0..support)
            .map(|rank| {
                let a = FieldVector::from_values(field, &mixed_radix_digits(q, dim, rank))
                    .expect("digits are in range");
                vec_dot(&a, eta).expect("same field and length").value()
            })
            .collect();
        Self::with_noise_table(field, dim, secret, table)
    }

    /// Explicit noise table indexed by the big-endian rank of `a`; the
    /// declared bound is the largest centered magnitude in the table.
    pub fn with_noise_table(
        field: FieldDescriptor,
        dim: usize,
        secret: &FieldVector,
        table: Vec<u64>,
    ) -> Result<Self> {
        let q = field.modulus();
        let bound = table.iter().map(|&v| (v % q).min((q - v % q) % q)).max().unwrap_or(0);
        Self::with_noise_table_bound(field, dim, secret, table, bound)
    }

    fn with_noise_table_bound(
        field: FieldDescriptor,
        dim: usize,
        secret: &FieldVector,
        table: Vec<u64>,
        noise_bound: u64,
    ) -> Result<Self> {
        if secret.len() != dim {
            return Err(Error::DimensionMismatch { left: secret.len(), right: dim });
        }
        if secret.field() != field {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: secret.field().modulus(),
            });
        }
        let support = support_size(field, dim)?;
        if table.len() != support {
            return Err(Error::DimensionMismatch { left: table.len(), right: support });
        }
        let q = field.modulus();
        let len = support * q as usize;
        let amp = Complex::new(T::one() / real::<T>(support as f64).sqrt(), T::zero());
        let mut amps = vec![Complex::new(T::zero(), T::zero()); len];
        for (rank, &delta) in table.iter().enumerate() {
            let a = FieldVector::from_values(field, &mixed_radix_digits(q, dim, rank))?;
            let y = vec_dot(&a, secret)?.add(&field.element(delta));
            amps[rank * q as usize + y.value() as usize] = amp;
        }
        Ok(SampleState {
            state: StateVector::from_parts_unchecked(field, dim + 1, amps),
            secret: secret.clone(),
            noise_table: table,
            noise_bound,
            dim,
        })
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn secret(&self) -> &FieldVector {
        &self.secret
    }

    pub fn noise_table(&self) -> &[u64] {
        &self.noise_table
    }

    pub fn noise_bound(&self) -> u64 {
        self.noise_bound
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldDescriptor {
        self.state.field()
    }

    /// QFT on all `d+1` registers (the Bernstein-Vazirani kernel).
    pub fn bv_transform(&self) -> Result<StateVector<T>> {
        self.state.apply_qft_all()
    }
}

fn support_size(field: FieldDescriptor, dim: usize) -> Result<usize> {
    if dim == 0 {
        return Err(Error::invalid("sample dimension must be >= 1"));
    }
    let q = field.modulus() as u128;
    let mut support: u128 = 1;
    for _ in 0..dim {
        support = support.saturating_mul(q);
    }
    let total = support.saturating_mul(q);
    if total > crate::MAX_AMPLITUDES {
        return Err(Error::ResourceCap { requested: total, cap: crate::MAX_AMPLITUDES });
    }
    Ok(support as usize)
}

/// Inverts a measured `(b, c)` pair into the candidate `x' = -b c^{-1}`;
/// `None` when the ancilla outcome `c` is zero.
pub fn decode_candidate(b: &FieldVector, c: FieldElement) -> Option<FieldVector> {
    let inv = c.inverse()?;
    Some(b.scale(&inv.neg()))
}

/// Splits a measured outcome of `d+1` digits into `(b, c)`.
fn split_outcome(outcome: &FieldVector, dim: usize) -> (FieldVector, FieldElement) {
    let values = outcome.values();
    let b = FieldVector::from_values(outcome.field(), &values[..dim]).expect("dim >= 1");
    (b, outcome.field().element(values[dim]))
}

/// One measurement of an already-transformed sample.
fn measure_candidate<T: Real, R: Rng + ?Sized>(
    transformed: &StateVector<T>,
    dim: usize,
    rng: &mut R,
) -> Result<Option<FieldVector>> {
    let outcome = transformed.measure_all(rng)?;
    let (b, c) = split_outcome(&outcome, dim);
    Ok(decode_candidate(&b, c))
}

/// A full Bernstein-Vazirani round: transform, measure once, decode.
/// Returns `None` on the uninvertible `c = 0` outcome; callers retry.
pub fn bv_round<T: Real, R: Rng + ?Sized>(
    sample: &SampleState<T>,
    rng: &mut R,
) -> Result<Option<FieldVector>> {
    let transformed = sample.bv_transform()?;
    measure_candidate(&transformed, sample.dim, rng)
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha < T::zero() || alpha >= real(0.25) {
        return Err(Error::AlphaOutOfRange {
            alpha: num_traits::ToPrimitive::to_f64(&alpha).unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Closed-form lower bound `(alpha/t) cos^2(2 pi alpha)` on the single-round
/// success probability, valid for `alpha` in `[0, 1/4)` and `t >= 1`.
pub fn success_lower_bound<T: Real>(alpha: T, t: u64) -> Result<T> {
    check_alpha(alpha)?;
    if t == 0 {
        return Err(Error::invalid("the lower bound requires a noise bound t >= 1"));
    }
    let c = (real::<T>(2.0) * T::pi() * alpha).cos();
    Ok(alpha / real::<T>(t as f64) * c * c)
}

/// Probability mass on the outcomes `(-c x mod q, c)` for ancilla values
/// `1 <= c <= alpha q / t` (every `c != 0` when the sample is noiseless),
/// i.e. the exact chance that a single restricted measurement decodes the
/// true secret.
pub fn exact_success_probability<T: Real>(sample: &SampleState<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let q = sample.field().modulus();
    let c_max = if sample.noise_bound == 0 {
        q - 1
    } else {
        let cap = num_traits::ToPrimitive::to_f64(&alpha).unwrap_or(0.0) * q as f64
            / sample.noise_bound as f64;
        (cap.floor() as u64).min(q - 1)
    };
    success_mass(sample, c_max)
}

/// Probability that a single unrestricted measurement (any `c != 0`) decodes
/// the true secret.
pub fn exact_recovery_probability<T: Real>(sample: &SampleState<T>) -> Result<T> {
    let q = sample.field().modulus();
    success_mass(sample, q - 1)
}

fn success_mass<T: Real>(sample: &SampleState<T>, c_max: u64) -> Result<T> {
    let field = sample.field();
    let transformed = sample.bv_transform()?;
    let mut mass = T::zero();
    for c in 1..=c_max {
        let ce = field.element(c);
        // Outcome (-c x mod q, c), digit by digit.
        let mut digits: Vec<u64> =
            sample.secret.iter().map(|xj| xj.mul(&ce).neg().value()).collect();
        digits.push(c);
        let outcome = FieldVector::from_values(field, &digits)?;
        mass += norm_sqr(&transformed.amplitude(&outcome)?);
    }
    Ok(mass)
}

/// Classical acceptance test: draw `m_checks` fresh samples `(a', b')` from
/// the oracle and accept iff `|b' - a'.candidate|` stays within `t` on every
/// draw. The true secret always passes (noise is bounded by `t`); a wrong
/// candidate slips through with probability at most `((2t+1)/q)^M`.
pub fn test_candidate<R, F>(
    candidate: &FieldVector,
    m_checks: u32,
    mut oracle: F,
    t: u64,
    rng: &mut R,
) -> Result<bool>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Result<(FieldVector, FieldElement)>,
{
    if m_checks == 0 {
        return Err(Error::invalid("test-candidate repetition count M must be >= 1"));
    }
    for _ in 0..m_checks {
        let (a, b) = oracle(rng)?;
        let predicted = vec_dot(&a, candidate)?;
        if centered_distance(&b, &predicted)? > t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the per-round quantum sample realizes its noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplePreparation {
    /// Fresh IID `delta_a` per address `a`.
    Iid,
    /// One error vector `eta` per sample, `delta_a = a . eta`.
    StructuredEta,
}

/// A fixed problem instance: the hidden secret plus the sampling contract.
/// Acts as both the quantum-sample factory and the classical test oracle.
#[derive(Debug, Clone)]
pub struct NlpInstance {
    pub field: FieldDescriptor,
    pub dim: usize,
    pub secret: FieldVector,
    pub model: NoiseModel,
    pub preparation: SamplePreparation,
}

impl NlpInstance {
    pub fn new(
        field: FieldDescriptor,
        secret: FieldVector,
        model: NoiseModel,
        preparation: SamplePreparation,
    ) -> Result<Self> {
        model.validate_for(field)?;
        if secret.field() != field {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: secret.field().modulus(),
            });
        }
        Ok(NlpInstance { field, dim: secret.len(), secret, model, preparation })
    }

    /// A fresh quantum sample with new noise.
    pub fn quantum_sample<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SampleState<T>> {
        match self.preparation {
            SamplePreparation::Iid => {
                SampleState::prepare(self.field, self.dim, &self.secret, &self.model, rng)
            }
            SamplePreparation::StructuredEta => {
                let eta = FieldVector::new(
                    (0..self.dim).map(|_| self.model.sample(self.field, rng)).collect(),
                )?;
                SampleState::prepare_structured(self.field, self.dim, &self.secret, &eta)
            }
        }
    }

    /// A fresh classical sample `(a', a'.x + delta')` with IID noise.
    pub fn classical_sample<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<(FieldVector, FieldElement)> {
        let a = random_vector(self.field, self.dim, rng)?;
        let b = vec_dot(&a, &self.secret)?.add(&self.model.sample(self.field, rng));
        Ok((a, b))
    }
}

/// Solve-loop parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlpParams<T: Real> {
    /// Round budget L.
    pub rounds: u32,
    /// Test repetitions M per candidate.
    pub checks: u32,
    /// Noise bound t.
    pub noise_bound: u64,
    /// Support-size parameter `l` in the composite failure bound.
    pub support: u128,
    /// Bound parameter in `[0, 1/4)`.
    pub alpha: T,
    /// Target failure probability.
    pub eta: T,
}

impl<T: Real> NlpParams<T> {
    pub fn new(
        rounds: u32,
        checks: u32,
        noise_bound: u64,
        support: u128,
        alpha: T,
        eta: T,
    ) -> Result<Self> {
        if rounds == 0 || checks == 0 {
            return Err(Error::invalid("round budget L and test count M must be >= 1"));
        }
        if support == 0 {
            return Err(Error::invalid("support parameter l must be >= 1"));
        }
        check_alpha(alpha)?;
        if eta <= T::zero() || eta > T::one() {
            return Err(Error::invalid("eta must lie in (0, 1]"));
        }
        Ok(NlpParams { rounds, checks, noise_bound, support, alpha, eta })
    }

    /// The analyzed choice: `L = ceil(20 t ln(1/eta))` (natural log), `M = 1`,
    /// `l = q^dim`.
    pub fn auto(q: u64, dim: usize, noise_bound: u64, alpha: T, eta: T) -> Result<Self> {
        check_alpha(alpha)?;
        if eta <= T::zero() || eta >= T::one() {
            return Err(Error::invalid("eta must lie in (0, 1)"));
        }
        let l_real = real::<T>(20.0 * noise_bound as f64) * eta.recip().ln();
        let rounds =
            num_traits::ToPrimitive::to_f64(&l_real.ceil()).unwrap_or(1.0).max(1.0) as u32;
        let support = (q as u128).saturating_pow(dim as u32);
        Self::new(rounds, checks_auto(), noise_bound, support, alpha, eta)
    }
}

fn checks_auto() -> u32 {
    1
}

/// Composite failure bound for the solve loop over a dimension-`dim` secret:
/// `(1 - l/(20 t q^dim))^L + (3t/q)^M L`. Undefined at `t = 0`.
pub fn failure_bound<T: Real>(params: &NlpParams<T>, q: u64, dim: usize) -> Option<T> {
    if params.noise_bound == 0 {
        return None;
    }
    let qd = real::<T>(q as f64).powi(dim as i32);
    let ratio = real::<T>(params.support as f64)
        / (real::<T>(20.0 * params.noise_bound as f64) * qd);
    let base = (T::one() - ratio).max(T::zero()).min(T::one());
    let term1 = base.powi(params.rounds as i32);
    let term2 = (real::<T>(3.0 * params.noise_bound as f64) / real::<T>(q as f64))
        .powi(params.checks as i32)
        * real::<T>(params.rounds as f64);
    Some(term1 + term2)
}

/// Per-run outcome record.
#[derive(Debug, Clone)]
pub struct NlpRunReport<T: Real> {
    /// First candidate accepted by the test process, if any.
    pub recovered: Option<FieldVector>,
    /// Rounds consumed (equals the budget when nothing was accepted).
    pub rounds_used: u32,
    /// Accepted candidates per attempted round for this run.
    pub empirical_success_rate: T,
    /// `(alpha/t) cos^2(2 pi alpha)`, when `t >= 1`.
    pub paper_lower_bound: Option<T>,
    /// Composite failure bound, when `t >= 1`.
    pub paper_fail_bound: Option<T>,
    pub seed: u64,
}

/// Runs up to `L` rounds of sample -> transform -> measure -> decode, passing
/// every candidate through the test process; stops at the first acceptance.
/// Zero-ancilla measurements are retried inside the round rather than counted
/// as failures.
pub fn nlp_solve<T: Real>(
    params: &NlpParams<T>,
    instance: &NlpInstance,
    seed: u64,
) -> Result<NlpRunReport<T>> {
    if params.noise_bound < instance.model.bound() {
        return Err(Error::invalid(format!(
            "params declare t = {} but the instance noise model emits up to {}",
            params.noise_bound,
            instance.model.bound()
        )));
    }
    let mut recovered = None;
    let mut rounds_used = 0u32;
    for round in 0..params.rounds {
        let rng = &mut substream(seed, "nlp-round", u64::from(round));
        let sample: SampleState<T> = instance.quantum_sample(rng)?;
        let transformed = sample.bv_transform()?;
        rounds_used += 1;
        let mut candidate = None;
        for _ in 0..ZERO_ANCILLA_RETRIES {
            if let Some(c) = measure_candidate(&transformed, instance.dim, rng)? {
                candidate = Some(c);
                break;
            }
        }
        let Some(candidate) = candidate else { continue };
        let accepted = test_candidate(
            &candidate,
            params.checks,
            |r| instance.classical_sample(r),
            params.noise_bound,
            rng,
        )?;
        if accepted {
            recovered = Some(candidate);
            break;
        }
    }
    let success_rate = if recovered.is_some() {
        T::one() / real::<T>(f64::from(rounds_used))
    } else {
        T::zero()
    };
    Ok(NlpRunReport {
        recovered,
        rounds_used,
        empirical_success_rate: success_rate,
        paper_lower_bound: success_lower_bound(params.alpha, params.noise_bound).ok(),
        paper_fail_bound: failure_bound(params, instance.field.modulus(), instance.dim),
        seed,
    })
}
