//! Dense statevector engine for `n` registers of prime dimension `q`, with
//! the quantum Fourier transform over Z_q and Born-rule measurement, plus
//! pure states of arbitrary dimension and their trace distance.
//!
//! Register ordering is big-endian: register 0 is the most significant
//! mixed-radix digit of the amplitude index, so `|a>_D |y>_A` reads
//! left-to-right.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldVector};
use crate::rng::complex_normal;
use crate::scalar::{modulus, norm_sqr, real, unit_phase, Complex, Real};
use crate::MAX_AMPLITUDES;

/// Default tolerance on `|norm^2 - 1|` and unitarity residuals.
pub fn default_tolerance<T: Real>() -> T {
    real(1e-10)
}

/// The primitive q-th root of unity and its powers, `omega^j = e^{2 pi i j / q}`.
#[derive(Debug, Clone)]
pub struct QftSpec<T: Real> {
    q: u64,
    powers: Vec<Complex<T>>,
}

impl<T: Real> QftSpec<T> {
    pub fn new(q: u64) -> Self {
        let powers = (0..q)
            .map(|j| {
                let theta = T::two_pi() * real::<T>(j as f64) / real::<T>(q as f64);
                unit_phase(theta)
            })
            .collect();
        QftSpec { q, powers }
    }

    pub fn omega(&self) -> Complex<T> {
        if self.q == 1 {
            Complex::new(T::one(), T::zero())
        } else {
            self.powers[1]
        }
    }

    /// `omega^(j k)`, reduced mod q before the table lookup.
    #[inline]
    fn power(&self, j: u64, k: u64) -> Complex<T> {
        self.powers[((j % self.q) * (k % self.q) % self.q) as usize]
    }
}

/// Dense state of `registers` qudits of dimension `q`; `q^registers` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amps: Vec<Complex<T>>,
    registers: usize,
    field: FieldDescriptor,
}

fn checked_len(q: u64, registers: usize) -> Result<usize> {
    let mut len: u128 = 1;
    for _ in 0..registers {
        len = len.saturating_mul(q as u128);
        if len > MAX_AMPLITUDES {
            return Err(Error::ResourceCap { requested: len, cap: MAX_AMPLITUDES });
        }
    }
    Ok(len as usize)
}

impl<T: Real> StateVector<T> {
    /// Computational basis state `|outcome>` (big-endian digit order).
    pub fn basis_state(field: FieldDescriptor, outcome: &FieldVector) -> Result<Self> {
        if outcome.field() != field {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: outcome.field().modulus(),
            });
        }
        let len = checked_len(field.modulus(), outcome.len())?;
        let mut amps = vec![Complex::zero(); len];
        let idx = mixed_radix_index(field.modulus(), &outcome.values());
        amps[idx] = Complex::new(T::one(), T::zero());
        Ok(StateVector { amps, registers: outcome.len(), field })
    }

    /// Builds a state from raw amplitudes, validating length and normalization.
    pub fn from_amplitudes(
        field: FieldDescriptor,
        registers: usize,
        amps: Vec<Complex<T>>,
    ) -> Result<Self> {
        let len = checked_len(field.modulus(), registers)?;
        if amps.len() != len {
            return Err(Error::DimensionMismatch { left: amps.len(), right: len });
        }
        let state = StateVector { amps, registers, field };
        state.check_normalized(real(1e-8))?;
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(
        field: FieldDescriptor,
        registers: usize,
        amps: Vec<Complex<T>>,
    ) -> Self {
        StateVector { amps, registers, field }
    }

    pub fn register_count(&self) -> usize {
        self.registers
    }

    pub fn register_dim(&self) -> u64 {
        self.field.modulus()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr_total(&self) -> T {
        self.amps.iter().map(norm_sqr).sum()
    }

    fn check_normalized(&self, tol: T) -> Result<()> {
        let dev = (self.norm_sqr_total() - T::one()).abs();
        if dev > tol {
            return Err(Error::NotNormalized {
                deviation: num_traits::ToPrimitive::to_f64(&dev).unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// The stored amplitude at a basis outcome.
    pub fn amplitude(&self, outcome: &FieldVector) -> Result<Complex<T>> {
        if outcome.len() != self.registers {
            return Err(Error::DimensionMismatch { left: outcome.len(), right: self.registers });
        }
        let idx = mixed_radix_index(self.field.modulus(), &outcome.values());
        if idx >= self.amps.len() {
            return Err(Error::IndexOutOfRange { index: idx, limit: self.amps.len() });
        }
        Ok(self.amps[idx])
    }

    /// QFT over Z_q on one register: `|a> -> (1/sqrt q) sum_b omega^(ab) |b>`.
    pub fn apply_qft(&self, register: usize) -> Result<Self> {
        self.apply_qft_signed(register, false)
    }

    /// Adjoint QFT on one register (`omega^(-ab)` kernel).
    pub fn apply_qft_inverse(&self, register: usize) -> Result<Self> {
        self.apply_qft_signed(register, true)
    }

    fn apply_qft_signed(&self, register: usize, inverse: bool) -> Result<Self> {
        if register >= self.registers {
            return Err(Error::IndexOutOfRange { index: register, limit: self.registers });
        }
        let q = self.field.modulus();
        let qu = q as usize;
        let spec = QftSpec::<T>::new(q);
        let stride = qu.pow((self.registers - 1 - register) as u32);
        let block = stride * qu;
        let scale = T::one() / real::<T>(q as f64).sqrt();
        let mut out = vec![Complex::zero(); self.amps.len()];
        for base in (0..self.amps.len()).step_by(block) {
            for low in 0..stride {
                for k in 0..q {
                    let mut acc: Complex<T> = Complex::zero();
                    for j in 0..q {
                        let w = if inverse {
                            spec.power(j, k).conj()
                        } else {
                            spec.power(j, k)
                        };
                        acc += w * self.amps[base + j as usize * stride + low];
                    }
                    out[base + k as usize * stride + low] = acc * scale;
                }
            }
        }
        Ok(StateVector { amps: out, registers: self.registers, field: self.field })
    }

    /// QFT applied to every register.
    pub fn apply_qft_all(&self) -> Result<Self> {
        let mut state = self.clone();
        for r in 0..self.registers {
            state = state.apply_qft(r)?;
        }
        Ok(state)
    }

    /// Born-rule measurement of all registers. The state is not mutated;
    /// callers resample or discard.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FieldVector> {
        self.check_normalized(real(1e-8))?;
        let u: T = crate::rng::uniform_unit(rng);
        let mut acc = T::zero();
        let mut drawn = 0usize;
        let mut last_support = 0usize;
        let mut hit = false;
        for (i, a) in self.amps.iter().enumerate() {
            let p = norm_sqr(a);
            if p > T::zero() {
                last_support = i;
            }
            acc += p;
            if u < acc {
                drawn = i;
                hit = true;
                break;
            }
        }
        if !hit {
            // Accumulated rounding can leave acc slightly below u.
            drawn = last_support;
        }
        let digits = mixed_radix_digits(self.field.modulus(), self.registers, drawn);
        FieldVector::from_values(self.field, &digits)
    }
}

/// Index of big-endian digits: `idx = ((d_0 q + d_1) q + ...) + d_{n-1}`.
pub fn mixed_radix_index(q: u64, digits: &[u64]) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// Big-endian digits of an index.
pub fn mixed_radix_digits(q: u64, registers: usize, mut index: usize) -> Vec<u64> {
    let mut digits = vec![0u64; registers];
    for slot in digits.iter_mut().rev() {
        *slot = (index % q as usize) as u64;
        index /= q as usize;
    }
    digits
}

/// A unit vector in `C^d`, the pure-state carrier for nets and channels.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Validates the Euclidean norm before accepting the amplitudes.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("pure state must have dimension >= 1"));
        }
        let n: T = amps.iter().map(norm_sqr).sum();
        let dev = (n - T::one()).abs();
        if dev > real(1e-8) {
            return Err(Error::NotNormalized {
                deviation: num_traits::ToPrimitive::to_f64(&dev).unwrap_or(f64::NAN),
            });
        }
        Ok(PureState { amps })
    }

    /// Rescales any nonzero vector onto the unit sphere.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("pure state must have dimension >= 1"));
        }
        let n: T = amps.iter().map(norm_sqr).sum::<T>().sqrt();
        if n <= T::zero() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        Ok(PureState { amps: amps.into_iter().map(|a| a / Complex::new(n, T::zero())).collect() })
    }

    /// Basis state `|k>` in `C^d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::IndexOutOfRange { index: k, limit: d });
        }
        let mut amps = vec![Complex::zero(); d];
        amps[k] = Complex::new(T::one(), T::zero());
        Ok(PureState { amps })
    }

    /// Haar-random pure state: a normalized complex Gaussian vector.
    pub fn haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        loop {
            let amps: Vec<Complex<T>> = (0..d).map(|_| complex_normal(rng)).collect();
            if let Ok(s) = Self::normalized(amps) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState<T>) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }
}

/// Trace norm of the difference of two rank-1 projectors:
/// `|| |psi><psi| - |phi><phi| ||_1 = 2 sqrt(1 - |<psi|phi>|^2)`.
pub fn trace_distance_pure<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> Result<T> {
    let overlap = psi.inner(phi)?;
    let gap = (T::one() - norm_sqr(&overlap)).max(T::zero());
    Ok(real::<T>(2.0) * gap.sqrt())
}

/// Max-modulus deviation helper used by unitarity/support checks.
pub fn max_abs_deviation<T: Real>(values: impl Iterator<Item = Complex<T>>) -> T {
    values.fold(T::zero(), |m, z| m.max(modulus(&z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use crate::rng::substream;
    use crate::stats;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    type C64 = Complex<f64>;

    fn random_state(q: u64, n: usize, seed: u64) -> StateVector<f64> {
        let field = make_field(q).unwrap();
        let len = (q as usize).pow(n as u32);
        let mut rng = substream(seed, "random-state", 0);
        let amps: Vec<C64> = (0..len).map(|_| complex_normal(&mut rng)).collect();
        let norm: f64 = amps.iter().map(norm_sqr).sum::<f64>().sqrt();
        let amps = amps.into_iter().map(|a| a / norm).collect();
        StateVector::from_amplitudes(field, n, amps).unwrap()
    }

    #[test]
    fn basis_state_places_single_amplitude() {
        let f2 = make_field(2).unwrap();
        let f3 = make_field(3).unwrap();

        let s = StateVector::<f64>::basis_state(f2, &FieldVector::from_values(f2, &[0]).unwrap())
            .unwrap();
        assert_eq!(s.amplitudes(), &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);

        let s = StateVector::<f64>::basis_state(f3, &FieldVector::from_values(f3, &[2]).unwrap())
            .unwrap();
        assert_eq!(s.amplitudes()[2], C64::new(1.0, 0.0));
        assert_eq!(s.amplitudes()[0], C64::new(0.0, 0.0));

        // Big-endian: |1,1> over q=2 sits at index 3.
        let s = StateVector::<f64>::basis_state(f2, &FieldVector::from_values(f2, &[1, 1]).unwrap())
            .unwrap();
        assert_eq!(s.amplitudes()[3], C64::new(1.0, 0.0));
    }

    #[test]
    fn qft_hadamard_case() {
        let f2 = make_field(2).unwrap();
        let zero = StateVector::<f64>::basis_state(f2, &FieldVector::from_values(f2, &[0]).unwrap())
            .unwrap();
        let h = zero.apply_qft(0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(h.amplitudes()[0].re, s, epsilon = 1e-12);
        assert_relative_eq!(h.amplitudes()[1].re, s, epsilon = 1e-12);
    }

    #[test]
    fn qft_q3_matches_definition() {
        let f3 = make_field(3).unwrap();
        let one = StateVector::<f64>::basis_state(f3, &FieldVector::from_values(f3, &[1]).unwrap())
            .unwrap();
        let t = one.apply_qft(0).unwrap();
        let w = QftSpec::<f64>::new(3).omega();
        let s = 1.0 / 3f64.sqrt();
        let expect = [C64::new(s, 0.0), w * s, w * w * s];
        for (a, e) in t.amplitudes().iter().zip(expect) {
            assert_relative_eq!(a.re, e.re, epsilon = 1e-12);
            assert_relative_eq!(a.im, e.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn qft_adjoint_restores_input() {
        let s = random_state(5, 2, 11);
        let restored = s.apply_qft(0).unwrap().apply_qft_inverse(0).unwrap();
        let dev: f64 = s
            .amplitudes()
            .iter()
            .zip(restored.amplitudes())
            .map(|(a, b)| norm_sqr(&(a - b)))
            .sum::<f64>()
            .sqrt();
        assert!(dev < 1e-10, "round trip deviation {dev}");
    }

    #[test]
    fn qft_preserves_normalization_for_random_states() {
        for q in [2u64, 3, 5, 7] {
            for n in 1..=4usize {
                if (q as usize).pow(n as u32) > 4096 {
                    continue;
                }
                let s = random_state(q, n, 100 + q + n as u64);
                let t = s.apply_qft_all().unwrap();
                assert!((t.norm_sqr_total() - 1.0).abs() < 1e-10, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn qft_matrix_columns_are_orthonormal() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = make_field(q).unwrap();
            let cols: Vec<StateVector<f64>> = (0..q)
                .map(|a| {
                    StateVector::basis_state(f, &FieldVector::from_values(f, &[a]).unwrap())
                        .unwrap()
                        .apply_qft(0)
                        .unwrap()
                })
                .collect();
            for (i, u) in cols.iter().enumerate() {
                for (j, v) in cols.iter().enumerate() {
                    let g: C64 = u
                        .amplitudes()
                        .iter()
                        .zip(v.amplitudes())
                        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (g.re - expect).abs() < 1e-10 && g.im.abs() < 1e-10,
                        "q={q} gram[{i}][{j}] = {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn measure_basis_state_is_deterministic() {
        let f2 = make_field(2).unwrap();
        let s = StateVector::<f64>::basis_state(f2, &FieldVector::from_values(f2, &[0]).unwrap())
            .unwrap();
        let mut rng = substream(3, "meas", 0);
        for _ in 0..100 {
            assert_eq!(s.measure_all(&mut rng).unwrap().values(), vec![0]);
        }
    }

    #[test]
    fn measure_bell_state_frequencies() {
        let f2 = make_field(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(
            f2,
            2,
            vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)],
        )
        .unwrap();
        let mut rng = substream(99, "bell", 0);
        const DRAWS: u64 = 100_000;
        let mut counts = [0u64; 4];
        for _ in 0..DRAWS {
            let outcome = bell.measure_all(&mut rng).unwrap();
            counts[mixed_radix_index(2, &outcome.values())] += 1;
        }
        assert_eq!(counts[1], 0);
        assert_eq!(counts[2], 0);
        let f00 = counts[0] as f64 / DRAWS as f64;
        let f11 = counts[3] as f64 / DRAWS as f64;
        assert!((f00 - 0.5).abs() < 0.01, "f00 = {f00}");
        assert!((f11 - 0.5).abs() < 0.01, "f11 = {f11}");
        // Chi-square against the Born distribution on the support.
        let observed = [counts[0], counts[3]];
        let expected = [DRAWS as f64 / 2.0, DRAWS as f64 / 2.0];
        assert!(stats::chi_square_ok(&observed, &expected));
    }

    #[test]
    fn measure_rejects_unnormalized() {
        let f2 = make_field(2).unwrap();
        let bad = StateVector::from_parts_unchecked(
            f2,
            1,
            vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
        );
        let mut rng = substream(1, "bad", 0);
        assert!(matches!(bad.measure_all(&mut rng), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn measure_matches_born_chi_square_on_random_state() {
        let s = random_state(5, 2, 4242);
        let mut rng = substream(4242, "born", 1);
        const DRAWS: u64 = 100_000;
        let mut counts = vec![0u64; 25];
        for _ in 0..DRAWS {
            let o = s.measure_all(&mut rng).unwrap();
            counts[mixed_radix_index(5, &o.values())] += 1;
        }
        let expected: Vec<f64> =
            s.amplitudes().iter().map(|a| norm_sqr(a) * DRAWS as f64).collect();
        assert!(stats::chi_square_ok(&counts, &expected));
    }

    #[test]
    fn amplitude_reads_back() {
        let f2 = make_field(2).unwrap();
        let one = FieldVector::from_values(f2, &[1]).unwrap();
        let zero = FieldVector::from_values(f2, &[0]).unwrap();
        let s = StateVector::<f64>::basis_state(f2, &one).unwrap();
        assert_eq!(s.amplitude(&one).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(s.amplitude(&zero).unwrap(), C64::new(0.0, 0.0));

        // Uniform two-register q=2 state reads 1/2 everywhere.
        let u = StateVector::from_amplitudes(f2, 2, vec![C64::new(0.5, 0.0); 4]).unwrap();
        for a in 0..2u64 {
            for b in 0..2u64 {
                let o = FieldVector::from_values(f2, &[a, b]).unwrap();
                assert_relative_eq!(u.amplitude(&o).unwrap().re, 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn trace_distance_endpoints() {
        let psi = PureState::<f64>::basis(2, 0).unwrap();
        let phi = PureState::<f64>::basis(2, 1).unwrap();
        assert_relative_eq!(trace_distance_pure(&psi, &psi).unwrap(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(trace_distance_pure(&psi, &phi).unwrap(), 2.0, epsilon = 1e-14);

        // Overlap 1/sqrt 2 gives 2 sqrt(1/2) = sqrt 2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mid = PureState::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        assert_relative_eq!(
            trace_distance_pure(&psi, &mid).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn trace_distance_agrees_with_singular_value_oracle() {
        use nalgebra::DMatrix;
        for trial in 0..100u64 {
            let d = 2 + (trial % 7) as usize; // dimensions 2..=8
            let mut rng = substream(trial, "tdp-oracle", 0);
            let psi = PureState::<f64>::haar(d, &mut rng);
            let phi = PureState::<f64>::haar(d, &mut rng);
            let m = DMatrix::from_fn(d, d, |i, j| {
                psi.amplitudes()[i] * psi.amplitudes()[j].conj()
                    - phi.amplitudes()[i] * phi.amplitudes()[j].conj()
            });
            let oracle: f64 = m.svd(false, false).singular_values.iter().sum();
            let fast = trace_distance_pure(&psi, &phi).unwrap();
            assert!((fast - oracle).abs() < 1e-8, "trial {trial}: {fast} vs {oracle}");
        }
    }

    proptest! {
        #[test]
        fn qft_is_norm_preserving(seed in 0u64..500) {
            let s = random_state(3, 2, seed);
            let t = s.apply_qft_all().unwrap();
            prop_assert!((t.norm_sqr_total() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn mixed_radix_round_trips(q in prop::sample::select(vec![2u64,3,5,7]), idx in 0usize..600) {
            let n = 4usize;
            let len = (q as usize).pow(n as u32);
            let idx = idx % len;
            let digits = mixed_radix_digits(q, n, idx);
            prop_assert_eq!(mixed_radix_index(q, &digits), idx);
        }
    }
}
