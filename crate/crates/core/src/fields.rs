//! Exact arithmetic over the prime field F_q and vectors over it.
//!
//! Everything here is integer math on `u64` residues; the centered modular
//! distance `min(r, q-r)` is the metric used by the test-candidate window.

use rand::Rng;

use crate::error::{Error, Result};

/// A verified prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    q: u64,
}

/// Deterministic trial-division primality; the moduli here are desk-scale.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k.checked_mul(k).is_some_and(|sq| sq <= n) {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Builds a [`FieldDescriptor`], rejecting composite moduli.
pub fn make_field(q: u64) -> Result<FieldDescriptor> {
    if q < 2 {
        return Err(Error::invalid(format!("modulus must be >= 2, got {q}")));
    }
    if !is_prime(q) {
        return Err(Error::CompositeModulus(q));
    }
    Ok(FieldDescriptor { q })
}

impl FieldDescriptor {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// The residue `v mod q` as a field element.
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement { value: v % self.q, field: *self }
    }

    /// Embeds a signed integer, reducing into `[0, q)`.
    pub fn element_from_i64(&self, v: i64) -> FieldElement {
        let q = self.q as i64;
        let mut r = v % q;
        if r < 0 {
            r += q;
        }
        FieldElement { value: r as u64, field: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    /// Uniform random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.random_range(0..self.q))
    }
}

/// A residue in `[0, q)` tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: FieldDescriptor,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert_eq!(
            self.field.q, other.field.q,
            "field elements from different moduli combined"
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        self.field.element((self.value + other.value) % self.field.q)
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        self.field
            .element((self.value + self.field.q - other.value) % self.field.q)
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let prod = (self.value as u128 * other.value as u128) % self.field.q as u128;
        self.field.element(prod as u64)
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element((self.field.q - self.value) % self.field.q)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by extended Euclid; `None` for zero.
    pub fn inverse(&self) -> Option<FieldElement> {
        if self.value == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.field.q as i128, self.value as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (s0, s1) = (s1, s0 - k * s1);
        }
        debug_assert_eq!(r0, 1, "modulus is prime, nonzero elements are units");
        let q = self.field.q as i128;
        let inv = ((s0 % q) + q) % q;
        Some(self.field.element(inv as u64))
    }

    /// Centered representative in `[-q/2, q/2]`.
    pub fn centered(&self) -> i64 {
        let q = self.field.q;
        if self.value > q / 2 {
            self.value as i64 - q as i64
        } else {
            self.value as i64
        }
    }
}

/// Centered modular distance `min((u-v) mod q, (v-u) mod q)`, in `[0, floor(q/2)]`.
pub fn centered_distance(u: &FieldElement, v: &FieldElement) -> Result<u64> {
    if u.field.q != v.field.q {
        return Err(Error::FieldMismatch { left: u.field.q, right: v.field.q });
    }
    let q = u.field.q;
    let fwd = (u.value + q - v.value) % q;
    let bwd = (v.value + q - u.value) % q;
    Ok(fwd.min(bwd))
}

/// An ordered, nonempty vector of elements sharing one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldVector {
    components: Vec<FieldElement>,
}

impl FieldVector {
    pub fn new(components: Vec<FieldElement>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::invalid("field vector must have length >= 1"))?;
        let q = first.field.q;
        if let Some(bad) = components.iter().find(|c| c.field.q != q) {
            return Err(Error::FieldMismatch { left: q, right: bad.field.q });
        }
        Ok(FieldVector { components })
    }

    /// Builds a vector from raw residues (each reduced mod q).
    pub fn from_values(field: FieldDescriptor, values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| field.element(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.components[0].field
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.components[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FieldElement> {
        self.components.iter()
    }

    pub fn values(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.value).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Componentwise sum.
    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        check_dims(self, other)?;
        Ok(FieldVector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Componentwise scaling by a field element.
    pub fn scale(&self, k: &FieldElement) -> FieldVector {
        FieldVector { components: self.components.iter().map(|a| a.mul(k)).collect() }
    }
}

fn check_dims(a: &FieldVector, x: &FieldVector) -> Result<()> {
    if a.len() != x.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: x.len() });
    }
    if a.field().q != x.field().q {
        return Err(Error::FieldMismatch { left: a.field().q, right: x.field().q });
    }
    Ok(())
}

/// Inner product `sum_j a_j x_j mod q`.
pub fn vec_dot(a: &FieldVector, x: &FieldVector) -> Result<FieldElement> {
    check_dims(a, x)?;
    let mut acc = a.field().zero();
    for (u, v) in a.components.iter().zip(&x.components) {
        acc = acc.add(&u.mul(v));
    }
    Ok(acc)
}

/// Uniform random vector of length `n >= 1` with independent components.
pub fn random_vector<R: Rng + ?Sized>(
    field: FieldDescriptor,
    n: usize,
    rng: &mut R,
) -> Result<FieldVector> {
    if n == 0 {
        return Err(Error::invalid("requested a random vector of length 0"));
    }
    FieldVector::new((0..n).map(|_| field.random_element(rng)).collect())
}
