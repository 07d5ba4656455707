use num_complex::Complex;

use super::density::DensityMatrix;
use super::operator::SingleQubitOperator;
use crate::error::{Error, Result};
use crate::scalar::{frac_1_sqrt_2, real, Real};

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 24;

/// Outcome of a ±1-valued measurement. Serializes as the integer ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    pub fn sign<T: Real>(self) -> T {
        match self {
            Outcome::Plus => T::one(),
            Outcome::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        o.value()
    }
}

impl TryFrom<i8> for Outcome {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        Outcome::from_value(v).ok_or_else(|| Error::Argument(format!("outcome must be ±1, got {v}")))
    }
}

/// Result of a projective single-qubit measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement<T> {
    pub outcome: Outcome,
    /// Born-rule weight of `outcome`.
    pub probability: T,
    /// Renormalized post-measurement state.
    pub conditional: StateVector<T>,
}

/// Dense amplitude vector over an ordered register of spin-1/2 particles.
///
/// Qubit 0 is the most significant bit of the basis index and bit value 0
/// is |↑⟩. The three-particle registers are ordered (A, B, C) = (0, 1, 2);
/// in GHZ metrology registers the control particle is the highest index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity { requested: n, max: MAX_QUBITS });
    }
    Ok(())
}

impl<T: Real> StateVector<T> {
    /// Builds a state from explicit amplitudes; length and unit norm are checked.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_register(num_qubits)?;
        if amplitudes.len() != 1usize << num_qubits {
            return Err(Error::Dimension { len: amplitudes.len(), num_qubits });
        }
        let state = Self { num_qubits, amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::IDENTITY_TOL {
            return Err(Error::NotNormalized { norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(state)
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << num_qubits);
        Self { num_qubits, amplitudes }
    }

    /// Computational basis state with the given index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Argument(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = real(T::one());
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn up() -> Self {
        Self::from_raw(1, vec![real(T::one()), real(T::zero())])
    }

    pub fn down() -> Self {
        Self::from_raw(1, vec![real(T::zero()), real(T::one())])
    }

    /// |→⟩ = (|↑⟩ + |↓⟩)/√2.
    pub fn right() -> Self {
        let h = real(frac_1_sqrt_2::<T>());
        Self::from_raw(1, vec![h, h])
    }

    /// |←⟩ = (|↑⟩ − |↓⟩)/√2.
    pub fn left() -> Self {
        let h = real(frac_1_sqrt_2::<T>());
        Self::from_raw(1, vec![h, -h])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Euclidean norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    fn same_register(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension { len: other.dim(), num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        check_register(n)?;
        let mut amplitudes = Vec::with_capacity(1usize << n);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { num_qubits: n, amplitudes })
    }

    /// `Σ cₖ |ψₖ⟩`; the result must be normalized.
    pub fn superpose(terms: &[(Complex<T>, &Self)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Argument("empty superposition".into()))?;
        let n = first.1.num_qubits;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); first.1.dim()];
        for (k, psi) in terms {
            first.1.same_register(psi)?;
            for (acc, a) in amplitudes.iter_mut().zip(&psi.amplitudes) {
                *acc += k * a;
            }
        }
        Self::from_amplitudes(n, amplitudes)
    }

    /// Copy rotated by a global phase so the largest-magnitude amplitude
    /// (lowest index on ties) is real and positive.
    pub fn phase_fixed(&self) -> Self {
        let tie = T::IDENTITY_TOL;
        let mut best = 0;
        let mut best_mag = T::neg_infinity();
        for (i, a) in self.amplitudes.iter().enumerate() {
            let m = a.norm();
            if m > best_mag + tie {
                best = i;
                best_mag = m;
            }
        }
        let pivot = self.amplitudes[best];
        if pivot.norm() == T::zero() {
            return self.clone();
        }
        let rot = pivot.conj() / pivot.norm();
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * rot).collect(),
        }
    }

    /// Elementwise equality within `tol` after fixing the global phase.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: T) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        // Fix the phase of `other` relative to `self` via their overlap so
        // near-degenerate pivots cannot pick different reference amplitudes.
        let overlap = match self.inner(other) {
            Ok(o) => o,
            Err(_) => return false,
        };
        if overlap.norm() == T::zero() {
            return false;
        }
        let rot = overlap.conj() / overlap.norm();
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a - b * rot).norm() <= tol)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(Error::QubitIndex { index, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    #[inline]
    fn mask(&self, index: usize) -> usize {
        1usize << (self.num_qubits - 1 - index)
    }

    /// Applies an arbitrary 2×2 matrix to one qubit without renormalizing.
    pub(crate) fn apply_matrix(&self, index: usize, op: &SingleQubitOperator<T>) -> Self {
        let mask = self.mask(index);
        let mut out = self.amplitudes.clone();
        for i in 0..self.dim() {
            if i & mask == 0 {
                let [u, d] = op.apply([self.amplitudes[i], self.amplitudes[i | mask]]);
                out[i] = u;
                out[i | mask] = d;
            }
        }
        Self { num_qubits: self.num_qubits, amplitudes: out }
    }

    /// Applies a unitary to qubit `index`, leaving the other qubits untouched.
    pub fn apply_single_qubit(&self, index: usize, op: &SingleQubitOperator<T>) -> Result<Self> {
        self.check_index(index)?;
        if !op.is_unitary(T::IDENTITY_TOL) {
            return Err(Error::NotUnitary);
        }
        Ok(self.apply_matrix(index, op))
    }

    /// Applies `ops[k]` to qubit `k` for every listed qubit.
    pub fn apply_each(&self, ops: &[(usize, SingleQubitOperator<T>)]) -> Result<Self> {
        let mut s = self.clone();
        for (q, op) in ops {
            s = s.apply_single_qubit(*q, op)?;
        }
        Ok(s)
    }

    /// Projects qubit `index` onto the `outcome` eigenspace of a ±1 observable.
    ///
    /// Returns the Born weight and the renormalized branch, or `None` when the
    /// branch weight is below the selection threshold.
    pub fn project_qubit(
        &self,
        index: usize,
        basis: &SingleQubitOperator<T>,
        outcome: Outcome,
    ) -> Result<Option<(T, Self)>> {
        self.check_index(index)?;
        if !basis.is_plus_minus_observable(T::IDENTITY_TOL) {
            return Err(Error::NotPlusMinusObservable);
        }
        let projected = self.apply_matrix(index, &basis.projector(outcome == Outcome::Plus));
        let p = projected.norm_sqr();
        if p < T::BRANCH_TOL {
            return Ok(None);
        }
        let inv = real(T::one() / p.sqrt());
        Ok(Some((p, projected.scaled(inv))))
    }

    fn scaled(mut self, k: Complex<T>) -> Self {
        for a in self.amplitudes.iter_mut() {
            *a *= k;
        }
        self
    }

    /// Born-rule weight of `outcome` without renormalizing the branch.
    pub fn outcome_probability(
        &self,
        index: usize,
        basis: &SingleQubitOperator<T>,
        outcome: Outcome,
    ) -> Result<T> {
        self.check_index(index)?;
        if !basis.is_plus_minus_observable(T::IDENTITY_TOL) {
            return Err(Error::NotPlusMinusObservable);
        }
        Ok(self
            .apply_matrix(index, &basis.projector(outcome == Outcome::Plus))
            .norm_sqr())
    }

    /// Measures qubit `index` in the eigenbasis of `basis`.
    ///
    /// The +1 branch is selected when `random_draw` is below its probability.
    /// Branches with weight below the selection threshold are never chosen.
    pub fn measure_qubit(
        &self,
        index: usize,
        basis: &SingleQubitOperator<T>,
        random_draw: T,
    ) -> Result<Measurement<T>> {
        if !(random_draw >= T::zero() && random_draw < T::one()) {
            return Err(Error::Argument("random draw must lie in [0, 1)".into()));
        }
        let plus = self.project_qubit(index, basis, Outcome::Plus)?;
        let minus = self.project_qubit(index, basis, Outcome::Minus)?;
        let (outcome, branch) = match (plus, minus) {
            (Some(p), None) => (Outcome::Plus, p),
            (None, Some(m)) => (Outcome::Minus, m),
            (Some(p), Some(m)) => {
                if random_draw < p.0 {
                    (Outcome::Plus, p)
                } else {
                    (Outcome::Minus, m)
                }
            }
            (None, None) => return Err(Error::NotNormalized { norm_sqr: 0.0 }),
        };
        Ok(Measurement { outcome, probability: branch.0, conditional: branch.1 })
    }

    /// `⟨ψ| O₀ ⊗ O₁ ⊗ … |ψ⟩` for one Hermitian factor per qubit.
    pub fn expectation(&self, observable: &[SingleQubitOperator<T>]) -> Result<T> {
        if observable.len() != self.num_qubits {
            return Err(Error::Arity { factors: observable.len(), num_qubits: self.num_qubits });
        }
        if observable.iter().any(|o| !o.is_hermitian(T::IDENTITY_TOL)) {
            return Err(Error::NotHermitian);
        }
        let mut image = self.clone();
        for (q, op) in observable.iter().enumerate() {
            image = image.apply_matrix(q, op);
        }
        let value = self.inner(&image)?;
        if value.im.abs() > T::IDENTITY_TOL {
            return Err(Error::ComplexExpectation { residue: value.im.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(value.re)
    }

    /// Reduced density matrix of the qubits in `keep`, in register order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        if keep.is_empty() {
            return Err(Error::Argument("partial trace must keep at least one qubit".into()));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::Argument("duplicate qubit in keep set".into()));
        }
        for &q in &kept {
            self.check_index(q)?;
        }
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !kept.contains(q)).collect();
        let dk = 1usize << kept.len();
        let de = 1usize << traced.len();
        // psi[k][e]: amplitude with kept bits k and traced bits e.
        let mut psi = vec![Complex::new(T::zero(), T::zero()); dk * de];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let k = gather_bits(i, &kept, self.num_qubits);
            let e = gather_bits(i, &traced, self.num_qubits);
            psi[k * de + e] = *a;
        }
        let mut rho = vec![Complex::new(T::zero(), T::zero()); dk * dk];
        for r in 0..dk {
            for col in 0..dk {
                let mut acc = Complex::new(T::zero(), T::zero());
                for e in 0..de {
                    acc += psi[r * de + e] * psi[col * de + e].conj();
                }
                rho[r * dk + col] = acc;
            }
        }
        DensityMatrix::new(kept.len(), rho)
    }
}

/// Packs the bits of `index` belonging to `qubits` (in order, most significant first).
fn gather_bits(index: usize, qubits: &[usize], num_qubits: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> (num_qubits - 1 - q)) & 1))
}

/// `(|↑…↑⟩ + e^{iφ}|↓…↓⟩)/√2` on `n` qubits.
pub fn ghz_state<T: Real>(n: usize, phi: T) -> Result<StateVector<T>> {
    check_register(n)?;
    let dim = 1usize << n;
    let h = frac_1_sqrt_2::<T>();
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
    amplitudes[0] = real(h);
    amplitudes[dim - 1] = crate::scalar::cis(phi) * h;
    Ok(StateVector::from_raw(n, amplitudes))
}

/// Sign selecting one of the two relative Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// `(|↑↓⟩ ± e^{iφ}|↓↑⟩)/√2`.
pub fn bell_relative_state<T: Real>(phi: T, sign: Sign) -> StateVector<T> {
    let h = frac_1_sqrt_2::<T>();
    let z = Complex::new(T::zero(), T::zero());
    StateVector::from_raw(2, vec![z, real(h), crate::scalar::cis(phi) * (h * sign.value::<T>()), z])
}

/// `(|↑↓→⟩ + e^{iφ}|↓↑←⟩)/√2` on the register (A, B, C).
pub fn tripartite_spin_state<T: Real>(phi: T) -> StateVector<T> {
    let up_down = StateVector::<T>::basis(2, 0b01).expect("two-qubit basis state");
    let down_up = StateVector::<T>::basis(2, 0b10).expect("two-qubit basis state");
    let first = up_down.tensor(&StateVector::right()).expect("three qubits");
    let second = down_up.tensor(&StateVector::left()).expect("three qubits");
    let h = frac_1_sqrt_2::<T>();
    StateVector::superpose(&[(real(h), &first), (crate::scalar::cis(phi) * h, &second)])
        .expect("normalized by construction")
}
