use std::collections::BTreeMap;

use num_complex::Complex;

use super::mode::{beam_splitter_image, control_rotation_image, Mode, Port, Statistics};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// A product of creation operators with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMonomial<T> {
    pub factors: Vec<Mode>,
    pub coefficient: Complex<T>,
    /// Particle labels, consulted only for distinguishable particles.
    pub labels: Option<Vec<usize>>,
}

impl<T: Real> FockMonomial<T> {
    pub fn new(factors: Vec<Mode>, coefficient: Complex<T>) -> Self {
        Self { factors, coefficient, labels: None }
    }

    pub fn labeled(factors: Vec<Mode>, labels: Vec<usize>, coefficient: Complex<T>) -> Self {
        assert_eq!(factors.len(), labels.len(), "one label per factor");
        Self { factors, coefficient, labels: Some(labels) }
    }

    /// Brings the monomial to canonical order.
    ///
    /// Bosonic factors commute and are sorted freely. Fermionic factors are
    /// sorted with a stable insertion sort whose transposition count sets the
    /// sign; a repeated mode zeroes the coefficient. Distinguishable factors
    /// are ordered by particle label, so afterwards position = label rank.
    pub fn canonicalize(mut self, statistics: Statistics) -> Self {
        match statistics {
            Statistics::Boson => {
                self.factors.sort();
                self.labels = None;
            }
            Statistics::Fermion => {
                let mut swaps = 0usize;
                for i in 1..self.factors.len() {
                    let mut j = i;
                    while j > 0 && self.factors[j - 1] > self.factors[j] {
                        self.factors.swap(j - 1, j);
                        swaps += 1;
                        j -= 1;
                    }
                }
                if swaps % 2 == 1 {
                    self.coefficient = -self.coefficient;
                }
                if self.factors.windows(2).any(|w| w[0] == w[1]) {
                    self.coefficient = Complex::new(T::zero(), T::zero());
                }
                self.labels = None;
            }
            Statistics::Distinguishable => {
                let labels = self.labels.take().unwrap_or_else(|| (0..self.factors.len()).collect());
                let mut pairs: Vec<(usize, Mode)> = labels.into_iter().zip(self.factors.iter().copied()).collect();
                pairs.sort_by_key(|p| p.0);
                self.factors = pairs.iter().map(|p| p.1).collect();
                self.labels = Some(pairs.iter().map(|p| p.0).collect());
            }
        }
        self
    }
}

/// Formal sum of canonical creation-operator monomials acting on the vacuum.
///
/// For distinguishable particles, factor position is the particle label.
#[derive(Debug, Clone, PartialEq)]
pub struct FockPolynomial<T> {
    terms: BTreeMap<Vec<Mode>, Complex<T>>,
    statistics: Statistics,
}

fn prune_tol<T: Real>() -> T {
    T::epsilon() * T::lit(16.0)
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

impl<T: Real> FockPolynomial<T> {
    pub fn zero(statistics: Statistics) -> Self {
        Self { terms: BTreeMap::new(), statistics }
    }

    /// The identity operator (vacuum state).
    pub fn vacuum(statistics: Statistics) -> Self {
        let mut p = Self::zero(statistics);
        p.terms.insert(Vec::new(), real(T::one()));
        p
    }

    /// `Σₖ cₖ a†ₖ`.
    pub fn linear(statistics: Statistics, modes: &[(Mode, Complex<T>)]) -> Self {
        let mut p = Self::zero(statistics);
        for (m, k) in modes {
            p.add_monomial(FockMonomial::new(vec![*m], *k));
        }
        p
    }

    pub fn creation(statistics: Statistics, mode: Mode) -> Self {
        Self::linear(statistics, &[(mode, real(T::one()))])
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Mode], Complex<T>)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// Coefficient of the canonical form of `factors` (sign-adjusted for fermions).
    pub fn coefficient(&self, factors: &[Mode]) -> Complex<T> {
        let m = FockMonomial::new(factors.to_vec(), real(T::one())).canonicalize(self.statistics);
        if m.coefficient.norm() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        self.terms.get(&m.factors).map_or(Complex::new(T::zero(), T::zero()), |c| c * m.coefficient)
    }

    pub fn add_monomial(&mut self, m: FockMonomial<T>) {
        let m = m.canonicalize(self.statistics);
        if m.coefficient.norm() == T::zero() {
            return;
        }
        let entry = self.terms.entry(m.factors).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *entry += m.coefficient;
        self.prune();
    }

    fn prune(&mut self) {
        let tol = prune_tol::<T>();
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_statistics(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            let entry = out.terms.entry(f.clone()).or_insert_with(|| Complex::new(T::zero(), T::zero()));
            *entry += c;
        }
        out.prune();
        Ok(out)
    }

    /// Operator product `self · other`; `other`'s particles get the higher labels.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_statistics(other)?;
        let mut out = Self::zero(self.statistics);
        for (f, c) in &self.terms {
            for (g, d) in &other.terms {
                let mut factors = f.clone();
                factors.extend_from_slice(g);
                out.add_monomial(FockMonomial::new(factors, c * d));
            }
        }
        Ok(out)
    }

    fn same_statistics(&self, other: &Self) -> Result<()> {
        if self.statistics != other.statistics {
            return Err(Error::Domain(format!(
                "cannot combine {} and {} polynomials",
                self.statistics, other.statistics
            )));
        }
        Ok(())
    }

    pub fn contains_port(&self, port: Port) -> bool {
        self.terms.keys().any(|f| f.iter().any(|m| m.port == port))
    }

    /// Replaces every factor by its linear image, expanding products in place
    /// so operator order (and hence fermionic sign bookkeeping) is preserved.
    pub fn substitute<F>(&self, image: F) -> Self
    where
        F: Fn(Mode) -> Option<Vec<(Mode, Complex<T>)>>,
    {
        let mut out = Self::zero(self.statistics);
        for (factors, coeff) in &self.terms {
            let mut partial: Vec<(Vec<Mode>, Complex<T>)> = vec![(Vec::with_capacity(factors.len()), *coeff)];
            for m in factors {
                let choices = image(*m).unwrap_or_else(|| vec![(*m, real(T::one()))]);
                partial = partial
                    .into_iter()
                    .flat_map(|(f, c)| {
                        choices.iter().map(move |(m2, k)| {
                            let mut f2 = f.clone();
                            f2.push(*m2);
                            (f2, c * k)
                        })
                    })
                    .collect();
            }
            for (f, c) in partial {
                let mono = match self.statistics {
                    // Position is the particle label; keep it.
                    Statistics::Distinguishable => {
                        let labels = (0..f.len()).collect();
                        FockMonomial::labeled(f, labels, c)
                    }
                    _ => FockMonomial::new(f, c),
                };
                out.add_monomial(mono);
            }
        }
        out
    }

    /// Statistics-aware `⟨0|p† p|0⟩`: distinct canonical monomials are
    /// orthogonal and a bosonic mode occupied `k` times contributes `k!`.
    pub fn norm_sqr(&self) -> T {
        self.terms
            .iter()
            .map(|(f, c)| c.norm_sqr() * occupation_weight::<T>(f, self.statistics))
            .fold(T::zero(), |a, b| a + b)
    }
}

pub(crate) fn occupation_weight<T: Real>(factors: &[Mode], statistics: Statistics) -> T {
    if statistics != Statistics::Boson {
        return T::one();
    }
    let mut weight = 1usize;
    let mut run = 1usize;
    for w in factors.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            weight *= factorial(run);
            run = 1;
        }
    }
    weight *= factorial(run);
    T::from_usize(weight).expect("small factorial")
}

/// Applies the 50:50 splitter to the input ports `a`, `b`; `c` is untouched.
pub fn beam_splitter_substitute<T: Real>(p: &FockPolynomial<T>) -> Result<FockPolynomial<T>> {
    if p.contains_port(Port::OutputA) || p.contains_port(Port::OutputB) {
        return Err(Error::Domain("state already contains output ports".into()));
    }
    Ok(p.substitute(beam_splitter_image::<T>))
}

/// Rotates the control spin by `e^{−iσ_y angle/2}` ahead of a σ_z readout.
pub fn rotate_control<T: Real>(p: &FockPolynomial<T>, angle: T) -> FockPolynomial<T> {
    p.substitute(|m| control_rotation_image(m, angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::mode::Spin;

    const A_UP: Mode = Mode::new(Port::InputA, Spin::Up);
    const A_DOWN: Mode = Mode::new(Port::InputA, Spin::Down);
    const B_DOWN: Mode = Mode::new(Port::InputB, Spin::Down);
    const B_UP: Mode = Mode::new(Port::InputB, Spin::Up);

    fn one() -> Complex<f64> {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn canonicalize_examples() {
        let m = FockMonomial::new(vec![B_DOWN, A_UP], one()).canonicalize(Statistics::Fermion);
        assert_eq!(m.factors, vec![A_UP, B_DOWN]);
        assert_eq!(m.coefficient, Complex::new(-1.0, 0.0));

        let m = FockMonomial::new(vec![B_DOWN, A_UP], one()).canonicalize(Statistics::Boson);
        assert_eq!(m.factors, vec![A_UP, B_DOWN]);
        assert_eq!(m.coefficient, one());

        let m = FockMonomial::new(vec![A_UP, A_UP], one()).canonicalize(Statistics::Fermion);
        assert_eq!(m.coefficient.norm(), 0.0);
    }

    #[test]
    fn distinguishable_canonical_order_follows_labels() {
        let m = FockMonomial::labeled(vec![B_DOWN, A_UP], vec![1, 0], one()).canonicalize(Statistics::Distinguishable);
        assert_eq!(m.factors, vec![A_UP, B_DOWN]);
        assert_eq!(m.labels, Some(vec![0, 1]));
    }

    #[test]
    fn fermion_three_cycle_is_even() {
        let c_up = Mode::new(Port::Control, Spin::Up);
        let m = FockMonomial::new(vec![c_up, A_UP, B_UP], one()).canonicalize(Statistics::Fermion);
        assert_eq!(m.factors, vec![A_UP, B_UP, c_up]);
        assert_eq!(m.coefficient, one());
    }

    #[test]
    fn single_particle_splits_evenly() {
        for stat in [Statistics::Boson, Statistics::Fermion] {
            let out = beam_splitter_substitute(&FockPolynomial::<f64>::creation(stat, A_UP)).unwrap();
            assert_eq!(out.len(), 2);
            for (_, c) in out.terms() {
                assert!((c.norm_sqr() - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn boson_pair_shows_hom_dip() {
        let pair = FockPolynomial::<f64>::creation(Statistics::Boson, A_UP)
            .mul(&FockPolynomial::creation(Statistics::Boson, B_UP))
            .unwrap();
        let out = beam_splitter_substitute(&pair).unwrap();
        let ab = out.coefficient(&[Mode::new(Port::OutputA, Spin::Up), Mode::new(Port::OutputB, Spin::Up)]);
        assert!(ab.norm() < 1e-15);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fermion_pair_antibunches() {
        let pair = FockPolynomial::<f64>::creation(Statistics::Fermion, A_UP)
            .mul(&FockPolynomial::creation(Statistics::Fermion, B_UP))
            .unwrap();
        let out = beam_splitter_substitute(&pair).unwrap();
        let a = Mode::new(Port::OutputA, Spin::Up);
        let b = Mode::new(Port::OutputB, Spin::Up);
        assert_eq!(out.coefficient(&[a, a]).norm(), 0.0);
        assert_eq!(out.coefficient(&[b, b]).norm(), 0.0);
        assert!((out.coefficient(&[a, b]).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn splitter_rejects_output_ports() {
        let p = FockPolynomial::<f64>::creation(Statistics::Boson, Mode::new(Port::OutputA, Spin::Up));
        assert!(matches!(beam_splitter_substitute(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let mut p = FockPolynomial::<f64>::zero(Statistics::Fermion);
        p.add_monomial(FockMonomial::new(vec![A_UP, B_DOWN], one()));
        p.add_monomial(FockMonomial::new(vec![B_DOWN, A_UP], one()));
        assert!(p.is_empty());
        let mut q = FockPolynomial::<f64>::zero(Statistics::Boson);
        q.add_monomial(FockMonomial::new(vec![A_DOWN, B_DOWN], one()));
        q.add_monomial(FockMonomial::new(vec![B_DOWN, A_DOWN], one()));
        assert_eq!(q.len(), 1);
        assert_eq!(q.coefficient(&[A_DOWN, B_DOWN]), Complex::new(2.0, 0.0));
    }

    #[test]
    fn bosonic_double_occupation_norm() {
        // (a†↑)²|0⟩ has norm² 2.
        let p = FockPolynomial::<f64>::creation(Statistics::Boson, A_UP);
        let sq = p.mul(&p).unwrap();
        assert!((sq.norm_sqr() - 2.0).abs() < 1e-15);
    }
}
