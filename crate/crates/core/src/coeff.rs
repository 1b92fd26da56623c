//! Coefficient rings for base change: localizations `Z[1/S]` and truncated
//! p-adic integers `Z/p^N` with explicit precision tracking.

use std::{collections::BTreeSet, fmt};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::{
  binom::{binomial, valuation, BinomialPoly},
  error::{NumaError, Result},
  simplicial::NumSimplicialObject,
};

pub fn is_prime(p: u64) -> bool {
  if p < 2 {
    return false;
  }
  let mut d = 2;
  while d * d <= p {
    if p.is_multiple_of(d) {
      return false;
    }
    d += 1;
  }
  true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
  if is_prime(p) { Ok(()) } else { Err(NumaError::InvalidInput(format!("{p} is not prime"))) }
}

/// `v_p(n!) = sum_i floor(n / p^i)`.
pub fn factorial_valuation(n: u32, p: u64) -> u32 {
  let mut v = 0u64;
  let mut q = u64::from(n);
  while q > 0 {
    q /= p;
    v += q;
  }
  v as u32
}

pub fn is_p_integral(q: &BigRational, p: u64) -> bool { !q.denom().is_multiple_of(&BigInt::from(p)) }

/// An element of `Z_p` known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicApprox {
  pub p:         u64,
  #[serde(with = "crate::homalg::bigint_json")]
  pub residue:   BigInt,
  pub precision: u32,
}

impl PadicApprox {
  fn modulus_of(p: u64, precision: u32) -> BigInt { num_traits::pow(BigInt::from(p), precision as usize) }

  pub fn modulus(&self) -> BigInt { Self::modulus_of(self.p, self.precision) }

  pub fn from_integer(p: u64, n: &BigInt, precision: u32) -> Self {
    PadicApprox { p, residue: n.mod_floor(&Self::modulus_of(p, precision)), precision }
  }

  /// Fails when the denominator is divisible by `p`.
  pub fn from_rational(p: u64, q: &BigRational, precision: u32) -> Result<Self> {
    if !is_p_integral(q, p) {
      return Err(NumaError::InvalidInput(format!("{q} is not {p}-integral")));
    }
    let m = Self::modulus_of(p, precision);
    let eg = q.denom().extended_gcd(&m);
    Ok(Self::from_integer(p, &(q.numer() * eg.x), precision))
  }

  /// An integer at the same prime and precision as `self`.
  pub fn lift_integer(&self, n: &BigInt) -> Self { Self::from_integer(self.p, n, self.precision) }

  fn same_prime(&self, o: &PadicApprox) -> Result<()> {
    if self.p != o.p {
      return Err(NumaError::InvalidInput(format!("mixing {}-adic and {}-adic values", self.p, o.p)));
    }
    Ok(())
  }

  pub fn add(&self, o: &PadicApprox) -> Result<PadicApprox> {
    self.same_prime(o)?;
    Ok(Self::from_integer(self.p, &(&self.residue + &o.residue), self.precision.min(o.precision)))
  }

  pub fn sub(&self, o: &PadicApprox) -> Result<PadicApprox> {
    self.same_prime(o)?;
    Ok(Self::from_integer(self.p, &(&self.residue - &o.residue), self.precision.min(o.precision)))
  }

  pub fn mul(&self, o: &PadicApprox) -> Result<PadicApprox> {
    self.same_prime(o)?;
    Ok(Self::from_integer(self.p, &(&self.residue * &o.residue), self.precision.min(o.precision)))
  }

  pub fn neg(&self) -> PadicApprox { Self::from_integer(self.p, &-&self.residue, self.precision) }

  /// `C(self, k)`, known to `precision - v_p(k!)` digits.
  ///
  /// Changing the representative by a multiple of `p^N` moves `C(r, k)` by
  /// terms `C(p^N t, j) C(r, k - j)` with `j >= 1`, each divisible by
  /// `p^{N - v_p(j)}`.
  pub fn binom(&self, k: u32) -> Result<PadicApprox> {
    let lost = factorial_valuation(k, self.p);
    if lost >= self.precision {
      return Err(NumaError::PrecisionExhausted { needed: lost + 1, available: self.precision });
    }
    Ok(Self::from_integer(self.p, &binomial(&self.residue, k), self.precision - lost))
  }

  /// Equality modulo the smaller of the two precisions.
  pub fn congruent(&self, o: &PadicApprox) -> bool {
    let n = self.precision.min(o.precision);
    self.p == o.p && (&self.residue - &o.residue).is_multiple_of(&Self::modulus_of(self.p, n))
  }

  /// `None` for a value indistinguishable from zero.
  pub fn valuation(&self) -> Option<u32> {
    if self.residue.is_zero() { None } else { valuation(&self.residue, self.p) }
  }
}

impl fmt::Display for PadicApprox {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{} mod {}^{}", self.residue, self.p, self.precision) }
}

/// Target ring of a base change.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffRing {
  /// `Z[1/S]`; an empty set gives `Z`.
  Localization { inverted: BTreeSet<u64> },
  PadicTruncated { p: u64, precision: u32 },
}

impl CoeffRing {
  pub fn localization(primes: &[u64]) -> Result<Self> {
    for &p in primes {
      check_prime(p)?;
    }
    let inverted: BTreeSet<u64> = primes.iter().copied().collect();
    if inverted.len() != primes.len() {
      return Err(NumaError::InvalidInput("repeated prime in localization".into()));
    }
    Ok(CoeffRing::Localization { inverted })
  }

  pub fn padic(p: u64, precision: u32) -> Result<Self> {
    check_prime(p)?;
    if precision == 0 {
      return Err(NumaError::InvalidInput("p-adic precision must be at least 1".into()));
    }
    Ok(CoeffRing::PadicTruncated { p, precision })
  }

  /// Membership of a rational in `Z[1/S]`.
  pub fn contains_rational(&self, q: &BigRational) -> bool {
    match self {
      CoeffRing::Localization { inverted } => {
        let mut d = q.denom().abs();
        for &p in inverted {
          let bp = BigInt::from(p);
          while d.is_multiple_of(&bp) {
            d /= &bp;
          }
        }
        d.is_one()
      }
      CoeffRing::PadicTruncated { p, .. } => is_p_integral(q, *p),
    }
  }

  pub fn random_element<R: Rng>(&self, rng: &mut R) -> RElem {
    match self {
      CoeffRing::Localization { inverted } => {
        let num = BigInt::from(rng.gen_range(-1000i64..=1000));
        let mut den = BigInt::one();
        for &p in inverted {
          den *= num_traits::pow(BigInt::from(p), rng.gen_range(0..4usize));
        }
        RElem::Rational(BigRational::new(num, den))
      }
      CoeffRing::PadicTruncated { p, precision } => {
        let m = PadicApprox::modulus_of(*p, *precision);
        let r = BigInt::from(rng.gen::<u64>()).mod_floor(&m);
        RElem::Padic(PadicApprox::from_integer(*p, &r, *precision))
      }
    }
  }
}

impl std::str::FromStr for CoeffRing {
  type Err = NumaError;

  /// `localize:2,3`, `integers`, or `padic:p:N`.
  fn from_str(s: &str) -> Result<Self> {
    let bad = || NumaError::InvalidInput(format!("unknown coefficient ring {s:?}"));
    if s == "integers" {
      return Self::localization(&[]);
    }
    if let Some(list) = s.strip_prefix("localize:") {
      let primes = list.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
      return Self::localization(&primes);
    }
    if let Some(rest) = s.strip_prefix("padic:") {
      let (p, n) = rest.split_once(':').ok_or_else(bad)?;
      return Self::padic(p.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
    }
    Err(bad())
  }
}

/// An element of a [`CoeffRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RElem {
  Rational(BigRational),
  Padic(PadicApprox),
}

impl RElem {
  pub fn precision(&self) -> Option<u32> {
    match self {
      RElem::Rational(_) => None,
      RElem::Padic(a) => Some(a.precision),
    }
  }

  /// Equality, up to the common precision for p-adic values.
  pub fn agrees(&self, o: &RElem) -> bool {
    match (self, o) {
      (RElem::Rational(a), RElem::Rational(b)) => a == b,
      (RElem::Padic(a), RElem::Padic(b)) => a.congruent(b),
      _ => false,
    }
  }
}

impl fmt::Display for RElem {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      RElem::Rational(q) => write!(f, "{q}"),
      RElem::Padic(a) => write!(f, "{a}"),
    }
  }
}

/// Evaluates a numerical polynomial at a point of `R^k`.
pub fn evaluate_in(ring: &CoeffRing, f: &BinomialPoly, point: &[RElem]) -> Result<RElem> {
  if point.len() != f.nvars() {
    return Err(NumaError::ArityMismatch { expected: f.nvars(), found: point.len() });
  }
  match ring {
    CoeffRing::Localization { .. } => {
      let qs = point
        .iter()
        .map(|e| match e {
          RElem::Rational(q) if ring.contains_rational(q) => Ok(q.clone()),
          other => Err(NumaError::InvalidInput(format!("{other} is not in the coefficient ring"))),
        })
        .collect::<Result<Vec<_>>>()?;
      let v = f.evaluate_rational(&qs)?;
      if !ring.contains_rational(&v) {
        return Err(NumaError::InconsistentData(format!("value {v} left the coefficient ring")));
      }
      Ok(RElem::Rational(v))
    }
    CoeffRing::PadicTruncated { p, precision } => {
      let xs = point
        .iter()
        .map(|e| match e {
          RElem::Padic(a) if a.p == *p => Ok(a.clone()),
          other => Err(NumaError::InvalidInput(format!("{other} is not a {p}-adic value"))),
        })
        .collect::<Result<Vec<_>>>()?;
      let mut acc = PadicApprox::from_integer(*p, &BigInt::zero(), *precision);
      for (idx, c) in f.terms() {
        let mut term = PadicApprox::from_integer(*p, c, *precision);
        for (x, &n) in xs.iter().zip(idx.entries()) {
          if n > 0 {
            term = term.mul(&x.binom(n)?)?;
          }
        }
        acc = acc.add(&term)?;
      }
      Ok(RElem::Padic(acc))
    }
  }
}

/// The simplicial set of `R`-points of a numerical simplicial object.
#[derive(Clone, Debug)]
pub struct TensorR<'a> {
  pub object: &'a NumSimplicialObject,
  pub ring:   CoeffRing,
}

pub fn tensor_r(object: &NumSimplicialObject, ring: CoeffRing) -> TensorR<'_> { TensorR { object, ring } }

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RIdentityReport {
  pub checked:       usize,
  pub failures:      Vec<String>,
  /// Smallest p-adic precision seen in any output.
  pub min_precision: Option<u32>,
}

impl RIdentityReport {
  pub fn passed(&self) -> bool { self.failures.is_empty() }
}

impl TensorR<'_> {
  fn apply(&self, maps: &[BinomialPoly], point: &[RElem]) -> Result<Vec<RElem>> {
    maps.iter().map(|m| evaluate_in(&self.ring, m, point)).collect()
  }

  pub fn face(&self, n: usize, i: usize, point: &[RElem]) -> Result<Vec<RElem>> { self.apply(self.object.face(n, i), point) }

  pub fn degeneracy(&self, n: usize, i: usize, point: &[RElem]) -> Result<Vec<RElem>> {
    self.apply(self.object.degeneracy(n, i), point)
  }

  pub fn random_point<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<RElem> {
    (0..self.object.level_dim(n)).map(|_| self.ring.random_element(rng)).collect()
  }

  /// Checks the simplicial identities on random `R`-points of every level.
  pub fn check_identities<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<RIdentityReport> {
    let mut rep = RIdentityReport::default();
    let same = |a: &[RElem], b: &[RElem]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.agrees(y));
    let note = |rep: &mut RIdentityReport, v: &[RElem]| {
      for e in v {
        if let Some(p) = e.precision() {
          rep.min_precision = Some(rep.min_precision.map_or(p, |m| m.min(p)));
        }
      }
    };
    let n_max = self.object.n_max;
    for _ in 0..samples {
      for n in 0..=n_max {
        let x = self.random_point(n, rng);
        // d_i d_j = d_{j-1} d_i, i < j
        if n >= 2 {
          for j in 1..=n {
            for i in 0..j {
              let lhs = self.face(n - 1, i, &self.face(n, j, &x)?)?;
              let rhs = self.face(n - 1, j - 1, &self.face(n, i, &x)?)?;
              rep.checked += 1;
              note(&mut rep, &lhs);
              if !same(&lhs, &rhs) {
                rep.failures.push(format!("d{i} d{j} at level {n}"));
              }
            }
          }
        }
        if n < n_max {
          for j in 0..=n {
            let sx = self.degeneracy(n, j, &x)?;
            for i in 0..=n + 1 {
              let lhs = self.face(n + 1, i, &sx)?;
              let rhs = if i == j || i == j + 1 {
                x.clone()
              } else if i < j {
                self.degeneracy(n - 1, j - 1, &self.face(n, i, &x)?)?
              } else {
                self.degeneracy(n - 1, j, &self.face(n, i - 1, &x)?)?
              };
              rep.checked += 1;
              note(&mut rep, &lhs);
              if !same(&lhs, &rhs) {
                rep.failures.push(format!("d{i} s{j} at level {n}"));
              }
            }
            if n + 1 < n_max {
              for i in 0..=j {
                let lhs = self.degeneracy(n + 1, i, &sx)?;
                let rhs = self.degeneracy(n + 1, j + 1, &self.degeneracy(n, i, &x)?)?;
                rep.checked += 1;
                if !same(&lhs, &rhs) {
                  rep.failures.push(format!("s{i} s{j} at level {n}"));
                }
              }
            }
          }
        }
      }
    }
    Ok(rep)
  }
}

/// Samples a rational with numerator and denominator bounded by `bound`,
/// denominator prime to `p`.
pub fn random_p_integral<R: Rng>(rng: &mut R, p: u64, bound: i64) -> BigRational {
  loop {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    if !(d as u64).is_multiple_of(p) {
      return BigRational::new(BigInt::from(n), BigInt::from(d));
    }
  }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityCertificate {
  pub p:                     u64,
  /// The binomial-basis coefficients are integers.
  pub integral_coefficients: bool,
  pub samples:               usize,
  pub failures:              Vec<String>,
}

impl IntegralityCertificate {
  pub fn passed(&self) -> bool { self.integral_coefficients && self.failures.is_empty() }
}

/// Checks that `f` maps `Z_(p)`-points to `Z_(p)`.
///
/// Integer binomial coordinates already imply this; the sampled points
/// check it independently through exact rational evaluation.
pub fn certify_p_integral<R: Rng>(f: &BinomialPoly, p: u64, samples: usize, rng: &mut R) -> Result<IntegralityCertificate> {
  check_prime(p)?;
  let mut failures = Vec::new();
  for _ in 0..samples {
    let point: Vec<BigRational> = (0..f.nvars()).map(|_| random_p_integral(rng, p, 1_000_000)).collect();
    let v = f.evaluate_rational(&point)?;
    if !is_p_integral(&v, p) {
      let pt: Vec<String> = point.iter().map(ToString::to_string).collect();
      failures.push(format!("value {v} at ({})", pt.join(", ")));
    }
  }
  Ok(IntegralityCertificate { p, integral_coefficients: true, samples, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MahlerEntry {
  pub k:           u32,
  #[serde(with = "crate::homalg::bigint_json")]
  pub coefficient: BigInt,
  /// `None` for a zero coefficient.
  pub valuation:   Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MahlerProfile {
  pub p:             u64,
  pub entries:       Vec<MahlerEntry>,
  /// Valuations never decrease (zero counts as infinite).
  pub nondecreasing: bool,
}

/// Mahler coefficients `c_k = (Δ^k f)(0)` and their p-adic valuations.
pub fn mahler_profile<F>(f: F, p: u64, k_max: u32) -> Result<MahlerProfile>
where
  F: Fn(&BigInt) -> Result<BigInt>,
{
  check_prime(p)?;
  let values = (0..=k_max).map(|i| f(&BigInt::from(i))).collect::<Result<Vec<_>>>()?;
  let mut row = values;
  let mut entries = Vec::new();
  for k in 0..=k_max {
    let c = row[0].clone();
    entries.push(MahlerEntry { k, valuation: valuation(&c, p), coefficient: c });
    row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
  }
  let nondecreasing = entries.windows(2).all(|w| match (w[0].valuation, w[1].valuation) {
    (_, None) => true,
    (None, Some(_)) => false,
    (Some(a), Some(b)) => a <= b,
  });
  Ok(MahlerProfile { p, entries, nondecreasing })
}

#[cfg(test)]
mod tests {
  use num_traits::ToPrimitive;
  use rand::{rngs::StdRng, SeedableRng};

  use super::*;

  fn q(n: i64, d: i64) -> BigRational { BigRational::new(BigInt::from(n), BigInt::from(d)) }

  fn factorial_valuation_direct(k: u32, p: u64) -> u32 { valuation(&crate::binom::factorial(k), p).unwrap_or(0) }

  #[test]
  fn factorial_valuations() {
    for p in [2, 3, 5, 7] {
      for k in 0..40 {
        assert_eq!(factorial_valuation(k, p), factorial_valuation_direct(k, p));
      }
    }
  }

  #[test]
  fn padic_binomial_precision() {
    let a = PadicApprox::from_rational(3, &q(1, 2), 5).unwrap();
    assert_eq!(a.residue, BigInt::from(122));
    let c = a.binom(3).unwrap();
    assert_eq!(c.precision, 4);
    // C(1/2, 3) = 1/16
    assert!(c.congruent(&PadicApprox::from_rational(3, &q(1, 16), 5).unwrap()));
    assert!(matches!(
      PadicApprox::from_integer(2, &BigInt::from(5), 3).binom(4),
      Err(NumaError::PrecisionExhausted { needed: 4, available: 3 })
    ));
    assert!(PadicApprox::from_rational(3, &q(1, 3), 4).is_err());
  }

  #[test]
  fn mahler_of_three_to_the_x() {
    let f = |x: &BigInt| Ok(num_traits::pow(BigInt::from(3), x.to_usize().unwrap()));
    let prof = mahler_profile(f, 2, 10).unwrap();
    for e in &prof.entries {
      assert_eq!(e.coefficient, num_traits::pow(BigInt::from(2), e.k as usize));
      assert_eq!(e.valuation, Some(e.k));
    }
    assert!(prof.nondecreasing);
  }

  #[test]
  fn p_integrality() {
    let mut rng = StdRng::seed_from_u64(1);
    let f = BinomialPoly::binom_x(5);
    let cert = certify_p_integral(&f, 7, 200, &mut rng).unwrap();
    assert!(cert.passed());
  }

  #[test]
  fn ring_parsing_and_membership() {
    let r: CoeffRing = "localize:2,3".parse().unwrap();
    assert!(r.contains_rational(&q(5, 12)));
    assert!(!r.contains_rational(&q(1, 10)));
    assert!("localize:2,2".parse::<CoeffRing>().is_err());
    assert!("padic:4:3".parse::<CoeffRing>().is_err());
    assert!("padic:3:0".parse::<CoeffRing>().is_err());
    assert_eq!("padic:3:8".parse::<CoeffRing>().unwrap(), CoeffRing::PadicTruncated { p: 3, precision: 8 });
  }

  #[test]
  fn padic_evaluation_matches_rational() {
    let f = BinomialPoly::from_terms(2, [(vec![2, 1], 3), (vec![0, 3], -1), (vec![0, 0], 4)]).unwrap();
    let ring = CoeffRing::padic(5, 8).unwrap();
    let pt = [q(1, 3), q(-2, 7)];
    let exact = f.evaluate_rational(&pt).unwrap();
    let padic: Vec<RElem> = pt.iter().map(|x| RElem::Padic(PadicApprox::from_rational(5, x, 8).unwrap())).collect();
    let RElem::Padic(v) = evaluate_in(&ring, &f, &padic).unwrap() else { panic!() };
    assert!(v.congruent(&PadicApprox::from_rational(5, &exact, 8).unwrap()));
  }
}
