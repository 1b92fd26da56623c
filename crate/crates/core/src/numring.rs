//! Numerical rings: commutative rings with operations `r -> C(r, n)` obeying
//! the binomial axioms, and the universal structure polynomials that express
//! products of binomials, binomials of products and binomials of binomials.

use std::{
  collections::HashMap,
  fmt::Debug,
  sync::{Arc, OnceLock, RwLock},
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{ser::SerializeMap, Serialize, Serializer};

use crate::{
  binom::{binomial, newton_coefficients, newton_coefficients_1d, BinomialPoly, MultiIndex},
  error::{NumaError, Result},
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
  /// `C(x,m) C(x,n) = sum_k h_k C(x,k)`
  H { m: u32, n: u32 },
  /// `C(xy,n) = sum_{i,j} F_ij C(x,i) C(y,j)`
  F { n: u32 },
  /// `C(C(x,m), n) = sum_k g_k C(x,k)`
  G { m: u32, n: u32 },
}

/// Coefficients of one structure polynomial. `h` and `g` are linear in the
/// binomials of `x` (index 0 is the constant term); `f` is bilinear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
  pub kind:  StructureKind,
  pub coeff: StructureCoefficients,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureCoefficients {
  Linear(Vec<BigInt>),
  Bilinear(Vec<Vec<BigInt>>),
}

impl StructureTable {
  pub fn linear(&self) -> &[BigInt] {
    match &self.coeff {
      StructureCoefficients::Linear(v) => v,
      StructureCoefficients::Bilinear(_) => panic!("f tables are bilinear"),
    }
  }

  pub fn bilinear(&self) -> &[Vec<BigInt>] {
    match &self.coeff {
      StructureCoefficients::Bilinear(v) => v,
      StructureCoefficients::Linear(_) => panic!("h and g tables are linear"),
    }
  }

  /// Value of the right-hand side given `C(x, k)` (and `C(y, k)` for `f`).
  pub fn apply_int(&self, xs: &[BigInt], ys: &[BigInt]) -> BigInt {
    match &self.coeff {
      StructureCoefficients::Linear(c) => c.iter().zip(xs).map(|(a, b)| a * b).sum(),
      StructureCoefficients::Bilinear(f) => {
        let mut s = BigInt::zero();
        for (i, row) in f.iter().enumerate() {
          for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
              s += c * &xs[i] * &ys[j];
            }
          }
        }
        s
      },
    }
  }

  /// Highest binomial index that occurs.
  pub fn max_index(&self) -> usize {
    match &self.coeff {
      StructureCoefficients::Linear(c) => c.len().saturating_sub(1),
      StructureCoefficients::Bilinear(f) => f.len().saturating_sub(1),
    }
  }
}

impl Serialize for StructureTable {
  fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(None)?;
    match self.kind {
      StructureKind::H { m, n } => {
        map.serialize_entry("kind", "h")?;
        map.serialize_entry("m", &m)?;
        map.serialize_entry("n", &n)?;
      },
      StructureKind::F { n } => {
        map.serialize_entry("kind", "f")?;
        map.serialize_entry("n", &n)?;
      },
      StructureKind::G { m, n } => {
        map.serialize_entry("kind", "g")?;
        map.serialize_entry("m", &m)?;
        map.serialize_entry("n", &n)?;
      },
    }
    let mut coeffs = std::collections::BTreeMap::new();
    match &self.coeff {
      StructureCoefficients::Linear(c) => {
        for (k, v) in c.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
          coeffs.insert(format!("c{k}"), crate::homalg::bigint_json::to_repr(v));
        }
      },
      StructureCoefficients::Bilinear(f) => {
        for (i, row) in f.iter().enumerate() {
          for (j, v) in row.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            coeffs.insert(format!("f{i}_{j}"), crate::homalg::bigint_json::to_repr(v));
          }
        }
      },
    }
    map.serialize_entry("coefficients", &coeffs)?;
    map.end()
  }
}

type TableCache = RwLock<HashMap<StructureKind, Arc<StructureTable>>>;

fn cache() -> &'static TableCache {
  static CACHE: OnceLock<TableCache> = OnceLock::new();
  CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(kind: StructureKind, build: impl FnOnce() -> StructureTable) -> Arc<StructureTable> {
  if let Some(t) = cache().read().expect("table cache poisoned").get(&kind) {
    return Arc::clone(t);
  }
  let table = Arc::new(build());
  cache().write().expect("table cache poisoned").entry(kind).or_insert(table).clone()
}

/// `h^m_n`, extracted from the Newton series of `C(x,m) C(x,n)`.
pub fn structure_h(m: u32, n: u32) -> Arc<StructureTable> {
  cached(StructureKind::H { m, n }, || {
    let c = newton_coefficients_1d(|x| binomial(x, m) * binomial(x, n), m + n);
    StructureTable { kind: StructureKind::H { m, n }, coeff: StructureCoefficients::Linear(c) }
  })
}

/// `f_n`, extracted from the two-variable Newton series of `C(xy, n)`.
pub fn structure_f(n: u32) -> Arc<StructureTable> {
  cached(StructureKind::F { n }, || {
    let coeffs = newton_coefficients(|p| binomial(&(&p[0] * &p[1]), n), &MultiIndex(vec![n, n]));
    let mut f = vec![vec![BigInt::zero(); n as usize + 1]; n as usize + 1];
    for (idx, v) in coeffs {
      f[idx.0[0] as usize][idx.0[1] as usize] = v;
    }
    StructureTable { kind: StructureKind::F { n }, coeff: StructureCoefficients::Bilinear(f) }
  })
}

/// `g^m_n`, extracted from the Newton series of `C(C(x,m), n)`.
pub fn structure_g(m: u32, n: u32) -> Arc<StructureTable> {
  cached(StructureKind::G { m, n }, || {
    let c = newton_coefficients_1d(|x| binomial(&binomial(x, m), n), m * n);
    StructureTable { kind: StructureKind::G { m, n }, coeff: StructureCoefficients::Linear(c) }
  })
}

/// A commutative ring with binomial operations.
pub trait NumericalRing {
  type Elem: Clone + PartialEq + Debug;

  fn zero(&self) -> Self::Elem;
  fn one(&self) -> Self::Elem;
  fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
  fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
  fn from_int(&self, n: &BigInt) -> Self::Elem;
  fn binom(&self, r: &Self::Elem, n: u32) -> Self::Elem;

  fn linear_combination(&self, coeffs: &[BigInt], elems: &[Self::Elem]) -> Self::Elem {
    coeffs
      .iter()
      .zip(elems)
      .filter(|(c, _)| !c.is_zero())
      .fold(self.zero(), |acc, (c, e)| self.add(&acc, &self.mul(&self.from_int(c), e)))
  }
}

/// `Z` with the usual binomial coefficients.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl NumericalRing for Integers {
  type Elem = BigInt;

  fn zero(&self) -> BigInt { BigInt::zero() }

  fn one(&self) -> BigInt { BigInt::one() }

  fn add(&self, a: &BigInt, b: &BigInt) -> BigInt { a + b }

  fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt { a * b }

  fn from_int(&self, n: &BigInt) -> BigInt { n.clone() }

  fn binom(&self, r: &BigInt, n: u32) -> BigInt { binomial(r, n) }
}

/// `Z` with a caller-supplied binomial operation, for exercising the checker.
#[derive(Clone, Copy)]
pub struct IntegersWith(pub fn(&BigInt, u32) -> BigInt);

impl NumericalRing for IntegersWith {
  type Elem = BigInt;

  fn zero(&self) -> BigInt { BigInt::zero() }

  fn one(&self) -> BigInt { BigInt::one() }

  fn add(&self, a: &BigInt, b: &BigInt) -> BigInt { a + b }

  fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt { a * b }

  fn from_int(&self, n: &BigInt) -> BigInt { n.clone() }

  fn binom(&self, r: &BigInt, n: u32) -> BigInt { (self.0)(r, n) }
}

/// `Z^S` for a finite set `S` of the given size, all operations pointwise.
#[derive(Clone, Copy, Debug)]
pub struct PointwiseFunctions {
  pub size: usize,
}

impl NumericalRing for PointwiseFunctions {
  type Elem = Vec<BigInt>;

  fn zero(&self) -> Vec<BigInt> { vec![BigInt::zero(); self.size] }

  fn one(&self) -> Vec<BigInt> { vec![BigInt::one(); self.size] }

  fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> { a.iter().zip(b).map(|(x, y)| x + y).collect() }

  fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> { a.iter().zip(b).map(|(x, y)| x * y).collect() }

  fn from_int(&self, n: &BigInt) -> Vec<BigInt> { vec![n.clone(); self.size] }

  fn binom(&self, r: &Vec<BigInt>, n: u32) -> Vec<BigInt> { r.iter().map(|x| binomial(x, n)).collect() }
}

/// `Num_k`, the free numerical ring on `k` generators.
#[derive(Clone, Copy, Debug)]
pub struct FreeNumerical {
  pub nvars: usize,
}

impl NumericalRing for FreeNumerical {
  type Elem = BinomialPoly;

  fn zero(&self) -> BinomialPoly { BinomialPoly::zero(self.nvars) }

  fn one(&self) -> BinomialPoly { BinomialPoly::one(self.nvars) }

  fn add(&self, a: &BinomialPoly, b: &BinomialPoly) -> BinomialPoly { a.add(b).expect("same ring") }

  fn mul(&self, a: &BinomialPoly, b: &BinomialPoly) -> BinomialPoly { a.mul(b).expect("same ring") }

  fn from_int(&self, n: &BigInt) -> BinomialPoly { BinomialPoly::constant(self.nvars, n.clone()) }

  fn binom(&self, r: &BinomialPoly, n: u32) -> BinomialPoly { ring_binom(r, n) }
}

/// The numerical function `x -> C(f(x), n)`.
pub fn ring_binom(f: &BinomialPoly, n: u32) -> BinomialPoly {
  BinomialPoly::binom_x(n).compose(std::slice::from_ref(f)).expect("univariate outer map")
}

/// Ring descriptor accepted on the command line: `integers`, `pointwise:<n>`,
/// `free:<k>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
  Integers,
  Pointwise(usize),
  Free(usize),
}

impl std::str::FromStr for RingSpec {
  type Err = NumaError;

  fn from_str(s: &str) -> Result<Self> {
    let bad = || NumaError::InvalidInput(format!("unknown ring {s:?}; expected integers, pointwise:<n> or free:<k>"));
    match s.split_once(':') {
      None if s == "integers" || s == "Z" => Ok(RingSpec::Integers),
      Some(("pointwise", n)) => Ok(RingSpec::Pointwise(n.parse().map_err(|_| bad())?)),
      Some(("free", k)) => Ok(RingSpec::Free(k.parse().map_err(|_| bad())?)),
      _ => Err(bad()),
    }
  }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
  pub axiom:  u8,
  pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
  pub bound:      u32,
  pub checks:     usize,
  pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
  pub fn passed(&self) -> bool { self.violations.is_empty() }

  pub fn first_violation(&self) -> Option<&AxiomViolation> { self.violations.first() }
}

const MAX_REPORTED: usize = 50;

/// Evaluates axioms (i)–(vii) on all samples (and pairs of samples for the
/// two-argument axioms) with binomial indices up to `bound`.
///
/// Axiom (i) is taken as `C(r, 0) = 1` and axiom (iv) in its Vandermonde
/// form `C(r+s, n) = sum_{i+j=n} C(r,i) C(s,j)`.
pub fn check_axioms<R: NumericalRing>(ring: &R, samples: &[R::Elem], bound: u32) -> AxiomReport {
  let mut checks = 0;
  let mut violations = Vec::new();
  let mut record = |axiom: u8, ok: bool, detail: &dyn Fn() -> String| {
    checks += 1;
    if !ok && violations.len() < MAX_REPORTED {
      violations.push(AxiomViolation { axiom, detail: detail() });
    }
  };
  let binoms = |r: &R::Elem, upto: u32| -> Vec<R::Elem> { (0..=upto).map(|k| ring.binom(r, k)).collect() };

  for r in samples {
    record(1, ring.binom(r, 0) == ring.one(), &|| format!("C({r:?}, 0) != 1"));
    record(3, ring.binom(r, 1) == *r, &|| format!("C({r:?}, 1) != r"));
  }
  let one = ring.one();
  for n in 2..=bound {
    record(2, ring.binom(&one, n) == ring.zero(), &|| format!("C(1, {n}) != 0"));
  }
  // (iv) and (vi) on pairs
  for r in samples {
    let br = binoms(r, bound);
    for s in samples {
      let bs = binoms(s, bound);
      let sum = ring.add(r, s);
      let prod = ring.mul(r, s);
      for n in 0..=bound {
        let lhs = ring.binom(&sum, n);
        let rhs = (0..=n).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&br[i as usize], &bs[(n - i) as usize])));
        record(4, lhs == rhs, &|| format!("r={r:?}, s={s:?}, n={n}"));

        let lhs = ring.binom(&prod, n);
        let f = structure_f(n);
        let mut rhs = ring.zero();
        for (i, row) in f.bilinear().iter().enumerate() {
          for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
              let t = ring.mul(&ring.from_int(c), &ring.mul(&br[i], &bs[j]));
              rhs = ring.add(&rhs, &t);
            }
          }
        }
        record(6, lhs == rhs, &|| format!("r={r:?}, s={s:?}, n={n}"));
      }
    }
  }
  // (v) and (vii)
  for r in samples {
    let br = binoms(r, bound * bound.max(2));
    for m in 0..=bound {
      for n in 0..=bound {
        let h = structure_h(m, n);
        let lhs = ring.mul(&br[m as usize], &br[n as usize]);
        let rhs = ring.linear_combination(h.linear(), &br[..=h.max_index()]);
        record(5, lhs == rhs, &|| format!("r={r:?}, m={m}, n={n}"));

        let g = structure_g(m, n);
        let lhs = ring.binom(&br[m as usize], n);
        let rhs = ring.linear_combination(g.linear(), &br[..=g.max_index()]);
        record(7, lhs == rhs, &|| format!("r={r:?}, m={m}, n={n}"));
      }
    }
  }
  AxiomReport { bound, checks, violations }
}

/// `[C(r,0), ..., C(r,N)]`, the truncated series `sum_i C(r,i) t^i`.
pub fn lambda_series<R: NumericalRing>(ring: &R, r: &R::Elem, n: u32) -> Vec<R::Elem> {
  (0..=n).map(|k| ring.binom(r, k)).collect()
}

/// Cauchy product of two truncated series, truncated at the shorter length.
pub fn cauchy_product<R: NumericalRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
  let len = a.len().min(b.len());
  (0..len)
    .map(|k| (0..=k).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&a[i], &b[k - i]))))
    .collect()
}

/// Whether the series of `r + s` is the product of the series of `r` and `s`
/// through degree `n`.
pub fn lambda_additive<R: NumericalRing>(ring: &R, r: &R::Elem, s: &R::Elem, n: u32) -> bool {
  let lhs = lambda_series(ring, &ring.add(r, s), n);
  lhs == cauchy_product(ring, &lambda_series(ring, r, n), &lambda_series(ring, s, n))
}

/// Coproduct `Num_a ⊗ Num_b = Num_{a+b}` with its two inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeTensor {
  pub left_vars:  usize,
  pub right_vars: usize,
}

impl FreeTensor {
  pub fn nvars(&self) -> usize { self.left_vars + self.right_vars }

  /// Images of the left generators (`x_j -> x_j`).
  pub fn left_generators(&self) -> Vec<BinomialPoly> {
    (0..self.left_vars).map(|j| BinomialPoly::var(self.nvars(), j)).collect()
  }

  /// Images of the right generators (`y_j -> x_{a+j}`).
  pub fn right_generators(&self) -> Vec<BinomialPoly> {
    (0..self.right_vars).map(|j| BinomialPoly::var(self.nvars(), self.left_vars + j)).collect()
  }

  pub fn include_left(&self, f: &BinomialPoly) -> Result<BinomialPoly> {
    f.embed(self.nvars(), &(0..self.left_vars).collect::<Vec<_>>())
  }

  pub fn include_right(&self, f: &BinomialPoly) -> Result<BinomialPoly> {
    f.embed(self.nvars(), &(self.left_vars..self.nvars()).collect::<Vec<_>>())
  }

  /// Writes `f` as `sum_i l_i ⊗ r_i`, grouping terms by their left index so
  /// each `l_i` is a single basis element.
  pub fn decompose(&self, f: &BinomialPoly) -> Result<Vec<(BinomialPoly, BinomialPoly)>> {
    if f.nvars() != self.nvars() {
      return Err(NumaError::ArityMismatch { expected: self.nvars(), found: f.nvars() });
    }
    let mut groups: std::collections::BTreeMap<MultiIndex, BinomialPoly> = std::collections::BTreeMap::new();
    for (idx, c) in f.terms() {
      let (l, r) = idx.0.split_at(self.left_vars);
      groups
        .entry(MultiIndex(l.to_vec()))
        .or_insert_with(|| BinomialPoly::zero(self.right_vars))
        .add_term(MultiIndex(r.to_vec()), c.clone());
    }
    Ok(groups.into_iter().filter(|(_, r)| !r.is_zero()).map(|(l, r)| (BinomialPoly::basis(l), r)).collect())
  }

  /// Inverse of [`decompose`](Self::decompose).
  pub fn recombine(&self, pairs: &[(BinomialPoly, BinomialPoly)]) -> Result<BinomialPoly> {
    let mut out = BinomialPoly::zero(self.nvars());
    for (l, r) in pairs {
      out = out.add(&self.include_left(l)?.mul(&self.include_right(r)?)?)?;
    }
    Ok(out)
  }
}

pub fn free_tensor(left_vars: usize, right_vars: usize) -> FreeTensor { FreeTensor { left_vars, right_vars } }

#[cfg(test)]
mod tests {
  use super::*;

  fn ints(v: &[i64]) -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() }

  #[test]
  fn h_examples() {
    assert_eq!(structure_h(1, 1).linear(), ints(&[0, 1, 2]).as_slice());
    assert_eq!(structure_h(2, 2).linear(), ints(&[0, 0, 1, 6, 6]).as_slice());
    assert_eq!(structure_h(0, 3).linear(), ints(&[0, 0, 0, 1]).as_slice());
  }

  #[test]
  fn f_examples() {
    assert_eq!(structure_f(1).bilinear(), &[ints(&[0, 0]), ints(&[0, 1])]);
    let f2 = structure_f(2);
    assert_eq!(f2.bilinear(), &[ints(&[0, 0, 0]), ints(&[0, 0, 1]), ints(&[0, 1, 2])]);
    // C(6, 2) = 15 at (x, y) = (2, 3)
    let xs = ints(&[1, 2, 1]);
    let ys = ints(&[1, 3, 3]);
    assert_eq!(f2.apply_int(&xs, &ys), BigInt::from(15));
    assert_eq!(structure_f(0).bilinear(), &[ints(&[1])]);
  }

  #[test]
  fn g_examples() {
    assert_eq!(structure_g(2, 1).linear(), ints(&[0, 0, 1]).as_slice());
    assert_eq!(structure_g(1, 2).linear(), ints(&[0, 0, 1]).as_slice());
    // difference table of C(C(x,2),2) = 0,0,0,3,15,45 at x=0..5
    let g = structure_g(2, 2);
    let expect = newton_coefficients_1d(|x| binomial(&binomial(x, 2), 2), 4);
    assert_eq!(g.linear(), expect.as_slice());
    assert_eq!(g.linear(), ints(&[0, 0, 0, 3, 3]).as_slice());
  }

  #[test]
  fn integers_pass_and_broken_binomial_fails() {
    let samples: Vec<BigInt> = (-10..=10).map(BigInt::from).collect();
    assert!(check_axioms(&Integers, &samples, 4).passed());

    let broken = IntegersWith(|r, n| if n >= 2 { BigInt::zero() } else { binomial(r, n) });
    let rep = check_axioms(&broken, &[BigInt::one()], 2);
    let v = rep.first_violation().unwrap();
    assert_eq!(v.axiom, 4);
    assert!(v.detail.contains("n=2"), "{}", v.detail);
  }

  #[test]
  fn pointwise_functions_pass() {
    let ring = PointwiseFunctions { size: 3 };
    let samples: Vec<Vec<BigInt>> = vec![ints(&[0, 1, 2]), ints(&[-3, 5, 1]), ints(&[4, -1, 0]), ints(&[1, 1, 1])];
    assert!(check_axioms(&ring, &samples, 3).passed());
  }

  #[test]
  fn ring_binom_examples() {
    let x = BinomialPoly::var(1, 0);
    assert_eq!(ring_binom(&x, 2), BinomialPoly::binom_x(2));
    let s = BinomialPoly::linear(&[1, 1], 0);
    let expect = BinomialPoly::from_terms(2, [(vec![2, 0], 1), (vec![1, 1], 1), (vec![0, 2], 1)]).unwrap();
    assert_eq!(ring_binom(&s, 2), expect);
    let two_x = BinomialPoly::linear(&[2], 0);
    assert_eq!(ring_binom(&two_x, 1), two_x);
  }

  #[test]
  fn lambda_series_examples() {
    let one = lambda_series(&Integers, &BigInt::one(), 5);
    assert_eq!(one, ints(&[1, 1, 0, 0, 0, 0]));
    assert_eq!(lambda_series(&Integers, &BigInt::zero(), 3), ints(&[1, 0, 0, 0]));
    let prod = cauchy_product(
      &Integers,
      &lambda_series(&Integers, &BigInt::from(2), 4),
      &lambda_series(&Integers, &BigInt::from(3), 4),
    );
    assert_eq!(prod, ints(&[1, 5, 10, 10, 5]));
    assert!(lambda_additive(&Integers, &BigInt::from(-7), &BigInt::from(4), 8));
  }

  #[test]
  fn free_tensor_examples() {
    let t = free_tensor(1, 1);
    assert_eq!(t.left_generators(), vec![BinomialPoly::var(2, 0)]);
    assert_eq!(t.right_generators(), vec![BinomialPoly::var(2, 1)]);
    let t0 = free_tensor(0, 3);
    assert_eq!(t0.nvars(), 3);
    assert_eq!(t0.include_left(&BinomialPoly::constant(0, 5)).unwrap(), BinomialPoly::constant(3, 5));

    let xy = BinomialPoly::var(2, 0).mul(&BinomialPoly::var(2, 1)).unwrap();
    let c = ring_binom(&xy, 2);
    assert_eq!(c.terms().len(), 3);
    let parts = t.decompose(&c).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!(t.recombine(&parts).unwrap(), c);
  }

  #[test]
  fn ring_spec_parsing() {
    assert_eq!("integers".parse::<RingSpec>().unwrap(), RingSpec::Integers);
    assert_eq!("pointwise:3".parse::<RingSpec>().unwrap(), RingSpec::Pointwise(3));
    assert_eq!("free:2".parse::<RingSpec>().unwrap(), RingSpec::Free(2));
    assert!("reals".parse::<RingSpec>().is_err());
  }
}
