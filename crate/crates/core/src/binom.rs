//! Numerical polynomials in the binomial basis.
//!
//! A numerical map `Z^k -> Z` is a polynomial with rational coefficients that
//! takes integers to integers. Such maps form a free abelian group on the
//! products `C(x_1, n_1) ... C(x_k, n_k)`; [`BinomialPoly`] stores the integer
//! coordinates in that basis, [`RationalPoly`] stores ordinary monomial
//! coefficients.

use std::{
  cmp::Ordering,
  collections::BTreeMap,
  fmt,
  ops::{Add, Mul, Neg, Sub},
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{NumaError, Result};

/// Exponent vector, one entry per variable. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
  pub fn zero(nvars: usize) -> Self { MultiIndex(vec![0; nvars]) }

  pub fn unit(nvars: usize, var: usize) -> Self {
    let mut v = vec![0; nvars];
    v[var] = 1;
    MultiIndex(v)
  }

  pub fn degree(&self) -> u64 { self.0.iter().map(|&n| u64::from(n)).sum() }

  pub fn len(&self) -> usize { self.0.len() }

  pub fn is_empty(&self) -> bool { self.0.is_empty() }

  pub fn entries(&self) -> &[u32] { &self.0 }

  /// Componentwise `self <= other`.
  pub fn le_all(&self, other: &MultiIndex) -> bool {
    self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
  }

  /// Every multi-index of the given length with entries summing to `degree`,
  /// in lexicographic order.
  pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
      if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        return;
      }
      for v in (0..=left).rev() {
        cur[pos] = v;
        rec(pos + 1, left - v, cur, out);
      }
      cur[pos] = 0;
    }
    if nvars == 0 {
      if degree == 0 {
        out.push(MultiIndex(vec![]));
      }
      return out;
    }
    rec(0, degree, &mut cur, &mut out);
    out
  }

  /// Every multi-index componentwise below `bound` (inclusive).
  pub fn box_below(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex(Vec::with_capacity(bound.len()))];
    for &b in &bound.0 {
      out = out
        .into_iter()
        .flat_map(|m| {
          (0..=b).map(move |v| {
            let mut e = m.0.clone();
            e.push(v);
            MultiIndex(e)
          })
        })
        .collect();
    }
    out
  }
}

impl Ord for MultiIndex {
  fn cmp(&self, other: &Self) -> Ordering {
    self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
  }
}

impl PartialOrd for MultiIndex {
  fn partial_cmp(&self, other: &Self) -> Option<Ordering> { Some(self.cmp(other)) }
}

/// `C(p, n)` for any integer `p`, via the falling factorial.
pub fn binomial(p: &BigInt, n: u32) -> BigInt {
  let mut acc = BigInt::one();
  for i in 0..n {
    acc = acc * (p - BigInt::from(i)) / BigInt::from(i + 1);
  }
  acc
}

/// `C(q, n)` for a rational `q`.
pub fn binomial_rational(q: &BigRational, n: u32) -> BigRational {
  let mut acc = BigRational::one();
  for i in 0..n {
    acc = acc * (q - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
  }
  acc
}

/// `[C(q, 0), ..., C(q, max)]` with `q = a/b`: `C(q, n) = a(a-b)...(a-(n-1)b) / (n! b^n)`.
fn binomial_table(q: &BigRational, max: u32) -> Vec<BigRational> {
  let (a, b) = (q.numer(), q.denom());
  let mut num = BigInt::one();
  let mut den = BigInt::one();
  let mut out = vec![BigRational::one()];
  for i in 0..max {
    num *= a - b * BigInt::from(i);
    den *= b * BigInt::from(i + 1);
    out.push(BigRational::new(num.clone(), den.clone()));
  }
  out
}

pub fn factorial(n: u32) -> BigInt { (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) }

/// `S(n, k)`, Stirling numbers of the second kind, for `0 <= k <= n <= max`.
fn stirling2(max: u32) -> Vec<Vec<BigInt>> {
  let max = max as usize;
  let mut t = vec![vec![BigInt::zero(); max + 1]; max + 1];
  t[0][0] = BigInt::one();
  for n in 1..=max {
    for k in 1..=n {
      t[n][k] = BigInt::from(k) * &t[n - 1][k] + &t[n - 1][k - 1];
    }
  }
  t
}

/// Signed Stirling numbers of the first kind: `x(x-1)...(x-n+1) = sum_k s(n,k) x^k`.
fn stirling1(max: u32) -> Vec<Vec<BigInt>> {
  let max = max as usize;
  let mut t = vec![vec![BigInt::zero(); max + 1]; max + 1];
  t[0][0] = BigInt::one();
  for n in 1..=max {
    for k in 1..=n {
      t[n][k] = &t[n - 1][k - 1] - BigInt::from(n - 1) * &t[n - 1][k];
    }
  }
  t
}

fn max_entry<'a, I: Iterator<Item = &'a MultiIndex>>(keys: I) -> u32 {
  keys.flat_map(|m| m.0.iter().copied()).max().unwrap_or(0)
}

/// Polynomial with rational coefficients in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
  nvars: usize,
  terms: BTreeMap<MultiIndex, BigRational>,
}

impl RationalPoly {
  pub fn zero(nvars: usize) -> Self { RationalPoly { nvars, terms: BTreeMap::new() } }

  pub fn constant(nvars: usize, c: BigRational) -> Self {
    let mut p = Self::zero(nvars);
    p.add_term(MultiIndex::zero(nvars), c);
    p
  }

  pub fn var(nvars: usize, var: usize) -> Self {
    let mut p = Self::zero(nvars);
    p.add_term(MultiIndex::unit(nvars, var), BigRational::one());
    p
  }

  /// Builds from `(exponents, coefficient)` pairs; repeated exponents are summed.
  pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
  where I: IntoIterator<Item = (Vec<u32>, BigRational)> {
    let mut p = Self::zero(nvars);
    for (e, c) in terms {
      if e.len() != nvars {
        return Err(NumaError::ArityMismatch { expected: nvars, found: e.len() });
      }
      p.add_term(MultiIndex(e), c);
    }
    Ok(p)
  }

  pub fn nvars(&self) -> usize { self.nvars }

  pub fn terms(&self) -> &BTreeMap<MultiIndex, BigRational> { &self.terms }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn coeff(&self, idx: &[u32]) -> BigRational {
    self.terms.get(&MultiIndex(idx.to_vec())).cloned().unwrap_or_else(BigRational::zero)
  }

  fn add_term(&mut self, idx: MultiIndex, c: BigRational) {
    if c.is_zero() {
      return;
    }
    use std::collections::btree_map::Entry;
    match self.terms.entry(idx) {
      Entry::Vacant(v) => {
        v.insert(c);
      },
      Entry::Occupied(mut o) => {
        *o.get_mut() += c;
        if o.get().is_zero() {
          o.remove();
        }
      },
    }
  }

  pub fn scale(&self, c: &BigRational) -> Self {
    if c.is_zero() {
      return Self::zero(self.nvars);
    }
    RationalPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
  }

  pub fn total_degree(&self) -> Option<u64> { self.terms.keys().map(MultiIndex::degree).max() }

  pub fn pow(&self, mut e: u32) -> Self {
    let mut base = self.clone();
    let mut acc = Self::constant(self.nvars, BigRational::one());
    while e > 0 {
      if e & 1 == 1 {
        acc = &acc * &base;
      }
      e >>= 1;
      if e > 0 {
        base = &base * &base;
      }
    }
    acc
  }

  pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
    if point.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: point.len() });
    }
    let mut total = BigRational::zero();
    for (idx, c) in &self.terms {
      let mut t = c.clone();
      for (x, &e) in point.iter().zip(&idx.0) {
        if e > 0 {
          t *= num_traits::pow(x.clone(), e as usize);
        }
      }
      total += t;
    }
    Ok(total)
  }

  /// Substitutes `gs[j]` for variable `j`.
  pub fn substitute(&self, gs: &[RationalPoly]) -> Result<RationalPoly> {
    if gs.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: gs.len() });
    }
    let target = gs.first().map(|g| g.nvars).unwrap_or(0);
    if let Some(g) = gs.iter().find(|g| g.nvars != target) {
      return Err(NumaError::ArityMismatch { expected: target, found: g.nvars });
    }
    let maxe = max_entry(self.terms.keys()) as usize;
    let mut powers: Vec<Vec<RationalPoly>> = Vec::with_capacity(gs.len());
    for g in gs {
      let mut row = vec![RationalPoly::constant(target, BigRational::one())];
      for k in 1..=maxe {
        let next = &row[k - 1] * g;
        row.push(next);
      }
      powers.push(row);
    }
    let mut out = RationalPoly::zero(target);
    for (idx, c) in &self.terms {
      let mut t = RationalPoly::constant(target, c.clone());
      for (j, &e) in idx.0.iter().enumerate() {
        if e > 0 {
          t = &t * &powers[j][e as usize];
        }
      }
      out = &out + &t;
    }
    Ok(out)
  }
}

impl Add for &RationalPoly {
  type Output = RationalPoly;

  fn add(self, rhs: &RationalPoly) -> RationalPoly {
    assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
    let mut out = self.clone();
    for (k, v) in &rhs.terms {
      out.add_term(k.clone(), v.clone());
    }
    out
  }
}

impl Sub for &RationalPoly {
  type Output = RationalPoly;

  fn sub(self, rhs: &RationalPoly) -> RationalPoly { self + &(-rhs) }
}

impl Neg for &RationalPoly {
  type Output = RationalPoly;

  fn neg(self) -> RationalPoly {
    RationalPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
  }
}

impl Mul for &RationalPoly {
  type Output = RationalPoly;

  fn mul(self, rhs: &RationalPoly) -> RationalPoly {
    assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
    let mut acc: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
    for (a, ca) in &self.terms {
      for (b, cb) in &rhs.terms {
        let idx = MultiIndex(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        *acc.entry(idx).or_insert_with(BigRational::zero) += ca * cb;
      }
    }
    acc.retain(|_, v| !v.is_zero());
    RationalPoly { nvars: self.nvars, terms: acc }
  }
}

impl fmt::Display for RationalPoly {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.terms.is_empty() {
      return write!(f, "0");
    }
    let mut first = true;
    for (idx, c) in &self.terms {
      if !first {
        write!(f, " + ")?;
      }
      first = false;
      write!(f, "({c})")?;
      for (j, &e) in idx.0.iter().enumerate() {
        match e {
          0 => {},
          1 => write!(f, "*x{}", j + 1)?,
          _ => write!(f, "*x{}^{}", j + 1, e)?,
        }
      }
    }
    Ok(())
  }
}

/// An element of `Num_k`: integer combination of products of binomials
/// `C(x_1, n_1) ... C(x_k, n_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinomialPoly {
  nvars: usize,
  terms: BTreeMap<MultiIndex, BigInt>,
}

impl BinomialPoly {
  pub fn zero(nvars: usize) -> Self { BinomialPoly { nvars, terms: BTreeMap::new() } }

  pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
    let mut p = Self::zero(nvars);
    p.add_term(MultiIndex::zero(nvars), c.into());
    p
  }

  pub fn one(nvars: usize) -> Self { Self::constant(nvars, 1) }

  /// The coordinate function `x_var`, i.e. `C(x_var, 1)`.
  pub fn var(nvars: usize, var: usize) -> Self { Self::basis(MultiIndex::unit(nvars, var)) }

  /// A single basis element `prod_j C(x_j, idx_j)`.
  pub fn basis(idx: MultiIndex) -> Self {
    let mut p = Self::zero(idx.len());
    p.add_term(idx, BigInt::one());
    p
  }

  /// Univariate `C(x, k)`.
  pub fn binom_x(k: u32) -> Self { Self::basis(MultiIndex(vec![k])) }

  pub fn from_terms<I, C>(nvars: usize, terms: I) -> Result<Self>
  where
    I: IntoIterator<Item = (Vec<u32>, C)>,
    C: Into<BigInt>, {
    let mut p = Self::zero(nvars);
    for (e, c) in terms {
      if e.len() != nvars {
        return Err(NumaError::ArityMismatch { expected: nvars, found: e.len() });
      }
      p.add_term(MultiIndex(e), c.into());
    }
    Ok(p)
  }

  /// Integer linear form `sum_j coeffs[j] x_j + constant`.
  pub fn linear(coeffs: &[i64], constant: i64) -> Self {
    let n = coeffs.len();
    let mut p = Self::constant(n, constant);
    for (j, &c) in coeffs.iter().enumerate() {
      p.add_term(MultiIndex::unit(n, j), BigInt::from(c));
    }
    p
  }

  pub fn nvars(&self) -> usize { self.nvars }

  pub fn terms(&self) -> &BTreeMap<MultiIndex, BigInt> { &self.terms }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn coeff(&self, idx: &[u32]) -> BigInt {
    self.terms.get(&MultiIndex(idx.to_vec())).cloned().unwrap_or_else(BigInt::zero)
  }

  pub fn total_degree(&self) -> Option<u64> { self.terms.keys().map(MultiIndex::degree).max() }

  /// Constant term, i.e. the value at the origin.
  pub fn constant_term(&self) -> BigInt { self.coeff(&vec![0; self.nvars]) }

  pub(crate) fn add_term(&mut self, idx: MultiIndex, c: BigInt) {
    if c.is_zero() {
      return;
    }
    use std::collections::btree_map::Entry;
    match self.terms.entry(idx) {
      Entry::Vacant(v) => {
        v.insert(c);
      },
      Entry::Occupied(mut o) => {
        *o.get_mut() += c;
        if o.get().is_zero() {
          o.remove();
        }
      },
    }
  }

  pub fn scale(&self, c: &BigInt) -> Self {
    if c.is_zero() {
      return Self::zero(self.nvars);
    }
    BinomialPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
  }

  fn check_same(&self, other: &Self) -> Result<()> {
    if self.nvars != other.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: other.nvars });
    }
    Ok(())
  }

  pub fn add(&self, other: &Self) -> Result<Self> {
    self.check_same(other)?;
    let mut out = self.clone();
    for (k, v) in &other.terms {
      out.add_term(k.clone(), v.clone());
    }
    Ok(out)
  }

  pub fn sub(&self, other: &Self) -> Result<Self> { self.add(&other.neg()) }

  pub fn neg(&self) -> Self { self.scale(&BigInt::from(-1)) }

  /// Pointwise product, computed through the monomial basis.
  pub fn mul(&self, other: &Self) -> Result<Self> {
    self.check_same(other)?;
    if self.is_zero() || other.is_zero() {
      return Ok(Self::zero(self.nvars));
    }
    let prod = &self.to_rational_poly() * &other.to_rational_poly();
    Ok(Self::from_rational_poly(&prod).expect("product of numerical maps is numerical"))
  }

  /// Exact conversion to the monomial basis.
  pub fn to_rational_poly(&self) -> RationalPoly {
    let maxe = max_entry(self.terms.keys());
    let s1 = stirling1(maxe);
    let mut acc: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
    for (idx, c) in &self.terms {
      let mut denom = BigInt::one();
      // expand prod_j x_j(x_j-1)...(x_j-n_j+1) into monomials
      let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::with_capacity(self.nvars), c.clone())];
      for &n in &idx.0 {
        denom *= factorial(n);
        let row = &s1[n as usize];
        let mut next = Vec::with_capacity(partial.len() * (n as usize + 1));
        for (e, v) in &partial {
          for (k, s) in row.iter().enumerate().take(n as usize + 1) {
            if s.is_zero() {
              continue;
            }
            let mut e2 = e.clone();
            e2.push(k as u32);
            next.push((e2, v * s));
          }
        }
        partial = next;
      }
      for (e, v) in partial {
        *acc.entry(MultiIndex(e)).or_insert_with(BigRational::zero) += BigRational::new(v, denom.clone());
      }
    }
    acc.retain(|_, v| !v.is_zero());
    RationalPoly { nvars: self.nvars, terms: acc }
  }

  /// Binomial-basis expansion of `p`, failing with `NotNumerical` when some
  /// coordinate `(Δ^α p)(0)` is not an integer.
  pub fn from_rational_poly(p: &RationalPoly) -> Result<Self> {
    let maxe = max_entry(p.terms.keys());
    let s2 = stirling2(maxe);
    let facts: Vec<BigInt> = (0..=maxe).map(factorial).collect();
    let mut acc: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
    for (idx, c) in &p.terms {
      // x^n = sum_k S(n,k) k! C(x,k)
      let mut partial: Vec<(Vec<u32>, BigRational)> = vec![(Vec::with_capacity(p.nvars), c.clone())];
      for &n in &idx.0 {
        let mut next = Vec::with_capacity(partial.len() * (n as usize + 1));
        for (e, v) in &partial {
          for k in 0..=n as usize {
            let s = &s2[n as usize][k];
            if s.is_zero() {
              continue;
            }
            let mut e2 = e.clone();
            e2.push(k as u32);
            next.push((e2, v * BigRational::from_integer(s * &facts[k])));
          }
        }
        partial = next;
      }
      for (e, v) in partial {
        *acc.entry(MultiIndex(e)).or_insert_with(BigRational::zero) += v;
      }
    }
    let mut out = Self::zero(p.nvars);
    for (idx, v) in acc {
      if v.is_zero() {
        continue;
      }
      if !v.is_integer() {
        return Err(NumaError::NotNumerical(format!("coefficient {v} at binomial index {:?}", idx.0)));
      }
      out.terms.insert(idx, v.to_integer());
    }
    Ok(out)
  }

  /// Exact value at an integer point.
  pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
    if point.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: point.len() });
    }
    let maxe = max_entry(self.terms.keys());
    let tables: Vec<Vec<BigInt>> = point
      .iter()
      .map(|p| {
        let mut row = Vec::with_capacity(maxe as usize + 1);
        let mut acc = BigInt::one();
        row.push(acc.clone());
        for i in 0..maxe {
          acc = acc * (p - BigInt::from(i)) / BigInt::from(i + 1);
          row.push(acc.clone());
        }
        row
      })
      .collect();
    let mut total = BigInt::zero();
    for (idx, c) in &self.terms {
      let mut t = c.clone();
      for (j, &n) in idx.0.iter().enumerate() {
        if n > 0 {
          t *= &tables[j][n as usize];
          if t.is_zero() {
            break;
          }
        }
      }
      total += t;
    }
    Ok(total)
  }

  pub fn evaluate_i64(&self, point: &[i64]) -> Result<BigInt> {
    let p: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
    self.evaluate(&p)
  }

  /// Exact value at a rational point.
  pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational> {
    if point.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: point.len() });
    }
    let maxe = max_entry(self.terms.keys());
    let tables: Vec<Vec<BigRational>> = point.iter().map(|q| binomial_table(q, maxe)).collect();
    let mut total = BigRational::zero();
    for (idx, c) in &self.terms {
      let mut t = BigRational::from_integer(c.clone());
      for (j, &n) in idx.0.iter().enumerate() {
        if n > 0 {
          t *= &tables[j][n as usize];
        }
      }
      total += t;
    }
    Ok(total)
  }

  /// Pointwise composition `x -> self(gs[0](x), ..., gs[m-1](x))`.
  pub fn compose(&self, gs: &[BinomialPoly]) -> Result<BinomialPoly> {
    if gs.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: gs.len() });
    }
    let target = match gs.first() {
      Some(g) => g.nvars,
      None => {
        // constant map out of a point
        return Err(NumaError::InvalidInput("composition with zero inner maps needs an explicit arity".into()));
      },
    };
    self.compose_into(gs, target)
  }

  /// Like [`compose`](Self::compose) with the target arity given explicitly,
  /// which allows `gs` to be empty.
  pub fn compose_into(&self, gs: &[BinomialPoly], target_nvars: usize) -> Result<BinomialPoly> {
    if gs.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: gs.len() });
    }
    if let Some(g) = gs.iter().find(|g| g.nvars != target_nvars) {
      return Err(NumaError::ArityMismatch { expected: target_nvars, found: g.nvars });
    }
    if self.nvars == 0 {
      return Ok(Self::constant(target_nvars, self.constant_term()));
    }
    if let Some(out) = self.compose_additive(gs, target_nvars) {
      return Ok(out);
    }
    let outer = self.to_rational_poly();
    let inner: Vec<RationalPoly> = gs.iter().map(BinomialPoly::to_rational_poly).collect();
    let sub = outer.substitute(&inner)?;
    Ok(Self::from_rational_poly(&sub).expect("composition of numerical maps is numerical"))
  }

  /// Fast path for inner maps that are sums of distinct variables with
  /// pairwise disjoint supports, where the Vandermonde identity keeps the
  /// result in the binomial basis.
  fn compose_additive(&self, gs: &[BinomialPoly], target: usize) -> Option<BinomialPoly> {
    let supports: Vec<Vec<usize>> = gs.iter().map(BinomialPoly::unit_sum_support).collect::<Option<_>>()?;
    let mut seen = vec![false; target];
    for s in &supports {
      for &v in s {
        if seen[v] {
          return None;
        }
        seen[v] = true;
      }
    }
    let mut out = Self::zero(target);
    for (idx, c) in &self.terms {
      let mut partial: Vec<Vec<u32>> = vec![vec![0; target]];
      let mut dead = false;
      for (j, &n) in idx.0.iter().enumerate() {
        if n == 0 {
          continue;
        }
        let sup = &supports[j];
        if sup.is_empty() {
          dead = true;
          break;
        }
        let mut next = Vec::new();
        for e in &partial {
          for comp in compositions(n, sup.len()) {
            let mut e2 = e.clone();
            for (v, a) in sup.iter().zip(comp) {
              e2[*v] = a;
            }
            next.push(e2);
          }
        }
        partial = next;
      }
      if dead {
        continue;
      }
      for e in partial {
        out.add_term(MultiIndex(e), c.clone());
      }
    }
    Some(out)
  }

  /// If `self` is `x_{i1} + ... + x_{ir}` with distinct indices (coefficient
  /// one, no constant), the sorted list of those indices.
  pub fn unit_sum_support(&self) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(self.terms.len());
    for (idx, c) in &self.terms {
      if !c.is_one() || idx.degree() != 1 {
        return None;
      }
      out.push(idx.0.iter().position(|&e| e == 1)?);
    }
    out.sort_unstable();
    Some(out)
  }

  /// Forward difference in variable `var`: `f(x + e_var) - f(x)`.
  pub fn finite_difference(&self, var: usize) -> Result<Self> {
    if var >= self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: var + 1 });
    }
    let mut out = Self::zero(self.nvars);
    for (idx, c) in &self.terms {
      if idx.0[var] == 0 {
        continue;
      }
      let mut e = idx.0.clone();
      e[var] -= 1;
      out.add_term(MultiIndex(e), c.clone());
    }
    Ok(out)
  }

  /// Reinterprets the polynomial inside a larger variable set; variable `j`
  /// becomes `positions[j]`.
  pub fn embed(&self, target_nvars: usize, positions: &[usize]) -> Result<Self> {
    if positions.len() != self.nvars {
      return Err(NumaError::ArityMismatch { expected: self.nvars, found: positions.len() });
    }
    let mut out = Self::zero(target_nvars);
    for (idx, c) in &self.terms {
      let mut e = vec![0; target_nvars];
      for (j, &n) in idx.0.iter().enumerate() {
        e[positions[j]] += n;
      }
      out.add_term(MultiIndex(e), c.clone());
    }
    Ok(out)
  }

  /// Multi-index-wise maximum of the exponents, or `None` for zero.
  pub fn degree_bounds(&self) -> Option<MultiIndex> {
    let mut it = self.terms.keys();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| MultiIndex(acc.0.iter().zip(&m.0).map(|(a, b)| *a.max(b)).collect())))
  }

  pub fn coefficient_height(&self) -> BigInt { self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero) }
}

/// Ordered compositions of `n` into `parts` non-negative parts.
fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
  if parts == 1 {
    return vec![vec![n]];
  }
  let mut out = Vec::new();
  for first in 0..=n {
    for mut rest in compositions(n - first, parts - 1) {
      rest.insert(0, first);
      out.push(rest);
    }
  }
  out
}

/// Newton coefficients `c_α = (Δ^α f)(0)` for all `α <= max_index`, from the
/// values of `f` on the grid `0..=max_index`.
pub fn newton_coefficients<F>(f: F, max_index: &MultiIndex) -> BTreeMap<MultiIndex, BigInt>
where F: Fn(&[BigInt]) -> BigInt {
  let dims: Vec<usize> = max_index.0.iter().map(|&m| m as usize + 1).collect();
  let points = MultiIndex::box_below(max_index);
  let mut grid: Vec<BigInt> = points
    .iter()
    .map(|m| {
      let p: Vec<BigInt> = m.0.iter().map(|&v| BigInt::from(v)).collect();
      f(&p)
    })
    .collect();
  // box_below enumerates in row-major order, last variable fastest.
  let k = dims.len();
  let mut strides = vec![1usize; k];
  for j in (0..k.saturating_sub(1)).rev() {
    strides[j] = strides[j + 1] * dims[j + 1];
  }
  for j in 0..k {
    // replace values along axis j by their forward differences at 0
    for round in 1..dims[j] {
      for pos in (0..grid.len()).rev() {
        let coord = (pos / strides[j]) % dims[j];
        if coord >= round {
          let prev = grid[pos - strides[j]].clone();
          grid[pos] -= prev;
        }
      }
    }
  }
  points.into_iter().zip(grid).collect()
}

/// Newton coefficients of a univariate black box on `0..=k_max`.
pub fn newton_coefficients_1d<F>(f: F, k_max: u32) -> Vec<BigInt>
where F: Fn(&BigInt) -> BigInt {
  newton_coefficients(|p| f(&p[0]), &MultiIndex(vec![k_max])).into_values().collect()
}

/// Builds a [`BinomialPoly`] from Newton coefficients, dropping zeros.
pub fn from_newton(nvars: usize, coeffs: &BTreeMap<MultiIndex, BigInt>) -> BinomialPoly {
  let mut p = BinomialPoly::zero(nvars);
  for (k, v) in coeffs {
    p.add_term(k.clone(), v.clone());
  }
  p
}

impl fmt::Display for BinomialPoly {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.terms.is_empty() {
      return write!(f, "0");
    }
    let mut first = true;
    for (idx, c) in &self.terms {
      if first {
        if c.is_negative() {
          write!(f, "-")?;
        }
      } else if c.is_negative() {
        write!(f, " - ")?;
      } else {
        write!(f, " + ")?;
      }
      first = false;
      let a = c.abs();
      let factors: Vec<String> =
        idx.0.iter().enumerate().filter(|(_, &n)| n > 0).map(|(j, &n)| format!("C(x{},{})", j + 1, n)).collect();
      if factors.is_empty() {
        write!(f, "{a}")?;
      } else if a.is_one() {
        write!(f, "{}", factors.join("*"))?;
      } else {
        write!(f, "{a}*{}", factors.join("*"))?;
      }
    }
    Ok(())
  }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
  idx: Vec<u32>,
  c:   String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
  nvars: usize,
  terms: Vec<TermJson>,
}

impl Serialize for BinomialPoly {
  fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
    PolyJson {
      nvars: self.nvars,
      terms: self.terms.iter().map(|(k, v)| TermJson { idx: k.0.clone(), c: v.to_string() }).collect(),
    }
    .serialize(s)
  }
}

impl<'de> Deserialize<'de> for BinomialPoly {
  fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
    use serde::de::Error;
    let raw = PolyJson::deserialize(d)?;
    let mut p = BinomialPoly::zero(raw.nvars);
    for t in raw.terms {
      if t.idx.len() != raw.nvars {
        return Err(D::Error::custom(format!("index {:?} has wrong length", t.idx)));
      }
      let c: BigInt = t.c.parse().map_err(|_| D::Error::custom(format!("bad integer {:?}", t.c)))?;
      p.add_term(MultiIndex(t.idx), c);
    }
    Ok(p)
  }
}

#[derive(Serialize, Deserialize)]
struct RatTermJson {
  idx: Vec<u32>,
  num: String,
  den: String,
}

#[derive(Serialize, Deserialize)]
struct RatPolyJson {
  nvars: usize,
  terms: Vec<RatTermJson>,
}

impl Serialize for RationalPoly {
  fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
    RatPolyJson {
      nvars: self.nvars,
      terms: self
        .terms
        .iter()
        .map(|(k, v)| RatTermJson { idx: k.0.clone(), num: v.numer().to_string(), den: v.denom().to_string() })
        .collect(),
    }
    .serialize(s)
  }
}

impl<'de> Deserialize<'de> for RationalPoly {
  fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
    use serde::de::Error;
    let raw = RatPolyJson::deserialize(d)?;
    let mut p = RationalPoly::zero(raw.nvars);
    for t in raw.terms {
      if t.idx.len() != raw.nvars {
        return Err(D::Error::custom(format!("index {:?} has wrong length", t.idx)));
      }
      let n: BigInt = t.num.parse().map_err(|_| D::Error::custom(format!("bad integer {:?}", t.num)))?;
      let m: BigInt = t.den.parse().map_err(|_| D::Error::custom(format!("bad integer {:?}", t.den)))?;
      if m.is_zero() {
        return Err(D::Error::custom("zero denominator"));
      }
      p.add_term(MultiIndex(t.idx), BigRational::new(n, m));
    }
    Ok(p)
  }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
  if n.is_zero() {
    return None;
  }
  let p = BigInt::from(p);
  let mut v = 0;
  let mut m = n.clone();
  loop {
    let (q, r) = m.div_rem(&p);
    if !r.is_zero() {
      return Some(v);
    }
    m = q;
    v += 1;
  }
}

#[cfg(test)]
mod tests {
  use num_traits::ToPrimitive;

  use super::*;

  fn r(n: i64, d: i64) -> BigRational { BigRational::new(BigInt::from(n), BigInt::from(d)) }

  fn uni(terms: &[(u32, i64)]) -> BinomialPoly {
    BinomialPoly::from_terms(1, terms.iter().map(|&(k, c)| (vec![k], c))).unwrap()
  }

  #[test]
  fn half_x_squared_minus_x_is_choose_two() {
    let p = RationalPoly::from_terms(1, [(vec![2], r(1, 2)), (vec![1], r(-1, 2))]).unwrap();
    let b = BinomialPoly::from_rational_poly(&p).unwrap();
    assert_eq!(b, uni(&[(2, 1)]));
    for x in 0..5 {
      assert_eq!(b.evaluate_i64(&[x]).unwrap(), BigInt::from(x * (x - 1) / 2));
    }
  }

  #[test]
  fn x_squared_expansion() {
    let p = RationalPoly::from_terms(1, [(vec![2], r(1, 1))]).unwrap();
    assert_eq!(BinomialPoly::from_rational_poly(&p).unwrap(), uni(&[(1, 1), (2, 2)]));
    assert_eq!(uni(&[(1, 1), (2, 2)]).to_rational_poly(), p);
  }

  #[test]
  fn half_x_is_not_numerical() {
    let p = RationalPoly::from_terms(1, [(vec![1], r(1, 2))]).unwrap();
    assert!(matches!(BinomialPoly::from_rational_poly(&p), Err(NumaError::NotNumerical(_))));
  }

  #[test]
  fn to_rational_of_choose_two_and_zero() {
    let p = RationalPoly::from_terms(1, [(vec![2], r(1, 2)), (vec![1], r(-1, 2))]).unwrap();
    assert_eq!(uni(&[(2, 1)]).to_rational_poly(), p);
    assert!(BinomialPoly::zero(3).to_rational_poly().is_zero());
  }

  #[test]
  fn evaluation_at_negative_points() {
    assert_eq!(uni(&[(3, 1)]).evaluate_i64(&[-2]).unwrap(), BigInt::from(-4));
    assert_eq!(uni(&[(1, 1)]).evaluate_i64(&[7]).unwrap(), BigInt::from(7));
    assert_eq!(BinomialPoly::constant(3, 11).evaluate_i64(&[5, -9, 2]).unwrap(), BigInt::from(11));
    assert!(matches!(uni(&[(1, 1)]).evaluate_i64(&[1, 2]), Err(NumaError::ArityMismatch { .. })));
  }

  #[test]
  fn products() {
    let x = uni(&[(1, 1)]);
    assert_eq!(x.mul(&x).unwrap(), uni(&[(1, 1), (2, 2)]));
    let c2 = uni(&[(2, 1)]);
    assert_eq!(c2.mul(&c2).unwrap(), uni(&[(2, 1), (3, 6), (4, 6)]));
    let a = uni(&[(0, 3), (2, -5), (4, 1)]);
    assert_eq!(a.mul(&BinomialPoly::one(1)).unwrap(), a);
    assert!(x.mul(&BinomialPoly::one(2)).is_err());
  }

  #[test]
  fn composition_examples() {
    let c2 = uni(&[(2, 1)]);
    assert_eq!(c2.compose(&[uni(&[(1, 1)])]).unwrap(), c2);
    let xy = BinomialPoly::linear(&[1, 1], 0);
    let expect = BinomialPoly::from_terms(2, [(vec![2, 0], 1), (vec![1, 1], 1), (vec![0, 2], 1)]).unwrap();
    assert_eq!(c2.compose(std::slice::from_ref(&xy)).unwrap(), expect);
    assert_eq!(uni(&[(1, 1)]).compose(std::slice::from_ref(&xy)).unwrap(), xy);
  }

  #[test]
  fn additive_fast_path_agrees_with_general_route() {
    let f = BinomialPoly::from_terms(2, [(vec![2, 1], 3), (vec![0, 3], -2), (vec![1, 0], 1)]).unwrap();
    let gs = vec![BinomialPoly::linear(&[1, 1, 0], 0), BinomialPoly::linear(&[0, 0, 1], 0)];
    let fast = f.compose(&gs).unwrap();
    let slow = BinomialPoly::from_rational_poly(
      &f.to_rational_poly().substitute(&gs.iter().map(|g| g.to_rational_poly()).collect::<Vec<_>>()).unwrap(),
    )
    .unwrap();
    assert_eq!(fast, slow);
  }

  #[test]
  fn differences() {
    for k in 1..6 {
      assert_eq!(uni(&[(k, 1)]).finite_difference(0).unwrap(), uni(&[(k - 1, 1)]));
    }
    assert!(BinomialPoly::constant(1, 4).finite_difference(0).unwrap().is_zero());
    let b = BinomialPoly::from_terms(2, [(vec![1, 2], 3)]).unwrap();
    let d = b.finite_difference(1).unwrap();
    assert_eq!(d, BinomialPoly::from_terms(2, [(vec![1, 1], 3)]).unwrap());
    for x in -3..4 {
      for y in -3..4 {
        let lhs = d.evaluate_i64(&[x, y]).unwrap();
        let rhs = b.evaluate_i64(&[x, y + 1]).unwrap() - b.evaluate_i64(&[x, y]).unwrap();
        assert_eq!(lhs, rhs);
      }
    }
    assert!(b.finite_difference(2).is_err());
  }

  #[test]
  fn newton_examples() {
    let c = newton_coefficients_1d(|x| num_traits::pow(BigInt::from(3), x.to_usize().unwrap()), 4);
    assert_eq!(c, [1, 2, 4, 8, 16].iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    let c = newton_coefficients_1d(|x| binomial(x, 2), 4);
    assert_eq!(c, [0, 0, 1, 0, 0].iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    let c = newton_coefficients_1d(|x| x * x * x, 3);
    assert_eq!(c, [0, 1, 6, 6].iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
  }

  #[test]
  fn graded_lex_ordering() {
    let a = MultiIndex(vec![2, 0]);
    let b = MultiIndex(vec![0, 3]);
    let c = MultiIndex(vec![1, 1]);
    assert!(a > c && b > a);
    assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
    assert_eq!(MultiIndex::all_of_degree(0, 0).len(), 1);
  }

  #[test]
  fn json_form() {
    let b = BinomialPoly::from_terms(2, [(vec![0, 1], 5), (vec![2, 0], -1)]).unwrap();
    let s = serde_json::to_string(&b).unwrap();
    assert_eq!(s, r#"{"nvars":2,"terms":[{"idx":[0,1],"c":"5"},{"idx":[2,0],"c":"-1"}]}"#);
    let back: BinomialPoly = serde_json::from_str(&s).unwrap();
    assert_eq!(back, b);
  }
}
