//! Integer homological algebra over dense big-integer matrices.

use std::{collections::BTreeMap, fmt};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{
  binom::binomial,
  error::{NumaError, Result},
};

/// Dense integer matrix, row-major. Acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
  rows: usize,
  cols: usize,
  data: Vec<BigInt>,
}

impl IntMatrix {
  pub fn zeros(rows: usize, cols: usize) -> Self { IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] } }

  pub fn identity(n: usize) -> Self {
    let mut m = Self::zeros(n, n);
    for i in 0..n {
      m[(i, i)] = BigInt::one();
    }
    m
  }

  pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
      return Err(NumaError::InvalidInput("ragged matrix rows".into()));
    }
    Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
  }

  /// Builds from `i64` rows; an empty row list needs `cols` to be meaningful.
  pub fn from_i64(rows: &[&[i64]]) -> Self {
    Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
      .expect("rows of equal length")
  }

  pub fn diagonal(entries: &[i64]) -> Self {
    let mut m = Self::zeros(entries.len(), entries.len());
    for (i, &e) in entries.iter().enumerate() {
      m[(i, i)] = BigInt::from(e);
    }
    m
  }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn shape(&self) -> (usize, usize) { (self.rows, self.cols) }

  pub fn row(&self, i: usize) -> &[BigInt] { &self.data[i * self.cols..(i + 1) * self.cols] }

  pub fn column(&self, j: usize) -> Vec<BigInt> { (0..self.rows).map(|i| self[(i, j)].clone()).collect() }

  pub fn to_rows(&self) -> Vec<Vec<BigInt>> { (0..self.rows).map(|i| self.row(i).to_vec()).collect() }

  pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
    let mut m = Self::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
      assert_eq!(c.len(), rows, "column length");
      for (i, v) in c.iter().enumerate() {
        m[(i, j)] = v.clone();
      }
    }
    m
  }

  pub fn is_zero(&self) -> bool { self.data.iter().all(Zero::is_zero) }

  pub fn transpose(&self) -> Self {
    let mut t = Self::zeros(self.cols, self.rows);
    for i in 0..self.rows {
      for j in 0..self.cols {
        t[(j, i)] = self[(i, j)].clone();
      }
    }
    t
  }

  pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
    if self.cols != other.rows {
      return Err(NumaError::ArityMismatch { expected: self.cols, found: other.rows });
    }
    let mut out = Self::zeros(self.rows, other.cols);
    for i in 0..self.rows {
      for k in 0..self.cols {
        let a = &self[(i, k)];
        if a.is_zero() {
          continue;
        }
        for j in 0..other.cols {
          let b = &other[(k, j)];
          if !b.is_zero() {
            out[(i, j)] += a * b;
          }
        }
      }
    }
    Ok(out)
  }

  pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
    if self.cols != v.len() {
      return Err(NumaError::ArityMismatch { expected: self.cols, found: v.len() });
    }
    Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
  }

  pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
    if self.shape() != other.shape() {
      return Err(NumaError::ArityMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
    }
    Ok(IntMatrix {
      rows: self.rows,
      cols: self.cols,
      data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
    })
  }

  pub fn scale(&self, c: &BigInt) -> IntMatrix {
    IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
  }

  /// Stacks `self` on top of `other`.
  pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
    if self.cols != other.cols {
      return Err(NumaError::ArityMismatch { expected: self.cols, found: other.cols });
    }
    let mut data = self.data.clone();
    data.extend(other.data.iter().cloned());
    Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
  }

  /// Columns `from..` as a new matrix.
  pub fn columns_from(&self, from: usize) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (from..self.cols).map(|j| self.column(j)).collect();
    IntMatrix::from_columns(self.rows, &cols)
  }

  /// Rows `range` as a new matrix.
  pub fn rows_range(&self, range: std::ops::Range<usize>) -> IntMatrix {
    IntMatrix { rows: range.len(), cols: self.cols, data: self.data[range.start * self.cols..range.end * self.cols].to_vec() }
  }

  /// Determinant by fraction-free elimination. Square matrices only.
  pub fn determinant(&self) -> Result<BigInt> {
    if self.rows != self.cols {
      return Err(NumaError::InvalidInput(format!("determinant of non-square {}x{} matrix", self.rows, self.cols)));
    }
    let n = self.rows;
    if n == 0 {
      return Ok(BigInt::one());
    }
    let mut a = self.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
      if a[k][k].is_zero() {
        match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
          Some(i) => {
            a.swap(i, k);
            sign = -sign;
          },
          None => return Ok(BigInt::zero()),
        }
      }
      for i in k + 1..n {
        for j in k + 1..n {
          a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
        }
      }
      prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
  }

  pub fn is_unimodular(&self) -> bool {
    self.rows == self.cols && self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
  }

  fn swap_rows(&mut self, a: usize, b: usize) {
    if a == b {
      return;
    }
    for j in 0..self.cols {
      self.data.swap(a * self.cols + j, b * self.cols + j);
    }
  }

  fn swap_cols(&mut self, a: usize, b: usize) {
    if a == b {
      return;
    }
    for i in 0..self.rows {
      self.data.swap(i * self.cols + a, i * self.cols + b);
    }
  }

  /// row[dst] += q * row[src]
  fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
      return;
    }
    for j in 0..self.cols {
      let v = &self.data[src * self.cols + j] * q;
      self.data[dst * self.cols + j] += v;
    }
  }

  /// col[dst] += q * col[src]
  fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
      return;
    }
    for i in 0..self.rows {
      let v = &self.data[i * self.cols + src] * q;
      self.data[i * self.cols + dst] += v;
    }
  }

  fn negate_row(&mut self, i: usize) {
    for j in 0..self.cols {
      let v = -&self.data[i * self.cols + j];
      self.data[i * self.cols + j] = v;
    }
  }

  fn negate_col(&mut self, j: usize) {
    for i in 0..self.rows {
      let v = -&self.data[i * self.cols + j];
      self.data[i * self.cols + j] = v;
    }
  }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
  type Output = BigInt;

  fn index(&self, (i, j): (usize, usize)) -> &BigInt { &self.data[i * self.cols + j] }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
  fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt { &mut self.data[i * self.cols + j] }
}

impl fmt::Display for IntMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[")?;
    for i in 0..self.rows {
      if i > 0 {
        write!(f, ", ")?;
      }
      let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
      write!(f, "[{}]", r.join(", "))?;
    }
    write!(f, "]")
  }
}

/// Integers serialize as JSON numbers when they fit in `i64`, otherwise as
/// decimal strings; both forms are accepted on input.
pub mod bigint_json {
  use super::*;

  #[derive(Serialize, Deserialize)]
  #[serde(untagged)]
  pub(crate) enum Repr {
    Num(i64),
    Str(String),
  }

  pub(crate) fn to_repr(v: &BigInt) -> Repr {
    match v.to_i64() {
      Some(n) => Repr::Num(n),
      None => Repr::Str(v.to_string()),
    }
  }

  pub(crate) fn from_repr(r: Repr) -> std::result::Result<BigInt, String> {
    match r {
      Repr::Num(n) => Ok(BigInt::from(n)),
      Repr::Str(s) => s.trim().parse().map_err(|_| format!("bad integer {s:?}")),
    }
  }

  pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> { to_repr(v).serialize(s) }

  pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    from_repr(Repr::deserialize(d)?).map_err(serde::de::Error::custom)
  }

  pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
      v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
      Vec::<Repr>::deserialize(d)?.into_iter().map(|r| from_repr(r).map_err(serde::de::Error::custom)).collect()
    }
  }
}

impl Serialize for IntMatrix {
  fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<bigint_json::Repr>> =
      (0..self.rows).map(|i| self.row(i).iter().map(bigint_json::to_repr).collect()).collect();
    rows.serialize(s)
  }
}

impl<'de> Deserialize<'de> for IntMatrix {
  fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
    use serde::de::Error;
    let raw = Vec::<Vec<bigint_json::Repr>>::deserialize(d)?;
    let rows: Vec<Vec<BigInt>> = raw
      .into_iter()
      .map(|r| r.into_iter().map(bigint_json::from_repr).collect::<std::result::Result<Vec<_>, _>>())
      .collect::<std::result::Result<_, _>>()
      .map_err(D::Error::custom)?;
    IntMatrix::from_rows(rows).map_err(D::Error::custom)
  }
}

/// Smith normal form `D = U A V` with `U`, `V` unimodular. The inverses are
/// tracked alongside so kernels and solutions come out without a second
/// elimination.
#[derive(Clone, Debug)]
pub struct Snf {
  pub u:     IntMatrix,
  pub u_inv: IntMatrix,
  pub d:     IntMatrix,
  pub v:     IntMatrix,
  pub v_inv: IntMatrix,
  rank:      usize,
}

impl Snf {
  pub fn rank(&self) -> usize { self.rank }

  /// The nonzero diagonal entries `d_1 | d_2 | ...`.
  pub fn invariant_factors(&self) -> Vec<BigInt> { (0..self.rank).map(|i| self.d[(i, i)].clone()).collect() }

  /// Columns of `V` spanning the kernel of `A` (a saturated basis).
  pub fn kernel(&self) -> IntMatrix { self.v.columns_from(self.rank) }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
  let (m, n) = a.shape();
  let mut d = a.clone();
  let mut u = IntMatrix::identity(m);
  let mut u_inv = IntMatrix::identity(m);
  let mut v = IntMatrix::identity(n);
  let mut v_inv = IntMatrix::identity(n);
  let mut rank = 0;

  for t in 0..m.min(n) {
    // smallest nonzero entry in the trailing block
    let pivot = |d: &IntMatrix| {
      let mut best: Option<(usize, usize)> = None;
      for i in t..m {
        for j in t..n {
          let x = &d[(i, j)];
          if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
            best = Some((i, j));
          }
        }
      }
      best
    };
    let Some((pi, pj)) = pivot(&d) else { break };
    d.swap_rows(t, pi);
    u.swap_rows(t, pi);
    u_inv.swap_cols(t, pi);
    d.swap_cols(t, pj);
    v.swap_cols(t, pj);
    v_inv.swap_rows(t, pj);

    loop {
      let mut dirty = false;
      for i in t + 1..m {
        if d[(i, t)].is_zero() {
          continue;
        }
        let q = d[(i, t)].div_floor(&d[(t, t)]);
        let nq = -&q;
        d.add_row(i, t, &nq);
        u.add_row(i, t, &nq);
        u_inv.add_col(t, i, &q);
        if !d[(i, t)].is_zero() {
          dirty = true;
        }
      }
      for j in t + 1..n {
        if d[(t, j)].is_zero() {
          continue;
        }
        let q = d[(t, j)].div_floor(&d[(t, t)]);
        let nq = -&q;
        d.add_col(j, t, &nq);
        v.add_col(j, t, &nq);
        v_inv.add_row(t, j, &q);
        if !d[(t, j)].is_zero() {
          dirty = true;
        }
      }
      if dirty {
        // a smaller remainder appeared in row/column t; move it to the pivot
        let mut best = (t, t);
        for i in t..m {
          let x = &d[(i, t)];
          if !x.is_zero() && x.abs() < d[best].abs() {
            best = (i, t);
          }
        }
        for j in t..n {
          let x = &d[(t, j)];
          if !x.is_zero() && x.abs() < d[best].abs() {
            best = (t, j);
          }
        }
        let (bi, bj) = best;
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        u_inv.swap_cols(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        v_inv.swap_rows(t, bj);
        continue;
      }
      // row and column cleared; enforce divisibility of the trailing block
      let p = d[(t, t)].clone();
      let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
      match bad {
        Some(i) => {
          let one = BigInt::one();
          d.add_row(t, i, &one);
          u.add_row(t, i, &one);
          u_inv.add_col(i, t, &-one);
        },
        None => break,
      }
    }
    if d[(t, t)].is_negative() {
      d.negate_row(t);
      u.negate_row(t);
      u_inv.negate_col(t);
    }
    rank = t + 1;
  }
  Snf { u, u_inv, d, v, v_inv, rank }
}

/// Integer solution of `A x = b`, or a certificate that none exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IntegerSolution {
  Solution(#[serde(with = "bigint_json::vec")] Vec<BigInt>),
  /// A functional `w` with `w A ≡ 0 (mod modulus)` but `w b ≢ 0 (mod
  /// modulus)`; `modulus = 0` means exact vanishing.
  NoSolution {
    #[serde(with = "bigint_json::vec")]
    functional: Vec<BigInt>,
    #[serde(with = "bigint_json")]
    modulus:    BigInt,
  },
}

impl IntegerSolution {
  pub fn is_solution(&self) -> bool { matches!(self, IntegerSolution::Solution(_)) }
}

pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<IntegerSolution> {
  if b.len() != a.rows() {
    return Err(NumaError::ArityMismatch { expected: a.rows(), found: b.len() });
  }
  let snf = smith_normal_form(a);
  let y = snf.u.mul_vec(b)?;
  let r = snf.rank();
  for (i, yi) in y.iter().enumerate() {
    let modulus = if i < r { snf.d[(i, i)].clone() } else { BigInt::zero() };
    let ok = if i < r { yi.is_multiple_of(&modulus) } else { yi.is_zero() };
    if !ok {
      return Ok(IntegerSolution::NoSolution { functional: snf.u.row(i).to_vec(), modulus });
    }
  }
  let mut z = vec![BigInt::zero(); a.cols()];
  for i in 0..r {
    z[i] = &y[i] / &snf.d[(i, i)];
  }
  Ok(IntegerSolution::Solution(snf.v.mul_vec(&z)?))
}

/// Checks a no-solution certificate independently of how it was found.
pub fn verify_no_solution(a: &IntMatrix, b: &[BigInt], functional: &[BigInt], modulus: &BigInt) -> bool {
  let reduce = |x: &BigInt| if modulus.is_zero() { x.clone() } else { x.mod_floor(modulus) };
  let wa_zero = (0..a.cols()).all(|j| reduce(&(0..a.rows()).map(|i| &functional[i] * &a[(i, j)]).sum()).is_zero());
  let wb: BigInt = functional.iter().zip(b).map(|(w, x)| w * x).sum();
  wa_zero && !reduce(&wb).is_zero()
}

/// Hermite normal form basis of the row lattice spanned by `rows`: pivots
/// positive, entries above each pivot reduced into `[0, pivot)`. Zero rows
/// are dropped, so equal lattices give equal output.
pub fn hermite_basis(rows: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
  let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
  let mut out: Vec<Vec<BigInt>> = Vec::new();
  let mut pivots = Vec::new();
  for col in 0..width {
    loop {
      let nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
      if nz.len() <= 1 {
        break;
      }
      let p = *nz.iter().min_by_key(|&&i| a[i][col].abs()).unwrap();
      for &i in &nz {
        if i == p {
          continue;
        }
        let q = a[i][col].div_floor(&a[p][col]);
        let prow = a[p].clone();
        for (x, y) in a[i].iter_mut().zip(&prow) {
          *x -= &q * y;
        }
      }
    }
    if let Some(i) = (0..a.len()).find(|&i| !a[i][col].is_zero()) {
      let mut row = a.remove(i);
      if row[col].is_negative() {
        row.iter_mut().for_each(|x| *x = -&*x);
      }
      out.push(row);
      pivots.push(col);
    }
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
  }
  for k in 0..out.len() {
    let col = pivots[k];
    for i in 0..k {
      let q = out[i][col].div_floor(&out[k][col]);
      if !q.is_zero() {
        let prow = out[k].clone();
        for (x, y) in out[i].iter_mut().zip(&prow) {
          *x -= &q * y;
        }
      }
    }
  }
  out
}

/// Coordinates of `v` in a Hermite basis, if `v` lies in the lattice.
pub fn hermite_coordinates(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
  let mut rest = v.to_vec();
  let mut coords = Vec::with_capacity(basis.len());
  for row in basis {
    let col = row.iter().position(|x| !x.is_zero())?;
    let (q, r) = rest[col].div_rem(&row[col]);
    if !r.is_zero() {
      return None;
    }
    for (x, y) in rest.iter_mut().zip(row) {
      *x -= &q * y;
    }
    coords.push(q);
  }
  rest.iter().all(Zero::is_zero).then_some(coords)
}

/// Direction of a stored complex. Cohomological complexes are stored with
/// degrees negated so a single homology routine serves both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
  #[default]
  Homological,
  Cohomological,
}

/// Bounded complex of finitely generated free abelian groups,
/// `d_n : C_n -> C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
  ranks:       BTreeMap<i64, usize>,
  diffs:       BTreeMap<i64, IntMatrix>,
  orientation: Orientation,
}

impl FreeComplex {
  /// Validates shapes and `d_{n-1} d_n = 0`.
  pub fn new(ranks: BTreeMap<i64, usize>, diffs: BTreeMap<i64, IntMatrix>) -> Result<Self> {
    let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
    let c = FreeComplex { ranks, diffs, orientation: Orientation::Homological };
    for (&n, d) in &c.diffs {
      if d.shape() != (c.rank(n - 1), c.rank(n)) {
        return Err(NumaError::InconsistentData(format!(
          "d_{n} has shape {:?}, expected {:?}",
          d.shape(),
          (c.rank(n - 1), c.rank(n))
        )));
      }
    }
    for &n in c.diffs.keys() {
      if !c.differential(n - 1).mul(&c.differential(n))?.is_zero() {
        return Err(NumaError::InconsistentData(format!("d_{} d_{} is not zero", n - 1, n)));
      }
    }
    Ok(c)
  }

  /// Cochain complex with `delta^n : C^n -> C^{n+1}` given by `coboundaries[n]`.
  pub fn from_cochain(ranks: BTreeMap<i64, usize>, coboundaries: BTreeMap<i64, IntMatrix>) -> Result<Self> {
    let r = ranks.into_iter().map(|(n, v)| (-n, v)).collect();
    let d = coboundaries.into_iter().map(|(n, m)| (-n, m)).collect();
    let mut c = Self::new(r, d)?;
    c.orientation = Orientation::Cohomological;
    Ok(c)
  }

  /// Free abelian group of rank 1 in one degree.
  pub fn point(degree: i64) -> Self {
    Self::new([(degree, 1)].into_iter().collect(), BTreeMap::new()).expect("valid")
  }

  /// Two-term complex `Z^a --m--> Z^b` in degrees `top -> top-1`.
  pub fn two_term(top: i64, m: IntMatrix) -> Result<Self> {
    let ranks = [(top, m.cols()), (top - 1, m.rows())].into_iter().collect();
    Self::new(ranks, [(top, m)].into_iter().collect())
  }

  pub fn orientation(&self) -> Orientation { self.orientation }

  pub fn rank(&self, n: i64) -> usize { self.ranks.get(&n).copied().unwrap_or(0) }

  pub fn ranks(&self) -> &BTreeMap<i64, usize> { &self.ranks }

  pub fn differential(&self, n: i64) -> IntMatrix {
    self.diffs.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(n - 1), self.rank(n)))
  }

  pub fn max_degree(&self) -> Option<i64> { self.ranks.keys().next_back().copied() }

  pub fn min_degree(&self) -> Option<i64> { self.ranks.keys().next().copied() }

  /// Rank function `r(k) = rk C_k` for `k >= 0`.
  pub fn rank_function(&self) -> Vec<usize> {
    let top = self.max_degree().unwrap_or(0).max(0) as usize;
    (0..=top).map(|k| self.rank(k as i64)).collect()
  }

  /// `H_n`, or `H^n` for cohomological complexes.
  pub fn homology(&self, n: i64) -> FinAbGroup {
    let n = match self.orientation {
      Orientation::Homological => n,
      Orientation::Cohomological => -n,
    };
    homology_from(self.rank(n), &self.differential(n), &self.differential(n + 1))
  }

  /// Applies `P_n` (unimodular) as a change of basis in every degree:
  /// `d'_n = P_{n-1} d_n P_n^{-1}`.
  pub fn change_basis(&self, bases: &BTreeMap<i64, (IntMatrix, IntMatrix)>) -> Result<Self> {
    let mut diffs = BTreeMap::new();
    for (&n, d) in &self.diffs {
      let mut m = d.clone();
      if let Some((_, pinv)) = bases.get(&n) {
        m = m.mul(pinv)?;
      }
      if let Some((p, _)) = bases.get(&(n - 1)) {
        m = p.mul(&m)?;
      }
      diffs.insert(n, m);
    }
    let mut c = Self::new(self.ranks.clone(), diffs)?;
    c.orientation = self.orientation;
    Ok(c)
  }
}

/// `ker(d_out) / im(d_in)` on a free group of rank `rank`.
pub fn homology_from(rank: usize, d_out: &IntMatrix, d_in: &IntMatrix) -> FinAbGroup {
  let r_out = if d_out.rows() == 0 || d_out.cols() == 0 { 0 } else { smith_normal_form(d_out).rank() };
  let (r_in, torsion) = if d_in.rows() == 0 || d_in.cols() == 0 {
    (0, Vec::new())
  } else {
    let s = smith_normal_form(d_in);
    (s.rank(), s.invariant_factors().into_iter().filter(|f| !f.is_one()).collect())
  };
  FinAbGroup { free_rank: rank - r_out - r_in, torsion }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
  ranks:       BTreeMap<String, usize>,
  #[serde(default)]
  diff:        BTreeMap<String, IntMatrix>,
  #[serde(default, skip_serializing_if = "is_homological")]
  orientation: Orientation,
}

fn is_homological(o: &Orientation) -> bool { *o == Orientation::Homological }

impl Serialize for FreeComplex {
  fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
    ComplexJson {
      ranks:       self.ranks.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
      diff:        self.diffs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
      orientation: self.orientation,
    }
    .serialize(s)
  }
}

impl<'de> Deserialize<'de> for FreeComplex {
  fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
    use serde::de::Error;
    let raw = ComplexJson::deserialize(d)?;
    let key = |k: &str| k.trim().parse::<i64>().map_err(|_| D::Error::custom(format!("bad degree {k:?}")));
    let mut ranks = BTreeMap::new();
    for (k, v) in raw.ranks {
      ranks.insert(key(&k)?, v);
    }
    let mut diffs = BTreeMap::new();
    for (k, v) in raw.diff {
      let n = key(&k)?;
      // empty JSON matrices lose their column count; rebuild from ranks
      let v = if v.rows() == 0 || v.cols() == 0 {
        IntMatrix::zeros(ranks.get(&(n - 1)).copied().unwrap_or(0), ranks.get(&n).copied().unwrap_or(0))
      } else {
        v
      };
      diffs.insert(n, v);
    }
    let mut c = FreeComplex::new(ranks, diffs).map_err(D::Error::custom)?;
    c.orientation = raw.orientation;
    Ok(c)
  }
}

/// Finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t`, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FinAbGroup {
  pub free_rank: usize,
  #[serde(with = "bigint_json::vec")]
  pub torsion:   Vec<BigInt>,
}

impl FinAbGroup {
  pub fn zero() -> Self { Self::default() }

  pub fn free(rank: usize) -> Self { FinAbGroup { free_rank: rank, torsion: Vec::new() } }

  /// Normalizes arbitrary cyclic orders into the divisibility chain.
  pub fn new(free_rank: usize, cyclic_orders: &[i64]) -> Result<Self> {
    if cyclic_orders.iter().any(|&d| d < 0) {
      return Err(NumaError::InvalidInput("negative cyclic order".into()));
    }
    let extra_free = cyclic_orders.iter().filter(|&&d| d == 0).count();
    let diag: Vec<i64> = cyclic_orders.iter().copied().filter(|&d| d > 1).collect();
    let snf = smith_normal_form(&IntMatrix::diagonal(&diag));
    let torsion = snf.invariant_factors().into_iter().filter(|f| !f.is_one()).collect();
    Ok(FinAbGroup { free_rank: free_rank + extra_free, torsion })
  }

  pub fn is_zero(&self) -> bool { self.free_rank == 0 && self.torsion.is_empty() }

  pub fn is_valid(&self) -> bool {
    self.torsion.iter().all(|d| *d >= BigInt::from(2)) && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
  }

  /// Direct sum, renormalized.
  pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
    let mut diag: Vec<BigInt> = self.torsion.clone();
    diag.extend(other.torsion.iter().cloned());
    let n = diag.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, d) in diag.into_iter().enumerate() {
      m[(i, i)] = d;
    }
    let torsion = smith_normal_form(&m).invariant_factors().into_iter().filter(|f| !f.is_one()).collect();
    FinAbGroup { free_rank: self.free_rank + other.free_rank, torsion }
  }
}

impl fmt::Display for FinAbGroup {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut parts = Vec::new();
    match self.free_rank {
      0 => {},
      1 => parts.push("Z".to_string()),
      r => parts.push(format!("Z^{r}")),
    }
    parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
      write!(f, "0")
    } else {
      write!(f, "{}", parts.join(" + "))
    }
  }
}

/// Endomorphism of `coker R` induced by `F`, in Smith coordinates where
/// `coker R = Z/orders[0] + ... ` (order 0 meaning a free summand).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelMap {
  pub group:  FinAbGroup,
  #[serde(with = "bigint_json::vec")]
  pub orders: Vec<BigInt>,
  pub matrix: IntMatrix,
}

impl CokernelMap {
  /// Surjectivity, which for an endomorphism of a finitely generated
  /// abelian group is equivalent to bijectivity.
  pub fn is_automorphism(&self) -> bool {
    let k = self.orders.len();
    if k == 0 {
      return true;
    }
    let mut stacked = IntMatrix::zeros(k, 2 * k);
    for i in 0..k {
      for j in 0..k {
        stacked[(i, j)] = self.matrix[(i, j)].clone();
      }
      stacked[(i, k + i)] = self.orders[i].clone();
    }
    let snf = smith_normal_form(&stacked);
    snf.rank() == k && snf.invariant_factors().iter().all(One::is_one)
  }
}

/// `F` must map the relation lattice `im R` into itself.
pub fn cokernel_endomorphism(relations: &IntMatrix, f: &IntMatrix) -> Result<CokernelMap> {
  let m = relations.rows();
  if f.shape() != (m, m) {
    return Err(NumaError::ArityMismatch { expected: m, found: f.rows() });
  }
  let snf = smith_normal_form(relations);
  let order = |i: usize| if i < snf.rank() { snf.d[(i, i)].clone() } else { BigInt::zero() };
  let moved = snf.u.mul(&f.mul(relations)?)?.mul(&snf.v)?;
  for i in 0..m {
    for j in 0..moved.cols() {
      let d = order(i);
      let ok = if d.is_zero() { moved[(i, j)].is_zero() } else { moved[(i, j)].is_multiple_of(&d) };
      if !ok {
        return Err(NumaError::InconsistentData("map does not preserve the relations".into()));
      }
    }
  }
  let keep: Vec<usize> = (0..m).filter(|&i| !order(i).is_one()).collect();
  let full = snf.u.mul(f)?.mul(&snf.u_inv)?;
  let mut matrix = IntMatrix::zeros(keep.len(), keep.len());
  for (a, &i) in keep.iter().enumerate() {
    for (b, &j) in keep.iter().enumerate() {
      matrix[(a, b)] = full[(i, j)].clone();
    }
  }
  let orders: Vec<BigInt> = keep.iter().map(|&i| order(i)).collect();
  let free = orders.iter().filter(|d| d.is_zero()).count();
  let torsion = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
  Ok(CokernelMap { group: FinAbGroup { free_rank: free, torsion }, orders, matrix })
}

/// `(g(M), g(tor M))`: minimal generator counts of `M` and of its torsion.
pub fn min_generators(m: &FinAbGroup) -> (usize, usize) { (m.free_rank + m.torsion.len(), m.torsion.len()) }

/// Two-term free resolution `F_1 -> F_0 -> M` with `rk F_0 = g(M)` and
/// `rk F_1 = g(tor M)`.
pub fn minimal_resolution(m: &FinAbGroup) -> FreeComplex {
  let (g, t) = min_generators(m);
  let mut d = IntMatrix::zeros(g, t);
  for (k, f) in m.torsion.iter().enumerate() {
    d[(k, k)] = f.clone();
  }
  let ranks = [(0, g), (1, t)].into_iter().collect();
  let diffs = if t > 0 { [(1, d)].into_iter().collect() } else { BTreeMap::new() };
  FreeComplex::new(ranks, diffs).expect("two-term complex")
}

/// `T(r)(i) = sum_k C(i, k) r(k)`: the rank of `Γ(C)_i` when `rk C_k = r(k)`.
pub fn t_rank(r: &[usize], i: usize) -> BigInt {
  let bi = BigInt::from(i);
  r.iter().enumerate().map(|(k, &rk)| binomial(&bi, k as u32) * BigInt::from(rk)).sum()
}

/// Per-stage homotopy data `(i, g_i, h_i)` for the minimality bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageData {
  pub degree: usize,
  pub g:      usize,
  pub h:      usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Minimality {
  Minimal,
  Special,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
  #[serde(with = "bigint_json::vec")]
  pub bounds:  Vec<BigInt>,
  pub ranks:   Vec<usize>,
  pub verdict: Minimality,
}

/// `τ_i` for one stage: `g` at degree `i`, `h` at degree `i+1`.
pub fn stage_rank_function(stage: &StageData) -> Vec<usize> {
  let mut r = vec![0; stage.degree + 2];
  r[stage.degree] = stage.g;
  r[stage.degree + 1] = stage.h;
  r
}

/// Compares level ranks against `sum_i T(τ_i)(n)`.
pub fn minimality_audit(ranks: &[usize], stages: &[StageData]) -> Result<MinimalityReport> {
  let bounds: Vec<BigInt> =
    (0..ranks.len()).map(|n| stages.iter().map(|s| t_rank(&stage_rank_function(s), n)).sum()).collect();
  let mut strict = false;
  for (n, (r, b)) in ranks.iter().zip(&bounds).enumerate() {
    let r = BigInt::from(*r);
    if r < *b {
      return Err(NumaError::InconsistentData(format!("rank {r} at level {n} is below the bound {b}")));
    }
    strict |= r > *b;
  }
  let verdict = if strict { Minimality::Special } else { Minimality::Minimal };
  Ok(MinimalityReport { bounds, ranks: ranks.to_vec(), verdict })
}

#[cfg(test)]
mod tests {
  use super::*;

  fn bi(v: i64) -> BigInt { BigInt::from(v) }

  fn check_snf(a: &IntMatrix) -> Snf {
    let s = smith_normal_form(a);
    assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
    assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
    assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
    let f = s.invariant_factors();
    assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
    assert!(f.iter().all(|x| x.is_positive()));
    s
  }

  #[test]
  fn snf_examples() {
    let s = check_snf(&IntMatrix::diagonal(&[2, 3]));
    assert_eq!(s.invariant_factors(), vec![bi(1), bi(6)]);
    let z = IntMatrix::zeros(2, 3);
    let s = check_snf(&z);
    assert_eq!(s.rank(), 0);
    assert_eq!(s.u, IntMatrix::identity(2));
    assert_eq!(s.v, IntMatrix::identity(3));
    let s = check_snf(&IntMatrix::from_i64(&[&[2]]));
    assert_eq!(s.d, IntMatrix::from_i64(&[&[2]]));
  }

  #[test]
  fn snf_needs_divisibility_fix() {
    let a = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
    assert_eq!(check_snf(&a).invariant_factors(), vec![bi(2), bi(2), bi(60)]);
  }

  #[test]
  fn homology_examples() {
    let c = FreeComplex::two_term(1, IntMatrix::from_i64(&[&[2]])).unwrap();
    assert_eq!(c.homology(0), FinAbGroup { free_rank: 0, torsion: vec![bi(2)] });
    assert!(c.homology(1).is_zero());
    let p = FreeComplex::point(3);
    assert_eq!(p.homology(3), FinAbGroup::free(1));
    let c = FreeComplex::two_term(1, IntMatrix::from_i64(&[&[1, 0], &[0, 3]])).unwrap();
    assert_eq!(c.homology(0).to_string(), "Z/3");
    assert!(c.homology(1).is_zero());
  }

  #[test]
  fn d_squared_must_vanish() {
    let ranks = [(0, 1), (1, 1), (2, 1)].into_iter().collect();
    let diffs = [(1, IntMatrix::from_i64(&[&[1]])), (2, IntMatrix::from_i64(&[&[1]]))].into_iter().collect();
    assert!(matches!(FreeComplex::new(ranks, diffs), Err(NumaError::InconsistentData(_))));
  }

  #[test]
  fn generators_and_resolutions() {
    let m = FinAbGroup::new(1, &[2, 4]).unwrap();
    assert_eq!(min_generators(&m), (3, 2));
    assert_eq!(min_generators(&FinAbGroup::free(5)), (5, 0));
    assert_eq!(min_generators(&FinAbGroup::zero()), (0, 0));

    let m = FinAbGroup::new(1, &[2]).unwrap();
    let r = minimal_resolution(&m);
    assert_eq!((r.rank(0), r.rank(1)), (2, 1));
    assert_eq!(r.differential(1), IntMatrix::from_i64(&[&[2], &[0]]));
    assert_eq!(r.homology(0), m);
    assert!(r.homology(1).is_zero());

    let r = minimal_resolution(&FinAbGroup::free(3));
    assert_eq!((r.rank(0), r.rank(1)), (3, 0));
    let r = minimal_resolution(&FinAbGroup::new(0, &[6]).unwrap());
    assert_eq!(r.differential(1), IntMatrix::from_i64(&[&[6]]));
  }

  #[test]
  fn t_rank_examples() {
    for n in 0..8 {
      assert_eq!(t_rank(&[1, 1], n), bi(n as i64 + 1));
      assert_eq!(t_rank(&[1], n), bi(1));
      assert_eq!(t_rank(&[0, 0, 1], n), binomial(&bi(n as i64), 2));
    }
  }

  #[test]
  fn minimality_examples() {
    let stage = StageData { degree: 1, g: 1, h: 0 };
    let ranks: Vec<usize> = (0..6).collect();
    assert_eq!(minimality_audit(&ranks, &[stage]).unwrap().verdict, Minimality::Minimal);

    let stage = StageData { degree: 1, g: 1, h: 1 };
    let res = minimal_resolution(&FinAbGroup::new(0, &[2]).unwrap());
    // the resolution shifted up by one degree
    let shifted = vec![0, res.rank(0), res.rank(1)];
    let ranks: Vec<usize> = (0..6).map(|n| t_rank(&shifted, n).to_usize().unwrap()).collect();
    assert_eq!(minimality_audit(&ranks, &[stage]).unwrap().verdict, Minimality::Minimal);
    let bigger: Vec<usize> = ranks.iter().map(|r| r + 1).collect();
    assert_eq!(minimality_audit(&bigger, &[stage]).unwrap().verdict, Minimality::Special);
    let mut smaller = ranks.clone();
    smaller[3] -= 1;
    assert!(matches!(minimality_audit(&smaller, &[stage]), Err(NumaError::InconsistentData(_))));
  }

  #[test]
  fn integer_solve_and_certificate() {
    let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
    match solve_integer(&a, &[bi(4), bi(9)]).unwrap() {
      IntegerSolution::Solution(x) => assert_eq!(x, vec![bi(2), bi(3)]),
      other => panic!("{other:?}"),
    }
    match solve_integer(&a, &[bi(1), bi(0)]).unwrap() {
      IntegerSolution::NoSolution { functional, modulus } => {
        assert!(verify_no_solution(&a, &[bi(1), bi(0)], &functional, &modulus));
      },
      other => panic!("{other:?}"),
    }
  }

  #[test]
  fn hermite_basis_is_canonical() {
    let a = hermite_basis(&[vec![bi(2), bi(4)], vec![bi(0), bi(6)]], 2);
    let b = hermite_basis(&[vec![bi(2), bi(10)], vec![bi(2), bi(4)], vec![bi(4), bi(14)]], 2);
    assert_eq!(a, b);
    assert_eq!(hermite_coordinates(&a, &[bi(2), bi(10)]).map(|c| c.len()), Some(2));
    assert_eq!(hermite_coordinates(&a, &[bi(1), bi(0)]), None);
  }

  #[test]
  fn determinant_small() {
    assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[7, 4]]).determinant().unwrap(), bi(1));
    assert_eq!(IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant().unwrap(), bi(-2));
  }

  #[test]
  fn complex_json() {
    let c = FreeComplex::two_term(1, IntMatrix::from_i64(&[&[2]])).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(s, r#"{"ranks":{"0":1,"1":1},"diff":{"1":[[2]]}}"#);
    let back: FreeComplex = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
  }
}
