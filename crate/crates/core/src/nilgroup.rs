//! Torsion-free nilpotent groups in Malcev coordinates.
//!
//! A [`MalcevGroup`] identifies the group with `Z^d` so that multiplication
//! and inversion are numerical maps. The standard examples are the groups
//! `U_n(Z)` of unipotent upper triangular integer matrices, with the
//! strictly upper entries as coordinates, ordered by distance from the
//! diagonal and then by row.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{seq::SliceRandom, Rng};
use serde::Serialize;

use crate::{
  binom::{binomial_rational, BinomialPoly, MultiIndex, RationalPoly},
  coeff::PadicApprox,
  error::{NumaError, Result},
  homalg::{hermite_basis, hermite_coordinates, IntMatrix},
  numring::free_tensor,
};

/// Group structure on `Z^d` given by numerical multiplication and inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MalcevGroup {
  pub dim:        usize,
  /// `d` polynomials in `2d` variables: `(x, y) -> x·y`.
  pub mult:       Vec<BinomialPoly>,
  /// `d` polynomials in `d` variables.
  pub inv:        Vec<BinomialPoly>,
  #[serde(with = "crate::homalg::bigint_json::vec")]
  pub unit:       Vec<BigInt>,
  #[serde(serialize_with = "serialize_vectors")]
  pub generators: Vec<Vec<BigInt>>,
}

fn serialize_vectors<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
  use serde::ser::SerializeSeq;
  let mut seq = s.serialize_seq(Some(v.len()))?;
  for x in v {
    let row: Vec<String> = x.iter().map(ToString::to_string).collect();
    seq.serialize_element(&row)?;
  }
  seq.end()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupAxiomReport {
  pub failures: Vec<String>,
}

impl GroupAxiomReport {
  pub fn passed(&self) -> bool { self.failures.is_empty() }
}

impl MalcevGroup {
  /// Validates arities and the group axioms.
  pub fn new(mult: Vec<BinomialPoly>, inv: Vec<BinomialPoly>, unit: Vec<BigInt>, generators: Vec<Vec<BigInt>>) -> Result<Self> {
    let g = MalcevGroup { dim: unit.len(), mult, inv, unit, generators };
    let rep = group_axioms(&g);
    if !rep.passed() {
      return Err(NumaError::NotAGroup(rep.failures.join("; ")));
    }
    Ok(g)
  }

  /// Builds from rational-coefficient laws, rejecting non-numerical ones.
  pub fn from_rational_laws(
    mult: &[RationalPoly],
    inv: &[RationalPoly],
    unit: Vec<BigInt>,
    generators: Vec<Vec<BigInt>>,
  ) -> Result<Self> {
    let mult = mult.iter().map(BinomialPoly::from_rational_poly).collect::<Result<Vec<_>>>()?;
    let inv = inv.iter().map(BinomialPoly::from_rational_poly).collect::<Result<Vec<_>>>()?;
    Self::new(mult, inv, unit, generators)
  }

  /// `(Z^d, +)` with the standard basis as generators.
  pub fn abelian(d: usize) -> Self {
    let mult = (0..d)
      .map(|j| {
        let mut c = vec![0i64; 2 * d];
        c[j] = 1;
        c[d + j] = 1;
        BinomialPoly::linear(&c, 0)
      })
      .collect();
    let inv = (0..d)
      .map(|j| {
        let mut c = vec![0i64; d];
        c[j] = -1;
        BinomialPoly::linear(&c, 0)
      })
      .collect();
    let generators = (0..d).map(|j| unit_vector(d, j)).collect();
    MalcevGroup { dim: d, mult, inv, unit: vec![BigInt::zero(); d], generators }
  }

  pub fn multiply(&self, a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut p = a.to_vec();
    p.extend_from_slice(b);
    self.mult.iter().map(|m| m.evaluate(&p)).collect()
  }

  pub fn inverse(&self, a: &[BigInt]) -> Result<Vec<BigInt>> { self.inv.iter().map(|m| m.evaluate(a)).collect() }

  /// The maps `x -> x·s` as polynomials in `d` variables.
  pub fn right_translation(&self, s: &[BigInt]) -> Vec<BinomialPoly> {
    let d = self.dim;
    let inner: Vec<BinomialPoly> = (0..2 * d)
      .map(|j| if j < d { BinomialPoly::var(d, j) } else { BinomialPoly::constant(d, s[j - d].clone()) })
      .collect();
    self.mult.iter().map(|m| m.compose_into(&inner, d).expect("arity")).collect()
  }

  /// Elements reachable by words of length at most `radius` in the
  /// generators and their inverses.
  pub fn word_ball(&self, radius: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut letters = self.generators.clone();
    for g in &self.generators {
      letters.push(self.inverse(g)?);
    }
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    seen.insert(self.unit.clone());
    let mut frontier = vec![self.unit.clone()];
    for _ in 0..radius {
      let mut next = Vec::new();
      for w in &frontier {
        for l in &letters {
          let p = self.multiply(w, l)?;
          if seen.insert(p.clone()) {
            next.push(p);
          }
        }
      }
      frontier = next;
    }
    Ok(seen.into_iter().collect())
  }
}

fn unit_vector(d: usize, j: usize) -> Vec<BigInt> {
  let mut v = vec![BigInt::zero(); d];
  v[j] = BigInt::one();
  v
}

/// Strictly upper positions of an `n×n` matrix, by superdiagonal distance and
/// then row.
pub fn unipotent_coordinates(n: usize) -> Vec<(usize, usize)> {
  (1..n).flat_map(|dist| (0..n - dist).map(move |i| (i, i + dist))).collect()
}

/// `U_n(Z)` in Malcev coordinates, generated by the elementary matrices on
/// the first superdiagonal.
pub fn unipotent_group(n: usize) -> Result<MalcevGroup> {
  if n < 2 {
    return Err(NumaError::InvalidInput(format!("unipotent_group needs n >= 2, got {n}")));
  }
  let coords = unipotent_coordinates(n);
  let d = coords.len();
  let pos: BTreeMap<(usize, usize), usize> = coords.iter().enumerate().map(|(k, &p)| (p, k)).collect();
  let sym = |nvars: usize, offset: usize| -> Vec<Vec<RationalPoly>> {
    (0..n)
      .map(|i| {
        (0..n)
          .map(|j| {
            if i == j {
              RationalPoly::constant(nvars, BigRational::one())
            } else if i < j {
              RationalPoly::var(nvars, offset + pos[&(i, j)])
            } else {
              RationalPoly::zero(nvars)
            }
          })
          .collect()
      })
      .collect()
  };
  let a = sym(2 * d, 0);
  let b = sym(2 * d, d);
  let prod = poly_matmul(&a, &b);
  let mult: Vec<RationalPoly> = coords.iter().map(|&(i, j)| prod[i][j].clone()).collect();

  // (I + N)^{-1} = sum_k (-N)^k
  let x = sym(d, 0);
  let neg_n: Vec<Vec<RationalPoly>> = (0..n)
    .map(|i| (0..n).map(|j| if i < j { -&x[i][j] } else { RationalPoly::zero(d) }).collect())
    .collect();
  let mut acc = identity_poly(n, d);
  let mut power = identity_poly(n, d);
  for _ in 1..n {
    power = poly_matmul(&power, &neg_n);
    for i in 0..n {
      for j in 0..n {
        acc[i][j] = &acc[i][j] + &power[i][j];
      }
    }
  }
  let inv: Vec<RationalPoly> = coords.iter().map(|&(i, j)| acc[i][j].clone()).collect();
  let generators = (0..n - 1).map(|i| unit_vector(d, pos[&(i, i + 1)])).collect();
  MalcevGroup::from_rational_laws(&mult, &inv, vec![BigInt::zero(); d], generators)
}

/// The integer Heisenberg group, coordinates `(x, y, z)` for
/// `[[1, x, z], [0, 1, y], [0, 0, 1]]`.
pub fn heisenberg() -> MalcevGroup { unipotent_group(3).expect("n = 3") }

fn identity_poly(n: usize, nvars: usize) -> Vec<Vec<RationalPoly>> {
  (0..n)
    .map(|i| {
      (0..n)
        .map(|j| if i == j { RationalPoly::constant(nvars, BigRational::one()) } else { RationalPoly::zero(nvars) })
        .collect()
    })
    .collect()
}

fn poly_matmul(a: &[Vec<RationalPoly>], b: &[Vec<RationalPoly>]) -> Vec<Vec<RationalPoly>> {
  let n = a.len();
  let nvars = a[0][0].nvars();
  (0..n)
    .map(|i| {
      (0..n)
        .map(|j| (0..n).fold(RationalPoly::zero(nvars), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
        .collect()
    })
    .collect()
}

/// Associativity, two-sided unit and two-sided inverse, checked as identities
/// of canonical forms.
pub fn group_axioms(g: &MalcevGroup) -> GroupAxiomReport {
  let d = g.dim;
  let mut failures = Vec::new();
  if g.mult.len() != d || g.mult.iter().any(|m| m.nvars() != 2 * d) {
    failures.push(format!("multiplication must be {d} maps in {} variables", 2 * d));
  }
  if g.inv.len() != d || g.inv.iter().any(|m| m.nvars() != d) {
    failures.push(format!("inverse must be {d} maps in {d} variables"));
  }
  if g.generators.iter().any(|s| s.len() != d) {
    failures.push("generator of wrong length".into());
  }
  if !failures.is_empty() {
    return GroupAxiomReport { failures };
  }
  let vars = |total: usize, offset: usize| -> Vec<BinomialPoly> { (0..d).map(|j| BinomialPoly::var(total, offset + j)).collect() };
  let apply = |inner: &[BinomialPoly], total: usize| -> Vec<BinomialPoly> {
    g.mult.iter().map(|m| m.compose_into(inner, total).expect("arity")).collect()
  };
  // (xy)z = x(yz) in 3d variables
  let (x, y, z) = (vars(3 * d, 0), vars(3 * d, d), vars(3 * d, 2 * d));
  let xy = apply(&[x.clone(), y.clone()].concat(), 3 * d);
  let yz = apply(&[y, z.clone()].concat(), 3 * d);
  if apply(&[xy, z].concat(), 3 * d) != apply(&[x, yz].concat(), 3 * d) {
    failures.push("associativity".into());
  }
  let x = vars(d, 0);
  let e: Vec<BinomialPoly> = g.unit.iter().map(|c| BinomialPoly::constant(d, c.clone())).collect();
  if apply(&[e.clone(), x.clone()].concat(), d) != x {
    failures.push("left unit".into());
  }
  if apply(&[x.clone(), e.clone()].concat(), d) != x {
    failures.push("right unit".into());
  }
  if apply(&[g.inv.clone(), x.clone()].concat(), d) != e {
    failures.push("left inverse".into());
  }
  if apply(&[x, g.inv.clone()].concat(), d) != e {
    failures.push("right inverse".into());
  }
  GroupAxiomReport { failures }
}

/// `f(x·y) = sum_i f_i(x) g_i(y)`, grouped by the left basis element.
pub fn comultiply(f: &BinomialPoly, g: &MalcevGroup) -> Result<Vec<(BinomialPoly, BinomialPoly)>> {
  if f.nvars() != g.dim {
    return Err(NumaError::ArityMismatch { expected: g.dim, found: f.nvars() });
  }
  let pulled = f.compose_into(&g.mult, 2 * g.dim)?;
  free_tensor(g.dim, g.dim).decompose(&pulled)
}

/// Evidence for a Passi degree: a `Z`-basis of the translate module of `f`,
/// the generator actions on it, and the ranks of `I^k · M_f` down to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassiCertificate {
  pub basis:            Vec<BinomialPoly>,
  #[serde(serialize_with = "serialize_vectors")]
  pub generators:       Vec<Vec<BigInt>>,
  /// Row `i` of the matrix for `s` holds the coordinates of `s·basis[i]`.
  pub action_matrices:  Vec<IntMatrix>,
  pub inverse_matrices: Vec<IntMatrix>,
  pub chain_ranks:      Vec<usize>,
  pub passi_degree:     usize,
}

struct Lattice {
  support: Vec<MultiIndex>,
  rows:    Vec<Vec<BigInt>>,
}

fn lattice_of(polys: &[BinomialPoly]) -> Lattice {
  let support: Vec<MultiIndex> =
    polys.iter().flat_map(|p| p.terms().keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
  let rows: Vec<Vec<BigInt>> = polys.iter().map(|p| support.iter().map(|m| p.coeff(&m.0)).collect()).collect();
  Lattice { rows: hermite_basis(&rows, support.len()), support }
}

fn lattice_polys(l: &Lattice, nvars: usize) -> Vec<BinomialPoly> {
  l.rows
    .iter()
    .map(|r| {
      let mut p = BinomialPoly::zero(nvars);
      for (m, c) in l.support.iter().zip(r) {
        p.add_term(m.clone(), c.clone());
      }
      p
    })
    .collect()
}

fn coordinates(l: &Lattice, p: &BinomialPoly) -> Option<Vec<BigInt>> {
  if p.terms().keys().any(|m| l.support.binary_search(m).is_err()) {
    return None;
  }
  let v: Vec<BigInt> = l.support.iter().map(|m| p.coeff(&m.0)).collect();
  hermite_coordinates(&l.rows, &v)
}

const MAX_CLOSURE_ROUNDS: usize = 256;

/// Least `k` such that the additive extension of `f` vanishes on `I^k`,
/// where `I` is the augmentation ideal of `Z[G]`, with a certificate.
pub fn passi_degree(f: &BinomialPoly, g: &MalcevGroup) -> Result<(usize, PassiCertificate)> {
  if f.nvars() != g.dim {
    return Err(NumaError::ArityMismatch { expected: g.dim, found: f.nvars() });
  }
  let translations: Vec<Vec<BinomialPoly>> = g.generators.iter().map(|s| g.right_translation(s)).collect();
  let inverse_translations: Vec<Vec<BinomialPoly>> =
    g.generators.iter().map(|s| g.inverse(s).map(|si| g.right_translation(&si))).collect::<Result<_>>()?;
  let translate = |p: &BinomialPoly, t: &[BinomialPoly]| p.compose_into(t, g.dim).expect("arity");

  // Z-span of all translates of f, closed under the generators and inverses
  let mut lattice = lattice_of(std::slice::from_ref(f));
  let mut rounds = 0;
  loop {
    let basis = lattice_polys(&lattice, g.dim);
    let mut all = basis.clone();
    for b in &basis {
      for t in translations.iter().chain(&inverse_translations) {
        all.push(translate(b, t));
      }
    }
    let next = lattice_of(&all);
    if next.rows.len() == lattice.rows.len() && lattice_polys(&next, g.dim) == basis {
      break;
    }
    lattice = next;
    rounds += 1;
    if rounds > MAX_CLOSURE_ROUNDS {
      return Err(NumaError::InconsistentData("translate module did not stabilize".into()));
    }
  }
  let basis = lattice_polys(&lattice, g.dim);
  let r = basis.len();
  let matrix_for = |t: &[BinomialPoly]| -> Result<IntMatrix> {
    let rows = basis
      .iter()
      .map(|b| coordinates(&lattice, &translate(b, t)).ok_or_else(|| NumaError::InconsistentData("translate left the module".into())))
      .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
      return Ok(IntMatrix::zeros(0, 0));
    }
    IntMatrix::from_rows(rows)
  };
  let action: Vec<IntMatrix> = translations.iter().map(|t| matrix_for(t)).collect::<Result<_>>()?;
  let inverse: Vec<IntMatrix> = inverse_translations.iter().map(|t| matrix_for(t)).collect::<Result<_>>()?;

  let row_times = |v: &[BigInt], m: &IntMatrix| -> Vec<BigInt> {
    (0..m.cols()).map(|j| v.iter().enumerate().map(|(i, x)| x * &m[(i, j)]).sum()).collect()
  };
  let g_closure = |mut rows: Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
    let mut cur = hermite_basis(&rows, r);
    loop {
      rows = cur.clone();
      for v in &cur {
        for m in action.iter().chain(&inverse) {
          rows.push(row_times(v, m));
        }
      }
      let next = hermite_basis(&rows, r);
      if next == cur {
        return cur;
      }
      cur = next;
    }
  };

  let mut level: Vec<Vec<BigInt>> = hermite_basis(&(0..r).map(|i| unit_int_vector(r, i)).collect::<Vec<_>>(), r);
  let mut chain_ranks = vec![level.len()];
  while !level.is_empty() {
    if chain_ranks.len() > r + 1 {
      return Err(NumaError::NonNilpotentAction(chain_ranks.len()));
    }
    let mut rows = Vec::new();
    for v in &level {
      for m in &action {
        let moved = row_times(v, m);
        rows.push(moved.iter().zip(v).map(|(a, b)| a - b).collect());
      }
    }
    let next = g_closure(rows);
    if next.len() >= level.len() {
      return Err(NumaError::NonNilpotentAction(chain_ranks.len()));
    }
    level = next;
    chain_ranks.push(level.len());
  }
  let degree = chain_ranks.len() - 1;
  Ok((degree, PassiCertificate {
    basis,
    generators: g.generators.clone(),
    action_matrices: action,
    inverse_matrices: inverse,
    chain_ranks,
    passi_degree: degree,
  }))
}

fn unit_int_vector(n: usize, i: usize) -> Vec<BigInt> {
  let mut v = vec![BigInt::zero(); n];
  v[i] = BigInt::one();
  v
}

impl PassiCertificate {
  /// Recomputes the generator actions from the group law and checks the
  /// chain decreases strictly to zero.
  pub fn verify(&self, g: &MalcevGroup) -> bool {
    let lattice = lattice_of(&self.basis);
    if lattice_polys(&lattice, g.dim) != self.basis {
      return false;
    }
    for (s, m) in self.generators.iter().zip(&self.action_matrices) {
      let t = g.right_translation(s);
      for (i, b) in self.basis.iter().enumerate() {
        let Ok(moved) = b.compose_into(&t, g.dim) else { return false };
        if coordinates(&lattice, &moved).as_deref() != Some(m.row(i)) {
          return false;
        }
      }
    }
    self.chain_ranks.windows(2).all(|w| w[1] < w[0])
      && self.chain_ranks.last() == Some(&0)
      && self.passi_degree + 1 == self.chain_ranks.len()
  }
}

/// Outcome of evaluating `f` on random elements `g (s_1 - 1) ... (s_k - 1)`
/// of `I^k`, with `g` from a word ball and `s_i` generators or inverses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningSample {
  pub power:    usize,
  pub samples:  usize,
  pub nonzero:  usize,
  pub radius:   usize,
}

/// Value of the additive extension of `f` on `g (s_1 - 1) ... (s_k - 1)`.
pub fn eval_on_augmentation_product(f: &BinomialPoly, g: &MalcevGroup, base: &[BigInt], factors: &[Vec<BigInt>]) -> Result<BigInt> {
  let k = factors.len();
  let mut total = BigInt::zero();
  for mask in 0u32..(1 << k) {
    let mut x = base.to_vec();
    for (i, s) in factors.iter().enumerate() {
      if mask & (1 << i) != 0 {
        x = g.multiply(&x, s)?;
      }
    }
    let sign = if (k as u32 - mask.count_ones()).is_multiple_of(2) { 1 } else { -1 };
    total += f.evaluate(&x)? * sign;
  }
  Ok(total)
}

pub fn sample_augmentation_power<R: Rng>(
  f: &BinomialPoly,
  g: &MalcevGroup,
  power: usize,
  samples: usize,
  radius: usize,
  rng: &mut R,
) -> Result<SpanningSample> {
  let ball = g.word_ball(radius)?;
  let mut letters = g.generators.clone();
  for s in &g.generators {
    letters.push(g.inverse(s)?);
  }
  let mut nonzero = 0;
  for _ in 0..samples {
    let base = ball.choose(rng).expect("ball contains the unit");
    let factors: Vec<Vec<BigInt>> = (0..power).map(|_| letters.choose(rng).expect("generators").clone()).collect();
    if !eval_on_augmentation_product(f, g, base, &factors)?.is_zero() {
      nonzero += 1;
    }
  }
  Ok(SpanningSample { power, samples, nonzero, radius })
}

/// Dense rational square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix(pub Vec<Vec<BigRational>>);

impl RatMatrix {
  pub fn identity(n: usize) -> Self {
    RatMatrix((0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect())
  }

  pub fn zeros(n: usize) -> Self { RatMatrix(vec![vec![BigRational::zero(); n]; n]) }

  pub fn from_i64(rows: &[&[i64]]) -> Self {
    RatMatrix(rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect())
  }

  pub fn size(&self) -> usize { self.0.len() }

  pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
    let n = self.size();
    RatMatrix(
      (0..n)
        .map(|i| {
          (0..n)
            .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &self.0[i][k] * &o.0[k][j]))
            .collect()
        })
        .collect(),
    )
  }

  pub fn add(&self, o: &RatMatrix) -> RatMatrix {
    RatMatrix(self.0.iter().zip(&o.0).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect())
  }

  pub fn scale(&self, c: &BigRational) -> RatMatrix {
    RatMatrix(self.0.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
  }

  pub fn is_zero(&self) -> bool { self.0.iter().flatten().all(Zero::is_zero) }

  pub fn is_strictly_upper(&self) -> bool {
    self.0.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| j > i || x.is_zero()))
  }

  pub fn is_unipotent(&self) -> bool {
    self.0.iter().enumerate().all(|(i, r)| {
      r.iter().enumerate().all(|(j, x)| match i.cmp(&j) {
        std::cmp::Ordering::Equal => x.is_one(),
        std::cmp::Ordering::Greater => x.is_zero(),
        std::cmp::Ordering::Less => true,
      })
    })
  }

  pub fn is_integral(&self) -> bool { self.0.iter().flatten().all(|x| x.is_integer()) }
}

/// Upper unitriangular rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentMatrix(RatMatrix);

impl UnipotentMatrix {
  pub fn new(m: RatMatrix) -> Result<Self> {
    if !m.is_unipotent() {
      return Err(NumaError::InvalidInput("matrix is not upper unitriangular".into()));
    }
    Ok(UnipotentMatrix(m))
  }

  /// Element of `U_n` from Malcev coordinates (see [`unipotent_coordinates`]).
  pub fn from_coordinates(n: usize, coords: &[BigRational]) -> Result<Self> {
    let pos = unipotent_coordinates(n);
    if pos.len() != coords.len() {
      return Err(NumaError::ArityMismatch { expected: pos.len(), found: coords.len() });
    }
    let mut m = RatMatrix::identity(n);
    for (&(i, j), c) in pos.iter().zip(coords) {
      m.0[i][j] = c.clone();
    }
    Ok(UnipotentMatrix(m))
  }

  pub fn coordinates(&self) -> Vec<BigRational> {
    unipotent_coordinates(self.0.size()).into_iter().map(|(i, j)| self.0 .0[i][j].clone()).collect()
  }

  pub fn matrix(&self) -> &RatMatrix { &self.0 }

  pub fn mul(&self, o: &UnipotentMatrix) -> UnipotentMatrix { UnipotentMatrix(self.0.mul(&o.0)) }

  fn nilpotent_part(&self) -> RatMatrix {
    let n = self.0.size();
    self.0.add(&RatMatrix::identity(n).scale(&-BigRational::one()))
  }
}

/// `log g = sum_{k=1}^{n-1} (-1)^{k+1} N^k / k` with `N = g - 1`.
pub fn matrix_log(g: &UnipotentMatrix) -> RatMatrix {
  let n = g.0.size();
  let nil = g.nilpotent_part();
  let mut acc = RatMatrix::zeros(n);
  let mut power = RatMatrix::identity(n);
  for k in 1..n.max(1) {
    power = power.mul(&nil);
    let sign = if k % 2 == 1 { 1 } else { -1 };
    acc = acc.add(&power.scale(&BigRational::new(BigInt::from(sign), BigInt::from(k))));
  }
  acc
}

/// `exp X = sum_{k<n} X^k / k!` for strictly upper triangular `X`.
pub fn matrix_exp(x: &RatMatrix) -> Result<UnipotentMatrix> {
  if !x.is_strictly_upper() {
    return Err(NumaError::InvalidInput("exp needs a strictly upper triangular matrix".into()));
  }
  let n = x.size();
  let mut acc = RatMatrix::identity(n);
  let mut power = RatMatrix::identity(n);
  let mut fact = BigInt::one();
  for k in 1..n.max(1) {
    power = power.mul(x);
    fact *= BigInt::from(k);
    acc = acc.add(&power.scale(&BigRational::new(BigInt::one(), fact.clone())));
  }
  Ok(UnipotentMatrix(acc))
}

/// `g^r = exp(r log g)`.
pub fn power(g: &UnipotentMatrix, r: &BigRational) -> UnipotentMatrix {
  matrix_exp(&matrix_log(g).scale(r)).expect("log of a unipotent matrix is strictly upper")
}

/// `g^r = sum_k C(r, k) N^k`, the binomial series; agrees with [`power`].
pub fn power_binomial_series(g: &UnipotentMatrix, r: &BigRational) -> UnipotentMatrix {
  let n = g.0.size();
  let nil = g.nilpotent_part();
  let mut acc = RatMatrix::identity(n);
  let mut p = RatMatrix::identity(n);
  for k in 1..n.max(1) {
    p = p.mul(&nil);
    acc = acc.add(&p.scale(&binomial_rational(r, k as u32)));
  }
  UnipotentMatrix(acc)
}

/// `g^r` for an integral unipotent `g` and a truncated p-adic exponent, via
/// the binomial series. Each `C(r, k)` costs `v_p(k!)` digits.
pub fn power_padic(g: &UnipotentMatrix, r: &PadicApprox) -> Result<Vec<Vec<PadicApprox>>> {
  if !g.0.is_integral() {
    return Err(NumaError::InvalidInput("p-adic powers need an integral matrix".into()));
  }
  let n = g.0.size();
  let nil = g.nilpotent_part();
  let to_padic = |m: &RatMatrix| -> Vec<Vec<PadicApprox>> {
    m.0.iter().map(|row| row.iter().map(|x| r.lift_integer(&x.to_integer())).collect()).collect()
  };
  let mut acc = to_padic(&RatMatrix::identity(n));
  let mut p = RatMatrix::identity(n);
  for k in 1..n.max(1) {
    p = p.mul(&nil);
    let c = r.binom(k as u32)?;
    let pk = to_padic(&p);
    for i in 0..n {
      for j in 0..n {
        acc[i][j] = acc[i][j].add(&c.mul(&pk[i][j])?)?;
      }
    }
  }
  Ok(acc)
}

/// Parses `a/b` or `a` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
  let bad = || NumaError::InvalidInput(format!("not a rational number: {s:?}"));
  let (n, d) = match s.split_once('/') {
    Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
    None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
  };
  if d.is_zero() {
    return Err(bad());
  }
  Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
  use rand::{rngs::StdRng, SeedableRng};

  use super::*;

  fn ints(v: &[i64]) -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() }

  fn q(n: i64, d: i64) -> BigRational { BigRational::new(BigInt::from(n), BigInt::from(d)) }

  #[test]
  fn heisenberg_laws() {
    let h = heisenberg();
    assert_eq!(h.dim, 3);
    // z-coordinate of the product: z + z' + x y'
    let expect = BinomialPoly::from_terms(6, [(vec![0, 0, 1, 0, 0, 0], 1), (vec![0, 0, 0, 0, 0, 1], 1), (vec![1, 0, 0, 0, 1, 0], 1)])
      .unwrap();
    assert_eq!(h.mult[2], expect);
    assert_eq!(h.multiply(&ints(&[1, 2, 3]), &ints(&[4, 5, 6])).unwrap(), ints(&[5, 7, 14]));
    let inv = h.inverse(&ints(&[2, 3, 5])).unwrap();
    assert_eq!(inv, ints(&[-2, -3, -5 + 6]));
    assert!(group_axioms(&h).passed());
  }

  #[test]
  fn u2_is_integers() {
    let u2 = unipotent_group(2).unwrap();
    assert_eq!(u2, MalcevGroup::abelian(1));
    assert!(group_axioms(&MalcevGroup::abelian(1)).passed());
  }

  #[test]
  fn corrupted_multiplication_fails_associativity() {
    let mut h = heisenberg();
    h.mult[2] = h.mult[2].add(&BinomialPoly::basis(MultiIndex(vec![2, 0, 0, 0, 0, 0]))).unwrap();
    let rep = group_axioms(&h);
    assert!(rep.failures.iter().any(|f| f == "associativity"), "{rep:?}");
  }

  #[test]
  fn rational_laws_must_be_numerical() {
    let half = RationalPoly::from_terms(2, [(vec![1, 0], q(1, 2)), (vec![0, 1], q(1, 1))]).unwrap();
    let inv = RationalPoly::from_terms(1, [(vec![1], q(-1, 1))]).unwrap();
    assert!(matches!(
      MalcevGroup::from_rational_laws(&[half], &[inv], ints(&[0]), vec![ints(&[1])]),
      Err(NumaError::NotNumerical(_))
    ));
  }

  #[test]
  fn log_exp_examples() {
    let g = UnipotentMatrix::new(RatMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
    assert_eq!(matrix_log(&g), RatMatrix::from_i64(&[&[0, 1], &[0, 0]]));
    let h = UnipotentMatrix::from_coordinates(3, &[q(1, 1), q(1, 1), q(0, 1)]).unwrap();
    let l = matrix_log(&h);
    let mut expect = RatMatrix::zeros(3);
    expect.0[0][1] = q(1, 1);
    expect.0[1][2] = q(1, 1);
    expect.0[0][2] = q(-1, 2);
    assert_eq!(l, expect);
    assert_eq!(matrix_exp(&l).unwrap(), h);
    assert_eq!(matrix_exp(&RatMatrix::zeros(4)).unwrap().matrix(), &RatMatrix::identity(4));
  }

  #[test]
  fn power_examples() {
    let g = UnipotentMatrix::new(RatMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
    let r = q(3, 7);
    assert_eq!(power(&g, &r).matrix().0[0][1], r);
    let h = UnipotentMatrix::from_coordinates(3, &[q(1, 1), q(1, 1), q(0, 1)]).unwrap();
    let p = power(&h, &r);
    assert_eq!(p.coordinates(), vec![r.clone(), r.clone(), binomial_rational(&r, 2)]);
    assert_eq!(power(&h, &q(0, 1)).matrix(), &RatMatrix::identity(3));
    assert_eq!(power_binomial_series(&h, &r), p);
  }

  #[test]
  fn comultiply_examples() {
    let z = MalcevGroup::abelian(1);
    let parts = comultiply(&BinomialPoly::binom_x(2), &z).unwrap();
    let expect = vec![
      (BinomialPoly::one(1), BinomialPoly::binom_x(2)),
      (BinomialPoly::binom_x(1), BinomialPoly::binom_x(1)),
      (BinomialPoly::binom_x(2), BinomialPoly::one(1)),
    ];
    assert_eq!(parts, expect);
    let h = heisenberg();
    let parts = comultiply(&BinomialPoly::var(3, 0), &h).unwrap();
    assert_eq!(parts, vec![(BinomialPoly::one(3), BinomialPoly::var(3, 0)), (BinomialPoly::var(3, 0), BinomialPoly::one(3))]);
    let parts = comultiply(&BinomialPoly::one(3), &h).unwrap();
    assert_eq!(parts, vec![(BinomialPoly::one(3), BinomialPoly::one(3))]);
  }

  #[test]
  fn passi_degrees_on_heisenberg() {
    let h = heisenberg();
    let (k, cert) = passi_degree(&BinomialPoly::one(3), &h).unwrap();
    assert_eq!(k, 1);
    assert!(cert.verify(&h));
    for (var, expect) in [(0, 2), (1, 2), (2, 3)] {
      let (k, cert) = passi_degree(&BinomialPoly::var(3, var), &h).unwrap();
      assert_eq!(k, expect, "coordinate {var}");
      assert!(cert.verify(&h));
    }
    assert_eq!(passi_degree(&BinomialPoly::zero(3), &h).unwrap().0, 0);
  }

  #[test]
  fn unipotent_coordinates_respect_the_class_bound() {
    let g = unipotent_group(4).unwrap();
    for (v, &(i, j)) in unipotent_coordinates(4).iter().enumerate() {
      let (k, cert) = passi_degree(&BinomialPoly::var(g.dim, v), &g).unwrap();
      // distance from the diagonal is the filtration weight
      assert_eq!(k, j - i + 1, "entry ({i},{j})");
      assert!(k <= 4 && cert.verify(&g));
    }
  }

  #[test]
  fn abelian_passi_degree_is_total_degree_plus_one() {
    for d in 1..=2 {
      let g = MalcevGroup::abelian(d);
      for deg in 0..=3u32 {
        for idx in MultiIndex::all_of_degree(d, deg) {
          let (k, _) = passi_degree(&BinomialPoly::basis(idx.clone()), &g).unwrap();
          assert_eq!(k, deg as usize + 1, "{idx:?}");
        }
      }
    }
  }

  #[test]
  fn spanning_samples_agree_with_certificate() {
    let h = heisenberg();
    let mut rng = StdRng::seed_from_u64(3);
    let z = BinomialPoly::var(3, 2);
    assert_eq!(sample_augmentation_power(&z, &h, 3, 100, 3, &mut rng).unwrap().nonzero, 0);
    assert!(sample_augmentation_power(&z, &h, 2, 100, 3, &mut rng).unwrap().nonzero > 0);
  }

  #[test]
  fn padic_power_matches_rational_power_for_integers() {
    let h = UnipotentMatrix::from_coordinates(3, &[q(2, 1), q(-1, 1), q(5, 1)]).unwrap();
    let r = PadicApprox::from_integer(3, &BigInt::from(7), 6);
    let padic = power_padic(&h, &r).unwrap();
    let exact = power(&h, &q(7, 1));
    for i in 0..3 {
      for j in 0..3 {
        let e = r.lift_integer(&exact.matrix().0[i][j].to_integer());
        assert!(padic[i][j].congruent(&e));
      }
    }
  }
}
