//! Numerical simplicial objects: levels `Z^{r_n}` with face and degeneracy
//! maps given by numerical polynomials, their cochain complexes, graded
//! cohomology for additive objects, and principal twisted cartesian products.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::{
  binom::{BinomialPoly, MultiIndex, RationalPoly},
  dold_kan::{gamma, SimplicialAbGroup},
  error::{NumaError, Result},
  homalg::{smith_normal_form, solve_integer, verify_no_solution, FinAbGroup, FreeComplex, IntMatrix, IntegerSolution},
  nilgroup::{group_axioms, heisenberg, MalcevGroup},
};

/// `faces[n][i]` is `∂_i : X_n -> X_{n-1}` as `level_ranks[n-1]` polynomials
/// in `level_ranks[n]` variables; `degeneracies[n][i]` is `s_i : X_n -> X_{n+1}`
/// for `n < n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumSimplicialObject {
  pub n_max:        usize,
  pub level_ranks:  Vec<usize>,
  pub faces:        Vec<Vec<Vec<BinomialPoly>>>,
  pub degeneracies: Vec<Vec<Vec<BinomialPoly>>>,
}

fn check_map(maps: &[BinomialPoly], src: usize, dst: usize, what: &str) -> Result<()> {
  if maps.len() != dst {
    return Err(NumaError::InconsistentData(format!("{what}: {} components, expected {dst}", maps.len())));
  }
  if let Some(m) = maps.iter().find(|m| m.nvars() != src) {
    return Err(NumaError::InconsistentData(format!("{what}: component in {} variables, expected {src}", m.nvars())));
  }
  Ok(())
}

/// `outer ∘ inner`, where `inner` has `nvars` variables.
pub fn compose_maps(outer: &[BinomialPoly], inner: &[BinomialPoly], nvars: usize) -> Result<Vec<BinomialPoly>> {
  outer.iter().map(|f| f.compose_into(inner, nvars)).collect()
}

fn variables(n: usize) -> Vec<BinomialPoly> { (0..n).map(|j| BinomialPoly::var(n, j)).collect() }

fn embed_all(maps: &[BinomialPoly], target: usize, offset: usize) -> Vec<BinomialPoly> {
  maps
    .iter()
    .map(|m| {
      let pos: Vec<usize> = (offset..offset + m.nvars()).collect();
      m.embed(target, &pos).expect("positions match arity")
    })
    .collect()
}

fn constants(values: &[BigInt], nvars: usize) -> Vec<BinomialPoly> {
  values.iter().map(|c| BinomialPoly::constant(nvars, c.clone())).collect()
}

impl NumSimplicialObject {
  /// Validates the shapes of all structure maps.
  pub fn new(level_ranks: Vec<usize>, faces: Vec<Vec<Vec<BinomialPoly>>>, degeneracies: Vec<Vec<Vec<BinomialPoly>>>) -> Result<Self> {
    let n_max = level_ranks.len().checked_sub(1).ok_or_else(|| NumaError::InvalidInput("no levels".into()))?;
    if faces.len() != n_max + 1 || degeneracies.len() != n_max {
      return Err(NumaError::InconsistentData("wrong number of face or degeneracy levels".into()));
    }
    for n in 0..=n_max {
      let expected = if n == 0 { 0 } else { n + 1 };
      if faces[n].len() != expected {
        return Err(NumaError::InconsistentData(format!("level {n} has {} faces", faces[n].len())));
      }
      for (i, f) in faces[n].iter().enumerate() {
        check_map(f, level_ranks[n], level_ranks[n - 1], &format!("d{i} at level {n}"))?;
      }
      if n < n_max {
        if degeneracies[n].len() != n + 1 {
          return Err(NumaError::InconsistentData(format!("level {n} has {} degeneracies", degeneracies[n].len())));
        }
        for (i, s) in degeneracies[n].iter().enumerate() {
          check_map(s, level_ranks[n], level_ranks[n + 1], &format!("s{i} at level {n}"))?;
        }
      }
    }
    Ok(NumSimplicialObject { n_max, level_ranks, faces, degeneracies })
  }

  pub fn level_dim(&self, n: usize) -> usize { self.level_ranks[n] }

  pub fn face(&self, n: usize, i: usize) -> &[BinomialPoly] { &self.faces[n][i] }

  pub fn degeneracy(&self, n: usize, i: usize) -> &[BinomialPoly] { &self.degeneracies[n][i] }

  pub fn apply_face(&self, n: usize, i: usize, x: &[BigInt]) -> Result<Vec<BigInt>> {
    self.face(n, i).iter().map(|f| f.evaluate(x)).collect()
  }

  /// Linear structure maps of a simplicial abelian group.
  pub fn from_ab_group(a: &SimplicialAbGroup) -> Self {
    let linear = |m: &IntMatrix| -> Vec<BinomialPoly> {
      (0..m.rows())
        .map(|i| {
          let mut p = BinomialPoly::zero(m.cols());
          for j in 0..m.cols() {
            p.add_term(MultiIndex::unit(m.cols(), j), m[(i, j)].clone());
          }
          p
        })
        .collect()
    };
    NumSimplicialObject {
      n_max:        a.n_max,
      level_ranks:  a.level_ranks.clone(),
      faces:        a.faces.iter().map(|l| l.iter().map(linear).collect()).collect(),
      degeneracies: a.degeneracies.iter().map(|l| l.iter().map(linear).collect()).collect(),
    }
  }

  /// The inverse of [`from_ab_group`](Self::from_ab_group); fails unless every
  /// map is linear without constant term.
  pub fn to_ab_group(&self) -> Result<SimplicialAbGroup> {
    let matrix = |maps: &[BinomialPoly], cols: usize, what: String| -> Result<IntMatrix> {
      let mut m = IntMatrix::zeros(maps.len(), cols);
      for (i, f) in maps.iter().enumerate() {
        for (idx, c) in f.terms() {
          if idx.degree() != 1 {
            return Err(NumaError::NonAdditiveFaces(what));
          }
          let j = idx.entries().iter().position(|&e| e == 1).expect("degree one");
          m[(i, j)] = c.clone();
        }
      }
      Ok(m)
    };
    let faces = (0..=self.n_max)
      .map(|n| {
        (0..self.faces[n].len())
          .map(|i| matrix(self.face(n, i), self.level_ranks[n], format!("d{i} at level {n}")))
          .collect::<Result<Vec<_>>>()
      })
      .collect::<Result<Vec<_>>>()?;
    let degeneracies = (0..self.n_max)
      .map(|n| {
        (0..=n)
          .map(|i| matrix(self.degeneracy(n, i), self.level_ranks[n], format!("s{i} at level {n}")))
          .collect::<Result<Vec<_>>>()
      })
      .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialAbGroup { n_max: self.n_max, level_ranks: self.level_ranks.clone(), faces, degeneracies })
  }

  /// Restriction to levels `0..=n_max`.
  pub fn truncate(&self, n_max: usize) -> Self {
    let n_max = n_max.min(self.n_max);
    NumSimplicialObject {
      n_max,
      level_ranks: self.level_ranks[..=n_max].to_vec(),
      faces: self.faces[..=n_max].to_vec(),
      degeneracies: self.degeneracies[..n_max].to_vec(),
    }
  }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
  /// One of `dd`, `ds`, `ss`.
  pub identity: String,
  pub level:    usize,
  pub i:        usize,
  pub j:        usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
  pub checked:    usize,
  pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
  pub fn passed(&self) -> bool { self.violations.is_empty() }
}

/// Verifies every simplicial identity by symbolic composition.
pub fn check_simplicial_identities(x: &NumSimplicialObject) -> Result<IdentityReport> {
  let mut rep = IdentityReport::default();
  let record = |rep: &mut IdentityReport, ok: bool, identity: &str, level, i, j| {
    rep.checked += 1;
    if !ok {
      rep.violations.push(IdentityViolation { identity: identity.into(), level, i, j });
    }
  };
  let r = &x.level_ranks;
  for n in 2..=x.n_max {
    for j in 1..=n {
      for i in 0..j {
        // ∂_i ∂_j = ∂_{j-1} ∂_i
        let lhs = compose_maps(x.face(n - 1, i), x.face(n, j), r[n])?;
        let rhs = compose_maps(x.face(n - 1, j - 1), x.face(n, i), r[n])?;
        record(&mut rep, lhs == rhs, "dd", n, i, j);
      }
    }
  }
  for n in 0..x.n_max {
    let id = variables(r[n]);
    for j in 0..=n {
      let s = x.degeneracy(n, j);
      for i in 0..=n + 1 {
        let lhs = compose_maps(x.face(n + 1, i), s, r[n])?;
        let rhs = if i == j || i == j + 1 {
          id.clone()
        } else if i < j {
          compose_maps(x.degeneracy(n - 1, j - 1), x.face(n, i), r[n])?
        } else {
          compose_maps(x.degeneracy(n - 1, j), x.face(n, i - 1), r[n])?
        };
        record(&mut rep, lhs == rhs, "ds", n, i, j);
      }
      if n + 1 < x.n_max {
        for i in 0..=j {
          // s_i s_j = s_{j+1} s_i
          let lhs = compose_maps(x.degeneracy(n + 1, i), s, r[n])?;
          let rhs = compose_maps(x.degeneracy(n + 1, j + 1), x.degeneracy(n, i), r[n])?;
          record(&mut rep, lhs == rhs, "ss", n, i, j);
        }
      }
    }
  }
  Ok(rep)
}

/// The bar construction `W̄G` truncated at `n_max`: level `n` is `G^n`,
/// `∂_0` drops the first entry, `∂_i` multiplies entries `i` and `i+1`,
/// `∂_n` drops the last, and `s_i` inserts the unit at position `i`.
pub fn classifying_space(g: &MalcevGroup, n_max: usize) -> Result<NumSimplicialObject> {
  let rep = group_axioms(g);
  if !rep.passed() {
    return Err(NumaError::NotAGroup(rep.failures.join("; ")));
  }
  let d = g.dim;
  let block = |k: usize, nv: usize| -> Vec<BinomialPoly> { (0..d).map(|c| BinomialPoly::var(nv, k * d + c)).collect() };
  let level_ranks: Vec<usize> = (0..=n_max).map(|n| n * d).collect();
  let mut faces = vec![Vec::new()];
  let mut degeneracies = Vec::new();
  for n in 1..=n_max {
    let nv = n * d;
    let mut level = Vec::with_capacity(n + 1);
    for i in 0..=n {
      let mut out = Vec::with_capacity((n - 1) * d);
      for k in 0..n {
        if (i == 0 && k == 0) || (i == n && k == n - 1) || (i > 0 && i < n && k == i) {
          continue;
        }
        if i > 0 && i < n && k == i - 1 {
          let pair = [block(i - 1, nv), block(i, nv)].concat();
          out.extend(compose_maps(&g.mult, &pair, nv)?);
        } else {
          out.extend(block(k, nv));
        }
      }
      level.push(out);
    }
    faces.push(level);
  }
  for n in 0..n_max {
    let nv = n * d;
    let level = (0..=n)
      .map(|i| {
        let mut out = Vec::with_capacity((n + 1) * d);
        for k in 0..=n {
          match k.cmp(&i) {
            std::cmp::Ordering::Less => out.extend(block(k, nv)),
            std::cmp::Ordering::Equal => out.extend(constants(&g.unit, nv)),
            std::cmp::Ordering::Greater => out.extend(block(k - 1, nv)),
          }
        }
        out
      })
      .collect();
    degeneracies.push(level);
  }
  NumSimplicialObject::new(level_ranks, faces, degeneracies)
}

/// `K(Z, 1)` as the bar construction on `(Z, +)`.
pub fn k_z_1(n_max: usize) -> NumSimplicialObject {
  classifying_space(&MalcevGroup::abelian(1), n_max).expect("Z is a group")
}

/// `d f = sum_i (-1)^i f ∘ ∂_i`, taking cochains on `X_n` to cochains on
/// `X_{n+1}`.
#[derive(Clone, Copy, Debug)]
pub struct Coboundary<'a> {
  pub object: &'a NumSimplicialObject,
  pub level:  usize,
}

pub fn cochain_complex(x: &NumSimplicialObject, n: usize) -> Result<Coboundary<'_>> {
  if n >= x.n_max {
    return Err(NumaError::InvalidInput(format!("coboundary from level {n} needs level {} (n_max = {})", n + 1, x.n_max)));
  }
  Ok(Coboundary { object: x, level: n })
}

impl Coboundary<'_> {
  pub fn apply(&self, f: &BinomialPoly) -> Result<BinomialPoly> {
    let n = self.level;
    let x = self.object;
    if f.nvars() != x.level_dim(n) {
      return Err(NumaError::ArityMismatch { expected: x.level_dim(n), found: f.nvars() });
    }
    let target = x.level_dim(n + 1);
    let mut acc = BinomialPoly::zero(target);
    for i in 0..=n + 1 {
      let pulled = f.compose_into(x.face(n + 1, i), target)?;
      acc = if i % 2 == 0 { acc.add(&pulled)? } else { acc.sub(&pulled)? };
    }
    Ok(acc)
  }
}

/// Each component is a sum of distinct variables, with the supports of the
/// components pairwise disjoint. Pullback along such maps preserves the
/// degree grading of the binomial basis.
fn is_additive_map(maps: &[BinomialPoly]) -> bool {
  let mut seen = BTreeSet::new();
  maps.iter().all(|m| m.unit_sum_support().is_some_and(|s| s.into_iter().all(|v| seen.insert(v))))
}

pub fn check_additive(x: &NumSimplicialObject) -> Result<()> {
  for n in 1..=x.n_max {
    for i in 0..=n {
      if !is_additive_map(x.face(n, i)) {
        return Err(NumaError::NonAdditiveFaces(format!("d{i} at level {n}")));
      }
    }
  }
  for n in 0..x.n_max {
    for i in 0..=n {
      if !is_additive_map(x.degeneracy(n, i)) {
        return Err(NumaError::NonAdditiveFaces(format!("s{i} at level {n}")));
      }
    }
  }
  Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CochainMode {
  /// Cochains vanishing on degenerate simplices.
  Normalized,
  Unnormalized,
}

/// Degree-`d` cochains on level `n`. `basis` lists the binomial monomials;
/// `cochains` holds the chosen cochain basis as columns in those coordinates
/// (the identity for unnormalized cochains), and `coboundary` is `δ` into the
/// next piece in cochain coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCochainPiece {
  pub n:          usize,
  pub d:          u32,
  pub basis:      Vec<MultiIndex>,
  pub cochains:   IntMatrix,
  pub coboundary: IntMatrix,
}

/// Matrix of `φ^*` from degree-`d` cochains on the target of `φ` to those on
/// its source.
fn pullback_matrix(maps: &[BinomialPoly], src_dim: usize, dst_basis: &[MultiIndex], src_basis: &[MultiIndex]) -> Result<IntMatrix> {
  let index: BTreeMap<&MultiIndex, usize> = src_basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
  let mut out = IntMatrix::zeros(src_basis.len(), dst_basis.len());
  for (col, alpha) in dst_basis.iter().enumerate() {
    let pulled = BinomialPoly::basis(alpha.clone()).compose_into(maps, src_dim)?;
    for (idx, c) in pulled.terms() {
      let row = *index.get(idx).ok_or_else(|| NumaError::NonAdditiveFaces(format!("pullback of {alpha:?} leaves its degree")))?;
      out[(row, col)] = c.clone();
    }
  }
  Ok(out)
}

struct Normalization {
  cochains: IntMatrix,
  v_inv:    IntMatrix,
  rank:     usize,
}

/// The cochain complex of degree-`d` cochains on levels `0..=n_max`.
pub fn graded_pieces(x: &NumSimplicialObject, d: u32, mode: CochainMode) -> Result<Vec<GradedCochainPiece>> {
  check_additive(x)?;
  let bases: Vec<Vec<MultiIndex>> = (0..=x.n_max).map(|n| MultiIndex::all_of_degree(x.level_dim(n), d)).collect();
  let norms: Vec<Normalization> = (0..=x.n_max)
    .map(|n| {
      let size = bases[n].len();
      if mode == CochainMode::Unnormalized || n == 0 {
        return Ok(Normalization { cochains: IntMatrix::identity(size), v_inv: IntMatrix::identity(size), rank: 0 });
      }
      let mut stacked = IntMatrix::zeros(0, size);
      for i in 0..n {
        let s = pullback_matrix(x.degeneracy(n - 1, i), x.level_dim(n - 1), &bases[n], &bases[n - 1])?;
        stacked = stacked.vstack(&s)?;
      }
      let snf = smith_normal_form(&stacked);
      Ok(Normalization { cochains: snf.kernel(), v_inv: snf.v_inv.clone(), rank: snf.rank() })
    })
    .collect::<Result<_>>()?;
  let mut pieces = Vec::with_capacity(x.n_max + 1);
  for n in 0..=x.n_max {
    let coboundary = if n < x.n_max {
      let mut delta = IntMatrix::zeros(bases[n + 1].len(), bases[n].len());
      for i in 0..=n + 1 {
        let p = pullback_matrix(x.face(n + 1, i), x.level_dim(n + 1), &bases[n], &bases[n + 1])?;
        delta = if i % 2 == 0 { delta.add(&p)? } else { delta.add(&p.scale(&BigInt::from(-1)))? };
      }
      let next = &norms[n + 1];
      let image = delta.mul(&norms[n].cochains)?;
      let coords = next.v_inv.mul(&image)?;
      if !coords.rows_range(0..next.rank).is_zero() {
        return Err(NumaError::InconsistentData(format!("coboundary of a normalized {n}-cochain is not normalized")));
      }
      coords.rows_range(next.rank..coords.rows())
    } else {
      IntMatrix::zeros(0, norms[n].cochains.cols())
    };
    pieces.push(GradedCochainPiece { n, d, basis: bases[n].clone(), cochains: norms[n].cochains.clone(), coboundary });
  }
  Ok(pieces)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
  pub n:     usize,
  pub d:     u32,
  pub rank:  usize,
  pub group: FinAbGroup,
}

/// `H^n` of degree-`d` cochains for `n < n_max` and `d <= d_max`. Totals are
/// direct sums over the computed degrees only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedCohomology {
  pub n_max:   usize,
  pub d_max:   u32,
  pub mode:    CochainMode,
  pub entries: Vec<CohomologyEntry>,
  pub totals:  Vec<FinAbGroup>,
}

impl GradedCohomology {
  pub fn get(&self, n: usize, d: u32) -> Option<&FinAbGroup> {
    self.entries.iter().find(|e| e.n == n && e.d == d).map(|e| &e.group)
  }
}

pub fn graded_cohomology(x: &NumSimplicialObject, d_max: u32, mode: CochainMode) -> Result<GradedCohomology> {
  check_additive(x)?;
  let mut entries = Vec::new();
  let mut totals = vec![FinAbGroup::zero(); x.n_max];
  for d in 0..=d_max {
    let pieces = graded_pieces(x, d, mode)?;
    let ranks: BTreeMap<i64, usize> = pieces.iter().map(|p| (p.n as i64, p.cochains.cols())).collect();
    let cob: BTreeMap<i64, IntMatrix> =
      pieces.iter().filter(|p| p.n < x.n_max).map(|p| (p.n as i64, p.coboundary.clone())).collect();
    let complex = FreeComplex::from_cochain(ranks, cob)?;
    for n in 0..x.n_max {
      let group = complex.homology(n as i64);
      totals[n] = totals[n].direct_sum(&group);
      entries.push(CohomologyEntry { n, d, rank: pieces[n].cochains.cols(), group });
    }
  }
  Ok(GradedCohomology { n_max: x.n_max, d_max, mode, entries, totals })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisMode {
  /// Monomials `x^β` with integer coefficients.
  IntegerPolynomial,
  /// Binomial monomials `C(x, β)`.
  Binomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CoboundaryOutcome {
  Witness {
    witness:  BinomialPoly,
    rational: RationalPoly,
  },
  /// `functional` is integral on every column of the system but not on the
  /// target modulo `modulus`; rows are indexed by `support`.
  NoSolution {
    support:    Vec<Vec<u32>>,
    #[serde(with = "crate::homalg::bigint_json::vec")]
    functional: Vec<BigInt>,
    #[serde(with = "crate::homalg::bigint_json")]
    modulus:    BigInt,
  },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoboundaryReport {
  pub level:       usize,
  pub mode:        BasisMode,
  pub d_max:       u32,
  pub ansatz_size: usize,
  pub outcome:     CoboundaryOutcome,
  /// The witness or certificate was rechecked against the system.
  pub verified:    bool,
}

fn ansatz(nvars: usize, d_max: u32, mode: BasisMode) -> Vec<BinomialPoly> {
  (0..=d_max)
    .flat_map(|d| MultiIndex::all_of_degree(nvars, d))
    .map(|m| match mode {
      BasisMode::Binomial => BinomialPoly::basis(m),
      BasisMode::IntegerPolynomial => {
        let mono = RationalPoly::from_terms(nvars, [(m.0, BigRational::one())]).expect("arity");
        BinomialPoly::from_rational_poly(&mono).expect("monomials are integer-valued")
      },
    })
    .collect()
}

/// Solves `d c = target` for an `(n-1)`-cochain `c` in the span of the
/// degree-`≤ d_max` ansatz, over the integers.
pub fn coboundary_solve(x: &NumSimplicialObject, n: usize, target: &BinomialPoly, mode: BasisMode, d_max: u32) -> Result<CoboundaryReport> {
  if n == 0 || n >= x.n_max {
    return Err(NumaError::InvalidInput(format!("target level must lie in 1..{}", x.n_max)));
  }
  if target.nvars() != x.level_dim(n) {
    return Err(NumaError::ArityMismatch { expected: x.level_dim(n), found: target.nvars() });
  }
  if !cochain_complex(x, n)?.apply(target)?.is_zero() {
    return Err(NumaError::NotACocycle(n));
  }
  let delta = cochain_complex(x, n - 1)?;
  let basis = ansatz(x.level_dim(n - 1), d_max, mode);
  let images = basis.iter().map(|b| delta.apply(b)).collect::<Result<Vec<_>>>()?;
  let support: Vec<MultiIndex> = images
    .iter()
    .chain(std::iter::once(target))
    .flat_map(|p| p.terms().keys().cloned())
    .collect::<BTreeSet<_>>()
    .into_iter()
    .collect();
  let columns: Vec<Vec<BigInt>> = images.iter().map(|p| support.iter().map(|m| p.coeff(&m.0)).collect()).collect();
  let a = IntMatrix::from_columns(support.len(), &columns);
  let b: Vec<BigInt> = support.iter().map(|m| target.coeff(&m.0)).collect();
  let (outcome, verified) = match solve_integer(&a, &b)? {
    IntegerSolution::Solution(c) => {
      let mut w = BinomialPoly::zero(x.level_dim(n - 1));
      for (ci, bi) in c.iter().zip(&basis) {
        w = w.add(&bi.scale(ci))?;
      }
      let ok = delta.apply(&w)? == *target;
      (CoboundaryOutcome::Witness { rational: w.to_rational_poly(), witness: w }, ok)
    },
    IntegerSolution::NoSolution { functional, modulus } => {
      let ok = verify_no_solution(&a, &b, &functional, &modulus);
      (CoboundaryOutcome::NoSolution { support: support.into_iter().map(|m| m.0).collect(), functional, modulus }, ok)
    },
  };
  Ok(CoboundaryReport { level: n, mode, d_max, ansatz_size: basis.len(), outcome, verified })
}

/// `((x + y)^p - x^p - y^p) / p` on level 2 of `K(Z, 1)`.
pub fn p_cocycle(p: u32) -> Result<BinomialPoly> {
  let x = RationalPoly::var(2, 0);
  let y = RationalPoly::var(2, 1);
  let num = &(&(&x + &y).pow(p) - &x.pow(p)) - &y.pow(p);
  BinomialPoly::from_rational_poly(&num.scale(&BigRational::new(BigInt::one(), BigInt::from(p))))
}

/// A simplicial group: a numerical simplicial object with a group law on
/// each level, faces and degeneracies being homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialGroup {
  pub object: NumSimplicialObject,
  pub laws:   Vec<MalcevGroup>,
}

impl SimplicialGroup {
  pub fn new(object: NumSimplicialObject, laws: Vec<MalcevGroup>) -> Result<Self> {
    if laws.len() != object.n_max + 1 {
      return Err(NumaError::InconsistentData("one group law per level is required".into()));
    }
    for (n, law) in laws.iter().enumerate() {
      if law.dim != object.level_dim(n) {
        return Err(NumaError::ArityMismatch { expected: object.level_dim(n), found: law.dim });
      }
      let rep = group_axioms(law);
      if !rep.passed() {
        return Err(NumaError::NotAGroup(format!("level {n}: {}", rep.failures.join("; "))));
      }
    }
    let g = SimplicialGroup { object, laws };
    let x = &g.object;
    for n in 1..=x.n_max {
      for i in 0..=n {
        if !g.is_homomorphism(x.face(n, i), n, n - 1)? {
          return Err(NumaError::NotAGroup(format!("d{i} at level {n} is not a homomorphism")));
        }
      }
    }
    for n in 0..x.n_max {
      for i in 0..=n {
        if !g.is_homomorphism(x.degeneracy(n, i), n, n + 1)? {
          return Err(NumaError::NotAGroup(format!("s{i} at level {n} is not a homomorphism")));
        }
      }
    }
    Ok(g)
  }

  fn is_homomorphism(&self, maps: &[BinomialPoly], src: usize, dst: usize) -> Result<bool> {
    let dim = self.object.level_dim(src);
    let two = 2 * dim;
    let lhs = compose_maps(maps, &self.laws[src].mult, two)?;
    let left = embed_all(maps, two, 0);
    let right = embed_all(maps, two, dim);
    let rhs = compose_maps(&self.laws[dst].mult, &[left, right].concat(), two)?;
    Ok(lhs == rhs)
  }

  /// Coordinatewise addition on every level of a simplicial abelian group.
  pub fn additive(object: NumSimplicialObject) -> Result<Self> {
    let laws = object.level_ranks.iter().map(|&r| MalcevGroup::abelian(r)).collect();
    Self::new(object, laws)
  }

  pub fn n_max(&self) -> usize { self.object.n_max }
}

/// `τ_q : B_q -> G_{q-1}` for `q` in `1..=n_max`; `levels[q - 1]` is `τ_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistingFunction {
  pub levels: Vec<Vec<BinomialPoly>>,
}

impl TwistingFunction {
  pub fn tau(&self, q: usize) -> &[BinomialPoly] { &self.levels[q - 1] }

  pub fn n_max(&self) -> usize { self.levels.len() }
}

/// `τ ≡ e`.
pub fn trivial_twisting(g: &SimplicialGroup, b: &NumSimplicialObject) -> TwistingFunction {
  let n_max = g.n_max().min(b.n_max);
  TwistingFunction { levels: (1..=n_max).map(|q| constants(&g.laws[q - 1].unit, b.level_dim(q))).collect() }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwistingReport {
  pub checked:  usize,
  pub failures: Vec<String>,
}

impl TwistingReport {
  pub fn passed(&self) -> bool { self.failures.is_empty() }
}

/// Checks, with `G` acting on the left in `∂_0(f, b) = (τ(b)·∂_0 f, ∂_0 b)`:
///
/// * `∂_0 τ(b) = τ(∂_0 b)^{-1} · τ(∂_1 b)`
/// * `∂_i τ(b) = τ(∂_{i+1} b)` for `i >= 1`
/// * `τ(s_0 b) = e`
/// * `τ(s_{i+1} b) = s_i τ(b)`
pub fn check_twisting(g: &SimplicialGroup, b: &NumSimplicialObject, tau: &TwistingFunction) -> Result<TwistingReport> {
  let mut rep = TwistingReport::default();
  let n_max = g.n_max().min(b.n_max);
  if tau.n_max() < n_max {
    rep.failures.push(format!("τ given for {} levels, need {n_max}", tau.n_max()));
    return Ok(rep);
  }
  for q in 1..=n_max {
    let t = tau.tau(q);
    if t.len() != g.object.level_dim(q - 1) || t.iter().any(|p| p.nvars() != b.level_dim(q)) {
      rep.failures.push(format!("τ_{q} has the wrong shape"));
    }
  }
  if !rep.passed() {
    return Ok(rep);
  }
  let record = |rep: &mut TwistingReport, ok: bool, what: String| {
    rep.checked += 1;
    if !ok {
      rep.failures.push(what);
    }
  };
  for q in 2..=n_max {
    let bv = b.level_dim(q);
    let t = tau.tau(q);
    let law = &g.laws[q - 2];
    let lhs = compose_maps(g.object.face(q - 1, 0), t, bv)?;
    let t0 = compose_maps(tau.tau(q - 1), b.face(q, 0), bv)?;
    let t1 = compose_maps(tau.tau(q - 1), b.face(q, 1), bv)?;
    let inv_t0 = compose_maps(&law.inv, &t0, bv)?;
    let rhs = compose_maps(&law.mult, &[inv_t0, t1].concat(), bv)?;
    record(&mut rep, lhs == rhs, format!("d0 tau at level {q}"));
    for i in 1..q {
      let lhs = compose_maps(g.object.face(q - 1, i), t, bv)?;
      let rhs = compose_maps(tau.tau(q - 1), b.face(q, i + 1), bv)?;
      record(&mut rep, lhs == rhs, format!("d{i} tau at level {q}"));
    }
  }
  for q in 0..n_max {
    let bv = b.level_dim(q);
    let t = tau.tau(q + 1);
    let lhs = compose_maps(t, b.degeneracy(q, 0), bv)?;
    record(&mut rep, lhs == constants(&g.laws[q].unit, bv), format!("tau s0 at level {q}"));
    if q >= 1 {
      for i in 0..q {
        let lhs = compose_maps(t, b.degeneracy(q, i + 1), bv)?;
        let rhs = compose_maps(g.object.degeneracy(q - 1, i), tau.tau(q), bv)?;
        record(&mut rep, lhs == rhs, format!("tau s{} at level {q}", i + 1));
      }
    }
  }
  Ok(rep)
}

/// `E(τ) = G ×_τ B`: level `n` has the `G_n` coordinates first, then `B_n`.
pub fn build_ptcp(g: &SimplicialGroup, b: &NumSimplicialObject, tau: &TwistingFunction) -> Result<NumSimplicialObject> {
  let rep = check_twisting(g, b, tau)?;
  if !rep.passed() {
    return Err(NumaError::InvalidTwisting(rep.failures.join("; ")));
  }
  let n_max = g.n_max().min(b.n_max);
  let gd = |n: usize| g.object.level_dim(n);
  let level_ranks: Vec<usize> = (0..=n_max).map(|n| gd(n) + b.level_dim(n)).collect();
  let f_part = |maps: &[BinomialPoly], n: usize| embed_all(maps, level_ranks[n], 0);
  let b_part = |maps: &[BinomialPoly], n: usize| embed_all(maps, level_ranks[n], gd(n));
  let mut faces = vec![Vec::new()];
  for n in 1..=n_max {
    let nv = level_ranks[n];
    let mut level = Vec::with_capacity(n + 1);
    let t = b_part(tau.tau(n), n);
    let d0f = f_part(g.object.face(n, 0), n);
    let mut first = compose_maps(&g.laws[n - 1].mult, &[t, d0f].concat(), nv)?;
    first.extend(b_part(b.face(n, 0), n));
    level.push(first);
    for i in 1..=n {
      let mut m = f_part(g.object.face(n, i), n);
      m.extend(b_part(b.face(n, i), n));
      level.push(m);
    }
    faces.push(level);
  }
  let degeneracies = (0..n_max)
    .map(|n| {
      (0..=n)
        .map(|i| {
          let mut m = f_part(g.object.degeneracy(n, i), n);
          m.extend(b_part(b.degeneracy(n, i), n));
          m
        })
        .collect()
    })
    .collect();
  NumSimplicialObject::new(level_ranks, faces, degeneracies)
}

/// Fibre `K(Z, 1)`, base `K(Z^2, 1)` and the twisting function of the
/// cocycle `c((a, β), (a', β')) = a β'`:
/// `τ_q(b_1, ..., b_q) = (c(b_1, b_2), ..., c(b_1, b_q))`.
#[derive(Clone, Debug)]
pub struct HeisenbergPtcp {
  pub fiber: SimplicialGroup,
  pub base:  NumSimplicialObject,
  pub tau:   TwistingFunction,
}

pub fn heisenberg_ptcp(n_max: usize) -> Result<HeisenbergPtcp> {
  let fiber = SimplicialGroup::additive(k_z_1(n_max))?;
  let base = classifying_space(&MalcevGroup::abelian(2), n_max)?;
  let levels = (1..=n_max)
    .map(|q| {
      let nv = 2 * q;
      (2..=q)
        .map(|k| {
          let mut e = vec![0u32; nv];
          e[0] = 1;
          e[2 * (k - 1) + 1] = 1;
          BinomialPoly::basis(MultiIndex(e))
        })
        .collect()
    })
    .collect();
  Ok(HeisenbergPtcp { fiber, base, tau: TwistingFunction { levels } })
}

/// The product on 1-simplices `(z, a, β)` of the Heisenberg PTCP, read off a
/// 2-simplex with `∂_2 w = u` and `∂_0 w = v` as `∂_1 w`. Returns the law in
/// six variables `(u, v)` after checking the filler symbolically.
pub fn heisenberg_pi1_law(e: &NumSimplicialObject) -> Result<Vec<BinomialPoly>> {
  if e.n_max < 2 || e.level_dim(1) != 3 || e.level_dim(2) != 6 {
    return Err(NumaError::InvalidInput("expected the Heisenberg PTCP".into()));
  }
  let v = |j| BinomialPoly::var(6, j);
  // u = (z1, a1, β1), v = (z2, a2, β2); w = (z1, z2 - a1 β2, a1, β1, a2, β2)
  let a1b2 = BinomialPoly::basis(MultiIndex(vec![0, 1, 0, 0, 0, 1]));
  let w = vec![v(0), v(3).sub(&a1b2)?, v(1), v(2), v(4), v(5)];
  let d2 = compose_maps(e.face(2, 2), &w, 6)?;
  let d0 = compose_maps(e.face(2, 0), &w, 6)?;
  if d2 != vec![v(0), v(1), v(2)] || d0 != vec![v(3), v(4), v(5)] {
    return Err(NumaError::InconsistentData("2-simplex filler has the wrong faces".into()));
  }
  compose_maps(e.face(2, 1), &w, 6)
}

/// Whether `(z, a, β) -> (a, β, -z)` carries `law` to the Heisenberg
/// multiplication.
pub fn matches_heisenberg(law: &[BinomialPoly]) -> Result<bool> {
  let h = heisenberg();
  let phi = |z: BinomialPoly, a: BinomialPoly, b: BinomialPoly| vec![a, b, z.neg()];
  let v = |j| BinomialPoly::var(6, j);
  let lhs = phi(law[0].clone(), law[1].clone(), law[2].clone());
  let inner = [phi(v(0), v(1), v(2)), phi(v(3), v(4), v(5))].concat();
  Ok(lhs == compose_maps(&h.mult, &inner, 6)?)
}

/// `Γ(Z[k] --id--> Z[k-1])` split as a PTCP with fibre `Γ(Z[k-1])` and base
/// `Γ(Z[k])`; only `∂_0` involves the differential, and its off-diagonal
/// block is the twisting function.
#[derive(Clone, Debug)]
pub struct PathFibration {
  pub fiber: SimplicialGroup,
  pub base:  NumSimplicialObject,
  pub tau:   TwistingFunction,
  pub total: SimplicialAbGroup,
}

pub fn path_fibration(k: usize, n_max: usize) -> Result<PathFibration> {
  if k == 0 || n_max < k {
    return Err(NumaError::InvalidInput(format!("path fibration needs 1 <= k <= n_max, got k = {k}, n_max = {n_max}")));
  }
  let k = k as i64;
  let cone = FreeComplex::two_term(k, IntMatrix::identity(1))?;
  let total = gamma(&cone, n_max)?;
  let fiber_ab = gamma(&FreeComplex::point(k - 1), n_max)?;
  let base = NumSimplicialObject::from_ab_group(&gamma(&FreeComplex::point(k), n_max)?);
  let fiber = SimplicialGroup::additive(NumSimplicialObject::from_ab_group(&fiber_ab))?;
  let levels = (1..=n_max)
    .map(|q| {
      let m = total.face(q, 0);
      let (g_rows, g_cols) = (fiber_ab.level_ranks[q - 1], fiber_ab.level_ranks[q]);
      (0..g_rows)
        .map(|i| {
          let nv = m.cols() - g_cols;
          let mut p = BinomialPoly::zero(nv);
          for j in 0..nv {
            p.add_term(MultiIndex::unit(nv, j), m[(i, g_cols + j)].clone());
          }
          p
        })
        .collect()
    })
    .collect();
  Ok(PathFibration { fiber, base, tau: TwistingFunction { levels }, total })
}

/// Orbits of `(Z/n)^*` under `α -> ±β²α` (homotopy classes of the first
/// Postnikov stage) and under `α -> ±α` (isomorphism classes of PTCPs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LensOrbits {
  pub n:                        u64,
  pub units:                    Vec<u64>,
  pub homotopy_classes:         Vec<Vec<u64>>,
  pub isomorphism_classes:      Vec<Vec<u64>>,
  /// Pairs in one homotopy class but different isomorphism classes.
  pub homotopic_not_isomorphic: Vec<(u64, u64)>,
}

fn orbits(units: &[u64], multipliers: &[u64], n: u64) -> Vec<Vec<u64>> {
  let mut seen = BTreeSet::new();
  let mut out = Vec::new();
  for &a in units {
    if seen.contains(&a) {
      continue;
    }
    let orbit: BTreeSet<u64> = multipliers.iter().map(|&m| (m * a) % n).collect();
    seen.extend(orbit.iter().copied());
    out.push(orbit.into_iter().collect());
  }
  out
}

pub fn lens_orbits(n: u64) -> Result<LensOrbits> {
  if n < 2 {
    return Err(NumaError::InvalidInput(format!("lens_orbits needs n >= 2, got {n}")));
  }
  let units: Vec<u64> = (1..n).filter(|a| a.gcd(&n) == 1).collect();
  let signs = [1, n - 1];
  let pm_squares: BTreeSet<u64> = units.iter().flat_map(|b| signs.iter().map(move |s| (s * b % n * b) % n)).collect();
  let pm_squares: Vec<u64> = pm_squares.into_iter().collect();
  let homotopy_classes = orbits(&units, &pm_squares, n);
  let isomorphism_classes = orbits(&units, &signs, n);
  let class_of = |classes: &[Vec<u64>], a: u64| classes.iter().position(|c| c.contains(&a));
  let mut pairs = Vec::new();
  for (i, &a) in units.iter().enumerate() {
    for &b in &units[i + 1..] {
      if class_of(&homotopy_classes, a) == class_of(&homotopy_classes, b)
        && class_of(&isomorphism_classes, a) != class_of(&isomorphism_classes, b)
      {
        pairs.push((a, b));
      }
    }
  }
  Ok(LensOrbits { n, units, homotopy_classes, isomorphism_classes, homotopic_not_isomorphic: pairs })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::dold_kan::normalize;

  #[test]
  fn k_z_1_faces() {
    let k = k_z_1(5);
    assert_eq!(k.level_ranks, vec![0, 1, 2, 3, 4, 5]);
    assert_eq!(k.face(2, 0), &[BinomialPoly::var(2, 1)]);
    assert_eq!(k.face(2, 1), &[BinomialPoly::linear(&[1, 1], 0)]);
    assert_eq!(k.face(2, 2), &[BinomialPoly::var(2, 0)]);
    assert!(k.face(1, 0).is_empty() && k.face(1, 1).is_empty());
    assert!(check_simplicial_identities(&k).unwrap().passed());
  }

  #[test]
  fn corrupted_face_is_reported() {
    let mut k = k_z_1(3);
    k.faces[2][1] = vec![BinomialPoly::linear(&[1, 2], 0)];
    let rep = check_simplicial_identities(&k).unwrap();
    assert!(!rep.passed());
    assert!(rep.violations.iter().any(|v| v.identity == "dd" && v.level == 3));
  }

  #[test]
  fn heisenberg_classifying_space() {
    let bh = classifying_space(&heisenberg(), 4).unwrap();
    assert!(check_simplicial_identities(&bh).unwrap().passed());
    assert!(matches!(graded_cohomology(&bh, 2, CochainMode::Normalized), Err(NumaError::NonAdditiveFaces(_))));
  }

  #[test]
  fn coboundary_examples() {
    let k = k_z_1(3);
    let d = cochain_complex(&k, 1).unwrap();
    let f = BinomialPoly::binom_x(2);
    let xy = BinomialPoly::basis(MultiIndex(vec![1, 1]));
    assert_eq!(d.apply(&f).unwrap(), xy.neg());
    assert!(d.apply(&BinomialPoly::var(1, 0)).unwrap().is_zero());
    let d0 = cochain_complex(&k, 0).unwrap();
    assert!(d0.apply(&BinomialPoly::constant(0, 7)).unwrap().is_zero());
  }

  #[test]
  fn k_z_1_cohomology() {
    let k = k_z_1(4);
    let h = graded_cohomology(&k, 4, CochainMode::Normalized).unwrap();
    for e in &h.entries {
      let expect = (e.n == 0 && e.d == 0) || (e.n == 1 && e.d == 1);
      assert_eq!(e.group, if expect { FinAbGroup::free(1) } else { FinAbGroup::zero() }, "H^{} degree {}", e.n, e.d);
    }
    let u = graded_cohomology(&k_z_1(3), 4, CochainMode::Unnormalized).unwrap();
    let n3 = graded_cohomology(&k_z_1(3), 4, CochainMode::Normalized).unwrap();
    assert_eq!(u.entries.iter().map(|e| &e.group).collect::<Vec<_>>(), n3.entries.iter().map(|e| &e.group).collect::<Vec<_>>());
  }

  #[test]
  fn torus_cohomology() {
    let t = classifying_space(&MalcevGroup::abelian(2), 3).unwrap();
    let h = graded_cohomology(&t, 2, CochainMode::Normalized).unwrap();
    assert_eq!(h.get(2, 2), Some(&FinAbGroup::free(1)));
    assert_eq!(h.totals, vec![FinAbGroup::free(1), FinAbGroup::free(2), FinAbGroup::free(1)]);
  }

  #[test]
  fn p_cocycles() {
    let k = k_z_1(3);
    for p in [2u32, 3, 5] {
      let target = p_cocycle(p).unwrap();
      let rep = coboundary_solve(&k, 2, &target, BasisMode::Binomial, p).unwrap();
      assert!(rep.verified);
      let CoboundaryOutcome::Witness { rational, .. } = rep.outcome else { panic!("p = {p}") };
      let x = RationalPoly::var(1, 0);
      let frob = (&x.pow(p) - &x).scale(&BigRational::new(BigInt::one(), BigInt::from(p)));
      let rest = &rational + &frob;
      assert!(rest.total_degree().unwrap_or(0) <= 1 && num_traits::Zero::is_zero(&rest.coeff(&[0])), "p = {p}: {rest}");
      let rep = coboundary_solve(&k, 2, &target, BasisMode::IntegerPolynomial, p + 1).unwrap();
      assert!(rep.verified);
      assert!(matches!(rep.outcome, CoboundaryOutcome::NoSolution { .. }));
    }
    let rep = coboundary_solve(&k, 2, &BinomialPoly::zero(2), BasisMode::Binomial, 3).unwrap();
    let CoboundaryOutcome::Witness { witness, .. } = rep.outcome else { panic!() };
    assert!(witness.is_zero());
    assert!(matches!(
      coboundary_solve(&k, 2, &BinomialPoly::var(2, 0), BasisMode::Binomial, 2),
      Err(NumaError::NotACocycle(2))
    ));
  }

  #[test]
  fn heisenberg_ptcp_is_valid() {
    let h = heisenberg_ptcp(4).unwrap();
    assert!(check_twisting(&h.fiber, &h.base, &h.tau).unwrap().passed());
    let e = build_ptcp(&h.fiber, &h.base, &h.tau).unwrap();
    assert_eq!(e.level_dim(1), 3);
    assert!(check_simplicial_identities(&e).unwrap().passed());
    let law = heisenberg_pi1_law(&e).unwrap();
    assert!(matches_heisenberg(&law).unwrap());
  }

  #[test]
  fn corrupted_twisting_is_rejected() {
    let mut h = heisenberg_ptcp(3).unwrap();
    h.tau.levels[2][1] = h.tau.levels[2][1].add(&BinomialPoly::var(6, 2)).unwrap();
    let rep = check_twisting(&h.fiber, &h.base, &h.tau).unwrap();
    assert!(!rep.passed());
    assert!(matches!(build_ptcp(&h.fiber, &h.base, &h.tau), Err(NumaError::InvalidTwisting(_))));
  }

  #[test]
  fn trivial_twisting_gives_product() {
    let g = SimplicialGroup::additive(k_z_1(3)).unwrap();
    let b = k_z_1(3);
    let tau = trivial_twisting(&g, &b);
    let e = build_ptcp(&g, &b, &tau).unwrap();
    assert!(check_simplicial_identities(&e).unwrap().passed());
    let h = graded_cohomology(&e, 3, CochainMode::Normalized).unwrap();
    assert_eq!(h.totals.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![1, 2, 1]);
  }

  #[test]
  fn path_fibration_is_contractible() {
    for k in 1..=2 {
      let pf = path_fibration(k, 4).unwrap();
      assert!(check_twisting(&pf.fiber, &pf.base, &pf.tau).unwrap().passed());
      let e = build_ptcp(&pf.fiber, &pf.base, &pf.tau).unwrap();
      assert_eq!(e, NumSimplicialObject::from_ab_group(&pf.total));
      let n = normalize(&pf.total);
      for d in 0..4 {
        assert!(n.homology(d).is_zero(), "k = {k}, degree {d}");
      }
    }
  }

  #[test]
  fn gamma_z2_cohomology() {
    let x = NumSimplicialObject::from_ab_group(&gamma(&FreeComplex::point(2), 4).unwrap());
    assert!(check_simplicial_identities(&x).unwrap().passed());
    let h = graded_cohomology(&x, 4, CochainMode::Normalized).unwrap();
    assert_eq!(h.totals[2].free_rank, 1);
    assert!(h.totals[3].is_zero(), "{}", h.totals[3]);
  }

  #[test]
  fn ab_group_roundtrip() {
    let a = gamma(&FreeComplex::two_term(2, IntMatrix::from_i64(&[&[3]])).unwrap(), 3).unwrap();
    assert_eq!(NumSimplicialObject::from_ab_group(&a).to_ab_group().unwrap(), a);
    assert!(matches!(classifying_space(&heisenberg(), 2).unwrap().to_ab_group(), Err(NumaError::NonAdditiveFaces(_))));
  }

  #[test]
  fn lens_examples() {
    let l5 = lens_orbits(5).unwrap();
    assert_eq!(l5.homotopy_classes, vec![vec![1, 4], vec![2, 3]]);
    assert_eq!(l5.isomorphism_classes, vec![vec![1, 4], vec![2, 3]]);
    let l7 = lens_orbits(7).unwrap();
    assert_eq!(l7.homotopy_classes.len(), 1);
    assert_eq!(l7.isomorphism_classes.len(), 3);
    assert!(!l7.homotopic_not_isomorphic.is_empty());
    let l2 = lens_orbits(2).unwrap();
    assert_eq!((l2.homotopy_classes.len(), l2.isomorphism_classes.len()), (1, 1));
  }

  #[test]
  fn abelian_classifying_space_matches_k_z_1() {
    assert_eq!(classifying_space(&MalcevGroup::abelian(1), 4).unwrap(), k_z_1(4));
  }
}
