//! The Dold–Kan functors at finite truncation: `Γ` from free chain complexes
//! to simplicial abelian groups and the normalization `N` back.
//!
//! `Γ(C)_n` is the direct sum of copies of `C_k` indexed by order-preserving
//! surjections `[n] -> [k]`. A surjection is recorded by its jump set, the
//! positions `i` in `1..=n` where `σ(i) = σ(i-1) + 1`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::{
  error::{NumaError, Result},
  homalg::{smith_normal_form, t_rank, FreeComplex, IntMatrix},
};

/// Truncated simplicial abelian group with free levels. `faces[n][i]` is
/// `∂_i : A_n -> A_{n-1}` (empty for `n = 0`); `degeneracies[n][i]` is
/// `s_i : A_n -> A_{n+1}` for `n < n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialAbGroup {
  pub n_max:        usize,
  pub level_ranks:  Vec<usize>,
  pub faces:        Vec<Vec<IntMatrix>>,
  pub degeneracies: Vec<Vec<IntMatrix>>,
}

impl SimplicialAbGroup {
  pub fn face(&self, n: usize, i: usize) -> &IntMatrix { &self.faces[n][i] }

  pub fn degeneracy(&self, n: usize, i: usize) -> &IntMatrix { &self.degeneracies[n][i] }

  /// The constant simplicial group on `Z^rank`.
  pub fn constant(rank: usize, n_max: usize) -> Self {
    let id = IntMatrix::identity(rank);
    SimplicialAbGroup {
      n_max,
      level_ranks: vec![rank; n_max + 1],
      faces: (0..=n_max).map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] }).collect(),
      degeneracies: (0..n_max).map(|n| vec![id.clone(); n + 1]).collect(),
    }
  }

  /// Every simplicial identity that fails, as `(identity, n, i, j)` labels.
  pub fn identity_violations(&self) -> Vec<String> {
    let mut bad = Vec::new();
    let mul = |a: &IntMatrix, b: &IntMatrix| a.mul(b).expect("composable");
    for n in 2..=self.n_max {
      for j in 1..=n {
        for i in 0..j {
          // ∂_i ∂_j = ∂_{j-1} ∂_i on level n
          if mul(self.face(n - 1, i), self.face(n, j)) != mul(self.face(n - 1, j - 1), self.face(n, i)) {
            bad.push(format!("d_{i} d_{j} = d_{} d_{i} at level {n}", j - 1));
          }
        }
      }
    }
    for n in 0..self.n_max.saturating_sub(1) {
      for j in 0..=n {
        for i in 0..=j {
          // s_i s_j = s_{j+1} s_i on level n
          if mul(self.degeneracy(n + 1, i), self.degeneracy(n, j)) != mul(self.degeneracy(n + 1, j + 1), self.degeneracy(n, i)) {
            bad.push(format!("s_{i} s_{j} = s_{} s_{i} at level {n}", j + 1));
          }
        }
      }
    }
    for n in 0..self.n_max {
      let id = IntMatrix::identity(self.level_ranks[n]);
      for j in 0..=n {
        let s = self.degeneracy(n, j);
        for i in 0..=n + 1 {
          let lhs = mul(self.face(n + 1, i), s);
          let ok = if i < j {
            lhs == mul(self.degeneracy(n - 1, j - 1), self.face(n, i))
          } else if i == j || i == j + 1 {
            lhs == id
          } else {
            lhs == mul(self.degeneracy(n - 1, j), self.face(n, i - 1))
          };
          if !ok {
            bad.push(format!("d_{i} s_{j} at level {n}"));
          }
        }
      }
    }
    bad
  }
}

/// Jump sets of all surjections `[n] -> [k]`, as sorted `k`-subsets of
/// `1..=n` in lexicographic order.
pub fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
  fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
      out.push(cur.clone());
      return;
    }
    for v in start..=n {
      if n - v + 1 < left {
        break;
      }
      cur.push(v);
      rec(v + 1, n, left - 1, cur, out);
      cur.pop();
    }
  }
  let mut out = Vec::new();
  if k <= n {
    rec(1, n, k, &mut Vec::new(), &mut out);
  }
  out
}

fn jump_set(values: &[usize]) -> Vec<usize> { (1..values.len()).filter(|&i| values[i] == values[i - 1] + 1).collect() }

fn surjection_values(n: usize, jumps: &[usize]) -> Vec<usize> {
  (0..=n).map(|i| jumps.iter().filter(|&&j| j <= i).count()).collect()
}

struct Level {
  offsets: HashMap<(usize, Vec<usize>), usize>,
  blocks:  Vec<(usize, Vec<usize>, usize)>,
  rank:    usize,
}

fn level_layout(n: usize, ranks: &[usize]) -> Level {
  let mut offsets = HashMap::new();
  let mut blocks = Vec::new();
  let mut rank = 0;
  for (k, &rk) in ranks.iter().enumerate().take(n + 1) {
    if rk == 0 {
      continue;
    }
    for jumps in surjections(n, k) {
      offsets.insert((k, jumps.clone()), rank);
      blocks.push((k, jumps, rank));
      rank += rk;
    }
  }
  Level { offsets, blocks, rank }
}

/// Matrix of `θ^* : Γ_n -> Γ_m` for an order-preserving `θ : [m] -> [n]`.
fn operator_matrix(c: &FreeComplex, ranks: &[usize], src: &Level, dst: &Level, n: usize, theta: &[usize]) -> IntMatrix {
  let mut out = IntMatrix::zeros(dst.rank, src.rank);
  let m = theta.len() - 1;
  for (k, jumps, off) in &src.blocks {
    let sigma = surjection_values(n, jumps);
    let comp: Vec<usize> = theta.iter().map(|&t| sigma[t]).collect();
    let hits_zero = comp[0] == 0;
    let top = comp[m];
    // the image is an interval exactly when no step skips a value
    let contiguous = (1..=m).all(|i| comp[i] - comp[i - 1] <= 1);
    if !contiguous || top != *k {
      continue;
    }
    if hits_zero {
      let key = (*k, jump_set(&comp));
      let to = dst.offsets[&key];
      for b in 0..ranks[*k] {
        out[(to + b, off + b)] = BigInt::from(1);
      }
    } else if comp[0] == 1 {
      let shifted: Vec<usize> = comp.iter().map(|v| v - 1).collect();
      let key = (k - 1, jump_set(&shifted));
      if let Some(&to) = dst.offsets.get(&key) {
        let d = c.differential(*k as i64);
        for a in 0..d.rows() {
          for b in 0..d.cols() {
            out[(to + a, off + b)] = d[(a, b)].clone();
          }
        }
      }
    }
  }
  out
}

fn coface(n: usize, i: usize) -> Vec<usize> { (0..n).map(|j| if j < i { j } else { j + 1 }).collect() }

fn codegeneracy(n: usize, i: usize) -> Vec<usize> { (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect() }

/// `Γ(C)` through level `n_max`.
pub fn gamma(c: &FreeComplex, n_max: usize) -> Result<SimplicialAbGroup> {
  if let Some(lo) = c.min_degree() {
    if lo < 0 {
      return Err(NumaError::InvalidInput(format!("complex has a group in negative degree {lo}")));
    }
  }
  if let Some(hi) = c.max_degree() {
    if hi as usize > n_max {
      return Err(NumaError::TruncationTooSmall { degree: hi as usize, n_max });
    }
  }
  let ranks: Vec<usize> = (0..=n_max).map(|k| c.rank(k as i64)).collect();
  let levels: Vec<Level> = (0..=n_max).map(|n| level_layout(n, &ranks)).collect();
  let faces = (0..=n_max)
    .map(|n| {
      if n == 0 {
        return vec![];
      }
      (0..=n).map(|i| operator_matrix(c, &ranks, &levels[n], &levels[n - 1], n, &coface(n, i))).collect()
    })
    .collect();
  let degeneracies = (0..n_max)
    .map(|n| (0..=n).map(|i| operator_matrix(c, &ranks, &levels[n], &levels[n + 1], n, &codegeneracy(n, i))).collect())
    .collect();
  let level_ranks = levels.iter().map(|l| l.rank).collect();
  Ok(SimplicialAbGroup { n_max, level_ranks, faces, degeneracies })
}

/// Level ranks predicted by the rank function: `T(r)(n)`.
pub fn predicted_level_ranks(c: &FreeComplex, n_max: usize) -> Vec<usize> {
  let r = c.rank_function();
  (0..=n_max).map(|n| t_rank(&r, n).to_usize().expect("small rank")).collect()
}

/// Normalized complex: `N_n = ∩_{i≥1} ker ∂_i` with differential `∂_0`.
/// Degrees run `0..=n_max`; homology in degree `n_max` needs level
/// `n_max + 1` and is not meaningful.
pub fn normalize(a: &SimplicialAbGroup) -> FreeComplex {
  struct Kern {
    basis: IntMatrix,
    v_inv: IntMatrix,
    rank:  usize,
  }
  let kernels: Vec<Kern> = (0..=a.n_max)
    .map(|n| {
      let r = a.level_ranks[n];
      if n == 0 || r == 0 {
        return Kern { basis: IntMatrix::identity(r), v_inv: IntMatrix::identity(r), rank: 0 };
      }
      let mut stacked = IntMatrix::zeros(0, r);
      for i in 1..=n {
        stacked = stacked.vstack(a.face(n, i)).expect("same width");
      }
      let snf = smith_normal_form(&stacked);
      Kern { basis: snf.kernel(), v_inv: snf.v_inv.clone(), rank: snf.rank() }
    })
    .collect();
  let mut ranks = BTreeMap::new();
  let mut diffs = BTreeMap::new();
  for n in 0..=a.n_max {
    ranks.insert(n as i64, kernels[n].basis.cols());
    if n == 0 {
      continue;
    }
    let image = a.face(n, 0).mul(&kernels[n].basis).expect("composable");
    let prev = &kernels[n - 1];
    let coords = prev.v_inv.mul(&image).expect("composable");
    let d = coords.rows_range(prev.rank..coords.rows());
    debug_assert!(coords.rows_range(0..prev.rank).is_zero(), "∂_0 leaves the normalized subgroup");
    diffs.insert(n as i64, d);
  }
  FreeComplex::new(ranks, diffs).expect("normalized complex is a complex")
}

/// Random complex with groups in degrees `0..=max_degree`, ranks at most
/// `max_rank`, small entries, and `d∘d = 0` by construction (each
/// differential factors through the kernel of the next one down).
pub fn random_complex<R: Rng>(rng: &mut R, max_degree: usize, max_rank: usize) -> FreeComplex {
  let ranks: Vec<usize> = (0..=max_degree).map(|_| rng.gen_range(0..=max_rank)).collect();
  let mut diffs: BTreeMap<i64, IntMatrix> = BTreeMap::new();
  for n in 1..=max_degree {
    let kernel = if n == 1 {
      IntMatrix::identity(ranks[0])
    } else {
      smith_normal_form(&diffs.get(&((n - 1) as i64)).cloned().unwrap_or_else(|| IntMatrix::zeros(ranks[n - 2], ranks[n - 1])))
        .kernel()
    };
    let mut coeffs = IntMatrix::zeros(kernel.cols(), ranks[n]);
    for i in 0..kernel.cols() {
      for j in 0..ranks[n] {
        coeffs[(i, j)] = BigInt::from(rng.gen_range(-3..=3));
      }
    }
    diffs.insert(n as i64, kernel.mul(&coeffs).expect("composable"));
  }
  let ranks = ranks.into_iter().enumerate().map(|(k, r)| (k as i64, r)).collect();
  FreeComplex::new(ranks, diffs).expect("d∘d = 0 by construction")
}

#[cfg(test)]
mod tests {
  use rand::{rngs::StdRng, SeedableRng};

  use super::*;
  use crate::homalg::FinAbGroup;

  #[test]
  fn surjection_counts() {
    assert_eq!(surjections(4, 2).len(), 6);
    assert_eq!(surjections(3, 0), vec![Vec::<usize>::new()]);
    assert_eq!(surjections(2, 3).len(), 0);
    assert_eq!(surjection_values(3, &[2]), vec![0, 0, 1, 1]);
  }

  #[test]
  fn gamma_of_z_in_degree_one() {
    let c = FreeComplex::point(1);
    let g = gamma(&c, 4).unwrap();
    assert_eq!(g.level_ranks, vec![0, 1, 2, 3, 4]);
    assert!(g.face(1, 0).is_zero() && g.face(1, 1).is_zero());
    assert_eq!(g.face(1, 0).shape(), (0, 1));
    assert!(g.identity_violations().is_empty());
  }

  #[test]
  fn gamma_of_z_in_degree_zero_is_constant() {
    let g = gamma(&FreeComplex::point(0), 3).unwrap();
    assert_eq!(g, SimplicialAbGroup::constant(1, 3));
    let n = normalize(&g);
    assert_eq!(n.rank_function(), vec![1]);
  }

  #[test]
  fn gamma_of_times_two() {
    let c = FreeComplex::two_term(1, IntMatrix::from_i64(&[&[2]])).unwrap();
    let g = gamma(&c, 5).unwrap();
    assert_eq!(g.level_ranks, vec![1, 2, 3, 4, 5, 6]);
    assert_eq!(g.level_ranks, predicted_level_ranks(&c, 5));
    assert!(g.identity_violations().is_empty());
    let n = normalize(&g);
    assert_eq!(n.rank(0), 1);
    assert_eq!(n.rank(1), 1);
    assert_eq!(n.rank(2), 0);
    assert_eq!(n.homology(0), FinAbGroup::new(0, &[2]).unwrap());
    assert!(n.homology(1).is_zero());
  }

  #[test]
  fn gamma_of_z_in_degree_two_normalizes_back() {
    let c = FreeComplex::point(2);
    let g = gamma(&c, 4).unwrap();
    assert!(g.identity_violations().is_empty());
    let n = normalize(&g);
    assert_eq!((0..=4).map(|k| n.rank(k)).collect::<Vec<_>>(), vec![0, 0, 1, 0, 0]);
  }

  #[test]
  fn truncation_too_small() {
    assert!(matches!(gamma(&FreeComplex::point(3), 2), Err(NumaError::TruncationTooSmall { .. })));
  }

  #[test]
  fn corrupted_face_is_detected() {
    let mut g = gamma(&FreeComplex::point(1), 3).unwrap();
    g.faces[2][1][(0, 0)] = BigInt::from(2);
    assert!(!g.identity_violations().is_empty());
  }

  #[test]
  fn random_complexes_round_trip() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10 {
      let c = random_complex(&mut rng, 3, 3);
      let g = gamma(&c, 5).unwrap();
      assert_eq!(g.level_ranks, predicted_level_ranks(&c, 5));
      let n = normalize(&g);
      for k in 0..=4 {
        assert_eq!(n.homology(k), c.homology(k), "degree {k}");
        assert_eq!(n.rank(k), c.rank(k));
      }
    }
  }
}
