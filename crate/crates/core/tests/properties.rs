use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use numa::{
  binom::{newton_coefficients_1d, BinomialPoly, MultiIndex},
  coeff::{mahler_profile, PadicApprox},
  dold_kan::random_complex,
  homalg::{smith_normal_form, IntMatrix},
  numring::{lambda_additive, Integers},
};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn poly(nvars: usize) -> impl Strategy<Value = BinomialPoly> {
  prop::collection::vec((prop::collection::vec(0u32..4, nvars), -50i64..50), 0..6)
    .prop_map(move |terms| BinomialPoly::from_terms(nvars, terms).unwrap())
}

fn point(nvars: usize) -> impl Strategy<Value = Vec<BigInt>> { prop::collection::vec((-30i64..30).prop_map(BigInt::from), nvars) }

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
  (1..=max, 1..=max).prop_flat_map(|(r, c)| {
    prop::collection::vec(prop::collection::vec((-50i64..=50).prop_map(BigInt::from), c), r)
      .prop_map(|rows| IntMatrix::from_rows(rows).unwrap())
  })
}

/// A product of random elementary row operations and its inverse.
fn unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
  let mut p = IntMatrix::identity(n);
  let mut pinv = IntMatrix::identity(n);
  if n < 2 {
    return (p, pinv);
  }
  for _ in 0..3 * n {
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    let c = BigInt::from(rng.gen_range(-3i64..=3));
    let mut e = IntMatrix::identity(n);
    e[(i, j)] = c.clone();
    let mut einv = IntMatrix::identity(n);
    einv[(i, j)] = -c;
    p = e.mul(&p).unwrap();
    pinv = pinv.mul(&einv).unwrap();
  }
  (p, pinv)
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(64))]

  #[test]
  fn rational_roundtrip(f in poly(2)) {
    prop_assert_eq!(BinomialPoly::from_rational_poly(&f.to_rational_poly()).unwrap(), f);
  }

  #[test]
  fn evaluation_is_a_ring_map(f in poly(2), g in poly(2), x in point(2)) {
    let sum = f.add(&g).unwrap().evaluate(&x).unwrap();
    prop_assert_eq!(sum, f.evaluate(&x).unwrap() + g.evaluate(&x).unwrap());
    let prod = f.mul(&g).unwrap().evaluate(&x).unwrap();
    prop_assert_eq!(prod, f.evaluate(&x).unwrap() * g.evaluate(&x).unwrap());
  }

  #[test]
  fn composition_evaluates_pointwise(f in poly(2), g0 in poly(1), g1 in poly(1), x in point(1)) {
    let h = f.compose(&[g0.clone(), g1.clone()]).unwrap();
    let inner = vec![g0.evaluate(&x).unwrap(), g1.evaluate(&x).unwrap()];
    prop_assert_eq!(h.evaluate(&x).unwrap(), f.evaluate(&inner).unwrap());
  }

  #[test]
  fn finite_difference_matches_values(f in poly(2), x in point(2), var in 0usize..2) {
    let mut shifted = x.clone();
    shifted[var] += 1;
    let d = f.finite_difference(var).unwrap();
    prop_assert_eq!(d.evaluate(&x).unwrap(), f.evaluate(&shifted).unwrap() - f.evaluate(&x).unwrap());
  }

  #[test]
  fn homology_survives_base_change(seed in any::<u64>()) {
    let mut rng = StdRng::seed_from_u64(seed);
    let c = random_complex(&mut rng, 3, 3);
    let bases: BTreeMap<i64, (IntMatrix, IntMatrix)> = c.ranks().iter().map(|(&n, &r)| (n, unimodular(&mut rng, r))).collect();
    let c2 = c.change_basis(&bases).unwrap();
    for n in 0..=4 {
      prop_assert_eq!(c.homology(n), c2.homology(n));
    }
  }

  #[test]
  fn lambda_series_is_additive(r in -40i64..40, s in -40i64..40) {
    prop_assert!(lambda_additive(&Integers, &BigInt::from(r), &BigInt::from(s), 8));
  }

  #[test]
  fn padic_precision_is_sound(a in -100_000i64..100_000, b in 1i64..1000, c in -1000i64..1000, k in 0u32..12, p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 2u32..12) {
    prop_assume!(b % p as i64 != 0);
    let q = BigRational::new(BigInt::from(a), BigInt::from(b));
    let run = |prec: u32| -> Option<PadicApprox> {
      let x = PadicApprox::from_rational(p, &q, prec).ok()?;
      let y = PadicApprox::from_integer(p, &BigInt::from(c), prec);
      x.mul(&y).ok()?.add(&x).ok()?.binom(k).ok()
    };
    if let Some(lo) = run(n) {
      let hi = run(n + 5).expect("more digits cannot exhaust precision");
      prop_assert!(hi.precision >= lo.precision + 5);
      prop_assert_eq!(PadicApprox::from_integer(p, &hi.residue, lo.precision), lo);
    }
  }

  #[test]
  fn mahler_recovers_binomial_coefficients(f in poly(1)) {
    let k_max = 6;
    let prof = mahler_profile(|x: &BigInt| f.evaluate(std::slice::from_ref(x)), 3, k_max).unwrap();
    let got: Vec<BigInt> = prof.entries.iter().map(|e| e.coefficient.clone()).collect();
    let expect: Vec<BigInt> = (0..=k_max).map(|k| f.coeff(&[k])).collect();
    prop_assert_eq!(&got, &expect);
    let newton = newton_coefficients_1d(|x| f.evaluate(std::slice::from_ref(x)).unwrap(), k_max);
    prop_assert_eq!(&got, &newton);
  }
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(500))]
  #[test]
  fn snf_is_a_certified_diagonalisation(a in matrix(8)) {
    let s = smith_normal_form(&a);
    prop_assert_eq!(&s.u.mul(&a).unwrap().mul(&s.v).unwrap(), &s.d);
    prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
    prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
    prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
    let f = s.invariant_factors();
    prop_assert!(f.iter().all(|x| *x > BigInt::zero()));
    prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    for i in 0..a.rows() {
      for j in 0..a.cols() {
        prop_assert!(i == j && i < s.rank() || s.d[(i, j)].is_zero());
      }
    }
  }
}

#[test]
fn binomial_basis_is_unit_on_diagonal() {
  let f = BinomialPoly::basis(MultiIndex(vec![3]));
  assert_eq!(f.evaluate(&[BigInt::from(3)]).unwrap(), BigInt::one());
}
