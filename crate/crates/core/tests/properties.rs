//! Properties over random complete intersections
//! `x_t^{d_t} + λ_t x_n^{d_t}` (t < c) in `n ≤ 3` variables.

use std::sync::Arc;

use koszulator::complex::StrandBasis;
use koszulator::export::{from_json, to_json};
use koszulator::koszul::{CompleteIntersection, CycleStrategy};
use koszulator::report::all_passed;
use koszulator::resolution::{compare_with_tower, poincare_coefficients, verify_minimal_and_exact, ResolutionF};
use koszulator::tower::{default_height, ConeTower};
use koszulator::zeta::{zeta_block, HomologyZeta};
use koszulator::{Config, Field, GradedRing};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug)]
struct Input {
    n: usize,
    degrees: Vec<usize>,
    lambdas: Vec<i64>,
}

impl Input {
    fn text(&self) -> String {
        let mut s = format!("field prime 32003\nvars {}\n", VARS[..self.n].join(","));
        let last = VARS[self.n - 1];
        for (t, (&d, &l)) in self.degrees.iter().zip(&self.lambdas).enumerate() {
            if l == 0 || t == self.n - 1 {
                s += &format!("gen {}^{d}\n", VARS[t]);
            } else {
                let sign = if l < 0 { '-' } else { '+' };
                s += &format!("gen {}^{d} {sign} {}*{last}^{d}\n", VARS[t], l.abs());
            }
        }
        s
    }

    fn ci(&self) -> CompleteIntersection {
        let ring = GradedRing::parse(&self.text(), Config { max_degree: 12 }).unwrap();
        CompleteIntersection::new(Arc::new(ring), CycleStrategy::default()).unwrap()
    }
}

fn input() -> impl Strategy<Value = Input> {
    (2usize..=3).prop_flat_map(|n| {
        (1usize..=n).prop_flat_map(move |c| {
            (proptest::collection::vec(2usize..=3, c), proptest::collection::vec(-3i64..=3, c))
                .prop_map(move |(degrees, lambdas)| Input { n, degrees, lambdas })
        })
    })
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (0..k).fold(1, |a, i| a * (n - i) / (i + 1))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hilbert_function_matches_the_complete_intersection_series(inp in input()) {
        let ci = inp.ci();
        let ring = ci.ring();
        // Π (1 - t^d) / (1 - t)^n
        let top = 12;
        let mut s = vec![0i64; top + 1];
        s[0] = 1;
        for &d in &inp.degrees {
            for i in (d..=top).rev() {
                s[i] -= s[i - d];
            }
        }
        for _ in 0..inp.n {
            for i in 1..=top {
                s[i] += s[i - 1];
            }
        }
        for d in 0..=top {
            prop_assert_eq!(ring.hilbert(d).unwrap() as i64, s[d], "degree {}", d);
            prop_assert!(ring.hilbert(d).unwrap() <= binom(inp.n - 1 + d, d));
        }
    }

    #[test]
    fn koszul_homology_is_an_exterior_algebra(inp in input()) {
        let ci = inp.ci();
        let c = inp.degrees.len();
        let want: Vec<usize> = (0..=inp.n).map(|i| binom(c, i)).collect();
        prop_assert_eq!(&ci.report.dims, &want);
        for i in 0..=inp.n {
            prop_assert_eq!(ci.koszul.complex().rank(i as i64), binom(inp.n, i));
            prop_assert!(ci.koszul.complex().module(i as i64).gens().iter().all(|g| g.twist == i as i64));
        }
    }

    #[test]
    fn euler_characteristic_per_degree(inp in input()) {
        let ci = inp.ci();
        let ring = ci.ring();
        let k = ci.koszul.complex();
        let h = k.homology(ring, 0, inp.n as i64, 10);
        for d in 0..=10usize {
            let (mut chi_m, mut chi_h) = (0i64, 0i64);
            for i in 0..=inp.n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                chi_m += sign * StrandBasis::new(&k.module(i as i64), d as i64, ring).dim as i64;
                chi_h += sign * h.get(i as i64, d) as i64;
            }
            prop_assert_eq!(chi_m, chi_h, "degree {}", d);
        }
        let shifted = k.shift(1).homology(ring, 1, inp.n as i64 + 1, 10);
        for i in 0..=inp.n as i64 {
            for d in 0..=10 {
                prop_assert_eq!(shifted.get(i + 1, d), h.get(i, d));
            }
        }
    }

    #[test]
    fn resolution_is_minimal_exact_and_matches_the_tower(inp in input()) {
        let ci = inp.ci();
        let i_max = 5;
        let f = ResolutionF::assemble(&ci, i_max).unwrap();
        let checks = verify_minimal_and_exact(&ci, &f, 9);
        prop_assert!(all_passed(&checks), "{:?}", checks);
        let series: Vec<usize> = poincare_coefficients(inp.n, inp.degrees.len(), i_max)
            .unwrap()
            .into_iter()
            .map(|x| x as usize)
            .collect();
        prop_assert_eq!(f.betti(), series);
        let tower = ConeTower::build(&ci, default_height(i_max)).unwrap();
        prop_assert!(compare_with_tower(&ci, &f, &tower).is_ok());
        for i in 1..=i_max {
            let d = f.diff(i);
            prop_assert_eq!(from_json(&to_json(&d, ci.ring()), ci.ring()).unwrap(), d);
        }
    }

    #[test]
    fn zeta_shapes(inp in input(), k in 0usize..4) {
        let ci = inp.ci();
        let (n, c) = (inp.n, inp.degrees.len());
        for u in 1..=n {
            let m = zeta_block(&ci, k, u, &[k + 1], &[k]);
            prop_assert_eq!(m.shape(), (binom(n, u) * binom(k + c - 1, c - 1), binom(n, u - 1) * binom(k + c, c - 1)));
        }
    }

    #[test]
    fn homology_zeta_squares_to_zero(c in 1usize..=4, k in 1i64..5, u in 1usize..4) {
        let a = HomologyZeta::new(Field::default(), c, k, u);
        let b = HomologyZeta::new(Field::default(), c, k - 1, u + 1);
        prop_assert!(b.matrix.mul(&a.matrix).is_zero());
    }
}
