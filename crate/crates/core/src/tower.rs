//! The iterated mapping-cone tower `M^0 = K`, `M^{j+1} = Cone(ψ^{j+1})`,
//! where `ψ^{j+1} = (-1)^j ι ∘ ζ^j` maps `Σ^{2j+1} K^{N_{j+1}}` into the
//! `K^{N_j}` summand of `M^j`. Generators of the summand added at level `j`
//! carry label path `[j]`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::combinat::{binomial, num_tuples};
use crate::complex::{induced_map_is_zero, mapping_cone, ChainComplex, ChainMap, GradedMap, HomologyTable};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::koszul::CompleteIntersection;
use crate::poly::Polynomial;
use crate::report::Check;
use crate::zeta::{tuple_complex, zeta_block, HomologyZeta};

#[derive(Clone, Debug)]
pub struct ConeTower {
    /// `M^0 ..= M^J`.
    pub levels: Vec<ChainComplex>,
    /// `ψ^{j+1}` for `j < J`, as maps out of `sources[j]`.
    pub psis: Vec<ChainMap>,
    /// `Σ^{2j+1} K^{N_{j+1}}`, the domain of `ψ^{j+1}`.
    pub sources: Vec<ChainComplex>,
    field: Field,
}

/// Height needed for the tower to agree with the resolution up to `i_max`.
pub fn default_height(i_max: usize) -> usize {
    (i_max + 2) / 2
}

impl ConeTower {
    pub fn build(ci: &CompleteIntersection, height: usize) -> Result<Self> {
        let ring = ci.ring();
        let mut levels = vec![tuple_complex(ci, &[0], 0)];
        let mut psis = Vec::new();
        let mut sources = Vec::new();
        for j in 0..height {
            let m = levels.last().expect("nonempty");
            let src = tuple_complex(ci, &[j + 1], j + 1).shift(2 * j as i64 + 1);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let mut components = BTreeMap::new();
            for u in 1..=ci.n() {
                let i = (2 * j + u) as i64;
                let block = zeta_block(ci, j, u, &[j + 1], &[j]);
                let tgt = m.module(i);
                let mut f = GradedMap::zero(src.module(i), tgt.clone(), ci.n());
                for (r, c, p) in block.entries() {
                    let label = &block.target().gen(r).label;
                    let row = tgt
                        .position(label)
                        .ok_or_else(|| Error::LabelClash(format!("{label} missing from level {j}")))?;
                    f.set(row, c, p.scale(&ring.field().from_i64(sign)));
                }
                components.insert(i, f);
            }
            let psi = ChainMap { components };
            let next = mapping_cone(&src, m, &psi, ring).map_err(|e| match e {
                Error::NotChainMap(w) => Error::NotChainMap(format!("ψ^{} at {w}", j + 1)),
                other => other,
            })?;
            psis.push(psi);
            sources.push(src);
            levels.push(next);
        }
        Ok(ConeTower { levels, psis, sources, field: ring.field() })
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// The inclusion `f^k: M^k → M^{k+1}` onto the second cone summand.
    pub fn inclusion(&self, k: usize) -> ChainMap {
        let (a, b) = (&self.levels[k], &self.levels[k + 1]);
        let mut components = BTreeMap::new();
        if let Some((lo, hi)) = a.range() {
            for i in lo..=hi {
                let src = a.module(i);
                let tgt = b.module(i);
                let mut f = GradedMap::zero(src.clone(), tgt.clone(), a.nvars());
                for (c, g) in src.gens().iter().enumerate() {
                    let r = tgt.position(&g.label).expect("cone contains its target");
                    f.set(r, c, Polynomial::constant(a.nvars(), self.field.one()));
                }
                components.insert(i, f);
            }
        }
        ChainMap { components }
    }
}

/// `Σ_j C(n, i-2j) N_j` for `j ≤ height`.
pub fn expected_rank(n: usize, c: usize, height: usize, i: i64) -> usize {
    (0..=height as i64)
        .map(|j| binomial(n as i64, i - 2 * j) * num_tuples(c, j))
        .sum()
}

fn table_range(m: &ChainComplex) -> (i64, i64) {
    m.range().unwrap_or((0, 0))
}

fn homology(ci: &CompleteIntersection, m: &ChainComplex, max_degree: usize) -> HomologyTable {
    let (lo, hi) = table_range(m);
    m.homology(ci.ring(), lo, hi + 1, max_degree)
}

/// The three clauses comparing `H(M^k)` with `H(M^{k-1})` and `Im [ζ_u^k]`;
/// for `k = 0`, the exterior-algebra dimensions of `H(M^0)`.
pub fn verify_homology_theorem(ci: &CompleteIntersection, tower: &ConeTower, k: usize, max_degree: usize) -> Vec<Check> {
    let c = ci.c() as i64;
    let n = ci.n() as i64;
    let hk = homology(ci, &tower.levels[k], max_degree);
    if k == 0 {
        let dims: Vec<usize> = (0..=n).map(|i| hk.total(i)).collect();
        let want: Vec<usize> = (0..=n).map(|i| binomial(c, i)).collect();
        return vec![Check::new(
            "H(M^0) is the exterior algebra",
            dims == want,
            format!("dims {dims:?}, expected {want:?}"),
        )];
    }
    let hprev = homology(ci, &tower.levels[k - 1], max_degree);
    let k64 = k as i64;
    let top = 2 * k64 + n + 1;
    let mut checks = Vec::new();

    let stable: Vec<i64> = (0..=top).filter(|&i| i <= 2 * k64 - 2 || i > 2 * k64 + c).collect();
    let mismatch = stable
        .iter()
        .flat_map(|&i| (0..=max_degree).map(move |d| (i, d)))
        .find(|&(i, d)| hk.get(i, d) != hprev.get(i, d));
    checks.push(Check::new(
        format!("k={k}: H_i(M^k) = H_i(M^(k-1)) off the window"),
        mismatch.is_none(),
        match mismatch {
            None => format!("agree for i in {stable:?}"),
            Some((i, d)) => format!("differ at i={i}, internal degree {d}: {} vs {}", hk.get(i, d), hprev.get(i, d)),
        },
    ));

    for i in [2 * k64 - 1, 2 * k64] {
        let total = hk.total(i);
        checks.push(Check::new(format!("k={k}: H_{i}(M^k) = 0"), total == 0, format!("dim {total}")));
    }

    let ranks: Vec<(usize, BTreeMap<usize, usize>, usize)> = (1..=ci.c())
        .into_par_iter()
        .map(|u| {
            let hz = HomologyZeta::new(ci.ring().field(), ci.c(), k64, u);
            (u, hz.rank_by_degree(&ci.cycles.degrees), hz.rank())
        })
        .collect();
    for (u, by_degree, total) in ranks {
        let i = 2 * k64 + u as i64;
        let bad = (0..=max_degree).find(|d| hk.get(i, *d) != by_degree.get(d).copied().unwrap_or(0));
        let within: usize = by_degree.range(..=max_degree).map(|(_, r)| r).sum();
        let ok = bad.is_none() && hk.total(i) == within;
        checks.push(Check::new(
            format!("k={k}: dim H_{i}(M^k) = rank [ζ_{u}^{k}]"),
            ok,
            match bad {
                None if within == total => format!("{} = {total}", hk.total(i)),
                None => format!("{} = {within} up to internal degree {max_degree} (rank {total} overall)", hk.total(i)),
                Some(d) => format!(
                    "internal degree {d}: {} vs {}",
                    hk.get(i, d),
                    by_degree.get(&d).copied().unwrap_or(0)
                ),
            },
        ));
    }
    checks
}

/// `H(f^k) = 0` on every strand, and the resulting split identity
/// `h_i(M^{k+1}) + h_{i-1}(M^k) = h_i(M^{k+1}/M^k)` per internal degree.
pub fn verify_splitting(ci: &CompleteIntersection, tower: &ConeTower, k: usize, max_degree: usize) -> Vec<Check> {
    let ring = ci.ring();
    let (a, b) = (&tower.levels[k], &tower.levels[k + 1]);
    let f = tower.inclusion(k);
    let mut checks = vec![Check::from_result(
        format!("k={k}: f^k is a chain map"),
        f.verify(a, b, ring),
        "commutes with the differentials",
    )];
    let zero = induced_map_is_zero(a, b, &f, ring, 1, max_degree);
    checks.push(Check::new(
        format!("k={k}: H_i(f^k) = 0 for i >= 1"),
        zero.is_ok(),
        match zero {
            Ok(()) => format!("every cycle of M^{k} bounds in M^{} (internal degree ≤ {max_degree})", k + 1),
            Err((i, d)) => format!("nonzero induced map at i={i}, internal degree {d}"),
        },
    ));
    let quotient = tower.sources[k].shift(1);
    let hq = homology(ci, &quotient, max_degree);
    let ha = homology(ci, a, max_degree);
    let hb = homology(ci, b, max_degree);
    let (_, hi) = table_range(b);
    // H_0 = k survives every cone, so the sequence only splits from i = 2 on;
    // below that, H_0(f^k) is an isomorphism and H_1(M^(k+1)) = H_1(quotient).
    let expected = |i: i64, d: usize| if i >= 2 { hb.get(i, d) + ha.get(i - 1, d) } else { hb.get(i, d) };
    let h0_ok = (0..=max_degree).all(|d| hb.get(0, d) == ha.get(0, d));
    let bad = (1..=hi + 1)
        .flat_map(|i| (0..=max_degree).map(move |d| (i, d)))
        .find(|&(i, d)| expected(i, d) != hq.get(i, d));
    checks.push(Check::new(
        format!("k={k}: long exact sequence splits"),
        bad.is_none() && h0_ok,
        match bad {
            None if !h0_ok => "H_0 changed across the cone".to_string(),
            None => "h_i(M^(k+1)) + h_(i-1)(M^k) = h_i(quotient) for i >= 2".to_string(),
            Some((i, d)) => format!(
                "i={i}, internal degree {d}: {} + {} != {}",
                hb.get(i, d),
                ha.get(i - 1, d),
                hq.get(i, d)
            ),
        },
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::CycleStrategy;
    use crate::report::all_passed;
    use crate::ring::{Config, GradedRing};
    use std::sync::Arc;

    fn ci(text: &str) -> CompleteIntersection {
        let r = Arc::new(GradedRing::parse(text, Config::default()).unwrap());
        CompleteIntersection::new(r, CycleStrategy::default()).unwrap()
    }

    #[test]
    fn rank_bookkeeping() {
        let ci = ci("vars x,y,z\ngen x^2\ngen y^2+z^2\n");
        let t0 = ConeTower::build(&ci, 0).unwrap();
        assert_eq!(t0.levels.len(), 1);
        assert_eq!(t0.levels[0].rank(1), 3);
        let t = ConeTower::build(&ci, 2).unwrap();
        assert_eq!(t.levels[2].rank(4), 9);
        for (j, m) in t.levels.iter().enumerate() {
            assert!(m.compose_check(ci.ring()).is_ok());
            for i in 0..=(2 * j as i64 + 3) {
                assert_eq!(m.rank(i), expected_rank(3, 2, j, i), "level {j}, degree {i}");
            }
        }
    }

    #[test]
    fn first_cone_kills_low_homology() {
        let ci = ci("vars x,y,z\ngen x^2\ngen y^2+z^2\n");
        let t = ConeTower::build(&ci, 1).unwrap();
        let h = t.levels[1].homology(ci.ring(), 0, 5, 16);
        assert_eq!(h.total(0), 1);
        assert_eq!(h.get(0, 0), 1);
        assert_eq!(h.total(1), 0);
        assert_eq!(h.total(2), 0);
    }

    #[test]
    fn theorem_and_splitting_small() {
        let ci = ci("vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n");
        let t = ConeTower::build(&ci, 2).unwrap();
        for k in 0..=2 {
            let checks = verify_homology_theorem(&ci, &t, k, 12);
            assert!(all_passed(&checks), "{checks:#?}");
        }
        for k in 0..=1 {
            let checks = verify_splitting(&ci, &t, k, 12);
            assert!(all_passed(&checks), "{checks:#?}");
        }
    }
}
