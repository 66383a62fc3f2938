//! The full verification run for one ring, grouped into sections, plus the
//! negative controls that perturb a cycle or a ζ block and expect a
//! localized failure.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::MultiIndex;
use crate::dg::{DgAlgebra, ProductRule};
use crate::divided::{
    acyclic_closure, divided_to_tuple, reversed_bijection, tuple_to_divided, verify_mu_chain, verify_mu_equals_zeta,
    verify_mu_square_zero, compare_mu_zeta,
};
use crate::koszul::{CompleteIntersection, CycleBasis};
use crate::poly::{Monomial, Polynomial};
use crate::render::BlockLayout;
use crate::report::{all_passed, Check};
use crate::resolution::{
    compare_with_tower, spread_zeta, verify_betti, verify_minimal_and_exact, PolyGrid, ResolutionF,
};
use crate::tower::{default_height, verify_homology_theorem, verify_splitting, ConeTower};
use crate::zeta::{
    cross_check_homology, verify_chain, verify_exact_sequence, verify_kernel_preimage, verify_square_zero,
    zeta_block, ZetaMap,
};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub i_max: usize,
    pub max_degree: usize,
    /// ζ^k checked for `k ≤ zeta_k`.
    pub zeta_k: usize,
    /// Tower levels checked against the homology theorem.
    pub tower_k: usize,
    pub leibniz_exhaustive: usize,
    pub leibniz_random: usize,
    pub triples: usize,
    pub divided_k: usize,
    pub seed: u64,
}

impl SuiteOptions {
    pub fn new(i_max: usize) -> Self {
        SuiteOptions {
            i_max,
            max_degree: 16,
            zeta_k: 4,
            tower_k: 2,
            leibniz_exhaustive: 6,
            leibniz_random: 200,
            triples: 100,
            divided_k: 3,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub sections: Vec<Section>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(Section::passed)
    }
}

fn section(name: &str, checks: Vec<Check>) -> Section {
    Section { name: name.to_string(), checks }
}

/// ζ^k is a chain map and `ζ^k ∘ Σζ^{k+1} = 0`, `k ≤ k_max`.
pub fn check_zeta_maps(ci: &CompleteIntersection, k_max: usize) -> Vec<Check> {
    let maps: Vec<ZetaMap> = (0..=k_max + 1).into_par_iter().map(|k| ZetaMap::new(ci, k)).collect();
    let mut checks: Vec<Check> = (0..=k_max)
        .into_par_iter()
        .map(|k| Check::from_result(format!("ζ^{k} is a chain map"), verify_chain(ci, &maps[k]), "∂ζ = -ζ∂"))
        .collect();
    checks.extend((0..=k_max).into_par_iter().map(|k| {
        Check::from_result(
            format!("ζ^{k} ∘ Σζ^{} = 0", k + 1),
            verify_square_zero(ci, &maps[k], &maps[k + 1]),
            "composite vanishes",
        )
    }).collect::<Vec<_>>());
    checks
}

/// Ring-free exactness for `c ≤ c_max`, `k ≤ k_max`, and the preimage rule
/// on full kernel bases.
pub fn check_exact_sequences(field: crate::field::Field, c_max: usize, k_max: usize) -> Vec<Check> {
    let grid: Vec<(usize, usize)> = (1..=c_max).flat_map(|c| (0..=k_max).map(move |k| (c, k))).collect();
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|&(c, k)| {
            let r = verify_exact_sequence(field, c, k);
            (!r.exact()).then(|| format!("c={c} k={k} fails at u in {:?}", r.failures))
        })
        .collect();
    let mut checks = vec![Check::new(
        format!("homology sequences exact for c ≤ {c_max}, k ≤ {k_max}"),
        bad.is_empty(),
        if bad.is_empty() { format!("{} sequences checked by rank", grid.len()) } else { bad.join("; ") },
    )];
    for (c, k, u) in [(2, 2, 1), (3, 3, 2), (4, 2, 2)] {
        checks.push(match verify_kernel_preimage(field, c, k, u) {
            Ok(n) => Check::pass(format!("preimage rule (c,k,u)=({c},{k},{u})"), format!("right inverse on {n} kernel vectors")),
            Err(e) => Check::fail(format!("preimage rule (c,k,u)=({c},{k},{u})"), e.to_string()),
        });
    }
    checks
}

/// Ring-level against homology-level ζ.
pub fn check_zeta_levels(ci: &CompleteIntersection, k_max: usize) -> Vec<Check> {
    let cells: Vec<(usize, usize)> =
        (0..=k_max).flat_map(|k| (1..=ci.n().min(ci.c())).map(move |u| (k, u))).collect();
    let bad: Vec<String> = cells
        .par_iter()
        .filter_map(|&(k, u)| cross_check_homology(ci, k, u).err().map(|e| format!("k={k} u={u}: {e}")))
        .collect();
    vec![Check::new(
        "[ζ] is the class of ζ on wedge products of cycles",
        bad.is_empty(),
        if bad.is_empty() { format!("{} (k, u) pairs", cells.len()) } else { bad.join("; ") },
    )]
}

pub fn check_spreading(ci: &CompleteIntersection, k_max: usize) -> Vec<Check> {
    let (n, c) = (ci.n(), ci.c());
    let cells: Vec<(usize, usize)> = (1..=n).flat_map(|u| (0..=k_max).map(move |k| (u, k))).collect();
    let bad: Vec<String> = cells
        .par_iter()
        .filter_map(|&(u, k)| {
            let z0 = PolyGrid::from_map(&zeta_block(ci, 0, u, &[], &[]));
            let direct = PolyGrid::from_map(&zeta_block(ci, k, u, &[], &[]));
            match spread_zeta(&z0, n, c, u, k) {
                Ok(s) if s == direct => None,
                Ok(s) => {
                    let at = direct.entries.keys().chain(s.entries.keys()).find(|key| direct.entries.get(key) != s.entries.get(key));
                    Some(format!("u={u} k={k} differs at {at:?}"))
                }
                Err(e) => Some(format!("u={u} k={k}: {e}")),
            }
        })
        .collect();
    vec![Check::new(
        format!("spread ζ_u^0 = ζ_u^k for u ≤ {n}, k ≤ {k_max}"),
        bad.is_empty(),
        if bad.is_empty() { format!("{} matrices equal entrywise", cells.len()) } else { bad.join("; ") },
    )]
}

pub fn check_divided(ci: &CompleteIntersection, k_max: usize) -> Vec<Check> {
    let mut round_trip = true;
    for c in 1..=4 {
        for k in 0..=6 {
            round_trip &= MultiIndex::all(c, k).iter().all(|t| divided_to_tuple(&tuple_to_divided(t)) == *t);
        }
    }
    let mut checks = vec![Check::new("tuple ↔ divided monomial round trip", round_trip, "c ≤ 4, k ≤ 6")];
    checks.extend(verify_mu_equals_zeta(ci, k_max));
    for k in 0..k_max {
        checks.push(Check::from_result(format!("μ^{k} is a chain map"), verify_mu_chain(ci, k), "commutes with ∂"));
        checks.push(Check::from_result(format!("μ^{k} ∘ μ^{} = 0", k + 1), verify_mu_square_zero(ci, k), "vanishes"));
    }
    checks.push(match acyclic_closure(ci, k_max) {
        Ok(ac) => Check::from_result(
            format!("acyclic closure on K ⊗ D^≤{k_max} squares to zero"),
            ac.compose_check(ci.ring()),
            "d ∘ d = 0",
        ),
        Err(e) => Check::fail("acyclic closure", e.to_string()),
    });
    let wrong = compare_mu_zeta(ci, 1, 1, &reversed_bijection);
    checks.push(Check::new(
        "a wrong bijection is rejected",
        wrong.is_err() || ci.c() == 1,
        match wrong {
            Err(e) => format!("mismatch: {e}"),
            Ok(_) => "reversed bijection accepted".into(),
        },
    ));
    checks
}

pub fn check_dg(ci: &CompleteIntersection, f: &ResolutionF, opts: &SuiteOptions) -> Vec<Check> {
    let dg = DgAlgebra::new(f, ci.ring(), ProductRule::DividedPowers);
    let small = dg.pairs_up_to(opts.leibniz_exhaustive);
    let random = dg.random_pairs(opts.leibniz_random, opts.leibniz_exhaustive + 1, opts.seed);
    let triples = dg.random_triples(opts.triples, opts.seed + 1);
    let comm_pairs: Vec<_> = triples.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    let mut checks = vec![
        Check::from_result(
            format!("Leibniz on all {} pairs with i + i' ≤ {}", small.len(), opts.leibniz_exhaustive),
            dg.verify_leibniz(&small),
            "exact",
        ),
        Check::from_result(
            format!("Leibniz on {} random pairs with i + i' > {}", random.len(), opts.leibniz_exhaustive),
            dg.verify_leibniz(&random),
            "exact",
        ),
        Check::from_result(format!("graded commutativity on {} pairs", comm_pairs.len()), dg.verify_commutative(&comm_pairs), "exact"),
        Check::from_result(format!("associativity on {} triples", triples.len()), dg.verify_associative(&triples), "exact"),
    ];
    if random.len() < opts.leibniz_random {
        checks.push(Check::fail("random Leibniz sample", format!("i_max too small for pairs above {}", opts.leibniz_exhaustive)));
    }
    checks
}

pub fn check_layouts(f: &ResolutionF) -> Vec<Check> {
    (1..=f.max_index)
        .map(|i| {
            let l = BlockLayout::from_map(i as i64, &f.diff(i));
            let cl = l.classification();
            Check::new(
                format!("∂^F_{i} block layout"),
                l.is_tiling() && cl.consistent,
                format!("{} blocks {:?} ({})", cl.parity, cl.tags, if l.is_tiling() { "tiles" } else { "does not tile" }),
            )
        })
        .collect()
}

/// `z_j` with a monomial `m` of degree `d_j - 1` added to its `e_s`
/// coefficient, for the first `(s, m)` that makes it fail to be a cycle.
/// The pure powers `m = x_s^{d_j - 1}` are tried first.
pub fn perturb_cycle(ci: &CompleteIntersection, j: usize) -> Option<(usize, Monomial, CompleteIntersection)> {
    let ring = ci.ring();
    let n = ci.n();
    let d = ci.cycles.degrees[j];
    let pure = |s: usize| {
        let mut e = vec![0u32; n];
        e[s] = (d - 1) as u32;
        Monomial::new(e)
    };
    let mixed = (0..n).flat_map(|s| {
        Monomial::all_of_degree(n, d - 1).into_iter().filter(move |m| *m != pure(s)).map(move |m| (s, m))
    });
    (0..n).map(|s| (s, pure(s))).chain(mixed).find_map(|(s, m)| {
        let mut cycles = ci.cycles.cycles.clone();
        cycles[j][s] = cycles[j][s].add(&Polynomial::term(m.clone(), ring.field().one()));
        let z = CycleBasis { cycles, degrees: ci.cycles.degrees.clone() };
        let broken = !ci.koszul.boundary(&z.as_elem(j)).is_empty();
        broken.then(|| (s, m, CompleteIntersection::unchecked(ci.koszul.clone(), z)))
    })
}

/// Each perturbed cycle breaks the chain-map identity; each zeroed ζ block
/// of `F` breaks `∂² = 0` or exactness. Passing means the failure was seen.
pub fn negative_controls(ci: &CompleteIntersection, i_max: usize, max_degree: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    for j in 0..ci.c() {
        let name = format!("perturbed z_{} is caught", j + 1);
        let Some((s, m, bad)) = perturb_cycle(ci, j) else {
            checks.push(Check::fail(name, "no perturbation breaks the cycle condition"));
            continue;
        };
        let chain = verify_chain(&bad, &ZetaMap::new(&bad, 0));
        let f = ResolutionF::assemble(&bad, i_max.min(4)).expect("assembles");
        let sq = f.complex.compose_check(bad.ring());
        checks.push(Check::new(
            name,
            chain.is_err() && sq.is_err(),
            match (chain, sq) {
                (Err(w), Err(v)) => format!(
                    "+{} at e_{}: ζ^0 chain identity fails {w}; ∂^F∘∂^F fails {v}",
                    m.fmt_with(ci.ring().vars()),
                    s + 1
                ),
                _ => "perturbation went unnoticed".into(),
            },
        ));
    }
    let f = ResolutionF::assemble(ci, i_max).expect("assembles");
    let blocks: Vec<(usize, usize)> =
        (2..=i_max).flat_map(|i| (0..=(i - 2) / 2).map(move |j| (i, j))).filter(|&(i, j)| i - 1 - 2 * j <= ci.n()).collect();
    let results: Vec<Check> = blocks
        .par_iter()
        .map(|&(i, j)| {
            let g = f.with_zeta_block_zeroed(i, j);
            let name = format!("zeroed ζ^{j} block in ∂^F_{i} is caught");
            if let Err(w) = g.complex.compose_check(ci.ring()) {
                return Check::pass(name, format!("∂^F∘∂^F fails {w}"));
            }
            let failed: Vec<Check> =
                verify_minimal_and_exact(ci, &g, max_degree).into_iter().filter(|c| !c.passed).collect();
            match failed.first() {
                Some(c) => Check::pass(name, format!("{}: {}", c.name, c.detail)),
                None => Check::fail(name, "resolution checks still pass"),
            }
        })
        .collect();
    checks.extend(results);
    checks
}

/// Every check except the golden matrix and layout comparisons.
pub fn verify_all(ci: &CompleteIntersection, opts: &SuiteOptions) -> SuiteReport {
    let ring = ci.ring();
    let mut sections = vec![section("certification", ci.report.checks.clone())];
    if !ci.report.certified() {
        return SuiteReport { sections };
    }
    sections.push(section("ζ chain maps", check_zeta_maps(ci, opts.zeta_k)));
    let mut exact = check_exact_sequences(ring.field(), 4, 5);
    exact.extend(check_zeta_levels(ci, 2));
    sections.push(section("homology exact sequences", exact));

    let height = default_height(opts.i_max).max(opts.tower_k);
    match ConeTower::build(ci, height) {
        Ok(tower) => {
            let theorem: Vec<Check> = (0..=opts.tower_k)
                .into_par_iter()
                .flat_map_iter(|k| verify_homology_theorem(ci, &tower, k, opts.max_degree))
                .collect();
            sections.push(section("tower homology", theorem));
            let split: Vec<Check> = (0..opts.tower_k)
                .into_par_iter()
                .flat_map_iter(|k| verify_splitting(ci, &tower, k, opts.max_degree))
                .collect();
            sections.push(section("tower splitting", split));
            match ResolutionF::assemble(ci, opts.i_max) {
                Ok(f) => {
                    let mut res = verify_minimal_and_exact(ci, &f, opts.max_degree);
                    res.extend(verify_betti(&f));
                    sections.push(section("resolution", res));
                    sections.push(section(
                        "resolution vs tower",
                        vec![Check::from_result(
                            format!("F = M^{height} for i ≤ {}", opts.i_max.min(2 * height + 1)),
                            compare_with_tower(ci, &f, &tower),
                            "label for label, after the level signs",
                        )],
                    ));
                    sections.push(section("DG structure", check_dg(ci, &f, opts)));
                    sections.push(section("block layouts", check_layouts(&f)));
                }
                Err(e) => sections.push(section("resolution", vec![Check::fail("assemble F", e.to_string())])),
            }
        }
        Err(e) => sections.push(section("tower", vec![Check::fail("build tower", e.to_string())])),
    }
    sections.push(section("spreading", check_spreading(ci, 4)));
    sections.push(section("divided powers", check_divided(ci, opts.divided_k)));
    sections.push(section("negative controls", negative_controls(ci, opts.i_max.min(7), opts.max_degree.min(10))));
    SuiteReport { sections }
}
