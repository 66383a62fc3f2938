//! Divided powers `D(V)`, `V = span(v_1 .. v_c)`, and the maps
//! `μ^k: K ⊗ D^{k+1}(V) → K ⊗ D^k(V)`, left multiplication by
//! `Σ_i z_i ⊗ v_i*`. Under the bijection sending a tuple to the monomial
//! whose exponents are its multiplicities, `μ^k` is `ζ^k`.

use std::fmt;

use rayon::prelude::*;

use crate::combinat::{binomial, subsets, MultiIndex};
use crate::complex::{ChainComplex, ChainMap, FreeModule, Generator, GradedMap, Label, Witness};
use crate::error::Result;
use crate::koszul::{wedge_basis, CompleteIntersection};
use crate::report::Check;
use crate::zeta::zeta_block;

/// `v_1^{(j_1)} ⋯ v_c^{(j_c)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DividedMonomial {
    exps: Vec<usize>,
}

impl DividedMonomial {
    pub fn new(exps: Vec<usize>) -> Self {
        DividedMonomial { exps }
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exps
    }

    pub fn c(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().sum()
    }

    /// All monomials of degree `k`, ascending in exponent-lex order.
    pub fn all(c: usize, k: usize) -> Vec<DividedMonomial> {
        fn go(c: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<DividedMonomial>) {
            if cur.len() + 1 == c {
                cur.push(left);
                out.push(DividedMonomial { exps: cur.clone() });
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                go(c, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if c == 0 {
            if k == 0 {
                out.push(DividedMonomial { exps: Vec::new() });
            }
            return out;
        }
        go(c, k, &mut Vec::with_capacity(c), &mut out);
        out
    }

    /// `v_i* · v^{(e)} = v^{(e - e_i)}`, coefficient 1.
    pub fn contract(&self, i: usize) -> Option<DividedMonomial> {
        let mut exps = self.exps.clone();
        exps[i] = exps[i].checked_sub(1)?;
        Some(DividedMonomial { exps })
    }

    /// `v^{(a)} v^{(b)} = Π_t C(a_t + b_t, a_t) v^{(a+b)}`.
    pub fn mul(&self, other: &DividedMonomial) -> (usize, DividedMonomial) {
        let coeff = self.exps.iter().zip(&other.exps).map(|(&a, &b)| binomial((a + b) as i64, a as i64)).product();
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        (coeff, DividedMonomial { exps })
    }
}

impl fmt::Display for DividedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("v{}", i + 1) } else { format!("v{}^({e})", i + 1) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

/// Exponent `j_t` = multiplicity of `t` in the tuple.
pub fn tuple_to_divided(t: &MultiIndex) -> DividedMonomial {
    DividedMonomial { exps: t.multiplicities() }
}

pub fn divided_to_tuple(m: &DividedMonomial) -> MultiIndex {
    MultiIndex::from_multiplicities(&m.exps)
}

/// A valid bijection that relabels `v_t` as `v_{c+1-t}`; not the one that
/// identifies `μ` with `ζ`.
pub fn reversed_bijection(m: &DividedMonomial) -> MultiIndex {
    let mut e = m.exps.clone();
    e.reverse();
    MultiIndex::from_multiplicities(&e)
}

/// `K_u ⊗ D^k(V)`, basis `(monomial, S)` in that order, labeled through
/// `bijection` with path `[k]`.
pub fn divided_module(
    ci: &CompleteIntersection,
    k: usize,
    u: usize,
    bijection: &dyn Fn(&DividedMonomial) -> MultiIndex,
) -> FreeModule {
    let mut gens = Vec::new();
    for m in DividedMonomial::all(ci.c(), k) {
        let t = bijection(&m);
        let tw = ci.tuple_twist(divided_to_tuple(&m).entries());
        for s in subsets(ci.n(), u) {
            gens.push(Generator { label: Label::new(vec![k], t.entries().to_vec(), s), twist: u as i64 + tw });
        }
    }
    FreeModule::new(gens).expect("bijection is injective")
}

/// Matrix of `μ_u^k: K_{u-1} ⊗ D^{k+1} → K_u ⊗ D^k`.
pub fn build_mu_with(
    ci: &CompleteIntersection,
    k: usize,
    u: usize,
    bijection: &dyn Fn(&DividedMonomial) -> MultiIndex,
) -> GradedMap {
    let (n, c) = (ci.n(), ci.c());
    let src = divided_module(ci, k + 1, u - 1, bijection);
    let tgt = divided_module(ci, k, u, bijection);
    let tgt_ms = DividedMonomial::all(c, k);
    let tgt_w = binomial(n as i64, u as i64);
    let mut m = GradedMap::zero(src, tgt, n);
    let mut col = 0;
    for w in DividedMonomial::all(c, k + 1) {
        for s in subsets(n, u - 1) {
            for i in 0..c {
                let Some(v) = w.contract(i) else { continue };
                let rv = tgt_ms.binary_search(&v).expect("degree k");
                for (t, a) in wedge_basis(&ci.cycles.cycles[i], &s) {
                    m.add_entry(rv * tgt_w + crate::combinat::subset_rank(n, &t), col, &a);
                }
            }
            col += 1;
        }
    }
    m
}

pub fn build_mu(ci: &CompleteIntersection, k: usize, u: usize) -> GradedMap {
    build_mu_with(ci, k, u, &divided_to_tuple)
}

/// Compares `μ_u^k` (labeled through `bijection`) with `ζ_u^k` by label.
/// Returns the global sign `s` with `μ = s ζ`.
pub fn compare_mu_zeta(
    ci: &CompleteIntersection,
    k: usize,
    u: usize,
    bijection: &dyn Fn(&DividedMonomial) -> MultiIndex,
) -> std::result::Result<i64, String> {
    let ring = ci.ring();
    let mu = build_mu_with(ci, k, u, bijection);
    let zeta = zeta_block(ci, k, u, &[k + 1], &[k]);
    let locate = |l: &Label, m: &FreeModule| m.position(l).ok_or_else(|| format!("{l} has no counterpart"));
    let mut sign = None;
    for (r, c, p) in mu.entries() {
        let (rl, cl) = (&mu.target().gen(r).label, &mu.source().gen(c).label);
        let q = zeta.entry(locate(rl, zeta.target())?, locate(cl, zeta.source())?);
        let s = if ring.reduce(&p.sub(&q)).is_zero() {
            1
        } else if ring.reduce(&p.add(&q)).is_zero() {
            -1
        } else {
            return Err(format!("entry ({rl}, {cl}): μ gives {}, ζ gives {}", ring.fmt(p), ring.fmt(&q)));
        };
        if *sign.get_or_insert(s) != s {
            return Err(format!("entry ({rl}, {cl}) has the opposite sign"));
        }
    }
    if mu.num_entries() != zeta.num_entries() {
        return Err(format!("{} entries in μ vs {} in ζ", mu.num_entries(), zeta.num_entries()));
    }
    Ok(sign.unwrap_or(1))
}

/// `μ_u^k = ζ_u^k` under the multiplicity bijection, `k ≤ k_max`, `1 ≤ u ≤ n`.
pub fn verify_mu_equals_zeta(ci: &CompleteIntersection, k_max: usize) -> Vec<Check> {
    let cells: Vec<(usize, usize)> = (0..=k_max).flat_map(|k| (1..=ci.n()).map(move |u| (k, u))).collect();
    cells
        .par_iter()
        .map(|&(k, u)| {
            let name = format!("μ_{u}^{k} = ζ_{u}^{k}");
            match compare_mu_zeta(ci, k, u, &divided_to_tuple) {
                Ok(1) => Check::pass(name, "equal entrywise, sign +1"),
                Ok(s) => Check::fail(name, format!("equal up to global sign {s}")),
                Err(e) => Check::fail(name, e),
            }
        })
        .collect()
}

/// `K ⊗ D^k` as a complex with `∂ ⊗ 1`.
fn divided_complex(ci: &CompleteIntersection, k: usize) -> ChainComplex {
    let tuples: Vec<(Vec<usize>, i64)> = DividedMonomial::all(ci.c(), k)
        .iter()
        .map(|m| {
            let t = divided_to_tuple(m);
            (t.entries().to_vec(), ci.tuple_twist(t.entries()))
        })
        .collect();
    ci.koszul.copies(&[k], &tuples)
}

/// `μ^k` as a chain map `Σ(K ⊗ D^{k+1}) → K ⊗ D^k`.
pub fn verify_mu_chain(ci: &CompleteIntersection, k: usize) -> std::result::Result<(), Witness> {
    let src = divided_complex(ci, k + 1).shift(1);
    let tgt = divided_complex(ci, k);
    let components = (1..=ci.n())
        .map(|u| {
            let m = build_mu(ci, k, u);
            let m = m.with_modules(src.module(u as i64), tgt.module(u as i64)).expect("same ranks");
            (u as i64, m)
        })
        .collect();
    ChainMap { components }.verify(&src, &tgt, ci.ring())
}

/// `μ^k ∘ μ^{k+1} = 0`.
pub fn verify_mu_square_zero(ci: &CompleteIntersection, k: usize) -> std::result::Result<(), Witness> {
    let ring = ci.ring();
    for u in 2..=ci.n() {
        let a = build_mu(ci, k, u);
        let b = build_mu(ci, k + 1, u - 1);
        let prod = a.compose(&b, ring).expect("shapes");
        let witness = prod.entries().next().map(|(r, c, p)| Witness {
            degree: u as i64,
            row: prod.target().gen(r).label.clone(),
            col: prod.source().gen(c).label.clone(),
            value: ring.fmt(p),
        });
        if let Some(w) = witness {
            return Err(w);
        }
    }
    Ok(())
}

/// `⊕_{k ≤ k_max} Σ^{2k}(K ⊗ D^k)` with `d(z ⊗ w) = ∂z ⊗ w + Σ_i (z_i ∧ z) ⊗ v_i* w`.
pub fn acyclic_closure(ci: &CompleteIntersection, k_max: usize) -> Result<ChainComplex> {
    let n = ci.n();
    let top = n + 2 * k_max;
    let mut out = ChainComplex::new(n);
    let piece = |i: usize, k: usize| (i >= 2 * k && i - 2 * k <= n).then(|| i - 2 * k);
    for i in 0..=top {
        let mut gens = Vec::new();
        for k in 0..=k_max {
            if let Some(u) = piece(i, k) {
                gens.extend(divided_module(ci, k, u, &divided_to_tuple).gens().iter().cloned());
            }
        }
        out.set_module(i as i64, FreeModule::new(gens)?);
    }
    for i in 1..=top {
        let (src, tgt) = (out.module(i as i64), out.module(i as i64 - 1));
        let mut d = GradedMap::zero(src.clone(), tgt.clone(), n);
        let mut put = |block: &GradedMap| {
            for (r, c, p) in block.entries() {
                let row = tgt.position(&block.target().gen(r).label).expect("target summand");
                let col = src.position(&block.source().gen(c).label).expect("source summand");
                d.set(row, col, p.clone());
            }
        };
        for k in 0..=k_max {
            if let Some(u) = piece(i, k).filter(|&u| u >= 1) {
                let dk = divided_complex(ci, k);
                put(&dk.diff(u as i64));
            }
            if k < k_max {
                if let Some(u) = piece(i, k + 1) {
                    if u < n {
                        put(&build_mu(ci, k, u + 1));
                    }
                }
            }
        }
        out.set_diff(i as i64, d)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::CycleStrategy;
    use crate::report::all_passed;
    use crate::ring::{Config, GradedRing};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ci(text: &str) -> CompleteIntersection {
        let r = Arc::new(GradedRing::parse(text, Config::default()).unwrap());
        CompleteIntersection::new(r, CycleStrategy::default()).unwrap()
    }

    const EX45: &str = "vars x,y,z\ngen x^2\ngen y^2+z^2\n";
    const EX47: &str = "vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n";

    #[test]
    fn bijection_examples() {
        let t = MultiIndex::new(4, vec![0, 0, 0, 1, 2, 2, 3]).unwrap();
        let m = tuple_to_divided(&t);
        assert_eq!(m.exponents(), [3, 1, 2, 1]);
        assert_eq!(m.to_string(), "v1^(3)v2v3^(2)v4");
        assert_eq!(divided_to_tuple(&m), t);
        assert_eq!(tuple_to_divided(&MultiIndex::empty(3)).exponents(), [0, 0, 0]);
        assert_eq!(tuple_to_divided(&MultiIndex::new(2, vec![1, 1]).unwrap()).exponents(), [0, 2]);
    }

    #[test]
    fn round_trip_and_counts() {
        for c in 1..=4 {
            for k in 0..=6 {
                let ms = DividedMonomial::all(c, k);
                assert_eq!(ms.len(), MultiIndex::all(c, k).len());
                assert!(ms.windows(2).all(|w| w[0] < w[1]));
                for t in MultiIndex::all(c, k) {
                    let m = tuple_to_divided(&t);
                    assert_eq!(m.degree(), k);
                    assert_eq!(divided_to_tuple(&m), t);
                }
            }
        }
    }

    #[test]
    fn single_variable_mu_is_wedge_with_z() {
        let ci = ci("vars x,y,z\ngen x^2\n");
        for k in 0..3 {
            for u in 1..=3 {
                assert_eq!(compare_mu_zeta(&ci, k, u, &divided_to_tuple), Ok(1));
            }
        }
    }

    #[test]
    fn mu_is_zeta() {
        for (text, k_max) in [(EX45, 3), (EX47, 2)] {
            let ci = ci(text);
            let checks = verify_mu_equals_zeta(&ci, k_max);
            assert!(all_passed(&checks), "{checks:#?}");
            for k in 0..k_max {
                verify_mu_chain(&ci, k).unwrap();
                verify_mu_square_zero(&ci, k).unwrap();
            }
        }
    }

    #[test]
    fn wrong_bijection_is_detected() {
        let ci = ci(EX45);
        assert!(compare_mu_zeta(&ci, 1, 1, &reversed_bijection).is_err());
    }

    #[test]
    fn acyclic_closure_squares_to_zero() {
        let ci = ci(EX45);
        let ac = acyclic_closure(&ci, 3).unwrap();
        ac.compose_check(ci.ring()).unwrap();
        assert_eq!(ac.rank(4), 2 * 3 + 3);
        let h = ac.homology(ci.ring(), 1, 6, 10);
        assert!((1..=6).all(|i| h.total(i) == 0));
    }

    proptest! {
        #[test]
        fn contraction_undoes_divided_square(exps in proptest::collection::vec(0usize..4, 1..5), i in 0usize..4) {
            let w = DividedMonomial::new(exps);
            let i = i % w.c();
            let mut sq = vec![0; w.c()];
            sq[i] = 2;
            let (coeff, p) = DividedMonomial::new(sq).mul(&w);
            let back = p.contract(i).and_then(|q| q.contract(i)).unwrap();
            prop_assert_eq!(back, w.clone());
            prop_assert_eq!(coeff, binomial(w.exponents()[i] as i64 + 2, 2));
        }
    }
}
