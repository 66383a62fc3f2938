//! The chain maps `ζ^k: ΣK^{N_{k+1}} → K^{N_k}` and their ring-free shadows
//! `[ζ_u^k]` on Koszul homology, with the exactness checks and the explicit
//! kernel preimage construction.
//!
//! `N_k` is the number of non-decreasing tuples of length `k` over `1..c`.
//! The component of `ζ^k(π)` at a target tuple `v` is `Σ_j z_j ∧ π_{[v j]}`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::combinat::{binomial, insert_sign, num_tuples, subset_rank, subsets, MultiIndex};
use crate::complex::{ChainComplex, ChainMap, FreeModule, Generator, GradedMap, Label, Witness};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::koszul::{wedge_basis, CompleteIntersection, KElem};
use crate::linalg::Matrix;
use crate::ring::GradedRing;

/// `K_u^{N_k}` with generators `(path, tuple, S)`, tuple-major.
pub fn tuple_module(ci: &CompleteIntersection, path: &[usize], k: usize, u: usize) -> FreeModule {
    let n = ci.n();
    let mut gens = Vec::new();
    for t in MultiIndex::all(ci.c(), k) {
        let tw = ci.tuple_twist(t.entries());
        for s in subsets(n, u) {
            gens.push(Generator { label: Label::new(path.to_vec(), t.entries().to_vec(), s), twist: u as i64 + tw });
        }
    }
    FreeModule::new(gens).expect("distinct labels")
}

/// `K^{N_k}` as a complex, generators labeled with `path`.
pub fn tuple_complex(ci: &CompleteIntersection, path: &[usize], k: usize) -> ChainComplex {
    let tuples: Vec<(Vec<usize>, i64)> = MultiIndex::all(ci.c(), k)
        .into_iter()
        .map(|t| {
            let tw = ci.tuple_twist(t.entries());
            (t.entries().to_vec(), tw)
        })
        .collect();
    ci.koszul.copies(path, &tuples)
}

/// Matrix of `ζ_u^k: K_{u-1}^{N_{k+1}} → K_u^{N_k}`, `1 ≤ u ≤ n`.
pub fn zeta_block(ci: &CompleteIntersection, k: usize, u: usize, src_path: &[usize], tgt_path: &[usize]) -> GradedMap {
    let n = ci.n();
    let c = ci.c();
    let src = tuple_module(ci, src_path, k + 1, u - 1);
    let tgt = tuple_module(ci, tgt_path, k, u);
    let mut m = GradedMap::zero(src, tgt, n);
    let src_w = binomial(n as i64, u as i64 - 1);
    let tgt_w = binomial(n as i64, u as i64);
    for v in MultiIndex::all(c, k) {
        let rv = v.rank();
        for j in 0..c {
            let rw = v.insert(j).rank();
            for (cs, s) in subsets(n, u - 1).into_iter().enumerate() {
                for (t, a) in wedge_basis(&ci.cycles.cycles[j], &s) {
                    m.add_entry(rv * tgt_w + subset_rank(n, &t), rw * src_w + cs, &a);
                }
            }
        }
    }
    m
}

/// All components `ζ_u^k`, `1 ≤ u ≤ n`.
#[derive(Clone, Debug)]
pub struct ZetaMap {
    pub k: usize,
    pub maps: BTreeMap<usize, GradedMap>,
}

impl ZetaMap {
    pub fn new(ci: &CompleteIntersection, k: usize) -> Self {
        let maps = (1..=ci.n()).map(|u| (u, zeta_block(ci, k, u, &[], &[]))).collect();
        ZetaMap { k, maps }
    }

    pub fn get(&self, u: usize) -> &GradedMap {
        &self.maps[&u]
    }

    /// As a map of complexes `ΣK^{N_{k+1}} → K^{N_k}`.
    pub fn as_chain_map(&self, ci: &CompleteIntersection) -> (ChainComplex, ChainComplex, ChainMap) {
        let src = tuple_complex(ci, &[], self.k + 1).shift(1);
        let tgt = tuple_complex(ci, &[], self.k);
        let components = self.maps.iter().map(|(&u, m)| (u as i64, m.clone())).collect();
        (src, tgt, ChainMap { components })
    }
}

/// Chain-map identity `∂ ζ_u = -ζ_{u-1} ∂`, as a map out of the shifted source.
pub fn verify_chain(ci: &CompleteIntersection, zeta: &ZetaMap) -> Result<(), Witness> {
    let (src, tgt, f) = zeta.as_chain_map(ci);
    f.verify(&src, &tgt, ci.ring())
}

/// `ζ^k ∘ Σζ^{k+1} = 0`, checked in each homological degree.
pub fn verify_square_zero(ci: &CompleteIntersection, zk: &ZetaMap, zk1: &ZetaMap) -> Result<(), Witness> {
    assert_eq!(zk.k + 1, zk1.k, "consecutive maps required");
    let ring = ci.ring();
    for u in 2..=ci.n() {
        let prod = zk.get(u).compose(zk1.get(u - 1), ring).expect("shapes");
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

/// Basis element of `A_u^{N_k}`: a tuple and a subset of `0..c`.
pub type HomologyBasis = Vec<(MultiIndex, Vec<usize>)>;

fn homology_basis(c: usize, k: i64, u: usize) -> HomologyBasis {
    if k < 0 || u > c {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in MultiIndex::all(c, k as usize) {
        for s in subsets(c, u) {
            out.push((t.clone(), s));
        }
    }
    out
}

/// `[ζ_u^k]: A_{u-1}^{N_{k+1}} → A_u^{N_k}` on the wedge bases of the exterior algebra.
#[derive(Clone, Debug)]
pub struct HomologyZeta {
    pub c: usize,
    pub k: i64,
    pub u: usize,
    pub matrix: Matrix,
    pub rows: HomologyBasis,
    pub cols: HomologyBasis,
}

impl HomologyZeta {
    /// `u` may be `c + 1` (empty target); negative `k` gives the zero map.
    pub fn new(field: Field, c: usize, k: i64, u: usize) -> Self {
        assert!(u >= 1, "u starts at 1");
        let rows = homology_basis(c, k, u);
        let cols = homology_basis(c, k + 1, u - 1);
        let index: BTreeMap<&(MultiIndex, Vec<usize>), usize> = rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut matrix = Matrix::zeros(field, rows.len(), cols.len());
        for (col, (w, s)) in cols.iter().enumerate() {
            for j in w.distinct() {
                let Some((sign, t)) = insert_sign(s, j) else { continue };
                let v = w.remove_one(j).expect("j occurs in w");
                let row = index[&(v, t)];
                matrix.set(row, col, field.from_i64(sign));
            }
        }
        HomologyZeta { c, k, u, matrix, rows, cols }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Rank restricted to each internal degree, the degree of `(v, T)` being
    /// `Σ_{t∈T} d_t + Σ_{t∈v} d_t`.
    pub fn rank_by_degree(&self, degrees: &[usize]) -> BTreeMap<usize, usize> {
        let deg = |(v, s): &(MultiIndex, Vec<usize>)| -> usize {
            s.iter().chain(v.entries()).map(|&t| degrees[t]).sum()
        };
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, b) in self.rows.iter().enumerate() {
            groups.entry(deg(b)).or_default().0.push(i);
        }
        for (j, b) in self.cols.iter().enumerate() {
            groups.entry(deg(b)).or_default().1.push(j);
        }
        groups
            .into_iter()
            .map(|(d, (rs, cs))| {
                let mut m = Matrix::zeros(self.matrix.field(), rs.len(), cs.len());
                for (a, &r) in rs.iter().enumerate() {
                    for (b, &c) in cs.iter().enumerate() {
                        m.set(a, b, self.matrix.get(r, c).clone());
                    }
                }
                (d, m.rank())
            })
            .filter(|&(_, r)| r > 0)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub c: usize,
    pub k: usize,
    /// `dim A_u^{N_{k-u+1}}` for `0 ≤ u ≤ c`.
    pub dims: Vec<usize>,
    /// `rank [ζ_u^{k-u+1}]` for `1 ≤ u ≤ c`.
    pub ranks: Vec<usize>,
    /// Positions `u` where exactness fails.
    pub failures: Vec<usize>,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `0 → A_0^{N_{k+1}} → A_1^{N_k} → … → A_c^{N_{k-c+1}} → 0` with maps `[ζ_u^{k-u+1}]`.
pub fn verify_exact_sequence(field: Field, c: usize, k: usize) -> ExactnessReport {
    let dims: Vec<usize> = (0..=c)
        .map(|u| binomial(c as i64, u as i64) * num_tuples(c, k as i64 - u as i64 + 1))
        .collect();
    let ranks: Vec<usize> = (1..=c)
        .into_par_iter()
        .map(|u| HomologyZeta::new(field, c, k as i64 - u as i64 + 1, u).rank())
        .collect();
    let rank_at = |u: usize| if u == 0 || u > c { 0 } else { ranks[u - 1] };
    let failures = (0..=c).filter(|&u| rank_at(u) + rank_at(u + 1) != dims[u]).collect();
    ExactnessReport { c, k, dims, ranks, failures }
}

/// Given `π ∈ ker [ζ_{u+1}^{k-u}] ⊂ A_u^{N_{k-u+1}}`, builds `π'` with
/// `[ζ_u^{k-u+1}](π') = π`: the coefficient of `(w_1 w_2…, R)` in `π'` is the
/// coefficient of `(w_2…, {w_1} ∪ R)` in `π` when `w_1 < min R`, else zero.
pub fn kernel_preimage(field: Field, c: usize, k: usize, u: usize, pi: &[Scalar]) -> Result<Vec<Scalar>> {
    if u == 0 || u > c || k + 1 < u {
        return Err(Error::Invalid(format!("need 1 ≤ u ≤ c and u ≤ k + 1 (c={c}, k={k}, u={u})")));
    }
    let kk = k as i64 - u as i64 + 1;
    let next = HomologyZeta::new(field, c, kk - 1, u + 1);
    if pi.len() != next.cols.len() {
        return Err(Error::ShapeMismatch(format!("expected {} coordinates, got {}", next.cols.len(), pi.len())));
    }
    let residual = next.matrix.mul_vec(pi);
    if residual.iter().any(|x| !x.is_zero()) {
        let shown: Vec<String> = residual.iter().map(|x| x.to_string()).collect();
        return Err(Error::NotInKernel(format!("[{}]", shown.join(", "))));
    }
    let this = HomologyZeta::new(field, c, kk, u);
    let index: BTreeMap<&(MultiIndex, Vec<usize>), usize> =
        this.rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut out = vec![field.zero(); this.cols.len()];
    for (col, (w, r)) in this.cols.iter().enumerate() {
        let w1 = w.entries()[0];
        if r.first().is_some_and(|&r1| w1 >= r1) {
            continue;
        }
        let mut s = vec![w1];
        s.extend_from_slice(r);
        let rest = w.remove_one(w1).expect("first entry");
        out[col] = pi[index[&(rest, s)]].clone();
    }
    let image = this.matrix.mul_vec(&out);
    if image.as_slice() != pi {
        return Err(Error::Invalid("preimage rule did not reproduce the input".into()));
    }
    Ok(out)
}

/// Runs [`kernel_preimage`] on a full basis of `ker [ζ_{u+1}^{k-u}]`;
/// returns the basis size.
pub fn verify_kernel_preimage(field: Field, c: usize, k: usize, u: usize) -> Result<usize> {
    let next = HomologyZeta::new(field, c, k as i64 - u as i64, u + 1);
    let basis = next.matrix.kernel();
    for v in &basis {
        kernel_preimage(field, c, k, u, v)?;
    }
    Ok(basis.len())
}

/// Ring-level `ζ_u^k` applied to `z_S` at tuple `w` must equal the
/// homology-level column expanded through `z_T` at tuple `v`, exactly in `K`.
pub fn cross_check_homology(ci: &CompleteIntersection, k: usize, u: usize) -> Result<(), String> {
    if u == 0 || u > ci.n() {
        return Err(format!("u = {u} outside 1..={}", ci.n()));
    }
    let ring = ci.ring();
    let hz = HomologyZeta::new(ring.field(), ci.c(), k as i64, u);
    let ring_map = zeta_block(ci, k, u, &[], &[]);
    let z = ci.cycles.elements();
    let product = |s: &[usize]| -> KElem {
        let mut acc: KElem = [(vec![], ring.one())].into_iter().collect();
        for &j in s {
            acc = crate::koszul::wedge(ring, &acc, &z[j]);
        }
        acc
    };
    for (col, (w, s)) in hz.cols.iter().enumerate() {
        let input = embed(ci, w, u - 1, &product(s));
        let lhs = apply(ring, &ring_map, &input);
        let mut rhs = vec![ring.zero(); ring_map.target().rank()];
        for (row, (v, t)) in hz.rows.iter().enumerate() {
            let a = hz.matrix.get(row, col);
            if a.is_zero() {
                continue;
            }
            let term = embed(ci, v, u, &product(t));
            for (i, p) in term.iter().enumerate() {
                rhs[i] = rhs[i].add(&p.scale(a));
            }
        }
        for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            if !ring.reduce(&l.sub(r)).is_zero() {
                return Err(format!(
                    "column {} ({w}, {:?}): row {} differs",
                    col,
                    s,
                    ring_map.target().gen(i).label
                ));
            }
        }
    }
    Ok(())
}

/// Coordinate vector of `x` placed at tuple `t` in `K_u^{N_{|t|}}`.
fn embed(ci: &CompleteIntersection, t: &MultiIndex, u: usize, x: &KElem) -> Vec<crate::poly::Polynomial> {
    let n = ci.n();
    let width = binomial(n as i64, u as i64);
    let total = num_tuples(ci.c(), t.len() as i64) * width;
    let mut out = vec![ci.ring().zero(); total];
    for (s, p) in x {
        out[t.rank() * width + subset_rank(n, s)] = p.clone();
    }
    out
}

fn apply(ring: &GradedRing, m: &GradedMap, v: &[crate::poly::Polynomial]) -> Vec<crate::poly::Polynomial> {
    let mut out = vec![ring.zero(); m.target().rank()];
    for (r, c, p) in m.entries() {
        if c < v.len() && !v[c].is_zero() {
            out[r] = out[r].add(&p.mul(&v[c]));
        }
    }
    out.into_iter().map(|p| ring.reduce(&p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::CycleStrategy;
    use crate::ring::Config;
    use std::sync::Arc;

    fn ci(text: &str) -> CompleteIntersection {
        let r = Arc::new(GradedRing::parse(text, Config::default()).unwrap());
        CompleteIntersection::new(r, CycleStrategy::default()).unwrap()
    }

    fn ex45() -> CompleteIntersection {
        ci("vars x,y,z\ngen x^2\ngen y^2+z^2\n")
    }

    #[test]
    fn shapes() {
        let ci = ex45();
        for k in 0..4 {
            let z = ZetaMap::new(&ci, k);
            for u in 1..=3 {
                let (rows, cols) = z.get(u).shape();
                assert_eq!(rows, binomial(3, u as i64) * num_tuples(2, k as i64));
                assert_eq!(cols, binomial(3, u as i64 - 1) * num_tuples(2, k as i64 + 1));
                assert!(z.get(u).homogeneity_violation(ci.ring()).is_none());
            }
        }
    }

    #[test]
    fn chain_and_square_zero() {
        let ci = ex45();
        let zs: Vec<ZetaMap> = (0..4).map(|k| ZetaMap::new(&ci, k)).collect();
        for k in 0..3 {
            assert!(verify_chain(&ci, &zs[k]).is_ok());
            assert!(verify_square_zero(&ci, &zs[k], &zs[k + 1]).is_ok());
        }
    }

    #[test]
    fn homology_matrix_examples() {
        let f = Field::default();
        let m = HomologyZeta::new(f, 2, 0, 1);
        assert_eq!((m.matrix.rows(), m.matrix.cols()), (2, 2));
        assert_eq!(m.rank(), 2);
        let empty = HomologyZeta::new(f, 2, 0, 3);
        assert_eq!(empty.matrix.rows(), 0);
        let r = verify_exact_sequence(f, 2, 1);
        assert_eq!(r.dims, [3, 4, 1]);
        assert_eq!(r.ranks, [3, 1]);
        let r = verify_exact_sequence(f, 3, 1);
        assert_eq!(r.dims, [6, 9, 3, 0]);
        assert!(r.exact());
        let r = verify_exact_sequence(f, 1, 4);
        assert_eq!(r.dims, [1, 1]);
        assert!(r.exact());
    }

    #[test]
    fn homology_maps_compose_to_zero() {
        let f = Field::Rational;
        for c in 1..=4 {
            for k in 1..=4i64 {
                for u in 1..c {
                    let a = HomologyZeta::new(f, c, k, u);
                    let b = HomologyZeta::new(f, c, k - 1, u + 1);
                    assert!(b.matrix.mul(&a.matrix).is_zero(), "c={c} k={k} u={u}");
                }
            }
        }
    }

    #[test]
    fn preimage_of_zero_and_non_kernel() {
        let f = Field::default();
        let hz = HomologyZeta::new(f, 2, 2, 1);
        let zero = vec![f.zero(); hz.cols.len()];
        let next = HomologyZeta::new(f, 2, 1, 2);
        assert_eq!(kernel_preimage(f, 2, 2, 1, &vec![f.zero(); next.cols.len()]).unwrap(), zero);
        let mut bad = vec![f.zero(); next.cols.len()];
        let col = (0..next.cols.len()).find(|&j| next.matrix.column(j).iter().any(|x| !x.is_zero())).unwrap();
        bad[col] = f.one();
        assert!(matches!(kernel_preimage(f, 2, 2, 1, &bad), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn preimage_on_kernel_basis() {
        let f = Field::default();
        for (c, k, u) in [(2, 2, 1), (3, 3, 2), (4, 2, 2), (3, 2, 3), (2, 3, 2)] {
            assert!(verify_kernel_preimage(f, c, k, u).unwrap() > 0);
        }
    }

    #[test]
    fn ring_and_homology_levels_agree() {
        let ci = ex45();
        for k in 0..3 {
            for u in 1..=2 {
                cross_check_homology(&ci, k, u).unwrap();
            }
        }
    }
}
