//! The Koszul complex on the variables, its homology, cycle representatives
//! for `H_1`, and certification of the complete-intersection hypothesis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::combinat::{binomial, insert_sign, subsets, wedge_sign};
use crate::complex::{ChainComplex, FreeModule, Generator, GradedMap, HomologyTable, Label, StrandBasis};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::report::Check;
use crate::ring::GradedRing;

/// Element of `K_u`: coefficient of each basis vector `e_S`.
pub type KElem = BTreeMap<Vec<usize>, Polynomial>;

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    ring: Arc<GradedRing>,
    complex: ChainComplex,
}

impl KoszulComplex {
    pub fn new(ring: Arc<GradedRing>) -> Self {
        let n = ring.nvars();
        let mut complex = ChainComplex::new(n);
        for i in 0..=n {
            complex.set_module(i as i64, Self::module_with(n, i, &[], &[], 0));
        }
        for i in 1..=n {
            let d = Self::diff_block(&ring, i);
            let d = d
                .with_modules(complex.module(i as i64), complex.module(i as i64 - 1))
                .expect("ranks agree");
            complex.set_diff(i as i64, d).expect("shape");
        }
        KoszulComplex { ring, complex }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn n(&self) -> usize {
        self.ring.nvars()
    }

    /// Generators `e_S`, `|S| = i`, tagged with `path` and `tuple`, twisted by `extra`.
    pub fn module_with(n: usize, i: usize, path: &[usize], tuple: &[usize], extra: i64) -> FreeModule {
        FreeModule::new(
            subsets(n, i)
                .into_iter()
                .map(|s| Generator {
                    label: Label::new(path.to_vec(), tuple.to_vec(), s),
                    twist: i as i64 + extra,
                })
                .collect(),
        )
        .expect("subsets are distinct")
    }

    /// `∂_i` with placeholder modules: `e_S ↦ Σ_t (-1)^t x_{s_t} e_{S∖s_t}`.
    fn diff_block(ring: &GradedRing, i: usize) -> GradedMap {
        let n = ring.nvars();
        let src = subsets(n, i);
        let tgt = subsets(n, i - 1);
        let mut m = GradedMap::zero(
            Self::module_with(n, i, &[], &[], 0),
            Self::module_with(n, i - 1, &[], &[], 0),
            n,
        );
        for (c, s) in src.iter().enumerate() {
            for t in 0..s.len() {
                let mut rest = s.clone();
                let v = rest.remove(t);
                let r = crate::combinat::subset_rank(n, &rest);
                debug_assert_eq!(tgt[r], rest);
                let x = ring.var(v);
                m.set(r, c, if t % 2 == 0 { x } else { x.neg() });
            }
        }
        m
    }

    /// Matrix of `∂_i` over the subset bases.
    pub fn diff(&self, i: usize) -> GradedMap {
        self.complex.diff(i as i64)
    }

    /// `⊕_v K` over the given tuples, as a complex. Generators are ordered
    /// tuple-major, then by wedge subset; tuple `v` is twisted by `twists[v]`.
    pub fn copies(&self, path: &[usize], tuples: &[(Vec<usize>, i64)]) -> ChainComplex {
        let n = self.n();
        let mut out = ChainComplex::new(n);
        for i in 0..=n {
            let mut gens = Vec::new();
            for (t, tw) in tuples {
                gens.extend(Self::module_with(n, i, path, t, *tw).gens().iter().cloned());
            }
            out.set_module(i as i64, FreeModule::new(gens).expect("distinct labels"));
        }
        for i in 1..=n {
            let block = self.diff(i);
            let (rows, cols) = block.shape();
            let mut d = GradedMap::zero(out.module(i as i64), out.module(i as i64 - 1), n);
            for k in 0..tuples.len() {
                for (r, c, p) in block.entries() {
                    d.set(k * rows + r, k * cols + c, p.clone());
                }
            }
            out.set_diff(i as i64, d).expect("shape");
        }
        out
    }

    /// `dim A_i` per internal degree, `0 ≤ i ≤ n`.
    pub fn homology(&self, max_degree: usize) -> HomologyTable {
        self.complex.homology(&self.ring, 0, self.n() as i64, max_degree)
    }

    /// `∂(z)` for `z ∈ K_u`.
    pub fn boundary(&self, z: &KElem) -> KElem {
        let mut out = KElem::new();
        for (s, p) in z {
            for t in 0..s.len() {
                let mut rest = s.clone();
                let v = rest.remove(t);
                let mut term = self.ring.var(v).mul(p);
                if t % 2 == 1 {
                    term = term.neg();
                }
                add_into(&mut out, rest, &term);
            }
        }
        reduce_elem(&self.ring, out)
    }

    /// Strand coordinates of a homogeneous `z ∈ K_u` of internal degree `d`.
    pub fn coordinates(&self, u: usize, z: &KElem, d: i64) -> Vec<Scalar> {
        let module = self.complex.module(u as i64);
        let basis = StrandBasis::new(&module, d, &self.ring);
        let mut out = vec![self.ring.field().zero(); basis.dim];
        let one = self.ring.field().one();
        for (s, p) in z {
            let idx = crate::combinat::subset_rank(self.n(), s);
            if let Some(start) = basis.offset[idx] {
                let piece = self.ring.piece((d - u as i64) as usize);
                piece.accumulate(p, &one, &mut out[start..start + piece.dim()]);
            }
        }
        out
    }
}

fn add_into(out: &mut KElem, key: Vec<usize>, p: &Polynomial) {
    let e = out.entry(key).or_insert_with(|| Polynomial::zero(p.nvars()));
    *e = e.add(p);
}

fn reduce_elem(ring: &GradedRing, z: KElem) -> KElem {
    z.into_iter()
        .map(|(k, p)| (k, ring.reduce(&p)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

/// `a ∧ b` in the exterior algebra over `Q/I`, in normal form.
pub fn wedge(ring: &GradedRing, a: &KElem, b: &KElem) -> KElem {
    let mut out = KElem::new();
    for (s, p) in a {
        for (t, q) in b {
            if let Some((sign, u)) = wedge_sign(s, t) {
                let mut term = p.mul(q);
                if sign < 0 {
                    term = term.neg();
                }
                add_into(&mut out, u, &term);
            }
        }
    }
    reduce_elem(ring, out)
}

/// `z ∧ e_S` for `z ∈ K_1`: pairs `(S ∪ t, ±a_t)`.
pub fn wedge_basis(z: &[Polynomial], s: &[usize]) -> Vec<(Vec<usize>, Polynomial)> {
    z.iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .filter_map(|(t, a)| {
            let (sign, u) = insert_sign(s, t)?;
            Some((u, if sign < 0 { a.neg() } else { a.clone() }))
        })
        .collect()
}

/// How to choose representatives `z_1..z_c` of a basis of `A_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CycleStrategy {
    /// Write each ideal generator `g_j` as `Σ a_t x_t`, sending every monomial of
    /// `g_j` to the largest-index variable dividing it; `z_j = Σ a_t e_t`.
    #[default]
    GeneratorLift,
    /// Degree by degree, the reduced echelon basis of `ker ∂_1` modulo `im ∂_2`.
    Echelon,
}

/// Cycles `z_1..z_c ∈ K_1` whose classes form a basis of `A_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleBasis {
    /// `cycles[j][t]` is the coefficient of `e_t` in `z_j`.
    pub cycles: Vec<Vec<Polynomial>>,
    /// Internal degree of each `z_j`.
    pub degrees: Vec<usize>,
}

impl CycleBasis {
    pub fn c(&self) -> usize {
        self.cycles.len()
    }

    pub fn as_elem(&self, j: usize) -> KElem {
        self.cycles[j]
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(t, p)| (vec![t], p.clone()))
            .collect()
    }

    pub fn fmt_cycle(&self, ring: &GradedRing, j: usize) -> String {
        let terms: Vec<String> = self.cycles[j]
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(t, p)| {
                let s = ring.fmt(p);
                let s = if p.num_terms() > 1 { format!("({s})") } else { s };
                format!("{s}*e{}", t + 1)
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Builds a basis from raw coordinates, inferring degrees.
    pub fn from_coordinates(ring: &GradedRing, cycles: Vec<Vec<Polynomial>>) -> Result<Self> {
        let mut degrees = Vec::with_capacity(cycles.len());
        for (j, z) in cycles.iter().enumerate() {
            if z.len() != ring.nvars() {
                return Err(Error::InvalidCycles(format!("z{} has {} coordinates", j + 1, z.len())));
            }
            let mut deg = None;
            for p in z.iter().filter(|p| !p.is_zero()) {
                let d = p
                    .homogeneous_degree()
                    .ok_or_else(|| Error::InvalidCycles(format!("z{} is not homogeneous", j + 1)))?;
                if deg.is_some_and(|e| e != d) {
                    return Err(Error::InvalidCycles(format!("z{} is not homogeneous", j + 1)));
                }
                deg = Some(d);
            }
            let d = deg.ok_or_else(|| Error::InvalidCycles(format!("z{} is zero", j + 1)))?;
            degrees.push(d + 1);
        }
        Ok(CycleBasis { cycles, degrees })
    }

    /// Representatives chosen by `strategy`.
    pub fn extract(k: &KoszulComplex, strategy: CycleStrategy) -> Result<Self> {
        let ring = k.ring();
        let c = ring.generators().len();
        let a1 = k.complex.homology(ring, 1, 1, ring.max_degree()).total(1);
        if a1 != c {
            return Err(Error::NotCertified(format!(
                "dim A_1 = {a1} but the ideal has {c} generators"
            )));
        }
        let basis = match strategy {
            CycleStrategy::GeneratorLift => Self::lift_generators(ring),
            CycleStrategy::Echelon => Self::echelon(k, c)?,
        };
        basis.validate(k)?;
        Ok(basis)
    }

    fn lift_generators(ring: &GradedRing) -> Self {
        let n = ring.nvars();
        let cycles = ring
            .generators()
            .iter()
            .map(|g| {
                let mut z = vec![Polynomial::zero(n); n];
                for (m, a) in g.terms() {
                    let t = (0..n).rev().find(|&t| m.exponents()[t] > 0).expect("degree ≥ 2");
                    z[t].add_term(m.div_var(t).expect("divisible"), a);
                }
                z
            })
            .collect();
        CycleBasis { cycles, degrees: ring.generator_degrees().to_vec() }
    }

    fn echelon(k: &KoszulComplex, c: usize) -> Result<Self> {
        let ring = k.ring();
        let field = ring.field();
        let mut cycles = Vec::new();
        let mut degrees = Vec::new();
        for d in 1..=ring.max_degree() as i64 {
            if cycles.len() == c {
                break;
            }
            let ker = k.complex.cycles(ring, 1, d);
            if ker.is_empty() {
                continue;
            }
            let im = k.complex.boundaries(ring, 1, d);
            let width = ker[0].len();
            let (bound, bpiv) = im.transpose().rref();
            let mut rows = Vec::with_capacity(ker.len());
            for v in ker {
                let mut v = v;
                for (r, &p) in bpiv.iter().enumerate() {
                    let f = v[p].clone();
                    if !f.is_zero() {
                        for col in 0..width {
                            let delta = &f * bound.get(r, col);
                            v[col] -= &delta;
                        }
                    }
                }
                rows.push(v);
            }
            let (red, piv) = Matrix::from_rows(field, width, rows).rref();
            let basis = StrandBasis::new(&k.complex.module(1), d, ring);
            let piece = ring.piece((d - 1) as usize);
            for r in 0..piv.len() {
                let mut z = vec![ring.zero(); ring.nvars()];
                for (t, zt) in z.iter_mut().enumerate() {
                    if let Some(start) = basis.offset[t] {
                        *zt = piece.from_coordinates(&red.row(r)[start..start + piece.dim()]);
                    }
                }
                cycles.push(z);
                degrees.push(d as usize);
            }
        }
        if cycles.len() != c {
            return Err(Error::InvalidCycles(format!("found {} independent classes, expected {c}", cycles.len())));
        }
        Ok(CycleBasis { cycles, degrees })
    }

    /// Checks `∂_1 z_j = 0`, entries in the maximal ideal, and that the classes
    /// form a basis of `A_1`.
    pub fn validate(&self, k: &KoszulComplex) -> Result<()> {
        let ring = k.ring();
        let c = ring.generators().len();
        if self.c() != c {
            return Err(Error::InvalidCycles(format!("{} cycles given, codepth is {c}", self.c())));
        }
        for j in 0..self.c() {
            let z = self.as_elem(j);
            if z.values().any(|p| p.constant_term().is_some()) {
                return Err(Error::InvalidCycles(format!("z{} has a unit entry", j + 1)));
            }
            if !k.boundary(&z).is_empty() {
                return Err(Error::InvalidCycles(format!("z{} is not a cycle", j + 1)));
            }
        }
        let a1 = k.complex.homology(ring, 1, 1, ring.max_degree());
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (j, &d) in self.degrees.iter().enumerate() {
            by_degree.entry(d).or_default().push(j);
        }
        for (d, js) in by_degree {
            let vecs: Vec<Vec<Scalar>> = js.iter().map(|&j| k.coordinates(1, &self.as_elem(j), d as i64)).collect();
            let independent = independent_mod_boundaries(k, 1, d as i64, &vecs);
            if independent != js.len() || a1.get(1, d) != js.len() {
                return Err(Error::InvalidCycles(format!(
                    "classes in internal degree {d} do not form a basis of A_1 there"
                )));
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> Vec<KElem> {
        (0..self.c()).map(|j| self.as_elem(j)).collect()
    }
}

/// Rank of `vecs` modulo the boundaries in `K_u` at internal degree `d`.
fn independent_mod_boundaries(k: &KoszulComplex, u: usize, d: i64, vecs: &[Vec<Scalar>]) -> usize {
    let b = k.complex.boundaries(k.ring(), u as i64, d).transpose();
    let width = b.cols();
    let rb = b.rank();
    if vecs.is_empty() {
        return 0;
    }
    let extra = Matrix::from_rows(k.ring().field(), width, vecs.to_vec());
    b.vstack(&extra).rank() - rb
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificationReport {
    pub checks: Vec<Check>,
    /// Total `dim A_i`, `0 ≤ i ≤ n`.
    pub dims: Vec<usize>,
}

impl CertificationReport {
    pub fn certified(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `dim A_i = C(c, i)` and that wedge products of the `z_j` span `A_u`
/// for `u ≤ min(c, wedge_bound)`.
pub fn certify(k: &KoszulComplex, z: &CycleBasis, wedge_bound: usize) -> CertificationReport {
    let ring = k.ring();
    let n = k.n();
    let c = ring.generators().len();
    let h = k.homology(ring.max_degree());
    let dims: Vec<usize> = (0..=n).map(|i| h.total(i as i64)).collect();
    let mut checks = Vec::new();
    for (i, &dim) in dims.iter().enumerate() {
        let want = binomial(c as i64, i as i64);
        checks.push(Check {
            name: format!("dim A_{i}"),
            passed: dim == want,
            detail: format!("{dim} (expected {want})"),
        });
    }
    for u in 2..=c.min(wedge_bound).min(n) {
        let mut products: BTreeMap<usize, Vec<Vec<Scalar>>> = BTreeMap::new();
        for t in subsets(c, u) {
            let mut acc: KElem = [(vec![], ring.one())].into_iter().collect();
            for &j in &t {
                acc = wedge(ring, &acc, &z.as_elem(j));
            }
            let d: usize = t.iter().map(|&j| z.degrees[j]).sum();
            if !acc.is_empty() {
                products.entry(d).or_default().push(k.coordinates(u, &acc, d as i64));
            }
        }
        let mut spans = true;
        let mut detail = String::new();
        for d in 0..=ring.max_degree() {
            let have = products.get(&d).map_or(0, |v| independent_mod_boundaries(k, u, d as i64, v));
            if have != h.get(u as i64, d) {
                spans = false;
                detail = format!("internal degree {d}: products span {have}, dim A_{u} = {}", h.get(u as i64, d));
                break;
            }
        }
        if spans {
            detail = format!("products of {u} cycles span A_{u}");
        }
        checks.push(Check { name: format!("wedge products span A_{u}"), passed: spans, detail });
    }
    CertificationReport { checks, dims }
}

/// A ring together with certified data: the Koszul complex and cycle basis.
#[derive(Clone, Debug)]
pub struct CompleteIntersection {
    pub koszul: KoszulComplex,
    pub cycles: CycleBasis,
    pub report: CertificationReport,
}

impl CompleteIntersection {
    pub fn new(ring: Arc<GradedRing>, strategy: CycleStrategy) -> Result<Self> {
        let koszul = KoszulComplex::new(ring);
        let cycles = CycleBasis::extract(&koszul, strategy)?;
        Self::certified(koszul, cycles)
    }

    pub fn with_cycles(ring: Arc<GradedRing>, cycles: Vec<Vec<Polynomial>>) -> Result<Self> {
        let koszul = KoszulComplex::new(ring.clone());
        let cycles = CycleBasis::from_coordinates(&ring, cycles)?;
        cycles.validate(&koszul)?;
        Self::certified(koszul, cycles)
    }

    fn certified(koszul: KoszulComplex, cycles: CycleBasis) -> Result<Self> {
        let report = certify(&koszul, &cycles, usize::MAX);
        if !report.certified() {
            let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
            return Err(Error::NotCertified(failed.join("; ")));
        }
        Ok(CompleteIntersection { koszul, cycles, report })
    }

    /// Skips certification; for constructing deliberately broken inputs.
    pub fn unchecked(koszul: KoszulComplex, cycles: CycleBasis) -> Self {
        let report = CertificationReport { checks: Vec::new(), dims: Vec::new() };
        CompleteIntersection { koszul, cycles, report }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.koszul.ring()
    }

    pub fn n(&self) -> usize {
        self.koszul.n()
    }

    pub fn c(&self) -> usize {
        self.cycles.c()
    }

    /// Twist contributed by a tuple: sum of the degrees of its cycles.
    pub fn tuple_twist(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&t| self.cycles.degrees[t] as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Config;

    fn ring(text: &str) -> Arc<GradedRing> {
        Arc::new(GradedRing::parse(text, Config::default()).unwrap())
    }

    fn ex45() -> Arc<GradedRing> {
        ring("vars x,y,z\ngen x^2\ngen y^2+z^2\n")
    }

    fn ex47() -> Arc<GradedRing> {
        ring("vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n")
    }

    fn matrix_text(r: &GradedRing, m: &GradedMap) -> Vec<Vec<String>> {
        let (rows, cols) = m.shape();
        (0..rows).map(|i| (0..cols).map(|j| r.fmt(&m.entry(i, j))).collect()).collect()
    }

    #[test]
    fn differentials_for_three_variables() {
        let r = ex45();
        let k = KoszulComplex::new(r.clone());
        assert_eq!(matrix_text(&r, &k.diff(1)), [["x", "y", "z"]]);
        assert_eq!(
            matrix_text(&r, &k.diff(2)),
            [["-y", "-z", "0"], ["x", "0", "-z"], ["0", "x", "y"]]
        );
        assert_eq!(matrix_text(&r, &k.diff(3)), [["z"], ["-y"], ["x"]]);
        assert!(k.complex().compose_check(&r).is_ok());
        for i in 0..=3 {
            assert_eq!(k.complex().rank(i), binomial(3, i));
            assert!(k.complex().module(i).gens().iter().all(|g| g.twist == i));
        }
    }

    #[test]
    fn single_variable() {
        let r = ring("vars x\ngen x^2\n");
        let k = KoszulComplex::new(r.clone());
        assert_eq!(matrix_text(&r, &k.diff(1)), [["x"]]);
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::Echelon).unwrap();
        assert_eq!(ci.cycles.fmt_cycle(&r, 0), "x*e1");
    }

    #[test]
    fn homology_is_exterior() {
        let k = KoszulComplex::new(ex45());
        let h = k.homology(16);
        assert_eq!((0..=3).map(|i| h.total(i)).collect::<Vec<_>>(), [1, 2, 1, 0]);
        let k = KoszulComplex::new(ex47());
        let h = k.homology(16);
        assert_eq!((0..=3).map(|i| h.total(i)).collect::<Vec<_>>(), [1, 3, 3, 1]);
    }

    #[test]
    fn generator_lift_cycles() {
        let r = ex45();
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::GeneratorLift).unwrap();
        assert_eq!(ci.cycles.fmt_cycle(&r, 0), "x*e1");
        assert_eq!(ci.cycles.fmt_cycle(&r, 1), "y*e2 + z*e3");
        let r = ex47();
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::GeneratorLift).unwrap();
        let z: Vec<String> = (0..3).map(|j| ci.cycles.fmt_cycle(&r, j)).collect();
        assert_eq!(z, ["x*e1 + y*e2", "x*e3", "x*e2 + z*e3"]);
        assert_eq!(ci.cycles.degrees, [2, 2, 2]);
    }

    #[test]
    fn echelon_cycles() {
        let r = ex45();
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::Echelon).unwrap();
        assert_eq!(ci.cycles.fmt_cycle(&r, 0), "x*e1");
        assert_eq!(ci.cycles.fmt_cycle(&r, 1), "y*e2 + z*e3");
        let r = ex47();
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::Echelon).unwrap();
        let mut z: Vec<String> = (0..3).map(|j| ci.cycles.fmt_cycle(&r, j)).collect();
        z.sort();
        assert_eq!(z, ["x*e1 + y*e2", "x*e2 + z*e3", "x*e3"]);
    }

    #[test]
    fn certification_reports() {
        let ci = CompleteIntersection::new(ex45(), CycleStrategy::default()).unwrap();
        assert_eq!(ci.report.dims, [1, 2, 1, 0]);
        let ci = CompleteIntersection::new(ex47(), CycleStrategy::default()).unwrap();
        assert_eq!(ci.report.dims, [1, 3, 3, 1]);
    }

    #[test]
    fn non_complete_intersection_is_refused() {
        let r = ring("vars x,y\ngen x^2\ngen x*y\n");
        let k = KoszulComplex::new(r.clone());
        let z = CycleBasis::extract(&k, CycleStrategy::GeneratorLift).unwrap();
        let rep = certify(&k, &z, usize::MAX);
        assert_eq!(rep.dims, [1, 2, 1]);
        assert!(!rep.certified());
        let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["wedge products span A_2"]);
        assert!(matches!(
            CompleteIntersection::new(r, CycleStrategy::default()),
            Err(Error::NotCertified(_))
        ));
    }

    #[test]
    fn user_cycles_are_validated() {
        let r = ex45();
        let p = |s: &str| r.parse_poly(s).unwrap();
        let good = vec![vec![p("x"), p("0"), p("0")], vec![p("0"), p("y"), p("z")]];
        assert!(CompleteIntersection::with_cycles(r.clone(), good).is_ok());
        let not_cycle = vec![vec![p("y"), p("0"), p("0")], vec![p("0"), p("y"), p("z")]];
        assert!(matches!(
            CompleteIntersection::with_cycles(r.clone(), not_cycle),
            Err(Error::InvalidCycles(_))
        ));
        let dependent = vec![vec![p("x"), p("0"), p("0")], vec![p("2*x"), p("0"), p("0")]];
        assert!(matches!(
            CompleteIntersection::with_cycles(r.clone(), dependent),
            Err(Error::InvalidCycles(_))
        ));
        let boundary = vec![vec![p("x"), p("0"), p("0")], vec![p("-y"), p("x"), p("0")]];
        assert!(CompleteIntersection::with_cycles(r, boundary).is_err());
    }

    #[test]
    fn wedge_products() {
        let r = ex47();
        let ci = CompleteIntersection::new(r.clone(), CycleStrategy::default()).unwrap();
        let z1 = ci.cycles.as_elem(0);
        assert!(wedge(&r, &z1, &z1).is_empty());
        let a = wedge(&r, &z1, &ci.cycles.as_elem(1));
        let b = wedge(&r, &ci.cycles.as_elem(1), &z1);
        let sum: KElem = a.iter().map(|(k, p)| (k.clone(), p.add(&b.get(k).cloned().unwrap_or_else(|| r.zero())))).collect();
        assert!(sum.values().all(|p| r.reduce(p).is_zero()));
    }
}
