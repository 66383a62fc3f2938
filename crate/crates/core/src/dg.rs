//! The product on `F`: for basis elements `(v, S)` and `(v', S')`,
//! `(v, S)·(v', S') = ± Π_t C(m_t + m'_t, m_t) (v ∪ v', S ∪ S')`, where `m`
//! and `m'` are the tuple multiplicities and `±` is the wedge sign. The
//! binomial factor is the divided-power rule; without it the graded
//! Leibniz rule fails (see [`ProductRule::Literal`]).

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinat::{binomial, wedge_sign};
use crate::complex::Label;
use crate::field::Field;
use crate::poly::Polynomial;
use crate::resolution::ResolutionF;
use crate::ring::GradedRing;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProductRule {
    /// Binomial coefficients on repeated tuple entries.
    #[default]
    DividedPowers,
    /// Tuples concatenated with coefficient 1.
    Literal,
}

/// Element of `F` with coefficients in the ring.
pub type FElem = BTreeMap<Label, Polynomial>;

fn degree(l: &Label) -> usize {
    l.wedge.len() + 2 * l.tuple.len()
}

/// Multiplicities of a sorted tuple.
fn runs(t: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &x in t {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// Product of two basis labels as `(sign·coefficient, label)`, or `None`.
pub fn basis_product(a: &Label, b: &Label, rule: ProductRule) -> Option<(i64, Label)> {
    let (sign, wedge) = wedge_sign(&a.wedge, &b.wedge)?;
    let mut tuple: Vec<usize> = a.tuple.iter().chain(&b.tuple).copied().collect();
    tuple.sort_unstable();
    let coeff = match rule {
        ProductRule::Literal => 1,
        ProductRule::DividedPowers => {
            let (ma, mb) = (runs(&a.tuple), runs(&b.tuple));
            ma.iter()
                .map(|(v, &x)| {
                    let y = mb.get(v).copied().unwrap_or(0);
                    binomial((x + y) as i64, x as i64) as i64
                })
                .product()
        }
    };
    Some((sign * coeff, Label::new(vec![tuple.len()], tuple, wedge)))
}

/// `F` with its product, differential columns cached by label.
pub struct DgAlgebra<'a> {
    pub f: &'a ResolutionF,
    ring: &'a GradedRing,
    rule: ProductRule,
    columns: HashMap<Label, Vec<(Label, Polynomial)>>,
}

/// A pair (or triple) on which an identity failed, with the residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub elements: Vec<Label>,
    pub residual: String,
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.elements.iter().map(Label::to_string).collect();
        write!(f, "at ({}): residual {}", names.join(", "), self.residual)
    }
}

impl<'a> DgAlgebra<'a> {
    pub fn new(f: &'a ResolutionF, ring: &'a GradedRing, rule: ProductRule) -> Self {
        let mut columns = HashMap::new();
        for i in 0..=f.max_index {
            let m = f.complex.module(i as i64);
            let mut cols: Vec<Vec<(Label, Polynomial)>> = vec![Vec::new(); m.rank()];
            if i > 0 {
                let d = f.diff(i);
                for (r, c, p) in d.entries() {
                    cols[c].push((d.target().gen(r).label.clone(), p.clone()));
                }
            }
            for (g, col) in m.gens().iter().zip(cols) {
                columns.insert(g.label.clone(), col);
            }
        }
        DgAlgebra { f, ring, rule, columns }
    }

    fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn basis(&self, i: usize) -> Vec<Label> {
        self.f.complex.module(i as i64).gens().iter().map(|g| g.label.clone()).collect()
    }

    pub fn unit(&self) -> Label {
        Label::new(vec![0], Vec::new(), Vec::new())
    }

    fn add(&self, out: &mut FElem, l: Label, p: &Polynomial) {
        let e = out.entry(l).or_insert_with(|| Polynomial::zero(self.ring.nvars()));
        *e = e.add(p);
    }

    fn clean(&self, x: FElem) -> FElem {
        x.into_iter()
            .map(|(l, p)| (l, self.ring.reduce(&p)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    pub fn basis_elem(&self, l: &Label) -> FElem {
        FElem::from([(l.clone(), self.ring.one())])
    }

    pub fn differential(&self, x: &FElem) -> FElem {
        let mut out = FElem::new();
        for (l, p) in x {
            for (r, q) in &self.columns[l] {
                self.add(&mut out, r.clone(), &self.ring.mul(p, q));
            }
        }
        self.clean(out)
    }

    pub fn product(&self, x: &FElem, y: &FElem) -> FElem {
        let mut out = FElem::new();
        for (a, p) in x {
            for (b, q) in y {
                if let Some((s, l)) = basis_product(a, b, self.rule) {
                    let coeff = self.ring.mul(p, q).scale(&self.field().from_i64(s));
                    self.add(&mut out, l, &coeff);
                }
            }
        }
        self.clean(out)
    }

    fn sub(&self, x: &FElem, y: &FElem) -> FElem {
        let mut out = x.clone();
        for (l, p) in y {
            self.add(&mut out, l.clone(), &p.neg());
        }
        self.clean(out)
    }

    fn scale_sign(&self, x: &FElem, s: i64) -> FElem {
        if s > 0 {
            x.clone()
        } else {
            x.iter().map(|(l, p)| (l.clone(), p.neg())).collect()
        }
    }

    fn show(&self, x: &FElem) -> String {
        let terms: Vec<String> = x.iter().map(|(l, p)| format!("({})·[{l}]", self.ring.fmt(p))).collect();
        terms.join(" + ")
    }

    /// `∂(ab) - ∂(a)b - (-1)^i a∂(b)`.
    pub fn leibniz_defect(&self, a: &Label, b: &Label) -> FElem {
        let (x, y) = (self.basis_elem(a), self.basis_elem(b));
        let lhs = self.differential(&self.product(&x, &y));
        let s = if degree(a).is_multiple_of(2) { 1 } else { -1 };
        let rhs1 = self.product(&self.differential(&x), &y);
        let rhs2 = self.scale_sign(&self.product(&x, &self.differential(&y)), s);
        self.sub(&self.sub(&lhs, &rhs1), &rhs2)
    }

    pub fn verify_leibniz(&self, pairs: &[(Label, Label)]) -> Result<(), Residual> {
        let bad = pairs.par_iter().find_first(|(a, b)| !self.leibniz_defect(a, b).is_empty());
        match bad {
            None => Ok(()),
            Some((a, b)) => Err(Residual {
                elements: vec![a.clone(), b.clone()],
                residual: self.show(&self.leibniz_defect(a, b)),
            }),
        }
    }

    /// `ab = (-1)^{ii'} ba`.
    pub fn verify_commutative(&self, pairs: &[(Label, Label)]) -> Result<(), Residual> {
        let defect = |a: &Label, b: &Label| {
            let (x, y) = (self.basis_elem(a), self.basis_elem(b));
            let s = if (degree(a) * degree(b)).is_multiple_of(2) { 1 } else { -1 };
            self.sub(&self.product(&x, &y), &self.scale_sign(&self.product(&y, &x), s))
        };
        match pairs.par_iter().find_first(|(a, b)| !defect(a, b).is_empty()) {
            None => Ok(()),
            Some((a, b)) => Err(Residual { elements: vec![a.clone(), b.clone()], residual: self.show(&defect(a, b)) }),
        }
    }

    /// `(ab)c = a(bc)`.
    pub fn verify_associative(&self, triples: &[(Label, Label, Label)]) -> Result<(), Residual> {
        let defect = |a: &Label, b: &Label, c: &Label| {
            let (x, y, z) = (self.basis_elem(a), self.basis_elem(b), self.basis_elem(c));
            self.sub(&self.product(&self.product(&x, &y), &z), &self.product(&x, &self.product(&y, &z)))
        };
        match triples.par_iter().find_first(|(a, b, c)| !defect(a, b, c).is_empty()) {
            None => Ok(()),
            Some((a, b, c)) => Err(Residual {
                elements: vec![a.clone(), b.clone(), c.clone()],
                residual: self.show(&defect(a, b, c)),
            }),
        }
    }

    /// Every basis pair with `i + i' ≤ total`.
    pub fn pairs_up_to(&self, total: usize) -> Vec<(Label, Label)> {
        let total = total.min(self.f.max_index);
        let mut out = Vec::new();
        for i in 0..=total {
            for i2 in 0..=total - i {
                for a in self.basis(i) {
                    for b in self.basis(i2) {
                        out.push((a.clone(), b));
                    }
                }
            }
        }
        out
    }

    fn random_with_total(&self, rng: &mut ChaCha8Rng, parts: usize, total: usize) -> Option<Vec<Label>> {
        let mut degrees = vec![0; parts];
        for _ in 0..total {
            degrees[rng.gen_range(0..parts)] += 1;
        }
        degrees.iter().map(|&i| self.basis(i).choose(rng).cloned()).collect()
    }

    /// `count` random pairs with `lo ≤ i + i' ≤ i_max`, from a fixed seed.
    pub fn random_pairs(&self, count: usize, lo: usize, seed: u64) -> Vec<(Label, Label)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hi = self.f.max_index;
        let mut out = Vec::with_capacity(count);
        while out.len() < count && lo <= hi {
            let total = rng.gen_range(lo..=hi);
            if let Some(v) = self.random_with_total(&mut rng, 2, total) {
                out.push((v[0].clone(), v[1].clone()));
            }
        }
        out
    }

    /// `count` random triples with total degree `≤ i_max`.
    pub fn random_triples(&self, count: usize, seed: u64) -> Vec<(Label, Label, Label)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let total = rng.gen_range(0..=self.f.max_index);
            if let Some(v) = self.random_with_total(&mut rng, 3, total) {
                out.push((v[0].clone(), v[1].clone(), v[2].clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{CompleteIntersection, CycleStrategy};
    use crate::ring::Config;
    use std::sync::Arc;

    fn setup(text: &str, i_max: usize) -> (CompleteIntersection, ResolutionF) {
        let r = Arc::new(GradedRing::parse(text, Config::default()).unwrap());
        let ci = CompleteIntersection::new(r, CycleStrategy::default()).unwrap();
        let f = ResolutionF::assemble(&ci, i_max).unwrap();
        (ci, f)
    }

    fn l(tuple: &[usize], wedge: &[usize]) -> Label {
        Label::new(vec![tuple.len()], tuple.to_vec(), wedge.to_vec())
    }

    #[test]
    fn products_of_basis_elements() {
        let r = ProductRule::DividedPowers;
        assert_eq!(basis_product(&l(&[], &[0]), &l(&[], &[1]), r), Some((1, l(&[], &[0, 1]))));
        assert_eq!(basis_product(&l(&[], &[1]), &l(&[], &[0]), r), Some((-1, l(&[], &[0, 1]))));
        assert_eq!(basis_product(&l(&[], &[0]), &l(&[], &[0]), r), None);
        assert_eq!(basis_product(&l(&[0], &[]), &l(&[1], &[2]), r), Some((1, l(&[0, 1], &[2]))));
        assert_eq!(basis_product(&l(&[0], &[]), &l(&[0], &[]), r), Some((2, l(&[0, 0], &[]))));
        assert_eq!(basis_product(&l(&[0], &[]), &l(&[0], &[]), ProductRule::Literal), Some((1, l(&[0, 0], &[]))));
    }

    #[test]
    fn unit_acts_trivially() {
        let (ci, f) = setup("vars x,y,z\ngen x^2\ngen y^2+z^2\n", 4);
        let dg = DgAlgebra::new(&f, ci.ring(), ProductRule::default());
        let one = dg.basis_elem(&dg.unit());
        assert!(dg.differential(&one).is_empty());
        for b in dg.basis(3) {
            let x = dg.basis_elem(&b);
            assert_eq!(dg.product(&one, &x), x);
            assert_eq!(dg.differential(&dg.product(&one, &x)), dg.differential(&x));
        }
    }

    #[test]
    fn leibniz_on_small_pairs() {
        let (ci, f) = setup("vars x,y,z\ngen x^2\ngen y^2+z^2\n", 5);
        let dg = DgAlgebra::new(&f, ci.ring(), ProductRule::default());
        let pairs = dg.pairs_up_to(5);
        dg.verify_leibniz(&pairs).unwrap();
        dg.verify_commutative(&pairs).unwrap();
        dg.verify_associative(&dg.random_triples(50, 7)).unwrap();
    }

    #[test]
    fn literal_rule_breaks_leibniz() {
        let (ci, f) = setup("vars x,y,z\ngen x^2\ngen y^2+z^2\n", 4);
        let dg = DgAlgebra::new(&f, ci.ring(), ProductRule::Literal);
        let a = l(&[0], &[]);
        let err = dg.verify_leibniz(&[(a.clone(), a.clone())]).unwrap_err();
        assert_eq!(err.elements, vec![a.clone(), a]);
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let (ci, f) = setup("vars x,y,z\ngen x^2\ngen y^2+z^2\n", 8);
        let dg = DgAlgebra::new(&f, ci.ring(), ProductRule::default());
        let p = dg.random_pairs(30, 7, 1);
        assert_eq!(p, dg.random_pairs(30, 7, 1));
        assert!(p.iter().all(|(a, b)| (7..=8).contains(&(degree(a) + degree(b)))));
    }
}
