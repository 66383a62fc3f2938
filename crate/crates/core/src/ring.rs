//! Standard-graded quotient rings `k[x1..xn]/I` with degree-wise normal forms.
//!
//! For each degree `d` the products `m * g_t` of degree `d` are row reduced
//! with monomials listed largest first, so every pivot eliminates the largest
//! monomial of its row. The non-pivot monomials form the standard basis of
//! `(Q/I)_d` and each pivot monomial is rewritten in terms of them.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;
use crate::parse::{self, RingFile};
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Truncation degree for every per-degree computation exposed to users.
    pub max_degree: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_degree: DEFAULT_MAX_DEGREE }
    }
}

/// Normal-form data for a single degree.
#[derive(Debug)]
pub struct DegreePiece {
    pub degree: usize,
    /// All monomials of this degree, largest first.
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Indices (into `monomials`) of the standard monomials, in order.
    pub standard: Vec<usize>,
    /// For each monomial, its normal form as (standard position, coefficient).
    reduction: Vec<Vec<(usize, Scalar)>>,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn standard_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.standard.iter().map(|&i| &self.monomials[i])
    }

    pub fn standard_monomial(&self, pos: usize) -> &Monomial {
        &self.monomials[self.standard[pos]]
    }

    /// Normal form of a single monomial of this degree.
    pub fn reduce_monomial(&self, m: &Monomial) -> &[(usize, Scalar)] {
        &self.reduction[self.index[m]]
    }

    /// Dense coordinates of `f` (homogeneous of this degree) on the standard basis.
    pub fn coordinates(&self, f: &Polynomial, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim()];
        self.accumulate(f, &field.one(), &mut out);
        out
    }

    /// Adds `scale * NF(f)` to the dense coordinate vector `out`.
    pub fn accumulate(&self, f: &Polynomial, scale: &Scalar, out: &mut [Scalar]) {
        for (m, c) in f.terms() {
            let c = c * scale;
            for (pos, a) in self.reduce_monomial(m) {
                out[*pos] += &(&c * a);
            }
        }
    }

    pub fn from_coordinates(&self, coords: &[Scalar]) -> Polynomial {
        let nvars = self.monomials.first().map_or(0, Monomial::nvars);
        Polynomial::from_terms(
            nvars,
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (self.standard_monomial(i).clone(), c.clone())),
        )
    }
}

/// `Q/I` for a homogeneous ideal `I` generated in degrees at least 2.
#[derive(Debug)]
pub struct GradedRing {
    field: Field,
    vars: Vec<String>,
    generators: Vec<Polynomial>,
    degrees: Vec<usize>,
    config: Config,
    cache: RwLock<HashMap<usize, Arc<DegreePiece>>>,
}

impl GradedRing {
    pub fn new(field: Field, vars: Vec<String>, generators: Vec<Polynomial>, config: Config) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Invalid("a ring needs at least one variable".into()));
        }
        let mut degrees = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.nvars() != vars.len() {
                return Err(Error::ShapeMismatch(format!(
                    "generator {} has {} variables, ring has {}",
                    i + 1,
                    g.nvars(),
                    vars.len()
                )));
            }
            if g.terms().any(|(_, c)| c.field() != field) {
                return Err(Error::Invalid(format!("generator {} has coefficients outside {field}", i + 1)));
            }
            if g.is_zero() {
                return Err(Error::GeneratorDegree { index: i + 1, degree: 0 });
            }
            let d = g
                .homogeneous_degree()
                .ok_or_else(|| Error::NonHomogeneous(g.fmt_with(&vars)))?;
            if d < 2 {
                return Err(Error::GeneratorDegree { index: i + 1, degree: d });
            }
            degrees.push(d);
        }
        Ok(GradedRing { field, vars, generators, degrees, config, cache: RwLock::default() })
    }

    pub fn from_file(file: RingFile, config: Config) -> Result<Self> {
        Self::new(file.field, file.vars, file.generators, config)
    }

    pub fn parse(text: &str, config: Config) -> Result<Self> {
        Self::from_file(parse::parse_ring_file(text)?, config)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn max_degree(&self) -> usize {
        self.config.max_degree
    }

    /// Same ring with a different field-independent configuration.
    pub fn with_config(&self, config: Config) -> GradedRing {
        GradedRing {
            field: self.field,
            vars: self.vars.clone(),
            generators: self.generators.clone(),
            degrees: self.degrees.clone(),
            config,
            cache: RwLock::default(),
        }
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial> {
        parse::parse_polynomial(text, &self.vars, self.field)
    }

    pub fn fmt(&self, f: &Polynomial) -> String {
        f.fmt_with(&self.vars)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::constant(self.nvars(), self.field.one())
    }

    pub fn scalar(&self, c: i64) -> Polynomial {
        Polynomial::constant(self.nvars(), self.field.from_i64(c))
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i, self.field)
    }

    /// Normal-form data for degree `d`, built on first use. Not truncated:
    /// internal callers may need pieces past the user-facing bound.
    pub fn piece(&self, d: usize) -> Arc<DegreePiece> {
        if let Some(p) = self.cache.read().expect("cache lock").get(&d) {
            return p.clone();
        }
        let built = Arc::new(self.build_piece(d));
        self.cache
            .write()
            .expect("cache lock")
            .entry(d)
            .or_insert(built)
            .clone()
    }

    fn build_piece(&self, d: usize) -> DegreePiece {
        let n = self.nvars();
        let monomials = Monomial::all_of_degree(n, d);
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for (g, &dg) in self.generators.iter().zip(&self.degrees) {
            if dg > d {
                continue;
            }
            for m in Monomial::all_of_degree(n, d - dg) {
                let mut row = vec![self.field.zero(); monomials.len()];
                for (t, c) in g.mul_monomial(&m).terms() {
                    row[index[t]] = c.clone();
                }
                rows.push(row);
            }
        }
        let mut mat = Matrix::from_rows(self.field, monomials.len(), rows);
        let pivots = mat.rref_in_place();
        let mut is_pivot = vec![false; monomials.len()];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let standard: Vec<usize> = (0..monomials.len()).filter(|&i| !is_pivot[i]).collect();
        let mut std_pos = vec![usize::MAX; monomials.len()];
        for (pos, &i) in standard.iter().enumerate() {
            std_pos[i] = pos;
        }
        let mut reduction: Vec<Vec<(usize, Scalar)>> = (0..monomials.len())
            .map(|i| {
                if is_pivot[i] {
                    Vec::new()
                } else {
                    vec![(std_pos[i], self.field.one())]
                }
            })
            .collect();
        for (r, &p) in pivots.iter().enumerate() {
            reduction[p] = standard
                .iter()
                .filter_map(|&q| {
                    let c = mat.get(r, q);
                    (!c.is_zero()).then(|| (std_pos[q], -c))
                })
                .collect();
        }
        DegreePiece { degree: d, monomials, index, standard, reduction }
    }

    /// Standard-monomial basis of `(Q/I)_d`.
    pub fn basis(&self, d: usize) -> Result<Vec<Monomial>> {
        self.check_degree(d)?;
        Ok(self.piece(d).standard_monomials().cloned().collect())
    }

    pub fn hilbert(&self, d: usize) -> Result<usize> {
        self.check_degree(d)?;
        Ok(self.piece(d).dim())
    }

    pub fn check_degree(&self, d: usize) -> Result<()> {
        if d > self.config.max_degree {
            Err(Error::Truncated { degree: d, max: self.config.max_degree })
        } else {
            Ok(())
        }
    }

    /// Unique representative of `f + I` in the span of standard monomials.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.is_zero() {
            return Ok(f.clone());
        }
        let d = f.homogeneous_degree().ok_or_else(|| Error::NonHomogeneous(self.fmt(f)))?;
        Ok(self.nf_of_degree(f, d))
    }

    /// Normal form of an arbitrary polynomial, reducing each homogeneous part.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let mut parts: std::collections::BTreeMap<usize, Polynomial> = Default::default();
        for (m, c) in f.terms() {
            parts
                .entry(m.degree())
                .or_insert_with(|| self.zero())
                .add_term(m.clone(), c);
        }
        let mut out = self.zero();
        for (d, p) in parts {
            out = out.add(&self.nf_of_degree(&p, d));
        }
        out
    }

    fn nf_of_degree(&self, f: &Polynomial, d: usize) -> Polynomial {
        let piece = self.piece(d);
        piece.from_coordinates(&piece.coordinates(f, self.field))
    }

    /// Product in `Q/I`, returned in normal form.
    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&a.mul(b))
    }

    pub fn is_zero_in_ring(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex45() -> GradedRing {
        GradedRing::parse("field rational\nvars x,y,z\ngen x^2\ngen y^2+z^2\n", Config::default()).unwrap()
    }

    fn ex47() -> GradedRing {
        GradedRing::parse("vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n", Config::default()).unwrap()
    }

    #[test]
    fn generators_reduce_to_zero() {
        let r = ex45();
        assert!(r.normal_form(&r.parse_poly("x^2").unwrap()).unwrap().is_zero());
        let r = ex47();
        assert!(r.normal_form(&r.parse_poly("x*z").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn pinned_echelon_convention() {
        let r = ex45();
        let z2 = r.parse_poly("z^2").unwrap();
        assert_eq!(r.normal_form(&z2).unwrap(), z2);
        let y2 = r.parse_poly("y^2").unwrap();
        assert_eq!(r.fmt(&r.normal_form(&y2).unwrap()), "-z^2");
        let b: Vec<_> = r.basis(2).unwrap().iter().map(|m| m.fmt_with(r.vars())).collect();
        assert_eq!(b, ["x*y", "x*z", "y*z", "z^2"]);
        assert_eq!(r.basis(0).unwrap().len(), 1);
        assert_eq!(r.basis(1).unwrap().len(), 3);
    }

    #[test]
    fn input_validation() {
        let c = Config::default();
        assert!(matches!(
            GradedRing::parse("vars x,y\ngen x^2+y\n", c),
            Err(Error::NonHomogeneous(_))
        ));
        assert!(matches!(
            GradedRing::parse("vars x,y\ngen x+y\n", c),
            Err(Error::GeneratorDegree { index: 1, degree: 1 })
        ));
        let r = ex45();
        assert!(matches!(r.normal_form(&r.parse_poly("x+y^2").unwrap()), Err(Error::NonHomogeneous(_))));
        assert!(matches!(r.basis(17), Err(Error::Truncated { degree: 17, max: 16 })));
    }

    /// Coefficients of prod(1 - t^d) / (1 - t)^n, computed by series division.
    fn ci_hilbert_series(n: usize, degrees: &[usize], upto: usize) -> Vec<i64> {
        let mut s = vec![0i64; upto + 1];
        s[0] = 1;
        for &d in degrees {
            for i in (d..=upto).rev() {
                s[i] -= s[i - d];
            }
        }
        for _ in 0..n {
            for i in 1..=upto {
                s[i] += s[i - 1];
            }
        }
        s
    }

    #[test]
    fn hilbert_series_of_complete_intersections() {
        for r in [ex45(), ex47()] {
            let expect = ci_hilbert_series(3, r.generator_degrees(), 16);
            for d in 0..=16 {
                let n_mon = Monomial::all_of_degree(3, d).len();
                let h = r.hilbert(d).unwrap();
                assert_eq!(h as i64, expect[d], "degree {d}");
                assert!(h <= n_mon);
            }
        }
    }

    fn arb_form(d: u32) -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
        proptest::collection::vec((0..=d, 0..=d, -4i64..5), 1..5)
            .prop_map(move |v| v.into_iter().filter(|(a, b, _)| a + b <= d).collect())
    }

    fn build(r: &GradedRing, d: u32, terms: &[(u32, u32, i64)]) -> Polynomial {
        Polynomial::from_terms(
            3,
            terms
                .iter()
                .map(|&(a, b, k)| (Monomial::new(vec![a, b, d - a - b]), r.field().from_i64(k))),
        )
    }

    proptest! {
        #[test]
        fn normal_form_properties(f in arb_form(3), g in arb_form(2)) {
            for r in [ex45(), ex47()] {
                let f = build(&r, 3, &f);
                let g = build(&r, 2, &g);
                let nf = r.normal_form(&f).unwrap();
                prop_assert_eq!(r.normal_form(&nf).unwrap(), nf.clone());
                let lhs = r.normal_form(&f.mul(&g)).unwrap();
                let rhs = r.normal_form(&nf.mul(&r.normal_form(&g).unwrap())).unwrap();
                prop_assert_eq!(lhs, rhs);
                let sum = r.normal_form(&f.add(&f.mul_monomial(&Monomial::one(3)))).unwrap();
                prop_assert_eq!(sum, nf.add(&nf));
            }
        }
    }
}
