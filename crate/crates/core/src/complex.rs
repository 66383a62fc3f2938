//! Graded free modules, polynomial-matrix maps, chain complexes, and their
//! shift, direct sum and mapping cone, with homology computed strand by strand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::GradedRing;

/// Structured generator tag: component path, tuple and wedge subset.
///
/// Tuple and wedge entries are 0-based and print 1-based; path entries
/// print as stored. Text form is `path:tuple:wedge` with `.` between list
/// items and `-` for an empty list, e.g. `1:1:2.3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub path: Vec<usize>,
    pub tuple: Vec<usize>,
    pub wedge: Vec<usize>,
}

impl Label {
    pub fn new(path: Vec<usize>, tuple: Vec<usize>, wedge: Vec<usize>) -> Self {
        Label { path, tuple, wedge }
    }

    pub fn wedge(wedge: Vec<usize>) -> Self {
        Label { wedge, ..Default::default() }
    }
}

fn fmt_list(v: &[usize], offset: usize) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(|x| (x + offset).to_string()).collect::<Vec<_>>().join(".")
    }
}

fn parse_list(s: &str, offset: usize) -> Result<Vec<usize>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|x| {
            x.parse::<usize>()
                .ok()
                .and_then(|v| v.checked_sub(offset))
                .ok_or_else(|| Error::Invalid(format!("bad label component `{s}`")))
        })
        .collect()
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", fmt_list(&self.path, 0), fmt_list(&self.tuple, 1), fmt_list(&self.wedge, 1))
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!("bad label `{s}`")));
        }
        Ok(Label {
            path: parse_list(parts[0], 0)?,
            tuple: parse_list(parts[1], 1)?,
            wedge: parse_list(parts[2], 1)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: Label,
    /// Internal degree.
    pub twist: i64,
}

/// Free module with an ordered list of uniquely labeled generators.
#[derive(Clone, Debug, Default)]
pub struct FreeModule {
    gens: Vec<Generator>,
    index: HashMap<Label, usize>,
}

impl PartialEq for FreeModule {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl FreeModule {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.label.clone(), i).is_some() {
                return Err(Error::LabelClash(g.label.to_string()));
            }
        }
        Ok(FreeModule { gens, index })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `self ⊕ other`, generators of `self` first.
    pub fn direct_sum(&self, other: &FreeModule) -> Result<FreeModule> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        FreeModule::new(gens)
    }

    pub fn map_labels(&self, f: impl Fn(&Label) -> Label) -> Result<FreeModule> {
        FreeModule::new(
            self.gens
                .iter()
                .map(|g| Generator { label: f(&g.label), twist: g.twist })
                .collect(),
        )
    }
}

/// Matrix of polynomials from `source` to `target`, stored sparsely by
/// `(row, col)` with rows indexing target generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    source: FreeModule,
    target: FreeModule,
    nvars: usize,
    entries: BTreeMap<(usize, usize), Polynomial>,
}

impl GradedMap {
    pub fn zero(source: FreeModule, target: FreeModule, nvars: usize) -> Self {
        GradedMap { source, target, nvars, entries: BTreeMap::new() }
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.target.rank(), self.source.rank())
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Polynomial> {
        self.entries.get(&(row, col))
    }

    pub fn entry(&self, row: usize, col: usize) -> Polynomial {
        self.get(row, col).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn set(&mut self, row: usize, col: usize, p: Polynomial) {
        assert!(row < self.target.rank() && col < self.source.rank(), "entry out of range");
        if p.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), p);
        }
    }

    pub fn add_entry(&mut self, row: usize, col: usize, p: &Polynomial) {
        let sum = self.entry(row, col).add(p);
        self.set(row, col, sum);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries.iter().map(|(&(r, c), p)| (r, c, p))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn neg(&self) -> GradedMap {
        self.scale_sign(-1)
    }

    pub fn scale_sign(&self, sign: i64) -> GradedMap {
        let mut out = self.clone();
        if sign < 0 {
            for p in out.entries.values_mut() {
                *p = p.neg();
            }
        }
        out
    }

    pub fn with_modules(&self, source: FreeModule, target: FreeModule) -> Result<GradedMap> {
        if source.rank() != self.source.rank() || target.rank() != self.target.rank() {
            return Err(Error::ShapeMismatch("relabeling changes ranks".into()));
        }
        Ok(GradedMap { source, target, nvars: self.nvars, entries: self.entries.clone() })
    }

    /// All entries replaced by their normal forms; zero entries dropped.
    pub fn reduced(&self, ring: &GradedRing) -> GradedMap {
        let mut out = GradedMap::zero(self.source.clone(), self.target.clone(), self.nvars);
        for (&(r, c), p) in &self.entries {
            out.set(r, c, ring.reduce(p));
        }
        out
    }

    /// `self ∘ other`, reduced in `ring`.
    pub fn compose(&self, other: &GradedMap, ring: &GradedRing) -> Result<GradedMap> {
        if other.target.rank() != self.source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.target.rank(),
                self.source.rank(),
                other.target.rank(),
                other.source.rank()
            )));
        }
        let mut by_col: HashMap<usize, Vec<(usize, &Polynomial)>> = HashMap::new();
        for (&(r, c), p) in &self.entries {
            by_col.entry(c).or_default().push((r, p));
        }
        let mut acc: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
        for (&(k, c), q) in &other.entries {
            if let Some(col) = by_col.get(&k) {
                for &(r, p) in col {
                    let e = acc.entry((r, c)).or_insert_with(|| Polynomial::zero(self.nvars));
                    *e = e.add(&p.mul(q));
                }
            }
        }
        let mut out = GradedMap::zero(other.source.clone(), self.target.clone(), self.nvars);
        for ((r, c), p) in acc {
            out.set(r, c, ring.reduce(&p));
        }
        Ok(out)
    }

    /// `self - other`, reduced.
    pub fn sub(&self, other: &GradedMap, ring: &GradedRing) -> Result<GradedMap> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("difference of maps with different shapes".into()));
        }
        let mut out = self.clone();
        for (&(r, c), p) in &other.entries {
            out.add_entry(r, c, &p.neg());
        }
        Ok(out.reduced(ring))
    }

    /// First entry violating `deg entry = twist(source) - twist(target)`.
    pub fn homogeneity_violation(&self, ring: &GradedRing) -> Option<(usize, usize)> {
        self.entries.iter().find_map(|(&(r, c), p)| {
            let p = ring.reduce(p);
            let want = self.source.gen(c).twist - self.target.gen(r).twist;
            let ok = want >= 0 && p.is_homogeneous_of(want as usize);
            (!ok).then_some((r, c))
        })
    }

    /// True if no entry has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.entries.values().all(|p| p.constant_term().is_none())
    }

    /// Matrix of the degree-`d` strand over the field.
    pub fn strand(&self, d: i64, ring: &GradedRing) -> Matrix {
        let src = StrandBasis::new(&self.source, d, ring);
        let tgt = StrandBasis::new(&self.target, d, ring);
        let field = ring.field();
        let mut m = Matrix::zeros(field, tgt.dim, src.dim);
        let mut by_col: HashMap<usize, Vec<(usize, &Polynomial)>> = HashMap::new();
        for (&(r, c), p) in &self.entries {
            by_col.entry(c).or_default().push((r, p));
        }
        for (c, entries) in by_col {
            let Some(src_start) = src.offset[c] else { continue };
            let src_piece = ring.piece((d - self.source.gen(c).twist) as usize);
            for (k, mono) in src_piece.standard_monomials().enumerate() {
                for &(r, p) in &entries {
                    let Some(tgt_start) = tgt.offset[r] else { continue };
                    let td = (d - self.target.gen(r).twist) as usize;
                    let piece = ring.piece(td);
                    let prod = p.mul_monomial(mono);
                    for (t, a) in prod.terms() {
                        if t.degree() != td {
                            continue;
                        }
                        for (pos, b) in piece.reduce_monomial(t) {
                            m.add_to(tgt_start + pos, src_start + k, &(a * b));
                        }
                    }
                }
            }
        }
        m
    }
}

/// Field basis of the degree-`d` part of a graded free module: for each
/// generator, the standard monomials of degree `d - twist`.
#[derive(Clone, Debug)]
pub struct StrandBasis {
    pub offset: Vec<Option<usize>>,
    pub dim: usize,
}

impl StrandBasis {
    pub fn new(module: &FreeModule, d: i64, ring: &GradedRing) -> Self {
        let mut offset = Vec::with_capacity(module.rank());
        let mut dim = 0;
        for g in module.gens() {
            let e = d - g.twist;
            if e < 0 {
                offset.push(None);
                continue;
            }
            let n = ring.piece(e as usize).dim();
            offset.push(if n > 0 { Some(dim) } else { None });
            dim += n;
        }
        StrandBasis { offset, dim }
    }
}

/// Location of a failed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub degree: i64,
    pub row: Label,
    pub col: Label,
    pub value: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "homological degree {}, entry [{}, {}] = {}", self.degree, self.row, self.col, self.value)
    }
}

fn first_nonzero(m: &GradedMap, degree: i64, ring: &GradedRing) -> Option<Witness> {
    m.entries().next().map(|(r, c, p)| Witness {
        degree,
        row: m.target().gen(r).label.clone(),
        col: m.source().gen(c).label.clone(),
        value: ring.fmt(p),
    })
}

/// Bounded complex of graded free modules; `diff(i)` maps degree `i` to `i-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    nvars: usize,
    modules: BTreeMap<i64, FreeModule>,
    diffs: BTreeMap<i64, GradedMap>,
}

impl ChainComplex {
    pub fn new(nvars: usize) -> Self {
        ChainComplex { nvars, modules: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_module(&mut self, i: i64, m: FreeModule) {
        if m.rank() == 0 {
            self.modules.remove(&i);
        } else {
            self.modules.insert(i, m);
        }
    }

    /// Installs `∂_i`; its source and target become the modules at `i` and `i-1`.
    pub fn set_diff(&mut self, i: i64, d: GradedMap) -> Result<()> {
        if d.source().rank() != self.module(i).rank() || d.target().rank() != self.module(i - 1).rank() {
            return Err(Error::ShapeMismatch(format!("differential at {i} has the wrong shape")));
        }
        if !d.is_zero() {
            self.diffs.insert(i, d);
        } else {
            self.diffs.remove(&i);
        }
        Ok(())
    }

    pub fn module(&self, i: i64) -> FreeModule {
        self.modules.get(&i).cloned().unwrap_or_default()
    }

    pub fn module_ref(&self, i: i64) -> Option<&FreeModule> {
        self.modules.get(&i)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.modules.get(&i).map_or(0, FreeModule::rank)
    }

    pub fn diff(&self, i: i64) -> GradedMap {
        match self.diffs.get(&i) {
            Some(d) => d.clone(),
            None => GradedMap::zero(self.module(i), self.module(i - 1), self.nvars),
        }
    }

    pub fn diff_ref(&self, i: i64) -> Option<&GradedMap> {
        self.diffs.get(&i)
    }

    /// Lowest and highest degrees with a nonzero module.
    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.modules.keys().next()?, *self.modules.keys().next_back()?))
    }

    /// `∂_{i-1} ∘ ∂_i = 0` for all `i`, with the first nonzero entry otherwise.
    pub fn compose_check(&self, ring: &GradedRing) -> Result<(), Witness> {
        let Some((lo, hi)) = self.range() else { return Ok(()) };
        for i in lo + 2..=hi {
            let (Some(a), Some(b)) = (self.diffs.get(&(i - 1)), self.diffs.get(&i)) else {
                continue;
            };
            let sq = a.compose(b, ring).expect("consecutive differentials compose");
            if let Some(w) = first_nonzero(&sq, i, ring) {
                return Err(w);
            }
        }
        Ok(())
    }

    /// `Σ^s`: modules move up by `s`, differentials pick up `(-1)^s`.
    pub fn shift(&self, s: i64) -> ChainComplex {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        ChainComplex {
            nvars: self.nvars,
            modules: self.modules.iter().map(|(&i, m)| (i + s, m.clone())).collect(),
            diffs: self.diffs.iter().map(|(&i, d)| (i + s, d.scale_sign(sign))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        let mut out = ChainComplex::new(self.nvars);
        let degrees: std::collections::BTreeSet<i64> =
            self.modules.keys().chain(other.modules.keys()).copied().collect();
        for &i in &degrees {
            out.set_module(i, self.module(i).direct_sum(&other.module(i))?);
        }
        for &i in &degrees {
            let (a, b) = (self.diff(i), other.diff(i));
            let mut d = GradedMap::zero(out.module(i), out.module(i - 1), self.nvars);
            for (r, c, p) in a.entries() {
                d.set(r, c, p.clone());
            }
            let (ro, co) = (a.target().rank(), a.source().rank());
            for (r, c, p) in b.entries() {
                d.set(ro + r, co + c, p.clone());
            }
            out.set_diff(i, d)?;
        }
        Ok(out)
    }

    /// Per internal degree `d ≤ max_degree` and homological `i` in `lo..=hi`:
    /// `dim ker ∂_i - dim im ∂_{i+1}` on the degree-`d` strand.
    pub fn homology(&self, ring: &GradedRing, lo: i64, hi: i64, max_degree: usize) -> HomologyTable {
        let cells: Vec<(i64, usize, usize)> = (0..=max_degree)
            .into_par_iter()
            .flat_map_iter(|d| {
                let ranks: BTreeMap<i64, usize> = (lo..=hi + 1)
                    .map(|i| (i, self.diff(i).strand(d as i64, ring).rank()))
                    .collect();
                (lo..=hi)
                    .map(|i| {
                        let dim = StrandBasis::new(&self.module(i), d as i64, ring).dim;
                        (i, d, dim - ranks[&i] - ranks[&(i + 1)])
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        HomologyTable {
            dims: cells.into_iter().map(|(i, d, h)| ((i, d), h)).collect(),
            max_degree,
        }
    }

    /// Homology over the full stored range.
    pub fn homology_all(&self, ring: &GradedRing, max_degree: usize) -> HomologyTable {
        match self.range() {
            Some((lo, hi)) => self.homology(ring, lo, hi, max_degree),
            None => HomologyTable { dims: BTreeMap::new(), max_degree },
        }
    }

    /// Field basis of cycles in degree `(i, d)`, as strand coordinates.
    pub fn cycles(&self, ring: &GradedRing, i: i64, d: i64) -> Vec<Vec<crate::field::Scalar>> {
        self.diff(i).strand(d, ring).kernel()
    }

    /// Strand matrix whose columns span the boundaries in degree `(i, d)`.
    pub fn boundaries(&self, ring: &GradedRing, i: i64, d: i64) -> Matrix {
        self.diff(i + 1).strand(d, ring)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub dims: BTreeMap<(i64, usize), usize>,
    pub max_degree: usize,
}

impl HomologyTable {
    pub fn get(&self, i: i64, d: usize) -> usize {
        self.dims.get(&(i, d)).copied().unwrap_or(0)
    }

    /// Sum over internal degrees `≤ max_degree`.
    pub fn total(&self, i: i64) -> usize {
        self.dims.iter().filter(|((j, _), _)| *j == i).map(|(_, h)| h).sum()
    }
}

/// Degree-preserving map of complexes: one component `f_i: C_i → D_i` per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub components: BTreeMap<i64, GradedMap>,
}

impl ChainMap {
    pub fn component(&self, i: i64, source: &ChainComplex, target: &ChainComplex) -> GradedMap {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(source.module(i), target.module(i), source.nvars()))
    }

    /// `(Σ^s f)_i = f_{i-s}`; no sign.
    pub fn shift(&self, s: i64) -> ChainMap {
        ChainMap { components: self.components.iter().map(|(&i, f)| (i + s, f.clone())).collect() }
    }

    /// Checks `∂^D_i f_i = f_{i-1} ∂^C_i` in every degree.
    pub fn verify(&self, source: &ChainComplex, target: &ChainComplex, ring: &GradedRing) -> Result<(), Witness> {
        let degrees: std::collections::BTreeSet<i64> = source
            .modules
            .keys()
            .chain(target.modules.keys())
            .flat_map(|&i| [i, i + 1])
            .collect();
        for i in degrees {
            let f_i = self.component(i, source, target);
            let f_im1 = self.component(i - 1, source, target);
            let lhs = target.diff(i).compose(&f_i, ring).expect("shapes");
            let rhs = f_im1.compose(&source.diff(i), ring).expect("shapes");
            let diff = lhs.sub(&rhs, ring).expect("shapes");
            if let Some(w) = first_nonzero(&diff, i, ring) {
                return Err(w);
            }
        }
        Ok(())
    }
}

/// `Cone(ψ)_i = C_{i-1} ⊕ D_i` with differential `[[-∂^C, 0], [ψ, ∂^D]]`.
///
/// Fails with a located witness unless `ψ` is a chain map.
pub fn mapping_cone(
    source: &ChainComplex,
    target: &ChainComplex,
    psi: &ChainMap,
    ring: &GradedRing,
) -> Result<ChainComplex> {
    psi.verify(source, target, ring)
        .map_err(|w| Error::NotChainMap(w.to_string()))?;
    let nvars = source.nvars;
    let mut out = ChainComplex::new(nvars);
    let mut degrees: std::collections::BTreeSet<i64> = target.modules.keys().copied().collect();
    degrees.extend(source.modules.keys().map(|i| i + 1));
    for &i in &degrees {
        out.set_module(i, source.module(i - 1).direct_sum(&target.module(i))?);
    }
    for &i in &degrees {
        let mut d = GradedMap::zero(out.module(i), out.module(i - 1), nvars);
        let dc = source.diff(i - 1);
        let dd = target.diff(i);
        let p = psi.component(i - 1, source, target);
        let c_tgt = source.rank(i - 2);
        let c_src = source.rank(i - 1);
        for (r, c, e) in dc.entries() {
            d.set(r, c, e.neg());
        }
        for (r, c, e) in p.entries() {
            d.set(c_tgt + r, c, e.clone());
        }
        for (r, c, e) in dd.entries() {
            d.set(c_tgt + r, c_src + c, e.clone());
        }
        out.set_diff(i, d)?;
    }
    Ok(out)
}

/// Checks that the map induced on homology by `f: C → D` vanishes in every
/// degree `(i, d)` with `d ≤ max_degree`: the image of every cycle of `C`
/// must be a boundary in `D`. Returns the first degree where it does not.
pub fn induced_map_is_zero(
    source: &ChainComplex,
    target: &ChainComplex,
    f: &ChainMap,
    ring: &GradedRing,
    min_index: i64,
    max_degree: usize,
) -> Result<(), (i64, usize)> {
    let Some((lo, hi)) = source.range() else { return Ok(()) };
    let lo = lo.max(min_index);
    let cells: Vec<(i64, usize)> = (lo..=hi).flat_map(|i| (0..=max_degree).map(move |d| (i, d))).collect();
    let bad = cells.par_iter().find_first(|&&(i, d)| {
        let z = source.cycles(ring, i, d as i64);
        if z.is_empty() {
            return false;
        }
        let fz = f.component(i, source, target).strand(d as i64, ring);
        let b = target.boundaries(ring, i, d as i64);
        let mut images = Matrix::zeros(ring.field(), fz.rows(), z.len());
        for (k, v) in z.iter().enumerate() {
            for (r, x) in fz.mul_vec(v).into_iter().enumerate() {
                images.set(r, k, x);
            }
        }
        let rb = b.rank();
        b.hstack(&images).rank() != rb
    });
    match bad {
        Some(&cell) => Err(cell),
        None => Ok(()),
    }
}
