//! The minimal free resolution `F` of the residue field, assembled directly
//! from Koszul blocks and ζ maps:
//!
//! `F_i = ⊕_{j ≥ 0} K_{i-2j}^{N_j}`, with `∂^F` upper block bidiagonal:
//! `∂` on the diagonal and `ζ^j` from level `j+1` to level `j`.
//!
//! Generators are labeled `(path [j], tuple, wedge)`, ordered by `j`, then
//! tuple, then wedge.

use std::collections::BTreeMap;

use crate::combinat::{binomial, num_tuples, subsets, MultiIndex};
use crate::complex::{ChainComplex, FreeModule, Generator, GradedMap, Label, Witness};
use crate::error::{Error, Result};
use crate::koszul::CompleteIntersection;
use crate::poly::Polynomial;
use crate::report::Check;
use crate::tower::ConeTower;
use crate::zeta::zeta_block;

/// Position of a generator of `F`: pair count `j = |tuple|`, tuple, wedge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DgBasis {
    pub tuple: MultiIndex,
    pub wedge: Vec<usize>,
}

impl DgBasis {
    pub fn j(&self) -> usize {
        self.tuple.len()
    }

    pub fn degree(&self) -> usize {
        self.wedge.len() + 2 * self.j()
    }

    pub fn label(&self) -> Label {
        Label::new(vec![self.j()], self.tuple.entries().to_vec(), self.wedge.clone())
    }

    pub fn from_label(c: usize, label: &Label) -> Result<Self> {
        if label.path != [label.tuple.len()] {
            return Err(Error::Invalid(format!("{label} is not a generator of F")));
        }
        Ok(DgBasis { tuple: MultiIndex::new(c, label.tuple.clone())?, wedge: label.wedge.clone() })
    }
}

#[derive(Clone, Debug)]
pub struct ResolutionF {
    pub complex: ChainComplex,
    pub block_index: BTreeMap<Label, DgBasis>,
    pub max_index: usize,
    n: usize,
    c: usize,
}

fn f_module(ci: &CompleteIntersection, i: usize) -> FreeModule {
    let n = ci.n();
    let mut gens = Vec::new();
    for j in 0..=i / 2 {
        let u = i - 2 * j;
        if u > n {
            continue;
        }
        for t in MultiIndex::all(ci.c(), j) {
            let tw = ci.tuple_twist(t.entries());
            for s in subsets(n, u) {
                gens.push(Generator { label: Label::new(vec![j], t.entries().to_vec(), s), twist: u as i64 + tw });
            }
        }
    }
    FreeModule::new(gens).expect("distinct labels")
}

fn place(d: &mut GradedMap, block: &GradedMap, relabel: impl Fn(&Label) -> Label) -> Result<()> {
    for (r, c, p) in block.entries() {
        let (rl, cl) = (relabel(&block.target().gen(r).label), relabel(&block.source().gen(c).label));
        let row = d.target().position(&rl).ok_or_else(|| Error::LabelClash(format!("{rl} missing")))?;
        let col = d.source().position(&cl).ok_or_else(|| Error::LabelClash(format!("{cl} missing")))?;
        d.set(row, col, p.clone());
    }
    Ok(())
}

impl ResolutionF {
    /// `F_0 ..= F_{i_max}` from the block formula.
    pub fn assemble(ci: &CompleteIntersection, i_max: usize) -> Result<Self> {
        let (n, c) = (ci.n(), ci.c());
        let mut complex = ChainComplex::new(n);
        let mut block_index = BTreeMap::new();
        for i in 0..=i_max {
            let m = f_module(ci, i);
            for g in m.gens() {
                block_index.insert(g.label.clone(), DgBasis::from_label(c, &g.label)?);
            }
            complex.set_module(i as i64, m);
        }
        for i in 1..=i_max {
            let mut d = GradedMap::zero(complex.module(i as i64), complex.module(i as i64 - 1), n);
            for j in 0..=i / 2 {
                let u = i - 2 * j;
                if (1..=n).contains(&u) {
                    let block = ci.koszul.diff(u);
                    for t in MultiIndex::all(c, j) {
                        place(&mut d, &block, |l| Label::new(vec![j], t.entries().to_vec(), l.wedge.clone()))?;
                    }
                }
                if i >= 2 * j + 2 && (1..=n).contains(&(i - 1 - 2 * j)) {
                    let block = zeta_block(ci, j, i - 1 - 2 * j, &[j + 1], &[j]);
                    place(&mut d, &block, Label::clone)?;
                }
            }
            complex.set_diff(i as i64, d)?;
        }
        Ok(ResolutionF { complex, block_index, max_index: i_max, n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.max_index as i64).map(|i| self.complex.rank(i)).collect()
    }

    pub fn diff(&self, i: usize) -> GradedMap {
        self.complex.diff(i as i64)
    }

    /// Copy of `F` with the ζ block from level `j+1` to level `j` in `∂_i`
    /// replaced by zero.
    pub fn with_zeta_block_zeroed(&self, i: usize, j: usize) -> ResolutionF {
        let mut out = self.clone();
        let d = self.diff(i);
        let mut z = GradedMap::zero(d.source().clone(), d.target().clone(), self.n);
        for (r, c, p) in d.entries() {
            let hit = d.source().gen(c).label.path == [j + 1] && d.target().gen(r).label.path == [j];
            if !hit {
                z.set(r, c, p.clone());
            }
        }
        out.complex.set_diff(i as i64, z).expect("same shape");
        out
    }
}

/// `rank F_i = Σ_j C(n, i-2j) N_j`.
pub fn rank_formula(n: usize, c: usize, i: usize) -> usize {
    (0..=i / 2).map(|j| binomial(n as i64, (i - 2 * j) as i64) * num_tuples(c, j as i64)).sum()
}

/// Coefficients of `(1+t)^n / (1-t^2)^c` up to `t^up_to`, by series arithmetic.
pub fn poincare_coefficients(n: usize, c: usize, up_to: usize) -> Result<Vec<u128>> {
    if c == 0 {
        return Err(Error::Invalid("codepth must be at least 1".into()));
    }
    let mut a = vec![0u128; up_to + 1];
    a[0] = 1;
    for _ in 0..n {
        for i in (1..=up_to).rev() {
            a[i] += a[i - 1];
        }
    }
    for _ in 0..c {
        for i in 2..=up_to {
            a[i] += a[i - 2];
        }
    }
    Ok(a)
}

fn first_non_minimal(f: &ResolutionF, ring_fmt: impl Fn(&Polynomial) -> String) -> Option<String> {
    for i in 1..=f.max_index {
        let d = f.diff(i);
        let found = d.entries().find(|(_, _, p)| p.constant_term().is_some()).map(|(r, c, p)| {
            format!("∂_{i} entry ({}, {}) = {}", d.target().gen(r).label, d.source().gen(c).label, ring_fmt(p))
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// `∂² = 0`, homogeneity, minimality, `H_0 = k` and strand exactness in
/// `1 ≤ i ≤ i_max - 1` for internal degrees `≤ max_degree`.
pub fn verify_minimal_and_exact(ci: &CompleteIntersection, f: &ResolutionF, max_degree: usize) -> Vec<Check> {
    let ring = ci.ring();
    let mut checks = vec![Check::from_result("∂^F ∘ ∂^F = 0", f.complex.compose_check(ring), "every composite vanishes")];

    let bad = (1..=f.max_index).find_map(|i| f.diff(i).homogeneity_violation(ring).map(|rc| (i, rc)));
    checks.push(Check::new(
        "∂^F is homogeneous",
        bad.is_none(),
        match bad {
            None => "entry degrees match generator twists".to_string(),
            Some((i, (r, c))) => format!("∂_{i} entry ({r}, {c})"),
        },
    ));

    let nm = first_non_minimal(f, |p| ring.fmt(p));
    checks.push(Check::new(
        "∂^F is minimal",
        nm.is_none(),
        nm.unwrap_or_else(|| "no entry has a constant term".into()),
    ));

    let h0 = f.complex.homology(ring, 0, 0, max_degree);
    let h0_dims: Vec<usize> = (0..=max_degree).map(|d| h0.get(0, d)).collect();
    let mut want = vec![0; max_degree + 1];
    want[0] = 1;
    checks.push(Check::new(
        "H_0(F) = k",
        h0_dims == want,
        format!("strand dims {h0_dims:?}"),
    ));

    if f.max_index >= 2 {
        let top = f.max_index as i64 - 1;
        let h = f.complex.homology(ring, 1, top, max_degree);
        let bad = (1..=top).flat_map(|i| (0..=max_degree).map(move |d| (i, d))).find(|&(i, d)| h.get(i, d) != 0);
        checks.push(Check::new(
            format!("H_i(F) = 0 for 1 ≤ i ≤ {top}"),
            bad.is_none(),
            match bad {
                None => format!("all strands of internal degree ≤ {max_degree} are exact"),
                Some((i, d)) => format!("H_{i} has dimension {} in internal degree {d}", h.get(i, d)),
            },
        ));
    }
    checks
}

/// Betti numbers of `F` against the rank formula and the Poincaré series.
pub fn verify_betti(f: &ResolutionF) -> Vec<Check> {
    let betti = f.betti();
    let formula: Vec<usize> = (0..=f.max_index).map(|i| rank_formula(f.n, f.c, i)).collect();
    let mut checks = vec![Check::new(
        "rank F_i = Σ_j C(n, i-2j) N_j",
        betti == formula,
        format!("ranks {betti:?}"),
    )];
    match poincare_coefficients(f.n, f.c, f.max_index) {
        Ok(series) => {
            let ok = series.iter().zip(&betti).all(|(&a, &b)| a == b as u128);
            checks.push(Check::new(
                format!("Betti numbers = coefficients of (1+t)^{}/(1-t^2)^{}", f.n, f.c),
                ok,
                format!("series {series:?}"),
            ));
        }
        Err(e) => checks.push(Check::fail("Poincaré series", e.to_string())),
    }
    checks
}

/// `ε_j = (-1)^{j(j-1)/2}`: the basis rescaling turning the tower's signed
/// ζ blocks into the unsigned ones of `F`.
pub fn level_sign(j: usize) -> i64 {
    if (j * j.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Label-for-label comparison of `F` with the tower top level for
/// `i ≤ min(i_max, 2J + 1)`, after rescaling level `j` by `ε_j`.
pub fn compare_with_tower(ci: &CompleteIntersection, f: &ResolutionF, tower: &ConeTower) -> Result<(), Witness> {
    let ring = ci.ring();
    let m = tower.levels.last().expect("nonempty tower");
    let top = f.max_index.min(2 * tower.height() + 1) as i64;
    let sign_of = |l: &Label| level_sign(l.path[0]);
    let witness = |i: i64, r: &Label, c: &Label, value: String| Witness { degree: i, row: r.clone(), col: c.clone(), value };
    for i in 0..=top {
        let (a, b) = (f.complex.module(i), m.module(i));
        let mut fa: Vec<_> = a.gens().to_vec();
        let mut fb: Vec<_> = b.gens().to_vec();
        fa.sort_by(|x, y| x.label.cmp(&y.label));
        fb.sort_by(|x, y| x.label.cmp(&y.label));
        if fa != fb {
            let l = fa
                .iter()
                .zip(&fb)
                .find(|(x, y)| x != y)
                .map(|(x, _)| x.label.clone())
                .unwrap_or_default();
            return Err(witness(i, &l, &l, format!("generators differ (ranks {} vs {})", a.rank(), b.rank())));
        }
        if i == 0 {
            continue;
        }
        let (df, dm) = (f.complex.diff(i), m.diff(i));
        if df.num_entries() != dm.num_entries() {
            let extra = dm.entries().find(|&(r, c, _)| {
                let (rl, cl) = (&dm.target().gen(r).label, &dm.source().gen(c).label);
                df.get(df.target().position(rl).unwrap(), df.source().position(cl).unwrap()).is_none()
            });
            let (r, c) = extra.map(|(r, c, _)| (r, c)).unwrap_or((0, 0));
            return Err(witness(
                i,
                &dm.target().gen(r).label,
                &dm.source().gen(c).label,
                format!("{} entries in F vs {} in the tower", df.num_entries(), dm.num_entries()),
            ));
        }
        for (r, c, p) in df.entries() {
            let (rl, cl) = (&df.target().gen(r).label, &df.source().gen(c).label);
            let q = dm.entry(dm.target().position(rl).unwrap(), dm.source().position(cl).unwrap());
            let s = sign_of(rl) * sign_of(cl);
            let want = if s > 0 { p.clone() } else { p.neg() };
            if !ring.reduce(&want.sub(&q)).is_zero() {
                return Err(witness(i, rl, cl, format!("F gives {}, tower gives {}", ring.fmt(p), ring.fmt(&q))));
            }
        }
    }
    Ok(())
}

/// Sparse polynomial matrix without module data.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGrid {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), Polynomial>,
}

impl PolyGrid {
    pub fn from_map(m: &GradedMap) -> Self {
        let (rows, cols) = m.shape();
        PolyGrid { rows, cols, entries: m.entries().map(|(r, c, p)| ((r, c), p.clone())).collect() }
    }
}

/// `ζ_u^k` synthesized from the column blocks `B_1 .. B_c` of `ζ_u^0` by
/// the splitting-and-spreading rule: for `k = 0` the blocks sit side by
/// side; otherwise the rows of tuples starting with `1` carry the `k-1`
/// pattern, each remaining tuple gets `B_1` on the diagonal, and the
/// blocks `B_2 .. B_c` spread recursively in the lower right.
pub fn spread_zeta(zeta0: &PolyGrid, n: usize, c: usize, u: usize, k: usize) -> Result<PolyGrid> {
    let bh = binomial(n as i64, u as i64);
    let bw = binomial(n as i64, u as i64 - 1);
    if zeta0.rows != bh || zeta0.cols != c * bw {
        return Err(Error::ShapeMismatch(format!(
            "ζ_{u}^0 should be {bh}x{}, got {}x{}",
            c * bw,
            zeta0.rows,
            zeta0.cols
        )));
    }
    let mut blocks: Vec<Vec<(usize, usize, &Polynomial)>> = vec![Vec::new(); c];
    for (&(r, col), p) in &zeta0.entries {
        blocks[col / bw].push((r, col % bw, p));
    }
    let mut out = PolyGrid {
        rows: num_tuples(c, k as i64) * bh,
        cols: num_tuples(c, k as i64 + 1) * bw,
        entries: BTreeMap::new(),
    };

    fn go(lo: usize, c: usize, k: usize, row: usize, col: usize, cells: &mut Vec<(usize, usize, usize)>) {
        let width = c - lo;
        if k == 0 {
            cells.extend((lo..c).map(|b| (b, row, col + b - lo)));
        } else if width == 1 {
            cells.push((lo, row, col));
        } else {
            go(lo, c, k - 1, row, col, cells);
            let head = num_tuples(width, k as i64 - 1);
            for m in 0..num_tuples(width - 1, k as i64) {
                cells.push((lo, row + head + m, col + head + m));
            }
            go(lo + 1, c, k, row + head, col + num_tuples(width, k as i64), cells);
        }
    }
    let mut cells = Vec::new();
    go(0, c, k, 0, 0, &mut cells);
    for (b, br, bc) in cells {
        for &(r, cc, p) in &blocks[b] {
            out.entries.insert((br * bh + r, bc * bw + cc), p.clone());
        }
    }
    Ok(out)
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

    const EX45: &str = "vars x,y,z\ngen x^2\ngen y^2+z^2\n";
    const EX47: &str = "vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n";

    #[test]
    fn first_differential_is_the_variables() {
        let f = ResolutionF::assemble(&ci(EX45), 1).unwrap();
        let d = f.diff(1);
        assert_eq!(d.shape(), (1, 3));
        let row: Vec<String> = (0..3).map(|c| d.entry(0, c).to_string()).collect();
        assert_eq!(row, ["x1", "x2", "x3"]);
    }

    #[test]
    fn ranks_follow_the_formula() {
        let f = ResolutionF::assemble(&ci(EX47), 6).unwrap();
        assert_eq!(f.complex.rank(4), 15);
        assert_eq!(f.betti(), vec![1, 3, 6, 10, 15, 21, 28]);
        assert!(all_passed(&verify_betti(&f)));
    }

    #[test]
    fn series_oracle() {
        let two: Vec<u128> = (0..10).map(|i| 2 * i + 1).collect();
        assert_eq!(poincare_coefficients(3, 2, 9).unwrap(), two);
        let three: Vec<u128> = (0..10).map(|i| binomial(i + 2, 2) as u128).collect();
        assert_eq!(poincare_coefficients(3, 3, 9).unwrap(), three);
        assert_eq!(poincare_coefficients(0, 1, 4).unwrap(), vec![1, 0, 1, 0, 1]);
        assert!(poincare_coefficients(3, 0, 4).is_err());
    }

    #[test]
    fn resolution_is_minimal_and_exact() {
        let ci = ci(EX45);
        let f = ResolutionF::assemble(&ci, 6).unwrap();
        let checks = verify_minimal_and_exact(&ci, &f, 10);
        assert!(all_passed(&checks), "{checks:#?}");
    }

    #[test]
    fn zeroed_zeta_block_breaks_the_resolution() {
        let ci = ci(EX45);
        let f = ResolutionF::assemble(&ci, 5).unwrap().with_zeta_block_zeroed(3, 0);
        let checks = verify_minimal_and_exact(&ci, &f, 10);
        assert!(!all_passed(&checks));
    }

    #[test]
    fn agrees_with_tower() {
        for text in [EX45, EX47] {
            let ci = ci(text);
            let f = ResolutionF::assemble(&ci, 5).unwrap();
            let t = ConeTower::build(&ci, 2).unwrap();
            compare_with_tower(&ci, &f, &t).unwrap();
        }
    }

    #[test]
    fn level_signs() {
        assert_eq!((0..6).map(level_sign).collect::<Vec<_>>(), vec![1, 1, -1, -1, 1, 1]);
    }

    #[test]
    fn spread_matches_direct_construction() {
        for text in ["vars x,y,z\ngen x^2\n", EX45, EX47] {
            let ci = ci(text);
            let (n, c) = (ci.n(), ci.c());
            for u in 1..=n {
                let z0 = PolyGrid::from_map(&zeta_block(&ci, 0, u, &[], &[]));
                assert_eq!(spread_zeta(&z0, n, c, u, 0).unwrap(), z0);
                for k in 1..=4 {
                    let direct = PolyGrid::from_map(&zeta_block(&ci, k, u, &[], &[]));
                    assert_eq!(spread_zeta(&z0, n, c, u, k).unwrap(), direct, "c={c} u={u} k={k}");
                }
            }
        }
    }

    #[test]
    fn spread_rejects_bad_partition() {
        let ci = ci(EX45);
        let z0 = PolyGrid::from_map(&zeta_block(&ci, 0, 2, &[], &[]));
        assert!(matches!(spread_zeta(&z0, 3, 3, 2, 1), Err(Error::ShapeMismatch(_))));
    }
}
