//! Block layouts of differentials of `F`: one cell per pair of tuple copies,
//! tagged by the kind of map it carries, with horizontally adjacent cells
//! of the same tag merged. Rendered as a text grid or as SVG.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Serialize;

use crate::complex::{FreeModule, GradedMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StyleTag {
    /// `∂_u` on one tuple copy.
    Koszul(usize),
    /// `ζ_u` into target wedge size `u`.
    Zeta(usize),
    /// Nonzero content that is neither.
    Other,
    Zero,
}

impl fmt::Display for StyleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StyleTag::Koszul(u) => write!(f, "k{u}"),
            StyleTag::Zeta(u) => write!(f, "z{u}"),
            StyleTag::Other => write!(f, "other"),
            StyleTag::Zero => write!(f, "zero"),
        }
    }
}

impl StyleTag {
    fn fill(self) -> char {
        const DIGITS: &[u8] = b"123456789";
        const LETTERS: &[u8] = b"abcdefghi";
        match self {
            StyleTag::Koszul(u) => DIGITS.get(u.wrapping_sub(1)).map_or('#', |&b| b as char),
            StyleTag::Zeta(u) => LETTERS.get(u.wrapping_sub(1)).map_or('@', |&b| b as char),
            StyleTag::Other => '?',
            StyleTag::Zero => '.',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    pub tag: StyleTag,
    /// Pair count `j` of the target strip.
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockLayout {
    pub index: i64,
    pub rows: usize,
    pub cols: usize,
    pub blocks: Vec<Block>,
}

/// Maximal runs of generators sharing path and tuple.
fn strips(m: &FreeModule) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    for (i, g) in m.gens().iter().enumerate() {
        match out.last_mut() {
            Some(r) if {
                let h = &m.gen(r.start).label;
                h.path == g.label.path && h.tuple == g.label.tuple
            } =>
            {
                r.end = i + 1
            }
            _ => out.push(i..i + 1),
        }
    }
    out
}

impl BlockLayout {
    pub fn from_map(index: i64, map: &GradedMap) -> Self {
        let (src, tgt) = (map.source(), map.target());
        let (rs, cs) = (strips(tgt), strips(src));
        let mut occupied = BTreeSet::new();
        for (r, c, _) in map.entries() {
            let ri = rs.partition_point(|s| s.end <= r);
            let ci = cs.partition_point(|s| s.end <= c);
            occupied.insert((ri, ci));
        }
        let mut blocks = Vec::new();
        for (ri, rr) in rs.iter().enumerate() {
            let tl = &tgt.gen(rr.start).label;
            let level = tl.path.first().copied().unwrap_or(0);
            let mut row_blocks: Vec<Block> = Vec::new();
            for (ci, cr) in cs.iter().enumerate() {
                let sl = &src.gen(cr.start).label;
                let tag = if !occupied.contains(&(ri, ci)) {
                    StyleTag::Zero
                } else if sl.path == tl.path && sl.tuple == tl.tuple {
                    StyleTag::Koszul(sl.wedge.len())
                } else if sl.path.len() == 1 && tl.path.len() == 1 && sl.path[0] == tl.path[0] + 1 {
                    StyleTag::Zeta(tl.wedge.len())
                } else {
                    StyleTag::Other
                };
                match row_blocks.last_mut() {
                    Some(b) if b.tag == tag && b.cols.end == cr.start => b.cols.end = cr.end,
                    _ => row_blocks.push(Block { rows: rr.clone(), cols: cr.clone(), tag, level }),
                }
            }
            blocks.extend(row_blocks);
        }
        let (rows, cols) = map.shape();
        BlockLayout { index, rows, cols, blocks }
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.tag != StyleTag::Zero)
    }

    /// Tags of the nonzero blocks.
    pub fn tags(&self) -> BTreeSet<StyleTag> {
        self.nonzero_blocks().map(|b| b.tag).collect()
    }

    /// Blocks cover `rows × cols` exactly once.
    pub fn is_tiling(&self) -> bool {
        let mut seen = vec![false; self.rows * self.cols];
        for b in &self.blocks {
            if b.rows.end > self.rows || b.cols.end > self.cols {
                return false;
            }
            for r in b.rows.clone() {
                for c in b.cols.clone() {
                    if std::mem::replace(&mut seen[r * self.cols + c], true) {
                        return false;
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `∂_i` only carries `∂_u` with `u ≡ i` and `ζ_u` with `u ≢ i` mod 2.
    pub fn classification(&self) -> Classification {
        let even = self.index % 2 == 0;
        let consistent = self.tags().iter().all(|t| match t {
            StyleTag::Koszul(u) => (u % 2 == 0) == even,
            StyleTag::Zeta(u) => (u % 2 == 1) == even,
            _ => false,
        });
        Classification {
            index: self.index,
            parity: if even { "even" } else { "odd" },
            tags: self.tags().iter().map(StyleTag::to_string).collect(),
            consistent,
        }
    }

    pub fn to_text(&self) -> String {
        let mut grid = vec![vec![StyleTag::Zero.fill(); self.cols]; self.rows];
        for b in &self.blocks {
            for r in b.rows.clone() {
                for c in b.cols.clone() {
                    grid[r][c] = b.tag.fill();
                }
            }
        }
        let mut out = format!("d{} {}x{}\n", self.index, self.rows, self.cols);
        let legend: Vec<String> = self.tags().iter().map(|t| format!("{}={t}", t.fill())).collect();
        let _ = writeln!(out, "legend {}", legend.join(" "));
        for row in grid {
            out.extend(row);
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        const CELL: usize = 12;
        let (w, h) = (self.cols * CELL, self.rows * CELL);
        let tags = self.tags();
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            w + 2,
            h + 2,
            w + 2,
            h + 2
        );
        out.push_str("<defs>\n");
        for (n, t) in tags.iter().enumerate() {
            let (angle, gap) = (n * 45 % 180, 3 + n % 3 * 2);
            let _ = writeln!(
                out,
                r#"<pattern id="{t}" patternUnits="userSpaceOnUse" width="{gap}" height="{gap}" patternTransform="rotate({angle})"><line x1="0" y1="0" x2="0" y2="{gap}" stroke="black" stroke-width="1"/></pattern>"#
            );
        }
        out.push_str("</defs>\n");
        let _ = writeln!(out, r#"<rect x="1" y="1" width="{w}" height="{h}" fill="white" stroke="black"/>"#);
        for b in self.nonzero_blocks() {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="url(#{})" stroke="black"><title>{} rows {}..{} cols {}..{}</title></rect>"#,
                1 + b.cols.start * CELL,
                1 + b.rows.start * CELL,
                b.cols.len() * CELL,
                b.rows.len() * CELL,
                b.tag,
                b.tag,
                b.rows.start,
                b.rows.end,
                b.cols.start,
                b.cols.end
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub index: i64,
    pub parity: &'static str,
    pub tags: Vec<String>,
    pub consistent: bool,
}
