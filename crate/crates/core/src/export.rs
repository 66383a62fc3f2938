//! Machine-readable forms of a [`GradedMap`]: JSON (round-trips), CSV and
//! plain text.

use serde::{Deserialize, Serialize};

use crate::complex::{FreeModule, Generator, GradedMap, Label};
use crate::error::{Error, Result};
use crate::ring::GradedRing;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MapJson {
    pub source_labels: Vec<String>,
    pub target_labels: Vec<String>,
    pub source_twists: Vec<i64>,
    pub target_twists: Vec<i64>,
    pub entries: Vec<(usize, usize, String)>,
}

impl MapJson {
    pub fn from_map(m: &GradedMap, ring: &GradedRing) -> Self {
        let labels = |f: &FreeModule| f.gens().iter().map(|g| g.label.to_string()).collect();
        let twists = |f: &FreeModule| f.gens().iter().map(|g| g.twist).collect();
        MapJson {
            source_labels: labels(m.source()),
            target_labels: labels(m.target()),
            source_twists: twists(m.source()),
            target_twists: twists(m.target()),
            entries: m.entries().map(|(r, c, p)| (r, c, ring.fmt(p))).collect(),
        }
    }

    pub fn to_map(&self, ring: &GradedRing) -> Result<GradedMap> {
        let module = |labels: &[String], twists: &[i64]| -> Result<FreeModule> {
            if labels.len() != twists.len() {
                return Err(Error::ShapeMismatch("labels and twists differ in length".into()));
            }
            let gens = labels
                .iter()
                .zip(twists)
                .map(|(l, &twist)| Ok(Generator { label: l.parse::<Label>()?, twist }))
                .collect::<Result<Vec<_>>>()?;
            FreeModule::new(gens)
        };
        let src = module(&self.source_labels, &self.source_twists)?;
        let tgt = module(&self.target_labels, &self.target_twists)?;
        let mut m = GradedMap::zero(src, tgt, ring.nvars());
        for (r, c, p) in &self.entries {
            if *r >= m.target().rank() || *c >= m.source().rank() {
                return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) out of range")));
            }
            m.set(*r, *c, ring.parse_poly(p)?);
        }
        Ok(m)
    }
}

pub fn to_json(m: &GradedMap, ring: &GradedRing) -> String {
    serde_json::to_string_pretty(&MapJson::from_map(m, ring)).expect("serializable") + "\n"
}

pub fn from_json(text: &str, ring: &GradedRing) -> Result<GradedMap> {
    let j: MapJson = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: Some(e.line()),
        col: e.column(),
        msg: e.to_string(),
    })?;
    j.to_map(ring)
}

/// One record per nonzero entry: `row,col,target,source,entry`.
pub fn to_csv(m: &GradedMap, ring: &GradedRing) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "col", "target", "source", "entry"]).expect("in-memory write");
    for (r, c, p) in m.entries() {
        w.write_record([
            r.to_string(),
            c.to_string(),
            m.target().gen(r).label.to_string(),
            m.source().gen(c).label.to_string(),
            ring.fmt(p),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

/// Dense matrix with column headers, `0` for empty entries.
pub fn to_text(m: &GradedMap, ring: &GradedRing) -> String {
    let (rows, cols) = m.shape();
    let cells: Vec<Vec<String>> =
        (0..rows).map(|r| (0..cols).map(|c| m.get(r, c).map_or("0".into(), |p| ring.fmt(p))).collect()).collect();
    let row_names: Vec<String> = m.target().gens().iter().map(|g| g.label.to_string()).collect();
    let col_names: Vec<String> = m.source().gens().iter().map(|g| g.label.to_string()).collect();
    let lead = row_names.iter().map(String::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().map(|row| row[c].len()).chain([col_names[c].len()]).max().unwrap_or(1))
        .collect();
    let mut out = format!("{:lead$}", "");
    for (c, name) in col_names.iter().enumerate() {
        out.push_str(&format!("  {name:>w$}", w = widths[c]));
    }
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:lead$}", row_names[r]));
        for (c, cell) in row.iter().enumerate() {
            out.push_str(&format!("  {cell:>w$}", w = widths[c]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{CompleteIntersection, CycleStrategy};
    use crate::resolution::ResolutionF;
    use crate::ring::Config;
    use std::sync::Arc;

    fn setup() -> (CompleteIntersection, ResolutionF) {
        let r = Arc::new(GradedRing::parse("vars x,y,z\ngen x^2+y^2\ngen x*z\ngen z^2+x*y\n", Config::default()).unwrap());
        let ci = CompleteIntersection::new(r, CycleStrategy::default()).unwrap();
        let f = ResolutionF::assemble(&ci, 4).unwrap();
        (ci, f)
    }

    #[test]
    fn json_round_trip() {
        let (ci, f) = setup();
        for i in 1..=4 {
            let m = f.diff(i);
            let text = to_json(&m, ci.ring());
            assert_eq!(from_json(&text, ci.ring()).unwrap(), m);
        }
    }

    #[test]
    fn json_field_names() {
        let (ci, f) = setup();
        let v: serde_json::Value = serde_json::from_str(&to_json(&f.diff(1), ci.ring())).unwrap();
        assert_eq!(v["sourceLabels"][0], "0:-:1");
        assert_eq!(v["targetLabels"][0], "0:-:-");
        assert_eq!(v["entries"][2], serde_json::json!([0, 2, "z"]));
    }

    #[test]
    fn bad_json_is_rejected() {
        let (ci, _) = setup();
        assert!(from_json("{", ci.ring()).is_err());
        let j = r#"{"sourceLabels":["0:-:1"],"targetLabels":["0:-:-"],"sourceTwists":[1],"targetTwists":[0],"entries":[[0,3,"x"]]}"#;
        assert!(matches!(from_json(j, ci.ring()), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn csv_and_text() {
        let (ci, f) = setup();
        let csv = to_csv(&f.diff(1), ci.ring());
        assert_eq!(csv, "row,col,target,source,entry\n0,0,0:-:-,0:-:1,x\n0,1,0:-:-,0:-:2,y\n0,2,0:-:-,0:-:3,z\n");
        let text = to_text(&f.diff(1), ci.ring());
        assert_eq!(text.lines().nth(1).unwrap(), "0:-:-      x      y      z");
    }
}
