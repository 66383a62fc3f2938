use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use koszulator::complex::GradedMap;
use koszulator::divided::{build_mu, compare_mu_zeta, divided_to_tuple, verify_mu_chain};
use koszulator::export::{self, MapJson};
use koszulator::koszul::{CompleteIntersection, CycleStrategy};
use koszulator::parse::parse_cycle_file;
use koszulator::render::BlockLayout;
use koszulator::report::Check;
use koszulator::resolution::{poincare_coefficients, verify_betti, verify_minimal_and_exact, ResolutionF};
use koszulator::suite::{self, Section, SuiteOptions};
use koszulator::tower::{default_height, expected_rank, verify_homology_theorem, verify_splitting, ConeTower};
use koszulator::zeta::{verify_chain, verify_square_zero, zeta_block, HomologyZeta, ZetaMap};
use koszulator::{Config, Error, GradedRing};
use serde::Serialize;

use crate::{ComplexKind, Format, RingArgs};

pub enum Failure {
    /// Checks failed; the report is at this path.
    Verification(PathBuf),
    Input(String),
    Other(String),
}

type Outcome = std::result::Result<(), Failure>;

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    ring: String,
    passed: bool,
    sections: &'a [Section],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    layouts: Vec<koszulator::render::Classification>,
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Other(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn classify(args: &RingArgs, command: &str, path: &Path, e: Error) -> Failure {
    if e.is_input_error() {
        return Failure::Input(format!("{}: {e}", path.display()));
    }
    let sections = [Section { name: "certification".into(), checks: vec![Check::fail("load ring", e.to_string())] }];
    match write_report(args, command, &sections, Vec::new(), None) {
        Ok(p) => Failure::Verification(p),
        Err(f) => f,
    }
}

fn load(args: &RingArgs, command: &str) -> std::result::Result<CompleteIntersection, Failure> {
    let text = read_file(&args.ring)?;
    let config = Config { max_degree: args.max_degree };
    let ring = GradedRing::parse(&text, config).map_err(|e| classify(args, command, &args.ring, e))?;
    let ring = Arc::new(ring);
    let ci = match &args.z {
        Some(zpath) => {
            let ztext = read_file(zpath)?;
            let cycles = parse_cycle_file(&ztext, ring.vars(), ring.field())
                .map_err(|e| Failure::Input(format!("{}: {e}", zpath.display())))?;
            CompleteIntersection::with_cycles(ring, cycles).map_err(|e| classify(args, command, zpath, e))?
        }
        None => CompleteIntersection::new(ring, CycleStrategy::default())
            .map_err(|e| classify(args, command, &args.ring, e))?,
    };
    Ok(ci)
}

fn write_report(
    args: &RingArgs,
    command: &str,
    sections: &[Section],
    layouts: Vec<koszulator::render::Classification>,
    dir: Option<&Path>,
) -> std::result::Result<PathBuf, Failure> {
    let path = match (&args.report, dir) {
        (Some(p), _) => p.clone(),
        (None, Some(d)) => d.join("report.json"),
        (None, None) => PathBuf::from("koszulator-report.json"),
    };
    let report = Report {
        command,
        ring: args.ring.display().to_string(),
        passed: sections.iter().all(Section::passed),
        sections,
        layouts,
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    write_file(&path, &text)?;
    Ok(path)
}

/// Prints the checks and writes a report when one fails (or when a report
/// path or output directory was given).
fn conclude(
    args: &RingArgs,
    command: &str,
    sections: &[Section],
    layouts: Vec<koszulator::render::Classification>,
    dir: Option<&Path>,
    to_stderr: bool,
) -> Outcome {
    let mut text = String::new();
    for s in sections {
        let _ = writeln!(text, "== {}", s.name);
        for c in &s.checks {
            let _ = writeln!(text, "{c}");
        }
    }
    if to_stderr {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    let passed = sections.iter().all(Section::passed);
    if !passed || args.report.is_some() || dir.is_some() {
        let path = write_report(args, command, sections, layouts, dir)?;
        if !passed {
            return Err(Failure::Verification(path));
        }
    }
    Ok(())
}

fn section(name: &str, checks: Vec<Check>) -> Section {
    Section { name: name.to_string(), checks }
}

pub fn cycles(args: &RingArgs) -> Outcome {
    let ci = load(args, "cycles")?;
    let ring = ci.ring();
    println!("field {}", ring.field());
    println!("vars {}", ring.vars().join(","));
    for g in ring.generators() {
        println!("gen {}", ring.fmt(g));
    }
    for j in 0..ci.c() {
        println!("z{} (degree {}) = {}", j + 1, ci.cycles.degrees[j], ci.cycles.fmt_cycle(ring, j));
    }
    let dims: Vec<String> = ci.report.dims.iter().map(usize::to_string).collect();
    println!("dim A_i: {}", dims.join(" "));
    conclude(args, "cycles", &[section("certification", ci.report.checks.clone())], Vec::new(), None, false)
}

#[derive(Serialize)]
struct ZetaJson {
    u: usize,
    k: usize,
    map: MapJson,
}

#[derive(Serialize)]
struct HomologyJson {
    u: usize,
    k: usize,
    rows: Vec<String>,
    cols: Vec<String>,
    matrix: Vec<Vec<String>>,
}

fn homology_label((v, s): &(koszulator::combinat::MultiIndex, Vec<usize>)) -> String {
    let wedge: Vec<String> = s.iter().map(|t| format!("z{}", t + 1)).collect();
    let wedge = if wedge.is_empty() { "1".to_string() } else { wedge.join("∧") };
    format!("{v}{wedge}")
}

pub fn zeta(args: &RingArgs, k: usize, homology_level: bool, out: Format) -> Outcome {
    let ci = load(args, "zeta")?;
    let ring = ci.ring();
    if out == Format::Csv {
        return Err(Failure::Input("zeta supports --out json or text".into()));
    }
    if homology_level {
        let blocks: Vec<HomologyZeta> =
            (1..=ci.c()).map(|u| HomologyZeta::new(ring.field(), ci.c(), k as i64, u)).collect();
        match out {
            Format::Json => {
                let v: Vec<HomologyJson> = blocks
                    .iter()
                    .map(|h| HomologyJson {
                        u: h.u,
                        k,
                        rows: h.rows.iter().map(homology_label).collect(),
                        cols: h.cols.iter().map(homology_label).collect(),
                        matrix: (0..h.matrix.rows())
                            .map(|r| (0..h.matrix.cols()).map(|c| h.matrix.get(r, c).to_string()).collect())
                            .collect(),
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            _ => {
                for h in &blocks {
                    println!("[ζ_{}^{k}] {}x{} rank {}", h.u, h.matrix.rows(), h.matrix.cols(), h.rank());
                    let cols: Vec<String> = h.cols.iter().map(homology_label).collect();
                    println!("  cols {}", cols.join(" "));
                    for (r, b) in h.rows.iter().enumerate() {
                        let row: Vec<String> = h.matrix.row(r).iter().map(ToString::to_string).collect();
                        println!("  {} | {}", homology_label(b), row.join(" "));
                    }
                }
            }
        }
        return Ok(());
    }
    let maps: Vec<GradedMap> = (1..=ci.n()).map(|u| zeta_block(&ci, k, u, &[k + 1], &[k])).collect();
    match out {
        Format::Json => {
            let v: Vec<ZetaJson> = maps
                .iter()
                .enumerate()
                .map(|(i, m)| ZetaJson { u: i + 1, k, map: MapJson::from_map(m, ring) })
                .collect();
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        _ => {
            for (i, m) in maps.iter().enumerate() {
                let (r, c) = m.shape();
                println!("ζ_{}^{k}: {r}x{c}", i + 1);
                print!("{}", export::to_text(m, ring));
            }
        }
    }
    let zk = ZetaMap::new(&ci, k);
    let zk1 = ZetaMap::new(&ci, k + 1);
    let checks = vec![
        Check::from_result(format!("ζ^{k} is a chain map"), verify_chain(&ci, &zk), "∂ζ = -ζ∂"),
        Check::from_result(format!("ζ^{k} ∘ Σζ^{}", k + 1), verify_square_zero(&ci, &zk, &zk1), "zero"),
    ];
    conclude(args, "zeta", &[section("ζ", checks)], Vec::new(), None, out == Format::Json)
}

pub fn tower(args: &RingArgs, levels: usize, verify: bool) -> Outcome {
    let ci = load(args, "tower")?;
    let ring = ci.ring();
    let tower = ConeTower::build(&ci, levels).map_err(|e| Failure::Other(e.to_string()))?;
    for (k, m) in tower.levels.iter().enumerate() {
        let (lo, hi) = m.range().unwrap_or((0, -1));
        let ranks: Vec<String> = (lo..=hi).map(|i| m.rank(i).to_string()).collect();
        println!("M^{k}: ranks {}", ranks.join(" "));
    }
    if !verify {
        return Ok(());
    }
    let mut sections = Vec::new();
    let squares: Vec<Check> = tower
        .levels
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let mut c = Check::from_result(format!("M^{k}: ∂² = 0"), m.compose_check(ring), "zero");
            let (lo, hi) = m.range().unwrap_or((0, -1));
            if let Some(i) = (lo..=hi).find(|&i| m.rank(i) != expected_rank(ci.n(), ci.c(), k, i)) {
                c = Check::fail(format!("M^{k}: ∂² = 0, ranks"), format!("rank of M^{k}_{i} is {}", m.rank(i)));
            }
            c
        })
        .collect();
    sections.push(section("tower complexes", squares));
    let theorem: Vec<Check> =
        (0..=levels).flat_map(|k| verify_homology_theorem(&ci, &tower, k, args.max_degree)).collect();
    sections.push(section("tower homology", theorem));
    let split: Vec<Check> = (0..levels).flat_map(|k| verify_splitting(&ci, &tower, k, args.max_degree)).collect();
    sections.push(section("tower splitting", split));
    conclude(args, "tower", &sections, Vec::new(), None, false)
}

fn betti_tables(f: &ResolutionF) -> (String, String) {
    let max_twist = (0..=f.max_index as i64).flat_map(|i| f.complex.module(i).gens().iter().map(|g| g.twist).collect::<Vec<_>>()).max().unwrap_or(0);
    let mut csv = String::from("i,total");
    for d in 0..=max_twist {
        let _ = write!(csv, ",d{d}");
    }
    csv.push('\n');
    let mut text = format!("{:>3} {:>8}  graded (degree:count)\n", "i", "total");
    for i in 0..=f.max_index as i64 {
        let m = f.complex.module(i);
        let mut counts = vec![0usize; max_twist as usize + 1];
        for g in m.gens() {
            counts[g.twist as usize] += 1;
        }
        let _ = write!(csv, "{i},{}", m.rank());
        for c in &counts {
            let _ = write!(csv, ",{c}");
        }
        csv.push('\n');
        let graded: Vec<String> =
            counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, c)| format!("{d}:{c}")).collect();
        let _ = writeln!(text, "{i:>3} {:>8}  {}", m.rank(), graded.join(" "));
    }
    (text, csv)
}

pub fn resolve(args: &RingArgs, imax: usize, verify_all: bool, betti: bool, out: Option<&Path>) -> Outcome {
    let ci = load(args, "resolve")?;
    let ring = ci.ring();
    let f = ResolutionF::assemble(&ci, imax).map_err(|e| Failure::Other(e.to_string()))?;
    let (text, csv) = betti_tables(&f);
    if betti {
        let b: Vec<String> = f.betti().iter().map(usize::to_string).collect();
        println!("betti {}", b.join(","));
        if let Ok(series) = poincare_coefficients(ci.n(), ci.c(), imax) {
            let s: Vec<String> = series.iter().map(u128::to_string).collect();
            println!("series {}", s.join(","));
        }
        print!("{text}");
    }
    let layouts: Vec<BlockLayout> = (1..=imax).map(|i| BlockLayout::from_map(i as i64, &f.diff(i))).collect();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        write_file(&dir.join("betti.csv"), &csv)?;
        write_file(&dir.join("betti.txt"), &text)?;
        for (i, l) in (1..=imax).zip(&layouts) {
            let d = f.diff(i);
            write_file(&dir.join(format!("dF_{i}.json")), &export::to_json(&d, ring))?;
            write_file(&dir.join(format!("dF_{i}.txt")), &l.to_text())?;
            write_file(&dir.join(format!("dF_{i}.svg")), &l.to_svg())?;
        }
    }
    let mut sections = Vec::new();
    if verify_all {
        let mut res = verify_minimal_and_exact(&ci, &f, args.max_degree);
        res.extend(verify_betti(&f));
        sections.push(section("resolution", res));
        let mut opts = SuiteOptions::new(imax);
        if imax <= opts.leibniz_exhaustive {
            opts.leibniz_exhaustive = imax;
            opts.leibniz_random = 0;
        }
        sections.push(section("DG structure", suite::check_dg(&ci, &f, &opts)));
        sections.push(section("block layouts", suite::check_layouts(&f)));
    }
    let classes = layouts.iter().map(BlockLayout::classification).collect();
    conclude(args, "resolve", &sections, classes, out, false)
}

pub fn divided(args: &RingArgs, k: usize, compare_zeta: bool) -> Outcome {
    let ci = load(args, "divided")?;
    let ring = ci.ring();
    for u in 1..=ci.n() {
        let m = build_mu(&ci, k, u);
        let (r, c) = m.shape();
        println!("μ_{u}^{k}: {r}x{c}");
        print!("{}", export::to_text(&m, ring));
    }
    if !compare_zeta {
        return Ok(());
    }
    let mut checks: Vec<Check> = (1..=ci.n())
        .map(|u| {
            let name = format!("μ_{u}^{k} = ζ_{u}^{k}");
            match compare_mu_zeta(&ci, k, u, &divided_to_tuple) {
                Ok(1) => Check::pass(name, "equal entrywise, sign +1"),
                Ok(s) => Check::fail(name, format!("equal up to global sign {s}")),
                Err(e) => Check::fail(name, e),
            }
        })
        .collect();
    checks.push(Check::from_result(format!("μ^{k} is a chain map"), verify_mu_chain(&ci, k), "∂μ = -μ∂"));
    conclude(args, "divided", &[section("divided powers", checks)], Vec::new(), None, false)
}

pub fn verify_all(args: &RingArgs, imax: usize) -> Outcome {
    let ci = load(args, "verify-all")?;
    let mut opts = SuiteOptions::new(imax);
    opts.max_degree = args.max_degree;
    let report = suite::verify_all(&ci, &opts);
    conclude(args, "verify-all", &report.sections, Vec::new(), None, false)
}

pub fn export_map(args: &RingArgs, complex: ComplexKind, index: usize, format: Format, levels: Option<usize>) -> Outcome {
    let ci = load(args, "export-map")?;
    let ring = ci.ring();
    let map = match complex {
        ComplexKind::Koszul => {
            if index == 0 || index > ci.n() {
                return Err(Failure::Input(format!("Koszul differentials run from 1 to {}", ci.n())));
            }
            ci.koszul.diff(index)
        }
        ComplexKind::Resolution => {
            if index == 0 {
                return Err(Failure::Input("resolution differentials start at 1".into()));
            }
            ResolutionF::assemble(&ci, index).map_err(|e| Failure::Other(e.to_string()))?.diff(index)
        }
        ComplexKind::Tower => {
            let h = levels.unwrap_or_else(|| default_height(index));
            let t = ConeTower::build(&ci, h).map_err(|e| Failure::Other(e.to_string()))?;
            t.levels[h].diff(index as i64)
        }
    };
    let text = match format {
        Format::Json => export::to_json(&map, ring),
        Format::Csv => export::to_csv(&map, ring),
        Format::Text => export::to_text(&map, ring),
    };
    print!("{text}");
    Ok(())
}
