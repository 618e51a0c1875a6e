use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use compack::exactalg::{AlgebraicReal, RationalPoly};
use compack::geom::Q23;
use compack::necklace::{
    certify_detailed, enumerate_skew_candidates, run_skew_search, search_triples,
    skew_radius_candidates, triple_bounds, AngleContext, CandidateStatus, NecklaceWord, SkewSearch,
};
use compack::packing::{
    all_stackings, build_close_packing, classify_shells, density, fill_octahedral_holes,
    metrics_json, packing_to_xyz, recover_stacking, solid_angle_at_small, stacking_classes,
    tiling_to_off, verify_compact, StackingSequence,
};
use compack::shell::{
    embed_shell, rings_per_vertex, search_shells, shell_ring_property, shell_to_off,
    shell_word_sets, ShapeClass, KISSING_BOUND,
};
use compack::Error;

use crate::report::{assertion_rows, text_assertions, Assertion, Format, Report};

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Cap on interval refinement during certification.
    pub precision_bits: u32,
    pub output_format: Format,
    pub node_budget: u64,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidStacking(..) | Error::InvalidWord(_) => Failure::Usage(e.to_string()),
            e => Failure::Core(e),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

const DIGITS: usize = 12;

fn decimal_interval(r: &AlgebraicReal) -> [String; 2] {
    let (lo, hi) = r.enclosure(64).to_decimal(DIGITS);
    [lo, hi]
}

/// `(5/3 − √2)·π` for filled packings and `π/√18` for plain close packings.
fn filled_density() -> Q23 {
    Q23::new(q(5, 3), q(-1, 1), q(0, 1), q(0, 1))
}

fn close_packing_density() -> Q23 {
    Q23::sqrt2().scale(&q(1, 6))
}

fn q(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

fn write_file(path: &Path, contents: &str) -> Outcome<()> {
    fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn poly_desc(c: &[i64]) -> RationalPoly {
    RationalPoly::from_ints_desc(c)
}

// ---------------------------------------------------------------- radii

const SKEW_WORDS: [&str; 18] = [
    "11111", "1111r", "111rr", "11rrr", "1rrrr", "rrrrr", "1111", "111r", "11r1r", "1r1rr", "rrrr",
    "111", "11r", "11rr", "1rrr", "1r1r", "rrr", "1rr",
];

/// Certified radii: characterizing word, minimal polynomial (highest degree
/// first) and the root's first three decimals.
const RADIUS_TABLE: [(&str, &[i64], &str); 10] = [
    ("11111", &[1, 4, 1, -6, 1], "0.902"),
    ("1111r", &[4, 8, -4, -6, 1], "0.849"),
    ("111rr", &[1, 4, 3, -6, 1], "0.720"),
    ("11r1r", &[4, -20, 9, 2], "0.690"),
    ("11rrr", &[1, -2, -5, 0, 1], "0.420"),
    ("1111", &[1, 2, -1], "0.414"),
    ("111r", &[2, 3, -1], "0.280"),
    ("111", &[2, 4, -1], "0.224"),
    ("1r1rr", &[2, 9, -20, 4], "0.223"),
    ("11rr", &[1, -6, 1], "0.171"),
];

const PREFILTER_COUNT: usize = 16;

#[derive(Serialize)]
pub struct Witness {
    pub word: String,
    pub status: String,
    pub winding: Option<i64>,
}

#[derive(Serialize)]
pub struct PrefilterRow {
    pub minimal_polynomial: String,
    pub root_interval: [String; 2],
    pub witnesses: Vec<Witness>,
    pub certified: bool,
}

#[derive(Serialize)]
pub struct RadiusRow {
    pub words: Vec<String>,
    pub minimal_polynomial: String,
    pub root_interval: [String; 2],
    #[serde(skip)]
    pub value: AlgebraicReal,
}

#[derive(Serialize)]
pub struct RadiiReport {
    pub skew_candidates: Vec<String>,
    pub prefilter: Vec<PrefilterRow>,
    pub certified: Vec<RadiusRow>,
    pub checks: Vec<Assertion>,
}

fn radius_rows(search: &SkewSearch) -> (Vec<PrefilterRow>, Vec<RadiusRow>) {
    let mut pre = Vec::new();
    let mut cert = Vec::new();
    for v in search.distinct_values() {
        let same: Vec<_> = search
            .candidates
            .iter()
            .filter(|c| c.value.cmp_value(v).is_eq())
            .collect();
        let witnesses: Vec<Witness> = same
            .iter()
            .map(|c| Witness {
                word: c.witness_word.radius_code(),
                status: c.status.to_string(),
                winding: c.winding,
            })
            .collect();
        let certified_words: Vec<String> = same
            .iter()
            .filter(|c| c.status == CandidateStatus::Certified)
            .map(|c| c.witness_word.radius_code())
            .collect();
        let row = PrefilterRow {
            minimal_polynomial: v.minpoly().to_string(),
            root_interval: decimal_interval(v),
            witnesses,
            certified: !certified_words.is_empty(),
        };
        if row.certified {
            cert.push(RadiusRow {
                words: certified_words,
                minimal_polynomial: row.minimal_polynomial.clone(),
                root_interval: row.root_interval.clone(),
                value: v.clone(),
            });
        }
        pre.push(row);
    }
    (pre, cert)
}

fn radii_checks(
    candidates: &[NecklaceWord],
    search: &SkewSearch,
    rows: &[RadiusRow],
    pre: usize,
) -> Vec<Assertion> {
    let want: BTreeSet<NecklaceWord> = SKEW_WORDS
        .iter()
        .map(|w| w.parse().expect("valid word"))
        .collect();
    let got: BTreeSet<NecklaceWord> = candidates.iter().cloned().collect();
    let mut checks = vec![
        Assertion::eq("skew candidate count", candidates.len(), 18),
        Assertion::new(
            "skew candidates match",
            got == want,
            if got == want {
                "identical"
            } else {
                "sets differ"
            },
        ),
        Assertion::eq("pre-filter values", pre, PREFILTER_COUNT),
        Assertion::eq("certified values", rows.len(), RADIUS_TABLE.len()),
    ];
    let mut missing = Vec::new();
    let mut digits = Vec::new();
    for (word, mp, approx) in RADIUS_TABLE {
        let w: NecklaceWord = word.parse().expect("valid word");
        let poly = poly_desc(mp);
        match search
            .certified()
            .into_iter()
            .find(|c| c.witness_word == w && c.value.minpoly() == &poly)
        {
            None => missing.push(format!("{word} {poly}")),
            Some(c) => {
                // both outward-rounded endpoints must begin with the listed digits
                let (lo, hi) = c.value.enclosure(64).to_decimal(6);
                if lo[..5] != *approx || hi[..5] != *approx {
                    digits.push(format!("{word}: {lo} vs {approx}"));
                }
            }
        }
    }
    checks.push(Assertion::new(
        "certified rows",
        missing.is_empty(),
        if missing.is_empty() {
            "all 10 (word, minimal polynomial) pairs certified".into()
        } else {
            missing.join("; ")
        },
    ));
    checks.push(Assertion::new(
        "approximations",
        digits.is_empty(),
        if digits.is_empty() {
            "every root starts with its listed three decimals".into()
        } else {
            digits.join("; ")
        },
    ));
    checks
}

pub fn cmd_radii(cfg: &RunConfig) -> Outcome<RadiiReport> {
    let candidates = enumerate_skew_candidates();
    let search = run_skew_search(cfg.precision_bits)?;
    let (prefilter, certified) = radius_rows(&search);
    let checks = radii_checks(&candidates, &search, &certified, prefilter.len());
    Ok(RadiiReport {
        skew_candidates: candidates.iter().map(|w| w.radius_code()).collect(),
        prefilter,
        certified,
        checks,
    })
}

impl Report for RadiiReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "skew candidates ({})", self.skew_candidates.len()).unwrap();
        for len in (3..=5).rev() {
            let row: Vec<&str> = self
                .skew_candidates
                .iter()
                .filter(|w| w.len() == len)
                .map(String::as_str)
                .collect();
            writeln!(out, "  {}", row.join(" ")).unwrap();
        }
        writeln!(out, "\npre-filter radii ({})", self.prefilter.len()).unwrap();
        for p in &self.prefilter {
            let ws: Vec<String> = p
                .witnesses
                .iter()
                .map(|w| format!("{}:{}", w.word, w.status))
                .collect();
            writeln!(
                out,
                "  {:<16} {:<34} {}",
                p.root_interval[0],
                p.minimal_polynomial,
                ws.join(" ")
            )
            .unwrap();
        }
        writeln!(out, "\ncertified radii ({})", self.certified.len()).unwrap();
        for r in &self.certified {
            writeln!(
                out,
                "  {:<12} {:<34} {}",
                r.words.join(","),
                r.minimal_polynomial,
                r.root_interval[0]
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        text_assertions(&mut out, &self.assertions());
        out
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["word", "minimal_polynomial", "root_lo", "root_hi"]
            .into_iter()
            .map(String::from)
            .collect()];
        for r in &self.certified {
            rows.push(vec![
                r.words.join(";"),
                r.minimal_polynomial.clone(),
                r.root_interval[0].clone(),
                r.root_interval[1].clone(),
            ]);
        }
        rows
    }

    fn assertions(&self) -> Vec<&Assertion> {
        self.checks.iter().collect()
    }
}

// ------------------------------------------------------------ necklaces

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NecklaceContext {
    Large,
    Small,
}

impl NecklaceContext {
    fn angle_context(self) -> AngleContext {
        match self {
            NecklaceContext::Large => AngleContext::Large,
            NecklaceContext::Small => AngleContext::Small,
        }
    }

    /// The one radius admitting necklaces in this context and their words.
    fn expected(self) -> (RationalPoly, Vec<&'static str>) {
        match self {
            NecklaceContext::Large => (poly_desc(&[1, 2, -1]), vec!["111r1r", "11r11r"]),
            NecklaceContext::Small => (poly_desc(&[1, -6, 1]), vec!["11rr"]),
        }
    }
}

/// Names the radius: a skew word characterizing it or its minimal polynomial.
#[derive(Clone, Debug)]
pub enum RadiusSelector {
    Word(NecklaceWord),
    MinimalPolynomial(RationalPoly),
}

pub fn resolve_radius(sel: &RadiusSelector, max_bits: u32) -> Outcome<AlgebraicReal> {
    match sel {
        RadiusSelector::Word(w) => {
            let mut hits = Vec::new();
            for c in skew_radius_candidates(w)? {
                if certify_detailed(w, AngleContext::Skew, &c.value, max_bits)?.status
                    == CandidateStatus::Certified
                {
                    hits.push(c.value);
                }
            }
            match hits.len() {
                1 => Ok(hits.remove(0)),
                0 => Err(Failure::Usage(format!(
                    "{} characterizes no certified radius",
                    w.radius_code()
                ))),
                n => Err(Failure::Usage(format!(
                    "{} characterizes {n} radii",
                    w.radius_code()
                ))),
            }
        }
        RadiusSelector::MinimalPolynomial(p) => {
            let mut roots = AlgebraicReal::roots_in(p, &q(0, 1), &q(1, 1));
            if roots.len() != 1 {
                return Err(Failure::Usage(format!(
                    "{p} has {} roots in (0, 1), expected one",
                    roots.len()
                )));
            }
            Ok(roots.remove(0))
        }
    }
}

#[derive(Serialize)]
pub struct TripleRow {
    pub triple: [u32; 3],
    pub certified: bool,
    pub winding: Option<i64>,
    pub words: Vec<String>,
}

#[derive(Serialize)]
pub struct NecklaceReport {
    pub context: NecklaceContext,
    pub minimal_polynomial: String,
    pub root_interval: [String; 2],
    pub triple_bounds: [u32; 3],
    pub screened: Vec<TripleRow>,
    pub words: Vec<String>,
    pub checks: Vec<Assertion>,
}

pub fn cmd_necklaces(
    cfg: &RunConfig,
    context: NecklaceContext,
    r: &AlgebraicReal,
) -> Outcome<NecklaceReport> {
    let ctx = context.angle_context();
    let bounds = triple_bounds(ctx, r)?;
    let screened: Vec<TripleRow> = search_triples(ctx, r, cfg.precision_bits)?
        .into_iter()
        .map(|t| TripleRow {
            triple: t.triple.as_array(),
            certified: t.certified,
            winding: t.winding,
            words: t.words.iter().map(|w| w.radius_code()).collect(),
        })
        .collect();
    let words: Vec<String> = screened
        .iter()
        .filter(|t| t.certified)
        .flat_map(|t| t.words.clone())
        .collect();
    let (poly, expected) = context.expected();
    let want: Vec<String> = if r.minpoly() == &poly {
        expected.into_iter().map(String::from).collect()
    } else {
        Vec::new()
    };
    Ok(NecklaceReport {
        context,
        minimal_polynomial: r.minpoly().to_string(),
        root_interval: decimal_interval(r),
        triple_bounds: bounds.as_array(),
        screened,
        checks: vec![Assertion::eq(
            &format!("{context:?} necklace words").to_lowercase(),
            words.clone(),
            want,
        )],
        words,
    })
}

impl Report for NecklaceReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:?} necklaces at r = {} ({})",
            self.context, self.root_interval[0], self.minimal_polynomial
        )
        .unwrap();
        let [i, j, k] = self.triple_bounds;
        writeln!(out, "  triple bounds: i ≤ {i}, j ≤ {j}, k ≤ {k}").unwrap();
        for t in &self.screened {
            let [i, j, k] = t.triple;
            let verdict = if t.certified { "certified" } else { "rejected" };
            let winding = t
                .winding
                .map(|w| format!(" (Σ = {w}·2π)"))
                .unwrap_or_default();
            writeln!(
                out,
                "  ({i},{j},{k}) {verdict}{winding} {}",
                t.words.join(" ")
            )
            .unwrap();
        }
        writeln!(
            out,
            "  words: {}",
            if self.words.is_empty() {
                "none".into()
            } else {
                self.words.join(" ")
            }
        )
        .unwrap();
        writeln!(out).unwrap();
        text_assertions(&mut out, &self.assertions());
        out
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![[
            "context",
            "minimal_polynomial",
            "triple",
            "certified",
            "winding",
            "words",
        ]
        .map(String::from)
        .to_vec()];
        for t in &self.screened {
            rows.push(vec![
                format!("{:?}", self.context).to_lowercase(),
                self.minimal_polynomial.clone(),
                format!("{}:{}:{}", t.triple[0], t.triple[1], t.triple[2]),
                t.certified.to_string(),
                t.winding.map(|w| w.to_string()).unwrap_or_default(),
                t.words.join(";"),
            ]);
        }
        rows
    }

    fn assertions(&self) -> Vec<&Assertion> {
        self.checks.iter().collect()
    }
}

// --------------------------------------------------------------- shells

#[derive(Serialize)]
pub struct ShellRow {
    pub index: usize,
    pub shape_class: String,
    pub large: usize,
    pub small: usize,
    pub faces: usize,
    pub rings: usize,
    pub max_rings_per_vertex: usize,
    pub link_words: BTreeMap<String, usize>,
}

#[derive(Serialize)]
pub struct ShellReport {
    pub nodes: u64,
    pub branch_points: u64,
    pub dead_ends: u64,
    pub shells: Vec<ShellRow>,
    pub exported: Vec<String>,
    pub checks: Vec<Assertion>,
}

/// Runs the shell search with the given link words at r = √2 − 1.
pub fn shells_from_words(
    cfg: &RunConfig,
    large: &BTreeSet<NecklaceWord>,
    small: &BTreeSet<NecklaceWord>,
    export: Option<&Path>,
) -> Outcome<ShellReport> {
    use compack::necklace::Bead;
    let search = search_shells(large, small, KISSING_BOUND, cfg.node_budget)?;
    let r = AlgebraicReal::roots_in(&poly_desc(&[1, 2, -1]), &q(0, 1), &q(1, 1)).remove(0);
    let mut rows = Vec::new();
    let mut exported = Vec::new();
    let mut embed_errors = Vec::new();
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))?;
    }
    for (index, s) in search.shells.iter().enumerate() {
        let mut link_words = BTreeMap::new();
        for v in 0..s.vertex_count() {
            if let Some(w) = s.link_word(v) {
                *link_words.entry(w.radius_code()).or_insert(0) += 1;
            }
        }
        let (class, rings, per_vertex) = match embed_shell(s, &r) {
            Ok(e) => {
                let rs = shell_ring_property(&e);
                if let Some(dir) = export {
                    let path = dir.join(format!("shell_{index}_{}.off", e.shape_class));
                    write_file(&path, &shell_to_off(&e))?;
                    exported.push(path.display().to_string());
                }
                (
                    e.shape_class.to_string(),
                    rs.len(),
                    rings_per_vertex(&e, &rs),
                )
            }
            Err(err) => {
                embed_errors.push(format!("shell {index}: {err}"));
                ("unembedded".into(), 0, 0)
            }
        };
        rows.push(ShellRow {
            index,
            shape_class: class,
            large: s.count(Bead::L),
            small: s.count(Bead::S),
            faces: s.faces().len(),
            rings,
            max_rings_per_vertex: per_vertex,
            link_words,
        });
    }
    let mut classes: Vec<String> = rows.iter().map(|r| r.shape_class.clone()).collect();
    classes.sort();
    let mut ring_counts: Vec<(String, usize)> = rows
        .iter()
        .map(|r| (r.shape_class.clone(), r.rings))
        .collect();
    ring_counts.sort();
    let cub = ShapeClass::Cuboctahedron.to_string();
    let orth = ShapeClass::TriangularOrthobicupola.to_string();
    let checks = vec![
        Assertion::eq("shell count", rows.len(), 2),
        Assertion::new(
            "12 large and 6 small neighbors",
            rows.iter().all(|r| r.large == 12 && r.small == 6),
            rows.iter()
                .map(|r| format!("{}L+{}S", r.large, r.small))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Assertion::new(
            "exact embedding",
            embed_errors.is_empty(),
            if embed_errors.is_empty() {
                "all distances and closures exact".into()
            } else {
                embed_errors.join("; ")
            },
        ),
        Assertion::eq("shape classes", classes, vec![cub.clone(), orth.clone()]),
        Assertion::eq("coplanar 6-rings", ring_counts, vec![(cub, 2), (orth, 1)]),
    ];
    Ok(ShellReport {
        nodes: search.nodes,
        branch_points: search.branch_points,
        dead_ends: search.dead_ends,
        shells: rows,
        exported,
        checks,
    })
}

pub fn cmd_shells(cfg: &RunConfig, export: Option<&Path>) -> Outcome<ShellReport> {
    let (large, small) = shell_word_sets();
    shells_from_words(cfg, &large, &small, export)
}

impl Report for ShellReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "shell search: {} nodes, {} branch points, {} dead ends",
            self.nodes, self.branch_points, self.dead_ends
        )
        .unwrap();
        for s in &self.shells {
            writeln!(
                out,
                "  shell {}: {} ({} L + {} S, {} faces), {} coplanar 6-rings, at most {} through a vertex",
                s.index, s.shape_class, s.large, s.small, s.faces, s.rings, s.max_rings_per_vertex
            )
            .unwrap();
            let links: Vec<String> = s
                .link_words
                .iter()
                .map(|(w, n)| format!("{w}×{n}"))
                .collect();
            writeln!(out, "    links: {}", links.join(" ")).unwrap();
        }
        for p in &self.exported {
            writeln!(out, "  wrote {p}").unwrap();
        }
        writeln!(out).unwrap();
        text_assertions(&mut out, &self.assertions());
        out
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![[
            "index",
            "shape_class",
            "large",
            "small",
            "faces",
            "rings",
            "max_rings_per_vertex",
        ]
        .map(String::from)
        .to_vec()];
        for s in &self.shells {
            rows.push(vec![
                s.index.to_string(),
                s.shape_class.clone(),
                s.large.to_string(),
                s.small.to_string(),
                s.faces.to_string(),
                s.rings.to_string(),
                s.max_rings_per_vertex.to_string(),
            ]);
        }
        rows
    }

    fn assertions(&self) -> Vec<&Assertion> {
        self.checks.iter().collect()
    }
}

// ----------------------------------------------------------------- pack

#[derive(Serialize)]
pub struct PackReport {
    pub sequence: String,
    pub stacking_class: String,
    pub filled: bool,
    pub large_per_cell: usize,
    pub small_per_cell: usize,
    pub verdict: String,
    pub simplex_census: BTreeMap<String, usize>,
    pub cell_volume: String,
    pub tetrahedra_volume: String,
    pub uncovered_volume: String,
    pub density_exact: String,
    pub density_interval: [String; 2],
    pub ratio_to_close_packing: String,
    pub shell_classes: BTreeMap<String, usize>,
    pub recovered_sequence: Option<String>,
    pub exported: Vec<String>,
    pub checks: Vec<Assertion>,
}

pub fn cmd_pack(
    cfg: &RunConfig,
    seq: &StackingSequence,
    fill: bool,
    export: Option<&Path>,
) -> Outcome<PackReport> {
    let bare = build_close_packing(seq);
    let model = if fill {
        fill_octahedral_holes(&bare)?
    } else {
        bare
    };
    let rep = verify_compact(&model);
    let metrics = density(&model, cfg.precision_bits.min(256));
    let d = metrics.density_over_pi.clone();
    // relative to π/√18 = (√2/6)·π
    let ratio = &d * &Q23::sqrt2().scale(&q(3, 1));
    let mut checks = Vec::new();
    let mut shell_classes = BTreeMap::new();
    let mut recovered = None;
    if fill {
        checks.push(Assertion::eq(
            "verdict",
            rep.verdict.to_string(),
            "compact".to_string(),
        ));
        checks.push(Assertion::eq(
            "density / π",
            d.to_string(),
            filled_density().to_string(),
        ));
        checks.push(Assertion::eq(
            "ratio to close packing",
            ratio.to_string(),
            Q23::new(q(-6, 1), q(5, 1), q(0, 1), q(0, 1)).to_string(),
        ));
        match classify_shells(&model) {
            Ok(m) => {
                for c in m.values() {
                    *shell_classes.entry(c.to_string()).or_insert(0) += 1;
                }
                checks.push(Assertion::new(
                    "every large sphere has a known shell",
                    true,
                    format!("{shell_classes:?}"),
                ));
            }
            Err(e) => checks.push(Assertion::new(
                "every large sphere has a known shell",
                false,
                e.to_string(),
            )),
        }
        match recover_stacking(&model) {
            Ok(s) => {
                checks.push(Assertion::new(
                    "round trip",
                    s.equivalent(seq),
                    format!("recovered {s}, built {seq}"),
                ));
                recovered = Some(s.to_string());
            }
            Err(e) => checks.push(Assertion::new("round trip", false, e.to_string())),
        }
    } else {
        checks.push(Assertion::new(
            "verdict",
            !rep.is_compact(),
            rep.verdict.to_string(),
        ));
        checks.push(Assertion::eq(
            "density / π",
            d.to_string(),
            close_packing_density().to_string(),
        ));
    }
    let mut exported = Vec::new();
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))?;
        let tag = format!("{seq}{}", if fill { "_filled" } else { "" });
        let files = [
            (format!("packing_{tag}.xyz"), packing_to_xyz(&model, DIGITS)),
            (format!("tiling_{tag}.off"), tiling_to_off(&model, &rep)),
            (
                format!("metrics_{tag}.json"),
                serde_json::to_string_pretty(&metrics_json(&metrics, &rep)).expect("json") + "\n",
            ),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            write_file(&path, &body)?;
            exported.push(path.display().to_string());
        }
    }
    Ok(PackReport {
        sequence: seq.to_string(),
        stacking_class: seq.canonical().to_string(),
        filled: fill,
        large_per_cell: metrics.large_per_cell,
        small_per_cell: metrics.small_per_cell,
        verdict: rep.verdict.to_string(),
        simplex_census: rep.census.clone(),
        cell_volume: rep.cell_volume.to_string(),
        tetrahedra_volume: rep.tetra_volume.to_string(),
        uncovered_volume: rep.uncovered_volume.to_string(),
        density_exact: metrics.density_exact,
        density_interval: metrics.density_interval.clone(),
        ratio_to_close_packing: ratio.to_string(),
        shell_classes,
        recovered_sequence: recovered,
        exported,
        checks,
    })
}

impl PackReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("sequence", self.sequence.clone()),
            ("stacking_class", self.stacking_class.clone()),
            ("filled", self.filled.to_string()),
            ("large_per_cell", self.large_per_cell.to_string()),
            ("small_per_cell", self.small_per_cell.to_string()),
            ("verdict", self.verdict.clone()),
            (
                "simplex_census",
                self.simplex_census
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            ("cell_volume", self.cell_volume.clone()),
            ("tetrahedra_volume", self.tetrahedra_volume.clone()),
            ("uncovered_volume", self.uncovered_volume.clone()),
            ("density_exact", self.density_exact.clone()),
            ("density_lo", self.density_interval[0].clone()),
            ("density_hi", self.density_interval[1].clone()),
            (
                "ratio_to_close_packing",
                self.ratio_to_close_packing.clone(),
            ),
            (
                "shell_classes",
                self.shell_classes
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            (
                "recovered_sequence",
                self.recovered_sequence.clone().unwrap_or_default(),
            ),
        ]
    }
}

impl Report for PackReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.fields() {
            writeln!(out, "{k:<24} {v}").unwrap();
        }
        for p in &self.exported {
            writeln!(out, "wrote {p}").unwrap();
        }
        writeln!(out).unwrap();
        text_assertions(&mut out, &self.assertions());
        out
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["field".to_string(), "value".to_string()]];
        rows.extend(
            self.fields()
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v]),
        );
        rows
    }

    fn assertions(&self) -> Vec<&Assertion> {
        self.checks.iter().collect()
    }
}

// ------------------------------------------------------------------ all

#[derive(Serialize)]
pub struct RadiusNecklaces {
    pub minimal_polynomial: String,
    pub root_interval: [String; 2],
    pub large: NecklaceReport,
    pub small: NecklaceReport,
}

#[derive(Serialize)]
pub struct PackSummary {
    pub sequence: String,
    pub filled_verdict: String,
    pub unfilled_verdict: String,
    pub density_exact: String,
    pub recovered_sequence: Option<String>,
}

#[derive(Serialize)]
pub struct AllReport {
    pub radii: RadiiReport,
    pub necklaces: Vec<RadiusNecklaces>,
    pub shell_words: BTreeMap<String, Vec<String>>,
    pub shells: ShellReport,
    pub stacking_classes: Vec<String>,
    pub packings: Vec<PackSummary>,
    pub checks: Vec<Assertion>,
}

fn pack_stage(cfg: &RunConfig) -> Outcome<(Vec<PackSummary>, Vec<Assertion>)> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for seq in all_stackings(6) {
        let filled = cmd_pack(cfg, &seq, true, None)?;
        let bare = cmd_pack(cfg, &seq, false, None)?;
        for a in filled
            .checks
            .iter()
            .chain(&bare.checks)
            .filter(|a| !a.passed)
        {
            failed.push(format!("{seq} {}: {}", a.name, a.detail));
        }
        rows.push(PackSummary {
            sequence: seq.to_string(),
            filled_verdict: filled.verdict,
            unfilled_verdict: bare.verdict,
            density_exact: filled.density_exact,
            recovered_sequence: filled.recovered_sequence,
        });
    }
    let n = rows.len();
    let checks = vec![Assertion::new(
        "filled compact, unfilled not, exact densities, round trip",
        failed.is_empty(),
        if failed.is_empty() {
            format!("all {n} words of period ≤ 6")
        } else {
            failed.join("; ")
        },
    )];
    Ok((rows, checks))
}

/// Eight small-sphere corners fill the sphere around a small sphere at
/// r = √2 − 1, while the equal-sphere corner angle does not divide 4π.
fn solid_angle_checks(cfg: &RunConfig) -> Outcome<Vec<Assertion>> {
    let r = AlgebraicReal::roots_in(&poly_desc(&[1, 2, -1]), &q(0, 1), &q(1, 1)).remove(0);
    let at_r = solid_angle_at_small(&r)?;
    let equal = solid_angle_at_small(&AlgebraicReal::from_int(1))?;
    let (lo, hi) = equal.sphere_ratio(64)?.to_decimal(6);
    Ok(vec![
        Assertion::eq(
            "corner angle / π at √2 − 1",
            at_r.pi_fraction().map(|f| f.to_string()),
            Some("1/2".into()),
        ),
        Assertion::new(
            "equal-sphere corner does not divide 4π",
            equal.certified_not_dividing_sphere(cfg.precision_bits)?,
            format!("4π/Ω in [{lo}, {hi}]"),
        ),
    ])
}

pub fn cmd_all(cfg: &RunConfig) -> Outcome<AllReport> {
    let (chain, packs) = std::thread::scope(|s| {
        let packs = s.spawn(|| pack_stage(cfg));
        let chain = (|| -> Outcome<_> {
            let radii = cmd_radii(cfg)?;
            let mut necklaces = Vec::new();
            for row in &radii.certified {
                necklaces.push(RadiusNecklaces {
                    minimal_polynomial: row.minimal_polynomial.clone(),
                    root_interval: row.root_interval.clone(),
                    large: cmd_necklaces(cfg, NecklaceContext::Large, &row.value)?,
                    small: cmd_necklaces(cfg, NecklaceContext::Small, &row.value)?,
                });
            }
            // links around large spheres come from the large necklaces and
            // links around small spheres from the skew necklaces, both at the
            // radius admitting large necklaces
            let mut large = BTreeSet::new();
            let mut small = BTreeSet::new();
            for (n, row) in necklaces.iter().zip(&radii.certified) {
                if !n.large.words.is_empty() {
                    large.extend(
                        n.large
                            .words
                            .iter()
                            .map(|w| w.parse::<NecklaceWord>().expect("valid word")),
                    );
                    small.extend(
                        row.words
                            .iter()
                            .map(|w| w.parse::<NecklaceWord>().expect("valid word")),
                    );
                }
            }
            let shells = shells_from_words(cfg, &large, &small, None)?;
            let shell_words = BTreeMap::from([
                (
                    "large".to_string(),
                    large.iter().map(|w| w.radius_code()).collect(),
                ),
                (
                    "small".to_string(),
                    small.iter().map(|w| w.radius_code()).collect(),
                ),
            ]);
            Ok((radii, necklaces, shell_words, shells))
        })();
        (chain, packs.join().expect("packing stage panicked"))
    });
    let (radii, necklaces, shell_words, shells) = chain?;
    let (packings, pack_checks) = packs?;
    let mut checks = Vec::new();
    let prefix = |stage: &str, a: &Assertion| {
        Assertion::new(&format!("{stage}: {}", a.name), a.passed, a.detail.clone())
    };
    checks.extend(radii.checks.iter().map(|a| prefix("radii", a)));
    for n in &necklaces {
        for a in n.large.checks.iter().chain(&n.small.checks) {
            checks.push(prefix(&format!("necklaces at {}", n.root_interval[0]), a));
        }
    }
    checks.extend(
        solid_angle_checks(cfg)?
            .iter()
            .map(|a| prefix("solid angle", a)),
    );
    checks.extend(shells.checks.iter().map(|a| prefix("shells", a)));
    checks.extend(pack_checks.iter().map(|a| prefix("packings", a)));
    Ok(AllReport {
        radii,
        necklaces,
        shell_words,
        shells,
        stacking_classes: stacking_classes(6).iter().map(|s| s.to_string()).collect(),
        packings,
        checks,
    })
}

impl Report for AllReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "== radii").unwrap();
        out += &self.radii.text();
        writeln!(out, "\n== necklaces").unwrap();
        for n in &self.necklaces {
            let words = |r: &NecklaceReport| {
                if r.words.is_empty() {
                    "-".to_string()
                } else {
                    r.words.join(" ")
                }
            };
            writeln!(
                out,
                "  r = {:<16} large: {:<16} small: {}",
                n.root_interval[0],
                words(&n.large),
                words(&n.small)
            )
            .unwrap();
        }
        writeln!(out, "\n== shells (links {:?})", self.shell_words).unwrap();
        out += &self.shells.text();
        writeln!(
            out,
            "\n== packings ({} classes: {})",
            self.stacking_classes.len(),
            self.stacking_classes.join(" ")
        )
        .unwrap();
        for p in &self.packings {
            writeln!(
                out,
                "  {:<7} filled {:<8} unfilled {:<12} recovered {}",
                p.sequence,
                p.filled_verdict,
                p.unfilled_verdict.split(' ').next().unwrap_or(""),
                p.recovered_sequence.as_deref().unwrap_or("-")
            )
            .unwrap();
        }
        writeln!(out, "\n== summary").unwrap();
        text_assertions(&mut out, &self.assertions());
        out
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![["stage", "check", "passed", "detail"]
            .map(String::from)
            .to_vec()];
        rows.extend(assertion_rows("all", &self.checks));
        rows
    }

    fn assertions(&self) -> Vec<&Assertion> {
        self.checks.iter().collect()
    }
}
