//! Regression table: computed values against closed forms, exact values and property checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::examples::{build_example, ExampleName, TuftRule};
use crate::error::{Error, Result};
use crate::flow::{
    bowen_cover_estimate, covering_entropy_estimate, critical_exponent_estimate, d_f, extend_word,
    geodesic_covering_entropy_estimate, separated_set_check, BiWord, BowenConfig, EntropyReport, GeodesicPath,
    WeightFunction,
};
use crate::hyperbolic::{
    check_line_convexity, estimate_delta, minkowski_dimension_estimate, qc_hull_contains, uniform_grid, BoundarySet,
};
use crate::space::counting::{covering_number, packing_number};
use crate::space::graph::length_to_f64;
use crate::space::{Cover, GraphPoint, GroupElement, Length, SideId, Symbol};
use crate::symbolic::{geodesic_shift, local_geodesic_shift, quotient_coding, sft_entropy, ShiftSpace, SymbolPartition};

/// Row groups selectable with `only`.
pub const TABLE_GROUPS: &[&str] = &[
    "sft", "convexity", "hull", "hcrit", "bowen", "md", "hcov", "hgeod", "properties",
];

const SEED: u64 = 20_240_229;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub criterion: u8,
    pub id: String,
    pub quantity: String,
    pub space: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub basis: String,
    pub horizon: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    /// Run a single row group (see [`TABLE_GROUPS`]).
    pub only: Option<String>,
    /// Replace the `a2` voltage of `tree:2` by `a1`, which must break the rows that depend on it.
    pub wrong_voltage: bool,
}

struct Rows {
    rows: Vec<TableRow>,
}

struct Key<'a> {
    criterion: u8,
    id: &'a str,
    quantity: &'a str,
    space: &'a str,
    basis: &'a str,
    horizon: String,
}

impl Rows {
    fn close(&mut self, s: Key<'_>, computed: f64, expected: f64, tolerance: f64, detail: String) {
        let pass = computed.is_finite() && (computed - expected).abs() <= tolerance;
        self.push(s, computed, expected, tolerance, pass, detail);
    }

    fn push(&mut self, s: Key<'_>, computed: f64, expected: f64, tolerance: f64, pass: bool, detail: String) {
        self.rows.push(TableRow {
            criterion: s.criterion,
            id: s.id.into(),
            quantity: s.quantity.into(),
            space: s.space.into(),
            computed,
            expected,
            tolerance,
            pass,
            basis: s.basis.into(),
            horizon: s.horizon,
            detail,
        });
    }

    /// Runs a block; an error becomes a failing row carrying the message.
    fn guard(&mut self, criterion: u8, id: &str, quantity: &str, space: &str, block: impl FnOnce(&mut Rows) -> Result<()>) {
        if let Err(e) = block(self) {
            self.rows.push(TableRow {
                criterion,
                id: id.into(),
                quantity: quantity.into(),
                space: space.into(),
                computed: f64::NAN,
                expected: f64::NAN,
                tolerance: 0.0,
                pass: false,
                basis: "error".into(),
                horizon: String::new(),
                detail: e.to_string(),
            });
        }
    }
}

fn key<'a>(criterion: u8, id: &'a str, quantity: &'a str, space: &'a str, basis: &'a str, horizon: impl Into<String>) -> Key<'a> {
    Key { criterion, id, quantity, space, basis, horizon: horizon.into() }
}

fn cover_for(name: &str, opts: &TableOptions) -> Result<Cover> {
    let ex = build_example(&name.parse::<ExampleName>()?)?;
    if opts.wrong_voltage && name == "tree:2" {
        let mut d = ex.description.clone();
        d.voltages.insert("a2".into(), "a1".into());
        return Cover::from_description(&d);
    }
    Ok(ex.cover)
}

fn ln(x: f64) -> f64 {
    x.ln()
}

/// Exact entropy row: the bracket must close and hit `expected` to rounding.
fn exact_entropy(rows: &mut Rows, s: Key<'_>, shift: &ShiftSpace, expected: f64) -> Result<()> {
    let b = sft_entropy(shift)?;
    let pass = b.exact && (b.value() - expected).abs() <= 1e-12;
    let detail = format!("bracket [{:.12}, {:.12}], exact {}", b.lower, b.upper, b.exact);
    rows.push(s, b.value(), expected, 0.0, pass, detail);
    Ok(())
}

fn sft_rows(rows: &mut Rows) {
    for l in [2usize, 3, 4] {
        let space = format!("tree:{l}");
        rows.guard(1, "rose-local-geodesics", "sft", &space, |rows| {
            let ex = build_example(&ExampleName::Tree(l))?;
            let shift = local_geodesic_shift(ex.cover.base())?;
            exact_entropy(rows, key(1, "rose-local-geodesics", "sft", &space, "log(2l-1)", ""), &shift, ln((2 * l - 1) as f64))
        });
    }
    rows.guard(2, "doubled-geodesic-shift", "sft", "doubled:2", |rows| {
        let ex = build_example(&ExampleName::Doubled(2))?;
        let patch = ex.cover.expand(Length::from_integer(3))?;
        let shift = geodesic_shift(&patch, 2)?;
        exact_entropy(rows, key(2, "doubled-geodesic-shift", "sft", "doubled:2", "log(4l-2)", "L=2"), &shift, ln(6.0))
    });
    rows.guard(3, "three-circle-wedge", "sft", "circle-rose:2", |rows| {
        let ex = build_example(&ExampleName::CircleRose(2))?;
        let shift = local_geodesic_shift(ex.cover.base())?;
        exact_entropy(rows, key(3, "three-circle-wedge", "sft", "circle-rose:2", "log 5", ""), &shift, ln(5.0))
    });
    rows.guard(4, "rotation-quotient", "sft", "rotation-t4", |rows| {
        let ex = build_example(&ExampleName::RotationT4)?;
        let shift = local_geodesic_shift(ex.cover.base())?;
        exact_entropy(rows, key(4, "two-circle-wedge", "sft", "rotation-t4", "log 3", ""), &shift, ln(3.0))?;
        let classes = ex.partition.as_ref().ok_or_else(|| Error::Config("rotation-t4 lacks its partition".into()))?;
        let q = quotient_coding(&shift, &SymbolPartition::from_labels(shift.alphabet(), classes)?)?;
        exact_entropy(rows, key(4, "rotation-quotient", "sft", "rotation-t4", "one symbol class", ""), &q, 0.0)
    });
}

/// A non-backtracking side word of `len` symbols.
fn random_sides(cover: &Cover, rng: &mut ChaCha8Rng, len: usize) -> Vec<u32> {
    let sides: Vec<SideId> = cover.base().sides().collect();
    let mut out: Vec<SideId> = Vec::with_capacity(len);
    while out.len() < len {
        let s = sides[rng.gen_range(0..sides.len())];
        if out.last().is_none_or(|l| s != l.reverse()) {
            out.push(s);
        }
    }
    out.into_iter().map(|s| s.0).collect()
}

fn random_element(rank: usize, rng: &mut ChaCha8Rng, max_len: usize) -> GroupElement {
    let len = rng.gen_range(0..=max_len);
    let mut word: Vec<Symbol> = Vec::new();
    while word.len() < len {
        let s = Symbol::generator(rng.gen_range(0..rank));
        let s = if rng.gen_bool(0.5) { s.inverse() } else { s };
        if word.last().is_none_or(|l| l.inverse() != s) {
            word.push(s);
        }
    }
    GroupElement::from_word(&word)
}

/// A random line: a coding word extended to both sides, moved by a deck element and a quarter step.
fn random_line(cover: &Cover, shift: &ShiftSpace, rng: &mut ChaCha8Rng, max_deck: usize) -> Result<GeodesicPath> {
    let len = rng.gen_range(3..7);
    let w = random_sides(cover, rng, len);
    let word = extend_word(shift, &w, rng.gen_range(-2..=0))?;
    let path = GeodesicPath::new(cover, cover.basepoint(), word, Length::zero())?;
    let g = random_element(cover.spec().rank(), rng, max_deck);
    Ok(path.translate(cover, &g).flow_shift(Length::new(rng.gen_range(0..4), 4)))
}

fn convexity_rows(rows: &mut Rows, opts: &TableOptions) {
    let grid = || uniform_grid(Length::from_integer(-3), Length::from_integer(3), Length::new(1, 2));
    rows.guard(2, "doubled-defect", "convexity", "doubled:2", |rows| {
        let ex = build_example(&ExampleName::Doubled(2))?;
        let cover = &ex.cover;
        let patch = cover.expand(Length::from_integer(2))?;
        let a1 = cover.base().parse_sides("a1")?[0];
        let b1 = cover.base().parse_sides("b1")?[0];
        let line = GeodesicPath::periodic(cover, cover.basepoint(), vec![a1])?;
        let detour = GeodesicPath::new(cover, cover.basepoint(), BiWord::new(vec![a1], vec![b1], vec![a1], 0), Length::zero())?;
        let rep = check_line_convexity(&patch, &line, &detour, &grid()?)?;
        let detail = format!("witness {:?}, exact defect {}", rep.witness, rep.max_defect_exact);
        rows.push(key(2, "doubled-defect", "convexity", "doubled:2", "defect > 0", "t in [-3,3]"), rep.max_defect, 0.0, 0.0, rep.max_defect > 0.0, detail);
        Ok(())
    });
    rows.guard(2, "tree-pairs-convex", "convexity", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let shift = local_geodesic_shift(cover.base())?;
        let patch = cover.expand(Length::from_integer(8))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst = f64::NEG_INFINITY;
        let pairs = 20;
        for _ in 0..pairs {
            let a = random_line(&cover, &shift, &mut rng, 1)?;
            let b = random_line(&cover, &shift, &mut rng, 1)?;
            worst = worst.max(check_line_convexity(&patch, &a, &b, &grid()?)?.max_defect);
        }
        rows.push(
            key(2, "tree-pairs-convex", "convexity", "tree:2", "defect <= 0", "t in [-3,3]"),
            worst,
            0.0,
            0.0,
            worst <= 0.0,
            format!("{pairs} sampled pairs"),
        );
        Ok(())
    });
}

fn hull_rows(rows: &mut Rows) {
    rows.guard(3, "circle-midpoints-outside", "hull", "circle-rose:2", |rows| {
        let ex = build_example(&ExampleName::CircleRose(2))?;
        let cover = &ex.cover;
        let patch = cover.expand(Length::from_integer(4))?;
        let c1 = cover.base().parse_sides("c1")?[0];
        let a1 = cover.base().parse_sides("a1")?[0];
        let mut inside = 0usize;
        let mut tree_inside = 0usize;
        let mut checked = 0usize;
        for v in patch.vertices().iter().filter(|v| v.elem.len() <= 2) {
            checked += 1;
            if qc_hull_contains(&patch, &BoundarySet::Full, &GraphPoint::midpoint(cover, v.clone(), c1))? {
                inside += 1;
            }
            if qc_hull_contains(&patch, &BoundarySet::Full, &GraphPoint::midpoint(cover, v.clone(), a1))? {
                tree_inside += 1;
            }
        }
        let detail = format!("{checked} vertices; tree-edge midpoints inside: {tree_inside}");
        let pass = inside == 0 && tree_inside == checked;
        rows.push(key(3, "circle-midpoints-outside", "hull", "circle-rose:2", "lines stay in the tree", "|v| <= 2"), inside as f64, 0.0, 0.0, pass, detail);
        Ok(())
    });
}

fn horizons(t: usize) -> Vec<usize> {
    (1..=t).collect()
}

fn report_detail(rep: &EntropyReport) -> String {
    format!(
        "lower {:.4}, upper {:.4}, fit {:?}",
        rep.slope_of_lower, rep.slope_of_upper, rep.fit
    )
}

fn hcrit_rows(rows: &mut Rows, opts: &TableOptions, cache: &mut BTreeMap<String, f64>) {
    for (space, t, expected, tol) in [
        ("tree:2", 12usize, ln(3.0), 0.01),
        ("circle-rose:2", 12, ln(3.0), 0.02),
        ("tree:3", 9, ln(5.0), 0.02),
    ] {
        rows.guard(5, "critical-exponent", "hcrit", space, |rows| {
            let cover = cover_for(space, opts)?;
            let rep = critical_exponent_estimate(&cover, &horizons(t))?;
            cache.insert(space.into(), rep.slope);
            let basis = if expected == ln(3.0) { "log 3" } else { "log 5" };
            rows.close(key(5, "critical-exponent", "hcrit", space, basis, format!("T<={t}")), rep.slope, expected, tol, report_detail(&rep));
            Ok(())
        });
    }
}

fn bowen_rows(rows: &mut Rows, opts: &TableOptions) {
    let r = Length::new(1, 3);
    for a in [1.0, 2.0] {
        let id = format!("bowen-a{a}");
        rows.guard(6, &id, "bowen", "tree:2", |rows| {
            let cover = cover_for("tree:2", opts)?;
            let shift = local_geodesic_shift(cover.base())?;
            let patch = cover.expand(Length::from_integer(6))?;
            let weight = WeightFunction::new(a)?;
            let k = weight.window_for(1.0 / 3.0) as i32;
            let config = BowenConfig::new(r, weight, horizons(6));
            let rep = bowen_cover_estimate(&patch, &shift, &config)?;
            let mut bracket_ok = true;
            for row in &rep.rows {
                let n = row.horizon as i32;
                let lower = 4.0 * 3f64.powi(n - 2);
                let upper = 6.0 * 4.0 * 3f64.powi(n + 2 * k - 1);
                bracket_ok &= row.count_lo >= lower && row.count_hi <= upper * (1.0 + 1e-12) && row.count_lo <= row.count_hi;
            }
            rows.push(
                key(6, &id, "bowen", "tree:2", "closed-form brackets", "n<=6"),
                if bracket_ok { 1.0 } else { 0.0 },
                1.0,
                0.0,
                bracket_ok,
                format!("a={a}, r=1/3, k_r={k}"),
            );
            for (label, slope) in [("lower", rep.slope_of_lower), ("upper", rep.slope_of_upper)] {
                rows.close(
                    key(6, &format!("{id}-{label}-slope"), "bowen", "tree:2", "log 3", "n<=6"),
                    slope,
                    ln(3.0),
                    0.15,
                    format!("a={a}, r=1/3"),
                );
            }
            let mut passed = true;
            let mut min = f64::INFINITY;
            for n in 1..=4 {
                let c = separated_set_check(&patch, &shift, &weight, n, 1.0 / 3.0, Length::from_integer(8))?;
                passed &= c.passed;
                min = min.min(c.min_distance);
            }
            rows.push(
                key(6, &format!("{id}-separated"), "bowen", "tree:2", "pairwise > r", "n<=4"),
                min,
                1.0 / 3.0,
                0.0,
                passed,
                format!("a={a}, smallest certified separation {min:.6}"),
            );
            Ok(())
        });
    }
}

fn md_rows(rows: &mut Rows, opts: &TableOptions, cache: &mut BTreeMap<String, f64>) {
    for (space, l) in [("tree:2", 2usize), ("tree:3", 3)] {
        rows.guard(7, "minkowski-dimension", "md", space, |rows| {
            let cover = cover_for(space, opts)?;
            let rep = minkowski_dimension_estimate(&cover, &BoundarySet::Full, 1, 10)?;
            let expected = ln((2 * l - 1) as f64);
            let basis = if l == 2 { "log 3" } else { "log 5" };
            rows.close(key(7, "minkowski-dimension", "md", space, basis, "depth 1..10"), rep.slope, expected, 0.02, report_detail(&rep));
            let hcrit = match cache.get(space) {
                Some(&h) => h,
                None => critical_exponent_estimate(&cover, &horizons(if l == 2 { 12 } else { 9 }))?.slope,
            };
            rows.close(
                key(7, "md-equals-hcrit", "md", space, "sup of MD over orbit-close sets", "depth 1..10"),
                rep.slope - hcrit,
                0.0,
                0.03,
                format!("md {:.4}, hcrit {:.4}", rep.slope, hcrit),
            );
            Ok(())
        });
    }
}

fn tufted_rows(rows: &mut Rows, group: &str) {
    let h = 14usize;
    let space = format!("tufted-ray:exp2:{h}");
    let ex = match build_example(&ExampleName::TuftedRay { rule: TuftRule::Exp2, horizon: h }) {
        Ok(ex) => ex,
        Err(e) => {
            rows.guard(8, "tufted", group, &space, |_| Err(e));
            return;
        }
    };
    let r = Length::new(1, 2);
    if group == "hcov" {
        rows.guard(8, "tufted-covering", "hcov", &space, |rows| {
            let patch = ex.cover.expand(Length::from_integer(h as i64))?;
            let rep = covering_entropy_estimate(&patch, r, &horizons(h))?;
            rows.close(key(8, "tufted-covering", "hcov", &space, "log 2", format!("T<={h}")), rep.slope, ln(2.0), 0.05, report_detail(&rep));
            Ok(())
        });
    } else {
        rows.guard(8, "tufted-geodesic-covering", "hgeod", &space, |rows| {
            let patch = ex.cover.expand(Length::from_integer(h as i64))?;
            let rep = geodesic_covering_entropy_estimate(&patch, &BoundarySet::Full, r, &horizons(h))?;
            rows.close(key(8, "tufted-geodesic-covering", "hgeod", &space, "0", format!("T<={h}")), rep.slope, 0.0, 0.02, report_detail(&rep));
            Ok(())
        });
    }
}

fn property_rows(rows: &mut Rows, opts: &TableOptions) {
    rows.guard(9, "packing-chain", "properties", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let patch = cover.expand(Length::from_integer(6))?;
        let ball: Vec<GraphPoint> =
            patch.vertices().iter().filter(|v| v.elem.len() <= 3).map(|v| GraphPoint::Vertex(v.clone())).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
        let cases = 100;
        let mut failures = 0;
        for _ in 0..cases {
            let n = rng.gen_range(3..=12);
            let pts: Vec<&GraphPoint> = (0..n).map(|_| &ball[rng.gen_range(0..ball.len())]).collect();
            let mut d = vec![vec![Length::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = patch.distance(pts[i], pts[j])?;
                }
            }
            let r = Length::new(rng.gen_range(1..=6), 2);
            let dist = |i: usize, j: usize| d[i][j];
            let p2 = packing_number(n, dist, r + r);
            let c = covering_number(n, dist, r);
            let p = packing_number(n, dist, r);
            if !(p2.exact && c.exact && p.exact && p2.value <= c.value && c.value <= p.value) {
                failures += 1;
            }
        }
        rows.push(key(9, "packing-chain", "properties", "tree:2", "p(2r) <= c(r) <= p(r)", ""), failures as f64, 0.0, 0.0, failures == 0, format!("{cases} random (set, r) cases"));
        Ok(())
    });
    rows.guard(9, "sandwich", "properties", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let shift = local_geodesic_shift(cover.base())?;
        let patch = cover.expand(Length::from_integer(8))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
        let window = Length::from_integer(8);
        let cases = 100;
        let mut failures = 0;
        for _ in 0..cases {
            let f = WeightFunction::new(rng.gen_range(1..=2) as f64)?;
            let p = random_line(&cover, &shift, &mut rng, 2)?;
            let q = random_line(&cover, &shift, &mut rng, 2)?;
            let d0 = length_to_f64(&patch.distance(&p.eval(&cover, Length::zero())?, &q.eval(&cover, Length::zero())?)?);
            let iv = d_f(&patch, &f, &p, &q, window)?;
            if !(iv.lo <= iv.hi && d0 <= iv.lo + 1e-12 && iv.hi <= d0 + f.tail_bound(0.0) + 1e-12) {
                failures += 1;
            }
        }
        rows.push(key(9, "sandwich", "properties", "tree:2", "d <= D_f <= d + tail", ""), failures as f64, 0.0, 0.0, failures == 0, format!("{cases} random line pairs"));
        Ok(())
    });
    rows.guard(9, "delta-tree", "delta", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let patch = cover.expand(Length::from_integer(8))?;
        let rep = estimate_delta(&patch, Length::from_integer(4))?;
        rows.push(
            key(9, "delta-tree", "delta", "tree:2", "quadruple brute force", "R=4"),
            rep.delta,
            0.0,
            0.0,
            rep.exact && rep.delta == 0.0,
            format!("{} points, {} quadruples, exact {}", rep.points, rep.quadruples, rep.exact),
        );
        Ok(())
    });
    rows.guard(9, "flow-group-law", "properties", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let shift = local_geodesic_shift(cover.base())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
        let cases = 100;
        let mut failures = 0;
        for _ in 0..cases {
            let p = random_line(&cover, &shift, &mut rng, 2)?;
            let s = Length::new(rng.gen_range(-12..=12), rng.gen_range(1..=4));
            let t = Length::new(rng.gen_range(-12..=12), rng.gen_range(1..=4));
            let composed = p.flow_shift(s).flow_shift(t);
            let ok = composed == p.flow_shift(s + t)
                && p.flow_shift(Length::zero()) == p
                && composed.eval(&cover, Length::zero())? == p.eval(&cover, s + t)?
                && p.flow_shift(s).flow_shift(-s) == p;
            if !ok {
                failures += 1;
            }
        }
        rows.push(key(9, "flow-group-law", "properties", "tree:2", "phi_s phi_t = phi_(s+t)", ""), failures as f64, 0.0, 0.0, failures == 0, format!("{cases} random (line, s, t)"));
        Ok(())
    });
    rows.guard(9, "deck-isometry", "properties", "tree:2", |rows| {
        let cover = cover_for("tree:2", opts)?;
        let shift = local_geodesic_shift(cover.base())?;
        let patch = cover.expand(Length::from_integer(6))?;
        let f = WeightFunction::new(2.0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
        let window = Length::from_integer(8);
        let cases = 50;
        let mut failures = 0;
        for _ in 0..cases {
            let p = random_line(&cover, &shift, &mut rng, 1)?;
            let q = random_line(&cover, &shift, &mut rng, 1)?;
            let g = random_element(cover.spec().rank(), &mut rng, 3);
            let before = d_f(&patch, &f, &p, &q, window)?;
            let after = d_f(&patch, &f, &p.translate(&cover, &g), &q.translate(&cover, &g), window)?;
            if before != after {
                failures += 1;
            }
        }
        rows.push(key(9, "deck-isometry", "properties", "tree:2", "D_f(g p, g q) = D_f(p, q)", ""), failures as f64, 0.0, 0.0, failures == 0, format!("{cases} random triples"));
        Ok(())
    });
}

/// Runs the regression rows in a fixed order. Failures are rows, not errors.
pub fn verify_table(opts: &TableOptions) -> Result<Vec<TableRow>> {
    if let Some(g) = &opts.only {
        if !TABLE_GROUPS.contains(&g.as_str()) && g != "delta" {
            return Err(Error::Config(format!("unknown row group {g}; expected one of {}", TABLE_GROUPS.join(", "))));
        }
    }
    let wants = |g: &str| opts.only.as_deref().is_none_or(|o| o == g || (o == "delta" && g == "properties"));
    let mut rows = Rows { rows: Vec::new() };
    let mut cache = BTreeMap::new();
    if wants("sft") {
        sft_rows(&mut rows);
    }
    if wants("convexity") {
        convexity_rows(&mut rows, opts);
    }
    if wants("hull") {
        hull_rows(&mut rows);
    }
    if wants("hcrit") {
        hcrit_rows(&mut rows, opts, &mut cache);
    }
    if wants("bowen") {
        bowen_rows(&mut rows, opts);
    }
    if wants("md") {
        md_rows(&mut rows, opts, &mut cache);
    }
    if wants("hcov") {
        tufted_rows(&mut rows, "hcov");
    }
    if wants("hgeod") {
        tufted_rows(&mut rows, "hgeod");
    }
    if wants("properties") {
        property_rows(&mut rows, opts);
    }
    if opts.only.as_deref() == Some("delta") {
        rows.rows.retain(|r| r.quantity == "delta");
    }
    let mut rows = rows.rows;
    rows.sort_by_key(|r| r.criterion);
    Ok(rows)
}

pub fn table_passed(rows: &[TableRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

/// Per criterion: whether every row passed, in criterion order.
pub fn criteria_summary(rows: &[TableRow]) -> BTreeMap<u8, bool> {
    let mut out = BTreeMap::new();
    for r in rows {
        *out.entry(r.criterion).or_insert(true) &= r.pass;
    }
    out
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.6}")
    }
}

/// Fixed-width text rendering.
pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<3} {:<28} {:<11} {:<20} {:>12} {:>12} {:>8} {:<4} {:<12} {:<30} detail",
        "#", "id", "quantity", "space", "computed", "expected", "tol", "ok", "horizon", "basis"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<3} {:<28} {:<11} {:<20} {:>12} {:>12} {:>8} {:<4} {:<12} {:<30} {}",
            r.criterion,
            r.id,
            r.quantity,
            r.space,
            fmt_num(r.computed),
            fmt_num(r.expected),
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" },
            r.horizon,
            r.basis,
            r.detail
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} rows, {} failed", rows.len(), failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rows_pass_and_repeat() {
        let opts = TableOptions { only: Some("sft".into()), wrong_voltage: false };
        let rows = verify_table(&opts).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(table_passed(&rows), "{}", render_table(&rows));
        assert_eq!(render_table(&rows), render_table(&verify_table(&opts).unwrap()));
        let summary = criteria_summary(&rows);
        assert_eq!(summary.keys().copied().collect::<Vec<_>>(), [1, 2, 3, 4]);
    }

    #[test]
    fn wrong_voltage_breaks_critical_exponent() {
        let opts = TableOptions { only: Some("hcrit".into()), wrong_voltage: true };
        let rows = verify_table(&opts).unwrap();
        let tree = rows.iter().find(|r| r.space == "tree:2").unwrap();
        assert!(!tree.pass, "{tree:?}");
        assert!(rows.iter().filter(|r| r.space != "tree:2").all(|r| r.pass));
    }

    #[test]
    fn unknown_group_is_a_config_error() {
        let opts = TableOptions { only: Some("nope".into()), wrong_voltage: false };
        assert!(matches!(verify_table(&opts), Err(Error::Config(_))));
    }
}
