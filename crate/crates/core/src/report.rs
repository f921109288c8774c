//! Structured reports shared by the command line and the bindings.
//!
//! Field order is fixed by the struct layout, so machine output is stable.
//! Timings are kept in their own optional section.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Instant;

use serde::Serialize;

use crate::bv::{
    admissible_family_builds, build_operator, classify_round_trip, existence, verify_operator, vertex_consequence,
    BVSolution,
};
use crate::error::Result;
use crate::exterior::CharacterVector;
use crate::fan::{Fan, FanReport};
use crate::linalg::{fmt_rat, RatMatrix};
use crate::oracles::{
    compare_chart_bracket, compare_lattice_points, oracle_axioms, oracle_closure, oracle_contraction_lemma,
    oracle_gamma, AlgebraTables, OracleReport,
};
use crate::polytope::{lattice_vertices, stratum_counts};
use crate::polyvector::PolyvectorSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanSummary {
    pub name: Option<String>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanSummary {
    pub fn of(fan: &Fan) -> Self {
        Self {
            name: fan.name().map(str::to_string),
            dim: fan.dim(),
            rays: fan.rays().iter().map(|r| r.coords().to_vec()).collect(),
            max_cones: fan.max_cones().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSummary {
    pub weight: Vec<i64>,
    pub active: Vec<usize>,
    pub stratum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeSummary {
    pub lattice_points: usize,
    pub strata: Vec<usize>,
    pub vertices: Vec<Vec<i64>>,
    pub points: Vec<PointSummary>,
}

impl PolytopeSummary {
    pub fn of(space: &PolyvectorSpace) -> Self {
        let points = space.points();
        Self {
            lattice_points: points.len(),
            strata: stratum_counts(points, space.dim()),
            vertices: lattice_vertices(points, space.dim()).iter().map(|p| p.weight.0.clone()).collect(),
            points: points
                .iter()
                .map(|p| PointSummary { weight: p.weight.0.clone(), active: p.active.clone(), stratum: p.stratum })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorSummary {
    pub delta: String,
    /// Matrix of D on degree k at index k − 1, entries as rationals.
    pub matrices: Vec<Vec<Vec<String>>>,
    pub verification: Vec<OracleReport>,
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(fmt_rat).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BvSummary {
    pub exists: bool,
    pub solution_dim: Option<usize>,
    pub active_rays: Vec<usize>,
    /// Rows ⟨δ, e_t⟩ = −1, one per active ray.
    pub system_rows: Vec<String>,
    pub particular: Option<String>,
    pub kernel: Vec<String>,
    /// Active-ray positions combined by the inconsistency certificate.
    pub inconsistent_rows: Vec<usize>,
    pub certificate: Option<Vec<String>>,
    pub operators: Vec<OperatorSummary>,
}

impl BvSummary {
    pub fn of(space: &PolyvectorSpace, sol: &BVSolution, deltas: &[CharacterVector], seed: u64) -> Result<Self> {
        let fan = space.fan();
        let system_rows = sol
            .active_rays
            .iter()
            .map(|&t| format!("<delta, {:?}> = -1  (ray {t})", fan.rays()[t].coords()))
            .collect();
        let mut operators = Vec::new();
        for delta in deltas {
            let op = build_operator(delta, space)?;
            let verification = verify_operator(&op, space, seed).checks;
            operators.push(OperatorSummary {
                delta: delta.to_string(),
                matrices: op.matrices.iter().map(matrix_strings).collect(),
                verification,
            });
        }
        Ok(Self {
            exists: sol.exists,
            solution_dim: sol.solution_dim(),
            active_rays: sol.active_rays.clone(),
            system_rows,
            particular: sol.particular.as_ref().map(ToString::to_string),
            kernel: sol.kernel.iter().map(ToString::to_string).collect(),
            inconsistent_rows: sol.inconsistent_rows(),
            certificate: sol.certificate.as_ref().map(|y| y.iter().map(fmt_rat).collect()),
            operators,
        })
    }

    pub fn passed(&self) -> bool {
        self.operators.iter().all(|o| o.verification.iter().all(|c| c.passed))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BracketSummary {
    pub a: String,
    pub b: String,
    pub product: String,
    pub bracket: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub fan: Option<FanSummary>,
    pub validation: Option<FanReport>,
    pub polytope: Option<PolytopeSummary>,
    pub dimensions: Option<Vec<usize>>,
    pub basis: Option<Vec<Vec<String>>>,
    pub bracket: Option<BracketSummary>,
    pub bv: Option<BvSummary>,
    pub checks: Vec<OracleReport>,
    pub corpus: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn for_fan(fan: &Fan) -> Self {
        Self { fan: Some(FanSummary::of(fan)), ..Self::default() }
    }

    /// True when every mathematical check in the report holds.
    pub fn passed(&self) -> bool {
        self.validation.as_ref().is_none_or(FanReport::is_valid)
            && self.bv.as_ref().is_none_or(BvSummary::passed)
            && self.checks.iter().all(|c| c.passed)
            && self.corpus.iter().all(Report::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        self.write_human(&mut out);
        out
    }

    fn write_human(&self, out: &mut String) {
        if let Some(f) = &self.fan {
            let _ = writeln!(out, "fan {} (dim {}, {} rays, {} maximal cones)", f.name.as_deref().unwrap_or("<unnamed>"), f.dim, f.rays.len(), f.max_cones.len());
        }
        if let Some(v) = &self.validation {
            let _ = writeln!(out, "  primitive: {}  smooth: {}  complete: {}", v.primitive, v.simplicial_smooth, v.complete);
            for m in &v.messages {
                let _ = writeln!(out, "  - {m}");
            }
        }
        if let Some(p) = &self.polytope {
            let _ = writeln!(out, "  lattice points: {}  strata by codimension: {:?}", p.lattice_points, p.strata);
            let _ = writeln!(out, "  lattice vertices: {:?}", p.vertices);
            for pt in &p.points {
                let _ = writeln!(out, "    {:?}  active {:?}  stratum {}", pt.weight, pt.active, pt.stratum);
            }
        }
        if let Some(d) = &self.dimensions {
            let total: usize = d.iter().sum();
            let _ = writeln!(out, "  dimensions by degree: {d:?} (total {total})");
        }
        if let Some(b) = &self.basis {
            for (k, elems) in b.iter().enumerate() {
                let _ = writeln!(out, "  degree {k}: {} elements", elems.len());
                for (i, e) in elems.iter().enumerate() {
                    let _ = writeln!(out, "    [{i}] {e}");
                }
            }
        }
        if let Some(b) = &self.bracket {
            let _ = writeln!(out, "  a = {}\n  b = {}\n  a^b = {}\n  [a,b] = {}", b.a, b.b, b.product, b.bracket);
        }
        if let Some(bv) = &self.bv {
            let _ = writeln!(out, "  BV operator exists: {}", bv.exists);
            for row in &bv.system_rows {
                let _ = writeln!(out, "    {row}");
            }
            if bv.exists {
                let _ = writeln!(
                    out,
                    "  solution space: dimension {}, particular {}, kernel [{}]",
                    bv.solution_dim.unwrap_or(0),
                    bv.particular.as_deref().unwrap_or("-"),
                    bv.kernel.join(", ")
                );
            } else {
                let _ = writeln!(out, "  inconsistent rows: {:?}", bv.inconsistent_rows);
                if let Some(c) = &bv.certificate {
                    let _ = writeln!(out, "  certificate y with y·rows = 0, y·rhs = 1: [{}]", c.join(", "));
                }
            }
            for op in &bv.operators {
                let _ = writeln!(out, "  operator at delta {}", op.delta);
                for (k, m) in op.matrices.iter().enumerate() {
                    let _ = writeln!(out, "    D on degree {}: {}", k + 1, m.iter().map(|r| format!("[{}]", r.join(" "))).collect::<Vec<_>>().join(" "));
                }
                for c in &op.verification {
                    write_check(out, c, "    ");
                }
            }
        }
        for c in &self.checks {
            write_check(out, c, "  ");
        }
        for r in &self.corpus {
            r.write_human(out);
        }
        if let Some(t) = &self.timings {
            for (k, v) in t {
                let _ = writeln!(out, "  time {k}: {v:.3} s");
            }
        }
    }
}

fn write_check(out: &mut String, c: &OracleReport, indent: &str) {
    let status = if c.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{indent}[{status}] {} ({} cases, {} violations)", c.check, c.cases, c.violations);
    if let Some(x) = &c.counterexample {
        let _ = writeln!(out, "{indent}       first counterexample: {x}");
    }
}

/// Wall-clock timer for the optional timings section.
pub struct Timer {
    enabled: bool,
    entries: BTreeMap<String, f64>,
}

impl Timer {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, entries: BTreeMap::new() }
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            *self.entries.entry(label.to_string()).or_default() += start.elapsed().as_secs_f64();
        }
        out
    }

    pub fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.entries)
    }
}

/// Number of random bracket pairs added to the chart comparison.
pub const CHART_EXTRA_PAIRS: usize = 20;
/// Trials for the contraction-lemma oracle.
pub const CONTRACTION_TRIALS: usize = 200;

/// Validation, polytope, dimensions, BV status and every oracle.
pub fn full_check(fan: &Fan, seed: u64, timings: bool) -> Result<Report> {
    let mut timer = Timer::new(timings);
    let mut report = Report::for_fan(fan);
    let validation = fan.validate()?;
    let valid = validation.is_valid();
    report.validation = Some(validation);
    if !valid {
        report.timings = timer.finish();
        return Ok(report);
    }
    let space = timer.time("algebra", || PolyvectorSpace::new(fan))?;
    report.polytope = Some(PolytopeSummary::of(&space));
    report.dimensions = Some(space.dims());
    let sol = existence(space.polytope(), space.points())?;
    report.bv = Some(timer.time("operators", || BvSummary::of(&space, &sol, &sol.sample_deltas(), seed))?);

    let mut checks = Vec::new();
    if fan.dim() <= 3 {
        checks.push(timer.time("lattice oracle", || compare_lattice_points(fan)));
    }
    checks.push(timer.time("contraction oracle", || oracle_contraction_lemma(CONTRACTION_TRIALS, seed, fan.dim().min(4)))?);
    let op = match &sol.particular {
        Some(p) => Some(build_operator(p, &space)?),
        None => None,
    };
    let tables = timer.time("tables", || AlgebraTables::from_space(&space, op.as_ref()))?;
    checks.extend(timer.time("axioms", || oracle_axioms(&tables, seed)));
    if fan.dim() <= 2 {
        checks.push(timer.time("chart oracle", || compare_chart_bracket(&space, CHART_EXTRA_PAIRS, seed))?);
    }
    checks.push(timer.time("closure", || oracle_closure(&space))?);
    checks.push(timer.time("embedding", || oracle_gamma(&space, op.as_ref()))?);
    checks.push(vertex_consequence(&space, &sol));
    checks.push(admissible_family_builds(&space, &sol));
    checks.push(timer.time("classify", || classify_round_trip(&space, &sol)));
    report.checks = checks;
    report.timings = timer.finish();
    Ok(report)
}
