//! `check`, `sections` and `experiment` runners.

use std::fmt;

use toric_core::lelong::{
    chern_convergence, direction_net_sequence, envelope_reconstruct, growth_check, limsup_weight,
    positive_direction_net, vertex_monomial_sequence, EnvelopeConfig, GrowthConfig, SearchFamilies,
};
use toric_core::sections::{
    certify_very_ample, lattice_points, lifted_cone, proper_faces_simplicial, section_count_table,
};
use toric_core::{GridSpec, LatticeVector, LelongError, PolySection, SectionError, SectionPolytope, ToricWeights};

use crate::error::CliError;
use crate::spec::{ExperimentKind, ExperimentSpec, SequenceSpec, Variety};
use crate::target::Target;
use crate::VERSION;

fn analysis<E: fmt::Display>(context: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Analysis {
        context,
        message: e.to_string(),
    }
}

fn exponent(m: &LatticeVector) -> String {
    let parts: Vec<String> = m.coords().iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(" "))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub dim: usize,
    pub smooth: bool,
    pub complete: bool,
    pub cartier: Vec<(Vec<usize>, String)>,
    pub convex: bool,
    pub strictly_convex: bool,
    pub basepoint_free: bool,
    pub ample: bool,
    pub very_ample: bool,
    /// Chart-semigroup certificate; `None` when not very ample.
    pub certificate: Option<Result<(), String>>,
    pub audit_agrees: bool,
    pub vertices: Option<Vec<String>>,
    pub polytope_dim: Option<usize>,
    /// `Err` when `C_φ` is not strongly convex.
    pub simplicial_faces: Result<bool, String>,
    pub cross_check_agrees: bool,
}

pub fn run_check(variety: &Variety) -> Result<CheckReport, CliError> {
    let phi = &variety.phi;
    let fan = &variety.fan;
    let p = phi.polytope();
    let cartier = fan
        .max_cones()
        .iter()
        .zip(phi.cartier())
        .map(|(c, m)| (c.generators().to_vec(), m.to_string()))
        .collect();
    let certificate = phi
        .is_very_ample()
        .then(|| certify_very_ample(phi).map_err(|e| e.to_string()));
    let simplicial_faces = match proper_faces_simplicial(&lifted_cone(phi)) {
        Ok(b) => Ok(b),
        Err(SectionError::NotStronglyConvex) => Err("not strongly convex".to_string()),
        Err(e) => return Err(analysis("lifted cone")(e)),
    };
    let faces_verdict = *simplicial_faces.as_ref().unwrap_or(&false);
    Ok(CheckReport {
        name: variety.spec.name.clone(),
        dim: fan.dim(),
        smooth: fan.is_smooth(),
        complete: fan.is_complete(),
        cartier,
        convex: phi.is_convex(),
        strictly_convex: phi.is_strictly_convex(),
        basepoint_free: phi.is_basepoint_free(),
        ample: phi.is_ample(),
        very_ample: phi.is_very_ample(),
        certificate,
        audit_agrees: phi.strictness_audit().agree(),
        vertices: p.vertices().ok().map(|v| v.iter().map(|m| m.to_string()).collect()),
        polytope_dim: p.dim(),
        simplicial_faces,
        cross_check_agrees: faces_verdict == phi.is_strictly_convex(),
    })
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variety: {}", self.name)?;
        writeln!(f, "dimension: {}", self.dim)?;
        writeln!(f, "smooth: {}", self.smooth)?;
        writeln!(f, "complete: {}", self.complete)?;
        writeln!(f, "cartier data:")?;
        for (cone, m) in &self.cartier {
            writeln!(f, "  cone {cone:?}: {m}")?;
        }
        writeln!(f, "convex: {}", self.convex)?;
        writeln!(f, "strictly convex: {}", self.strictly_convex)?;
        writeln!(f, "basepoint free: {}", self.basepoint_free)?;
        writeln!(f, "ample: {}", self.ample)?;
        writeln!(f, "very ample: {}", self.very_ample)?;
        match &self.certificate {
            Some(Ok(())) => writeln!(f, "chart generators: ok on every maximal cone")?,
            Some(Err(e)) => writeln!(f, "chart generators: FAILED ({e})")?,
            None => writeln!(f, "chart generators: n/a")?,
        }
        writeln!(
            f,
            "strictness audit: {}",
            if self.audit_agrees { "agree" } else { "disagree" }
        )?;
        match &self.vertices {
            Some(v) => writeln!(f, "P_D vertices: {}", v.join(" "))?,
            None => writeln!(f, "P_D vertices: unavailable (not basepoint free)")?,
        }
        match self.polytope_dim {
            Some(d) => writeln!(f, "P_D dimension: {d}")?,
            None => writeln!(f, "P_D dimension: empty")?,
        }
        match &self.simplicial_faces {
            Ok(b) => writeln!(f, "C_phi proper faces simplicial: {b}")?,
            Err(e) => writeln!(f, "C_phi proper faces simplicial: false ({e})")?,
        }
        writeln!(
            f,
            "cross-check with strict convexity: {}",
            if self.cross_check_agrees { "agree" } else { "disagree" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionsTable {
    pub rows: Vec<(u32, usize, Vec<String>)>,
    pub list_exponents: bool,
}

pub fn run_sections(variety: &Variety, d_max: u32, list_exponents: bool) -> Result<SectionsTable, CliError> {
    let p = variety.phi.polytope();
    let rows = (0..=d_max)
        .map(|d| {
            let pts = lattice_points(&p, d).map_err(analysis("sections"))?;
            let listed = if list_exponents {
                pts.iter().map(exponent).collect()
            } else {
                Vec::new()
            };
            Ok((d, pts.len(), listed))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(SectionsTable { rows, list_exponents })
}

impl fmt::Display for SectionsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.list_exponents {
            writeln!(f, "d,count,exponents")?;
        } else {
            writeln!(f, "d,count")?;
        }
        for (d, n, list) in &self.rows {
            if self.list_exponents {
                writeln!(f, "{d},{n},{}", list.join(" "))?;
            } else {
                writeln!(f, "{d},{n}")?;
            }
        }
        Ok(())
    }
}

/// CSV table with leading `#` comment lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(seed: u64, header: Vec<String>) -> Self {
        Self {
            comments: vec![format!("seed={seed} version={VERSION}")],
            header,
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[k].parse().ok()).collect()
    }
}

fn coordinate_header(n: usize) -> Vec<String> {
    (1..=n)
        .map(|k| format!("x{k}"))
        .chain((1..=n).map(|k| format!("theta{k}")))
        .collect()
}

fn coordinate_cells(s: &toric_core::Sample) -> Vec<String> {
    s.log
        .coords()
        .iter()
        .chain(&s.phase)
        .map(|v| v.to_string())
        .collect()
}

fn sequence(
    p: &SectionPolytope,
    seq: SequenceSpec,
    j_max: usize,
    seed: u64,
) -> Result<Vec<Option<PolySection>>, CliError> {
    match seq {
        SequenceSpec::VertexMonomials => vertex_monomial_sequence(p, j_max).map_err(analysis("sequence")),
        SequenceSpec::DirectionNet(k) => {
            let r = lattice_points(p, 1).map_err(analysis("sequence"))?.len();
            let net = positive_direction_net::<f64>(r, k, seed);
            direction_net_sequence(p, &net, j_max).map_err(analysis("sequence"))
        }
    }
}

/// Runs one experiment; identical inputs give byte-identical CSV.
pub fn run_experiment(variety: &Variety, exp: &ExperimentSpec) -> Result<Table, CliError> {
    exp.validate()?;
    let p = variety.phi.polytope();
    let n = variety.fan.dim();
    let grid: GridSpec = exp.grid.into();
    let target = exp.target.as_deref().map(Target::parse).transpose()?;
    let weights = || ToricWeights::new(&p).map_err(analysis("weights"));
    match exp.kind {
        ExperimentKind::Sections => {
            let d_max = exp.d_max.expect("validated");
            let mut t = Table::new(exp.seed, vec!["d".into(), "count".into()]);
            t.comments.push("kind=sections".into());
            for (d, count) in section_count_table(&p, d_max).map_err(analysis("sections"))? {
                t.rows.push(vec![d.to_string(), count.to_string()]);
            }
            Ok(t)
        }
        ExperimentKind::Envelope => {
            let w = weights()?;
            let target = target.expect("validated");
            let h = target.weight(&w, &p)?;
            let defaults = EnvelopeConfig::default();
            let cfg = EnvelopeConfig {
                d_max: exp.d_max.expect("validated"),
                coeff_budget: exp.coeff_budget.unwrap_or(defaults.coeff_budget),
                seed: exp.seed,
                families: exp
                    .families
                    .map(|f| SearchFamilies {
                        monomials: f.monomials,
                        adapted: f.adapted,
                        random: f.random,
                    })
                    .unwrap_or_default(),
            };
            let r = envelope_reconstruct(h.as_ref(), &p, &grid, &cfg).map_err(analysis("envelope"))?;
            let mut header = coordinate_header(n);
            header.extend(["target", "reconstruction", "rel_deviation"].map(String::from));
            let mut t = Table::new(exp.seed, header);
            t.comments.push(format!(
                "kind=envelope target={target} d_max={} coeff_budget={} candidates={} max_rel_deviation={}",
                cfg.d_max,
                cfg.coeff_budget,
                r.candidates,
                r.max_relative_deviation()
            ));
            for ((s, v), h) in r.grid.samples().iter().zip(r.grid.values()).zip(&r.target) {
                let mut row = coordinate_cells(s);
                row.extend([h.to_string(), v.to_string(), ((v - h) / h).abs().to_string()]);
                t.rows.push(row);
            }
            Ok(t)
        }
        ExperimentKind::Growth => {
            let w = weights()?;
            let target = target.expect("validated");
            let u = target.weight(&w, &p)?;
            let cfg = GrowthConfig {
                grid,
                levels: exp.levels.unwrap_or(GrowthConfig::default().levels),
                ..GrowthConfig::default()
            };
            let mut t = Table::new(exp.seed, vec!["log_radius".into(), "sup_u_minus_psi".into()]);
            match growth_check(u.as_ref(), &p, &cfg) {
                Ok(r) => {
                    t.comments.push(format!(
                        "kind=growth target={target} verdict={} c_estimate={} excluded={}",
                        if r.bounded { "bounded" } else { "unbounded" },
                        r.c_estimate,
                        r.excluded
                    ));
                    for (radius, sup) in r.sups {
                        t.rows.push(vec![radius.to_string(), sup.to_string()]);
                    }
                }
                Err(LelongError::Inconclusive { sups }) => {
                    t.comments.push(format!("kind=growth target={target} verdict=inconclusive"));
                    for (radius, sup) in sups {
                        t.rows.push(vec![radius.to_string(), sup.to_string()]);
                    }
                }
                Err(e) => return Err(analysis("growth")(e)),
            }
            Ok(t)
        }
        ExperimentKind::Limsup => {
            let j_max = exp.j_max.expect("validated");
            let seq = exp.sequence.expect("validated");
            let qs = sequence(&p, seq, j_max, exp.seed)?;
            let r = limsup_weight(&qs, j_max, &grid, n).map_err(analysis("limsup"))?;
            let mut header = coordinate_header(n);
            header.extend([format!("running_max_j{j_max}"), "max_filtered".into()]);
            let mut t = Table::new(exp.seed, header);
            t.comments.push(format!("kind=limsup sequence={seq:?} j_max={j_max}"));
            for ((s, v), reg) in r.grid.samples().iter().zip(r.grid.values()).zip(&r.regularized) {
                let mut row = coordinate_cells(s);
                row.extend([v.to_string(), reg.to_string()]);
                t.rows.push(row);
            }
            Ok(t)
        }
        ExperimentKind::Chern => {
            let w = weights()?;
            let target = target.expect("validated");
            let h = target.weight(&w, &p)?;
            let j_max = exp.j_max.expect("validated");
            let seq = exp.sequence.expect("validated");
            let qs = sequence(&p, seq, j_max, exp.seed)?;
            let rows = chern_convergence(h.as_ref(), &qs, j_max, &grid, n).map_err(analysis("chern"))?;
            let mut t = Table::new(
                exp.seed,
                ["j", "sup_deviation", "l1_deviation", "excluded"].map(String::from).to_vec(),
            );
            t.comments.push(format!(
                "kind=chern target={target} sequence={seq:?} j_max={j_max} grid_points={}",
                toric_core::WeightGrid::new(n, grid).len()
            ));
            for r in rows {
                t.rows.push(vec![
                    r.j.to_string(),
                    r.sup_deviation.to_string(),
                    r.l1_deviation.to_string(),
                    r.excluded.to_string(),
                ]);
            }
            Ok(t)
        }
    }
}
