//! Pipeline orchestration and report assembly: runs a command against a
//! parsed document and produces a deterministic structured report.

use serde::Serialize;

use crate::apps;
use crate::foliation::FoliationModel;
use crate::input::{Document, ParsedFoliation};
use crate::jac::{Analysis, FirstDivisorAnalysis};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Decompose,
    Verify,
    Tree,
    Polar,
    Semiroot,
}

impl Command {
    pub fn parse(s: &str) -> Result<Command> {
        Ok(match s {
            "analyze" => Command::Analyze,
            "decompose" => Command::Decompose,
            "verify" => Command::Verify,
            "tree" => Command::Tree,
            "polar" => Command::Polar,
            "semiroot" => Command::Semiroot,
            other => return Err(Error::Input(format!("unknown command: {other}"))),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub check: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub coord: String,
    pub branches: Vec<String>,
    pub index_f: String,
    pub index_g: String,
    pub delta: String,
    pub collinear: bool,
    pub zero_multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_multiplicity: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_multiplicity: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub id: usize,
    pub valuation: String,
    pub b: u32,
    pub classification: String,
    pub points: Vec<PointReport>,
    pub me: String,
    pub t_total: usize,
    pub t_star: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseDivisorReport {
    pub id: usize,
    pub valuation: String,
    pub m: u64,
    pub b: u32,
    pub n_e: u64,
    pub n_under: u64,
    pub dead_arc: bool,
    pub puiseux: bool,
    pub associated: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PacketReport {
    pub valuation: String,
    pub nc_multiplicity: u64,
    pub c_multiplicity: u64,
    pub bound: u64,
    pub coincidence_with_cluster: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub jacobian_multiplicity: u64,
    pub residual_multiplicity: u64,
    pub x_axis_in_jacobian: bool,
    pub packets: Vec<PacketReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub command: String,
    pub seed: u64,
    pub schema_version: u32,
    pub engine_version: String,
    pub ramification_order: u32,
    pub branch_labels: Vec<String>,
    pub divisors: Vec<DivisorReport>,
    pub base_divisors: Vec<BaseDivisorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_tangency_holds: Option<bool>,
    pub ledger: Vec<LedgerEntry>,
    pub assumptions: Vec<String>,
}

impl AnalysisReport {
    pub fn all_checks_pass(&self) -> bool {
        self.ledger.iter().all(|e| e.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "jacobian curve analysis :: command={} seed={} schema={} engine={}\n",
            self.command, self.seed, self.schema_version, self.engine_version
        ));
        out.push_str(&format!(
            "ramification order: {}\nbranches: {}\n",
            self.ramification_order,
            self.branch_labels.join(", ")
        ));
        out.push_str("\n== divisors (working graph) ==\n");
        for d in &self.divisors {
            out.push_str(&format!(
                "E{} v={} b={} [{}]  M(z) = {}  t={} t*={}{}\n",
                d.id + 1,
                d.valuation,
                d.b,
                d.classification,
                d.me,
                d.t_total,
                d.t_star,
                match d.verified {
                    Some(true) => "  verified",
                    Some(false) => "  VERIFY-FAILED",
                    None => "",
                }
            ));
            for p in &d.points {
                out.push_str(&format!(
                    "    point y={} {:?} I_F={} I_G={} delta={}{}{}\n",
                    p.coord,
                    p.branches,
                    p.index_f,
                    p.index_g,
                    p.delta,
                    if p.collinear { " collinear" } else { "" },
                    match (p.predicted_multiplicity, p.observed_multiplicity) {
                        (Some(a), Some(b)) => format!(" predicted={} observed={}", a, b),
                        _ => String::new(),
                    }
                ));
            }
        }
        if !self.base_divisors.is_empty() {
            out.push_str("\n== base graph ==\n");
            for d in &self.base_divisors {
                out.push_str(&format!(
                    "E{} v={} m={} b={} n_E={} n_under={}{}{} assoc={:?}\n",
                    d.id + 1,
                    d.valuation,
                    d.m,
                    d.b,
                    d.n_e,
                    d.n_under,
                    if d.puiseux { " puiseux" } else { " contact" },
                    if d.dead_arc { " dead-arc" } else { "" },
                    d.associated
                ));
            }
        }
        if let Some(j) = &self.jacobian {
            out.push_str(&format!("\njacobian: {}\n", j));
        }
        if let Some(dec) = &self.decomposition {
            out.push_str("\n== decomposition ==\n");
            out.push_str(&format!(
                "m0(J) = {}  residual = {}  x-axis branch: {}\n",
                dec.jacobian_multiplicity, dec.residual_multiplicity, dec.x_axis_in_jacobian
            ));
            for p in &dec.packets {
                out.push_str(&format!(
                    "packet at v={}: nc={} c={} (bound {}), contact with cluster = {}\n",
                    p.valuation,
                    p.nc_multiplicity,
                    p.c_multiplicity,
                    p.bound,
                    p.coincidence_with_cluster
                ));
            }
        }
        if let Some(t) = &self.tree {
            out.push_str("\n== contact tree ==\n");
            out.push_str(t);
        }
        if let Some(x) = self.x_tangency_holds {
            out.push_str(&format!(
                "\nx-axis transversality certificate: {}\n",
                if x { "holds" } else { "FAILS (x = 0 may be tangent to J)" }
            ));
        }
        out.push_str("\n== theorem checks ==\n");
        for e in &self.ledger {
            out.push_str(&format!(
                "[{}] {} :: {}\n",
                if e.passed { "pass" } else { "FAIL" },
                e.check,
                e.witness
            ));
        }
        if !self.assumptions.is_empty() {
            out.push_str("\n== assumptions ==\n");
            for a in &self.assumptions {
                out.push_str(&format!("- {}\n", a));
            }
        }
        out
    }
}

fn divisor_reports(a: &Analysis, with_verify: bool) -> Result<Vec<DivisorReport>> {
    let graph = &a.res.upstairs;
    let mut out = Vec::new();
    for d in &graph.divisors {
        let row = a.delta.row(d.id);
        let me = &a.me[d.id];
        let verify = if with_verify && row.is_non_collinear() {
            Some(a.verify_divisor(d.id)?)
        } else {
            None
        };
        let mut points = Vec::new();
        for (l, pt) in d.points.iter().enumerate() {
            let (pred, obs) = match &verify {
                Some(v) => (
                    Some(v.point_multiplicities[l].0),
                    Some(v.point_multiplicities[l].1),
                ),
                None => (None, None),
            };
            points.push(PointReport {
                coord: format!("{}", pt.coord),
                branches: pt
                    .branches
                    .iter()
                    .map(|&b| graph.branches[b].label.clone())
                    .collect(),
                index_f: format!("{}", row.points[l].index_f),
                index_g: format!("{}", row.points[l].index_g),
                delta: format!("{}", row.points[l].delta),
                collinear: row.points[l].is_collinear(),
                zero_multiplicity: me.t_at_point[l],
                predicted_multiplicity: pred,
                observed_multiplicity: obs,
            });
        }
        out.push(DivisorReport {
            id: d.id,
            valuation: d.valuation.to_string(),
            b: d.b(),
            classification: format!("{:?}", row.class()),
            points,
            me: if me.identically_zero {
                "0".into()
            } else {
                format!("{}", me.rational)
            },
            t_total: me.t_total,
            t_star: me.t_star,
            verified: verify.as_ref().map(|v| v.all_points_match()),
        });
    }
    Ok(out)
}

fn base_divisor_reports(a: &Analysis) -> Vec<BaseDivisorReport> {
    a.res
        .downstairs
        .iter()
        .map(|rd| BaseDivisorReport {
            id: rd.id,
            valuation: rd.valuation.to_string(),
            m: rd.m,
            b: rd.b,
            n_e: rd.n_e,
            n_under: rd.n_under,
            dead_arc: rd.dead_arc,
            puiseux: rd.puiseux_for_curve,
            associated: rd.associated.clone(),
        })
        .collect()
}

fn ledger_from_checks(records: &[crate::jac::CheckRecord]) -> Vec<LedgerEntry> {
    records
        .iter()
        .map(|c| LedgerEntry {
            check: c.name.clone(),
            passed: c.passed,
            witness: c.detail.clone(),
        })
        .collect()
}

/// Run a command against a parsed document, producing the report and, for
/// full analyses, the underlying `Analysis` for further output (DOT).
pub struct PipelineOutput {
    pub report: AnalysisReport,
    pub analysis: Option<Analysis>,
    pub first_divisor_only: bool,
}

pub fn run_pipeline(doc: &Document, command: Command) -> Result<PipelineOutput> {
    let seed = doc.options.seed;
    let trunc = doc.options.truncation;
    let engine_version = env!("CARGO_PKG_VERSION").to_string();
    let f = doc.foliation_f.parse(trunc)?;

    // polar and semiroot commands drive their own pairing
    match command {
        Command::Polar => {
            let fm = match f {
                ParsedFoliation::Model(m) => m,
                ParsedFoliation::BareForm(_) => {
                    return Err(Error::Input(
                        "polar analysis needs separatrix branches".into(),
                    ))
                }
            };
            let (a, rep) = apps::polar_analysis(&fm, seed)?;
            let mut ledger = vec![
                LedgerEntry {
                    check: "polar direction genericity certificate".into(),
                    passed: rep.generic_certificate,
                    witness: format!("direction y = ({})x", rep.direction),
                },
                LedgerEntry {
                    check: "purely non-collinear bifurcation divisors".into(),
                    passed: rep.purely_non_collinear,
                    witness: if rep.resonant {
                        "resonance detected: bound-only checks".into()
                    } else {
                        "all bifurcation divisors purely non-collinear".into()
                    },
                },
            ];
            for (v, b_c, got, expect) in &rep.per_divisor {
                ledger.push(LedgerEntry {
                    check: "polar packet multiplicity per divisor".into(),
                    passed: rep.resonant || got == expect,
                    witness: format!("v={} b^C={} got={} expected={}", v, b_c, got, expect),
                });
            }
            let divisors = divisor_reports(&a, false)?;
            let base_divisors = base_divisor_reports(&a);
            let report = AnalysisReport {
                command: "polar".into(),
                seed,
                schema_version: doc.version,
                engine_version,
                ramification_order: a.res.ram.order,
                branch_labels: a.res.branches.iter().map(|b| b.label.clone()).collect(),
                divisors,
                base_divisors,
                jacobian: Some(a.jacobian.to_string_xy()),
                decomposition: None,
                tree: None,
                x_tangency_holds: None,
                ledger,
                assumptions: standard_assumptions(&a),
            };
            return Ok(PipelineOutput {
                report,
                analysis: Some(a),
                first_divisor_only: false,
            });
        }
        Command::Semiroot => {
            let g = doc
                .foliation_g
                .as_ref()
                .ok_or_else(|| Error::Input("semiroot command needs a second foliation".into()))?
                .parse(trunc)?;
            let (fm, gm) = match (f, g) {
                (ParsedFoliation::Model(a), ParsedFoliation::Model(b)) => (a, b),
                _ => {
                    return Err(Error::Input(
                        "semiroot analysis needs branch-based foliations".into(),
                    ))
                }
            };
            let k = doc
                .options
                .semiroot_index
                .ok_or_else(|| Error::Input("semiroot command needs options.semiroot_index".into()))?;
            let fb = fm.separatrices()[0].clone();
            let hb = gm.separatrices()[0].clone();
            let sr = apps::semiroot_check(&fb, &hb, k)?;
            let mut ledger = vec![LedgerEntry {
                check: "semiroot conditions".into(),
                passed: sr.ok,
                witness: sr.reason.clone(),
            }];
            let (analysis, report) = if sr.ok {
                let (a, rep) = apps::approx_root_analysis(fm, gm, k)?;
                ledger.push(LedgerEntry {
                    check: "collinearity classification by level".into(),
                    passed: true,
                    witness: format!("{:?}", rep.classification),
                });
                ledger.push(LedgerEntry {
                    check: "first non-collinear level carries no packet".into(),
                    passed: rep.empty_first_packet,
                    witness: "constant numerator".into(),
                });
                for (v, m) in &rep.packet_mults {
                    ledger.push(LedgerEntry {
                        check: "packet multiplicity per level".into(),
                        passed: true,
                        witness: format!("v={} m0={}", v, m),
                    });
                }
                let divisors = divisor_reports(&a, false)?;
                let base_divisors = base_divisor_reports(&a);
                let report = AnalysisReport {
                    command: "semiroot".into(),
                    seed,
                    schema_version: doc.version,
                    engine_version,
                    ramification_order: a.res.ram.order,
                    branch_labels: a.res.branches.iter().map(|b| b.label.clone()).collect(),
                    divisors,
                    base_divisors,
                    jacobian: Some(a.jacobian.to_string_xy()),
                    decomposition: None,
                    tree: None,
                    x_tangency_holds: None,
                    ledger,
                    assumptions: standard_assumptions(&a),
                };
                (Some(a), report)
            } else {
                let report = AnalysisReport {
                    command: "semiroot".into(),
                    seed,
                    schema_version: doc.version,
                    engine_version,
                    ramification_order: 1,
                    branch_labels: vec![fb.label, hb.label],
                    divisors: vec![],
                    base_divisors: vec![],
                    jacobian: None,
                    decomposition: None,
                    tree: None,
                    x_tangency_holds: None,
                    ledger,
                    assumptions: vec![],
                };
                (None, report)
            };
            return Ok(PipelineOutput {
                report,
                analysis,
                first_divisor_only: false,
            });
        }
        _ => {}
    }

    let g = doc
        .foliation_g
        .as_ref()
        .ok_or_else(|| Error::Input("this command needs two foliations".into()))?
        .parse(trunc)?;

    match (f, g) {
        (ParsedFoliation::Model(fm), ParsedFoliation::Model(gm)) => {
            run_full(doc, command, fm, gm, engine_version)
        }
        (ff, gg) => {
            // first-divisor analysis from bare forms
            let f_form = match ff {
                ParsedFoliation::Model(m) => m.form()?,
                ParsedFoliation::BareForm(w) => w,
            };
            let g_form = match gg {
                ParsedFoliation::Model(m) => m.form()?,
                ParsedFoliation::BareForm(w) => w,
            };
            run_first_divisor(doc, command, &f_form, &g_form, engine_version)
        }
    }
}

fn standard_assumptions(a: &Analysis) -> Vec<String> {
    let mut out = vec![
        "no common separatrix (validated on branch lists)".into(),
        "divisors invariant for both foliations (validated on strict transforms)".into(),
    ];
    match (&a.f, &a.g) {
        (FoliationModel::Logarithmic { .. }, FoliationModel::Logarithmic { .. }) => {
            out.push("logarithmic models: generalized-curve behaviour assumed from nonzero residues".into());
        }
        _ => {
            out.push(
                "explicit 1-forms: generalized-curve and second-type properties are assumptions of record"
                    .into(),
            );
        }
    }
    out
}

fn run_full(
    doc: &Document,
    command: Command,
    fm: FoliationModel,
    gm: FoliationModel,
    engine_version: String,
) -> Result<PipelineOutput> {
    let seed = doc.options.seed;
    let a = Analysis::with_options(fm, gm, doc.options.ramification, true)?;
    let mut ledger: Vec<LedgerEntry> = Vec::new();
    ledger.push(LedgerEntry {
        check: "delta sum over first bifurcation divisor".into(),
        passed: true,
        witness: "0".into(),
    });
    let nu_sum = a.base_f_form.multiplicity() as u64 + a.base_g_form.multiplicity() as u64;
    let m0 = a.jacobian_multiplicity();
    ledger.push(LedgerEntry {
        check: "jacobian multiplicity lower bound".into(),
        passed: m0 >= nu_sum,
        witness: format!("m0(J) = {} >= {}", m0, nu_sum),
    });
    if a.base_e1_non_collinear() {
        ledger.push(LedgerEntry {
            check: "multiplicity equality at non-collinear first divisor".into(),
            passed: m0 == nu_sum,
            witness: format!("m0(J) = {}, nu(F)+nu(G) = {}", m0, nu_sum),
        });
    }
    let with_verify = matches!(command, Command::Verify | Command::Decompose);
    if with_verify {
        for d in a.res.upstairs.bifurcation_divisors() {
            if !a.delta.row(d).is_non_collinear() {
                continue;
            }
            let rec = a.verify_divisor(d)?;
            ledger.push(LedgerEntry {
                check: "per-point multiplicity formula".into(),
                passed: rec.all_points_match(),
                witness: format!(
                    "divisor {}: In(J)(1,y) = ({}) vs ({}) * {}",
                    d + 1,
                    rec.lhs,
                    rec.constant,
                    rec.rhs
                ),
            });
            for (l, _) in a.res.upstairs.divisors[d].points.iter().enumerate() {
                if let Some(records) = a.consecutive_divisor_check(d, l)? {
                    for r in records {
                        ledger.push(LedgerEntry {
                            check: format!("consecutive divisors: {}", r.name),
                            passed: r.passed,
                            witness: r.detail,
                        });
                    }
                }
            }
        }
    }
    let decomposition = if matches!(command, Command::Decompose | Command::Verify) {
        let dec = a.decompose()?;
        for c in a.intersection_checks(&dec)? {
            ledger.push(LedgerEntry {
                check: format!("intersection identity: {}", c.name),
                passed: c.passed,
                witness: c.detail,
            });
        }
        let packets = dec
            .packets
            .iter()
            .map(|p| PacketReport {
                valuation: p.valuation.to_string(),
                nc_multiplicity: p.nc_multiplicity,
                c_multiplicity: p.c_multiplicity,
                bound: p.bound_nc,
                coincidence_with_cluster: p.valuation.to_string(),
            })
            .collect();
        Some(DecompositionReport {
            jacobian_multiplicity: dec.jacobian_multiplicity,
            residual_multiplicity: dec.residual_multiplicity,
            x_axis_in_jacobian: dec.x_axis_in_jacobian,
            packets,
        })
    } else {
        None
    };
    let tree = if command == Command::Tree {
        let tm = apps::tree_model(&a)?;
        ledger.push(LedgerEntry {
            check: "tree function matches divisor function".into(),
            passed: true,
            witness: format!("{} bars", tm.bars.len()),
        });
        Some(tm.render())
    } else {
        None
    };
    let xt = a.x_tangency_check()?;
    let divisors = divisor_reports(&a, with_verify)?;
    let base_divisors = base_divisor_reports(&a);
    let report = AnalysisReport {
        command: format!("{:?}", command).to_lowercase(),
        seed,
        schema_version: doc.version,
        engine_version,
        ramification_order: a.res.ram.order,
        branch_labels: a.res.branches.iter().map(|b| b.label.clone()).collect(),
        divisors,
        base_divisors,
        jacobian: Some(a.jacobian.to_string_xy()),
        decomposition,
        tree,
        x_tangency_holds: Some(xt.holds),
        ledger,
        assumptions: standard_assumptions(&a),
    };
    Ok(PipelineOutput {
        report,
        analysis: Some(a),
        first_divisor_only: false,
    })
}

fn run_first_divisor(
    doc: &Document,
    command: Command,
    f_form: &crate::form::OneForm,
    g_form: &crate::form::OneForm,
    engine_version: String,
) -> Result<PipelineOutput> {
    if matches!(command, Command::Tree) {
        return Err(Error::Input("tree models need branch-based inputs".into()));
    }
    let fda = FirstDivisorAnalysis::new(f_form, g_form)?;
    let mut ledger = Vec::new();
    ledger.push(LedgerEntry {
        check: "per-point multiplicity formula".into(),
        passed: fda.verify.all_points_match(),
        witness: format!(
            "first divisor: In(J)(1,y) = ({}) vs ({}) * {}",
            fda.verify.lhs, fda.verify.constant, fda.verify.rhs
        ),
    });
    let mut points = Vec::new();
    for (l, c) in fda.coords.iter().enumerate() {
        points.push(PointReport {
            coord: format!("{}", c),
            branches: vec![],
            index_f: format!("{}", fda.row.points[l].index_f),
            index_g: format!("{}", fda.row.points[l].index_g),
            delta: format!("{}", fda.row.points[l].delta),
            collinear: fda.row.points[l].is_collinear(),
            zero_multiplicity: fda.me.t_at_point[l],
            predicted_multiplicity: Some(fda.verify.point_multiplicities[l].0),
            observed_multiplicity: Some(fda.verify.point_multiplicities[l].1),
        });
    }
    let divisors = vec![DivisorReport {
        id: 0,
        valuation: "1".into(),
        b: fda.coords.len() as u32,
        classification: format!("{:?}", fda.row.class()),
        points,
        me: if fda.me.identically_zero {
            "0".into()
        } else {
            format!("{}", fda.me.rational)
        },
        t_total: fda.me.t_total,
        t_star: fda.me.t_star,
        verified: Some(fda.verify.all_points_match()),
    }];
    let report = AnalysisReport {
        command: format!("{:?}", command).to_lowercase(),
        seed: doc.options.seed,
        schema_version: doc.version,
        engine_version,
        ramification_order: 1,
        branch_labels: vec![],
        divisors,
        base_divisors: vec![],
        jacobian: Some(fda.jacobian.to_string_xy()),
        decomposition: None,
        tree: None,
        x_tangency_holds: Some(fda.x_tangency.holds),
        ledger,
        assumptions: vec![
            "first-divisor analysis only: separatrix branches not provided".into(),
            "multiplicities along the first divisor read from the transformed dx-coefficient"
                .into(),
        ],
    };
    Ok(PipelineOutput {
        report,
        analysis: None,
        first_divisor_only: true,
    })
}
