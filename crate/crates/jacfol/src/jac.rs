//! The jacobian-curve analysis: index tables over the resolution of the
//! combined separatrix curve, per-divisor verification of the predicted
//! multiplicities against exact initial-form factorizations, covers of
//! collinear points, and the induced decomposition of the jacobian curve.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{BigInt, One};

use crate::branch::{evaluate_along, Branch, EvalOutcome};
use crate::delta::{
    me_function, me_function_from, validate_me, DeltaTable, DivisorDelta, MeFunction, PointDelta,
};
use crate::foliation::{
    cs_index_at_divisor_point, divisor_restriction, milnor_along, tangency_order,
    FoliationModel, LogWeights,
};
use crate::form::OneForm;
use crate::graph::Resolution;
use crate::poly2::{initial_form_poly, Poly2};
use crate::scalar::{Rat, Scalar};
use crate::upoly::{rational_roots, RationalFunction, UPoly};
use crate::{Error, Result};

/// J(x,y) = AQ - BP of two saturated forms; errors when the foliations
/// coincide (identically zero wedge).
pub fn jacobian_form(f: &OneForm, g: &OneForm) -> Result<Poly2> {
    let j = f.wedge(g);
    if j.is_zero() {
        return Err(Error::Input(
            "identical foliations: jacobian vanishes identically".into(),
        ));
    }
    Ok(j)
}

/// One verified divisor: the weighted initial form of the jacobian compared
/// with the predicted factorization prod (y-c_l)^(mC+mD-1) * N_E(y).
#[derive(Clone, Debug)]
pub struct VerifyRecord {
    pub divisor: usize,
    pub lhs: UPoly,
    pub rhs: UPoly,
    pub constant: Scalar,
    pub proportional: bool,
    /// x-power of the initial form: jacobian mass on x = 0 at the first
    /// divisor, and corner mass deeper in the graph.
    pub x_mass: u32,
    /// Degree gap rhs - lhs; nonzero means mass escaped to the second chart.
    pub degree_gap: i64,
    /// Per graph point: (predicted multiplicity, observed multiplicity).
    pub point_multiplicities: Vec<(i64, i64)>,
}

impl VerifyRecord {
    pub fn all_points_match(&self) -> bool {
        self.proportional && self.point_multiplicities.iter().all(|&(p, o)| p == o)
    }
}

/// Result of walking a cover of a collinear point.
#[derive(Clone, Debug)]
pub struct PacketRecord {
    pub divisor: usize,
    pub point: usize,
    pub cover: Vec<usize>,
    pub multiplicity: u64,
}

/// Per-divisor contribution to the decomposition, aggregated over the
/// associated divisors of the base bifurcation divisor.
#[derive(Clone, Debug)]
pub struct DivisorPacket {
    pub base_divisor: usize,
    pub valuation: Rat,
    pub nc_multiplicity: u64,
    pub c_multiplicity: u64,
    pub bound_nc: u64,
    pub packets: Vec<PacketRecord>,
    pub maximal_case: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub packets: Vec<DivisorPacket>,
    pub jacobian_multiplicity: u64,
    pub residual_multiplicity: u64,
    pub x_axis_in_jacobian: bool,
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// X-axis tangency certificate for the jacobian curve at the first divisor.
#[derive(Clone, Debug)]
pub struct XTangencyRecord {
    pub quantity: Scalar,
    pub holds: bool,
    pub x_divides_jacobian: bool,
}

/// Full analysis of a pair of foliations along the resolution of the union
/// of their separatrices.
pub struct Analysis {
    pub f: FoliationModel,
    pub g: FoliationModel,
    pub res: Resolution,
    pub c_count: usize,
    pub base_f_form: OneForm,
    pub base_g_form: OneForm,
    pub up_f_form: OneForm,
    pub up_g_form: OneForm,
    pub f_weights: Option<LogWeights>,
    pub g_weights: Option<LogWeights>,
    pub delta: DeltaTable,
    pub me: Vec<MeFunction>,
    pub jacobian: Poly2,
    pub up_jacobian: Poly2,
}

fn same_branch(a: &Branch, b: &Branch) -> bool {
    a.mult == b.mult && a.terms == b.terms
}

impl Analysis {
    pub fn new(f: FoliationModel, g: FoliationModel) -> Result<Analysis> {
        Analysis::with_options(f, g, None, true)
    }

    pub fn with_options(
        f: FoliationModel,
        g: FoliationModel,
        ram_override: Option<u32>,
        cross_check: bool,
    ) -> Result<Analysis> {
        for cf in f.separatrices() {
            for cg in g.separatrices() {
                if same_branch(cf, cg) {
                    return Err(Error::Assumption(format!(
                        "common separatrix: {} and {}",
                        cf.label, cg.label
                    )));
                }
            }
        }
        if f.separatrices().is_empty() || g.separatrices().is_empty() {
            return Err(Error::Input(
                "both foliations need separatrix branches; use the first-divisor analysis otherwise"
                    .into(),
            ));
        }
        let c_count = f.separatrices().len();
        let mut branches: Vec<Branch> = f.separatrices().to_vec();
        branches.extend(g.separatrices().to_vec());
        let res = Resolution::build(branches, ram_override)?;
        let n = res.ram.order;

        let base_f_form = f.form()?.saturate();
        let base_g_form = g.form()?.saturate();
        let jacobian = jacobian_form(&base_f_form, &base_g_form)?;

        // Upstairs working forms: logarithmic models are re-assembled from
        // the lifted branches (the pullback of a logarithmic form is the
        // logarithmic form of the lifted data); explicit forms are pulled
        // back through x = u^n.
        let lift_weights = |weights: &[Scalar], base_range: std::ops::Range<usize>| -> LogWeights {
            let mut map = BTreeMap::new();
            for (k, &(bi, _)) in res.ram.origin.iter().enumerate() {
                if base_range.contains(&bi) {
                    map.insert(k, weights[bi - base_range.start].clone());
                }
            }
            LogWeights::new(map)
        };
        let (up_f_form, f_weights) = match &f {
            FoliationModel::Logarithmic { weights, .. } => {
                let w = lift_weights(weights, 0..c_count);
                let lifted: Vec<Branch> = res
                    .ram
                    .lifted
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| res.ram.origin[*k].0 < c_count)
                    .map(|(_, b)| b.clone())
                    .collect();
                let lifted_weights: Vec<Scalar> = res
                    .ram
                    .origin
                    .iter()
                    .filter(|(bi, _)| *bi < c_count)
                    .map(|(bi, _)| weights[*bi].clone())
                    .collect();
                (
                    crate::foliation::assemble_logarithmic(&lifted, &lifted_weights)?,
                    Some(w),
                )
            }
            FoliationModel::Explicit { .. } => {
                let form = if n == 1 {
                    base_f_form.clone()
                } else {
                    base_f_form.ramified_pullback(n).saturate()
                };
                (form, None)
            }
        };
        let (up_g_form, g_weights) = match &g {
            FoliationModel::Logarithmic { weights, .. } => {
                let total = res.branches.len();
                let w = lift_weights(weights, c_count..total);
                let lifted: Vec<Branch> = res
                    .ram
                    .lifted
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| res.ram.origin[*k].0 >= c_count)
                    .map(|(_, b)| b.clone())
                    .collect();
                let lifted_weights: Vec<Scalar> = res
                    .ram
                    .origin
                    .iter()
                    .filter(|(bi, _)| *bi >= c_count)
                    .map(|(bi, _)| weights[*bi - c_count].clone())
                    .collect();
                (
                    crate::foliation::assemble_logarithmic(&lifted, &lifted_weights)?,
                    Some(w),
                )
            }
            FoliationModel::Explicit { .. } => {
                let form = if n == 1 {
                    base_g_form.clone()
                } else {
                    base_g_form.ramified_pullback(n).saturate()
                };
                (form, None)
            }
        };
        let up_jacobian = jacobian_form(&up_f_form, &up_g_form)?;

        // implicit equations of lifted branches, for the kappa cross-check
        let impls: BTreeMap<usize, Poly2> = res
            .ram
            .lifted
            .iter()
            .enumerate()
            .map(|(k, b)| Ok((k, b.implicit_equation()?)))
            .collect::<Result<_>>()?;

        let graph = &res.upstairs;
        let mut rows = Vec::with_capacity(graph.divisors.len());
        for d in &graph.divisors {
            if let Some(w) = &f_weights {
                w.kappa_checked(graph, d.id, &impls)?;
            }
            if let Some(w) = &g_weights {
                w.kappa_checked(graph, d.id, &impls)?;
            }
            let mut points = Vec::with_capacity(d.points.len());
            for (l, pt) in d.points.iter().enumerate() {
                let index_f = match &f_weights {
                    Some(w) => {
                        let closed = w.index_at(graph, d.id, l)?;
                        if cross_check {
                            let explicit =
                                cs_index_at_divisor_point(&up_f_form, graph, d.id, &pt.coord)?;
                            if explicit != closed {
                                return Err(Error::Internal(format!(
                                    "index mismatch at divisor {} point {}: closed {} vs residue {}",
                                    d.id, l, closed, explicit
                                )));
                            }
                        }
                        closed
                    }
                    None => cs_index_at_divisor_point(&up_f_form, graph, d.id, &pt.coord)?,
                };
                let index_g = match &g_weights {
                    Some(w) => {
                        let closed = w.index_at(graph, d.id, l)?;
                        if cross_check {
                            let explicit =
                                cs_index_at_divisor_point(&up_g_form, graph, d.id, &pt.coord)?;
                            if explicit != closed {
                                return Err(Error::Internal(format!(
                                    "index mismatch at divisor {} point {}: closed {} vs residue {}",
                                    d.id, l, closed, explicit
                                )));
                            }
                        }
                        closed
                    }
                    None => cs_index_at_divisor_point(&up_g_form, graph, d.id, &pt.coord)?,
                };
                let delta = index_g.sub_ref(&index_f);
                points.push(PointDelta {
                    index_f,
                    index_g,
                    delta,
                });
            }
            rows.push(DivisorDelta {
                divisor: d.id,
                points,
            });
        }
        let delta = DeltaTable { rows };

        let mut me = Vec::with_capacity(graph.divisors.len());
        for row in &delta.rows {
            let m = me_function(graph, row)?;
            validate_me(row, &m)?;
            me.push(m);
        }

        let analysis = Analysis {
            f,
            g,
            res,
            c_count,
            base_f_form,
            base_g_form,
            up_f_form,
            up_g_form,
            f_weights,
            g_weights,
            delta,
            me,
            jacobian,
            up_jacobian,
        };
        analysis.validate_first_bifurcation()?;
        Ok(analysis)
    }

    /// The first bifurcation divisor upstairs (walking the root chain).
    pub fn first_bifurcation(&self) -> Option<usize> {
        let g = &self.res.upstairs;
        let mut cur = 0usize;
        loop {
            let d = &g.divisors[cur];
            if d.is_bifurcation() {
                return Some(cur);
            }
            match d.point_child.first().copied().flatten() {
                Some(next) => cur = next,
                None => return None,
            }
        }
    }

    fn validate_first_bifurcation(&self) -> Result<()> {
        if let Some(e) = self.first_bifurcation() {
            let sum = self.delta.row(e).delta_sum();
            if !sum.is_zero() {
                return Err(Error::TheoremCheck(format!(
                    "delta sum over the first bifurcation divisor is {}, expected 0",
                    sum
                )));
            }
        }
        Ok(())
    }

    /// Whether the first divisor of the base plane is non-collinear,
    /// measured on its associated upstairs divisor.
    pub fn base_e1_non_collinear(&self) -> bool {
        let e1 = &self.res.downstairs[0];
        debug_assert!(e1.valuation.is_one());
        let up = e1.associated[0];
        self.delta.row(up).is_non_collinear()
    }

    /// Number of upstairs C-branches at an upstairs point.
    fn point_counts(&self, divisor: usize, l: usize) -> (u32, u32) {
        let pt = &self.res.upstairs.divisors[divisor].points[l];
        let mut mc = 0;
        let mut md = 0;
        for &b in &pt.branches {
            if self.res.ram.origin[b].0 < self.c_count {
                mc += 1;
            } else {
                md += 1;
            }
        }
        (mc, md)
    }

    /// Predicted multiplicity of the transformed jacobian at a point of a
    /// non-collinear divisor: m_P(C) + m_P(D) + tau_E(P).
    pub fn predicted_multiplicity(&self, divisor: usize, l: usize) -> Result<i64> {
        let row = self.delta.row(divisor);
        if !row.is_non_collinear() {
            return Err(Error::Input(format!(
                "divisor {} is collinear: no prediction available",
                divisor
            )));
        }
        let (mc, md) = self.point_counts(divisor, l);
        let tau = self.me[divisor].tau_at_point(row, l);
        Ok(mc as i64 + md as i64 + tau)
    }

    /// Exact verification of the initial form of the jacobian at a
    /// non-collinear divisor against the predicted factorization.
    pub fn verify_divisor(&self, divisor: usize) -> Result<VerifyRecord> {
        let row = self.delta.row(divisor);
        if !row.is_non_collinear() {
            return Err(Error::Input(format!(
                "divisor {} is collinear: nothing to verify",
                divisor
            )));
        }
        let graph = &self.res.upstairs;
        let p = graph.divisors[divisor].valuation;
        let eps = graph.adapted_eps(divisor);
        let shifted = self.up_jacobian.shift_y(&eps);
        let (inj, _nu) = initial_form_poly(&shifted, &BigRational::from_integer(BigInt::from(p)))?;
        let x_mass = inj.x_valuation();
        let lhs = inj.at_x1();
        // rhs = prod (y - c_l)^(mC + mD - 1) * raw numerator of M_E
        let me = &self.me[divisor];
        let mut rhs = me.raw_numerator.clone();
        for (l, pt) in graph.divisors[divisor].points.iter().enumerate() {
            let (mc, md) = self.point_counts(divisor, l);
            let e = (mc + md - 1) as usize;
            for _ in 0..e {
                rhs = rhs.mul(&UPoly::linear_root(&pt.coord));
            }
        }
        let degree_gap = rhs.degree().map(|d| d as i64).unwrap_or(-1)
            - lhs.degree().map(|d| d as i64).unwrap_or(-1);
        let (constant, proportional) = if lhs.is_zero() || rhs.is_zero() {
            (Scalar::zero(), false)
        } else {
            let k = lhs.leading().div_ref(&rhs.leading())?;
            (k.clone(), lhs == rhs.scale(&k))
        };
        let mut point_multiplicities = Vec::new();
        for (l, pt) in graph.divisors[divisor].points.iter().enumerate() {
            let predicted = self.predicted_multiplicity(divisor, l)?;
            let observed = if lhs.is_zero() {
                -1
            } else {
                lhs.root_multiplicity(&pt.coord) as i64
            };
            point_multiplicities.push((predicted, observed));
        }
        Ok(VerifyRecord {
            divisor,
            lhs,
            rhs,
            constant,
            proportional,
            x_mass,
            degree_gap,
            point_multiplicities,
        })
    }

    /// Checks for a pair of consecutive bifurcation divisors E < E' through
    /// the point l of E. Returns None when no further bifurcation exists.
    pub fn consecutive_divisor_check(&self, divisor: usize, l: usize) -> Result<Option<Vec<CheckRecord>>> {
        let graph = &self.res.upstairs;
        let next = match graph.next_bifurcation(divisor, l) {
            Some(n) => n,
            None => return Ok(None),
        };
        let chain = graph.chain_to_next_bifurcation(divisor, l);
        let mut records = Vec::new();
        let p_collinear = self.delta.row(divisor).points[l].is_collinear();
        // structural transport: collinearity is constant along the chain
        let mut transport_ok = true;
        for &d in &chain {
            if d == next {
                break;
            }
            let r = self.delta.row(d);
            if r.points.len() == 1 {
                let pc = r.points[0].is_collinear();
                if pc != p_collinear {
                    transport_ok = false;
                }
            }
        }
        records.push(CheckRecord {
            name: "collinearity transport along chain".into(),
            passed: transport_ok,
            detail: format!("chain from divisor {} through point {}", divisor, l),
        });
        if p_collinear {
            // sum of deltas over the next bifurcation divisor vanishes
            let sum = self.delta.row(next).delta_sum();
            records.push(CheckRecord {
                name: "delta sum vanishes after collinear point".into(),
                passed: sum.is_zero(),
                detail: format!("divisor {}: sum {}", next, sum),
            });
        } else {
            let row = self.delta.row(next);
            let me = &self.me[next];
            let n_count = row.non_collinear_points().len();
            records.push(CheckRecord {
                name: "consecutive divisor is non-collinear".into(),
                passed: row.is_non_collinear(),
                detail: format!("divisor {}", next),
            });
            records.push(CheckRecord {
                name: "zero count matches non-collinear count".into(),
                passed: n_count == me.t_total + 1,
                detail: format!("#N = {}, t + 1 = {}", n_count, me.t_total + 1),
            });
            // multiplicity conservation: m_P at E equals the total mass at E'
            let here = self.verify_divisor(divisor)?;
            let there = self.verify_divisor(next)?;
            let m_p = here
                .lhs
                .root_multiplicity(&graph.divisors[divisor].points[l].coord)
                as i64;
            let total: i64 = there.lhs.degree().map(|d| d as i64).unwrap_or(0);
            records.push(CheckRecord {
                name: "multiplicity conserved along chain".into(),
                passed: m_p == total,
                detail: format!("m_P = {}, total at next = {}", m_p, total),
            });
        }
        Ok(Some(records))
    }

    /// The unique non-collinear cover of a divisor at a collinear point:
    /// walk each branch geodesic to its first non-collinear bifurcation
    /// divisor past E.
    pub fn cover_of(&self, divisor: usize, l: usize) -> Result<Vec<usize>> {
        let graph = &self.res.upstairs;
        let row = self.delta.row(divisor);
        if !row.points[l].is_collinear() {
            return Err(Error::Input(format!(
                "point {} of divisor {} is non-collinear: no cover needed",
                l, divisor
            )));
        }
        let mut cover: Vec<usize> = Vec::new();
        let pt_branches = graph.divisors[divisor].points[l].branches.clone();
        for b in pt_branches {
            let mut cur = divisor;
            loop {
                // point of cur containing branch b
                let pl = graph.divisors[cur]
                    .points
                    .iter()
                    .position(|p| p.branches.contains(&b))
                    .ok_or_else(|| Error::Internal("branch left its geodesic".into()))?;
                match graph.next_bifurcation(cur, pl) {
                    None => {
                        return Err(Error::TheoremCheck(format!(
                            "no non-collinear divisor covers branch {} past divisor {}",
                            self.res.upstairs.branches[b].label, divisor
                        )));
                    }
                    Some(next) => {
                        if self.delta.row(next).is_non_collinear() {
                            if !cover.contains(&next) {
                                cover.push(next);
                            }
                            break;
                        }
                        cur = next;
                    }
                }
            }
        }
        cover.sort_unstable();
        Ok(cover)
    }

    /// Multiplicity of the jacobian packet attached to a collinear point:
    /// t_P + sum over the cover of (#N(E_l) - t(E_l)).
    pub fn collinear_packet(&self, divisor: usize, l: usize) -> Result<PacketRecord> {
        let cover = self.cover_of(divisor, l)?;
        let t_p = self.me[divisor].t_at_point[l] as u64;
        let mut m = t_p;
        for &e in &cover {
            let n_count = self.delta.row(e).non_collinear_points().len() as u64;
            let t_e = self.me[e].t_total as u64;
            m += n_count - t_e;
        }
        Ok(PacketRecord {
            divisor,
            point: l,
            cover,
            multiplicity: m,
        })
    }

    /// Jacobian multiplicity at the origin.
    pub fn jacobian_multiplicity(&self) -> u64 {
        self.jacobian.order().unwrap_or(0) as u64
    }

    /// Milnor number of F from the cached saturated form.
    pub fn milnor_f(&self) -> Result<u64> {
        crate::foliation::intersection_number_at_origin(&self.base_f_form.a, &self.base_f_form.b)
    }

    /// Milnor number of G from the cached saturated form.
    pub fn milnor_g(&self) -> Result<u64> {
        crate::foliation::intersection_number_at_origin(&self.base_g_form.a, &self.base_g_form.b)
    }

    /// Milnor number through the fastest sound route: positive-weight
    /// logarithmic models are generalized curves, where the foliation and
    /// curve Milnor numbers agree; anything else goes through the resultant.
    fn milnor_fast(&self, which: usize) -> Result<u64> {
        let model = if which == 0 { &self.f } else { &self.g };
        if let FoliationModel::Logarithmic { branches, weights } = model {
            if weights.iter().all(|w| w.is_positive_rational()) {
                return crate::foliation::milnor_of_curve(branches);
            }
        }
        if which == 0 {
            self.milnor_f()
        } else {
            self.milnor_g()
        }
    }

    /// The decomposition of the jacobian curve into per-divisor packets plus
    /// a residual part, with every stated bound checked.
    pub fn decompose(&self) -> Result<Decomposition> {
        let graph = &self.res.upstairs;
        let mut packets = Vec::new();
        let mut explained: u64 = 0;
        for rd in &self.res.downstairs {
            if !rd.is_bifurcation() {
                continue;
            }
            // base divisor collinearity from any associated divisor
            let assoc = &rd.associated;
            let non_collinear = self.delta.row(assoc[0]).is_non_collinear();
            for &a in assoc {
                if self.delta.row(a).is_non_collinear() != non_collinear {
                    return Err(Error::Internal(
                        "associated divisors disagree on collinearity".into(),
                    ));
                }
            }
            if !non_collinear {
                continue;
            }
            let mut nc_multiplicity = 0u64;
            let mut c_multiplicity = 0u64;
            let mut sub_packets = Vec::new();
            let mut maximal_case = true;
            for &a in assoc {
                let row = self.delta.row(a);
                let me = &self.me[a];
                // bound: t* <= #N - 1 <= b - 1
                let n_count = row.non_collinear_points().len() as u64;
                let b_up = graph.divisors[a].b() as u64;
                if (me.t_star as u64) > n_count.saturating_sub(1) || n_count > b_up {
                    return Err(Error::TheoremCheck(format!(
                        "packet bound violated at upstairs divisor {}",
                        a
                    )));
                }
                nc_multiplicity += me.t_star as u64;
                for l in row.collinear_points() {
                    let p = self.collinear_packet(a, l)?;
                    c_multiplicity += p.multiplicity;
                    sub_packets.push(p);
                }
                let purely = row.collinear_points().is_empty();
                let sum_nonzero = !row.delta_sum_over_non_collinear().is_zero();
                if purely && sum_nonzero {
                    if me.t_star as u64 != b_up - 1 {
                        return Err(Error::TheoremCheck(format!(
                            "maximal-multiplicity case violated at upstairs divisor {}",
                            a
                        )));
                    }
                } else {
                    maximal_case = false;
                }
            }
            let bound_nc = {
                let base = rd.n_under * rd.n_e * (rd.b as u64 - 1);
                if rd.dead_arc {
                    base - rd.n_under
                } else {
                    base
                }
            };
            if nc_multiplicity > bound_nc {
                return Err(Error::TheoremCheck(format!(
                    "base packet bound violated at divisor v={}: {} > {}",
                    rd.valuation, nc_multiplicity, bound_nc
                )));
            }
            explained += nc_multiplicity + c_multiplicity;
            packets.push(DivisorPacket {
                base_divisor: rd.id,
                valuation: rd.valuation.clone(),
                nc_multiplicity,
                c_multiplicity,
                bound_nc,
                packets: sub_packets,
                maximal_case,
            });
        }
        let m0 = self.jacobian_multiplicity();
        let nu_sum = self.base_f_form.multiplicity() as u64 + self.base_g_form.multiplicity() as u64;
        if m0 < nu_sum {
            return Err(Error::Internal(
                "jacobian multiplicity below the multiplicity sum".into(),
            ));
        }
        if self.base_e1_non_collinear() && m0 != nu_sum {
            return Err(Error::TheoremCheck(format!(
                "first divisor non-collinear but m0(J) = {} exceeds {}",
                m0, nu_sum
            )));
        }
        if explained > m0 {
            return Err(Error::TheoremCheck(format!(
                "packets explain multiplicity {} exceeding m0(J) = {}",
                explained, m0
            )));
        }
        let x_axis_in_jacobian = self.jacobian.x_valuation() > 0;
        Ok(Decomposition {
            packets,
            jacobian_multiplicity: m0,
            residual_multiplicity: m0 - explained,
            x_axis_in_jacobian,
        })
    }

    /// Intersection multiplicity of the jacobian curve with a branch.
    pub fn jacobian_intersection(&self, s: &Branch) -> Result<u64> {
        let bound = (s.trunc as u64).saturating_mul(2);
        match evaluate_along(&self.jacobian, s, bound)? {
            EvalOutcome::Finite(o) => Ok(o),
            EvalOutcome::InfiniteWithinTruncation(_) => Err(Error::Assumption(format!(
                "jacobian contains the branch {}",
                s.label
            ))),
        }
    }

    /// Curvette of a base divisor with a seeded transversal coefficient.
    pub fn base_curvette(&self, base_divisor: usize, seed_shift: i64) -> Result<Branch> {
        let rd = &self.res.downstairs[base_divisor];
        let rep = rd.cluster[0];
        let b = &self.res.branches[rep];
        let m = rd.m as u32;
        let mut terms: Vec<(u32, Scalar)> = Vec::new();
        for &(j, ref c) in &b.terms {
            let e = BigRational::new(BigInt::from(j), BigInt::from(b.mult));
            if e < rd.valuation {
                // exponent e*m is integral by the definition of m
                let te = (&e * BigRational::from_integer(BigInt::from(m))).to_integer();
                terms.push((te.to_string().parse().unwrap(), c.clone()));
            }
        }
        let ve = (&rd.valuation * BigRational::from_integer(BigInt::from(m))).to_integer();
        let ve: u32 = ve.to_string().parse().unwrap();
        // transversal coefficient: avoid the coefficients used by the cluster
        let mut cand = 5 + seed_shift.abs();
        'outer: loop {
            let c = Scalar::from_int(cand);
            for &bi in &rd.cluster {
                let bb = &self.res.branches[bi];
                for k in 0..bb.mult {
                    let conj = bb.conjugate_u_terms(k, bb.mult)?;
                    let e_t = (&rd.valuation
                        * BigRational::from_integer(BigInt::from(bb.mult)))
                    .to_integer()
                    .to_string()
                    .parse::<u32>()
                    .ok();
                    if let Some(et) = e_t {
                        if conj.iter().any(|&(e, ref cc)| e == et && *cc == c) {
                            cand += 1;
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        terms.push((ve, Scalar::from_int(cand)));
        Branch::new(m, terms, ve + m.max(4) * 4, &format!("curvette_v{}", rd.valuation))
    }

    /// nu_E(C) = (C, curvette)_0 for the OTHER side of the pair (which = 0
    /// picks the separatrices of F, 1 those of G).
    pub fn curvette_intersection(&self, base_divisor: usize, which: usize) -> Result<u64> {
        let curvette = self.base_curvette(base_divisor, 0)?;
        let range = if which == 0 {
            0..self.c_count
        } else {
            self.c_count..self.res.branches.len()
        };
        let mut total = 0u64;
        for i in range {
            total += self.res.branches[i].intersection_multiplicity(&curvette)?;
        }
        Ok(total)
    }

    /// The intersection-theoretic identities tying the jacobian to the local
    /// invariants of both foliations.
    pub fn intersection_checks(&self, dec: &Decomposition) -> Result<Vec<CheckRecord>> {
        let mut out = Vec::new();
        // (J, S)_0 = mu_0(F, S) + tau_0(G, S) for separatrices S of F
        let mut j_dot_c: u64 = 0;
        for s in self.f.separatrices() {
            let js = self.jacobian_intersection(s)?;
            j_dot_c += js;
            let mu = milnor_along(&self.base_f_form, s)?;
            let tau = tangency_order(&self.base_g_form, s)?;
            out.push(CheckRecord {
                name: format!("jacobian meets {} as predicted", s.label),
                passed: js == mu + tau,
                detail: format!("(J,S) = {}, mu + tau = {} + {}", js, mu, tau),
            });
        }
        let mut j_dot_d: u64 = 0;
        for s in self.g.separatrices() {
            let js = self.jacobian_intersection(s)?;
            j_dot_d += js;
            let mu = milnor_along(&self.base_g_form, s)?;
            let tau = tangency_order(&self.base_f_form, s)?;
            out.push(CheckRecord {
                name: format!("jacobian meets {} as predicted", s.label),
                passed: js == mu + tau,
                detail: format!("(J,S) = {}, mu + tau = {} + {}", js, mu, tau),
            });
        }
        // (J, S_F) - (J, S_G) = mu(F) - mu(G)
        let mu_f = self.milnor_fast(0)? as i64;
        let mu_g = self.milnor_fast(1)? as i64;
        out.push(CheckRecord {
            name: "milnor difference identity".into(),
            passed: j_dot_c as i64 - j_dot_d as i64 == mu_f - mu_g,
            detail: format!(
                "(J,C) - (J,D) = {} - {}, mu(F) - mu(G) = {} - {}",
                j_dot_c, j_dot_d, mu_f, mu_g
            ),
        });
        // sum_E m0(J_nc^E) nu_E(C_i) <= mu_0(F, C_i) + tau_0(G, C_i)
        for (i, s) in self.f.separatrices().iter().enumerate() {
            let mut lhs = 0u64;
            for p in &dec.packets {
                if p.nc_multiplicity == 0 {
                    continue;
                }
                let curvette = self.base_curvette(p.base_divisor, 0)?;
                lhs += p.nc_multiplicity
                    * self.res.branches[i].intersection_multiplicity(&curvette)?;
            }
            let mu = milnor_along(&self.base_f_form, s)?;
            let tau = tangency_order(&self.base_g_form, s)?;
            out.push(CheckRecord {
                name: format!("packet mass bounded along {}", s.label),
                passed: lhs <= mu + tau,
                detail: format!("sum = {}, bound = {}", lhs, mu + tau),
            });
        }
        // sum_E m0(J_nc^E)(nu_E(C) - nu_E(D)) <= mu(F) - mu(G)
        let mut signed: i64 = 0;
        for p in &dec.packets {
            if p.nc_multiplicity == 0 {
                continue;
            }
            let nu_c = self.curvette_intersection(p.base_divisor, 0)? as i64;
            let nu_d = self.curvette_intersection(p.base_divisor, 1)? as i64;
            signed += p.nc_multiplicity as i64 * (nu_c - nu_d);
        }
        out.push(CheckRecord {
            name: "signed packet mass bounded by milnor difference".into(),
            passed: signed <= mu_f - mu_g,
            detail: format!("sum = {}, bound = {}", signed, mu_f - mu_g),
        });
        Ok(out)
    }

    /// X-axis tangency certificate at the first divisor. Nonzero quantity
    /// certifies that x = 0 is not tangent to the jacobian curve.
    pub fn x_tangency_check(&self) -> Result<XTangencyRecord> {
        let quantity = match (&self.f, &self.g) {
            (
                FoliationModel::Logarithmic {
                    branches: cb,
                    weights: lw,
                },
                FoliationModel::Logarithmic {
                    branches: db,
                    weights: mw,
                },
            ) => {
                let slope_sum = |bs: &[Branch], ws: &[Scalar]| -> Scalar {
                    let mut total = Scalar::zero();
                    for (b, w) in bs.iter().zip(ws) {
                        // coefficient at x-order 1: t-exponent equal to mult
                        if let Some((_, c)) = b.terms.iter().find(|&&(j, _)| j == b.mult) {
                            total = total.add_ref(&w.mul_ref(c));
                        }
                    }
                    total
                };
                let kappa_c = lw.iter().fold(Scalar::zero(), |a, w| a.add_ref(w));
                let kappa_d = mw.iter().fold(Scalar::zero(), |a, w| a.add_ref(w));
                kappa_c
                    .mul_ref(&slope_sum(db, mw))
                    .sub_ref(&kappa_d.mul_ref(&slope_sum(cb, lw)))
            }
            _ => {
                let tf = first_divisor_index_trace(&self.base_f_form)?;
                let tg = first_divisor_index_trace(&self.base_g_form)?;
                tf.sub_ref(&tg)
            }
        };
        Ok(XTangencyRecord {
            holds: !quantity.is_zero(),
            x_divides_jacobian: self.jacobian.x_valuation() > 0,
            quantity,
        })
    }
}

/// Sum over the first-divisor singular points of (coordinate * index),
/// computed as a trace without locating the points: the negative of the
/// residue sum of y B(y)/A(y) on the transformed form.
pub fn first_divisor_index_trace(form: &OneForm) -> Result<Scalar> {
    let st = form.strict_transform(1).0;
    let (a0, b0) = divisor_restriction(&st)?;
    let num = UPoly::monomial(Scalar::one(), 1).mul(&b0);
    let rf = RationalFunction::new(num, a0)?;
    if rf.den.degree().unwrap_or(0) == 0 {
        return Ok(Scalar::zero());
    }
    let (_, rem) = rf.num.divmod(&rf.den);
    let d = rf.den.degree().unwrap();
    let top = rem.coeffs.get(d - 1).cloned().unwrap_or_else(Scalar::zero);
    // denominator is monic after reduction
    Ok(top.neg_ref())
}

/// First-divisor analysis of a pair of explicit forms without separatrix
/// data: locates the singular points rationally, builds the index table,
/// M(z) and the initial-form verification at the first divisor only.
pub struct FirstDivisorAnalysis {
    pub coords: Vec<Scalar>,
    pub m_c: Vec<usize>,
    pub m_d: Vec<usize>,
    pub row: DivisorDelta,
    pub me: MeFunction,
    pub jacobian: Poly2,
    pub verify: VerifyRecord,
    pub x_tangency: XTangencyRecord,
}

impl FirstDivisorAnalysis {
    pub fn new(f: &OneForm, g: &OneForm) -> Result<FirstDivisorAnalysis> {
        let f = f.saturate();
        let g = g.saturate();
        let jacobian = jacobian_form(&f, &g)?;
        let st_f = f.strict_transform(1).0;
        let st_g = g.strict_transform(1).0;
        let (af, bf) = divisor_restriction(&st_f)?;
        let (ag, bg) = divisor_restriction(&st_g)?;
        let (roots_f, cof_f) = rational_roots(&af)?;
        let (roots_g, cof_g) = rational_roots(&ag)?;
        if cof_f.degree().unwrap_or(0) > 0 || cof_g.degree().unwrap_or(0) > 0 {
            return Err(Error::Input(
                "irrational first-divisor points: provide separatrix branches".into(),
            ));
        }
        let mut coords: Vec<Scalar> = Vec::new();
        let mut m_c: Vec<usize> = Vec::new();
        let mut m_d: Vec<usize> = Vec::new();
        for (c, k) in roots_f {
            coords.push(c);
            m_c.push(k);
            m_d.push(0);
        }
        for (c, k) in roots_g {
            match coords.iter().position(|x| *x == c) {
                Some(i) => m_d[i] = k,
                None => {
                    coords.push(c);
                    m_c.push(0);
                    m_d.push(k);
                }
            }
        }
        let mut points = Vec::new();
        for c in &coords {
            let index_f = crate::upoly::residue_at(&bf, &af, c)?.neg_ref();
            let index_g = crate::upoly::residue_at(&bg, &ag, c)?.neg_ref();
            let delta = index_g.sub_ref(&index_f);
            points.push(PointDelta {
                index_f,
                index_g,
                delta,
            });
        }
        let row = DivisorDelta { divisor: 0, points };
        let me = me_function_from(&coords, &row)?;
        validate_me(&row, &me)?;
        // initial-form verification at weight 1
        let (inj, _) = initial_form_poly(&jacobian, &BigRational::one())?;
        let x_mass = inj.x_valuation();
        let lhs = inj.at_x1();
        let mut rhs = me.raw_numerator.clone();
        for (l, c) in coords.iter().enumerate() {
            let e = (m_c[l] + m_d[l]).saturating_sub(1);
            for _ in 0..e {
                rhs = rhs.mul(&UPoly::linear_root(c));
            }
        }
        let (constant, proportional) = if lhs.is_zero() || rhs.is_zero() {
            (Scalar::zero(), false)
        } else {
            let k = lhs.leading().div_ref(&rhs.leading())?;
            (k.clone(), lhs == rhs.scale(&k))
        };
        let mut point_multiplicities = Vec::new();
        for (l, c) in coords.iter().enumerate() {
            let tau = me.tau_at_point(&row, l);
            let predicted = m_c[l] as i64 + m_d[l] as i64 + tau;
            let observed = lhs.root_multiplicity(c) as i64;
            point_multiplicities.push((predicted, observed));
        }
        let verify = VerifyRecord {
            divisor: 0,
            lhs,
            rhs,
            constant,
            proportional,
            x_mass,
            degree_gap: 0,
            point_multiplicities,
        };
        let tf = first_divisor_index_trace(&f)?;
        let tg = first_divisor_index_trace(&g)?;
        let quantity = tf.sub_ref(&tg);
        let x_tangency = XTangencyRecord {
            holds: !quantity.is_zero(),
            x_divides_jacobian: jacobian.x_valuation() > 0,
            quantity,
        };
        Ok(FirstDivisorAnalysis {
            coords,
            m_c,
            m_d,
            row,
            me,
            jacobian,
            verify,
            x_tangency,
        })
    }
}
