//! Specializations of the jacobian analysis: contact tree models of curve
//! pairs, semiroot verification and the jacobian of a branch against its
//! approximate roots, and polar curves of foliations.

use num::rational::BigRational;
use num::{BigInt, One};

use crate::branch::Branch;
use crate::delta::DivisorClass;
use crate::foliation::FoliationModel;
use crate::jac::Analysis;
use crate::scalar::{Rat, Scalar};
use crate::upoly::{RationalFunction, UPoly};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Tree model of a pair of curves
// ---------------------------------------------------------------------------

/// A trunk on a bar: the branches through one infinitely near point, with
/// the bimultiplicity [#C-series, #D-series].
#[derive(Clone, Debug)]
pub struct Trunk {
    pub bi: (u64, u64),
    /// Bar sitting on top of this trunk, when the class splits further.
    pub child_bar: Option<usize>,
    /// Labels of the branches ending on this trunk.
    pub labels: Vec<String>,
}

/// A bar of the contact tree: one bifurcation divisor of the ramified graph.
#[derive(Clone, Debug)]
pub struct Bar {
    pub id: usize,
    pub up_divisor: usize,
    pub height: Rat,
    pub parent: Option<usize>,
    pub trunks: Vec<Trunk>,
    /// Generic contact order of the C-equation along the bar: kappa/n.
    pub nu_f: Rat,
    pub nu_g: Rat,
    /// The tree-side rational function, normalized so that the divisor-side
    /// function satisfies M_E(z) = -n * M_B(z) identically.
    pub m_b: RationalFunction,
}

#[derive(Clone, Debug)]
pub struct TreeModel {
    pub bars: Vec<Bar>,
    pub root_bi: (u64, u64),
    pub ram_order: u32,
}

fn rat_u(n: u64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Build the contact tree of the separatrix pair of a hamiltonian analysis.
pub fn tree_model(a: &Analysis) -> Result<TreeModel> {
    for m in [&a.f, &a.g] {
        match m.weights() {
            Some(w) if w.iter().all(|x| x.is_one()) => {}
            _ => {
                return Err(Error::Input(
                    "tree models are defined for hamiltonian pairs".into(),
                ))
            }
        }
    }
    let graph = &a.res.upstairs;
    let n = a.res.ram.order;
    let bif = graph.bifurcation_divisors();
    if bif.is_empty() {
        return Err(Error::Input("no bifurcation divisors: trivial tree".into()));
    }
    let mut bars: Vec<Bar> = Vec::new();
    let mut bar_of_divisor: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    for &d in &bif {
        let id = bars.len();
        bar_of_divisor.insert(d, id);
        let dv = &graph.divisors[d];
        let height = BigRational::new(BigInt::from(dv.valuation), BigInt::from(n));
        // parent bar: nearest bifurcation divisor strictly below
        let mut parent = None;
        let mut cur = dv.parent;
        while let Some(p) = cur {
            if graph.divisors[p].is_bifurcation() {
                parent = bar_of_divisor.get(&p).copied();
                break;
            }
            cur = graph.divisors[p].parent;
        }
        // kappa with unit weights = sum of contact orders over each side
        let mut kf = 0u64;
        let mut kg = 0u64;
        for (k, &(bi, _)) in a.res.ram.origin.iter().enumerate() {
            let contact = graph.contact_order(k, d) as u64;
            if bi < a.c_count {
                kf += contact;
            } else {
                kg += contact;
            }
        }
        let nu_f = BigRational::new(BigInt::from(kf), BigInt::from(n));
        let nu_g = BigRational::new(BigInt::from(kg), BigInt::from(n));
        // trunks with bimultiplicities
        let mut trunks = Vec::new();
        for (l, pt) in dv.points.iter().enumerate() {
            let mut mc = 0u64;
            let mut md = 0u64;
            let mut labels = Vec::new();
            for &b in &pt.branches {
                if a.res.ram.origin[b].0 < a.c_count {
                    mc += 1;
                } else {
                    md += 1;
                }
                labels.push(graph.branches[b].label.clone());
            }
            let child_in_graph = dv.point_child[l];
            trunks.push(Trunk {
                bi: (mc, md),
                child_bar: child_in_graph.map(|_| usize::MAX),
                labels,
            });
        }
        // tree-side rational function: deltas scaled so M_E = -n M_B
        let scale = {
            let nn = Scalar::from_int(n as i64);
            let nf = Scalar::Rat(nu_f.clone());
            let ng = Scalar::Rat(nu_g.clone());
            nn.pow(2).mul_ref(&nf).mul_ref(&ng)
        };
        let row = a.delta.row(d);
        let mut raw = UPoly::zero();
        let coords: Vec<Scalar> = dv.points.iter().map(|p| p.coord.clone()).collect();
        let mut den = UPoly::one();
        for c in &coords {
            den = den.mul(&UPoly::linear_root(c));
        }
        for (l, _) in dv.points.iter().enumerate() {
            // KP determinant: nu_f * q_l - nu_g * p_l
            let (p_l, q_l) = {
                let t = &trunks[l];
                (
                    Scalar::from_int(t.bi.0 as i64),
                    Scalar::from_int(t.bi.1 as i64),
                )
            };
            let det = Scalar::Rat(nu_f.clone())
                .mul_ref(&q_l)
                .sub_ref(&Scalar::Rat(nu_g.clone()).mul_ref(&p_l));
            let delta_hat = det.div_ref(&scale)?;
            if delta_hat.is_zero() {
                continue;
            }
            let mut term = UPoly::constant(delta_hat);
            for (j, c) in coords.iter().enumerate() {
                if j != l {
                    term = term.mul(&UPoly::linear_root(c));
                }
            }
            raw = raw.add(&term);
        }
        let m_b = RationalFunction::new(raw, den)?;
        // divisor-side function must be -n times the bar-side one
        let me = &a.me[d];
        let scaled_num = m_b.num.scale(&Scalar::from_int(-(n as i64)));
        let lhs = RationalFunction::new(scaled_num, m_b.den.clone())?;
        if lhs != me.rational {
            return Err(Error::TheoremCheck(format!(
                "bar at height {} disagrees with the divisor function",
                height
            )));
        }
        // KP deltas at points agree with the index differences up to -1/(n nu_f nu_g)
        for (l, pd) in row.points.iter().enumerate() {
            let (p_l, q_l) = (
                Scalar::from_int(trunks[l].bi.0 as i64),
                Scalar::from_int(trunks[l].bi.1 as i64),
            );
            let det = Scalar::Rat(nu_f.clone())
                .mul_ref(&q_l)
                .sub_ref(&Scalar::Rat(nu_g.clone()).mul_ref(&p_l));
            let expect = det.div_ref(&scale)?.mul_ref(&Scalar::from_int(-(n as i64)));
            if expect != pd.delta {
                return Err(Error::TheoremCheck(format!(
                    "bar delta mismatch at height {} point {}",
                    height, l
                )));
            }
        }
        bars.push(Bar {
            id,
            up_divisor: d,
            height,
            parent,
            trunks,
            nu_f,
            nu_g,
            m_b,
        });
    }
    // resolve child bar indices now that all bars exist
    for i in 0..bars.len() {
        let d = bars[i].up_divisor;
        let kids: Vec<Option<usize>> = a.res.upstairs.divisors[d]
            .point_child
            .iter()
            .map(|c| {
                c.and_then(|child| {
                    // walk the chain to the next bifurcation divisor
                    let mut cur = child;
                    loop {
                        if a.res.upstairs.divisors[cur].is_bifurcation() {
                            return bar_of_divisor.get(&cur).copied();
                        }
                        match a.res.upstairs.divisors[cur].point_child.first().copied().flatten() {
                            Some(nx) => cur = nx,
                            None => return None,
                        }
                    }
                })
            })
            .collect();
        for (l, k) in kids.into_iter().enumerate() {
            bars[i].trunks[l].child_bar = k;
        }
    }
    let mut mc = 0u64;
    let mut md = 0u64;
    for &(bi, _) in &a.res.ram.origin {
        if bi < a.c_count {
            mc += 1;
        } else {
            md += 1;
        }
    }
    Ok(TreeModel {
        bars,
        root_bi: (mc, md),
        ram_order: n,
    })
}

impl TreeModel {
    /// Heights of all bars, sorted.
    pub fn heights(&self) -> Vec<Rat> {
        let mut h: Vec<Rat> = self.bars.iter().map(|b| b.height.clone()).collect();
        h.sort();
        h
    }

    /// Text rendering: ground bar, main trunk, then bars with their trunks.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "B* ========  main trunk [{},{}]\n",
            self.root_bi.0, self.root_bi.1
        ));
        fn rec(tm: &TreeModel, bar: usize, indent: usize, out: &mut String) {
            let b = &tm.bars[bar];
            let pad = "  ".repeat(indent);
            let trunk_str: Vec<String> = b
                .trunks
                .iter()
                .map(|t| {
                    let mut s = format!("[{},{}]", t.bi.0, t.bi.1);
                    if t.child_bar.is_none() && !t.labels.is_empty() {
                        s.push_str(&format!("{{{}}}", t.labels.join(",")));
                    }
                    s
                })
                .collect();
            out.push_str(&format!(
                "{}B{} (h = {}) ----  {}\n",
                pad,
                b.id,
                b.height,
                trunk_str.join("  |  ")
            ));
            for t in &b.trunks {
                if let Some(c) = t.child_bar {
                    rec(tm, c, indent + 1, out);
                }
            }
        }
        for b in &self.bars {
            if b.parent.is_none() {
                rec(self, b.id, 0, &mut out);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Semiroots and approximate roots
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SemirootReport {
    pub ok: bool,
    pub reason: String,
}

/// Verify that `h` is a k-semiroot of the branch `f`: the y-degree is
/// beta_0/e_k, the coincidence is beta_{k+1}/beta_0, and the characteristic
/// exponents of h are the divided prefix of those of f.
pub fn semiroot_check(f: &Branch, h: &Branch, k: usize) -> Result<SemirootReport> {
    let data = f.characteristic_data()?;
    let g = data.genus();
    if k >= g {
        return Ok(SemirootReport {
            ok: false,
            reason: format!("index {} out of range (genus {})", k, g),
        });
    }
    let e_k = data.gcds[k];
    let expect_deg = (data.beta[0] / e_k) as u32;
    if h.mult != expect_deg {
        return Ok(SemirootReport {
            ok: false,
            reason: format!("y-degree {} differs from {}", h.mult, expect_deg),
        });
    }
    let expect_contact = BigRational::new(
        BigInt::from(data.beta[k + 1]),
        BigInt::from(data.beta[0]),
    );
    let contact = f.coincidence(h)?;
    if contact != expect_contact {
        return Ok(SemirootReport {
            ok: false,
            reason: format!("coincidence {} differs from {}", contact, expect_contact),
        });
    }
    // divided characteristic prefix
    let hdata = h.characteristic_data()?;
    let expect_beta: Vec<u32> = data.beta[..=k].iter().map(|&b| b / e_k).collect();
    if hdata.beta != expect_beta {
        return Ok(SemirootReport {
            ok: false,
            reason: format!(
                "characteristic exponents {:?} differ from {:?}",
                hdata.beta, expect_beta
            ),
        });
    }
    Ok(SemirootReport {
        ok: true,
        reason: "semiroot conditions hold".into(),
    })
}

#[derive(Clone, Debug)]
pub struct ApproxRootReport {
    /// (valuation, non-collinear?) for each bifurcation divisor of the base.
    pub classification: Vec<(Rat, bool)>,
    /// Reduced numerator of M at the level-(k+1) divisor is constant.
    pub empty_first_packet: bool,
    /// (valuation, packet multiplicity) per non-collinear divisor.
    pub packet_mults: Vec<(Rat, u64)>,
    pub jacobian_multiplicity: u64,
    pub residual_multiplicity: u64,
    pub x_axis_multiplicity: u32,
}

/// Analyze the jacobian of a foliation with irreducible separatrix f against
/// one with separatrix a k-semiroot of f.
pub fn approx_root_analysis(
    f_model: FoliationModel,
    h_model: FoliationModel,
    k: usize,
) -> Result<(Analysis, ApproxRootReport)> {
    let fb = match f_model.separatrices() {
        [b] => b.clone(),
        _ => return Err(Error::Input("first foliation must have one separatrix".into())),
    };
    let hb = match h_model.separatrices() {
        [b] => b.clone(),
        _ => return Err(Error::Input("second foliation must have one separatrix".into())),
    };
    let sr = semiroot_check(&fb, &hb, k)?;
    if !sr.ok {
        return Err(Error::Assumption(format!("not a semiroot: {}", sr.reason)));
    }
    let data = fb.characteristic_data()?;
    let g = data.genus();
    let a = Analysis::new(f_model, h_model)?;
    // classification per base bifurcation divisor
    let mut classification = Vec::new();
    for rd in &a.res.downstairs {
        if !rd.is_bifurcation() {
            continue;
        }
        let nc = a.delta.row(rd.associated[0]).is_non_collinear();
        classification.push((rd.valuation.clone(), nc));
    }
    // expected: non-collinear exactly at beta_i/beta_0 for i >= k+1
    for (v, nc) in &classification {
        let mut level = None;
        for (i, &b) in data.beta.iter().enumerate().skip(1) {
            if *v == BigRational::new(BigInt::from(b), BigInt::from(data.beta[0])) {
                level = Some(i);
            }
        }
        let expect_nc = matches!(level, Some(i) if i >= k + 1);
        if *nc != expect_nc {
            return Err(Error::TheoremCheck(format!(
                "divisor at v={} classified {}, expected {}",
                v,
                if *nc { "non-collinear" } else { "collinear" },
                if expect_nc { "non-collinear" } else { "collinear" }
            )));
        }
    }
    // the level-(k+1) divisor: M has constant reduced numerator
    let v_k1 = BigRational::new(
        BigInt::from(data.beta[k + 1]),
        BigInt::from(data.beta[0]),
    );
    let mut empty_first_packet = true;
    for rd in &a.res.downstairs {
        if rd.valuation != v_k1 {
            continue;
        }
        for &up in &rd.associated {
            let me = &a.me[up];
            if me.identically_zero || me.rational.num.degree() != Some(0) {
                empty_first_packet = false;
            }
        }
    }
    if !empty_first_packet {
        return Err(Error::TheoremCheck(
            "first non-collinear level carries jacobian mass".into(),
        ));
    }
    let dec = a.decompose()?;
    let mut packet_mults = Vec::new();
    for p in &dec.packets {
        packet_mults.push((p.valuation.clone(), p.nc_multiplicity + p.c_multiplicity));
    }
    // expected multiplicities n_1..n_{i-1}(n_i - 1) for levels i >= k+2
    for (i, &b) in data.beta.iter().enumerate().skip(1) {
        if i < k + 2 || i > g {
            continue;
        }
        let v = BigRational::new(BigInt::from(b), BigInt::from(data.beta[0]));
        let expect: u64 = data.pairs[..i - 1]
            .iter()
            .map(|&(_, n)| n as u64)
            .product::<u64>()
            * (data.pairs[i - 1].1 as u64 - 1);
        let got = packet_mults
            .iter()
            .find(|(vv, _)| *vv == v)
            .map(|&(_, m)| m)
            .unwrap_or(0);
        if got != expect {
            return Err(Error::TheoremCheck(format!(
                "packet at v={} has multiplicity {}, expected {}",
                v, got, expect
            )));
        }
    }
    let report = ApproxRootReport {
        classification,
        empty_first_packet,
        packet_mults,
        jacobian_multiplicity: dec.jacobian_multiplicity,
        residual_multiplicity: dec.residual_multiplicity,
        x_axis_multiplicity: a.jacobian.x_valuation(),
    };
    Ok((a, report))
}

// ---------------------------------------------------------------------------
// Polar curves
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PolarReport {
    /// Slope of the polar direction line y = c x.
    pub direction: Scalar,
    /// Per base bifurcation divisor of the separatrix curve:
    /// (valuation, b in the curve graph, packet multiplicity, expected).
    pub per_divisor: Vec<(Rat, u32, u64, u64)>,
    pub purely_non_collinear: bool,
    pub resonant: bool,
    /// Genericity certificate at the first divisor: the zero count equals
    /// the branching number of the curve minus one.
    pub generic_certificate: bool,
    pub jacobian_multiplicity: u64,
    pub residual_multiplicity: u64,
}

/// Analyze a generic polar curve of the foliation: the jacobian against the
/// smooth pencil-direction foliation d(y - cx), with c drawn from a seeded
/// sequence and certified generic. Retries a bounded number of draws.
pub fn polar_analysis(f_model: &FoliationModel, seed: u64) -> Result<(Analysis, PolarReport)> {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut last_err: Option<Error> = None;
    for _ in 0..12 {
        let num = rng.gen_range(1..40i64);
        let den = rng.gen_range(1..8i64);
        let c = Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)));
        match try_polar(f_model, &c) {
            Ok(r) => return Ok(r),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Internal("no polar direction found".into())))
}

fn try_polar(f_model: &FoliationModel, c: &Scalar) -> Result<(Analysis, PolarReport)> {
    let trunc = f_model
        .separatrices()
        .iter()
        .map(|b| b.trunc)
        .max()
        .unwrap_or(16);
    let line = Branch::smooth(vec![(1, c.clone())], trunc, "polar_dir")?;
    let g_model = FoliationModel::hamiltonian(vec![line])?;
    let a = Analysis::new(f_model.clone(), g_model)?;
    // the direction must be transversal: its cluster at the first divisor
    // is a singleton
    let e1 = &a.res.downstairs[0];
    let line_idx = a.c_count;
    let line_cluster = e1
        .point_clusters
        .iter()
        .find(|pc| pc.branches.contains(&line_idx))
        .ok_or_else(|| Error::Internal("direction lost".into()))?;
    if line_cluster.branches.len() != 1 {
        return Err(Error::Assumption(
            "polar direction tangent to a separatrix".into(),
        ));
    }
    // resonance scan: collinear points on bifurcation divisors
    let mut resonant = false;
    let mut purely = true;
    for d in a.res.upstairs.bifurcation_divisors() {
        match a.delta.row(d).class() {
            DivisorClass::PurelyNonCollinear => {}
            _ => {
                purely = false;
                resonant = true;
            }
        }
    }
    let dec = a.decompose()?;
    // per-divisor counts in the curve graph
    let mut per_divisor = Vec::new();
    let mut generic_certificate = true;
    for rd in &a.res.downstairs {
        if !rd.is_bifurcation() {
            continue;
        }
        let has_line = rd.cluster.contains(&line_idx);
        let b_c = if has_line { rd.b - 1 } else { rd.b };
        let got = dec
            .packets
            .iter()
            .find(|p| p.base_divisor == rd.id)
            .map(|p| p.nc_multiplicity + p.c_multiplicity)
            .unwrap_or(0);
        let expect = (b_c as u64).saturating_sub(1);
        if rd.valuation.is_one() && got != expect {
            generic_certificate = false;
        }
        per_divisor.push((rd.valuation.clone(), b_c, got, expect));
    }
    if !generic_certificate {
        return Err(Error::Assumption(
            "polar direction failed the first-divisor genericity certificate".into(),
        ));
    }
    if !resonant {
        for (v, _bc, got, expect) in &per_divisor {
            if got != expect {
                return Err(Error::TheoremCheck(format!(
                    "polar packet at v={} has multiplicity {}, expected {}",
                    v, got, expect
                )));
            }
        }
    }
    let report = PolarReport {
        direction: c.clone(),
        per_divisor,
        purely_non_collinear: purely,
        resonant,
        generic_certificate,
        jacobian_multiplicity: dec.jacobian_multiplicity,
        residual_multiplicity: dec.residual_multiplicity,
    };
    Ok((a, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn rat(a: i64, b: i64) -> Rat {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    /// The contact-tree example pair with parameters (d, f) and seeded
    /// nonzero constants A, B: C and D share no branch, both carry a
    /// transversal line and two deep tangential branches.
    fn kp_pair(d: u32, f: u32, aa: i64, bb: i64) -> (FoliationModel, FoliationModel) {
        let t = 4 * (f + 2);
        let c = vec![
            Branch::smooth(vec![(1, s(-1))], t, "C1").unwrap(),
            Branch::smooth(vec![(d + 1, s(1)), (f + 1, s(-aa))], t, "C2").unwrap(),
            Branch::smooth(vec![(d + 1, s(-1)), (f + 1, s(-bb))], t, "C3").unwrap(),
        ];
        let dd = vec![
            Branch::smooth(vec![(1, s(1))], t, "D1").unwrap(),
            Branch::smooth(vec![(d + 1, s(1)), (f + 1, s(aa))], t, "D2").unwrap(),
            Branch::smooth(vec![(d + 1, s(-1)), (f + 1, s(bb))], t, "D3").unwrap(),
        ];
        (
            FoliationModel::hamiltonian(c).unwrap(),
            FoliationModel::hamiltonian(dd).unwrap(),
        )
    }

    #[test]
    fn kp_tree_heights_and_bimultiplicities() {
        let (f, g) = kp_pair(1, 2, 2, 3);
        let a = Analysis::new(f, g).unwrap();
        let tm = tree_model(&a).unwrap();
        assert_eq!(tm.root_bi, (3, 3));
        assert_eq!(
            tm.heights(),
            vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(3, 1)]
        );
        // B0: trunks [1,0], [2,2], [0,1] in some order
        let b0 = tm.bars.iter().find(|b| b.parent.is_none()).unwrap();
        let mut bis: Vec<(u64, u64)> = b0.trunks.iter().map(|t| t.bi).collect();
        bis.sort_unstable();
        assert_eq!(bis, vec![(0, 1), (1, 0), (2, 2)]);
        // B1 at height d+1 = 2 with trunks [1,1],[1,1]
        let b1 = tm.bars.iter().find(|b| b.height == rat(2, 1)).unwrap();
        let bis1: Vec<(u64, u64)> = b1.trunks.iter().map(|t| t.bi).collect();
        assert_eq!(bis1, vec![(1, 1), (1, 1)]);
        // nu along B0 is m_0(C) = 3
        assert_eq!(b0.nu_f, rat(3, 1));
        assert_eq!(b0.nu_g, rat(3, 1));
        // rendering mentions every bar height
        let art = tm.render();
        assert!(art.contains("main trunk [3,3]"));
        assert!(art.contains("h = 1"));
        assert!(art.contains("h = 3"));
    }

    #[test]
    fn kp_tree_second_parameters() {
        let (f, g) = kp_pair(2, 4, 5, 7);
        let a = Analysis::new(f, g).unwrap();
        let tm = tree_model(&a).unwrap();
        assert_eq!(
            tm.heights(),
            vec![rat(1, 1), rat(3, 1), rat(5, 1), rat(5, 1)]
        );
    }

    #[test]
    fn two_transversal_branches_tree() {
        let f = FoliationModel::hamiltonian(vec![
            Branch::smooth(vec![(1, s(1))], 12, "a").unwrap(),
        ])
        .unwrap();
        let g = FoliationModel::hamiltonian(vec![
            Branch::smooth(vec![(1, s(-1))], 12, "b").unwrap(),
        ])
        .unwrap();
        let a = Analysis::new(f, g).unwrap();
        let tm = tree_model(&a).unwrap();
        assert_eq!(tm.bars.len(), 1);
        assert_eq!(tm.bars[0].height, rat(1, 1));
        let mut bis: Vec<(u64, u64)> = tm.bars[0].trunks.iter().map(|t| t.bi).collect();
        bis.sort_unstable();
        assert_eq!(bis, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn cusp_parabola_tree_heights() {
        let f = FoliationModel::hamiltonian(vec![
            Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap(),
        ])
        .unwrap();
        let g = FoliationModel::hamiltonian(vec![
            Branch::smooth(vec![(2, s(1))], 24, "par").unwrap(),
        ])
        .unwrap();
        let a = Analysis::new(f, g).unwrap();
        let tm = tree_model(&a).unwrap();
        // all three Puiseux series share the tangent y = 0, so the first
        // bar sits at the minimal contact order 3/2
        assert_eq!(tm.heights(), vec![rat(3, 2)]);
        let b0 = &tm.bars[0];
        let mut bis: Vec<(u64, u64)> = b0.trunks.iter().map(|t| t.bi).collect();
        bis.sort_unstable();
        assert_eq!(bis, vec![(0, 1), (1, 0), (1, 0)]);
    }

    fn two_pair_branch() -> Branch {
        Branch::new(4, vec![(6, s(1)), (7, s(1))], 64, "f").unwrap()
    }

    #[test]
    fn semiroot_examples() {
        let cusp = Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap();
        let axis = Branch::smooth(vec![], 24, "axis").unwrap();
        let diag = Branch::smooth(vec![(1, s(1))], 24, "diag").unwrap();
        // f = cusp, h = (y=0), k = 0: true
        assert!(semiroot_check(&cusp, &axis, 0).unwrap().ok);
        // f = cusp, h = (y=x), k = 0: false (contact 1 instead of 3/2)
        assert!(!semiroot_check(&cusp, &diag, 0).unwrap().ok);
        // f = (t^4, t^6+t^7), h = cusp, k = 1: true
        let f = two_pair_branch();
        assert!(semiroot_check(&f, &cusp, 1).unwrap().ok);
        // k = 0 for that branch wants a smooth h with contact 3/2
        assert!(semiroot_check(&f, &axis, 0).unwrap().ok);
    }

    #[test]
    fn approx_root_k1() {
        // f = (t^4, t^6+t^7), semiroot y^2 - x^3 (k = 1): the only
        // non-collinear divisor sits at 7/4, its M-function has constant
        // numerator, and the whole jacobian is residual.
        let f = FoliationModel::hamiltonian(vec![two_pair_branch()]).unwrap();
        let h = FoliationModel::hamiltonian(vec![
            Branch::new(2, vec![(3, s(1))], 48, "semiroot").unwrap(),
        ])
        .unwrap();
        let (a, rep) = approx_root_analysis(f, h, 1).unwrap();
        assert_eq!(
            rep.classification,
            vec![(rat(3, 2), false), (rat(7, 4), true)]
        );
        assert!(rep.empty_first_packet);
        assert!(rep.packet_mults.iter().all(|&(_, m)| m == 0));
        // direct expansion: J = -2x^4(20y^2 + 7x^2y + 6x^3)
        assert_eq!(rep.jacobian_multiplicity, 6);
        assert_eq!(rep.x_axis_multiplicity, 4);
        assert_eq!(rep.residual_multiplicity, 6);
        let strip = a.jacobian.div_x_pow(4);
        let mut expect = crate::poly2::Poly2::zero();
        expect.insert(0, 2, s(-40));
        expect.insert(2, 1, s(-14));
        expect.insert(3, 0, s(-12));
        assert_eq!(strip, expect);
    }

    #[test]
    fn approx_root_k0() {
        // same branch, k = 0 with semiroot y = 0: non-collinear set is both
        // levels, the 3/2-level packet is empty, the 7/4-level packet has
        // multiplicity n_1(n_2 - 1) = 2; direct expansion x^2(6y^2 + ...)
        let f = FoliationModel::hamiltonian(vec![two_pair_branch()]).unwrap();
        let h = FoliationModel::hamiltonian(vec![
            Branch::smooth(vec![], 48, "semiroot0").unwrap(),
        ])
        .unwrap();
        let (a, rep) = approx_root_analysis(f, h, 0).unwrap();
        assert_eq!(
            rep.classification,
            vec![(rat(3, 2), true), (rat(7, 4), true)]
        );
        assert!(rep.empty_first_packet);
        assert_eq!(
            rep.packet_mults,
            vec![(rat(3, 2), 0), (rat(7, 4), 2)]
        );
        assert_eq!(rep.jacobian_multiplicity, 4);
        assert_eq!(rep.x_axis_multiplicity, 2);
        assert_eq!(rep.residual_multiplicity, 2);
        // direct expansion of the jacobian of the Weierstrass polynomials:
        // J = f_x (y^2-x^3 has no role here; g = y): J = -f_x up to sign
        let strip = a.jacobian.div_x_pow(2);
        // J = AQ - BP with A = f_x, B = f_y, P = 0, Q = 1: J = f_x
        let mut expect = crate::poly2::Poly2::zero();
        expect.insert(0, 2, s(-6));
        expect.insert(2, 1, s(-20));
        expect.insert(3, 0, s(6));
        expect.insert(4, 0, s(-7));
        assert_eq!(strip, expect);
    }

    #[test]
    fn cusp_generic_polar() {
        let f = FoliationModel::hamiltonian(vec![
            Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap(),
        ])
        .unwrap();
        let (a, rep) = polar_analysis(&f, 7).unwrap();
        assert!(rep.generic_certificate);
        assert!(!rep.resonant);
        assert!(rep.purely_non_collinear);
        // one packet of multiplicity b^C - 1 = 1 at v = 3/2
        let deep = rep
            .per_divisor
            .iter()
            .find(|(v, _, _, _)| *v == rat(3, 2))
            .unwrap();
        assert_eq!(deep.1, 2);
        assert_eq!(deep.2, 1);
        // (P, C)_0 = 3
        let c = a.f.separatrices()[0].clone();
        assert_eq!(a.jacobian_intersection(&c).unwrap(), 3);
        // polar of the cusp is smooth through the first divisor
        assert_eq!(rep.jacobian_multiplicity, 1);
    }

    #[test]
    fn transversal_lines_polar() {
        // two transversal lines, hamiltonian: polar = one smooth branch,
        // m0(J^{E1}) = b - 1 = 1
        let f = FoliationModel::hamiltonian(vec![
            Branch::smooth(vec![(1, s(1))], 16, "l1").unwrap(),
            Branch::smooth(vec![(1, s(-1))], 16, "l2").unwrap(),
        ])
        .unwrap();
        let (_a, rep) = polar_analysis(&f, 3).unwrap();
        let e1 = &rep.per_divisor[0];
        assert_eq!(e1.1, 2);
        assert_eq!(e1.2, 1);
        assert_eq!(rep.jacobian_multiplicity, 1);
    }

    #[test]
    fn log_model_polar_per_divisor_counts() {
        // the four-branch logarithmic model: every bifurcation divisor of
        // the curve graph carries b^C - 1 polar mass
        let c = vec![
            Branch::smooth(vec![(1, s(1))], 16, "C1").unwrap(),
            Branch::smooth(vec![(2, s(-1))], 16, "C2").unwrap(),
            Branch::smooth(vec![(2, s(1))], 16, "C3").unwrap(),
            Branch::smooth(vec![(2, s(-2))], 16, "C4").unwrap(),
        ];
        let lambda = vec![s(1), s(1), s(1), s(3)];
        let f = FoliationModel::logarithmic(c, lambda).unwrap();
        let (_a, rep) = polar_analysis(&f, 11).unwrap();
        assert!(!rep.resonant);
        for (v, b_c, got, expect) in &rep.per_divisor {
            assert_eq!(got, expect, "at v = {} with b^C = {}", v, b_c);
        }
    }
}
