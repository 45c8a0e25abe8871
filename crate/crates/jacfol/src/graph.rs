//! Dual graphs of minimal reductions of singularities.
//!
//! For a curve with only smooth branches transversal to x = 0, the graph is
//! synthesized from the coincidence combinatorics: a divisor of valuation p
//! corresponds to a maximal cluster of branches agreeing up to order p-1,
//! and the infinitely near points on it are the distinct order-p
//! coefficients. For curves with singular branches the same construction is
//! run on a ramified model x = u^n, and a condensed graph of the base curve
//! (first divisor, bifurcation divisors, arrow divisors) is synthesized from
//! pairwise coincidences and characteristic exponents, with the
//! divisor-association maps between the two.

use num::integer::Integer;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;

use crate::branch::Branch;
use crate::scalar::{Rat, Scalar};
use crate::upoly::UPoly;
use crate::{Error, Result};

/// Infinitely near point of the curve on a divisor, first chart.
#[derive(Clone, Debug)]
pub struct InfNearPoint {
    pub coord: Scalar,
    /// Branch indices whose strict transform passes through the point.
    pub branches: Vec<usize>,
}

/// Divisor of a smooth-branch dual graph. Valuations are integers and every
/// divisor of the full graph is stored, bifurcation or not.
#[derive(Clone, Debug)]
pub struct Divisor {
    pub id: usize,
    pub valuation: u32,
    /// Shared coefficients a_1..a_{p-1}; y -> y + eps(x) with this prefix is
    /// the adapted coordinate change for the divisor.
    pub prefix: Vec<Scalar>,
    pub cluster: Vec<usize>,
    pub points: Vec<InfNearPoint>,
    /// Child divisor created over each point, when the point is blown up.
    pub point_child: Vec<Option<usize>>,
    pub arrows: Vec<usize>,
    pub parent: Option<usize>,
}

impl Divisor {
    pub fn b(&self) -> u32 {
        self.points.len() as u32
    }

    pub fn is_bifurcation(&self) -> bool {
        self.b() >= 2
    }
}

/// Dual graph of the minimal reduction of singularities of a union of
/// pairwise distinct smooth branches.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub branches: Vec<Branch>,
    pub divisors: Vec<Divisor>,
}

impl DualGraph {
    /// Build from smooth branches. A single branch yields the single divisor
    /// E1 carrying the arrow.
    pub fn build(branches: Vec<Branch>) -> Result<DualGraph> {
        for b in &branches {
            if !b.is_smooth() {
                return Err(Error::Input(format!(
                    "dual graph construction needs smooth branches, {} has multiplicity {}",
                    b.label, b.mult
                )));
            }
        }
        // Pairwise coincidences certify distinctness and adequate truncation.
        let mut max_c: u32 = 1;
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                let c = branches[i].coincidence(&branches[j])?;
                let ci = c
                    .to_integer()
                    .to_string()
                    .parse::<u32>()
                    .map_err(|_| Error::Internal("coincidence out of range".into()))?;
                max_c = max_c.max(ci);
            }
        }
        for b in &branches {
            if b.trunc <= max_c + 1 {
                return Err(Error::Truncation(format!(
                    "branch {} truncated at {}, need beyond {}",
                    b.label,
                    b.trunc,
                    max_c + 1
                )));
            }
        }
        let coeff = |i: usize, e: u32| -> Scalar {
            branches[i]
                .terms
                .iter()
                .find(|&&(j, _)| j == e)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero)
        };
        let mut divisors: Vec<Divisor> = Vec::new();
        // stack of (cluster, valuation, prefix, parent)
        let all: Vec<usize> = (0..branches.len()).collect();
        let mut stack: Vec<(Vec<usize>, u32, Vec<Scalar>, Option<usize>)> =
            vec![(all, 1, vec![], None)];
        while let Some((cluster, p, prefix, parent)) = stack.pop() {
            let id = divisors.len();
            // group cluster members by their coefficient at order p
            let mut points: Vec<InfNearPoint> = Vec::new();
            for &i in &cluster {
                let c = coeff(i, p);
                match points.iter_mut().find(|pt| pt.coord == c) {
                    Some(pt) => pt.branches.push(i),
                    None => points.push(InfNearPoint {
                        coord: c,
                        branches: vec![i],
                    }),
                }
            }
            let mut arrows = Vec::new();
            let point_child: Vec<Option<usize>> = vec![None; points.len()];
            let mut pending: Vec<(usize, Vec<usize>, Vec<Scalar>)> = Vec::new();
            for (l, pt) in points.iter().enumerate() {
                if pt.branches.len() == 1 {
                    arrows.push(pt.branches[0]);
                } else {
                    let mut next_prefix = prefix.clone();
                    next_prefix.push(pt.coord.clone());
                    pending.push((l, pt.branches.clone(), next_prefix));
                }
            }
            divisors.push(Divisor {
                id,
                valuation: p,
                prefix,
                cluster,
                points,
                point_child,
                arrows,
                parent,
            });
            // push children in reverse so they are processed in point order
            let mut child_records = Vec::new();
            for (l, members, next_prefix) in pending {
                child_records.push((l, members, next_prefix));
            }
            for (l, members, next_prefix) in child_records.into_iter().rev() {
                stack.push((members, p + 1, next_prefix, Some(id)));
                let _ = l;
            }
        }
        // fill point_child links now that ids are fixed
        let mut by_parent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for d in &divisors {
            if let Some(pid) = d.parent {
                by_parent.entry(pid).or_default().push(d.id);
            }
        }
        let divisor_prefix: Vec<Vec<Scalar>> =
            divisors.iter().map(|d| d.prefix.clone()).collect();
        for (pid, kids) in by_parent {
            for kid in kids {
                let kp = &divisor_prefix[kid];
                let coord = kp.last().unwrap().clone();
                let l = divisors[pid]
                    .points
                    .iter()
                    .position(|pt| pt.coord == coord)
                    .expect("child coordinate must be a parent point");
                divisors[pid].point_child[l] = Some(kid);
            }
        }
        Ok(DualGraph {
            branches,
            divisors,
        })
    }

    /// Adapted coordinate change for a divisor: eps(x) = a_1 x + ... as a
    /// univariate polynomial in x of degree < p.
    pub fn adapted_eps(&self, id: usize) -> UPoly {
        let d = &self.divisors[id];
        let mut coeffs = vec![Scalar::zero()];
        coeffs.extend(d.prefix.iter().cloned());
        UPoly::from_coeffs(coeffs)
    }

    /// Number of common divisors of the geodesics of the branch and the
    /// divisor: min(p, contact order of the branch with the adapted center).
    pub fn contact_order(&self, branch: usize, id: usize) -> u32 {
        let d = &self.divisors[id];
        let b = &self.branches[branch];
        for e in 1..d.valuation {
            let have = b
                .terms
                .iter()
                .find(|&&(j, _)| j == e)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero);
            let want = d.prefix[(e - 1) as usize].clone();
            if have != want {
                return e;
            }
        }
        d.valuation
    }

    /// Path of divisor ids from E1 to the divisor, inclusive.
    pub fn geodesic(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.divisors[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Divisors on the geodesic of a branch, from E1 to its arrow divisor.
    pub fn branch_geodesic(&self, branch: usize) -> Vec<usize> {
        let arrow = self
            .divisors
            .iter()
            .find(|d| d.arrows.contains(&branch))
            .map(|d| d.id)
            .expect("every branch has an arrow divisor");
        self.geodesic(arrow)
    }

    /// First divisor with b >= 2 strictly after `id` through the given
    /// point, walking the chain of valence-one divisors.
    pub fn next_bifurcation(&self, id: usize, point: usize) -> Option<usize> {
        let mut child = self.divisors[id].point_child[point]?;
        loop {
            let d = &self.divisors[child];
            if d.is_bifurcation() {
                return Some(child);
            }
            // b = 1: single point; continue if it has a child
            match d.point_child.first().copied().flatten() {
                Some(next) => child = next,
                None => return None,
            }
        }
    }

    /// Chain of divisors from `id` (exclusive) to the next bifurcation
    /// divisor (inclusive) through the given point; empty when none.
    pub fn chain_to_next_bifurcation(&self, id: usize, point: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = match self.divisors[id].point_child[point] {
            Some(c) => c,
            None => return out,
        };
        loop {
            out.push(cur);
            let d = &self.divisors[cur];
            if d.is_bifurcation() {
                return out;
            }
            match d.point_child.first().copied().flatten() {
                Some(next) => cur = next,
                None => return out,
            }
        }
    }

    pub fn bifurcation_divisors(&self) -> Vec<usize> {
        self.divisors
            .iter()
            .filter(|d| d.is_bifurcation())
            .map(|d| d.id)
            .collect()
    }

    /// Stable DOT rendering. Curvettes of every divisor here are smooth, so
    /// m(E) = 1 throughout.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dual_graph {\n  rankdir=LR;\n");
        for d in &self.divisors {
            out.push_str(&format!(
                "  E{} [label=\"E{} v={} m=1 b={}\"];\n",
                d.id + 1,
                d.id + 1,
                d.valuation,
                d.b()
            ));
        }
        for d in &self.divisors {
            if let Some(p) = d.parent {
                out.push_str(&format!("  E{} -> E{};\n", p + 1, d.id + 1));
            }
        }
        for d in &self.divisors {
            for &a in &d.arrows {
                let label = &self.branches[a].label;
                out.push_str(&format!(
                    "  arrow_{} [shape=none, label=\"{}\"];\n  E{} -> arrow_{};\n",
                    label,
                    label,
                    d.id + 1,
                    label
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Ramified model of a curve: x = u^n turns every branch into smooth ones.
#[derive(Clone, Debug)]
pub struct Ramification {
    pub order: u32,
    pub lifted: Vec<Branch>,
    /// lifted index -> (base branch index, conjugate index)
    pub origin: Vec<(usize, u32)>,
}

/// Replace each branch by its n^i smooth lifts over Q(zeta): the conjugate
/// Puiseux series evaluated at x = u^n. Requires n divisible by every
/// branch multiplicity.
pub fn ramify(branches: &[Branch], n: u32) -> Result<Ramification> {
    let mut lifted = Vec::new();
    let mut origin = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        if n % b.mult != 0 {
            return Err(Error::Input(format!(
                "ramification order {} not divisible by multiplicity {} of {}",
                n, b.mult, b.label
            )));
        }
        if b.tangent_to_vertical_axis() {
            return Err(Error::Input(format!(
                "branch {} is tangent to x = 0; rotate coordinates first",
                b.label
            )));
        }
        for j in 0..b.mult {
            let terms = b.conjugate_u_terms(j, n)?;
            let trunc = b.u_window(n);
            let label = if b.mult == 1 {
                format!("{}~", b.label)
            } else {
                format!("{}~{}", b.label, j)
            };
            lifted.push(Branch::new(1, terms, trunc, &label)?);
            origin.push((i, j));
        }
    }
    Ok(Ramification {
        order: n,
        lifted,
        origin,
    })
}

/// Point cluster of the base curve on a condensed divisor: a maximal set of
/// branches with pairwise coincidence exceeding the divisor valuation.
#[derive(Clone, Debug)]
pub struct PointCluster {
    pub branches: Vec<usize>,
    /// False when the branches have no term at the valuation exponent, i.e.
    /// the cluster sits at the ramification corner of the divisor.
    pub has_term_at_v: bool,
}

/// Condensed divisor of the base-curve graph: first divisor, bifurcation
/// divisors, and arrow divisors, with rational valuations.
#[derive(Clone, Debug)]
pub struct RDivisor {
    pub id: usize,
    pub valuation: Rat,
    pub cluster: Vec<usize>,
    pub point_clusters: Vec<PointCluster>,
    pub m: u64,
    pub n_e: u64,
    pub n_under: u64,
    pub k_e: u32,
    pub genus: u32,
    pub puiseux_for_curve: bool,
    pub dead_arc: bool,
    pub b: u32,
    pub parent: Option<usize>,
    pub arrows: Vec<usize>,
    /// Per branch in `cluster`: valuation is one of its characteristic
    /// exponent ratios (Puiseux for that branch) or not (contact divisor).
    pub puiseux_for_branch: BTreeMap<usize, bool>,
    /// Upstairs divisors associated to this one (count n_under).
    pub associated: Vec<usize>,
}

impl RDivisor {
    pub fn is_bifurcation(&self) -> bool {
        self.b >= 2
    }
}

/// The full resolution bundle: base branches, ramified model, the smooth
/// dual graph upstairs, and the condensed graph downstairs with the
/// association maps.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub branches: Vec<Branch>,
    pub ram: Ramification,
    pub upstairs: DualGraph,
    pub downstairs: Vec<RDivisor>,
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn rat_of(n: u64, d: u64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_denom_u64(r: &Rat) -> u64 {
    r.denom().to_string().parse().unwrap()
}

impl Resolution {
    /// Build the resolution data for a list of pairwise distinct branches.
    /// `ram_override`, when given, must be a multiple of the least common
    /// multiple of the branch multiplicities.
    pub fn build(branches: Vec<Branch>, ram_override: Option<u32>) -> Result<Resolution> {
        if branches.is_empty() {
            return Err(Error::Input("no branches given".into()));
        }
        let mut n: u32 = 1;
        for b in &branches {
            n = (n as u64).lcm(&(b.mult as u64)) as u32;
        }
        if let Some(nn) = ram_override {
            if nn % n != 0 {
                return Err(Error::Input(format!(
                    "ramification override {} not divisible by required {}",
                    nn, n
                )));
            }
            n = nn;
        }
        let ram = ramify(&branches, n)?;
        let upstairs = DualGraph::build(ram.lifted.clone())?;
        let downstairs = build_condensed(&branches, &ram, &upstairs)?;
        let res = Resolution {
            branches,
            ram,
            upstairs,
            downstairs,
        };
        res.validate_association()?;
        Ok(res)
    }

    /// Upstairs image of a downstairs divisor id.
    pub fn associated(&self, id: usize) -> &[usize] {
        &self.downstairs[id].associated
    }

    /// Downstairs point-cluster index that an upstairs point lies over, by
    /// branch membership. None for points carrying no curve branch.
    pub fn point_to_base(&self, down_id: usize, up_divisor: usize, up_point: usize) -> Option<usize> {
        let pt = &self.upstairs.divisors[up_divisor].points[up_point];
        if pt.branches.is_empty() {
            return None;
        }
        let bases: Vec<usize> = pt
            .branches
            .iter()
            .map(|&k| self.ram.origin[k].0)
            .collect();
        self.downstairs[down_id]
            .point_clusters
            .iter()
            .position(|pc| bases.iter().all(|b| pc.branches.contains(b)))
    }

    /// Galois deck map on lifted branch indices: conjugate index advances by
    /// one (the action u -> zeta_n u on the ramified plane).
    pub fn deck_branch(&self, lifted: usize) -> usize {
        let (i, j) = self.ram.origin[lifted];
        let nj = (j + 1) % self.branches[i].mult;
        self.ram
            .origin
            .iter()
            .position(|&(bi, bj)| bi == i && bj == nj)
            .unwrap()
    }

    /// Image of an upstairs divisor under the deck map: the divisor whose
    /// cluster is the image of this cluster.
    pub fn deck_divisor(&self, up_id: usize) -> usize {
        let d = &self.upstairs.divisors[up_id];
        let image: Vec<usize> = d.cluster.iter().map(|&k| self.deck_branch(k)).collect();
        let v = d.valuation;
        self.upstairs
            .divisors
            .iter()
            .find(|e| {
                e.valuation == v && {
                    let mut a = e.cluster.clone();
                    let mut b = image.clone();
                    a.sort_unstable();
                    b.sort_unstable();
                    a == b
                }
            })
            .map(|e| e.id)
            .expect("deck image divisor exists")
    }

    /// Image of an upstairs point under the deck map, as (divisor, point).
    pub fn deck_point(&self, up_id: usize, point: usize) -> (usize, usize) {
        let target = self.deck_divisor(up_id);
        let d = &self.upstairs.divisors[up_id];
        let pt = &d.points[point];
        if !pt.branches.is_empty() {
            let image: Vec<usize> = pt.branches.iter().map(|&k| self.deck_branch(k)).collect();
            let l = self.upstairs.divisors[target]
                .points
                .iter()
                .position(|q| image.iter().all(|b| q.branches.contains(b)))
                .expect("deck image point exists");
            (target, l)
        } else {
            // free point: coordinate multiplies by zeta^v
            let zeta = Scalar::root_of_unity(self.ram.order).expect("root of unity");
            let c = pt.coord.mul_ref(&zeta.pow(d.valuation as u64));
            let l = self.upstairs.divisors[target]
                .points
                .iter()
                .position(|q| q.coord == c)
                .expect("deck image coordinate exists");
            (target, l)
        }
    }

    fn validate_association(&self) -> Result<()> {
        for rd in &self.downstairs {
            if rd.associated.len() != rd.n_under as usize {
                return Err(Error::Internal(format!(
                    "divisor at v={} has {} associated divisors, expected {}",
                    rd.valuation,
                    rd.associated.len(),
                    rd.n_under
                )));
            }
            if !rd.is_bifurcation() {
                continue;
            }
            // b upstairs from the combinatorial formula
            let b_up = self.upstairs.divisors[rd.associated[0]].b() as u64;
            let expect = if !rd.puiseux_for_curve {
                rd.b as u64
            } else if rd.dead_arc {
                (rd.b as u64 - 1) * rd.n_e
            } else {
                (rd.b as u64 - 1) * rd.n_e + 1
            };
            if b_up != expect {
                return Err(Error::Internal(format!(
                    "divisor at v={}: upstairs valence {} disagrees with formula {}",
                    rd.valuation, b_up, expect
                )));
            }
            for &a in &rd.associated {
                if self.upstairs.divisors[a].b() as u64 != b_up {
                    return Err(Error::Internal(
                        "associated divisors with unequal valence".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Stable DOT rendering of the condensed base graph.
    pub fn downstairs_dot(&self) -> String {
        let mut out = String::from("digraph base_graph {\n  rankdir=LR;\n");
        for d in &self.downstairs {
            out.push_str(&format!(
                "  E{} [label=\"E{} v={} m={} b={}\"];\n",
                d.id + 1,
                d.id + 1,
                d.valuation,
                d.m,
                d.b
            ));
        }
        for d in &self.downstairs {
            if let Some(p) = d.parent {
                out.push_str(&format!("  E{} -> E{};\n", p + 1, d.id + 1));
            }
        }
        for d in &self.downstairs {
            for &a in &d.arrows {
                let label = &self.branches[a].label;
                out.push_str(&format!(
                    "  arrow_{} [shape=none, label=\"{}\"];\n  E{} -> arrow_{};\n",
                    label,
                    label,
                    d.id + 1,
                    label
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Exponent support of a branch in x-units.
fn x_support(b: &Branch) -> Vec<Rat> {
    b.terms
        .iter()
        .map(|&(j, _)| rat_of(j as u64, b.mult as u64))
        .collect()
}

/// Characteristic exponent ratios beta_k/beta_0 (k >= 1) of a branch.
fn char_ratios(b: &Branch) -> Result<Vec<Rat>> {
    let data = b.characteristic_data()?;
    Ok(data
        .beta
        .iter()
        .skip(1)
        .map(|&e| rat_of(e as u64, b.mult as u64))
        .collect())
}

fn build_condensed(
    branches: &[Branch],
    ram: &Ramification,
    upstairs: &DualGraph,
) -> Result<Vec<RDivisor>> {
    let r = branches.len();
    // pairwise coincidences
    let mut coinc: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for i in 0..r {
        for j in i + 1..r {
            let c = branches[i].coincidence(&branches[j])?;
            coinc.insert((i, j), c.clone());
            coinc.insert((j, i), c);
        }
    }
    let mut ratios: Vec<Vec<Rat>> = Vec::with_capacity(r);
    for b in branches {
        ratios.push(char_ratios(b)?);
    }
    // marked values per branch: characteristic ratios and coincidences
    let mut marked: Vec<Rat> = vec![BigRational::one()];
    for i in 0..r {
        for v in &ratios[i] {
            marked.push(v.clone());
        }
        for j in 0..r {
            if i != j {
                marked.push(coinc[&(i, j)].clone());
            }
        }
    }
    marked.sort();
    marked.dedup();

    let together = |i: usize, j: usize, v: &Rat| -> bool {
        i == j || coinc[&(i, j)] >= *v
    };

    // enumerate divisors (v, cluster)
    struct Raw {
        v: Rat,
        cluster: Vec<usize>,
    }
    let mut raws: Vec<Raw> = Vec::new();
    for v in &marked {
        let mut seen: Vec<bool> = vec![false; r];
        for i in 0..r {
            if seen[i] {
                continue;
            }
            let cluster: Vec<usize> = (0..r).filter(|&j| together(i, j, v)).collect();
            for &j in &cluster {
                seen[j] = true;
            }
            // divisor exists if v is marked for some member (char ratio or
            // separation) or it is the first divisor
            let relevant = v == &BigRational::one()
                || cluster.iter().any(|&j| ratios[j].contains(v))
                || cluster.iter().any(|&a| {
                    cluster
                        .iter()
                        .any(|&b| a != b && coinc[&(a, b)] == *v)
                });
            if relevant && (v == &BigRational::one() || !cluster.is_empty()) {
                raws.push(Raw {
                    v: v.clone(),
                    cluster,
                });
            }
        }
    }

    // arrow divisor per branch: max(last char ratio, max coincidence)
    let mut arrow_value: Vec<Rat> = Vec::with_capacity(r);
    for i in 0..r {
        let mut best = BigRational::one();
        if let Some(last) = ratios[i].last() {
            best = best.max(last.clone());
        }
        for j in 0..r {
            if i != j {
                best = best.max(coinc[&(i, j)].clone());
            }
        }
        arrow_value.push(best);
    }

    let mut out: Vec<RDivisor> = Vec::new();
    for raw in &raws {
        let id = out.len();
        let i0 = raw.cluster[0];
        // common truncation support below v (from a representative; the
        // cluster agrees below v by construction)
        let supp: Vec<Rat> = x_support(&branches[i0])
            .into_iter()
            .filter(|e| e < &raw.v)
            .collect();
        let n_under = supp.iter().fold(1u64, |acc, e| lcm_u64(acc, rat_denom_u64(e)));
        let m = lcm_u64(n_under, rat_denom_u64(&raw.v));
        let n_e = m / n_under;
        // genus of a curvette: gcd-drop count over supp + v in m-units
        let mut genus = 0u32;
        {
            let mut e = m;
            let mut exps: Vec<Rat> = supp.clone();
            exps.push(raw.v.clone());
            for ex in &exps {
                if e == 1 {
                    break;
                }
                let t: u64 = (ex * BigRational::from_integer(BigInt::from(m)))
                    .to_integer()
                    .to_string()
                    .parse()
                    .unwrap();
                let g = e.gcd(&t);
                if g < e {
                    genus += 1;
                    e = g;
                }
            }
        }
        let puiseux_for_curve = n_e > 1;
        let k_e = if puiseux_for_curve { genus - 1 } else { genus };
        // point clusters: partition by coincidence strictly above v
        let mut point_clusters: Vec<PointCluster> = Vec::new();
        let mut used = vec![false; raw.cluster.len()];
        for (a, &i) in raw.cluster.iter().enumerate() {
            if used[a] {
                continue;
            }
            let mut members = vec![i];
            used[a] = true;
            for (b, &j) in raw.cluster.iter().enumerate().skip(a + 1) {
                if !used[b] && coinc[&(i, j)] > raw.v {
                    members.push(j);
                    used[b] = true;
                }
            }
            let has_term_at_v = x_support(&branches[i]).contains(&raw.v);
            point_clusters.push(PointCluster {
                branches: members,
                has_term_at_v,
            });
        }
        let dead_arc = puiseux_for_curve && point_clusters.iter().all(|pc| pc.has_term_at_v);
        let b = point_clusters.len() as u32 + u32::from(dead_arc);
        let arrows: Vec<usize> = raw
            .cluster
            .iter()
            .cloned()
            .filter(|&i| arrow_value[i] == raw.v)
            .collect();
        let mut puiseux_for_branch = BTreeMap::new();
        for &i in &raw.cluster {
            puiseux_for_branch.insert(i, ratios[i].contains(&raw.v));
        }
        out.push(RDivisor {
            id,
            valuation: raw.v.clone(),
            cluster: raw.cluster.clone(),
            point_clusters,
            m,
            n_e,
            n_under,
            k_e,
            genus,
            puiseux_for_curve,
            dead_arc,
            b,
            parent: None,
            arrows,
            puiseux_for_branch,
            associated: vec![],
        });
    }

    // parents: deepest stored divisor strictly below with containing cluster
    for id in 0..out.len() {
        let mut best: Option<usize> = None;
        for cand in 0..out.len() {
            if cand == id {
                continue;
            }
            let below = out[cand].valuation < out[id].valuation;
            let contains = out[id]
                .cluster
                .iter()
                .all(|i| out[cand].cluster.contains(i));
            if below && contains {
                best = match best {
                    None => Some(cand),
                    Some(b) if out[cand].valuation > out[b].valuation => Some(cand),
                    other => other,
                };
            }
        }
        out[id].parent = best;
    }

    // associated upstairs divisors: valuation n*v, cluster projecting onto
    // the base cluster
    let n = ram.order;
    for rd in out.iter_mut() {
        let vv = &rd.valuation * BigRational::from_integer(BigInt::from(n));
        if !vv.denom().is_one() {
            return Err(Error::Internal("ramified valuation not integral".into()));
        }
        let vi: u32 = vv.to_integer().to_string().parse().unwrap();
        for d in &upstairs.divisors {
            if d.valuation != vi {
                continue;
            }
            let mut proj: Vec<usize> = d.cluster.iter().map(|&k| ram.origin[k].0).collect();
            proj.sort_unstable();
            proj.dedup();
            let mut base = rd.cluster.clone();
            base.sort_unstable();
            if proj == base {
                rd.associated.push(d.id);
            }
        }
        rd.associated.sort_unstable();
    }
    Ok(out)
}

// -- helpers used by callers ------------------------------------------------

/// Zero rational for convenience in match guards.
pub fn rat_one() -> Rat {
    BigRational::one()
}

pub fn rat_is_zero(r: &Rat) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn smooth(terms: Vec<(u32, i64)>, label: &str) -> Branch {
        Branch::smooth(
            terms.into_iter().map(|(e, c)| (e, s(c))).collect(),
            16,
            label,
        )
        .unwrap()
    }

    /// Branches of the two logarithmic foliations of the worked example:
    /// C = (y-x)(y+x^2)(y-x^2)(y+2x^2), D = (y+x)(y+x^2+x^3)(y-x^2+x^3).
    pub fn ce_me_branches() -> Vec<Branch> {
        vec![
            smooth(vec![(1, 1)], "C1"),
            smooth(vec![(2, -1)], "C2"),
            smooth(vec![(2, 1)], "C3"),
            smooth(vec![(2, -2)], "C4"),
            smooth(vec![(1, -1)], "D1"),
            smooth(vec![(2, -1), (3, -1)], "D2"),
            smooth(vec![(2, 1), (3, -1)], "D3"),
        ]
    }

    #[test]
    fn ce_me_graph_shape() {
        let g = DualGraph::build(ce_me_branches()).unwrap();
        // E1: three tangent directions (1, 0, -1)
        let e1 = &g.divisors[0];
        assert_eq!(e1.valuation, 1);
        assert_eq!(e1.b(), 3);
        // E2 over the 0 direction carries points at -1, 1, -2 in order
        let e2_id = e1.point_child
            .iter()
            .flatten()
            .next()
            .cloned()
            .unwrap();
        let e2 = &g.divisors[e2_id];
        assert_eq!(e2.valuation, 2);
        let coords: Vec<Scalar> = e2.points.iter().map(|p| p.coord.clone()).collect();
        assert_eq!(coords, vec![s(-1), s(1), s(-2)]);
        assert_eq!(e2.b(), 3);
        // adapted coordinates of E2 are trivial here
        assert!(g.adapted_eps(e2_id).is_zero());
        // two more depth-3 divisors separate {C2,D2} and {C3,D3}
        assert_eq!(g.divisors.len(), 4);
        for d in &g.divisors {
            if d.valuation == 3 {
                assert_eq!(d.b(), 2);
                assert_eq!(d.arrows.len(), 2);
            }
        }
    }

    #[test]
    fn trivial_graphs() {
        // two transversal lines: single divisor, b = 2
        let g = DualGraph::build(vec![smooth(vec![(1, 1)], "a"), smooth(vec![(1, -1)], "b")])
            .unwrap();
        assert_eq!(g.divisors.len(), 1);
        assert_eq!(g.divisors[0].b(), 2);
        assert_eq!(g.divisors[0].arrows.len(), 2);
        // single smooth branch: the degenerate single-divisor graph
        let g1 = DualGraph::build(vec![smooth(vec![(1, 2)], "only")]).unwrap();
        assert_eq!(g1.divisors.len(), 1);
        assert_eq!(g1.divisors[0].arrows, vec![0]);
    }

    #[test]
    fn adapted_coordinates_examples() {
        // divisor following y = x + x^3 at depth 2 has eps = x
        let g = DualGraph::build(vec![
            smooth(vec![(1, 1), (3, 1)], "a"),
            smooth(vec![(1, 1)], "b"),
        ])
        .unwrap();
        let d2 = g.divisors.iter().find(|d| d.valuation == 2).unwrap();
        let eps = g.adapted_eps(d2.id);
        assert_eq!(eps, UPoly::from_coeffs(vec![s(0), s(1)]));
        // E1 always has eps = 0
        assert!(g.adapted_eps(0).is_zero());
    }

    #[test]
    fn ramify_examples() {
        // cusp, n = 2: two smooth branches v = u^3 and v = -u^3
        let cusp = Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap();
        let ram = ramify(&[cusp.clone()], 2).unwrap();
        assert_eq!(ram.lifted.len(), 2);
        assert_eq!(ram.lifted[0].terms, vec![(3, s(1))]);
        assert_eq!(ram.lifted[1].terms, vec![(3, s(-1))]);
        // smooth branch lifts to a single component
        let par = Branch::smooth(vec![(2, s(1))], 24, "par").unwrap();
        let ram2 = ramify(&[par], 2).unwrap();
        assert_eq!(ram2.lifted.len(), 1);
        assert_eq!(ram2.lifted[0].terms, vec![(4, s(1))]);
        // divisibility failure
        assert!(ramify(&[cusp], 3).is_err());
    }

    #[test]
    fn ramified_two_pair_coincidences() {
        // (t^4, t^6 + t^7) with n = 4: four smooth branches over Q(zeta_4)
        // whose pairwise coincidences realize 6/4 and 7/4 in x-units.
        let b = Branch::new(4, vec![(6, s(1)), (7, s(1))], 40, "f").unwrap();
        let ram = ramify(&[b], 4).unwrap();
        assert_eq!(ram.lifted.len(), 4);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let c = ram.lifted[i].coincidence(&ram.lifted[j]).unwrap();
                seen.insert(c.to_string());
            }
        }
        // u-orders 6 and 7 (x-ratios 3/2, 7/4)
        assert_eq!(
            seen.into_iter().collect::<Vec<_>>(),
            vec!["6".to_string(), "7".to_string()]
        );
    }

    #[test]
    fn condensed_cusp_and_parabola() {
        let cusp = Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap();
        let par = Branch::smooth(vec![(2, s(1))], 24, "par").unwrap();
        let res = Resolution::build(vec![cusp, par], None).unwrap();
        // E1 is not a bifurcation divisor (shared tangent), the v = 3/2
        // divisor is, with b = 2 and no dead arc (the parabola occupies it)
        assert_eq!(res.downstairs.len(), 2);
        let e1 = &res.downstairs[0];
        assert_eq!(e1.valuation, rat_of(1, 1));
        assert_eq!(e1.b, 1);
        let e = &res.downstairs[1];
        assert_eq!(e.valuation, rat_of(3, 2));
        assert_eq!(e.b, 2);
        assert_eq!(e.n_e, 2);
        assert_eq!(e.n_under, 1);
        assert_eq!(e.m, 2);
        assert!(e.puiseux_for_curve);
        assert!(!e.dead_arc);
        assert!(e.puiseux_for_branch[&0]);
        assert!(!e.puiseux_for_branch[&1]);
        // upstairs: valence 3 = (b-1)*n_e + 1
        assert_eq!(res.upstairs.divisors[e.associated[0]].b(), 3);
        // arrows: cusp at v=3/2, parabola too (its max coincidence is 3/2)
        assert!(e.arrows.contains(&0));
        assert!(e.arrows.contains(&1));
    }

    #[test]
    fn condensed_lone_cusp_dead_arc() {
        let cusp = Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap();
        let res = Resolution::build(vec![cusp], None).unwrap();
        let e = res
            .downstairs
            .iter()
            .find(|d| d.valuation == rat_of(3, 2))
            .unwrap();
        assert!(e.dead_arc);
        assert_eq!(e.b, 2);
        // upstairs valence (b-1)*n_e = 2
        assert_eq!(res.upstairs.divisors[e.associated[0]].b(), 2);
    }

    #[test]
    fn dot_snapshot() {
        let g = DualGraph::build(vec![
            smooth(vec![(1, 1)], "a"),
            smooth(vec![(1, -1)], "b"),
        ])
        .unwrap();
        let dot = g.to_dot();
        let expect = "digraph dual_graph {\n  rankdir=LR;\n  E1 [label=\"E1 v=1 m=1 b=2\"];\n  arrow_a [shape=none, label=\"a\"];\n  E1 -> arrow_a;\n  arrow_b [shape=none, label=\"b\"];\n  E1 -> arrow_b;\n}\n";
        assert_eq!(dot, expect);
    }

    #[test]
    fn deck_and_point_maps_commute() {
        // two-pair branch: check the association diagram on point tables
        let b = Branch::new(4, vec![(6, s(1)), (7, s(1))], 40, "f").unwrap();
        let res = Resolution::build(vec![b], None).unwrap();
        for rd in &res.downstairs {
            if !rd.is_bifurcation() {
                continue;
            }
            for &up in &rd.associated {
                let dup = res.deck_divisor(up);
                assert!(rd.associated.contains(&dup));
                for (pi, pt) in res.upstairs.divisors[up].points.iter().enumerate() {
                    if pt.branches.is_empty() {
                        continue;
                    }
                    let base = res.point_to_base(rd.id, up, pi);
                    let (d2, p2) = res.deck_point(up, pi);
                    let base2 = res.point_to_base(rd.id, d2, p2);
                    assert_eq!(base, base2);
                }
            }
        }
    }
}
