//! Foliation models and their local invariants: multiplicity, Milnor
//! numbers, tangency orders, and Camacho-Sad indices, both from explicit
//! 1-forms (strict transforms and residues) and from logarithmic models
//! (closed formulas on the dual graph).

use std::collections::BTreeMap;

use crate::branch::Branch;
use crate::form::OneForm;
use crate::graph::DualGraph;
use crate::poly2::Poly2;
use crate::scalar::Scalar;
use crate::series::OrderOutcome;
use crate::upoly::{residue_at, UPoly};
use crate::{Error, Result};

/// A singular foliation given either by an explicit saturated 1-form with
/// its separatrix branches, or by a logarithmic model: branches f_i with
/// weights lambda_i defining f_1...f_r sum lambda_i df_i/f_i = 0.
#[derive(Clone, Debug)]
pub enum FoliationModel {
    Explicit {
        form: OneForm,
        separatrices: Vec<Branch>,
    },
    Logarithmic {
        branches: Vec<Branch>,
        weights: Vec<Scalar>,
    },
}

impl FoliationModel {
    pub fn logarithmic(branches: Vec<Branch>, weights: Vec<Scalar>) -> Result<FoliationModel> {
        if branches.len() != weights.len() {
            return Err(Error::Input(
                "logarithmic model needs one weight per branch".into(),
            ));
        }
        if weights.iter().any(|w| w.is_zero()) {
            return Err(Error::Input("logarithmic weights must be nonzero".into()));
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                // distinctness; coincidence certifies separation
                branches[i].coincidence(&branches[j])?;
            }
        }
        Ok(FoliationModel::Logarithmic { branches, weights })
    }

    /// Hamiltonian model d(f_1...f_r) = 0: all weights one.
    pub fn hamiltonian(branches: Vec<Branch>) -> Result<FoliationModel> {
        let w = vec![Scalar::one(); branches.len()];
        FoliationModel::logarithmic(branches, w)
    }

    /// Explicit form; the separatrix list is validated against the form
    /// (gamma^* omega = 0 within truncation).
    pub fn explicit(form: OneForm, separatrices: Vec<Branch>) -> Result<FoliationModel> {
        let form = form.saturate();
        for s in &separatrices {
            if !is_separatrix(&form, s)? {
                return Err(Error::Assumption(format!(
                    "{} is not invariant by the given 1-form",
                    s.label
                )));
            }
        }
        Ok(FoliationModel::Explicit { form, separatrices })
    }

    pub fn separatrices(&self) -> &[Branch] {
        match self {
            FoliationModel::Explicit { separatrices, .. } => separatrices,
            FoliationModel::Logarithmic { branches, .. } => branches,
        }
    }

    pub fn weights(&self) -> Option<&[Scalar]> {
        match self {
            FoliationModel::Explicit { .. } => None,
            FoliationModel::Logarithmic { weights, .. } => Some(weights),
        }
    }

    /// Defining 1-form. Logarithmic models are assembled exactly from the
    /// implicit equations: omega = sum_i lambda_i (prod_{j != i} f_j) df_i.
    pub fn form(&self) -> Result<OneForm> {
        match self {
            FoliationModel::Explicit { form, .. } => Ok(form.clone()),
            FoliationModel::Logarithmic { branches, weights } => {
                assemble_logarithmic(branches, weights)
            }
        }
    }

    /// Multiplicity at the origin of the (saturated) foliation.
    pub fn multiplicity(&self) -> Result<u32> {
        Ok(self.form()?.multiplicity())
    }

    /// Milnor number (A, B)_0 of the saturated form, by localized resultant.
    pub fn milnor(&self) -> Result<u64> {
        let form = self.form()?;
        let g = form.a.gcd(&form.b);
        if g.degree().unwrap_or(0) > 0 {
            return Err(Error::Assumption(
                "dicritical-like degeneracy: form components share a factor".into(),
            ));
        }
        intersection_number_at_origin(&form.a, &form.b)
    }
}

/// Assemble sum_i w_i (prod_{j != i} f_j) df_i from implicit equations.
pub fn assemble_logarithmic(branches: &[Branch], weights: &[Scalar]) -> Result<OneForm> {
    let eqs: Vec<Poly2> = branches
        .iter()
        .map(|b| b.implicit_equation())
        .collect::<Result<_>>()?;
    let r = eqs.len();
    // prefix[i] = f_0..f_{i-1}, suffix[i] = f_i..f_{r-1}
    let mut prefix = vec![Poly2::one(); r + 1];
    for i in 0..r {
        prefix[i + 1] = prefix[i].mul(&eqs[i]);
    }
    let mut suffix = vec![Poly2::one(); r + 1];
    for i in (0..r).rev() {
        suffix[i] = suffix[i + 1].mul(&eqs[i]);
    }
    let mut a = Poly2::zero();
    let mut b = Poly2::zero();
    for i in 0..r {
        let others = prefix[i].mul(&suffix[i + 1]);
        let scaled = others.scale(&weights[i]);
        a = a.add(&scaled.mul(&eqs[i].dx()));
        b = b.add(&scaled.mul(&eqs[i].dy()));
    }
    OneForm::new(a, b)
}

/// gamma^* omega = (A(gamma) x' + B(gamma) y') dt as a series in t.
pub fn pullback_along(form: &OneForm, gamma: &Branch) -> crate::series::Series {
    let (xs, ys) = gamma.param();
    let a = form.a.eval_series(&xs, &ys).mul(&xs.derivative());
    let b = form.b.eval_series(&xs, &ys).mul(&ys.derivative());
    a.add(&b)
}

/// Invariance of a branch under the foliation, within truncation.
pub fn is_separatrix(form: &OneForm, gamma: &Branch) -> Result<bool> {
    Ok(pullback_along(form, gamma).is_known_zero())
}

/// Milnor number of the foliation along a separatrix S:
/// ord_t B(gamma(t)) - ord_t x(t) + 1, falling back to the dual expression
/// ord_t A(gamma(t)) - ord_t y(t) + 1 when B vanishes along the branch.
pub fn milnor_along(form: &OneForm, gamma: &Branch) -> Result<u64> {
    if !is_separatrix(form, gamma)? {
        return Err(Error::Assumption(format!(
            "{} is not a separatrix",
            gamma.label
        )));
    }
    let checked = |num: i64, den: i64| -> Result<u64> {
        let v = num - den + 1;
        if v < 0 {
            return Err(Error::Internal(
                "negative Milnor number along a separatrix".into(),
            ));
        }
        Ok(v as u64)
    };
    let (xs, ys) = gamma.param();
    let bo = form.b.eval_series(&xs, &ys).order();
    if let OrderOutcome::Finite(o) = bo {
        return checked(o as i64, gamma.mult as i64);
    }
    let ao = form.a.eval_series(&xs, &ys).order();
    let yo = ys.order();
    match (ao, yo) {
        (OrderOutcome::Finite(a), OrderOutcome::Finite(y)) => checked(a as i64, y as i64),
        _ => Err(Error::Truncation(format!(
            "cannot certify Milnor number along {}",
            gamma.label
        ))),
    }
}

/// Tangency order of a non-invariant branch: ord_t gamma^* omega.
pub fn tangency_order(form: &OneForm, gamma: &Branch) -> Result<u64> {
    match pullback_along(form, gamma).order() {
        OrderOutcome::Finite(o) => Ok(o as u64),
        OrderOutcome::AtLeast(_) => Err(Error::Assumption(format!(
            "{} is invariant: tangency order infinite",
            gamma.label
        ))),
    }
}

/// Tangency order along the vertical axis x = 0, parametrized by (0, t):
/// the pullback is B(0, t) dt.
pub fn tangency_order_vertical(form: &OneForm) -> Result<u64> {
    let b0 = form.b.at_x0();
    match b0.coeffs.iter().position(|c| !c.is_zero()) {
        Some(o) => Ok(o as u64),
        None => Err(Error::Assumption(
            "x = 0 is invariant: tangency order infinite".into(),
        )),
    }
}

/// Camacho-Sad index of the foliation relative to a smooth separatrix at
/// the origin: straighten S to y = 0 and take -Res_0 a(x,0)/b(x,0) where
/// the form reads y a dx + b dy.
pub fn cs_index_smooth(form: &OneForm, s: &Branch) -> Result<Scalar> {
    if !s.is_smooth() {
        return Err(Error::Input(format!(
            "{} is not smooth; use divisor-point indices",
            s.label
        )));
    }
    if !is_separatrix(form, s)? {
        return Err(Error::Assumption(format!(
            "{} is not a separatrix",
            s.label
        )));
    }
    let ys = UPoly::from_coeffs({
        let mut coeffs = vec![Scalar::zero(); s.trunc as usize];
        for &(j, ref c) in &s.terms {
            coeffs[j as usize] = c.clone();
        }
        coeffs
    });
    let shifted = form.shift_y(&ys);
    // A'(x, y) must vanish on y = 0
    let a_bottom = shifted
        .a
        .terms
        .keys()
        .any(|&(_, j)| j == 0);
    if a_bottom {
        return Err(Error::Internal(
            "straightened separatrix does not divide the dx-coefficient".into(),
        ));
    }
    // a(x,0): coefficient of y^1 in A'; b(x,0): coefficient of y^0 in B'
    let mut a0 = UPoly::zero();
    for (&(i, j), c) in &shifted.a.terms {
        if j == 1 {
            a0 = a0.add(&UPoly::monomial(c.clone(), i as usize));
        }
    }
    let mut b0 = UPoly::zero();
    for (&(i, j), c) in &shifted.b.terms {
        if j == 0 {
            b0 = b0.add(&UPoly::monomial(c.clone(), i as usize));
        }
    }
    if b0.is_zero() {
        return Err(Error::Internal("degenerate index computation".into()));
    }
    Ok(residue_at(&a0, &b0, &Scalar::zero())?.neg_ref())
}

/// Strict transform of a form at a divisor of the graph, in the divisor's
/// adapted coordinates: substitute y -> y + eps(x), pull back by
/// (x, x^p y) and divide by the largest common power of x.
pub fn strict_transform_at(form: &OneForm, graph: &DualGraph, divisor: usize) -> OneForm {
    let eps = graph.adapted_eps(divisor);
    let p = graph.divisors[divisor].valuation;
    let shifted = form.shift_y(&eps);
    shifted.strict_transform(p).0
}

/// Split a transformed form as A^E dx + x B^E dy; errors when the divisor
/// is not invariant (dicritical case).
pub fn divisor_restriction(st: &OneForm) -> Result<(UPoly, UPoly)> {
    let a0 = st.a.at_x0();
    if a0.is_zero() {
        return Err(Error::Assumption(
            "divisor is not invariant (dicritical side)".into(),
        ));
    }
    // B must be divisible by x for E = (x = 0) to be invariant
    let bx = st.b.x_valuation();
    if bx == 0 && !st.b.is_zero() {
        return Err(Error::Assumption(
            "divisor is not invariant (dicritical side)".into(),
        ));
    }
    let b_red = if st.b.is_zero() {
        Poly2::zero()
    } else {
        st.b.div_x_pow(1)
    };
    Ok((a0, b_red.at_x0()))
}

/// Camacho-Sad index of an explicit form at the point y = c of a divisor:
/// -Res_{y=c} B^E(0,y)/A^E(0,y) on the strict transform A^E dx + x B^E dy.
pub fn cs_index_at_divisor_point(
    form: &OneForm,
    graph: &DualGraph,
    divisor: usize,
    coord: &Scalar,
) -> Result<Scalar> {
    let st = strict_transform_at(form, graph, divisor);
    let (a0, b0) = divisor_restriction(&st)?;
    let k = a0.root_multiplicity(coord);
    if k > 0 {
        let kb = if b0.is_zero() {
            usize::MAX
        } else {
            b0.root_multiplicity(coord)
        };
        if kb == usize::MAX && k > 0 {
            return Err(Error::Assumption(
                "non-simple configuration at divisor point".into(),
            ));
        }
    }
    Ok(residue_at(&b0, &a0, coord)?.neg_ref())
}

/// Index transport along one blow-up of a non-bifurcation chain:
/// the index I at the blown-up point becomes -I/(I-1) at the new
/// intersection with the next divisor.
pub fn transport_index(i: &Scalar) -> Result<Scalar> {
    let den = i.sub_ref(&Scalar::one());
    if den.is_zero() {
        return Err(Error::Assumption("index 1 cannot be transported".into()));
    }
    i.neg_ref().div_ref(&den)
}

/// Logarithmic data bound to a dual graph: weight per graph branch index
/// (only the separatrix branches of the model appear).
#[derive(Clone, Debug)]
pub struct LogWeights {
    pub weights: BTreeMap<usize, Scalar>,
}

impl LogWeights {
    pub fn new(weights: BTreeMap<usize, Scalar>) -> LogWeights {
        LogWeights { weights }
    }

    /// Residue of the logarithmic model along the divisor:
    /// kappa_E = sum_j w_j * #(shared geodesic divisors of C_j and E).
    pub fn kappa(&self, graph: &DualGraph, divisor: usize) -> Scalar {
        let mut total = Scalar::zero();
        for (&b, w) in &self.weights {
            let count = graph.contact_order(b, divisor);
            total = total.add_ref(&w.mul_ref(&Scalar::from_int(count as i64)));
        }
        total
    }

    /// kappa with the pullback-multiplicity cross-check: it must equal
    /// sum_j w_j * ord_x(f_j(x, x^p y + eps(x))).
    pub fn kappa_checked(
        &self,
        graph: &DualGraph,
        divisor: usize,
        implicit: &BTreeMap<usize, Poly2>,
    ) -> Result<Scalar> {
        let combinatorial = self.kappa(graph, divisor);
        let eps = graph.adapted_eps(divisor);
        let p = graph.divisors[divisor].valuation;
        let mut total = Scalar::zero();
        for (&b, w) in &self.weights {
            let f = implicit
                .get(&b)
                .ok_or_else(|| Error::Internal("missing implicit equation".into()))?;
            let pulled = f.shift_y(&eps).monomial_pullback(p);
            let mult = pulled.x_valuation();
            total = total.add_ref(&w.mul_ref(&Scalar::from_int(mult as i64)));
        }
        if combinatorial != total {
            return Err(Error::Internal(format!(
                "kappa mismatch at divisor {}: geodesic count {} vs pullback multiplicity {}",
                divisor, combinatorial, total
            )));
        }
        if combinatorial.is_zero() {
            return Err(Error::Assumption("resonant logarithmic model".into()));
        }
        Ok(combinatorial)
    }

    /// Closed-form Camacho-Sad index at a point of the divisor:
    /// -(sum of weights of branches through the point)/kappa_E.
    pub fn index_at(&self, graph: &DualGraph, divisor: usize, point: usize) -> Result<Scalar> {
        let kappa = self.kappa(graph, divisor);
        if kappa.is_zero() {
            return Err(Error::Assumption("resonant logarithmic model".into()));
        }
        let pt = &graph.divisors[divisor].points[point];
        let mut num = Scalar::zero();
        for &b in &pt.branches {
            if let Some(w) = self.weights.get(&b) {
                num = num.add_ref(w);
            }
        }
        Ok(num.neg_ref().div_ref(&kappa)?)
    }

    /// Simple-singularity sanity: at every unresolved divisor point the
    /// index must not be a positive rational. Returns offending points.
    pub fn simple_singularity_failures(
        &self,
        graph: &DualGraph,
    ) -> Result<Vec<(usize, usize)>> {
        let mut bad = Vec::new();
        for d in &graph.divisors {
            for (l, _) in d.points.iter().enumerate() {
                if d.point_child[l].is_some() {
                    continue;
                }
                let idx = self.index_at(graph, d.id, l)?;
                if idx.is_positive_rational() {
                    bad.push((d.id, l));
                }
            }
        }
        Ok(bad)
    }
}

/// Localized intersection number (a, b)_0 at the origin of two coprime
/// polynomials: shear coordinates until the line x = 0 meets the common
/// zero set only at the origin and both leading y-coefficients are
/// constants, then read ord_x of the y-resultant.
pub fn intersection_number_at_origin(a: &Poly2, b: &Poly2) -> Result<u64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Input("intersection with the zero polynomial".into()));
    }
    'outer: for c in 0..64i64 {
        let (ta, tb) = if c == 0 {
            (a.clone(), b.clone())
        } else {
            (shear_x(a, c), shear_x(b, c))
        };
        // leading y-coefficients must not vanish on the line x = 0
        for t in [&ta, &tb] {
            let dy = t.deg_y().unwrap_or(0) as usize;
            let lead = &t.by_y_degree()[dy];
            if lead.is_zero() || lead.eval(&Scalar::zero()).is_zero() {
                continue 'outer;
            }
        }
        // common zeros on the line x = 0 only at y = 0
        let ga = ta.at_x0();
        let gb = tb.at_x0();
        if ga.is_zero() || gb.is_zero() {
            continue;
        }
        let g = ga.gcd(&gb);
        let nonzero_root = g
            .coeffs
            .iter()
            .position(|x| !x.is_zero())
            .map(|v| v < g.coeffs.len() - 1)
            .unwrap_or(false);
        if nonzero_root {
            continue;
        }
        let res = ta.resultant_y(&tb)?;
        if res.is_zero() {
            return Err(Error::Assumption(
                "components share a factor: intersection number infinite".into(),
            ));
        }
        let ord = res
            .coeffs
            .iter()
            .position(|x| !x.is_zero())
            .unwrap_or(0);
        return Ok(ord as u64);
    }
    Err(Error::Internal(
        "no shear separated the origin on the axis".into(),
    ))
}

/// Substitute x -> x + c*y.
fn shear_x(p: &Poly2, c: i64) -> Poly2 {
    let cx = Poly2::x().add(&Poly2::monomial(0, 1, Scalar::from_int(c)));
    let maxi = p.deg_x().unwrap_or(0) as usize;
    let mut pows = Vec::with_capacity(maxi + 1);
    pows.push(Poly2::one());
    for k in 1..=maxi {
        let last: &Poly2 = &pows[k - 1];
        pows.push(last.mul(&cx));
    }
    let mut out = Poly2::zero();
    for (&(i, j), coef) in &p.terms {
        let term = pows[i as usize].scale(coef);
        for (&(a, b), cc) in &term.terms {
            out.insert(a, b + j, cc.clone());
        }
    }
    out
}

/// Milnor number of a curve from its branch data:
/// mu = sum mu_i + 2 sum_{i<j} (C_i, C_j)_0 - (r - 1).
pub fn milnor_of_curve(branches: &[Branch]) -> Result<u64> {
    let mut mu: i128 = 1 - branches.len() as i128;
    for b in branches {
        mu += b.characteristic_data()?.milnor() as i128;
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            mu += 2 * branches[i].intersection_multiplicity(&branches[j])? as i128;
        }
    }
    Ok(mu.max(0) as u64)
}
