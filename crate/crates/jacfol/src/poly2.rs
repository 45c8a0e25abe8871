//! Sparse bivariate polynomials over [`Scalar`], with the Newton-polygon and
//! weighted-initial-form machinery used throughout the analysis.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::{BigInt, One, Zero};

use crate::scalar::{Rat, Scalar};
use crate::series::Series;
use crate::upoly::UPoly;
use crate::{Error, Result};

/// Polynomial in (x, y): map from exponent pairs (i, j) to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    pub terms: BTreeMap<(u32, u32), Scalar>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn constant(c: Scalar) -> Poly2 {
        let mut p = Poly2::zero();
        p.insert(0, 0, c);
        p
    }

    pub fn one() -> Poly2 {
        Poly2::constant(Scalar::one())
    }

    pub fn monomial(i: u32, j: u32, c: Scalar) -> Poly2 {
        let mut p = Poly2::zero();
        p.insert(i, j, c);
        p
    }

    pub fn x() -> Poly2 {
        Poly2::monomial(1, 0, Scalar::one())
    }

    pub fn y() -> Poly2 {
        Poly2::monomial(0, 1, Scalar::one())
    }

    pub fn insert(&mut self, i: u32, j: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.insert(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.neg_ref()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.insert(i1 + i2, j1 + j2, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, a)| (k, a.mul_ref(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut acc = Poly2::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.insert(i - 1, j, c.mul_ref(&Scalar::from_int(i as i64)));
            }
        }
        out
    }

    pub fn dy(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.insert(i, j - 1, c.mul_ref(&Scalar::from_int(j as i64)));
            }
        }
        out
    }

    /// Total order at the origin: min of i + j over the support.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().cloned().collect()
    }

    /// Lowest-degree homogeneous part.
    pub fn lowest_part(&self) -> Poly2 {
        match self.order() {
            None => Poly2::zero(),
            Some(m) => Poly2 {
                terms: self
                    .terms
                    .iter()
                    .filter(|(&(i, j), _)| i + j == m)
                    .map(|(&k, c)| (k, c.clone()))
                    .collect(),
            },
        }
    }

    /// View as polynomial in y with coefficients in Scalar[x].
    pub fn by_y_degree(&self) -> Vec<UPoly> {
        let dy = match self.deg_y() {
            None => return vec![],
            Some(d) => d as usize,
        };
        let mut out = vec![UPoly::zero(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let u = &mut out[j as usize];
            let mut coeffs = u.coeffs.clone();
            if coeffs.len() <= i as usize {
                coeffs.resize(i as usize + 1, Scalar::zero());
            }
            coeffs[i as usize] = coeffs[i as usize].add_ref(c);
            *u = UPoly::from_coeffs(coeffs);
        }
        out
    }

    pub fn from_y_coeffs(coeffs: &[UPoly]) -> Poly2 {
        let mut out = Poly2::zero();
        for (j, u) in coeffs.iter().enumerate() {
            for (i, c) in u.coeffs.iter().enumerate() {
                out.insert(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    /// Restrict to x = 0, as a univariate polynomial in y.
    pub fn at_x0(&self) -> UPoly {
        let mut coeffs: Vec<Scalar> = vec![];
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                if coeffs.len() <= j as usize {
                    coeffs.resize(j as usize + 1, Scalar::zero());
                }
                coeffs[j as usize] = c.clone();
            }
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Substitute x = 1, as a univariate polynomial in y.
    pub fn at_x1(&self) -> UPoly {
        let mut coeffs: Vec<Scalar> = vec![];
        for (&(_, j), c) in &self.terms {
            if coeffs.len() <= j as usize {
                coeffs.resize(j as usize + 1, Scalar::zero());
            }
            coeffs[j as usize] = coeffs[j as usize].add_ref(c);
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Embed a univariate polynomial in x.
    pub fn from_x_poly(p: &UPoly) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, c) in p.coeffs.iter().enumerate() {
            out.insert(i as u32, 0, c.clone());
        }
        out
    }

    /// Substitute y -> y + eps(x).
    pub fn shift_y(&self, eps: &UPoly) -> Poly2 {
        if eps.is_zero() {
            return self.clone();
        }
        let eps2 = Poly2::from_x_poly(eps);
        let maxj = self.deg_y().unwrap_or(0) as usize;
        // powers of (y + eps)
        let mut pows: Vec<Poly2> = Vec::with_capacity(maxj + 1);
        pows.push(Poly2::one());
        let base = Poly2::y().add(&eps2);
        for _ in 0..maxj {
            let last = pows.last().unwrap();
            pows.push(last.mul(&base));
        }
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            let term = pows[j as usize].scale(c);
            for (&(a, b), cc) in &term.terms {
                out.insert(a + i, b, cc.clone());
            }
        }
        out
    }

    /// Substitute (x, y) -> (x, x^p * y).
    pub fn monomial_pullback(&self, p: u32) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            out.insert(i + p * j, j, c.clone());
        }
        out
    }

    /// Substitute x -> x^n.
    pub fn ramify_x(&self, n: u32) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            out.insert(i * n, j, c.clone());
        }
        out
    }

    /// Largest power of x dividing the polynomial.
    pub fn x_valuation(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).min().unwrap_or(0)
    }

    /// Divide by x^k (must divide exactly).
    pub fn div_x_pow(&self, k: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    assert!(i >= k, "x-power division must be exact");
                    ((i - k, j), c.clone())
                })
                .collect(),
        }
    }

    /// Evaluate along parametrized arcs x = xs(t), y = ys(t).
    pub fn eval_series(&self, xs: &Series, ys: &Series) -> Series {
        let maxi = self.deg_x().unwrap_or(0) as usize;
        let maxj = self.deg_y().unwrap_or(0) as usize;
        let mut xp: Vec<Series> = Vec::with_capacity(maxi + 1);
        let mut yp: Vec<Series> = Vec::with_capacity(maxj + 1);
        xp.push(Series::from_poly(vec![Scalar::one()]));
        yp.push(Series::from_poly(vec![Scalar::one()]));
        for k in 1..=maxi {
            xp.push(xp[k - 1].mul(xs));
        }
        for k in 1..=maxj {
            yp.push(yp[k - 1].mul(ys));
        }
        let mut acc: Option<Series> = None;
        for (&(i, j), c) in &self.terms {
            let term = xp[i as usize].mul(&yp[j as usize]).scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.unwrap_or_else(|| Series::zero(crate::series::EXACT))
    }

    /// Content with respect to y: monic gcd of the Scalar[x] coefficients.
    pub fn content_y(&self) -> UPoly {
        let mut g = UPoly::zero();
        for u in self.by_y_degree() {
            if u.is_zero() {
                continue;
            }
            g = if g.is_zero() { u } else { g.gcd(&u) };
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    /// Greatest common divisor, via the primitive Euclidean algorithm in
    /// (Scalar[x])[y]. Returned up to a scalar unit.
    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Work in (Q(x))[y] by clearing contents.
        let ca = self.content_y();
        let cb = other.content_y();
        let content_gcd = ca.gcd(&cb);
        let pa = poly2_div_content(self, &ca);
        let pb = poly2_div_content(other, &cb);
        let prim = prim_gcd_y(&pa, &pb);
        prim.mul(&Poly2::from_x_poly(&content_gcd))
    }

    /// Exact division (panics if not exact).
    pub fn div_exact(&self, den: &Poly2) -> Poly2 {
        let (q, r) = self.divmod_y(den);
        assert!(r.is_zero(), "inexact bivariate division");
        q
    }

    /// Division with remainder in (Q(x))[y] when the divisor's leading
    /// y-coefficient divides cleanly at every step; used only for exact cases.
    fn divmod_y(&self, den: &Poly2) -> (Poly2, Poly2) {
        if den.deg_y() == Some(0) || den.deg_y().is_none() {
            // divisor is univariate in x
            let d = den.by_y_degree();
            let dx = &d[0];
            let mut q = Poly2::zero();
            for (j, u) in self.by_y_degree().iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                let (uq, ur) = u.divmod(dx);
                if !ur.is_zero() {
                    return (Poly2::zero(), self.clone());
                }
                for (i, c) in uq.coeffs.iter().enumerate() {
                    q.insert(i as u32, j as u32, c.clone());
                }
            }
            return (q, Poly2::zero());
        }
        let dd = den.deg_y().unwrap() as usize;
        let den_y = den.by_y_degree();
        let lead = &den_y[dd];
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        loop {
            let dr = match rem.deg_y() {
                None => break,
                Some(d) => d as usize,
            };
            if dr < dd {
                break;
            }
            let rem_y = rem.by_y_degree();
            let rl = &rem_y[dr];
            let (c, cr) = rl.divmod(lead);
            if c.is_zero() || !cr.is_zero() {
                break;
            }
            let mut term = Poly2::zero();
            for (i, cc) in c.coeffs.iter().enumerate() {
                term.insert(i as u32, (dr - dd) as u32, cc.clone());
            }
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(den));
        }
        (quot, rem)
    }

    /// Resultant with respect to y, by the subresultant pseudo-remainder
    /// sequence over (Q[x])[y]; the divisions below are exact by the
    /// subresultant theory, keeping coefficients at the size of the answer.
    pub fn resultant_y(&self, other: &Poly2) -> Result<UPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(UPoly::zero());
        }
        let mut a = self.by_y_degree();
        let mut b = other.by_y_degree();
        let deg = |v: &Vec<UPoly>| -> usize { v.len().saturating_sub(1) };
        let mut sign = false;
        if deg(&a) < deg(&b) {
            if (deg(&a) * deg(&b)) % 2 == 1 {
                sign = !sign;
            }
            std::mem::swap(&mut a, &mut b);
        }
        if deg(&b) == 0 {
            let mut r = UPoly::one();
            for _ in 0..deg(&a) {
                r = r.mul(&b[0]);
            }
            if deg(&a) == 0 {
                r = UPoly::one();
            }
            return Ok(if sign { r.neg() } else { r });
        }
        let mut g = UPoly::one();
        let mut h = UPoly::one();
        loop {
            let da = deg(&a);
            let db = deg(&b);
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                sign = !sign;
            }
            let r = pseudo_rem_y(&a, &b, delta);
            if r.is_empty() {
                return Ok(UPoly::zero());
            }
            a = b;
            let mut div = g.clone();
            for _ in 0..delta {
                div = div.mul(&h);
            }
            b = r
                .into_iter()
                .map(|c| c.div_exact(&div))
                .collect();
            while b.last().map_or(false, |c| c.is_zero()) {
                b.pop();
            }
            g = a.last().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                let mut num = UPoly::one();
                for _ in 0..delta {
                    num = num.mul(&g);
                }
                let mut den = UPoly::one();
                for _ in 0..delta - 1 {
                    den = den.mul(&h);
                }
                num.div_exact(&den)
            };
            if deg(&b) == 0 {
                let dap = deg(&a);
                let mut num = UPoly::one();
                for _ in 0..dap {
                    num = num.mul(&b[0]);
                }
                let mut den = UPoly::one();
                for _ in 0..dap.saturating_sub(1) {
                    den = den.mul(&h);
                }
                let res = num.div_exact(&den);
                return Ok(if sign { res.neg() } else { res });
            }
        }
    }

    /// Pretty string with x/y names.
    pub fn to_string_xy(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let mut s = format!("({})", c);
            if i > 0 {
                s.push_str(&format!("*x^{}", i));
            }
            if j > 0 {
                s.push_str(&format!("*y^{}", j));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_xy())
    }
}

fn poly2_div_content(p: &Poly2, content: &UPoly) -> Poly2 {
    if content.degree() == Some(0) {
        let inv = content.leading().inv().unwrap();
        return p.scale(&inv);
    }
    let mut out = Poly2::zero();
    for (j, u) in p.by_y_degree().iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        let q = u.div_exact(content);
        for (i, c) in q.coeffs.iter().enumerate() {
            out.insert(i as u32, j as u32, c.clone());
        }
    }
    out
}

/// Primitive part of a y-primitive pair: Euclid with pseudo-division and
/// re-primitivization at each step.
fn prim_gcd_y(a: &Poly2, b: &Poly2) -> Poly2 {
    let (mut a, mut b) = if a.deg_y().unwrap_or(0) >= b.deg_y().unwrap_or(0) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if b.is_zero() {
            let c = a.content_y();
            return poly2_div_content(&a, &c);
        }
        if b.deg_y().unwrap_or(0) == 0 {
            // y-degree zero and primitive means a unit in (Q(x))[y]
            return Poly2::one();
        }
        let da = a.deg_y().unwrap_or(0);
        let db = b.deg_y().unwrap_or(0);
        let lead_b = b.by_y_degree()[db as usize].clone();
        // pseudo-remainder: lc(b)^(da-db+1) * a mod b
        let mult = {
            let mut m = UPoly::one();
            for _ in 0..(da - db + 1) {
                m = m.mul(&lead_b);
            }
            m
        };
        let scaled = a.mul(&Poly2::from_x_poly(&mult));
        let (_, r) = scaled.divmod_y(&b);
        let r = {
            let c = r.content_y();
            if c.is_zero() {
                Poly2::zero()
            } else {
                poly2_div_content(&r, &c)
            }
        };
        a = b;
        b = r;
    }
}

/// Pseudo-remainder in y: lc(b)^(delta+1) * a mod b, coefficients in Q[x].
fn pseudo_rem_y(a: &[UPoly], b: &[UPoly], delta: usize) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lcb = b.last().unwrap();
    let mut mult = UPoly::one();
    for _ in 0..=delta {
        mult = mult.mul(lcb);
    }
    let mut rem: Vec<UPoly> = a.iter().map(|c| c.mul(&mult)).collect();
    while rem.len() > db {
        let dr = rem.len() - 1;
        let lead = rem.last().unwrap().clone();
        if lead.is_zero() {
            rem.pop();
            continue;
        }
        // rem -= (lead / lcb) * y^{dr-db} * b; division exact because of the
        // pseudo-remainder multiplier
        let q = lead.div_exact(lcb);
        for k in 0..=db {
            let t = q.mul(&b[k]);
            rem[dr - db + k] = rem[dr - db + k].sub(&t);
        }
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
    }
    rem
}

/// Newton-form interpolation: divided differences, then one pass expanding
/// the running product basis. Much cheaper than per-node Lagrange basis
/// polynomials for many nodes over exact rationals.
#[allow(dead_code)]
fn newton_interpolate(xs: &[Scalar], ys: &[Scalar]) -> UPoly {
    let n = xs.len();
    if n == 0 {
        return UPoly::zero();
    }
    // divided-difference table, updated in place
    let mut dd: Vec<Scalar> = ys.to_vec();
    let mut coeffs: Vec<Scalar> = Vec::with_capacity(n);
    coeffs.push(dd[0].clone());
    for level in 1..n {
        for i in 0..n - level {
            let num = dd[i + 1].sub_ref(&dd[i]);
            let den = xs[i + level].sub_ref(&xs[i]);
            dd[i] = num.div_ref(&den).expect("distinct interpolation nodes");
        }
        coeffs.push(dd[0].clone());
    }
    let mut acc = UPoly::zero();
    let mut basis = UPoly::one();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&basis.scale(c));
        }
        if k + 1 < n {
            basis = basis.mul(&UPoly::linear_root(&xs[k]));
        }
    }
    acc
}

/// Vertices of the compact boundary of the Newton polygon: the convex hull of
/// `support + (R>=0)^2`, listed from the axis-side vertex of minimal second
/// coordinate to the vertex of minimal first coordinate.
pub fn newton_polygon(support: &[(u32, u32)]) -> Result<Vec<(u32, u32)>> {
    if support.is_empty() {
        return Err(Error::Input("empty Newton polygon".into()));
    }
    // Pareto-minimal points only.
    let mut pts: Vec<(u32, u32)> = support.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let minimal: Vec<(u32, u32)> = pts
        .iter()
        .cloned()
        .filter(|&(i, j)| {
            !pts.iter()
                .any(|&(a, b)| (a, b) != (i, j) && a <= i && b <= j)
        })
        .collect();
    // Sorted by increasing i, Pareto-minimality makes j strictly decreasing.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(i, j) in &minimal {
        let p = (i as i64, j as i64);
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out: Vec<(u32, u32)> = hull
        .into_iter()
        .map(|(i, j)| (i as u32, j as u32))
        .collect();
    out.reverse();
    Ok(out)
}

/// Weighted initial form of a polynomial: the terms on the first line of
/// slope -1/alpha touching the Newton polygon, together with the weighted
/// order min(i + alpha*j).
pub fn initial_form_poly(p: &Poly2, alpha: &Rat) -> Result<(Poly2, Rat)> {
    if p.is_zero() {
        return Err(Error::Input("initial form of the zero polynomial".into()));
    }
    let weight = |i: u32, j: u32| -> Rat {
        Rat::from_integer(BigInt::from(i)) + alpha * Rat::from_integer(BigInt::from(j))
    };
    let nu = p
        .terms
        .keys()
        .map(|&(i, j)| weight(i, j))
        .min()
        .unwrap();
    let mut out = Poly2::zero();
    for (&(i, j), c) in &p.terms {
        if weight(i, j) == nu {
            out.insert(i, j, c.clone());
        }
    }
    Ok((out, nu))
}

pub fn rat_from_u32(n: u32) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn rat_to_u32(r: &Rat) -> Option<u32> {
    if !rat_is_integer(r) {
        return None;
    }
    let s = r.numer().to_string();
    s.parse().ok()
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// y^2 - x^3
    fn cusp_poly() -> Poly2 {
        let mut p = Poly2::zero();
        p.insert(0, 2, s(1));
        p.insert(3, 0, s(-1));
        p
    }

    #[test]
    fn newton_polygon_examples() {
        // two-point support of y^2 - x^3
        assert_eq!(
            newton_polygon(&[(0, 2), (3, 0)]).unwrap(),
            vec![(3, 0), (0, 2)]
        );
        // all on the segment i + j = 3: interior points are not vertices
        assert_eq!(
            newton_polygon(&[(2, 1), (3, 0), (0, 3), (1, 2)]).unwrap(),
            vec![(3, 0), (0, 3)]
        );
        // (1,1) lies above the segment from (2,0) to (0,1)
        assert_eq!(
            newton_polygon(&[(0, 1), (2, 0), (1, 1)]).unwrap(),
            vec![(2, 0), (0, 1)]
        );
        assert!(newton_polygon(&[]).is_err());
    }

    #[test]
    fn initial_forms() {
        let p = cusp_poly();
        // alpha = 1: whole lowest part is y^2 at weight 2
        let (f, nu) = initial_form_poly(&p, &crate::scalar::rat(1, 1)).unwrap();
        assert_eq!(f, Poly2::monomial(0, 2, s(1)));
        assert_eq!(nu, crate::scalar::rat(2, 1));
        // alpha = 3/2: both terms on the line i + (3/2) j = 3
        let (f, nu) = initial_form_poly(&p, &crate::scalar::rat(3, 2)).unwrap();
        assert_eq!(f, p);
        assert_eq!(nu, crate::scalar::rat(3, 1));
    }

    #[test]
    fn shift_and_pullback() {
        // f = y^2 - x^3, y -> y + x^2 gives y^2 + 2x^2 y + x^4 - x^3
        let p = cusp_poly();
        let eps = UPoly::monomial(Scalar::one(), 2);
        let q = p.shift_y(&eps);
        let mut expect = Poly2::zero();
        expect.insert(0, 2, s(1));
        expect.insert(2, 1, s(2));
        expect.insert(4, 0, s(1));
        expect.insert(3, 0, s(-1));
        assert_eq!(q, expect);
        // monomial pullback by p=1: y^2 x^2 - x^3, x-valuation 2
        let t = p.monomial_pullback(1);
        assert_eq!(t.x_valuation(), 2);
        let strict = t.div_x_pow(2);
        let mut expect2 = Poly2::zero();
        expect2.insert(0, 2, s(1));
        expect2.insert(1, 0, s(-1));
        assert_eq!(strict, expect2);
    }

    #[test]
    fn eval_series_cusp() {
        // f(t^2, t^3) = 0 exactly for the cusp
        let p = cusp_poly();
        let xs = Series::from_poly(vec![s(0), s(0), s(1)]);
        let ys = Series::from_poly(vec![s(0), s(0), s(0), s(1)]);
        let v = p.eval_series(&xs, &ys);
        assert!(v.is_known_zero());
        // f = y along the cusp has order 3
        let v2 = Poly2::y().eval_series(&xs, &ys);
        assert_eq!(v2.order(), crate::series::OrderOutcome::Finite(3));
    }

    #[test]
    fn gcd_and_division() {
        let p = cusp_poly();
        let q = Poly2::y().add(&Poly2::x());
        let prod = p.mul(&q);
        let g = prod.gcd(&p);
        // gcd is p up to a unit
        let ratio = prod.div_exact(&g);
        assert_eq!(ratio.deg_y(), q.deg_y());
        let g2 = p.gcd(&q);
        assert_eq!(g2.degree(), Some(0));
    }

    #[test]
    fn resultant_y_matches_product_of_differences() {
        // res_y(y - x^2, y - x) = x^2 - x
        let a = Poly2::y().sub(&Poly2::monomial(2, 0, s(1)));
        let b = Poly2::y().sub(&Poly2::x());
        let r = a.resultant_y(&b).unwrap();
        let expect = UPoly::from_coeffs(vec![s(0), s(-1), s(1)]);
        assert_eq!(r, expect);
    }

    #[test]
    fn resultant_y_agrees_with_specialization() {
        // the subresultant route specializes correctly wherever neither
        // leading y-coefficient vanishes
        let mut a = Poly2::zero();
        a.insert(0, 3, s(2));
        a.insert(2, 2, s(-1));
        a.insert(5, 0, s(3));
        a.insert(1, 1, s(7));
        let mut b = Poly2::zero();
        b.insert(0, 2, s(1));
        b.insert(3, 1, s(-4));
        b.insert(4, 0, s(1));
        b.insert(1, 0, s(-2));
        let r = a.resultant_y(&b).unwrap();
        for x0 in [1i64, 2, 3, -1, 5] {
            let xv = s(x0);
            let pa = UPoly::from_coeffs(a.by_y_degree().iter().map(|u| u.eval(&xv)).collect());
            let pb = UPoly::from_coeffs(b.by_y_degree().iter().map(|u| u.eval(&xv)).collect());
            assert_eq!(r.eval(&xv), pa.resultant(&pb), "at x = {}", x0);
        }
        // swapped arguments flip by (-1)^(deg_y a * deg_y b)
        let r2 = b.resultant_y(&a).unwrap();
        assert_eq!(r2, r);
    }
}
