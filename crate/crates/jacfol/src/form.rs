//! Differential 1-forms `omega = A dx + B dy` with polynomial coefficients.

use num::BigInt;
use num::rational::BigRational;

use crate::poly2::Poly2;
use crate::scalar::{Rat, Scalar};
use crate::upoly::UPoly;
use crate::{Error, Result};

/// A 1-form A dx + B dy. The weighted support convention indexes the term
/// `A_ij x^{i-1} y^j dx + B_ij x^i y^{j-1} dy` by the pair (i, j).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneForm {
    pub a: Poly2,
    pub b: Poly2,
}

impl OneForm {
    pub fn new(a: Poly2, b: Poly2) -> Result<OneForm> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Input("zero 1-form".into()));
        }
        Ok(OneForm { a, b })
    }

    /// d f = f_x dx + f_y dy.
    pub fn differential(f: &Poly2) -> Result<OneForm> {
        OneForm::new(f.dx(), f.dy())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplicity at the origin: min of the orders of A and B.
    pub fn multiplicity(&self) -> u32 {
        let oa = self.a.order().unwrap_or(u32::MAX);
        let ob = self.b.order().unwrap_or(u32::MAX);
        oa.min(ob)
    }

    /// omega ^ eta = (A Q - B P) dx ^ dy.
    pub fn wedge(&self, other: &OneForm) -> Poly2 {
        self.a.mul(&other.b).sub(&self.b.mul(&other.a))
    }

    /// Divide out gcd(A, B); afterwards the form is saturated.
    ///
    /// Fast exact path first: when a specialization x = x0 leaves coprime
    /// univariate polynomials, any common factor is a polynomial in x alone,
    /// caught by the content gcd. The full bivariate gcd only runs when
    /// every sampled specialization shares a root.
    pub fn saturate(&self) -> OneForm {
        if self.a.is_zero() || self.b.is_zero() {
            let g = self.a.gcd(&self.b);
            if g.degree().unwrap_or(0) == 0 {
                return self.clone();
            }
            return OneForm {
                a: if self.a.is_zero() { Poly2::zero() } else { self.a.div_exact(&g) },
                b: if self.b.is_zero() { Poly2::zero() } else { self.b.div_exact(&g) },
            };
        }
        let ay = self.a.by_y_degree();
        let by = self.b.by_y_degree();
        for x0 in [2i64, 3, 5, 7] {
            let xv = Scalar::from_int(x0);
            let ua = UPoly::from_coeffs(ay.iter().map(|u| u.eval(&xv)).collect());
            let ub = UPoly::from_coeffs(by.iter().map(|u| u.eval(&xv)).collect());
            if ua.is_zero() || ub.is_zero() {
                continue;
            }
            if ua.gcd(&ub).degree().unwrap_or(0) == 0 {
                let g = self.a.content_y().gcd(&self.b.content_y());
                if g.degree().unwrap_or(0) == 0 {
                    return self.clone();
                }
                let gp = Poly2::from_x_poly(&g);
                return OneForm {
                    a: self.a.div_exact(&gp),
                    b: self.b.div_exact(&gp),
                };
            }
        }
        let g = self.a.gcd(&self.b);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        OneForm {
            a: self.a.div_exact(&g),
            b: self.b.div_exact(&g),
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.a.gcd(&self.b).degree().unwrap_or(0) == 0
    }

    /// Weighted support: pairs (i, j) with a nonzero component, where the
    /// A-monomial x^a y^b contributes (a+1, b) and the B-monomial x^a y^b
    /// contributes (a, b+1).
    pub fn weighted_support(&self) -> Vec<(u32, u32)> {
        let mut pts: Vec<(u32, u32)> = Vec::new();
        for &(i, j) in self.a.terms.keys() {
            pts.push((i + 1, j));
        }
        for &(i, j) in self.b.terms.keys() {
            pts.push((i, j + 1));
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// Weighted initial form In_alpha(omega): the sub-form supported on the
    /// first line i + alpha*j = nu meeting the Newton polygon of the form,
    /// together with nu, the (1, alpha)-degree.
    pub fn initial_form(&self, alpha: &Rat) -> Result<(OneForm, Rat)> {
        if self.is_zero() {
            return Err(Error::Input("initial form of the zero 1-form".into()));
        }
        let weight = |i: u32, j: u32| -> Rat {
            BigRational::from_integer(BigInt::from(i)) + alpha * BigRational::from_integer(BigInt::from(j))
        };
        let nu = self
            .weighted_support()
            .iter()
            .map(|&(i, j)| weight(i, j))
            .min()
            .unwrap();
        let mut a = Poly2::zero();
        for (&(i, j), c) in &self.a.terms {
            if weight(i + 1, j) == nu {
                a.insert(i, j, c.clone());
            }
        }
        let mut b = Poly2::zero();
        for (&(i, j), c) in &self.b.terms {
            if weight(i, j + 1) == nu {
                b.insert(i, j, c.clone());
            }
        }
        Ok((OneForm { a, b }, nu))
    }

    /// Substitute y -> y + eps(x) (pullback under the shear).
    pub fn shift_y(&self, eps: &UPoly) -> OneForm {
        // dy is unchanged; dx picks up eps'(x) from the chain rule:
        // omega(x, y+eps) = A~ dx + B~ (dy + eps' dx)
        let a = self.a.shift_y(eps);
        let b = self.b.shift_y(eps);
        let epsd = Poly2::from_x_poly(&eps.derivative());
        OneForm {
            a: a.add(&b.mul(&epsd)),
            b,
        }
    }

    /// Total transform under (x, y) -> (x, x^p y):
    /// A dx + B dy becomes (A~ + p x^{p-1} y B~) dx + x^p B~ dy.
    /// Returned unsaturated.
    pub fn monomial_pullback(&self, p: u32) -> OneForm {
        let at = self.a.monomial_pullback(p);
        let bt = self.b.monomial_pullback(p);
        let extra = bt
            .mul(&Poly2::monomial(p - 1, 1, Scalar::from_int(p as i64)));
        OneForm {
            a: at.add(&extra),
            b: bt.mul(&Poly2::monomial(p, 0, Scalar::one())),
        }
    }

    /// Strict transform at a divisor of valuation p in adapted coordinates:
    /// apply the monomial pullback and divide out the largest common power
    /// of x. Returns (form, k) with k the power divided out.
    pub fn strict_transform(&self, p: u32) -> (OneForm, u32) {
        let total = self.monomial_pullback(p);
        let k = total.a.x_valuation().min(total.b.x_valuation());
        (
            OneForm {
                a: total.a.div_x_pow(k),
                b: total.b.div_x_pow(k),
            },
            k,
        )
    }

    /// Pullback under the ramification (u, v) -> (u^n, v):
    /// A(u^n, v) n u^{n-1} du + B(u^n, v) dv.
    pub fn ramified_pullback(&self, n: u32) -> OneForm {
        let a = self
            .a
            .ramify_x(n)
            .mul(&Poly2::monomial(n - 1, 0, Scalar::from_int(n as i64)));
        let b = self.b.ramify_x(n);
        OneForm { a, b }
    }

    pub fn to_string_xy(&self) -> String {
        format!("[{}] dx + [{}] dy", self.a.to_string_xy(), self.b.to_string_xy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly2::newton_polygon;
    use crate::scalar::rat;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// omega = (xy - 6x^2) dx + (y^2 - 6xy + 10x^2) dy
    fn omega_tangent_cone() -> OneForm {
        let mut a = Poly2::zero();
        a.insert(1, 1, s(1));
        a.insert(2, 0, s(-6));
        let mut b = Poly2::zero();
        b.insert(0, 2, s(1));
        b.insert(1, 1, s(-6));
        b.insert(2, 0, s(10));
        OneForm::new(a, b).unwrap()
    }

    /// eta = -6x^5 dx + 3y^2 dy
    fn eta_tangent_cone() -> OneForm {
        OneForm::new(
            Poly2::monomial(5, 0, s(-6)),
            Poly2::monomial(0, 2, s(3)),
        )
        .unwrap()
    }

    #[test]
    fn weighted_support_and_hull() {
        let w = omega_tangent_cone();
        let supp = w.weighted_support();
        assert_eq!(supp, vec![(0, 3), (1, 2), (2, 1), (3, 0)]);
        assert_eq!(newton_polygon(&supp).unwrap(), vec![(3, 0), (0, 3)]);
    }

    #[test]
    fn initial_forms_match_known_example() {
        // In_1(omega) = omega: all of its weighted support lies on i + j = 3
        let w = omega_tangent_cone();
        let (iw, nu) = w.initial_form(&rat(1, 1)).unwrap();
        assert_eq!(iw, w);
        assert_eq!(nu, rat(3, 1));
        // In_1(eta) = 3y^2 dy
        let e = eta_tangent_cone();
        let (ie, nu) = e.initial_form(&rat(1, 1)).unwrap();
        assert!(ie.a.is_zero());
        assert_eq!(ie.b, Poly2::monomial(0, 2, s(3)));
        assert_eq!(nu, rat(3, 1));
        // monomial form x^3 dy: nu = 3 + alpha
        let m = OneForm::new(Poly2::zero(), Poly2::monomial(3, 0, s(1))).unwrap();
        let (im, nu) = m.initial_form(&rat(7, 2)).unwrap();
        assert_eq!(im, m);
        assert_eq!(nu, rat(3, 1) + rat(7, 2));
    }

    #[test]
    fn initial_form_support_on_line() {
        // support of In_alpha lies exactly on i + alpha j = nu
        let w = omega_tangent_cone();
        for alpha in [rat(1, 1), rat(3, 2), rat(2, 1), rat(5, 2)] {
            let (iw, nu) = w.initial_form(&alpha).unwrap();
            for (i, j) in iw.weighted_support() {
                let lhs = crate::poly2::rat_from_u32(i) + &alpha * crate::poly2::rat_from_u32(j);
                assert_eq!(lhs, nu);
            }
        }
    }

    #[test]
    fn wedge_reproduces_jacobian_determinant() {
        // J = 3x(y^3 - 6xy^2 + 2x^4y^2 - 12x^5y + 20x^6)
        let w = omega_tangent_cone();
        let e = eta_tangent_cone();
        let j = w.wedge(&e);
        let mut expect = Poly2::zero();
        expect.insert(1, 3, s(3));
        expect.insert(2, 2, s(-18));
        expect.insert(5, 2, s(6));
        expect.insert(6, 1, s(-36));
        expect.insert(7, 0, s(60));
        assert_eq!(j, expect);
    }

    #[test]
    fn saturation() {
        // x * (y dx + x dy) saturates to y dx + x dy
        let raw = OneForm::new(
            Poly2::monomial(1, 1, s(1)),
            Poly2::monomial(2, 0, s(1)),
        )
        .unwrap();
        let sat = raw.saturate();
        assert_eq!(sat.a, Poly2::y());
        assert_eq!(sat.b, Poly2::x());
        assert!(sat.is_saturated());
    }

    #[test]
    fn strict_transform_at_first_divisor() {
        // omega = d(y^2 - x^3): pullback by (x, xy), divide x^2:
        // A = -3x^2 -> -3x^2 + 2xy*y ; B = 2y -> 2xy * x... checked by wedge order
        let f = {
            let mut p = Poly2::zero();
            p.insert(0, 2, s(1));
            p.insert(3, 0, s(-1));
            p
        };
        let w = OneForm::differential(&f).unwrap();
        let (st, k) = w.strict_transform(1);
        assert_eq!(k, 1);
        // E invariant: A^E(0, y) = 2y^2 - 3... is nonzero
        let a0 = st.a.at_x0();
        assert!(!a0.is_zero());
    }
}
