//! Branches: irreducible plane curve germs given by Puiseux parametrizations
//! x = t^n, y = sum a_j t^j with finite support and a declared truncation
//! order. Discrete invariants (characteristic exponents, Puiseux pairs,
//! semigroup), coincidences, and intersection multiplicities.

use num::integer::Integer;
use num::rational::BigRational;
use num::{BigInt, One};

use crate::poly2::Poly2;
use crate::scalar::{Rat, Scalar};
use crate::series::{OrderOutcome, Series, EXACT};
use crate::{Error, Result};

/// Puiseux-parametrized branch. `terms` is sorted by exponent, coefficients
/// nonzero, every exponent below `trunc`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Branch {
    pub mult: u32,
    pub terms: Vec<(u32, Scalar)>,
    pub trunc: u32,
    pub label: String,
}

/// Characteristic exponents (in t-units, beta_0 = n), Puiseux pairs,
/// minimal semigroup generators and the divided gcd chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacteristicData {
    pub beta: Vec<u32>,
    pub pairs: Vec<(u32, u32)>,
    pub semigroup: Vec<u64>,
    pub gcds: Vec<u32>,
}

impl CharacteristicData {
    pub fn genus(&self) -> usize {
        self.beta.len() - 1
    }

    /// Milnor number of the branch: sum (n_q - 1) sg_q - beta_0 + 1.
    pub fn milnor(&self) -> u64 {
        let mut mu: i128 = 1 - self.beta[0] as i128;
        for (q, &(_, nq)) in self.pairs.iter().enumerate() {
            mu += (nq as i128 - 1) * self.semigroup[q + 1] as i128;
        }
        mu.max(0) as u64
    }
}

impl Branch {
    pub fn new(mult: u32, terms: Vec<(u32, Scalar)>, trunc: u32, label: &str) -> Result<Branch> {
        if mult == 0 {
            return Err(Error::Input(format!(
                "branch {label}: multiplicity must be >= 1"
            )));
        }
        let mut terms: Vec<(u32, Scalar)> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|&(j, _)| j);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Input(format!(
                    "branch {label}: duplicate exponent {}",
                    w[0].0
                )));
            }
        }
        if let Some(&(j, _)) = terms.last() {
            if trunc <= j {
                return Err(Error::Input(format!(
                    "branch {label}: truncation {trunc} must exceed largest exponent {j}"
                )));
            }
        }
        if terms.first().map_or(false, |&(j, _)| j == 0) {
            return Err(Error::Input(format!(
                "branch {label}: must pass through the origin"
            )));
        }
        Ok(Branch {
            mult,
            terms,
            trunc,
            label: label.to_string(),
        })
    }

    /// Smooth branch y = sum over (exponent, coefficient) of c x^e.
    pub fn smooth(terms: Vec<(u32, Scalar)>, trunc: u32, label: &str) -> Result<Branch> {
        Branch::new(1, terms, trunc, label)
    }

    pub fn is_smooth(&self) -> bool {
        self.mult == 1
    }

    /// Primitivity: gcd of n and all exponents is 1.
    pub fn is_primitive(&self) -> bool {
        let mut g = self.mult;
        for &(j, _) in &self.terms {
            g = g.gcd(&j);
        }
        g == 1
    }

    /// The branch is tangent to x = 0 when ord_t y < ord_t x.
    pub fn tangent_to_vertical_axis(&self) -> bool {
        self.terms.first().map_or(false, |&(j, _)| j < self.mult)
    }

    /// Parametrization as series (x exact, y known mod t^trunc).
    pub fn param(&self) -> (Series, Series) {
        let xs = Series::monomial(Scalar::one(), self.mult as usize, EXACT);
        let mut coeffs = vec![Scalar::zero(); self.trunc as usize];
        for &(j, ref c) in &self.terms {
            coeffs[j as usize] = c.clone();
        }
        let ys = Series {
            coeffs,
            trunc: self.trunc as usize,
        };
        (xs, ys)
    }

    pub fn characteristic_data(&self) -> Result<CharacteristicData> {
        if !self.is_primitive() {
            return Err(Error::Input(format!(
                "branch {}: non-primitive parametrization",
                self.label
            )));
        }
        let mut beta = vec![self.mult];
        let mut e = self.mult;
        for &(j, _) in &self.terms {
            if e == 1 {
                break;
            }
            let g = e.gcd(&j);
            if g < e {
                beta.push(j);
                e = g;
            }
        }
        let mut gcds = vec![self.mult];
        for &b in beta.iter().skip(1) {
            let last = *gcds.last().unwrap();
            gcds.push(last.gcd(&b));
        }
        let mut pairs = Vec::new();
        for (k, &b) in beta.iter().enumerate().skip(1) {
            let ek = gcds[k];
            let nk = gcds[k - 1] / ek;
            let mk = b / ek;
            pairs.push((mk, nk));
        }
        // semigroup recursion sg_{q+1} = n_q sg_q + beta_{q+1} - beta_q
        let mut semigroup: Vec<u64> = vec![self.mult as u64];
        if beta.len() > 1 {
            semigroup.push(beta[1] as u64);
            for q in 1..beta.len() - 1 {
                let nq = pairs[q - 1].1 as u64;
                let next = nq * semigroup[q] + beta[q + 1] as u64 - beta[q] as u64;
                semigroup.push(next);
            }
        }
        Ok(CharacteristicData {
            beta,
            pairs,
            semigroup,
            gcds,
        })
    }

    /// Puiseux series of the k-th conjugate in u = x^(1/N) units, for N a
    /// multiple of the multiplicity: pairs (u-exponent, coefficient).
    pub fn conjugate_u_terms(&self, k: u32, big_n: u32) -> Result<Vec<(u32, Scalar)>> {
        if big_n % self.mult != 0 {
            return Err(Error::Internal("conjugate index mismatch".into()));
        }
        let step = big_n / self.mult;
        let zeta = Scalar::root_of_unity(self.mult)?;
        let mut out = Vec::with_capacity(self.terms.len());
        for &(j, ref c) in &self.terms {
            let tw = zeta.pow((j as u64 * k as u64) % self.mult as u64);
            out.push((j * step, c.mul_ref(&tw)));
        }
        Ok(out)
    }

    /// The truncation bound of conjugate series in u-units.
    pub fn u_window(&self, big_n: u32) -> u32 {
        (big_n / self.mult) * self.trunc
    }

    /// Coincidence with another branch: the maximal x-order of the
    /// difference of Puiseux series over all conjugate pairs. Errors when
    /// the truncations cannot certify the supremum or the branches coincide.
    pub fn coincidence(&self, other: &Branch) -> Result<Rat> {
        let n = (self.mult as u64).lcm(&(other.mult as u64)) as u32;
        let window = self.u_window(n).min(other.u_window(n));
        let mut best: Option<u32> = None;
        for k1 in 0..self.mult {
            let s1 = self.conjugate_u_terms(k1, n)?;
            for k2 in 0..other.mult {
                let s2 = other.conjugate_u_terms(k2, n)?;
                match first_difference(&s1, &s2, window) {
                    Some(e) => best = Some(best.map_or(e, |b| b.max(e))),
                    None => {
                        return Err(Error::Truncation(format!(
                            "coincidence of {} and {} not separated below u-order {}",
                            self.label, other.label, window
                        )));
                    }
                }
            }
        }
        let e = best.ok_or_else(|| Error::Internal("no conjugate pairs".into()))?;
        Ok(BigRational::new(BigInt::from(e), BigInt::from(n)))
    }

    /// Exact implicit equation: the product over conjugates of
    /// (y - y_k(x)), expanded and descended to integer x-exponents.
    pub fn implicit_equation(&self) -> Result<Poly2> {
        // u = x^(1/n) plays the role of x inside the product.
        let mut acc = Poly2::one();
        for k in 0..self.mult {
            let terms = self.conjugate_u_terms(k, self.mult)?;
            let mut factor = Poly2::y();
            for (e, c) in terms {
                factor = factor.sub(&Poly2::monomial(e, 0, c));
            }
            acc = acc.mul(&factor);
        }
        let mut out = Poly2::zero();
        for (&(i, j), c) in &acc.terms {
            if i % self.mult != 0 {
                return Err(Error::Internal(format!(
                    "implicit equation of {} has fractional support",
                    self.label
                )));
            }
            out.insert(i / self.mult, j, c.clone());
        }
        Ok(out)
    }

    /// Intersection multiplicity with a distinct branch, computed by
    /// evaluating the implicit equation of `other` along this
    /// parametrization, and cross-checked against the coincidence route.
    pub fn intersection_multiplicity(&self, other: &Branch) -> Result<u64> {
        let f = other.implicit_equation()?;
        let (xs, ys) = self.param();
        let val = f.eval_series(&xs, &ys);
        let direct = match val.order() {
            OrderOutcome::Finite(o) => o as u64,
            OrderOutcome::AtLeast(b) => {
                return Err(Error::Truncation(format!(
                    "intersection of {} and {} exceeds certified order {}",
                    self.label, other.label, b
                )));
            }
        };
        let merle = self.intersection_via_coincidence(other)?;
        if direct != merle {
            return Err(Error::Internal(format!(
                "intersection multiplicity mismatch for {} and {}: direct {} vs coincidence route {}",
                self.label, other.label, direct, merle
            )));
        }
        Ok(direct)
    }

    /// Intersection multiplicity from the coincidence and the discrete data:
    /// with contact alpha/beta_0 and beta_q <= alpha < beta_{q+1},
    /// (self,other)_0 / m_0(other) = sg_q/(n_1..n_{q-1}) + (alpha - beta_q)/(n_1..n_q).
    pub fn intersection_via_coincidence(&self, other: &Branch) -> Result<u64> {
        let c = self.coincidence(other)?;
        let data = self.characteristic_data()?;
        let alpha: Rat = &c * BigRational::from_integer(BigInt::from(self.mult));
        let mut q = 0usize;
        for (k, &b) in data.beta.iter().enumerate() {
            if BigRational::from_integer(BigInt::from(b)) <= alpha {
                q = k;
            }
        }
        let prod = |upto: usize| -> u64 {
            data.pairs
                .iter()
                .take(upto)
                .map(|&(_, nk)| nk as u64)
                .product()
        };
        let term1 = if q == 0 {
            BigRational::from_integer(BigInt::from(data.beta[0]))
        } else {
            BigRational::new(
                BigInt::from(data.semigroup[q]),
                BigInt::from(prod(q - 1)),
            )
        };
        let beta_q = BigRational::from_integer(BigInt::from(data.beta[q]));
        let term2 = (&alpha - &beta_q) / BigRational::from_integer(BigInt::from(prod(q)));
        let ratio = term1 + term2;
        let total = ratio * BigRational::from_integer(BigInt::from(other.mult));
        if !total.denom().is_one() {
            return Err(Error::Internal(format!(
                "coincidence route produced non-integer intersection {} for {} and {}",
                total, self.label, other.label
            )));
        }
        total
            .numer()
            .to_string()
            .parse()
            .map_err(|_| Error::Internal("intersection multiplicity out of range".into()))
    }
}

fn first_difference(a: &[(u32, Scalar)], b: &[(u32, Scalar)], window: u32) -> Option<u32> {
    let mut ia = 0usize;
    let mut ib = 0usize;
    loop {
        let ea = a.get(ia).map(|&(e, _)| e).unwrap_or(u32::MAX);
        let eb = b.get(ib).map(|&(e, _)| e).unwrap_or(u32::MAX);
        let e = ea.min(eb);
        if e >= window {
            return None;
        }
        if ea < eb {
            return Some(ea);
        }
        if eb < ea {
            return Some(eb);
        }
        if a[ia].1 != b[ib].1 {
            return Some(ea);
        }
        ia += 1;
        ib += 1;
    }
}

/// Certified order of a polynomial along a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Finite(u64),
    /// Every computed coefficient vanished; order at least the carried bound.
    InfiniteWithinTruncation(u64),
}

/// Substitute the parametrization into a polynomial and certify the t-order
/// up to `bound`. Errors when the truncation window is too short to decide.
pub fn evaluate_along(p: &Poly2, gamma: &Branch, bound: u64) -> Result<EvalOutcome> {
    let (xs, ys) = gamma.param();
    let v = p.eval_series(&xs, &ys);
    match v.order() {
        OrderOutcome::Finite(o) => Ok(EvalOutcome::Finite(o as u64)),
        OrderOutcome::AtLeast(b) => {
            if (b as u64) >= bound {
                Ok(EvalOutcome::InfiniteWithinTruncation(b as u64))
            } else {
                Err(Error::Truncation(format!(
                    "order along {} certified only to {}, bound {} requested",
                    gamma.label, b, bound
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn cusp() -> Branch {
        Branch::new(2, vec![(3, s(1))], 24, "cusp").unwrap()
    }

    fn parabola() -> Branch {
        Branch::smooth(vec![(2, s(1))], 24, "parabola").unwrap()
    }

    #[test]
    fn characteristic_examples() {
        // cusp: beta = (2,3), pairs {(3,2)}, semigroup <2,3>
        let d = cusp().characteristic_data().unwrap();
        assert_eq!(d.beta, vec![2, 3]);
        assert_eq!(d.pairs, vec![(3, 2)]);
        assert_eq!(d.semigroup, vec![2, 3]);
        // (t^4, t^6 + t^7): beta = (4,6,7), e = (4,2,1), semigroup (4,6,13)
        let b = Branch::new(4, vec![(6, s(1)), (7, s(1))], 40, "two-pair").unwrap();
        let d = b.characteristic_data().unwrap();
        assert_eq!(d.beta, vec![4, 6, 7]);
        assert_eq!(d.gcds, vec![4, 2, 1]);
        assert_eq!(d.semigroup, vec![4, 6, 13]);
        assert_eq!(d.pairs, vec![(3, 2), (7, 2)]);
        // smooth (t, t^2): beta = (1), no pairs
        let p = parabola().characteristic_data().unwrap();
        assert_eq!(p.beta, vec![1]);
        assert!(p.pairs.is_empty());
        // non-primitive rejected
        let np = Branch::new(4, vec![(6, s(1))], 24, "np").unwrap();
        assert!(np.characteristic_data().is_err());
    }

    #[test]
    fn milnor_of_branch() {
        assert_eq!(cusp().characteristic_data().unwrap().milnor(), 2);
        let b = Branch::new(4, vec![(6, s(1)), (7, s(1))], 40, "two-pair").unwrap();
        assert_eq!(b.characteristic_data().unwrap().milnor(), 16);
        assert_eq!(parabola().characteristic_data().unwrap().milnor(), 0);
    }

    #[test]
    fn coincidences() {
        // cusp vs parabola: 3/2
        assert_eq!(cusp().coincidence(&parabola()).unwrap(), rat(3, 2));
        // y = x^2 vs y = x^2 + x^3: 3
        let p2 = Branch::smooth(vec![(2, s(1)), (3, s(1))], 24, "p2").unwrap();
        assert_eq!(parabola().coincidence(&p2).unwrap(), rat(3, 1));
        // y = x vs y = -x: 1
        let l1 = Branch::smooth(vec![(1, s(1))], 24, "l1").unwrap();
        let l2 = Branch::smooth(vec![(1, s(-1))], 24, "l2").unwrap();
        assert_eq!(l1.coincidence(&l2).unwrap(), rat(1, 1));
        // symmetric
        assert_eq!(
            cusp().coincidence(&parabola()).unwrap(),
            parabola().coincidence(&cusp()).unwrap()
        );
        // identical branches cannot be separated
        assert!(l1.coincidence(&l1.clone()).is_err());
    }

    #[test]
    fn implicit_equations() {
        // cusp -> y^2 - x^3
        let f = cusp().implicit_equation().unwrap();
        let mut expect = Poly2::zero();
        expect.insert(0, 2, s(1));
        expect.insert(3, 0, s(-1));
        assert_eq!(f, expect);
        // two-pair branch -> y^4 - 2x^3y^2 - 4x^5y + x^6 - x^7
        let b = Branch::new(4, vec![(6, s(1)), (7, s(1))], 40, "two-pair").unwrap();
        let f = b.implicit_equation().unwrap();
        let mut expect = Poly2::zero();
        expect.insert(0, 4, s(1));
        expect.insert(3, 2, s(-2));
        expect.insert(5, 1, s(-4));
        expect.insert(6, 0, s(1));
        expect.insert(7, 0, s(-1));
        assert_eq!(f, expect);
    }

    #[test]
    fn intersections() {
        // cusp vs parabola = 3, both routes, both orders of arguments
        assert_eq!(cusp().intersection_multiplicity(&parabola()).unwrap(), 3);
        assert_eq!(parabola().intersection_multiplicity(&cusp()).unwrap(), 3);
        // transversal lines: 1
        let l1 = Branch::smooth(vec![(1, s(1))], 24, "l1").unwrap();
        let l2 = Branch::smooth(vec![(1, s(-1))], 24, "l2").unwrap();
        assert_eq!(l1.intersection_multiplicity(&l2).unwrap(), 1);
    }

    #[test]
    fn evaluate_along_examples() {
        // f = y^2 - x^3 along the cusp: infinite within truncation
        let f = cusp().implicit_equation().unwrap();
        match evaluate_along(&f, &cusp(), 20).unwrap() {
            EvalOutcome::InfiniteWithinTruncation(_) => {}
            other => panic!("expected infinite, got {:?}", other),
        }
        // f = y along the cusp: order 3
        assert_eq!(
            evaluate_along(&Poly2::y(), &cusp(), 20).unwrap(),
            EvalOutcome::Finite(3)
        );
        // asking beyond the certified window errors
        let tight = Branch::new(2, vec![(3, s(1))], 8, "tight").unwrap();
        assert!(evaluate_along(&f, &tight, 100).is_err());
    }
}
