//! Dense univariate polynomials and reduced rational functions over [`Scalar`].

use std::fmt;

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Univariate polynomial; `coeffs[k]` multiplies `z^k`, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    pub coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> UPoly {
        let mut p = UPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> UPoly {
        UPoly::constant(Scalar::one())
    }

    /// The monomial c * z^k.
    pub fn monomial(c: Scalar, k: usize) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    /// z - c
    pub fn linear_root(c: &Scalar) -> UPoly {
        UPoly {
            coeffs: vec![c.neg_ref(), Scalar::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> UPoly {
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero);
            coeffs.push(a.add_ref(&b));
        }
        UPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        UPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, den: &UPoly) -> (UPoly, UPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.degree().unwrap();
        let lead_inv = den.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = UPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.leading().mul_ref(&lead_inv);
            let k = dr - dd;
            let term = UPoly::monomial(c, k);
            rem = rem.sub(&term.mul(den));
            quot = quot.add(&term);
        }
        (quot, rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, den: &UPoly) -> UPoly {
        let (q, r) = self.divmod(den);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let li = a.leading().inv().unwrap();
        a.scale(&li)
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_ref(&Scalar::from_int(k as i64)))
            .collect();
        UPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Taylor shift: p(z + c).
    pub fn shift(&self, c: &Scalar) -> UPoly {
        let mut acc = UPoly::zero();
        let shift = UPoly {
            coeffs: vec![c.clone(), Scalar::one()],
        };
        for coef in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&UPoly::constant(coef.clone()));
        }
        acc
    }

    /// Multiplicity of `c` as a root (0 if not a root).
    pub fn root_multiplicity(&self, c: &Scalar) -> usize {
        assert!(!self.is_zero());
        let shifted = self.shift(c);
        shifted
            .coeffs
            .iter()
            .position(|x| !x.is_zero())
            .unwrap_or(0)
    }

    /// Squarefree decomposition by Yun's algorithm: returns (factor, k) pairs
    /// with the factor collecting the roots of exact multiplicity k.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, usize)> {
        assert!(!self.is_zero());
        if self.degree() == Some(0) {
            return vec![];
        }
        let d = self.derivative();
        let g = self.gcd(&d);
        if g.degree() == Some(0) {
            return vec![(self.clone(), 1)];
        }
        let mut out = Vec::new();
        let mut w = self.div_exact(&g);
        let mut y = d.div_exact(&g);
        let mut k = 1usize;
        loop {
            let z = y.sub(&w.derivative());
            if z.is_zero() {
                if w.degree().map_or(false, |d| d > 0) {
                    out.push((w, k));
                }
                break;
            }
            let gk = w.gcd(&z);
            if gk.degree().map_or(false, |d| d > 0) {
                out.push((gk.clone(), k));
            }
            w = w.div_exact(&gk);
            y = z.div_exact(&gk);
            k += 1;
        }
        out
    }

    /// Resultant of two polynomials via the subresultant-free Euclidean
    /// recursion res(a,b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b, r).
    pub fn resultant(&self, other: &UPoly) -> Scalar {
        fn go(a: &UPoly, b: &UPoly) -> Scalar {
            if b.is_zero() {
                return if a.degree() == Some(0) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
            }
            let da = a.degree().unwrap_or(0);
            let db = b.degree().unwrap();
            if db == 0 {
                return b.leading().pow(da as u64);
            }
            if da == 0 {
                return a.leading().pow(db as u64);
            }
            if da < db {
                let sign = if (da * db) % 2 == 1 {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                return sign.mul_ref(&go(b, a));
            }
            let (_, r) = a.divmod(b);
            if r.is_zero() {
                return Scalar::zero();
            }
            let sign = if (da * db) % 2 == 1 {
                Scalar::from_int(-1)
            } else {
                Scalar::one()
            };
            let dr = r.degree().unwrap();
            let exp = (da - dr) as u64;
            sign.mul_ref(&b.leading().pow(exp)).mul_ref(&go(b, &r))
        }
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        go(self, other)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*z", c)?,
                _ => write!(f, "({})*z^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A reduced rational function num/den with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: UPoly,
    pub den: UPoly,
}

impl RationalFunction {
    pub fn new(num: UPoly, den: UPoly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::Input("rational function with zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().map_or(false, |d| d > 0) {
            (num.div_exact(&g), den.div_exact(&g))
        } else {
            (num, den)
        };
        if !den.is_zero() {
            let li = den.leading().inv().unwrap();
            den = den.scale(&li);
            num = num.scale(&li);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Residue at z = c: the coefficient of (z-c)^{-1} of the Laurent
    /// expansion. Zero at a regular point.
    pub fn residue_at(&self, c: &Scalar) -> Result<Scalar> {
        residue_at(&self.num, &self.den, c)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// All rational roots with multiplicities, plus the root-free cofactor.
/// Requires rational coefficients.
pub fn rational_roots(p: &UPoly) -> Result<(Vec<(Scalar, usize)>, UPoly)> {
    use num::BigInt;
    use num::rational::BigRational;
    use num::{One, Signed, Zero};
    if p.is_zero() {
        return Err(Error::Input("roots of the zero polynomial".into()));
    }
    let mut rats: Vec<BigRational> = Vec::with_capacity(p.coeffs.len());
    for c in &p.coeffs {
        match c.as_rat() {
            Some(r) => rats.push(r.clone()),
            None => {
                return Err(Error::Input(
                    "rational root extraction needs rational coefficients".into(),
                ))
            }
        }
    }
    // clear denominators
    let mut denom = BigInt::one();
    for r in &rats {
        denom = num::integer::lcm(denom.clone(), r.denom().clone());
    }
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    // strip factors of z
    let val = ints
        .iter()
        .position(|c| !c.is_zero())
        .unwrap_or(0);
    let mut out: Vec<(Scalar, usize)> = Vec::new();
    if val > 0 {
        out.push((Scalar::zero(), val));
    }
    let mut rest = UPoly::from_coeffs(
        ints[val..]
            .iter()
            .map(|c| Scalar::Rat(BigRational::from_integer(c.clone())))
            .collect(),
    );
    // candidates p/q with p | constant term, q | leading term
    let small_divisors = |n: &BigInt| -> Result<Vec<i64>> {
        let a = n.abs();
        let v: i64 = a
            .to_string()
            .parse()
            .map_err(|_| Error::Input("coefficients too large for root search".into()))?;
        let mut out = Vec::new();
        let mut d = 1i64;
        while d * d <= v {
            if v % d == 0 {
                out.push(d);
                if d != v / d {
                    out.push(v / d);
                }
            }
            d += 1;
        }
        Ok(out)
    };
    loop {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let c0 = rest.coeffs[0].as_rat().unwrap().numer().clone();
        let cl = rest.leading().as_rat().unwrap().numer().clone();
        if c0.is_zero() {
            // re-strip
            let k = rest.coeffs.iter().position(|c| !c.is_zero()).unwrap();
            match out.iter_mut().find(|(r, _)| r.is_zero()) {
                Some(e) => e.1 += k,
                None => out.push((Scalar::zero(), k)),
            }
            rest = UPoly::from_coeffs(rest.coeffs[k..].to_vec());
            continue;
        }
        let ps = small_divisors(&c0)?;
        let qs = small_divisors(&cl)?;
        let mut found = false;
        'search: for &pp in &ps {
            for &qq in &qs {
                for sign in [1i64, -1] {
                    let cand = Scalar::Rat(BigRational::new(
                        BigInt::from(sign * pp),
                        BigInt::from(qq),
                    ));
                    if rest.eval(&cand).is_zero() {
                        let mult = rest.root_multiplicity(&cand);
                        out.push((cand.clone(), mult));
                        let mut lin = UPoly::linear_root(&cand);
                        for _ in 1..mult {
                            lin = lin.mul(&UPoly::linear_root(&cand));
                        }
                        rest = rest.div_exact(&lin);
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        if !found {
            break;
        }
    }
    Ok((out, rest))
}

/// Residue of num/den at z = c, computed exactly: factor (z-c)^k out of the
/// denominator, then read the (k-1)-st Taylor coefficient of num/den1 at c.
pub fn residue_at(num: &UPoly, den: &UPoly, c: &Scalar) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::Input("residue of function with zero denominator".into()));
    }
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    let k = den.root_multiplicity(c);
    if k == 0 {
        return Ok(Scalar::zero());
    }
    // Shift to c = 0: den(z+c) = z^k * d1(z), need coeff of z^{k-1} in n(z)/d1(z).
    let n = num.shift(c);
    let d = den.shift(c);
    let d1 = UPoly::from_coeffs(d.coeffs[k..].to_vec());
    // Power series inversion of d1 up to order k, multiplied by n.
    let d0_inv = d1.coeffs[0].inv()?;
    let mut inv = vec![d0_inv.clone()];
    for m in 1..k {
        // coefficient m of the inverse: -(sum_{j=1..m} d1[j]*inv[m-j]) / d1[0]
        let mut s = Scalar::zero();
        for j in 1..=m {
            let dj = d1.coeffs.get(j).cloned().unwrap_or_else(Scalar::zero);
            if !dj.is_zero() {
                s = s.add_ref(&dj.mul_ref(&inv[m - j]));
            }
        }
        inv.push(s.neg_ref().mul_ref(&d0_inv));
    }
    let mut res = Scalar::zero();
    for j in 0..k {
        let nj = n.coeffs.get(j).cloned().unwrap_or_else(Scalar::zero);
        if !nj.is_zero() {
            res = res.add_ref(&nj.mul_ref(&inv[k - 1 - j]));
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn divmod_gcd() {
        // (z^2 - 1) / (z - 1) = z + 1
        let p = UPoly::from_coeffs(vec![s(-1), s(0), s(1)]);
        let d = UPoly::linear_root(&s(1));
        let (q, r) = p.divmod(&d);
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_coeffs(vec![s(1), s(1)]));
        let g = p.gcd(&d);
        assert_eq!(g, d);
    }

    #[test]
    fn residues() {
        // Res_{y=-2} (y-1)/(11(y+2)(y+1)) = 3/11
        let num = UPoly::from_coeffs(vec![s(-1), s(1)]);
        let den = UPoly::linear_root(&s(-2))
            .mul(&UPoly::linear_root(&s(-1)))
            .scale(&s(11));
        assert_eq!(residue_at(&num, &den, &s(-2)).unwrap(), Scalar::ratio(3, 11));
        // Res_{y=0} 1/y = 1
        let one = UPoly::one();
        let y = UPoly::monomial(Scalar::one(), 1);
        assert_eq!(residue_at(&one, &y, &s(0)).unwrap(), Scalar::one());
        // Res_{y=1} (y-1)/((y+2)(y+1)) = 0 (regular point)
        let den2 = UPoly::linear_root(&s(-2)).mul(&UPoly::linear_root(&s(-1)));
        assert_eq!(residue_at(&num, &den2, &s(1)).unwrap(), Scalar::zero());
        // higher-order pole: Res_{y=0} (y+1)/y^2 = 1
        let num3 = UPoly::from_coeffs(vec![s(1), s(1)]);
        let den3 = UPoly::monomial(Scalar::one(), 2);
        assert_eq!(residue_at(&num3, &den3, &s(0)).unwrap(), Scalar::one());
    }

    #[test]
    fn residue_is_linear_and_kills_polynomials() {
        // residue of a polynomial vanishes everywhere
        let p = UPoly::from_coeffs(vec![s(3), s(-2), s(5)]);
        assert_eq!(residue_at(&p, &UPoly::one(), &s(2)).unwrap(), Scalar::zero());
        // linearity at a shared pole
        let den = UPoly::linear_root(&s(4)).mul(&UPoly::linear_root(&s(-3)));
        let n1 = UPoly::from_coeffs(vec![s(1), s(2)]);
        let n2 = UPoly::from_coeffs(vec![s(-5), s(1)]);
        let r1 = residue_at(&n1, &den, &s(4)).unwrap();
        let r2 = residue_at(&n2, &den, &s(4)).unwrap();
        let rsum = residue_at(&n1.add(&n2), &den, &s(4)).unwrap();
        assert_eq!(r1.add_ref(&r2), rsum);
    }

    #[test]
    fn residue_sum_of_proper_function_vanishes() {
        // deg num <= deg den - 2 with simple poles at 0,1,2 -> residues sum to 0
        let num = UPoly::from_coeffs(vec![s(7), s(-4)]);
        let den = UPoly::monomial(Scalar::one(), 1)
            .mul(&UPoly::linear_root(&s(1)))
            .mul(&UPoly::linear_root(&s(2)));
        let mut total = Scalar::zero();
        for c in [s(0), s(1), s(2)] {
            total = total.add_ref(&residue_at(&num, &den, &c).unwrap());
        }
        assert!(total.is_zero());
    }

    #[test]
    fn squarefree() {
        // (z-1)^2 (z+3) -> [(z+3,1), (z-1,2)]
        let p = UPoly::linear_root(&s(1))
            .mul(&UPoly::linear_root(&s(1)))
            .mul(&UPoly::linear_root(&s(-3)));
        let dec = p.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0].1, 1);
        assert_eq!(dec[0].0, UPoly::linear_root(&s(-3)));
        assert_eq!(dec[1].1, 2);
        assert_eq!(dec[1].0, UPoly::linear_root(&s(1)));
    }

    #[test]
    fn rational_reduction() {
        // (z^2-1)/(z-1) reduces to (z+1)/1
        let num = UPoly::from_coeffs(vec![s(-1), s(0), s(1)]);
        let den = UPoly::linear_root(&s(1));
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r.num, UPoly::from_coeffs(vec![s(1), s(1)]));
        assert_eq!(r.den, UPoly::one());
    }

    #[test]
    fn resultants() {
        // res(z^2+1, z^2-1) = 4
        let a = UPoly::from_coeffs(vec![s(1), s(0), s(1)]);
        let b = UPoly::from_coeffs(vec![s(-1), s(0), s(1)]);
        assert_eq!(a.resultant(&b), s(4));
        // res(z-2, z-5) = (2-5)... = -3 up to convention: res = prod (a_i - b_j)
        let a = UPoly::linear_root(&s(2));
        let b = UPoly::linear_root(&s(5));
        assert_eq!(a.resultant(&b), s(-3));
        // common root -> 0
        let c = UPoly::linear_root(&s(2)).mul(&UPoly::linear_root(&s(7)));
        assert!(a.resultant(&c).is_zero());
    }
}
