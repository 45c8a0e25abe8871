//! Exact scalar arithmetic over Q and cyclotomic extensions Q(zeta_n).
//!
//! A [`Scalar`] is either a rational number (reduced, positive denominator —
//! `BigRational` maintains both) or an element of Q(zeta_n) stored as a
//! coefficient vector of length phi(n) in the power basis
//! `1, zeta, ..., zeta^{phi(n)-1}`, always reduced modulo the n-th cyclotomic
//! polynomial Phi_n. Elements that reduce to a rational are demoted to the
//! rational representation, so equality is a plain structural test after
//! conductor join.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{integer::Integer, One, Signed, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Euler totient by trial factorization; conductors here are small.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Dense univariate polynomial over Q used only for cyclotomic bookkeeping.
/// Coefficient k is the coefficient of x^k; no trailing zeros.
fn poly_trim(v: &mut Vec<Rat>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    poly_trim(&mut out);
    out
}

/// Division with remainder by a monic divisor.
fn poly_divmod_monic(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty() && den.last().unwrap().is_one());
    let mut rem: Vec<Rat> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() > dd {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dd;
        quot[shift] = lead.clone();
        for k in 0..=dd {
            let t = &den[k] * &lead;
            rem[shift + k] -= t;
        }
        poly_trim(&mut rem);
        if rem.len() > dd && rem.len() - 1 - dd >= shift {
            // degree did not drop; cannot happen with monic divisor
            unreachable!("monic division failed to reduce degree");
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// n-th cyclotomic polynomial as a dense coefficient vector, computed by
/// dividing x^n - 1 by Phi_d for every proper divisor d, with memoization.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rat> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Vec<Rat>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let result = if n == 1 {
        vec![-Rat::one(), Rat::one()]
    } else {
        let mut acc = vec![Rat::zero(); (n + 1) as usize];
        acc[0] = -Rat::one();
        acc[n as usize] = Rat::one();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let phi_d = cyclotomic_polynomial(d);
            let (q, r) = poly_divmod_monic(&acc, &phi_d);
            assert!(r.is_empty(), "cyclotomic division must be exact");
            acc = q;
        }
        acc
    };
    cache
        .lock()
        .unwrap()
        .insert(n, result.clone());
    result
}

/// An element of Q(zeta_n): coefficients of 1, zeta, ..., zeta^{phi(n)-1}.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    pub conductor: u32,
    pub coeffs: Vec<Rat>,
}

impl Cyclotomic {
    fn reduce(conductor: u32, mut poly: Vec<Rat>) -> Cyclotomic {
        let phi = cyclotomic_polynomial(conductor);
        if poly.len() >= phi.len() {
            let (_, r) = poly_divmod_monic(&poly, &phi);
            poly = r;
        }
        let deg = phi.len() - 1;
        poly.resize(deg, Rat::zero());
        Cyclotomic {
            conductor,
            coeffs: poly,
        }
    }

    fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    fn inverse(&self) -> Option<Cyclotomic> {
        // Extended Euclid in Q[x] against Phi_n.
        let phi = cyclotomic_polynomial(self.conductor);
        let mut r0 = phi.clone();
        let mut r1 = self.coeffs.clone();
        poly_trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut s0: Vec<Rat> = vec![];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            // make r1 monic for division, track the scaling
            let lead = r1.last().unwrap().clone();
            let r1m: Vec<Rat> = r1.iter().map(|c| c / &lead).collect();
            let (q, r) = poly_divmod_monic(&r0, &r1m);
            // r0 = q*r1m + r  =>  r = r0 - (q/lead)*r1
            let qs: Vec<Rat> = q.iter().map(|c| c / &lead).collect();
            let mut s2 = s0.clone();
            let qs1 = poly_mul(&qs, &s1);
            s2.resize(s2.len().max(qs1.len()), Rat::zero());
            for (k, c) in qs1.iter().enumerate() {
                s2[k] -= c;
            }
            poly_trim(&mut s2);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (nonzero constant since Phi_n is irreducible and self != 0)
        if r0.len() != 1 {
            return None;
        }
        let g = r0[0].clone();
        let inv: Vec<Rat> = s0.iter().map(|c| c / &g).collect();
        Some(Cyclotomic::reduce(self.conductor, inv))
    }
}

/// Exact scalar: rational or cyclotomic. Constant cyclotomic values are
/// always demoted to `Rat`, making representations canonical per conductor;
/// equality across conductors joins into the common extension first.
#[derive(Clone)]
pub enum Scalar {
    Rat(Rat),
    Cyc(Cyclotomic),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Cyc(a), Scalar::Cyc(b)) if a.conductor == b.conductor => a == b,
            (Scalar::Rat(_), Scalar::Cyc(_)) | (Scalar::Cyc(_), Scalar::Rat(_)) => false,
            _ => self.sub_ref(other).is_zero(),
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(rat_int(n))
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar::Rat(r)
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rat(rat(num, den))
    }

    /// Primitive n-th root of unity zeta_n.
    pub fn root_of_unity(n: u32) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::Input("root of unity needs n >= 1".into()));
        }
        if n == 1 {
            return Ok(Scalar::one());
        }
        if n == 2 {
            return Ok(Scalar::from_int(-1));
        }
        let phi = euler_phi(n) as usize;
        let mut coeffs = vec![Rat::zero(); phi];
        if phi > 1 {
            coeffs[1] = Rat::one();
        } else {
            // phi(n) = 1 only for n = 1, 2, handled above
            unreachable!();
        }
        Ok(Scalar::Cyc(Cyclotomic {
            conductor: n,
            coeffs,
        })
        .normalized())
    }

    fn normalized(self) -> Scalar {
        match self {
            Scalar::Cyc(c) if c.is_rational() => Scalar::Rat(c.coeffs[0].clone()),
            other => other,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cyc(c) => c.coeffs.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    pub fn conductor(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Cyc(c) => c.conductor,
        }
    }

    /// Embed into Q(zeta_n); the current conductor must divide n.
    fn embed(&self, n: u32) -> Cyclotomic {
        match self {
            Scalar::Rat(r) => {
                let phi = euler_phi(n) as usize;
                let mut coeffs = vec![Rat::zero(); phi];
                coeffs[0] = r.clone();
                Cyclotomic {
                    conductor: n,
                    coeffs,
                }
            }
            Scalar::Cyc(c) => {
                assert!(n % c.conductor == 0);
                if n == c.conductor {
                    return c.clone();
                }
                let step = (n / c.conductor) as usize;
                // zeta_m = zeta_n^step; substitute power by power
                let mut poly = vec![Rat::zero(); c.coeffs.len() * step + 1];
                for (k, coef) in c.coeffs.iter().enumerate() {
                    if !coef.is_zero() {
                        poly[k * step] += coef;
                    }
                }
                Cyclotomic::reduce(n, poly)
            }
        }
    }

    fn binop(
        &self,
        other: &Scalar,
        rr: impl Fn(&Rat, &Rat) -> Rat,
        cc: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rr(a, b)),
            _ => {
                let n = self.conductor().lcm(&other.conductor());
                let a = self.embed(n);
                let b = other.embed(n);
                Scalar::Cyc(cc(&a, &b)).normalized()
            }
        }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        self.binop(other, |a, b| a + b, |a, b| {
            let mut coeffs = a.coeffs.clone();
            for (k, c) in b.coeffs.iter().enumerate() {
                coeffs[k] += c;
            }
            Cyclotomic {
                conductor: a.conductor,
                coeffs,
            }
        })
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        self.binop(other, |a, b| a * b, |a, b| {
            Cyclotomic::reduce(a.conductor, poly_mul(&a.coeffs, &b.coeffs))
        })
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Cyc(c) => Scalar::Cyc(Cyclotomic {
                conductor: c.conductor,
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
            }),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(Error::Internal("division by zero scalar".into()))
                } else {
                    Ok(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Cyc(c) => c
                .inverse()
                .map(|i| Scalar::Cyc(i).normalized())
                .ok_or_else(|| Error::Internal("division by zero scalar".into())),
        }
    }

    pub fn div_ref(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// True when the value is a rational strictly greater than zero.
    /// Non-rational values are never considered positive.
    pub fn is_positive_rational(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_positive())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}
impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.sub_ref(&rhs)
    }
}
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.div_ref(&rhs).expect("scalar division by zero")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Cyc(c) => {
                let mut first = true;
                for (k, coef) in c.coeffs.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    if k == 0 {
                        write!(f, "{}", coef)?;
                    } else if k == 1 {
                        write!(f, "({})*z{}", coef, c.conductor)?;
                    } else {
                        write!(f, "({})*z{}^{}", coef, c.conductor, k)?;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Arithmetic context for a cyclotomic extension: the conductor together with
/// its primitive root. Scalars of any conductor dividing `n` embed.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    pub conductor: u32,
    pub zeta: Scalar,
}

/// Field descriptor for Q(zeta_n).
pub fn cyclotomic_join(n: u32) -> Result<CyclotomicField> {
    if n == 0 {
        return Err(Error::Input("cyclotomic conductor must be >= 1".into()));
    }
    Ok(CyclotomicField {
        conductor: n,
        zeta: Scalar::root_of_unity(n)?,
    })
}
