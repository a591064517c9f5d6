//! Carlitz polynomials, adjoint Carlitz polynomials, cyclotomic polynomials,
//! multiplicative orders, and twisted-polynomial left division, generic over
//! any coefficient ring exposing q-th powers.

use crate::affine::{Poly, RatFunc};
use crate::error::{Error, Result};

/// Ring operations needed to evaluate Carlitz polynomials and Moore
/// determinants: exact add/mul, q-th power Frobenius, and unit inversion.
/// Implementors are the residue fields, the truncated v-adic series, and the
/// truncated series at infinity.
pub trait CRing: Sized + Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// x^{q^s}; negative s only where the ring has inverse Frobenius.
    fn q_pow(&self, s: i64) -> Result<Self>;
    fn inv(&self) -> Result<Self>;
    /// Zero at the ring's working precision (exact zero for fields).
    fn is_zero_like(&self) -> bool;
}

/// Coefficients of the Carlitz polynomial C_a(z) = sum c_{a,i} z^{q^i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzCoeffs {
    pub a: Poly,
    pub coeffs: Vec<Poly>,
}

/// Twisted polynomial sum h_i tau^i over a coefficient ring.
#[derive(Clone, Debug)]
pub struct TwistedPoly<R> {
    pub coeffs: Vec<R>,
}

impl<R: CRing> TwistedPoly<R> {
    /// Evaluate as the F_q-linear map z -> sum h_i z^{q^i}.
    pub fn eval(&self, z: &R) -> Result<R> {
        let mut acc = match self.coeffs.first() {
            Some(c) => c.zero_like(),
            None => return Err(Error::ZeroPolynomial),
        };
        let mut zp = z.clone();
        for (i, h) in self.coeffs.iter().enumerate() {
            if i > 0 {
                zp = zp.q_pow(1)?;
            }
            acc = acc.add(&h.mul(&zp));
        }
        Ok(acc)
    }
}

/// Coefficients of C_a by Horner over the theta-digits of a:
/// C_{theta b} has c_i = theta c_{b,i} + c_{b,i-1}^q.
pub fn carlitz_coeffs(a: &Poly) -> CarlitzCoeffs {
    let fqid = a.fq_id();
    let theta = Poly::theta(fqid);
    let q = a.q();
    // coefficients of C_{theta^j} built up iteratively, combined by F_q-linearity
    let deg = a.degree().unwrap_or(0);
    let mut pow_coeffs: Vec<Poly> = vec![Poly::one(fqid)]; // C_1 = z
    let mut acc: Vec<Poly> = vec![Poly::zero(fqid); deg + 2];
    for j in 0..=deg {
        let d = a.coeff(j);
        if d != 0 {
            for (i, c) in pow_coeffs.iter().enumerate() {
                acc[i] = acc[i].add(&c.scale(d));
            }
        }
        if j < deg {
            // advance C_{theta^j} -> C_{theta^{j+1}}
            let mut next: Vec<Poly> = Vec::with_capacity(pow_coeffs.len() + 1);
            for i in 0..=pow_coeffs.len() {
                let mut c = Poly::zero(fqid);
                if i < pow_coeffs.len() {
                    c = c.add(&theta.mul(&pow_coeffs[i]));
                }
                if i > 0 {
                    c = c.add(&pow_coeffs[i - 1].pow(q));
                }
                next.push(c);
            }
            pow_coeffs = next;
        }
    }
    while acc.last().map_or(false, |c| c.is_zero()) {
        acc.pop();
    }
    if acc.is_empty() {
        acc.push(Poly::zero(fqid));
    }
    CarlitzCoeffs {
        a: a.clone(),
        coeffs: acc,
    }
}

/// Evaluate C_a(z) in a ring, with `embed` taking A-coefficients into it.
pub fn carlitz_eval<R: CRing>(
    a: &Poly,
    z: &R,
    embed: &dyn Fn(&Poly) -> R,
) -> Result<R> {
    carlitz_eval_coeffs(&carlitz_coeffs(a).coeffs, z, embed)
}

pub fn carlitz_eval_coeffs<R: CRing>(
    coeffs: &[Poly],
    z: &R,
    embed: &dyn Fn(&Poly) -> R,
) -> Result<R> {
    let mut acc = z.zero_like();
    let mut zp = z.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            zp = zp.q_pow(1)?;
        }
        if !c.is_zero() {
            acc = acc.add(&embed(c).mul(&zp));
        }
    }
    Ok(acc)
}

/// Evaluate the F_q-linear map sum c_i z^{q^i} with ring coefficients.
pub fn eval_linear<R: CRing>(coeffs: &[R], z: &R) -> Result<R> {
    let mut acc = z.zero_like();
    let mut zp = z.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            zp = zp.q_pow(1)?;
        }
        if !c.is_zero_like() {
            acc = acc.add(&c.mul(&zp));
        }
    }
    Ok(acc)
}

/// Adjoint evaluation C*_a(z) = sum c_{a,i}^{q^{-i}} z^{q^{-i}}; requires
/// inverse Frobenius in the ring.
pub fn adjoint_eval<R: CRing>(a: &Poly, z: &R, embed: &dyn Fn(&Poly) -> R) -> Result<R> {
    let cc = carlitz_coeffs(a);
    let mut acc = z.zero_like();
    for (i, c) in cc.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = embed(c).q_pow(-(i as i64))?.mul(&z.q_pow(-(i as i64))?);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// C*_a(z)^{q^{deg a}} = sum c_{a,i}^{q^{deg a - i}} z^{q^{deg a - i}}:
/// the adjoint check usable in rings without inverse Frobenius.
pub fn adjoint_eval_powered<R: CRing>(
    a: &Poly,
    z: &R,
    embed: &dyn Fn(&Poly) -> R,
) -> Result<R> {
    let cc = carlitz_coeffs(a);
    let d = cc.coeffs.len() as i64 - 1;
    let mut acc = z.zero_like();
    for (i, c) in cc.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = d - i as i64;
        let term = embed(c).q_pow(s)?.mul(&z.q_pow(s)?);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The cyclotomic polynomial: product over monic e | n of C_e(z)^{mu(n/e)},
/// computed by exact division. Returned as coefficients in z over k, which
/// are verified to be polynomials in A.
pub fn cyclotomic_poly(n: &Poly) -> Result<Vec<Poly>> {
    let fqid = n.fq_id();
    if n.degree().filter(|&d| d >= 1).is_none() {
        return Err(Error::ConstantModulus);
    }
    let factors = n.factor();
    // monic divisors of n with their Mobius weight on n/e
    let mut divisors: Vec<(Poly, i32)> = vec![(Poly::one(fqid), mobius_sign(&factors, &[]))];
    // enumerate divisors e of n; mu(n/e) nonzero iff n/e squarefree
    let mut all: Vec<Poly> = vec![Poly::one(fqid)];
    for (p, e) in &factors {
        let mut next = Vec::new();
        for d in &all {
            let mut cur = d.clone();
            for _ in 0..=*e {
                next.push(cur.clone());
                cur = cur.mul(p);
            }
            next.pop();
            next.push(d.mul(&p.pow(*e as u64)));
        }
        all = next;
    }
    divisors.clear();
    for d in &all {
        let cof = n.div_exact(d)?;
        let cf = cof.factor();
        if cf.iter().all(|(_, e)| *e == 1) {
            let sign = if cf.len() % 2 == 0 { 1 } else { -1 };
            divisors.push((d.clone(), sign));
        }
    }
    // numerator and denominator products of C_e(z) as z-polynomials over k
    let mut num: Vec<RatFunc> = vec![RatFunc::one(fqid)];
    let mut den: Vec<RatFunc> = vec![RatFunc::one(fqid)];
    for (e, sign) in &divisors {
        let ce = carlitz_coeffs(e);
        // dense z-polynomial of C_e
        let q = n.q();
        let deg = q.pow(ce.coeffs.len() as u32 - 1) as usize;
        let mut zc = vec![RatFunc::zero(fqid); deg + 1];
        for (i, c) in ce.coeffs.iter().enumerate() {
            zc[q.pow(i as u32) as usize] = RatFunc::from_poly(c.clone());
        }
        if *sign > 0 {
            num = zpoly_mul(&num, &zc);
        } else {
            den = zpoly_mul(&den, &zc);
        }
    }
    let quot = zpoly_div_exact(&num, &den)?;
    let mut out = Vec::with_capacity(quot.len());
    for c in quot {
        if !c.is_poly() {
            return Err(Error::Internal(
                "cyclotomic polynomial has non-integral coefficient".into(),
            ));
        }
        out.push(c.num().clone());
    }
    Ok(out)
}

fn mobius_sign(_factors: &[(Poly, u32)], _subset: &[usize]) -> i32 {
    1
}

fn zpoly_mul(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let fqid = a[0].fq_id();
    let mut out = vec![RatFunc::zero(fqid); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn zpoly_div_exact(a: &[RatFunc], b: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let fqid = a[0].fq_id();
    let mut r: Vec<RatFunc> = a.to_vec();
    while r.last().map_or(false, |c| c.is_zero()) {
        r.pop();
    }
    let mut bb: Vec<RatFunc> = b.to_vec();
    while bb.last().map_or(false, |c| c.is_zero()) {
        bb.pop();
    }
    if bb.is_empty() {
        return Err(Error::ZeroDivision);
    }
    if r.len() < bb.len() {
        if r.is_empty() {
            return Ok(vec![]);
        }
        return Err(Error::Internal("inexact z-polynomial division".into()));
    }
    let dq = r.len() - bb.len();
    let mut q = vec![RatFunc::zero(fqid); dq + 1];
    let lead_inv = bb.last().unwrap().inv()?;
    for k in (0..=dq).rev() {
        let coef = r[k + bb.len() - 1].mul(&lead_inv);
        q[k] = coef.clone();
        if !coef.is_zero() {
            for (i, bc) in bb.iter().enumerate() {
                r[k + i] = r[k + i].sub(&coef.mul(bc));
            }
        }
    }
    if r.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("inexact z-polynomial division".into()));
    }
    Ok(q)
}

/// Least l >= 1 with v^l = 1 mod n.
pub fn order_mod(v: &Poly, n: &Poly) -> Result<usize> {
    if !v.gcd(n).is_one() {
        return Err(Error::NotCoprime(v.to_string(), n.to_string()));
    }
    let bound = n.unit_group_order();
    let mut w = v.rem(n);
    let one = Poly::one(n.fq_id()).rem(n);
    for l in 1..=bound as usize {
        if w == one {
            return Ok(l);
        }
        w = w.mul(v).rem(n);
    }
    Err(Error::Internal("order computation exceeded group order".into()))
}

/// Left division for the Poonen pairing: from a tau^0 C_n(tau) = (tau^0 - tau) h(tau),
/// with e_i the coefficients of a * C_n, the recurrence is h_0 = e_0,
/// h_i = e_i + h_{i-1}^q, and the division closes with e_D + h_{D-1}^q = 0.
/// Input is `a` and the images of the Carlitz coefficients of n in the ring.
pub fn poonen_h<R: CRing>(a: &R, n_coeffs: &[R]) -> Result<TwistedPoly<R>> {
    let d = n_coeffs.len() - 1;
    let e: Vec<R> = n_coeffs.iter().map(|c| a.mul(c)).collect();
    if d == 0 {
        return Ok(TwistedPoly { coeffs: vec![e[0].clone()] });
    }
    let mut h = Vec::with_capacity(d);
    h.push(e[0].clone());
    for i in 1..d {
        let prev_q = h[i - 1].q_pow(1)?;
        h.push(e[i].add(&prev_q));
    }
    let top = e[d].add(&h[d - 1].q_pow(1)?);
    if !top.is_zero_like() {
        return Err(Error::Internal(
            "poonen division did not close: input not an adjoint torsion".into(),
        ));
    }
    Ok(TwistedPoly { coeffs: h })
}

/// Moore determinant det(x_j^{q^{i-1}}) by elimination over the fraction
/// field of the ring, pivoting on entries of minimal valuation.
pub fn moore_det<R: CRing>(xs: &[R]) -> Result<R> {
    if xs.is_empty() {
        return Err(Error::Internal("empty moore determinant".into()));
    }
    let n = xs.len();
    let mut m: Vec<Vec<R>> = Vec::with_capacity(n);
    let mut row: Vec<R> = xs.to_vec();
    m.push(row.clone());
    for _ in 1..n {
        row = row
            .iter()
            .map(|x| x.q_pow(1))
            .collect::<Result<Vec<R>>>()?;
        m.push(row.clone());
    }
    let one = xs[0].one_like();
    let mut det = one.clone();
    let mut sign_pos = true;
    for col in 0..n {
        let pr = (col..n).find(|&r| !m[r][col].is_zero_like());
        let pr = match pr {
            Some(r) => r,
            None => return Ok(xs[0].zero_like()),
        };
        if pr != col {
            m.swap(col, pr);
            sign_pos = !sign_pos;
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot);
        let pinv = pivot.inv()?;
        for r in col + 1..n {
            if m[r][col].is_zero_like() {
                continue;
            }
            let f = m[r][col].mul(&pinv);
            for c in col..n {
                let t = m[col][c].mul(&f);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    if !sign_pos {
        det = det.neg();
    }
    Ok(det)
}

/// Ore's formula: lambda_i^* = (-1)^{n+i} (Delta_i / Delta)^q from an
/// F_q-basis of torsion points; index i is 1-based as in the determinant
/// convention. Returns the whole dual family.
pub fn ore_lambda_star<R: CRing>(lambdas: &[R]) -> Result<Vec<R>> {
    let n = lambdas.len();
    let delta = moore_det(lambdas)?;
    if delta.is_zero_like() {
        return Err(Error::ZeroDivision);
    }
    let dinv = delta.inv()?;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let rest: Vec<R> = lambdas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i - 1)
            .map(|(_, x)| x.clone())
            .collect();
        let di = if rest.is_empty() {
            lambdas[0].one_like()
        } else {
            moore_det(&rest)?
        };
        let mut v = di.mul(&dinv).q_pow(1)?;
        if (n + i) % 2 == 1 {
            v = v.neg();
        }
        out.push(v);
    }
    Ok(out)
}

// CRing for residue-field elements
impl CRing for crate::ffq::FFElem {
    fn zero_like(&self) -> Self {
        crate::ffq::field(self.field).zero()
    }
    fn one_like(&self) -> Self {
        crate::ffq::field(self.field).one()
    }
    fn add(&self, o: &Self) -> Self {
        crate::ffq::FFElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        crate::ffq::FFElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        crate::ffq::FFElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        crate::ffq::FFElem::neg(self)
    }
    fn q_pow(&self, s: i64) -> Result<Self> {
        Ok(self.frobenius(s))
    }
    fn inv(&self) -> Result<Self> {
        crate::ffq::FFElem::inv(self)
    }
    fn is_zero_like(&self) -> bool {
        self.is_zero()
    }
}

/// Euler-style count of generators of A/n: |(A/n)^x|.
pub fn cyclotomic_degree(n: &Poly) -> u64 {
    n.unit_group_order()
}

/// Check the divisor-product identity prod over monic e|n of the e-th
/// cyclotomic polynomial equals C_n(z); used as a consistency oracle.
pub fn cyclotomic_product_check(n: &Poly) -> Result<bool> {
    let fqid = n.fq_id();
    let q = n.q();
    let factors = n.factor();
    let mut all: Vec<Poly> = vec![Poly::one(fqid)];
    for (p, e) in &factors {
        let mut next = Vec::new();
        for d in &all {
            let mut cur = d.clone();
            for _ in 0..=*e {
                next.push(cur.clone());
                cur = cur.mul(p);
            }
        }
        all = next;
    }
    all.sort();
    all.dedup();
    let mut prod: Vec<RatFunc> = vec![RatFunc::one(fqid)];
    for d in &all {
        if d.is_one() {
            // the 1-st cyclotomic polynomial is z itself
            prod = zpoly_mul(&prod, &[RatFunc::zero(fqid), RatFunc::one(fqid)]);
            continue;
        }
        let cp = cyclotomic_poly(d)?;
        let cr: Vec<RatFunc> = cp.into_iter().map(RatFunc::from_poly).collect();
        prod = zpoly_mul(&prod, &cr);
    }
    let cn = carlitz_coeffs(n);
    let deg = q.pow(cn.coeffs.len() as u32 - 1) as usize;
    let mut zc = vec![RatFunc::zero(fqid); deg + 1];
    for (i, c) in cn.coeffs.iter().enumerate() {
        zc[q.pow(i as u32) as usize] = RatFunc::from_poly(c.clone());
    }
    while prod.last().map_or(false, |c| c.is_zero()) {
        prod.pop();
    }
    while zc.last().map_or(false, |c| c.is_zero()) {
        zc.pop();
    }
    Ok(prod.len() == zc.len() && prod.iter().zip(zc.iter()).all(|(a, b)| a == b))
}
