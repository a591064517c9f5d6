//! Exact arithmetic in `A = F_q[theta]` and `k = F_q(theta)`.
//!
//! Polys store F_q coefficient indices low-to-high with no trailing zero.
//! The text encoding used by the CLI and reports is the same digit string
//! low-to-high, e.g. "101" is `theta^2 + 1` over F_2.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffq::{fq, FqId};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    fq: FqId,
    c: Vec<u8>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        for &d in &self.c {
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl Poly {
    pub fn from_coeffs(fqid: FqId, mut c: Vec<u8>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { fq: fqid, c }
    }
    pub fn zero(fqid: FqId) -> Poly {
        Poly { fq: fqid, c: vec![] }
    }
    pub fn one(fqid: FqId) -> Poly {
        Poly { fq: fqid, c: vec![1] }
    }
    pub fn constant(fqid: FqId, c: u8) -> Poly {
        Poly::from_coeffs(fqid, vec![c])
    }
    pub fn theta(fqid: FqId) -> Poly {
        Poly { fq: fqid, c: vec![0, 1] }
    }
    pub fn theta_pow(fqid: FqId, n: usize) -> Poly {
        let mut c = vec![0u8; n + 1];
        c[n] = 1;
        Poly { fq: fqid, c }
    }
    pub fn parse(fqid: FqId, s: &str) -> Result<Poly> {
        let q = fq(fqid).q;
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(Poly::zero(fqid));
        }
        let mut c = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad digit '{}'", ch)))?;
            if d as u64 >= q {
                return Err(Error::Parse(format!("digit {} out of range for q={}", d, q)));
            }
            c.push(d as u8);
        }
        if c.last() == Some(&0) {
            return Err(Error::Parse(format!("trailing zero coefficient in '{}'", s)));
        }
        Ok(Poly::from_coeffs(fqid, c))
    }

    pub fn fq_id(&self) -> FqId {
        self.fq
    }
    pub fn q(&self) -> u64 {
        fq(self.fq).q
    }
    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }
    pub fn coeffs_vec(&self) -> Vec<u8> {
        self.c.clone()
    }
    pub fn coeff(&self, i: usize) -> u8 {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }
    /// degree with deg 0 = -1 convention for size comparisons
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn leading(&self) -> u8 {
        *self.c.last().unwrap_or(&0)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.fq, o.fq);
        let base = fq(self.fq);
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(base.add(self.coeff(i), o.coeff(i)));
        }
        Poly::from_coeffs(self.fq, c)
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Poly {
        let base = fq(self.fq);
        Poly {
            fq: self.fq,
            c: self.c.iter().map(|&x| base.neg(x)).collect(),
        }
    }
    pub fn scale(&self, k: u8) -> Poly {
        let base = fq(self.fq);
        Poly::from_coeffs(self.fq, self.c.iter().map(|&x| base.mul(x, k)).collect())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.fq, o.fq);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.fq);
        }
        let base = fq(self.fq);
        let mut c = vec![0u8; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = base.add(c[i + j], base.mul(a, b));
            }
        }
        Poly::from_coeffs(self.fq, c)
    }
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u8; n];
        c.extend_from_slice(&self.c);
        Poly { fq: self.fq, c }
    }
    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(self.fq);
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        acc
    }

    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert_eq!(self.fq, d.fq);
        assert!(!d.is_zero(), "division by zero polynomial");
        let base = fq(self.fq);
        let dd = d.c.len() - 1;
        let lead_inv = base.inv(d.leading()).unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd && !(r.len() == dd + 1) {
            // deg self < deg d
        }
        let mut qc = vec![0u8; r.len().saturating_sub(dd)];
        while r.len() > dd || (r.len() == dd + 1 && dd == 0 && !r.is_empty()) {
            if r.len() < dd + 1 {
                break;
            }
            let k = r.len() - 1 - dd;
            let coef = base.mul(*r.last().unwrap(), lead_inv);
            if coef != 0 {
                qc[k] = coef;
                for i in 0..=dd {
                    let t = base.sub(r[k + i], base.mul(coef, d.c[i]));
                    r[k + i] = t;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        (Poly::from_coeffs(self.fq, qc), Poly::from_coeffs(self.fq, r))
    }
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divmod(d).1
    }
    /// Exact division; error if a remainder is left.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(d);
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "inexact division: {} by {}",
                self, d
            )));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let base = fq(self.fq);
        self.scale(base.inv(self.leading()).unwrap())
    }
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// (g, s, t) with s*self + t*o = g, g monic gcd.
    pub fn extended_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let base = fq(self.fq);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(self.fq), Poly::zero(self.fq));
        let (mut t0, mut t1) = (Poly::zero(self.fq), Poly::one(self.fq));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let k = base.inv(r0.leading()).unwrap();
        (r0.scale(k), s0.scale(k), t0.scale(k))
    }
    /// Inverse of self modulo n.
    pub fn inv_mod(&self, n: &Poly) -> Result<Poly> {
        let (g, s, _) = self.extended_gcd(n);
        if !g.is_one() {
            return Err(Error::NotCoprime(self.to_string(), n.to_string()));
        }
        Ok(s.rem(n))
    }

    pub fn eval_fq(&self, x: u8) -> u8 {
        let base = fq(self.fq);
        let mut acc = 0u8;
        for &c in self.c.iter().rev() {
            acc = base.add(base.mul(acc, x), c);
        }
        acc
    }
    pub fn derivative(&self) -> Poly {
        let base = fq(self.fq);
        let p = base.p;
        let mut c = Vec::new();
        for (i, &a) in self.c.iter().enumerate().skip(1) {
            let k = (i as u64 % p) as u8;
            let mut s = 0u8;
            for _ in 0..k {
                s = base.add(s, a);
            }
            c.push(s);
        }
        Poly::from_coeffs(self.fq, c)
    }

    pub fn powmod(&self, mut n: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.fq);
        let mut b = self.rem(m);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            n >>= 1;
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        let m = match self.degree() {
            None | Some(0) => return false,
            Some(m) => m,
        };
        if m == 1 {
            return true;
        }
        let q = self.q();
        let x = Poly::theta(self.fq);
        // x^{q^m} == x mod f
        let mut xp = x.clone();
        for _ in 0..m {
            xp = pow_q(&xp, q, self);
        }
        if xp != x.rem(self) {
            return false;
        }
        // gcd(x^{q^{m/l}} - x, f) == 1 for each prime l | m
        let mut primes = vec![];
        let mut mm = m;
        let mut d = 2;
        while d * d <= mm {
            if mm % d == 0 {
                primes.push(d);
                while mm % d == 0 {
                    mm /= d;
                }
            }
            d += 1;
        }
        if mm > 1 {
            primes.push(mm);
        }
        for l in primes {
            let mut xe = x.clone();
            for _ in 0..m / l {
                xe = pow_q(&xe, q, self);
            }
            let g = xe.sub(&x).gcd(self);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// v-adic digit expansion: self = sum digits[i] * v^i with deg digits[i] < deg v.
    pub fn v_digits(&self, v: &Poly) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divmod(v);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Trial-division factorization into monic irreducibles, sorted.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        assert!(!self.is_zero());
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut cur = self.monic();
        let mut d = 1usize;
        while cur.degree().unwrap_or(0) >= 1 {
            let deg = cur.degree().unwrap();
            if d > deg / 2 {
                out.push((cur.clone(), 1));
                break;
            }
            let mut hit = false;
            for cand in enumerate_monic(self.fq, d) {
                if d > cur.degree().unwrap_or(0) / 2 {
                    break;
                }
                if !cand.is_irreducible() {
                    continue;
                }
                let mut e = 0u32;
                loop {
                    let (q, r) = cur.divmod(&cand);
                    if r.is_zero() {
                        cur = q;
                        e += 1;
                    } else {
                        break;
                    }
                }
                if e > 0 {
                    out.push((cand, e));
                    hit = true;
                }
            }
            let _ = hit;
            d += 1;
        }
        out.sort();
        out
    }

    /// |(A/self)^x| from the factorization.
    pub fn unit_group_order(&self) -> u64 {
        let q = self.q();
        let mut n = 1u64;
        for (p, e) in self.factor() {
            let d = p.degree().unwrap() as u32;
            n *= q.pow(d * e) - q.pow(d * (e - 1));
        }
        n
    }
}

/// x^q mod m, by repeated squaring inside the modulus.
fn pow_q(x: &Poly, q: u64, m: &Poly) -> Poly {
    x.powmod(q, m)
}

/// Monic polynomials of degree i, deterministic order, q^i of them.
pub fn enumerate_monic(fqid: FqId, i: usize) -> impl Iterator<Item = Poly> {
    let q = fq(fqid).q;
    let count = q.pow(i as u32);
    (0..count).map(move |t| {
        let mut c = vec![0u8; i + 1];
        c[i] = 1;
        let mut tt = t;
        for j in 0..i {
            c[j] = (tt % q) as u8;
            tt /= q;
        }
        Poly::from_coeffs(fqid, c)
    })
}

/// All polynomials of degree < i (including 0), deterministic order, q^i of them.
pub fn enumerate_below(fqid: FqId, i: usize) -> impl Iterator<Item = Poly> {
    let q = fq(fqid).q;
    let count = q.pow(i as u32);
    (0..count).map(move |t| {
        let mut c = vec![0u8; i];
        let mut tt = t;
        for j in 0..i {
            c[j] = (tt % q) as u8;
            tt /= q;
        }
        Poly::from_coeffs(fqid, c)
    })
}

/// Res(a/n): the coefficient of theta^{deg n - 1} in (a mod n), n monic.
pub fn residue_map(a: &Poly, n: &Poly) -> Result<u8> {
    let d = n.degree().filter(|&d| d >= 1).ok_or(Error::ConstantModulus)?;
    assert!(n.is_monic());
    Ok(a.rem(n).coeff(d - 1))
}

/// n-dual families: bases a_i, b_j of A/n with Res(a_i b_j / n) = delta_ij.
pub fn dual_families(n: &Poly) -> Result<(Vec<Poly>, Vec<Poly>)> {
    let d = n.degree().filter(|&d| d >= 1).ok_or(Error::ConstantModulus)?;
    let fqid = n.fq_id();
    let base = fq(fqid);
    // Gram matrix of the monomial basis under the residue pairing
    let mut g = vec![vec![0u8; d]; d];
    for i in 0..d {
        for j in 0..d {
            g[i][j] = residue_map(&Poly::theta_pow(fqid, i + j), n)?;
        }
    }
    // invert over F_q
    let mut inv = vec![vec![0u8; d]; d];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut a = g.clone();
    for col in 0..d {
        let pr = (col..d)
            .find(|&r| a[r][col] != 0)
            .ok_or_else(|| Error::Internal("residue Gram matrix singular".into()))?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let pk = base.inv(a[col][col]).unwrap();
        for j in 0..d {
            a[col][j] = base.mul(a[col][j], pk);
            inv[col][j] = base.mul(inv[col][j], pk);
        }
        for r in 0..d {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for j in 0..d {
                    a[r][j] = base.sub(a[r][j], base.mul(f, a[col][j]));
                    inv[r][j] = base.sub(inv[r][j], base.mul(f, inv[col][j]));
                }
            }
        }
    }
    let ai: Vec<Poly> = (0..d).map(|i| Poly::theta_pow(fqid, i)).collect();
    let bj: Vec<Poly> = (0..d)
        .map(|j| {
            let mut acc = Poly::zero(fqid);
            for (k, invjk) in inv[j].iter().enumerate() {
                acc = acc.add(&Poly::theta_pow(fqid, k).scale(*invjk));
            }
            acc
        })
        .collect();
    // verify contract before returning
    for (i, a_i) in ai.iter().enumerate() {
        for (j, b_j) in bj.iter().enumerate() {
            let r = residue_map(&a_i.mul(b_j), n)?;
            let want = if i == j { 1 } else { 0 };
            if r != want {
                return Err(Error::Internal("dual family verification failed".into()));
            }
        }
    }
    Ok((ai, bj))
}

// ---------------------------------------------------------------------------
// rational functions
// ---------------------------------------------------------------------------

/// Element of k = F_q(theta) in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Pole("zero denominator".into()));
        }
        let base = fq(num.fq_id());
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead = den.leading();
        if lead != 1 {
            let k = base.inv(lead).unwrap();
            num = num.scale(k);
            den = den.scale(k);
        }
        Ok(RatFunc { num, den })
    }
    pub fn from_poly(p: Poly) -> RatFunc {
        let fqid = p.fq_id();
        RatFunc {
            num: p,
            den: Poly::one(fqid),
        }
    }
    pub fn zero(fqid: FqId) -> RatFunc {
        RatFunc::from_poly(Poly::zero(fqid))
    }
    pub fn one(fqid: FqId) -> RatFunc {
        RatFunc::from_poly(Poly::one(fqid))
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn fq_id(&self) -> FqId {
        self.num.fq_id()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }
    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        RatFunc::new(self.num.mul(p), self.den.clone()).unwrap()
    }
    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::Pole("division by zero".into()));
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::one(self.fq_id()).div(self)
    }
    /// ord_infinity normalized by deg: deg den - deg num (None for 0).
    pub fn ord_inf(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg_i() - self.num.deg_i())
    }
    /// v-adic valuation for irreducible v.
    pub fn v_valuation(&self, v: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let count = |mut p: Poly| -> i64 {
            let mut n = 0;
            loop {
                let (q, r) = p.divmod(v);
                if r.is_zero() {
                    n += 1;
                    p = q;
                } else {
                    break;
                }
            }
            n
        };
        Some(count(self.num.clone()) - count(self.den.clone()))
    }
    /// Split off the v-power: self = v^t * unit, returns (t, unit) with unit
    /// having v-valuation 0.
    pub fn v_split(&self, v: &Poly) -> Option<(i64, RatFunc)> {
        let t = self.v_valuation(v)?;
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        loop {
            let (q, r) = num.divmod(v);
            if r.is_zero() {
                num = q;
            } else {
                break;
            }
        }
        loop {
            let (q, r) = den.divmod(v);
            if r.is_zero() {
                den = q;
            } else {
                break;
            }
        }
        Some((t, RatFunc::new(num, den).unwrap()))
    }
    pub fn parse(fqid: FqId, s: &str) -> Result<RatFunc> {
        match s.split_once('/') {
            Some((n, d)) => RatFunc::new(Poly::parse(fqid, n)?, Poly::parse(fqid, d)?),
            None => Ok(RatFunc::from_poly(Poly::parse(fqid, s)?)),
        }
    }
}

/// Canonical representative of x modulo A: |x|_inf < 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AFrac {
    pub a0: Poly,
    pub n: Poly,
}

impl AFrac {
    pub fn new(a0: &Poly, n: &Poly) -> AFrac {
        assert!(n.is_monic());
        AFrac {
            a0: a0.rem(n),
            n: n.clone(),
        }
    }
    pub fn to_rat(&self) -> RatFunc {
        RatFunc::new(self.a0.clone(), self.n.clone()).unwrap()
    }
    pub fn is_integral(&self) -> bool {
        self.a0.is_zero()
    }
}

/// A-fractional part: the representative of x mod A with deg num < deg den.
pub fn a_fractional(x: &RatFunc) -> AFrac {
    AFrac::new(x.num(), x.den())
}

// ---------------------------------------------------------------------------
// base-q digits of p-adic integers
// ---------------------------------------------------------------------------

/// Digits of the fractional part `<r/(q^t-1)>`, a periodic base-q word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QDigits {
    pub q: u64,
    pub modulus_exp: usize,
    pub digits: Vec<u8>,
}

pub fn q_digits(q: u64, r: i128, t: usize) -> QDigits {
    assert!(t >= 1);
    let m = (q as i128).pow(t as u32) - 1;
    let r = r.rem_euclid(m);
    let mut digits = Vec::with_capacity(t);
    let mut cur = r;
    for _ in 0..t {
        digits.push((cur % q as i128) as u8);
        cur /= q as i128;
    }
    QDigits {
        q,
        modulus_exp: t,
        digits,
    }
}

impl QDigits {
    /// The numerator of the represented fraction over q^t - 1.
    pub fn numerator(&self) -> i128 {
        let mut r = 0i128;
        for &d in self.digits.iter().rev() {
            r = r * self.q as i128 + d as i128;
        }
        r
    }
    pub fn modulus(&self) -> i128 {
        (self.q as i128).pow(self.modulus_exp as u32) - 1
    }
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
    /// Digits of `<q^h y>`: cyclic rotation.
    pub fn shift(&self, h: i64) -> QDigits {
        let t = self.modulus_exp;
        let h = h.rem_euclid(t as i64) as usize;
        let mut digits = vec![0u8; t];
        for (s, &d) in self.digits.iter().enumerate() {
            digits[(s + h) % t] = d;
        }
        QDigits {
            q: self.q,
            modulus_exp: t,
            digits,
        }
    }
    /// Reinterpret with modulus exponent multiplied by m (digit word repeats).
    pub fn lift(&self, m: usize) -> QDigits {
        let mut digits = Vec::with_capacity(self.modulus_exp * m);
        for _ in 0..m {
            digits.extend_from_slice(&self.digits);
        }
        QDigits {
            q: self.q,
            modulus_exp: self.modulus_exp * m,
            digits,
        }
    }
    /// Digits of <1 - y> (valid when y is not an integer).
    pub fn complement(&self) -> QDigits {
        assert!(!self.is_zero());
        QDigits {
            q: self.q,
            modulus_exp: self.modulus_exp,
            digits: self.digits.iter().map(|&d| self.q as u8 - 1 - d).collect(),
        }
    }
}

/// Base-q digit stream of a rational p-adic integer num/den, gcd(den, q) = 1.
/// Digit i of y is produced by the i-th call to `next_digit`.
#[derive(Clone, Debug)]
pub struct QAdicDigits {
    pub q: u64,
    num: i128,
    den: i128,
}

impl QAdicDigits {
    pub fn new(q: u64, num: i128, den: i128) -> Result<QAdicDigits> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if gcd_i128(den, q as i128) != 1 {
            return Err(Error::Parse(format!(
                "denominator {} not coprime to q = {}",
                den, q
            )));
        }
        Ok(QAdicDigits { q, num, den })
    }
    pub fn from_int(q: u64, n: i128) -> QAdicDigits {
        QAdicDigits { q, num: n, den: 1 }
    }
    /// Digits of the negated fractional part -<y>, i.e. the periodic word.
    pub fn from_neg_fractional(y: &QDigits) -> QAdicDigits {
        QAdicDigits {
            q: y.q,
            num: -y.numerator(),
            den: y.modulus(),
        }
    }
    /// The rational value currently represented (num/den).
    pub fn value(&self) -> (i128, i128) {
        (self.num, self.den)
    }
    pub fn add_int(&self, n: i128) -> QAdicDigits {
        QAdicDigits {
            q: self.q,
            num: self.num + n * self.den,
            den: self.den,
        }
    }
    pub fn div_int(&self, n: i128) -> Result<QAdicDigits> {
        QAdicDigits::new(self.q, self.num, self.den * n)
    }
    pub fn next_digit(&mut self) -> u8 {
        let q = self.q as i128;
        // digit = num * den^{-1} mod q, normalized to [0, q)
        let dinv = inv_mod_i128(self.den.rem_euclid(q), q);
        let d = (self.num.rem_euclid(q) * dinv).rem_euclid(q);
        self.num = (self.num - d * self.den) / q;
        d as u8
    }
    pub fn digit_at(&self, i: usize) -> u8 {
        let mut s = self.clone();
        for _ in 0..i {
            s.next_digit();
        }
        s.next_digit()
    }
    /// Drop the first h digits (the map y -> digits shifted left by h).
    pub fn shifted(&self, h: usize) -> QAdicDigits {
        let mut s = self.clone();
        for _ in 0..h {
            s.next_digit();
        }
        s
    }
    /// q^h * y: digits shifted right by h (h zero digits prepended).
    pub fn times_q_pow(&self, h: usize) -> QAdicDigits {
        QAdicDigits {
            q: self.q,
            num: self.num * (self.q as i128).pow(h as u32),
            den: self.den,
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn inv_mod_i128(a: i128, m: i128) -> i128 {
    // extended euclid, m small
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tr = old_r - q * r;
        old_r = r;
        r = tr;
        let ts = old_s - q * s;
        old_s = s;
        s = ts;
    }
    old_s.rem_euclid(m)
}

/// Leading coefficient sign and flat operator at v.
/// Returns (sgn(x), x^flat) where x^flat = x for v-units and 1 for v-multiples.
pub fn sgn_flat(x: &RatFunc, v: &Poly) -> Result<(u8, RatFunc)> {
    let base = fq(x.fq_id());
    if x.is_zero() {
        return Ok((0, RatFunc::one(x.fq_id())));
    }
    let val = x.v_valuation(v).unwrap();
    if val < 0 {
        return Err(Error::NotIntegral);
    }
    let sgn = base.mul(
        x.num().leading(),
        base.inv(x.den().leading()).unwrap(),
    );
    let flat = if val > 0 {
        RatFunc::one(x.fq_id())
    } else {
        x.clone()
    };
    Ok((sgn, flat))
}
