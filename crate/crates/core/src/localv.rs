//! Truncated v-adic arithmetic.
//!
//! The completion of the cyclotomic compositum at the distinguished prime is
//! an unramified extension of k_v with residue field F_{q^{dl}}; in equal
//! characteristic that ring is honest power series over the residue field
//! with Teichmuller constants. A `LocalSeries` stores coefficients of powers
//! of the uniformizer u, where u = v when unramified and u^{q^d-1} = -v in
//! the ramified extension carrying the arithmetic Gauss sums.
//!
//! theta itself is not a coefficient: its image is the Hensel root of
//! v(X) = (image of v), computed once per ring.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::affine::{enumerate_below, Poly, RatFunc};
use crate::carlitz::{carlitz_coeffs, carlitz_eval_coeffs, cyclotomic_poly, eval_linear, order_mod, CRing};
use crate::error::{Error, Result};
use crate::ffq::{build_field, field, roots_over, FFElem, FFPoly, FieldId};

/// Largest residue field the configuration will build, |F_P| <= 2^12.
pub const MAX_RESIDUE_FIELD: u64 = 1 << 12;

#[derive(Clone, PartialEq, Eq)]
pub struct LocalSeries {
    pub field: FieldId,
    /// ramification index: u = v when 1, u^e = -v when e > 1
    pub e: i64,
    /// index of the first stored coefficient
    pub ord: i64,
    /// coefficients of u^{ord}, u^{ord+1}, ...; leading one nonzero
    pub c: Vec<FFElem>,
    /// coefficients at indices >= prec are unknown
    pub prec: i64,
}

impl std::fmt::Debug for LocalSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u^{}*(", self.ord)?;
        for (i, x) in self.c.iter().enumerate().take(12) {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}u{}", x, i)?;
        }
        write!(f, ") + O(u^{})", self.prec)
    }
}

impl LocalSeries {
    pub fn normalize(mut self) -> LocalSeries {
        // drop unknown tail
        let keep = (self.prec - self.ord).max(0) as usize;
        self.c.truncate(keep);
        // strip leading and trailing zeros (trailing zeros below prec carry
        // no information and would break digest canonicity)
        while self.c.last().map_or(false, |x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().position(|x| !x.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.c.drain(..k);
                self.ord += k as i64;
            }
            None => {
                self.c.clear();
                self.ord = self.prec;
            }
        }
        self
    }

    pub fn zero(fieldid: FieldId, e: i64, prec: i64) -> LocalSeries {
        LocalSeries {
            field: fieldid,
            e,
            ord: prec,
            c: vec![],
            prec,
        }
    }
    pub fn constant(x: FFElem, e: i64, prec: i64) -> LocalSeries {
        let fieldid = x.field;
        LocalSeries {
            field: fieldid,
            e,
            ord: 0,
            c: vec![x],
            prec,
        }
        .normalize()
    }
    pub fn one(fieldid: FieldId, e: i64, prec: i64) -> LocalSeries {
        LocalSeries::constant(field(fieldid).one(), e, prec)
    }
    /// the uniformizer u
    pub fn uniformizer(fieldid: FieldId, e: i64, prec: i64) -> LocalSeries {
        LocalSeries {
            field: fieldid,
            e,
            ord: 1,
            c: vec![field(fieldid).one()],
            prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn val(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.ord)
        }
    }
    pub fn coeff_at(&self, i: i64) -> FFElem {
        if i < self.ord || i >= self.ord + self.c.len() as i64 {
            field(self.field).zero()
        } else {
            self.c[(i - self.ord) as usize].clone()
        }
    }
    /// residue modulo the maximal ideal; error when not integral
    pub fn residue(&self) -> Result<FFElem> {
        if self.prec <= 0 {
            return Err(Error::Precision("no known residue digit".into()));
        }
        if let Some(v) = self.val() {
            if v < 0 {
                return Err(Error::NotIntegral);
            }
        }
        Ok(self.coeff_at(0))
    }

    pub fn truncate(&self, p: i64) -> LocalSeries {
        let mut s = self.clone();
        s.prec = s.prec.min(p);
        s.normalize()
    }
    pub fn shift(&self, k: i64) -> LocalSeries {
        let mut s = self.clone();
        s.ord += k;
        s.prec += k;
        s
    }

    pub fn add(&self, o: &LocalSeries) -> LocalSeries {
        assert_eq!(self.field, o.field);
        assert_eq!(self.e, o.e);
        let prec = self.prec.min(o.prec);
        let ord = self.ord.min(o.ord).min(prec);
        let len = (prec - ord).max(0) as usize;
        let mut c = Vec::with_capacity(len);
        for i in 0..len {
            let idx = ord + i as i64;
            c.push(self.coeff_at(idx).add(&o.coeff_at(idx)));
        }
        LocalSeries {
            field: self.field,
            e: self.e,
            ord,
            c,
            prec,
        }
        .normalize()
    }
    pub fn sub(&self, o: &LocalSeries) -> LocalSeries {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> LocalSeries {
        LocalSeries {
            field: self.field,
            e: self.e,
            ord: self.ord,
            c: self.c.iter().map(|x| x.neg()).collect(),
            prec: self.prec,
        }
    }
    pub fn mul(&self, o: &LocalSeries) -> LocalSeries {
        assert_eq!(self.field, o.field);
        assert_eq!(self.e, o.e);
        let prec = (self.ord + o.prec).min(o.ord + self.prec);
        if self.is_zero() || o.is_zero() {
            return LocalSeries::zero(self.field, self.e, prec);
        }
        let ord = self.ord + o.ord;
        let len = ((prec - ord).max(0) as usize).min(self.c.len() + o.c.len() - 1);
        let mut c = vec![field(self.field).zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        LocalSeries {
            field: self.field,
            e: self.e,
            ord,
            c,
            prec,
        }
        .normalize()
    }
    pub fn scale(&self, k: &FFElem) -> LocalSeries {
        LocalSeries {
            field: self.field,
            e: self.e,
            ord: self.ord,
            c: self.c.iter().map(|x| x.mul(k)).collect(),
            prec: self.prec,
        }
        .normalize()
    }
    pub fn inv(&self) -> Result<LocalSeries> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let m = self.ord;
        // relative precision is preserved: known digits prec - ord
        let n = (self.prec - m).max(1) as usize;
        let c0inv = self.c[0].inv()?;
        let mut y = Vec::with_capacity(n);
        y.push(c0inv.clone());
        for k in 1..n {
            let mut acc = field(self.field).zero();
            for j in 1..=k.min(self.c.len() - 1) {
                let cj = &self.c[j];
                if cj.is_zero() {
                    continue;
                }
                acc = acc.add(&cj.mul(&y[k - j]));
            }
            y.push(acc.mul(&c0inv).neg());
        }
        Ok(LocalSeries {
            field: self.field,
            e: self.e,
            ord: -m,
            c: y,
            prec: self.prec - 2 * m,
        }
        .normalize())
    }
    pub fn div(&self, o: &LocalSeries) -> Result<LocalSeries> {
        Ok(self.mul(&o.inv()?))
    }
    /// x^{q^s}, s >= 0; result truncated to the input window.
    pub fn q_pow_series(&self, s: i64) -> LocalSeries {
        assert!(s >= 0, "series ring has no inverse Frobenius");
        if s == 0 {
            return self.clone();
        }
        let q = field(self.field).q() as i64;
        let mut qs = 1i64;
        for _ in 0..s {
            qs = qs.saturating_mul(q);
        }
        let honest = if self.prec >= 0 {
            self.prec.saturating_mul(qs)
        } else {
            self.prec.saturating_mul(qs)
        };
        let prec = self.prec.min(honest);
        if self.is_zero() {
            return LocalSeries::zero(self.field, self.e, prec);
        }
        let ord = self.ord.saturating_mul(qs);
        let len = (prec - ord).max(0) as usize;
        let mut c = vec![field(self.field).zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            let idx = (i as i64).saturating_mul(qs);
            if idx >= len as i64 {
                break;
            }
            if !a.is_zero() {
                c[idx as usize] = a.frobenius(s);
            }
        }
        LocalSeries {
            field: self.field,
            e: self.e,
            ord,
            c,
            prec,
        }
        .normalize()
    }
    pub fn pow(&self, n: i64) -> Result<LocalSeries> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if n == 0 {
            return Ok(LocalSeries::one(self.field, self.e, self.prec));
        }
        let mut acc = LocalSeries::one(self.field, self.e, self.prec);
        let mut acc_set = false;
        let mut b = self.clone();
        let mut m = n;
        while m > 0 {
            if m & 1 == 1 {
                acc = if acc_set { acc.mul(&b) } else { b.clone() };
                acc_set = true;
            }
            m >>= 1;
            if m > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Agreement check: Ok(prec) when equal on all known digits up to the
    /// common precision, Err(index of first disagreement) otherwise.
    pub fn agree(&self, o: &LocalSeries) -> std::result::Result<i64, i64> {
        let prec = self.prec.min(o.prec);
        let lo = self.ord.min(o.ord);
        for i in lo..prec {
            if self.coeff_at(i) != o.coeff_at(i) {
                return Err(i);
            }
        }
        Ok(prec)
    }

    /// canonical digest: field;e;ord;prec;coefficient digit strings
    pub fn digest(&self) -> String {
        let ctx = field(self.field);
        let mut s = format!(
            "F{}^{};e={};ord={};prec={};",
            ctx.q(),
            ctx.m,
            self.e,
            self.ord,
            self.prec
        );
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            for d in &x.digits {
                s.push_str(&d.to_string());
            }
        }
        s
    }
}

impl CRing for LocalSeries {
    fn zero_like(&self) -> Self {
        LocalSeries::zero(self.field, self.e, self.prec)
    }
    fn one_like(&self) -> Self {
        LocalSeries::one(self.field, self.e, self.prec.max(1))
    }
    fn add(&self, o: &Self) -> Self {
        LocalSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LocalSeries::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        LocalSeries::mul(self, o)
    }
    fn neg(&self) -> Self {
        LocalSeries::neg(self)
    }
    fn q_pow(&self, s: i64) -> Result<Self> {
        if s < 0 {
            return Err(Error::NoInverseFrobenius);
        }
        Ok(self.q_pow_series(s))
    }
    fn inv(&self) -> Result<Self> {
        LocalSeries::inv(self)
    }
    fn is_zero_like(&self) -> bool {
        self.is_zero()
    }
}

// ---------------------------------------------------------------------------
// rings
// ---------------------------------------------------------------------------

/// A fixed-window truncated local ring: the coefficient field, the
/// ramification index, and the image of theta.
#[derive(Clone)]
pub struct LocalRing {
    pub field: FieldId,
    pub e: i64,
    pub v: Poly,
    pub theta_res: FFElem,
    /// u-adic working precision
    pub prec: i64,
    pub theta_w: LocalSeries,
}

impl LocalRing {
    /// Unramified: u = v, coefficients in the given field, theta_res a root
    /// of v there.
    pub fn unramified(fieldid: FieldId, v: &Poly, theta_res: FFElem, prec: i64) -> Result<LocalRing> {
        Self::build(fieldid, v, theta_res, 1, prec)
    }
    /// Totally ramified of index q^d - 1 with u^{q^d-1} = -v.
    pub fn ramified(fieldid: FieldId, v: &Poly, theta_res: FFElem, vprec: i64) -> Result<LocalRing> {
        let q = field(fieldid).q();
        let d = v.degree().unwrap() as u32;
        let e = (q.pow(d) - 1) as i64;
        Self::build(fieldid, v, theta_res, e, vprec * e)
    }

    fn build(fieldid: FieldId, v: &Poly, theta_res: FFElem, e: i64, prec: i64) -> Result<LocalRing> {
        // the image of v in the ring: u (e = 1) or -u^e
        let v_img = if e == 1 {
            LocalSeries::uniformizer(fieldid, 1, prec)
        } else {
            LocalSeries::uniformizer(fieldid, e, prec).pow(e)?.neg()
        };
        // theta_w: Newton root of v(X) - v_img starting at the residue root
        let coeffs: Vec<LocalSeries> = v
            .coeffs()
            .iter()
            .map(|&c| LocalSeries::constant(field(fieldid).from_fq(c), e, prec))
            .collect();
        let mut f = coeffs;
        f[0] = f[0].sub(&v_img);
        let theta_w = newton_root(&f, &theta_res, prec)?;
        Ok(LocalRing {
            field: fieldid,
            e,
            v: v.clone(),
            theta_res,
            prec,
            theta_w,
        })
    }

    pub fn zero(&self) -> LocalSeries {
        LocalSeries::zero(self.field, self.e, self.prec)
    }
    pub fn one(&self) -> LocalSeries {
        LocalSeries::one(self.field, self.e, self.prec)
    }
    pub fn uniformizer(&self) -> LocalSeries {
        LocalSeries::uniformizer(self.field, self.e, self.prec)
    }
    pub fn constant(&self, x: &FFElem) -> LocalSeries {
        LocalSeries::constant(x.clone(), self.e, self.prec)
    }
    pub fn embed_fq(&self, c: u8) -> LocalSeries {
        self.constant(&field(self.field).from_fq(c))
    }
    pub fn embed_poly(&self, p: &Poly) -> LocalSeries {
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(&self.theta_w).add(&self.embed_fq(c));
        }
        acc
    }
    /// Residue of a v-integral polynomial: evaluate at the residue root.
    pub fn poly_residue(&self, p: &Poly) -> FFElem {
        let ctx = field(self.field);
        let mut acc = ctx.zero();
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(&self.theta_res).add(&ctx.from_fq(c));
        }
        acc
    }
    pub fn embed_rat(&self, x: &RatFunc) -> Result<LocalSeries> {
        if x.is_zero() {
            return Ok(self.zero());
        }
        let (t, unit) = x.v_split(&self.v).unwrap();
        let mut s = self
            .embed_poly(unit.num())
            .mul(&self.embed_poly(unit.den()).inv()?);
        if t != 0 {
            s = s.shift(t * self.e);
            if self.e > 1 && t.rem_euclid(2) == 1 {
                s = s.neg();
            }
        }
        Ok(s.truncate(self.prec))
    }
    /// v-normalized valuation of a series: (u-index) / e.
    pub fn valuation(&self, x: &LocalSeries) -> Result<(i64, i64)> {
        let v = x.val().ok_or(Error::ZeroAtPrecision)?;
        let g = gcd_i64(v.abs().max(1), self.e);
        Ok((v / g, self.e / g))
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

pub fn series_poly_eval(coeffs: &[LocalSeries], x: &LocalSeries) -> LocalSeries {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn series_poly_derivative(coeffs: &[LocalSeries]) -> Vec<LocalSeries> {
    let fieldid = coeffs[0].field;
    let p = crate::ffq::fq(field(fieldid).fq).p;
    let mut out = Vec::new();
    for (i, c) in coeffs.iter().enumerate().skip(1) {
        let k = (i as u64 % p) as usize;
        let mut s = c.zero_like();
        for _ in 0..k {
            s = s.add(c);
        }
        out.push(s);
    }
    out
}

/// Newton iteration for a simple root: f(r0-bar) = 0, f'(r0-bar) != 0.
pub fn newton_root(f: &[LocalSeries], r0: &FFElem, prec: i64) -> Result<LocalSeries> {
    let e = f[0].e;
    let df = series_poly_derivative(f);
    let mut x = LocalSeries::constant(r0.clone(), e, prec);
    // residue-level preconditions
    let f0 = series_poly_eval(f, &x);
    if let Some(v) = f0.val() {
        if v <= 0 {
            return Err(Error::Internal("newton start is not a residue root".into()));
        }
    }
    let d0 = series_poly_eval(&df, &x);
    match d0.val() {
        Some(0) => {}
        _ => return Err(Error::Internal("derivative vanishes at start".into())),
    }
    for _ in 0..128 {
        let fx = series_poly_eval(f, &x);
        if fx.is_zero() {
            return Ok(x);
        }
        let dx = series_poly_eval(&df, &x);
        let step = fx.div(&dx)?;
        x = x.sub(&step);
    }
    Err(Error::Precision("newton iteration did not stabilize".into()))
}

/// Hensel lifting of a residue root r0 of f to the ring.
pub fn hensel_lift(f: &[LocalSeries], r0: &FFElem, prec: i64) -> Result<LocalSeries> {
    newton_root(f, r0, prec)
}

// ---------------------------------------------------------------------------
// cyclotomic context
// ---------------------------------------------------------------------------

/// Frozen data for one (q, v, n) configuration: the distinguished prime above
/// v in the n-th cyclotomic field, realized inside W = F_{q^{dl}}[[v]].
pub struct CyclotomicContext {
    pub q: u64,
    pub v: Poly,
    pub d: usize,
    pub n: Poly,
    pub l: usize,
    /// v^l - 1
    pub m: Poly,
    pub ring: LocalRing,
    /// reduction of the chosen primitive n-torsion point
    pub lambda_bar: FFElem,
    /// Hensel-lifted primitive n-torsion point in W
    pub lambda: LocalSeries,
    /// deterministic generator of the Carlitz module structure on F_P
    pub z_gen: FFElem,
    /// the m-torsion point of W reducing to z_gen
    pub omega_gen: LocalSeries,
    /// Carlitz coefficients of v^l, reduced to the residue field
    vl_coeffs_res: Vec<FFElem>,
    /// Carlitz coefficients of v^l, embedded in W
    vl_coeffs_w: Vec<LocalSeries>,
    /// z -> a with C_a(z_gen) = z, the module discrete log
    amap: HashMap<FFElem, Poly>,
    omega_cache: Mutex<HashMap<FFElem, LocalSeries>>,
    pub prec: i64,
}

/// Build the context: order l, residue field, distinguished root of the
/// cyclotomic polynomial, and Hensel lifts.
pub fn make_context(q: u64, v: &Poly, n: &Poly, prec: i64) -> Result<CyclotomicContext> {
    if prec < 4 {
        return Err(Error::Precision("prec must be at least 4".into()));
    }
    if !v.is_monic() || !v.is_irreducible() {
        return Err(Error::NotIrreducible(v.to_string()));
    }
    if !n.is_monic() || n.degree().filter(|&d| d >= 1).is_none() {
        return Err(Error::ConstantModulus);
    }
    if !v.gcd(n).is_one() {
        return Err(Error::NotCoprime(v.to_string(), n.to_string()));
    }
    let d = v.degree().unwrap();
    let l = order_mod(v, n)?;
    let dl = d * l;
    if q.pow(dl as u32) > MAX_RESIDUE_FIELD {
        return Err(Error::TooLarge(format!("q^(dl) = {}^{}", q, dl)));
    }
    let fieldid = build_field(q, dl as u32)?;
    let fctx = field(fieldid);

    // theta's residue: the smallest root of v in F_{q^{dl}}
    let vroots = roots_over(&FFPoly::from_poly(v, fieldid), fieldid)?;
    let theta_res = vroots
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal("v has no root in the residue field".into()))?;
    let ring = LocalRing::unramified(fieldid, v, theta_res.clone(), prec)?;

    // the cyclotomic polynomial mod v and its roots
    let cyc = cyclotomic_poly(n)?;
    let cyc_res = FFPoly::new(
        fieldid,
        cyc.iter().map(|c| ring.poly_residue(c)).collect(),
    );
    let mut roots = Vec::new();
    for z in fctx.elements() {
        if cyc_res.eval(&z).is_zero() {
            roots.push(z);
        }
    }
    roots.sort();
    if roots.len() != cyc.len() - 1 {
        return Err(Error::Internal(format!(
            "cyclotomic polynomial mod v is not separable: {} roots of degree {}",
            roots.len(),
            cyc.len() - 1
        )));
    }
    // every Frobenius^{q^d} orbit must have size l (residue degree l)
    {
        let mut seen: Vec<FFElem> = Vec::new();
        for r in &roots {
            if seen.contains(r) {
                continue;
            }
            let mut orbit = vec![r.clone()];
            let mut cur = r.frobenius(d as i64);
            while &cur != r {
                orbit.push(cur.clone());
                cur = cur.frobenius(d as i64);
            }
            if orbit.len() != l {
                return Err(Error::Internal(format!(
                    "cyclotomic factor of unexpected degree {} (want {})",
                    orbit.len(),
                    l
                )));
            }
            seen.extend(orbit);
        }
    }
    let lambda_bar = roots[0].clone();

    // Hensel lift of the chosen root
    let cyc_w: Vec<LocalSeries> = cyc.iter().map(|c| ring.embed_poly(c)).collect();
    let lambda = hensel_lift(&cyc_w, &lambda_bar, prec)?;

    // Carlitz generator of C(F_P) = A/(v^l - 1)
    let m = v.pow(l as u64).sub(&Poly::one(v.fq_id()));
    let mfac = m.factor();
    let vl_cc = carlitz_coeffs(&m.add(&Poly::one(v.fq_id()))); // coefficients of C_{v^l}
    let vl_coeffs_res: Vec<FFElem> = vl_cc.coeffs.iter().map(|c| ring.poly_residue(c)).collect();
    let vl_coeffs_w: Vec<LocalSeries> = vl_cc.coeffs.iter().map(|c| ring.embed_poly(c)).collect();

    let mut cof_res: Vec<Vec<FFElem>> = Vec::new();
    for (p, _) in &mfac {
        let cof = m.div_exact(p)?;
        cof_res.push(
            carlitz_coeffs(&cof)
                .coeffs
                .iter()
                .map(|c| ring.poly_residue(c))
                .collect(),
        );
    }
    let mut elems: Vec<FFElem> = fctx.elements().collect();
    elems.sort();
    let mut z_gen = None;
    'scan: for z in &elems {
        if z.is_zero() {
            continue;
        }
        for cc in &cof_res {
            let img = eval_linear_res(cc, z);
            if img.is_zero() {
                continue 'scan;
            }
        }
        z_gen = Some(z.clone());
        break;
    }
    let z_gen = z_gen.ok_or_else(|| Error::Internal("no Carlitz generator found".into()))?;

    // module discrete log: a -> C_a(z_gen) for all deg a < dl
    let mut tpow = Vec::with_capacity(dl);
    tpow.push(z_gen.clone());
    for j in 1..dl {
        let prev = &tpow[j - 1];
        tpow.push(theta_res.mul(prev).add(&prev.frobenius(1)));
    }
    let mut amap = HashMap::with_capacity(q.pow(dl as u32) as usize);
    for a in enumerate_below(v.fq_id(), dl) {
        let mut img = fctx.zero();
        for (j, t) in tpow.iter().enumerate() {
            let co = a.coeff(j);
            if co != 0 {
                img = img.add(&t.scale(co));
            }
        }
        amap.insert(img, a);
    }
    if amap.len() != q.pow(dl as u32) as usize {
        return Err(Error::Internal("carlitz generator map is not bijective".into()));
    }

    // the m-torsion lift of z_gen by contraction of C_{v^l}
    let mut omega_gen = ring.constant(&z_gen);
    for _ in 0..(prec + 2) {
        omega_gen = eval_linear(&vl_coeffs_w, &omega_gen)?;
    }
    {
        let next = eval_linear(&vl_coeffs_w, &omega_gen)?;
        if next.agree(&omega_gen).is_err() {
            return Err(Error::Precision("omega iteration did not stabilize".into()));
        }
    }

    Ok(CyclotomicContext {
        q,
        v: v.clone(),
        d,
        n: n.clone(),
        l,
        m,
        ring,
        lambda_bar,
        lambda,
        z_gen,
        omega_gen,
        vl_coeffs_res,
        vl_coeffs_w,
        amap,
        omega_cache: Mutex::new(HashMap::new()),
        prec,
    })
}

fn eval_linear_res(coeffs: &[FFElem], z: &FFElem) -> FFElem {
    let mut acc = z.zero_like();
    let mut zp = z.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            zp = zp.frobenius(1);
        }
        if !c.is_zero() {
            acc = acc.add(&c.mul(&zp));
        }
    }
    acc
}

impl CyclotomicContext {
    pub fn dl(&self) -> usize {
        self.d * self.l
    }
    pub fn residue_field(&self) -> &'static crate::ffq::FieldCtx {
        field(self.ring.field)
    }
    /// Carlitz action of a reduced mod v on the residue field.
    pub fn carlitz_res(&self, a: &Poly, z: &FFElem) -> FFElem {
        let coeffs: Vec<FFElem> = carlitz_coeffs(a)
            .coeffs
            .iter()
            .map(|c| self.ring.poly_residue(c))
            .collect();
        eval_linear_res(&coeffs, z)
    }
    /// C_{v^l} on the residue field (the q^{dl} power map).
    pub fn carlitz_vl_res(&self, z: &FFElem) -> FFElem {
        eval_linear_res(&self.vl_coeffs_res, z)
    }
    /// The module discrete log: the unique a of degree < dl with C_a(z_gen) = z.
    pub fn module_log(&self, z: &FFElem) -> &Poly {
        self.amap.get(z).expect("element outside residue field")
    }

    /// Arithmetic Teichmuller character: residues are the Teichmuller
    /// constants themselves in this realization.
    pub fn teichmuller_psi(&self, z: &FFElem) -> FFElem {
        z.clone()
    }

    /// Geometric Teichmuller character: the unique element of the (v^l-1)-
    /// torsion reducing to z, by contraction of C_{v^l} from the constant lift.
    pub fn geometric_omega(&self, z: &FFElem) -> Result<LocalSeries> {
        if z.is_zero() {
            return Ok(self.ring.zero());
        }
        {
            let cache = self.omega_cache.lock().unwrap();
            if let Some(s) = cache.get(z) {
                return Ok(s.clone());
            }
        }
        let a = self.module_log(z).clone();
        let out = carlitz_eval_coeffs(
            &carlitz_coeffs(&a).coeffs,
            &self.omega_gen,
            &|p| self.ring.embed_poly(p),
        )?;
        debug_assert_eq!(out.residue().ok().as_ref(), Some(z));
        let mut cache = self.omega_cache.lock().unwrap();
        Ok(cache.entry(z.clone()).or_insert(out).clone())
    }

    /// The ramified extension of index q^d - 1: (ring, varpi_v, phi1) where
    /// varpi_v is the distinguished root of -v and phi1 the v-torsion point
    /// with phi1 = -varpi_v mod varpi_v^2.
    pub fn ramified_extend(&self) -> Result<(LocalRing, LocalSeries, LocalSeries)> {
        let ring2 = LocalRing::ramified(self.ring.field, &self.v, self.ring.theta_res.clone(), self.prec)?;
        let varpi = ring2.uniformizer();
        // C_v(z)/z = sum c_{v,i} z^{q^i - 1}; substitute z = u w and divide by
        // u^{q^d - 1}: the w-polynomial has unit constant term -1.
        let cc = carlitz_coeffs(&self.v);
        let q = self.q as i64;
        let e = ring2.e;
        let deg = {
            let mut t = 1i64;
            for _ in 0..self.d {
                t *= q;
            }
            (t - 1) as usize
        };
        let mut coeffs = vec![ring2.zero(); deg + 1];
        let mut qi = 1i64;
        for (i, c) in cc.coeffs.iter().enumerate() {
            if i > 0 {
                qi *= q;
            }
            let shift = qi - 1 - e;
            let term = ring2.embed_poly(c).shift(shift).truncate(ring2.prec);
            coeffs[(qi - 1) as usize] = term;
        }
        let minus_one = field(ring2.field).one().neg();
        let w = hensel_lift(&coeffs, &minus_one, ring2.prec)?;
        let phi1 = varpi.mul(&w);
        Ok((ring2, varpi, phi1))
    }
}
