//! Finite fields `F_q` and their extensions `F_{q^m}`.
//!
//! Every field is interned in a global registry so that the same `(q, m)`
//! always yields the same defining modulus and the same embeddings. Elements
//! carry their field id; arithmetic goes through per-field log/exp tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::affine::Poly;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// base field F_q = F_{p^e}
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FqId(pub u16);

/// The base coefficient field. Elements are indices `0..q` encoding the
/// vector of F_p digits of the element in the power basis of `w`, where
/// `F_q = F_p[w]/(g)` and `g` is the smallest monic irreducible of degree e
/// (coefficients read high-to-low as base-p digits).
pub struct FqCtx {
    pub id: FqId,
    pub p: u64,
    pub e: u32,
    pub q: u64,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FqCtx {
    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.inv[a as usize])
    }
    pub fn pow(&self, a: u8, mut n: u64) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }
    /// All q elements in deterministic order (index order).
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
}

fn fp_poly_mul(p: u64, a: &[u8], b: &[u8]) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p) as u8;
        }
    }
    out
}

fn fp_poly_rem(p: u64, a: &[u8], m: &[u8]) -> Vec<u8> {
    // m monic
    let mut r: Vec<u8> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() as u64;
        let k = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (r[k + i] as u64 + p * p - lead * c as u64 % p) % p;
                r[k + i] = t as u8;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn fp_irreducible(p: u64, f: &[u8]) -> bool {
    // trial division over monic F_p polynomials of degree <= deg f / 2
    let df = f.len() - 1;
    if df == 1 {
        return true;
    }
    for dg in 1..=df / 2 {
        let count = p.pow(dg as u32);
        for t in 0..count {
            let mut g = Vec::with_capacity(dg + 1);
            let mut tt = t;
            for _ in 0..dg {
                g.push((tt % p) as u8);
                tt /= p;
            }
            g.push(1);
            if fp_poly_rem(p, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

fn build_fq(p: u64, e: u32) -> FqCtx {
    let q = p.pow(e);
    assert!(q <= 256, "base field larger than desk scale");
    // smallest monic irreducible of degree e over F_p, coefficients ordered
    // high-to-low as base-p digits
    let mut modulus = vec![0u8; e as usize + 1];
    modulus[e as usize] = 1;
    if e > 1 {
        let mut found = false;
        'outer: for t in 0..p.pow(e) {
            let mut g = vec![0u8; e as usize + 1];
            g[e as usize] = 1;
            let mut tt = t;
            for j in 0..e as usize {
                g[j] = (tt % p) as u8;
                tt /= p;
            }
            // t's base-p digits with digit j at coefficient j makes larger j
            // more significant, i.e. high-to-low reading
            if fp_irreducible(p, &g) {
                modulus = g;
                found = true;
                break 'outer;
            }
        }
        assert!(found);
    }

    // element index <-> digit vector of length e
    let digits = |idx: u64| -> Vec<u8> {
        let mut d = Vec::with_capacity(e as usize);
        let mut t = idx;
        for _ in 0..e {
            d.push((t % p) as u8);
            t /= p;
        }
        d
    };
    let index = |d: &[u8]| -> u64 {
        let mut t = 0u64;
        for &c in d.iter().rev() {
            t = t * p + c as u64;
        }
        t
    };

    let qs = q as usize;
    let mut add = vec![0u8; qs * qs];
    let mut mul = vec![0u8; qs * qs];
    let mut neg = vec![0u8; qs];
    let mut inv = vec![0u8; qs];
    for a in 0..q {
        let da = digits(a);
        let mut dn = da.clone();
        for c in dn.iter_mut() {
            *c = ((p - *c as u64) % p) as u8;
        }
        neg[a as usize] = index(&dn) as u8;
        for b in 0..q {
            let db = digits(b);
            let ds: Vec<u8> = da
                .iter()
                .zip(db.iter())
                .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u8)
                .collect();
            add[a as usize * qs + b as usize] = index(&ds) as u8;
            let mut dp = fp_poly_mul(p, &da, &db);
            dp = fp_poly_rem(p, &dp, &modulus);
            dp.resize(e as usize, 0);
            mul[a as usize * qs + b as usize] = index(&dp) as u8;
        }
    }
    for a in 1..q {
        for b in 1..q {
            if mul[a as usize * qs + b as usize] == 1 {
                inv[a as usize] = b as u8;
                break;
            }
        }
    }
    FqCtx {
        id: FqId(0),
        p,
        e,
        q,
        add,
        mul,
        neg,
        inv,
    }
}

struct Registry {
    fq_by_key: HashMap<(u64, u32), FqId>,
    fq: Vec<&'static FqCtx>,
    ff_by_key: HashMap<(FqId, u32), FieldId>,
    ff: Vec<&'static FieldCtx>,
    embeddings: HashMap<(FieldId, FieldId), &'static EmbedTable>,
}

static REGISTRY: OnceLock<Mutex<Registry>> = OnceLock::new();

fn registry() -> &'static Mutex<Registry> {
    REGISTRY.get_or_init(|| {
        Mutex::new(Registry {
            fq_by_key: HashMap::new(),
            fq: Vec::new(),
            ff_by_key: HashMap::new(),
            ff: Vec::new(),
            embeddings: HashMap::new(),
        })
    })
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Intern the base field F_q, q = p^e a prime power.
pub fn fq_field(q: u64) -> Result<FqId> {
    let fac = factor_u64(q);
    if fac.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let (p, e) = fac[0];
    let mut reg = registry().lock().unwrap();
    if let Some(&id) = reg.fq_by_key.get(&(p, e)) {
        return Ok(id);
    }
    let mut ctx = build_fq(p, e);
    let id = FqId(reg.fq.len() as u16);
    ctx.id = id;
    reg.fq.push(Box::leak(Box::new(ctx)));
    reg.fq_by_key.insert((p, e), id);
    Ok(id)
}

pub fn fq(id: FqId) -> &'static FqCtx {
    registry().lock().unwrap().fq[id.0 as usize]
}

// ---------------------------------------------------------------------------
// extension fields F_{q^m}
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldId(pub u16);

/// An extension F_{q^m} = F_q[u]/(modulus), with multiplication through
/// discrete log tables over a fixed generator.
pub struct FieldCtx {
    pub id: FieldId,
    pub fq: FqId,
    pub m: u32,
    pub modulus: Poly,
    pub size: u64,
    log: Vec<u32>,
    exp: Vec<u32>,
}

struct EmbedTable {
    /// image of each small-field element (indexed by element index)
    fwd: Vec<FFElem>,
    /// big-field element index -> small element, for trace/norm descent
    back: HashMap<u64, FFElem>,
}

/// An element of F_{q^m}: digits are F_q indices, length m, low power first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    pub field: FieldId,
    pub digits: Vec<u8>,
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ff[")?;
        for d in &self.digits {
            write!(f, "{}", d)?;
        }
        write!(f, "]")
    }
}

pub fn field(id: FieldId) -> &'static FieldCtx {
    registry().lock().unwrap().ff[id.0 as usize]
}

/// The deterministic field F_{q^m}: same `(q, m)` always yields the same
/// modulus (smallest monic irreducible of degree m over F_q, coefficients
/// read high-to-low as base-p digits).
pub fn build_field(q: u64, m: u32) -> Result<FieldId> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let fqid = fq_field(q)?;
    {
        let reg = registry().lock().unwrap();
        if let Some(&id) = reg.ff_by_key.get(&(fqid, m)) {
            return Ok(id);
        }
    }
    let size = q
        .checked_pow(m)
        .filter(|&s| s <= 1 << 21)
        .ok_or_else(|| Error::TooLarge(format!("q^m = {}^{}", q, m)))?;

    // modulus selection
    let modulus = if m == 1 {
        Poly::theta(fqid)
    } else {
        let mut found = None;
        for t in 0..q.pow(m) {
            let mut coeffs = vec![0u8; m as usize + 1];
            coeffs[m as usize] = 1;
            let mut tt = t;
            for j in 0..m as usize {
                coeffs[j] = (tt % q) as u8;
                tt /= q;
            }
            let f = Poly::from_coeffs(fqid, coeffs);
            if f.is_irreducible() {
                found = Some(f);
                break;
            }
        }
        found.ok_or_else(|| Error::Internal("no irreducible modulus found".into()))?
    };

    // generator search + log/exp tables
    let base = fq(fqid);
    let qs = q;
    let idx_of = |digits: &[u8]| -> u64 {
        let mut t = 0u64;
        for &c in digits.iter().rev() {
            t = t * qs + c as u64;
        }
        t
    };
    let digits_of = |idx: u64| -> Vec<u8> {
        let mut d = Vec::with_capacity(m as usize);
        let mut t = idx;
        for _ in 0..m {
            d.push((t % qs) as u8);
            t /= qs;
        }
        d
    };
    let mul_digits = |a: &[u8], b: &[u8]| -> Vec<u8> {
        let pa = Poly::from_coeffs(fqid, a.to_vec());
        let pb = Poly::from_coeffs(fqid, b.to_vec());
        let mut r = pa.mul(&pb).rem(&modulus).coeffs_vec();
        r.resize(m as usize, 0);
        r
    };

    let group = size - 1;
    let gfactors = factor_u64(group);
    let mut generator = None;
    if group == 1 {
        generator = Some(digits_of(1));
    } else {
        'search: for idx in 2..size {
            let cand = digits_of(idx);
            for &(pf, _) in &gfactors {
                // cand^(group/pf) == 1 ?
                let mut acc = digits_of(1);
                let mut b = cand.clone();
                let mut n = group / pf;
                while n > 0 {
                    if n & 1 == 1 {
                        acc = mul_digits(&acc, &b);
                    }
                    b = mul_digits(&b, &b);
                    n >>= 1;
                }
                if idx_of(&acc) == 1 {
                    continue 'search;
                }
            }
            generator = Some(cand);
            break;
        }
    }
    let generator = generator.ok_or_else(|| Error::Internal("no generator found".into()))?;
    let mut exp = vec![0u32; group as usize];
    let mut log = vec![0u32; size as usize];
    let mut cur = digits_of(1);
    for t in 0..group as usize {
        let i = idx_of(&cur);
        exp[t] = i as u32;
        log[i as usize] = t as u32;
        cur = mul_digits(&cur, &generator);
    }
    debug_assert_eq!(idx_of(&cur), 1);
    let _ = base;

    let mut reg = registry().lock().unwrap();
    if let Some(&id) = reg.ff_by_key.get(&(fqid, m)) {
        return Ok(id);
    }
    let id = FieldId(reg.ff.len() as u16);
    let ctx = FieldCtx {
        id,
        fq: fqid,
        m,
        modulus,
        size,
        log,
        exp,
    };
    reg.ff.push(Box::leak(Box::new(ctx)));
    reg.ff_by_key.insert((fqid, m), id);
    Ok(id)
}

impl FieldCtx {
    pub fn q(&self) -> u64 {
        fq(self.fq).q
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            field: self.id,
            digits: vec![0; self.m as usize],
        }
    }
    pub fn one(&self) -> FFElem {
        self.from_fq(1)
    }
    /// Constant from the base field F_q.
    pub fn from_fq(&self, c: u8) -> FFElem {
        let mut digits = vec![0; self.m as usize];
        digits[0] = c;
        FFElem {
            field: self.id,
            digits,
        }
    }
    pub fn gen(&self) -> FFElem {
        if self.m == 1 {
            // F_q[u]/(u): generator of the field as F_q itself is moot; u = 0
            return self.zero();
        }
        let mut digits = vec![0; self.m as usize];
        digits[1] = 1;
        FFElem {
            field: self.id,
            digits,
        }
    }

    pub fn index_of(&self, x: &FFElem) -> u64 {
        let q = self.q();
        let mut t = 0u64;
        for &c in x.digits.iter().rev() {
            t = t * q + c as u64;
        }
        t
    }
    pub fn from_index(&self, idx: u64) -> FFElem {
        let q = self.q();
        let mut digits = Vec::with_capacity(self.m as usize);
        let mut t = idx;
        for _ in 0..self.m {
            digits.push((t % q) as u8);
            t /= q;
        }
        FFElem {
            field: self.id,
            digits,
        }
    }
    /// All elements in deterministic order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(|i| self.from_index(i))
    }
}

impl FFElem {
    fn ctx(&self) -> &'static FieldCtx {
        field(self.field)
    }
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
    pub fn add(&self, o: &FFElem) -> FFElem {
        assert_eq!(self.field, o.field);
        let base = fq(self.ctx().fq);
        FFElem {
            field: self.field,
            digits: self
                .digits
                .iter()
                .zip(o.digits.iter())
                .map(|(&a, &b)| base.add(a, b))
                .collect(),
        }
    }
    pub fn sub(&self, o: &FFElem) -> FFElem {
        assert_eq!(self.field, o.field);
        let base = fq(self.ctx().fq);
        FFElem {
            field: self.field,
            digits: self
                .digits
                .iter()
                .zip(o.digits.iter())
                .map(|(&a, &b)| base.sub(a, b))
                .collect(),
        }
    }
    pub fn neg(&self) -> FFElem {
        let base = fq(self.ctx().fq);
        FFElem {
            field: self.field,
            digits: self.digits.iter().map(|&a| base.neg(a)).collect(),
        }
    }
    pub fn mul(&self, o: &FFElem) -> FFElem {
        assert_eq!(self.field, o.field);
        let ctx = self.ctx();
        if self.is_zero() || o.is_zero() {
            return ctx.zero();
        }
        let g = ctx.size - 1;
        let t = (ctx.log[ctx.index_of(self) as usize] as u64
            + ctx.log[ctx.index_of(o) as usize] as u64)
            % g;
        ctx.from_index(ctx.exp[t as usize] as u64)
    }
    pub fn scale(&self, c: u8) -> FFElem {
        let base = fq(self.ctx().fq);
        FFElem {
            field: self.field,
            digits: self.digits.iter().map(|&a| base.mul(a, c)).collect(),
        }
    }
    pub fn inv(&self) -> Result<FFElem> {
        let ctx = self.ctx();
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let g = ctx.size - 1;
        let t = (g - ctx.log[ctx.index_of(self) as usize] as u64) % g;
        Ok(ctx.from_index(ctx.exp[t as usize] as u64))
    }
    pub fn pow(&self, n: i64) -> Result<FFElem> {
        let ctx = self.ctx();
        if self.is_zero() {
            if n == 0 {
                return Ok(ctx.one());
            }
            if n < 0 {
                return Err(Error::ZeroDivision);
            }
            return Ok(ctx.zero());
        }
        let g = (ctx.size - 1) as i64;
        let t = (ctx.log[ctx.index_of(self) as usize] as i64 * (n.rem_euclid(g))).rem_euclid(g);
        Ok(ctx.from_index(ctx.exp[t as usize] as u64))
    }
    /// x^{q^s}; s is interpreted modulo m and may be negative.
    pub fn frobenius(&self, s: i64) -> FFElem {
        let ctx = self.ctx();
        if self.is_zero() {
            return ctx.zero();
        }
        let m = ctx.m as i64;
        let s = s.rem_euclid(m) as u32;
        let g = ctx.size - 1;
        let mut qp = 1u64;
        let q = ctx.q();
        for _ in 0..s {
            qp = qp * q % g;
        }
        let t = (ctx.log[ctx.index_of(self) as usize] as u128 * qp as u128 % g as u128) as u64;
        ctx.from_index(ctx.exp[t as usize] as u64)
    }
    /// Is this element in the subfield F_{q^sub}?
    pub fn in_subfield(&self, sub: u32) -> bool {
        self.frobenius(sub as i64) == *self
    }
}

/// x^{q^s} with s interpreted modulo the extension degree.
pub fn frobenius(x: &FFElem, s: i64) -> FFElem {
    x.frobenius(s)
}

/// Polynomial with FFElem coefficients, for root-finding and reductions.
#[derive(Clone, Debug)]
pub struct FFPoly {
    pub field: FieldId,
    pub coeffs: Vec<FFElem>,
}

impl FFPoly {
    pub fn new(field: FieldId, mut coeffs: Vec<FFElem>) -> FFPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        FFPoly { field, coeffs }
    }
    pub fn from_poly(p: &Poly, field: FieldId) -> FFPoly {
        let ctx = crate::ffq::field(field);
        FFPoly::new(
            field,
            p.coeffs().iter().map(|&c| ctx.from_fq(c)).collect(),
        )
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn eval(&self, x: &FFElem) -> FFElem {
        let ctx = field(self.field);
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
    pub fn derivative(&self) -> FFPoly {
        let ctx = field(self.field);
        let mut out = Vec::new();
        let base = fq(ctx.fq);
        let p = base.p;
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = (i as u64 % p) as u8;
            let mut scaled = ctx.zero();
            for _ in 0..k {
                scaled = scaled.add(c);
            }
            out.push(scaled);
        }
        FFPoly::new(self.field, out)
    }
}

/// All roots of `f` in the target field, in deterministic element order.
pub fn roots_over(f: &FFPoly, target: FieldId) -> Result<Vec<FFElem>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let src = field(f.field);
    let tgt = field(target);
    let lifted: Vec<FFElem> = if f.field == target {
        f.coeffs.clone()
    } else {
        let t = embed_table2(f.field, target)?;
        f.coeffs
            .iter()
            .map(|c| t.fwd[src.index_of(c) as usize].clone())
            .collect()
    };
    let g = FFPoly::new(target, lifted);
    let mut roots = Vec::new();
    for x in tgt.elements() {
        if g.eval(&x).is_zero() {
            roots.push(x);
        }
    }
    Ok(roots)
}

fn embed_table2(small: FieldId, big: FieldId) -> Result<&'static EmbedTable> {
    {
        let reg = registry().lock().unwrap();
        if let Some(&t) = reg.embeddings.get(&(small, big)) {
            return Ok(t);
        }
    }
    let sc = field(small);
    let bc = field(big);
    if sc.fq != bc.fq || bc.m % sc.m != 0 {
        return Err(Error::NotSubfield(
            format!("F_{}^{}", sc.q(), sc.m),
            format!("F_{}^{}", bc.q(), bc.m),
        ));
    }
    // smallest root of the small modulus in the big field fixes the embedding
    let fp = FFPoly::from_poly(&sc.modulus, big);
    let mut root = None;
    for x in bc.elements() {
        if fp.eval(&x).is_zero() {
            root = Some(x);
            break;
        }
    }
    let root = root.ok_or_else(|| Error::Internal("modulus has no root in extension".into()))?;
    let mut fwd = Vec::with_capacity(sc.size as usize);
    let mut back = HashMap::new();
    for idx in 0..sc.size {
        let x = sc.from_index(idx);
        // evaluate digit vector at the root
        let mut acc = bc.zero();
        for &d in x.digits.iter().rev() {
            acc = acc.mul(&root).add(&bc.from_fq(d));
        }
        back.insert(bc.index_of(&acc), x.clone());
        fwd.push(acc);
    }
    let table: &'static EmbedTable = Box::leak(Box::new(EmbedTable { fwd, back }));
    let mut reg = registry().lock().unwrap();
    reg.embeddings.insert((small, big), table);
    Ok(table)
}

/// Embed an element of a subfield into an extension.
pub fn embed(x: &FFElem, target: FieldId) -> Result<FFElem> {
    if x.field == target {
        return Ok(x.clone());
    }
    let t = embed_table2(x.field, target)?;
    Ok(t.fwd[field(x.field).index_of(x) as usize].clone())
}

/// Relative trace and norm down to a subfield, over the Frobenius orbit.
pub fn trace_norm(x: &FFElem, down_to: FieldId) -> Result<(FFElem, FFElem)> {
    let bc = field(x.field);
    let sc = field(down_to);
    if sc.fq != bc.fq || bc.m % sc.m != 0 {
        return Err(Error::NotSubfield(
            format!("F_{}^{}", sc.q(), sc.m),
            format!("F_{}^{}", bc.q(), bc.m),
        ));
    }
    let steps = bc.m / sc.m;
    let mut tr = bc.zero();
    let mut nr = bc.one();
    for sidx in 0..steps {
        let y = x.frobenius((sc.m * sidx) as i64);
        tr = tr.add(&y);
        nr = nr.mul(&y);
    }
    let t = embed_table2(down_to, x.field)?;
    let back = |y: &FFElem| -> Result<FFElem> {
        t.back
            .get(&bc.index_of(y))
            .cloned()
            .ok_or_else(|| Error::Internal("trace/norm did not land in subfield".into()))
    };
    Ok((back(&tr)?, back(&nr)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_selection() {
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(field(f2).modulus.to_string(), "01"); // theta
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(field(f4).modulus.to_string(), "111"); // u^2+u+1
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(field(f9).modulus.to_string(), "101"); // u^2+1
    }

    #[test]
    fn frobenius_on_f4() {
        let f4 = build_field(2, 2).unwrap();
        let u = field(f4).gen();
        let u1 = u.add(&field(f4).one());
        assert_eq!(u.frobenius(1), u1); // u^2 = u+1 under u^2+u+1
        assert_eq!(u.frobenius(0), u);
        assert_eq!(u.frobenius(2), u); // order divides m
    }

    #[test]
    fn frobenius_composes() {
        for (q, m) in [(2u64, 4u32), (3, 3), (4, 2)] {
            let f = build_field(q, m).unwrap();
            for x in field(f).elements() {
                for a in 0..m as i64 {
                    for b in 0..m as i64 {
                        assert_eq!(x.frobenius(a).frobenius(b), x.frobenius(a + b));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_norm_f4_to_f2() {
        let f4 = build_field(2, 2).unwrap();
        let f2 = build_field(2, 1).unwrap();
        let u = field(f4).gen();
        let (tr, nr) = trace_norm(&u, f2).unwrap();
        assert_eq!(tr, field(f2).one()); // u + u^2 = 1
        assert_eq!(nr, field(f2).one()); // u * u^2 = 1
        let zero = field(f4).zero();
        let (tz, nz) = trace_norm(&zero, f2).unwrap();
        assert!(tz.is_zero() && nz.is_zero());
    }

    #[test]
    fn trace_norm_linearity_exhaustive() {
        // additive trace, multiplicative norm for q^m <= 64
        for (q, m, m2) in [(2u64, 4u32, 2u32), (2, 6, 3), (3, 2, 1), (4, 2, 1)] {
            let big = build_field(q, m).unwrap();
            let small = build_field(q, m2).unwrap();
            let ctx = field(big);
            for xi in 0..ctx.size.min(64) {
                for yi in 0..ctx.size.min(64) {
                    let x = ctx.from_index(xi);
                    let y = ctx.from_index(yi);
                    let (tx, _) = trace_norm(&x, small).unwrap();
                    let (ty, _) = trace_norm(&y, small).unwrap();
                    let (txy, _) = trace_norm(&x.add(&y), small).unwrap();
                    assert_eq!(txy, tx.add(&ty));
                    let (_, nx) = trace_norm(&x, small).unwrap();
                    let (_, ny) = trace_norm(&y, small).unwrap();
                    let (_, nxy) = trace_norm(&x.mul(&y), small).unwrap();
                    assert_eq!(nxy, nx.mul(&ny));
                }
            }
        }
    }

    #[test]
    fn embedding_composes() {
        let f2 = build_field(2, 1).unwrap();
        let f4 = build_field(2, 2).unwrap();
        let f16 = build_field(2, 4).unwrap();
        for x in field(f2).elements() {
            let via = embed(&embed(&x, f4).unwrap(), f16).unwrap();
            let direct = embed(&x, f16).unwrap();
            assert_eq!(via, direct);
        }
        // generator of F_4 lands consistently
        let u = field(f4).gen();
        let img = embed(&u, f16).unwrap();
        // image satisfies the F_4 modulus
        let f = FFPoly::from_poly(&field(f4).modulus, f16);
        assert!(f.eval(&img).is_zero());
    }

    #[test]
    fn roots_examples() {
        let f2 = build_field(2, 1).unwrap();
        let f4 = build_field(2, 2).unwrap();
        // z^2 + z + 1 over F_2 has roots {u, u+1} in F_4
        let c2 = field(f2);
        let f = FFPoly::new(f2, vec![c2.one(), c2.one(), c2.one()]);
        let roots = roots_over(&f, f4).unwrap();
        let u = field(f4).gen();
        assert_eq!(roots, vec![u.clone(), u.add(&field(f4).one())]);
        // z^{q-1} - 1 over F_q: all of F_q^x
        let f9 = build_field(3, 1).unwrap();
        let c9 = field(f9);
        let g = FFPoly::new(
            f9,
            vec![c9.one().neg(), c9.zero(), c9.one()],
        );
        let r = roots_over(&g, f9).unwrap();
        assert_eq!(r.len(), 2);
    }
}
