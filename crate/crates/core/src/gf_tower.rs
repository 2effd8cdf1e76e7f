//! The tower F_p ⊆ K = F_q ⊆ F = F_{q^r}.
//!
//! K is built as F_p[x]/(g) and F as K[y]/(h), with g and h the
//! lexicographically least monic irreducibles. An element of F is stored as a
//! dense index: writing it as `sum_j c_j y^j` with `c_j = sum_i d_{j,i} x^i`
//! in K, the index is `sum_{j,i} d_{j,i} p^(j*m + i)`. Elements of K are thus
//! exactly the indices below q, and the K-coordinates of an element are its
//! base-q digits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base_field::{
    is_prime, least_irreducible, prime_factors, PrimeField, SmallField, SubField,
};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// Default cap on #F.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 24;
/// Discrete-log tables are built only up to this order.
pub const LOG_TABLE_MAX_ORDER: u64 = 1 << 16;

/// A field element, identified by its dense index.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// One member of the subfield lattice of F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubfieldDesc {
    /// Degree over F_p.
    pub d: u32,
    pub size: u64,
    pub contains_k: bool,
    pub contained_in_k: bool,
}

/// Options for [`FieldCtx::with_options`].
#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub max_order: u64,
    /// Permit r = 1 (F = K); only meant for prime-field oracle tests.
    pub allow_trivial_extension: bool,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            allow_trivial_extension: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Immutable description of the tower with its arithmetic.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    r: u32,
    q: u32,
    order: u32,
    k: SubField,
    h: Vec<u32>,
    pow_p: Vec<u32>,
    tables: Option<LogTables>,
    primitive: Elem,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("r", &self.r)
            .field("g", &self.k.g)
            .field("h", &self.h)
            .finish()
    }
}

impl FieldCtx {
    /// Builds the tower for `p^m^r` with default options.
    pub fn new(p: u32, m: u32, r: u32) -> Result<Self> {
        Self::with_options(p, m, r, FieldOptions::default())
    }

    /// Parses a field specification `"p^m^r"`.
    pub fn from_spec(spec: &str, options: FieldOptions) -> Result<Self> {
        let (p, m, r) = parse_field_spec(spec)?;
        Self::with_options(p, m, r, options)
    }

    pub fn with_options(p: u32, m: u32, r: u32, options: FieldOptions) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidField("m must be at least 1".into()));
        }
        if r == 0 || (r == 1 && !options.allow_trivial_extension) {
            return Err(Error::InvalidField(format!(
                "r must be at least 2 (got {r})"
            )));
        }
        let degree = m as u64 * r as u64;
        let order = (p as u128).checked_pow(degree as u32).unwrap_or(u128::MAX);
        let cap = options.max_order.min(u32::MAX as u64);
        if degree > 64 || order > cap as u128 {
            return Err(Error::FieldTooLarge { order, cap });
        }
        let order = order as u32;

        let prime = PrimeField { p };
        let g = least_irreducible(&prime, m);
        let k = SubField::new(p, m, g);
        let q = k.q;
        let h = least_irreducible(&k, r);
        let pow_p = (0..=degree as u32).map(|i| p.pow(i)).collect();

        let mut ctx = FieldCtx {
            p,
            m,
            r,
            q,
            order,
            k,
            h,
            pow_p,
            tables: None,
            primitive: Elem::ONE,
        };
        ctx.primitive = ctx.find_primitive();
        if order as u64 <= LOG_TABLE_MAX_ORDER {
            let n = (order - 1) as usize;
            let mut exp = vec![0u32; n.max(1)];
            let mut log = vec![0u32; order as usize];
            let mut x = Elem::ONE;
            for (i, slot) in exp.iter_mut().enumerate().take(n) {
                *slot = x.0;
                log[x.index()] = i as u32;
                x = ctx.mul_tower(x, ctx.primitive);
            }
            ctx.tables = Some(LogTables { exp, log });
        }
        Ok(ctx)
    }

    fn find_primitive(&self) -> Elem {
        let n = (self.order - 1) as u64;
        let factors = prime_factors(n);
        (1..self.order)
            .map(Elem)
            .find(|&c| {
                factors
                    .iter()
                    .all(|&l| self.pow_tower(c, n / l) != Elem::ONE)
            })
            .unwrap_or(Elem::ONE)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    /// #K.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// #F.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Degree of F over F_p.
    pub fn degree(&self) -> u32 {
        self.m * self.r
    }
    /// Coefficients of g over F_p, low degree first.
    pub fn g(&self) -> &[u32] {
        &self.k.g
    }
    /// Coefficients of h over K (as K indices), low degree first.
    pub fn h(&self) -> &[u32] {
        &self.h
    }
    /// A generator of F*.
    pub fn primitive(&self) -> Elem {
        self.primitive
    }
    /// The tower generator y of F over K.
    pub fn tower_generator(&self) -> Elem {
        Elem(self.q)
    }

    pub fn spec(&self) -> String {
        format!("{}^{}^{}", self.p, self.m, self.r)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }

    /// Embeds a K index into F.
    pub fn from_k(&self, c: u32) -> Elem {
        debug_assert!(c < self.q);
        Elem(c)
    }

    pub fn in_k(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % p;
            if d != 0 {
                out += (p - d) * place;
            }
            place *= p;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                let e = t.log[a.index()] + t.log[b.index()];
                Elem(t.exp[(if e >= n { e - n } else { e }) as usize])
            }
            None => self.mul_tower(a, b),
        }
    }

    /// Multiplication through the tower representation, without log tables.
    fn mul_tower(&self, a: Elem, b: Elem) -> Elem {
        let r = self.r as usize;
        let ca = self.coords_raw(a);
        let cb = self.coords_raw(b);
        let mut prod = vec![0u32; 2 * r - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = self.k.add(prod[i + j], self.k.mul(x, y));
                }
            }
        }
        // h is monic: y^r = -(h_0 + ... + h_{r-1} y^{r-1})
        for top in (r..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &hc) in self.h[..r].iter().enumerate() {
                if hc != 0 {
                    let t = top - r + i;
                    prod[t] = self.k.sub(prod[t], self.k.mul(c, hc));
                }
            }
        }
        Elem(self.pack_coords(&prod[..r]))
    }

    fn pow_tower(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_tower(result, base);
            }
            base = self.mul_tower(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                let l = t.log[a.index()];
                Elem(t.exp[((n - l) % n) as usize])
            }
            None => self.pow(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = (self.order - 1) as u64;
            let l = t.log[a.index()] as u64;
            return Elem(t.exp[((l * (e % n)) % n) as usize]);
        }
        let mut result = Elem::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Binary operation dispatch.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Elem) -> Result<Elem> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }

    /// a^(p^e), by repeated p-th powering.
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        let mut x = a;
        for _ in 0..e {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut n = (self.order - 1) as u64;
        for l in prime_factors(n) {
            while n.is_multiple_of(l) && self.pow(a, n / l) == Elem::ONE {
                n /= l;
            }
        }
        Ok(n)
    }

    pub fn divisors(&self) -> Vec<u32> {
        let n = self.degree();
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    pub fn check_divisor(&self, d: u32) -> Result<()> {
        if d == 0 || !self.degree().is_multiple_of(d) {
            return Err(Error::NotADivisor {
                d,
                n: self.degree(),
            });
        }
        Ok(())
    }

    /// One entry per divisor of m*r.
    pub fn subfield_lattice(&self) -> Vec<SubfieldDesc> {
        self.divisors()
            .into_iter()
            .map(|d| SubfieldDesc {
                d,
                size: (self.p as u64).pow(d),
                contains_k: d % self.m == 0,
                contained_in_k: self.m.is_multiple_of(d),
            })
            .collect()
    }

    /// Whether `a` lies in F_{p^d}, by the fixed-point test a^(p^d) = a.
    pub fn subfield_membership(&self, a: Elem, d: u32) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(self.frobenius(a, d) == a)
    }

    pub fn enumerate_subfield(&self, d: u32) -> Result<ElemSet> {
        self.check_divisor(d)?;
        let mut set = ElemSet::empty(self);
        set.insert(Elem::ZERO);
        if d == self.degree() {
            return Ok(ElemSet::full(self));
        }
        // F_{p^d}* is the subgroup of order p^d - 1 of the cyclic group F*.
        let n = (self.order - 1) as u64;
        let sub = (self.p as u64).pow(d) - 1;
        let gen = self.pow(self.primitive, n / sub);
        let mut x = Elem::ONE;
        for _ in 0..sub {
            set.insert(x);
            x = self.mul(x, gen);
        }
        Ok(set)
    }

    fn coords_raw(&self, a: Elem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.r)
            .map(|_| {
                let c = v % self.q;
                v /= self.q;
                c
            })
            .collect()
    }

    fn pack_coords(&self, cs: &[u32]) -> u32 {
        cs.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    /// K-coordinates of `a` in the basis 1, y, ..., y^(r-1).
    pub fn coords(&self, a: Elem) -> Vec<Elem> {
        self.coords_raw(a).into_iter().map(Elem).collect()
    }

    pub fn from_coords(&self, cs: &[Elem]) -> Elem {
        let raw: Vec<u32> = cs.iter().map(|c| c.0).collect();
        Elem(self.pack_coords(&raw))
    }

    /// Encodes as a base-p digit string of length m*r, most significant first.
    pub fn encode(&self, a: Elem) -> String {
        let n = self.degree() as usize;
        if self.p > 36 {
            return a.0.to_string();
        }
        let mut v = a.0;
        let mut out = vec!['0'; n];
        for slot in out.iter_mut().rev() {
            *slot = std::char::from_digit(v % self.p, 36).expect("digit below 36");
            v /= self.p;
        }
        out.into_iter().collect()
    }

    /// Decodes either a base-p digit string of length exactly m*r, or a
    /// decimal index prefixed with `#`.
    pub fn decode(&self, literal: &str) -> Result<Elem> {
        let s = literal.trim();
        if let Some(dec) = s.strip_prefix('#') {
            let v: u64 = dec
                .parse()
                .map_err(|_| Error::literal(literal, "not a decimal index"))?;
            if v >= self.order as u64 {
                return Err(Error::literal(literal, "index out of range"));
            }
            return Ok(Elem(v as u32));
        }
        if self.p > 36 {
            return Err(Error::literal(
                literal,
                "digit literals need p <= 36; use #index",
            ));
        }
        if s.chars().count() != self.degree() as usize {
            return Err(Error::literal(
                literal,
                format!("expected {} base-{} digits", self.degree(), self.p),
            ));
        }
        let mut v: u32 = 0;
        for ch in s.chars() {
            let d = ch
                .to_digit(36)
                .ok_or_else(|| Error::literal(literal, "not an alphanumeric digit"))?;
            if d >= self.p {
                return Err(Error::literal(literal, format!("digit {ch} >= p")));
            }
            v = v * self.p + d;
        }
        Ok(Elem(v))
    }

    /// Index of the digit p^i, for callers that need direct digit access.
    pub fn place(&self, i: u32) -> u32 {
        self.pow_p[i as usize]
    }
}

/// Parses `"p^m^r"` into its three integers.
pub fn parse_field_spec(spec: &str) -> Result<(u32, u32, u32)> {
    let parts: Vec<&str> = spec.trim().split('^').collect();
    if parts.len() != 3 {
        return Err(Error::literal(spec, "expected p^m^r"));
    }
    let mut out = [0u32; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Error::literal(spec, format!("{part:?} is not an integer")))?;
    }
    Ok((out[0], out[1], out[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_generator;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 1, 2).unwrap()
    }

    #[test]
    fn build_f4() {
        let ctx = f4();
        assert_eq!(ctx.order(), 4);
        assert_eq!(ctx.g(), &[0, 1]);
        assert_eq!(ctx.h(), &[1, 1, 1]);
    }

    #[test]
    fn build_f64_lattice() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        assert_eq!(ctx.order(), 64);
        assert_eq!(ctx.h().len(), 4);
        let ds: Vec<u32> = ctx.subfield_lattice().iter().map(|s| s.d).collect();
        assert_eq!(ds, vec![1, 2, 3, 6]);
        let lattice = ctx.subfield_lattice();
        assert!(lattice[1].contains_k && lattice[1].contained_in_k);
        assert!(!lattice[2].contains_k && !lattice[2].contained_in_k);
    }

    #[test]
    fn build_f9() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(ctx.h(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldCtx::new(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 1, 1),
            Err(Error::InvalidField(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 5, 5),
            Err(Error::FieldTooLarge { .. })
        ));
        let opts = FieldOptions {
            allow_trivial_extension: true,
            ..Default::default()
        };
        let f7 = FieldCtx::with_options(7, 1, 1, opts).unwrap();
        assert_eq!(f7.order(), 7);
        assert_eq!(f7.mul(Elem(3), Elem(5)), Elem(1));
    }

    #[test]
    fn f4_arithmetic() {
        let ctx = f4();
        let w = ctx.decode("10").unwrap();
        assert_eq!(w, Elem(2));
        assert_eq!(ctx.mul(w, w), ctx.decode("11").unwrap());
        assert_eq!(ctx.add(w, Elem::ZERO), w);
        assert_eq!(ctx.frobenius(w, 1), ctx.add(w, Elem::ONE));
        assert!(!ctx.subfield_membership(w, 1).unwrap());
        assert_eq!(ctx.div(Elem::ONE, Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn f9_pow() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        for a in ctx.nonzero_elements() {
            assert_eq!(ctx.pow(a, 8), Elem::ONE);
        }
    }

    #[test]
    fn f64_generator_not_in_f8() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let g = ctx.primitive();
        assert_eq!(ctx.multiplicative_order(g).unwrap(), 63);
        assert!(!ctx.subfield_membership(g, 3).unwrap());
        assert!(ctx.subfield_membership(Elem::ZERO, 3).unwrap());
        assert!(matches!(
            ctx.subfield_membership(g, 4),
            Err(Error::NotADivisor { .. })
        ));
    }

    #[test]
    fn subfields_have_right_size_and_nest() {
        for (p, m, r) in [(2, 2, 3), (3, 1, 4), (2, 1, 6), (2, 3, 2)] {
            let ctx = FieldCtx::new(p, m, r).unwrap();
            let subs: Vec<(u32, ElemSet)> = ctx
                .divisors()
                .into_iter()
                .map(|d| (d, ctx.enumerate_subfield(d).unwrap()))
                .collect();
            for (d, s) in &subs {
                assert_eq!(s.len() as u64, (p as u64).pow(*d));
                for x in s.iter() {
                    assert!(ctx.subfield_membership(x, *d).unwrap());
                }
            }
            for (a, sa) in &subs {
                for (b, sb) in &subs {
                    assert_eq!(sa.is_subset(sb), b % a == 0, "{a} {b}");
                }
            }
            // K is the fixed set of frobenius^m and equals the indices below q.
            let k = ctx.enumerate_subfield(m).unwrap();
            assert_eq!(k.len() as u32, ctx.q());
            assert!(k.iter().all(|x| ctx.in_k(x)));
        }
    }

    #[test]
    fn f64_subfield_f8_closed() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let s = ctx.enumerate_subfield(3).unwrap();
        assert_eq!(s.len(), 8);
        for a in s.iter() {
            for b in s.iter() {
                assert!(s.contains(ctx.add(a, b)));
                assert!(s.contains(ctx.mul(a, b)));
            }
        }
    }

    fn check_axioms(ctx: &FieldCtx, trials: usize, seed: u64) {
        let mut rng = seeded_generator(seed);
        let n = ctx.order() as u64;
        for _ in 0..trials {
            let a = Elem(rng.below(n) as u32);
            let b = Elem(rng.below(n) as u32);
            let c = Elem(rng.below(n) as u32);
            assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
            assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
            assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            assert_eq!(
                ctx.mul(a, ctx.add(b, c)),
                ctx.add(ctx.mul(a, b), ctx.mul(a, c))
            );
            assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Elem::ONE);
            }
            for e in 0..ctx.degree() {
                assert_eq!(
                    ctx.frobenius(ctx.mul(a, b), e),
                    ctx.mul(ctx.frobenius(a, e), ctx.frobenius(b, e))
                );
                assert_eq!(
                    ctx.frobenius(ctx.add(a, b), e),
                    ctx.add(ctx.frobenius(a, e), ctx.frobenius(b, e))
                );
            }
            assert_eq!(ctx.frobenius(a, ctx.degree()), a);
        }
    }

    #[test]
    fn field_axioms_random_triples() {
        for (p, m, r) in [
            (2, 1, 6),
            (2, 2, 3),
            (3, 1, 4),
            (5, 1, 2),
            (3, 2, 2),
            (7, 1, 3),
        ] {
            let ctx = FieldCtx::new(p, m, r).unwrap();
            check_axioms(&ctx, 10_000, 17);
        }
    }

    #[test]
    fn field_axioms_without_log_tables() {
        // 2^18 is above the log-table limit, so multiplication runs through the tower.
        let ctx = FieldCtx::new(2, 3, 6).unwrap();
        assert!(ctx.tables.is_none());
        check_axioms(&ctx, 2_000, 3);
        let ctx = FieldCtx::new(3, 2, 6).unwrap();
        assert!(ctx.tables.is_none());
        check_axioms(&ctx, 500, 5);
    }

    #[test]
    fn tables_agree_with_tower() {
        let ctx = FieldCtx::new(3, 2, 2).unwrap();
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(ctx.mul(a, b), ctx.mul_tower(a, b));
            }
        }
    }

    #[test]
    fn coords_of_tower_generator() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let y = ctx.tower_generator();
        assert_eq!(ctx.coords(y), vec![Elem(0), Elem(1), Elem(0)]);
        assert_eq!(ctx.coords(Elem(3)), vec![Elem(3), Elem(0), Elem(0)]);
    }

    #[test]
    fn codec() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        assert_eq!(ctx.encode(Elem::ZERO), "000000");
        for a in ctx.elements() {
            assert_eq!(ctx.decode(&ctx.encode(a)).unwrap(), a);
        }
        assert!(ctx.decode("00000").is_err());
        assert!(ctx.decode("000002").is_err());
        assert!(ctx.decode("#64").is_err());
        assert_eq!(ctx.decode("#63").unwrap(), Elem(63));
        assert_eq!(parse_field_spec("2^2^3").unwrap(), (2, 2, 3));
        assert!(parse_field_spec("2^2").is_err());
    }
}
