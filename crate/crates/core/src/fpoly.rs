//! Univariate polynomials over F: evaluation, composition, iteration and
//! orbit structure, plus the multivariate value-set helper.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::gf_tower::{Elem, FieldCtx};

/// Default cap on the degree of symbolically composed iterates.
pub const DEFAULT_DEGREE_CAP: u64 = 1 << 12;

/// Dense polynomial, low degree first, with no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial X.
    pub fn x() -> Self {
        Self::new(vec![Elem::ZERO, Elem::ONE])
    }

    /// c * X^n.
    pub fn monomial(c: Elem, n: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
                }
            }
        }
        Poly::new(out)
    }

    /// self^p, which in characteristic p just raises every coefficient to
    /// the p-th power and spreads the exponents.
    fn frobenius_power(&self, ctx: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let p = ctx.p() as usize;
        let mut out = vec![Elem::ZERO; self.degree() * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p] = ctx.pow(c, p as u64);
        }
        Poly::new(out)
    }

    /// Coefficients of self(inner(X)). Fails if the degree would exceed `degree_cap`.
    pub fn compose(&self, ctx: &FieldCtx, inner: &Poly, degree_cap: u64) -> Result<Poly> {
        let degree = self.degree() as u64 * inner.degree() as u64;
        if degree > degree_cap {
            return Err(Error::DegreeCap {
                degree,
                cap: degree_cap,
            });
        }
        if self.degree() == 0 || inner.degree() == 0 {
            return Ok(Poly::constant(self.eval(ctx, inner.coeff(0))));
        }
        // inner^j for j <= deg self, reusing the Frobenius map for multiples of p.
        let p = ctx.p() as usize;
        let mut powers: Vec<Poly> = Vec::with_capacity(self.coeffs.len());
        powers.push(Poly::constant(Elem::ONE));
        for j in 1..self.coeffs.len() {
            let next = if j % p == 0 {
                powers[j / p].frobenius_power(ctx)
            } else {
                powers[j - 1].mul(ctx, inner)
            };
            powers.push(next);
        }
        let mut out = vec![Elem::ZERO; degree as usize + 1];
        for (c, power) in self.coeffs.iter().zip(&powers) {
            if c.is_zero() {
                continue;
            }
            for (i, &a) in power.coeffs.iter().enumerate() {
                out[i] = ctx.add(out[i], ctx.mul(*c, a));
            }
        }
        Ok(Poly::new(out))
    }

    /// The k-th iterate f^(k) as a polynomial; f^(0) = X.
    pub fn iterate_poly(&self, ctx: &FieldCtx, k: u32, degree_cap: u64) -> Result<Poly> {
        let d = self.degree() as u64;
        let degree = d.checked_pow(k).unwrap_or(u64::MAX);
        if degree > degree_cap {
            return Err(Error::DegreeCap {
                degree,
                cap: degree_cap,
            });
        }
        let mut acc = Poly::x();
        for _ in 0..k {
            acc = self.compose(ctx, &acc, degree_cap)?;
        }
        Ok(acc)
    }

    /// f^(n)(u) by n-fold evaluation.
    pub fn iterate(&self, ctx: &FieldCtx, u: Elem, n: u64) -> Elem {
        let mut x = u;
        for _ in 0..n {
            x = self.eval(ctx, x);
        }
        x
    }

    /// Values of f at every element, indexed by element.
    pub fn value_table(&self, ctx: &FieldCtx) -> Vec<Elem> {
        ctx.elements().map(|x| self.eval(ctx, x)).collect()
    }

    /// g(X) = f(X + t) - f(X), of degree deg f - 1 when 2 <= deg f < p.
    pub fn difference_poly(&self, ctx: &FieldCtx, t: Elem) -> Result<Poly> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "difference polynomial needs degree >= 2, got {d}"
            )));
        }
        if d as u64 >= ctx.p() as u64 {
            return Err(Error::InvalidArgument(format!(
                "degree {d} is not below the characteristic {}",
                ctx.p()
            )));
        }
        if t.is_zero() {
            return Err(Error::InvalidArgument("shift t must be nonzero".into()));
        }
        let shifted = self.compose(ctx, &Poly::new(vec![t, Elem::ONE]), u64::MAX)?;
        let g = shifted.sub(ctx, self);
        debug_assert_eq!(g.degree(), d - 1);
        Ok(g)
    }

    /// Whether every coefficient lies in F_{p^d}.
    pub fn over_subfield(&self, ctx: &FieldCtx, d: u32) -> Result<bool> {
        ctx.check_divisor(d)?;
        for &c in &self.coeffs {
            if !ctx.subfield_membership(c, d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Comma-separated coefficient literals, low degree first. Parsing also
    /// accepts `;` as the separator, the form used inside CSV cells.
    pub fn to_literal(&self, ctx: &FieldCtx) -> String {
        if self.is_zero() {
            return ctx.encode(Elem::ZERO);
        }
        self.coeffs
            .iter()
            .map(|&c| ctx.encode(c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(ctx: &FieldCtx, literal: &str) -> Result<Poly> {
        if literal.trim().is_empty() {
            return Err(Error::literal(literal, "empty polynomial literal"));
        }
        let coeffs = literal
            .split([',', ';'])
            .map(|part| ctx.decode(part))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// The value set f(A). Asserts the fibre bound #f(A) >= ceil(#A / deg f).
pub fn image_set(ctx: &FieldCtx, f: &Poly, a: &ElemSet) -> ElemSet {
    let mut out = ElemSet::empty(ctx);
    for x in a.iter() {
        out.insert(f.eval(ctx, x));
    }
    if f.degree() >= 1 {
        assert!(
            out.len() >= a.len().div_ceil(f.degree()),
            "value set smaller than the fibre bound allows"
        );
    }
    out
}

/// Forward orbit of u: the tail followed by one period of the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub tail_len: usize,
    pub cycle_len: usize,
    pub elements: Vec<Elem>,
}

impl OrbitSummary {
    /// T_u, the number of distinct orbit points.
    pub fn size(&self) -> usize {
        self.tail_len + self.cycle_len
    }

    /// f^(n)(u) for any n, continuing periodically past the orbit list.
    pub fn element_at(&self, n: u64) -> Elem {
        let t = self.tail_len as u64;
        if n < t {
            self.elements[n as usize]
        } else {
            self.elements[(t + (n - t) % self.cycle_len as u64) as usize]
        }
    }
}

/// Orbit structure by first-visit times.
pub fn orbit(ctx: &FieldCtx, f: &Poly, u: Elem) -> OrbitSummary {
    orbit_with(ctx.order(), u, |x| f.eval(ctx, x))
}

/// Orbit structure under an arbitrary self-map of the element indices.
pub fn orbit_with(order: u32, u: Elem, mut step: impl FnMut(Elem) -> Elem) -> OrbitSummary {
    let mut elements = Vec::new();
    let (tail_len, cycle_len) = if order <= 1 << 16 {
        let mut first = vec![u32::MAX; order as usize];
        let mut x = u;
        loop {
            let seen = first[x.index()];
            if seen != u32::MAX {
                break (seen as usize, elements.len() - seen as usize);
            }
            first[x.index()] = elements.len() as u32;
            elements.push(x);
            x = step(x);
        }
    } else {
        let mut first: HashMap<Elem, usize> = HashMap::new();
        let mut x = u;
        loop {
            if let Some(&seen) = first.get(&x) {
                break (seen, elements.len() - seen);
            }
            first.insert(x, elements.len());
            elements.push(x);
            x = step(x);
        }
    };
    OrbitSummary {
        tail_len,
        cycle_len,
        elements,
    }
}

/// Polynomial in up to three variables, as a map from exponent vectors to
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl MultiPoly {
    pub const MAX_ARITY: usize = 3;

    pub fn new(arity: usize) -> Result<Self> {
        if arity == 0 || arity > Self::MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "arity must be in 1..={}, got {arity}",
                Self::MAX_ARITY
            )));
        }
        Ok(Self {
            arity,
            terms: BTreeMap::new(),
        })
    }

    pub fn with_term(mut self, ctx: &FieldCtx, exponents: &[u32], c: Elem) -> Self {
        assert_eq!(exponents.len(), self.arity, "exponent vector length");
        let entry = self.terms.entry(exponents.to_vec()).or_insert(Elem::ZERO);
        *entry = ctx.add(*entry, c);
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, ctx: &FieldCtx, point: &[Elem]) -> Elem {
        self.terms.iter().fold(Elem::ZERO, |acc, (exps, &c)| {
            let term = exps
                .iter()
                .zip(point)
                .fold(c, |t, (&e, &x)| ctx.mul(t, ctx.pow(x, e as u64)));
            ctx.add(acc, term)
        })
    }
}

/// F(A_1, ..., A_k) over the full Cartesian product.
pub fn image_multi(
    ctx: &FieldCtx,
    poly: &MultiPoly,
    sets: &[&ElemSet],
    work_cap: u128,
) -> Result<ElemSet> {
    if sets.len() != poly.arity() {
        return Err(Error::InvalidArgument(format!(
            "{} sets for a polynomial in {} variables",
            sets.len(),
            poly.arity()
        )));
    }
    let work: u128 = sets.iter().map(|s| s.len() as u128).product();
    if work > work_cap {
        return Err(Error::WorkCap {
            work,
            cap: work_cap,
        });
    }
    let members: Vec<Vec<Elem>> = sets.iter().map(|s| s.to_vec()).collect();
    let mut out = ElemSet::empty(ctx);
    if members.iter().any(|m| m.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; members.len()];
    let mut point: Vec<Elem> = members.iter().map(|m| m[0]).collect();
    loop {
        out.insert(poly.eval(ctx, &point));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < members[k].len() {
                point[k] = members[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = members[k][0];
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_tower::FieldOptions;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 1, 2).unwrap()
    }

    fn prime_field(p: u32) -> FieldCtx {
        let opts = FieldOptions {
            allow_trivial_extension: true,
            ..Default::default()
        };
        FieldCtx::with_options(p, 1, 1, opts).unwrap()
    }

    const W: Elem = Elem(2);

    #[test]
    fn eval_examples() {
        let ctx = f4();
        let f = Poly::new(vec![W, Elem::ZERO, Elem::ONE]);
        assert_eq!(f.eval(&ctx, Elem::ZERO), W);
        assert_eq!(f.eval(&ctx, Elem(3)), Elem::ZERO);
        for x in ctx.elements() {
            assert_eq!(Poly::x().eval(&ctx, x), x);
        }
    }

    #[test]
    fn compose_examples() {
        let ctx = f4();
        let f = Poly::monomial(W, 2);
        let ff = f.compose(&ctx, &f, 16).unwrap();
        assert_eq!(ff, Poly::monomial(Elem::ONE, 4));
        assert_eq!(f.compose(&ctx, &Poly::x(), 16).unwrap(), f);
        assert!(matches!(
            f.compose(&ctx, &f, 3),
            Err(Error::DegreeCap { degree: 4, cap: 3 })
        ));
        assert!(ff.over_subfield(&ctx, 1).unwrap());
        assert!(!f.over_subfield(&ctx, 1).unwrap());
    }

    #[test]
    fn compose_matches_iteration() {
        for (p, m, r) in [(2, 1, 4), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let ctx = FieldCtx::new(p, m, r).unwrap();
            let n = ctx.order();
            for seed in 0..5u32 {
                let f = Poly::new(vec![
                    Elem((seed * 7 + 1) % n),
                    Elem((seed * 13 + 3) % n),
                    Elem((seed * 5 + 2) % n),
                    Elem(1 + seed % (n - 1)),
                ]);
                let ff = f.compose(&ctx, &f, 1 << 12).unwrap();
                let f3 = f.iterate_poly(&ctx, 3, 1 << 12).unwrap();
                assert_eq!(ff.degree(), 9);
                for x in ctx.elements() {
                    assert_eq!(ff.eval(&ctx, x), f.iterate(&ctx, x, 2));
                    assert_eq!(f3.eval(&ctx, x), f.iterate(&ctx, x, 3));
                }
            }
        }
    }

    #[test]
    fn iterate_examples() {
        let ctx = f4();
        let f = Poly::new(vec![W, Elem::ZERO, Elem::ONE]);
        let seq: Vec<Elem> = (0..5).map(|n| f.iterate(&ctx, Elem::ZERO, n)).collect();
        assert_eq!(seq, vec![Elem(0), W, Elem(1), Elem(3), Elem(0)]);
        for a in 0..4 {
            for b in 0..4 {
                let u = Elem(3);
                assert_eq!(
                    f.iterate(&ctx, u, a + b),
                    f.iterate(&ctx, f.iterate(&ctx, u, a), b)
                );
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let ctx = f4();
        let id = orbit(&ctx, &Poly::x(), Elem(3));
        assert_eq!((id.tail_len, id.cycle_len, id.size()), (0, 1, 1));
        let f = Poly::new(vec![W, Elem::ZERO, Elem::ONE]);
        let o = orbit(&ctx, &f, Elem::ZERO);
        assert_eq!((o.tail_len, o.cycle_len), (0, 4));
        assert_eq!(o.elements, vec![Elem(0), W, Elem(1), Elem(3)]);
        let g = Poly::monomial(W, 2);
        let o = orbit(&ctx, &g, Elem::ONE);
        assert_eq!((o.tail_len, o.cycle_len), (0, 2));
        assert_eq!(o.elements, vec![Elem::ONE, W]);
    }

    #[test]
    fn orbit_well_formed_everywhere() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let f = Poly::new(vec![Elem(5), Elem(0), Elem(1)]);
        for u in ctx.elements() {
            let o = orbit(&ctx, &f, u);
            let mut seen = std::collections::HashSet::new();
            assert!(o.elements.iter().all(|e| seen.insert(*e)));
            let last = *o.elements.last().unwrap();
            assert_eq!(f.eval(&ctx, last), o.elements[o.tail_len]);
            for n in 0..60 {
                assert_eq!(o.element_at(n), f.iterate(&ctx, u, n));
            }
        }
    }

    #[test]
    fn difference_poly_examples() {
        let f5 = prime_field(5);
        let sq = Poly::monomial(Elem::ONE, 2);
        let g = sq.difference_poly(&f5, Elem::ONE).unwrap();
        assert_eq!(g, Poly::new(vec![Elem(1), Elem(2)]));
        let f4 = f4();
        assert!(sq.difference_poly(&f4, Elem::ONE).is_err());
        assert!(sq.difference_poly(&f5, Elem::ZERO).is_err());
        let ctx = FieldCtx::new(7, 1, 2).unwrap();
        for d in 2..7 {
            let mut c: Vec<Elem> = (0..=d).map(|i| Elem((i * 11 + 3) as u32 % 49)).collect();
            c[d] = Elem(1 + d as u32);
            let f = Poly::new(c);
            for t in ctx.nonzero_elements().step_by(5) {
                let g = f.difference_poly(&ctx, t).unwrap();
                assert_eq!(g.degree(), d - 1);
                for x in ctx.elements() {
                    let want = ctx.sub(f.eval(&ctx, ctx.add(x, t)), f.eval(&ctx, x));
                    assert_eq!(g.eval(&ctx, x), want);
                }
            }
        }
    }

    #[test]
    fn image_examples() {
        let f5 = prime_field(5);
        let all = ElemSet::full(&f5);
        let img = image_set(&f5, &Poly::monomial(Elem::ONE, 2), &all);
        assert_eq!(img.to_vec(), vec![Elem(0), Elem(1), Elem(4)]);
        assert_eq!(image_set(&f5, &Poly::x(), &all), all);
    }

    #[test]
    fn multivariate_images() {
        let f7 = prime_field(7);
        let a = ElemSet::from_elems(&f7, [Elem(0), Elem(1)]);
        let diff = MultiPoly::new(2)
            .unwrap()
            .with_term(&f7, &[1, 0], Elem::ONE)
            .with_term(&f7, &[0, 1], Elem(6));
        let img = image_multi(&f7, &diff, &[&a, &a], 1 << 20).unwrap();
        assert_eq!(img.to_vec(), vec![Elem(0), Elem(1), Elem(6)]);
        let prod = MultiPoly::new(2)
            .unwrap()
            .with_term(&f7, &[1, 1], Elem::ONE);
        let b = ElemSet::from_elems(&f7, [Elem(2), Elem(5)]);
        let one = ElemSet::singleton(&f7, Elem::ONE);
        assert_eq!(image_multi(&f7, &prod, &[&one, &b], 1 << 20).unwrap(), b);
        assert!(matches!(
            image_multi(&f7, &prod, &[&b, &b], 3),
            Err(Error::WorkCap { .. })
        ));
        assert!(MultiPoly::new(4).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let ctx = f4();
        let f = Poly::parse(&ctx, "01,00,10").unwrap();
        assert_eq!(f, Poly::new(vec![Elem::ONE, Elem::ZERO, W]));
        assert_eq!(f.to_literal(&ctx), "01,00,10");
        assert!(Poly::parse(&ctx, "01,2").is_err());
    }
}
