//! Set calculus over F: signed multifold sumsets, ratio sets, restricted
//! pair images, dilates, expansion statistics and popular differences.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::fpoly::{image_set, Poly};
use crate::gf_tower::{Elem, FieldCtx};
use crate::report::rational_string;

/// Default cap on the number of elementary operations a single set
/// computation may perform.
pub const DEFAULT_WORK_CAP: u128 = 1 << 34;

pub fn negate(ctx: &FieldCtx, a: &ElemSet) -> ElemSet {
    ElemSet::from_elems(ctx, a.iter().map(|x| ctx.neg(x)))
}

/// {a + b}.
pub fn sumset(ctx: &FieldCtx, a: &ElemSet, b: &ElemSet) -> ElemSet {
    combine(ctx, a, b, false)
}

/// {a - b}.
pub fn diffset(ctx: &FieldCtx, a: &ElemSet, b: &ElemSet) -> ElemSet {
    combine(ctx, a, b, true)
}

fn combine(ctx: &FieldCtx, a: &ElemSet, b: &ElemSet, subtract: bool) -> ElemSet {
    let mut out = ElemSet::empty(ctx);
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let full = ctx.order() as usize;
    let rhs: Vec<Elem> = if subtract {
        b.iter().map(|x| ctx.neg(x)).collect()
    } else {
        b.to_vec()
    };
    for x in a.iter() {
        for &y in &rhs {
            out.insert(ctx.add(x, y));
        }
        if out.len() == full {
            break;
        }
    }
    out
}

/// A+...+A-A-...-A with `k_plus` positive and `k_minus` negative copies.
pub fn signed_sumset(
    ctx: &FieldCtx,
    a: &ElemSet,
    k_plus: u32,
    k_minus: u32,
    work_cap: u128,
) -> Result<ElemSet> {
    let k = k_plus + k_minus;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "signed sumset needs at least one summand".into(),
        ));
    }
    // Every intermediate set has at most #F elements.
    let per_step = (ctx.order() as u128).min((a.len() as u128).pow(k.min(8)));
    let work = per_step * a.len() as u128 * (k as u128 - 1);
    if work > work_cap {
        return Err(Error::WorkCap {
            work,
            cap: work_cap,
        });
    }
    if a.is_empty() {
        return Ok(ElemSet::empty(ctx));
    }
    let neg = negate(ctx, a);
    let mut acc = if k_plus > 0 { a.clone() } else { neg.clone() };
    let mut remaining_plus = k_plus.saturating_sub(1);
    let mut remaining_minus = if k_plus > 0 { k_minus } else { k_minus - 1 };
    let full = ctx.order() as usize;
    while remaining_plus + remaining_minus > 0 && acc.len() < full {
        if remaining_plus > 0 {
            acc = sumset(ctx, &acc, a);
            remaining_plus -= 1;
        } else {
            acc = sumset(ctx, &acc, &neg);
            remaining_minus -= 1;
        }
    }
    Ok(acc)
}

/// The eightfold set A+A+A+A-A-A-A-A.
pub fn eightfold(ctx: &FieldCtx, a: &ElemSet, work_cap: u128) -> Result<ElemSet> {
    signed_sumset(ctx, a, 4, 4, work_cap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSet {
    pub set: ElemSet,
    /// Whether 0 was present in the denominator set and skipped.
    pub skipped_zero: bool,
}

/// A:B = {a/b : a ∈ A, b ∈ B \ {0}}.
pub fn ratio_set(ctx: &FieldCtx, a: &ElemSet, b: &ElemSet) -> Result<RatioSet> {
    let skipped_zero = b.contains(Elem::ZERO);
    let inverses: Vec<Elem> = b
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| ctx.inv(x))
        .collect::<Result<_>>()?;
    if inverses.is_empty() {
        return Err(Error::InvalidArgument(
            "ratio set denominator has no nonzero element".into(),
        ));
    }
    let mut set = ElemSet::empty(ctx);
    for x in a.iter() {
        for &y in &inverses {
            set.insert(ctx.mul(x, y));
        }
    }
    Ok(RatioSet { set, skipped_zero })
}

/// {a·g : g ∈ G}.
pub fn dilate(ctx: &FieldCtx, a: Elem, g: &ElemSet) -> ElemSet {
    ElemSet::from_elems(ctx, g.iter().map(|x| ctx.mul(a, x)))
}

/// A relation E ⊆ U × V, stored with its ambient sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRelation {
    u: ElemSet,
    v: ElemSet,
    pairs: Vec<(Elem, Elem)>,
}

impl PairRelation {
    /// Builds a relation, rejecting pairs outside U × V; duplicates are dropped.
    pub fn new(u: ElemSet, v: ElemSet, pairs: Vec<(Elem, Elem)>) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort_unstable();
        pairs.dedup();
        if let Some(&(x, y)) = pairs
            .iter()
            .find(|(x, y)| !u.contains(*x) || !v.contains(*y))
        {
            return Err(Error::InvalidArgument(format!(
                "pair ({}, {}) lies outside U x V",
                x.0, y.0
            )));
        }
        Ok(Self { u, v, pairs })
    }

    /// The full product U × V.
    pub fn full(u: ElemSet, v: ElemSet) -> Self {
        let pairs = u
            .iter()
            .flat_map(|x| v.iter().map(move |y| (x, y)))
            .collect();
        Self { u, v, pairs }
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }
    pub fn u(&self) -> &ElemSet {
        &self.u
    }
    pub fn v(&self) -> &ElemSet {
        &self.v
    }
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOp {
    Diff,
    Ratio,
}

/// Image of E under (a, b) -> a - b or a / b.
pub fn restricted_pairs(ctx: &FieldCtx, e: &PairRelation, op: PairOp) -> Result<ElemSet> {
    let mut out = ElemSet::empty(ctx);
    for &(a, b) in e.pairs() {
        let v = match op {
            PairOp::Diff => ctx.sub(a, b),
            PairOp::Ratio => ctx.div(a, b)?,
        };
        out.insert(v);
    }
    Ok(out)
}

/// E = {(x - y, (x + y + b)^-1) : x, y ∈ A, x + y + b ≠ 0}, inside
/// (A - A) × (A + A + b)^-1. In odd characteristic distinct pairs (x, y) give
/// distinct elements of E, so #E >= #A² - #A.
pub fn bsg_pair_relation(ctx: &FieldCtx, a: &ElemSet, b: Elem) -> Result<PairRelation> {
    if ctx.p() == 2 {
        return Err(Error::InvalidArgument(
            "pair relation needs odd characteristic".into(),
        ));
    }
    let u = diffset(ctx, a, a);
    let mut v = ElemSet::empty(ctx);
    let mut pairs = Vec::new();
    for x in a.iter() {
        for y in a.iter() {
            let s = ctx.add(ctx.add(x, y), b);
            if s.is_zero() {
                continue;
            }
            let inv = ctx.inv(s)?;
            v.insert(inv);
            pairs.push((ctx.sub(x, y), inv));
        }
    }
    let raw = pairs.len();
    let relation = PairRelation::new(u, v, pairs)?;
    if relation.len() != raw {
        return Err(Error::Invariant(format!(
            "{} ordered pairs collapsed to {} relation entries",
            raw,
            relation.len()
        )));
    }
    Ok(relation)
}

/// Cardinality ratios of A+A, A-A, the eightfold set and f(A)-f(A) to #A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetStats {
    pub m: usize,
    pub sum: usize,
    pub diff: usize,
    pub eightfold: usize,
    pub image_diff: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub xi: BigRational,
}

impl SetStats {
    pub fn to_row(&self) -> SetStatsRow {
        SetStatsRow {
            m: self.m,
            alpha: rational_string(&self.alpha),
            beta: rational_string(&self.beta),
            gamma: rational_string(&self.gamma),
            xi: rational_string(&self.xi),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SetStatsRow {
    pub m: usize,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub xi: String,
}

fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn set_stats(ctx: &FieldCtx, a: &ElemSet, f: &Poly, work_cap: u128) -> Result<SetStats> {
    let m = a.len();
    if m == 0 {
        return Err(Error::InvalidArgument(
            "statistics need a nonempty set".into(),
        ));
    }
    let sum = sumset(ctx, a, a).len();
    let diff = diffset(ctx, a, a).len();
    let eight = eightfold(ctx, a, work_cap)?.len();
    let fa = image_set(ctx, f, a);
    let image_diff = diffset(ctx, &fa, &fa).len();
    let stats = SetStats {
        m,
        sum,
        diff,
        eightfold: eight,
        image_diff,
        alpha: ratio(sum, m),
        beta: ratio(diff, m),
        gamma: ratio(eight, m),
        xi: ratio(image_diff, m),
    };
    if sum < m || diff < m || eight < sum.max(diff) {
        return Err(Error::Invariant(format!(
            "expansion statistics out of order: {stats:?}"
        )));
    }
    Ok(stats)
}

/// Nonzero t maximising r(t) = #{(x, y) ∈ A² : x - y = t}; ties go to the
/// least index.
pub fn popular_difference(ctx: &FieldCtx, a: &ElemSet) -> Result<(Elem, usize)> {
    if a.len() < 2 {
        return Err(Error::InvalidArgument(
            "popular difference needs at least two elements".into(),
        ));
    }
    let counts = difference_counts(ctx, a);
    let (t, &count) = counts
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|(i, x), (j, y)| x.cmp(y).then(j.cmp(i)))
        .expect("field has nonzero elements");
    Ok((Elem(t as u32), count as usize))
}

/// r(t) for every t, indexed by element.
pub fn difference_counts(ctx: &FieldCtx, a: &ElemSet) -> Vec<u32> {
    let mut counts = vec![0u32; ctx.order() as usize];
    let members = a.to_vec();
    for &x in &members {
        for &y in &members {
            counts[ctx.sub(x, y).index()] += 1;
        }
    }
    counts
}

/// Result of testing #(U+U-U-U) <= (#(U-U)/#U)^4 · #U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlunneckeReport {
    pub size: usize,
    pub diff: usize,
    pub lhs: usize,
    pub rhs: BigRational,
    pub holds: bool,
    /// The same comparison with the left side raised to the fourth power.
    pub fourth_power_variant_holds: bool,
}

pub fn plunnecke_check(ctx: &FieldCtx, u: &ElemSet, work_cap: u128) -> Result<PlunneckeReport> {
    let n = u.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty set".into()));
    }
    let diff = diffset(ctx, u, u).len();
    let lhs = signed_sumset(ctx, u, 2, 2, work_cap)?.len();
    // (diff/n)^4 · n = diff^4 / n^3
    let rhs = BigRational::new(BigInt::from(diff).pow(4), BigInt::from(n).pow(3));
    let lhs_r = BigRational::from_integer(BigInt::from(lhs));
    let lhs4 = BigRational::from_integer(BigInt::from(lhs).pow(4));
    Ok(PlunneckeReport {
        size: n,
        diff,
        lhs,
        holds: lhs_r <= rhs,
        fourth_power_variant_holds: lhs4 <= rhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_tower::FieldOptions;

    fn prime_field(p: u32) -> FieldCtx {
        let opts = FieldOptions {
            allow_trivial_extension: true,
            ..Default::default()
        };
        FieldCtx::with_options(p, 1, 1, opts).unwrap()
    }

    fn set(ctx: &FieldCtx, xs: &[u32]) -> ElemSet {
        ElemSet::from_elems(ctx, xs.iter().map(|&x| Elem(x)))
    }

    fn idx(s: &ElemSet) -> Vec<u32> {
        s.iter().map(|e| e.0).collect()
    }

    #[test]
    fn signed_sumset_examples() {
        let f5 = prime_field(5);
        let a = set(&f5, &[0, 1]);
        assert_eq!(
            idx(&signed_sumset(&f5, &a, 1, 1, DEFAULT_WORK_CAP).unwrap()),
            vec![0, 1, 4]
        );
        let f7 = prime_field(7);
        let a = set(&f7, &[0, 1]);
        let s = signed_sumset(&f7, &a, 2, 2, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(idx(&s), vec![0, 1, 2, 5, 6]);
        assert!(signed_sumset(&f7, &a, 0, 0, DEFAULT_WORK_CAP).is_err());
        let only_minus = signed_sumset(&f7, &set(&f7, &[1, 2]), 0, 2, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(idx(&only_minus), vec![3, 4, 5]);
    }

    #[test]
    fn subfield_sumsets_are_closed() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        for d in ctx.divisors() {
            let g = ctx.enumerate_subfield(d).unwrap();
            for (kp, km) in [(1, 0), (2, 0), (4, 4), (0, 3)] {
                assert_eq!(
                    signed_sumset(&ctx, &g, kp, km, DEFAULT_WORK_CAP).unwrap(),
                    g
                );
            }
        }
    }

    #[test]
    fn work_cap_is_enforced() {
        let ctx = FieldCtx::new(2, 1, 10).unwrap();
        let a = ElemSet::from_elems(&ctx, (0..64).map(Elem));
        assert!(matches!(
            signed_sumset(&ctx, &a, 4, 4, 1000),
            Err(Error::WorkCap { .. })
        ));
    }

    #[test]
    fn ratio_examples() {
        let f5 = prime_field(5);
        let r = ratio_set(&f5, &set(&f5, &[1, 2]), &set(&f5, &[1, 2])).unwrap();
        assert_eq!(idx(&r.set), vec![1, 2, 3]);
        assert!(!r.skipped_zero);
        let a = set(&f5, &[0, 3, 4]);
        assert_eq!(ratio_set(&f5, &a, &set(&f5, &[1])).unwrap().set, a);
        let r = ratio_set(&f5, &a, &set(&f5, &[0, 1])).unwrap();
        assert!(r.skipped_zero);
        assert_eq!(r.set, a);
        assert!(ratio_set(&f5, &a, &set(&f5, &[0])).is_err());
        let f4 = FieldCtx::new(2, 1, 2).unwrap();
        let star = set(&f4, &[1, 2, 3]);
        assert_eq!(ratio_set(&f4, &star, &star).unwrap().set, star);
    }

    #[test]
    fn restricted_pairs_examples() {
        let f7 = prime_field(7);
        let u = set(&f7, &[1, 2, 3]);
        let v = set(&f7, &[1, 4]);
        let full = PairRelation::full(u.clone(), v.clone());
        assert_eq!(
            restricted_pairs(&f7, &full, PairOp::Ratio).unwrap(),
            ratio_set(&f7, &u, &v).unwrap().set
        );
        assert_eq!(
            restricted_pairs(&f7, &full, PairOp::Diff).unwrap(),
            diffset(&f7, &u, &v)
        );
        let empty = PairRelation::new(u.clone(), v.clone(), vec![]).unwrap();
        assert!(restricted_pairs(&f7, &empty, PairOp::Ratio)
            .unwrap()
            .is_empty());
        assert!(PairRelation::new(u.clone(), v.clone(), vec![(Elem(5), Elem(1))]).is_err());
        let with_zero = PairRelation::new(u, set(&f7, &[0]), vec![(Elem(1), Elem(0))]).unwrap();
        assert_eq!(
            restricted_pairs(&f7, &with_zero, PairOp::Ratio),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn bsg_relation_size_and_inclusion() {
        let ctx = FieldCtx::new(3, 1, 4).unwrap();
        let mut rng = crate::rng::seeded_generator(9);
        for _ in 0..20 {
            let a = ElemSet::from_elems(&ctx, (0..12).map(|_| Elem(rng.below(81) as u32)));
            let b = Elem(rng.below(81) as u32);
            let bsg = bsg_pair_relation(&ctx, &a, b).unwrap();
            let m = a.len();
            assert!(bsg.len() >= m * m - m);
            let f = Poly::new(vec![Elem::ZERO, b, Elem::ONE]);
            let fa = image_set(&ctx, &f, &a);
            let target = diffset(&ctx, &fa, &fa);
            let ratio = restricted_pairs(&ctx, &bsg, PairOp::Ratio).unwrap();
            assert!(ratio.is_subset(&target));
        }
        let f4 = FieldCtx::new(2, 1, 2).unwrap();
        assert!(bsg_pair_relation(&f4, &ElemSet::full(&f4), Elem::ZERO).is_err());
        let single = ElemSet::singleton(&ctx, Elem::ZERO);
        assert_eq!(bsg_pair_relation(&ctx, &single, Elem(1)).unwrap().len(), 1);
        assert!(bsg_pair_relation(&ctx, &single, Elem::ZERO)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dilate_examples() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let g = ctx.enumerate_subfield(1).unwrap();
        assert_eq!(dilate(&ctx, Elem::ONE, &g), g);
        assert_eq!(idx(&dilate(&ctx, Elem::ZERO, &g)), vec![0]);
        for a in ctx.nonzero_elements() {
            assert_eq!(dilate(&ctx, a, &g).len(), g.len());
        }
    }

    #[test]
    fn stats_examples() {
        let f7 = prime_field(7);
        let a = set(&f7, &[0, 1]);
        let s = set_stats(&f7, &a, &Poly::monomial(Elem::ONE, 2), DEFAULT_WORK_CAP).unwrap();
        let three_halves = BigRational::new(3.into(), 2.into());
        assert_eq!(s.alpha, three_halves);
        assert_eq!(s.beta, three_halves);
        assert_eq!(s.xi, three_halves);
        assert_eq!(s.gamma, BigRational::new(7.into(), 2.into()));

        let ctx = FieldCtx::new(3, 1, 4).unwrap();
        let g = ctx.enumerate_subfield(2).unwrap();
        let f = Poly::new(vec![Elem(1), Elem::ZERO, Elem::ONE]);
        let s = set_stats(&ctx, &g, &f, DEFAULT_WORK_CAP).unwrap();
        let one = BigRational::from_integer(1.into());
        assert_eq!(
            (s.alpha.clone(), s.beta.clone(), s.gamma.clone()),
            (one.clone(), one.clone(), one.clone())
        );
        assert!(s.xi <= one);
    }

    #[test]
    fn popular_difference_examples() {
        let f7 = prime_field(7);
        assert_eq!(
            popular_difference(&f7, &set(&f7, &[0, 1, 3])).unwrap(),
            (Elem(1), 1)
        );
        let ctx = FieldCtx::new(3, 1, 4).unwrap();
        let g = Elem(7);
        let ap = ElemSet::from_elems(&ctx, [Elem::ZERO, g, ctx.add(g, g)]);
        let (t, c) = popular_difference(&ctx, &ap).unwrap();
        // In characteristic 3 the AP {0, g, 2g} is a coset, so every nonzero
        // difference ±g occurs 3 times.
        assert_eq!(c, 3);
        assert!(t == g || t == ctx.neg(g));
        assert!(popular_difference(&f7, &set(&f7, &[2])).is_err());
        let f101 = prime_field(101);
        let ap = set(&f101, &[0, 4, 8, 12, 16, 20]);
        assert_eq!(popular_difference(&f101, &ap).unwrap(), (Elem(4), 5));
    }

    #[test]
    fn plunnecke_examples() {
        let f7 = prime_field(7);
        let rep = plunnecke_check(&f7, &set(&f7, &[0, 1]), DEFAULT_WORK_CAP).unwrap();
        assert_eq!(rep.lhs, 5);
        assert_eq!(rep.rhs, BigRational::new(81.into(), 8.into()));
        assert!(rep.holds);
        let ctx = FieldCtx::new(2, 1, 6).unwrap();
        let g = ctx.enumerate_subfield(3).unwrap();
        let rep = plunnecke_check(&ctx, &g, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(rep.lhs, 8);
        assert_eq!(rep.rhs, BigRational::from_integer(8.into()));
        assert!(rep.holds && !rep.fourth_power_variant_holds);
    }
}
