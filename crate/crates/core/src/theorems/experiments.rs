use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::exponents::{ExactExponentTable, ExponentRow};
use crate::fpoly::{image_set, orbit, Poly};
use crate::gf_tower::{Elem, FieldCtx};
use crate::klinalg::{
    affine_hull, enumerate_affine, subfield_condition_check, AffineSubspace, ConditionMode,
    ConditionReport, Echelon,
};
use crate::report::rational_string;
use crate::rng::seeded_generator;
use crate::setcalc::{diffset, eightfold, ratio_set, set_stats, signed_sumset, SetStats};

/// Requires 2 <= deg f < p.
fn expanding_degree(ctx: &FieldCtx, f: &Poly) -> Result<u32> {
    let d = f.degree();
    if d < 2 || d as u64 >= ctx.p() as u64 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= deg f < p, got deg f = {d}, p = {}",
            ctx.p()
        )));
    }
    Ok(d as u32)
}

fn exponent_row(d: u32) -> Result<ExponentRow<BigRational>> {
    let t = ExactExponentTable::exact(d.max(2))?;
    Ok(t.get(d.max(2)).expect("row exists").clone())
}

/// log(x) / log(base), undefined for base < 2 or x = 0.
fn log_ratio(x: f64, base: f64) -> Option<f64> {
    (base >= 2.0 && x > 0.0).then(|| x.ln() / base.ln())
}

/// CSV cell form of a polynomial: coefficient literals joined by ';'.
pub fn poly_cell(ctx: &FieldCtx, f: &Poly) -> String {
    f.to_literal(ctx).replace(',', ";")
}

/// `base;basis...` in literals.
pub fn subspace_cell(ctx: &FieldCtx, a: &AffineSubspace) -> String {
    std::iter::once(a.base)
        .chain(a.basis.iter().copied())
        .map(|e| ctx.encode(e))
        .collect::<Vec<_>>()
        .join(";")
}

/// A uniformly drawn set of `size` distinct elements.
pub fn random_set(ctx: &FieldCtx, size: usize, seed: u64) -> Result<ElemSet> {
    if size > ctx.order() as usize {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {size} distinct elements from a field of order {}",
            ctx.order()
        )));
    }
    let mut rng = seeded_generator(seed);
    let mut set = ElemSet::empty(ctx);
    while set.len() < size {
        set.insert(Elem(rng.below(ctx.order() as u64) as u32));
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub stats: SetStats,
    /// max(#eightfold, #(f(A) - f(A))).
    pub max: usize,
    pub measured_exponent: Option<f64>,
    pub condition: ConditionReport,
}

impl ExpansionReport {
    pub fn max_equals_m(&self) -> bool {
        self.max == self.stats.m
    }
}

/// Expansion of A under the eightfold sumset and f(A) - f(A), with the
/// subfield condition checked on A - A at exponent ϑ_d.
pub fn expansion_experiment(
    ctx: &FieldCtx,
    a: &ElemSet,
    f: &Poly,
    work_cap: u128,
) -> Result<ExpansionReport> {
    let d = expanding_degree(ctx, f)?;
    let stats = set_stats(ctx, a, f, work_cap)?;
    let max = stats.eightfold.max(stats.image_diff);
    let theta = exponent_row(d)?.theta;
    let condition = subfield_condition_check(
        ctx,
        &diffset(ctx, a, a),
        &theta,
        ConditionMode::Set {
            card: stats.m as u64,
        },
        work_cap,
    )?;
    Ok(ExpansionReport {
        measured_exponent: log_ratio(max as f64, stats.m as f64),
        max,
        stats,
        condition,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRow {
    pub field_spec: String,
    pub poly_literal: String,
    pub params: String,
    pub set_hex: String,
    pub m: usize,
    pub gamma_m: usize,
    pub xi_m: usize,
    pub measured_exponent: Option<f64>,
    pub condition_satisfied: bool,
    pub worst_d: u32,
    pub worst_count: usize,
    pub seed: Option<u64>,
}

impl ExpansionReport {
    pub fn to_row(&self, ctx: &FieldCtx, f: &Poly, a: &ElemSet, seed: Option<u64>) -> ExpansionRow {
        ExpansionRow {
            field_spec: ctx.spec(),
            poly_literal: poly_cell(ctx, f),
            params: format!("M={}", self.stats.m),
            set_hex: a.to_hex(),
            m: self.stats.m,
            gamma_m: self.stats.eightfold,
            xi_m: self.stats.image_diff,
            measured_exponent: self.measured_exponent,
            condition_satisfied: self.condition.satisfied,
            worst_d: self.condition.worst_d,
            worst_count: self.condition.worst_count,
            seed,
        }
    }
}

/// dim f(A) for an affine subspace A, with no restriction on f.
pub fn image_dim(ctx: &FieldCtx, a: &AffineSubspace, f: &Poly, work_cap: u128) -> Result<usize> {
    let pts = enumerate_affine(ctx, a, work_cap)?;
    Ok(affine_hull(ctx, &image_set(ctx, f, &pts))?.dim())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolydimReport {
    pub s: usize,
    pub dim_fa: usize,
    /// dim f(A) / s; None when s = 0.
    pub ratio: Option<BigRational>,
    pub condition: ConditionReport,
}

impl PolydimReport {
    pub fn degenerate(&self) -> bool {
        self.s == 0
    }
}

/// dim f(A) against dim A, with the condition on L at exponent ϑ_d.
pub fn polydim_experiment(
    ctx: &FieldCtx,
    a: &AffineSubspace,
    f: &Poly,
    work_cap: u128,
) -> Result<PolydimReport> {
    let d = expanding_degree(ctx, f)?;
    let s = a.dim();
    let dim_fa = image_dim(ctx, a, f, work_cap)?;
    let l = enumerate_affine(ctx, &a.linear_part(), work_cap)?;
    let condition = subfield_condition_check(
        ctx,
        &l,
        &exponent_row(d)?.theta,
        ConditionMode::Subspace { s: s as u32 },
        work_cap,
    )?;
    Ok(PolydimReport {
        s,
        dim_fa,
        ratio: (s > 0).then(|| BigRational::new(BigInt::from(dim_fa), BigInt::from(s))),
        condition,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PolydimRow {
    pub field_spec: String,
    pub poly_literal: String,
    pub params: String,
    pub s: usize,
    pub dim_fa: usize,
    pub ratio: String,
    pub condition_satisfied: bool,
    pub seed: Option<u64>,
}

impl PolydimReport {
    pub fn to_row(
        &self,
        ctx: &FieldCtx,
        f: &Poly,
        a: &AffineSubspace,
        seed: Option<u64>,
    ) -> PolydimRow {
        PolydimRow {
            field_spec: ctx.spec(),
            poly_literal: poly_cell(ctx, f),
            params: subspace_cell(ctx, a),
            s: self.s,
            dim_fa: self.dim_fa,
            ratio: self
                .ratio
                .as_ref()
                .map(rational_string)
                .unwrap_or_else(|| "degenerate".into()),
            condition_satisfied: self.condition.satisfied,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionReport {
    pub s: usize,
    pub q_s: u64,
    pub intersection: ElemSet,
    /// log_q #S / s.
    pub measured_exponent: Option<f64>,
    /// s(1 - κ_d).
    pub bound_exponent: BigRational,
    /// One least-index preimage in A per point of S.
    pub preimage: ElemSet,
    pub condition: ConditionReport,
    /// Whether deg f < p, the range the bound is stated for.
    pub applicable: bool,
}

/// S = A ∩ f(A), with the preimage set A' and the inclusions
/// A'+A'+A'+A'-A'-A'-A'-A' ⊆ L and f(A') - f(A') ⊆ S - S ⊆ L checked exactly.
pub fn intersection_experiment(
    ctx: &FieldCtx,
    a: &AffineSubspace,
    f: &Poly,
    work_cap: u128,
) -> Result<IntersectionReport> {
    let d = f.degree() as u32;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need deg f >= 2, got {d}")));
    }
    let row = exponent_row(d)?;
    let s = a.dim();
    let pts = enumerate_affine(ctx, a, work_cap)?;
    let l = enumerate_affine(ctx, &a.linear_part(), work_cap)?;
    let mut preimage_of = vec![u32::MAX; ctx.order() as usize];
    // Ascending iteration keeps the least-index preimage.
    for x in pts.iter() {
        let y = f.eval(ctx, x);
        if pts.contains(y) && preimage_of[y.index()] == u32::MAX {
            preimage_of[y.index()] = x.0;
        }
    }
    let intersection = ElemSet::from_elems(
        ctx,
        (0..ctx.order())
            .filter(|&y| preimage_of[y as usize] != u32::MAX)
            .map(Elem),
    );
    let preimage = ElemSet::from_elems(
        ctx,
        intersection.iter().map(|y| Elem(preimage_of[y.index()])),
    );
    if !preimage.is_empty() {
        let eight = eightfold(ctx, &preimage, work_cap)?;
        let fa = image_set(ctx, f, &preimage);
        let fa_diff = diffset(ctx, &fa, &fa);
        let s_diff = diffset(ctx, &intersection, &intersection);
        if !eight.is_subset(&l) || !fa_diff.is_subset(&s_diff) || !s_diff.is_subset(&l) {
            return Err(Error::Invariant(
                "preimage set violates the subspace inclusions".into(),
            ));
        }
    }
    let condition = subfield_condition_check(
        ctx,
        &l,
        &row.rho,
        ConditionMode::Subspace { s: s as u32 },
        work_cap,
    )?;
    let q_s = (ctx.q() as u64).pow(s as u32);
    let card = intersection.len() as f64;
    Ok(IntersectionReport {
        s,
        q_s,
        measured_exponent: (s > 0 && card > 0.0)
            .then(|| card.ln() / (ctx.q() as f64).ln() / s as f64),
        bound_exponent: BigRational::from_integer(BigInt::from(s))
            * (BigRational::one() - row.kappa),
        intersection,
        preimage,
        condition,
        applicable: (d as u64) < ctx.p() as u64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionRow {
    pub field_spec: String,
    pub poly_literal: String,
    pub params: String,
    pub s: usize,
    pub card_intersection: usize,
    pub preimage_size: usize,
    pub measured_exponent: Option<f64>,
    pub bound_exponent: String,
    pub inclusions_hold: bool,
    pub applicable: bool,
    pub condition_satisfied: bool,
    pub seed: Option<u64>,
}

impl IntersectionReport {
    pub fn to_row(
        &self,
        ctx: &FieldCtx,
        f: &Poly,
        a: &AffineSubspace,
        seed: Option<u64>,
    ) -> IntersectionRow {
        IntersectionRow {
            field_spec: ctx.spec(),
            poly_literal: poly_cell(ctx, f),
            params: subspace_cell(ctx, a),
            s: self.s,
            card_intersection: self.intersection.len(),
            preimage_size: self.preimage.len(),
            measured_exponent: self.measured_exponent,
            bound_exponent: rational_string(&self.bound_exponent),
            inclusions_hold: true,
            applicable: self.applicable,
            condition_satisfied: self.condition.satisfied,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRunReport {
    pub orbit_size: usize,
    /// Largest N with f^(n)(u) ∈ A for all n < N.
    pub run_from_zero: usize,
    /// Longest block of consecutive orbit positions in A within [0, T_u).
    pub longest_run: usize,
    pub q_s: u64,
    /// log(q^s) / log N for the run from zero; None when N < 2.
    pub exponent: Option<f64>,
    /// Condition on L at exponent ρ_d, when 2 <= deg f.
    pub condition: Option<ConditionReport>,
}

pub fn orbit_run_experiment(
    ctx: &FieldCtx,
    f: &Poly,
    u: Elem,
    a: &AffineSubspace,
    work_cap: u128,
) -> Result<OrbitRunReport> {
    let mut ech = Echelon::new(ctx);
    for &v in &a.basis {
        ech.insert(v);
    }
    let orb = orbit(ctx, f, u);
    let inside: Vec<bool> = orb
        .elements
        .iter()
        .map(|&x| ech.contains(ctx.sub(x, a.base)))
        .collect();
    let run_from_zero = inside.iter().take_while(|&&b| b).count();
    let mut longest = 0;
    let mut cur = 0;
    for &b in &inside {
        cur = if b { cur + 1 } else { 0 };
        longest = longest.max(cur);
    }
    let s = a.dim();
    let q_s = (ctx.q() as u64).pow(s as u32);
    let condition = if f.degree() >= 2 {
        let l = enumerate_affine(ctx, &a.linear_part(), work_cap)?;
        Some(subfield_condition_check(
            ctx,
            &l,
            &exponent_row(f.degree() as u32)?.rho,
            ConditionMode::Subspace { s: s as u32 },
            work_cap,
        )?)
    } else {
        None
    };
    Ok(OrbitRunReport {
        orbit_size: orb.size(),
        run_from_zero,
        longest_run: longest,
        q_s,
        exponent: log_ratio(q_s as f64, run_from_zero as f64),
        condition,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRunRow {
    pub field_spec: String,
    pub poly_literal: String,
    pub params: String,
    pub u: String,
    pub orbit_size: usize,
    pub run_from_zero: usize,
    pub longest_run: usize,
    pub q_s: u64,
    pub exponent: Option<f64>,
    pub condition_satisfied: Option<bool>,
    pub seed: Option<u64>,
}

impl OrbitRunReport {
    pub fn to_row(
        &self,
        ctx: &FieldCtx,
        f: &Poly,
        u: Elem,
        a: &AffineSubspace,
        seed: Option<u64>,
    ) -> OrbitRunRow {
        OrbitRunRow {
            field_spec: ctx.spec(),
            poly_literal: poly_cell(ctx, f),
            params: subspace_cell(ctx, a),
            u: ctx.encode(u),
            orbit_size: self.orbit_size,
            run_from_zero: self.run_from_zero,
            longest_run: self.longest_run,
            q_s: self.q_s,
            exponent: self.exponent,
            condition_satisfied: self.condition.as_ref().map(|c| c.satisfied),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpGenReport {
    pub card: usize,
    pub ratio_card: usize,
    pub quad_sum_card: usize,
    /// (#(A:A))^4 (#(4A))^5.
    pub lhs1: BigUint,
    /// (#(A:A))^5 (#(4A))^4.
    pub lhs2: BigUint,
    /// (#A)^10.
    pub rhs: BigUint,
    /// #(A ∩ aG) <= max{(#G)^(1/2), #A/8}.
    pub condition: ConditionReport,
}

pub fn sp_gen_measure(ctx: &FieldCtx, a: &ElemSet, work_cap: u128) -> Result<SpGenReport> {
    let ratio = ratio_set(ctx, a, a)?.set.len();
    let quad = signed_sumset(ctx, a, 4, 0, work_cap)?.len();
    let card = a.len();
    let r = BigUint::from(ratio);
    let qd = BigUint::from(quad);
    let condition = subfield_condition_check(
        ctx,
        a,
        &BigRational::from_integer(BigInt::from(0)),
        ConditionMode::Set { card: card as u64 },
        work_cap,
    )?;
    Ok(SpGenReport {
        card,
        ratio_card: ratio,
        quad_sum_card: quad,
        lhs1: r.pow(4) * qd.pow(5),
        lhs2: r.pow(5) * qd.pow(4),
        rhs: BigUint::from(card).pow(10),
        condition,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpGenRow {
    pub field_spec: String,
    pub params: String,
    pub set_hex: String,
    pub card: usize,
    pub ratio_card: usize,
    pub quad_sum_card: usize,
    pub lhs1: String,
    pub lhs2: String,
    pub rhs: String,
    pub condition_satisfied: bool,
    pub seed: Option<u64>,
}

impl SpGenReport {
    pub fn to_row(&self, ctx: &FieldCtx, a: &ElemSet, seed: Option<u64>) -> SpGenRow {
        SpGenRow {
            field_spec: ctx.spec(),
            params: format!("M={}", self.card),
            set_hex: a.to_hex(),
            card: self.card,
            ratio_card: self.ratio_card,
            quad_sum_card: self.quad_sum_card,
            lhs1: self.lhs1.to_string(),
            lhs2: self.lhs2.to_string(),
            rhs: self.rhs.to_string(),
            condition_satisfied: self.condition.satisfied,
            seed,
        }
    }
}

/// Aggregate of a measured column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

pub fn summarize(values: impl IntoIterator<Item = f64>) -> Summary {
    let v: Vec<f64> = values.into_iter().collect();
    let count = v.len();
    Summary {
        count,
        min: v.iter().copied().reduce(f64::min),
        max: v.iter().copied().reduce(f64::max),
        mean: (count > 0).then(|| v.iter().sum::<f64>() / count as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klinalg::random_affine;
    use crate::setcalc::DEFAULT_WORK_CAP;

    const CAP: u128 = DEFAULT_WORK_CAP;

    #[test]
    fn expansion_on_prime_field() {
        let ctx = FieldCtx::with_options(
            101,
            1,
            1,
            crate::gf_tower::FieldOptions {
                allow_trivial_extension: true,
                ..Default::default()
            },
        )
        .unwrap();
        let a = ElemSet::from_elems(&ctx, [Elem(0), Elem(1)]);
        let r = expansion_experiment(&ctx, &a, &Poly::monomial(Elem::ONE, 2), CAP).unwrap();
        assert_eq!(r.stats.eightfold, 9);
        assert_eq!(r.max, 9);
        assert!((r.measured_exponent.unwrap() - 9f64.ln() / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn expansion_subfield_obstruction() {
        let ctx = FieldCtx::new(5, 1, 4).unwrap();
        let g = ctx.enumerate_subfield(2).unwrap();
        let f = Poly::new(vec![Elem(2), Elem(1), Elem(3)]);
        let r = expansion_experiment(&ctx, &g, &f, CAP).unwrap();
        assert!(r.max_equals_m());
        assert_eq!(r.measured_exponent, Some(1.0));
        assert!(!r.condition.satisfied);
    }

    #[test]
    fn expansion_rejects_degree() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let a = ElemSet::full(&ctx);
        assert!(expansion_experiment(&ctx, &a, &Poly::monomial(Elem::ONE, 2), CAP).is_err());
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        assert!(expansion_experiment(&ctx, &a, &Poly::x(), CAP).is_err());
    }

    #[test]
    fn polydim_examples() {
        let ctx = FieldCtx::new(3, 2, 3).unwrap();
        let k_line = AffineSubspace::new(&ctx, Elem(4), vec![Elem::ONE]).unwrap();
        let f = Poly::new(vec![Elem(1), Elem(0), Elem(5)]);
        let r = polydim_experiment(&ctx, &k_line, &f, CAP).unwrap();
        assert_eq!((r.s, r.dim_fa), (1, 1));
        assert_eq!(image_dim(&ctx, &k_line, &Poly::x(), CAP).unwrap(), 1);
        let full = random_affine(&ctx, 3, 5).unwrap();
        let r = polydim_experiment(&ctx, &full, &f, CAP).unwrap();
        assert!(r.dim_fa <= 3);
        assert!(!r.condition.satisfied);
        let pt = AffineSubspace::point(Elem(7));
        assert!(polydim_experiment(&ctx, &pt, &f, CAP).unwrap().degenerate());
    }

    #[test]
    fn intersection_examples() {
        let ctx = FieldCtx::new(3, 2, 2).unwrap();
        let k = AffineSubspace::new(&ctx, Elem(3), vec![Elem::ONE]).unwrap();
        let f = Poly::new(vec![Elem(1), Elem(2), Elem(1)]);
        let r = intersection_experiment(&ctx, &k, &f, CAP).unwrap();
        assert_eq!(
            r.intersection.len(),
            image_set(&ctx, &f, &ctx.enumerate_subfield(2).unwrap()).len()
        );
        assert!(!r.condition.satisfied);
        let zero = AffineSubspace::point(Elem::ZERO);
        let r = intersection_experiment(&ctx, &zero, &Poly::monomial(Elem::ONE, 2), CAP).unwrap();
        assert!(r.intersection.len() <= 1);
    }

    #[test]
    fn intersection_random_inclusions() {
        let ctx = FieldCtx::new(2, 2, 4).unwrap();
        let y = ctx.tower_generator();
        let f = Poly::new(vec![Elem::ZERO, y, Elem::ONE]);
        for seed in 0..10 {
            let a = random_affine(&ctx, 2, seed).unwrap();
            let r = intersection_experiment(&ctx, &a, &f, CAP).unwrap();
            assert!(!r.applicable);
            assert_eq!(r.preimage.len(), r.intersection.len());
        }
        assert!(intersection_experiment(
            &ctx,
            &random_affine(&ctx, 2, 1).unwrap(),
            &Poly::x(),
            CAP
        )
        .is_err());
        let ctx = FieldCtx::new(3, 1, 5).unwrap();
        let y = ctx.tower_generator();
        let f = Poly::new(vec![Elem::ZERO, y, Elem::ONE]);
        for seed in 0..10 {
            let a = random_affine(&ctx, 3, seed).unwrap();
            let r = intersection_experiment(&ctx, &a, &f, CAP).unwrap();
            assert!(r.applicable);
            assert_eq!(r.preimage.len(), r.intersection.len());
        }
    }

    #[test]
    fn orbit_run_examples() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let omega = ctx.tower_generator();
        let f = Poly::new(vec![omega, Elem::ZERO, Elem::ONE]);
        let a = AffineSubspace::new(&ctx, Elem::ZERO, vec![omega]).unwrap();
        let r = orbit_run_experiment(&ctx, &f, Elem::ZERO, &a, CAP).unwrap();
        assert_eq!(r.run_from_zero, 2);
        assert_eq!(r.orbit_size, 4);
        let full = AffineSubspace::new(&ctx, Elem::ZERO, vec![Elem::ONE, omega]).unwrap();
        let r = orbit_run_experiment(&ctx, &f, Elem::ZERO, &full, CAP).unwrap();
        assert_eq!(r.run_from_zero, r.orbit_size);
        let pt = AffineSubspace::point(Elem::ONE);
        let r = orbit_run_experiment(&ctx, &f, Elem::ZERO, &pt, CAP).unwrap();
        assert_eq!(r.run_from_zero, 0);
        assert_eq!(r.exponent, None);
    }

    #[test]
    fn sp_gen_examples() {
        let ctx = FieldCtx::new(2, 1, 6).unwrap();
        let g = ctx.enumerate_subfield(3).unwrap();
        let r = sp_gen_measure(&ctx, &g, CAP).unwrap();
        assert_eq!(r.quad_sum_card, 8);
        assert_eq!(r.ratio_card, 8);
        assert!(r.lhs1.max(r.lhs2) < r.rhs);
        assert!(!r.condition.satisfied);
        let a = random_set(&ctx, 10, 3).unwrap();
        let r = sp_gen_measure(&ctx, &a, CAP).unwrap();
        assert!(r.ratio_card >= 1 && r.quad_sum_card >= r.card);
    }

    #[test]
    fn summary_of_values() {
        let s = summarize([1.0, 3.0]);
        assert_eq!(
            (s.count, s.min, s.max, s.mean),
            (2, Some(1.0), Some(3.0), Some(2.0))
        );
        assert_eq!(summarize([]).mean, None);
    }
}
