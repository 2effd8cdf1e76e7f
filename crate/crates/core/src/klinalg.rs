//! Linear algebra over K inside F: coordinates, affine hulls and dimension,
//! subspace enumeration, and the subfield-intersection condition.
//!
//! Elements of K are the indices below q, and F-arithmetic restricted to them
//! is K-arithmetic, so row reduction works directly on [`Elem`] values.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::exponents::ln_bigint;
use crate::gf_tower::{Elem, FieldCtx};
use crate::report::rational_string;
use crate::rng::seeded_generator;

/// A = base + span_K(basis), with a K-independent basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    pub base: Elem,
    pub basis: Vec<Elem>,
}

impl AffineSubspace {
    pub fn point(base: Elem) -> Self {
        Self {
            base,
            basis: Vec::new(),
        }
    }

    /// Validates independence of the basis.
    pub fn new(ctx: &FieldCtx, base: Elem, basis: Vec<Elem>) -> Result<Self> {
        let mut ech = Echelon::new(ctx);
        for &v in &basis {
            if !ech.insert(v) {
                return Err(Error::InvalidArgument(
                    "basis vectors are not K-linearly independent".into(),
                ));
            }
        }
        Ok(Self { base, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The linear part L, as a subspace through 0.
    pub fn linear_part(&self) -> AffineSubspace {
        AffineSubspace {
            base: Elem::ZERO,
            basis: self.basis.clone(),
        }
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> String {
        let v = SubspaceJson {
            base: ctx.encode(self.base),
            basis: self.basis.iter().map(|&b| ctx.encode(b)).collect(),
        };
        serde_json::to_string(&v).expect("subspace serializes")
    }

    pub fn from_json(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let v: SubspaceJson =
            serde_json::from_str(text).map_err(|e| Error::literal(text, e.to_string()))?;
        let base = ctx.decode(&v.base)?;
        let basis = v
            .basis
            .iter()
            .map(|b| ctx.decode(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, base, basis)
    }
}

#[derive(Serialize, serde::Deserialize)]
struct SubspaceJson {
    base: String,
    basis: Vec<String>,
}

/// Incremental reduced row echelon form over K on r-coordinate rows.
/// Pivots are chosen at the least nonzero column.
pub struct Echelon<'a> {
    ctx: &'a FieldCtx,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        Self {
            ctx,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Elem>) -> Vec<Elem> {
        let ctx = self.ctx;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = ctx.sub(*x, ctx.mul(c, y));
            }
        }
        v
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.reduce(self.ctx.coords(e)).iter().all(|c| c.is_zero())
    }

    /// Adds a vector; returns false if it was already in the span.
    pub fn insert(&mut self, e: Elem) -> bool {
        let ctx = self.ctx;
        let v = self.reduce(ctx.coords(e));
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(v[pc]).expect("pivot is nonzero");
        let v: Vec<Elem> = v.iter().map(|&c| ctx.mul(c, inv)).collect();
        for row in &mut self.rows {
            let c = row[pc];
            if !c.is_zero() {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = ctx.sub(*x, ctx.mul(c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, v);
        self.pivots.insert(at, pc);
        true
    }

    /// Basis in reduced echelon form, ordered by pivot column.
    pub fn basis(&self) -> Vec<Elem> {
        self.rows.iter().map(|r| self.ctx.from_coords(r)).collect()
    }
}

/// K-coordinates in the basis 1, y, ..., y^(r-1).
pub fn coords(ctx: &FieldCtx, a: Elem) -> Vec<Elem> {
    ctx.coords(a)
}

/// Smallest K-affine subspace containing `s`; base is the least element.
pub fn affine_hull(ctx: &FieldCtx, s: &ElemSet) -> Result<AffineSubspace> {
    let base = s
        .min()
        .ok_or_else(|| Error::InvalidArgument("affine hull of the empty set".into()))?;
    let mut ech = Echelon::new(ctx);
    for x in s.iter() {
        if ech.rank() == ctx.r() as usize {
            break;
        }
        ech.insert(ctx.sub(x, base));
    }
    Ok(AffineSubspace {
        base,
        basis: ech.basis(),
    })
}

/// dim S: dimension of the affine hull.
pub fn set_dim(ctx: &FieldCtx, s: &ElemSet) -> Result<usize> {
    Ok(affine_hull(ctx, s)?.dim())
}

/// All q^s points of the subspace.
pub fn enumerate_affine(ctx: &FieldCtx, a: &AffineSubspace, work_cap: u128) -> Result<ElemSet> {
    let size = (ctx.q() as u128)
        .checked_pow(a.dim() as u32)
        .unwrap_or(u128::MAX);
    if size > work_cap || size > ctx.order() as u128 {
        return Err(Error::WorkCap {
            work: size,
            cap: work_cap,
        });
    }
    let mut points = vec![a.base];
    for &v in &a.basis {
        let multiples: Vec<Elem> = (0..ctx.q()).map(|c| ctx.mul(ctx.from_k(c), v)).collect();
        points = points
            .iter()
            .flat_map(|&p| multiples.iter().map(move |&m| (p, m)))
            .map(|(p, m)| ctx.add(p, m))
            .collect();
    }
    let set = ElemSet::from_elems(ctx, points);
    if set.len() as u128 != size {
        return Err(Error::Invariant(format!(
            "subspace of dimension {} enumerated {} points",
            a.dim(),
            set.len()
        )));
    }
    Ok(set)
}

/// Deterministic sample: base first, then candidate vectors until rank s.
pub fn random_affine(ctx: &FieldCtx, s: usize, seed: u64) -> Result<AffineSubspace> {
    if s > ctx.r() as usize {
        return Err(Error::InvalidArgument(format!(
            "dimension {s} exceeds r = {}",
            ctx.r()
        )));
    }
    let mut rng = seeded_generator(seed);
    let n = ctx.order() as u64;
    let base = Elem(rng.below(n) as u32);
    let mut ech = Echelon::new(ctx);
    let mut basis = Vec::with_capacity(s);
    while basis.len() < s {
        let v = Elem(rng.below(n) as u32);
        if ech.insert(v) {
            basis.push(v);
        }
    }
    Ok(AffineSubspace { base, basis })
}

/// Every linear subspace (through 0) of dimension at most `max_dim`, each
/// given by its reduced echelon basis.
pub fn enumerate_linear_subspaces(ctx: &FieldCtx, max_dim: usize) -> Vec<AffineSubspace> {
    let r = ctx.r() as usize;
    let q = ctx.q();
    let mut out = Vec::new();
    for s in 0..=max_dim.min(r) {
        for pivots in combinations(r, s) {
            // Free slots: (row i, column j) with j > pivots[i] and j not a pivot.
            let free: Vec<(usize, usize)> = (0..s)
                .flat_map(|i| {
                    let pivots = &pivots;
                    (pivots[i] + 1..r)
                        .filter(move |j| !pivots.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let total = (q as u64).pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows = vec![vec![Elem::ZERO; r]; s];
                for (i, &c) in pivots.iter().enumerate() {
                    rows[i][c] = Elem::ONE;
                }
                for &(i, j) in &free {
                    rows[i][j] = ctx.from_k((code % q as u64) as u32);
                    code /= q as u64;
                }
                out.push(AffineSubspace {
                    base: Elem::ZERO,
                    basis: rows.iter().map(|row| ctx.from_coords(row)).collect(),
                });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Which cardinality the second threshold term is raised to a power of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionMode {
    /// (#A)^(1-e) / 8 for a set A of the given size.
    Set { card: u64 },
    /// q^(s(1-e)) / 8 for a subspace of dimension s.
    Subspace { s: u32 },
}

impl ConditionMode {
    fn base(self, ctx: &FieldCtx) -> BigUint {
        match self {
            ConditionMode::Set { card } => BigUint::from(card),
            ConditionMode::Subspace { s } => BigUint::from(ctx.q()).pow(s),
        }
    }
}

/// Outcome of checking #(L ∩ aG) <= max{(#G)^(1/2), B^(1-e)/8} over every
/// subfield G and every a ∈ F*.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub worst_d: u32,
    pub worst_a: Elem,
    pub worst_count: usize,
    /// The threshold at (worst_d, worst_a), for display.
    pub threshold: f64,
    pub satisfied: bool,
    /// The violated pair with least (d, a), if any.
    pub violation: Option<(u32, Elem, usize)>,
    pub exponent: BigRational,
    pub mode: ConditionMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionRow {
    pub worst_d: u32,
    pub worst_a: String,
    pub worst_count: usize,
    pub threshold: f64,
    pub satisfied: bool,
    pub exponent: String,
}

impl ConditionReport {
    pub fn to_row(&self, ctx: &FieldCtx) -> ConditionRow {
        ConditionRow {
            worst_d: self.worst_d,
            worst_a: ctx.encode(self.worst_a),
            worst_count: self.worst_count,
            threshold: self.threshold,
            satisfied: self.satisfied,
            exponent: rational_string(&self.exponent),
        }
    }
}

/// count <= base^(1-e) / 8, decided exactly when the integer powers are of
/// manageable size and by logarithms otherwise.
pub fn within_power_bound(count: u64, base: &BigUint, exponent: &BigRational) -> bool {
    let one = BigRational::one();
    let power = &one - exponent;
    if power.is_negative() {
        // base >= 1, so base^power <= 1 < 8 * count unless count == 0.
        return count == 0 || base.is_zero();
    }
    let num = power.numer().to_biguint().expect("nonnegative");
    let den = power.denom().to_biguint().expect("positive");
    let lhs_base = BigUint::from(count) * 8u32;
    // (8 count)^den <= base^num
    let lhs_bits = lhs_base.bits() as f64 * den.to_f64().unwrap_or(f64::INFINITY);
    let rhs_bits = base.bits() as f64 * num.to_f64().unwrap_or(f64::INFINITY);
    if lhs_bits.max(rhs_bits) <= (1u64 << 22) as f64 {
        let den = den.to_u32().expect("small");
        let num = num.to_u32().expect("small");
        return lhs_base.pow(den) <= base.pow(num);
    }
    let lhs = ln_bigint(&BigInt::from(lhs_base));
    let rhs = power.to_f64().unwrap_or(0.0) * ln_bigint(&BigInt::from(base.clone()));
    // A tie at this precision can only be an exact equality of integer
    // powers, which satisfies the inequality.
    lhs <= rhs + 1e-12 * rhs.abs().max(1.0)
}

fn threshold_value(g_size: u64, base: &BigUint, exponent: &BigRational) -> f64 {
    let power = (BigRational::one() - exponent).to_f64().unwrap_or(0.0);
    let second = (power * ln_bigint(&BigInt::from(base.clone()))).exp() / 8.0;
    (g_size as f64).sqrt().max(second)
}

/// Exact maximisation of #(L ∩ aG) over all subfields G and a ∈ F*.
///
/// For a ≠ 0 the sets aG \ {0} are the cosets of G* in F*, and x, x' share a
/// coset iff x^(#G-1) = x'^(#G-1), so one pass over L counts every coset.
pub fn subfield_condition_check(
    ctx: &FieldCtx,
    l: &ElemSet,
    exponent: &BigRational,
    mode: ConditionMode,
    work_cap: u128,
) -> Result<ConditionReport> {
    let divisors = ctx.divisors();
    let work =
        (l.len() as u128 + ctx.order() as u128) * divisors.len() as u128 * ctx.degree() as u128;
    if work > work_cap {
        return Err(Error::WorkCap {
            work,
            cap: work_cap,
        });
    }
    let base = mode.base(ctx);
    let zero_in = usize::from(l.contains(Elem::ZERO));
    let mut worst: Option<(usize, u32, Elem)> = None;
    let mut violation = None;
    for &d in &divisors {
        let g_size = (ctx.p() as u64).pow(d);
        let key_exp = g_size - 1;
        let mut counts: HashMap<Elem, usize> = HashMap::new();
        for x in l.iter().filter(|x| !x.is_zero()) {
            *counts.entry(ctx.pow(x, key_exp)).or_default() += 1;
        }
        let (best_key, best) = counts
            .iter()
            .map(|(&k, &c)| (k, c))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .unwrap_or((Elem::ONE, 0));
        let count = best + zero_in;
        // Least-index a in the winning coset.
        let a = if best == 0 {
            Elem::ONE
        } else {
            ctx.nonzero_elements()
                .find(|&a| ctx.pow(a, key_exp) == best_key)
                .expect("coset is nonempty")
        };
        let ok = (count as u128) * (count as u128) <= g_size as u128
            || within_power_bound(count as u64, &base, exponent);
        if !ok && violation.is_none() {
            violation = Some((d, a, count));
        }
        let better = match worst {
            None => true,
            Some((c, _, _)) => count > c,
        };
        if better {
            worst = Some((count, d, a));
        }
    }
    let (worst_count, worst_d, worst_a) = worst.expect("at least one divisor");
    Ok(ConditionReport {
        worst_d,
        worst_a,
        worst_count,
        threshold: threshold_value((ctx.p() as u64).pow(worst_d), &base, exponent),
        satisfied: violation.is_none(),
        violation,
        exponent: exponent.clone(),
        mode,
    })
}

/// #(L ∩ aG) recomputed directly with the Frobenius membership test.
pub fn recount_intersection(ctx: &FieldCtx, l: &ElemSet, d: u32, a: Elem) -> Result<usize> {
    let inv = ctx.inv(a)?;
    let mut n = 0;
    for x in l.iter() {
        if ctx.subfield_membership(ctx.mul(x, inv), d)? {
            n += 1;
        }
    }
    Ok(n)
}
