use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::exponents::{freq_threshold, LogBase};
use crate::fpoly::{orbit_with, OrbitSummary, Poly, DEFAULT_DEGREE_CAP};
use crate::gf_tower::{Elem, FieldCtx};

/// Hit positions n_1 < ... < n_M and the counts A(h) of consecutive gaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapHistogram {
    pub hits: Vec<u64>,
    pub counts: BTreeMap<u64, u64>,
}

impl GapHistogram {
    /// Builds the histogram and checks Σ A(h) = M - 1 and
    /// Σ h A(h) = n_M - n_1 <= N.
    pub fn new(hits: Vec<u64>, n: u64) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for w in hits.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Invariant("hit positions are not increasing".into()));
            }
            *counts.entry(w[1] - w[0]).or_insert(0u64) += 1;
        }
        let hist = Self { hits, counts };
        hist.check(n)?;
        Ok(hist)
    }

    fn check(&self, n: u64) -> Result<()> {
        let m = self.hits.len() as u64;
        let total: u64 = self.counts.values().sum();
        let weighted: u64 = self.counts.iter().map(|(h, a)| h * a).sum();
        let span = match (self.hits.first(), self.hits.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        };
        if total != m.saturating_sub(1) || weighted != span || span > n {
            return Err(Error::Invariant(format!(
                "gap histogram identities fail: M = {m}, sum A = {total}, sum hA = {weighted}, span = {span}, N = {n}"
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.hits.len()
    }

    pub fn get(&self, h: u64) -> u64 {
        self.counts.get(&h).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMethod {
    /// f^(k) composed out and its coefficients tested.
    Symbolic,
    /// f^(k) maps more than d^k points of the subfield into it.
    Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub n: u64,
    pub hits_count: usize,
    pub threshold: f64,
    pub threshold_met: bool,
    pub found_k: Option<u32>,
    pub verification: Option<VerificationMethod>,
    /// T_u; the frequency guarantee only covers N <= T_u.
    pub orbit_size: usize,
    pub within_orbit: bool,
    pub histogram: GapHistogram,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    pub degree_cap: u64,
    pub log_base: LogBase,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            degree_cap: DEFAULT_DEGREE_CAP,
            log_base: LogBase::Natural,
        }
    }
}

/// Detector for one (f, subfield) pair. Verdicts on f^(k) are memoized, so
/// reusing a detector across starting points and lengths is cheap.
pub struct Detector<'a> {
    ctx: &'a FieldCtx,
    f: Poly,
    d_sub: u32,
    subfield: ElemSet,
    table: Vec<Elem>,
    opts: DetectOptions,
    verdicts: HashMap<u32, Option<VerificationMethod>>,
}

impl<'a> Detector<'a> {
    pub fn new(ctx: &'a FieldCtx, f: &Poly, d_sub: u32, opts: DetectOptions) -> Result<Self> {
        ctx.check_divisor(d_sub)?;
        if d_sub == ctx.degree() && d_sub != ctx.m() {
            return Err(Error::InvalidArgument(format!(
                "subfield degree {d_sub} is the whole field"
            )));
        }
        Ok(Self {
            ctx,
            f: f.clone(),
            d_sub,
            subfield: ctx.enumerate_subfield(d_sub)?,
            table: f.value_table(ctx),
            opts,
            verdicts: HashMap::new(),
        })
    }

    pub fn subfield(&self) -> &ElemSet {
        &self.subfield
    }

    pub fn orbit(&self, u: Elem) -> OrbitSummary {
        orbit_with(self.ctx.order(), u, |x| self.table[x.index()])
    }

    pub fn detect(&mut self, u: Elem, n: u64) -> Result<DetectionResult> {
        let orbit = self.orbit(u);
        self.detect_on(&orbit, n)
    }

    /// Runs the detector on a precomputed orbit of u.
    pub fn detect_on(&mut self, orbit: &OrbitSummary, n: u64) -> Result<DetectionResult> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "N must be at least 2, got {n}"
            )));
        }
        let hits: Vec<u64> = (0..n)
            .filter(|&i| self.subfield.contains(orbit.element_at(i)))
            .collect();
        let histogram = GapHistogram::new(hits, n)?;
        let threshold = freq_threshold(self.f.degree().max(1) as u32, n, self.opts.log_base)?;
        let hits_count = histogram.m();
        let mut found = None;
        for k in self.candidates(&histogram) {
            if let Some(method) = self.verify(k)? {
                found = Some((k, method));
                break;
            }
        }
        Ok(DetectionResult {
            n,
            hits_count,
            threshold,
            threshold_met: hits_count as f64 >= threshold,
            found_k: found.map(|f| f.0),
            verification: found.map(|f| f.1),
            orbit_size: orbit.size(),
            within_orbit: n <= orbit.size() as u64,
            histogram,
        })
    }

    /// Gaps k with A(k) > d^k, by A(k) descending then k ascending.
    fn candidates(&self, hist: &GapHistogram) -> Vec<u32> {
        let d = self.f.degree() as u128;
        let mut ks: Vec<(u64, u64)> = hist
            .counts
            .iter()
            .filter(|&(&k, &a)| {
                u32::try_from(k)
                    .ok()
                    .and_then(|k| d.checked_pow(k))
                    .is_some_and(|dk| (a as u128) > dk)
            })
            .map(|(&k, &a)| (k, a))
            .collect();
        ks.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        ks.into_iter().map(|(k, _)| k as u32).collect()
    }

    /// Certifies f^(k) ∈ K_sub[X], or returns None if that cannot be shown.
    pub fn verify(&mut self, k: u32) -> Result<Option<VerificationMethod>> {
        if let Some(&v) = self.verdicts.get(&k) {
            return Ok(v);
        }
        let v = self.verify_uncached(k)?;
        self.verdicts.insert(k, v);
        Ok(v)
    }

    fn verify_uncached(&self, k: u32) -> Result<Option<VerificationMethod>> {
        let ctx = self.ctx;
        let dk = (self.f.degree() as u64).checked_pow(k).unwrap_or(u64::MAX);
        if dk <= self.opts.degree_cap {
            let it = self.f.iterate_poly(ctx, k, self.opts.degree_cap)?;
            let ok = it.over_subfield(ctx, self.d_sub)?;
            return Ok(ok.then_some(VerificationMethod::Symbolic));
        }
        // A polynomial of degree at most d^k taking values in K_sub at
        // d^k + 1 points of K_sub has all coefficients in K_sub.
        if (self.subfield.len() as u64) <= dk {
            return Ok(None);
        }
        for x in self.subfield.iter().take(dk as usize + 1) {
            let mut y = x;
            for _ in 0..k {
                y = self.table[y.index()];
            }
            if !self.subfield.contains(y) {
                return Ok(None);
            }
        }
        Ok(Some(VerificationMethod::Evaluation))
    }
}

/// Hits of f^(n)(u) in F_{p^d_sub} over n ∈ [0, N), with the gap histogram
/// and a certified k with f^(k) over the subfield when one is found.
pub fn detect_subfield_iterate(
    ctx: &FieldCtx,
    f: &Poly,
    u: Elem,
    d_sub: u32,
    n: u64,
) -> Result<DetectionResult> {
    Detector::new(ctx, f, d_sub, DetectOptions::default())?.detect(u, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_identities() {
        let h = GapHistogram::new(vec![1, 3, 4, 9], 10).unwrap();
        assert_eq!(h.get(1), 1);
        assert_eq!(h.get(2), 1);
        assert_eq!(h.get(5), 1);
        assert!(GapHistogram::new(vec![1, 3, 12], 10).is_err());
        assert!(GapHistogram::new(vec![], 10).unwrap().counts.is_empty());
    }

    #[test]
    fn omega_square_over_f4() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let omega = ctx.tower_generator();
        let f = Poly::monomial(omega, 2);
        let r = detect_subfield_iterate(&ctx, &f, Elem::ONE, 1, 100).unwrap();
        assert_eq!(r.hits_count, 50);
        assert_eq!(r.histogram.get(2), 49);
        assert_eq!(r.found_k, Some(2));
        assert_eq!(r.verification, Some(VerificationMethod::Symbolic));
        assert!(!r.threshold_met);
        assert!((r.threshold - 91.3).abs() < 0.1);
        assert!(!r.within_orbit);
        let f2 = f.iterate_poly(&ctx, 2, 16).unwrap();
        assert_eq!(f2, Poly::monomial(Elem::ONE, 4));
    }

    #[test]
    fn closure_gives_k_one() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let f = Poly::new(vec![Elem(1), Elem(2), Elem(3)]);
        for u in 0..4 {
            let r = detect_subfield_iterate(&ctx, &f, Elem(u), 2, 40).unwrap();
            assert_eq!(r.hits_count, 40);
            assert_eq!(r.found_k, Some(1));
        }
    }

    #[test]
    fn evaluation_path_agrees_with_symbolic() {
        let ctx = FieldCtx::new(2, 1, 8).unwrap();
        let f = Poly::monomial(Elem::ONE, 2);
        let opts = DetectOptions {
            degree_cap: 2,
            ..DetectOptions::default()
        };
        let mut det = Detector::new(&ctx, &f, 4, opts).unwrap();
        // 2^3 = 8 < 16 points of F_16.
        assert_eq!(det.verify(3).unwrap(), Some(VerificationMethod::Evaluation));
        // 2^4 = 16 is not below #F_16, so nothing is certified.
        assert_eq!(det.verify(4).unwrap(), None);
        let g = Poly::monomial(ctx.primitive(), 2);
        let mut det = Detector::new(&ctx, &g, 4, opts).unwrap();
        assert_eq!(det.verify(3).unwrap(), None);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ctx = FieldCtx::new(2, 1, 6).unwrap();
        let f = Poly::monomial(Elem::ONE, 2);
        assert!(detect_subfield_iterate(&ctx, &f, Elem::ONE, 1, 1).is_err());
        assert!(detect_subfield_iterate(&ctx, &f, Elem::ONE, 4, 10).is_err());
        assert!(detect_subfield_iterate(&ctx, &f, Elem::ONE, 6, 10).is_err());
    }
}
