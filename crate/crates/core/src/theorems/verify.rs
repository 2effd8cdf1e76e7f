use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::freq_threshold;
use crate::fpoly::Poly;
use crate::gf_tower::{Elem, FieldCtx};

use super::detect::{DetectOptions, Detector};

/// Coefficients c_0, ..., c_{d-1} range over this set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientSet {
    All,
    Subset(Vec<Elem>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingMode {
    /// Leading coefficient 1.
    Monic,
    /// Every nonzero leading coefficient in the coefficient set.
    Nonzero,
}

#[derive(Debug, Clone)]
pub struct SubfieldSearch {
    pub degree: usize,
    pub d_sub: u32,
    pub coefficients: CoefficientSet,
    pub leading: LeadingMode,
    /// Explicit polynomials to check instead of enumerating the space.
    pub polynomials: Option<Vec<Poly>>,
    /// Starting points; None means every element.
    pub starts: Option<Vec<Elem>>,
    pub detect: DetectOptions,
    pub work_cap: u128,
    /// Also run the detector at N = T_u for every (f, u), auditing the
    /// gap-histogram identities even when the hypothesis is not met.
    pub audit: bool,
}

impl SubfieldSearch {
    pub fn new(degree: usize, d_sub: u32) -> Self {
        Self {
            degree,
            d_sub,
            coefficients: CoefficientSet::All,
            leading: LeadingMode::Nonzero,
            polynomials: None,
            starts: None,
            detect: DetectOptions::default(),
            work_cap: 1 << 36,
            audit: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub poly: String,
    pub u: String,
    pub n: u64,
    pub hits: usize,
    pub threshold: f64,
}

/// Tallies over all (f, u, N) with 2 <= N <= T_u.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub field_spec: String,
    pub degree: usize,
    pub d_sub: u32,
    pub polynomials: u64,
    pub starts: u64,
    pub instances: u64,
    /// Threshold above N, so the hypothesis cannot hold.
    pub vacuous: u64,
    pub not_met: u64,
    pub met: u64,
    pub certified: u64,
    pub detector_runs: u64,
    pub max_orbit: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl CounterexampleReport {
    pub fn summary_line(&self) -> String {
        format!("counterexamples: {}", self.counterexamples.len())
    }

    fn merge(&mut self, o: CounterexampleReport) {
        self.instances += o.instances;
        self.vacuous += o.vacuous;
        self.not_met += o.not_met;
        self.met += o.met;
        self.certified += o.certified;
        self.detector_runs += o.detector_runs;
        self.max_orbit = self.max_orbit.max(o.max_orbit);
        self.counterexamples.extend(o.counterexamples);
    }
}

/// Checks, for every polynomial in the search space, every start u and every
/// N <= T_u, that meeting the hit-frequency threshold yields a certified k.
pub fn verify_thm_subfield(
    ctx: &FieldCtx,
    search: &SubfieldSearch,
) -> Result<CounterexampleReport> {
    if search.degree < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let coeffs: Vec<Elem> = match &search.coefficients {
        CoefficientSet::All => ctx.elements().collect(),
        CoefficientSet::Subset(v) => v.clone(),
    };
    let leads: Vec<Elem> = match search.leading {
        LeadingMode::Monic => vec![Elem::ONE],
        LeadingMode::Nonzero => coeffs.iter().copied().filter(|c| !c.is_zero()).collect(),
    };
    let starts: Vec<Elem> = search
        .starts
        .clone()
        .unwrap_or_else(|| ctx.elements().collect());
    let lower = (coeffs.len() as u128)
        .checked_pow(search.degree as u32)
        .unwrap_or(u128::MAX);
    let polys = match &search.polynomials {
        Some(list) => list.len() as u128,
        None => lower.saturating_mul(leads.len() as u128),
    };
    let work = polys
        .saturating_mul(starts.len() as u128)
        .saturating_mul(ctx.order() as u128);
    if work > search.work_cap {
        return Err(Error::WorkCap {
            work,
            cap: search.work_cap,
        });
    }
    // thresholds[N] for N up to the largest possible orbit.
    let d = search.degree as u32;
    let thresholds: Vec<f64> = (0..=ctx.order() as u64)
        .map(|n| {
            if n < 2 {
                f64::INFINITY
            } else {
                freq_threshold(d, n, search.detect.log_base).expect("N >= 2")
            }
        })
        .collect();
    let build = |idx: u128| -> Poly {
        let mut rest = idx;
        let mut cs = Vec::with_capacity(search.degree + 1);
        for _ in 0..search.degree {
            cs.push(coeffs[(rest % coeffs.len() as u128) as usize]);
            rest /= coeffs.len() as u128;
        }
        cs.push(leads[rest as usize]);
        Poly::new(cs)
    };
    let parts: Vec<Result<CounterexampleReport>> = (0..polys as u64)
        .into_par_iter()
        .map(|i| match &search.polynomials {
            Some(list) => search_one(ctx, &list[i as usize], &starts, search, &thresholds),
            None => search_one(ctx, &build(i as u128), &starts, search, &thresholds),
        })
        .collect();
    let mut report = CounterexampleReport {
        field_spec: ctx.spec(),
        degree: search.degree,
        d_sub: search.d_sub,
        polynomials: polys as u64,
        starts: starts.len() as u64,
        ..Default::default()
    };
    for part in parts {
        report.merge(part?);
    }
    Ok(report)
}

fn search_one(
    ctx: &FieldCtx,
    f: &Poly,
    starts: &[Elem],
    search: &SubfieldSearch,
    thresholds: &[f64],
) -> Result<CounterexampleReport> {
    let mut det = Detector::new(ctx, f, search.d_sub, search.detect)?;
    let mut out = CounterexampleReport::default();
    for &u in starts {
        let orbit = det.orbit(u);
        let t = orbit.size();
        out.max_orbit = out.max_orbit.max(t);
        let mut hits = 0usize;
        for (i, &x) in orbit.elements.iter().enumerate() {
            if det.subfield().contains(x) {
                hits += 1;
            }
            let n = i as u64 + 1;
            if n < 2 {
                continue;
            }
            out.instances += 1;
            let thr = thresholds[n as usize];
            if thr > n as f64 {
                out.vacuous += 1;
            } else if (hits as f64) < thr {
                out.not_met += 1;
            } else {
                out.met += 1;
                out.detector_runs += 1;
                let r = det.detect_on(&orbit, n)?;
                if r.found_k.is_some() {
                    out.certified += 1;
                } else {
                    out.counterexamples.push(Counterexample {
                        poly: f.to_literal(ctx),
                        u: ctx.encode(u),
                        n,
                        hits,
                        threshold: thr,
                    });
                }
            }
        }
        if search.audit {
            out.detector_runs += 1;
            det.detect_on(&orbit, (t as u64).max(2))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_search_tallies() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let r = verify_thm_subfield(&ctx, &SubfieldSearch::new(2, 1)).unwrap();
        assert_eq!(r.polynomials, 3 * 16);
        assert_eq!(r.starts, 4);
        assert_eq!(r.instances, r.vacuous + r.not_met + r.met);
        assert_eq!(r.met, 0);
        assert_eq!(r.summary_line(), "counterexamples: 0");
    }

    #[test]
    fn monic_over_subset() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let mut s = SubfieldSearch::new(2, 1);
        s.coefficients = CoefficientSet::Subset(vec![Elem(0), Elem(1), Elem(2)]);
        s.leading = LeadingMode::Monic;
        let r = verify_thm_subfield(&ctx, &s).unwrap();
        assert_eq!(r.polynomials, 9);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn explicit_polynomial_list() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let mut s = SubfieldSearch::new(2, 1);
        s.polynomials = Some(vec![
            Poly::monomial(Elem::ONE, 2),
            Poly::monomial(Elem(3), 2),
        ]);
        let r = verify_thm_subfield(&ctx, &s).unwrap();
        assert_eq!(r.polynomials, 2);
        assert_eq!(r.starts, 16);
    }

    #[test]
    fn work_cap_is_enforced() {
        let ctx = FieldCtx::new(2, 1, 6).unwrap();
        let mut s = SubfieldSearch::new(2, 1);
        s.work_cap = 1000;
        assert!(matches!(
            verify_thm_subfield(&ctx, &s),
            Err(Error::WorkCap { .. })
        ));
    }
}
