//! Growth exponents η_d, ϑ_d, κ_d, ρ_d and the constants c_d.
//!
//! The recursion is generic over the scalar so it can be run exactly (over
//! [`BigRational`]) or in floating point for quick sensitivity runs:
//!
//! ```text
//! η_2 = ϑ_2 = 1/69
//! η_d = η_{d-1} / (5 + η_{d-1})
//! ϑ_d = ϑ_{d-1} + η_d - ϑ_{d-1} η_d
//! κ_d = η_d / (1 + η_d),   ρ_d = η_d + ϑ_d - η_d ϑ_d
//! log c_d = (log c_{d-1} - 3 log d) / (5 + η_{d-1})
//! ```

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::rational_string;

/// Scalar type the exponent recursion can run over.
pub trait ExponentScalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    /// Text form used in reports.
    fn render(&self) -> String;

    /// Natural logarithm, accurate even when the value underflows f64.
    fn ln(&self) -> f64 {
        self.to_f64().map(f64::ln).unwrap_or(f64::NAN)
    }
}

impl ExponentScalar for f64 {
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

impl ExponentScalar for f32 {
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

impl ExponentScalar for BigRational {
    fn render(&self) -> String {
        rational_string(self)
    }

    fn ln(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
}

/// ln |n| for an arbitrarily large integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = &n >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Logarithm base used in the frequency threshold c(d) = 2 log(4d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// c(d) = 2 log(4d).
pub fn threshold_coefficient(d: u32, base: LogBase) -> f64 {
    2.0 * base.log(4.0 * d as f64)
}

/// c(d) · N / log N + 1.
pub fn freq_threshold(d: u32, n: u64, base: LogBase) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "frequency threshold needs N >= 2, got {n}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let nf = n as f64;
    Ok(threshold_coefficient(d, base) * nf / base.log(nf) + 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRow<T> {
    pub d: u32,
    pub eta: T,
    pub theta: T,
    pub kappa: T,
    pub rho: T,
    /// ln c_d, parametric in the base constant c_2.
    pub log_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTable<T> {
    c2: f64,
    rows: Vec<ExponentRow<T>>,
}

/// Exact table over arbitrary-precision rationals.
pub type ExactExponentTable = ExponentTable<BigRational>;
/// Double-precision table.
pub type FloatExponentTable = ExponentTable<f64>;

impl<T: ExponentScalar> ExponentTable<T> {
    pub fn build(d_max: u32, c2: f64) -> Result<Self> {
        if d_max < 2 {
            return Err(Error::InvalidArgument(format!(
                "d_max must be at least 2, got {d_max}"
            )));
        }
        if !(c2 > 0.0 && c2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "c2 must be a positive real, got {c2}"
            )));
        }
        let five = T::from_u32(5).expect("small integer");
        let base = T::one() / T::from_u32(69).expect("small integer");
        let mut rows = Vec::with_capacity(d_max as usize - 1);
        rows.push(Self::row(2, base.clone(), base, c2.ln()));
        for d in 3..=d_max {
            let prev = rows.last().expect("seeded with d = 2");
            let eta = prev.eta.clone() / (five.clone() + prev.eta.clone());
            let theta = prev.theta.clone() + eta.clone() - prev.theta.clone() * eta.clone();
            let denom = 5.0 + prev.eta.to_f64().unwrap_or(0.0);
            let log_c = (prev.log_c - 3.0 * (d as f64).ln()) / denom;
            rows.push(Self::row(d, eta, theta, log_c));
        }
        Ok(Self { c2, rows })
    }

    fn row(d: u32, eta: T, theta: T, log_c: f64) -> ExponentRow<T> {
        let kappa = eta.clone() / (T::one() + eta.clone());
        let rho = eta.clone() + theta.clone() - eta.clone() * theta.clone();
        ExponentRow {
            d,
            eta,
            theta,
            kappa,
            rho,
            log_c,
        }
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn rows(&self) -> &[ExponentRow<T>] {
        &self.rows
    }

    pub fn get(&self, d: u32) -> Option<&ExponentRow<T>> {
        d.checked_sub(2).and_then(|i| self.rows.get(i as usize))
    }

    /// The sequence (d, log η_d / d) for d = 2..=d_max.
    pub fn eta_limit_report(&self) -> Vec<(u32, f64)> {
        self.rows
            .iter()
            .map(|r| (r.d, r.eta.ln() / r.d as f64))
            .collect()
    }

    /// Diagnostic ratios log c_d / log d, reported without any claim.
    pub fn log_c_ratio(&self) -> Vec<(u32, f64)> {
        self.rows
            .iter()
            .map(|r| (r.d, r.log_c / (r.d as f64).ln()))
            .collect()
    }

    pub fn csv_rows(&self, base: LogBase) -> Vec<ExponentCsvRow> {
        self.rows
            .iter()
            .map(|r| ExponentCsvRow {
                d: r.d,
                eta: r.eta.render(),
                theta: r.theta.render(),
                kappa: r.kappa.render(),
                rho: r.rho.render(),
                log_c: r.log_c,
                c_of_d_threshold_coefficient: threshold_coefficient(r.d, base),
            })
            .collect()
    }
}

impl ExactExponentTable {
    /// Exact table with c_2 = 1.
    pub fn exact(d_max: u32) -> Result<Self> {
        Self::build(d_max, 1.0)
    }

    /// Writing η_d = 1/a_d, returns a_d (an integer for every d).
    pub fn eta_denominator(&self, d: u32) -> Option<BigInt> {
        self.get(d).map(|r| {
            debug_assert!(r.eta.numer().is_one());
            r.eta.denom().clone()
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentCsvRow {
    pub d: u32,
    pub eta: String,
    pub theta: String,
    pub kappa: String,
    pub rho: String,
    pub log_c: f64,
    pub c_of_d_threshold_coefficient: f64,
}

/// One line of the limit diagnostic.
pub fn eta_limit_report(d_max: u32) -> Result<Vec<(u32, f64)>> {
    if d_max < 3 {
        return Err(Error::InvalidArgument(format!(
            "limit report needs d_max >= 3, got {d_max}"
        )));
    }
    Ok(ExactExponentTable::exact(d_max)?.eta_limit_report())
}
