//! Generalized k-Horadam sequences.
//!
//! A sequence is defined by evaluated scalars (fk, gk) and seeds (a, b) via
//! the recurrence H_{n+2} = fk*H_{n+1} + gk*H_n with H_0 = a, H_1 = b.
//! Classical sequences (Fibonacci, Lucas, Pell, Jacobsthal, ...) are presets.

use std::fmt;
use std::str::FromStr;

use crate::numeric::{rational_sqrt, Rational};
use crate::{Error, Result};

/// Evaluated recurrence parameters: coefficients fk, gk and seeds a, b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoradamParams {
    pub fk: Rational,
    pub gk: Rational,
    pub a: Rational,
    pub b: Rational,
}

impl HoradamParams {
    /// Builds parameters, rejecting fk^2 + 4*gk <= 0 (both roots must be
    /// real and distinct).
    pub fn new(fk: Rational, gk: Rational, a: Rational, b: Rational) -> Result<Self> {
        let disc = &(&fk * &fk) + &(Rational::from_int(4) * &gk);
        if disc.is_zero() || disc.is_negative() {
            return Err(Error::Domain(format!(
                "fk^2 + 4*gk must be positive, got {disc}"
            )));
        }
        Ok(HoradamParams { fk, gk, a, b })
    }

    /// fk^2 + 4*gk, the discriminant of x^2 - fk*x - gk.
    pub fn discriminant(&self) -> Rational {
        &(&self.fk * &self.fk) + &(Rational::from_int(4) * &self.gk)
    }
}

/// A named parameter choice for a classical second-order sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Fibonacci,
    Lucas,
    Pell,
    Jacobsthal,
    KFibonacci(Rational),
    KLucas(Rational),
    Horadam {
        p: Rational,
        q: Rational,
        a: Rational,
        b: Rational,
    },
}

impl Preset {
    pub fn params(&self) -> HoradamParams {
        let r = |n: i64| Rational::from_int(n);
        let (fk, gk, a, b) = match self {
            Preset::Fibonacci => (r(1), r(1), r(0), r(1)),
            Preset::Lucas => (r(1), r(1), r(2), r(1)),
            Preset::Pell => (r(2), r(1), r(0), r(1)),
            Preset::Jacobsthal => (r(1), r(2), r(0), r(1)),
            Preset::KFibonacci(k) => (k.clone(), r(1), r(0), r(1)),
            Preset::KLucas(k) => (k.clone(), r(1), r(2), k.clone()),
            Preset::Horadam { p, q, a, b } => (p.clone(), q.clone(), a.clone(), b.clone()),
        };
        HoradamParams { fk, gk, a, b }
    }

    /// The default preset set covering every corollary plus one generic
    /// Horadam instance with a != 0 and b != 1.
    pub fn defaults() -> Vec<Preset> {
        vec![
            Preset::Fibonacci,
            Preset::Lucas,
            Preset::Pell,
            Preset::Jacobsthal,
            Preset::Horadam {
                p: Rational::from_int(3),
                q: Rational::from_int(2),
                a: Rational::from_int(1),
                b: Rational::from_int(4),
            },
        ]
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Fibonacci => write!(f, "fibonacci"),
            Preset::Lucas => write!(f, "lucas"),
            Preset::Pell => write!(f, "pell"),
            Preset::Jacobsthal => write!(f, "jacobsthal"),
            Preset::KFibonacci(k) => write!(f, "k_fibonacci({k})"),
            Preset::KLucas(k) => write!(f, "k_lucas({k})"),
            Preset::Horadam { p, q, a, b } => write!(f, "horadam({p},{q},{a},{b})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `fibonacci`, `lucas`, `pell`, `jacobsthal`, `k_fibonacci(K)`,
    /// `k_lucas(K)` and `horadam(P,Q,A,B)` with rational arguments.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "fibonacci" => return Ok(Preset::Fibonacci),
            "lucas" => return Ok(Preset::Lucas),
            "pell" => return Ok(Preset::Pell),
            "jacobsthal" => return Ok(Preset::Jacobsthal),
            _ => {}
        }
        let bad = || Error::Argument(format!("unknown preset: {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<Rational> = args
            .split(',')
            .map(|p| p.parse())
            .collect::<Result<_>>()
            .map_err(|_| bad())?;
        match (name.trim(), parts.as_slice()) {
            ("k_fibonacci", [k]) => Ok(Preset::KFibonacci(k.clone())),
            ("k_lucas", [k]) => Ok(Preset::KLucas(k.clone())),
            ("horadam", [p, q, a, b]) => Ok(Preset::Horadam {
                p: p.clone(),
                q: q.clone(),
                a: a.clone(),
                b: b.clone(),
            }),
            _ => Err(bad()),
        }
    }
}

/// H_n by iterating the recurrence from the seeds.
pub fn term(params: &HoradamParams, n: u64) -> Rational {
    match n {
        0 => params.a.clone(),
        1 => params.b.clone(),
        _ => {
            let mut prev = params.a.clone();
            let mut cur = params.b.clone();
            for _ in 1..n {
                let next = &params.fk * &cur + &params.gk * &prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// The terms H_lo ..= H_hi.
pub fn terms(params: &HoradamParams, lo: u64, hi: u64) -> Result<Vec<Rational>> {
    if lo > hi {
        return Err(Error::Argument(format!("lo = {lo} exceeds hi = {hi}")));
    }
    let mut prev = params.a.clone();
    let mut cur = params.b.clone();
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for n in 0..=hi {
        let here = if n == 0 { &prev } else { &cur };
        if n >= lo {
            out.push(here.clone());
        }
        if n >= 1 {
            let next = &params.fk * &cur + &params.gk * &prev;
            prev = cur;
            cur = next;
        }
    }
    Ok(out)
}

/// Characteristic roots and Binet coefficients for one parameter set.
#[derive(Clone, Debug)]
pub enum BinetData {
    /// Discriminant is a perfect rational square: everything exact.
    Exact {
        r1: Rational,
        r2: Rational,
        x: Rational,
        y: Rational,
    },
    /// Irrational roots: double-precision values.
    Approx { r1: f64, r2: f64, x: f64, y: f64 },
}

/// Roots of x^2 - fk*x - gk and the coefficients X = b - a*r2, Y = b - a*r1.
pub fn binet_data(params: &HoradamParams) -> BinetData {
    let disc = params.discriminant();
    match rational_sqrt(&disc).expect("discriminant positive by construction") {
        Some(s) => {
            let two = Rational::from_int(2);
            let r1 = &(&params.fk + &s) / &two;
            let r2 = &(&params.fk - &s) / &two;
            let x = &params.b - &(&params.a * &r2);
            let y = &params.b - &(&params.a * &r1);
            BinetData::Exact { r1, r2, x, y }
        }
        None => {
            let s = disc.to_f64().sqrt();
            let fk = params.fk.to_f64();
            let r1 = (fk + s) / 2.0;
            let r2 = (fk - s) / 2.0;
            let x = params.b.to_f64() - params.a.to_f64() * r2;
            let y = params.b.to_f64() - params.a.to_f64() * r1;
            BinetData::Approx { r1, r2, x, y }
        }
    }
}

/// Result of the Binet evaluation: exact when the roots are rational.
#[derive(Clone, Debug, PartialEq)]
pub enum BinetValue {
    Exact(Rational),
    Approx(f64),
}

/// H_n via the Binet closed form (X*r1^n - Y*r2^n)/(r1 - r2).
pub fn binet(params: &HoradamParams, n: u64) -> BinetValue {
    match binet_data(params) {
        BinetData::Exact { r1, r2, x, y } => {
            let p1 = crate::numeric::rat_pow(&r1, n as i64).expect("nonnegative exponent");
            let p2 = crate::numeric::rat_pow(&r2, n as i64).expect("nonnegative exponent");
            let num = &(&x * &p1) - &(&y * &p2);
            let den = &r1 - &r2;
            BinetValue::Exact(&num / &den)
        }
        BinetData::Approx { r1, r2, x, y } => {
            let v = (x * r1.powi(n as i32) - y * r2.powi(n as i32)) / (r1 - r2);
            BinetValue::Approx(v)
        }
    }
}

/// Partial sum H_1 + ... + H_n via the closed form
/// (H_{n+1} + gk*H_n - H_1 - gk*H_0)/(fk + gk - 1).
pub fn sum_closed(params: &HoradamParams, n: u64) -> Result<Rational> {
    let den = &(&params.fk + &params.gk) - &Rational::one();
    if den.is_zero() {
        return Err(Error::FormulaInapplicable(
            "fk+gk-1=0: summation formula undefined".into(),
        ));
    }
    let hn = term(params, n);
    let hn1 = term(params, n + 1);
    let num = &(&hn1 + &(&params.gk * &hn)) - &(&params.b + &(&params.gk * &params.a));
    Ok(&num / &den)
}
