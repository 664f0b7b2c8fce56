//! Polynomials in the formal variables g and d with rational coefficients.
//!
//! These are the scalars of the pairing calculus: fiber degrees and identity
//! coefficients like 4g(g-1) or 16g(g-1)^3 live here in canonical expanded
//! form, so equality is coefficient-wise and exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::rational::{format_rational, rint, Rational};

/// Canonical expanded polynomial: exponent pair (of g, of d) -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyGD {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl PolyGD {
    pub fn zero() -> Self {
        PolyGD::default()
    }

    pub fn one() -> Self {
        PolyGD::constant(rint(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        PolyGD { terms }
    }

    pub fn int(n: i64) -> Self {
        PolyGD::constant(rint(n))
    }

    /// The variable g.
    pub fn g() -> Self {
        PolyGD::monomial(1, 0, rint(1))
    }

    /// The variable d.
    pub fn d() -> Self {
        PolyGD::monomial(0, 1, rint(1))
    }

    pub fn monomial(g_pow: u32, d_pow: u32, coefficient: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert((g_pow, d_pow), coefficient);
        }
        PolyGD { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return PolyGD::zero();
        }
        PolyGD {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.clone() * factor.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = PolyGD::one();
        for _ in 0..exponent {
            out = out * self.clone();
        }
        out
    }

    /// Substitutes d := value (a polynomial in g alone, typically 2g-2).
    pub fn substitute_d(&self, value: &PolyGD) -> Self {
        let mut out = PolyGD::zero();
        for (&(gp, dp), coefficient) in &self.terms {
            let term = PolyGD::monomial(gp, 0, coefficient.clone()) * value.pow(dp);
            out = out + term;
        }
        out
    }

    /// Exact evaluation at rational g and d.
    pub fn eval(&self, g: &Rational, d: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (&(gp, dp), coefficient) in &self.terms {
            let mut term = coefficient.clone();
            for _ in 0..gp {
                term *= g.clone();
            }
            for _ in 0..dp {
                term *= d.clone();
            }
            total += term;
        }
        total
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// `(p)` unless the polynomial is a single non-negative term.
    pub fn display_factor(&self) -> String {
        if self.terms.len() <= 1 && self.terms.values().all(|c| !c.is_negative()) {
            format!("{self}")
        } else {
            format!("({self})")
        }
    }
}

impl Add for PolyGD {
    type Output = PolyGD;
    fn add(self, rhs: PolyGD) -> PolyGD {
        let mut terms = self.terms;
        for (k, v) in rhs.terms {
            *terms.entry(k).or_insert_with(Rational::zero) += v;
        }
        PolyGD { terms }.prune()
    }
}

impl Sub for PolyGD {
    type Output = PolyGD;
    fn sub(self, rhs: PolyGD) -> PolyGD {
        self + (-rhs)
    }
}

impl Neg for PolyGD {
    type Output = PolyGD;
    fn neg(self) -> PolyGD {
        self.scale(&rint(-1))
    }
}

impl Mul for PolyGD {
    type Output = PolyGD;
    fn mul(self, rhs: PolyGD) -> PolyGD {
        let mut terms: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(ga, da), ca) in &self.terms {
            for (&(gb, db), cb) in &rhs.terms {
                *terms
                    .entry((ga + gb, da + db))
                    .or_insert_with(Rational::zero) += ca.clone() * cb.clone();
            }
        }
        PolyGD { terms }.prune()
    }
}

impl fmt::Display for PolyGD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first, g before d
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(gp, dp)| (std::cmp::Reverse(gp + dp), std::cmp::Reverse(gp)));
        for (i, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let (gp, dp) = **key;
            let unit_mag = mag.is_one() && (gp, dp) != (0, 0);
            if !unit_mag {
                write!(f, "{}", format_rational(&mag))?;
                if (gp, dp) != (0, 0) {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (name, p) in [("g", gp), ("d", dp)] {
                if p == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                if p == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// 2g - 2, the fiber degree of the relative dualizing sheaf.
pub fn two_g_minus_two() -> PolyGD {
    PolyGD::g().scale(&rint(2)) + PolyGD::int(-2)
}
