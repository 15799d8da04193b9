//! Five one-parameter families of Fermat–Pell polynomials.
//!
//! Each family starts from a non-square `f` with fundamental solution
//! `(c, h)` of `c² − fh² = 1` and produces integer polynomials `f(t)`, `X(t)`,
//! `Y(t)` with `X(t)² − f(t)Y(t)² = 1` identically and
//! `(f(0), X(0), Y(0)) = (f, c, h)`. Depending on the shape of the period of
//! `√f`, the continued fraction of `√f(t)` is known symbolically: all but
//! the last (and possibly the middle) quotients stay constant.
//!
//! | family | `f(t)`                                                        |
//! |--------|---------------------------------------------------------------|
//! | F1     | `h²t² + 2ct + f`                                              |
//! | F2     | `(c−1)²h²t² + 2(c−1)²t + f`                                   |
//! | F3     | `(c+1)²h²t² + 2(c+1)²t + f`                                   |
//! | F4     | `(c+1)²h²t² + 2(c²−1)t + f`                                   |
//! | F5     | `(c−1)²h⁶t⁴ + 4(c−1)²h⁴t³ + 6(c−1)²h²t² + 2(c−1)(2c−1)t + f`  |

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::contfrac::{expand_sqrt, expand_sqrt_bounded, SurdExpansion};
use crate::error::{Error, Result};
use crate::pell::{fundamental_from_expansion, PellSolution};
use crate::poly::Polynomial;
use crate::scalar::{lit, Int};

/// Longest period explored when no pattern predicts the expansion of `√f(t)`.
pub const UNPREDICTED_PERIOD_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5];
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::F1 => "F1",
            Self::F2 => "F2",
            Self::F3 => "F3",
            Self::F4 => "F4",
            Self::F5 => "F5",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim_start_matches(['F', 'f']);
        match digits {
            "1" => Ok(Self::F1),
            "2" => Ok(Self::F2),
            "3" => Ok(Self::F3),
            "4" => Ok(Self::F4),
            "5" => Ok(Self::F5),
            _ => Err(Error::Domain(format!("unknown family {s:?}, expected F1..F5"))),
        }
    }
}

/// One family instantiated at a base radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance<T> {
    pub family: FamilyId,
    pub f: T,
    pub c: T,
    pub h: T,
    pub f_poly: Polynomial<T>,
    pub x_poly: Polynomial<T>,
    pub y_poly: Polynomial<T>,
}

impl<T: Int> FamilyInstance<T> {
    /// `(f(t), X(t), Y(t))`.
    pub fn eval(&self, t: &T) -> (T, T, T) {
        (self.f_poly.eval(t), self.x_poly.eval(t), self.y_poly.eval(t))
    }
}

type RatPoly<T> = Polynomial<Ratio<T>>;

fn rat<T: Int>(v: T) -> Ratio<T> {
    Ratio::from_integer(v)
}

/// Polynomials of one family over the rationals, from `(f, c, h)`.
fn family_polys<T: Int>(family: FamilyId, f: &T, c: &T, h: &T) -> (RatPoly<T>, RatPoly<T>, RatPoly<T>) {
    let (f, c, h) = (rat(f.clone()), rat(c.clone()), rat(h.clone()));
    let one = rat(T::one());
    let (two, three, four, six) = (rat(lit(2)), rat(lit(3)), rat(lit(4)), rat(lit(6)));
    let h2 = h.clone() * h.clone();
    let h3 = h2.clone() * h.clone();
    let h4 = h2.clone() * h2.clone();
    let h6 = h4.clone() * h2.clone();
    let cm = c.clone() - one.clone();
    let cp = c.clone() + one.clone();
    let p = |cs: Vec<Ratio<T>>| Polynomial::new(cs);
    // Y(t) = h³t + h for every family except F1 and F4
    let cubic_y = p(vec![h.clone(), h3.clone()]);
    match family {
        FamilyId::F1 => (
            p(vec![f, two * c.clone(), h2.clone()]),
            p(vec![c, h2]),
            p(vec![h]),
        ),
        FamilyId::F2 | FamilyId::F3 => {
            let k = if family == FamilyId::F2 { cm } else { cp };
            (
                p(vec![f, two.clone() * k.clone() * k.clone(), k.clone() * k.clone() * h2.clone()]),
                p(vec![c, two * k.clone() * h2, k * h4]),
                cubic_y,
            )
        }
        FamilyId::F4 => {
            let ratio = cp.clone() / cm.clone();
            (
                p(vec![f, two.clone() * (c.clone() * c.clone() - one), cp.clone() * cp.clone() * h2.clone()]),
                p(vec![c, two * cp.clone() * h2, cp * ratio.clone() * h4]),
                p(vec![h, ratio * h3]),
            )
        }
        FamilyId::F5 => {
            let cm2 = cm.clone() * cm.clone();
            (
                p(vec![
                    f,
                    two.clone() * cm.clone() * (two * c.clone() - one),
                    six * cm2.clone() * h2.clone(),
                    four * cm2.clone() * h4.clone(),
                    cm2 * h6.clone(),
                ]),
                p(vec![c, three.clone() * cm.clone() * h2, three * cm.clone() * h4, cm * h6]),
                cubic_y,
            )
        }
    }
}

fn integral<T: Int>(family: FamilyId, what: &str, p: &RatPoly<T>) -> Result<Polynomial<T>> {
    p.to_integral().ok_or_else(|| Error::NonIntegral {
        family: family.to_string(),
        what: format!("{what} = {}", display_rat_poly(p)),
    })
}

fn display_rat_poly<T: Int>(p: &RatPoly<T>) -> String {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("({c})t^{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Instantiates `family` at `f`, using the fundamental solution of `√f`.
///
/// Only F4 involves division, by `c − 1`. Its coefficients are integral
/// whenever the period of `√f` is odd (then `h² = 2(c − 1)B_n²`), and often
/// otherwise; the call fails with [`Error::NonIntegral`] when they are not.
pub fn instantiate<T: Int>(family: FamilyId, f: &T) -> Result<FamilyInstance<T>> {
    let exp = expand_sqrt(f)?;
    instantiate_from(family, &exp)
}

fn instantiate_from<T: Int>(family: FamilyId, exp: &SurdExpansion<T>) -> Result<FamilyInstance<T>> {
    let sol = fundamental_from_expansion(exp);
    let f = exp.radicand();
    let (fp, xp, yp) = family_polys(family, f, &sol.x, &sol.y);
    Ok(FamilyInstance {
        family,
        f: f.clone(),
        c: sol.x.clone(),
        h: sol.y.clone(),
        f_poly: integral(family, "f(t)", &fp)?,
        x_poly: integral(family, "X(t)", &xp)?,
        y_poly: integral(family, "Y(t)", &yp)?,
    })
}

/// F5 with `h⁵` in place of `h⁴` in the quartic coefficient:
/// `(c−1)²h²t²(h⁵t² + 4h²t + 6) + 2(c−1)(2c−1)t + f`, paired with F5's
/// `X(t)` and `Y(t)`. It satisfies the Pell identity only when `h = 1`.
pub fn f5_h5_variant<T: Int>(f: &T) -> Result<FamilyInstance<T>> {
    let mut inst = instantiate(FamilyId::F5, f)?;
    let cm = inst.c.clone() - T::one();
    let h = inst.h.clone();
    let h2 = h.clone() * h.clone();
    let quartic = Polynomial::new(vec![lit::<T>(6), lit::<T>(4) * h2.clone(), h2.clone() * h2.clone() * h]);
    let lead = Polynomial::monomial(cm.clone() * cm.clone() * h2, 2);
    let tail = Polynomial::new(vec![inst.f.clone(), lit::<T>(2) * cm.clone() * (lit::<T>(2) * inst.c.clone() - T::one())]);
    inst.f_poly = &(&lead * &quartic) + &tail;
    Ok(inst)
}

/// True iff `X(t)² − f(t)Y(t)²` expands to the constant polynomial 1.
pub fn pell_identity_check<T: Int>(inst: &FamilyInstance<T>) -> bool {
    let lhs = &(&inst.x_poly * &inst.x_poly) - &(&inst.f_poly * &(&inst.y_poly * &inst.y_poly));
    lhs == Polynomial::constant(T::one())
}

/// Whether a theorem case predicts the continued fraction of `√f(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applicability {
    pub family: FamilyId,
    pub covered: bool,
    /// The case that applies, or the precondition that failed.
    pub case_label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `a_1..a_n, inner, a_1..a_n, 2·lead`
    Doubled,
    /// `a_1..a_n, 2·lead`
    Single,
    /// `a_1..a_{m-1}, shift + a_m, a_{m+1}..a_n, 2·lead`
    MiddleShift,
}

fn shape_of<T: Int>(family: FamilyId, exp: &SurdExpansion<T>) -> (Option<Shape>, String) {
    let n = exp.n();
    let len = exp.period_length();
    let m = exp.half_index();
    let a0 = exp.a0().clone();
    let n_desc = format!("n={n} {} (period {len})", if n.is_multiple_of(2) { "even" } else { "odd" });
    let middle = || {
        let am = exp.quotient(m).clone();
        let tag = if am == a0 {
            Some("a0")
        } else if am == a0.clone() - T::one() {
            Some("a0-1")
        } else {
            None
        };
        let parity = if m.is_multiple_of(2) { "even" } else { "odd" };
        let desc = match tag {
            Some(t) => format!("m={m} {parity}, a_{m}={am}={t}"),
            None => format!("m={m} {parity}, a_{m}={am} not in {{{a0}, {}}}", a0.clone() - T::one()),
        };
        (tag.is_some(), m % 2 == 1, desc)
    };
    let even_n = n.is_multiple_of(2);
    match family {
        FamilyId::F1 if even_n => (Some(Shape::Doubled), format!("{n_desc}, doubled period")),
        FamilyId::F1 => (Some(Shape::Single), n_desc),
        FamilyId::F2 | FamilyId::F5 if even_n => {
            let shape = if family == FamilyId::F2 { Shape::Single } else { Shape::Doubled };
            (Some(shape), n_desc)
        }
        FamilyId::F2 | FamilyId::F3 | FamilyId::F5 if !even_n => {
            let (cond, m_odd, desc) = middle();
            let want_odd = family != FamilyId::F3;
            let label = format!("{n_desc}, {desc}");
            if cond && m_odd == want_odd {
                (Some(Shape::MiddleShift), label)
            } else if !cond {
                (None, label)
            } else {
                (None, format!("{label}, needs m {}", if want_odd { "odd" } else { "even" }))
            }
        }
        FamilyId::F3 => (None, format!("{n_desc}, needs n odd")),
        FamilyId::F4 if even_n => (Some(Shape::Single), n_desc),
        FamilyId::F4 => (None, format!("{n_desc}, needs n even")),
        _ => unreachable!("every family and parity handled above"),
    }
}

/// Decides which case, if any, predicts the expansion of `√f(t)`.
pub fn applicability<T: Int>(family: FamilyId, f: &T) -> Result<Applicability> {
    let exp = expand_sqrt(f)?;
    Ok(applicability_from(family, &exp))
}

fn applicability_from<T: Int>(family: FamilyId, exp: &SurdExpansion<T>) -> Applicability {
    let (shape, case_label) = shape_of(family, exp);
    Applicability { family, covered: shape.is_some(), case_label }
}

/// Symbolic continued fraction `[lead(t); periodic(t)…]` of `√f(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedPattern<T> {
    pub family: FamilyId,
    pub lead: Polynomial<T>,
    pub periodic: Vec<Polynomial<T>>,
}

impl<T: Int> PredictedPattern<T> {
    /// Quotients at a concrete `t`: `(lead, periodic block)`.
    pub fn evaluate(&self, t: &T) -> (T, Vec<T>) {
        (self.lead.eval(t), self.periodic.iter().map(|q| q.eval(t)).collect())
    }

    /// True when the pattern at `t` describes the same infinite continued
    /// fraction as `exp`, i.e. its block is a whole number of repetitions of
    /// the actual period.
    pub fn matches_at(&self, t: &T, exp: &SurdExpansion<T>) -> bool {
        let (lead, block) = self.evaluate(t);
        let period = exp.period();
        lead == *exp.a0()
            && block.len() % period.len() == 0
            && block.iter().enumerate().all(|(i, q)| *q == period[i % period.len()])
    }
}

fn pattern_from<T: Int>(family: FamilyId, exp: &SurdExpansion<T>, inst: &FamilyInstance<T>) -> Result<PredictedPattern<T>> {
    let (shape, label) = shape_of(family, exp);
    let shape = shape.ok_or_else(|| Error::NotCovered {
        family: family.to_string(),
        f: exp.radicand().to_string(),
        reason: label,
    })?;
    let (c, h) = (inst.c.clone(), inst.h.clone());
    let a0 = exp.a0().clone();
    let two = lit::<T>(2);
    let one = T::one();
    let constant = |v: &T| Polynomial::constant(v.clone());
    // coefficient of t in the lead for the quadratic families
    let slope = match family {
        FamilyId::F1 => h.clone(),
        FamilyId::F2 | FamilyId::F5 => (c.clone() - one.clone()) * h.clone(),
        FamilyId::F3 | FamilyId::F4 => (c.clone() + one.clone()) * h.clone(),
    };
    let linear = Polynomial::linear(a0.clone(), slope.clone());
    let lead = if family == FamilyId::F5 {
        // (c−1)(h³t² + 2ht) + a0
        let cm = c.clone() - one.clone();
        Polynomial::new(vec![
            a0.clone(),
            two.clone() * cm.clone() * h.clone(),
            cm * h.clone() * h.clone() * h.clone(),
        ])
    } else {
        linear.clone()
    };
    let closing = lead.scale(&two);
    let interior: Vec<Polynomial<T>> = exp.interior().iter().map(constant).collect();
    let mut periodic = Vec::with_capacity(2 * exp.period_length());
    match shape {
        Shape::Single => periodic.extend(interior.iter().cloned()),
        Shape::Doubled => {
            periodic.extend(interior.iter().cloned());
            // F1: 2a0; F5: 2(c−1)ht + 2a0
            periodic.push(if family == FamilyId::F1 { constant(&(two.clone() * a0)) } else { linear.scale(&two) });
            periodic.extend(interior.iter().cloned());
        }
        Shape::MiddleShift => {
            let m = exp.half_index();
            let shift = Polynomial::monomial(slope, 1);
            for (i, q) in interior.iter().enumerate() {
                periodic.push(if i + 1 == m { &shift + q } else { q.clone() });
            }
        }
    }
    periodic.push(closing);
    Ok(PredictedPattern { family, lead, periodic })
}

/// The symbolic expansion of `√f(t)` predicted for a covered `(family, f)`.
pub fn predicted_pattern<T: Int>(family: FamilyId, f: &T) -> Result<PredictedPattern<T>> {
    FamilyPlan::new(family, f)?.pattern.ok_or_else(|| {
        let app = applicability(family, f).expect("expansion already succeeded");
        Error::NotCovered { family: family.to_string(), f: f.to_string(), reason: app.case_label }
    })
}

/// Outcome of one check in a [`Verification`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No pattern is predicted for this `(family, f)`.
    NotApplicable,
    /// The period of `√f(t)` exceeded [`UNPREDICTED_PERIOD_CAP`].
    Undetermined,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::NotApplicable => "N/A",
            Self::Undetermined => "UNDETERMINED",
        }
    }
}

/// Pointwise check of a family at one `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification<T> {
    pub family: FamilyId,
    pub f: T,
    pub t: T,
    /// `f(t)`.
    pub value: T,
    pub x: T,
    pub y: T,
    /// Expansion of `√f(t)`, when it closed within the explored length.
    pub expansion: Option<SurdExpansion<T>>,
    /// Fundamental solution of `X² − f(t)Y² = 1` from that expansion.
    pub fundamental: Option<PellSolution<T>>,
    pub pattern_verdict: Verdict,
    pub fundamental_verdict: Verdict,
    pub identity_verdict: Verdict,
}

impl<T> Verification<T> {
    pub fn verdicts(&self) -> [Verdict; 3] {
        [self.pattern_verdict, self.fundamental_verdict, self.identity_verdict]
    }

    pub fn any_failed(&self) -> bool {
        self.verdicts().contains(&Verdict::Fail)
    }

    /// Every applicable verdict passed.
    pub fn all_passed(&self) -> bool {
        self.verdicts().iter().all(|v| matches!(v, Verdict::Pass | Verdict::NotApplicable))
    }
}

/// Everything about a `(family, f)` pair that does not depend on `t`.
#[derive(Debug, Clone)]
pub struct FamilyPlan<T> {
    pub base: SurdExpansion<T>,
    pub instance: FamilyInstance<T>,
    pub applicability: Applicability,
    pub pattern: Option<PredictedPattern<T>>,
}

impl<T: Int> FamilyPlan<T> {
    pub fn new(family: FamilyId, f: &T) -> Result<Self> {
        let base = expand_sqrt(f)?;
        let instance = instantiate_from(family, &base)?;
        let applicability = applicability_from(family, &base);
        let pattern = if applicability.covered { Some(pattern_from(family, &base, &instance)?) } else { None };
        Ok(Self { base, instance, applicability, pattern })
    }

    /// Checks the predicted expansion, fundamentality and the Pell identity
    /// at a single `t ≥ 0`.
    pub fn verify(&self, t: &T) -> Result<Verification<T>> {
        if t.is_negative() {
            return Err(Error::Domain(format!("t must be non-negative, got {t}")));
        }
        let (value, x, y) = self.instance.eval(t);
        let identity = x.clone() * x.clone() - value.clone() * y.clone() * y.clone() == T::one();
        // keep expanding past a failed prediction so fundamentality is still decided
        let cap = match &self.pattern {
            Some(p) => p.periodic.len().max(UNPREDICTED_PERIOD_CAP),
            None => UNPREDICTED_PERIOD_CAP,
        };
        let expansion = expand_sqrt_bounded(&value, cap)?;
        let pattern_verdict = match (&self.pattern, &expansion) {
            (None, _) => Verdict::NotApplicable,
            (Some(p), Some(e)) => Verdict::from_bool(p.matches_at(t, e)),
            (Some(_), None) => Verdict::Fail,
        };
        let fundamental = expansion.as_ref().map(fundamental_from_expansion);
        let fundamental_verdict = match &fundamental {
            Some(s) => Verdict::from_bool(s.x == x && s.y == y),
            None => Verdict::Undetermined,
        };
        Ok(Verification {
            family: self.instance.family,
            f: self.instance.f.clone(),
            t: t.clone(),
            value,
            x,
            y,
            expansion,
            fundamental,
            pattern_verdict,
            fundamental_verdict,
            identity_verdict: Verdict::from_bool(identity),
        })
    }
}

/// Checks `family` at base `f` and parameter `t`.
pub fn verify_at<T: Int>(family: FamilyId, f: &T, t: &T) -> Result<Verification<T>> {
    FamilyPlan::new(family, f)?.verify(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact_sqrt;
    use num_bigint::BigInt;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn poly(c: &[i64]) -> Polynomial<BigInt> {
        Polynomial::new(c.iter().map(|&v| big(v)).collect())
    }

    fn eval_pattern(fam: FamilyId, f: i64, t: i64) -> (BigInt, Vec<BigInt>) {
        predicted_pattern(fam, &big(f)).unwrap().evaluate(&big(t))
    }

    #[test]
    fn instances_match_hand_substitution() {
        let i = instantiate(FamilyId::F1, &big(22)).unwrap();
        assert_eq!((i.f_poly.clone(), i.x_poly.clone(), i.y_poly.clone()), (poly(&[22, 394, 1764]), poly(&[197, 1764]), poly(&[42])));
        assert_eq!(i.f_poly.to_string(), "1764t^2 + 394t + 22");

        let i = instantiate(FamilyId::F2, &big(3)).unwrap();
        assert_eq!((i.f_poly, i.x_poly, i.y_poly), (poly(&[3, 2, 1]), poly(&[2, 2, 1]), poly(&[1, 1])));

        let i = instantiate(FamilyId::F4, &big(2)).unwrap();
        assert_eq!((i.f_poly, i.x_poly, i.y_poly), (poly(&[2, 16, 64]), poly(&[3, 32, 128]), poly(&[2, 16])));
    }

    #[test]
    fn base_point_recovers_triple() {
        for fam in FamilyId::ALL {
            for f in [2i64, 3, 7, 13, 22, 43, 57] {
                let Ok(i) = instantiate(fam, &big(f)) else { continue };
                assert_eq!(i.eval(&big(0)), (i.f.clone(), i.c.clone(), i.h.clone()));
            }
        }
    }

    #[test]
    fn f4_needs_divisibility() {
        // √7 has an even period; c = 8, h = 3 and 7 does not divide 9·27
        let err = instantiate(FamilyId::F4, &big(7)).unwrap_err();
        assert!(matches!(err, Error::NonIntegral { .. }), "{err}");
        // even periods can still clear the division: c = 197, h = 42 for 22
        assert!(instantiate(FamilyId::F4, &big(22)).is_ok());
        assert!(instantiate(FamilyId::F4, &big(3)).is_ok());
    }

    #[test]
    fn identity_holds_for_every_family_and_fails_for_variant() {
        for f in [2i64, 3, 5, 7, 22, 43, 57, 94] {
            for fam in FamilyId::ALL {
                if let Ok(i) = instantiate(fam, &big(f)) {
                    assert!(pell_identity_check(&i), "{fam} f={f}");
                }
            }
            let variant = f5_h5_variant(&big(f)).unwrap();
            let h_is_one = variant.h == big(1);
            assert_eq!(pell_identity_check(&variant), h_is_one, "f={f}");
        }
    }

    #[test]
    fn applicability_cases() {
        let a = applicability(FamilyId::F3, &big(7)).unwrap();
        assert!(a.covered);
        assert_eq!(a.case_label, "n=3 odd (period 4), m=2 even, a_2=1=a0-1");
        let a = applicability(FamilyId::F2, &big(57)).unwrap();
        assert!(!a.covered);
        assert!(a.case_label.contains("a_3=4 not in {7, 6}"), "{}", a.case_label);
        let a = applicability(FamilyId::F4, &big(3)).unwrap();
        assert!(!a.covered);
        assert!(a.case_label.contains("needs n even"));
        assert!(matches!(predicted_pattern(FamilyId::F4, &big(3)), Err(Error::NotCovered { .. })));
    }

    #[test]
    fn patterns_at_t1() {
        let p = predicted_pattern(FamilyId::F1, &big(2)).unwrap();
        assert_eq!(p.lead, poly(&[1, 2]));
        assert_eq!(p.periodic, vec![poly(&[2]), poly(&[2, 4])]);
        assert_eq!(eval_pattern(FamilyId::F1, 2, 1), (big(3), vec![big(2), big(6)]));

        let p = predicted_pattern(FamilyId::F3, &big(7)).unwrap();
        assert_eq!(p.lead, poly(&[2, 27]));
        assert_eq!(p.periodic, vec![poly(&[1]), poly(&[1, 27]), poly(&[1]), poly(&[4, 54])]);
        assert_eq!(eval_pattern(FamilyId::F3, 7, 1), (big(29), vec![big(1), big(28), big(1), big(58)]));

        let p = predicted_pattern(FamilyId::F5, &big(3)).unwrap();
        assert_eq!(p.lead, poly(&[1, 2, 1]));
        assert_eq!(p.periodic, vec![poly(&[1, 1]), poly(&[2, 4, 2])]);
        assert_eq!(eval_pattern(FamilyId::F5, 3, 1), (big(4), vec![big(2), big(8)]));
    }

    #[test]
    fn pointwise_verification() {
        let v = verify_at(FamilyId::F1, &big(22), &big(1)).unwrap();
        assert_eq!(v.value, big(2180));
        assert_eq!(v.expansion.as_ref().unwrap().to_string(), "[46; 1,2,4,2,1,92]");
        assert_eq!((v.x.clone(), v.y.clone()), (big(1961), big(42)));
        assert!(v.all_passed());

        let v = verify_at(FamilyId::F4, &big(2), &big(1)).unwrap();
        assert_eq!(v.value, big(82));
        assert_eq!(v.expansion.as_ref().unwrap().to_string(), "[9; 18]");
        assert_eq!((v.x.clone(), v.y.clone()), (big(163), big(18)));
        assert!(v.all_passed());

        let v = verify_at(FamilyId::F5, &big(2), &big(1)).unwrap();
        assert_eq!(v.value, big(630));
        assert_eq!(v.expansion.as_ref().unwrap().to_string(), "[25; 10,50]");
        assert_eq!((v.x.clone(), v.y.clone()), (big(251), big(10)));
        assert!(v.all_passed());

        let v = verify_at(FamilyId::F1, &big(22), &big(0)).unwrap();
        assert_eq!(v.expansion.as_ref().unwrap().to_string(), "[4; 1,2,4,2,1,8]");
        assert!(v.all_passed());
    }

    #[test]
    fn doubled_pattern_matches_half_period_at_zero() {
        // √2 has period 1, F1's pattern carries two copies
        let v = verify_at(FamilyId::F1, &big(2), &big(0)).unwrap();
        assert_eq!(v.pattern_verdict, Verdict::Pass);
        assert_eq!(v.expansion.unwrap().period_length(), 1);
    }

    #[test]
    fn uncovered_pairs_report_data() {
        let v = verify_at(FamilyId::F2, &big(57), &big(3)).unwrap();
        assert_eq!(v.pattern_verdict, Verdict::NotApplicable);
        assert_eq!(v.identity_verdict, Verdict::Pass);
        assert_ne!(v.fundamental_verdict, Verdict::Undetermined);
    }

    #[test]
    fn residues_mod_4_along_families() {
        // f ≡ 2 (mod 4): F2..F5 stay ≡ 2 for every t, F1 for even t
        for f in (2..400i64).filter(|f| f % 4 == 2 && exact_sqrt(f).is_none()) {
            for fam in FamilyId::ALL {
                let Ok(inst) = instantiate(fam, &big(f)) else { continue };
                for t in 0..=100i64 {
                    if fam == FamilyId::F1 && t % 2 == 1 {
                        continue;
                    }
                    let v = inst.f_poly.eval(&big(t));
                    assert_eq!(v % 4, big(2), "{fam} f={f} t={t}");
                }
            }
        }
    }

    #[test]
    fn y_polynomial_shapes() {
        for f in [2i64, 3, 7, 13, 41] {
            for fam in FamilyId::ALL {
                let Ok(i) = instantiate(fam, &big(f)) else { continue };
                let h = i.h.clone();
                let expected = match fam {
                    FamilyId::F1 => Polynomial::constant(h.clone()),
                    FamilyId::F4 => {
                        let slope = (i.c.clone() + 1) * h.clone() * h.clone() * h.clone() / (i.c.clone() - 1);
                        Polynomial::new(vec![h.clone(), slope])
                    }
                    _ => Polynomial::new(vec![h.clone(), h.clone() * h.clone() * h.clone()]),
                };
                assert_eq!(i.y_poly, expected, "{fam} f={f}");
            }
        }
    }

    #[test]
    fn family_ids_parse() {
        assert_eq!("F3".parse::<FamilyId>().unwrap(), FamilyId::F3);
        assert_eq!("f5".parse::<FamilyId>().unwrap(), FamilyId::F5);
        assert!("F6".parse::<FamilyId>().is_err());
    }
}
