//! Upper bounds for `lct(S, D)` from toric valuations at cyclic quotient
//! points, and the resulting bounds `α ≤ lct/I`, `δ ≤ 3α`.
//!
//! For the valuation with weights `w` at `1/m(1, q)`:
//! `lct ≤ A(E)/ord_E(D) = (w₁ + w₂) / Σⱼ μⱼ·min(αw₁ + γw₂)` (the factors of `m`
//! cancel). The ratio only depends on the direction of `w`; its denominator
//! is concave and piecewise linear, so the minimum over interior directions
//! sits on a kink where two monomials of some germ tie.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::betaflow::Verdict;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::MonomialGerm;
use crate::ratlin::{int, Rational};
use crate::surface::{QuotientPoint, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub name: String,
    pub mult: Rational,
    /// Local equation at each marked point the component passes through.
    pub germs: BTreeMap<String, MonomialGerm>,
    /// Points the component passes through; each needs a germ.
    pub through: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDivisor {
    pub components: Vec<BoundaryComponent>,
}

impl BoundaryDivisor {
    pub fn new(components: Vec<BoundaryComponent>) -> Result<Self> {
        for c in &components {
            if c.mult <= Rational::zero() {
                return Err(Error::BadParameters(format!(
                    "component `{}` has non-positive multiplicity {}",
                    c.name, c.mult
                )));
            }
        }
        Ok(BoundaryDivisor { components })
    }

    /// `c·D`.
    pub fn scaled(&self, c: &Rational) -> BoundaryDivisor {
        let mut out = self.clone();
        for comp in &mut out.components {
            comp.mult = &comp.mult * c;
        }
        out
    }

    /// `(μⱼ, germⱼ)` for the components through `point`.
    pub fn at_point(&self, point: &str) -> Result<Vec<(Rational, MonomialGerm)>> {
        let mut parts = Vec::new();
        for c in &self.components {
            match c.germs.get(point) {
                Some(g) => parts.push((c.mult.clone(), g.clone())),
                None if c.through.contains(point) => {
                    return Err(Error::MissingGerm {
                        curve: c.name.clone(),
                        point: point.to_string(),
                    })
                }
                None => {}
            }
        }
        Ok(parts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Toric valuation at `point` with primitive admissible weights.
    Valuation { point: String, weights: (u64, u64) },
    /// Generic point of a component: `lct ≤ 1/μ`.
    Component { name: String, mult: Rational },
}

/// `(w₁ + w₂) / Σ μⱼ·ordⱼ(w)`, or `None` when no component passes.
pub fn valuation_bound(parts: &[(Rational, MonomialGerm)], w: (u64, u64)) -> Option<Rational> {
    let order: Rational = parts
        .iter()
        .map(|(mu, g)| mu * int(g.weighted_order(w) as i64))
        .sum();
    (!order.is_zero()).then(|| int((w.0 + w.1) as i64) / order)
}

/// Candidate weight vectors at `point`: every kink direction of every germ,
/// the raw and normalized type vectors and `(1, 1)`, each replaced by the
/// primitive admissible vector on its ray. Sorted and deduplicated.
pub fn candidate_weights(
    point: &QuotientPoint,
    parts: &[(Rational, MonomialGerm)],
) -> Vec<(u64, u64)> {
    let mut dirs: Vec<(u64, u64)> = parts
        .iter()
        .flat_map(|(_, g)| g.kink_directions())
        .collect();
    dirs.push(point.raw_weights);
    dirs.push(point.local_weights);
    dirs.push((1, 1));
    let mut out: Vec<(u64, u64)> = dirs
        .into_iter()
        .map(|d| point.primitive_on_ray(d))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Best valuation bound at one point with its witness weights.
pub fn lct_ub_at_point(
    point: &QuotientPoint,
    parts: &[(Rational, MonomialGerm)],
) -> Option<(Rational, (u64, u64))> {
    let mut best: Option<(Rational, (u64, u64))> = None;
    for w in candidate_weights(point, parts) {
        let Some(v) = valuation_bound(parts, w) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _)| &v < b) {
            best = Some((v, w));
        }
    }
    best
}

/// Minimum of the component bounds `1/μ` and the valuation bounds at every
/// candidate point. Ties keep the earlier witness (components first, then
/// points in the given order).
pub fn lct_ub(
    divisor: &BoundaryDivisor,
    points: &[QuotientPoint],
    exec: Exec,
) -> Result<(Rational, Witness)> {
    let mut best: Option<(Rational, Witness)> = None;
    for c in &divisor.components {
        let v = Rational::one() / &c.mult;
        if best.as_ref().is_none_or(|(b, _)| &v < b) {
            best = Some((
                v,
                Witness::Component {
                    name: c.name.clone(),
                    mult: c.mult.clone(),
                },
            ));
        }
    }
    let per_point = exec.map(points, |p| -> Result<_> {
        let parts = divisor.at_point(&p.label)?;
        Ok(lct_ub_at_point(p, &parts))
    });
    for (p, res) in points.iter().zip(per_point) {
        if let Some((v, w)) = res? {
            if best.as_ref().is_none_or(|(b, _)| &v < b) {
                best = Some((
                    v,
                    Witness::Valuation {
                        point: p.label.clone(),
                        weights: w,
                    },
                ));
            }
        }
    }
    best.ok_or_else(|| Error::BadParameters("boundary divisor has no components".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaReport {
    pub index: i64,
    pub lct_ub: Rational,
    pub witness: Witness,
    pub alpha_ub: Rational,
    pub delta_ub: Rational,
    pub verdict: Verdict,
}

/// For `D ∈ |O(1)|` (so `I·D ≡ −K`): `α ≤ lct(S, D)/I` and `δ ≤ 3α`;
/// `δ < 1` certifies that `S` is not K-semistable.
pub fn alpha_verdict(
    spec: &SurfaceSpec,
    divisor: &BoundaryDivisor,
    points: &[QuotientPoint],
    exec: Exec,
) -> Result<AlphaReport> {
    let index = spec.validate()?;
    if spec.weights[0] != 1 {
        return Err(Error::NonUnitFirstWeight(spec.weights[0]));
    }
    let (lct, witness) = lct_ub(divisor, points, exec)?;
    let alpha_ub = &lct / int(index);
    let delta_ub = int(3) * &alpha_ub;
    let verdict = if delta_ub < Rational::one() {
        Verdict::NotKSemistable
    } else {
        Verdict::Inconclusive
    };
    Ok(AlphaReport {
        index,
        lct_ub: lct,
        witness,
        alpha_ub,
        delta_ub,
        verdict,
    })
}
