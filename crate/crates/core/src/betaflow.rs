//! The volume function `λ ↦ vol(π*(−K_S) − λE)`, its integral and `β(E)`.
//!
//! On an interval where the negative support of the Zariski decomposition is
//! fixed, the positive part `P(λ)` is affine in `λ`, so the volume `P(λ)²` is
//! quadratic and every breakpoint is the root of an affine function. The
//! walker below finds them exactly.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{pullback_anticanonical, BlowupResult};
use crate::ratlin::{exact_sqrt, int, is_negative_definite, rat, Rational, SymMatrix};
use crate::surface::SurfaceSpec;
use crate::zariski::{nef_check, project, RDivisor};

/// `c₀ + c₁λ + c₂λ²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl Quadratic {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.c0 + x * (&self.c1 + x * &self.c2)
    }

    pub fn derivative(&self, x: &Rational) -> Rational {
        &self.c1 + int(2) * x * &self.c2
    }

    fn antiderivative(&self, x: &Rational) -> Rational {
        x * (&self.c0 + x * (&self.c1 / int(2) + x * &self.c2 / int(3)))
    }

    /// `∫ₐᵇ q(λ) dλ`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        self.antiderivative(b) - self.antiderivative(a)
    }
}

/// Exact piecewise quadratic on `[0, τ]`, zero beyond `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseQuadratic {
    pub breakpoints: Vec<Rational>,
    pub segments: Vec<Quadratic>,
}

impl PiecewiseQuadratic {
    pub fn tau(&self) -> &Rational {
        self.breakpoints.last().expect("at least one segment")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if x.is_negative() || x >= self.tau() {
            return Rational::zero();
        }
        let k = self.breakpoints[1..]
            .iter()
            .position(|b| x < b)
            .expect("x < τ");
        self.segments[k].eval(x)
    }

    /// Splits the segment containing `x` at `x`; the function is unchanged.
    pub fn refine(&self, x: &Rational) -> PiecewiseQuadratic {
        let mut out = self.clone();
        if x.is_positive() && x < self.tau() && !self.breakpoints.contains(x) {
            let k = self.breakpoints[1..].iter().position(|b| x < b).unwrap();
            out.breakpoints.insert(k + 1, x.clone());
            out.segments.insert(k + 1, self.segments[k].clone());
        }
        out
    }

    /// Checks continuity, non-negativity, monotonicity and `vol(τ) = 0`.
    pub fn check_shape(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::DegenerateConfig(msg));
        for (k, seg) in self.segments.iter().enumerate() {
            let (a, b) = (&self.breakpoints[k], &self.breakpoints[k + 1]);
            if a >= b {
                return fail(format!("breakpoints not increasing at {a}"));
            }
            if k + 1 < self.segments.len() && seg.eval(b) != self.segments[k + 1].eval(b) {
                return fail(format!("discontinuity at λ = {b}"));
            }
            // a quadratic's derivative is affine, so endpoint signs suffice
            if seg.derivative(a).is_positive() || seg.derivative(b).is_positive() {
                return fail(format!("volume increases on [{a}, {b}]"));
            }
            if seg.eval(b).is_negative() {
                return fail(format!("negative volume at λ = {b}"));
            }
        }
        let last = self.segments.last().unwrap();
        if !last.eval(self.tau()).is_zero() {
            return fail(format!(
                "volume at τ = {} is {}",
                self.tau(),
                last.eval(self.tau())
            ));
        }
        Ok(())
    }
}

/// Exact integral over `[0, τ]`.
pub fn integrate(pq: &PiecewiseQuadratic) -> Rational {
    pq.segments
        .iter()
        .enumerate()
        .map(|(k, q)| q.integral(&pq.breakpoints[k], &pq.breakpoints[k + 1]))
        .sum()
}

/// Zariski data on one segment of the volume curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentData {
    pub support: Vec<usize>,
    /// `P(λ) = positive_at_zero + λ·positive_slope` on this segment.
    pub positive_at_zero: RDivisor,
    pub positive_slope: RDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeCurve {
    pub curve: PiecewiseQuadratic,
    pub segments: Vec<SegmentData>,
}

struct Affine {
    coeffs0: Vec<Rational>,
    coeffs1: Vec<Rational>,
    p0: RDivisor,
    p1: RDivisor,
    prod0: Vec<Rational>,
    prod1: Vec<Rational>,
}

impl Affine {
    fn on_support(
        gram: &SymMatrix,
        base: &[Rational],
        dir: &[Rational],
        support: &[usize],
    ) -> Result<Self> {
        let (coeffs0, p0) = project(gram, base, support)?;
        let (coeffs1, p1) = project(gram, dir, support)?;
        let prod0 = gram.mul_vec(&p0);
        let prod1 = gram.mul_vec(&p1);
        Ok(Affine {
            coeffs0,
            coeffs1,
            p0,
            p1,
            prod0,
            prod1,
        })
    }

    fn product_at(&self, i: usize, x: &Rational) -> Rational {
        &self.prod0[i] + x * &self.prod1[i]
    }

    fn square(&self, gram: &SymMatrix) -> Quadratic {
        Quadratic {
            c0: gram.quadratic(&self.p0),
            c1: int(2) * gram.bilinear(&self.p0, &self.p1),
            c2: gram.quadratic(&self.p1),
        }
    }
}

/// Smallest root of `q` in `(lo, hi]` (`hi = None` means unbounded), given
/// `q(lo) > 0`.
fn first_root(q: &Quadratic, lo: &Rational, hi: Option<&Rational>) -> Result<Option<Rational>> {
    let in_range = |r: &Rational| r > lo && hi.is_none_or(|h| r <= h);
    if q.c2.is_zero() {
        if q.c1.is_zero() {
            return Ok(None);
        }
        let r = -&q.c0 / &q.c1;
        return Ok(in_range(&r).then_some(r));
    }
    let disc = &q.c1 * &q.c1 - int(4) * &q.c0 * &q.c2;
    if disc.is_negative() {
        return Ok(None);
    }
    match exact_sqrt(&disc) {
        Some(s) => {
            let two_a = int(2) * &q.c2;
            let mut roots = [(-&q.c1 - &s) / &two_a, (-&q.c1 + &s) / &two_a];
            roots.sort();
            Ok(roots.into_iter().find(|r| in_range(r)))
        }
        None => {
            // a root in range exists iff q changes sign or dips at the vertex
            let vertex = -&q.c1 / (int(2) * &q.c2);
            let dips = in_range(&vertex) && !q.eval(&vertex).is_positive();
            let crosses = match hi {
                Some(h) => !q.eval(h).is_positive(),
                None => q.c2.is_negative(),
            };
            if dips || crosses {
                Err(Error::IrrationalThreshold(format!(
                    "volume {} + {}λ + {}λ² vanishes at an irrational λ",
                    q.c0, q.c1, q.c2
                )))
            } else {
                Ok(None)
            }
        }
    }
}

/// Walks `λ ↦ vol(base + λ·dir)` from `λ = 0` to the first zero of the
/// volume, with `base` nef and big.
pub fn walk_volume(gram: &SymMatrix, base: &[Rational], dir: &[Rational]) -> Result<VolumeCurve> {
    if !nef_check(gram, base) {
        return Err(Error::DegenerateConfig(
            "starting divisor is not nef".into(),
        ));
    }
    let start = gram.quadratic(base);
    if !start.is_positive() {
        return Err(Error::DegenerateConfig(format!(
            "starting volume {start} is not positive"
        )));
    }

    let n = gram.order();
    let mut lambda = Rational::zero();
    let mut support: Vec<usize> = Vec::new();
    let mut breakpoints = vec![Rational::zero()];
    let mut quads = Vec::new();
    let mut segments = Vec::new();

    loop {
        // absorb curves that are negative now or about to become negative
        let aff = loop {
            let aff = Affine::on_support(gram, base, dir, &support)?;
            let joining: Vec<usize> = (0..n)
                .filter(|i| !support.contains(i))
                .filter(|&i| {
                    let v = aff.product_at(i, &lambda);
                    v.is_negative() || (v.is_zero() && aff.prod1[i].is_negative())
                })
                .collect();
            if joining.is_empty() {
                break aff;
            }
            support.extend(joining);
            support.sort_unstable();
            if !is_negative_definite(&gram.principal(&support)) {
                return Err(Error::DegenerateConfig(format!(
                    "negative support {support:?} is not negative definite at λ = {lambda}"
                )));
            }
        };

        let mut end: Option<Rational> = None;
        for i in (0..n).filter(|i| !support.contains(i)) {
            if aff.prod1[i].is_negative() {
                let r = -&aff.prod0[i] / &aff.prod1[i];
                if end.as_ref().is_none_or(|e| &r < e) {
                    end = Some(r);
                }
            }
        }
        let mut shrink: Option<Rational> = None;
        for (c0, c1) in aff.coeffs0.iter().zip(&aff.coeffs1) {
            if (c0 + &lambda * c1).is_negative() {
                return Err(Error::DegenerateConfig(format!(
                    "negative part coefficient is negative at λ = {lambda}"
                )));
            }
            if c1.is_negative() {
                let r = -c0 / c1;
                if shrink.as_ref().is_none_or(|s| &r < s) {
                    shrink = Some(r);
                }
            }
        }

        let quad = aff.square(gram);
        let limit = match (&end, &shrink) {
            (Some(e), Some(s)) => Some(e.min(s).clone()),
            (e, s) => e.clone().or_else(|| s.clone()),
        };
        let data = SegmentData {
            support: support.clone(),
            positive_at_zero: aff.p0.clone(),
            positive_slope: aff.p1.clone(),
        };

        if let Some(tau) = first_root(&quad, &lambda, limit.as_ref())? {
            breakpoints.push(tau);
            quads.push(quad);
            segments.push(data);
            break;
        }
        if let (Some(s), true) = (&shrink, shrink == limit) {
            return Err(Error::DegenerateConfig(format!(
                "negative support would have to shrink at λ = {s}"
            )));
        }
        let Some(next) = end else {
            return Err(Error::DegenerateConfig(
                "volume never vanishes along the ray".into(),
            ));
        };
        breakpoints.push(next.clone());
        quads.push(quad);
        segments.push(data);
        lambda = next;
    }

    Ok(VolumeCurve {
        curve: PiecewiseQuadratic {
            breakpoints,
            segments: quads,
        },
        segments,
    })
}

/// Volume curve of `π*(−K_S) − λE` on the blown-up surface.
pub fn volume_curve(br: &BlowupResult) -> Result<VolumeCurve> {
    let base = pullback_anticanonical(br);
    let mut dir = vec![Rational::zero(); base.len()];
    dir[br.exceptional_index()] = -Rational::one();
    walk_volume(&br.curves.gram, &base, &dir)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NotKSemistable,
    Inconclusive,
}

impl Verdict {
    pub fn or(self, other: Verdict) -> Verdict {
        if self == Verdict::NotKSemistable || other == Verdict::NotKSemistable {
            Verdict::NotKSemistable
        } else {
            Verdict::Inconclusive
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NotKSemistable => "NotKSemistable",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaReport {
    pub log_discrepancy: Rational,
    pub antican_sq: Rational,
    pub tau: Rational,
    pub volume_curve: VolumeCurve,
    pub integral: Rational,
    pub beta: Rational,
    pub verdict: Verdict,
}

/// `β(E) = A(E)·(−K)² − ∫₀^τ vol(π*(−K) − λE) dλ`. A negative value
/// certifies that `S` is not K-semistable; a non-negative one proves nothing.
pub fn beta(spec: &SurfaceSpec, br: &BlowupResult) -> Result<BetaReport> {
    let antican_sq = spec.antican_square();
    let pulled = br.curves.gram.quadratic(&pullback_anticanonical(br));
    if pulled != antican_sq {
        return Err(Error::InconsistentGram(format!(
            "(π*(−K))² = {pulled} differs from (−K)² = {antican_sq}"
        )));
    }
    let vc = volume_curve(br)?;
    let integral = integrate(&vc.curve);
    let beta = &br.log_discrepancy * &antican_sq - &integral;
    let verdict = if beta.is_negative() {
        Verdict::NotKSemistable
    } else {
        Verdict::Inconclusive
    };
    Ok(BetaReport {
        log_discrepancy: br.log_discrepancy.clone(),
        antican_sq,
        tau: vc.curve.tau().clone(),
        volume_curve: vc,
        integral,
        beta,
        verdict,
    })
}

/// Midpoints of `count` equal subintervals of `[0, τ]`.
pub fn sample_points(tau: &Rational, count: usize) -> Vec<Rational> {
    (0..count)
        .map(|k| tau * rat(2 * k as i64 + 1, 2 * count as i64))
        .collect()
}
