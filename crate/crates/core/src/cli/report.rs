//! Report assembly and rendering.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use super::scenario::{Resolved, Scenario, SchemaError};
use crate::betaflow::{beta, Verdict};
use crate::exec::Exec;
use crate::geometry::{blow_up, validate_config, IdentityCheck};
use crate::lctalpha::{alpha_verdict, Witness};
use crate::ratlin::{int, parse_rational, Rational};

fn s(r: &Rational) -> String {
    r.to_string()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(s).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: Scenario,
    pub surface: SurfaceOut,
    pub singularities: Vec<SingularityOut>,
    pub checks: Vec<CheckOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaOut>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceOut {
    pub weights: [u64; 4],
    pub degree: u64,
    pub index: i64,
    pub hyperplane_square: String,
    pub antican_square: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityOut {
    pub label: String,
    pub order: u64,
    pub raw_weights: [u64; 2],
    /// `(1, q)`.
    pub local_weights: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOut {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

impl From<&IdentityCheck> for CheckOut {
    fn from(c: &IdentityCheck) -> Self {
        CheckOut {
            identity: c.identity.clone(),
            lhs: s(&c.lhs),
            rhs: s(&c.rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaOut {
    pub point: String,
    pub weights: [u64; 2],
    pub log_discrepancy: String,
    pub e_square: String,
    /// `ord_E` of each original curve, in curve order.
    pub orders: Vec<String>,
    /// Strict transforms followed by `E`.
    pub curves: Vec<String>,
    pub gram: Vec<Vec<String>>,
    pub pullback_antican: Vec<String>,
    pub nef_threshold: String,
    pub segments: Vec<SegmentOut>,
    pub tau: String,
    pub integral: String,
    pub a_times_antican_square: String,
    pub beta: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentOut {
    pub from: String,
    pub to: String,
    pub support: Vec<String>,
    /// `P(λ) = positive_at_zero + λ·positive_slope`.
    pub positive_at_zero: Vec<String>,
    pub positive_slope: Vec<String>,
    /// `vol = c0 + c1·λ + c2·λ²`.
    pub volume: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaOut {
    pub lct_ub: String,
    pub witness: WitnessOut,
    pub alpha_ub: String,
    pub delta_ub: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessOut {
    Valuation { point: String, weights: [u64; 2] },
    Component { name: String, mult: String },
}

impl From<&Witness> for WitnessOut {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Valuation { point, weights } => WitnessOut::Valuation {
                point: point.clone(),
                weights: [weights.0, weights.1],
            },
            Witness::Component { name, mult } => WitnessOut::Component {
                name: name.clone(),
                mult: s(mult),
            },
        }
    }
}

fn beta_out(r: &Resolved) -> Result<Option<BetaOut>, SchemaError> {
    let Some(w) = r.blowup_weights else {
        return Ok(None);
    };
    let at = |error| SchemaError {
        section: "blowup",
        error,
    };
    let br = blow_up(&r.curves, w).map_err(at)?;
    let rep = beta(&r.spec, &br).map_err(at)?;
    let names = &br.curves.names;
    let pq = &rep.volume_curve.curve;
    let segments: Vec<SegmentOut> = rep
        .volume_curve
        .segments
        .iter()
        .zip(&pq.segments)
        .enumerate()
        .map(|(k, (seg, q))| SegmentOut {
            from: s(&pq.breakpoints[k]),
            to: s(&pq.breakpoints[k + 1]),
            support: seg.support.iter().map(|&i| names[i].clone()).collect(),
            positive_at_zero: strs(&seg.positive_at_zero),
            positive_slope: strs(&seg.positive_slope),
            volume: [s(&q.c0), s(&q.c1), s(&q.c2)],
        })
        .collect();
    // π*(−K) − λE stays nef up to the end of the first segment with empty support
    let nef_threshold = match rep.volume_curve.segments.first() {
        Some(seg) if seg.support.is_empty() => pq.breakpoints[1].clone(),
        _ => Rational::zero(),
    };
    Ok(Some(BetaOut {
        point: br.point.label.clone(),
        weights: [w.0, w.1],
        log_discrepancy: s(&rep.log_discrepancy),
        e_square: s(&br.e_square),
        orders: strs(&br.pullback_coeffs),
        curves: names.clone(),
        gram: br.curves.gram.rows().iter().map(|row| strs(row)).collect(),
        pullback_antican: strs(&br.curves.antican_coeffs),
        nef_threshold: s(&nef_threshold),
        segments,
        tau: s(&rep.tau),
        integral: s(&rep.integral),
        a_times_antican_square: s(&(&rep.log_discrepancy * &rep.antican_sq)),
        beta: s(&rep.beta),
        verdict: rep.verdict,
    }))
}

/// Resolves, validates and evaluates a scenario.
pub fn build_report(sc: &Scenario, exec: Exec) -> Result<Report, SchemaError> {
    let r = sc.resolve()?;
    let checks = validate_config(&r.spec, &r.curves).map_err(|error| SchemaError {
        section: "curves",
        error,
    })?;

    let beta = if sc.mode.wants_beta() {
        beta_out(&r)?
    } else {
        None
    };
    let alpha = match (&r.boundary, sc.mode.wants_alpha()) {
        (Some((divisor, points)), true) => {
            let a = alpha_verdict(&r.spec, divisor, points, exec).map_err(|error| SchemaError {
                section: "lct",
                error,
            })?;
            Some(AlphaOut {
                lct_ub: s(&a.lct_ub),
                witness: (&a.witness).into(),
                alpha_ub: s(&a.alpha_ub),
                delta_ub: s(&a.delta_ub),
                verdict: a.verdict,
            })
        }
        _ => None,
    };

    let verdict = [
        beta.as_ref().map(|b| b.verdict),
        alpha.as_ref().map(|a| a.verdict),
    ]
    .into_iter()
    .flatten()
    .fold(Verdict::Inconclusive, Verdict::or);

    Ok(Report {
        scenario: sc.clone(),
        surface: SurfaceOut {
            weights: r.spec.weights,
            degree: r.spec.degree,
            index: r.index,
            hyperplane_square: s(&r.spec.hyperplane_square()),
            antican_square: s(&r.spec.antican_square()),
        },
        singularities: r
            .points
            .iter()
            .map(|p| SingularityOut {
                label: p.label.clone(),
                order: p.order,
                raw_weights: [p.raw_weights.0, p.raw_weights.1],
                local_weights: [p.local_weights.0, p.local_weights.1],
            })
            .collect(),
        checks: checks.iter().map(CheckOut::from).collect(),
        beta,
        alpha,
        verdict,
    })
}

/// `c₁·s₁ + c₂·s₂ + …` with zero terms dropped and signs folded in.
fn signed_sum<'a>(terms: impl IntoIterator<Item = (Rational, &'a str)>, sep: &str) -> String {
    let mut out = String::new();
    for (coef, sym) in terms {
        if coef.is_zero() {
            continue;
        }
        let neg = coef < int(0);
        let abs = if neg { -coef } else { coef };
        let body = match (sym.is_empty(), abs == int(1)) {
            (true, _) => abs.to_string(),
            (false, true) => sym.to_string(),
            (false, false) => format!("{abs}{sep}{sym}"),
        };
        let sign = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn parsed(c: &str) -> Rational {
    parse_rational(c).unwrap_or_else(|| int(0))
}

fn poly(c: &[String; 3]) -> String {
    signed_sum(c.iter().map(|x| parsed(x)).zip(["", "λ", "λ²"]), "")
}

fn combo(names: &[String], coeffs: &[String]) -> String {
    signed_sum(
        coeffs
            .iter()
            .map(|x| parsed(x))
            .zip(names.iter().map(String::as_str)),
        "·",
    )
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut o = String::new();
        let sf = &self.surface;
        if let Some(n) = &self.scenario.name {
            let _ = writeln!(o, "scenario {n}");
        }
        let w = sf.weights;
        let _ = writeln!(
            o,
            "surface: degree {} in P({},{},{},{}), index {}, H² = {}, (−K)² = {}",
            sf.degree, w[0], w[1], w[2], w[3], sf.index, sf.hyperplane_square, sf.antican_square
        );
        for p in &self.singularities {
            let _ = writeln!(
                o,
                "singularity {}: 1/{}({},{}) ~ 1/{}({},{})",
                p.label,
                p.order,
                p.raw_weights[0],
                p.raw_weights[1],
                p.order,
                p.local_weights[0],
                p.local_weights[1]
            );
        }
        let _ = writeln!(o, "checks: {} identities hold", self.checks.len());

        if let Some(b) = &self.beta {
            let _ = writeln!(
                o,
                "blow-up at {} with weights ({},{}): A(E) = {}, E² = {}",
                b.point, b.weights[0], b.weights[1], b.log_discrepancy, b.e_square
            );
            let n = b.curves.len();
            let _ = writeln!(o, "  curve  ord_E  π*(−K)  | Gram");
            for i in 0..n {
                let ord = b.orders.get(i).map(String::as_str).unwrap_or("-");
                let _ = writeln!(
                    o,
                    "  {:<5}  {:<5}  {:<6}  | {}",
                    b.curves[i],
                    ord,
                    b.pullback_antican[i],
                    b.gram[i].join("  ")
                );
            }
            let _ = writeln!(o, "nef threshold: λ ≤ {}", b.nef_threshold);
            for seg in &b.segments {
                let sup = if seg.support.is_empty() {
                    "∅".to_string()
                } else {
                    format!("{{{}}}", seg.support.join(", "))
                };
                let _ = writeln!(
                    o,
                    "  [{}, {}]  Neg ⊂ {}  P = ({}) + λ({})  vol = {}",
                    seg.from,
                    seg.to,
                    sup,
                    combo(&b.curves, &seg.positive_at_zero),
                    combo(&b.curves, &seg.positive_slope),
                    poly(&seg.volume)
                );
            }
            let _ = writeln!(o, "pseudoeffective threshold τ = {}", b.tau);
            let _ = writeln!(o, "∫₀^τ vol = {}", b.integral);
            let _ = writeln!(o, "A(E)·(−K)² = {}", b.a_times_antican_square);
            let _ = writeln!(o, "β(E) = {}  [{}]", b.beta, b.verdict);
        }

        if let Some(a) = &self.alpha {
            let wit = match &a.witness {
                WitnessOut::Valuation { point, weights } => {
                    format!(
                        "valuation at {point} with weights ({},{})",
                        weights[0], weights[1]
                    )
                }
                WitnessOut::Component { name, mult } => {
                    format!("component {name} with multiplicity {mult}")
                }
            };
            let _ = writeln!(o, "lct ≤ {} ({wit})", a.lct_ub);
            let _ = writeln!(o, "α ≤ {}, δ ≤ {}  [{}]", a.alpha_ub, a.delta_ub, a.verdict);
        }
        let _ = writeln!(o, "verdict: {}", self.verdict);
        o
    }
}
