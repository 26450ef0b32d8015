//! Curve configurations and the weighted blow-up at a cyclic quotient point.
//!
//! A blow-up with admissible primitive weights `w = (w₁, w₂)` at `1/m(1, q)`
//! extracts the toric divisor `E` with
//!
//! * log discrepancy `A(E) = (w₁ + w₂)/m`,
//! * `E² = −m/(w₁w₂)`,
//! * `ord_E(x^α y^γ) = (αw₁ + γw₂)/m`.
//!
//! Strict transforms satisfy `π*C = C̄ + ord_E(C)·E`, which determines the
//! new Gram matrix from `π*C·E = 0` and `π*C·π*D = C·D`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratlin::{dot, int, rat, Rational, SymMatrix};
use crate::surface::{QuotientPoint, SurfaceSpec};

/// Newton-minimal exponent set `{(α, γ)}` of a local equation in the two
/// coordinates at a marked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialGerm {
    monomials: Vec<(u64, u64)>,
}

impl MonomialGerm {
    /// Keeps only monomials not divisible by another one in the set.
    pub fn new(monomials: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut all: Vec<(u64, u64)> = monomials.into_iter().collect();
        all.sort_unstable();
        all.dedup();
        if all.is_empty() {
            return Err(Error::BadParameters(
                "a monomial germ needs at least one monomial".into(),
            ));
        }
        if all.contains(&(0, 0)) {
            return Err(Error::BadParameters(
                "germ contains a unit: the curve does not pass through the point".into(),
            ));
        }
        let minimal = all
            .iter()
            .copied()
            .filter(|&(a, g)| {
                !all.iter()
                    .any(|&(b, h)| (b, h) != (a, g) && b <= a && h <= g)
            })
            .collect();
        Ok(MonomialGerm { monomials: minimal })
    }

    pub fn monomials(&self) -> &[(u64, u64)] {
        &self.monomials
    }

    /// `min (αw₁ + γw₂)` over the germ; `m · ord_E`.
    pub fn weighted_order(&self, w: (u64, u64)) -> u64 {
        self.monomials
            .iter()
            .map(|&(a, g)| a * w.0 + g * w.1)
            .min()
            .expect("germ is nonempty")
    }

    /// Primitive positive directions where two monomials tie.
    pub fn kink_directions(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (i, &(a1, g1)) in self.monomials.iter().enumerate() {
            for &(a2, g2) in &self.monomials[i + 1..] {
                // w₁(a1 − a2) = w₂(g2 − g1)
                let da = a1 as i64 - a2 as i64;
                let dg = g2 as i64 - g1 as i64;
                if da != 0 && dg != 0 && (da > 0) == (dg > 0) {
                    let (w1, w2) = (dg.unsigned_abs(), da.unsigned_abs());
                    let g = num_integer::gcd(w1, w2);
                    out.push((w1 / g, w2 / g));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A finite list of curves on a surface with their intersection matrix and
/// an expression `−K ≡ Σ cᵢCᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSystem {
    pub names: Vec<String>,
    pub gram: SymMatrix,
    pub antican_coeffs: Vec<Rational>,
    /// `H·Cᵢ` for `H = O(1)`, when known.
    pub hyperplane_degrees: Option<Vec<Rational>>,
    pub marked_point: Option<QuotientPoint>,
    /// Local equation of each curve at the marked point.
    pub germs: Vec<Option<MonomialGerm>>,
    /// Which curves pass through the marked point.
    pub through_point: Vec<bool>,
}

impl CurveSystem {
    pub fn new(names: Vec<String>, gram: SymMatrix, antican_coeffs: Vec<Rational>) -> Result<Self> {
        let n = names.len();
        if gram.order() != n || antican_coeffs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} curve names, Gram of order {}, {} anticanonical coefficients",
                gram.order(),
                antican_coeffs.len()
            )));
        }
        if let Some(i) = antican_coeffs.iter().position(|c| c.is_negative()) {
            return Err(Error::InconsistentGram(format!(
                "anticanonical coefficient of {} is negative ({})",
                names[i], antican_coeffs[i]
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::BadParameters(format!("duplicate curve name `{a}`")));
            }
        }
        Ok(CurveSystem {
            names,
            gram,
            antican_coeffs,
            hyperplane_degrees: None,
            marked_point: None,
            germs: vec![None; n],
            through_point: vec![false; n],
        })
    }

    pub fn with_hyperplane_degrees(mut self, degrees: Vec<Rational>) -> Result<Self> {
        if degrees.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} hyperplane degrees for {} curves",
                degrees.len(),
                self.len()
            )));
        }
        self.hyperplane_degrees = Some(degrees);
        Ok(self)
    }

    /// Marks `point`; curves with a germ pass through it, as do the curves
    /// listed in `extra_through` (which must then carry a germ to be blown up).
    pub fn with_marked_point(
        mut self,
        point: QuotientPoint,
        germs: Vec<Option<MonomialGerm>>,
        extra_through: &[usize],
    ) -> Result<Self> {
        if germs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} germs for {} curves",
                germs.len(),
                self.len()
            )));
        }
        self.through_point = germs.iter().map(Option::is_some).collect();
        for &i in extra_through {
            self.through_point[i] = true;
        }
        self.germs = germs;
        self.marked_point = Some(point);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Intersection numbers `D·Cᵢ` for every basis curve.
    pub fn products(&self, d: &[Rational]) -> Vec<Rational> {
        self.gram.mul_vec(d)
    }
}

/// One identity checked by [`validate_config`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks that the Gram data is consistent with the surface: the
/// anticanonical expression squares to `(−K)²`, and, when hyperplane degrees
/// are known, `H·Cⱼ = Σᵢ (cᵢ/I)·Cᵢ·Cⱼ`. Fails on the first violated identity.
pub fn validate_config(spec: &SurfaceSpec, cs: &CurveSystem) -> Result<Vec<IdentityCheck>> {
    let index = spec.validate()?;
    let c = &cs.antican_coeffs;
    let mut checks = vec![IdentityCheck {
        identity: "(Σ cᵢCᵢ)² = (−K_S)²".into(),
        lhs: cs.gram.quadratic(c),
        rhs: spec.antican_square(),
    }];
    if let Some(degrees) = &cs.hyperplane_degrees {
        let hyperplane: Vec<Rational> = c.iter().map(|ci| ci / int(index)).collect();
        let rows = cs.gram.mul_vec(&hyperplane);
        for (j, (row, deg)) in rows.into_iter().zip(degrees).enumerate() {
            checks.push(IdentityCheck {
                identity: format!("H·{} = Σ (cᵢ/I)·Cᵢ·{}", cs.names[j], cs.names[j]),
                lhs: deg.clone(),
                rhs: row,
            });
        }
        checks.push(IdentityCheck {
            identity: "Σ (cᵢ/I)·(H·Cᵢ) = H²".into(),
            lhs: dot(&hyperplane, degrees),
            rhs: spec.hyperplane_square(),
        });
    }
    if let Some(bad) = checks.iter().find(|c| !c.holds()) {
        return Err(Error::InconsistentGram(format!(
            "{} violated: {} != {}",
            bad.identity, bad.lhs, bad.rhs
        )));
    }
    Ok(checks)
}

/// The blown-up configuration: original strict transforms followed by `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupResult {
    /// Strict transforms and `E` (last); `antican_coeffs` hold `π*(−K)`.
    pub curves: CurveSystem,
    pub point: QuotientPoint,
    pub weights: (u64, u64),
    pub log_discrepancy: Rational,
    /// `ord_E(Cᵢ)` for every original curve.
    pub pullback_coeffs: Vec<Rational>,
    pub e_square: Rational,
}

impl BlowupResult {
    pub fn exceptional_index(&self) -> usize {
        self.curves.len() - 1
    }
}

/// Weighted blow-up of the marked point of `cs` with weights `w`.
pub fn blow_up(cs: &CurveSystem, weights: (u64, u64)) -> Result<BlowupResult> {
    let point = cs
        .marked_point
        .clone()
        .ok_or_else(|| Error::BadParameters("curve system has no marked point".into()))?;
    if !point.is_admissible(weights) {
        return Err(Error::InadmissibleWeights(
            weights.0,
            weights.1,
            describe(&point),
        ));
    }
    if let Some(v) = point.primitivity_obstruction(weights) {
        return Err(Error::NonPrimitiveWeights(
            weights.0,
            weights.1,
            describe(&point),
            v.0,
            v.1,
        ));
    }
    let m = point.order as i64;
    let (w1, w2) = (weights.0 as i64, weights.1 as i64);

    let mut ords = Vec::with_capacity(cs.len());
    for i in 0..cs.len() {
        let ord = match (&cs.germs[i], cs.through_point[i]) {
            (Some(g), _) => rat(g.weighted_order(weights) as i64, m),
            (None, true) => {
                return Err(Error::MissingGerm {
                    curve: cs.names[i].clone(),
                    point: point.label.clone(),
                })
            }
            (None, false) => Rational::zero(),
        };
        ords.push(ord);
    }

    // −E² = m/(w₁w₂)
    let neg_e2 = rat(m, w1 * w2);
    let n = cs.len();
    let gram = SymMatrix::from_fn(n + 1, |i, j| match (i == n, j == n) {
        (true, true) => -neg_e2.clone(),
        (false, true) => &ords[i] * &neg_e2,
        (true, false) => &ords[j] * &neg_e2,
        (false, false) => cs.gram.get(i, j) - &ords[i] * &ords[j] * &neg_e2,
    });

    let mut names = cs.names.clone();
    names.push("E".into());
    let mut antican = cs.antican_coeffs.clone();
    antican.push(dot(&cs.antican_coeffs, &ords));

    let curves = CurveSystem::new(names, gram, antican)?;
    Ok(BlowupResult {
        curves,
        point,
        weights,
        log_discrepancy: rat(w1 + w2, m),
        pullback_coeffs: ords,
        e_square: -neg_e2,
    })
}

/// `π*(−K_S) = Σ aᵢC̄ᵢ + (Σ aᵢ·ord_E(Cᵢ))·E` as coefficients on the blown-up
/// basis.
pub fn pullback_anticanonical(br: &BlowupResult) -> Vec<Rational> {
    br.curves.antican_coeffs.clone()
}

/// Pullback of an original curve class `C_i`, i.e. `C̄ᵢ + ord_E(Cᵢ)E`.
pub fn pullback_curve(br: &BlowupResult, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); br.curves.len()];
    v[i] = int(1);
    v[br.exceptional_index()] = br.pullback_coeffs[i].clone();
    v
}

fn describe(p: &QuotientPoint) -> String {
    format!(
        "{} of type 1/{}({}, {})",
        p.label, p.order, p.local_weights.0, p.local_weights.1
    )
}
