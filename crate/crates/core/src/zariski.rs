//! Nefness, Zariski decomposition and volume of rational divisor classes
//! expressed on a finite curve basis.
//!
//! Nefness and pseudoeffectivity are relative to the basis: a class is nef if
//! it meets every basis curve non-negatively.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratlin::{dot, is_negative_definite, solve, Rational, SymMatrix};

/// Coefficients on the curve basis.
pub type RDivisor = Vec<Rational>;

/// `D = P + Σ nⱼCⱼ` with `P` nef, `P·Cⱼ = 0` on the support and the support
/// negative definite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub positive: RDivisor,
    /// Sorted basis indices with strictly positive coefficient.
    pub support: Vec<usize>,
    pub negative_coeffs: Vec<Rational>,
    /// `P²`.
    pub volume: Rational,
}

impl Decomposition {
    /// Negative part as a full coefficient vector.
    pub fn negative(&self, len: usize) -> RDivisor {
        let mut n = vec![Rational::zero(); len];
        for (&i, c) in self.support.iter().zip(&self.negative_coeffs) {
            n[i] = c.clone();
        }
        n
    }
}

pub fn nef_check(gram: &SymMatrix, d: &[Rational]) -> bool {
    gram.mul_vec(d).iter().all(|x| !x.is_negative())
}

/// Orthogonal projection of `d` away from `support`: returns the support
/// coefficients `n` and `P = d − Σ nⱼCⱼ` with `P·Cⱼ = 0` for `j` in support.
pub(crate) fn project(
    gram: &SymMatrix,
    d: &[Rational],
    support: &[usize],
) -> Result<(Vec<Rational>, RDivisor)> {
    let dc = gram.mul_vec(d);
    let rhs: Vec<Rational> = support.iter().map(|&j| dc[j].clone()).collect();
    let coeffs = if support.is_empty() {
        Vec::new()
    } else {
        solve(&gram.principal(support), &rhs)?
    };
    let mut p = d.to_vec();
    for (&j, c) in support.iter().zip(&coeffs) {
        p[j] -= c;
    }
    Ok((coeffs, p))
}

fn finish(
    gram: &SymMatrix,
    support: &[usize],
    coeffs: Vec<Rational>,
    positive: RDivisor,
) -> Result<Decomposition> {
    if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
        return Err(Error::NotPseudoeffective(format!(
            "negative part would need coefficient {c}"
        )));
    }
    let volume = gram.quadratic(&positive);
    if volume.is_negative() {
        return Err(Error::NotPseudoeffective(format!(
            "positive part has square {volume}"
        )));
    }
    // zero coefficients are ties: the curve is orthogonal to P either way
    let (support, negative_coeffs) = support
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&i, c)| (i, c))
        .unzip();
    Ok(Decomposition {
        positive,
        support,
        negative_coeffs,
        volume,
    })
}

/// Zariski decomposition by support growth: every curve meeting the current
/// positive part negatively joins the support, until the positive part is
/// nef.
pub fn decompose(gram: &SymMatrix, d: &[Rational]) -> Result<Decomposition> {
    if d.len() != gram.order() {
        return Err(Error::DimensionMismatch(format!(
            "divisor has {} coefficients, basis has {} curves",
            d.len(),
            gram.order()
        )));
    }
    let mut support: Vec<usize> = Vec::new();
    loop {
        let (coeffs, p) = project(gram, d, &support)?;
        let products = gram.mul_vec(&p);
        let joining: Vec<usize> = (0..gram.order())
            .filter(|i| products[*i].is_negative() && !support.contains(i))
            .collect();
        if joining.is_empty() {
            return finish(gram, &support, coeffs, p);
        }
        support.extend(joining);
        support.sort_unstable();
        if !is_negative_definite(&gram.principal(&support)) {
            return Err(Error::NotPseudoeffective(format!(
                "support {support:?} is not negative definite"
            )));
        }
    }
}

/// `vol(D) = P²`, and `0` when `D` is not pseudoeffective.
pub fn volume(gram: &SymMatrix, d: &[Rational]) -> Rational {
    match decompose(gram, d) {
        Ok(dec) => dec.volume,
        Err(_) => Rational::zero(),
    }
}

/// Exhaustive oracle: enumerates every negative-definite subset of the basis
/// once (with the inverse of its Gram block), then tests each as a candidate
/// negative support. Intended for small bases in tests.
#[derive(Debug, Clone)]
pub struct BruteForce {
    gram: SymMatrix,
    supports: Vec<(Vec<usize>, Vec<Vec<Rational>>)>,
}

impl BruteForce {
    pub fn new(gram: &SymMatrix) -> Result<Self> {
        let n = gram.order();
        if n > 16 {
            return Err(Error::BadParameters(format!(
                "brute force is limited to 16 curves, got {n}"
            )));
        }
        let mut supports = Vec::new();
        for mask in 0u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let block = gram.principal(&s);
            if !is_negative_definite(&block) {
                continue;
            }
            let mut inverse = Vec::with_capacity(s.len());
            for k in 0..s.len() {
                let mut e = vec![Rational::zero(); s.len()];
                e[k] = Rational::one();
                inverse.push(solve(&block, &e)?);
            }
            // the block is symmetric, so columns double as rows
            supports.push((s, inverse));
        }
        Ok(BruteForce {
            gram: gram.clone(),
            supports,
        })
    }

    /// The decomposition, or an error if no subset qualifies or two
    /// qualifying subsets disagree on the positive part.
    pub fn decompose(&self, d: &[Rational]) -> Result<Decomposition> {
        let gram = &self.gram;
        let dc = gram.mul_vec(d);
        let mut found: Option<Decomposition> = None;
        for (support, inverse) in &self.supports {
            let rhs: Vec<Rational> = support.iter().map(|&j| dc[j].clone()).collect();
            // stop at the first negative coefficient
            let Some(coeffs) = inverse
                .iter()
                .map(|row| Some(dot(row, &rhs)).filter(|c| !c.is_negative()))
                .collect::<Option<Vec<Rational>>>()
            else {
                continue;
            };
            // P·Cᵢ = D·Cᵢ − Σ nⱼ Cⱼ·Cᵢ, checked off the support with early exit
            let meets_negatively = (0..gram.order()).filter(|i| !support.contains(i)).any(|i| {
                let correction: Rational = support
                    .iter()
                    .zip(&coeffs)
                    .map(|(&j, c)| gram.get(i, j) * c)
                    .sum();
                (&dc[i] - correction).is_negative()
            });
            if meets_negatively {
                continue;
            }
            let mut p = d.to_vec();
            for (&j, c) in support.iter().zip(&coeffs) {
                p[j] -= c;
            }
            let Ok(dec) = finish(gram, support, coeffs, p) else {
                continue;
            };
            match &found {
                None => found = Some(dec),
                Some(prev) if prev.positive != dec.positive => {
                    return Err(Error::DegenerateConfig(format!(
                        "two admissible supports {:?} and {:?} give different positive parts",
                        prev.support, dec.support
                    )));
                }
                Some(_) => {}
            }
        }
        found.ok_or_else(|| Error::NotPseudoeffective("no subset of curves qualifies".into()))
    }
}

/// One-shot [`BruteForce`].
pub fn decompose_bruteforce(gram: &SymMatrix, d: &[Rational]) -> Result<Decomposition> {
    if d.len() != gram.order() {
        return Err(Error::DimensionMismatch(format!(
            "divisor has {} coefficients, basis has {} curves",
            d.len(),
            gram.order()
        )));
    }
    BruteForce::new(gram)?.decompose(d)
}
