//! Weighted hypersurfaces `S_d ⊂ P(a₀,a₁,a₂,a₃)` and their cyclic quotient
//! points.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ratlin::{int, rat, Rational};

/// A quintuple `(a₀,a₁,a₂,a₃; d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub weights: [u64; 4],
    pub degree: u64,
}

impl SurfaceSpec {
    /// Builds and validates a spec.
    pub fn new(weights: [u64; 4], degree: u64) -> Result<Self> {
        let spec = SurfaceSpec { weights, degree };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks ordering, positivity of the index and well-formedness; returns
    /// the index `I = Σaᵢ − d`.
    pub fn validate(&self) -> Result<i64> {
        let w = self.weights;
        if w[0] == 0 || w.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::UnsortedWeights(w));
        }
        if self.degree == 0 {
            return Err(Error::BadParameters("degree must be positive".into()));
        }
        let index = self.index();
        if index <= 0 {
            return Err(Error::NonPositiveIndex {
                index,
                weight_sum: w.iter().sum(),
                degree: self.degree,
            });
        }
        for skip in 0..4 {
            let triple: Vec<u64> = (0..4).filter(|&i| i != skip).map(|i| w[i]).collect();
            let g = triple.iter().fold(0, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::NotWellFormed(format!(
                    "gcd{triple:?} = {g} (every triple of weights must be coprime)"
                )));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                let g = w[i].gcd(&w[j]);
                if !self.degree.is_multiple_of(g) {
                    return Err(Error::NotWellFormed(format!(
                        "gcd({}, {}) = {g} does not divide d = {}",
                        w[i], w[j], self.degree
                    )));
                }
            }
        }
        Ok(index)
    }

    pub fn index(&self) -> i64 {
        self.weights.iter().sum::<u64>() as i64 - self.degree as i64
    }

    /// `O_S(1)² = d / (a₀a₁a₂a₃)`.
    pub fn hyperplane_square(&self) -> Rational {
        let prod: u64 = self.weights.iter().product();
        rat(self.degree as i64, prod as i64)
    }

    /// `(−K_S)² = I² · O_S(1)²`.
    pub fn antican_square(&self) -> Rational {
        let i = int(self.index());
        &i * &i * self.hyperplane_square()
    }

    /// Dimension of the degree-`k` piece of the graded coordinate ring:
    /// weighted monomials of degree `k` minus those of degree `k − d`.
    pub fn h0_count(&self, k: u64, exec: Exec) -> u64 {
        let base = count_monomials(&self.weights, k, exec);
        match k.checked_sub(self.degree) {
            Some(r) => base - count_monomials(&self.weights, r, exec),
            None => base,
        }
    }
}

/// `#{e ∈ N⁴ : Σ aᵢeᵢ = k}` by nested iteration over the three largest
/// weights; the exponent of `a₀` is determined by divisibility.
fn count_monomials(w: &[u64; 4], k: u64, exec: Exec) -> u64 {
    let [a0, a1, a2, a3] = *w;
    exec.sum_range(k / a3 + 1, |e3| {
        let r3 = k - e3 * a3;
        let mut count = 0;
        for e2 in 0..=r3 / a2 {
            let r2 = r3 - e2 * a2;
            for e1 in 0..=r2 / a1 {
                if (r2 - e1 * a1).is_multiple_of(a0) {
                    count += 1;
                }
            }
        }
        count
    })
}

/// A cyclic quotient singularity `1/m(1, q)` with its local coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPoint {
    pub label: String,
    pub order: u64,
    /// Weights as they come from the ambient action, before normalization.
    pub raw_weights: (u64, u64),
    /// Canonical pair `(1, q)`.
    pub local_weights: (u64, u64),
    pub coordinate_names: (String, String),
}

impl QuotientPoint {
    /// The unit `u` with `u·raw ≡ (1, q) mod m`.
    pub fn normalizing_unit(&self) -> u64 {
        if self.order == 1 {
            return 1;
        }
        inverse_mod(self.raw_weights.0 % self.order, self.order)
            .expect("raw weights were checked coprime at construction")
    }

    pub fn is_smooth(&self) -> bool {
        self.order == 1
    }

    /// `w` is admissible iff `w ≡ k·(1, q) mod m` for some `k`, i.e.
    /// `w₂ ≡ q·w₁`.
    pub fn is_admissible(&self, w: (u64, u64)) -> bool {
        let m = self.order;
        w.0 > 0 && w.1 > 0 && (w.1 % m) == (self.local_weights.1 * (w.0 % m)) % m
    }

    /// Smallest admissible positive multiple of the primitive integer
    /// direction of `dir`; the result is a primitive vector of the lattice
    /// `Z² + Z·(1,q)/m` scaled by `m`.
    pub fn primitive_on_ray(&self, dir: (u64, u64)) -> (u64, u64) {
        let g = dir.0.gcd(&dir.1);
        let (r1, r2) = (dir.0 / g, dir.1 / g);
        let m = self.order as i128;
        let q = self.local_weights.1 as i128;
        let defect = (r2 as i128 - q * r1 as i128).rem_euclid(m);
        let s = (m / defect.gcd(&m)) as u64;
        (s * r1, s * r2)
    }

    /// Returns the admissible proper divisor of `w` that witnesses
    /// non-primitivity, if any.
    pub fn primitivity_obstruction(&self, w: (u64, u64)) -> Option<(u64, u64)> {
        let g = w.0.gcd(&w.1);
        (2..=g)
            .filter(|j| g.is_multiple_of(*j))
            .map(|j| (w.0 / j, w.1 / j))
            .find(|&v| self.is_admissible(v))
    }
}

/// Normalizes `1/m(r₁, r₂)` to `1/m(1, q)` with `q = r₂·r₁⁻¹ mod m`.
/// For `m = 1` the type is `(1, 1)`.
pub fn normalize_quotient(
    label: &str,
    order: u64,
    raw: (u64, u64),
    coordinate_names: (&str, &str),
) -> Result<QuotientPoint> {
    if order == 0 {
        return Err(Error::BadParameters(
            "quotient order must be positive".into(),
        ));
    }
    for weight in [raw.0, raw.1] {
        if weight.gcd(&order) != 1 {
            return Err(Error::NotCoprime { weight, order });
        }
    }
    let local_weights = if order == 1 {
        (1, 1)
    } else {
        let u = inverse_mod(raw.0 % order, order).expect("coprime");
        let q = ((raw.1 % order) as u128 * u as u128 % order as u128) as u64;
        (1, q)
    };
    Ok(QuotientPoint {
        label: label.to_string(),
        order,
        raw_weights: raw,
        local_weights,
        coordinate_names: (
            coordinate_names.0.to_string(),
            coordinate_names.1.to_string(),
        ),
    })
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(w: [u64; 4], d: u64) -> SurfaceSpec {
        SurfaceSpec {
            weights: w,
            degree: d,
        }
    }

    #[test]
    fn validate_examples() {
        assert_eq!(s([1, 3, 3, 4], 9).validate().unwrap(), 2);
        assert_eq!(s([1, 6, 9, 13], 27).validate().unwrap(), 2);
        assert_eq!(s([1, 1, 1, 1], 3).validate().unwrap(), 1);
        assert_eq!(s([1, 9, 15, 22], 45).validate().unwrap(), 2);
    }

    #[test]
    fn validate_errors() {
        assert!(matches!(
            s([1, 1, 1, 1], 4).validate(),
            Err(Error::NonPositiveIndex { index: 0, .. })
        ));
        assert!(matches!(
            s([3, 1, 3, 4], 9).validate(),
            Err(Error::UnsortedWeights(_))
        ));
        // gcd(2,4,6) = 2
        assert!(matches!(
            s([2, 4, 6, 7], 12).validate(),
            Err(Error::NotWellFormed(_))
        ));
        // gcd(2,4) = 2 does not divide 7
        assert!(matches!(
            s([1, 2, 4, 5], 7).validate(),
            Err(Error::NotWellFormed(_))
        ));
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(s([1, 3, 3, 4], 9).hyperplane_square(), rat(1, 4));
        assert_eq!(s([1, 1, 1, 1], 3).hyperplane_square(), int(3));
        assert_eq!(s([1, 3, 3, 4], 9).antican_square(), int(1));
        for n in 0..=10i64 {
            let sp = s(
                [1, 3, 3 * n as u64 + 4, 3 * n as u64 + 5],
                6 * n as u64 + 11,
            );
            assert_eq!(
                sp.hyperplane_square(),
                rat(6 * n + 11, 3 * (3 * n + 4) * (3 * n + 5))
            );
            assert_eq!(
                sp.antican_square(),
                rat(4 * (6 * n + 11), 3 * (3 * n + 4) * (3 * n + 5))
            );
            for m in n + 1..=10 {
                let sp = s([1, 1, n as u64 + 1, m as u64 + 1], (n + m + 2) as u64);
                assert_eq!(sp.antican_square(), rat(4 * (n + m + 2), (n + 1) * (m + 1)));
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let p = normalize_quotient("p_t", 4, (1, 1), ("y", "z")).unwrap();
        assert_eq!((p.order, p.local_weights), (4, (1, 1)));
        let p = normalize_quotient("p_t", 8, (3, 7), ("y", "z")).unwrap();
        assert_eq!(p.local_weights, (1, 5));
        assert_eq!(p.normalizing_unit(), 3);
        for m in 1..12 {
            let p = normalize_quotient("p_t", m + 1, (1, 1), ("x", "y")).unwrap();
            assert_eq!(p.local_weights, (1, 1));
        }
        assert!(matches!(
            normalize_quotient("p", 6, (2, 1), ("y", "z")),
            Err(Error::NotCoprime {
                weight: 2,
                order: 6
            })
        ));
        // Lemma 4.3 type: raw (3, 3n+4) mod 3n+5 normalizes to (1, 2n+3)
        for n in 0..20u64 {
            let p = normalize_quotient("p_t", 3 * n + 5, (3, 3 * n + 4), ("y", "z")).unwrap();
            assert_eq!(p.local_weights, (1, 2 * n + 3));
        }
    }

    #[test]
    fn normalization_is_idempotent_and_unit_related() {
        for m in 2..30u64 {
            for r1 in 1..m {
                for r2 in 1..m {
                    if r1.gcd(&m) != 1 || r2.gcd(&m) != 1 {
                        continue;
                    }
                    let p = normalize_quotient("p", m, (r1, r2), ("a", "b")).unwrap();
                    let u = p.normalizing_unit();
                    assert_eq!((u * r1 % m, u * r2 % m), p.local_weights);
                    let again = normalize_quotient("p", m, p.local_weights, ("a", "b")).unwrap();
                    assert_eq!(again.local_weights, p.local_weights);
                }
            }
        }
    }

    #[test]
    fn admissibility_and_primitivity() {
        // 1/8(1,5): (2,2) admissible and primitive, (1,1) not admissible
        let p = normalize_quotient("p_t", 8, (3, 7), ("y", "z")).unwrap();
        assert!(p.is_admissible((2, 2)));
        assert!(!p.is_admissible((1, 1)));
        assert_eq!(p.primitivity_obstruction((2, 2)), None);
        assert_eq!(p.primitive_on_ray((1, 1)), (2, 2));
        // 1/13(6,9) ~ 1/13(1,8): the ray (6,9) has primitive vector (2,3)
        let p = normalize_quotient("p_t", 13, (6, 9), ("y", "z")).unwrap();
        assert_eq!(p.local_weights, (1, 8));
        assert_eq!(p.primitive_on_ray((6, 9)), (2, 3));
        assert_eq!(p.primitivity_obstruction((6, 9)), Some((2, 3)));
        let smooth = normalize_quotient("q", 1, (1, 1), ("u", "v")).unwrap();
        assert_eq!(smooth.primitive_on_ray((2, 4)), (1, 2));
    }

    #[test]
    fn h0_small_degrees() {
        let sp = s([1, 3, 3, 4], 9);
        assert_eq!(sp.h0_count(0, Exec::Sequential), 1);
        assert_eq!(sp.h0_count(1, Exec::Sequential), 1);
        assert_eq!(sp.h0_count(3, Exec::Sequential), 3);
        // P³: h0(O(k)) on a cubic surface is 3k(k+1)/2 + 1 for k >= 1
        let cubic = s([1, 1, 1, 1], 3);
        for k in 1..12u64 {
            assert_eq!(cubic.h0_count(k, Exec::Parallel), 3 * k * (k + 1) / 2 + 1);
        }
    }
}
