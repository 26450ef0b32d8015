//! Shipped scenarios for the five families and their closed forms.
//!
//! Curve self-intersections are derived from hyperplane degrees
//! (`H·C = deg C / (product of the weights of the plane containing C)`) and
//! local intersection numbers at the quotient point; `validate_config`
//! re-checks every table before use.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::scenario::*;
use crate::error::{Error, Result};
use crate::ratlin::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    S9,
    S27,
    S45,
    /// `(1, 3, 3n+3, 3n+4; 6n+9)`.
    Fam6n9 {
        n: u64,
    },
    /// `(1, 1, n+1, m+1; n+m+2)`.
    Fam11nm {
        n: u64,
        m: u64,
    },
    /// `(1, 3, 3n+4, 3n+5; 6n+11)`.
    Fam3n4 {
        n: u64,
    },
}

/// Preset name without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    S9,
    S27,
    S45,
    Fam6n9,
    Fam11nm,
    Fam3n4,
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "s9" => PresetName::S9,
            "s27" => PresetName::S27,
            "s45" => PresetName::S45,
            "fam-6n9" => PresetName::Fam6n9,
            "fam-11nm" => PresetName::Fam11nm,
            "fam-3n4" => PresetName::Fam3n4,
            other => {
                return Err(Error::BadParameters(format!(
                    "unknown preset `{other}` (expected s9, s27, s45, fam-6n9, fam-11nm, fam-3n4)"
                )))
            }
        })
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetName::S9 => "s9",
            PresetName::S27 => "s27",
            PresetName::S45 => "s45",
            PresetName::Fam6n9 => "fam-6n9",
            PresetName::Fam11nm => "fam-11nm",
            PresetName::Fam3n4 => "fam-3n4",
        })
    }
}

impl PresetName {
    /// Binds parameters. `allow_boundary` admits `n = m` for `fam-11nm`.
    pub fn with_params(
        self,
        n: Option<u64>,
        m: Option<u64>,
        allow_boundary: bool,
    ) -> Result<Preset> {
        let need = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| Error::BadParameters(format!("preset {self} requires --{flag}")))
        };
        Ok(match self {
            PresetName::S9 => Preset::S9,
            PresetName::S27 => Preset::S27,
            PresetName::S45 => Preset::S45,
            PresetName::Fam6n9 => Preset::Fam6n9 { n: need(n, "n")? },
            PresetName::Fam3n4 => Preset::Fam3n4 { n: need(n, "n")? },
            PresetName::Fam11nm => {
                let (n, m) = (need(n, "n")?, need(m, "m")?);
                if n > m || (n == m && !allow_boundary) {
                    return Err(Error::BadParameters(format!(
                        "fam-11nm needs n < m (or n = m with --allow-boundary), got n = {n}, m = {m}"
                    )));
                }
                Preset::Fam11nm { n, m }
            }
        })
    }
}

fn r(p: i64, q: i64) -> RatStr {
    RatStr(rat(p, q))
}

fn germs(entries: &[(&str, &[[u64; 2]])]) -> BTreeMap<String, GermList> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_vec()))
        .collect()
}

fn component(name: &str, point: &str, mono: &[[u64; 2]]) -> ComponentSchema {
    ComponentSchema {
        name: Some(name.into()),
        mult: r(1, 1),
        germs: germs(&[(point, mono)]),
        through: None,
    }
}

fn point(label: &str, m: u64, raw: [u64; 2], coords: [&str; 2]) -> SingularitySchema {
    SingularitySchema {
        label: label.into(),
        m,
        raw_weights: raw,
        coords: Some([coords[0].into(), coords[1].into()]),
    }
}

/// Two curves `A`, `B` with `A + B = H`, meeting only at one point.
fn two_curve_table(
    deg_a: Rational,
    deg_b: Rational,
    meet: Rational,
) -> (Vec<Vec<RatStr>>, Vec<RatStr>) {
    let a2 = &deg_a - &meet;
    let b2 = &deg_b - &meet;
    let gram = vec![
        vec![RatStr(a2), RatStr(meet.clone())],
        vec![RatStr(meet), RatStr(b2)],
    ];
    (gram, vec![RatStr(deg_a), RatStr(deg_b)])
}

impl Preset {
    pub fn name(&self) -> PresetName {
        match self {
            Preset::S9 => PresetName::S9,
            Preset::S27 => PresetName::S27,
            Preset::S45 => PresetName::S45,
            Preset::Fam6n9 { .. } => PresetName::Fam6n9,
            Preset::Fam11nm { .. } => PresetName::Fam11nm,
            Preset::Fam3n4 { .. } => PresetName::Fam3n4,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Preset::Fam6n9 { n } | Preset::Fam3n4 { n } => format!("{}(n={n})", self.name()),
            Preset::Fam11nm { n, m } => format!("{}(n={n},m={m})", self.name()),
            _ => self.name().to_string(),
        }
    }

    pub fn scenario(&self) -> Scenario {
        match *self {
            Preset::S9 => s9(),
            Preset::S27 => s27(),
            Preset::S45 => s45(),
            Preset::Fam6n9 { n } => fam_6n9(n),
            Preset::Fam11nm { n, m } => fam_11nm(n, m),
            Preset::Fam3n4 { n } => fam_3n4(n),
        }
    }
}

fn s9() -> Scenario {
    let names: Vec<String> = ["L1", "L2", "L3"].map(String::from).to_vec();
    // Lᵢ² = H·Lᵢ − 2·(1/4) with H·Lᵢ = 1/12; the lines meet pairwise at p_t only
    let gram = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| if i == j { r(-5, 12) } else { r(1, 4) })
                .collect()
        })
        .collect();
    let lines: [(&str, &[[u64; 2]]); 3] = [
        ("L1", &[[1, 0]]),
        ("L2", &[[0, 1]]),
        ("L3", &[[1, 0], [0, 1]]),
    ];
    Scenario {
        name: Some("s9".into()),
        normal_form: Some("t^2x + yz(ay + bz) + x^3f(x,y,z) = 0 in P(1,3,3,4)".into()),
        surface: SurfaceSchema {
            weights: [1, 3, 3, 4],
            degree: 9,
        },
        curves: CurvesSchema {
            names,
            gram,
            antican: vec![r(2, 1); 3],
            hyperplane_degrees: Some(vec![r(1, 12); 3]),
        },
        singularities: vec![point("p_t", 4, [1, 1], ["y", "z"])],
        blowup: Some(BlowupSchema {
            point: "p_t".into(),
            weights: [1, 1],
            germs: germs(&lines),
            through: None,
        }),
        lct: Some(LctSchema {
            components: lines.iter().map(|(n, g)| component(n, "p_t", g)).collect(),
            points: vec!["p_t".into()],
        }),
        mode: Mode::Both,
    }
}

fn s27() -> Scenario {
    // H_x = L + C, L = {x = z = 0} of degree 9, C = {x = z² + y³ = 0} of
    // degree 18 in P(6,9,13); they meet at p_t with local number 3/13
    let (gram, degrees) = two_curve_table(rat(9, 702), rat(18, 702), rat(3, 13));
    Scenario {
        name: Some("s27".into()),
        normal_form: Some(
            "t^2x + z^3 + z^2f_9(x,y) + zf_18(x,y) + f_27(x,y) = 0 in P(1,6,9,13)".into(),
        ),
        surface: SurfaceSchema {
            weights: [1, 6, 9, 13],
            degree: 27,
        },
        curves: CurvesSchema {
            names: vec!["L".into(), "C".into()],
            gram,
            antican: vec![r(2, 1), r(2, 1)],
            hyperplane_degrees: Some(degrees),
        },
        singularities: vec![point("p_t", 13, [6, 9], ["y", "z"])],
        blowup: None,
        lct: Some(LctSchema {
            components: vec![
                component("L", "p_t", &[[0, 1]]),
                component("C", "p_t", &[[0, 2], [3, 0]]),
            ],
            points: vec!["p_t".into()],
        }),
        mode: Mode::Alpha,
    }
}

fn s45() -> Scenario {
    // H_x = C = {x = z³ + y⁵ = 0}, irreducible, C² = H² = 1/66
    Scenario {
        name: Some("s45".into()),
        normal_form: Some("z^3 + y^5 + xf(x,y,z,t) = 0 in P(1,9,15,22)".into()),
        surface: SurfaceSchema {
            weights: [1, 9, 15, 22],
            degree: 45,
        },
        curves: CurvesSchema {
            names: vec!["C".into()],
            gram: vec![vec![r(1, 66)]],
            antican: vec![r(2, 1)],
            hyperplane_degrees: Some(vec![r(1, 66)]),
        },
        singularities: vec![point("p_t", 22, [9, 15], ["y", "z"])],
        blowup: None,
        lct: Some(LctSchema {
            components: vec![component("C", "p_t", &[[0, 3], [5, 0]])],
            points: vec!["p_t".into()],
        }),
        mode: Mode::Alpha,
    }
}

fn fam_6n9(n: u64) -> Scenario {
    let ni = n as i64;
    let (a2, a3) = (3 * ni + 3, 3 * ni + 4);
    // L = {x = y = 0} (degree 3), C = {x = z² + azy^{n+1} + by^{2n+2} = 0}
    // (degree 6n+6) in P(3, 3n+3, 3n+4); local intersection 2/(3n+4) at p_t
    let (gram, degrees) = two_curve_table(rat(1, a2 * a3), rat(2, 3 * a3), rat(2, a3));
    Scenario {
        name: Some(format!("fam-6n9(n={n})")),
        normal_form: Some(format!(
            "t^2x + txf(x,y,z) + z^2y + azy^{} + by^{} + xg(x,y,z) = 0 in P(1,3,{},{})",
            n + 2,
            2 * n + 3,
            a2,
            a3
        )),
        surface: SurfaceSchema {
            weights: [1, 3, 3 * n + 3, 3 * n + 4],
            degree: 6 * n + 9,
        },
        curves: CurvesSchema {
            names: vec!["L".into(), "C".into()],
            gram,
            antican: vec![r(2, 1), r(2, 1)],
            hyperplane_degrees: Some(degrees),
        },
        singularities: vec![point("p_t", 3 * n + 4, [3, 3 * n + 3], ["y", "z"])],
        blowup: None,
        lct: Some(LctSchema {
            components: vec![
                component("L", "p_t", &[[1, 0]]),
                component("C", "p_t", &[[0, 2], [n + 1, 1], [2 * n + 2, 0]]),
            ],
            points: vec!["p_t".into()],
        }),
        mode: Mode::Alpha,
    }
}

fn fam_11nm(n: u64, m: u64) -> Scenario {
    let (ni, mi) = (n as i64, m as i64);
    let count = (n + m + 2) as usize;
    let names: Vec<String> = (1..=count).map(|i| format!("L{i}")).collect();
    // H_z = Σ Lᵢ ∼ (n+1)H, H·Lᵢ = 1/(m+1), Lᵢ·Lⱼ = 1/(m+1) at p_t
    let gram = (0..count)
        .map(|i| {
            (0..count)
                .map(|j| if i == j { r(-mi, mi + 1) } else { r(1, mi + 1) })
                .collect()
        })
        .collect();
    let germ_map = names
        .iter()
        .map(|nm| (nm.clone(), vec![[1, 0], [0, 1]]))
        .collect();
    let mut singularities = vec![point("p_t", m + 1, [1, 1], ["x", "y"])];
    if n > 0 {
        singularities.push(point("p_z", n + 1, [1, 1], ["x", "y"]));
    }
    Scenario {
        name: Some(format!("fam-11nm(n={n},m={m})")),
        normal_form: Some(format!(
            "tz + f_{}(x,y) = 0 in P(1,1,{},{})",
            n + m + 2,
            n + 1,
            m + 1
        )),
        surface: SurfaceSchema {
            weights: [1, 1, n + 1, m + 1],
            degree: n + m + 2,
        },
        curves: CurvesSchema {
            names,
            gram,
            antican: vec![r(2, ni + 1); count],
            hyperplane_degrees: Some(vec![r(1, mi + 1); count]),
        },
        singularities,
        blowup: Some(BlowupSchema {
            point: "p_t".into(),
            weights: [1, 1],
            germs: germ_map,
            through: None,
        }),
        lct: None,
        mode: Mode::Beta,
    }
}

fn fam_3n4(n: u64) -> Scenario {
    let ni = n as i64;
    let (a2, a3) = (3 * ni + 4, 3 * ni + 5);
    Scenario {
        name: Some(format!("fam-3n4(n={n})")),
        normal_form: Some(format!(
            "t^2x + ty^{} + z^2y + xf_{}(x,y,z,t) = 0 in P(1,3,{},{})",
            n + 2,
            6 * n + 10,
            a2,
            a3
        )),
        surface: SurfaceSchema {
            weights: [1, 3, 3 * n + 4, 3 * n + 5],
            degree: 6 * n + 11,
        },
        curves: CurvesSchema {
            names: vec!["L".into(), "R".into()],
            gram: vec![
                vec![r(-(6 * ni + 7), a2 * a3), r(2, a3)],
                vec![r(2, a3), r(-4, 3 * a3)],
            ],
            antican: vec![r(2, 1), r(2, 1)],
            hyperplane_degrees: Some(vec![r(1, a2 * a3), r(2, 3 * a3)]),
        },
        singularities: vec![point("p_t", 3 * n + 5, [3, 3 * n + 4], ["y", "z"])],
        blowup: Some(BlowupSchema {
            point: "p_t".into(),
            weights: [2, n + 1],
            germs: germs(&[("L", &[[1, 0]]), ("R", &[[n + 1, 0], [0, 2]])]),
            through: None,
        }),
        lct: None,
        mode: Mode::Beta,
    }
}

/// `β = 8/(3(m+1)²) − 8/(3(n+1)²)` for `(1,1,n+1,m+1)`.
pub fn beta_11nm(n: u64, m: u64) -> Rational {
    let (n1, m1) = (n as i64 + 1, m as i64 + 1);
    rat(8, 3 * m1 * m1) - rat(8, 3 * n1 * n1)
}

/// `∫vol` for `(1,3,3n+4,3n+5)`:
/// `(8/27)(108n³+594n²+1053n+601)/((3n+4)²(3n+5)²)`.
pub fn integral_3n4(n: u64) -> Rational {
    let n = n as i64;
    let den = (3 * n + 4).pow(2) * (3 * n + 5).pow(2);
    rat(8, 27) * rat(108 * n.pow(3) + 594 * n * n + 1053 * n + 601, den)
}

/// `A(E)·(−K)² − ∫vol` for `(1,3,3n+4,3n+5)`, with `A = (n+3)/(3n+5)` and
/// `(−K)² = 4(6n+11)/(3(3n+4)(3n+5))`; simplifies to
/// `−4(54n³+189n²+171n+14)/(27(3n+4)²(3n+5)²)`.
pub fn beta_3n4(n: u64) -> Rational {
    let n = n as i64;
    let den = 27 * (3 * n + 4).pow(2) * (3 * n + 5).pow(2);
    rat(-4 * (54 * n.pow(3) + 189 * n * n + 171 * n + 14), den)
}

/// `lct(S, H_x) = (n+2)/(2n+3)` for `(1,3,3n+3,3n+4)`.
pub fn lct_6n9(n: u64) -> Rational {
    let n = n as i64;
    rat(n + 2, 2 * n + 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::int;

    #[test]
    fn closed_form_3n4_matches_its_definition() {
        for n in 0..=20u64 {
            let ni = n as i64;
            let a = rat(ni + 3, 3 * ni + 5);
            let k2 = rat(4 * (6 * ni + 11), 3 * (3 * ni + 4) * (3 * ni + 5));
            assert_eq!(beta_3n4(n), a * k2 - integral_3n4(n));
        }
        assert_eq!(beta_3n4(0), rat(-7, 1350));
    }

    #[test]
    fn boundary_closed_form_vanishes() {
        for n in 0..=10 {
            assert_eq!(beta_11nm(n, n), int(0));
        }
        assert_eq!(beta_11nm(0, 1), int(-2));
    }

    #[test]
    fn parameter_checks() {
        let f = PresetName::Fam11nm;
        assert!(f.with_params(Some(2), Some(2), false).is_err());
        assert!(f.with_params(Some(2), Some(2), true).is_ok());
        assert!(f.with_params(Some(3), Some(2), true).is_err());
        assert!(f.with_params(Some(1), None, false).is_err());
        assert!(PresetName::Fam3n4.with_params(None, None, false).is_err());
        assert!("fam-xyz".parse::<PresetName>().is_err());
        for name in ["s9", "s27", "s45", "fam-6n9", "fam-11nm", "fam-3n4"] {
            assert_eq!(name.parse::<PresetName>().unwrap().to_string(), name);
        }
    }
}
