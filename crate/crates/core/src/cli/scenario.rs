//! JSON scenario schema and its translation into the domain types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{CurveSystem, MonomialGerm};
use crate::lctalpha::{BoundaryComponent, BoundaryDivisor};
use crate::ratlin::{parse_rational, Rational, SymMatrix};
use crate::surface::{normalize_quotient, QuotientPoint, SurfaceSpec};

/// A rational that (de)serializes as the string `"p/q"` or `"p"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatStr(pub Rational);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatStr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or \"p\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatStr, E> {
                parse_rational(v)
                    .map(RatStr)
                    .ok_or_else(|| E::custom(format!("invalid rational \"{v}\"")))
            }
        }
        d.deserialize_str(V)
    }
}

impl From<Rational> for RatStr {
    fn from(r: Rational) -> Self {
        RatStr(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Beta,
    Alpha,
    Both,
}

impl Mode {
    pub fn wants_beta(self) -> bool {
        matches!(self, Mode::Beta | Mode::Both)
    }

    pub fn wants_alpha(self) -> bool {
        matches!(self, Mode::Alpha | Mode::Both)
    }
}

pub type GermList = Vec<[u64; 2]>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Normal form of the defining polynomial; documentation only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    pub surface: SurfaceSchema,
    pub curves: CurvesSchema,
    #[serde(default)]
    pub singularities: Vec<SingularitySchema>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupSchema>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lct: Option<LctSchema>,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSchema {
    pub weights: [u64; 4],
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesSchema {
    pub names: Vec<String>,
    pub gram: Vec<Vec<RatStr>>,
    pub antican: Vec<RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplane_degrees: Option<Vec<RatStr>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularitySchema {
    pub label: String,
    pub m: u64,
    pub raw_weights: [u64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupSchema {
    pub point: String,
    pub weights: [u64; 2],
    pub germs: BTreeMap<String, GermList>,
    /// Curves through the point; defaults to those with a germ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub through: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LctSchema {
    pub components: Vec<ComponentSchema>,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSchema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mult: RatStr,
    pub germs: BTreeMap<String, GermList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub through: Option<Vec<String>>,
}

/// A scenario resolved into domain values.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: SurfaceSpec,
    pub index: i64,
    pub curves: CurveSystem,
    pub points: Vec<QuotientPoint>,
    pub blowup_weights: Option<(u64, u64)>,
    pub boundary: Option<(BoundaryDivisor, Vec<QuotientPoint>)>,
}

/// A semantic error tagged with the top-level section it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub section: &'static str,
    pub error: Error,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.section, self.error)
    }
}

fn at(section: &'static str) -> impl Fn(Error) -> SchemaError {
    move |error| SchemaError { section, error }
}

fn germ(list: &GermList) -> Result<MonomialGerm> {
    MonomialGerm::new(list.iter().map(|&[a, g]| (a, g)))
}

impl Scenario {
    pub fn from_json(text: &str) -> serde_json::Result<Scenario> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn point(&self, label: &str) -> Result<QuotientPoint> {
        let s = self
            .singularities
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let (c1, c2) = match &s.coords {
            Some([a, b]) => (a.as_str(), b.as_str()),
            None => ("u", "v"),
        };
        normalize_quotient(
            &s.label,
            s.m,
            (s.raw_weights[0], s.raw_weights[1]),
            (c1, c2),
        )
    }

    /// Resolves labels and builds domain values; does not run the
    /// consistency checks of [`crate::geometry::validate_config`].
    pub fn resolve(&self) -> std::result::Result<Resolved, SchemaError> {
        let spec = SurfaceSpec {
            weights: self.surface.weights,
            degree: self.surface.degree,
        };
        let index = spec.validate().map_err(at("surface"))?;

        let curves_err = at("curves");
        let c = &self.curves;
        let rows: Vec<Vec<Rational>> = c
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.0.clone()).collect())
            .collect();
        if rows.len() != c.names.len() {
            return Err(curves_err(Error::DimensionMismatch(format!(
                "{} names but {} Gram rows",
                c.names.len(),
                rows.len()
            ))));
        }
        let gram = SymMatrix::from_rows(rows).map_err(&curves_err)?;
        let antican = c.antican.iter().map(|x| x.0.clone()).collect();
        let mut curves = CurveSystem::new(c.names.clone(), gram, antican).map_err(&curves_err)?;
        if let Some(deg) = &c.hyperplane_degrees {
            curves = curves
                .with_hyperplane_degrees(deg.iter().map(|x| x.0.clone()).collect())
                .map_err(&curves_err)?;
        }

        let sing_err = at("singularities");
        let mut points = Vec::new();
        for s in &self.singularities {
            if points.iter().any(|p: &QuotientPoint| p.label == s.label) {
                return Err(sing_err(Error::BadParameters(format!(
                    "duplicate label `{}`",
                    s.label
                ))));
            }
            points.push(self.point(&s.label).map_err(&sing_err)?);
        }

        let mut blowup_weights = None;
        if let Some(b) = &self.blowup {
            let err = at("blowup");
            let point = self.point(&b.point).map_err(&err)?;
            let mut germs = vec![None; curves.len()];
            for (name, list) in &b.germs {
                let i = curves
                    .index_of(name)
                    .ok_or_else(|| err(Error::UnknownLabel(name.clone())))?;
                germs[i] = Some(germ(list).map_err(&err)?);
            }
            let mut extra = Vec::new();
            for name in b.through.iter().flatten() {
                extra.push(
                    curves
                        .index_of(name)
                        .ok_or_else(|| err(Error::UnknownLabel(name.clone())))?,
                );
            }
            curves = curves
                .with_marked_point(point, germs, &extra)
                .map_err(&err)?;
            blowup_weights = Some((b.weights[0], b.weights[1]));
        }

        let mut boundary = None;
        if let Some(l) = &self.lct {
            let err = at("lct");
            let mut comps = Vec::new();
            for (k, cs) in l.components.iter().enumerate() {
                let mut germs = BTreeMap::new();
                for (label, list) in &cs.germs {
                    self.point(label).map_err(&err)?;
                    germs.insert(label.clone(), germ(list).map_err(&err)?);
                }
                let through: BTreeSet<String> = cs.through.iter().flatten().cloned().collect();
                comps.push(BoundaryComponent {
                    name: cs.name.clone().unwrap_or_else(|| format!("D{k}")),
                    mult: cs.mult.0.clone(),
                    germs,
                    through,
                });
            }
            let divisor = BoundaryDivisor::new(comps).map_err(&err)?;
            let pts = l
                .points
                .iter()
                .map(|p| self.point(p))
                .collect::<Result<Vec<_>>>()
                .map_err(&err)?;
            boundary = Some((divisor, pts));
        }

        if self.mode.wants_beta() && blowup_weights.is_none() {
            return Err(at("mode")(Error::Scenario(
                "mode requires a `blowup` section".into(),
            )));
        }
        if self.mode.wants_alpha() && boundary.is_none() {
            return Err(at("mode")(Error::Scenario(
                "mode requires an `lct` section".into(),
            )));
        }

        Ok(Resolved {
            spec,
            index,
            curves,
            points,
            blowup_weights,
            boundary,
        })
    }
}

/// 1-based line of the first occurrence of `"key"` in `text`.
pub fn locate_key(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}
