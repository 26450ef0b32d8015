//! Parameter sweeps over the shipped families, cross-checked row by row
//! against their closed forms.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::presets::{beta_11nm, beta_3n4, lct_6n9, Preset, PresetName};
use crate::betaflow::{beta, Verdict};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{blow_up, validate_config};
use crate::lctalpha::alpha_verdict;
use crate::ratlin::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lct_ub: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_ub: Option<String>,
    pub verdict: Verdict,
}

/// Parameter pairs of a sweep. `m` is ignored except for `fam-11nm`.
pub fn parameters(
    family: PresetName,
    n: RangeInclusive<u64>,
    m: Option<RangeInclusive<u64>>,
    allow_boundary: bool,
) -> Result<Vec<Preset>> {
    let mut out = Vec::new();
    match family {
        PresetName::Fam11nm => {
            let m = m.ok_or_else(|| Error::BadParameters("fam-11nm sweep requires --m".into()))?;
            for ni in n {
                for mi in m.clone() {
                    if ni < mi || (ni == mi && allow_boundary) {
                        out.push(family.with_params(Some(ni), Some(mi), allow_boundary)?);
                    }
                }
            }
        }
        PresetName::Fam3n4 | PresetName::Fam6n9 => {
            for ni in n {
                out.push(family.with_params(Some(ni), None, false)?);
            }
        }
        other => {
            return Err(Error::BadParameters(format!(
                "`{other}` is not a family (expected fam-11nm, fam-3n4, fam-6n9)"
            )))
        }
    }
    Ok(out)
}

fn mismatch(label: &str, what: &str, got: &Rational, want: &Rational) -> Error {
    Error::Scenario(format!("{label}: {what} = {got}, closed form gives {want}"))
}

/// Evaluates one family member and checks it against the closed form.
pub fn row(p: &Preset, exec: Exec) -> Result<SweepRow> {
    let sc = p.scenario();
    let r = sc.resolve().map_err(|e| e.error)?;
    validate_config(&r.spec, &r.curves)?;
    let label = p.label();
    let mut out = SweepRow {
        family: p.name().to_string(),
        n: 0,
        m: None,
        beta: None,
        lct_ub: None,
        delta_ub: None,
        verdict: Verdict::Inconclusive,
    };
    let beta_case = match *p {
        Preset::Fam11nm { n, m } => Some((n, Some(m), beta_11nm(n, m))),
        Preset::Fam3n4 { n } => Some((n, None, beta_3n4(n))),
        _ => None,
    };
    if let Some((n, m, want)) = beta_case {
        let w = r.blowup_weights.expect("family scenarios carry a blow-up");
        let br = blow_up(&r.curves, w)?;
        let rep = beta(&r.spec, &br)?;
        if rep.beta != want {
            return Err(mismatch(&label, "β", &rep.beta, &want));
        }
        out.n = n;
        out.m = m;
        out.beta = Some(rep.beta.to_string());
        out.verdict = rep.verdict;
    } else if let Preset::Fam6n9 { n } = *p {
        let (divisor, points) = r
            .boundary
            .as_ref()
            .expect("family scenario carries lct data");
        let a = alpha_verdict(&r.spec, divisor, points, exec)?;
        let want = lct_6n9(n);
        if a.lct_ub != want {
            return Err(mismatch(&label, "lct", &a.lct_ub, &want));
        }
        out.n = n;
        out.lct_ub = Some(a.lct_ub.to_string());
        out.delta_ub = Some(a.delta_ub.to_string());
        out.verdict = a.verdict;
    } else {
        return Err(Error::BadParameters(format!(
            "{label} is not a family member"
        )));
    }
    Ok(out)
}

/// All rows, computed with `exec`; the first failing row aborts the sweep.
pub fn sweep(params: &[Preset], exec: Exec) -> Result<Vec<SweepRow>> {
    // rows are already parallel; keep the inner lct scan sequential
    exec.map(params, |p| row(p, Exec::Sequential))
        .into_iter()
        .collect()
}

pub fn to_csv(family: PresetName, rows: &[SweepRow]) -> String {
    let mut o = String::new();
    match family {
        PresetName::Fam6n9 => {
            o.push_str("family,n,lct_ub,delta_ub,verdict\n");
            for r in rows {
                let _ = writeln!(
                    o,
                    "{},{},{},{},{}",
                    r.family,
                    r.n,
                    r.lct_ub.as_deref().unwrap_or(""),
                    r.delta_ub.as_deref().unwrap_or(""),
                    r.verdict
                );
            }
        }
        _ => {
            let with_m = family == PresetName::Fam11nm;
            o.push_str(if with_m {
                "family,n,m,beta,verdict\n"
            } else {
                "family,n,beta,verdict\n"
            });
            for r in rows {
                let m = match (with_m, r.m) {
                    (true, Some(m)) => format!(",{m}"),
                    _ => String::new(),
                };
                let beta = r.beta.as_deref().unwrap_or("");
                let _ = writeln!(o, "{},{}{m},{beta},{}", r.family, r.n, r.verdict);
            }
        }
    }
    o
}

/// Parses `lo..hi` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::BadParameters(format!("invalid range `{s}` (expected lo..hi)"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
