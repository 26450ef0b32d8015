//! Shared fixtures for the integration suites: preset lists, seeded samplers,
//! random blow-up configurations and the property checks run on all of them.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use delpezzo::betaflow::{integrate, volume_curve, VolumeCurve};
use delpezzo::cli::presets::Preset;
use delpezzo::cli::scenario::{BlowupSchema, Resolved};
use delpezzo::geometry::{blow_up, pullback_curve, BlowupResult, CurveSystem, MonomialGerm};
use delpezzo::lctalpha::{lct_ub, BoundaryComponent, BoundaryDivisor};
use delpezzo::ratlin::{int, is_negative_definite, rat, Rational, SymMatrix};
use delpezzo::surface::{normalize_quotient, QuotientPoint};
use delpezzo::{zariski, Error, Exec};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0, hi]` with denominator at most 64.
pub fn random_rational(rng: &mut ChaCha8Rng, hi: &Rational) -> Rational {
    let q: i64 = rng.gen_range(1..=64);
    let top = (hi * int(q)).floor().to_integer();
    let top: i64 = top.try_into().unwrap_or(i64::MAX / 2);
    rat(rng.gen_range(0..=top.max(0)), q)
}

pub fn presets() -> Vec<Preset> {
    vec![
        Preset::S9,
        Preset::S27,
        Preset::S45,
        Preset::Fam6n9 { n: 0 },
        Preset::Fam6n9 { n: 3 },
        Preset::Fam11nm { n: 0, m: 1 },
        Preset::Fam11nm { n: 2, m: 5 },
        Preset::Fam11nm { n: 3, m: 3 },
        Preset::Fam3n4 { n: 0 },
        Preset::Fam3n4 { n: 4 },
    ]
}

/// Blow-up of a preset. Presets without a blow-up section are blown up at
/// their lct point, along the valuation that realises the bound.
pub fn preset_blowup(p: &Preset) -> BlowupResult {
    let mut sc = p.scenario();
    if sc.blowup.is_none() {
        let lct = sc.lct.as_ref().expect("preset has blow-up or lct data");
        let point = lct.points[0].clone();
        let r = sc.resolve().unwrap();
        let (divisor, points) = r.boundary.as_ref().unwrap();
        let parts = divisor.at_point(&point).unwrap();
        let (_, w) = delpezzo::lctalpha::lct_ub_at_point(&points[0], &parts).unwrap();
        let germs = lct
            .components
            .iter()
            .filter_map(|c| Some((c.name.clone()?, c.germs.get(&point)?.clone())))
            .collect();
        sc.blowup = Some(BlowupSchema {
            point,
            weights: [w.0, w.1],
            germs,
            through: None,
        });
    }
    let r: Resolved = sc.resolve().unwrap();
    blow_up(&r.curves, r.blowup_weights.unwrap()).unwrap()
}

/// Boundary data of a preset, if it has any.
pub fn preset_boundary(p: &Preset) -> Option<(BoundaryDivisor, Vec<QuotientPoint>)> {
    p.scenario().resolve().unwrap().boundary
}

/// `π*(−K) − λE` on the blown-up basis.
pub fn divisor_at(br: &BlowupResult, lambda: &Rational) -> Vec<Rational> {
    let mut d = br.curves.antican_coeffs.clone();
    d[br.exceptional_index()] -= lambda;
    d
}

/// A small random configuration around one marked quotient point.
#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub curves: CurveSystem,
    pub weights: (u64, u64),
    pub boundary: BoundaryDivisor,
    pub point: QuotientPoint,
}

fn random_germ(rng: &mut ChaCha8Rng) -> MonomialGerm {
    let k = rng.gen_range(1..=3);
    let monos: Vec<(u64, u64)> = (0..k)
        .map(|_| loop {
            let m = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            if m != (0, 0) {
                break m;
            }
        })
        .collect();
    MonomialGerm::new(monos).unwrap()
}

/// Builds the pre-blow-up Gram `G = B + m/(w₁w₂)·ord·ordᵀ` from a negative
/// definite strict-transform Gram `B` with non-negative off-diagonal, picks
/// anticanonical coefficients `c > 0` with `G·c ≥ 0`, `cᵀGc > 0`, and rejects
/// draws whose volume curve ends at an irrational threshold.
pub fn random_config(rng: &mut ChaCha8Rng) -> RandomConfig {
    loop {
        if let Some(c) = try_random_config(rng) {
            return c;
        }
    }
}

fn try_random_config(rng: &mut ChaCha8Rng) -> Option<RandomConfig> {
    let m: u64 = rng.gen_range(1..=12);
    let q = loop {
        let q = rng.gen_range(1..=m);
        if num_integer::gcd(q, m) == 1 {
            break q;
        }
    };
    let point = normalize_quotient("p", m, (1, q), ("u", "v")).ok()?;
    let weights = point.primitive_on_ray((rng.gen_range(1..=4), rng.gen_range(1..=4)));
    let k: usize = rng.gen_range(1..=5);

    let germs: Vec<Option<MonomialGerm>> = (0..k)
        .map(|i| (i == 0 || rng.gen_bool(0.7)).then(|| random_germ(rng)))
        .collect();
    let ords: Vec<Rational> = germs
        .iter()
        .map(|g| match g {
            Some(g) => rat(g.weighted_order(weights) as i64, m as i64),
            None => Rational::zero(),
        })
        .collect();

    let diag: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(2..=12), 3)).collect();
    let off_cap = diag.iter().min().unwrap() / int(k as i64);
    let mut b = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        b[i][i] = -diag[i].clone();
        for j in 0..i {
            let v = if rng.gen_bool(0.5) {
                &off_cap * rat(rng.gen_range(0..=5), 6)
            } else {
                Rational::zero()
            };
            b[i][j] = v.clone();
            b[j][i] = v;
        }
    }
    let bm = SymMatrix::from_rows(b).ok()?;
    assert!(is_negative_definite(&bm));

    let s = rat(m as i64, (weights.0 * weights.1) as i64);
    let gram = SymMatrix::from_fn(k, |i, j| bm.get(i, j) + &ords[i] * &ords[j] * &s);
    let c: Vec<Rational> = (0..k)
        .map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=3)))
        .collect();
    if gram.mul_vec(&c).iter().any(|x| x.is_negative()) || !gram.quadratic(&c).is_positive() {
        return None;
    }

    let names: Vec<String> = (0..k).map(|i| format!("C{i}")).collect();
    let curves = CurveSystem::new(names.clone(), gram, c)
        .ok()?
        .with_marked_point(point.clone(), germs.clone(), &[])
        .ok()?;
    let br = blow_up(&curves, weights).ok()?;
    match volume_curve(&br) {
        Ok(_) => {}
        Err(Error::IrrationalThreshold(_)) => return None,
        Err(e) => panic!("random configuration failed: {e}"),
    }

    let components = names
        .iter()
        .zip(&germs)
        .map(|(name, g)| BoundaryComponent {
            name: name.clone(),
            mult: rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
            germs: g
                .iter()
                .map(|g| ("p".to_string(), g.clone()))
                .collect::<BTreeMap<_, _>>(),
            through: BTreeSet::new(),
        })
        .collect();
    Some(RandomConfig {
        curves,
        weights,
        boundary: BoundaryDivisor::new(components).unwrap(),
        point,
    })
}

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `π*Cᵢ·π*Cⱼ = Cᵢ·Cⱼ` and `π*Cᵢ·E = 0`.
pub fn check_pullback(cs: &CurveSystem, br: &BlowupResult) -> Check {
    let e = br.exceptional_index();
    let mut e_vec = vec![Rational::zero(); br.curves.len()];
    e_vec[e] = int(1);
    for i in 0..cs.len() {
        let pi = pullback_curve(br, i);
        let pe = br.curves.gram.bilinear(&pi, &e_vec);
        ensure(pe.is_zero(), || format!("π*{}·E = {pe}", cs.names[i]))?;
        for j in 0..=i {
            let pj = pullback_curve(br, j);
            let lhs = br.curves.gram.bilinear(&pi, &pj);
            ensure(&lhs == cs.gram.get(i, j), || {
                format!(
                    "π*{}·π*{} = {lhs}, expected {}",
                    cs.names[i],
                    cs.names[j],
                    cs.gram.get(i, j)
                )
            })?;
        }
    }
    Ok(())
}

/// Shape of the volume curve plus invariance of the integral under
/// refinement at `cuts`.
pub fn check_curve(vc: &VolumeCurve, cuts: &[Rational]) -> Check {
    vc.curve.check_shape().map_err(|e| e.to_string())?;
    let total = integrate(&vc.curve);
    let mut refined = vc.curve.clone();
    for x in cuts {
        refined = refined.refine(x);
        let v = integrate(&refined);
        ensure(v == total, || {
            format!("refining at {x} changes the integral to {v}")
        })?;
    }
    Ok(())
}

/// `vol(qD) = q²·vol(D)`.
pub fn check_volume_scaling(gram: &SymMatrix, d: &[Rational], q: &Rational) -> Check {
    let v = zariski::volume(gram, d);
    let qd: Vec<Rational> = d.iter().map(|x| x * q).collect();
    let vq = zariski::volume(gram, &qd);
    ensure(vq == q * q * &v, || {
        format!("vol({q}·D) = {vq}, vol(D) = {v}")
    })
}

/// `lct(cD) = lct(D)/c`; dropping a component or a candidate point never
/// lowers the bound.
pub fn check_lct(divisor: &BoundaryDivisor, points: &[QuotientPoint], c: &Rational) -> Check {
    let (base, _) = lct_ub(divisor, points, Exec::Sequential).map_err(|e| e.to_string())?;
    let (scaled, _) =
        lct_ub(&divisor.scaled(c), points, Exec::Sequential).map_err(|e| e.to_string())?;
    ensure(&scaled * c == base, || {
        format!("lct({c}·D) = {scaled}, lct(D) = {base}")
    })?;

    if divisor.components.len() > 1 {
        for k in 0..divisor.components.len() {
            let mut fewer = divisor.clone();
            fewer.components.remove(k);
            let (v, _) = lct_ub(&fewer, points, Exec::Sequential).map_err(|e| e.to_string())?;
            ensure(v >= base, || {
                format!(
                    "dropping {} lowers lct_ub from {base} to {v}",
                    divisor.components[k].name
                )
            })?;
        }
    }
    let (none, _) = lct_ub(divisor, &[], Exec::Sequential).map_err(|e| e.to_string())?;
    ensure(none >= base, || {
        format!("dropping every point lowers lct_ub to {none}")
    })
}

/// Every property on one configuration.
pub fn check_all(
    cs: &CurveSystem,
    br: &BlowupResult,
    boundary: Option<(&BoundaryDivisor, &[QuotientPoint])>,
    rng: &mut ChaCha8Rng,
) -> Check {
    check_pullback(cs, br)?;
    let vc = volume_curve(br).map_err(|e| e.to_string())?;
    let tau = vc.curve.tau().clone();
    let cuts: Vec<Rational> = (0..4).map(|_| random_rational(rng, &tau)).collect();
    check_curve(&vc, &cuts)?;
    for _ in 0..4 {
        let lambda = random_rational(rng, &(&tau * rat(5, 4)));
        let q = rat(rng.gen_range(1..=7), rng.gen_range(1..=5));
        check_volume_scaling(&br.curves.gram, &divisor_at(br, &lambda), &q)?;
    }
    if let Some((d, pts)) = boundary {
        let c = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
        check_lct(d, pts, &c)?;
    }
    Ok(())
}

/// `decompose` against `decompose_bruteforce`: equal results, or both fail
/// as not pseudoeffective.
pub fn oracle_agrees(oracle: &zariski::BruteForce, gram: &SymMatrix, d: &[Rational]) -> Check {
    let fast = zariski::decompose(gram, d);
    let slow = oracle.decompose(d);
    match (&fast, &slow) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Err(Error::NotPseudoeffective(_)), Err(Error::NotPseudoeffective(_))) => Ok(()),
        _ => Err(format!("decompose {fast:?} vs brute force {slow:?}")),
    }
}
