use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use pvcoh::abelian::GroupPresentation;
use pvcoh::approximants::{build_proper_sequence, cech_cohomology_of_hull, ProperSequence};
use pvcoh::delta_complex::{simplicial_cohomology, DeltaComplex};
use pvcoh::koszul::{
    build_koszul_complex, chain_isomorphism, koszul_cohomology, torus_covariant_complex, CantorZdSystem,
};
use pvcoh::pv::{
    cantor_circle_h1_rank, cantor_circle_normal_form, frequency_module, pv_cohomology_hull, CantorCircleFunction,
};
use pvcoh::spectral::{
    couple_from_skeleton_filtration, direct_limit_couples, filtration_cofiltration_equivalence, pages,
    skeleton_couple_morphism, CoupleMorphism, ExactCouple, SpectralPages,
};
use pvcoh::tiling::{AlgebraicNumber, Tiling1DSample, TilingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::Source;

/// A finished run: the JSON body, an optional DOT rendering and whether the
/// run counts as successful for the exit status.
pub struct Report {
    pub json: Value,
    pub dot: Option<String>,
    pub success: bool,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report { json, dot: None, success: true }
    }
}

type Outcome<T> = Result<T, Failure>;

enum Input {
    Tiling { spec: TilingSpec, alpha: Option<AlgebraicNumber> },
    Complex(DeltaComplex),
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, &e))
}

fn load(source: &Source) -> Outcome<Input> {
    match (&source.alpha, &source.input) {
        (Some(_), Some(_)) => Err(Failure::usage("give either --alpha or --input, not both")),
        (None, None) => Err(Failure::usage("one of --alpha or --input is required")),
        (Some(a), None) => {
            let alpha = AlgebraicNumber::parse_flag(a)?;
            Ok(Input::Tiling {
                spec: TilingSpec::CutAndProject { alpha: alpha.clone(), n_points: source.points },
                alpha: Some(alpha),
            })
        }
        (None, Some(path)) => {
            let text = read(path)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| pvcoh::Error::Parse(e.to_string()))?;
            if v.get("type").is_some() {
                let spec = TilingSpec::parse(&text)?;
                let alpha = match &spec {
                    TilingSpec::CutAndProject { alpha, .. } => Some(alpha.clone()),
                    TilingSpec::Substitution { .. } => None,
                };
                Ok(Input::Tiling { spec, alpha })
            } else {
                let k = DeltaComplex::from_json(&v)?;
                k.validate().into_result()?;
                Ok(Input::Complex(k))
            }
        }
    }
}

fn tiling(source: &Source) -> Outcome<(Tiling1DSample, Option<AlgebraicNumber>)> {
    match load(source)? {
        Input::Tiling { spec, alpha } => Ok((spec.generate()?, alpha)),
        Input::Complex(_) => Err(Failure::usage("this command needs a tiling spec, not a Δ-complex")),
    }
}

fn sequence(source: &Source, levels: usize) -> Outcome<(ProperSequence, Option<AlgebraicNumber>)> {
    let (sample, alpha) = tiling(source)?;
    Ok((build_proper_sequence(&sample, levels)?, alpha))
}

fn names(gs: &[GroupPresentation]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

fn sequence_header(seq: &ProperSequence, alpha: &Option<AlgebraicNumber>) -> Value {
    json!({
        "alpha": alpha.as_ref().map(AlgebraicNumber::to_json),
        "requested_levels": seq.requested_levels,
        "levels_built": seq.len(),
        "truncated": seq.truncated.as_ref().map(|e| e.to_string()),
    })
}

pub fn generate(source: &Source) -> Outcome<Report> {
    let (sample, alpha) = tiling(source)?;
    Ok(Report::ok(json!({
        "alpha": alpha.as_ref().map(AlgebraicNumber::to_json),
        "sample": sample.to_json(),
    })))
}

pub fn approximants(source: &Source, levels: usize) -> Outcome<Report> {
    let (seq, _) = sequence(source, levels)?;
    Ok(Report { json: seq.to_json(), dot: Some(seq.to_dot()), success: true })
}

pub fn cohomology(source: &Source, levels: usize) -> Outcome<Report> {
    let (seq, alpha) = match load(source)? {
        Input::Complex(k) => {
            let h = simplicial_cohomology(&k)?;
            return Ok(Report::ok(json!({ "cohomology": h, "summary": names(&h) })));
        }
        Input::Tiling { spec, alpha } => (build_proper_sequence(&spec.generate()?, levels)?, alpha),
    };
    let simplicial: Vec<Vec<GroupPresentation>> =
        seq.levels.iter().map(|l| simplicial_cohomology(&l.complex)).collect::<pvcoh::Result<_>>()?;
    let cech = cech_cohomology_of_hull(&seq)?;
    Ok(Report::ok(json!({
        "sequence": sequence_header(&seq, &alpha),
        "simplicial": simplicial,
        "cech": cech.to_json(),
        "summary": {
            "groups": names(&cech.groups()),
            "status": cech.degrees.iter().map(|d| json!(d.status)).collect::<Vec<_>>(),
        },
    })))
}

pub fn pv(source: &Source, levels: usize) -> Outcome<Report> {
    let (seq, alpha) = sequence(source, levels)?;
    let hull = pv_cohomology_hull(&seq)?;
    Ok(Report::ok(json!({
        "sequence": sequence_header(&seq, &alpha),
        "pv": hull.to_json(),
        "summary": {
            "groups": names(&hull.groups()),
            "status": hull.degrees.iter().map(|d| json!(d.status)).collect::<Vec<_>>(),
            "certificates_pass": hull.certificates.all_pass(),
        },
    })))
}

fn bigint(x: &BigInt) -> Value {
    json!(x.to_string())
}

pub fn cantor_circle(alpha: &str, resolution: usize, function: Option<&Path>) -> Outcome<Report> {
    let alpha = AlgebraicNumber::parse_flag(alpha)?;
    let fm = frequency_module(&alpha)?;
    let reduce = |f: &CantorCircleFunction| -> Outcome<Value> {
        let (n, m) = cantor_circle_normal_form(f, &alpha)?;
        Ok(json!({
            "function": f.to_json(),
            "normal_form": { "n": bigint(&n), "m": bigint(&m) },
            "integral": fm.integral(&n, &m).map(|s| s.to_string()),
        }))
    };
    let generators = vec![
        reduce(&CantorCircleFunction::constant(1))?,
        reduce(&CantorCircleFunction::arc(1, 0, 1))?,
    ];
    let arcs = (1..=resolution as i64)
        .map(|k| reduce(&CantorCircleFunction::arc(1, 0, k)))
        .collect::<Outcome<Vec<_>>>()?;
    let user = match function {
        None => None,
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?).map_err(|e| pvcoh::Error::Parse(e.to_string()))?;
            Some(reduce(&CantorCircleFunction::from_json(&v)?)?)
        }
    };
    let (lo, hi) = &fm.alpha_prime_bounds;
    Ok(Report::ok(json!({
        "alpha": alpha.to_json(),
        "frequency_module": {
            "alpha_prime": fm.alpha_prime.as_ref().map(|s| s.to_string()),
            "alpha_prime_bounds": [lo.to_string(), hi.to_string()],
            "alpha_prime_approx": fm.alpha_prime.as_ref().map(|s| s.to_f64()),
            "generator_integrals": generators.iter().map(|g| g["integral"].clone()).collect::<Vec<_>>(),
        },
        "generators": generators,
        "arcs": arcs,
        "function": user,
        "h1_rank": cantor_circle_h1_rank(&alpha, resolution)?,
    })))
}

pub fn koszul(system: &Path, d: Option<usize>, resolution: usize) -> Outcome<Report> {
    let mut v: Value = serde_json::from_str(&read(system)?).map_err(|e| pvcoh::Error::Parse(e.to_string()))?;
    if let (Some(d), Some(obj)) = (d, v.as_object_mut()) {
        obj.entry("d").or_insert(json!(d));
    }
    let sys = CantorZdSystem::from_json(&v)?;
    if let Some(d) = d {
        if d != sys.d {
            return Err(pvcoh::Error::DimensionMismatch(format!("--d {d} but the system has d = {}", sys.d)).into());
        }
    }
    let h = koszul_cohomology(&sys, resolution)?;
    Ok(Report::ok(json!({
        "d": sys.d,
        "alphabet_size": sys.alphabet_size(),
        "koszul": h.to_json(),
        "summary": {
            "ranks": h.ranks.last(),
            "groups": names(&h.groups()),
            "status": h.degrees.iter().map(|d| json!(d.status)).collect::<Vec<_>>(),
        },
    })))
}

fn limit_couple(seq: &ProperSequence) -> Outcome<pvcoh::spectral::CoupleLimit> {
    let couples: Vec<ExactCouple> =
        seq.levels.iter().map(|l| couple_from_skeleton_filtration(&l.complex)).collect::<pvcoh::Result<_>>()?;
    let morphisms: Vec<CoupleMorphism> = seq
        .connecting_maps
        .iter()
        .enumerate()
        .map(|(l, f)| skeleton_couple_morphism(f, &seq.levels[l + 1].complex, &seq.levels[l].complex))
        .collect::<pvcoh::Result<_>>()?;
    Ok(direct_limit_couples(&couples, &morphisms)?)
}

pub fn ahss(source: &Source, levels: usize, max_page: usize) -> Outcome<Report> {
    match load(source)? {
        Input::Complex(k) => {
            let sp = pages(&couple_from_skeleton_filtration(&k)?, max_page)?;
            let eq = filtration_cofiltration_equivalence(&k, max_page)?;
            Ok(Report::ok(json!({
                "pages": sp.to_json(),
                "cofiltration_equivalence": eq.to_json(),
            })))
        }
        Input::Tiling { spec, alpha } => {
            let seq = build_proper_sequence(&spec.generate()?, levels)?;
            let lim = limit_couple(&seq)?;
            let sp = pages(&lim.couple, max_page)?;
            Ok(Report::ok(json!({
                "sequence": sequence_header(&seq, &alpha),
                "limit_status": lim.status,
                "pages": sp.to_json(),
            })))
        }
    }
}

/// Named pass/fail results with the reason for each failure.
#[derive(Default)]
struct Certificates(BTreeMap<String, Value>);

impl Certificates {
    fn record(&mut self, name: &str, outcome: Outcome<bool>) {
        let entry = match outcome {
            Ok(pass) => json!({ "pass": pass }),
            Err(f) => json!({ "pass": false, "error": f.kind, "message": f.message }),
        };
        self.0.insert(name.to_string(), entry);
    }

    fn all_pass(&self) -> bool {
        self.0.values().all(|v| v["pass"] == json!(true))
    }
}

fn e2_entries(sp: &SpectralPages) -> &BTreeMap<(i64, u8), GroupPresentation> {
    &sp.pages.iter().find(|p| p.page == 2).unwrap_or(sp.last()).entries
}

fn collapses_to_cohomology(k: &DeltaComplex) -> Outcome<bool> {
    let sp = pages(&couple_from_skeleton_filtration(k)?, 4)?;
    let h = simplicial_cohomology(k)?;
    let e2_ok = e2_entries(&sp).iter().all(|(&(p, s), g)| {
        if s == 0 && p >= 0 && (p as usize) < h.len() {
            *g == h[p as usize]
        } else {
            g.is_trivial()
        }
    });
    Ok(e2_ok && sp.converged_at.is_some_and(|p| p <= 2))
}

fn random_function(rng: &mut ChaCha8Rng) -> CantorCircleFunction {
    let mut f = CantorCircleFunction::constant(rng.gen_range(-3..=3));
    for _ in 0..rng.gen_range(0..6) {
        f = f.add(&CantorCircleFunction::arc(rng.gen_range(-5..=5), rng.gen_range(-30..30), rng.gen_range(-30..30)));
    }
    f
}

fn every<T>(items: &[T], check: impl Fn(&T) -> Outcome<bool>) -> Outcome<bool> {
    for x in items {
        if !check(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify(source: &Source, levels: usize, resolution: usize, seed: u64) -> Outcome<Report> {
    let (sample, alpha) = tiling(source)?;
    let seq = build_proper_sequence(&sample, levels)?;
    let mut certs = Certificates::default();

    let hull = pv_cohomology_hull(&seq);
    let cech = cech_cohomology_of_hull(&seq);
    match &hull {
        Ok(h) => {
            let c = &h.certificates;
            let all = |v: &[bool]| v.iter().all(|&b| b);
            certs.record("pv.rho_chain_map", Ok(all(&c.rho_chain_map)));
            certs.record("pv.square_zero", Ok(all(&c.square_zero)));
            certs.record("pv.theta_range", Ok(all(&c.theta_range)));
            certs.record("pv.theta_partial_isometry", Ok(all(&c.theta_partial_isometry)));
            certs.record("pv.agrees_with_cech", Ok(c.agrees_with_cech));
        }
        Err(e) => certs.record("pv.hull", Err(e.clone().into())),
    }
    match (&hull, &cech) {
        (Ok(p), Ok(c)) => {
            certs.record("routes.level_groups", Ok(p.level_groups == c.level_groups));
            let status_eq = p.degrees.iter().zip(&c.degrees).all(|(a, b)| a.status == b.status);
            certs.record("routes.limit", Ok(p.groups() == c.groups() && status_eq));
        }
        (_, Err(e)) => certs.record("routes.cech", Err(e.clone().into())),
        _ => {}
    }

    let sys = CantorZdSystem::from_word(sample.letters.clone());
    let resolutions: Vec<usize> = (0..=resolution.min(3)).collect();
    certs.record(
        "koszul.square_zero",
        every(&resolutions, |&r| Ok(build_koszul_complex(&sys, r)?.check_square_zero().is_ok())),
    );
    certs.record(
        "koszul.torus_isomorphism",
        every(&resolutions, |&r| {
            let k = build_koszul_complex(&sys, r)?;
            let t = torus_covariant_complex(&sys, r)?;
            Ok(chain_isomorphism(&k, &t).is_ok())
        }),
    );
    certs.record(
        "koszul.agrees_with_pv",
        koszul_cohomology(&sys, resolution).map_err(Failure::from).and_then(|k| match &hull {
            Ok(h) => Ok(k.groups() == h.groups()),
            Err(e) => Err(Failure::from(e.clone()).context("PV hull")),
        }),
    );

    let complexes: Vec<&DeltaComplex> = seq.levels.iter().map(|l| &l.complex).collect();
    certs.record(
        "spectral.exact",
        every(&complexes, |k| Ok(couple_from_skeleton_filtration(k)?.validate().is_ok())),
    );
    certs.record("spectral.collapse", every(&complexes, |k| collapses_to_cohomology(k)));
    certs.record(
        "spectral.cofiltration_equivalence",
        every(&complexes, |k| {
            let eq = filtration_cofiltration_equivalence(k, 3)?;
            Ok(eq.triangle_exact && eq.trivial.is_trivial())
        }),
    );
    certs.record(
        "spectral.limit_agrees_with_cech",
        limit_couple(&seq).and_then(|lim| {
            let cech = cech.clone()?;
            let sp = pages(&lim.couple, 4)?;
            let e2 = e2_entries(&sp);
            let g = cech.groups();
            Ok((0..g.len()).all(|n| e2.get(&(n as i64, 0)) == Some(&g[n])))
        }),
    );

    if let Some(alpha) = &alpha {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        certs.record(
            "cantor_circle.coboundary_invariance",
            (0..200).try_fold(true, |acc, _| {
                let f = random_function(&mut rng);
                let g = random_function(&mut rng);
                let a = cantor_circle_normal_form(&f, alpha)?;
                let b = cantor_circle_normal_form(&f.add(&g.coboundary()), alpha)?;
                Ok(acc && a == b)
            }),
        );
        certs.record(
            "cantor_circle.rank_agrees",
            cantor_circle_h1_rank(alpha, 20).map_err(Failure::from).and_then(|r| match &hull {
                Ok(h) => Ok(h.groups().get(1).map(|g| g.rank) == Some(r)),
                Err(e) => Err(Failure::from(e.clone()).context("PV hull")),
            }),
        );
    }

    let all_pass = certs.all_pass();
    Ok(Report {
        json: json!({
            "sequence": sequence_header(&seq, &alpha),
            "seed": seed,
            "certificates": certs.0,
            "all_pass": all_pass,
        }),
        dot: None,
        success: all_pass,
    })
}
