//! Fuzz harnesses for every file and flag parser. Each one parses, checks the
//! round trip where the format has one, and runs a bounded computation on
//! small valid inputs so that downstream code sees parsed values too.

use pvcoh::delta_complex::{simplicial_cohomology, DeltaComplex};
use pvcoh::koszul::{build_koszul_complex, CantorZdSystem};
use pvcoh::tiling::{AlgebraicNumber, TilingSpec};

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn tiling_spec(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(spec) = TilingSpec::parse(s) else { return };
    let small = match &spec {
        TilingSpec::CutAndProject { n_points, .. } => *n_points <= 64,
        TilingSpec::Substitution { rule, iterations, .. } => {
            *iterations <= 4 && rule.images.values().all(|w| w.len() <= 6)
        }
    };
    if small {
        if let Ok(sample) = spec.generate() {
            sample.check_abutting().expect("generated samples abut");
        }
    }
}

pub fn delta_complex(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(k) = DeltaComplex::from_json_str(s) else { return };
    if !k.validate().is_valid() {
        return;
    }
    let again = DeltaComplex::from_json(&k.to_json()).expect("serialized complexes parse");
    assert_eq!(again, k);
    if k.counts().iter().sum::<usize>() <= 40 {
        simplicial_cohomology(&k).expect("valid complexes have cohomology");
    }
}

pub fn koszul_system(data: &[u8]) {
    let Some(s) = text(data) else { return };
    // tiling generation is covered by `tiling_spec` and can be made
    // arbitrarily expensive from a few bytes
    if s.contains("from_tiling") {
        return;
    }
    let Ok(sys) = CantorZdSystem::parse(s) else { return };
    if sys.d <= 3 && sys.alphabet_size() <= 8 {
        if let Ok(k) = build_koszul_complex(&sys, 1) {
            k.check_square_zero().expect("Koszul differentials square to zero");
        }
    }
}

pub fn alpha(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(a) = AlgebraicNumber::parse_flag(s) else { return };
    let _ = a.to_string();
    let again = AlgebraicNumber::from_json(&a.to_json()).expect("serialized alphas parse");
    assert_eq!(again, a);
}
