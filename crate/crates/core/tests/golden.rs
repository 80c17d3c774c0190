//! First 100 draws of each sampler against checked-in files. Regenerate
//! with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use ggd_core::experiments::format_number;
use ggd_core::sampling::{sample_general, sample_sts, SamplerConfig};
use ggd_core::Execution;

fn check(name: &str, rows: Vec<[f64; 4]>) {
    let mut text = String::from("a,b,c,d\n");
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format_number(*x)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
    assert_eq!(text, expected, "draws differ from {}", path.display());
}

#[test]
fn general_sampler_seed_42() {
    let rows = sample_general(&SamplerConfig::general(42), 100, Execution::Parallel)
        .unwrap()
        .iter()
        .map(|s| [s.a, s.b, s.c, s.d])
        .collect();
    check("general_seed42.csv", rows);
}

#[test]
fn squeezed_thermal_sampler_seed_42_cap_25() {
    let rows = sample_sts(
        &SamplerConfig::squeezed_thermal(42, 25.0),
        100,
        Execution::Parallel,
    )
    .unwrap()
    .iter()
    .map(|p| {
        let s = p.standard_form();
        [s.a, s.b, s.c, s.d]
    })
    .collect();
    check("sts_seed42_cap25.csv", rows);
}
