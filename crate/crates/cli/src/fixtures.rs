//! Fixture files shipped with the binary and used by `selftest`.

use std::path::PathBuf;

pub const FIXTURES: &[(&str, &str)] = &[
    ("u_exp.json", include_str!("../fixtures/u_exp.json")),
    ("u_exp2.json", include_str!("../fixtures/u_exp2.json")),
    ("u_exp_2d.json", include_str!("../fixtures/u_exp_2d.json")),
    ("u_half_linear.json", include_str!("../fixtures/u_half_linear.json")),
    ("w_exp06.json", include_str!("../fixtures/w_exp06.json")),
    ("w_sqrt_2d.json", include_str!("../fixtures/w_sqrt_2d.json")),
    ("w_exp1_2d.json", include_str!("../fixtures/w_exp1_2d.json")),
    ("w_table.json", include_str!("../fixtures/w_table.json")),
    ("space_bergman.json", include_str!("../fixtures/space_bergman.json")),
    ("problem_d1.json", include_str!("../fixtures/problem_d1.json")),
    ("problem_d2.json", include_str!("../fixtures/problem_d2.json")),
];

/// Contents of a shipped fixture; panics on an unknown name.
pub fn fixture(name: &str) -> &'static str {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("unknown fixture {name}"))
}

/// Directory holding the fixture files in the source tree.
pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
