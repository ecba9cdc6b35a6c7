use std::fmt::Write as _;

use super::{parse_scenario, Scenario};

/// Builtin scenarios, sorted by name.
pub const BUILTINS: &[(&str, &str)] = &[
    ("drag-symmetric", include_str!("../../scenarios/drag-symmetric.scn")),
    ("euclidean-free", include_str!("../../scenarios/euclidean-free.scn")),
    ("harmonic-potential", include_str!("../../scenarios/harmonic-potential.scn")),
    ("magnetic-minkowski", include_str!("../../scenarios/magnetic-minkowski.scn")),
    ("magnetic-uniform", include_str!("../../scenarios/magnetic-uniform.scn")),
    ("minkowski-null", include_str!("../../scenarios/minkowski-null.scn")),
    ("polar-geodesic", include_str!("../../scenarios/polar-geodesic.scn")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a builtin by name. Builtins are validated by the test suite, so a
/// parse failure here is a packaging bug.
pub fn builtin(name: &str) -> Option<Scenario> {
    let src = builtin_source(name)?;
    Some(parse_scenario(src, &format!("builtin:{name}")).unwrap_or_else(|e| panic!("{e}")))
}

/// One line per builtin; with `verbose`, followed by its `(M, T₂, α)`.
pub fn list_scenarios(verbose: bool) -> String {
    let mut out = String::new();
    for name in builtin_names() {
        if verbose {
            let s = builtin(name).expect("listed builtin exists");
            let _ = writeln!(out, "{name:<20} {}", s.description);
            let _ = writeln!(out, "    {}", s.summary());
        } else {
            let _ = writeln!(out, "{name}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_valid() {
        let names: Vec<&str> = builtin_names().collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(names.len(), 7);
        for n in names {
            let s = builtin(n).unwrap();
            assert_eq!(s.name, n);
            assert_eq!(s.checks.len(), 1, "{n}");
        }
    }

    #[test]
    fn listing_has_one_line_per_builtin() {
        assert_eq!(list_scenarios(false).lines().count(), 7);
        assert_eq!(list_scenarios(true).lines().count(), 14);
    }
}
