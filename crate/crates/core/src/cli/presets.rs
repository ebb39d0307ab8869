//! Built-in parameter sets for the standard figure grids.

/// Key-value defaults of a named preset, or `None` if the name is unknown.
pub fn preset(name: &str) -> Option<Vec<(&'static str, &'static str)>> {
    let common = [("units", "model"), ("mass", "1"), ("width", "1")];
    let specific: &[(&str, &str)] = match name {
        "fig1" => &[
            ("force", "5"),
            ("energy", "2"),
            ("aperture", "double"),
            ("half-sep", "1"),
            ("axes", "energy"),
            ("x-min", "-3"),
            ("x-max", "3"),
            ("nx", "241"),
            ("z-min", "-0.3"),
            ("z-max", "0"),
            ("nz", "151"),
        ],
        "fig2" => &[
            ("force", "5"),
            ("energy", "2"),
            ("aperture", "single"),
            ("axes", "energy"),
            ("x-min", "-1.5"),
            ("x-max", "1.5"),
            ("nx", "121"),
            ("z-min", "-0.2"),
            ("z-max", "0"),
            ("nz", "201"),
        ],
        "fig3" => &[
            ("force", "4"),
            ("energy", "3"),
            ("direction", "upward"),
            ("aperture", "double"),
            ("half-sep", "1"),
            ("axes", "force"),
            ("x-min", "-3"),
            ("x-max", "3"),
            ("nx", "241"),
            ("z-min", "0"),
            ("z-max", "1"),
            ("nz", "201"),
        ],
        "fig4" => &[
            ("force", "1"),
            ("energy", "0"),
            ("aperture", "single"),
            ("axes", "raw"),
            ("x-min", "-1"),
            ("x-max", "1"),
            ("nx", "81"),
            ("z-min", "-0.05"),
            ("z-max", "0"),
            ("nz", "11"),
        ],
        _ => return None,
    };
    Some(common.iter().chain(specific).copied().collect())
}

pub const NAMES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve() {
        for n in NAMES {
            assert!(preset(n).is_some());
        }
        assert!(preset("fig9").is_none());
    }
}
