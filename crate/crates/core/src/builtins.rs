//! Named example spaces shipped with the library.

use crate::bounds::AltConvention;
use crate::specfile::{Instance, SpecError, SpecFile};

#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    /// Conventions under which the bounds are additionally reported for comparison.
    pub alt_conventions: &'static [AltConvention],
}

pub const BUILTINS: [Builtin; 4] = [
    Builtin {
        name: "so4_twisted",
        summary: "SO(4), H = M12 + b M34, M13, M14, M23, M24; V = M34 (parameter b)",
        source: include_str!("../data/so4_twisted.src"),
        alt_conventions: &[],
    },
    Builtin {
        name: "so4_alt",
        summary: "SO(4), H = M12, M13, M14; V = M34, M23, M24",
        source: include_str!("../data/so4_alt.src"),
        alt_conventions: &[AltConvention::InvertedDimensionRatio],
    },
    Builtin {
        name: "so3_twisted",
        summary: "SO(3), H = M12 + c M13, M13; V = M23 (parameter c)",
        source: include_str!("../data/so3_twisted.src"),
        alt_conventions: &[],
    },
    Builtin {
        name: "twisted_spheres",
        summary: "S3 x S2 with H = 2S + P, V = -P",
        source: include_str!("../data/twisted_spheres.src"),
        alt_conventions: &[AltConvention::UnorderedPairs],
    },
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

impl Builtin {
    pub fn spec(&self) -> SpecFile {
        SpecFile::parse(self.source).expect("builtin specs parse")
    }

    pub fn instantiate(&self, bindings: &[(String, f64)]) -> Result<Instance, SpecError> {
        self.spec().instantiate(bindings)
    }
}
