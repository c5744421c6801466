//! Catalog of ready-made systems covering every classification outcome.
//! Each entry records where the example is classically known from and the
//! conclusion the classifier is expected to reach, so the catalog doubles
//! as an end-to-end regression suite.

use crate::criteria::Conclusion;
use crate::error::Result;
use crate::system::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltinEntry {
    pub key: &'static str,
    pub title: &'static str,
    pub f: &'static str,
    pub g: &'static str,
    /// Conclusion the classifier reaches under default settings.
    pub expected: Conclusion,
    /// Where the example is known from.
    pub provenance: &'static str,
}

pub const BUILTINS: &[BuiltinEntry] = &[
    BuiltinEntry {
        key: "harmonic",
        title: "harmonic oscillator",
        f: "0",
        g: "x",
        expected: Conclusion::IsochronousCandidate,
        provenance: "textbook linear oscillator; every orbit shares the period of the \
                     linearization",
    },
    BuiltinEntry {
        key: "pendulum",
        title: "planar pendulum",
        f: "0",
        g: "sin(x)",
        expected: Conclusion::Increasing,
        provenance: "classical pendulum; the period grows monotonically and diverges at \
                     the separatrix",
    },
    BuiltinEntry {
        key: "softening",
        title: "softening Duffing spring",
        f: "0",
        g: "x - x^3",
        expected: Conclusion::Increasing,
        provenance: "Duffing oscillator with a softening cubic term, a standard example \
                     of a growing period",
    },
    BuiltinEntry {
        key: "hardening",
        title: "hardening Duffing spring",
        f: "0",
        g: "x + x^3",
        expected: Conclusion::Decreasing,
        provenance: "Duffing oscillator with a hardening cubic term, a standard example \
                     of a shrinking period",
    },
    BuiltinEntry {
        key: "sabatini_isochrone",
        title: "damped isochronous center",
        f: "x",
        g: "x + x^3/9",
        expected: Conclusion::IsochronousCandidate,
        provenance: "damping and restoring force tuned together so the commutator slope \
                     stays exactly radial; an isochronous center with genuine damping, \
                     after Sabatini",
    },
    BuiltinEntry {
        key: "damped_linear",
        title: "linear force with linear damping",
        f: "x",
        g: "x",
        expected: Conclusion::Increasing,
        provenance: "simplest center with damping present; the damping term alone makes \
                     the period grow with amplitude",
    },
    BuiltinEntry {
        key: "noncenter",
        title: "spiral with quadratic damping",
        f: "x^2",
        g: "x + x^2",
        expected: Conclusion::NotACenter,
        provenance: "even damping against an uneven force; the local center obstruction \
                     is nonzero and first returns drift inward",
    },
    BuiltinEntry {
        key: "rayleigh_example",
        title: "reduced velocity equation",
        f: "2*x",
        g: "x",
        expected: Conclusion::Increasing,
        provenance: "obtained by differentiating the drag profile F(v) = v^2 of a \
                     velocity equation; the reduction yields f = 2x against a linear \
                     force",
    },
];

pub fn find(key: &str) -> Option<&'static BuiltinEntry> {
    BUILTINS.iter().find(|e| e.key == key)
}

impl BuiltinEntry {
    pub fn system(&self) -> Result<SystemSpec> {
        SystemSpec::from_strings(self.f, self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_eight_distinct_valid_entries() {
        assert_eq!(BUILTINS.len(), 8);
        for e in BUILTINS {
            let s = e.system().unwrap_or_else(|err| panic!("{}: {err}", e.key));
            assert_eq!(s.is_conservative(), e.f == "0", "{}", e.key);
        }
        let mut keys: Vec<_> = BUILTINS.iter().map(|e| e.key).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), 8);
    }

    #[test]
    fn lookup_by_key() {
        assert_eq!(find("pendulum").unwrap().g, "sin(x)");
        assert!(find("does_not_exist").is_none());
    }
}
