//! Global verdicts from Betti numbers of the constraint manifold.

use std::fmt;

use serde::Serialize;

/// Betti numbers `b1`, `b2` of a manifold, either known or unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyInfo {
    pub name: String,
    pub betti1: Option<u32>,
    pub betti2: Option<u32>,
}

/// Known manifolds as `(name, b1, b2)`.
pub const CATALOG: [(&str, u32, u32); 5] = [
    ("R^m", 0, 0),
    ("S1", 1, 0),
    ("S2", 0, 1),
    ("mobius", 1, 0),
    ("T2", 2, 1),
];

impl TopologyInfo {
    pub fn new(name: &str, betti1: Option<u32>, betti2: Option<u32>) -> TopologyInfo {
        TopologyInfo {
            name: name.into(),
            betti1,
            betti2,
        }
    }

    /// Catalog lookup; `R^n` for any `n` and a few aliases are accepted.
    pub fn lookup(name: &str) -> Option<TopologyInfo> {
        let key = match name {
            "circle" => "S1",
            "sphere" => "S2",
            "torus" => "T2",
            "Mobius" | "möbius" | "Möbius" => "mobius",
            n if n.starts_with("R^") || n == "R" => "R^m",
            n => n,
        };
        CATALOG
            .iter()
            .find(|(n, _, _)| *n == key)
            .map(|(_, b1, b2)| TopologyInfo::new(name, Some(*b1), Some(*b2)))
    }

    pub fn unknown(name: &str) -> TopologyInfo {
        TopologyInfo::new(name, None, None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GlobalStatus {
    #[serde(rename = "globally-variational")]
    GloballyVariational,
    #[serde(rename = "global-inconclusive-obstruction-possible")]
    Inconclusive,
    #[serde(rename = "not-locally-variational")]
    NotLocallyVariational,
    #[serde(rename = "unknown-topology")]
    UnknownTopology,
}

impl GlobalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GlobalStatus::GloballyVariational => "globally-variational",
            GlobalStatus::Inconclusive => "global-inconclusive-obstruction-possible",
            GlobalStatus::NotLocallyVariational => "not-locally-variational",
            GlobalStatus::UnknownTopology => "unknown-topology",
        }
    }

    // Higher is stronger.
    pub fn rank(self) -> u8 {
        match self {
            GlobalStatus::NotLocallyVariational => 0,
            GlobalStatus::UnknownTopology => 1,
            GlobalStatus::Inconclusive => 2,
            GlobalStatus::GloballyVariational => 3,
        }
    }
}

impl fmt::Display for GlobalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrivialityStatus {
    #[serde(rename = "globally-trivial")]
    GloballyTrivial,
    #[serde(rename = "global-inconclusive-obstruction-possible")]
    Inconclusive,
    #[serde(rename = "not-locally-trivial")]
    NotLocallyTrivial,
    #[serde(rename = "unknown-topology")]
    UnknownTopology,
}

/// Upgrades a local variationality verdict using `b2`.
pub fn global_status(local_pass: bool, topo: &TopologyInfo) -> GlobalStatus {
    if !local_pass {
        return GlobalStatus::NotLocallyVariational;
    }
    match topo.betti2 {
        None => GlobalStatus::UnknownTopology,
        Some(0) => GlobalStatus::GloballyVariational,
        Some(_) => GlobalStatus::Inconclusive,
    }
}

/// Upgrades local triviality of a Lagrangian using `b1`.
pub fn trivial_lagrangian_global(local_null: bool, topo: &TopologyInfo) -> TrivialityStatus {
    if !local_null {
        return TrivialityStatus::NotLocallyTrivial;
    }
    match topo.betti1 {
        None => TrivialityStatus::UnknownTopology,
        Some(0) => TrivialityStatus::GloballyTrivial,
        Some(_) => TrivialityStatus::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_is_inconclusive() {
        let s2 = TopologyInfo::lookup("S2").unwrap();
        assert_eq!(global_status(true, &s2), GlobalStatus::Inconclusive);
    }

    #[test]
    fn mobius_and_circle_are_global() {
        for n in ["mobius", "S1"] {
            let t = TopologyInfo::lookup(n).unwrap();
            assert_eq!(global_status(true, &t), GlobalStatus::GloballyVariational);
        }
    }

    #[test]
    fn local_failure_dominates() {
        for (n, _, _) in CATALOG {
            let t = TopologyInfo::lookup(n).unwrap();
            assert_eq!(global_status(false, &t), GlobalStatus::NotLocallyVariational);
            assert_eq!(
                trivial_lagrangian_global(false, &t),
                TrivialityStatus::NotLocallyTrivial
            );
        }
    }

    #[test]
    fn triviality_uses_first_betti_number() {
        let r = TopologyInfo::lookup("R^3").unwrap();
        assert_eq!(trivial_lagrangian_global(true, &r), TrivialityStatus::GloballyTrivial);
        let s1 = TopologyInfo::lookup("S1").unwrap();
        assert_eq!(trivial_lagrangian_global(true, &s1), TrivialityStatus::Inconclusive);
    }

    #[test]
    fn unknown_betti_numbers() {
        let u = TopologyInfo::unknown("K3");
        assert_eq!(global_status(true, &u), GlobalStatus::UnknownTopology);
        assert_eq!(trivial_lagrangian_global(true, &u), TrivialityStatus::UnknownTopology);
        assert!(TopologyInfo::lookup("K3").is_none());
    }

    #[test]
    fn status_strings() {
        assert_eq!(
            GlobalStatus::Inconclusive.to_string(),
            "global-inconclusive-obstruction-possible"
        );
    }
}
