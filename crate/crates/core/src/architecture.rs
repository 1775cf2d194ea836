//! Geometry and timing of the 1D shuttling bus.
//!
//! Storage sites sit `site_pitch` apart starting at the origin. Manipulation
//! zone `j` sits `zone_offset` to the right of site `j`, so the line reads
//! `Q0 O0 Q1 O1 ... Q(n-1) O(n-1)`. All quantities are SI internally; the
//! JSON form uses µm, ns and m/s.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UM: f64 = 1e6;
pub const NS: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "ArchitectureConfig", try_from = "ArchitectureConfig")]
pub struct ArchitectureSpec {
    pub n_sites: usize,
    /// Distance between neighbouring storage sites, m.
    pub site_pitch: f64,
    /// Distance from a storage site to the zone on its right, m.
    pub zone_offset: f64,
    /// Fixed shuttling velocity, m/s.
    pub default_velocity: f64,
    /// Single-qubit gate duration, s.
    pub t_1q: f64,
    /// Two-qubit gate duration, s.
    pub t_2q: f64,
    /// Readout duration, s. Measurements are only scheduled when set.
    pub t_measure: Option<f64>,
}

impl ArchitectureSpec {
    /// Default geometry and timing for `n_sites` storage sites: 2 µm pitch,
    /// 1 µm site-to-zone offset, 10 m/s, 20 ns and 45 ns gates.
    pub fn new(n_sites: usize) -> Result<Self> {
        let spec = ArchitectureSpec {
            n_sites,
            site_pitch: 2.0 / UM,
            zone_offset: 1.0 / UM,
            default_velocity: 10.0,
            t_1q: 20.0 / NS,
            t_2q: 45.0 / NS,
            t_measure: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArchitecture(msg));
        if self.n_sites < 2 {
            return bad(format!("need at least 2 storage sites, got {}", self.n_sites));
        }
        let positive = [
            ("site_pitch", self.site_pitch),
            ("zone_offset", self.zone_offset),
            ("default_velocity", self.default_velocity),
            ("t_1q", self.t_1q),
            ("t_2q", self.t_2q),
        ];
        for (name, v) in positive.into_iter().chain(self.t_measure.map(|t| ("t_measure", t))) {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.zone_offset >= self.site_pitch {
            return bad("zone_offset must be smaller than site_pitch".into());
        }
        Ok(())
    }

    pub fn n_zones(&self) -> usize {
        self.n_sites
    }

    pub fn contains(&self, loc: Location) -> bool {
        loc.index() < self.n_sites
    }

    /// Coordinate of a location along the bus, m.
    pub fn position(&self, loc: Location) -> f64 {
        match loc {
            Location::Site(i) => i as f64 * self.site_pitch,
            Location::Zone(j) => j as f64 * self.site_pitch + self.zone_offset,
        }
    }

    /// Separation of two locations, m. Computed from the index difference so
    /// that short hops come out exact instead of as a difference of large
    /// coordinates.
    pub fn distance(&self, a: Location, b: Location) -> f64 {
        use Location::{Site, Zone};
        let steps = |i: usize, j: usize| i.abs_diff(j) as f64 * self.site_pitch;
        match (a, b) {
            (Site(i), Site(j)) | (Zone(i), Zone(j)) => steps(i, j),
            (Site(i), Zone(j)) | (Zone(j), Site(i)) => {
                if j >= i {
                    steps(i, j) + self.zone_offset
                } else {
                    steps(i, j) - self.zone_offset
                }
            }
        }
    }

    /// Same geometry with every length and duration multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        ArchitectureSpec {
            site_pitch: self.site_pitch * c,
            zone_offset: self.zone_offset * c,
            t_1q: self.t_1q * c,
            t_2q: self.t_2q * c,
            t_measure: self.t_measure.map(|t| t * c),
            ..*self
        }
    }
}

/// Time to cover `distance` metres at `velocity` m/s.
pub fn shuttle_time(distance: f64, velocity: f64) -> Result<f64> {
    if !(velocity.is_finite() && velocity > 0.0) {
        return Err(Error::InvalidVelocity(velocity));
    }
    Ok(distance / velocity)
}

/// A storage site `Q_i` or a manipulation zone `O_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "idx", rename_all = "lowercase")]
pub enum Location {
    Site(usize),
    Zone(usize),
}

impl Location {
    pub fn index(self) -> usize {
        match self {
            Location::Site(i) | Location::Zone(i) => i,
        }
    }

    pub fn is_site(self) -> bool {
        matches!(self, Location::Site(_))
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Site(i) => write!(f, "Q{i}"),
            Location::Zone(j) => write!(f, "O{j}"),
        }
    }
}

/// Flat JSON form of [`ArchitectureSpec`] in interface units.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureConfig {
    pub n_sites: usize,
    pub site_pitch_um: f64,
    pub zone_offset_um: f64,
    pub velocity_mps: f64,
    pub t_1q_ns: f64,
    pub t_2q_ns: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_measure_ns: Option<f64>,
}

impl From<ArchitectureSpec> for ArchitectureConfig {
    fn from(s: ArchitectureSpec) -> Self {
        ArchitectureConfig {
            n_sites: s.n_sites,
            site_pitch_um: s.site_pitch * UM,
            zone_offset_um: s.zone_offset * UM,
            velocity_mps: s.default_velocity,
            t_1q_ns: s.t_1q * NS,
            t_2q_ns: s.t_2q * NS,
            t_measure_ns: s.t_measure.map(|t| t * NS),
        }
    }
}

impl TryFrom<ArchitectureConfig> for ArchitectureSpec {
    type Error = Error;

    fn try_from(c: ArchitectureConfig) -> Result<Self> {
        let spec = ArchitectureSpec {
            n_sites: c.n_sites,
            site_pitch: c.site_pitch_um / UM,
            zone_offset: c.zone_offset_um / UM,
            default_velocity: c.velocity_mps,
            t_1q: c.t_1q_ns / NS,
            t_2q: c.t_2q_ns / NS,
            t_measure: c.t_measure_ns.map(|t| t / NS),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ArchitectureSpec {
        ArchitectureSpec::new(8).unwrap()
    }

    #[test]
    fn positions_with_defaults() {
        let s = spec();
        assert_eq!(s.position(Location::Site(2)), 4e-6);
        assert_eq!(s.position(Location::Zone(3)), 7e-6);
        assert_eq!(s.position(Location::Zone(0)), 1e-6);
    }

    #[test]
    fn figure_one_distances() {
        let s = spec();
        assert_eq!(s.distance(Location::Site(2), Location::Zone(3)), 3e-6);
        assert_eq!(s.distance(Location::Site(3), Location::Zone(3)), 1e-6);
        assert_eq!(s.distance(Location::Site(5), Location::Site(5)), 0.0);
    }

    #[test]
    fn shuttle_times() {
        assert_eq!(shuttle_time(3e-6, 10.0).unwrap(), 0.3e-6);
        assert_eq!(shuttle_time(0.0, 10.0).unwrap(), 0.0);
        assert_eq!(shuttle_time(1e-6, 10.0).unwrap(), 0.1e-6);
        assert!(shuttle_time(1e-6, 0.0).is_err());
        assert!(shuttle_time(1e-6, -2.0).is_err());
    }

    #[test]
    fn sites_and_zones_interleave() {
        let s = spec();
        for i in 0..s.n_sites {
            assert!(s.position(Location::Site(i)) < s.position(Location::Zone(i)));
            if i + 1 < s.n_sites {
                assert!(s.position(Location::Zone(i)) < s.position(Location::Site(i + 1)));
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(ArchitectureSpec::new(1).is_err());
        let mut s = spec();
        s.zone_offset = s.site_pitch;
        assert!(s.validate().is_err());
        s = spec();
        s.t_2q = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn json_uses_interface_units() {
        let json = serde_json::to_value(spec()).unwrap();
        assert_eq!(json["site_pitch_um"], 2.0);
        assert_eq!(json["t_2q_ns"], 45.0);
        let back: ArchitectureSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec());
        let bad = r#"{"n_sites":4,"site_pitch_um":1,"zone_offset_um":1,"velocity_mps":10,"t_1q_ns":20,"t_2q_ns":45}"#;
        assert!(serde_json::from_str::<ArchitectureSpec>(bad).is_err());
    }

    #[test]
    fn location_json_shape() {
        let v = serde_json::to_string(&Location::Zone(3)).unwrap();
        assert_eq!(v, r#"{"kind":"zone","idx":3}"#);
    }
}
