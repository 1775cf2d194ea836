use serde::{Deserialize, Serialize};

use crate::architecture::Location;
use crate::error::{Error, Result};
use crate::placement::Placement;

/// Capacity of a manipulation zone.
pub const ZONE_CAPACITY: usize = 2;

/// Where every virtual qubit currently is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Location>", into = "Vec<Location>")]
pub struct LayoutState {
    assignment: Vec<Location>,
    site_occupant: Vec<Option<usize>>,
    zone_occupants: Vec<Vec<usize>>,
}

impl LayoutState {
    pub fn from_placement(p: &Placement) -> Self {
        let assignment = p.as_slice().iter().map(|&s| Location::Site(s)).collect();
        Self::try_from_assignment(assignment).expect("placements are bijective")
    }

    fn try_from_assignment(assignment: Vec<Location>) -> Result<Self> {
        let n = assignment.len();
        let mut state = LayoutState {
            assignment: Vec::with_capacity(n),
            site_occupant: vec![None; n],
            zone_occupants: vec![Vec::new(); n],
        };
        for (q, &loc) in assignment.iter().enumerate() {
            state.occupy(q, loc)?;
            state.assignment.push(loc);
        }
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn location(&self, q: usize) -> Location {
        self.assignment[q]
    }

    pub fn assignment(&self) -> &[Location] {
        &self.assignment
    }

    /// Storage site of `q`, if it is parked.
    pub fn site_of(&self, q: usize) -> Option<usize> {
        match self.assignment[q] {
            Location::Site(s) => Some(s),
            Location::Zone(_) => None,
        }
    }

    pub fn site_occupant(&self, site: usize) -> Option<usize> {
        self.site_occupant[site]
    }

    pub fn zone_occupants(&self, zone: usize) -> &[usize] {
        &self.zone_occupants[zone]
    }

    pub fn all_parked(&self) -> bool {
        self.assignment.iter().all(|l| l.is_site())
    }

    fn occupy(&mut self, q: usize, loc: Location) -> Result<()> {
        let n = self.site_occupant.len();
        if loc.index() >= n {
            return Err(Error::Mapping(format!("{loc} out of range")));
        }
        match loc {
            Location::Site(s) => {
                if let Some(other) = self.site_occupant[s] {
                    return Err(Error::Mapping(format!("site Q{s} already holds q{other}")));
                }
                self.site_occupant[s] = Some(q);
            }
            Location::Zone(z) => {
                if self.zone_occupants[z].len() >= ZONE_CAPACITY {
                    return Err(Error::Mapping(format!("zone O{z} is full")));
                }
                self.zone_occupants[z].push(q);
            }
        }
        Ok(())
    }

    /// Moves `q` to `to`, enforcing site and zone capacities.
    pub fn move_qubit(&mut self, q: usize, to: Location) -> Result<()> {
        match self.assignment[q] {
            Location::Site(s) => self.site_occupant[s] = None,
            Location::Zone(z) => self.zone_occupants[z].retain(|&o| o != q),
        }
        self.occupy(q, to)?;
        self.assignment[q] = to;
        Ok(())
    }
}

impl TryFrom<Vec<Location>> for LayoutState {
    type Error = Error;

    fn try_from(v: Vec<Location>) -> Result<Self> {
        Self::try_from_assignment(v)
    }
}

impl From<LayoutState> for Vec<Location> {
    fn from(l: LayoutState) -> Self {
        l.assignment
    }
}
