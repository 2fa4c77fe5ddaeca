use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice families with a known site percolation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LatticeKind {
    Linear1d,
    /// Periodic chain; used for cluster statistics without end effects.
    Ring1d,
    Square2d,
    Triangular2d,
    Honeycomb2d,
    Diamond3d,
    SimpleCubic3d,
    BodyCenteredCubic3d,
    FaceCenteredCubic3d,
    /// Hypercubic lattice in 4 to 7 dimensions.
    Hypercubic(u8),
    /// Cayley tree with coordination `z`.
    Bethe(u32),
}

impl LatticeKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            LatticeKind::Hypercubic(d) if !(4..=7).contains(&d) => Err(Error::validation(format!(
                "hypercubic dimension {d} not in 4..=7"
            ))),
            LatticeKind::Bethe(z) if z < 3 => Err(Error::validation(format!(
                "Bethe lattice coordination {z} must be at least 3"
            ))),
            k => Ok(k),
        }
    }

    /// Spatial dimension; `None` for the Bethe lattice.
    pub fn dimension(self) -> Option<u32> {
        use LatticeKind::*;
        match self {
            Linear1d | Ring1d => Some(1),
            Square2d | Triangular2d | Honeycomb2d => Some(2),
            Diamond3d | SimpleCubic3d | BodyCenteredCubic3d | FaceCenteredCubic3d => Some(3),
            Hypercubic(d) => Some(d as u32),
            Bethe(_) => None,
        }
    }

    /// Number of nearest neighbours of an interior site.
    pub fn coordination(self) -> u32 {
        use LatticeKind::*;
        match self {
            Linear1d | Ring1d => 2,
            Honeycomb2d => 3,
            Square2d | Diamond3d => 4,
            Triangular2d | SimpleCubic3d => 6,
            BodyCenteredCubic3d => 8,
            FaceCenteredCubic3d => 12,
            Hypercubic(d) => 2 * d as u32,
            Bethe(z) => z,
        }
    }

    /// Published site percolation threshold.
    pub fn reference_threshold(self) -> f64 {
        use LatticeKind::*;
        match self {
            Linear1d | Ring1d => 1.0,
            Honeycomb2d => 0.696,
            Square2d => 0.593,
            Triangular2d => 0.5,
            Diamond3d => 0.430,
            SimpleCubic3d => 0.312,
            BodyCenteredCubic3d => 0.246,
            FaceCenteredCubic3d => 0.198,
            Hypercubic(4) => 0.197,
            Hypercubic(5) => 0.141,
            Hypercubic(6) => 0.107,
            Hypercubic(7) => 0.089,
            Hypercubic(_) => f64::NAN,
            Bethe(z) => 1.0 / (z as f64 - 1.0),
        }
    }

    /// Whether `build_lattice` can construct this kind.
    pub fn is_buildable(self) -> bool {
        !matches!(
            self,
            LatticeKind::Diamond3d
                | LatticeKind::BodyCenteredCubic3d
                | LatticeKind::FaceCenteredCubic3d
        )
    }

    /// Whether the lattice has two opposite faces to span between.
    pub fn has_faces(self) -> bool {
        !matches!(self, LatticeKind::Ring1d | LatticeKind::Bethe(_))
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LatticeKind::*;
        match self {
            Linear1d => f.write_str("linear-1d"),
            Ring1d => f.write_str("ring-1d"),
            Square2d => f.write_str("square-2d"),
            Triangular2d => f.write_str("triangular-2d"),
            Honeycomb2d => f.write_str("honeycomb-2d"),
            Diamond3d => f.write_str("diamond-3d"),
            SimpleCubic3d => f.write_str("simple-cubic-3d"),
            BodyCenteredCubic3d => f.write_str("bcc-3d"),
            FaceCenteredCubic3d => f.write_str("fcc-3d"),
            Hypercubic(d) => write!(f, "hypercubic-{d}d"),
            Bethe(z) => write!(f, "bethe-z{z}"),
        }
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use LatticeKind::*;
        let kind = match s {
            "linear-1d" | "linear" => Linear1d,
            "ring-1d" | "ring" => Ring1d,
            "square-2d" | "square" => Square2d,
            "triangular-2d" | "triangular" => Triangular2d,
            "honeycomb-2d" | "honeycomb" => Honeycomb2d,
            "diamond-3d" | "diamond" => Diamond3d,
            "simple-cubic-3d" | "simple-cubic" => SimpleCubic3d,
            "bcc-3d" | "bcc" => BodyCenteredCubic3d,
            "fcc-3d" | "fcc" => FaceCenteredCubic3d,
            _ => {
                if let Some(d) = s
                    .strip_prefix("hypercubic-")
                    .and_then(|r| r.strip_suffix('d'))
                {
                    Hypercubic(d.parse().map_err(|_| unknown(s))?)
                } else if let Some(z) = s.strip_prefix("bethe-z") {
                    Bethe(z.parse().map_err(|_| unknown(s))?)
                } else {
                    return Err(unknown(s));
                }
            }
        };
        kind.validate()
    }
}

fn unknown(s: &str) -> Error {
    Error::validation(format!("unknown lattice kind '{s}'"))
}

impl TryFrom<String> for LatticeKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LatticeKind> for String {
    fn from(k: LatticeKind) -> Self {
        k.to_string()
    }
}

/// A lattice kind plus its linear size: side length for regular lattices,
/// number of generations for the Bethe lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    pub kind: LatticeKind,
    pub size: usize,
}

impl LatticeGeometry {
    pub fn new(kind: LatticeKind, size: usize) -> Result<Self> {
        let kind = kind.validate()?;
        let min = match kind {
            LatticeKind::Ring1d => 3,
            LatticeKind::Bethe(_) => 0,
            _ => 1,
        };
        if size < min {
            return Err(Error::validation(format!(
                "{kind} needs size >= {min}, got {size}"
            )));
        }
        let g = Self { kind, size };
        g.site_count()?;
        Ok(g)
    }

    pub fn coordination(&self) -> u32 {
        self.kind.coordination()
    }

    /// Total number of sites, or a validation error if it does not fit in `u32`.
    pub fn site_count(&self) -> Result<usize> {
        let too_big =
            || Error::validation(format!("{} of size {} is too large", self.kind, self.size));
        let n: u64 = match self.kind {
            LatticeKind::Bethe(z) => {
                // 1 + z * sum_{k < g} (z - 1)^k
                let mut total: u64 = 1;
                let mut shell: u64 = z as u64;
                for _ in 0..self.size {
                    total = total.checked_add(shell).ok_or_else(too_big)?;
                    shell = shell.checked_mul(z as u64 - 1).ok_or_else(too_big)?;
                }
                total
            }
            k => {
                let d = k.dimension().expect("regular lattices have a dimension");
                (self.size as u64).checked_pow(d).ok_or_else(too_big)?
            }
        };
        if n > u32::MAX as u64 {
            return Err(too_big());
        }
        Ok(n as usize)
    }
}

impl fmt::Display for LatticeGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {})", self.kind, self.size)
    }
}

/// One row of the published threshold table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceThreshold {
    pub dimension: Option<u32>,
    pub lattice: &'static str,
    pub kind: LatticeKind,
    pub neighbors: u32,
    pub pc: f64,
}

/// The published site-threshold table. The Bethe row is listed for `z = 3`;
/// its threshold is `1 / (z - 1)` in general.
pub fn reference_thresholds() -> Vec<ReferenceThreshold> {
    use LatticeKind::*;
    [
        ("linear", Linear1d),
        ("honeycomb", Honeycomb2d),
        ("square", Square2d),
        ("triangular", Triangular2d),
        ("diamond", Diamond3d),
        ("simple cubic", SimpleCubic3d),
        ("body centered cubic", BodyCenteredCubic3d),
        ("face centered cubic", FaceCenteredCubic3d),
        ("hypercubic", Hypercubic(4)),
        ("hypercubic", Hypercubic(5)),
        ("hypercubic", Hypercubic(6)),
        ("hypercubic", Hypercubic(7)),
        ("Bethe lattice (Cayley graph)", Bethe(3)),
    ]
    .into_iter()
    .map(|(lattice, kind)| ReferenceThreshold {
        dimension: kind.dimension(),
        lattice,
        kind,
        neighbors: kind.coordination(),
        pc: kind.reference_threshold(),
    })
    .collect()
}
