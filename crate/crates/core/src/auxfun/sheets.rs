//! The two-sheeted geometry `y = 4z/(1+z)²`.
//!
//! Sheet 1 is the closed unit disk `|z| ≤ 1`, sheet 2 its exterior reached
//! through `z ↦ 1/z`. Both sheets cover the `y`-plane once and are glued
//! along the cut `y ∈ (1, ∞)`, which is the image of the unit circle.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which Riemann sheet a point lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    /// `|z| ≤ 1`, principal square root.
    First,
    /// `|z| ≥ 1`, opposite square root, `z̃ = 1/z`.
    Second,
}

impl Sheet {
    pub fn index(self) -> u8 {
        match self {
            Sheet::First => 1,
            Sheet::Second => 2,
        }
    }

    pub fn other(self) -> Sheet {
        match self {
            Sheet::First => Sheet::Second,
            Sheet::Second => Sheet::First,
        }
    }
}

impl TryFrom<u8> for Sheet {
    type Error = Error;

    fn try_from(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Sheet::First),
            2 => Ok(Sheet::Second),
            other => Err(Error::InvalidSheet(other)),
        }
    }
}

/// A complex coordinate tagged with its sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetPoint {
    pub coord: Complex64,
    pub sheet: Sheet,
}

impl SheetPoint {
    pub fn new(coord: Complex64, sheet: Sheet) -> Self {
        Self { coord, sheet }
    }

    /// Places a `z`-plane point on the sheet its modulus selects. The unit
    /// circle itself is assigned to sheet 1.
    pub fn from_z(z: Complex64) -> Self {
        let sheet = if z.norm() <= 1.0 { Sheet::First } else { Sheet::Second };
        Self { coord: z, sheet }
    }
}

/// Side from which a point on the cut `y > 1` is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutSide {
    /// `y + i0`
    Above,
    /// `y − i0`
    Below,
}

/// `y = 4z/(1+z)²`.
pub fn map_y(z: Complex64) -> Result<Complex64> {
    let denom = (1.0 + z) * (1.0 + z);
    if denom.norm() == 0.0 {
        return Err(Error::Pole);
    }
    Ok(4.0 * z / denom)
}

/// Inverse of [`map_y`] on the requested sheet.
///
/// On sheet 1 this is `z = −1 + (2/y)(1 − √(1−y))`, evaluated as
/// `y / (1 + √(1−y))²` so that small `y` keeps full relative precision
/// (`z ≈ y/4 + y²/8 + …`). Sheet 2 returns `(1 + √(1−y))²/y = 1/z`.
///
/// Real `y > 1` lies on the cut and needs an explicit `side`; elsewhere
/// `side` is ignored.
pub fn map_z(y: Complex64, sheet: Sheet, side: Option<CutSide>) -> Result<Complex64> {
    let on_cut = y.im == 0.0 && y.re > 1.0;
    let root = if on_cut {
        let mag = (y.re - 1.0).sqrt();
        match side {
            // 1 − (y ± i0) = −(y − 1) ∓ i0
            Some(CutSide::Above) => Complex64::new(0.0, -mag),
            Some(CutSide::Below) => Complex64::new(0.0, mag),
            None => return Err(Error::OnBranchCut(y.re)),
        }
    } else {
        (1.0 - y).sqrt()
    };
    let shifted = (1.0 + root) * (1.0 + root);
    match sheet {
        Sheet::First => Ok(y / shifted),
        Sheet::Second => {
            if y.norm() == 0.0 {
                return Err(Error::Domain {
                    what: "map_z",
                    arg: format!("{y}"),
                    domain: "y ≠ 0 on sheet 2 (z̃ = ∞)",
                });
            }
            Ok(shifted / y)
        }
    }
}

/// `y`-plane image of a sheet point given in `z`.
pub fn to_y(point: SheetPoint) -> Result<Complex64> {
    map_y(point.coord)
}
