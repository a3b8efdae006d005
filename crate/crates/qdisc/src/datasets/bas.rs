use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DatasetError, LabeledData};
use crate::discriminator::FeatureVector;
use crate::rng::SplitMix64;

const SIDE: usize = 3;

/// Class of a grid: a bar's illuminated rectangle is strictly wider than
/// tall (class 0), a stripe's strictly taller than wide (class 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GridKind {
    Bar = 0,
    Stripe = 1,
}

impl GridKind {
    pub fn label(self) -> u8 {
        self as u8
    }

    fn name(self) -> &'static str {
        match self {
            GridKind::Bar => "bar",
            GridKind::Stripe => "stripe",
        }
    }

    fn parse(name: &str) -> Option<Self> {
        match name {
            "bar" => Some(GridKind::Bar),
            "stripe" => Some(GridKind::Stripe),
            _ => None,
        }
    }
}

/// A 3x3 grid whose illuminated cells form exactly one axis-aligned
/// rectangle with unequal side lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasGrid {
    cells: [[bool; SIDE]; SIDE],
    kind: GridKind,
}

impl BasGrid {
    fn from_rect(top: usize, left: usize, height: usize, width: usize) -> Self {
        debug_assert!(height != width && top + height <= SIDE && left + width <= SIDE);
        let mut cells = [[false; SIDE]; SIDE];
        for row in cells.iter_mut().skip(top).take(height) {
            for cell in row.iter_mut().skip(left).take(width) {
                *cell = true;
            }
        }
        let kind = if width > height {
            GridKind::Bar
        } else {
            GridKind::Stripe
        };
        BasGrid { cells, kind }
    }

    pub fn cells(&self) -> &[[bool; SIDE]; SIDE] {
        &self.cells
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Row-major cell string, `1` for illuminated: `"111000000"`.
    pub fn cells_string(&self) -> String {
        self.cells
            .iter()
            .flatten()
            .map(|&lit| if lit { '1' } else { '0' })
            .collect()
    }

    /// Classify raw cells by geometry: the lit cells must exactly fill
    /// their bounding rectangle, and its sides must differ.
    pub fn classify(cells: &[[bool; SIDE]; SIDE]) -> Option<GridKind> {
        let lit: Vec<(usize, usize)> = (0..SIDE)
            .flat_map(|r| (0..SIDE).map(move |c| (r, c)))
            .filter(|&(r, c)| cells[r][c])
            .collect();
        if lit.is_empty() {
            return None;
        }
        let top = lit.iter().map(|&(r, _)| r).min().unwrap();
        let bottom = lit.iter().map(|&(r, _)| r).max().unwrap();
        let left = lit.iter().map(|&(_, c)| c).min().unwrap();
        let right = lit.iter().map(|&(_, c)| c).max().unwrap();
        let height = bottom - top + 1;
        let width = right - left + 1;
        if lit.len() != height * width {
            return None; // holes in the bounding rectangle
        }
        match width.cmp(&height) {
            std::cmp::Ordering::Greater => Some(GridKind::Bar),
            std::cmp::Ordering::Less => Some(GridKind::Stripe),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Rebuild a grid from its serialized parts, validating the geometry
    /// and the claimed kind.
    pub fn from_parts(cells_string: &str, kind: GridKind) -> Result<Self, DatasetError> {
        let bits: Vec<bool> = cells_string
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(DatasetError::MalformedGrid {
                    cells: cells_string.to_string(),
                }),
            })
            .collect::<Result<_, _>>()?;
        if bits.len() != SIDE * SIDE {
            return Err(DatasetError::MalformedGrid {
                cells: cells_string.to_string(),
            });
        }
        let mut cells = [[false; SIDE]; SIDE];
        for (i, &bit) in bits.iter().enumerate() {
            cells[i / SIDE][i % SIDE] = bit;
        }
        let actual = Self::classify(&cells).ok_or_else(|| DatasetError::MalformedGrid {
            cells: cells_string.to_string(),
        })?;
        if actual != kind {
            return Err(DatasetError::GridKindMismatch {
                cells: cells_string.to_string(),
                claimed: kind.name().to_string(),
                actual: actual.name().to_string(),
            });
        }
        Ok(BasGrid { cells, kind })
    }

    /// The grid reflected across the main diagonal (bars become stripes).
    pub fn transpose(&self) -> Self {
        let mut cells = [[false; SIDE]; SIDE];
        for (r, row) in self.cells.iter().enumerate() {
            for (c, &lit) in row.iter().enumerate() {
                cells[c][r] = lit;
            }
        }
        let kind = Self::classify(&cells).expect("transpose of a valid grid is valid");
        BasGrid { cells, kind }
    }
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    cells: String,
    kind: String,
}

impl Serialize for BasGrid {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GridRepr {
            cells: self.cells_string(),
            kind: self.kind.name().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BasGrid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GridRepr::deserialize(deserializer)?;
        let kind = GridKind::parse(&repr.kind)
            .ok_or_else(|| D::Error::custom(format!("unknown grid kind {:?}", repr.kind)))?;
        BasGrid::from_parts(&repr.cells, kind).map_err(D::Error::custom)
    }
}

/// Every viable grid: all 11 bars (rectangles wider than tall) and their 11
/// transposed stripes, in canonical order (bars first, then by cell string).
pub fn bas_enumerate() -> Vec<BasGrid> {
    let mut grids = Vec::with_capacity(22);
    for height in 1..=SIDE {
        for width in 1..=SIDE {
            if width == height {
                continue;
            }
            for top in 0..=SIDE - height {
                for left in 0..=SIDE - width {
                    grids.push(BasGrid::from_rect(top, left, height, width));
                }
            }
        }
    }
    grids.sort_by_key(|g| (g.kind, g.cells_string()));
    grids
}

/// Draw `n` grids uniformly with replacement from the 22 viable grids,
/// deterministically from `seed`; labels are bar = 0, stripe = 1.
pub fn bas_sample(n: usize, seed: u64) -> LabeledData<BasGrid> {
    assert!(n >= 1, "sample size must be positive");
    let pool = bas_enumerate();
    let mut rng = SplitMix64::new(seed);
    let mut items = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let grid = pool[rng.next_below(pool.len() as u64) as usize].clone();
        labels.push(grid.kind().label());
        items.push(grid);
    }
    LabeledData::new(
        items,
        labels,
        format!("bars-and-stripes: {n} draws, seed {seed}"),
    )
}

fn cells_to_bits(cells: &[[bool; SIDE]; SIDE]) -> Vec<u8> {
    cells.iter().flatten().map(|&lit| lit as u8).collect()
}

/// Nine-bit feature vector: cells read row-major, 1 = illuminated.
pub fn bas_features(grid: &BasGrid) -> FeatureVector {
    FeatureVector::new(cells_to_bits(grid.cells())).expect("nine binary features")
}
