//! Serialization: the configuration document, tension and material
//! descriptors, and line-delimited record streams. Everything is JSON with
//! deterministic field and element order, so identical states serialize to
//! identical bytes and round-trips are exact.

use std::fmt;
use std::fs;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elasticity::Material;
use crate::geometry::{
    substrate_from_height, CompositeRegion, Configuration, CrackSet, HeightProfile, Spike,
};
use crate::grid::{Axis, CellId, EdgeId, Grid, VertexId};
use crate::tension::SurfaceTensions;

#[derive(Debug)]
pub enum IoError {
    Parse(String),
    Geometry(crate::error::GeometryError),
    File(String),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Parse(msg) => write!(f, "parse error: {msg}"),
            IoError::Geometry(e) => write!(f, "{e}"),
            IoError::File(msg) => write!(f, "file error: {msg}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<crate::error::GeometryError> for IoError {
    fn from(e: crate::error::GeometryError) -> Self {
        IoError::Geometry(e)
    }
}

/// Edge as `(flat vertex index, "h" | "v")`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeDoc(pub usize, pub char);

fn edge_to_doc(grid: &Grid, e: EdgeId) -> EdgeDoc {
    EdgeDoc(
        grid.vertex_index(e.vertex),
        match e.axis {
            Axis::Horizontal => 'h',
            Axis::Vertical => 'v',
        },
    )
}

fn edge_from_doc(grid: &Grid, d: EdgeDoc) -> Result<EdgeId, IoError> {
    let stride = grid.nx + 1;
    let (i, j) = (d.0 % stride, d.0 / stride);
    if j > grid.ny {
        return Err(IoError::Parse(format!("vertex index {} out of range", d.0)));
    }
    let axis = match d.1 {
        'h' => Axis::Horizontal,
        'v' => Axis::Vertical,
        other => return Err(IoError::Parse(format!("unknown edge axis '{other}'"))),
    };
    let e = EdgeId {
        vertex: VertexId::new(i, j),
        axis,
    };
    if !grid.edge_valid(e) {
        return Err(IoError::Parse(format!("edge {d:?} is not a lattice edge")));
    }
    Ok(e)
}

/// The on-disk configuration document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfigurationDoc {
    pub grid: Grid,
    /// Substrate height per column, in cells above `y = 0`.
    pub heights: Vec<usize>,
    /// `(interior line, spike top in cells above y = 0)` pairs.
    pub spikes: Vec<(usize, usize)>,
    pub cracks: Vec<EdgeDoc>,
    /// Composite cells as run-length rows: per row, `(start, len)` runs.
    pub cells: Vec<Vec<(usize, usize)>>,
    pub slits: Vec<EdgeDoc>,
    pub filaments: Vec<EdgeDoc>,
}

pub fn to_document(cfg: &Configuration) -> ConfigurationDoc {
    let grid = &cfg.grid;
    let zero = grid.zero_row();
    let heights = cfg
        .substrate
        .profile
        .rows()
        .iter()
        .map(|&r| r - zero)
        .collect();
    let spikes = cfg
        .substrate
        .profile
        .spikes()
        .iter()
        .map(|s| (s.line, s.top_row - zero))
        .collect();
    let mut cells = Vec::with_capacity(grid.ny);
    for j in 0..grid.ny {
        let mut runs = Vec::new();
        let mut start = None;
        for i in 0..=grid.nx {
            let inside =
                i < grid.nx && cfg.composite.contains_cell(grid, CellId::new(i, j));
            match (inside, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push((s, i - s));
                    start = None;
                }
                _ => {}
            }
        }
        cells.push(runs);
    }
    ConfigurationDoc {
        grid: grid.clone(),
        heights,
        spikes,
        cracks: cfg.substrate.cracks.iter().map(|e| edge_to_doc(grid, e)).collect(),
        cells,
        slits: cfg.composite.slits.iter().map(|&e| edge_to_doc(grid, e)).collect(),
        filaments: cfg
            .composite
            .filaments
            .iter()
            .map(|&e| edge_to_doc(grid, e))
            .collect(),
    }
}

pub fn from_document(doc: &ConfigurationDoc) -> Result<Configuration, IoError> {
    let grid = Grid::new(doc.grid.l, doc.grid.big_l, doc.grid.nx, doc.grid.ny)?;
    let zero = grid.zero_row();
    let spikes = doc
        .spikes
        .iter()
        .map(|&(line, top)| Spike {
            line,
            top_row: top + zero,
        })
        .collect();
    let rows = doc.heights.iter().map(|&h| h + zero).collect();
    let profile = HeightProfile::from_rows(&grid, rows, spikes)?;
    let cracks = doc
        .cracks
        .iter()
        .map(|&d| edge_from_doc(&grid, d))
        .collect::<Result<Vec<_>, _>>()?;
    let substrate = substrate_from_height(&grid, profile, CrackSet::from_edges(cracks))?;
    if doc.cells.len() != grid.ny {
        return Err(IoError::Parse(format!(
            "expected {} cell rows, got {}",
            grid.ny,
            doc.cells.len()
        )));
    }
    let mut flags = vec![false; grid.cell_count()];
    for (j, runs) in doc.cells.iter().enumerate() {
        for &(start, len) in runs {
            if start + len > grid.nx {
                return Err(IoError::Parse(format!(
                    "run ({start}, {len}) exceeds row width {}",
                    grid.nx
                )));
            }
            for i in start..start + len {
                flags[grid.cell_index(CellId::new(i, j))] = true;
            }
        }
    }
    let mut composite = CompositeRegion::from_flags(flags);
    for &d in &doc.slits {
        composite.slits.insert(edge_from_doc(&grid, d)?);
    }
    for &d in &doc.filaments {
        composite.filaments.insert(edge_from_doc(&grid, d)?);
    }
    Ok(Configuration {
        grid,
        substrate,
        composite,
    })
}

pub fn configuration_to_string(cfg: &Configuration) -> String {
    serde_json::to_string_pretty(&to_document(cfg)).expect("document serializes")
}

pub fn configuration_from_str(s: &str) -> Result<Configuration, IoError> {
    let doc: ConfigurationDoc =
        serde_json::from_str(s).map_err(|e| IoError::Parse(e.to_string()))?;
    from_document(&doc)
}

pub fn save_configuration(path: &Path, cfg: &Configuration) -> Result<(), IoError> {
    fs::write(path, configuration_to_string(cfg)).map_err(|e| IoError::File(e.to_string()))
}

pub fn load_configuration(path: &Path) -> Result<Configuration, IoError> {
    let s = fs::read_to_string(path).map_err(|e| IoError::File(format!("{}: {e}", path.display())))?;
    configuration_from_str(&s)
}

pub fn load_tensions(path: &Path) -> Result<SurfaceTensions, IoError> {
    let s = fs::read_to_string(path).map_err(|e| IoError::File(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| IoError::Parse(e.to_string()))
}

pub fn save_tensions(path: &Path, t: &SurfaceTensions) -> Result<(), IoError> {
    let s = serde_json::to_string_pretty(t).expect("tensions serialize");
    fs::write(path, s).map_err(|e| IoError::File(e.to_string()))
}

pub fn load_material(path: &Path) -> Result<Material, IoError> {
    let s = fs::read_to_string(path).map_err(|e| IoError::File(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| IoError::Parse(e.to_string()))
}

pub fn save_material(path: &Path, m: &Material) -> Result<(), IoError> {
    let s = serde_json::to_string_pretty(m).expect("material serializes");
    fs::write(path, s).map_err(|e| IoError::File(e.to_string()))
}

/// Writes one JSON object per line.
pub struct RecordWriter<W: std::io::Write> {
    out: W,
}

impl<W: std::io::Write> RecordWriter<W> {
    pub fn new(out: W) -> Self {
        RecordWriter { out }
    }

    pub fn write<T: Serialize>(&mut self, record: &T) -> Result<(), IoError> {
        let line = serde_json::to_string(record).map_err(|e| IoError::Parse(e.to_string()))?;
        writeln!(self.out, "{line}").map_err(|e| IoError::File(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn document_round_trip_is_bit_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let grid = Grid::new(1.25, 1.0, 6, 8).unwrap();
        for _ in 0..20 {
            let cfg = crate::sample::random_admissible(&mut rng, &grid);
            let s1 = configuration_to_string(&cfg);
            let back = configuration_from_str(&s1).unwrap();
            assert_eq!(back, cfg, "structural round trip");
            let s2 = configuration_to_string(&back);
            assert_eq!(s1, s2, "byte-exact round trip");
        }
    }

    #[test]
    fn bad_edge_axis_is_rejected() {
        let grid = Grid::square(4);
        assert!(edge_from_doc(&grid, EdgeDoc(3, 'x')).is_err());
        assert!(edge_from_doc(&grid, EdgeDoc(999, 'h')).is_err());
    }
}
