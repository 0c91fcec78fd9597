//! SVG snapshots: darker gray substrate under lighter gray film, thin free
//! boundaries, and a thick interface stroke that is dashed where coherent and
//! solid where debonded.

use crate::geometry::{classify_boundary, BoundaryClass, Configuration};
use crate::grid::CellId;

const SUBSTRATE_FILL: &str = "#8a8a8a";
const FILM_FILL: &str = "#cfcfcf";

/// Renders the configuration as a standalone SVG string.
pub fn render_svg(cfg: &Configuration) -> String {
    let grid = &cfg.grid;
    let scale = 64.0;
    let width = 2.0 * grid.l * scale;
    let height = 2.0 * grid.big_l * scale;
    let px = |x: f64| (x + grid.l) * scale;
    let py = |y: f64| height - (y + grid.big_l) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>\n"
    ));

    let cell_rect = |c: CellId, fill: &str, out: &mut String| {
        let (x, y) = (
            grid.x_line(c.i as usize),
            grid.y_line(c.j as usize + 1),
        );
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            px(x),
            py(y),
            grid.hx() * scale,
            grid.hy() * scale,
            fill
        ));
    };
    for c in grid.cells() {
        if cfg.substrate.contains_cell(grid, c) {
            cell_rect(c, SUBSTRATE_FILL, &mut svg);
        } else if cfg.composite.contains_cell(grid, c) {
            cell_rect(c, FILM_FILL, &mut svg);
        }
    }

    if let Ok(labels) = classify_boundary(cfg) {
        for e in &labels.entries {
            let (p, q) = grid.edge_endpoints(e.edge);
            let (x1, y1) = grid.vertex_pos(p);
            let (x2, y2) = grid.vertex_pos(q);
            let (stroke, width_px, dash) = match e.class {
                BoundaryClass::Coherent | BoundaryClass::SubstrateFlawCoherent => {
                    ("#202020", 3.0, Some("6,4"))
                }
                BoundaryClass::Incoherent
                | BoundaryClass::SubstrateCrackDelaminated
                | BoundaryClass::SubstrateFilamentFilmCrack => ("#202020", 3.0, None),
                BoundaryClass::FilmCrack => ("#b03030", 1.6, None),
                BoundaryClass::FilmFilament | BoundaryClass::SubstrateFilamentExposed => {
                    ("#306090", 1.6, None)
                }
                _ => ("#404040", 1.0, None),
            };
            let dash_attr = dash
                .map(|d| format!(" stroke-dasharray=\"{d}\""))
                .unwrap_or_default();
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" \
                 stroke-width=\"{:.1}\"{}/>\n",
                px(x1),
                py(y1),
                px(x2),
                py(y2),
                stroke,
                width_px,
                dash_attr
            ));
        }
    }

    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n</svg>\n"
    ));
    svg
}
