//! Pictures of colorings and value fields.
//!
//! Planar patches and paths become binary PPM (P6) or SVG 1.1 images with one
//! `scale x scale` block per vertex, vertex `(x, y)` drawn at column `x`, row
//! `y` counted from the top. Trees cannot be drawn this way and are written
//! as indented text instead.
//!
//! Color labels 1, 2 and 3 are white, black and gray. Labels 4 to 19 use
//! [`PALETTE`] in order and higher labels cycle through it again. Value
//! fields map linearly from black at the minimum to white at the maximum; a
//! constant field is drawn mid-gray.

use std::fmt::Write as _;

use latticeperfect_core::coloring::{Coloring, ValueField};
use latticeperfect_core::lattice::{Extents, Patch};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("trees are rendered as text, not images")]
    TreeImage,
    #[error("only trees are rendered as text")]
    NotTree,
    #[error("scale must be between 1 and 64")]
    BadScale,
}

pub const PALETTE: [[u8; 3]; 16] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [220, 190, 255],
    [170, 110, 40],
    [255, 250, 200],
    [128, 0, 0],
    [0, 0, 128],
];

/// RGB for a 0-based color index.
pub fn color_rgb(color: usize) -> [u8; 3] {
    match color {
        0 => [255, 255, 255],
        1 => [0, 0, 0],
        2 => [128, 128, 128],
        c => PALETTE[(c - 3) % PALETTE.len()],
    }
}

fn gray_levels(values: &[f64]) -> Vec<[u8; 3]> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
            (l.min(x), h.max(x))
        });
    values
        .iter()
        .map(|&x| {
            let g = if hi > lo {
                (255.0 * (x - lo) / (hi - lo)).round() as u8
            } else {
                128
            };
            [g, g, g]
        })
        .collect()
}

fn grid_size(patch: &Patch) -> Result<(usize, usize), RenderError> {
    match patch.extents() {
        Extents::Line(len) => Ok((len, 1)),
        Extents::Plane { width, height } => Ok((width, height)),
        Extents::Tree { .. } => Err(RenderError::TreeImage),
    }
}

fn ppm(patch: &Patch, scale: usize, rgb: &[[u8; 3]]) -> Result<Vec<u8>, RenderError> {
    if !(1..=64).contains(&scale) {
        return Err(RenderError::BadScale);
    }
    let (w, h) = grid_size(patch)?;
    let mut out = format!("P6\n{} {}\n255\n", w * scale, h * scale).into_bytes();
    out.reserve(w * h * scale * scale * 3);
    for y in 0..h {
        for _ in 0..scale {
            for x in 0..w {
                for _ in 0..scale {
                    out.extend_from_slice(&rgb[y * w + x]);
                }
            }
        }
    }
    Ok(out)
}

fn svg(patch: &Patch, scale: usize, rgb: &[[u8; 3]]) -> Result<String, RenderError> {
    if !(1..=64).contains(&scale) {
        return Err(RenderError::BadScale);
    }
    let (w, h) = grid_size(patch)?;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" shape-rendering="crispEdges">"#,
        w * scale,
        h * scale
    );
    for y in 0..h {
        for x in 0..w {
            let [r, g, b] = rgb[y * w + x];
            let _ = writeln!(
                s,
                r##"<rect x="{}" y="{}" width="{scale}" height="{scale}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                x * scale,
                y * scale
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn coloring_rgb(c: &Coloring) -> Vec<[u8; 3]> {
    c.colors().iter().map(|&x| color_rgb(x)).collect()
}

pub fn coloring_ppm(c: &Coloring, scale: usize) -> Result<Vec<u8>, RenderError> {
    ppm(c.patch(), scale, &coloring_rgb(c))
}

pub fn field_ppm(f: &ValueField, scale: usize) -> Result<Vec<u8>, RenderError> {
    ppm(f.patch(), scale, &gray_levels(f.values()))
}

pub fn coloring_svg(c: &Coloring, scale: usize) -> Result<String, RenderError> {
    svg(c.patch(), scale, &coloring_rgb(c))
}

pub fn field_svg(f: &ValueField, scale: usize) -> Result<String, RenderError> {
    svg(f.patch(), scale, &gray_levels(f.values()))
}

/// One line per vertex: each spine vertex as `[position] label`, followed by
/// its subtree with two spaces of indentation per level.
fn tree_text(patch: &Patch, label: impl Fn(usize) -> String) -> Result<String, RenderError> {
    let Extents::Tree { spine, .. } = patch.extents() else {
        return Err(RenderError::NotTree);
    };
    let mut s = String::new();
    let spine = spine as i64;
    for pos in -spine..=spine {
        let root = patch.index(pos, 0).expect("spine vertex");
        let _ = writeln!(s, "[{pos}] {}", label(root));
        let mut stack = vec![(1i64, 1usize)];
        while let Some((h, level)) = stack.pop() {
            let Some(v) = patch.index(pos, h) else {
                continue;
            };
            let _ = writeln!(s, "{}{}", "  ".repeat(level), label(v));
            stack.push((2 * h + 1, level + 1));
            stack.push((2 * h, level + 1));
        }
    }
    Ok(s)
}

pub fn coloring_tree_text(c: &Coloring) -> Result<String, RenderError> {
    tree_text(c.patch(), |v| (c.color(v) + 1).to_string())
}

pub fn field_tree_text(f: &ValueField) -> Result<String, RenderError> {
    tree_text(f.patch(), |v| f.values()[v].to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use latticeperfect_core::lattice::{GridKind, Wrap};
    use std::sync::Arc;

    fn checkerboard(w: usize) -> Coloring {
        let p = Arc::new(Patch::torus(GridKind::Square, w, w).unwrap());
        let colors = (0..w * w).map(|v| (v % w + v / w) % 2).collect();
        Coloring::new(p, colors, 2).unwrap()
    }

    #[test]
    fn checkerboard_blocks() {
        let img = coloring_ppm(&checkerboard(8), 8).unwrap();
        let header = b"P6\n64 64\n255\n";
        assert_eq!(&img[..header.len()], header);
        let px = &img[header.len()..];
        assert_eq!(px.len(), 64 * 64 * 3);
        let at = |x: usize, y: usize| &px[(y * 64 + x) * 3..(y * 64 + x) * 3 + 3];
        assert_eq!(at(0, 0), [255, 255, 255]);
        assert_eq!(at(7, 7), [255, 255, 255]);
        assert_eq!(at(8, 0), [0, 0, 0]);
        assert_eq!(at(8, 8), [255, 255, 255]);
    }

    #[test]
    fn palette_order() {
        assert_eq!(color_rgb(2), [128, 128, 128]);
        assert_eq!(color_rgb(3), PALETTE[0]);
        assert_eq!(color_rgb(19), PALETTE[0]);
    }

    #[test]
    fn grayscale_extremes() {
        let p = Arc::new(Patch::ring(3).unwrap());
        let f = ValueField::new(p, vec![0.0, 0.5, 1.0]).unwrap();
        let img = field_ppm(&f, 1).unwrap();
        assert_eq!(
            &img[img.len() - 9..],
            [0, 0, 0, 128, 128, 128, 255, 255, 255]
        );
    }

    #[test]
    fn svg_has_one_rect_per_vertex() {
        let s = coloring_svg(&checkerboard(4), 2).unwrap();
        assert_eq!(s.matches("<rect").count(), 16);
        assert!(s.contains(r##"fill="#000000""##));
    }

    #[test]
    fn tree_as_text() {
        let p = Arc::new(
            Patch::new(
                GridKind::BinaryTree,
                Extents::Tree { spine: 0, depth: 2 },
                Wrap::NONE,
            )
            .unwrap(),
        );
        let c = Coloring::new(p, vec![0, 1, 0, 1], 2).unwrap();
        assert_eq!(
            coloring_tree_text(&c).unwrap(),
            "[0] 1\n  2\n    1\n    2\n"
        );
        assert_eq!(coloring_ppm(&c, 1), Err(RenderError::TreeImage));
    }
}
