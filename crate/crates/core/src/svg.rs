//! SVG pictures of planar instances.
//!
//! Palette: `S0` white, `S1` black, unit grid light gray. The y axis points
//! up. Coordinates are printed exactly when integral and otherwise rounded
//! to at most six decimals.

use std::fmt::Write as _;

use crate::chessboard::Decomposition;
use crate::error::{Error, Result};
use crate::geometry::{HalfOpenBox, Point};
use crate::packing::CubeSystem;
use crate::scalar::Scalar;

pub const DEFAULT_SCALE: u32 = 64;

const GRID: &str = "#d3d3d3";
const OUTLINE: &str = "#000000";

fn number<S: Scalar>(x: &S) -> String {
    if let Some(n) = x.to_i64_exact() {
        return n.to_string();
    }
    let s = format!("{:.6}", x.to_f64_lossy());
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Two periods per axis for periodic systems; the bounding box of the cubes otherwise.
pub fn default_window<S: Scalar>(sys: &CubeSystem<S>) -> HalfOpenBox<S> {
    match sys.periods() {
        Some(p) => HalfOpenBox::new(vec![S::zero(); sys.dim()], p.iter().map(|&x| S::from_int(2 * x)).collect())
            .expect("periods are positive"),
        None => {
            let lower = (0..sys.dim())
                .map(|i| sys.origins().iter().map(|o| o.0[i].clone()).min().expect("nonempty"))
                .collect();
            let upper = (0..sys.dim())
                .map(|i| sys.origins().iter().map(|o| o.0[i].clone() + S::one()).max().expect("nonempty"))
                .collect();
            HalfOpenBox::new(lower, upper).expect("cubes have unit size")
        }
    }
}

#[derive(Clone, Copy)]
enum Fill {
    Plain,
    White,
    Black,
}

impl Fill {
    fn css(self) -> &'static str {
        match self {
            Fill::Plain => "#9ecae1",
            Fill::White => "#ffffff",
            Fill::Black => "#000000",
        }
    }
}

fn draw<S: Scalar>(
    sys: &CubeSystem<S>,
    window: Option<&HalfOpenBox<S>>,
    scale: u32,
    fill_of: impl Fn(&Point<S>) -> Fill,
) -> Result<String> {
    if sys.dim() != 2 {
        return Err(Error::Usage(format!("SVG output needs a planar instance, got d = {}", sys.dim())));
    }
    if scale == 0 {
        return Err(Error::Usage("scale must be positive".into()));
    }
    let window = window.cloned().unwrap_or_else(|| default_window(sys));
    if window.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: window.dim(),
        });
    }
    let k = S::from_int(i64::from(scale));
    let (x0, y0) = (window.lower()[0].clone(), window.lower()[1].clone());
    let (x1, y1) = (window.upper()[0].clone(), window.upper()[1].clone());
    let px = |x: &S| number(&((x.clone() - x0.clone()) * k.clone()));
    let py = |y: &S| number(&((y1.clone() - y.clone()) * k.clone()));
    let width = number(&((x1.clone() - x0.clone()) * k.clone()));
    let height = number(&((y1.clone() - y0.clone()) * k.clone()));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "  <defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\"/></clipPath></defs>"
    );
    let _ = writeln!(out, "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
    let _ = writeln!(out, "  <g clip-path=\"url(#window)\">");

    let cubes = sys.unfold(&window.padded(&S::one()))?;
    for o in &cubes {
        let top = o.0[1].clone() + S::one();
        let fill = fill_of(&sys.reduce(o));
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{}\" width=\"{scale}\" height=\"{scale}\" fill=\"{}\" stroke=\"{OUTLINE}\" stroke-width=\"1\"/>",
            px(&o.0[0]),
            py(&top),
            fill.css()
        );
    }

    let ceil = |x: &S| -(-x.clone()).floor();
    let mut x = ceil(&x0);
    while x <= x1 {
        let _ = writeln!(
            out,
            "    <line x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{height}\" stroke=\"{GRID}\" stroke-width=\"1\"/>",
            px(&x)
        );
        x = x + S::one();
    }
    let mut y = ceil(&y0);
    while y <= y1 {
        let _ = writeln!(
            out,
            "    <line x1=\"0\" y1=\"{0}\" x2=\"{width}\" y2=\"{0}\" stroke=\"{GRID}\" stroke-width=\"1\"/>",
            py(&y)
        );
        y = y + S::one();
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}

/// The instance alone.
pub fn render_instance<S: Scalar>(sys: &CubeSystem<S>, window: Option<&HalfOpenBox<S>>, scale: u32) -> Result<String> {
    draw(sys, window, scale, |_| Fill::Plain)
}

/// The chessboard picture: `S0` white, `S1` black.
pub fn render_decomposition<S: Scalar>(
    sys: &CubeSystem<S>,
    decomposition: &Decomposition<S>,
    window: Option<&HalfOpenBox<S>>,
    scale: u32,
) -> Result<String> {
    draw(sys, window, scale, |o| match decomposition.part_of(o) {
        Some(1) => Fill::Black,
        _ => Fill::White,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chessboard::chessboard_decompose;
    use crate::generators::shifted_column_tiling;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn numbers() {
        assert_eq!(number(&Q::from_int(-3)), "-3");
        assert_eq!(number(&Q::ratio(1, 3)), "0.333333");
        assert_eq!(number(&Q::ratio(1, 2)), "0.5");
    }

    #[test]
    fn checkerboard_colors() {
        let sys = shifted_column_tiling(2, &Q::ratio(1, 2)).unwrap();
        let d = chessboard_decompose(&sys).unwrap();
        let svg = render_decomposition(&sys, &d, None, 64).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("width=\"256\""));
        // 4 cubes per period cell, 2x2 periods, plus the padding ring
        let black = svg.matches("fill=\"#000000\"").count();
        let white = svg.matches("fill=\"#ffffff\" stroke").count();
        assert!(black > 0 && white > 0);
        assert_eq!(svg.matches(GRID).count(), 10);
    }

    #[test]
    fn planar_only() {
        let sys = CubeSystem::<Q>::finite(1, vec![Point::from_ints(&[0])]).unwrap();
        assert!(render_instance(&sys, None, 64).is_err());
    }
}
