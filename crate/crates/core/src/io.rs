//! Plain-text artifacts: ray lists, travel-time lists, and grid dumps.
//!
//! Every float is written with 17 significant digits, so parsing an
//! artifact recovers the original values bit for bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forward::Grid;
use crate::geometry::Point2;
use crate::rays::Ray;

/// Decimal formatting that round-trips `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One line per ray: tag `U` with transmitter and receiver, or tag `B`
/// with transmitter, reflection point, and receiver.
pub fn ray_list_to_string(rays: &[Ray]) -> String {
    let mut out = String::new();
    for ray in rays {
        match *ray {
            Ray::Unbroken { transmitter: t, receiver: r } => {
                writeln!(out, "U {} {} {} {}", fmt_f64(t.x), fmt_f64(t.y), fmt_f64(r.x), fmt_f64(r.y))
            }
            Ray::Broken { transmitter: t, reflection: h, receiver: r } => {
                writeln!(
                    out,
                    "B {} {} {} {} {} {}",
                    fmt_f64(t.x),
                    fmt_f64(t.y),
                    fmt_f64(h.x),
                    fmt_f64(h.y),
                    fmt_f64(r.x),
                    fmt_f64(r.y)
                )
            }
        }
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn parse_ray_list(text: &str) -> Result<Vec<Ray>> {
    let mut rays = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let line = line + 1;
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        let ray = match tag {
            "U" => {
                let [tx, ty, rx, ry] = parse_floats(&mut tokens, line)?;
                let (t, r) = (Point2::new(tx, ty), Point2::new(rx, ry));
                if t == r {
                    return Err(parse_error(line, "transmitter equals receiver"));
                }
                Ray::unbroken(t, r)
            }
            "B" => {
                let [tx, ty, hx, hy, rx, ry] = parse_floats(&mut tokens, line)?;
                let (t, h, r) =
                    (Point2::new(tx, ty), Point2::new(hx, hy), Point2::new(rx, ry));
                if t == r {
                    return Err(parse_error(line, "transmitter equals receiver"));
                }
                if h == t || h == r {
                    return Err(parse_error(line, "reflection point equals an endpoint"));
                }
                Ray::broken(t, h, r)
            }
            other => return Err(parse_error(line, &format!("unknown ray tag `{other}`"))),
        };
        if tokens.next().is_some() {
            return Err(parse_error(line, "trailing tokens after the coordinates"));
        }
        rays.push(ray);
    }
    Ok(rays)
}

/// One travel time per line.
pub fn times_to_string(times: &[f64]) -> String {
    let mut out = String::new();
    for &t in times {
        out.push_str(&fmt_f64(t));
        out.push('\n');
    }
    out
}

pub fn parse_times(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, raw)| !raw.trim().is_empty())
        .map(|(line, raw)| parse_float(raw.trim(), line + 1))
        .collect()
}

/// Header `nx ny origin_x origin_y pixel`, then one line per pixel row
/// with `nx` values each, bottom row first.
pub fn grid_to_string(grid: &Grid, values: &[f64]) -> String {
    assert_eq!(values.len(), grid.n_pixels(), "one value per pixel");
    let mut out = format!(
        "{} {} {} {} {}\n",
        grid.nx,
        grid.ny,
        fmt_f64(grid.origin.x),
        fmt_f64(grid.origin.y),
        fmt_f64(grid.pixel)
    );
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if ix > 0 {
                out.push(' ');
            }
            out.push_str(&fmt_f64(values[grid.index(ix, iy)]));
        }
        out.push('\n');
    }
    out
}

pub fn parse_grid(text: &str) -> Result<(Grid, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(parse_error(1, "empty grid dump"));
    };
    let mut tokens = header.split_whitespace();
    let nx = parse_usize(tokens.next(), 1)?;
    let ny = parse_usize(tokens.next(), 1)?;
    let [ox, oy, pixel] = parse_floats(&mut tokens, 1)?;
    if tokens.next().is_some() {
        return Err(parse_error(1, "trailing tokens in the header"));
    }
    if nx == 0 || ny == 0 || !(pixel > 0.0) {
        return Err(parse_error(1, "grid dimensions must be positive"));
    }
    let grid = Grid::new(nx, ny, Point2::new(ox, oy), pixel);
    let mut values = Vec::with_capacity(grid.n_pixels());
    for _ in 0..ny {
        let Some((line, raw)) = lines.next() else {
            return Err(parse_error(ny + 1, "missing pixel rows"));
        };
        let line = line + 1;
        let mut count = 0;
        for token in raw.split_whitespace() {
            values.push(parse_float(token, line)?);
            count += 1;
        }
        if count != nx {
            return Err(parse_error(line, &format!("expected {nx} values, found {count}")));
        }
    }
    for (line, raw) in lines {
        if !raw.trim().is_empty() {
            return Err(parse_error(line + 1, "unexpected content after the last row"));
        }
    }
    Ok((grid, values))
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    token
        .parse()
        .map_err(|_| parse_error(line, &format!("`{token}` is not a number")))
}

fn parse_floats<'a, const N: usize>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<[f64; N]> {
    let mut out = [0.0; N];
    for slot in &mut out {
        let Some(token) = tokens.next() else {
            return Err(parse_error(line, "too few values"));
        };
        *slot = parse_float(token, line)?;
    }
    Ok(out)
}

fn parse_usize(token: Option<&str>, line: usize) -> Result<usize> {
    let Some(token) = token else {
        return Err(parse_error(line, "too few values"));
    };
    token
        .parse()
        .map_err(|_| parse_error(line, &format!("`{token}` is not a count")))
}
