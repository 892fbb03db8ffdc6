//! Zero-level contours of a sampled scalar field by marching squares.

use std::collections::HashMap;

/// Ordered vertices `[x, y]`; closed loops repeat the first vertex at the end.
pub type Polyline = Vec<[f64; 2]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Between grid nodes `(ix, iy)` and `(ix + 1, iy)`.
    Horizontal(usize, usize),
    /// Between grid nodes `(ix, iy)` and `(ix, iy + 1)`.
    Vertical(usize, usize),
}

/// Zero contours of `field`, sampled on the tensor grid `xs × ys` and stored
/// row-major (`field[iy * xs.len() + ix]`). Cells touching a NaN are skipped.
/// Crossings are placed by linear interpolation along cell edges; saddle
/// cells are resolved with the cell-centre average.
pub fn zero_contours(xs: &[f64], ys: &[f64], field: &[f64]) -> Vec<Polyline> {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(field.len(), nx * ny, "field does not match the grid");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let at = |ix: usize, iy: usize| field[iy * nx + ix];

    let mut points: HashMap<EdgeKey, [f64; 2]> = HashMap::new();
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();

    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let v = [at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1), at(ix, iy + 1)];
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let pos = v.map(|x| x > 0.0);
            // edges in ring order: bottom, right, top, left; edge k joins corners k and k+1
            let edges = [
                EdgeKey::Horizontal(ix, iy),
                EdgeKey::Vertical(ix + 1, iy),
                EdgeKey::Horizontal(ix, iy + 1),
                EdgeKey::Vertical(ix, iy),
            ];
            let mut crossed = Vec::with_capacity(4);
            for k in 0..4 {
                let k1 = (k + 1) % 4;
                if pos[k] != pos[k1] {
                    crossed.push(k);
                    points.entry(edges[k]).or_insert_with(|| {
                        let corner = |c: usize| match c {
                            0 => [xs[ix], ys[iy]],
                            1 => [xs[ix + 1], ys[iy]],
                            2 => [xs[ix + 1], ys[iy + 1]],
                            _ => [xs[ix], ys[iy + 1]],
                        };
                        let (a, b) = (corner(k), corner(k1));
                        let t = v[k] / (v[k] - v[k1]);
                        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
                    });
                }
            }
            match crossed.len() {
                2 => segments.push((edges[crossed[0]], edges[crossed[1]])),
                4 => {
                    let centre_pos = v.iter().sum::<f64>() > 0.0;
                    // isolate the corners whose sign differs from the centre
                    for corner in 0..4 {
                        if pos[corner] != centre_pos {
                            let before = (corner + 3) % 4;
                            segments.push((edges[before], edges[corner]));
                        }
                    }
                }
                _ => {}
            }
        }
    }
    chain(&points, &segments)
}

fn chain(points: &HashMap<EdgeKey, [f64; 2]>, segments: &[(EdgeKey, EdgeKey)]) -> Vec<Polyline> {
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(i);
        adjacency.entry(*b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let walk = |start_seg: usize, start_key: EdgeKey, used: &mut Vec<bool>| {
        let mut line = vec![points[&start_key]];
        let mut key = start_key;
        let mut seg = start_seg;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            key = if a == key { b } else { a };
            line.push(points[&key]);
            match adjacency[&key].iter().find(|&&s| !used[s]) {
                Some(&next) => seg = next,
                None => break,
            }
        }
        line
    };

    // open chains start at edges touched by a single segment (grid boundary or NaN hole)
    let mut starts: Vec<(EdgeKey, usize)> = adjacency
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(k, segs)| (*k, segs[0]))
        .collect();
    starts.sort_by_key(|&(_, s)| s);
    for (key, seg) in starts {
        if !used[seg] {
            lines.push(walk(seg, key, &mut used));
        }
    }
    for seg in 0..segments.len() {
        if !used[seg] {
            let key = segments[seg].0;
            lines.push(walk(seg, key, &mut used));
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn uniform_sign_has_no_contour() {
        let xs = grid(5, 0.0, 1.0);
        let ys = grid(4, 0.0, 1.0);
        assert!(zero_contours(&xs, &ys, &vec![1.0; 20]).is_empty());
        assert!(zero_contours(&xs, &ys, &vec![-1.0; 20]).is_empty());
    }

    #[test]
    fn linear_field_gives_horizontal_line() {
        let xs = grid(7, 0.0, 3.0);
        let ys = grid(9, 0.0, 2.0);
        let field: Vec<f64> = ys
            .iter()
            .flat_map(|&y| xs.iter().map(move |_| y - 1.1))
            .collect();
        let lines = zero_contours(&xs, &ys, &field);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), xs.len());
        for p in &lines[0] {
            assert!((p[1] - 1.1).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_is_closed() {
        let xs = grid(41, -2.0, 2.0);
        let ys = grid(41, -2.0, 2.0);
        let field: Vec<f64> = ys
            .iter()
            .flat_map(|&y| xs.iter().map(move |&x| x * x + y * y - 1.0))
            .collect();
        let lines = zero_contours(&xs, &ys, &field);
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert_eq!(line.first(), line.last());
        for p in line {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn nan_cells_are_skipped() {
        let xs = grid(5, 0.0, 4.0);
        let ys = grid(5, 0.0, 4.0);
        let mut field: Vec<f64> = ys
            .iter()
            .flat_map(|_| xs.iter().map(|&x| x - 2.5))
            .collect();
        field[2 * 5 + 2] = f64::NAN;
        let lines = zero_contours(&xs, &ys, &field);
        let total: usize = lines.iter().map(|l| l.len() - 1).sum();
        // the vertical line crosses 4 cell rows, two of which touch the NaN node
        assert_eq!(total, 2);
    }

    #[test]
    fn saddle_produces_two_segments() {
        let xs = [0.0, 1.0];
        let ys = [0.0, 1.0];
        let field = [1.0, -1.0, -1.0, 1.0];
        let lines = zero_contours(&xs, &ys, &field);
        assert_eq!(lines.len(), 2);
    }
}
