//! Quality indicators: min-max normalization and exact hypervolume for two
//! and three objectives.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("hypervolume supports 2 or 3 dimensions, got {0}")]
    UnsupportedDimension(usize),
    #[error("cannot build bounds from an empty pool")]
    EmptyPool,
}

/// Componentwise ideal/nadir of a pooled point set, in minimization space.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationBounds {
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
}

impl NormalizationBounds {
    /// True where nadir equals ideal.
    pub fn zero_range(&self) -> Vec<bool> {
        self.ideal
            .iter()
            .zip(&self.nadir)
            .map(|(i, n)| n - i <= 0.0)
            .collect()
    }
}

/// Componentwise min/max over the union of the supplied fronts.
pub fn build_bounds<'a, I>(fronts: I) -> Result<NormalizationBounds, MetricsError>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut ideal: Option<Vec<f64>> = None;
    let mut nadir: Option<Vec<f64>> = None;
    for point in fronts {
        match (&mut ideal, &mut nadir) {
            (Some(lo), Some(hi)) => {
                for (j, &v) in point.iter().enumerate() {
                    if v < lo[j] {
                        lo[j] = v;
                    }
                    if v > hi[j] {
                        hi[j] = v;
                    }
                }
            }
            _ => {
                ideal = Some(point.to_vec());
                nadir = Some(point.to_vec());
            }
        }
    }
    match (ideal, nadir) {
        (Some(ideal), Some(nadir)) => Ok(NormalizationBounds { ideal, nadir }),
        _ => Err(MetricsError::EmptyPool),
    }
}

/// Map each component to `(v - ideal) / (nadir - ideal)`; zero-range
/// components map to 0.
pub fn normalize(points: &[Vec<f64>], bounds: &NormalizationBounds) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let range = bounds.nadir[j] - bounds.ideal[j];
                    if range <= 0.0 {
                        0.0
                    } else {
                        (v - bounds.ideal[j]) / range
                    }
                })
                .collect()
        })
        .collect()
}

fn strictly_below(p: &[f64], reference: &[f64]) -> bool {
    p.iter().zip(reference).all(|(a, r)| a < r)
}

/// Exact hypervolume of a minimization front against a reference point.
/// Points not strictly below the reference in every component are ignored.
pub fn hypervolume(front: &[Vec<f64>], reference: &[f64]) -> Result<f64, MetricsError> {
    let refs: Vec<&[f64]> = front.iter().map(|p| p.as_slice()).collect();
    hypervolume_refs(&refs, reference)
}

fn hypervolume_refs(front: &[&[f64]], reference: &[f64]) -> Result<f64, MetricsError> {
    match reference.len() {
        2 => Ok(hv2d(front, reference)),
        3 => Ok(hv3d(front, reference)),
        d => Err(MetricsError::UnsupportedDimension(d)),
    }
}

/// 2D sort-and-sweep over the nondominated staircase.
fn hv2d(front: &[&[f64]], reference: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = front
        .iter()
        .filter(|p| strictly_below(p, reference))
        .map(|p| (p[0], p[1]))
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // staircase: keep points that strictly improve y as x grows
    let mut stairs: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (x, y) in pts {
        match stairs.last() {
            Some(&(_, last_y)) if y >= last_y => {}
            _ => stairs.push((x, y)),
        }
    }
    let mut hv = 0.0;
    for (i, &(x, y)) in stairs.iter().enumerate() {
        let next_x = stairs.get(i + 1).map_or(reference[0], |&(nx, _)| nx);
        hv += (next_x - x) * (reference[1] - y);
    }
    hv
}

/// 3D dimension sweep: slices along the third axis, maintaining the 2D
/// staircase (and its area) incrementally across slices.
fn hv3d(front: &[&[f64]], reference: &[f64]) -> f64 {
    let mut pts: Vec<&[f64]> = front
        .iter()
        .filter(|p| strictly_below(p, reference))
        .copied()
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a[2].partial_cmp(&b[2]).unwrap());
    let mut hv = 0.0;
    let mut stairs: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    let mut area = 0.0;
    for (i, p) in pts.iter().enumerate() {
        area += stairs_insert(&mut stairs, p[0], p[1], reference);
        let z_next = pts.get(i + 1).map_or(reference[2], |q| q[2]);
        let thickness = z_next - p[2];
        if thickness > 0.0 {
            hv += area * thickness;
        }
    }
    hv
}

/// Insert `(x, y)` into a staircase kept sorted by x ascending / y strictly
/// descending; returns the area the point adds below the reference box.
fn stairs_insert(stairs: &mut Vec<(f64, f64)>, x: f64, y: f64, reference: &[f64]) -> f64 {
    let pos = stairs.partition_point(|&(sx, _)| sx < x);
    // dominated by the step to the left, or by a step sharing its x?
    if pos > 0 && stairs[pos - 1].1 <= y {
        return 0.0;
    }
    if pos < stairs.len() && stairs[pos].0 == x && stairs[pos].1 <= y {
        return 0.0;
    }
    // sweep over the steps the new point dominates, accumulating the strip of
    // area between the old cover and the new y
    let mut gain = 0.0;
    let mut cur_x = x;
    let mut cur_cover = if pos > 0 { stairs[pos - 1].1 } else { reference[1] };
    let mut j = pos;
    while j < stairs.len() && stairs[j].1 >= y {
        let (sx, sy) = stairs[j];
        gain += (sx - cur_x) * (cur_cover - y);
        cur_x = sx;
        cur_cover = sy;
        j += 1;
    }
    let next_x = if j < stairs.len() { stairs[j].0 } else { reference[0] };
    gain += (next_x - cur_x) * (cur_cover - y);
    stairs.splice(pos..j, [(x, y)]);
    gain
}

/// Exclusive contribution of each point: total minus leave-one-out volume.
pub fn hv_contributions(front: &[Vec<f64>], reference: &[f64]) -> Result<Vec<f64>, MetricsError> {
    let refs: Vec<&[f64]> = front.iter().map(|p| p.as_slice()).collect();
    let total = hypervolume_refs(&refs, reference)?;
    (0..refs.len())
        .map(|i| {
            let rest: Vec<&[f64]> = refs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| p)
                .collect();
            Ok(total - hypervolume_refs(&rest, reference)?)
        })
        .collect()
}

/// Grid-counting approximation used as an independent oracle: counts cell
/// centers dominated by the front inside the reference box.
pub fn hv_grid_oracle(front: &[Vec<f64>], reference: &[f64], resolution: usize) -> f64 {
    assert!(resolution >= 10, "resolution below 10");
    let pts: Vec<&Vec<f64>> = front
        .iter()
        .filter(|p| strictly_below(p, reference))
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    let dim = reference.len();
    let lower: Vec<f64> = (0..dim)
        .map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let cell: Vec<f64> = (0..dim)
        .map(|j| (reference[j] - lower[j]) / resolution as f64)
        .collect();
    let cell_volume: f64 = cell.iter().product();
    let mut dominated = 0usize;
    let mut idx = vec![0usize; dim];
    loop {
        let center: Vec<f64> = (0..dim)
            .map(|j| lower[j] + (idx[j] as f64 + 0.5) * cell[j])
            .collect();
        if pts
            .iter()
            .any(|p| p.iter().zip(&center).all(|(a, c)| a <= c))
        {
            dominated += 1;
        }
        // odometer increment
        let mut j = 0;
        loop {
            idx[j] += 1;
            if idx[j] < resolution {
                break;
            }
            idx[j] = 0;
            j += 1;
            if j == dim {
                return dominated as f64 * cell_volume;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_of_singleton_and_pair() {
        let single = build_bounds([vec![1.0, 2.0]].iter().map(|v| v.as_slice())).unwrap();
        assert_eq!(single.ideal, vec![1.0, 2.0]);
        assert_eq!(single.nadir, vec![1.0, 2.0]);
        let pts = [vec![0.0, 1.0], vec![1.0, 0.0]];
        let b = build_bounds(pts.iter().map(|v| v.as_slice())).unwrap();
        assert_eq!(b.ideal, vec![0.0, 0.0]);
        assert_eq!(b.nadir, vec![1.0, 1.0]);
    }

    #[test]
    fn bounds_are_order_independent() {
        let a = [vec![3.0, 1.0], vec![0.0, 5.0], vec![2.0, 2.0]];
        let mut rev = a.to_vec();
        rev.reverse();
        let ba = build_bounds(a.iter().map(|v| v.as_slice())).unwrap();
        let bb = build_bounds(rev.iter().map(|v| v.as_slice())).unwrap();
        assert_eq!(ba, bb);
    }

    #[test]
    fn empty_pool_is_an_error() {
        assert!(matches!(
            build_bounds(std::iter::empty::<&[f64]>()),
            Err(MetricsError::EmptyPool)
        ));
    }

    #[test]
    fn normalize_maps_ideal_and_nadir_to_unit_corners() {
        let b = NormalizationBounds { ideal: vec![1.0, 10.0], nadir: vec![3.0, 30.0] };
        let out = normalize(&[vec![1.0, 10.0], vec![3.0, 30.0]], &b);
        assert_eq!(out[0], vec![0.0, 0.0]);
        assert_eq!(out[1], vec![1.0, 1.0]);
    }

    #[test]
    fn zero_range_component_maps_to_zero() {
        let b = NormalizationBounds { ideal: vec![2.0, 0.0], nadir: vec![2.0, 1.0] };
        let out = normalize(&[vec![7.0, 0.5]], &b);
        assert_eq!(out[0][0], 0.0);
        assert_eq!(out[0][1], 0.5);
    }

    #[test]
    fn unit_square_and_cube() {
        assert!((hypervolume(&[vec![0.0, 0.0]], &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (hypervolume(&[vec![0.0, 0.0, 0.0]], &[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15
        );
    }

    #[test]
    fn two_point_front_inclusion_exclusion() {
        let front = vec![vec![0.25, 0.75], vec![0.75, 0.25]];
        let hv = hypervolume(&front, &[1.0, 1.0]).unwrap();
        assert!((hv - 0.3125).abs() < 1e-12);
    }

    #[test]
    fn dominated_and_out_of_box_points_contribute_nothing() {
        let hv = hypervolume(
            &[vec![0.2, 0.2], vec![0.5, 0.5], vec![1.5, 0.0]],
            &[1.0, 1.0],
        )
        .unwrap();
        assert!((hv - 0.64).abs() < 1e-12);
    }

    #[test]
    fn contributions_singleton_equals_total() {
        let front = vec![vec![0.25, 0.75]];
        let c = hv_contributions(&front, &[1.0, 1.0]).unwrap();
        assert!((c[0] - 0.1875).abs() < 1e-12);
    }

    #[test]
    fn duplicated_point_contributes_zero() {
        let front = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        let c = hv_contributions(&front, &[1.0, 1.0]).unwrap();
        assert_eq!(c, vec![0.0, 0.0]);
    }

    #[test]
    fn two_point_contributions() {
        let front = vec![vec![0.25, 0.75], vec![0.75, 0.25]];
        let c = hv_contributions(&front, &[1.0, 1.0]).unwrap();
        for v in c {
            assert!((v - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_oracle_full_box_and_empty() {
        let v = hv_grid_oracle(&[vec![0.0, 0.0]], &[1.0, 1.0], 100);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(hv_grid_oracle(&[], &[1.0, 1.0], 100), 0.0);
    }

    #[test]
    fn grid_oracle_two_point_front() {
        let front = vec![vec![0.25, 0.75], vec![0.75, 0.25]];
        let v = hv_grid_oracle(&front, &[1.0, 1.0], 1000);
        assert!((v - 0.3125).abs() < 0.002, "{v}");
    }

    #[test]
    fn unsupported_dimension_rejected() {
        assert!(matches!(
            hypervolume(&[vec![0.0; 4]], &[1.0; 4]),
            Err(MetricsError::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn hypervolume_is_monotone_and_axis_symmetric() {
        let a = vec![vec![0.3, 0.6, 0.4], vec![0.6, 0.2, 0.7]];
        let mut b = a.clone();
        b.push(vec![0.1, 0.9, 0.9]);
        let r = [1.0, 1.0, 1.0];
        let hv_a = hypervolume(&a, &r).unwrap();
        let hv_b = hypervolume(&b, &r).unwrap();
        assert!(hv_b >= hv_a);
        // permute axes (x, y, z) -> (z, x, y)
        let permuted: Vec<Vec<f64>> = b.iter().map(|p| vec![p[2], p[0], p[1]]).collect();
        let hv_p = hypervolume(&permuted, &r).unwrap();
        assert!((hv_b - hv_p).abs() < 1e-12);
    }
}
