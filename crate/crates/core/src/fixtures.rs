//! Small reference spaces used by tests, the acceptance suite and the CLI demo.

use num_rational::BigRational;
use num_traits::Zero;

use crate::decimal::parse_decimal;
use crate::space::{Entourage, FiniteSpace, MetricSource, OpenInterval, Point};

/// Five points on a line at 0, 1, 2, 3, 4.
pub fn p5() -> FiniteSpace {
    let points = (0..5)
        .map(|i| Point::new(i, vec![BigRational::from_integer(i.into())]))
        .collect();
    FiniteSpace::build(points, MetricSource::Euclidean, 0).expect("valid fixture")
}

/// Vertices of the regular hexagon inscribed in the unit circle.
///
/// Squared distances are exact: 1 for sides, 3 for short diagonals and 4 for
/// diameters.
pub fn hex() -> FiniteSpace {
    let sq = |i: usize, j: usize| {
        let k = (i as i64 - j as i64).rem_euclid(6);
        let k = k.min(6 - k);
        BigRational::from_integer([0, 1, 3, 4][k as usize].into())
    };
    let table = (0..6).map(|i| (0..6).map(|j| sq(i, j)).collect()).collect();
    let points = (0..6).map(Point::bare).collect();
    FiniteSpace::build(points, MetricSource::SquaredDistanceTable(table), 0).expect("valid fixture")
}

/// Decimal coordinates of the hexagon vertices, rounded to 12 places.
pub fn hex_coordinates() -> Vec<[&'static str; 2]> {
    vec![
        ["1", "0"],
        ["0.5", "0.866025403784"],
        ["-0.5", "0.866025403784"],
        ["-1", "0"],
        ["-0.5", "-0.866025403784"],
        ["0.5", "-0.866025403784"],
    ]
}

/// Grid on `[-6, 6]` with the given step, basepoint at coordinate 0.
///
/// Panics if the step is not a positive decimal.
pub fn grid(step: &str) -> FiniteSpace {
    grid_on(step, "6")
}

/// Grid on `[-half_width, half_width]`; the grid is anchored at 0.
pub fn grid_on(step: &str, half_width: &str) -> FiniteSpace {
    let step = parse_decimal(step).expect("decimal step");
    let half = parse_decimal(half_width).expect("decimal width");
    assert!(step > BigRational::zero(), "grid step must be positive");
    let count = (&half / &step).floor().to_integer();
    let count: i64 = count.try_into().expect("grid too large");
    let points: Vec<Point> = (-count..=count)
        .enumerate()
        .map(|(id, k)| Point::new(id, vec![&step * BigRational::from_integer(k.into())]))
        .collect();
    FiniteSpace::build(points, MetricSource::Euclidean, count as usize).expect("valid fixture")
}

/// `U = (-1, 1) ∪ (2, 4) ∪ (-4, -2)`.
pub fn u_intervals() -> Vec<OpenInterval> {
    [("-1", "1"), ("2", "4"), ("-4", "-2")]
        .iter()
        .map(|(a, b)| OpenInterval::parse(a, b).expect("valid interval"))
        .collect()
}

/// The difference relation `E(U)` on a 1-dimensional grid.
pub fn u_rel(grid: &FiniteSpace) -> Entourage {
    Entourage::from_diff_intervals(grid, &u_intervals()).expect("1-D grid")
}
