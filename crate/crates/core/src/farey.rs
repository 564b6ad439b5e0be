//! Farey-triangulation walks from the parent manifold's initial triangle to a
//! filling slope.
//!
//! The Farey triangulation has vertices ℚ ∪ {1/0} and an edge between `a/b`
//! and `c/d` exactly when `|ad − bc| = 1`; its triangles are the triples of
//! pairwise neighbors. A layered solid torus for slope `p/q` corresponds to a
//! walk of triangles starting at this manifold's initial triangle
//! `{3/1, 4/1, 1/0}` and ending at a triangle having `p/q` as a vertex: each
//! crossed edge except the last layers one tetrahedron, and the last crossed
//! edge is *folded*. Every step records the four slopes `old`, `heading`,
//! `pivot`, `fan` that name its tetrahedron's Ptolemy equation.
//!
//! All geometry here is exact integer determinant arithmetic on canonical
//! slope representatives; there is no floating point.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from slope handling and walk construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    /// `(0, 0)` does not represent a slope.
    #[error("(0, 0) is not a slope")]
    ZeroSlope,

    /// An edge operation was given two slopes that are not Farey neighbors.
    #[error("slopes {a} and {b} are not Farey neighbors")]
    NotNeighbors {
        /// First endpoint as supplied.
        a: Slope,
        /// Second endpoint as supplied.
        b: Slope,
    },

    /// The walk target is a vertex of the initial triangle, so no layered
    /// solid torus is built at all.
    #[error("slope {slope} is a vertex of the initial triangle {{3/1, 4/1, 1/0}}")]
    InitialVertex {
        /// The rejected target.
        slope: Slope,
    },

    /// The walk reaches the target after a single crossing: the layered solid
    /// torus would have zero tetrahedra (slopes 2/1, 7/2, 5/1).
    #[error("slope {slope} yields a degenerate layered solid torus (no layered tetrahedra)")]
    DegenerateLST {
        /// The rejected target.
        slope: Slope,
    },

    /// A slope string did not parse.
    #[error("invalid slope {0:?}: expected \"p/q\", \"p\", or \"1/0\"")]
    ParseSlope(String),
}

/// A slope `p/q` in canonical reduced form: `gcd(p, q) = 1`, `q ≥ 0`, and
/// `q = 0` only as `1/0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Reduces `(p, q)` to the canonical representative; `(−p, −q)` and
    /// `(p, q)` reduce identically.
    pub fn new(p: i64, q: i64) -> Result<Self, FareyError> {
        if p == 0 && q == 0 {
            return Err(FareyError::ZeroSlope);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    /// The slope `1/0`.
    pub fn infinity() -> Self {
        Self { p: 1, q: 0 }
    }

    /// Numerator of the canonical representative.
    pub fn p(self) -> i64 {
        self.p
    }

    /// Denominator of the canonical representative (`≥ 0`).
    pub fn q(self) -> i64 {
        self.q
    }

    /// The determinant `p·q′ − q·p′` on canonical representatives.
    pub fn det(self, other: Self) -> i64 {
        let d = self.p as i128 * other.q as i128 - self.q as i128 * other.p as i128;
        d.try_into().expect("slope determinant overflow")
    }

    /// True iff the two slopes span a Farey edge (`|det| = 1`).
    pub fn is_neighbor(self, other: Self) -> bool {
        self.det(other).abs() == 1
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, FareyError> {
        let bad = || FareyError::ParseSlope(s.to_string());
        let (ps, qs) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let p: i64 = ps.parse().map_err(|_| bad())?;
        let q: i64 = qs.parse().map_err(|_| bad())?;
        // Keep CLI-supplied magnitudes far below any overflow horizon.
        const LIMIT: i64 = 1_000_000;
        if p.abs() > LIMIT || q.abs() > LIMIT {
            return Err(bad());
        }
        if p == 0 && q == 0 {
            return Err(FareyError::ZeroSlope);
        }
        Self::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An unordered triple of pairwise Farey neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FareyTriangle {
    vertices: [Slope; 3],
}

impl FareyTriangle {
    /// Validates that all three pairs are Farey neighbors.
    pub fn new(vertices: [Slope; 3]) -> Result<Self, FareyError> {
        for i in 0..3 {
            let (a, b) = (vertices[i], vertices[(i + 1) % 3]);
            if !a.is_neighbor(b) {
                return Err(FareyError::NotNeighbors { a, b });
            }
        }
        Ok(Self { vertices })
    }

    /// The vertices, in construction order.
    pub fn vertices(&self) -> &[Slope; 3] {
        &self.vertices
    }

    /// Membership test.
    pub fn contains(&self, s: Slope) -> bool {
        self.vertices.contains(&s)
    }
}

/// The initial triangle `{3/1, 4/1, 1/0}`, in its seniority order. The order
/// matters once: it breaks the tie when orienting the very first crossing.
pub fn initial_triangle() -> FareyTriangle {
    let v = |p, q| Slope::new(p, q).expect("initial vertices are valid");
    FareyTriangle::new([v(3, 1), v(4, 1), v(1, 0)]).expect("initial triangle is Farey")
}

/// The two completions of a Farey edge: the reduced forms of `u + v` and
/// `u − v` (componentwise on canonical representatives), i.e. the third
/// vertices of the edge's two adjacent triangles.
pub fn edge_completions(e: (Slope, Slope)) -> Result<(Slope, Slope), FareyError> {
    let (u, v) = e;
    if !u.is_neighbor(v) {
        return Err(FareyError::NotNeighbors { a: u, b: v });
    }
    let sum = Slope::new(u.p + v.p, u.q + v.q).expect("neighbors are not negatives");
    let diff = Slope::new(u.p - v.p, u.q - v.q).expect("neighbors are distinct");
    Ok((sum, diff))
}

/// Turn direction of a walk step relative to the previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Turn {
    /// The first step has no predecessor.
    #[serde(rename = "initial")]
    Initial,
    /// Left turn: the fan and heading have determinant `+1`.
    L,
    /// Right turn: the fan and heading have determinant `−1`.
    R,
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Turn::Initial => "initial",
            Turn::L => "L",
            Turn::R => "R",
        })
    }
}

/// One layered tetrahedron of the walk, named by its four slopes.
///
/// `crossed_edge` is `(pivot, fan)`; `old` and `heading` are the two
/// completions of that edge — `old` behind the walk, `heading` ahead. The
/// tetrahedron's Ptolemy equation is `γ_old·γ_heading + γ_pivot² − γ_fan² = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    /// The Farey edge this step crosses, as `(pivot, fan)`.
    pub crossed_edge: (Slope, Slope),
    /// Third vertex of the triangle being left.
    pub old: Slope,
    /// Third vertex of the triangle being entered.
    pub heading: Slope,
    /// The crossed-edge endpoint shared with the previous crossed edge (the
    /// calibrated senior endpoint for step 0).
    pub pivot: Slope,
    /// The other crossed-edge endpoint.
    pub fan: Slope,
    /// Turn tag relative to the previous step.
    pub turn: Turn,
}

/// A complete walk: the layered steps, the folding edge, and the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    /// Layered tetrahedra in order (indices `0 … N−1`).
    pub steps: Vec<WalkStep>,
    /// The final crossed edge, not layered but folded, as `(pivot, fan)`;
    /// the folding equation is `γ_pivot = γ_fan`.
    pub fold_edge: (Slope, Slope),
    /// The filling slope the walk reaches.
    pub target: Slope,
}

impl Walk {
    /// Number of layered tetrahedra `N`.
    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    /// The turn tags in step order.
    pub fn turns(&self) -> Vec<Turn> {
        self.steps.iter().map(|s| s.turn).collect()
    }
}

/// True iff `x` lies strictly beyond the edge `(u, v)` as seen from `w`,
/// decided by the sign of `g(x)·g(w)` with `g(s) = det(s, u)·det(s, v)`.
fn beyond_edge(x: Slope, u: Slope, v: Slope, w: Slope) -> bool {
    let gx = x.det(u) as i128 * x.det(v) as i128;
    let gw = w.det(u) as i128 * w.det(v) as i128;
    gx != 0 && gx.signum() * gw.signum() < 0
}

/// Walks from the initial triangle `{3/1, 4/1, 1/0}` to `target`.
///
/// Repeatedly crosses the unique edge of the current triangle separating it
/// from `target` until `target` is a vertex. All crossings but the last
/// become layered steps; the last becomes the fold edge. Labels:
///
/// - step 0 takes its pivot as the crossed-edge endpoint that comes first in
///   the initial triangle's seniority order `(3/1, 4/1, 1/0)` — for the
///   calibrated edge `{3/1, 1/0}` this agrees with requiring
///   `det(old, pivot) = +1`, and it stays well-defined on the two edges where
///   that determinant test ties;
/// - step `k ≥ 1` takes its pivot as the vertex shared with the previous
///   crossed edge, its fan as the other endpoint;
/// - the turn is `L` when `det(fan, heading) = +1`, `R` when `−1`; runs of
///   equal turns are exactly the runs of retained pivots.
pub fn walk_to(target: Slope) -> Result<Walk, FareyError> {
    let initial = initial_triangle();
    if initial.contains(target) {
        return Err(FareyError::InitialVertex { slope: target });
    }

    // Cross edges until the target is a vertex, recording (u, v, old, heading).
    let mut tri = *initial.vertices();
    let mut crossings: Vec<(Slope, Slope, Slope, Slope)> = Vec::new();
    while !tri.contains(&target) {
        assert!(
            crossings.len() < 10_000,
            "Farey walk failed to converge on {target}"
        );
        let mut found = None;
        for i in 0..3 {
            let (w, u, v) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
            if beyond_edge(target, u, v, w) {
                assert!(found.is_none(), "separating edge is not unique");
                found = Some((u, v, w));
            }
        }
        let (u, v, w) = found.expect("a separating edge exists while target is outside");
        let (c1, c2) = edge_completions((u, v)).expect("triangle edges are Farey");
        let heading = if c1 == w { c2 } else { c1 };
        crossings.push((u, v, w, heading));
        tri = [u, v, heading];
    }

    if crossings.len() == 1 {
        return Err(FareyError::DegenerateLST { slope: target });
    }

    let orient = |k: usize, edge_prev: (Slope, Slope)| -> (Slope, Slope) {
        let (u, v, _, _) = crossings[k];
        if k == 0 {
            // Seniority order of the initial triangle decides.
            let senior = initial.vertices();
            let iu = senior.iter().position(|&s| s == u).expect("edge endpoint");
            let iv = senior.iter().position(|&s| s == v).expect("edge endpoint");
            if iu < iv {
                (u, v)
            } else {
                (v, u)
            }
        } else {
            let shared = |s: Slope| s == edge_prev.0 || s == edge_prev.1;
            match (shared(u), shared(v)) {
                (true, false) => (u, v),
                (false, true) => (v, u),
                _ => unreachable!("consecutive crossed edges share exactly one vertex"),
            }
        }
    };

    let n_steps = crossings.len() - 1;
    let mut steps = Vec::with_capacity(n_steps);
    let mut prev_edge = (target, target); // placeholder, unused at k = 0
    for (k, &(_, _, old, heading)) in crossings[..n_steps].iter().enumerate() {
        let (pivot, fan) = orient(k, prev_edge);
        let turn = if k == 0 {
            Turn::Initial
        } else if fan.det(heading) == 1 {
            Turn::L
        } else {
            Turn::R
        };
        steps.push(WalkStep { crossed_edge: (pivot, fan), old, heading, pivot, fan, turn });
        prev_edge = (pivot, fan);
    }
    let fold_edge = orient(n_steps, prev_edge);

    Ok(Walk { steps, fold_edge, target })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!(s(-1, -1), s(1, 1));
        assert_eq!(s(3, 0), Slope::infinity());
        assert_eq!(s(0, -3), s(0, 1));
        assert_eq!(s(-2, 4).p(), -1);
        assert_eq!(s(-2, 4).q(), 2);
        assert_eq!(Slope::new(0, 0), Err(FareyError::ZeroSlope));
    }

    #[test]
    fn parsing_accepts_the_documented_forms() {
        assert_eq!("1/2".parse::<Slope>().unwrap(), s(1, 2));
        assert_eq!("-1/2".parse::<Slope>().unwrap(), s(-1, 2));
        assert_eq!("3".parse::<Slope>().unwrap(), s(3, 1));
        assert_eq!("1/0".parse::<Slope>().unwrap(), Slope::infinity());
        assert_eq!("5/-3".parse::<Slope>().unwrap(), s(-5, 3));
        assert_eq!("0/0".parse::<Slope>(), Err(FareyError::ZeroSlope));
        assert!(matches!("x".parse::<Slope>(), Err(FareyError::ParseSlope(_))));
        assert!(matches!("".parse::<Slope>(), Err(FareyError::ParseSlope(_))));
        assert!(matches!("1/2/3".parse::<Slope>(), Err(FareyError::ParseSlope(_))));
    }

    #[test]
    fn determinant_and_neighbors() {
        assert_eq!(s(3, 1).det(s(4, 1)), -1);
        assert!(s(3, 1).is_neighbor(s(1, 0)));
        assert!(!s(1, 0).is_neighbor(s(1, 2)));
        assert_eq!(s(1, 2).det(s(1, 2)), 0);
    }

    #[test]
    fn completions_of_standard_edges() {
        let both = |e| {
            let (a, b) = edge_completions(e).unwrap();
            let mut v = [a, b];
            v.sort();
            v
        };
        let mut want = [s(2, 1), s(0, 1)];
        want.sort();
        assert_eq!(both((Slope::infinity(), s(1, 1))), want);

        let mut want = [s(4, 1), s(2, 1)];
        want.sort();
        assert_eq!(both((s(3, 1), Slope::infinity())), want);

        let mut want = [s(1, 4), s(1, 2)];
        want.sort();
        assert_eq!(both((s(0, 1), s(1, 3))), want);

        assert!(matches!(
            edge_completions((Slope::infinity(), s(1, 2))),
            Err(FareyError::NotNeighbors { .. })
        ));
    }

    #[test]
    fn walk_to_one_layers_a_single_tetrahedron() {
        let w = walk_to(s(1, 1)).unwrap();
        assert_eq!(w.num_steps(), 1);
        let step = w.steps[0];
        assert_eq!(step.crossed_edge, (s(3, 1), Slope::infinity()));
        assert_eq!(step.old, s(4, 1));
        assert_eq!(step.heading, s(2, 1));
        assert_eq!(step.pivot, s(3, 1));
        assert_eq!(step.fan, Slope::infinity());
        assert_eq!(step.turn, Turn::Initial);
        assert_eq!(w.fold_edge, (Slope::infinity(), s(2, 1)));
    }

    #[test]
    fn walk_to_one_half_matches_the_three_step_pattern() {
        let w = walk_to(s(1, 2)).unwrap();
        let headings: Vec<Slope> = w.steps.iter().map(|st| st.heading).collect();
        assert_eq!(headings, vec![s(2, 1), s(1, 1), s(0, 1)]);
        let pivots: Vec<Slope> = w.steps.iter().map(|st| st.pivot).collect();
        assert_eq!(pivots, vec![s(3, 1), Slope::infinity(), Slope::infinity()]);
        assert_eq!(w.turns(), vec![Turn::Initial, Turn::L, Turn::L]);
        assert_eq!(w.fold_edge, (s(1, 1), s(0, 1)));
    }

    #[test]
    fn walk_to_one_fifth_fans_around_zero() {
        let w = walk_to(s(1, 5)).unwrap();
        let headings: Vec<Slope> = w.steps.iter().map(|st| st.heading).collect();
        assert_eq!(
            headings,
            vec![s(2, 1), s(1, 1), s(0, 1), s(1, 2), s(1, 3), s(1, 4)]
        );
        let pivots: Vec<Slope> = w.steps.iter().map(|st| st.pivot).collect();
        assert_eq!(
            pivots,
            vec![s(3, 1), Slope::infinity(), Slope::infinity(), s(1, 1), s(0, 1), s(0, 1)]
        );
        assert_eq!(
            w.turns(),
            vec![Turn::Initial, Turn::L, Turn::L, Turn::R, Turn::L, Turn::L]
        );
        assert_eq!(w.fold_edge, (s(0, 1), s(1, 4)));
    }

    #[test]
    fn walk_to_negative_one_third() {
        let w = walk_to(s(-1, 3)).unwrap();
        let headings: Vec<Slope> = w.steps.iter().map(|st| st.heading).collect();
        assert_eq!(headings, vec![s(2, 1), s(1, 1), s(0, 1), s(-1, 1), s(-1, 2)]);
        let step3 = w.steps[3];
        assert_eq!(step3.old, s(1, 1));
        assert_eq!(step3.pivot, Slope::infinity());
        assert_eq!(step3.fan, s(0, 1));
        let step4 = w.steps[4];
        assert_eq!(step4.old, Slope::infinity());
        assert_eq!(step4.pivot, s(0, 1));
        assert_eq!(step4.fan, s(-1, 1));
        assert_eq!(
            w.turns(),
            vec![Turn::Initial, Turn::L, Turn::L, Turn::L, Turn::R]
        );
        assert_eq!(w.fold_edge, (s(0, 1), s(-1, 2)));
    }

    #[test]
    fn walk_to_ten_thirds_crosses_towards_seven_halves() {
        let w = walk_to(s(10, 3)).unwrap();
        assert_eq!(w.num_steps(), 1);
        let step = w.steps[0];
        assert_eq!(step.old, Slope::infinity());
        assert_eq!(step.heading, s(7, 2));
        assert_eq!(step.pivot, s(3, 1));
        assert_eq!(step.fan, s(4, 1));
        assert_eq!(w.fold_edge, (s(3, 1), s(7, 2)));
    }

    #[test]
    fn walk_to_eleven_thirds_folds_on_the_other_side() {
        let w = walk_to(s(11, 3)).unwrap();
        assert_eq!(w.num_steps(), 1);
        assert_eq!(w.steps[0].crossed_edge, (s(3, 1), s(4, 1)));
        assert_eq!(w.fold_edge, (s(4, 1), s(7, 2)));
    }

    #[test]
    fn walk_to_three_halves() {
        let w = walk_to(s(3, 2)).unwrap();
        let headings: Vec<Slope> = w.steps.iter().map(|st| st.heading).collect();
        assert_eq!(headings, vec![s(2, 1), s(1, 1)]);
        assert_eq!(w.steps[1].pivot, Slope::infinity());
        assert_eq!(w.steps[1].turn, Turn::L);
        // The fold pivot 2/1 is shared with the previous crossed edge (1/0, 2/1).
        assert_eq!(w.fold_edge, (s(2, 1), s(1, 1)));
    }

    #[test]
    fn degenerate_targets_are_rejected() {
        for t in [s(2, 1), s(7, 2), s(5, 1)] {
            assert_eq!(walk_to(t), Err(FareyError::DegenerateLST { slope: t }));
        }
    }

    #[test]
    fn initial_vertices_are_rejected() {
        for t in [s(3, 1), s(4, 1), Slope::infinity()] {
            assert_eq!(walk_to(t), Err(FareyError::InitialVertex { slope: t }));
        }
    }

    #[test]
    fn consecutive_crossed_edges_share_exactly_one_vertex() {
        let w = walk_to(s(7, 19)).unwrap();
        let mut edges: Vec<(Slope, Slope)> = w.steps.iter().map(|st| st.crossed_edge).collect();
        edges.push(w.fold_edge);
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let shared = [b.0, b.1]
                .iter()
                .filter(|&&v| v == a.0 || v == a.1)
                .count();
            assert_eq!(shared, 1);
            // The pivot slot of each later edge holds that shared vertex.
            assert!(b.0 == a.0 || b.0 == a.1);
        }
        // Fold edge endpoints neighbor the target.
        assert!(w.fold_edge.0.is_neighbor(w.target));
        assert!(w.fold_edge.1.is_neighbor(w.target));
    }

    #[test]
    fn walk_serialization_round_trips() {
        let w = walk_to(s(1, 3)).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.contains("\"3/1\""));
        let back: Walk = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
