//! Feasible equilibria of the nondimensional food chain.
//!
//! `E0 = (0,0,0)` and `E1 = (1,0,0)` always exist. Planar points `(x̄, ȳ, 0)`
//! solve `b x^2 - c x + a b = 0` with `ȳ = (1 - x̄)(a + x̄^2)/s`. Interior
//! points have `y* = q/p - r`, `x*` a root in `(0, 1)` of
//! `x^3 - x^2 + a x + (s y* - a)` and `z* = (c x*/(a + x*^2) - b)(y* + d)`.
//! Every interior root is returned; none is singled out.

use std::io::Write;

use serde::Serialize;

use crate::model::{rhs_nondimensional, state_to_dim, DimParams, NondimParams, State};
use crate::poly::{cubic_real_roots, polish_cubic_root, quadratic_real_roots};

/// Interior cubic roots closer than this to 0 or 1 are discarded.
pub const ROOT_EDGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Trivial,
    Axial,
    Planar,
    Interior,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::Trivial => "trivial",
            EquilibriumKind::Axial => "axial",
            EquilibriumKind::Planar => "planar",
            EquilibriumKind::Interior => "interior",
        }
    }
}

/// One named existence condition. `value` is the printed left-hand side;
/// the condition holds when `satisfied`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceCondition {
    pub name: &'static str,
    pub value: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub coords_nondim: State,
    pub coords_dim: Option<State>,
    pub existence_ok: bool,
    pub existence_report: Vec<ExistenceCondition>,
}

impl Equilibrium {
    fn new(kind: EquilibriumKind, coords: State, dim: Option<&DimParams>, report: Vec<ExistenceCondition>) -> Self {
        Self {
            kind,
            coords_nondim: coords,
            coords_dim: dim.map(|p| state_to_dim(p, coords)),
            existence_ok: report.iter().all(|c| c.satisfied),
            existence_report: report,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&ExistenceCondition> {
        self.existence_report.iter().find(|c| c.name == name)
    }
}

/// `y* = q/p - r`. Non-positive values mean no interior point.
pub fn interior_y(q: &NondimParams) -> f64 {
    q.q / q.p - q.r
}

/// Roots of `x^3 - x^2 + a x + (s y* - a)` strictly inside `(0, 1)`, ascending.
pub fn interior_x_roots(q: &NondimParams, y_star: f64) -> Vec<f64> {
    let (b, c, d) = (-1.0, q.a, q.s * y_star - q.a);
    cubic_real_roots(b, c, d)
        .into_iter()
        .map(|x| polish_cubic_root(b, c, d, x))
        .filter(|&x| x > ROOT_EDGE_EPS && x < 1.0 - ROOT_EDGE_EPS)
        .collect()
}

/// `z* = (c x*/(a + x*^2) - b)(y* + d)`. Non-positive values mean infeasible.
pub fn interior_z(q: &NondimParams, x_star: f64, y_star: f64) -> f64 {
    (q.c * x_star / (q.a + x_star * x_star) - q.b) * (y_star + q.d)
}

/// Planar equilibria `(x̄, ȳ, 0)` with `x̄ ∈ (0,1)` and `ȳ > 0`.
pub fn planar_equilibria(q: &NondimParams) -> Vec<State> {
    let mut roots = quadratic_real_roots(q.b, -q.c, q.a * q.b);
    roots.dedup();
    roots
        .into_iter()
        .filter(|&x| x > 0.0 && x < 1.0)
        .map(|x| State::new(x, (1.0 - x) * (q.a + x * x) / q.s, 0.0))
        .filter(|s| s.y > 0.0)
        .collect()
}

/// The interior existence conditions at `(x*, y*)`.
pub fn interior_conditions(
    q: &NondimParams,
    x_star: f64,
    y_star: f64,
    dim: Option<&DimParams>,
) -> Vec<ExistenceCondition> {
    let mut out = vec![
        ExistenceCondition {
            name: "y* - a/s",
            value: y_star - q.a / q.s,
            satisfied: y_star - q.a / q.s < 0.0,
        },
        ExistenceCondition {
            name: "b - cx*/(a+x*^2)",
            value: q.b - q.c * x_star / (q.a + x_star * x_star),
            satisfied: q.b - q.c * x_star / (q.a + x_star * x_star) < 0.0,
        },
    ];
    if let Some(p) = dim {
        let v = p.v3 - p.c3 * p.d3;
        out.push(ExistenceCondition {
            name: "v3 - c3*d3",
            value: v,
            satisfied: v > 0.0,
        });
    }
    out
}

/// All biologically feasible equilibria: `E0`, `E1`, planar points, then
/// interior points in ascending `x*`.
///
/// Interior candidates with a negative coordinate are dropped; a candidate on
/// the boundary (`z* = 0`) is kept with `existence_ok = false`.
pub fn find_equilibria(q: &NondimParams, dim: Option<&DimParams>) -> Vec<Equilibrium> {
    use EquilibriumKind::*;
    let mut out = vec![
        Equilibrium::new(Trivial, State::ZERO, dim, vec![]),
        Equilibrium::new(Axial, State::new(1.0, 0.0, 0.0), dim, vec![]),
    ];
    out.extend(
        planar_equilibria(q)
            .into_iter()
            .map(|s| Equilibrium::new(Planar, s, dim, vec![])),
    );

    let y_star = interior_y(q);
    if y_star > 0.0 {
        for x_star in interior_x_roots(q, y_star) {
            let z_star = interior_z(q, x_star, y_star);
            if z_star < 0.0 {
                continue;
            }
            let report = interior_conditions(q, x_star, y_star, dim);
            out.push(Equilibrium::new(
                Interior,
                State::new(x_star, y_star, z_star),
                dim,
                report,
            ));
        }
    }
    out
}

/// First feasible interior equilibrium (smallest `x*`), if any.
pub fn interior_equilibrium(q: &NondimParams, dim: Option<&DimParams>) -> Option<Equilibrium> {
    find_equilibria(q, dim)
        .into_iter()
        .find(|e| e.kind == EquilibriumKind::Interior && e.existence_ok)
}

/// Sup-norm of the nondimensional right-hand side at `e`.
pub fn residual(q: &NondimParams, e: &Equilibrium) -> f64 {
    rhs_nondimensional(q, e.coords_nondim).max_abs()
}

/// CSV: `kind,x,y,z,X,Y,Z,existence_ok,conditions` (dimensional columns empty
/// when no dimensional parameters were given; conditions as `name=value` pairs
/// separated by `;`).
pub fn write_equilibria_csv<W: Write>(mut out: W, eqs: &[Equilibrium]) -> std::io::Result<()> {
    writeln!(out, "kind,x,y,z,X,Y,Z,existence_ok,conditions")?;
    for e in eqs {
        let s = e.coords_nondim;
        write!(out, "{},{:.12e},{:.12e},{:.12e}", e.kind.as_str(), s.x, s.y, s.z)?;
        match e.coords_dim {
            Some(d) => write!(out, ",{:.12e},{:.12e},{:.12e}", d.x, d.y, d.z)?,
            None => write!(out, ",,,")?,
        }
        let conds: Vec<String> = e
            .existence_report
            .iter()
            .map(|c| format!("{}={:.12e}", c.name, c.value))
            .collect();
        writeln!(out, ",{},\"{}\"", e.existence_ok, conds.join(";"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::nondimensionalize;

    #[test]
    fn unconditional_points_always_present() {
        for n in 1..=5 {
            let p = DimParams::example(n).unwrap();
            let eqs = find_equilibria(&nondimensionalize(&p), Some(&p));
            assert_eq!(eqs[0].coords_nondim, State::ZERO);
            assert_eq!(eqs[1].coords_nondim, State::new(1.0, 0.0, 0.0));
        }
    }

    #[test]
    fn boundary_y_star_is_zero() {
        let mut q = nondimensionalize(&DimParams::example3());
        q.q = q.p * q.r;
        assert_eq!(interior_y(&q), 0.0);
        assert!(find_equilibria(&q, None)
            .iter()
            .all(|e| e.kind != EquilibriumKind::Interior));
    }

    #[test]
    fn zero_constant_term_excludes_origin_root() {
        let mut q = nondimensionalize(&DimParams::example3());
        q.a = 0.2;
        let y_star = q.a / q.s;
        let roots = interior_x_roots(&q, y_star);
        let expected = quadratic_real_roots(1.0, -1.0, q.a);
        assert_eq!(roots.len(), 2);
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn z_star_boundary_is_zero() {
        let mut q = nondimensionalize(&DimParams::example3());
        let y = interior_y(&q);
        let x = interior_x_roots(&q, y)[0];
        q.b = q.c * x / (q.a + x * x);
        assert!(interior_z(&q, x, y).abs() < 1e-15);
    }

    #[test]
    fn example3_interior_point() {
        let p = DimParams::example3();
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        assert!(e.coords_nondim.distance_inf(State::new(0.7158, 1.3134, 8.7966)) < 1e-3);
        assert!(e.coords_dim.unwrap().distance_inf(State::new(2.5772, 1.2766, 5.7002)) < 1e-3);
        let vals: Vec<f64> = e.existence_report.iter().map(|c| c.value).collect();
        for (v, want) in vals.iter().zip([-1.4644, -0.7582, 0.06]) {
            assert!((v - want).abs() < 1e-3, "{vals:?}");
        }
        assert!(residual(&q, &e) < 1e-9);
    }

    #[test]
    fn example5_existence_values() {
        let p = DimParams::example5();
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        let vals: Vec<f64> = e.existence_report.iter().map(|c| c.value).collect();
        for (v, want) in vals.iter().zip([-3.8744, -0.2884, 0.06]) {
            assert!((v - want).abs() < 1e-3, "{vals:?}");
        }
        assert!(e.coords_dim.unwrap().distance_inf(State::new(1.4589, 1.2766, 3.7751)) < 1e-3);
        assert!((interior_y(&q) - 1.4448).abs() < 1e-3);
    }

    #[test]
    fn planar_points_solve_prey_isocline() {
        // choose constants with two planar roots in (0,1)
        let q = NondimParams {
            a: 0.2,
            b: 1.0,
            c: 1.0,
            d: 1.0,
            p: 1.0,
            q: 1.0,
            r: 1.0,
            s: 0.3,
            beta: 1.0,
        };
        let pts = planar_equilibria(&q);
        assert_eq!(pts.len(), 2);
        for s in &pts {
            assert!((q.c * s.x - q.b * (s.x * s.x + q.a)).abs() < 1e-10);
            let f = rhs_nondimensional(&q, *s);
            assert!(f.max_abs() < 1e-12, "{f:?}");
        }
    }

    #[test]
    fn csv_rows() {
        let p = DimParams::example5();
        let eqs = find_equilibria(&nondimensionalize(&p), Some(&p));
        let mut buf = Vec::new();
        write_equilibria_csv(&mut buf, &eqs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), eqs.len() + 1);
        assert!(text.lines().last().unwrap().starts_with("interior,"));
    }
}
