//! The three-species Leslie–Gower food chain with a simplified Holling
//! type IV response, in dimensional and nondimensional form.
//!
//! Dimensional system (prey `X`, intermediate predator `Y`, top predator `Z`):
//!
//! ```text
//! D^m X = a0 X - b0 X^2 - v0 X Y / (d0 + X^2)
//! D^m Y = -a1 Y + v1 X Y / (d1 + X^2) - v2 Y Z / (d2 + Y)
//! D^m Z = c3 Z^2 - v3 Z^2 / (d3 + Y)
//! ```
//!
//! Nondimensional system, with `X = (a0/b0) x`, `Y = a0^2/(b0 v0) y`,
//! `Z = a0^3/(b0 v0 v2) z`, `T = t/a0`:
//!
//! ```text
//! D^m x = x(1 - x) - s x y / (x^2 + a)
//! D^m y = c x y / (x^2 + a) - b y - y z / (y + d)
//! D^m z = p z^2 - q z^2 / (y + r)
//! ```
//!
//! The time rescaling turns `d/dT` into `a0 d/dt` only at `m = 1`; for
//! `m < 1` the Caputo operator picks up `a0^m` instead. Both systems are
//! implemented as written and no cross-frame trajectory equivalence is
//! claimed for fractional orders.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A population state `(x, y, z)`; the coordinate frame is carried by context.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State {
    pub const ZERO: State = State { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn distance_inf(self, other: State) -> f64 {
        State::new(self.x - other.x, self.y - other.y, self.z - other.z).max_abs()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.4}, {:.4}, {:.4})", self.x, self.y, self.z)
    }
}

/// Dimensional parameters of the food chain. All must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimParams {
    /// prey growth rate
    pub a0: f64,
    /// intra-specific competition of the prey
    pub b0: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    /// protection constant in the prey equation
    pub d0: f64,
    /// protection constant in the intermediate-predator equation
    pub d1: f64,
    /// half-saturation constant
    pub d2: f64,
    /// residual loss of the top predator
    pub d3: f64,
    /// death rate of the intermediate predator
    pub a1: f64,
    /// top-predator growth by sexual reproduction
    pub c3: f64,
}

/// Names accepted in parameter files, in canonical order.
pub const PARAM_NAMES: [&str; 12] = ["a0", "b0", "v0", "v1", "v2", "v3", "d0", "d1", "d2", "d3", "a1", "c3"];

impl DimParams {
    /// Base set used for the `a0` and `c3` bifurcation studies (`a0 = 0.47`, `c3 = 0.047`).
    pub fn example1() -> Self {
        Self {
            a0: 0.47,
            b0: 0.075,
            v0: 1.0,
            v1: 2.0,
            v2: 0.405,
            v3: 1.0,
            d0: 10.0,
            d1: 10.0,
            d2: 10.0,
            d3: 20.0,
            a1: 0.105,
            c3: 0.047,
        }
    }

    /// Same as [`example1`](Self::example1); the chaotic reference configuration.
    pub fn example2() -> Self {
        Self::example1()
    }

    /// Low prey growth rate, `a0 = 0.27`.
    pub fn example3() -> Self {
        Self {
            a0: 0.27,
            ..Self::example1()
        }
    }

    pub fn example4() -> Self {
        Self {
            a0: 0.15,
            b0: 0.03,
            v0: 0.85,
            v1: 2.5,
            v2: 2.2,
            v3: 1.0,
            d0: 10.0,
            d1: 10.0,
            d2: 10.0,
            d3: 20.0,
            a1: 0.001,
            c3: 0.047,
        }
    }

    /// Strong prey self-limitation, `b0 = 0.25`: globally stable interior point.
    pub fn example5() -> Self {
        Self {
            b0: 0.25,
            ..Self::example1()
        }
    }

    /// Preset by number 1..=5.
    pub fn example(n: u32) -> Option<Self> {
        match n {
            1 => Some(Self::example1()),
            2 => Some(Self::example2()),
            3 => Some(Self::example3()),
            4 => Some(Self::example4()),
            5 => Some(Self::example5()),
            _ => None,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "a0" => self.a0,
            "b0" => self.b0,
            "v0" => self.v0,
            "v1" => self.v1,
            "v2" => self.v2,
            "v3" => self.v3,
            "d0" => self.d0,
            "d1" => self.d1,
            "d2" => self.d2,
            "d3" => self.d3,
            "a1" => self.a1,
            "c3" => self.c3,
            _ => return None,
        })
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "a0" => &mut self.a0,
            "b0" => &mut self.b0,
            "v0" => &mut self.v0,
            "v1" => &mut self.v1,
            "v2" => &mut self.v2,
            "v3" => &mut self.v3,
            "d0" => &mut self.d0,
            "d1" => &mut self.d1,
            "d2" => &mut self.d2,
            "d3" => &mut self.d3,
            "a1" => &mut self.a1,
            "c3" => &mut self.c3,
            _ => return None,
        })
    }

    /// Copy with one named parameter replaced.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = *self;
        *out.slot(name)
            .ok_or_else(|| Error::config(name, "unknown parameter name"))? = value;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        for name in PARAM_NAMES {
            let v = self.get(name).unwrap_or(f64::NAN);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Parses the `name = value` format; `#` starts a comment.
    /// Every field must appear exactly once.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut seen: [Option<f64>; 12] = [None; 12];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |detail: String| Error::Parse {
                path: origin.to_path_buf(),
                line: line_no,
                detail,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `name = value`, got `{line}`")))?;
            let key = key.trim();
            let slot = PARAM_NAMES
                .iter()
                .position(|n| *n == key)
                .ok_or_else(|| parse_err(format!("unknown parameter `{key}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("`{}` is not a number", value.trim())))?;
            if seen[slot].replace(value).is_some() {
                return Err(parse_err(format!("parameter `{key}` given twice")));
            }
        }
        let mut p = DimParams::example1();
        for (name, v) in PARAM_NAMES.iter().zip(seen) {
            let v = v.ok_or_else(|| Error::Parse {
                path: origin.to_path_buf(),
                line: 0,
                detail: format!("missing parameter `{name}`"),
            })?;
            *p.slot(name).expect("known name") = v;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Renders in the parameter-file format (round-trips through [`parse`](Self::parse)).
    pub fn to_file_string(&self) -> String {
        PARAM_NAMES
            .iter()
            .map(|n| format!("{n} = {}\n", self.get(n).expect("known name")))
            .collect()
    }
}

/// Nondimensional constants, plus `beta = v1/a0` used by the boundedness and
/// global-stability conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondimParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub beta: f64,
}

pub fn nondimensionalize(p: &DimParams) -> NondimParams {
    let a0sq = p.a0 * p.a0;
    NondimParams {
        a: p.b0 * p.b0 * p.d1 / a0sq,
        b: p.a1 / p.a0,
        c: p.b0 * p.v1 / a0sq,
        d: p.d2 * p.v0 * p.b0 / a0sq,
        p: p.c3 * a0sq / (p.b0 * p.v0 * p.v2),
        q: p.v3 / p.v2,
        r: p.d3 * p.v0 * p.b0 / a0sq,
        s: p.b0 / p.a0,
        beta: p.v1 / p.a0,
    }
}

impl From<&DimParams> for NondimParams {
    fn from(p: &DimParams) -> Self {
        nondimensionalize(p)
    }
}

pub fn rhs_dimensional(p: &DimParams, s: State) -> State {
    let State { x, y, z } = s;
    let xx = x * x;
    State {
        x: p.a0 * x - p.b0 * xx - p.v0 * x * y / (p.d0 + xx),
        y: -p.a1 * y + p.v1 * x * y / (p.d1 + xx) - p.v2 * y * z / (p.d2 + y),
        z: p.c3 * z * z - p.v3 * z * z / (p.d3 + y),
    }
}

pub fn rhs_nondimensional(q: &NondimParams, s: State) -> State {
    let State { x, y, z } = s;
    let holling = x / (x * x + q.a);
    State {
        x: x * (1.0 - x) - q.s * y * holling,
        y: q.c * y * holling - q.b * y - y * z / (y + q.d),
        z: q.p * z * z - q.q * z * z / (y + q.r),
    }
}

/// Analytic Jacobian of the nondimensional right-hand side, row-major.
pub fn jacobian(q: &NondimParams, s: State) -> [[f64; 3]; 3] {
    let State { x, y, z } = s;
    let den = q.a + x * x;
    let dhol = (q.a - x * x) / (den * den);
    [
        [1.0 - 2.0 * x - q.s * y * dhol, -q.s * x / den, 0.0],
        [
            q.c * y * dhol,
            -q.b + q.c * x / den - q.d * z / ((q.d + y) * (q.d + y)),
            -y / (q.d + y),
        ],
        [
            0.0,
            q.q * z * z / ((q.r + y) * (q.r + y)),
            2.0 * z * (q.p - q.q / (y + q.r)),
        ],
    ]
}

/// Scale factors `(X/x, Y/y, Z/z)` from nondimensional to dimensional states.
fn state_scales(p: &DimParams) -> (f64, f64, f64) {
    let a0 = p.a0;
    (a0 / p.b0, a0 * a0 / (p.b0 * p.v0), a0 * a0 * a0 / (p.b0 * p.v0 * p.v2))
}

pub fn state_to_nondim(p: &DimParams, s: State) -> State {
    let (sx, sy, sz) = state_scales(p);
    State::new(s.x / sx, s.y / sy, s.z / sz)
}

pub fn state_to_dim(p: &DimParams, s: State) -> State {
    let (sx, sy, sz) = state_scales(p);
    State::new(s.x * sx, s.y * sy, s.z * sz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones() -> DimParams {
        DimParams {
            a0: 1.0,
            b0: 1.0,
            v0: 1.0,
            v1: 1.0,
            v2: 1.0,
            v3: 1.0,
            d0: 1.0,
            d1: 1.0,
            d2: 1.0,
            d3: 1.0,
            a1: 1.0,
            c3: 1.0,
        }
    }

    #[test]
    fn all_ones_map_to_ones() {
        let q = nondimensionalize(&ones());
        for v in [q.a, q.b, q.c, q.d, q.p, q.q, q.r, q.s, q.beta] {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn example1_death_ratio() {
        let q = nondimensionalize(&DimParams::example1());
        assert!((q.b - 0.2234).abs() < 1e-4);
    }

    #[test]
    fn example5_beta_and_alpha() {
        let q = nondimensionalize(&DimParams::example5());
        assert!((q.beta - 4.2553).abs() < 1e-4);
        let lhs = q.beta + q.beta / (4.0 * q.b) + q.r;
        let alpha = 1.0 / (q.b * q.b * lhs);
        assert!((alpha - 0.6330).abs() < 1e-4, "{alpha}");
    }

    #[test]
    fn origin_is_rest_point() {
        let p = DimParams::example3();
        assert_eq!(rhs_dimensional(&p, State::ZERO), State::ZERO);
        assert_eq!(rhs_nondimensional(&nondimensionalize(&p), State::ZERO), State::ZERO);
    }

    #[test]
    fn printed_interior_points_are_rest_points() {
        let d3 = rhs_dimensional(&DimParams::example3(), State::new(2.5772, 1.2766, 5.7002));
        assert!(d3.max_abs() < 1e-3, "{d3:?}");
        let d5 = rhs_dimensional(&DimParams::example5(), State::new(1.4589, 1.2766, 3.7751));
        assert!(d5.max_abs() < 1e-3, "{d5:?}");
        let q3 = nondimensionalize(&DimParams::example3());
        let n3 = rhs_nondimensional(&q3, State::new(0.7158, 1.3134, 8.7966));
        assert!(n3.max_abs() < 1e-3, "{n3:?}");
    }

    #[test]
    fn axial_point_and_predator_free_limit() {
        let q = nondimensionalize(&DimParams::example1());
        assert_eq!(rhs_nondimensional(&q, State::new(1.0, 0.0, 0.0)), State::ZERO);
        let x = 0.37;
        let f = rhs_nondimensional(&q, State::new(x, 0.0, 0.0));
        assert_eq!(f, State::new(x * (1.0 - x), 0.0, 0.0));
    }

    #[test]
    fn jacobian_at_boundary_equilibria() {
        let q = nondimensionalize(&DimParams::example3());
        let j0 = jacobian(&q, State::ZERO);
        assert_eq!(j0, [[1.0, 0.0, 0.0], [0.0, -q.b, 0.0], [0.0, 0.0, 0.0]]);
        let j1 = jacobian(&q, State::new(1.0, 0.0, 0.0));
        assert_eq!(j1[0][0], -1.0);
        assert!((j1[0][1] + q.s / (q.a + 1.0)).abs() < 1e-15);
        assert!((j1[1][1] - (-q.b + q.c / (q.a + 1.0))).abs() < 1e-15);
        assert!((j1[1][1] - (q.c - q.b - q.a * q.b) / (1.0 + q.a)).abs() < 1e-14);
        assert_eq!([j1[1][0], j1[2][0], j1[2][1], j1[2][2]], [0.0; 4]);
    }

    #[test]
    fn printed_state_transform() {
        let p = DimParams::example3();
        let s = state_to_nondim(&p, State::new(2.5772, 1.2766, 5.7002));
        assert!(s.distance_inf(State::new(0.7159, 1.3134, 8.7968)) < 2e-3, "{s:?}");
        assert_eq!(state_to_nondim(&p, State::ZERO), State::ZERO);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let p = DimParams::example4();
        let parsed = DimParams::parse(&p.to_file_string(), Path::new("mem")).unwrap();
        assert_eq!(parsed, p);

        let with_comments = format!(
            "# header\n{}  # trailing\n\n",
            p.to_file_string().replace("a0 = ", "a0=   ")
        );
        assert_eq!(DimParams::parse(&with_comments, Path::new("mem")).unwrap(), p);

        let unknown = format!("{}zz = 1\n", p.to_file_string());
        assert!(matches!(
            DimParams::parse(&unknown, Path::new("mem")),
            Err(Error::Parse { line: 13, .. })
        ));
        let missing: String = p.to_file_string().lines().skip(1).map(|l| format!("{l}\n")).collect();
        let err = DimParams::parse(&missing, Path::new("mem")).unwrap_err();
        assert!(err.to_string().contains("a0"), "{err}");
        let dup = format!("{}a0 = 2\n", p.to_file_string());
        assert!(DimParams::parse(&dup, Path::new("mem")).is_err());
        let negative = p.to_file_string().replace("c3 = 0.047", "c3 = -1");
        assert!(matches!(
            DimParams::parse(&negative, Path::new("mem")),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn with_replaces_named_field() {
        let p = DimParams::example1().with("a0", 0.3).unwrap();
        assert_eq!(p.a0, 0.3);
        assert!(DimParams::example1().with("nope", 1.0).is_err());
    }
}
