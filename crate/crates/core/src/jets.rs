//! The critical curve `J` of a plane map and the second-order jet curves
//! `J11`, `J12` whose common zeros with `J` locate cusps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{parse_poly_at, ParseError, Poly, Var, XY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("degree caps must be at least 1 (got d1={d1}, d2={d2})")]
    BadCaps { d1: u32, d2: u32 },
    #[error("deg {name} = {degree} exceeds its cap {cap}")]
    DegreeExceedsCap { name: &'static str, degree: u32, cap: u32 },
    #[error("component {0} must be a polynomial in x and y")]
    NotPlanar(&'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:1: {message}")]
    Format { line: usize, message: String },
}

/// A polynomial map `F = (f, g)` from the plane to the plane, together with
/// the degree caps `(d1, d2)` it is considered under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMap {
    f: Poly,
    g: Poly,
    d1: u32,
    d2: u32,
}

impl PlaneMap {
    pub fn new(f: Poly, g: Poly, d1: u32, d2: u32) -> Result<Self, MapError> {
        if d1 == 0 || d2 == 0 {
            return Err(MapError::BadCaps { d1, d2 });
        }
        let f = f.with_vars(XY).map_err(|_| MapError::NotPlanar("f"))?;
        let g = g.with_vars(XY).map_err(|_| MapError::NotPlanar("g"))?;
        for (name, p, cap) in [("f", &f, d1), ("g", &g, d2)] {
            if let Some(degree) = p.degree() {
                if degree > cap {
                    return Err(MapError::DegreeExceedsCap { name, degree, cap });
                }
            }
        }
        Ok(PlaneMap { f, g, d1, d2 })
    }

    /// Caps taken from the actual degrees (at least 1).
    pub fn with_natural_caps(f: Poly, g: Poly) -> Result<Self, MapError> {
        let d1 = f.degree().unwrap_or(0).max(1);
        let d2 = g.degree().unwrap_or(0).max(1);
        PlaneMap::new(f, g, d1, d2)
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    /// `(g, f)` with caps `(d2, d1)`.
    pub fn swapped(&self) -> PlaneMap {
        PlaneMap { f: self.g.clone(), g: self.f.clone(), d1: self.d2, d2: self.d1 }
    }

    /// Precomposition with the source map `(x, y) ↦ (a x + b y + e, c x + d y + h)`.
    pub fn precompose_affine(&self, x_image: &Poly, y_image: &Poly) -> PlaneMap {
        let sub = |p: &Poly| {
            // simultaneous substitution through a fresh variable
            let z = Poly::var(&[Var::X, Var::Y, Var::Z], Var::Z);
            let lifted = p.with_vars(&[Var::X, Var::Y, Var::Z]).expect("superset");
            let step = lifted.substitute(Var::X, &z).substitute(Var::Y, y_image);
            step.substitute(Var::Z, x_image).with_vars(XY).expect("planar")
        };
        PlaneMap { f: sub(&self.f), g: sub(&self.g), d1: self.d1, d2: self.d2 }
    }

    /// Postcomposition with the linear target map `T`, `F' = T ∘ F`.
    pub fn postcompose_linear(&self, t: &[[crate::polyring::Rat; 2]; 2]) -> PlaneMap {
        let f = &self.f.scale(&t[0][0]) + &self.g.scale(&t[0][1]);
        let g = &self.f.scale(&t[1][0]) + &self.g.scale(&t[1][1]);
        let cap = self.d1.max(self.d2);
        PlaneMap { f, g, d1: cap, d2: cap }
    }

    /// Parses the two-line input format `f = <poly>` / `g = <poly>`. Blank
    /// lines and lines starting with `#` are skipped. Caps default to the
    /// actual degrees.
    pub fn parse_file(src: &str, caps: Option<(u32, u32)>) -> Result<Self, MapError> {
        let mut f = None;
        let mut g = None;
        for (i, line) in src.lines().enumerate() {
            let lineno = i + 1;
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((lhs, rhs)) = line.split_once('=') else {
                return Err(MapError::Format { line: lineno, message: "expected '<name> = <poly>'".into() });
            };
            let offset = lhs.chars().count() + 1;
            let poly = parse_poly_at(rhs, lineno, offset)?;
            match lhs.trim() {
                "f" if f.is_none() => f = Some(poly),
                "g" if g.is_none() => g = Some(poly),
                other => {
                    return Err(MapError::Format {
                        line: lineno,
                        message: format!("unexpected component '{other}'"),
                    })
                }
            }
        }
        let missing = |n: &str| MapError::Format { line: src.lines().count().max(1), message: format!("missing '{n} = …' line") };
        let f = f.ok_or_else(|| missing("f"))?;
        let g = g.ok_or_else(|| missing("g"))?;
        match caps {
            Some((d1, d2)) => PlaneMap::new(f, g, d1, d2),
            None => PlaneMap::with_natural_caps(f, g),
        }
    }

    pub fn to_file_string(&self) -> String {
        format!("f = {}\ng = {}\n", self.f, self.g)
    }

    pub fn to_text(&self) -> MapText {
        MapText { f: self.f.to_string(), g: self.g.to_string() }
    }
}

/// Serialized form of a map inside reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapText {
    pub f: String,
    pub g: String,
}

/// The three curves `J`, `J11`, `J12` of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetTriple {
    pub j: Poly,
    pub j11: Poly,
    pub j12: Poly,
}

/// First and second partials of both components.
struct SecondJet {
    fx: Poly,
    fy: Poly,
    gx: Poly,
    gy: Poly,
    fxx: Poly,
    fxy: Poly,
    fyy: Poly,
    gxx: Poly,
    gxy: Poly,
    gyy: Poly,
}

impl SecondJet {
    fn of(map: &PlaneMap) -> Self {
        let (f, g) = (map.f(), map.g());
        let fx = f.d(Var::X);
        let fy = f.d(Var::Y);
        let gx = g.d(Var::X);
        let gy = g.d(Var::Y);
        SecondJet {
            fxx: fx.d(Var::X),
            fxy: fx.d(Var::Y),
            fyy: fy.d(Var::Y),
            gxx: gx.d(Var::X),
            gxy: gx.d(Var::Y),
            gyy: gy.d(Var::Y),
            fx,
            fy,
            gx,
            gy,
        }
    }

    /// `f_xx g_y + f_x g_xy − f_xy g_x − f_y g_xx`
    fn bracket_x(&self) -> Poly {
        &(&(&self.fxx * &self.gy) + &(&self.fx * &self.gxy))
            - &(&(&self.fxy * &self.gx) + &(&self.fy * &self.gxx))
    }

    /// `f_xy g_y + f_x g_yy − f_yy g_x − f_y g_xy`
    fn bracket_y(&self) -> Poly {
        &(&(&self.fxy * &self.gy) + &(&self.fx * &self.gyy))
            - &(&(&self.fyy * &self.gx) + &(&self.fy * &self.gxy))
    }
}

/// `f_x g_y − f_y g_x`.
pub fn jacobian_curve(map: &PlaneMap) -> Poly {
    map.f().jacobian_det(map.g())
}

/// `bracket_x · f_y − bracket_y · f_x`.
pub fn j11_curve(map: &PlaneMap) -> Poly {
    let s = SecondJet::of(map);
    &(&s.bracket_x() * &s.fy) - &(&s.bracket_y() * &s.fx)
}

/// `bracket_x · g_y − bracket_y · g_x`.
pub fn j12_curve(map: &PlaneMap) -> Poly {
    let s = SecondJet::of(map);
    &(&s.bracket_x() * &s.gy) - &(&s.bracket_y() * &s.gx)
}

pub fn jet_triple(map: &PlaneMap) -> JetTriple {
    let s = SecondJet::of(map);
    let bx = s.bracket_x();
    let by = s.bracket_y();
    JetTriple {
        j: &(&s.fx * &s.gy) - &(&s.fy * &s.gx),
        j11: &(&bx * &s.fy) - &(&by * &s.fx),
        j12: &(&bx * &s.gy) - &(&by * &s.gx),
    }
}
