use super::grid::Grid;
use crate::error::{Error, Result};

/// Dispersion relation `w(xi)`: a named closed form, or values tabulated on
/// a grid's frequency nodes (FFT ordering).
///
/// The radial forms read `|xi|`; `Linear` is `slope * (xi_1 + ... + xi_d)`
/// (the generic non-constant linear polynomial; in d = 1, `c xi`).
#[derive(Debug, Clone, PartialEq)]
pub enum Dispersion {
    /// `|xi|` (half wave)
    Abs,
    /// `|xi|^2` (free Schroedinger)
    Square,
    /// `|xi|^a`
    PowAbs(f64),
    /// `1` on `|xi| <= 1`, else `0`
    Indicator,
    /// `slope * sum_i xi_i`
    Linear(f64),
    /// values at the grid's FFT-ordered frequency nodes
    Tabulated(Vec<f64>),
}

impl Dispersion {
    pub fn is_closed_form(&self) -> bool {
        !matches!(self, Dispersion::Tabulated(_))
    }

    /// Evaluate a closed form at a scalar argument (the 1-d section used by
    /// the FBI integral). Errors on tabulated data, which cannot be read
    /// off-grid.
    pub fn eval_scalar(&self, u: f64) -> Result<f64> {
        Ok(match self {
            Dispersion::Abs => u.abs(),
            Dispersion::Square => u * u,
            Dispersion::PowAbs(a) => u.abs().powf(*a),
            Dispersion::Indicator => {
                if u.abs() <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Dispersion::Linear(c) => c * u,
            Dispersion::Tabulated(_) => {
                return Err(Error::InvalidParameter(
                    "tabulated dispersion relations cannot be evaluated off-grid".into(),
                ))
            }
        })
    }

    /// Points where the scalar section is non-smooth (kinks or jumps); used
    /// to split quadrature panels.
    pub fn scalar_breakpoints(&self) -> Vec<f64> {
        match self {
            Dispersion::Abs => vec![0.0],
            Dispersion::PowAbs(a) => {
                if (a - a.round()).abs() < 1e-12 && (a.round() as i64) % 2 == 0 {
                    vec![]
                } else {
                    vec![0.0]
                }
            }
            Dispersion::Indicator => vec![-1.0, 1.0],
            _ => vec![],
        }
    }

    /// Values at every frequency node of `grid` (FFT ordering, flat
    /// row-major). Tabulated data is length-checked and must be finite.
    pub fn eval_grid(&self, grid: &Grid) -> Result<Vec<f64>> {
        let total = grid.total_points();
        if let Dispersion::Tabulated(vals) = self {
            if vals.len() != total {
                return Err(Error::ShapeMismatch {
                    context: format!(
                        "tabulated dispersion has {} values, grid has {} nodes",
                        vals.len(),
                        total
                    ),
                });
            }
            if let Some(bad) = vals.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "tabulated dispersion contains a non-finite value {bad}"
                )));
            }
            return Ok(vals.clone());
        }
        let out = (0..total)
            .map(|flat| match self {
                Dispersion::Abs => grid.xi_radius(flat),
                Dispersion::Square => {
                    let r = grid.xi_radius(flat);
                    r * r
                }
                Dispersion::PowAbs(a) => grid.xi_radius(flat).powf(*a),
                Dispersion::Indicator => {
                    if grid.xi_radius(flat) <= 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Dispersion::Linear(c) => {
                    let xi = grid.xi_vec(flat);
                    c * (xi[0] + xi[1] + xi[2])
                }
                Dispersion::Tabulated(_) => unreachable!(),
            })
            .collect();
        Ok(out)
    }

    /// Parse CLI notation: `abs`, `square`, `indicator`, `powabs:A`,
    /// `linear:C`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "abs" {
            return Ok(Dispersion::Abs);
        }
        if lower == "square" {
            return Ok(Dispersion::Square);
        }
        if lower == "indicator" {
            return Ok(Dispersion::Indicator);
        }
        if let Some(rest) = lower.strip_prefix("powabs:") {
            let a: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad powabs exponent '{rest}'")))?;
            if !(a > 0.0) {
                return Err(Error::InvalidParameter(
                    "powabs exponent must be positive".into(),
                ));
            }
            return Ok(Dispersion::PowAbs(a));
        }
        if let Some(rest) = lower.strip_prefix("linear:") {
            let c: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad linear slope '{rest}'")))?;
            return Ok(Dispersion::Linear(c));
        }
        Err(Error::InvalidParameter(format!(
            "unknown dispersion relation '{s}' (expected abs, square, indicator, powabs:A, linear:C)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        assert_eq!(Dispersion::parse("abs").unwrap(), Dispersion::Abs);
        assert_eq!(
            Dispersion::parse("powabs:0.5").unwrap(),
            Dispersion::PowAbs(0.5)
        );
        assert_eq!(
            Dispersion::parse("linear:-2").unwrap(),
            Dispersion::Linear(-2.0)
        );
        assert!(Dispersion::parse("frobnicate").is_err());
        assert_eq!(Dispersion::Square.eval_scalar(3.0).unwrap(), 9.0);
        assert_eq!(Dispersion::Indicator.eval_scalar(0.5).unwrap(), 1.0);
        assert_eq!(Dispersion::Indicator.eval_scalar(1.5).unwrap(), 0.0);
    }

    #[test]
    fn tabulated_length_checked() {
        let g = Grid::new(1, 16, 4.0).unwrap();
        let w = Dispersion::Tabulated(vec![0.0; 8]);
        assert!(matches!(w.eval_grid(&g), Err(Error::ShapeMismatch { .. })));
    }
}
