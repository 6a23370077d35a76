//! Shared --domain argument block mapping CLI flags onto `DomainSpec`.

use anyhow::Result;
use clap::Args;

use neumann_flux::geometry::DomainSpec;

/// Argument-validation failure; the CLI maps it to exit code 2.
#[derive(Debug)]
pub struct BadArgs(pub String);

impl std::fmt::Display for BadArgs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadArgs {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(BadArgs(msg.into()))
}

#[derive(Args, Clone)]
pub struct DomainArgs {
    /// One of: disk, square, box, regular-polygon, isosceles, equilateral,
    /// rhombus, ellipse, sector
    #[arg(long)]
    pub domain: String,
    /// Sides of a regular polygon
    #[arg(long)]
    pub sides: Option<usize>,
    /// Circumradius (regular-polygon) or disk radius
    #[arg(long)]
    pub radius: Option<f64>,
    /// Isosceles aperture in radians
    #[arg(long)]
    pub aperture: Option<f64>,
    /// Equilateral or isosceles side length
    #[arg(long)]
    pub side: Option<f64>,
    /// Sector aperture in radians
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rhombus vertex angle in radians
    #[arg(long)]
    pub angle: Option<f64>,
    /// Ellipse semi-axes, e.g. 1.25,1.0
    #[arg(long, value_delimiter = ',')]
    pub axes: Option<Vec<f64>>,
    /// Box half-lengths, e.g. 1,1
    #[arg(long, value_delimiter = ',')]
    pub half_lengths: Option<Vec<f64>>,
    /// Boundary segments for curved domains
    #[arg(long, default_value_t = 32)]
    pub segments: usize,
}

impl DomainArgs {
    pub fn to_spec(&self) -> Result<DomainSpec> {
        let spec = match self.domain.as_str() {
            "disk" => DomainSpec::disk(self.radius.unwrap_or(1.0), self.segments)?,
            "square" => DomainSpec::square(self.half_lengths.as_ref().map_or(1.0, |h| h[0]))?,
            "box" => {
                let h = self
                    .half_lengths
                    .clone()
                    .ok_or_else(|| bad("box needs --half-lengths a1,a2"))?;
                DomainSpec::Box { spec: neumann_flux::closed_form::BoxSpec::new(h)? }
            }
            "regular-polygon" => {
                let k = self.sides.ok_or_else(|| bad("regular-polygon needs --sides"))?;
                DomainSpec::regular_polygon(k, self.radius.unwrap_or(1.0))?
            }
            "isosceles" => {
                let ap = self.aperture.ok_or_else(|| bad("isosceles needs --aperture"))?;
                DomainSpec::isosceles_triangle(ap, self.side.unwrap_or(1.0))?
            }
            "equilateral" => DomainSpec::equilateral(self.side.unwrap_or(2.0))?,
            "rhombus" => {
                let angle = self.angle.ok_or_else(|| bad("rhombus needs --angle"))?;
                DomainSpec::rhombus(angle, self.side.unwrap_or(1.0))?
            }
            "ellipse" => {
                let axes = self.axes.clone().ok_or_else(|| bad("ellipse needs --axes a,b"))?;
                if axes.len() != 2 {
                    return Err(bad("--axes takes exactly two values"));
                }
                DomainSpec::ellipse(axes[0], axes[1], self.segments)?
            }
            "sector" => {
                let alpha = self.alpha.ok_or_else(|| bad("sector needs --alpha"))?;
                DomainSpec::sector(alpha, self.segments.max(16))?
            }
            other => return Err(bad(format!("unknown domain kind '{other}'"))),
        };
        Ok(spec)
    }
}
