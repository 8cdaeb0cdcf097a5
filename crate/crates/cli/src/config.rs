//! Layered run configuration: defaults, then a TOML file, then flags.
//!
//! Every invariant violation is reported with the configuration field that
//! caused it (`grid.r_min`, `map.alpha`, ...), and validation happens before
//! any output path is touched.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use diskdil::bounds::{geometric_radii, linear_radii, CheckKind, SuiteConfig, Tolerances};
use diskdil::ingest::parse_sampled_map;
use diskdil::mapping::Mapping;
use diskdil::quadrature::{CircleRule, RadialRule};

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "DISKDIL_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by `profile`, `check`, and `schwarz`.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Mapping family: builtin, identity, rotation, radial-power, twist,
    /// angular-reparam, sampled
    #[arg(long, value_name = "FAMILY")]
    pub map: Option<String>,

    /// Exponent of the radial power map (family radial-power)
    #[arg(long, value_name = "A")]
    pub alpha: Option<f64>,

    /// Rotation angle in radians (family rotation)
    #[arg(long, value_name = "RAD")]
    pub phi: Option<f64>,

    /// Comma-separated coefficients: the twist polynomial g(r) = c1 r + c2 r^2
    /// + ..., or the sine coefficients of angular-reparam
    #[arg(long, value_delimiter = ',', value_name = "C1,C2,...")]
    pub coeffs: Option<Vec<f64>>,

    /// Cosine coefficients of angular-reparam
    #[arg(long, value_delimiter = ',', value_name = "C1,C2,...")]
    pub cos_coeffs: Option<Vec<f64>>,

    /// Sampled-map file, CSV or JSON (family sampled)
    #[arg(long, value_name = "PATH")]
    pub sample: Option<PathBuf>,

    /// Comma-separated exponents, all >= 2
    #[arg(long, value_delimiter = ',', value_name = "P1,P2,...")]
    pub p: Option<Vec<f64>>,

    /// Smallest grid radius
    #[arg(long, value_name = "R")]
    pub r_min: Option<f64>,

    /// Largest grid radius
    #[arg(long, value_name = "R")]
    pub r_max: Option<f64>,

    /// Number of grid radii
    #[arg(long, value_name = "N")]
    pub r_count: Option<usize>,

    /// Grid spacing
    #[arg(long, value_enum, value_name = "KIND")]
    pub spacing: Option<Spacing>,

    /// Even number of circle quadrature nodes
    #[arg(long, value_name = "N")]
    pub circle_nodes: Option<usize>,

    /// Relative margin tolerance for checks
    #[arg(long, value_name = "X")]
    pub tol_rel: Option<f64>,

    /// Absolute margin tolerance for checks
    #[arg(long, value_name = "X")]
    pub tol_abs: Option<f64>,

    /// Comma-separated check selection: lemma1, isoperimetric, lemma2,
    /// lemma3, theorem1, theorem2, corollary1, inclusion_lf
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    pub checks: Option<Vec<String>>,

    /// Output directory (default: $DISKDIL_OUT, then ./out)
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Output table formats
    #[arg(long, value_delimiter = ',', value_enum, value_name = "FMT,...")]
    pub format: Option<Vec<Format>>,

    /// Emit SVG charts next to the tables
    #[arg(long)]
    pub plots: bool,

    /// Impute isolated non-positive-Jacobian circle nodes instead of
    /// failing (profile tables only; checks always use the strict policy)
    #[arg(long)]
    pub mask_defects: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<Vec<f64>>,
    map: Option<MapSection>,
    grid: Option<GridSection>,
    quadrature: Option<QuadratureSection>,
    tolerances: Option<ToleranceSection>,
    checks: Option<Vec<String>>,
    output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSection {
    family: Option<String>,
    alpha: Option<f64>,
    phi: Option<f64>,
    coeffs: Option<Vec<f64>>,
    cos_coeffs: Option<Vec<f64>>,
    path: Option<PathBuf>,
    mask_defects: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    r_min: Option<f64>,
    r_max: Option<f64>,
    count: Option<usize>,
    spacing: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureSection {
    circle_nodes: Option<usize>,
    radial_rel: Option<f64>,
    radial_abs: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceSection {
    abs: Option<f64>,
    rel: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    directory: Option<PathBuf>,
    formats: Option<Vec<String>>,
    plots: Option<bool>,
}

/// Which default radius grid a command starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRole {
    /// Per-circle and two-radius checks: linear 0.05..0.95, 20 nodes.
    Standard,
    /// Origin functionals: geometric 1e-4..0.5, 48 nodes, must stay < 1.
    Origin,
}

/// A fully resolved and validated run.
#[derive(Debug)]
pub struct RunConfig {
    pub maps: Vec<Mapping>,
    pub p_list: Vec<f64>,
    /// Ascending radius grid.
    pub radii: Vec<f64>,
    pub circle: CircleRule,
    pub radial: RadialRule,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckKind>,
    pub out_dir: PathBuf,
    pub csv: bool,
    pub json: bool,
    pub plots: bool,
    pub mask_defects: bool,
}

fn default_grid(role: GridRole) -> (f64, f64, usize, Spacing) {
    match role {
        GridRole::Standard => (0.05, 0.95, 20, Spacing::Linear),
        GridRole::Origin => (1e-4, 0.5, 48, Spacing::Geometric),
    }
}

fn parse_spacing(field: &str, value: &str) -> Result<Spacing> {
    match value {
        "linear" => Ok(Spacing::Linear),
        "geometric" => Ok(Spacing::Geometric),
        other => bail!("{field}: unknown spacing `{other}`; expected linear or geometric"),
    }
}

fn build_maps(
    family: &str,
    alpha: Option<f64>,
    phi: Option<f64>,
    coeffs: Option<Vec<f64>>,
    cos_coeffs: Option<Vec<f64>>,
    path: Option<&PathBuf>,
) -> Result<Vec<Mapping>> {
    let map = match family {
        "builtin" => return Ok(SuiteConfig::builtin().maps),
        "identity" => Mapping::identity(),
        "rotation" => {
            let phi =
                phi.ok_or_else(|| anyhow!("map.phi is required for family `rotation`"))?;
            Mapping::rotation(phi).map_err(|e| anyhow!("map.phi: {e}"))?
        }
        "radial-power" => {
            let alpha = alpha
                .ok_or_else(|| anyhow!("map.alpha is required for family `radial-power`"))?;
            Mapping::radial_power(alpha).map_err(|e| anyhow!("map.alpha: {e}"))?
        }
        "twist" => {
            let coeffs = coeffs
                .filter(|c| !c.is_empty())
                .ok_or_else(|| anyhow!("map.coeffs is required for family `twist`"))?;
            Mapping::twist(coeffs).map_err(|e| anyhow!("map.coeffs: {e}"))?
        }
        "angular-reparam" => {
            let sin = coeffs.unwrap_or_default();
            let cos = cos_coeffs.unwrap_or_default();
            if sin.is_empty() && cos.is_empty() {
                bail!("map.coeffs: family `angular-reparam` needs sine or cosine coefficients");
            }
            Mapping::angular_reparam(sin, cos).map_err(|e| anyhow!("map.coeffs: {e}"))?
        }
        "sampled" => {
            let path = path
                .ok_or_else(|| anyhow!("map.path is required for family `sampled`"))?;
            let sampled = parse_sampled_map(path)
                .with_context(|| format!("map.path: cannot ingest {}", path.display()))?;
            Mapping::sampled(sampled)
        }
        other => bail!(
            "map.family: unknown family `{other}`; expected builtin, identity, rotation, \
             radial-power, twist, angular-reparam, or sampled"
        ),
    };
    Ok(vec![map])
}

/// Resolves flags, file, and defaults into a validated [`RunConfig`].
pub fn resolve(args: &RunArgs, role: GridRole) -> Result<RunConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("cannot parse config file {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    let file_map = file.map.unwrap_or_default();
    let file_grid = file.grid.unwrap_or_default();
    let file_quad = file.quadrature.unwrap_or_default();
    let file_tol = file.tolerances.unwrap_or_default();
    let file_out = file.output.unwrap_or_default();

    // --- mapping ---
    let family = args
        .map
        .clone()
        .or(file_map.family)
        .unwrap_or_else(|| "builtin".to_string());
    let maps = build_maps(
        &family,
        args.alpha.or(file_map.alpha),
        args.phi.or(file_map.phi),
        args.coeffs.clone().or(file_map.coeffs),
        args.cos_coeffs.clone().or(file_map.cos_coeffs),
        args.sample.as_ref().or(file_map.path.as_ref()),
    )?;

    // --- exponents ---
    let p_list = args.p.clone().or(file.p).unwrap_or_else(|| vec![2.0]);
    if p_list.is_empty() {
        bail!("p: at least one exponent is required");
    }
    for &p in &p_list {
        if !p.is_finite() || p < 2.0 {
            bail!("p: all exponents must be finite and >= 2, got {p}");
        }
    }

    // --- grid ---
    let (d_min, d_max, d_count, d_spacing) = default_grid(role);
    let r_min = args.r_min.or(file_grid.r_min).unwrap_or(d_min);
    let r_max = args.r_max.or(file_grid.r_max).unwrap_or(d_max);
    let count = args.r_count.or(file_grid.count).unwrap_or(d_count);
    let spacing = match (args.spacing, file_grid.spacing) {
        (Some(s), _) => s,
        (None, Some(text)) => parse_spacing("grid.spacing", &text)?,
        (None, None) => d_spacing,
    };
    if !(r_min > 0.0) || !r_min.is_finite() {
        bail!("grid.r_min: must be > 0, got {r_min}");
    }
    if !(r_max <= 1.0) {
        bail!("grid.r_max: must be <= 1, got {r_max}");
    }
    if !(r_min < r_max) {
        bail!("grid.r_min: must be < grid.r_max, got [{r_min}, {r_max}]");
    }
    if count < 2 {
        bail!("grid.count: must be >= 2, got {count}");
    }
    if role == GridRole::Origin && !(r_max < 1.0) {
        bail!("grid.r_max: must be < 1 for origin functionals, got {r_max}");
    }
    let radii = match spacing {
        Spacing::Linear => linear_radii(r_min, r_max, count),
        Spacing::Geometric => geometric_radii(r_min, r_max, count),
    };

    // --- quadrature ---
    let circle_nodes = args
        .circle_nodes
        .or(file_quad.circle_nodes)
        .unwrap_or(CircleRule::DEFAULT_NODES);
    let circle =
        CircleRule::new(circle_nodes).map_err(|e| anyhow!("quadrature.circle_nodes: {e}"))?;
    let default_radial = RadialRule::default();
    let radial = RadialRule::new(
        file_quad.radial_rel.unwrap_or(default_radial.rel_tol),
        file_quad.radial_abs.unwrap_or(default_radial.abs_tol),
        default_radial.max_depth,
    )
    .map_err(|e| anyhow!("quadrature.radial_rel/radial_abs: {e}"))?;

    // --- margin tolerances ---
    let default_tol = Tolerances::default();
    let tolerances = Tolerances::new(
        args.tol_abs.or(file_tol.abs).unwrap_or(default_tol.abs),
        args.tol_rel.or(file_tol.rel).unwrap_or(default_tol.rel),
    )
    .map_err(|e| anyhow!("tolerances: {e}"))?;

    // --- check selection ---
    let checks = match args.checks.clone().or(file.checks) {
        Some(names) => {
            let mut kinds = Vec::new();
            for name in names {
                let kind: CheckKind = name
                    .parse()
                    .map_err(|e| anyhow!("checks: {e}"))?;
                if !kinds.contains(&kind) {
                    kinds.push(kind);
                }
            }
            kinds
        }
        None => CheckKind::all().to_vec(),
    };

    // --- output ---
    let out_dir = args
        .out
        .clone()
        .or(file_out.directory)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let (csv, json) = match &args.format {
        Some(list) => (list.contains(&Format::Csv), list.contains(&Format::Json)),
        None => match &file_out.formats {
            Some(names) => {
                let mut csv = false;
                let mut json = false;
                for name in names {
                    match name.as_str() {
                        "csv" => csv = true,
                        "json" => json = true,
                        other => bail!(
                            "output.formats: unknown format `{other}`; expected csv or json"
                        ),
                    }
                }
                (csv, json)
            }
            None => (true, true),
        },
    };
    if !csv && !json {
        bail!("output.formats: at least one of csv, json is required");
    }
    let plots = args.plots || file_out.plots.unwrap_or(false);
    let mask_defects = args.mask_defects || file_map.mask_defects.unwrap_or(false);

    Ok(RunConfig {
        maps,
        p_list,
        radii,
        circle,
        radial,
        tolerances,
        checks,
        out_dir,
        csv,
        json,
        plots,
        mask_defects,
    })
}

/// Filesystem-friendly slug of a mapping label.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut last_dash = true;
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
            last_dash = false;
        } else if !last_dash {
            out.push('-');
            last_dash = true;
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    out
}
