//! The `tancurve` command-line interface.
//!
//! Every failure is reported as one line `error[CODE]: message`. Exit code 1
//! means bad input or a failed check, exit code 2 an I/O failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::contour::{sample_grid, trace_contours, verify_tangency, Bounds};
use crate::error::Error;
use crate::field::Field;
use crate::fit::{fit_conic_two_tangents_one_point, TangentConstraint};
use crate::geom::{ConicCoeffs, GradientVec, Point2};
use crate::ipatch::reproduce_conic_weights;
use crate::scene::{parse_scene, Mode, Scene, SceneDoc, SceneError, SceneField};
use crate::svg::emit_svg;

/// Default inflation of the tangency-point bounding box for `render`.
pub const DEFAULT_INFLATE: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(
    name = "tancurve",
    version,
    about = "Implicit curves from prescribed tangent lines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the scene's curve, tangents, secants and tangency points to SVG.
    Render {
        scene: PathBuf,
        /// xmin,ymin,xmax,ymax (default: tangency points' box grown by 50%)
        #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true)]
        bounds: Option<[f64; 4]>,
        /// Lattice cells per side.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the field value and gradient at a point.
    Eval {
        scene: PathBuf,
        /// x,y
        #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
        at: [f64; 2],
    },
    /// Check every tangency binding against the field.
    Verify {
        scene: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol_value: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol_angle: f64,
    },
    /// Weights for which the scene's four tangents reproduce a conic.
    Reproduce {
        scene: PathBuf,
        /// a,b,c,d,e,f of a·x² + b·xy + c·y² + d·x + e·y + f
        #[arg(long, value_parser = parse_list::<6>, allow_hyphen_values = true)]
        conic: [f64; 6],
    },
    /// Fit the conic through two tangency points and one further point.
    Fit {
        /// x,y,dx,dy: a point and the tangent direction there (give twice)
        #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true, required = true)]
        tangent: Vec<[f64; 4]>,
        /// x,y
        #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
        point: [f64; 2],
    },
}

fn parse_list<const N: usize>(text: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, found {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = crate::scene::parse_number(part)?;
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{}:{}: {}", .source.line, .source.column, .source.message)]
    Scene { path: String, source: SceneError },
    #[error(transparent)]
    Geometry(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    WrongMode(String),
    #[error("{passed}/{total} tangencies pass")]
    CheckFailed { passed: usize, total: usize },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Scene { source, .. } => source.code(),
            CliError::Geometry(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::WrongMode(_) => "ModeConflict",
            CliError::CheckFailed { .. } => "TangencyCheckFailed",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn load(path: &Path) -> Result<(SceneDoc, Scene), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let doc = parse_scene(&text).map_err(|source| CliError::Scene {
        path: path.display().to_string(),
        source,
    })?;
    let scene = doc.build()?;
    Ok((doc, scene))
}

fn describe(scene: &Scene) -> String {
    match &scene.field {
        SceneField::Liming(s) => format!("mode=liming lambda={}", s.lambda()),
        SceneField::FourTangent(s) => {
            format!(
                "mode=four-tangent form={} weights={}",
                s.form(),
                s.weights()
            )
        }
    }
}

/// Runs one command, writing normal output to `out`.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let w = |r: std::io::Result<()>| r.map_err(|e| io_error(Path::new("<stdout>"), e));
    match cli.command {
        Command::Render {
            scene: path,
            bounds,
            grid,
            out: svg_path,
        } => {
            let (_, scene) = load(&path)?;
            let bounds = match bounds {
                Some([x0, y0, x1, y1]) => Bounds::new(x0, y0, x1, y1)?,
                None => Bounds::around(&scene.tangency_points(), DEFAULT_INFLATE)?,
            };
            let sampled = sample_grid(&scene.field, bounds, grid)?;
            let contours = trace_contours(&sampled);
            let svg = emit_svg(
                &contours,
                &scene.tangent_lines(),
                &scene.secants(),
                &scene.tangency_points(),
                &bounds,
            );
            std::fs::write(&svg_path, svg).map_err(|e| io_error(&svg_path, e))?;
            w(writeln!(
                out,
                "{} polylines={} vertices={} -> {}",
                describe(&scene),
                contours.polylines.len(),
                contours.vertex_count(),
                svg_path.display()
            ))?;
        }
        Command::Eval { scene: path, at } => {
            let (_, scene) = load(&path)?;
            let p = Point2::new(at[0], at[1]);
            let value = scene.field.value(p)?;
            let g = scene.field.gradient(p)?;
            w(writeln!(out, "value {value}"))?;
            w(writeln!(out, "gradient {} {}", g.gx, g.gy))?;
        }
        Command::Verify {
            scene: path,
            tol_value,
            tol_angle,
        } => {
            let (_, scene) = load(&path)?;
            w(writeln!(
                out,
                "{:<10} {:<10} {:>14} {:>14}  status",
                "line", "point", "value", "cross"
            ))?;
            let mut passed = 0;
            for t in &scene.tangencies {
                let report = verify_tangency(&scene.field, t.point, &t.line, tol_value, tol_angle);
                passed += usize::from(report.pass);
                w(writeln!(
                    out,
                    "{:<10} {:<10} {:>14.3e} {:>14}  {}",
                    t.line_name,
                    t.point_name,
                    report.value_residual,
                    report.cross_residual.to_string(),
                    if report.pass { "pass" } else { "FAIL" }
                ))?;
            }
            let total = scene.tangencies.len();
            w(writeln!(out, "{passed}/{total} tangencies pass"))?;
            if passed != total {
                return Err(CliError::CheckFailed { passed, total });
            }
        }
        Command::Reproduce { scene: path, conic } => {
            let (_, scene) = load(&path)?;
            if scene.mode() != Mode::FourTangent {
                return Err(CliError::WrongMode(format!(
                    "reproduce needs a four-tangent scene, {} is in {} mode",
                    path.display(),
                    scene.mode()
                )));
            }
            let q = ConicCoeffs::from_array(conic);
            let lines = std::array::from_fn(|k| scene.tangencies[k].line);
            let points = std::array::from_fn(|k| scene.tangencies[k].point);
            let weights = reproduce_conic_weights(&q, &lines, &points)?;
            w(writeln!(
                out,
                "weights {} {} {}",
                weights.w1, weights.w2, weights.w0
            ))?;
            w(writeln!(
                out,
                "note: I = w1·L1·L2·C2² + w2·L3·L4·C1² + w0·C1²·C2² with C1, C2 the chords through each pair; \
                 w0 = −(λ1/ω1 + λ2/ω2) carries the minus sign of (1 − λ)·L·L − λ·C²"
            ))?;
        }
        Command::Fit { tangent, point } => {
            if tangent.len() != 2 {
                return Err(CliError::Usage(format!(
                    "fit takes exactly two --tangent values, found {}",
                    tangent.len()
                )));
            }
            let constraint = |t: [f64; 4]| {
                // the line normal is the tangent direction turned by 90°
                TangentConstraint::new(
                    Point2::new(t[0], t[1]),
                    GradientVec {
                        gx: -t[3],
                        gy: t[2],
                    },
                )
            };
            let conic = fit_conic_two_tangents_one_point(
                &constraint(tangent[0])?,
                &constraint(tangent[1])?,
                Point2::new(point[0], point[1]),
            )?;
            w(writeln!(out, "{conic}"))?;
        }
    }
    Ok(())
}

/// Entry point shared by the binary: parses `args`, runs, reports errors.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let summary = summary.join(" ");
            eprintln!("error[Usage]: {}", summary.trim_start_matches("error: "));
            return 1;
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.code());
            e.exit_code()
        }
    }
}
