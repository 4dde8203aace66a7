//! `splatkit` command line: novel-view rig generation, splat rendering,
//! COLMAP model conversion, dataset augmentation, and metric reports.
//!
//! Exit codes: 0 success, 1 usage, 2 malformed input, 3 integrity failure,
//! 4 I/O failure.

use std::error::Error as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use splatkit::colmap;
use splatkit::dataset::{merge_models, DatasetModel};
use splatkit::metrics::{compare_image_sets, usaf_lp_per_mm, SsimParams, UsafReading};
use splatkit::render::{render_batch, RenderSettings};
use splatkit::rig::{convert_convention, generate_offset_poses, generate_rig, Convention, RigSpec};
use splatkit::splat::load_splat_ply;
use splatkit::Result;

#[derive(Parser)]
#[command(
    name = "splatkit",
    version,
    about = "Gaussian splat novel-view toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate ring camera poses from a rig spec file as a COLMAP text model.
    Rig(RigArgs),
    /// Displace each pose of a model sideways by a fixed offset (4 per input).
    OffsetRig(OffsetRigArgs),
    /// Render every pose of a COLMAP text model from a splat PLY scene.
    Render(RenderArgs),
    /// Convert a whole model between graphics and vision camera conventions.
    ConvertPose(ConvertPoseArgs),
    /// Rewrite an images.txt with all 2D point observations removed.
    StripPoints(StripPointsArgs),
    /// Merge a ground-truth model with novel views into an augmented dataset.
    Augment(AugmentArgs),
    /// Compare two image directories by file name (SSIM, PSNR).
    Metrics(MetricsArgs),
    /// Print the USAF-1951 chart resolution for a group/element reading.
    Usaf(UsafArgs),
}

#[derive(Args)]
struct RigArgs {
    /// Rig spec file (key = value lines).
    #[arg(long)]
    spec: PathBuf,
    /// Output model directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OffsetRigArgs {
    /// Input COLMAP text model directory.
    #[arg(long)]
    model: PathBuf,
    /// Offset distance in world units.
    #[arg(long)]
    offset: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Trained splat scene (.ply).
    #[arg(long)]
    splat: PathBuf,
    /// COLMAP text model directory with the poses to render.
    #[arg(long)]
    model: PathBuf,
    /// Output directory for the PNGs.
    #[arg(long)]
    out: PathBuf,
    /// Background color as `r,g,b` in [0, 1].
    #[arg(long, value_parser = parse_rgb, default_value = "0,0,0")]
    background: [f64; 3],
    /// Rasterization tile size in pixels.
    #[arg(long, default_value_t = 16)]
    tile: u32,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Graphics,
    Vision,
}

impl From<ConventionArg> for Convention {
    fn from(value: ConventionArg) -> Self {
        match value {
            ConventionArg::Graphics => Convention::Graphics,
            ConventionArg::Vision => Convention::Vision,
        }
    }
}

#[derive(Args)]
struct ConvertPoseArgs {
    /// Input COLMAP text model directory.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    from: ConventionArg,
    #[arg(long)]
    to: ConventionArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StripPointsArgs {
    /// Input images.txt.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output images.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AugmentArgs {
    /// Ground-truth model directory.
    #[arg(long)]
    ground: PathBuf,
    /// Novel-view model directory.
    #[arg(long)]
    novel: PathBuf,
    /// Output dataset directory.
    #[arg(long)]
    out: PathBuf,
    /// Symlink image files instead of copying.
    #[arg(long)]
    link: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image directory.
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Test image directory.
    #[arg(long = "test")]
    test: PathBuf,
    /// Also write the report as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct UsafArgs {
    /// Chart group number (may be negative).
    #[arg(long, allow_negative_numbers = true)]
    group: i32,
    /// Element within the group, 1-6.
    #[arg(long, value_parser = clap::value_parser!(i32).range(1..=6))]
    element: i32,
}

fn parse_rgb(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected `r,g,b`, got `{s}`"));
    }
    let mut rgb = [0.0f64; 3];
    for (i, p) in parts.iter().enumerate() {
        rgb[i] = p
            .parse()
            .map_err(|_| format!("bad background component `{p}`"))?;
        if !(0.0..=1.0).contains(&rgb[i]) {
            return Err(format!("background component {p} outside [0, 1]"));
        }
    }
    Ok(rgb)
}

/// Prints a line to stdout, swallowing write errors so piping into a
/// closed reader (`splatkit metrics ... | head`) exits quietly instead of
/// panicking on a broken pipe.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rig(args) => {
            let spec = RigSpec::from_file(&args.spec)?;
            let records = generate_rig(&spec)?;
            colmap::write_model_text(
                &args.out,
                std::slice::from_ref(&spec.intrinsics),
                &records,
                false,
            )?;
            emit(format_args!(
                "wrote {} poses to {}",
                records.len(),
                args.out.display()
            ));
        }
        Command::OffsetRig(args) => {
            let (cams, records) = colmap::read_model_text(&args.model)?;
            let offset = generate_offset_poses(&records, args.offset)?;
            colmap::write_model_text(&args.out, &cams, &offset, false)?;
            emit(format_args!(
                "wrote {} offset poses to {}",
                offset.len(),
                args.out.display()
            ));
        }
        Command::Render(args) => {
            let cloud = load_splat_ply(&args.splat)?;
            let (cams, records) = colmap::read_model_text(&args.model)?;
            let settings = RenderSettings {
                background: args.background,
                tile_size: args.tile,
                ..Default::default()
            };
            let paths = render_batch(&cloud, &records, &cams, &settings, &args.out)?;
            emit(format_args!(
                "rendered {} views ({} gaussians) to {}",
                paths.len(),
                cloud.len(),
                args.out.display()
            ));
        }
        Command::ConvertPose(args) => {
            let (cams, mut records) = colmap::read_model_text(&args.input)?;
            for rec in &mut records {
                rec.pose = convert_convention(&rec.pose, args.from.into(), args.to.into())?;
            }
            colmap::write_model_text(&args.out, &cams, &records, true)?;
            emit(format_args!(
                "converted {} poses to {}",
                records.len(),
                args.out.display()
            ));
        }
        Command::StripPoints(args) => {
            let records = colmap::parse_images_text(&args.input)?;
            colmap::write_images_text(&records, &args.out, false)?;
            emit(format_args!(
                "stripped 2D points from {} records",
                records.len()
            ));
        }
        Command::Augment(args) => {
            let ground = DatasetModel::load(&args.ground)?;
            let novel = DatasetModel::load(&args.novel)?;
            let merged = merge_models(&ground, &novel, &args.out, args.link)?;
            emit(format_args!(
                "augmented dataset: {} ground + {} novel = {} images in {}",
                ground.images.len(),
                novel.images.len(),
                merged.images.len(),
                args.out.display()
            ));
        }
        Command::Metrics(args) => {
            let report =
                compare_image_sets(&args.reference, &args.test, &SsimParams::default(), 1.0)?;
            emit(format_args!("{report}"));
            if let Some(csv) = args.csv {
                report.write_csv(&csv)?;
                emit(format_args!("csv written to {}", csv.display()));
            }
        }
        Command::Usaf(args) => {
            let lp = usaf_lp_per_mm(UsafReading {
                group: args.group,
                element: args.element,
            })?;
            emit(format_args!("{lp:.4}"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = err.source();
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
