//! Distribution flags shared by every subcommand.

use std::fmt;
use std::path::PathBuf;

use acopt::{ProblemSampler, SpectralMeasure};
use clap::{Args, ValueEnum};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    /// Marchenko-Pastur with parameters --sigma and --ratio.
    Mp,
    /// Uniform density on [--lmin, --lmax].
    Uniform,
    /// Atomic measure read from --eigs (one eigenvalue per line).
    File,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// Spectral distribution family (default: mp).
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,

    /// Entry standard deviation for the Marchenko-Pastur family.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,

    /// Aspect ratio d/n for the Marchenko-Pastur family (must differ from 1).
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,

    /// Left edge for the uniform family.
    #[arg(long, default_value_t = 1.0)]
    pub lmin: f64,

    /// Right edge for the uniform family.
    #[arg(long, default_value_t = 2.0)]
    pub lmax: f64,

    /// Eigenvalue file for --dist file: decimal notation, one per line.
    #[arg(long)]
    pub eigs: Option<PathBuf>,
}

/// A resolved distribution: the measure plus a slug for file names.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub measure: SpectralMeasure,
    pub kind: DistKind,
    mp_params: Option<(f64, f64)>,
    /// Original eigenvalue list (multiplicities intact) for file inputs.
    raw_eigenvalues: Option<Vec<f64>>,
    slug: String,
    label: String,
}

impl Distribution {
    pub fn mp(sigma: f64, ratio: f64) -> Result<Self, CliError> {
        let measure = SpectralMeasure::marchenko_pastur(sigma, ratio)?;
        Ok(Self {
            measure,
            kind: DistKind::Mp,
            mp_params: Some((sigma, ratio)),
            raw_eigenvalues: None,
            slug: format!("mp_sigma{}_r{}", num_slug(sigma), num_slug(ratio)),
            label: format!("mp(sigma={sigma}, r={ratio})"),
        })
    }

    pub fn uniform(lmin: f64, lmax: f64) -> Result<Self, CliError> {
        let measure = SpectralMeasure::uniform(lmin, lmax)?;
        Ok(Self {
            measure,
            kind: DistKind::Uniform,
            mp_params: None,
            raw_eigenvalues: None,
            slug: format!("uniform_{}_{}", num_slug(lmin), num_slug(lmax)),
            label: format!("uniform({lmin}, {lmax})"),
        })
    }

    pub fn from_eigenvalues(eigs: &[f64], origin: &str) -> Result<Self, CliError> {
        let measure = SpectralMeasure::empirical(eigs)?;
        Ok(Self {
            measure,
            kind: DistKind::File,
            mp_params: None,
            raw_eigenvalues: Some(eigs.to_vec()),
            slug: format!("file_{origin}"),
            label: format!("empirical({origin}, {} values)", eigs.len()),
        })
    }

    /// `(sigma, ratio)` when this is a Marchenko-Pastur measure.
    pub fn mp_params(&self) -> Option<(f64, f64)> {
        self.mp_params
    }

    /// File-name fragment, e.g. `mp_sigma1_r0.5`.
    pub fn slug(&self) -> &str {
        &self.slug
    }

    /// Human-readable form for CSV metadata and the `dist` column.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// First moment of the measure under the given quadrature size.
    pub fn first_moment(&self, nodes: usize) -> Result<f64, CliError> {
        let quad = acopt::Quadrature::for_measure(&self.measure, nodes)?;
        Ok(quad.integrate(|x| x)?)
    }

    /// Problem sampler matching this distribution: Wishart for MP,
    /// deterministic diagonal spectra otherwise.
    pub fn sampler(&self, d: usize, n: usize, sigma: f64, radius: f64) -> ProblemSampler {
        match self.kind {
            DistKind::Mp => ProblemSampler::Wishart { d, n, sigma, radius },
            DistKind::Uniform => ProblemSampler::DiagonalGrid {
                d,
                lower: self.measure.lower(),
                upper: self.measure.upper(),
                radius,
            },
            DistKind::File => ProblemSampler::DiagonalEigs {
                eigenvalues: self
                    .raw_eigenvalues
                    .clone()
                    .expect("file distributions carry their eigenvalues"),
                radius,
            },
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl DistArgs {
    /// True when the user named a distribution explicitly.
    pub fn is_explicit(&self) -> bool {
        self.dist.is_some()
    }

    pub fn resolve(&self) -> Result<Distribution, CliError> {
        match self.dist.unwrap_or(DistKind::Mp) {
            DistKind::Mp => Distribution::mp(self.sigma, self.ratio),
            DistKind::Uniform => Distribution::uniform(self.lmin, self.lmax),
            DistKind::File => {
                let path = self.eigs.as_ref().ok_or_else(|| {
                    CliError::BadArgs("--dist file requires --eigs PATH".into())
                })?;
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::BadArgs(format!("cannot read {}: {e}", path.display()))
                })?;
                let mut eigs = Vec::new();
                for (lineno, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let v: f64 = line.parse().map_err(|e| {
                        CliError::BadArgs(format!(
                            "{}:{}: not a number ({e})",
                            path.display(),
                            lineno + 1
                        ))
                    })?;
                    eigs.push(v);
                }
                let origin = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "eigs".into());
                Distribution::from_eigenvalues(&eigs, &slugify(&origin))
            }
        }
    }
}

/// Compact number for file names: trailing zeros trimmed, `.` kept.
fn num_slug(v: f64) -> String {
    let s = format!("{v}");
    s.replace('-', "m")
}

fn slugify(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}
