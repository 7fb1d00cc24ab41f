//! Synthetic bicluster benchmark datasets.
//!
//! Generates the four benchmark data types (constant, shift, scale,
//! shift-scale) on a Gaussian background, injects sparse spikes, shuffles
//! rows and columns, and carries the planted ground truth through every
//! step.
//!
//! Randomness is a single ChaCha8 stream per operation seed with a fixed
//! draw order: background entries row-major, then per cluster the per-row
//! pattern parameters (base, scale, shift — in that order, as applicable)
//! followed by the block's entry noise row-major. Normal deviates come from
//! `rand_distr::Normal` (ziggurat method). Identical spec and seed give
//! bit-identical output.
//!
//! Shift/scale pattern values are drawn once per block row, so a noiseless
//! block is constant along each row; the upstream generator this imitates
//! is not reproduced verbatim.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::extract::{Bicluster, BiclusterSet, ExtractError};
use crate::matrix::{validate_permutation, BoolMatrix, DenseMatrix, MatrixError};
use crate::scalar::{real, Real};
use crate::seed::fanout;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible block layout: {n_clusts} clusters of {rows_per_cluster}x{cols_per_cluster} do not fit in {n_rows}x{n_cols}")]
    InfeasibleLayout {
        n_clusts: usize,
        rows_per_cluster: usize,
        cols_per_cluster: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("noise parameter {name} must be non-negative, got {value}")]
    NegativeNoise { name: &'static str, value: f64 },
    #[error("bicluster_noise has {got} entries for {expected} clusters")]
    NoiseLength { expected: usize, got: usize },
    #[error("spike probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("spike mask shape {mask:?} does not match matrix shape {matrix:?}")]
    MaskShape {
        mask: (usize, usize),
        matrix: (usize, usize),
    },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The four benchmark pattern types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiclusterKind {
    Constant,
    Shift,
    Scale,
    ShiftScale,
}

impl BiclusterKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Shift => "shift",
            Self::Scale => "scale",
            Self::ShiftScale => "shift_scale",
        }
    }

    pub fn all() -> [Self; 4] {
        [Self::Constant, Self::Shift, Self::Scale, Self::ShiftScale]
    }
}

impl FromStr for BiclusterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "constant" => Ok(Self::Constant),
            "shift" => Ok(Self::Shift),
            "scale" => Ok(Self::Scale),
            "shift_scale" | "shift-scale" | "shiftscale" => Ok(Self::ShiftScale),
            other => Err(format!(
                "unknown kind '{other}' (expected constant|shift|scale|shift_scale)"
            )),
        }
    }
}

/// Generator configuration. Unspecified location parameters default to 0
/// and scale parameters to 1, the conventions of the normal-distribution
/// keyword arguments the config keys mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct BiclusterDataSpec<F> {
    pub kind: BiclusterKind,
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_clusts: usize,
    pub rows_per_cluster: usize,
    pub cols_per_cluster: usize,
    /// Block value for the constant kind.
    pub bicluster_signal: F,
    /// Per-cluster entry noise standard deviation inside blocks.
    pub bicluster_noise: Vec<F>,
    /// Background noise standard deviation, applied to every entry.
    pub background_noise_sd: F,
    pub base_loc: F,
    pub base_scale: F,
    pub shift_loc: F,
    pub shift_scale: F,
    pub scale_loc: F,
    pub scale_scale: F,
    pub shuffle: bool,
    pub seed: u64,
}

impl<F: Real> BiclusterDataSpec<F> {
    /// Baseline configuration: 300×50, five 5×8 blocks, unit background
    /// noise, constant signal 5, shuffling on.
    pub fn defaults(kind: BiclusterKind) -> Self {
        Self {
            kind,
            n_rows: 300,
            n_cols: 50,
            n_clusts: 5,
            rows_per_cluster: 5,
            cols_per_cluster: 8,
            bicluster_signal: real(5.0),
            bicluster_noise: vec![F::zero(); 5],
            background_noise_sd: F::one(),
            base_loc: F::zero(),
            base_scale: F::one(),
            shift_loc: F::zero(),
            shift_scale: F::one(),
            scale_loc: F::zero(),
            scale_scale: F::one(),
            shuffle: true,
            seed: 0,
        }
    }

    /// The benchmark setting for a data type: constant keeps its signal of
    /// 5; shift uses base_loc=1, shift_loc=1, shift_scale=3; scale uses
    /// base_loc=1, scale_scale=3; shift-scale uses base_scale=1,
    /// scale_scale=2, shift_scale=3. The non-constant kinds carry in-block
    /// noise of 0.01 per cluster.
    pub fn benchmark_preset(kind: BiclusterKind) -> Self {
        let mut spec = Self::defaults(kind);
        match kind {
            BiclusterKind::Constant => {}
            BiclusterKind::Shift => {
                spec.bicluster_noise = vec![real(0.01); 5];
                spec.base_loc = F::one();
                spec.shift_loc = F::one();
                spec.shift_scale = real(3.0);
            }
            BiclusterKind::Scale => {
                spec.bicluster_noise = vec![real(0.01); 5];
                spec.base_loc = F::one();
                spec.scale_loc = F::zero();
                spec.scale_scale = real(3.0);
            }
            BiclusterKind::ShiftScale => {
                spec.bicluster_noise = vec![real(0.01); 5];
                spec.base_scale = F::one();
                spec.scale_scale = real(2.0);
                spec.shift_scale = real(3.0);
            }
        }
        spec
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_clusts > 0
            && (self.n_clusts * self.rows_per_cluster > self.n_rows
                || self.n_clusts * self.cols_per_cluster > self.n_cols
                || self.rows_per_cluster == 0
                || self.cols_per_cluster == 0)
        {
            return Err(SynthError::InfeasibleLayout {
                n_clusts: self.n_clusts,
                rows_per_cluster: self.rows_per_cluster,
                cols_per_cluster: self.cols_per_cluster,
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        if self.bicluster_noise.len() != self.n_clusts {
            return Err(SynthError::NoiseLength {
                expected: self.n_clusts,
                got: self.bicluster_noise.len(),
            });
        }
        for (name, value) in [
            ("noise", self.background_noise_sd),
            ("base_scale", self.base_scale),
            ("shift_scale", self.shift_scale),
            ("scale_scale", self.scale_scale),
        ] {
            if value < F::zero() {
                return Err(SynthError::NegativeNoise {
                    name,
                    value: value.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for &bn in &self.bicluster_noise {
            if bn < F::zero() {
                return Err(SynthError::NegativeNoise {
                    name: "bicluster_noise",
                    value: bn.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Parses the flat `key = value` config format. Keys mirror the
    /// benchmark setting names: `kind`, `nrows`, `ncols`, `nclusts`,
    /// `nclustrows`, `nclustcols`, `bicluster_signals`, `bicluster_noise`
    /// (single value or comma list), `noise`, `base_loc`, `base_scale`,
    /// `shift_loc`, `shift_scale`, `scale_loc`, `scale_scale`, `shuffle`,
    /// `seed`. Lines starting with `#` are comments.
    pub fn parse_config(text: &str) -> Result<Self, SynthError>
    where
        F: FromStr,
    {
        let mut spec = Self::defaults(BiclusterKind::Constant);
        let mut noise_list: Option<Vec<F>> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SynthError::Config {
                line: line_no,
                message: "expected 'key = value'".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |message: String| SynthError::Config {
                line: line_no,
                message,
            };

            match key {
                "kind" => spec.kind = value.parse().map_err(bad)?,
                "nrows" => spec.n_rows = parse_num(value).map_err(bad)?,
                "ncols" => spec.n_cols = parse_num(value).map_err(bad)?,
                "nclusts" => spec.n_clusts = parse_num(value).map_err(bad)?,
                "nclustrows" => spec.rows_per_cluster = parse_num(value).map_err(bad)?,
                "nclustcols" => spec.cols_per_cluster = parse_num(value).map_err(bad)?,
                "bicluster_signals" => spec.bicluster_signal = parse_real(value).map_err(bad)?,
                "bicluster_noise" => {
                    let parts: Result<Vec<F>, String> =
                        value.split(',').map(|p| parse_real(p.trim())).collect();
                    noise_list = Some(parts.map_err(bad)?);
                }
                "noise" => spec.background_noise_sd = parse_real(value).map_err(bad)?,
                "base_loc" => spec.base_loc = parse_real(value).map_err(bad)?,
                "base_scale" => spec.base_scale = parse_real(value).map_err(bad)?,
                "shift_loc" => spec.shift_loc = parse_real(value).map_err(bad)?,
                "shift_scale" => spec.shift_scale = parse_real(value).map_err(bad)?,
                "scale_loc" => spec.scale_loc = parse_real(value).map_err(bad)?,
                "scale_scale" => spec.scale_scale = parse_real(value).map_err(bad)?,
                "shuffle" => {
                    spec.shuffle = match value.to_ascii_lowercase().as_str() {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        other => {
                            return Err(bad(format!("expected true/false, got '{other}'")));
                        }
                    }
                }
                "seed" => spec.seed = parse_num(value).map_err(bad)?,
                other => {
                    return Err(bad(format!("unknown key '{other}'")));
                }
            }
        }

        spec.bicluster_noise = match noise_list {
            Some(list) if list.len() == 1 => vec![list[0]; spec.n_clusts],
            Some(list) => list,
            None => vec![F::zero(); spec.n_clusts],
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_num<T: FromStr>(value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid integer '{value}'"))
}

fn parse_real<F: FromStr>(value: &str) -> Result<F, String> {
    value.parse().map_err(|_| format!("invalid number '{value}'"))
}

/// Planted structure carried alongside a generated matrix. Index sets
/// always address the matrix in its current (possibly shuffled) layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    biclusters: Vec<(Vec<usize>, Vec<usize>)>,
    spike_mask: BoolMatrix,
}

impl GroundTruth {
    pub fn new(
        biclusters: Vec<(Vec<usize>, Vec<usize>)>,
        spike_mask: BoolMatrix,
    ) -> Self {
        Self {
            biclusters,
            spike_mask,
        }
    }

    pub fn biclusters(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.biclusters
    }

    pub fn spike_mask(&self) -> &BoolMatrix {
        &self.spike_mask
    }

    pub fn with_spike_mask(mut self, mask: BoolMatrix) -> Result<Self, SynthError> {
        if mask.shape() != self.spike_mask.shape() {
            return Err(SynthError::MaskShape {
                mask: mask.shape(),
                matrix: self.spike_mask.shape(),
            });
        }
        self.spike_mask = mask;
        Ok(self)
    }

    pub fn to_bicluster_set<F: Real>(&self) -> Result<BiclusterSet<F>, ExtractError> {
        let biclusters = self
            .biclusters
            .iter()
            .map(|(rows, cols)| Bicluster::new(rows.clone(), cols.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        BiclusterSet::new(self.spike_mask.shape(), biclusters)
    }

    fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self, SynthError> {
        let biclusters = self
            .biclusters
            .iter()
            .map(|(rows, cols)| {
                let mut r: Vec<usize> = rows.iter().map(|&i| row_perm[i]).collect();
                let mut c: Vec<usize> = cols.iter().map(|&j| col_perm[j]).collect();
                r.sort_unstable();
                c.sort_unstable();
                (r, c)
            })
            .collect();
        Ok(Self {
            biclusters,
            spike_mask: self.spike_mask.permute(row_perm, col_perm)?,
        })
    }
}

/// Generates the background plus planted blocks. Blocks sit on contiguous
/// disjoint index ranges; run [`shuffle`] afterwards to scatter them.
pub fn generate<F: Real>(
    spec: &BiclusterDataSpec<F>,
) -> Result<(DenseMatrix<F>, GroundTruth), SynthError>
where
    StandardNormal: Distribution<F>,
{
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = StandardNormal;

    // Background first, row-major.
    let mut values = Vec::with_capacity(spec.n_rows * spec.n_cols);
    for _ in 0..spec.n_rows * spec.n_cols {
        let z: F = normal.sample(&mut rng);
        values.push(spec.background_noise_sd * z);
    }

    let mut biclusters = Vec::with_capacity(spec.n_clusts);
    for c in 0..spec.n_clusts {
        let row_start = c * spec.rows_per_cluster;
        let col_start = c * spec.cols_per_cluster;
        let rows: Vec<usize> = (row_start..row_start + spec.rows_per_cluster).collect();
        let cols: Vec<usize> = (col_start..col_start + spec.cols_per_cluster).collect();

        for &i in &rows {
            // Per-row pattern value; draws happen in a fixed order.
            let row_value = match spec.kind {
                BiclusterKind::Constant => spec.bicluster_signal,
                BiclusterKind::Shift => {
                    let base = spec.base_loc + spec.base_scale * normal.sample(&mut rng);
                    let shift = spec.shift_loc + spec.shift_scale * normal.sample(&mut rng);
                    base + shift
                }
                BiclusterKind::Scale => {
                    let base = spec.base_loc + spec.base_scale * normal.sample(&mut rng);
                    let scale = spec.scale_loc + spec.scale_scale * normal.sample(&mut rng);
                    base * scale
                }
                BiclusterKind::ShiftScale => {
                    let base = spec.base_loc + spec.base_scale * normal.sample(&mut rng);
                    let scale = spec.scale_loc + spec.scale_scale * normal.sample(&mut rng);
                    let shift = spec.shift_loc + spec.shift_scale * normal.sample(&mut rng);
                    base * scale + shift
                }
            };
            for &j in &cols {
                let z: F = normal.sample(&mut rng);
                values[i * spec.n_cols + j] += row_value + spec.bicluster_noise[c] * z;
            }
        }
        biclusters.push((rows, cols));
    }

    let matrix = DenseMatrix::from_vec(spec.n_rows, spec.n_cols, values)?;
    let truth = GroundTruth::new(biclusters, BoolMatrix::new(spec.n_rows, spec.n_cols));
    Ok((matrix, truth))
}

/// Adds `magnitude` to each entry independently with probability `p_s` and
/// returns the spiked matrix with its mask. Spikes may land anywhere,
/// including inside planted blocks.
pub fn inject_spikes<F: Real>(
    m: &DenseMatrix<F>,
    p_s: F,
    magnitude: F,
    seed: u64,
) -> Result<(DenseMatrix<F>, BoolMatrix), SynthError> {
    if !(p_s >= F::zero() && p_s <= F::one()) {
        return Err(SynthError::BadProbability(
            p_s.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let p = p_s.to_f64().expect("probability fits f64");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = BoolMatrix::new(m.n_rows(), m.n_cols());
    let mut values = Vec::with_capacity(m.n_rows() * m.n_cols());
    for i in 0..m.n_rows() {
        for j in 0..m.n_cols() {
            let hit = rng.random::<f64>() < p;
            if hit {
                mask.set(i, j, true);
            }
            values.push(m.get(i, j) + if hit { magnitude } else { F::zero() });
        }
    }
    Ok((DenseMatrix::from_vec(m.n_rows(), m.n_cols(), values)?, mask))
}

/// One random row permutation and one random column permutation
/// (Fisher–Yates on the index vectors), remapping the ground truth and
/// spike mask consistently.
pub fn shuffle<F: Real>(
    m: &DenseMatrix<F>,
    truth: &GroundTruth,
    seed: u64,
) -> Result<(DenseMatrix<F>, GroundTruth), SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row_gather: Vec<usize> = (0..m.n_rows()).collect();
    row_gather.shuffle(&mut rng);
    let mut col_gather: Vec<usize> = (0..m.n_cols()).collect();
    col_gather.shuffle(&mut rng);

    // Convert gather order (new position -> old index) into the scatter
    // form (old index -> new position) used by the permute primitives.
    let mut row_perm = vec![0usize; m.n_rows()];
    for (new_pos, &old) in row_gather.iter().enumerate() {
        row_perm[old] = new_pos;
    }
    let mut col_perm = vec![0usize; m.n_cols()];
    for (new_pos, &old) in col_gather.iter().enumerate() {
        col_perm[old] = new_pos;
    }
    shuffle_with(m, truth, &row_perm, &col_perm)
}

/// Deterministic shuffle with explicit permutations in scatter form: the
/// entry at row `i` moves to row `row_perm[i]`. The identity permutation
/// leaves everything unchanged, which is the test hook for the seeded
/// variant.
pub fn shuffle_with<F: Real>(
    m: &DenseMatrix<F>,
    truth: &GroundTruth,
    row_perm: &[usize],
    col_perm: &[usize],
) -> Result<(DenseMatrix<F>, GroundTruth), SynthError> {
    validate_permutation(row_perm, m.n_rows())?;
    validate_permutation(col_perm, m.n_cols())?;
    Ok((
        m.permute(row_perm, col_perm)?,
        truth.permute(row_perm, col_perm)?,
    ))
}

/// Spike injection settings; the default magnitude of 6 matches the
/// benchmark's additive spike value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeSpec<F> {
    pub probability: F,
    pub magnitude: F,
}

impl<F: Real> SpikeSpec<F> {
    pub fn new(probability: F) -> Self {
        Self {
            probability,
            magnitude: real(6.0),
        }
    }
}

/// Full dataset build: generate, optionally inject spikes, shuffle when the
/// spec asks for it. Sub-stage seeds derive from `spec.seed` by stage-name
/// fan-out ("spikes", "shuffle").
pub fn build_dataset<F: Real>(
    spec: &BiclusterDataSpec<F>,
    spikes: Option<SpikeSpec<F>>,
) -> Result<(DenseMatrix<F>, GroundTruth), SynthError>
where
    StandardNormal: Distribution<F>,
{
    let (mut matrix, mut truth) = generate(spec)?;
    if let Some(spike) = spikes {
        let (spiked, mask) = inject_spikes(
            &matrix,
            spike.probability,
            spike.magnitude,
            fanout(spec.seed, "spikes"),
        )?;
        matrix = spiked;
        truth = truth.with_spike_mask(mask)?;
    }
    if spec.shuffle {
        let (shuffled, moved) = shuffle(&matrix, &truth, fanout(spec.seed, "shuffle"))?;
        matrix = shuffled;
        truth = moved;
    }
    Ok((matrix, truth))
}
