use ctcwer::{Granularity, TokenSeq, WordBoundaries};
use numkit::Tensor;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SynthError};
use crate::seed::derive_seed;

pub const SEPARATOR: u32 = 1;

/// Layout of the global token space and the shared prototype generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    /// Tokens any language may draw on.
    pub shared_pool: usize,
    /// Width of each language's private block.
    pub private_stride: usize,
    pub n_languages: usize,
    pub d_in: usize,
    pub seed: u64,
}

impl Universe {
    /// Number of token ids including blank and the separator.
    pub fn size(&self) -> usize {
        2 + self.shared_pool + self.n_languages * self.private_stride
    }

    pub fn separator(&self) -> u32 {
        SEPARATOR
    }

    fn shared_token(&self, i: usize) -> u32 {
        (2 + i) as u32
    }

    fn private_token(&self, lang_index: usize, i: usize) -> u32 {
        (2 + self.shared_pool + lang_index * self.private_stride + i) as u32
    }

    /// Language-independent prototype of a token.
    fn base_prototype(&self, token: u32) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &format!("proto/{token}")));
        (0..self.d_in).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self { train: 2000, val: 200, test: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanguageConfig {
    pub id: String,
    /// Position of this language's private block in the universe.
    pub index: usize,
    /// Non-separator tokens in the language.
    pub vocab_size: usize,
    /// Fraction of `vocab_size` drawn from the shared pool.
    pub overlap: f64,
    pub frames_per_token: (usize, usize),
    pub tokens_per_utterance: (usize, usize),
    /// Duration cap in frames.
    pub max_frames: usize,
    pub noise_sigma: f64,
    /// Per-language perturbation of shared prototypes.
    pub accent: f64,
    /// Spread of bigram log-weights; larger means more predictable text.
    pub bigram_sharpness: f64,
    pub min_prototype_distance: f64,
    pub splits: SplitSizes,
    pub granularity: Granularity,
}

impl LanguageConfig {
    pub fn new(id: impl Into<String>, index: usize) -> Self {
        Self {
            id: id.into(),
            index,
            vocab_size: 8,
            overlap: 0.25,
            frames_per_token: (2, 3),
            tokens_per_utterance: (3, 8),
            max_frames: 40,
            noise_sigma: 0.5,
            accent: 0.3,
            bigram_sharpness: 1.0,
            min_prototype_distance: 1.0,
            splits: SplitSizes::default(),
            granularity: Granularity::Word,
        }
    }
}

/// One generated language: vocabulary, emission model and split sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub id: String,
    pub index: usize,
    pub seed: u64,
    pub d_in: usize,
    pub universe_size: usize,
    pub granularity: Granularity,
    /// Sorted token ids; includes the separator for word languages.
    pub vocab: Vec<u32>,
    pub shared_count: usize,
    pub private_count: usize,
    /// Prototype per entry of `vocab`.
    pub prototypes: Vec<Vec<f64>>,
    /// Row-stochastic bigram table indexed like `vocab`.
    pub transitions: Vec<Vec<f64>>,
    pub start: Vec<f64>,
    pub frames_per_token: (usize, usize),
    pub tokens_per_utterance: (usize, usize),
    pub max_frames: usize,
    pub noise_sigma: f64,
    pub splits: SplitSizes,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Utterance {
    pub id: String,
    pub features: Tensor,
    pub transcript: TokenSeq,
}

impl Utterance {
    pub fn lang(&self) -> &str {
        &self.transcript.lang
    }

    pub fn frames(&self) -> usize {
        self.features.rows()
    }
}

fn validate(universe: &Universe, cfg: &LanguageConfig) -> Result<usize> {
    let bad = |m: String| Err(SynthError::Invalid(format!("{}: {m}", cfg.id)));
    if !(0.0..=1.0).contains(&cfg.overlap) {
        return bad(format!("overlap {} outside [0, 1]", cfg.overlap));
    }
    if cfg.vocab_size == 0 {
        return bad("empty vocabulary".into());
    }
    let shared = (cfg.overlap * cfg.vocab_size as f64).round() as usize;
    if shared > universe.shared_pool {
        return bad(format!("needs {shared} shared tokens, pool has {}", universe.shared_pool));
    }
    if cfg.vocab_size - shared > universe.private_stride {
        return bad(format!("needs {} private tokens, stride is {}", cfg.vocab_size - shared, universe.private_stride));
    }
    if cfg.index >= universe.n_languages {
        return bad(format!("index {} but universe holds {} languages", cfg.index, universe.n_languages));
    }
    let (fmin, fmax) = cfg.frames_per_token;
    if fmin == 0 || fmin > fmax {
        return bad(format!("frames per token range {:?}", cfg.frames_per_token));
    }
    let (tmin, tmax) = cfg.tokens_per_utterance;
    if tmin == 0 || tmin > tmax {
        return bad(format!("tokens per utterance range {:?}", cfg.tokens_per_utterance));
    }
    if cfg.max_frames < fmax {
        return bad(format!("duration cap {} below one token ({fmax} frames)", cfg.max_frames));
    }
    if cfg.splits.train == 0 || cfg.splits.val == 0 || cfg.splits.test == 0 {
        return bad("split sizes must be positive".into());
    }
    if cfg.noise_sigma < 0.0 {
        return bad("negative noise".into());
    }
    Ok(shared)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Builds a language. Pure in `(universe, config, seed)`.
pub fn gen_language(universe: &Universe, cfg: &LanguageConfig, seed: u64) -> Result<TaskSpec> {
    let shared = validate(universe, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("lang/{}", cfg.id)));

    let mut tokens: Vec<u32> = sample(&mut rng, universe.shared_pool, shared)
        .into_iter()
        .map(|i| universe.shared_token(i))
        .collect();
    let private = cfg.vocab_size - shared;
    tokens.extend((0..private).map(|i| universe.private_token(cfg.index, i)));
    if cfg.granularity == Granularity::Word {
        tokens.push(SEPARATOR);
    }
    tokens.sort_unstable();

    let prototypes: Vec<Vec<f64>> = tokens
        .iter()
        .map(|&t| {
            universe
                .base_prototype(t)
                .into_iter()
                .map(|v| v + cfg.accent * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let mut min_d = f64::INFINITY;
    for i in 0..prototypes.len() {
        for j in i + 1..prototypes.len() {
            min_d = min_d.min(distance(&prototypes[i], &prototypes[j]));
        }
    }
    if min_d < cfg.min_prototype_distance {
        return Err(SynthError::PrototypesTooClose {
            lang: cfg.id.clone(),
            distance: min_d,
            threshold: cfg.min_prototype_distance,
        });
    }

    let n = tokens.len();
    let mut transitions = vec![vec![0.0; n]; n];
    for (i, row) in transitions.iter_mut().enumerate() {
        for (j, w) in row.iter_mut().enumerate() {
            let g: f64 = rng.sample(StandardNormal);
            // no self-loops: a held prototype cannot mark a token boundary
            if i != j {
                *w = (cfg.bigram_sharpness * g).exp();
            }
        }
        let z: f64 = row.iter().sum();
        row.iter_mut().for_each(|w| *w /= z);
    }
    let start: Vec<f64> = {
        let raw: Vec<f64> = tokens.iter().map(|&t| if t == SEPARATOR { 0.0 } else { 1.0 }).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / z).collect()
    };

    Ok(TaskSpec {
        id: cfg.id.clone(),
        index: cfg.index,
        seed,
        d_in: universe.d_in,
        universe_size: universe.size(),
        granularity: cfg.granularity,
        vocab: tokens,
        shared_count: shared,
        private_count: private,
        prototypes,
        transitions,
        start,
        frames_per_token: cfg.frames_per_token,
        tokens_per_utterance: cfg.tokens_per_utterance,
        max_frames: cfg.max_frames,
        noise_sigma: cfg.noise_sigma,
        splits: cfg.splits,
    })
}

fn draw(weights: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Draws one utterance: a bigram transcript and its noisy frame features.
///
/// Tokens stop being added once the next one could overrun the duration
/// cap, and a trailing separator is dropped.
pub fn sample_utterance(task: &TaskSpec, rng: &mut impl Rng) -> (Tensor, TokenSeq) {
    let (tmin, tmax) = task.tokens_per_utterance;
    let (fmin, fmax) = task.frames_per_token;
    let target_len = rng.gen_range(tmin..=tmax);
    let mut idx = Vec::with_capacity(target_len);
    let mut frames = 0;
    let mut cur = draw(&task.start, rng);
    loop {
        if frames + fmax > task.max_frames {
            break;
        }
        idx.push(cur);
        frames += fmax;
        if idx.len() == target_len {
            break;
        }
        cur = draw(&task.transitions[cur], rng);
    }
    while idx.len() > 1 && task.vocab[*idx.last().unwrap()] == SEPARATOR {
        idx.pop();
    }

    let mut data = Vec::new();
    let mut n_frames = 0;
    for &i in &idx {
        let k = rng.gen_range(fmin..=fmax);
        for _ in 0..k {
            data.extend(task.prototypes[i].iter().map(|&p| p + task.noise_sigma * rng.sample::<f64, _>(StandardNormal)));
        }
        n_frames += k;
    }
    let features = Tensor::matrix(n_frames, task.d_in, data).expect("consistent frame buffer");
    let tokens = idx.iter().map(|&i| task.vocab[i]).collect();
    (features, TokenSeq { tokens, lang: task.id.clone() })
}

impl TaskSpec {
    pub fn boundaries(&self) -> WordBoundaries {
        match self.granularity {
            Granularity::Word => WordBoundaries::Separator(SEPARATOR),
            Granularity::Char => WordBoundaries::None,
        }
    }

    pub fn split_size(&self, split: Split) -> usize {
        match split {
            Split::Train => self.splits.train,
            Split::Val => self.splits.val,
            Split::Test => self.splits.test,
        }
    }

    /// Generates a whole split. Ids are `{lang}-{split}-{index}`.
    pub fn generate(&self, split: Split) -> Vec<Utterance> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &format!("data/{}/{}", self.id, split.name())));
        (0..self.split_size(split))
            .map(|i| {
                let (features, transcript) = sample_utterance(self, &mut rng);
                Utterance { id: format!("{}-{}-{i:05}", self.id, split.name()), features, transcript }
            })
            .collect()
    }

    pub fn contains_token(&self, t: u32) -> bool {
        self.vocab.binary_search(&t).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn universe() -> Universe {
        Universe { shared_pool: 8, private_stride: 8, n_languages: 4, d_in: 12, seed: 11 }
    }

    #[test]
    fn overlap_zero_is_disjoint() {
        let u = universe();
        let mut a = LanguageConfig::new("a", 0);
        a.overlap = 0.0;
        let mut b = LanguageConfig::new("b", 1);
        b.overlap = 0.0;
        b.granularity = Granularity::Char;
        let (ta, tb) = (gen_language(&u, &a, 1).unwrap(), gen_language(&u, &b, 1).unwrap());
        assert!(ta.vocab.iter().all(|t| !tb.vocab.contains(t)));
    }

    #[test]
    fn full_overlap_same_pool_is_identical() {
        let u = Universe { shared_pool: 8, ..universe() };
        let mut a = LanguageConfig::new("a", 0);
        a.overlap = 1.0;
        let mut b = LanguageConfig::new("b", 1);
        b.overlap = 1.0;
        let (ta, tb) = (gen_language(&u, &a, 1).unwrap(), gen_language(&u, &b, 2).unwrap());
        assert_eq!(ta.vocab, tb.vocab);
    }

    #[test]
    fn same_seed_same_task() {
        let u = universe();
        let c = LanguageConfig::new("a", 2);
        assert_eq!(gen_language(&u, &c, 5).unwrap(), gen_language(&u, &c, 5).unwrap());
        assert_ne!(gen_language(&u, &c, 5).unwrap(), gen_language(&u, &c, 6).unwrap());
    }

    #[test]
    fn low_dimension_rejected() {
        let u = Universe { d_in: 1, ..universe() };
        let c = LanguageConfig::new("a", 0);
        assert!(matches!(gen_language(&u, &c, 1), Err(SynthError::PrototypesTooClose { .. })));
    }

    #[test]
    fn transitions_are_stochastic() {
        let t = gen_language(&universe(), &LanguageConfig::new("a", 0), 3).unwrap();
        for row in &t.transitions {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!((t.start.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_features_repeat_prototypes() {
        let mut c = LanguageConfig::new("a", 0);
        c.noise_sigma = 0.0;
        c.frames_per_token = (2, 2);
        let t = gen_language(&universe(), &c, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (f, y) = sample_utterance(&t, &mut rng);
        assert_eq!(f.rows(), 2 * y.len());
        for (k, tok) in y.tokens.iter().enumerate() {
            let p = &t.prototypes[t.vocab.binary_search(tok).unwrap()];
            assert_eq!(f.row_slice(2 * k), p.as_slice());
            assert_eq!(f.row_slice(2 * k + 1), p.as_slice());
        }
    }

    #[test]
    fn invalid_configs() {
        let u = universe();
        let mut c = LanguageConfig::new("a", 0);
        c.overlap = 1.5;
        assert!(gen_language(&u, &c, 1).is_err());
        let mut c = LanguageConfig::new("a", 9);
        c.overlap = 0.0;
        assert!(gen_language(&u, &c, 1).is_err());
        let mut c = LanguageConfig::new("a", 0);
        c.max_frames = 1;
        assert!(gen_language(&u, &c, 1).is_err());
    }
}
