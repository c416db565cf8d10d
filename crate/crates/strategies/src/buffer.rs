use indexmap::IndexMap;
use numkit::Tensor;
use rand::seq::index::sample;
use rand::Rng;
use synthlang::Utterance;

/// One retained sample.
#[derive(Clone, Debug, PartialEq)]
pub struct BufferEntry {
    pub utt: Utterance,
    /// Model logits recorded when the sample was stored.
    pub logits: Option<Tensor>,
}

/// Per-task rehearsal memory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayBuffer {
    tasks: IndexMap<String, Vec<BufferEntry>>,
}

/// Number of samples kept from a task of `n` samples.
pub fn retained_count(n: usize, ratio: f64) -> usize {
    ((ratio * n as f64).round() as usize).min(n)
}

impl ReplayBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps `round(ratio · |data|)` samples chosen uniformly without
    /// replacement, in their original order.
    pub fn retain(&mut self, task: &str, data: &[Utterance], ratio: f64, rng: &mut impl Rng) -> &mut Vec<BufferEntry> {
        let k = retained_count(data.len(), ratio);
        let mut idx = sample(rng, data.len(), k).into_vec();
        idx.sort_unstable();
        let entries = idx.into_iter().map(|i| BufferEntry { utt: data[i].clone(), logits: None }).collect();
        self.tasks.insert(task.to_string(), entries);
        self.tasks.get_mut(task).expect("just inserted")
    }

    pub fn insert(&mut self, task: &str, entries: Vec<BufferEntry>) {
        self.tasks.insert(task.to_string(), entries);
    }

    pub fn task(&self, task: &str) -> Option<&[BufferEntry]> {
        self.tasks.get(task).map(Vec::as_slice)
    }

    pub fn tasks(&self) -> impl Iterator<Item = (&str, &[BufferEntry])> {
        self.tasks.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.tasks.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries across tasks, in insertion order.
    pub fn entries(&self) -> impl Iterator<Item = &BufferEntry> {
        self.tasks.values().flatten()
    }

    /// `n` entries drawn uniformly without replacement (all of them if
    /// the buffer is smaller).
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<&BufferEntry> {
        let all: Vec<&BufferEntry> = self.entries().collect();
        let k = n.min(all.len());
        sample(rng, all.len(), k).into_iter().map(|i| all[i]).collect()
    }
}

/// One element of the training set for a stage.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainItem {
    pub utt: Utterance,
    /// Task the sample belongs to.
    pub source: String,
    pub replay: bool,
    /// Logits stored with a replayed sample.
    pub stored_logits: Option<Tensor>,
    /// Frozen-teacher logits, per distillation task.
    pub teacher_logits: Vec<(String, Tensor)>,
}

impl TrainItem {
    pub fn current(utt: Utterance, source: &str) -> Self {
        Self { utt, source: source.to_string(), replay: false, stored_logits: None, teacher_logits: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainPlan {
    pub task: String,
    pub items: Vec<TrainItem>,
}

impl TrainPlan {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Item count per source task, current task first.
    pub fn composition(&self) -> IndexMap<String, usize> {
        let mut out = IndexMap::new();
        out.insert(self.task.clone(), 0);
        for it in &self.items {
            *out.entry(it.source.clone()).or_insert(0) += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctcwer::TokenSeq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn utts(n: usize) -> Vec<Utterance> {
        (0..n)
            .map(|i| Utterance {
                id: format!("u{i}"),
                features: Tensor::full(&[1, 1], i as f64),
                transcript: TokenSeq { tokens: vec![2], lang: "a".into() },
            })
            .collect()
    }

    #[test]
    fn retains_rounded_fraction() {
        assert_eq!(retained_count(500, 0.1), 50);
        assert_eq!(retained_count(296, 0.1), 30);
        assert_eq!(retained_count(5, 1.0), 5);
        let mut b = ReplayBuffer::new();
        b.retain("a", &utts(296), 0.1, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(b.len(), 30);
    }

    #[test]
    fn reproducible_sampling() {
        let data = utts(100);
        let pick = |seed| {
            let mut b = ReplayBuffer::new();
            b.retain("a", &data, 0.2, &mut ChaCha8Rng::seed_from_u64(seed));
            b
        };
        assert_eq!(pick(3), pick(3));
        assert_ne!(pick(3), pick(4));
    }
}
