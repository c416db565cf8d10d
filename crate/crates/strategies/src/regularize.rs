use indexmap::IndexMap;
use numkit::{ParamStore, Tape, Tensor, Var};

use crate::error::{Result, StrategyError};

/// Per-parameter importance `Ω` and the anchor `θ*` it protects.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ImportanceMap {
    pub omega: IndexMap<String, Tensor>,
    pub anchor: IndexMap<String, Tensor>,
    /// Number of tasks folded in so far.
    pub tasks: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImportanceRule {
    /// Mean squared gradient (diagonal empirical Fisher).
    SquaredGrad,
    /// Mean absolute gradient.
    AbsGrad,
}

/// Averages `rule(∂objective/∂θ)` over `samples` for every trainable
/// parameter of `params`.
///
/// `objective` must read parameters from `params` (gradients are routed
/// by store position into a scratch copy).
pub fn estimate_importance<T>(
    params: &ParamStore,
    samples: &[T],
    rule: ImportanceRule,
    objective: impl Fn(&mut Tape, &T) -> Result<Var>,
) -> Result<IndexMap<String, Tensor>> {
    let mut scratch = params.clone();
    let store = &mut scratch;
    let mut acc: IndexMap<String, Tensor> =
        store.trainable().map(|(n, p)| (n.to_string(), Tensor::zeros(p.value.shape()))).collect();
    for s in samples {
        store.zero_grads();
        let mut tape = Tape::new();
        let out = objective(&mut tape, s)?;
        tape.backward(out, store)?;
        for (name, a) in acc.iter_mut() {
            let Some(g) = store.value(name)?.grad() else { continue };
            for (x, &gi) in a.data_mut().iter_mut().zip(g) {
                *x += match rule {
                    ImportanceRule::SquaredGrad => gi * gi,
                    ImportanceRule::AbsGrad => gi.abs(),
                };
            }
        }
    }
    let n = samples.len().max(1) as f64;
    for a in acc.values_mut() {
        a.data_mut().iter_mut().for_each(|x| *x /= n);
    }
    Ok(acc)
}

impl ImportanceMap {
    /// Folds in a new estimate, `Ω ← α·Ω_old + (1 − α)·Ω_new`, and moves
    /// the anchor to the store's current values.
    ///
    /// Parameters that grew since the last update are zero-padded; new
    /// parameters start from `Ω_old = 0`.
    pub fn update(&mut self, fresh: IndexMap<String, Tensor>, alpha: f64, store: &ParamStore) -> Result<()> {
        let mut omega = IndexMap::with_capacity(fresh.len());
        for (name, new) in fresh {
            let old = match self.omega.get(&name) {
                Some(o) => o.pad_to(new.shape())?,
                None => Tensor::zeros(new.shape()),
            };
            omega.insert(name, old.zip_map(&new, |o, n| alpha * o + (1.0 - alpha) * n));
        }
        // importance of parameters that were not trainable this time is kept
        for (name, o) in &self.omega {
            if !omega.contains_key(name) {
                omega.insert(name.clone(), o.clone());
            }
        }
        self.anchor = omega
            .keys()
            .filter_map(|n| store.value(n).ok().map(|v| (n.clone(), v.clone_values())))
            .collect();
        self.omega = omega;
        self.tasks += 1;
        Ok(())
    }

    /// Records `(λ/2)·Σ Ω(θ − θ*)²` over trainable parameters. Rows or
    /// columns added after the anchor was taken are not penalized.
    pub fn penalty(&self, tape: &mut Tape, store: &ParamStore, lambda: f64) -> Result<Option<Var>> {
        let mut total: Option<Var> = None;
        for (name, omega) in &self.omega {
            let Ok(p) = store.get(name) else { continue };
            if p.frozen {
                continue;
            }
            let anchor = self
                .anchor
                .get(name)
                .ok_or_else(|| StrategyError::State(format!("no anchor for `{name}`")))?;
            let mut theta = tape.param(store, name)?;
            let (cur, want) = (p.value.shape().to_vec(), anchor.shape().to_vec());
            if cur != want {
                if cur.len() != 2 || want.len() != 2 || cur[0] < want[0] || cur[1] < want[1] {
                    return Err(StrategyError::State(format!("`{name}` shrank from {want:?} to {cur:?}")));
                }
                if cur[0] != want[0] {
                    theta = tape.narrow(theta, 0, 0, want[0])?;
                }
                if cur[1] != want[1] {
                    theta = tape.narrow(theta, 1, 0, want[1])?;
                }
            }
            let a = tape.constant(anchor.clone_values());
            let w = tape.constant(omega.clone_values());
            let diff = tape.sub(theta, a)?;
            let sq = tape.square(diff);
            let weighted = tape.mul(sq, w)?;
            let s = tape.sum(weighted);
            total = Some(match total {
                None => s,
                Some(t) => tape.add(t, s)?,
            });
        }
        Ok(total.map(|t| tape.scale(t, lambda / 2.0)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.omega.values().all(|o| o.data().iter().all(|&x| x >= 0.0))
    }
}
