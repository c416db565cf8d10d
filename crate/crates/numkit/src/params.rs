use indexmap::IndexMap;

use crate::error::{NumError, Result};
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub value: Tensor,
    pub frozen: bool,
}

/// Ordered, uniquely named parameters with gradient slots.
///
/// Iteration order is insertion order; flat gradient vectors follow it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamStore {
    entries: IndexMap<String, Param>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Tensor) -> Result<()> {
        let name = name.into();
        if self.entries.contains_key(&name) {
            return Err(NumError::DuplicateParam(name));
        }
        self.entries.insert(name, Param { value: value.clone_values(), frozen: false });
        Ok(())
    }

    pub fn remove(&mut self, name: &str) -> Result<Param> {
        self.entries.shift_remove(name).ok_or_else(|| NumError::UnknownParam(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn entry(&self, name: &str) -> Result<(usize, &Param)> {
        self.entries
            .get_full(name)
            .map(|(i, _, p)| (i, p))
            .ok_or_else(|| NumError::UnknownParam(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Result<&Param> {
        self.entries.get(name).ok_or_else(|| NumError::UnknownParam(name.to_string()))
    }

    pub fn get_mut(&mut self, name: &str) -> Result<&mut Param> {
        self.entries.get_mut(name).ok_or_else(|| NumError::UnknownParam(name.to_string()))
    }

    pub fn value(&self, name: &str) -> Result<&Tensor> {
        Ok(&self.get(name)?.value)
    }

    pub fn set_frozen(&mut self, name: &str, frozen: bool) -> Result<()> {
        self.get_mut(name)?.frozen = frozen;
        Ok(())
    }

    pub fn freeze_all(&mut self) {
        self.entries.values_mut().for_each(|p| p.frozen = true);
    }

    pub fn unfreeze_all(&mut self) {
        self.entries.values_mut().for_each(|p| p.frozen = false);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Param)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&str, &mut Param)> {
        self.entries.iter_mut().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn trainable(&self) -> impl Iterator<Item = (&str, &Param)> {
        self.iter().filter(|(_, p)| !p.frozen)
    }

    pub fn num_trainable(&self) -> usize {
        self.trainable().map(|(_, p)| p.value.len()).sum()
    }

    pub(crate) fn accumulate_grad(&mut self, idx: usize, g: &[f64]) -> Result<()> {
        let (name, p) = self
            .entries
            .get_index_mut(idx)
            .ok_or_else(|| NumError::Invalid(format!("parameter index {idx} out of range")))?;
        if p.value.len() != g.len() {
            return Err(NumError::Invalid(format!(
                "gradient for `{name}` has {} values, parameter has {}",
                g.len(),
                p.value.len()
            )));
        }
        p.value.grad_mut().iter_mut().zip(g).for_each(|(a, b)| *a += b);
        Ok(())
    }

    pub fn zero_grads(&mut self) {
        self.entries.values_mut().for_each(|p| p.value.zero_grad());
    }

    /// Concatenated gradients of trainable parameters (zeros where unset).
    pub fn flat_grads(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_trainable());
        for (_, p) in self.trainable() {
            match p.value.grad() {
                Some(g) => out.extend_from_slice(g),
                None => out.extend(std::iter::repeat_n(0.0, p.value.len())),
            }
        }
        out
    }

    /// Inverse of [`ParamStore::flat_grads`].
    pub fn set_flat_grads(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.num_trainable() {
            return Err(NumError::Invalid(format!(
                "flat gradient has {} values, store has {} trainable",
                flat.len(),
                self.num_trainable()
            )));
        }
        let mut off = 0;
        for p in self.entries.values_mut().filter(|p| !p.frozen) {
            let n = p.value.len();
            p.value.grad_mut().copy_from_slice(&flat[off..off + n]);
            off += n;
        }
        Ok(())
    }
}
