//! Images of shifts under symbol-class codings.

use std::collections::{BTreeMap, HashMap};

use super::alphabet::InvolutiveAlphabet;
use super::shift::{Presentation, Provenance, ShiftSpace};
use crate::error::{Error, Result};

/// A partition of an involutive alphabet whose classes are permuted by the involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPartition {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl SymbolPartition {
    pub fn new(alphabet: &InvolutiveAlphabet, classes: Vec<Vec<u32>>) -> Result<Self> {
        let mut class_of = vec![u32::MAX; alphabet.len()];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::IncompatiblePartition("empty class".into()));
            }
            for &s in members {
                let slot = class_of
                    .get_mut(s as usize)
                    .ok_or_else(|| Error::IncompatiblePartition(format!("symbol {s} out of range")))?;
                if *slot != u32::MAX {
                    return Err(Error::IncompatiblePartition(format!(
                        "{} appears in two classes",
                        alphabet.label(s)
                    )));
                }
                *slot = c as u32;
            }
        }
        if let Some(s) = class_of.iter().position(|&c| c == u32::MAX) {
            return Err(Error::IncompatiblePartition(format!(
                "{} is in no class",
                alphabet.label(s as u32)
            )));
        }
        for members in &classes {
            let image = class_of[alphabet.inverse(members[0]) as usize];
            if members.iter().any(|&s| class_of[alphabet.inverse(s) as usize] != image) {
                return Err(Error::IncompatiblePartition(format!(
                    "inverses of class {{{}}} are split",
                    members.iter().map(|&s| alphabet.label(s)).collect::<Vec<_>>().join(",")
                )));
            }
        }
        Ok(SymbolPartition { class_of, classes })
    }

    pub fn from_labels(alphabet: &InvolutiveAlphabet, classes: &[Vec<String>]) -> Result<Self> {
        let classes = classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| {
                        alphabet
                            .index_of(l)
                            .ok_or_else(|| Error::IncompatiblePartition(format!("unknown symbol {l}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SymbolPartition::new(alphabet, classes)
    }

    pub fn identity(alphabet: &InvolutiveAlphabet) -> Self {
        SymbolPartition::new(alphabet, (0..alphabet.len() as u32).map(|s| vec![s]).collect())
            .expect("singletons are compatible")
    }

    pub fn class_of(&self, s: u32) -> u32 {
        self.class_of[s as usize]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn quotient_alphabet(&self, alphabet: &InvolutiveAlphabet) -> InvolutiveAlphabet {
        let labels = self
            .classes
            .iter()
            .map(|c| {
                if c.len() == 1 {
                    alphabet.label(c[0]).to_string()
                } else {
                    format!("[{}]", c.iter().map(|&s| alphabet.label(s)).collect::<String>())
                }
            })
            .collect();
        let inverse = self
            .classes
            .iter()
            .map(|c| self.class_of(alphabet.inverse(c[0])))
            .collect();
        InvolutiveAlphabet::new(labels, inverse).expect("compatible partitions induce an involution")
    }
}

/// The image shift under the symbol coding, as a deterministic presentation
/// obtained by the subset construction from the set of all states.
pub fn quotient_coding(shift: &ShiftSpace, partition: &SymbolPartition) -> Result<ShiftSpace> {
    if partition.class_of.len() != shift.alphabet().len() {
        return Err(Error::IncompatiblePartition("partition is for another alphabet".into()));
    }
    let alphabet = partition.quotient_alphabet(shift.alphabet());
    let all: Vec<u32> = (0..shift.state_count() as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(all.clone(), 0)]);
    let mut states = vec![all];
    let mut transitions: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let mut by_class: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &i in &states[k] {
            for &(j, l) in shift.transitions(i as usize) {
                by_class.entry(partition.class_of(l)).or_default().push(j);
            }
        }
        let mut out = Vec::new();
        for (c, mut targets) in by_class {
            targets.sort();
            targets.dedup();
            let next = states.len() as u32;
            let id = *index.entry(targets.clone()).or_insert_with(|| {
                states.push(targets);
                next
            });
            out.push((id, c));
        }
        transitions.push(out);
        k += 1;
    }
    ShiftSpace::from_parts(
        alphabet,
        Presentation::Deterministic,
        states,
        transitions,
        Provenance::Quotient,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::examples::{build_example, ExampleName};
    use crate::symbolic::entropy::sft_entropy;
    use crate::symbolic::shift::local_geodesic_shift;
    use num_bigint::BigUint;

    fn rose_shift() -> ShiftSpace {
        let g = build_example(&ExampleName::Tree(2)).unwrap().cover.base().clone();
        local_geodesic_shift(&g).unwrap()
    }

    #[test]
    fn single_class_has_zero_entropy() {
        let shift = rose_shift();
        let p = SymbolPartition::new(shift.alphabet(), vec![vec![0, 1, 2, 3]]).unwrap();
        let q = quotient_coding(&shift, &p).unwrap();
        assert_eq!(q.state_count(), 1);
        let b = sft_entropy(&q).unwrap();
        assert!(b.exact);
        assert_eq!(b.lower, 0.0);
        assert_eq!(q.word_count(7), BigUint::from(1u32));
    }

    #[test]
    fn identity_partition_preserves_language() {
        let shift = rose_shift();
        let q = quotient_coding(&shift, &SymbolPartition::identity(shift.alphabet())).unwrap();
        for n in 1..=6 {
            assert_eq!(q.word_count(n), shift.word_count(n));
            assert_eq!(q.words(n), shift.words(n));
        }
    }

    #[test]
    fn generator_classes_give_full_two_shift() {
        let shift = rose_shift();
        let p = SymbolPartition::new(shift.alphabet(), vec![vec![0, 1], vec![2, 3]]).unwrap();
        let q = quotient_coding(&shift, &p).unwrap();
        for n in 1..=8 {
            assert_eq!(q.word_count(n), BigUint::from(1u32 << n));
        }
        let b = sft_entropy(&q).unwrap();
        assert!(b.exact);
        assert_eq!(b.radius_lower, 2.0);
    }

    #[test]
    fn incompatible_partition_rejected() {
        let shift = rose_shift();
        // {a1, a2}, {A1}, {A2}: inverses of the first class are split
        let err = SymbolPartition::new(shift.alphabet(), vec![vec![0, 2], vec![1], vec![3]]).unwrap_err();
        assert!(matches!(err, Error::IncompatiblePartition(_)));
        assert!(SymbolPartition::new(shift.alphabet(), vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn labels_resolve() {
        let shift = rose_shift();
        let p = SymbolPartition::from_labels(
            shift.alphabet(),
            &[vec!["a1".into(), "A1".into(), "a2".into(), "A2".into()]],
        )
        .unwrap();
        assert_eq!(p.class_count(), 1);
    }
}
