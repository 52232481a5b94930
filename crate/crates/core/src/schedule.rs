//! Ordered partitions of the tests into time slots.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::instance::Instance;
use crate::scalar::Scalar;

/// `T` slots of 0-based test indices. Empty slots are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    slots: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn new(slots: Vec<Vec<usize>>) -> Self {
        Schedule { slots }
    }

    pub fn slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    pub fn into_slots(self) -> Vec<Vec<usize>> {
        self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Slot index of every test, or `None` for tests that are not scheduled.
    pub fn slot_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (t, slot) in self.slots.iter().enumerate() {
            for &j in slot {
                if j < n {
                    out[j] = Some(t);
                }
            }
        }
        out
    }

    /// Same schedule with every slot sorted ascending.
    pub fn canonical(&self) -> Schedule {
        let mut slots = self.slots.clone();
        for slot in &mut slots {
            slot.sort_unstable();
        }
        Schedule { slots }
    }

    /// Number of non-empty slots.
    pub fn used_slots(&self) -> usize {
        self.slots.iter().filter(|s| !s.is_empty()).count()
    }
}

impl fmt::Display for Schedule {
    /// 1-based, e.g. `({2}, {1, 3})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (t, slot) in self.slots.iter().enumerate() {
            if t > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (i, j) in slot.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", j + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

/// One reason a schedule is not a valid ordered partition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected {expected} slots, found {found}")]
    SlotCount { expected: usize, found: usize },
    #[error("slot {slot} references unknown test index {test}")]
    UnknownTest { slot: usize, test: usize },
    #[error("test {test} appears in slots {first} and {second}")]
    Duplicate {
        test: usize,
        first: usize,
        second: usize,
    },
    #[error("test {test} is not scheduled")]
    Missing { test: usize },
    #[error("slot {slot} holds {size} tests but capacity is {capacity}")]
    Capacity {
        slot: usize,
        size: usize,
        capacity: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid schedule: {} violation(s), first: {}", .0.len(), .0[0])]
pub struct InvalidSchedule(pub Vec<Violation>);

/// Checks disjointness, coverage and slot capacities; reports every violation.
pub fn validate<P: Scalar>(instance: &Instance<P>, schedule: &Schedule) -> Result<(), Vec<Violation>> {
    let n = instance.n();
    let mut violations = Vec::new();
    if schedule.len() != instance.deadline() {
        violations.push(Violation::SlotCount {
            expected: instance.deadline(),
            found: schedule.len(),
        });
    }
    let mut seen: Vec<Option<usize>> = vec![None; n];
    for (t, slot) in schedule.slots().iter().enumerate() {
        if slot.len() > instance.machines() {
            violations.push(Violation::Capacity {
                slot: t,
                size: slot.len(),
                capacity: instance.machines(),
            });
        }
        for &j in slot {
            if j >= n {
                violations.push(Violation::UnknownTest { slot: t, test: j });
                continue;
            }
            match seen[j] {
                Some(first) => violations.push(Violation::Duplicate {
                    test: j,
                    first,
                    second: t,
                }),
                None => seen[j] = Some(t),
            }
        }
    }
    for (test, s) in seen.iter().enumerate() {
        if s.is_none() {
            violations.push(Violation::Missing { test });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub(crate) fn ensure_valid<P: Scalar>(
    instance: &Instance<P>,
    schedule: &Schedule,
) -> Result<(), InvalidSchedule> {
    validate(instance, schedule).map_err(InvalidSchedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use alloc::string::ToString;

    fn inst() -> Instance<Rational> {
        Instance::testing(2, 2, vec![1, 2, 3], vec![ratio(1, 2); 3]).unwrap()
    }

    #[test]
    fn accepts_a_partition() {
        let s = Schedule::new(vec![vec![1], vec![0, 2]]);
        assert_eq!(validate(&inst(), &s), Ok(()));
        assert_eq!(s.to_string(), "({2}, {1, 3})");
    }

    #[test]
    fn reports_duplicates_and_missing_tests() {
        let s = Schedule::new(vec![vec![0, 1], vec![1]]);
        let v = validate(&inst(), &s).unwrap_err();
        assert!(v.contains(&Violation::Duplicate {
            test: 1,
            first: 0,
            second: 1
        }));
        assert!(v.contains(&Violation::Missing { test: 2 }));
    }

    #[test]
    fn reports_capacity() {
        let s = Schedule::new(vec![vec![0, 1, 2], vec![]]);
        let v = validate(&inst(), &s).unwrap_err();
        assert_eq!(
            v,
            vec![Violation::Capacity {
                slot: 0,
                size: 3,
                capacity: 2
            }]
        );
    }

    #[test]
    fn reports_slot_count_and_unknown_tests() {
        let s = Schedule::new(vec![vec![0, 1, 7]]);
        let v = validate(&inst(), &s).unwrap_err();
        assert!(v.contains(&Violation::SlotCount {
            expected: 2,
            found: 1
        }));
        assert!(v.contains(&Violation::UnknownTest { slot: 0, test: 7 }));
    }
}
