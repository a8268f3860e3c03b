//! Combining a validation query's answer with conditional statuses.

use crate::engine::Status;
use crate::query::ResultSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Valid,
    Violated,
    Inapplicable,
}

/// * any conditional `Violated`: `Violated`;
/// * conditionals present and all `NotApplicable`: nothing was triggered, so
///   a negative query answer is not a decision and gives `Inapplicable`;
///   a positive one still gives `Valid`;
/// * otherwise the query decides: positive is `Valid`, negative `Violated`.
///
/// A `SELECT` answer is positive when it has at least one row.
pub fn compose_verdict(query: &ResultSet, statuses: &[Status]) -> Verdict {
    if statuses.contains(&Status::Violated) {
        return Verdict::Violated;
    }
    let dormant = !statuses.is_empty() && statuses.iter().all(|s| *s == Status::NotApplicable);
    match (query.is_positive(), dormant) {
        (true, _) => Verdict::Valid,
        (false, true) => Verdict::Inapplicable,
        (false, false) => Verdict::Violated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use Status::*;

    const YES: ResultSet = ResultSet::Boolean(true);
    const NO: ResultSet = ResultSet::Boolean(false);

    #[test]
    fn brokerage_cases() {
        assert_eq!(compose_verdict(&YES, &[Fulfilled]), Verdict::Valid);
        assert_eq!(compose_verdict(&NO, &[Violated]), Verdict::Violated);
        assert_eq!(compose_verdict(&NO, &[NotApplicable]), Verdict::Inapplicable);
    }

    #[test]
    fn query_alone() {
        assert_eq!(compose_verdict(&YES, &[]), Verdict::Valid);
        assert_eq!(compose_verdict(&NO, &[]), Verdict::Violated);
        assert_eq!(compose_verdict(&NO, &[Fulfilled, NotApplicable]), Verdict::Violated);
        let empty = ResultSet::Solutions { vars: vec![], rows: vec![] };
        assert_eq!(compose_verdict(&empty, &[NotApplicable]), Verdict::Inapplicable);
        let one = ResultSet::Solutions { vars: vec![], rows: vec![vec![]] };
        assert_eq!(compose_verdict(&one, &[NotApplicable]), Verdict::Valid);
    }

    proptest! {
        #[test]
        fn violated_conditional_dominates(ask in any::<bool>(), mut s in prop::collection::vec(prop::sample::select(vec![NotApplicable, Fulfilled, Violated]), 0..6)) {
            let v = compose_verdict(&ResultSet::Boolean(ask), &s);
            prop_assert_eq!(v == Verdict::Violated, s.contains(&Violated) || (!ask && s.iter().any(|x| *x != NotApplicable)) || (!ask && s.is_empty()));
            // Only statuses as a multiset matter.
            s.reverse();
            prop_assert_eq!(compose_verdict(&ResultSet::Boolean(ask), &s), v);
            let valid_needs: Vec<_> = s.iter().filter(|x| **x == Violated).collect();
            if v == Verdict::Valid {
                prop_assert!(ask && valid_needs.is_empty());
            }
        }
    }
}
