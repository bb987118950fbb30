use super::attribute::UpdateClass;
use super::SyncError;
use crate::simcore::VirtualTime;

/// Turns an update class into a refresh period that stretches as the
/// neighborhood's network metrics worsen:
/// `base(class) × (1 + median metric / reference metric)`, rounded up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodPolicy {
    pub aggressive: u64,
    pub moderate: u64,
    pub light: u64,
    pub reference_metric: f64,
}

impl Default for PeriodPolicy {
    fn default() -> Self {
        PeriodPolicy {
            aggressive: 10,
            moderate: 50,
            light: 250,
            reference_metric: 100.0,
        }
    }
}

impl PeriodPolicy {
    pub fn base(&self, class: UpdateClass) -> u64 {
        match class {
            UpdateClass::Aggressive => self.aggressive,
            UpdateClass::Moderate => self.moderate,
            UpdateClass::Light => self.light,
        }
    }

    pub fn period(&self, class: UpdateClass, metrics: &[f64]) -> Result<VirtualTime, SyncError> {
        let m = median(metrics).ok_or(SyncError::NoMetrics)?;
        let scaled = self.base(class) as f64 * (1.0 + m / self.reference_metric);
        Ok(VirtualTime(scaled.ceil() as u64))
    }
}

/// [`PeriodPolicy::period`] under the default policy.
pub fn update_period(class: UpdateClass, metrics: &[f64]) -> Result<VirtualTime, SyncError> {
    PeriodPolicy::default().period(class, metrics)
}

fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_metric_gives_base() {
        assert_eq!(update_period(UpdateClass::Aggressive, &[0.0]), Ok(VirtualTime(10)));
        assert_eq!(update_period(UpdateClass::Moderate, &[0.0, 0.0]), Ok(VirtualTime(50)));
        assert_eq!(
            update_period(UpdateClass::Light, &[0.0, 0.0, 9.0]),
            Ok(VirtualTime(250))
        );
        assert_eq!(update_period(UpdateClass::Light, &[]), Err(SyncError::NoMetrics));
    }

    #[test]
    fn median_rule() {
        // median of {10, 300, 50} is 50 → 10 × 1.5
        assert_eq!(
            update_period(UpdateClass::Aggressive, &[10.0, 300.0, 50.0]),
            Ok(VirtualTime(15))
        );
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), Some(2.5));
    }

    fn metrics() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1000.0, 1..20)
    }

    proptest! {
        #[test]
        fn classes_are_ordered(m in metrics()) {
            let p = |c| update_period(c, &m).unwrap();
            prop_assert!(p(UpdateClass::Aggressive) < p(UpdateClass::Moderate));
            prop_assert!(p(UpdateClass::Moderate) < p(UpdateClass::Light));
        }

        #[test]
        fn doubling_metrics_never_shortens(m in metrics()) {
            let doubled: Vec<f64> = m.iter().map(|x| x * 2.0).collect();
            for c in UpdateClass::ALL {
                let before = update_period(c, &m).unwrap();
                let after = update_period(c, &doubled).unwrap();
                prop_assert!(after >= before);
            }
        }
    }
}
