use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::math;

use super::{FockError, FockVector, ModeLabel, PureState};

/// One detector and the modes feeding it.
///
/// A tap `(mode, ratio)` routes the given fraction of that mode's photons
/// to this detector; a balanced fan-out of one mode onto two detectors is
/// two taps of ratio 1/2. Non-number-resolving detectors may require at
/// most one count.
#[derive(Debug, Clone)]
pub struct Detector {
    pub name: String,
    pub taps: Vec<(ModeLabel, f64)>,
    pub number_resolving: bool,
    pub required: u32,
}

/// Detector layout plus the coincidence pattern it asks for.
///
/// Every mode feeds at most one detector tree, the splitting ratios
/// tapping a mode sum to one, and modes that are monitored by nothing can
/// be declared as discard ports (photons routed there are lost).
#[derive(Debug, Clone, Default)]
pub struct DetectorWiring {
    detectors: Vec<Detector>,
    discards: BTreeSet<ModeLabel>,
}

impl DetectorWiring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn detector(
        mut self,
        name: &str,
        taps: &[(ModeLabel, f64)],
        number_resolving: bool,
        required: u32,
    ) -> Result<Self, FockError> {
        if !number_resolving && required > 1 {
            return Err(FockError::NonResolvingCount {
                detector: String::from(name),
                required,
            });
        }
        for (mode, ratio) in taps {
            if !(*ratio > 0.0 && *ratio <= 1.0 && ratio.is_finite()) {
                return Err(FockError::InvalidSplitRatio {
                    mode: alloc::format!("{mode}"),
                    ratio: *ratio,
                });
            }
            if self.discards.contains(mode) {
                return Err(FockError::DuplicateMode {
                    mode: alloc::format!("{mode}"),
                });
            }
        }
        self.detectors.push(Detector {
            name: String::from(name),
            taps: taps.to_vec(),
            number_resolving,
            required,
        });
        Ok(self)
    }

    /// Declare a discard port: a mode whose photons are absorbed without
    /// being counted (the unused output of a polarizer, for instance).
    pub fn discard(mut self, mode: ModeLabel) -> Self {
        self.discards.insert(mode);
        self
    }

    pub fn detectors(&self) -> &[Detector] {
        &self.detectors
    }

    /// Total count the coincidence pattern requires.
    pub fn required_total(&self) -> u32 {
        self.detectors.iter().map(|d| d.required).sum()
    }

    fn taps_by_mode(&self) -> Result<BTreeMap<ModeLabel, Vec<(usize, f64)>>, FockError> {
        let mut map: BTreeMap<ModeLabel, Vec<(usize, f64)>> = BTreeMap::new();
        for (index, detector) in self.detectors.iter().enumerate() {
            for (mode, ratio) in &detector.taps {
                map.entry(mode.clone()).or_default().push((index, *ratio));
            }
        }
        for (mode, taps) in &map {
            let total: f64 = taps.iter().map(|(_, r)| r).sum();
            if math::abs(total - 1.0) > 1e-9 {
                return Err(FockError::SplitRatioNotUnit {
                    mode: alloc::format!("{mode}"),
                    total,
                });
            }
        }
        Ok(map)
    }

    /// Coincidence rate for the wiring's pattern, in the normally ordered
    /// counting normalization: each contributing basis pattern enters as
    /// `|amplitude|² · ∏_m n_m!`, multiplied by the multinomial weight of
    /// routing exactly the required counts to each detector.
    ///
    /// With every detector number-resolving on one undivided mode, this
    /// equals [`PureState::pattern_probability`] times the pattern's
    /// `∏ n_m!` multiplicity; dividing a mode over several detectors
    /// multiplies in the classical splitting statistics.
    pub fn coincidence_rate(&self, state: &PureState) -> Result<f64, FockError> {
        let required = self.required_total();
        if required != state.total_photons() {
            return Err(FockError::OverconstrainedPattern {
                required,
                total: state.total_photons(),
            });
        }
        let taps = self.taps_by_mode()?;
        // Coverage: every mode that carries amplitude must land somewhere.
        for (ket, amp) in state.iter() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            for mode in ket.modes() {
                if !taps.contains_key(mode) && !self.discards.contains(mode) {
                    return Err(FockError::UncoveredMode {
                        mode: alloc::format!("{mode}"),
                    });
                }
            }
        }
        let mut rate = 0.0;
        for (ket, amp) in state.iter() {
            // Photons reaching a discard port can never complete the
            // pattern, since the detectors already need all N photons.
            if amp.norm_sqr() == 0.0 || ket.modes().any(|m| self.discards.contains(m)) {
                continue;
            }
            let weight = self.routing_weight(ket, &taps);
            if weight > 0.0 {
                rate += amp.norm_sqr() * ket.multiplicity() * weight;
            }
        }
        Ok(rate)
    }

    /// Probability that classically routing `ket`'s photons through the
    /// fan-outs delivers exactly the required count to every detector.
    fn routing_weight(
        &self,
        ket: &FockVector,
        taps: &BTreeMap<ModeLabel, Vec<(usize, f64)>>,
    ) -> f64 {
        let occupied: Vec<(&ModeLabel, u32)> = ket.iter().collect();
        let mut counts: Vec<u32> = self.detectors.iter().map(|_| 0).collect();
        self.route_mode(&occupied, 0, 1.0, &mut counts, taps)
    }

    fn route_mode(
        &self,
        occupied: &[(&ModeLabel, u32)],
        index: usize,
        weight: f64,
        counts: &mut Vec<u32>,
        taps: &BTreeMap<ModeLabel, Vec<(usize, f64)>>,
    ) -> f64 {
        if index == occupied.len() {
            let matched = counts
                .iter()
                .zip(&self.detectors)
                .all(|(&got, det)| got == det.required);
            return if matched { weight } else { 0.0 };
        }
        let (mode, photons) = occupied[index];
        let mode_taps = &taps[mode];
        let mut total = 0.0;
        let mut split = alloc::vec![0u32; mode_taps.len()];
        total += self.route_split(
            occupied, index, photons, 0, weight, counts, taps, mode_taps, &mut split,
        );
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn route_split(
        &self,
        occupied: &[(&ModeLabel, u32)],
        index: usize,
        remaining: u32,
        slot: usize,
        weight: f64,
        counts: &mut Vec<u32>,
        taps: &BTreeMap<ModeLabel, Vec<(usize, f64)>>,
        mode_taps: &[(usize, f64)],
        split: &mut Vec<u32>,
    ) -> f64 {
        if slot + 1 == mode_taps.len() {
            split[slot] = remaining;
            let (_, photons) = occupied[index];
            // Multinomial routing probability for this assignment.
            let mut w = math::factorial(photons);
            for (&(det, ratio), &k) in mode_taps.iter().zip(split.iter()) {
                if counts[det] + k > self.detectors[det].required {
                    split[slot] = 0;
                    return 0.0;
                }
                w *= math::powi(ratio, k as i32) / math::factorial(k);
            }
            for (&(det, _), &k) in mode_taps.iter().zip(split.iter()) {
                counts[det] += k;
            }
            let total = self.route_mode(occupied, index + 1, weight * w, counts, taps);
            for (&(det, _), &k) in mode_taps.iter().zip(split.iter()) {
                counts[det] -= k;
            }
            split[slot] = 0;
            return total;
        }
        let mut total = 0.0;
        for k in 0..=remaining {
            split[slot] = k;
            total += self.route_split(
                occupied,
                index,
                remaining - k,
                slot + 1,
                weight,
                counts,
                taps,
                mode_taps,
                split,
            );
        }
        split[slot] = 0;
        total
    }
}
