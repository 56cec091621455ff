use crate::interval::Interval;

/// Pairing of one day's planned and logged intervals. Indices refer to the
/// input slices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    /// Same-activity pairs that overlap in time.
    pub kept: Vec<(usize, usize)>,
    /// Same-activity pairs that do not overlap.
    pub shifts: Vec<(usize, usize)>,
    pub unmatched_planned: Vec<usize>,
    pub unmatched_logged: Vec<usize>,
}

impl Matching {
    pub fn kept_overlap(&self, planned: &[Interval], logged: &[Interval]) -> u32 {
        self.kept
            .iter()
            .map(|&(p, l)| u32::from(planned[p].overlap(&logged[l])))
            .sum()
    }

    pub fn shift_distance(&self, planned: &[Interval], logged: &[Interval]) -> u32 {
        self.shifts
            .iter()
            .map(|&(p, l)| u32::from(planned[p].start.abs_diff(logged[l].start)))
            .sum()
    }
}

fn tie_key<'a>(planned: &'a [Interval], logged: &'a [Interval], p: usize, l: usize) -> (u16, u16, &'a str) {
    (planned[p].start, logged[l].start, planned[p].activity.as_str())
}

/// Two greedy stages. First, overlapping same-activity pairs by descending
/// overlap; then the remaining same-activity pairs by ascending start
/// distance. Ties go to the earlier planned start, then the earlier logged
/// start.
pub fn match_intervals(planned: &[Interval], logged: &[Interval]) -> Matching {
    let mut overlapping = Vec::new();
    for (p, pi) in planned.iter().enumerate() {
        for (l, li) in logged.iter().enumerate() {
            if pi.activity == li.activity {
                overlapping.push((pi.overlap(li), p, l));
            }
        }
    }
    let mut candidates: Vec<(u16, usize, usize)> =
        overlapping.iter().copied().filter(|&(o, _, _)| o > 0).collect();
    candidates.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then_with(|| tie_key(planned, logged, a.1, a.2).cmp(&tie_key(planned, logged, b.1, b.2)))
    });

    let mut p_used = vec![false; planned.len()];
    let mut l_used = vec![false; logged.len()];
    let mut matching = Matching::default();
    for (_, p, l) in candidates {
        if !p_used[p] && !l_used[l] {
            p_used[p] = true;
            l_used[l] = true;
            matching.kept.push((p, l));
        }
    }

    let mut shifts: Vec<(u16, usize, usize)> = overlapping
        .iter()
        .filter(|&&(_, p, l)| !p_used[p] && !l_used[l])
        .map(|&(_, p, l)| (planned[p].start.abs_diff(logged[l].start), p, l))
        .collect();
    shifts.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| tie_key(planned, logged, a.1, a.2).cmp(&tie_key(planned, logged, b.1, b.2)))
    });
    for (_, p, l) in shifts {
        if !p_used[p] && !l_used[l] {
            p_used[p] = true;
            l_used[l] = true;
            matching.shifts.push((p, l));
        }
    }

    matching.unmatched_planned = (0..planned.len()).filter(|&p| !p_used[p]).collect();
    matching.unmatched_logged = (0..logged.len()).filter(|&l| !l_used[l]).collect();
    matching
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: &str, s: u32, e: u32) -> Interval {
        Interval::new(a.into(), s, e).unwrap()
    }

    #[test]
    fn overlapping_pair_is_kept() {
        let p = [iv("study", 840, 900)];
        let l = [iv("study", 850, 910)];
        let m = match_intervals(&p, &l);
        assert_eq!(m.kept, vec![(0, 0)]);
        assert_eq!(m.kept_overlap(&p, &l), 50);
        assert!(m.shifts.is_empty());
    }

    #[test]
    fn touching_pair_is_a_shift() {
        let p = [iv("study", 840, 900)];
        let l = [iv("study", 900, 960)];
        let m = match_intervals(&p, &l);
        assert!(m.kept.is_empty());
        assert_eq!(m.shifts, vec![(0, 0)]);
        assert_eq!(m.shift_distance(&p, &l), 60);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(match_intervals(&[], &[]), Matching::default());
    }

    #[test]
    fn different_activities_never_pair() {
        let p = [iv("study", 600, 660)];
        let l = [iv("leisure", 600, 660)];
        let m = match_intervals(&p, &l);
        assert!(m.kept.is_empty() && m.shifts.is_empty());
        assert_eq!(m.unmatched_planned, vec![0]);
        assert_eq!(m.unmatched_logged, vec![0]);
    }

    #[test]
    fn larger_overlap_wins() {
        let p = [iv("a", 0, 100)];
        let l = [iv("a", 0, 30), iv("a", 40, 100)];
        let m = match_intervals(&p, &l);
        assert_eq!(m.kept, vec![(0, 1)]);
        assert_eq!(m.unmatched_logged, vec![0]);
    }

    #[test]
    fn equal_overlap_breaks_on_logged_start() {
        let p = [iv("a", 0, 100)];
        let l = [iv("a", 50, 120), iv("a", 0, 50)];
        let m = match_intervals(&p, &l);
        assert_eq!(m.kept, vec![(0, 1)]);
    }

    #[test]
    fn nearest_shift_first() {
        let p = [iv("a", 100, 130), iv("a", 280, 310)];
        let l = [iv("a", 200, 230)];
        let m = match_intervals(&p, &l);
        assert_eq!(m.shifts, vec![(1, 0)]);
        assert_eq!(m.unmatched_planned, vec![0]);
    }
}
