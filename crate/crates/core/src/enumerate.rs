//! Backtracking enumeration of monotone maps from a finite poset into a
//! finite chain `0..levels`.
//!
//! Positions are visited in a fixed linear extension of the poset, so every
//! predecessor of a position is assigned before it. Assignments come out in
//! lexicographic order of the value vector, position 0 most significant.

pub(crate) struct MonotoneMaps {
    /// `preds[p]`: positions that must not exceed `p`; all smaller than `p`.
    preds: Vec<Vec<usize>>,
    fixed: Vec<Option<usize>>,
    top: usize,
    values: Vec<usize>,
    state: State,
}

#[derive(PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl MonotoneMaps {
    pub(crate) fn new(preds: Vec<Vec<usize>>, fixed: Vec<Option<usize>>, levels: usize) -> Self {
        debug_assert_eq!(preds.len(), fixed.len());
        debug_assert!(preds.iter().enumerate().all(|(p, ps)| ps.iter().all(|&q| q < p)));
        let len = preds.len();
        MonotoneMaps {
            preds,
            fixed,
            top: levels - 1,
            values: vec![0; len],
            state: State::Fresh,
        }
    }

    fn lower_bound(&self, p: usize) -> usize {
        self.preds[p].iter().map(|&q| self.values[q]).max().unwrap_or(0)
    }

    /// Sets `values[p]` to its smallest admissible value, or reports failure.
    fn place_min(&mut self, p: usize) -> bool {
        let lb = self.lower_bound(p);
        match self.fixed[p] {
            Some(v) if v < lb => false,
            Some(v) => {
                self.values[p] = v;
                true
            }
            None => {
                self.values[p] = lb;
                true
            }
        }
    }

    /// Fills positions `from..` minimally; on a dead end, advances the
    /// rightmost free position below it and retries.
    fn fill_from(&mut self, mut from: usize) -> bool {
        let len = self.values.len();
        loop {
            let mut p = from;
            while p < len && self.place_min(p) {
                p += 1;
            }
            if p == len {
                return true;
            }
            match self.bump_before(p) {
                Some(q) => from = q + 1,
                None => return false,
            }
        }
    }

    /// Increments the rightmost free position strictly before `end`.
    fn bump_before(&mut self, end: usize) -> Option<usize> {
        (0..end)
            .rev()
            .find(|&q| self.fixed[q].is_none() && self.values[q] < self.top)
            .inspect(|&q| self.values[q] += 1)
    }
}

impl Iterator for MonotoneMaps {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let found = match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                self.fill_from(0)
            }
            State::Running => {
                let len = self.values.len();
                match self.bump_before(len) {
                    Some(q) => self.fill_from(q + 1),
                    None => false,
                }
            }
        };
        if found {
            Some(self.values.clone())
        } else {
            self.state = State::Done;
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all `levels^len` vectors.
    fn brute(preds: &[Vec<usize>], fixed: &[Option<usize>], levels: usize) -> Vec<Vec<usize>> {
        let len = preds.len();
        let total = levels.pow(len as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut v = vec![0; len];
            let mut c = code;
            for p in (0..len).rev() {
                v[p] = c % levels;
                c /= levels;
            }
            let ok = (0..len).all(|p| preds[p].iter().all(|&q| v[q] <= v[p]) && fixed[p].is_none_or(|f| v[p] == f));
            if ok {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn chain_of_three_matches_brute_force() {
        let preds = vec![vec![], vec![0], vec![1]];
        let fixed = vec![None, None, None];
        let got: Vec<_> = MonotoneMaps::new(preds.clone(), fixed.clone(), 3).collect();
        assert_eq!(got, brute(&preds, &fixed, 3));
        assert_eq!(got.len(), 10);
    }

    #[test]
    fn square_grid_with_boundaries_matches_brute_force() {
        // 3x3 grid, lexicographic positions
        let mut preds = vec![Vec::new(); 9];
        for (p, pr) in preds.iter_mut().enumerate() {
            if p >= 3 {
                pr.push(p - 3);
            }
            if p % 3 > 0 {
                pr.push(p - 1);
            }
        }
        let mut fixed = vec![None; 9];
        fixed[0] = Some(0);
        fixed[8] = Some(2);
        let got: Vec<_> = MonotoneMaps::new(preds.clone(), fixed.clone(), 3).collect();
        assert_eq!(got, brute(&preds, &fixed, 3));
    }

    #[test]
    fn infeasible_fixed_value_yields_nothing() {
        let preds = vec![vec![], vec![0]];
        let fixed = vec![Some(2), Some(1)];
        assert_eq!(MonotoneMaps::new(preds, fixed, 3).count(), 0);
    }

    #[test]
    fn dead_end_in_the_middle_backtracks() {
        // p2 fixed to 1 forces p0, p1 <= 1
        let preds = vec![vec![], vec![], vec![0, 1], vec![2]];
        let fixed = vec![None, None, Some(1), None];
        let got: Vec<_> = MonotoneMaps::new(preds.clone(), fixed.clone(), 3).collect();
        assert_eq!(got, brute(&preds, &fixed, 3));
        assert_eq!(got.len(), 4 * 2);
    }
}
