//! Seeded random acts, menus and mixture weights on an exact utility grid.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::decision::{Act, Lottery, Menu, UtilitySpec};
use crate::measures::StateSpace;
use crate::rational::{ratio, Q};

/// Bounds on generated instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Premise-satisfying instances to test per axiom.
    pub samples: usize,
    /// Largest menu drawn (at most 6).
    pub max_menu: usize,
    /// Largest denominator of mixture weights (at most 20).
    pub mixture_denominator: i64,
    /// Utilities live on `{k / utility_denominator : |k| ≤ utility_denominator}`.
    pub utility_denominator: i64,
    /// Give up after `samples * attempt_factor` draws.
    pub attempt_factor: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            samples: 500,
            max_menu: 6,
            mixture_denominator: 20,
            utility_denominator: 10,
            attempt_factor: 200,
        }
    }
}

impl GeneratorConfig {
    pub fn with_samples(samples: usize) -> Self {
        GeneratorConfig { samples, ..Self::default() }
    }
}

pub(crate) fn grid_prize(k: i64) -> String {
    format!("g{k}")
}

/// Utility over the grid prizes `g{k}` with `U = k / denominator`.
pub fn grid_utility(denominator: i64) -> UtilitySpec {
    UtilitySpec::new((-denominator..=denominator).map(|k| (grid_prize(k), ratio(k, denominator))))
        .expect("grid has distinct utilities")
}

pub(crate) struct Gen<'a> {
    pub rng: ChaCha8Rng,
    pub space: &'a StateSpace,
    pub config: &'a GeneratorConfig,
    counter: usize,
}

impl<'a> Gen<'a> {
    pub fn new(rng: ChaCha8Rng, space: &'a StateSpace, config: &'a GeneratorConfig) -> Self {
        Gen { rng, space, config, counter: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    /// Grid index; coarse draws stay on multiples of half the range.
    pub fn level(&mut self, coarse: bool) -> i64 {
        let d = self.config.utility_denominator;
        if coarse {
            let half = (d / 2).max(1);
            let steps = d / half;
            self.rng.gen_range(-steps..=steps) * half
        } else {
            self.rng.gen_range(-d..=d)
        }
    }

    pub fn lottery(&mut self, coarse: bool) -> Lottery {
        let a = self.level(coarse);
        if coarse || self.rng.gen_bool(0.7) {
            return Lottery::degenerate(grid_prize(a));
        }
        let b = self.level(false);
        let p = ratio(self.rng.gen_range(1..4), 4);
        Lottery::degenerate(grid_prize(a)).mix(&p, &Lottery::degenerate(grid_prize(b)))
    }

    pub fn act(&mut self, coarse: bool) -> Act {
        let name = self.fresh("a");
        let outcomes = (0..self.space.len()).map(|_| self.lottery(coarse)).collect();
        Act::new(name, self.space, outcomes).expect("one lottery per state")
    }

    pub fn constant_act(&mut self, coarse: bool) -> Act {
        let name = self.fresh("c");
        let l = self.lottery(coarse);
        Act::constant(name, self.space, l)
    }

    pub fn act_from_levels(&mut self, levels: &[i64]) -> Act {
        let name = self.fresh("a");
        let outcomes = levels.iter().map(|&k| Lottery::degenerate(grid_prize(k))).collect();
        Act::new(name, self.space, outcomes).expect("one lottery per state")
    }

    pub fn menu_size(&mut self, min: usize) -> usize {
        let max = self.config.max_menu.max(min);
        self.rng.gen_range(min..=max)
    }

    pub fn menu(&mut self, min: usize, coarse: bool) -> Menu {
        let n = self.menu_size(min);
        Menu::new((0..n).map(|_| self.act(coarse)).collect()).expect("fresh names")
    }

    /// Mixture weight `a/d` strictly inside `(0, 1)`.
    pub fn mixture(&mut self) -> Q {
        let d = self.rng.gen_range(2..=self.config.mixture_denominator.max(2));
        let a = self.rng.gen_range(1..d);
        ratio(a, d)
    }

    pub fn pick<'m>(&mut self, menu: &'m Menu, count: usize) -> Vec<&'m Act> {
        menu.acts().choose_multiple(&mut self.rng, count).collect()
    }

    /// Menu whose per-state sets of utility levels coincide, containing a
    /// constant act (returned first) at one of those levels.
    pub fn state_independent_menu(&mut self) -> (Act, Menu) {
        let n = self.menu_size(3);
        let levels: Vec<i64> = (0..n).map(|_| self.level(true)).collect();
        let h_level = levels[0];
        let others = &levels[1..];
        let mut columns: Vec<Vec<i64>> = Vec::with_capacity(self.space.len());
        for _ in 0..self.space.len() {
            let mut perm = others.to_vec();
            perm.shuffle(&mut self.rng);
            columns.push(perm);
        }
        let h = self.act_from_levels(&vec![h_level; self.space.len()]);
        let mut acts = vec![h.clone()];
        for i in 0..others.len() {
            let row: Vec<i64> = columns.iter().map(|c| c[i]).collect();
            acts.push(self.act_from_levels(&row));
        }
        (h, Menu::new(acts).expect("fresh names"))
    }
}
