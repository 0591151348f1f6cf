use super::{global_best_position, AlgorithmParams, BatParams, Optimizer, StepContext};
use crate::error::{Error, Result};
use crate::population::Population;
use crate::samplers::gaussian_vector;

/// Pulse rate and loudness after `t` schedule advances.
///
/// Returns `(r0·(1 − e^{−γt}), α·A_prev)`.
pub fn bat_schedules(
    r0: f64,
    gamma_rate: f64,
    a_prev: f64,
    alpha_loudness: f64,
    t: usize,
) -> (f64, f64) {
    let r = r0 * (1.0 - (-gamma_rate * t as f64).exp());
    (r, alpha_loudness * a_prev)
}

/// Bat algorithm with per-bat loudness and pulse-rate state.
///
/// When a uniform draw exceeds the bat's pulse rate, its candidate is a local
/// walk `x_* + 0.01·Ā·N(0, I)` around the best instead of the velocity move,
/// where `Ā` is the mean loudness. A candidate replaces the bat only if it is
/// strictly better and a second uniform draw falls below the bat's loudness.
#[derive(Debug, Clone)]
pub struct Bat {
    params: BatParams,
    loudness: Vec<f64>,
    rate: Vec<f64>,
}

impl Bat {
    pub fn new(params: BatParams) -> Self {
        Self {
            params,
            loudness: Vec::new(),
            rate: Vec::new(),
        }
    }

    pub fn loudness(&self) -> &[f64] {
        &self.loudness
    }

    pub fn pulse_rate(&self) -> &[f64] {
        &self.rate
    }

    /// Override the loudness of every bat (instrumentation and tests).
    pub fn set_loudness(&mut self, n: usize, value: f64) {
        self.ensure_state(n);
        self.loudness.iter_mut().for_each(|a| *a = value);
    }

    fn ensure_state(&mut self, n: usize) {
        if self.loudness.len() != n {
            self.loudness = vec![self.params.a0; n];
            self.rate = vec![0.0; n];
        }
    }

    pub fn frequency(&self, beta: f64) -> f64 {
        self.params.f_min + (self.params.f_max - self.params.f_min) * beta
    }
}

impl Optimizer for Bat {
    fn params(&self) -> AlgorithmParams {
        AlgorithmParams::Bat(self.params)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let mut p = self.params();
        p.set(name, value)?;
        if let AlgorithmParams::Bat(p) = p {
            self.params = p;
        }
        Ok(())
    }

    // Draw order per bat: β, the pulse-rate uniform, then d normals if the
    // local walk fires. After evaluation, one acceptance uniform per bat.
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        if self.params.f_min > self.params.f_max {
            return Err(Error::InvalidArgument(format!(
                "f_min {} exceeds f_max {}",
                self.params.f_min, self.params.f_max
            )));
        }
        let n = pop.len();
        let d = pop.dim();
        self.ensure_state(n);
        let best = global_best_position(pop)?;
        let mean_loudness = self.loudness.iter().sum::<f64>() / n as f64;

        let mut candidates = Vec::with_capacity(n);
        for (i, agent) in pop.agents.iter_mut().enumerate() {
            let Some(v) = agent.velocity.as_mut() else {
                return Err(Error::Contract(
                    "bat requires a velocity on every agent".into(),
                ));
            };
            let f_i = self.params.f_min + (self.params.f_max - self.params.f_min) * ctx.rng.unit();
            for k in 0..d {
                v[k] += (agent.position[k] - best[k]) * f_i;
            }
            let mut cand: Vec<f64> = agent
                .position
                .iter()
                .zip(v.iter())
                .map(|(x, v)| x + v)
                .collect();
            if ctx.rng.unit() > self.rate[i] {
                let noise = gaussian_vector(d, 0.0, 1.0, ctx.rng)?;
                cand = best
                    .iter()
                    .zip(noise)
                    .map(|(b, z)| b + 0.01 * mean_loudness * z)
                    .collect();
            }
            ctx.space.clamp_in_place(&mut cand)?;
            candidates.push(cand);
        }

        let values = ctx.eval.evaluate_batch(&candidates)?;
        for (i, (cand, f)) in candidates.into_iter().zip(values).enumerate() {
            let gate = ctx.rng.unit();
            if f < pop.agents[i].fitness_or_inf() && gate < self.loudness[i] {
                pop.place(i, cand, f);
            } else {
                pop.observe(&cand, f);
            }
        }

        let t_next = pop.iteration + 1;
        for i in 0..n {
            let (r, a) = bat_schedules(
                self.params.r0,
                self.params.gamma,
                self.loudness[i],
                self.params.alpha,
                t_next,
            );
            self.rate[i] = r;
            self.loudness[i] = a;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::{evaluate_and_update_bests, Evaluator};
    use crate::rng::RngStream;
    use crate::space::SearchSpace;

    #[test]
    fn schedule_closed_forms() {
        assert_eq!(bat_schedules(0.5, 0.9, 1.0, 0.9, 0).0, 0.0);
        assert_eq!(bat_schedules(0.5, 0.9, 1.0, 0.9, 0).1, 0.9);
        let mut last = 0.0;
        for t in 0..200 {
            let (r, _) = bat_schedules(0.5, 0.9, 1.0, 0.9, t);
            assert!(r >= last && r <= 0.5);
            last = r;
        }
        assert!((last - 0.5).abs() < 1e-12);
    }

    #[test]
    fn frequency_endpoints() {
        let bat = Bat::new(BatParams::default());
        assert_eq!(bat.frequency(0.0), 0.0);
        assert_eq!(bat.frequency(1.0), 2.0);
    }

    fn setup(positions: Vec<Vec<f64>>) -> (Population, SearchSpace) {
        let space = SearchSpace::cube(2, -5.0, 5.0).unwrap();
        (Population::from_positions(positions, true), space)
    }

    #[test]
    fn closed_loudness_freezes_positions() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let (mut pop, space) = setup(vec![vec![1.0, 1.0], vec![-2.0, 3.0], vec![4.0, -1.0]]);
        let mut eval = Evaluator::new(&f, false);
        evaluate_and_update_bests(&mut pop, &mut eval).unwrap();
        let before = pop.positions();
        let mut bat = Bat::new(BatParams::default());
        bat.set_loudness(3, 0.0);
        let mut rng = RngStream::new(2);
        let mut ctx = StepContext {
            space: &space,
            eval: &mut eval,
            rng: &mut rng,
        };
        for _ in 0..20 {
            bat.step(&mut pop, &mut ctx).unwrap();
        }
        assert_eq!(pop.positions(), before);
        assert!(pop.best_fitness().unwrap() <= 2.0);
    }

    #[test]
    fn bat_at_best_with_zero_velocity_stays_put() {
        // One bat sitting on the best point: the velocity term is zero.
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let (mut pop, space) = setup(vec![vec![0.0, 0.0]]);
        let mut eval = Evaluator::new(&f, false);
        evaluate_and_update_bests(&mut pop, &mut eval).unwrap();
        let mut bat = Bat::new(BatParams {
            r0: 1.0,
            ..BatParams::default()
        });
        let mut rng = RngStream::new(8);
        let mut ctx = StepContext {
            space: &space,
            eval: &mut eval,
            rng: &mut rng,
        };
        for _ in 0..5 {
            bat.step(&mut pop, &mut ctx).unwrap();
        }
        assert_eq!(pop.agents[0].velocity.as_deref(), Some(&[0.0, 0.0][..]));
        assert_eq!(pop.agents[0].position, vec![0.0, 0.0]);
    }

    #[test]
    fn loudness_follows_geometric_sequence() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let (mut pop, space) = setup(vec![vec![1.0, 1.0], vec![-2.0, 3.0]]);
        let mut eval = Evaluator::new(&f, false);
        evaluate_and_update_bests(&mut pop, &mut eval).unwrap();
        let params = BatParams::default();
        let mut bat = Bat::new(params);
        let mut rng = RngStream::new(4);
        let mut ctx = StepContext {
            space: &space,
            eval: &mut eval,
            rng: &mut rng,
        };
        for t in 1..=50 {
            bat.step(&mut pop, &mut ctx).unwrap();
            let expect = params.a0 * params.alpha.powi(t);
            for a in bat.loudness() {
                assert!((a - expect).abs() <= 1e-14 * expect.max(1e-300) * t as f64);
            }
            let r_expect = params.r0 * (1.0 - (-params.gamma * t as f64).exp());
            assert!(bat.pulse_rate().iter().all(|r| *r == r_expect));
        }
    }
}
