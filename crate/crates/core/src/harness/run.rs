//! The agent–environment loop.

use super::{HarnessError, RunConfig};
use crate::env::{Action, Cell, Event, Grid, GridEnv, Pose, StateId};
use crate::intrinsic::{IntrinsicRewards, RewardKind, RewardSpec};
use crate::model::CountModel;
use crate::planner::{discount_for, greedy_action, Planner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One environment step as seen by the agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// 1-based.
    pub step: usize,
    pub z: StateId,
    pub a: usize,
    pub next: StateId,
    /// Intrinsic reward received for the transition.
    pub reward: f64,
    pub event: Event,
}

/// Everything logged by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub seed: u64,
    pub reward: RewardSpec,
    pub records: Vec<StepRecord>,
    /// Unique (x, y) positions entered so far, after each step.
    pub discovered: Vec<usize>,
    /// Unique (x, y, θ) poses entered so far, after each step.
    pub discovered_poses: Vec<usize>,
    /// Lava deaths so far, after each step.
    pub deaths: Vec<usize>,
    pub ball_hits: usize,
    pub goals: usize,
}

impl RunLog {
    pub fn final_discovered(&self) -> usize {
        self.discovered.last().copied().unwrap_or(0)
    }

    pub fn final_deaths(&self) -> usize {
        self.deaths.last().copied().unwrap_or(0)
    }

    /// `discovered / max(1, deaths)` at the end of the run.
    pub fn ratio(&self) -> f64 {
        self.final_discovered() as f64 / self.final_deaths().max(1) as f64
    }
}

/// Model, rewards and planner driving one environment.
pub struct Agent {
    env: GridEnv,
    model: CountModel,
    rewards: IntrinsicRewards,
    planner: Planner,
    env_rng: ChaCha8Rng,
    agent_rng: ChaCha8Rng,
    budget: usize,
    steps: usize,
    visited_cells: Vec<bool>,
    visited_poses: Vec<bool>,
    n_cells: usize,
    n_poses: usize,
    deaths: usize,
    ball_hits: usize,
    goals: usize,
}

/// Independent streams for the world and the agent, both fixed by `seed`.
pub fn seeded_streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(0);
    let mut agent_rng = ChaCha8Rng::seed_from_u64(seed);
    agent_rng.set_stream(1);
    (env_rng, agent_rng)
}

impl Agent {
    pub fn new(grid: Grid, config: &RunConfig, seed: u64) -> Result<Self, HarnessError> {
        config.validate()?;
        let n = grid.n_states();
        let model = CountModel::new(n, Action::COUNT, config.alpha)?;
        let rewards = IntrinsicRewards::new(config.reward, &model)?;
        let planner = Planner::new(n, Action::COUNT, discount_for(n)?, config.theta)?;
        let (env_rng, agent_rng) = seeded_streams(seed);
        let n_cells = grid.width() * grid.height();
        let mut agent = Agent {
            env: GridEnv::new(grid),
            model,
            rewards,
            planner,
            env_rng,
            agent_rng,
            budget: config.budget.unwrap_or(n),
            steps: 0,
            visited_cells: vec![false; n_cells],
            visited_poses: vec![false; n],
            n_cells: 0,
            n_poses: 0,
            deaths: 0,
            ball_hits: 0,
            goals: 0,
        };
        agent.begin_episode()?;
        Ok(agent)
    }

    fn begin_episode(&mut self) -> Result<(), HarnessError> {
        let pose = self.env.reset();
        let z = self.env.grid().encode(pose);
        self.model.register_visit(z)?;
        self.mark_discovered(pose);
        Ok(())
    }

    fn mark_discovered(&mut self, pose: Pose) {
        let cell = pose.y * self.env.grid().width() + pose.x;
        if !self.visited_cells[cell] {
            self.visited_cells[cell] = true;
            self.n_cells += 1;
        }
        let z = self.env.grid().encode(pose).index();
        if !self.visited_poses[z] {
            self.visited_poses[z] = true;
            self.n_poses += 1;
        }
    }

    /// Greedy action, environment step, model and reward update, planning.
    pub fn step(&mut self) -> Result<StepRecord, HarnessError> {
        let z = self.env.grid().encode(self.env.pose());
        let row = self.planner.q_row(&self.model, &self.rewards, z);
        let a = greedy_action(&row, &mut self.agent_rng);
        let out = self.env.step(Action::ALL[a], &mut self.env_rng)?;
        let next = self.env.grid().encode(out.next);

        self.model.observe(z, a, next)?;
        if out.terminated {
            self.model.mark_terminal(next)?;
        }
        self.rewards.refresh(&self.model, z)?;
        let reward = self.rewards.online(&self.model, z, a, next)?;
        self.planner.touch(z);
        if self.rewards.spec().kind == RewardKind::Novelty {
            // N(next) moved, so every row leading into next has a new reward
            for i in 0..self.model.predecessors(next).len() {
                let (p, _) = self.model.predecessors(next)[i];
                self.planner.touch(p);
            }
        }
        self.planner.sweep(&self.model, &self.rewards, self.budget);

        self.steps += 1;
        self.mark_discovered(out.next);
        match out.event {
            Event::Death => self.deaths += 1,
            Event::BallHit => self.ball_hits += 1,
            Event::Goal => self.goals += 1,
            Event::None => {}
        }
        if out.terminated {
            self.begin_episode()?;
        }
        Ok(StepRecord { step: self.steps, z, a, next, reward, event: out.event })
    }

    pub fn grid(&self) -> &Grid {
        self.env.grid()
    }

    pub fn pose(&self) -> Pose {
        self.env.pose()
    }

    pub fn model(&self) -> &CountModel {
        &self.model
    }

    pub fn rewards(&self) -> &IntrinsicRewards {
        &self.rewards
    }

    pub fn planner(&self) -> &Planner {
        &self.planner
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn discovered(&self) -> usize {
        self.n_cells
    }

    pub fn discovered_poses(&self) -> usize {
        self.n_poses
    }

    pub fn deaths(&self) -> usize {
        self.deaths
    }

    /// Cells entered at least once.
    pub fn visited_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let w = self.env.grid().width();
        self.visited_cells.iter().enumerate().filter(|(_, &v)| v).map(move |(i, _)| Cell::new(i % w, i / w))
    }
}

/// A finished run: its log and the agent in its final state.
pub struct Trained {
    pub log: RunLog,
    pub agent: Agent,
}

/// Runs `config.total_steps` steps with `seed` and keeps the agent.
pub fn train(config: &RunConfig, seed: u64) -> Result<Trained, HarnessError> {
    config.validate()?;
    let grid = config.env.load()?;
    let mut agent = Agent::new(grid, config, seed)?;
    let n = config.total_steps;
    let mut log = RunLog {
        seed,
        reward: config.reward,
        records: Vec::with_capacity(n),
        discovered: Vec::with_capacity(n),
        discovered_poses: Vec::with_capacity(n),
        deaths: Vec::with_capacity(n),
        ball_hits: 0,
        goals: 0,
    };
    for _ in 0..n {
        let rec = agent.step()?;
        log.records.push(rec);
        log.discovered.push(agent.discovered());
        log.discovered_poses.push(agent.discovered_poses());
        log.deaths.push(agent.deaths());
    }
    log.ball_hits = agent.ball_hits;
    log.goals = agent.goals;
    Ok(Trained { log, agent })
}

/// Runs one seed and returns its log. Deterministic in `(config, seed)`.
pub fn run_single(config: &RunConfig, seed: u64) -> Result<RunLog, HarnessError> {
    Ok(train(config, seed)?.log)
}

/// Count model learned from `steps` uniformly random actions, with resets on
/// termination.
pub fn random_walk_model(grid: &Grid, steps: usize, seed: u64, alpha: Option<f64>) -> Result<CountModel, HarnessError> {
    let mut model = CountModel::new(grid.n_states(), Action::COUNT, alpha)?;
    let mut env = GridEnv::new(grid.clone());
    let (mut env_rng, mut agent_rng) = seeded_streams(seed);
    model.register_visit(grid.encode(env.pose()))?;
    for _ in 0..steps {
        let z = grid.encode(env.pose());
        let a = agent_rng.gen_range(0..Action::COUNT);
        let out = env.step(Action::ALL[a], &mut env_rng)?;
        let next = grid.encode(out.next);
        model.observe(z, a, next)?;
        if out.terminated {
            model.mark_terminal(next)?;
            model.register_visit(grid.encode(env.reset()))?;
        }
    }
    Ok(model)
}
