use super::{Action, Cell, Direction, Grid, Pose, StateId, TileKind};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("episode already terminated; reset before stepping")]
    Terminated,
    #[error("state {0} does not encode an occupiable pose")]
    InvalidState(StateId),
    #[error("exact transitions are only defined for grids without moving balls or walls")]
    Unsupported,
}

/// What happened on a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    None,
    Death,
    Goal,
    BallHit,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::None => "none",
            Event::Death => "death",
            Event::Goal => "goal",
            Event::BallHit => "ball",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub next: Pose,
    pub event: Event,
    /// +1 on goal, −1 on death or ball contact, 0 otherwise.
    pub extrinsic: f64,
    pub terminated: bool,
}

/// Mutable episode state; the grid itself stays immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvState {
    pub pose: Pose,
    pub steps: u64,
    pub terminated: bool,
    pub balls: Vec<Cell>,
    pub walls: Vec<Cell>,
}

/// Fresh episode: agent on the start pose, movers at their home cells.
pub fn reset(grid: &Grid) -> EnvState {
    EnvState {
        pose: grid.start(),
        steps: 0,
        terminated: false,
        balls: grid.ball_home.clone(),
        walls: grid.wall_home.clone(),
    }
}

fn ice_candidates(grid: &Grid, here: Cell) -> Vec<Cell> {
    let mut out = vec![here];
    out.extend(
        Direction::ALL
            .iter()
            .filter_map(|&d| grid.neighbor(here, d))
            .filter(|&n| grid.tile(n) != TileKind::Wall),
    );
    out
}

/// Advances the episode by one action.
///
/// Turns rotate in place. Forward moves one cell unless a wall is ahead;
/// from ice the landing cell is uniform over the cell itself and its
/// non-wall neighbours, whatever the facing. Lava kills, goal ends the
/// episode, and a ball in the target cell bounces the agent back with a
/// penalty. Afterwards every ball and moving wall hops to a uniformly chosen
/// free neighbouring cell.
pub fn step<R: Rng + ?Sized>(
    grid: &Grid,
    state: &mut EnvState,
    action: Action,
    rng: &mut R,
) -> Result<StepOutcome, EnvError> {
    if state.terminated {
        return Err(EnvError::Terminated);
    }
    let pose = state.pose;
    let mut event = Event::None;
    let next = match action {
        Action::TurnLeft => Pose { dir: pose.dir.turn_left(), ..pose },
        Action::TurnRight => Pose { dir: pose.dir.turn_right(), ..pose },
        Action::Forward => {
            let here = pose.cell();
            let target = if grid.tile(here) == TileKind::Ice {
                let cands = ice_candidates(grid, here);
                cands[rng.gen_range(0..cands.len())]
            } else {
                match grid.neighbor(here, pose.dir) {
                    Some(n) if grid.tile(n) != TileKind::Wall => n,
                    _ => here,
                }
            };
            if target == here || state.walls.contains(&target) {
                pose
            } else if state.balls.contains(&target) {
                event = Event::BallHit;
                pose
            } else {
                match grid.tile(target) {
                    TileKind::Lava => event = Event::Death,
                    TileKind::Goal => event = Event::Goal,
                    _ => {}
                }
                Pose::new(target.x, target.y, pose.dir)
            }
        }
    };

    let terminated = matches!(event, Event::Death | Event::Goal);
    state.pose = next;
    state.steps += 1;
    state.terminated = terminated;
    if !terminated && grid.has_movers() {
        move_movers(grid, state, rng);
    }

    let extrinsic = match event {
        Event::Goal => 1.0,
        Event::Death | Event::BallHit => -1.0,
        Event::None => 0.0,
    };
    Ok(StepOutcome { next, event, extrinsic, terminated })
}

fn move_movers<R: Rng + ?Sized>(grid: &Grid, state: &mut EnvState, rng: &mut R) {
    let agent = state.pose.cell();
    let n_balls = state.balls.len();
    for i in 0..n_balls + state.walls.len() {
        let cur = if i < n_balls { state.balls[i] } else { state.walls[i - n_balls] };
        let free: Vec<Cell> = Direction::ALL
            .iter()
            .filter_map(|&d| grid.neighbor(cur, d))
            .filter(|&c| {
                grid.tile(c).is_floor_like()
                    && c != agent
                    && !state.balls.contains(&c)
                    && !state.walls.contains(&c)
            })
            .collect();
        if free.is_empty() {
            continue;
        }
        let dest = free[rng.gen_range(0..free.len())];
        if i < n_balls {
            state.balls[i] = dest;
        } else {
            state.walls[i - n_balls] = dest;
        }
    }
}

/// Exact next-state distribution implied by [`step`], as a dense vector
/// over all state codes. Terminal tiles are absorbing.
pub fn true_transitions(grid: &Grid, z: StateId, action: Action) -> Result<Vec<f64>, EnvError> {
    if grid.has_movers() {
        return Err(EnvError::Unsupported);
    }
    let pose = grid.decode(z).filter(|p| grid.tile(p.cell()).is_occupiable()).ok_or(EnvError::InvalidState(z))?;
    let mut probs = vec![0.0; grid.n_states()];
    let here = pose.cell();
    if grid.tile(here).is_terminal() {
        probs[z.index()] = 1.0;
        return Ok(probs);
    }
    match action {
        Action::TurnLeft => probs[grid.encode(Pose { dir: pose.dir.turn_left(), ..pose }).index()] = 1.0,
        Action::TurnRight => probs[grid.encode(Pose { dir: pose.dir.turn_right(), ..pose }).index()] = 1.0,
        Action::Forward => {
            if grid.tile(here) == TileKind::Ice {
                let cands = ice_candidates(grid, here);
                let w = 1.0 / cands.len() as f64;
                for c in cands {
                    probs[grid.encode(Pose::new(c.x, c.y, pose.dir)).index()] += w;
                }
            } else {
                let dest = match grid.neighbor(here, pose.dir) {
                    Some(n) if grid.tile(n) != TileKind::Wall => n,
                    _ => here,
                };
                probs[grid.encode(Pose::new(dest.x, dest.y, pose.dir)).index()] = 1.0;
            }
        }
    }
    Ok(probs)
}

/// Owns a grid and its episode state.
#[derive(Debug, Clone)]
pub struct GridEnv {
    grid: Grid,
    state: EnvState,
}

impl GridEnv {
    pub fn new(grid: Grid) -> Self {
        let state = reset(&grid);
        GridEnv { grid, state }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    pub fn pose(&self) -> Pose {
        self.state.pose
    }

    pub fn reset(&mut self) -> Pose {
        self.state = reset(&self.grid);
        self.state.pose
    }

    pub fn step<R: Rng + ?Sized>(&mut self, action: Action, rng: &mut R) -> Result<StepOutcome, EnvError> {
        step(&self.grid, &mut self.state, action, rng)
    }
}
