//! Ground-truth gridworld: tiles, poses, the state encoding used by the
//! agent, stochastic dynamics, and the shipped layouts.

mod dynamics;
mod layout;

pub use dynamics::{reset, step, true_transitions, EnvError, EnvState, Event, GridEnv, StepOutcome};
pub use layout::{builtin_playground, builtin_small, builtin_unary, load_layout, LayoutError, UnaryVariant, PLAYGROUND_LAYOUT};

use std::fmt;

/// Kind of a single grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileKind {
    Floor,
    Wall,
    /// Terminal, penalised.
    Lava,
    /// Occupiable; forward moves from here slip.
    Ice,
    /// Home cell of a moving ball (floor underneath).
    Ball,
    /// Terminal, rewarded.
    Goal,
}

impl TileKind {
    /// Anything but a wall can hold the agent (lava and goal end the episode).
    pub fn is_occupiable(self) -> bool {
        !matches!(self, TileKind::Wall)
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, TileKind::Lava | TileKind::Goal)
    }

    /// Tiles that moving balls and walls may step onto.
    pub(crate) fn is_floor_like(self) -> bool {
        matches!(self, TileKind::Floor | TileKind::Ball)
    }

    pub fn symbol(self) -> char {
        match self {
            TileKind::Floor => '.',
            TileKind::Wall => '#',
            TileKind::Lava => 'L',
            TileKind::Ice => 'I',
            TileKind::Ball => 'B',
            TileKind::Goal => 'G',
        }
    }
}

/// Facing direction. The discriminant is the θ component of the state code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Direction {
    North = 0,
    East = 1,
    South = 2,
    West = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];

    pub fn from_index(i: usize) -> Option<Direction> {
        Self::ALL.get(i).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn turn_left(self) -> Direction {
        Self::ALL[(self.index() + 3) % 4]
    }

    pub fn turn_right(self) -> Direction {
        Self::ALL[(self.index() + 1) % 4]
    }

    /// (dx, dy) with y growing downwards.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::North => (0, -1),
            Direction::East => (1, 0),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
        }
    }
}

/// The three primitive actions. Discriminants are the action indices used by
/// the model and planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Action {
    TurnLeft = 0,
    TurnRight = 1,
    Forward = 2,
}

impl Action {
    pub const COUNT: usize = 3;
    pub const ALL: [Action; 3] = [Action::TurnLeft, Action::TurnRight, Action::Forward];

    pub fn from_index(i: usize) -> Option<Action> {
        Self::ALL.get(i).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A grid cell coordinate; `x` is the column, `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub fn new(x: usize, y: usize) -> Self {
        Cell { x, y }
    }
}

/// Agent configuration: position and facing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pose {
    pub x: usize,
    pub y: usize,
    pub dir: Direction,
}

impl Pose {
    pub fn new(x: usize, y: usize, dir: Direction) -> Self {
        Pose { x, y, dir }
    }

    pub fn cell(&self) -> Cell {
        Cell::new(self.x, self.y)
    }
}

impl fmt::Display for Pose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dir {
            Direction::North => 'N',
            Direction::East => 'E',
            Direction::South => 'S',
            Direction::West => 'W',
        };
        write!(f, "({},{},{})", self.x, self.y, d)
    }
}

/// Dense state code `((y * width) + x) * 4 + θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    pub fn new(i: usize) -> Self {
        StateId(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable world description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    width: usize,
    height: usize,
    tiles: Vec<TileKind>,
    start: Pose,
    /// Initial cells of moving balls.
    pub ball_home: Vec<Cell>,
    /// Initial cells of randomly relocating wall segments.
    pub wall_home: Vec<Cell>,
}

impl Grid {
    /// Builds a grid from raw parts. Callers are expected to have validated
    /// the invariants (walled border, floor start); see [`load_layout`].
    pub(crate) fn from_parts(
        width: usize,
        height: usize,
        tiles: Vec<TileKind>,
        start: Pose,
        ball_home: Vec<Cell>,
        wall_home: Vec<Cell>,
    ) -> Self {
        debug_assert_eq!(tiles.len(), width * height);
        Grid { width, height, tiles, start, ball_home, wall_home }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn start(&self) -> Pose {
        self.start
    }

    /// |Z| = width · height · 4.
    pub fn n_states(&self) -> usize {
        self.width * self.height * 4
    }

    pub fn tile(&self, cell: Cell) -> TileKind {
        self.tiles[cell.y * self.width + cell.x]
    }

    pub fn tiles(&self) -> &[TileKind] {
        &self.tiles
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| Cell::new(x, y)))
    }

    pub fn count(&self, kind: TileKind) -> usize {
        self.tiles.iter().filter(|&&t| t == kind).count()
    }

    /// True when the grid has moving balls or walls.
    pub fn has_movers(&self) -> bool {
        !self.ball_home.is_empty() || !self.wall_home.is_empty()
    }

    /// Neighbour of `cell` along `dir`, if it lies inside the array.
    pub fn neighbor(&self, cell: Cell, dir: Direction) -> Option<Cell> {
        let (dx, dy) = dir.delta();
        let x = cell.x as i64 + dx;
        let y = cell.y as i64 + dy;
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            None
        } else {
            Some(Cell::new(x as usize, y as usize))
        }
    }

    pub fn encode(&self, pose: Pose) -> StateId {
        StateId::new((pose.y * self.width + pose.x) * 4 + pose.dir.index())
    }

    /// Inverse of [`Grid::encode`]; `None` for codes outside `[0, |Z|)`.
    pub fn decode(&self, z: StateId) -> Option<Pose> {
        let i = z.index();
        if i >= self.n_states() {
            return None;
        }
        let dir = Direction::from_index(i % 4)?;
        let cell = i / 4;
        Some(Pose::new(cell % self.width, cell / self.width, dir))
    }

    /// A code is a valid pose when its cell can hold the agent.
    pub fn is_valid_state(&self, z: StateId) -> bool {
        self.decode(z).map(|p| self.tile(p.cell()).is_occupiable()).unwrap_or(false)
    }

    /// Renders the layout back to the text legend (start shown as `S`).
    pub fn to_layout_string(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let c = Cell::new(x, y);
                if c == self.start.cell() {
                    out.push('S');
                } else if self.wall_home.contains(&c) {
                    out.push('M');
                } else {
                    out.push(self.tile(c).symbol());
                }
            }
            out.push('\n');
        }
        out
    }
}
