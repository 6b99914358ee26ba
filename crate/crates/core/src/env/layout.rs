//! Text layouts and the built-in worlds.
//!
//! Legend, one character per cell:
//!
//! | char | meaning                                   |
//! |------|-------------------------------------------|
//! | `#`  | wall                                      |
//! | `.`  | floor                                     |
//! | `L`  | lava (terminal)                           |
//! | `I`  | ice (slippery forward moves)              |
//! | `B`  | home cell of a moving ball                |
//! | `M`  | home cell of a randomly relocating wall   |
//! | `G`  | goal (terminal, rewarded)                 |
//! | `S`  | agent start, on floor, facing west        |
//!
//! Rows are newline separated and must all have the same length. A layout
//! whose outer ring is not entirely wall gets one wall ring added around it.

use super::{Cell, Direction, Grid, Pose, TileKind};
use thiserror::Error;

/// The canonical mixed-state playground, as shipped in `layouts/playground.txt`.
pub const PLAYGROUND_LAYOUT: &str = include_str!("../../layouts/playground.txt");

const SMALL_LAYOUT: &str = include_str!("../../layouts/small_deterministic.txt");
const UNARY_HARMLESS_DET: &str = include_str!("../../layouts/unary_harmless_deterministic.txt");
const UNARY_HARMFUL_DET: &str = include_str!("../../layouts/unary_harmful_deterministic.txt");
const UNARY_HARMLESS_STOCH: &str = include_str!("../../layouts/unary_harmless_stochastic.txt");
const UNARY_HARMFUL_STOCH: &str = include_str!("../../layouts/unary_harmful_stochastic.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("layout is empty")]
    Empty,
    #[error("row {row} has {found} cells, expected {expected}")]
    NonRectangular { row: usize, expected: usize, found: usize },
    #[error("unknown tile character {ch:?} at row {row}, column {col}")]
    UnknownTile { ch: char, row: usize, col: usize },
    #[error("layout has no start marker")]
    MissingStart,
    #[error("layout has {0} start markers, expected exactly one")]
    MultipleStarts(usize),
    #[error("start cell ({0}, {1}) is not floor")]
    StartNotFloor(usize, usize),
    #[error("border cell ({0}, {1}) is not a wall")]
    OpenBorder(usize, usize),
    #[error("tile array has {found} cells, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },
}

impl Grid {
    /// Validating constructor: the border must be walled and the start must
    /// sit on a floor tile.
    pub fn new(
        width: usize,
        height: usize,
        tiles: Vec<TileKind>,
        start: Pose,
        ball_home: Vec<Cell>,
        wall_home: Vec<Cell>,
    ) -> Result<Grid, LayoutError> {
        if width == 0 || height == 0 {
            return Err(LayoutError::Empty);
        }
        if tiles.len() != width * height {
            return Err(LayoutError::SizeMismatch { expected: width * height, found: tiles.len() });
        }
        for y in 0..height {
            for x in 0..width {
                let border = x == 0 || y == 0 || x + 1 == width || y + 1 == height;
                if border && tiles[y * width + x] != TileKind::Wall {
                    return Err(LayoutError::OpenBorder(x, y));
                }
            }
        }
        if start.x >= width || start.y >= height || tiles[start.y * width + start.x] != TileKind::Floor {
            return Err(LayoutError::StartNotFloor(start.x, start.y));
        }
        Ok(Grid::from_parts(width, height, tiles, start, ball_home, wall_home))
    }
}

fn parse_char(ch: char) -> Option<TileKind> {
    Some(match ch {
        '#' => TileKind::Wall,
        '.' | 'S' | 'M' => TileKind::Floor,
        'L' => TileKind::Lava,
        'I' => TileKind::Ice,
        'B' => TileKind::Ball,
        'G' => TileKind::Goal,
        _ => return None,
    })
}

/// Parses a layout document into a validated [`Grid`].
pub fn load_layout(text: &str) -> Result<Grid, LayoutError> {
    let mut rows: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while rows.last().is_some_and(|r| r.is_empty()) {
        rows.pop();
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(LayoutError::Empty);
    }
    let width = rows[0].chars().count();
    let height = rows.len();

    let mut tiles = Vec::with_capacity(width * height);
    let mut starts = Vec::new();
    let mut balls = Vec::new();
    let mut movers = Vec::new();
    for (y, row) in rows.iter().enumerate() {
        let found = row.chars().count();
        if found != width {
            return Err(LayoutError::NonRectangular { row: y, expected: width, found });
        }
        for (x, ch) in row.chars().enumerate() {
            let tile = parse_char(ch).ok_or(LayoutError::UnknownTile { ch, row: y, col: x })?;
            match ch {
                'S' => starts.push(Cell::new(x, y)),
                'B' => balls.push(Cell::new(x, y)),
                'M' => movers.push(Cell::new(x, y)),
                _ => {}
            }
            tiles.push(tile);
        }
    }
    let start = match starts.len() {
        0 => return Err(LayoutError::MissingStart),
        1 => starts[0],
        n => return Err(LayoutError::MultipleStarts(n)),
    };

    let closed = (0..height).all(|y| {
        (0..width).all(|x| {
            let border = x == 0 || y == 0 || x + 1 == width || y + 1 == height;
            !border || tiles[y * width + x] == TileKind::Wall
        })
    });
    if closed {
        let start = Pose::new(start.x, start.y, Direction::West);
        return Grid::new(width, height, tiles, start, balls, movers);
    }

    // Frame with one ring of wall.
    let (fw, fh) = (width + 2, height + 2);
    let mut framed = vec![TileKind::Wall; fw * fh];
    for y in 0..height {
        for x in 0..width {
            framed[(y + 1) * fw + x + 1] = tiles[y * width + x];
        }
    }
    let shift = |c: Cell| Cell::new(c.x + 1, c.y + 1);
    let start = Pose::new(start.x + 1, start.y + 1, Direction::West);
    Grid::new(
        fw,
        fh,
        framed,
        start,
        balls.into_iter().map(shift).collect(),
        movers.into_iter().map(shift).collect(),
    )
}

/// The canonical 16×16 mixed-state playground.
///
/// The agent starts in the upper-right room. The only exit is a one-cell
/// corridor that ends between two lava cells. Below the hallway, a 3×2 ice
/// patch flanked by lava is the shortcut into the large lower region; the
/// all-floor detour runs down the left edge.
pub fn builtin_playground() -> Grid {
    load_layout(PLAYGROUND_LAYOUT).expect("shipped playground layout is valid")
}

/// A 6×6 deterministic grid (floor, one wall, one lava) for oracle checks.
pub fn builtin_small() -> Grid {
    load_layout(SMALL_LAYOUT).expect("shipped small layout is valid")
}

/// Selector for the four single-feature worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct UnaryVariant {
    pub harmful: bool,
    pub stochastic: bool,
}

impl UnaryVariant {
    pub fn name(&self) -> &'static str {
        match (self.harmful, self.stochastic) {
            (false, false) => "unary-harmless-deterministic",
            (true, false) => "unary-harmful-deterministic",
            (false, true) => "unary-harmless-stochastic",
            (true, true) => "unary-harmful-stochastic",
        }
    }
}

/// One of the 2×2 harmful/harmless × deterministic/stochastic worlds. Each
/// has a single goal tile in the lower-right corner.
///
/// * harmless + deterministic: floor and wall blocks only
/// * harmful + deterministic: the blocks are lava
/// * harmless + stochastic: wall segments that wander every step
/// * harmful + stochastic: balls that wander every step and penalise contact
pub fn builtin_unary(variant: UnaryVariant) -> Grid {
    let text = match (variant.harmful, variant.stochastic) {
        (false, false) => UNARY_HARMLESS_DET,
        (true, false) => UNARY_HARMFUL_DET,
        (false, true) => UNARY_HARMLESS_STOCH,
        (true, true) => UNARY_HARMFUL_STOCH,
    };
    load_layout(text).expect("shipped unary layout is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing_adds_a_wall_ring() {
        let grid = load_layout("S..\n...\n...\n").unwrap();
        assert_eq!((grid.width(), grid.height()), (5, 5));
        assert_eq!(grid.count(TileKind::Wall), 16);
        assert_eq!(grid.start(), Pose::new(1, 1, Direction::West));
    }

    #[test]
    fn unknown_character_is_rejected() {
        let err = load_layout("###\n#SX\n###\n").unwrap_err();
        assert_eq!(err, LayoutError::UnknownTile { ch: 'X', row: 1, col: 2 });
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = load_layout("####\n#S.#\n###\n").unwrap_err();
        assert!(matches!(err, LayoutError::NonRectangular { row: 2, expected: 4, found: 3 }));
    }

    #[test]
    fn start_count_is_checked() {
        assert_eq!(load_layout("...\n...\n").unwrap_err(), LayoutError::MissingStart);
        assert_eq!(load_layout("S.S\n...\n").unwrap_err(), LayoutError::MultipleStarts(2));
        assert_eq!(load_layout("\n\n").unwrap_err(), LayoutError::Empty);
    }

    #[test]
    fn constructor_rejects_non_floor_start() {
        let mut tiles = vec![TileKind::Wall; 9];
        tiles[4] = TileKind::Ice;
        let err = Grid::new(3, 3, tiles, Pose::new(1, 1, Direction::West), vec![], vec![]).unwrap_err();
        assert_eq!(err, LayoutError::StartNotFloor(1, 1));
    }

    #[test]
    fn crlf_and_trailing_blank_lines_are_accepted() {
        let grid = load_layout("###\r\n#S#\r\n###\r\n\r\n").unwrap();
        assert_eq!((grid.width(), grid.height()), (3, 3));
    }

    #[test]
    fn playground_shape() {
        let grid = builtin_playground();
        assert_eq!((grid.width(), grid.height()), (16, 16));
        assert_eq!(grid.start(), Pose::new(14, 1, Direction::West));
        for kind in [TileKind::Floor, TileKind::Wall, TileKind::Lava, TileKind::Ice] {
            assert!(grid.count(kind) > 0, "{kind:?} missing");
        }
        assert!(!grid.has_movers());
        // upper-right quadrant
        assert!(grid.start().x >= 8 && grid.start().y < 8);
        assert_eq!(builtin_playground(), grid);
        assert_eq!(grid.to_layout_string(), PLAYGROUND_LAYOUT);
    }

    #[test]
    fn unary_variants() {
        let plain = builtin_unary(UnaryVariant { harmful: false, stochastic: false });
        assert_eq!(plain.count(TileKind::Lava) + plain.count(TileKind::Ball), 0);
        assert!(!plain.has_movers());

        let lava = builtin_unary(UnaryVariant { harmful: true, stochastic: false });
        assert!(lava.count(TileKind::Lava) >= 1);
        assert_eq!(lava.count(TileKind::Ball), 0);

        let walls = builtin_unary(UnaryVariant { harmful: false, stochastic: true });
        assert!(!walls.wall_home.is_empty());
        assert!(walls.ball_home.is_empty());

        let balls = builtin_unary(UnaryVariant { harmful: true, stochastic: true });
        assert!(!balls.ball_home.is_empty());
        assert_eq!(balls.count(TileKind::Lava), 0);

        for harmful in [false, true] {
            for stochastic in [false, true] {
                let g = builtin_unary(UnaryVariant { harmful, stochastic });
                assert_eq!(g.count(TileKind::Goal), 1);
            }
        }
    }
}
