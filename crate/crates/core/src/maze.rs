//! Grid maze with a reactive robot.
//!
//! The robot senses which of its four neighbours are walls (a 4-bit state)
//! and its 16-weight controller maps each state to a preferred heading. If
//! that heading is blocked it tries the next headings clockwise; if all four
//! are blocked it stays put.

use std::fmt::Write as _;

use thiserror::Error;

use crate::novelty::{knn_novelty, BehaviorPoint, NoveltyArchive};

pub const CONTROLLER_LEN: usize = 16;
pub const DEFAULT_MAX_STEPS: usize = 200;

/// A bundled deceptive maze: the goal sits behind a wall that a
/// distance-greedy robot presses against.
pub const MAZE1: &str = include_str!("../mazes/maze1.txt");
/// A bundled maze with a stronger trap next to the goal.
pub const MAZE2: &str = include_str!("../mazes/maze2.txt");

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "maze1" => Some(MAZE1),
        "maze2" => Some(MAZE2),
        _ => None,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MazeError {
    #[error("empty maze")]
    Empty,
    #[error("row {row} has length {len}, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("unexpected character {ch:?} at line {line}, column {col}")]
    BadChar { ch: char, line: usize, col: usize },
    #[error("missing start cell 'S'")]
    MissingStart,
    #[error("missing goal cell 'G'")]
    MissingGoal,
    #[error("duplicate {what} at line {line}, column {col}")]
    Duplicate { what: char, line: usize, col: usize },
    #[error("border cell at line {line}, column {col} is open")]
    OpenBorder { line: usize, col: usize },
    #[error("cell ({x}, {y}) is a wall")]
    WallCell { x: usize, y: usize },
}

pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heading {
    North,
    East,
    South,
    West,
}

impl Heading {
    const ALL: [Heading; 4] = [Heading::North, Heading::East, Heading::South, Heading::West];

    fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }
}

/// Rectangular occupancy grid; `(x, y)` with `y` growing southward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeGrid {
    pub width: usize,
    pub height: usize,
    walls: Vec<bool>,
    pub start: Cell,
    pub goal: Cell,
}

impl MazeGrid {
    pub fn is_wall(&self, (x, y): Cell) -> bool {
        x >= self.width || y >= self.height || self.walls[y * self.width + x]
    }

    fn step(&self, (x, y): Cell, h: Heading) -> Option<Cell> {
        let next = match h {
            Heading::North => (x, y.checked_sub(1)?),
            Heading::East => (x + 1, y),
            Heading::South => (x, y + 1),
            Heading::West => (x.checked_sub(1)?, y),
        };
        (!self.is_wall(next)).then_some(next)
    }

    /// Length of the grid diagonal.
    pub fn diagonal(&self) -> f64 {
        ((self.width * self.width + self.height * self.height) as f64).sqrt()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                s.push(if (x, y) == self.start {
                    'S'
                } else if (x, y) == self.goal {
                    'G'
                } else if self.is_wall((x, y)) {
                    '#'
                } else {
                    '.'
                });
            }
            s.push('\n');
        }
        s
    }
}

/// Parses rows of `#` (wall), `.` (open), `S` (start) and `G` (goal).
/// Line and column numbers in errors are 1-based.
pub fn parse_maze(text: &str) -> Result<MazeGrid, MazeError> {
    let rows: Vec<&str> = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(MazeError::Empty);
    }
    let width = rows[0].chars().count();
    let height = rows.len();
    let mut walls = Vec::with_capacity(width * height);
    let (mut start, mut goal) = (None, None);
    for (y, row) in rows.iter().enumerate() {
        let len = row.chars().count();
        if len != width {
            return Err(MazeError::Ragged {
                row: y + 1,
                len,
                expected: width,
            });
        }
        for (x, ch) in row.chars().enumerate() {
            let (line, col) = (y + 1, x + 1);
            let slot = match ch {
                '#' => {
                    walls.push(true);
                    continue;
                }
                '.' => None,
                'S' => Some(&mut start),
                'G' => Some(&mut goal),
                _ => return Err(MazeError::BadChar { ch, line, col }),
            };
            if let Some(slot) = slot {
                if slot.is_some() {
                    return Err(MazeError::Duplicate { what: ch, line, col });
                }
                *slot = Some((x, y));
            }
            if x == 0 || y == 0 || x + 1 == width || y + 1 == height {
                return Err(MazeError::OpenBorder { line, col });
            }
            walls.push(false);
        }
    }
    Ok(MazeGrid {
        width,
        height,
        walls,
        start: start.ok_or(MazeError::MissingStart)?,
        goal: goal.ok_or(MazeError::MissingGoal)?,
    })
}

/// Wall-adjacency bitmask: N = 1, E = 2, S = 4, W = 8.
pub fn sense_state(grid: &MazeGrid, pos: Cell) -> Result<usize, MazeError> {
    if grid.is_wall(pos) {
        return Err(MazeError::WallCell { x: pos.0, y: pos.1 });
    }
    Ok(Heading::ALL
        .iter()
        .enumerate()
        .filter(|(_, &h)| grid.step(pos, h).is_none())
        .map(|(bit, _)| 1 << bit)
        .sum())
}

/// Sixteen weights in `[0, 1]`, one per sensor state.
#[derive(Debug, Clone, PartialEq)]
pub struct Controller {
    pub weights: [f64; CONTROLLER_LEN],
}

impl Controller {
    pub fn from_slice(w: &[f64]) -> Option<Self> {
        let weights: [f64; CONTROLLER_LEN] = w.try_into().ok()?;
        weights
            .iter()
            .all(|v| (0.0..=1.0).contains(v))
            .then_some(Self { weights })
    }

    pub fn preferred(&self, state: usize) -> Heading {
        Heading::from_index(((self.weights[state] * 4.0).floor() as usize).min(3))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Cells in visiting order, starting at the start cell.
    pub cells: Vec<Cell>,
    pub reached_goal: bool,
    pub steps_used: usize,
}

impl Trajectory {
    pub fn endpoint(&self) -> Cell {
        *self.cells.last().expect("trajectory starts at the start cell")
    }

    pub fn endpoint_point(&self) -> BehaviorPoint {
        let (x, y) = self.endpoint();
        BehaviorPoint::from((x as f64, y as f64))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,x,y\n");
        for (i, (x, y)) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "{i},{x},{y}");
        }
        s
    }
}

/// Runs the controller from the start cell for at most `max_steps` steps,
/// stopping as soon as the goal is entered.
pub fn simulate(grid: &MazeGrid, c: &Controller, max_steps: usize) -> Trajectory {
    let mut pos = grid.start;
    let mut cells = vec![pos];
    let mut steps_used = 0;
    let mut reached_goal = pos == grid.goal;
    while steps_used < max_steps && !reached_goal {
        let state = sense_state(grid, pos).expect("robot stays on open cells");
        let d0 = c.preferred(state) as usize;
        if let Some(next) = (0..4).find_map(|turn| grid.step(pos, Heading::from_index(d0 + turn))) {
            pos = next;
        }
        cells.push(pos);
        steps_used += 1;
        reached_goal = pos == grid.goal;
    }
    Trajectory {
        cells,
        reached_goal,
        steps_used,
    }
}

/// `1 - dist(endpoint, goal) / diagonal`, clamped to `[0, 1]`.
pub fn distance_score(grid: &MazeGrid, endpoint: Cell) -> f64 {
    let dx = endpoint.0 as f64 - grid.goal.0 as f64;
    let dy = endpoint.1 as f64 - grid.goal.1 as f64;
    (1.0 - (dx * dx + dy * dy).sqrt() / grid.diagonal()).clamp(0.0, 1.0)
}

/// `(distance_score, novelty_score)` with the raw k-NN novelty already
/// computed; novelty is normalized by the diagonal and clamped to `[0, 1]`.
pub fn metrics_from_novelty(grid: &MazeGrid, endpoint: Cell, raw_novelty: f64) -> Vec<f64> {
    vec![
        distance_score(grid, endpoint),
        (raw_novelty / grid.diagonal()).clamp(0.0, 1.0),
    ]
}

/// Distance and phenotypic novelty of a trajectory's endpoint.
pub fn maze_metrics(
    trajectory: &Trajectory,
    grid: &MazeGrid,
    cohort_endpoints: &[BehaviorPoint],
    archive: &NoveltyArchive,
    k: usize,
) -> Vec<f64> {
    let raw = knn_novelty(&trajectory.endpoint_point(), cohort_endpoints, archive, k);
    metrics_from_novelty(grid, trajectory.endpoint(), raw)
}

/// SVG 1.1 drawing of the grid with the trajectory as a polyline.
pub fn render_svg(grid: &MazeGrid, trajectory: &Trajectory, cell_px: usize) -> String {
    let (w, h) = (grid.width * cell_px, grid.height * cell_px);
    let mut s = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    );
    for y in 0..grid.height {
        for x in 0..grid.width {
            let fill = if grid.is_wall((x, y)) {
                "black"
            } else if (x, y) == grid.start {
                "royalblue"
            } else if (x, y) == grid.goal {
                "crimson"
            } else {
                continue;
            };
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{cell_px}\" height=\"{cell_px}\" fill=\"{fill}\"/>",
                x * cell_px,
                y * cell_px
            );
        }
    }
    let half = cell_px as f64 / 2.0;
    let pts: Vec<String> = trajectory
        .cells
        .iter()
        .map(|&(x, y)| format!("{},{}", x as f64 * cell_px as f64 + half, y as f64 * cell_px as f64 + half))
        .collect();
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"green\" stroke-width=\"{}\"/>",
        pts.join(" "),
        (cell_px / 4).max(1)
    );
    s.push_str("</svg>\n");
    s
}
