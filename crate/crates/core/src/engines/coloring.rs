//! Exhaustive search for a "bad" coloring of a finite domain.
//!
//! Every Ramsey statement checked by this crate has the same shape: a finite
//! set of objects, a family of target sets ("cones") of objects, and the
//! question whether every `d`-coloring of the objects makes some cone
//! monochromatic. A bad coloring is one under which no cone is monochromatic.
//!
//! The search is a depth-first assignment of colors in object order. With
//! pruning on, a branch is cut as soon as some cone is completely colored
//! with a single color. With symmetry on, object `j` may only use colors up to
//! one more than the largest color used so far; the lexicographically first
//! bad coloring is always of that form, so both settings return the same
//! counterexample.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::{Error, Result};

/// Objects to color and the cones that must not all be monochromatic.
#[derive(Debug, Clone)]
pub struct ColoringProblem {
    object_labels: Vec<Value>,
    cones: Vec<Vec<usize>>,
    cone_labels: Vec<Value>,
}

impl ColoringProblem {
    pub fn new(object_labels: Vec<Value>, cones: Vec<Vec<usize>>, cone_labels: Vec<Value>) -> Result<Self> {
        if cones.len() != cone_labels.len() {
            return Err(Error::Dimension("one label per cone".into()));
        }
        let n = object_labels.len();
        let cones = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                if let Some(&x) = c.iter().find(|&&x| x >= n) {
                    return Err(Error::ElementOutOfRange { element: x, size: n });
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ColoringProblem {
            object_labels,
            cones,
            cone_labels,
        })
    }

    pub fn objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn object_labels(&self) -> &[Value] {
        &self.object_labels
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_label(&self, i: usize) -> &Value {
        &self.cone_labels[i]
    }

    /// First cone that `coloring` makes monochromatic. Empty cones count.
    pub fn find_homogeneous(&self, coloring: &[usize]) -> Option<usize> {
        self.cones.iter().position(|cone| match cone.first() {
            None => true,
            Some(&first) => cone.iter().all(|&o| coloring[o] == coloring[first]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub pruning: bool,
    pub symmetry: bool,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            pruning: true,
            symmetry: true,
        }
    }
}

impl Strategy {
    /// Plain enumeration of all `d^N` colorings.
    pub const BASELINE: Strategy = Strategy {
        pruning: false,
        symmetry: false,
    };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    /// Every coloring has a monochromatic cone.
    Holds,
    /// A coloring with no monochromatic cone.
    Bad(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: SearchVerdict,
    /// Partial colorings visited.
    pub nodes: u64,
}

struct State<'a> {
    problem: &'a ColoringProblem,
    object_cones: &'a [Vec<usize>],
    colors: usize,
    strategy: Strategy,
    coloring: Vec<usize>,
    max_used: Vec<usize>,
    colored: Vec<usize>,
    first_color: Vec<usize>,
    /// Depth of the object that made the cone two-colored, or `NOT_MIXED`.
    mixed_at: Vec<usize>,
}

const NOT_MIXED: usize = usize::MAX;

impl<'a> State<'a> {
    fn new(problem: &'a ColoringProblem, object_cones: &'a [Vec<usize>], colors: usize, strategy: Strategy) -> Self {
        let k = problem.cones.len();
        State {
            problem,
            object_cones,
            colors,
            strategy,
            coloring: Vec::with_capacity(problem.objects()),
            max_used: Vec::with_capacity(problem.objects()),
            colored: vec![0; k],
            first_color: vec![0; k],
            mixed_at: vec![NOT_MIXED; k],
        }
    }

    fn depth(&self) -> usize {
        self.coloring.len()
    }

    /// Colors the next object may take.
    fn choices(&self) -> usize {
        if self.strategy.symmetry {
            let used = self.max_used.last().map_or(0, |&m| m + 1);
            (used + 1).min(self.colors)
        } else {
            self.colors
        }
    }

    /// Colors the next object; returns false if that completes a monochromatic
    /// cone (only tracked with pruning on). Always pushes, so `pop` must follow.
    fn push(&mut self, color: usize) -> bool {
        let obj = self.coloring.len();
        self.coloring.push(color);
        let prev = self.max_used.last().copied();
        self.max_used.push(prev.map_or(color, |m| m.max(color)));
        if !self.strategy.pruning {
            return true;
        }
        let mut ok = true;
        for &c in &self.object_cones[obj] {
            if self.colored[c] == 0 {
                self.first_color[c] = color;
            } else if self.mixed_at[c] == NOT_MIXED && self.first_color[c] != color {
                self.mixed_at[c] = obj;
            }
            self.colored[c] += 1;
            if self.colored[c] == self.problem.cones[c].len() && self.mixed_at[c] == NOT_MIXED {
                ok = false;
            }
        }
        ok
    }

    fn pop(&mut self) {
        let obj = self.coloring.len() - 1;
        self.coloring.pop();
        self.max_used.pop();
        if !self.strategy.pruning {
            return;
        }
        for &c in &self.object_cones[obj] {
            self.colored[c] -= 1;
            if self.mixed_at[c] == obj {
                self.mixed_at[c] = NOT_MIXED;
            }
        }
    }

    fn leaf_is_bad(&self) -> bool {
        self.problem.find_homogeneous(&self.coloring).is_none()
    }
}

enum BranchResult {
    Exhausted(u64),
    Found(Vec<usize>, u64),
    OverBudget,
    Cancelled,
}

struct Dfs<'s, 'a> {
    state: &'s mut State<'a>,
    nodes: u64,
    budget: u64,
    cancel: Option<(&'s AtomicUsize, usize)>,
}

enum Flow {
    Continue,
    Found,
    Stop,
}

impl Dfs<'_, '_> {
    fn run(&mut self) -> Flow {
        if self.state.depth() == self.state.problem.objects() {
            return if self.state.leaf_is_bad() { Flow::Found } else { Flow::Continue };
        }
        for color in 0..self.state.choices() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Flow::Stop;
            }
            if self.nodes & 0x3ff == 0 {
                if let Some((decided, me)) = self.cancel {
                    if decided.load(Ordering::Relaxed) < me {
                        return Flow::Stop;
                    }
                }
            }
            if self.state.push(color) {
                match self.run() {
                    Flow::Continue => {}
                    // The state is discarded after a stop; a find keeps the coloring.
                    other => return other,
                }
            }
            self.state.pop();
        }
        Flow::Continue
    }
}

fn object_cones(problem: &ColoringProblem) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); problem.objects()];
    for (c, cone) in problem.cones.iter().enumerate() {
        for &o in cone {
            out[o].push(c);
        }
    }
    out
}

/// Number of top-level branches the search is split into.
const TARGET_BRANCHES: usize = 64;

/// Searches for a bad `colors`-coloring of `problem`.
///
/// The work is split into prefix branches that depend only on the problem,
/// so the outcome (including the node count) is the same for every `jobs`
/// setting. Each branch may visit up to `config.max_colorings` nodes and the
/// total over the branches that decide the outcome must stay within it too.
pub fn search(problem: &ColoringProblem, colors: usize, config: &RunConfig, strategy: Strategy) -> Result<SearchOutcome> {
    if colors == 0 {
        return Err(Error::Precondition("at least one color is required".into()));
    }
    if problem.objects() > config.max_domain {
        return Err(Error::infeasible(
            "coloring domain",
            format!("{} objects", problem.objects()),
            format!("{} objects", config.max_domain),
        ));
    }
    if problem.cones.iter().any(Vec::is_empty) {
        return Ok(SearchOutcome {
            verdict: SearchVerdict::Holds,
            nodes: 0,
        });
    }
    let cones_of = object_cones(problem);

    // Breadth-first prefixes until there are enough branches.
    let mut prefix_nodes = 0u64;
    let mut prefixes: Vec<Vec<usize>> = vec![Vec::new()];
    let mut depth = 0;
    while prefixes.len() < TARGET_BRANCHES && depth < problem.objects() {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let mut state = State::new(problem, &cones_of, colors, strategy);
            for &c in prefix {
                state.push(c);
            }
            for color in 0..state.choices() {
                prefix_nodes += 1;
                if state.push(color) {
                    next.push(state.coloring.clone());
                }
                state.pop();
            }
        }
        prefixes = next;
        depth += 1;
        if prefix_nodes > config.max_colorings {
            return Err(over_budget(config));
        }
    }

    let decided = AtomicUsize::new(usize::MAX);
    let run_branch = |index: usize, prefix: &Vec<usize>| -> BranchResult {
        if decided.load(Ordering::Relaxed) < index {
            return BranchResult::Cancelled;
        }
        let mut state = State::new(problem, &cones_of, colors, strategy);
        for &c in prefix {
            state.push(c);
        }
        let mut dfs = Dfs {
            state: &mut state,
            nodes: 0,
            budget: config.max_colorings,
            cancel: Some((&decided, index)),
        };
        let flow = dfs.run();
        let nodes = dfs.nodes;
        match flow {
            Flow::Continue => BranchResult::Exhausted(nodes),
            Flow::Found => {
                decided.fetch_min(index, Ordering::Relaxed);
                BranchResult::Found(state.coloring.clone(), nodes)
            }
            Flow::Stop if nodes > config.max_colorings => {
                decided.fetch_min(index, Ordering::Relaxed);
                BranchResult::OverBudget
            }
            Flow::Stop => BranchResult::Cancelled,
        }
    };

    let results: Vec<BranchResult> = if config.jobs <= 1 {
        let mut out = Vec::new();
        for (i, p) in prefixes.iter().enumerate() {
            let r = run_branch(i, p);
            let decisive = matches!(r, BranchResult::Found(..) | BranchResult::OverBudget);
            out.push(r);
            if decisive {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| prefixes.par_iter().enumerate().map(|(i, p)| run_branch(i, p)).collect())
    };

    let mut nodes = prefix_nodes;
    for result in results {
        match result {
            BranchResult::Exhausted(n) => nodes += n,
            BranchResult::Found(coloring, n) => {
                nodes += n;
                if nodes > config.max_colorings {
                    return Err(over_budget(config));
                }
                return Ok(SearchOutcome {
                    verdict: SearchVerdict::Bad(coloring),
                    nodes,
                });
            }
            BranchResult::OverBudget => return Err(over_budget(config)),
            BranchResult::Cancelled => {
                unreachable!("branches before the deciding one are never cancelled")
            }
        }
        if nodes > config.max_colorings {
            return Err(over_budget(config));
        }
    }
    // No prefix survived, or every branch was exhausted.
    Ok(SearchOutcome {
        verdict: SearchVerdict::Holds,
        nodes,
    })
}

fn over_budget(config: &RunConfig) -> Error {
    Error::infeasible(
        "exhaustive coloring search",
        format!("more than {} partial colorings", config.max_colorings),
        format!("{} partial colorings", config.max_colorings),
    )
}
