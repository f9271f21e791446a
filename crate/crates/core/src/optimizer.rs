//! The hierarchical surrogate-assisted search loop.
//!
//! A run starts from a maximin Latin hypercube and then alternates two
//! phases until the real-evaluation budget is spent:
//!
//! * **global**: every population member produces one DE offspring, a
//!   global RBF trained on the whole archive ranks them, and only the
//!   best-ranked offspring is truly evaluated. The phase continues while
//!   it keeps improving the incumbent.
//! * **local**: the `n_local` best archived points train a local model,
//!   DE minimizes that model inside the points' bounding box, and the
//!   minimizer is truly evaluated. The phase continues while it keeps
//!   improving the incumbent.
//!
//! [`Algorithm::Rphsa`] uses a random-projection RBF ensemble as the local
//! model; [`Algorithm::Baseline`] uses one full-dimensional RBF and is
//! otherwise identical.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::benchmarks::{Problem, ProblemDescriptor};
use crate::de::{crossover, de_optimize, mutate, DeParams, DeResult, Population};
use crate::error::{Error, Result};
use crate::numerics::{inf_distance, RngStream};
use crate::projection::{build_rp_rbf_with, ProjectionKind, RpRbfEnsemble};
use crate::sampling::{olhs_with_candidates, DEFAULT_CANDIDATES};
use crate::space::{Bounds, Solution};
use crate::surrogate::{
    train_rbf_with_gram, GramCache, RbfModel, Surrogate, TrainingSet, DUPLICATE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Local model is the projected RBF ensemble.
    Rphsa,
    /// Local model is a single RBF in the full space.
    Baseline,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Rphsa => "rphsa",
            Algorithm::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rphsa" => Ok(Algorithm::Rphsa),
            "baseline" | "esao" => Ok(Algorithm::Baseline),
            other => Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// DE settings for minimizing the local model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerDe {
    pub params: DeParams,
    pub generations: usize,
}

impl Default for InnerDe {
    fn default() -> Self {
        Self {
            params: DeParams::default(),
            generations: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RphsaConfig {
    /// Subspace dimension.
    pub k: usize,
    /// Number of best archive entries used to train the local model.
    pub n_local: usize,
    /// Number of subspaces; `None` means `4 * ceil(d / k)`.
    pub m: Option<usize>,
    /// Maximum number of real evaluations, initial design included.
    pub budget: usize,
    pub init_size: usize,
    /// Operators of the global search. The global population is the initial
    /// design plus injected local optima, so `pop_size` is not used there.
    pub de: DeParams,
    pub inner_de: InnerDe,
    pub seed: u64,
    pub projection: ProjectionKind,
    pub olhs_candidates: usize,
    /// Consecutive duplicate candidates tolerated before giving up.
    pub max_rejections: usize,
}

impl Default for RphsaConfig {
    fn default() -> Self {
        Self {
            k: 50,
            n_local: 100,
            m: None,
            budget: 1000,
            init_size: 100,
            de: DeParams::default(),
            inner_de: InnerDe::default(),
            seed: 0,
            projection: ProjectionKind::Gaussian,
            olhs_candidates: DEFAULT_CANDIDATES,
            max_rejections: 100,
        }
    }
}

impl RphsaConfig {
    /// `m`, falling back to `4 * ceil(dim / k)`.
    pub fn effective_m(&self, dim: usize) -> usize {
        self.m.unwrap_or_else(|| 4 * dim.div_ceil(self.k.max(1)))
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.k == 0 || self.k > dim {
            return bad(format!(
                "subspace dimension k = {} must be in 1..={dim}",
                self.k
            ));
        }
        if self.n_local < 2 {
            return bad(format!("n_local = {} must be at least 2", self.n_local));
        }
        if self.m == Some(0) {
            return bad("m must be at least 1".into());
        }
        if self.init_size < crate::de::MIN_POPULATION {
            return bad(format!(
                "init_size = {} must be at least {}",
                self.init_size,
                crate::de::MIN_POPULATION
            ));
        }
        if self.budget < self.init_size {
            return bad(format!(
                "budget {} is smaller than init_size {}",
                self.budget, self.init_size
            ));
        }
        if self.projection == ProjectionKind::Identity && self.k != dim {
            return bad("the identity projection needs k = d".into());
        }
        DeParams {
            pop_size: crate::de::MIN_POPULATION,
            ..self.de
        }
        .validate()?;
        self.inner_de.params.validate()
    }
}

/// Every truly evaluated point, in evaluation order.
#[derive(Debug, Clone, Default)]
pub struct Archive {
    entries: Vec<Solution>,
    best_index: Option<usize>,
}

impl Archive {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Solution] {
        &self.entries
    }

    pub fn best(&self) -> Option<&Solution> {
        self.best_index.map(|i| &self.entries[i])
    }

    pub fn best_index(&self) -> Option<usize> {
        self.best_index
    }

    pub fn best_fitness(&self) -> f64 {
        self.best().map_or(f64::INFINITY, Solution::fitness_or_inf)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.entries
            .iter()
            .any(|e| inf_distance(&e.position, x) < DUPLICATE_TOLERANCE)
    }

    /// Appends an evaluated point; the incumbent changes only on strict
    /// improvement, so ties keep the earliest entry.
    pub fn push(&mut self, position: Vec<f64>, fitness: f64) -> usize {
        let index = self.entries.len();
        self.entries.push(Solution::evaluated(position, fitness));
        if fitness < self.best_fitness() {
            self.best_index = Some(index);
        }
        index
    }

    /// Indices of the `n` best entries, fitness ascending, ties by insertion.
    pub fn best_indices(&self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.entries.len()).collect();
        idx.sort_by(|&a, &b| {
            self.entries[a]
                .fitness_or_inf()
                .total_cmp(&self.entries[b].fitness_or_inf())
        });
        idx.truncate(n);
        idx
    }

    fn training_set(&self, indices: &[usize]) -> Result<TrainingSet> {
        let points: Vec<&[f64]> = indices
            .iter()
            .map(|&i| self.entries[i].position.as_slice())
            .collect();
        let fitness = indices
            .iter()
            .map(|&i| self.entries[i].fitness_or_inf())
            .collect();
        TrainingSet::from_points(&points, fitness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Global,
    Local,
}

/// What one global or local step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub phase: Phase,
    /// Real evaluation count after the step.
    pub fe: usize,
    pub spent_fe: bool,
    pub improved_best: bool,
    /// Global steps only: the offspring replaced its parent.
    pub replaced_parent: bool,
    pub next: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub fe: usize,
    pub best_f: f64,
}

/// Everything recorded about one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub problem: ProblemDescriptor,
    pub seed: u64,
    pub config: RphsaConfig,
    /// Best-so-far after every real evaluation.
    pub history: Vec<HistoryPoint>,
    /// Local searches performed.
    pub nls: usize,
    /// Local searches that improved the incumbent.
    pub nti: usize,
    /// Global steps that spent a real evaluation.
    pub ngs: usize,
    /// Candidates skipped because they were already archived.
    pub duplicates: usize,
    pub archive_size: usize,
    pub final_best: Solution,
    pub steps: Vec<StepLog>,
}

impl RunRecord {
    pub fn final_fitness(&self) -> f64 {
        self.final_best.fitness_or_inf()
    }

    pub fn evaluations(&self) -> usize {
        self.history.last().map_or(0, |h| h.fe)
    }

    pub fn nti_over_nls(&self) -> f64 {
        if self.nls == 0 {
            0.0
        } else {
            self.nti as f64 / self.nls as f64
        }
    }

    /// Writes `run_id,fe,best_f` rows, header included.
    pub fn write_csv<W: std::io::Write>(&self, writer: W, run_id: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["run_id", "fe", "best_f"])?;
        for h in &self.history {
            w.serialize((run_id, h.fe, h.best_f))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The model minimized during a local step.
#[derive(Debug, Clone)]
pub enum LocalModel {
    Ensemble(RpRbfEnsemble),
    Plain(RbfModel),
}

impl Surrogate for LocalModel {
    fn dim(&self) -> usize {
        match self {
            LocalModel::Ensemble(e) => e.dim(),
            LocalModel::Plain(m) => m.dim(),
        }
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            LocalModel::Ensemble(e) => e.predict_unchecked(x),
            LocalModel::Plain(m) => m.predict_unchecked(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalOutcome {
    /// Offspring beat the incumbent; stay global.
    Improved { replaced_parent: bool },
    /// No improvement of the incumbent; switch to local.
    SwitchToLocal { replaced_parent: bool },
    /// Every offspring was already archived; no evaluation, switch to local.
    AllDuplicates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOutcome {
    /// Local optimum beat the incumbent; stay local.
    Improved,
    /// No improvement; switch to global.
    SwitchToGlobal,
    /// Local optimum was already archived; no evaluation, switch to global.
    Duplicate,
}

/// Internals of a local step, kept for analysis.
#[derive(Debug, Clone)]
pub struct LocalStepDetail {
    pub training: TrainingSet,
    pub model: LocalModel,
    pub region: Bounds,
    pub search: DeResult,
    pub outcome: LocalOutcome,
}

/// Step-by-step driver for one run.
pub struct Runner<'p> {
    problem: &'p mut Problem,
    cfg: RphsaConfig,
    algorithm: Algorithm,
    m: usize,
    rng: RngStream,
    archive: Archive,
    population: Population,
    phase: Phase,
    history: Vec<HistoryPoint>,
    steps: Vec<StepLog>,
    nls: usize,
    nti: usize,
    ngs: usize,
    duplicates: usize,
    rejections: usize,
    global_gram: GramCache,
}

impl<'p> Runner<'p> {
    /// Validates the configuration and evaluates the initial design.
    pub fn new(problem: &'p mut Problem, cfg: RphsaConfig, algorithm: Algorithm) -> Result<Self> {
        let dim = problem.dim();
        cfg.validate(dim)?;
        if problem.eval_count() != 0 {
            return Err(Error::InvalidConfig(format!(
                "problem already has {} evaluations",
                problem.eval_count()
            )));
        }
        let mut rng = RngStream::new(cfg.seed);
        let bounds = problem.bounds().clone();
        let design = olhs_with_candidates(cfg.init_size, &bounds, cfg.olhs_candidates, &mut rng)?;

        let mut runner = Self {
            m: cfg.effective_m(dim),
            problem,
            cfg,
            algorithm,
            rng,
            archive: Archive::default(),
            population: Population::new(Vec::new(), bounds),
            phase: Phase::Global,
            history: Vec::new(),
            steps: Vec::new(),
            nls: 0,
            nti: 0,
            ngs: 0,
            duplicates: 0,
            rejections: 0,
            global_gram: GramCache::default(),
        };
        for x in design.points {
            let f = runner.evaluate(&x)?;
            runner
                .population
                .individuals
                .push(Solution::evaluated(x, f));
        }
        Ok(runner)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn evaluations(&self) -> usize {
        self.problem.eval_count() as usize
    }

    pub fn is_done(&self) -> bool {
        self.evaluations() >= self.cfg.budget
    }

    pub fn steps(&self) -> &[StepLog] {
        &self.steps
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let f = self.problem.evaluate(x)?;
        self.archive.push(x.to_vec(), f);
        self.history.push(HistoryPoint {
            fe: self.evaluations(),
            best_f: self.archive.best_fitness(),
        });
        self.rejections = 0;
        Ok(f)
    }

    fn reject(&mut self) -> Result<()> {
        self.duplicates += 1;
        self.rejections += 1;
        if self.rejections >= self.cfg.max_rejections {
            return Err(Error::ArchiveExhausted(self.rejections));
        }
        Ok(())
    }

    fn log(&mut self, phase: Phase, spent_fe: bool, improved_best: bool, replaced_parent: bool) {
        self.steps.push(StepLog {
            phase,
            fe: self.evaluations(),
            spent_fe,
            improved_best,
            replaced_parent,
            next: self.phase,
        });
    }

    /// Runs one step of the current phase. Does nothing once the budget is spent.
    pub fn step(&mut self) -> Result<()> {
        if self.is_done() {
            return Ok(());
        }
        match self.phase {
            Phase::Global => self.global_step().map(drop),
            Phase::Local => self.local_step().map(drop),
        }
    }

    /// One prescreened DE generation over the global population.
    pub fn global_step(&mut self) -> Result<GlobalOutcome> {
        let best = self
            .archive
            .best()
            .expect("initial design evaluated")
            .position
            .clone();
        let mut offspring = Vec::with_capacity(self.population.len());
        for i in 0..self.population.len() {
            let mutant = mutate(&self.population, i, &best, &self.cfg.de, &mut self.rng)?;
            let trial = crossover(
                &self.population.individuals[i].position,
                &mutant,
                &self.cfg.de,
                &mut self.rng,
            )?;
            offspring.push(trial);
        }
        self.population.generation += 1;

        let points: Vec<&[f64]> = self
            .archive
            .entries
            .iter()
            .map(|e| e.position.as_slice())
            .collect();
        let fitness: Vec<f64> = self
            .archive
            .entries
            .iter()
            .map(Solution::fitness_or_inf)
            .collect();
        let gram = self.global_gram.update(&points);
        let global = train_rbf_with_gram(&points, &fitness, &gram)?;
        let predictions: Vec<f64> = offspring
            .iter()
            .map(|x| global.predict_unchecked(x))
            .collect();

        let mut order: Vec<usize> = (0..offspring.len()).collect();
        order.sort_by(|&a, &b| predictions[a].total_cmp(&predictions[b]));
        let Some(chosen) = order
            .into_iter()
            .find(|&i| !self.archive.contains(&offspring[i]))
        else {
            self.reject()?;
            self.phase = Phase::Local;
            self.log(Phase::Global, false, false, false);
            return Ok(GlobalOutcome::AllDuplicates);
        };

        let incumbent = self.archive.best_fitness();
        let x_g = offspring.swap_remove(chosen);
        let f_g = self.evaluate(&x_g)?;
        self.ngs += 1;
        let parent = &mut self.population.individuals[chosen];
        let replaced_parent = f_g < parent.fitness_or_inf();
        if replaced_parent {
            *parent = Solution::evaluated(x_g, f_g);
        }
        let outcome = if f_g < incumbent {
            GlobalOutcome::Improved { replaced_parent }
        } else {
            self.phase = Phase::Local;
            GlobalOutcome::SwitchToLocal { replaced_parent }
        };
        self.log(Phase::Global, true, f_g < incumbent, replaced_parent);
        Ok(outcome)
    }

    pub fn local_step(&mut self) -> Result<LocalOutcome> {
        self.local_step_detailed().map(|d| d.outcome)
    }

    /// A local step that also returns the trained model and the inner DE result.
    pub fn local_step_detailed(&mut self) -> Result<LocalStepDetail> {
        self.nls += 1;
        // Drawn for both algorithms so their random streams stay aligned.
        let mut model_rng = self.rng.child();
        let chosen = self.archive.best_indices(self.cfg.n_local);
        let training = self.archive.training_set(&chosen)?;
        let model = match self.algorithm {
            Algorithm::Rphsa => LocalModel::Ensemble(build_rp_rbf_with(
                &training,
                self.cfg.k,
                self.m,
                self.cfg.projection,
                &mut model_rng,
            )?),
            Algorithm::Baseline => LocalModel::Plain(crate::surrogate::train_rbf(&training)?),
        };

        let points: Vec<&[f64]> = chosen
            .iter()
            .map(|&i| self.archive.entries[i].position.as_slice())
            .collect();
        let region = self.problem.bounds().bounding_box_within(&points);
        let search = de_optimize(
            |x| model.predict_unchecked(x),
            &region,
            &self.cfg.inner_de.params,
            self.cfg.inner_de.generations,
            &mut self.rng,
        )?;
        let x_l = search.best.position.clone();

        let outcome = if self.archive.contains(&x_l) {
            self.reject()?;
            self.phase = Phase::Global;
            self.log(Phase::Local, false, false, false);
            LocalOutcome::Duplicate
        } else {
            let incumbent = self.archive.best_fitness();
            let f_l = self.evaluate(&x_l)?;
            if f_l < incumbent {
                self.nti += 1;
                self.population
                    .individuals
                    .push(Solution::evaluated(x_l, f_l));
                self.log(Phase::Local, true, true, false);
                LocalOutcome::Improved
            } else {
                self.phase = Phase::Global;
                self.log(Phase::Local, true, false, false);
                LocalOutcome::SwitchToGlobal
            }
        };
        Ok(LocalStepDetail {
            training,
            model,
            region,
            search,
            outcome,
        })
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(())
    }

    pub fn finish(self) -> RunRecord {
        RunRecord {
            algorithm: self.algorithm,
            problem: self.problem.descriptor(),
            seed: self.cfg.seed,
            final_best: self.archive.best().cloned().expect("non-empty archive"),
            archive_size: self.archive.len(),
            config: self.cfg,
            history: self.history,
            nls: self.nls,
            nti: self.nti,
            ngs: self.ngs,
            duplicates: self.duplicates,
            steps: self.steps,
        }
    }
}

/// Runs `algorithm` on `problem` until the budget is spent.
pub fn run(problem: &mut Problem, cfg: &RphsaConfig, algorithm: Algorithm) -> Result<RunRecord> {
    let mut runner = Runner::new(problem, cfg.clone(), algorithm)?;
    runner.run_to_end()?;
    Ok(runner.finish())
}

pub fn run_rphsa(problem: &mut Problem, cfg: &RphsaConfig) -> Result<RunRecord> {
    run(problem, cfg, Algorithm::Rphsa)
}

/// The same loop with a single full-dimensional RBF as the local model.
pub fn run_baseline_esao(problem: &mut Problem, cfg: &RphsaConfig) -> Result<RunRecord> {
    run(problem, cfg, Algorithm::Baseline)
}
