use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::survival::ideal_corners;
use super::{
    lhs_init, nsga2_survival, polynomial_mutation, rnsga2_survival, tournament_select,
    uniform_crossover, Candidate, EvoError, Individual,
};
use crate::ObjectivePoint;

#[derive(Debug, Clone, PartialEq)]
pub struct VariationConfig {
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Polynomial mutation distribution index.
    pub eta: f64,
}

impl Default for VariationConfig {
    fn default() -> Self {
        Self {
            crossover_rate: 0.9,
            mutation_rate: 0.3,
            eta: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Survival {
    Nsga2,
    /// `reference_points = None` uses the two corners of the merged set's
    /// bounding box, recomputed every generation.
    RNsga2 {
        reference_points: Option<Vec<ObjectivePoint>>,
        epsilon: f64,
    },
}

impl Survival {
    pub fn rnsga2_default() -> Self {
        Survival::RNsga2 {
            reference_points: None,
            epsilon: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EAConfig {
    pub dimension: usize,
    pub population_size: usize,
    pub offspring_size: usize,
    pub variation: VariationConfig,
    pub survival: Survival,
}

impl EAConfig {
    /// NSGA-II on `dimension` genes with population 60 and offspring 30.
    pub fn nsga2(dimension: usize) -> Self {
        Self {
            dimension,
            population_size: 60,
            offspring_size: 30,
            variation: VariationConfig::default(),
            survival: Survival::Nsga2,
        }
    }

    pub fn rnsga2(dimension: usize) -> Self {
        Self {
            survival: Survival::rnsga2_default(),
            ..Self::nsga2(dimension)
        }
    }
}

/// Population, generator and configuration of an ask/tell engine.
///
/// Cloning yields an independent copy (including the generator state),
/// which is how throw-away look-ahead copies are made.
#[derive(Debug, Clone)]
pub struct EAState {
    config: EAConfig,
    population: Vec<Individual>,
    rng: ChaCha8Rng,
    generation: usize,
}

impl EAState {
    pub fn new(config: EAConfig, seed: u64) -> Result<Self, EvoError> {
        if config.dimension == 0 || config.population_size == 0 || config.offspring_size == 0 {
            return Err(EvoError::InvalidCount);
        }
        let v = &config.variation;
        for rate in [v.crossover_rate, v.mutation_rate] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(EvoError::InvalidRate(rate));
            }
        }
        if !(v.eta > 0.0) {
            return Err(EvoError::InvalidEta(v.eta));
        }
        if let Survival::RNsga2 {
            epsilon,
            reference_points,
        } = &config.survival
        {
            if !(*epsilon > 0.0) {
                return Err(EvoError::InvalidEpsilon(*epsilon));
            }
            if reference_points.as_ref().is_some_and(Vec::is_empty) {
                return Err(EvoError::NoReferencePoints);
            }
        }
        Ok(Self {
            config,
            population: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            generation: 0,
        })
    }

    pub fn config(&self) -> &EAConfig {
        &self.config
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Replaces the generator, e.g. to decorrelate a throw-away copy from
    /// the live engine.
    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    /// Asks for `m` new candidates.
    ///
    /// An empty population yields a Latin hypercube warm start. Otherwise
    /// candidates come from binary tournament, uniform crossover and
    /// polynomial mutation; a child whose identity already exists in the
    /// population (or earlier in the batch) is redrawn, up to `10 m`
    /// attempts, after which duplicates are let through.
    pub fn infill(&mut self, m: usize) -> Result<Vec<Candidate>, EvoError> {
        if m == 0 {
            return Err(EvoError::InvalidCount);
        }
        let d = self.config.dimension;
        if self.population.is_empty() {
            return Ok(lhs_init(m, d, &mut self.rng));
        }
        let v = self.config.variation.clone();
        let mut seen: BTreeSet<_> = self.population.iter().map(|i| i.candidate.id()).collect();
        let mut out = Vec::with_capacity(m);
        let cap = 10 * m;
        let mut attempts = 0usize;
        while out.len() < m {
            let p1 = tournament_select(&self.population, &mut self.rng)?.candidate.clone();
            let p2 = tournament_select(&self.population, &mut self.rng)?.candidate.clone();
            let (c1, c2) = uniform_crossover(&p1, &p2, v.crossover_rate, &mut self.rng)?;
            for child in [c1, c2] {
                if out.len() == m {
                    break;
                }
                let child = polynomial_mutation(&child, v.mutation_rate, v.eta, &mut self.rng)?;
                attempts += 1;
                let id = child.id();
                if seen.contains(&id) && attempts <= cap {
                    continue;
                }
                seen.insert(id);
                out.push(child);
            }
        }
        Ok(out)
    }

    /// Tells the engine about evaluated individuals: survivors of
    /// population ∪ evaluated are kept and the generation counter advances.
    pub fn advance(&mut self, evaluated: Vec<Individual>) -> Result<(), EvoError> {
        if evaluated.iter().any(|i| i.objectives.is_none()) {
            return Err(EvoError::MissingObjectives);
        }
        for ind in &evaluated {
            if ind.candidate.dim() != self.config.dimension {
                return Err(EvoError::DimensionMismatch {
                    expected: self.config.dimension,
                    got: ind.candidate.dim(),
                });
            }
        }
        self.generation += 1;
        if evaluated.is_empty() {
            return Ok(());
        }
        let mut merged = core::mem::take(&mut self.population);
        merged.extend(evaluated);
        let mu = self.config.population_size;
        self.population = match &self.config.survival {
            Survival::Nsga2 => nsga2_survival(merged, mu)?,
            Survival::RNsga2 {
                reference_points,
                epsilon,
            } => {
                let refs = match reference_points {
                    Some(r) => r.clone(),
                    None => ideal_corners(&merged)?,
                };
                rnsga2_survival(merged, &refs, *epsilon, mu)?
            }
        };
        Ok(())
    }
}
