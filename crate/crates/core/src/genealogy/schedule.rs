use serde::{Deserialize, Serialize};

use super::{CoincidenceRecord, Ledger, MatingPolicy};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::geometry::{seed_objects, Gender, SeedMode, DEFAULT_SEED_RETRIES};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedConfig {
    pub adams: usize,
    pub mode: SeedMode,
    pub field: FieldSpec,
    /// Gender of generation 0. Seeding with lines runs the dual iteration.
    pub seed_gender: Gender,
}

impl SeedConfig {
    pub fn new(adams: usize, mode: SeedMode, field: FieldSpec) -> Self {
        SeedConfig {
            adams,
            mode,
            field,
            seed_gender: Gender::Point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: SeedConfig,
    pub policy: MatingPolicy,
    pub max_generation: u32,
    /// Independent instances whose counts must agree.
    pub verify_runs: u32,
    pub resample_limit: u32,
    /// Threads used to evaluate candidate pairs; 0 means the rayon default.
    pub workers: usize,
}

impl RunConfig {
    pub fn new(seed: SeedConfig, policy: MatingPolicy, max_generation: u32) -> Self {
        RunConfig {
            seed,
            policy,
            max_generation,
            verify_runs: 2,
            resample_limit: DEFAULT_SEED_RETRIES,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.seed.field.validate()?;
        if self.seed.adams < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 seeds, got {}",
                self.seed.adams
            )));
        }
        if self.verify_runs < 1 {
            return Err(Error::InvalidConfig("verify runs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which random instance a ledger belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub index: u32,
    pub attempt: u32,
    pub prime: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput<F: Field> {
    /// One ledger per verification instance, in instance order.
    pub ledgers: Vec<Ledger<F>>,
    pub new_counts: Vec<u64>,
    pub cumulative_by_gender: Vec<u64>,
    pub coincidence_log: Vec<CoincidenceRecord>,
    pub instances: Vec<InstanceInfo>,
    pub resamples: u32,
}

/// Running totals of each gender: entry `g` sums the new counts of generations `g, g-2, ...`.
pub fn cumulative_by_gender(new_counts: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(new_counts.len());
    for (g, &n) in new_counts.iter().enumerate() {
        let before = if g >= 2 { out[g - 2] } else { 0 };
        out.push(before + n);
    }
    out
}

type GenerationHook<'a, F> = Box<dyn FnMut(&Ledger<F>) -> Result<()> + 'a>;

/// A configured run, optionally resumed from saved ledgers.
pub struct Schedule<'a, F: Field> {
    config: &'a RunConfig,
    resumed: Vec<Ledger<F>>,
    hook: Option<GenerationHook<'a, F>>,
}

impl<'a, F: Field> Schedule<'a, F> {
    pub fn new(config: &'a RunConfig) -> Self {
        Schedule {
            config,
            resumed: Vec::new(),
            hook: None,
        }
    }

    /// Continue from previously saved instance ledgers, one per verification run.
    pub fn resume(mut self, ledgers: Vec<Ledger<F>>) -> Self {
        self.resumed = ledgers;
        self
    }

    /// Called after every completed generation of every instance.
    pub fn on_generation(mut self, hook: impl FnMut(&Ledger<F>) -> Result<()> + 'a) -> Self {
        self.hook = Some(Box::new(hook));
        self
    }

    fn fresh_instance(&self, index: u32, attempt: u32) -> Result<Ledger<F>> {
        let seed = &self.config.seed;
        let mut stream = seed.field.stream(index as u64, attempt as u64);
        let field = F::instantiate(&seed.field, &mut stream)?;
        let seeds = seed_objects(
            &field,
            seed.adams,
            seed.mode,
            seed.seed_gender,
            &mut stream,
            self.config.resample_limit,
        )?;
        let info = InstanceInfo {
            index,
            attempt,
            prime: field.modulus(),
        };
        Ledger::from_seeds(field, info, seeds.objects)
    }

    fn advance(&mut self, ledger: &mut Ledger<F>) -> Result<()> {
        while ledger.last_generation() < self.config.max_generation {
            ledger.next_generation(self.config.policy, self.config.workers)?;
            if let Some(hook) = self.hook.as_mut() {
                hook(ledger)?;
            }
        }
        Ok(())
    }

    pub fn run(mut self) -> Result<RunOutput<F>> {
        self.config.validate()?;
        let runs = self.config.verify_runs as usize;
        let mut slots: Vec<Option<Ledger<F>>> = (0..runs).map(|_| None).collect();
        let mut attempts = vec![0u32; runs];
        for ledger in std::mem::take(&mut self.resumed) {
            let index = ledger.instance().index as usize;
            if index >= runs || slots[index].is_some() {
                return Err(Error::InvalidConfig(format!(
                    "resumed instance {index} does not fit {runs} verification runs"
                )));
            }
            attempts[index] = ledger.instance().attempt;
            slots[index] = Some(ledger);
        }
        let mut resamples = 0u32;

        loop {
            for index in 0..runs {
                loop {
                    let mut ledger = match slots[index].take() {
                        Some(ledger) => ledger,
                        None => self.fresh_instance(index as u32, attempts[index])?,
                    };
                    match self.advance(&mut ledger) {
                        Ok(()) => {
                            slots[index] = Some(ledger);
                            break;
                        }
                        Err(e) if e.is_resamplable() => {
                            resamples += 1;
                            if resamples > self.config.resample_limit {
                                return Err(Error::SeedFailure { attempts: resamples });
                            }
                            attempts[index] += 1;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }

            let ledgers: Vec<Ledger<F>> = slots.iter_mut().map(|s| s.take().expect("filled")).collect();
            let counts: Vec<Vec<u64>> = ledgers.iter().map(|l| l.new_counts()).collect();
            if counts.iter().all(|c| *c == counts[0]) {
                let new_counts = counts[0].clone();
                return Ok(RunOutput {
                    cumulative_by_gender: cumulative_by_gender(&new_counts),
                    coincidence_log: ledgers[0].coincidence_log(),
                    instances: ledgers.iter().map(|l| *l.instance()).collect(),
                    new_counts,
                    ledgers,
                    resamples,
                });
            }
            resamples += 1;
            if resamples > self.config.resample_limit {
                let detail = counts
                    .iter()
                    .map(|c| format!("{c:?}"))
                    .collect::<Vec<_>>()
                    .join(" vs ");
                return Err(Error::VerificationMismatch(detail));
            }
            for a in attempts.iter_mut() {
                *a += 1;
            }
        }
    }
}

/// Runs generations `1..=max_generation` on every verification instance.
pub fn run_schedule<F: Field>(config: &RunConfig) -> Result<RunOutput<F>> {
    Schedule::new(config).run()
}
