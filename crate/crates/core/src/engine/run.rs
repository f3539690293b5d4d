use std::io::Write;

use super::SimConfig;
use crate::energy::{charge_discovery, charge_gathering_round, EnergyLedger};
use crate::error::Result;
use crate::gatherers::{EpochRecord, GathererState, Policy, PositionHorizon};
use crate::geom::{NodeId, Round};
use crate::metrics::{
    coverage_fraction, network_lifetime_check, round_time, uncovered_fraction, update_coverage_loss,
    CoverageLossCurve, RunResult, PROBE_COUNT,
};
use crate::mobility::{random_point, MobilityProfile};
use crate::rng::{SimRng, Stream};

/// Hook called once at the end of every simulated round.
pub trait RoundObserver {
    fn on_round(&mut self, round: Round, time_s: f64, ledger: &EnergyLedger);
}

pub struct NoObserver;

impl RoundObserver for NoObserver {
    fn on_round(&mut self, _: Round, _: f64, _: &EnergyLedger) {}
}

/// Per-round residual energy as CSV: `round,time_s,node_id,residual_J`.
pub struct EnergyCsv<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> EnergyCsv<W> {
    pub fn new(mut out: W) -> Self {
        let error = writeln!(out, "round,time_s,node_id,residual_J").err();
        EnergyCsv { out, error }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> RoundObserver for EnergyCsv<W> {
    fn on_round(&mut self, round: Round, time_s: f64, ledger: &EnergyLedger) {
        if self.error.is_some() {
            return;
        }
        for (node, r) in ledger.residuals().iter().enumerate() {
            if let Err(e) = writeln!(self.out, "{round},{time_s},{node},{r}") {
                self.error = Some(e);
                return;
            }
        }
    }
}

/// A run's metrics plus the per-epoch tree log.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub result: RunResult,
    pub epochs: Vec<EpochRecord>,
    /// Rounds skipped for lack of a spanning tree.
    pub no_tree_rounds: Vec<Round>,
    /// Rounds simulated before the run stopped.
    pub rounds_simulated: usize,
}

pub fn run_simulation(cfg: &SimConfig, profile: &MobilityProfile) -> Result<RunResult> {
    run_detailed(cfg, profile, &mut NoObserver).map(|o| o.result)
}

/// Runs both policies on the same profile with the same seeds.
/// Returns `(max-stability, mst-dg)`.
pub fn run_pairwise(cfg: &SimConfig, profile: &MobilityProfile) -> Result<(RunResult, RunResult)> {
    let max = run_simulation(&SimConfig { policy: Policy::MaxStability, ..cfg.clone() }, profile)?;
    let mst = run_simulation(&SimConfig { policy: Policy::MstDg, ..cfg.clone() }, profile)?;
    Ok((max, mst))
}

/// The round loop. Each round:
///
/// 1. rebuild the tree if the current one is missing or unusable, and
///    charge the discovery flood;
/// 2. gather along the tree, or count the round as skipped;
/// 3. for the look-ahead policy, a failure during the round truncates the
///    epoch and a new tree is searched from this round over the survivors;
/// 4. sample coverage and update the loss curve;
/// 5. stop if the network lifetime condition holds or no node is left.
pub fn run_detailed(cfg: &SimConfig, profile: &MobilityProfile, observer: &mut dyn RoundObserver) -> Result<RunOutput> {
    cfg.validate()?;
    cfg.check_profile(profile)?;

    let n = profile.node_count();
    let horizon = cfg.horizon_rounds();
    let period = cfg.mobility.round_period;
    let tx = cfg.tx_range;
    let sensing = cfg.sensing_range();
    let all_nodes: Vec<NodeId> = (0..n).collect();

    let mut ledger = EnergyLedger::new(n, cfg.initial_energy());
    let mut state = GathererState::new(cfg.policy, PositionHorizon::with_rounds(profile, tx, horizon));
    let mut leader_rng = SimRng::new(cfg.run_seed, Stream::Leader);
    let mut coverage_rng = SimRng::new(cfg.run_seed, Stream::Coverage);
    let fixed_probes: Option<Vec<_>> = cfg
        .fixed_probes
        .then(|| (0..PROBE_COUNT).map(|_| random_point(&cfg.field, &mut coverage_rng)).collect());

    let mut curve = CoverageLossCurve::new();
    let mut rounds_completed = 0;
    let mut no_tree_rounds = Vec::new();
    let mut network_lifetime = None;
    let mut simulated = 0;

    for round in 0..horizon {
        let time = round_time(round, period);
        let positions = profile.round_positions(round);
        let live = ledger.live_nodes();
        let mut failed = false;

        if !state.current_valid(round, positions, |v| ledger.is_live(v)) {
            state.retire(round);
            if state.next_tree(round, &live, &mut leader_rng).is_some() {
                failed |= !charge_discovery(&mut ledger, &live, positions, &cfg.energy, tx, time).is_empty();
            }
        }

        match state.current() {
            Some(tree) => {
                failed |= !charge_gathering_round(&mut ledger, &tree.rooted, positions, &cfg.energy, cfg.field.sink, time)
                    .is_empty();
                rounds_completed += 1;
            }
            None => no_tree_rounds.push(round),
        }

        if failed && cfg.policy == Policy::MaxStability {
            // The old epoch ends just before this round; search again from here.
            state.retire(round);
            let survivors = ledger.live_nodes();
            if state.next_tree(round, &survivors, &mut leader_rng).is_some() {
                charge_discovery(&mut ledger, &survivors, positions, &cfg.energy, tx, time);
            }
        }

        let live_now = ledger.live_nodes();
        let fraction = match &fixed_probes {
            Some(probes) => uncovered_fraction(probes, positions, &live_now, sensing),
            None => coverage_fraction(&cfg.field, positions, &live_now, sensing, &mut coverage_rng),
        };
        update_coverage_loss(&mut curve, fraction, time);
        observer.on_round(round, time, &ledger);
        simulated = round + 1;

        if network_lifetime_check(&live_now, &all_nodes, positions, tx) {
            network_lifetime = Some(time);
            break;
        }
        if live_now.is_empty() {
            break;
        }
    }
    state.finish(simulated);

    let failure_times_s: Vec<f64> = ledger.failures().iter().map(|&(_, t)| t).collect();
    let result = RunResult {
        policy: cfg.policy,
        node_lifetime_s: failure_times_s.first().copied(),
        network_lifetime_s: network_lifetime,
        failure_times_s,
        coverage_loss: curve,
        discovery_count: state.discovery_count(),
        rounds_completed,
        no_tree_rounds: no_tree_rounds.len(),
        leaders: state.epochs().iter().map(|e| e.leader).collect(),
        energy_consumed_j: ledger.total_consumed(),
    };
    debug_assert_eq!(result.rounds_simulated(), simulated);
    Ok(RunOutput {
        result,
        epochs: state.epochs().to_vec(),
        no_tree_rounds,
        rounds_simulated: simulated,
    })
}
