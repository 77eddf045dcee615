import asyncio
import statistics
import uuid
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Optional, Union

from langgraph.graph.state import CompiledStateGraph

from app.config import get_logger, seed_override, settings
from app.errors import LabError
from app.models.dynamics import Trajectory
from app.models.experiment import (
    DisplacementStats,
    EnsembleSummary,
    ExperimentConfig,
    ExperimentInfo,
    ExperimentResponse,
    ExperimentStatus,
    RunRecord,
)
from app.models.network import MAX_SEED
from app.pipeline import MemberGraph, MemberState
from app.services.dynamics_service import integrate
from app.services.report_service import parse_config
from app.services.scenario_service import build_scenario
from app.utils import SingletonMeta

logger = get_logger(__name__)


class ExperimentService(metaclass=SingletonMeta):
    """Singleton service running experiment ensembles through the member pipeline."""

    def __init__(self):
        self.graph: CompiledStateGraph = MemberGraph().get_graph()
        self._experiments: dict[str, ExperimentInfo] = {}
        self._cleanup_task: Optional[asyncio.Task] = None

    def run_experiment(
        self,
        cfg: Union[ExperimentConfig, dict, str],
        seed: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> EnsembleSummary:
        """
        Run every ensemble member and summarise the reports.
        Processing works as follows:
            1. Resolve the seed: explicit argument, then MPTCP_LAB_SEED, then cfg.seed.
            2. Member i runs the pipeline with seed + i: build scenario, solve the
               baseline, solve the multipath equilibrium (constant traffic) or
               integrate the dynamics (bursty traffic), assess.
            3. A failing member is recorded with its error; the others are unaffected.

        Args:
            cfg: Experiment configuration, or a document to validate.
            seed: Optional seed overriding both the environment and the config.
            workers: Thread count (settings.ENSEMBLE_WORKERS when omitted).

        Returns:
            EnsembleSummary: Per-run records in run_id order plus statistics.

        Raises:
            ConfigError: If cfg is a document that fails validation.
        """
        if not isinstance(cfg, ExperimentConfig):
            cfg = parse_config(cfg)

        seed = resolve_seed(cfg, seed)
        workers = workers or settings.ENSEMBLE_WORKERS

        logger.info(
            f"Running experiment '{cfg.name}': {cfg.ensemble_size} members, "
            f"seed {seed}, {workers} worker(s)"
        )

        run_ids = range(cfg.ensemble_size)
        if workers > 1 and cfg.ensemble_size > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                runs = list(pool.map(lambda i: self.run_member(cfg, i, seed), run_ids))
        else:
            runs = [self.run_member(cfg, i, seed) for i in run_ids]

        summary = summarise(cfg.name, runs)
        logger.info(
            f"Experiment '{cfg.name}' finished: fraction_stable "
            f"{summary.fraction_stable:.3f}, {summary.failures} failure(s)"
        )
        return summary

    def run_member(self, cfg: ExperimentConfig, run_id: int, seed: int) -> RunRecord:
        """
        Run one ensemble member; errors are captured in the record.

        Args:
            cfg: Experiment configuration.
            run_id: Member index.
            seed: Seed of member 0.

        Returns:
            RunRecord: The member's report or its error.
        """
        member_seed = (seed + run_id) % MAX_SEED
        record = RunRecord(
            run_id=run_id,
            seed=member_seed,
            scenario=cfg.scenario.variant,
            controller=cfg.controller.variant,
        )
        initial_state = MemberState(config=cfg, run_id=run_id, seed=member_seed)

        try:
            final_state: MemberState = self.graph.invoke(initial_state)
        except Exception as e:
            if isinstance(e, LabError):
                logger.warning(f"Run {run_id} failed: {type(e).__name__}: {e}")
            else:
                logger.error(f"Run {run_id} failed: {str(e)}", exc_info=True)
            return record.model_copy(update={"error": f"{type(e).__name__}: {e}"})
        return record.model_copy(update={"report": final_state["report"]})

    def create_experiment(self) -> str:
        """
        Create a new tracked experiment with a unique ID.

        Returns:
            str: The unique experiment ID
        """
        experiment_id = str(uuid.uuid4())
        self._experiments[experiment_id] = ExperimentInfo(
            experiment_id, ExperimentStatus.IN_PROGRESS
        )

        # Start cleanup task if not already running
        try:
            loop = asyncio.get_running_loop()
        except RuntimeError:
            loop = None
        if loop and (self._cleanup_task is None or self._cleanup_task.done()):
            self._cleanup_task = loop.create_task(self._cleanup_expired_experiments())

        logger.info(f"Created experiment with ID: {experiment_id}")
        return experiment_id

    def get_experiment(self, experiment_id: str) -> Optional[ExperimentInfo]:
        return self._experiments.get(experiment_id)

    def update_experiment_status(
        self,
        experiment_id: str,
        status: ExperimentStatus,
        response: Optional[ExperimentResponse] = None,
    ):
        """
        Update the status and optional response of a tracked experiment.

        Args:
            experiment_id: The unique experiment ID
            status: The new status
            response: Optional response
        """
        experiment_info = self._experiments.get(experiment_id)
        if experiment_info is None:
            logger.warning(f"Status update for unknown experiment {experiment_id}")
            return
        experiment_info.update_status(status, response)
        logger.info(f"Updated experiment {experiment_id} status to {status.value}")

    def process_experiment(
        self, experiment_id: str, cfg: ExperimentConfig
    ) -> ExperimentResponse:
        summary = self.run_experiment(cfg)
        response = ExperimentResponse(
            id=experiment_id,
            status=ExperimentStatus.COMPLETED,
            success=True,
            message=f"{len(summary.runs)} runs, {summary.failures} failed",
            summary=summary,
        )
        self.update_experiment_status(
            experiment_id, ExperimentStatus.COMPLETED, response
        )
        return response

    def process_experiment_sync(self, cfg: ExperimentConfig) -> ExperimentResponse:
        """
        Run an experiment synchronously with tracking and error handling.

        Args:
            cfg: The experiment configuration

        Returns:
            ExperimentResponse: The completed response
        """
        experiment_id = self.create_experiment()

        try:
            return self.process_experiment(experiment_id, cfg)
        except Exception as e:
            logger.error(
                f"Sync experiment {experiment_id} failed: {str(e)}", exc_info=True
            )
            self.update_experiment_status(
                experiment_id,
                ExperimentStatus.FAILED,
                self.build_error_response(experiment_id),
            )
            raise

    def process_experiment_async(self, experiment_id: str, cfg: ExperimentConfig):
        """
        Run an experiment in the background.

        Args:
            experiment_id: The unique experiment ID
            cfg: The experiment configuration
        """
        try:
            logger.info(f"Starting async experiment {experiment_id}")
            self.process_experiment(experiment_id, cfg)
            logger.info(f"Async experiment {experiment_id} completed successfully")
        except Exception as e:
            logger.error(
                f"Async experiment {experiment_id} failed: {str(e)}", exc_info=True
            )
            self.update_experiment_status(
                experiment_id,
                ExperimentStatus.FAILED,
                self.build_error_response(experiment_id),
            )

    def build_error_response(
        self, experiment_id: Optional[str] = None
    ) -> ExperimentResponse:
        return ExperimentResponse(
            id=experiment_id,
            status=ExperimentStatus.FAILED,
            success=False,
            message="Experiment failed. Please check the configuration and try again.",
        )

    async def _cleanup_expired_experiments(self):
        """
        Background task removing experiments that have not been updated recently.
        """
        while True:
            try:
                await asyncio.sleep(settings.TASK_CLEANUP_INTERVAL_SECONDS)

                now = datetime.now()
                expired = [
                    experiment_id
                    for experiment_id, info in self._experiments.items()
                    if (now - info.updated_at).total_seconds()
                    > settings.TASK_EXPIRY_SECONDS
                ]
                for experiment_id in expired:
                    del self._experiments[experiment_id]

                if expired:
                    logger.info(f"Cleaned up {len(expired)} expired experiments")

            except asyncio.CancelledError:
                logger.info("Cleanup task cancelled")
                break
            except Exception as e:
                logger.error(f"Error in cleanup task: {str(e)}", exc_info=True)


def summarise(name: str, runs: list[RunRecord]) -> EnsembleSummary:
    """Fraction stable and displacement statistics of a list of run records."""
    displacements = [run.report.displacement for run in runs if run.report]
    stats = None
    if displacements:
        stats = DisplacementStats(
            min=min(displacements),
            median=float(statistics.median(displacements)),
            max=max(displacements),
        )
    return EnsembleSummary(
        name=name,
        runs=runs,
        fraction_stable=(
            sum(run.stable for run in runs) / len(runs) if runs else 0.0
        ),
        failures=sum(run.report is None for run in runs),
        displacement_stats=stats,
    )


def run_experiment(
    cfg: Union[ExperimentConfig, dict, str], seed: Optional[int] = None
) -> EnsembleSummary:
    """Run an experiment ensemble with the shared ExperimentService."""
    return ExperimentService().run_experiment(cfg, seed=seed)


def resolve_seed(cfg: ExperimentConfig, seed: Optional[int] = None) -> int:
    """Seed of member 0: explicit argument, then MPTCP_LAB_SEED, then cfg.seed."""
    if seed is None:
        seed = seed_override()
    if seed is None:
        seed = cfg.seed
    return seed % MAX_SEED


def member_trajectory(
    cfg: ExperimentConfig, run_id: int = 0, seed: Optional[int] = None
) -> Trajectory:
    """
    Integrate the dynamics of one ensemble member, whatever its traffic model.

    Raises:
        ValueError: If run_id is outside the ensemble.
    """
    if not 0 <= run_id < cfg.ensemble_size:
        raise ValueError(
            f"run_id {run_id} outside the ensemble of {cfg.ensemble_size} members"
        )
    member_seed = (resolve_seed(cfg, seed) + run_id) % MAX_SEED
    network = build_scenario(cfg.scenario.model_copy(update={"seed": member_seed}))
    return integrate(
        cfg.controller,
        network,
        cfg.dynamics.horizon,
        cfg.dynamics.dt,
        cfg.dynamics.tolerance,
        traffic=cfg.traffic,
        eps=cfg.stability.eps,
        config=cfg.dynamics,
    )
