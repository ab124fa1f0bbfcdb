"""Treino, episódios, experimentos e agregação de métricas."""

from .aggregator import MetricsAggregator
from .episode import Episode, solve_episode, verify_solution
from .experiment import ExperimentResult, ExperimentRunner, run_experiment
from .trainer import AttemptResult, Trainer, TrainingReport, train

__all__ = [
    "Episode",
    "solve_episode",
    "verify_solution",
    "Trainer",
    "TrainingReport",
    "AttemptResult",
    "train",
    "MetricsAggregator",
    "ExperimentRunner",
    "ExperimentResult",
    "run_experiment",
]
