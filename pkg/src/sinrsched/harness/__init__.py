"""Instance generation, file formats, experiment runner and command line."""
from .generate import GenerationError, default_side, generate_instance
from .io import load_instance, save_instance
from .experiment import ExperimentSpec, MetricsRow, run_experiment

__all__ = ["GenerationError", "default_side", "generate_instance", "load_instance", "save_instance",
           "ExperimentSpec", "MetricsRow", "run_experiment"]
