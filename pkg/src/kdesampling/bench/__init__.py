from .config import ConfigError, ExperimentConfig, config_from_dict, load_config
from .render import render_architecture_charts, render_summary_table
from .report import EvalReport, RunResult, load_report, save_report
from .runner import run_experiment
from .seeds import derive_seed
