"""KDE-based minority oversampling for imbalanced binary classification,
benchmarked against random over/under-sampling on small numpy MLPs."""

from .dataset import Dataset, load_csv, make_synthetic, stratified_split
from .kde import KdeModel, fit as fit_kde, scott_bandwidth
from .metrics import macro_f1, score
from .mlp import ARCHITECTURES, TrainConfig, train
from .samplers import SamplerSpec, resample

__version__ = "0.1.0"
