from .parallel import ordered_map
from .rng import cached_key, pair_uniform, stable_key, trial_generator, trial_stream
from .stats import ci_separated, ratio_interval, wilson_interval

__all__ = [
    "cached_key",
    "ci_separated",
    "ordered_map",
    "pair_uniform",
    "ratio_interval",
    "stable_key",
    "trial_generator",
    "trial_stream",
    "wilson_interval",
]
