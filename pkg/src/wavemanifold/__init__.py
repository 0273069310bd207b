"""Riemann problems for quadratic 2x2 conservation laws via the wave manifold."""

__version__ = "0.1.0"

from .core_model import DEFAULT_PARAMS, ModelParams, State, load_params  # noqa: E402
from .manifold import ManifoldPoint, left_state, raise_state, right_state, sigma  # noqa: E402
from .riemann import RiemannSolution, evaluate_profile, solve  # noqa: E402
from .wave_curves import build_fast_wave_curve, build_slow_wave_curve  # noqa: E402

__all__ = [
    "DEFAULT_PARAMS", "ModelParams", "State", "load_params", "ManifoldPoint", "left_state",
    "right_state", "raise_state", "sigma", "RiemannSolution", "evaluate_profile", "solve",
    "build_fast_wave_curve", "build_slow_wave_curve",
]
