"""weyl_lab: numerical experiments on two-point Weyl asymptotics for model
manifolds with explicit spectra (flat tori, round 2-sphere)."""

__version__ = "0.1.0"

from .lattice import Lattice  # noqa: F401
from .manifolds import DerivIndex, FlatTorus, RoundSphere2  # noqa: F401
from .smoothing import MollifierSpec, SmoothedProjector  # noqa: F401
from .randomwaves import RandomWaveEnsemble  # noqa: F401
