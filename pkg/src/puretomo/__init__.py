"""Adaptive 4d - 3 outcome tomography of pure qudit states.

The canonical-basis outcomes fix the amplitude moduli and pick the largest
amplitude as phase reference; three phase-shifted two-level projectors per
remaining index recover the relative phases in closed form and, from the
same data, test whether the state really is pure.
"""

from .core import (
    DensityMatrix,
    PureState,
    RandomStream,
    fidelity,
    haar_random_state,
    purity,
    uhlmann_fidelity,
    white_noise_state,
)
from .errors import TomographyError
from .measurement import (
    NoiseModel,
    OutcomeRecord,
    born_probability,
    detection_probability,
    estimate_probability,
    expected_counts,
    simulate_counts,
)
from .mub import build_mubs, mub_reconstruct, psd_project, simulate_mub_tomography
from .projectors import ProjectorFrame, Setting, build_frame, phase_projector_state, select_reference
from .reconstruct import (
    certify_purity,
    phase_from_probs,
    reconstruct_pure,
    run_adaptive_tomography,
    visibility,
)

__version__ = "0.1.0"
