"""
Reconstructing a pure qudit from 4d - 3 outcomes
================================================

Walk through the adaptive protocol by hand for one random state, then let
``run_adaptive_tomography`` do the same thing in one call.
"""

import numpy as np

from puretomo import (
    RandomStream,
    build_frame,
    born_probability,
    fidelity,
    haar_random_state,
    reconstruct_pure,
    run_adaptive_tomography,
)

d = 5
psi = haar_random_state(d, RandomStream(seed=2024))
print("true amplitudes:", np.round(psi.amplitudes, 4))

# Step 1: measure the canonical basis.  Its outcomes fix |c_k| and tell us
# which amplitude is largest; that one becomes the phase reference.
canonical = psi.probabilities()
frame = build_frame(canonical)
print("reference index:", frame.reference, " settings:", len(frame), "= 4d - 3")

# Step 2: three phase-shifted two-level projectors per remaining index.
phase_probs = {
    (s.k, s.ell): born_probability(psi, frame.projector_state(s)) for s in frame.phase_settings
}

# Step 3: closed-form inversion.
result = reconstruct_pure(canonical, phase_probs, frame.reference)
print("estimate:       ", np.round(result.estimate.amplitudes, 4))
print("fidelity:", fidelity(result.estimate, psi))

# The estimate fixes c_r real and positive, so it differs from the true
# amplitudes by a global phase only:
g = psi.amplitudes[frame.reference] / abs(psi.amplitudes[frame.reference])
print("max |difference| after removing global phase:", np.abs(result.estimate.amplitudes * g - psi.amplitudes).max())

# %%
# A state with a vanishing first amplitude needs the adaptive reference;
# a fixed reference |0> would divide by zero.
from puretomo import PureState

hole = PureState.from_amplitudes([0, 1, 1j, -1])
run = run_adaptive_tomography(hole)
print("\nreference chosen for (0, 1, i, -1):", run.result.reference, " fidelity:", fidelity(run.estimate, hole))
