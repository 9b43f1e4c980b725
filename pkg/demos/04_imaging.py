# # Imaging from limited and recovered data
#
# The direct sampling indicator works straight from the limited data, but
# the image smears away from the receivers. The factorization indicator
# needs the full matrix, so it is fed the DR-MSR reconstruction.

import numpy as np

from aperture_complete import (
    NoiseSpec,
    ParametricCurve,
    RecoverySchedule,
    ScatteringProblem,
    add_noise,
    artificial_boundary,
    assemble_msr,
    dr_msr,
    dsm_full,
    dsm_limited,
    fm_indicator,
    normalize,
    restrict,
)

from _plot import plt, save, show_grid

kite = ParametricCurve("kite")
F = assemble_msr(ScatteringProblem(6.0, kite), m=150)
limited = add_noise(restrict(F, 75), NoiseSpec(delta=0.05, seed=0))
recovered = dr_msr(limited, RecoverySchedule("mgf", t=5), artificial_boundary(), alpha=1e-2)

images = {
    "DSM, exact full data": normalize(dsm_full(F)),
    "DSM, aperture (0, pi/2)": normalize(dsm_limited(limited)),
    "DSM, recovered data": normalize(dsm_full(recovered)),
    "FM, recovered data": normalize(fm_indicator(recovered)),
}
for title, g in images.items():
    idx = np.unravel_index(g.values.argmax(), g.values.shape)
    print(f"{title:26s} argmax at {g.points()[idx].round(2)}")

if plt is not None:
    fig, axes = plt.subplots(1, 4, figsize=(16, 4))
    for ax, (title, g) in zip(axes, images.items()):
        show_grid(ax, g, title, kite)
    save(fig, "04_imaging.png")
