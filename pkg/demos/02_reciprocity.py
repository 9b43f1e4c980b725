# # Reciprocity and the block structure of the MSR matrix
#
# Far fields satisfy u_inf(xhat, d) = u_inf(-d, -xhat). On the equispaced
# grid this pairs entry (i, j) with sigma(i, j); in block form it says
# F11 = F22^T while F12 and F21 are symmetric. A limited-aperture matrix can
# therefore be partly completed for free.

import numpy as np

from aperture_complete import ParametricCurve, ScatteringProblem, assemble_msr
from aperture_complete.msr import blocks, reciprocity_complete, rearranged, restrict

from _plot import plt, save

F = assemble_msr(ScatteringProblem(6.0, ParametricCurve("kite")), m=150)
f11, f12, f21, f22 = blocks(F)
print("max |F11 - F22^T| =", np.abs(f11 - f22.T).max())
print("max |F12 - F12^T| =", np.abs(f12 - f12.T).max())
print("max |F21 - F21^T| =", np.abs(f21 - f21.T).max())
R = rearranged(F)
print("rearranged matrix symmetric to", np.abs(R - R.T).max())

# ## Completing a quarter aperture
#
# Keep the first 75 observation columns, i.e. the arc (0, pi/2).

limited = restrict(F, 75)
completed = reciprocity_complete(limited)
print("known fraction: %.3f -> %.3f" % (limited.mask.mean(), completed.mask.mean()))
copies = completed.provenance == "symmetry"
print("symmetry copies match the exact data to", np.abs(completed.entries[copies] - F.entries[copies]).max())

if plt is not None:
    codes = {"unknown": 0, "measured": 1, "symmetry": 2}
    img = np.vectorize(codes.get)(completed.provenance)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.imshow(img, cmap="Blues", vmin=0, vmax=2)
    ax.set_title("measured (mid) and symmetry (dark) entries")
    save(fig, "02_reciprocity.png")
