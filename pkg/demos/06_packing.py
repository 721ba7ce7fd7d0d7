"""Max-min-distance packing: spread n points so the closest pair is as far
apart as possible.  Run:  python demos/06_packing.py
"""

import numpy as np

from sphereopt import PackOptions, pack
from sphereopt.packing import three_nearest

known = {2: 2.0, 3: np.sqrt(3), 4: np.sqrt(8 / 3), 6: np.sqrt(2)}

print(f"{'n':>4} {'found d':>12} {'known optimum':>14}")
for n in (2, 3, 4, 6, 8, 12):
    st = pack(n, PackOptions(seed=0))
    ref = f"{known[n]:.6f}" if n in known else "(open)"
    print(f"{n:>4} {st.d_min:>12.6f} {ref:>14}")

st = pack(6, PackOptions(seed=0))
print("\noctahedron check: per-point nearest distances",
      np.round(st.per_point_dmin, 6))
print("three nearest of point 0:", three_nearest(st.cfg, 0))
