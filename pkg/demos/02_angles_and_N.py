"""How fast compressed tiles shrink in angle, and the radius N past which they all look small."""

from bslab.core import GroupParams
from bslab.nullity import find_N, regime_schedules, theta_ab

P = GroupParams(2, 3)
for name, sched in regime_schedules().items():
    print(name, " ".join(f"{theta_ab(a, b, P):.4f}" for a, b in sched))

for eps in (0.1, 0.01):
    res = find_N(eps, P, 10**6, 60)
    print(f"eps={eps}: N={res.N} ({res.status}, certified up to {res.certified_radius:.4g})")
