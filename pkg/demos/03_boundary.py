"""The action on the suspended boundary: sample a few points and push them around."""

import random

from bslab.boundary import act_boundary, random_boundary_point
from bslab.core import GroupParams, reduce

P = GroupParams(-2, 3)
rng = random.Random(1)
z = random_boundary_point(P, rng)
for w in ["s", "t", "tt", "ts"]:
    g = reduce(w, P)
    print(f"{w:>3} . z  ->  {act_boundary(g, z, P).to_json()}")
