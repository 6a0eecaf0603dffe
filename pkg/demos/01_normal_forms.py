"""Normal forms in BS(2,3) and the path they trace in the Bass-Serre tree."""

from bslab import GroupParams, parse_word, reduce

P = GroupParams(2, 3)
for w in ["ts^2t^{-1}", "tst^{-1}", "s^2tS^3T", "tstststs"]:
    g = reduce(parse_word(w), P)
    print(f"{w:>14}  ->  {g}   height {g.height}")
