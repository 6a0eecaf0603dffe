"""Whyte classes for a handful of graphs of Z's."""

from bslab.gbs import classify, parse_graph

graphs = {
    "BS(2,2)": "loop 2 2",
    "BS(1,5)": "loop 1 5",
    "BS(2,3)": "loop 2 3",
    "amalgam": "vertex x\nvertex y\nedge x y 2 3",
    "two loops": "vertex x\nloop x 1 2\nloop x 2 4",
}
for name, text in graphs.items():
    c = classify(parse_graph(text))
    print(f"{name:>10}: case {c.case}  {c.detail}  {c.caveats or ''}")
