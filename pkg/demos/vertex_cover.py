"""Choosing what to hide is as hard as vertex cover.

Each graph becomes a closed system whose hide set works exactly when it covers
every edge.  Run: python demos/vertex_cover.py
"""
import itertools

from privsynth.closed import Graph, closed_search, cycle_graph, lasso_to_transducer, vertex_cover_fixture

graphs = {
    "triangle": cycle_graph(3),
    "path of 4": Graph(4, ((0, 1), (1, 2), (2, 3))),
    "star": Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4))),
}
for name, g in graphs.items():
    fx = vertex_cover_fixture(g)
    smallest = next(k for k in range(g.vertex_count + 1)
                    if any(g.is_cover(c) for c in itertools.combinations(range(g.vertex_count), k)))
    for budget in range(g.vertex_count + 1):
        found = closed_search(fx.spec, fx.secret, fx.table, budget)
        if found:
            hidden, wit = found
            t = lasso_to_transducer(wit.word, fx.table)
            print(f"{name}: budget {budget} hides {{{', '.join(hidden)}}} (smallest cover {smallest}),"
                  f" witness machine has {t.n_states} states")
            break
