"""
Finding orthogonal unitaries by entropy ascent
==============================================

Maximizing S(rho[U]) over the unitary group of M_n ⊗ L finds orthogonal
pairs whenever dim L ≥ n^2. When dim L < n^2 the Gram matrix has rank at
most dim L and the ascent stops at log dim L instead.
"""
import numpy as np

from orthoentropy import SearchConfig, TensorContext, TracialAlgebra, full_report, search

# Haar starts only, so nothing is handed to the optimizer
for L in (TracialAlgebra.full(2), TracialAlgebra.abelian(4), TracialAlgebra.full(3)):
    ctx = TensorContext(2, L)
    res = search(SearchConfig(ctx, restarts=4, seed=1, warm_start=False))
    verdicts = {r.name: r.verdict for r in full_report(ctx, res.best_u)}
    print(L.block_sizes, f"S = {res.best_entropy:.12f}", "target", res.reached_target, all(verdicts.values()))

# The trajectory of the winning restart
ss = [s for _, s in res.trajectory]
print("iterations", res.iterations_used, "first/last", ss[0], ss[-1])

# n = 3 with L = M_2: dim L = 4 < 9
ctx = TensorContext.full(3, 2)
res = search(SearchConfig(ctx, restarts=8, seed=0))
print("obstructed", res.obstructed, "best", res.best_entropy, "log 4", np.log(4), "2 log 3", 2 * np.log(3))
print("any criterion true:", any(r.verdict for r in full_report(ctx, res.best_u)))
