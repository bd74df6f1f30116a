"""
The tensor flip as an orthogonality witness
===========================================

For ``L = M_n`` the flip ``u = Σ e_ab ⊗ e_ba`` conjugates ``M_n ⊗ 1`` onto
``1 ⊗ M_n``, which is orthogonal to ``M_n ⊗ 1``. Every criterion agrees, and
the induced partition has the flat density ``I / n^2``.
"""
import numpy as np

from orthoentropy import TensorContext, full_report, swap_unitary, theorem_check
from orthoentropy.partition_entropy import density_matrix, induced_partition

# u_ij is the matrix unit e_ji of L
ctx = TensorContext.full(2, 2)
u = swap_unitary(2)
print(u.real.astype(int))

# The induced partition {u_ij / sqrt(2)} sums to 1 in L
X = induced_partition(ctx, u)
print("partition defect", X.defect())

# and its Gram matrix under tau_L is flat
rho = density_matrix(ctx, u).matrix
print(np.round(rho.real, 12))

# All criteria at tolerance 1e-8
for r in full_report(ctx, u):
    print(f"{r.name:<8} {r.residual:.1e} {r.verdict}")

# The three equivalent conditions for n = 2..5
for n in range(2, 6):
    t = theorem_check(TensorContext.full(n, n), swap_unitary(n))
    print(n, t.orthogonal.verdict, t.identity_form.verdict, t.entropy, 2 * np.log(n))
