"""
Orthogonality with an abelian second factor
===========================================

With ``L = C^4`` (uniform trace) and ``n = 2`` the dimension count allows
orthogonality, and the Pauli matrices supply it: summand ``s`` of the unitary
carries ``σ^s``. The identity on the same shape fails everything.
"""
import numpy as np

from orthoentropy import full_report, identity_unitary, pauli_block_diagonal
from orthoentropy.orthogonality import dimension_obstruction
from orthoentropy.partition_entropy import entropy_of_unitary

ctx, u = pauli_block_diagonal()
print("dim L =", ctx.L.alg_dim, " n^2 =", ctx.n ** 2, " obstructed:", dimension_obstruction(ctx))

# block u_12 lists the (1, 2) entry of each Pauli matrix
print(np.diag(u[0:4, 4:8]))

for r in full_report(ctx, u):
    print(f"{r.name:<8} {r.residual:.1e} {r.verdict}")
print("S =", entropy_of_unitary(ctx, u), " 2 log 2 =", 2 * np.log(2))

# Identity: the partition has a single nonzero direction
print("identity S =", entropy_of_unitary(ctx, identity_unitary(ctx)))
print([r.verdict for r in full_report(ctx, identity_unitary(ctx))])
