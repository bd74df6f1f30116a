"""
Independence from the choice of matrix units
============================================

The blocks u_ij depend on the matrix units of M_n, but conjugating the
units by a unitary v only mixes the partition by a unitary, so rho[U]
changes by a unitary conjugation and its entropy does not move.
"""
import numpy as np

from orthoentropy import TensorContext, haar_random_unitary
from orthoentropy.constructions import random_unitary_in
from orthoentropy.partition_entropy import density_matrix, entropy_of_unitary
from orthoentropy.tensor_algebra import MatrixUnits

rng = np.random.default_rng(3)
ctx = TensorContext.full(3, 2)
u = random_unitary_in(ctx, rng)
units = MatrixUnits.conjugated(haar_random_unitary(3, rng))
print("matrix-unit relations defect", units.defect())

s0 = entropy_of_unitary(ctx, u)
s1 = entropy_of_unitary(ctx, u, units)
print(s0, s1, abs(s0 - s1))

# the densities differ, their spectra do not
r0 = density_matrix(ctx, u).matrix
r1 = density_matrix(ctx, u, units).matrix
print("densities equal:", np.allclose(r0, r1))
print("spectra equal:", np.allclose(np.linalg.eigvalsh(r0), np.linalg.eigvalsh(r1)))
