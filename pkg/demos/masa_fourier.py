"""
Maximal abelian subalgebras and the Fourier matrix
==================================================

For the diagonal algebra D of M_n, D and u D u* are orthogonal exactly when
every |u_ij|^2 equals 1/n. The entropy H(b) of the unistochastic matrix
b = |u|^2 reaches log n precisely then.
"""
import numpy as np

from orthoentropy import fourier_unitary, haar_random_unitary
from orthoentropy.masa_compare import bistochastic_entropy, masa_orthogonal, unistochastic

# Fourier matrices have flat moduli for every n
for n in range(2, 9):
    f = fourier_unitary(n)
    rep = masa_orthogonal(f)
    print(n, rep.verdict, f"{rep.extra['entropy']:.12f}", f"{np.log(n):.12f}")

# Random unitaries sit strictly below log n
rng = np.random.default_rng(0)
gaps = [np.log(4) - bistochastic_entropy(unistochastic(haar_random_unitary(4, rng))) for _ in range(200)]
print("min gap over 200 Haar samples, n = 4:", min(gaps))

# Phases on either side do not change b
d = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 4)))
print(np.allclose(unistochastic(d @ fourier_unitary(4)).entries, 0.25))
