"""
Regenerate the problem files in problems/
=========================================

Each file can be passed to ``orthoentropy check``.
"""
from pathlib import Path

from orthoentropy import TensorContext, fourier_unitary, haar_random_unitary, identity_unitary, swap_unitary
from orthoentropy.io import Problem, dump_problem

out = Path(__file__).parent / "problems"
out.mkdir(exist_ok=True)

m2 = TensorContext.full(2, 2)
problems = {
    "swap_n2.json": Problem(m2, swap_unitary(2), {"construction": "swap"}),
    "identity_n2.json": Problem(m2, identity_unitary(m2), {"construction": "identity"}),
    "haar_seed42_n2.json": Problem(m2, haar_random_unitary(4, 42), {"construction": "haar", "seed": 42}),
    "fourier_n3.json": Problem(TensorContext.full(3, 1), fourier_unitary(3), {"construction": "fourier"}),
    "haar_seed5_n3.json": Problem(TensorContext.full(3, 1), haar_random_unitary(3, 5), {"construction": "haar", "seed": 5}),
}
for name, p in problems.items():
    (out / name).write_text(dump_problem(p))
    print(name, p.digest["checksum"][:12])
