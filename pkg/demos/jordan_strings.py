"""Homology of a nilpotent operator, read off its Jordan strings.

A string of length j starting in degree s contributes to H^(k) exactly in
the degrees where a k-step kernel element fails to be an (N-k)-step image.
We build a direct sum of strings in a scrambled basis, compute every
H^(k),n by elimination, and compare with the count from the string list.
"""
import random

from qnil import cyclotomic_field
from qnil.ncomplex import (
    hexagon_check,
    homology_table,
    random_string_specs,
    string_complex,
    string_homology_oracle,
    ZMOD_N,
)

N = 4
field = cyclotomic_field(N)
rng = random.Random(7)
specs = random_string_specs(rng, N)
print("strings (start, length):", [(s.start_degree, s.length) for s in specs])

C = string_complex(specs, N, field, shuffle_seed=7)
print(f"{'k':>3} {'n':>3} {'dim':>4} {'from strings':>13}")
for r in homology_table(C):
    expected = string_homology_oracle(specs, N, r.k, r.n)
    if r.dim or expected:
        print(f"{r.k:>3} {r.n:>3} {r.dim:>4} {expected:>13}")

# fold the same strings mod N and walk the hexagons
Z = string_complex(specs, N, field, shuffle_seed=7, grading=ZMOD_N)
for l in range(1, N):
    for m in range(1, N - l):
        print(f"hexagon l={l} m={m}:", "exact" if hexagon_check(Z, l, m).ok else "NOT exact")
