"""The universal q-envelope of a small algebra and its contracting homotopy.

Omega(A) sits inside the free tensor q-DGA T(A).  Augmenting by classes
e_-1, ..., e_-(N-1) in negative degrees gives a complex that a single
linear form on A contracts; we check the three homotopy identities on the
envelope and print its dimensions next to the classical ones.
"""
from qnil import AlgebraSpec, cyclotomic_field, q_generator
from qnil.ncomplex import homotopy_vanishing_check
from qnil.universal import classical_envelope_dims, extended_complex, universal_envelope

A = AlgebraSpec.diagonal(2)
for N in (2, 3, 4):
    field = cyclotomic_field(N)
    q = q_generator(field)
    env = universal_envelope(A, q, 5)
    print(f"N={N}: dim Omega^n =", [env.dims()[n] for n in range(6)])
    X = extended_complex(A, q, n_max=5, restrict_to_envelope=True)
    rep = homotopy_vanishing_check(X.complex, X.h, q=q)
    print(f"      hd - qdh = 1: {rep.identity_ok}, power sum: {rep.sum_ok}, acyclic: {rep.vanishing_ok}")

print("classical:", classical_envelope_dims(A, cyclotomic_field(2), 5))
