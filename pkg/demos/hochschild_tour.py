"""q-Hochschild cochains of the dual numbers.

At a primitive N-th root of unity the homology H^(k),n of the cochain
complex of A = C[x]/x^2 is a reshuffled copy of ordinary Hochschild
cohomology: it only lives where n or n + k is a multiple of N.
"""
from qnil import AlgebraSpec, cyclotomic_field, q_generator, rational_field
from qnil.cochain import hochschild_complex, hochschild_expected_dim
from qnil.ncomplex import homology, homology_table

A = AlgebraSpec.truncated_polynomial(2)

# ordinary cohomology from q = -1, N = 2
f2 = cyclotomic_field(2)
classical = {r.n: r.dim for r in homology_table(hochschild_complex(A, None, q_generator(f2), 7)) if r.k == 1}
print("HH^n(A):", classical)

N = 3
q = q_generator(cyclotomic_field(N))
C = hochschild_complex(A, None, q, 9)
for r in homology_table(C):
    want = hochschild_expected_dim(r.k, r.n, N, classical)
    flag = "" if want == r.dim else "  <-- mismatch"
    if r.dim or want:
        print(f"H^({r.k}),{r.n} = {r.dim}{flag}")

# a generic rational q: the complex is not nilpotent, only d^1 homology is meaningful
qq = q_generator(rational_field(), 2)
C2 = hochschild_complex(A, None, qq, 4, N=2)
print("q = 2, ker d / Im d in degree 1:", homology(C2, 1, 1).dim)
