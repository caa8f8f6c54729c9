"""q-cochains on a path of three edges.

With q = -1 this is the ordinary cochain complex of ordered simplices.  At
a cube root of unity the contractible path still only has homology in
degree 0, now one class for each level k = 1, 2.
"""
from qnil import cyclotomic_field, q_generator
from qnil.cochain import SimplicialComplexSpec, simplicial_forms
from qnil.ncomplex import homology_table
from qnil.qdga import leibniz_check

K = SimplicialComplexSpec(vertices=[0, 1, 2, 3], facets=[[0, 1], [1, 2], [2, 3]])
for N in (2, 3):
    q = q_generator(cyclotomic_field(N))
    forms = simplicial_forms(K, q, 4)
    print(f"N={N}  dims", [forms.dim(n) for n in range(5)], " q-Leibniz:", leibniz_check(forms).ok)
    for r in homology_table(forms.complex):
        if r.dim:
            print(f"   H^({r.k}),{r.n} = {r.dim}")
