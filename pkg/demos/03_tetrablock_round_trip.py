"""Round trip for a tetrablock triple: extract (F1, F2, G1, G2) from a
Jordan-shift model, synthesize (A, B) back and test membership of a few
points in the tetrablock."""

import numpy as np

from fundop import gen_pure_tetra, synthesize_AB, tetra_fundamentals, tetra_membership
from fundop.tetrablock import TetraTriple

g1, g2 = 0.35 + 0.1j, -0.2 + 0.3j
t = gen_pure_tetra([[g1]], [[g2]], 4)
fu = tetra_fundamentals(t)
print("F1, F2 =", complex(fu.F1[0, 0]), complex(fu.F2[0, 0]))
print("G1, G2 =", complex(fu.G1[0, 0]), complex(fu.G2[0, 0]))

a, b, cert = synthesize_AB(t.P, fu.F1, fu.F2, fu.G1, fu.G2)
print("certificate passed:", cert.passed, f" spot-check margin {cert.data['vn_margin']:.3f}")
print("||A - A_model|| =", np.abs(a - t.A).max(), " ||B - B_model|| =", np.abs(b - t.B).max())
back = tetra_fundamentals(TetraTriple(a, b, t.P))
print("fundamentals recovered:", np.allclose(back.F1, fu.F1) and np.allclose(back.G2, fu.G2))

# Large symbols break the norm bound even though every listed hypothesis holds.
t_big = gen_pure_tetra([[1.0]], [[1.0]], 5)
fb = tetra_fundamentals(t_big)
_, _, cert_big = synthesize_AB(t_big.P, fb.F1, fb.F2, fb.G1, fb.G2)
print("\nG1 = G2 = 1: certificate passed:", cert_big.passed, " first failure:", cert_big.first_failure.name)

for x in [(0, 0, 0), (0.5, 0.5, 0.25), (0.99, 0, 0), (2, 0, 0)]:
    member, margin = tetra_membership(*x)
    print(f"{x}: member={member} margin={margin:.4f}")
