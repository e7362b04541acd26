"""Defect spaces, the characteristic function and the Hardy-space model of
a contraction, shown on a Jordan block and a random contraction with a
unitary summand."""

import numpy as np

from fundop import char_fn_eval, char_fn_taylor, classify, defect, embed_W, lemma8_residual, mult_theta
from fundop.corpus import random_contraction
from fundop.hardy import w_isometry_residual

np.set_printoptions(precision=4, suppress=True)

# The 4x4 Jordan block shifts e_k to e_{k+1}; it is pure with one-dimensional defects.
j4 = np.diag(np.ones(3), -1)
cl = classify(j4)
print("J_4: pure =", cl.is_pure, " defect ranks =", defect(j4).rank, defect(j4, adjoint=True).rank)

# Its characteristic function is z^4 in defect coordinates (up to a unimodular phase).
coeffs = char_fn_taylor(j4, 6).coeffs
print("Taylor coefficients:", np.round([c[0, 0] for c in coeffs], 12))
z = 0.5 + 0.3j
print("|Theta(z)| =", abs(char_fn_eval(j4, z)[0, 0]), " |z|^4 =", abs(z) ** 4)

# W maps the space isometrically into the vector-valued Hardy space and its range
# complements the range of the multiplication by Theta.
w = embed_W(j4, 6)
print("||W*W - I|| =", np.abs(w.conj().T @ w - np.eye(4)).max())
print("||WW* + M M* - I|| =", lemma8_residual(j4, 6))
print("M_Theta block shape:", mult_theta(j4, 6).matrix.shape)

# On a contraction with a unitary part the truncated identity still holds exactly.
rng = np.random.default_rng(2)
p = random_contraction(rng, 5, unitary_dim=2)
cl = classify(p)
print("\nrandom P: unitary part dim =", cl.unitary_part_dim, " pure =", cl.is_pure)
for n in (2, 6, 12):
    print(f"  N={n:2d}: partition residual {lemma8_residual(p, n):.1e}, telescoping residual {w_isometry_residual(p, n):.1e}")
