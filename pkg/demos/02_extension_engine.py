"""Self-adjoint extensions of a symmetric relation, from deficiency data.

A random Hermitian matrix restricted to a subspace gives a genuinely
symmetric (non-self-adjoint) relation with equal defect numbers.  The demo
extracts the deficiency spaces, splits an element of the adjoint by the
von Neumann formula, parameterizes extensions by self-adjoint boundary
relations on the defect space, and verifies the two factorization
identities that express the Cayley transform of an extension through the
Cayley transform of its boundary relation.
"""

import numpy as np

from tripletflow import (cayley_unitary, cayley_factorization_check,
                         deficiency_spaces, extension_from_relation,
                         lagrange_residual, random_selfadjoint_relation,
                         random_symmetric_model, von_neumann_components)
from tripletflow.relspace import LinearRelation, is_self_adjoint

rng = np.random.default_rng(7)
model = random_symmetric_model(rng, dim=6, defect=2)
kplus, kminus = deficiency_spaces(model)
print("ambient dimension:", model.dim)
print("defect numbers   :", (kplus.dim, kminus.dim))

print("\n== von Neumann splitting of a random adjoint element ==")
basis = model.Tstar.graph.basis
z = basis @ (rng.standard_normal(basis.shape[1])
             + 1j * rng.standard_normal(basis.shape[1]))
split = von_neumann_components(model, z)
print("splitting residual      :", split.split_residual)
print("reconstruction residual :", split.reconstruction_residual)
x = basis @ (rng.standard_normal(basis.shape[1])
             + 1j * rng.standard_normal(basis.shape[1]))
print("abstract Lagrange defect:", lagrange_residual(model, x, z))

print("\n== extensions from boundary relations ==")
multi = LinearRelation.zero_times_full(model.defect)
print("0 + C^d reproduces the reference extension:",
      extension_from_relation(model, multi).gap(model.A) < 1e-10)
brel = random_selfadjoint_relation(rng, model.defect)
a_prime = extension_from_relation(model, brel)
print("random boundary relation gives a self-adjoint extension:",
      is_self_adjoint(a_prime))

print("\n== Cayley factorization ==")
r_plus, r_minus = cayley_factorization_check(model, brel)
print("|| U(A') - U(B)_H U(A) || =", r_plus)
print("|| U(A') - U(A) U(B)_H || =", r_minus, " (twin convention)")
u_prime = cayley_unitary(a_prime)
print("U(A') unitary defect      :",
      np.linalg.norm(u_prime.conj().T @ u_prime - np.eye(model.dim)))
