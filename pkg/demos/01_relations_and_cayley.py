"""Subspace and linear-relation calculus: adjoints, Cayley transforms,
operator/multivalued splits.

A linear relation is a subspace of pairs (x, y); it generalizes the graph
of an operator and is the natural carrier for boundary conditions.  This
walkthrough builds a few relations, takes adjoints, and shows how the
Cayley transform turns self-adjoint relations into unitaries, sending
multivalued directions to the eigenvalue +1.
"""

import numpy as np

from tripletflow import (LinearRelation, Subspace, adjoint_relation,
                         cayley_unitary, is_self_adjoint, map_relation,
                         parts_decomposition)

rng = np.random.default_rng(0)

print("== graphs and adjoints ==")
m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
graph = LinearRelation.graph_of(m)
adj = adjoint_relation(graph)
print("adjoint of graph(M) equals graph(M^H):",
      adj.gap(LinearRelation.graph_of(m.conj().T)) < 1e-12)

herm = m + m.conj().T
print("graph of a Hermitian matrix is self-adjoint:",
      is_self_adjoint(LinearRelation.graph_of(herm)))

print("\n== the Cayley transform ==")
u = cayley_unitary(LinearRelation.graph_of(herm))
print("||U^H U - 1|| =", np.linalg.norm(u.conj().T @ u - np.eye(3)))
print("U(graph 0) =", cayley_unitary(LinearRelation.graph_of(
    np.zeros((1, 1))))[0, 0], " (graph-of-zero direction -> -1)")
print("U(0 + C)   =", cayley_unitary(LinearRelation.zero_times_full(1))[0, 0],
      " (multivalued direction -> +1)")

print("\n== operator and multivalued parts ==")
# u(0) = 0, u'(1) = kappa u(1) packaged as a relation in C^2 + C^2
kappa = 1.7
cols = np.array([[0, 0], [1, 0], [0, 1], [-kappa, 0]], dtype=complex)
robin = LinearRelation.from_span(2, 2, cols)
op_part, mul_part = parts_decomposition(robin)
print("robin relation dim:", robin.dim)
print("operator part dim:", op_part.dim, " multivalued part dim:",
      mul_part.dim)
print("multivalued direction:", np.round(mul_part.basis[:, 0], 6))

print("\n== images under invertible maps ==")
swap = np.zeros((6, 6))
swap[:3, 3:] = np.eye(3)
swap[3:, :3] = np.eye(3)
inv_graph = map_relation(swap, LinearRelation.graph_of(herm + 4 * np.eye(3)))
print("swap(graph A) equals graph(A^-1):",
      inv_graph.gap(LinearRelation.graph_of(
          np.linalg.inv(herm + 4 * np.eye(3)))) < 1e-11)
