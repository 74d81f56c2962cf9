"""Symbol-level calculus: spectral splittings, the boundary projector, and
the graded (Dirac-like) picture.

At a boundary covector the data is a pencil t*sigma + tau; its quotient
rho = sigma^(-1) tau splits the boundary values into the spans of
generalized eigenspaces below and above the real axis.  The projector onto
the lower space along the upper one is computed through the matrix sign
function and cross-checked against a residue-style eigendecomposition.  In
the graded case the lower space is the graph of an explicit unitary, which
makes the transversality conditions automatic.
"""

import math

import numpy as np

from tripletflow import (SymbolPoint, calderon_symbol, dirac_unitary,
                         mixing_map, spectral_split, split_form_lagrangian_gap,
                         split_winding_report, transversality_check)
from tripletflow.famindex import det_winding
from tripletflow.relspace import LinearRelation, map_relation

rng = np.random.default_rng(4)

print("== spectral splitting and the boundary projector ==")
d = np.diag(rng.standard_normal(4) + 1j * np.array([0.8, -1.2, 1.5, -0.6]))
v = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
rho = v @ d @ np.linalg.inv(v)
lower, upper = spectral_split(rho)
print("lower/upper dims:", lower.dim, upper.dim)
cplus = calderon_symbol(rho)
print("idempotency defect :", np.linalg.norm(cplus @ cplus - cplus))
print("commutation defect :", np.linalg.norm(cplus @ rho - rho @ cplus))
evals, evecs = np.linalg.eig(rho)
vinv = np.linalg.inv(evecs)
oracle = sum(np.outer(evecs[:, j], vinv[j])
             for j in range(4) if evals[j].imag < 0)
print("vs residue oracle  :", np.linalg.norm(cplus - oracle))

print("\n== the graded picture ==")
tb = np.array([[1.2j, 0.7], [-0.7, -0.4j]], dtype=complex)
tb = 0.5 * (tb - tb.conj().T)
point = SymbolPoint.dirac(tb)
ups = dirac_unitary(tb)
low, _ = spectral_split(point.rho)
print("graph of the graded unitary vs lower space (gap):",
      LinearRelation.graph_of(ups).graph.gap(low))
print("transversality report:",
      {k: (round(v, 4) if isinstance(v, float) else v)
       for k, v in transversality_check(point).items()})

print("\n== winding additivity across a grading ==")
theta = np.linspace(0, 2 * math.pi, 48, endpoint=False)
taus = [np.diag([1j * (2 + math.sin(t)), -1j * (1.5 + math.cos(t))])
        for t in theta]
grads = [np.diag([1j, -1j]) for _ in theta]
print(split_winding_report(taus, grads))
upper_loop = [np.array([[np.exp(1j * t)]]) for t in theta]
lower_loop = [np.array([[np.exp(-1j * t)]]) for t in theta]
sums = [np.diag([a[0, 0], b[0, 0]]) for a, b in zip(upper_loop, lower_loop)]
print("winding additivity with nonzero parts:",
      det_winding(sums), "=", det_winding(upper_loop), "+",
      det_winding(lower_loop))

print("\n== mixing two copies of the boundary data ==")
sigma = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
upsilon = 1j * sigma
phi, phi_inv = mixing_map(upsilon, sigma=sigma)
herm = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
herm = herm + herm.conj().T
mixed = map_relation(phi_inv, LinearRelation.graph_of(herm))
print("inverse image of a Hermitian graph is split-form Lagrangian:",
      split_form_lagrangian_gap(mixed, sigma) < 1e-10)
