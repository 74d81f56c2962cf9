"""Subspaces of C^n and linear relations in C^n + C^m.

Subspaces are carried as matrices with orthonormal columns obtained from an
SVD; rank decisions use a threshold relative to the largest singular value.
Linear relations are subspaces of the direct sum of domain and codomain and
are the common carrier for boundary conditions, deficiency spaces and
Lagrangian planes.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "Subspace",
    "LinearRelation",
    "span_orthonormalize",
    "adjoint_relation",
    "is_self_adjoint",
    "cayley_unitary",
    "parts_decomposition",
    "map_relation",
    "restrict_relation",
    "relation_to_json",
    "relation_from_json",
]


def _as_matrix(a, rows=None):
    """Validate and convert input to a complex 2-d array (vectors become columns)."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("non-finite entries in input matrix")
    if rows is not None and a.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {a.shape[0]}")
    return a


def _freeze(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _orthonormal_columns(columns, tol):
    """Orthonormal basis of the column span; directions with singular value
    below tol * s_max are dropped.

    Columns are normalized first so that the relative threshold reflects
    angles between directions, not disparate column scales.
    """
    m, k = columns.shape
    if k == 0 or not columns.any():
        return np.zeros((m, 0), dtype=complex)
    norms = np.linalg.norm(columns, axis=0)
    keep = norms > 0.0
    scaled = columns[:, keep] / norms[keep]
    u, s, _ = np.linalg.svd(scaled, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m, 0), dtype=complex)
    rank = int(np.sum(s > tol * s[0]))
    return u[:, :rank]


class Subspace:
    """A subspace of C^n carried by an orthonormal column basis."""

    __slots__ = ("ambient_dim", "basis", "tol")

    def __init__(self, basis, ambient_dim=None, tol=DEFAULT_TOL, _trusted=False):
        basis = _as_matrix(basis, rows=ambient_dim)
        if not _trusted:
            basis = _orthonormal_columns(basis, tol)
        self.ambient_dim = basis.shape[0]
        self.basis = _freeze(basis)
        self.tol = float(tol)

    @classmethod
    def from_span(cls, columns, ambient_dim=None, tol=DEFAULT_TOL):
        columns = _as_matrix(columns, rows=ambient_dim)
        return cls(_orthonormal_columns(columns, tol), tol=tol, _trusted=True)

    @classmethod
    def zero(cls, ambient_dim, tol=DEFAULT_TOL):
        return cls(np.zeros((ambient_dim, 0)), tol=tol, _trusted=True)

    @classmethod
    def full(cls, ambient_dim, tol=DEFAULT_TOL):
        return cls(np.eye(ambient_dim), tol=tol, _trusted=True)

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.conj().T

    def complement(self):
        """Orthogonal complement."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, tol=self.tol)
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(u[:, self.dim:], tol=self.tol, _trusted=True)

    def gap(self, other):
        """Largest principal-angle sine between two subspaces of the same
        ambient space; 1.0 when the dimensions differ.

        The sines are computed directly, as singular values of the
        complement projection of one basis onto the other, which stays
        accurate near zero where the cosine route loses half the digits.
        """
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")
        if self.dim != other.dim:
            return 1.0
        if self.dim == 0:
            return 0.0
        resid = other.basis - self.basis @ (self.basis.conj().T @ other.basis)
        s = np.linalg.svd(resid, compute_uv=False)
        return float(min(1.0, s[0]))

    def contains(self, other, tol=None):
        """Whether a vector or a subspace lies in this subspace (within tol)."""
        tol = self.tol if tol is None else tol
        if isinstance(other, Subspace):
            mat = other.basis
        else:
            mat = _as_matrix(other, rows=self.ambient_dim)
        resid = mat - self.basis @ (self.basis.conj().T @ mat)
        scale = max(1.0, np.linalg.norm(mat))
        return bool(np.linalg.norm(resid) <= 10 * tol * scale)

    def intersect(self, other):
        """Intersection via the null space of stacked orthogonality constraints."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")
        cons = np.vstack([
            self.complement().basis.conj().T,
            other.complement().basis.conj().T,
        ])
        return Subspace.from_span(_null_space(cons, self.tol),
                                  ambient_dim=self.ambient_dim, tol=self.tol)

    def add(self, other):
        """Span of the union."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")
        return Subspace.from_span(np.hstack([self.basis, other.basis]),
                                  tol=min(self.tol, other.tol))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _null_space(a, tol):
    """Orthonormal basis of Ker a, with the same relative rank threshold."""
    m, n = a.shape
    if m == 0 or not a.any():
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    return vh[rank:].conj().T


def span_orthonormalize(columns, tol=DEFAULT_TOL):
    """Subspace spanned by the given columns.

    Singular directions with singular value <= tol * (largest singular value)
    are dropped.  Non-finite entries are rejected.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return Subspace.from_span(_as_matrix(columns), tol=tol)


class LinearRelation:
    """A linear relation in C^dom_dim + C^cod_dim, i.e. a subspace of pairs."""

    __slots__ = ("dom_dim", "cod_dim", "graph")

    def __init__(self, dom_dim, cod_dim, graph):
        if graph.ambient_dim != dom_dim + cod_dim:
            raise ValueError("graph ambient dimension does not match dom+cod")
        self.dom_dim = int(dom_dim)
        self.cod_dim = int(cod_dim)
        self.graph = graph

    @classmethod
    def from_span(cls, dom_dim, cod_dim, columns, tol=DEFAULT_TOL):
        sub = Subspace.from_span(columns, ambient_dim=dom_dim + cod_dim, tol=tol)
        return cls(dom_dim, cod_dim, sub)

    @classmethod
    def from_blocks(cls, x_block, y_block, tol=DEFAULT_TOL):
        x_block = _as_matrix(x_block)
        y_block = _as_matrix(y_block)
        return cls.from_span(x_block.shape[0], y_block.shape[0],
                             np.vstack([x_block, y_block]), tol=tol)

    @classmethod
    def graph_of(cls, matrix, tol=DEFAULT_TOL):
        """The graph {(x, Mx)} of a matrix."""
        matrix = _as_matrix(matrix)
        n = matrix.shape[1]
        return cls.from_blocks(np.eye(n), matrix, tol=tol)

    @classmethod
    def zero_times_full(cls, dim, tol=DEFAULT_TOL):
        """The purely multivalued relation 0 + C^dim."""
        return cls.from_blocks(np.zeros((dim, dim)), np.eye(dim), tol=tol)

    @property
    def dim(self):
        return self.graph.dim

    @property
    def tol(self):
        return self.graph.tol

    def dom_block(self):
        return self.graph.basis[: self.dom_dim]

    def cod_block(self):
        return self.graph.basis[self.dom_dim:]

    def domain(self):
        return Subspace.from_span(self.dom_block(), ambient_dim=self.dom_dim,
                                  tol=self.tol)

    def kernel_at(self, shift):
        """The subspace {x : (x, shift*x) in relation}."""
        coeff = _null_space(self.cod_block() - shift * self.dom_block(), self.tol)
        return Subspace.from_span(self.dom_block() @ coeff,
                                  ambient_dim=self.dom_dim, tol=self.tol)

    def multivalued_part(self):
        """The subspace {y : (0, y) in relation}."""
        coeff = _null_space(self.dom_block(), self.tol)
        return Subspace.from_span(self.cod_block() @ coeff,
                                  ambient_dim=self.cod_dim, tol=self.tol)

    def contains_relation(self, other, tol=None):
        return self.graph.contains(other.graph, tol=tol)

    def gap(self, other):
        if (self.dom_dim, self.cod_dim) != (other.dom_dim, other.cod_dim):
            raise ValueError("relation shapes differ")
        return self.graph.gap(other.graph)

    def __repr__(self):
        return (f"LinearRelation(dom={self.dom_dim}, cod={self.cod_dim}, "
                f"dim={self.dim})")


def adjoint_relation(rel, gram_dom=None, gram_cod=None):
    """Adjoint of a relation: pairs (x, y) with <b, x> = <a, y> for all (a, b).

    Inner products default to the standard ones; optional Gram matrices give
    the inner products of weighted ambient spaces.  The result lives in
    C^cod_dim + C^dom_dim.
    """
    a_blk = rel.dom_block()
    b_blk = rel.cod_block()
    gcod = np.eye(rel.cod_dim) if gram_cod is None else np.asarray(gram_cod)
    gdom = np.eye(rel.dom_dim) if gram_dom is None else np.asarray(gram_dom)
    # row j of the constraint matrix: <b_j, x>_cod - <a_j, y>_dom = 0
    cons = np.hstack([b_blk.conj().T @ gcod, -a_blk.conj().T @ gdom])
    basis = _null_space(cons, rel.tol)
    return LinearRelation.from_span(rel.cod_dim, rel.dom_dim, basis, tol=rel.tol)


def is_self_adjoint(rel, tol=None, gram=None):
    """Whether a square relation equals its adjoint within the gap tolerance."""
    if rel.dom_dim != rel.cod_dim:
        raise ValueError("self-adjointness needs dom_dim == cod_dim")
    tol = rel.tol if tol is None else tol
    adj = adjoint_relation(rel, gram_dom=gram, gram_cod=gram)
    return rel.gap(adj) <= max(tol, 100 * rel.tol)


def cayley_unitary(rel, tol=None):
    """Cayley transform (B - i)(B + i)^(-1) of a self-adjoint relation.

    With the graph basis stacked as [X; Y] the transform is
    (Y - iX)(Y + iX)^(-1).  Multivalued directions map to the eigenvalue +1
    and graph-of-zero directions to -1.
    """
    if rel.dom_dim != rel.cod_dim:
        raise ValueError("Cayley transform needs dom_dim == cod_dim")
    n = rel.dom_dim
    if rel.dim != n:
        raise ValueError(
            f"relation of dimension {rel.dim} in C^{n}+C^{n} cannot be "
            "self-adjoint")
    x_blk = rel.dom_block()
    y_blk = rel.cod_block()
    denom = y_blk + 1j * x_blk
    tol = rel.tol if tol is None else tol
    svals = np.linalg.svd(denom, compute_uv=False)
    if n > 0 and (svals[-1] <= tol * max(1.0, svals[0])):
        raise np.linalg.LinAlgError(
            "Y + iX is numerically singular: the relation is not "
            "self-adjoint within tolerance")
    return (y_blk - 1j * x_blk) @ np.linalg.inv(denom)


def parts_decomposition(rel, tol=None):
    """Split a relation into its operator part and multivalued part.

    The multivalued part is {y : (0, y) in B}; the operator part is the
    restriction B /\\ (C^n + mul^perp), so B = operator_part (+) (0 + mul).
    """
    tol = rel.tol if tol is None else tol
    mul = rel.multivalued_part()
    op = restrict_relation(rel, Subspace.full(rel.dom_dim, tol=tol),
                           mul.complement())
    return op, mul


def map_relation(lin_map, rel):
    """Image of a relation under an invertible linear map of C^dom + C^cod."""
    lin_map = _as_matrix(lin_map, rows=rel.dom_dim + rel.cod_dim)
    svals = np.linalg.svd(lin_map, compute_uv=False)
    if svals[-1] <= rel.tol * max(1.0, svals[0]):
        raise ValueError("map_relation requires an invertible map")
    return LinearRelation.from_span(rel.dom_dim, rel.cod_dim,
                                    lin_map @ rel.graph.basis, tol=rel.tol)


def restrict_relation(rel, dom_sub, cod_sub):
    """Intersection B /\\ (K_dom + K_cod), via stacked null-space constraints."""
    if dom_sub.ambient_dim != rel.dom_dim or cod_sub.ambient_dim != rel.cod_dim:
        raise ValueError("restriction subspaces do not match the relation")
    cons = np.vstack([
        dom_sub.complement().basis.conj().T @ rel.dom_block(),
        cod_sub.complement().basis.conj().T @ rel.cod_block(),
    ])
    coeff = _null_space(cons, rel.tol)
    return LinearRelation.from_span(rel.dom_dim, rel.cod_dim,
                                    rel.graph.basis @ coeff, tol=rel.tol)


def relation_to_json(rel):
    """JSON-ready dict; basis entries are [re, im] pairs in column-major order."""
    cols = []
    for j in range(rel.dim):
        col = rel.graph.basis[:, j]
        cols.extend([[float(z.real), float(z.imag)] for z in col])
    return {"dom_dim": rel.dom_dim, "cod_dim": rel.cod_dim, "basis": cols}


def relation_from_json(obj, tol=DEFAULT_TOL):
    dom_dim = int(obj["dom_dim"])
    cod_dim = int(obj["cod_dim"])
    flat = obj["basis"]
    rows = dom_dim + cod_dim
    if len(flat) % rows:
        raise ValueError("basis length is not a multiple of dom_dim + cod_dim")
    ncols = len(flat) // rows
    mat = np.zeros((rows, ncols), dtype=complex)
    for j in range(ncols):
        for i in range(rows):
            re, im = flat[j * rows + i]
            mat[i, j] = complex(re, im)
    return LinearRelation.from_span(dom_dim, cod_dim, mat, tol=tol)
