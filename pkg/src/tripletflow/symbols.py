"""Symbol-level calculus for first-order boundary problems.

At a boundary covector the principal symbol is t*sigma + tau with sigma
Hermitian invertible and tau Hermitian; the spectral splitting of
rho = sigma^(-1) tau by the sign of the imaginary part of the eigenvalues
drives everything else: the projector onto the lower splitting subspace
along the upper one, the transversality conditions, and in the graded case
the unitary whose graph is the lower subspace.

The matrix sign function is computed with a determinant-scaled Newton
iteration; a dense eigendecomposition is used only as a cross-check oracle
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .relspace import DEFAULT_TOL, LinearRelation, Subspace, cayley_unitary
from .famindex import det_winding

__all__ = [
    "SymbolPoint",
    "matrix_sign",
    "spectral_split",
    "calderon_symbol",
    "dirac_unitary",
    "transversality_check",
    "mixing_map",
    "split_form_lagrangian_gap",
    "graph_condition_selfadjoint_gap",
    "split_winding_report",
]


def _hermitian_check(mat, name, tol):
    mat = np.asarray(mat, dtype=complex)
    if np.linalg.norm(mat - mat.conj().T) > tol * max(1.0, np.linalg.norm(mat)):
        raise ValueError(f"{name} must be Hermitian")
    return 0.5 * (mat + mat.conj().T)


def _skew_check(mat, name, tol):
    mat = np.asarray(mat, dtype=complex)
    if np.linalg.norm(mat + mat.conj().T) > tol * max(1.0, np.linalg.norm(mat)):
        raise ValueError(f"{name} must be skew-adjoint")
    return 0.5 * (mat - mat.conj().T)


@dataclass
class SymbolPoint:
    """Principal symbol data at a fixed boundary covector."""

    sigma: np.ndarray
    tau: np.ndarray
    dirac_like: bool = False
    tol: float = 1e-9
    rho: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        sigma = _hermitian_check(self.sigma, "sigma", self.tol)
        tau = _hermitian_check(self.tau, "tau", self.tol)
        svals = np.linalg.svd(sigma, compute_uv=False)
        if svals[-1] <= self.tol * svals[0]:
            raise ValueError("sigma must be invertible")
        self.sigma = sigma
        self.tau = tau
        self.rho = np.linalg.solve(sigma, tau)
        if self.dirac_like:
            n = sigma.shape[0]
            if n % 2:
                raise ValueError("graded symbols need even dimension")
            half = n // 2
            off = self.rho[:half, half:]
            _skew_check(-off, "off-diagonal block of rho", 10 * self.tol)
            blocks_ok = (
                np.linalg.norm(self.rho[:half, :half]) <= self.tol
                and np.linalg.norm(self.rho[half:, half:]) <= self.tol
                and np.linalg.norm(self.rho[half:, :half] - off) <= self.tol)
            if not blocks_ok:
                raise ValueError("rho does not have the graded block shape")

    @classmethod
    def dirac(cls, tau_bold, tol=1e-9):
        """Graded point with rho = [[0, -tb], [-tb, 0]], tb skew-adjoint.

        The Hermitian coefficient of the normal direction is the grading
        diag(1, -1), which anticommutes with the skew-Hermitian rho, so the
        tangential part stays Hermitian.
        """
        tb = _skew_check(tau_bold, "tau_bold", tol)
        half = tb.shape[0]
        sigma = np.zeros((2 * half, 2 * half), dtype=complex)
        sigma[:half, :half] = np.eye(half)
        sigma[half:, half:] = -np.eye(half)
        tau = np.zeros_like(sigma)
        tau[:half, half:] = -tb
        tau[half:, :half] = tb
        return cls(sigma=sigma, tau=tau, dirac_like=True, tol=tol)

    @property
    def half_dim(self):
        return self.sigma.shape[0] // 2

    def to_json(self):
        from .gelfand import matrix_to_json

        return {"sigma": matrix_to_json(self.sigma),
                "tau": matrix_to_json(self.tau),
                "dirac_like": self.dirac_like}

    @classmethod
    def from_json(cls, obj, tol=1e-9):
        from .gelfand import matrix_from_json

        return cls(sigma=matrix_from_json(obj["sigma"]),
                   tau=matrix_from_json(obj["tau"]),
                   dirac_like=bool(obj.get("dirac_like", False)), tol=tol)


def matrix_sign(mat, tol=1e-12, max_iter=100):
    """Matrix sign function by determinant-scaled Newton iteration.

    Fails when an eigenvalue sits too close to the imaginary axis, which is
    exactly the degenerate case excluded by ellipticity.
    """
    s = np.asarray(mat, dtype=complex)
    n = s.shape[0]
    for _ in range(max_iter):
        det = np.linalg.det(s)
        if det == 0 or not np.isfinite(det):
            raise np.linalg.LinAlgError("sign iteration hit a singular matrix")
        scale = abs(det) ** (-1.0 / n)
        s_scaled = scale * s
        try:
            inv = np.linalg.inv(s_scaled)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                "sign iteration hit a singular matrix") from exc
        s = 0.5 * (s_scaled + inv)
        if np.linalg.norm(s @ s - np.eye(n)) <= tol:
            return s
    raise np.linalg.LinAlgError(
        "sign iteration did not converge: eigenvalue too close to the "
        "real axis")


def _projector_range(proj):
    """Range of a (possibly oblique) projector; the rank is read off the
    trace, which is robust even when the projector is ill-conditioned."""
    n = proj.shape[0]
    rank = int(round(float(np.trace(proj).real)))
    if rank <= 0:
        return Subspace.zero(n)
    u, _, _ = np.linalg.svd(proj)
    return Subspace(u[:, :rank], tol=DEFAULT_TOL, _trusted=True)


def spectral_split(rho, tol=1e-12):
    """Splitting subspaces of a matrix with no real eigenvalues.

    Returns (lower, upper): the spans of the generalized eigenspaces with
    negative and positive imaginary eigenvalues, computed from the sign of
    i*rho; the projector onto the lower space is (1 + sign(i*rho))/2.
    """
    rho = np.asarray(rho, dtype=complex)
    sign = matrix_sign(1j * rho, tol=tol)
    n = rho.shape[0]
    lower = _projector_range(0.5 * (np.eye(n) + sign))
    upper = _projector_range(0.5 * (np.eye(n) - sign))
    if lower.dim + upper.dim != n:
        raise np.linalg.LinAlgError("splitting subspaces do not fill the space")
    return lower, upper


def calderon_symbol(point_or_rho, tol=1e-12):
    """Projection onto the lower splitting subspace along the upper one."""
    rho = (point_or_rho.rho if isinstance(point_or_rho, SymbolPoint)
           else np.asarray(point_or_rho, dtype=complex))
    sign = matrix_sign(1j * rho, tol=tol)
    return 0.5 * (np.eye(rho.shape[0]) + sign)


def dirac_unitary(tau_bold, tol=1e-9):
    """Unitary with i*tb = -(unitary)*|tb| for skew-adjoint invertible tb.

    Its graph is the lower splitting subspace of the graded block matrix
    [[0, -tb], [-tb, 0]].
    """
    tb = _skew_check(tau_bold, "tau_bold", tol)
    herm = 1j * tb
    evals, evecs = np.linalg.eigh(herm)
    if np.min(np.abs(evals)) <= tol * max(1.0, np.max(np.abs(evals))):
        raise ValueError("tau_bold must be invertible")
    absval = evecs @ np.diag(np.abs(evals)) @ evecs.conj().T
    return -herm @ np.linalg.inv(absval)


def transversality_check(point, tol=1e-9):
    """Minimal principal angles between the splitting subspaces and the two
    coordinate half-spaces of the graded decomposition.

    Returns a dict with the four smallest angles and an overall verdict;
    transversality means every angle is positive.
    """
    lower, upper = spectral_split(point.rho)
    half = point.half_dim
    n = 2 * half
    first = Subspace.from_span(np.eye(n)[:, :half], ambient_dim=n)
    second = Subspace.from_span(np.eye(n)[:, half:], ambient_dim=n)

    def min_angle(sub, axis):
        if sub.dim == 0 or axis.dim == 0:
            return float(np.pi / 2)
        s = np.linalg.svd(sub.basis.conj().T @ axis.basis, compute_uv=False)
        return float(np.arccos(min(1.0, s.max())))

    angles = {
        "lower_vs_first": min_angle(lower, first),
        "lower_vs_second": min_angle(lower, second),
        "upper_vs_first": min_angle(upper, first),
        "upper_vs_second": min_angle(upper, second),
    }
    angles["transversal"] = bool(min(v for k, v in angles.items()
                                     if k != "transversal") > tol)
    return angles


def mixing_map(upsilon, sigma=None, tol=1e-9):
    """The summand-mixing automorphism (a, b) -> (a - U^(-1) b, U a + b).

    upsilon must be unitary; when sigma is supplied, the commutation
    hypothesis that makes the graph boundary condition self-adjoint is
    enforced.  Returns the pair (map, inverse) as block matrices on the
    doubled space.
    """
    u = np.asarray(upsilon, dtype=complex)
    n = u.shape[0]
    if np.linalg.norm(u.conj().T @ u - np.eye(n)) > tol:
        raise ValueError("upsilon must be unitary")
    if sigma is not None:
        sigma = np.asarray(sigma, dtype=complex)
        if np.linalg.norm(u @ sigma - sigma @ u) > tol * max(
                1.0, np.linalg.norm(sigma)):
            raise ValueError("upsilon must commute with sigma")
    u_inv = u.conj().T
    phi = np.zeros((2 * n, 2 * n), dtype=complex)
    phi[:n, :n] = np.eye(n)
    phi[:n, n:] = -u_inv
    phi[n:, :n] = u
    phi[n:, n:] = np.eye(n)
    phi_inv = np.zeros_like(phi)
    phi_inv[:n, :n] = 0.5 * np.eye(n)
    phi_inv[:n, n:] = 0.5 * u_inv
    phi_inv[n:, :n] = -0.5 * u
    phi_inv[n:, n:] = 0.5 * np.eye(n)
    return phi, phi_inv


def split_form_lagrangian_gap(rel, sigma):
    """Gap measuring whether a relation is Lagrangian for the split form.

    The form has coefficient sigma on the first summand and -sigma on the
    second; the relation is a self-adjoint boundary condition in the split
    picture exactly when the image of its graph under sigma (+) -sigma is
    the orthogonal complement of the graph.  The mixing map carries such
    relations to plainly self-adjoint ones and back.
    """
    n = rel.dom_dim
    sig_hat = np.zeros((2 * n, 2 * n), dtype=complex)
    sig_hat[:n, :n] = np.asarray(sigma, dtype=complex)
    sig_hat[n:, n:] = -np.asarray(sigma, dtype=complex)
    image = Subspace.from_span(sig_hat @ rel.graph.basis, ambient_dim=2 * n)
    return image.gap(rel.graph.complement())


def graph_condition_selfadjoint_gap(upsilon, sigma):
    """Lagrangian gap of the graph of a unitary commuting with sigma; zero
    gap is the self-adjointness of that boundary condition."""
    return split_form_lagrangian_gap(
        LinearRelation.graph_of(np.asarray(upsilon, dtype=complex)), sigma)


def _aligned_frames(subspaces):
    """Orthonormal frames along a loop of subspaces, aligned by polar
    rotations so that consecutive frames stay close; the residual holonomy
    after the wrap is returned with the frames."""
    frames = [subspaces[0].basis]
    for sub in subspaces[1:]:
        q = sub.basis
        overlap = q.conj().T @ frames[-1]
        u, _, vh = np.linalg.svd(overlap)
        frames.append(q @ (u @ vh))
    overlap = subspaces[0].basis.conj().T @ frames[-1]
    u, _, vh = np.linalg.svd(overlap)
    holonomy = (subspaces[0].basis @ (u @ vh)).conj().T @ frames[0]
    return frames, holonomy


def split_winding_report(tau_loop, grading_loop=None, tol=1e-8):
    """Winding additivity across a grading for a loop of skew-adjoint
    invertible symbols.

    For each sample the Hermitian matrix i*tau is compressed to the two
    eigenbundles of the grading map (a skew-adjoint matrix commuting with
    tau; constant multiplication by -i when omitted, in which case the
    lower bundle is everything).  Reports the winding of the Cayley loop of
    the total family and of the two compressions, and the additivity
    defect, which is required to vanish.
    """
    taus = [np.asarray(t, dtype=complex) for t in tau_loop]
    count = len(taus)
    n = taus[0].shape[0]
    if grading_loop is None:
        gradings = [-1j * np.eye(n) for _ in range(count)]
    else:
        gradings = [np.asarray(g, dtype=complex) for g in grading_loop]
    lowers, uppers = [], []
    for tb, f in zip(taus, gradings):
        _skew_check(tb, "tau", tol)
        _skew_check(f, "grading", tol)
        if np.linalg.norm(tb @ f - f @ tb) > tol * max(
                1.0, np.linalg.norm(tb) * np.linalg.norm(f)):
            raise ValueError("grading must commute with the symbol")
        lo, up = spectral_split(f)
        lowers.append(lo)
        uppers.append(up)

    def compression_winding(subs):
        if subs[0].dim == 0:
            return 0
        frames, holonomy = _aligned_frames(subs)
        if np.linalg.norm(holonomy - np.eye(subs[0].dim)) > 1e-6:
            raise np.linalg.LinAlgError(
                "grading bundle has nontrivial holonomy; the compressed "
                "winding is frame-dependent")
        mats = [fr.conj().T @ (1j * tb) @ fr for fr, tb in zip(frames, taus)]
        unis = [cayley_unitary(LinearRelation.graph_of(
            0.5 * (m + m.conj().T))) for m in mats]
        return det_winding(unis)

    total = det_winding([cayley_unitary(LinearRelation.graph_of(
        0.5 * ((1j * tb) + (1j * tb).conj().T))) for tb in taus])
    lower_w = compression_winding(lowers)
    upper_w = compression_winding(uppers)
    return {
        "total": total,
        "lower": lower_w,
        "upper": upper_w,
        "additivity_defect": total - lower_w - upper_w,
    }
