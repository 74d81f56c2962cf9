"""Exact semi-analytic model of the Robin family for -d^2/dx^2 on [0, 1].

The function algebra is spanned by terms c * x^k * exp(r*x); it is closed
under differentiation, antidifferentiation and products, and all L2 inner
products and traces are evaluated in closed form, so the boundary-triplet
identities hold up to rounding only.  The boundary convention is

    trace0(u) = (u(0), u(1)),    trace1(u) = (u'(0), -u'(1)),

the minimal operator has all four traces zero, and the reference extension
is the Dirichlet one.  The Robin family is the relation

    {(0, b, c, -kappa*b)}  in C^2 + C^2,

which constrains u(0) = 0 and u'(1) = kappa * u(1); kappa = infinity is the
chart point with u(0) = u(1) = 0.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .gelfand import identity_triple
from .relspace import DEFAULT_TOL, LinearRelation

__all__ = [
    "ExpPoly",
    "one",
    "xvar",
    "exponential",
    "sin_wave",
    "cos_wave",
    "sinh_wave",
    "dirichlet_solve",
    "helmholtz_dirichlet_solve",
    "deficiency_basis",
    "robin_relation",
    "kappa_of_theta",
    "secular_eigenvalues",
    "eigenfunction",
    "boundary_residual",
    "galerkin_sine",
    "RellichBoundaryProblem",
    "rellich_dtn_matrix",
]

_ZERO_COEF = 0.0 + 0.0j


class ExpPoly:
    """Finite sum of terms coef * x**power * exp(rate*x) on [0, 1].

    Terms are kept in a canonical form: merged by (power, rate), exact zero
    coefficients dropped, sorted for reproducibility.  Instances are
    immutable; arithmetic returns new values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for coef, power, rate in terms:
            coef = complex(coef)
            power = int(power)
            rate = complex(rate)
            if power < 0:
                raise ValueError("powers must be nonnegative")
            key = (power, rate)
            merged[key] = merged.get(key, _ZERO_COEF) + coef
        items = tuple(sorted(
            ((coef, power, rate) for (power, rate), coef in merged.items()
             if coef != 0),
            key=lambda t: (t[1], t[2].real, t[2].imag),
        ))
        object.__setattr__(self, "terms", items)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly values are immutable")

    @property
    def is_zero(self):
        return not self.terms

    # -- algebra ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return ExpPoly(self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            prod = [(c1 * c2, k1 + k2, r1 + r2)
                    for c1, k1, r1 in self.terms
                    for c2, k2, r2 in other.terms]
            return ExpPoly(prod)
        return ExpPoly([(complex(other) * c, k, r) for c, k, r in self.terms])

    __rmul__ = __mul__

    def conjugate(self):
        return ExpPoly([(np.conj(c), k, np.conj(r)) for c, k, r in self.terms])

    def derivative(self):
        out = []
        for c, k, r in self.terms:
            if k > 0:
                out.append((c * k, k - 1, r))
            if r != 0:
                out.append((c * r, k, r))
        return ExpPoly(out)

    def antiderivative(self):
        """An antiderivative, exact: repeated integration by parts."""
        return ExpPoly(self._antiderivative_terms())

    def _antiderivative_terms(self):
        # int x^k e^{rx} dx = e^{rx} sum_{j<=k} (-1)^{k-j} (k!/j!) x^j / r^{k-j+1}
        out = []
        for c, k, r in self.terms:
            if r == 0:
                out.append((c / (k + 1), k + 1, 0.0))
                continue
            coef = c
            for j in range(k, -1, -1):
                out.append((coef / r, j, r))
                coef = -coef * j / r
        return out

    def __call__(self, x):
        x = complex(x)
        return complex(sum(c * x**k * cmath.exp(r * x)
                           for c, k, r in self.terms))

    def integral01(self):
        anti = ExpPoly(self._antiderivative_terms())
        return anti(1.0) - anti(0.0)

    def inner(self, other):
        """L2[0,1] inner product, conjugate-linear in the second slot."""
        return (self * other.conjugate()).integral01()

    def norm(self):
        return math.sqrt(max(0.0, self.inner(self).real))

    # -- traces -----------------------------------------------------------
    def trace0(self):
        """(u(0), u(1))."""
        return np.array([self(0.0), self(1.0)])

    def trace1(self):
        """(u'(0), -u'(1))."""
        du = self.derivative()
        return np.array([du(0.0), -du(1.0)])

    def __repr__(self):
        if not self.terms:
            return "ExpPoly(0)"
        bits = [f"({c:.3g})*x^{k}*e^({r:.3g}x)" for c, k, r in self.terms]
        return "ExpPoly(" + " + ".join(bits) + ")"


def one():
    return ExpPoly([(1.0, 0, 0.0)])


def xvar():
    return ExpPoly([(1.0, 1, 0.0)])


def exponential(rate, coef=1.0):
    return ExpPoly([(coef, 0, rate)])


def sin_wave(omega):
    """sin(omega x) written with complex rates."""
    return ExpPoly([(-0.5j, 0, 1j * omega), (0.5j, 0, -1j * omega)])


def cos_wave(omega):
    return ExpPoly([(0.5, 0, 1j * omega), (0.5, 0, -1j * omega)])


def sinh_wave(s):
    return ExpPoly([(0.5, 0, s), (-0.5, 0, s * -1.0)])


def dirichlet_solve(rhs):
    """The unique u with -u'' = rhs and u(0) = u(1) = 0, exactly."""
    particular = -1.0 * ExpPoly(
        ExpPoly(rhs._antiderivative_terms())._antiderivative_terms())
    beta = -particular(0.0)
    alpha = -particular(1.0) - beta
    return particular + ExpPoly([(alpha, 1, 0.0), (beta, 0, 0.0)])


def _collect_by_rate(u):
    groups = {}
    for c, k, r in u.terms:
        by_power = groups.setdefault(r, {})
        by_power[k] = by_power.get(k, 0.0) + c
    return groups


def helmholtz_dirichlet_solve(shift, rhs, tol=1e-12):
    """The u with -u'' + shift*u = rhs, u(0) = u(1) = 0, for shift != 0.

    Particular solutions are found per exponential rate by undetermined
    coefficients; a rate hitting a characteristic root raises the ansatz
    degree by one instead of dividing by a vanishing pivot.
    """
    shift = complex(shift)
    if shift == 0:
        raise ValueError("use dirichlet_solve for shift == 0")
    particular = ExpPoly()
    for rate, powers in _collect_by_rate(rhs).items():
        deg = max(powers)
        pivot = shift - rate * rate
        resonant = abs(pivot) <= 1e-9 * max(abs(shift), abs(rate) ** 2, 1.0)
        if resonant:
            # treat the rate as an exact characteristic root: kill the pivot
            # and raise the ansatz degree instead of dividing by it
            pivot = 0.0
        size = deg + 2 if resonant else deg + 1
        # action of -(d/dx)^2 + shift on q(x) e^{rate x}:
        # row i (coefficient of x^i):
        #   (shift - rate^2) q_i - 2 rate (i+1) q_{i+1} - (i+2)(i+1) q_{i+2}
        mat = np.zeros((size, size), dtype=complex)
        for i in range(size):
            mat[i, i] = pivot
            if i + 1 < size:
                mat[i, i + 1] = -2.0 * rate * (i + 1)
            if i + 2 < size:
                mat[i, i + 2] = -(i + 2) * (i + 1)
        vec = np.zeros(size, dtype=complex)
        for k, c in powers.items():
            vec[k] = c
        coefs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
        resid = np.linalg.norm(mat @ coefs - vec)
        if resid > tol * max(1.0, np.linalg.norm(vec)):
            raise np.linalg.LinAlgError("undetermined-coefficient solve failed")
        particular = particular + ExpPoly(
            [(coefs[j], j, rate) for j in range(size)])
    root = cmath.sqrt(shift)
    e_plus = exponential(root)
    e_minus = exponential(-root)
    bmat = np.array([[1.0, 1.0],
                     [cmath.exp(root), cmath.exp(-root)]], dtype=complex)
    if abs(np.linalg.det(bmat)) < 1e-14:
        raise np.linalg.LinAlgError("homogeneous boundary system is singular")
    ab = np.linalg.solve(bmat, np.array([-particular(0.0), -particular(1.0)]))
    return particular + ab[0] * e_plus + ab[1] * e_minus


def deficiency_basis(mu):
    """Two independent solutions of -u'' = mu u: {1, x} at mu = 0, otherwise
    exp(+-rate x) with rate the principal square root of -mu."""
    mu = complex(mu)
    if mu == 0:
        return [one(), xvar()]
    neg = -mu
    # negation can leave signed zeros that flip the principal branch
    rate = cmath.sqrt(complex(neg.real + 0.0, neg.imag + 0.0))
    return [exponential(rate), exponential(-rate)]


def robin_relation(kappa, tol=DEFAULT_TOL):
    """The boundary relation {(0, b, c, -kappa b)} in trace coordinates.

    At kappa = infinity (math.inf or None) the relation is {(0, 0, c, d)}:
    both boundary values vanish and both second traces are free.
    """
    if kappa is None or (isinstance(kappa, float) and math.isinf(kappa)):
        cols = np.array([[0, 0], [0, 0], [1, 0], [0, 1]], dtype=complex)
    else:
        cols = np.array([[0, 0],
                         [1, 0],
                         [0, 1],
                         [-kappa, 0]], dtype=complex)
    return LinearRelation.from_span(2, 2, cols, tol=tol)


def kappa_of_theta(theta):
    """Loop parameterization: theta on the circle to kappa = -tan(theta/2).

    Counterclockwise theta traverses the Robin parameter once through
    R + {infinity}; with this orientation the family reports index +1.
    """
    half = 0.5 * theta
    if abs(math.cos(half)) < 1e-12:
        return math.inf
    return -math.tan(half) + 0.0  # normalize -0.0


def _bisect(func, lo, hi, rtol=1e-14, max_iter=200):
    flo = func(lo)
    if flo == 0.0:
        return lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= rtol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def _bracketed_roots(vec_func, scalar_func, grid):
    """Sign-bracketed bisection roots over a dense grid.

    The grid scan is vectorized; bisection polishes each bracket to
    near machine precision.
    """
    vals = vec_func(grid)
    roots = [float(g) for g in grid[vals == 0.0]]
    sign_change = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    for i in sign_change:
        roots.append(_bisect(scalar_func, float(grid[i]), float(grid[i + 1])))
    roots.sort()
    out = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9 * max(1.0, abs(r)):
            out.append(r)
    return out


def secular_eigenvalues(kappa, lambda_max=400.0, s_max=50.0):
    """Eigenvalues (sorted, <= lambda_max) of the Robin condition
    u(0) = 0, u'(1) = kappa u(1); kappa = inf means u(1) = 0.

    Positive eigenvalues omega^2 solve the trigonometric secular equation
    for sin(omega x); negative ones -s^2 solve the hyperbolic equation for
    sinh(s x); zero is admitted exactly when u = x meets the condition.
    """
    infinite = kappa is None or (isinstance(kappa, float) and math.isinf(kappa))
    out = []

    if infinite:
        f_pos_vec = np.sin
        f_pos = math.sin
    else:
        def f_pos_vec(omega):
            return omega * np.cos(omega) - kappa * np.sin(omega)

        def f_pos(omega):
            return omega * math.cos(omega) - kappa * math.sin(omega)

    omega_top = math.sqrt(max(lambda_max, 0.0))
    if omega_top > 0:
        grid = np.concatenate([
            np.geomspace(1e-8, min(0.01, omega_top), 80),
            np.linspace(min(0.01, omega_top), omega_top,
                        max(2000, int(80 * omega_top))),
        ])
        out.extend(w * w for w in _bracketed_roots(f_pos_vec, f_pos, grid))

    zero_admitted = (not infinite) and abs(1.0 - kappa) <= 1e-12 * max(1.0, abs(kappa))
    if zero_admitted:
        out.append(0.0)

    if not infinite:
        def f_neg_vec(s):
            return s * np.cosh(s) - kappa * np.sinh(s)

        def f_neg(s):
            return s * math.cosh(s) - kappa * math.sinh(s)

        grid = np.concatenate([
            np.geomspace(1e-8, 0.01, 80),
            np.linspace(0.01, s_max, 10000),
        ])
        for s in _bracketed_roots(f_neg_vec, f_neg, grid):
            lam = -s * s
            if zero_admitted and abs(lam) < 1e-13:
                continue
            out.append(lam)

    out = [lam for lam in out if lam <= lambda_max]
    out.sort()
    dedup = []
    for lam in out:
        if not dedup or abs(lam - dedup[-1]) > 1e-9 * max(1.0, abs(lam)):
            dedup.append(lam)
    return np.array(dedup)


def eigenfunction(lam):
    """The candidate eigenfunction with u(0) = 0 for the eigenvalue lam."""
    if lam > 0:
        return sin_wave(math.sqrt(lam))
    if lam < 0:
        return sinh_wave(math.sqrt(-lam))
    return xvar()


def boundary_residual(kappa, lam):
    """Residual of the Robin condition at the candidate eigenvalue."""
    u = eigenfunction(lam)
    du = u.derivative()
    if kappa is None or (isinstance(kappa, float) and math.isinf(kappa)):
        return abs(u(1.0))
    scale = max(1.0, abs(kappa))
    return abs(du(1.0) - kappa * u(1.0)) / scale


def galerkin_sine(n_modes):
    """Galerkin data in the orthonormal basis sqrt(2) sin(n pi x), n <= N.

    Returns (eigenvalues, cayley_diagonal, project) where project maps an
    ExpPoly to its first N sine coefficients, computed in closed form.
    """
    if n_modes < 4:
        raise ValueError("need at least 4 modes")
    modes = [math.sqrt(2.0) * sin_wave(n * math.pi)
             for n in range(1, n_modes + 1)]
    lam = np.array([(n * math.pi) ** 2 for n in range(1, n_modes + 1)])
    cayley = (lam - 1j) / (lam + 1j)

    def project(u):
        return np.array([u.inner(phi) for phi in modes])

    return lam, cayley, project


# ---------------------------------------------------------------------------
# boundary-problem realization
# ---------------------------------------------------------------------------

def _orthonormalize_exppolys(funcs):
    basis = []
    for f in funcs:
        g = f
        for b in basis:
            g = g - g.inner(b) * b
        nrm = g.norm()
        if nrm < 1e-13:
            raise np.linalg.LinAlgError("dependent deficiency solutions")
        basis.append((1.0 / nrm) * g)
    return basis


class _InnerBoundaryMaps:
    """Boundary values of the deficiency triplet at mu = i, exactly.

    A function u with action f = -u'' splits into a minimal-domain part plus
    deficiency parts u_plus, u_minus; the parts are recovered by orthogonal
    projection of f -+ i u onto the deficiency spaces and the isometry is
    evaluated through an exact Dirichlet resolvent solve.
    """

    def __init__(self):
        self.kplus = _orthonormalize_exppolys(deficiency_basis(1j))
        self.kminus = _orthonormalize_exppolys(deficiency_basis(-1j))
        self._v_images = [self._isometry(y) for y in self.kplus]

    @staticmethod
    def _isometry(y):
        # (A - mu)(A - conj mu)^-1 y = y - 2i (A + i)^-1 y
        w = helmholtz_dirichlet_solve(1j, 2j * y)
        return y - w

    @staticmethod
    def _project(funcs, g):
        coords = np.array([g.inner(b) for b in funcs])
        proj = ExpPoly()
        for c, b in zip(coords, funcs):
            proj = proj + c * b
        return coords, proj

    def split(self, u):
        f = -1.0 * u.derivative().derivative()
        _, pm = self._project(self.kminus, f + (-1j) * u)
        _, pp = self._project(self.kplus, f + 1j * u)
        u_minus = (1.0 / -2j) * pm
        u_plus = (1.0 / 2j) * pp
        return u_plus, u_minus

    def gamma(self, u):
        """Coordinates of the two boundary values in the K- basis."""
        u_plus, u_minus = self.split(u)
        cp = np.array([u_plus.inner(b) for b in self.kplus])
        v_up = ExpPoly()
        for c, img in zip(cp, self._v_images):
            v_up = v_up + c * img
        g0 = u_minus + v_up
        g1 = (-1j) * u_minus + 1j * v_up
        coords = lambda g: np.array([g.inner(b) for b in self.kminus])
        return coords(g0), coords(g1)


class RellichBoundaryProblem:
    """The Robin model as a boundary problem over the exact algebra.

    Elements of the maximal domain are ExpPoly values; the boundary space is
    C^2 with the identity Gelfand triple, so the reduced maps coincide with
    the raw ones up to the Dirichlet-to-Neumann correction.
    """

    def __init__(self, tol=DEFAULT_TOL):
        self.tol = tol
        self.boundary_dim = 2
        self.triple = identity_triple(2, tol=tol)
        self._inner_maps = None

    # -- element operations -------------------------------------------------
    @staticmethod
    def action(u):
        return -1.0 * u.derivative().derivative()

    @staticmethod
    def inner_h(u, v):
        return u.inner(v)

    def lagrange_form(self, u, v):
        return self.action(u).inner(v) - u.inner(self.action(v))

    @staticmethod
    def gamma0(u):
        return u.trace0()

    @staticmethod
    def gamma1(u):
        return u.trace1()

    def project_regular(self, u):
        return dirichlet_solve(self.action(u))

    @staticmethod
    def element_norm(u):
        return u.norm()

    # -- distinguished elements ----------------------------------------------
    @staticmethod
    def kernel_basis():
        return [one(), xvar()]

    @staticmethod
    def minimal_domain_elements():
        bump = ExpPoly([(1.0, 2, 0.0), (-2.0, 3, 0.0), (1.0, 4, 0.0)])
        return [bump, xvar() * bump, exponential(1.0) * bump,
                exponential(-2.0) * bump]

    @staticmethod
    def gamma1_kernel_elements():
        # constants and the cubic 3x^2 - 2x^3 have vanishing derivative traces
        cubic = ExpPoly([(3.0, 2, 0.0), (-2.0, 3, 0.0)])
        return [one(), cubic]

    def test_elements(self, rng=None, count=8):
        base = [one(), xvar(), ExpPoly([(1.0, 2, 0.0)]),
                ExpPoly([(1.0, 3, 0.0)]), exponential(1.0), exponential(-1.0),
                sin_wave(math.pi), cos_wave(2.0)]
        if rng is None:
            return base[:count] if count <= len(base) else base
        rates = [0.0, 1.0, -1.0, 2.0, 1j * math.pi, -1j * math.pi]
        out = list(base)
        while len(out) < count:
            terms = []
            for _ in range(3):
                coef = rng.standard_normal() + 1j * rng.standard_normal()
                terms.append((coef, int(rng.integers(0, 3)),
                              rates[int(rng.integers(0, len(rates)))]))
            out.append(ExpPoly(terms))
        return out[:count]

    # -- deficiency triplet ----------------------------------------------------
    def inner_boundary_maps(self):
        if self._inner_maps is None:
            self._inner_maps = _InnerBoundaryMaps()
        return self._inner_maps.gamma


def rellich_dtn_matrix():
    """Dirichlet-to-Neumann matrix at spectral point zero for the model.

    Computed through the algebra: solve the kernel for prescribed boundary
    values and take second traces.  Equals [[-1, 1], [1, -1]].
    """
    from .triplet import dirichlet_to_neumann  # local import, no cycle at load

    return dirichlet_to_neumann(RellichBoundaryProblem())
