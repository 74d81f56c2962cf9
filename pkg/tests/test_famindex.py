import math

import numpy as np
import pytest

from tripletflow import famindex as fi
from tripletflow import relspace as rs
from tripletflow import sturm
from tripletflow.triplet import reduced_triplet, transform_boundary_condition

from conftest import random_complex

THETA = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)


def scalar_loop(winding):
    return [np.array([[np.exp(1j * winding * t)]]) for t in THETA]


# -- determinant winding -------------------------------------------------------

def test_winding_constant_loop():
    assert fi.det_winding([np.eye(3, dtype=complex) for _ in THETA]) == 0


def test_winding_scalar_loop():
    assert fi.det_winding(scalar_loop(1)) == 1
    assert fi.det_winding(scalar_loop(-3)) == -3


def test_winding_additive_under_direct_sum():
    sums = [np.diag([np.exp(1j * t), np.exp(-2j * t)]) for t in THETA]
    assert fi.det_winding(sums) == -1


def test_winding_reparameterization_and_reversal():
    warped = [np.array([[np.exp(1j * (t + 0.4 * math.sin(t)))]])
              for t in THETA]
    assert fi.det_winding(warped) == 1
    reverse = [warped[0]] + warped[:0:-1]
    assert fi.det_winding(reverse) == -1


def test_winding_needs_refinement_without_callback():
    coarse = [np.array([[np.exp(1j * t)]])
              for t in np.linspace(0, 2 * math.pi, 8, endpoint=False)]
    # steps of pi/4 produce ||dU|| ~ 0.76 > 0.5
    with pytest.raises(fi.RefinementError, match="refinement"):
        fi.det_winding(coarse)
    wind = fi.det_winding(
        coarse, thetas=np.linspace(0, 2 * math.pi, 8, endpoint=False),
        refine=lambda t: np.array([[np.exp(1j * t)]]))
    assert wind == 1


def test_winding_mobius_relation_loop():
    # graph of -kappa over the circle: the generator of the circle index
    def unitary(theta):
        rel = rs.LinearRelation.from_blocks(
            np.array([[1.0]]),
            np.array([[-sturm.kappa_of_theta(theta)]])
            if not math.isinf(sturm.kappa_of_theta(theta))
            else np.array([[1.0]]))
        if math.isinf(sturm.kappa_of_theta(theta)):
            rel = rs.LinearRelation.zero_times_full(1)
        return rs.cayley_unitary(rel)

    loop = [unitary(t) for t in THETA]
    assert fi.det_winding(loop, thetas=THETA, refine=unitary) == 1


# -- spectral flow -------------------------------------------------------------

def test_spectral_flow_constant_and_oscillating():
    eigs = [np.array([1.0, 5.0]) for _ in THETA]
    assert fi.spectral_flow((list(THETA), eigs), level=0.0) == 0
    cosine = [np.array([math.cos(t)]) for t in THETA]
    assert fi.spectral_flow((list(THETA), cosine), level=0.0, window=0.6) == 0


def test_spectral_flow_counts_upward_crossing():
    # a single branch sweeping from -1 to 1 once around (sawtooth with the
    # jump far from the level)
    eigs = [np.array([-1.0 + t / math.pi]) for t in THETA]
    flow = fi.spectral_flow((list(THETA), eigs), level=0.0, window=0.4,
                            refine=lambda t: np.array([-1.0 + t / math.pi]))
    assert flow == 1


def test_spectral_flow_refinement_error():
    eigs = [np.array([math.sin(8 * t) * 2.0])
            for t in np.linspace(0, 2 * math.pi, 10, endpoint=False)]
    with pytest.raises(fi.RefinementError):
        fi.spectral_flow((list(np.linspace(0, 2 * math.pi, 10,
                                           endpoint=False)), eigs),
                         level=0.0, window=0.25)


def test_rellich_spectral_flow_and_crossing():
    loop = fi.rellich_eigenvalue_samples(samples=360)
    assert fi.spectral_flow(loop, level=0.0, window=1.0) == 1


# -- relation families ----------------------------------------------------------

def test_relation_family_constant_is_zero(rng):
    h = random_complex(rng, 2, 2)
    h = h + h.conj().T
    rels = [rs.LinearRelation.graph_of(h) for _ in THETA]
    assert fi.relation_family_index((list(THETA), rels)) == 0


def test_transformed_family_matches_plain_robin_part():
    rt = reduced_triplet(sturm.RellichBoundaryProblem())

    def transformed(theta):
        return transform_boundary_condition(
            rt, sturm.robin_relation(sturm.kappa_of_theta(theta)))

    loop = fi.FamilyLoop(list(THETA), [transformed(t) for t in THETA],
                         generator=transformed)
    assert fi.relation_family_index(loop) == 1

    def raw(theta):
        return sturm.robin_relation(sturm.kappa_of_theta(theta))

    raw_loop = fi.FamilyLoop(list(THETA), [raw(t) for t in THETA],
                             generator=raw)
    assert fi.relation_family_index(raw_loop) == 1


def test_conjugation_invariance(rng):
    h = random_complex(rng, 2, 2)
    h = h + h.conj().T

    def conjugator(t):
        evals, evecs = np.linalg.eigh(math.sin(t) * h)
        return evecs @ np.diag(np.exp(1j * evals)) @ evecs.conj().T

    def conjugated(theta):
        rel = sturm.robin_relation(sturm.kappa_of_theta(theta))
        w = conjugator(theta)
        lmap = np.zeros((4, 4), dtype=complex)
        lmap[:2, :2] = w
        lmap[2:, 2:] = w
        return rs.map_relation(lmap, rel)

    loop = fi.FamilyLoop(list(THETA), [conjugated(t) for t in THETA],
                         generator=conjugated)
    assert fi.relation_family_index(loop) == 1


def test_weyl_shift_homotopy(rng):
    shift = random_complex(rng, 2, 2)
    shift = shift + shift.conj().T
    windings = set()
    for tpar in (0.0, 0.5, 1.0):
        def shifted(theta, tp=tpar):
            smap = np.eye(4, dtype=complex)
            smap[2:, :2] = -tp * shift
            return rs.map_relation(
                smap, sturm.robin_relation(sturm.kappa_of_theta(theta)))

        loop = fi.FamilyLoop(list(THETA), [shifted(t) for t in THETA],
                             generator=shifted)
        for rel in loop.payloads:
            assert rs.is_self_adjoint(rel)
        windings.add(fi.relation_family_index(loop))
    assert len(windings) == 1


# -- reports ---------------------------------------------------------------------

def test_verify_index_theorem_default():
    report = fi.verify_index_theorem(samples=240)
    assert report.spectral_flow == 1
    assert report.winding == 1
    assert report.consistent
    assert abs(report.crossing_kappa - 1.0) < 1e-10


def test_constant_dirichlet_report():
    rep = fi.robin_index_report(lambda th: math.inf, samples=16)
    assert rep.spectral_flow == 0 and rep.winding == 0 and rep.consistent


def test_orientation_reversed_report():
    rep = fi.robin_index_report(
        lambda th: sturm.kappa_of_theta((2 * math.pi - th) % (2 * math.pi)),
        samples=360)
    assert rep.spectral_flow == -1 and rep.winding == -1 and rep.consistent


def test_double_speed_report():
    rep = fi.robin_index_report(
        lambda th: sturm.kappa_of_theta((2.0 * th) % (2 * math.pi)),
        samples=720)
    assert rep.spectral_flow == 2 and rep.winding == 2 and rep.consistent


def test_branch_table_continuity():
    thetas = np.linspace(0, 2 * math.pi, 24, endpoint=False)
    kappas = [sturm.kappa_of_theta(t) for t in thetas]
    eigs = [sturm.secular_eigenvalues(k, lambda_max=60.0) for k in kappas]
    rows = fi.branch_table(thetas, kappas, eigs)
    assert rows[0][2] == 0
    # branch ids are stable along the Neumann start
    first_ids = [r[2] for r in rows if r[0] == 0.0]
    second_ids = [r[2] for r in rows if abs(r[0] - thetas[1]) < 1e-12]
    assert first_ids == second_ids


def test_family_loop_validation():
    with pytest.raises(ValueError):
        fi.FamilyLoop([0.0, 0.0], [np.eye(1), np.eye(1)])
    with pytest.raises(ValueError):
        fi.FamilyLoop([0.0], [np.eye(1)])
