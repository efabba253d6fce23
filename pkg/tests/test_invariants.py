import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from curvatura.eigen import eig2, eigh_sym, jacobi3
from curvatura.invariants import (
    LocalQuadraticMap,
    dgamma_perp,
    gauss_form,
    indicatrix,
    invariants_of,
    normal_section_curvature,
    psi_summary,
)
from curvatura.sl2 import psi_inner

from strategies import maps

def test_map_representation():
    lqm = LocalQuadraticMap([1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
    assert lqm.codim == 2
    assert lqm.component(1).coeffs() == (2.0, 4.0, 6.0)
    assert np.array_equal(LocalQuadraticMap.from_flat(lqm.flat()).flat(), lqm.flat())
    s, t = 0.7, -1.3
    assert lqm(s, t)[1] == pytest.approx(lqm.component(1)(s, t), rel=1e-15)
    with pytest.raises(ValueError):
        LocalQuadraticMap([1.0] * 4, [0.0] * 4, [0.0] * 4)
    with pytest.raises(ValueError):
        LocalQuadraticMap([1.0], [0.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        LocalQuadraticMap.from_flat([1.0, 2.0])


def test_gauss_form_examples(elliptic, r5_diag, zero_map, frozen):
    gf = gauss_form(elliptic)
    assert gf.matrix.tolist() == frozen["elliptic"]["G"]
    assert gf.eigenvalues.tolist() == frozen["elliptic"]["focal"]
    z = gauss_form(zero_map(3))
    assert not z.matrix.any() and not z.eigenvalues.any()
    assert gauss_form(r5_diag).matrix.tolist() == frozen["r5_diag"]["G"]


def test_invariants_examples(elliptic, r5_diag, zero_map, frozen):
    inv = invariants_of(elliptic)
    e = frozen["elliptic"]
    assert (inv.K, inv.Delta, inv.N) == (e["K"], e["Delta"], e["N"])
    assert inv.H.tolist() == e["H"]
    assert inv.focal.tolist() == e["focal"]

    for n in (1, 2, 3):
        z = invariants_of(zero_map(n))
        assert z.K == z.Delta == z.N == 0.0 and not z.H.any()

    inv = invariants_of(r5_diag)
    r = frozen["r5_diag"]
    assert (inv.K, inv.Delta, inv.Acal, inv.tau) == (r["K"], r["Delta"], r["Acal"], r["tau"])
    assert inv.H.tolist() == r["H"]
    assert inv.focal == pytest.approx(sorted(np.diag(r["G"])), abs=1e-13)
    assert inv.N > 0 and not inv.n_sign_indeterminate


def test_n_sign_indeterminate_when_tau_vanishes():
    flat = LocalQuadraticMap([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0])
    inv = invariants_of(flat)
    assert inv.tau == 0.0
    assert inv.n_sign_indeterminate
    assert inv.N == 2.0


def test_indicatrix_examples(elliptic, zero_map):
    ell = indicatrix(elliptic)
    assert ell.center.tolist() == [1.25, 0.75]
    assert ell.u_axis.tolist() == [0.75, 1.25]
    assert ell.v_axis.tolist() == [2.0, 0.0]
    z = indicatrix(zero_map(2))
    assert not (z.center.any() or z.u_axis.any() or z.v_axis.any())
    umb = indicatrix(LocalQuadraticMap([1.0, 0.0], [0.0, 0.0], [1.0, 0.0]))
    assert umb.center.tolist() == [1.0, 0.0]
    assert not (umb.u_axis.any() or umb.v_axis.any())


def test_dgamma_perp_examples(elliptic, r5_diag, zero_map, frozen):
    d = dgamma_perp(elliptic, [1.0, 0.0])
    assert d.tolist() == frozen["elliptic"]["dgamma_n10"]
    assert np.linalg.det(d) == pytest.approx(psi_inner(elliptic.component(0), elliptic.component(0)))
    assert dgamma_perp(elliptic, [0.0, 1.0]).tolist() == frozen["elliptic"]["dgamma_n01"]
    assert not dgamma_perp(zero_map(2), [0.6, 0.8]).any()
    d = dgamma_perp(r5_diag, [0.0, 0.0, 1.0])
    assert d.tolist() == [[1.0, 0.0], [0.0, 1.0]]
    with pytest.raises(ValueError):
        dgamma_perp(elliptic, [1.0, 1.0])


def test_normal_section_curvature_examples(elliptic, frozen):
    assert normal_section_curvature(elliptic, 0.0).tolist() == elliptic.A.tolist()
    assert normal_section_curvature(elliptic, math.pi / 2) == pytest.approx(elliptic.C, abs=1e-15)
    assert normal_section_curvature(elliptic, math.pi / 4) == pytest.approx(frozen["elliptic"]["curvature_pi4"])


@given(maps(), st.floats(0, 2 * math.pi))
def test_indicatrix_is_twice_the_map_on_the_circle(lqm, theta):
    ell = indicatrix(lqm)
    u = (math.cos(theta), math.sin(theta))
    e = ell(theta)
    assert np.abs(e - 2.0 * lqm(*u)).max() <= 1e-12
    assert np.abs(e - normal_section_curvature(lqm, theta)).max() <= 1e-12
    assert np.abs(ell(theta + math.pi) - e).max() <= 1e-12


@given(maps())
def test_gram_entries_and_eigenpairs(lqm):
    gf = gauss_form(lqm)
    qs = lqm.components()
    for i, p in enumerate(qs):
        for j, q in enumerate(qs):
            assert gf.matrix[i, j] == pytest.approx(psi_inner(p, q), abs=1e-14)
    scale = max(1.0, np.abs(gf.matrix).max())
    v = gf.eigenvectors
    assert np.abs(gf.matrix @ v - v * gf.eigenvalues).max() <= 1e-10 * scale
    assert np.abs(v.T @ v - np.eye(lqm.codim)).max() <= 1e-10
    assert np.all(np.diff(gf.eigenvalues) >= 0)


@given(maps())
def test_characteristic_polynomial(lqm):
    inv = invariants_of(lqm)
    scale = max(1.0, np.abs(gauss_form(lqm).matrix).max()) ** lqm.codim
    assert inv.K == pytest.approx(float(np.sum(inv.focal)), abs=1e-10 * scale)
    assert inv.Delta == pytest.approx(float(np.prod(inv.focal)), abs=1e-9 * scale)
    for lam in inv.focal:
        if lqm.codim == 2:
            p = lam * lam - inv.K * lam + inv.Delta
        elif lqm.codim == 3:
            p = -lam ** 3 + inv.K * lam * lam - inv.Acal * lam + inv.Delta
        else:
            p = inv.K - lam
        assert abs(p) <= 1e-8 * scale


@given(maps(), st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_directional_curvature(lqm, raw):
    v = np.array(raw[: lqm.codim])
    assume(np.linalg.norm(v) > 1e-3)
    n = v / np.linalg.norm(v)
    gf = gauss_form(lqm)
    assert np.linalg.det(dgamma_perp(lqm, n)) == pytest.approx(2.0 * gf(n), abs=1e-10 * max(1.0, lqm.scale() ** 2))


@given(maps(codims=(2, 3)))
def test_sign_structure(lqm):
    inv = invariants_of(lqm)
    scale = max(1.0, lqm.scale() ** 2)
    assume(abs(inv.Delta) > 1e-6 * scale ** lqm.codim)
    focal = inv.focal
    # eigenvalues this close to zero cannot carry a sign
    assume(np.abs(focal).min() > 1e-8 * scale)
    if lqm.codim == 2:
        assert focal.min() < 0
    else:
        assert (focal < 0).sum() == 2 and (focal > 0).sum() == 1


@given(maps())
def test_parallelogram_formulas(lqm):
    inv = invariants_of(lqm)
    ps = psi_summary(lqm)
    scale = max(1.0, lqm.scale()) ** (2 * lqm.codim)
    assert ps.K == pytest.approx(inv.K, abs=1e-12 * scale)
    assert ps.Delta == pytest.approx(inv.Delta, abs=1e-10 * scale)
    assert np.allclose(ps.H, inv.H, atol=1e-14)
    if lqm.codim == 2:
        assert ps.N == pytest.approx(inv.N, abs=1e-12 * scale)
    if lqm.codim == 3:
        assert ps.Acal == pytest.approx(inv.Acal, abs=1e-10 * scale)
        assert ps.tau == pytest.approx(inv.tau, abs=1e-12 * scale)
        assert inv.tau ** 2 == pytest.approx(inv.Delta, abs=1e-9 * scale)


@pytest.mark.parametrize("m", [
    np.array([[2.0, 1.0], [1.0, 2.0]]),
    np.array([[4.0, 1.0, 0.0], [1.0, 4.0, 0.0], [0.0, 0.0, 4.0]]),
    np.diag([3.0, 3.0, 3.0]),
])
def test_eigen_examples(m):
    vals, vecs = eigh_sym(m)
    assert vals == pytest.approx(np.linalg.eigvalsh(m), abs=1e-13)
    assert np.allclose(m @ vecs, vecs * vals, atol=1e-13)
    # largest-magnitude entry of each eigenvector is positive
    for k in range(vecs.shape[1]):
        assert vecs[np.argmax(np.abs(vecs[:, k])), k] > 0


def test_eig2_closed_form():
    vals, _ = eig2(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert vals.tolist() == [1.0, 3.0]


@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
def test_jacobi_matches_reference(raw):
    a, b, c, d, e, f = raw
    m = np.array([[a, b, c], [b, d, e], [c, e, f]])
    vals, vecs = jacobi3(m)
    scale = max(1.0, np.abs(m).max())
    assert np.abs(vals - np.linalg.eigvalsh(m)).max() <= 1e-12 * scale
    assert np.abs(vecs.T @ vecs - np.eye(3)).max() <= 1e-12
