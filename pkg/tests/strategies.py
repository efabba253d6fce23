import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from curvatura.invariants import LocalQuadraticMap, gauss_form

# exact zeros exercise the degenerate strata; nonzero entries stay well above underflow
coef = st.one_of(st.just(0.0), st.floats(1e-4, 2.0), st.floats(-2.0, -1e-4))


@st.composite
def maps(draw, codims=(1, 2, 3), min_cond=0.0):
    """Random local quadratic maps; min_cond > 0 keeps the Gauss form well conditioned."""
    n = draw(st.sampled_from(codims))
    vals = draw(st.lists(coef, min_size=3 * n, max_size=3 * n))
    lqm = LocalQuadraticMap.from_flat(vals)
    if min_cond > 0:
        mags = np.abs(gauss_form(lqm).eigenvalues)
        assume(mags.min() > min_cond * max(mags.max(), lqm.scale() ** 2))
    return lqm


@st.composite
def unit_vectors(draw, n):
    raw = np.array(draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n)))
    assume(np.linalg.norm(raw) > 1e-2)
    return raw / np.linalg.norm(raw)
