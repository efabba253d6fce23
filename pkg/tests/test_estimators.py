import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from curvatura import InvariantsTransformer, PointTypeClassifier
from curvatura.validation import as_maps, check_quadratic_maps, check_tolerance

ELLIPTIC = [2.0, 2.0, 2.0, 0.0, 0.5, -0.5]
PLANE = [0.0] * 6
R5_DIAG = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0]


def test_transformer_elliptic():
    tr = InvariantsTransformer().fit([ELLIPTIC])
    out = tr.transform([ELLIPTIC, PLANE])
    assert out.shape == (2, 4)
    assert out[0, :3].tolist() == [-4.0, 3.0, -5.0]
    assert out[0, 3] == pytest.approx(np.hypot(1.25, 0.75), rel=1e-15)
    assert not out[1].any()
    assert tr.get_feature_names_out().tolist() == ["K", "Delta", "N", "Hnorm"]


def test_transformer_focal_and_codim3():
    tr = InvariantsTransformer(focal=True).fit([R5_DIAG])
    out = tr.fit_transform([R5_DIAG])
    names = tr.get_feature_names_out().tolist()
    assert names == ["K", "Delta", "N", "Hnorm", "Acal", "tau", "focal_0", "focal_1", "focal_2"]
    row = dict(zip(names, out[0]))
    assert (row["K"], row["Delta"], row["Acal"], row["tau"]) == (-1.0, 1.0, -1.0, 1.0)
    assert [row["focal_0"], row["focal_1"], row["focal_2"]] == pytest.approx([-1, -1, 1], abs=1e-14)


def test_classifier():
    clf = PointTypeClassifier().fit([ELLIPTIC, PLANE])
    assert "Elliptic" in clf.classes_ and len(clf.classes_) == 9
    assert clf.predict([ELLIPTIC, PLANE]).tolist() == ["Elliptic", "FlatUmbilic"]
    assert clf.predict_caustic([ELLIPTIC, PLANE]).tolist() == ["Ellipse", "DoubleLineAtInfinity"]
    assert clf.score([ELLIPTIC, PLANE], ["Elliptic", "Hyperbolic"]) == 0.5
    clf3 = PointTypeClassifier().fit([R5_DIAG])
    assert clf3.predict([R5_DIAG]).tolist() == ["PseudoElliptic"]
    assert clf3.predict_caustic([R5_DIAG]).tolist() == ["Cone"]
    clf1 = PointTypeClassifier().fit([[1.0, 0.0, 1.0]])
    assert clf1.predict([[1.0, 0.0, -1.0]]).tolist() == ["Hyperbolic"]
    with pytest.raises(ValueError):
        clf1.predict_caustic([[1.0, 0.0, 1.0]])


def test_params_and_clone():
    clf = PointTypeClassifier(tol=1e-7)
    assert clf.get_params() == {"tol": 1e-7}
    twin = clone(clf)
    assert twin.get_params() == clf.get_params() and twin is not clf
    tr = InvariantsTransformer().set_params(focal=True)
    assert tr.get_params() == {"tol": 1e-9, "focal": True}


def test_pipeline():
    rng = np.random.default_rng(3)
    X = rng.uniform(-2, 2, size=(20, 6))
    pipe = make_pipeline(InvariantsTransformer(), StandardScaler()).fit(X)
    assert pipe.transform(X).shape == (20, 4)


def test_not_fitted():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        PointTypeClassifier().predict([ELLIPTIC])
    with pytest.raises(NotFittedError):
        InvariantsTransformer().transform([ELLIPTIC])


@pytest.mark.parametrize("bad", [
    [[1.0, 2.0]],
    [[np.nan] * 6],
    [[np.inf] * 6],
    [1.0] * 6,
])
def test_bad_input(bad):
    with pytest.raises(ValueError):
        PointTypeClassifier().fit(bad)


def test_codimension_mismatch_and_tolerance():
    clf = PointTypeClassifier().fit([ELLIPTIC])
    with pytest.raises(ValueError, match="codimension 2"):
        clf.predict([R5_DIAG])
    for tol in (0.0, -1.0, np.nan):
        with pytest.raises(ValueError):
            PointTypeClassifier(tol=tol).fit([ELLIPTIC])
    assert check_tolerance(1e-6) == 1e-6


def test_validation_helpers():
    X = check_quadratic_maps([ELLIPTIC])
    assert X.dtype == np.float64 and X.shape == (1, 6)
    lqm = as_maps([ELLIPTIC])[0]
    assert lqm.codim == 2 and lqm.A.tolist() == [2.0, 2.0]
