"""scikit-learn style wrappers over batches of flattened quadratic maps.

Rows are the concatenation A, B, C of a local quadratic map. Nothing is
learned: ``fit`` only validates the input and records its codimension, so the
estimators can sit inside pipelines next to feature extraction from jets.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classify import CAUSTIC_R4, CAUSTIC_R5, PointType, classify_point
from .invariants import LocalQuadraticMap, invariants_of
from .validation import VALID_WIDTHS, check_quadratic_maps, check_tolerance

FEATURES = {
    1: ["K", "Hnorm"],
    2: ["K", "Delta", "N", "Hnorm"],
    3: ["K", "Delta", "N", "Hnorm", "Acal", "tau"],
}
R3_LABELS = [PointType.ELLIPTIC, PointType.HYPERBOLIC, PointType.PARABOLIC, PointType.FLAT_UMBILIC]


class InvariantsTransformer(TransformerMixin, BaseEstimator):
    """Map each row to its scalar invariants.

    Parameters
    ----------
    tol : float, default=1e-9
        Relative tolerance for the sign of N in codimension 3.
    focal : bool, default=False
        Append the principal focal curvatures (ascending).
    """

    def __init__(self, tol: float = 1e-9, focal: bool = False):
        self.tol = tol
        self.focal = focal

    def fit(self, X, y=None):
        X = check_quadratic_maps(X)
        check_tolerance(self.tol)
        self.n_features_in_ = X.shape[1]
        self.codim_ = VALID_WIDTHS[X.shape[1]]
        return self

    def _row(self, row: np.ndarray) -> list[float]:
        lqm = LocalQuadraticMap.from_flat(row)
        inv = invariants_of(lqm, self.tol)
        vals = {"K": inv.K, "Delta": inv.Delta, "N": inv.N, "Hnorm": float(np.linalg.norm(inv.H)),
                "Acal": inv.Acal, "tau": inv.tau}
        out = [vals[k] for k in FEATURES[self.codim_]]
        if self.focal:
            out.extend(float(v) for v in inv.focal)
        return out

    def transform(self, X):
        check_is_fitted(self, "codim_")
        X = check_quadratic_maps(X, self.codim_)
        return np.array([self._row(r) for r in X], dtype=float).reshape(len(X), -1)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "codim_")
        names = list(FEATURES[self.codim_])
        if self.focal:
            names += [f"focal_{i}" for i in range(self.codim_)]
        return np.array(names, dtype=object)


class PointTypeClassifier(BaseEstimator):
    """Label each row with its point type; ``predict_caustic`` gives the caustic type.

    The labels come from the geometry, so ``fit`` ignores ``y``.

    Parameters
    ----------
    tol : float, default=1e-9
        Relative degeneracy tolerance.
    """

    def __init__(self, tol: float = 1e-9):
        self.tol = tol

    def fit(self, X, y=None):
        X = check_quadratic_maps(X)
        check_tolerance(self.tol)
        self.n_features_in_ = X.shape[1]
        self.codim_ = VALID_WIDTHS[X.shape[1]]
        table = {1: R3_LABELS, 2: list(CAUSTIC_R4), 3: list(CAUSTIC_R5)}[self.codim_]
        self.classes_ = np.array(sorted(t.value for t in table), dtype=object)
        return self

    def predict(self, X):
        check_is_fitted(self, "codim_")
        X = check_quadratic_maps(X, self.codim_)
        return np.array([classify_point(LocalQuadraticMap.from_flat(r), self.tol).label.value for r in X], dtype=object)

    def predict_caustic(self, X):
        check_is_fitted(self, "codim_")
        X = check_quadratic_maps(X, self.codim_)
        if self.codim_ == 1:
            raise ValueError("the caustic type is defined for codimension 2 and 3")
        # the classifier's caustic, so labels and caustic types use the same thresholds
        return np.array([classify_point(LocalQuadraticMap.from_flat(r), self.tol).caustic.label.value for r in X],
                        dtype=object)

    def score(self, X, y):
        return float(np.mean(self.predict(X) == np.asarray(y, dtype=object)))
