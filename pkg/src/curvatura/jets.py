"""Second-order jets of parametrized surfaces and the local quadratic map.

Derivatives are propagated through the expression tree as truncated bivariate
Taylor data (value, two first partials, three second partials), so jets of
polynomial surfaces are exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import eigh_sym
from .errors import DomainError, ImmersionError
from .expr import BinOp, Call, Expr, Neg, Num, Pow, Var, parse_expr, to_source
from .invariants import LocalQuadraticMap


@dataclass(frozen=True)
class Taylor2:
    v: float
    s: float = 0.0
    t: float = 0.0
    ss: float = 0.0
    st: float = 0.0
    tt: float = 0.0

    def __add__(self, o: Taylor2) -> Taylor2:
        return Taylor2(self.v + o.v, self.s + o.s, self.t + o.t,
                       self.ss + o.ss, self.st + o.st, self.tt + o.tt)

    def __sub__(self, o: Taylor2) -> Taylor2:
        return Taylor2(self.v - o.v, self.s - o.s, self.t - o.t,
                       self.ss - o.ss, self.st - o.st, self.tt - o.tt)

    def __neg__(self) -> Taylor2:
        return Taylor2(-self.v, -self.s, -self.t, -self.ss, -self.st, -self.tt)

    def __mul__(self, o: Taylor2) -> Taylor2:
        return Taylor2(
            self.v * o.v,
            self.s * o.v + self.v * o.s,
            self.t * o.v + self.v * o.t,
            self.ss * o.v + 2.0 * self.s * o.s + self.v * o.ss,
            self.st * o.v + self.s * o.t + self.t * o.s + self.v * o.st,
            self.tt * o.v + 2.0 * self.t * o.t + self.v * o.tt,
        )

    def chain(self, f0: float, f1: float, f2: float) -> Taylor2:
        """Compose with a univariate function given its value and first two derivatives."""
        return Taylor2(
            f0,
            f1 * self.s,
            f1 * self.t,
            f2 * self.s * self.s + f1 * self.ss,
            f2 * self.s * self.t + f1 * self.st,
            f2 * self.t * self.t + f1 * self.tt,
        )


def _reciprocal(x: Taylor2, node: Expr) -> Taylor2:
    if x.v == 0.0:
        raise DomainError("division by zero", to_source(node))
    r = 1.0 / x.v
    return x.chain(r, -r * r, 2.0 * r * r * r)


def _power(x: Taylor2, n: int, node: Expr) -> Taylor2:
    if n < 0:
        return _reciprocal(_power(x, -n, node), node)
    out = Taylor2(1.0)
    base = x
    while n:
        if n & 1:
            out = out * base
        n >>= 1
        if n:
            base = base * base
    return out


def taylor_eval(e: Expr, s0: float, t0: float) -> Taylor2:
    if isinstance(e, Num):
        return Taylor2(e.value)
    if isinstance(e, Var):
        return Taylor2(s0, 1.0, 0.0) if e.name == "s" else Taylor2(t0, 0.0, 1.0)
    if isinstance(e, Neg):
        return -taylor_eval(e.operand, s0, t0)
    if isinstance(e, BinOp):
        x = taylor_eval(e.left, s0, t0)
        y = taylor_eval(e.right, s0, t0)
        if e.op == "+":
            return x + y
        if e.op == "-":
            return x - y
        if e.op == "*":
            return x * y
        return x * _reciprocal(y, e)
    if isinstance(e, Pow):
        return _power(taylor_eval(e.base, s0, t0), e.exponent, e)
    if isinstance(e, Call):
        x = taylor_eval(e.arg, s0, t0)
        v = x.v
        if e.func == "sin":
            return x.chain(math.sin(v), math.cos(v), -math.sin(v))
        if e.func == "cos":
            return x.chain(math.cos(v), -math.sin(v), -math.cos(v))
        if e.func == "exp":
            ev = math.exp(v)
            return x.chain(ev, ev, ev)
        if e.func == "sqrt":
            # derivatives blow up at 0, so the jet needs a strictly positive argument
            if v <= 0.0:
                raise DomainError("sqrt needs a positive argument for its jet", to_source(e))
            r = math.sqrt(v)
            return x.chain(r, 0.5 / r, -0.25 / (r * v))
        if e.func == "ln":
            if v <= 0.0:
                raise DomainError("ln of a non-positive number", to_source(e))
            return x.chain(math.log(v), 1.0 / v, -1.0 / (v * v))
    raise TypeError(f"not an expression node: {e!r}")


@dataclass(frozen=True)
class SurfaceSpec:
    name: str
    ambient_dim: int
    components: tuple[Expr, ...]

    def __post_init__(self):
        if self.ambient_dim not in (3, 4, 5):
            raise ValueError(f"ambient dimension must be 3, 4 or 5, got {self.ambient_dim}")
        if len(self.components) != self.ambient_dim:
            raise ValueError(
                f"expected {self.ambient_dim} components, got {len(self.components)}"
            )

    @classmethod
    def from_strings(cls, components: list[str], name: str = "surface") -> SurfaceSpec:
        return cls(name, len(components), tuple(parse_expr(c) for c in components))

    @property
    def codim(self) -> int:
        return self.ambient_dim - 2


@dataclass(frozen=True)
class Jet2:
    value: np.ndarray
    d_s: np.ndarray
    d_t: np.ndarray
    d_ss: np.ndarray
    d_st: np.ndarray
    d_tt: np.ndarray


def eval_jet2(spec: SurfaceSpec, s0: float, t0: float) -> Jet2:
    parts = [taylor_eval(c, s0, t0) for c in spec.components]

    def col(attr: str) -> np.ndarray:
        return np.array([getattr(p, attr) for p in parts], dtype=float)

    return Jet2(col("v"), col("s"), col("t"), col("ss"), col("st"), col("tt"))


@dataclass(frozen=True)
class AdaptedFrame:
    base_point: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    normals: np.ndarray  # shape (codim, n), one normal per row

    def matrix(self) -> np.ndarray:
        """Columns e1, e2, n_1, ..., n_l."""
        return np.column_stack([self.e1, self.e2, *self.normals])


IMMERSION_TOL = 1e-12
PIVOT_TOL = 1e-8


def adapted_frame(jet: Jet2) -> AdaptedFrame:
    gs, gt = jet.d_s, jet.d_t
    ns, nt = float(gs @ gs), float(gt @ gt)
    gram_det = ns * nt - float(gs @ gt) ** 2
    if ns == 0.0 or nt == 0.0 or gram_det <= IMMERSION_TOL * ns * nt:
        raise ImmersionError("tangent vectors are linearly dependent (not an immersion)")
    e1 = gs / math.sqrt(ns)
    w = gt - (gt @ e1) * e1
    e2 = w / np.linalg.norm(w)
    basis = [e1, e2]
    n = len(gs)
    for k in range(n):
        if len(basis) == n:
            break
        cand = np.zeros(n)
        cand[k] = 1.0
        for b in basis:
            cand = cand - (cand @ b) * b
        norm = np.linalg.norm(cand)
        if norm < PIVOT_TOL:
            continue
        # second pass keeps the completion orthonormal to rounding
        cand = cand / norm
        for b in basis:
            cand = cand - (cand @ b) * b
        basis.append(cand / np.linalg.norm(cand))
    if np.linalg.det(np.column_stack(basis)) < 0:
        basis[-1] = -basis[-1]
    return AdaptedFrame(jet.value, e1, e2, np.array(basis[2:]))


def metric_normalizer(jet: Jet2) -> np.ndarray:
    """Symmetric inverse square root of the first fundamental form."""
    g = np.array([[jet.d_s @ jet.d_s, jet.d_s @ jet.d_t],
                  [jet.d_t @ jet.d_s, jet.d_t @ jet.d_t]])
    vals, vecs = eigh_sym(g)
    if vals[0] <= 0.0:
        raise ImmersionError("first fundamental form is not positive definite")
    return vecs @ np.diag(1.0 / np.sqrt(vals)) @ vecs.T


def local_quadratic_map_from_jet(jet: Jet2, frame: AdaptedFrame | None = None) -> LocalQuadraticMap:
    frame = frame or adapted_frame(jet)
    L = metric_normalizer(jet)
    second = np.array([[jet.d_ss, jet.d_st], [jet.d_st, jet.d_tt]])  # (2, 2, n)
    reparam = np.einsum("ki,lj,kln->ijn", L, L, second)
    nrm = frame.normals
    return LocalQuadraticMap(nrm @ reparam[0, 0], nrm @ reparam[0, 1], nrm @ reparam[1, 1])


def local_quadratic_map_at(spec: SurfaceSpec, s0: float, t0: float) -> LocalQuadraticMap:
    return local_quadratic_map_from_jet(eval_jet2(spec, s0, t0))
