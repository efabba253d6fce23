"""Exact reference values derived with sympy, independently of the package.

Run ``python tests/oracles/derive_values.py`` to regenerate ``frozen_values.json``.
Everything here works from polynomial representatives and symbolic
differentiation; nothing is imported from the package.
"""

from __future__ import annotations

import json
from pathlib import Path

import sympy as sp

s, t = sp.symbols("s t", real=True)
R = sp.Rational
OUT = Path(__file__).with_name("frozen_values.json")


def form(a, b, c):
    return (a * s**2 + 2 * b * s * t + c * t**2) / 2


def coeffs(f):
    """(a, b, c) of f = (a s^2 + 2 b s t + c t^2) / 2."""
    p = sp.Poly(sp.expand(f), s, t)
    return [2 * p.coeff_monomial(s**2), p.coeff_monomial(s * t), 2 * p.coeff_monomial(t**2)]


def psi(f, g):
    # polarization of the discriminant: ac - b^2 = det of the Hessian of f
    hf, hg = sp.hessian(f, (s, t)), sp.hessian(g, (s, t))
    return sp.simplify(((hf + hg).det() - hf.det() - hg.det()) / 2)


def bracket(f, g):
    return sp.expand((sp.diff(f, s) * sp.diff(g, t) - sp.diff(f, t) * sp.diff(g, s)) / 2)


def gram(forms):
    return sp.Matrix(len(forms), len(forms), lambda i, j: psi(forms[i], forms[j]))


def num(x):
    return float(sp.N(x, 30))


def vec(v):
    return [num(x) for x in v]


def lqm_facts(forms):
    G = gram(forms)
    ell = len(forms)
    A = sp.Matrix([2 * sp.Poly(f, s, t).coeff_monomial(s**2) for f in forms])
    C = sp.Matrix([2 * sp.Poly(f, s, t).coeff_monomial(t**2) for f in forms])
    B = sp.Matrix([sp.Poly(f, s, t).coeff_monomial(s * t) for f in forms])
    H = (A + C) / 2
    lam = sp.symbols("lam")
    roots = sp.Poly((G - lam * sp.eye(ell)).det(), lam).all_roots()
    out = {"G": [vec(G.row(i)) for i in range(ell)], "K": num(G.trace()), "Delta": num(G.det()),
           "H": vec(H), "focal": sorted(num(r) for r in roots)}
    if ell == 3:
        out["Acal"] = num(sum(G.extract([i, j], [i, j]).det() for i in range(3) for j in range(i + 1, 3)))
        out["tau"] = num(((A - C) / 2).cross(B).dot(H))
    if ell == 2:
        out["N"] = num((A[0] - C[0]) * B[1] - (A[1] - C[1]) * B[0])
    if G.det() != 0:
        Rv = G.LUsolve(H)
        out["R"] = vec(Rv)
        out["RH"] = num(Rv.dot(H))
        Gi = G.inv()
        out["paired"] = {"A": vec(Gi * A), "B": vec(Gi * B), "C": vec(Gi * C)}
    return out


def caustic_poly(forms, q):
    """det d(perp)Gamma of the distance-squared family at q, normalized to 1 at q = 0."""
    hs = [sp.hessian(f, (s, t)) for f in forms]
    M = sp.eye(2) - sum((qi * h for qi, h in zip(q, hs)), sp.zeros(2))
    return sp.expand(M.det())


def main() -> None:
    v: dict = {}
    # sl(2) algebra
    q1, q2 = form(2, 2, R(1, 2)), form(2, 0, -R(1, 2))
    v["psi_elliptic_Q1Q1"] = num(psi(q1, q1))
    v["psi_elliptic_Q1Q2"] = num(psi(q1, q2))
    v["bracket_elliptic"] = [num(x) for x in coeffs(bracket(q1, q2))]
    v["bracket_X_Y"] = [num(x) for x in coeffs(bracket(form(1, 0, -1), form(0, 1, 0)))]
    v["psi_s2_t2"] = num(psi(form(1, 0, 0), form(0, 0, 1)))
    v["bracket_s2_t2"] = [num(x) for x in coeffs(bracket(form(1, 0, 0), form(0, 0, 1)))]

    # elliptic example of R^4
    ell = [q1, q2]
    v["elliptic"] = lqm_facts(ell)
    q = sp.symbols("q1 q2", real=True)
    cp = caustic_poly(ell, q)
    printed = 3 * (q[0] + R(5, 12))**2 + (q[1] + R(3, 4))**2 - R(25, 12)
    v["elliptic"]["caustic_ratio_to_printed"] = num(sp.simplify(cp / sp.expand(printed)))
    rh = v["elliptic"]["RH"]
    lam = sp.symbols("lam")
    # bitangency: points lam R on the caustic
    Rv = sp.Matrix(gram(ell)).LUsolve(sp.Matrix([R(5, 4), R(3, 4)]))
    line = sp.expand(cp.subs({q[0]: lam * Rv[0], q[1]: lam * Rv[1]}))
    v["elliptic"]["bitangency_lambdas"] = sorted(num(r) for r in sp.solve(line, lam))
    v["elliptic"]["rh_exact"] = str(sp.nsimplify(rh))
    v["elliptic"]["dgamma_n10"] = [vec(r) for r in sp.hessian(q1, (s, t)).tolist()]
    v["elliptic"]["dgamma_n01"] = [vec(r) for r in sp.hessian(q2, (s, t)).tolist()]
    theta = sp.pi / 4
    us, ut = sp.cos(theta), sp.sin(theta)
    v["elliptic"]["curvature_pi4"] = [num(2 * f.subs({s: us, t: ut})) for f in ell]
    mus = sp.hessian(q2, (s, t)).eigenvals()
    v["elliptic"]["foci_n01"] = sorted(num(1 / m) for m in mus)

    # hyperbolic example of R^4, as stated and with Q1 = (3 s^2 + t^2) / 2
    printed_c = sp.expand(3 * (q[0] - R(1, 2))**2 + 2 * (q[0] - R(1, 2)) * (q[1] - R(1, 2)) - R(1, 4))
    printed_cs = sp.expand(2 * (q[0] - 2) * (q[1] - R(1, 2)) - 3 * (q[1] - R(1, 2))**2 - R(1, 4))
    for key, a1 in (("hyperbolic", -1), ("hyperbolic_plus", 1)):
        hyp = [form(3, 0, a1), form(R(1, 2), R(1, 2), R(1, 2))]
        facts = lqm_facts(hyp)
        cp = caustic_poly(hyp, q)
        star = [form(*(sp.nsimplify(facts["paired"][k][i]) for k in "ABC")) for i in range(2)]
        cps = caustic_poly(star, q)
        facts["caustic_poly"] = str(cp)
        # a constant ratio means the printed equation describes the same conic
        ratio = sp.simplify(cp / printed_c)
        ratio_star = sp.simplify(cps / printed_cs)
        facts["caustic_matches_printed"] = bool(ratio.is_number)
        facts["paired_caustic_matches_printed"] = bool(ratio_star.is_number)
        v[key] = facts

    # R^5 map with Gram matrix diag(-1, -1, 1)
    diag = [form(1, 0, -1), form(0, 1, 0), form(1, 0, 1)]
    v["r5_diag"] = lqm_facts(diag)
    q3 = sp.symbols("q1 q2 q3", real=True)
    cp = caustic_poly(diag, q3)
    v["r5_diag"]["caustic_poly"] = str(cp)
    Gs = sp.Matrix(v["r5_diag"]["G"]).applyfunc(sp.nsimplify).inv()
    Rd = sp.Matrix(v["r5_diag"]["R"]).applyfunc(sp.nsimplify)
    v["r5_diag"]["two_Gstar_R"] = num((Rd.T * Gs * Rd)[0])

    # unit sphere graph: second fundamental form at the pole
    f = sp.sqrt(1 - s**2 - t**2)
    hess = sp.hessian(f, (s, t)).subs({s: 0, t: 0})
    v["sphere"] = {"A": [num(hess[0, 0])], "B": [num(hess[0, 1])], "C": [num(hess[1, 1])]}

    # second-order jet of (s, t, sin(s)) at the origin
    g = sp.Matrix([s, t, sp.sin(s)])
    v["sin_jet"] = {"d_s": vec(g.diff(s).subs({s: 0, t: 0})), "d_ss": vec(g.diff(s, 2).subs({s: 0, t: 0}))}

    # inflection example Q1 = (1,0,-1), Q2 = (2,0,-2)
    infl = [form(1, 0, -1), form(2, 0, -2)]
    v["inflection"] = lqm_facts(infl)

    OUT.write_text(json.dumps(v, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
