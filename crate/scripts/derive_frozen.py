"""Exact reference values for the frozen oracle tests in crates/core/tests.

Every instance uses dyadic/decimal rationals, so sympy gives exact secular
weights (as residues of det(I + J U^T (Lambda - x)^{-1} U)) and eigenvalues
to 25 digits. Run: python3 scripts/derive_frozen.py
"""
import sympy as sp

x = sp.symbols("x")


def instance(lam, q, k, signs):
    lam = [sp.Rational(v) for v in lam]
    q = sp.Matrix(q).applyfunc(sp.Rational)
    k = sp.Matrix(k).applyfunc(sp.Rational)
    j = sp.diag(*signs)
    a = q * sp.diag(*lam) * q.T
    return lam, q, k, j, a


def report(name, lam, q, k, j, a):
    n = len(lam)
    u = q.T * k
    m = sp.eye(k.shape[1]) + j * u.T * sp.diag(*[1 / (l - x) for l in lam]) * u
    f = sp.together(m.det())
    alphas = []
    for l in lam:
        r = sp.limit((x - l) * f, x, l)
        alphas.append(-r)
    new = a + k * j * k.T
    ev = sorted(sp.Poly(new.charpoly(x).as_expr(), x).nroots(n=25, maxsteps=200), key=lambda v: sp.re(v))
    print(f"--- {name}")
    print("alpha =", [sp.N(v, 20) for v in alphas])
    print("eig   =", [sp.N(sp.re(v), 20) for v in ev])


if __name__ == "__main__":
    lam = ["-2", "-1", "0", "1/2", "3/2", "3"]
    eye6 = sp.eye(6)
    k6 = [
        ["1/2", "0", "1/4"],
        ["1/4", "1/2", "0"],
        ["0", "1/4", "1/2"],
        ["1/2", "-1/4", "0"],
        ["-1/4", "0", "1/2"],
        ["1/4", "1/2", "-1/4"],
    ]
    report("F1 rank3 +-+", *instance(lam, eye6, k6, [1, -1, 1]))

    h = sp.eye(4) - sp.Rational(1, 2) * sp.ones(4, 4)
    lam4 = ["-1", "0", "1", "2"]
    k4 = [["1", "1/2"], ["1/2", "-1"], ["1/4", "1/2"], ["-1/2", "1/4"]]
    for name, s in [("F2 ++", [1, 1]), ("F2 --", [-1, -1]), ("F2 +-", [1, -1])]:
        report(name, *instance(lam4, h, k4, s))
