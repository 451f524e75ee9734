#!/usr/bin/env python3
"""Symbolic expansion of the surface diffusion operator over a cylinder.

Expands G(h) for the graph X(x, t) = (x, (r+h) cos t, (r+h) sin t) in terms of
the 4-jet of h and splits it as

    G = -sum_{|eta|=4} b_eta d^eta h + F1(h, dh) + F2(h, dh, d2h, d3h).

The principal coefficients b_eta are checked against the closed form
(1/G^2) (a11 dx^2 + 2 a12 dx dt + a22 dt^2)^2 and F1, F2 are emitted as C++
for core/src/split_kernel_2d.inc.

Usage: python3 tools/derive_split.py > core/src/split_kernel_2d.inc
"""
import sys

import sympy as sp

x, t = sp.symbols("x t", real=True)
r = sp.Symbol("r", positive=True)
h = sp.Function("h")(x, t)

rho = r + h
hx, ht = h.diff(x), h.diff(t)
detg = rho**2 * (1 + hx**2) + ht**2
sqg = sp.sqrt(detg)
a11 = rho**2 + ht**2
a12 = -hx * ht
a22 = 1 + hx**2

numer = (-a11 * rho * h.diff(x, 2)
         + 2 * hx * ht * (rho * h.diff(x, t) - hx * ht)
         + a22 * (rho**2 + 2 * ht**2 - rho * h.diff(t, 2)))
mean_curv = numer / detg**sp.Rational(3, 2)

Hx, Ht = mean_curv.diff(x), mean_curv.diff(t)
G = (sp.diff((a11 * Hx + a12 * Ht) / sqg, x)
     + sp.diff((a12 * Hx + a22 * Ht) / sqg, t)) / rho

# Jet symbols, named by multi-index (order in x, order in theta).
names = {}
for total in range(5):
    for ox in range(total, -1, -1):
        ot = total - ox
        names[(ox, ot)] = sp.Symbol("h" + "x" * ox + "t" * ot if total else "h0")


def to_jet(expr):
    for total in range(4, 0, -1):
        for (ox, ot), sym in names.items():
            if ox + ot != total:
                continue
            d = h
            if ox:
                d = d.diff(x, ox)
            if ot:
                d = d.diff(t, ot)
            expr = expr.subs(d, sym)
    return expr.subs(h, names[(0, 0)])


Gj = to_jet(G)
J = {k: v for k, v in names.items()}
rho_j = r + J[(0, 0)]
px, pt = J[(1, 0)], J[(0, 1)]
detg_j = rho_j**2 * (1 + px**2) + pt**2
c11, c12, c22 = rho_j**2 + pt**2, -px * pt, 1 + px**2
closed_b = {
    (4, 0): c11**2,
    (3, 1): 4 * c11 * c12,
    (2, 2): 2 * c11 * c22 + 4 * c12**2,
    (1, 3): 4 * c12 * c22,
    (0, 4): c22**2,
}
principal = 0
for eta, coeff in closed_b.items():
    b = -sp.diff(Gj, J[eta])
    diff = sp.simplify(b - coeff / detg_j**2)
    if diff != 0:
        sys.exit(f"principal coefficient mismatch at {eta}: {diff}")
    principal += coeff / detg_j**2 * J[eta]

high = {J[k]: 0 for k in J if sum(k) >= 2}
F1 = Gj.subs(high)
fourth = {J[k]: 0 for k in J if sum(k) == 4}
F2 = (Gj + principal).subs(fourth) - F1

# F2 must not depend on fourth derivatives and must be affine in the third.
Gcheck = sp.expand(sp.simplify((Gj + principal) - (Gj + principal).subs(fourth)))
if Gcheck != 0:
    sys.exit("fourth derivatives survive in F2")

replacements, (f1_out, f2_out) = sp.cse([F1, F2], optimizations="basic")

print("// Generated by tools/derive_split.py. Do not edit by hand.")
print("// Expects r and a jet j in scope; assigns f1 and f2.")
used = set().union(F1.free_symbols, F2.free_symbols)
for sym in names.values():
    if sym in used:
        print(f"const double {sym.name} = j.{sym.name};")
for lhs, rhs in replacements:
    print(f"const double {lhs} = {sp.cxxcode(rhs, standard='c++17')};")
print(f"f1 = {sp.cxxcode(f1_out, standard='c++17')};")
print(f"f2 = {sp.cxxcode(f2_out, standard='c++17')};")
