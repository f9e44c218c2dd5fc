"""Truncation error of the Gaussian expansion for the Chen model.

Prints relative deviation from the quadrature oracle for each order n and
the scaled error |m - m_n| * r^(1 + eps*n), which should stay bounded as t
grows if the error is o(r^(-1 - eps*n)).

    python3 scripts/chen_convergence.py --lam 1 --beta 0.5 --t 4,6,8,10 --orders 2-8
"""

import argparse

from mrl import core, expansion
from mrl.models import make_model


def parse_orders(text):
    if "-" in text:
        lo, hi = text.split("-")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=0.5)
    ap.add_argument("--t", default="4,6,8,10")
    ap.add_argument("--orders", default="2-8")
    ap.add_argument("--eps", type=float, default=2.0 / 3.0)
    args = ap.parse_args()

    model = make_model("chen", **{"lambda": args.lam, "beta": args.beta})
    grid = [float(v) for v in args.t.split(",")]
    orders = parse_orders(args.orders)

    print(f"model {model.spec.render()}, eps={args.eps:.4g}")
    print(f"{'t':>6} {'r(t)':>10} {'n':>3} {'m_n':>22} {'rel dev':>11} {'scaled err':>11}")
    for t in grid:
        ref = core.mrl_quadrature(model, t, rel_tol=1e-12).value
        r = model.hazard(t)
        print(f"{t:6g} {r:10.4g} {'-':>3} {ref:22.16g} {'oracle':>11}")
        for n in orders:
            value = expansion.mrl_expansion(model, t, n)
            dev = abs(value - ref)
            print(f"{'':6} {'':10} {n:3d} {value:22.16g} {dev / ref:11.3e} {dev * r ** (1 + args.eps * n):11.3e}")


if __name__ == "__main__":
    main()
