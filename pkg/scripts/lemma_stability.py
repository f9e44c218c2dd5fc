"""Accuracy of the three phi_k routes as lam = r^2 / 2r' grows.

For each lam the closed form, the forward recurrence and direct quadrature
are compared against each other; the closed form's own error estimate is
shown next to its observed error. This is the evidence behind the lam
switch used by phi_sequence.

    python3 scripts/lemma_stability.py --r-prime 1 --kmax 8
"""

import argparse
import math

from mrl import expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r-prime", type=float, default=1.0)
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--lams", default="0.5,2,8,15,30,50,100,200")
    args = ap.parse_args()

    rp = args.r_prime
    print(f"r'={rp:g}, k<={args.kmax}; worst relative error over k against quadrature")
    print(f"{'lam':>8} {'r':>10} {'lemma obs':>11} {'lemma est':>11} {'recurrence':>11} {'rec->quad':>9}")
    for lam in (float(v) for v in args.lams.split(",")):
        r = math.sqrt(2.0 * rp * lam)
        quad = [expansion.phi_quadrature(r, rp, k).value for k in range(args.kmax + 1)]
        lemma_obs = lemma_est = 0.0
        for k in range(args.kmax + 1):
            v, e = expansion.lemma_integral(r, 0.5 * rp, k)
            lemma_obs = max(lemma_obs, abs(v - quad[k]) / quad[k])
            lemma_est = max(lemma_est, e / quad[k])
        rec = expansion.phi_recurrence(r, rp, args.kmax)
        rec_err = max(abs(v - q) / q for v, q in zip(rec.phi, quad))
        fallbacks = rec.method.count(expansion.QUADRATURE)
        print(f"{lam:8g} {r:10.4g} {lemma_obs:11.2e} {lemma_est:11.2e} {rec_err:11.2e} {fallbacks:9d}")


if __name__ == "__main__":
    main()
