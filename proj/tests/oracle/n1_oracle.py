#!/usr/bin/env python3
"""Brute-force bad-prime sets for a quadratic field of class number one.

Kept apart from the C++ library on purpose: the field, the generating prime
and alpha are found again from scratch, every norm is a product of explicit
conjugates in Q(sqrt D, sqrt Delta) with Fraction coefficients, and factoring
is left to sympy.

Usage: n1_oracle.py D [--out file.json] [--check file.json]
"""

import argparse
import json
import sys
from fractions import Fraction
from math import gcd, isqrt

from sympy import cyclotomic_poly, factorint, isprime, jacobi_symbol
from sympy.abc import x as X_SYM

ALPHABET = (0, 8, 12, 16, 24)


class Biquad:
    """a + b s + c t + d s t with s^2 = D, t^2 = E."""

    __slots__ = ("v", "D", "E")

    def __init__(self, v, D, E):
        self.v = tuple(Fraction(c) for c in v)
        self.D = D
        self.E = E

    def __add__(self, o):
        return Biquad([p + q for p, q in zip(self.v, o.v)], self.D, self.E)

    def __sub__(self, o):
        return Biquad([p - q for p, q in zip(self.v, o.v)], self.D, self.E)

    def __mul__(self, o):
        a1, b1, c1, d1 = self.v
        a2, b2, c2, d2 = o.v
        D, E = self.D, self.E
        return Biquad(
            [
                a1 * a2 + b1 * b2 * D + c1 * c2 * E + d1 * d2 * D * E,
                a1 * b2 + b1 * a2 + (c1 * d2 + d1 * c2) * E,
                a1 * c2 + c1 * a2 + (b1 * d2 + d1 * b2) * D,
                a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
            ],
            D,
            E,
        )

    def scale(self, k):
        return Biquad([k * c for c in self.v], self.D, self.E)

    def conj(self, sign_s, sign_t):
        a, b, c, d = self.v
        return Biquad([a, sign_s * b, sign_t * c, sign_s * sign_t * d], self.D, self.E)

    def power(self, e):
        r = Biquad([1, 0, 0, 0], self.D, self.E)
        for _ in range(e):
            r = r * self
        return r


def field_norm(z, full):
    """Product of the conjugates; over k(beta) when full, else over k (t unused)."""
    signs = [(1, 1), (-1, 1), (1, -1), (-1, -1)] if full else [(1, 1), (-1, 1)]
    r = Biquad([1, 0, 0, 0], z.D, z.E)
    for s, t in signs:
        r = r * z.conj(s, t)
    a, b, c, d = r.v
    assert b == c == d == 0 and a.denominator == 1, "norm is not a rational integer"
    return int(a)


def splits(D, q):
    if q == 2:
        return D % 8 == 1
    return jacobi_symbol(D % q, q) == 1


def generator(D, h):
    """First split prime q and the least (y, x) with |N(x + y omega)| = q^h."""
    q = 2
    while not (isprime(q) and D % q != 0 and splits(D, q)):
        q += 1
    target = q**h
    b = D % 2  # omega = (b + sqrt D)/2
    for y in range(0, 10**6):
        for x in range(0, 10**6):
            # N(x + y omega) = (x + y b/2)^2 - y^2 D/4
            n = Fraction(2 * x + y * b, 2) ** 2 - Fraction(y * y * D, 4)
            if abs(n) == target:
                return q, (x, y)
            if Fraction(2 * x + y * b, 2) ** 2 > target + abs(Fraction(y * y * D, 4)):
                break
    raise RuntimeError("alpha not found")


def beta_of(a, n, root, D):
    """(-a + root sqrt(a^2 - 4n))/2 as an element of Q(sqrt D, sqrt Delta), and whether it lies in k."""
    delta = a * a - 4 * n
    if delta == 0:
        return Biquad([Fraction(-a, 2), 0, 0, 0], D, 1), True
    ratio = Fraction(delta, D)
    if ratio > 0:
        s_num, s_den = isqrt(ratio.numerator), isqrt(ratio.denominator)
        if s_num * s_num == ratio.numerator and s_den * s_den == ratio.denominator:
            s = Fraction(s_num, s_den)
            return Biquad([Fraction(-a, 2), root * s / 2, 0, 0], D, 1), True
    return Biquad([Fraction(-a, 2), 0, Fraction(root, 2), 0], D, delta), False


def run(D, h=1):
    q, (ax, ay) = generator(D, h)
    b = D % 2
    alpha_vec = [Fraction(2 * ax + ay * b, 2), Fraction(ay, 2), 0, 0]
    n = q  # N(q) for a split prime
    amax = isqrt(4 * n)
    betas = []
    for a in range(-amax, amax + 1):
        for root in ((0,) if a * a == 4 * n else (1, -1)):
            betas.append((a, root))

    full_exp = 24 * h
    values = set()
    zeros = 0
    pieces = set()
    for e0 in ALPHABET:
        for e1 in ALPHABET:
            g = gcd(gcd(e0, e1), full_exp) if (e0 or e1) else full_exp
            for a, root in betas:
                beta, in_k = beta_of(a, n, root if root else 1, D)
                E = beta.E
                alpha = Biquad(alpha_vec, D, E)
                alpha_bar = alpha.conj(-1, 1)
                value = field_norm(alpha.power(e0) * alpha_bar.power(e1) - beta.power(full_exp), not in_k)
                if value == 0:
                    zeros += 1
                    continue
                values.add(abs(value))
                Xg = alpha.power(e0 // g) * alpha_bar.power(e1 // g)
                Yg = beta.power(full_exp // g)
                prod = 1
                for m in range(1, g + 1):
                    if g % m:
                        continue
                    coeffs = [int(c) for c in reversed(cyclotomic_poly(m, X_SYM).as_poly().all_coeffs())]
                    deg = len(coeffs) - 1
                    acc = Biquad([0, 0, 0, 0], D, E)
                    for i, c in enumerate(coeffs):
                        if c:
                            acc = acc + (Xg.power(i) * Yg.power(deg - i)).scale(c)
                    piece = field_norm(acc, not in_k)
                    prod *= piece
                    if abs(piece) > 1:
                        pieces.add(abs(piece))
                assert prod == value, "cyclotomic pieces do not multiply to the norm"

    n0 = set()
    for p in sorted(pieces):
        n0.update(factorint(p).keys())
    ram = sorted({p for p in factorint(abs(D))})
    t = {2, 3, q}
    n1 = sorted(n0 | t | set(ram))
    return {
        "D": D,
        "q": q,
        "alpha_xy": [ax, ay],
        "zeros": zeros,
        "N0": [str(p) for p in sorted(n0)],
        "N1": [str(p) for p in n1],
        "values": [str(v) for v in sorted(values)],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("D", type=int)
    ap.add_argument("--out")
    ap.add_argument("--check", help="compare with a frozen result and exit 1 on mismatch")
    args = ap.parse_args()
    result = run(args.D)
    text = json.dumps(result, indent=1, sort_keys=True) + "\n"
    if args.check:
        with open(args.check) as f:
            frozen = json.load(f)
        if frozen != result:
            for key in result:
                if frozen.get(key) != result[key]:
                    print(f"mismatch in {key}", file=sys.stderr)
            return 1
        print(f"D={args.D}: oracle agrees with {args.check}")
        return 0
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
