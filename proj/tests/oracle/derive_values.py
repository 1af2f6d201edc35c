#!/usr/bin/env python3
"""Independent oracle values frozen into the C++ unit tests.

Pure Python (integers + cmath); shares no code with the library.
"""
import cmath
import itertools
import math
from fractions import Fraction
from math import gcd


def e(x):
    return cmath.exp(2j * math.pi * x)


def kloosterman(q, N, a, b, c):
    s = 0
    for n in range(c + 1, c + N + 1):
        if gcd(n, q) != 1:
            continue
        s += e(Fraction((a * pow(n, -1, q) + b * n) % q, q))
    return s


def w_direct(q, qe, a, b, c, n, h):
    s = 0
    for x in range(1, h + 1):
        for y in range(1, h + 1):
            u = n + c + qe * x * y
            s += e(Fraction((a * pow(u, -1, q) + b * qe * x * y) % q, q))
    return s


def j_brute(k, m, P, lam):
    cnt = 0
    for t in itertools.product(range(1, P + 1), repeat=2 * k):
        if all(sum(x ** j for x in t[:k]) - sum(x ** j for x in t[k:]) == lam[j - 1]
               for j in range(1, m + 1)):
            cnt += 1
    return cnt


print("S_9(8;1,0,0) =", kloosterman(9, 8, 1, 0, 0))
print("S_4(2;1,1,0) =", kloosterman(4, 2, 1, 1, 0))
print("mod_inverse(28,81) =", pow(28, -1, 81), " (25)^-1 mod 64 =", pow(25, -1, 64))
v = pow(28, -1, 81)
print("a_1 at q=81,qe=27,a=1,b=0,u=28:", (27 * (0 - v * v)) % 81)

# W identity example: q=3^4, eps=1/2 -> q_eps=27, m=4, a=1,b=0,c=0,n=1,h=3
W = w_direct(81, 27, 1, 0, 0, 1, 3)
print("w_direct(q=81,n=1,h=3) =", repr(W.real), repr(W.imag))

# J counts
for (k, m, P, lam) in [(2, 2, 2, (0, 0)), (2, 2, 3, (0, 0)), (2, 1, 2, (0,)),
                       (2, 2, 3, (1, 3)), (2, 2, 3, (-1, -3)), (3, 2, 3, (0, 0)),
                       (3, 3, 3, (0, 0, 0)), (2, 3, 4, (0, 0, 0)), (3, 2, 3, (2, 8))]:
    print("J", k, m, P, lam, "=", j_brute(k, m, P, lam))

# theorem 2 constants at delta = 1/20
d = 1 / 20
g1 = 1200 * d ** -2 * math.log(1 / d) ** (2 / 3)
g = 201 ** -4 * d ** 6 * math.log(1 / d) ** 2
print("thm2 gamma1 =", repr(g1), " gamma =", repr(g))
print("kappa(1/20) =", math.floor(4 * math.log(20)) + 14)

# holder constant via the factored form with k = 10 m^2
for m in (28,):
    k = 10 * m * m
    direct = math.exp((12 * k * math.log(k) + 4 * k * (m + 1) * math.log(2 * m) + 2 * m * math.log(2 * k)) / (4 * k * k))
    factored = (10 * m * m) ** (3 / (10 * m * m)) * (20 * m * m) ** (1 / (200 * m ** 3)) * (2 * m) ** ((m + 1) / (10 * m * m))
    literal = (10 * m * m) ** (1 / (30 * m * m)) * (20 * m * m) ** (1 / (200 * m ** 3)) * (2 * m) ** ((m + 1) / (10 * m * m))
    print("holder m=28 direct", repr(direct), "factored(3/(10m^2))", repr(factored), "paper literal", repr(literal))

# Lemma 3 example
print("lemma3 rhs =", repr(6 * 2 * (100 + 3 * math.log(3))))

# amplified bound example q=3^6, N=27, a=1,b=0,c=0, eps=1/2, h=3
q, N = 3 ** 6, 27
alpha = 6
beta = math.floor(Fraction(1, 2) * alpha)
qe = 3 * 3 ** beta
S = kloosterman(q, N, 1, 0, 0)
h = 3
tot = sum(abs(w_direct(q, qe, 1, 0, 0, n, h)) for n in range(1, N + 1) if gcd(n, q) == 1)
print("amplify q=729 qe=%d |S|=%r rhs=%r" % (qe, abs(S), tot / h ** 2 + h * h * qe))

print("ln(1800^3) =", 1800 ** 3)
