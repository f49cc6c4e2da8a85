"""Independent brute-force oracle for the frozen values in the unit tests.

Everything here is naive and self-contained: plain enumeration over digit
boxes, integer arithmetic for F_p, and Z/p^K[pi]/E(pi) for prime fields.
Run it to regenerate the tables quoted in tests/*.cpp:

    python3 tests/support/oracle.py
"""

from fractions import Fraction
from itertools import product
from math import comb, factorial


def digits(t, base):
    out = []
    while t:
        out.append(t % base)
        t //= base
    return out or [0]


def weight(t, base):
    return sum(digits(t, base))


def rho(t, p):
    r = 1
    for d in digits(t, p):
        r *= factorial(d)
    return r


def member(D, b, q, level, u):
    N = q**level - 1
    Q = N // (q - 1)
    m = len(b)
    return all((sum(u[i] * D[i][j] for i in range(len(D))) + b[j] * Q) % N == 0 for j in range(m))


def sigma_scan(p, f, D, b, level):
    q = p**f
    N = q**level - 1
    best, arg = None, []
    for u in product(range(N + 1), repeat=len(D)):
        if not member(D, b, q, level, u):
            continue
        w = sum(weight(x, p) for x in u)
        if best is None or w < best:
            best, arg = w, [u]
        elif w == best:
            arg.append(u)
    return best, arg


def generator_scan(p, f, D, b, horizon):
    for level in range(1, horizon + 1):
        if sigma_scan(p, f, D, b, level)[0] is not None:
            return level
    return None


def box_cardinality(D):
    m = len(D[0])
    card = 1
    for j in range(m):
        hi = sum(r[j] for r in D if r[j] > 0)
        lo = sum(r[j] for r in D if r[j] < 0)
        card *= hi - lo + 1
    return card


def density_scan(p, f, D, b, horizon=None):
    """min sigma(l)/(f l (p-1)) over l up to the box cardinality (or horizon)."""
    if all(x == 0 for x in b):
        return Fraction(0)
    best = None
    top = box_cardinality(D) if horizon is None else min(horizon, box_cardinality(D))
    for level in range(1, top + 1):
        s = sigma_scan(p, f, D, b, level)[0]
        if s is None:
            continue
        v = Fraction(s, f * level * (p - 1))
        best = v if best is None or v < best else best
    return best


# --- Z/p^K[pi]/E(pi), prime field only -------------------------------------

def primitive_root(p):
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in range(2, p) if (p - 1) % r == 0 and all(r % s for s in range(2, r))):
            return g
    return 1


def teichmuller(a, p, K):
    mod = p**K
    x = a % mod
    for _ in range(K + 1):
        x = pow(x, p, mod)
    return x


class Ram:
    def __init__(self, p, K):
        self.p, self.K, self.mod = p, K, p**K
        self.e = p - 1

    def mul(self, a, b):
        e, mod, p = self.e, self.mod, self.p
        prod = [0] * (2 * e)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % mod
        # pi^(p-1) = -sum_{j=1}^{p-1} C(p,j) pi^(j-1)
        for k in range(2 * e - 1, e - 1, -1):
            c = prod[k]
            prod[k] = 0
            for j in range(1, p):
                prod[k - e + j - 1] = (prod[k - e + j - 1] - c * comb(p, j)) % mod
        return prod[:e]

    def vpi(self, a):
        best = None
        for i, x in enumerate(a):
            x %= self.mod
            if x == 0:
                continue
            v = 0
            while x % self.p == 0:
                x //= self.p
                v += 1
            cand = i + self.e * v
            best = cand if best is None or cand < best else best
        return best if best is not None and best < self.e * self.K else None


def charsum_prime_field(p, D, b, coeffs, K):
    """S_1 for f = 1 by direct enumeration of x in (F_p^x)^m."""
    R = Ram(p, K)
    g = primitive_root(p)
    zeta = teichmuller(g, p, K)
    zp = [[1] + [0] * (p - 2)]
    one_pi = [1, 1] + [0] * (p - 3) if p > 2 else [1 - 2]
    for _ in range(1, p):
        zp.append(R.mul(zp[-1], one_pi) if p > 2 else [(zp[-1][0] * -1) % R.mod])
    total = [0] * (p - 1)
    m = len(b)
    for ks in product(range(p - 1), repeat=m):
        xs = [pow(g, k, p) for k in ks]
        val = 0
        for i, row in enumerate(D):
            term = coeffs[i]
            for j, d in enumerate(row):
                term = term * pow(xs[j], d % (p - 1), p) % p
            val = (val + term) % p
        c = sum(bj * k for bj, k in zip(b, ks)) % (p - 1)
        w = pow(zeta, c, R.mod)
        for i in range(p - 1):
            total[i] = (total[i] + w * zp[val][i]) % R.mod
    return R.vpi(total)


def main():
    print("sigma tables")
    for p, f, D, b, levels in [
        (7, 1, [[1], [2]], [2], [1, 2]),
        (7, 1, [[1]], [2], [1, 2]),
        (3, 1, [[2]], [1], [1, 2, 3, 4]),
        (2, 3, [[1], [2], [3]], [1], [1]),
        (5, 1, [[1, 1], [1, 2]], [1, 1], [1, 2]),
        (3, 1, [[1, 1], [1, -1]], [1, 0], [1, 2]),
        (5, 1, [[1], [-1]], [2], [1, 2]),
    ]:
        for level in levels:
            s, G = sigma_scan(p, f, D, b, level)
            print(f"  p={p} f={f} D={D} b={b} l={level}: sigma={s} |G|={len(G)} G={G[:4]}")
    print("generators (scan, horizon 4)")
    for p, f, D, b in [
        (3, 1, [[2]], [1]),
        (7, 1, [[1], [2]], [2]),
        (7, 1, [[2]], [1]),
        (5, 1, [[2]], [1]),
        (5, 1, [[4]], [1]),
        (4 and 2, 2, [[3]], [1]),
        (3, 2, [[4]], [1]),
        (7, 1, [[1, 1]], [1, 1]),
        (7, 1, [[2, 0], [0, 3]], [1, 1]),
    ]:
        print(f"  p={p} f={f} D={D} b={b}: generator={generator_scan(p, f, D, b, 4)}")
    print("densities (scan up to box cardinality, or the stated horizon)")
    for p, f, D, b, h in [
        (3, 1, [[2]], [1], None),
        (7, 1, [[1]], [2], None),
        (7, 1, [[1], [2]], [2], None),
        (7, 1, [[1, 1]], [1, 1], None),
        (2, 3, [[1], [2], [3]], [1], 1),
        (5, 1, [[1], [-1]], [2], None),
        (3, 1, [[1, 1], [1, -1]], [1, 0], 4),
        (5, 1, [[1], [3]], [2], 4),
        (2, 1, [[1], [3]], [1], None),
        (3, 1, [[1], [-2]], [1], None),
    ]:
        print(f"  p={p} f={f} D={D} b={b} horizon={h}: density={density_scan(p, f, D, b, h)}")
    print("teichmuller")
    for p, a, K in [(7, 2, 2), (7, 6, 2), (7, 3, 3), (5, 2, 3), (11, 2, 2)]:
        print(f"  p={p} a={a} K={K}: {teichmuller(a, p, K)}")
    print("v_pi(S_1), prime fields, unit coefficients unless given")
    for p, D, b, a in [
        (7, [[1]], [2], [1]),
        (7, [[1], [2]], [2], [1, 1]),
        (7, [[1], [2]], [2], [3, 5]),
        (5, [[1]], [0], [1]),
        (5, [[1, 1], [1, 2]], [1, 1], [1, 1]),
        (5, [[1], [-1]], [2], [1, 1]),
        (5, [[1], [-1]], [2], [2, 3]),
        (3, [[1, 1], [1, -1]], [1, 0], [1, 2]),
        (7, [[1, 0], [0, 1], [1, 1]], [1, 3], [1, 1, 1]),
        (11, [[1], [3]], [4], [1, 2]),
    ]:
        s, G = sigma_scan(p, 1, D, b, 1)
        print(f"  p={p} D={D} b={b} a={a}: v_pi={charsum_prime_field(p, D, b, a, 8)} sigma={s} G={G}")
    print("stickelberger: v_pi(g(omega^b)) = sigma_p(p-1-b)")
    for p in (3, 5, 7):
        for bb in range(1, p - 1):
            print(f"  p={p} b={bb}: oracle={charsum_prime_field(p, [[1]], [bb], [1], 6)} formula={weight(p - 1 - bb, p)}")


if __name__ == "__main__":
    main()
