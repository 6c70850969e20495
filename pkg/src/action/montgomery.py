"""x-only arithmetic on Montgomery curves y^2 = x^3 + A x^2 + x over F_p.

Points are projective pairs (X : Z); the point at infinity has Z = 0.
"""

from typing import Dict, List, Optional, Tuple

ProjectivePoint = Tuple[int, int]

INFINITY: ProjectivePoint = (1, 0)


class PrimeField:
    """Arithmetic mod p with operation counters."""

    def __init__(self, p: int):
        self.p = p
        self.stats: Dict[str, int] = {"mul": 0, "sqr": 0, "add": 0, "inv": 0}

    def add(self, a: int, b: int) -> int:
        self.stats["add"] += 1
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        self.stats["add"] += 1
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        self.stats["mul"] += 1
        return a * b % self.p

    def sqr(self, a: int) -> int:
        self.stats["sqr"] += 1
        return a * a % self.p

    def inv(self, a: int) -> int:
        self.stats["inv"] += 1
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def legendre(self, a: int) -> int:
        """Quadratic character: 0, 1 or -1."""
        a %= self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def snapshot(self) -> Dict[str, int]:
        return dict(self.stats)

    def reset_stats(self) -> None:
        for key in self.stats:
            self.stats[key] = 0


def a24_of(F: PrimeField, A: int) -> int:
    """(A + 2) / 4."""
    return F.mul(F.add(A, 2), F.inv(4))


def curve_rhs(F: PrimeField, A: int, x: int) -> int:
    """x^3 + A x^2 + x."""
    x2 = F.sqr(x)
    return F.add(F.mul(x2, F.add(x, A)), x)


def is_infinity(P: ProjectivePoint, p: int) -> bool:
    return P[1] % p == 0


def to_affine(F: PrimeField, P: ProjectivePoint) -> int:
    return F.mul(P[0], F.inv(P[1]))


def xdbl(F: PrimeField, P: ProjectivePoint, a24: int) -> ProjectivePoint:
    X, Z = P
    t0 = F.sqr(F.add(X, Z))
    t1 = F.sqr(F.sub(X, Z))
    X2 = F.mul(t0, t1)
    t2 = F.sub(t0, t1)
    Z2 = F.mul(t2, F.add(t1, F.mul(a24, t2)))
    return X2, Z2


def xadd(F: PrimeField, P: ProjectivePoint, Q: ProjectivePoint,
         diff: ProjectivePoint) -> ProjectivePoint:
    """x(P + Q) from x(P), x(Q) and x(P - Q)."""
    XP, ZP = P
    XQ, ZQ = Q
    XD, ZD = diff
    u = F.mul(F.sub(XP, ZP), F.add(XQ, ZQ))
    v = F.mul(F.add(XP, ZP), F.sub(XQ, ZQ))
    return F.mul(ZD, F.sqr(F.add(u, v))), F.mul(XD, F.sqr(F.sub(u, v)))


def ladder(F: PrimeField, k: int, x: int, a24: int) -> ProjectivePoint:
    """Montgomery ladder for x([k]P) with x(P) = x != 0."""
    R0: ProjectivePoint = INFINITY
    R1: ProjectivePoint = (x % F.p, 1)
    base = R1
    for bit in bin(k)[2:] if k > 0 else "":
        if bit == "1":
            R0 = xadd(F, R0, R1, base)
            R1 = xdbl(F, R1, a24)
        else:
            R1 = xadd(F, R0, R1, base)
            R0 = xdbl(F, R0, a24)
    return R0


def kernel_multiples(F: PrimeField, Q: ProjectivePoint, a24: int, d: int) -> List[int]:
    """Affine x-coordinates of Q, 2Q, ..., dQ."""
    points = [Q]
    if d >= 2:
        points.append(xdbl(F, Q, a24))
    while len(points) < d:
        points.append(xadd(F, points[-1], Q, points[-2]))
    return [to_affine(F, P) for P in points]


def velu_codomain(F: PrimeField, A: int, kernel_xs: List[int]) -> int:
    """Montgomery coefficient of E / <P> for an odd-order kernel.

    ``kernel_xs`` holds x(iP) for i = 1..(l-1)/2. Over all nonzero kernel
    points the coefficient is pi * (A - 3 sigma); each x-coordinate appears
    twice there, hence tau^2 * (A - 6 sigma) over the half set.
    """
    tau = 1
    sigma = 0
    for xi in kernel_xs:
        tau = F.mul(tau, xi)
        sigma = F.add(sigma, F.sub(xi, F.inv(xi)))
    return F.mul(F.sqr(tau), F.sub(A, F.mul(6, sigma)))


def velu_map_x(F: PrimeField, kernel_xs: List[int], x: int) -> Optional[int]:
    """Image x-coordinate under the isogeny with the given kernel; None on the kernel."""
    x %= F.p
    result = x
    for xi in kernel_xs:
        denominator = F.sub(x, xi)
        if denominator == 0:
            return None
        result = F.mul(result, F.sqr(F.mul(F.sub(F.mul(x, xi), 1), F.inv(denominator))))
    return result
