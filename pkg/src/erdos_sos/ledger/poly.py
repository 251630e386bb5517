"""Integer polynomials in ``k`` of degree at most two, and their sign on a ray."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError


@dataclass(frozen=True)
class Poly:
    """``coeffs[i]`` is the coefficient of ``k**i``; trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs: int) -> "Poly":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def __call__(self, k):
        out = 0
        for c in reversed(self.coeffs):
            out = out * k + c
        return out

    def __add__(self, other: "Poly | int") -> "Poly":
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly | int") -> "Poly":
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> "Poly":
        return _lift(other) - self

    def __mul__(self, other: "Poly | int") -> "Poly":
        other = _lift(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __str__(self) -> str:
        out = ""
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            mono = {0: "", 1: "k"}.get(i, f"k^{i}")
            body = mono if abs(c) == 1 and mono else f"{abs(c)}{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"


def _lift(x: "Poly | int") -> Poly:
    return x if isinstance(x, Poly) else Poly((x,))


K = Poly.of(0, 1)

_TERM = re.compile(r"\s*([+-])?\s*(\d*)\s*(k?)\s*")
_SCALED = re.compile(r"^\s*(\d+)\s*\((.*)\)\s*$")


def parse_linear(text: str) -> Poly:
    """Parse ``"k+3"``, ``"2k-3"``, ``"2(k+1)"``, ``"-1"`` and friends."""
    m = _SCALED.match(text)
    if m:
        return int(m.group(1)) * parse_linear(m.group(2))
    src = text.strip()
    if not src:
        raise ParseError(f"empty term {text!r}")
    out = Poly(())
    pos = 0
    while pos < len(src):
        t = _TERM.match(src, pos)
        sign, digits, var = t.group(1), t.group(2), t.group(3)
        if t.end() == pos or not (digits or var) or (pos > 0 and sign is None):
            raise ParseError(f"cannot read linear term {text!r}", column=pos + 1)
        mag = int(digits) if digits else 1
        value = -mag if sign == "-" else mag
        out = out + (value * K if var else Poly((value,)))
        pos = t.end()
    return out


def parse_sum(text: str) -> int:
    """Integer sum as printed, e.g. ``"3+0-2"``."""
    p = parse_linear(text)
    if p.degree > 0:
        raise ParseError(f"expected an integer, got {text!r}")
    return p.coeff(0)


def _parity_from(k0: int, parity: int | None) -> int:
    if parity is None or k0 % 2 == parity:
        return k0
    return k0 + 1


def positive_from(p: Poly, k0: int, parity: int | None = None) -> bool:
    """Whether ``p(k) > 0`` for every integer ``k >= k0`` (of the given parity).

    Decided from the leading coefficient and the exact vertex, so the
    answer covers the whole infinite ray.
    """
    if p.degree > 2:
        raise ValueError("degree above two")
    a, b, c = p.coeff(2), p.coeff(1), p.coeff(0)
    start = _parity_from(k0, parity)
    step = 1 if parity is None else 2
    if a < 0 or (a == 0 and b < 0):
        return False
    if a == 0 and b == 0:
        return c > 0
    candidates = {start}
    if a > 0:
        vertex = Fraction(-b, 2 * a)
        if vertex > start:
            # nearest admissible integers on either side of the vertex
            below = start + (int((vertex - start) // step)) * step
            candidates |= {below, below + step}
    return all(p(k) > 0 for k in candidates)


def nonnegative_from(p: Poly, k0: int, parity: int | None = None) -> bool:
    # integer-valued: p >= 0 exactly when p + 1 > 0
    return positive_from(p + 1, k0, parity)
